//! Magnus embedding into truncated non-commutative integer power series.
//!
//! A variable `v` maps to `1 + t_v`, its inverse to the truncated geometric
//! series. Truncating at degree `c` gives a faithful image of the free
//! `c`-nilpotent group: a word maps to `1` at class `c` iff it lies in
//! `γ_{c+1}` of the free group.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::{Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NilpotentError {
    #[error("class mismatch: {0} vs {1}")]
    ClassMismatch(usize, usize),
    #[error("series has constant term {0}, not 1; it is not a unit of the Magnus group")]
    NotInvertible(String),
    #[error("freely nontrivial word of length {0} has trivial Magnus image at class {0}")]
    DegreeGuard(usize),
    #[error("rewriting into a basis of L failed: {0}")]
    Rewrite(String),
    #[error("the {0} side is trivial in L")]
    TrivialSide(&'static str),
    #[error("both sides lie in γ₂(L) (degrees {0} and {1}); L would be trivial")]
    BothDeep(usize, usize),
}

/// A monomial `t_{v₁} t_{v₂} ⋯ t_{v_k}`; ordered by degree, then
/// lexicographically by variable index.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub Vec<u32>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

/// A series truncated above degree `class`. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    class: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|v| format!("t{v}")))
    }
}

impl TruncatedSeries {
    pub fn one(class: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::default(), BigInt::one());
        TruncatedSeries { class, terms }
    }

    /// `1 + t_v`.
    pub fn variable(v: u32, class: usize) -> Self {
        let mut s = Self::one(class);
        if class >= 1 {
            s.terms.insert(Monomial(vec![v]), BigInt::one());
        }
        s
    }

    /// Builds a series from explicit terms; terms above `class` are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, i64)>>(class: usize, terms: I) -> Self {
        let mut s = TruncatedSeries {
            class,
            terms: BTreeMap::new(),
        };
        for (m, c) in terms {
            if m.len() <= class {
                s.add_term(Monomial(m), BigInt::from(c));
            }
        }
        s
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial(m.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, NilpotentError> {
        if self.class != other.class {
            return Err(NilpotentError::ClassMismatch(self.class, other.class));
        }
        let mut out = TruncatedSeries {
            class: self.class,
            terms: BTreeMap::new(),
        };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() > self.class {
                    // terms are sorted by degree
                    break;
                }
                let mut m = m1.0.clone();
                m.extend_from_slice(&m2.0);
                out.add_term(Monomial(m), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Inverse in the unit group; requires constant term 1.
    pub fn inverse(&self) -> Result<TruncatedSeries, NilpotentError> {
        let c0 = self.coefficient(&[]);
        if !c0.is_one() {
            return Err(NilpotentError::NotInvertible(c0.to_string()));
        }
        // (1 + x)⁻¹ = Σ (−x)^k
        let mut neg_x = self.clone();
        neg_x.terms.remove(&Monomial::default());
        for c in neg_x.terms.values_mut() {
            *c = -&*c;
        }
        let mut acc = Self::one(self.class);
        let mut power = Self::one(self.class);
        for _ in 0..self.class {
            power = power.mul(&neg_x)?;
            if power.terms.is_empty() {
                break;
            }
            for (m, c) in &power.terms {
                acc.add_term(m.clone(), c.clone());
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1 && self.coefficient(&[]).is_one()
    }

    /// Lowest degree of a nonzero non-constant term, if any.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .find(|&d| d > 0)
    }

    /// Right-multiplies by the image of one letter, in place.
    fn push_letter(&mut self, l: Letter) {
        let v = l.gen();
        let c = self.class;
        let old = std::mem::take(&mut self.terms);
        let mut out = BTreeMap::new();
        for (m, coef) in old {
            let room = c - m.degree();
            let steps = if l.is_inverse() { room } else { room.min(1) };
            let mut mono = m.0;
            for k in 0..=steps {
                if k > 0 {
                    mono.push(v);
                }
                let term = if l.is_inverse() && k % 2 == 1 {
                    -&coef
                } else {
                    coef.clone()
                };
                let e = out.entry(Monomial(mono.clone())).or_insert_with(BigInt::zero);
                *e += term;
            }
        }
        out.retain(|_, coef: &mut BigInt| !coef.is_zero());
        self.terms = out;
    }

    /// Renders with a variable-naming callback, e.g. `1 + t_x t_y - t_y t_x`.
    pub fn render<F: Fn(u32) -> String>(&self, name: F) -> String {
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m.0.iter().map(|&v| name(v)).collect();
            if m.0.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push(' ');
                }
                s.push_str(&vars.join(" "));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Magnus image of `w` truncated at degree `class`. Generator `i` of `w`
/// is the variable `t_i`.
pub fn magnus(w: &Word, class: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(class);
    for &l in w.letters() {
        s.push_letter(l);
    }
    s
}

/// Position of an element in the lower central series of a free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LcsDegree {
    Finite(usize),
    /// The identity lies in every term.
    Infinite,
}

impl LcsDegree {
    pub fn finite(self) -> Option<usize> {
        match self {
            LcsDegree::Finite(d) => Some(d),
            LcsDegree::Infinite => None,
        }
    }
}

impl fmt::Display for LcsDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsDegree::Finite(d) => write!(f, "{d}"),
            LcsDegree::Infinite => write!(f, "infinite"),
        }
    }
}

/// The largest `d` with `w ∈ γ_d` of the free group on the letters of `w`.
pub fn lcs_degree(w: &Word) -> Result<LcsDegree, NilpotentError> {
    if w.is_identity() {
        return Ok(LcsDegree::Infinite);
    }
    // Degree d shows up first at class d: lower classes are exact truncations.
    for c in 1..=w.len() {
        if !magnus(w, c).is_identity() {
            return Ok(LcsDegree::Finite(c));
        }
    }
    Err(NilpotentError::DegreeGuard(w.len()))
}

/// The class `c` of the pair `(M, N)` relative to `L = MN`, with the sides
/// oriented so that `N ⊄ γ₂(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub c: usize,
    /// `true` when the input roles of `M` and `N` were exchanged.
    pub swapped: bool,
    /// Degree of the (oriented) `M` side; equals `c`.
    pub m_degree: usize,
    /// Degree of the (oriented) `N` side; always 1.
    pub n_degree: usize,
    /// Index into the oriented `M` side's word list of a word of degree `c`.
    pub m_witness: usize,
    /// Index into the oriented `N` side's word list of a word of degree 1.
    pub n_witness: usize,
}

/// Computes `c` from the lower-central degrees in `L` of the normal
/// generators. `rewrite` must express a member of `L` as a word in some
/// free basis of `L` (or, equivalently for degrees, any word whose free
/// lower-central position matches).
pub fn compute_class<F, E>(a: &[Word], b: &[Word], mut rewrite: F) -> Result<ClassInfo, NilpotentError>
where
    F: FnMut(&Word) -> Result<Word, E>,
    E: fmt::Display,
{
    let mut side = |ws: &[Word], name: &'static str| -> Result<(usize, usize), NilpotentError> {
        let mut best: Option<(usize, usize)> = None;
        for (i, w) in ws.iter().enumerate() {
            let r = rewrite(w).map_err(|e| NilpotentError::Rewrite(e.to_string()))?;
            if let LcsDegree::Finite(d) = lcs_degree(&r)? {
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, i));
                }
            }
        }
        best.ok_or(NilpotentError::TrivialSide(name))
    };
    let (dm, im) = side(a, "M")?;
    let (dn, in_) = side(b, "N")?;
    if dm >= 2 && dn >= 2 {
        return Err(NilpotentError::BothDeep(dm, dn));
    }
    if dn >= 2 {
        // dm == 1: exchange roles so the N side escapes γ₂(L)
        return Ok(ClassInfo {
            c: dn,
            swapped: true,
            m_degree: dn,
            n_degree: dm,
            m_witness: in_,
            n_witness: im,
        });
    }
    Ok(ClassInfo {
        c: dm,
        swapped: false,
        m_degree: dm,
        n_degree: dn,
        m_witness: im,
        n_witness: in_,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    fn xy() -> Alphabet {
        Alphabet::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn magnus_examples() {
        let a = xy();
        let x = a.parse("x").unwrap();
        assert_eq!(magnus(&x, 2), TruncatedSeries::from_terms(2, [(vec![], 1), (vec![0], 1)]));
        assert_eq!(
            magnus(&x.inverse(), 2),
            TruncatedSeries::from_terms(2, [(vec![], 1), (vec![0], -1), (vec![0, 0], 1)])
        );
        let c = a.parse("[x,y]").unwrap();
        assert_eq!(
            magnus(&c, 2),
            TruncatedSeries::from_terms(2, [(vec![], 1), (vec![0, 1], 1), (vec![1, 0], -1)])
        );
    }

    #[test]
    fn unit_group_examples() {
        let a = xy();
        let x = a.parse("x").unwrap();
        let p = magnus(&x, 2).mul(&magnus(&x.inverse(), 2)).unwrap();
        assert!(p.is_identity());
        let inv = TruncatedSeries::variable(0, 3).inverse().unwrap();
        assert_eq!(
            inv,
            TruncatedSeries::from_terms(3, [(vec![], 1), (vec![0], -1), (vec![0, 0], 1), (vec![0, 0, 0], -1)])
        );
        let c = a.parse("[x,y]").unwrap();
        assert!(magnus(&c, 1).is_identity());
        assert!(!magnus(&c, 2).is_identity());
    }

    #[test]
    fn errors() {
        let s2 = TruncatedSeries::one(2);
        let s3 = TruncatedSeries::one(3);
        assert_eq!(s2.mul(&s3), Err(NilpotentError::ClassMismatch(2, 3)));
        let two = TruncatedSeries::from_terms(2, [(vec![], 2)]);
        assert!(matches!(two.inverse(), Err(NilpotentError::NotInvertible(_))));
    }

    #[test]
    fn lcs_degree_examples() {
        let a = xy();
        let d = |s: &str| lcs_degree(&a.parse(s).unwrap()).unwrap();
        assert_eq!(d("x"), LcsDegree::Finite(1));
        assert_eq!(d("[x,y]"), LcsDegree::Finite(2));
        assert_eq!(d("[[x,y],y]"), LcsDegree::Finite(3));
        assert_eq!(d("[[[x,y],y],y]"), LcsDegree::Finite(4));
        assert_eq!(d("1"), LcsDegree::Infinite);
        assert_eq!(d("x^2 y^-2"), LcsDegree::Finite(1));
    }

    #[test]
    fn class_orientation() {
        let id = |w: &Word| Ok::<Word, String>(w.clone());
        let a = xy();
        let x = a.parse("x").unwrap();
        let info = compute_class(&[x.clone()], &[x.clone()], id).unwrap();
        assert_eq!((info.c, info.swapped), (1, false));

        let deep = a.parse("[x,y]").unwrap();
        let info = compute_class(&[x.clone()], &[deep.clone()], id).unwrap();
        assert_eq!((info.c, info.swapped, info.n_degree), (2, true, 1));
        let info = compute_class(&[deep.clone()], &[x.clone()], id).unwrap();
        assert_eq!((info.c, info.swapped), (2, false));
        assert_eq!(
            compute_class(&[deep.clone()], &[deep.clone()], id),
            Err(NilpotentError::BothDeep(2, 2))
        );
        let fail = |_: &Word| Err::<Word, String>("nope".into());
        assert!(matches!(
            compute_class(&[x.clone()], &[x], fail),
            Err(NilpotentError::Rewrite(_))
        ));
    }

    #[test]
    fn render() {
        let a = xy();
        let s = magnus(&a.parse("[x,y]").unwrap(), 2);
        assert_eq!(s.render(|v| format!("t_{}", a.name(v))), "1 + t_x t_y - t_y t_x");
    }
}
