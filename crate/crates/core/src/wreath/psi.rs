//! The map `ψ: F → W ⋊ G`, `x ↦ x̃ a_{(x,1)}`, and the queries built on it.
//!
//! Elements of `W ⋊ G` are written `g · w`; conjugating `a_{(x,h)}` by
//! `g ∈ G` gives `a_{(x,hg)}`.

use serde::{Deserialize, Serialize};

use crate::nilpotent::magnus;
use crate::words::{GenId, Letter, Word};

use super::oracle::{GroupOracle, Verdict};
use super::WreathError;

/// `a_{(gen, h)}^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiLetter<E> {
    pub gen: GenId,
    pub h: E,
    pub inverse: bool,
}

/// `g_part · tail`, with `tail` a freely reduced word in the `a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathImage<E> {
    pub g_part: E,
    pub tail: Vec<BiLetter<E>>,
}

fn same<O: GroupOracle>(o: &O, a: &O::Elem, b: &O::Elem) -> Result<bool, WreathError> {
    match o.equal(a, b) {
        Verdict::Yes => Ok(true),
        Verdict::No => Ok(false),
        Verdict::Unknown => Err(WreathError::OracleUnknown),
    }
}

fn push_reduced<O: GroupOracle>(
    o: &O,
    tail: &mut Vec<BiLetter<O::Elem>>,
    l: BiLetter<O::Elem>,
) -> Result<(), WreathError> {
    if let Some(last) = tail.last() {
        if last.gen == l.gen && last.inverse != l.inverse && same(o, &last.h, &l.h)? {
            tail.pop();
            return Ok(());
        }
    }
    tail.push(l);
    Ok(())
}

/// Distinct elements, keeping an element unless it is certified equal to
/// an earlier one.
pub fn dedup<O: GroupOracle>(o: &O, elems: impl IntoIterator<Item = O::Elem>) -> Vec<O::Elem> {
    let mut out: Vec<O::Elem> = Vec::new();
    for e in elems {
        if !out.iter().any(|x| o.equal(x, &e) == Verdict::Yes) {
            out.push(e);
        }
    }
    out
}

impl<E: Clone> WreathImage<E> {
    /// Second components occurring in the tail.
    pub fn support<O: GroupOracle<Elem = E>>(&self, o: &O) -> Vec<E> {
        dedup(o, self.tail.iter().map(|l| l.h.clone()))
    }

    /// The tail conjugated by `g ∈ G`: every second component `h ↦ hg`.
    pub fn shifted<O: GroupOracle<Elem = E>>(&self, g: &E, o: &O) -> WreathImage<E> {
        WreathImage {
            g_part: self.g_part.clone(),
            tail: self
                .tail
                .iter()
                .map(|l| BiLetter {
                    gen: l.gen,
                    h: o.multiply(&l.h, g),
                    inverse: l.inverse,
                })
                .collect(),
        }
    }
}

pub fn psi_expand<O: GroupOracle>(f: &Word, o: &O) -> Result<WreathImage<O::Elem>, WreathError> {
    let ls = f.letters();
    // suffix[j] = image of letters j.. of f
    let mut suffix = vec![o.identity(); ls.len() + 1];
    for j in (0..ls.len()).rev() {
        suffix[j] = o.multiply(&o.letter(ls[j]), &suffix[j + 1]);
    }
    let mut tail = Vec::with_capacity(ls.len());
    for (j, &l) in ls.iter().enumerate() {
        // x ↦ x̃ a_{(x,1)};  x⁻¹ ↦ x̃⁻¹ a_{(x, x̃⁻¹)}⁻¹
        let h = if l.is_inverse() {
            suffix[j].clone()
        } else {
            suffix[j + 1].clone()
        };
        push_reduced(
            o,
            &mut tail,
            BiLetter {
                gen: l.gen(),
                h,
                inverse: l.is_inverse(),
            },
        )?;
    }
    Ok(WreathImage {
        g_part: suffix[0].clone(),
        tail,
    })
}

/// Interns bi-indices as variables so tails become ordinary words.
#[derive(Clone, Debug)]
pub struct VarTable<E> {
    keys: Vec<(GenId, E)>,
}

impl<E: Clone> Default for VarTable<E> {
    fn default() -> Self {
        VarTable { keys: Vec::new() }
    }
}

impl<E: Clone> VarTable<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, v: u32) -> &(GenId, E) {
        &self.keys[v as usize]
    }

    pub fn intern<O: GroupOracle<Elem = E>>(&mut self, o: &O, gen: GenId, h: &E) -> Result<u32, WreathError> {
        for (i, (g, e)) in self.keys.iter().enumerate() {
            if *g == gen && same(o, e, h)? {
                return Ok(i as u32);
            }
        }
        self.keys.push((gen, h.clone()));
        Ok(self.keys.len() as u32 - 1)
    }

    pub fn tail_word<O: GroupOracle<Elem = E>>(
        &mut self,
        o: &O,
        img: &WreathImage<E>,
    ) -> Result<Word, WreathError> {
        let mut ls = Vec::with_capacity(img.tail.len());
        for l in &img.tail {
            ls.push(Letter::new(self.intern(o, l.gen, &l.h)?, l.inverse));
        }
        Ok(Word::reduce(ls))
    }
}

/// Whether the `ψ`-tail vanishes in the free `c`-nilpotent group.
pub fn tail_trivial<O: GroupOracle>(img: &WreathImage<O::Elem>, o: &O, c: usize) -> Result<bool, WreathError> {
    let w = VarTable::new().tail_word(o, img)?;
    Ok(magnus(&w, c).is_identity())
}

/// `f ∈ γ_{c+1}(L)`, for `L` the kernel of the oracle map.
pub fn gamma_membership<O: GroupOracle>(f: &Word, o: &O, c: usize) -> Result<bool, WreathError> {
    if !o.is_exact() {
        return Err(WreathError::NotExact);
    }
    let img = psi_expand(f, o)?;
    if !same(o, &img.g_part, &o.identity())? {
        return Ok(false);
    }
    tail_trivial(&img, o, c)
}

/// A symmetric finite subset of `G` containing the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSet<E> {
    pub elements: Vec<E>,
}

impl<E: Clone> ZSet<E> {
    /// `Yes` if `q ∈ Z` is certified, `No` if certified absent.
    pub fn contains<O: GroupOracle<Elem = E>>(&self, o: &O, q: &E) -> Verdict {
        let mut unknown = false;
        for z in &self.elements {
            match o.equal(z, q) {
                Verdict::Yes => return Verdict::Yes,
                Verdict::Unknown => unknown = true,
                Verdict::No => {}
            }
        }
        if unknown {
            Verdict::Unknown
        } else {
            Verdict::No
        }
    }

    pub fn is_symmetric<O: GroupOracle<Elem = E>>(&self, o: &O) -> bool {
        self.elements
            .iter()
            .all(|z| self.contains(o, &o.invert(z)) == Verdict::Yes)
    }

    /// Whether every pair of bi-indices of `img` is `Z`-close.
    pub fn covers<O: GroupOracle<Elem = E>>(&self, o: &O, img: &WreathImage<E>) -> bool {
        let sup = img.support(o);
        sup.iter().all(|h| {
            sup.iter()
                .all(|k| self.contains(o, &o.multiply(h, &o.invert(k))) == Verdict::Yes)
        })
    }
}

/// For each `y ∈ Y`, all quotients `h k⁻¹` of second components within its
/// `ψ`-tail, together with the identity. Each `y` then lies in the kernel
/// of `ψ_Z`: its tail lives on pairwise `Z`-close generators, where the
/// defining relations of `W_Z` are those of the free `c`-nilpotent group.
pub fn z_from<O: GroupOracle>(y: &[Word], o: &O, c: usize) -> Result<ZSet<O::Elem>, WreathError> {
    let mut raw = vec![o.identity()];
    for (i, w) in y.iter().enumerate() {
        if !gamma_membership(w, o, c)? {
            return Err(WreathError::NotInGamma { index: i, c });
        }
        let sup = psi_expand(w, o)?.support(o);
        for h in &sup {
            for k in &sup {
                raw.push(o.multiply(h, &o.invert(k)));
            }
        }
    }
    Ok(ZSet {
        elements: dedup(o, raw),
    })
}

/// The first enumerated `g ∈ G` such that every bi-index of the shifted
/// `u` is certified `Z`-distant from every bi-index of `v`.
#[derive(Clone, Debug)]
pub struct Shift<E> {
    pub g: E,
    pub word: Word,
    /// Candidates inspected, including the accepted one.
    pub examined: usize,
}

fn distant<O: GroupOracle>(o: &O, u: &[O::Elem], v: &[O::Elem], z: &ZSet<O::Elem>) -> bool {
    u.iter().all(|h| {
        v.iter()
            .all(|k| z.contains(o, &o.multiply(h, &o.invert(k))) == Verdict::No)
    })
}

pub fn find_shift<O: GroupOracle>(
    u: &WreathImage<O::Elem>,
    v: &WreathImage<O::Elem>,
    z: &ZSet<O::Elem>,
    o: &O,
    budget: usize,
) -> Result<Shift<O::Elem>, WreathError> {
    let su = u.support(o);
    let sv = v.support(o);
    if su.is_empty() || sv.is_empty() {
        return Err(WreathError::EmptySupport);
    }
    for (n, (g, word)) in o.enumerate().take(budget).enumerate() {
        let shifted: Vec<O::Elem> = su.iter().map(|h| o.multiply(h, &g)).collect();
        if distant(o, &shifted, &sv, z) {
            return Ok(Shift {
                g,
                word,
                examined: n + 1,
            });
        }
    }
    Err(WreathError::BudgetExhausted { budget })
}

/// Outcomes of the three hypotheses of the non-commutation lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    /// (i) cross-supports pairwise `Z`-distant.
    pub distant: bool,
    /// (ii) the shifted `u`-tail is nontrivial at class `c`.
    pub u_nontrivial: bool,
    /// (iii) the `v`-tail is nontrivial at class `c`.
    pub v_nontrivial: bool,
}

impl Lemma2Report {
    pub fn passed(&self) -> bool {
        self.distant && self.u_nontrivial && self.v_nontrivial
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.distant {
            out.push("(i) supports are not Z-distant");
        }
        if !self.u_nontrivial {
            out.push("(ii) u-tail is trivial");
        }
        if !self.v_nontrivial {
            out.push("(iii) v-tail is trivial");
        }
        out
    }
}

pub fn lemma2_certify<O: GroupOracle>(
    u_shifted: &WreathImage<O::Elem>,
    v: &WreathImage<O::Elem>,
    z: &ZSet<O::Elem>,
    c: usize,
    o: &O,
) -> Result<Lemma2Report, WreathError> {
    let su = u_shifted.support(o);
    let sv = v.support(o);
    Ok(Lemma2Report {
        distant: !su.is_empty() && !sv.is_empty() && distant(o, &su, &sv, z),
        u_nontrivial: !tail_trivial(u_shifted, o, c)?,
        v_nontrivial: !tail_trivial(v, o, c)?,
    })
}
