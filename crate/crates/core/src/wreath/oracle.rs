//! Oracles for the quotient `G = F/L` (or a quotient of it).

use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::coset::{CosetTable, Transversal};
use crate::snf::{smith_normal_form, IntMatrix, SmithForm};
use crate::stallings::SubgroupGraph;
use crate::words::{collect_names, Alphabet, GenId, Letter, Word};
use crate::Presentation;

use super::WreathError;

/// Three-valued equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// A group generated by the images of the generators of `F`.
///
/// For exact oracles, `==` on `Elem` coincides with group equality (elements
/// are stored in a canonical form) and `equal` never answers `Unknown`.
pub trait GroupOracle {
    type Elem: Clone + Eq + Hash + Debug;

    /// Rank of the free group whose generators map into the oracle.
    fn ngens(&self) -> usize;
    fn identity(&self) -> Self::Elem;
    /// Image of generator `g` of `F`.
    fn generator(&self, g: GenId) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> Verdict;
    fn is_exact(&self) -> bool;
    /// `Some(true)` if the group is known to be finite.
    fn is_finite(&self) -> Option<bool>;
    /// A word of `F` mapping to `a`, if one can be found.
    fn preimage(&self, a: &Self::Elem) -> Option<Word>;
    fn render(&self, a: &Self::Elem) -> String;
    /// Backend descriptor, as accepted by [`AnyOracle::from_spec`].
    fn describe(&self) -> String;

    fn letter(&self, l: Letter) -> Self::Elem {
        let g = self.generator(l.gen());
        if l.is_inverse() {
            self.invert(&g)
        } else {
            g
        }
    }

    fn evaluate(&self, w: &Word) -> Self::Elem {
        w.letters()
            .iter()
            .fold(self.identity(), |acc, &l| self.multiply(&acc, &self.letter(l)))
    }

    /// Breadth-first enumeration of distinct elements with preimage words,
    /// extending by the letters `x, x⁻¹, y, y⁻¹, …` in order.
    fn enumerate(&self) -> Enumeration<'_, Self>
    where
        Self: Sized,
    {
        Enumeration {
            oracle: self,
            queue: VecDeque::from([(self.identity(), Word::identity())]),
            seen: HashSet::from([self.identity()]),
            seen_list: vec![self.identity()],
        }
    }
}

pub struct Enumeration<'a, O: GroupOracle> {
    oracle: &'a O,
    queue: VecDeque<(O::Elem, Word)>,
    seen: HashSet<O::Elem>,
    seen_list: Vec<O::Elem>,
}

impl<O: GroupOracle> Enumeration<'_, O> {
    fn is_new(&self, e: &O::Elem) -> bool {
        if self.oracle.is_exact() {
            !self.seen.contains(e)
        } else {
            // only certified-distinct elements are emitted
            self.seen_list
                .iter()
                .all(|s| self.oracle.equal(s, e) == Verdict::No)
        }
    }
}

impl<O: GroupOracle> Iterator for Enumeration<'_, O> {
    type Item = (O::Elem, Word);

    fn next(&mut self) -> Option<Self::Item> {
        let (e, w) = self.queue.pop_front()?;
        for col in 0..2 * self.oracle.ngens() {
            let l = Letter::from_index(col);
            let next = self.oracle.multiply(&e, &self.oracle.letter(l));
            if self.is_new(&next) {
                self.seen.insert(next.clone());
                self.seen_list.push(next.clone());
                self.queue.push_back((next, w.multiply(&Word::letter(l))));
            }
        }
        Some((e, w))
    }
}

/// `G = F/L` for finite index, elements are cosets of `L`.
#[derive(Clone, Debug)]
pub struct FiniteIndex {
    table: CosetTable,
    reps: Transversal,
}

impl FiniteIndex {
    pub fn new(table: CosetTable) -> Self {
        let reps = table.transversal();
        FiniteIndex { table, reps }
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }
}

impl GroupOracle for FiniteIndex {
    type Elem = usize;

    fn ngens(&self) -> usize {
        self.table.ngens()
    }
    fn identity(&self) -> usize {
        0
    }
    fn generator(&self, g: GenId) -> usize {
        self.table.act(0, Letter::pos(g))
    }
    fn multiply(&self, a: &usize, b: &usize) -> usize {
        // L is normal, so coset products are well defined
        self.table.trace(*a, &self.reps.reps[*b])
    }
    fn invert(&self, a: &usize) -> usize {
        self.table.coset_of(&self.reps.reps[*a].inverse())
    }
    fn equal(&self, a: &usize, b: &usize) -> Verdict {
        if a == b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn is_finite(&self) -> Option<bool> {
        Some(true)
    }
    fn preimage(&self, a: &usize) -> Option<Word> {
        self.reps.reps.get(*a).cloned()
    }
    fn render(&self, a: &usize) -> String {
        format!("L{}", a + 1)
    }
    fn describe(&self) -> String {
        "table".into()
    }
}

/// Images in an auxiliary free group; the kernel `L′` contains `L`.
#[derive(Clone, Debug)]
pub struct FreeImage {
    source: Alphabet,
    aux: Alphabet,
    images: Vec<Word>,
    image_graph: SubgroupGraph,
}

impl FreeImage {
    /// Parses `x->1,y->t` (names on the left are generators of `source`).
    /// Fails unless every relator maps to the identity.
    pub fn parse(map: &str, source: &Alphabet, relators: &[Word]) -> Result<Self, WreathError> {
        let bad = |msg: String| WreathError::Backend(msg);
        let mut rhs: Vec<Option<String>> = vec![None; source.len()];
        for part in map.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (l, r) = part
                .split_once("->")
                .ok_or_else(|| bad(format!("expected `gen->word`, got `{part}`")))?;
            let g = source
                .lookup(l.trim())
                .map_err(|e| bad(format!("left side of `{part}`: {e}")))?;
            if rhs[g as usize].replace(r.trim().to_string()).is_some() {
                return Err(bad(format!("generator `{}` mapped twice", l.trim())));
            }
        }
        let texts: Vec<&str> = rhs
            .iter()
            .enumerate()
            .map(|(g, r)| {
                r.as_deref()
                    .ok_or_else(|| bad(format!("no image for `{}`", source.name(g as GenId))))
            })
            .collect::<Result<_, _>>()?;
        let names = collect_names(&texts);
        let aux = if names.is_empty() {
            Alphabet::new(&["t"]).expect("valid name")
        } else {
            Alphabet::new(&names).map_err(|e| bad(e.to_string()))?
        };
        let images = texts
            .iter()
            .map(|t| aux.parse(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("image: {e}")))?;
        let oracle = Self::new(source.clone(), aux, images);
        for (i, r) in relators.iter().enumerate() {
            if !oracle.evaluate(r).is_identity() {
                return Err(bad(format!(
                    "relator #{} `{}` maps to `{}`, not 1",
                    i + 1,
                    source.format(r),
                    oracle.aux.format(&oracle.evaluate(r))
                )));
            }
        }
        Ok(oracle)
    }

    pub fn new(source: Alphabet, aux: Alphabet, images: Vec<Word>) -> Self {
        let image_graph = SubgroupGraph::build(aux.len(), &images);
        FreeImage {
            source,
            aux,
            images,
            image_graph,
        }
    }

    pub fn aux(&self) -> &Alphabet {
        &self.aux
    }
}

impl GroupOracle for FreeImage {
    type Elem = Word;

    fn ngens(&self) -> usize {
        self.images.len()
    }
    fn identity(&self) -> Word {
        Word::identity()
    }
    fn generator(&self, g: GenId) -> Word {
        self.images[g as usize].clone()
    }
    fn multiply(&self, a: &Word, b: &Word) -> Word {
        a.multiply(b)
    }
    fn invert(&self, a: &Word) -> Word {
        a.inverse()
    }
    fn equal(&self, a: &Word, b: &Word) -> Verdict {
        if a == b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn is_finite(&self) -> Option<bool> {
        // a subgroup of a free group is finite iff trivial
        Some(self.images.iter().all(Word::is_identity))
    }
    fn preimage(&self, a: &Word) -> Option<Word> {
        self.image_graph.express(a).ok()
    }
    fn render(&self, a: &Word) -> String {
        self.aux.format(a)
    }
    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(g, w)| format!("{}->{}", self.source.name(g as GenId), self.aux.format(w)))
            .collect();
        format!("free:{}", parts.join(","))
    }
}

/// The abelianization of `F/L`, in Smith coordinates: the first
/// `invariants.len()` coordinates are residues, the rest are free.
#[derive(Clone, Debug)]
pub struct Abelianized {
    snf: SmithForm,
    ngens: usize,
}

impl Abelianized {
    pub fn new(relators: &[Word], ngens: usize) -> Self {
        let m = crate::presentation::relation_matrix(relators, ngens);
        Abelianized {
            snf: smith_normal_form(&m),
            ngens,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.snf.free_rank
    }

    fn normalize(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (x, d) in v.iter_mut().zip(&self.snf.invariants) {
            *x = x.mod_floor(d);
        }
        v
    }
}

impl GroupOracle for Abelianized {
    type Elem = Vec<BigInt>;

    fn ngens(&self) -> usize {
        self.ngens
    }
    fn identity(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens]
    }
    fn generator(&self, g: GenId) -> Vec<BigInt> {
        let r = &self.snf.right;
        self.normalize((0..self.ngens).map(|c| r[(g as usize, c)].clone()).collect())
    }
    fn multiply(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        self.normalize(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }
    fn invert(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        self.normalize(a.iter().map(|x| -x).collect())
    }
    fn equal(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Verdict {
        if a == b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn is_finite(&self) -> Option<bool> {
        Some(self.snf.free_rank == 0)
    }
    fn preimage(&self, a: &Vec<BigInt>) -> Option<Word> {
        // exponent vector e with e · right = a
        let row = IntMatrix::from_rows(std::slice::from_ref(a), self.ngens);
        let e = row.mul(&self.snf.right_inverse);
        let mut letters = Vec::new();
        for g in 0..self.ngens {
            let k = e[(0, g)].to_i64()?;
            let l = Letter::new(g as GenId, k < 0);
            letters.extend(std::iter::repeat_n(l, k.unsigned_abs() as usize));
        }
        Some(Word::reduce(letters))
    }
    fn render(&self, a: &Vec<BigInt>) -> String {
        let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
    fn describe(&self) -> String {
        "abelian".into()
    }
}

/// Any shipped backend, behind one element type.
#[derive(Clone, Debug)]
pub enum AnyOracle {
    Table(FiniteIndex),
    Free(FreeImage),
    Abelian(Abelianized),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyElem {
    Coset(usize),
    Free(Word),
    Lattice(Vec<BigInt>),
}

impl AnyOracle {
    /// `table`, `abelian`, or `free:<map>`. The table backend needs a
    /// complete coset table for the presentation.
    pub fn from_spec(
        spec: &str,
        p: &Presentation,
        table: impl FnOnce() -> Result<CosetTable, WreathError>,
    ) -> Result<Self, WreathError> {
        let spec = spec.trim();
        if spec == "table" {
            Ok(AnyOracle::Table(FiniteIndex::new(table()?)))
        } else if spec == "abelian" {
            Ok(AnyOracle::Abelian(Abelianized::new(&p.relators(), p.rank())))
        } else if let Some(map) = spec.strip_prefix("free:") {
            Ok(AnyOracle::Free(FreeImage::parse(map, &p.alphabet, &p.relators())?))
        } else {
            Err(WreathError::Backend(format!(
                "unknown backend `{spec}` (expected table, abelian or free:<map>)"
            )))
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $o:ident => $e:expr) => {
        match $self {
            AnyOracle::Table($o) => $e,
            AnyOracle::Free($o) => $e,
            AnyOracle::Abelian($o) => $e,
        }
    };
}

impl GroupOracle for AnyOracle {
    type Elem = AnyElem;

    fn ngens(&self) -> usize {
        dispatch!(self, o => o.ngens())
    }
    fn identity(&self) -> AnyElem {
        match self {
            AnyOracle::Table(o) => AnyElem::Coset(o.identity()),
            AnyOracle::Free(o) => AnyElem::Free(o.identity()),
            AnyOracle::Abelian(o) => AnyElem::Lattice(o.identity()),
        }
    }
    fn generator(&self, g: GenId) -> AnyElem {
        match self {
            AnyOracle::Table(o) => AnyElem::Coset(o.generator(g)),
            AnyOracle::Free(o) => AnyElem::Free(o.generator(g)),
            AnyOracle::Abelian(o) => AnyElem::Lattice(o.generator(g)),
        }
    }
    fn multiply(&self, a: &AnyElem, b: &AnyElem) -> AnyElem {
        match (self, a, b) {
            (AnyOracle::Table(o), AnyElem::Coset(a), AnyElem::Coset(b)) => AnyElem::Coset(o.multiply(a, b)),
            (AnyOracle::Free(o), AnyElem::Free(a), AnyElem::Free(b)) => AnyElem::Free(o.multiply(a, b)),
            (AnyOracle::Abelian(o), AnyElem::Lattice(a), AnyElem::Lattice(b)) => {
                AnyElem::Lattice(o.multiply(a, b))
            }
            _ => panic!("element from a different backend"),
        }
    }
    fn invert(&self, a: &AnyElem) -> AnyElem {
        match (self, a) {
            (AnyOracle::Table(o), AnyElem::Coset(a)) => AnyElem::Coset(o.invert(a)),
            (AnyOracle::Free(o), AnyElem::Free(a)) => AnyElem::Free(o.invert(a)),
            (AnyOracle::Abelian(o), AnyElem::Lattice(a)) => AnyElem::Lattice(o.invert(a)),
            _ => panic!("element from a different backend"),
        }
    }
    fn equal(&self, a: &AnyElem, b: &AnyElem) -> Verdict {
        match (self, a, b) {
            (AnyOracle::Table(o), AnyElem::Coset(a), AnyElem::Coset(b)) => o.equal(a, b),
            (AnyOracle::Free(o), AnyElem::Free(a), AnyElem::Free(b)) => o.equal(a, b),
            (AnyOracle::Abelian(o), AnyElem::Lattice(a), AnyElem::Lattice(b)) => o.equal(a, b),
            _ => Verdict::Unknown,
        }
    }
    fn is_exact(&self) -> bool {
        dispatch!(self, o => o.is_exact())
    }
    fn is_finite(&self) -> Option<bool> {
        dispatch!(self, o => o.is_finite())
    }
    fn preimage(&self, a: &AnyElem) -> Option<Word> {
        match (self, a) {
            (AnyOracle::Table(o), AnyElem::Coset(a)) => o.preimage(a),
            (AnyOracle::Free(o), AnyElem::Free(a)) => o.preimage(a),
            (AnyOracle::Abelian(o), AnyElem::Lattice(a)) => o.preimage(a),
            _ => None,
        }
    }
    fn render(&self, a: &AnyElem) -> String {
        match (self, a) {
            (AnyOracle::Table(o), AnyElem::Coset(a)) => o.render(a),
            (AnyOracle::Free(o), AnyElem::Free(a)) => o.render(a),
            (AnyOracle::Abelian(o), AnyElem::Lattice(a)) => o.render(a),
            _ => format!("{a:?}"),
        }
    }
    fn describe(&self) -> String {
        dispatch!(self, o => o.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, EnumerationConfig};

    fn e3() -> Presentation {
        Presentation::from_strs(&["x", "y"], &["x"], &["x"]).unwrap()
    }

    #[test]
    fn free_backend_parses_and_checks() {
        let p = e3();
        let o = FreeImage::parse("x->1, y->t", &p.alphabet, &p.relators()).unwrap();
        assert_eq!(o.describe(), "free:x->1,y->t");
        assert_eq!(o.is_finite(), Some(false));
        let y = p.alphabet.parse("y^2 x y^-3").unwrap();
        assert_eq!(o.render(&o.evaluate(&y)), "t^-1");
        assert!(FreeImage::parse("x->t, y->t", &p.alphabet, &p.relators()).is_err());
        assert!(FreeImage::parse("x->1", &p.alphabet, &p.relators()).is_err());
        let t2 = o.aux().parse("t^2").unwrap();
        assert_eq!(o.preimage(&t2), Some(p.alphabet.parse("y^2").unwrap()));
    }

    #[test]
    fn free_enumeration_order() {
        let p = e3();
        let o = FreeImage::parse("x->1,y->t", &p.alphabet, &p.relators()).unwrap();
        let got: Vec<(String, String)> = o
            .enumerate()
            .take(5)
            .map(|(e, w)| (o.render(&e), p.alphabet.format(&w)))
            .collect();
        let want = [("1", "1"), ("t", "y"), ("t^-1", "y^-1"), ("t^2", "y^2"), ("t^-2", "y^-2")];
        assert_eq!(
            got,
            want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>()
        );
    }

    #[test]
    fn table_backend_is_the_quotient() {
        // S3
        let p = Presentation::from_strs(&["a", "b"], &["a^2"], &["b^3", "(ab)^2"]).unwrap();
        let t = enumerate(&p, &EnumerationConfig::default()).unwrap();
        let o = FiniteIndex::new(t);
        let all: Vec<_> = o.enumerate().collect();
        assert_eq!(all.len(), 6);
        for (e, w) in &all {
            assert_eq!(o.evaluate(w), *e);
            assert_eq!(o.multiply(e, &o.invert(e)), 0);
        }
        // associativity on all triples
        for (a, _) in &all {
            for (b, _) in &all {
                for (c, _) in &all {
                    assert_eq!(o.multiply(&o.multiply(a, b), c), o.multiply(a, &o.multiply(b, c)));
                }
            }
        }
    }

    #[test]
    fn abelian_backend() {
        let p = Presentation::from_strs(&["x", "y"], &["x^2 y^4"], &["y^6"]).unwrap();
        let o = Abelianized::new(&p.relators(), 2);
        assert_eq!(o.free_rank(), 0);
        let elems: Vec<_> = o.enumerate().collect();
        // Z² / ⟨(2,4),(0,6)⟩ has order 12
        assert_eq!(elems.len(), 12);
        for (e, w) in &elems {
            assert_eq!(o.evaluate(&o.preimage(e).unwrap()), *e);
            assert_eq!(o.evaluate(w), *e);
        }
        let e3 = e3();
        let o = Abelianized::new(&e3.relators(), 2);
        assert_eq!(o.is_finite(), Some(false));
    }

    #[test]
    fn any_oracle_specs() {
        let p = e3();
        let o = AnyOracle::from_spec("free:x->1,y->t", &p, || unreachable!()).unwrap();
        assert_eq!(o.describe(), "free:x->1,y->t");
        assert!(matches!(
            AnyOracle::from_spec("bogus", &p, || unreachable!()),
            Err(WreathError::Backend(_))
        ));
        let o = AnyOracle::from_spec("abelian", &p, || unreachable!()).unwrap();
        assert_eq!(o.is_finite(), Some(false));
    }
}
