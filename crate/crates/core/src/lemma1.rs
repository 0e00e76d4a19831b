//! The finite-index direction: lifted generators `M₁ ⊆ M`, `N₁ ⊆ N` with
//! `⟨M₁ ∪ N₁⟩ = L`, the relator set `R = {[m^h, n]}`, and certificates
//! writing any `[m^f, n]` as a product of conjugates of `R`.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coset::{CosetTable, Transversal};
use crate::stallings::SubgroupGraph;
use crate::words::{Alphabet, Letter, Word, WordError};

#[derive(Debug, Error)]
pub enum Lemma1Error {
    #[error(
        "saturation did not reach L within {rounds} rounds \
         (generated subgroup: {vertices} vertices, rank {rank}; L: index {index}, rank {target_rank})"
    )]
    RoundsExceeded {
        rounds: usize,
        vertices: usize,
        rank: usize,
        index: usize,
        target_rank: usize,
    },
    #[error("{what} index {index} out of range (have {len})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("decomposition of f failed: {0}")]
    Decomposition(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// How a lifted generator arises: `base` conjugated successively by each
/// word of `chain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// Index into `A` (for `m_gens`) or `B` (for `n_gens`).
    pub base: usize,
    pub chain: Vec<Word>,
}

impl Provenance {
    pub fn evaluate(&self, sources: &[Word]) -> Word {
        self.chain
            .iter()
            .fold(sources[self.base].clone(), |w, c| w.conjugate(c))
    }
}

#[derive(Clone, Debug)]
pub struct LiftedGenerators {
    pub m_gens: Vec<Word>,
    pub n_gens: Vec<Word>,
    pub m_provenance: Vec<Provenance>,
    pub n_provenance: Vec<Provenance>,
    /// Saturation rounds run after the seed round.
    pub rounds: usize,
}

impl LiftedGenerators {
    pub fn all(&self) -> Vec<Word> {
        self.m_gens.iter().chain(&self.n_gens).cloned().collect()
    }

    /// Checks every generator against its conjugate chain.
    pub fn audit(&self, a: &[Word], b: &[Word]) -> bool {
        let side = |gens: &[Word], prov: &[Provenance], src: &[Word]| {
            gens.len() == prov.len()
                && gens
                    .iter()
                    .zip(prov)
                    .all(|(g, p)| p.base < src.len() && &p.evaluate(src) == g)
        };
        side(&self.m_gens, &self.m_provenance, a) && side(&self.n_gens, &self.n_provenance, b)
    }
}

/// Grows conjugates of `A` and `B` until they generate `L`.
///
/// Round 0 conjugates every element of `A` and `B` by every coset
/// representative. Each later round conjugates the current generators by
/// the Schreier generators of `L` and their inverses, keeping only those
/// not already in the generated subgroup.
pub fn saturate(
    a: &[Word],
    b: &[Word],
    t: &CosetTable,
    max_rounds: usize,
) -> Result<LiftedGenerators, Lemma1Error> {
    let ngens = t.ngens();
    let tr = t.transversal();
    let basis = t.schreier_basis();
    let target = SubgroupGraph::from_coset_table(t, &basis);

    let mut lg = LiftedGenerators {
        m_gens: Vec::new(),
        n_gens: Vec::new(),
        m_provenance: Vec::new(),
        n_provenance: Vec::new(),
        rounds: 0,
    };
    for (src, gens, prov) in [
        (a, &mut lg.m_gens, &mut lg.m_provenance),
        (b, &mut lg.n_gens, &mut lg.n_provenance),
    ] {
        for (i, w) in src.iter().enumerate() {
            for h in &tr.reps {
                let c = w.conjugate(h);
                if !c.is_identity() && !gens.contains(&c) {
                    gens.push(c);
                    prov.push(Provenance {
                        base: i,
                        chain: vec![h.clone()],
                    });
                }
            }
        }
    }
    let mut graph = SubgroupGraph::build(ngens, &lg.all());
    if graph.equals(&target) {
        return Ok(lg);
    }

    let mut conjugators: Vec<Word> = Vec::new();
    for s in &basis.words {
        conjugators.push(s.clone());
        conjugators.push(s.inverse());
    }
    for round in 1..=max_rounds {
        lg.rounds = round;
        let snapshot_m = lg.m_gens.len();
        let snapshot_n = lg.n_gens.len();
        for side_is_m in [true, false] {
            let count = if side_is_m { snapshot_m } else { snapshot_n };
            for i in 0..count {
                for s in &conjugators {
                    let (gens, prov) = if side_is_m {
                        (&mut lg.m_gens, &mut lg.m_provenance)
                    } else {
                        (&mut lg.n_gens, &mut lg.n_provenance)
                    };
                    let c = gens[i].conjugate(s);
                    if graph.contains(&c) {
                        continue;
                    }
                    let mut p = prov[i].clone();
                    p.chain.push(s.clone());
                    gens.push(c);
                    prov.push(p);
                    graph = SubgroupGraph::build(ngens, &lg.all());
                    if graph.equals(&target) {
                        return Ok(lg);
                    }
                }
            }
        }
    }
    Err(Lemma1Error::RoundsExceeded {
        rounds: max_rounds,
        vertices: graph.vertex_count(),
        rank: graph.rank(),
        index: t.index(),
        target_rank: target.rank(),
    })
}

/// `(m, k, n)`: `m_gens[m]` conjugated by coset representative `k`,
/// commuted with `n_gens[n]`.
pub type Triple = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorSet {
    pub relators: Vec<Word>,
    /// Position of each formal triple in `relators`; triples whose
    /// commutator is freely trivial are absent.
    pub index: BTreeMap<Triple, usize>,
    pub formal_count: usize,
}

impl RelatorSet {
    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn position(&self, t: Triple) -> Option<usize> {
        self.index.get(&t).copied()
    }
}

pub fn present(lg: &LiftedGenerators, tr: &Transversal) -> RelatorSet {
    let mut relators: Vec<Word> = Vec::new();
    let mut index = BTreeMap::new();
    let mut formal_count = 0;
    for (mi, m) in lg.m_gens.iter().enumerate() {
        for (k, h) in tr.reps.iter().enumerate() {
            let mh = m.conjugate(h);
            for (ni, n) in lg.n_gens.iter().enumerate() {
                formal_count += 1;
                let r = mh.commutator(n);
                if r.is_identity() {
                    continue;
                }
                let pos = match relators.iter().position(|x| *x == r) {
                    Some(p) => p,
                    None => {
                        relators.push(r);
                        relators.len() - 1
                    }
                };
                index.insert((mi, k, ni), pos);
            }
        }
    }
    RelatorSet {
        relators,
        index,
        formal_count,
    }
}

/// One factor `(R[rel]^conj)^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub conj: Word,
    pub rel: usize,
    pub exp: i8,
}

/// `target = Π (R[rel]^conj)^exp` in the free group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub target: Word,
    pub steps: Vec<Step>,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    conj: String,
    rel: usize,
    exp: i8,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    target: String,
    steps: Vec<StepJson>,
}

impl Certificate {
    pub fn to_json_value(&self, alphabet: &Alphabet) -> serde_json::Value {
        let c = CertificateJson {
            target: alphabet.format(&self.target),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    conj: alphabet.format(&s.conj),
                    rel: s.rel,
                    exp: s.exp,
                })
                .collect(),
        };
        serde_json::to_value(c).expect("certificate serializes")
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> String {
        serde_json::to_string(&self.to_json_value(alphabet)).expect("certificate serializes")
    }

    pub fn from_json_value(alphabet: &Alphabet, v: serde_json::Value) -> Result<Self, Lemma1Error> {
        let c: CertificateJson = serde_json::from_value(v)?;
        let mut steps = Vec::with_capacity(c.steps.len());
        for s in c.steps {
            if s.exp != 1 && s.exp != -1 {
                return Err(Lemma1Error::Malformed(format!("exponent {} is not ±1", s.exp)));
            }
            steps.push(Step {
                conj: alphabet.parse(&s.conj)?,
                rel: s.rel,
                exp: s.exp,
            });
        }
        Ok(Certificate {
            target: alphabet.parse(&c.target)?,
            steps,
        })
    }

    pub fn from_json(alphabet: &Alphabet, s: &str) -> Result<Self, Lemma1Error> {
        Self::from_json_value(alphabet, serde_json::from_str(s)?)
    }

    /// Cancels adjacent mutually inverse steps.
    pub fn simplify(&mut self) {
        let mut out: Vec<Step> = Vec::with_capacity(self.steps.len());
        for s in self.steps.drain(..) {
            match out.last() {
                Some(l) if l.rel == s.rel && l.conj == s.conj && l.exp == -s.exp => {
                    out.pop();
                }
                _ => out.push(s),
            }
        }
        self.steps = out;
    }

    /// The product the steps denote, freely reduced.
    pub fn evaluate(&self, relators: &[Word]) -> Result<Word, Lemma1Error> {
        let mut acc: Vec<Letter> = Vec::new();
        for s in &self.steps {
            let r = relators.get(s.rel).ok_or(Lemma1Error::OutOfRange {
                what: "relator",
                index: s.rel,
                len: relators.len(),
            })?;
            let mut f = r.conjugate(&s.conj);
            if s.exp < 0 {
                f = f.inverse();
            }
            acc.extend_from_slice(f.letters());
            if acc.len() > 4096 {
                acc = Word::reduce(acc).into_letters();
            }
        }
        Ok(Word::reduce(acc))
    }
}

/// Independent check: does the step product freely equal the target?
pub fn verify_certificate(c: &Certificate, r: &RelatorSet) -> Result<bool, Lemma1Error> {
    Ok(c.evaluate(&r.relators)? == c.target)
}

type Steps = Rc<Vec<Step>>;

fn push_step(v: &mut Vec<Step>, s: Step) {
    v.push(s);
}

fn extend_conj(out: &mut Vec<Step>, src: &[Step], g: &Word) {
    for s in src {
        push_step(
            out,
            Step {
                conj: s.conj.multiply(g),
                rel: s.rel,
                exp: s.exp,
            },
        );
    }
}

fn extend_inverse_conj(out: &mut Vec<Step>, src: &[Step], g: &Word) {
    for s in src.iter().rev() {
        push_step(
            out,
            Step {
                conj: s.conj.multiply(g),
                rel: s.rel,
                exp: -s.exp,
            },
        );
    }
}

/// Everything needed to certify `[m^f, n]` for arbitrary `f`.
#[derive(Clone, Debug)]
pub struct CertificateContext {
    pub table: CosetTable,
    pub transversal: Transversal,
    pub lifted: LiftedGenerators,
    pub relators: RelatorSet,
    graph: SubgroupGraph,
}

impl CertificateContext {
    pub fn new(table: CosetTable, lifted: LiftedGenerators) -> Self {
        let transversal = table.transversal();
        let relators = present(&lifted, &transversal);
        let graph = SubgroupGraph::build(table.ngens(), &lifted.all());
        CertificateContext {
            table,
            transversal,
            lifted,
            relators,
            graph,
        }
    }

    /// Saturates and presents in one go.
    pub fn build(a: &[Word], b: &[Word], table: CosetTable, max_rounds: usize) -> Result<Self, Lemma1Error> {
        let lifted = saturate(a, b, &table, max_rounds)?;
        Ok(Self::new(table, lifted))
    }

    pub fn derive_certificate(&self, m: usize, f: &Word, n: usize) -> Result<Certificate, Lemma1Error> {
        derive_certificate(self, m, f, n)
    }
}

struct Deriver<'a> {
    ctx: &'a CertificateContext,
    h: usize,
    /// `f = h · u₁ ⋯ u_s`, each `u_j` an input letter.
    us: Vec<Letter>,
    /// `prefix[j] = h · u₁ ⋯ u_j` as a word in `F`.
    prefix: Vec<Word>,
    memo: HashMap<(usize, usize, usize), Steps>,
}

impl Deriver<'_> {
    fn m_count(&self) -> usize {
        self.ctx.lifted.m_gens.len()
    }

    fn base(&self, m: usize, n: usize) -> Steps {
        let v = match self.ctx.relators.position((m, self.h, n)) {
            Some(rel) => vec![Step {
                conj: Word::identity(),
                rel,
                exp: 1,
            }],
            None => Vec::new(),
        };
        Rc::new(v)
    }

    /// Steps for `[m^{prefix[j]}, n]`.
    fn cert(&mut self, m: usize, j: usize, n: usize) -> Steps {
        if let Some(s) = self.memo.get(&(m, j, n)) {
            return s.clone();
        }
        let out = if j == 0 {
            self.base(m, n)
        } else {
            self.step(m, j, n)
        };
        self.memo.insert((m, j, n), out.clone());
        out
    }

    fn step(&mut self, m: usize, j: usize, n: usize) -> Steps {
        let lifted = &self.ctx.lifted;
        let u = self.us[j - 1];
        let i = u.gen() as usize;
        let x = if i < self.m_count() {
            lifted.m_gens[i].clone()
        } else {
            lifted.n_gens[i - self.m_count()].clone()
        };
        let x = if u.is_inverse() { x.inverse() } else { x };
        let p = lifted.m_gens[m].conjugate(&self.prefix[j - 1]);
        let prev = self.cert(m, j - 1, n);
        let mut out = Vec::new();
        if i < self.m_count() {
            // [P^x, n] = ([P, n d])^x with d = [n, x⁻¹],
            // [P, n d] = (d⁻¹)^P · [P, n] · d.
            let d = match self.ctx.relators.position((i, 0, n)) {
                None => Vec::new(),
                Some(rel) if !u.is_inverse() => vec![Step {
                    conj: x.inverse(),
                    rel,
                    exp: 1,
                }],
                Some(rel) => vec![Step {
                    conj: Word::identity(),
                    rel,
                    exp: -1,
                }],
            };
            let px = p.multiply(&x);
            extend_inverse_conj(&mut out, &d, &px);
            extend_conj(&mut out, &prev, &x);
            extend_conj(&mut out, &d, &x);
        } else {
            // [P e, n] = e⁻¹ · [P, n] · e^n with e = [P, x].
            let np = i - self.m_count();
            let e_pos = self.cert(m, j - 1, np);
            let e: Vec<Step> = if u.is_inverse() {
                // [P, y⁻¹] = ([P, y]^{y⁻¹})⁻¹
                let mut v = Vec::new();
                extend_inverse_conj(&mut v, &e_pos, &x);
                v
            } else {
                e_pos.to_vec()
            };
            let nw = &lifted.n_gens[n];
            extend_inverse_conj(&mut out, &e, &Word::identity());
            extend_conj(&mut out, &prev, &Word::identity());
            extend_conj(&mut out, &e, nw);
        }
        Rc::new(out)
    }
}

/// Writes `[m_gens[m]^f, n_gens[n]]` as a product of conjugates of `R`.
pub fn derive_certificate(
    ctx: &CertificateContext,
    m: usize,
    f: &Word,
    n: usize,
) -> Result<Certificate, Lemma1Error> {
    let lg = &ctx.lifted;
    if m >= lg.m_gens.len() {
        return Err(Lemma1Error::OutOfRange {
            what: "m",
            index: m,
            len: lg.m_gens.len(),
        });
    }
    if n >= lg.n_gens.len() {
        return Err(Lemma1Error::OutOfRange {
            what: "n",
            index: n,
            len: lg.n_gens.len(),
        });
    }
    if f.letters().iter().any(|l| l.gen() as usize >= ctx.table.ngens()) {
        return Err(Lemma1Error::Decomposition("f uses an unknown generator".into()));
    }
    let h = ctx.table.coset_of(f);
    let hw = &ctx.transversal.reps[h];
    let w = hw.inverse().multiply(f);
    let expr = ctx
        .graph
        .express(&w)
        .map_err(|e| Lemma1Error::Decomposition(format!("{e} (coset {h})")))?;
    let us = expr.into_letters();
    let mut prefix = vec![hw.clone()];
    let inputs = ctx.graph.inputs();
    for &u in &us {
        let g = &inputs[u.gen() as usize];
        let g = if u.is_inverse() { g.inverse() } else { g.clone() };
        let next = prefix.last().unwrap().multiply(&g);
        prefix.push(next);
    }
    if prefix.last() != Some(f) {
        return Err(Lemma1Error::Decomposition("expression does not evaluate to f".into()));
    }
    let mut d = Deriver {
        ctx,
        h,
        us,
        prefix,
        memo: HashMap::new(),
    };
    let s = d.us.len();
    let steps = d.cert(m, s, n).to_vec();
    Ok(Certificate {
        target: lg.m_gens[m].conjugate(f).commutator(&lg.n_gens[n]),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, EnumerationConfig};
    use crate::Presentation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn context(gens: &[&str], a: &[&str], b: &[&str]) -> (Presentation, CertificateContext) {
        let p = Presentation::from_strs(gens, a, b).unwrap();
        let t = enumerate(&p, &EnumerationConfig::default()).unwrap();
        let ctx = CertificateContext::build(&p.a, &p.b, t, 8).unwrap();
        (p, ctx)
    }

    fn random_word(rng: &mut ChaCha8Rng, ngens: u32, len: usize) -> Word {
        Word::reduce((0..len).map(|_| Letter::new(rng.gen_range(0..ngens), rng.gen())))
    }

    #[test]
    fn commutator_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_word(&mut rng, 3, 6);
            let n = random_word(&mut rng, 3, 6);
            let x = random_word(&mut rng, 3, 4);
            let e = p.commutator(&x);
            // conjugation through x
            let d = n.commutator(&x.inverse());
            assert_eq!(p.conjugate(&x).commutator(&n), p.commutator(&n.multiply(&d)).conjugate(&x));
            // [P, n d] = (d⁻¹)^P [P, n] d
            assert_eq!(
                p.commutator(&n.multiply(&d)),
                Word::product([&d.inverse().conjugate(&p), &p.commutator(&n), &d])
            );
            // [n, m⁻¹] = [m, n]^{m⁻¹}, [n, m] = [m, n]⁻¹
            assert_eq!(n.commutator(&x.inverse()), x.commutator(&n).conjugate(&x.inverse()));
            assert_eq!(n.commutator(&x), x.commutator(&n).inverse());
            // [P e, n] = e⁻¹ [P, n] e^n
            assert_eq!(
                p.multiply(&e).commutator(&n),
                Word::product([&e.inverse(), &p.commutator(&n), &e.conjugate(&n)])
            );
            // [p, q⁻¹] = ([p, q]^{q⁻¹})⁻¹
            assert_eq!(p.commutator(&x.inverse()), p.commutator(&x).conjugate(&x.inverse()).inverse());
        }
    }

    #[test]
    fn e1_rank_two_free() {
        let (p, ctx) = context(&["a", "b"], &["a"], &["b"]);
        assert_eq!(ctx.lifted.rounds, 0);
        assert_eq!(ctx.lifted.m_gens, p.a);
        assert_eq!(ctx.lifted.n_gens, p.b);
        assert_eq!(ctx.relators.relators, vec![p.alphabet.parse("[a,b]").unwrap()]);
        let c = ctx.derive_certificate(0, &Word::identity(), 0).unwrap();
        assert_eq!(
            c.steps,
            vec![Step {
                conj: Word::identity(),
                rel: 0,
                exp: 1
            }]
        );
        assert!(verify_certificate(&c, &ctx.relators).unwrap());
    }

    #[test]
    fn e2_relators() {
        let (p, ctx) = context(&["x", "y"], &["x"], &["y^2"]);
        let al = &p.alphabet;
        assert_eq!(ctx.transversal.reps, vec![Word::identity(), al.parse("y").unwrap()]);
        assert_eq!(ctx.lifted.m_gens, al.parse_list("x, x^y").unwrap());
        assert_eq!(ctx.lifted.n_gens, al.parse_list("y^2").unwrap());
        assert!(ctx.lifted.audit(&p.a, &p.b));
        assert_eq!(ctx.relators.formal_count, 4);
        assert_eq!(
            ctx.relators.relators,
            al.parse_list("[x,y^2], [x^y,y^2], [x^(y^2),y^2]").unwrap()
        );
    }

    #[test]
    fn e2_certificates() {
        let (p, ctx) = context(&["x", "y"], &["x"], &["y^2"]);
        let c = ctx
            .derive_certificate(0, &p.alphabet.parse("y^3").unwrap(), 0)
            .unwrap();
        assert_eq!(c.steps.len(), 3);
        assert!(verify_certificate(&c, &ctx.relators).unwrap());
        let mut short = c.clone();
        short.simplify();
        assert_eq!(short.steps.len(), 1);
        assert!(verify_certificate(&short, &ctx.relators).unwrap());
        let c = ctx
            .derive_certificate(0, &p.alphabet.parse("x^5 y").unwrap(), 0)
            .unwrap();
        assert!(verify_certificate(&c, &ctx.relators).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let f = random_word(&mut rng, 2, 12);
            let m = rng.gen_range(0..ctx.lifted.m_gens.len());
            let c = ctx.derive_certificate(m, &f, 0).unwrap();
            assert!(verify_certificate(&c, &ctx.relators).unwrap(), "f = {}", p.alphabet.format(&f));
        }
    }

    #[test]
    fn tampering_is_detected() {
        let (p, ctx) = context(&["x", "y"], &["x"], &["y^2"]);
        let mut c = ctx
            .derive_certificate(1, &p.alphabet.parse("y x y^-1").unwrap(), 0)
            .unwrap();
        assert!(verify_certificate(&c, &ctx.relators).unwrap());
        c.steps[0].exp = -c.steps[0].exp;
        assert!(!verify_certificate(&c, &ctx.relators).unwrap());
        c.steps[0].rel = 99;
        assert!(matches!(
            verify_certificate(&c, &ctx.relators),
            Err(Lemma1Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let (p, ctx) = context(&["x", "y"], &["x"], &["y^2"]);
        let c = ctx
            .derive_certificate(0, &p.alphabet.parse("y x^-2 y^3").unwrap(), 0)
            .unwrap();
        let s = c.to_json(&p.alphabet);
        let back = Certificate::from_json(&p.alphabet, &s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(&p.alphabet), s);
        let bad = s.replacen("\"exp\":1", "\"exp\":2", 1);
        assert!(Certificate::from_json(&p.alphabet, &bad).is_err());
    }

    #[test]
    fn needs_saturation_rounds() {
        // L = F but {[a,b]a, b} generates a proper subgroup
        let (p, ctx) = context(&["a", "b"], &["[a,b] a"], &["b"]);
        assert_eq!(ctx.table.index(), 1);
        assert!(ctx.lifted.rounds >= 1);
        assert!(ctx.lifted.audit(&p.a, &p.b));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = random_word(&mut rng, 2, 8);
            for m in 0..ctx.lifted.m_gens.len() {
                for n in 0..ctx.lifted.n_gens.len() {
                    let c = ctx.derive_certificate(m, &f, n).unwrap();
                    assert!(verify_certificate(&c, &ctx.relators).unwrap());
                }
            }
        }
    }

    #[test]
    fn rounds_exhausted() {
        let p = Presentation::from_strs(&["a", "b"], &["[a,b] a"], &["b"]).unwrap();
        let t = enumerate(&p, &EnumerationConfig::default()).unwrap();
        assert!(matches!(
            saturate(&p.a, &p.b, &t, 0),
            Err(Lemma1Error::RoundsExceeded { rounds: 0, index: 1, .. })
        ));
    }
}
