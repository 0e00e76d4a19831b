//! Stallings subgroup graphs with folding history.
//!
//! Every edge carries an *expression*: a word over the input generators
//! `g₀, g₁, …` of the subgroup. Along any closed path at the basepoint,
//! the product of edge expressions (inverted on backward traversal)
//! evaluates to the label of the path. This is what lets [`SubgroupGraph::express`]
//! write a member as a product of the input generators.
//!
//! The invariant is kept through folds by fixing, for each vertex `v`, an
//! implicit element `t(v)` (with `t(base) = 1`) such that an edge
//! `u --a--> v` with expression `E` satisfies `eval(E) = t(u)·a·t(v)⁻¹`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coset::{CosetTable, SchreierBasis};
use crate::words::{Alphabet, GenId, Letter, Word};

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StallingsError {
    #[error("word is not in the subgroup")]
    NotAMember,
}

#[derive(Clone, Debug)]
struct Edge {
    from: usize,
    to: usize,
    gen: GenId,
    expr: Word,
}

/// Mutable graph used while folding.
struct Folder {
    edges: Vec<Option<Edge>>,
    adj: Vec<Vec<usize>>,
    alive: Vec<bool>,
    base: usize,
}

#[derive(Clone, Copy)]
struct Half {
    edge: usize,
    letter: Letter,
    target: usize,
}

impl Folder {
    fn new() -> Self {
        Folder {
            edges: Vec::new(),
            adj: vec![Vec::new()],
            alive: vec![true],
            base: 0,
        }
    }

    fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.adj.len() - 1
    }

    fn add_edge(&mut self, from: usize, to: usize, gen: GenId, expr: Word) {
        let id = self.edges.len();
        self.edges.push(Some(Edge { from, to, gen, expr }));
        self.adj[from].push(id);
        if to != from {
            self.adj[to].push(id);
        }
    }

    fn edge(&self, e: usize) -> &Edge {
        self.edges[e].as_ref().expect("live edge")
    }

    fn halves(&self, v: usize) -> Vec<Half> {
        let mut out = Vec::new();
        for &e in &self.adj[v] {
            let ed = self.edge(e);
            if ed.from == v {
                out.push(Half {
                    edge: e,
                    letter: Letter::pos(ed.gen),
                    target: ed.to,
                });
            }
            if ed.to == v {
                out.push(Half {
                    edge: e,
                    letter: Letter::neg(ed.gen),
                    target: ed.from,
                });
            }
        }
        out
    }

    fn half_expr(&self, h: &Half) -> Word {
        let e = self.edge(h.edge);
        if h.letter.is_inverse() {
            e.expr.inverse()
        } else {
            e.expr.clone()
        }
    }

    fn duplicates_at(&self, v: usize) -> Vec<(Half, Half)> {
        let hs = self.halves(v);
        let mut out = Vec::new();
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                if hs[i].letter == hs[j].letter && hs[i].edge != hs[j].edge {
                    out.push((hs[i], hs[j]));
                }
            }
        }
        out
    }

    fn remove_edge(&mut self, e: usize) {
        let ed = self.edges[e].take().expect("live edge");
        self.adj[ed.from].retain(|&x| x != e);
        self.adj[ed.to].retain(|&x| x != e);
    }

    /// Folds two same-letter half-edges at one vertex. Returns the vertex
    /// whose neighborhood changed.
    fn fold(&mut self, h1: Half, h2: Half) -> usize {
        let p1 = self.half_expr(&h1);
        let p2 = self.half_expr(&h2);
        // keep the edge with the shortlex-smaller expression
        let (h1, h2, p1, p2) = if p2 < p1 { (h2, h1, p2, p1) } else { (h1, h2, p1, p2) };
        self.remove_edge(h2.edge);
        let (u1, u2) = (h1.target, h2.target);
        if u1 == u2 {
            return u1;
        }
        // eval(d) = t(u1)·t(u2)⁻¹
        let d = p1.inverse().multiply(&p2);
        let (keep, drop, d) = if u2 == self.base || (u1 != self.base && u1 > u2) {
            (u2, u1, d.inverse())
        } else {
            (u1, u2, d)
        };
        let d_inv = d.inverse();
        let moved = std::mem::take(&mut self.adj[drop]);
        for &e in &moved {
            let ed = self.edges[e].as_mut().expect("live edge");
            if ed.from == drop {
                ed.from = keep;
                ed.expr = d.multiply(&ed.expr);
            }
            if ed.to == drop {
                ed.to = keep;
                ed.expr = ed.expr.multiply(&d_inv);
            }
            if !self.adj[keep].contains(&e) {
                self.adj[keep].push(e);
            }
        }
        self.alive[drop] = false;
        keep
    }

    fn fold_all(&mut self, rng: Option<&mut ChaCha8Rng>) {
        match rng {
            None => {
                let mut work: Vec<usize> = (0..self.adj.len()).rev().collect();
                while let Some(v) = work.pop() {
                    if !self.alive[v] {
                        continue;
                    }
                    if let Some(&(h1, h2)) = self.duplicates_at(v).first() {
                        let k = self.fold(h1, h2);
                        work.push(v);
                        work.push(k);
                        for h in self.halves(k) {
                            work.push(h.target);
                        }
                    }
                }
            }
            Some(rng) => loop {
                let mut pairs = Vec::new();
                for v in 0..self.adj.len() {
                    if self.alive[v] {
                        pairs.extend(self.duplicates_at(v));
                    }
                }
                let Some(&(h1, h2)) = pairs.choose(rng) else { break };
                let (h1, h2) = if rng.gen_bool(0.5) { (h1, h2) } else { (h2, h1) };
                self.fold(h1, h2);
            },
        }
    }

    fn trim(&mut self) {
        let mut work: Vec<usize> = (0..self.adj.len()).collect();
        while let Some(v) = work.pop() {
            if v == self.base || !self.alive[v] {
                continue;
            }
            let degree: usize = self.halves(v).len();
            if degree <= 1 {
                for h in self.halves(v) {
                    self.remove_edge(h.edge);
                    work.push(h.target);
                }
                self.alive[v] = false;
            }
        }
    }
}

/// A folded core graph of a finitely generated subgroup of `F`, stored in
/// canonical BFS numbering (basepoint 0).
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    ngens: usize,
    nverts: usize,
    /// `trans[v * 2r + letter]`: target vertex or `NONE`.
    trans: Vec<u32>,
    /// Expression of the half-edge at the same slot.
    exprs: Vec<Word>,
    /// Words the expressions are written in.
    inputs: Vec<Word>,
}

impl SubgroupGraph {
    /// Folded core graph of `⟨gens⟩` in the free group of rank `ngens`.
    /// Identity generators are ignored; expression letter `i` refers to
    /// `gens[i]`.
    pub fn build(ngens: usize, gens: &[Word]) -> SubgroupGraph {
        Self::build_inner(ngens, gens, None)
    }

    /// As [`build`](Self::build), folding in a random order drawn from `seed`.
    pub fn build_with_seed(ngens: usize, gens: &[Word], seed: u64) -> SubgroupGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::build_inner(ngens, gens, Some(&mut rng))
    }

    fn build_inner(ngens: usize, gens: &[Word], rng: Option<&mut ChaCha8Rng>) -> SubgroupGraph {
        let mut f = Folder::new();
        for (i, w) in gens.iter().enumerate() {
            let ls = w.letters();
            if ls.is_empty() {
                continue;
            }
            let mut prev = f.base;
            for (k, &l) in ls.iter().enumerate() {
                let last = k + 1 == ls.len();
                let next = if last { f.base } else { f.add_vertex() };
                let expr = if !last {
                    Word::identity()
                } else if l.is_inverse() {
                    Word::letter(Letter::neg(i as GenId))
                } else {
                    Word::gen(i as GenId)
                };
                if l.is_inverse() {
                    f.add_edge(next, prev, l.gen(), expr);
                } else {
                    f.add_edge(prev, next, l.gen(), expr);
                }
                prev = next;
            }
        }
        f.fold_all(rng);
        f.trim();
        Self::finish(ngens, &f, gens.to_vec())
    }

    fn finish(ngens: usize, f: &Folder, inputs: Vec<Word>) -> SubgroupGraph {
        let ncols = 2 * ngens;
        let mut order = vec![NONE; f.adj.len()];
        let mut seq = vec![f.base];
        order[f.base] = 0;
        let mut slots: Vec<Vec<Option<(usize, Word)>>> = Vec::new();
        let mut head = 0;
        while head < seq.len() {
            let v = seq[head];
            head += 1;
            let mut row: Vec<Option<(usize, Word)>> = vec![None; ncols];
            for h in f.halves(v) {
                debug_assert!(row[h.letter.index()].is_none(), "graph not folded");
                row[h.letter.index()] = Some((h.target, f.half_expr(&h)));
            }
            for (t, _) in row.iter().flatten() {
                if order[*t] == NONE {
                    order[*t] = seq.len() as u32;
                    seq.push(*t);
                }
            }
            slots.push(row);
        }
        let nverts = seq.len();
        let mut trans = vec![NONE; nverts * ncols];
        let mut exprs = vec![Word::identity(); nverts * ncols];
        for (v, row) in slots.into_iter().enumerate() {
            for (col, entry) in row.into_iter().enumerate() {
                if let Some((t, e)) = entry {
                    trans[v * ncols + col] = order[t];
                    exprs[v * ncols + col] = e;
                }
            }
        }
        SubgroupGraph {
            ngens,
            nverts,
            trans,
            exprs,
            inputs,
        }
    }

    /// The graph of the finite-index subgroup `L` read off a complete coset
    /// table: vertices are cosets, basepoint is coset 0. Expressions are
    /// over the Schreier basis (tree edges carry the identity).
    pub fn from_coset_table(t: &CosetTable, basis: &SchreierBasis) -> SubgroupGraph {
        let mut f = Folder::new();
        for _ in 1..t.index() {
            f.add_vertex();
        }
        for c in 0..t.index() {
            for g in 0..t.ngens() as GenId {
                let d = t.act(c, Letter::pos(g));
                let expr = basis.slot(c, g).map(Word::gen).unwrap_or_default();
                f.add_edge(c, d, g, expr);
            }
        }
        Self::finish(t.ngens(), &f, basis.words.clone())
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn vertex_count(&self) -> usize {
        self.nverts
    }

    pub fn edge_count(&self) -> usize {
        self.trans.iter().filter(|&&t| t != NONE).count() / 2
    }

    /// Rank of the subgroup (`E − V + 1`).
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.nverts
    }

    pub fn inputs(&self) -> &[Word] {
        &self.inputs
    }

    #[inline]
    fn step(&self, v: usize, l: Letter) -> Option<usize> {
        let t = self.trans[v * 2 * self.ngens + l.index()];
        (t != NONE).then_some(t as usize)
    }

    /// Whether every vertex has all `2r` half-edges (finite index in `F`).
    pub fn is_covering(&self) -> bool {
        self.trans.iter().all(|&t| t != NONE)
    }

    pub fn contains(&self, w: &Word) -> bool {
        let mut v = 0;
        for &l in w.letters() {
            if l.gen() as usize >= self.ngens {
                return false;
            }
            match self.step(v, l) {
                Some(t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    /// Writes a member `w` as a word over the input generators (letter `i`
    /// stands for `inputs()[i]`).
    pub fn express(&self, w: &Word) -> Result<Word, StallingsError> {
        let mut v = 0;
        let mut out = Word::identity();
        for &l in w.letters() {
            if l.gen() as usize >= self.ngens {
                return Err(StallingsError::NotAMember);
            }
            let slot = v * 2 * self.ngens + l.index();
            let t = self.trans[slot];
            if t == NONE {
                return Err(StallingsError::NotAMember);
            }
            out = out.multiply(&self.exprs[slot]);
            v = t as usize;
        }
        if v != 0 {
            return Err(StallingsError::NotAMember);
        }
        Ok(out)
    }

    /// Evaluates an expression over the inputs back in `F`.
    pub fn evaluate(&self, expr: &Word) -> Word {
        expr.substitute(&self.inputs)
    }

    /// Canonical serialized form: the transition table in BFS numbering.
    pub fn canonical_form(&self) -> (usize, &[u32]) {
        (self.nverts, &self.trans)
    }

    /// Subgroup equality, by comparing canonical forms.
    pub fn equals(&self, other: &SubgroupGraph) -> bool {
        self.ngens == other.ngens && self.canonical_form() == other.canonical_form()
    }

    /// Graphviz rendering, for debugging.
    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let mut s = String::from("digraph subgroup {\n  0 [shape=doublecircle];\n");
        for v in 0..self.nverts {
            for g in 0..self.ngens as GenId {
                if let Some(t) = self.step(v, Letter::pos(g)) {
                    let _ = writeln!(s, "  {v} -> {t} [label=\"{}\"];", alphabet.name(g));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// All reduced words of length `≤ max_len` read along closed paths at
    /// the basepoint, i.e. the subgroup's elements of that length.
    pub fn elements_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([(0usize, Vec::<Letter>::new())]);
        while let Some((v, path)) = queue.pop_front() {
            if v == 0 {
                out.push(Word::reduce(path.iter().copied()));
            }
            if path.len() == max_len {
                continue;
            }
            for col in 0..2 * self.ngens {
                let l = Letter::from_index(col);
                if path.last() == Some(&l.inverse()) {
                    continue;
                }
                if let Some(t) = self.step(v, l) {
                    let mut p = path.clone();
                    p.push(l);
                    queue.push_back((t, p));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate_relators, EnumerationConfig};

    fn xy() -> Alphabet {
        Alphabet::new(&["x", "y"]).unwrap()
    }

    fn words(a: &Alphabet, ss: &[&str]) -> Vec<Word> {
        ss.iter().map(|s| a.parse(s).unwrap()).collect()
    }

    #[test]
    fn cycle_of_length_two() {
        let a = xy();
        let g = SubgroupGraph::build(2, &words(&a, &["x^2"]));
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(g.contains(&a.parse("x^2").unwrap()));
        assert!(!g.contains(&a.parse("x").unwrap()));
        let e = g.express(&a.parse("x^4").unwrap()).unwrap();
        assert_eq!(e, Word::gen(0).pow(2));
    }

    #[test]
    fn index_two_kernel() {
        let a = xy();
        let g = SubgroupGraph::build(2, &words(&a, &["x", "y^-1 x y", "y^2"]));
        assert_eq!(g.vertex_count(), 2);
        assert!(g.is_covering());
        assert_eq!(g.rank(), 3);
        assert!(!g.contains(&a.parse("y").unwrap()));
        let w = a.parse("y^2 x y^-2").unwrap();
        let e = g.express(&w).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(g.evaluate(&e), w);

        let rels = words(&a, &["x", "y^2"]);
        let t = enumerate_relators(2, &rels, &EnumerationConfig::default()).unwrap();
        let lg = SubgroupGraph::from_coset_table(&t, &t.schreier_basis());
        assert!(g.equals(&lg));
    }

    #[test]
    fn trivial_subgroup() {
        let g = SubgroupGraph::build(2, &[]);
        assert_eq!(g.vertex_count(), 1);
        assert!(g.contains(&Word::identity()));
        assert!(!g.contains(&Word::gen(0)));
        let g2 = SubgroupGraph::build(2, &[Word::identity()]);
        assert!(g.equals(&g2));
    }

    #[test]
    fn equality_examples() {
        let a = xy();
        let g1 = SubgroupGraph::build(2, &words(&a, &["x", "y"]));
        let g2 = SubgroupGraph::build(2, &words(&a, &["y", "x"]));
        assert!(g1.equals(&g2));
        let h1 = SubgroupGraph::build(2, &words(&a, &["x^2"]));
        let h2 = SubgroupGraph::build(2, &words(&a, &["x"]));
        assert!(!h1.equals(&h2));
        assert!(h1.equals(&h1));
    }

    #[test]
    fn express_free_basis() {
        let a = xy();
        let g = SubgroupGraph::build(2, &words(&a, &["x", "y"]));
        let e = g.express(&a.parse("xy").unwrap()).unwrap();
        assert_eq!(e, Word::product([&Word::gen(0), &Word::gen(1)]));
        assert_eq!(
            g.express(&a.parse("x^-1").unwrap()).unwrap(),
            Word::letter(Letter::neg(0))
        );
    }

    #[test]
    fn express_with_redundant_generators() {
        let a = xy();
        let gens = words(&a, &["x y", "y", "x", "y x y^-1"]);
        let g = SubgroupGraph::build(2, &gens);
        for s in ["x", "y", "x y x^-1 y^2", "[x,y]", "y^-3 x^2"] {
            let w = a.parse(s).unwrap();
            let e = g.express(&w).unwrap();
            assert_eq!(g.evaluate(&e), w, "{s}");
        }
    }

    #[test]
    fn not_a_member() {
        let a = xy();
        let g = SubgroupGraph::build(2, &words(&a, &["x^2", "y"]));
        assert_eq!(
            g.express(&a.parse("x").unwrap()),
            Err(StallingsError::NotAMember)
        );
        assert_eq!(
            g.express(&a.parse("x y").unwrap()),
            Err(StallingsError::NotAMember)
        );
    }

    #[test]
    fn seeded_folds_agree() {
        let a = xy();
        let gens = words(&a, &["x y x^-1", "y^2 x^3", "x^2 y^-1 x", "[x,y]"]);
        let g = SubgroupGraph::build(2, &gens);
        for seed in 0..20 {
            let h = SubgroupGraph::build_with_seed(2, &gens, seed);
            assert!(g.equals(&h));
            let w = a.parse("x y x^-1 y^2 x^3").unwrap();
            assert_eq!(h.evaluate(&h.express(&w).unwrap()), w);
        }
    }

    #[test]
    fn dot_output() {
        let a = xy();
        let g = SubgroupGraph::build(2, &words(&a, &["x^2"]));
        let d = g.to_dot(&a);
        assert!(d.contains("0 -> 1 [label=\"x\"]"));
    }
}
