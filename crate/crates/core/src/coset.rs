//! Todd–Coxeter enumeration of the cosets of `L = ncl(A ∪ B)` in `F`,
//! Schreier transversals and Reidemeister–Schreier rewriting.
//!
//! `L` is normal, so left and right cosets coincide: the table built here
//! acts on right cosets `Lf`, and a representative `h` of `Lf` is equally a
//! representative of the left coset `fL`. Cosets are numbered from 0; coset
//! 0 is `L` itself.

use std::collections::VecDeque;

use thiserror::Error;

use crate::presentation::Presentation;
use crate::snf::{smith_normal_form, SmithForm};
use crate::words::{GenId, Letter, Word};

const NONE: u32 = u32::MAX;

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset enumeration overflowed {max_cosets} cosets")]
    Overflowed { max_cosets: usize },
    #[error("max_cosets must be at least 1")]
    ZeroBound,
    #[error("word is not in the subgroup (it ends at coset {coset})")]
    NotInSubgroup { coset: usize },
}

/// Coset-definition strategy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Relator scanning from each coset in turn (Hasselgrove–Leech–Trotter),
    /// with a lookahead pass before giving up on space.
    #[default]
    Hlt,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationConfig {
    pub max_cosets: usize,
    pub strategy: Strategy,
    pub lookahead: bool,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            max_cosets: DEFAULT_MAX_COSETS,
            strategy: Strategy::Hlt,
            lookahead: true,
        }
    }
}

impl EnumerationConfig {
    pub fn with_max(max_cosets: usize) -> Self {
        EnumerationConfig {
            max_cosets,
            ..Default::default()
        }
    }
}

struct Full;

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    rows: usize,
    live: usize,
    max: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn new(ngens: usize, max: usize) -> Self {
        let ncols = 2 * ngens;
        Enumerator {
            ncols,
            table: vec![NONE; ncols],
            parent: vec![0],
            rows: 1,
            live: 1,
            max,
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.ncols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, v: u32) {
        self.table[c as usize * self.ncols + col] = v;
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32, Full> {
        if self.rows >= self.max {
            return Err(Full);
        }
        let n = self.rows as u32;
        self.rows += 1;
        self.live += 1;
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.parent.push(n);
        self.set(c, col, n);
        self.set(n, col ^ 1, c);
        Ok(n)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra == rb {
            return;
        }
        let (keep, kill) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[kill as usize] = keep;
        self.live -= 1;
        self.queue.push(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for col in 0..self.ncols {
                let target = self.get(dead, col);
                if target == NONE {
                    continue;
                }
                self.set(target, col ^ 1, NONE);
                let mu = self.rep(dead);
                let nu = self.rep(target);
                let mu_x = self.get(mu, col);
                if mu_x != NONE {
                    self.merge(nu, mu_x);
                } else {
                    let nu_xi = self.get(nu, col ^ 1);
                    if nu_xi != NONE {
                        self.merge(mu, nu_xi);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Scans `rel` from coset `c`, defining new cosets when `fill` is set.
    fn scan(&mut self, c: u32, rel: &[usize], fill: bool) -> Result<(), Full> {
        if rel.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut i = 0usize;
        let mut b = c;
        let mut j = rel.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, rel[i]) != NONE {
                f = self.get(f, rel[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, rel[j as usize] ^ 1) != NONE {
                b = self.get(b, rel[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                // deduction closes the cycle
                self.set(f, rel[i], b);
                self.set(b, rel[i] ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, rel[i])?;
        }
    }

    fn lookahead(&mut self, rels: &[Vec<usize>]) {
        let mut c = 0u32;
        while (c as usize) < self.rows {
            if self.is_live(c) {
                for r in rels {
                    let _ = self.scan(c, r, false);
                    if !self.is_live(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
    }

    /// Drops dead rows, preserving the relative order of live ones.
    /// Returns the new index of `cursor` (or of the next live row after it).
    fn compact(&mut self, cursor: u32) -> u32 {
        let mut map = vec![NONE; self.rows];
        let mut next = 0u32;
        for c in 0..self.rows as u32 {
            if self.is_live(c) {
                map[c as usize] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..self.rows as u32 {
            if !self.is_live(c) {
                continue;
            }
            for col in 0..self.ncols {
                let t = self.get(c, col);
                table.push(if t == NONE { NONE } else { map[t as usize] });
            }
        }
        let new_cursor = (cursor as usize..self.rows)
            .map(|c| map[c])
            .find(|&m| m != NONE)
            .unwrap_or(next);
        self.table = table;
        self.rows = next as usize;
        self.parent = (0..next).collect();
        new_cursor
    }

    fn run(&mut self, rels: &[Vec<usize>], lookahead: bool) -> Result<(), Full> {
        let mut c = 0u32;
        while (c as usize) < self.rows {
            match self.process(c, rels) {
                Ok(()) => c += 1,
                Err(Full) => {
                    if lookahead {
                        self.lookahead(rels);
                    }
                    if self.live == self.rows {
                        return Err(Full);
                    }
                    c = self.compact(c);
                }
            }
        }
        Ok(())
    }

    fn process(&mut self, c: u32, rels: &[Vec<usize>]) -> Result<(), Full> {
        if !self.is_live(c) {
            return Ok(());
        }
        for r in rels {
            self.scan(c, r, true)?;
            if !self.is_live(c) {
                return Ok(());
            }
        }
        for col in 0..self.ncols {
            if !self.is_live(c) {
                break;
            }
            if self.get(c, col) == NONE {
                self.define(c, col)?;
            }
        }
        Ok(())
    }
}

/// A complete coset table for the action of `F` on the cosets of `L`.
///
/// Rows are numbered in BFS discovery order from coset 0 under the letter
/// order `x, x⁻¹, y, y⁻¹, …`, so numbering and transversal depend only on
/// the declared generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    table: Vec<u32>,
    n: usize,
    /// BFS tree edge into each coset: (parent, letter).
    tree: Vec<Option<(u32, Letter)>>,
}

pub fn enumerate(p: &Presentation, config: &EnumerationConfig) -> Result<CosetTable, CosetError> {
    enumerate_relators(p.rank(), &p.relators(), config)
}

/// Enumerates cosets of the normal closure of `relators` in the free group
/// of rank `ngens`.
pub fn enumerate_relators(
    ngens: usize,
    relators: &[Word],
    config: &EnumerationConfig,
) -> Result<CosetTable, CosetError> {
    if config.max_cosets == 0 {
        return Err(CosetError::ZeroBound);
    }
    match config.strategy {
        Strategy::Hlt => {}
    }
    // Cyclically reduced relators scan identically and are shorter.
    let rels: Vec<Vec<usize>> = relators
        .iter()
        .map(|w| w.cyclic_reduce().0)
        .filter(|w| !w.is_identity())
        .map(|w| w.letters().iter().map(|l| l.index()).collect())
        .collect();
    let mut e = Enumerator::new(ngens, config.max_cosets);
    e.run(&rels, config.lookahead)
        .map_err(|Full| CosetError::Overflowed {
            max_cosets: config.max_cosets,
        })?;
    e.compact(0);
    Ok(CosetTable::standardize(ngens, e.rows, &e.table))
}

impl CosetTable {
    fn standardize(ngens: usize, rows: usize, raw: &[u32]) -> CosetTable {
        let ncols = 2 * ngens;
        let mut order = vec![NONE; rows];
        let mut seq = vec![0u32];
        order[0] = 0;
        let mut head = 0;
        while head < seq.len() {
            let c = seq[head];
            head += 1;
            for col in 0..ncols {
                let d = raw[c as usize * ncols + col];
                debug_assert_ne!(d, NONE, "incomplete row after enumeration");
                if order[d as usize] == NONE {
                    order[d as usize] = seq.len() as u32;
                    seq.push(d);
                }
            }
        }
        let n = seq.len();
        let mut table = vec![NONE; n * ncols];
        for (new, &old) in seq.iter().enumerate() {
            for col in 0..ncols {
                table[new * ncols + col] = order[raw[old as usize * ncols + col] as usize];
            }
        }
        CosetTable::from_parts(ngens, n, table)
    }

    fn from_parts(ngens: usize, n: usize, table: Vec<u32>) -> CosetTable {
        let ncols = 2 * ngens;
        let mut tree = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0u32]);
        while let Some(c) = queue.pop_front() {
            for col in 0..ncols {
                let d = table[c as usize * ncols + col];
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    tree[d as usize] = Some((c, Letter::from_index(col)));
                    queue.push_back(d);
                }
            }
        }
        CosetTable {
            ngens,
            table,
            n,
            tree,
        }
    }

    /// Builds a table from explicit permutation actions (`actions[g][c]` is
    /// the image of coset `c` under generator `g`), renumbered by BFS from
    /// coset 0. Returns `None` if an action is not a permutation or the
    /// action is not transitive.
    pub fn from_permutations(actions: &[Vec<usize>]) -> Option<CosetTable> {
        let ngens = actions.len();
        let n = actions.first().map_or(1, |a| a.len());
        let mut raw = vec![NONE; n * 2 * ngens];
        for (g, act) in actions.iter().enumerate() {
            if act.len() != n {
                return None;
            }
            let mut hit = vec![false; n];
            for (c, &d) in act.iter().enumerate() {
                if d >= n || hit[d] {
                    return None;
                }
                hit[d] = true;
                raw[c * 2 * ngens + 2 * g] = d as u32;
                raw[d * 2 * ngens + 2 * g + 1] = c as u32;
            }
        }
        let t = CosetTable::standardize(ngens, n, &raw);
        (t.n == n).then_some(t)
    }

    /// `[F : L]`.
    pub fn index(&self) -> usize {
        self.n
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    #[inline]
    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.table[coset * 2 * self.ngens + l.index()] as usize
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Coset containing `f`; `f` and the representative of that coset lie
    /// in the same coset of `L`.
    pub fn coset_of(&self, f: &Word) -> usize {
        self.trace(0, f)
    }

    /// Whether every relator closes a loop at every coset.
    pub fn relators_close(&self, relators: &[Word]) -> bool {
        (0..self.n).all(|c| relators.iter().all(|r| self.trace(c, r) == c))
    }

    pub fn transversal(&self) -> Transversal {
        let mut reps: Vec<Word> = vec![Word::identity(); self.n];
        for c in 1..self.n {
            // parents precede children in BFS numbering
            let (p, l) = self.tree[c].expect("tree edge for non-root coset");
            reps[c] = reps[p as usize].multiply(&Word::letter(l));
        }
        Transversal { reps }
    }

    fn is_tree_edge(&self, c: usize, g: GenId) -> bool {
        let d = self.act(c, Letter::pos(g));
        self.tree[d] == Some((c as u32, Letter::pos(g)))
            || self.tree[c] == Some((d as u32, Letter::neg(g)))
    }

    /// The free Schreier basis of `L`: one element `h_c · g · h_{cg}⁻¹` per
    /// non-tree edge `(c, g)`, ordered by `(c, g)`.
    pub fn schreier_basis(&self) -> SchreierBasis {
        let tr = self.transversal();
        let mut edges = Vec::new();
        let mut words = Vec::new();
        let mut slot = vec![None; self.n * self.ngens];
        for c in 0..self.n {
            for g in 0..self.ngens as GenId {
                if self.is_tree_edge(c, g) {
                    continue;
                }
                let d = self.act(c, Letter::pos(g));
                slot[c * self.ngens + g as usize] = Some(edges.len() as GenId);
                edges.push((c, g));
                words.push(Word::product([
                    &tr.reps[c],
                    &Word::gen(g),
                    &tr.reps[d].inverse(),
                ]));
            }
        }
        SchreierBasis {
            ngens: self.ngens,
            edges,
            words,
            slot,
        }
    }

    /// Rewrites `w ∈ L` as a word over the Schreier basis (generator `i` of
    /// the result stands for `schreier_basis().words[i]`).
    pub fn rewrite_in_subgroup(&self, basis: &SchreierBasis, w: &Word) -> Result<Word, CosetError> {
        let mut out = Vec::new();
        let mut c = 0usize;
        for &l in w.letters() {
            if l.is_inverse() {
                let d = self.act(c, l);
                if let Some(i) = basis.slot[d * self.ngens + l.gen() as usize] {
                    out.push(Letter::neg(i));
                }
                c = d;
            } else {
                if let Some(i) = basis.slot[c * self.ngens + l.gen() as usize] {
                    out.push(Letter::pos(i));
                }
                c = self.act(c, l);
            }
        }
        if c != 0 {
            return Err(CosetError::NotInSubgroup { coset: c });
        }
        Ok(Word::reduce(out))
    }

    /// Raw successor of `coset` under the column encoding of [`Letter`].
    pub fn column(&self, coset: usize, col: usize) -> usize {
        self.table[coset * 2 * self.ngens + col] as usize
    }
}

/// Schreier representatives, one per coset; `reps[0]` is the identity and
/// the set is prefix-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    pub reps: Vec<Word>,
}

impl Transversal {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.reps
            .iter()
            .all(|r| r.is_identity() || self.reps.contains(&r.without_last()))
    }
}

#[derive(Clone, Debug)]
pub struct SchreierBasis {
    ngens: usize,
    /// `(coset, generator)` of each basis element.
    pub edges: Vec<(usize, GenId)>,
    pub words: Vec<Word>,
    slot: Vec<Option<GenId>>,
}

impl SchreierBasis {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Evaluates a word over the basis back in `F`.
    pub fn evaluate(&self, expr: &Word) -> Word {
        expr.substitute(&self.words)
    }

    pub fn slot(&self, coset: usize, g: GenId) -> Option<GenId> {
        self.slot[coset * self.ngens + g as usize]
    }
}

/// Smith form of the relation matrix: `F/L` abelianized is
/// `Z^free_rank ⊕ ⊕ Z/d`.
pub fn abelianization(p: &Presentation) -> SmithForm {
    smith_normal_form(&p.relation_matrix())
}

/// Three-valued answer to "is `[F : L]` finite?".
#[derive(Clone, Debug)]
pub enum IndexVerdict {
    Finite(CosetTable),
    /// The abelianization of `F/L` has this positive free rank.
    Infinite { free_rank: usize },
    Undecided { max_cosets: usize },
}

pub fn decide_index(p: &Presentation, config: &EnumerationConfig) -> Result<IndexVerdict, CosetError> {
    let ab = abelianization(p);
    if ab.free_rank > 0 {
        return Ok(IndexVerdict::Infinite {
            free_rank: ab.free_rank,
        });
    }
    match enumerate(p, config) {
        Ok(t) => Ok(IndexVerdict::Finite(t)),
        Err(CosetError::Overflowed { max_cosets }) => Ok(IndexVerdict::Undecided { max_cosets }),
        Err(e) => Err(e),
    }
}
