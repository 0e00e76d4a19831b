#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use mncomm::{Letter, Word};
use rand::Rng;

pub fn random_word<R: Rng>(rng: &mut R, ngens: u32, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::reduce((0..len).map(|_| Letter::new(rng.gen_range(0..ngens), rng.gen())))
}

pub fn random_nonempty<R: Rng>(rng: &mut R, ngens: u32, max_len: usize) -> Word {
    loop {
        let w = random_word(rng, ngens, max_len);
        if !w.is_identity() {
            return w;
        }
    }
}

/// All reduced words of length at most `max_len`.
pub fn all_reduced_words(ngens: u32, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..ngens {
                for inv in [false, true] {
                    let l = Letter::new(g, inv);
                    if w.last() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|v| Word::reduce(v.iter().copied())));
        frontier = next;
    }
    out
}

pub type Perm = Vec<usize>;

pub fn compose(p: &Perm, q: &Perm) -> Perm {
    // apply p, then q
    p.iter().map(|&i| q[i]).collect()
}

pub fn invert(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn all_perms(n: usize) -> Vec<Perm> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn eval_perm(images: &[Perm], w: &Word) -> Perm {
    let n = images[0].len();
    let mut acc: Perm = (0..n).collect();
    for &l in w.letters() {
        let p = &images[l.gen() as usize];
        acc = if l.is_inverse() {
            compose(&acc, &invert(p))
        } else {
            compose(&acc, p)
        };
    }
    acc
}

pub fn group_order(gens: &[Perm]) -> usize {
    let n = gens[0].len();
    let id: Perm = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose(&p, g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

/// Largest image of `⟨X | R⟩` in `S_n` over all assignments of
/// permutations to generators. A lower bound for the group order, and
/// exact when a faithful degree-`n` representation exists.
pub fn max_perm_image(ngens: usize, relators: &[Word], n: usize) -> usize {
    let perms = all_perms(n);
    let mut best = 1;
    let mut idx = vec![0usize; ngens];
    loop {
        let images: Vec<Perm> = idx.iter().map(|&i| perms[i].clone()).collect();
        let id: Perm = (0..n).collect();
        if relators.iter().all(|r| eval_perm(&images, r) == id) {
            best = best.max(group_order(&images));
        }
        let mut k = 0;
        loop {
            if k == ngens {
                return best;
            }
            idx[k] += 1;
            if idx[k] < perms.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Word problem in a right-angled Artin group: cancel `a … a⁻¹` whenever
/// every letter in between commutes with `a`.
pub fn raag_reduce<F: Fn(u32, u32) -> bool>(w: &Word, commute: F) -> Vec<Letter> {
    let mut ls: Vec<Letter> = w.letters().to_vec();
    'outer: loop {
        for i in 0..ls.len() {
            for j in i + 1..ls.len() {
                if ls[j] == ls[i].inverse() {
                    ls.remove(j);
                    ls.remove(i);
                    continue 'outer;
                }
                if ls[j].gen() != ls[i].gen() && !commute(ls[i].gen(), ls[j].gen()) {
                    break;
                }
                if ls[j] == ls[i] {
                    break;
                }
            }
        }
        return ls;
    }
}

pub fn raag_trivial<F: Fn(u32, u32) -> bool>(w: &Word, commute: F) -> bool {
    raag_reduce(w, commute).is_empty()
}
