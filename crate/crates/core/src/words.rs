//! Free-group words over a finite, declared alphabet.
//!
//! Conventions used throughout the crate:
//!
//! * `u^f = f⁻¹ u f` (right conjugation),
//! * `[u, v] = u⁻¹ v⁻¹ u v`,
//! * `[a₁, …, a_k] = [[a₁, …, a_{k−1}], a_k]` (left-normalized).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a generator in its [`Alphabet`]. Declaration order is the
/// total order used for every deterministic tie-break in the crate.
pub type GenId = u32;

/// A signed generator. Encoded as `2 * gen + (inverse as u32)`, so the
/// derived order is `x, x⁻¹, y, y⁻¹, …`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u32);

impl Letter {
    pub fn new(gen: GenId, inverse: bool) -> Self {
        Letter(2 * gen + inverse as u32)
    }

    pub fn pos(gen: GenId) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: GenId) -> Self {
        Letter::new(gen, true)
    }

    #[inline]
    pub fn gen(self) -> GenId {
        self.0 >> 1
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Column index used by coset tables and graphs (same as the encoding).
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        Letter(i as u32)
    }
}

/// A freely reduced word. The empty word is the identity.
///
/// Ordering is shortlex: shorter words first, then lexicographic by
/// [`Letter`] order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", l.gen())?;
            if l.is_inverse() {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn gen(g: GenId) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Product of a sequence of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut out = Vec::new();
        for w in words {
            for &l in &w.0 {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `self^f = f⁻¹ · self · f`.
    pub fn conjugate(&self, f: &Word) -> Word {
        Word::product([&f.inverse(), self, f])
    }

    /// `[self, v] = self⁻¹ v⁻¹ self v`.
    pub fn commutator(&self, v: &Word) -> Word {
        Word::product([&self.inverse(), &v.inverse(), self, v])
    }

    /// Left-normalized commutator of two or more words.
    pub fn left_normed(words: &[Word]) -> Word {
        let mut it = words.iter();
        let mut acc = it.next().cloned().unwrap_or_default();
        for w in it {
            acc = acc.commutator(w);
        }
        acc
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &l in &base.0 {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    /// Splits `self` as `conjugate(core, conjugator)` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        let core = Word(self.0[k..n - k].to_vec());
        let conjugator = Word(self.0[n - k..].to_vec());
        (core, conjugator)
    }

    /// Exponent sum of generator `g`.
    pub fn exponent_sum(&self, g: GenId) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen() == g)
            .map(|l| l.sign())
            .sum()
    }

    /// Largest generator index occurring, plus one.
    pub fn rank_hint(&self) -> usize {
        self.0.iter().map(|l| l.gen() as usize + 1).max().unwrap_or(0)
    }

    /// Substitutes `images[g]` for every occurrence of generator `g`.
    ///
    /// Panics if a generator has no image.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let inverses: Vec<Word> = images.iter().map(Word::inverse).collect();
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = if l.is_inverse() {
                &inverses[l.gen() as usize]
            } else {
                &images[l.gen() as usize]
            };
            for &m in &img.0 {
                push_reduced(&mut out, m);
            }
        }
        Word(out)
    }

    /// Whether `prefix` is a literal prefix of `self`.
    pub fn has_prefix(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// Drops the last letter.
    pub fn without_last(&self) -> Word {
        let mut v = self.0.clone();
        v.pop();
        Word(v)
    }
}

#[inline]
fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid generator name `{0}`: expected a letter optionally followed by digits")]
    InvalidName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A finite, ordered set of generator names.
///
/// A name is one ASCII letter followed by an optional run of digits or
/// underscores (`x`, `a1`, `t_2`). Juxtaposition therefore needs no
/// separator: `xy` is `x·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, GenId>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_digit() || c == '_')
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, WordError> {
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        let mut index = HashMap::new();
        let mut out = Vec::new();
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !valid_name(n) {
                return Err(WordError::InvalidName(n.to_string()));
            }
            if index.insert(n.to_string(), i as GenId).is_some() {
                return Err(WordError::DuplicateGenerator(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet { names: out, index })
    }

    /// Alphabet of `n` generators named by `prefix` and an index, e.g.
    /// `s0, s1, …`.
    pub fn numbered(prefix: char, n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as GenId))
            .collect();
        Alphabet { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.names[g as usize]
    }

    pub fn lookup(&self, name: &str) -> Result<GenId, WordError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))
    }

    /// Builds the reduced word of a raw signed-letter sequence given by
    /// name.
    pub fn reduce_named<S: AsRef<str>>(&self, raw: &[(S, bool)]) -> Result<Word, WordError> {
        let letters = raw
            .iter()
            .map(|(n, inv)| self.lookup(n.as_ref()).map(|g| Letter::new(g, *inv)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::reduce(letters))
    }

    pub fn parse(&self, s: &str) -> Result<Word, WordError> {
        let mut p = Parser::new(s, self);
        let w = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(w)
    }

    /// Parses a comma-separated list; commas inside brackets or
    /// parentheses belong to the inner expression.
    pub fn parse_list(&self, s: &str) -> Result<Vec<Word>, WordError> {
        let mut p = Parser::new(s, self);
        let mut out = Vec::new();
        p.skip_ws();
        if p.pos == p.src.len() {
            return Ok(out);
        }
        loop {
            out.push(p.expr()?);
            p.skip_ws();
            match p.peek() {
                Some(b',') => p.pos += 1,
                None => break,
                Some(_) => return Err(p.err("expected `,` or end of list")),
            }
        }
        Ok(out)
    }

    /// Renders a word in the input syntax, collapsing runs into powers:
    /// `x y^-2 x`. The identity renders as `1`.
    pub fn format(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let ls = w.letters();
        let mut i = 0;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let k = (j - i) as i64 * ls[i].sign();
            let name = self.name(ls[i].gen());
            if k == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{k}"));
            }
            i = j;
        }
        parts.join(" ")
    }

    /// Wraps a word for `Display` under this alphabet.
    pub fn show<'a>(&'a self, w: &'a Word) -> Shown<'a> {
        Shown { alphabet: self, word: w }
    }
}

pub struct Shown<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format(self.word))
    }
}

// Grammar:
//   expr     := term (('*')? term)*
//   term     := atom ('^' exponent)*
//   atom     := name | '1' | '(' expr ')' | '{' expr '}' | '[' expr (',' expr)+ ']'
//   exponent := ('-' | '+')? digits | atom          (atom: u^f = f⁻¹uf)
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str, alphabet: &'a Alphabet) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
            alphabet,
        }
    }

    fn err(&self, msg: &str) -> WordError {
        WordError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn starts_atom(c: u8) -> bool {
        c.is_ascii_alphabetic() || c == b'1' || c == b'(' || c == b'[' || c == b'{'
    }

    fn expr(&mut self) -> Result<Word, WordError> {
        let mut acc = Word::identity();
        let mut any = false;
        loop {
            match self.peek() {
                Some(b'*') if any => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c) if Self::starts_atom(c) => {}
                        _ => return Err(self.err("expected a factor after `*`")),
                    }
                }
                Some(c) if Self::starts_atom(c) => {}
                _ => break,
            }
            let t = self.term()?;
            acc = acc.multiply(&t);
            any = true;
        }
        if !any {
            return Err(self.err("expected a word"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Word, WordError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c == b'-' || c == b'+' || c.is_ascii_digit() => {
                    let k = self.integer()?;
                    base = base.pow(k);
                }
                Some(c) if Self::starts_atom(c) => {
                    let f = self.atom()?;
                    base = base.conjugate(&f);
                }
                _ => return Err(self.err("expected an exponent after `^`")),
            }
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let start = self.pos;
        let mut neg = false;
        if let Some(&c) = self.src.get(self.pos) {
            if c == b'-' || c == b'+' {
                neg = c == b'-';
                self.pos += 1;
            }
        }
        self.skip_ws();
        let ds = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if ds == self.pos {
            self.pos = start;
            return Err(self.err("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[ds..self.pos]).expect("ascii digits");
        let v: i64 = text
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'(') => self.grouped(b')'),
            Some(b'{') => self.grouped(b'}'),
            Some(b'[') => {
                self.pos += 1;
                let mut items = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    items.push(self.expr()?);
                }
                if self.peek() != Some(b']') {
                    return Err(self.err("expected `]`"));
                }
                self.pos += 1;
                if items.len() < 2 {
                    return Err(self.err("commutator needs at least two entries"));
                }
                Ok(Word::left_normed(&items))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                let g = self.alphabet.lookup(name)?;
                Ok(Word::gen(g))
            }
            _ => Err(self.err("expected a generator, `1`, `(`, `{` or `[`")),
        }
    }

    fn grouped(&mut self, close: u8) -> Result<Word, WordError> {
        self.pos += 1;
        let w = self.expr()?;
        if self.peek() != Some(close) {
            return Err(self.err(&format!("expected `{}`", close as char)));
        }
        self.pos += 1;
        Ok(w)
    }
}

/// Collects the generator names appearing in free-form word text, in
/// order of first appearance. Used where an auxiliary alphabet is implied
/// by the input (e.g. images in a free-group backend).
pub fn collect_names(texts: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for t in texts {
        let b = t.as_bytes();
        let mut i = 0;
        while i < b.len() {
            if b[i].is_ascii_alphabetic() {
                let s = i;
                i += 1;
                while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'_') {
                    i += 1;
                }
                let n = &t[s..i];
                if !out.iter().any(|o| o == n) {
                    out.push(n.to_string());
                }
            } else {
                i += 1;
            }
        }
    }
    out
}
