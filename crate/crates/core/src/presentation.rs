//! The `M`/`N` presentation file format and the relator set `A ∪ B`.
//!
//! ```text
//! # F(x, y), M = ncl(x), N = ncl(y^2)
//! generators: x y
//! M: x
//! N: y^2
//! ```
//!
//! `M:` and `N:` lines may repeat; their word lists are concatenated.

use std::path::Path;

use thiserror::Error;

use crate::snf::IntMatrix;
use crate::words::{Alphabet, Word, WordError};

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("line {line}: {source}")]
    Word {
        line: usize,
        #[source]
        source: WordError,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `generators:` line")]
    NoGenerators,
    #[error("{0} has no words; normal closures must be of non-empty sets")]
    EmptySide(&'static str),
    #[error("{side} word #{index} is the identity")]
    IdentityWord { side: &'static str, index: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// `M = ncl(A)`, `N = ncl(B)` inside the free group on `alphabet`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub a: Vec<Word>,
    pub b: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, a: Vec<Word>, b: Vec<Word>) -> Result<Self, PresentationError> {
        if a.is_empty() {
            return Err(PresentationError::EmptySide("M"));
        }
        if b.is_empty() {
            return Err(PresentationError::EmptySide("N"));
        }
        for (side, words) in [("M", &a), ("N", &b)] {
            if let Some(i) = words.iter().position(Word::is_identity) {
                return Err(PresentationError::IdentityWord { side, index: i });
            }
        }
        Ok(Presentation { alphabet, a, b })
    }

    /// Convenience constructor from word text.
    pub fn from_strs(gens: &[&str], a: &[&str], b: &[&str]) -> Result<Self, PresentationError> {
        let alphabet =
            Alphabet::new(gens).map_err(|source| PresentationError::Word { line: 0, source })?;
        let parse = |ws: &[&str]| -> Result<Vec<Word>, PresentationError> {
            ws.iter()
                .map(|s| {
                    alphabet
                        .parse(s)
                        .map_err(|source| PresentationError::Word { line: 0, source })
                })
                .collect()
        };
        let (a, b) = (parse(a)?, parse(b)?);
        Presentation::new(alphabet, a, b)
    }

    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, rest)) = body.split_once(':') else {
                return Err(PresentationError::Syntax {
                    line,
                    msg: format!("expected `key: value`, got `{body}`"),
                });
            };
            match key.trim() {
                "generators" => {
                    if alphabet.is_some() {
                        return Err(PresentationError::Syntax {
                            line,
                            msg: "duplicate `generators:` line".into(),
                        });
                    }
                    let names: Vec<&str> = rest
                        .split(|c: char| c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .collect();
                    alphabet = Some(
                        Alphabet::new(&names).map_err(|source| PresentationError::Word { line, source })?,
                    );
                }
                side @ ("M" | "N") => {
                    let alph = alphabet.as_ref().ok_or(PresentationError::Syntax {
                        line,
                        msg: "`generators:` must come first".into(),
                    })?;
                    let words = alph
                        .parse_list(rest)
                        .map_err(|source| PresentationError::Word { line, source })?;
                    if side == "M" {
                        a.extend(words);
                    } else {
                        b.extend(words);
                    }
                }
                other => {
                    return Err(PresentationError::Syntax {
                        line,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let alphabet = alphabet.ok_or(PresentationError::NoGenerators)?;
        Presentation::new(alphabet, a, b)
    }

    pub fn load(path: &Path) -> Result<Self, PresentationError> {
        Presentation::parse(&std::fs::read_to_string(path)?)
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    /// `A ∪ B`, deduplicated by free equality, in input order. Its normal
    /// closure is `L = MN`.
    pub fn relators(&self) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::new();
        for w in self.a.iter().chain(&self.b) {
            if !out.contains(w) {
                out.push(w.clone());
            }
        }
        out
    }

    /// Exponent-sum matrix of the relators; its cokernel is the
    /// abelianization of `F/L`.
    pub fn relation_matrix(&self) -> IntMatrix {
        relation_matrix(&self.relators(), self.rank())
    }

    /// Presentation with the roles of `M` and `N` exchanged.
    pub fn swapped(&self) -> Presentation {
        Presentation {
            alphabet: self.alphabet.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let f = |ws: &[Word]| {
            ws.iter()
                .map(|w| self.alphabet.format(w))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "generators: {}\nM: {}\nN: {}\n",
            self.alphabet.names().join(" "),
            f(&self.a),
            f(&self.b)
        )
    }
}

pub fn relation_matrix(relators: &[Word], rank: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = relators
        .iter()
        .map(|w| (0..rank as u32).map(|g| w.exponent_sum(g)).collect())
        .collect();
    IntMatrix::from_rows(&rows, rank)
}
