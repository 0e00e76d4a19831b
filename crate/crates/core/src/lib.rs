//! Finite presentability of `F/[M,N]` for normal closures `M`, `N` in a
//! finitely generated free group `F`.
//!
//! When `[F : MN]` is finite, [`lemma1`] builds a finite relator set `R`
//! with `F/[M,N] ≅ ⟨X | R⟩` and certifies each defining commutator as a
//! product of conjugates of `R`. When the index is infinite, [`wreath`]
//! refutes any proposed finite normal generating set `Y` by exhibiting an
//! element of `[M,N]` outside `ncl(Y)`.

pub mod coset;
pub mod lemma1;
pub mod nilpotent;
pub mod presentation;
pub mod snf;
pub mod stallings;
pub mod words;
pub mod wreath;

pub use presentation::Presentation;
pub use words::{Alphabet, GenId, Letter, Word};
