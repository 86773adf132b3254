//! Construction, verification and numerical search of encoding-unitary
//! families for deterministic dense coding over two-qudit Schmidt states.
//!
//! A family `{U_i}` is valid for `|ψ> = Σ sqrt(λ_j)|jj>` when the messages
//! `(U_i ⊗ I)|ψ>` are pairwise orthogonal, equivalently when
//! `tr(Λ U_i^† U_j) = 0` for `i != j` with `Λ = diag(λ)`.

pub mod analysis;
pub mod error;
pub mod families;
pub mod linalg;
pub mod search;
pub mod states;

pub use error::{Error, Result};
pub use families::EncodingFamily;
pub use linalg::{ComplexMatrix, UnitaryMatrix};
pub use states::SchmidtState;
