//! Computational experiments on the distribution of multiplicative functions
//! in arithmetic progressions.
//!
//! The crate is split by subject:
//!
//! * [`arith`]: primes, factorization, totients, the smooth/rough split of a modulus.
//! * [`multfn`]: 1-bounded multiplicative functions, their `Λ_f` coefficients,
//!   class-C membership and Harper's identity.
//! * [`chars`]: Dirichlet character groups, conductors, inducing, Gauss coefficients.
//! * [`smooth`]: `Ψ(x,y)`, Dickman's `ρ`, the saddle point `α(x,y)`.
//! * [`disc`]: twisted sums `S_f(x,χ)`, discrepancies `Δ`, `Δ_k`, `Δ_Ξ` and their averages.
//! * [`ramare`]: Ramaré weights and the sieve/bilinear decomposition.
//! * [`barrier`]: smooth bump, Poisson summation for lattice counts, reciprocity.
//! * [`lab`]: obstruction constructions, Gowers norms, and the experiment runner.

pub mod arith;
pub mod barrier;
pub mod chars;
pub mod disc;
mod error;
pub mod lab;
pub mod multfn;
pub mod par;
pub mod quad;
pub mod ramare;
pub mod smooth;

pub use error::{Error, Result};

/// Complex double used for all function values.
pub type C64 = num_complex::Complex64;

/// `e(t) = exp(2πit)`.
#[inline]
pub fn e(t: f64) -> C64 {
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    C64::new(c, s)
}
