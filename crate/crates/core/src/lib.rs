//! Best approximation of a real number by a sum of `k` fractions whose
//! denominators are bounded by `N`, together with the arithmetic, Fourier
//! and counting machinery needed to check the `N^{-k}` bound numerically.
//!
//! The crate is organised bottom-up:
//!
//! * [`numtheory`]: sieves, Bézout chains and the direct coprime-tuple sums.
//! * [`kernel`]: the periodized triangle kernel and its Fourier coefficients.
//! * [`lcmset`]: the set of least common denominators `lcm(q_1, ..., q_k)`.
//! * [`solver`]: exact best approximation, brute-force oracle, continued fractions.
//! * [`experiments`]: seeded sweeps and fits that produce CSV tables.
//! * [`cli`]: the `kfrac` command-line front end.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod kernel;
pub mod lcmset;
pub mod numtheory;
pub mod solver;

pub use error::{Error, Result};
pub use lcmset::{DenominatorMode, LcmEntry, LcmSet};
pub use numtheory::SieveTables;
pub use solver::{ApproxSolution, Fraction, ThetaValue};
