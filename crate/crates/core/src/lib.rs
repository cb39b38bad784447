//! Moments of Frobenius traces in one-parameter families of elliptic curves.
//!
//! For a family `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with
//! coefficients in `Z[t]`, the crate computes every trace `a_t(p)` for
//! `t mod p`, accumulates the exact power sums `S_r(p) = sum_t a_t(p)^r`,
//! and analyses them:
//!
//! * [`closed_form`] checks the proven first and second moments of three
//!   template shapes exactly;
//! * [`bias`] studies the sign of the lower order terms of the even moments
//!   over blocks of consecutive primes, and estimates ranks from the first
//!   and odd moments;
//! * [`discovery`] fits `S_2 = p^2 + a p + b` per congruence class.
//!
//! [`run`] drives batch computations to and from CSV files.

pub mod bias;
pub mod closed_form;
pub mod config;
pub mod corpus;
pub mod discovery;
pub mod error;
pub mod family;
pub mod modular;
pub mod poly;
pub mod run;
pub mod store;
pub mod svg;
pub mod trace;

pub use error::{Error, Result};
pub use family::{CurveFamily, Fiber, Template};
pub use modular::{LegendreTable, PrimeList};
pub use poly::IntPolynomial;
pub use trace::MomentRecord;
