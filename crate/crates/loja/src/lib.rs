//! Exact and numeric growth analysis of polynomial mappings at infinity.
//!
//! For a polynomial mapping F = (f_1, ..., f_m): C^n -> C^m, the
//! Lojasiewicz exponent at infinity measures the sharpest power growth
//! A |z|^nu <= |F(z)| valid for large |z|. The exponent is attained on the
//! curve S = {f_1 ... f_m = 0}, which makes it computable: for n = 2 this
//! crate computes it exactly as a rational number (or -infinity) from the
//! Puiseux branches of S at infinity, certifies it with per-branch data,
//! and decides properness (exponent > 0). For general n a sampling
//! estimator fits the growth rate on polycylinders of increasing radius,
//! restricted to S and on the full boundary, and reports their agreement.
//!
//! The exact engine works over algebraic extension towers with exact zero
//! tests (product-of-fields towers split dynamically when a zero divisor
//! shows up), so every degree decision is sound; complex enclosures are
//! used only for output and root ordering.
//!
//! Entry points:
//! - [`exponent::lojasiewicz_exponent`] / [`exponent::is_proper`] — the
//!   exact engine for mappings of two variables.
//! - [`puiseux::expand_branches`] / [`puiseux::genericize`] — branches at
//!   infinity of a plane curve.
//! - [`estimator::estimate_exponent`] / [`estimator::lemma2_check`] — the
//!   numeric side.
//! - [`cli::run`] — the `loja` command-line tool.
//!
//! The runnable examples cover each capability; see `examples/`.

pub mod ball;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod exponent;
pub mod gcd;
pub mod multipoly;
pub mod parser;
pub mod puiseux;
pub mod rational;
pub mod rng;
pub mod tower;

pub use error::{Error, Result};

// All public values are immutable after construction and freely shareable
// across threads.
#[cfg(test)]
mod thread_safety {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_sync() {
        assert_send_sync::<crate::multipoly::MultiPoly>();
        assert_send_sync::<crate::tower::AlgebraicNumber>();
        assert_send_sync::<crate::tower::UniPolyExt>();
        assert_send_sync::<crate::ball::CBall>();
        assert_send_sync::<crate::puiseux::Branch>();
        assert_send_sync::<crate::exponent::ExponentReport>();
        assert_send_sync::<crate::estimator::EstimateReport>();
    }
}
pub use exponent::{is_proper, lojasiewicz_exponent, ExponentReport, MappingSpec};
pub use multipoly::MultiPoly;
pub use parser::parse_poly;
pub use rational::Rational;
