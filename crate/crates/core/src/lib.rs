//! Pointwise numerical differentiation of functions sampled on scattered
//! multivariate points.
//!
//! Around a query point `c`, the crate selects `binom(d+s, s)` Discrete Leja
//! Points from the samples in a ball (row-pivoted LU on the rectangular
//! Vandermonde matrix), interpolates in the scaled shifted monomial basis
//! `((x - c)/h)^α`, and reads every partial derivative `D^ν f(c)`, `|ν| <= d`,
//! straight off the coefficients as `ν! c_{ν,h} / h^{|ν|}`.
//!
//! The same factorization yields the diagnostics that explain the accuracy of
//! the estimate: the fundamental Lagrange polynomials, stability constants,
//! a Lebesgue-constant estimate, the condition number, and the factors of the
//! error bounds.
//!
//! ```
//! use lejadiff::{diffengine, leja, pointset, MultiIndex};
//!
//! let cloud = pointset::halton_points(1000, 2).unwrap();
//! let center = [0.5, 0.5];
//! let candidates = pointset::points_in_ball(&cloud, &center, 0.5).unwrap();
//! let stencil = leja::extract_leja(&candidates, &center, 8).unwrap();
//!
//! let values: Vec<f64> = stencil.nodes().iter().map(|p| (p[0] + p[1]).exp()).collect();
//! let report = diffengine::interpolate(&stencil, &values, 2).unwrap();
//! let fx = report.derivative(&MultiIndex::new(vec![1, 0])).unwrap();
//! assert!((fx - 1f64.exp()).abs() < 1e-6);
//! ```

pub mod diffengine;
pub mod error;
pub mod experiment;
pub mod leja;
pub mod linalg;
pub mod multiindex;
pub mod output;
pub mod pointset;
pub mod testlab;
pub mod vandermonde;

pub use error::{Error, Result};
pub use leja::{extract_leja, Stencil};
pub use multiindex::MultiIndex;
pub use pointset::PointCloud;
