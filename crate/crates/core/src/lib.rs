//! Numeric toolkit for q-starlike and q-close-to-convex functions.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`series`] | truncated complex power series, q-dilation, q-difference operator |
//! | [`special`] | q-Pochhammer symbols, Heine series, dilogarithms, the extremal `k_q`, Friedman's nine functions |
//! | [`membership`] | grid verifiers for the classes `S*`, `S*_q`, `K`, `K_q` |
//! | [`criteria`] | coefficient sufficient conditions for `K_q` membership |
//! | [`bounds`] | coefficient bounds, their classical limits and series identities |
//! | [`verify`] | the end-to-end verification suite driven by the CLI |
//!
//! All series operations are pure and return fresh values.
//!
//! ```
//! use qconvex::{special, QParam};
//!
//! let q = QParam::new(0.5).unwrap();
//! let kq = special::kq_series(q, 8).unwrap();
//! // c_2 = -2 ln q / (1 - q) = 4 ln 2
//! assert!((kq.coeff(2).re - 4.0 * 2f64.ln()).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod criteria;
mod error;
pub mod membership;
pub mod series;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{DiskGrid, QParam, SeriesDocument, TruncatedSeries, DEFAULT_ORDER};
pub use special::CatalogId;
