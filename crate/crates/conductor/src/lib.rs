//! Exact symbolic computation with conductor squares of commutative rings:
//! intrinsic pushouts `A = B ×_K C`, conductor ideals, patched quasi-coherent
//! modules, lex valuation compositions, finite spectral topology, and
//! Zariski-style chart gluing — every structural identity certified by exact
//! computation over `QQ` or `F_p`.
//!
//! The narrative guide lives in `book/`; its code snippets compile as
//! doc-tests of this crate, so the book and the library cannot drift apart.

pub mod corpus;
pub mod error;
pub mod glue;
pub mod limits;
pub mod linalg;
pub mod modules;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod square;
pub mod topology;
pub mod valuation;

pub use error::{Error, Result};
pub use limits::{CancelToken, Limits};
pub use poly::order::MonomialOrder;
pub use poly::{Context, MPoly};
pub use scalar::{FieldTag, Scalar};
