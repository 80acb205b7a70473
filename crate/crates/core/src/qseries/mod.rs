//! Truncated formal power series in `q` over exact integer polynomials in the
//! tracking variables `z` (different parts) and `w` (total or class-restricted
//! parts), plus the product-form generating functions built on them.

mod gf;
mod poly;
mod series;

pub use gf::*;
pub use poly::PolyZW;
pub use series::TruncatedSeries;
