//! Exact arithmetic in Q(q) and truncated power series in X over it.

mod coeff;
mod qq;
mod qrat;
mod series;
mod zpoly;

pub use coeff::{Adams, Coeff};
pub use qq::{QQRat, UPoly};
pub use qrat::{qpoch2, qpoch2_of, QLaurentPoly, QRat};
pub use series::{
    adams_substitute, exponents_of_degree, exponents_upto, mobius, pochhammer_inf, series_arith, total, Exp,
    SeriesOp, XSeries,
};
pub use zpoly::ZPoly;

/// Returns the Laurent polynomial `r` equals, or `None` when it is not one with
/// integer coefficients.
pub fn reduce_to_laurent(r: &QRat) -> Option<QLaurentPoly> {
    r.to_laurent()
}
