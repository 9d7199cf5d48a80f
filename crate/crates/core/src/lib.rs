//! Exact computations for quantized chromatic Lagrangians of cubic planar graphs.
//!
//! Layers, bottom-up: [`intlin`] and [`qseries`] (exact arithmetic), [`cubicmap`]
//! (embedded graphs), [`qtorus`] (quantum torus acting on series), [`seeds`]
//! (framed seeds and mutations), [`wavefn`] and [`quiverdt`] (wavefunctions and
//! integer invariants), [`foam`] (filling homology), [`chromatic`] (classical
//! checks) and [`faddeev`] (numerical non-compact dilogarithm).

pub mod chromatic;
pub mod cli;
pub mod cubicmap;
pub mod faddeev;
pub mod foam;
pub mod intlin;
pub mod qseries;
pub mod qtorus;
pub mod quiverdt;
pub mod seeds;
pub mod wavefn;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
