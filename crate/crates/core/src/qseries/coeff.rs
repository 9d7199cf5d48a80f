//! Coefficient-field abstraction shared by series, operators and solvers.

use super::qrat::QRat;
use std::fmt::{Debug, Display};

/// Which variable the Adams operations raise to the n-th power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adams {
    /// q -> q^n
    Q,
    /// (-q) -> (-q)^n, the grading in which t^{1/2} = -q.
    MinusQ,
}

pub trait Coeff: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn from_qrat(r: &QRat) -> Self;
    fn adams(&self, n: u32, var: Adams) -> Self;

    fn qpow(k: i64) -> Self {
        Self::from_qrat(&QRat::qpow(k))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }
}

impl Coeff for QRat {
    fn zero() -> Self {
        QRat::zero()
    }
    fn one() -> Self {
        QRat::one()
    }
    fn is_zero(&self) -> bool {
        QRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        QRat::inv(self)
    }
    fn from_i64(v: i64) -> Self {
        QRat::from_int(v)
    }
    fn from_qrat(r: &QRat) -> Self {
        r.clone()
    }
    fn adams(&self, n: u32, var: Adams) -> Self {
        match var {
            Adams::Q => self.adams_q(n),
            Adams::MinusQ => self.adams_mq(n),
        }
    }
    fn is_one(&self) -> bool {
        QRat::is_one(self)
    }
}
