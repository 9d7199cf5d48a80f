//! Rational functions in an extra commuting parameter Q over Q(q).
//!
//! Used where a closed-string parameter is adjoined to the coefficient field.

use super::coeff::{Adams, Coeff};
use super::qrat::QRat;
use std::fmt;

/// Dense polynomial in Q with coefficients in a field K.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<K: Coeff> {
    c: Vec<K>,
}

impl<K: Coeff> UPoly<K> {
    pub fn from_coeffs(mut c: Vec<K>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }
    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }
    pub fn constant(k: K) -> Self {
        Self::from_coeffs(vec![k])
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn coeffs(&self) -> &[K] {
        &self.c
    }
    fn lead(&self) -> K {
        self.c.last().cloned().unwrap_or_else(K::zero)
    }
    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).cloned().unwrap_or_else(K::zero);
                    let b = o.c.get(i).cloned().unwrap_or_else(K::zero);
                    a.add(&b)
                })
                .collect(),
        )
    }
    pub fn neg(&self) -> Self {
        UPoly { c: self.c.iter().map(|x| x.neg()).collect() }
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![K::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(c)
    }
    pub fn scale(&self, k: &K) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x.mul(k)).collect())
    }
    pub fn divrem(&self, o: &Self) -> (Self, Self) {
        let dn = o.c.len() - 1;
        let li = o.lead().inv().expect("nonzero divisor");
        let mut r = self.c.clone();
        let mut q = vec![K::zero(); self.c.len().saturating_sub(dn)];
        while r.len() > dn && !r.is_empty() {
            let top = r.last().unwrap().mul(&li);
            let off = r.len() - 1 - dn;
            for (j, b) in o.c.iter().enumerate() {
                r[off + j] = r[off + j].sub(&top.mul(b));
            }
            q[off] = top;
            r.pop();
        }
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lead().inv().unwrap())
    }
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }
}

/// Element of Q(q)(Q): `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq)]
pub struct QQRat {
    num: UPoly<QRat>,
    den: UPoly<QRat>,
}

impl QQRat {
    pub fn new(num: UPoly<QRat>, den: UPoly<QRat>) -> Self {
        assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero_val();
        }
        let g = num.gcd(&den);
        let (n, d) = if g.degree() == Some(0) { (num, den) } else { (num.divrem(&g).0, den.divrem(&g).0) };
        let li = d.lead().inv().unwrap();
        QQRat { num: n.scale(&li), den: d.scale(&li) }
    }
    fn zero_val() -> Self {
        QQRat { num: UPoly::zero(), den: UPoly::constant(QRat::one()) }
    }
    /// The parameter Q itself.
    pub fn big_q() -> Self {
        QQRat {
            num: UPoly::from_coeffs(vec![QRat::zero(), QRat::one()]),
            den: UPoly::constant(QRat::one()),
        }
    }
    pub fn numer(&self) -> &UPoly<QRat> {
        &self.num
    }
    pub fn denom(&self) -> &UPoly<QRat> {
        &self.den
    }
    /// Evaluate at Q = x, `None` on a pole.
    pub fn specialize(&self, x: &QRat) -> Option<QRat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(x) * &d.inv().unwrap())
    }
}

impl fmt::Display for QQRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &UPoly<QRat>| -> String {
            let parts: Vec<String> = p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| if i == 0 { format!("[{c}]") } else { format!("[{c}]*Q^{i}") })
                .collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        };
        if self.den.degree() == Some(0) {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "({})/({})", show(&self.num), show(&self.den))
        }
    }
}

impl Coeff for QQRat {
    fn zero() -> Self {
        Self::zero_val()
    }
    fn one() -> Self {
        Self::from_qrat(&QRat::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return QQRat::new(self.num.add(&o.num), self.den.clone());
        }
        QQRat::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        QQRat::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        QQRat { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(QQRat::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::from_qrat(&QRat::from_int(v))
    }
    fn from_qrat(r: &QRat) -> Self {
        QQRat { num: UPoly::constant(r.clone()), den: UPoly::constant(QRat::one()) }
    }
    fn adams(&self, n: u32, var: Adams) -> Self {
        let sub = |p: &UPoly<QRat>| {
            let mut c = vec![QRat::zero(); p.coeffs().len().saturating_sub(1) * n as usize + 1];
            for (i, x) in p.coeffs().iter().enumerate() {
                c[i * n as usize] = x.adams(n, var);
            }
            UPoly::from_coeffs(c)
        };
        QQRat::new(sub(&self.num), sub(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arith_and_specialization() {
        let q = QQRat::big_q();
        let one = QQRat::one();
        let a = one.sub(&q); // 1 - Q
        let b = one.sub(&q.mul(&q)); // 1 - Q^2
        let r = b.div(&a).unwrap(); // 1 + Q
        assert_eq!(r, one.add(&q));
        assert_eq!(r.specialize(&QRat::from_int(2)).unwrap(), QRat::from_int(3));
    }
}
