//! Truncated multivariate power series in X_1..X_g.

use super::coeff::{Adams, Coeff};
use super::qrat::{qpoch2, QRat};
use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;

pub type Exp = Vec<u32>;

/// Σ c_v X^v over |v| ≤ order; absent keys are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct XSeries<C: Coeff = QRat> {
    g: usize,
    order: u32,
    terms: BTreeMap<Exp, C>,
}

pub fn total(v: &[u32]) -> u32 {
    v.iter().sum()
}

/// All exponent vectors of length g and total degree exactly k, lexicographic.
pub fn exponents_of_degree(g: usize, k: u32) -> Vec<Exp> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; g];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exp>) {
        let g = cur.len();
        if i + 1 == g {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    if g == 0 {
        if k == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, k, &mut cur, &mut out);
    out
}

/// All exponent vectors with total degree ≤ d, by increasing degree.
pub fn exponents_upto(g: usize, d: u32) -> Vec<Exp> {
    (0..=d).flat_map(|k| exponents_of_degree(g, k)).collect()
}

pub fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    InvertUnit,
}

/// Dispatcher for the three basic ring operations (`b` ignored for inversion).
pub fn series_arith<C: Coeff>(a: &XSeries<C>, b: &XSeries<C>, op: SeriesOp) -> Result<XSeries<C>> {
    if op != SeriesOp::InvertUnit && (a.g != b.g || a.order != b.order) {
        return Err(Error::Dimension(format!(
            "series shapes (g={}, D={}) vs (g={}, D={})",
            a.g, a.order, b.g, b.order
        )));
    }
    match op {
        SeriesOp::Add => Ok(a.add(b)),
        SeriesOp::Mul => Ok(a.mul(b)),
        SeriesOp::InvertUnit => a.invert_unit(),
    }
}

impl<C: Coeff> XSeries<C> {
    pub fn zero(g: usize, order: u32) -> Self {
        XSeries { g, order, terms: BTreeMap::new() }
    }

    pub fn one(g: usize, order: u32) -> Self {
        Self::constant(g, order, C::one())
    }

    pub fn constant(g: usize, order: u32, c: C) -> Self {
        let mut s = Self::zero(g, order);
        s.set(vec![0; g], c);
        s
    }

    pub fn monomial(g: usize, order: u32, exp: Exp, c: C) -> Self {
        let mut s = Self::zero(g, order);
        s.set(exp, c);
        s
    }

    /// X_i (0-based).
    pub fn var(g: usize, order: u32, i: usize) -> Self {
        let mut e = vec![0; g];
        e[i] = 1;
        Self::monomial(g, order, e, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, C)>>(g: usize, order: u32, it: I) -> Self {
        let mut s = Self::zero(g, order);
        for (e, c) in it {
            let cur = s.get(&e);
            s.set(e, cur.add(&c));
        }
        s
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Exp, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.get(&vec![0; self.g])
    }

    /// Sets a coefficient; zero values and exponents beyond the order are dropped.
    pub fn set(&mut self, e: Exp, c: C) {
        assert_eq!(e.len(), self.g, "exponent length must equal g");
        if total(&e) > self.order || c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        Self::from_terms(self.g, order, self.terms.iter().map(|(e, c)| (e.clone(), c.clone())))
    }

    pub fn map_coeffs<F: Fn(&Exp, &C) -> C>(&self, f: F) -> Self {
        Self::from_terms(self.g, self.order, self.terms.iter().map(|(e, c)| (e.clone(), f(e, c))))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in &o.terms {
            let cur = s.get(e);
            s.set(e.clone(), cur.add(c));
        }
        s.order = self.order.min(o.order);
        s.truncate(s.order)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        self.map_coeffs(|_, c| c.mul(k))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.g, o.g, "series with different g");
        let order = self.order.min(o.order);
        let mut acc: BTreeMap<Exp, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = total(ea);
            if da > order {
                continue;
            }
            for (eb, cb) in &o.terms {
                if da + total(eb) > order {
                    continue;
                }
                let e: Exp = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let p = ca.mul(cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&p),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        XSeries { g: self.g, order, terms: acc }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.g, self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0
            .inv()
            .ok_or_else(|| Error::NotInvertible("series has zero constant term".into()))?;
        // a = c0 (1 + h); a^{-1} = c0^{-1} Σ (-h)^j
        let h = self.scale(&inv0).sub(&Self::one(self.g, self.order));
        let mh = h.neg();
        let mut acc = Self::one(self.g, self.order);
        let mut pw = Self::one(self.g, self.order);
        for _ in 0..self.order {
            pw = pw.mul(&mh);
            if pw.is_empty() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&inv0))
    }

    /// log F for F with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::Invalid("log requires constant term 1".into()));
        }
        let h = self.sub(&Self::one(self.g, self.order));
        let mut acc = Self::zero(self.g, self.order);
        let mut pw = Self::one(self.g, self.order);
        for j in 1..=self.order as i64 {
            pw = pw.mul(&h);
            if pw.is_empty() {
                break;
            }
            let k = C::from_i64(if j % 2 == 1 { 1 } else { -1 }).div(&C::from_i64(j)).unwrap();
            acc = acc.add(&pw.scale(&k));
        }
        Ok(acc)
    }

    /// exp f for f with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Invalid("exp requires zero constant term".into()));
        }
        let mut acc = Self::one(self.g, self.order);
        let mut pw = Self::one(self.g, self.order);
        for j in 1..=self.order as i64 {
            pw = pw.mul(self).scale(&C::from_i64(1).div(&C::from_i64(j)).unwrap());
            if pw.is_empty() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc)
    }

    /// Adams operation: X_i -> X_i^n and the coefficient variable per `var`.
    pub fn adams(&self, n: u32, var: Adams) -> Self {
        assert!(n >= 1, "Adams index must be positive");
        Self::from_terms(
            self.g,
            self.order,
            self.terms
                .iter()
                .filter(|(e, _)| total(e) * n <= self.order)
                .map(|(e, c)| (e.iter().map(|x| x * n).collect(), c.adams(n, var))),
        )
    }

    /// Plethystic logarithm: f with Exp(f) = F, F(0) = 1.
    pub fn plethystic_log_with(&self, var: Adams) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::Invalid("plethystic log requires constant term 1".into()));
        }
        let l = self.log()?;
        let mut acc = Self::zero(self.g, self.order);
        for n in 1..=self.order.max(1) {
            let mu = mobius(n);
            if mu == 0 {
                continue;
            }
            let k = C::from_i64(mu).div(&C::from_i64(n as i64)).unwrap();
            acc = acc.add(&l.adams(n, var).scale(&k));
        }
        Ok(acc)
    }

    pub fn plethystic_exp_with(&self, var: Adams) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Invalid("plethystic exp requires zero constant term".into()));
        }
        let mut acc = Self::zero(self.g, self.order);
        for n in 1..=self.order.max(1) {
            let k = C::one().div(&C::from_i64(n as i64)).unwrap();
            acc = acc.add(&self.adams(n, var).scale(&k));
        }
        acc.exp()
    }

    pub fn plethystic_log(&self) -> Result<Self> {
        self.plethystic_log_with(Adams::Q)
    }

    pub fn plethystic_exp(&self) -> Result<Self> {
        self.plethystic_exp_with(Adams::Q)
    }

    /// First exponent (lexicographic within increasing degree) where the two differ.
    pub fn first_difference(&self, o: &Self) -> Option<(Exp, C, C)> {
        let order = self.order.min(o.order);
        for e in exponents_upto(self.g, order) {
            let (a, b) = (self.get(&e), o.get(&e));
            if a != b {
                return Some((e, a, b));
            }
        }
        None
    }

    /// Equality of all coefficients with |v| ≤ min order.
    pub fn eq_upto(&self, o: &Self) -> bool {
        self.g == o.g && self.first_difference(o).is_none()
    }
}

/// Substitutes q -> q^n and X_i -> X_i^n (exponents beyond the order are dropped).
pub fn adams_substitute(f: &XSeries<QRat>, n: u32) -> XSeries<QRat> {
    f.adams(n, Adams::Q)
}

/// (c X^v; q^2)_∞ truncated at total degree `order`.
pub fn pochhammer_inf(c: &QRat, v: &[u32], order: u32) -> Result<XSeries<QRat>> {
    let dv = total(v);
    if dv == 0 {
        return Err(Error::Invalid("pochhammer_inf needs a nonzero exponent vector".into()));
    }
    let g = v.len();
    let mut s = XSeries::zero(g, order);
    let mut k = 0u32;
    while k * dv <= order {
        let kk = k as i64;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let coef = &(&QRat::from_int(sign) * &QRat::qpow(kk * (kk - 1))) * &c.pow(kk);
        let coef = &coef * &qpoch2(k as usize).inv().unwrap();
        s.set(v.iter().map(|x| x * k).collect(), coef);
        k += 1;
    }
    Ok(s)
}

impl XSeries<QRat> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"exp": e, "num": c.num_string(), "den": c.den_string()}))
            .collect();
        json!({"g": self.g, "order": self.order, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("series JSON: {m}"));
        let g = v["g"].as_u64().ok_or_else(|| bad("missing g"))? as usize;
        let order = v["order"].as_u64().ok_or_else(|| bad("missing order"))? as u32;
        let mut s = XSeries::zero(g, order);
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let e: Exp = serde_json::from_value(t["exp"].clone()).map_err(|e| bad(&e.to_string()))?;
            if e.len() != g {
                return Err(bad("exponent length"));
            }
            let num = t["num"].as_str().ok_or_else(|| bad("num"))?;
            let den = t["den"].as_str().ok_or_else(|| bad("den"))?;
            let c = QRat::parse(num, den).map_err(|m| bad(&m))?;
            let cur = s.get(&e);
            s.set(e, &cur + &c);
        }
        Ok(s)
    }
}

impl<C: Coeff> std::fmt::Display for XSeries<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.order + 1);
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{}]", c)?;
            for (i, x) in e.iter().enumerate() {
                if *x == 1 {
                    write!(f, "*X{}", i + 1)?;
                } else if *x > 1 {
                    write!(f, "*X{}^{}", i + 1, x)?;
                }
            }
        }
        write!(f, " + O({})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1(d: u32) -> XSeries {
        XSeries::var(1, d, 0)
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(exponents_upto(3, 2).len(), 10);
    }

    #[test]
    fn mobius_values() {
        let m: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(m, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn basic_arith() {
        let one = XSeries::one(1, 4);
        let a = one.add(&x1(4));
        let b = one.sub(&x1(4));
        let p = a.mul(&b);
        assert_eq!(p, one.sub(&x1(4).mul(&x1(4))));
        let inv = b.invert_unit().unwrap();
        for k in 0..=4 {
            assert!(inv.get(&[k]).is_one());
        }
    }

    #[test]
    fn pochhammer_first_terms() {
        let p = pochhammer_inf(&QRat::one(), &[1], 2).unwrap();
        assert_eq!(p.get(&[1]), -&qpoch2(1).inv().unwrap());
        assert_eq!(p.get(&[2]), &QRat::qpow(2) * &qpoch2(2).inv().unwrap());
        assert!(pochhammer_inf(&QRat::one(), &[0], 2).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p = pochhammer_inf(&QRat::from_laurent(&[(-1, -1)]), &[1, 2], 6).unwrap();
        let j = p.to_json();
        let back = XSeries::from_json(&serde_json::from_str(&j.to_string()).unwrap()).unwrap();
        assert_eq!(p, back);
    }
}
