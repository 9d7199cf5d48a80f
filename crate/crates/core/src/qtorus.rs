//! The quantum torus on `U_1..U_g, V_1..V_g` (with `V_iU_i = q²U_iV_i`) and its
//! representation on power series in `X`: `U_i` multiplies by `X_i`, `V_i`
//! substitutes `X_i → q²X_i`.
//!
//! Monomials are stored in Weyl form `sign·(−q)^c·X_{(m,n)}` with
//! `X_{(m,n)} = q^{m·n}U^mV^n`, so that `X_aX_b = q^{⟨a,b⟩}X_{a+b}` where
//! `⟨a,b⟩ = n_a·m_b − m_a·n_b`. All seed monomials have `sign = +1` in this form.

use crate::intlin::IntMatrix;
use crate::qseries::{Coeff, QRat, XSeries};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusMonomial {
    #[serde(default = "one_i8", skip_serializing_if = "is_one_i8")]
    pub sign: i8,
    pub c: i64,
    pub m: Vec<i64>,
    pub n: Vec<i64>,
}

fn one_i8() -> i8 {
    1
}
fn is_one_i8(s: &i8) -> bool {
    *s == 1
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl TorusMonomial {
    pub fn identity(g: usize) -> Self {
        TorusMonomial { sign: 1, c: 0, m: vec![0; g], n: vec![0; g] }
    }

    pub fn weyl(c: i64, m: Vec<i64>, n: Vec<i64>) -> Self {
        assert_eq!(m.len(), n.len());
        TorusMonomial { sign: 1, c, m, n }
    }

    /// `sign·(−q)^c·U^m·V^n` in normal order.
    pub fn normal(sign: i8, c: i64, m: Vec<i64>, n: Vec<i64>) -> Self {
        let k = dot(&m, &n);
        // U^mV^n = q^{-k} X = (−1)^k (−q)^{-k} X
        let s = if k.rem_euclid(2) == 1 { -sign } else { sign };
        TorusMonomial { sign: s, c: c - k, m, n }
    }

    pub fn u(g: usize, i: usize) -> Self {
        let mut t = Self::identity(g);
        t.m[i] = 1;
        t
    }

    pub fn v(g: usize, i: usize) -> Self {
        let mut t = Self::identity(g);
        t.n[i] = 1;
        t
    }

    /// `(−q)^c` as a central monomial.
    pub fn scalar_mq(g: usize, c: i64) -> Self {
        TorusMonomial { c, ..Self::identity(g) }
    }

    pub fn g(&self) -> usize {
        self.m.len()
    }

    pub fn is_identity(&self) -> bool {
        self.sign == 1 && self.c == 0 && self.m.iter().all(|&x| x == 0) && self.n.iter().all(|&x| x == 0)
    }

    /// Lattice part `(m, n)` as one vector.
    pub fn lattice(&self) -> Vec<i64> {
        self.m.iter().chain(self.n.iter()).copied().collect()
    }

    /// ⟨a,b⟩ = n_a·m_b − m_a·n_b.
    pub fn pairing(&self, o: &Self) -> i64 {
        dot(&self.n, &o.m) - dot(&self.m, &o.n)
    }

    fn times_q(&mut self, k: i64) {
        self.c += k;
        if k.rem_euclid(2) == 1 {
            self.sign = -self.sign;
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.g() != o.g() {
            return Err(Error::Dimension(format!("torus ranks {} and {}", self.g(), o.g())));
        }
        let mut r = TorusMonomial {
            sign: self.sign * o.sign,
            c: self.c + o.c,
            m: self.m.iter().zip(&o.m).map(|(a, b)| a + b).collect(),
            n: self.n.iter().zip(&o.n).map(|(a, b)| a + b).collect(),
        };
        r.times_q(self.pairing(o));
        Ok(r)
    }

    /// Integer powers; X_v commutes with itself so `t^k = sign^k (−q)^{ck} X_{kv}`.
    pub fn pow(&self, k: i64) -> Self {
        TorusMonomial {
            sign: if k.rem_euclid(2) == 1 { self.sign } else { 1 },
            c: self.c * k,
            m: self.m.iter().map(|x| x * k).collect(),
            n: self.n.iter().map(|x| x * k).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Scalar in front of `U^mV^n` (normal order).
    pub fn normal_scalar(&self) -> QRat {
        let s = QRat::from_int(self.sign as i64);
        &(&s * &QRat::mqpow(self.c)) * &QRat::qpow(dot(&self.m, &self.n))
    }

    /// Scalar in front of `X_{(m,n)}`.
    pub fn weyl_scalar(&self) -> QRat {
        &QRat::from_int(self.sign as i64) * &QRat::mqpow(self.c)
    }

    /// Admissible for `sign`: `m ≥ 0` componentwise after raising to `sign`, and `m ≠ 0`.
    pub fn is_admissible(&self, sign: i32) -> bool {
        let s = sign.signum() as i64;
        self.m.iter().all(|&x| s * x >= 0) && self.m.iter().any(|&x| x != 0)
    }

    /// Admissible and with primitive U-exponent vector.
    pub fn is_primitive(&self, sign: i32) -> bool {
        self.is_admissible(sign) && self.m.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
    }

    /// Monomial part of the action on `X^w`: returns (new exponent, extra q-power)
    /// or `None` if an exponent would go negative.
    fn act_exp(&self, w: &[u32]) -> Option<(Vec<u32>, i64)> {
        let mut e = Vec::with_capacity(w.len());
        for (wi, mi) in w.iter().zip(&self.m) {
            let x = *wi as i64 + mi;
            if x < 0 {
                return None;
            }
            e.push(x as u32);
        }
        let wq: Vec<i64> = w.iter().map(|&x| x as i64).collect();
        Some((e, dot(&self.m, &self.n) + 2 * dot(&self.n, &wq)))
    }
}

impl fmt::Display for TorusMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.normal_scalar();
        let mut parts = Vec::new();
        let g = self.g();
        for i in 0..g {
            let name = if g == 1 { String::new() } else { (i + 1).to_string() };
            for (e, l) in [(self.m[i], "U"), (self.n[i], "V")] {
                match e {
                    0 => {}
                    1 => parts.push(format!("{l}{name}")),
                    _ => parts.push(format!("{l}{name}^{e}")),
                }
            }
        }
        // normal order: all U's first
        parts.sort_by_key(|p| !p.starts_with('U'));
        if parts.is_empty() {
            write!(f, "{s}")
        } else if s.is_one() {
            write!(f, "{}", parts.join("*"))
        } else {
            write!(f, "({s})*{}", parts.join("*"))
        }
    }
}

/// Finite linear combination `Σ a_{(m,n)} X_{(m,n)}` with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPoly<C: Coeff = QRat> {
    g: usize,
    terms: BTreeMap<(Vec<i64>, Vec<i64>), C>,
}

impl<C: Coeff> OperatorPoly<C> {
    pub fn zero(g: usize) -> Self {
        OperatorPoly { g, terms: BTreeMap::new() }
    }

    pub fn scalar(g: usize, c: C) -> Self {
        let mut p = Self::zero(g);
        p.add_term((vec![0; g], vec![0; g]), c);
        p
    }

    pub fn from_mono(t: &TorusMonomial) -> Self {
        Self::from_mono_scaled(t, C::one())
    }

    pub fn from_mono_scaled(t: &TorusMonomial, k: C) -> Self {
        let mut p = Self::zero(t.g());
        p.add_term((t.m.clone(), t.n.clone()), k.mul(&C::from_qrat(&t.weyl_scalar())));
        p
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Terms keyed by Weyl lattice vector `(m, n)`.
    pub fn terms(&self) -> &BTreeMap<(Vec<i64>, Vec<i64>), C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: (Vec<i64>, Vec<i64>), c: C) {
        let v = match self.terms.remove(&k) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        OperatorPoly { g: self.g, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut r = Self::zero(self.g);
        for (key, c) in &self.terms {
            r.add_term(key.clone(), c.mul(k));
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.g);
        for ((m1, n1), c1) in &self.terms {
            let a = TorusMonomial::weyl(0, m1.clone(), n1.clone());
            for ((m2, n2), c2) in &o.terms {
                let b = TorusMonomial::weyl(0, m2.clone(), n2.clone());
                let ab = a.mul(&b).expect("same rank");
                let coeff = c1.mul(c2).mul(&C::from_qrat(&ab.weyl_scalar()));
                r.add_term((ab.m, ab.n), coeff);
            }
        }
        r
    }

    /// Left multiplication by a monomial.
    pub fn left_mul_mono(&self, t: &TorusMonomial) -> Self {
        Self::from_mono(t).mul(self)
    }

    /// Apply to a power series. Errors if a nonzero coefficient would be moved
    /// to a negative exponent.
    pub fn act(&self, f: &XSeries<C>) -> Result<XSeries<C>> {
        if f.g() != self.g {
            return Err(Error::Dimension(format!("operator rank {} vs series rank {}", self.g, f.g())));
        }
        let mut out: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for ((m, n), a) in &self.terms {
            let t = TorusMonomial::weyl(0, m.clone(), n.clone());
            for (w, cw) in f.terms() {
                let Some((e, k)) = t.act_exp(w) else {
                    return Err(Error::Invalid(format!(
                        "operator term U^{m:?} sends X^{w:?} to a negative exponent"
                    )));
                };
                if crate::qseries::total(&e) > f.order() {
                    continue;
                }
                let v = a.mul(cw).mul(&C::qpow(k));
                let slot = out.entry(e).or_insert_with(C::zero);
                *slot = slot.add(&v);
            }
        }
        Ok(XSeries::from_terms(f.g(), f.order(), out))
    }

    /// Specialize the coefficients (e.g. a closed-string parameter).
    pub fn map_coeffs<D: Coeff, F: Fn(&C) -> D>(&self, fun: F) -> OperatorPoly<D> {
        let mut r = OperatorPoly::<D>::zero(self.g);
        for (k, c) in &self.terms {
            r.add_term(k.clone(), fun(c));
        }
        r
    }
}

impl<C: Coeff> fmt::Display for OperatorPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, n), c)| {
                let t = TorusMonomial::weyl(0, m.clone(), n.clone());
                if t.is_identity() {
                    format!("[{c}]")
                } else {
                    format!("[{c}]*X{:?}", t.lattice())
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn omega_i64(omega: &IntMatrix, g: usize) -> Result<Vec<Vec<i64>>> {
    if omega.rows() != g || omega.cols() != g {
        return Err(Error::Dimension(format!("framing matrix must be {g}x{g}")));
    }
    if !omega.is_symmetric() {
        return Err(Error::Invalid("framing matrix must be symmetric".into()));
    }
    Ok(omega.to_i64_rows())
}

/// `T_Ω`: coefficient of `X^w` times `q^{wᵀΩw}`.
pub fn framing_shift<C: Coeff>(omega: &IntMatrix, f: &XSeries<C>) -> Result<XSeries<C>> {
    let o = omega_i64(omega, f.g())?;
    Ok(f.map_coeffs(|w, c| {
        let mut k = 0i64;
        for i in 0..w.len() {
            for j in 0..w.len() {
                k += w[i] as i64 * o[i][j] * w[j] as i64;
            }
        }
        c.mul(&C::qpow(k))
    }))
}

/// `U_j ↦ q^{ω_jj} U_j ∏ V_k^{ω_jk}`, `V` fixed; in Weyl form `(m,n) ↦ (m, n+Ωm)`.
pub fn framing_shift_mono(omega: &IntMatrix, t: &TorusMonomial) -> Result<TorusMonomial> {
    let o = omega_i64(omega, t.g())?;
    let mut r = t.clone();
    for (k, nk) in r.n.iter_mut().enumerate() {
        *nk += (0..t.g()).map(|j| o[k][j] * t.m[j]).sum::<i64>();
    }
    Ok(r)
}

/// `σ_d`: coefficient of `X^w` times `(−q)^{d·w}`.
pub fn rescale_sigma<C: Coeff>(d: &[i64], f: &XSeries<C>) -> Result<XSeries<C>> {
    if d.len() != f.g() {
        return Err(Error::Dimension("rescaling vector length".into()));
    }
    Ok(f.map_coeffs(|w, c| {
        let k: i64 = w.iter().zip(d).map(|(a, b)| *a as i64 * b).sum();
        c.mul(&C::from_qrat(&QRat::mqpow(k)))
    }))
}

/// `σ_d(U_i) = (−q)^{d_i}U_i`.
pub fn rescale_sigma_mono(d: &[i64], t: &TorusMonomial) -> TorusMonomial {
    let mut r = t.clone();
    r.c += dot(d, &t.m);
    r
}

/// Multiply `F` by `Φ(t)^{sign}` where `Φ(y) = Σ (−q)^k y^k/(q²)_k` and
/// `Φ(y)^{-1} = Σ q^{k²} y^k/(q²)_k`. Requires `t` admissible (`m ≥ 0`, `m ≠ 0`).
pub fn apply_phi<C: Coeff>(t: &TorusMonomial, sign: i32, f: &XSeries<C>) -> Result<XSeries<C>> {
    if !t.is_admissible(1) {
        return Err(Error::Inadmissible(format!("dilogarithm argument {t} is not admissible")));
    }
    let deg: i64 = t.m.iter().sum();
    let kmax = f.order() as i64 / deg;
    let mut acc = f.clone();
    for k in 1..=kmax {
        let coeff = if sign > 0 { QRat::mqpow(k) } else { QRat::qpow(k * k) };
        let coeff = &coeff * &crate::qseries::qpoch2(k as usize).inv().unwrap();
        let op = OperatorPoly::<C>::from_mono_scaled(&t.pow(k), C::from_qrat(&coeff));
        acc = acc.add(&op.act(f)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vu_is_q2_uv() {
        let (u, v) = (TorusMonomial::u(1, 0), TorusMonomial::v(1, 0));
        let vu = v.mul(&u).unwrap();
        let uv = u.mul(&v).unwrap();
        let f = crate::qseries::pochhammer_inf(&QRat::one(), &[1], 5).unwrap();
        let a = OperatorPoly::from_mono(&vu).act(&f).unwrap();
        let b = OperatorPoly::from_mono(&uv).act(&f).unwrap();
        assert_eq!(a, b.scale(&QRat::qpow(2)));
    }

    #[test]
    fn normal_form_roundtrip() {
        let t = TorusMonomial::normal(1, -1, vec![1], vec![1]); // q^{-1}... times -1 sign? (−q)^{-1}UV
        assert_eq!(t.normal_scalar(), QRat::mqpow(-1));
    }
}
