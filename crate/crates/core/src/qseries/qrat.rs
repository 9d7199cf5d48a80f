//! Exact rational functions in q over Q.

use super::zpoly::{parse_laurent, write_laurent, ZPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `q^shift * num / den` in lowest terms.
///
/// Canonical form: `num` and `den` are not divisible by `q`, share no common
/// factor (polynomial or integer content), and `den` has positive leading
/// coefficient. Zero is `0/1` with shift 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QRat {
    num: ZPoly,
    den: ZPoly,
    shift: i64,
}

impl Default for QRat {
    fn default() -> Self {
        QRat::zero()
    }
}

impl QRat {
    pub fn zero() -> Self {
        QRat { num: ZPoly::zero(), den: ZPoly::one(), shift: 0 }
    }

    pub fn one() -> Self {
        QRat { num: ZPoly::one(), den: ZPoly::one(), shift: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::from_parts(ZPoly::constant(v.into()), ZPoly::one(), 0)
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_parts(ZPoly::constant(n.into()), ZPoly::constant(d.into()), 0)
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_parts(ZPoly::constant(r.numer().clone()), ZPoly::constant(r.denom().clone()), 0)
    }

    /// q^k.
    pub fn qpow(k: i64) -> Self {
        QRat { num: ZPoly::one(), den: ZPoly::one(), shift: k }
    }

    /// (-q)^k.
    pub fn mqpow(k: i64) -> Self {
        let r = Self::qpow(k);
        if k.rem_euclid(2) == 1 {
            -r
        } else {
            r
        }
    }

    pub fn from_poly(p: ZPoly) -> Self {
        Self::from_parts(p, ZPoly::one(), 0)
    }

    /// Laurent polynomial from (exponent, coefficient) pairs.
    pub fn from_laurent(terms: &[(i64, i64)]) -> Self {
        let mut acc = QRat::zero();
        for &(k, c) in terms {
            acc = &acc + &(&QRat::from_int(c) * &QRat::qpow(k));
        }
        acc
    }

    /// Builds and canonicalizes `q^shift * num / den`.
    pub fn from_parts(num: ZPoly, den: ZPoly, shift: i64) -> Self {
        assert!(!den.is_zero(), "QRat with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) && g.lead().abs().is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::canon_coprime(num, den, shift)
    }

    /// Canonicalize when num and den are already coprime as polynomials
    /// (integer content may still be shared).
    fn canon_coprime(mut num: ZPoly, mut den: ZPoly, mut shift: i64) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let vn = num.valuation();
        if vn > 0 {
            num = num.shift_down(vn);
            shift += vn as i64;
        }
        let vd = den.valuation();
        if vd > 0 {
            den = den.shift_down(vd);
            shift -= vd as i64;
        }
        let mut c = num.content().gcd(&den.content());
        if den.lead().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        QRat { num, den, shift }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn numer(&self) -> &ZPoly {
        &self.num
    }

    pub fn denom(&self) -> &ZPoly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Numerator with the q-shift folded in when it is nonnegative.
    pub fn full_num(&self) -> ZPoly {
        if self.shift > 0 {
            self.num.shift_up(self.shift as usize)
        } else {
            self.num.clone()
        }
    }

    pub fn full_den(&self) -> ZPoly {
        if self.shift < 0 {
            self.den.shift_up((-self.shift) as usize)
        } else {
            self.den.clone()
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (mut n, mut d) = (self.den.clone(), self.num.clone());
        if d.lead().is_negative() {
            n = n.neg();
            d = d.neg();
        }
        Some(QRat { num: n, den: d, shift: -self.shift })
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("inverse of zero").pow(-e);
        }
        let mut acc = QRat::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self * &QRat::from_int(k)
    }

    /// q -> q^n (n ≥ 1). Coprimality is preserved by the substitution.
    pub fn adams_q(&self, n: u32) -> Self {
        if n == 1 {
            return self.clone();
        }
        let n = n as usize;
        Self::canon_coprime(self.num.compose_pow(n), self.den.compose_pow(n), self.shift * n as i64)
    }

    /// q -> -q.
    /// Substitutes q → q⁻¹.
    pub fn invert_var(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let rev = |p: &ZPoly| ZPoly::from_coeffs(p.coeffs().iter().rev().cloned().collect());
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        Self::canon_coprime(rev(&self.num), rev(&self.den), -self.shift - dn + dd)
    }

    pub fn negate_var(&self) -> Self {
        let r = Self::canon_coprime(self.num.negate_var(), self.den.negate_var(), self.shift);
        if self.shift.rem_euclid(2) == 1 {
            -r
        } else {
            r
        }
    }

    /// Adams operation in the variable p = -q: p -> p^n, i.e. q -> (-1)^(n+1) q^n.
    pub fn adams_mq(&self, n: u32) -> Self {
        if n % 2 == 0 {
            self.negate_var().adams_q(n)
        } else {
            self.adams_q(n)
        }
    }

    /// Exact value at a rational point, `None` if the denominator vanishes there.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let ev = |p: &ZPoly| {
            let mut acc = BigRational::zero();
            for a in p.coeffs().iter().rev() {
                acc = acc * x + BigRational::from_integer(a.clone());
            }
            acc
        };
        let d = ev(&self.den);
        if d.is_zero() {
            return None;
        }
        let mut v = ev(&self.num) / d;
        if self.shift != 0 {
            if x.is_zero() {
                return if self.shift > 0 { Some(BigRational::zero()) } else { None };
            }
            let mut p = BigRational::one();
            for _ in 0..self.shift.unsigned_abs() {
                p *= x;
            }
            v = if self.shift > 0 { v * p } else { v / p };
        }
        Some(v)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x) * x.powi(self.shift as i32)
    }

    /// Returns the Laurent polynomial if `self` is one with integer coefficients.
    pub fn to_laurent(&self) -> Option<QLaurentPoly> {
        if !self.den.is_one() {
            return None;
        }
        let mut m = BTreeMap::new();
        for (i, c) in self.num.coeffs().iter().enumerate() {
            if !c.is_zero() {
                m.insert(i as i64 + self.shift, c.clone());
            }
        }
        Some(QLaurentPoly { terms: m })
    }

    /// Parses a `num` / `den` pair of Laurent strings as produced by [`QRat::num_string`].
    pub fn parse(num: &str, den: &str) -> Result<Self, String> {
        let n = QLaurentPoly::parse(num)?.to_qrat();
        let d = QLaurentPoly::parse(den)?.to_qrat();
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(&n * &d.inv().unwrap())
    }

    pub fn num_string(&self) -> String {
        laurent_string(&self.num, self.shift.max(0))
    }

    pub fn den_string(&self) -> String {
        laurent_string(&self.den, (-self.shift).max(0))
    }
}

fn laurent_string(p: &ZPoly, shift: i64) -> String {
    struct W<'a>(&'a ZPoly, i64);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_laurent(f, self.0.coeffs().iter().enumerate().map(|(i, c)| (i as i64 + self.1, c)))
        }
    }
    W(p, shift).to_string()
}

/// Human-readable Laurent form, e.g. `1 - q^2`, `-q^-1`, `3*q`.
fn pretty(p: &ZPoly, shift: i64) -> String {
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = i as i64 + shift;
        let neg = c.sign() == num_bigint::Sign::Minus;
        let a = c.magnitude().to_string();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match k {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{k}"),
        };
        match (a.as_str(), var.is_empty()) {
            (_, true) => out.push_str(&a),
            ("1", false) => out.push_str(&var),
            _ => out.push_str(&format!("{a}*{var}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", pretty(&self.num, self.shift))
        } else {
            let (ns, ds) = (self.shift.max(0), (-self.shift).max(0));
            let n = pretty(&self.num, ns);
            let n = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 { format!("({n})") } else { n };
            write!(f, "{n}/({})", pretty(&self.den, ds))
        }
    }
}

impl<'a> Mul<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn mul(self, o: &QRat) -> QRat {
        if self.is_zero() || o.is_zero() {
            return QRat::zero();
        }
        let shift = self.shift + o.shift;
        if self.den.is_one() && o.den.is_one() {
            return QRat::canon_coprime(self.num.mul(&o.num), ZPoly::one(), shift);
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        QRat::canon_coprime(n1.mul(&n2), d1.mul(&d2), shift)
    }
}

impl<'a> Add<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn add(self, o: &QRat) -> QRat {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let n1 = self.num.shift_up((self.shift - s) as usize);
        let n2 = o.num.shift_up((o.shift - s) as usize);
        if self.den == o.den {
            let t = n1.add(&n2);
            return QRat::from_parts(t, self.den.clone(), s);
        }
        let g = self.den.gcd(&o.den);
        let d1g = self.den.div_exact(&g).unwrap();
        let d2g = o.den.div_exact(&g).unwrap();
        let t = n1.mul(&d2g).add(&n2.mul(&d1g));
        if t.is_zero() {
            return QRat::zero();
        }
        let den = self.den.mul(&d2g);
        if g.degree() == Some(0) {
            return QRat::canon_coprime(t, den, s);
        }
        let h = t.gcd(&g);
        if h.degree() == Some(0) {
            QRat::canon_coprime(t, den, s)
        } else {
            QRat::canon_coprime(t.div_exact(&h).unwrap(), den.div_exact(&h).unwrap(), s)
        }
    }
}

impl<'a> Sub<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn sub(self, o: &QRat) -> QRat {
        self + &(-o)
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: self.num.neg(), den: self.den.clone(), shift: self.shift }
    }
}

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<QRat> for QRat {
            type Output = QRat;
            fn $f(self, o: QRat) -> QRat {
                (&self).$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// (q^2; q^2)_k.
pub fn qpoch2(k: usize) -> QRat {
    let mut p = ZPoly::one();
    for i in 1..=k {
        p = p.mul(&ZPoly::one().sub(&ZPoly::monomial(BigInt::one(), 2 * i)));
    }
    QRat::from_poly(p)
}

/// (x; q^2)_k for a QRat argument x.
pub fn qpoch2_of(x: &QRat, k: usize) -> QRat {
    let mut acc = QRat::one();
    for i in 0..k {
        acc = &acc * &(&QRat::one() - &(x * &QRat::qpow(2 * i as i64)));
    }
    acc
}

/// Laurent polynomial in q with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QLaurentPoly {
    pub terms: BTreeMap<i64, BigInt>,
}

impl QLaurentPoly {
    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_qrat(&self) -> QRat {
        let mut acc = QRat::zero();
        for (&k, c) in &self.terms {
            acc = &acc + &(&QRat::from_int(c.clone()) * &QRat::qpow(k));
        }
        acc
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (k, c) in parse_laurent(s)? {
            *terms.entry(k).or_default() += c;
        }
        terms.retain(|_, v| !v.is_zero());
        Ok(QLaurentPoly { terms })
    }

    /// Re-expresses a polynomial in q as one in p = -q.
    pub fn in_minus_q(&self) -> QLaurentPoly {
        QLaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, if k.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }
}

impl fmt::Display for QLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_laurent(f, self.terms.iter().map(|(k, c)| (*k, c)))
    }
}
