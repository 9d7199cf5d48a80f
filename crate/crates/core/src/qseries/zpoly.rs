//! Dense univariate polynomials over Z in the variable q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Coefficient `c[i]` multiplies `q^i`; no trailing zeros are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(v: BigInt) -> Self {
        Self::from_coeffs(vec![v])
    }

    pub fn monomial(coef: BigInt, deg: usize) -> Self {
        let mut c = vec![BigInt::zero(); deg + 1];
        c[deg] = coef;
        Self::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        Self::from_coeffs(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lead(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    /// Largest k with q^k dividing self (0 for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.c[k.min(self.c.len())..].to_vec())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        ZPoly { c }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                _ => unreachable!(),
            });
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        ZPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ZPoly { c: self.c.iter().map(|x| x * k).collect() }
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        ZPoly { c: self.c.iter().map(|x| x / k).collect() }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    /// Exact division over Z; `None` if `o` does not divide `self` in Z[q].
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dn = o.c.len() - 1;
        if self.c.len() < o.c.len() {
            return None;
        }
        let lead = o.lead();
        let mut r = self.c.clone();
        let mut qv = vec![BigInt::zero(); self.c.len() - dn];
        for i in (0..qv.len()).rev() {
            let top = &r[i + dn];
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(&lead);
            if !rr.is_zero() {
                return None;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] -= &qq * b;
            }
            qv[i] = qq;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(qv))
    }

    /// Pseudo-remainder: lead(o)^k * self = Q*o + R with deg R < deg o.
    fn pseudo_rem(&self, o: &Self) -> Self {
        let dn = o.c.len() - 1;
        let lead = o.lead();
        let mut r = self.c.clone();
        while r.len() > dn && !r.is_empty() {
            let top = r.last().unwrap().clone();
            if top.is_zero() {
                r.pop();
                continue;
            }
            let g = top.gcd(&lead);
            let mr = &lead / &g;
            let mo = &top / &g;
            for x in r.iter_mut() {
                *x *= &mr;
            }
            let off = r.len() - 1 - dn;
            for (j, b) in o.c.iter().enumerate() {
                r[off + j] -= &mo * b;
            }
            r.pop();
        }
        Self::from_coeffs(r)
    }

    /// Greatest common divisor in Z[q], primitive with positive leading coefficient
    /// times the gcd of contents.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive_with_content();
        }
        if o.is_zero() {
            return self.primitive_with_content();
        }
        let cg = self.content().gcd(&o.content());
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.c.len() < b.c.len() {
            std::mem::swap(&mut a, &mut b);
        }
        if b.c.len() == 1 {
            return Self::constant(cg);
        }
        if a.div_exact(&b).is_some() {
            return b.scale(&cg);
        }
        while !b.is_zero() {
            if b.c.len() == 1 {
                return Self::constant(cg);
            }
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive().scale(&cg)
    }

    fn primitive_with_content(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let p = self.primitive();
        p.scale(&self.content())
    }

    /// q -> q^n.
    pub fn compose_pow(&self, n: usize) -> Self {
        if n == 1 || self.c.len() <= 1 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); (self.c.len() - 1) * n + 1];
        for (i, x) in self.c.iter().enumerate() {
            c[i * n] = x.clone();
        }
        Self::from_coeffs(c)
    }

    /// q -> -q.
    pub fn negate_var(&self) -> Self {
        ZPoly {
            c: self
                .c
                .iter()
                .enumerate()
                .map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() })
                .collect(),
        }
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let xb = BigInt::from(x);
        let mut acc = BigInt::zero();
        for a in self.c.iter().rev() {
            acc = acc * &xb + a;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for a in self.c.iter().rev() {
            acc = acc * x + a.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_laurent(f, self.c.iter().enumerate().map(|(i, c)| (i as i64, c)))
    }
}

/// Writes `c0 + c1*q + c2*q^2 ...` skipping zero terms (`0` if empty).
pub(crate) fn write_laurent<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (i64, &'a BigInt)>,
{
    let mut first = true;
    for (k, c) in terms {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match k {
            0 => write!(f, "{}", c)?,
            1 => write!(f, "{}*q", c)?,
            _ => write!(f, "{}*q^{}", c, k)?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Parses the output of [`write_laurent`] (tolerant of spaces, `-` inside terms,
/// bare `q`, and omitted coefficients).
pub(crate) fn parse_laurent(s: &str) -> Result<Vec<(i64, BigInt)>, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    // turn binary minus into "+-" so splitting on '+' is enough
    let mut norm = String::new();
    let mut prev: Option<char> = None;
    for ch in compact.chars() {
        if ch == '-' && !matches!(prev, None | Some('+') | Some('^') | Some('*')) {
            norm.push('+');
        }
        norm.push(ch);
        prev = Some(ch);
    }
    let mut out = Vec::new();
    for tok in norm.split('+').filter(|t| !t.is_empty()) {
        let (coef, exp) = if let Some(pos) = tok.find('q') {
            let cpart = tok[..pos].trim_end_matches('*');
            let coef = match cpart {
                "" => BigInt::one(),
                "-" => -BigInt::one(),
                c => c.parse::<BigInt>().map_err(|e| format!("bad coefficient '{c}': {e}"))?,
            };
            let rest = &tok[pos + 1..];
            let exp = if rest.is_empty() {
                1
            } else if let Some(e) = rest.strip_prefix('^') {
                e.parse::<i64>().map_err(|e2| format!("bad exponent '{e}': {e2}"))?
            } else {
                return Err(format!("bad term '{tok}'"));
            };
            (coef, exp)
        } else {
            (tok.parse::<BigInt>().map_err(|e| format!("bad constant '{tok}': {e}"))?, 0)
        };
        out.push((exp, coef));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> ZPoly {
        ZPoly::from_i64s(v)
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (1-q^2)(1-q^4) and (1-q^2)(1+q^3)
        let a = p(&[1, 0, -1]).mul(&p(&[1, 0, 0, 0, -1]));
        let b = p(&[1, 0, -1]).mul(&p(&[1, 0, 0, 1]));
        let g = a.gcd(&b);
        // gcd is (1-q^2)(1+q) up to sign
        let expect = p(&[1, 0, -1]).mul(&p(&[1, 1])).primitive();
        assert_eq!(g.primitive(), expect);
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 0, 0, 0, -1]);
        let b = p(&[1, 0, -1]);
        assert_eq!(a.div_exact(&b), Some(p(&[1, 0, 1])));
        assert_eq!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])), None);
    }

    #[test]
    fn display_roundtrip() {
        let a = p(&[3, 0, -2, 1]);
        let s = a.to_string();
        assert_eq!(s, "3 + -2*q^2 + 1*q^3");
        let terms = parse_laurent(&s).unwrap();
        assert_eq!(terms.len(), 3);
        let t2 = parse_laurent("1 - q + 2*q^-3").unwrap();
        assert_eq!(t2[1], (1, BigInt::from(-1)));
        assert_eq!(t2[2], (-3, BigInt::from(2)));
    }
}
