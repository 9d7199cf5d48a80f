//! DT series of symmetric quivers and their integer invariants, the classical
//! Y-system, and disk invariants.
//!
//! The internal series variable is `q` with `t^{1/2} = −q`, so
//! `(−t^{1/2})^χ/(t)_v = q^χ/(q²)_v`.

use crate::intlin::IntMatrix;
use crate::qseries::{exponents_upto, mobius, qpoch2, total, Adams, QRat, XSeries};
use crate::wavefn::{self, OVTable};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct SymQuiver {
    a: Vec<Vec<i64>>,
}

impl SymQuiver {
    /// Symmetric adjacency with nonnegative entries.
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("adjacency must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if a[i][j] != a[j][i] {
                    return Err(Error::Invalid("adjacency must be symmetric".into()));
                }
                if a[i][j] < 0 {
                    return Err(Error::Invalid("quiver adjacency entries must be nonnegative".into()));
                }
            }
        }
        Ok(SymQuiver { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn adjacency(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.a)
    }

    /// χ_A(v,w) = vᵀ(I − A)w.
    pub fn chi(&self, v: &[u32], w: &[u32]) -> i64 {
        chi_of(&self.a, v, w)
    }
}

fn chi_of(a: &[Vec<i64>], v: &[u32], w: &[u32]) -> i64 {
    let n = a.len();
    let mut s = 0;
    for i in 0..n {
        for j in 0..n {
            let m = if i == j { 1 - a[i][j] } else { -a[i][j] };
            s += v[i] as i64 * m * w[j] as i64;
        }
    }
    s
}

fn poch_v(v: &[u32]) -> QRat {
    v.iter().fold(QRat::one(), |acc, &k| &acc * &qpoch2(k as usize))
}

/// Σ (−t^{1/2})^{χ(v,v)}/(t)_v X^v, for any symmetric integer matrix.
pub fn dt_series_raw(a: &[Vec<i64>], order: u32) -> XSeries {
    let n = a.len();
    XSeries::from_terms(
        n,
        order,
        exponents_upto(n, order).into_iter().map(|v| {
            let c = &QRat::qpow(chi_of(a, &v, &v)) * &poch_v(&v).inv().unwrap();
            (v, c)
        }),
    )
}

pub fn dt_series(q: &SymQuiver, order: u32) -> XSeries {
    dt_series_raw(&q.a, order)
}

/// Coefficient of `X^v` in DT_A as a rational function of `p = t^{1/2}`.
pub fn dt_coefficient_in_p(a: &[Vec<i64>], v: &[u32]) -> QRat {
    // internal variable q = −p
    (&QRat::qpow(chi_of(a, v, v)) * &poch_v(v).inv().unwrap()).negate_var()
}

/// N_{v,k}: DT = ∏ (t^{k/2}X^v; t)_∞^{N_{v,k}}, via `(t − 1)·Log DT`.
pub fn dt_integer_invariants(q: &SymQuiver, order: u32) -> Result<OVTable> {
    let f = dt_series(q, order);
    let lg = f.plethystic_log_with(Adams::MinusQ)?;
    let factor = QRat::from_laurent(&[(0, -1), (2, 1)]);
    let mut t = OVTable { g: q.n(), order, entries: BTreeMap::new(), witness: None };
    for (d, c) in lg.terms() {
        let c = &factor * c;
        match c.to_laurent() {
            Some(lp) => {
                for (k, v) in lp.in_minus_q().terms {
                    if !v.is_zero() {
                        t.entries.insert((d.clone(), k), v);
                    }
                }
            }
            None => {
                if t.witness.is_none() {
                    t.witness = Some((d.clone(), c));
                }
            }
        }
    }
    Ok(t)
}

/// `(−1)^{k−1} N_{v,k} ≥ 0` for every entry.
pub fn dt_sign_rule_holds(t: &OVTable) -> bool {
    t.entries.iter().all(|((_, k), n)| {
        let s = if (k - 1).rem_euclid(2) == 0 { n.clone() } else { -n };
        !s.is_negative()
    })
}

/// Expands `∏ (t^{k/2}X^v; t)_∞^{N}` (internal variable `q`).
pub fn dt_reconstruct(t: &OVTable) -> Result<XSeries> {
    let mut acc = XSeries::one(t.g, t.order);
    for ((d, k), n) in &t.entries {
        // (t^{k/2}X^d; t)_∞ = (c X^d; q²)_∞ with c = (−q)^k
        let p = crate::qseries::pochhammer_inf(&QRat::mqpow(*k), d, t.order)?;
        let n: i64 = n.try_into().map_err(|_| Error::Numerical("exponent too large".into()))?;
        let p = if n >= 0 { p.pow(n as u32) } else { p.invert_unit()?.pow((-n) as u32) };
        acc = acc.mul(&p);
    }
    Ok(acc)
}

/// Checks `DT_{I−A}(t^{1/2}, X) = DT_A(t^{−1/2}, t^{−1/2}X)` coefficientwise,
/// i.e. `DT^{I−A}_v(t^{1/2}) = t^{−σ(v)/2}·DT^A_v(t^{−1/2})`.
pub fn coefficient_change_holds(a: &[Vec<i64>], order: u32) -> bool {
    let n = a.len();
    let dual: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { 1 - a[i][j] } else { -a[i][j] }).collect()).collect();
    exponents_upto(n, order).into_iter().all(|v| {
        let lhs = dt_coefficient_in_p(&dual, &v);
        let sigma = total(&v) as i64;
        let rhs = &dt_coefficient_in_p(a, &v).invert_var() * &QRat::qpow(-sigma);
        lhs == rhs
    })
}

/// Solves `X_i (−Y_i)^{1−a_ii} ∏_{j≠i} Y_j^{−a_ij} + Y_i = 1` with `Y_i ∈ 1 + (X)`.
pub fn classical_y_system(a: &[Vec<i64>], order: u32) -> Result<Vec<XSeries>> {
    let n = a.len();
    let mut ys = vec![XSeries::one(n, order); n];
    for _ in 0..=order {
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let mut term = XSeries::var(n, order, i);
            for j in 0..n {
                let e = if i == j { 1 - a[i][i] } else { -a[i][j] };
                let base = if i == j { ys[j].neg() } else { ys[j].clone() };
                let p = if e >= 0 { base.pow(e as u32) } else { base.invert_unit()?.pow((-e) as u32) };
                term = term.mul(&p);
            }
            next.push(XSeries::one(n, order).sub(&term));
        }
        if next == ys {
            break;
        }
        ys = next;
    }
    // residual check
    for i in 0..n {
        let r = y_residual(a, &ys, i)?;
        if !r.is_empty() {
            return Err(Error::Numerical("Y-system iteration did not converge".into()));
        }
    }
    Ok(ys)
}

/// `X_i (−Y_i)^{1−a_ii} ∏ Y_j^{−a_ij} + Y_i − 1`.
pub fn y_residual(a: &[Vec<i64>], ys: &[XSeries], i: usize) -> Result<XSeries> {
    let n = a.len();
    let order = ys[0].order();
    let mut term = XSeries::var(n, order, i);
    for j in 0..n {
        let e = if i == j { 1 - a[i][i] } else { -a[i][j] };
        let base = if i == j { ys[j].neg() } else { ys[j].clone() };
        let p = if e >= 0 { base.pow(e as u32) } else { base.invert_unit()?.pow((-e) as u32) };
        term = term.mul(&p);
    }
    Ok(term.add(&ys[i]).sub(&XSeries::one(n, order)))
}

fn const_value(c: &QRat) -> Result<BigRational> {
    c.eval(&BigRational::one()).ok_or_else(|| Error::Numerical("non-constant Y coefficient".into()))
}

/// Integers `n_d` with `log Y_i = Σ_d d_i n_d Σ_r X^{rd}/r`.
pub fn disk_invariants(a: &[Vec<i64>], order: u32) -> Result<BTreeMap<Vec<u32>, BigInt>> {
    let n = a.len();
    let ys = classical_y_system(a, order)?;
    let logs: Vec<XSeries> = ys.iter().map(|y| y.log()).collect::<Result<_>>()?;
    // ℓ_N = L_{i,N}/N_i, the same for every i with N_i > 0
    let mut ell: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for nv in exponents_upto(n, order) {
        if total(&nv) == 0 {
            continue;
        }
        let mut val: Option<BigRational> = None;
        for i in 0..n {
            if nv[i] == 0 {
                continue;
            }
            let l = const_value(&logs[i].get(&nv))? / BigRational::from_integer(BigInt::from(nv[i]));
            match &val {
                None => val = Some(l),
                Some(v) if *v != l => {
                    return Err(Error::Numerical(format!("inconsistent log Y components at {nv:?}")));
                }
                _ => {}
            }
        }
        ell.insert(nv, val.unwrap());
    }
    let mut out = BTreeMap::new();
    for (nv, _) in ell.iter() {
        let gcd = nv.iter().fold(0u32, |g, &x| g.gcd(&x));
        let mut s = BigRational::zero();
        for r in 1..=gcd {
            if gcd % r != 0 {
                continue;
            }
            let mu = mobius(r);
            if mu == 0 {
                continue;
            }
            let sub: Vec<u32> = nv.iter().map(|x| x / r).collect();
            s += BigRational::from_integer(BigInt::from(mu)) * &ell[&sub]
                / BigRational::from_integer(BigInt::from(r as i64 * r as i64));
        }
        if !s.is_integer() {
            return Err(Error::Numerical(format!("non-integral disk invariant {s} at {nv:?}")));
        }
        let v = s.to_integer();
        if !v.is_zero() {
            out.insert(nv.clone(), v);
        }
    }
    Ok(out)
}

/// Result of comparing the canoe wavefunction with the DT series.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub equal: bool,
    pub first_difference: Option<(Vec<u32>, QRat, QRat)>,
}

/// Compares the dual-framed canoe wavefunction with `DT_A(−q, X)`.
pub fn verify_framing_duality(q: &SymQuiver, order: u32) -> Result<DualityReport> {
    let (_, psi) = wavefn::canoe_dual(q.n(), q.adjacency(), order)?;
    let dt = dt_series(q, order);
    let d = psi.first_difference(&dt);
    Ok(DualityReport { equal: d.is_none(), first_difference: d })
}

/// Reference table of `n_d^{(2−2h)}` for h = 2..8, d = 1..7.
pub const DISK_TABLE: [[i64; 7]; 7] = [
    [1, 1, 3, 10, 40, 171, 791],
    [1, 2, 10, 60, 425, 3296, 27447],
    [1, 3, 21, 182, 1855, 20811, 250439],
    [1, 4, 36, 408, 5430, 79704, 1254582],
    [1, 5, 55, 770, 12650, 229427, 4461611],
    [1, 6, 78, 1300, 25415, 548808, 12706421],
    [1, 7, 105, 2030, 46025, 1152963, 30966971],
];
