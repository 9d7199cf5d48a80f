//! Wavefunctions: evaluation along seed paths, direct solving of the face
//! relations, and Ooguri–Vafa factorization into quantum dilogarithms.

use crate::intlin::IntMatrix;
use crate::qseries::{exponents_of_degree, total, Adams, Coeff, QRat, XSeries};
use crate::qtorus::{self, OperatorPoly, TorusMonomial};
use crate::seeds::{apply_dilog_step, standard_necklace_seed, FramedSeed, SeedPath, Step};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Runs `path` from `start` with initial wavefunction `psi0`, returning the end
/// seed and its wavefunction.
pub fn evaluate_path_from(start: &FramedSeed, psi0: &XSeries, path: &SeedPath) -> Result<(FramedSeed, XSeries)> {
    let mut seed = start.clone();
    let mut psi = psi0.clone();
    for (i, step) in path.steps.iter().enumerate() {
        let (next, dilog) = seed.apply_step(step).map_err(|e| match e {
            Error::Inadmissible(m) => Error::Inadmissible(format!("step {i}: {m}")),
            other => other,
        })?;
        psi = match step {
            Step::Mutate { .. } => apply_dilog_step(dilog.as_ref().unwrap(), &psi)?,
            Step::FramingShift { omega } => qtorus::framing_shift(&IntMatrix::from_rows(omega), &psi)?,
            Step::Rescale { d } => qtorus::rescale_sigma(d, &psi)?,
            Step::RelabelEdges { .. } => psi,
        };
        seed = next;
    }
    Ok((seed, psi))
}

/// Wavefunction at the end of `path`, starting from `start` with `Ψ = 1`.
pub fn evaluate_path(start: &FramedSeed, path: &SeedPath, order: u32) -> Result<XSeries> {
    Ok(evaluate_path_from(start, &XSeries::one(start.g, order), path)?.1)
}

/// Why the direct solver did not produce a unique solution.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveFailure {
    NoSolution { degree: u32 },
    Underdetermined { degree: u32 },
}

impl fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveFailure::NoSolution { degree } => write!(f, "inconsistent at degree {degree}"),
            SolveFailure::Underdetermined { degree } => write!(f, "underdetermined at degree {degree}"),
        }
    }
}

/// Left-multiplies by a power of U so that every term has nonnegative U-exponents.
pub fn left_normalize<C: Coeff>(op: &OperatorPoly<C>) -> OperatorPoly<C> {
    let g = op.g();
    let mut s = vec![0i64; g];
    for (m, _) in op.terms().keys() {
        for i in 0..g {
            s[i] = s[i].max(-m[i]);
        }
    }
    if s.iter().all(|&x| x == 0) {
        return op.clone();
    }
    OperatorPoly::<C>::from_mono(&TorusMonomial::weyl(0, s, vec![0; g])).mul(op)
}

/// Unique `F ∈ 1 + (X)` annihilated by all `ops`, found degree by degree.
pub fn solve_operators<C: Coeff>(ops: &[OperatorPoly<C>], g: usize, order: u32) -> std::result::Result<XSeries<C>, SolveFailure> {
    let ops: Vec<OperatorPoly<C>> = ops.iter().map(left_normalize).filter(|o| !o.is_zero()).collect();
    // lowest U-degree per operator
    let lows: Vec<u32> = ops
        .iter()
        .map(|o| o.terms().keys().map(|(m, _)| m.iter().sum::<i64>() as u32).min().unwrap())
        .collect();
    let mut f = XSeries::<C>::zero(g, order);
    for k in 0..=order {
        let unknowns = exponents_of_degree(g, k);
        let idx: BTreeMap<&Vec<u32>, usize> = unknowns.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows: Vec<(Vec<C>, C)> = Vec::new();
        for (op, &lo) in ops.iter().zip(&lows) {
            for u in exponents_of_degree(g, k + lo) {
                let mut row = vec![C::zero(); unknowns.len()];
                let mut rhs = C::zero();
                let mut touched = false;
                for ((m, n), a) in op.terms() {
                    let Some(src) = u.iter().zip(m).map(|(x, y)| (*x as i64 - y).try_into().ok()).collect::<Option<Vec<u32>>>() else {
                        continue;
                    };
                    let srcq: Vec<i64> = src.iter().map(|&x| x as i64).collect();
                    let mn: i64 = m.iter().zip(n).map(|(x, y)| x * y).sum();
                    let nw: i64 = n.iter().zip(&srcq).map(|(x, y)| x * y).sum();
                    let c = a.mul(&C::qpow(mn + 2 * nw));
                    if total(&src) == k {
                        row[idx[&src]] = row[idx[&src]].add(&c);
                        touched = true;
                    } else {
                        rhs = rhs.sub(&c.mul(&f.get(&src)));
                    }
                }
                if touched || !rhs.is_zero() {
                    rows.push((row, rhs));
                }
            }
        }
        if k == 0 {
            // c_0 = 1 must satisfy every equation
            for (row, rhs) in &rows {
                if !row[0].is_zero() || !rhs.is_zero() {
                    return Err(SolveFailure::NoSolution { degree: 0 });
                }
            }
            f.set(unknowns[0].clone(), C::one());
            continue;
        }
        let sol = gauss_solve(rows, unknowns.len()).map_err(|e| match e {
            GaussError::Inconsistent => SolveFailure::NoSolution { degree: k },
            GaussError::Rank => SolveFailure::Underdetermined { degree: k },
        })?;
        for (w, c) in unknowns.into_iter().zip(sol) {
            f.set(w, c);
        }
    }
    Ok(f)
}

enum GaussError {
    Inconsistent,
    Rank,
}

fn gauss_solve<C: Coeff>(mut rows: Vec<(Vec<C>, C)>, n: usize) -> std::result::Result<Vec<C>, GaussError> {
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r].0[col].inv().unwrap();
        let (prow, prhs) = {
            let (a, b) = &rows[r];
            (a.iter().map(|x| x.mul(&inv)).collect::<Vec<C>>(), b.mul(&inv))
        };
        rows[r] = (prow.clone(), prhs.clone());
        for i in 0..rows.len() {
            if i != r && !rows[i].0[col].is_zero() {
                let fct = rows[i].0[col].clone();
                for j in 0..n {
                    rows[i].0[j] = rows[i].0[j].sub(&fct.mul(&prow[j]));
                }
                rows[i].1 = rows[i].1.sub(&fct.mul(&prhs));
            }
        }
        piv_cols.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|(_, b)| !b.is_zero()) {
        return Err(GaussError::Inconsistent);
    }
    if piv_cols.len() < n {
        return Err(GaussError::Rank);
    }
    let mut sol = vec![C::zero(); n];
    for (i, &c) in piv_cols.iter().enumerate() {
        sol[c] = rows[i].1.clone();
    }
    Ok(sol)
}

/// All face relations of a seed (first edge of each face as base).
pub fn face_operators(s: &FramedSeed) -> Vec<OperatorPoly> {
    s.graph.faces().iter().map(|f| s.face_relation_at(f, 0)).collect()
}

pub fn solve_face_relations(s: &FramedSeed, order: u32) -> std::result::Result<XSeries, SolveFailure> {
    solve_operators(&face_operators(s), s.g, order)
}

/// The annihilator `1 − U − V + Q·UV` of the unknot-conormal example, with `Q`
/// adjoined to the coefficient field.
pub fn aenv_operator() -> OperatorPoly<crate::qseries::QQRat> {
    use crate::qseries::QQRat;
    let one = OperatorPoly::<QQRat>::scalar(1, QQRat::one());
    let u = OperatorPoly::<QQRat>::from_mono(&TorusMonomial::u(1, 0));
    let v = OperatorPoly::<QQRat>::from_mono(&TorusMonomial::v(1, 0));
    let uv = OperatorPoly::<QQRat>::from_mono_scaled(&TorusMonomial::normal(1, 0, vec![1], vec![1]), QQRat::big_q());
    one.sub(&u).sub(&v).add(&uv)
}

/// Canoe wavefunction Σ q^{vᵀAv}/(q²)_v X^v: mutate all inner strands, then
/// `T_{−I}`, `σ_{+1}`, `T_A`.
pub fn canoe_framed_path(g: usize, a: &[Vec<i64>]) -> SeedPath {
    let mut p = strands_path(g);
    let neg_id: Vec<Vec<i64>> = (0..g).map(|i| (0..g).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
    p = p.framing(neg_id).rescale(vec![1; g]);
    if a.iter().flatten().any(|&x| x != 0) {
        p = p.framing(a.to_vec());
    }
    p
}

/// Canoe wavefunction Σ q^{vᵀv − vᵀAv}/(q²)_v X^v: mutate all inner strands,
/// then `T_{−A}`, `σ_{+1}`.
pub fn canoe_dual_path(g: usize, a: &[Vec<i64>]) -> SeedPath {
    let neg: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    strands_path(g).framing(neg).rescale(vec![1; g])
}

pub fn strands_path(g: usize) -> SeedPath {
    (1..=g).fold(SeedPath::default(), |p, k| p.mutate(&format!("s{k}"), 1))
}

pub fn canoe_framed(g: usize, a: &[Vec<i64>], order: u32) -> Result<(FramedSeed, XSeries)> {
    evaluate_path_from(&standard_necklace_seed(g)?, &XSeries::one(g, order), &canoe_framed_path(g, a))
}

pub fn canoe_dual(g: usize, a: &[Vec<i64>], order: u32) -> Result<(FramedSeed, XSeries)> {
    evaluate_path_from(&standard_necklace_seed(g)?, &XSeries::one(g, order), &canoe_dual_path(g, a))
}

/// Admissible paths from the standard necklace to a seed on the prism (g = 2)
/// and cube (g = 3) graphs.
pub fn prism_path() -> SeedPath {
    strands_path(2)
}

pub fn cube_path() -> SeedPath {
    strands_path(3).mutate("s4", -1)
}

/// The g = 1 loop: mutate strand 1, reframe by `σ_{d}∘T_{−1}`, mutate bead edge `a2`.
pub fn loop_g1_path(d: i64) -> SeedPath {
    SeedPath::default().mutate("s1", 1).framing(vec![vec![-1]]).rescale(vec![d]).mutate("a2", 1)
}

/// Integer exponents `n_{d,k}` of `F = ∏ Φ((−q)^k X^d)^{n_{d,k}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OVTable {
    pub g: usize,
    pub order: u32,
    pub entries: BTreeMap<(Vec<u32>, i64), BigInt>,
    /// First offending coefficient when the factorization is not integral.
    pub witness: Option<(Vec<u32>, QRat)>,
}

impl OVTable {
    pub fn is_integral(&self) -> bool {
        self.witness.is_none()
    }

    pub fn get(&self, d: &[u32], k: i64) -> BigInt {
        self.entries.get(&(d.to_vec(), k)).cloned().unwrap_or_default()
    }

    /// Expands `∏ Φ((−q)^k X^d)^{n}` up to the table's order.
    pub fn reconstruct(&self) -> Result<XSeries> {
        let mut acc = XSeries::one(self.g, self.order);
        for ((d, k), n) in &self.entries {
            let n: i64 = n.try_into().map_err(|_| Error::Numerical("exponent too large".into()))?;
            let phi = phi_series(*k, d, self.order)?;
            let p = if n >= 0 { phi.pow(n as u32) } else { phi.invert_unit()?.pow((-n) as u32) };
            acc = acc.mul(&p);
        }
        Ok(acc)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("d,k,n\n");
        for ((d, k), n) in &self.entries {
            let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("\"{}\",{k},{n}\n", ds.join(" ")));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((d, k), n)| serde_json::json!({"d": d, "k": k, "n": n.to_string()}))
            .collect();
        serde_json::json!({"g": self.g, "order": self.order, "integral": self.is_integral(), "rows": rows})
    }
}

/// `Φ((−q)^k X^d)` as a series: `Σ_j (−q)^{j(k+1)} X^{jd}/(q²)_j`.
pub fn phi_series(k: i64, d: &[u32], order: u32) -> Result<XSeries> {
    let deg = total(d);
    if deg == 0 {
        return Err(Error::Invalid("dilogarithm argument must have positive degree".into()));
    }
    let mut f = XSeries::one(d.len(), order);
    for j in 1..=(order / deg) {
        let e: Vec<u32> = d.iter().map(|x| x * j).collect();
        let c = &QRat::mqpow(j as i64 * (k + 1)) * &crate::qseries::qpoch2(j as usize).inv().unwrap();
        f.set(e, c);
    }
    Ok(f)
}

/// Factorization through `(1 − q²)·Log F`, with Adams operations in `−q`.
pub fn ov_factorize(f: &XSeries) -> Result<OVTable> {
    if !f.constant_term().is_one() {
        return Err(Error::Invalid("OV factorization needs constant term 1".into()));
    }
    let lg = f.plethystic_log_with(Adams::MinusQ)?;
    let factor = QRat::from_laurent(&[(0, 1), (2, -1)]);
    let mut t = OVTable { g: f.g(), order: f.order(), entries: BTreeMap::new(), witness: None };
    for (d, c) in lg.terms() {
        let c = &factor * c;
        match c.to_laurent() {
            Some(lp) => {
                for (e, v) in lp.in_minus_q().terms {
                    if !v.is_zero() {
                        t.entries.insert((d.clone(), e - 1), v);
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

/// Framed-integrality report: one entry per Ω that breaks integrality.
pub fn check_framing_preserves_integrality(f: &XSeries, omegas: &[IntMatrix]) -> Result<Vec<String>> {
    let mut rep = Vec::new();
    for om in omegas {
        let t = ov_factorize(&qtorus::framing_shift(om, f)?)?;
        if let Some((d, c)) = &t.witness {
            rep.push(format!("framing {:?}: coefficient at {d:?} is {c}", om.to_i64_rows()));
        }
    }
    Ok(rep)
}

/// Σ over k of the OV exponents, per degree (the classical disk counts).
pub fn ov_classical_sums(t: &OVTable) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for ((d, _), n) in &t.entries {
        *out.entry(d.clone()).or_insert_with(BigInt::zero) += n;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Expected closed form `Σ q^{e(v)}/(q²)_v X^v` for a quadratic exponent.
pub fn quadratic_series(g: usize, order: u32, quad: &[Vec<i64>]) -> XSeries {
    let mut f = XSeries::zero(g, order);
    for v in crate::qseries::exponents_upto(g, order) {
        let mut e = 0i64;
        for i in 0..g {
            for j in 0..g {
                e += v[i] as i64 * quad[i][j] * v[j] as i64;
            }
        }
        let mut den = QRat::one();
        for &vi in &v {
            den = &den * &crate::qseries::qpoch2(vi as usize);
        }
        f.set(v.clone(), &QRat::qpow(e) * &den.inv().unwrap());
    }
    f
}

