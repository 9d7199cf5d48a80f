//! Classical chromatic Lagrangian: cross-ratio coordinates from ℙ¹-colourings
//! of faces, the multiplicative face/global relations, and face polynomials.

use crate::cubicmap::{CubicMap, FaceCycle};
use crate::seeds::FramedSeed;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// A point of ℙ¹(ℚ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum P1 {
    Finite(BigRational),
    Infinity,
}

impl P1 {
    pub fn int(v: i64) -> Self {
        P1::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    fn homog(&self) -> (BigRational, BigRational) {
        match self {
            P1::Finite(x) => (x.clone(), BigRational::one()),
            P1::Infinity => (BigRational::one(), BigRational::zero()),
        }
    }
}

/// "p − q" in homogeneous form.
fn det(p: &P1, q: &P1) -> BigRational {
    let (a, b) = p.homog();
    let (c, d) = q.homog();
    a * d - b * c
}

/// `−(a−b)(c−d) / ((b−c)(d−a))`; `None` when degenerate (zero or infinite).
pub fn cross_ratio(a: &P1, b: &P1, c: &P1, d: &P1) -> Option<BigRational> {
    let num = det(a, b) * det(c, d);
    let den = det(b, c) * det(d, a);
    if den.is_zero() || num.is_zero() {
        return None;
    }
    Some(-num / den)
}

/// Colour per face, indexed like `CubicMap::faces()`.
pub type FaceColoring = Vec<P1>;

fn face_of_half_edges(m: &CubicMap) -> Vec<usize> {
    let mut f = vec![0; m.n_half_edges()];
    for (i, fc) in m.faces().iter().enumerate() {
        for &h in &fc.half_edges {
            f[h] = i;
        }
    }
    f
}

/// Faces `(a, b, c, d)` around edge `e`: `a`, `c` on either side, `b`, `d` at the ends.
pub fn edge_pattern(m: &CubicMap, e: usize) -> [usize; 4] {
    let fh = face_of_half_edges(m);
    let (h0, h1) = m.halves(e);
    let rot = m.rotation();
    [fh[h0], fh[rot[h0]], fh[h1], fh[rot[h1]]]
}

pub fn cross_ratios(m: &CubicMap, col: &FaceColoring) -> Result<Vec<BigRational>> {
    if col.len() != m.n_faces() {
        return Err(Error::Dimension(format!("{} colours for {} faces", col.len(), m.n_faces())));
    }
    (0..m.n_edges())
        .map(|e| {
            let [a, b, c, d] = edge_pattern(m, e);
            cross_ratio(&col[a], &col[b], &col[c], &col[d])
                .ok_or_else(|| Error::Invalid(format!("colouring is degenerate at edge '{}'", m.label(e))))
        })
        .collect()
}

/// `V_f = 1 + x_{e1} + x_{e1}x_{e2} + … + x_{e1}⋯x_{e(n−1)}`, starting at position `start`.
pub fn face_polynomial_at(m: &CubicMap, x: &[BigRational], f: &FaceCycle, start: usize) -> BigRational {
    let edges = m.face_edges(f);
    let n = edges.len();
    let mut acc = BigRational::one();
    let mut prod = BigRational::one();
    for k in 0..n - 1 {
        prod *= &x[edges[(start + k) % n]];
        acc += &prod;
    }
    acc
}

/// `V_f` with `base_edge` as `e1`.
pub fn face_polynomial(m: &CubicMap, x: &[BigRational], f: &FaceCycle, base_edge: usize) -> Result<BigRational> {
    let pos = m
        .face_edges(f)
        .iter()
        .position(|&e| e == base_edge)
        .ok_or_else(|| Error::Invalid(format!("edge '{}' is not on the face", m.label(base_edge))))?;
    Ok(face_polynomial_at(m, x, f, pos))
}

/// Whether `V_f` takes the same value for every choice of starting edge.
pub fn base_independent(m: &CubicMap, x: &[BigRational], f: &FaceCycle) -> bool {
    let v0 = face_polynomial_at(m, x, f, 0);
    (1..f.half_edges.len()).all(|s| face_polynomial_at(m, x, f, s) == v0)
}

fn random_rational(rng: &mut StdRng) -> BigRational {
    let n: i64 = rng.gen_range(-60..=60);
    let d: i64 = rng.gen_range(1..=25);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Pairwise distinct random colours; occasionally one face sits at ∞.
pub fn random_coloring(m: &CubicMap, rng: &mut StdRng) -> FaceColoring {
    let nf = m.n_faces();
    let mut used = BTreeSet::new();
    let mut col = Vec::with_capacity(nf);
    while col.len() < nf {
        let r = random_rational(rng);
        if used.insert(r.clone()) {
            col.push(P1::Finite(r));
        }
    }
    if rng.gen_bool(0.25) {
        let i = rng.gen_range(0..nf);
        col[i] = P1::Infinity;
    }
    col
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ChromaticReport {
    pub colorings: usize,
    pub degenerate: usize,
    pub face_product_failures: usize,
    pub global_failures: usize,
    pub face_polynomial_failures: usize,
}

impl ChromaticReport {
    pub fn ok(&self) -> bool {
        self.face_product_failures == 0 && self.global_failures == 0 && self.face_polynomial_failures == 0
            && self.degenerate < self.colorings
    }
}

fn check_one(m: &CubicMap, col: &FaceColoring) -> ChromaticReport {
    let mut r = ChromaticReport { colorings: 1, ..Default::default() };
    let Ok(x) = cross_ratios(m, col) else {
        r.degenerate = 1;
        return r;
    };
    let one = BigRational::one();
    let faces = m.faces();
    for f in &faces {
        let p: BigRational = m.face_edges(f).iter().map(|&e| x[e].clone()).product();
        if p != one {
            r.face_product_failures += 1;
        }
        if (0..f.half_edges.len()).any(|s| !face_polynomial_at(m, &x, f, s).is_zero()) {
            r.face_polynomial_failures += 1;
        }
    }
    let glob: BigRational = x.iter().cloned().product();
    let want = if m.genus() % 2 == 1 { one } else { -one };
    if glob != want {
        r.global_failures += 1;
    }
    r
}

/// Checks face products, the global relation and `V_f = 0` on `n` random
/// colourings (deterministic in `seed`).
pub fn property_suite(m: &CubicMap, n: usize, seed: u64) -> ChromaticReport {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = StdRng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64));
            check_one(m, &random_coloring(m, &mut rng))
        })
        .reduce(ChromaticReport::default, |a, b| ChromaticReport {
            colorings: a.colorings + b.colorings,
            degenerate: a.degenerate + b.degenerate,
            face_product_failures: a.face_product_failures + b.face_product_failures,
            global_failures: a.global_failures + b.global_failures,
            face_polynomial_failures: a.face_polynomial_failures + b.face_polynomial_failures,
        })
}

type CPoly = BTreeMap<(Vec<i64>, Vec<i64>), BigRational>;

fn m1(k: i64) -> BigRational {
    if k.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn at_minus_one(c: &crate::qseries::QRat) -> Result<BigRational> {
    c.eval(&-BigRational::one()).ok_or_else(|| Error::Numerical("coefficient has a pole at q = −1".into()))
}

/// Checks that every quantized face relation, specialised at `q = −1`, equals
/// `−V_f` under `x_e = −X_e|_{q=−1}`. Returns a description of each mismatch.
pub fn classical_limit_mismatches(seed: &FramedSeed) -> Result<Vec<String>> {
    let m = &seed.graph;
    // x_e as commutative monomials c·u^m v^n
    let mut xs = Vec::with_capacity(m.n_edges());
    for t in &seed.edge_mono {
        let c = -at_minus_one(&t.weyl_scalar())? * m1(dot(&t.m, &t.n));
        xs.push((c, t.m.clone(), t.n.clone()));
    }
    let mut out = Vec::new();
    for (fi, f) in m.faces().iter().enumerate() {
        let edges = m.face_edges(f);
        let n = edges.len();
        for start in 0..n {
            let mut v: CPoly = BTreeMap::new();
            let g = seed.g;
            let mut cur = (BigRational::one(), vec![0i64; g], vec![0i64; g]);
            *v.entry((cur.1.clone(), cur.2.clone())).or_insert_with(BigRational::zero) -= &cur.0;
            for k in 0..n - 1 {
                let (c, mm, nn) = &xs[edges[(start + k) % n]];
                cur.0 *= c;
                for i in 0..g {
                    cur.1[i] += mm[i];
                    cur.2[i] += nn[i];
                }
                *v.entry((cur.1.clone(), cur.2.clone())).or_insert_with(BigRational::zero) -= &cur.0;
            }
            v.retain(|_, c| !c.is_zero());
            let r = seed.face_relation_at(f, start);
            let mut rc: CPoly = BTreeMap::new();
            for ((mm, nn), c) in r.terms() {
                let val = at_minus_one(c)? * m1(dot(mm, nn));
                if !val.is_zero() {
                    rc.insert((mm.clone(), nn.clone()), val);
                }
            }
            if rc != v {
                out.push(format!("face {fi} base {start}: R_f(−1) ≠ −V_f"));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_limit() {
        let x = BigRational::new(7.into(), 3.into());
        let r = cross_ratio(&P1::int(0), &P1::int(1), &P1::Infinity, &P1::Finite(x.clone())).unwrap();
        assert_eq!(r, -x.recip());
        assert!(cross_ratio(&P1::int(1), &P1::int(1), &P1::int(2), &P1::int(3)).is_none());
    }
}
