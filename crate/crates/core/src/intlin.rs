//! Exact integer linear algebra: Smith and Hermite normal forms, kernels,
//! lattice quotients and skew-form checks.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_width(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but with an explicit width (for empty row lists).
    pub fn from_rows_width(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn get_i64(&self, i: usize, j: usize) -> i64 {
        use num_traits::ToPrimitive;
        self.get(i, j).to_i64().expect("entry exceeds i64")
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_i64(&self, i: usize) -> Vec<i64> {
        (0..self.cols).map(|j| self.get_i64(i, j)).collect()
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row_i64(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + a * b;
                        m.set(i, j, v);
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    /// Stacks the rows of `self` above those of `o`.
    pub fn vstack(&self, o: &Self) -> Result<Self> {
        if self.cols != o.cols && self.rows > 0 && o.rows > 0 {
            return Err(Error::Dimension("vstack width".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { o.cols };
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + o.rows, cols, data })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[dst * self.cols + j] + k * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] = v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + dst] + k * &self.data[i * self.cols + src];
            self.data[i * self.cols + dst] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }

    /// Determinant by fraction-free elimination (square matrices only).
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    pub fn rank(&self) -> usize {
        let s = smith_normal_form(self);
        s.rank
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", r.join(","))?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * m * v = d`, with `v_inv = v^{-1}`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivot choice: smallest nonzero absolute value in the active block, ties
/// broken by (row, col) order.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut vi = IntMatrix::identity(c);
    let mut rank = 0;
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, vi, rank);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            vi.swap_rows(t, pj);
            let p = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                let qv = -(a.get(i, t) / &p);
                a.add_row(i, t, &qv);
                u.add_row(i, t, &qv);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let qv = -(a.get(t, j) / &p);
                a.add_col(j, t, &qv);
                v.add_col(j, t, &qv);
                // V' = V E with E = I + k e_t e_j^T, so V'^{-1} = (I - k e_t e_j^T) V^{-1}
                vi.add_row(t, j, &-&qv);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut fix = None;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !(a.get(i, j) % &p).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    finish(a, u, v, vi, rank)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, v_inv: IntMatrix, rank: usize) -> Smith {
    Smith { u, d, v, v_inv, rank }
}

/// Returns `(U, D, V)` with `U·M·V = D`.
pub fn smith_triple(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_normal_form(m);
    (s.u, s.d, s.v)
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    if m.rows != m.cols {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let s = smith_normal_form(m);
    if s.rank != m.rows || s.diagonal().iter().any(|d| !d.is_one()) {
        return Err(Error::NotInvertible("matrix is not unimodular".into()));
    }
    s.v.mul(&s.u)
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    (0..m.cols).map(|j| v.iter().enumerate().map(|(i, x)| x * m.get(i, j)).sum()).collect()
}

/// Row-style Hermite normal form of the lattice spanned by the rows; zero rows dropped.
/// Pivots are positive and entries above each pivot are reduced into [0, pivot).
pub fn hnf_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (r, c) = (a.rows, a.cols);
    let mut prow = 0;
    for col in 0..c {
        if prow == r {
            break;
        }
        loop {
            let piv = (prow..r)
                .filter(|&i| !a.get(i, col).is_zero())
                .min_by(|&i, &j| a.get(i, col).abs().cmp(&a.get(j, col).abs()).then(i.cmp(&j)));
            let Some(pi) = piv else { break };
            a.swap_rows(prow, pi);
            let p = a.get(prow, col).clone();
            let mut done = true;
            for i in prow + 1..r {
                let qv = -(a.get(i, col).div_floor(&p));
                a.add_row(i, prow, &qv);
                if !a.get(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                if a.get(prow, col).is_negative() {
                    a.negate_row(prow);
                }
                let p = a.get(prow, col).clone();
                for i in 0..prow {
                    let qv = -(a.get(i, col).div_floor(&p));
                    a.add_row(i, prow, &qv);
                }
                prow += 1;
                break;
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = (0..prow).map(|i| a.row(i)).collect();
    IntMatrix::from_big_rows(rows, c)
}

/// Basis (as rows) of the integer kernel {x : M x = 0}, in Hermite normal form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let c = m.cols;
    let rows: Vec<Vec<BigInt>> = (s.rank..c).map(|j| (0..c).map(|i| s.v.get(i, j).clone()).collect()).collect();
    hnf_rows(&IntMatrix::from_big_rows(rows, c))
}

/// Z^ambient modulo the row span of `relations`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePresentation {
    pub ambient_rank: usize,
    pub relations: IntMatrix,
}

impl LatticePresentation {
    pub fn new(ambient_rank: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows > 0 && relations.cols != ambient_rank {
            return Err(Error::Dimension(format!(
                "relation width {} vs ambient rank {}",
                relations.cols, ambient_rank
            )));
        }
        let relations = if relations.rows == 0 { IntMatrix::zeros(0, ambient_rank) } else { relations };
        Ok(LatticePresentation { ambient_rank, relations })
    }

    /// Free quotient coordinates: `proj` (ambient × rank) sends x to its class,
    /// `lift` (rank × ambient) gives representatives of the basis classes.
    pub fn free_quotient(&self) -> QuotientMap {
        let s = smith_normal_form(&self.relations);
        let n = self.ambient_rank;
        let r = s.rank;
        let proj: Vec<Vec<BigInt>> = (0..n).map(|i| (r..n).map(|j| s.v.get(i, j).clone()).collect()).collect();
        let lift: Vec<Vec<BigInt>> = (r..n).map(|j| s.v_inv.row(j)).collect();
        QuotientMap {
            proj: IntMatrix::from_big_rows(proj, n - r),
            lift: IntMatrix::from_big_rows(lift, n),
            torsion: s.diagonal().into_iter().filter(|x| *x > BigInt::one()).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub proj: IntMatrix,
    pub lift: IntMatrix,
    pub torsion: Vec<BigInt>,
}

impl QuotientMap {
    pub fn rank(&self) -> usize {
        self.proj.cols
    }

    /// Class of an ambient vector in free coordinates.
    pub fn class_of(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.proj.cols)
            .map(|j| x.iter().enumerate().map(|(i, xi)| xi * self.proj.get(i, j)).sum())
            .collect()
    }
}

pub fn quotient_rank_and_torsion(p: &LatticePresentation) -> (usize, Vec<BigInt>) {
    let s = smith_normal_form(&p.relations);
    let torsion = s.diagonal().into_iter().filter(|x| *x > BigInt::one()).collect();
    (p.ambient_rank - s.rank, torsion)
}

/// vᵀ S w for all row pairs equal to zero.
pub fn is_isotropic(vectors: &IntMatrix, skew: &IntMatrix) -> Result<bool> {
    if skew.rows != skew.cols || (vectors.rows > 0 && vectors.cols != skew.rows) {
        return Err(Error::Dimension(format!(
            "vectors of width {} against a {}x{} form",
            vectors.cols, skew.rows, skew.cols
        )));
    }
    let sv = skew.mul(&vectors.transpose())?;
    let gram = vectors.mul(&sv)?;
    Ok(gram.is_zero())
}

/// Integer coefficients c with c·basis = v, if v lies in the row lattice.
pub fn solve_in_lattice(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    // basisᵀ c = v  <=>  with U Bᵀ V = D : D (V^{-1} c) = U v
    let bt = basis.transpose();
    let s = smith_normal_form(&bt);
    let uv: Vec<BigInt> = (0..s.u.rows).map(|i| (0..v.len()).map(|j| s.u.get(i, j) * &v[j]).sum()).collect();
    let n = basis.rows;
    let mut y = vec![BigInt::zero(); n];
    for (i, val) in uv.iter().enumerate() {
        if i < s.rank {
            let d = s.d.get(i, i);
            if !(val % d).is_zero() {
                return None;
            }
            y[i] = val / d;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some((0..n).map(|i| (0..n).map(|j| s.v.get(i, j) * &y[j]).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_small() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn kernel_of_row() {
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![1, 1]]));
        assert_eq!(k, IntMatrix::from_rows(&[vec![1, -1]]));
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).rows(), 0);
    }

    #[test]
    fn hnf_canonical() {
        let m = IntMatrix::from_rows(&[vec![-1, -1, -1, -1], vec![1, 0, -1, 0]]);
        let h = hnf_rows(&m);
        assert_eq!(h, IntMatrix::from_rows(&[vec![1, 0, -1, 0], vec![0, 1, 2, 1]]));
    }

    #[test]
    fn lattice_solve() {
        let b = IntMatrix::from_rows(&[vec![1, 0, -1, 0], vec![0, 1, 2, 1]]);
        let v: Vec<BigInt> = [-1, -1, -1, -1].iter().map(|&x| BigInt::from(x)).collect();
        let c = solve_in_lattice(&b, &v).unwrap();
        assert_eq!(c, vec![BigInt::from(-1), BigInt::from(-1)]);
        let w: Vec<BigInt> = [1, 1, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert!(solve_in_lattice(&b, &w).is_none());
    }
}
