//! Python bindings: seeds, wavefunctions, invariant tables, foam homology,
//! chromatic checks and the non-compact quantum dilogarithm.

use chromlag::qseries::{QRat, XSeries};
use chromlag::seeds::{standard_necklace_seed, FramedSeed, SeedPath};
use chromlag::{cubicmap, faddeev, foam, quiverdt, wavefn};
use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: chromlag::Error) -> PyErr {
    match e {
        chromlag::Error::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_arg(s: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(s).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
}

/// Truncated power series in X_1..X_g with coefficients in Q(q).
#[pyclass(name = "Series", module = "chromlag", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySeries(pub XSeries);

#[pymethods]
impl PySeries {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        XSeries::from_json(&json_arg(text)?).map(PySeries).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    #[getter]
    fn g(&self) -> usize {
        self.0.g()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.order()
    }

    /// Coefficient of X^exp as a string such as "q^2/(1 - q^2)".
    fn coefficient(&self, exp: Vec<u32>) -> PyResult<String> {
        if exp.len() != self.0.g() {
            return Err(PyValueError::new_err(format!("exponent needs {} entries", self.0.g())));
        }
        Ok(self.0.get(&exp).to_string())
    }

    /// Coefficient of X^exp evaluated at a numeric q.
    fn evaluate_coefficient(&self, exp: Vec<u32>, q: f64) -> f64 {
        self.0.get(&exp).eval_f64(q)
    }

    fn terms(&self) -> Vec<(Vec<u32>, String)> {
        self.0.terms().iter().map(|(e, c)| (e.clone(), c.to_string())).collect()
    }

    fn __mul__(&self, o: &PySeries) -> PyResult<PySeries> {
        if o.0.g() != self.0.g() {
            return Err(PyValueError::new_err("series in different numbers of variables"));
        }
        Ok(PySeries(self.0.mul(&o.0)))
    }

    fn __eq__(&self, o: &PySeries) -> bool {
        self.0 == o.0
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series(g={}, order={}, terms={})", self.0.g(), self.0.order(), self.0.len())
    }
}

/// A framed seed: a cubic planar graph with a quantum-torus monomial per edge.
#[pyclass(name = "Seed", module = "chromlag", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySeed(pub FramedSeed);

#[pymethods]
impl PySeed {
    /// The standard necklace seed of genus g.
    #[staticmethod]
    fn necklace(g: usize) -> PyResult<Self> {
        standard_necklace_seed(g).map(PySeed).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        FramedSeed::from_json(&json_arg(text)?).map(PySeed).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.g
    }

    fn edge_labels(&self) -> Vec<String> {
        self.0.graph.edge_labels().to_vec()
    }

    /// Signed mutation at the edge with this label.
    #[pyo3(signature = (edge, sign = 1))]
    fn mutate(&self, edge: &str, sign: i32) -> PyResult<PySeed> {
        self.0.mutate_label(edge, sign).map(|(s, _)| PySeed(s)).map_err(err)
    }

    fn is_admissible(&self, edge: &str, sign: i32) -> PyResult<bool> {
        Ok(self.0.is_admissible(self.0.graph.edge_index(edge).map_err(err)?, sign))
    }

    /// Consistency problems of the edge labelling (empty when valid).
    fn validate(&self) -> Vec<String> {
        self.0.validate()
    }

    /// Wavefunction obtained by solving the face relations directly.
    fn wavefunction(&self, order: u32) -> PyResult<PySeries> {
        wavefn::solve_face_relations(&self.0, order)
            .map(PySeries)
            .map_err(|e| PyValueError::new_err(format!("face relations: {e}")))
    }

    /// Whether mutation at `edge` intertwines the face-relation modules up to degree `order`.
    #[pyo3(signature = (edge, sign = 1, order = 4))]
    fn check_mutation(&self, edge: &str, sign: i32, order: u32) -> PyResult<bool> {
        let e = self.0.graph.edge_index(edge).map_err(err)?;
        Ok(chromlag::seeds::check_mutation_compatibility(&self.0, e, sign, order).map_err(err)?.ok())
    }

    fn __repr__(&self) -> String {
        format!("Seed(genus={}, edges={})", self.0.g, self.0.graph.n_edges())
    }
}

/// Runs a seed path (JSON list of steps) from `seed`, carrying its wavefunction.
#[pyfunction]
#[pyo3(signature = (seed, path, order = 6, psi = None))]
fn evaluate_path(seed: &PySeed, path: &str, order: u32, psi: Option<&PySeries>) -> PyResult<(PySeed, PySeries)> {
    let p = SeedPath::from_json(&json_arg(path)?).map_err(err)?;
    let start = psi.map(|s| s.0.clone()).unwrap_or_else(|| XSeries::one(seed.0.g, order));
    let (s, f) = wavefn::evaluate_path_from(&seed.0, &start, &p).map_err(err)?;
    Ok((PySeed(s), PySeries(f)))
}

/// Canoe wavefunction Σ q^{vᵀAv}/(q²)_v X^v (or the dual framing).
#[pyfunction]
#[pyo3(signature = (a, order = 6, dual = false))]
fn canoe_wavefunction(a: Vec<Vec<i64>>, order: u32, dual: bool) -> PyResult<PySeries> {
    let g = a.len();
    let r = if dual { wavefn::canoe_dual(g, &a, order) } else { wavefn::canoe_framed(g, &a, order) };
    r.map(|(_, f)| PySeries(f)).map_err(err)
}

/// Ooguri–Vafa exponents as (d, k, n) rows; raises if the factorization is not integral.
#[pyfunction]
fn ov_invariants(series: &PySeries) -> PyResult<Vec<(Vec<u32>, i64, BigInt)>> {
    let t = wavefn::ov_factorize(&series.0).map_err(err)?;
    if let Some((d, c)) = t.witness {
        return Err(PyValueError::new_err(format!("not integral: X^{d:?} has exponent {c}")));
    }
    Ok(t.entries.into_iter().map(|((d, k), n)| (d, k, n)).collect())
}

/// DT generating series of a symmetric quiver with nonnegative adjacency.
#[pyfunction]
#[pyo3(signature = (a, order = 6))]
fn dt_series(a: Vec<Vec<i64>>, order: u32) -> PyResult<PySeries> {
    let q = quiverdt::SymQuiver::new(a).map_err(err)?;
    Ok(PySeries(quiverdt::dt_series(&q, order)))
}

/// Disk invariants as (d, n) rows; any integer adjacency.
#[pyfunction]
#[pyo3(signature = (a, order = 7))]
fn disk_invariants(a: Vec<Vec<i64>>, order: u32) -> PyResult<Vec<(Vec<u32>, BigInt)>> {
    Ok(quiverdt::disk_invariants(&a, order).map_err(err)?.into_iter().collect())
}

/// H1 summary of a bundled deformed foam as a JSON string.
#[pyfunction]
#[pyo3(signature = (name, g = 1))]
fn foam_h1(name: &str, g: usize) -> PyResult<String> {
    let f = foam::build_named_foam(name, g).map_err(err)?;
    Ok(foam::h1_summary(&f).map_err(err)?.to_string())
}

/// Classical chromatic relations on random colourings: (colourings, degenerate, failures, passed).
#[pyfunction]
#[pyo3(signature = (graph, g = 1, samples = 200, seed = 0))]
fn chromatic_check(graph: &str, g: usize, samples: usize, seed: u64) -> PyResult<(usize, usize, usize, bool)> {
    let m = cubicmap::build_named_str(graph, g).map_err(err)?;
    let r = chromlag::chromatic::property_suite(&m, samples, seed);
    let failures = r.face_product_failures + r.global_failures + r.face_polynomial_failures;
    Ok((r.colorings, r.degenerate, failures, r.ok()))
}

/// Non-compact quantum dilogarithm φ_ℏ(z) for ℏ in the open first quadrant.
#[pyfunction]
fn phi(z: Complex64, hbar: Complex64) -> PyResult<Complex64> {
    let p = faddeev::HbarParam::new(hbar).map_err(err)?;
    faddeev::phi_ncqd(z, &p).map_err(err)
}

/// Checks one identity: returns (max_residual, threshold, passed).
#[pyfunction]
#[pyo3(signature = (name, hbar = None, points = 0, seed = 0))]
fn verify_identity(name: &str, hbar: Option<Complex64>, points: usize, seed: u64) -> PyResult<(f64, f64, bool)> {
    let id: faddeev::Identity = name.parse().map_err(err)?;
    let params = faddeev::IdentityParams { hbar, points, seed, ..Default::default() };
    let r = faddeev::verify_identity(id, &params).map_err(err)?;
    Ok((r.max_residual, r.threshold, r.passed))
}

/// Names of the dilogarithm identities.
#[pyfunction]
fn identity_names() -> Vec<&'static str> {
    faddeev::Identity::ALL.iter().map(|i| i.name()).collect()
}

/// Runs acceptance checks (all when empty): rows (id, name, passed, detail).
#[pyfunction]
#[pyo3(signature = (only = Vec::new()))]
fn golden(py: Python<'_>, only: Vec<usize>) -> PyResult<Vec<(usize, String, bool, String)>> {
    if only.iter().any(|&i| i == 0 || i > chromlag::cli::golden::CHECKS.len()) {
        return Err(PyValueError::new_err("check numbers run from 1 to 10"));
    }
    let res = py.detach(|| chromlag::cli::golden::run_checks(&only)).map_err(err)?;
    Ok(res.into_iter().map(|r| (r.id, r.name.to_string(), r.passed, r.detail)).collect())
}

/// Exact 1/(q²;q²)_k as a string, handy for comparing coefficients.
#[pyfunction]
fn inverse_qpoch2(k: usize) -> String {
    chromlag::qseries::qpoch2(k).inv().unwrap_or_else(QRat::zero).to_string()
}

#[pymodule]
#[pyo3(name = "chromlag")]
pub fn chromlag_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PySeed>()?;
    m.add_function(wrap_pyfunction!(evaluate_path, m)?)?;
    m.add_function(wrap_pyfunction!(canoe_wavefunction, m)?)?;
    m.add_function(wrap_pyfunction!(ov_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(dt_series, m)?)?;
    m.add_function(wrap_pyfunction!(disk_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(foam_h1, m)?)?;
    m.add_function(wrap_pyfunction!(chromatic_check, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(identity_names, m)?)?;
    m.add_function(wrap_pyfunction!(golden, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_qpoch2, m)?)?;
    Ok(())
}
