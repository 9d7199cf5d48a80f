//! Framed seeds: a cubic planar graph with a quantum-torus monomial on every edge.
//!
//! Edge monomials are Weyl-form [`TorusMonomial`]s; `X_{e+e'}` means the
//! componentwise sum of `(c, m, n)` (and the product of signs).

use crate::cubicmap::{self, CubicMap, FaceCycle};
use crate::intlin::IntMatrix;
use crate::qseries::{QRat, XSeries};
use crate::qtorus::{self, OperatorPoly, TorusMonomial};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct FramedSeed {
    pub graph: CubicMap,
    pub g: usize,
    pub edge_mono: Vec<TorusMonomial>,
}

/// The dilogarithm factor produced by a mutation: the wavefunction is
/// multiplied by `Φ(mono)^{−sign}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DilogStep {
    pub mono: TorusMonomial,
    pub sign: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    Mutate { edge: String, sign: i32 },
    FramingShift { omega: Vec<Vec<i64>> },
    Rescale { d: Vec<i64> },
    RelabelEdges { map: BTreeMap<String, String> },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeedPath {
    pub steps: Vec<Step>,
}

impl SeedPath {
    pub fn new(steps: Vec<Step>) -> Self {
        SeedPath { steps }
    }
    pub fn mutate(mut self, edge: &str, sign: i32) -> Self {
        self.steps.push(Step::Mutate { edge: edge.into(), sign });
        self
    }
    pub fn framing(mut self, omega: Vec<Vec<i64>>) -> Self {
        self.steps.push(Step::FramingShift { omega });
        self
    }
    pub fn rescale(mut self, d: Vec<i64>) -> Self {
        self.steps.push(Step::Rescale { d });
        self
    }
    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.steps).unwrap()
    }
    pub fn from_json(v: &Value) -> Result<Self> {
        let steps: Vec<Step> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(SeedPath { steps })
    }
}

/// Componentwise lattice sum `X_{a+b}`.
pub fn weyl_sum(a: &TorusMonomial, b: &TorusMonomial) -> TorusMonomial {
    TorusMonomial {
        sign: a.sign * b.sign,
        c: a.c + b.c,
        m: a.m.iter().zip(&b.m).map(|(x, y)| x + y).collect(),
        n: a.n.iter().zip(&b.n).map(|(x, y)| x + y).collect(),
    }
}

fn unit_vec(g: usize, i: usize, s: i64) -> Vec<i64> {
    let mut v = vec![0; g];
    v[i] = s;
    v
}

/// The standard necklace seed: strands `s_k ↦ −q⁻¹U_k` (k ≤ g),
/// `s_{g+1} ↦ −q^{2g−1}∏U_k⁻¹`; beads `a_k ↦ (−q)⁻¹V_{k−1}V_k⁻¹`,
/// `b_k = q⁻²/a_k` (with `V_0 = V_{g+1} = 1`).
pub fn standard_necklace_seed(g: usize) -> Result<FramedSeed> {
    let graph = cubicmap::necklace(g)?;
    let mut mono = vec![TorusMonomial::identity(g); graph.n_edges()];
    for k in 1..=g + 1 {
        let mut nv = vec![0i64; g];
        if k >= 2 {
            nv[k - 2] += 1;
        }
        if k <= g {
            nv[k - 1] -= 1;
        }
        let nb: Vec<i64> = nv.iter().map(|x| -x).collect();
        mono[graph.edge_index(&format!("a{k}"))?] = TorusMonomial::weyl(-1, vec![0; g], nv);
        mono[graph.edge_index(&format!("b{k}"))?] = TorusMonomial::weyl(-1, vec![0; g], nb);
        let s = if k <= g {
            TorusMonomial::weyl(-1, unit_vec(g, k - 1, 1), vec![0; g])
        } else {
            TorusMonomial::weyl(2 * g as i64 - 1, vec![-1; g], vec![0; g])
        };
        mono[graph.edge_index(&format!("s{k}"))?] = s;
    }
    Ok(FramedSeed { graph, g, edge_mono: mono })
}

impl FramedSeed {
    pub fn new(graph: CubicMap, edge_mono: Vec<TorusMonomial>) -> Result<Self> {
        let g = graph.genus();
        if edge_mono.len() != graph.n_edges() || edge_mono.iter().any(|t| t.g() != g) {
            return Err(Error::Dimension("one rank-g monomial per edge required".into()));
        }
        Ok(FramedSeed { graph, g, edge_mono })
    }

    pub fn mono(&self, label: &str) -> Result<&TorusMonomial> {
        Ok(&self.edge_mono[self.graph.edge_index(label)?])
    }

    /// Empty report means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut rep = Vec::new();
        let w = self.graph.edge_skew_form();
        let ne = self.graph.n_edges();
        for e in 0..ne {
            for f in e + 1..ne {
                let p = self.edge_mono[e].pairing(&self.edge_mono[f]);
                let want = w.get_i64(e, f);
                if p != want {
                    rep.push(format!(
                        "pairing of '{}' and '{}' is {p}, edge form gives {want}",
                        self.graph.label(e),
                        self.graph.label(f)
                    ));
                }
            }
        }
        for (i, face) in self.graph.faces().iter().enumerate() {
            let s = self.face_sum(face);
            if s != TorusMonomial::scalar_mq(self.g, -2) {
                let labels: Vec<&str> = self.graph.face_edges(face).iter().map(|&e| self.graph.label(e)).collect();
                rep.push(format!("face {i} {labels:?}: X_(sum) = {s}, expected q^-2"));
            }
        }
        let mut tot = TorusMonomial::identity(self.g);
        for t in &self.edge_mono {
            tot = weyl_sum(&tot, t);
        }
        if tot != TorusMonomial::scalar_mq(self.g, -(self.g as i64 + 3)) {
            rep.push(format!("global relation: X_s = {tot}, expected (-q)^-(g+3)"));
        }
        rep
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn face_sum(&self, face: &FaceCycle) -> TorusMonomial {
        let mut s = TorusMonomial::identity(self.g);
        for e in self.graph.face_edges(face) {
            s = weyl_sum(&s, &self.edge_mono[e]);
        }
        s
    }

    pub fn is_admissible(&self, e: usize, sign: i32) -> bool {
        self.edge_mono[e].pow(sign as i64).is_admissible(1)
    }

    pub fn is_primitive(&self, e: usize, sign: i32) -> bool {
        self.edge_mono[e].pow(sign as i64).is_primitive(1)
    }

    /// Signed mutation at edge `e`: flip the graph, apply ν^sign to the monomials.
    pub fn mutate(&self, e: usize, sign: i32) -> Result<(FramedSeed, DilogStep)> {
        if sign != 1 && sign != -1 {
            return Err(Error::Invalid("mutation sign must be +1 or -1".into()));
        }
        let graph = self.graph.flip(e)?;
        let t = self.edge_mono[e].clone();
        let mut mono = self.edge_mono.clone();
        for h in self.graph.mutation_neighbors(e, sign) {
            let nb = self.graph.edge_of(h);
            mono[nb] = weyl_sum(&mono[nb], &t);
        }
        mono[e] = t.inv();
        let step = DilogStep { mono: t.pow(sign as i64), sign };
        Ok((FramedSeed { graph, g: self.g, edge_mono: mono }, step))
    }

    pub fn mutate_label(&self, label: &str, sign: i32) -> Result<(FramedSeed, DilogStep)> {
        self.mutate(self.graph.edge_index(label)?, sign)
    }

    pub fn framing_shift(&self, omega: &IntMatrix) -> Result<FramedSeed> {
        let mono = self.edge_mono.iter().map(|t| qtorus::framing_shift_mono(omega, t)).collect::<Result<_>>()?;
        Ok(FramedSeed { edge_mono: mono, ..self.clone() })
    }

    pub fn rescale(&self, d: &[i64]) -> Result<FramedSeed> {
        if d.len() != self.g {
            return Err(Error::Dimension("rescaling vector length".into()));
        }
        let mono = self.edge_mono.iter().map(|t| qtorus::rescale_sigma_mono(d, t)).collect();
        Ok(FramedSeed { edge_mono: mono, ..self.clone() })
    }

    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<FramedSeed> {
        let labels: Vec<String> =
            self.graph.edge_labels().iter().map(|l| map.get(l).cloned().unwrap_or_else(|| l.clone())).collect();
        let graph = CubicMap::new(self.graph.pairing().to_vec(), self.graph.rotation().to_vec(), labels)?;
        Ok(FramedSeed { graph, ..self.clone() })
    }

    /// Applies one path step; mutations must be admissible.
    pub fn apply_step(&self, step: &Step) -> Result<(FramedSeed, Option<DilogStep>)> {
        match step {
            Step::Mutate { edge, sign } => {
                let e = self.graph.edge_index(edge)?;
                if !self.is_admissible(e, *sign) {
                    return Err(Error::Inadmissible(format!(
                        "mutation at '{edge}' with sign {sign}: monomial {} is not admissible",
                        self.edge_mono[e]
                    )));
                }
                let (s, d) = self.mutate(e, *sign)?;
                Ok((s, Some(d)))
            }
            Step::FramingShift { omega } => Ok((self.framing_shift(&IntMatrix::from_rows(omega))?, None)),
            Step::Rescale { d } => Ok((self.rescale(d)?, None)),
            Step::RelabelEdges { map } => Ok((self.relabel(map)?, None)),
        }
    }

    /// `R_f = q⁻¹ + Σ_{k<n} X_{e_1+…+e_k}` starting from the face position `start`.
    pub fn face_relation_at(&self, face: &FaceCycle, start: usize) -> OperatorPoly {
        let edges = self.graph.face_edges(face);
        let n = edges.len();
        let mut r = OperatorPoly::scalar(self.g, QRat::qpow(-1));
        let mut acc = TorusMonomial::identity(self.g);
        for k in 0..n - 1 {
            acc = weyl_sum(&acc, &self.edge_mono[edges[(start + k) % n]]);
            r = r.add(&OperatorPoly::from_mono(&acc));
        }
        r
    }

    pub fn face_relation(&self, face: &FaceCycle, base_edge: usize) -> Result<OperatorPoly> {
        let pos = self.graph.face_edges(face).iter().position(|&e| e == base_edge).ok_or_else(|| {
            Error::Invalid(format!("edge '{}' is not on this face", self.graph.label(base_edge)))
        })?;
        Ok(self.face_relation_at(face, pos))
    }

    /// Finds an edge map to `other` (graph isomorphism preserving monomials).
    pub fn isomorphism_to(&self, other: &FramedSeed) -> Option<Vec<usize>> {
        for hm in self.graph.isomorphisms_to(&other.graph) {
            let em = self.graph.edge_map(&hm, &other.graph);
            if (0..self.graph.n_edges()).all(|e| self.edge_mono[e] == other.edge_mono[em[e]]) {
                return Some(em);
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        let mut mono = serde_json::Map::new();
        for (e, t) in self.edge_mono.iter().enumerate() {
            mono.insert(self.graph.label(e).to_string(), serde_json::to_value(t).unwrap());
        }
        json!({"graph": self.graph.to_json(), "edge_mono": mono})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let graph = CubicMap::from_json(&v["graph"])?;
        let obj = v["edge_mono"].as_object().ok_or_else(|| Error::Parse("edge_mono must be an object".into()))?;
        let mut mono = Vec::new();
        for l in graph.edge_labels() {
            let t = obj.get(l).ok_or_else(|| Error::Parse(format!("no monomial for edge '{l}'")))?;
            mono.push(serde_json::from_value(t.clone()).map_err(|e| Error::Parse(e.to_string()))?);
        }
        FramedSeed::new(graph, mono)
    }
}

/// Outcome of the representation-level intertwining check.
#[derive(Clone, Debug)]
pub struct CompatibilityReport {
    pub faces_checked: usize,
    pub max_degree: u32,
    pub failures: Vec<String>,
}

impl CompatibilityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Multiply by `Φ(step.mono)^{−sign}`.
pub fn apply_dilog_step(step: &DilogStep, f: &XSeries) -> Result<XSeries> {
    qtorus::apply_phi(&step.mono, -step.sign, f)
}

/// Degree shift making every U-exponent of the given operators nonnegative.
fn shift_for(ops: &[&OperatorPoly], g: usize) -> Vec<u32> {
    let mut s = vec![0u32; g];
    for op in ops {
        for (m, _) in op.terms().keys() {
            for i in 0..g {
                if m[i] < 0 {
                    s[i] = s[i].max((-m[i]) as u32);
                }
            }
        }
    }
    s
}

/// Verifies `ι_n(R'_{f'}) ∘ Φ = Φ ∘ ι_0(R_f)` on monomials `X^w` (`|w| ≤ D` above
/// the shift needed for negative U-powers) for every face, where `Φ` is the
/// dilogarithm factor of the mutation and `f` is the face of the original graph
/// occupying the same region as `f'`.
pub fn check_mutation_compatibility(s: &FramedSeed, e: usize, sign: i32, d: u32) -> Result<CompatibilityReport> {
    if !s.is_admissible(e, sign) {
        return Err(Error::Inadmissible(format!("mutation at '{}' is not admissible", s.graph.label(e))));
    }
    let (t, step) = s.mutate(e, sign)?;
    let (h0, h1) = s.graph.halves(e);
    let old_faces = s.graph.faces();
    let new_faces = t.graph.faces();
    let mut rep = CompatibilityReport { faces_checked: 0, max_degree: d, failures: vec![] };
    for nf in &new_faces {
        let Some(of) = old_faces.iter().find(|of| {
            of.half_edges.iter().any(|h| *h != h0 && *h != h1 && nf.half_edges.contains(h))
        }) else {
            rep.failures.push("face without a counterpart".into());
            continue;
        };
        let mut matched = false;
        'outer: for bp in 0..nf.half_edges.len() {
            let rn = t.face_relation_at(nf, bp);
            for bo in 0..of.half_edges.len() {
                let ro = s.face_relation_at(of, bo);
                let sh = shift_for(&[&rn, &ro], s.g);
                let base: u32 = sh.iter().sum();
                let top = base + d;
                let mut all = true;
                for w in crate::qseries::exponents_upto(s.g, d) {
                    let w: Vec<u32> = w.iter().zip(&sh).map(|(a, b)| a + b).collect();
                    let x = XSeries::monomial(s.g, top + base, w, QRat::one());
                    let lhs = rn.act(&apply_dilog_step(&step, &x)?)?.truncate(top);
                    let rhs = apply_dilog_step(&step, &ro.act(&x)?)?.truncate(top);
                    if lhs != rhs {
                        all = false;
                        break;
                    }
                }
                if all {
                    matched = true;
                    break 'outer;
                }
            }
        }
        rep.faces_checked += 1;
        if !matched {
            let labels: Vec<&str> = t.graph.face_edges(nf).iter().map(|&x| t.graph.label(x)).collect();
            rep.failures.push(format!("face {labels:?}: no base choice intertwines"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necklace_valid() {
        for g in 1..=4 {
            let s = standard_necklace_seed(g).unwrap();
            assert!(s.validate().is_empty(), "{:?}", s.validate());
        }
    }
}
