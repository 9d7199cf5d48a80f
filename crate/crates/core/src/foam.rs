//! Deformed foams as combinatorial data: signed face words over edges and arcs
//! present H1 of the filling. From these we get the boundary map τ, phases,
//! isotropic framings, geometric cones and mutation transfer.
//!
//! H1 of the boundary surface is modelled as `Z^E / ker ω̄` (ω̄ the edge skew
//! form), which is the saturation of the face-boundary span.

use crate::cubicmap::{self, CubicMap};
use crate::intlin::{
    hnf_rows, is_isotropic, kernel_basis, smith_normal_form, solve_in_lattice, unimodular_inverse, vec_mul, IntMatrix,
    LatticePresentation, QuotientMap,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoamFace {
    pub word: Vec<(String, i64)>,
    pub external: bool,
}

impl FoamFace {
    fn new(word: &[(&str, i64)], external: bool) -> Self {
        FoamFace { word: word.iter().map(|(s, k)| (s.to_string(), *k)).collect(), external }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedFoam {
    pub graph: CubicMap,
    pub arcs: Vec<String>,
    pub faces: Vec<FoamFace>,
}

/// Phase `K = ker τ`, a base isotropic framing, and a geometric cone.
///
/// `phase` and `framing` rows are edge vectors (representatives in `Z^E`);
/// framing row `j` lifts the class of `cone_arcs[j]`.
#[derive(Clone, Debug)]
pub struct PhaseFraming {
    pub phase: IntMatrix,
    pub framing: IntMatrix,
    pub cone_arcs: Vec<String>,
    pub cone: IntMatrix,
}

/// Mutated foam together with the generator map inducing the H1 isomorphism.
#[derive(Clone, Debug)]
pub struct FoamMutation {
    pub foam: DeformedFoam,
    pub new_arc: String,
    /// Row `i` is the image of old generator `i` in the new generators.
    pub generator_map: IntMatrix,
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// `Z^E / ker ω̄` in free coordinates.
pub fn surface_quotient(graph: &CubicMap) -> QuotientMap {
    let k = kernel_basis(&graph.edge_skew_form());
    LatticePresentation::new(graph.n_edges(), k).expect("width matches").free_quotient()
}

impl DeformedFoam {
    pub fn new(graph: CubicMap, arcs: Vec<String>, faces: Vec<FoamFace>) -> Result<Self> {
        let f = DeformedFoam { graph, arcs, faces };
        f.validate()?;
        Ok(f)
    }

    pub fn genus(&self) -> usize {
        self.graph.genus()
    }

    pub fn n_generators(&self) -> usize {
        self.graph.n_edges() + self.arcs.len()
    }

    /// Edges first (by index), then arcs.
    pub fn generator_index(&self, name: &str) -> Result<usize> {
        if let Ok(e) = self.graph.edge_index(name) {
            return Ok(e);
        }
        self.arcs
            .iter()
            .position(|a| a == name)
            .map(|i| self.graph.n_edges() + i)
            .ok_or_else(|| Error::Invalid(format!("unknown foam letter '{name}'")))
    }

    pub fn generator_name(&self, i: usize) -> &str {
        let ne = self.graph.n_edges();
        if i < ne {
            self.graph.label(i)
        } else {
            &self.arcs[i - ne]
        }
    }

    pub fn relation_matrix(&self) -> Result<IntMatrix> {
        let n = self.n_generators();
        let mut rows = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let mut r = vec![0i64; n];
            for (l, s) in &f.word {
                r[self.generator_index(l)?] += s;
            }
            rows.push(r);
        }
        Ok(IntMatrix::from_rows_width(&rows, n))
    }

    fn structure_errors(&self) -> Result<()> {
        let ne = self.graph.n_edges();
        let mut seen = std::collections::BTreeSet::new();
        for a in &self.arcs {
            if !seen.insert(a.as_str()) || self.graph.edge_index(a).is_ok() {
                return Err(Error::Invalid(format!("arc name '{a}' is duplicated or clashes with an edge")));
            }
        }
        let mut count = vec![0usize; ne];
        for (i, f) in self.faces.iter().enumerate() {
            let mut edges_here = 0;
            for (l, s) in &f.word {
                let g = self.generator_index(l)?;
                if g < ne {
                    if !f.external {
                        return Err(Error::Invalid(format!("internal face {i} contains edge '{l}'")));
                    }
                    if *s != 1 {
                        return Err(Error::Invalid(format!("edge letter '{l}' in face {i} must have sign +1")));
                    }
                    count[g] += 1;
                    edges_here += 1;
                }
            }
            if f.external && edges_here != 1 {
                return Err(Error::Invalid(format!("external face {i} must contain exactly one edge")));
            }
        }
        if let Some(e) = count.iter().position(|&c| c != 1) {
            return Err(Error::Invalid(format!(
                "edge '{}' lies on {} external faces (expected 1)",
                self.graph.label(e),
                count[e]
            )));
        }
        Ok(())
    }

    /// Structural checks, rank H1 = g, and τ(∂f) = 0 for every graph face.
    pub fn validate(&self) -> Result<()> {
        self.structure_errors()?;
        let rel = self.relation_matrix()?;
        let p = LatticePresentation::new(self.n_generators(), rel.clone())?;
        let (rank, _) = crate::intlin::quotient_rank_and_torsion(&p);
        if rank != self.genus() {
            return Err(Error::Invalid(format!("H1 has rank {rank}, expected genus {}", self.genus())));
        }
        let n = self.n_generators();
        for (i, f) in self.graph.faces().iter().enumerate() {
            let mut v = self.graph.face_vector(f);
            v.resize(n, 0);
            if rel.rows() == 0 || solve_in_lattice(&rel, &big(&v)).is_none() {
                return Err(Error::Invalid(format!("graph face {i} does not vanish in H1 of the filling")));
            }
        }
        Ok(())
    }

    /// `Z^{E ∪ A}` modulo one relator per face.
    pub fn h1_presentation(&self) -> Result<LatticePresentation> {
        self.validate()?;
        LatticePresentation::new(self.n_generators(), self.relation_matrix()?)
    }

    pub fn h1_quotient(&self) -> Result<QuotientMap> {
        Ok(self.h1_presentation()?.free_quotient())
    }

    /// Class of a generator vector in free H1 coordinates.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.h1_quotient()?.class_of(v))
    }

    /// Row `e` is τ(e) in free H1(L) coordinates.
    pub fn tau_on_edges(&self) -> Result<IntMatrix> {
        let q = self.h1_quotient()?;
        let n = self.n_generators();
        let rows: Vec<Vec<BigInt>> = (0..self.graph.n_edges()).map(|e| q.class_of(&unit(n, e))).collect();
        Ok(IntMatrix::from_big_rows(rows, q.rank()))
    }

    /// τ : H1(S_Γ) → H1(L) in free coordinates (g × 2g); must be surjective.
    pub fn tau_map(&self) -> Result<IntMatrix> {
        let te = self.tau_on_edges()?;
        let sq = surface_quotient(&self.graph);
        let t = sq.lift.mul(&te)?.transpose();
        let g = self.genus();
        if g > 0 {
            let s = smith_normal_form(&t);
            if s.rank != g || s.diagonal().iter().take(g).any(|d| !d.is_one()) {
                return Err(Error::Invalid("τ is not surjective".into()));
            }
        }
        Ok(t)
    }

    /// Edge vectors killed by τ (contains ker ω̄), in Hermite form.
    pub fn edge_kernel(&self) -> Result<IntMatrix> {
        let te = self.tau_on_edges()?;
        if te.cols() == 0 {
            return Ok(IntMatrix::identity(self.graph.n_edges()));
        }
        Ok(kernel_basis(&te.transpose()))
    }

    /// Classes of the named generators, checked to form a basis of H1(L).
    fn basis_classes(&self, names: &[&str]) -> Result<IntMatrix> {
        let q = self.h1_quotient()?;
        let n = self.n_generators();
        let mut rows = Vec::new();
        for nm in names {
            rows.push(q.class_of(&unit(n, self.generator_index(nm)?)));
        }
        let m = IntMatrix::from_big_rows(rows, q.rank());
        if m.rows() != q.rank() || unimodular_inverse(&m).is_err() {
            return Err(Error::Invalid(format!("{names:?} is not a basis of H1 of the filling")));
        }
        Ok(m)
    }

    /// Matrix of τ on the given edges in the basis of the given arcs:
    /// column `j` is τ(domain[j]).
    pub fn tau_in_basis(&self, domain: &[&str], targets: &[&str]) -> Result<IntMatrix> {
        let b = self.basis_classes(targets)?;
        let binv = unimodular_inverse(&b)?;
        let te = self.tau_on_edges()?;
        let mut cols = Vec::new();
        for d in domain {
            let e = self.graph.edge_index(d)?;
            cols.push(vec_mul(&te.row(e), &binv));
        }
        Ok(IntMatrix::from_big_rows(cols, targets.len()).transpose())
    }

    /// ω̄ restricted to the given edges.
    pub fn surface_form_on(&self, edges: &[&str]) -> Result<IntMatrix> {
        let w = self.graph.edge_skew_form();
        let idx: Vec<usize> = edges.iter().map(|l| self.graph.edge_index(l)).collect::<Result<_>>()?;
        let rows: Vec<Vec<BigInt>> = idx.iter().map(|&i| idx.iter().map(|&j| w.get(i, j).clone()).collect()).collect();
        Ok(IntMatrix::from_big_rows(rows, idx.len()))
    }

    /// Arc subsets of size g whose classes form a basis of H1(L).
    pub fn geometric_cones(&self) -> Result<Vec<Vec<String>>> {
        let g = self.genus();
        let mut out = Vec::new();
        let na = self.arcs.len();
        let mut pick: Vec<usize> = (0..g).collect();
        if g > na {
            return Ok(out);
        }
        loop {
            let names: Vec<&str> = pick.iter().map(|&i| self.arcs[i].as_str()).collect();
            if self.basis_classes(&names).is_ok() {
                out.push(names.iter().map(|s| s.to_string()).collect());
            }
            // next combination
            let mut i = g;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if pick[i] < na - g + i {
                    pick[i] += 1;
                    for j in i + 1..g {
                        pick[j] = pick[j - 1] + 1;
                    }
                    break;
                }
            }
            if g == 0 {
                return Ok(out);
            }
        }
    }

    /// Phase, a base isotropic framing, a geometric cone, and the framing
    /// parameter rank g(g+1)/2.
    pub fn phase_and_framings(&self) -> Result<(PhaseFraming, usize)> {
        let g = self.genus();
        let ne = self.graph.n_edges();
        let sq = surface_quotient(&self.graph);
        let w = self.graph.edge_skew_form();
        // ω on H1(S) in free coordinates
        let omega = sq.lift.mul(&w)?.mul(&sq.lift.transpose())?;
        let tau = self.tau_map()?;
        if g == 0 {
            let empty = IntMatrix::zeros(0, ne);
            return Ok((PhaseFraming { phase: empty.clone(), framing: empty, cone_arcs: vec![], cone: IntMatrix::zeros(0, 0) }, 0));
        }
        let k = kernel_basis(&tau);
        if k.rows() != g || !is_isotropic(&k, &omega)? {
            return Err(Error::Invalid("phase is not Lagrangian".into()));
        }
        // extend K to a basis of H1(S): rows of V⁻¹ after K = U⁻¹[I 0]V⁻¹
        let s = smith_normal_form(&k);
        let y0 = IntMatrix::from_big_rows((g..2 * g).map(|j| s.v_inv.row(j)).collect(), 2 * g);
        // make ω(k_i, y_j) = δ_ij, then kill ω on Y by shearing along K
        let p = k.mul(&omega)?.mul(&y0.transpose())?;
        let r = unimodular_inverse(&p)
            .map_err(|_| Error::Invalid("no isotropic splitting: pairing with the phase is not unimodular".into()))?
            .transpose();
        let y1 = r.mul(&y0)?;
        let wy = y1.mul(&omega)?.mul(&y1.transpose())?;
        let mut c = IntMatrix::zeros(g, g);
        for i in 0..g {
            for j in i + 1..g {
                c.set(i, j, wy.get(i, j).clone());
            }
        }
        let y2 = add(&y1, &c.transpose().mul(&k)?);
        if !is_isotropic(&y2, &omega)? {
            return Err(Error::Numerical("isotropic completion failed".into()));
        }
        // express the splitting on a geometric cone basis
        let cones = self.geometric_cones()?;
        let q = self.h1_quotient()?;
        let (cone_arcs, cone) = match cones.first() {
            Some(c) => {
                let names: Vec<&str> = c.iter().map(|s| s.as_str()).collect();
                (c.clone(), self.basis_classes(&names)?)
            }
            None => (vec![], IntMatrix::identity(q.rank())),
        };
        let ty = y2.mul(&tau.transpose())?; // row j: τ(y_j)
        let tyinv = unimodular_inverse(&ty)?;
        let framing_s = cone.mul(&tyinv)?.mul(&y2)?; // row j: s(cone_j) in 2g coords
        let phase_e = k.mul(&sq.lift)?;
        let framing_e = framing_s.mul(&sq.lift)?;
        Ok((PhaseFraming { phase: phase_e, framing: framing_e, cone_arcs, cone }, g * (g + 1) / 2))
    }

    /// Flip at `edge`, adding one arc; errors when τ(edge) = 0.
    pub fn mutate_foam(&self, edge: usize, sign: i32) -> Result<FoamMutation> {
        self.validate()?;
        let n = self.n_generators();
        let te = self.tau_on_edges()?;
        if te.row(edge).iter().all(|x| x.is_zero()) {
            return Err(Error::Inadmissible(format!(
                "edge '{}' bounds a single strand (τ = 0); mutation not allowable",
                self.graph.label(edge)
            )));
        }
        let label = self.graph.label(edge).to_string();
        let mut alpha = format!("x{label}");
        while self.generator_index(&alpha).is_ok() {
            alpha.push('\'');
        }
        let graph = self.graph.flip(edge)?;
        let gain: Vec<usize> = self.graph.mutation_neighbors(edge, sign).iter().map(|&h| self.graph.edge_of(h)).collect();
        let mut faces = Vec::with_capacity(self.faces.len() + 1);
        for f in &self.faces {
            let mut f = f.clone();
            if f.external {
                let e = f.word.iter().find_map(|(l, _)| self.graph.edge_index(l).ok()).unwrap();
                if e == edge {
                    for (l, _) in f.word.iter_mut() {
                        if *l == label {
                            *l = alpha.clone();
                        }
                    }
                    f.external = false;
                } else {
                    for &nb in &gain {
                        if nb == e {
                            f.word.push((alpha.clone(), -1));
                        }
                    }
                }
            }
            faces.push(f);
        }
        faces.push(FoamFace { word: vec![(label.clone(), 1), (alpha.clone(), 1)], external: true });
        let mut arcs = self.arcs.clone();
        arcs.push(alpha.clone());
        let foam = DeformedFoam::new(graph, arcs, faces)?;
        // old generators → new: e ↦ −ẽ, gaining b ↦ b̃ + ẽ, others fixed
        let mut m = IntMatrix::zeros(n, n + 1);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m.set(edge, edge, -BigInt::one());
        for &nb in &gain {
            let v = m.get(nb, edge) + BigInt::one();
            m.set(nb, edge, v);
        }
        Ok(FoamMutation { foam, new_arc: alpha, generator_map: m })
    }

    pub fn mutate_foam_label(&self, label: &str, sign: i32) -> Result<FoamMutation> {
        self.mutate_foam(self.graph.edge_index(label)?, sign)
    }

    pub fn to_json(&self) -> Value {
        let faces: Vec<Value> = self
            .faces
            .iter()
            .map(|f| json!({"word": f.word.iter().map(|(l, s)| json!([l, s])).collect::<Vec<_>>(), "external": f.external}))
            .collect();
        json!({"graph": self.graph.to_json(), "arcs": self.arcs, "faces": faces})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let graph = CubicMap::from_json(v.get("graph").ok_or_else(|| Error::Parse("foam JSON needs 'graph'".into()))?)?;
        let arcs: Vec<String> = serde_json::from_value(v.get("arcs").cloned().unwrap_or(json!([])))
            .map_err(|e| Error::Parse(format!("arcs: {e}")))?;
        let faces: Vec<FoamFace> = serde_json::from_value(v.get("faces").cloned().unwrap_or(json!([])))
            .map_err(|e| Error::Parse(format!("faces: {e}")))?;
        DeformedFoam::new(graph, arcs, faces)
    }
}

fn add(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> =
        (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j) + b.get(i, j)).collect()).collect();
    IntMatrix::from_big_rows(rows, a.cols())
}

impl FoamMutation {
    /// Induced map H1(L_old) → H1(L_new) in free coordinates; errors if the
    /// generator map does not respect the relations or is not invertible.
    pub fn induced_h1_map(&self, old: &DeformedFoam) -> Result<IntMatrix> {
        let qo = old.h1_quotient()?;
        let qn = self.foam.h1_quotient()?;
        let new_rel = self.foam.relation_matrix()?;
        let old_rel = old.relation_matrix()?;
        for i in 0..old_rel.rows() {
            let img = vec_mul(&old_rel.row(i), &self.generator_map);
            if solve_in_lattice(&new_rel, &img).is_none() {
                return Err(Error::Invalid(format!("old relation {i} does not map to a relation")));
            }
        }
        let phi = qo.lift.mul(&self.generator_map)?.mul(&qn.proj)?;
        if phi.rows() > 0 {
            unimodular_inverse(&phi)?;
        }
        Ok(phi)
    }

    /// Edge part of the generator map (the lattice map ν on `Z^E`).
    pub fn edge_map(&self) -> IntMatrix {
        let ne = self.foam.graph.n_edges();
        let rows: Vec<Vec<BigInt>> = (0..ne).map(|i| (0..ne).map(|j| self.generator_map.get(i, j).clone()).collect()).collect();
        IntMatrix::from_big_rows(rows, ne)
    }

    /// Image of the old τ-kernel (edge vectors) plus the new ker ω̄, in Hermite form.
    pub fn transferred_edge_kernel(&self, old: &DeformedFoam) -> Result<IntMatrix> {
        let k = old.edge_kernel()?.mul(&self.edge_map())?;
        let extra = kernel_basis(&self.foam.graph.edge_skew_form());
        Ok(hnf_rows(&k.vstack(&extra)?))
    }
}

/// Necklace foam: one arc per strand, beads bound discs.
pub fn necklace_foam(g: usize) -> Result<DeformedFoam> {
    let graph = cubicmap::necklace(g)?;
    let arcs: Vec<String> = (1..=g + 1).map(|k| format!("c{k}")).collect();
    let mut faces = Vec::new();
    for k in 1..=g + 1 {
        faces.push(FoamFace::new(&[(&format!("s{k}"), 1), (&format!("c{k}"), -1)], true));
        faces.push(FoamFace::new(&[(&format!("a{k}"), 1)], true));
        faces.push(FoamFace::new(&[(&format!("b{k}"), 1)], true));
    }
    faces.push(FoamFace { word: arcs.iter().map(|a| (a.clone(), 1)).collect(), external: false });
    DeformedFoam::new(graph, arcs, faces)
}

/// Canoe foam: the necklace foam mutated at the inner strands.
pub fn canoe_foam(g: usize) -> Result<DeformedFoam> {
    let mut f = necklace_foam(g)?;
    for k in 1..=g {
        f = f.mutate_foam_label(&format!("s{k}"), 1)?.foam;
    }
    Ok(f)
}

/// The triangular prism foam with arcs a, b, c.
pub fn prism_foam() -> Result<DeformedFoam> {
    let graph = cubicmap::prism()?;
    let ext: &[&[(&str, i64)]] = &[
        &[("T1", 1), ("a", 1)],
        &[("T2", 1), ("a", -1), ("c", -1)],
        &[("T3", 1), ("b", -1)],
        &[("L1", 1), ("b", 1)],
        &[("L2", 1)],
        &[("L3", 1), ("c", 1)],
        &[("B1", 1), ("b", -1), ("a", -1)],
        &[("B2", 1), ("a", 1)],
        &[("B3", 1), ("c", -1)],
    ];
    let mut faces: Vec<FoamFace> = ext.iter().map(|w| FoamFace::new(w, true)).collect();
    faces.push(FoamFace::new(&[("b", 1), ("c", 1)], false));
    DeformedFoam::new(graph, vec!["a".into(), "b".into(), "c".into()], faces)
}

/// A single smoothed Harvey–Lawson tetrahedron; `bd` and `ce` bound discs.
pub fn harvey_lawson_foam() -> Result<DeformedFoam> {
    let graph = cubicmap::tetrahedron()?;
    let w: &[&[(&str, i64)]] = &[
        &[("bd", 1)],
        &[("ce", 1)],
        &[("cd", 1), ("g", -1)],
        &[("bc", 1), ("g", 1)],
        &[("de", 1), ("g", 1)],
        &[("eb", 1), ("g", -1)],
    ];
    DeformedFoam::new(graph, vec!["g".into()], w.iter().map(|x| FoamFace::new(x, true)).collect())
}

/// Theta graph filled by three discs (g = 0).
pub fn theta_foam() -> Result<DeformedFoam> {
    let graph = cubicmap::theta()?;
    let faces = graph.edge_labels().iter().map(|l| FoamFace { word: vec![(l.clone(), 1)], external: true }).collect();
    DeformedFoam::new(graph, vec![], faces)
}

pub fn build_named_foam(name: &str, g: usize) -> Result<DeformedFoam> {
    match name {
        "necklace" => necklace_foam(g),
        "canoe" => canoe_foam(g),
        "prism" => prism_foam(),
        "tetrahedron" | "harvey-lawson" => harvey_lawson_foam(),
        "theta" => theta_foam(),
        _ => Err(Error::Invalid(format!("no bundled foam named '{name}'"))),
    }
}

/// Summary used by the CLI.
pub fn h1_summary(f: &DeformedFoam) -> Result<Value> {
    let p = f.h1_presentation()?;
    let (rank, torsion) = crate::intlin::quotient_rank_and_torsion(&p);
    let te = f.tau_on_edges()?;
    let mut tau = BTreeMap::new();
    for e in 0..f.graph.n_edges() {
        tau.insert(f.graph.label(e).to_string(), te.row_i64(e));
    }
    let (pf, prank) = f.phase_and_framings()?;
    Ok(json!({
        "rank": rank,
        "torsion": torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "tau": tau,
        "phase": pf.phase.to_i64_rows(),
        "framing": pf.framing.to_i64_rows(),
        "cone_arcs": pf.cone_arcs,
        "cones": f.geometric_cones()?,
        "framing_parameter_rank": prank,
    }))
}
