//! Cubic planar graphs as combinatorial maps (rotation systems on the sphere).
//!
//! Half-edges are numbered `0..2E`. `pairing` is the edge involution, `rotation[h]`
//! is the next half-edge counterclockwise around the vertex of `h`. Edges are
//! indexed by increasing smallest half-edge, so indices survive flips.

use crate::intlin::IntMatrix;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicMap {
    pairing: Vec<usize>,
    rotation: Vec<usize>,
    edge_labels: Vec<String>,
    edge_of: Vec<usize>,
    halves: Vec<(usize, usize)>,
    vertex_of: Vec<usize>,
    n_vertices: usize,
}

/// A face as its counterclockwise sequence of half-edges; each half-edge points
/// away from the vertex where the walk enters that edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCycle {
    pub half_edges: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    half_edges: usize,
    pairing: Vec<usize>,
    rotation: Vec<usize>,
    edge_labels: Vec<String>,
}

impl CubicMap {
    pub fn new(pairing: Vec<usize>, rotation: Vec<usize>, edge_labels: Vec<String>) -> Result<Self> {
        let n = pairing.len();
        if rotation.len() != n || n % 2 != 0 || n == 0 {
            return Err(Error::Invalid("pairing/rotation lengths must match and be even".into()));
        }
        for h in 0..n {
            let p = pairing[h];
            if p >= n || p == h || pairing[p] != h {
                return Err(Error::Invalid(format!("pairing is not a fixed-point-free involution at {h}")));
            }
        }
        let mut seen = vec![false; n];
        for &r in &rotation {
            if r >= n || seen[r] {
                return Err(Error::Invalid("rotation is not a permutation".into()));
            }
            seen[r] = true;
        }
        let mut edge_of = vec![usize::MAX; n];
        let mut halves = Vec::new();
        for h in 0..n {
            if edge_of[h] == usize::MAX {
                edge_of[h] = halves.len();
                edge_of[pairing[h]] = halves.len();
                halves.push((h, pairing[h]));
            }
        }
        if edge_labels.len() != halves.len() {
            return Err(Error::Invalid(format!(
                "{} edge labels for {} edges",
                edge_labels.len(),
                halves.len()
            )));
        }
        let mut uniq = edge_labels.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() != edge_labels.len() {
            return Err(Error::Invalid("edge labels must be distinct".into()));
        }
        let mut vertex_of = vec![usize::MAX; n];
        let mut nv = 0;
        for h in 0..n {
            if vertex_of[h] != usize::MAX {
                continue;
            }
            let mut x = h;
            let mut len = 0;
            loop {
                vertex_of[x] = nv;
                x = rotation[x];
                len += 1;
                if x == h {
                    break;
                }
                if len > 3 {
                    break;
                }
            }
            if len != 3 {
                return Err(Error::Invalid(format!("vertex through half-edge {h} is not trivalent")));
            }
            nv += 1;
        }
        let m = CubicMap { pairing, rotation, edge_labels, edge_of, halves, vertex_of, n_vertices: nv };
        if !m.is_connected() {
            return Err(Error::Invalid("map is not connected".into()));
        }
        let chi = m.n_vertices as i64 - m.n_edges() as i64 + m.faces().len() as i64;
        if chi != 2 {
            return Err(Error::Invalid(format!("Euler characteristic {chi}, expected 2 (sphere)")));
        }
        Ok(m)
    }

    /// Builds from per-vertex counterclockwise lists of `(edge, end)` where
    /// `end` is 0 for the edge's first endpoint and 1 for its second.
    pub fn from_vertex_lists(labels: &[&str], verts: &[[(usize, usize); 3]]) -> Result<Self> {
        let ne = labels.len();
        let pairing: Vec<usize> = (0..2 * ne).map(|h| h ^ 1).collect();
        let mut rotation = vec![usize::MAX; 2 * ne];
        for v in verts {
            let hs: Vec<usize> = v.iter().map(|&(e, end)| 2 * e + end).collect();
            for i in 0..3 {
                rotation[hs[i]] = hs[(i + 1) % 3];
            }
        }
        if rotation.iter().any(|&r| r == usize::MAX) {
            return Err(Error::Invalid("some half-edge is not placed at a vertex".into()));
        }
        Self::new(pairing, rotation, labels.iter().map(|s| s.to_string()).collect())
    }

    /// Builds from a straight-line planar drawing: counterclockwise order is by angle.
    pub fn from_planar_drawing(coords: &[(f64, f64)], edges: &[(&str, usize, usize)]) -> Result<Self> {
        let mut at: Vec<Vec<(f64, usize, usize)>> = vec![Vec::new(); coords.len()];
        for (i, &(_, a, b)) in edges.iter().enumerate() {
            let ang = |u: usize, w: usize| (coords[w].1 - coords[u].1).atan2(coords[w].0 - coords[u].0);
            at[a].push((ang(a, b), i, 0));
            at[b].push((ang(b, a), i, 1));
        }
        let mut verts = Vec::new();
        for list in at.iter_mut() {
            if list.len() != 3 {
                return Err(Error::Invalid("drawing is not trivalent".into()));
            }
            list.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
            verts.push([(list[0].1, list[0].2), (list[1].1, list[1].2), (list[2].1, list[2].2)]);
        }
        let labels: Vec<&str> = edges.iter().map(|e| e.0).collect();
        Self::from_vertex_lists(&labels, &verts)
    }

    pub fn n_half_edges(&self) -> usize {
        self.pairing.len()
    }

    pub fn n_edges(&self) -> usize {
        self.halves.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_faces(&self) -> usize {
        self.faces().len()
    }

    pub fn genus(&self) -> usize {
        (self.n_vertices - 2) / 2
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn rotation(&self) -> &[usize] {
        &self.rotation
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn edge_index(&self, label: &str) -> Result<usize> {
        self.edge_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Invalid(format!("no edge labelled '{label}'")))
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    pub fn halves(&self, e: usize) -> (usize, usize) {
        self.halves[e]
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn rot_prev(&self, h: usize) -> usize {
        self.rotation[self.rotation[h]]
    }

    fn is_connected(&self) -> bool {
        let n = self.pairing.len();
        let mut seen = vec![false; n];
        let mut q = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(h) = q.pop_front() {
            for nb in [self.pairing[h], self.rotation[h]] {
                if !seen[nb] {
                    seen[nb] = true;
                    count += 1;
                    q.push_back(nb);
                }
            }
        }
        count == n
    }

    /// Faces, each traversed counterclockwise (face on the left), ordered by
    /// their smallest half-edge. The walk's next half-edge is `rot⁻¹(pair(h))`.
    pub fn faces(&self) -> Vec<FaceCycle> {
        let n = self.pairing.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for h in 0..n {
            if seen[h] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = h;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.rot_prev(self.pairing[x]);
            }
            out.push(FaceCycle { half_edges: cyc });
        }
        out
    }

    /// Edge sequence of a face.
    pub fn face_edges(&self, f: &FaceCycle) -> Vec<usize> {
        f.half_edges.iter().map(|&h| self.edge_of[h]).collect()
    }

    /// Σ_{e ∈ ∂f} e as an integer vector over edges (with multiplicity).
    pub fn face_vector(&self, f: &FaceCycle) -> Vec<i64> {
        let mut v = vec![0; self.n_edges()];
        for e in self.face_edges(f) {
            v[e] += 1;
        }
        v
    }

    /// ω̄(e,e') = Σ over shared vertices of +1 if e' follows e counterclockwise, −1 if it precedes.
    pub fn edge_skew_form(&self) -> IntMatrix {
        let ne = self.n_edges();
        let mut w = vec![vec![0i64; ne]; ne];
        for h in 0..self.n_half_edges() {
            let nx = self.rotation[h];
            let (e, f) = (self.edge_of[h], self.edge_of[nx]);
            w[e][f] += 1;
            w[f][e] -= 1;
        }
        IntMatrix::from_rows(&w)
    }

    /// Diagonal exchange at edge `e`; the edge keeps its label and half-edges.
    pub fn flip(&self, e: usize) -> Result<Self> {
        if e >= self.n_edges() {
            return Err(Error::Invalid(format!("edge index {e} out of range")));
        }
        let (h0, h1) = self.halves[e];
        if self.vertex_of[h0] == self.vertex_of[h1] {
            return Err(Error::Invalid(format!("edge '{}' is a loop and cannot be flipped", self.label(e))));
        }
        let (x1, x2) = (self.rotation[h0], self.rot_prev(h0));
        let (y1, y2) = (self.rotation[h1], self.rot_prev(h1));
        let mut rot = self.rotation.clone();
        // (h0, x1, x2), (h1, y1, y2)  ->  (h0, y2, x1), (h1, x2, y1)
        rot[h0] = y2;
        rot[y2] = x1;
        rot[x1] = h0;
        rot[h1] = x2;
        rot[x2] = y1;
        rot[y1] = h1;
        Self::new(self.pairing.clone(), rot, self.edge_labels.clone())
    }

    /// Half-edges at the endpoints of `e` that gain `e` under ν^sign:
    /// counterclockwise predecessors for `+`, successors for `−`.
    pub fn mutation_neighbors(&self, e: usize, sign: i32) -> [usize; 2] {
        let (h0, h1) = self.halves[e];
        if sign > 0 {
            [self.rot_prev(h0), self.rot_prev(h1)]
        } else {
            [self.rotation[h0], self.rotation[h1]]
        }
    }

    /// All orientation-preserving isomorphisms onto `other`, as half-edge maps.
    pub fn isomorphisms_to(&self, other: &CubicMap) -> Vec<Vec<usize>> {
        let n = self.n_half_edges();
        if n != other.n_half_edges() {
            return vec![];
        }
        let mut out = Vec::new();
        for t in 0..n {
            if let Some(m) = self.extend_iso(other, 0, t) {
                out.push(m);
            }
        }
        out
    }

    fn extend_iso(&self, other: &CubicMap, s: usize, t: usize) -> Option<Vec<usize>> {
        let n = self.n_half_edges();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[s] = t;
        used[t] = true;
        let mut q = VecDeque::from([s]);
        while let Some(h) = q.pop_front() {
            let img = map[h];
            for (a, b) in [(self.pairing[h], other.pairing[img]), (self.rotation[h], other.rotation[img])] {
                if map[a] == usize::MAX {
                    if used[b] {
                        return None;
                    }
                    map[a] = b;
                    used[b] = true;
                    q.push_back(a);
                } else if map[a] != b {
                    return None;
                }
            }
        }
        Some(map)
    }

    pub fn is_isomorphic(&self, other: &CubicMap) -> bool {
        !self.isomorphisms_to(other).is_empty()
    }

    /// Edge map induced by a half-edge isomorphism.
    pub fn edge_map(&self, half_map: &[usize], other: &CubicMap) -> Vec<usize> {
        (0..self.n_edges()).map(|e| other.edge_of(half_map[self.halves[e].0])).collect()
    }

    /// Canonical code: minimal BFS relabelling over all starting half-edges.
    pub fn canonical_code(&self) -> Vec<usize> {
        let n = self.n_half_edges();
        (0..n).map(|s| self.bfs_code(s)).min().unwrap_or_default()
    }

    fn bfs_code(&self, s: usize) -> Vec<usize> {
        let n = self.n_half_edges();
        let mut num = vec![usize::MAX; n];
        let mut order = vec![s];
        num[s] = 0;
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            for nb in [self.pairing[h], self.rotation[h]] {
                if num[nb] == usize::MAX {
                    num[nb] = order.len();
                    order.push(nb);
                }
            }
            i += 1;
        }
        order.iter().flat_map(|&h| [num[self.pairing[h]], num[self.rotation[h]]]).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MapJson {
            half_edges: self.n_half_edges(),
            pairing: self.pairing.clone(),
            rotation: self.rotation.clone(),
            edge_labels: self.edge_labels.clone(),
        })
        .unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: MapJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if j.half_edges != j.pairing.len() {
            return Err(Error::Parse("half_edges disagrees with pairing length".into()));
        }
        Self::new(j.pairing, j.rotation, j.edge_labels)
    }

    /// Label → edge index.
    pub fn label_index(&self) -> BTreeMap<String, usize> {
        self.edge_labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect()
    }
}

/// The named graphs used throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    Theta,
    Necklace,
    Canoe,
    Tetrahedron,
    Prism,
    Cube,
}

impl std::str::FromStr for NamedGraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "theta" => NamedGraph::Theta,
            "necklace" => NamedGraph::Necklace,
            "canoe" => NamedGraph::Canoe,
            "tetrahedron" => NamedGraph::Tetrahedron,
            "prism" => NamedGraph::Prism,
            "cube" => NamedGraph::Cube,
            other => return Err(Error::Invalid(format!("unknown graph name '{other}'"))),
        })
    }
}

pub fn build_named_str(name: &str, g: usize) -> Result<CubicMap> {
    build_named(name.parse()?, g)
}

pub fn build_named(name: NamedGraph, g: usize) -> Result<CubicMap> {
    match name {
        NamedGraph::Theta => theta(),
        NamedGraph::Necklace => necklace(g),
        NamedGraph::Canoe => canoe(g),
        NamedGraph::Tetrahedron => tetrahedron(),
        NamedGraph::Prism => prism(),
        NamedGraph::Cube => cube(),
    }
}

pub fn theta() -> Result<CubicMap> {
    CubicMap::from_vertex_lists(&["e1", "e2", "e3"], &[[(0, 0), (1, 0), (2, 0)], [(0, 1), (2, 1), (1, 1)]])
}

/// Necklace labels: beads `a_k` (upper) / `b_k` (lower), k = 1..g+1, strands `s_k`.
pub fn necklace_labels(g: usize) -> Vec<String> {
    let mut v = Vec::new();
    for k in 1..=g + 1 {
        v.push(format!("a{k}"));
        v.push(format!("b{k}"));
        v.push(format!("s{k}"));
    }
    v
}

/// The necklace with g+1 beads on a line, closed by the outer strand `s_{g+1}`.
///
/// Vertices 2k−2, 2k−1 bound bead k; strand s_k joins 2k−1 to 2k and s_{g+1}
/// joins vertex 0 to 2g+1 through the upper half-plane.
pub fn necklace(g: usize) -> Result<CubicMap> {
    if g == 0 {
        return Err(Error::Invalid("necklace needs g >= 1".into()));
    }
    let labels = necklace_labels(g);
    let a = |k: usize| 3 * (k - 1);
    let b = |k: usize| 3 * (k - 1) + 1;
    let s = |k: usize| 3 * (k - 1) + 2;
    let mut verts = Vec::new();
    // vertex 0
    verts.push([(a(1), 0), (s(g + 1), 0), (b(1), 0)]);
    for k in 1..=g {
        // right end of bead k
        verts.push([(s(k), 0), (a(k), 1), (b(k), 1)]);
        // left end of bead k+1
        verts.push([(a(k + 1), 0), (s(k), 1), (b(k + 1), 0)]);
    }
    verts.push([(s(g + 1), 1), (a(g + 1), 1), (b(g + 1), 1)]);
    let lr: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    CubicMap::from_vertex_lists(&lr, &verts)
}

/// Necklace with the inner strands s_1..s_g flipped.
pub fn canoe(g: usize) -> Result<CubicMap> {
    let mut m = necklace(g)?;
    for k in 1..=g {
        let e = m.edge_index(&format!("s{k}"))?;
        m = m.flip(e)?;
    }
    Ok(m)
}

/// Tetrahedron drawn with vertex d inside triangle b, c, e.
pub fn tetrahedron() -> Result<CubicMap> {
    let coords = [(2.0, 0.0), (-2.0, 0.0), (0.0, 1.0), (0.0, 3.0)]; // b, c, d, e
    CubicMap::from_planar_drawing(
        &coords,
        &[("bc", 0, 1), ("cd", 1, 2), ("de", 2, 3), ("eb", 3, 0), ("bd", 0, 2), ("ce", 1, 3)],
    )
}

/// Triangular prism: top A,B,C, bottom D,E,F; T1=AC, T2=BC, T3=AB, B1=DF,
/// B2=EF, B3=DE, L1=AD, L2=CF, L3=BE. Drawn from outside the top face.
pub fn prism() -> Result<CubicMap> {
    let top = [(0.0, 3.0), (2.3, 3.3), (1.0, 4.0)];
    let cx = (top[0].0 + top[1].0 + top[2].0) / 3.0;
    let cy = (top[0].1 + top[1].1 + top[2].1) / 3.0;
    let out = |p: (f64, f64)| (cx + 3.0 * (p.0 - cx), cy + 3.0 * (p.1 - cy));
    let coords = [top[0], top[1], top[2], out(top[0]), out(top[1]), out(top[2])];
    let (a, b, c, d, e, f) = (0, 1, 2, 3, 4, 5);
    CubicMap::from_planar_drawing(
        &coords,
        &[
            ("T1", a, c),
            ("T2", b, c),
            ("T3", a, b),
            ("B1", d, f),
            ("B2", e, f),
            ("B3", d, e),
            ("L1", a, d),
            ("L2", c, f),
            ("L3", b, e),
        ],
    )
}

/// Cube as two nested squares; edges 1–4 inner (bottom, right, top, left),
/// 5–8 outer (bottom, right, top, left), 9–12 diagonals (lower-left,
/// lower-right, upper-right, upper-left).
pub fn cube() -> Result<CubicMap> {
    let (i, o) = (1.2, 3.0);
    let coords = [(-i, -i), (i, -i), (i, i), (-i, i), (-o, -o), (o, -o), (o, o), (-o, o)];
    CubicMap::from_planar_drawing(
        &coords,
        &[
            ("1", 0, 1),
            ("2", 1, 2),
            ("3", 2, 3),
            ("4", 3, 0),
            ("5", 4, 5),
            ("6", 5, 6),
            ("7", 6, 7),
            ("8", 7, 4),
            ("9", 0, 4),
            ("10", 1, 5),
            ("11", 2, 6),
            ("12", 3, 7),
        ],
    )
}
