use chromlag::cubicmap::*;
use chromlag::intlin::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

fn named() -> Vec<CubicMap> {
    let mut v = vec![theta().unwrap(), tetrahedron().unwrap(), prism().unwrap(), cube().unwrap()];
    for g in 1..=4 {
        v.push(necklace(g).unwrap());
        v.push(canoe(g).unwrap());
    }
    v
}

fn check_invariants(m: &CubicMap) {
    let (v, e, f) = (m.n_vertices(), m.n_edges(), m.n_faces());
    assert_eq!(v + f, e + 2, "Euler characteristic");
    assert_eq!(v % 2, 0);
    assert_eq!(2 * e, 3 * v);
    assert_eq!(f, m.genus() + 3);
    let w = m.edge_skew_form();
    assert!(w.is_antisymmetric());
    assert_eq!(smith_normal_form(&w).rank, 2 * m.genus());
    // faces span the kernel of ω̄ and sum to twice the all-edges vector
    let faces = m.faces();
    let fv: Vec<Vec<i64>> = faces.iter().map(|c| m.face_vector(c)).collect();
    let fm = IntMatrix::from_rows(&fv);
    assert!(fm.mul(&w).unwrap().is_zero());
    assert_eq!(fm.rank() + 2 * m.genus(), e);
    let total: Vec<i64> = (0..e).map(|j| fv.iter().map(|r| r[j]).sum()).collect();
    assert_eq!(total, vec![2; e]);
}

#[test]
fn named_counts() {
    let counts = |m: &CubicMap| (m.n_vertices(), m.n_edges(), m.n_faces(), m.genus());
    assert_eq!(counts(&tetrahedron().unwrap()), (4, 6, 4, 1));
    assert_eq!(counts(&necklace(5).unwrap()), (12, 18, 8, 5));
    assert_eq!(counts(&cube().unwrap()), (8, 12, 6, 3));
    assert_eq!(counts(&prism().unwrap()), (6, 9, 5, 2));
    assert_eq!(counts(&theta().unwrap()), (2, 3, 3, 0));
    for m in named() {
        check_invariants(&m);
    }
    assert!(build_named_str("dodecahedron", 1).is_err());
    assert!(necklace(0).is_err());
    let t = build_named(NamedGraph::Prism, 7).unwrap();
    assert!(t.is_isomorphic(&prism().unwrap()));
}

#[test]
fn faces() {
    let t = theta().unwrap();
    assert!(t.faces().iter().all(|f| f.half_edges.len() == 2));
    let t = tetrahedron().unwrap();
    assert!(t.faces().iter().all(|f| f.half_edges.len() == 3));
    // necklace(1): two bead bigons, two faces bounded by both strands
    let n = necklace(1).unwrap();
    let mut lens: Vec<usize> = n.faces().iter().map(|f| f.half_edges.len()).collect();
    lens.sort();
    assert_eq!(lens, vec![2, 2, 4, 4]);
    let (s1, s2) = (n.edge_index("s1").unwrap(), n.edge_index("s2").unwrap());
    for f in n.faces() {
        let es = n.face_edges(&f);
        if es.len() == 4 {
            assert!(es.contains(&s1) && es.contains(&s2));
        }
    }
    // prism: two triangles, three quadrilaterals
    let mut lens: Vec<usize> = prism().unwrap().faces().iter().map(|f| f.half_edges.len()).collect();
    lens.sort();
    assert_eq!(lens, vec![3, 3, 4, 4, 4]);
    assert!(cube().unwrap().faces().iter().all(|f| f.half_edges.len() == 4));
}

#[test]
fn necklace_skew_form() {
    for g in 1..=4 {
        let n = necklace(g).unwrap();
        let w = n.edge_skew_form();
        let idx = |l: String| n.edge_index(&l).unwrap();
        for k in 1..=g + 1 {
            // a bead is a bigon, so a_k + b_k lies in the kernel
            assert_eq!(w.get_i64(idx(format!("a{k}")), idx(format!("b{k}"))), 0);
        }
        for k in 1..=g {
            assert_eq!(w.get_i64(idx(format!("a{k}")), idx(format!("s{k}"))).abs(), 1, "g={g} k={k}");
        }
    }
}

#[test]
fn flips() {
    let n = necklace(1).unwrap();
    let f = n.flip(n.edge_index("s1").unwrap()).unwrap();
    assert!(f.is_isomorphic(&canoe(1).unwrap()));
    assert!(!f.is_isomorphic(&n));
    assert_eq!(f.edge_labels(), n.edge_labels());
    let t = tetrahedron().unwrap();
    for e in 0..6 {
        assert!(t.flip(e).unwrap().flip(e).unwrap().is_isomorphic(&t));
    }
    let p = prism().unwrap();
    let fp = p.flip(p.edge_index("T1").unwrap()).unwrap();
    assert!(fp.faces().iter().any(|c| c.half_edges.len() == 2));
    check_invariants(&fp);
    assert!(p.flip(99).is_err());
}

#[test]
fn isomorphism_is_label_blind() {
    let c = cube().unwrap();
    let codes: Vec<_> = named().iter().map(|m| m.canonical_code()).collect();
    assert!(codes.contains(&c.canonical_code()));
    assert!(!tetrahedron().unwrap().is_isomorphic(&c));
    assert!(prism().unwrap().is_isomorphic(&canoe(2).unwrap()));
}

#[test]
fn json_round_trip() {
    for m in named() {
        let text = m.to_json().to_string();
        let back = CubicMap::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);
    }
    let mut bad = cube().unwrap().to_json();
    bad["rotation"][0] = serde_json::json!(0);
    assert!(CubicMap::from_json(&bad).is_err());
}

#[test]
fn face_form_matches_vertices() {
    // ω̄(e,e') only couples edges sharing a vertex
    let m = cube().unwrap();
    let w = m.edge_skew_form();
    for e in 0..m.n_edges() {
        for f in 0..m.n_edges() {
            let (a0, a1) = m.halves(e);
            let (b0, b1) = m.halves(f);
            let share = [a0, a1].iter().any(|&h| [b0, b1].iter().any(|&k| m.vertex_of(h) == m.vertex_of(k)));
            if !share {
                assert_eq!(*w.get(e, f), BigInt::from(0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_flips_preserve_structure(which in 0usize..6, flips in proptest::collection::vec(0usize..18, 1..8)) {
        let mut m = [cube, prism, tetrahedron, || necklace(3), || canoe(2), || necklace(5)][which]().unwrap();
        for e in flips {
            let e = e % m.n_edges();
            let Ok(f) = m.flip(e) else { continue };
            prop_assert!(f.flip(e).unwrap().is_isomorphic(&m));
            m = f;
            check_invariants(&m);
        }
    }
}
