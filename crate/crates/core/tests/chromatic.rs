use chromlag::chromatic::*;
use chromlag::cubicmap::{self, CubicMap};
use chromlag::seeds::standard_necklace_seed;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn bundled() -> Vec<(&'static str, CubicMap)> {
    vec![
        ("theta", cubicmap::theta().unwrap()),
        ("tetrahedron", cubicmap::tetrahedron().unwrap()),
        ("prism", cubicmap::prism().unwrap()),
        ("cube", cubicmap::cube().unwrap()),
        ("necklace2", cubicmap::necklace(2).unwrap()),
        ("canoe3", cubicmap::canoe(3).unwrap()),
    ]
}

#[test]
fn property_suite_on_bundled_graphs() {
    for (name, m) in bundled() {
        let r = property_suite(&m, 200, 7);
        assert!(r.ok(), "{name}: {r:?}");
        assert_eq!(r.colorings, 200);
    }
}

#[test]
fn suite_is_deterministic() {
    let m = cubicmap::cube().unwrap();
    assert_eq!(property_suite(&m, 30, 3), property_suite(&m, 30, 3));
}

#[test]
fn tetrahedron_face_polynomials_vanish() {
    let m = cubicmap::tetrahedron().unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    let col = random_coloring(&m, &mut rng);
    let x = cross_ratios(&m, &col).unwrap();
    for f in m.faces() {
        for e in m.face_edges(&f) {
            assert_eq!(face_polynomial(&m, &x, &f, e).unwrap(), BigRational::from_integer(0.into()));
        }
    }
}

#[test]
fn base_dependence_when_face_product_fails() {
    let m = cubicmap::cube().unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    let mut x = cross_ratios(&m, &random_coloring(&m, &mut rng)).unwrap();
    let f = &m.faces()[0];
    assert!(base_independent(&m, &x, f));
    let e = m.face_edges(f)[1];
    x[e] = &x[e] * BigRational::from_integer(3.into());
    assert!(!base_independent(&m, &x, f));
}

#[test]
fn degenerate_coloring_names_edge() {
    let m = cubicmap::tetrahedron().unwrap();
    let col = vec![P1::int(1); m.n_faces()];
    let err = cross_ratios(&m, &col).unwrap_err().to_string();
    assert!(err.contains("edge"));
}

#[test]
fn classical_limit_of_face_relations() {
    for g in 1..=3 {
        let s = standard_necklace_seed(g).unwrap();
        assert!(classical_limit_mismatches(&s).unwrap().is_empty());
        let mut c = s.clone();
        for k in 1..=g {
            c = c.mutate_label(&format!("s{k}"), 1).unwrap().0;
        }
        let mm = classical_limit_mismatches(&c).unwrap();
        assert!(mm.is_empty(), "{mm:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn random_prism_colorings(seed in any::<u64>()) {
        let m = cubicmap::prism().unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let x = cross_ratios(&m, &random_coloring(&m, &mut rng)).unwrap();
        for f in m.faces() {
            prop_assert!(base_independent(&m, &x, &f));
            prop_assert_eq!(face_polynomial(&m, &x, &f, m.face_edges(&f)[0]).unwrap(), BigRational::from_integer(0.into()));
        }
    }
}
