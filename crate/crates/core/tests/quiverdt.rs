use chromlag::qseries::{QRat, XSeries};
use chromlag::quiverdt::*;
use chromlag::wavefn::{canoe_framed, ov_classical_sums, ov_factorize};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn disk_table_rows() {
    for (row, h) in DISK_TABLE.iter().zip(2..) {
        let a = 2 - 2 * h;
        let n = disk_invariants(&[vec![a]], 7).unwrap();
        for d in 1..=7u32 {
            assert_eq!(n.get(&vec![d]).cloned().unwrap_or_default(), BigInt::from(row[d as usize - 1]), "h={h} d={d}");
        }
    }
}

#[test]
fn zero_framing_disk_is_delta() {
    let n = disk_invariants(&[vec![0]], 8).unwrap();
    assert_eq!(n.len(), 1);
    assert_eq!(n[&vec![1]], BigInt::from(1));
}

#[test]
fn y_system_zero_framing() {
    let ys = classical_y_system(&[vec![0]], 8).unwrap();
    // Y = 1/(1 − X)
    for k in 0..=8u32 {
        assert_eq!(ys[0].get(&[k]), QRat::one());
    }
    for a in [vec![vec![2]], vec![vec![-1, 1], vec![1, 3]]] {
        let ys = classical_y_system(&a, 5).unwrap();
        for i in 0..a.len() {
            assert!(y_residual(&a, &ys, i).unwrap().is_empty());
            assert_eq!(ys[i].constant_term(), QRat::one());
        }
    }
}

#[test]
fn dt_small_examples() {
    let z = dt_series(&SymQuiver::new(vec![vec![0]]).unwrap(), 4);
    // −t^{1/2}/(1 − t) with t^{1/2} = −q
    assert_eq!(z.get(&[1]), &QRat::from_laurent(&[(1, 1)]) * &QRat::from_laurent(&[(0, 1), (2, -1)]).inv().unwrap());
    let one = dt_series(&SymQuiver::new(vec![vec![1]]).unwrap(), 4);
    assert_eq!(one.get(&[3]), chromlag::qseries::qpoch2(3).inv().unwrap());
    assert!(SymQuiver::new(vec![vec![-1]]).is_err());
    assert!(SymQuiver::new(vec![vec![0, 1], vec![2, 0]]).is_err());
}

#[test]
fn dt_invariants_small() {
    let t = dt_integer_invariants(&SymQuiver::new(vec![vec![0]]).unwrap(), 8).unwrap();
    assert_eq!(t.entries.len(), 1);
    assert_eq!(t.get(&[1], 1), BigInt::from(1));
    let t = dt_integer_invariants(&SymQuiver::new(vec![vec![1]]).unwrap(), 8).unwrap();
    assert_eq!(t.entries.len(), 1);
    assert_eq!(t.get(&[1], 0), BigInt::from(-1));
}

#[test]
fn dt_sign_rule_and_reconstruction() {
    for a in [vec![vec![2]], vec![vec![3]], vec![vec![1, 1], vec![1, 0]], vec![vec![0, 2], vec![2, 1]]] {
        let q = SymQuiver::new(a.clone()).unwrap();
        let d = if a.len() == 1 { 7 } else { 5 };
        let t = dt_integer_invariants(&q, d).unwrap();
        assert!(t.is_integral(), "{a:?}");
        assert!(dt_sign_rule_holds(&t), "{a:?}");
        assert_eq!(dt_reconstruct(&t).unwrap(), dt_series(&q, d), "{a:?}");
    }
}

#[test]
fn coefficient_change() {
    for a in [vec![vec![0]], vec![vec![1]], vec![vec![-2]], vec![vec![1, 2], vec![2, 0]]] {
        assert!(coefficient_change_holds(&a, 5), "{a:?}");
    }
}

#[test]
fn framing_duality_small() {
    for a in [vec![vec![1]], vec![vec![0]], vec![vec![1, 1], vec![1, 0]]] {
        let q = SymQuiver::new(a.clone()).unwrap();
        let rep = verify_framing_duality(&q, if a.len() == 1 { 6 } else { 5 }).unwrap();
        assert!(rep.equal, "{a:?}: {:?}", rep.first_difference);
    }
}

#[test]
fn quantum_classical_consistency() {
    for a in [0, -2, -4] {
        let (_, psi) = canoe_framed(1, &[vec![a]], 5).unwrap();
        let sums = ov_classical_sums(&ov_factorize(&psi).unwrap());
        let disk = disk_invariants(&[vec![a]], 5).unwrap();
        for d in 1..=5u32 {
            let q = sums.get(&vec![d]).cloned().unwrap_or_default();
            let c = disk.get(&vec![d]).cloned().unwrap_or_default();
            assert_eq!(q, c, "A={a} d={d}");
        }
    }
    let _ = XSeries::<QRat>::one(1, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn dt_invariants_always_integral(a in 0i64..4, b in 0i64..3, c in 0i64..4) {
        let q = SymQuiver::new(vec![vec![a, b], vec![b, c]]).unwrap();
        let t = dt_integer_invariants(&q, 4).unwrap();
        prop_assert!(t.is_integral());
        prop_assert!(dt_sign_rule_holds(&t));
    }
}
