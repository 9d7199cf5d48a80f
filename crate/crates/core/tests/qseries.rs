use chromlag::qseries::*;
use chromlag::wavefn::phi_series;
use num_bigint::BigInt;
use proptest::prelude::*;

fn x(g: usize, order: u32, i: usize) -> XSeries {
    XSeries::var(g, order, i)
}

fn one_minus_q2() -> QRat {
    QRat::from_laurent(&[(0, 1), (2, -1)])
}

#[test]
fn arithmetic_examples() {
    let one = XSeries::one(1, 4);
    let a = one.add(&x(1, 4, 0));
    let b = one.sub(&x(1, 4, 0));
    assert_eq!(a.mul(&b), one.sub(&x(1, 4, 0).pow(2)));
    let inv = b.invert_unit().unwrap();
    assert!((0..=4).all(|k| inv.get(&[k]).is_one()));
    let c = one.sub(&x(1, 4, 0).scale(&one_minus_q2().inv().unwrap()));
    assert_eq!(c.mul(&c.invert_unit().unwrap()), one);
    assert!(x(1, 4, 0).invert_unit().is_err());
    assert!(series_arith(&XSeries::<QRat>::one(1, 3), &XSeries::one(2, 3), SeriesOp::Add).is_err());
}

#[test]
fn pochhammer_examples() {
    let p = pochhammer_inf(&QRat::one(), &[1], 2).unwrap();
    let c1 = -&one_minus_q2().inv().unwrap();
    let c2 = &QRat::qpow(2) * &(&one_minus_q2() * &QRat::from_laurent(&[(0, 1), (4, -1)])).inv().unwrap();
    assert_eq!(p, XSeries::from_terms(1, 2, [(vec![0], QRat::one()), (vec![1], c1), (vec![2], c2)]));
    // (x;q²)∞ = (1−x)(q²x;q²)∞
    for order in 1..=8 {
        let lhs = pochhammer_inf(&QRat::one(), &[1], order).unwrap();
        let shifted = pochhammer_inf(&QRat::qpow(2), &[1], order).unwrap();
        let rhs = XSeries::one(1, order).sub(&x(1, order, 0)).mul(&shifted);
        assert_eq!(lhs, rhs, "D={order}");
    }
    // (x;q²)∞ = Φ(−q⁻¹x)⁻¹, equivalently (−qx;q²)∞ = Φ(x)⁻¹
    let p = pochhammer_inf(&QRat::one(), &[1], 7).unwrap();
    assert_eq!(p, phi_series(-1, &[1], 7).unwrap().invert_unit().unwrap());
    let p = pochhammer_inf(&QRat::mqpow(1), &[1], 7).unwrap();
    assert_eq!(p, phi_series(0, &[1], 7).unwrap().invert_unit().unwrap());
}

#[test]
fn adams_examples() {
    let f = x(1, 6, 0).scale(&one_minus_q2().inv().unwrap());
    let want = x(1, 6, 0).pow(2).scale(&QRat::from_laurent(&[(0, 1), (4, -1)]).inv().unwrap());
    assert_eq!(adams_substitute(&f, 2), want);
    assert_eq!(adams_substitute(&f, 1), f);
    let g = XSeries::from_terms(1, 3, [(vec![0], QRat::one()), (vec![1], QRat::qpow(1)), (vec![2], QRat::qpow(2))]);
    let want = XSeries::from_terms(1, 3, [(vec![0], QRat::one()), (vec![3], QRat::qpow(3))]);
    assert_eq!(adams_substitute(&g, 3), want);
}

#[test]
fn plethystic_examples() {
    let d = 7;
    let geo = XSeries::one(1, d).sub(&x(1, d, 0)).invert_unit().unwrap();
    assert_eq!(geo.plethystic_log().unwrap(), x(1, d, 0));
    let e1 = x(2, d, 0).plethystic_exp().unwrap();
    let e2 = x(2, d, 1).plethystic_exp().unwrap();
    assert_eq!(e1.mul(&e2).plethystic_log().unwrap(), x(2, d, 0).add(&x(2, d, 1)));
    let p = pochhammer_inf(&QRat::one(), &[1], d).unwrap();
    assert_eq!(p.plethystic_log().unwrap(), x(1, d, 0).scale(&-&one_minus_q2().inv().unwrap()));
}

#[test]
fn laurent_reduction() {
    let r = &QRat::from_laurent(&[(0, 1), (4, -1)]) * &one_minus_q2().inv().unwrap();
    let l = r.to_laurent().unwrap();
    assert_eq!((l.coeff(0), l.coeff(2), l.coeff(1)), (BigInt::from(1), BigInt::from(1), BigInt::from(0)));
    assert!(one_minus_q2().inv().unwrap().to_laurent().is_none());
    let l = QRat::from_laurent(&[(-1, 1), (1, 1)]).to_laurent().unwrap();
    assert_eq!((l.coeff(-1), l.coeff(1)), (BigInt::from(1), BigInt::from(1)));
}

#[test]
fn exponent_enumeration() {
    let mut e = exponents_of_degree(2, 2);
    e.sort();
    assert_eq!(e, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    assert_eq!(exponents_upto(3, 2).len(), 10);
    assert_eq!((1..=6).map(mobius).collect::<Vec<_>>(), vec![1, -1, -1, 0, -1, 1]);
}

#[test]
fn json_round_trip() {
    let p = pochhammer_inf(&QRat::mqpow(-3), &[1, 2], 6).unwrap();
    let text = p.to_json().to_string();
    assert_eq!(XSeries::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), p);
}

fn coeff() -> impl Strategy<Value = QRat> {
    (-3i64..=3, -2i64..=3, 0i64..=2, any::<bool>()).prop_map(|(a, k, j, den)| {
        let c = QRat::from_laurent(&[(k, a), (k + 1, 1)]);
        if den {
            &c * &QRat::from_laurent(&[(0, 1), (2 * j + 2, -1)]).inv().unwrap()
        } else {
            c
        }
    })
}

fn series(g: usize, d: u32, constant: bool) -> impl Strategy<Value = XSeries> {
    let exps = exponents_upto(g, d);
    proptest::collection::vec((0..exps.len(), coeff()), 0..5).prop_map(move |ts| {
        let mut f = XSeries::zero(g, d);
        for (i, c) in ts {
            if !constant && exps[i].iter().all(|&e| e == 0) {
                continue;
            }
            let cur = f.get(&exps[i]);
            f.set(exps[i].clone(), &cur + &c);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ring_axioms(a in series(2, 4, true), b in series(2, 4, true), c in series(2, 4, true)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_empty());
    }

    #[test]
    fn plethystic_inverse(f in series(2, 4, false)) {
        prop_assert_eq!(f.plethystic_exp().unwrap().plethystic_log().unwrap(), f.clone());
        prop_assert_eq!(f.plethystic_exp_with(Adams::MinusQ).unwrap().plethystic_log_with(Adams::MinusQ).unwrap(), f);
    }

    #[test]
    fn log_exp_inverse(f in series(1, 5, false)) {
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn difference_relation(k in -2i64..=2, sign in any::<bool>(), d in 1u32..=8) {
        let c = if sign { QRat::qpow(k) } else { QRat::mqpow(k) };
        let lhs = pochhammer_inf(&c, &[1], d).unwrap();
        let rhs = XSeries::one(1, d).sub(&x(1, d, 0).scale(&c)).mul(&pochhammer_inf(&(&c * &QRat::qpow(2)), &[1], d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn qrat_field(a in coeff(), b in coeff()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if let Some(bi) = b.inv() {
            prop_assert_eq!(&(&a * &b) * &bi, a.clone());
        }
        let (n, dd) = (a.num_string(), a.den_string());
        prop_assert_eq!(QRat::parse(&n, &dd).unwrap(), a);
    }
}
