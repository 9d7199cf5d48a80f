use chromlag::intlin::IntMatrix;
use chromlag::qseries::{pochhammer_inf, QRat, XSeries};
use chromlag::qtorus::*;
use chromlag::wavefn::phi_series;
use proptest::prelude::*;

fn op(t: &TorusMonomial) -> OperatorPoly {
    OperatorPoly::from_mono(t)
}

#[test]
fn commutation() {
    let (u, v) = (TorusMonomial::u(1, 0), TorusMonomial::v(1, 0));
    let f = pochhammer_inf(&QRat::from_int(3), &[1], 6).unwrap();
    let vu = op(&v.mul(&u).unwrap()).act(&f).unwrap();
    let uv = op(&u.mul(&v).unwrap()).act(&f).unwrap();
    assert_eq!(vu, uv.scale(&QRat::qpow(2)));
    // different indices commute
    let (u1, v2) = (TorusMonomial::u(2, 0), TorusMonomial::v(2, 1));
    assert_eq!(u1.mul(&v2).unwrap(), v2.mul(&u1).unwrap());
    assert_eq!(u.mul(&TorusMonomial::identity(1)).unwrap(), u);
    assert!(u.mul(&u.inv()).unwrap().is_identity());
    assert!(u.mul(&TorusMonomial::u(2, 0)).is_err());
}

#[test]
fn action_examples() {
    let (u, v) = (TorusMonomial::u(1, 0), TorusMonomial::v(1, 0));
    for k in 0..5 {
        let xk = XSeries::var(1, 6, 0).pow(k);
        assert_eq!(op(&v).act(&xk).unwrap(), xk.scale(&QRat::qpow(2 * k as i64)));
    }
    assert_eq!(op(&u).act(&XSeries::one(1, 4)).unwrap(), XSeries::var(1, 4, 0));
    // (1 + UV − V)(X;q²)∞ = 0
    let l = OperatorPoly::scalar(1, QRat::one())
        .add(&op(&TorusMonomial::normal(1, 0, vec![1], vec![1])))
        .sub(&op(&v));
    assert!(l.act(&pochhammer_inf(&QRat::one(), &[1], 8).unwrap()).unwrap().is_empty());
    // U⁻¹ only where divisible
    assert!(op(&u.inv()).act(&XSeries::one(1, 4)).is_err());
    assert_eq!(op(&u.inv()).act(&XSeries::var(1, 4, 0)).unwrap(), XSeries::one(1, 4));
}

#[test]
fn framing_examples() {
    let f = XSeries::one(1, 3).add(&XSeries::var(1, 3, 0));
    assert_eq!(framing_shift(&IntMatrix::zeros(1, 1), &f).unwrap(), f);
    let want = XSeries::one(1, 3).add(&XSeries::var(1, 3, 0).scale(&QRat::qpow(1)));
    assert_eq!(framing_shift(&IntMatrix::from_rows(&[vec![1]]), &f).unwrap(), want);
    assert!(framing_shift(&IntMatrix::from_rows(&[vec![0, 1], vec![0, 0]]), &XSeries::<QRat>::one(2, 2)).is_err());

    let u = TorusMonomial::u(1, 0);
    let plus = framing_shift_mono(&IntMatrix::from_rows(&[vec![1]]), &u).unwrap();
    assert_eq!((plus.m.clone(), plus.n.clone(), plus.normal_scalar()), (vec![1], vec![1], QRat::qpow(1)));
    let minus = framing_shift_mono(&IntMatrix::from_rows(&[vec![-1]]), &u).unwrap();
    assert_eq!((minus.m.clone(), minus.n.clone(), minus.normal_scalar()), (vec![1], vec![-1], QRat::qpow(-1)));
    let v = TorusMonomial::v(1, 0);
    assert_eq!(framing_shift_mono(&IntMatrix::from_rows(&[vec![4]]), &v).unwrap(), v);
}

#[test]
fn rescaling_examples() {
    let f = XSeries::one(1, 3).add(&XSeries::var(1, 3, 0));
    assert_eq!(rescale_sigma(&[0], &f).unwrap(), f);
    let want = XSeries::one(1, 3).add(&XSeries::var(1, 3, 0).scale(&QRat::mqpow(1)));
    assert_eq!(rescale_sigma(&[1], &f).unwrap(), want);
    let g = pochhammer_inf(&QRat::from_int(2), &[1, 1], 5).unwrap();
    assert_eq!(rescale_sigma(&[1, -2], &rescale_sigma(&[2, 1], &g).unwrap()).unwrap(), rescale_sigma(&[3, -1], &g).unwrap());
    assert!(rescale_sigma(&[1], &g).is_err());
}

#[test]
fn dilogarithm_action() {
    let t = TorusMonomial::normal(1, -1, vec![1], vec![0]); // −q⁻¹U
    let one = XSeries::one(1, 8);
    let p = pochhammer_inf(&QRat::one(), &[1], 8).unwrap();
    assert_eq!(apply_phi(&t, -1, &one).unwrap(), p);
    assert_eq!(apply_phi(&t, 1, &p).unwrap(), one);
    assert_eq!(apply_phi(&t, 1, &one).unwrap(), p.invert_unit().unwrap());
    assert_eq!(apply_phi(&TorusMonomial::u(1, 0), 1, &one).unwrap(), phi_series(0, &[1], 8).unwrap());
    assert!(apply_phi(&TorusMonomial::v(1, 0), 1, &one).is_err());
    assert!(apply_phi(&TorusMonomial::u(1, 0).inv(), 1, &one).is_err());
}

fn mono(g: usize, nonneg: bool) -> impl Strategy<Value = TorusMonomial> {
    let lo = if nonneg { 0 } else { -1 };
    (-3i64..=3, proptest::collection::vec(lo..=2i64, g), proptest::collection::vec(-2i64..=2, g), any::<bool>())
        .prop_map(|(c, m, n, s)| TorusMonomial::normal(if s { 1 } else { -1 }, c, m, n))
}

fn series(g: usize, d: u32) -> impl Strategy<Value = XSeries> {
    proptest::collection::vec((0u32..=2, 0u32..=2, -2i64..=2, -3i64..=3), 1..5).prop_map(move |ts| {
        let mut f = XSeries::zero(g, d);
        for (a, b, k, c) in ts {
            let e = if g == 1 { vec![a + b] } else { vec![a, b] };
            let cur = f.get(&e);
            f.set(e, &cur + &QRat::from_laurent(&[(k, c)]));
        }
        f
    })
}

fn sym2() -> impl Strategy<Value = IntMatrix> {
    (-3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, c)| IntMatrix::from_rows(&[vec![a, b], vec![b, c]]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representation_is_faithful(a in mono(2, true), b in mono(2, true), f in series(2, 6)) {
        let ab = op(&a.mul(&b).unwrap()).act(&f).unwrap();
        let a_b = op(&a).act(&op(&b).act(&f).unwrap()).unwrap();
        prop_assert_eq!(ab, a_b);
    }

    #[test]
    fn operator_product_acts_by_composition(a in mono(2, true), b in mono(2, true), f in series(2, 5)) {
        let p = op(&a).add(&op(&b));
        let q = op(&b).sub(&OperatorPoly::scalar(2, QRat::from_int(3)));
        prop_assert_eq!(p.mul(&q).act(&f).unwrap(), p.act(&q.act(&f).unwrap()).unwrap());
    }

    #[test]
    fn framing_intertwines(om in sym2(), t in mono(2, true), f in series(2, 6)) {
        let lhs = op(&framing_shift_mono(&om, &t).unwrap()).act(&framing_shift(&om, &f).unwrap()).unwrap();
        let rhs = framing_shift(&om, &op(&t).act(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn framing_composes(a in sym2(), b in sym2(), f in series(2, 5)) {
        let sum = IntMatrix::from_rows(&(0..2).map(|i| (0..2).map(|j| a.get_i64(i, j) + b.get_i64(i, j)).collect()).collect::<Vec<_>>());
        prop_assert_eq!(framing_shift(&a, &framing_shift(&b, &f).unwrap()).unwrap(), framing_shift(&sum, &f).unwrap());
    }

    #[test]
    fn rescaling_intertwines(d in proptest::collection::vec(-2i64..=2, 2), t in mono(2, true), f in series(2, 6)) {
        let lhs = op(&rescale_sigma_mono(&d, &t)).act(&rescale_sigma(&d, &f).unwrap()).unwrap();
        let rhs = rescale_sigma(&d, &op(&t).act(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dilogarithm_inverse(t in mono(2, true), f in series(2, 6)) {
        prop_assume!(t.is_admissible(1));
        let g = apply_phi(&t, -1, &f).unwrap();
        prop_assert_eq!(apply_phi(&t, 1, &g).unwrap(), f);
    }
}
