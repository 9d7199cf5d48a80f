use chromlag::faddeev::*;
use chromlag::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;

fn unit() -> HbarParam {
    HbarParam::polar(1.0, PI / 5.0).unwrap()
}

#[test]
fn value_at_zero() {
    for p in [unit(), HbarParam::polar(0.8, 0.5).unwrap(), HbarParam::polar(1.3, 1.1).unwrap()] {
        let v = phi_ncqd(C::new(0.0, 0.0), &p).unwrap();
        assert!((v * v - p.zeta_inv).norm() < 1e-12);
    }
}

#[test]
fn product_matches_integral() {
    for (r, th, z) in [(1.0, PI / 5.0, C::new(0.3, 0.1)), (0.7, 0.6, C::new(-0.4, 0.2)), (1.2, 1.0, C::new(0.9, -0.1))] {
        let p = HbarParam::polar(r, th).unwrap();
        let a = phi_ncqd(z, &p).unwrap();
        let b = phi_kashaev(z, p.hbar).unwrap();
        assert!((a - b).norm() < 1e-8 * a.norm(), "{a} vs {b}");
    }
}

#[test]
fn symmetry_in_hbar() {
    for (r, th) in [(1.0, PI / 5.0), (0.75, 0.7)] {
        let p = HbarParam::polar(r, th).unwrap();
        for z in [C::new(0.3, 0.1), C::new(-0.5, -0.2)] {
            let a = phi_ncqd(z, &p).unwrap();
            for h in [p.hbar.inv(), -p.hbar] {
                let b = phi_kashaev(z, h).unwrap();
                assert!((a - b).norm() < 1e-10 * a.norm());
            }
        }
    }
}

#[test]
fn unitarity_on_the_unit_circle() {
    for th in [0.3, PI / 5.0, 1.2] {
        let p = HbarParam::polar(1.0, th).unwrap();
        for z in [C::new(0.3, 0.1), C::new(-1.1, 0.4), C::new(0.7, -0.3)] {
            let v = phi_ncqd(z, &p).unwrap().conj() * phi_ncqd(z.conj(), &p).unwrap();
            assert!((v - 1.0).norm() < 1e-10);
        }
    }
}

#[test]
fn asymptotic_sectors() {
    let p = unit();
    // |arg z| < π/2 − arg ℏ and |arg z| > π/2 + arg ℏ
    for z in [C::new(6.0, 0.3), C::from_polar(6.0, 0.4), C::new(-6.0, 0.2), C::from_polar(6.0, -2.6)] {
        let r = asymptotic_ratio(z, &p).unwrap();
        assert!((r - 1.0).norm() < 0.01, "z = {z}: {r}");
    }
    assert!(asymptotic_ratio(C::from_polar(6.0, PI / 2.0), &p).is_err());
}

#[test]
fn semiclassical_single_factor() {
    for z in [C::new(0.4, 0.7), C::new(-0.8, -1.5), C::new(1.3, 2.2)] {
        let errs: Vec<f64> = [0.4, 0.25, 0.15, 0.1]
            .iter()
            .map(|&r| semiclassical_error(z, &HbarParam::polar(r, PI / 4.0).unwrap()).unwrap())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{z}: {errs:?}");
        assert!(*errs.last().unwrap() < 2e-3);
    }
}

#[test]
fn dilogarithm_values() {
    let pi2 = PI * PI;
    let cases = [
        (C::new(1.0, 0.0), C::new(pi2 / 6.0, 0.0)),
        (C::new(-1.0, 0.0), C::new(-pi2 / 12.0, 0.0)),
        (C::new(0.5, 0.0), C::new(pi2 / 12.0 - 2f64.ln().powi(2) / 2.0, 0.0)),
        // Li₂(i) = −π²/48 + i·Catalan
        (C::new(0.0, 1.0), C::new(-pi2 / 48.0, 0.915_965_594_177_219_015)),
        // Li₂(2) = π²/4 − iπ ln 2 (principal branch, approached from below)
        (C::new(2.0, -1e-300), C::new(pi2 / 4.0, -PI * 2f64.ln())),
    ];
    for (z, want) in cases {
        assert!((li2(z) - want).norm() < 1e-13, "Li2({z}) = {} want {want}", li2(z));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn dilogarithm_derivative(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        // d/dz Li₂(z) = −log(1−z)/z away from the cut
        let z = C::new(re, im);
        prop_assume!(im.abs() > 0.05 && z.norm() > 0.1);
        let h = 1e-5;
        let d = (li2(z + h) - li2(z - h)) / (2.0 * h);
        let want = -(C::new(1.0, 0.0) - z).ln() / z;
        prop_assert!((d - want).norm() < 1e-7 * (1.0 + want.norm()));
    }

    #[test]
    fn dilogarithm_series(re in -0.45f64..0.45, im in -0.45f64..0.45) {
        let z = C::new(re, im);
        let mut s = C::new(0.0, 0.0);
        let mut pw = z;
        for k in 1..200 {
            s += pw / (k * k) as f64;
            pw *= z;
        }
        prop_assert!((li2(z) - s).norm() < 1e-14);
    }

    #[test]
    fn functional_equations_random(re in -1.5f64..1.5, im in -0.6f64..0.6, r in 0.6f64..1.5, th in 0.2f64..1.3) {
        let p = HbarParam::polar(r, th).unwrap();
        let z = C::new(re, im);
        for e in [p.hbar, p.hbar.inv()] {
            let a = phi_ncqd(z - C::i() * e / 2.0, &p);
            let b = phi_ncqd(z + C::i() * e / 2.0, &p);
            if let (Ok(a), Ok(b)) = (a, b) {
                let rhs = (1.0 + (2.0 * PI * e * z).exp()) * b;
                prop_assert!((a - rhs).norm() < 1e-8 * a.norm().max(rhs.norm()));
            }
        }
    }
}

#[test]
fn algebraic_identities_twenty_points() {
    for id in [Identity::Inversion, Identity::FunctionalPlus, Identity::FunctionalMinus] {
        let r = verify_identity(id, &IdentityParams::default()).unwrap();
        assert_eq!(r.samples.len(), 20);
        assert!(r.passed && r.max_residual < 1e-8, "{id}: {}", r.max_residual);
        // samples are at distinct random ℏ
        assert!(r.samples.windows(2).any(|w| w[0].hbar != w[1].hbar));
    }
}

#[test]
fn fourier_at_real_point() {
    let p = unit();
    let w = C::new(0.2, 0.0);
    let shape = IntegrandShape { num: vec![], den: vec![p.c], kappa: w - p.c };
    let lhs = integrate_shape(&shape, &p, &Quadrature::default()).unwrap();
    let rhs = p.zeta * phi_ncqd(w, &p).unwrap();
    assert!((lhs - rhs).norm() < 1e-5 * rhs.norm());
    // the second transform at the same point
    let shape = IntegrandShape { num: vec![-p.c], den: vec![], kappa: -(w + p.c) };
    let lhs = integrate_shape(&shape, &p, &Quadrature::default()).unwrap();
    assert!((lhs * p.zeta * phi_ncqd(w, &p).unwrap() - 1.0).norm() < 1e-5);
}

#[test]
fn integral_identities() {
    for id in [Identity::Fourier1, Identity::Fourier2, Identity::Beta1, Identity::Beta2] {
        let r = verify_identity(id, &IdentityParams::default()).unwrap();
        assert!(r.passed, "{id}: {}", r.max_residual);
    }
    let other = verify_identity(Identity::Beta2, &IdentityParams { hbar: Some(C::from_polar(0.9, 0.9)), ..Default::default() }).unwrap();
    assert!(other.passed, "{}", other.max_residual);
}

#[test]
fn lemma_projective_ratio_is_a_phase() {
    let r = verify_identity(Identity::Lemma23, &IdentityParams { points: 3, ..Default::default() }).unwrap();
    assert!(r.passed, "{}", r.max_residual);
    let [re, im] = r.samples[0].lhs;
    let [a, b] = r.samples[0].rhs;
    assert!(((re * re + im * im) / (a * a + b * b) - 1.0).abs() < 1e-6);
}

#[test]
fn cube_semiclassical_trend() {
    let r = verify_identity(Identity::CubeSemiclassical, &IdentityParams::default()).unwrap();
    assert!(r.passed, "{}", r.note);
    let e: Vec<f64> = r.samples.iter().map(|s| s.residual).collect();
    assert_eq!(e.len(), 3);
    assert!(e[0] > e[1] && e[1] > e[2]);
}

#[test]
fn errors() {
    let p = unit();
    assert!(matches!(phi_ncqd(p.c, &p), Err(Error::Numerical(_))));
    assert!(matches!(phi_ncqd(p.c + C::i() * p.hbar + 1e-8, &p), Err(Error::Numerical(_))));
    assert!(phi_ncqd(-p.c, &p).unwrap().norm() < 1e-10); // a zero, not a pole
    assert!(HbarParam::new(C::new(-1.0, 0.5)).is_err());
    assert!(HbarParam::new(C::new(1.0, 0.0)).is_err());
    // no decay: e^{2πixκ} with Im κ > 0 grows to the left for every admissible tilt
    let shape = IntegrandShape { num: vec![], den: vec![p.c], kappa: C::new(0.0, 3.0) };
    assert!(shape.contour(&p).is_err());
    // poles of the two families overlap
    let shape = IntegrandShape { num: vec![C::new(0.0, 0.0)], den: vec![C::new(0.0, 3.0)], kappa: C::new(0.0, -0.1) };
    assert!(shape.contour(&p).is_err());
}

#[test]
fn names_and_parsing() {
    for id in Identity::ALL {
        assert_eq!(id.name().parse::<Identity>().unwrap(), id);
    }
    assert!("pentagon".parse::<Identity>().is_err());
    assert_eq!(parse_complex("0.8+0.6i").unwrap(), C::new(0.8, 0.6));
    assert_eq!(parse_complex("1e-1-2.5i").unwrap(), C::new(0.1, -2.5));
    assert_eq!(parse_complex("-i").unwrap(), C::new(0.0, -1.0));
    assert_eq!(parse_complex("0.3,0.4").unwrap(), C::new(0.3, 0.4));
    assert_eq!(parse_complex("2").unwrap(), C::new(2.0, 0.0));
    assert!(parse_complex("x+yi").is_err());
}

#[test]
fn report_round_trips() {
    let r = verify_identity(Identity::Inversion, &IdentityParams { points: 3, ..Default::default() }).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let back: IdentityReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
}
