use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use tomas_stein::extension::extension_at;
use tomas_stein::quintic::{quintic_self, QuinticEngine, Term};
use tomas_stein::regularity::calh_estimate;
use tomas_stein::solver::{decompose, galerkin_q, linear_part, nonlinear_part};
use tomas_stein::spectral::{analyze, apply_symmetry, inner_product, synthesize, SymmetryElement};
use tomas_stein::CircleFunction;

fn coeffs(max_n: usize) -> impl Strategy<Value = CircleFunction> {
    (0..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * n + 1).prop_map(|v| {
            CircleFunction::from_coeffs(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
        })
    })
}

fn nonzero(max_n: usize) -> impl Strategy<Value = CircleFunction> {
    coeffs(max_n).prop_filter("nonzero", |f| f.norm() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesis_round_trip(f in coeffs(16), extra in 0usize..40) {
        let n = f.bandwidth();
        let m = 2 * n + 2 + extra;
        let back = analyze(&synthesize(f.coeffs(), m).unwrap(), n).unwrap();
        for (a, b) in back.iter().zip(f.coeffs()) {
            prop_assert!((a - b).norm() < 1e-12 * (1.0 + f.norm()));
        }
    }

    #[test]
    fn sampled_norm_matches_coefficients(f in nonzero(16)) {
        let m = 4 * f.bandwidth() + 4;
        let s = f.samples(m).unwrap();
        let quad: f64 = s.iter().map(|v| v.norm_sqr()).sum::<f64>() * 2.0 * PI / m as f64;
        prop_assert!((quad - f.norm_sq()).abs() < 1e-10 * f.norm_sq());
    }

    #[test]
    fn inner_product_is_hermitian(f in coeffs(8), g in coeffs(8)) {
        let n = f.bandwidth().max(g.bandwidth());
        let (f, g) = (f.with_bandwidth(n), g.with_bandwidth(n));
        prop_assert!((inner_product(&f, &g) - inner_product(&g, &f).conj()).norm() < 1e-12 * (1.0 + f.norm() * g.norm()));
    }

    #[test]
    fn rotation_is_unitary_and_composes(f in nonzero(10), a in -4.0f64..4.0, b in -4.0f64..4.0) {
        let ra = apply_symmetry(&f, &SymmetryElement::rotation(a)).unwrap();
        prop_assert!((ra.norm() - f.norm()).abs() < 1e-12 * f.norm());
        let two = apply_symmetry(&ra, &SymmetryElement::rotation(b)).unwrap();
        let once = apply_symmetry(&f, &SymmetryElement::rotation(b).compose(&SymmetryElement::rotation(a))).unwrap();
        prop_assert!(two.sub(&once).norm() < 1e-12 * f.norm());
    }

    #[test]
    fn conjugate_reflection_conjugates_extension(f in nonzero(6), rho in 0.0f64..30.0, phi in 0.0f64..6.3) {
        let ft = f.conj_reflect();
        prop_assert!(ft.conj_reflect().sub(&f).norm() < 1e-14 * f.norm());
        let a = extension_at(&f, rho, phi).unwrap();
        let b = extension_at(&ft, rho, phi).unwrap();
        prop_assert!((a.conj() - b).norm() < 1e-11 * (1.0 + a.norm()));
    }

    #[test]
    fn calh_is_monotone_in_s(f in nonzero(24), s in 0.0f64..1.5, ds in 0.0f64..1.0) {
        prop_assert!(calh_estimate(&f, s + ds) >= calh_estimate(&f, s) * (1.0 - 1e-12));
    }

    #[test]
    fn decomposition_is_exact_and_small(f in nonzero(12), eps in 0.01f64..0.5) {
        let (phi, g, k) = decompose(&f, eps).unwrap();
        let sum = phi.add(&g);
        let wide = f.with_bandwidth(sum.bandwidth());
        prop_assert_eq!(sum.coeffs(), wide.coeffs());
        if eps <= f.norm() {
            prop_assert!(g.norm() < eps);
            prop_assert!(k <= f.bandwidth());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quintic_is_rotation_equivariant(f in nonzero(4), t in -3.0f64..3.0) {
        let n = f.bandwidth();
        let q = quintic_self(&f, n).unwrap();
        let qr = quintic_self(&f.rotate(t), n).unwrap();
        prop_assert!(qr.sub(&q.rotate(t)).norm() < 1e-10 * q.norm());
    }

    #[test]
    fn quintic_is_symmetric_in_first_three_slots(a in nonzero(3), b in nonzero(3), c in nonzero(3)) {
        let e = QuinticEngine::default();
        let terms = |s: [usize; 5]| [Term::new(1.0, s)];
        let inputs = [&a, &b, &c];
        let x = e.evaluate(&inputs, &terms([0, 1, 2, 0, 1]), 3).unwrap().value;
        let y = e.evaluate(&inputs, &terms([2, 0, 1, 1, 0]), 3).unwrap().value;
        prop_assert!(x.sub(&y).norm() < 1e-10 * (1.0 + x.norm()));
    }

    #[test]
    fn duality_pairing_is_real_and_positive(f in nonzero(4)) {
        let q = quintic_self(&f, f.bandwidth()).unwrap();
        let v = inner_product(&q, &f);
        prop_assert!(v.re > 0.0);
        prop_assert!(v.im.abs() < 1e-10 * v.re);
    }

    #[test]
    fn expansion_identity(f in nonzero(6), k in 0usize..6) {
        let k = k.min(f.bandwidth());
        let phi = f.low_pass(k);
        let g = f.sub(&phi);
        let lhs = linear_part(&phi, &g).unwrap().add(&nonlinear_part(&phi, &g).unwrap());
        let rhs = galerkin_q(&f).unwrap().sub(&phi);
        prop_assert!(lhs.sub(&rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    }
}
