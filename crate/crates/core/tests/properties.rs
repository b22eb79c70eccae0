//! Randomized invariants.

use std::f64::consts::PI;

use harmonic_core::embedding::{congruence_recover, ScrewCurve};
use harmonic_core::jacobi::{integrate_jacobi, involution_symmetry_check, CurvatureField};
use harmonic_core::model_spaces::ExponentPair;
use harmonic_core::poly::CosPolynomial;
use harmonic_core::profile::RadialProfile;
use harmonic_core::radial_ode::phi_polynomial;
use harmonic_core::trig_poly::{cos_multiple_angle, gauss_lucas_check, roots};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn symmetric(dim: usize, entries: &[f64]) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |i, j| entries[i * dim + j]);
    (&m + m.transpose()) * 0.5
}

prop_compose! {
    fn smooth_field()(dim in 1usize..=4)
        (dim in Just(dim),
         a in prop::collection::vec(-1.0f64..1.0, dim * dim),
         b in prop::collection::vec(-1.0f64..1.0, dim * dim),
         w in 0.5f64..3.0)
        -> CurvatureField {
        let (a, b) = (symmetric(dim, &a), symmetric(dim, &b));
        CurvatureField::from_fn(dim, move |t| &a + &b * (w * t).cos())
    }
}

fn polynomial() -> impl Strategy<Value = CosPolynomial<f64>> {
    (2usize..=10).prop_flat_map(|deg| {
        (prop::collection::vec(-1.0f64..1.0, deg), 0.25f64..1.0, any::<bool>()).prop_map(|(mut c, lead, neg)| {
            c.push(if neg { -lead } else { lead });
            CosPolynomial::new(c)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn conserved_section_is_constant(field in smooth_field(), r in 0.3f64..1.5) {
        let check = involution_symmetry_check(&field, r).unwrap();
        prop_assert!(check.conserved_drift < 1e-8, "drift {}", check.conserved_drift);
        prop_assert!(check.transpose_defect < 1e-8);
    }

    #[test]
    fn wronskian_stays_symmetric(field in smooth_field(), r in 0.3f64..2.0) {
        let traj = integrate_jacobi(&field, r, 65).unwrap();
        prop_assert!(traj.wronskian_defect() < 1e-9, "{}", traj.wronskian_defect());
    }

    #[test]
    fn gauss_lucas_holds(p in polynomial()) {
        prop_assert!(gauss_lucas_check(&p, 1e-6).unwrap());
    }

    #[test]
    fn roots_reconstruct(p in polynomial()) {
        let set = roots(&p).unwrap();
        prop_assert_eq!(set.all.len(), p.degree());
        prop_assert!(set.ill_conditioned || set.reconstruction_error < 1e-6);
    }

    #[test]
    fn multiple_angle_identity(m in 1u32..=18, x in 0.0f64..PI) {
        let p = cos_multiple_angle(m).unwrap().to_f64();
        prop_assert!((p.value_at_radius(x) - (m as f64 * x).cos()).abs() < 1e-10);
    }

    #[test]
    fn phi_is_normalized_and_bounded(a in 0i64..12, b in 0i64..6, k in 1u32..8) {
        prop_assume!(a + b > 0);
        let e = ExponentPair::from_integers(a, b).unwrap();
        let p = phi_polynomial(&e, k).unwrap().to_f64();
        prop_assert!((p.value_at_radius(0.0) - 1.0).abs() < 1e-12);
        // |Phi| <= Phi(0) for a spherical function on a compact space
        for i in 0..64 {
            let r = PI * i as f64 / 63.0;
            prop_assert!(p.value_at_radius(r).abs() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn congruence_recovers_random_isometries(
        entries in prop::collection::vec(-1.0f64..1.0, 25),
        shift in prop::collection::vec(-2.0f64..2.0, 5),
        radius in 0.5f64..2.0,
    ) {
        let m = DMatrix::from_vec(5, 5, entries);
        prop_assume!(m.determinant().abs() > 1e-3);
        let q = m.qr().q();
        let t = DVector::from_vec(shift);
        let curve = ScrewCurve::sample(
            |s| vec![radius * s.cos(), radius * s.sin(), 0.3, 0.0, 0.0],
            2.0 * PI,
            96,
        ).unwrap();
        let moved = ScrewCurve::new(
            curve.params.clone(),
            curve.points.iter().map(|p| (&q * DVector::from_column_slice(p) + &t).iter().copied().collect()).collect(),
        ).unwrap();
        let iso = congruence_recover(&curve, &moved).unwrap();
        prop_assert!(iso.residual < 1e-9, "{}", iso.residual);
    }

    #[test]
    fn profile_csv_round_trip(values in prop::collection::vec(-1e6f64..1e6, 2..40)) {
        let grid: Vec<f64> = (0..values.len()).map(|i| i as f64 * 0.1).collect();
        let p = RadialProfile::new("omega", grid, values).unwrap();
        let back = RadialProfile::read_csv("omega", p.to_csv_string().unwrap().as_bytes()).unwrap();
        prop_assert_eq!(back, p);
    }
}
