//! Worked examples for every public operation, checked through the public API.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use harmonic_core::embedding::*;
use harmonic_core::jacobi::*;
use harmonic_core::model_spaces::{ros_equality_check, spectrum};
use harmonic_core::poly::CosPolynomial;
use harmonic_core::profile::{uniform_grid, RadialProfile};
use harmonic_core::radial_ode::*;
use harmonic_core::trig_poly::*;
use harmonic_core::{Error, ExponentPair, ModelSpace};
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

fn pair(a: i64, b: i64) -> ExponentPair {
    ExponentPair::from_integers(a, b).unwrap()
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

mod model_spaces {
    use super::*;

    #[test]
    fn curvature_spectra() {
        let s2 = ModelSpace::sphere(2).unwrap().curvature_spectrum();
        assert_eq!(s2.entries(), &[(q(1, 1), 1)]);
        let cp2 = ModelSpace::complex_projective(2).unwrap().curvature_spectrum();
        assert_eq!(cp2.entries(), &[(q(1, 1), 1), (q(1, 4), 2)]);
        let op2 = ModelSpace::octonionic_plane().curvature_spectrum();
        assert_eq!(op2.entries(), &[(q(1, 1), 7), (q(1, 4), 8)]);
    }

    #[test]
    fn closed_form_densities() {
        assert!(close(ModelSpace::sphere(2).unwrap().closed_form_density(FRAC_PI_2).unwrap(), 1.0, 1e-15));
        assert!(close(ModelSpace::complex_projective(2).unwrap().closed_form_density(FRAC_PI_2).unwrap(), 2.0, 1e-15));
        let flat = ModelSpace::flat(4).unwrap();
        assert!(close(flat.closed_form_density(1.7).unwrap(), 1.7f64.powi(3), 1e-14));
        assert!(matches!(ModelSpace::sphere(3).unwrap().closed_form_density(PI), Err(Error::Domain { .. })));
    }

    #[test]
    fn exponents_and_ricci() {
        assert_eq!(ModelSpace::sphere(3).unwrap().exponents().unwrap(), pair(2, 0));
        assert_eq!(ModelSpace::complex_projective(3).unwrap().exponents().unwrap(), pair(1, 2));
        assert_eq!(ModelSpace::octonionic_plane().exponents().unwrap(), pair(7, 4));
        assert_eq!(ModelSpace::sphere(3).unwrap().ricci().unwrap(), q(2, 1));
        assert_eq!(ModelSpace::complex_projective(2).unwrap().ricci().unwrap(), q(3, 2));
        assert_eq!(ModelSpace::octonionic_plane().ricci().unwrap(), q(9, 1));
    }

    #[test]
    fn spectra() {
        assert_eq!(spectrum(&pair(2, 0), 2), q(8, 1));
        assert_eq!(spectrum(&pair(3, 5), 0), Rational64::zero());
        assert_eq!(spectrum(&pair(1, 1), 1), q(3, 1));
    }

    #[test]
    fn ros_equality() {
        assert!(ros_equality_check(&pair(4, 0), 5).unwrap());
        assert!(ros_equality_check(&pair(1, 1), 4).unwrap());
        assert!(matches!(ros_equality_check(&pair(1, 1), 5), Err(Error::InconsistentExponents { .. })));
    }

    #[test]
    fn identifiers() {
        for id in ["flat:3", "sphere:5", "cpn:2", "hpn:3", "op2", "rhn:4", "chn:2", "qhn:2", "oh2"] {
            assert_eq!(id.parse::<ModelSpace>().unwrap().to_string(), id);
        }
        for bad in ["sphere:0", "op3", "torus:2", "cpn", ""] {
            assert!(bad.parse::<ModelSpace>().is_err(), "{bad}");
        }
    }
}

mod jacobi {
    use super::*;

    #[test]
    fn flat_field_gives_identity_times_r() {
        let traj = integrate_jacobi(&CurvatureField::zero(3), 1.0, 65).unwrap();
        for (r, j) in traj.grid.iter().zip(&traj.j) {
            let expected = nalgebra::DMatrix::<f64>::identity(3, 3) * *r;
            assert!((j - expected).amax() < 1e-12);
        }
    }

    #[test]
    fn sphere_and_cp2_determinants() {
        let s2 = integrate_jacobi(&CurvatureField::diagonal(&[1.0]), FRAC_PI_2, 65).unwrap();
        assert!(close(*s2.determinants().last().unwrap(), 1.0, 1e-10));
        let cp2 = integrate_jacobi(&CurvatureField::diagonal(&[1.0, 0.25, 0.25]), 2.0, 65).unwrap();
        let expected = 2.0 * 2f64.sin() * (1.0 - 2f64.cos());
        assert!(close(*cp2.determinants().last().unwrap(), expected, 1e-9 * expected));
    }

    #[test]
    fn density_profiles() {
        let flat = integrate_jacobi(&CurvatureField::zero(3), 2.0, 33).unwrap();
        assert!(density_profile(&flat, 4).unwrap().values.iter().all(|v| close(*v, 1.0, 1e-12)));

        let s3 = integrate_jacobi(&CurvatureField::diagonal(&[1.0, 1.0]), FRAC_PI_2, 65).unwrap();
        let omega = density_profile(&s3, 3).unwrap();
        assert!(close(*omega.values.last().unwrap(), 4.0 / (PI * PI), 1e-10));

        // qhn:1 is the real hyperbolic plane of curvature -1/4 in dimension 4
        let space: ModelSpace = "qhn:1".parse().unwrap();
        let traj = integrate_jacobi(&CurvatureField::for_space(&space), 2.5, 65).unwrap();
        let prof = volume_density_profile(&traj).unwrap();
        for (r, v) in prof.iter().skip(1) {
            let exact = space.closed_form_density(r).unwrap();
            assert!(close(v, exact, 1e-9 * exact));
        }
    }

    #[test]
    fn mean_curvatures() {
        let flat = integrate_jacobi(&CurvatureField::zero(2), 1.0, 33).unwrap();
        let h = mean_curvature_profile(&flat).unwrap();
        assert!(close(h.nearest(1.0).unwrap().1, 2.0, 1e-10));

        let s2 = integrate_jacobi(&CurvatureField::diagonal(&[1.0]), FRAC_PI_2, 65).unwrap();
        let h = mean_curvature_profile(&s2).unwrap();
        let (r, v) = h.nearest(FRAC_PI_4).unwrap();
        assert!(close(r, FRAC_PI_4, 1e-12) && close(v, 1.0, 1e-9));

        let cp2 = integrate_jacobi(&CurvatureField::diagonal(&[1.0, 0.25, 0.25]), FRAC_PI_2, 65).unwrap();
        let h = mean_curvature_profile(&cp2).unwrap();
        assert!(close(*h.values.last().unwrap(), 1.0, 1e-9));
    }

    #[test]
    fn involution_checks() {
        let cp2 = CurvatureField::for_space(&ModelSpace::complex_projective(2).unwrap());
        let c = involution_symmetry_check(&cp2, 2.0).unwrap();
        assert!(c.discrepancy < 1e-10 && c.conserved_drift < 1e-10);

        let flat = involution_symmetry_check(&CurvatureField::zero(3), 1.0).unwrap();
        assert!(flat.discrepancy < 1e-12 && flat.transpose_defect < 1e-12);

        let field = CurvatureField::from_fn(1, |r| nalgebra::DMatrix::from_element(1, 1, 1.0 + 0.1 * r.sin()));
        let c = involution_symmetry_check(&field, 1.0).unwrap();
        let fwd = integrate_jacobi(&field, 1.0, 257).unwrap();
        let bwd = integrate_jacobi(&field.reversed(1.0), 1.0, 257).unwrap();
        let diff = (fwd.determinants().last().unwrap() - bwd.determinants().last().unwrap()).abs();
        assert!(close(c.discrepancy, diff, 1e-14));
        assert!(c.conserved_drift < 1e-10 && c.transpose_defect < 1e-10);
    }

    #[test]
    fn ricci_extraction() {
        let cases = [(vec![1.0, 1.0], 3, 2.0), (vec![1.0, 0.25, 0.25], 4, 1.5), (vec![0.0, 0.0], 3, 0.0)];
        for (diag, n, expected) in cases {
            let traj = integrate_jacobi(&CurvatureField::diagonal(&diag), 1.0, 1025).unwrap();
            let ric = ricci_from_mean_curvature(&mean_curvature_profile(&traj).unwrap(), n).unwrap();
            assert!(close(ric, expected, 1e-6), "{diag:?}: {ric}");
        }
    }
}

mod radial_ode {
    use super::*;

    #[test]
    fn solve_examples() {
        for n in [2, 4, 8] {
            let sol = solve_phi(&RadialOdeProblem::new(pair(n - 1, 0), n as f64).unwrap(), 201).unwrap();
            assert!(sol.phi.iter().all(|(r, v)| close(v, r.cos(), 1e-8)));
        }
        let sol = solve_phi(&RadialOdeProblem::new(pair(1, 1), 0.0).unwrap(), 201).unwrap();
        assert!(sol.phi.values.iter().all(|v| close(*v, 1.0, 1e-12)));
        let sol = solve_phi(&RadialOdeProblem::new(pair(7, 4), 12.0).unwrap(), 201).unwrap();
        assert!(sol.phi.iter().all(|(r, v)| close(v, 0.75 * r.cos() + 0.25, 1e-8)));
        assert!(sol.phi.label.starts_with("phi(lambda=12"));
    }

    #[test]
    fn polynomial_examples() {
        for (a, b) in [(1, 1), (2, 0), (7, 4), (1, 3)] {
            let e = pair(a, b);
            let p = phi_polynomial(&e, 1).unwrap();
            let l1 = (a + b + 1) as f64;
            let c = p.to_f64();
            assert!(close(c.coeffs()[1], l1 / (l1 + b as f64), 1e-15));
            assert!(close(c.coeffs()[0], b as f64 / (l1 + b as f64), 1e-15));
        }
        let s3 = phi_polynomial(&pair(2, 0), 2).unwrap();
        assert_eq!(s3.degree(), 2);
        let cp2 = phi_polynomial(&pair(1, 1), 3).unwrap();
        assert_eq!(cp2.degree(), 3);
        assert_eq!(cp2.coefficient_sum(), num_rational::BigRational::from_integer(1.into()));
        for (e, k, p) in [(pair(2, 0), 2, s3), (pair(1, 1), 3, cp2)] {
            let problem = RadialOdeProblem::at_eigenvalue(e, k).unwrap();
            assert!(phi_residual(PhiSource::Polynomial(&p.to_f64()), &problem) < 1e-12);
        }
        assert!(phi_polynomial(&pair(1, 1), 0).is_err());
    }

    #[test]
    fn residual_examples() {
        let problem = RadialOdeProblem::new(pair(4, 0), 5.0).unwrap();
        assert!(phi_residual(PhiSource::Polynomial(&CosPolynomial::x()), &problem) <= 1e-10);
        let problem = RadialOdeProblem::new(pair(4, 0), 0.0).unwrap();
        assert_eq!(phi_residual(PhiSource::Polynomial(&CosPolynomial::constant(1.0)), &problem), 0.0);

        let e = pair(1, 1);
        let problem = RadialOdeProblem::at_eigenvalue(e, 2).unwrap();
        let sol = solve_phi(&problem, 401).unwrap();
        assert!(sol.max_difference(&phi_polynomial(&e, 2).unwrap().to_f64()) <= 1e-6);
    }

    #[test]
    fn profile_serialization() {
        let sol = solve_phi(&RadialOdeProblem::new(pair(2, 0), 3.0).unwrap(), 33).unwrap();
        let csv = sol.phi.to_csv_string().unwrap();
        assert!(csv.starts_with("r,value\n"));
        let back = RadialProfile::read_csv(sol.phi.label.clone(), csv.as_bytes()).unwrap();
        assert_eq!(back, sol.phi);
    }
}

mod trig_poly {
    use super::*;

    #[test]
    fn multiple_angles() {
        let as_i64 = |m| -> Vec<i64> { cos_multiple_angle(m).unwrap().coeffs().iter().map(|c| c.to_i64().unwrap()).collect() };
        assert_eq!(as_i64(1), vec![0, 1]);
        assert_eq!(as_i64(2), vec![-1, 0, 2]);
        assert_eq!(as_i64(3), vec![0, -3, 0, 4]);
        assert!(cos_multiple_angle(0).is_err());
    }

    #[test]
    fn root_examples() {
        let r = roots(&CosPolynomial::new(vec![-1.0, 0.0, 1.0])).unwrap().real_sorted(1e-12).unwrap();
        assert!(close(r[0], -1.0, 1e-14) && close(r[1], 1.0, 1e-14));

        let p = phi_polynomial(&pair(2, 0), 2).unwrap().to_f64();
        let r = roots(&p).unwrap().real_sorted(1e-12).unwrap();
        assert_eq!(r.len(), 2);
        for x in r {
            assert!(x > -1.0 && x < 1.0);
            // sign change bracket
            assert!(p.eval(x - 1e-6) * p.eval(x + 1e-6) < 0.0);
        }
        assert!(roots(&CosPolynomial::constant(1.0)).is_err());
    }

    #[test]
    fn gauss_lucas_examples() {
        assert!(gauss_lucas_check(&CosPolynomial::new(vec![-1.0, 0.0, 1.0]), 1e-9).unwrap());
        let cubic = roots(&CosPolynomial::new(vec![0.0, -3.0, 0.0, 1.0])).unwrap();
        let fake = [Complex64::new(0.0, 2.0), Complex64::new(0.0, -2.0)];
        assert!(!roots_within_hull(&cubic.all, &fake, 1e-9));
    }

    #[test]
    fn interlacing_examples() {
        assert!(interlacing_check(&phi_polynomial(&pair(2, 0), 3).unwrap().to_f64(), 1e-8).unwrap());
        assert!(interlacing_check(&phi_polynomial(&pair(7, 4), 5).unwrap().to_f64(), 1e-8).unwrap());
        assert!(matches!(
            interlacing_check(&CosPolynomial::new(vec![1.0, 0.0, 1.0]), 1e-8),
            Err(Error::NonRealRoot { .. })
        ));
    }

    #[test]
    fn density_form_examples() {
        let s3 = integrate_jacobi(&CurvatureField::diagonal(&[1.0, 1.0]), PI, 513).unwrap();
        let fit = fit_density_form(&volume_density_profile(&s3).unwrap()).unwrap();
        assert_eq!((fit.sigma, fit.tau), (2, 2));
        assert_eq!(fit.exponents().unwrap(), pair(2, 0));
        assert!(fit.residual <= 1e-8);

        let cp2 = integrate_jacobi(&CurvatureField::diagonal(&[1.0, 0.25, 0.25]), PI, 513).unwrap();
        let fit = fit_density_form(&volume_density_profile(&cp2).unwrap()).unwrap();
        assert_eq!(fit.exponents().unwrap(), pair(1, 1));
        assert!(close(fit.c, 4.0, 1e-8));

        let grid = uniform_grid(0.0, PI, 257);
        let values = grid.iter().map(|r| r.sin() + 0.3 * (2.0 * r).sin()).collect();
        let bad = RadialProfile::new("omega_hat", grid, values).unwrap();
        assert!(matches!(fit_density_form(&bad), Err(Error::PoorFit { .. }) | Err(Error::NonPositiveSample { .. })));
    }
}

mod embedding {
    use super::*;

    #[test]
    fn constants() {
        let c = embedding_constants(&pair(1, 0), &CosPolynomial::x()).unwrap();
        assert!(close(c.big_c_g, 1.0, 1e-12));
        let e = pair(1, 1);
        let c = embedding_constants(&e, &Eigenfunction::new(&e, 1).unwrap()).unwrap();
        assert!(close(c.big_c_g.powi(2), 4.0 / 3.0, 1e-12));
        assert_eq!(embedding_constants(&e, &CosPolynomial::constant(1.0)).unwrap_err(), Error::ConstantProfile);

        // numeric eigenfunction gives the same constants
        let sol = solve_phi(&RadialOdeProblem::at_eigenvalue(e, 1).unwrap(), 801).unwrap();
        let c2 = embedding_constants(&e, &sol).unwrap();
        assert!(close(c2.big_c_g, c.big_c_g, 1e-8));
    }

    #[test]
    fn screw_formula() {
        assert!(close(screw_function_from_formula(&pair(1, 0), 1, PI).unwrap(), 4.0, 1e-12));
        assert_eq!(screw_function_from_formula(&pair(7, 4), 3, 0.0).unwrap(), 0.0);
        let expected = 2.0 * (16.0 / 12.0) * (12.0 / 16.0) * 2.0;
        assert!(close(screw_function_from_formula(&pair(7, 4), 1, PI).unwrap(), expected, 1e-12));
    }

    #[test]
    fn circles() {
        for e in [pair(2, 0), pair(1, 2), pair(7, 4)] {
            let c = circle_check(&e).unwrap();
            assert!(close(c.radius, 1.0, 1e-9));
            assert!(c.max_deviation <= 1e-12);
        }
    }

    #[test]
    fn congruence() {
        let circle = |rho: f64| ScrewCurve::sample(|s| vec![rho * s.cos(), rho * s.sin(), 0.0, 0.0], 2.0 * PI, 100).unwrap();
        let c = circle(1.0);
        let iso = congruence_recover(&c, &c).unwrap();
        assert!(iso.residual < 1e-14);
        assert!(matches!(congruence_recover(&c, &circle(2.0)), Err(Error::ScrewMismatch { .. })));
    }

    #[test]
    fn s2_embedding() {
        let rep = s2_explicit_embedding(64).unwrap();
        let get = |name: &str| rep.checks.iter().find(|c| c.check == name).unwrap();
        assert!(get("s2.image_radius").max_deviation <= 1e-8);
        assert!(get("s2.metric_distortion").max_deviation <= 1e-6);
        assert!(get("s2.geodesic_circle_radius").max_deviation <= 1e-6);
        assert!(rep.pass());
        assert!(matches!(s2_explicit_embedding(8), Err(Error::InsufficientResolution(_))));
    }

    #[test]
    fn commutativity() {
        let north = [0.0, 0.0, 1.0];
        assert!(basic_commutativity_check(&ZonalSum::new().term(1.0, 2, north), north, 64).unwrap() <= 1e-6);
        assert!(basic_commutativity_check(&ZonalSum::new().term(1.0, 0, north), north, 64).unwrap() <= 1e-9);
        let mix = ZonalSum::new().term(1.0, 1, north).term(1.0, 3, north);
        assert!(basic_commutativity_check(&mix, north, 64).unwrap() <= 1e-6);
    }

    #[test]
    fn radiality() {
        let e = pair(1, 0);
        let p1 = phi_polynomial(&e, 1).unwrap().to_f64();
        let p2 = phi_polynomial(&e, 2).unwrap().to_f64();
        let a = l2_radiality_check(&p1, &p1, FRAC_PI_2).unwrap();
        assert!(a.spread <= 1e-6 && a.formula_defect.unwrap() <= 1e-6);
        let one = CosPolynomial::constant(1.0);
        let b = l2_radiality_check(&one, &one, 2.0).unwrap();
        assert!(close(b.mean, 4.0 * PI, 1e-12));
        assert!(l2_radiality_check(&p1, &p2, PI / 3.0).unwrap().spread <= 1e-6);
    }
}
