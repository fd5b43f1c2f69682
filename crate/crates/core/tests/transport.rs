mod common;

use std::f64::consts::PI;

use common::{c, max_abs, order};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rqm_core::clifford::{build_gamma_set, Metric};
use rqm_core::linalg;
use rqm_core::matrixop::{frame_connection, random_smooth_field, MatrixField};
use rqm_core::transport::{
    bundle_morphism, coefficients, derivation_along, frame_gammas, generic_transport_check, make_transport,
    slashed_gamma, transport_relation_residuals, transported_section, FrameField, Site, TransportFactorization,
};
use rqm_core::waveeq::bundle_diracian;
use rqm_core::{Axis, CMatrix, CVector, Lattice, PotentialField, Units, C64};

fn lattice(nt: usize, nx: usize) -> Lattice {
    Lattice::new(nt, nx, 0.1, 0.25).unwrap()
}

/// A lattice covering `[0, 2] × [0, 4)` with `n` intervals per axis.
fn refined(n: usize) -> Lattice {
    Lattice::new(n + 1, n, 2.0 / n as f64, 4.0 / n as f64).unwrap()
}

fn random_site(lat: &Lattice, rng: &mut ChaCha8Rng) -> Site {
    (rng.gen_range(0..lat.nt()), rng.gen_range(0..lat.nx()))
}

fn frames(lat: Lattice) -> Vec<FrameField> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    vec![
        FrameField::preset("random-smooth(3)", lat, 4).unwrap(),
        FrameField::preset("shear(0.6)", lat, 4).unwrap(),
        FrameField::preset("random-unitary(5)", lat, 4).unwrap(),
        FrameField::random(lat, 4, &mut rng).unwrap(),
    ]
}

#[test]
fn identity_frame_gives_trivial_transport_and_coefficients() {
    let lat = lattice(6, 8);
    let frame = FrameField::identity(lat, 3);
    let tr = make_transport(&frame);
    assert_eq!(tr.eval((0, 0), (5, 7)), CMatrix::identity(3, 3));
    let coeffs = coefficients(&frame, Units::default());
    for mu in 0..4 {
        assert_eq!(coeffs.gamma(mu).max_abs(), 0.0);
    }
    let psi0 = CVector::from_vec(vec![c(1.0), C64::new(0.5, -0.5), c(2.0)]);
    let sec = transported_section(&frame, &psi0, (2, 3)).unwrap();
    for t in 0..lat.nt() {
        for x in 0..lat.nx() {
            assert_eq!(sec.site_vector(t, x), psi0);
        }
    }
}

#[test]
fn composition_and_identity_laws() {
    let lat = lattice(8, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for frame in frames(lat) {
        let tr = make_transport(&frame);
        for _ in 0..100 {
            let (x1, x2, x3) = (random_site(&lat, &mut rng), random_site(&lat, &mut rng), random_site(&lat, &mut rng));
            let lhs = tr.eval(x3, x2) * tr.eval(x2, x1);
            let rhs = tr.eval(x3, x1);
            assert!(linalg::relative_deviation(&lhs, &rhs) <= 1e-12);
            assert_eq!(tr.eval(x1, x1), CMatrix::identity(4, 4));
        }
    }
}

#[test]
fn unitary_frames_give_unitary_transports() {
    let lat = lattice(8, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for spec in ["random-unitary(7)", "phase(0.8)", "rotation(1.2)"] {
        let frame = FrameField::preset(spec, lat, 4).unwrap();
        assert!(frame.is_unitary());
        let tr = make_transport(&frame);
        for _ in 0..50 {
            let l = tr.eval(random_site(&lat, &mut rng), random_site(&lat, &mut rng));
            assert!(linalg::unitarity_deviation(&l) <= 1e-12, "{spec}");
        }
    }
}

#[test]
fn non_unitary_matrices_are_refused_as_unitary_frames() {
    let lat = lattice(3, 4);
    let m = CMatrix::identity(2, 2) * c(1.5);
    assert!(matches!(
        FrameField::unitary(MatrixField::constant(lat, &m)),
        Err(rqm_core::Error::NonUnitaryFrame { .. })
    ));
}

#[test]
fn coefficients_equal_frame_connection() {
    let lat = lattice(8, 12);
    let frame = FrameField::preset("random-smooth(4)", lat, 4).unwrap();
    let units = Units { hbar: 1.3, c: 2.0 };
    let coeffs = coefficients(&frame, units);
    for mu in 0..4 {
        assert_eq!(coeffs.gamma(mu), &frame_connection(frame.as_frame_matrix(), mu, units));
    }
}

fn relation_residuals(n: usize) -> (f64, f64) {
    let lat = refined(n);
    let frame = FrameField::preset("random-smooth(11)", lat, 3).unwrap();
    let refs = [(0, 0), (n / 2, n / 3), (n, n - 1)];
    transport_relation_residuals(&frame, Units::default(), &refs)
}

#[test]
fn transport_relations_converge_at_second_order() {
    let res: Vec<(f64, f64)> = [16, 32, 64, 128].iter().map(|&n| relation_residuals(n)).collect();
    for w in res.windows(2) {
        let p = order(w[0].0, w[1].0);
        assert!((p - 2.0).abs() <= 0.3, "first relation order {p}");
    }
    // The source-point relation telescopes on the lattice: l_y⁻¹ Δl_x = L(y,x) l_x⁻¹ Δl_x.
    for (_, second) in res {
        assert!(second <= 1e-12, "{second}");
    }
}

#[test]
fn transported_section_is_transport_compatible() {
    let lat = lattice(8, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for frame in frames(lat) {
        let tr = make_transport(&frame);
        let psi0 = linalg::random_vector(&mut rng, 4);
        let x0 = random_site(&lat, &mut rng);
        let sec = transported_section(&frame, &psi0, x0).unwrap();
        let back = frame.from_bundle(&sec).unwrap();
        for t in 0..lat.nt() {
            for x in 0..lat.nx() {
                assert!((back.site_vector(t, x) - &psi0).camax() <= 1e-12 * psi0.camax());
            }
        }
        for _ in 0..50 {
            let (x1, x2) = (random_site(&lat, &mut rng), random_site(&lat, &mut rng));
            let lhs = sec.site_vector(x2.0, x2.1);
            let rhs = tr.eval(x2, x1) * sec.site_vector(x1.0, x1.1);
            assert!((lhs - &rhs).camax() <= 1e-12 * rhs.camax().max(1.0));
        }
    }
}

fn section_derivation_residual(n: usize) -> f64 {
    let lat = refined(n);
    let frame = FrameField::preset("random-smooth(8)", lat, 4).unwrap();
    let coeffs = coefficients(&frame, Units::default());
    let psi0 = CVector::from_vec(vec![c(1.0), C64::new(0.0, 1.0), c(-0.5), C64::new(0.3, 0.3)]);
    let sec = transported_section(&frame, &psi0, (0, 0)).unwrap();
    (0..2).map(|mu| derivation_along(&sec, &coeffs, mu).unwrap().max_abs()).fold(0.0, f64::max)
}

#[test]
fn transported_sections_are_annihilated_by_the_derivation() {
    let p = order(section_derivation_residual(16), section_derivation_residual(32));
    assert!((p - 2.0).abs() <= 0.3, "order {p}");
    assert!(section_derivation_residual(64) < 1e-2);
}

fn transport_column_residual(n: usize) -> f64 {
    let lat = refined(n);
    let frame = FrameField::preset("shear(0.5)", lat, 4).unwrap();
    let coeffs = coefficients(&frame, Units::default());
    let v = CVector::from_vec(vec![c(0.2), c(-1.0), C64::new(0.0, 0.7), c(0.4)]);
    let x_ref = (n / 2, n / 4);
    let from = make_transport(&frame).from_site(x_ref);
    let data: Vec<C64> = from.matrices().iter().flat_map(|m| (m * &v).data.as_vec().clone()).collect();
    let sigma = rqm_core::Field::from_data(lat, 4, data).unwrap();
    (0..2).map(|mu| derivation_along(&sigma, &coeffs, mu).unwrap().max_abs()).fold(0.0, f64::max)
}

#[test]
fn derivation_kills_transport_applications() {
    let p = order(transport_column_residual(16), transport_column_residual(32));
    assert!((p - 2.0).abs() <= 0.3, "order {p}");
}

#[test]
fn derivation_is_linear() {
    let lat = lattice(8, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let frame = FrameField::preset("random-smooth(2)", lat, 4).unwrap();
    let coeffs = coefficients(&frame, Units::default());
    for _ in 0..10 {
        let s1 = random_smooth_field(lat, 4, &mut rng);
        let s2 = random_smooth_field(lat, 4, &mut rng);
        let (a, b) = (linalg::random_scalar(&mut rng), linalg::random_scalar(&mut rng));
        for mu in 0..2 {
            let lhs = derivation_along(&s1.scale(a).add(&s2.scale(b)).unwrap(), &coeffs, mu).unwrap();
            let rhs = derivation_along(&s1, &coeffs, mu)
                .unwrap()
                .scale(a)
                .add(&derivation_along(&s2, &coeffs, mu).unwrap().scale(b))
                .unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12 * rhs.max_abs().max(1.0));
        }
    }
    let constant = transported_section(&FrameField::identity(lat, 4), &linalg::random_vector(&mut rng, 4), (0, 0)).unwrap();
    let zero = coefficients(&FrameField::identity(lat, 4), Units::default());
    assert!(derivation_along(&constant, &zero, 1).unwrap().max_abs() < 1e-12);
}

#[test]
fn frame_gammas_satisfy_the_clifford_relation() {
    let lat = lattice(6, 8);
    let g = build_gamma_set();
    let eta = Metric::minkowski();
    for frame in frames(lat) {
        let gs = frame_gammas(&frame, &g).unwrap();
        for i in 0..lat.sites() {
            for mu in 0..4 {
                for nu in 0..4 {
                    let (a, b) = (gs[mu].at_index(i), gs[nu].at_index(i));
                    let ac = a * b + b * a - CMatrix::identity(4, 4) * c(2.0 * eta.eta(mu, nu));
                    assert!(max_abs(&ac) <= 1e-12 * max_abs(a).max(1.0).powi(2), "({mu},{nu})");
                }
            }
        }
    }
}

#[test]
fn bundle_morphism_with_identity_frame_is_unchanged() {
    let lat = lattice(4, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mats = (0..lat.sites()).map(|_| linalg::random_matrix(&mut rng, 4, 4)).collect();
    let op = MatrixField::new(lat, mats).unwrap();
    assert_eq!(bundle_morphism(&FrameField::identity(lat, 4), &op).unwrap(), op);
}

#[test]
fn bundle_diracian_at_zero_potential_is_mass_term() {
    let lat = lattice(6, 8);
    let units = Units { hbar: 1.0, c: 1.5 };
    let pot = PotentialField::free(lat, 1.0, units);
    let g = build_gamma_set();
    let m = 0.8;
    for frame in frames(lat) {
        let d = bundle_diracian(&frame, &g, &pot, m).unwrap();
        for mat in d.matrices() {
            assert!(max_abs(&(mat - CMatrix::identity(4, 4) * c(m * units.c))) <= 1e-12);
        }
    }
}

#[test]
fn generic_check_accepts_factorizations_and_flags_corruption() {
    let id = TransportFactorization::new(vec![CMatrix::identity(3, 3); 10]).unwrap();
    assert_eq!(generic_transport_check(&id, 5, 1).max(), 0.0);

    let lat = lattice(6, 8);
    let frame = FrameField::preset("random-smooth(6)", lat, 3).unwrap();
    let fs: Vec<CMatrix> = frame.matrices().matrices().to_vec();
    let smooth = TransportFactorization::new(fs.clone()).unwrap();
    assert!(generic_transport_check(&smooth, 5, 2).max() <= 1e-12);

    let mut inv: Vec<CMatrix> = fs.iter().map(|m| m.clone().try_inverse().unwrap()).collect();
    inv[17] = &inv[17] * c(1.01);
    let corrupted = TransportFactorization::with_inverses(fs, inv).unwrap();
    assert!(generic_transport_check(&corrupted, 5, 3).composition > 1e-6);

    let singular = TransportFactorization::new(vec![CMatrix::zeros(2, 2)]);
    assert!(singular.is_err());
}

#[test]
fn transport_is_path_independent() {
    let lat = lattice(8, 12);
    let frame = FrameField::preset("random-smooth(9)", lat, 4).unwrap();
    let tr = make_transport(&frame);
    let time_first: Vec<Site> = (0..6).map(|t| (t, 1)).chain((2..9).map(|x| (5, x))).collect();
    let space_first: Vec<Site> = (1..9).map(|x| (0, x)).chain((1..6).map(|t| (t, 8))).collect();
    let a = tr.along_path(&time_first);
    let b = tr.along_path(&space_first);
    let direct = tr.eval((5, 8), (0, 1));
    assert!(linalg::relative_deviation(&a, &direct) <= 1e-12);
    assert!(linalg::relative_deviation(&b, &direct) <= 1e-12);
}

fn phase_slash_error(n: usize) -> f64 {
    let lat = refined(n);
    let k = 0.7;
    let frame = FrameField::preset(&format!("phase({k})"), lat, 4).unwrap();
    let g = build_gamma_set();
    let sg = slashed_gamma(&coefficients(&frame, Units::default()), &g).unwrap();
    let kx = 2.0 * PI / lat.length();
    let mut err: f64 = 0.0;
    for t in 0..lat.nt() {
        for x in 0..lat.nx() {
            let d0 = 0.5 * k;
            let d1 = k * kx * (kx * lat.position(x)).cos();
            let expected = g.slash([c(d0), c(d1), c(0.0), c(0.0)]) * C64::new(0.0, 1.0);
            err = err.max(max_abs(&(sg.at(t, x) - expected)));
        }
    }
    err
}

#[test]
fn slashed_coefficients_of_a_phase_frame() {
    let p = order(phase_slash_error(16), phase_slash_error(32));
    assert!((p - 2.0).abs() <= 0.3, "order {p}");
}

fn slashed_relation_residual(n: usize) -> f64 {
    let lat = refined(n);
    let frame = FrameField::preset("random-smooth(13)", lat, 4).unwrap();
    let g = build_gamma_set();
    let sg = slashed_gamma(&coefficients(&frame, Units::default()), &g).unwrap();
    let from = make_transport(&frame).from_site((n / 2, n / 2));
    let d0 = from.difference(Axis::Time);
    let d1 = from.difference(Axis::Space);
    let mut err: f64 = 0.0;
    for i in 0..lat.sites() {
        let r = g.gamma(0) * d0.at_index(i) + g.gamma(1) * d1.at_index(i) + sg.at_index(i) * from.at_index(i);
        err = err.max(max_abs(&r));
    }
    err
}

#[test]
fn slashed_transport_relation_is_second_order() {
    let p = order(slashed_relation_residual(16), slashed_relation_residual(32));
    assert!((p - 2.0).abs() <= 0.3, "order {p}");
}
