mod common;

use std::f64::consts::PI;

use common::{c, max_abs, null_vector, order};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rqm_core::clifford::build_gamma_set;
use rqm_core::matrixop::{
    dirac_operator, dirac_operator_matrix, frame_connection, matrix_of, random_smooth_field, slashed_partial,
    FrameMatrixField, MatrixField, MatrixOperator, OperatorEntry,
};
use rqm_core::transport::FrameField;
use rqm_core::{Axis, CMatrix, Field, Lattice, PotentialField, ScalarField, Units, C64};

fn lattice(nt: usize, nx: usize) -> Lattice {
    Lattice::new(nt, nx, 0.1, 0.2).unwrap()
}

fn smooth_scalar(lat: Lattice, rng: &mut ChaCha8Rng) -> ScalarField {
    random_smooth_field(lat, 1, rng).component(0)
}

fn random_entry(lat: Lattice, rng: &mut ChaCha8Rng) -> OperatorEntry {
    let mut e = OperatorEntry::zero(lat);
    let coef = |rng: &mut ChaCha8Rng| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    match rng.gen_range(0..4) {
        0 => e = e.add(&OperatorEntry::constant(lat, coef(rng))).unwrap(),
        1 => e = e.add(&OperatorEntry::multiply(&smooth_scalar(lat, rng))).unwrap(),
        _ => {}
    }
    if rng.gen_bool(0.6) {
        let axis = if rng.gen_bool(0.5) { Axis::Time } else { Axis::Space };
        let d = OperatorEntry::difference(lat, axis).scale(coef(rng));
        let d = if rng.gen_bool(0.5) { OperatorEntry::multiply(&smooth_scalar(lat, rng)).compose(&d).unwrap() } else { d };
        e = e.add(&d).unwrap();
    }
    e
}

fn random_operator(lat: Lattice, n: usize, rng: &mut ChaCha8Rng) -> MatrixOperator {
    let entries = (0..n * n).map(|_| random_entry(lat, rng)).collect();
    MatrixOperator::from_entries(lat, n, entries).unwrap()
}

fn smooth_frame(lat: Lattice, n: usize, seed: u64) -> FrameMatrixField {
    FrameField::preset(&format!("random-smooth({seed})"), lat, n).unwrap().as_frame_matrix().clone()
}

#[test]
fn identity_operator_leaves_fields_unchanged() {
    let lat = lattice(6, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let psi = random_smooth_field(lat, 3, &mut rng);
    assert_eq!(MatrixOperator::identity(lat, 3).apply(&psi).unwrap(), psi);
}

#[test]
fn constant_operator_is_sitewise_product() {
    let lat = lattice(5, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = CMatrix::from_fn(3, 3, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let psi = random_smooth_field(lat, 3, &mut rng);
    let out = MatrixOperator::constant(lat, &m).apply(&psi).unwrap();
    for t in 0..lat.nt() {
        for x in 0..lat.nx() {
            let expected = &m * psi.site_vector(t, x);
            assert!((out.site_vector(t, x) - expected).camax() < 1e-14);
        }
    }
}

#[test]
fn slashed_partial_on_plane_wave_matches_stencil_symbol() {
    let (nt, nx) = (10, 16);
    let lat = lattice(nt, nx);
    let g = build_gamma_set();
    let units = Units::default();
    let k = 2.0 * PI * 3.0 / lat.length();
    let omega = 1.7;
    let u = [c(0.3), C64::new(0.1, -0.4), c(-0.8), C64::new(0.0, 0.5)];
    let psi = Field::from_fn(lat, 4, |t, x| {
        let ph = C64::from_polar(1.0, -(omega * t - k * x));
        u.iter().map(|v| v * ph).collect()
    })
    .unwrap();
    let out = slashed_partial(&g, lat, units).apply(&psi).unwrap();
    let k_lat = [c((omega * lat.dt()).sin() / lat.dt()), c(-(k * lat.dx()).sin() / lat.dx()), c(0.0), c(0.0)];
    let symbol = g.slash(k_lat) * C64::new(0.0, -1.0);
    let uv = rqm_core::CVector::from_column_slice(&u);
    for t in 1..nt - 1 {
        for x in 0..nx {
            let ph = C64::from_polar(1.0, -(omega * lat.time(t) - k * lat.position(x)));
            let expected = &symbol * &uv * ph;
            assert!((out.site_vector(t, x) - expected).camax() < 1e-12);
        }
    }
}

#[test]
fn entries_are_linear() {
    let lat = lattice(8, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let e = random_entry(lat, &mut rng);
        let f = smooth_scalar(lat, &mut rng);
        let h = smooth_scalar(lat, &mut rng);
        let (a, b) = (C64::new(0.7, -0.2), C64::new(-1.1, 0.4));
        let lhs = e.apply(&f.scale(a).add(&h.scale(b)).unwrap()).unwrap();
        let rhs = e.apply(&f).unwrap().scale(a).add(&e.apply(&h).unwrap().scale(b)).unwrap();
        let scale = rhs.max_abs().max(1.0);
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12 * scale);
    }
}

#[test]
fn odot_is_associative() {
    let lat = lattice(8, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let a = random_operator(lat, 4, &mut rng);
        let b = random_operator(lat, 4, &mut rng);
        let cc = random_operator(lat, 4, &mut rng);
        let probes = [random_smooth_field(lat, 4, &mut rng)];
        let left = a.odot(&b).unwrap().odot(&cc).unwrap();
        let right = a.odot(&b.odot(&cc).unwrap()).unwrap();
        assert!(left.action_deviation(&right, &probes).unwrap() < 1e-12);
    }
}

#[test]
fn odot_of_constants_is_matrix_product() {
    let lat = lattice(4, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m1 = CMatrix::from_fn(4, 4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m2 = CMatrix::from_fn(4, 4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let prod = MatrixOperator::constant(lat, &m1).odot(&MatrixOperator::constant(lat, &m2)).unwrap();
    let probes = [random_smooth_field(lat, 4, &mut rng)];
    assert!(prod.action_deviation(&MatrixOperator::constant(lat, &(&m1 * &m2)), &probes).unwrap() < 1e-14);
    let id = MatrixOperator::identity(lat, 4);
    let b = random_operator(lat, 4, &mut rng);
    assert!(id.odot(&b).unwrap().action_deviation(&b, &probes).unwrap() < 1e-15);
}

#[test]
fn slashed_partial_squares_to_wave_operator() {
    let lat = lattice(10, 16);
    let units = Units::default();
    let g = build_gamma_set();
    let d = slashed_partial(&g, lat, units);
    let square = d.odot(&d).unwrap();
    let d0 = OperatorEntry::partial(lat, 0, units);
    let d1 = OperatorEntry::partial(lat, 1, units);
    let wave = d0.compose(&d0).unwrap().sub(&d1.compose(&d1).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let probes: Vec<Field> = (0..3).map(|_| random_smooth_field(lat, 4, &mut rng)).collect();
    assert!(square.action_deviation(&MatrixOperator::diagonal(&wave, 4), &probes).unwrap() < 1e-13);
}

#[test]
fn frame_matrix_is_functorial() {
    let lat = lattice(8, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..50 {
        let f = smooth_frame(lat, 4, 100 + i);
        let a = random_operator(lat, 4, &mut rng);
        let b = random_operator(lat, 4, &mut rng);
        let probes = [random_smooth_field(lat, 4, &mut rng)];
        let whole = matrix_of(&a.odot(&b).unwrap(), &f).unwrap();
        let parts = matrix_of(&a, &f).unwrap().odot(&matrix_of(&b, &f).unwrap()).unwrap();
        assert!(whole.action_deviation(&parts, &probes).unwrap() < 1e-10);
    }
}

#[test]
fn constant_frame_gives_similarity_transform() {
    let lat = lattice(4, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f0 = CMatrix::from_fn(4, 4, |i, j| C64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)) + if i == j { c(1.0) } else { c(0.0) });
    let cm = CMatrix::from_fn(4, 4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let frame = FrameMatrixField::new(MatrixField::constant(lat, &f0)).unwrap();
    let m = matrix_of(&MatrixOperator::constant(lat, &cm), &frame).unwrap();
    let expected = f0.clone().try_inverse().unwrap() * &cm * &f0;
    let probes = [random_smooth_field(lat, 4, &mut rng)];
    assert!(m.action_deviation(&MatrixOperator::constant(lat, &expected), &probes).unwrap() < 1e-13);
    for mu in 0..4 {
        assert!(frame_connection(&frame, mu, Units::default()).max_abs() < 1e-13);
    }
}

#[test]
fn identity_frame_and_unit_operator() {
    let lat = lattice(8, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let probes: Vec<Field> = (0..2).map(|_| random_smooth_field(lat, 4, &mut rng)).collect();
    let b = random_operator(lat, 4, &mut rng);
    let id = FrameMatrixField::identity(lat, 4);
    assert!(matrix_of(&b, &id).unwrap().action_deviation(&b, &probes).unwrap() < 1e-15);
    let unit = MatrixOperator::identity(lat, 4);
    let f = smooth_frame(lat, 4, 11);
    assert!(matrix_of(&unit, &f).unwrap().action_deviation(&unit, &probes).unwrap() < 1e-13);
}

#[test]
fn frame_rejects_singular_and_ill_conditioned_sites() {
    let lat = lattice(3, 4);
    let z = MatrixField::zeros(lat, 2);
    assert!(matches!(FrameMatrixField::new(z), Err(rqm_core::Error::SingularFrame { .. })));
    let bad = CMatrix::from_fn(2, 2, |i, j| if (i, j) == (1, 1) { c(1e-9) } else if i == j { c(1.0) } else { c(0.0) });
    assert!(matches!(
        FrameMatrixField::new(MatrixField::constant(lat, &bad)),
        Err(rqm_core::Error::IllConditionedFrame { .. })
    ));
}

/// `max |matrix_of(1∂_μ, f) − (1∂_μ + E_μ)|` on a smooth probe, interior slices.
fn partial_matrix_error(nt: usize, nx: usize, mu: usize) -> f64 {
    let l = 3.2;
    let lat = Lattice::new(nt, nx, 1.6 / (nt - 1) as f64, l / nx as f64).unwrap();
    let units = Units::default();
    let f = smooth_frame(lat, 4, 21);
    let d = MatrixOperator::diagonal(&OperatorEntry::partial(lat, mu, units), 4);
    let lhs = matrix_of(&d, &f).unwrap();
    let rhs = d.add(&MatrixOperator::pointwise(&frame_connection(&f, mu, units))).unwrap();
    let kx = 2.0 * PI / l;
    let probe = Field::from_fn(lat, 4, |t, x| {
        (0..4).map(|i| C64::from_polar(1.0, (i + 1) as f64 * kx * x + 0.5 * t) * (1.0 + 0.2 * i as f64)).collect()
    })
    .unwrap();
    lhs.apply(&probe).unwrap().sub(&rhs.apply(&probe).unwrap()).unwrap().interior_max_abs(1)
}

#[test]
fn partial_under_smooth_frame_gains_connection() {
    for mu in 0..2 {
        let coarse = partial_matrix_error(17, 16, mu);
        let fine = partial_matrix_error(33, 32, mu);
        let p = order(coarse, fine);
        assert!((p - 2.0).abs() < 0.3, "mu={mu} order {p}");
    }
}

fn phase_connection_error(n: usize) -> f64 {
    let l = 4.0;
    let lat = Lattice::new(n + 1, n, 2.0 / n as f64, l / n as f64).unwrap();
    let kx = 2.0 * PI / l;
    let theta = |t: f64, x: f64| (kx * x).sin() + 0.3 * t * t;
    let f = FrameMatrixField::new(MatrixField::from_fn(lat, 2, |t, x| CMatrix::identity(2, 2) * C64::from_polar(1.0, theta(t, x))).unwrap()).unwrap();
    let e0 = frame_connection(&f, 0, Units::default());
    let e1 = frame_connection(&f, 1, Units::default());
    let mut err: f64 = 0.0;
    for t in 0..lat.nt() {
        for x in 0..lat.nx() {
            let (tt, xx) = (lat.time(t), lat.position(x));
            let d0 = CMatrix::identity(2, 2) * C64::new(0.0, 0.6 * tt);
            let d1 = CMatrix::identity(2, 2) * C64::new(0.0, kx * (kx * xx).cos());
            err = err.max(max_abs(&(e0.at(t, x) - d0))).max(max_abs(&(e1.at(t, x) - d1)));
        }
    }
    err
}

#[test]
fn phase_frame_connection_is_derivative_of_phase() {
    let p = order(phase_connection_error(16), phase_connection_error(32));
    assert!((p - 2.0).abs() < 0.3, "order {p}");
    assert!(phase_connection_error(64) < 1e-2);
}

/// Analytic frame `f = 1 + s(x,t)·P + q(t)·Q` and its exact derivative.
fn analytic_frame_residual(n: usize) -> f64 {
    let l = 4.0;
    let lat = Lattice::new(n + 1, n, 2.0 / n as f64, l / n as f64).unwrap();
    let kx = 2.0 * PI / l;
    let p = CMatrix::from_fn(3, 3, |i, j| C64::new(0.2 * (i as f64 - j as f64), 0.1 * (i + j) as f64));
    let q = CMatrix::from_fn(3, 3, |i, j| C64::new(0.15 * ((i * j) as f64).cos(), -0.05 * i as f64));
    let f = |t: f64, x: f64| CMatrix::identity(3, 3) + &p * c((kx * x + t).sin()) + &q * c((0.8 * t).cos());
    let ft = |t: f64, x: f64| &p * c((kx * x + t).cos()) - &q * c(0.8 * (0.8 * t).sin());
    let fx = |t: f64, x: f64| &p * c(kx * (kx * x + t).cos());
    let frame = FrameMatrixField::new(MatrixField::from_fn(lat, 3, f).unwrap()).unwrap();
    let e = [frame_connection(&frame, 0, Units::default()), frame_connection(&frame, 1, Units::default())];
    let mut err: f64 = 0.0;
    for ti in 0..lat.nt() {
        for xi in 0..lat.nx() {
            let (t, x) = (lat.time(ti), lat.position(xi));
            let fv = f(t, x);
            err = err.max(max_abs(&(ft(t, x) - &fv * e[0].at(ti, xi))));
            err = err.max(max_abs(&(fx(t, x) - &fv * e[1].at(ti, xi))));
        }
    }
    err
}

#[test]
fn connection_satisfies_defining_relation() {
    let p = order(analytic_frame_residual(16), analytic_frame_residual(32));
    assert!((p - 2.0).abs() < 0.3, "order {p}");
}

#[test]
fn dirac_operator_matrix_with_identity_frame_is_conventional() {
    let lat = lattice(8, 16);
    let pot = PotentialField::preset("wave(0.4,1.0)", lat, 1.0, Units::default()).unwrap();
    let g = build_gamma_set();
    let id = FrameMatrixField::identity(lat, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let probes: Vec<Field> = (0..2).map(|_| random_smooth_field(lat, 4, &mut rng)).collect();
    let lhs = dirac_operator_matrix(&g, &id, &pot, 0.7).unwrap();
    assert!(lhs.action_deviation(&dirac_operator(&g, &pot, 0.7), &probes).unwrap() < 1e-14);
    let zero = Field::zeros(lat, 4);
    assert_eq!(lhs.apply(&zero).unwrap().max_abs(), 0.0);
}

fn free_plane_wave_residual(n: usize) -> f64 {
    let l = 2.0 * PI;
    let lat = Lattice::new(n + 1, n, 1.0 / n as f64, l / n as f64).unwrap();
    let units = Units::default();
    let (p, m) = (2.0_f64, 0.8_f64);
    let e = (p * p + m * m).sqrt();
    let g = build_gamma_set();
    let u = null_vector(&(g.slash([c(e), c(-p), c(0.0), c(0.0)]) - CMatrix::identity(4, 4) * c(m)));
    let psi = Field::from_fn(lat, 4, |t, x| {
        let ph = C64::from_polar(1.0, -(e * t - p * x));
        u.iter().map(|v| v * ph).collect()
    })
    .unwrap();
    let op = dirac_operator_matrix(&g, &FrameMatrixField::identity(lat, 4), &PotentialField::free(lat, 0.0, units), m).unwrap();
    op.apply(&psi).unwrap().interior_max_abs(1)
}

#[test]
fn free_plane_wave_is_second_order_solution() {
    let p = order(free_plane_wave_residual(16), free_plane_wave_residual(32));
    assert!((p - 2.0).abs() < 0.3, "order {p}");
}
