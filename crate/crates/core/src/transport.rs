//! Frame fields `l_x`, the transport `L(y,x) = l_y⁻¹ l_x` along the identity
//! map, its coefficients `Γ_μ = l⁻¹ ∂_μ l`, section derivations and bundle
//! morphisms.
//!
//! Sections are expressed in the bases `e_μ(x) = l_x⁻¹(f_μ)`, so the matrix of
//! `l_x` itself is the identity and a bundle section is just an `n`-component
//! field related to the conventional one by `Ψ(x) = l_x⁻¹ ψ(x)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::GammaSet;
use crate::lattice::{Axis, Field, Lattice};
use crate::matrixop::{frame_connection, matrix_of, FrameMatrixField, MatrixField, MatrixOperator, DEFAULT_CONDITION_BOUND};
use crate::par::*;
use crate::potential::{parse_preset, Units};
use crate::{linalg, CMatrix, CVector, Error, Result, C64};

/// Tolerance for the unitary flag of a frame.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// A lattice site `(t, x)`.
pub type Site = (usize, usize);

/// Invertible `n×n` matrix `l_x` at every site, with cached inverses.
#[derive(Debug, Clone)]
pub struct FrameField {
    inner: FrameMatrixField,
    unitary: bool,
}

impl FrameField {
    pub fn new(l: MatrixField) -> Result<Self> {
        Self::with_condition_bound(l, DEFAULT_CONDITION_BOUND)
    }

    pub fn with_condition_bound(l: MatrixField, bound: f64) -> Result<Self> {
        Ok(FrameField { inner: FrameMatrixField::with_condition_bound(l, bound)?, unitary: false })
    }

    /// A frame that must satisfy `l_x† l_x = 1` to [`UNITARY_TOLERANCE`].
    pub fn unitary(l: MatrixField) -> Result<Self> {
        let lattice = *l.lattice();
        let devs: Vec<f64> = l.matrices().par_iter().map(linalg::unitarity_deviation).collect();
        if let Some((i, &deviation)) = devs.iter().enumerate().find(|(_, d)| **d > UNITARY_TOLERANCE) {
            let (t, x) = lattice.site(i);
            return Err(Error::NonUnitaryFrame { t, x, deviation });
        }
        let mut frame = Self::new(l)?;
        frame.unitary = true;
        Ok(frame)
    }

    pub fn identity(lattice: Lattice, n: usize) -> Self {
        FrameField { inner: FrameMatrixField::identity(lattice, n), unitary: true }
    }

    /// Resolves a frame preset on `lattice` for `n`-component fibres:
    ///
    /// * `identity`
    /// * `phase(k)`: `e^{iθ}·1` with `θ = k(sin(2πx/L) + t/2)`
    /// * `rotation(k)`: real rotations of component pairs by `k·cos(2πx/L + t/3)`
    /// * `shear(s)`: `1 + s·sin(2πx/L + t)·N`, `N` the superdiagonal shift
    /// * `random-smooth(seed)`: `1` plus low random Fourier modes, not unitary
    /// * `random-unitary(seed)`: `exp(iH(t,x))` with smooth random Hermitian `H`
    ///
    /// All presets are smooth and periodic in `x`.
    pub fn preset(spec: &str, lattice: Lattice, n: usize) -> Result<Self> {
        let (name, args) = parse_preset(spec)?;
        let bad = || Error::UnknownPreset(spec.to_string());
        let arg = |i: usize| -> Result<f64> {
            if args.len() == i + 1 {
                Ok(args[i])
            } else {
                Err(bad())
            }
        };
        let kx = 2.0 * PI / lattice.length();
        match name.as_str() {
            "identity" => {
                if !args.is_empty() {
                    return Err(bad());
                }
                Ok(Self::identity(lattice, n))
            }
            "phase" => {
                let k = arg(0)?;
                let l = MatrixField::from_fn(lattice, n, |t, x| {
                    linalg::identity(n) * C64::from_polar(1.0, k * ((kx * x).sin() + 0.5 * t))
                })?;
                Self::unitary(l)
            }
            "rotation" => {
                let k = arg(0)?;
                let l = MatrixField::from_fn(lattice, n, |t, x| rotation_matrix(n, k * (kx * x + t / 3.0).cos()))?;
                Self::unitary(l)
            }
            "shear" => {
                let s = arg(0)?;
                let l = MatrixField::from_fn(lattice, n, |t, x| {
                    let a = s * (kx * x + t).sin();
                    CMatrix::from_fn(n, n, |i, j| {
                        if i == j {
                            C64::new(1.0, 0.0)
                        } else if j == i + 1 {
                            C64::new(a, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                })?;
                Self::new(l)
            }
            "random-smooth" => {
                let seed = seed_arg(arg(0)?, spec)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let scale = C64::new(0.5 / n as f64, 0.0);
                let a = linalg::random_matrix(&mut rng, n, n) * scale;
                let b = linalg::random_matrix(&mut rng, n, n) * scale;
                let c = linalg::random_matrix(&mut rng, n, n) * scale;
                let l = MatrixField::from_fn(lattice, n, |t, x| {
                    linalg::identity(n)
                        + &a * C64::new((kx * x).cos(), 0.0)
                        + &b * C64::new((kx * x).sin() * (0.7 * t).cos(), 0.0)
                        + &c * C64::new((0.5 * t).sin(), 0.0)
                })?;
                Self::new(l)
            }
            "random-unitary" => {
                let seed = seed_arg(arg(0)?, spec)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let herm = |rng: &mut ChaCha8Rng| {
                    let m = linalg::random_matrix(rng, n, n);
                    (&m + m.adjoint()) * C64::new(0.5, 0.0)
                };
                let a = herm(&mut rng);
                let b = herm(&mut rng);
                let l = MatrixField::from_fn(lattice, n, |t, x| {
                    let h = &a * C64::new((kx * x).cos(), 0.0) + &b * C64::new((kx * x + 0.5 * t).sin(), 0.0);
                    unitary_exp(&h)
                })?;
                Self::unitary(l)
            }
            _ => Err(bad()),
        }
    }

    /// Wraps raw matrices with a per-site random draw. Only for derivative-free
    /// checks, since the result is not smooth.
    pub fn random(lattice: Lattice, n: usize, rng: &mut impl Rng) -> Result<Self> {
        let mats = (0..lattice.sites())
            .map(|_| linalg::random_matrix(rng, n, n) + linalg::identity(n) * C64::new(2.0, 0.0))
            .collect();
        Self::new(MatrixField::new(lattice, mats)?)
    }

    pub fn lattice(&self) -> &Lattice {
        self.inner.lattice()
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn l(&self, t: usize, x: usize) -> &CMatrix {
        self.inner.matrices().at(t, x)
    }

    pub fn l_inv(&self, t: usize, x: usize) -> &CMatrix {
        self.inner.inverses().at(t, x)
    }

    pub fn matrices(&self) -> &MatrixField {
        self.inner.matrices()
    }

    pub fn inverses(&self) -> &MatrixField {
        self.inner.inverses()
    }

    pub fn as_frame_matrix(&self) -> &FrameMatrixField {
        &self.inner
    }

    /// Block-diagonal `diag(l_{(t,0)}, …, l_{(t,nx-1)})` acting on slice states.
    pub fn slice_matrix(&self, t: usize) -> CMatrix {
        let blocks: Vec<CMatrix> = (0..self.lattice().nx()).map(|x| self.l(t, x).clone()).collect();
        linalg::block_diagonal(&blocks)
    }

    /// Block-diagonal inverse of [`FrameField::slice_matrix`].
    pub fn slice_inverse(&self, t: usize) -> CMatrix {
        let blocks: Vec<CMatrix> = (0..self.lattice().nx()).map(|x| self.l_inv(t, x).clone()).collect();
        linalg::block_diagonal(&blocks)
    }

    /// `Ψ(x) = l_x⁻¹ ψ(x)` for a conventional slice state.
    pub fn to_bundle_slice(&self, t: usize, state: &CVector) -> Result<CVector> {
        self.map_slice(state, |x| self.l_inv(t, x))
    }

    /// `ψ(x) = l_x Ψ(x)` for a bundle slice state.
    pub fn from_bundle_slice(&self, t: usize, state: &CVector) -> Result<CVector> {
        self.map_slice(state, |x| self.l(t, x))
    }

    fn map_slice<'a>(&'a self, state: &CVector, m: impl Fn(usize) -> &'a CMatrix) -> Result<CVector> {
        let n = self.dim();
        let nx = self.lattice().nx();
        if state.len() != n * nx {
            return Err(Error::DimensionMismatch { expected: n * nx, found: state.len() });
        }
        let mut out = CVector::zeros(n * nx);
        for x in 0..nx {
            let v = m(x) * state.rows(x * n, n);
            out.rows_mut(x * n, n).copy_from(&v);
        }
        Ok(out)
    }

    /// Sitewise `Ψ(x) = l_x⁻¹ ψ(x)` on a whole field.
    pub fn to_bundle(&self, psi: &Field) -> Result<Field> {
        self.map_field(psi, self.inverses())
    }

    /// Sitewise `ψ(x) = l_x Ψ(x)` on a whole field.
    pub fn from_bundle(&self, psi: &Field) -> Result<Field> {
        self.map_field(psi, self.matrices())
    }

    fn map_field(&self, psi: &Field, mats: &MatrixField) -> Result<Field> {
        self.lattice().check_same(psi.lattice())?;
        let n = self.dim();
        if psi.components() != n {
            return Err(Error::DimensionMismatch { expected: n, found: psi.components() });
        }
        let data: Vec<C64> = psi
            .data()
            .par_chunks(n)
            .enumerate()
            .flat_map_iter(|(i, v)| -> Vec<C64> {
                let out = mats.at_index(i) * CVector::from_column_slice(v);
                out.data.into()
            })
            .collect();
        Field::from_data(*psi.lattice(), n, data)
    }
}

fn seed_arg(v: f64, spec: &str) -> Result<u64> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(Error::UnknownPreset(spec.to_string()))
    }
}

fn rotation_matrix(n: usize, angle: f64) -> CMatrix {
    let (s, c) = angle.sin_cos();
    let mut m = linalg::identity(n);
    for p in 0..n / 2 {
        let (i, j) = (2 * p, 2 * p + 1);
        m[(i, i)] = C64::new(c, 0.0);
        m[(i, j)] = C64::new(-s, 0.0);
        m[(j, i)] = C64::new(s, 0.0);
        m[(j, j)] = C64::new(c, 0.0);
    }
    m
}

/// `exp(iH)` for Hermitian `H`.
fn unitary_exp(h: &CMatrix) -> CMatrix {
    let (e, v) = linalg::hermitian_eigen(h);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(e.len(), e.iter().map(|&x| C64::from_polar(1.0, x))));
    &v * d * v.adjoint()
}

/// The transport `L(y,x) = l_y⁻¹ l_x` along the identity map.
#[derive(Debug, Clone)]
pub struct Transport {
    frame: FrameField,
}

pub fn make_transport(frame: &FrameField) -> Transport {
    Transport { frame: frame.clone() }
}

impl Transport {
    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    /// `L(y, x)`; exactly the identity when `y == x`.
    pub fn eval(&self, y: Site, x: Site) -> CMatrix {
        if y == x {
            return linalg::identity(self.frame.dim());
        }
        self.frame.l_inv(y.0, y.1) * self.frame.l(x.0, x.1)
    }

    /// `L(p_k, p_0)` built leg by leg along a lattice path.
    pub fn along_path(&self, path: &[Site]) -> CMatrix {
        let mut acc = linalg::identity(self.frame.dim());
        for w in path.windows(2) {
            acc = self.eval(w[1], w[0]) * acc;
        }
        acc
    }

    /// The field `y ↦ L(y, x)` for fixed `x`.
    pub fn from_site(&self, x: Site) -> MatrixField {
        let lx = self.frame.l(x.0, x.1).clone();
        self.frame.inverses().map(|inv| inv * &lx)
    }

    /// The field `x ↦ L(y, x)` for fixed `y`.
    pub fn to_site(&self, y: Site) -> MatrixField {
        let inv = self.frame.l_inv(y.0, y.1).clone();
        self.frame.matrices().map(|l| &inv * l)
    }
}

/// The coefficients `Γ_μ(x) = l⁻¹(x) ∂_μ l(x)`, `μ = 0..3`.
#[derive(Debug, Clone)]
pub struct TransportCoefficients {
    gamma: [MatrixField; 4],
    units: Units,
}

pub fn coefficients(frame: &FrameField, units: Units) -> TransportCoefficients {
    let gamma = std::array::from_fn(|mu| frame_connection(frame.as_frame_matrix(), mu, units));
    TransportCoefficients { gamma, units }
}

impl TransportCoefficients {
    pub fn gamma(&self, mu: usize) -> &MatrixField {
        &self.gamma[mu]
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn dim(&self) -> usize {
        self.gamma[0].dim()
    }
}

/// `Γ̸(x) = γ^μ Γ_μ(x)`.
pub fn slashed_gamma(coeffs: &TransportCoefficients, gamma: &GammaSet) -> Result<MatrixField> {
    if coeffs.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: coeffs.dim() });
    }
    let lattice = *coeffs.gamma[0].lattice();
    let mats = (0..lattice.sites())
        .into_par_iter()
        .map(|i| (0..4).fold(CMatrix::zeros(4, 4), |acc, mu| acc + gamma.gamma(mu) * coeffs.gamma[mu].at_index(i)))
        .collect();
    MatrixField::new(lattice, mats)
}

/// The section `Ψ(x) = l_x⁻¹ ψ` obtained by transporting a fibre vector to
/// every site. `psi0` is the vector in the typical fibre, as seen from `x0`.
pub fn transported_section(frame: &FrameField, psi0: &CVector, x0: Site) -> Result<Field> {
    let n = frame.dim();
    if psi0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: psi0.len() });
    }
    let lattice = *frame.lattice();
    if x0.0 >= lattice.nt() || x0.1 >= lattice.nx() {
        return Err(Error::IndexOutOfRange { index: lattice.index(x0.0, x0.1), bound: lattice.sites() });
    }
    let data: Vec<C64> = frame
        .inverses()
        .matrices()
        .par_iter()
        .flat_map_iter(|inv| -> Vec<C64> { (inv * psi0).data.into() })
        .collect();
    Field::from_data(lattice, n, data)
}

/// `(D_μσ)(x) = ∂_μσ(x) + Γ_μ(x)σ(x)`.
pub fn derivation_along(section: &Field, coeffs: &TransportCoefficients, mu: usize) -> Result<Field> {
    let n = coeffs.dim();
    if section.components() != n {
        return Err(Error::DimensionMismatch { expected: n, found: section.components() });
    }
    let lattice = *section.lattice();
    lattice.check_same(coeffs.gamma[0].lattice())?;
    let d = match Axis::from_mu(mu) {
        None => Field::zeros(lattice, n),
        Some(axis) => {
            let scale = if axis == Axis::Time { 1.0 / coeffs.units.c } else { 1.0 };
            let comps: Vec<_> = (0..n).map(|c| section.component(c).difference(axis).scale(C64::new(scale, 0.0))).collect();
            Field::from_components(&comps)?
        }
    };
    let g = &coeffs.gamma[mu];
    let data: Vec<C64> = (0..lattice.sites())
        .into_par_iter()
        .flat_map_iter(|i| -> Vec<C64> {
            let s = CVector::from_column_slice(&section.data()[i * n..(i + 1) * n]);
            let ds = CVector::from_column_slice(&d.data()[i * n..(i + 1) * n]);
            (ds + g.at_index(i) * s).data.into()
        })
        .collect();
    Field::from_data(lattice, n, data)
}

/// `A_x = l_x⁻¹ A(x) l_x` for a pointwise matrix field.
pub fn bundle_morphism(frame: &FrameField, op: &MatrixField) -> Result<MatrixField> {
    frame.as_frame_matrix().similarity(op)
}

/// The frame-relative matrix of a matrix operator, `l⁻¹ ⊙ B ⊙ l`.
pub fn bundle_morphism_operator(frame: &FrameField, op: &MatrixOperator) -> Result<MatrixOperator> {
    matrix_of(op, frame.as_frame_matrix())
}

/// `G^μ(x) = l_x⁻¹ γ^μ l_x`.
pub fn frame_gammas(frame: &FrameField, gamma: &GammaSet) -> Result<[MatrixField; 4]> {
    let lattice = *frame.lattice();
    let g: Vec<MatrixField> = (0..4)
        .map(|mu| bundle_morphism(frame, &MatrixField::constant(lattice, gamma.gamma(mu))))
        .collect::<Result<_>>()?;
    Ok(g.try_into().expect("four matrices"))
}

/// Largest residual of the two differential relations satisfied by a transport,
///
/// * `∂L(y,x)/∂y^μ + Γ_μ(y) L(y,x) = 0`,
/// * `∂L(y,x)/∂x^μ − L(y,x) Γ_μ(x) = 0`,
///
/// over `μ ∈ {0, 1}`, all sites and the given reference points.
pub fn transport_relation_residuals(frame: &FrameField, units: Units, refs: &[Site]) -> (f64, f64) {
    let tr = make_transport(frame);
    let coeffs = coefficients(frame, units);
    let mut first = 0.0_f64;
    let mut second = 0.0_f64;
    for &r in refs {
        let from = tr.from_site(r);
        let to = tr.to_site(r);
        for (mu, axis) in [(0, Axis::Time), (1, Axis::Space)] {
            let scale = C64::new(if mu == 0 { 1.0 / units.c } else { 1.0 }, 0.0);
            let g = coeffs.gamma(mu);
            let d_from = from.difference(axis).map(|m| m * scale);
            let r1 = d_from.sub(&g.mul(&from).expect("same shape").map(|m| -m)).expect("same shape");
            first = first.max(r1.max_abs());
            let d_to = to.difference(axis).map(|m| m * scale);
            let r2 = d_to.sub(&to.mul(g).expect("same shape")).expect("same shape");
            second = second.max(r2.max_abs());
        }
    }
    (first, second)
}

/// Invertible matrices `F_s` with (possibly user-supplied) inverses, inducing
/// the transport `K(m ← l) = F_m⁻¹ F_l`.
#[derive(Debug, Clone)]
pub struct TransportFactorization {
    f: Vec<CMatrix>,
    f_inv: Vec<CMatrix>,
}

impl TransportFactorization {
    pub fn new(f: Vec<CMatrix>) -> Result<Self> {
        let f_inv = f
            .iter()
            .enumerate()
            .map(|(i, m)| m.clone().try_inverse().ok_or(Error::SingularFrame { t: 0, x: i }))
            .collect::<Result<_>>()?;
        Ok(TransportFactorization { f, f_inv })
    }

    /// Uses the given inverses as they are, without checking them.
    pub fn with_inverses(f: Vec<CMatrix>, f_inv: Vec<CMatrix>) -> Result<Self> {
        if f.len() != f_inv.len() {
            return Err(Error::DimensionMismatch { expected: f.len(), found: f_inv.len() });
        }
        Ok(TransportFactorization { f, f_inv })
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `K(m ← l)`.
    pub fn eval(&self, m: usize, l: usize) -> CMatrix {
        &self.f_inv[m] * &self.f[l]
    }
}

/// Largest violation of each transport axiom found by
/// [`generic_transport_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportCheckReport {
    pub composition: f64,
    pub identity: f64,
    pub linearity: f64,
}

impl TransportCheckReport {
    pub fn max(&self) -> f64 {
        self.composition.max(self.identity).max(self.linearity)
    }
}

/// Checks composition `K(n←m)K(m←l) = K(n←l)`, identity `K(l←l) = 1` and
/// linearity of the induced transport. Every index is visited as the middle
/// point of `samples_per_site` random triples, so a single corrupted site is
/// always hit. Violations are relative to the size of the compared matrices.
pub fn generic_transport_check(fact: &TransportFactorization, samples_per_site: usize, seed: u64) -> TransportCheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = fact.len();
    let dim = fact.f.first().map(|m| m.nrows()).unwrap_or(0);
    let mut report = TransportCheckReport { composition: 0.0, identity: 0.0, linearity: 0.0 };
    for mid in 0..count {
        let k = fact.eval(mid, mid);
        report.identity = report.identity.max(linalg::max_abs(&(k - linalg::identity(dim))));
        for _ in 0..samples_per_site {
            let l = rng.gen_range(0..count);
            let n = rng.gen_range(0..count);
            let lhs = fact.eval(n, mid) * fact.eval(mid, l);
            let rhs = fact.eval(n, l);
            report.composition = report.composition.max(linalg::relative_deviation(&lhs, &rhs));

            let k = fact.eval(n, l);
            let u = linalg::random_vector(&mut rng, dim);
            let v = linalg::random_vector(&mut rng, dim);
            let (a, b) = (linalg::random_scalar(&mut rng), linalg::random_scalar(&mut rng));
            let lhs = &k * (&u * a + &v * b);
            let rhs = &k * &u * a + &k * &v * b;
            let scale = linalg::max_abs_vec(&rhs).max(f64::MIN_POSITIVE);
            report.linearity = report.linearity.max(linalg::max_abs_vec(&(lhs - rhs)) / scale);
        }
    }
    report
}
