//! The [`GreenKernel`] type: slice-to-slice blocks `g(t', t)` of a Green
//! function, evaluated lazily from an evolution operator, a spectral basis or
//! a materialized spacetime matrix.

use std::sync::Arc;

use crate::lattice::Lattice;
use crate::par::*;
use crate::transport::FrameField;
use crate::waveeq::Propagator;
use crate::{linalg, CMatrix, Error, Result, C64};

use super::spectral::SpectralBasis;

/// Default limit on the bytes of a materialized spacetime kernel.
pub const DEFAULT_KERNEL_BUDGET: u64 = 64 * 1024 * 1024;
/// Environment variable overriding [`DEFAULT_KERNEL_BUDGET`].
pub const BUDGET_ENV: &str = "RQM_KERNEL_BUDGET_BYTES";

/// The memory budget from [`BUDGET_ENV`], or the default when unset or
/// unparsable.
pub fn kernel_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_KERNEL_BUDGET)
}

/// Which equation a kernel belongs to; fixes its normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    Schrodinger,
    Dirac,
    /// The 2×2-block kernel of the two-component Klein-Gordon system.
    KgTilde,
    /// The scalar Klein-Gordon Green function, one entry of the tilde kernel.
    KgScalar,
    /// A Dirac kernel obtained by Born iteration.
    Born,
}

impl KernelFamily {
    pub fn tag(self) -> u32 {
        match self {
            KernelFamily::Schrodinger => 1,
            KernelFamily::Dirac => 2,
            KernelFamily::KgTilde => 3,
            KernelFamily::KgScalar => 4,
            KernelFamily::Born => 5,
        }
    }

    pub fn from_tag(tag: u32) -> Option<Self> {
        Some(match tag {
            1 => KernelFamily::Schrodinger,
            2 => KernelFamily::Dirac,
            3 => KernelFamily::KgTilde,
            4 => KernelFamily::KgScalar,
            5 => KernelFamily::Born,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Schrodinger => "schrodinger",
            KernelFamily::Dirac => "dirac",
            KernelFamily::KgTilde => "kg-tilde",
            KernelFamily::KgScalar => "kg-scalar",
            KernelFamily::Born => "born",
        }
    }

    /// Whether the reconstruction measure carries `iħ`.
    fn has_hbar_measure(self) -> bool {
        matches!(self, KernelFamily::Schrodinger | KernelFamily::Dirac | KernelFamily::Born)
    }
}

/// The step function multiplying the evolution operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theta {
    /// `θ(τ) = 1` for `τ ≥ 0`, `0` otherwise.
    Retarded,
    /// `θ(τ) = ½ sgn(τ)`, `0` at `τ = 0`.
    Symmetric,
}

impl Theta {
    fn value(self, tp: usize, t: usize) -> f64 {
        match self {
            Theta::Retarded => {
                if tp >= t {
                    1.0
                } else {
                    0.0
                }
            }
            Theta::Symmetric => match tp.cmp(&t) {
                std::cmp::Ordering::Greater => 0.5,
                std::cmp::Ordering::Less => -0.5,
                std::cmp::Ordering::Equal => 0.0,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum BlockSource {
    Evolution(Arc<Propagator>),
    Spectral(Arc<SpectralBasis>),
    /// Full spacetime matrix, rows and columns indexed `t·(k·nx) + x·k + c`.
    Dense(Arc<CMatrix>),
    /// Entry `(row, col)` of every site block of another kernel.
    Component { inner: Box<GreenKernel>, row: usize, col: usize },
}

/// A Green kernel on a lattice with `k` components per site.
///
/// `block(t', t)` is the `(k·nx)×(k·nx)` matrix `g(x', x)` between slices. The
/// solution is reconstructed as `θψ(t') = μ · block(t', t) · W_t · ψ(t)` where
/// the measure `μ` is `iħΔx` (Schrödinger, Dirac) or `Δx` (Klein-Gordon) and
/// `W_t` is the per-site weight (`γ⁰` for Dirac, `1` otherwise).
#[derive(Debug, Clone)]
pub struct GreenKernel {
    lattice: Lattice,
    family: KernelFamily,
    k: usize,
    hbar: f64,
    theta: Theta,
    source: BlockSource,
    scale: C64,
    right: Option<CMatrix>,
    weight: Option<CMatrix>,
    frame: Option<FrameField>,
}

impl GreenKernel {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        lattice: Lattice,
        family: KernelFamily,
        k: usize,
        hbar: f64,
        source: BlockSource,
        scale: C64,
        right: Option<CMatrix>,
        weight: Option<CMatrix>,
    ) -> Self {
        GreenKernel { lattice, family, k, hbar, theta: Theta::Retarded, source, scale, right, weight, frame: None }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn components(&self) -> usize {
        self.k
    }

    pub fn slice_dim(&self) -> usize {
        self.k * self.lattice.nx()
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn frame(&self) -> Option<&FrameField> {
        self.frame.as_ref()
    }

    /// The same kernel with another step-function convention. Kernels
    /// backed by a materialized matrix keep their own convention.
    pub fn with_theta(&self, theta: Theta) -> Result<Self> {
        match &self.source {
            BlockSource::Dense(_) if theta != self.theta => {
                Err(Error::KernelFamily("a materialized kernel has a fixed step function".into()))
            }
            BlockSource::Component { inner, row, col } => Ok(GreenKernel {
                theta,
                source: BlockSource::Component { inner: Box::new(inner.with_theta(theta)?), row: *row, col: *col },
                ..self.clone()
            }),
            _ => Ok(GreenKernel { theta, ..self.clone() }),
        }
    }

    /// Reconstruction measure: `iħΔx` or `Δx`.
    pub fn measure(&self) -> C64 {
        if self.family.has_hbar_measure() {
            C64::new(0.0, self.hbar * self.lattice.dx())
        } else {
            C64::new(self.lattice.dx(), 0.0)
        }
    }

    /// Slice-level weight `W_t`, conjugated by the frame if one is attached.
    pub fn weight(&self, t: usize) -> CMatrix {
        let nx = self.lattice.nx();
        let w = match &self.weight {
            Some(w) => linalg::repeat_diagonal(w, nx),
            None => linalg::identity(self.slice_dim()),
        };
        match &self.frame {
            Some(f) => f.slice_inverse(t) * w * f.slice_matrix(t),
            None => w,
        }
    }

    fn check_times(&self, tp: usize, t: usize) -> Result<()> {
        let nt = self.lattice.nt();
        if tp >= nt || t >= nt {
            return Err(Error::TimeRange { t0: t, t1: tp, nt });
        }
        Ok(())
    }

    /// The evolution-type factor `θ(t'−t)·U(t', t)` before scaling.
    fn raw(&self, tp: usize, t: usize) -> Result<CMatrix> {
        let n = self.slice_dim();
        let theta = self.theta.value(tp, t);
        if theta == 0.0 {
            return Ok(CMatrix::zeros(n, n));
        }
        let u = match &self.source {
            BlockSource::Evolution(p) => {
                if tp >= t {
                    p.operator(tp, t)?
                } else {
                    linalg::inverse(&p.operator(t, tp)?, "backward evolution")?
                }
            }
            BlockSource::Spectral(b) => b.evolution(tp as f64 * self.lattice.dt() - t as f64 * self.lattice.dt(), self.hbar),
            BlockSource::Dense(_) | BlockSource::Component { .. } => unreachable!("handled in block"),
        };
        Ok(u * C64::new(theta, 0.0))
    }

    fn finish(&self, mut b: CMatrix, tp: usize, t: usize) -> CMatrix {
        b *= self.scale;
        if let Some(r) = &self.right {
            b *= linalg::repeat_diagonal(r, self.lattice.nx());
        }
        match &self.frame {
            Some(f) => f.slice_inverse(tp) * b * f.slice_matrix(t),
            None => b,
        }
    }

    /// The block `g(t', t)`.
    pub fn block(&self, tp: usize, t: usize) -> Result<CMatrix> {
        self.check_times(tp, t)?;
        match &self.source {
            BlockSource::Dense(m) => {
                let n = self.slice_dim();
                let b = m.view((tp * n, t * n), (n, n)).into_owned();
                Ok(match &self.frame {
                    Some(f) => f.slice_inverse(tp) * b * f.slice_matrix(t),
                    None => b,
                })
            }
            BlockSource::Component { inner, row, col } => {
                let ib = inner.block(tp, t)?;
                let (ik, nx) = (inner.k, self.lattice.nx());
                let b = CMatrix::from_fn(nx, nx, |i, j| ib[(i * ik + row, j * ik + col)]);
                Ok(self.finish(b, tp, t))
            }
            _ => Ok(self.finish(self.raw(tp, t)?, tp, t)),
        }
    }

    /// All blocks `g(t', t)` for `t' = t..nt`, sharing one pass of the
    /// evolution where possible.
    pub fn blocks_from(&self, t: usize) -> Result<Vec<CMatrix>> {
        self.check_times(t, t)?;
        match (&self.source, self.theta) {
            (BlockSource::Evolution(p), Theta::Retarded) => {
                Ok(p.operators_from(t)?.into_iter().enumerate().map(|(i, u)| self.finish(u, t + i, t)).collect())
            }
            _ => (t..self.lattice.nt()).map(|tp| self.block(tp, t)).collect(),
        }
    }

    /// `θψ(t') = μ · g(t', t) · W_t · ψ(t)`.
    pub fn apply(&self, psi: &crate::CVector, t: usize, tp: usize) -> Result<crate::CVector> {
        if psi.len() != self.slice_dim() {
            return Err(Error::DimensionMismatch { expected: self.slice_dim(), found: psi.len() });
        }
        Ok(self.block(tp, t)? * (self.weight(t) * psi) * self.measure())
    }

    /// The two-leg composition `μ · g(t2, t1) · W_{t1} · g(t1, t0)`.
    pub fn compose(&self, t2: usize, t1: usize, t0: usize) -> Result<CMatrix> {
        Ok(self.block(t2, t1)? * self.weight(t1) * self.block(t1, t0)? * self.measure())
    }

    /// Conjugates every block by the frame: `l_{t'}⁻¹ g(t', t) l_t`, with the
    /// weight transformed the same way.
    pub fn morphism(&self, frame: &FrameField) -> Result<Self> {
        self.lattice.check_same(frame.lattice())?;
        if frame.dim() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: frame.dim() });
        }
        if self.frame.is_some() {
            return Err(Error::KernelFamily("kernel already carries a frame".into()));
        }
        Ok(GreenKernel { frame: Some(frame.clone()), ..self.clone() })
    }

    /// Bytes needed to materialize the full spacetime kernel.
    pub fn dense_bytes(&self) -> u64 {
        let n = (self.slice_dim() * self.lattice.nt()) as u64;
        n.saturating_mul(n).saturating_mul(16)
    }

    /// The full spacetime matrix, refusing when it exceeds `budget` bytes.
    pub fn materialize(&self, budget: u64) -> Result<CMatrix> {
        check_budget(self.dense_bytes(), budget)?;
        if let (BlockSource::Dense(m), None) = (&self.source, &self.frame) {
            return Ok((**m).clone());
        }
        let nt = self.lattice.nt();
        let n = self.slice_dim();
        let columns: Vec<Result<Vec<(usize, CMatrix)>>> = (0..nt)
            .into_par_iter()
            .map(|t| {
                let mut out = Vec::new();
                if self.theta == Theta::Symmetric {
                    for tp in 0..t {
                        out.push((tp, self.block(tp, t)?));
                    }
                }
                for (i, b) in self.blocks_from(t)?.into_iter().enumerate() {
                    out.push((t + i, b));
                }
                Ok(out)
            })
            .collect();
        let mut g = CMatrix::zeros(n * nt, n * nt);
        for (t, col) in columns.into_iter().enumerate() {
            for (tp, b) in col? {
                g.view_mut((tp * n, t * n), (n, n)).copy_from(&b);
            }
        }
        Ok(g)
    }

    /// A kernel backed by an explicit spacetime matrix.
    pub(crate) fn dense(lattice: Lattice, family: KernelFamily, k: usize, hbar: f64, m: CMatrix, weight: Option<CMatrix>) -> Self {
        GreenKernel::new(lattice, family, k, hbar, BlockSource::Dense(Arc::new(m)), C64::new(1.0, 0.0), None, weight)
    }
}

pub(crate) fn check_budget(required: u64, budget: u64) -> Result<()> {
    if required > budget {
        return Err(Error::MemoryBudget { required, budget });
    }
    Ok(())
}
