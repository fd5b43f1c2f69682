//! Matrices whose entries are linear operators on scalar lattice fields.
//!
//! An [`OperatorEntry`] is a finite sum of terms. Each term is a constant times
//! a word of primitive factors, applied right to left:
//!
//! * `Mul(f)`: pointwise multiplication by a lattice field,
//! * `Diff(axis)`: centered first difference along an axis.
//!
//! Words concatenate under composition, so `⊙` is exact and symbolic: no
//! product rule is ever pre-expanded and no second-difference stencil is
//! introduced. Two operators are compared by their action on random fields.

use std::sync::Arc;

use rand::Rng;

use crate::clifford::GammaSet;
use crate::lattice::{difference, Axis, Field, Lattice, ScalarField};
use crate::par::*;
use crate::potential::{PotentialField, Units};
use crate::{linalg, CMatrix, Error, Result, C64};

/// Frames with a site condition number above this are rejected by default.
pub const DEFAULT_CONDITION_BOUND: f64 = 1e6;

#[derive(Debug, Clone)]
enum Factor {
    Mul(Arc<[C64]>),
    Diff(Axis),
}

#[derive(Debug, Clone)]
struct Term {
    scale: C64,
    // outermost first
    factors: Vec<Factor>,
}

impl Term {
    fn apply(&self, lattice: &Lattice, input: &[C64]) -> Vec<C64> {
        let mut v = input.to_vec();
        for f in self.factors.iter().rev() {
            match f {
                Factor::Mul(m) => v.iter_mut().zip(m.iter()).for_each(|(a, b)| *a *= b),
                Factor::Diff(axis) => v = difference(lattice, &v, *axis),
            }
        }
        v
    }
}

/// A linear operator on scalar fields in the closed term language.
#[derive(Debug, Clone)]
pub struct OperatorEntry {
    lattice: Lattice,
    terms: Vec<Term>,
}

/// Appends `f` to a word, merging adjacent multiplications. Returns `false`
/// when the word became identically zero.
fn push_factor(word: &mut Vec<Factor>, f: Factor) -> bool {
    match (word.last_mut(), f) {
        (Some(Factor::Mul(prev)), Factor::Mul(next)) => {
            let prod: Arc<[C64]> = prev.iter().zip(next.iter()).map(|(a, b)| a * b).collect();
            if prod.iter().all(|v| *v == C64::new(0.0, 0.0)) {
                return false;
            }
            if prod.iter().all(|v| *v == C64::new(1.0, 0.0)) {
                word.pop();
            } else {
                *prev = prod;
            }
            true
        }
        (_, f) => {
            word.push(f);
            true
        }
    }
}

/// Sums terms that differ only in their leading multiplication, in order of
/// first appearance. Groups of one are kept as they are.
fn collect_terms(terms: Vec<Term>) -> Vec<Term> {
    use std::collections::hash_map::{DefaultHasher, Entry};
    use std::collections::HashMap;
    use std::hash::{Hash, Hasher};

    fn split(t: &Term) -> (Option<&Arc<[C64]>>, &[Factor]) {
        match t.factors.first() {
            Some(Factor::Mul(m)) => (Some(m), &t.factors[1..]),
            _ => (None, &t.factors[..]),
        }
    }
    fn key(rest: &[Factor]) -> u64 {
        let mut h = DefaultHasher::new();
        for f in rest {
            match f {
                Factor::Diff(a) => (0u8, *a as u8).hash(&mut h),
                Factor::Mul(m) => {
                    1u8.hash(&mut h);
                    m.iter().for_each(|v| (v.re.to_bits(), v.im.to_bits()).hash(&mut h));
                }
            }
        }
        h.finish()
    }
    fn same(a: &[Factor], b: &[Factor]) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| match (x, y) {
                (Factor::Diff(p), Factor::Diff(q)) => p == q,
                (Factor::Mul(p), Factor::Mul(q)) => Arc::ptr_eq(p, q) || p[..] == q[..],
                _ => false,
            })
    }

    let mut groups: Vec<Vec<Term>> = Vec::new();
    let mut index: HashMap<u64, Vec<usize>> = HashMap::new();
    for t in terms {
        let k = key(split(&t).1);
        let slot = match index.entry(k) {
            Entry::Occupied(mut e) => match e.get().iter().copied().find(|&g| same(split(&groups[g][0]).1, split(&t).1)) {
                Some(g) => g,
                None => {
                    e.get_mut().push(groups.len());
                    groups.push(Vec::new());
                    groups.len() - 1
                }
            },
            Entry::Vacant(e) => {
                e.insert(vec![groups.len()]);
                groups.push(Vec::new());
                groups.len() - 1
            }
        };
        groups[slot].push(t);
    }
    groups
        .into_iter()
        .filter_map(|mut g| {
            if g.len() == 1 {
                return g.pop();
            }
            let rest = split(&g[0]).1.to_vec();
            let n = g.iter().find_map(|t| split(t).0.map(|m| m.len()));
            let lead: Arc<[C64]> = match n {
                Some(n) => (0..n)
                    .map(|i| g.iter().map(|t| t.scale * split(t).0.map_or(C64::new(1.0, 0.0), |m| m[i])).sum())
                    .collect(),
                None => return Some(Term { scale: g.iter().map(|t| t.scale).sum(), factors: rest }),
            };
            if lead.iter().all(|v| *v == C64::new(0.0, 0.0)) {
                return None;
            }
            let mut factors = vec![Factor::Mul(lead)];
            factors.extend(rest);
            Some(Term { scale: C64::new(1.0, 0.0), factors })
        })
        .collect()
}

impl OperatorEntry {
    pub fn zero(lattice: Lattice) -> Self {
        OperatorEntry { lattice, terms: Vec::new() }
    }

    pub fn identity(lattice: Lattice) -> Self {
        Self::constant(lattice, C64::new(1.0, 0.0))
    }

    pub fn constant(lattice: Lattice, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return Self::zero(lattice);
        }
        OperatorEntry { lattice, terms: vec![Term { scale: c, factors: Vec::new() }] }
    }

    /// Pointwise multiplication by the values of `field`.
    pub fn multiply(field: &ScalarField) -> Self {
        Self::multiply_values(*field.lattice(), field.values().into())
    }

    pub(crate) fn multiply_values(lattice: Lattice, values: Arc<[C64]>) -> Self {
        debug_assert_eq!(values.len(), lattice.sites());
        if values.iter().all(|v| *v == C64::new(0.0, 0.0)) {
            return Self::zero(lattice);
        }
        if let Some(first) = values.first().copied() {
            if values.iter().all(|v| *v == first) {
                return Self::constant(lattice, first);
            }
        }
        OperatorEntry {
            lattice,
            terms: vec![Term { scale: C64::new(1.0, 0.0), factors: vec![Factor::Mul(values)] }],
        }
    }

    /// Centered first difference along a lattice axis.
    pub fn difference(lattice: Lattice, axis: Axis) -> Self {
        OperatorEntry {
            lattice,
            terms: vec![Term { scale: C64::new(1.0, 0.0), factors: vec![Factor::Diff(axis)] }],
        }
    }

    /// `∂/∂x^μ` with `x⁰ = ct`; zero for the transverse directions.
    pub fn partial(lattice: Lattice, mu: usize, units: Units) -> Self {
        match Axis::from_mu(mu) {
            Some(Axis::Time) => Self::difference(lattice, Axis::Time).scale(C64::new(1.0 / units.c, 0.0)),
            Some(Axis::Space) => Self::difference(lattice, Axis::Space),
            None => Self::zero(lattice),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return Self::zero(self.lattice);
        }
        OperatorEntry {
            lattice: self.lattice,
            terms: self.terms.iter().map(|t| Term { scale: t.scale * c, factors: t.factors.clone() }).collect(),
        }
    }

    pub fn add(&self, other: &OperatorEntry) -> Result<Self> {
        self.lattice.check_same(&other.lattice)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(OperatorEntry { lattice: self.lattice, terms })
    }

    pub fn sub(&self, other: &OperatorEntry) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &OperatorEntry) -> Result<Self> {
        self.lattice.check_same(&inner.lattice)?;
        let mut terms = Vec::with_capacity(self.terms.len() * inner.terms.len());
        for a in &self.terms {
            'inner: for b in &inner.terms {
                let mut word = a.factors.clone();
                for f in &b.factors {
                    if !push_factor(&mut word, f.clone()) {
                        continue 'inner;
                    }
                }
                terms.push(Term { scale: a.scale * b.scale, factors: word });
            }
        }
        Ok(OperatorEntry { lattice: self.lattice, terms })
    }

    pub fn apply(&self, f: &ScalarField) -> Result<ScalarField> {
        self.lattice.check_same(f.lattice())?;
        Ok(ScalarField::from_values(self.lattice, self.apply_values(f.values()))
            .expect("shape preserved"))
    }

    fn apply_values(&self, input: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); input.len()];
        for term in &self.terms {
            let v = term.apply(&self.lattice, input);
            out.iter_mut().zip(v).for_each(|(o, x)| *o += term.scale * x);
        }
        out
    }
}

/// A complex `n×n` matrix at every lattice site.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    lattice: Lattice,
    n: usize,
    mats: Vec<CMatrix>,
}

impl MatrixField {
    pub fn new(lattice: Lattice, mats: Vec<CMatrix>) -> Result<Self> {
        if mats.len() != lattice.sites() {
            return Err(Error::DimensionMismatch { expected: lattice.sites(), found: mats.len() });
        }
        let n = mats.first().map(|m| m.nrows()).unwrap_or(0);
        if let Some(bad) = mats.iter().find(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.nrows().max(bad.ncols()) });
        }
        Ok(MatrixField { lattice, n, mats })
    }

    pub fn constant(lattice: Lattice, m: &CMatrix) -> Self {
        MatrixField { lattice, n: m.nrows(), mats: vec![m.clone(); lattice.sites()] }
    }

    pub fn identity(lattice: Lattice, n: usize) -> Self {
        Self::constant(lattice, &linalg::identity(n))
    }

    pub fn zeros(lattice: Lattice, n: usize) -> Self {
        Self::constant(lattice, &CMatrix::zeros(n, n))
    }

    /// Samples `f(t_coordinate, x_coordinate)` at every site, in parallel.
    pub fn from_fn<F>(lattice: Lattice, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> CMatrix + Sync,
    {
        let mats: Vec<CMatrix> = (0..lattice.sites())
            .into_par_iter()
            .map(|i| {
                let (t, x) = lattice.site(i);
                f(lattice.time(t), lattice.position(x))
            })
            .collect();
        let out = Self::new(lattice, mats)?;
        if out.n != n {
            return Err(Error::DimensionMismatch { expected: n, found: out.n });
        }
        Ok(out)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn at(&self, t: usize, x: usize) -> &CMatrix {
        &self.mats[self.lattice.index(t, x)]
    }

    pub fn at_index(&self, i: usize) -> &CMatrix {
        &self.mats[i]
    }

    /// Entry `(a, b)` of every site matrix.
    pub fn entry_field(&self, a: usize, b: usize) -> ScalarField {
        ScalarField::from_values(self.lattice, self.mats.iter().map(|m| m[(a, b)]).collect())
            .expect("one value per site")
    }

    pub fn map<F>(&self, f: F) -> MatrixField
    where
        F: Fn(&CMatrix) -> CMatrix + Sync + Send,
    {
        let mats: Vec<CMatrix> = self.mats.par_iter().map(f).collect();
        let n = mats.first().map(|m| m.nrows()).unwrap_or(self.n);
        MatrixField { lattice: self.lattice, n, mats }
    }

    /// Sitewise product `self(x) · other(x)`.
    pub fn mul(&self, other: &MatrixField) -> Result<MatrixField> {
        self.lattice.check_same(&other.lattice)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mats = self.mats.par_iter().zip(other.mats.par_iter()).map(|(a, b)| a * b).collect();
        Ok(MatrixField { lattice: self.lattice, n: self.n, mats })
    }

    pub fn difference(&self, axis: Axis) -> MatrixField {
        MatrixField { lattice: self.lattice, n: self.n, mats: difference(&self.lattice, &self.mats, axis) }
    }

    /// Largest entry modulus over all sites.
    pub fn max_abs(&self) -> f64 {
        self.mats.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    /// Largest entry modulus over slices `margin..nt-margin`.
    pub fn interior_max_abs(&self, margin: usize) -> f64 {
        let nx = self.lattice.nx();
        let nt = self.lattice.nt();
        if 2 * margin >= nt {
            return 0.0;
        }
        self.mats[margin * nx..(nt - margin) * nx].iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &MatrixField) -> Result<MatrixField> {
        self.lattice.check_same(&other.lattice)?;
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a - b).collect();
        Ok(MatrixField { lattice: self.lattice, n: self.n, mats })
    }
}

/// An invertible basis matrix `f(x)` at every site with its cached inverse.
#[derive(Debug, Clone)]
pub struct FrameMatrixField {
    f: MatrixField,
    inverse: MatrixField,
}

impl FrameMatrixField {
    pub fn new(f: MatrixField) -> Result<Self> {
        Self::with_condition_bound(f, DEFAULT_CONDITION_BOUND)
    }

    pub fn with_condition_bound(f: MatrixField, bound: f64) -> Result<Self> {
        let lattice = f.lattice;
        let checked: Vec<Result<CMatrix>> = f
            .mats
            .par_iter()
            .enumerate()
            .map(|(i, m)| {
                let (t, x) = lattice.site(i);
                let inv = m.clone().try_inverse().ok_or(Error::SingularFrame { t, x })?;
                let cond = linalg::condition_number(m);
                if !cond.is_finite() {
                    return Err(Error::SingularFrame { t, x });
                }
                if cond > bound {
                    return Err(Error::IllConditionedFrame { t, x, cond, bound });
                }
                Ok(inv)
            })
            .collect();
        let inv = checked.into_iter().collect::<Result<Vec<_>>>()?;
        let inverse = MatrixField { lattice, n: f.n, mats: inv };
        Ok(FrameMatrixField { f, inverse })
    }

    pub fn identity(lattice: Lattice, n: usize) -> Self {
        FrameMatrixField { f: MatrixField::identity(lattice, n), inverse: MatrixField::identity(lattice, n) }
    }

    pub fn matrices(&self) -> &MatrixField {
        &self.f
    }

    pub fn inverses(&self) -> &MatrixField {
        &self.inverse
    }

    pub fn lattice(&self) -> &Lattice {
        &self.f.lattice
    }

    pub fn dim(&self) -> usize {
        self.f.n
    }

    /// `f⁻¹(x) · M · f(x)` at every site.
    pub fn similarity(&self, m: &MatrixField) -> Result<MatrixField> {
        self.inverse.mul(m)?.mul(&self.f)
    }
}

/// `E_μ(x) = f⁻¹(x) ∂_μ f(x)` with centered differences; zero for `μ ≥ 2`.
pub fn frame_connection(frame: &FrameMatrixField, mu: usize, units: Units) -> MatrixField {
    let lattice = *frame.lattice();
    match Axis::from_mu(mu) {
        None => MatrixField::zeros(lattice, frame.dim()),
        Some(axis) => {
            let scale = if axis == Axis::Time { 1.0 / units.c } else { 1.0 };
            let df = frame.f.difference(axis);
            let mats = frame
                .inverse
                .mats
                .par_iter()
                .zip(df.mats.par_iter())
                .map(|(inv, d)| inv * d * C64::new(scale, 0.0))
                .collect();
            MatrixField { lattice, n: frame.dim(), mats }
        }
    }
}

/// An `n×n` matrix of [`OperatorEntry`] values acting on `n`-component fields.
#[derive(Debug, Clone)]
pub struct MatrixOperator {
    lattice: Lattice,
    n: usize,
    entries: Vec<OperatorEntry>,
}

impl MatrixOperator {
    pub fn from_entries(lattice: Lattice, n: usize, entries: Vec<OperatorEntry>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        for e in &entries {
            lattice.check_same(&e.lattice)?;
        }
        Ok(MatrixOperator { lattice, n, entries })
    }

    pub fn zero(lattice: Lattice, n: usize) -> Self {
        MatrixOperator { lattice, n, entries: vec![OperatorEntry::zero(lattice); n * n] }
    }

    pub fn identity(lattice: Lattice, n: usize) -> Self {
        Self::diagonal(&OperatorEntry::identity(lattice), n)
    }

    /// `entry · 1_n`.
    pub fn diagonal(entry: &OperatorEntry, n: usize) -> Self {
        let lattice = entry.lattice;
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { entry.clone() } else { OperatorEntry::zero(lattice) })
            .collect();
        MatrixOperator { lattice, n, entries }
    }

    /// A constant matrix acting pointwise.
    pub fn constant(lattice: Lattice, m: &CMatrix) -> Self {
        let n = m.nrows();
        let entries = (0..n * n).map(|i| OperatorEntry::constant(lattice, m[(i / n, i % n)])).collect();
        MatrixOperator { lattice, n, entries }
    }

    /// A site-dependent matrix acting pointwise.
    pub fn pointwise(field: &MatrixField) -> Self {
        let n = field.n;
        let entries = (0..n * n)
            .map(|i| {
                let values: Arc<[C64]> = field.mats.iter().map(|m| m[(i / n, i % n)]).collect();
                OperatorEntry::multiply_values(field.lattice, values)
            })
            .collect();
        MatrixOperator { lattice: field.lattice, n, entries }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, a: usize, b: usize) -> &OperatorEntry {
        &self.entries[a * self.n + b]
    }

    pub fn term_count(&self) -> usize {
        self.entries.iter().map(|e| e.term_count()).sum()
    }

    /// `(Bψ)^α = Σ_β b^α_β(ψ^β)`.
    pub fn apply(&self, psi: &Field) -> Result<Field> {
        self.lattice.check_same(psi.lattice())?;
        if psi.components() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: psi.components() });
        }
        let n = self.n;
        let comps: Vec<Vec<C64>> = (0..n).map(|b| psi.component(b).into_values()).collect();
        let rows: Vec<Vec<C64>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut acc = vec![C64::new(0.0, 0.0); self.lattice.sites()];
                for (b, comp) in comps.iter().enumerate() {
                    let e = &self.entries[a * n + b];
                    if e.is_zero() {
                        continue;
                    }
                    acc.iter_mut().zip(e.apply_values(comp)).for_each(|(o, v)| *o += v);
                }
                acc
            })
            .collect();
        let fields: Vec<ScalarField> = rows
            .into_iter()
            .map(|v| ScalarField::from_values(self.lattice, v).expect("one value per site"))
            .collect();
        Field::from_components(&fields)
    }

    /// The `⊙` product: entry `(α,β)` is `Σ_μ a^α_μ ∘ b^μ_β`.
    pub fn odot(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        self.lattice.check_same(&other.lattice)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let entries: Vec<Result<OperatorEntry>> = (0..n * n)
            .into_par_iter()
            .map(|i| {
                let (a, b) = (i / n, i % n);
                let mut acc = OperatorEntry::zero(self.lattice);
                for m in 0..n {
                    let l = self.entry(a, m);
                    let r = other.entry(m, b);
                    if l.is_zero() || r.is_zero() {
                        continue;
                    }
                    acc = acc.add(&l.compose(r)?)?;
                }
                acc.terms = collect_terms(acc.terms);
                Ok(acc)
            })
            .collect();
        Ok(MatrixOperator { lattice: self.lattice, n, entries: entries.into_iter().collect::<Result<_>>()? })
    }

    pub fn add(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        self.lattice.check_same(&other.lattice)?;
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(MatrixOperator { lattice: self.lattice, n: self.n, entries })
    }

    pub fn sub(&self, other: &MatrixOperator) -> Result<MatrixOperator> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> MatrixOperator {
        MatrixOperator { lattice: self.lattice, n: self.n, entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    /// Largest `max|Aψ − Bψ| / max|Bψ|` over the probe fields.
    pub fn action_deviation(&self, other: &MatrixOperator, probes: &[Field]) -> Result<f64> {
        let mut worst = 0.0_f64;
        for psi in probes {
            let a = self.apply(psi)?;
            let b = other.apply(psi)?;
            let scale = b.max_abs().max(a.max_abs()).max(f64::MIN_POSITIVE);
            worst = worst.max(a.sub(&b)?.max_abs() / scale);
        }
        Ok(worst)
    }
}

/// The frame-relative matrix `𝐁 = f⁻¹ ⊙ B ⊙ f` of a matrix operator:
/// `B^α_β = Σ (f⁻¹)^α_μ b^μ_ν ∘ (f^ν_β ·)`.
pub fn matrix_of(b: &MatrixOperator, frame: &FrameMatrixField) -> Result<MatrixOperator> {
    if b.dim() != frame.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: frame.dim() });
    }
    b.lattice.check_same(frame.lattice())?;
    MatrixOperator::pointwise(&frame.inverse).odot(b)?.odot(&MatrixOperator::pointwise(&frame.f))
}

/// `D_μ = ∂_μ + i(e/ħc)A_μ` as a scalar operator.
pub fn gauge_derivative(potential: &PotentialField, mu: usize) -> OperatorEntry {
    let lattice = *potential.lattice();
    let units = potential.units();
    let q = potential.coupling();
    let a: Arc<[C64]> = potential.component(mu).iter().map(|&v| C64::new(0.0, q * v)).collect();
    OperatorEntry::partial(lattice, mu, units)
        .add(&OperatorEntry::multiply_values(lattice, a))
        .expect("same lattice")
}

/// `γ^μ ∂_μ` as a 4×4 matrix operator.
pub fn slashed_partial(gamma: &GammaSet, lattice: Lattice, units: Units) -> MatrixOperator {
    (0..2).fold(MatrixOperator::zero(lattice, 4), |acc, mu| {
        let d = MatrixOperator::diagonal(&OperatorEntry::partial(lattice, mu, units), 4);
        acc.add(&MatrixOperator::constant(lattice, gamma.gamma(mu)).odot(&d).expect("same shape"))
            .expect("same shape")
    })
}

/// The conventional Dirac operator `iħ γ^μ D_μ − mc·1₄`.
pub fn dirac_operator(gamma: &GammaSet, potential: &PotentialField, mass: f64) -> MatrixOperator {
    let lattice = *potential.lattice();
    let units = potential.units();
    let mut op = MatrixOperator::constant(lattice, &(linalg::identity(4) * C64::new(-mass * units.c, 0.0)));
    for mu in 0..2 {
        let d = MatrixOperator::diagonal(&gauge_derivative(potential, mu), 4);
        let term = MatrixOperator::constant(lattice, gamma.gamma(mu)).odot(&d).expect("same shape");
        op = op.add(&term.scale(C64::new(0.0, units.hbar))).expect("same shape");
    }
    op
}

/// Frame matrix of the Dirac operator,
/// `iħ G^μ(x)(1₄ D_μ + E_μ(x)) − mc·1₄` with `G^μ = f⁻¹ γ^μ f`.
pub fn dirac_operator_matrix(
    gamma: &GammaSet,
    frame: &FrameMatrixField,
    potential: &PotentialField,
    mass: f64,
) -> Result<MatrixOperator> {
    if frame.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: frame.dim() });
    }
    let lattice = *frame.lattice();
    lattice.check_same(potential.lattice())?;
    let units = potential.units();
    let mut op = MatrixOperator::constant(lattice, &(linalg::identity(4) * C64::new(-mass * units.c, 0.0)));
    for mu in 0..2 {
        let g = frame.similarity(&MatrixField::constant(lattice, gamma.gamma(mu)))?;
        let e = frame_connection(frame, mu, units);
        let inner = MatrixOperator::diagonal(&gauge_derivative(potential, mu), 4).add(&MatrixOperator::pointwise(&e))?;
        let term = MatrixOperator::pointwise(&g).odot(&inner)?;
        op = op.add(&term.scale(C64::new(0.0, units.hbar)))?;
    }
    Ok(op)
}

/// Independent random values at every site; derivative-free tests only.
pub fn random_field(lattice: Lattice, n: usize, rng: &mut impl Rng) -> Field {
    let data = (0..lattice.sites() * n).map(|_| linalg::random_scalar(rng)).collect();
    Field::from_data(lattice, n, data).expect("sized to lattice")
}

/// A smooth random field: a few low Fourier modes in `x` times smooth random
/// polynomials in `t`, periodic in space.
pub fn random_smooth_field(lattice: Lattice, n: usize, rng: &mut impl Rng) -> Field {
    let len = lattice.length();
    let tmax = lattice.duration().max(lattice.dt());
    let modes: Vec<(i32, Vec<[C64; 3]>)> = (-2..=2)
        .map(|k| (k, (0..n).map(|_| [linalg::random_scalar(rng), linalg::random_scalar(rng), linalg::random_scalar(rng)]).collect()))
        .collect();
    Field::from_fn(lattice, n, |t, x| {
        let s = t / tmax;
        (0..n)
            .map(|c| {
                modes.iter().fold(C64::new(0.0, 0.0), |acc, (k, coef)| {
                    let [a, b, d] = coef[c];
                    let phase = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * *k as f64 * x / len);
                    acc + phase * (a + b * s + d * s * s)
                })
            })
            .collect()
    })
    .expect("n values per site")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_gamma_set;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lat() -> Lattice {
        Lattice::new(10, 12, 0.05, 0.2).unwrap()
    }

    #[test]
    fn identity_and_zero_act_as_expected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = lat();
        let psi = random_field(l, 4, &mut rng);
        assert_eq!(MatrixOperator::identity(l, 4).apply(&psi).unwrap(), psi);
        assert_eq!(MatrixOperator::zero(l, 4).apply(&psi).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn constant_matrix_acts_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let l = lat();
        let c = linalg::random_matrix(&mut rng, 3, 3);
        let psi = random_field(l, 3, &mut rng);
        let out = MatrixOperator::constant(l, &c).apply(&psi).unwrap();
        for t in 0..l.nt() {
            for x in 0..l.nx() {
                let expected = &c * psi.site_vector(t, x);
                assert!((out.site_vector(t, x) - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn constant_odot_is_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let l = lat();
        let a = linalg::random_matrix(&mut rng, 4, 4);
        let b = linalg::random_matrix(&mut rng, 4, 4);
        let prod = MatrixOperator::constant(l, &a).odot(&MatrixOperator::constant(l, &b)).unwrap();
        let direct = MatrixOperator::constant(l, &(&a * &b));
        let probes = vec![random_field(l, 4, &mut rng)];
        assert!(prod.action_deviation(&direct, &probes).unwrap() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let l = lat();
        let psi = Field::zeros(l, 3);
        assert!(matches!(
            MatrixOperator::identity(l, 4).apply(&psi),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
        assert!(MatrixOperator::identity(l, 4).odot(&MatrixOperator::identity(l, 3)).is_err());
    }

    #[test]
    fn entries_are_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let l = lat();
        let coef = random_field(l, 1, &mut rng).component(0);
        let e = OperatorEntry::difference(l, Axis::Time)
            .compose(&OperatorEntry::multiply(&coef))
            .unwrap()
            .add(&OperatorEntry::difference(l, Axis::Space))
            .unwrap();
        let f = random_field(l, 1, &mut rng).component(0);
        let g = random_field(l, 1, &mut rng).component(0);
        let (alpha, beta) = (linalg::random_scalar(&mut rng), linalg::random_scalar(&mut rng));
        let lhs = e.apply(&f.scale(alpha).add(&g.scale(beta)).unwrap()).unwrap();
        let rhs = e.apply(&f).unwrap().scale(alpha).add(&e.apply(&g).unwrap().scale(beta)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12 * lhs.max_abs());
    }

    #[test]
    fn adjacent_multiplications_merge() {
        let l = lat();
        let f = ScalarField::from_fn(l, |t, x| C64::new(1.0 + t, x));
        let g = ScalarField::from_fn(l, |t, x| C64::new(x, 2.0 - t));
        let fg = OperatorEntry::multiply(&f).compose(&OperatorEntry::multiply(&g)).unwrap();
        assert_eq!(fg.term_count(), 1);
        assert_eq!(fg.terms[0].factors.len(), 1);
        let zero = ScalarField::zeros(l);
        assert!(OperatorEntry::multiply(&zero).is_zero());
    }

    #[test]
    fn frame_connection_of_constant_frame_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l = lat();
        let m = linalg::random_matrix(&mut rng, 4, 4) + linalg::identity(4) * C64::new(3.0, 0.0);
        let frame = FrameMatrixField::new(MatrixField::constant(l, &m)).unwrap();
        for mu in 0..4 {
            assert!(frame_connection(&frame, mu, Units::default()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn singular_frame_is_rejected() {
        let l = lat();
        let mut mats = vec![linalg::identity(2); l.sites()];
        mats[l.index(3, 4)] = CMatrix::zeros(2, 2);
        let f = MatrixField::new(l, mats).unwrap();
        assert!(matches!(FrameMatrixField::new(f), Err(Error::SingularFrame { t: 3, x: 4 })));
        let mut mats = vec![linalg::identity(2); l.sites()];
        mats[0] = CMatrix::from_diagonal(&crate::CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1e-8, 0.0)]));
        let f = MatrixField::new(l, mats).unwrap();
        assert!(matches!(FrameMatrixField::new(f), Err(Error::IllConditionedFrame { .. })));
    }

    #[test]
    fn identity_frame_dirac_matrix_equals_conventional_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let l = lat();
        let gamma = build_gamma_set();
        let pot = PotentialField::preset("wave(0.3, 1.0)", l, 0.7, Units::default()).unwrap();
        let framed = dirac_operator_matrix(&gamma, &FrameMatrixField::identity(l, 4), &pot, 1.3).unwrap();
        let plain = dirac_operator(&gamma, &pot, 1.3);
        let probes: Vec<Field> = (0..3).map(|_| random_field(l, 4, &mut rng)).collect();
        assert!(framed.action_deviation(&plain, &probes).unwrap() < 1e-14);
        let zero = Field::zeros(l, 4);
        assert_eq!(framed.apply(&zero).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn collecting_terms_keeps_the_action() {
        let l = lat();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m1 = random_smooth_field(l, 1, &mut rng).component(0);
        let m2 = random_smooth_field(l, 1, &mut rng).component(0);
        let inner = OperatorEntry::multiply(&m2).compose(&OperatorEntry::difference(l, Axis::Space)).unwrap();
        let raw = OperatorEntry::multiply(&m1)
            .compose(&inner)
            .unwrap()
            .add(&inner.scale(C64::new(0.5, -1.0)))
            .unwrap()
            .add(&OperatorEntry::constant(l, C64::new(2.0, 0.0)))
            .unwrap()
            .add(&OperatorEntry::multiply(&m1))
            .unwrap();
        let collected = OperatorEntry { lattice: l, terms: collect_terms(raw.terms.clone()) };
        assert_eq!(raw.term_count(), 4);
        assert_eq!(collected.term_count(), 2);
        let f = random_smooth_field(l, 1, &mut rng).component(0);
        let d = raw.apply(&f).unwrap().sub(&collected.apply(&f).unwrap()).unwrap().max_abs();
        assert!(d < 1e-14 * raw.apply(&f).unwrap().max_abs());
    }
}
