use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lattice mismatch between operands")]
    LatticeMismatch,

    #[error("index {index} out of range (must be < {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("singular frame matrix at site (t={t}, x={x})")]
    SingularFrame { t: usize, x: usize },

    #[error("frame matrix at site (t={t}, x={x}) has condition number {cond:.3e} above bound {bound:.1e}")]
    IllConditionedFrame { t: usize, x: usize, cond: f64, bound: f64 },

    #[error("frame flagged unitary is not unitary at site (t={t}, x={x}): deviation {deviation:.3e}")]
    NonUnitaryFrame { t: usize, x: usize, deviation: f64 },

    #[error("singular matrix in {0}")]
    SingularMatrix(&'static str),

    #[error("Hamiltonian is not Hermitian (deviation {0:.3e})")]
    NonHermitian(f64),

    #[error("the 5-component Klein-Gordon reduction requires m > 0")]
    MasslessReduction,

    #[error("time indices out of order or off the lattice: t0={t0}, t1={t1}, nt={nt}")]
    TimeRange { t0: usize, t1: usize, nt: usize },

    #[error("exact-exponential evolution requires a time-independent Hamiltonian")]
    TimeDependentHamiltonian,

    #[error("full spacetime kernel needs {required} bytes, budget is {budget} bytes")]
    MemoryBudget { required: u64, budget: u64 },

    #[error("kernel family mismatch: {0}")]
    KernelFamily(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("malformed kernel dump: {0}")]
    KernelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
