use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for level k = {k}")]
    IndexOutOfRange { k: u32, index: i64 },

    #[error("weight m = {m} is not a valid weight at level k = {k}")]
    InvalidWeight { k: u32, m: String },

    #[error("representation levels differ: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("point is not on the unit sphere in C^2 (|q|^2 = {norm_sq})")]
    NotUnit { norm_sq: f64 },

    #[error("matrix is not in SU(2): unitarity defect {unitarity}, determinant defect {determinant}")]
    NotSpecialUnitary { unitarity: f64, determinant: f64 },

    #[error("the trivialization u(theta, phi) is undefined at the south pole")]
    SouthPole,

    #[error("loop is degenerate (zero length)")]
    DegenerateLoop,

    #[error("loop is not Bohr-Sommerfeld of order {k}: |hol^k - 1| = {defect}")]
    NotBohrSommerfeld { k: u32, defect: f64 },

    #[error("non-transverse intersection at (s, t) = ({s}, {t}), angle {angle}")]
    NonTransverse { s: f64, t: f64, angle: f64 },

    #[error("Newton refinement did not converge from seed ({s}, {t}); residual {residual}")]
    NewtonDivergence { s: f64, t: f64, residual: f64 },

    #[error("expected exactly {expected} intersections, found {found}")]
    IntersectionCount { expected: usize, found: usize },

    #[error("intersection angles differ: {first} vs {second}")]
    UnequalAngles { first: f64, second: f64 },

    #[error("lune boundary is inconsistent with the loop orientations")]
    LuneOrientation,

    #[error("lune holonomy disagrees with its area: defect {defect}")]
    LuneHolonomy { defect: f64 },

    #[error("integrand magnitude exceeds one: |e^(iS)| = {magnitude} at ({s}, {t})")]
    PhaseGrowth { s: f64, t: f64, magnitude: f64 },

    #[error("degenerate Hessian at ({s}, {t}): eigenvalue magnitude {eigenvalue}")]
    DegenerateHessian { s: f64, t: f64, eigenvalue: f64 },

    #[error("quadrature did not converge within {nodes} nodes; last change {defect}")]
    QuadratureNonConvergence { nodes: usize, defect: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
