use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("singular jet: constant term is zero")]
    SingularJet,
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("no one-cut solution: continuation exhausted {steps} steps (reached s = {reached})")]
    NoOneCutSolution { steps: usize, reached: f64 },
    #[error("degenerate potential: endpoint Jacobian is singular (det = {det:e})")]
    DegeneratePotential { det: f64 },
    #[error("degenerate point: {0} vanishes")]
    DegeneratePoint(&'static str),
    #[error("outside the one-cut regime: {0}")]
    OutsideOneCut(&'static str),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("census too large: {half_edges} half-edges (limit {limit})")]
    CensusTooLarge { half_edges: usize, limit: usize },
    #[error("evaluation point lies inside the integration contour")]
    Geometry,
    #[error("evaluation point lies on the branch cut")]
    Branch,
    #[error("singular linear system while building coefficient table for k = {0}")]
    SingularSystem(usize),
}
