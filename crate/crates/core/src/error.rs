use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("{}self-loop on node {node}", at(.line))]
    SelfLoop { line: Option<usize>, node: usize },

    #[error("{}duplicate edge {u}-{v}", at(.line))]
    DuplicateEdge {
        line: Option<usize>,
        u: usize,
        v: usize,
    },

    #[error("{}edge {u}-{v} has non-positive or non-finite weight {weight}", at(.line))]
    NonPositiveWeight {
        line: Option<usize>,
        u: usize,
        v: usize,
        weight: f64,
    },

    #[error("{}node {node} out of range for n={n}", at(.line))]
    NodeOutOfRange {
        line: Option<usize>,
        node: usize,
        n: usize,
    },

    #[error("graph is disconnected: node {unreachable} unreachable from node 0 ({components} components)")]
    Disconnected {
        components: usize,
        unreachable: usize,
    },

    #[error("graph needs at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },

    #[error("invalid leader set: {0}")]
    InvalidLeaderSet(String),

    #[error("leader gain must be finite and positive, got {0}")]
    InvalidGain(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error(
        "Laplacian is ill-conditioned or disconnected: lambda_2 = {lambda2:e} <= tolerance {tol:e}"
    )]
    IllConditioned { lambda2: f64, tol: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("search needs {required} evaluations, budget is {budget}; try the greedy method")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("no connected graph after {attempts} attempts")]
    RetriesExhausted { attempts: usize },

    #[error("n/m must be an integer for uniform cycle placement (n={n}, m={m})")]
    NotUniform { n: usize, m: usize },

    #[error("graph is not a {expected}")]
    TopologyMismatch { expected: String },

    #[error("unstable time step: dt={dt} but dt * lambda_max must be < 2 (need dt < {bound})")]
    Unstable { dt: f64, bound: f64 },

    #[error("simulation diverged at step {step}")]
    Diverged { step: u64 },
}

fn at(line: &Option<usize>) -> String {
    match line {
        Some(l) => format!("line {l}: "),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
