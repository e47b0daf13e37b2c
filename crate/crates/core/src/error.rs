use thiserror::Error;

/// Errors raised by the numerical routines and the rate-design solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{what}: argument {value} is outside the domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The function does not change sign on the supplied bracket.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// An iterative routine ran out of iterations before converging.
    #[error("{what}: no convergence after {iterations} iterations")]
    MaxIter { what: &'static str, iterations: usize },

    /// The objective or constraint function returned NaN or an infinity.
    #[error("function value at {x} is not finite ({fx})")]
    NonFinite { x: f64, fx: f64 },

    /// A design constraint is outside the feasible range of the problem.
    #[error("{constraint} = {value} is infeasible; feasible range is {range}")]
    Infeasible {
        constraint: &'static str,
        value: f64,
        range: String,
    },

    /// A root that the design relies on could not be located.
    #[error("root not found: {0}")]
    RootNotFound(String),

    /// Solver or sweep settings violate their invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
