pub mod bnb;
pub mod rmp;
pub mod simplex;

pub use simplex::{solve_lp, LpProblem, LpResult, LpStatus, Row, RowKind, Simplex};
