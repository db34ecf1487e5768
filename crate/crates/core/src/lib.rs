//! Column-generation solver for the electric routing-scheduling problem.

pub mod bench;
pub mod bitset;
pub mod charge;
pub mod colgen;
pub mod cuts;
pub mod duals;
pub mod instance;
pub mod lp;
pub mod ng;
pub mod oracle;
pub mod pricing;
pub mod route;
pub mod scalar;
pub mod separation;

pub use num_rational::BigRational;

/// Floating scalar used by instances, pricing and the master problem.
pub type Real = f64;
/// Exact scalar for oracle computations.
pub type Exact = BigRational;

pub type ChargePlanF64 = charge::ChargePlan<f64>;
pub type ChargePlanF32 = charge::ChargePlan<f32>;
pub type ChargePlanExact = charge::ChargePlan<Exact>;
pub type RebalanceF64 = charge::RebalanceState<f64>;
pub type RebalanceExact = charge::RebalanceState<Exact>;
pub type LpProblemF64 = lp::LpProblem<f64>;
pub type LpProblemExact = lp::LpProblem<Exact>;
pub type SimplexF64 = lp::Simplex<f64>;
pub type SimplexExact = lp::Simplex<Exact>;
