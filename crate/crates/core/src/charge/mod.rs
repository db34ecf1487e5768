//! Charging-time optimization along a fixed sequence of subpaths.
//!
//! Subpath `j` consumes `b[j]`; charger `j` sits between subpaths `j` and
//! `j + 1` and charges `tau[j]` at unit cost `delta[j]`.

mod rebalance;

pub use rebalance::{charging_cost_g, slack_update, RebalanceState};

use thiserror::Error;

use crate::lp::{solve_lp, LpProblem, LpStatus, Row, RowKind};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum ChargeError {
    #[error("subpath {0} needs more charge than the battery holds")]
    Infeasible(usize),
    #[error("expected {expected} charging costs, got {got}")]
    Shape { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChargePlan<S> {
    pub tau: Vec<S>,
    pub cost: S,
    pub total: S,
    pub end_charge: S,
}

impl<S: Scalar> ChargePlan<S> {
    fn build(tau: Vec<S>, b: &[S], delta: &[S], cap: &S) -> Self {
        let total = tau.iter().fold(S::zero(), |a, t| a + t.clone());
        let cost = tau
            .iter()
            .zip(delta)
            .fold(S::zero(), |a, (t, d)| a + t.clone() * d.clone());
        let used = b.iter().fold(S::zero(), |a, x| a + x.clone());
        let end_charge = cap.clone() - used + total.clone();
        ChargePlan {
            tau,
            cost,
            total,
            end_charge,
        }
    }

    /// End time given the subpath durations.
    pub fn end_time(&self, t: &[S]) -> S {
        t.iter().fold(self.total.clone(), |a, x| a + x.clone())
    }
}

fn check<S: Scalar>(b: &[S], delta_len: usize, cap: &S) -> Result<(), ChargeError> {
    if b.len() != delta_len + 1 && !(b.is_empty() && delta_len == 0) {
        return Err(ChargeError::Shape {
            expected: b.len().saturating_sub(1),
            got: delta_len,
        });
    }
    if let Some(j) = b.iter().position(|x| x > cap) {
        return Err(ChargeError::Infeasible(j));
    }
    Ok(())
}

/// Least-cost charging plan by divide and conquer on the cheapest station.
pub fn find_charge_sequence<S: Scalar>(
    b: &[S],
    delta: &[S],
    cap: &S,
) -> Result<ChargePlan<S>, ChargeError> {
    check(b, delta.len(), cap)?;
    let m = b.len();
    let mut tau = vec![S::zero(); m.saturating_sub(1)];
    // Segments [lo, hi) of subpaths, solved independently.
    let mut stack = vec![(0, m)];
    while let Some((lo, hi)) = stack.pop() {
        if hi - lo <= 1 {
            continue;
        }
        let sum = b[lo..hi].iter().fold(S::zero(), |a, x| a + x.clone());
        let excess = (sum - cap.clone()).pos_part();
        if excess.is_zero() {
            continue;
        }
        let mut ell = lo;
        for k in lo..hi - 1 {
            if delta[k] <= delta[ell] {
                ell = k;
            }
        }
        let prefix = b[lo..=ell].iter().fold(S::zero(), |a, x| a + x.clone());
        tau[ell] = S::min_of(&prefix, &excess) - (prefix - cap.clone()).pos_part();
        stack.push((ell + 1, hi));
        stack.push((lo, ell + 1));
    }
    Ok(ChargePlan::build(tau, b, delta, cap))
}

/// Ground truth: the charging LP solved with the simplex backend.
pub fn charge_lp_oracle<S: Scalar>(
    b: &[S],
    delta: &[S],
    cap: &S,
) -> Result<ChargePlan<S>, ChargeError> {
    check(b, delta.len(), cap)?;
    let m = b.len();
    if m <= 1 {
        return Ok(ChargePlan::build(Vec::new(), b, delta, cap));
    }
    let mut rows = Vec::new();
    let mut prefix = S::zero();
    for i in 0..m - 1 {
        prefix = prefix + b[i].clone();
        let coefs: Vec<(usize, S)> = (0..=i).map(|j| (j, S::one())).collect();
        rows.push(Row {
            coefs: coefs.clone(),
            kind: RowKind::Le,
            rhs: prefix.clone(),
        });
        rows.push(Row {
            coefs,
            kind: RowKind::Ge,
            rhs: prefix.clone() + b[i + 1].clone() - cap.clone(),
        });
    }
    let res = solve_lp(&LpProblem {
        objective: delta.to_vec(),
        rows,
    });
    if res.status != LpStatus::Optimal {
        return Err(ChargeError::Infeasible(m - 1));
    }
    Ok(ChargePlan::build(res.x, b, delta, cap))
}

/// Closed-form homogeneous update of a sequence label by one subpath.
///
/// Returns `(rcc, end_time, end_charge)` after charging `[b_s − end_charge]⁺`
/// at the join, or `None` if the subpath alone exceeds the battery.
pub fn extend_hom<S: Scalar>(
    label: (&S, &S, &S),
    sub: (&S, &S, &S),
    delta: &S,
    cap: &S,
) -> Option<(S, S, S)> {
    let (rcc, end_time, end_charge) = label;
    let (rcc_s, t_s, b_s) = sub;
    if b_s > cap {
        return None;
    }
    let tau = (b_s.clone() - end_charge.clone()).pos_part();
    Some((
        rcc.clone() + delta.clone() * tau.clone() + rcc_s.clone(),
        end_time.clone() + tau.clone() + t_s.clone(),
        end_charge.clone() + tau - b_s.clone(),
    ))
}
