//! Paths, subpaths and their feasibility, cost and reduced-cost algebra.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cuts::{lmsri_coefficient, Cut};
use crate::duals::DualPrices;
use crate::instance::Instance;

/// Label comparisons use this absolute tolerance.
pub const EPS: f64 = 1e-9;
/// A column is improving when its reduced cost is below `-RC_THRESHOLD`.
pub const RC_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum ContractError {
    #[error("charging time given at position {0}, which is not a charger")]
    ChargeAtNonCharger(usize),
    #[error("charging vector has length {got}, expected {expected}")]
    ChargeLength { got: usize, expected: usize },
    #[error("cannot extend a completed subpath ending at node {0}")]
    ExtendCompleted(usize),
    #[error("sequence ends at node {seq_end} but subpath starts at {sub_start}")]
    EndpointMismatch { seq_end: usize, sub_start: usize },
}

/// A depot-to-depot route with charging times per visit position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub nodes: Vec<usize>,
    /// `charging[k]` is the charge added at position `k` (zero off chargers).
    pub charging: Vec<f64>,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub charges: Vec<f64>,
    pub feasible: bool,
}

/// Arrival times and charges along a node sequence.
pub fn propagate_time_charge(
    nodes: &[usize],
    charging: &[f64],
    inst: &Instance,
) -> Result<Trajectory, ContractError> {
    if charging.len() != nodes.len() {
        return Err(ContractError::ChargeLength {
            got: charging.len(),
            expected: nodes.len(),
        });
    }
    if let Some(k) = (0..nodes.len()).find(|&k| charging[k] != 0.0 && !inst.is_charger(nodes[k])) {
        return Err(ContractError::ChargeAtNonCharger(k));
    }
    let (big_b, big_t) = (inst.battery, inst.horizon);
    let mut times = vec![0.0];
    let mut charges = vec![big_b];
    for k in 1..nodes.len() {
        let (u, v) = (nodes[k - 1], nodes[k]);
        let tau = charging[k - 1];
        times.push(times[k - 1] + tau + inst.t(u, v));
        charges.push((charges[k - 1] + tau).min(big_b) - inst.b(u, v));
    }
    let feasible = times.iter().all(|&t| (-EPS..=big_t + EPS).contains(&t))
        && charges.iter().all(|&b| (-EPS..=big_b + EPS).contains(&b));
    Ok(Trajectory {
        times,
        charges,
        feasible,
    })
}

pub fn arc_cost(nodes: &[usize], inst: &Instance) -> f64 {
    nodes.windows(2).map(|w| inst.c(w[0], w[1])).sum()
}

pub fn path_cost(nodes: &[usize], charging: &[f64], inst: &Instance) -> f64 {
    arc_cost(nodes, inst)
        + nodes
            .iter()
            .zip(charging)
            .map(|(&n, &tau)| inst.delta[n] * tau)
            .sum::<f64>()
}

/// Number of visits to each node.
pub fn serve_counts(nodes: &[usize], inst: &Instance) -> Vec<u32> {
    let mut g = vec![0; inst.n()];
    for &n in nodes {
        g[n] += 1;
    }
    g
}

/// True when no task is visited twice.
pub fn is_elementary(nodes: &[usize], inst: &Instance) -> bool {
    serve_counts(nodes, inst)
        .iter()
        .enumerate()
        .all(|(i, &c)| c <= 1 || !inst.is_task(i))
}

/// Reduced cost of a path against master duals and active cuts.
pub fn reduced_cost(
    nodes: &[usize],
    cost: f64,
    duals: &DualPrices,
    cuts: &[Cut],
    inst: &Instance,
) -> f64 {
    let (s, e) = (nodes[0], *nodes.last().unwrap());
    let mut rc = cost - duals.kappa[s] - duals.mu[e];
    for &n in nodes {
        if inst.is_task(n) {
            rc -= duals.nu[n];
        }
    }
    for (q, cut) in cuts.iter().enumerate() {
        rc -= duals.cut(q) * lmsri_coefficient(nodes, cut) as f64;
    }
    rc
}

impl Path {
    pub fn new(nodes: Vec<usize>, charging: Vec<f64>, inst: &Instance) -> Self {
        let cost = path_cost(&nodes, &charging, inst);
        Path {
            nodes,
            charging,
            cost,
        }
    }

    /// Path with no charging.
    pub fn plain(nodes: Vec<usize>, inst: &Instance) -> Self {
        let charging = vec![0.0; nodes.len()];
        Self::new(nodes, charging, inst)
    }

    pub fn start(&self) -> usize {
        self.nodes[0]
    }

    pub fn end(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    pub fn trajectory(&self, inst: &Instance) -> Trajectory {
        propagate_time_charge(&self.nodes, &self.charging, inst).expect("well-formed path")
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        let inner = if self.nodes.len() > 2 {
            &self.nodes[1..self.nodes.len() - 1]
        } else {
            &[][..]
        };
        let well_formed = inst.is_depot(self.start())
            && inst.is_depot(self.end())
            && inner.iter().all(|&n| !inst.is_depot(n))
            && self.nodes.windows(2).all(|w| w[0] != w[1]);
        well_formed && self.trajectory(inst).feasible
    }

    pub fn reduced_cost(&self, duals: &DualPrices, cuts: &[Cut], inst: &Instance) -> f64 {
        reduced_cost(&self.nodes, self.cost, duals, cuts, inst)
    }

    pub fn charging_cost(&self, inst: &Instance) -> f64 {
        self.nodes
            .iter()
            .zip(&self.charging)
            .map(|(&n, &t)| inst.delta[n] * t)
            .sum()
    }

    /// Identity key: node sequence plus exact charging times.
    pub fn key(&self) -> (Vec<usize>, Vec<u64>) {
        (
            self.nodes.clone(),
            self.charging.iter().map(|t| t.to_bits()).collect(),
        )
    }

    /// Splits the node sequence at depots and chargers.
    pub fn subpaths(&self, inst: &Instance) -> Vec<Vec<usize>> {
        split_subpaths(&self.nodes, inst)
    }
}

pub fn split_subpaths(nodes: &[usize], inst: &Instance) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![nodes[0]];
    for &n in &nodes[1..] {
        cur.push(n);
        if inst.is_hub(n) {
            out.push(std::mem::replace(&mut cur, vec![n]));
        }
    }
    out
}

/// Resource state of a partial subpath: reduced-cost contribution, time and battery use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubpathState {
    pub start: usize,
    pub end: usize,
    pub len: usize,
    pub rcc: f64,
    pub time: f64,
    pub charge: f64,
    pub cost: f64,
}

impl SubpathState {
    /// Single-node subpath at a depot or charger.
    pub fn single(node: usize, duals: &DualPrices, inst: &Instance) -> Self {
        let rcc = if inst.is_depot(node) {
            -duals.kappa[node]
        } else {
            0.0
        };
        SubpathState {
            start: node,
            end: node,
            len: 0,
            rcc,
            time: 0.0,
            charge: 0.0,
            cost: 0.0,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.len > 0
    }

    /// Appends arc `(end, next)`; cut terms are handled by the caller.
    pub fn extend(
        &self,
        next: usize,
        duals: &DualPrices,
        inst: &Instance,
    ) -> Result<Self, ContractError> {
        if self.len > 0 && inst.is_hub(self.end) {
            return Err(ContractError::ExtendCompleted(self.end));
        }
        let c = inst.c(self.end, next);
        let mut rcc = self.rcc + c;
        if inst.is_task(next) {
            rcc -= duals.nu[next];
        } else if inst.is_depot(next) {
            rcc -= duals.mu[next];
        }
        Ok(SubpathState {
            start: self.start,
            end: next,
            len: self.len + 1,
            rcc,
            time: self.time + inst.t(self.end, next),
            charge: self.charge + inst.b(self.end, next),
            cost: self.cost + c,
        })
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.time <= inst.horizon + EPS && self.charge <= inst.battery + EPS
    }
}

/// From-scratch reduced-cost contribution of a subpath without cut terms.
pub fn subpath_rcc(nodes: &[usize], duals: &DualPrices, inst: &Instance) -> f64 {
    let mut rcc = arc_cost(nodes, inst);
    for &n in &nodes[1..] {
        if inst.is_task(n) {
            rcc -= duals.nu[n];
        }
    }
    if inst.is_depot(nodes[0]) {
        rcc -= duals.kappa[nodes[0]];
    }
    if nodes.len() > 1 && inst.is_depot(*nodes.last().unwrap()) {
        rcc -= duals.mu[*nodes.last().unwrap()];
    }
    rcc
}
