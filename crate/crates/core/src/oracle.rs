//! Exhaustive ground-truth solvers for tiny instances.

use std::collections::HashMap;

use thiserror::Error;

use crate::charge::charge_lp_oracle;
use crate::cuts::{lmsri_coefficient, Cut};
use crate::duals::DualPrices;
use crate::instance::Instance;
use crate::lp::bnb::{restore_integrality, BnbOptions, BnbStatus};
use crate::lp::rmp::RmpModel;
use crate::lp::LpStatus;
use crate::ng::NgNeighborhood;
use crate::route::{is_elementary, split_subpaths, Path, EPS};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("enumeration exceeded {0} search nodes")]
    Limit(usize),
    #[error("exact master ended with status {0:?}")]
    Master(String),
}

#[derive(Clone, Debug)]
pub struct EnumLimits {
    /// Maximum DFS nodes visited.
    pub max_nodes: usize,
    pub elementary: bool,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_nodes: 5_000_000,
            elementary: true,
        }
    }
}

/// Every feasible depot-to-depot node sequence, with LP-optimal charging.
///
/// Includes the single-depot idle path. Sequences are pruned by time only
/// through valid lower bounds, so nothing feasible is skipped.
pub fn enumerate_sequences(inst: &Instance, limits: &EnumLimits) -> Result<Vec<Path>, OracleError> {
    let to_depot: Vec<f64> = (0..inst.n())
        .map(|i| {
            inst.depots
                .iter()
                .map(|&d| inst.t(i, d))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut out = Vec::new();
    let mut visited = 0usize;
    for &d in &inst.depots {
        out.push(Path::plain(vec![d], inst));
        let mut stack = vec![d];
        dfs(
            inst,
            limits,
            &to_depot,
            &mut stack,
            0.0,
            0.0,
            0.0,
            &mut visited,
            &mut out,
        )?;
    }
    Ok(out)
}

/// `time` and `used` cover the whole prefix; `open` is the charge used since the last hub.
#[allow(clippy::too_many_arguments)]
fn dfs(
    inst: &Instance,
    limits: &EnumLimits,
    to_depot: &[f64],
    stack: &mut Vec<usize>,
    time: f64,
    used: f64,
    open: f64,
    visited: &mut usize,
    out: &mut Vec<Path>,
) -> Result<(), OracleError> {
    *visited += 1;
    if *visited > limits.max_nodes {
        return Err(OracleError::Limit(limits.max_nodes));
    }
    let last = *stack.last().unwrap();
    for next in 0..inst.n() {
        if next == last || (limits.elementary && inst.is_task(next) && stack.contains(&next)) {
            continue;
        }
        let b = inst.b(last, next);
        let open2 = open + b;
        if open2 > inst.battery + EPS {
            continue;
        }
        let t2 = time + inst.t(last, next);
        let used2 = used + b;
        // Any completion needs at least this much charging and travel.
        let min_charge = (used2 - inst.battery).max(0.0);
        if t2 + min_charge + to_depot[next] > inst.horizon + EPS {
            continue;
        }
        stack.push(next);
        if inst.is_depot(next) {
            if let Some(p) = optimal_charging(stack, inst) {
                out.push(p);
            }
        } else {
            let open3 = if inst.is_charger(next) { 0.0 } else { open2 };
            dfs(
                inst, limits, to_depot, stack, t2, used2, open3, visited, out,
            )?;
        }
        stack.pop();
    }
    Ok(())
}

/// Cheapest charging of a fixed node sequence, if any is feasible.
pub fn optimal_charging(nodes: &[usize], inst: &Instance) -> Option<Path> {
    let subs = split_subpaths(nodes, inst);
    let b: Vec<f64> = subs
        .iter()
        .map(|s| s.windows(2).map(|w| inst.b(w[0], w[1])).sum())
        .collect();
    let mut join = Vec::new();
    let mut pos = 0;
    for s in &subs[..subs.len() - 1] {
        pos += s.len() - 1;
        join.push(pos);
    }
    let delta: Vec<f64> = join.iter().map(|&p| inst.delta[nodes[p]]).collect();
    let plan = charge_lp_oracle(&b, &delta, &inst.battery).ok()?;
    let mut charging = vec![0.0; nodes.len()];
    for (&p, &t) in join.iter().zip(&plan.tau) {
        charging[p] = t.max(0.0);
    }
    let path = Path::new(nodes.to_vec(), charging, inst);
    path.is_feasible(inst).then_some(path)
}

/// Minimum reduced cost over all enumerated paths.
pub fn min_reduced_cost(paths: &[Path], duals: &DualPrices, cuts: &[Cut], inst: &Instance) -> f64 {
    paths
        .iter()
        .map(|p| p.reduced_cost(duals, cuts, inst))
        .fold(f64::INFINITY, f64::min)
}

/// Which paths the exact master may use.
#[derive(Clone, Debug)]
pub enum OracleMode {
    None,
    Ng(NgNeighborhood),
    Elementary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactBounds {
    pub lp: f64,
    pub ip: f64,
    pub columns: usize,
}

/// Keeps the cheapest path per distinct master coefficient vector.
pub fn dedupe_by_coefficients(paths: Vec<Path>, model: &RmpModel) -> Vec<Path> {
    let mut best: HashMap<Vec<(usize, u64)>, Path> = HashMap::new();
    for p in paths {
        let key: Vec<(usize, u64)> = model
            .coefficients(&p)
            .into_iter()
            .map(|(r, v)| (r, v.to_bits()))
            .collect();
        match best.get(&key) {
            Some(q) if q.cost <= p.cost => {}
            _ => {
                best.insert(key, p);
            }
        }
    }
    let mut out: Vec<Path> = best.into_values().collect();
    out.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    out
}

/// LP and IP optima of the full master over every enumerated path.
pub fn solve_exact_tiny(
    inst: &Instance,
    mode: &OracleMode,
    cuts: &[Cut],
) -> Result<ExactBounds, OracleError> {
    let limits = EnumLimits {
        elementary: matches!(mode, OracleMode::Elementary),
        ..Default::default()
    };
    let mut paths = enumerate_sequences(inst, &limits)?;
    if let OracleMode::Ng(ng) = mode {
        paths.retain(|p| ng.accepts(&p.nodes));
    }
    let mut model = RmpModel::new(inst);
    for c in cuts {
        model.add_cut_row(c.clone());
    }
    let paths = dedupe_by_coefficients(paths, &model);
    let columns = paths.len();
    model.add_columns(paths);
    let lp = model.solve_lp();
    if lp.status != LpStatus::Optimal {
        return Err(OracleError::Master(format!("{:?}", lp.status)));
    }
    // Paths serving a task twice never fit an integer partition.
    let mut ip_model = model.clone();
    ip_model.retain_columns(|p| is_elementary(&p.nodes, inst));
    let ip = restore_integrality(
        &ip_model,
        &BnbOptions {
            node_limit: 200_000,
            ..Default::default()
        },
    );
    if ip.status != BnbStatus::Optimal {
        return Err(OracleError::Master(format!("{:?}", ip.status)));
    }
    Ok(ExactBounds {
        lp: lp.objective,
        ip: ip.objective,
        columns,
    })
}

/// Cut left-hand side of an integer combination of paths.
pub fn cut_lhs(paths: &[(&Path, u32)], cut: &Cut) -> u32 {
    paths
        .iter()
        .map(|(p, k)| lmsri_coefficient(&p.nodes, cut) * k)
        .sum()
}
