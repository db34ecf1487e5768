//! Branch and bound over a fixed column pool.

use std::time::{Duration, Instant};

use crate::lp::rmp::RmpModel;
use crate::lp::simplex::{LpStatus, Row, RowKind, Simplex};

#[derive(Clone, Debug)]
pub struct BnbOptions {
    pub node_limit: usize,
    pub time_limit: Duration,
    /// Known integer solution as column counts, used as the starting incumbent.
    pub incumbent: Option<Vec<(usize, u32)>>,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self {
            node_limit: 20_000,
            time_limit: Duration::from_secs(600),
            incumbent: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BnbStatus {
    /// Search tree exhausted: optimal within the pool.
    Optimal,
    /// Limits hit; best solution found is returned.
    LimitReached,
    /// Node limit zero and the rounded LP solution is feasible.
    Heuristic,
    /// No integer solution found.
    Failed,
}

#[derive(Clone, Debug)]
pub struct IntegerSolution {
    pub status: BnbStatus,
    pub objective: f64,
    /// Column index and multiplicity.
    pub columns: Vec<(usize, u32)>,
    pub artificial_used: bool,
    pub nodes: usize,
}

impl IntegerSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == BnbStatus::Optimal
    }
}

const INT_TOL: f64 = 1e-6;

fn is_integral(x: &[f64]) -> bool {
    x.iter().all(|v| (v - v.round()).abs() < INT_TOL)
}

/// Best integer combination of pooled columns.
///
/// Branches on the most fractional column value with `z ≤ ⌊v⌋` / `z ≥ ⌈v⌉`
/// rows, diving on the up branch first.
pub fn restore_integrality(model: &RmpModel, opts: &BnbOptions) -> IntegerSolution {
    let start = Instant::now();
    let na = model.n_artificial();
    let base = model.problem(&[]);
    let cost_of = |x: &[f64]| {
        x.iter()
            .zip(&base.objective)
            .map(|(v, c)| v * c)
            .sum::<f64>()
    };
    let feasible = |x: &[f64]| {
        base.rows.iter().all(|r| {
            let lhs: f64 = r.coefs.iter().map(|(j, a)| a * x[*j]).sum();
            match r.kind {
                RowKind::Eq => (lhs - r.rhs).abs() < INT_TOL,
                RowKind::Ge => lhs > r.rhs - INT_TOL,
                RowKind::Le => lhs < r.rhs + INT_TOL,
            }
        })
    };
    let mut best: Option<(f64, Vec<f64>)> = opts
        .incumbent
        .as_ref()
        .map(|cols| {
            let mut x = vec![0.0; base.objective.len()];
            for &(j, k) in cols {
                x[na + j] += k as f64;
            }
            (cost_of(&x), x)
        })
        .filter(|(_, x)| feasible(x));

    let finish = |best: Option<(f64, Vec<f64>)>, status: BnbStatus, nodes: usize| match best {
        Some((obj, x)) => IntegerSolution {
            status,
            objective: obj,
            columns: (na..x.len())
                .filter(|&j| x[j].round() >= 1.0)
                .map(|j| (j - na, x[j].round() as u32))
                .collect(),
            artificial_used: x[..na].iter().any(|v| *v > INT_TOL),
            nodes,
        },
        None => IntegerSolution {
            status: BnbStatus::Failed,
            objective: f64::INFINITY,
            columns: Vec::new(),
            artificial_used: false,
            nodes,
        },
    };

    if opts.node_limit == 0 {
        let r = Simplex::new(&base).solve();
        if r.status == LpStatus::Optimal {
            let rounded: Vec<f64> = r.x.iter().map(|v| v.round()).collect();
            if feasible(&rounded) && best.as_ref().map_or(true, |(o, _)| cost_of(&rounded) < *o) {
                return finish(Some((cost_of(&rounded), rounded)), BnbStatus::Heuristic, 0);
            }
        }
        let status = if best.is_some() {
            BnbStatus::LimitReached
        } else {
            BnbStatus::Failed
        };
        return finish(best, status, 0);
    }

    let mut stack: Vec<Vec<Row<f64>>> = vec![Vec::new()];
    let mut nodes = 0;
    let mut exhausted = true;
    while let Some(bounds) = stack.pop() {
        if nodes >= opts.node_limit || start.elapsed() > opts.time_limit {
            exhausted = false;
            break;
        }
        nodes += 1;
        let mut p = base.clone();
        p.rows.extend(bounds.iter().cloned());
        let r = Simplex::new(&p).solve();
        if r.status != LpStatus::Optimal {
            continue;
        }
        if let Some((obj, _)) = &best {
            if r.objective >= obj - 1e-9 {
                continue;
            }
        }
        if is_integral(&r.x) {
            let x: Vec<f64> = r.x.iter().map(|v| v.round()).collect();
            best = Some((cost_of(&x), x));
            continue;
        }
        let (j, v) =
            r.x.iter()
                .enumerate()
                .filter(|(_, v)| (*v - v.round()).abs() >= INT_TOL)
                .min_by(|a, b| {
                    let fa = (a.1 - a.1.floor() - 0.5).abs();
                    let fb = (b.1 - b.1.floor() - 0.5).abs();
                    fa.total_cmp(&fb).then(a.0.cmp(&b.0))
                })
                .map(|(j, v)| (j, *v))
                .unwrap();
        let mut down = bounds.clone();
        down.push(Row {
            coefs: vec![(j, 1.0)],
            kind: RowKind::Le,
            rhs: v.floor(),
        });
        let mut up = bounds;
        up.push(Row {
            coefs: vec![(j, 1.0)],
            kind: RowKind::Ge,
            rhs: v.ceil(),
        });
        stack.push(down);
        stack.push(up);
    }
    let status = match (exhausted, best.is_some()) {
        (true, true) => BnbStatus::Optimal,
        (_, false) => BnbStatus::Failed,
        (false, true) => BnbStatus::LimitReached,
    };
    finish(best, status, nodes)
}
