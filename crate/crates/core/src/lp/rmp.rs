//! Restricted master problem over path columns.

use std::collections::HashSet;

use log::debug;

use crate::cuts::{lmsri_coefficient, Cut};
use crate::duals::DualPrices;
use crate::instance::Instance;
use crate::lp::simplex::{LpProblem, LpStatus, Row, RowKind, Simplex};
use crate::route::Path;

/// Largest row violation accepted from a warm-started solve.
const RESIDUAL_TOL: f64 = 1e-9;

/// Solution of the LP relaxation of the restricted master.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    /// Value per pool column.
    pub z: Vec<f64>,
    /// Value per artificial column.
    pub artificial: Vec<f64>,
    pub duals: DualPrices,
}

impl LpSolution {
    pub fn artificial_active(&self) -> bool {
        self.artificial.iter().any(|&a| a > 1e-7)
    }

    /// Indices of columns with positive value.
    pub fn support(&self) -> Vec<usize> {
        (0..self.z.len()).filter(|&j| self.z[j] > 1e-7).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RmpModel {
    pub columns: Vec<Path>,
    pub cuts: Vec<Cut>,
    pub penalty: f64,
    depots: Vec<usize>,
    tasks: Vec<usize>,
    /// Row of each node's task or start row; depots also have an end row.
    start_row: Vec<usize>,
    task_row: Vec<usize>,
    end_row: Vec<usize>,
    v_start: Vec<f64>,
    v_end: Vec<f64>,
    n_nodes: usize,
    keys: HashSet<(Vec<usize>, Vec<u64>)>,
    warm: Option<Simplex<f64>>,
}

impl RmpModel {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let mut start_row = vec![usize::MAX; n];
        let mut end_row = vec![usize::MAX; n];
        let mut task_row = vec![usize::MAX; n];
        let nd = inst.depots.len();
        for (k, &d) in inst.depots.iter().enumerate() {
            start_row[d] = k;
            end_row[d] = nd + k;
        }
        for (k, &t) in inst.tasks.iter().enumerate() {
            task_row[t] = 2 * nd + k;
        }
        RmpModel {
            columns: Vec::new(),
            cuts: Vec::new(),
            penalty: 10.0 * inst.total_arc_cost(),
            depots: inst.depots.clone(),
            tasks: inst.tasks.clone(),
            start_row,
            task_row,
            end_row,
            v_start: inst
                .depots
                .iter()
                .map(|&d| inst.v_start[d] as f64)
                .collect(),
            v_end: inst.depots.iter().map(|&d| inst.v_end[d] as f64).collect(),
            n_nodes: n,
            keys: HashSet::new(),
            warm: None,
        }
    }

    pub fn n_rows(&self) -> usize {
        2 * self.depots.len() + self.tasks.len() + self.cuts.len()
    }

    fn n_base_rows(&self) -> usize {
        2 * self.depots.len() + self.tasks.len()
    }

    /// Artificial columns cover every start, end and task row.
    pub fn n_artificial(&self) -> usize {
        self.n_base_rows()
    }

    /// Sparse coefficients of a path column.
    pub fn coefficients(&self, p: &Path) -> Vec<(usize, f64)> {
        let mut c = vec![
            (self.start_row[p.start()], 1.0),
            (self.end_row[p.end()], 1.0),
        ];
        for &n in &p.nodes {
            let r = self.task_row[n];
            if r != usize::MAX {
                match c.iter_mut().find(|(i, _)| *i == r) {
                    Some(e) => e.1 += 1.0,
                    None => c.push((r, 1.0)),
                }
            }
        }
        let base = self.n_base_rows();
        for (q, cut) in self.cuts.iter().enumerate() {
            let a = lmsri_coefficient(&p.nodes, cut);
            if a > 0 {
                c.push((base + q, a as f64));
            }
        }
        c
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.keys.contains(&p.key())
    }

    /// Adds columns not already present; returns how many were added.
    pub fn add_columns(&mut self, paths: impl IntoIterator<Item = Path>) -> usize {
        let mut added = 0;
        for p in paths {
            if !self.keys.insert(p.key()) {
                continue;
            }
            if self.warm.is_some() {
                let coefs = self.coefficients(&p);
                self.warm.as_mut().unwrap().add_column(p.cost, &coefs);
            }
            self.columns.push(p);
            added += 1;
        }
        added
    }

    pub fn add_cut_row(&mut self, cut: Cut) {
        self.cuts.push(cut);
        self.warm = None;
    }

    /// Keeps only the columns satisfying `keep`.
    pub fn retain_columns(&mut self, mut keep: impl FnMut(&Path) -> bool) {
        let before = self.columns.len();
        self.columns.retain(|p| keep(p));
        if self.columns.len() != before {
            self.keys = self.columns.iter().map(|p| p.key()).collect();
            self.warm = None;
        }
    }

    /// The LP over artificials (first) and columns, plus optional extra rows.
    pub fn problem(&self, extra: &[Row<f64>]) -> LpProblem<f64> {
        let na = self.n_artificial();
        let mut rows: Vec<Row<f64>> = Vec::with_capacity(self.n_rows() + extra.len());
        for k in 0..self.depots.len() {
            rows.push(Row {
                coefs: vec![(k, 1.0)],
                kind: RowKind::Eq,
                rhs: self.v_start[k],
            });
        }
        for k in 0..self.depots.len() {
            let r = self.depots.len() + k;
            rows.push(Row {
                coefs: vec![(r, 1.0)],
                kind: RowKind::Ge,
                rhs: self.v_end[k],
            });
        }
        for k in 0..self.tasks.len() {
            let r = 2 * self.depots.len() + k;
            rows.push(Row {
                coefs: vec![(r, 1.0)],
                kind: RowKind::Eq,
                rhs: 1.0,
            });
        }
        for _ in &self.cuts {
            rows.push(Row {
                coefs: Vec::new(),
                kind: RowKind::Le,
                rhs: 1.0,
            });
        }
        let mut objective = vec![self.penalty; na];
        for (j, p) in self.columns.iter().enumerate() {
            objective.push(p.cost);
            for (r, a) in self.coefficients(p) {
                rows[r].coefs.push((na + j, a));
            }
        }
        rows.extend(extra.iter().cloned());
        LpProblem { objective, rows }
    }

    /// Solves the LP relaxation, warm-starting when only columns were added.
    pub fn solve_lp(&mut self) -> LpSolution {
        if self.warm.is_none() {
            self.warm = Some(Simplex::new(&self.problem(&[])));
        }
        let res = self.warm.as_mut().unwrap().solve();
        if res.status != LpStatus::Optimal {
            self.warm = None;
        }
        let sol = self.solution_from(res.status, res.objective, &res.x, &res.duals);
        if sol.status != LpStatus::Optimal || self.primal_residual(&sol) <= RESIDUAL_TOL {
            return sol;
        }
        // Long warm-start chains can settle on a slightly infeasible basis.
        debug!(
            "warm basis drifted ({:.1e}); solving from scratch",
            self.primal_residual(&sol)
        );
        let mut cold = Simplex::new(&self.problem(&[]));
        let res = cold.solve();
        self.warm = (res.status == LpStatus::Optimal).then_some(cold);
        self.solution_from(res.status, res.objective, &res.x, &res.duals)
    }

    pub(crate) fn solution_from(
        &self,
        status: LpStatus,
        objective: f64,
        x: &[f64],
        y: &[f64],
    ) -> LpSolution {
        let na = self.n_artificial();
        let mut duals = DualPrices::zeros(self.n_nodes, self.cuts.len());
        for (k, &d) in self.depots.iter().enumerate() {
            duals.kappa[d] = y[k];
            duals.mu[d] = y[self.depots.len() + k];
        }
        for &t in &self.tasks {
            duals.nu[t] = y[self.task_row[t]];
        }
        let base = self.n_base_rows();
        for q in 0..self.cuts.len() {
            duals.lambda[q] = y[base + q];
        }
        LpSolution {
            status,
            objective,
            artificial: x[..na].to_vec(),
            z: x[na..na + self.columns.len()].to_vec(),
            duals,
        }
    }

    /// Largest violation of any row by `sol`.
    pub fn primal_residual(&self, sol: &LpSolution) -> f64 {
        let p = self.problem(&[]);
        let mut x = sol.artificial.clone();
        x.extend(&sol.z);
        let mut worst: f64 = x.iter().map(|v| (-v).max(0.0)).fold(0.0, f64::max);
        for r in &p.rows {
            let lhs: f64 = r.coefs.iter().map(|(j, a)| a * x[*j]).sum();
            let v = match r.kind {
                RowKind::Eq => (lhs - r.rhs).abs(),
                RowKind::Ge => (r.rhs - lhs).max(0.0),
                RowKind::Le => (lhs - r.rhs).max(0.0),
            };
            worst = worst.max(v);
        }
        worst
    }

    /// Dual objective `Σ v_start κ + Σ v_end μ + Σ ν + Σ λ`.
    pub fn dual_objective(&self, duals: &DualPrices) -> f64 {
        let mut v = 0.0;
        for (k, &d) in self.depots.iter().enumerate() {
            v += self.v_start[k] * duals.kappa[d] + self.v_end[k] * duals.mu[d];
        }
        v += self.tasks.iter().map(|&t| duals.nu[t]).sum::<f64>();
        v + duals.lambda.iter().sum::<f64>()
    }
}
