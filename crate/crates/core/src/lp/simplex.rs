//! Dense revised simplex over any [`Scalar`].
//!
//! Two phases with internal artificials, Dantzig pricing that falls back to
//! Bland's rule after a run of degenerate pivots, and periodic
//! refactorization of the basis inverse for floating types.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row<S> {
    pub coefs: Vec<(usize, S)>,
    pub kind: RowKind,
    pub rhs: S,
}

/// `min c·x` subject to the rows and `x ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem<S> {
    pub objective: Vec<S>,
    pub rows: Vec<Row<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult<S> {
    pub status: LpStatus,
    pub x: Vec<S>,
    pub objective: S,
    /// One dual per row, with the sign convention of the original row.
    pub duals: Vec<S>,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

/// Solver state that can be re-solved after appending columns.
#[derive(Clone, Debug)]
pub struct Simplex<S: Scalar> {
    m: usize,
    cols: Vec<Vec<S>>,
    cost: Vec<S>,
    kind: Vec<ColKind>,
    /// Structural index of each column, if structural.
    structural: Vec<Option<usize>>,
    n_structural: usize,
    rhs: Vec<S>,
    flipped: Vec<bool>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<S>>,
    xb: Vec<S>,
    phase_one_done: bool,
    pub max_iterations: usize,
    iterations: usize,
    /// Pivots applied to `binv` since it was last rebuilt; persists across warm solves.
    stale_pivots: usize,
}

const DEGENERATE_RUN: usize = 30;
const REFACTOR_EVERY: usize = 64;

impl<S: Scalar> Simplex<S> {
    pub fn new(p: &LpProblem<S>) -> Self {
        let m = p.rows.len();
        let mut sp = Simplex {
            m,
            cols: Vec::new(),
            cost: Vec::new(),
            kind: Vec::new(),
            structural: Vec::new(),
            n_structural: 0,
            rhs: Vec::with_capacity(m),
            flipped: Vec::with_capacity(m),
            basis: vec![usize::MAX; m],
            in_basis: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            phase_one_done: false,
            max_iterations: 50_000,
            iterations: 0,
            stale_pivots: 0,
        };
        for r in &p.rows {
            let flip = r.rhs < S::zero();
            sp.flipped.push(flip);
            sp.rhs
                .push(if flip { -r.rhs.clone() } else { r.rhs.clone() });
        }
        let mut dense = vec![vec![S::zero(); m]; p.objective.len()];
        for (i, r) in p.rows.iter().enumerate() {
            for (j, a) in &r.coefs {
                let v = if sp.flipped[i] { -a.clone() } else { a.clone() };
                dense[*j][i] = dense[*j][i].clone() + v;
            }
        }
        for (j, col) in dense.into_iter().enumerate() {
            sp.push_col(col, p.objective[j].clone(), ColKind::Structural);
        }
        // Slack (≤) or surplus (≥) per inequality row; artificial where no
        // slack can start basic.
        for (i, r) in p.rows.iter().enumerate() {
            let kind = match (r.kind, sp.flipped[i]) {
                (RowKind::Eq, _) => None,
                (RowKind::Le, false) | (RowKind::Ge, true) => Some(S::one()),
                _ => Some(-S::one()),
            };
            if let Some(sign) = kind {
                let mut col = vec![S::zero(); m];
                col[i] = sign.clone();
                let j = sp.push_col(col, S::zero(), ColKind::Slack);
                if sign > S::zero() {
                    sp.basis[i] = j;
                }
            }
        }
        for i in 0..m {
            if sp.basis[i] == usize::MAX {
                let mut col = vec![S::zero(); m];
                col[i] = S::one();
                let j = sp.push_col(col, S::zero(), ColKind::Artificial);
                sp.basis[i] = j;
            }
        }
        sp.in_basis = vec![false; sp.cols.len()];
        for &j in &sp.basis {
            sp.in_basis[j] = true;
        }
        sp.binv = identity(m);
        sp.xb = sp.rhs.clone();
        sp.phase_one_done = !sp.kind.iter().any(|k| *k == ColKind::Artificial);
        sp
    }

    fn push_col(&mut self, col: Vec<S>, cost: S, kind: ColKind) -> usize {
        self.cols.push(col);
        self.cost.push(cost);
        self.kind.push(kind);
        if kind == ColKind::Structural {
            self.structural.push(Some(self.n_structural));
            self.n_structural += 1;
        } else {
            self.structural.push(None);
        }
        self.in_basis.push(false);
        self.cols.len() - 1
    }

    /// Appends a structural variable; the current basis stays valid.
    pub fn add_column(&mut self, cost: S, coefs: &[(usize, S)]) -> usize {
        let mut col = vec![S::zero(); self.m];
        for (i, a) in coefs {
            let v = if self.flipped[*i] {
                -a.clone()
            } else {
                a.clone()
            };
            col[*i] = col[*i].clone() + v;
        }
        self.push_col(col, cost, ColKind::Structural);
        self.n_structural - 1
    }

    pub fn n_structural(&self) -> usize {
        self.n_structural
    }

    pub fn solve(&mut self) -> LpResult<S> {
        self.iterations = 0;
        if !self.phase_one_done {
            let phase_cost: Vec<S> = self
                .kind
                .iter()
                .map(|k| {
                    if *k == ColKind::Artificial {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
                .collect();
            let st = self.iterate(&phase_cost, true);
            if st != LpStatus::Optimal {
                return self.result(st);
            }
            let infeas = self
                .basis
                .iter()
                .zip(&self.xb)
                .filter(|(j, _)| self.kind[**j] == ColKind::Artificial)
                .fold(S::zero(), |acc, (_, x)| acc + x.clone());
            if infeas.is_pos() {
                return self.result(LpStatus::Infeasible);
            }
            self.drive_out_artificials();
            self.phase_one_done = true;
        }
        let cost = self.cost.clone();
        let st = self.iterate(&cost, false);
        self.result(st)
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.kind[self.basis[r]] != ColKind::Artificial {
                continue;
            }
            let candidate = (0..self.cols.len()).find(|&j| {
                !self.in_basis[j] && self.kind[j] != ColKind::Artificial && {
                    let a = dot(&self.binv[r], &self.cols[j]);
                    a.is_pos() || a.is_neg()
                }
            });
            if let Some(j) = candidate {
                let alpha = self.ftran(j);
                self.pivot(r, j, &alpha);
            }
        }
    }

    fn ftran(&self, j: usize) -> Vec<S> {
        self.binv
            .iter()
            .map(|row| dot(row, &self.cols[j]))
            .collect()
    }

    fn duals_for(&self, cost: &[S]) -> Vec<S> {
        let mut y = vec![S::zero(); self.m];
        for (r, &bj) in self.basis.iter().enumerate() {
            let cb = &cost[bj];
            if cb.is_zero() {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = yi.clone() + cb.clone() * self.binv[r][i].clone();
            }
        }
        y
    }

    fn iterate(&mut self, cost: &[S], phase_one: bool) -> LpStatus {
        let mut degenerate_run = 0;
        loop {
            if self.iterations >= self.max_iterations {
                return LpStatus::IterationLimit;
            }
            let bland = degenerate_run >= DEGENERATE_RUN;
            let y = self.duals_for(cost);
            let mut entering = None;
            let mut best = S::zero();
            for j in 0..self.cols.len() {
                if self.in_basis[j] || (!phase_one && self.kind[j] == ColKind::Artificial) {
                    continue;
                }
                let d = cost[j].clone() - dot(&y, &self.cols[j]);
                if d.is_neg() {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    if entering.is_none() || d < best {
                        best = d;
                        entering = Some(j);
                    }
                }
            }
            let Some(q) = entering else {
                // Confirm optimality on a freshly rebuilt inverse.
                if S::tolerance().is_pos() && self.stale_pivots > 0 {
                    self.refactor();
                    continue;
                }
                return LpStatus::Optimal;
            };
            let alpha = self.ftran(q);
            let mut leave: Option<(usize, S)> = None;
            for r in 0..self.m {
                let a = &alpha[r];
                let artificial_at_zero =
                    !phase_one && self.kind[self.basis[r]] == ColKind::Artificial;
                if artificial_at_zero && (a.is_pos() || a.is_neg()) {
                    leave = Some((r, S::zero()));
                    break;
                }
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.xb[r].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => {
                        if ratio.approx_eq(lv) {
                            if bland {
                                self.basis[r] < self.basis[*lr]
                            } else {
                                a.abs() > alpha[*lr].abs()
                            }
                        } else {
                            ratio < *lv
                        }
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, step)) = leave else {
                return LpStatus::Unbounded;
            };
            if step.is_pos() {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }
            self.pivot(r, q, &alpha);
            self.iterations += 1;
            self.stale_pivots += 1;
            if S::tolerance().is_pos() && self.stale_pivots >= REFACTOR_EVERY {
                self.refactor();
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[S]) {
        let piv = alpha[r].clone();
        for v in self.binv[r].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        self.xb[r] = self.xb[r].clone() / piv;
        let prow = self.binv[r].clone();
        let px = self.xb[r].clone();
        for i in 0..self.m {
            if i == r || alpha[i].is_zero() {
                continue;
            }
            let f = alpha[i].clone();
            for (v, p) in self.binv[i].iter_mut().zip(&prow) {
                *v = v.clone() - f.clone() * p.clone();
            }
            self.xb[i] = self.xb[i].clone() - f * px.clone();
            if self.xb[i].approx_zero() && self.xb[i] < S::zero() {
                self.xb[i] = S::zero();
            }
        }
        self.in_basis[self.basis[r]] = false;
        self.basis[r] = q;
        self.in_basis[q] = true;
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination.
    fn refactor(&mut self) {
        self.stale_pivots = 0;
        let m = self.m;
        let mut a: Vec<Vec<S>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|r| self.cols[self.basis[r]][i].clone())
                    .collect()
            })
            .collect();
        let mut inv = identity::<S>(m);
        for c in 0..m {
            let p = (c..m)
                .max_by(|&x, &y| a[x][c].abs().partial_cmp(&a[y][c].abs()).unwrap())
                .unwrap();
            if a[p][c].is_zero() {
                return;
            }
            a.swap(c, p);
            inv.swap(c, p);
            let piv = a[c][c].clone();
            for k in 0..m {
                a[c][k] = a[c][k].clone() / piv.clone();
                inv[c][k] = inv[c][k].clone() / piv.clone();
            }
            for i in 0..m {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for k in 0..m {
                        a[i][k] = a[i][k].clone() - f.clone() * a[c][k].clone();
                        inv[i][k] = inv[i][k].clone() - f.clone() * inv[c][k].clone();
                    }
                }
            }
        }
        self.binv = inv;
        self.xb = self.binv.iter().map(|row| dot(row, &self.rhs)).collect();
        for x in self.xb.iter_mut() {
            if x.approx_zero() {
                *x = S::zero();
            }
        }
    }

    fn result(&self, status: LpStatus) -> LpResult<S> {
        let mut x = vec![S::zero(); self.n_structural];
        for (r, &j) in self.basis.iter().enumerate() {
            if let Some(s) = self.structural[j] {
                x[s] = self.xb[r].clone();
            }
        }
        let objective = (0..self.cols.len())
            .filter_map(|j| self.structural[j].map(|s| self.cost[j].clone() * x[s].clone()))
            .fold(S::zero(), |a, b| a + b);
        let y = self.duals_for(&self.cost);
        let duals = y
            .into_iter()
            .zip(&self.flipped)
            .map(|(v, &f)| if f { -v } else { v })
            .collect();
        LpResult {
            status,
            x,
            objective,
            duals,
            iterations: self.iterations,
        }
    }
}

fn identity<S: Scalar>(m: usize) -> Vec<Vec<S>> {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|k| if i == k { S::one() } else { S::zero() })
                .collect()
        })
        .collect()
}

#[inline]
fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut s = S::zero();
    for (x, y) in a.iter().zip(b) {
        if !y.is_zero() && !x.is_zero() {
            s = s + x.clone() * y.clone();
        }
    }
    s
}

/// Solves an LP from scratch.
pub fn solve_lp<S: Scalar>(p: &LpProblem<S>) -> LpResult<S> {
    Simplex::new(p).solve()
}
