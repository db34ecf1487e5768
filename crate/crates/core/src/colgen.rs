//! Column generation and the adaptive ng/cut loop around it.

use std::time::{Duration, Instant};

use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

use crate::cuts::Cut;
use crate::instance::Instance;
use crate::lp::bnb::{restore_integrality, BnbOptions, BnbStatus, IntegerSolution};
use crate::lp::rmp::{LpSolution, RmpModel};
use crate::lp::LpStatus;
use crate::ng::{expand_with_cycles, NgNeighborhood};
use crate::oracle::optimal_charging;
use crate::pricing::{price, price_pathwise, Elementarity, PricingConfig, PricingError, Variant};
use crate::route::{is_elementary, Path};
use crate::separation::{separate_lmsri, DEFAULT_MAX_CUTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Bilevel,
    Pathwise,
}

/// How elementarity is enforced across the outer loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementarityMode {
    None,
    /// Fixed initial ng-neighborhoods.
    Ng,
    /// ng-neighborhoods grown from cycles until the support is elementary.
    Adaptive,
    Full,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub variant: Variant,
    pub engine: Engine,
    pub mode: ElementarityMode,
    pub cuts: bool,
    pub max_iterations: usize,
    pub time_limit: Duration,
    pub max_cut_rounds: usize,
    pub max_cuts_per_round: usize,
    pub max_columns: usize,
    pub parallel: bool,
    pub bnb_node_limit: usize,
    /// Run branch and bound after the relaxation converges.
    pub integer: bool,
    /// Known feasible routes (idle machines omitted), pooled and used as the starting incumbent.
    pub seed_solution: Option<Vec<Path>>,
}

impl SolveConfig {
    pub fn new(variant: Variant, mode: ElementarityMode) -> Self {
        SolveConfig {
            variant,
            engine: Engine::Bilevel,
            mode,
            cuts: false,
            max_iterations: 10_000,
            time_limit: Duration::from_secs(3600),
            max_cut_rounds: 50,
            max_cuts_per_round: DEFAULT_MAX_CUTS,
            max_columns: 200,
            parallel: true,
            bnb_node_limit: 20_000,
            integer: true,
            seed_solution: None,
        }
    }

    /// Variant matching the instance's charging costs.
    pub fn for_instance(inst: &Instance, mode: ElementarityMode) -> Self {
        Self::new(
            if inst.is_homogeneous() {
                Variant::Hom
            } else {
                Variant::Het
            },
            mode,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Pricing found nothing and the outer loop has no further step.
    Converged,
    IterationLimit,
    TimeLimit,
    /// The relaxation needs artificial columns: no feasible fleet plan exists.
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct ColgenOutcome {
    pub solution: LpSolution,
    pub iterations: usize,
    pub columns_added: usize,
    pub pricing_time: Duration,
    pub status: Termination,
    /// LP objective after each master solve.
    pub trajectory: Vec<f64>,
}

/// Runs pricing until no negative column exists or a limit is hit.
pub fn column_generation(
    inst: &Instance,
    model: &mut RmpModel,
    cfg: &SolveConfig,
    elementarity: &Elementarity,
    deadline: Instant,
    iteration_budget: usize,
) -> Result<ColgenOutcome, PricingError> {
    let start = Instant::now();
    let mut pcfg = PricingConfig::new(cfg.variant, elementarity.clone());
    pcfg.max_columns = cfg.max_columns;
    pcfg.parallel = cfg.parallel;
    pcfg.cuts = model.cuts.clone();
    let mut pricing_time = Duration::ZERO;
    let mut trajectory = Vec::new();
    let mut added_total = 0;
    let mut it = 0;
    loop {
        let sol = model.solve_lp();
        trajectory.push(sol.objective);
        if sol.status != LpStatus::Optimal {
            warn!("master LP ended with {:?}", sol.status);
        }
        let status = if it >= iteration_budget {
            Some(Termination::IterationLimit)
        } else if Instant::now() >= deadline {
            Some(Termination::TimeLimit)
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(ColgenOutcome {
                solution: sol,
                iterations: it,
                columns_added: added_total,
                pricing_time,
                status,
                trajectory,
            });
        }
        it += 1;
        let t0 = Instant::now();
        let res = match cfg.engine {
            Engine::Bilevel => price(inst, &sol.duals, &pcfg)?,
            Engine::Pathwise => price_pathwise(inst, &sol.duals, &pcfg)?,
        };
        pricing_time += t0.elapsed();
        let cols = res.negative(&pcfg);
        let added = model.add_columns(cols.into_iter().map(|c| c.path));
        added_total += added;
        info!(
            "iter {it} bound {:.6} added {added} labels {} min_rc {:.3e} elapsed {:.2}s",
            sol.objective,
            res.stats.subpath_labels + res.stats.sequence_labels,
            res.min_reduced_cost,
            start.elapsed().as_secs_f64()
        );
        if added == 0 {
            if res.min_reduced_cost < -pcfg.threshold {
                warn!("negative columns already pooled; stopping");
            }
            let status = if sol.artificial_active() {
                Termination::Infeasible
            } else {
                Termination::Converged
            };
            return Ok(ColgenOutcome {
                solution: sol,
                iterations: it,
                columns_added: added_total,
                pricing_time,
                status,
                trajectory,
            });
        }
    }
}

/// Direct single-task round trips, detouring through a charger when needed, and idle paths.
pub fn initial_columns(inst: &Instance) -> Vec<Path> {
    let mut out: Vec<Path> = inst
        .depots
        .iter()
        .map(|&d| Path::plain(vec![d], inst))
        .collect();
    let nearest = |from: usize, set: &[usize]| {
        set.iter()
            .copied()
            .min_by(|&a, &b| inst.t(from, a).total_cmp(&inst.t(from, b)))
    };
    for &d in inst.depots.iter().filter(|&&d| inst.v_start[d] > 0) {
        for &t in &inst.tasks {
            let Some(back) = nearest(t, &inst.depots) else {
                continue;
            };
            let direct = Path::plain(vec![d, t, back], inst);
            if direct.is_feasible(inst) {
                out.push(direct);
                continue;
            }
            if let Some(c) = nearest(t, &inst.chargers) {
                let back = nearest(c, &inst.depots).unwrap();
                if let Some(p) = optimal_charging(&[d, t, c, back], inst) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Grows neighborhoods from the cycles of every non-elementary supported path.
pub fn expand_ng(ng: &mut NgNeighborhood, support: &[&Path], inst: &Instance) -> bool {
    let mut changed = false;
    for p in support {
        if !is_elementary(&p.nodes, inst) {
            changed |= expand_with_cycles(ng, &p.nodes, inst);
        }
    }
    changed
}

/// Relative gap `(ip − lp) / ip`; `None` when the integer value is not usable.
pub fn compute_gap(lp: f64, ip: f64, artificial_used: bool) -> Option<f64> {
    if artificial_used || !ip.is_finite() || ip < lp - 1e-6 {
        return None;
    }
    if ip.abs() < 1e-12 {
        return Some(0.0);
    }
    Some(((ip - lp) / ip).max(0.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: Termination,
    pub lp_bound: f64,
    pub ip_value: f64,
    pub gap: Option<f64>,
    pub ip_optimal: bool,
    pub iterations: usize,
    pub ng_expansions: usize,
    pub cut_rounds: usize,
    pub cuts: Vec<Cut>,
    pub columns: usize,
    pub pricing_ms: f64,
    pub total_ms: f64,
    /// Converged LP bound after each outer step.
    pub bound_history: Vec<f64>,
    /// Total neighborhood size after each expansion.
    pub ng_sizes: Vec<usize>,
    pub routes: Vec<Path>,
    /// Whether the final relaxation used only elementary paths.
    pub elementary_support: bool,
}

impl SolveReport {
    pub fn charging_cost(&self, inst: &Instance) -> f64 {
        self.routes.iter().map(|p| p.charging_cost(inst)).sum()
    }
}

fn support_paths<'a>(model: &'a RmpModel, sol: &LpSolution) -> Vec<(&'a Path, f64)> {
    sol.support()
        .into_iter()
        .map(|j| (&model.columns[j], sol.z[j]))
        .collect()
}

/// Column counts of `routes` plus idle paths for the unused machines.
fn incumbent_counts(
    model: &RmpModel,
    routes: &[Path],
    inst: &Instance,
) -> Option<Vec<(usize, u32)>> {
    let index = |p: &Path| model.columns.iter().position(|c| c.key() == p.key());
    let mut counts: Vec<(usize, u32)> = Vec::new();
    let mut bump = |j: usize| match counts.iter_mut().find(|c| c.0 == j) {
        Some(c) => c.1 += 1,
        None => counts.push((j, 1)),
    };
    let mut left: Vec<i64> = inst.v_start.iter().map(|&v| v as i64).collect();
    for r in routes {
        bump(index(r)?);
        left[r.start()] -= 1;
    }
    for &d in &inst.depots {
        if left[d] < 0 {
            return None;
        }
        let idle = index(&Path::plain(vec![d], inst))?;
        for _ in 0..left[d] {
            bump(idle);
        }
    }
    Some(counts)
}

/// Column generation inside neighborhood expansion and cut rounds, then branch and bound.
pub fn adaptive_solve(inst: &Instance, cfg: &SolveConfig) -> Result<SolveReport, PricingError> {
    let start = Instant::now();
    let deadline = start + cfg.time_limit;
    let mut model = RmpModel::new(inst);
    model.add_columns(initial_columns(inst));
    if let Some(seed) = &cfg.seed_solution {
        model.add_columns(seed.iter().cloned());
    }
    let mut ng = match cfg.mode {
        ElementarityMode::Full => NgNeighborhood::full(inst),
        _ => NgNeighborhood::nearest(inst),
    };
    let elementarity = |ng: &NgNeighborhood| match cfg.mode {
        ElementarityMode::None => Elementarity::None,
        ElementarityMode::Full => Elementarity::Full,
        _ => Elementarity::Ng(ng.clone()),
    };
    let (mut iterations, mut ng_expansions, mut cut_rounds) = (0, 0, 0);
    let mut pricing_time = Duration::ZERO;
    let mut bound_history = Vec::new();
    let mut ng_sizes = vec![ng.total_size()];
    let outcome = loop {
        let budget = cfg.max_iterations.saturating_sub(iterations);
        let out = column_generation(inst, &mut model, cfg, &elementarity(&ng), deadline, budget)?;
        iterations += out.iterations;
        pricing_time += out.pricing_time;
        if out.status != Termination::Converged {
            break out;
        }
        bound_history.push(out.solution.objective);
        let support = support_paths(&model, &out.solution);
        if cfg.mode == ElementarityMode::Adaptive {
            let paths: Vec<&Path> = support.iter().map(|s| s.0).collect();
            if expand_ng(&mut ng, &paths, inst) {
                ng_expansions += 1;
                ng_sizes.push(ng.total_size());
                info!(
                    "ng expansion {ng_expansions}: total size {}",
                    ng.total_size()
                );
                model.retain_columns(|p| ng.accepts(&p.nodes));
                continue;
            }
        }
        let elementary = support.iter().all(|(p, _)| is_elementary(&p.nodes, inst));
        if cfg.cuts && elementary && cut_rounds < cfg.max_cut_rounds {
            let new = separate_lmsri(&support, &model.cuts, inst, cfg.max_cuts_per_round);
            if !new.is_empty() {
                cut_rounds += 1;
                info!("cut round {cut_rounds}: {} cuts", new.len());
                for c in new {
                    model.add_cut_row(c);
                }
                continue;
            }
        }
        break out;
    };
    let sol = &outcome.solution;
    let elementary_support = support_paths(&model, sol)
        .iter()
        .all(|(p, _)| is_elementary(&p.nodes, inst));
    let lp_bound = if outcome.status == Termination::Converged {
        sol.objective
    } else {
        f64::NEG_INFINITY
    };

    let remaining = deadline
        .saturating_duration_since(Instant::now())
        .max(Duration::from_secs(1));
    let incumbent = cfg
        .seed_solution
        .as_ref()
        .and_then(|routes| incumbent_counts(&model, routes, inst));
    let ip = if cfg.integer {
        restore_integrality(
            &model,
            &BnbOptions {
                node_limit: cfg.bnb_node_limit,
                time_limit: remaining,
                incumbent,
            },
        )
    } else {
        IntegerSolution {
            status: BnbStatus::Failed,
            objective: f64::INFINITY,
            columns: Vec::new(),
            artificial_used: false,
            nodes: 0,
        }
    };
    debug!("branch and bound: {:?} after {} nodes", ip.status, ip.nodes);
    let routes: Vec<Path> = ip
        .columns
        .iter()
        .flat_map(|&(j, k)| std::iter::repeat(model.columns[j].clone()).take(k as usize))
        .filter(|p| p.nodes.len() > 1)
        .collect();
    let ip_value = if ip.status == BnbStatus::Failed {
        f64::INFINITY
    } else {
        ip.objective
    };
    let status = if outcome.status == Termination::Converged
        && (sol.artificial_active() || ip.artificial_used)
    {
        Termination::Infeasible
    } else {
        outcome.status
    };
    let report = SolveReport {
        status,
        lp_bound,
        ip_value,
        gap: compute_gap(lp_bound, ip_value, ip.artificial_used),
        ip_optimal: ip.is_optimal(),
        iterations,
        ng_expansions,
        cut_rounds,
        cuts: model.cuts.clone(),
        columns: model.columns.len(),
        pricing_ms: pricing_time.as_secs_f64() * 1e3,
        total_ms: start.elapsed().as_secs_f64() * 1e3,
        bound_history,
        ng_sizes,
        routes,
        elementary_support,
    };
    info!(
        "done: {:?} lp {:.6} ip {:.6} gap {:?} iterations {} expansions {} cuts {}",
        report.status,
        report.lp_bound,
        report.ip_value,
        report.gap,
        iterations,
        ng_expansions,
        report.cuts.len()
    );
    Ok(report)
}
