//! Practical benchmarks, experiment grids and CSV reporting.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::charge::find_charge_sequence;
use crate::colgen::{adaptive_solve, ElementarityMode, Engine, SolveConfig, SolveReport};
use crate::instance::{generate_instance, GenError, GenParams, Instance};
use crate::pricing::{PricingError, Variant};
use crate::route::{Path, EPS};

/// Outcome of routing with the battery ignored, then repairing with charger detours.
#[derive(Clone, Debug)]
pub struct RouteThenCharge {
    /// Total cost of the repaired routes; infinite if any repair failed.
    pub cost: f64,
    pub routes: Vec<Path>,
    pub failed: usize,
    pub stage1: SolveReport,
}

impl RouteThenCharge {
    pub fn is_complete(&self) -> bool {
        self.failed == 0 && self.stage1.ip_value.is_finite()
    }
}

/// Inserts charger detours wherever the next move would strand the machine.
///
/// Each stop charges for the rest of the route, up to a full battery, so the
/// route makes as few detours as possible.
pub fn repair_route(nodes: &[usize], inst: &Instance) -> Option<Path> {
    let cap = inst.battery;
    let hubs: Vec<usize> = (0..inst.n()).filter(|&h| inst.is_hub(h)).collect();
    let reserve = |v: usize| {
        if inst.is_hub(v) {
            0.0
        } else {
            hubs.iter()
                .map(|&h| inst.b(v, h))
                .fold(f64::INFINITY, f64::min)
        }
    };
    // Consumption from each node of the route to its end.
    let mut rest = vec![0.0; nodes.len()];
    for k in (0..nodes.len() - 1).rev() {
        rest[k] = rest[k + 1] + inst.b(nodes[k], nodes[k + 1]);
    }
    let mut out = vec![nodes[0]];
    let mut charging = vec![0.0];
    let mut q = cap;
    for (k, &v) in nodes.iter().enumerate().skip(1) {
        let u = *out.last().unwrap();
        if q - inst.b(u, v) - reserve(v) < -EPS {
            // Shortest detour through a charger we can still reach and leave.
            let c = inst
                .chargers
                .iter()
                .copied()
                .filter(|&c| {
                    c != u && q - inst.b(u, c) >= -EPS && inst.b(c, v) + reserve(v) <= cap + EPS
                })
                .min_by(|&a, &b| {
                    let detour = |c: usize| inst.t(u, c) + inst.t(c, v);
                    detour(a).total_cmp(&detour(b))
                })?;
            let qc = q - inst.b(u, c);
            let need = inst.b(c, v) + rest[k].max(reserve(v));
            let tau = (need - qc).min(cap - qc).max(0.0);
            out.push(c);
            charging.push(tau);
            q = qc + tau;
        }
        q -= inst.b(*out.last().unwrap(), v);
        out.push(v);
        charging.push(0.0);
    }
    let p = Path::new(out, charging, inst);
    p.is_feasible(inst).then_some(p)
}

/// Same instance with a battery large enough never to matter.
pub fn unbounded_battery(inst: &Instance) -> Instance {
    let mut relaxed = inst.clone();
    let total: f64 = (0..inst.n())
        .flat_map(|i| (0..inst.n()).map(move |j| (i, j)))
        .map(|(i, j)| inst.b(i, j))
        .sum();
    relaxed.battery = total + 1.0;
    relaxed
}

/// Sequential baseline: battery-free routing, then charger insertion.
pub fn route_then_charge(
    inst: &Instance,
    cfg: &SolveConfig,
) -> Result<RouteThenCharge, PricingError> {
    let stage1 = adaptive_solve(&unbounded_battery(inst), cfg)?;
    let mut routes = Vec::new();
    let mut failed = 0;
    for r in &stage1.routes {
        match repair_route(&r.nodes, inst) {
            Some(p) => routes.push(p),
            None => failed += 1,
        }
    }
    let cost = if failed == 0 && stage1.ip_value.is_finite() {
        routes.iter().map(|p| p.cost).sum()
    } else {
        f64::INFINITY
    };
    Ok(RouteThenCharge {
        cost,
        routes,
        failed,
        stage1,
    })
}

/// Integrated solve seeded with the baseline routes, so it can only improve on them.
pub fn integrated_vs_sequential(
    inst: &Instance,
    cfg: &SolveConfig,
) -> Result<(SolveReport, RouteThenCharge), PricingError> {
    let rtc = route_then_charge(inst, cfg)?;
    let mut seeded = cfg.clone();
    if rtc.is_complete() {
        seeded.seed_solution = Some(rtc.routes.clone());
    }
    Ok((adaptive_solve(inst, &seeded)?, rtc))
}

/// Charging costs of heterogeneous integration against a homogeneous schedule.
#[derive(Clone, Debug, Serialize)]
pub struct HetComparison {
    /// Integrated heterogeneous solve.
    pub het_total: f64,
    pub het_charging: f64,
    /// Routes and charging times from the averaged-cost solve, priced at true costs.
    pub hom_total_repriced: f64,
    pub hom_charging_repriced: f64,
    /// The same routes with charging re-optimized at true costs.
    pub hom_charging_rescheduled: f64,
}

/// Reschedules a path's charging optimally at its own stations' costs.
pub fn reschedule(p: &Path, inst: &Instance) -> Path {
    let subs = p.subpaths(inst);
    if subs.len() <= 1 {
        return p.clone();
    }
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
    let delta: Vec<f64> = join.iter().map(|&k| inst.delta[p.nodes[k]]).collect();
    let plan = find_charge_sequence(&b, &delta, &inst.battery).expect("feasible path");
    let mut charging = vec![0.0; p.nodes.len()];
    for (&k, &t) in join.iter().zip(&plan.tau) {
        charging[k] = t;
    }
    Path::new(p.nodes.clone(), charging, inst)
}

pub fn het_vs_hom(inst: &Instance, cfg: &SolveConfig) -> Result<HetComparison, PricingError> {
    let hom = inst.with_uniform_delta(inst.mean_delta());
    let mut hcfg = cfg.clone();
    hcfg.variant = Variant::Hom;
    let hom_report = adaptive_solve(&hom, &hcfg)?;
    let repriced: Vec<Path> = hom_report
        .routes
        .iter()
        .map(|p| Path::new(p.nodes.clone(), p.charging.clone(), inst))
        .collect();
    let rescheduled: Vec<Path> = repriced.iter().map(|p| reschedule(p, inst)).collect();
    let mut het_cfg = cfg.clone();
    het_cfg.variant = Variant::Het;
    if hom_report.ip_value.is_finite() {
        het_cfg.seed_solution = Some(rescheduled.clone());
    }
    let het = adaptive_solve(inst, &het_cfg)?;
    Ok(HetComparison {
        het_total: het.ip_value,
        het_charging: het.charging_cost(inst),
        hom_total_repriced: repriced.iter().map(|p| p.cost).sum(),
        hom_charging_repriced: repriced.iter().map(|p| p.charging_cost(inst)).sum(),
        hom_charging_rescheduled: rescheduled.iter().map(|p| p.charging_cost(inst)).sum(),
    })
}

/// Parameter grid for generated instances.
#[derive(Clone, Debug)]
pub struct Grid {
    pub tasks: Vec<usize>,
    pub tb_ratios: Vec<f64>,
    pub levels: Vec<usize>,
    pub seeds: Vec<u64>,
    pub area: (u32, u32),
    /// Machines per instance; one per task when unset.
    pub fleet: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct GridInstance {
    pub id: String,
    pub params: GenParams,
    pub instance: Instance,
}

pub fn instance_id(p: &GenParams) -> String {
    let fleet = p.fleet.map(|k| format!("_K{k}")).unwrap_or_default();
    format!(
        "t{}_a{}x{}_tb{}_D{}{fleet}_s{}",
        p.n_tasks, p.area_width, p.area_height, p.t_over_b, p.n_levels, p.seed
    )
}

pub fn grid_instances(grid: &Grid) -> Result<Vec<GridInstance>, GenError> {
    let mut out = Vec::new();
    for &n_tasks in &grid.tasks {
        for &t_over_b in &grid.tb_ratios {
            for &n_levels in &grid.levels {
                for &seed in &grid.seeds {
                    let params = GenParams {
                        n_tasks,
                        area_width: grid.area.0,
                        area_height: grid.area.1,
                        t_over_b,
                        n_levels,
                        seed,
                        fleet: grid.fleet,
                        ..GenParams::default()
                    };
                    let instance = generate_instance(&params)?;
                    out.push(GridInstance {
                        id: instance_id(&params),
                        params,
                        instance,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// One result line of a solve run.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct RunRow {
    pub instance_id: String,
    pub seed: u64,
    pub n_tasks: usize,
    pub area: String,
    pub T_over_B: f64,
    pub D: usize,
    pub mode: String,
    pub lp_bound: f64,
    pub ip_value: f64,
    pub gap: Option<f64>,
    pub iterations: usize,
    pub ng_expansions: usize,
    pub cuts: usize,
    pub columns: usize,
    pub pricing_ms: Option<f64>,
    pub total_ms: Option<f64>,
}

pub fn mode_label(cfg: &SolveConfig) -> String {
    let v = match cfg.variant {
        Variant::Hom => "hom",
        Variant::Het => "het",
    };
    let e = match cfg.mode {
        ElementarityMode::None => "none",
        ElementarityMode::Ng => "ng",
        ElementarityMode::Adaptive => "adaptive",
        ElementarityMode::Full => "full",
    };
    let p = match cfg.engine {
        Engine::Bilevel => "bilevel",
        Engine::Pathwise => "pathwise",
    };
    format!("{v}-{e}-cuts_{}-{p}", if cfg.cuts { "on" } else { "off" })
}

pub fn run_row(
    gi: &GridInstance,
    report: &SolveReport,
    cfg: &SolveConfig,
    timings: bool,
) -> RunRow {
    let p = &gi.params;
    RunRow {
        instance_id: gi.id.clone(),
        seed: p.seed,
        n_tasks: p.n_tasks,
        area: format!("{}x{}", p.area_width, p.area_height),
        T_over_B: p.t_over_b,
        D: gi.instance.levels.len(),
        mode: mode_label(cfg),
        lp_bound: report.lp_bound,
        ip_value: report.ip_value,
        gap: report.gap,
        iterations: report.iterations,
        ng_expansions: report.ng_expansions,
        cuts: report.cuts.len(),
        columns: report.columns,
        pricing_ms: timings.then_some(report.pricing_ms),
        total_ms: timings.then_some(report.total_ms),
    }
}

/// Solves every grid instance; rows come back in grid order.
pub fn batch(
    instances: &[GridInstance],
    cfg: &SolveConfig,
    timings: bool,
) -> Result<Vec<RunRow>, PricingError> {
    instances
        .par_iter()
        .map(|gi| {
            let cfg = SolveConfig {
                variant: variant_for(&gi.instance, cfg.variant),
                ..cfg.clone()
            };
            adaptive_solve(&gi.instance, &cfg).map(|r| run_row(gi, &r, &cfg, timings))
        })
        .collect()
}

/// Falls back to the heterogeneous variant when the instance needs it.
pub fn variant_for(inst: &Instance, wanted: Variant) -> Variant {
    if inst.levels.len() > 1 {
        Variant::Het
    } else {
        wanted
    }
}

/// Bi-level against path-level pricing on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct CompareRow {
    pub instance_id: String,
    pub seed: u64,
    pub n_tasks: usize,
    pub T_over_B: f64,
    pub bound_bilevel: f64,
    pub bound_pathwise: f64,
    pub bound_delta: f64,
    pub ms_bilevel: f64,
    pub ms_pathwise: f64,
    pub time_ratio: f64,
}

/// Relaxation bounds and wall times of both pricing engines.
pub fn compare(gi: &GridInstance, cfg: &SolveConfig) -> Result<CompareRow, PricingError> {
    let run = |engine| {
        let cfg = SolveConfig {
            engine,
            variant: Variant::Hom,
            integer: false,
            ..cfg.clone()
        };
        let t = Instant::now();
        adaptive_solve(&gi.instance, &cfg).map(|r| (r.lp_bound, t.elapsed().as_secs_f64() * 1e3))
    };
    let (bb, tb) = run(Engine::Bilevel)?;
    let (bp, tp) = run(Engine::Pathwise)?;
    Ok(CompareRow {
        instance_id: gi.id.clone(),
        seed: gi.params.seed,
        n_tasks: gi.params.n_tasks,
        T_over_B: gi.params.t_over_b,
        bound_bilevel: bb,
        bound_pathwise: bp,
        bound_delta: (bb - bp).abs(),
        ms_bilevel: tb,
        ms_pathwise: tp,
        time_ratio: tb / tp,
    })
}

pub fn write_csv<T: Serialize>(out: impl Write, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
