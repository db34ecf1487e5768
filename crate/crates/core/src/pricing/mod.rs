//! Bi-level labeling pricing: subpaths between hubs, then charger-joined sequences.

mod engine;
pub mod labels;
mod pathwise;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charge::find_charge_sequence;
use crate::cuts::Cut;
use crate::duals::DualPrices;
use crate::instance::Instance;
use crate::ng::NgNeighborhood;
use crate::route::{Path, RC_THRESHOLD};

use engine::{Pool, NO_PARENT};
pub use labels::{
    cut_excess, seq_dominates, seq_dominates_within, sub_dominates, sub_dominates_within,
    PricingContext, SeqLabel, SubLabel, MAX_LEVELS,
};
pub use pathwise::price_pathwise;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Single charging cost.
    Hom,
    /// Several charging-cost levels.
    Het,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Elementarity {
    None,
    Ng(NgNeighborhood),
    Full,
}

#[derive(Clone, Debug)]
pub struct PricingConfig {
    pub variant: Variant,
    pub elementarity: Elementarity,
    /// Active cuts, aligned with `DualPrices::lambda`.
    pub cuts: Vec<Cut>,
    pub max_columns: usize,
    pub threshold: f64,
    pub parallel: bool,
}

impl PricingConfig {
    pub fn new(variant: Variant, elementarity: Elementarity) -> Self {
        PricingConfig {
            variant,
            elementarity,
            cuts: Vec::new(),
            max_columns: 200,
            threshold: RC_THRESHOLD,
            parallel: true,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PricingError {
    #[error("homogeneous pricing on an instance with {0} charging levels")]
    NotHomogeneous(usize),
    #[error("{0} charging levels exceed the supported {MAX_LEVELS}")]
    TooManyLevels(usize),
    #[error("{got} cut duals for {want} cuts")]
    CutDuals { got: usize, want: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PricedColumn {
    pub path: Path,
    pub reduced_cost: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PricingStats {
    pub subpath_labels: usize,
    pub subpaths: usize,
    pub sequence_labels: usize,
    pub complete: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PricingResult {
    /// All non-dominated complete paths, cheapest reduced cost first.
    pub columns: Vec<PricedColumn>,
    pub min_reduced_cost: f64,
    pub stats: PricingStats,
}

impl PricingResult {
    /// Columns worth adding, capped at `cfg.max_columns`.
    pub fn negative(&self, cfg: &PricingConfig) -> Vec<PricedColumn> {
        self.columns
            .iter()
            .filter(|c| c.reduced_cost < -cfg.threshold)
            .take(cfg.max_columns)
            .cloned()
            .collect()
    }
}

pub(crate) fn check_config(
    inst: &Instance,
    duals: &DualPrices,
    cfg: &PricingConfig,
) -> Result<(), PricingError> {
    let d = inst.levels.len();
    if cfg.variant == Variant::Hom && d > 1 {
        return Err(PricingError::NotHomogeneous(d));
    }
    if d > MAX_LEVELS {
        return Err(PricingError::TooManyLevels(d));
    }
    if duals.lambda.len() < cfg.cuts.len() {
        return Err(PricingError::CutDuals {
            got: duals.lambda.len(),
            want: cfg.cuts.len(),
        });
    }
    Ok(())
}

/// Completed subpath with its node sequence.
#[derive(Clone, Debug)]
pub struct Subpath {
    pub nodes: Vec<usize>,
    pub label: SubLabel,
}

/// First level: every non-dominated feasible subpath starting at `hub`.
pub fn subpaths_from(hub: usize, ctx: &PricingContext) -> (Vec<Subpath>, usize) {
    let inst = ctx.inst;
    let dom = |a: &SubLabel, b: &SubLabel| sub_dominates(a, b, ctx);
    let mut pool = Pool::new();
    // The root sits alone so it never masks cycles back to `hub`.
    pool.push(
        SubLabel::single(hub, ctx),
        usize::MAX,
        0.0,
        NO_PARENT,
        hub as u32,
        dom,
    );
    let mut out = Vec::new();
    while let Some(i) = pool.pop() {
        let l = *pool.label(i);
        if l.is_done(inst) {
            let nodes = pool.trace(i).into_iter().map(|x| x as usize).collect();
            out.push(Subpath { nodes, label: l });
            continue;
        }
        for next in 0..inst.n() {
            if let Some(nl) = l.extend(next, ctx) {
                pool.push(nl, next, nl.st.time, i, next as u32, dom);
            }
        }
    }
    (out, pool.len())
}

/// All completed subpaths, grouped by start hub.
pub fn all_subpaths(ctx: &PricingContext) -> (Vec<Vec<Subpath>>, usize) {
    let n = ctx.inst.n();
    let run = |h: usize| {
        if ctx.inst.is_hub(h) {
            subpaths_from(h, ctx)
        } else {
            (Vec::new(), 0)
        }
    };
    let per: Vec<(Vec<Subpath>, usize)> = if ctx.cfg.parallel {
        (0..n).into_par_iter().map(run).collect()
    } else {
        (0..n).map(run).collect()
    };
    let labels = per.iter().map(|p| p.1).sum();
    (per.into_iter().map(|p| p.0).collect(), labels)
}

/// Rebuilds the minimal path of a chain of subpaths.
pub fn assemble_path(chain: &[&Subpath], inst: &Instance) -> Path {
    let mut nodes = chain[0].nodes.clone();
    let mut join_pos = Vec::new();
    for s in &chain[1..] {
        join_pos.push(nodes.len() - 1);
        nodes.extend_from_slice(&s.nodes[1..]);
    }
    let b: Vec<f64> = chain.iter().map(|s| s.label.st.charge).collect();
    let delta: Vec<f64> = join_pos.iter().map(|&p| inst.delta[nodes[p]]).collect();
    let plan = find_charge_sequence(&b, &delta, &inst.battery).expect("feasible sequence");
    let mut charging = vec![0.0; nodes.len()];
    for (&p, &t) in join_pos.iter().zip(&plan.tau) {
        charging[p] = t;
    }
    Path::new(nodes, charging, inst)
}

pub(crate) fn idle_columns(
    inst: &Instance,
    duals: &DualPrices,
    cfg: &PricingConfig,
) -> Vec<PricedColumn> {
    inst.depots
        .iter()
        .map(|&d| {
            let path = Path::plain(vec![d], inst);
            let reduced_cost = path.reduced_cost(duals, &cfg.cuts, inst);
            PricedColumn { path, reduced_cost }
        })
        .collect()
}

pub(crate) fn finish(mut columns: Vec<PricedColumn>, stats: PricingStats) -> PricingResult {
    columns.sort_by(|a, b| a.reduced_cost.total_cmp(&b.reduced_cost));
    let min_reduced_cost = columns.first().map_or(f64::INFINITY, |c| c.reduced_cost);
    PricingResult {
        columns,
        min_reduced_cost,
        stats,
    }
}

/// Bi-level pricing over all non-dominated complete paths.
pub fn price(
    inst: &Instance,
    duals: &DualPrices,
    cfg: &PricingConfig,
) -> Result<PricingResult, PricingError> {
    check_config(inst, duals, cfg)?;
    let ctx = PricingContext::new(inst, duals, cfg);
    let (subs, subpath_labels) = all_subpaths(&ctx);
    let mut stats = PricingStats {
        subpath_labels,
        subpaths: subs.iter().map(Vec::len).sum(),
        ..Default::default()
    };

    let run = |d: usize| -> (Vec<PricedColumn>, usize) {
        let dom = |a: &SeqLabel, b: &SeqLabel| seq_dominates(a, b, &ctx);
        let mut pool: Pool<SeqLabel> = Pool::new();
        for (k, s) in subs[d].iter().enumerate() {
            let l = SeqLabel::seed(&s.label, &ctx);
            pool.push(l, l.end, l.time, NO_PARENT, k as u32, dom);
        }
        let mut done = Vec::new();
        while let Some(i) = pool.pop() {
            let l = *pool.label(i);
            if inst.is_depot(l.end) {
                done.push(i);
                continue;
            }
            for (k, s) in subs[l.end].iter().enumerate() {
                if let Some(nl) = l.join(&s.label, &ctx) {
                    pool.push(nl, nl.end, nl.time, i, k as u32, dom);
                }
            }
        }
        let cols = done
            .into_iter()
            .map(|i| {
                let trace = pool.trace(i);
                let mut hub = d;
                let chain: Vec<&Subpath> = trace
                    .iter()
                    .map(|&k| {
                        let s = &subs[hub][k as usize];
                        hub = s.label.st.end;
                        s
                    })
                    .collect();
                let path = assemble_path(&chain, inst);
                let reduced_cost = path.reduced_cost(duals, &cfg.cuts, inst);
                debug_assert!(
                    (reduced_cost - pool.label(i).rcc).abs() < 1e-6,
                    "label {} vs path {}",
                    pool.label(i).rcc,
                    reduced_cost
                );
                PricedColumn { path, reduced_cost }
            })
            .collect();
        (cols, pool.len())
    };
    let per: Vec<(Vec<PricedColumn>, usize)> = if cfg.parallel {
        inst.depots.par_iter().map(|&d| run(d)).collect()
    } else {
        inst.depots.iter().map(|&d| run(d)).collect()
    };
    let mut columns = idle_columns(inst, duals, cfg);
    for (c, n) in per {
        stats.sequence_labels += n;
        columns.extend(c);
    }
    stats.complete = columns.len();
    Ok(finish(columns, stats))
}

pub(crate) use idle_columns as idle;
