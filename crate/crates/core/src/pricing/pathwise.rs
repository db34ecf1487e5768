//! Single-level path labeling with deferred charging, used as a benchmark.
//!
//! A label keeps the slack `r` left at the last charger and the consumption
//! `q` since it. Charging at that charger is fixed only once the next hub is
//! reached, so the label carries the cheapest completion for any future need.

use crate::bitset::NodeSet;
use crate::cuts::{dual_sum, CutResources};
use crate::duals::DualPrices;
use crate::instance::Instance;
use crate::route::{Path, EPS};

use super::engine::{Pool, NO_PARENT};
use super::{
    check_config, finish, idle, PricedColumn, PricingConfig, PricingContext, PricingError,
    PricingResult, PricingStats, Variant,
};

#[derive(Clone, Copy, Debug)]
struct PathLabel {
    end: usize,
    len: usize,
    base_rcc: f64,
    base_time: f64,
    r: f64,
    q: f64,
    last: usize,
    /// Charge fixed at the previous hub upon reaching this node.
    commit: f64,
    served: NodeSet,
    pi: NodeSet,
    cut: CutResources,
}

impl PathLabel {
    fn pending(&self) -> f64 {
        (-self.r).max(0.0)
    }

    fn time(&self) -> f64 {
        self.base_time + self.pending()
    }

    fn rcc(&self, inst: &Instance) -> f64 {
        self.base_rcc + inst.delta[self.last] * self.pending()
    }

    fn extend(&self, next: usize, ctx: &PricingContext) -> Option<Self> {
        let inst = ctx.inst;
        if next == self.end || (self.len > 0 && inst.is_depot(self.end)) {
            return None;
        }
        let is_task = inst.is_task(next);
        if is_task && ctx.full() && self.served.contains(next) {
            return None;
        }
        let ng = ctx.ng();
        if ng.is_some() && self.pi.contains(next) {
            return None;
        }
        let a = inst.b(self.end, next);
        let q = self.q + a;
        if q > inst.battery + EPS {
            return None;
        }
        let mut l = *self;
        l.end = next;
        l.len += 1;
        l.q = q;
        l.r -= a;
        l.base_time += inst.t(self.end, next);
        l.base_rcc += inst.c(self.end, next);
        if is_task {
            l.base_rcc -= ctx.duals.nu[next];
        } else if inst.is_depot(next) {
            l.base_rcc -= ctx.duals.mu[next];
        }
        if l.time() + ctx.to_depot[next] > inst.horizon + EPS {
            return None;
        }
        l.commit = 0.0;
        if inst.is_hub(next) {
            let tau = l.pending();
            l.commit = tau;
            l.base_time += tau;
            l.base_rcc += inst.delta[l.last] * tau;
            l.r = l.r.max(0.0);
            l.q = 0.0;
            l.last = next;
        }
        if is_task && ctx.full() {
            l.served.insert(next);
        }
        if let Some(ng) = ng {
            l.pi = l.pi.intersect(ng.of(next));
            l.pi.insert(next);
        }
        if ctx.has_cuts() {
            let (cut, hits) = self.cut.extend(next, &ctx.cfg.cuts);
            l.cut = cut;
            l.base_rcc -= dual_sum(&hits, &ctx.duals.lambda);
        }
        Some(l)
    }
}

fn dominates(a: &PathLabel, b: &PathLabel, ctx: &PricingContext) -> bool {
    if a.time() > b.time() + EPS || a.r < b.r - EPS || a.q > b.q + EPS {
        return false;
    }
    if ctx.full() && !a.served.is_subset(&b.served) {
        return false;
    }
    if ctx.ng().is_some() && !a.pi.intersect(&ctx.tasks).is_subset(&b.pi) {
        return false;
    }
    let mut pen = 0.0;
    for &(q, w) in &ctx.priced_cuts {
        if a.cut.fwd.contains(q) && !b.cut.fwd.contains(q) {
            pen += w;
        }
    }
    a.rcc(ctx.inst) + pen <= b.rcc(ctx.inst) + EPS
}

/// Path-level pricing for homogeneous instances.
pub fn price_pathwise(
    inst: &Instance,
    duals: &DualPrices,
    cfg: &PricingConfig,
) -> Result<PricingResult, PricingError> {
    check_config(inst, duals, cfg)?;
    if cfg.variant != Variant::Hom || inst.levels.len() > 1 {
        return Err(PricingError::NotHomogeneous(inst.levels.len()));
    }
    let ctx = PricingContext::new(inst, duals, cfg);
    let dom = |a: &PathLabel, b: &PathLabel| dominates(a, b, &ctx);
    let mut columns = idle(inst, duals, cfg);
    let mut stats = PricingStats::default();
    for &d in &inst.depots {
        let mut pool: Pool<PathLabel> = Pool::new();
        let root = PathLabel {
            end: d,
            len: 0,
            base_rcc: -duals.kappa[d],
            base_time: 0.0,
            r: inst.battery,
            q: 0.0,
            last: d,
            commit: 0.0,
            served: NodeSet::empty(),
            pi: match ctx.ng() {
                Some(_) => NodeSet::singleton(d),
                None => NodeSet::empty(),
            },
            cut: if ctx.has_cuts() {
                CutResources::single(d, &cfg.cuts)
            } else {
                CutResources::default()
            },
        };
        pool.push(root, usize::MAX, 0.0, NO_PARENT, d as u32, dom);
        while let Some(i) = pool.pop() {
            let l = *pool.label(i);
            if l.len > 0 && inst.is_depot(l.end) {
                columns.push(rebuild(&pool, i, inst, duals, cfg));
                continue;
            }
            for next in 0..inst.n() {
                if let Some(nl) = l.extend(next, &ctx) {
                    pool.push(nl, next, nl.time(), i, next as u32, dom);
                }
            }
        }
        stats.sequence_labels += pool.len();
    }
    stats.complete = columns.len();
    Ok(finish(columns, stats))
}

fn rebuild(
    pool: &Pool<PathLabel>,
    mut i: u32,
    inst: &Instance,
    duals: &DualPrices,
    cfg: &PricingConfig,
) -> PricedColumn {
    let mut steps = Vec::new();
    while i != NO_PARENT {
        let e = &pool.entries[i as usize];
        steps.push((e.label.end, e.label.commit));
        i = e.parent;
    }
    steps.reverse();
    let nodes: Vec<usize> = steps.iter().map(|s| s.0).collect();
    let mut charging = vec![0.0; nodes.len()];
    let mut last_hub = 0;
    for (k, &(n, commit)) in steps.iter().enumerate().skip(1) {
        if inst.is_hub(n) {
            charging[last_hub] += commit;
            last_hub = k;
        }
    }
    let path = Path::new(nodes, charging, inst);
    let reduced_cost = path.reduced_cost(duals, &cfg.cuts, inst);
    PricedColumn { path, reduced_cost }
}
