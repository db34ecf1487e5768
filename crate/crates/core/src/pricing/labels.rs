//! Subpath and sequence labels: extension rules and dominance tests.

use crate::bitset::{CutBits, NodeSet};
use crate::charge::slack_update;
use crate::cuts::{dual_sum, join_resources, CutResources};
use crate::duals::DualPrices;
use crate::instance::Instance;
use crate::ng::{join_feasible, join_pi, NgLabels, NgNeighborhood};
use crate::route::{SubpathState, EPS};

use super::{Elementarity, PricingConfig};

/// Maximum number of distinct charging-cost levels.
pub const MAX_LEVELS: usize = 8;

/// Everything pricing needs besides the labels themselves.
pub struct PricingContext<'a> {
    pub inst: &'a Instance,
    pub duals: &'a DualPrices,
    pub cfg: &'a PricingConfig,
    pub tasks: NodeSet,
    /// Cuts with a strictly negative dual, as `(q, −λ_q)`.
    pub priced_cuts: Vec<(usize, f64)>,
    /// Cheapest time and charge from each node to any hub.
    pub(crate) to_hub_time: Vec<f64>,
    pub(crate) to_hub_charge: Vec<f64>,
    /// Cheapest time between each node and any depot.
    pub(crate) to_depot: Vec<f64>,
    pub(crate) from_depot: Vec<f64>,
}

impl<'a> PricingContext<'a> {
    pub fn new(inst: &'a Instance, duals: &'a DualPrices, cfg: &'a PricingConfig) -> Self {
        let n = inst.n();
        let hubs: Vec<usize> = (0..n).filter(|&i| inst.is_hub(i)).collect();
        let min_over = |set: &[usize], f: &dyn Fn(usize) -> f64| {
            set.iter().map(|&h| f(h)).fold(f64::INFINITY, f64::min)
        };
        let to_hub_time = (0..n)
            .map(|i| {
                min_over(&hubs, &|h| {
                    if h == i {
                        f64::INFINITY
                    } else {
                        inst.t(i, h)
                    }
                })
            })
            .collect();
        let to_hub_charge = (0..n)
            .map(|i| {
                min_over(&hubs, &|h| {
                    if h == i {
                        f64::INFINITY
                    } else {
                        inst.b(i, h)
                    }
                })
            })
            .collect();
        let to_depot = (0..n)
            .map(|i| {
                if inst.is_depot(i) {
                    0.0
                } else {
                    min_over(&inst.depots, &|d| inst.t(i, d))
                }
            })
            .collect();
        let from_depot = (0..n)
            .map(|i| {
                if inst.is_depot(i) {
                    0.0
                } else {
                    min_over(&inst.depots, &|d| inst.t(d, i))
                }
            })
            .collect();
        let priced_cuts = (0..cfg.cuts.len())
            .filter_map(|q| {
                let l = duals.cut(q);
                (l < -1e-12).then_some((q, -l))
            })
            .collect();
        PricingContext {
            inst,
            duals,
            cfg,
            tasks: inst.task_set(),
            priced_cuts,
            to_hub_time,
            to_hub_charge,
            to_depot,
            from_depot,
        }
    }

    pub fn ng(&self) -> Option<&NgNeighborhood> {
        match &self.cfg.elementarity {
            Elementarity::Ng(n) => Some(n),
            _ => None,
        }
    }

    #[inline]
    pub fn full(&self) -> bool {
        matches!(self.cfg.elementarity, Elementarity::Full)
    }

    #[inline]
    pub fn has_cuts(&self) -> bool {
        !self.cfg.cuts.is_empty()
    }

    #[inline]
    pub fn battery(&self) -> f64 {
        self.inst.battery
    }
}

/// Partial or completed subpath label.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubLabel {
    pub st: SubpathState,
    pub served: NodeSet,
    pub ng: NgLabels,
    pub cut: CutResources,
}

impl SubLabel {
    pub fn single(node: usize, ctx: &PricingContext) -> Self {
        let ng = match ctx.ng() {
            Some(n) => NgLabels::single(node, n),
            None => NgLabels {
                pi: NodeSet::empty(),
                omega: NodeSet::empty(),
                pi_inv: NodeSet::empty(),
            },
        };
        SubLabel {
            st: SubpathState::single(node, ctx.duals, ctx.inst),
            served: NodeSet::empty(),
            ng,
            cut: if ctx.has_cuts() {
                CutResources::single(node, &ctx.cfg.cuts)
            } else {
                CutResources::default()
            },
        }
    }

    /// Whether the subpath ends at a hub after at least one arc.
    pub fn is_done(&self, inst: &Instance) -> bool {
        self.st.is_complete() && inst.is_hub(self.st.end)
    }

    /// Extends along `(end, next)`; `None` if infeasible or pruned.
    pub fn extend(&self, next: usize, ctx: &PricingContext) -> Option<Self> {
        let inst = ctx.inst;
        if next == self.st.end || self.is_done(inst) {
            return None;
        }
        let is_task = inst.is_task(next);
        if is_task && ctx.full() && self.served.contains(next) {
            return None;
        }
        let ngn = ctx.ng();
        if ngn.is_some() && !self.ng.arc_feasible(next) {
            return None;
        }
        let mut st = self.st.extend(next, ctx.duals, inst).ok()?;
        let start_lb = ctx.from_depot[st.start];
        if is_task {
            if start_lb + st.time + ctx.to_hub_time[next] > inst.horizon + EPS
                || st.charge + ctx.to_hub_charge[next] > inst.battery + EPS
            {
                return None;
            }
        } else if start_lb + st.time + ctx.to_depot[next] > inst.horizon + EPS
            || st.charge > inst.battery + EPS
        {
            return None;
        }
        let mut served = self.served;
        if is_task && ctx.full() {
            served.insert(next);
        }
        let ng = match ngn {
            Some(n) => self.ng.extend(next, n),
            None => self.ng,
        };
        let cut = if ctx.has_cuts() {
            let (cut, hits) = self.cut.extend(next, &ctx.cfg.cuts);
            st.rcc -= dual_sum(&hits, &ctx.duals.lambda);
            cut
        } else {
            self.cut
        };
        Some(SubLabel {
            st,
            served,
            ng,
            cut,
        })
    }
}

/// Worst-case extra cut hits of `a` over `b` across all prefixes and suffixes.
///
/// Resources are numerators over 2. A prefix arriving with forward value `x`
/// adds a hit at the join when `x` plus the first run reaches a whole unit; an
/// inside subpath carries `x` to its end. The suffix can then cost one extra
/// hit exactly when `a` leaves the larger forward value.
pub fn cut_excess(a: &CutResources, b: &CutResources, q: usize, carries: bool) -> i32 {
    let run = |r: &CutResources, x: u8| {
        let (bwd, fwd) = (r.bwd.contains(q) as u8, r.fwd.contains(q) as u8);
        if r.inside.contains(q) {
            ((x + fwd >= 2) as i32, (x + fwd) % 2)
        } else {
            ((x + bwd >= 2) as i32, fwd)
        }
    };
    let xs: &[u8] = if carries { &[0, 1] } else { &[0] };
    xs.iter()
        .map(|&x| {
            let ((ja, ra), (jb, rb)) = (run(a, x), run(b, x));
            ja - jb + (ra > rb) as i32
        })
        .max()
        .unwrap_or(0)
}

fn subpath_cut_penalty(a: &SubLabel, b: &SubLabel, ctx: &PricingContext) -> f64 {
    let start = a.st.start;
    let mut pen = 0.0;
    for &(q, w) in &ctx.priced_cuts {
        let carries = ctx.inst.is_charger(start) && ctx.cfg.cuts[q].in_memory(start);
        pen += w * cut_excess(&a.cut, &b.cut, q, carries) as f64;
    }
    pen
}

/// Whether subpath label `a` dominates `b` (same start and end assumed).
pub fn sub_dominates(a: &SubLabel, b: &SubLabel, ctx: &PricingContext) -> bool {
    sub_dominates_within(a, b, ctx, EPS)
}

/// [`sub_dominates`] with an explicit comparison tolerance.
pub fn sub_dominates_within(a: &SubLabel, b: &SubLabel, ctx: &PricingContext, tol: f64) -> bool {
    if a.st.time > b.st.time + tol || a.st.charge > b.st.charge + tol {
        return false;
    }
    if ctx.full() && !a.served.is_subset(&b.served) {
        return false;
    }
    if ctx.ng().is_some() {
        let t = &ctx.tasks;
        if !a.ng.pi.intersect(t).is_subset(&b.ng.pi)
            || !a.ng.omega.intersect(t).is_subset(&b.ng.omega)
            || !a.ng.pi_inv.intersect(t).is_subset(&b.ng.pi_inv)
        {
            return false;
        }
    }
    let pen = if ctx.priced_cuts.is_empty() {
        0.0
    } else {
        subpath_cut_penalty(a, b, ctx)
    };
    a.st.rcc + pen <= b.st.rcc + tol
}

/// Label of a subpath sequence, describing its minimal path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeqLabel {
    pub start: usize,
    pub end: usize,
    pub rcc: f64,
    pub time: f64,
    pub charge: f64,
    /// Total battery use of all subpaths so far.
    pub used: f64,
    /// `Z_1..Z_D`.
    pub z: [f64; MAX_LEVELS],
    pub served: NodeSet,
    pub pi: NodeSet,
    pub fwd: CutBits,
}

impl SeqLabel {
    /// Single-subpath sequence.
    pub fn seed(s: &SubLabel, ctx: &PricingContext) -> Self {
        SeqLabel {
            start: s.st.start,
            end: s.st.end,
            rcc: s.st.rcc,
            time: s.st.time,
            charge: ctx.battery() - s.st.charge,
            used: s.st.charge,
            z: [0.0; MAX_LEVELS],
            served: s.served,
            pi: s.ng.pi,
            fwd: s.cut.fwd,
        }
    }

    /// Joins completed subpath `s` at the charger ending this sequence.
    pub fn join(&self, s: &SubLabel, ctx: &PricingContext) -> Option<Self> {
        let inst = ctx.inst;
        let c = self.end;
        if !inst.is_charger(c) || s.st.start != c || !s.is_done(inst) {
            return None;
        }
        if ctx.full() && !self.served.is_disjoint(&s.served) {
            return None;
        }
        if ctx.ng().is_some() && !join_feasible(&self.pi, &s.ng, c) {
            return None;
        }
        let cap = ctx.battery();
        let tau = (s.st.charge - self.charge).max(0.0);
        let time = self.time + tau + s.st.time;
        if time + ctx.to_depot[s.st.end] > inst.horizon + EPS || s.st.charge > cap + EPS {
            return None;
        }
        let mut z = self.z;
        let d = inst.levels.len();
        let f = inst.level_of[c];
        let (_, charge_cost) =
            slack_update(&mut z[..d], &self.used, &s.st.charge, f, &inst.levels, &cap);
        let mut rcc = self.rcc + charge_cost + s.st.rcc;
        let fwd = if ctx.has_cuts() {
            let (hits, fwd) = join_resources(&self.fwd, &s.cut);
            rcc -= dual_sum(&hits, &ctx.duals.lambda);
            fwd
        } else {
            self.fwd
        };
        Some(SeqLabel {
            start: self.start,
            end: s.st.end,
            rcc,
            time,
            charge: self.charge + tau - s.st.charge,
            used: self.used + s.st.charge,
            z,
            served: self.served.union(&s.served),
            pi: if ctx.ng().is_some() {
                join_pi(&self.pi, &s.ng)
            } else {
                self.pi
            },
            fwd,
        })
    }
}

/// Whether sequence label `a` dominates `b` (same start and end assumed).
pub fn seq_dominates(a: &SeqLabel, b: &SeqLabel, ctx: &PricingContext) -> bool {
    seq_dominates_within(a, b, ctx, EPS)
}

/// [`seq_dominates`] with an explicit comparison tolerance.
pub fn seq_dominates_within(a: &SeqLabel, b: &SeqLabel, ctx: &PricingContext, tol: f64) -> bool {
    if a.time > b.time + tol || a.charge < b.charge - tol {
        return false;
    }
    let inst = ctx.inst;
    if inst.is_charger(a.end) {
        let f = inst.level_of[a.end];
        for d in 0..f.saturating_sub(1) {
            if a.z[d] < b.z[d] - tol {
                return false;
            }
        }
    }
    if ctx.full() && !a.served.is_subset(&b.served) {
        return false;
    }
    if ctx.ng().is_some() && !a.pi.intersect(&ctx.tasks).is_subset(&b.pi) {
        return false;
    }
    let mut pen = 0.0;
    for &(q, w) in &ctx.priced_cuts {
        if a.fwd.contains(q) && !b.fwd.contains(q) {
            pen += w;
        }
    }
    a.rcc + pen <= b.rcc + tol
}
