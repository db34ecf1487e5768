//! Shared fixtures and independent checks for the integration suites.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ersp_core::bitset::NodeSet;
use ersp_core::cuts::Cut;
use ersp_core::duals::DualPrices;
use ersp_core::instance::{generate_instance, GenParams, Instance};
use ersp_core::ng::NgNeighborhood;
use ersp_core::pricing::{
    seq_dominates, seq_dominates_within, sub_dominates, sub_dominates_within, Elementarity,
    PricingConfig, PricingContext, SeqLabel, SubLabel, Variant,
};

pub fn tiny(n_tasks: usize, levels: usize, seed: u64) -> Instance {
    generate_instance(&GenParams {
        n_tasks,
        n_levels: levels,
        seed,
        ..GenParams::default()
    })
    .unwrap()
}

/// A random triple with random limited memory.
pub fn random_cut(inst: &Instance, rng: &mut ChaCha8Rng) -> Cut {
    let mut t = inst.tasks.clone();
    for k in (1..t.len()).rev() {
        t.swap(k, rng.gen_range(0..=k));
    }
    let mut memory = NodeSet::empty();
    for n in 0..inst.n() {
        if !inst.is_depot(n) && rng.gen_bool(0.5) {
            memory.insert(n);
        }
    }
    Cut::new([t[0], t[1], t[2]], memory)
}

/// Criteria families exercised by the propagation suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    HomNone,
    HomElem,
    HetElem,
    HomNg,
    HomNgCuts,
    HetNg,
    HetNgCuts,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::HomNone,
        Family::HomElem,
        Family::HetElem,
        Family::HomNg,
        Family::HomNgCuts,
        Family::HetNg,
        Family::HetNgCuts,
    ];

    fn het(self) -> bool {
        matches!(self, Family::HetElem | Family::HetNg | Family::HetNgCuts)
    }

    fn cuts(self) -> bool {
        matches!(self, Family::HomNgCuts | Family::HetNgCuts)
    }
}

pub struct Setup {
    pub inst: Instance,
    pub duals: DualPrices,
    pub cfg: PricingConfig,
}

pub fn setup(family: Family, seed: u64) -> Setup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = if family.het() {
        2 + seed as usize % 2
    } else {
        1
    };
    let n_tasks = 4 + seed as usize % 2;
    let inst = tiny(n_tasks, levels, seed);
    let n_cuts = if family.cuts() { 2 } else { 0 };
    let cuts: Vec<Cut> = (0..n_cuts).map(|_| random_cut(&inst, &mut rng)).collect();
    let mut duals = DualPrices::random(&inst, n_cuts, seed ^ 0x5eed);
    // Mix in zero cut duals so inactive cuts are covered too.
    for l in &mut duals.lambda {
        if rng.gen_bool(0.2) {
            *l = 0.0;
        }
    }
    let elementarity = match family {
        Family::HomNone => Elementarity::None,
        Family::HomElem | Family::HetElem => Elementarity::Full,
        _ => {
            // Random neighborhoods between trivial and nearest.
            let mut ng = NgNeighborhood::nearest(&inst);
            for s in ng.sets.iter_mut() {
                for t in inst.tasks.iter() {
                    if rng.gen_bool(0.3) {
                        s.remove(*t);
                    }
                }
            }
            for i in 0..inst.n() {
                ng.sets[i].insert(i);
            }
            Elementarity::Ng(ng)
        }
    };
    let variant = if family.het() {
        Variant::Het
    } else {
        Variant::Hom
    };
    let mut cfg = PricingConfig::new(variant, elementarity);
    cfg.cuts = cuts;
    cfg.parallel = false;
    Setup { inst, duals, cfg }
}

/// All partial subpaths from every hub with at most `depth` arcs.
pub fn enumerate_subs(ctx: &PricingContext, depth: usize) -> Vec<SubLabel> {
    let mut out = Vec::new();
    let inst = ctx.inst;
    for h in (0..inst.n()).filter(|&h| inst.is_hub(h)) {
        let mut frontier = vec![SubLabel::single(h, ctx)];
        for _ in 0..depth {
            let mut next_frontier = Vec::new();
            for l in &frontier {
                for n in 0..inst.n() {
                    if let Some(x) = l.extend(n, ctx) {
                        out.push(x);
                        if !x.is_done(inst) {
                            next_frontier.push(x);
                        }
                    }
                }
            }
            frontier = next_frontier;
        }
    }
    out
}

/// Sequences of up to `joins + 1` completed subpaths starting at depots.
pub fn enumerate_seqs(ctx: &PricingContext, done: &[SubLabel], joins: usize) -> Vec<SeqLabel> {
    let inst = ctx.inst;
    let mut frontier: Vec<SeqLabel> = done
        .iter()
        .filter(|s| inst.is_depot(s.st.start))
        .map(|s| SeqLabel::seed(s, ctx))
        .collect();
    let mut out = frontier.clone();
    for _ in 0..joins {
        let mut next = Vec::new();
        for q in &frontier {
            for s in done.iter().filter(|s| s.st.start == q.end) {
                if let Some(x) = q.join(s, ctx) {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out
}

#[derive(Debug, Default, Clone)]
pub struct PropCounts {
    pub trials: usize,
    pub failures: usize,
    pub example: Option<String>,
}

impl PropCounts {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.example.is_none() {
                self.example = Some(what());
            }
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct PropReport {
    /// Arc extension of dominating subpaths.
    pub arc: PropCounts,
    /// Subpath extension of dominating sequences.
    pub right: PropCounts,
    /// Dominating subpaths joined to a common sequence.
    pub left: PropCounts,
}

fn group<T, K: std::hash::Hash + Eq>(items: &[T], key: impl Fn(&T) -> K) -> HashMap<K, Vec<usize>> {
    let mut m: HashMap<K, Vec<usize>> = HashMap::new();
    for (i, x) in items.iter().enumerate() {
        m.entry(key(x)).or_default().push(i);
    }
    m
}

/// Runs random instances of `family` until every property has `target` trials.
pub fn propagation_trials(family: Family, target: usize, max_instances: u64) -> PropReport {
    let mut rep = PropReport::default();
    for seed in 0..max_instances {
        if rep.arc.trials >= target && rep.right.trials >= target && rep.left.trials >= target {
            break;
        }
        let su = setup(family, seed * 7919 + family as u64);
        let ctx = PricingContext::new(&su.inst, &su.duals, &su.cfg);
        let inst = &su.inst;
        let subs = enumerate_subs(&ctx, 4);
        let by_nd = group(&subs, |s| (s.st.start, s.st.end, s.is_done(inst)));

        if rep.arc.trials < target {
            for idx in by_nd.values() {
                for &i in idx {
                    for &j in idx {
                        let (a, b) = (&subs[i], &subs[j]);
                        if i == j || a.is_done(inst) || !sub_dominates_within(a, b, &ctx, 0.0) {
                            continue;
                        }
                        for n in 0..inst.n() {
                            if let Some(b2) = b.extend(n, &ctx) {
                                let ok = a
                                    .extend(n, &ctx)
                                    .is_some_and(|a2| sub_dominates(&a2, &b2, &ctx));
                                rep.arc.record(ok, || {
                                    format!("{family:?} seed {seed}: {a:?} vs {b:?} via {n}")
                                });
                            }
                        }
                    }
                }
            }
        }

        let done: Vec<SubLabel> = subs.iter().copied().filter(|s| s.is_done(inst)).collect();
        let seqs = enumerate_seqs(&ctx, &done, 2);
        let open: Vec<SeqLabel> = seqs
            .into_iter()
            .filter(|q| inst.is_charger(q.end))
            .collect();

        if rep.right.trials < target {
            for idx in group(&open, |q| (q.start, q.end)).values() {
                for &i in idx {
                    for &j in idx {
                        let (a, b) = (&open[i], &open[j]);
                        if i == j || !seq_dominates_within(a, b, &ctx, 0.0) {
                            continue;
                        }
                        for s in done.iter().filter(|s| s.st.start == a.end) {
                            if let Some(b2) = b.join(s, &ctx) {
                                let ok = a
                                    .join(s, &ctx)
                                    .is_some_and(|a2| seq_dominates(&a2, &b2, &ctx));
                                rep.right.record(ok, || {
                                    format!("{family:?} seed {seed}: {a:?} vs {b:?} + {s:?}")
                                });
                            }
                        }
                    }
                }
            }
        }

        if rep.left.trials < target {
            let seqs_at = group(&open, |q| q.end);
            for idx in group(&done, |s| (s.st.start, s.st.end)).values() {
                for &i in idx {
                    for &j in idx {
                        let (a, b) = (&done[i], &done[j]);
                        if i == j
                            || !inst.is_charger(a.st.start)
                            || !sub_dominates_within(a, b, &ctx, 0.0)
                        {
                            continue;
                        }
                        for &k in seqs_at.get(&a.st.start).map_or(&[][..], |v| v.as_slice()) {
                            let q = &open[k];
                            if let Some(b2) = q.join(b, &ctx) {
                                let ok = q
                                    .join(a, &ctx)
                                    .is_some_and(|a2| seq_dominates(&a2, &b2, &ctx));
                                rep.left.record(ok, || {
                                    format!("{family:?} seed {seed}: {q:?} + {a:?} vs {b:?}")
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}
