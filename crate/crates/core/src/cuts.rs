//! Limited-memory subset-row cuts over task triples with weights one half.
//!
//! Fractional resources take values in {0, 1/2}; they are stored as numerators
//! over 2, so a set bit means "one half".

use serde::{Deserialize, Serialize};

use crate::bitset::{CutBits, NodeSet};
use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub tasks: [usize; 3],
    /// Memory set; always contains `tasks`.
    pub memory: NodeSet,
}

impl Cut {
    pub fn new(tasks: [usize; 3], memory: NodeSet) -> Self {
        let mut memory = memory;
        for t in tasks {
            memory.insert(t);
        }
        let mut tasks = tasks;
        tasks.sort_unstable();
        Cut { tasks, memory }
    }

    /// Cut whose memory is the whole task set (a plain subset-row cut).
    pub fn full_memory(tasks: [usize; 3], inst: &Instance) -> Self {
        Self::new(tasks, inst.task_set())
    }

    #[inline]
    pub fn in_subset(&self, n: usize) -> bool {
        self.tasks.contains(&n)
    }

    #[inline]
    pub fn in_memory(&self, n: usize) -> bool {
        self.memory.contains(n)
    }
}

/// Coefficient of a node sequence in the cut row, by streaming accumulation.
pub fn lmsri_coefficient(nodes: &[usize], cut: &Cut) -> u32 {
    let mut acc = 0u8;
    let mut coef = 0;
    for &n in nodes {
        if !cut.in_memory(n) {
            acc = 0;
        } else if cut.in_subset(n) {
            acc += 1;
            if acc == 2 {
                acc = 0;
                coef += 1;
            }
        }
    }
    coef
}

/// Same coefficient as a sum of floors over maximal runs inside the memory.
pub fn lmsri_coefficient_runs(nodes: &[usize], cut: &Cut) -> u32 {
    nodes
        .split(|&n| !cut.in_memory(n))
        .map(|run| run.iter().filter(|&&n| cut.in_subset(n)).count() as u32 / 2)
        .sum()
}

/// Coefficient with memory equal to every node: `⌊½ Σ_{i∈S} γ_i⌋`.
pub fn full_memory_coefficient(nodes: &[usize], tasks: &[usize; 3]) -> u32 {
    nodes.iter().filter(|n| tasks.contains(n)).count() as u32 / 2
}

/// Per-cut resources of a subpath, one bit per cut.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CutResources {
    /// Forward resource is one half.
    pub fwd: CutBits,
    /// Backward resource is one half.
    pub bwd: CutBits,
    /// Every node of the subpath lies in the memory.
    pub inside: CutBits,
}

impl CutResources {
    /// Resources of a single-node subpath at a hub (hubs are never in a subset).
    pub fn single(node: usize, cuts: &[Cut]) -> Self {
        let mut r = CutResources::default();
        for (q, cut) in cuts.iter().enumerate() {
            r.inside.set(q, cut.in_memory(node));
        }
        r
    }

    /// Appends `next` and returns the cuts whose coefficient grows along the arc.
    pub fn extend(&self, next: usize, cuts: &[Cut]) -> (Self, CutBits) {
        let mut r = *self;
        let mut hits = CutBits::empty();
        for (q, cut) in cuts.iter().enumerate() {
            if !cut.in_memory(next) {
                r.fwd.remove(q);
                r.inside.remove(q);
                continue;
            }
            if cut.in_subset(next) {
                if self.fwd.contains(q) {
                    hits.insert(q);
                    r.fwd.remove(q);
                } else {
                    r.fwd.insert(q);
                }
                if self.inside.contains(q) {
                    r.bwd.set(q, !self.bwd.contains(q));
                }
            }
        }
        (r, hits)
    }

    /// Direct evaluation from the node sequence.
    pub fn from_nodes(nodes: &[usize], cuts: &[Cut]) -> Self {
        let mut r = CutResources::default();
        for (q, cut) in cuts.iter().enumerate() {
            let suffix = nodes.iter().rev().take_while(|&&n| cut.in_memory(n));
            r.fwd
                .set(q, suffix.filter(|&&n| cut.in_subset(n)).count() % 2 == 1);
            let prefix = nodes.iter().take_while(|&&n| cut.in_memory(n));
            r.bwd
                .set(q, prefix.filter(|&&n| cut.in_subset(n)).count() % 2 == 1);
            r.inside.set(q, nodes.iter().all(|&n| cut.in_memory(n)));
        }
        r
    }
}

/// Cuts whose coefficient grows when a sequence with forward bits `seq_fwd`
/// is joined with subpath resources `sub`, and the joined forward bits.
pub fn join_resources(seq_fwd: &CutBits, sub: &CutResources) -> (CutBits, CutBits) {
    let hits = seq_fwd.intersect(&sub.bwd);
    let carried = seq_fwd.intersect(&sub.inside);
    let mut fwd = sub.fwd;
    for k in 0..fwd.0.len() {
        fwd.0[k] ^= carried.0[k];
    }
    (hits, fwd)
}

/// `Σ_{q ∈ bits} λ_q`.
pub fn dual_sum(bits: &CutBits, lambda: &[f64]) -> f64 {
    bits.iter()
        .map(|q| lambda.get(q).copied().unwrap_or(0.0))
        .sum()
}
