//! ng-neighborhoods and the forward/backward ng-set bookkeeping for subpaths.

use crate::bitset::NodeSet;
use crate::instance::Instance;

/// One neighborhood `N_i` per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NgNeighborhood {
    pub sets: Vec<NodeSet>,
}

impl NgNeighborhood {
    /// `N_i = {i}` everywhere: every node sequence is accepted.
    pub fn trivial(inst: &Instance) -> Self {
        Self {
            sets: (0..inst.n()).map(NodeSet::singleton).collect(),
        }
    }

    /// `N_i = V_T ∪ {i}`: ng-feasibility coincides with elementarity.
    pub fn full(inst: &Instance) -> Self {
        let tasks = inst.task_set();
        Self {
            sets: (0..inst.n())
                .map(|i| tasks.union(&NodeSet::singleton(i)))
                .collect(),
        }
    }

    /// Each task plus its `⌈√|V_T|⌉` nearest other tasks; hubs keep `{i}`.
    pub fn nearest(inst: &Instance) -> Self {
        let k = (inst.tasks.len() as f64).sqrt().ceil() as usize;
        let mut sets: Vec<NodeSet> = (0..inst.n()).map(NodeSet::singleton).collect();
        for &i in &inst.tasks {
            let mut others: Vec<usize> = inst.tasks.iter().copied().filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| inst.t(i, a).total_cmp(&inst.t(i, b)).then(a.cmp(&b)));
            for &j in others.iter().take(k) {
                sets[i].insert(j);
            }
        }
        Self { sets }
    }

    #[inline]
    pub fn of(&self, i: usize) -> &NodeSet {
        &self.sets[i]
    }

    /// Componentwise inclusion.
    pub fn is_within(&self, other: &Self) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.is_subset(b))
    }

    /// ng-feasibility of a whole node sequence, checked pairwise.
    /// Sum of all neighborhood sizes.
    pub fn total_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    pub fn accepts(&self, nodes: &[usize]) -> bool {
        for j in 0..nodes.len() {
            for k in j + 1..nodes.len() {
                if nodes[j] == nodes[k]
                    && !(j + 1..k).any(|l| !self.sets[nodes[l]].contains(nodes[j]))
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Forward set Π, residue Ω and backward set Π⁻¹ of a subpath.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NgLabels {
    pub pi: NodeSet,
    pub omega: NodeSet,
    pub pi_inv: NodeSet,
}

impl NgLabels {
    pub fn single(i: usize, ng: &NgNeighborhood) -> Self {
        let s = NodeSet::singleton(i);
        NgLabels {
            pi: s,
            omega: *ng.of(i),
            pi_inv: s,
        }
    }

    #[inline]
    pub fn arc_feasible(&self, next: usize) -> bool {
        !self.pi.contains(next)
    }

    pub fn extend(&self, next: usize, ng: &NgNeighborhood) -> Self {
        let n = ng.of(next);
        let mut pi = self.pi.intersect(n);
        pi.insert(next);
        let mut pi_inv = self.pi_inv;
        if self.omega.contains(next) {
            pi_inv.insert(next);
        }
        NgLabels {
            pi,
            omega: self.omega.intersect(n),
            pi_inv,
        }
    }

    /// Direct evaluation on a node sequence.
    pub fn from_nodes(nodes: &[usize], ng: &NgNeighborhood) -> Self {
        let m = nodes.len() - 1;
        let mut pi = NodeSet::singleton(nodes[m]);
        for r in 0..m {
            if (r + 1..=m).all(|rho| ng.of(nodes[rho]).contains(nodes[r])) {
                pi.insert(nodes[r]);
            }
        }
        let mut pi_inv = NodeSet::singleton(nodes[0]);
        for r in 1..=m {
            if (0..r).all(|rho| ng.of(nodes[rho]).contains(nodes[r])) {
                pi_inv.insert(nodes[r]);
            }
        }
        let mut omega = *ng.of(nodes[0]);
        for &n in &nodes[1..] {
            omega = omega.intersect(ng.of(n));
        }
        NgLabels { pi, omega, pi_inv }
    }
}

/// Whether a sequence with forward set `pi_seq` may be joined with a subpath at `join`.
#[inline]
pub fn join_feasible(pi_seq: &NodeSet, sub: &NgLabels, join: usize) -> bool {
    pi_seq
        .intersect(&sub.pi_inv)
        .is_subset(&NodeSet::singleton(join))
}

/// Forward set of the joined sequence.
#[inline]
pub fn join_pi(pi_seq: &NodeSet, sub: &NgLabels) -> NodeSet {
    sub.pi.union(&pi_seq.intersect(&sub.omega))
}

/// Adds each repeated task to the neighborhoods of the nodes inside its cycles.
///
/// Returns true when some neighborhood grew.
pub fn expand_with_cycles(ng: &mut NgNeighborhood, nodes: &[usize], inst: &Instance) -> bool {
    let mut grew = false;
    let mut last_seen: Vec<Option<usize>> = vec![None; inst.n()];
    for (k, &i) in nodes.iter().enumerate() {
        if inst.is_task(i) {
            if let Some(j) = last_seen[i] {
                for &n in &nodes[j + 1..k] {
                    if !ng.sets[n].contains(i) {
                        ng.sets[n].insert(i);
                        grew = true;
                    }
                }
            }
            last_seen[i] = Some(k);
        }
    }
    grew
}
