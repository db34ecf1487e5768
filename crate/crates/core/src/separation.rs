//! Separation of limited-memory subset-row cuts over task triples.

use rayon::prelude::*;

use crate::bitset::NodeSet;
use crate::cuts::{full_memory_coefficient, lmsri_coefficient, Cut};
use crate::instance::Instance;
use crate::route::Path;

pub const VIOLATION_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_CUTS: usize = 10;

/// A violated triple with its left-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub tasks: [usize; 3],
    pub lhs: f64,
}

/// Triples whose full-memory row is violated by the weighted paths, most violated first.
pub fn violated_triples(support: &[(&Path, f64)], inst: &Instance) -> Vec<Violation> {
    let t = &inst.tasks;
    let n = t.len();
    let mut out: Vec<Violation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut local = Vec::new();
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = [t[a], t[b], t[c]];
                    let lhs: f64 = support
                        .iter()
                        .map(|(p, z)| full_memory_coefficient(&p.nodes, &s) as f64 * z)
                        .sum();
                    if lhs > 1.0 + VIOLATION_TOL {
                        local.push(Violation { tasks: s, lhs });
                    }
                }
            }
            local
        })
        .collect();
    out.sort_by(|x, y| y.lhs.total_cmp(&x.lhs).then(x.tasks.cmp(&y.tasks)));
    out
}

/// Smallest memory, grown gap by gap, keeping each supporting path's full coefficient.
pub fn build_memory(tasks: [usize; 3], support: &[&Path]) -> NodeSet {
    let mut cut = Cut::new(tasks, NodeSet::empty());
    for p in support {
        let full = full_memory_coefficient(&p.nodes, &tasks);
        if full == 0 || lmsri_coefficient(&p.nodes, &cut) == full {
            continue;
        }
        let hits: Vec<usize> = (0..p.nodes.len())
            .filter(|&k| cut.in_subset(p.nodes[k]))
            .collect();
        for w in hits.windows(2) {
            for &x in &p.nodes[w[0] + 1..w[1]] {
                cut.memory.insert(x);
            }
        }
        debug_assert_eq!(lmsri_coefficient(&p.nodes, &cut), full);
    }
    cut.memory
}

/// Up to `max_cuts` new violated cuts, skipping triples already present.
pub fn separate_lmsri(
    support: &[(&Path, f64)],
    existing: &[Cut],
    inst: &Instance,
    max_cuts: usize,
) -> Vec<Cut> {
    let paths: Vec<&Path> = support.iter().map(|(p, _)| *p).collect();
    violated_triples(support, inst)
        .into_iter()
        .filter(|v| !existing.iter().any(|c| c.tasks == v.tasks))
        .take(max_cuts)
        .map(|v| Cut::new(v.tasks, build_memory(v.tasks, &paths)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, GenParams};

    fn inst() -> Instance {
        generate_instance(&GenParams {
            n_tasks: 4,
            ..GenParams::default()
        })
        .unwrap()
    }

    #[test]
    fn half_weighted_pairs_are_violated() {
        let i = inst();
        let [a, b, c, _] = [i.tasks[0], i.tasks[1], i.tasks[2], i.tasks[3]];
        let d = i.depots[0];
        let ps = [
            Path::plain(vec![d, a, b, d], &i),
            Path::plain(vec![d, b, c, d], &i),
            Path::plain(vec![d, a, c, d], &i),
        ];
        let support: Vec<(&Path, f64)> = ps.iter().map(|p| (p, 0.5)).collect();
        let v = violated_triples(&support, &i);
        assert_eq!(v.len(), 1);
        assert!((v[0].lhs - 1.5).abs() < 1e-12);
        let cuts = separate_lmsri(&support, &[], &i, 10);
        assert_eq!(cuts[0].tasks, [a, b, c]);
        // Consecutive visits need no extra memory.
        assert_eq!(cuts[0].memory, NodeSet::from_iter_idx([a, b, c]));
        assert!(separate_lmsri(&support, &cuts, &i, 10).is_empty());
    }

    #[test]
    fn integral_and_disjoint_solutions_are_clean() {
        let i = inst();
        let d = i.depots[0];
        let ps: Vec<Path> = i
            .tasks
            .iter()
            .map(|&t| Path::plain(vec![d, t, d], &i))
            .collect();
        let support: Vec<(&Path, f64)> = ps.iter().map(|p| (p, 1.0)).collect();
        assert!(violated_triples(&support, &i).is_empty());
    }

    #[test]
    fn gaps_between_subset_visits_enter_memory() {
        let i = inst();
        let [a, b, c, x] = [i.tasks[0], i.tasks[1], i.tasks[2], i.tasks[3]];
        let d = i.depots[0];
        let p = Path::plain(vec![d, a, x, b, d], &i);
        let far = Path::plain(vec![d, x, d], &i);
        let m = build_memory([a, b, c], &[&p, &far]);
        assert!(m.contains(x));
        assert_eq!(m.len(), 4);
        let m2 = build_memory([a, b, c], &[&far]);
        assert_eq!(m2.len(), 3);
    }
}
