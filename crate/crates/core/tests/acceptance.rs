//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary so the report prints in order; exits non-zero when
//! any criterion fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ersp_core::bench::{compare, grid_instances, het_vs_hom, integrated_vs_sequential, Grid};
use ersp_core::bitset::{CutBits, NodeSet};
use ersp_core::charge::{charge_lp_oracle, find_charge_sequence, RebalanceState};
use ersp_core::colgen::{adaptive_solve, ElementarityMode, SolveConfig, Termination};
use ersp_core::cuts::{
    join_resources, lmsri_coefficient, lmsri_coefficient_runs, Cut, CutResources,
};
use ersp_core::duals::DualPrices;
use ersp_core::instance::{generate_instance, GenParams, Instance};
use ersp_core::ng::NgNeighborhood;
use ersp_core::oracle::{
    enumerate_sequences, min_reduced_cost, solve_exact_tiny, EnumLimits, OracleMode,
};
use ersp_core::pricing::{price, Elementarity, PricingConfig, Variant};
use ersp_core::route::{is_elementary, split_subpaths};

use common::{propagation_trials, random_cut, tiny, Family};

/// Charging plans against the LP.
const TOL_CHARGE: f64 = 1e-9;
/// Reduced costs and relaxation bounds.
const TOL_BOUND: f64 = 1e-6;
/// Minimum bound increase credited to cuts.
const TOL_CUT_GAIN: f64 = 1e-7;
/// Ordering slack between exactly computed bounds.
const TOL_ORDER: f64 = 1e-9;
const DOMINANCE_TRIALS: usize = 100_000;
const ADAPTIVE_SLOWDOWN: f64 = 2.0;
const SPEED_TARGET: f64 = 1.0;
const SPEED_HARD_LIMIT: f64 = 1.5;
const SCALE_GAP: f64 = 0.15;
const SCALE_TIME: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gen(n_tasks: usize, t_over_b: f64, n_levels: usize, seed: u64) -> Instance {
    generate_instance(&GenParams {
        n_tasks,
        t_over_b,
        n_levels,
        seed,
        ..GenParams::default()
    })
    .unwrap()
}

fn c1_charging_dp() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for k in 0..5000 {
        let m = rng.gen_range(1..=8);
        let d = rng.gen_range(1..=5);
        let cap = rng.gen_range(0.5..3.0);
        let levels: Vec<f64> = (0..d).map(|_| rng.gen_range(0.1..5.0)).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..cap)).collect();
        let delta: Vec<f64> = (0..m - 1).map(|_| levels[rng.gen_range(0..d)]).collect();
        let dp = find_charge_sequence(&b, &delta, &cap).map_err(|e| format!("case {k}: {e}"))?;
        let lp = charge_lp_oracle(&b, &delta, &cap).map_err(|e| format!("case {k}: {e}"))?;
        let err = (dp.cost - lp.cost).abs();
        worst = worst.max(err);
        ensure(err <= TOL_CHARGE, || {
            format!("case {k}: dp {} lp {}", dp.cost, lp.cost)
        })?;
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "5000 sequences, max |dp - lp| {worst:.1e}, {secs:.2}s"
    ))
}

fn c2_rebalancing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut steps = 0;
    let mut worst = 0.0f64;
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    for chain in 0..1000 {
        let d = rng.gen_range(1..=5);
        let mut levels: Vec<i64> = (0..d).map(|_| rng.gen_range(1..=40)).collect();
        levels.sort_unstable();
        levels.dedup();
        let levels: Vec<BigRational> = levels.iter().map(|&l| q(l, 8)).collect();
        let d = levels.len();
        let cap = q(rng.gen_range(50..=150), 100);
        let m = rng.gen_range(2..=9);
        let b: Vec<BigRational> = (0..m)
            .map(|_| q(rng.gen_range(0..=100), 100).min(cap.clone()))
            .collect();
        let lv: Vec<usize> = (0..m - 1).map(|_| rng.gen_range(1..=d)).collect();
        let mut st = RebalanceState::new(cap.clone(), levels.clone(), b[0].clone()).unwrap();
        let mut float = RebalanceState::new(
            to_f64(&cap),
            levels.iter().map(to_f64).collect(),
            to_f64(&b[0]),
        )
        .unwrap();
        for k in 1..m {
            st.extend(b[k].clone(), lv[k - 1]).unwrap();
            float.extend(to_f64(&b[k]), lv[k - 1]).unwrap();
            let scratch = RebalanceState::from_scratch(
                cap.clone(),
                levels.clone(),
                b[..=k].to_vec(),
                lv[..k].to_vec(),
            )
            .unwrap();
            ensure(st.tau == scratch.tau, || {
                format!("chain {chain} step {k}: tau plan differs")
            })?;
            ensure(st.z == scratch.z, || {
                format!("chain {chain} step {k}: Z differs")
            })?;
            ensure(st.cost == scratch.cost, || {
                format!("chain {chain} step {k}: cost differs")
            })?;
            let err = (float.cost - to_f64(&scratch.cost)).abs();
            worst = worst.max(err);
            ensure(err <= TOL_CHARGE, || {
                format!("chain {chain} step {k}: float cost off by {err:e}")
            })?;
            steps += 1;
        }
    }
    Ok(format!(
        "1000 chains, {steps} extensions exact; float cost max err {worst:.1e}"
    ))
}

fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

fn c3_pricing_exactness() -> Outcome {
    let mut worst = 0.0f64;
    let mut checks = 0;
    for het in [false, true] {
        for with_cut in [false, true] {
            for k in 0..20u64 {
                let seed = 3000 + k;
                let n_tasks = 3 + (k as usize % 3);
                let levels = if het { 2 + (k as usize % 2) } else { 1 };
                let inst = tiny(n_tasks, levels, seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let cuts: Vec<Cut> = if with_cut {
                    vec![random_cut(&inst, &mut rng)]
                } else {
                    Vec::new()
                };
                let duals = DualPrices::random(&inst, cuts.len(), seed + 17);
                let variant = if het { Variant::Het } else { Variant::Hom };
                let mut cfg = PricingConfig::new(variant, Elementarity::Full);
                cfg.cuts = cuts.clone();
                let got = price(&inst, &duals, &cfg)
                    .map_err(|e| e.to_string())?
                    .min_reduced_cost;
                let paths = enumerate_sequences(&inst, &EnumLimits::default())
                    .map_err(|e| e.to_string())?;
                let want = min_reduced_cost(&paths, &duals, &cuts, &inst);
                let err = (got - want).abs();
                worst = worst.max(err);
                ensure(err <= TOL_BOUND, || {
                    format!(
                        "het={het} cut={with_cut} seed {seed}: price {got} vs enumeration {want}"
                    )
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{checks} instances over 4 families, max |Δ| {worst:.1e}"
    ))
}

fn c4_cross_engine() -> Outcome {
    let grid = Grid {
        tasks: vec![6, 7, 8, 9, 10],
        tb_ratios: vec![3.6, 4.2],
        levels: vec![1],
        seeds: vec![40, 41],
        area: (2, 2),
        fleet: None,
    };
    let instances = grid_instances(&grid).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for gi in &instances {
        let cfg = SolveConfig::new(Variant::Hom, ElementarityMode::Adaptive);
        let row = compare(gi, &cfg).map_err(|e| e.to_string())?;
        ensure(row.bound_bilevel.is_finite(), || {
            format!("{}: no bound", gi.id)
        })?;
        worst = worst.max(row.bound_delta);
        ensure(row.bound_delta <= TOL_BOUND, || {
            format!(
                "{}: bilevel {} pathwise {}",
                gi.id, row.bound_bilevel, row.bound_pathwise
            )
        })?;
    }
    Ok(format!(
        "{} instances, max bound delta {worst:.1e}",
        instances.len()
    ))
}

fn timed_bound(inst: &Instance, mode: ElementarityMode) -> Result<(f64, f64), String> {
    let mut cfg = SolveConfig::for_instance(inst, mode);
    cfg.integer = false;
    let t = Instant::now();
    let r = adaptive_solve(inst, &cfg).map_err(|e| e.to_string())?;
    ensure(r.status == Termination::Converged, || {
        format!("{mode:?} ended {:?}", r.status)
    })?;
    Ok((r.lp_bound, t.elapsed().as_secs_f64()))
}

fn c5_adaptive_ng() -> Outcome {
    let (mut t_adaptive, mut t_full) = (0.0, 0.0);
    let mut ratios = Vec::new();
    for k in 0..10u64 {
        let inst = gen(8 + (k as usize % 5), 3.6, 1, 500 + k);
        let (b_full, tf) = timed_bound(&inst, ElementarityMode::Full)?;
        let (b_adapt, ta) = timed_bound(&inst, ElementarityMode::Adaptive)?;
        ensure((b_full - b_adapt).abs() <= TOL_BOUND, || {
            format!("instance {k}: adaptive {b_adapt} vs full {b_full}")
        })?;
        t_adaptive += ta;
        t_full += tf;
        ratios.push(ta / tf);
    }
    let ratio = t_adaptive / t_full;
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    ensure(ratio <= ADAPTIVE_SLOWDOWN, || {
        format!(
            "adaptive/full total time {ratio:.2} > {ADAPTIVE_SLOWDOWN}; per instance [{}]",
            shown.join(" ")
        )
    })?;
    Ok(format!(
        "10 instances, bounds equal; total time adaptive/full {ratio:.2} (per instance [{}])",
        shown.join(" ")
    ))
}

fn c6_bound_ordering() -> Outcome {
    let (mut checked, mut skipped) = (0, 0);
    for k in 0..100u64 {
        if checked == 20 {
            break;
        }
        let inst = tiny(3 + (k as usize % 3), 1 + (k as usize % 2), 600 + k);
        // Instances with an unreachable task have no fleet plan to bound.
        let probe = adaptive_solve(
            &inst,
            &SolveConfig::for_instance(&inst, ElementarityMode::Full),
        )
        .map_err(|e| e.to_string())?;
        if probe.status == Termination::Infeasible {
            skipped += 1;
            continue;
        }
        let ng = NgNeighborhood::nearest(&inst);
        let none = solve_exact_tiny(&inst, &OracleMode::None, &[]).map_err(|e| e.to_string())?;
        let ngb = solve_exact_tiny(&inst, &OracleMode::Ng(ng), &[]).map_err(|e| e.to_string())?;
        let elem =
            solve_exact_tiny(&inst, &OracleMode::Elementary, &[]).map_err(|e| e.to_string())?;
        ensure(
            none.lp <= ngb.lp + TOL_ORDER
                && ngb.lp <= elem.lp + TOL_ORDER
                && elem.lp <= elem.ip + TOL_ORDER,
            || {
                format!(
                    "instance {k}: none {} ng {} elem {} ip {}",
                    none.lp, ngb.lp, elem.lp, elem.ip
                )
            },
        )?;
        ensure(
            (none.ip - elem.ip).abs() <= TOL_ORDER && (ngb.ip - elem.ip).abs() <= TOL_ORDER,
            || {
                format!(
                    "instance {k}: integer optima {} {} {}",
                    none.ip, ngb.ip, elem.ip
                )
            },
        )?;
        // Column generation reaches the same relaxations.
        for (mode, want) in [
            (ElementarityMode::None, none.lp),
            (ElementarityMode::Ng, ngb.lp),
            (ElementarityMode::Full, elem.lp),
        ] {
            let (got, _) = timed_bound(&inst, mode)?;
            ensure((got - want).abs() <= TOL_BOUND, || {
                format!("instance {k} {mode:?}: colgen {got} vs exact {want}")
            })?;
        }
        checked += 1;
    }
    ensure(checked == 20, || {
        format!("only {checked} feasible instances")
    })?;
    Ok(format!(
        "{checked} instances ({skipped} infeasible skipped): none ≤ ng ≤ elem ≤ ip, equal integer optima, colgen matches"
    ))
}

/// Coefficient straight from the definition: floors of half-weights per memory run.
fn coefficient_by_definition(nodes: &[usize], cut: &Cut) -> u32 {
    let mut total = 0;
    let mut halves = 0;
    for (i, &n) in nodes.iter().enumerate() {
        if cut.memory.contains(n) {
            if cut.tasks.contains(&n) {
                halves += 1;
            }
        }
        let run_ends =
            !cut.memory.contains(n) || i + 1 == nodes.len() || !cut.memory.contains(nodes[i + 1]);
        if run_ends {
            total += halves / 2;
            halves = 0;
        }
    }
    total
}

/// Largest cut row activity over every integer-feasible fleet plan built from `routes`.
fn max_cut_lhs(inst: &Instance, routes: &[Vec<usize>], cut: &Cut) -> (u32, usize) {
    fn dfs(
        inst: &Instance,
        routes: &[Vec<usize>],
        cut: &Cut,
        covered: &mut NodeSet,
        starts: &mut Vec<u32>,
        ends: &mut Vec<u32>,
        lhs: u32,
        best: &mut (u32, usize),
    ) {
        let Some(&task) = inst.tasks.iter().find(|&&t| !covered.contains(t)) else {
            // Idle machines fill the remaining starts and end where they began.
            let ok = inst.depots.iter().all(|&d| {
                let idle = inst.v_start[d] - starts[d];
                ends[d] + idle >= inst.v_end[d]
            });
            if ok {
                best.0 = best.0.max(lhs);
                best.1 += 1;
            }
            return;
        };
        for r in routes.iter().filter(|r| r.contains(&task)) {
            let (s, e) = (r[0], *r.last().unwrap());
            if starts[s] >= inst.v_start[s]
                || r.iter().any(|&n| inst.is_task(n) && covered.contains(n))
            {
                continue;
            }
            for &n in r.iter().filter(|&&n| inst.is_task(n)) {
                covered.insert(n);
            }
            starts[s] += 1;
            ends[e] += 1;
            dfs(
                inst,
                routes,
                cut,
                covered,
                starts,
                ends,
                lhs + coefficient_by_definition(r, cut),
                best,
            );
            starts[s] -= 1;
            ends[e] -= 1;
            for &n in r.iter().filter(|&&n| inst.is_task(n)) {
                covered.remove(n);
            }
        }
    }
    let mut best = (0, 0);
    let n = inst.n();
    dfs(
        inst,
        routes,
        cut,
        &mut NodeSet::empty(),
        &mut vec![0; n],
        &mut vec![0; n],
        0,
        &mut best,
    );
    best
}

fn c7_cuts() -> Outcome {
    let mut cuts_checked = 0;
    let mut plans = 0;
    let mut gain: Option<(u64, f64, f64)> = None;
    for seed in 700..760u64 {
        let inst = tiny(4 + (seed as usize % 3), 1, seed);
        let mut cfg = SolveConfig::for_instance(&inst, ElementarityMode::Full);
        cfg.integer = false;
        let plain = adaptive_solve(&inst, &cfg).map_err(|e| e.to_string())?;
        cfg.cuts = true;
        let cut = adaptive_solve(&inst, &cfg).map_err(|e| e.to_string())?;
        if cut.cuts.is_empty() || plain.status != Termination::Converged {
            continue;
        }
        let paths =
            enumerate_sequences(&inst, &EnumLimits::default()).map_err(|e| e.to_string())?;
        let routes: Vec<Vec<usize>> = paths
            .iter()
            .filter(|p| p.nodes.len() > 1 && is_elementary(&p.nodes, &inst))
            .map(|p| p.nodes.clone())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        for c in &cut.cuts {
            let (lhs, n) = max_cut_lhs(&inst, &routes, c);
            ensure(lhs <= 1, || {
                format!(
                    "seed {seed}: cut {:?} reaches {lhs} on an integer plan",
                    c.tasks
                )
            })?;
            cuts_checked += 1;
            plans += n;
        }
        let exact =
            solve_exact_tiny(&inst, &OracleMode::Elementary, &[]).map_err(|e| e.to_string())?;
        ensure(cut.lp_bound <= exact.ip + TOL_BOUND, || {
            format!(
                "seed {seed}: cut bound {} above integer optimum {}",
                cut.lp_bound, exact.ip
            )
        })?;
        if cut.lp_bound >= plain.lp_bound + TOL_CUT_GAIN && gain.is_none() {
            gain = Some((seed, plain.lp_bound, cut.lp_bound));
        }
    }
    ensure(cuts_checked > 0, || {
        "no cuts separated on any instance".into()
    })?;
    let (seed, before, after) = gain.ok_or("no instance where cuts raised the bound")?;
    Ok(format!(
        "{cuts_checked} cuts valid over {plans} integer plans; seed {seed} bound {before:.6} -> {after:.6}"
    ))
}

fn c8_dominance() -> Outcome {
    let mut lines = Vec::new();
    for f in Family::ALL {
        let r = propagation_trials(f, DOMINANCE_TRIALS, 40_000);
        for (name, c) in [
            ("arc", &r.arc),
            ("right join", &r.right),
            ("left join", &r.left),
        ] {
            ensure(c.failures == 0, || {
                format!(
                    "{f:?} {name}: {} failures, e.g. {:?}",
                    c.failures, c.example
                )
            })?;
            ensure(c.trials >= DOMINANCE_TRIALS, || {
                format!("{f:?} {name}: only {} trials", c.trials)
            })?;
        }
        lines.push(format!(
            "{f:?} {}/{}/{}",
            r.arc.trials, r.right.trials, r.left.trials
        ));
    }
    Ok(format!(
        "0 counterexamples; trials arc/right/left: {}",
        lines.join(", ")
    ))
}

/// Streaming over subpaths, as the labels do it.
fn coefficient_by_labels(nodes: &[usize], cuts: &[Cut], inst: &Instance) -> Vec<u32> {
    let mut counts = vec![0; cuts.len()];
    let mut fwd: Option<CutBits> = None;
    for sub in split_subpaths(nodes, inst) {
        let mut r = CutResources::single(sub[0], cuts);
        for &n in &sub[1..] {
            let (nr, hits) = r.extend(n, cuts);
            r = nr;
            for q in hits.iter() {
                counts[q] += 1;
            }
        }
        fwd = Some(match fwd {
            None => r.fwd,
            Some(f) => {
                let (hits, nf) = join_resources(&f, &r);
                for q in hits.iter() {
                    counts[q] += 1;
                }
                nf
            }
        });
    }
    counts
}

fn c9_coefficients() -> Outcome {
    let inst = gen(8, 3.6, 1, 900);
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let inner: Vec<usize> = inst.tasks.iter().chain(&inst.chargers).copied().collect();
    let mut nonzero = 0;
    for k in 0..10_000 {
        let mut memory = NodeSet::empty();
        for n in 0..inst.n() {
            if rng.gen_bool(0.6) {
                memory.insert(n);
            }
        }
        let mut t = inst.tasks.clone();
        for i in (1..t.len()).rev() {
            t.swap(i, rng.gen_range(0..=i));
        }
        let cut = Cut::new([t[0], t[1], t[2]], memory);
        let mut nodes = vec![inst.depots[rng.gen_range(0..inst.depots.len())]];
        for _ in 0..rng.gen_range(0..12) {
            let n = inner[rng.gen_range(0..inner.len())];
            if *nodes.last().unwrap() != n {
                nodes.push(n);
            }
        }
        nodes.push(inst.depots[rng.gen_range(0..inst.depots.len())]);
        let want = coefficient_by_definition(&nodes, &cut);
        let got = [
            lmsri_coefficient(&nodes, &cut),
            lmsri_coefficient_runs(&nodes, &cut),
            coefficient_by_labels(&nodes, std::slice::from_ref(&cut), &inst)[0],
        ];
        ensure(got.iter().all(|&g| g == want), || {
            format!("pair {k}: {nodes:?} {cut:?}: {got:?} vs {want}")
        })?;
        nonzero += (want > 0) as usize;
    }
    Ok(format!(
        "10000 pairs exact ({nonzero} with positive coefficient)"
    ))
}

fn c10_speed() -> Outcome {
    let grid = Grid {
        tasks: vec![12, 14, 16],
        tb_ratios: vec![3.6, 4.2],
        levels: vec![1],
        seeds: vec![0, 1, 2],
        area: (2, 2),
        fleet: None,
    };
    let instances = grid_instances(&grid).map_err(|e| e.to_string())?;
    let mut ratios = Vec::new();
    for gi in &instances {
        let cfg = SolveConfig::new(Variant::Hom, ElementarityMode::Adaptive);
        let row = compare(gi, &cfg).map_err(|e| e.to_string())?;
        ensure(row.bound_delta <= TOL_BOUND, || {
            format!("{}: bounds differ by {}", gi.id, row.bound_delta)
        })?;
        ratios.push(row.time_ratio);
    }
    ratios.sort_by(f64::total_cmp);
    let median = ratios[ratios.len() / 2];
    ensure(median <= SPEED_HARD_LIMIT, || {
        format!("median bilevel/pathwise {median:.2} > {SPEED_HARD_LIMIT}")
    })?;
    let note = if median <= SPEED_TARGET {
        ""
    } else {
        " (above 1.0 target, within soft gate)"
    };
    Ok(format!(
        "{} instances, median bilevel/pathwise wall time {median:.2}{note}, range {:.2}..{:.2}",
        ratios.len(),
        ratios[0],
        ratios[ratios.len() - 1]
    ))
}

fn c11_scale() -> Outcome {
    let mut lines = Vec::new();
    for seed in 0..3u64 {
        let inst = gen(20, 3.6, 1, seed);
        let mut cfg = SolveConfig::new(Variant::Hom, ElementarityMode::Adaptive);
        cfg.cuts = true;
        cfg.time_limit = SCALE_TIME;
        let t = Instant::now();
        let r = adaptive_solve(&inst, &cfg).map_err(|e| e.to_string())?;
        let secs = t.elapsed().as_secs_f64();
        ensure(r.status == Termination::Converged, || {
            format!("seed {seed}: {:?}", r.status)
        })?;
        ensure(secs < SCALE_TIME.as_secs_f64(), || {
            format!("seed {seed}: {secs:.0}s")
        })?;
        ensure(r.lp_bound <= r.ip_value + TOL_BOUND, || {
            format!("seed {seed}: lp {} > ip {}", r.lp_bound, r.ip_value)
        })?;
        let gap = r
            .gap
            .ok_or_else(|| format!("seed {seed}: no integer solution"))?;
        ensure(gap <= SCALE_GAP, || {
            format!("seed {seed}: gap {:.1}%", gap * 100.0)
        })?;
        lines.push(format!(
            "s{seed} gap {:.2}% {} cuts {secs:.1}s",
            gap * 100.0,
            r.cuts.len()
        ));
    }
    Ok(lines.join("; "))
}

/// Instance with a small fleet, so machines must charge.
fn gen_fleet(n_tasks: usize, fleet: u32, t_over_b: f64, n_levels: usize, seed: u64) -> Instance {
    generate_instance(&GenParams {
        n_tasks,
        t_over_b,
        n_levels,
        fleet: Some(fleet),
        seed,
        ..GenParams::default()
    })
    .unwrap()
}

fn c12_benchmarks() -> Outcome {
    let mut both = 0;
    let mut savings = Vec::new();
    for seed in 0..8u64 {
        let inst = gen_fleet(6, 3, 4.2, 1, seed);
        let cfg = SolveConfig::new(Variant::Hom, ElementarityMode::Adaptive);
        let (integrated, rtc) = integrated_vs_sequential(&inst, &cfg).map_err(|e| e.to_string())?;
        if !(rtc.is_complete() && integrated.ip_value.is_finite()) {
            continue;
        }
        both += 1;
        ensure(integrated.ip_value <= rtc.cost + TOL_ORDER, || {
            format!(
                "seed {seed}: integrated {} above route-then-charge {}",
                integrated.ip_value, rtc.cost
            )
        })?;
        savings.push(1.0 - integrated.ip_value / rtc.cost);
    }
    ensure(both > 0, || "route-then-charge never completed".into())?;
    let mut het_checked = 0;
    let mut het_savings = Vec::new();
    for seed in 0..8u64 {
        let inst = gen_fleet(8, 3, 4.2, 3, seed);
        let cfg = SolveConfig::new(Variant::Het, ElementarityMode::Adaptive);
        let c = het_vs_hom(&inst, &cfg).map_err(|e| e.to_string())?;
        if !(c.het_total.is_finite() && c.hom_total_repriced.is_finite()) {
            continue;
        }
        het_checked += 1;
        ensure(
            c.hom_charging_rescheduled <= c.hom_charging_repriced + TOL_ORDER,
            || format!("seed {seed}: rescheduling raised charging cost"),
        )?;
        ensure(
            c.het_charging <= c.hom_charging_repriced + TOL_ORDER,
            || {
                format!(
                    "seed {seed}: het charging {} above hom schedule repriced {}",
                    c.het_charging, c.hom_charging_repriced
                )
            },
        )?;
        if c.hom_charging_repriced > 0.0 {
            het_savings.push(1.0 - c.het_charging / c.hom_charging_repriced);
        }
    }
    ensure(het_checked > 0, || {
        "no heterogeneous comparison completed".into()
    })?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    Ok(format!(
        "integrated ≤ route-then-charge on all {both}/8 comparable (mean saving {:.1}%); het charging ≤ hom repriced on {het_checked}/8 (mean saving {:.1}%)",
        100.0 * mean(&savings),
        100.0 * mean(&het_savings)
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("charging DP matches LP", c1_charging_dp),
        ("incremental rebalancing", c2_rebalancing),
        ("pricing exactness", c3_pricing_exactness),
        ("cross-engine bounds", c4_cross_engine),
        ("adaptive ng optimality", c5_adaptive_ng),
        ("bound ordering", c6_bound_ordering),
        ("cut validity and effect", c7_cuts),
        ("dominance propagation", c8_dominance),
        ("lm-SRI coefficients", c9_coefficients),
        ("relative pricing speed", c10_speed),
        ("20-task scale", c11_scale),
        ("practical benchmarks", c12_benchmarks),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.1}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.1}s]: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
