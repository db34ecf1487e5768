//! Problem data: the operations graph, arc metrics, battery and horizon.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path as FsPath;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::NodeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Depot,
    Task,
    Charger,
}

/// An ERSP instance with dense node indices.
///
/// Nodes are ordered depots, then tasks, then chargers. Arc metrics are
/// stored as row-major `n × n` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub ids: Vec<String>,
    pub kinds: Vec<NodeKind>,
    pub depots: Vec<usize>,
    pub tasks: Vec<usize>,
    pub chargers: Vec<usize>,
    pub coords: Vec<[f64; 2]>,
    pub time: Vec<f64>,
    pub cost: Vec<f64>,
    pub battery_use: Vec<f64>,
    pub battery: f64,
    pub horizon: f64,
    pub mu_rate: f64,
    /// Unit charging cost per node, zero for non-chargers.
    pub delta: Vec<f64>,
    pub v_start: Vec<u32>,
    pub v_end: Vec<u32>,
    /// Distinct charging costs in increasing order.
    pub levels: Vec<f64>,
    /// 1-based position of `delta[i]` in `levels`; 0 for non-chargers.
    pub level_of: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GenParams {
    pub n_tasks: usize,
    pub area_width: u32,
    pub area_height: u32,
    pub t_over_b: f64,
    pub mu_rate: f64,
    pub n_levels: usize,
    /// Machines spread round-robin over the depots; defaults to `n_tasks`.
    pub fleet: Option<u32>,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n_tasks: 8,
            area_width: 2,
            area_height: 2,
            t_over_b: 3.0,
            mu_rate: 0.4,
            n_levels: 1,
            fleet: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("invalid parameters: n_tasks ≥ 1 required")]
    NoTasks,
    #[error("invalid parameters: area must have positive width and height")]
    ZeroArea,
    #[error("invalid parameters: D ≥ 1 required")]
    NoLevels,
    #[error("invalid parameters: D ≤ number of chargers ({0}) required")]
    TooManyLevels(usize),
    #[error("invalid parameters: {0} must be positive")]
    NonPositive(&'static str),
    #[error("invalid parameters: at most {0} nodes supported")]
    TooManyNodes(usize),
}

#[derive(Debug, Error)]
pub enum InstanceIoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// A single failed invariant, as reported by [`validate_instance`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptySet(&'static str),
    DuplicateId(String),
    NonPositiveArc {
        metric: &'static str,
        from: String,
        to: String,
    },
    Triangle {
        metric: &'static str,
        a: String,
        b: String,
        c: String,
    },
    NonPositiveDelta(String),
    NonPositive(&'static str),
    FleetBalance,
    NoMachines,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySet(s) => write!(f, "node set {s} is empty"),
            Violation::DuplicateId(id) => write!(f, "node id {id} used more than once"),
            Violation::NonPositiveArc { metric, from, to } => {
                write!(f, "{metric}({from},{to}) must be positive")
            }
            Violation::Triangle { metric, a, b, c } => {
                write!(
                    f,
                    "{metric} violates the triangle inequality on ({a},{b},{c})"
                )
            }
            Violation::NonPositiveDelta(id) => write!(f, "delta({id}) must be positive"),
            Violation::NonPositive(field) => write!(f, "{field} must be positive"),
            Violation::FleetBalance => write!(f, "sum of v_start must be at least sum of v_end"),
            Violation::NoMachines => write!(f, "sum of v_start must be at least 1"),
        }
    }
}

impl Instance {
    #[inline]
    pub fn n(&self) -> usize {
        self.ids.len()
    }
    #[inline]
    pub fn t(&self, i: usize, j: usize) -> f64 {
        self.time[i * self.n() + j]
    }
    #[inline]
    pub fn c(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.n() + j]
    }
    #[inline]
    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.battery_use[i * self.n() + j]
    }
    #[inline]
    pub fn is_depot(&self, i: usize) -> bool {
        self.kinds[i] == NodeKind::Depot
    }
    #[inline]
    pub fn is_task(&self, i: usize) -> bool {
        self.kinds[i] == NodeKind::Task
    }
    #[inline]
    pub fn is_charger(&self, i: usize) -> bool {
        self.kinds[i] == NodeKind::Charger
    }
    /// Depot or charger: a node where subpaths start and end.
    #[inline]
    pub fn is_hub(&self, i: usize) -> bool {
        !self.is_task(i)
    }

    pub fn task_set(&self) -> NodeSet {
        NodeSet::from_iter_idx(self.tasks.iter().copied())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.levels.len() <= 1
    }

    pub fn total_arc_cost(&self) -> f64 {
        let n = self.n();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.c(i, j))
            .sum()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    /// Builds an instance with Euclidean metrics derived from `coords`.
    #[allow(clippy::too_many_arguments)]
    pub fn euclidean(
        ids: Vec<String>,
        kinds: Vec<NodeKind>,
        coords: Vec<[f64; 2]>,
        battery: f64,
        horizon: f64,
        mu_rate: f64,
        delta: Vec<f64>,
        v_start: Vec<u32>,
        v_end: Vec<u32>,
    ) -> Self {
        let n = ids.len();
        let mut time = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                time[i * n + j] = dist(coords[i], coords[j]);
            }
        }
        let battery_use = time.iter().map(|d| mu_rate * d).collect();
        let mut inst = Instance {
            ids,
            depots: index_of(&kinds, NodeKind::Depot),
            tasks: index_of(&kinds, NodeKind::Task),
            chargers: index_of(&kinds, NodeKind::Charger),
            kinds,
            coords,
            cost: time.clone(),
            time,
            battery_use,
            battery,
            horizon,
            mu_rate,
            delta,
            v_start,
            v_end,
            levels: Vec::new(),
            level_of: Vec::new(),
        };
        inst.refresh_levels();
        inst
    }

    /// Recomputes `levels`/`level_of` after editing `delta`.
    pub fn refresh_levels(&mut self) {
        let mut levels: Vec<f64> = self.chargers.iter().map(|&c| self.delta[c]).collect();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        self.level_of = (0..self.n())
            .map(|i| {
                if self.is_charger(i) {
                    levels.iter().position(|&l| l == self.delta[i]).unwrap() + 1
                } else {
                    0
                }
            })
            .collect();
        self.levels = levels;
    }

    /// Copy of the instance with every charger priced at `delta`.
    pub fn with_uniform_delta(&self, delta: f64) -> Self {
        let mut inst = self.clone();
        for &c in &inst.chargers.clone() {
            inst.delta[c] = delta;
        }
        inst.refresh_levels();
        inst
    }

    /// Mean unit charging cost over chargers.
    pub fn mean_delta(&self) -> f64 {
        if self.chargers.is_empty() {
            return 1.0;
        }
        self.chargers.iter().map(|&c| self.delta[c]).sum::<f64>() / self.chargers.len() as f64
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn index_of(kinds: &[NodeKind], k: NodeKind) -> Vec<usize> {
    kinds
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == k)
        .map(|(i, _)| i)
        .collect()
}

/// Evenly spaced charging cost levels with mean 1.
pub fn charge_levels(d: usize) -> Vec<f64> {
    if d == 1 {
        return vec![1.0];
    }
    (0..d).map(|k| 0.5 + k as f64 / (d - 1) as f64).collect()
}

/// Generates a synthetic instance on a `W × H` lattice.
///
/// Depots sit on the four corners, chargers on every other lattice point and
/// tasks are uniform in the rectangle. Battery capacity is 1.
pub fn generate_instance(p: &GenParams) -> Result<Instance, GenError> {
    if p.n_tasks == 0 {
        return Err(GenError::NoTasks);
    }
    if p.area_width == 0 || p.area_height == 0 {
        return Err(GenError::ZeroArea);
    }
    if p.n_levels == 0 {
        return Err(GenError::NoLevels);
    }
    if !(p.t_over_b > 0.0) {
        return Err(GenError::NonPositive("T_over_B"));
    }
    if !(p.mu_rate > 0.0) {
        return Err(GenError::NonPositive("mu_rate"));
    }
    let (w, h) = (p.area_width as usize, p.area_height as usize);
    let n_chargers = (w + 1) * (h + 1) - 4;
    if p.n_levels > n_chargers {
        return Err(GenError::TooManyLevels(n_chargers));
    }
    let n = 4 + p.n_tasks + n_chargers;
    if n > NodeSet::CAPACITY {
        return Err(GenError::TooManyNodes(NodeSet::CAPACITY));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (wf, hf) = (w as f64, h as f64);
    let mut ids = Vec::with_capacity(n);
    let mut kinds = Vec::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    for (k, xy) in [[0.0, 0.0], [wf, 0.0], [0.0, hf], [wf, hf]]
        .into_iter()
        .enumerate()
    {
        ids.push(format!("d{k}"));
        kinds.push(NodeKind::Depot);
        coords.push(xy);
    }
    for k in 0..p.n_tasks {
        ids.push(format!("t{k}"));
        kinds.push(NodeKind::Task);
        coords.push([rng.gen_range(0.0..wf), rng.gen_range(0.0..hf)]);
    }
    let levels = charge_levels(p.n_levels);
    let mut delta = vec![0.0; n];
    let mut k = 0;
    for y in 0..=h {
        for x in 0..=w {
            let corner = (x == 0 || x == w) && (y == 0 || y == h);
            if corner {
                continue;
            }
            delta[ids.len()] = levels[k % levels.len()];
            ids.push(format!("r{k}"));
            kinds.push(NodeKind::Charger);
            coords.push([x as f64, y as f64]);
            k += 1;
        }
    }
    let fleet = p.fleet.unwrap_or(p.n_tasks as u32);
    let mut v_start = vec![0; n];
    for m in 0..fleet as usize {
        v_start[m % 4] += 1;
    }
    Ok(Instance::euclidean(
        ids,
        kinds,
        coords,
        1.0,
        p.t_over_b,
        p.mu_rate,
        delta,
        v_start,
        vec![0; n],
    ))
}

/// Lists every violated instance invariant.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.depots.is_empty() {
        out.push(Violation::EmptySet("depots"));
    }
    if inst.tasks.is_empty() {
        out.push(Violation::EmptySet("tasks"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for id in &inst.ids {
        if !seen.insert(id) {
            out.push(Violation::DuplicateId(id.clone()));
        }
    }
    let n = inst.n();
    let metrics: [(&'static str, &Vec<f64>); 3] = [
        ("time", &inst.time),
        ("cost", &inst.cost),
        ("battery_use", &inst.battery_use),
    ];
    for (name, m) in metrics {
        for i in 0..n {
            for j in 0..n {
                if i != j && !(m[i * n + j] > 0.0) {
                    out.push(Violation::NonPositiveArc {
                        metric: name,
                        from: inst.ids[i].clone(),
                        to: inst.ids[j].clone(),
                    });
                }
            }
        }
        for a in 0..n {
            for c in 0..n {
                if a == c {
                    continue;
                }
                let direct = m[a * n + c];
                for b in 0..n {
                    if b == a || b == c {
                        continue;
                    }
                    let via = m[a * n + b] + m[b * n + c];
                    if direct > via + 1e-12 * (1.0 + via.abs()) {
                        out.push(Violation::Triangle {
                            metric: name,
                            a: inst.ids[a].clone(),
                            b: inst.ids[b].clone(),
                            c: inst.ids[c].clone(),
                        });
                    }
                }
            }
        }
    }
    for &r in &inst.chargers {
        if !(inst.delta[r] > 0.0) {
            out.push(Violation::NonPositiveDelta(inst.ids[r].clone()));
        }
    }
    if !(inst.battery > 0.0) {
        out.push(Violation::NonPositive("B"));
    }
    if !(inst.horizon > 0.0) {
        out.push(Violation::NonPositive("T"));
    }
    let starts: u32 = inst.depots.iter().map(|&d| inst.v_start[d]).sum();
    let ends: u32 = inst.depots.iter().map(|&d| inst.v_end[d]).sum();
    if starts < ends {
        out.push(Violation::FleetBalance);
    }
    if starts < 1 {
        out.push(Violation::NoMachines);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    depots: Vec<String>,
    tasks: Vec<String>,
    chargers: Vec<String>,
    coords: BTreeMap<String, [f64; 2]>,
    #[serde(rename = "B")]
    battery: f64,
    #[serde(rename = "T")]
    horizon: f64,
    mu_rate: f64,
    delta: BTreeMap<String, f64>,
    v_start: BTreeMap<String, u32>,
    v_end: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    time: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    cost: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    battery_use: BTreeMap<String, f64>,
}

pub fn instance_to_json(inst: &Instance) -> String {
    let names = |v: &[usize]| v.iter().map(|&i| inst.ids[i].clone()).collect::<Vec<_>>();
    let derived = Instance::euclidean(
        inst.ids.clone(),
        inst.kinds.clone(),
        inst.coords.clone(),
        inst.battery,
        inst.horizon,
        inst.mu_rate,
        inst.delta.clone(),
        inst.v_start.clone(),
        inst.v_end.clone(),
    );
    let overrides = |mine: &[f64], base: &[f64]| {
        let n = inst.n();
        let mut m = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && mine[i * n + j].to_bits() != base[i * n + j].to_bits() {
                    m.insert(format!("{},{}", inst.ids[i], inst.ids[j]), mine[i * n + j]);
                }
            }
        }
        m
    };
    let file = InstanceFile {
        depots: names(&inst.depots),
        tasks: names(&inst.tasks),
        chargers: names(&inst.chargers),
        coords: (0..inst.n())
            .map(|i| (inst.ids[i].clone(), inst.coords[i]))
            .collect(),
        battery: inst.battery,
        horizon: inst.horizon,
        mu_rate: inst.mu_rate,
        delta: inst
            .chargers
            .iter()
            .map(|&i| (inst.ids[i].clone(), inst.delta[i]))
            .collect(),
        v_start: inst
            .depots
            .iter()
            .map(|&i| (inst.ids[i].clone(), inst.v_start[i]))
            .collect(),
        v_end: inst
            .depots
            .iter()
            .map(|&i| (inst.ids[i].clone(), inst.v_end[i]))
            .collect(),
        time: overrides(&inst.time, &derived.time),
        cost: overrides(&inst.cost, &derived.cost),
        battery_use: overrides(&inst.battery_use, &derived.battery_use),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn instance_from_json(text: &str) -> Result<Instance, InstanceIoError> {
    let f: InstanceFile = serde_json::from_str(text)?;
    let mut ids = Vec::new();
    let mut kinds = Vec::new();
    for (list, kind) in [
        (&f.depots, NodeKind::Depot),
        (&f.tasks, NodeKind::Task),
        (&f.chargers, NodeKind::Charger),
    ] {
        for id in list {
            ids.push(id.clone());
            kinds.push(kind);
        }
    }
    if ids.len() > NodeSet::CAPACITY {
        return Err(InstanceIoError::Invalid(format!(
            "at most {} nodes supported",
            NodeSet::CAPACITY
        )));
    }
    let n = ids.len();
    let lookup = |field: &str, id: &str| -> Result<usize, InstanceIoError> {
        ids.iter()
            .position(|s| s == id)
            .ok_or_else(|| InstanceIoError::Invalid(format!("{field}: unknown node id {id:?}")))
    };
    let mut coords = vec![[f64::NAN; 2]; n];
    for (id, xy) in &f.coords {
        coords[lookup("coords", id)?] = *xy;
    }
    if let Some(i) = coords.iter().position(|c| c[0].is_nan()) {
        return Err(InstanceIoError::Invalid(format!(
            "coords: missing entry for {}",
            ids[i]
        )));
    }
    let mut delta = vec![0.0; n];
    for (id, v) in &f.delta {
        delta[lookup("delta", id)?] = *v;
    }
    for (k, &kind) in kinds.iter().enumerate() {
        if kind == NodeKind::Charger && !f.delta.contains_key(&ids[k]) {
            return Err(InstanceIoError::Invalid(format!(
                "delta: missing entry for {}",
                ids[k]
            )));
        }
    }
    let mut v_start = vec![0; n];
    for (id, v) in &f.v_start {
        v_start[lookup("v_start", id)?] = *v;
    }
    let mut v_end = vec![0; n];
    for (id, v) in &f.v_end {
        v_end[lookup("v_end", id)?] = *v;
    }
    let mut inst = Instance::euclidean(
        ids.clone(),
        kinds,
        coords,
        f.battery,
        f.horizon,
        f.mu_rate,
        delta,
        v_start,
        v_end,
    );
    for (field, pairs) in [
        ("time", &f.time),
        ("cost", &f.cost),
        ("battery_use", &f.battery_use),
    ] {
        for (key, &v) in pairs {
            let (a, b) = key.split_once(',').ok_or_else(|| {
                InstanceIoError::Invalid(format!("{field}: key {key:?} is not of the form \"a,b\""))
            })?;
            let (i, j) = (lookup(field, a)?, lookup(field, b)?);
            let m = match field {
                "time" => &mut inst.time,
                "cost" => &mut inst.cost,
                _ => &mut inst.battery_use,
            };
            m[i * n + j] = v;
        }
    }
    Ok(inst)
}

pub fn save_instance(inst: &Instance, path: &FsPath) -> Result<(), InstanceIoError> {
    std::fs::write(path, instance_to_json(inst))?;
    Ok(())
}

pub fn load_instance(path: &FsPath) -> Result<Instance, InstanceIoError> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> GenParams {
        GenParams {
            n_tasks: 6,
            n_levels: 2,
            seed: 42,
            ..GenParams::default()
        }
    }

    #[test]
    fn rejects_bad_params() {
        let p = GenParams {
            n_tasks: 0,
            ..params()
        };
        assert!(generate_instance(&p)
            .unwrap_err()
            .to_string()
            .contains("n_tasks ≥ 1"));
        let p = GenParams {
            area_width: 0,
            ..params()
        };
        assert_eq!(generate_instance(&p).unwrap_err(), GenError::ZeroArea);
        let p = GenParams {
            n_levels: 9,
            ..params()
        };
        assert!(generate_instance(&p)
            .unwrap_err()
            .to_string()
            .contains("D ≤ number of chargers"));
    }

    #[test]
    fn layout() {
        let inst = generate_instance(&params()).unwrap();
        assert_eq!(inst.depots.len(), 4);
        assert_eq!(inst.chargers.len(), 5);
        assert_eq!(inst.levels, vec![0.5, 1.5]);
        assert_eq!(inst.battery, 1.0);
        assert_eq!(inst.horizon, 3.0);
        for &t in &inst.tasks {
            let [x, y] = inst.coords[t];
            assert!((0.0..2.0).contains(&x) && (0.0..2.0).contains(&y));
        }
        assert_eq!(inst.depots.iter().map(|&d| inst.v_start[d]).sum::<u32>(), 6);
        let i = inst.tasks[0];
        let j = inst.chargers[0];
        assert_eq!(inst.b(i, j), 0.4 * inst.t(i, j));
        assert_eq!(inst.c(i, j), inst.t(i, j));
    }

    #[test]
    fn single_level_is_homogeneous() {
        let inst = generate_instance(&GenParams {
            n_levels: 1,
            ..params()
        })
        .unwrap();
        assert!(inst.is_homogeneous());
        assert!(inst.chargers.iter().all(|&c| inst.delta[c] == 1.0));
    }

    #[test]
    fn deterministic() {
        let a = instance_to_json(&generate_instance(&params()).unwrap());
        let b = instance_to_json(&generate_instance(&params()).unwrap());
        assert_eq!(a, b);
        let c = instance_to_json(
            &generate_instance(&GenParams {
                seed: 43,
                ..params()
            })
            .unwrap(),
        );
        assert_ne!(a, c);
    }

    #[test]
    fn generated_is_valid() {
        for seed in 0..10 {
            let inst = generate_instance(&GenParams { seed, ..params() }).unwrap();
            assert!(validate_instance(&inst).is_empty());
        }
    }

    #[test]
    fn triangle_violation_named() {
        let mut inst = generate_instance(&params()).unwrap();
        let (a, c) = (inst.tasks[0], inst.tasks[1]);
        let n = inst.n();
        // Find the tightest intermediate, then exceed it by a hair.
        let b = (0..n)
            .filter(|&b| b != a && b != c)
            .min_by(|&x, &y| {
                (inst.t(a, x) + inst.t(x, c)).total_cmp(&(inst.t(a, y) + inst.t(y, c)))
            })
            .unwrap();
        inst.time[a * n + c] = inst.t(a, b) + inst.t(b, c) + 1e-6;
        let v = validate_instance(&inst);
        let expected = Violation::Triangle {
            metric: "time",
            a: inst.ids[a].clone(),
            b: inst.ids[b].clone(),
            c: inst.ids[c].clone(),
        };
        assert_eq!(v, vec![expected]);
    }

    #[test]
    fn zero_delta_flagged() {
        let mut inst = generate_instance(&params()).unwrap();
        let r = inst.chargers[2];
        inst.delta[r] = 0.0;
        assert_eq!(
            validate_instance(&inst),
            vec![Violation::NonPositiveDelta(inst.ids[r].clone())]
        );
    }

    #[test]
    fn round_trip() {
        let mut inst = generate_instance(&params()).unwrap();
        let n = inst.n();
        inst.cost[n + 2] *= 1.5;
        inst.v_end[inst.depots[1]] = 1;
        let back = instance_from_json(&instance_to_json(&inst)).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn missing_battery_field() {
        let inst = generate_instance(&params()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&instance_to_json(&inst)).unwrap();
        v.as_object_mut().unwrap().remove("B");
        let err = instance_from_json(&v.to_string()).unwrap_err().to_string();
        assert!(err.contains("`B`"), "{err}");
    }

    #[test]
    fn non_numeric_coordinate() {
        let inst = generate_instance(&params()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&instance_to_json(&inst)).unwrap();
        v["coords"]["t0"][0] = serde_json::Value::String("x".into());
        let text = serde_json::to_string_pretty(&v).unwrap();
        let err = instance_from_json(&text).unwrap_err();
        assert!(matches!(err, InstanceIoError::Parse(_)));
        assert!(err.to_string().contains("line"), "{err}");
    }
}
