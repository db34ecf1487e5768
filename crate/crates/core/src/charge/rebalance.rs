//! Incremental rebalancing of charging plans under heterogeneous unit costs.
//!
//! Level `d` (1-based) has unit cost `levels[d-1]`, increasing in `d`.
//! `Z_d` is the charge that can be shifted onto earlier stations of level at
//! most `d`; slices below store `Z_1..Z_D` with `Z_0 = 0` implied.

use super::{find_charge_sequence, ChargeError, ChargePlan};
use crate::scalar::Scalar;

/// Cost of adding `tau` units after rebalancing onto cheaper earlier stations,
/// for a join station of level `f`.
pub fn charging_cost_g<S: Scalar>(tau: &S, z: &[S], levels: &[S], f: usize) -> S {
    let mut cost = S::zero();
    let mut prev = S::zero();
    for d in 1..f {
        let width = z[d - 1].clone() - prev.clone();
        let part = S::min_of(&width, &(tau.clone() - prev.clone()).pos_part());
        cost = cost + levels[d - 1].clone() * part;
        prev = z[d - 1].clone();
    }
    cost + levels[f - 1].clone() * (tau.clone() - prev).pos_part()
}

/// Applies one subpath extension to the slack vector.
///
/// `total_b` is the consumption before the extension. Returns the total extra
/// charge and its rebalanced cost.
pub fn slack_update<S: Scalar>(
    z: &mut [S],
    total_b: &S,
    b_next: &S,
    f: usize,
    levels: &[S],
    cap: &S,
) -> (S, S) {
    let tau = S::min_of(
        b_next,
        &(total_b.clone() + b_next.clone() - cap.clone()).pos_part(),
    );
    let cost = charging_cost_g(&tau, z, levels, f);
    for (d, zd) in z.iter_mut().enumerate() {
        *zd = if d + 1 < f {
            (zd.clone() - tau.clone()).pos_part()
        } else {
            S::min_of(total_b, &(cap.clone() - b_next.clone()))
        };
    }
    (tau, cost)
}

/// Full rebalancing state of a subpath sequence, including the plan itself.
#[derive(Clone, Debug, PartialEq)]
pub struct RebalanceState<S> {
    pub cap: S,
    pub levels: Vec<S>,
    pub b: Vec<S>,
    /// Level (1-based) of each interior charger.
    pub station_level: Vec<usize>,
    /// Cheapest interior charger (0-based), ties to the largest index.
    pub ell: Option<usize>,
    /// `omega[d-1]`: 1-based charger index for level `d`, 0 when none.
    pub omega: Vec<usize>,
    /// `Z_1..Z_D`.
    pub z: Vec<S>,
    pub tau: Vec<S>,
    pub total_b: S,
    pub cost: S,
}

impl<S: Scalar> RebalanceState<S> {
    pub fn new(cap: S, levels: Vec<S>, b_first: S) -> Result<Self, ChargeError> {
        if b_first > cap {
            return Err(ChargeError::Infeasible(0));
        }
        let d = levels.len();
        Ok(RebalanceState {
            cap,
            levels,
            b: vec![b_first.clone()],
            station_level: Vec::new(),
            ell: None,
            omega: vec![0; d],
            z: vec![S::zero(); d],
            tau: Vec::new(),
            total_b: b_first,
            cost: S::zero(),
        })
    }

    /// Joins a subpath using `b_next` through a charger of level `f`.
    pub fn extend(&mut self, b_next: S, f: usize) -> Result<S, ChargeError> {
        if b_next > self.cap {
            return Err(ChargeError::Infeasible(self.b.len()));
        }
        let m = self.b.len(); // 1-based index of the new charger
        let old_z = self.z.clone();
        let (tau, inc) = slack_update(
            &mut self.z,
            &self.total_b,
            &b_next,
            f,
            &self.levels,
            &self.cap,
        );
        let mut prev = S::zero();
        for d in 1..f {
            let part = S::min_of(
                &(old_z[d - 1].clone() - prev.clone()),
                &(tau.clone() - prev.clone()).pos_part(),
            );
            let w = self.omega[d - 1];
            if w > 0 {
                self.tau[w - 1] = self.tau[w - 1].clone() + part;
            }
            prev = old_z[d - 1].clone();
        }
        self.tau.push((tau - prev).pos_part());
        self.ell = match self.ell {
            Some(l) if self.station_level[l] < f => Some(l),
            _ => Some(m - 1),
        };
        self.station_level.push(f);
        self.omega[f - 1] = m;
        for w in self.omega.iter_mut().skip(f) {
            *w = 0;
        }
        self.b.push(b_next.clone());
        self.total_b = self.total_b.clone() + b_next;
        self.cost = self.cost.clone() + inc.clone();
        Ok(inc)
    }

    /// Recomputes the state directly from the definitions.
    pub fn from_scratch(
        cap: S,
        levels: Vec<S>,
        b: Vec<S>,
        station_level: Vec<usize>,
    ) -> Result<Self, ChargeError> {
        let delta: Vec<S> = station_level
            .iter()
            .map(|&l| levels[l - 1].clone())
            .collect();
        let plan: ChargePlan<S> = find_charge_sequence(&b, &delta, &cap)?;
        let d = levels.len();
        let mut ell = None;
        for (k, &l) in station_level.iter().enumerate() {
            if ell.map_or(true, |e: usize| l <= station_level[e]) {
                ell = Some(k);
            }
        }
        let mut omega = vec![0; d];
        let mut z = vec![S::zero(); d];
        if let Some(l) = ell {
            let mut floor = l + 1; // 1-based lower bound
            for lev in 1..=d {
                let found = (floor..=station_level.len())
                    .rev()
                    .find(|&i| station_level[i - 1] == lev);
                if let Some(i) = found {
                    omega[lev - 1] = i;
                    floor = floor.max(i);
                }
            }
        }
        let mut reach = 0;
        for lev in 0..d {
            reach = reach.max(omega[lev]);
            z[lev] = (0..reach).fold(S::zero(), |a, j| a + b[j].clone() - plan.tau[j].clone());
        }
        let total_b = b.iter().fold(S::zero(), |a, x| a + x.clone());
        Ok(RebalanceState {
            cap,
            levels,
            b,
            station_level,
            ell,
            omega,
            z,
            tau: plan.tau,
            total_b,
            cost: plan.cost,
        })
    }

    pub fn plan(&self) -> ChargePlan<S> {
        let delta: Vec<S> = self
            .station_level
            .iter()
            .map(|&l| self.levels[l - 1].clone())
            .collect();
        ChargePlan::build(self.tau.clone(), &self.b, &delta, &self.cap)
    }
}
