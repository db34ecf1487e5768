use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::Instance;

/// Dual values of the restricted master, indexed by node (and by cut for `lambda`).
///
/// `kappa` prices start-depot rows, `mu` end-depot rows (≥ 0), `nu` task rows
/// and `lambda` cut rows (≤ 0). Entries of other node kinds are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualPrices {
    pub kappa: Vec<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl DualPrices {
    pub fn zeros(n_nodes: usize, n_cuts: usize) -> Self {
        Self {
            kappa: vec![0.0; n_nodes],
            mu: vec![0.0; n_nodes],
            nu: vec![0.0; n_nodes],
            lambda: vec![0.0; n_cuts],
        }
    }

    /// Dual of cut `q`, zero when the cut has no recorded dual.
    #[inline]
    pub fn cut(&self, q: usize) -> f64 {
        self.lambda.get(q).copied().unwrap_or(0.0)
    }

    /// Sign-consistent random duals, for stress tests and oracle checks.
    pub fn random(inst: &Instance, n_cuts: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d = Self::zeros(inst.n(), n_cuts);
        for &i in &inst.depots {
            d.kappa[i] = rng.gen_range(-1.0..1.0);
            d.mu[i] = rng.gen_range(0.0..0.5);
        }
        for &i in &inst.tasks {
            d.nu[i] = rng.gen_range(0.0..3.0);
        }
        for l in &mut d.lambda {
            *l = -rng.gen_range(0.0..1.5);
        }
        d
    }
}
