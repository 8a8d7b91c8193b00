//! Innovation fields on the forward-rate lattice.
//!
//! Draws are counter-based: the value at `(k, ell)` is a pure function of
//! `(seed, k, ell)`, so a field can be regenerated cell by cell, in any
//! order and on any number of threads, with bit-identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{HjmError, Result};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a seed with lattice coordinates into a per-cell stream key.
fn cell_key(seed: u64, k: usize, ell: usize) -> u64 {
    let h = splitmix64(seed);
    let h = splitmix64(h ^ k as u64);
    splitmix64(h ^ ell as u64)
}

/// Standard-normal draw at lattice point `(k, ell)` under `seed`.
pub fn standard_normal_at(seed: u64, k: usize, ell: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cell_key(seed, k, ell));
    StandardNormal.sample(&mut rng)
}

/// Derives an independent stream seed, used for per-replication seeding in
/// Monte Carlo drivers.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(seed ^ a.rotate_left(17)) ^ b)
}

/// Triangular field of i.i.d. standard-normal innovations.
///
/// Stores rows `k = 1 ..= k_max`, row `k` holding columns
/// `0 ..= k_max + horizon - k`, which is exactly the noise consumed when
/// simulating a forward surface with `K = k_max` rows and maximal maturity
/// `L = horizon`. Cells outside the stored triangle are available through
/// [`NoiseField::eta`], regenerated from the same counter scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseField {
    k_max: usize,
    horizon: usize,
    seed: u64,
    entries: Vec<f64>,
}

/// Generates the innovation field driving a `K`-row, maturity-`L` surface.
///
/// Deterministic in `seed` and independent of iteration order.
pub fn generate_noise(k_rows: usize, horizon: usize, seed: u64) -> Result<NoiseField> {
    if k_rows == 0 {
        return Err(HjmError::InvalidParameter {
            name: "K",
            reason: "must be >= 1".to_string(),
        });
    }
    if horizon == 0 {
        return Err(HjmError::InvalidParameter {
            name: "L",
            reason: "must be >= 1".to_string(),
        });
    }
    Ok(NoiseField::from_counter(k_rows, horizon, seed))
}

impl NoiseField {
    /// Materializes the triangle from the counter scheme.
    pub(crate) fn from_counter(k_max: usize, horizon: usize, seed: u64) -> Self {
        let diag = k_max + horizon;
        let mut entries = Vec::with_capacity(Self::len_for(k_max, horizon));
        for k in 1..=k_max {
            for ell in 0..=(diag - k) {
                entries.push(standard_normal_at(seed, k, ell));
            }
        }
        Self {
            k_max,
            horizon,
            seed,
            entries,
        }
    }

    /// A field with every stored entry equal to `value`; scenario
    /// construction for deterministic tests (`eta == 0` cases).
    pub fn constant(k_max: usize, horizon: usize, value: f64) -> Self {
        let entries = vec![value; Self::len_for(k_max, horizon)];
        Self {
            k_max,
            horizon,
            seed: 0,
            entries,
        }
    }

    /// Builds a field from explicit entries in row-major triangular order.
    pub fn from_entries(k_max: usize, horizon: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != Self::len_for(k_max, horizon) {
            return Err(HjmError::DimensionMismatch(format!(
                "noise entries: expected {} values for K={k_max}, L={horizon}, got {}",
                Self::len_for(k_max, horizon),
                entries.len()
            )));
        }
        Ok(Self {
            k_max,
            horizon,
            seed: 0,
            entries,
        })
    }

    fn len_for(k_max: usize, horizon: usize) -> usize {
        // rows 1..=k_max, row k holds k_max + horizon - k + 1 entries
        (1..=k_max).map(|k| k_max + horizon - k + 1).sum()
    }

    fn offset(&self, k: usize) -> usize {
        let d = self.k_max + self.horizon + 1;
        (k - 1) * d - k * (k - 1) / 2
    }

    /// Number of observation rows.
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Maximal maturity of the surface this field can drive.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Seed the stored triangle was generated from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// True when `(k, ell)` lies in the stored triangle.
    pub fn contains(&self, k: usize, ell: usize) -> bool {
        k >= 1 && k <= self.k_max && k + ell <= self.k_max + self.horizon
    }

    /// Innovation at `(k, ell)`, `k >= 1`. Falls back to the counter scheme
    /// outside the stored triangle, so any lattice cell is addressable.
    pub fn eta(&self, k: usize, ell: usize) -> f64 {
        if self.contains(k, ell) {
            self.entries[self.offset(k) + ell]
        } else {
            standard_normal_at(self.seed, k, ell)
        }
    }

    /// Overwrites a stored entry; scenario construction for tests.
    pub fn set_eta(&mut self, k: usize, ell: usize, value: f64) -> Result<()> {
        if !self.contains(k, ell) {
            return Err(HjmError::OutOfDomain { k, ell });
        }
        let idx = self.offset(k) + ell;
        self.entries[idx] = value;
        Ok(())
    }

    /// All stored entries in row-major triangular order.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Iterates `(k, ell, eta)` over the stored triangle.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let diag = self.k_max + self.horizon;
        (1..=self.k_max).flat_map(move |k| {
            (0..=(diag - k)).map(move |ell| (k, ell, self.entries[self.offset(k) + ell]))
        })
    }
}
