//! Seeded randomness: surrogate shuffles and iid Gaussian series.
//!
//! Every random stream is a ChaCha20 generator seeded from a [`Seed`] via
//! `seed_from_u64`; normal draws use the ziggurat sampler from `rand_distr`.
//! Output is reproducible for a given seed within one build.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ReturnSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }

    /// An independent seed for a named sub-stream (splitmix64 finalizer).
    pub fn derive(self, stream: u64) -> Seed {
        let mut z = self.0 ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// `n` standard normal draws.
pub fn standard_normals<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform random permutation (Fisher-Yates) of the return values.
pub fn shuffle(returns: &ReturnSeries, seed: Seed) -> Result<ReturnSeries> {
    if returns.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut values = returns.values().to_vec();
    values.shuffle(&mut seed.rng());
    ReturnSeries::new(values)
}

/// `n` iid `N(0, sigma²)` draws: standard normals scaled by `sigma`.
pub fn iid_gaussian(n: usize, sigma: f64, seed: Seed) -> Result<ReturnSeries> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    let mut rng = seed.rng();
    let values = standard_normals(&mut rng, n).into_iter().map(|z| sigma * z).collect();
    ReturnSeries::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element_shuffle() {
        let r = ReturnSeries::new(vec![3.5]).unwrap();
        assert_eq!(shuffle(&r, Seed(9)).unwrap(), r);
    }

    #[test]
    fn empty_shuffle_rejected() {
        let r = ReturnSeries::new(vec![]).unwrap();
        assert!(matches!(shuffle(&r, Seed(1)), Err(Error::EmptySeries)));
    }

    #[test]
    fn shuffle_is_seeded() {
        let r = ReturnSeries::new((0..100).map(f64::from).collect()).unwrap();
        let a = shuffle(&r, Seed(1)).unwrap();
        assert_eq!(a, shuffle(&r, Seed(1)).unwrap());
        assert_ne!(a, shuffle(&r, Seed(2)).unwrap());
        assert_ne!(a, r);
    }

    #[test]
    fn gaussian_determinism_and_scaling() {
        let a = iid_gaussian(1000, 1.0, Seed(5)).unwrap();
        assert_eq!(a, iid_gaussian(1000, 1.0, Seed(5)).unwrap());
        let b = iid_gaussian(1000, 2.0, Seed(5)).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(2.0 * x, *y);
        }
    }

    #[test]
    fn gaussian_arguments() {
        assert!(iid_gaussian(1, 1.0, Seed(0)).is_err());
        assert!(iid_gaussian(10, 0.0, Seed(0)).is_err());
        assert!(iid_gaussian(10, -1.0, Seed(0)).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let s = Seed(7);
        assert_ne!(s.derive(1), s.derive(2));
        assert_ne!(s.derive(1), s);
        assert_eq!(s.derive(1), Seed(7).derive(1));
    }
}
