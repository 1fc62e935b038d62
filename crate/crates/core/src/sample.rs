//! Seeded random sampling of basis keys, elements and tensors.
//!
//! Every check draws from its own stream, derived from the master seed and a
//! label, so adding or reordering checks never shifts the samples another
//! check sees.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{fnv1a, Element, Instance, Key, Tensor};
use crate::scalar::Scalar;

/// Bounds for randomly drawn elements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Maximum number of basis keys in a sampled element.
    pub support: usize,
    /// Group-algebra coordinates are drawn from `[-coord_bound, coord_bound]`.
    pub coord_bound: i32,
    /// Maximum total degree of sampled monomials.
    pub max_degree: u32,
    /// Real and imaginary parts are drawn from `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            support: 3,
            coord_bound: 5,
            max_degree: 4,
            coeff_bound: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sampler {
    pub seed: u64,
    /// Number of samples each check draws.
    pub budget: usize,
    pub config: SamplerConfig,
}

impl Sampler {
    pub const DEFAULT_BUDGET: usize = 200;

    pub fn new(seed: u64) -> Self {
        Sampler {
            seed,
            budget: Self::DEFAULT_BUDGET,
            config: SamplerConfig::default(),
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn with_config(mut self, config: SamplerConfig) -> Self {
        self.config = config;
        self
    }

    /// Independent stream for the check named `label`.
    pub fn stream(&self, label: &str) -> SampleStream {
        let seed = self.seed ^ fnv1a(label.as_bytes()).rotate_left(17);
        SampleStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            config: self.config,
        }
    }
}

pub struct SampleStream {
    rng: ChaCha8Rng,
    config: SamplerConfig,
}

impl SampleStream {
    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn key(&mut self, inst: &Instance) -> Key {
        inst.rules().sample_key(&mut self.rng, &self.config)
    }

    pub fn tuple(&mut self, inst: &Instance, n: usize) -> Vec<Key> {
        (0..n).map(|_| self.key(inst)).collect()
    }

    pub fn scalar(&mut self) -> Scalar {
        let b = self.config.coeff_bound;
        Scalar::new(self.rng.gen_range(-b..=b), self.rng.gen_range(-b..=b))
    }

    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn element(&mut self, inst: &Instance) -> Element {
        let n = self.rng.gen_range(1..=self.config.support.max(1));
        let terms: Vec<(Key, Scalar)> = (0..n).map(|_| (self.key(inst), self.scalar())).collect();
        inst.collect(terms)
    }

    /// Random element of `B^{⊗n}` with up to `support` basis tuples.
    pub fn tensor(&mut self, inst: &Instance, n: usize) -> Tensor {
        let m = self.rng.gen_range(1..=self.config.support.max(1));
        let terms: Vec<(Vec<Key>, Scalar)> = (0..m).map(|_| (self.tuple(inst, n), self.scalar())).collect();
        inst.collect_tensor(n, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::GroupAlgebraZd;

    #[test]
    fn streams_are_deterministic_and_label_dependent() {
        let inst = Instance::new(GroupAlgebraZd::new(2));
        let s = Sampler::new(7);
        let a: Vec<Key> = {
            let mut st = s.stream("x");
            (0..10).map(|_| st.key(&inst)).collect()
        };
        let b: Vec<Key> = {
            let mut st = s.stream("x");
            (0..10).map(|_| st.key(&inst)).collect()
        };
        let c: Vec<Key> = {
            let mut st = s.stream("y");
            (0..10).map(|_| st.key(&inst)).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn samples_respect_bounds() {
        let inst = Instance::new(GroupAlgebraZd::new(3));
        let mut st = Sampler::new(1).stream("bounds");
        for _ in 0..500 {
            let e = st.element(&inst);
            assert!(e.support_len() <= 3);
            for (k, c) in e.terms() {
                assert!(k.as_slice().iter().all(|v| v.abs() <= 5));
                assert!(c.re.abs() <= 1.0 && c.im.abs() <= 1.0);
            }
        }
    }
}
