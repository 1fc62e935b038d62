use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::algebra::{BasisKind, BasisRules, Key};
use crate::sample::SamplerConfig;
use crate::scalar::Scalar;

/// The group algebra `ℂℤ^d` with involution `k ↦ -k` extended antilinearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraZd {
    dim: usize,
}

impl GroupAlgebraZd {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "group algebra dimension must be at least 1");
        GroupAlgebraZd { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn negate(k: &Key) -> Key {
    Key(k.0.iter().map(|v| -v).collect())
}

impl BasisRules for GroupAlgebraZd {
    fn descriptor(&self) -> String {
        format!("group_algebra_zd:{}", self.dim)
    }

    fn kind(&self) -> BasisKind {
        BasisKind::GrouplikeBasis
    }

    fn unit(&self) -> Key {
        Key::zeros(self.dim)
    }

    fn is_valid(&self, key: &Key) -> bool {
        key.len() == self.dim
    }

    fn mul(&self, a: &Key, b: &Key) -> Vec<(Key, Scalar)> {
        let sum = Key(a.0.iter().zip(b.0.iter()).map(|(x, y)| x + y).collect());
        vec![(sum, Scalar::ONE)]
    }

    fn comul(&self, a: &Key) -> Vec<(Key, Key, Scalar)> {
        vec![(a.clone(), a.clone(), Scalar::ONE)]
    }

    fn counit(&self, _a: &Key) -> Scalar {
        Scalar::ONE
    }

    fn cocommutative(&self) -> bool {
        true
    }

    fn antipode(&self, a: &Key) -> Option<Vec<(Key, Scalar)>> {
        Some(vec![(negate(a), Scalar::ONE)])
    }

    fn star(&self, a: &Key) -> Option<Vec<(Key, Scalar)>> {
        Some(vec![(negate(a), Scalar::ONE)])
    }

    fn label(&self, key: &Key) -> String {
        let parts: Vec<String> = key.0.iter().map(|v| format!("{}", v)).collect();
        format!("({})", parts.join(","))
    }

    fn sample_key(&self, rng: &mut dyn RngCore, config: &SamplerConfig) -> Key {
        let b = config.coord_bound.max(0);
        Key((0..self.dim).map(|_| rng.gen_range(-b..=b)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Instance;

    #[test]
    fn group_law_and_grouplike_coproduct() {
        let z = Instance::new(GroupAlgebraZd::new(1));
        let p = z.mul(&z.basis(Key::from([2])), &z.basis(Key::from([3]))).unwrap();
        assert_eq!(p, z.basis(Key::from([5])));
        let k = z.basis(Key::from([4]));
        let d = z.comul(&k).unwrap();
        assert_eq!(d.coeff(&[Key::from([4]), Key::from([4])]), Scalar::ONE);
        assert_eq!(d.terms().count(), 1);
        let d3 = z.iterated_comul(&k, 3).unwrap();
        assert_eq!(
            d3.coeff(&[Key::from([4]), Key::from([4]), Key::from([4])]),
            Scalar::ONE
        );
        assert_eq!(d3.terms().count(), 1);
        assert_eq!(z.antipode(&k).unwrap(), z.basis(Key::from([-4])));
        // the involution is antilinear
        let ik = z.scale(Scalar::I, &k).unwrap();
        let star = z.star(&ik).unwrap();
        assert_eq!(star.coeff(&Key::from([-4])), -Scalar::I);
    }
}
