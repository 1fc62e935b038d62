use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::algebra::{BasisKind, BasisRules, Key};
use crate::sample::SamplerConfig;
use crate::scalar::Scalar;

/// Polynomials in `n` commuting primitive generators (the enveloping algebra
/// of an abelian Lie algebra). Basis keys are exponent vectors; monomials are
/// PBW-ordered by generator index.
///
/// The optional involution permutes generators; coefficients are conjugated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricStarAlgebra {
    names: Vec<String>,
    involution: Option<Vec<usize>>,
}

impl SymmetricStarAlgebra {
    /// Builds the algebra; `involution[i]` is the image of generator `i` and
    /// must be an involutive permutation.
    pub fn new(names: Vec<String>, involution: Option<Vec<usize>>) -> Result<Self, String> {
        if names.is_empty() {
            return Err("at least one generator is required".into());
        }
        if let Some(p) = &involution {
            if p.len() != names.len() {
                return Err(format!(
                    "involution has {} entries for {} generators",
                    p.len(),
                    names.len()
                ));
            }
            for (i, &j) in p.iter().enumerate() {
                if j >= p.len() || p[j] != i {
                    return Err(format!("involution is not an involutive permutation at {}", i));
                }
            }
        }
        Ok(SymmetricStarAlgebra { names, involution })
    }

    /// `ℂ[x, x*]` with `x ↔ x*`.
    pub fn oscillator() -> Self {
        SymmetricStarAlgebra::new(vec!["x".into(), "xstar".into()], Some(vec![1, 0])).unwrap()
    }

    pub fn generators(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn involution(&self) -> Option<&[usize]> {
        self.involution.as_deref()
    }

    /// Exponent vector of the `i`-th generator.
    pub fn generator(&self, i: usize) -> Key {
        let mut k = Key::zeros(self.names.len());
        k.0[i] = 1;
        k
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn binomial(n: i32, k: i32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

impl BasisRules for SymmetricStarAlgebra {
    fn descriptor(&self) -> String {
        let mut s = format!("symmetric_star:{}", self.names.join(","));
        if let Some(p) = &self.involution {
            let parts: Vec<String> = p.iter().map(|v| format!("{}", v)).collect();
            s.push_str(&format!(";star={}", parts.join(",")));
        }
        s
    }

    fn kind(&self) -> BasisKind {
        BasisKind::GradedConnected
    }

    fn unit(&self) -> Key {
        Key::zeros(self.names.len())
    }

    fn is_valid(&self, key: &Key) -> bool {
        key.len() == self.names.len() && key.0.iter().all(|&e| e >= 0)
    }

    fn mul(&self, a: &Key, b: &Key) -> Vec<(Key, Scalar)> {
        let sum = Key(a.0.iter().zip(b.0.iter()).map(|(x, y)| x + y).collect());
        vec![(sum, Scalar::ONE)]
    }

    fn comul(&self, a: &Key) -> Vec<(Key, Key, Scalar)> {
        // x^e ↦ Σ_{f≤e} Π C(e_i, f_i) x^f ⊗ x^{e-f}
        let mut out = vec![(Key::zeros(0), Key::zeros(0), 1.0)];
        for &e in a.0.iter() {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for (l, r, c) in &out {
                for f in 0..=e {
                    let mut l2 = l.clone();
                    l2.0.push(f);
                    let mut r2 = r.clone();
                    r2.0.push(e - f);
                    next.push((l2, r2, c * binomial(e, f)));
                }
            }
            out = next;
        }
        out.into_iter().map(|(l, r, c)| (l, r, Scalar::real(c))).collect()
    }

    fn counit(&self, a: &Key) -> Scalar {
        if a.0.iter().all(|&e| e == 0) {
            Scalar::ONE
        } else {
            Scalar::ZERO
        }
    }

    fn cocommutative(&self) -> bool {
        true
    }

    fn antipode(&self, a: &Key) -> Option<Vec<(Key, Scalar)>> {
        let deg: i32 = a.0.iter().sum();
        let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
        Some(vec![(a.clone(), Scalar::real(sign))])
    }

    fn star(&self, a: &Key) -> Option<Vec<(Key, Scalar)>> {
        let p = self.involution.as_ref()?;
        let mut img = Key::zeros(a.len());
        for (i, &e) in a.0.iter().enumerate() {
            img.0[p[i]] += e;
        }
        Some(vec![(img, Scalar::ONE)])
    }

    fn degree(&self, a: &Key) -> Option<u32> {
        Some(a.0.iter().map(|&e| e as u32).sum())
    }

    fn label(&self, key: &Key) -> String {
        let parts: Vec<String> = key
            .0
            .iter()
            .zip(&self.names)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{}^{}", n, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    fn sample_key(&self, rng: &mut dyn RngCore, config: &SamplerConfig) -> Key {
        let deg = rng.gen_range(0..=config.max_degree);
        let mut k = Key::zeros(self.names.len());
        for _ in 0..deg {
            let i = rng.gen_range(0..self.names.len());
            k.0[i] += 1;
        }
        k
    }
}
