use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::algebra::{BasisKind, BasisRules, Key};
use crate::sample::SamplerConfig;
use crate::scalar::Scalar;

/// Sweedler's four-dimensional Hopf algebra: `g² = 𝟙`, `x² = 0`, `xg = -gx`,
/// `Δg = g⊗g`, `Δx = x⊗𝟙 + g⊗x`. Not cocommutative.
///
/// The key `[a, b]` stands for `g^a x^b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweedlerH4;

const ONE: [i32; 2] = [0, 0];
const G: [i32; 2] = [1, 0];
const X: [i32; 2] = [0, 1];
const GX: [i32; 2] = [1, 1];

impl SweedlerH4 {
    pub fn one() -> Key {
        Key::from(ONE)
    }
    pub fn g() -> Key {
        Key::from(G)
    }
    pub fn x() -> Key {
        Key::from(X)
    }
    pub fn gx() -> Key {
        Key::from(GX)
    }
}

impl BasisRules for SweedlerH4 {
    fn descriptor(&self) -> String {
        "sweedler_h4".into()
    }

    fn kind(&self) -> BasisKind {
        BasisKind::Finite
    }

    fn unit(&self) -> Key {
        Key::from(ONE)
    }

    fn is_valid(&self, key: &Key) -> bool {
        key.len() == 2 && key.0.iter().all(|&v| v == 0 || v == 1)
    }

    fn mul(&self, a: &Key, b: &Key) -> Vec<(Key, Scalar)> {
        // g^a x^b · g^c x^d = (-1)^{bc} g^{a+c} x^{b+d}
        let (ga, xa) = (a.0[0], a.0[1]);
        let (gb, xb) = (b.0[0], b.0[1]);
        if xa + xb >= 2 {
            return Vec::new();
        }
        let sign = if xa * gb == 1 { -1.0 } else { 1.0 };
        vec![(Key::from([(ga + gb) % 2, xa + xb]), Scalar::real(sign))]
    }

    fn comul(&self, a: &Key) -> Vec<(Key, Key, Scalar)> {
        match [a.0[0], a.0[1]] {
            ONE => vec![(Key::from(ONE), Key::from(ONE), Scalar::ONE)],
            G => vec![(Key::from(G), Key::from(G), Scalar::ONE)],
            X => vec![
                (Key::from(X), Key::from(ONE), Scalar::ONE),
                (Key::from(G), Key::from(X), Scalar::ONE),
            ],
            // Δ(gx) = (g⊗g)(x⊗𝟙 + g⊗x) = gx⊗g + 𝟙⊗gx
            _ => vec![
                (Key::from(GX), Key::from(G), Scalar::ONE),
                (Key::from(ONE), Key::from(GX), Scalar::ONE),
            ],
        }
    }

    fn counit(&self, a: &Key) -> Scalar {
        if a.0[1] == 0 {
            Scalar::ONE
        } else {
            Scalar::ZERO
        }
    }

    fn cocommutative(&self) -> bool {
        false
    }

    fn antipode(&self, a: &Key) -> Option<Vec<(Key, Scalar)>> {
        Some(match [a.0[0], a.0[1]] {
            ONE => vec![(Key::from(ONE), Scalar::ONE)],
            G => vec![(Key::from(G), Scalar::ONE)],
            X => vec![(Key::from(GX), -Scalar::ONE)],
            _ => vec![(Key::from(X), Scalar::ONE)],
        })
    }

    fn label(&self, key: &Key) -> String {
        match [key.0[0], key.0[1]] {
            ONE => "1",
            G => "g",
            X => "x",
            _ => "gx",
        }
        .into()
    }

    fn sample_key(&self, rng: &mut dyn RngCore, _config: &SamplerConfig) -> Key {
        Key::from([rng.gen_range(0..=1), rng.gen_range(0..=1)])
    }

    fn finite_basis(&self) -> Option<Vec<Key>> {
        Some(vec![Key::from(ONE), Key::from(G), Key::from(X), Key::from(GX)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Instance;
    use alloc::vec::Vec;

    /// Independent oracle: multiply words in {g, x} by rewriting with
    /// gg → ε, xx → 0, xg → -gx until normal form g^a x^b.
    fn rewrite(word: &[char]) -> Option<(f64, Vec<char>)> {
        let mut w: Vec<char> = word.to_vec();
        let mut sign = 1.0;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < w.len() {
                match (w[i], w[i + 1]) {
                    ('g', 'g') => {
                        w.drain(i..i + 2);
                        changed = true;
                    }
                    ('x', 'x') => return None,
                    ('x', 'g') => {
                        w[i] = 'g';
                        w[i + 1] = 'x';
                        sign = -sign;
                        changed = true;
                        i += 1;
                    }
                    _ => i += 1,
                }
            }
            if !changed {
                return Some((sign, w));
            }
        }
    }

    fn word(k: &Key) -> Vec<char> {
        let mut w = Vec::new();
        if k.0[0] == 1 {
            w.push('g');
        }
        if k.0[1] == 1 {
            w.push('x');
        }
        w
    }

    #[test]
    fn multiplication_table_matches_rewriting() {
        let h = SweedlerH4;
        for a in h.finite_basis().unwrap() {
            for b in h.finite_basis().unwrap() {
                let mut w = word(&a);
                w.extend(word(&b));
                let got = h.mul(&a, &b);
                match rewrite(&w) {
                    None => assert!(got.is_empty(), "{:?}·{:?}", a, b),
                    Some((sign, nf)) => {
                        assert_eq!(got.len(), 1);
                        assert_eq!(word(&got[0].0), nf);
                        assert_eq!(got[0].1, Scalar::real(sign));
                    }
                }
            }
        }
    }

    #[test]
    fn x_times_g_is_minus_gx() {
        let h = Instance::new(SweedlerH4);
        let p = h
            .mul(&h.basis(SweedlerH4::x()), &h.basis(SweedlerH4::g()))
            .unwrap();
        assert_eq!(p, h.scale(-Scalar::ONE, &h.basis(SweedlerH4::gx())).unwrap());
    }

    #[test]
    fn coproduct_of_x_is_not_symmetric() {
        let h = Instance::new(SweedlerH4);
        let d = h.comul(&h.basis(SweedlerH4::x())).unwrap();
        assert_ne!(d, h.flip(&d));
    }
}
