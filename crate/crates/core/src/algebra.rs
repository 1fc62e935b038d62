//! Sparse linear algebra over an instance's basis and the structure maps
//! extended from basis-level rules.
//!
//! A bialgebra instance is described by a [`BasisRules`] implementation that
//! only knows how to multiply, comultiply, etc. single basis keys. Everything
//! else (bilinear extension, tensor powers, the coproduct `Λ` of `B⊗…⊗B`) is
//! provided here by [`Instance`], which wraps the rules together with the
//! tolerances used for pruning.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::sample::SamplerConfig;
use crate::scalar::{Scalar, Tolerance};

/// Basis label: an integer vector (group element, exponent vector, or an
/// encoded finite basis element). Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key(pub SmallVec<[i32; 4]>);

impl Key {
    pub fn new(components: &[i32]) -> Self {
        Key(SmallVec::from_slice(components))
    }

    pub fn zeros(len: usize) -> Self {
        Key(SmallVec::from_elem(0, len))
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl From<&[i32]> for Key {
    fn from(v: &[i32]) -> Self {
        Key::new(v)
    }
}

impl<const N: usize> From<[i32; N]> for Key {
    fn from(v: [i32; N]) -> Self {
        Key::new(&v)
    }
}

/// Fingerprint of an instance descriptor; elements remember which instance
/// they belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InstanceTag(pub u64);

impl InstanceTag {
    pub fn of(descriptor: &str) -> Self {
        InstanceTag(fnv1a(descriptor.as_bytes()))
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BasisKind {
    /// Every basis key is grouplike: `Δ(b) = b⊗b`, `δ(b) = 1`.
    GrouplikeBasis,
    /// Graded with the unit spanning degree zero.
    GradedConnected,
    /// Finite-dimensional, no grading assumptions.
    Finite,
}

/// Basis-level description of a bialgebra (optionally Hopf, optionally with
/// involution). Linear combinations are returned as `(key, coefficient)`
/// lists; duplicates are allowed and summed by the caller.
pub trait BasisRules: Send + Sync + fmt::Debug {
    /// Canonical descriptor string; its hash is the instance tag.
    fn descriptor(&self) -> String;
    fn kind(&self) -> BasisKind;
    fn unit(&self) -> Key;
    fn is_valid(&self, key: &Key) -> bool;
    fn mul(&self, a: &Key, b: &Key) -> Vec<(Key, Scalar)>;
    fn comul(&self, a: &Key) -> Vec<(Key, Key, Scalar)>;
    fn counit(&self, a: &Key) -> Scalar;
    fn cocommutative(&self) -> bool;
    /// Human-readable name of a basis key.
    fn label(&self, key: &Key) -> String;
    /// Draws a random basis key within the sampler's bounds.
    fn sample_key(&self, rng: &mut dyn RngCore, config: &SamplerConfig) -> Key;

    fn antipode(&self, _a: &Key) -> Option<Vec<(Key, Scalar)>> {
        None
    }
    /// Involution on a basis key; coefficients are conjugated by the caller.
    fn star(&self, _a: &Key) -> Option<Vec<(Key, Scalar)>> {
        None
    }
    fn degree(&self, _a: &Key) -> Option<u32> {
        None
    }
    /// Full basis, for finite instances.
    fn finite_basis(&self) -> Option<Vec<Key>> {
        None
    }
}

/// A finite sparse linear combination of basis keys.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    tag: InstanceTag,
    terms: BTreeMap<Key, Scalar>,
}

/// A finite sparse element of `B^{⊗n}`. Rank 0 holds a single scalar under
/// the empty tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    tag: InstanceTag,
    rank: usize,
    terms: BTreeMap<Vec<Key>, Scalar>,
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    *map.entry(key).or_insert(Scalar::ZERO) += c;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, Scalar>, eps: f64) {
    map.retain(|_, c| c.norm() >= eps);
}

impl Element {
    pub fn zero(tag: InstanceTag) -> Self {
        Element {
            tag,
            terms: BTreeMap::new(),
        }
    }

    pub fn tag(&self) -> InstanceTag {
        self.tag
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn coeff(&self, key: &Key) -> Scalar {
        self.terms.get(key).copied().unwrap_or(Scalar::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.terms.values().all(|c| c.is_finite())
    }

    pub fn into_tensor(self) -> Tensor {
        Tensor {
            tag: self.tag,
            rank: 1,
            terms: self.terms.into_iter().map(|(k, c)| (vec![k], c)).collect(),
        }
    }

    pub(crate) fn from_raw(tag: InstanceTag, terms: BTreeMap<Key, Scalar>, eps: f64) -> Self {
        let mut e = Element { tag, terms };
        prune(&mut e.terms, eps);
        e
    }
}

impl Tensor {
    pub fn zero(tag: InstanceTag, rank: usize) -> Self {
        Tensor {
            tag,
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(tag: InstanceTag, value: Scalar, eps: f64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), value);
        let mut t = Tensor { tag, rank: 0, terms };
        prune(&mut t.terms, eps);
        t
    }

    pub fn tag(&self) -> InstanceTag {
        self.tag
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Key], Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (k.as_slice(), *c))
    }

    pub fn coeff(&self, tuple: &[Key]) -> Scalar {
        self.terms.get(tuple).copied().unwrap_or(Scalar::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.terms.values().all(|c| c.is_finite())
    }

    /// Value of a rank-0 tensor.
    pub fn as_scalar(&self) -> Option<Scalar> {
        (self.rank == 0).then(|| self.coeff(&[]))
    }

    pub fn into_element(self) -> Result<Element> {
        if self.rank != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.rank,
            });
        }
        Ok(Element {
            tag: self.tag,
            terms: self
                .terms
                .into_iter()
                .map(|(mut k, c)| (k.pop().unwrap(), c))
                .collect(),
        })
    }

    pub(crate) fn from_raw(
        tag: InstanceTag,
        rank: usize,
        terms: BTreeMap<Vec<Key>, Scalar>,
        eps: f64,
    ) -> Self {
        let mut t = Tensor { tag, rank, terms };
        prune(&mut t.terms, eps);
        t
    }
}

/// Shared handle to a bialgebra instance.
#[derive(Clone)]
pub struct Instance {
    rules: Arc<dyn BasisRules>,
    tag: InstanceTag,
    tol: Tolerance,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("descriptor", &self.rules.descriptor())
            .field("tol", &self.tol)
            .finish()
    }
}

impl Instance {
    pub fn new<R: BasisRules + 'static>(rules: R) -> Self {
        Self::from_arc(Arc::new(rules))
    }

    pub fn from_arc(rules: Arc<dyn BasisRules>) -> Self {
        let tag = InstanceTag::of(&rules.descriptor());
        Instance {
            rules,
            tag,
            tol: Tolerance::default(),
        }
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn tag(&self) -> InstanceTag {
        self.tag
    }

    pub fn rules(&self) -> &dyn BasisRules {
        &*self.rules
    }

    pub fn descriptor(&self) -> String {
        self.rules.descriptor()
    }

    pub fn kind(&self) -> BasisKind {
        self.rules.kind()
    }

    pub fn is_cocommutative(&self) -> bool {
        self.rules.cocommutative()
    }

    pub fn has_antipode(&self) -> bool {
        self.rules.antipode(&self.rules.unit()).is_some()
    }

    pub fn has_star(&self) -> bool {
        self.rules.star(&self.rules.unit()).is_some()
    }

    pub fn unit_key(&self) -> Key {
        self.rules.unit()
    }

    pub fn unit_tuple(&self, n: usize) -> Vec<Key> {
        vec![self.rules.unit(); n]
    }

    pub fn degree(&self, key: &Key) -> Option<u32> {
        self.rules.degree(key)
    }

    /// Total degree of a basis tuple, when the instance is graded.
    pub fn tuple_degree(&self, tuple: &[Key]) -> Option<u32> {
        tuple.iter().map(|k| self.rules.degree(k)).sum()
    }

    fn check(&self, tag: InstanceTag) -> Result<()> {
        if tag == self.tag {
            Ok(())
        } else {
            Err(Error::InstanceMismatch {
                expected: self.tag,
                found: tag,
            })
        }
    }

    // ---- construction ----

    pub fn zero(&self) -> Element {
        Element::zero(self.tag)
    }

    pub fn one(&self) -> Element {
        self.basis(self.rules.unit())
    }

    /// Basis element for a key known to be valid (e.g. produced by the rules).
    pub fn basis(&self, key: Key) -> Element {
        let mut terms = BTreeMap::new();
        terms.insert(key, Scalar::ONE);
        Element { tag: self.tag, terms }
    }

    pub fn element<I, K>(&self, terms: I) -> Result<Element>
    where
        I: IntoIterator<Item = (K, Scalar)>,
        K: Into<Key>,
    {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            let k = k.into();
            if !self.rules.is_valid(&k) {
                return Err(Error::InvalidKey(alloc::format!("{:?}", k)));
            }
            if !c.is_finite() {
                return Err(Error::NonFinite);
            }
            accumulate(&mut map, k, c);
        }
        Ok(Element::from_raw(self.tag, map, self.tol.prune))
    }

    pub fn tensor<I>(&self, rank: usize, terms: I) -> Result<Tensor>
    where
        I: IntoIterator<Item = (Vec<Key>, Scalar)>,
    {
        let mut map = BTreeMap::new();
        for (u, c) in terms {
            if u.len() != rank {
                return Err(Error::ArityMismatch {
                    expected: rank,
                    found: u.len(),
                });
            }
            if let Some(bad) = u.iter().find(|k| !self.rules.is_valid(k)) {
                return Err(Error::InvalidKey(alloc::format!("{:?}", bad)));
            }
            if !c.is_finite() {
                return Err(Error::NonFinite);
            }
            accumulate(&mut map, u, c);
        }
        Ok(Tensor::from_raw(self.tag, rank, map, self.tol.prune))
    }

    pub fn basis_tensor(&self, tuple: Vec<Key>) -> Tensor {
        let rank = tuple.len();
        let mut terms = BTreeMap::new();
        terms.insert(tuple, Scalar::ONE);
        Tensor {
            tag: self.tag,
            rank,
            terms,
        }
    }

    /// `a₁⊗…⊗aₙ` for elements.
    pub fn tensor_product(&self, factors: &[&Element]) -> Result<Tensor> {
        let mut out: BTreeMap<Vec<Key>, Scalar> = BTreeMap::new();
        out.insert(Vec::new(), Scalar::ONE);
        for f in factors {
            self.check(f.tag)?;
            let mut next = BTreeMap::new();
            for (u, c) in &out {
                for (k, d) in &f.terms {
                    let mut v = u.clone();
                    v.push(k.clone());
                    accumulate(&mut next, v, *c * *d);
                }
            }
            out = next;
        }
        Ok(Tensor::from_raw(self.tag, factors.len(), out, self.tol.prune))
    }

    // ---- vector space ----

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a.tag)?;
        self.check(b.tag)?;
        let mut map = a.terms.clone();
        for (k, c) in &b.terms {
            accumulate(&mut map, k.clone(), *c);
        }
        Ok(Element::from_raw(self.tag, map, self.tol.prune))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.add(a, &self.scale(-Scalar::ONE, b)?)
    }

    pub fn scale(&self, c: Scalar, a: &Element) -> Result<Element> {
        self.check(a.tag)?;
        let map = a.terms.iter().map(|(k, d)| (k.clone(), c * *d)).collect();
        Ok(Element::from_raw(self.tag, map, self.tol.prune))
    }

    pub fn add_tensors(&self, a: &Tensor, b: &Tensor) -> Result<Tensor> {
        self.check(a.tag)?;
        self.check(b.tag)?;
        if a.rank != b.rank {
            return Err(Error::ArityMismatch {
                expected: a.rank,
                found: b.rank,
            });
        }
        let mut map = a.terms.clone();
        for (k, c) in &b.terms {
            accumulate(&mut map, k.clone(), *c);
        }
        Ok(Tensor::from_raw(self.tag, a.rank, map, self.tol.prune))
    }

    pub fn scale_tensor(&self, c: Scalar, a: &Tensor) -> Tensor {
        let map = a.terms.iter().map(|(k, d)| (k.clone(), c * *d)).collect();
        Tensor::from_raw(self.tag, a.rank, map, self.tol.prune)
    }

    pub fn sub_tensors(&self, a: &Tensor, b: &Tensor) -> Result<Tensor> {
        self.add_tensors(a, &self.scale_tensor(-Scalar::ONE, b))
    }

    // ---- basis-level helpers used throughout the crate ----

    pub(crate) fn collect(&self, terms: impl IntoIterator<Item = (Key, Scalar)>) -> Element {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            accumulate(&mut map, k, c);
        }
        Element::from_raw(self.tag, map, self.tol.prune)
    }

    pub(crate) fn collect_tensor(
        &self,
        rank: usize,
        terms: impl IntoIterator<Item = (Vec<Key>, Scalar)>,
    ) -> Tensor {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            accumulate(&mut map, k, c);
        }
        Tensor::from_raw(self.tag, rank, map, self.tol.prune)
    }

    pub fn mul_keys(&self, a: &Key, b: &Key) -> Vec<(Key, Scalar)> {
        self.rules.mul(a, b)
    }

    pub fn comul_key(&self, a: &Key) -> Vec<(Key, Key, Scalar)> {
        self.rules.comul(a)
    }

    pub fn counit_key(&self, a: &Key) -> Scalar {
        self.rules.counit(a)
    }

    pub fn antipode_key(&self, a: &Key) -> Result<Vec<(Key, Scalar)>> {
        self.rules.antipode(a).ok_or(Error::CapabilityMissing("antipode"))
    }

    pub fn star_key(&self, a: &Key) -> Result<Vec<(Key, Scalar)>> {
        self.rules.star(a).ok_or(Error::CapabilityMissing("involution"))
    }

    pub fn label(&self, key: &Key) -> String {
        self.rules.label(key)
    }

    /// Product `μ^{(n)}` of a basis tuple; the empty tuple gives `𝟙`.
    pub fn mul_tuple(&self, tuple: &[Key]) -> Element {
        let mut acc: BTreeMap<Key, Scalar> = BTreeMap::new();
        acc.insert(self.rules.unit(), Scalar::ONE);
        for k in tuple {
            let mut next = BTreeMap::new();
            for (a, c) in &acc {
                for (p, d) in self.rules.mul(a, k) {
                    accumulate(&mut next, p, *c * d);
                }
            }
            prune(&mut next, self.tol.prune);
            acc = next;
        }
        Element::from_raw(self.tag, acc, self.tol.prune)
    }

    /// `δ^{⊗n}` on a basis tuple.
    pub fn counit_tuple(&self, tuple: &[Key]) -> Scalar {
        let mut acc = Scalar::ONE;
        for k in tuple {
            acc *= self.rules.counit(k);
        }
        acc
    }

    /// Coproduct of `B^{⊗n}` on a basis tuple:
    /// `Λ(a₁⊗…⊗aₙ) = a₁₍₁₎⊗…⊗aₙ₍₁₎ ⊗ a₁₍₂₎⊗…⊗aₙ₍₂₎`,
    /// returned as `(left tuple, right tuple, coefficient)` triples.
    pub fn comul_tuple(&self, tuple: &[Key]) -> Vec<(Vec<Key>, Vec<Key>, Scalar)> {
        let mut out = vec![(Vec::new(), Vec::new(), Scalar::ONE)];
        for k in tuple {
            let parts = self.rules.comul(k);
            let mut next = Vec::with_capacity(out.len() * parts.len());
            for (l, r, c) in &out {
                for (pl, pr, d) in &parts {
                    let mut l2 = l.clone();
                    l2.push(pl.clone());
                    let mut r2 = r.clone();
                    r2.push(pr.clone());
                    next.push((l2, r2, *c * *d));
                }
            }
            out = next;
        }
        out
    }

    /// Componentwise product in `B^{⊗n}` of two basis tuples.
    pub fn mul_tuples(&self, u: &[Key], v: &[Key]) -> Vec<(Vec<Key>, Scalar)> {
        let mut out = vec![(Vec::new(), Scalar::ONE)];
        for (a, b) in u.iter().zip(v) {
            let parts = self.rules.mul(a, b);
            let mut next = Vec::with_capacity(out.len() * parts.len());
            for (w, c) in &out {
                for (p, d) in &parts {
                    let mut w2 = w.clone();
                    w2.push(p.clone());
                    next.push((w2, *c * *d));
                }
            }
            out = next;
        }
        out
    }

    // ---- structure maps on elements ----

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a.tag)?;
        self.check(b.tag)?;
        let mut map = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                for (p, d) in self.rules.mul(ka, kb) {
                    accumulate(&mut map, p, *ca * *cb * d);
                }
            }
        }
        Ok(Element::from_raw(self.tag, map, self.tol.prune))
    }

    pub fn comul(&self, a: &Element) -> Result<Tensor> {
        self.check(a.tag)?;
        let mut map = BTreeMap::new();
        for (k, c) in &a.terms {
            for (l, r, d) in self.rules.comul(k) {
                accumulate(&mut map, vec![l, r], *c * d);
            }
        }
        Ok(Tensor::from_raw(self.tag, 2, map, self.tol.prune))
    }

    pub fn counit(&self, a: &Element) -> Result<Scalar> {
        self.check(a.tag)?;
        Ok(a.terms.iter().map(|(k, c)| *c * self.rules.counit(k)).sum())
    }

    pub fn antipode(&self, a: &Element) -> Result<Element> {
        self.check(a.tag)?;
        let mut map = BTreeMap::new();
        for (k, c) in &a.terms {
            for (s, d) in self.antipode_key(k)? {
                accumulate(&mut map, s, *c * d);
            }
        }
        Ok(Element::from_raw(self.tag, map, self.tol.prune))
    }

    /// Antilinear extension of the basis involution.
    pub fn star(&self, a: &Element) -> Result<Element> {
        self.check(a.tag)?;
        let mut map = BTreeMap::new();
        for (k, c) in &a.terms {
            for (s, d) in self.star_key(k)? {
                accumulate(&mut map, s, c.conj() * d);
            }
        }
        Ok(Element::from_raw(self.tag, map, self.tol.prune))
    }

    /// `Δ^{(n)}`; `n = 0` gives `δ(a)` as a rank-0 tensor.
    pub fn iterated_comul(&self, a: &Element, n: usize) -> Result<Tensor> {
        self.check(a.tag)?;
        if n == 0 {
            return Ok(Tensor::scalar(self.tag, self.counit(a)?, self.tol.prune));
        }
        let mut cur = a.clone().into_tensor();
        // (id⊗Δ^{(n-1)})∘Δ expands the last factor repeatedly
        for _ in 1..n {
            let mut map = BTreeMap::new();
            for (u, c) in &cur.terms {
                let (last, head) = u.split_last().unwrap();
                for (l, r, d) in self.rules.comul(last) {
                    let mut v = head.to_vec();
                    v.push(l);
                    v.push(r);
                    accumulate(&mut map, v, *c * d);
                }
            }
            cur = Tensor::from_raw(self.tag, cur.rank + 1, map, self.tol.prune);
        }
        Ok(cur)
    }

    /// Multiplication in `B^{⊗n}`.
    pub fn mul_tensors(&self, a: &Tensor, b: &Tensor) -> Result<Tensor> {
        self.check(a.tag)?;
        self.check(b.tag)?;
        if a.rank != b.rank {
            return Err(Error::ArityMismatch {
                expected: a.rank,
                found: b.rank,
            });
        }
        let mut map = BTreeMap::new();
        for (u, c) in &a.terms {
            for (v, d) in &b.terms {
                for (w, e) in self.mul_tuples(u, v) {
                    accumulate(&mut map, w, *c * *d * e);
                }
            }
        }
        Ok(Tensor::from_raw(self.tag, a.rank, map, self.tol.prune))
    }

    /// Coproduct `Λ` of `B^{⊗n}` on tensors; the result has rank `2n`.
    pub fn comul_tensor(&self, a: &Tensor) -> Result<Tensor> {
        self.check(a.tag)?;
        let mut map = BTreeMap::new();
        for (u, c) in &a.terms {
            for (mut l, r, d) in self.comul_tuple(u) {
                l.extend(r);
                accumulate(&mut map, l, *c * d);
            }
        }
        Ok(Tensor::from_raw(self.tag, 2 * a.rank, map, self.tol.prune))
    }

    /// `δ^{⊗n}` on tensors.
    pub fn counit_tensor(&self, a: &Tensor) -> Result<Scalar> {
        self.check(a.tag)?;
        Ok(a.terms.iter().map(|(u, c)| *c * self.counit_tuple(u)).sum())
    }

    /// Apply `μ` to adjacent factor pairs `(2i, 2i+1)`: `B^{⊗2n} → B^{⊗n}`.
    pub fn mul_pairs(&self, a: &Tensor) -> Result<Tensor> {
        self.check(a.tag)?;
        if !a.rank.is_multiple_of(2) {
            return Err(Error::ArityMismatch {
                expected: a.rank + 1,
                found: a.rank,
            });
        }
        let half = a.rank / 2;
        let mut map = BTreeMap::new();
        for (u, c) in &a.terms {
            let lefts: Vec<Key> = u.iter().step_by(2).cloned().collect();
            let rights: Vec<Key> = u.iter().skip(1).step_by(2).cloned().collect();
            for (w, d) in self.mul_tuples(&lefts, &rights) {
                accumulate(&mut map, w, *c * d);
            }
        }
        Ok(Tensor::from_raw(self.tag, half, map, self.tol.prune))
    }

    /// Reverse the tensor factors (`τ` for rank 2).
    pub fn flip(&self, a: &Tensor) -> Tensor {
        let map = a
            .terms
            .iter()
            .map(|(u, c)| {
                let mut v = u.clone();
                v.reverse();
                (v, *c)
            })
            .collect();
        Tensor {
            tag: a.tag,
            rank: a.rank,
            terms: map,
        }
    }

    /// Apply a linear basis map factorwise.
    pub fn map_factors<F>(&self, a: &Tensor, mut f: F) -> Result<Tensor>
    where
        F: FnMut(usize, &Key) -> Result<Vec<(Key, Scalar)>>,
    {
        self.check(a.tag)?;
        let mut map = BTreeMap::new();
        for (u, c) in &a.terms {
            let mut partial = vec![(Vec::new(), *c)];
            for (i, k) in u.iter().enumerate() {
                let img = f(i, k)?;
                let mut next = Vec::with_capacity(partial.len() * img.len());
                for (w, e) in &partial {
                    for (p, d) in &img {
                        let mut w2 = w.clone();
                        w2.push(p.clone());
                        next.push((w2, *e * *d));
                    }
                }
                partial = next;
            }
            for (w, e) in partial {
                accumulate(&mut map, w, e);
            }
        }
        Ok(Tensor::from_raw(self.tag, a.rank, map, self.tol.prune))
    }

    /// `S^{⊗n}` on a tensor.
    pub fn antipode_tensor(&self, a: &Tensor) -> Result<Tensor> {
        self.map_factors(a, |_, k| self.antipode_key(k))
    }

    /// Canonical text form: terms ordered by key, coefficients as `a+bi`.
    pub fn render(&self, a: &Element) -> String {
        if a.terms.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = a
            .terms
            .iter()
            .map(|(k, c)| alloc::format!("({}) {}", c.render(), self.rules.label(k)))
            .collect();
        parts.join(" + ")
    }

    pub fn render_tensor(&self, a: &Tensor) -> String {
        if a.terms.is_empty() {
            return String::from("0");
        }
        let parts: Vec<String> = a
            .terms
            .iter()
            .map(|(u, c)| {
                let labels: Vec<String> = u.iter().map(|k| self.rules.label(k)).collect();
                if labels.is_empty() {
                    c.render()
                } else {
                    alloc::format!("({}) {}", c.render(), labels.join(" ⊗ "))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Scale-aware residual between two tensors:
/// `‖a − b‖∞ / max(1, ‖a‖∞, ‖b‖∞)`. Non-finite input yields `∞`.
pub fn residual(a: &Tensor, b: &Tensor) -> f64 {
    if !a.is_finite() || !b.is_finite() {
        return f64::INFINITY;
    }
    let mut diff: f64 = 0.0;
    for (u, c) in &a.terms {
        diff = diff.max((*c - b.coeff(u)).norm());
    }
    for (u, c) in &b.terms {
        if !a.terms.contains_key(u) {
            diff = diff.max(c.norm());
        }
    }
    diff / 1f64.max(a.max_abs()).max(b.max_abs())
}

pub fn residual_elements(a: &Element, b: &Element) -> f64 {
    residual(&a.clone().into_tensor(), &b.clone().into_tensor())
}

pub fn residual_scalars(a: Scalar, b: Scalar) -> f64 {
    if !a.is_finite() || !b.is_finite() {
        return f64::INFINITY;
    }
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}
