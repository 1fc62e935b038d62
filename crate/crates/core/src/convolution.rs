//! Convolution calculus: scalar cochains on tensor powers, linear maps into
//! the algebra, the `⋆` products, convolution exponentials and the operators
//! `R_φ = (id⊗φ)∘Δ`.
//!
//! # Termination of `e_⋆^{tf}`
//!
//! A convolution exponential `Σ tᵏ/k! f^{⋆k}` is an infinite series in
//! general. It is only ever evaluated here where it provably collapses to a
//! finite computation, and the strategy is chosen from the instance kind:
//!
//! * grouplike basis: every basis tuple `u` is grouplike in `B^{⊗n}`, so
//!   `f^{⋆k}(u) = f(u)^k` and `e_⋆^{tf}(u) = e^{t f(u)}` in closed form;
//! * graded connected: for `f` vanishing on the unit tuple, every term of
//!   `Λ^{(k)}(u)` with `k` larger than the total degree of `u` has a unit
//!   factor, so `f^{⋆k}(u) = 0` exactly and the series stops at `deg(u)`;
//! * finite instances have no such certificate; only `f ≡ 0` (checked on
//!   the full basis) is accepted, where `e_⋆^{tf} = δ^{⊗n}`.
//!
//! Convolution powers are memoized per basis tuple and are independent of
//! `t`, so one [`ConvExp`] can be evaluated at many parameters cheaply.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use spin::RwLock;

use crate::algebra::{
    residual, residual_elements, residual_scalars, BasisKind, Element, Instance, Key, Tensor,
};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::sample::Sampler;
use crate::scalar::Scalar;

type Rule = dyn Fn(&[Key]) -> Scalar + Send + Sync;
type MapRule = dyn Fn(&[Key]) -> Tensor + Send + Sync;

/// A scalar-valued multilinear functional on `B^{⊗n}`, given by its values
/// on basis tuples.
#[derive(Clone)]
pub struct Cochain {
    inst: Instance,
    arity: usize,
    rule: Arc<Rule>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cochain")
            .field("arity", &self.arity)
            .field("instance", &self.inst.descriptor())
            .finish()
    }
}

impl Cochain {
    pub fn new<F>(inst: &Instance, arity: usize, rule: F) -> Self
    where
        F: Fn(&[Key]) -> Scalar + Send + Sync + 'static,
    {
        Cochain {
            inst: inst.clone(),
            arity,
            rule: Arc::new(rule),
        }
    }

    pub fn zero(inst: &Instance, arity: usize) -> Self {
        Cochain::new(inst, arity, |_| Scalar::ZERO)
    }

    /// `δ^{⊗n}`, the unit for `⋆` on functionals of arity `n`.
    pub fn counit(inst: &Instance, arity: usize) -> Self {
        let i = inst.clone();
        Cochain::new(inst, arity, move |u| i.counit_tuple(u))
    }

    /// Arity-0 cochain holding a constant.
    pub fn constant(inst: &Instance, value: Scalar) -> Self {
        Cochain::new(inst, 0, move |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    /// Value on a basis tuple. The tuple length must equal the arity.
    pub fn eval(&self, u: &[Key]) -> Scalar {
        debug_assert_eq!(u.len(), self.arity);
        (self.rule)(u)
    }

    pub fn eval_tensor(&self, t: &Tensor) -> Result<Scalar> {
        if t.tag() != self.inst.tag() {
            return Err(Error::InstanceMismatch {
                expected: self.inst.tag(),
                found: t.tag(),
            });
        }
        if t.rank() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: t.rank(),
            });
        }
        Ok(t.terms().map(|(u, c)| c * (self.rule)(u)).sum())
    }

    pub fn eval_element(&self, a: &Element) -> Result<Scalar> {
        self.eval_tensor(&a.clone().into_tensor())
    }

    fn same_shape(&self, other: &Cochain) -> Result<()> {
        if self.inst.tag() != other.inst.tag() {
            return Err(Error::InstanceMismatch {
                expected: self.inst.tag(),
                found: other.inst.tag(),
            });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_shape(other)?;
        let (f, g) = (self.rule.clone(), other.rule.clone());
        Ok(Cochain::new(&self.inst, self.arity, move |u| f(u) + g(u)))
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.scale(-Scalar::ONE))
    }

    pub fn scale(&self, c: Scalar) -> Cochain {
        let f = self.rule.clone();
        Cochain::new(&self.inst, self.arity, move |u| c * f(u))
    }

    /// `f⊗g`, of arity `arity(f) + arity(g)`.
    pub fn tensor(&self, other: &Cochain) -> Result<Cochain> {
        if self.inst.tag() != other.inst.tag() {
            return Err(Error::InstanceMismatch {
                expected: self.inst.tag(),
                found: other.inst.tag(),
            });
        }
        let m = self.arity;
        let (f, g) = (self.rule.clone(), other.rule.clone());
        Ok(Cochain::new(&self.inst, m + other.arity, move |u| {
            f(&u[..m]) * g(&u[m..])
        }))
    }

    /// `f∘T` for a linear map `T: B^{⊗m} → B^{⊗n}` given on basis tuples.
    pub fn pullback<T>(&self, source_arity: usize, map: T) -> Cochain
    where
        T: Fn(&[Key]) -> Tensor + Send + Sync + 'static,
    {
        let f = self.clone();
        Cochain::new(&self.inst, source_arity, move |u| {
            let img = map(u);
            img.terms().map(|(v, c)| c * f.eval(v)).sum()
        })
    }

    /// `f∘μ^{(n)}` for an arity-1 `f`: `(a₁,…,aₙ) ↦ f(a₁⋯aₙ)`.
    pub fn after_mul(&self, n: usize) -> Result<Cochain> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        let inst = self.inst.clone();
        Ok(self.pullback(n, move |u| inst.mul_tuple(u).into_tensor()))
    }

    /// `f∘S^{⊗n}`.
    pub fn after_antipode(&self) -> Result<Cochain> {
        if !self.inst.has_antipode() {
            return Err(Error::CapabilityMissing("antipode"));
        }
        let inst = self.inst.clone();
        Ok(self.pullback(self.arity, move |u| {
            inst.antipode_tensor(&inst.basis_tensor(u.to_vec())).unwrap()
        }))
    }

    /// Caches values per basis tuple. Useful for derived cochains that are
    /// expensive to evaluate (e.g. anything built from products).
    pub fn memoized(&self) -> Cochain {
        let f = self.rule.clone();
        let cache: Arc<RwLock<BTreeMap<Vec<Key>, Scalar>>> = Arc::new(RwLock::new(BTreeMap::new()));
        Cochain::new(&self.inst, self.arity, move |u| {
            if let Some(v) = cache.read().get(u) {
                return *v;
            }
            let v = f(u);
            cache.write().insert(u.to_vec(), v);
            v
        })
    }
}

/// `(f⋆g)(u) = Σ f(u₍₁₎) g(u₍₂₎)` over the coproduct of `B^{⊗n}`.
pub fn convolve_functionals(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    f.same_shape(g)?;
    let (f, g) = (f.clone(), g.clone());
    let inst = f.inst.clone();
    Ok(Cochain::new(&f.inst.clone(), f.arity, move |u| {
        inst.comul_tuple(u)
            .into_iter()
            .map(|(l, r, c)| c * f.eval(&l) * g.eval(&r))
            .sum()
    }))
}

/// A multiplication `B⊗B → B` used as the target product of `⋆`.
pub trait Product: Send + Sync {
    fn product_keys(&self, a: &Key, b: &Key) -> Element;

    fn product(&self, a: &Element, b: &Element) -> Element {
        let inst = self.instance();
        let mut terms = Vec::new();
        for (ka, ca) in a.terms() {
            for (kb, cb) in b.terms() {
                for (k, c) in self.product_keys(ka, kb).terms() {
                    terms.push((k.clone(), ca * cb * c));
                }
            }
        }
        inst.collect(terms)
    }

    fn instance(&self) -> &Instance;
}

impl Product for Instance {
    fn product_keys(&self, a: &Key, b: &Key) -> Element {
        self.collect(self.mul_keys(a, b))
    }

    fn instance(&self) -> &Instance {
        self
    }
}

/// A linear map `B^{⊗m} → B^{⊗n}` given on basis tuples.
#[derive(Clone)]
pub struct LinMap {
    inst: Instance,
    source_rank: usize,
    target_rank: usize,
    rule: Arc<MapRule>,
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinMap")
            .field("source_rank", &self.source_rank)
            .field("target_rank", &self.target_rank)
            .finish()
    }
}

impl LinMap {
    pub fn new<F>(inst: &Instance, source_rank: usize, target_rank: usize, rule: F) -> Self
    where
        F: Fn(&[Key]) -> Tensor + Send + Sync + 'static,
    {
        LinMap {
            inst: inst.clone(),
            source_rank,
            target_rank,
            rule: Arc::new(rule),
        }
    }

    /// Map into `B` given by an element-valued rule.
    pub fn to_algebra<F>(inst: &Instance, source_rank: usize, rule: F) -> Self
    where
        F: Fn(&[Key]) -> Element + Send + Sync + 'static,
    {
        LinMap::new(inst, source_rank, 1, move |u| rule(u).into_tensor())
    }

    pub fn identity(inst: &Instance, rank: usize) -> Self {
        let i = inst.clone();
        LinMap::new(inst, rank, rank, move |u| i.basis_tensor(u.to_vec()))
    }

    pub fn antipode(inst: &Instance) -> Result<Self> {
        if !inst.has_antipode() {
            return Err(Error::CapabilityMissing("antipode"));
        }
        let i = inst.clone();
        Ok(LinMap::to_algebra(inst, 1, move |u| {
            i.collect(i.antipode_key(&u[0]).unwrap())
        }))
    }

    /// `𝟙δ^{⊗n}`, the unit for `⋆` on maps `B^{⊗n} → B`.
    pub fn unit_counit(inst: &Instance, source_rank: usize) -> Self {
        let i = inst.clone();
        LinMap::to_algebra(inst, source_rank, move |u| {
            i.scale(i.counit_tuple(u), &i.one()).unwrap()
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn apply_tuple(&self, u: &[Key]) -> Tensor {
        (self.rule)(u)
    }

    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        if t.rank() != self.source_rank {
            return Err(Error::ArityMismatch {
                expected: self.source_rank,
                found: t.rank(),
            });
        }
        if t.tag() != self.inst.tag() {
            return Err(Error::InstanceMismatch {
                expected: self.inst.tag(),
                found: t.tag(),
            });
        }
        let mut acc = Tensor::zero(self.inst.tag(), self.target_rank);
        for (u, c) in t.terms() {
            let img = self.inst.scale_tensor(c, &(self.rule)(u));
            acc = self.inst.add_tensors(&acc, &img)?;
        }
        Ok(acc)
    }

    /// Applies a map `B → B` to an element.
    pub fn apply_element(&self, a: &Element) -> Result<Element> {
        self.apply(&a.clone().into_tensor())?.into_element()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap) -> Result<LinMap> {
        if other.target_rank != self.source_rank {
            return Err(Error::ArityMismatch {
                expected: self.source_rank,
                found: other.target_rank,
            });
        }
        let (outer, inner) = (self.clone(), other.clone());
        Ok(LinMap::new(
            &self.inst,
            other.source_rank,
            self.target_rank,
            move |u| outer.apply(&inner.apply_tuple(u)).unwrap(),
        ))
    }

    /// `A⊗B` acting on `B^{⊗(m+m')}`.
    pub fn tensor(&self, other: &LinMap) -> LinMap {
        let (a, b) = (self.clone(), other.clone());
        let m = self.source_rank;
        let inst = self.inst.clone();
        LinMap::new(
            &self.inst,
            self.source_rank + other.source_rank,
            self.target_rank + other.target_rank,
            move |u| {
                let left = a.apply_tuple(&u[..m]);
                let right = b.apply_tuple(&u[m..]);
                let mut terms = Vec::new();
                for (l, c) in left.terms() {
                    for (r, d) in right.terms() {
                        let mut w = l.to_vec();
                        w.extend_from_slice(r);
                        terms.push((w, c * d));
                    }
                }
                inst.collect_tensor(a.target_rank + b.target_rank, terms)
            },
        )
    }
}

/// `A⋆B = product∘(A⊗B)∘Δ` for maps `B^{⊗n} → B`.
pub fn convolve_maps(a: &LinMap, b: &LinMap, product: Arc<dyn Product>) -> Result<LinMap> {
    if a.source_rank != b.source_rank {
        return Err(Error::ArityMismatch {
            expected: a.source_rank,
            found: b.source_rank,
        });
    }
    if a.inst.tag() != b.inst.tag() || a.inst.tag() != product.instance().tag() {
        return Err(Error::InstanceMismatch {
            expected: a.inst.tag(),
            found: b.inst.tag(),
        });
    }
    if a.target_rank != 1 || b.target_rank != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: a.target_rank.max(b.target_rank),
        });
    }
    let (a, b) = (a.clone(), b.clone());
    let inst = a.inst.clone();
    Ok(LinMap::to_algebra(&inst.clone(), a.source_rank, move |u| {
        let mut terms = Vec::new();
        for (l, r, c) in inst.comul_tuple(u) {
            let al = a.apply_tuple(&l).into_element().unwrap();
            let br = b.apply_tuple(&r).into_element().unwrap();
            for (k, d) in product.product(&al, &br).terms() {
                terms.push((k.clone(), c * d));
            }
        }
        inst.collect(terms)
    }))
}

/// `R_φ = (id⊗φ)∘Λ` on `B^{⊗n}`, for `φ` of arity `n`.
pub fn r_phi(phi: &Cochain) -> LinMap {
    let phi = phi.clone();
    let inst = phi.inst.clone();
    let n = phi.arity;
    LinMap::new(&inst.clone(), n, n, move |u| {
        let terms = inst
            .comul_tuple(u)
            .into_iter()
            .map(|(l, r, c)| (l, c * phi.eval(&r)));
        inst.collect_tensor(n, terms)
    })
}

/// `(φ⊗id)∘Λ`, the left-handed counterpart of [`r_phi`].
pub fn l_phi(phi: &Cochain) -> LinMap {
    let phi = phi.clone();
    let inst = phi.inst.clone();
    let n = phi.arity;
    LinMap::new(&inst.clone(), n, n, move |u| {
        let terms = inst
            .comul_tuple(u)
            .into_iter()
            .map(|(l, r, c)| (r, c * phi.eval(&l)));
        inst.collect_tensor(n, terms)
    })
}

/// How a convolution exponential is evaluated; see the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConvExpPlan {
    /// `e^{t f(u)}` on grouplike tuples.
    ClosedFormGrouplike,
    /// `Σ_{k ≤ deg u} tᵏ/k! f^{⋆k}(u)`.
    DegreeTruncated,
    /// `f ≡ 0` on a finite basis: the exponential is the counit.
    Vanishing,
}

/// The convolution semigroup `t ↦ e_⋆^{tf}` of a functional `f`.
pub struct ConvExp {
    f: Cochain,
    plan: ConvExpPlan,
    /// Taylor coefficients `f^{⋆k}(u)/k!`, `k = 0..=deg(u)`, per basis tuple.
    series: RwLock<BTreeMap<Vec<Key>, Arc<[Scalar]>>>,
}

impl fmt::Debug for ConvExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvExp")
            .field("arity", &self.f.arity)
            .field("plan", &self.plan)
            .finish()
    }
}

impl ConvExp {
    pub fn new(f: &Cochain) -> Result<Self> {
        let inst = &f.inst;
        let plan = match inst.kind() {
            BasisKind::GrouplikeBasis => ConvExpPlan::ClosedFormGrouplike,
            BasisKind::GradedConnected => {
                if !f.eval(&inst.unit_tuple(f.arity)).is_exact_zero() {
                    return Err(Error::NotNormalized);
                }
                ConvExpPlan::DegreeTruncated
            }
            BasisKind::Finite => {
                let basis = inst
                    .rules()
                    .finite_basis()
                    .ok_or(Error::NoTerminationCertificate)?;
                let mut vanishes = true;
                for_each_tuple(&basis, f.arity, &mut |u| {
                    if f.eval(u).norm() > inst.tolerance().prune {
                        vanishes = false;
                    }
                });
                if !vanishes {
                    return Err(Error::NoTerminationCertificate);
                }
                ConvExpPlan::Vanishing
            }
        };
        Ok(ConvExp {
            f: f.clone(),
            plan,
            series: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn plan(&self) -> ConvExpPlan {
        self.plan
    }

    pub fn generator(&self) -> &Cochain {
        &self.f
    }

    /// Taylor coefficients in `t` at the basis tuple `u`.
    fn coefficients(&self, u: &[Key]) -> Arc<[Scalar]> {
        if let Some(c) = self.series.read().get(u) {
            return c.clone();
        }
        let inst = &self.f.inst;
        let deg = inst.tuple_degree(u).unwrap_or(0) as usize;
        // powers[k] = f^{⋆k}(u)
        let mut powers = vec![Scalar::ZERO; deg + 1];
        powers[0] = inst.counit_tuple(u);
        if deg > 0 {
            for (l, r, c) in inst.comul_tuple(u) {
                if inst.tuple_degree(&l) == Some(0) {
                    // f vanishes on the unit tuple
                    continue;
                }
                let fl = self.f.eval(&l);
                if fl.is_exact_zero() {
                    continue;
                }
                let sub = self.coefficients(&r);
                // sub[j] = f^{⋆j}(r)/j!, and f^{⋆(j+1)}(u) ∋ f(l) f^{⋆j}(r)
                let mut fact = 1.0;
                for (j, s) in sub.iter().enumerate() {
                    if j > 0 {
                        fact *= j as f64;
                    }
                    if j < deg {
                        powers[j + 1] += c * fl * (*s * fact);
                    }
                }
            }
        }
        let mut fact = 1.0;
        let coeffs: Arc<[Scalar]> = powers
            .iter()
            .enumerate()
            .map(|(k, p)| {
                if k > 0 {
                    fact *= k as f64;
                }
                *p * (1.0 / fact)
            })
            .collect::<Vec<_>>()
            .into();
        self.series.write().insert(u.to_vec(), coeffs.clone());
        coeffs
    }

    /// `f^{⋆k}(u)`.
    pub fn power(&self, k: usize, u: &[Key]) -> Scalar {
        match self.plan {
            ConvExpPlan::ClosedFormGrouplike => self.f.eval(u).powi(k as u32),
            ConvExpPlan::Vanishing => {
                if k == 0 {
                    self.f.inst.counit_tuple(u)
                } else {
                    Scalar::ZERO
                }
            }
            ConvExpPlan::DegreeTruncated => {
                let c = self.coefficients(u);
                match c.get(k) {
                    Some(v) => *v * factorial(k),
                    None => Scalar::ZERO,
                }
            }
        }
    }

    /// `e_⋆^{tf}(u)`.
    pub fn eval(&self, t: f64, u: &[Key]) -> Scalar {
        match self.plan {
            ConvExpPlan::ClosedFormGrouplike => (self.f.eval(u) * t).exp(),
            ConvExpPlan::Vanishing => self.f.inst.counit_tuple(u),
            ConvExpPlan::DegreeTruncated => {
                let c = self.coefficients(u);
                // Horner in t
                let mut acc = Scalar::ZERO;
                for v in c.iter().rev() {
                    acc = acc * t + *v;
                }
                acc
            }
        }
    }

    pub fn eval_tensor(&self, t: f64, u: &Tensor) -> Result<Scalar> {
        if u.rank() != self.f.arity {
            return Err(Error::ArityMismatch {
                expected: self.f.arity,
                found: u.rank(),
            });
        }
        Ok(u.terms().map(|(v, c)| c * self.eval(t, v)).sum())
    }

    /// `e_⋆^{tf}` as a cochain.
    pub fn at(self: &Arc<Self>, t: f64) -> Cochain {
        let me = self.clone();
        Cochain::new(&self.f.inst, self.f.arity, move |u| me.eval(t, u))
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, i| a * i as f64)
}

/// Calls `f` on every tuple of length `n` over `basis`.
pub(crate) fn for_each_tuple(basis: &[Key], n: usize, f: &mut dyn FnMut(&[Key])) {
    let mut idx = vec![0usize; n];
    let mut tuple: Vec<Key> = vec![basis[0].clone(); n];
    loop {
        for (i, &j) in idx.iter().enumerate() {
            tuple[i] = basis[j].clone();
        }
        f(&tuple);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < basis.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `e_⋆^{tf}(u)` for a one-off evaluation.
pub fn conv_exp(f: &Cochain, t: f64, u: &Tensor) -> Result<Scalar> {
    ConvExp::new(f)?.eval_tensor(t, u)
}

/// Human-readable name for the plan, used in reports.
pub fn plan_name(plan: ConvExpPlan) -> String {
    match plan {
        ConvExpPlan::ClosedFormGrouplike => "closed-form-grouplike".into(),
        ConvExpPlan::DegreeTruncated => "degree-truncated".into(),
        ConvExpPlan::Vanishing => "vanishing".into(),
    }
}

/// The `R_φ` lemma for arity-1 `φ, ψ` on sampled elements:
/// `δ∘R_φ = φ`, `R_φ∘R_ψ = R_{φ⋆ψ}`, `R_{δ⊗φ} = id⊗R_φ`,
/// `R_{φ⊗δ} = R_φ⊗id` and `μ∘R_{φ∘μ} = R_φ∘μ`.
pub fn check_r_phi_lemma(phi: &Cochain, psi: &Cochain, sampler: &Sampler, tol: f64) -> Result<Report> {
    let inst = phi.instance().clone();
    for f in [phi, psi] {
        if f.arity() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: f.arity(),
            });
        }
    }
    let delta = Cochain::counit(&inst, 1);
    let rp = r_phi(phi);
    let rpp = r_phi(&convolve_functionals(phi, psi)?);
    let rs = r_phi(psi);
    let r_dp = r_phi(&delta.tensor(phi)?);
    let r_pd = r_phi(&phi.tensor(&delta)?);
    let id = LinMap::identity(&inst, 1);
    let (id_rp, rp_id) = (id.tensor(&rp), rp.tensor(&id));
    let r_pmu = r_phi(&phi.after_mul(2)?);
    let mut items = [
        Check::new("r_phi.counit", "delta R_phi = phi", tol),
        Check::new("r_phi.composition", "R_phi R_psi = R_{phi * psi}", tol),
        Check::new("r_phi.left_counit", "R_{delta x phi} = id x R_phi", tol),
        Check::new("r_phi.right_counit", "R_{phi x delta} = R_phi x id", tol),
        Check::new("r_phi.product", "mu R_{phi mu} = R_phi mu", tol),
    ];
    let mut s = sampler.stream("r_phi");
    for _ in 0..sampler.budget {
        let a = s.element(&inst);
        let ra = rp.apply_element(&a)?;
        items[0].record(residual_scalars(inst.counit(&ra)?, phi.eval_element(&a)?));
        let lhs = rp.apply_element(&rs.apply_element(&a)?)?;
        items[1].record(residual_elements(&lhs, &rpp.apply_element(&a)?));
        let b = s.element(&inst);
        let ab = inst.tensor_product(&[&a, &b])?;
        items[2].record(residual(&r_dp.apply(&ab)?, &id_rp.apply(&ab)?));
        items[3].record(residual(&r_pd.apply(&ab)?, &rp_id.apply(&ab)?));
        let lhs = inst.mul_pairs(&r_pmu.apply(&ab)?)?.into_element()?;
        let rhs = rp.apply_element(&inst.mul(&a, &b)?)?;
        items[4].record(residual_elements(&lhs, &rhs));
    }
    let mut report = Report::new();
    for c in items {
        report.push(c.finish());
    }
    Ok(report)
}
