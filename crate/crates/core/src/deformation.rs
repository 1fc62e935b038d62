//! Additive deformations `μ_t = μ⋆e_⋆^{tL}` generated by a validated
//! 2-cocycle `L`, the conjugation semigroup `Φ_t` of trivial deformations,
//! deformed antipodes `S_t = S⋆e_⋆^{−tσ}` and the splitting of a generator
//! into a coboundary part and a part with constant antipodes.
//!
//! Orientation: a trivial deformation has `L = ∂ψ`, `Φ_t = R_{e^{tψ}}` and
//! `μ_t = Φ_{−t}∘μ∘(Φ_t⊗Φ_t)`. With this choice `σ = ψ + ψ∘S` and
//! `S_t = Φ_{−t}∘S∘Φ_{−t}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use spin::{Once, RwLock};

use crate::algebra::{
    residual, residual_elements, residual_scalars, BasisKind, Element, Instance, Key, Tensor,
};
use crate::cohomology::{
    check_commuting, check_normalized, check_witness, coboundary, render_tuple, validate_generator,
    CochainClassifier,
};
use crate::convolution::{convolve_maps, r_phi, Cochain, ConvExp, LinMap, Product};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::sample::{Sampler, SamplerConfig};
use crate::scalar::Scalar;

/// Default deformation parameters.
pub const DEFAULT_T_GRID: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];
/// Step sizes of the finite-difference derivative checks.
pub const FD_STEPS: [f64; 2] = [1e-3, 1e-4];
/// The finite-difference error must stay below `FD_CONSTANT · h`.
pub const FD_CONSTANT: f64 = 10.0;
/// Tolerance for identities of the deformed structure.
pub const TOL_LAW: f64 = 1e-8;

/// `μ_t` at a fixed `t`, memoized on basis pairs.
pub struct DeformedProduct {
    inst: Instance,
    exp: Arc<ConvExp>,
    t: f64,
    cache: RwLock<BTreeMap<(Key, Key), Element>>,
}

impl fmt::Debug for DeformedProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeformedProduct").field("t", &self.t).finish()
    }
}

impl DeformedProduct {
    pub fn t(&self) -> f64 {
        self.t
    }
}

impl Product for DeformedProduct {
    fn product_keys(&self, a: &Key, b: &Key) -> Element {
        let pair = (a.clone(), b.clone());
        if let Some(v) = self.cache.read().get(&pair) {
            return v.clone();
        }
        // μ_t(a⊗b) = Σ μ(a₍₁₎b₍₁₎) e_⋆^{tL}(a₍₂₎⊗b₍₂₎)
        let mut terms = Vec::new();
        for (l, r, c) in self.inst.comul_tuple(&[a.clone(), b.clone()]) {
            let e = self.exp.eval(self.t, &r);
            if e.is_exact_zero() {
                continue;
            }
            for (k, d) in self.inst.mul_keys(&l[0], &l[1]) {
                terms.push((k, c * e * d));
            }
        }
        let v = self.inst.collect(terms);
        self.cache.write().insert(pair, v.clone());
        v
    }

    fn instance(&self) -> &Instance {
        &self.inst
    }
}

/// `σ = L∘(id⊗S)∘Δ`, together with the flipped form `L∘(S⊗id)∘Δ`.
#[derive(Clone, Debug)]
pub struct SigmaFunctional {
    pub sigma: Cochain,
    pub flipped: Cochain,
}

impl SigmaFunctional {
    fn new(l: &Cochain) -> Result<Self> {
        let inst = l.instance().clone();
        if !inst.has_antipode() {
            return Err(Error::CapabilityMissing("antipode"));
        }
        let build = |left: bool| {
            let inst = inst.clone();
            let l = l.clone();
            Cochain::new(&inst.clone(), 1, move |u| {
                let mut acc = Scalar::ZERO;
                for (a1, a2, c) in inst.comul_key(&u[0]) {
                    let (s, other) = if left {
                        (&a1, a2.clone())
                    } else {
                        (&a2, a1.clone())
                    };
                    for (k, d) in inst.antipode_key(s).unwrap() {
                        let pair = if left {
                            [k, other.clone()]
                        } else {
                            [other.clone(), k]
                        };
                        acc += c * d * l.eval(&pair);
                    }
                }
                acc
            })
            .memoized()
        };
        Ok(SigmaFunctional {
            sigma: build(false),
            flipped: build(true),
        })
    }
}

struct HopfData {
    sigma: SigmaFunctional,
    exp_sigma: Arc<ConvExp>,
}

struct Inner {
    inst: Instance,
    l: Cochain,
    class: CochainClassifier,
    exp_l: Arc<ConvExp>,
    products: RwLock<BTreeMap<u64, Arc<DeformedProduct>>>,
    hopf: Once<core::result::Result<Arc<HopfData>, Error>>,
}

/// A validated generator and the deformation it generates.
#[derive(Clone)]
pub struct Deformation(Arc<Inner>);

impl fmt::Debug for Deformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Deformation")
            .field("instance", &self.0.inst.descriptor())
            .field("plan", &self.0.exp_l.plan())
            .finish()
    }
}

impl Deformation {
    /// Validates `l` as a generator (normalized, commuting, cocycle, and
    /// hermitian when `require_star`) and prepares `e_⋆^{tL}`.
    pub fn new(l: &Cochain, sampler: &Sampler, require_star: bool) -> Result<Self> {
        if l.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: l.arity(),
            });
        }
        let class = validate_generator(l, sampler, require_star);
        if let Some(why) = class.failure_summary(require_star) {
            return Err(Error::NotValidated(why));
        }
        Self::from_parts(l, class)
    }

    fn from_parts(l: &Cochain, class: CochainClassifier) -> Result<Self> {
        let exp_l = Arc::new(ConvExp::new(l)?);
        Ok(Deformation(Arc::new(Inner {
            inst: l.instance().clone(),
            l: l.clone(),
            class,
            exp_l,
            products: RwLock::new(BTreeMap::new()),
            hopf: Once::new(),
        })))
    }

    pub fn instance(&self) -> &Instance {
        &self.0.inst
    }

    pub fn generator(&self) -> &Cochain {
        &self.0.l
    }

    pub fn classifier(&self) -> &CochainClassifier {
        &self.0.class
    }

    /// `e_⋆^{tL}` for all `t`.
    pub fn exponential(&self) -> &Arc<ConvExp> {
        &self.0.exp_l
    }

    /// `μ_t`, shared between callers asking for the same `t`.
    pub fn product(&self, t: f64) -> Arc<DeformedProduct> {
        let key = t.to_bits();
        if let Some(p) = self.0.products.read().get(&key) {
            return p.clone();
        }
        let p = Arc::new(DeformedProduct {
            inst: self.0.inst.clone(),
            exp: self.0.exp_l.clone(),
            t,
            cache: RwLock::new(BTreeMap::new()),
        });
        self.0.products.write().entry(key).or_insert(p).clone()
    }

    fn hopf(&self) -> Result<Arc<HopfData>> {
        self.0
            .hopf
            .call_once(|| {
                let sigma = SigmaFunctional::new(&self.0.l)?;
                let exp_sigma = Arc::new(ConvExp::new(&sigma.sigma)?);
                Ok(Arc::new(HopfData { sigma, exp_sigma }))
            })
            .clone()
    }
}

fn check_same(inst: &Instance, a: &Element) -> Result<()> {
    if a.tag() != inst.tag() {
        return Err(Error::InstanceMismatch {
            expected: inst.tag(),
            found: a.tag(),
        });
    }
    Ok(())
}

/// `μ_t(a⊗b)`.
pub fn deformed_mul(d: &Deformation, t: f64, a: &Element, b: &Element) -> Result<Element> {
    check_same(d.instance(), a)?;
    check_same(d.instance(), b)?;
    Ok(d.product(t).product(a, b))
}

/// `A⋆_t B = μ_t∘(A⊗B)∘Δ`.
pub fn deformed_convolution(d: &Deformation, t: f64, a: &LinMap, b: &LinMap) -> Result<LinMap> {
    convolve_maps(a, b, d.product(t))
}

/// `σ = L∘(id⊗S)∘Δ`.
pub fn sigma(d: &Deformation) -> Result<SigmaFunctional> {
    Ok(d.hopf()?.sigma.clone())
}

/// `S_t = S⋆e_⋆^{−tσ}`.
pub fn deformed_antipode(d: &Deformation, t: f64) -> Result<LinMap> {
    let h = d.hopf()?;
    let inst = d.instance().clone();
    Ok(LinMap::to_algebra(&inst.clone(), 1, move |u| {
        let mut terms = Vec::new();
        for (a1, a2, c) in inst.comul_key(&u[0]) {
            let e = h.exp_sigma.eval(-t, &[a2]);
            if e.is_exact_zero() {
                continue;
            }
            for (k, s) in inst.antipode_key(&a1).unwrap() {
                terms.push((k, c * s * e));
            }
        }
        inst.collect(terms)
    }))
}

/// Applies `μ_p` to factors `(0,1)` and `μ_q` to `(2,3)` of a rank-4 tensor.
fn products_on_pairs(inst: &Instance, t4: &Tensor, p: &dyn Product, q: &dyn Product) -> Tensor {
    let mut terms = Vec::new();
    for (u, c) in t4.terms() {
        let left = p.product_keys(&u[0], &u[1]);
        let right = q.product_keys(&u[2], &u[3]);
        for (l, a) in left.terms() {
            for (r, b) in right.terms() {
                terms.push((vec![l.clone(), r.clone()], c * a * b));
            }
        }
    }
    inst.collect_tensor(2, terms)
}

fn describe_t(t: f64) -> String {
    format!("t = {}", t)
}

/// Sampler for finite-difference checks: unit-size group coordinates keep
/// the second-order term `h·L(u)²/2` inside the `FD_CONSTANT·h` band.
fn fd_sampler(sampler: &Sampler) -> Sampler {
    sampler.clone().with_config(SamplerConfig {
        coord_bound: 1,
        ..sampler.config
    })
}

/// The axioms of an additive deformation on sampled elements: associativity
/// and unitality of every `μ_t`, `μ₀ = μ`, coalgebra compatibility
/// `Δ∘μ_{t+s} = (μ_t⊗μ_s)∘Λ`, the semigroup law of `δ∘μ_t`, and recovery
/// of `L` as the derivative of `δ∘μ_t` at zero.
pub fn check_deformation_axioms(d: &Deformation, sampler: &Sampler, grid: &[f64]) -> Report {
    let inst = d.instance();
    let mut report = Report::new();
    let n = sampler.budget;

    let mut c = Check::new(
        "deformation.associativity",
        "mu_t(mu_t(a,b),c) = mu_t(a,mu_t(b,c))",
        TOL_LAW,
    );
    let mut u = Check::new("deformation.unit", "mu_t(1,a) = a = mu_t(a,1)", TOL_LAW);
    for &t in grid {
        let p = d.product(t);
        let mut s = sampler.stream(&format!("deformation.associativity/{}", t));
        let one = inst.one();
        for _ in 0..n {
            let (a, b, e) = (s.element(inst), s.element(inst), s.element(inst));
            let lhs = p.product(&p.product(&a, &b), &e);
            let rhs = p.product(&a, &p.product(&b, &e));
            c.record_with(residual_elements(&lhs, &rhs), || {
                format!(
                    "{}: a = {}, b = {}, c = {}",
                    describe_t(t),
                    inst.render(&a),
                    inst.render(&b),
                    inst.render(&e)
                )
            });
            u.record(residual_elements(&p.product(&one, &a), &a));
            u.record(residual_elements(&p.product(&a, &one), &a));
        }
    }
    report.push(c.finish());
    report.push(u.finish());

    let mut c = Check::new("deformation.at_zero", "mu_0 = mu", TOL_LAW);
    let p0 = d.product(0.0);
    let mut s = sampler.stream("deformation.at_zero");
    for _ in 0..n {
        let (a, b) = (s.element(inst), s.element(inst));
        c.record(residual_elements(&p0.product(&a, &b), &inst.mul(&a, &b).unwrap()));
    }
    report.push(c.finish());

    let mut c = Check::new(
        "deformation.coalgebra",
        "Delta mu_{t+s} = (mu_t x mu_s) (id x tau x id)(Delta x Delta)",
        TOL_LAW,
    );
    let mut g = Check::new(
        "deformation.semigroup",
        "delta mu_{t+s} = (delta mu_t) * (delta mu_s)",
        TOL_LAW,
    );
    for &t in grid {
        for &r in grid {
            let (pt, pr, ps) = (d.product(t), d.product(r), d.product(t + r));
            let mut st = sampler.stream(&format!("deformation.coalgebra/{}/{}", t, r));
            for _ in 0..n {
                let (a, b) = (st.element(inst), st.element(inst));
                let lhs = inst.comul(&ps.product(&a, &b)).unwrap();
                let lam = inst
                    .comul_tensor(&inst.tensor_product(&[&a, &b]).unwrap())
                    .unwrap();
                let rhs = products_on_pairs(inst, &lam, pt.as_ref(), pr.as_ref());
                c.record_with(residual(&lhs, &rhs), || {
                    format!(
                        "t = {}, s = {}: a = {}, b = {}",
                        t,
                        r,
                        inst.render(&a),
                        inst.render(&b)
                    )
                });
            }
            let mut st = sampler.stream(&format!("deformation.semigroup/{}/{}", t, r));
            for _ in 0..n {
                let u2 = st.tuple(inst, 2);
                let lhs = inst.counit(&ps.product_keys(&u2[0], &u2[1])).unwrap();
                let rhs: Scalar = inst
                    .comul_tuple(&u2)
                    .into_iter()
                    .map(|(l, r2, c)| {
                        c * inst.counit(&pt.product_keys(&l[0], &l[1])).unwrap()
                            * inst.counit(&pr.product_keys(&r2[0], &r2[1])).unwrap()
                    })
                    .sum();
                g.record_with(residual_scalars(lhs, rhs), || {
                    format!("t = {}, s = {} at {}", t, r, render_tuple(inst, &u2))
                });
            }
        }
    }
    report.push(c.finish());
    report.push(g.finish());

    report.push(derivative_check(d, sampler));
    report
}

/// `|(δ∘μ_h(u) − (δ⊗δ)(u))/h − L(u)| ≤ FD_CONSTANT·h`. The recorded
/// residual is the error divided by `h`.
pub fn derivative_check(d: &Deformation, sampler: &Sampler) -> crate::report::LawResult {
    let inst = d.instance();
    let fd = fd_sampler(sampler);
    let mut c = Check::new(
        "deformation.derivative",
        "|(delta mu_h(u) - (delta x delta)(u))/h - L(u)| / h <= 10 for h in {1e-3, 1e-4}",
        FD_CONSTANT,
    );
    for &h in &FD_STEPS {
        let p = d.product(h);
        let mut s = fd.stream(&format!("deformation.derivative/{}", h));
        for _ in 0..fd.budget {
            let u = s.tuple(inst, 2);
            let dm = inst.counit(&p.product_keys(&u[0], &u[1])).unwrap();
            let quotient = (dm - inst.counit_tuple(&u)) * (1.0 / h);
            let err = (quotient - d.generator().eval(&u)).norm() / h;
            c.record_with(err, || format!("h = {} at {}", h, render_tuple(inst, &u)));
        }
    }
    c.finish()
}

/// `(μ_t(a⊗b))* = μ_t(b*⊗a*)` for `t` in the grid.
pub fn star_deformation_check(d: &Deformation, sampler: &Sampler, grid: &[f64]) -> Result<Report> {
    let inst = d.instance();
    if !inst.has_star() {
        return Err(Error::CapabilityMissing("involution"));
    }
    let mut report = Report::new();
    let mut c = Check::new("star.deformed_product", "(mu_t(a,b))* = mu_t(b*,a*)", TOL_LAW);
    for &t in grid {
        let p = d.product(t);
        let mut s = sampler.stream(&format!("star.deformed_product/{}", t));
        for _ in 0..sampler.budget {
            let (a, b) = (s.element(inst), s.element(inst));
            let lhs = inst.star(&p.product(&a, &b)).unwrap();
            let rhs = p.product(&inst.star(&b).unwrap(), &inst.star(&a).unwrap());
            c.record_with(residual_elements(&lhs, &rhs), || {
                format!(
                    "{}: a = {}, b = {}",
                    describe_t(t),
                    inst.render(&a),
                    inst.render(&b)
                )
            });
        }
    }
    report.push(c.finish());
    let mut c = Check::new(
        "star.generator_hermitian",
        "conj(L(b*,a*)) = L(a,b)",
        inst.tolerance().eq,
    );
    {
        let h = crate::cohomology::check_hermitian(d.generator(), sampler, inst.tolerance().eq)?;
        c.record(h.max_residual);
        if let Some(dt) = h.detail {
            c.note(dt);
        }
        report.push(c.finish_with(h.pass));
    }
    Ok(report)
}

/// A trivial deformation: a generator with a witness `ψ`, `∂ψ = L`.
#[derive(Clone)]
pub struct TrivialDeformation {
    d: Deformation,
    psi: Cochain,
    exp_psi: Arc<ConvExp>,
}

impl fmt::Debug for TrivialDeformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrivialDeformation")
            .field("deformation", &self.d)
            .finish()
    }
}

impl TrivialDeformation {
    /// Checks that `ψ` is normalized, commuting and satisfies `∂ψ = L` on
    /// samples.
    pub fn new(d: &Deformation, psi: &Cochain, sampler: &Sampler) -> Result<Self> {
        if psi.arity() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: psi.arity(),
            });
        }
        let tol = d.instance().tolerance().eq;
        let mut failing = Vec::new();
        if !check_normalized(psi).pass {
            failing.push("normalized");
        }
        if !check_commuting(psi, sampler, tol).pass {
            failing.push("commuting");
        }
        if !check_witness(d.generator(), psi, sampler, tol).pass {
            failing.push("d psi = L");
        }
        if !failing.is_empty() {
            return Err(Error::NotValidated(format!(
                "witness is not {}",
                failing.join(", ")
            )));
        }
        Ok(TrivialDeformation {
            d: d.clone(),
            psi: psi.clone(),
            exp_psi: Arc::new(ConvExp::new(psi)?),
        })
    }

    pub fn deformation(&self) -> &Deformation {
        &self.d
    }

    pub fn witness(&self) -> &Cochain {
        &self.psi
    }
}

/// `Φ_t = id⋆e_⋆^{tψ} = R_{e^{tψ}}`.
pub fn phi_map(tr: &TrivialDeformation, t: f64) -> LinMap {
    r_phi(&tr.exp_psi.at(t))
}

/// `μ_t(a⊗b) = Φ_{−t}(μ(Φ_t a ⊗ Φ_t b))`, `(Φ_t⊗id)∘Δ = (id⊗Φ_t)∘Δ` and
/// `Φ_t(𝟙) = 𝟙` at one `t`.
pub fn check_trivial_conjugation(tr: &TrivialDeformation, t: f64, sampler: &Sampler) -> Report {
    let inst = tr.d.instance();
    let p = tr.d.product(t);
    let (phi, phi_inv) = (phi_map(tr, t), phi_map(tr, -t));
    let mut report = Report::new();
    let mut c = Check::new(
        "trivial.conjugation",
        "mu_t(a,b) = Phi_{-t}(mu(Phi_t a, Phi_t b))",
        TOL_LAW,
    );
    let mut w = Check::new(
        "trivial.intertwining",
        "(Phi_t x id) Delta = (id x Phi_t) Delta",
        TOL_LAW,
    );
    let mut s = sampler.stream(&format!("trivial.conjugation/{}", t));
    for _ in 0..sampler.budget {
        let (a, b) = (s.element(inst), s.element(inst));
        let lhs = p.product(&a, &b);
        let pa = phi.apply_element(&a).unwrap();
        let pb = phi.apply_element(&b).unwrap();
        let rhs = phi_inv.apply_element(&inst.mul(&pa, &pb).unwrap()).unwrap();
        c.record_with(residual_elements(&lhs, &rhs), || {
            format!(
                "{}: a = {}, b = {}",
                describe_t(t),
                inst.render(&a),
                inst.render(&b)
            )
        });
        let da = inst.comul(&a).unwrap();
        let id = LinMap::identity(inst, 1);
        let left = phi.tensor(&id).apply(&da).unwrap();
        let right = id.tensor(&phi).apply(&da).unwrap();
        w.record(residual(&left, &right));
    }
    report.push(c.finish());
    report.push(w.finish());
    let mut c = Check::new("trivial.phi_unit", "Phi_t(1) = 1", TOL_LAW);
    let one = inst.one();
    c.record(residual_elements(&phi.apply_element(&one).unwrap(), &one));
    report.push(c.finish());
    report
}

/// The full trivial-deformation suite over a grid: conjugation and
/// intertwining at every `t`, `Φ₀ = id`, the group law `Φ_t∘Φ_s = Φ_{t+s}`,
/// and on Hopf instances `σ = ψ + ψ∘S`, `S_t = Φ_{−t}∘S∘Φ_{−t}` and the
/// constant-antipode criterion `S_t = S ∀t ⟺ S∘Φ_t = Φ_{−t}∘S ∀t`.
pub fn check_trivial_deformation(tr: &TrivialDeformation, sampler: &Sampler, grid: &[f64]) -> Report {
    let inst = tr.d.instance();
    let mut merged: BTreeMap<String, (Check, Vec<crate::report::LawResult>)> = BTreeMap::new();
    let mut order = Vec::new();
    for &t in grid {
        for law in check_trivial_conjugation(tr, t, sampler).laws {
            if !merged.contains_key(&law.law_id) {
                order.push(law.law_id.clone());
            }
            merged
                .entry(law.law_id.clone())
                .or_insert_with(|| (Check::new(&law.law_id, &law.statement, TOL_LAW), Vec::new()))
                .1
                .push(law);
        }
    }
    let mut report = Report::new();
    for id in order {
        let (mut c, laws) = merged.remove(&id).unwrap();
        for (l, &t) in laws.iter().zip(grid) {
            c.record_with(l.max_residual, || {
                format!(
                    "{}{}",
                    describe_t(t),
                    l.detail.as_ref().map(|d| format!(", {}", d)).unwrap_or_default()
                )
            });
        }
        report.push(c.finish());
    }

    let mut c = Check::new("trivial.phi_zero", "Phi_0 = id", TOL_LAW);
    let phi0 = phi_map(tr, 0.0);
    let mut s = sampler.stream("trivial.phi_zero");
    for _ in 0..sampler.budget {
        let a = s.element(inst);
        c.record(residual_elements(&phi0.apply_element(&a).unwrap(), &a));
    }
    report.push(c.finish());

    let mut c = Check::new("trivial.phi_group_law", "Phi_t Phi_s = Phi_{t+s}", TOL_LAW);
    for &t in grid {
        for &r in grid {
            let (pt, pr, ps) = (phi_map(tr, t), phi_map(tr, r), phi_map(tr, t + r));
            let mut s = sampler.stream(&format!("trivial.phi_group_law/{}/{}", t, r));
            for _ in 0..sampler.budget {
                let a = s.element(inst);
                let lhs = pt.apply_element(&pr.apply_element(&a).unwrap()).unwrap();
                let rhs = ps.apply_element(&a).unwrap();
                c.record_with(residual_elements(&lhs, &rhs), || {
                    format!("t = {}, s = {}: a = {}", t, r, inst.render(&a))
                });
            }
        }
    }
    report.push(c.finish());

    if inst.has_antipode() {
        let sig = sigma(&tr.d).unwrap();
        let psi_s = tr.psi.after_antipode().unwrap();
        let mut c = Check::new("trivial.sigma_formula", "sigma = psi + psi S", TOL_LAW);
        let mut s = sampler.stream("trivial.sigma_formula");
        for _ in 0..sampler.budget {
            let k = s.tuple(inst, 1);
            let rhs = tr.psi.eval(&k) + psi_s.eval(&k);
            c.record_with(residual_scalars(sig.sigma.eval(&k), rhs), || {
                format!("at {}", render_tuple(inst, &k))
            });
        }
        report.push(c.finish());

        let antipode = LinMap::antipode(inst).unwrap();
        let mut c = Check::new("trivial.antipode_formula", "S_t = Phi_{-t} S Phi_{-t}", TOL_LAW);
        let mut constant = true;
        let mut commutes = true;
        let mut crit = Check::new(
            "trivial.constant_antipode_criterion",
            "(S_t = S for all t) iff (S Phi_t = Phi_{-t} S for all t)",
            0.0,
        );
        for &t in grid {
            let st = deformed_antipode(&tr.d, t).unwrap();
            let (pt, pm) = (phi_map(tr, t), phi_map(tr, -t));
            let mut s = sampler.stream(&format!("trivial.antipode_formula/{}", t));
            for _ in 0..sampler.budget {
                let a = s.element(inst);
                let lhs = st.apply_element(&a).unwrap();
                let rhs = pm
                    .apply_element(&antipode.apply_element(&pm.apply_element(&a).unwrap()).unwrap())
                    .unwrap();
                c.record_with(residual_elements(&lhs, &rhs), || {
                    format!("{}: a = {}", describe_t(t), inst.render(&a))
                });
                let sa = antipode.apply_element(&a).unwrap();
                constant &= residual_elements(&lhs, &sa) <= TOL_LAW;
                let x = antipode.apply_element(&pt.apply_element(&a).unwrap()).unwrap();
                let y = pm.apply_element(&sa).unwrap();
                commutes &= residual_elements(&x, &y) <= TOL_LAW;
            }
        }
        report.push(c.finish());
        crit.record(if constant == commutes { 0.0 } else { 1.0 });
        crit.note(format!(
            "constant antipodes: {}, S Phi_t = Phi_-t S: {}",
            constant, commutes
        ));
        report.push(crit.finish());
    }
    report
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .norm()
                .partial_cmp(&a[j][col].norm())
                .unwrap_or(core::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].norm() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f.is_exact_zero() {
                continue;
            }
            let (top, rest) = a.split_at_mut(row);
            for (x, &v) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![Scalar::ZERO; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Left (`left = true`) or right `⋆_t`-inverse of the identity on the basis
/// key `a`, computed without using `σ`.
fn independent_inverse(
    inst: &Instance,
    p: &DeformedProduct,
    a: &Key,
    left: bool,
    memo: &mut BTreeMap<Key, Element>,
) -> Option<Element> {
    if let Some(v) = memo.get(a) {
        return Some(v.clone());
    }
    let v = match inst.kind() {
        BasisKind::GrouplikeBasis => {
            // μ_t(S(g)⊗g) is a multiple of 𝟙; divide it out
            let h = inst.antipode(&inst.basis(a.clone())).ok()?;
            let g = inst.basis(a.clone());
            let prod = if left {
                p.product(&h, &g)
            } else {
                p.product(&g, &h)
            };
            let lambda = prod.coeff(&inst.unit_key());
            inst.scale(Scalar::ONE / lambda, &h).ok()?
        }
        BasisKind::GradedConnected => {
            let unit = inst.unit_key();
            if *a == unit {
                inst.one()
            } else {
                // the terms with a unit on the inverted side give T(a) itself
                let mut acc = inst.zero();
                for (a1, a2, c) in inst.comul_key(a) {
                    let (inv, other) = if left { (&a1, &a2) } else { (&a2, &a1) };
                    if *other == unit {
                        continue;
                    }
                    let ti = independent_inverse(inst, p, inv, left, memo)?;
                    let o = inst.basis(other.clone());
                    let prod = if left {
                        p.product(&ti, &o)
                    } else {
                        p.product(&o, &ti)
                    };
                    acc = inst.add(&acc, &inst.scale(c, &prod).ok()?).ok()?;
                }
                let delta = inst.scale(inst.counit_key(a), &inst.one()).ok()?;
                inst.sub(&delta, &acc).ok()?
            }
        }
        BasisKind::Finite => {
            let basis = inst.rules().finite_basis()?;
            let nb = basis.len();
            let index: BTreeMap<Key, usize> =
                basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
            // unknowns x[j*nb + i]: coefficient of basis[i] in T(basis[j])
            let mut rows = vec![vec![Scalar::ZERO; nb * nb]; nb * nb];
            let mut rhs = vec![Scalar::ZERO; nb * nb];
            for (ai, ak) in basis.iter().enumerate() {
                for (a1, a2, c) in inst.comul_key(ak) {
                    let (inv, other) = if left { (&a1, &a2) } else { (&a2, &a1) };
                    let j = index[inv];
                    for (i, bi) in basis.iter().enumerate() {
                        let prod = if left {
                            p.product_keys(bi, other)
                        } else {
                            p.product_keys(other, bi)
                        };
                        for (k, d) in prod.terms() {
                            rows[ai * nb + index[k]][j * nb + i] += c * d;
                        }
                    }
                }
                rhs[ai * nb + index[&inst.unit_key()]] = inst.counit_key(ak);
            }
            let x = solve_linear(rows, rhs)?;
            for (j, bj) in basis.iter().enumerate() {
                let el = inst.collect((0..nb).map(|i| (basis[i].clone(), x[j * nb + i])));
                memo.insert(bj.clone(), el);
            }
            return memo.get(a).cloned();
        }
    };
    memo.insert(a.clone(), v.clone());
    Some(v)
}

/// Properties of the deformed antipodes over the grid: the antipode
/// identity, `S_t(𝟙) = 𝟙`, `S₀ = S`, anti-multiplicativity
/// `S_t∘μ_{−t} = μ_t∘(S_t⊗S_t)∘τ`, `Δ∘S_{t+r} = (S_t⊗S_r)∘τ∘Δ`,
/// `S_t∘S_{−t} = id` when cocommutative, `e_⋆^{tL}∘(id⊗S)∘Δ = e_⋆^{tσ}`,
/// the σ lemmas, uniqueness against independently computed one-sided
/// inverses, and the derivative `d/dt δ∘S_t = −σ`.
pub fn check_hopf_deformation(d: &Deformation, sampler: &Sampler, grid: &[f64]) -> Result<Report> {
    let inst = d.instance();
    let h = d.hopf()?;
    let n = sampler.budget;
    let one = inst.one();
    let mut report = Report::new();
    let antipodes: BTreeMap<u64, LinMap> = grid
        .iter()
        .chain(grid.iter().map(|t| -t).collect::<Vec<_>>().iter())
        .map(|&t| (t.to_bits(), deformed_antipode(d, t).unwrap()))
        .collect();
    let st = |t: f64| antipodes[&t.to_bits()].clone();

    // (a) antipode identity, (b) unit
    let mut a_chk = Check::new(
        "hopf.antipode_identity",
        "mu_t (S_t x id) Delta = 1 delta = mu_t (id x S_t) Delta",
        TOL_LAW,
    );
    let mut b_chk = Check::new("hopf.antipode_unit", "S_t(1) = 1", TOL_LAW);
    for &t in grid {
        let s_t = st(t);
        let id = LinMap::identity(inst, 1);
        let left = deformed_convolution(d, t, &s_t, &id)?;
        let right = deformed_convolution(d, t, &id, &s_t)?;
        let mut s = sampler.stream(&format!("hopf.antipode_identity/{}", t));
        for _ in 0..n {
            let a = s.element(inst);
            let unit = inst.scale(inst.counit(&a)?, &one)?;
            let (l, r) = (left.apply_element(&a)?, right.apply_element(&a)?);
            a_chk.record_with(
                residual_elements(&l, &unit).max(residual_elements(&r, &unit)),
                || format!("{}: a = {}", describe_t(t), inst.render(&a)),
            );
        }
        b_chk.record(residual_elements(&s_t.apply_element(&one)?, &one));
    }
    report.push(a_chk.finish());
    report.push(b_chk.finish());

    let mut c = Check::new("hopf.antipode_at_zero", "S_0 = S", TOL_LAW);
    let s0 = deformed_antipode(d, 0.0)?;
    let mut s = sampler.stream("hopf.antipode_at_zero");
    for _ in 0..n {
        let a = s.element(inst);
        c.record(residual_elements(&s0.apply_element(&a)?, &inst.antipode(&a)?));
    }
    report.push(c.finish());

    // (c) anti-multiplicativity
    let mut c = Check::new(
        "hopf.antimultiplicative",
        "S_t mu_{-t}(a,b) = mu_t(S_t b, S_t a)",
        TOL_LAW,
    );
    for &t in grid {
        let (s_t, pt, pm) = (st(t), d.product(t), d.product(-t));
        let mut s = sampler.stream(&format!("hopf.antimultiplicative/{}", t));
        for _ in 0..n {
            let (a, b) = (s.element(inst), s.element(inst));
            let lhs = s_t.apply_element(&pm.product(&a, &b))?;
            let rhs = pt.product(&s_t.apply_element(&b)?, &s_t.apply_element(&a)?);
            c.record_with(residual_elements(&lhs, &rhs), || {
                format!(
                    "{}: a = {}, b = {}",
                    describe_t(t),
                    inst.render(&a),
                    inst.render(&b)
                )
            });
        }
    }
    report.push(c.finish());

    // (d) anti-comultiplicativity
    let mut c = Check::new(
        "hopf.anticomultiplicative",
        "Delta S_{t+r} = (S_t x S_r) tau Delta",
        TOL_LAW,
    );
    for &t in grid {
        for &r in grid {
            let sum = deformed_antipode(d, t + r)?;
            let pair = st(t).tensor(&st(r));
            let mut s = sampler.stream(&format!("hopf.anticomultiplicative/{}/{}", t, r));
            for _ in 0..n {
                let a = s.element(inst);
                let lhs = inst.comul(&sum.apply_element(&a)?)?;
                let rhs = pair.apply(&inst.flip(&inst.comul(&a)?))?;
                c.record_with(residual(&lhs, &rhs), || {
                    format!("t = {}, r = {}: a = {}", t, r, inst.render(&a))
                });
            }
        }
    }
    report.push(c.finish());

    // (e) involutivity in the cocommutative case
    if inst.is_cocommutative() {
        let mut c = Check::new("hopf.involutive", "S_t S_{-t} = id", TOL_LAW);
        for &t in grid {
            let (s_t, s_m) = (st(t), st(-t));
            let mut s = sampler.stream(&format!("hopf.involutive/{}", t));
            for _ in 0..n {
                let a = s.element(inst);
                let v = s_t.apply_element(&s_m.apply_element(&a)?)?;
                c.record(residual_elements(&v, &a));
            }
        }
        report.push(c.finish());
    }

    // (f) e^{tL}∘(id⊗S)∘Δ = e^{tσ}
    let mut c = Check::new(
        "hopf.sigma_exponential",
        "e^{tL} (id x S) Delta = e^{t sigma}",
        TOL_LAW,
    );
    for &t in grid {
        let mut s = sampler.stream(&format!("hopf.sigma_exponential/{}", t));
        for _ in 0..n {
            let k = s.key(inst);
            let mut lhs = Scalar::ZERO;
            for (a1, a2, cc) in inst.comul_key(&k) {
                for (sk, sd) in inst.antipode_key(&a2)? {
                    lhs += cc * sd * d.exponential().eval(t, &[a1.clone(), sk]);
                }
            }
            let rhs = h.exp_sigma.eval(t, core::slice::from_ref(&k));
            c.record_with(residual_scalars(lhs, rhs), || {
                format!("{} at {}", describe_t(t), inst.label(&k))
            });
        }
    }
    report.push(c.finish());

    // σ lemmas
    let sig = &h.sigma;
    let mut c = Check::new("hopf.sigma_flip", "L (id x S) Delta = L (S x id) Delta", TOL_LAW);
    let mut cu = Check::new("hopf.sigma_unit", "sigma(1) = 0", 0.0);
    cu.record(sig.sigma.eval(&[inst.unit_key()]).norm());
    let mut cm = Check::new(
        "hopf.sigma_commuting",
        "(sigma x id) Delta = (id x sigma) Delta",
        TOL_LAW,
    );
    let (rs, ls) = (r_phi(&sig.sigma), crate::convolution::l_phi(&sig.sigma));
    let mut s = sampler.stream("hopf.sigma");
    for _ in 0..n {
        let k = s.key(inst);
        c.record_with(
            residual_scalars(
                sig.sigma.eval(core::slice::from_ref(&k)),
                sig.flipped.eval(core::slice::from_ref(&k)),
            ),
            || format!("at {}", inst.label(&k)),
        );
        let e = inst.basis(k.clone());
        cm.record(residual_elements(&rs.apply_element(&e)?, &ls.apply_element(&e)?));
    }
    report.push(c.finish());
    report.push(cu.finish());
    report.push(cm.finish());

    // uniqueness: S_t agrees with independently computed left and right inverses
    let mut c = Check::new(
        "hopf.uniqueness",
        "left and right mu_t-convolution inverses of id coincide with S_t",
        TOL_LAW,
    );
    for &t in grid {
        let p = d.product(t);
        let s_t = st(t);
        let (mut lm, mut rm) = (BTreeMap::new(), BTreeMap::new());
        let mut s = sampler.stream(&format!("hopf.uniqueness/{}", t));
        for _ in 0..n {
            let k = s.key(inst);
            let expected = s_t.apply_element(&inst.basis(k.clone()))?;
            let l = independent_inverse(inst, &p, &k, true, &mut lm);
            let r = independent_inverse(inst, &p, &k, false, &mut rm);
            match (l, r) {
                (Some(l), Some(r)) => {
                    let res = residual_elements(&l, &expected).max(residual_elements(&r, &expected));
                    c.record_with(res, || format!("{} at {}", describe_t(t), inst.label(&k)));
                }
                _ => c.record_with(f64::INFINITY, || {
                    format!("{}: no inverse found at {}", describe_t(t), inst.label(&k))
                }),
            }
        }
    }
    report.push(c.finish());

    // d/dt δ∘S_t at 0 = −σ
    let fd = fd_sampler(sampler);
    let mut c = Check::new(
        "hopf.sigma_derivative",
        "|(delta S_h(a) - delta(a))/h + sigma(a)| / h <= 10 for h in {1e-3, 1e-4}",
        FD_CONSTANT,
    );
    for &hh in &FD_STEPS {
        let sh = deformed_antipode(d, hh)?;
        let mut s = fd.stream(&format!("hopf.sigma_derivative/{}", hh));
        for _ in 0..fd.budget {
            let k = s.key(inst);
            let e = inst.basis(k.clone());
            let q = (inst.counit(&sh.apply_element(&e)?)? - inst.counit_key(&k)) * (1.0 / hh);
            let err = (q + sig.sigma.eval(core::slice::from_ref(&k))).norm() / hh;
            c.record_with(err, || format!("h = {} at {}", hh, inst.label(&k)));
        }
    }
    report.push(c.finish());
    Ok(report)
}

/// Result of [`split_cocommutative`].
#[derive(Clone, Debug)]
pub struct Split {
    /// `½∂σ`, a coboundary.
    pub l1: Cochain,
    /// `L − ½∂σ`, generating a deformation with constant antipodes.
    pub l2: Cochain,
    pub report: Report,
}

/// `L = L1 + L2` with `L1 = ½∂σ` and `L2 = L − L1`.
///
/// Requires `σ = σ∘S` on samples and reports `∂σ = L + L∘(S⊗S)∘τ`, the
/// exact sum, validation of `L2` and constancy of its antipodes.
pub fn split_cocommutative(d: &Deformation, sampler: &Sampler, grid: &[f64]) -> Result<Split> {
    let inst = d.instance();
    let sig = sigma(d)?;
    let sig_s = sig.sigma.after_antipode()?;
    let mut s = sampler.stream("split.sigma_antipode");
    let mut pre = Check::new("split.sigma_antipode", "sigma = sigma S", TOL_LAW);
    for _ in 0..sampler.budget {
        let k = s.tuple(inst, 1);
        let r = residual_scalars(sig.sigma.eval(&k), sig_s.eval(&k));
        if r > TOL_LAW {
            return Err(Error::Precondition(format!(
                "sigma != sigma S at {}: {} vs {}",
                render_tuple(inst, &k),
                sig.sigma.eval(&k).render(),
                sig_s.eval(&k).render()
            )));
        }
        pre.record(r);
    }
    let mut report = Report::new();
    report.push(pre.finish());

    let l = d.generator();
    let dsigma = coboundary(&sig.sigma);
    let l1 = dsigma.scale(Scalar::real(0.5));
    let l2 = l.sub(&l1)?;

    // L∘(S⊗S)∘τ
    let flipped = {
        let inst2 = inst.clone();
        l.pullback(2, move |u| {
            let swapped = inst2.basis_tensor(vec![u[1].clone(), u[0].clone()]);
            inst2.antipode_tensor(&swapped).unwrap()
        })
    };
    let mut c = Check::new("split.dsigma", "d sigma = L + L (S x S) tau", TOL_LAW);
    // one rounding of the subtraction is all that separates L1 + L2 from L
    let mut cs = Check::new("split.sum", "L1 + L2 = L", 1e-15);
    let mut s = sampler.stream("split.dsigma");
    for _ in 0..sampler.budget {
        let u = s.tuple(inst, 2);
        c.record_with(
            residual_scalars(dsigma.eval(&u), l.eval(&u) + flipped.eval(&u)),
            || format!("at {}", render_tuple(inst, &u)),
        );
        cs.record(residual_scalars(l1.eval(&u) + l2.eval(&u), l.eval(&u)));
    }
    report.push(c.finish());
    report.push(cs.finish());

    let class = validate_generator(&l2, sampler, false);
    let mut c = Check::new(
        "split.l2_generator",
        "L2 is normalized, commuting and a cocycle",
        0.0,
    );
    if let Some(why) = class.failure_summary(false) {
        c.note(why);
    }
    report.push(c.finish_with(class.is_generator(false)));

    if class.is_generator(false) {
        let d2 = Deformation::from_parts(&l2, class)?;
        let mut c = Check::new(
            "split.constant_antipodes",
            "S_t = S for the deformation generated by L2",
            TOL_LAW,
        );
        for &t in grid {
            let st = deformed_antipode(&d2, t)?;
            let mut s = sampler.stream(&format!("split.constant_antipodes/{}", t));
            for _ in 0..sampler.budget {
                let a = s.element(inst);
                c.record_with(
                    residual_elements(&st.apply_element(&a)?, &inst.antipode(&a)?),
                    || format!("{}: a = {}", describe_t(t), inst.render(&a)),
                );
            }
        }
        report.push(c.finish());
    }
    Ok(Split { l1, l2, report })
}

/// Checks for the trivializing witness `ψ` of a PBW deformation: `L + ∂ψ`
/// is a generator, commutators of generators deform identically under
/// `L` and `L + ∂ψ`, and when `L` is symmetric on generators the product
/// generated by `L + ∂ψ` is the undeformed one on sampled monomials.
pub fn check_trivialization(
    d: &Deformation,
    psi: &Cochain,
    sampler: &Sampler,
    grid: &[f64],
) -> Result<Report> {
    let inst = d.instance();
    if !inst.descriptor().starts_with("symmetric_star") {
        return Err(Error::Precondition(format!(
            "trivialization needs a symmetric_star instance, got {}",
            inst.descriptor()
        )));
    }
    let l = d.generator();
    let shifted = l.add(&coboundary(psi))?;
    let mut report = Report::new();
    let class = validate_generator(&shifted, sampler, false);
    let mut c = Check::new("trivialize.shifted_generator", "L + d psi is a generator", 0.0);
    if let Some(why) = class.failure_summary(false) {
        c.note(why);
    }
    let ok = class.is_generator(false);
    report.push(c.finish_with(ok));
    if !ok {
        return Ok(report);
    }
    let dt = Deformation::from_parts(&shifted, class)?;

    let n = inst.unit_key().len();
    let gens: Vec<Key> = (0..n)
        .map(|i| {
            let mut k = Key::zeros(n);
            k.0[i] = 1;
            k
        })
        .collect();
    let mut symmetric = true;
    for a in &gens {
        for b in &gens {
            let (x, y) = (l.eval(&[a.clone(), b.clone()]), l.eval(&[b.clone(), a.clone()]));
            if residual_scalars(x, y) > TOL_LAW {
                symmetric = false;
            }
        }
    }

    let mut c = Check::new(
        "trivialize.commutators",
        "mu~_t(a b - b a) = mu_t(a b - b a) on generators",
        TOL_LAW,
    );
    for &t in grid {
        for a in &gens {
            for b in &gens {
                let (ea, eb) = (inst.basis(a.clone()), inst.basis(b.clone()));
                let orig = inst.sub(&deformed_mul(d, t, &ea, &eb)?, &deformed_mul(d, t, &eb, &ea)?)?;
                let triv = inst.sub(&deformed_mul(&dt, t, &ea, &eb)?, &deformed_mul(&dt, t, &eb, &ea)?)?;
                c.record_with(residual_elements(&orig, &triv), || {
                    format!("{}: {} {}", describe_t(t), inst.label(a), inst.label(b))
                });
            }
        }
    }
    report.push(c.finish());

    if symmetric {
        let mut c = Check::new("trivialize.constant", "mu~_t = mu for symmetric L", TOL_LAW);
        for &t in grid {
            let mut s = sampler.stream(&format!("trivialize.constant/{}", t));
            for _ in 0..sampler.budget {
                let (a, b) = (s.key(inst), s.key(inst));
                let (ea, eb) = (inst.basis(a.clone()), inst.basis(b.clone()));
                c.record_with(
                    residual_elements(&deformed_mul(&dt, t, &ea, &eb)?, &inst.mul(&ea, &eb)?),
                    || format!("{}: {} {}", describe_t(t), inst.label(&a), inst.label(&b)),
                );
            }
        }
        report.push(c.finish());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        make_primitive_bilinear_cocycle, make_z_cubic_coboundary, make_zd_matrix_cocycle, ComplexMatrix,
        GroupAlgebraZd, SweedlerH4, SymmetricStarAlgebra,
    };

    fn small() -> Sampler {
        Sampler::new(11).with_budget(25).with_config(SamplerConfig {
            coord_bound: 3,
            ..SamplerConfig::default()
        })
    }

    fn z1() -> Instance {
        Instance::new(GroupAlgebraZd::new(1))
    }

    #[test]
    fn cubic_deformed_product_closed_form() {
        let inst = z1();
        let (l, _) = make_z_cubic_coboundary(&inst).unwrap();
        let d = Deformation::new(&l, &small(), false).unwrap();
        let one = inst.basis(Key::from([1]));
        for t in [-1.0, 0.3, 1.0] {
            let v = deformed_mul(&d, t, &one, &one).unwrap();
            let expected = libm::exp(2.0 * t);
            assert!((v.coeff(&Key::from([2])).re - expected).abs() <= 1e-12 * expected);
        }
        let u = inst.one();
        let a = inst.basis(Key::from([3]));
        assert_eq!(deformed_mul(&d, 0.7, &u, &a).unwrap(), a);
    }

    #[test]
    fn oscillator_commutator() {
        let osc = Instance::new(SymmetricStarAlgebra::oscillator());
        let m = ComplexMatrix::from_real(&[&[0.0, 0.5], &[-0.5, 0.0]]).unwrap();
        let l = make_primitive_bilinear_cocycle(&osc, &m).unwrap();
        let d = Deformation::new(&l, &small(), true).unwrap();
        let (x, xs) = (osc.basis(Key::from([1, 0])), osc.basis(Key::from([0, 1])));
        let t = 0.8;
        let v = deformed_mul(&d, t, &x, &xs).unwrap();
        assert_eq!(v.coeff(&Key::from([1, 1])), Scalar::ONE);
        assert!(v
            .coeff(&Key::from([0, 0]))
            .approx_eq(Scalar::real(t / 2.0), 1e-15));
        let w = deformed_mul(&d, 1.0, &xs, &x).unwrap();
        let comm = osc.sub(&deformed_mul(&d, 1.0, &x, &xs).unwrap(), &w).unwrap();
        assert_eq!(comm, osc.one());
    }

    #[test]
    fn trivialization_of_symmetric_and_antisymmetric() {
        let osc = Instance::new(SymmetricStarAlgebra::oscillator());
        let sym = ComplexMatrix::from_real(&[&[0.0, 1.5], &[1.5, 0.0]]).unwrap();
        let d = Deformation::new(
            &make_primitive_bilinear_cocycle(&osc, &sym).unwrap(),
            &small(),
            false,
        )
        .unwrap();
        let psi = crate::instances::make_trivializing_functional(&d).unwrap();
        let r = check_trivialization(&d, &psi, &small(), &[0.5, 1.0]).unwrap();
        assert!(r.pass(), "{:?}", r);
        assert!(r.get("trivialize.constant").is_some());
        let anti = ComplexMatrix::from_real(&[&[0.0, 0.5], &[-0.5, 0.0]]).unwrap();
        let d = Deformation::new(
            &make_primitive_bilinear_cocycle(&osc, &anti).unwrap(),
            &small(),
            false,
        )
        .unwrap();
        let psi = crate::instances::make_trivializing_functional(&d).unwrap();
        let r = check_trivialization(&d, &psi, &small(), &[1.0]).unwrap();
        assert!(r.pass(), "{:?}", r);
        assert!(r.get("trivialize.constant").is_none());
    }

    #[test]
    fn cubic_sigma_and_antipodes() {
        let inst = z1();
        let (l, psi) = make_z_cubic_coboundary(&inst).unwrap();
        let d = Deformation::new(&l, &small(), false).unwrap();
        let sig = sigma(&d).unwrap();
        for k in -10..=10 {
            assert!(sig.sigma.eval(&[Key::from([k])]).norm() <= 1e-12);
        }
        let st = deformed_antipode(&d, 0.5).unwrap();
        let k = inst.basis(Key::from([4]));
        assert_eq!(st.apply_element(&k).unwrap(), inst.basis(Key::from([-4])));
        let tr = TrivialDeformation::new(&d, &psi, &small()).unwrap();
        let phi = phi_map(&tr, 0.5);
        let v = phi.apply_element(&inst.basis(Key::from([2]))).unwrap();
        assert!((v.coeff(&Key::from([2])).re - libm::exp(-0.5 * 8.0 / 3.0)).abs() <= 1e-12);
        let r = check_trivial_deformation(&tr, &small(), &DEFAULT_T_GRID);
        assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn corrupted_witness_fails_conjugation() {
        let inst = z1();
        let (l, psi) = make_z_cubic_coboundary(&inst).unwrap();
        let d = Deformation::new(&l, &small(), false).unwrap();
        let bad = psi.scale(Scalar::real(0.5));
        assert!(TrivialDeformation::new(&d, &bad, &small()).is_err());
        // bypass validation to watch the conjugation identity break
        let tr = TrivialDeformation {
            d: d.clone(),
            psi: bad.clone(),
            exp_psi: Arc::new(ConvExp::new(&bad).unwrap()),
        };
        let r = check_trivial_conjugation(&tr, 0.5, &small());
        assert!(!r.get("trivial.conjugation").unwrap().pass);
    }

    #[test]
    fn matrix_deformation_suites() {
        let z2 = Instance::new(GroupAlgebraZd::new(2));
        let a = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let l = make_zd_matrix_cocycle(&z2, &a).unwrap();
        let d = Deformation::new(&l, &small(), false).unwrap();
        let r = check_hopf_deformation(&d, &small(), &DEFAULT_T_GRID).unwrap();
        assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
        let r = check_deformation_axioms(&d, &small(), &DEFAULT_T_GRID);
        assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn split_of_matrix_cocycle() {
        let z2 = Instance::new(GroupAlgebraZd::new(2));
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0], &[0.0, -1.0]]).unwrap();
        let l = make_zd_matrix_cocycle(&z2, &a).unwrap();
        let d = Deformation::new(&l, &small(), false).unwrap();
        let split = split_cocommutative(&d, &small(), &DEFAULT_T_GRID).unwrap();
        assert!(
            split.report.pass(),
            "{:?}",
            split.report.failures().collect::<Vec<_>>()
        );
        // k (A − Aᵀ)/2 lᵀ with (A − Aᵀ)/2 = [[0,1],[−1,0]]
        for (k, l) in [([1, 0], [0, 1]), ([2, -1], [3, 4])] {
            let expected = (k[0] * l[1] - k[1] * l[0]) as f64;
            let v = split.l2.eval(&[Key::from(k), Key::from(l)]);
            assert!((v.re - expected).abs() <= 1e-9 && v.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn sweedler_accepts_only_the_zero_generator() {
        let h = Instance::new(SweedlerH4);
        let zero = Cochain::zero(&h, 2);
        let d = Deformation::new(&zero, &small(), false).unwrap();
        let r = check_hopf_deformation(&d, &small(), &[0.0, 1.0]).unwrap();
        assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
        let nonzero = Cochain::new(&h, 2, |u| {
            if u[0] == SweedlerH4::x() && u[1] == SweedlerH4::x() {
                Scalar::ONE
            } else {
                Scalar::ZERO
            }
        });
        assert!(matches!(
            ConvExp::new(&nonzero),
            Err(Error::NoTerminationCertificate)
        ));
    }

    #[test]
    fn solver_inverts_small_system() {
        let a = vec![
            vec![Scalar::real(2.0), Scalar::real(1.0)],
            vec![Scalar::real(1.0), Scalar::real(3.0)],
        ];
        let x = solve_linear(a, vec![Scalar::real(3.0), Scalar::real(5.0)]).unwrap();
        assert!(x[0].approx_eq(Scalar::real(0.8), 1e-12));
        assert!(x[1].approx_eq(Scalar::real(1.4), 1e-12));
    }
}
