//! The Hochschild complex of `B` with coefficients in the trivial bimodule
//! `ℂ` (left and right actions through `δ`), its normalized, commuting and
//! hermitian sub-complexes, and validation of deformation generators.
//!
//! Every `is_*` predicate is a sampled check: cochain spaces are infinite
//! dimensional and no finite certificate exists in general.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{residual_elements, Instance, Key};
use crate::convolution::Cochain;
use crate::error::{Error, Result};
use crate::report::{Check, LawResult, Report};
use crate::sample::Sampler;
use crate::scalar::Scalar;

/// The individual summands of `∂f(u)`, in the order they appear in the
/// defining formula.
fn coboundary_terms(f: &Cochain, u: &[Key]) -> Vec<Scalar> {
    let inst = f.instance();
    let n = f.arity();
    debug_assert_eq!(u.len(), n + 1);
    let mut terms = Vec::with_capacity(n + 2);
    terms.push(inst.counit_key(&u[0]) * f.eval(&u[1..]));
    let mut buf: Vec<Key> = Vec::with_capacity(n);
    for i in 1..=n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mut acc = Scalar::ZERO;
        for (k, c) in inst.mul_keys(&u[i - 1], &u[i]) {
            buf.clear();
            buf.extend_from_slice(&u[..i - 1]);
            buf.push(k);
            buf.extend_from_slice(&u[i + 1..]);
            acc += c * f.eval(&buf);
        }
        terms.push(acc * sign);
    }
    let sign = if (n + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    terms.push(f.eval(&u[..n]) * inst.counit_key(&u[n]) * sign);
    terms
}

/// `∂f(a₁,…,aₙ₊₁) = δ(a₁)f(a₂,…) + Σᵢ(−1)ⁱ f(…,aᵢaᵢ₊₁,…)
/// + (−1)ⁿ⁺¹ f(a₁,…,aₙ)δ(aₙ₊₁)`, evaluated lazily.
pub fn coboundary(f: &Cochain) -> Cochain {
    let g = f.clone();
    Cochain::new(f.instance(), f.arity() + 1, move |u| {
        coboundary_terms(&g, u).into_iter().sum()
    })
}

/// `|∂f(u)|` relative to the largest summand, so that cancellation between
/// large terms is judged at the right scale.
pub fn coboundary_residual(f: &Cochain, u: &[Key]) -> f64 {
    let terms = coboundary_terms(f, u);
    let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.norm()));
    let total: Scalar = terms.into_iter().sum();
    if !total.is_finite() {
        return f64::INFINITY;
    }
    total.norm() / scale
}

/// `+1` if `⌈n/2⌉` is odd (n = 1, 2, 5, 6, …), `−1` otherwise.
pub fn hermitian_sign(n: usize) -> f64 {
    if n.div_ceil(2) % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `f̃(a₁,…,aₙ) = conj(f(aₙ*,…,a₁*))`.
pub fn hermitian_twist(f: &Cochain) -> Result<Cochain> {
    let inst = f.instance().clone();
    if !inst.has_star() {
        return Err(Error::CapabilityMissing("involution"));
    }
    let g = f.clone();
    Ok(Cochain::new(&inst.clone(), f.arity(), move |u| {
        let reversed: Vec<Key> = u.iter().rev().cloned().collect();
        let starred = inst
            .map_factors(&inst.basis_tensor(reversed), |_, k| inst.star_key(k))
            .unwrap();
        let v: Scalar = starred.terms().map(|(w, c)| c * g.eval(w)).sum();
        v.conj()
    }))
}

/// Exact check `f(𝟙,…,𝟙) = 0`.
pub fn check_normalized(f: &Cochain) -> LawResult {
    let v = f.eval(&f.instance().unit_tuple(f.arity()));
    let mut c = Check::new("normalized", "f(1,...,1) = 0", 0.0);
    c.record(v.norm());
    if !v.is_exact_zero() {
        c.note(format!("f(1,...,1) = {}", v.render()));
    }
    c.finish_with(v.is_exact_zero())
}

pub fn is_normalized(f: &Cochain) -> bool {
    check_normalized(f).pass
}

/// `f⋆μ⁽ⁿ⁾ = μ⁽ⁿ⁾⋆f` on sampled basis tuples.
pub fn check_commuting(f: &Cochain, sampler: &Sampler, tol: f64) -> LawResult {
    let inst = f.instance();
    let n = f.arity();
    let mut c = Check::new("commuting", "f * mu^(n) = mu^(n) * f", tol);
    let mut s = sampler.stream(&format!("commuting/{}", n));
    for _ in 0..sampler.budget {
        let u = s.tuple(inst, n);
        let (lhs, rhs) = commuting_sides(inst, f, &u);
        let r = residual_elements(&lhs, &rhs);
        c.record_with(r, || format!("at {}", render_tuple(inst, &u)));
    }
    c.finish()
}

fn commuting_sides(
    inst: &Instance,
    f: &Cochain,
    u: &[Key],
) -> (crate::algebra::Element, crate::algebra::Element) {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (l, r, c) in inst.comul_tuple(u) {
        let fl = f.eval(&l);
        if !fl.is_exact_zero() {
            for (k, d) in inst.mul_tuple(&r).terms() {
                lhs.push((k.clone(), c * fl * d));
            }
        }
        let fr = f.eval(&r);
        if !fr.is_exact_zero() {
            for (k, d) in inst.mul_tuple(&l).terms() {
                rhs.push((k.clone(), c * fr * d));
            }
        }
    }
    (inst.collect(lhs), inst.collect(rhs))
}

pub fn is_commuting(f: &Cochain, sampler: &Sampler) -> bool {
    check_commuting(f, sampler, f.instance().tolerance().eq).pass
}

/// `∂f = 0` on sampled basis tuples.
pub fn check_cocycle(f: &Cochain, sampler: &Sampler, tol: f64) -> LawResult {
    let inst = f.instance();
    let n = f.arity();
    let mut c = Check::new("cocycle", "(d f)(a_1,...,a_{n+1}) = 0", tol);
    let mut s = sampler.stream(&format!("cocycle/{}", n));
    for _ in 0..sampler.budget {
        let u = s.tuple(inst, n + 1);
        c.record_with(coboundary_residual(f, &u), || {
            format!("at {}", render_tuple(inst, &u))
        });
    }
    c.finish()
}

/// `∂∂f = 0` on sampled `(n+2)`-tuples.
pub fn check_dd_zero(f: &Cochain, sampler: &Sampler, tol: f64) -> LawResult {
    let inst = f.instance();
    let n = f.arity();
    let df = coboundary(f);
    let mut c = Check::new("dd_zero", "d d f = 0", tol);
    let mut s = sampler.stream(&format!("dd_zero/{}", n));
    for _ in 0..sampler.budget {
        let u = s.tuple(inst, n + 2);
        c.record_with(coboundary_residual(&df, &u), || {
            format!("at {}", render_tuple(inst, &u))
        });
    }
    c.finish()
}

pub fn is_cocycle(f: &Cochain, sampler: &Sampler) -> bool {
    check_cocycle(f, sampler, f.instance().tolerance().eq).pass
}

/// `f̃ = ±f` with the sign of [`hermitian_sign`], on sampled basis tuples.
pub fn check_hermitian(f: &Cochain, sampler: &Sampler, tol: f64) -> Result<LawResult> {
    let inst = f.instance();
    let n = f.arity();
    let twisted = hermitian_twist(f)?;
    let sign = hermitian_sign(n);
    let mut c = Check::new(
        "hermitian",
        if sign > 0.0 {
            "conj(f(a_n*,...,a_1*)) = f(a_1,...,a_n)"
        } else {
            "conj(f(a_n*,...,a_1*)) = -f(a_1,...,a_n)"
        },
        tol,
    );
    let mut s = sampler.stream(&format!("hermitian/{}", n));
    for _ in 0..sampler.budget {
        let u = s.tuple(inst, n);
        let r = crate::algebra::residual_scalars(twisted.eval(&u), f.eval(&u) * sign);
        c.record_with(r, || format!("at {}", render_tuple(inst, &u)));
    }
    Ok(c.finish())
}

pub fn is_hermitian(f: &Cochain, sampler: &Sampler) -> Result<bool> {
    Ok(check_hermitian(f, sampler, f.instance().tolerance().eq)?.pass)
}

/// `‖∂w − f‖` on sampled tuples.
pub fn check_witness(f: &Cochain, w: &Cochain, sampler: &Sampler, tol: f64) -> LawResult {
    let inst = f.instance();
    let mut c = Check::new("coboundary_witness", "d w = f", tol);
    if w.arity() + 1 != f.arity() || w.instance().tag() != inst.tag() {
        c.note(String::from("witness has the wrong arity or instance"));
        return c.finish_with(false);
    }
    let dw = coboundary(w);
    let mut s = sampler.stream(&format!("witness/{}", f.arity()));
    for _ in 0..sampler.budget {
        let u = s.tuple(inst, f.arity());
        let r = crate::algebra::residual_scalars(dw.eval(&u), f.eval(&u));
        c.record_with(r, || format!("at {}", render_tuple(inst, &u)));
    }
    c.finish()
}

/// Outcome of the generator checks on a cochain.
#[derive(Clone, Debug)]
pub struct CochainClassifier {
    pub arity: usize,
    pub normalized: bool,
    pub commuting: bool,
    /// `None` when the instance has no involution.
    pub hermitian: Option<bool>,
    pub cocycle: bool,
    /// A verified `w` with `∂w = f`, when one was supplied.
    pub coboundary_witness: Option<Cochain>,
    /// The underlying per-law results.
    pub laws: Vec<LawResult>,
}

impl CochainClassifier {
    /// Normalized, commuting, cocycle, and hermitian when `require_star`.
    pub fn is_generator(&self, require_star: bool) -> bool {
        self.normalized && self.commuting && self.cocycle && (!require_star || self.hermitian == Some(true))
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new();
        for l in &self.laws {
            r.push(l.clone());
        }
        r
    }

    /// First failing law, for error messages.
    pub fn failure_summary(&self, require_star: bool) -> Option<String> {
        let mut missing = Vec::new();
        if !self.normalized {
            missing.push("normalized");
        }
        if !self.commuting {
            missing.push("commuting");
        }
        if !self.cocycle {
            missing.push("cocycle");
        }
        if require_star && self.hermitian != Some(true) {
            missing.push("hermitian");
        }
        if missing.is_empty() {
            None
        } else {
            Some(format!("generator is not {}", missing.join(", ")))
        }
    }
}

/// Runs all generator checks. Failures are reported in the classifier,
/// never raised.
pub fn validate_generator(l: &Cochain, sampler: &Sampler, require_star: bool) -> CochainClassifier {
    let tol = l.instance().tolerance().eq;
    let mut laws = Vec::new();
    let normalized = check_normalized(l);
    let commuting = check_commuting(l, sampler, tol);
    let cocycle = check_cocycle(l, sampler, tol);
    let hermitian = if l.instance().has_star() {
        check_hermitian(l, sampler, tol).ok()
    } else {
        if require_star {
            let mut c = Check::new("hermitian", "instance has an involution", 0.0);
            c.note(String::from("instance has no involution"));
            laws.push(c.finish_with(false));
        }
        None
    };
    let class = CochainClassifier {
        arity: l.arity(),
        normalized: normalized.pass,
        commuting: commuting.pass,
        hermitian: hermitian.as_ref().map(|h| h.pass),
        cocycle: cocycle.pass,
        coboundary_witness: None,
        laws: Vec::new(),
    };
    laws.push(normalized);
    laws.push(commuting);
    laws.push(cocycle);
    laws.extend(hermitian);
    CochainClassifier { laws, ..class }
}

/// [`validate_generator`] plus verification of a coboundary witness.
pub fn validate_generator_with_witness(
    l: &Cochain,
    witness: &Cochain,
    sampler: &Sampler,
    require_star: bool,
) -> CochainClassifier {
    let mut class = validate_generator(l, sampler, require_star);
    let w = check_witness(l, witness, sampler, l.instance().tolerance().eq);
    if w.pass {
        class.coboundary_witness = Some(witness.clone());
    }
    class.laws.push(w);
    class
}

/// `∂` preserves the normalized, commuting and hermitian sub-complexes: for
/// each property that `f` has, checks that `∂f` has it too.
pub fn subcomplex_stability(f: &Cochain, sampler: &Sampler) -> Report {
    let tol = f.instance().tolerance().eq;
    let df = coboundary(f);
    let n = f.arity();
    let mut report = Report::new();

    let implication = |id: &str, statement: &str, premise: &LawResult, conclusion: Option<LawResult>| {
        let mut c = Check::new(id, statement, tol);
        if !premise.pass {
            c.note(format!(
                "premise fails for f (arity {}), implication holds vacuously",
                n
            ));
            return c.finish_with(true);
        }
        match conclusion {
            Some(con) => {
                c.record(con.max_residual);
                if let Some(d) = con.detail {
                    c.note(d);
                }
                c.finish_with(con.pass)
            }
            None => c.finish_with(false),
        }
    };

    let pn = check_normalized(f);
    let cn = check_normalized(&df);
    report.push(implication(
        "subcomplex.normalized",
        "f in C^(N) => d f in C^(N)",
        &pn,
        Some(cn),
    ));

    let pc = check_commuting(f, sampler, tol);
    let cc = check_commuting(&df, sampler, tol);
    report.push(implication(
        "subcomplex.commuting",
        "f in C^(C) => d f in C^(C)",
        &pc,
        Some(cc),
    ));

    if f.instance().has_star() {
        let ph = check_hermitian(f, sampler, tol).unwrap();
        let ch = check_hermitian(&df, sampler, tol).ok();
        report.push(implication(
            "subcomplex.hermitian",
            "f in C^(H) => d f in C^(H) (sign by ceil(n/2) parity)",
            &ph,
            ch,
        ));
    }
    report
}

pub(crate) fn render_tuple(inst: &Instance, u: &[Key]) -> String {
    let parts: Vec<String> = u.iter().map(|k| inst.label(k)).collect();
    parts.join(" ⊗ ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        make_primitive_bilinear_cocycle, make_z_cubic_coboundary, make_z_polynomial_cocycle,
        make_zd_matrix_cocycle, ComplexMatrix, GroupAlgebraZd, SymmetricStarAlgebra,
    };

    fn z1() -> Instance {
        Instance::new(GroupAlgebraZd::new(1))
    }

    #[test]
    fn coboundary_of_cubic_functional_by_hand() {
        let (_, psi) = make_z_cubic_coboundary(&z1()).unwrap();
        let v = coboundary(&psi).eval(&[Key::from([1]), Key::from([2])]);
        assert!(v.approx_eq(Scalar::real(6.0), 1e-12));
        let dd = coboundary(&coboundary(&psi));
        let s = Sampler::new(3);
        let mut st = s.stream("dd");
        for _ in 0..50 {
            let u = st.tuple(&z1(), 3);
            assert!(dd.eval(&u).norm() <= 1e-9 * 1e3);
        }
    }

    #[test]
    fn linear_functional_in_first_slot_is_not_a_cocycle() {
        let l = make_z_polynomial_cocycle(&z1(), &[(1, 0, Scalar::ONE)]).unwrap();
        let v = coboundary(&l).eval(&[Key::from([1]), Key::from([1]), Key::from([1])]);
        assert_eq!(v, Scalar::real(-1.0));
        let class = validate_generator(&l, &Sampler::new(0), false);
        assert!(!class.cocycle);
        assert!(class.failure_summary(false).unwrap().contains("cocycle"));
    }

    #[test]
    fn normalization_is_exact() {
        let f = Cochain::new(&z1(), 2, |_| Scalar::ONE);
        assert!(!is_normalized(&f));
        assert!(is_normalized(&Cochain::zero(&z1(), 2)));
    }

    #[test]
    fn sign_rule() {
        let signs: Vec<f64> = (0..7).map(hermitian_sign).collect();
        assert_eq!(signs, [-1.0, 1.0, 1.0, -1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn matrix_cocycle_hermitian_iff_matrix_hermitian() {
        let z2 = Instance::new(GroupAlgebraZd::new(2));
        let s = Sampler::new(9).with_budget(50);
        let h = ComplexMatrix::new(
            2,
            2,
            alloc::vec![
                Scalar::real(1.0),
                Scalar::new(0.5, 0.25),
                Scalar::new(0.5, -0.25),
                Scalar::real(-2.0)
            ],
        )
        .unwrap();
        let l = make_zd_matrix_cocycle(&z2, &h).unwrap();
        let class = validate_generator(&l, &s, true);
        assert!(class.is_generator(true), "{:?}", class.laws);
        let nh = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let l = make_zd_matrix_cocycle(&z2, &nh).unwrap();
        assert!(!is_hermitian(&l, &s).unwrap());
    }

    #[test]
    fn oscillator_cocycle_validates() {
        let osc = Instance::new(SymmetricStarAlgebra::oscillator());
        let m = ComplexMatrix::from_real(&[&[0.0, 0.5], &[-0.5, 0.0]]).unwrap();
        let l = make_primitive_bilinear_cocycle(&osc, &m).unwrap();
        let class = validate_generator(&l, &Sampler::new(1).with_budget(60), true);
        assert!(class.is_generator(true), "{:?}", class.laws);
        let x = Key::from([1, 0]);
        let xs = Key::from([0, 1]);
        let tw = hermitian_twist(&l).unwrap();
        assert_eq!(tw.eval(&[x, xs]), Scalar::real(0.5));
    }

    #[test]
    fn zero_cochain_is_hermitian_in_every_arity() {
        let osc = Instance::new(SymmetricStarAlgebra::oscillator());
        for n in 0..4 {
            assert!(is_hermitian(&Cochain::zero(&osc, n), &Sampler::new(2).with_budget(10)).unwrap());
        }
    }

    #[test]
    fn witness_check() {
        let (l, psi) = make_z_cubic_coboundary(&z1()).unwrap();
        let class = validate_generator_with_witness(&l, &psi, &Sampler::new(5), false);
        assert!(class.is_generator(false));
        assert!(class.coboundary_witness.is_some());
        let bad = psi.scale(Scalar::real(2.0));
        let class = validate_generator_with_witness(&l, &bad, &Sampler::new(5), false);
        assert!(class.coboundary_witness.is_none());
    }

    #[test]
    fn stability_of_cubic_pair() {
        let (l, psi) = make_z_cubic_coboundary(&z1()).unwrap();
        let s = Sampler::new(8).with_budget(40);
        assert!(subcomplex_stability(&psi, &s).pass());
        assert!(subcomplex_stability(&l, &s).pass());
        assert!(subcomplex_stability(&Cochain::zero(&z1(), 2), &s).pass());
    }
}
