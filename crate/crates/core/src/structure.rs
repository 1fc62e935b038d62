//! Sampled verification of the bialgebra, Hopf and ∗-structure axioms of an
//! instance.

use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{
    residual, residual_elements, residual_scalars, BasisKind, Element, Instance, Key, Tensor,
};
use crate::report::{Check, Report};
use crate::sample::Sampler;
use crate::scalar::Scalar;

/// Associativity and unit tolerances for the undeformed structure.
const TOL_ASSOC: f64 = 1e-8;
const TOL_UNIT: f64 = 1e-12;

/// `(Δ⊗id)` (left) or `(id⊗Δ)` (right) on a rank-2 tensor.
fn comul_slot(inst: &Instance, t: &Tensor, slot: usize) -> Tensor {
    let mut terms = Vec::new();
    for (u, c) in t.terms() {
        for (l, r, d) in inst.comul_key(&u[slot]) {
            let mut w = u.to_vec();
            w.splice(slot..=slot, [l, r]);
            terms.push((w, c * d));
        }
    }
    inst.collect_tensor(t.rank() + 1, terms)
}

/// `(δ⊗id)` or `(id⊗δ)` on a rank-2 tensor.
fn counit_slot(inst: &Instance, t: &Tensor, slot: usize) -> Element {
    let terms = t
        .terms()
        .map(|(u, c)| (u[1 - slot].clone(), c * inst.counit_key(&u[slot])));
    inst.collect(terms)
}

/// `μ∘(S⊗id)∘Δ` (`left = true`) or `μ∘(id⊗S)∘Δ`.
pub(crate) fn antipode_convolution(inst: &Instance, a: &Element, left: bool) -> Element {
    let d = inst.comul(a).unwrap();
    let s = inst
        .map_factors(&d, |i, k| {
            if (i == 0) == left {
                inst.antipode_key(k)
            } else {
                Ok(alloc::vec![(k.clone(), Scalar::ONE)])
            }
        })
        .unwrap();
    inst.mul_pairs(&s).unwrap().into_element().unwrap()
}

/// Checks the structure maps of `inst` on sampled elements.
///
/// Always: associativity, unit, coassociativity, counit, `Δ` and `δ` algebra
/// homomorphisms, consistency of the basis kind and the cocommutative flag.
/// With an antipode: the antipode identity and `S(𝟙) = 𝟙`. With an
/// involution: `a** = a`, `(ab)* = b*a*` and `Δ(a*) = (∗⊗∗)Δ(a)`.
pub fn check_structure(inst: &Instance, sampler: &Sampler) -> Report {
    let mut report = Report::new();
    let n = sampler.budget;

    let mut c = Check::new("structure.associativity", "(ab)c = a(bc)", TOL_ASSOC);
    let mut s = sampler.stream("structure.associativity");
    for _ in 0..n {
        let (a, b, cc) = (s.element(inst), s.element(inst), s.element(inst));
        let lhs = inst.mul(&inst.mul(&a, &b).unwrap(), &cc).unwrap();
        let rhs = inst.mul(&a, &inst.mul(&b, &cc).unwrap()).unwrap();
        c.record_with(residual_elements(&lhs, &rhs), || {
            format!(
                "a = {}, b = {}, c = {}",
                inst.render(&a),
                inst.render(&b),
                inst.render(&cc)
            )
        });
    }
    report.push(c.finish());

    let mut c = Check::new("structure.unit", "1a = a = a1", TOL_UNIT);
    let mut s = sampler.stream("structure.unit");
    let one = inst.one();
    for _ in 0..n {
        let a = s.element(inst);
        c.record(residual_elements(&inst.mul(&one, &a).unwrap(), &a));
        c.record(residual_elements(&inst.mul(&a, &one).unwrap(), &a));
    }
    report.push(c.finish());

    let mut c = Check::new(
        "structure.coassociativity",
        "(Delta x id) Delta = (id x Delta) Delta",
        TOL_ASSOC,
    );
    let mut s = sampler.stream("structure.coassociativity");
    for _ in 0..n {
        let a = s.element(inst);
        let d = inst.comul(&a).unwrap();
        c.record(residual(&comul_slot(inst, &d, 0), &comul_slot(inst, &d, 1)));
    }
    report.push(c.finish());

    let mut c = Check::new(
        "structure.counit",
        "(delta x id) Delta = id = (id x delta) Delta",
        TOL_UNIT,
    );
    let mut s = sampler.stream("structure.counit");
    for _ in 0..n {
        let a = s.element(inst);
        let d = inst.comul(&a).unwrap();
        c.record(residual_elements(&counit_slot(inst, &d, 0), &a));
        c.record(residual_elements(&counit_slot(inst, &d, 1), &a));
    }
    report.push(c.finish());

    let mut c = Check::new("structure.comul_hom", "Delta(ab) = Delta(a) Delta(b)", TOL_ASSOC);
    let mut c2 = Check::new("structure.counit_hom", "delta(ab) = delta(a) delta(b)", TOL_ASSOC);
    let mut s = sampler.stream("structure.homomorphisms");
    for _ in 0..n {
        let (a, b) = (s.element(inst), s.element(inst));
        let ab = inst.mul(&a, &b).unwrap();
        let lhs = inst.comul(&ab).unwrap();
        let rhs = inst
            .mul_tensors(&inst.comul(&a).unwrap(), &inst.comul(&b).unwrap())
            .unwrap();
        c.record(residual(&lhs, &rhs));
        c2.record(residual_scalars(
            inst.counit(&ab).unwrap(),
            inst.counit(&a).unwrap() * inst.counit(&b).unwrap(),
        ));
    }
    report.push(c.finish());
    report.push(c2.finish());

    if inst.has_antipode() {
        let mut c = Check::new(
            "structure.antipode",
            "mu (S x id) Delta = 1 delta = mu (id x S) Delta",
            TOL_ASSOC,
        );
        let mut s = sampler.stream("structure.antipode");
        for _ in 0..n {
            let a = s.element(inst);
            let unit = inst.scale(inst.counit(&a).unwrap(), &one).unwrap();
            c.record(residual_elements(&antipode_convolution(inst, &a, true), &unit));
            c.record(residual_elements(&antipode_convolution(inst, &a, false), &unit));
        }
        report.push(c.finish());

        let mut c = Check::new("structure.antipode_unit", "S(1) = 1", 0.0);
        c.record(residual_elements(&inst.antipode(&one).unwrap(), &one));
        report.push(c.finish());
    }

    if inst.has_star() {
        let mut c = Check::new("structure.star_involutive", "a** = a", TOL_UNIT);
        let mut c2 = Check::new("structure.star_antihom", "(ab)* = b* a*", TOL_ASSOC);
        let mut c3 = Check::new("structure.star_comul", "Delta(a*) = (* x *) Delta(a)", TOL_ASSOC);
        let mut s = sampler.stream("structure.star");
        for _ in 0..n {
            let (a, b) = (s.element(inst), s.element(inst));
            let astar = inst.star(&a).unwrap();
            c.record(residual_elements(&inst.star(&astar).unwrap(), &a));
            let lhs = inst.star(&inst.mul(&a, &b).unwrap()).unwrap();
            let rhs = inst.mul(&inst.star(&b).unwrap(), &astar).unwrap();
            c2.record(residual_elements(&lhs, &rhs));
            let d = inst.comul(&a).unwrap();
            let starred = star_tensor(inst, &d);
            c3.record(residual(&inst.comul(&astar).unwrap(), &starred));
        }
        report.push(c.finish());
        report.push(c2.finish());
        report.push(c3.finish());
    }

    match inst.kind() {
        BasisKind::GrouplikeBasis => {
            let mut c = Check::new("structure.grouplike", "Delta(b) = b x b, delta(b) = 1", 0.0);
            let mut s = sampler.stream("structure.kind");
            for _ in 0..n {
                let k = s.key(inst);
                let d = inst.comul_key(&k);
                let exact = d.len() == 1
                    && d[0].0 == k
                    && d[0].1 == k
                    && d[0].2 == Scalar::ONE
                    && inst.counit_key(&k) == Scalar::ONE;
                c.record_with(if exact { 0.0 } else { 1.0 }, || format!("at {}", inst.label(&k)));
            }
            report.push(c.finish());
        }
        BasisKind::GradedConnected => {
            let mut c = Check::new(
                "structure.grading",
                "deg 1 = 0, only 1 in degree 0, mul adds and Delta preserves degree",
                0.0,
            );
            let unit = inst.unit_key();
            c.record(if inst.degree(&unit) == Some(0) { 0.0 } else { 1.0 });
            let mut s = sampler.stream("structure.kind");
            for _ in 0..n {
                let (a, b) = (s.key(inst), s.key(inst));
                let (da, db) = (inst.degree(&a), inst.degree(&b));
                let mut ok = da.is_some() && db.is_some();
                ok &= (da == Some(0)) == (a == unit);
                for (k, _) in inst.mul_keys(&a, &b) {
                    ok &= inst
                        .degree(&k)
                        .zip(da.zip(db))
                        .is_some_and(|(d, (x, y))| d == x + y);
                }
                for (l, r, _) in inst.comul_key(&a) {
                    ok &= inst.tuple_degree(&[l, r]) == da;
                }
                c.record_with(if ok { 0.0 } else { 1.0 }, || {
                    format!("at {} and {}", inst.label(&a), inst.label(&b))
                });
            }
            report.push(c.finish());
        }
        BasisKind::Finite => {}
    }

    let mut c = Check::new(
        "structure.cocommutative_flag",
        "flag agrees with tau Delta = Delta",
        0.0,
    );
    let keys: Vec<Key> = match inst.rules().finite_basis() {
        Some(b) => b,
        None => {
            let mut s = sampler.stream("structure.cocommutative");
            (0..n).map(|_| s.key(inst)).collect()
        }
    };
    let mut symmetric = true;
    for k in &keys {
        let d = inst.comul(&inst.basis(k.clone())).unwrap();
        let r = residual(&d, &inst.flip(&d));
        if inst.is_cocommutative() {
            c.record_with(r, || format!("tau Delta != Delta at {}", inst.label(k)));
        }
        symmetric &= r == 0.0;
    }
    if !inst.is_cocommutative() && inst.rules().finite_basis().is_some() && symmetric {
        c.note(alloc::string::String::from(
            "flag is false but the whole basis is cocommutative",
        ));
        report.push(c.finish_with(false));
    } else {
        report.push(c.finish());
    }

    report
}

/// `(∗⊗∗)` on a tensor, antilinear in the coefficients.
pub(crate) fn star_tensor(inst: &Instance, t: &Tensor) -> Tensor {
    let conj = inst.collect_tensor(t.rank(), t.terms().map(|(u, c)| (u.to_vec(), c.conj())));
    inst.map_factors(&conj, |_, k| inst.star_key(k)).unwrap()
}
