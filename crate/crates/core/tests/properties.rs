//! Randomized invariants against closed forms computed independently of
//! the convolution machinery.

use hopfdeform_core::cohomology::{coboundary, hermitian_sign};
use hopfdeform_core::convolution::ConvExp;
use hopfdeform_core::deformation::{deformed_antipode, deformed_mul};
use hopfdeform_core::instances::{
    make_primitive_bilinear_cocycle, make_z_polynomial_cocycle, make_z_polynomial_functional,
    make_zd_matrix_cocycle, ComplexMatrix, GroupAlgebraZd, SymmetricStarAlgebra,
};
use hopfdeform_core::{Cochain, Deformation, Instance, Key, Sampler, SamplerConfig, Scalar, Tolerance};
use proptest::prelude::*;

fn sampler() -> Sampler {
    Sampler::new(7).with_budget(30).with_config(SamplerConfig {
        coord_bound: 2,
        ..SamplerConfig::default()
    })
}

fn group(d: usize) -> Instance {
    Instance::new(GroupAlgebraZd::new(d)).with_tolerance(Tolerance {
        prune: 0.0,
        ..Tolerance::default()
    })
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

fn close(a: Scalar, b: Scalar, rel: f64) -> bool {
    (a - b).norm() <= rel * 1f64.max(a.norm()).max(b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_deformed_product_is_a_scaled_group_law(
        a in prop::array::uniform4(-2i32..=2),
        k in prop::array::uniform2(-3i32..=3),
        l in prop::array::uniform2(-3i32..=3),
        t in -1.0f64..1.0,
    ) {
        let inst = group(2);
        let m = ComplexMatrix::from_real(&[
            &[a[0] as f64, a[1] as f64],
            &[a[2] as f64, a[3] as f64],
        ]).unwrap();
        let d = Deformation::new(&make_zd_matrix_cocycle(&inst, &m).unwrap(), &sampler(), false).unwrap();
        let kal = k[0] * (a[0] * l[0] + a[1] * l[1]) + k[1] * (a[2] * l[0] + a[3] * l[1]);
        let v = deformed_mul(&d, t, &inst.basis(Key::from(k)), &inst.basis(Key::from(l))).unwrap();
        let expected = Scalar::real((t * kal as f64).exp());
        prop_assert!(close(v.coeff(&Key::from([k[0] + l[0], k[1] + l[1]])), expected, 1e-12));
        prop_assert_eq!(v.support_len(), 1);

        // S_t(k) = e^{t k A kᵀ}(−k)
        let kak = k[0] * (a[0] * k[0] + a[1] * k[1]) + k[1] * (a[2] * k[0] + a[3] * k[1]);
        let st = deformed_antipode(&d, t).unwrap().apply_element(&inst.basis(Key::from(k))).unwrap();
        let expected = Scalar::real((t * kak as f64).exp());
        prop_assert!(close(st.coeff(&Key::from([-k[0], -k[1]])), expected, 1e-12));
    }

    #[test]
    fn oscillator_product_follows_wick_ordering(m in 0u32..4, n in 0u32..4, c in -1.0f64..1.0, t in -1.0f64..1.0) {
        let inst = Instance::new(SymmetricStarAlgebra::oscillator());
        let mat = ComplexMatrix::from_real(&[&[0.0, c], &[0.0, 0.0]]).unwrap();
        let d = Deformation::new(&make_primitive_bilinear_cocycle(&inst, &mat).unwrap(), &sampler(), false).unwrap();
        let a = inst.basis(Key::from([m as i32, 0]));
        let b = inst.basis(Key::from([0, n as i32]));
        let v = deformed_mul(&d, t, &a, &b).unwrap();
        for k in 0..=m.min(n) {
            let expected = factorial(k) * binom(m, k) * binom(n, k) * (t * c).powi(k as i32);
            let got = v.coeff(&Key::from([(m - k) as i32, (n - k) as i32]));
            prop_assert!(close(got, Scalar::real(expected), 1e-12), "k = {}: {} vs {}", k, got, expected);
        }
        prop_assert!(v.support_len() <= (m.min(n) + 1) as usize);
    }

    #[test]
    fn coboundary_squares_to_zero_on_polynomial_cochains(
        c in prop::collection::vec(-2.0f64..2.0, 4),
        u in prop::array::uniform4(-4i32..=4),
    ) {
        let inst = group(1);
        let psi = make_z_polynomial_functional(
            &inst,
            &[(1, Scalar::real(c[0])), (2, Scalar::real(c[1])), (3, Scalar::real(c[2]))],
        ).unwrap();
        let dd = coboundary(&coboundary(&psi));
        let keys: Vec<Key> = u.iter().map(|&x| Key::from([x])).collect();
        prop_assert!(dd.eval(&keys[..3]).norm() <= 1e-9 * 1e3);
        let l = make_z_polynomial_cocycle(&inst, &[(1, 1, Scalar::real(c[3])), (2, 1, Scalar::real(c[0]))]).unwrap();
        let dd = coboundary(&coboundary(&l));
        prop_assert!(dd.eval(&keys).norm() <= 1e-9 * 1e4);
    }

    #[test]
    fn generic_cochain_coboundary_squares_to_zero(seed in any::<u64>(), u in prop::array::uniform3(-3i32..=3)) {
        let inst = group(1);
        // an arbitrary, non-polynomial 1-cochain
        let f = Cochain::new(&inst, 1, move |k| {
            let x = k[0].as_slice()[0] as u64;
            Scalar::real(((seed ^ x.wrapping_mul(0x9e37_79b9)) % 97) as f64 / 7.0)
        });
        let dd = coboundary(&coboundary(&f));
        let keys: Vec<Key> = u.iter().map(|&x| Key::from([x])).collect();
        prop_assert!(dd.eval(&keys).norm() <= 1e-12);
    }

    #[test]
    fn exponential_is_a_one_parameter_group(s in -1.0f64..1.0, t in -1.0f64..1.0, e in prop::array::uniform2(0i32..3)) {
        let inst = Instance::new(SymmetricStarAlgebra::oscillator());
        let psi = Cochain::new(&inst, 1, |u| {
            let k = u[0].as_slice();
            if k[0] + k[1] == 0 { Scalar::ZERO } else { Scalar::real((k[0] - 2 * k[1]) as f64) }
        });
        let exp = std::sync::Arc::new(ConvExp::new(&psi).unwrap());
        let prod = hopfdeform_core::convolve_functionals(&exp.at(s), &exp.at(t)).unwrap();
        let u = [Key::from(e)];
        prop_assert!(close(prod.eval(&u), exp.eval(s + t, &u), 1e-12));
    }
}

#[test]
fn hermitian_sign_follows_ceiling_parity() {
    for n in 1..40usize {
        let expected = if n.div_ceil(2) % 2 == 1 { 1.0 } else { -1.0 };
        assert_eq!(hermitian_sign(n), expected, "n = {}", n);
    }
}
