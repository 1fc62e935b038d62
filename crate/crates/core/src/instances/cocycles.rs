use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::algebra::{Instance, Key};
use crate::convolution::Cochain;
use crate::deformation::Deformation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        ComplexMatrix::new(rows.len(), cols, rows.concat())
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::real(v)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        ComplexMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        let mut t = self.transpose();
        for v in t.data.iter_mut() {
            *v = v.conj();
        }
        t
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .zip(&self.conj_transpose().data)
                .all(|(a, b)| a.approx_eq(*b, eps))
    }

    /// `k·A·lᵀ` for integer row vectors.
    pub fn bilinear(&self, k: &[i32], l: &[i32]) -> Scalar {
        let mut acc = Scalar::ZERO;
        for (i, &ki) in k.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            for (j, &lj) in l.iter().enumerate() {
                acc += self.get(i, j) * ((ki as f64) * (lj as f64));
            }
        }
        acc
    }
}

fn require_family(inst: &Instance, prefix: &str) -> Result<()> {
    if inst.descriptor().starts_with(prefix) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "expected a {} instance, got {}",
            prefix,
            inst.descriptor()
        )))
    }
}

/// `L((k),(l)) = k·A·lᵀ` on `ℂℤ^d`.
pub fn make_zd_matrix_cocycle(inst: &Instance, a: &ComplexMatrix) -> Result<Cochain> {
    require_family(inst, "group_algebra_zd")?;
    let d = inst.unit_key().len();
    if a.rows() != d || a.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if a.rows() != d { a.rows() } else { a.cols() },
        });
    }
    let a = a.clone();
    Ok(Cochain::new(inst, 2, move |u| {
        a.bilinear(u[0].as_slice(), u[1].as_slice())
    }))
}

fn ipow(base: i32, exp: u32) -> f64 {
    libm::pow(base as f64, exp as f64)
}

/// `L(m,n) = Σ c_pq m^p n^q` on `ℂℤ`, from `(p, q, c_pq)` triples.
pub fn make_z_polynomial_cocycle(inst: &Instance, coeffs: &[(u32, u32, Scalar)]) -> Result<Cochain> {
    require_family(inst, "group_algebra_zd")?;
    if inst.unit_key().len() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: inst.unit_key().len(),
        });
    }
    let coeffs = coeffs.to_vec();
    Ok(Cochain::new(inst, 2, move |u| {
        let (m, n) = (u[0].as_slice()[0], u[1].as_slice()[0]);
        coeffs
            .iter()
            .map(|&(p, q, c)| c * (ipow(m, p) * ipow(n, q)))
            .sum()
    }))
}

/// `ψ(k) = Σ c_p k^p` on `ℂℤ`, from `(p, c_p)` pairs.
pub fn make_z_polynomial_functional(inst: &Instance, coeffs: &[(u32, Scalar)]) -> Result<Cochain> {
    require_family(inst, "group_algebra_zd")?;
    if inst.unit_key().len() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: inst.unit_key().len(),
        });
    }
    let coeffs = coeffs.to_vec();
    Ok(Cochain::new(inst, 1, move |u| {
        let k = u[0].as_slice()[0];
        coeffs.iter().map(|&(p, c)| c * ipow(k, p)).sum()
    }))
}

/// `L(m,n) = m²n + mn²` together with `ψ(k) = −k³/3`, `L = ∂ψ`.
pub fn make_z_cubic_coboundary(inst: &Instance) -> Result<(Cochain, Cochain)> {
    let l = make_z_polynomial_cocycle(inst, &[(2, 1, Scalar::ONE), (1, 2, Scalar::ONE)])?;
    let psi = make_z_polynomial_functional(inst, &[(3, Scalar::real(-1.0 / 3.0))])?;
    Ok((l, psi))
}

fn single_generator(key: &Key) -> Option<usize> {
    let mut found = None;
    for (i, &e) in key.as_slice().iter().enumerate() {
        match e {
            0 => {}
            1 if found.is_none() => found = Some(i),
            _ => return None,
        }
    }
    found
}

/// `L(xᵢ⊗xⱼ) = M[i][j]`, zero unless both factors are single generators.
pub fn make_primitive_bilinear_cocycle(inst: &Instance, m: &ComplexMatrix) -> Result<Cochain> {
    require_family(inst, "symmetric_star")?;
    let n = inst.unit_key().len();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if m.rows() != n { m.rows() } else { m.cols() },
        });
    }
    let m = m.clone();
    Ok(Cochain::new(inst, 2, move |u| {
        match (single_generator(&u[0]), single_generator(&u[1])) {
            (Some(i), Some(j)) => m.get(i, j),
            _ => Scalar::ZERO,
        }
    }))
}

/// `ψ(a₁⋯aₙ) = L(a₁⋯aₙ₋₁ ⊗ aₙ)` on PBW monomials `a₁ ≤ ⋯ ≤ aₙ`, zero in
/// degree ≤ 1.
///
/// When `L` is symmetric on generators, `L + ∂ψ` generates the undeformed
/// product.
pub fn make_trivializing_functional(d: &Deformation) -> Result<Cochain> {
    let inst = d.instance();
    require_family(inst, "symmetric_star")?;
    let l = d.generator().clone();
    Ok(Cochain::new(inst, 1, move |u| {
        let e = u[0].as_slice();
        let deg: i32 = e.iter().sum();
        if deg < 2 {
            return Scalar::ZERO;
        }
        let last = e.iter().rposition(|&v| v > 0).unwrap();
        let mut head = u[0].clone();
        head.0[last] -= 1;
        let mut gen = Key::zeros(e.len());
        gen.0[last] = 1;
        l.eval(&[head, gen])
    }))
}
