//! Additive deformations of bialgebras and Hopf algebras.
//!
//! A deformation is generated by a normalized, commuting Hochschild
//! 2-cocycle `L` and given by `μ_t = μ⋆e_⋆^{tL}`. This crate evaluates such
//! deformations on concrete instances (group algebras of `ℤ^d`, polynomial
//! ∗-algebras in primitive generators, Sweedler's Hopf algebra), computes
//! deformed antipodes and conjugation semigroups, and checks the relevant
//! identities on seeded samples.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod cohomology;
pub mod convolution;
pub mod deformation;
pub mod error;
pub mod instances;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod structure;

pub use algebra::{
    residual, residual_elements, residual_scalars, BasisKind, BasisRules, Element, Instance, InstanceTag,
    Key, Tensor,
};
pub use cohomology::{check_dd_zero, coboundary, validate_generator, CochainClassifier};
pub use convolution::{
    conv_exp, convolve_functionals, convolve_maps, r_phi, Cochain, ConvExp, ConvExpPlan, LinMap, Product,
};
pub use deformation::{Deformation, TrivialDeformation};
pub use error::{Error, Result};
pub use report::{Check, LawResult, Report};
pub use sample::{Sampler, SamplerConfig};
pub use scalar::{Scalar, Tolerance};
