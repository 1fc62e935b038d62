//! JSON run configurations and their resolution against the core library.

use std::sync::Arc;

use hopfdeform_core::deformation::Deformation;
use hopfdeform_core::instances::{
    make_primitive_bilinear_cocycle, make_trivializing_functional, make_z_polynomial_cocycle,
    make_z_polynomial_functional, make_zd_matrix_cocycle, ComplexMatrix, GroupAlgebraZd, SweedlerH4,
    SymmetricStarAlgebra,
};
use hopfdeform_core::{Cochain, Element, Instance, Key, SamplerConfig, Scalar, Tolerance};
use serde::{Deserialize, Serialize};

use crate::error::{from_core, CliError};
use crate::expr::{key_vars, pair_vars, parse_with};

/// A complex number as `[re, im]`.
pub type Complex = [f64; 2];

fn one() -> Complex {
    [1.0, 0.0]
}

fn scalar(c: &Complex) -> Scalar {
    Scalar::new(c[0], c[1])
}

fn matrix(rows: &[Vec<Complex>]) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(scalar).collect()).collect();
    ComplexMatrix::from_rows(&rows).map_err(from_core)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    GroupAlgebraZd {
        d: usize,
    },
    SymmetricStar {
        generators: Vec<String>,
        /// Pairs swapped by `*`; unlisted generators are self-adjoint. Absent
        /// means no involution.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        involution: Option<Vec<(String, String)>>,
    },
    SweedlerH4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairTerm {
    pub p: u32,
    pub q: u32,
    #[serde(default = "one")]
    pub c: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerTerm {
    pub p: u32,
    #[serde(default = "one")]
    pub c: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub k: Vec<i32>,
    pub l: Vec<i32>,
    pub value: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyEntry {
    pub k: Vec<i32>,
    pub value: Complex,
}

/// The 2-cochain `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleSpec {
    /// `L((k),(l)) = k·A·lᵀ` on `ℂℤ^d`.
    ZdMatrix {
        a: Vec<Vec<Complex>>,
    },
    /// `L((m),(n)) = Σ c·mᵖnᑫ` on `ℂℤ`.
    ZPolynomial {
        terms: Vec<PairTerm>,
    },
    /// `L(xᵢ⊗xⱼ) = M[i][j]` on a symmetric algebra.
    PrimitiveBilinear {
        m: Vec<Vec<Complex>>,
    },
    /// Explicit values on basis pairs, falling back to `expression` (zero
    /// when absent).
    GrouplikeTable {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expression: Option<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        table: Vec<PairEntry>,
    },
    Zero,
}

/// The 1-cochain `ψ` with `∂ψ = L`, or the PBW trivializing functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessSpec {
    ZPolynomial {
        terms: Vec<PowerTerm>,
    },
    GrouplikeTable {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expression: Option<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        table: Vec<KeyEntry>,
    },
    Trivializing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prune: Option<f64>,
}

impl ToleranceSpec {
    fn is_empty(&self) -> bool {
        self.eq.is_none() && self.prune.is_none()
    }

    /// Group-algebra products never cancel, while `e^{tL}` factors span
    /// many orders of magnitude, so pruning defaults to exact zeros there.
    pub fn resolve(&self, instance: &InstanceSpec) -> Tolerance {
        let d = Tolerance::default();
        let prune = match instance {
            InstanceSpec::GroupAlgebraZd { .. } => 0.0,
            _ => d.prune,
        };
        Tolerance {
            eq: self.eq.unwrap_or(d.eq),
            prune: self.prune.unwrap_or(prune),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coord_bound: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_bound: Option<f64>,
}

impl SamplerSpec {
    fn is_empty(&self) -> bool {
        *self == SamplerSpec::default()
    }

    pub fn resolve(&self) -> SamplerConfig {
        let d = SamplerConfig::default();
        SamplerConfig {
            support: self.support.unwrap_or(d.support),
            coord_bound: self.coord_bound.unwrap_or(d.coord_bound),
            max_degree: self.max_degree.unwrap_or(d.max_degree),
            coeff_bound: self.coeff_bound.unwrap_or(d.coeff_bound),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Deform,
    Antipode,
    Split,
    TrivialCheck,
    #[default]
    FullReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Deform => "deform",
            Command::Antipode => "antipode",
            Command::Split => "split",
            Command::TrivialCheck => "trivial-check",
            Command::FullReport => "full-report",
        }
    }
}

/// A basis key: raw coordinates, or a name such as `"x"`, `"x^2*xstar"`,
/// `"gx"` or `"1"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KeySpec {
    Coords(Vec<i32>),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub key: KeySpec,
    #[serde(default = "one")]
    pub c: Complex,
}

/// An element as a list of terms.
pub type ElementSpec = Vec<TermSpec>;

/// A value to tabulate in the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Evaluation {
    /// `μ_t(a⊗b)`.
    Mul { t: f64, a: ElementSpec, b: ElementSpec },
    /// `μ_t(a⊗b) − μ_t(b⊗a)`.
    Commutator { t: f64, a: ElementSpec, b: ElementSpec },
    /// `L(a⊗b)`.
    Generator { a: ElementSpec, b: ElementSpec },
    /// `σ(a)`.
    Sigma { a: ElementSpec },
    /// `S_t(a)`.
    Antipode { t: f64, a: ElementSpec },
    /// `Φ_t(a)`, needs a witness.
    Phi { t: f64, a: ElementSpec },
    /// `L1(a⊗b)` and `L2(a⊗b)`.
    Split { a: ElementSpec, b: ElementSpec },
}

fn default_grid() -> Vec<f64> {
    hopfdeform_core::deformation::DEFAULT_T_GRID.to_vec()
}

fn default_budget() -> usize {
    hopfdeform_core::Sampler::DEFAULT_BUDGET
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: InstanceSpec,
    pub cocycle: CocycleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSpec>,
    #[serde(default = "default_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub sample_budget: usize,
    #[serde(default, skip_serializing_if = "ToleranceSpec::is_empty")]
    pub tolerance: ToleranceSpec,
    #[serde(default, skip_serializing_if = "SamplerSpec::is_empty")]
    pub sampler: SamplerSpec,
    /// Require a hermitian generator and run the `*`-checks.
    #[serde(default, skip_serializing_if = "is_false")]
    pub star: bool,
    #[serde(default)]
    pub command: Command,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evaluations: Vec<Evaluation>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.t_grid.is_empty() {
            return Err(CliError::Config("t_grid must be non-empty".into()));
        }
        if self.t_grid.iter().any(|t| !t.is_finite()) {
            return Err(CliError::Config("t_grid entries must be finite".into()));
        }
        if self.sample_budget == 0 {
            return Err(CliError::Config("sample_budget must be at least 1".into()));
        }
        Ok(())
    }
}

/// A resolved instance together with what is needed to parse key names.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub inst: Instance,
    spec: InstanceSpec,
}

impl InstanceSpec {
    pub fn build(&self, tol: Tolerance) -> Result<Resolved, CliError> {
        let inst = match self {
            InstanceSpec::GroupAlgebraZd { d } => {
                if *d == 0 {
                    return Err(CliError::Config("d must be at least 1".into()));
                }
                Instance::new(GroupAlgebraZd::new(*d))
            }
            InstanceSpec::SymmetricStar {
                generators,
                involution,
            } => {
                let perm = match involution {
                    None => None,
                    Some(pairs) => {
                        let mut p: Vec<usize> = (0..generators.len()).collect();
                        let idx = |name: &str| {
                            generators
                                .iter()
                                .position(|g| g == name)
                                .ok_or_else(|| CliError::Config(format!("unknown generator '{}'", name)))
                        };
                        for (a, b) in pairs {
                            let (i, j) = (idx(a)?, idx(b)?);
                            p[i] = j;
                            p[j] = i;
                        }
                        Some(p)
                    }
                };
                Instance::new(SymmetricStarAlgebra::new(generators.clone(), perm).map_err(CliError::Config)?)
            }
            InstanceSpec::SweedlerH4 => Instance::new(SweedlerH4),
        };
        Ok(Resolved {
            inst: inst.with_tolerance(tol),
            spec: self.clone(),
        })
    }
}

impl Resolved {
    fn key_len(&self) -> usize {
        self.inst.unit_key().len()
    }

    pub fn key(&self, k: &KeySpec) -> Result<Key, CliError> {
        let key = match k {
            KeySpec::Coords(c) => Key::new(c),
            KeySpec::Name(name) => self.named_key(name.trim())?,
        };
        if key.len() != self.key_len() {
            return Err(CliError::Config(format!(
                "key {:?} has {} components, expected {}",
                k,
                key.len(),
                self.key_len()
            )));
        }
        if !self.inst.rules().is_valid(&key) {
            return Err(CliError::Config(format!("{:?} is not a basis key", k)));
        }
        Ok(key)
    }

    fn named_key(&self, name: &str) -> Result<Key, CliError> {
        let unit = self.inst.unit_key();
        if name == "1" {
            return Ok(unit);
        }
        match &self.spec {
            InstanceSpec::SweedlerH4 => match name {
                "g" => Ok(SweedlerH4::g()),
                "x" => Ok(SweedlerH4::x()),
                "gx" => Ok(SweedlerH4::gx()),
                _ => Err(CliError::Config(format!(
                    "unknown sweedler basis element '{}'",
                    name
                ))),
            },
            InstanceSpec::SymmetricStar { generators, .. } => {
                let mut key = unit;
                for factor in name.split('*') {
                    let (g, e) = match factor.split_once('^') {
                        Some((g, e)) => (
                            g.trim(),
                            e.trim()
                                .parse::<i32>()
                                .map_err(|_| CliError::Config(format!("bad exponent in '{}'", name)))?,
                        ),
                        None => (factor.trim(), 1),
                    };
                    let i = generators
                        .iter()
                        .position(|x| x == g)
                        .ok_or_else(|| CliError::Config(format!("unknown generator '{}'", g)))?;
                    if e < 0 {
                        return Err(CliError::Config(format!("negative exponent in '{}'", name)));
                    }
                    key.0[i] += e;
                }
                Ok(key)
            }
            InstanceSpec::GroupAlgebraZd { .. } => Err(CliError::Config(format!(
                "group algebra keys are coordinate lists, got '{}'",
                name
            ))),
        }
    }

    pub fn element(&self, spec: &ElementSpec) -> Result<Element, CliError> {
        let mut terms = Vec::with_capacity(spec.len());
        for t in spec {
            terms.push((self.key(&t.key)?, scalar(&t.c)));
        }
        self.inst.element(terms).map_err(from_core)
    }

    fn require(&self, family: &str, what: &str) -> Result<(), CliError> {
        if self.inst.descriptor().starts_with(family) {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "{} needs a {} instance, got {}",
                what,
                family,
                self.inst.descriptor()
            )))
        }
    }
}

impl CocycleSpec {
    pub fn build(&self, r: &Resolved) -> Result<Cochain, CliError> {
        let inst = &r.inst;
        match self {
            CocycleSpec::ZdMatrix { a } => {
                r.require("group_algebra_zd", "zd_matrix")?;
                make_zd_matrix_cocycle(inst, &matrix(a)?).map_err(from_core)
            }
            CocycleSpec::ZPolynomial { terms } => {
                r.require("group_algebra_zd", "z_polynomial")?;
                let t: Vec<(u32, u32, Scalar)> = terms.iter().map(|t| (t.p, t.q, scalar(&t.c))).collect();
                make_z_polynomial_cocycle(inst, &t).map_err(from_core)
            }
            CocycleSpec::PrimitiveBilinear { m } => {
                r.require("symmetric_star", "primitive_bilinear")?;
                make_primitive_bilinear_cocycle(inst, &matrix(m)?).map_err(from_core)
            }
            CocycleSpec::GrouplikeTable { expression, table } => {
                let d = r.key_len();
                let expr = match expression {
                    Some(src) => Some(parse_with(src, &pair_vars(d)).map_err(CliError::Config)?),
                    None => None,
                };
                let mut entries = Vec::with_capacity(table.len());
                for e in table {
                    if e.k.len() != d || e.l.len() != d {
                        return Err(CliError::Config(format!(
                            "table entry keys must have {} components",
                            d
                        )));
                    }
                    entries.push((Key::new(&e.k), Key::new(&e.l), scalar(&e.value)));
                }
                let entries = Arc::new(entries);
                Ok(Cochain::new(inst, 2, move |u| {
                    if let Some((_, _, v)) = entries.iter().find(|(k, l, _)| *k == u[0] && *l == u[1]) {
                        return *v;
                    }
                    match &expr {
                        Some(e) => {
                            let mut slots = u[0].as_slice().to_vec();
                            slots.extend_from_slice(u[1].as_slice());
                            e.eval(&slots)
                        }
                        None => Scalar::ZERO,
                    }
                }))
            }
            CocycleSpec::Zero => Ok(Cochain::zero(inst, 2)),
        }
    }
}

impl WitnessSpec {
    /// `d` is needed for the trivializing functional, which is built from
    /// the validated generator.
    pub fn build(&self, r: &Resolved, d: Option<&Deformation>) -> Result<Cochain, CliError> {
        let inst = &r.inst;
        match self {
            WitnessSpec::ZPolynomial { terms } => {
                r.require("group_algebra_zd", "z_polynomial witness")?;
                let t: Vec<(u32, Scalar)> = terms.iter().map(|t| (t.p, scalar(&t.c))).collect();
                make_z_polynomial_functional(inst, &t).map_err(from_core)
            }
            WitnessSpec::GrouplikeTable { expression, table } => {
                let d = r.key_len();
                let expr = match expression {
                    Some(src) => Some(parse_with(src, &key_vars(d)).map_err(CliError::Config)?),
                    None => None,
                };
                let mut entries = Vec::with_capacity(table.len());
                for e in table {
                    if e.k.len() != d {
                        return Err(CliError::Config(format!(
                            "table entry keys must have {} components",
                            d
                        )));
                    }
                    entries.push((Key::new(&e.k), scalar(&e.value)));
                }
                let entries = Arc::new(entries);
                Ok(Cochain::new(inst, 1, move |u| {
                    if let Some((_, v)) = entries.iter().find(|(k, _)| *k == u[0]) {
                        return *v;
                    }
                    match &expr {
                        Some(e) => e.eval(u[0].as_slice()),
                        None => Scalar::ZERO,
                    }
                }))
            }
            WitnessSpec::Trivializing => {
                let d = d.ok_or_else(|| {
                    CliError::Config("the trivializing witness needs a validated generator".into())
                })?;
                make_trivializing_functional(d).map_err(from_core)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_descriptors_parse() {
        let s: InstanceSpec = serde_json::from_str(r#"{"type":"group_algebra_zd","d":2}"#).unwrap();
        assert_eq!(s, InstanceSpec::GroupAlgebraZd { d: 2 });
        let s: InstanceSpec = serde_json::from_str(
            r#"{"type":"symmetric_star","generators":["x","xstar"],"involution":[["x","xstar"]]}"#,
        )
        .unwrap();
        let r = s.build(Tolerance::default()).unwrap();
        assert!(r.inst.has_star());
        assert_eq!(
            r.key(&KeySpec::Name("x^2*xstar".into())).unwrap(),
            Key::from([2, 1])
        );
        let s: InstanceSpec = serde_json::from_str(r#"{"type":"sweedler_h4"}"#).unwrap();
        let r = s.build(Tolerance::default()).unwrap();
        assert_eq!(r.key(&KeySpec::Name("gx".into())).unwrap(), SweedlerH4::gx());
        assert!(r.key(&KeySpec::Coords(vec![2, 0])).is_err());
    }

    #[test]
    fn matrices_are_re_im_pairs() {
        let c: CocycleSpec =
            serde_json::from_str(r#"{"type":"zd_matrix","a":[[[1,0],[0,2]],[[0,0],[-1,0]]]}"#).unwrap();
        let r = InstanceSpec::GroupAlgebraZd { d: 2 }
            .build(Tolerance::default())
            .unwrap();
        let l = c.build(&r).unwrap();
        assert_eq!(
            l.eval(&[Key::from([1, 0]), Key::from([0, 1])]),
            Scalar::new(0.0, 2.0)
        );
    }

    #[test]
    fn table_overrides_expression() {
        let r = InstanceSpec::GroupAlgebraZd { d: 1 }
            .build(Tolerance::default())
            .unwrap();
        let c = CocycleSpec::GrouplikeTable {
            expression: Some("m^2*n + m*n^2".into()),
            table: vec![PairEntry {
                k: vec![1],
                l: vec![1],
                value: [7.0, 0.0],
            }],
        };
        let l = c.build(&r).unwrap();
        assert_eq!(l.eval(&[Key::from([1]), Key::from([1])]), Scalar::real(7.0));
        assert_eq!(l.eval(&[Key::from([1]), Key::from([2])]), Scalar::real(6.0));
    }

    #[test]
    fn family_mismatch_is_a_config_error() {
        let r = InstanceSpec::SweedlerH4.build(Tolerance::default()).unwrap();
        let c = CocycleSpec::ZdMatrix {
            a: vec![vec![[1.0, 0.0]]],
        };
        assert!(matches!(c.build(&r), Err(CliError::Config(_))));
    }

    #[test]
    fn invariants_are_enforced() {
        let bad = r#"{"instance":{"type":"sweedler_h4"},"cocycle":{"type":"zero"},"t_grid":[]}"#;
        assert!(RunConfig::from_json(bad).is_err());
        let bad = r#"{"instance":{"type":"sweedler_h4"},"cocycle":{"type":"zero"},"sample_budget":0}"#;
        assert!(RunConfig::from_json(bad).is_err());
        let ok = r#"{"instance":{"type":"sweedler_h4"},"cocycle":{"type":"zero"}}"#;
        let cfg = RunConfig::from_json(ok).unwrap();
        assert_eq!(cfg.command, Command::FullReport);
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
