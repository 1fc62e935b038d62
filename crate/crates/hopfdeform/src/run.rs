//! Command execution and report assembly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use hopfdeform_core::cohomology::{check_dd_zero, check_normalized, check_witness, subcomplex_stability};
use hopfdeform_core::convolution::{check_r_phi_lemma, plan_name, ConvExp};
use hopfdeform_core::deformation::{
    check_deformation_axioms, check_hopf_deformation, check_trivial_deformation, check_trivialization,
    deformed_antipode, deformed_mul, phi_map, sigma, split_cocommutative, star_deformation_check, Split,
    TOL_LAW,
};
use hopfdeform_core::structure::check_structure;
use hopfdeform_core::{
    validate_generator, Cochain, CochainClassifier, Deformation, Element, Error as CoreError, Instance,
    LawResult, Report, Sampler, Scalar, TrivialDeformation,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, Evaluation, Resolved, RunConfig, WitnessSpec};
use crate::error::{from_core, CliError};

/// Generator checks as reported.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifierSummary {
    pub arity: usize,
    pub normalized: bool,
    pub commuting: bool,
    pub hermitian: Option<bool>,
    pub cocycle: bool,
    pub coboundary_witness: bool,
    pub generator: bool,
}

/// One tabulated value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub op: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    pub input: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion_plan: Option<String>,
    pub classifier: ClassifierSummary,
    pub laws: Vec<LawResult>,
    pub evaluations: Vec<EvalResult>,
    pub summary: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn get(&self, law_id: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law_id == law_id)
    }

    /// Human-readable summary: one line per law with its statement.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command   {}", self.config.command.name());
        let _ = writeln!(out, "instance  {}", self.instance);
        if let Some(p) = &self.expansion_plan {
            let _ = writeln!(out, "exp plan  {}", p);
        }
        let c = &self.classifier;
        let _ = writeln!(
            out,
            "generator normalized={} commuting={} cocycle={} hermitian={} witness={}",
            c.normalized,
            c.commuting,
            c.cocycle,
            c.hermitian.map_or("n/a".to_string(), |h| h.to_string()),
            c.coboundary_witness
        );
        let _ = writeln!(out);
        for l in &self.laws {
            let _ = writeln!(
                out,
                "{} {:<42} {:>5} {:>10.3e}  {}",
                if l.pass { "PASS" } else { "FAIL" },
                l.law_id,
                l.samples,
                l.max_residual,
                l.statement
            );
            if let (false, Some(d)) = (l.pass, &l.detail) {
                let _ = writeln!(out, "     {}", d);
            }
        }
        if !self.evaluations.is_empty() {
            let _ = writeln!(out);
            for e in &self.evaluations {
                match e.t {
                    Some(t) => {
                        let _ = writeln!(out, "{}[t={}]({}) = {}", e.op, t, e.input, e.value);
                    }
                    None => {
                        let _ = writeln!(out, "{}({}) = {}", e.op, e.input, e.value);
                    }
                }
            }
        }
        if !self.summary.is_empty() {
            let _ = writeln!(out);
            for (k, v) in &self.summary {
                let _ = writeln!(out, "{} = {}", k, v);
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {}", n);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "overall {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

fn tagged(report: Report, tag: &str) -> Vec<LawResult> {
    report
        .laws
        .into_iter()
        .map(|mut l| {
            l.law_id = format!("{}[{}]", l.law_id, tag);
            l
        })
        .collect()
}

fn prefixed(laws: Vec<LawResult>, prefix: &str) -> Vec<LawResult> {
    laws.into_iter()
        .map(|mut l| {
            l.law_id = format!("{}{}", prefix, l.law_id);
            l
        })
        .collect()
}

fn failed(law_id: &str, statement: &str, why: String) -> LawResult {
    LawResult {
        law_id: law_id.into(),
        statement: statement.into(),
        samples: 0,
        max_residual: f64::INFINITY,
        pass: false,
        detail: Some(why),
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    r: Resolved,
    sampler: Sampler,
    l: Cochain,
    d: Option<Deformation>,
    witness: Option<Cochain>,
    laws: Vec<LawResult>,
    summary: BTreeMap<String, Value>,
    notes: Vec<String>,
}

impl Ctx<'_> {
    fn inst(&self) -> &Instance {
        &self.r.inst
    }

    fn explicit_witness(&self) -> bool {
        matches!(
            self.cfg.witness,
            Some(WitnessSpec::ZPolynomial { .. }) | Some(WitnessSpec::GrouplikeTable { .. })
        )
    }

    fn validate(&mut self) -> Result<(), CliError> {
        let inst = self.inst().clone();
        self.laws.extend(check_structure(&inst, &self.sampler).laws);
        let tol = inst.tolerance().eq;
        let mut dd = check_dd_zero(&self.l, &self.sampler, TOL_LAW);
        dd.law_id = "cohomology.dd_zero[L]".into();
        self.laws.push(dd);
        self.laws
            .extend(tagged(subcomplex_stability(&self.l, &self.sampler), "L"));
        if let Some(psi) = self.witness.clone() {
            if self.explicit_witness() {
                let mut n = check_normalized(&psi);
                n.law_id = "witness.normalized".into();
                self.laws.push(n);
                let mut w = check_witness(&self.l, &psi, &self.sampler, tol);
                w.law_id = "witness.coboundary".into();
                self.laws.push(w);
            }
        }
        if let Some((name, f)) = self.arity_one_cochain()? {
            let mut dd = check_dd_zero(&f, &self.sampler, TOL_LAW);
            dd.law_id = format!("cohomology.dd_zero[{}]", name);
            self.laws.push(dd);
            self.laws
                .extend(tagged(subcomplex_stability(&f, &self.sampler), &name));
        }
        Ok(())
    }

    /// The 1-cochain exercised by the cohomology checks: the witness, or
    /// `σ/2` when there is none.
    fn arity_one_cochain(&self) -> Result<Option<(String, Cochain)>, CliError> {
        if let Some(psi) = &self.witness {
            return Ok(Some(("psi".into(), psi.clone())));
        }
        match &self.d {
            Some(d) if self.inst().has_antipode() => match sigma(d) {
                Ok(s) => Ok(Some(("sigma/2".into(), s.sigma.scale(Scalar::real(0.5))))),
                Err(e) => Err(from_core(e)),
            },
            _ => Ok(None),
        }
    }

    fn deform(&mut self, d: &Deformation) -> Result<(), CliError> {
        self.laws
            .extend(check_deformation_axioms(d, &self.sampler, &self.cfg.t_grid).laws);
        if self.cfg.star {
            let r = star_deformation_check(d, &self.sampler, &self.cfg.t_grid).map_err(from_core)?;
            self.laws.extend(r.laws);
        }
        Ok(())
    }

    fn antipode(&mut self, d: &Deformation) -> Result<(), CliError> {
        if !self.inst().has_antipode() {
            return Err(CliError::Capability(format!(
                "{} has no antipode",
                self.inst().descriptor()
            )));
        }
        let r = check_hopf_deformation(d, &self.sampler, &self.cfg.t_grid).map_err(from_core)?;
        self.laws.extend(r.laws);
        Ok(())
    }

    fn split(&mut self, d: &Deformation) -> Result<(), CliError> {
        let inst = self.inst().clone();
        if !inst.is_cocommutative() {
            return Err(CliError::Capability(format!(
                "{} is not cocommutative",
                inst.descriptor()
            )));
        }
        let Split { l1, l2, report } =
            split_cocommutative(d, &self.sampler, &self.cfg.t_grid).map_err(from_core)?;
        let constant = report.get("split.constant_antipodes").is_some_and(|l| l.pass);
        self.laws.extend(report.laws);

        let l = d.generator();
        let (mut l1_max, mut l2_max, mut l2_minus_l, mut l2_re) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut s = self.sampler.stream("summary.split");
        for _ in 0..self.sampler.budget {
            let u = s.tuple(&inst, 2);
            let (a, b, c) = (l1.eval(&u), l2.eval(&u), l.eval(&u));
            l1_max = l1_max.max(a.norm());
            l2_max = l2_max.max(b.norm());
            l2_minus_l = l2_minus_l.max((b - c).norm());
            l2_re = l2_re.max(b.re.abs());
        }
        let eps = inst.tolerance().eq;
        self.summary.insert("split.l1_zero".into(), json!(l1_max <= eps));
        self.summary.insert("split.l2_zero".into(), json!(l2_max <= eps));
        self.summary
            .insert("split.l2_equals_l".into(), json!(l2_minus_l <= eps));
        self.summary.insert("split.max_abs_re_l2".into(), json!(l2_re));
        self.summary
            .insert("split.constant_antipodes".into(), json!(constant));

        let trivial = match (&self.witness, self.explicit_witness()) {
            (Some(psi), true) => check_witness(l, psi, &self.sampler, eps).pass,
            _ => false,
        };
        let class = match (trivial, constant) {
            (true, true) => "trivial with constant antipodes",
            (true, false) => "trivial",
            (false, true) => "constant antipodes",
            (false, false) => "L1 + L2 with non-constant antipodes for L2",
        };
        self.summary.insert("split.classification".into(), json!(class));
        Ok(())
    }

    fn trivial(&mut self, d: &Deformation) -> Result<(), CliError> {
        let psi = match &self.witness {
            Some(p) => p.clone(),
            None => return Err(CliError::Config("trivial-check needs a witness".into())),
        };
        let r = check_r_phi_lemma(
            &Arc::new(ConvExp::new(&psi).map_err(from_core)?).at(0.5),
            &psi,
            &self.sampler,
            1e-9,
        )
        .map_err(from_core)?;
        self.laws.extend(r.laws);
        if !self.explicit_witness() {
            let r = check_trivialization(d, &psi, &self.sampler, &self.cfg.t_grid).map_err(from_core)?;
            self.laws.extend(r.laws);
            return Ok(());
        }
        match TrivialDeformation::new(d, &psi, &self.sampler) {
            Ok(tr) => {
                self.laws
                    .extend(check_trivial_deformation(&tr, &self.sampler, &self.cfg.t_grid).laws);
            }
            Err(CoreError::NotValidated(why)) => {
                self.laws.push(failed(
                    "trivial.witness",
                    "psi is normalized, commuting and d psi = L",
                    why,
                ));
            }
            Err(e) => return Err(from_core(e)),
        }
        Ok(())
    }

    fn evaluate(&self, d: &Deformation) -> Vec<EvalResult> {
        let mut out = Vec::new();
        for e in &self.cfg.evaluations {
            let (op, t, input, value) = match self.evaluate_one(d, e) {
                Ok(v) => v,
                Err((op, t, why)) => (op, t, String::new(), format!("error: {}", why)),
            };
            out.push(EvalResult { op, t, input, value });
        }
        out
    }

    #[allow(clippy::type_complexity)]
    fn evaluate_one(
        &self,
        d: &Deformation,
        e: &Evaluation,
    ) -> Result<(String, Option<f64>, String, String), (String, Option<f64>, String)> {
        let inst = self.inst();
        let (op, t) = match e {
            Evaluation::Mul { t, .. } => ("mul", Some(*t)),
            Evaluation::Commutator { t, .. } => ("commutator", Some(*t)),
            Evaluation::Generator { .. } => ("generator", None),
            Evaluation::Sigma { .. } => ("sigma", None),
            Evaluation::Antipode { t, .. } => ("antipode", Some(*t)),
            Evaluation::Phi { t, .. } => ("phi", Some(*t)),
            Evaluation::Split { .. } => ("split", None),
        };
        let err = |x: String| (op.to_string(), t, x);
        let core = |x: CoreError| (op.to_string(), t, x.to_string());
        let elem = |spec| self.r.element(spec).map_err(|x| err(x.to_string()));
        let pair = |a: &Element, b: &Element| format!("{} ⊗ {}", inst.render(a), inst.render(b));
        let (input, value) = match e {
            Evaluation::Mul { t, a, b } => {
                let (a, b) = (elem(a)?, elem(b)?);
                (
                    pair(&a, &b),
                    inst.render(&deformed_mul(d, *t, &a, &b).map_err(core)?),
                )
            }
            Evaluation::Commutator { t, a, b } => {
                let (a, b) = (elem(a)?, elem(b)?);
                let ab = deformed_mul(d, *t, &a, &b).map_err(core)?;
                let ba = deformed_mul(d, *t, &b, &a).map_err(core)?;
                (pair(&a, &b), inst.render(&inst.sub(&ab, &ba).map_err(core)?))
            }
            Evaluation::Generator { a, b } => {
                let (a, b) = (elem(a)?, elem(b)?);
                let ab = inst.tensor_product(&[&a, &b]).map_err(core)?;
                (
                    pair(&a, &b),
                    d.generator().eval_tensor(&ab).map_err(core)?.render(),
                )
            }
            Evaluation::Sigma { a } => {
                let a = elem(a)?;
                let s = sigma(d).map_err(core)?;
                (inst.render(&a), s.sigma.eval_element(&a).map_err(core)?.render())
            }
            Evaluation::Antipode { t, a } => {
                let a = elem(a)?;
                let st = deformed_antipode(d, *t).map_err(core)?;
                (inst.render(&a), inst.render(&st.apply_element(&a).map_err(core)?))
            }
            Evaluation::Phi { t, a } => {
                let a = elem(a)?;
                let psi = self
                    .witness
                    .as_ref()
                    .ok_or_else(|| err("no witness configured".into()))?;
                let tr = TrivialDeformation::new(d, psi, &self.sampler).map_err(core)?;
                (
                    inst.render(&a),
                    inst.render(&phi_map(&tr, *t).apply_element(&a).map_err(core)?),
                )
            }
            Evaluation::Split { a, b } => {
                let (a, b) = (elem(a)?, elem(b)?);
                if !inst.is_cocommutative() {
                    return Err(err("instance is not cocommutative".into()));
                }
                let sp = split_cocommutative(d, &self.sampler, &self.cfg.t_grid).map_err(core)?;
                let ab = inst.tensor_product(&[&a, &b]).map_err(core)?;
                let v1 = sp.l1.eval_tensor(&ab).map_err(core)?;
                let v2 = sp.l2.eval_tensor(&ab).map_err(core)?;
                (
                    pair(&a, &b),
                    format!("L1 = {}, L2 = {}", v1.render(), v2.render()),
                )
            }
        };
        Ok((op.to_string(), t, input, value))
    }
}

fn summarize(c: &CochainClassifier, witness: bool, require_star: bool) -> ClassifierSummary {
    ClassifierSummary {
        arity: c.arity,
        normalized: c.normalized,
        commuting: c.commuting,
        hermitian: c.hermitian,
        cocycle: c.cocycle,
        coboundary_witness: witness,
        generator: c.is_generator(require_star),
    }
}

/// Generator laws, keeping the hermitian law only when it is required.
fn generator_laws(c: &CochainClassifier, require_star: bool) -> Vec<LawResult> {
    let laws = c
        .laws
        .iter()
        .filter(|l| require_star || l.law_id != "hermitian")
        .cloned()
        .collect();
    prefixed(laws, "generator.")
}

/// Executes `cfg.command`. Law failures are recorded in the report; errors
/// are returned only for configuration and capability problems.
pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    cfg.check()?;
    let r = cfg.instance.build(cfg.tolerance.resolve(&cfg.instance))?;
    let sampler = Sampler::new(cfg.seed)
        .with_budget(cfg.sample_budget)
        .with_config(cfg.sampler.resolve());
    let l = cfg.cocycle.build(&r)?;
    if cfg.star && !r.inst.has_star() {
        return Err(CliError::Capability(format!(
            "{} has no involution",
            r.inst.descriptor()
        )));
    }

    let (d, class) = match Deformation::new(&l, &sampler, cfg.star) {
        Ok(d) => {
            let c = d.classifier().clone();
            (Some(d), c)
        }
        Err(CoreError::NotValidated(_)) => (None, validate_generator(&l, &sampler, cfg.star)),
        Err(e) => return Err(from_core(e)),
    };

    let witness = match &cfg.witness {
        None => None,
        Some(WitnessSpec::Trivializing) => match &d {
            Some(d) => Some(cfg.witness.as_ref().unwrap().build(&r, Some(d))?),
            None => None,
        },
        Some(w) => Some(w.build(&r, d.as_ref())?),
    };

    let mut ctx = Ctx {
        cfg,
        r,
        sampler,
        l,
        d: d.clone(),
        witness,
        laws: generator_laws(&class, cfg.star),
        summary: BTreeMap::new(),
        notes: Vec::new(),
    };

    let has_witness = ctx.explicit_witness()
        && ctx
            .witness
            .as_ref()
            .is_some_and(|psi| check_witness(&ctx.l, psi, &ctx.sampler, ctx.inst().tolerance().eq).pass);
    let classifier = summarize(&class, has_witness, cfg.star);

    let mut evaluations = Vec::new();
    match &d {
        None => {
            let why = class.failure_summary(cfg.star).unwrap_or_default();
            ctx.laws.push(failed(
                "generator.validated",
                "L generates an additive deformation",
                why,
            ));
            if cfg.command == Command::Validate || cfg.command == Command::FullReport {
                ctx.validate()?;
            }
        }
        Some(d) => {
            match cfg.command {
                Command::Validate => ctx.validate()?,
                Command::Deform => ctx.deform(d)?,
                Command::Antipode => ctx.antipode(d)?,
                Command::Split => ctx.split(d)?,
                Command::TrivialCheck => ctx.trivial(d)?,
                Command::FullReport => {
                    ctx.validate()?;
                    ctx.deform(d)?;
                    if ctx.inst().has_antipode() {
                        ctx.antipode(d)?;
                    } else {
                        ctx.notes.push("antipode suite skipped: no antipode".into());
                    }
                    if ctx.inst().is_cocommutative() {
                        ctx.split(d)?;
                    } else {
                        ctx.notes
                            .push("split skipped: instance is not cocommutative".into());
                    }
                    if ctx.witness.is_some() {
                        ctx.trivial(d)?;
                    }
                }
            }
            evaluations = ctx.evaluate(d);
        }
    }

    let pass = ctx.laws.iter().all(|l| l.pass);
    Ok(RunReport {
        config: cfg.clone(),
        instance: ctx.inst().descriptor(),
        expansion_plan: d.as_ref().map(|d| plan_name(d.exponential().plan())),
        classifier,
        laws: ctx.laws,
        evaluations,
        summary: ctx.summary,
        notes: ctx.notes,
        pass,
    })
}
