//! One line per acceptance criterion; exits non-zero if any fails.

use hopfdeform::{registry, run, Command, RunConfig, RunReport};
use hopfdeform_core::convolution::check_r_phi_lemma;
use hopfdeform_core::deformation::{check_trivialization, deformed_mul, sigma, split_cocommutative};
use hopfdeform_core::instances::{
    make_primitive_bilinear_cocycle, make_trivializing_functional, make_z_cubic_coboundary,
    make_zd_matrix_cocycle, ComplexMatrix, GroupAlgebraZd, SymmetricStarAlgebra,
};
use hopfdeform_core::{ConvExp, Deformation, Instance, Key, Sampler, Scalar, Tolerance};
use std::sync::Arc;

const TOL_LAW: f64 = 1e-8;
const TOL_LEMMA: f64 = 1e-9;
const TOL_EXACT: f64 = 1e-12;

const PAPER_EXAMPLES: [&str; 4] = ["oscillator", "z-cubic", "zd-matrix", "group-hermitian"];

type Criterion = fn() -> Result<Outcome, String>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn bad(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

fn config(name: &str, command: Command) -> RunConfig {
    let mut cfg = registry::find(name).expect("registry entry").config();
    cfg.command = command;
    cfg
}

fn report(name: &str, command: Command) -> Result<RunReport, String> {
    run(&config(name, command)).map_err(|e| format!("{}: {}", name, e))
}

/// All laws whose id starts with one of `prefixes` pass, and at least one
/// such law exists.
fn laws_pass(r: &RunReport, name: &str, prefixes: &[&str]) -> Result<(usize, f64), String> {
    let mut n = 0;
    let mut worst = 0.0f64;
    for l in &r.laws {
        if prefixes.iter().any(|p| l.law_id.starts_with(p)) {
            n += 1;
            if !l.pass {
                return Err(format!(
                    "{}: {} failed (residual {:e}) {}",
                    name,
                    l.law_id,
                    l.max_residual,
                    l.detail.clone().unwrap_or_default()
                ));
            }
            if l.max_residual.is_finite() {
                worst = worst.max(l.max_residual);
            }
        }
    }
    if n == 0 {
        return Err(format!("{}: no law matching {:?}", name, prefixes));
    }
    Ok((n, worst))
}

fn group(d: usize) -> Instance {
    Instance::new(GroupAlgebraZd::new(d)).with_tolerance(Tolerance {
        prune: 0.0,
        ..Tolerance::default()
    })
}

fn sampler(budget: usize) -> Sampler {
    Sampler::new(11).with_budget(budget)
}

fn criterion_1() -> Result<Outcome, String> {
    let mut checked = 0;
    for e in registry::EXAMPLES {
        let r = report(e.name, Command::Deform)?;
        if !r.classifier.generator {
            return Err(format!("{}: generator not validated", e.name));
        }
        let d = r
            .get("deformation.derivative")
            .ok_or(format!("{}: no derivative law", e.name))?;
        if !d.pass || d.samples < 100 {
            return Err(format!(
                "{}: derivative residual {:e} over {} samples",
                e.name, d.max_residual, d.samples
            ));
        }
        checked += 1;
    }
    Ok(ok(format!(
        "{} built-in cocycles validated, finite differences within 10 h",
        checked
    )))
}

fn criterion_2() -> Result<Outcome, String> {
    let mut worst = 0.0f64;
    for name in PAPER_EXAMPLES {
        let cfg = config(name, Command::Deform);
        if cfg.sample_budget < 200 || cfg.t_grid.len() < 5 {
            return Err(format!("{}: budget or grid below the default", name));
        }
        let r = run(&cfg).map_err(|e| e.to_string())?;
        let (_, w) = laws_pass(
            &r,
            name,
            &[
                "deformation.associativity",
                "deformation.unit",
                "deformation.coalgebra",
            ],
        )?;
        for id in [
            "deformation.associativity",
            "deformation.unit",
            "deformation.coalgebra",
        ] {
            let l = r.get(id).unwrap();
            if l.max_residual > TOL_LAW {
                return Err(format!("{}: {} residual {:e}", name, id, l.max_residual));
            }
        }
        worst = worst.max(w);
    }
    Ok(ok(format!("max residual {:.2e} over 4 configs", worst)))
}

fn criterion_3() -> Result<Outcome, String> {
    let r = report("z-cubic", Command::TrivialCheck)?;
    let (n, w) = laws_pass(
        &r,
        "z-cubic",
        &[
            "trivial.conjugation",
            "trivial.intertwining",
            "trivial.phi_group_law",
        ],
    )?;
    if w > TOL_LAW {
        return Err(format!("residual {:e}", w));
    }
    Ok(ok(format!("{} laws, max residual {:.2e}", n, w)))
}

fn criterion_4() -> Result<Outcome, String> {
    let s = sampler(100);
    let inst = group(1);
    let (_, psi) = make_z_cubic_coboundary(&inst).map_err(|e| e.to_string())?;
    let phi = Arc::new(ConvExp::new(&psi).map_err(|e| e.to_string())?).at(0.25);
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut reports = vec![check_r_phi_lemma(&phi, &psi, &s, TOL_LEMMA).map_err(|e| e.to_string())?];
    let osc = Instance::new(SymmetricStarAlgebra::oscillator());
    let m = ComplexMatrix::from_real(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
    let d = Deformation::new(&make_primitive_bilinear_cocycle(&osc, &m).unwrap(), &s, false)
        .map_err(|e| e.to_string())?;
    let psi = make_trivializing_functional(&d).map_err(|e| e.to_string())?;
    let phi = Arc::new(ConvExp::new(&psi).map_err(|e| e.to_string())?).at(0.5);
    reports.push(check_r_phi_lemma(&phi, &psi, &s, TOL_LEMMA).map_err(|e| e.to_string())?);
    for r in &reports {
        for l in &r.laws {
            if !l.pass || l.samples < 100 {
                return Err(format!("{} failed: {:e}", l.law_id, l.max_residual));
            }
            worst = worst.max(l.max_residual);
            count += 1;
        }
    }
    if count != 10 {
        return Err(format!("expected five identities per case, got {}", count));
    }
    Ok(ok(format!("5 identities x 2 cases, max residual {:.2e}", worst)))
}

fn criterion_5() -> Result<Outcome, String> {
    let mut worst = 0.0f64;
    for e in registry::EXAMPLES {
        let r = report(e.name, Command::Antipode)?;
        laws_pass(&r, e.name, &["hopf."])?;
        let id = r.get("hopf.antipode_identity").unwrap();
        if id.max_residual > TOL_LAW {
            return Err(format!("{}: antipode identity {:e}", e.name, id.max_residual));
        }
        worst = worst.max(id.max_residual);
    }
    Ok(ok(format!(
        "all hopf laws on {} configs, antipode identity <= {:.2e}",
        registry::EXAMPLES.len(),
        worst
    )))
}

fn criterion_6() -> Result<Outcome, String> {
    let s = sampler(200);
    let inst = group(1);
    let (l, _) = make_z_cubic_coboundary(&inst).map_err(|e| e.to_string())?;
    let d = Deformation::new(&l, &s, false).map_err(|e| e.to_string())?;
    let sg = sigma(&d).map_err(|e| e.to_string())?;
    for k in -10..=10 {
        let v = sg.sigma.eval(&[Key::from([k])]);
        if v.norm() > TOL_EXACT {
            return Err(format!("cubic sigma({}) = {}", k, v));
        }
    }
    let inst2 = group(2);
    let a = [[1.0, 2.0], [0.0, -1.0]];
    let m = ComplexMatrix::from_real(&[&a[0], &a[1]]).unwrap();
    let d2 = Deformation::new(&make_zd_matrix_cocycle(&inst2, &m).unwrap(), &s, false)
        .map_err(|e| e.to_string())?;
    let sg2 = sigma(&d2).map_err(|e| e.to_string())?;
    for k0 in -5..=5 {
        for k1 in -5..=5 {
            let k = [k0 as f64, k1 as f64];
            let kak: f64 = (0..2)
                .map(|i| (0..2).map(|j| k[i] * a[i][j] * k[j]).sum::<f64>())
                .sum();
            let v = sg2.sigma.eval(&[Key::from([k0, k1])]);
            if (v - Scalar::real(-kak)).norm() > TOL_LEMMA {
                return Err(format!("zd sigma({},{}) = {}", k0, k1, v));
            }
        }
    }
    let osc = Instance::new(SymmetricStarAlgebra::oscillator());
    let mo = ComplexMatrix::from_real(&[&[0.0, 0.5], &[-0.5, 0.0]]).unwrap();
    let d3 = Deformation::new(&make_primitive_bilinear_cocycle(&osc, &mo).unwrap(), &s, true)
        .map_err(|e| e.to_string())?;
    let sg3 = sigma(&d3).map_err(|e| e.to_string())?;
    for i in 0..=4 {
        for j in 0..=4 {
            if sg3.sigma.eval(&[Key::from([i, j])]).norm() > TOL_EXACT {
                return Err(format!("oscillator sigma(x^{} xstar^{}) != 0", i, j));
            }
        }
    }
    let mut worst = 0.0f64;
    for name in PAPER_EXAMPLES {
        let r = report(name, Command::Split)?;
        let (_, w) = laws_pass(&r, name, &["split.dsigma"])?;
        worst = worst.max(w);
    }
    Ok(ok(format!(
        "sigma closed forms hold; d sigma residual {:.2e}",
        worst
    )))
}

fn criterion_7() -> Result<Outcome, String> {
    let s = sampler(200);
    let grid = hopfdeform_core::deformation::DEFAULT_T_GRID;
    let inst = group(2);
    let a = [[1.0, 2.0], [0.0, -1.0]];
    let m = ComplexMatrix::from_real(&[&a[0], &a[1]]).unwrap();
    let d = Deformation::new(&make_zd_matrix_cocycle(&inst, &m).unwrap(), &s, false)
        .map_err(|e| e.to_string())?;
    let sp = split_cocommutative(&d, &s, &grid).map_err(|e| e.to_string())?;
    if !sp.report.pass() {
        return Err(format!(
            "split laws: {:?}",
            sp.report.failures().map(|l| &l.law_id).collect::<Vec<_>>()
        ));
    }
    if !sp.report.get("split.constant_antipodes").is_some_and(|l| l.pass) {
        return Err("S_t != S for L2".into());
    }
    let mut worst = 0.0f64;
    for k0 in -5..=5 {
        for k1 in -5..=5 {
            for l0 in -5..=5 {
                for l1 in -5..=5 {
                    let (k, l) = ([k0 as f64, k1 as f64], [l0 as f64, l1 as f64]);
                    let want: f64 = (0..2)
                        .map(|i| {
                            (0..2)
                                .map(|j| k[i] * (a[i][j] - a[j][i]) / 2.0 * l[j])
                                .sum::<f64>()
                        })
                        .sum();
                    let got = sp.l2.eval(&[Key::from([k0, k1]), Key::from([l0, l1])]);
                    worst = worst.max((got - Scalar::real(want)).norm());
                }
            }
        }
    }
    if worst > TOL_LEMMA {
        return Err(format!("L2 deviates by {:e}", worst));
    }
    let h = ComplexMatrix::from_rows(&[
        vec![Scalar::real(0.5), Scalar::new(0.25, 0.25)],
        vec![Scalar::new(0.25, -0.25), Scalar::real(-0.5)],
    ])
    .unwrap();
    let dh =
        Deformation::new(&make_zd_matrix_cocycle(&inst, &h).unwrap(), &s, true).map_err(|e| e.to_string())?;
    let sph = split_cocommutative(&dh, &s, &grid).map_err(|e| e.to_string())?;
    let mut re = 0.0f64;
    for k0 in -5..=5 {
        for k1 in -5..=5 {
            for l0 in -5..=5 {
                for l1 in -5..=5 {
                    re = re.max(sph.l2.eval(&[Key::from([k0, k1]), Key::from([l0, l1])]).re.abs());
                }
            }
        }
    }
    if re > TOL_EXACT {
        return Err(format!("hermitian L2 has real part {:e}", re));
    }
    let r = report("group-hermitian", Command::Split)?;
    laws_pass(&r, "group-hermitian", &["split.constant_antipodes"])?;
    Ok(ok(format!(
        "L2 error {:.2e}, max |Re L2| {:.2e}, constant antipodes",
        worst, re
    )))
}

fn criterion_8() -> Result<Outcome, String> {
    let s = sampler(200);
    let osc = Instance::new(SymmetricStarAlgebra::oscillator());
    let mo = ComplexMatrix::from_real(&[&[0.0, 0.5], &[-0.5, 0.0]]).unwrap();
    let d = Deformation::new(&make_primitive_bilinear_cocycle(&osc, &mo).unwrap(), &s, true)
        .map_err(|e| e.to_string())?;
    let (x, xs) = (osc.basis(Key::from([1, 0])), osc.basis(Key::from([0, 1])));
    let ab = deformed_mul(&d, 1.0, &x, &xs).map_err(|e| e.to_string())?;
    let ba = deformed_mul(&d, 1.0, &xs, &x).map_err(|e| e.to_string())?;
    let comm = osc.sub(&ab, &ba).map_err(|e| e.to_string())?;
    let err = (comm.coeff(&osc.unit_key()) - Scalar::ONE).norm();
    if err > TOL_EXACT || comm.support_len() != 1 {
        return Err(format!("[x,x*]_1 = {}", osc.render(&comm)));
    }
    let r = report("oscillator", Command::Deform)?;
    let (_, w) = laws_pass(
        &r,
        "oscillator",
        &["star.deformed_product", "star.generator_hermitian"],
    )?;
    if r.classifier.hermitian != Some(true) {
        return Err("L not hermitian".into());
    }
    Ok(ok(format!(
        "CCR coefficient error {:.1e}, *-law residual {:.2e}",
        err, w
    )))
}

fn criterion_9() -> Result<Outcome, String> {
    let grid = hopfdeform_core::deformation::DEFAULT_T_GRID;
    let s = sampler(200);
    let osc = Instance::new(SymmetricStarAlgebra::oscillator());
    let mut out = Vec::new();
    for (name, m) in [
        ("symmetric", [[0.0, 0.5], [0.5, 0.0]]),
        ("oscillator", [[0.0, 0.5], [-0.5, 0.0]]),
    ] {
        let mat = ComplexMatrix::from_real(&[&m[0], &m[1]]).unwrap();
        let d = Deformation::new(&make_primitive_bilinear_cocycle(&osc, &mat).unwrap(), &s, false)
            .map_err(|e| e.to_string())?;
        let psi = make_trivializing_functional(&d).map_err(|e| e.to_string())?;
        let r = check_trivialization(&d, &psi, &s, &grid).map_err(|e| e.to_string())?;
        if let Some(f) = r.failures().next() {
            return Err(format!("{}: {} {:e}", name, f.law_id, f.max_residual));
        }
        let constant = r.get("trivialize.constant");
        match (name, constant) {
            ("symmetric", Some(c)) => out.push(format!("mu~_t = mu residual {:.1e}", c.max_residual)),
            ("symmetric", None) => return Err("constant law missing for symmetric L".into()),
            _ => {
                let c = r.get("trivialize.commutators").unwrap();
                out.push(format!("commutators agree to {:.1e}", c.max_residual));
            }
        }
    }
    Ok(ok(out.join("; ")))
}

fn criterion_10() -> Result<Outcome, String> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for e in registry::EXAMPLES {
        let cfg = config(e.name, Command::Validate);
        if cfg.sample_budget < 200 {
            return Err(format!("{}: budget below 200", e.name));
        }
        let r = run(&cfg).map_err(|x| x.to_string())?;
        let (n, _) = laws_pass(&r, e.name, &["cohomology.dd_zero", "subcomplex."])?;
        let arities: Vec<&str> = r
            .laws
            .iter()
            .filter(|l| l.law_id.starts_with("cohomology.dd_zero"))
            .map(|l| l.law_id.as_str())
            .collect();
        if arities.len() < 2 {
            return Err(format!("{}: dd checked only for {:?}", e.name, arities));
        }
        for l in r
            .laws
            .iter()
            .filter(|l| l.law_id.starts_with("cohomology.dd_zero"))
        {
            worst = worst.max(l.max_residual);
        }
        count += n;
    }
    if worst > TOL_LAW {
        return Err(format!("dd residual {:e}", worst));
    }
    Ok(ok(format!(
        "{} laws over {} examples, dd residual {:.2e}",
        count,
        registry::EXAMPLES.len(),
        worst
    )))
}

fn criterion_11() -> Result<Outcome, String> {
    for name in ["z-cubic", "oscillator"] {
        let cfg = config(name, Command::FullReport);
        let a = run(&cfg).map_err(|e| e.to_string())?.to_json();
        let b = run(&cfg).map_err(|e| e.to_string())?.to_json();
        if a != b {
            return Err(format!("{}: reports differ", name));
        }
    }
    Ok(ok("identical JSON for z-cubic and oscillator"))
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("generator correspondence", criterion_1),
        ("deformation axioms", criterion_2),
        ("trivial deformation", criterion_3),
        ("R_phi lemma", criterion_4),
        ("Hopf deformation", criterion_5),
        ("sigma calculus", criterion_6),
        ("splitting", criterion_7),
        ("oscillator realization", criterion_8),
        ("trivialization", criterion_9),
        ("cohomology plumbing", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let o = f().unwrap_or_else(bad);
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<26} {}  {} ({:.1}s)",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
