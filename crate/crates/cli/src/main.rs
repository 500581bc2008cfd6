// SPDX-License-Identifier: Apache-2.0

//! `bch`: classify commutator algebras, compute closed BCH coefficients for
//! `exp(X) exp(Y) exp(Z)`, and check them against the oracles in `bch-core`.
//!
//! Exit codes: 0 success, 1 usage error, 2 Jacobi violation, 3 unreadable or
//! malformed input, 4 no admissible alpha, 5 verification failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bch_core::json::{closed_form_to_json, complex_to_json, spec_document, spec_to_json, SCHEMA};
use bch_core::oracle::{bch_series, rep_for_spec, sl2_virasoro, triple_product_series, verify_matrix, AlgebraElement, StructureAlgebra};
use bch_core::{
    classify, compose2_limit, compose3, jacobi_residual, sample_spec, virasoro_compose, AlgebraSpec, ClosedForm, Complex64,
    Error, Param, TypeTag, CLASSIFY_TOL,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use rayon::prelude::*;
use serde_json::{json, Value};

const EXIT_USAGE: u8 = 1;
const EXIT_JACOBI: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_NO_ALPHA: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Parser)]
#[command(name = "bch", version, about = "Closed BCH coefficients for exp(X) exp(Y) exp(Z)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct RunArgs {
    /// Pass/fail threshold for oracle discrepancies, in (0, 1e-4].
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
    /// Truncation order of the series oracle, in [4, 20].
    #[arg(long, global = true, default_value_t = 12)]
    order: usize,
    /// Parameter scale for sampling and for the series oracle.
    #[arg(long, global = true, default_value_t = 0.05)]
    scale: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for --type sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Spec document (`-` for stdin).
    #[arg(long, conflicts_with = "type_tag")]
    input: Option<PathBuf>,
    /// Sample a spec of this type (e.g. T1a, T1c_ii, T4) instead of reading one.
    #[arg(long = "type", value_name = "TYPE")]
    type_tag: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi residual, type, and parameter listing.
    Classify(InputArgs),
    /// Every closed form, one per admissible alpha.
    Solve(InputArgs),
    /// Compare closed forms with the series and matrix oracles.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Sweep every type over seeds 0..SEEDS.
        #[arg(long, conflicts_with_all = ["input", "type_tag"])]
        all: bool,
        #[arg(long, default_value_t = 25, requires = "all")]
        seeds: u64,
    },
    /// exp(l_{-k} L_{-k}) exp(l_0 L_0) exp(l_k L_k) in the Virasoro algebra.
    Virasoro {
        #[arg(long, allow_hyphen_values = true)]
        k: i32,
        #[arg(long, allow_hyphen_values = true)]
        lambda_minus_k: f64,
        #[arg(long = "lambda-0", allow_hyphen_values = true)]
        lambda_0: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda_k: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        central: f64,
    },
}

/// Validated run settings.
#[derive(Debug, Clone, Copy)]
struct RunConfig {
    tolerance: f64,
    oracle_order: usize,
    oracle_scale: f64,
    output_format: Format,
    seed: u64,
}

impl RunConfig {
    fn from_args(a: &RunArgs) -> Result<Self, Failure> {
        if !(a.tolerance > 0.0 && a.tolerance <= 1e-4) {
            return Err(Failure::usage(format!("--tolerance must lie in (0, 1e-4], got {}", a.tolerance)));
        }
        if !(4..=20).contains(&a.order) {
            return Err(Failure::usage(format!("--order must lie in [4, 20], got {}", a.order)));
        }
        if !(a.scale > 0.0 && a.scale.is_finite()) {
            return Err(Failure::usage(format!("--scale must be positive, got {}", a.scale)));
        }
        Ok(RunConfig {
            tolerance: a.tolerance,
            oracle_order: a.order,
            oracle_scale: a.scale,
            output_format: a.format,
            seed: a.seed,
        })
    }
}

struct Failure {
    code: u8,
    message: String,
    /// Report still worth printing (e.g. the discrepancies of a failed check).
    report: Option<Report>,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure { code: EXIT_USAGE, message, report: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::JacobiViolation { .. } => EXIT_JACOBI,
            Error::InadmissibleOnly
            | Error::DegenerateDenominator(_)
            | Error::NoIsolatedRoots
            | Error::NoConvergence { .. }
            | Error::UnsupportedRatio(_)
            | Error::UnsupportedShape(_)
            | Error::LimitUnstable(_)
            | Error::Pole(_) => EXIT_NO_ALPHA,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string(), report: None }
    }
}

/// A finished report in both renderings.
struct Report {
    json: Value,
    text: String,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serialisable") + "\n",
            Format::Text => self.text.clone(),
        }
    }
}

/// Round to 12 significant digits and print the shortest form.
fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r: f64 = format!("{x:.11e}").parse().expect("round trip");
    if r == 0.0 || (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn cnum(z: Complex64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else if z.re == 0.0 {
        format!("{}i", num(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{}{}i", num(z.re), sign, num(z.im.abs()))
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn load_spec(input: &InputArgs, cfg: &RunConfig) -> Result<(AlgebraSpec, String), Failure> {
    match (&input.input, &input.type_tag) {
        (Some(path), None) => {
            let text = if path.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(path)
            }
            .map_err(|e| Failure { code: EXIT_PARSE, message: format!("cannot read {}: {e}", path.display()), report: None })?;
            let spec = bch_core::json::parse_spec(&text)
                .map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string(), report: None })?;
            Ok((spec, path.display().to_string()))
        }
        (None, Some(tag)) => {
            let tag: TypeTag = tag.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
            let spec = sample_spec(tag, cfg.seed, cfg.oracle_scale)?;
            Ok((spec, format!("sample {tag} seed {} scale {}", cfg.seed, num(cfg.oracle_scale))))
        }
        _ => Err(Failure::usage("exactly one of --input or --type is required".into())),
    }
}

fn header(command: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m
}

/// The `[X,Z]` parameters left free, in table order.
fn unfixed_xz(free: &[Param]) -> Vec<&'static str> {
    [Param::E, Param::M, Param::N, Param::P].into_iter().filter(|p| free.contains(p)).map(Param::name).collect()
}

fn cmd_classify(input: &InputArgs, cfg: &RunConfig) -> Result<Report, Failure> {
    let (spec, source) = load_spec(input, cfg)?;
    let jr = jacobi_residual(&spec);
    let ty = classify(&spec, CLASSIFY_TOL)?;
    let free = unfixed_xz(&ty.free_params);
    let names = |ps: &[Param]| ps.iter().map(|p| p.name()).collect::<Vec<_>>();
    let mut j = header("classify");
    j.insert("source".into(), json!(source));
    j.insert("spec".into(), spec_to_json(&spec));
    j.insert(
        "jacobi_residual".into(),
        json!({
            "r1": complex_to_json(jr.r1), "r2": complex_to_json(jr.r2),
            "r3": complex_to_json(jr.r3), "r4": complex_to_json(jr.r4),
            "max": jr.max_modulus(),
        }),
    );
    j.insert("type".into(), json!(ty.tag.name()));
    j.insert("dimension".into(), json!(ty.dimension));
    j.insert("free".into(), json!(free));
    j.insert("free_params".into(), json!(names(&ty.free_params)));
    j.insert("constrained_params".into(), json!(names(&ty.constrained_params())));

    let mut t = format!("{}, D={}", ty.tag, ty.dimension);
    if !free.is_empty() {
        write!(t, ", free: {}", free.join(",")).unwrap();
    }
    t.push('\n');
    writeln!(t, "source: {source}").unwrap();
    writeln!(t, "jacobi residual: {}", sci(jr.max_modulus())).unwrap();
    writeln!(t, "free parameters: {}", names(&ty.free_params).join(",")).unwrap();
    writeln!(t, "constrained parameters: {}", names(&ty.constrained_params()).join(",")).unwrap();
    Ok(Report { json: Value::Object(j), text: t })
}

fn form_text(t: &mut String, label: &str, cf: &ClosedForm) {
    writeln!(t, "{label}: branch {:?}, admissible {}", cf.alpha.branch, cf.alpha.admissible).unwrap();
    writeln!(t, "  alpha = {}  beta = {}  residual = {}", cnum(cf.alpha.alpha), cnum(cf.alpha.beta), sci(cf.alpha.residual))
        .unwrap();
    writeln!(
        t,
        "  u~ = {}  v~ = {}  c~ = {}",
        cnum(cf.tilde.u_tilde),
        cnum(cf.tilde.v_tilde),
        cnum(cf.tilde.c_tilde)
    )
    .unwrap();
    for (name, v) in ["A", "B", "C", "D"].iter().zip(cf.coeffs()) {
        writeln!(t, "  {name} = {}", cnum(v)).unwrap();
    }
}

fn cmd_solve(input: &InputArgs, cfg: &RunConfig) -> Result<Report, Failure> {
    let (spec, source) = load_spec(input, cfg)?;
    let forms = compose3(&spec)?;
    info!("{} closed form(s) for {source}", forms.len());
    let mut j = header("solve");
    j.insert("source".into(), json!(source));
    j.insert("spec".into(), spec_to_json(&spec));
    j.insert("type".into(), json!(forms[0].algebra_type.tag.name()));
    j.insert("closed_forms".into(), Value::Array(forms.iter().map(|cf| closed_form_to_json(cf, &[])).collect()));
    let mut t = format!("{} closed form(s), type {}\nsource: {source}\n", forms.len(), forms[0].algebra_type.tag);
    for (i, cf) in forms.iter().enumerate() {
        form_text(&mut t, &format!("form {i}"), cf);
    }
    Ok(Report { json: Value::Object(j), text: t })
}

/// Series-oracle comparison; the spec is shrunk to the oracle scale first
/// when it is larger, since the truncated series converges only there.
struct SeriesCheck {
    sigma: f64,
    forms: Vec<ClosedForm>,
    /// `|coefficient - series|` for A, B, C, D, per form.
    diffs: Vec<[f64; 4]>,
}

impl SeriesCheck {
    fn worst(&self, i: usize) -> f64 {
        self.diffs[i].iter().copied().fold(0.0, f64::max)
    }

    fn principal(&self) -> usize {
        (0..self.diffs.len()).min_by(|&a, &b| self.worst(a).total_cmp(&self.worst(b))).unwrap_or(0)
    }
}

fn series_check(spec: &AlgebraSpec, cfg: &RunConfig, two_factor: bool) -> Result<SeriesCheck, Failure> {
    let h = spec.homogeneous_scale();
    let sigma = if h > cfg.oracle_scale { cfg.oracle_scale / h } else { 1.0 };
    let s = spec.rescaled(sigma);
    let alg = StructureAlgebra::from_spec(&s);
    let (forms, truth) = if two_factor {
        let t = bch_series(&alg, &AlgebraElement::x(), &AlgebraElement::z(), cfg.oracle_order)?;
        (vec![compose2_limit(&s)?], t)
    } else {
        (compose3(&s)?, triple_product_series(&alg, cfg.oracle_order)?)
    };
    let diffs = forms
        .iter()
        .map(|cf| {
            let c = cf.coeffs();
            std::array::from_fn(|k| (c[k] - truth.coeffs[k]).norm())
        })
        .collect();
    debug!("series check at sigma {sigma}: {diffs:?}");
    Ok(SeriesCheck { sigma, forms, diffs })
}

struct Verification {
    series: SeriesCheck,
    /// Representation name and Frobenius discrepancy per closed form of the input spec.
    matrix: Option<(String, Vec<f64>)>,
    forms: Vec<ClosedForm>,
}

impl Verification {
    fn worst(&self) -> f64 {
        let s = (0..self.series.diffs.len()).map(|i| self.series.worst(i)).fold(0.0, f64::max);
        let m = self.matrix.as_ref().map_or(0.0, |(_, d)| d.iter().copied().fold(0.0, f64::max));
        s.max(m)
    }
}

fn verify_spec(spec: &AlgebraSpec, cfg: &RunConfig) -> Result<Verification, Failure> {
    let forms = compose3(spec)?;
    let series = series_check(spec, cfg, false)?;
    let matrix = match rep_for_spec(spec) {
        Some(rep) => {
            let d = forms.iter().map(|cf| verify_matrix(&rep, cf)).collect::<Result<Vec<_>, _>>()?;
            Some((rep.name.to_string(), d))
        }
        None => None,
    };
    Ok(Verification { series, matrix, forms })
}

fn cmd_verify(input: &InputArgs, cfg: &RunConfig) -> Result<Report, Failure> {
    let (spec, source) = load_spec(input, cfg)?;
    let v = verify_spec(&spec, cfg)?;
    let tol = cfg.tolerance;
    let principal = v.series.principal();
    let worst = v.worst();
    let pass = worst <= tol;

    let mut j = header("verify");
    j.insert("source".into(), json!(source));
    j.insert("spec".into(), spec_to_json(&spec));
    j.insert("type".into(), json!(v.forms[0].algebra_type.tag.name()));
    j.insert("tolerance".into(), json!(tol));
    j.insert("series_order".into(), json!(cfg.oracle_order));
    j.insert("series_sigma".into(), json!(v.series.sigma));
    j.insert("principal".into(), json!(principal));
    let forms: Vec<Value> = v
        .forms
        .iter()
        .enumerate()
        .map(|(i, cf)| {
            let mut checks = vec![("series", v.series.worst(i) <= tol)];
            if let Some((_, d)) = &v.matrix {
                checks.push(("matrix", d[i] <= tol));
            }
            let mut o = closed_form_to_json(cf, &checks);
            let d = v.series.diffs[i];
            o["series_discrepancy"] = json!({"A": d[0], "B": d[1], "C": d[2], "D": d[3]});
            if let Some((_, m)) = &v.matrix {
                o["matrix_discrepancy"] = json!(m[i]);
            }
            o
        })
        .collect();
    j.insert("closed_forms".into(), Value::Array(forms));
    if let Some((name, _)) = &v.matrix {
        j.insert("matrix_rep".into(), json!(name));
    }
    j.insert("worst".into(), json!(worst));
    j.insert("pass".into(), json!(pass));

    let mut t = format!("type {}\nsource: {source}\n", v.forms[0].algebra_type.tag);
    writeln!(t, "series oracle: order {}, sigma {}", cfg.oracle_order, num(v.series.sigma)).unwrap();
    for (i, d) in v.series.diffs.iter().enumerate() {
        let mark = if i == principal { " (principal)" } else { "" };
        writeln!(
            t,
            "  form {i}{mark} [{:?}]: dA {} dB {} dC {} dD {}",
            v.series.forms[i].alpha.branch,
            sci(d[0]),
            sci(d[1]),
            sci(d[2]),
            sci(d[3])
        )
        .unwrap();
    }
    if let Some((name, d)) = &v.matrix {
        let list: Vec<String> = d.iter().map(|x| sci(*x)).collect();
        writeln!(t, "matrix oracle ({name}): {}", list.join(" ")).unwrap();
    }
    writeln!(t, "{}: worst discrepancy {} (tolerance {})", if pass { "PASS" } else { "FAIL" }, sci(worst), sci(tol))
        .unwrap();
    let report = Report { json: Value::Object(j), text: t };
    if pass {
        Ok(report)
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("verification failed: worst discrepancy {} exceeds {}", sci(worst), sci(tol)),
            report: Some(report),
        })
    }
}

struct Case {
    tag: TypeTag,
    seed: u64,
    outcome: Result<(f64, usize), String>,
}

fn cmd_verify_all(seeds: u64, cfg: &RunConfig) -> Result<Report, Failure> {
    if seeds == 0 {
        return Err(Failure::usage("--seeds must be at least 1".into()));
    }
    let jobs: Vec<(TypeTag, u64)> = TypeTag::ALL.iter().flat_map(|&t| (0..seeds).map(move |s| (t, s))).collect();
    let mut cases: Vec<Case> = jobs
        .into_par_iter()
        .map(|(tag, seed)| {
            let outcome = sample_spec(tag, seed, cfg.oracle_scale)
                .map_err(Failure::from)
                .and_then(|spec| verify_spec(&spec, cfg))
                .map(|v| (v.worst(), v.forms.len()))
                .map_err(|f| f.message);
            Case { tag, seed, outcome }
        })
        .collect();
    cases.sort_by_key(|c| (c.tag, c.seed));

    let tol = cfg.tolerance;
    let ok = |c: &Case| matches!(c.outcome, Ok((w, _)) if w <= tol);
    let failed = cases.iter().filter(|c| !ok(c)).count();
    let worst = cases.iter().map(|c| c.outcome.as_ref().map_or(f64::INFINITY, |o| o.0)).fold(0.0, f64::max);

    let mut t = String::new();
    let mut rows = Vec::with_capacity(cases.len());
    for c in &cases {
        let status = if ok(c) { "pass" } else { "FAIL" };
        match &c.outcome {
            Ok((w, n)) => {
                writeln!(t, "{:<8} seed {:>3}: {status} forms {n} worst {}", c.tag.name(), c.seed, sci(*w)).unwrap();
                rows.push(json!({"type": c.tag.name(), "seed": c.seed, "forms": n, "worst": w, "pass": ok(c)}));
            }
            Err(e) => {
                writeln!(t, "{:<8} seed {:>3}: {status} {e}", c.tag.name(), c.seed).unwrap();
                rows.push(json!({"type": c.tag.name(), "seed": c.seed, "error": e, "pass": false}));
            }
        }
    }
    writeln!(
        t,
        "{}: {} types x {seeds} seeds, {} passed, {failed} failed, worst discrepancy {} (tolerance {})",
        if failed == 0 { "PASS" } else { "FAIL" },
        TypeTag::ALL.len(),
        cases.len() - failed,
        sci(worst),
        sci(tol)
    )
    .unwrap();

    let mut j = header("verify_all");
    j.insert("tolerance".into(), json!(tol));
    j.insert("series_order".into(), json!(cfg.oracle_order));
    j.insert("scale".into(), json!(cfg.oracle_scale));
    j.insert("cases".into(), Value::Array(rows));
    j.insert("passed".into(), json!(cases.len() - failed));
    j.insert("failed".into(), json!(failed));
    j.insert("worst".into(), if worst.is_finite() { json!(worst) } else { Value::Null });
    let report = Report { json: Value::Object(j), text: t };
    if failed == 0 {
        Ok(report)
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{failed} case(s) failed; worst discrepancy {}", sci(worst)),
            report: Some(report),
        })
    }
}

fn cmd_virasoro(k: i32, lm: f64, l0: f64, lk: f64, central: f64, cfg: &RunConfig) -> Result<Report, Failure> {
    if k == 0 {
        return Err(Failure::usage("--k must be nonzero".into()));
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let vc = virasoro_compose(k, c(lm), c(l0), c(lk), c(central))?;
    let two_factor = l0 == 0.0;
    let series = series_check(&vc.spec, cfg, two_factor)?;
    let matrix = if k.abs() == 1 {
        let rep = sl2_virasoro(k, c(lm), c(l0), c(lk))?;
        let d = vc.closed_forms.iter().map(|cf| verify_matrix(&rep, cf)).collect::<Result<Vec<_>, _>>()?;
        Some(d)
    } else {
        None
    };
    let tol = cfg.tolerance;
    let series_worst = (0..series.diffs.len()).map(|i| series.worst(i)).fold(0.0, f64::max);
    let matrix_worst = matrix.as_ref().map_or(0.0, |d| d.iter().copied().fold(0.0, f64::max));
    let worst = vc.discrepancy.max(series_worst).max(matrix_worst);
    let pass = worst <= tol;
    let l = vc.l_basis(&vc.closed_form);

    let cjs = |z: &[Complex64]| z.iter().map(|&x| complex_to_json(x)).collect::<Vec<_>>();
    let mut j = header("virasoro");
    j.insert(
        "input".into(),
        json!({"k": k, "lambda_minus_k": lm, "lambda_0": l0, "lambda_k": lk, "central": central}),
    );
    j.insert("spec".into(), spec_document(&vc.spec)["spec"].clone());
    j.insert("lambda_plus".into(), complex_to_json(vc.lambda_plus));
    j.insert("lambda_minus".into(), complex_to_json(vc.lambda_minus));
    j.insert("c_k".into(), complex_to_json(vc.c_k));
    j.insert("closed_form".into(), closed_form_to_json(&vc.closed_form, &[]));
    j.insert("l_basis".into(), json!(cjs(&l)));
    j.insert("explicit".into(), json!(cjs(&vc.explicit)));
    j.insert("explicit_discrepancy".into(), json!(vc.discrepancy));
    j.insert("series_sigma".into(), json!(series.sigma));
    j.insert("series_discrepancy".into(), json!(series_worst));
    if let Some(d) = &matrix {
        j.insert("matrix_discrepancy".into(), json!(d));
    }
    j.insert("worst".into(), json!(worst));
    j.insert("pass".into(), json!(pass));

    let mut t = format!("Virasoro k = {k}, lambda = ({}, {}, {}), c = {}\n", num(lm), num(l0), num(lk), num(central));
    let s = &vc.spec;
    writeln!(t, "spec: u = z = {}, n = {}, e = {}", cnum(s.u), cnum(s.n), cnum(s.e)).unwrap();
    writeln!(t, "lambda+ = {}  lambda- = {}", cnum(vc.lambda_plus), cnum(vc.lambda_minus)).unwrap();
    writeln!(t, "c_k = {}", cnum(vc.c_k)).unwrap();
    form_text(&mut t, if two_factor { "closed form (two-factor limit)" } else { "closed form" }, &vc.closed_form);
    let lb: Vec<String> = l.iter().map(|&x| cnum(x)).collect();
    writeln!(t, "L_-k, L_0, L_k, I coefficients: {}", lb.join(", ")).unwrap();
    writeln!(t, "explicit formula discrepancy: {}", sci(vc.discrepancy)).unwrap();
    writeln!(t, "series oracle: order {}, sigma {}, discrepancy {}", cfg.oracle_order, num(series.sigma), sci(series_worst))
        .unwrap();
    if matrix.is_some() {
        writeln!(t, "matrix oracle (sl2): {}", sci(matrix_worst)).unwrap();
    }
    writeln!(t, "{}: worst discrepancy {} (tolerance {})", if pass { "PASS" } else { "FAIL" }, sci(worst), sci(tol)).unwrap();
    let report = Report { json: Value::Object(j), text: t };
    if pass {
        Ok(report)
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("verification failed: worst discrepancy {} exceeds {}", sci(worst), sci(tol)),
            report: Some(report),
        })
    }
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Report, Failure> {
    debug!("{cfg:?}");
    let cfg = *cfg;
    match &cli.command {
        Command::Classify(input) => cmd_classify(input, &cfg),
        Command::Solve(input) => cmd_solve(input, &cfg),
        Command::Verify { all: true, seeds, .. } => cmd_verify_all(*seeds, &cfg),
        Command::Verify { input, .. } => cmd_verify(input, &cfg),
        Command::Virasoro { k, lambda_minus_k, lambda_0, lambda_k, central } => {
            cmd_virasoro(*k, *lambda_minus_k, *lambda_0, *lambda_k, *central, &cfg)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("BCH_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = match RunConfig::from_args(&cli.run) {
        Ok(cfg) => cfg,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    match run(&cli, &cfg) {
        Ok(report) => {
            print!("{}", report.render(cfg.output_format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(report) = &f.report {
                print!("{}", report.render(cfg.output_format));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
