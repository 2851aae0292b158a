//! Command-line surface. `run` does all the work and returns the report and
//! exit code, so the binary only parses arguments and prints.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::algebra::{Algebra, Bimodule};
use crate::complexes::ComplexError;
use crate::derived::{DatumConfig, DerivedError, TiltingDatum};
use crate::hochschild::{hochschild_chains, hochschild_cochains, Cochain, HochschildError, DEFAULT_BUDGET};
use crate::io::{parse_field, Document, InputError, Loader};
use crate::linalg::{Field, Matrix, SVec};
use crate::products::{cap_chain, cup, ProductError};
use crate::transport::{
    apply_f, check_concentrated, cohomology_class, cohomology_lifts, cohomology_margin, homology_margin,
    perturb_lifts, transport_homology, transport_with, verify_cap_square, verify_graded_algebra_transport,
    TransportError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hhcap", version, about = "Exact Hochschild (co)homology, cap products and their transport along derived equivalences")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Truncation degree of bar resolutions and models.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..))]
    pub max_degree: u64,
    /// Largest dimension allowed for any materialized term.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Report layout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized perturbation checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Replace the field of every algebra file: Q, F<p> or Fp:<p>.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<Field>,
}

impl RunConfig {
    fn datum_config(&self) -> DatumConfig {
        DatumConfig { max_degree: self.max_degree as usize, budget: self.budget as usize }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check algebra, module, bimodule or datum files.
    Validate { paths: Vec<PathBuf> },
    /// Dimensions and representatives of Hochschild (co)homology.
    Hh {
        algebra: PathBuf,
        /// Coefficient bimodule; the regular bimodule when omitted.
        #[arg(long)]
        module: Option<PathBuf>,
        #[arg(long, conflicts_with = "homology")]
        cohomology: bool,
        #[arg(long)]
        homology: bool,
    },
    /// Cup product of two cohomology classes, given as `degree:c0,c1,...`
    /// in the basis printed by `hh --cohomology`.
    Cup {
        algebra: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Cap product of a cohomology class with a homology class.
    Cap {
        algebra: PathBuf,
        /// Coefficient bimodule; the regular bimodule when omitted.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Cohomology class `degree:c0,c1,...`.
        #[arg(long)]
        f: String,
        /// Homology class `degree:c0,c1,...` in the basis printed by `hh`.
        #[arg(long)]
        z: String,
    },
    /// Transport matrices on homology and transported cohomology classes.
    Transport {
        datum: PathBuf,
        /// Coefficient bimodule over the datum's algebra; the regular one when omitted.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Only this homology degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Check every transported cap square, cup compatibility and
    /// independence of choices.
    VerifyTheorem {
        datum: PathBuf,
        /// Coefficient bimodule over the datum's algebra; the regular one when omitted.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Only this homology degree.
        #[arg(long)]
        degree: Option<usize>,
        /// Random perturbations per basis class.
        #[arg(long, default_value_t = 2)]
        perturbations: usize,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn complex_code(e: &ComplexError) -> i32 {
    match e {
        ComplexError::OutsideTrustedRange { .. } | ComplexError::UnsolvableLift(_) => EXIT_REFUSED,
        _ => EXIT_FAILED,
    }
}

fn hochschild_code(e: &HochschildError) -> i32 {
    match e {
        HochschildError::SizeBudgetExceeded { .. } | HochschildError::BeyondTrustedRange { .. } => EXIT_REFUSED,
        HochschildError::NotClosed(_) => EXIT_INPUT,
        HochschildError::IdentificationFailed(_) => EXIT_FAILED,
        HochschildError::Complex(c) => complex_code(c),
    }
}

fn derived_code(e: &DerivedError) -> i32 {
    match e {
        DerivedError::NotProgenerator(_) | DerivedError::TiltingValidationFailed(_) => EXIT_FAILED,
        DerivedError::Construction(_) | DerivedError::Algebra(_) => EXIT_INPUT,
        DerivedError::Complex(c) => complex_code(c),
        DerivedError::Hochschild(h) => hochschild_code(h),
    }
}

fn product_code(e: &ProductError) -> i32 {
    match e {
        ProductError::DegreeViolation { .. } | ProductError::Coefficients => EXIT_INPUT,
        ProductError::Hochschild(h) => hochschild_code(h),
        ProductError::Complex(c) => complex_code(c),
    }
}

fn transport_code(e: &TransportError) -> i32 {
    match e {
        TransportError::NotConcentrated(_) => EXIT_INPUT,
        TransportError::BeyondMargin { .. } => EXIT_REFUSED,
        TransportError::Derived(d) => derived_code(d),
        TransportError::Hochschild(h) => hochschild_code(h),
        TransportError::Product(p) => product_code(p),
        TransportError::Complex(c) => complex_code(c),
    }
}

macro_rules! cli_error_from {
    ($t:ty, $code:expr) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError { code: $code(&e), message: e.to_string() }
            }
        }
    };
}

cli_error_from!(InputError, |_: &InputError| EXIT_INPUT);
cli_error_from!(ComplexError, complex_code);
cli_error_from!(HochschildError, hochschild_code);
cli_error_from!(DerivedError, derived_code);
cli_error_from!(ProductError, product_code);
cli_error_from!(TransportError, transport_code);

fn input(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, message: message.into() }
}

/// A finished command: its exit code and the report to print.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Validate { paths } => cmd_validate(&cli.config, paths),
        Command::Hh { algebra, module, cohomology, .. } => cmd_hh(&cli.config, algebra, module.as_deref(), *cohomology),
        Command::Cup { algebra, f, g } => cmd_cup(&cli.config, algebra, f, g),
        Command::Cap { algebra, module, f, z } => cmd_cap(&cli.config, algebra, module.as_deref(), f, z),
        Command::Transport { datum, module, degree } => cmd_transport(&cli.config, datum, module.as_deref(), *degree),
        Command::VerifyTheorem { datum, module, degree, perturbations } => {
            cmd_verify(&cli.config, datum, module.as_deref(), *degree, *perturbations)
        }
    };
    match result {
        Ok(o) => o,
        Err(e) => Outcome {
            code: e.code,
            report: json!({ "status": status_word(e.code), "error": e.message, "exit_code": e.code }),
        },
    }
}

fn status_word(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_FAILED => "failed",
        EXIT_INPUT => "input error",
        _ => "refused",
    }
}

fn finish(code: i32, mut body: Map<String, Value>) -> Result<Outcome, CliError> {
    let mut report = Map::new();
    report.insert("status".into(), status_word(code).into());
    report.append(&mut body);
    report.insert("exit_code".into(), code.into());
    Ok(Outcome { code, report: Value::Object(report) })
}

fn svec_json(f: Field, v: &SVec) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!([i, f.render(c)])).collect())
}

fn dense_json(f: Field, v: &SVec, dim: usize) -> Value {
    let mut out = vec![f.zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    Value::Array(out.iter().map(|c| Value::String(f.render(c))).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    json!(m.render_rows())
}

fn load_pair(config: &RunConfig, algebra: &Path, module: Option<&Path>) -> Result<(Arc<Algebra>, Bimodule), CliError> {
    let mut loader = Loader::new(config.field);
    let a = loader.algebra(algebra)?;
    let m = match module {
        None => Bimodule::regular(&a),
        Some(p) => {
            let m = loader.bimodule(p)?;
            if m.left_algebra().as_ref() != a.as_ref() || m.right_algebra().as_ref() != a.as_ref() {
                return Err(input(format!("{}: not a bimodule over {}", p.display(), algebra.display())));
            }
            m
        }
    };
    Ok((a, m))
}

fn cmd_validate(config: &RunConfig, paths: &[PathBuf]) -> Result<Outcome, CliError> {
    if paths.is_empty() {
        return Err(input("no files given"));
    }
    let mut loader = Loader::new(config.field);
    let mut code = EXIT_OK;
    let mut files = Vec::new();
    for p in paths {
        let mut entry = Map::new();
        entry.insert("path".into(), p.display().to_string().into());
        match loader.document(p) {
            Ok(Document::Algebra(a)) => {
                entry.insert("kind".into(), "algebra".into());
                entry.insert("field".into(), a.field().to_string().into());
                entry.insert("dim".into(), a.dim().into());
                entry.insert("commutative".into(), a.is_commutative().into());
                entry.insert("valid".into(), true.into());
            }
            Ok(Document::Module(m)) => {
                entry.insert("kind".into(), "module".into());
                entry.insert("dim".into(), m.dim().into());
                entry.insert("valid".into(), true.into());
            }
            Ok(Document::Bimodule(m)) => {
                entry.insert("kind".into(), "bimodule".into());
                entry.insert("dim".into(), m.dim().into());
                entry.insert("valid".into(), true.into());
            }
            Ok(Document::Datum(spec)) => {
                entry.insert("kind".into(), format!("{} datum", spec.construction).into());
                match spec.build(config.datum_config()) {
                    Ok(d) => {
                        let rep = d.validate();
                        entry.insert("dim_b".into(), d.b.dim().into());
                        let checks: Vec<Value> = rep
                            .checks
                            .iter()
                            .map(|c| {
                                let status = match c.passed {
                                    Some(true) => "passed",
                                    Some(false) => "FAILED",
                                    None => "asserted",
                                };
                                let mut row = json!({ "check": c.name, "status": status });
                                if !c.detail.is_empty() {
                                    row["detail"] = c.detail.clone().into();
                                }
                                row
                            })
                            .collect();
                        entry.insert("checks".into(), checks.into());
                        entry.insert("valid".into(), rep.all_green().into());
                        if !rep.all_green() {
                            code = code.max(EXIT_FAILED);
                        }
                    }
                    Err(e) => {
                        let c = derived_code(&e);
                        if c == EXIT_INPUT {
                            return Err(e.into());
                        }
                        entry.insert("valid".into(), false.into());
                        entry.insert("error".into(), e.to_string().into());
                        code = code.max(c);
                    }
                }
            }
            Err(e @ (InputError::Axioms { .. } | InputError::ModuleAxioms { .. })) => {
                entry.insert("valid".into(), false.into());
                entry.insert("error".into(), e.to_string().into());
                code = code.max(EXIT_FAILED);
            }
            Err(e) => return Err(e.into()),
        }
        files.push(Value::Object(entry));
    }
    let mut body = Map::new();
    body.insert("files".into(), files.into());
    finish(code, body)
}

fn cmd_hh(config: &RunConfig, algebra: &Path, module: Option<&Path>, cohomology: bool) -> Result<Outcome, CliError> {
    let (a, m) = load_pair(config, algebra, module)?;
    let f = a.field();
    let n_max = config.max_degree as usize;
    let budget = config.budget as usize;
    let (complex, sign) = if cohomology {
        (hochschild_cochains(&a, &m, n_max, budget)?, -1)
    } else {
        (hochschild_chains(&a, &m, n_max, budget)?, 1)
    };
    let (lo, hi) = complex.trusted();
    let mut rows = Vec::new();
    for n in 0..n_max as i64 {
        let deg = sign * n;
        let trusted = lo <= deg && deg <= hi;
        let h = complex.homology(deg)?;
        let term = complex.dim(deg);
        rows.push(json!({
            "degree": n,
            "dim": h.dim(),
            "trusted": trusted,
            "representatives": h.reps().iter().map(|r| svec_json(f, r)).collect::<Vec<_>>(),
            "term_dim": term,
        }));
    }
    let trusted_degrees = if cohomology { json!([-hi, -lo]) } else { json!([lo, hi]) };
    let mut body = Map::new();
    body.insert("theory".into(), (if cohomology { "cohomology" } else { "homology" }).into());
    body.insert("field".into(), f.to_string().into());
    body.insert("algebra_dim".into(), a.dim().into());
    body.insert("module_dim".into(), m.dim().into());
    body.insert("trusted_degrees".into(), trusted_degrees);
    body.insert("dims".into(), rows.iter().map(|r| r["dim"].clone()).collect::<Vec<_>>().into());
    body.insert("degrees".into(), rows.into());
    finish(EXIT_OK, body)
}

/// Parses `degree:c0,c1,...`.
fn parse_class(f: Field, spec: &str) -> Result<(usize, Vec<crate::linalg::Elem>), CliError> {
    let (deg, coords) = spec.split_once(':').ok_or_else(|| input(format!("class {spec:?} is not of the form degree:c0,c1,...")))?;
    let degree: usize = deg.trim().parse().map_err(|_| input(format!("bad degree in {spec:?}")))?;
    let coords = if coords.trim().is_empty() {
        Vec::new()
    } else {
        coords.split(',').map(|c| f.parse(c).map_err(|e| input(e.to_string()))).collect::<Result<Vec<_>, _>>()?
    };
    Ok((degree, coords))
}

fn combine(f: Field, reps: &[SVec], coords: &[crate::linalg::Elem], what: &str) -> Result<SVec, CliError> {
    if coords.len() != reps.len() {
        return Err(input(format!("{what}: {} coordinates for a space of dimension {}", coords.len(), reps.len())));
    }
    let mut out = Vec::new();
    for (r, c) in reps.iter().zip(coords) {
        out = crate::linalg::sparse::axpy(&f, &out, c, r);
    }
    Ok(out)
}

fn refuse_beyond(config: &RunConfig, degree: usize, what: &str) -> Result<(), CliError> {
    if degree + 1 > config.max_degree as usize {
        return Err(CliError {
            code: EXIT_REFUSED,
            message: format!("{what} of degree {degree} needs --max-degree at least {}", degree + 1),
        });
    }
    Ok(())
}

fn cohomology_cocycle(config: &RunConfig, a: &Arc<Algebra>, spec: &str, what: &str) -> Result<Cochain, CliError> {
    let f = a.field();
    let (m, coords) = parse_class(f, spec)?;
    refuse_beyond(config, m, what)?;
    let c = hochschild_cochains(a, &Bimodule::regular(a), m + 1, config.budget as usize)?;
    let h = c.homology(-(m as i64))?;
    Ok(Cochain::new(m, a.dim(), combine(f, h.reps(), &coords, what)?))
}

fn cmd_cup(config: &RunConfig, algebra: &Path, f_spec: &str, g_spec: &str) -> Result<Outcome, CliError> {
    let (a, _) = load_pair(config, algebra, None)?;
    let fld = a.field();
    let f = cohomology_cocycle(config, &a, f_spec, "f")?;
    let g = cohomology_cocycle(config, &a, g_spec, "g")?;
    let fg = cup(&a, &f, &g)?;
    refuse_beyond(config, fg.degree, "f ∪ g")?;
    let c = hochschild_cochains(&a, &Bimodule::regular(&a), fg.degree + 1, config.budget as usize)?;
    let h = c.homology(-(fg.degree as i64))?;
    let class = h.class_of(&fg.values)?;
    let mut body = Map::new();
    body.insert("degree".into(), fg.degree.into());
    body.insert("class".into(), dense_json(fld, &class, h.dim()));
    body.insert("representative".into(), svec_json(fld, &fg.values));
    finish(EXIT_OK, body)
}

fn cmd_cap(config: &RunConfig, algebra: &Path, module: Option<&Path>, f_spec: &str, z_spec: &str) -> Result<Outcome, CliError> {
    let (a, m) = load_pair(config, algebra, module)?;
    let fld = a.field();
    let f = cohomology_cocycle(config, &a, f_spec, "f")?;
    let (n, coords) = parse_class(fld, z_spec)?;
    if f.degree > n {
        return Err(ProductError::DegreeViolation { cochain: f.degree, chain: n }.into());
    }
    refuse_beyond(config, n, "z")?;
    let chains = hochschild_chains(&a, &m, n + 1, config.budget as usize)?;
    let src = chains.homology(n as i64)?;
    let z = combine(fld, src.reps(), &coords, "z")?;
    let out = cap_chain(&a, &m, &f, n, &z)?;
    let dst = chains.homology((n - f.degree) as i64)?;
    let class = dst.class_of(&out)?;
    let mut body = Map::new();
    body.insert("degree".into(), (n - f.degree).into());
    body.insert("class".into(), dense_json(fld, &class, dst.dim()));
    body.insert("representative".into(), svec_json(fld, &out));
    finish(EXIT_OK, body)
}

fn load_datum(config: &RunConfig, datum: &Path, module: Option<&Path>) -> Result<(TiltingDatum, Bimodule), CliError> {
    let mut loader = Loader::new(config.field);
    let spec = loader.datum(datum)?;
    let d = spec.build(config.datum_config())?;
    let m = match module {
        None => Bimodule::regular(&d.a),
        Some(p) => {
            let m = loader.bimodule(p)?;
            if m.left_algebra().as_ref() != d.a.as_ref() || m.right_algebra().as_ref() != d.a.as_ref() {
                return Err(input(format!("{}: not a bimodule over the datum's algebra", p.display())));
            }
            m
        }
    };
    Ok((d, m))
}

/// Degrees to sweep: the requested one, or everything the margin allows.
fn degrees(requested: Option<usize>, margin: usize) -> Result<Vec<usize>, CliError> {
    match requested {
        Some(n) if n > margin => Err(CliError {
            code: EXIT_REFUSED,
            message: format!("degree {n} is beyond the datum's margin {margin}; raise --max-degree"),
        }),
        Some(n) => Ok(vec![n]),
        None => Ok((0..=margin).collect()),
    }
}

/// Splits a per-check error into a refusal annotation or a hard error.
fn refusal<T>(r: Result<T, TransportError>) -> Result<Result<T, String>, CliError> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if transport_code(&e) == EXIT_REFUSED => Ok(Err(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

struct Tally {
    checked: usize,
    failed: usize,
    refused: usize,
    explicit: bool,
}

impl Tally {
    fn code(&self) -> i32 {
        if self.failed > 0 {
            EXIT_FAILED
        } else if self.refused > 0 && (self.explicit || self.checked == 0) {
            EXIT_REFUSED
        } else {
            EXIT_OK
        }
    }
}

fn basis_cocycles(d: &TiltingDatum, m: usize) -> Result<Vec<Cochain>, TransportError> {
    let c = hochschild_cochains(&d.a, &Bimodule::regular(&d.a), m + 1, d.config.budget)?;
    let h = c.homology(-(m as i64)).map_err(HochschildError::from)?;
    Ok(h.reps().iter().map(|r| Cochain::new(m, d.a.dim(), r.clone())).collect())
}

fn cmd_transport(config: &RunConfig, datum: &Path, module: Option<&Path>, degree: Option<usize>) -> Result<Outcome, CliError> {
    let (d, m) = load_datum(config, datum, module)?;
    let fb = d.b.field();
    let image = apply_f(&d, &m)?;
    let conc = check_concentrated(image.complex())?;
    let mut tally = Tally { checked: 0, failed: 0, refused: 0, explicit: degree.is_some() };
    let mut homology = Vec::new();
    for n in degrees(degree, homology_margin(&d))? {
        match refusal(transport_homology(&d, &m, n))? {
            Ok(t) => {
                tally.checked += 1;
                let ok = t.is_invertible();
                if !ok {
                    tally.failed += 1;
                }
                homology.push(json!({
                    "degree": n,
                    "dims": [t.matrix.cols(), t.matrix.rows()],
                    "invertible": ok,
                    "matrix": matrix_json(&t.matrix),
                }));
            }
            Err(why) => {
                tally.refused += 1;
                homology.push(json!({ "degree": n, "refused": why }));
            }
        }
    }
    let mut cohomology = Vec::new();
    if degree.is_none() {
        for mdeg in 0..=cohomology_margin(&d) {
            let basis = match refusal(basis_cocycles(&d, mdeg))? {
                Ok(b) => b,
                Err(why) => {
                    tally.refused += 1;
                    cohomology.push(json!({ "degree": mdeg, "refused": why }));
                    continue;
                }
            };
            for (i, f) in basis.iter().enumerate() {
                let class = refusal(crate::transport::transport_cohomology(&d, f).and_then(|ff| cohomology_class(&d.b, &ff, d.config.budget)))?;
                match class {
                    Ok(c) => {
                        tally.checked += 1;
                        cohomology.push(json!({ "degree": mdeg, "basis_class": i, "image_class": svec_json(fb, &c) }));
                    }
                    Err(why) => {
                        tally.refused += 1;
                        cohomology.push(json!({ "degree": mdeg, "basis_class": i, "refused": why }));
                    }
                }
            }
        }
    }
    let mut body = Map::new();
    body.insert("datum".into(), datum.display().to_string().into());
    body.insert("dim_a".into(), d.a.dim().into());
    body.insert("dim_b".into(), d.b.dim().into());
    body.insert("dim_n".into(), conc.module.dim().into());
    body.insert("trusted_degrees".into(), json!([0, homology_margin(&d)]));
    body.insert("homology".into(), homology.into());
    body.insert("cohomology".into(), cohomology.into());
    finish(tally.code(), body)
}

fn cmd_verify(
    config: &RunConfig,
    datum: &Path,
    module: Option<&Path>,
    degree: Option<usize>,
    perturbations: usize,
) -> Result<Outcome, CliError> {
    let (d, m) = load_datum(config, datum, module)?;
    let budget = d.config.budget;
    let mut tally = Tally { checked: 0, failed: 0, refused: 0, explicit: degree.is_some() };
    let mut first_failure: Option<String> = None;
    let mut fail = |tally: &mut Tally, what: String| {
        tally.failed += 1;
        first_failure.get_or_insert(what);
    };

    let rep = d.validate();
    let failing: Vec<String> = rep.failures().iter().map(|c| c.name.clone()).collect();
    for name in &failing {
        fail(&mut tally, format!("datum check: {name}"));
    }
    tally.checked += rep.checks.len();
    if !failing.is_empty() {
        let mut body = Map::new();
        body.insert("datum".into(), datum.display().to_string().into());
        body.insert("failed_datum_checks".into(), failing.into());
        body.insert("first_failure".into(), first_failure.unwrap_or_default().into());
        return finish(EXIT_FAILED, body);
    }

    let image = apply_f(&d, &m)?;
    let conc = check_concentrated(image.complex())?;
    let chain_degrees = degrees(degree, homology_margin(&d))?;

    let mut squares = Vec::new();
    let mut classes: Vec<Cochain> = Vec::new();
    for mdeg in 0..=cohomology_margin(&d) {
        let basis = match refusal(basis_cocycles(&d, mdeg))? {
            Ok(b) => b,
            Err(why) => {
                tally.refused += 1;
                squares.push(json!({ "cochain_degree": mdeg, "refused": why }));
                continue;
            }
        };
        for (i, f) in basis.iter().enumerate() {
            for &n in chain_degrees.iter().filter(|&&n| n >= mdeg) {
                let label = format!("cap square f = HH^{mdeg} basis class {i}, n = {n}");
                match refusal(verify_cap_square(&d, &m, f, n))? {
                    Ok(sq) => {
                        tally.checked += 1;
                        let ok = sq.commutes();
                        if !ok {
                            fail(&mut tally, label.clone());
                        }
                        squares.push(json!({
                            "cochain_degree": mdeg,
                            "basis_class": i,
                            "chain_degree": n,
                            "commutes": ok,
                            "transport_n": matrix_json(&sq.source.matrix),
                            "cap_then_transport": matrix_json(&sq.cap_then_transport),
                            "transport_then_cap": matrix_json(&sq.transport_then_cap),
                        }));
                    }
                    Err(why) => {
                        tally.refused += 1;
                        squares.push(json!({ "cochain_degree": mdeg, "basis_class": i, "chain_degree": n, "refused": why }));
                    }
                }
            }
        }
        classes.extend(basis);
    }

    let mut graded = Vec::new();
    let margin = cohomology_margin(&d);
    for (i, f) in classes.iter().enumerate() {
        for (j, g) in classes.iter().enumerate() {
            if f.degree + g.degree > margin {
                continue;
            }
            let label = format!("cup transport of classes {i} and {j}");
            match refusal(verify_graded_algebra_transport(&d, f, g))? {
                Ok(c) => {
                    tally.checked += 1;
                    if !c.holds() {
                        fail(&mut tally, label.clone());
                    }
                    graded.push(json!({ "f": i, "g": j, "degree": f.degree + g.degree, "holds": c.holds() }));
                }
                Err(why) => {
                    tally.refused += 1;
                    graded.push(json!({ "f": i, "g": j, "refused": why }));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut perturbed = Vec::new();
    for (i, f) in classes.iter().enumerate() {
        let mut run = || -> Result<(SVec, Vec<SVec>), TransportError> {
            let lifts = cohomology_lifts(&d, f)?;
            let base = cohomology_class(&d.b, &transport_with(&d, &lifts)?, budget)?;
            let mut others = Vec::new();
            for _ in 0..perturbations {
                let p = perturb_lifts(&d, &lifts, &mut rng)?;
                others.push(cohomology_class(&d.b, &transport_with(&d, &p)?, budget)?);
            }
            Ok((base, others))
        };
        match refusal(run())? {
            Ok((base, others)) => {
                tally.checked += 1;
                let ok = others.iter().all(|o| *o == base);
                if !ok {
                    fail(&mut tally, format!("perturbation of class {i}"));
                }
                perturbed.push(json!({ "class": i, "degree": f.degree, "trials": others.len(), "unchanged": ok }));
            }
            Err(why) => {
                tally.refused += 1;
                perturbed.push(json!({ "class": i, "refused": why }));
            }
        }
    }

    let mut body = Map::new();
    body.insert("datum".into(), datum.display().to_string().into());
    body.insert("dim_a".into(), d.a.dim().into());
    body.insert("dim_b".into(), d.b.dim().into());
    body.insert("dim_n".into(), conc.module.dim().into());
    body.insert("failed_datum_checks".into(), failing.into());
    body.insert("chain_degrees".into(), json!(chain_degrees));
    body.insert("cochain_degrees".into(), json!([0, margin]));
    body.insert("squares".into(), squares.into());
    body.insert("cup_compatibility".into(), graded.into());
    body.insert("perturbations".into(), perturbed.into());
    body.insert("seed".into(), config.seed.into());
    body.insert("checked".into(), tally.checked.into());
    body.insert("refused".into(), tally.refused.into());
    if let Some(f) = first_failure {
        body.insert("first_failure".into(), f.into());
    }
    finish(tally.code(), body)
}

/// Renders a report as indented `key: value` text.
pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Text => {
            let mut out = String::new();
            text(report, 0, &mut out);
            out
        }
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(xs) => {
            let parts = xs.iter().map(inline).collect::<Option<Vec<_>>>()?;
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Object(_) => None,
        other => Some(other.to_string()),
    }
}

fn scalar(v: &Value) -> Option<String> {
    inline(v).filter(|s| s.len() <= 100 || !v.is_array())
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap())),
    }
}
