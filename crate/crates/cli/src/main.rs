use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cloneforge::bell::{format_signature, parity_signature, Rule};
use cloneforge::cloner::{cerf_state, dual_amplitudes, reexpand_check};
use cloneforge::covariance::{covariance_residual, overlap_matrix, BasisPair, Reduction};
use cloneforge::optimize::{
    ck_verdict, elementwise_symmetric_point, universal_cloner, universal_fidelity, OptimalCloner, Problem,
};
use cloneforge::qlinalg::{reduced_density, Op, TOL};
use cloneforge::report::{Check, ReportDocument};
use cloneforge::verify::{run_suite, Suite};
use cloneforge::{BellFamily, Error, OrthonormalBasis};

const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(name = "cloneforge", version, about = "Covariant quantum cloning workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random sweeps.
    #[arg(long, env = "CLONEFORGE_SEED", global = true)]
    seed: Option<u64>,
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV instead of JSON (trade-off curves only).
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitudes of one Bell state.
    Bell {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Covariance classes of a basis pair.
    Covariance {
        #[command(flatten)]
        setup: Setup,
        #[command(flatten)]
        common: Common,
    },
    /// Optimal F_B as a function of F_A.
    Tradeoff {
        #[command(flatten)]
        setup: Setup,
        /// Number of F_A samples on [1/N, 1].
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Drop the equal-disturbance constraint.
        #[arg(long)]
        no_isotropy: bool,
        /// Also write the curve as CSV to this path.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Full report for a pattern cloner; the symmetric optimum when no
    /// parameters are given.
    CloneReport {
        #[command(flatten)]
        setup: Setup,
        /// Class values, comma separated; rescaled to a normalized matrix.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<f64>>,
        #[arg(long)]
        no_isotropy: bool,
        #[command(flatten)]
        common: Common,
    },
    /// The state-independent cloner.
    Universal {
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Setup {
    #[arg(long, value_enum)]
    pair: PairArg,
    #[arg(long, value_enum)]
    bell: FamilyArg,
    /// Class tying applied before optimizing; defaults per pair.
    #[arg(long, value_enum)]
    reduction: Option<ReductionArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Fourier,
    Hadamard,
}

impl From<FamilyArg> for Rule {
    fn from(f: FamilyArg) -> Rule {
        match f {
            FamilyArg::Fourier => Rule::Fourier,
            FamilyArg::Hadamard => Rule::Hadamard,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    CompFourier,
    CompHadamard,
}

impl From<PairArg> for BasisPair {
    fn from(p: PairArg) -> BasisPair {
        match p {
            PairArg::CompFourier => BasisPair::CompFourier,
            PairArg::CompHadamard => BasisPair::CompHadamard,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    None,
    Border,
    Parity,
}

impl From<ReductionArg> for Reduction {
    fn from(r: ReductionArg) -> Reduction {
        match r {
            ReductionArg::None => Reduction::None,
            ReductionArg::Border => Reduction::Border,
            ReductionArg::Parity => Reduction::Parity,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SuiteArg {
    All,
    Bell,
    Duality,
    Covariance,
    QubitTheorem,
    Entropy,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Bell => Suite::Bell,
            SuiteArg::Duality => Suite::Duality,
            SuiteArg::Covariance => Suite::Covariance,
            SuiteArg::QubitTheorem => Suite::QubitTheorem,
            SuiteArg::Entropy => Suite::Entropy,
        }
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) | Error::NoCrossing => 3,
            Error::NotOrthonormal(_) | Error::NotCerfState(_) | Error::NonFinite => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("cannot write output: {e}"))
    }
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("cloneforge: verification failed");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("cloneforge: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Bell { family, dim, m, n, common } => cmd_bell(family.into(), dim, m, n, &common),
        Command::Covariance { setup, common } => cmd_covariance(&setup, &common),
        Command::Tradeoff { setup, grid, no_isotropy, curve, common } => {
            cmd_tradeoff(&setup, grid, !no_isotropy, curve.as_deref(), &common)
        }
        Command::CloneReport { setup, params, no_isotropy, common } => {
            cmd_clone_report(&setup, params, !no_isotropy, &common)
        }
        Command::Universal { dim, common } => cmd_universal(dim, &common),
        Command::Verify { suite, common } => cmd_verify(suite.into(), &common),
    }
}

impl Common {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn json_only(&self) -> Result<(), Failure> {
        if self.csv {
            return Err(Failure::usage("--csv is only available for tradeoff"));
        }
        Ok(())
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_doc(&self, doc: &ReportDocument) -> CmdResult {
        self.emit(&doc.to_json_string())?;
        Ok(doc.all_pass())
    }
}

fn cmd_bell(rule: Rule, dim: usize, m: usize, n: usize, common: &Common) -> CmdResult {
    common.json_only()?;
    rule.check_dim(dim)?;
    let family = BellFamily::new(rule, OrthonormalBasis::computational(dim)?)?;
    let state = family.state(m, n)?;
    let inputs = json!({"family": rule.name(), "dim": dim, "m": m, "n": n, "seed": common.seed()});
    let amplitudes: Vec<[f64; 2]> = state.amps().iter().map(|z| [z.re, z.im]).collect();
    let mut outputs = json!({
        "description": family.description(),
        "ordering": "row-major |j,k>",
        "amplitudes": amplitudes,
    });
    if rule == Rule::Hadamard {
        outputs["parity_signature"] = json!(format_signature(&parity_signature(m, n)?));
    }
    let mut doc = ReportDocument::new("bell", inputs, outputs);
    doc.push(Check::within("normalized", (state.norm_sqr() - 1.0).abs(), TOL));
    let mixed = Op::identity(dim).scale((1.0 / dim as f64).into());
    let ent = [0usize, 1]
        .iter()
        .map(|&k| reduced_density(state, &[dim, dim], &[k]).and_then(|r| r.max_abs_diff(&mixed)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    doc.push(Check::within("maximally-entangled", ent, TOL));
    common.emit_doc(&doc)
}

fn pattern_for(setup: &Setup) -> Result<(BasisPair, Rule, Reduction, cloneforge::AmplitudePattern, cloneforge::AmplitudePattern), Failure> {
    let pair: BasisPair = setup.pair.into();
    let rule: Rule = setup.bell.into();
    let full = pair.pattern(rule)?;
    let reduction = setup.reduction.map(Reduction::from).unwrap_or_else(|| pair.default_reduction(rule));
    let reduced = full.reduce(reduction)?;
    Ok((pair, rule, reduction, full, reduced))
}

fn setup_inputs(pair: BasisPair, rule: Rule, reduction: Reduction, seed: u64) -> Value {
    json!({"pair": pair.name(), "bell": rule.name(), "reduction": reduction.to_string(), "seed": seed})
}

fn cmd_covariance(setup: &Setup, common: &Common) -> CmdResult {
    common.json_only()?;
    let (pair, rule, reduction, full, reduced) = pattern_for(setup)?;
    let fam1 = BellFamily::new(rule, OrthonormalBasis::computational(4)?)?;
    let fam2 = BellFamily::new(rule, pair.second_basis())?;
    let outputs = json!({
        "num_classes": full.num_classes(),
        "free_parameters": full.num_classes() - 1,
        "pattern": full,
        "grid": full.label_grid(),
        "reduced": {
            "num_classes": reduced.num_classes(),
            "pattern": reduced,
            "grid": reduced.label_grid(),
        },
    });
    let mut doc = ReportDocument::new("covariance", setup_inputs(pair, rule, reduction, common.seed()), outputs);
    doc.push(Check::flag("overlap-unitary", overlap_matrix(&fam1, &fam2)?.is_unitary()));
    common.emit_doc(&doc)
}

fn cmd_tradeoff(setup: &Setup, grid: usize, isotropy: bool, curve_path: Option<&Path>, common: &Common) -> CmdResult {
    if grid < 10 {
        return Err(Failure::usage(format!("--grid must be at least 10 (got {grid})")));
    }
    let (pair, rule, reduction, _, pattern) = pattern_for(setup)?;
    let problem = Problem::new(pattern.clone(), rule, isotropy)?;
    let curve = problem.tradeoff_curve(grid)?;
    let csv = curve.to_csv();
    if common.csv {
        common.emit(&csv)?;
        return Ok(true);
    }
    if let Some(p) = curve_path {
        fs::write(p, &csv)?;
    }
    let best = problem.symmetric_optimum()?;
    let mut inputs = setup_inputs(pair, rule, reduction, common.seed());
    inputs["grid"] = json!(grid);
    inputs["isotropy"] = json!(isotropy);
    let mut outputs = json!({
        "points": curve.points.len(),
        "labels": pattern.labels(),
        "grid_crossing": curve.crossing(),
        "symmetric_point": {"F": best.report.F_A, "params": best.params},
        "report": best.report,
    });
    let mut doc = ReportDocument::new("tradeoff", inputs, Value::Null);
    doc.push(Check::within("symmetric-gap", (best.report.F_A - best.report.F_B).abs(), 1e-6));
    if pair == BasisPair::CompHadamard && rule == Rule::Fourier && reduction == Reduction::Parity {
        let fixed = elementwise_symmetric_point(&pattern, rule)?;
        outputs["elementwise_symmetric_point"] = json!({"F": fixed.report.F_A, "params": fixed.params});
    }
    doc.outputs = outputs;
    common.emit_doc(&doc)
}

fn report_checks(doc: &mut ReportDocument, cloner: &OptimalCloner, basis2: &OrthonormalBasis, rule: Rule) -> Result<(), Failure> {
    let family = BellFamily::new(rule, OrthonormalBasis::computational(cloner.a.dim())?)?;
    let reexpanded = reexpand_check(&cerf_state(&cloner.a, &family)?)?;
    doc.push(Check::within("duality", reexpanded.max_abs_diff(&dual_amplitudes(&cloner.a, rule)?)?, TOL));
    doc.push(Check::within("covariance", covariance_residual(&cloner.a, basis2, rule)?, 1e-9));
    Ok(())
}

fn report_outputs(cloner: &OptimalCloner) -> Value {
    let verdict = ck_verdict(cloner.report.I_AB, cloner.report.I_AE);
    let mut v = serde_json::to_value(&cloner.report).expect("report serializes");
    v["r_lower"] = json!(verdict.r_lower);
    v["params"] = json!(cloner.params);
    v
}

fn cmd_clone_report(setup: &Setup, params: Option<Vec<f64>>, isotropy: bool, common: &Common) -> CmdResult {
    common.json_only()?;
    let (pair, rule, reduction, _, pattern) = pattern_for(setup)?;
    let mut inputs = setup_inputs(pair, rule, reduction, common.seed());
    let cloner = match &params {
        Some(p) => {
            if p.len() != pattern.num_classes() {
                return Err(Failure::usage(format!(
                    "expected {} parameters ({}), got {}",
                    pattern.num_classes(),
                    pattern.labels().join(","),
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Failure::usage("parameters must be finite"));
            }
            let norm: f64 =
                pattern.classes().iter().zip(p).map(|(c, x)| c.len() as f64 * x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Failure::usage("parameters are all zero"));
            }
            let scaled: Vec<f64> = p.iter().map(|x| x / norm).collect();
            inputs["params"] = json!(p);
            OptimalCloner::from_amplitudes(pattern.assign_real(&scaled)?, rule, scaled)?
        }
        None => {
            inputs["isotropy"] = json!(isotropy);
            Problem::new(pattern.clone(), rule, isotropy)?.symmetric_optimum()?
        }
    };
    let mut doc = ReportDocument::new("clone-report", inputs, report_outputs(&cloner));
    report_checks(&mut doc, &cloner, &pair.second_basis(), rule)?;
    common.emit_doc(&doc)
}

fn cmd_universal(dim: usize, common: &Common) -> CmdResult {
    common.json_only()?;
    let cloner = universal_cloner(dim)?;
    let mut outputs = report_outputs(&cloner);
    outputs["F_formula"] = json!(universal_fidelity(dim));
    let mut doc = ReportDocument::new("universal", json!({"dim": dim, "seed": common.seed()}), outputs);
    doc.push(Check::within("fidelity-formula", (cloner.report.F_A - universal_fidelity(dim)).abs(), 1e-9));
    doc.push(Check::within("symmetric", (cloner.report.F_A - cloner.report.F_B).abs(), 1e-9));
    report_checks(&mut doc, &cloner, &OrthonormalBasis::fourier(dim)?, Rule::Fourier)?;
    common.emit_doc(&doc)
}

fn cmd_verify(suite: Suite, common: &Common) -> CmdResult {
    common.json_only()?;
    let seed = common.seed();
    let outcome = run_suite(suite, seed)?;
    let mut doc = ReportDocument::new(
        "verify",
        json!({"suite": suite.name(), "seed": seed}),
        Value::Object(outcome.outputs),
    );
    doc.extend(outcome.checks);
    common.emit_doc(&doc)
}
