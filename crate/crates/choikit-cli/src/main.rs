//! Command-line front end: JSON I/O, seeded generators, membership checks,
//! and batch execution of the identity suites.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use choikit::cones::{self, Status};
use choikit::json::{MapFileDto, MatrixDto};
use choikit::maps::{Isomorphism, LinearMapRep};
use choikit::verify::{self, RunConfig, SuiteReport};
use choikit::{sample, BilinearForm, ComplexMatrix, Error};

const EXIT_OK: u8 = 0;
const EXIT_NON_MEMBER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DIMS: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_SUITE_FAILURE: u8 = 5;

#[derive(Parser)]
#[command(name = "choikit", version, about = "Choi transforms, bilinear forms, and cone oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the twisted Choi matrix C^sigma_phi of a map.
    Transform(TransformArgs),
    /// Run a cone-membership oracle on a map.
    Check(CheckArgs),
    /// Run an identity suite over seeded random instances.
    Verify(VerifyArgs),
    /// Generate a certified random object.
    Gen(GenArgs),
}

#[derive(Args)]
struct TransformArgs {
    /// Map file (transfer-matrix JSON or named built-in).
    map_file: PathBuf,
    /// Optional sigma file; defaults to the identity on the domain.
    sigma_file: Option<PathBuf>,
    /// Named sigma instead of a file.
    #[arg(long, value_enum)]
    sigma: Option<NamedSigma>,
    /// Matrix file for s when --sigma ad is used.
    #[arg(long)]
    s: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = false)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedSigma {
    Id,
    Transpose,
    Ad,
}

#[derive(Args)]
struct CheckArgs {
    /// Map file to test.
    map_file: PathBuf,
    /// Cone to test membership of.
    #[arg(long, value_enum)]
    cone: ConeArg,
    /// Schmidt level for the p / sp cones.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 64)]
    budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = false)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConeArg {
    Cp,
    P,
    Sp,
    Ppt,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = false)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Table1,
    Prop51,
    Prop52,
    Thm33,
    Thm43,
    Prop46,
    All,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = false)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Cp,
    Spk,
    Positive,
    Iso,
    Ad,
    Form,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Transform(args) => cmd_transform(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Gen(args) => cmd_gen(&args),
    };
    ExitCode::from(code)
}

/// Seed resolution: flag, then CHOIKIT_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("CHOIKIT_SEED").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::DimensionMismatch(_) => EXIT_DIMS,
        _ => EXIT_PARSE,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    serde_json::from_str(&text).map_err(|e| {
        eprintln!("error: cannot parse {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn read_map(path: &Path) -> Result<LinearMapRep, u8> {
    let dto: MapFileDto = read_json(path)?;
    LinearMapRep::try_from(dto).map_err(|e| {
        eprintln!("error: {e}");
        exit_code_for(&e)
    })
}

fn emit(value: &impl Serialize, out: Option<&Path>, quiet: bool) -> Result<(), u8> {
    let text = serde_json::to_string_pretty(value).expect("serialize report");
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_PARSE
            })?;
            if !quiet {
                println!("wrote {}", path.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_transform(args: &TransformArgs) -> u8 {
    let phi = match read_map(&args.map_file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let m = phi.dim_in();
    let sigma_map = match (&args.sigma_file, args.sigma) {
        (Some(path), None) => match read_map(path) {
            Ok(m) => m,
            Err(code) => return code,
        },
        (None, Some(NamedSigma::Id)) | (None, None) => LinearMapRep::identity(m),
        (None, Some(NamedSigma::Transpose)) => LinearMapRep::transpose_map(m),
        (None, Some(NamedSigma::Ad)) => {
            let Some(s_path) = &args.s else {
                eprintln!("error: --sigma ad needs --s <matrix file>");
                return EXIT_PARSE;
            };
            let s: MatrixDto = match read_json(s_path) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let s: ComplexMatrix = match s.try_into() {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_PARSE;
                }
            };
            match LinearMapRep::ad(&s) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_code_for(&e);
                }
            }
        }
        (Some(_), Some(_)) => {
            eprintln!("error: pass either a sigma file or --sigma, not both");
            return EXIT_PARSE;
        }
    };
    if sigma_map.dim_in() != m || sigma_map.dim_out() != m {
        eprintln!(
            "error: dimension mismatch: sigma acts on M_{} -> M_{}, but the map domain is M_{m}",
            sigma_map.dim_in(),
            sigma_map.dim_out()
        );
        return EXIT_DIMS;
    }
    let sigma = match Isomorphism::new(sigma_map) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE;
        }
    };
    match phi.choi_sigma(&sigma) {
        Ok(choi) => match emit(&choi, args.out.as_deref(), args.quiet) {
            Ok(()) => EXIT_OK,
            Err(code) => code,
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

#[derive(Serialize)]
struct ConeReport {
    cone: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    status: Status,
    witness: Option<cones::Witness>,
    value: Option<f64>,
    seed: u64,
    budget: usize,
    detail: String,
}

fn cmd_check(args: &CheckArgs) -> u8 {
    let phi = match read_map(&args.map_file) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let seed = resolve_seed(args.seed);
    let k = args.k.unwrap_or(1);
    let verdict = match args.cone {
        ConeArg::Cp => Ok(cones::is_cp(&phi)),
        ConeArg::P => cones::is_k_positive(&phi, k, args.budget, seed),
        ConeArg::Sp => cones::is_k_superpositive(&phi, k, args.budget, seed),
        ConeArg::Ppt => cones::is_ppt(&phi.choi()),
    };
    let verdict = match verdict {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let cone_name = match args.cone {
        ConeArg::Cp => "cp",
        ConeArg::P => "p",
        ConeArg::Sp => "sp",
        ConeArg::Ppt => "ppt",
    };
    let report = ConeReport {
        cone: cone_name.into(),
        k: match args.cone {
            ConeArg::P | ConeArg::Sp => Some(k),
            _ => None,
        },
        status: verdict.status,
        witness: verdict.witness,
        value: verdict.value,
        seed,
        budget: args.budget,
        detail: verdict.detail,
    };
    if emit(&report, args.out.as_deref(), args.quiet).is_err() {
        return EXIT_PARSE;
    }
    match report.status {
        Status::Member => EXIT_OK,
        Status::NonMember => EXIT_NON_MEMBER,
        Status::Unknown => EXIT_UNKNOWN,
    }
}

fn print_suite_table(report: &SuiteReport) {
    println!(
        "suite {} (seed {}, trials {}, dims {})",
        report.suite, report.seed, report.trials, report.dims
    );
    for row in &report.rows {
        println!(
            "  {:<42} max residual {:>12.3e}  tol {:>8.1e}  {}",
            row.name,
            row.max_residual,
            row.tol,
            if row.pass { "pass" } else { "FAIL" }
        );
    }
}

fn cmd_verify(args: &VerifyArgs) -> u8 {
    let cfg = RunConfig {
        seed: resolve_seed(args.seed),
        trials: args.trials.unwrap_or(100),
        budget: args.budget.unwrap_or(64),
        m: args.m,
        n: args.n,
        k: args.k,
        tol: args.tol,
    };
    let reports = match run_suites(args.suite, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    if !args.quiet {
        for report in &reports {
            print_suite_table(report);
        }
    }
    if emit(&reports, args.out.as_deref(), args.quiet).is_err() {
        return EXIT_PARSE;
    }
    let mut failed = false;
    for report in &reports {
        if !report.pass {
            failed = true;
            let path = PathBuf::from(format!("{}_reproducer.json", report.suite));
            let dump = json!({
                "suite": report.suite,
                "config": cfg,
                "failure": report.failure,
            });
            if fs::write(&path, serde_json::to_string_pretty(&dump).expect("dump")).is_ok() {
                eprintln!(
                    "suite {} failed; reproducer written to {}",
                    report.suite,
                    path.display()
                );
            } else {
                eprintln!("suite {} failed; could not write reproducer", report.suite);
            }
        }
    }
    if failed {
        EXIT_SUITE_FAILURE
    } else {
        EXIT_OK
    }
}

fn run_suites(which: SuiteArg, cfg: &RunConfig) -> choikit::Result<Vec<SuiteReport>> {
    Ok(match which {
        SuiteArg::Table1 => vec![verify::run_table1(cfg)?],
        SuiteArg::Prop51 => vec![verify::run_prop51(cfg)?],
        SuiteArg::Prop52 => vec![verify::run_prop52(cfg)?],
        SuiteArg::Thm33 => vec![verify::run_thm33(cfg)?],
        SuiteArg::Thm43 => vec![verify::run_thm43(cfg)?],
        SuiteArg::Prop46 => vec![verify::run_prop46(cfg)?],
        SuiteArg::All => verify::run_all(cfg)?,
    })
}

fn cmd_gen(args: &GenArgs) -> u8 {
    let seed = resolve_seed(args.seed);
    let mut rng = sample::rng_from_seed(seed);
    let m = args.m;
    let n = args.n.unwrap_or(m);
    let k = args.k.unwrap_or(1);
    if m == 0 || n == 0 {
        eprintln!("error: dims must be positive");
        return EXIT_PARSE;
    }
    if matches!(args.kind, GenKind::Spk) && (k == 0 || k > m.min(n)) {
        eprintln!("error: --k must satisfy 1 <= k <= min(m, n) = {}", m.min(n));
        return EXIT_PARSE;
    }
    let value = match args.kind {
        GenKind::Cp => {
            let (map, kraus) = sample::random_cp(&mut rng, m, n, m * n);
            json!({
                "kind": "cp", "seed": seed, "m": m, "n": n,
                "map": map,
                "certificate": { "kraus": kraus, "note": "x -> sum_i a_i^* x a_i" },
            })
        }
        GenKind::Spk => {
            let (map, kraus) = sample::random_spk(&mut rng, m, n, k, m.min(n) + 1);
            json!({
                "kind": "spk", "seed": seed, "m": m, "n": n, "k": k,
                "map": map,
                "certificate": { "kraus": kraus, "kraus_rank_bound": k },
            })
        }
        GenKind::Positive => {
            let map = sample::random_positive(&mut rng, m, n);
            json!({
                "kind": "positive", "seed": seed, "m": m, "n": n,
                "map": map,
                "certificate": { "note": "convex mixture of a CP map and a co-CP map" },
            })
        }
        GenKind::Iso => {
            let iso = sample::random_isomorphism(&mut rng, m);
            json!({
                "kind": "iso", "seed": seed, "m": m,
                "map": iso.as_map(),
            })
        }
        GenKind::Ad => {
            let s = sample::random_nonsingular(&mut rng, m);
            let map = LinearMapRep::ad(&s).expect("square s");
            json!({
                "kind": "ad", "seed": seed, "m": m,
                "map": map,
                "certificate": { "s": s },
            })
        }
        GenKind::Form => {
            let form: BilinearForm = sample::random_symmetric_form(&mut rng, m * m);
            json!({
                "kind": "form", "seed": seed, "dim": m * m,
                "form": form,
                "certificate": { "note": "G^T G + shift construction, invertibility re-checked" },
            })
        }
    };
    match emit(&value, args.out.as_deref(), args.quiet) {
        Ok(()) => EXIT_OK,
        Err(code) => code,
    }
}
