//! Command-line front end: pair condition checks, pencil scans,
//! decompositions, and the assertable counterexample gallery.

mod matrixfile;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pencillab::chevalley::{eigenprojections, jordan_chevalley};
use pencillab::expmat::{expm, unipotent_log};
use pencillab::numcore::spectrum;
use pencillab::pencil::{branch_structure, profile, property_l_pair, track_circle, Pencil};
use pencillab::verifier::{
    check_condition, commutator, gallery, gallery_case, verify_claim, ConditionKind,
    GalleryClaim, IndexWindow,
};
use pencillab::{CMatrix, Error as CoreError, Tolerances};
use report::{cx_json, Report};

const EXIT_ASSERTION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pencillab",
    about = "Spectral analysis of matrix pencils: exponential conditions, property L, \
             decompositions, and branch structure",
    version
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Root-finder convergence threshold.
    #[arg(long, global = true)]
    eps_root: Option<f64>,
    /// Rank / nullspace pivot threshold.
    #[arg(long, global = true)]
    eps_rank: Option<f64>,
    /// Eigenvalue identity threshold.
    #[arg(long, global = true)]
    eps_cluster: Option<f64>,
    /// Matrix-equation residual threshold.
    #[arg(long, global = true)]
    eps_verify: Option<f64>,
    /// Iteration cap for root finding and series.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Seed for all randomized sampling (default: $PENCILLAB_SEED or 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check exponential conditions, the commutator, and property L for a named pair.
    CheckPair {
        /// Matrix file (JSON).
        file: PathBuf,
        /// Name of the first matrix.
        name_a: String,
        /// Name of the second matrix.
        name_b: String,
        #[arg(long, value_enum, default_value_t = KindArg::Twosided4)]
        kind: KindArg,
        /// Index window "lo..hi" for k (defaults per kind).
        #[arg(long, value_parser = parse_range)]
        window: Option<(i64, i64)>,
        /// Separate l-window "lo..hi".
        #[arg(long, value_parser = parse_range)]
        l_window: Option<(i64, i64)>,
    },
    /// Profile a pencil: generic count, exceptional points, branch structure, trajectories.
    PencilScan {
        file: PathBuf,
        name_a: String,
        name_b: String,
        /// Center of the trajectory circle, "re,im".
        #[arg(long, value_parser = parse_complex, default_value = "0,0")]
        center: Complex64,
        /// Radius of the trajectory circle.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Samples around the circle.
        #[arg(long, default_value_t = 128)]
        points: usize,
        /// Write tracked eigenvalue trajectories as CSV.
        #[arg(long)]
        emit_csv: Option<PathBuf>,
    },
    /// Decompose a named matrix into commuting diagonalizable + nilpotent parts.
    Decompose {
        file: PathBuf,
        name: String,
        /// Write the parts to a matrix file.
        #[arg(long)]
        emit_matrices: Option<PathBuf>,
    },
    /// Run the built-in gallery; with --assert, exit nonzero on any failed claim.
    Gallery {
        /// Case name, or "all".
        #[arg(long, default_value = "all")]
        case: String,
        /// Fail (exit 1) when a claim does not verify.
        #[arg(long)]
        assert: bool,
        /// Write the selected pairs to a matrix file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Bourgeois3,
    Twosided4,
    Window,
}

impl std::fmt::Display for KindArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KindArg::Bourgeois3 => write!(f, "bourgeois3"),
            KindArg::Twosided4 => write!(f, "twosided4"),
            KindArg::Window => write!(f, "window"),
        }
    }
}

impl From<KindArg> for ConditionKind {
    fn from(k: KindArg) -> ConditionKind {
        match k {
            KindArg::Bourgeois3 => ConditionKind::Bourgeois3,
            KindArg::Twosided4 => ConditionKind::TwoSided4,
            KindArg::Window => ConditionKind::Window,
        }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected \"lo..hi\", got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

fn tolerances_from(opts: &GlobalOpts) -> Result<Tolerances, String> {
    let mut tol = Tolerances::default();
    if let Some(v) = opts.eps_root {
        tol.eps_root = v;
    }
    if let Some(v) = opts.eps_rank {
        tol.eps_rank = v;
    }
    if let Some(v) = opts.eps_cluster {
        tol.eps_cluster = v;
    }
    if let Some(v) = opts.eps_verify {
        tol.eps_verify = v;
    }
    if let Some(v) = opts.max_iter {
        tol.max_iter = v;
    }
    tol.validate().map_err(|e| e.to_string())?;
    Ok(tol)
}

fn seed_from(opts: &GlobalOpts) -> u64 {
    opts.seed
        .or_else(|| std::env::var("PENCILLAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::InvalidInput(_) => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match tolerances_from(&cli.opts) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let seed = seed_from(&cli.opts);

    let started = Instant::now();
    match run(&cli.command, &tol, seed) {
        Ok((mut report, ok)) => {
            report.timing_ms = started.elapsed().as_millis();
            if cli.opts.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ASSERTION)
            }
        }
        Err(RunError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(RunError::Numerical(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

enum RunError {
    Input(String),
    Numerical(CoreError),
}

impl From<matrixfile::FileError> for RunError {
    fn from(e: matrixfile::FileError) -> Self {
        RunError::Input(e.to_string())
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        RunError::Numerical(e)
    }
}

fn load_pair(
    file: &Path,
    name_a: &str,
    name_b: &str,
) -> Result<(CMatrix, CMatrix), RunError> {
    let mf = matrixfile::load(file)?;
    let a = matrixfile::to_matrix(matrixfile::lookup(&mf, name_a)?)?;
    let b = matrixfile::to_matrix(matrixfile::lookup(&mf, name_b)?)?;
    if a.dim() != b.dim() {
        return Err(RunError::Input(format!(
            "{name_a} is {}x{} but {name_b} is {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    Ok((a, b))
}

fn run(command: &Command, tol: &Tolerances, seed: u64) -> Result<(Report, bool), RunError> {
    match command {
        Command::CheckPair { file, name_a, name_b, kind, window, l_window } => {
            cmd_check_pair(file, name_a, name_b, *kind, *window, *l_window, tol, seed)
        }
        Command::PencilScan { file, name_a, name_b, center, radius, points, emit_csv } => {
            cmd_pencil_scan(file, name_a, name_b, *center, *radius, *points, emit_csv, tol, seed)
        }
        Command::Decompose { file, name, emit_matrices } => {
            cmd_decompose(file, name, emit_matrices, tol, seed)
        }
        Command::Gallery { case, assert, emit } => cmd_gallery(case, *assert, emit, tol, seed),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check_pair(
    file: &Path,
    name_a: &str,
    name_b: &str,
    kind: KindArg,
    window: Option<(i64, i64)>,
    l_window: Option<(i64, i64)>,
    tol: &Tolerances,
    seed: u64,
) -> Result<(Report, bool), RunError> {
    let (a, b) = load_pair(file, name_a, name_b)?;
    let kind_str = kind.to_string();
    let kind: ConditionKind = kind.into();
    let mut win = IndexWindow::default_for(kind);
    if let Some((lo, hi)) = window {
        win.k_lo = lo;
        win.k_hi = hi;
        // a single --window on the two-sided kinds means a square window
        if l_window.is_none() && kind != ConditionKind::Bourgeois3 {
            win.l_lo = lo;
            win.l_hi = hi;
        }
    }
    if let Some((lo, hi)) = l_window {
        win.l_lo = lo;
        win.l_hi = hi;
    }

    let mut report = Report::new(
        format!(
            "check-pair {} {} {} --kind {} --window {}..{} --l-window {}..{}",
            file.display(),
            name_a,
            name_b,
            kind_str,
            win.k_lo,
            win.k_hi,
            win.l_lo,
            win.l_hi
        ),
        seed,
        tol,
    );

    let condition = check_condition(&a, &b, kind, win, tol)?;
    report.verdict("condition_holds", condition.holds);
    report.residual("condition_max_residual", condition.max_residual);
    for ((k, l), resid) in condition.violations.iter().take(16) {
        report.residual(&format!("violation_at_k{k}_l{l}"), *resid);
    }

    let (_, comm_norm) = commutator(&a, &b);
    let comm_scale = (a.norm_fro() * b.norm_fro()).max(1.0);
    let commuting = comm_norm <= tol.eps_verify * comm_scale;
    report.verdict("commuting", commuting);
    report.residual("commutator_norm", comm_norm);

    let family = property_l_pair(&a, &b, tol, seed)?;
    report.verdict("property_l", family.is_some());
    if let Some(pencillab::pencil::AffineFamily::Pencil { forms }) = &family {
        let json: Vec<serde_json::Value> = forms
            .iter()
            .map(|(c, s)| serde_json::json!({ "intercept": [c.re, c.im], "slope": [s.re, s.im] }))
            .collect();
        report.value("affine_family", serde_json::Value::Array(json));
    }

    let ok = condition.holds && family.is_some();
    Ok((report, ok))
}

#[allow(clippy::too_many_arguments)]
fn cmd_pencil_scan(
    file: &Path,
    name_a: &str,
    name_b: &str,
    center: Complex64,
    radius: f64,
    points: usize,
    emit_csv: &Option<PathBuf>,
    tol: &Tolerances,
    seed: u64,
) -> Result<(Report, bool), RunError> {
    let (a, b) = load_pair(file, name_a, name_b)?;
    let pencil = Pencil::new(a, b)?;
    let mut report = Report::new(
        format!(
            "pencil-scan {} {} {} --center {},{} --radius {} --points {}",
            file.display(),
            name_a,
            name_b,
            center.re,
            center.im,
            radius,
            points
        ),
        seed,
        tol,
    );

    let prof = profile(&pencil, tol, seed)?;
    report.value("generic_distinct_count", serde_json::json!(prof.p));
    report.verdict("discriminant_degenerate", prof.degenerate_discriminant);
    report.value(
        "exceptional_points",
        serde_json::Value::Array(prof.exceptional_points.iter().map(|&z| cx_json(z)).collect()),
    );
    report.value("samples_used", serde_json::json!(prof.samples_used));

    let mut branch_rows = Vec::new();
    for &z in &prof.exceptional_points {
        let bs = branch_structure(&pencil, z, tol)?;
        branch_rows.push(serde_json::json!({
            "center": [z.re, z.im],
            "q": bs.q,
            "cycles": bs.cycles.iter().map(|cy| serde_json::json!({
                "length": cy.length,
                "value_at_center": [cy.value_at_center.re, cy.value_at_center.im],
                "leading_term": cy.leading_term.map(|(b, order)| serde_json::json!({
                    "coefficient": [b.re, b.im],
                    "order": order,
                })),
            })).collect::<Vec<_>>(),
        }));
    }
    report.value("branch_structures", serde_json::Value::Array(branch_rows));

    if let Some(path) = emit_csv {
        let tracked = track_circle(&pencil, center, radius, points.max(8), tol)?;
        let mut csv = String::from("z_re,z_im,branch_id,lambda_re,lambda_im\n");
        for (branch_id, path_values) in tracked.paths.iter().enumerate() {
            for (j, lambda) in path_values.iter().enumerate() {
                let z = tracked.zs[j];
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    z.re, z.im, branch_id, lambda.re, lambda.im
                ));
            }
        }
        std::fs::write(path, csv).map_err(|e| RunError::Input(e.to_string()))?;
        report.note(format!("trajectories written to {}", path.display()));
    }

    Ok((report, true))
}

fn cmd_decompose(
    file: &Path,
    name: &str,
    emit_matrices: &Option<PathBuf>,
    tol: &Tolerances,
    seed: u64,
) -> Result<(Report, bool), RunError> {
    let mf = matrixfile::load(file)?;
    let m = matrixfile::to_matrix(matrixfile::lookup(&mf, name)?)?;
    let mut report = Report::new(format!("decompose {} {}", file.display(), name), seed, tol);

    let jc = jordan_chevalley(&m, tol)?;
    let (comm, nil) = jc.residuals();
    let sum_resid = (&(&jc.d + &jc.n) - &m).norm_fro() / m.norm_fro().max(1.0);
    report.residual("d_plus_n_minus_m", sum_resid);
    report.residual("dn_commutator", comm);
    report.residual("nilpotency", nil);

    let projections = eigenprojections(&m, tol)?;
    report.residual("projection_algebra", projections.algebra_residual(&m));

    let spec = spectrum(&m, tol)?;
    report.value(
        "eigenvalues",
        serde_json::Value::Array(spec.values().iter().map(|&z| cx_json(z)).collect()),
    );

    let verified = jc.verify(&m, tol)?;
    report.verdict("postconditions_hold", verified);

    report.note(format!("D =\n{}", jc.d));
    report.note(format!("N =\n{}", jc.n));

    // a unipotent input also gets its exact finite logarithm
    if let Ok(log) = unipotent_log(&m, tol) {
        let round_trip = (&expm(&log)?.value - &m).norm_fro() / m.norm_fro().max(1.0);
        report.residual("unipotent_log_round_trip", round_trip);
        report.note(format!("log (unipotent branch) =\n{log}"));
    }

    if let Some(path) = emit_matrices {
        let mut out = matrixfile::MatrixFile::new();
        out.insert(format!("{name}_D"), matrixfile::from_matrix(&jc.d));
        out.insert(format!("{name}_N"), matrixfile::from_matrix(&jc.n));
        matrixfile::save(path, &out)?;
        report.note(format!("parts written to {}", path.display()));
    }

    Ok((report, verified))
}

fn claim_label(claim: &GalleryClaim) -> String {
    match claim {
        GalleryClaim::ExpAIsIdentity => "exp_a_is_identity".into(),
        GalleryClaim::ExpBIsIdentity => "exp_b_is_identity".into(),
        GalleryClaim::ExpLineIsIdentity { t_lo, t_hi } => {
            format!("exp_line_identity_{t_lo}_to_{t_hi}")
        }
        GalleryClaim::OneSidedHolds => "one_sided_holds".into(),
        GalleryClaim::TwoSidedHolds { half_width } => format!("two_sided_holds_w{half_width}"),
        GalleryClaim::TwoSidedFails { half_width } => format!("two_sided_fails_w{half_width}"),
        GalleryClaim::TwoSidedFailsAtNegativeIndex { half_width } => {
            format!("two_sided_fails_negative_w{half_width}")
        }
        GalleryClaim::Commutes => "commutes".into(),
        GalleryClaim::CommutatorExceeds(b) => format!("commutator_exceeds_{b}"),
        GalleryClaim::PropertyL(expected) => format!("property_l_is_{expected}"),
        GalleryClaim::NoCommonEigenvector => "no_common_eigenvector".into(),
        GalleryClaim::SplittingAbsent => "splitting_absent".into(),
        GalleryClaim::MonodromyCycleAtOrigin { length } => {
            format!("monodromy_cycle_length_{length}")
        }
        GalleryClaim::ProjectionDeviationAtLeast(b) => format!("projection_deviation_ge_{b}"),
    }
}

fn cmd_gallery(
    case: &str,
    assert: bool,
    emit: &Option<PathBuf>,
    tol: &Tolerances,
    seed: u64,
) -> Result<(Report, bool), RunError> {
    let entries = if case == "all" {
        gallery()
    } else {
        vec![gallery_case(case).ok_or_else(|| {
            RunError::Input(format!(
                "unknown case {case:?}; available: {:?} or \"all\"",
                gallery().iter().map(|e| e.name).collect::<Vec<_>>()
            ))
        })?]
    };

    let mut report = Report::new(
        format!("gallery --case {case}{}", if assert { " --assert" } else { "" }),
        seed,
        tol,
    );
    let mut all_passed = true;
    for entry in &entries {
        report.note(format!("{}: {}", entry.name, entry.description));
        for claim in &entry.claims {
            let outcome = verify_claim(&entry.a, &entry.b, claim, tol, seed)?;
            all_passed &= outcome.passed;
            report.verdict(&format!("{}.{}", entry.name, claim_label(claim)), outcome.passed);
            if !outcome.passed {
                report.note(format!(
                    "  FAILED {} / {}: {}",
                    entry.name,
                    claim_label(claim),
                    outcome.detail
                ));
            }
        }
    }
    report.verdict("all_claims", all_passed);

    if let Some(path) = emit {
        let mut out = matrixfile::MatrixFile::new();
        for entry in &entries {
            // tu ships in its integer 2πi-scaled form, everything else raw
            if entry.name == "tu" {
                out.insert(
                    "A1".to_string(),
                    matrixfile::from_integer_grid(&[
                        vec![1, 0, 0],
                        vec![0, 2, 0],
                        vec![0, 0, 0],
                    ]),
                );
                out.insert(
                    "B1".to_string(),
                    matrixfile::from_integer_grid(&[
                        vec![2, 1, 1],
                        vec![1, 3, -2],
                        vec![1, 1, 0],
                    ]),
                );
            } else {
                out.insert(format!("{}_A", entry.name), matrixfile::from_matrix(&entry.a));
                out.insert(format!("{}_B", entry.name), matrixfile::from_matrix(&entry.b));
            }
        }
        matrixfile::save(path, &out)?;
        report.note(format!("pairs written to {}", path.display()));
    }

    let ok = !assert || all_passed;
    Ok((report, ok))
}
