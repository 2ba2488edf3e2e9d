//! Command-line front end for rotation/constant gate circuits: generate
//! built-in transforms, compile matrices into circuits, analyze entropy
//! trajectories and condition numbers, and run the numerical verification
//! suites. Every command is deterministic given its flags and `--seed`,
//! and machine-readable output is byte-identical across runs.
//!
//! Exit codes: 0 = all checks pass, 1 = a verification check failed,
//! 2 = usage or input error.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotent_core::lemma::{
    estimate_c0, estimate_lemma1_constant, g_phi, verify_extra_space_entropy,
    verify_gate_delta_bound, verify_perturbed_flat_row, verify_quasi_entropy_range,
};
use rotent_core::trace::{build_trace, uniform_condition_number, CondTracking, TraceOptions};
use rotent_core::transforms::{
    append_uniform_scale, dft_real_embedding, fft_circuit, walsh_hadamard_matrix, wht_circuit,
};
use rotent_core::{givens_qr_circuit, spectral_norm, svd_circuit, Circuit, DenseMatrix, Gate};
use serde::Serialize;
use std::f64::consts::{E, FRAC_PI_4, LOG2_E, TAU};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Default constant C for the per-rotation potential bound |ΔΦ| ≤ 2·C·κ,
/// rounded up from the measured supremum of the extremum-gap ratio
/// (attained at φ = π/4; `verify lemma1` re-measures it on demand).
const DEFAULT_C: f64 = 1.2716;

/// Value of the extremum-gap ratio at its peak φ = π/4.
const GAP_RATIO_PEAK: f64 = 1.271553303163612;

/// Relative drift between incremental and recomputed Φ that `analyze`
/// tolerates before reporting a failure.
const DRIFT_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "rotent",
    version,
    about = "Rotation/constant gate circuits: generation, compilation, entropy analysis, and numerical verification",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in transform circuit and write it as JSON lines.
    Gen(GenArgs),
    /// Analyze a circuit file: gate counts, condition number, entropy
    /// trajectory, and checkpoint drift.
    Analyze(AnalyzeArgs),
    /// Run a verification suite and emit one JSON verdict per check.
    Verify(VerifyArgs),
    /// Compile a CSV matrix into a rotation/constant circuit.
    Compile(CompileArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    /// Walsh–Hadamard transform on n coordinates.
    Wht,
    /// Discrete Fourier transform of size m, realized on 2m real coordinates.
    Dft,
}

#[derive(Args)]
struct GenArgs {
    /// Transform family.
    #[arg(value_enum)]
    kind: GenKind,
    /// Transform size (must be a power of two).
    size: usize,
    /// Output circuit path (JSON lines).
    output: PathBuf,
    /// Append one constant gate per coordinate, scaling the final matrix.
    #[arg(long, value_name = "FACTOR")]
    scale: Option<f64>,
    /// Print the summary as JSON instead of a human-readable line.
    #[arg(long)]
    json: bool,
    /// Write the summary to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Circuit file to analyze (JSON lines).
    circuit: PathBuf,
    /// Measure the condition number at every layer (exact uniform condition
    /// number; O(gates·n²) instead of checkpoint sampling).
    #[arg(long = "exact-cond")]
    exact_cond: bool,
    /// Write a per-step trace CSV with columns step,gate_kind,phi,phi_n,kappa.
    #[arg(long, visible_alias = "phi-trace", value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Constant C for the rotation-count reference phi_final / (2·C·R).
    #[arg(long = "C", value_name = "FLOAT")]
    c: Option<f64>,
    /// Condition budget R for the reference; defaults to the measured
    /// uniform condition number.
    #[arg(long = "R", value_name = "FLOAT")]
    r: Option<f64>,
    /// Gates between inverse-drift checkpoints (default 4·dim).
    #[arg(long = "checkpoint-every", value_name = "K")]
    checkpoint_every: Option<usize>,
    /// Write the JSON report to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed echoed into the report (the analysis itself is deterministic).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Supremum of the extremum-gap ratio over rotation quadruples.
    #[value(name = "lemma1")]
    Lemma1,
    /// Per-gate potential bound |ΔΦ| ≤ 2·C·κ over a circuit trace.
    #[value(name = "delta")]
    Delta,
    /// Two-sided range bound on the entry-entropy sum for given norms.
    #[value(name = "appendixA")]
    AppendixA,
    /// Perturbed flat-row entropy floor and its critical radius.
    #[value(name = "appendixB")]
    AppendixB,
    /// Entropy floor for transforms computed with extra workspace rows.
    #[value(name = "extra-space")]
    ExtraSpace,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verification suite to run.
    #[arg(value_enum)]
    suite: Suite,
    /// Seed shared by every randomized check in the suite.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Sample count for randomized sweeps (default 100000).
    #[arg(long)]
    samples: Option<usize>,
    /// Random directions per size for the critical-radius search.
    #[arg(long, default_value_t = 24)]
    trials: usize,
    /// Restrict size-dependent suites to a single n.
    #[arg(long)]
    n: Option<usize>,
    /// Grid resolution for angle searches.
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Circuit file for the `delta` suite.
    #[arg(long, value_name = "PATH")]
    circuit: Option<PathBuf>,
    /// Constant C for the per-gate bound (delta suite).
    #[arg(long = "C", value_name = "FLOAT")]
    c: Option<f64>,
    /// Condition budget R (extra-space suite).
    #[arg(long = "R", value_name = "FLOAT", default_value_t = 2.0)]
    r: f64,
    /// Critical-radius constant C₀ (extra-space suite).
    #[arg(long = "C0", value_name = "FLOAT", default_value_t = 0.25)]
    c0: f64,
    /// Extra workspace rows N (extra-space suite; default n·log₂n).
    #[arg(long)]
    extra: Option<usize>,
    /// Track the condition number at every layer in the delta suite.
    #[arg(long = "exact-cond")]
    exact_cond: bool,
    /// Write the JSON verdicts to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompileMode {
    /// Givens triangularization; input must be orthogonal.
    Qr,
    /// Two-sided Jacobi decomposition; input must be invertible.
    Svd,
}

#[derive(Args)]
struct CompileArgs {
    /// Decomposition used to factor the matrix into gates.
    #[arg(value_enum)]
    mode: CompileMode,
    /// Input matrix as CSV (one row per line).
    matrix: PathBuf,
    /// Output circuit path (JSON lines).
    output: PathBuf,
    /// Write the JSON result to a file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns Ok(true) when a verification check failed (exit code 1).
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Verify(args) => run_verify(args),
        Command::Compile(args) => run_compile(args),
    }
}

// ---------------------------------------------------------------------------
// Shared report pieces
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ConditionReport {
    value: f64,
    /// True when every layer was measured; otherwise the value is a lower
    /// bound on the true maximum.
    exact: bool,
}

#[derive(Serialize)]
struct Verdict {
    lemma: String,
    verdict: &'static str,
    value: f64,
    bound: f64,
    witness: Vec<f64>,
    seed: u64,
    samples: usize,
    grid: usize,
}

/// 64-bit FNV-1a over a file's bytes; stable content digest for circuits.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn file_digest(path: &Path) -> Result<String> {
    let bytes =
        fs::read(path).with_context(|| format!("cannot read {} for digest", path.display()))?;
    Ok(format!("{:016x}", fnv1a(&bytes)))
}

/// Print a JSON document to stdout, or write it to `out` when given.
fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, json + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let circuit = Circuit::read_jsonl(path)
        .with_context(|| format!("cannot read circuit {}", path.display()))?;
    let issues = circuit.validate();
    if !issues.is_empty() {
        bail!(
            "invalid circuit {}: {}",
            path.display(),
            issues.join("; ")
        );
    }
    Ok(circuit)
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GenReport {
    kind: &'static str,
    size: usize,
    dim: usize,
    io_dim: usize,
    output: String,
    rotation_count: usize,
    constant_count: usize,
    /// Max-abs difference between the circuit's defining matrix and the
    /// closed-form transform matrix.
    oracle_error: f64,
    circuit_digest: String,
}

fn run_gen(args: &GenArgs) -> Result<bool> {
    let (kind, mut circuit, mut oracle) = match args.kind {
        GenKind::Wht => (
            "wht",
            wht_circuit(args.size)?,
            walsh_hadamard_matrix(args.size)?,
        ),
        GenKind::Dft => (
            "dft",
            fft_circuit(args.size)?,
            dft_real_embedding(args.size)?,
        ),
    };
    if let Some(factor) = args.scale {
        append_uniform_scale(&mut circuit, factor)?;
        for i in 0..oracle.rows() {
            oracle.scale_row(i, factor);
        }
    }
    circuit
        .write_jsonl(&args.output)
        .with_context(|| format!("cannot write {}", args.output.display()))?;
    let oracle_error = circuit.final_matrix()?.max_abs_diff(&oracle);
    let report = GenReport {
        kind,
        size: args.size,
        dim: circuit.dim,
        io_dim: circuit.io_dim,
        output: args.output.display().to_string(),
        rotation_count: circuit.rotation_count(),
        constant_count: circuit.constant_count(),
        oracle_error,
        circuit_digest: file_digest(&args.output)?,
    };
    if args.json {
        emit_json(&args.out, &report)?;
    } else {
        let line = format!(
            "wrote {}: {} size {} on {} rows, {} rotations, {} constants, oracle error {:.3e}, digest {}",
            report.output,
            report.kind,
            report.size,
            report.dim,
            report.rotation_count,
            report.constant_count,
            report.oracle_error,
            report.circuit_digest
        );
        match &args.out {
            Some(path) => fs::write(path, line + "\n")
                .with_context(|| format!("cannot write {}", path.display()))?,
            None => println!("{line}"),
        }
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LowerBoundReference {
    /// phi_final / (2·C·R): a floor on the rotation count needed to reach
    /// this potential under condition budget R.
    value: f64,
    c_used: f64,
    r_used: f64,
    note: &'static str,
}

#[derive(Serialize)]
struct CheckpointSummary {
    count: usize,
    repaired: usize,
    max_residual: f64,
    max_phi_drift: f64,
    max_phi_n_drift: f64,
}

#[derive(Serialize)]
struct AnalysisReport {
    circuit_path: String,
    circuit_digest: String,
    /// Input/output coordinates.
    n: usize,
    /// Extra workspace coordinates beyond the first n.
    #[serde(rename = "N")]
    extra: usize,
    rotation_count: usize,
    constant_count: usize,
    uniform_condition: ConditionReport,
    phi_initial: f64,
    phi_final: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_n_final: Option<f64>,
    lower_bound_reference: LowerBoundReference,
    checkpoints: CheckpointSummary,
    seed: u64,
}

fn run_analyze(args: &AnalyzeArgs) -> Result<bool> {
    let circuit = read_circuit(&args.circuit)?;
    let extra = circuit.dim - circuit.io_dim;
    let options = TraceOptions {
        track_phi: true,
        track_phi_n: extra > 0,
        cond: if args.exact_cond {
            CondTracking::Every(1)
        } else {
            CondTracking::Checkpoints
        },
        checkpoint_every: args.checkpoint_every,
        keep_layers: false,
    };
    let trace = build_trace(&circuit, &options)?;
    if let Some(path) = &args.csv {
        write_phi_trace_csv(path, &trace)?;
    }

    let ucond = uniform_condition_number(&trace);
    let c_used = args.c.unwrap_or(DEFAULT_C);
    let r_used = args.r.unwrap_or_else(|| ucond.value.max(1.0));
    let phi_final = trace.phi_final();
    let max_phi_n_drift = trace
        .checkpoints
        .iter()
        .fold(0.0f64, |m, c| m.max(c.phi_n_drift));
    let repaired = trace.checkpoints.iter().filter(|c| c.repaired).count();
    let report = AnalysisReport {
        circuit_path: args.circuit.display().to_string(),
        circuit_digest: file_digest(&args.circuit)?,
        n: circuit.io_dim,
        extra,
        rotation_count: circuit.rotation_count(),
        constant_count: circuit.constant_count(),
        uniform_condition: ConditionReport {
            value: ucond.value,
            exact: ucond.exact,
        },
        phi_initial: trace.phi[0],
        phi_final,
        phi_n_final: trace.phi_n_final(),
        lower_bound_reference: LowerBoundReference {
            value: phi_final / (2.0 * c_used * r_used),
            c_used,
            r_used,
            note: "each rotation moves the potential by at most 2*C*kappa <= 2*C*R, \
                   so phi_final/(2*C*R) floors the rotation count; the scaling in R \
                   is 1/R (a 1/R^2 reading of the same chain is strictly looser and \
                   not used)",
        },
        checkpoints: CheckpointSummary {
            count: trace.checkpoints.len(),
            repaired,
            max_residual: trace.max_residual(),
            max_phi_drift: trace.max_phi_drift(),
            max_phi_n_drift,
        },
        seed: args.seed,
    };
    emit_json(&args.out, &report)?;

    if let Some(bad) = trace
        .checkpoints
        .iter()
        .find(|c| c.phi_drift > DRIFT_TOLERANCE || c.phi_n_drift > DRIFT_TOLERANCE)
    {
        eprintln!(
            "entropy drift at layer {}: relative drift {:.3e} exceeds {:.1e}",
            bad.layer,
            bad.phi_drift.max(bad.phi_n_drift),
            DRIFT_TOLERANCE
        );
        return Ok(true);
    }
    Ok(false)
}

fn write_phi_trace_csv(path: &Path, trace: &rotent_core::CircuitTrace) -> Result<()> {
    let mut csv = String::from("step,gate_kind,phi,phi_n,kappa\n");
    for step in 0..=trace.gates.len() {
        let kind = if step == 0 {
            "init"
        } else {
            match trace.gates[step - 1] {
                Gate::Rotation { .. } => "rot",
                Gate::Constant { .. } => "const",
            }
        };
        let phi_n = trace
            .phi_n
            .as_ref()
            .map(|v| v[step].to_string())
            .unwrap_or_default();
        let kappa = trace
            .kappa_at(step)
            .map(|k| k.to_string())
            .unwrap_or_default();
        writeln!(csv, "{step},{kind},{},{phi_n},{kappa}", trace.phi[step])
            .expect("writing to a String cannot fail");
    }
    fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn push(
    verdicts: &mut Vec<Verdict>,
    failed: &mut bool,
    lemma: &str,
    pass: bool,
    value: f64,
    bound: f64,
    witness: Vec<f64>,
    seed: u64,
    samples: usize,
    grid: usize,
) {
    *failed |= !pass;
    verdicts.push(Verdict {
        lemma: lemma.to_string(),
        verdict: if pass { "pass" } else { "fail" },
        value,
        bound,
        witness,
        seed,
        samples,
        grid,
    });
}

fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let mut verdicts = Vec::new();
    let mut failed = false;

    match args.suite {
        Suite::Lemma1 => {
            let samples = args.samples.unwrap_or(100_000);
            let estimate = estimate_lemma1_constant(samples, args.grid, args.seed);
            push(
                &mut verdicts,
                &mut failed,
                "extremum-gap-ratio-sup",
                (1.0 - 1e-9..=2.0).contains(&estimate.value),
                estimate.value,
                2.0,
                estimate.worst_case_witness.clone(),
                args.seed,
                estimate.sample_count,
                estimate.grid_resolution,
            );
            let peak = g_phi(FRAC_PI_4)?;
            push(
                &mut verdicts,
                &mut failed,
                "gap-ratio-peak-value",
                (peak - GAP_RATIO_PEAK).abs() <= 1e-9,
                peak,
                GAP_RATIO_PEAK,
                vec![FRAC_PI_4],
                args.seed,
                0,
                0,
            );
        }
        Suite::Delta => {
            let Some(path) = &args.circuit else {
                bail!("the delta suite needs --circuit <PATH>");
            };
            let circuit = read_circuit(path)?;
            let options = TraceOptions {
                track_phi: true,
                track_phi_n: false,
                cond: if args.exact_cond || circuit.dim <= 256 {
                    CondTracking::Every(1)
                } else {
                    CondTracking::Checkpoints
                },
                checkpoint_every: None,
                keep_layers: false,
            };
            let trace = build_trace(&circuit, &options)?;
            let c_used = args.c.unwrap_or(DEFAULT_C);
            let report = verify_gate_delta_bound(&trace, c_used);
            let rotation_violations: Vec<&_> =
                report.violations.iter().filter(|v| v.rotation).collect();
            let witness = rotation_violations
                .first()
                .map(|v| vec![v.layer as f64, v.delta, v.bound])
                .unwrap_or_default();
            push(
                &mut verdicts,
                &mut failed,
                "per-rotation-potential-bound",
                rotation_violations.is_empty(),
                report.max_rotation_ratio,
                1.0,
                witness,
                args.seed,
                report.checked_gates,
                0,
            );
            let constant_violations: Vec<&_> =
                report.violations.iter().filter(|v| !v.rotation).collect();
            let witness = constant_violations
                .first()
                .map(|v| vec![v.layer as f64, v.delta, v.bound])
                .unwrap_or_default();
            push(
                &mut verdicts,
                &mut failed,
                "constant-gate-invariance",
                constant_violations.is_empty(),
                report.max_constant_delta,
                1e-9,
                witness,
                args.seed,
                report.checked_gates,
                0,
            );
        }
        Suite::AppendixA => {
            range_bound_suite(args, &mut verdicts, &mut failed)?;
        }
        Suite::AppendixB => {
            flat_row_suite(args, &mut verdicts, &mut failed)?;
        }
        Suite::ExtraSpace => {
            extra_space_suite(args, &mut verdicts, &mut failed)?;
        }
    }

    emit_json(&args.out, &verdicts)?;
    Ok(failed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u1: f64 = rng.gen();
        if u1 > 1e-300 {
            let u2: f64 = rng.gen();
            return (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos();
        }
    }
}

/// Gaussian direction scaled to exactly the requested Euclidean norm.
fn random_vector_with_norm(rng: &mut ChaCha8Rng, n: usize, norm: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1e-12 {
            return v.into_iter().map(|x| x * norm / len).collect();
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Randomized sweep of the two-sided range bound |Σ f̂(x_i, y_i)| ≤
/// αβ·log₂ n + |αβ·log₂(αβ)|, plus its known sharpness and corner cases.
///
/// The bound holds for every n ≥ 3; any violation there fails the suite.
/// At n = 2 the bound can be exceeded by at most (2/e)·log₂ e − 1 per unit
/// of αβ (products pinned at 1/e), so the checks at n = 2 are (a) observed
/// excesses stay under that analytic ceiling and (b) the closed-form
/// extremal pair is correctly flagged.
fn range_bound_suite(
    args: &VerifyArgs,
    verdicts: &mut Vec<Verdict>,
    failed: &mut bool,
) -> Result<()> {
    let sizes: Vec<usize> = match args.n {
        Some(n) => {
            if n < 2 {
                bail!("range-bound sizes must be at least 2, got {n}");
            }
            vec![n]
        }
        None => vec![2, 3, 4, 6, 8, 16, 64, 256],
    };
    let samples = args.samples.unwrap_or(100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    let mut n3_violations = 0usize;
    let mut worst_n3 = (0.0f64, Vec::new());
    let mut n2_hits = 0usize;
    let mut worst_n2_scaled = (0.0f64, Vec::new());
    for trial in 0..samples {
        let n = sizes[trial % sizes.len()];
        let alpha = log_uniform(&mut rng, 1e-3, 1e3);
        let beta = log_uniform(&mut rng, 1e-3, 1e3);
        let x = random_vector_with_norm(&mut rng, n, alpha);
        let y = random_vector_with_norm(&mut rng, n, beta);
        let check = verify_quasi_entropy_range(&x, &y)?;
        if !check.ok {
            let scaled_excess = (check.value - check.bound) / (alpha * beta);
            if n >= 3 {
                n3_violations += 1;
                if scaled_excess > worst_n3.0 {
                    worst_n3 = (scaled_excess, vec![n as f64, check.value, check.bound]);
                }
            } else {
                n2_hits += 1;
                if scaled_excess > worst_n2_scaled.0 {
                    let pair = x.iter().chain(y.iter()).copied().collect();
                    worst_n2_scaled = (scaled_excess, pair);
                }
            }
        }
    }
    push(
        verdicts,
        failed,
        "range-bound-sweep-n3plus",
        n3_violations == 0,
        worst_n3.0,
        0.0,
        worst_n3.1,
        args.seed,
        samples,
        0,
    );

    // Sharpness: the flat pair x = y = (1/√n, …) attains the bound exactly.
    let mut worst_slack = 0.0f64;
    for &n in &sizes {
        let flat = vec![1.0 / (n as f64).sqrt(); n];
        let check = verify_quasi_entropy_range(&flat, &flat)?;
        worst_slack = worst_slack.max(check.slack.abs());
    }
    push(
        verdicts,
        failed,
        "range-bound-flat-attainment",
        worst_slack <= 1e-9,
        worst_slack,
        1e-9,
        Vec::new(),
        args.seed,
        sizes.len(),
        0,
    );

    // n = 2 corner: excesses exist but never beyond the analytic ceiling.
    let max_two_dim_excess = (2.0 / E) * LOG2_E - 1.0;
    push(
        verdicts,
        failed,
        "range-bound-two-dim-excess",
        worst_n2_scaled.0 <= max_two_dim_excess + 1e-9,
        worst_n2_scaled.0,
        max_two_dim_excess,
        worst_n2_scaled.1,
        args.seed,
        n2_hits,
        0,
    );

    // The closed-form extremal pair (products pinned at 1/e) must be flagged
    // with exactly the analytic value (2/e)·log₂ e.
    let t = 0.5 * (2.0 / E).asin();
    let x = [t.cos(), t.sin()];
    let y = [t.sin(), t.cos()];
    let check = verify_quasi_entropy_range(&x, &y)?;
    let expected = (2.0 / E) * LOG2_E;
    push(
        verdicts,
        failed,
        "range-bound-two-dim-witness",
        !check.ok && (check.value - expected).abs() <= 1e-12,
        check.value,
        expected,
        vec![x[0], x[1], y[0], y[1]],
        args.seed,
        1,
        0,
    );
    Ok(())
}

/// Perturbed flat-row entropy floor: the unperturbed row sits exactly at
/// log₂ n, small perturbations stay above (3/4)·log₂ n, and the critical
/// radius where some direction first crosses the floor is estimated by
/// bisection. The window check asks for the estimate to land in
/// (0.05, 0.25); measured thresholds decrease toward ≈0.278 as n grows, so
/// that check reports honestly and fails while the floor checks pass.
fn flat_row_suite(
    args: &VerifyArgs,
    verdicts: &mut Vec<Verdict>,
    failed: &mut bool,
) -> Result<()> {
    let n_list: Vec<usize> = match args.n {
        Some(n) => {
            if n < 2 {
                bail!("flat-row sizes must be at least 2, got {n}");
            }
            vec![n]
        }
        None => vec![16, 64, 256, 1024, 4096],
    };

    let mut worst_dev = 0.0f64;
    let mut all_ok = true;
    for &n in &n_list {
        let check = verify_perturbed_flat_row(n, &vec![0.0; n])?;
        worst_dev = worst_dev.max((check.value - (n as f64).log2()).abs());
        all_ok &= check.ok;
    }
    push(
        verdicts,
        failed,
        "flat-row-identity",
        all_ok && worst_dev <= 1e-9,
        worst_dev,
        1e-9,
        Vec::new(),
        args.seed,
        n_list.len(),
        0,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst_margin = f64::INFINITY;
    let mut all_ok = true;
    let mut witness = Vec::new();
    for &n in &n_list {
        for _ in 0..10 {
            let radius = 0.05 * rng.gen::<f64>();
            let eps = random_vector_with_norm(&mut rng, n, radius);
            let check = verify_perturbed_flat_row(n, &eps)?;
            let margin = check.value - check.bound;
            if margin < worst_margin {
                worst_margin = margin;
                witness = vec![n as f64, radius, check.value, check.bound];
            }
            all_ok &= check.ok;
        }
    }
    push(
        verdicts,
        failed,
        "flat-row-perturbed",
        all_ok,
        worst_margin,
        0.0,
        witness,
        args.seed,
        n_list.len() * 10,
        0,
    );

    let report = estimate_c0(&n_list, args.trials, args.seed)?;
    let estimate = report.estimate.value;
    let witness: Vec<f64> = report
        .per_n
        .iter()
        .flat_map(|p| [p.n as f64, p.threshold])
        .collect();
    push(
        verdicts,
        failed,
        "critical-radius-window",
        estimate > 0.05 && estimate < 0.25,
        estimate,
        0.25,
        witness,
        args.seed,
        args.trials,
        0,
    );
    Ok(())
}

/// Entropy floor for a transform computed with extra workspace rows: a clean
/// block embedding and a perturbed one (small garbage block) must clear
/// every hypothesis and the (1/4)·n·log₂ n − n/2 floor, while the identity
/// over the same coordinates must be flagged as failing the hypothesis.
fn extra_space_suite(
    args: &VerifyArgs,
    verdicts: &mut Vec<Verdict>,
    failed: &mut bool,
) -> Result<()> {
    let n = args.n.unwrap_or(64);
    let extra = args
        .extra
        .unwrap_or(((n as f64) * (n as f64).log2()) as usize);
    let side = n + extra;
    let wht = walsh_hadamard_matrix(n)?;
    let mut clean = DenseMatrix::identity(side);
    for i in 0..n {
        for j in 0..n {
            clean.set(i, j, wht.get(i, j));
        }
    }
    let report = verify_extra_space_entropy(&clean, n, extra, args.r, args.c0)?;
    push(
        verdicts,
        failed,
        "extra-space-clean",
        report.all_ok(),
        report.phi_n,
        report.phi_n_floor,
        vec![
            report.top_block_error,
            report.garbage_norm,
            report.error_block_norm,
        ],
        args.seed,
        1,
        0,
    );

    // Fill the garbage block (rows n..n+N over the first n columns) with a
    // random matrix scaled to 80% of the allowed spectral budget C₀/R.
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut garbage = DenseMatrix::zeros(extra, n);
    for i in 0..extra {
        for j in 0..n {
            garbage.set(i, j, gaussian(&mut rng));
        }
    }
    let norm = spectral_norm(&garbage).value;
    let target = 0.8 * args.c0 / args.r;
    let mut perturbed = clean.clone();
    for i in 0..extra {
        for j in 0..n {
            perturbed.set(n + i, j, garbage.get(i, j) * target / norm);
        }
    }
    let report = verify_extra_space_entropy(&perturbed, n, extra, args.r, args.c0)?;
    push(
        verdicts,
        failed,
        "extra-space-perturbed",
        report.all_ok(),
        report.phi_n,
        report.phi_n_floor,
        vec![
            report.top_block_error,
            report.garbage_norm,
            report.error_block_norm,
        ],
        args.seed,
        1,
        0,
    );

    let identity = DenseMatrix::identity(side);
    let report = verify_extra_space_entropy(&identity, n, extra, args.r, args.c0)?;
    push(
        verdicts,
        failed,
        "extra-space-identity-flagged",
        !report.hypothesis_ok && !report.all_ok(),
        report.phi_n,
        report.phi_n_floor,
        vec![report.top_block_error],
        args.seed,
        1,
        0,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// compile
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CompileReport {
    mode: &'static str,
    matrix_path: String,
    circuit_path: String,
    circuit_digest: String,
    dim: usize,
    rotation_count: usize,
    constant_count: usize,
    reconstruction_error: f64,
    uniform_condition: ConditionReport,
}

fn run_compile(args: &CompileArgs) -> Result<bool> {
    let matrix = DenseMatrix::read_csv(&args.matrix)
        .with_context(|| format!("cannot read matrix {}", args.matrix.display()))?;
    let (mode, result) = match args.mode {
        CompileMode::Qr => ("qr", givens_qr_circuit(&matrix)?),
        CompileMode::Svd => ("svd", svd_circuit(&matrix)?),
    };
    result
        .circuit
        .write_jsonl(&args.output)
        .with_context(|| format!("cannot write {}", args.output.display()))?;
    let report = CompileReport {
        mode,
        matrix_path: args.matrix.display().to_string(),
        circuit_path: args.output.display().to_string(),
        circuit_digest: file_digest(&args.output)?,
        dim: matrix.rows(),
        rotation_count: result.rotation_count,
        constant_count: result.constant_count,
        reconstruction_error: result.reconstruction_error,
        uniform_condition: ConditionReport {
            value: result.uniform_condition,
            exact: result.uniform_condition_exact,
        },
    };
    emit_json(&args.out, &report)?;
    Ok(false)
}
