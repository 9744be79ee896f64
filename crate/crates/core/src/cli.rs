//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a checked invariant failed, 2 bad input.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::analytics::{self, OverheadParams};
use crate::concat::{build_lookup_decoder, concatenate, judge_correction, ConcatenatedCode, CorrectionOutcome, InnerKind};
use crate::eightqubit::{EightQubitCode, MemoryConfig, Sampler};
use crate::error::{Error, Result};
use crate::pauli::MATRIX_QUBIT_LIMIT;
use crate::stabilizer::{Check, StabilizerCode};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x00C0_FFEE;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "CE_QEC_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ce-qec", version, about = "Constant-excitation concatenated codes: construction, verification, simulation and analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Concatenate an outer stabilizer code with REP2 or its rotated dual-rail
    /// form (KLM) and write the resulting code, rotation, syndrome offsets and
    /// word operators as JSON.
    Build {
        /// Built-in code name (REP2, LNCY4, STEANE7) or path to a code JSON file.
        #[arg(long)]
        outer: String,
        /// Inner code: REP2 or KLM.
        #[arg(long, default_value = "KLM")]
        inner: String,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive a concatenated code file and check stabilizer validity, the
    /// constant-excitation property (for KLM) and that the rotated decoder
    /// corrects every weight-1 Pauli the distance guarantees.
    Verify {
        /// Path to a file written by `build`.
        code: PathBuf,
    },
    /// Knill-Laflamme check of the eight-qubit code against amplitude damping:
    /// Gram tensor of the no-jump and single-jump Kraus operators on the
    /// codewords, with the per-operator constants g_a.
    Klcheck {
        /// Damping probability in [0, 1].
        #[arg(long)]
        gamma: f64,
    },
    /// Memory failure versus time: unprotected decay probability, binomial
    /// failure of the eight-qubit code, and its 28 eps_base^2 bound, as CSV.
    MemoryCurve {
        /// Per-step damping probability.
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        /// Largest timestep T.
        #[arg(long, default_value_t = 1500)]
        tmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Concatenation level needed to reach a target failure rate, for a
    /// generic code under the twirled depolarizing rate versus a rotated
    /// constant-excitation code, across the stochastic fraction lambda (CSV).
    Overhead {
        /// Depolarizing rate of the stochastic part.
        #[arg(long, default_value_t = 0.0005)]
        p: f64,
        /// sin^2 of the coherent rotation angle.
        #[arg(long, default_value_t = 0.005, conflicts_with = "theta")]
        sin2_theta: f64,
        /// Coherent rotation angle in radians (alternative to --sin2-theta).
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        q_th: f64,
        #[arg(long, default_value_t = 0.005)]
        p_th: f64,
        #[arg(long, default_value_t = 1e-12)]
        p_fail: f64,
        /// Block length for the exact twirled rate.
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Use the exact twirled rate at --n for the generic code instead of
        /// its n-independent upper bound.
        #[arg(long)]
        exact_q: bool,
        /// Report generic points needing more than this many levels as NA.
        #[arg(long)]
        t_cap: Option<u64>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 1e-12)]
        lambda_min: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo memory experiment on the eight-qubit code: T rounds of
    /// amplitude damping on every qubit, then syndrome extraction and
    /// recovery; reports failure counts with a Wilson 95% interval as JSON.
    Simulate {
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
        #[arg(long, default_value_t = 200)]
        steps: u64,
        #[arg(long, default_value_t = 100_000)]
        trajectories: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SamplerArg::Sparse)]
        sampler: SamplerArg,
        /// Polar angle of the stored logical state on the Bloch sphere.
        #[arg(long, default_value_t = 1.2)]
        bloch_theta: f64,
        /// Azimuthal angle of the stored logical state.
        #[arg(long, default_value_t = 0.7)]
        bloch_phi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SamplerArg {
    Sparse,
    Dense,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_INVARIANT,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => {
            let mut h = io::stdout().lock();
            h.write_all(body.as_bytes())?;
            h.flush()?;
        }
    }
    Ok(())
}

fn check_prob(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{name} = {x} is not in [0, 1]")));
    }
    Ok(())
}

fn resolve_outer(arg: &str) -> Result<StabilizerCode> {
    match StabilizerCode::builtin(arg) {
        Ok(c) => Ok(c),
        Err(Error::UnknownCode(_)) if Path::new(arg).exists() => StabilizerCode::from_json(&fs::read_to_string(arg)?),
        Err(e) => Err(e),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::InvalidParameter(e.to_string()))
}

fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Build { outer, inner, out } => {
            let outer = resolve_outer(&outer)?;
            let inner: InnerKind = inner.parse()?;
            let cc = concatenate(&outer, inner)?;
            emit(out.as_deref(), &(cc.to_json()? + "\n"))?;
            Ok(true)
        }
        Command::Verify { code } => {
            let text = fs::read_to_string(&code)?;
            let cc = ConcatenatedCode::from_json(&text)?;
            let report = verify(&cc)?;
            emit(None, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(report.passed)
        }
        Command::Klcheck { gamma } => {
            check_prob("gamma", gamma)?;
            let report = EightQubitCode::new()?.kl_check(gamma)?;
            emit(None, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(report.passed)
        }
        Command::MemoryCurve { delta, tmax, out } => {
            check_prob("delta", delta)?;
            let pts = analytics::memory_curve(delta, tmax)?;
            let mut buf = Vec::new();
            analytics::write_memory_csv(&pts, &mut buf)?;
            emit(out.as_deref(), &String::from_utf8_lossy(&buf))?;
            Ok(true)
        }
        Command::Overhead {
            p,
            sin2_theta,
            theta,
            q_th,
            p_th,
            p_fail,
            n,
            exact_q,
            t_cap,
            points,
            lambda_min,
            lambda_max,
            out,
        } => {
            check_prob("p", p)?;
            check_prob("sin2-theta", sin2_theta)?;
            check_prob("q-th", q_th)?;
            check_prob("p-th", p_th)?;
            check_prob("p-fail", p_fail)?;
            check_prob("lambda-min", lambda_min)?;
            check_prob("lambda-max", lambda_max)?;
            if points == 0 || lambda_min <= 0.0 || lambda_min > lambda_max || n == 0 {
                return Err(Error::InvalidParameter(
                    "need points ≥ 1, n ≥ 1 and 0 < lambda-min ≤ lambda-max".into(),
                ));
            }
            let params = OverheadParams {
                p,
                theta: theta.unwrap_or_else(|| analytics::theta_from_sin2(sin2_theta)),
                q_th,
                p_th,
                p_fail,
                n,
                use_exact_q: exact_q,
                t_cap,
            };
            let grid = analytics::log_grid(lambda_min, lambda_max, points);
            let pts = analytics::overhead_curve(&grid, &params)?;
            let mut buf = Vec::new();
            analytics::write_overhead_csv(&pts, &mut buf)?;
            emit(out.as_deref(), &String::from_utf8_lossy(&buf))?;
            Ok(true)
        }
        Command::Simulate {
            delta,
            steps,
            trajectories,
            seed,
            sampler,
            bloch_theta,
            bloch_phi,
            out,
        } => {
            check_prob("delta", delta)?;
            if trajectories == 0 {
                return Err(Error::InvalidParameter("trajectories must be at least 1".into()));
            }
            let logical = [
                Complex64::new((bloch_theta / 2.0).cos(), 0.0),
                Complex64::from_polar((bloch_theta / 2.0).sin(), bloch_phi),
            ];
            let cfg = MemoryConfig {
                logical,
                delta,
                steps,
                trajectories,
                seed,
                sampler: match sampler {
                    SamplerArg::Sparse => Sampler::Sparse,
                    SamplerArg::Dense => Sampler::Dense,
                },
            };
            let code = EightQubitCode::new()?;
            let summary = thread_pool()?.install(|| code.simulate_memory(&cfg))?;
            emit(out.as_deref(), &(serde_json::to_string_pretty(&summary)? + "\n"))?;
            Ok(true)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DecoderCheck {
    pub errors_tested: usize,
    pub corrected: usize,
    pub logical_errors: usize,
    pub uncorrectable: usize,
    /// Whether the distance hint guarantees weight-1 correction.
    pub required: bool,
    /// Statevector round-trips with fidelity ≥ 1 − 1e−10, when the code is small enough.
    pub statevector_round_trips: Option<usize>,
    pub first_failure: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub inner_kind: InnerKind,
    pub checks: Vec<Check>,
    pub constant_excitation: Option<crate::concat::ExcitationReport>,
    pub decoder: DecoderCheck,
    pub passed: bool,
}

fn check(name: &str, passed: bool, detail: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// The checks behind `verify`; see the subcommand help.
pub fn verify(cc: &ConcatenatedCode) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let fresh = cc.rederive()?;
    checks.push(check(
        "matches re-derivation from outer code",
        &fresh == cc,
        (&fresh != cc).then(|| "stored generators, rotation or word data differ".to_string()),
    ));
    for (label, code) in [("lifted code valid", &cc.lifted), ("code valid", &cc.code)] {
        let r = code.validate();
        let first = r.failures().next().map(|f| format!("{}: {}", f.name, f.detail.clone().unwrap_or_default()));
        checks.push(check(label, r.passed(), first));
    }
    let r_ok = cc
        .lifted
        .generators
        .iter()
        .zip(&cc.r_vector)
        .all(|(g, r)| g.symplectic_inner_product(&cc.rotation).ok() == Some(*r));
    checks.push(check("r_vector equals generator/rotation products", r_ok, None));

    let n = cc.n_physical();
    let small = n <= MATRIX_QUBIT_LIMIT;
    let constant_excitation = if small { Some(cc.is_constant_excitation()?) } else { None };
    if cc.inner_kind == InnerKind::Klm {
        match &constant_excitation {
            Some(ce) => checks.push(check(
                "constant excitation",
                ce.constant,
                (!ce.constant).then(|| format!("weights {:?}", ce.weights)),
            )),
            None => checks.push(check("constant excitation", true, Some("skipped: code too large".into()))),
        }
    }

    let table = build_lookup_decoder(cc, 1)?;
    let required = cc.outer.distance_hint.is_some_and(|d| d >= 3);
    let errors = crate::concat::paulis_of_weight(n, 1);
    let mut dc = DecoderCheck {
        errors_tested: errors.len(),
        corrected: 0,
        logical_errors: 0,
        uncorrectable: 0,
        required,
        statevector_round_trips: None,
        first_failure: None,
    };
    let basis = if small { Some(cc.codespace_basis()?) } else { None };
    let probe = basis.as_ref().map(|b| {
        // fixed generic superposition of the first two basis states
        let mut v = b[0].clone();
        if b.len() > 1 {
            let amps: Vec<Complex64> = b[0]
                .amplitudes()
                .iter()
                .zip(b[1].amplitudes())
                .map(|(x, y)| x * 0.6 + y * Complex64::new(0.0, 0.8))
                .collect();
            v = crate::sim::StateVector::from_amplitudes(n, amps).expect("same size");
        }
        v
    });
    let mut round_trips = 0;
    for e in &errors {
        let outcome = judge_correction(cc, &table, e)?;
        match outcome {
            CorrectionOutcome::Corrected => dc.corrected += 1,
            CorrectionOutcome::LogicalError => dc.logical_errors += 1,
            CorrectionOutcome::Uncorrectable => dc.uncorrectable += 1,
        }
        if outcome != CorrectionOutcome::Corrected && dc.first_failure.is_none() {
            dc.first_failure = Some(format!("{e}: {outcome:?}"));
        }
        if let (Some(psi), CorrectionOutcome::Corrected) = (&probe, outcome) {
            let s = cc.syndrome_of(e)?;
            let corr = match cc.inner_kind {
                InnerKind::Klm => table.decode_klm(&s)?,
                InnerKind::Rep2 => table.decode_rep2(&s)?,
            };
            let fixed = psi.clone().with_pauli(e)?.with_pauli(&corr)?;
            if psi.fidelity(&fixed)? >= 1.0 - 1e-10 {
                round_trips += 1;
            }
        }
    }
    if probe.is_some() {
        dc.statevector_round_trips = Some(round_trips);
    }
    let decoder_ok = !required || (dc.corrected == dc.errors_tested && dc.statevector_round_trips.is_none_or(|r| r == dc.corrected));
    checks.push(check(
        "weight-1 decoding",
        decoder_ok,
        dc.first_failure.clone().filter(|_| required),
    ));

    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        name: cc.code.name.clone(),
        n,
        k: cc.code.k,
        inner_kind: cc.inner_kind,
        checks,
        constant_excitation,
        decoder: dc,
        passed,
    })
}
