//! Batch front door: analyze supports, synthesize and store circuit
//! programs, certify them numerically and run robustness sweeps.
//!
//! Exit codes: 0 success, 1 input error, 2 no protocol found or
//! verification failure.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use revq_core::{
    analysis, build_conjugation_certificate, certify_program, find_anticommute_cover,
    find_even_y_violation_subset, find_odd_identity_subset, find_single_query_conjugator,
    find_single_query_inverter, find_single_query_transposer, find_split_certificate,
    robustness_sweep, synth_commuting_inverse, synth_conjugate, synth_single_query,
    synth_split_inverse, AnalysisError, CircuitProgram, PauliSupport, Task, DEFAULT_SIM_CAP,
    MAX_SIM_CAP,
};

use output::{AnalysisSummary, CertificateSummary, OracleReport, SingleQueryReport};

#[derive(Parser)]
#[command(name = "revq", version, about = "Decide, synthesize and certify Pauli-frame protocols that invert, conjugate or transpose an unknown structured evolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Invert,
    Conjugate,
    Transpose,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Task {
        match t {
            TaskArg::Invert => Task::Invert,
            TaskArg::Conjugate => Task::Conjugate,
            TaskArg::Transpose => Task::Transpose,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    /// Odd-cardinality subset with product proportional to identity.
    OddIdentity,
    /// Identity-product subset with an odd number of even-Y members.
    EvenY,
}

#[derive(Args)]
struct CommonLimits {
    /// Subset-search cap for split/conjugation searches and oracles.
    #[arg(long, env = "REVQ_CAP")]
    cap: Option<usize>,
    /// Dense simulator cap in qubits (default 8, hard max 10).
    #[arg(long, env = "REVQ_MAX_QUBITS", default_value_t = DEFAULT_SIM_CAP)]
    max_qubits: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide which protocol applies and report certificates.
    Analyze {
        support_file: PathBuf,
        #[arg(long, value_enum)]
        task: TaskArg,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        limits: CommonLimits,
    },
    /// Synthesize a circuit program for the task.
    Synth {
        support_file: PathBuf,
        #[arg(long, value_enum)]
        task: TaskArg,
        /// Write the circuit file here; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        limits: CommonLimits,
    },
    /// Certify a circuit file against its support numerically.
    Verify {
        support_file: PathBuf,
        circuit_file: PathBuf,
        #[arg(long, env = "REVQ_SAMPLES", default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "REVQ_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "REVQ_TOL", default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        limits: CommonLimits,
    },
    /// Sweep support-violating noise strengths.
    Robustness {
        support_file: PathBuf,
        circuit_file: PathBuf,
        /// Comma-separated noise strengths, e.g. 0,0.001,0.01.
        #[arg(long, env = "REVQ_DELTAS")]
        deltas: String,
        #[arg(long, env = "REVQ_SAMPLES", default_value_t = 1000)]
        samples: usize,
        #[arg(long, env = "REVQ_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Write the sweep as CSV to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: CommonLimits,
    },
    /// Run a brute-force subset oracle and print any witness.
    Oracle {
        support_file: PathBuf,
        #[arg(long, value_enum, default_value = "odd-identity")]
        which: OracleKind,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        limits: CommonLimits,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze { support_file, task, json, limits } => {
            let support = load_support(&support_file)?;
            let summary = analyze(&support, task.into(), &limits)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print!("{}", summary.to_text());
            }
            Ok(if summary.query_count.is_some() { 0 } else { 2 })
        }
        Command::Synth { support_file, task, out, json, limits } => {
            let support = load_support(&support_file)?;
            let summary = analyze(&support, task.into(), &limits)?;
            let Some(program) = synthesize(&support, &summary)? else {
                if json {
                    println!("{}", serde_json::to_string_pretty(&summary)?);
                } else {
                    print!("{}", summary.to_text());
                }
                return Ok(2);
            };
            let text = program.render();
            if let Some(path) = &out {
                std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            if json {
                let mut value = serde_json::to_value(&summary)?;
                value["out"] = match &out {
                    Some(p) => serde_json::Value::String(p.display().to_string()),
                    None => serde_json::Value::Null,
                };
                println!("{}", serde_json::to_string_pretty(&value)?);
            } else {
                println!("method: {}", summary.status);
                println!("queries: {}", program.query_count());
                if out.is_none() {
                    print!("{text}");
                }
            }
            Ok(0)
        }
        Command::Verify { support_file, circuit_file, samples, seed, tol, json, limits } => {
            let support = load_support(&support_file)?;
            let program = load_program(&circuit_file)?;
            check_sim_cap(&limits)?;
            let report =
                certify_program(&support, &program, program.task(), samples, seed, tol, limits.max_qubits)
                    .map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(if report.pass { 0 } else { 2 })
        }
        Command::Robustness { support_file, circuit_file, deltas, samples, seed, json, out, limits } => {
            let support = load_support(&support_file)?;
            let program = load_program(&circuit_file)?;
            check_sim_cap(&limits)?;
            let deltas = parse_deltas(&deltas)?;
            let table = robustness_sweep(&support, &program, &deltas, samples, seed, limits.max_qubits)
                .map_err(|e| anyhow!("{e}"))?;
            if let Some(path) = &out {
                std::fs::write(path, table.to_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&table)?);
            } else {
                println!("task: {}   samples: {}   seed: {}", table.task, table.samples, table.seed);
                print!("{}", table.to_text());
            }
            Ok(0)
        }
        Command::Oracle { support_file, which, json, limits } => {
            let support = load_support(&support_file)?;
            let cap = limits.cap.unwrap_or(analysis::DEFAULT_ORACLE_CAP);
            let witness = match which {
                OracleKind::OddIdentity => find_odd_identity_subset(&support, cap),
                OracleKind::EvenY => find_even_y_violation_subset(&support, cap),
            }
            .map_err(|e| anyhow!("{e}"))?;
            let report = OracleReport::new(&support, which_name(which), witness);
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(0)
        }
    }
}

fn which_name(which: OracleKind) -> &'static str {
    match which {
        OracleKind::OddIdentity => "odd-identity",
        OracleKind::EvenY => "even-y",
    }
}

fn load_support(path: &Path) -> Result<PauliSupport> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    PauliSupport::parse_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_program(path: &Path) -> Result<CircuitProgram> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CircuitProgram::parse_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn check_sim_cap(limits: &CommonLimits) -> Result<()> {
    if limits.max_qubits > MAX_SIM_CAP {
        return Err(anyhow!("--max-qubits {} exceeds the hard maximum of {MAX_SIM_CAP}", limits.max_qubits));
    }
    if limits.max_qubits > DEFAULT_SIM_CAP {
        eprintln!(
            "warning: simulating {} qubits ({}x{} dense matrices); this may be slow",
            limits.max_qubits,
            1usize << limits.max_qubits,
            1usize << limits.max_qubits
        );
    }
    Ok(())
}

fn parse_deltas(text: &str) -> Result<Vec<f64>> {
    let deltas: Vec<f64> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| anyhow!("invalid delta `{s}`")))
        .collect::<Result<_>>()?;
    if deltas.is_empty() {
        return Err(anyhow!("--deltas must list at least one value"));
    }
    Ok(deltas)
}

/// Runs the decision chain for a task and collects the summary.
fn analyze(support: &PauliSupport, task: Task, limits: &CommonLimits) -> Result<AnalysisSummary> {
    let split_cap = limits.cap.unwrap_or(analysis::DEFAULT_SPLIT_CAP);
    let oracle_cap = limits.cap.unwrap_or(analysis::DEFAULT_ORACLE_CAP);
    let mut summary = AnalysisSummary::new(support, task);
    summary.cap = limits.cap;

    let single = match task {
        Task::Invert => find_single_query_inverter(support),
        Task::Conjugate => find_single_query_conjugator(support),
        Task::Transpose => find_single_query_transposer(support),
    };
    if let Some(v) = &single {
        validate_pattern(support, task, v)?;
    }
    summary.single_query = Some(SingleQueryReport {
        feasible: single.is_some(),
        v: single.as_ref().map(|v| v.word_string()),
    });
    if let Some(v) = single {
        summary.status = "single_query".into();
        summary.query_count = Some(1);
        summary.certificate = Some(CertificateSummary::single(&v));
        return Ok(summary);
    }

    // Single-query infeasibility is exact (the affine system is a complete
    // criterion); attach a brute-force witness when enumeration is in reach.
    let witness = match task {
        Task::Invert => find_odd_identity_subset(support, oracle_cap),
        Task::Conjugate => find_even_y_violation_subset(support, oracle_cap),
        Task::Transpose => Ok(None),
    };
    match witness {
        Ok(Some(indices)) => {
            summary.single_query_witness =
                Some(indices.iter().map(|&i| support.terms()[i].word_string()).collect());
        }
        Ok(None) => {}
        Err(AnalysisError::CapExceeded { .. }) => {
            summary.notes.push(format!(
                "witness enumeration skipped: support exceeds the cap of {oracle_cap}"
            ));
        }
    }

    match task {
        Task::Invert => {
            summary.pairwise_commuting = Some(revq_core::check_pairwise_commuting(support));
            if summary.pairwise_commuting == Some(true) {
                let cover = find_anticommute_cover(support);
                let l = cover.elements.len();
                summary.status = "commuting_cover".into();
                summary.certificate = Some(CertificateSummary::cover(&cover));
                if l < usize::BITS as usize {
                    summary.query_count = Some((1usize << l) - 1);
                }
                match synth_commuting_inverse(&cover) {
                    Ok(program) => {
                        // The sign-replay check is exact for commuting
                        // supports; a failure here is an internal error.
                        let signs = revq_core::target_signs(support, Task::Invert);
                        if !revq_core::verify_commuting_plan(support, &program, &signs)
                            .map_err(|e| anyhow!("{e}"))?
                        {
                            return Err(anyhow!("internal error: cover program failed the sign replay"));
                        }
                    }
                    Err(e) => summary.notes.push(format!("program not materialized: {e}")),
                }
            } else {
                match find_split_certificate(support, split_cap) {
                    Ok(Some(cert)) => {
                        let program =
                            synth_split_inverse(support, &cert).map_err(|e| anyhow!("{e}"))?;
                        summary.status = "split".into();
                        summary.query_count = Some(program.query_count());
                        summary.certificate = Some(CertificateSummary::split(support, &cert));
                    }
                    Ok(None) => {
                        summary.status = "no_protocol_found".into();
                        summary.notes.push(
                            "split search exhausted; the split conditions are sufficient, not necessary, so this is not a proof of impossibility".into(),
                        );
                    }
                    Err(AnalysisError::CapExceeded { cap, size, .. }) => {
                        summary.status = "not_found_under_cap".into();
                        summary.notes.push(format!(
                            "split search skipped: {size} terms exceed the cap of {cap}; unknown, not impossible"
                        ));
                    }
                }
            }
        }
        Task::Conjugate => match build_conjugation_certificate(support, split_cap) {
            Ok(Some(cert)) => {
                let program = synth_conjugate(&cert).map_err(|e| anyhow!("{e}"))?;
                summary.status = "conjugation_split".into();
                summary.query_count = Some(program.query_count());
                summary.certificate = Some(CertificateSummary::conjugation(support, &cert));
            }
            Ok(None) => {
                summary.status = "no_protocol_found".into();
                summary.notes.push("conjugation split search exhausted".into());
            }
            Err(AnalysisError::CapExceeded { cap, size, .. }) => {
                summary.status = "not_found_under_cap".into();
                summary.notes.push(format!(
                    "conjugation search skipped: {size} terms exceed the cap of {cap}; unknown, not impossible"
                ));
            }
        },
        Task::Transpose => {
            summary.status = "unsupported".into();
            summary
                .notes
                .push("multi-query transpose synthesis is not offered; single-query criterion is exact and reported above".into());
        }
    }
    Ok(summary)
}

/// Re-checks a single-query certificate against its defining commutation
/// pattern before it is reported.
fn validate_pattern(support: &PauliSupport, task: Task, v: &revq_core::PauliOperator) -> Result<()> {
    for term in support.terms() {
        let commutes = v.commutes(term).map_err(|e| anyhow!("{e}"))?;
        let want_commute = match task {
            Task::Invert => false,
            Task::Conjugate => term.y_parity() == 1,
            Task::Transpose => term.y_parity() == 0,
        };
        if commutes != want_commute {
            return Err(anyhow!(
                "internal error: certificate {} violates its commutation pattern on {}",
                v.word_string(),
                term.word_string()
            ));
        }
    }
    Ok(())
}

/// Rebuilds the program the analysis chain certified.
fn synthesize(support: &PauliSupport, summary: &AnalysisSummary) -> Result<Option<CircuitProgram>> {
    let task = summary.task;
    let limits = CommonLimits { cap: summary.cap, max_qubits: DEFAULT_SIM_CAP };
    let split_cap = limits.cap.unwrap_or(analysis::DEFAULT_SPLIT_CAP);
    let program = match summary.status.as_str() {
        "single_query" => {
            let single = match task {
                Task::Invert => find_single_query_inverter(support),
                Task::Conjugate => find_single_query_conjugator(support),
                Task::Transpose => find_single_query_transposer(support),
            }
            .expect("status came from this search");
            Some(synth_single_query(task, &single))
        }
        "commuting_cover" => {
            let cover = find_anticommute_cover(support);
            Some(synth_commuting_inverse(&cover).map_err(|e| anyhow!("{e}"))?)
        }
        "split" => {
            let cert = find_split_certificate(support, split_cap)
                .map_err(|e| anyhow!("{e}"))?
                .expect("status came from this search");
            Some(synth_split_inverse(support, &cert).map_err(|e| anyhow!("{e}"))?)
        }
        "conjugation_split" => {
            let cert = build_conjugation_certificate(support, split_cap)
                .map_err(|e| anyhow!("{e}"))?
                .expect("status came from this search");
            Some(synth_conjugate(&cert).map_err(|e| anyhow!("{e}"))?)
        }
        _ => None,
    };
    Ok(program)
}
