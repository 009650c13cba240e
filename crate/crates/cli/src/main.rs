//! Command-line front end: synth / verify / analyze / sim / lemma /
//! corpus, wired for scripting — artifacts as JSON, summaries as fixed
//! key=value lines, exit code 0 on success, 1 on verification failure,
//! 2 on usage or parse errors.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qesop_core::corpus::{corpus, CorpusParams, DEFAULT_CORPUS_SEED};
use qesop_core::{
    alternating_binomial_sum, binomial, check_and_xor_identity, lower, macro_sim, phase_sim,
    size_estimate, synth_disjunction, synth_oracle, verify_oracle, BasisState, BooleanFunction,
    Circuit, CostModel, Gate, SizeEstimate,
};

#[derive(Parser)]
#[command(name = "qesop", version, about = "Constant-depth quantum oracle compiler for ESOP boolean functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an ESOP function (or a disjunction) into an oracle circuit
    Synth {
        /// ESOP input path, or '-' for stdin
        #[arg(required_unless_present = "disjunction", conflicts_with = "disjunction")]
        input: Option<PathBuf>,
        /// Build the n-ary disjunction oracle instead of reading ESOP input
        #[arg(long, value_name = "N")]
        disjunction: Option<usize>,
        /// Lower multi-controlled gates to the primitive set
        #[arg(long)]
        lower: bool,
        /// Write the circuit JSON here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check a circuit against an ESOP function, exhaustively and exactly
    Verify {
        /// Circuit JSON path
        circuit: PathBuf,
        /// ESOP input path, or '-' for stdin
        esop: PathBuf,
        /// Write the report JSON here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Print depth, width, and gate-count metrics for a circuit
    Analyze {
        /// Circuit JSON path
        circuit: PathBuf,
        /// Cross-check the metrics against this ESOP function's size estimate
        #[arg(long, value_name = "PATH")]
        esop: Option<PathBuf>,
        /// Which cost model the summary line reports
        #[arg(long, value_enum, default_value_t = ModelArg::Macro)]
        model: ModelArg,
        /// Write the metrics JSON here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run a circuit on one basis input with an exact simulator
    Sim {
        /// Circuit JSON path
        circuit: PathBuf,
        /// Input bits, wire 0 first; shorter inputs are zero-padded
        #[arg(long, value_name = "BITS")]
        input: String,
        /// Write the result JSON here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check the binomial identities and the AND/XOR expansion up to n
    Lemma {
        /// Exhaustive-sweep bound for the expansion identity (1..=16)
        n: usize,
    },
    /// Synthesize and verify a seeded corpus of random functions
    Corpus {
        /// Number of functions to draw
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Generator seed
        #[arg(long, default_value_t = DEFAULT_CORPUS_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Macro,
    Expanded,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
    }
}

/// Writes the artifact to `--out` or stdout. The summary goes to stdout
/// when the artifact went to a file, to stderr otherwise, so exactly one
/// stream carries JSON.
fn emit(out: &Option<PathBuf>, artifact: &str, summary: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, artifact).map_err(|e| format!("writing {}: {e}", path.display()))?;
            println!("{summary}");
        }
        None => {
            print!("{artifact}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn load_circuit(path: &Path) -> Result<Circuit, String> {
    Circuit::from_json(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_function(path: &Path) -> Result<BooleanFunction, String> {
    BooleanFunction::parse_esop(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Synth { input, disjunction, lower: lower_flag, out } => {
            cmd_synth(input, disjunction, lower_flag, out)
        }
        Command::Verify { circuit, esop, out } => cmd_verify(&circuit, &esop, out),
        Command::Analyze { circuit, esop, model, out } => cmd_analyze(&circuit, esop, model, out),
        Command::Sim { circuit, input, out } => cmd_sim(&circuit, &input, out),
        Command::Lemma { n } => cmd_lemma(n),
        Command::Corpus { count, seed } => cmd_corpus(count, seed),
    }
}

fn cmd_synth(
    input: Option<PathBuf>,
    disjunction: Option<usize>,
    lower_flag: bool,
    out: Option<PathBuf>,
) -> Result<bool, String> {
    let (circuit, rotations) = match (&input, disjunction) {
        (_, Some(n)) => {
            let circuit = synth_disjunction(n).map_err(|e| e.to_string())?;
            let rotations = lower(&circuit).map_err(|e| e.to_string())?.gate_counts().count("P");
            (circuit, rotations)
        }
        (Some(path), None) => {
            let f = load_function(path)?;
            let circuit = synth_oracle(&f).map_err(|e| e.to_string())?;
            let rotations = size_estimate(&f).map_err(|e| e.to_string())?.rotation_count;
            (circuit, rotations)
        }
        (None, None) => unreachable!("clap enforces one input source"),
    };
    for warning in &circuit.warnings {
        eprintln!("warning: {warning}");
    }
    let macro_depth = circuit.depth(CostModel::Macro).map_err(|e| e.to_string())?;

    if lower_flag {
        let lowered = lower(&circuit).map_err(|e| e.to_string())?;
        let expanded = lowered.depth(CostModel::Expanded).map_err(|e| e.to_string())?;
        let summary = format!(
            "depth={macro_depth} width={} rotations={rotations} expanded_depth={expanded}",
            lowered.width
        );
        emit(&out, &lowered.to_json(), &summary)?;
    } else {
        let summary = format!("depth={macro_depth} width={} rotations={rotations}", circuit.width);
        emit(&out, &circuit.to_json(), &summary)?;
    }
    Ok(true)
}

fn cmd_verify(circuit_path: &Path, esop_path: &Path, out: Option<PathBuf>) -> Result<bool, String> {
    let circuit = load_circuit(circuit_path)?;
    let f = load_function(esop_path)?;
    let report = verify_oracle(&circuit, &f).map_err(|e| e.to_string())?;
    let summary = format!(
        "verdict={} total_inputs={} failures={}",
        if report.passed() { "pass" } else { "fail" },
        report.total_inputs,
        report.failures.len()
    );
    emit(&out, &report.to_json(), &summary)?;
    Ok(report.passed())
}

#[derive(Serialize)]
struct Metrics {
    width: usize,
    macro_depth: usize,
    expanded_depth: Option<usize>,
    ancilla_count: usize,
    gate_counts: BTreeMap<String, u64>,
    p_by_phase: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    size_estimate: Option<SizeEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    width_matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotations_match: Option<bool>,
}

fn cmd_analyze(
    circuit_path: &Path,
    esop: Option<PathBuf>,
    model: ModelArg,
    out: Option<PathBuf>,
) -> Result<bool, String> {
    let circuit = load_circuit(circuit_path)?;
    let counts = circuit.gate_counts();
    let macro_depth = circuit.depth(CostModel::Macro).map_err(|e| e.to_string())?;
    let expanded_depth = if circuit.has_macros() {
        None
    } else {
        Some(circuit.depth(CostModel::Expanded).map_err(|e| e.to_string())?)
    };
    let mut metrics = Metrics {
        width: circuit.width,
        macro_depth,
        expanded_depth,
        ancilla_count: circuit.ancilla_count(),
        gate_counts: counts.by_kind.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        p_by_phase: counts.p_by_phase.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        size_estimate: None,
        width_matches: None,
        rotations_match: None,
    };
    if let Some(esop_path) = esop {
        let f = load_function(&esop_path)?;
        let estimate = size_estimate(&f).map_err(|e| e.to_string())?;
        // The estimate predicts the macro circuit's width and the lowered
        // circuit's rotation count, so each check applies to one shape.
        metrics.width_matches = circuit
            .has_macros()
            .then_some(estimate.width == circuit.width as u64);
        metrics.rotations_match =
            (!circuit.has_macros()).then_some(estimate.rotation_count == counts.count("P"));
        metrics.size_estimate = Some(estimate);
    }
    let depth_for_summary = match model {
        ModelArg::Macro => Some(macro_depth),
        ModelArg::Expanded => metrics.expanded_depth,
    };
    let summary = format!(
        "width={} depth={} P={} ancillas={}",
        metrics.width,
        depth_for_summary.map_or_else(|| "n/a".into(), |d| d.to_string()),
        counts.count("P"),
        metrics.ancilla_count
    );
    let mut artifact = serde_json::to_string_pretty(&metrics).map_err(|e| e.to_string())?;
    artifact.push('\n');
    emit(&out, &artifact, &summary)?;
    Ok(true)
}

#[derive(Serialize)]
struct SimResult {
    bits: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase: Option<qesop_core::DyadicPhase>,
}

fn cmd_sim(circuit_path: &Path, input: &str, out: Option<PathBuf>) -> Result<bool, String> {
    let circuit = load_circuit(circuit_path)?;
    let mut bits = Vec::with_capacity(circuit.width);
    for ch in input.chars() {
        match ch {
            '0' => bits.push(false),
            '1' => bits.push(true),
            other => return Err(format!("input bit {other:?} is not 0 or 1")),
        }
    }
    if bits.len() > circuit.width {
        return Err(format!(
            "input has {} bits but the circuit is {} wires wide",
            bits.len(),
            circuit.width
        ));
    }
    bits.resize(circuit.width, false);

    let has = |pred: fn(&Gate) -> bool| circuit.gates.iter().any(pred);
    let result = if has(|g| matches!(g, Gate::Mcx { .. })) {
        let output = macro_sim(&circuit, &bits).map_err(|e| e.to_string())?;
        SimResult { bits: BasisState::from_bits(output).bit_string(), phase: None }
    } else if has(|g| matches!(g, Gate::H { .. } | Gate::Mcz { .. })) {
        return Err(
            "circuit contains H or MCZ gates; sim supports the diagonal and classical-reversible fragments"
                .into(),
        );
    } else {
        let output = phase_sim(&circuit, &BasisState::from_bits(bits)).map_err(|e| e.to_string())?;
        SimResult { bits: output.bit_string(), phase: Some(output.phase) }
    };

    let summary = match &result.phase {
        Some(phase) => format!("bits={} phase={phase}", result.bits),
        None => format!("bits={}", result.bits),
    };
    let mut artifact = serde_json::to_string_pretty(&result).map_err(|e| e.to_string())?;
    artifact.push('\n');
    emit(&out, &artifact, &summary)?;
    Ok(true)
}

fn cmd_lemma(n: usize) -> Result<bool, String> {
    if n == 0 || n > 16 {
        return Err(format!("lemma sweep bound {n} out of range 1..=16"));
    }
    let mut pascal_ok = true;
    for m in 1..60u32 {
        for k in 1..=m {
            let lhs = binomial(m + 1, k).map_err(|e| e.to_string())?;
            let rhs = binomial(m, k - 1).map_err(|e| e.to_string())?
                + binomial(m, k).map_err(|e| e.to_string())?;
            if lhs != rhs {
                pascal_ok = false;
            }
        }
    }
    let mut alternating_ok = true;
    for m in 1..=60u32 {
        if alternating_binomial_sum(m).map_err(|e| e.to_string())? != 1 {
            alternating_ok = false;
        }
    }
    let mut and_xor_ok = true;
    for m in 1..=n {
        if !check_and_xor_identity(m).map_err(|e| e.to_string())? {
            and_xor_ok = false;
        }
    }
    let flag = |ok: bool| if ok { "ok" } else { "fail" };
    println!(
        "pascal={} alternating_sum={} and_xor={} n={n}",
        flag(pascal_ok),
        flag(alternating_ok),
        flag(and_xor_ok)
    );
    Ok(pascal_ok && alternating_ok && and_xor_ok)
}

fn cmd_corpus(count: usize, seed: u64) -> Result<bool, String> {
    let params = CorpusParams::default();
    let mut failed = 0usize;
    for (index, f) in corpus(seed, count, &params).iter().enumerate() {
        let estimate = size_estimate(f).map_err(|e| e.to_string())?;
        let oracle = synth_oracle(f).map_err(|e| e.to_string())?;
        let lowered = lower(&oracle).map_err(|e| e.to_string())?;
        let report = verify_oracle(&oracle, f).map_err(|e| e.to_string())?;
        let size_ok = estimate.width == oracle.width as u64
            && estimate.rotation_count == lowered.gate_counts().count("P");
        if !report.passed() || !size_ok {
            failed += 1;
            eprintln!(
                "corpus function {index} failed (verify={}, size={}):\n{}",
                if report.passed() { "pass" } else { "fail" },
                if size_ok { "pass" } else { "fail" },
                f.to_esop()
            );
        }
    }
    println!("count={count} seed={seed} passed={} failed={failed}", count - failed);
    Ok(failed == 0)
}
