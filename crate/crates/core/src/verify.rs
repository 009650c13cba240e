//! Verification drivers.
//!
//! Lowered oracles are far too wide for dense simulation, so correctness
//! is certified in two tiers. The macro tier sweeps every `(x, y)` basis
//! input through the classical-reversible simulator. The phase tier works
//! on the lowered circuit: every Hadamard pair encloses a diagonal
//! segment that must implement a multi-controlled Z over its unwritten
//! wires exactly (bits restored, ancillas zero, phase −1 precisely on the
//! all-ones assignment, integer-exact); a certified segment plus its H
//! sandwich *is* a multi-controlled NOT, so substituting the macro back
//! and re-running the classical sweep pins the full unitary down to the
//! exact permutation with global phase 1. Dense spot checks of the small
//! sandwiches tie the two tiers together.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::ir::{Circuit, Gate};
use crate::phase::DyadicPhase;
use crate::sim::{
    basis_index, macro_sim, phase_sim, statevector_sim, BasisState, MAX_STATEVECTOR_WIDTH,
    STATEVECTOR_TOLERANCE,
};
use crate::synth::{lower, synth_mcx, synth_mcz};

/// Control cap for the exhaustive multi-controlled-Z sweep.
pub const MAX_VERIFY_MCZ_CONTROLS: usize = 16;

/// Widest sandwich (main-wire count) certified exhaustively.
pub const MAX_SANDWICH_MAINS: usize = 13;

/// Dense spot checks stop where the lowered sandwich exceeds the
/// state-vector width cap; three controls already need 15 wires.
pub const MAX_SPOT_CHECK_CONTROLS: usize = 2;

/// One mismatch found by a verifier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    /// Which check produced this entry.
    pub context: String,
    /// Input bits, wire 0 first; empty for structural findings.
    pub input: String,
    pub expected: String,
    pub actual: String,
    /// Difference between actual and expected phase.
    pub phase_residue: DyadicPhase,
    /// Ancilla or scratch wires left nonzero.
    pub ancilla_leaks: Vec<usize>,
}

impl Failure {
    fn structural(context: String) -> Self {
        Failure {
            context,
            input: String::new(),
            expected: String::new(),
            actual: String::new(),
            phase_residue: DyadicPhase::ZERO,
            ancilla_leaks: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of a verification run. `verdict` is pass iff `failures` is
/// empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub total_inputs: usize,
    pub failures: Vec<Failure>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn new(total_inputs: usize, failures: Vec<Failure>) -> Self {
        let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
        VerificationReport { total_inputs, failures, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Checks a circuit against the multi-controlled-Z contract over its
/// first `main_wires` wires: for every basis assignment of the mains
/// (all other wires zero), the bits come back unchanged, the ancillas
/// stay zero, and the phase is exactly −1 on the all-ones assignment and
/// exactly 1 otherwise. Inputs are swept in parallel.
pub fn verify_mcz_circuit(circuit: &Circuit, main_wires: usize) -> Result<VerificationReport> {
    if main_wires > circuit.width {
        return Err(Error::validation(format!(
            "{main_wires} main wires exceed circuit width {}",
            circuit.width
        )));
    }
    if main_wires > MAX_VERIFY_MCZ_CONTROLS + 1 {
        return Err(Error::validation(format!(
            "{main_wires} main wires exceed the {} sweep cap",
            MAX_VERIFY_MCZ_CONTROLS + 1
        )));
    }
    let total = 1usize << main_wires;
    let failures: Vec<Failure> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut input = BasisState::zeros(circuit.width);
            for (w, bit) in input.bits.iter_mut().enumerate().take(main_wires) {
                *bit = idx >> w & 1 == 1;
            }
            let output = match phase_sim(circuit, &input) {
                Ok(s) => s,
                Err(e) => return Some(Failure::structural(format!("mcz core: {e}"))),
            };
            let expected_phase = if idx == total - 1 {
                DyadicPhase::HALF_TURN
            } else {
                DyadicPhase::ZERO
            };
            let leaks: Vec<usize> = (main_wires..circuit.width)
                .filter(|&w| output.bits[w])
                .collect();
            if output.bits == input.bits && output.phase == expected_phase {
                None
            } else {
                Some(Failure {
                    context: "mcz core".into(),
                    input: input.bit_string(),
                    expected: format!("{} phase {}", input.bit_string(), expected_phase),
                    actual: format!("{} phase {}", output.bit_string(), output.phase),
                    phase_residue: output.phase + (-expected_phase),
                    ancilla_leaks: leaks,
                })
            }
        })
        .collect::<Vec<Option<Failure>>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(VerificationReport::new(total, failures))
}

/// Synthesizes the Z decomposition for `controls ≤ 16` and sweeps it
/// exhaustively against the contract.
pub fn verify_mcz(controls: usize) -> Result<VerificationReport> {
    if controls > MAX_VERIFY_MCZ_CONTROLS {
        return Err(Error::validation(format!(
            "control count {controls} exceeds the verification cap {MAX_VERIFY_MCZ_CONTROLS}"
        )));
    }
    let circuit = synth_mcz(controls)?;
    verify_mcz_circuit(&circuit, controls + 1)
}

/// One Hadamard pair and the diagonal segment between it.
#[derive(Clone, Debug)]
struct Sandwich {
    wire: usize,
    start: usize,
    end: usize,
    /// Unwritten wires of the segment (includes `wire`), sorted.
    mains: Vec<usize>,
    /// Written wires of the segment, sorted.
    internals: Vec<usize>,
}

/// Pairs up the H gates per wire and classifies each enclosed segment.
/// Shape violations (odd H counts, H or macros inside a segment, a
/// sandwich wire that gets written) are reported as failures.
fn find_sandwiches(circuit: &Circuit) -> (Vec<Sandwich>, Vec<Failure>) {
    let mut failures = Vec::new();
    let mut h_positions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (index, gate) in circuit.gates.iter().enumerate() {
        if let Gate::H { wire } = gate {
            h_positions.entry(*wire).or_default().push(index);
        }
    }
    let mut sandwiches = Vec::new();
    for (&wire, positions) in &h_positions {
        if positions.len() % 2 != 0 {
            failures.push(Failure::structural(format!("unpaired H on wire {wire}")));
            continue;
        }
        for pair in positions.chunks(2) {
            let (start, end) = (pair[0], pair[1]);
            let mut touched = BTreeMap::new();
            let mut written = BTreeMap::new();
            let mut ok = true;
            for (index, gate) in circuit.gates[start + 1..end].iter().enumerate() {
                let index = start + 1 + index;
                match gate {
                    Gate::H { .. } => {
                        failures.push(Failure::structural(format!(
                            "H at gate {index} nested inside the sandwich {start}..{end} on wire {wire}"
                        )));
                        ok = false;
                    }
                    Gate::Mcx { .. } | Gate::Mcz { .. } => {
                        failures.push(Failure::structural(format!(
                            "macro gate {index} inside the sandwich {start}..{end} on wire {wire}"
                        )));
                        ok = false;
                    }
                    g => {
                        for w in g.wires() {
                            touched.insert(w, ());
                        }
                        match g {
                            Gate::X { wire } => {
                                written.insert(*wire, ());
                            }
                            Gate::Cnot { target, .. } => {
                                written.insert(*target, ());
                            }
                            Gate::Fanout { dst, .. } => {
                                for &d in dst {
                                    written.insert(d, ());
                                }
                            }
                            Gate::Parity { dst, .. } => {
                                written.insert(*dst, ());
                            }
                            _ => {}
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            touched.insert(wire, ());
            if written.contains_key(&wire) {
                failures.push(Failure::structural(format!(
                    "sandwich wire {wire} is written inside {start}..{end}"
                )));
                continue;
            }
            let mains: Vec<usize> = touched.keys().copied().filter(|w| !written.contains_key(w)).collect();
            let internals: Vec<usize> = written.keys().copied().collect();
            sandwiches.push(Sandwich { wire, start, end, mains, internals });
        }
    }
    sandwiches.sort_by_key(|s| s.start);
    (sandwiches, failures)
}

/// Exhaustively checks that one sandwich segment implements the
/// multi-controlled Z over its main wires.
fn certify_sandwich(circuit: &Circuit, sandwich: &Sandwich) -> Vec<Failure> {
    let context = format!(
        "sandwich {}..{} on wire {}",
        sandwich.start, sandwich.end, sandwich.wire
    );
    if sandwich.mains.len() > MAX_SANDWICH_MAINS {
        return vec![Failure::structural(format!(
            "{context}: {} main wires exceed the {MAX_SANDWICH_MAINS}-wire certification cap",
            sandwich.mains.len()
        ))];
    }
    // Remap the segment onto a compact sub-circuit.
    let mut wires: Vec<usize> = sandwich.mains.iter().chain(&sandwich.internals).copied().collect();
    wires.sort_unstable();
    let position: BTreeMap<usize, usize> = wires.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut segment = Circuit::new(wires.len(), "segment");
    for gate in &circuit.gates[sandwich.start + 1..sandwich.end] {
        segment.gates.push(remap_gate(gate, &position));
    }
    let main_positions: Vec<usize> = sandwich.mains.iter().map(|w| position[w]).collect();

    let total = 1usize << sandwich.mains.len();
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut input = BasisState::zeros(segment.width);
            for (bit, &pos) in main_positions.iter().enumerate() {
                input.bits[pos] = idx >> bit & 1 == 1;
            }
            let output = match phase_sim(&segment, &input) {
                Ok(s) => s,
                Err(e) => return Some(Failure::structural(format!("{context}: {e}"))),
            };
            let expected_phase = if idx == total - 1 {
                DyadicPhase::HALF_TURN
            } else {
                DyadicPhase::ZERO
            };
            if output.bits == input.bits && output.phase == expected_phase {
                None
            } else {
                let leaks: Vec<usize> = sandwich
                    .internals
                    .iter()
                    .copied()
                    .filter(|w| output.bits[position[w]])
                    .collect();
                Some(Failure {
                    context: context.clone(),
                    input: input.bit_string(),
                    expected: format!("{} phase {}", input.bit_string(), expected_phase),
                    actual: format!("{} phase {}", output.bit_string(), output.phase),
                    phase_residue: output.phase + (-expected_phase),
                    ancilla_leaks: leaks,
                })
            }
        })
        .collect::<Vec<Option<Failure>>>()
        .into_iter()
        .flatten()
        .collect()
}

fn remap_gate(gate: &Gate, position: &BTreeMap<usize, usize>) -> Gate {
    let p = |w: &usize| position[w];
    match gate {
        Gate::H { wire } => Gate::H { wire: p(wire) },
        Gate::X { wire } => Gate::X { wire: p(wire) },
        Gate::P { wire, phase } => Gate::P { wire: p(wire), phase: *phase },
        Gate::Cnot { control, target } => Gate::Cnot { control: p(control), target: p(target) },
        Gate::Fanout { src, dst } => Gate::Fanout { src: p(src), dst: dst.iter().map(p).collect() },
        Gate::Parity { src, dst } => Gate::Parity { src: src.iter().map(p).collect(), dst: p(dst) },
        Gate::Mcx { controls, target } => Gate::Mcx {
            controls: controls.iter().map(p).collect(),
            target: p(target),
        },
        Gate::Mcz { wires } => Gate::Mcz { wires: wires.iter().map(p).collect() },
    }
}

/// The certificate for a segment assumes its internal wires are zero at
/// entry. That holds by induction as long as internals start at zero
/// (they sit above the function register) and are touched only inside
/// segments that own them.
fn check_internal_isolation(
    circuit: &Circuit,
    sandwiches: &[Sandwich],
    function_wires: usize,
) -> Vec<Failure> {
    let mut failures = Vec::new();
    let mut owner_of_gate: Vec<Option<usize>> = vec![None; circuit.gates.len()];
    for (si, s) in sandwiches.iter().enumerate() {
        for slot in owner_of_gate.iter_mut().take(s.end).skip(s.start + 1) {
            *slot = Some(si);
        }
    }
    let mut internal_owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (si, s) in sandwiches.iter().enumerate() {
        for &t in &s.internals {
            internal_owners.entry(t).or_default().push(si);
        }
    }
    for &t in internal_owners.keys() {
        if t < function_wires {
            failures.push(Failure::structural(format!(
                "sandwich internal wire {t} overlaps the function register"
            )));
        }
    }
    for (gi, gate) in circuit.gates.iter().enumerate() {
        for w in gate.wires() {
            if let Some(owners) = internal_owners.get(&w) {
                let covered = matches!(owner_of_gate[gi], Some(si) if owners.contains(&si));
                if !covered {
                    failures.push(Failure::structural(format!(
                        "internal wire {w} touched by gate {gi} outside its certified segments"
                    )));
                }
            }
        }
    }
    failures
}

/// Replaces every certified sandwich (H pair included) by the
/// multi-controlled NOT it implements, leaving a classical-reversible
/// skeleton. Phase gates outside segments make the circuit unverifiable
/// and are reported.
fn skeleton(circuit: &Circuit, sandwiches: &[Sandwich]) -> std::result::Result<Circuit, Vec<Failure>> {
    let mut failures = Vec::new();
    let mut out = Circuit::new(circuit.width, format!("{}_skeleton", circuit.name));
    out.layout = circuit.layout.clone();
    let mut next = 0usize;
    let mut index = 0usize;
    while index < circuit.gates.len() {
        if next < sandwiches.len() && sandwiches[next].start == index {
            let s = &sandwiches[next];
            let controls: Vec<usize> = s.mains.iter().copied().filter(|&w| w != s.wire).collect();
            if controls.is_empty() {
                failures.push(Failure::structural(format!(
                    "sandwich {}..{} has no control wires",
                    s.start, s.end
                )));
            } else {
                out.gates.push(Gate::Mcx { controls, target: s.wire });
            }
            index = s.end + 1;
            next += 1;
            continue;
        }
        let gate = &circuit.gates[index];
        match gate {
            Gate::X { .. } | Gate::Cnot { .. } | Gate::Fanout { .. } | Gate::Parity { .. } | Gate::Mcx { .. } => {
                out.gates.push(gate.clone());
            }
            other => {
                failures.push(Failure::structural(format!(
                    "gate {index} ({}) outside any certified sandwich",
                    other.kind_name()
                )));
            }
        }
        index += 1;
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(failures)
    }
}

/// Sweeps all `2^{n+1}` basis inputs `(x, y)` through the
/// classical-reversible simulator, expecting `(x, y ⊕ f(x))` with every
/// other wire restored to zero.
fn oracle_macro_sweep(circuit: &Circuit, f: &BooleanFunction, label: &str) -> Vec<Failure> {
    let n = f.n();
    if let Some((index, gate)) = circuit
        .gates
        .iter()
        .enumerate()
        .find(|(_, g)| matches!(g, Gate::H { .. } | Gate::P { .. } | Gate::Mcz { .. }))
    {
        return vec![Failure::structural(format!(
            "{label} tier: gate {index} ({}) is not classical-reversible",
            gate.kind_name()
        ))];
    }
    let total = 1usize << (n + 1);
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut bits = vec![false; circuit.width];
            for (w, bit) in bits.iter_mut().enumerate().take(n + 1) {
                *bit = idx >> w & 1 == 1;
            }
            let x: Vec<bool> = bits[..n].to_vec();
            let mut expected = bits.clone();
            expected[n] ^= f.evaluate(&x).expect("assignment length matches");
            let actual = match macro_sim(circuit, &bits) {
                Ok(b) => b,
                Err(e) => return Some(Failure::structural(format!("{label} tier: {e}"))),
            };
            if actual == expected {
                None
            } else {
                let leaks: Vec<usize> = (n + 1..circuit.width).filter(|&w| actual[w]).collect();
                Some(Failure {
                    context: format!("{label} tier"),
                    input: bit_string(&bits),
                    expected: bit_string(&expected),
                    actual: bit_string(&actual),
                    phase_residue: DyadicPhase::ZERO,
                    ancilla_leaks: leaks,
                })
            }
        })
        .collect::<Vec<Option<Failure>>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Densely simulates the lowered `controls`-controlled NOT on every main
/// basis input and compares against the permutation, amplitude by
/// amplitude, within [`STATEVECTOR_TOLERANCE`].
fn spot_check_mcx(controls: usize) -> Vec<Failure> {
    let context = format!("dense spot check mcx({controls})");
    let lowered = match synth_mcx(controls).and_then(|c| lower(&c)) {
        Ok(c) => c,
        Err(e) => return vec![Failure::structural(format!("{context}: {e}"))],
    };
    if lowered.width > MAX_STATEVECTOR_WIDTH {
        return vec![Failure::structural(format!(
            "{context}: lowered width {} exceeds the dense cap {MAX_STATEVECTOR_WIDTH}",
            lowered.width
        ))];
    }
    let q = controls + 1;
    let dim = 1usize << lowered.width;
    let mut failures = Vec::new();
    for idx in 0..1usize << q {
        let mut bits = vec![false; lowered.width];
        for (w, bit) in bits.iter_mut().enumerate().take(q) {
            *bit = idx >> w & 1 == 1;
        }
        let mut input = vec![num_complex::Complex::<f64>::new(0.0, 0.0); dim];
        input[basis_index(&bits)] = num_complex::Complex::new(1.0, 0.0);
        let output = match statevector_sim(&lowered, &input) {
            Ok(v) => v,
            Err(e) => {
                failures.push(Failure::structural(format!("{context}: {e}")));
                continue;
            }
        };
        let mut expected = bits.clone();
        if expected[..q - 1].iter().all(|&b| b) {
            expected[q - 1] ^= true;
        }
        let expected_index = basis_index(&expected);
        for (i, amp) in output.iter().enumerate() {
            let want = if i == expected_index { 1.0 } else { 0.0 };
            if (amp - num_complex::Complex::new(want, 0.0)).norm() > STATEVECTOR_TOLERANCE {
                failures.push(Failure {
                    context: context.clone(),
                    input: bit_string(&bits),
                    expected: format!("amplitude 1 at basis {expected_index}"),
                    actual: format!("amplitude {amp} at basis {i}"),
                    phase_residue: DyadicPhase::ZERO,
                    ancilla_leaks: Vec::new(),
                });
            }
        }
    }
    failures
}

/// Certifies that a circuit implements the oracle
/// `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` exactly.
///
/// Macro circuits get the classical sweep directly plus the phase tier on
/// their lowering; primitive circuits get the phase tier in place and the
/// classical sweep on the reconstructed skeleton. `total_inputs` counts
/// the oracle input space `2^{n+1}`.
pub fn verify_oracle(circuit: &Circuit, f: &BooleanFunction) -> Result<VerificationReport> {
    let n = f.n();
    if circuit.width < n + 1 {
        return Err(Error::validation(format!(
            "circuit width {} cannot hold {n} inputs plus a target",
            circuit.width
        )));
    }
    let total = 1usize << (n + 1);
    let mut failures = Vec::new();

    let lowered;
    let primitive = if circuit.has_macros() {
        failures.extend(oracle_macro_sweep(circuit, f, "macro"));
        lowered = lower(circuit)?;
        &lowered
    } else {
        circuit
    };

    let (sandwiches, shape_failures) = find_sandwiches(primitive);
    failures.extend(shape_failures);
    for sandwich in &sandwiches {
        failures.extend(certify_sandwich(primitive, sandwich));
    }
    failures.extend(check_internal_isolation(primitive, &sandwiches, n + 1));

    if failures.is_empty() {
        match skeleton(primitive, &sandwiches) {
            Ok(skel) => failures.extend(oracle_macro_sweep(&skel, f, "lowered")),
            Err(shape) => failures.extend(shape),
        }
    }

    let mut sizes: Vec<usize> = sandwiches
        .iter()
        .map(|s| s.mains.len() - 1)
        .filter(|c| (1..=MAX_SPOT_CHECK_CONTROLS).contains(c))
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    for controls in sizes {
        failures.extend(spot_check_mcx(controls));
    }

    Ok(VerificationReport::new(total, failures))
}
