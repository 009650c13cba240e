//! Circuit synthesis: the multi-controlled Z/X decompositions, the
//! depth-5 oracle template, the disjunction oracle, and the lowering pass
//! that rewrites commuting CNOT blocks into fanout/parity layers.

use std::collections::{BTreeMap, HashSet};

use crate::boolean::{subsets_by_size_then_lex, BooleanFunction};
use crate::error::{Error, Result};
use crate::ir::{size_estimate, Circuit, Gate, WireRange, WireRole};
use crate::phase::DyadicPhase;

/// Control-count cap for the Z decomposition (ancilla count `2^{q}−1−q`).
pub const MAX_MCZ_CONTROLS: usize = 20;

/// Arity cap for the disjunction oracle.
pub const MAX_DISJUNCTION_VARS: usize = 16;

/// Wire plan for a multi-controlled Z over `q ≥ 2` wires: every nonempty
/// subset `K ⊆ {1..q}` gets a wire holding `⊕_{k∈K} x_k` (singletons are
/// the original wires, larger subsets dedicated ancillas) and a rotation
/// `P((−1)^{|K|−1}/2^{q−1})`. Summed over all subsets the rotations give
/// phase exponent `∧_i x_i` exactly, i.e. the diagonal `(−1)^{∧x}`.
#[derive(Clone, Debug)]
pub struct MczPlan {
    q: usize,
    assignments: Vec<(Vec<usize>, usize)>,
    rotations: Vec<(usize, DyadicPhase)>,
}

impl MczPlan {
    /// Plans a Z-gate over `q` wires `0..q` with ancillas `q..2^q−1`.
    /// Subsets are ordered by size then lexicographically, ancillas are
    /// assigned in that order.
    pub fn new(q: usize) -> Result<Self> {
        if !(2..=MAX_MCZ_CONTROLS + 1).contains(&q) {
            return Err(Error::validation(format!(
                "multi-controlled Z over {q} wires out of range 2..={}",
                MAX_MCZ_CONTROLS + 1
            )));
        }
        let denom = (q - 1) as u32;
        let mut assignments = Vec::new();
        let mut rotations = Vec::new();
        let mut next_ancilla = q;
        for subset in subsets_by_size_then_lex(q) {
            let wire = if subset.len() == 1 {
                subset[0] - 1
            } else {
                let w = next_ancilla;
                next_ancilla += 1;
                w
            };
            let sign: i64 = if subset.len() % 2 == 1 { 1 } else { -1 };
            rotations.push((wire, DyadicPhase::new(sign, denom)));
            assignments.push((subset, wire));
        }
        Ok(MczPlan { q, assignments, rotations })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `2^q − 1 − q` dedicated parity ancillas.
    pub fn ancilla_count(&self) -> usize {
        (1 << self.q) - 1 - self.q
    }

    /// Subset-to-wire map in subset order.
    pub fn assignments(&self) -> &[(Vec<usize>, usize)] {
        &self.assignments
    }

    /// Rotation list in subset order: `2^q − 1` entries.
    pub fn rotations(&self) -> &[(usize, DyadicPhase)] {
        &self.rotations
    }
}

/// Emits the Z-decomposition gates on caller-chosen wires: the parity
/// compute block (pairwise-commuting CNOTs from mains into ancillas), the
/// parallel rotation layer, and the mirrored uncompute block.
fn mcz_gates(plan: &MczPlan, mains: &[usize], ancillas: &[usize]) -> Vec<Gate> {
    debug_assert_eq!(mains.len(), plan.q());
    debug_assert_eq!(ancillas.len(), plan.ancilla_count());
    let locate = |wire: usize| {
        if wire < plan.q() {
            mains[wire]
        } else {
            ancillas[wire - plan.q()]
        }
    };
    let mut block = Vec::new();
    for (subset, wire) in plan.assignments() {
        if subset.len() >= 2 {
            for &k in subset {
                block.push(Gate::Cnot { control: mains[k - 1], target: locate(*wire) });
            }
        }
    }
    let mut gates = block.clone();
    for &(wire, phase) in plan.rotations() {
        gates.push(Gate::P { wire: locate(wire), phase });
    }
    gates.extend(block.into_iter().rev());
    gates
}

/// Builds the primitive circuit for a Z-gate controlled by
/// `1 ≤ controls ≤ 20` qubits: wires `0..controls+1` are the gate's
/// operands, followed by `2^{controls+1} − controls − 2` parity ancillas.
pub fn synth_mcz(controls: usize) -> Result<Circuit> {
    if !(1..=MAX_MCZ_CONTROLS).contains(&controls) {
        return Err(Error::validation(format!(
            "control count {controls} out of range 1..={MAX_MCZ_CONTROLS}"
        )));
    }
    let q = controls + 1;
    let plan = MczPlan::new(q)?;
    let mut circuit = Circuit::new(q + plan.ancilla_count(), format!("mcz{controls}"));
    circuit.layout.push(WireRange::new("wires", 0, q, WireRole::Input));
    circuit
        .layout
        .push(WireRange::new("parity_ancillas", q, plan.ancilla_count(), WireRole::Ancilla));
    let mains: Vec<usize> = (0..q).collect();
    let ancillas: Vec<usize> = (q..q + plan.ancilla_count()).collect();
    circuit.gates = mcz_gates(&plan, &mains, &ancillas);
    Ok(circuit)
}

/// Builds the primitive circuit for a NOT controlled by `controls`
/// qubits: a Hadamard sandwich around the Z decomposition, with the
/// target as the last operand wire. One control degenerates to a CNOT.
pub fn synth_mcx(controls: usize) -> Result<Circuit> {
    if !(1..=MAX_MCZ_CONTROLS).contains(&controls) {
        return Err(Error::validation(format!(
            "control count {controls} out of range 1..={MAX_MCZ_CONTROLS}"
        )));
    }
    if controls == 1 {
        let mut circuit = Circuit::new(2, "mcx1");
        circuit.layout.push(WireRange::new("controls", 0, 1, WireRole::Input));
        circuit.layout.push(WireRange::new("target", 1, 1, WireRole::Target));
        circuit.gates.push(Gate::Cnot { control: 0, target: 1 });
        return Ok(circuit);
    }
    let q = controls + 1;
    let plan = MczPlan::new(q)?;
    let target = q - 1;
    let mut circuit = Circuit::new(q + plan.ancilla_count(), format!("mcx{controls}"));
    circuit.layout.push(WireRange::new("controls", 0, controls, WireRole::Input));
    circuit.layout.push(WireRange::new("target", target, 1, WireRole::Target));
    circuit
        .layout
        .push(WireRange::new("parity_ancillas", q, plan.ancilla_count(), WireRole::Ancilla));
    let mains: Vec<usize> = (0..q).collect();
    let ancillas: Vec<usize> = (q..q + plan.ancilla_count()).collect();
    circuit.gates.push(Gate::H { wire: target });
    circuit.gates.extend(mcz_gates(&plan, &mains, &ancillas));
    circuit.gates.push(Gate::H { wire: target });
    Ok(circuit)
}

struct Block {
    copies: Vec<usize>,
    target: usize,
}

/// Builds the constant-depth oracle `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` as a macro
/// circuit: inputs `0..n`, target `n`, then one ancilla block per clause.
///
/// The template is: fanouts copying each input into every block that uses
/// it (one step), one multi-controlled NOT per block writing the
/// conjunction into the block target (one step), a parity gate folding
/// the block targets into `y` (one step), then the NOT and fanout layers
/// mirrored to restore the ancillas (two steps) — macro depth 5.
///
/// Blocks of size 1 use a plain CNOT in place of the macro NOT and carry
/// no decomposition ancillas. Constant-1 clauses become X gates on `y`,
/// interleaved around the parity step. A function with no clauses yields
/// the identity oracle (empty gate list) plus a warning.
pub fn synth_oracle(f: &BooleanFunction) -> Result<Circuit> {
    if let Some(clause) = f.clauses().iter().find(|c| c.len() > MAX_MCZ_CONTROLS) {
        return Err(Error::validation(format!(
            "clause of size {} exceeds the {MAX_MCZ_CONTROLS}-control decomposition cap",
            clause.len()
        )));
    }
    size_estimate(f)?;

    let n = f.n();
    let mut circuit = Circuit::new(n + 1, "oracle");
    circuit.layout.push(WireRange::new("inputs", 0, n, WireRole::Input));
    circuit.layout.push(WireRange::new("target", n, 1, WireRole::Target));

    if f.clauses().is_empty() {
        circuit.warnings.push("no clauses: emitting the identity oracle".into());
        return Ok(circuit);
    }

    let mut blocks: Vec<Block> = Vec::new();
    let mut constant_terms = 0usize;
    for (i, clause) in f.clauses().iter().enumerate() {
        let s = clause.len();
        if s == 0 {
            constant_terms += 1;
            continue;
        }
        let start = circuit.width;
        let block_len = if s == 1 { 2 } else { (1 << (s + 1)) - 1 };
        circuit
            .layout
            .push(WireRange::new(format!("block{i}"), start, block_len, WireRole::Ancilla));
        blocks.push(Block {
            copies: (start..start + s).collect(),
            target: start + s,
        });
        circuit.width += block_len;
    }

    // Step 2: one fanout per used input variable, all parallel.
    for k in 1..=n {
        let mut dst = Vec::new();
        for (block, clause) in blocks.iter().zip(f.clauses().iter().filter(|c| !c.is_empty())) {
            if let Ok(pos) = clause.binary_search(&k) {
                dst.push(block.copies[pos]);
            }
        }
        if !dst.is_empty() {
            circuit.gates.push(Gate::Fanout { src: k - 1, dst });
        }
    }
    let fanout_layer: Vec<Gate> = circuit.gates.clone();

    // Step 3: conjunction per block, all parallel.
    let compute_layer: Vec<Gate> = blocks
        .iter()
        .map(|block| {
            if block.copies.len() == 1 {
                Gate::Cnot { control: block.copies[0], target: block.target }
            } else {
                Gate::Mcx { controls: block.copies.clone(), target: block.target }
            }
        })
        .collect();
    circuit.gates.extend(compute_layer.iter().cloned());

    // Step 4: fold into y. Constant-1 clauses are X gates on y; they
    // commute with the parity, so they are split around it to stay clear
    // of the fanout and conjunction steps.
    for _ in 0..constant_terms.div_ceil(2) {
        circuit.gates.push(Gate::X { wire: n });
    }
    if !blocks.is_empty() {
        circuit.gates.push(Gate::Parity {
            src: blocks.iter().map(|b| b.target).collect(),
            dst: n,
        });
    }
    for _ in 0..constant_terms / 2 {
        circuit.gates.push(Gate::X { wire: n });
    }

    // Steps 5 and 6: mirror the conjunction and fanout layers.
    circuit.gates.extend(compute_layer.into_iter().rev());
    circuit.gates.extend(fanout_layer.into_iter().rev());
    Ok(circuit)
}

/// Builds the oracle `|x⟩|y⟩ ↦ |x⟩|y ⊕ (x_1 ∨ … ∨ x_n)⟩` by conjugating
/// a multi-controlled NOT with X gates: `∨x = ¬(∧¬x)`. Emitted verbatim,
/// including the X gates that cancel semantically at `n = 1`.
pub fn synth_disjunction(n: usize) -> Result<Circuit> {
    if !(1..=MAX_DISJUNCTION_VARS).contains(&n) {
        return Err(Error::validation(format!(
            "disjunction arity {n} out of range 1..={MAX_DISJUNCTION_VARS}"
        )));
    }
    let mut circuit = Circuit::new(n + 1, format!("disjunction{n}"));
    circuit.layout.push(WireRange::new("inputs", 0, n, WireRole::Input));
    circuit.layout.push(WireRange::new("target", n, 1, WireRole::Target));
    for wire in 0..n {
        circuit.gates.push(Gate::X { wire });
    }
    circuit.gates.push(Gate::X { wire: n });
    if n == 1 {
        circuit.gates.push(Gate::Cnot { control: 0, target: 1 });
    } else {
        circuit.gates.push(Gate::Mcx { controls: (0..n).collect(), target: n });
    }
    for wire in 0..n {
        circuit.gates.push(Gate::X { wire });
    }
    Ok(circuit)
}

/// Lowers a circuit to the primitive gate set.
///
/// Macro NOT/Z gates expand per [`synth_mcx`]/[`synth_mcz`]; decomposition
/// ancillas come from the wires reserved after the target inside its
/// layout block when present (the oracle template reserves them), and are
/// appended otherwise. Each maximal run of CNOTs whose control and target
/// sets stay disjoint is then rewritten into at most three timesteps:
/// a fanout layer copying every multiply-used control into fresh scratch
/// wires, a parity layer combining dedicated copies into each target, and
/// the mirrored fanout layer restoring the scratch.
pub fn lower(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.width, circuit.name.clone());
    out.warnings = circuit.warnings.clone();
    out.layout = circuit.layout.clone();

    // Wires referenced by any gate; reserved ancillas must not be among them.
    let used: HashSet<usize> = circuit.gates.iter().flat_map(|g| g.wires()).collect();

    let mut expanded: Vec<Gate> = Vec::new();
    let mut fresh_ranges = 0usize;
    for gate in &circuit.gates {
        match gate {
            Gate::Mcx { controls, target } if controls.len() == 1 => {
                expanded.push(Gate::Cnot { control: controls[0], target: *target });
            }
            Gate::Mcx { controls, target } => {
                let plan = plan_for(controls.len() + 1)?;
                let mut mains = controls.clone();
                mains.push(*target);
                let ancillas = reserve_ancillas(circuit, &used, *target, plan.ancilla_count(), &mut out, &mut fresh_ranges);
                expanded.push(Gate::H { wire: *target });
                expanded.extend(mcz_gates(&plan, &mains, &ancillas));
                expanded.push(Gate::H { wire: *target });
            }
            Gate::Mcz { wires } => {
                let plan = plan_for(wires.len())?;
                let anchor = *wires.last().expect("validated");
                let ancillas = reserve_ancillas(circuit, &used, anchor, plan.ancilla_count(), &mut out, &mut fresh_ranges);
                expanded.extend(mcz_gates(&plan, wires, &ancillas));
            }
            g => expanded.push(g.clone()),
        }
    }

    out.gates = rewrite_cnot_blocks(expanded, &mut out);
    Ok(out)
}

fn plan_for(q: usize) -> Result<MczPlan> {
    if q > MAX_MCZ_CONTROLS + 1 {
        return Err(Error::Resource(format!(
            "macro gate over {q} wires exceeds the {MAX_MCZ_CONTROLS}-control decomposition cap"
        )));
    }
    MczPlan::new(q)
}

/// Picks the decomposition ancillas for one macro gate: the unused wires
/// that follow `target` inside its ancilla block if there are enough of
/// them, fresh wires appended to the circuit otherwise.
fn reserve_ancillas(
    original: &Circuit,
    used: &HashSet<usize>,
    target: usize,
    needed: usize,
    out: &mut Circuit,
    fresh_ranges: &mut usize,
) -> Vec<usize> {
    if needed == 0 {
        return Vec::new();
    }
    if let Some(range) = original
        .layout
        .iter()
        .find(|r| r.role == WireRole::Ancilla && r.contains(target))
    {
        let candidates: Vec<usize> = (target + 1..range.start + range.len)
            .filter(|w| !used.contains(w))
            .collect();
        if candidates.len() >= needed {
            return candidates[..needed].to_vec();
        }
    }
    let start = out.width;
    out.width += needed;
    out.layout.push(WireRange::new(
        format!("mcz_ancillas{}", *fresh_ranges),
        start,
        needed,
        WireRole::Ancilla,
    ));
    *fresh_ranges += 1;
    (start..start + needed).collect()
}

/// Rewrites maximal commuting CNOT runs into fanout/parity/fanout form.
///
/// Blocks with the same live pair set share one scratch allocation: each
/// rewritten block restores its scratch to zero, and identical shapes
/// (a compute block and its mirror) are serialized through their own
/// wires anyway, so reuse costs no depth. Distinct blocks keep distinct
/// scratch so parallel blocks stay parallel.
fn rewrite_cnot_blocks(gates: Vec<Gate>, out: &mut Circuit) -> Vec<Gate> {
    let mut rewritten = Vec::with_capacity(gates.len());
    let mut run: Vec<(usize, usize)> = Vec::new();
    let mut controls: HashSet<usize> = HashSet::new();
    let mut targets: HashSet<usize> = HashSet::new();
    let mut scratch_cache: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();

    let flush = |run: &mut Vec<(usize, usize)>,
                 controls: &mut HashSet<usize>,
                 targets: &mut HashSet<usize>,
                 rewritten: &mut Vec<Gate>,
                 out: &mut Circuit,
                 scratch_cache: &mut BTreeMap<Vec<(usize, usize)>, Vec<usize>>| {
        if run.is_empty() {
            return;
        }
        if run.len() == 1 {
            let (control, target) = run[0];
            rewritten.push(Gate::Cnot { control, target });
        } else {
            rewrite_block(run, rewritten, out, scratch_cache);
        }
        run.clear();
        controls.clear();
        targets.clear();
    };

    for gate in gates {
        if let Gate::Cnot { control, target } = gate {
            if targets.contains(&control) || controls.contains(&target) {
                flush(&mut run, &mut controls, &mut targets, &mut rewritten, out, &mut scratch_cache);
            }
            controls.insert(control);
            targets.insert(target);
            run.push((control, target));
        } else {
            flush(&mut run, &mut controls, &mut targets, &mut rewritten, out, &mut scratch_cache);
            rewritten.push(gate);
        }
    }
    flush(&mut run, &mut controls, &mut targets, &mut rewritten, out, &mut scratch_cache);
    rewritten
}

fn rewrite_block(
    run: &[(usize, usize)],
    rewritten: &mut Vec<Gate>,
    out: &mut Circuit,
    scratch_cache: &mut BTreeMap<Vec<(usize, usize)>, Vec<usize>>,
) {
    // Pairs appearing an even number of times cancel exactly.
    let mut parity: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for &(control, target) in run {
        *parity.entry((target, control)).or_default() ^= true;
    }
    let pairs: Vec<(usize, usize)> = parity
        .iter()
        .filter_map(|(&pair, &live)| live.then_some(pair))
        .collect();
    // Per-control target lists, both sides ascending.
    let mut per_control: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut per_target: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(target, control) in &pairs {
        per_control.entry(control).or_default().push(target);
        per_target.entry(target).or_default().push(control);
    }

    let scratch_total: usize = per_control.values().map(|t| t.len() - 1).sum();
    let scratch: Vec<usize> = if scratch_total == 0 {
        Vec::new()
    } else if let Some(cached) = scratch_cache.get(&pairs) {
        cached.clone()
    } else {
        let start = out.width;
        out.width += scratch_total;
        out.layout.push(WireRange::new(
            format!("scratch{}", scratch_cache.len()),
            start,
            scratch_total,
            WireRole::Scratch,
        ));
        let wires: Vec<usize> = (start..start + scratch_total).collect();
        scratch_cache.insert(pairs.clone(), wires.clone());
        wires
    };

    // A control's first target reads the original wire; later targets read
    // dedicated scratch copies.
    let mut copy_wire: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut fanouts: Vec<Gate> = Vec::new();
    let mut next_scratch = 0usize;
    for (&control, control_targets) in &per_control {
        copy_wire.insert((control, control_targets[0]), control);
        if control_targets.len() >= 2 {
            let copies: Vec<usize> = scratch[next_scratch..next_scratch + control_targets.len() - 1].to_vec();
            next_scratch += copies.len();
            for (i, &target) in control_targets[1..].iter().enumerate() {
                copy_wire.insert((control, target), copies[i]);
            }
            fanouts.push(Gate::Fanout { src: control, dst: copies });
        }
    }

    rewritten.extend(fanouts.iter().cloned());
    for (&target, target_controls) in &per_target {
        let src: Vec<usize> = target_controls.iter().map(|&c| copy_wire[&(c, target)]).collect();
        if src.len() == 1 {
            rewritten.push(Gate::Cnot { control: src[0], target });
        } else {
            rewritten.push(Gate::Parity { src, dst: target });
        }
    }
    rewritten.extend(fanouts.into_iter().rev());
}
