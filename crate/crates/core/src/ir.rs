//! Gate and circuit data model, register layout, and the analyzers
//! (validation, depth under both cost models, gate counts, and the
//! closed-form size prediction).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::boolean::BooleanFunction;
use crate::error::{Error, Result};
use crate::phase::DyadicPhase;

/// Overflow guard for the closed-form size prediction.
const SIZE_CAP: u64 = 1 << 62;

/// A single gate. `H`/`X`/`P`/`CNOT`/`FANOUT`/`PARITY` are primitive;
/// `MCX`/`MCZ` are macros that the lowering pass expands.
///
/// `FANOUT` XOR-copies one source onto every target in one step; `PARITY`
/// XORs every source into one target in one step. `P` is the diagonal
/// `diag(1, e^{iπk/2^m})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Gate {
    #[serde(rename = "H")]
    H { wire: usize },
    #[serde(rename = "X")]
    X { wire: usize },
    #[serde(rename = "P")]
    P {
        wire: usize,
        #[serde(flatten)]
        phase: DyadicPhase,
    },
    #[serde(rename = "CNOT")]
    Cnot { control: usize, target: usize },
    #[serde(rename = "FANOUT")]
    Fanout { src: usize, dst: Vec<usize> },
    #[serde(rename = "PARITY")]
    Parity { src: Vec<usize>, dst: usize },
    #[serde(rename = "MCX")]
    Mcx { controls: Vec<usize>, target: usize },
    #[serde(rename = "MCZ")]
    Mcz { wires: Vec<usize> },
}

impl Gate {
    /// Every wire the gate touches, in operand order.
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::H { wire } | Gate::X { wire } | Gate::P { wire, .. } => vec![*wire],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Fanout { src, dst } => {
                let mut w = vec![*src];
                w.extend_from_slice(dst);
                w
            }
            Gate::Parity { src, dst } => {
                let mut w = src.clone();
                w.push(*dst);
                w
            }
            Gate::Mcx { controls, target } => {
                let mut w = controls.clone();
                w.push(*target);
                w
            }
            Gate::Mcz { wires } => wires.clone(),
        }
    }

    pub fn is_macro(&self) -> bool {
        matches!(self, Gate::Mcx { .. } | Gate::Mcz { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::H { .. } => "H",
            Gate::X { .. } => "X",
            Gate::P { .. } => "P",
            Gate::Cnot { .. } => "CNOT",
            Gate::Fanout { .. } => "FANOUT",
            Gate::Parity { .. } => "PARITY",
            Gate::Mcx { .. } => "MCX",
            Gate::Mcz { .. } => "MCZ",
        }
    }
}

/// What a contiguous run of wires is for. `Ancilla` and `Scratch` wires
/// must start and end in state 0 on every basis input; the simulator
/// checks this, construction does not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireRole {
    Input,
    Target,
    Ancilla,
    Scratch,
}

/// A labeled contiguous wire range in the register layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireRange {
    pub label: String,
    pub start: usize,
    pub len: usize,
    pub role: WireRole,
}

impl WireRange {
    pub fn new(label: impl Into<String>, start: usize, len: usize, role: WireRole) -> Self {
        WireRange { label: label.into(), start, len, role }
    }

    pub fn contains(&self, wire: usize) -> bool {
        wire >= self.start && wire < self.start + self.len
    }

    pub fn wires(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// An ordered gate list over a labeled register layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub width: usize,
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub layout: Vec<WireRange>,
    pub gates: Vec<Gate>,
}

/// How depth is counted: `Macro` gives every gate (macros included) one
/// timestep; `Expanded` is defined on primitive circuits only. In both
/// models two gates share a timestep iff their wire sets are disjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostModel {
    Macro,
    Expanded,
}

/// One invariant violation found by [`Circuit::validate`]. Gate issues
/// carry the offending gate index; layout issues carry none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub gate: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.gate {
            Some(index) => write!(f, "gate {index}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Gate totals per kind, with rotations further grouped by phase.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub by_kind: BTreeMap<&'static str, u64>,
    pub p_by_phase: BTreeMap<DyadicPhase, u64>,
}

impl GateCounts {
    pub fn count(&self, kind: &str) -> u64 {
        self.by_kind.get(kind).copied().unwrap_or(0)
    }
}

impl Circuit {
    pub fn new(width: usize, name: impl Into<String>) -> Self {
        Circuit {
            width,
            name: name.into(),
            warnings: Vec::new(),
            layout: Vec::new(),
            gates: Vec::new(),
        }
    }

    pub fn has_macros(&self) -> bool {
        self.gates.iter().any(Gate::is_macro)
    }

    /// Wires flagged as must-restore (ancilla or scratch ranges).
    pub fn restored_wires(&self) -> Vec<usize> {
        let mut wires = Vec::new();
        for range in &self.layout {
            if matches!(range.role, WireRole::Ancilla | WireRole::Scratch) {
                wires.extend(range.wires());
            }
        }
        wires
    }

    /// Total ancilla plus scratch wires declared in the layout.
    pub fn ancilla_count(&self) -> usize {
        self.layout
            .iter()
            .filter(|r| matches!(r.role, WireRole::Ancilla | WireRole::Scratch))
            .map(|r| r.len)
            .sum()
    }

    /// Checks wire ranges, distinctness, and operand-arity invariants on
    /// every gate. All violations are reported, none aborts the scan.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        let mut push =
            |gate: usize, message: String| issues.push(ValidationIssue { gate: Some(gate), message });
        for (index, gate) in self.gates.iter().enumerate() {
            let wires = gate.wires();
            for &w in &wires {
                if w >= self.width {
                    push(index, format!("wire {w} outside width {}", self.width));
                }
            }
            let mut seen = wires.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != wires.len() {
                push(index, "duplicate wire".into());
            }
            match gate {
                Gate::Fanout { dst, .. } if dst.is_empty() => {
                    push(index, "FANOUT needs at least one target".into());
                }
                Gate::Parity { src, .. } if src.is_empty() => {
                    push(index, "PARITY needs at least one source".into());
                }
                Gate::Mcx { controls, .. } if controls.is_empty() => {
                    push(index, "MCX needs at least one control".into());
                }
                Gate::Mcz { wires, .. } if wires.len() < 2 => {
                    push(index, "MCZ needs at least two wires".into());
                }
                _ => {}
            }
        }
        for range in &self.layout {
            if range.start + range.len > self.width {
                issues.push(ValidationIssue {
                    gate: None,
                    message: format!(
                        "layout range {:?} exceeds width {}",
                        range.label, self.width
                    ),
                });
            }
        }
        issues
    }

    /// Greedy earliest-timestep depth: each gate is placed one step after
    /// the latest gate it shares a wire with.
    pub fn depth(&self, model: CostModel) -> Result<usize> {
        if model == CostModel::Expanded {
            if let Some((index, gate)) = self.gates.iter().enumerate().find(|(_, g)| g.is_macro()) {
                return Err(Error::MacroInExpanded { index, kind: gate.kind_name() });
            }
        }
        let mut wire_time = vec![0usize; self.width];
        let mut depth = 0;
        for gate in &self.gates {
            let wires = gate.wires();
            let t = wires.iter().map(|&w| wire_time[w]).max().unwrap_or(0) + 1;
            for &w in &wires {
                wire_time[w] = t;
            }
            depth = depth.max(t);
        }
        Ok(depth)
    }

    /// Counts gates per kind, rotations additionally per phase.
    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for gate in &self.gates {
            *counts.by_kind.entry(gate.kind_name()).or_default() += 1;
            if let Gate::P { phase, .. } = gate {
                *counts.p_by_phase.entry(*phase).or_default() += 1;
            }
        }
        counts
    }

    /// Serializes to the stable circuit JSON schema. Deterministic:
    /// identical circuits yield byte-identical text.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("circuit serialization");
        out.push('\n');
        out
    }

    /// Parses circuit JSON and validates the result.
    pub fn from_json(text: &str) -> Result<Self> {
        let circuit: Circuit = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let issues = circuit.validate();
        if let Some(issue) = issues.first() {
            return Err(Error::validation(format!(
                "invalid circuit: {issue} ({} issue(s) total)",
                issues.len()
            )));
        }
        Ok(circuit)
    }
}

/// Closed-form prediction of the synthesized oracle's footprint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeEstimate {
    /// Macro-circuit wire count: inputs, target, and one block per clause.
    pub width: u64,
    /// Rotations after lowering: a compute/uncompute pair of
    /// `2^{|K|+1} − 1` per block of size ≥ 2.
    pub rotation_count: u64,
    /// Block wires (everything beyond inputs and target).
    pub ancilla_count: u64,
}

/// Predicts width, rotation count, and ancilla count of
/// `synth_oracle(f)` without building the circuit.
///
/// A block of clause size `s ≥ 2` holds `s` copies, one block target, and
/// the `2^{s+1} − s − 2` ancillas its Z-decomposition needs: `2^{s+1} − 1`
/// wires and `2·(2^{s+1} − 1)` rotations. A size-1 block degenerates to a
/// plain CNOT (copy plus target, no rotations); a constant-1 clause is a
/// single X on the target and contributes nothing.
pub fn size_estimate(f: &BooleanFunction) -> Result<SizeEstimate> {
    let mut width: u64 = f.n() as u64 + 1;
    let mut rotations: u64 = 0;
    for clause in f.clauses() {
        let s = clause.len() as u32;
        let (block_width, block_rotations) = match s {
            0 => (0, 0),
            1 => (2, 0),
            _ => {
                if s + 1 >= 62 {
                    return Err(Error::Resource(format!(
                        "clause of size {s} exceeds the 2^62 size guard"
                    )));
                }
                let per_mcx = (1u64 << (s + 1)) - 1;
                (per_mcx, 2 * per_mcx)
            }
        };
        width = width
            .checked_add(block_width)
            .filter(|&w| w < SIZE_CAP)
            .ok_or_else(|| Error::Resource("predicted width exceeds 2^62".into()))?;
        rotations = rotations
            .checked_add(block_rotations)
            .filter(|&r| r < SIZE_CAP)
            .ok_or_else(|| Error::Resource("predicted rotation count exceeds 2^62".into()))?;
    }
    Ok(SizeEstimate {
        width,
        rotation_count: rotations,
        ancilla_count: width - (f.n() as u64 + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    #[test]
    fn empty_circuit_is_valid_with_zero_depth() {
        let c = Circuit::new(3, "empty");
        assert!(c.validate().is_empty());
        assert_eq!(c.depth(CostModel::Macro).unwrap(), 0);
        assert_eq!(c.depth(CostModel::Expanded).unwrap(), 0);
        assert!(c.gate_counts().by_kind.is_empty());
    }

    #[test]
    fn validate_flags_duplicate_wires_with_gate_index() {
        let mut c = Circuit::new(4, "dup");
        c.gates.push(cnot(3, 3));
        let issues = c.validate();
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].gate, Some(0));
        assert!(issues[0].message.contains("duplicate"));
    }

    #[test]
    fn validate_accepts_fanout_and_flags_range_and_arity() {
        let mut c = Circuit::new(3, "fanout");
        c.gates.push(Gate::Fanout { src: 0, dst: vec![1, 2] });
        assert!(c.validate().is_empty());

        c.gates.push(Gate::Fanout { src: 0, dst: vec![5] });
        c.gates.push(Gate::Parity { src: vec![], dst: 1 });
        c.gates.push(Gate::Mcz { wires: vec![2] });
        let issues = c.validate();
        assert_eq!(issues.iter().filter(|i| i.gate == Some(1)).count(), 1);
        assert_eq!(issues.iter().filter(|i| i.gate == Some(2)).count(), 1);
        assert_eq!(issues.iter().filter(|i| i.gate == Some(3)).count(), 1);
    }

    #[test]
    fn depth_follows_wire_overlap() {
        let mut c = Circuit::new(4, "pairs");
        c.gates.push(cnot(0, 1));
        assert_eq!(c.depth(CostModel::Expanded).unwrap(), 1);
        c.gates.push(cnot(2, 3));
        assert_eq!(c.depth(CostModel::Expanded).unwrap(), 1);
        c.gates.push(cnot(1, 2));
        assert_eq!(c.depth(CostModel::Expanded).unwrap(), 2);
    }

    #[test]
    fn expanded_depth_rejects_macros() {
        let mut c = Circuit::new(3, "macro");
        c.gates.push(Gate::Mcx { controls: vec![0, 1], target: 2 });
        assert_eq!(c.depth(CostModel::Macro).unwrap(), 1);
        let err = c.depth(CostModel::Expanded).unwrap_err();
        assert!(matches!(err, Error::MacroInExpanded { index: 0, .. }));
    }

    #[test]
    fn gate_counts_group_rotations_by_phase() {
        let mut c = Circuit::new(2, "phases");
        c.gates.push(Gate::P { wire: 0, phase: DyadicPhase::new(1, 2) });
        c.gates.push(Gate::P { wire: 1, phase: DyadicPhase::new(1, 2) });
        c.gates.push(Gate::P { wire: 1, phase: DyadicPhase::new(-1, 2) });
        c.gates.push(Gate::H { wire: 0 });
        let counts = c.gate_counts();
        assert_eq!(counts.count("P"), 3);
        assert_eq!(counts.count("H"), 1);
        assert_eq!(counts.p_by_phase[&DyadicPhase::new(1, 2)], 2);
        assert_eq!(counts.p_by_phase[&DyadicPhase::new(-1, 2)], 1);
    }

    #[test]
    fn gate_json_matches_schema() {
        let g = Gate::P { wire: 3, phase: DyadicPhase::new(1, 2) };
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"kind":"P","wire":3,"k":1,"m":2}"#
        );
        let g = Gate::Fanout { src: 0, dst: vec![4, 5] };
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"kind":"FANOUT","src":0,"dst":[4,5]}"#
        );
    }

    #[test]
    fn circuit_json_round_trips_and_rejects_invalid() {
        let mut c = Circuit::new(3, "roundtrip");
        c.layout.push(WireRange::new("inputs", 0, 2, WireRole::Input));
        c.layout.push(WireRange::new("target", 2, 1, WireRole::Target));
        c.gates.push(cnot(0, 2));
        c.gates.push(Gate::P { wire: 1, phase: DyadicPhase::new(-1, 3) });
        let json = c.to_json();
        assert!(!json.contains('.'), "phases must serialize as integers: {json}");
        let back = Circuit::from_json(&json).unwrap();
        assert_eq!(back, c);

        let mut bad = Circuit::new(1, "bad");
        bad.gates.push(cnot(0, 5));
        assert!(Circuit::from_json(&bad.to_json()).is_err());
    }

    #[test]
    fn size_estimate_closed_forms() {
        let f4 = BooleanFunction::pairwise(4).unwrap();
        let est = size_estimate(&f4).unwrap();
        assert_eq!(est.width, 47);
        assert_eq!(est.rotation_count, 84);
        assert_eq!(est.ancilla_count, 42);

        for n in 2..=10u32 {
            let f = BooleanFunction::conjunction(n as usize).unwrap();
            let est = size_estimate(&f).unwrap();
            assert_eq!(est.rotation_count, 2 * ((1 << (n + 1)) - 1));
            assert_eq!(est.width, n as u64 + 1 + ((1 << (n + 1)) - 1));
        }

        let constant = BooleanFunction::new(2, vec![vec![]]).unwrap();
        let est = size_estimate(&constant).unwrap();
        assert_eq!((est.width, est.rotation_count, est.ancilla_count), (3, 0, 0));

        let big = BooleanFunction::new(62, vec![(1..=62).collect()]).unwrap();
        assert!(size_estimate(&big).is_err());
    }

    prop_compose! {
        fn arb_primitive_gate(width: usize)(
            kind in 0..4usize,
            a in 0..8usize,
            b in 0..8usize,
            k in -8i64..8,
            m in 0u32..4,
        ) -> Gate {
            let a = a % width;
            let b = b % width;
            let b = if a == b { (b + 1) % width } else { b };
            match kind {
                0 => Gate::H { wire: a },
                1 => Gate::P { wire: a, phase: DyadicPhase::new(k, m) },
                2 => Gate::X { wire: a },
                _ => Gate::Cnot { control: a, target: b },
            }
        }
    }

    proptest! {
        /// Swapping adjacent wire-disjoint gates never changes depth.
        #[test]
        fn depth_is_stable_under_disjoint_swaps(
            gates in proptest::collection::vec(arb_primitive_gate(8), 1..24),
            swap_at in 0usize..24,
        ) {
            let mut c = Circuit::new(8, "prop");
            c.gates = gates;
            let before = c.depth(CostModel::Expanded).unwrap();
            if c.gates.len() >= 2 {
                let i = swap_at % (c.gates.len() - 1);
                let wa = c.gates[i].wires();
                let wb = c.gates[i + 1].wires();
                if wa.iter().all(|w| !wb.contains(w)) {
                    c.gates.swap(i, i + 1);
                    prop_assert_eq!(c.depth(CostModel::Expanded).unwrap(), before);
                }
            }
        }
    }
}
