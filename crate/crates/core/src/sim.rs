//! Exact simulators.
//!
//! Three backends with disjoint strengths: [`phase_sim`] tracks one basis
//! state and an exact dyadic phase through the diagonal fragment
//! (X/CNOT/FANOUT/PARITY/P) at any width; [`macro_sim`] evaluates the
//! classical-reversible fragment (X/CNOT/FANOUT/PARITY/MCX) as plain bit
//! operations; [`statevector_sim`] applies full unitaries on a dense
//! amplitude vector and is the only backend that can run Hadamards, at
//! the price of a width cap.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

use crate::error::{Error, Result};
use crate::ir::{Circuit, Gate};
use crate::phase::DyadicPhase;

/// Width cap for dense simulation.
pub const MAX_STATEVECTOR_WIDTH: usize = 14;

/// Norm tolerance for dense-simulation inputs and outputs.
pub const STATEVECTOR_TOLERANCE: f64 = 1e-9;

/// Amplitude scalar for the dense simulator: any float with enough
/// conversions to build `1/√2` and the rotation angles.
pub trait Scalar: Float + FromPrimitive + std::fmt::Debug {}

impl<T> Scalar for T where T: Float + FromPrimitive + std::fmt::Debug {}

/// One computational-basis state with an exact global phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisState {
    pub bits: Vec<bool>,
    pub phase: DyadicPhase,
}

impl BasisState {
    /// The all-zeros state of the given width.
    pub fn zeros(width: usize) -> Self {
        BasisState { bits: vec![false; width], phase: DyadicPhase::ZERO }
    }

    /// A basis state with the given bits and phase 1.
    pub fn from_bits(bits: Vec<bool>) -> Self {
        BasisState { bits, phase: DyadicPhase::ZERO }
    }

    /// Bits rendered as a string, wire 0 first.
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Advances one basis state through a diagonal-fragment circuit: bits
/// evolve classically, and every `P` gate on a set wire adds its exact
/// dyadic phase. Width-independent and integer-exact.
pub fn phase_sim(circuit: &Circuit, input: &BasisState) -> Result<BasisState> {
    if input.bits.len() != circuit.width {
        return Err(Error::validation(format!(
            "input has {} bits, circuit width is {}",
            input.bits.len(),
            circuit.width
        )));
    }
    let mut state = input.clone();
    for (index, gate) in circuit.gates.iter().enumerate() {
        apply_diagonal(gate, &mut state).map_err(|_| Error::Fragment {
            index,
            kind: gate.kind_name(),
            fragment: "diagonal",
        })?;
    }
    Ok(state)
}

fn apply_diagonal(gate: &Gate, state: &mut BasisState) -> std::result::Result<(), ()> {
    match gate {
        Gate::X { wire } => state.bits[*wire] ^= true,
        Gate::Cnot { control, target } => {
            let c = state.bits[*control];
            state.bits[*target] ^= c;
        }
        Gate::Fanout { src, dst } => {
            let s = state.bits[*src];
            for &d in dst {
                state.bits[d] ^= s;
            }
        }
        Gate::Parity { src, dst } => {
            let parity = src.iter().fold(false, |acc, &s| acc ^ state.bits[s]);
            state.bits[*dst] ^= parity;
        }
        Gate::P { wire, phase } => {
            if state.bits[*wire] {
                state.phase += *phase;
            }
        }
        Gate::H { .. } | Gate::Mcx { .. } | Gate::Mcz { .. } => return Err(()),
    }
    Ok(())
}

/// Evaluates the classical-reversible fragment on a bit vector. `MCX`
/// flips its target when every control is set; phase-bearing gates are
/// rejected.
pub fn macro_sim(circuit: &Circuit, input: &[bool]) -> Result<Vec<bool>> {
    if input.len() != circuit.width {
        return Err(Error::validation(format!(
            "input has {} bits, circuit width is {}",
            input.len(),
            circuit.width
        )));
    }
    let mut bits = input.to_vec();
    for (index, gate) in circuit.gates.iter().enumerate() {
        match gate {
            Gate::X { wire } => bits[*wire] ^= true,
            Gate::Cnot { control, target } => {
                let c = bits[*control];
                bits[*target] ^= c;
            }
            Gate::Fanout { src, dst } => {
                let s = bits[*src];
                for &d in dst {
                    bits[d] ^= s;
                }
            }
            Gate::Parity { src, dst } => {
                let parity = src.iter().fold(false, |acc, &s| acc ^ bits[s]);
                bits[*dst] ^= parity;
            }
            Gate::Mcx { controls, target } => {
                if controls.iter().all(|&c| bits[c]) {
                    bits[*target] ^= true;
                }
            }
            Gate::H { .. } | Gate::P { .. } | Gate::Mcz { .. } => {
                return Err(Error::Fragment {
                    index,
                    kind: gate.kind_name(),
                    fragment: "classical-reversible",
                })
            }
        }
    }
    Ok(bits)
}

/// Applies a primitive circuit to a dense amplitude vector of length
/// `2^width`; wire `w` is bit `w` of the basis index. The input must be
/// normalized within [`STATEVECTOR_TOLERANCE`].
pub fn statevector_sim<T: Scalar>(
    circuit: &Circuit,
    input: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    if circuit.width > MAX_STATEVECTOR_WIDTH {
        return Err(Error::Resource(format!(
            "width {} exceeds the dense-simulation cap {MAX_STATEVECTOR_WIDTH}",
            circuit.width
        )));
    }
    let dim = 1usize << circuit.width;
    if input.len() != dim {
        return Err(Error::validation(format!(
            "state vector has {} amplitudes, expected {dim}",
            input.len()
        )));
    }
    let norm: f64 = input
        .iter()
        .map(|a| a.norm_sqr().to_f64().unwrap_or(f64::NAN))
        .sum();
    let deviation = (norm.sqrt() - 1.0).abs();
    if deviation.is_nan() || deviation > STATEVECTOR_TOLERANCE {
        return Err(Error::validation(format!(
            "input state norm {} is not 1 within {STATEVECTOR_TOLERANCE}",
            norm.sqrt()
        )));
    }

    let inv_sqrt2 = T::from_f64(std::f64::consts::FRAC_1_SQRT_2).expect("scalar conversion");
    let mut state = input.to_vec();
    for (index, gate) in circuit.gates.iter().enumerate() {
        match gate {
            Gate::H { wire } => {
                let bit = 1usize << wire;
                for i in 0..dim {
                    if i & bit == 0 {
                        let a = state[i];
                        let b = state[i | bit];
                        state[i] = (a + b) * inv_sqrt2;
                        state[i | bit] = (a - b) * inv_sqrt2;
                    }
                }
            }
            Gate::X { wire } => {
                let bit = 1usize << wire;
                for i in 0..dim {
                    if i & bit == 0 {
                        state.swap(i, i | bit);
                    }
                }
            }
            Gate::P { wire, phase } => {
                let bit = 1usize << wire;
                let factor = Complex::from_polar(
                    T::one(),
                    T::from_f64(phase.radians()).expect("scalar conversion"),
                );
                for (i, amp) in state.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *amp = *amp * factor;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let c = 1usize << control;
                let t = 1usize << target;
                for i in 0..dim {
                    if i & c != 0 && i & t == 0 {
                        state.swap(i, i | t);
                    }
                }
            }
            Gate::Fanout { src, dst } => {
                let s = 1usize << src;
                let flip: usize = dst.iter().map(|&d| 1usize << d).sum();
                let anchor = 1usize << dst[0];
                for i in 0..dim {
                    if i & s != 0 && i & anchor == 0 {
                        state.swap(i, i ^ flip);
                    }
                }
            }
            Gate::Parity { src, dst } => {
                let mask: usize = src.iter().map(|&s| 1usize << s).sum();
                let t = 1usize << dst;
                for i in 0..dim {
                    if (i & mask).count_ones() % 2 == 1 && i & t == 0 {
                        state.swap(i, i | t);
                    }
                }
            }
            Gate::Mcx { .. } | Gate::Mcz { .. } => {
                return Err(Error::Fragment {
                    index,
                    kind: gate.kind_name(),
                    fragment: "primitive",
                })
            }
        }
    }
    Ok(state)
}

/// Basis index of a bit pattern under the simulator's wire convention.
pub fn basis_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0usize, |acc, (w, &b)| if b { acc | 1 << w } else { acc })
}
