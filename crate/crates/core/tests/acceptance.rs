//! Acceptance suite: one test per exit criterion, each printing a
//! pass/fail line. Run with `cargo test -p qesop-core --test acceptance
//! -- --nocapture` to see the lines.

use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qesop_core::corpus::{corpus, CorpusParams, DEFAULT_CORPUS_SEED};
use qesop_core::{
    alternating_binomial_sum, basis_index, binomial, check_and_xor_identity, lower, phase_sim,
    size_estimate, statevector_sim, synth_disjunction, synth_mcx, synth_mcz, synth_oracle,
    verify_mcz, verify_mcz_circuit, verify_oracle, Amplitude, BasisState, BooleanFunction,
    Circuit, CostModel, DyadicPhase, Gate,
};

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        match $cond {
            true => {}
            false => return Err(format!($($arg)*)),
        }
    };
}

fn report(name: &str, result: Result<(), String>) {
    match &result {
        Ok(()) => println!("ACCEPTANCE {name}: PASS"),
        Err(reason) => println!("ACCEPTANCE {name}: FAIL — {reason}"),
    }
    if let Err(reason) = result {
        panic!("{name}: {reason}");
    }
}

fn acceptance_corpus() -> Vec<BooleanFunction> {
    corpus(DEFAULT_CORPUS_SEED, 200, &CorpusParams::default())
}

#[test]
fn lemma3_identity() {
    report("and-xor identity n in [1,16]", (|| {
        let start = Instant::now();
        for n in 1..=16 {
            ensure!(
                check_and_xor_identity(n).map_err(|e| e.to_string())?,
                "identity fails at n={n}"
            );
        }
        let elapsed = start.elapsed();
        ensure!(
            elapsed.as_secs_f64() < 10.0,
            "sweep took {elapsed:?}, budget is 10 s"
        );
        Ok(())
    })());
}

#[test]
fn binomial_lemmas() {
    report("binomial identities n in [1,60]", (|| {
        for n in 1..=60u32 {
            let sum = alternating_binomial_sum(n).map_err(|e| e.to_string())?;
            ensure!(sum == 1, "alternating sum at n={n} is {sum}");
        }
        for n in 1..60u32 {
            for k in 1..=n {
                let lhs = binomial(n + 1, k).map_err(|e| e.to_string())?;
                let rhs = binomial(n, k - 1).map_err(|e| e.to_string())?
                    + binomial(n, k).map_err(|e| e.to_string())?;
                ensure!(lhs == rhs, "Pascal fails at n={n} k={k}");
            }
        }
        Ok(())
    })());
}

#[test]
fn mcz_counts_and_exhaustive_sweep() {
    report("mcz rotation/ancilla counts and exhaustive sweeps", (|| {
        let start = Instant::now();
        for controls in 1..=10usize {
            let circuit = synth_mcz(controls).map_err(|e| e.to_string())?;
            let p = circuit.gate_counts().count("P");
            ensure!(
                p == (1u64 << (controls + 1)) - 1,
                "mcz({controls}) has {p} rotations"
            );
            let ancillas = circuit.ancilla_count();
            ensure!(
                ancillas == (1usize << (controls + 1)) - controls - 2,
                "mcz({controls}) has {ancillas} ancillas"
            );
        }
        for controls in 1..=12usize {
            let report = verify_mcz(controls).map_err(|e| e.to_string())?;
            ensure!(
                report.passed(),
                "verify_mcz({controls}) failed: {:?}",
                report.failures.first()
            );
            ensure!(
                report.total_inputs == 1 << (controls + 1),
                "verify_mcz({controls}) swept {} inputs",
                report.total_inputs
            );
        }
        let elapsed = start.elapsed();
        ensure!(
            elapsed.as_secs_f64() < 30.0,
            "sweeps took {elapsed:?}, budget is 30 s"
        );
        Ok(())
    })());
}

#[test]
fn oracle_depth() {
    report("oracle macro depth 5 and constant expanded depth", (|| {
        let f4 = BooleanFunction::pairwise(4).unwrap();
        let d = synth_oracle(&f4)
            .map_err(|e| e.to_string())?
            .depth(CostModel::Macro)
            .map_err(|e| e.to_string())?;
        ensure!(d == 5, "f4 macro depth is {d}");

        for (i, f) in acceptance_corpus().iter().enumerate() {
            let d = synth_oracle(f)
                .map_err(|e| e.to_string())?
                .depth(CostModel::Macro)
                .map_err(|e| e.to_string())?;
            ensure!(d == 5, "corpus function {i} has macro depth {d}");
        }

        let mut depths = Vec::new();
        for k in 2..=8usize {
            let f = BooleanFunction::conjunction(k).unwrap();
            let lowered = lower(&synth_oracle(&f).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            depths.push(lowered.depth(CostModel::Expanded).map_err(|e| e.to_string())?);
        }
        ensure!(
            depths.iter().all(|&d| d == depths[0]),
            "expanded depths vary across |K| in [2,8]: {depths:?}"
        );
        Ok(())
    })());
}

#[test]
fn oracle_exactness() {
    report("oracle exactness and mutant rejection", (|| {
        let f4 = BooleanFunction::pairwise(4).unwrap();
        let oracle = synth_oracle(&f4).map_err(|e| e.to_string())?;
        let rep = verify_oracle(&oracle, &f4).map_err(|e| e.to_string())?;
        ensure!(rep.passed(), "f4 oracle failed: {:?}", rep.failures.first());
        ensure!(rep.total_inputs == 32, "f4 swept {} inputs", rep.total_inputs);

        for (i, f) in acceptance_corpus().iter().enumerate() {
            let oracle = synth_oracle(f).map_err(|e| e.to_string())?;
            let rep = verify_oracle(&oracle, f).map_err(|e| e.to_string())?;
            ensure!(
                rep.passed(),
                "corpus function {i} failed: {:?}",
                rep.failures.first()
            );
        }

        for n in 1..=8usize {
            let f = BooleanFunction::disjunction_esop(n).unwrap();
            let circuit = synth_disjunction(n).map_err(|e| e.to_string())?;
            let rep = verify_oracle(&circuit, &f).map_err(|e| e.to_string())?;
            ensure!(
                rep.passed(),
                "disjunction({n}) failed: {:?}",
                rep.failures.first()
            );
        }

        // Fault injection: each mutant must be rejected with a nonempty
        // failure list.
        let mut flipped = synth_mcz(2).unwrap();
        let p = flipped.gates.iter().position(|g| matches!(g, Gate::P { .. })).unwrap();
        if let Gate::P { phase, .. } = &mut flipped.gates[p] {
            *phase = -*phase;
        }
        let rep = verify_mcz_circuit(&flipped, 3).map_err(|e| e.to_string())?;
        ensure!(!rep.failures.is_empty(), "flipped phase sign was accepted");

        let mut dropped = synth_mcz(2).unwrap();
        let p = dropped.gates.iter().position(|g| matches!(g, Gate::P { .. })).unwrap();
        dropped.gates.remove(p);
        let rep = verify_mcz_circuit(&dropped, 3).map_err(|e| e.to_string())?;
        ensure!(!rep.failures.is_empty(), "dropped rotation was accepted");

        let mut truncated = synth_oracle(&f4).unwrap();
        truncated.gates.pop();
        let rep = verify_oracle(&truncated, &f4).map_err(|e| e.to_string())?;
        ensure!(!rep.failures.is_empty(), "dropped uncompute was accepted");
        Ok(())
    })());
}

#[test]
fn size_law() {
    report("size estimate matches built circuits", (|| {
        for (i, f) in acceptance_corpus().iter().enumerate() {
            let estimate = size_estimate(f).map_err(|e| e.to_string())?;
            let oracle = synth_oracle(f).map_err(|e| e.to_string())?;
            ensure!(
                estimate.width == oracle.width as u64,
                "corpus {i}: predicted width {} built {}",
                estimate.width,
                oracle.width
            );
            ensure!(
                estimate.ancilla_count == oracle.ancilla_count() as u64,
                "corpus {i}: predicted ancillas {} built {}",
                estimate.ancilla_count,
                oracle.ancilla_count()
            );
            let lowered = lower(&oracle).map_err(|e| e.to_string())?;
            let rotations = lowered.gate_counts().count("P");
            ensure!(
                estimate.rotation_count == rotations,
                "corpus {i}: predicted rotations {} built {}",
                estimate.rotation_count,
                rotations
            );
        }

        // Conjunction family: one multi-controlled NOT costs 2^{n+1} − 1
        // rotations.
        for n in 2..=10usize {
            let lowered = lower(&synth_mcx(n).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let rotations = lowered.gate_counts().count("P");
            ensure!(
                rotations == (1u64 << (n + 1)) - 1,
                "mcx({n}) lowered to {rotations} rotations"
            );
        }

        // Pairwise family: quadratic width, exactly (n+1) + 7·C(n,2).
        for n in 2..=16usize {
            let f = BooleanFunction::pairwise(n).unwrap();
            let estimate = size_estimate(&f).map_err(|e| e.to_string())?;
            let expected = (n as u64 + 1) + 7 * (n as u64) * (n as u64 - 1) / 2;
            ensure!(
                estimate.width == expected,
                "pairwise({n}) predicted width {}",
                estimate.width
            );
            if n <= 8 {
                let oracle = synth_oracle(&f).map_err(|e| e.to_string())?;
                ensure!(
                    oracle.width as u64 == expected,
                    "pairwise({n}) built width {}",
                    oracle.width
                );
            }
        }
        Ok(())
    })());
}

fn random_diagonal_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let width = rng.gen_range(2..=12usize);
    let mut circuit = Circuit::new(width, "random_diagonal");
    let gates = rng.gen_range(1..=30usize);
    for _ in 0..gates {
        let kind = rng.gen_range(0..5usize);
        let gate = match kind {
            0 => Gate::X { wire: rng.gen_range(0..width) },
            1 => Gate::P {
                wire: rng.gen_range(0..width),
                phase: DyadicPhase::new(rng.gen_range(-8..8), rng.gen_range(0..4)),
            },
            2 => {
                let picks = rand::seq::index::sample(rng, width, 2);
                Gate::Cnot { control: picks.index(0), target: picks.index(1) }
            }
            3 => {
                let count = rng.gen_range(2..=3.min(width));
                let picks = rand::seq::index::sample(rng, width, count);
                let wires: Vec<usize> = picks.into_iter().collect();
                Gate::Fanout { src: wires[0], dst: wires[1..].to_vec() }
            }
            _ => {
                let count = rng.gen_range(2..=3.min(width));
                let picks = rand::seq::index::sample(rng, width, count);
                let wires: Vec<usize> = picks.into_iter().collect();
                Gate::Parity { src: wires[1..].to_vec(), dst: wires[0] }
            }
        };
        circuit.gates.push(gate);
    }
    circuit
}

#[test]
fn simulator_cross_check() {
    report("dense simulator agrees with the exact one", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_CORPUS_SEED);
        for trial in 0..1000usize {
            let circuit = random_diagonal_circuit(&mut rng);
            let bits: Vec<bool> = (0..circuit.width).map(|_| rng.gen_bool(0.5)).collect();

            let exact = phase_sim(&circuit, &BasisState::from_bits(bits.clone()))
                .map_err(|e| e.to_string())?;

            let dim = 1usize << circuit.width;
            let mut input = vec![Amplitude::new(0.0, 0.0); dim];
            input[basis_index(&bits)] = Amplitude::new(1.0, 0.0);
            let dense = statevector_sim(&circuit, &input).map_err(|e| e.to_string())?;

            let expected_index = basis_index(&exact.bits);
            let expected_amp = Amplitude::from_polar(1.0, exact.phase.radians());
            for (i, amp) in dense.iter().enumerate() {
                let want = if i == expected_index {
                    expected_amp
                } else {
                    Amplitude::new(0.0, 0.0)
                };
                ensure!(
                    (amp - want).norm() <= 1e-9,
                    "trial {trial}: amplitude {i} off by {}",
                    (amp - want).norm()
                );
            }
        }

        // Lowered Toffoli against the 8-entry permutation.
        let toffoli = lower(&synth_mcx(2).unwrap()).map_err(|e| e.to_string())?;
        for idx in 0..8usize {
            let mut bits = vec![false; toffoli.width];
            for (w, bit) in bits.iter_mut().enumerate().take(3) {
                *bit = idx >> w & 1 == 1;
            }
            let dim = 1usize << toffoli.width;
            let mut input = vec![Complex::<f64>::new(0.0, 0.0); dim];
            input[basis_index(&bits)] = Complex::new(1.0, 0.0);
            let out = statevector_sim(&toffoli, &input).map_err(|e| e.to_string())?;
            let mut expected = bits.clone();
            if expected[0] && expected[1] {
                expected[2] ^= true;
            }
            let expected_index = basis_index(&expected);
            for (i, amp) in out.iter().enumerate() {
                let want = if i == expected_index { 1.0 } else { 0.0 };
                ensure!(
                    (amp - Complex::new(want, 0.0)).norm() <= 1e-9,
                    "toffoli input {idx}: amplitude {i} was {amp}"
                );
            }
        }
        Ok(())
    })());
}
