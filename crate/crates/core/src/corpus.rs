//! Seeded random ESOP instances for randomized testing.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boolean::BooleanFunction;

/// Default generator seed; fixed so test runs are reproducible.
pub const DEFAULT_CORPUS_SEED: u64 = 271_828;

/// Bounds for generated functions.
#[derive(Clone, Copy, Debug)]
pub struct CorpusParams {
    pub max_vars: usize,
    pub max_clauses: usize,
    pub max_clause_size: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_vars: 6, max_clauses: 8, max_clause_size: 4 }
    }
}

/// Draws one function within the bounds: 2..=max_vars variables,
/// 1..=max_clauses nonempty clauses, and at least one clause of size ≥ 2
/// so every instance exercises a real decomposition block.
pub fn random_function(rng: &mut ChaCha8Rng, params: &CorpusParams) -> BooleanFunction {
    loop {
        let n = rng.gen_range(2..=params.max_vars);
        let clause_count = rng.gen_range(1..=params.max_clauses);
        let mut clauses = Vec::with_capacity(clause_count);
        for _ in 0..clause_count {
            let size = rng.gen_range(1..=params.max_clause_size.min(n));
            let clause = rand::seq::index::sample(rng, n, size)
                .into_iter()
                .map(|i| i + 1)
                .collect();
            clauses.push(clause);
        }
        let f = BooleanFunction::new(n, clauses).expect("indices are in range");
        if f.clauses().iter().any(|c| c.len() >= 2) {
            return f;
        }
    }
}

/// The deterministic corpus for a seed: `count` functions drawn in order.
pub fn corpus(seed: u64, count: usize, params: &CorpusParams) -> Vec<BooleanFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_function(&mut rng, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic_per_seed() {
        let params = CorpusParams::default();
        let a = corpus(DEFAULT_CORPUS_SEED, 20, &params);
        let b = corpus(DEFAULT_CORPUS_SEED, 20, &params);
        assert_eq!(a, b);
        let c = corpus(DEFAULT_CORPUS_SEED + 1, 20, &params);
        assert_ne!(a, c);
    }

    #[test]
    fn corpus_respects_bounds() {
        let params = CorpusParams::default();
        for f in corpus(DEFAULT_CORPUS_SEED, 100, &params) {
            assert!(f.n() >= 2 && f.n() <= params.max_vars);
            assert!(!f.clauses().is_empty() && f.clauses().len() <= params.max_clauses);
            assert!(f.clauses().iter().all(|c| !c.is_empty() && c.len() <= params.max_clause_size));
            assert!(f.clauses().iter().any(|c| c.len() >= 2));
        }
    }
}
