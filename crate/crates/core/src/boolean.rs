//! Boolean functions in XOR-of-ANDs (ESOP) form, the AND/XOR expansion
//! that drives the rotation layer of the multi-controlled Z decomposition,
//! and the binomial identities backing it.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Variable-count cap for exhaustive truth tables.
pub const MAX_TRUTH_TABLE_VARS: usize = 24;

/// Variable-count cap for the expansion generator.
pub const MAX_EXPANSION_VARS: usize = 20;

/// Variable-count cap for the exhaustive expansion identity check.
pub const MAX_IDENTITY_VARS: usize = 16;

/// A boolean function `x ↦ ⊕_i ∧_{k∈K_i} x_k` over variables `x_1..x_n`.
///
/// Each clause is a subset of `{1..n}` kept sorted and deduplicated. The
/// empty clause is the constant-1 term. Clause order is preserved from the
/// input, and duplicate clauses are kept: they cancel under XOR but the
/// synthesizer emits them verbatim (see [`BooleanFunction::canonicalize`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    clauses: Vec<Vec<usize>>,
}

impl BooleanFunction {
    /// Builds a function over `n ≥ 1` variables, sorting and deduplicating
    /// the indices inside each clause.
    pub fn new(n: usize, clauses: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("variable count must be positive"));
        }
        let mut canonical = Vec::with_capacity(clauses.len());
        for mut clause in clauses {
            clause.sort_unstable();
            clause.dedup();
            if let Some(&bad) = clause.iter().find(|&&i| i == 0 || i > n) {
                return Err(Error::validation(format!(
                    "variable index {bad} out of range 1..={n}"
                )));
            }
            canonical.push(clause);
        }
        Ok(BooleanFunction { n, clauses: canonical })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Clauses in input order, each sorted ascending.
    pub fn clauses(&self) -> &[Vec<usize>] {
        &self.clauses
    }

    /// The single conjunction `x_1 ∧ … ∧ x_n`.
    pub fn conjunction(n: usize) -> Result<Self> {
        Self::new(n, vec![(1..=n).collect()])
    }

    /// The pairwise form `⊕_{i<j} x_i ∧ x_j`; at `n = 4` this is the
    /// six-term example function used throughout the tests.
    pub fn pairwise(n: usize) -> Result<Self> {
        let mut clauses = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                clauses.push(vec![i, j]);
            }
        }
        Self::new(n, clauses)
    }

    /// The ESOP of the disjunction `x_1 ∨ … ∨ x_n`: by inclusion-exclusion
    /// mod 2 this is the XOR of all `2^n − 1` nonempty conjunctions.
    pub fn disjunction_esop(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_EXPANSION_VARS {
            return Err(Error::validation(format!(
                "disjunction arity {n} out of range 1..={MAX_EXPANSION_VARS}"
            )));
        }
        Self::new(n, subsets_by_size_then_lex(n))
    }

    /// Evaluates the function on an assignment of all `n` variables.
    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::validation(format!(
                "assignment has {} bits, function expects {}",
                x.len(),
                self.n
            )));
        }
        let mut acc = false;
        for clause in &self.clauses {
            acc ^= clause.iter().all(|&k| x[k - 1]);
        }
        Ok(acc)
    }

    /// Full truth table of length `2^n`. The entry at index `i` is the
    /// value at the assignment whose binary expansion is `i` with `x_1`
    /// as the most significant bit.
    pub fn truth_table(&self) -> Result<Vec<bool>> {
        if self.n > MAX_TRUTH_TABLE_VARS {
            return Err(Error::Resource(format!(
                "truth table over {} variables exceeds the {MAX_TRUTH_TABLE_VARS}-variable cap",
                self.n
            )));
        }
        let mut table = Vec::with_capacity(1 << self.n);
        let mut x = vec![false; self.n];
        for idx in 0u64..(1 << self.n) {
            for (k, slot) in x.iter_mut().enumerate() {
                *slot = idx >> (self.n - 1 - k) & 1 == 1;
            }
            table.push(self.evaluate(&x)?);
        }
        Ok(table)
    }

    /// Removes XOR-cancelling clause pairs, keeping the first occurrence
    /// of every clause that appears an odd number of times.
    #[must_use]
    pub fn canonicalize(&self) -> BooleanFunction {
        let mut kept: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<&Vec<usize>> = Vec::new();
        for clause in &self.clauses {
            if seen.contains(&clause) {
                continue;
            }
            seen.push(clause);
            let count = self.clauses.iter().filter(|c| *c == clause).count();
            if count % 2 == 1 {
                kept.push(clause.clone());
            }
        }
        BooleanFunction { n: self.n, clauses: kept }
    }

    /// Parses the ESOP text format: a `vars <n>` line followed by zero or
    /// more `term <i1> <i2> …` lines. Blank lines and `#` comments are
    /// ignored; indices need not be sorted; duplicates within a term are
    /// dropped; a bare `term` is the constant-1 clause.
    pub fn parse_esop(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut clauses: Vec<Vec<usize>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            match tokens.next() {
                Some("vars") => {
                    if n.is_some() {
                        return Err(Error::Parse {
                            line,
                            message: "duplicate vars line".into(),
                        });
                    }
                    let value = tokens.next().ok_or_else(|| Error::Parse {
                        line,
                        message: "vars line needs a count".into(),
                    })?;
                    if tokens.next().is_some() {
                        return Err(Error::Parse {
                            line,
                            message: "vars line takes a single count".into(),
                        });
                    }
                    let count: i64 = value.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("invalid variable count {value:?}"),
                    })?;
                    if count <= 0 {
                        return Err(Error::validation(format!(
                            "variable count must be positive, got {count} (line {line})"
                        )));
                    }
                    n = Some(count as usize);
                }
                Some("term") => {
                    let n = n.ok_or_else(|| Error::Parse {
                        line,
                        message: "term before vars line".into(),
                    })?;
                    let mut clause = Vec::new();
                    for token in tokens {
                        let index: usize = token.parse().map_err(|_| Error::Parse {
                            line,
                            message: format!("invalid variable index {token:?}"),
                        })?;
                        if index == 0 || index > n {
                            return Err(Error::validation(format!(
                                "variable index {index} out of range 1..={n} (line {line})"
                            )));
                        }
                        clause.push(index);
                    }
                    clause.sort_unstable();
                    clause.dedup();
                    clauses.push(clause);
                }
                Some(other) => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `vars` or `term`, found {other:?}"),
                    });
                }
                None => unreachable!("blank lines were filtered"),
            }
        }
        let n = n.ok_or_else(|| Error::Parse {
            line: text.lines().count() + 1,
            message: "missing vars line".into(),
        })?;
        BooleanFunction::new(n, clauses)
    }

    /// Serializes to the canonical ESOP text form parsed by
    /// [`BooleanFunction::parse_esop`].
    pub fn to_esop(&self) -> String {
        let mut out = format!("vars {}\n", self.n);
        for clause in &self.clauses {
            out.push_str("term");
            for index in clause {
                let _ = write!(out, " {index}");
            }
            out.push('\n');
        }
        out
    }
}

/// One parity term `sign · (⊕_{k∈subset} x_k)` of the AND/XOR expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedParityTerm {
    subset: Vec<usize>,
    sign: i8,
}

impl SignedParityTerm {
    fn new(subset: Vec<usize>) -> Self {
        debug_assert!(!subset.is_empty());
        let sign = if subset.len() % 2 == 1 { 1 } else { -1 };
        SignedParityTerm { subset, sign }
    }

    /// Nonempty subset of `{1..n}`, sorted ascending.
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// `(−1)^{|subset|−1}`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Evaluates `sign · ⊕_{k∈subset} x_k` on an assignment.
    pub fn evaluate(&self, x: &[bool]) -> i64 {
        let parity = self.subset.iter().fold(false, |acc, &k| acc ^ x[k - 1]);
        if parity {
            self.sign as i64
        } else {
            0
        }
    }
}

/// All nonempty subsets of `{1..n}` ordered by size then lexicographically.
pub(crate) fn subsets_by_size_then_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity((1usize << n) - 1);
    for size in 1..=n {
        let mut combo: Vec<usize> = (1..=size).collect();
        'combos: loop {
            out.push(combo.clone());
            // Advance the rightmost index that still has headroom.
            let mut i = size;
            while i > 0 {
                i -= 1;
                if combo[i] < n - (size - 1 - i) {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    continue 'combos;
                }
            }
            break;
        }
    }
    out
}

/// The expansion `2^{n−1}·∧_i x_i = Σ_K (−1)^{|K|−1}(⊕_{k∈K} x_k)` as a
/// term list: every nonempty subset of `{1..n}`, size-then-lex ordered,
/// with sign `(−1)^{|K|−1}`.
pub fn and_xor_expansion(n: usize) -> Result<Vec<SignedParityTerm>> {
    if n == 0 || n > MAX_EXPANSION_VARS {
        return Err(Error::validation(format!(
            "expansion arity {n} out of range 1..={MAX_EXPANSION_VARS}"
        )));
    }
    Ok(subsets_by_size_then_lex(n)
        .into_iter()
        .map(SignedParityTerm::new)
        .collect())
}

/// Exhaustively checks the expansion identity: for every assignment of
/// `n` bits, `2^{n−1}·(∧_i x_i)` must equal the signed-integer sum of the
/// expansion terms. The sweep is partitioned across threads.
pub fn check_and_xor_identity(n: usize) -> Result<bool> {
    if n == 0 || n > MAX_IDENTITY_VARS {
        return Err(Error::validation(format!(
            "identity check arity {n} out of range 1..={MAX_IDENTITY_VARS}"
        )));
    }
    let terms = and_xor_expansion(n)?;
    // Pack each subset into a bitmask so the inner loop is a popcount.
    let packed: Vec<(u32, i64)> = terms
        .iter()
        .map(|t| {
            let mask = t.subset().iter().fold(0u32, |m, &k| m | 1 << (k - 1));
            (mask, t.sign() as i64)
        })
        .collect();
    let all_ones = (1u32 << n) - 1;
    let ok = (0u32..1 << n).into_par_iter().all(|x| {
        let sum: i64 = packed
            .iter()
            .map(|&(mask, sign)| sign * ((mask & x).count_ones() & 1) as i64)
            .sum();
        let conj = if x == all_ones { 1i64 << (n - 1) } else { 0 };
        sum == conj
    });
    Ok(ok)
}

/// Binomial coefficient `C(n, k)` for `0 ≤ k ≤ n ≤ 60`, exact in `u64`.
pub fn binomial(n: u32, k: u32) -> Result<u64> {
    if n > 60 {
        return Err(Error::validation(format!("binomial n={n} exceeds 60")));
    }
    if k > n {
        return Err(Error::validation(format!("binomial k={k} exceeds n={n}")));
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    Ok(acc as u64)
}

/// `Σ_{i=1}^{n} (−1)^{i−1}·C(n,i)`, which is 1 for every `n ≥ 1`.
pub fn alternating_binomial_sum(n: u32) -> Result<i64> {
    if n == 0 || n > 60 {
        return Err(Error::validation(format!(
            "alternating sum arity {n} out of range 1..=60"
        )));
    }
    let mut sum: i64 = 0;
    for i in 1..=n {
        let c = binomial(n, i)? as i64;
        sum += if i % 2 == 1 { c } else { -c };
    }
    Ok(sum)
}
