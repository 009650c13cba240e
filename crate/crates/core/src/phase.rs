//! Exact dyadic phases.
//!
//! A [`DyadicPhase`] stores the factor `e^{iπ·k/2^m}` as the integer pair
//! `(k, m)`. Phases are taken modulo 2π, so `k` lives in `[0, 2^{m+1})`,
//! and the pair is kept reduced (`k` odd, or `m = 0`). Every rotation the
//! synthesizer emits is of this form, which is what makes the phase
//! simulator exact: sums of dyadic phases never leave the set.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported denominator exponent. Keeps `2^{m+1}` inside `u64`.
pub const MAX_DENOM_EXP: u32 = 62;

/// The phase factor `e^{iπ·k/2^m}`, reduced and normalized mod 2π.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPhase", into = "RawPhase")]
pub struct DyadicPhase {
    k: u64,
    m: u32,
}

#[derive(Serialize, Deserialize)]
struct RawPhase {
    k: u64,
    m: u32,
}

impl From<DyadicPhase> for RawPhase {
    fn from(p: DyadicPhase) -> Self {
        RawPhase { k: p.k, m: p.m }
    }
}

impl TryFrom<RawPhase> for DyadicPhase {
    type Error = String;

    fn try_from(raw: RawPhase) -> Result<Self, String> {
        if raw.m > MAX_DENOM_EXP {
            return Err(format!(
                "phase denominator exponent {} exceeds the supported maximum {}",
                raw.m, MAX_DENOM_EXP
            ));
        }
        Ok(DyadicPhase::from_parts(raw.k, raw.m))
    }
}

impl DyadicPhase {
    /// The zero phase (factor 1).
    pub const ZERO: DyadicPhase = DyadicPhase { k: 0, m: 0 };

    /// The half-turn phase (factor −1).
    pub const HALF_TURN: DyadicPhase = DyadicPhase { k: 1, m: 0 };

    /// Builds `e^{iπ·k/2^m}` from a signed numerator, normalizing into
    /// `[0, 2^{m+1})` and reducing.
    ///
    /// # Panics
    /// Panics if `m > MAX_DENOM_EXP`.
    pub fn new(k: i64, m: u32) -> Self {
        assert!(m <= MAX_DENOM_EXP, "denominator exponent {m} too large");
        let modulus = 1u128 << (m + 1);
        let k = (k as i128).rem_euclid(modulus as i128) as u64;
        Self::from_parts(k, m)
    }

    fn from_parts(mut k: u64, mut m: u32) -> Self {
        let modulus = 1u128 << (m + 1);
        k = (k as u128 % modulus) as u64;
        while m > 0 && k.is_multiple_of(2) {
            k /= 2;
            m -= 1;
        }
        DyadicPhase { k, m }
    }

    /// Numerator of the reduced representation.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Denominator exponent of the reduced representation.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.k == 0 && self.m == 0
    }

    /// The angle `π·k/2^m` in radians, for float-based cross-checks.
    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.k as f64 / (1u64 << self.m) as f64
    }
}

/// Exact addition: common denominator, integer sum, reduce.
impl std::ops::Add for DyadicPhase {
    type Output = DyadicPhase;

    fn add(self, rhs: DyadicPhase) -> DyadicPhase {
        let m = self.m.max(rhs.m);
        assert!(m <= MAX_DENOM_EXP, "denominator exponent {m} too large");
        let a = (self.k as u128) << (m - self.m);
        let b = (rhs.k as u128) << (m - rhs.m);
        let modulus = 1u128 << (m + 1);
        Self::from_parts(((a + b) % modulus) as u64, m)
    }
}

impl std::ops::AddAssign for DyadicPhase {
    fn add_assign(&mut self, rhs: DyadicPhase) {
        *self = *self + rhs;
    }
}

/// Exact additive inverse.
impl std::ops::Neg for DyadicPhase {
    type Output = DyadicPhase;

    fn neg(self) -> DyadicPhase {
        let modulus = 1u128 << (self.m + 1);
        Self::from_parts(((modulus - self.k as u128) % modulus) as u64, self.m)
    }
}

impl fmt::Display for DyadicPhase {
    /// Renders the exponent of `e^{iπ·…}` as `k/2^m`, e.g. `1/4` for the
    /// T-gate phase and `1` for a half turn.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "{}", self.k)
        } else {
            write!(f, "{}/{}", self.k, 1u64 << self.m)
        }
    }
}

impl fmt::Debug for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DyadicPhase({self})")
    }
}
