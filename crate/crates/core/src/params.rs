use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Physical parameters of one system instance.
///
/// `delta` is the *half* detuning: `2 * delta = omega_0 - omega_c`. Keep this
/// in mind when comparing against a full-detuning convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    theta: f64,
    delta: f64,
    g_a: f64,
    g_b: f64,
}

impl ModelParams {
    /// Validates and builds a parameter set.
    ///
    /// `theta` must lie in `[0, 2pi)`, couplings must be non-negative with at
    /// least one of them nonzero, and every value must be finite.
    pub fn new(theta: f64, delta: f64, g_a: f64, g_b: f64) -> Result<Self> {
        for (name, v) in [
            ("theta", theta),
            ("delta", delta),
            ("g_a", g_a),
            ("g_b", g_b),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if !(0.0..TAU).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, 2pi), got {theta}"
            )));
        }
        if g_a < 0.0 || g_b < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "couplings must be non-negative, got g_a = {g_a}, g_b = {g_b}"
            )));
        }
        if g_a + g_b <= 0.0 {
            return Err(Error::InvalidParameter(
                "at least one coupling must be nonzero".into(),
            ));
        }
        Ok(Self {
            theta,
            delta,
            g_a,
            g_b,
        })
    }

    /// Resonant parameters with `g_a = 1` and `g_b = ratio` (or `g_b = 1`,
    /// `g_a = 1 / ratio` when `ratio > 1`), so the larger coupling is the unit.
    pub fn resonant_with_ratio(theta: f64, ratio: f64) -> Result<Self> {
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "coupling ratio must be positive, got {ratio}"
            )));
        }
        if ratio <= 1.0 {
            Self::new(theta, 0.0, 1.0, ratio)
        } else {
            Self::new(theta, 0.0, 1.0 / ratio, 1.0)
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Half detuning.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn g_a(&self) -> f64 {
        self.g_a
    }

    pub fn g_b(&self) -> f64 {
        self.g_b
    }

    /// Same parameters with the two cavity couplings exchanged.
    pub fn with_swapped_couplings(&self) -> Self {
        Self {
            g_a: self.g_b,
            g_b: self.g_a,
            ..*self
        }
    }
}

impl Default for ModelParams {
    /// Maximally entangled atoms, exact resonance, equal unit couplings.
    fn default() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_4,
            delta: 0.0,
            g_a: 1.0,
            g_b: 1.0,
        }
    }
}

/// Weights of the antisymmetric (`u0`) and symmetric (`w0`) atomic
/// components of the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialWeights {
    pub u0: f64,
    pub w0: f64,
}

/// One of the four qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    AtomA,
    AtomB,
    ModeA,
    ModeB,
}

impl Qubit {
    /// Position in the `(A, B, a, b)` tensor ordering.
    pub fn slot(self) -> usize {
        match self {
            Qubit::AtomA => 0,
            Qubit::AtomB => 1,
            Qubit::ModeA => 2,
            Qubit::ModeB => 3,
        }
    }
}

/// The six qubit pairs. Upper-case letters are atoms, lower-case are modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairId {
    AB,
    #[allow(non_camel_case_types)]
    ab,
    Aa,
    Ab,
    Ba,
    Bb,
}

impl PairId {
    /// All pairs, in output column order.
    pub const ALL: [PairId; 6] = [
        PairId::AB,
        PairId::ab,
        PairId::Aa,
        PairId::Ab,
        PairId::Ba,
        PairId::Bb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PairId::AB => "AB",
            PairId::ab => "ab",
            PairId::Aa => "Aa",
            PairId::Ab => "Ab",
            PairId::Ba => "Ba",
            PairId::Bb => "Bb",
        }
    }

    pub fn qubits(self) -> (Qubit, Qubit) {
        match self {
            PairId::AB => (Qubit::AtomA, Qubit::AtomB),
            PairId::ab => (Qubit::ModeA, Qubit::ModeB),
            PairId::Aa => (Qubit::AtomA, Qubit::ModeA),
            PairId::Ab => (Qubit::AtomA, Qubit::ModeB),
            PairId::Ba => (Qubit::AtomB, Qubit::ModeA),
            PairId::Bb => (Qubit::AtomB, Qubit::ModeB),
        }
    }

    /// The pair obtained by exchanging the two cavities.
    pub fn with_swapped_modes(self) -> Self {
        match self {
            PairId::Aa => PairId::Ab,
            PairId::Ab => PairId::Aa,
            PairId::Ba => PairId::Bb,
            PairId::Bb => PairId::Ba,
            p => p,
        }
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PairId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown pair '{s}' (expected one of AB, ab, Aa, Ab, Ba, Bb)"
                ))
            })
    }
}
