//! Structured verdicts shared by every checker.

use serde::{Deserialize, Serialize};

use crate::field::Elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Balance,
    DifferenceBalance,
    Homogeneity,
    TwoTupleBalance,
    BalancedShift,
    GeneralizedDifferenceSet,
    RelativeDifferenceSet,
    DivisibleDifferenceSet,
    CyclicDifferenceSet,
    CharacterSpectrum,
    Multiplier,
    FunctionMultipliers,
    IdealAutocorrelation,
}

/// Field element in JSON: its exponent, or `null` for zero.
pub type ElemJson = Option<u32>;

pub fn elem_json(e: Elem) -> ElemJson {
    e.exp()
}

pub fn elem_from_json(e: ElemJson) -> Elem {
    e.map_or(Elem::ZERO, Elem::from_exp)
}

/// Group element (θ^x, y) of GF(q^n)* × (GF(q), +).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairJson {
    pub x: u32,
    pub y: ElemJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeFailure {
    pub d: u32,
    /// exponent of the scalar a ∈ GF(q)*
    pub a: u32,
    /// exponent of the point x with f(ax) != a^d f(x)
    pub x: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Fibre sizes indexed in subfield order (zero first).
    ValueCounts { counts: Vec<u64> },
    /// Fibre sizes of x ↦ f(θ^shift x) - f(x).
    Derivative { shift: u32, counts: Vec<u64> },
    Degree { d: u32 },
    NoDegree { failures: Vec<DegreeFailure> },
    Shift { b: ElemJson },
    PairCount {
        a: u32,
        b1: ElemJson,
        b2: ElemJson,
        expected: u64,
        actual: u64,
    },
    /// Group-ring coefficient mismatch at (θ^mult, additive element number `add`).
    /// For groups built from a field, `add` indexes GF(q) in subfield order.
    Coefficient {
        mult: u32,
        add: u16,
        expected: i64,
        actual: i64,
    },
    /// Difference count mismatch in a cyclic group.
    CyclicCoefficient {
        difference: u32,
        expected: u64,
        actual: u64,
    },
    /// Parameters that were confirmed (verdict true) or claimed (verdict false).
    Parameters { params: Vec<u64> },
    SetSize { expected: u64, actual: u64 },
    Autocorrelation { tau: u32, counts: Vec<u64> },
    Translates {
        translates: Vec<PairJson>,
        zero_additive: bool,
    },
    Multipliers { t: Vec<u64> },
    Spectrum {
        characters: u64,
        mismatches: Vec<SpectrumMismatch>,
    },
    Note { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMismatch {
    pub u: u32,
    pub c: ElemJson,
    pub expected: i64,
    pub exact: Option<i64>,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn pass(property: Property, witness: Option<Witness>) -> Self {
        PropertyReport {
            property,
            verdict: true,
            witness,
        }
    }

    pub fn fail(property: Property, witness: Witness) -> Self {
        PropertyReport {
            property,
            verdict: false,
            witness: Some(witness),
        }
    }
}
