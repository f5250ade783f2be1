//! Exact checkers for function-level properties: balance, difference balance,
//! d-homogeneity, two-tuple balance and the balanced-shift decomposition.
//!
//! All checks work on subfield indices (see [`Field::subfield_index`]) with
//! precomputed GF(q) tables; nothing here is approximate.

use serde::{Deserialize, Serialize};

use crate::constructions::FunctionTable;
use crate::field::{gcd, Elem, Field, SubfieldTables};
use crate::report::{elem_json, DegreeFailure, ElemJson, Property, PropertyReport, Witness};

/// counts[b] = |{x != 0 : f(x) = b}| in subfield order.
pub fn value_counts(f: &FunctionTable) -> Vec<u64> {
    let mut counts = vec![0u64; f.field().q() as usize];
    for i in f.subfield_indices() {
        counts[i as usize] += 1;
    }
    counts
}

fn is_balanced_counts(counts: &[u64], fibre: u64) -> bool {
    counts[0] + 1 == fibre && counts[1..].iter().all(|&c| c == fibre)
}

pub fn is_balanced(f: &FunctionTable) -> PropertyReport {
    let counts = value_counts(f);
    if is_balanced_counts(&counts, f.field().fibre_size()) {
        PropertyReport::pass(Property::Balance, None)
    } else {
        PropertyReport::fail(Property::Balance, Witness::ValueCounts { counts })
    }
}

/// Reusable difference-balance kernel over subfield-index tables.
#[derive(Clone, Debug)]
pub struct DbChecker {
    tables: SubfieldTables,
    order: usize,
    fibre: u32,
    schedule: Vec<u32>,
}

impl DbChecker {
    /// Checks shifts a = θ^j in increasing j.
    pub fn new(field: &Field) -> Self {
        Self::with_schedule(field, (1..field.group_order()).collect())
    }

    pub fn with_schedule(field: &Field, schedule: Vec<u32>) -> Self {
        DbChecker {
            tables: SubfieldTables::new(field),
            order: field.group_order() as usize,
            fibre: field.fibre_size() as u32,
            schedule,
        }
    }

    pub fn schedule(&self) -> &[u32] {
        &self.schedule
    }

    /// Fibre sizes of x ↦ f(θ^shift x) - f(x).
    pub fn derivative_counts(&self, values: &[u16], shift: u32, counts: &mut [u32]) {
        counts.iter_mut().for_each(|c| *c = 0);
        let n = self.order;
        let s = shift as usize % n;
        let (head, tail) = values.split_at(s);
        // f(θ^{i+s}) for i = 0..n is tail ++ head
        for (&shifted, &base) in tail.iter().chain(head).zip(values) {
            counts[self.tables.sub(shifted, base) as usize] += 1;
        }
    }

    fn balanced(&self, counts: &[u32]) -> bool {
        counts[0] + 1 == self.fibre && counts[1..].iter().all(|&c| c == self.fibre)
    }

    /// The first shift (in schedule order) whose derivative is unbalanced.
    pub fn first_failure(&self, values: &[u16], counts: &mut [u32]) -> Option<u32> {
        self.schedule.iter().copied().find(|&shift| {
            self.derivative_counts(values, shift, counts);
            !self.balanced(counts)
        })
    }

    pub fn is_db(&self, values: &[u16], counts: &mut [u32]) -> bool {
        self.first_failure(values, counts).is_none()
    }

    pub fn tables(&self) -> &SubfieldTables {
        &self.tables
    }
}

/// f(ax) - f(x) balanced for every a = θ^j, j != 0; the witness is the first
/// failing j (increasing order) with its fibre sizes.
pub fn is_difference_balanced(f: &FunctionTable) -> PropertyReport {
    is_difference_balanced_with(f, &DbChecker::new(f.field()))
}

pub fn is_difference_balanced_with(f: &FunctionTable, checker: &DbChecker) -> PropertyReport {
    let values = f.subfield_indices();
    let mut counts = vec![0u32; f.field().q() as usize];
    match checker.first_failure(&values, &mut counts) {
        None => PropertyReport::pass(Property::DifferenceBalance, None),
        Some(shift) => PropertyReport::fail(
            Property::DifferenceBalance,
            Witness::Derivative {
                shift,
                counts: counts.into_iter().map(u64::from).collect(),
            },
        ),
    }
}

/// Exponents d in [1, q-1] with gcd(d, q-1) = 1.
pub fn admissible_degrees(q: u32) -> Vec<u32> {
    (1..q)
        .filter(|&d| gcd(d as u64, (q - 1) as u64) == 1)
        .collect()
}

/// The unique admissible d with f(ax) = a^d f(x) for all a ∈ GF(q)*.
///
/// Only the generator a = θ^stride of GF(q)* is tested; the identity then
/// holds for every power of it.
pub fn homogeneity_degree(f: &FunctionTable) -> PropertyReport {
    let field = f.field();
    let tables = SubfieldTables::new(field);
    let values = f.subfield_indices();
    let n = values.len();
    let stride = field.subfield_stride() as usize;
    let mut failures = Vec::new();
    for d in admissible_degrees(field.q()) {
        let scalar = field.pow(Elem::from_exp(stride as u32), d as i64).unwrap();
        let scalar = field.subfield_index(scalar).unwrap() as u16;
        let bad = (0..n).find(|&i| values[(i + stride) % n] != tables.mul(scalar, values[i]));
        match bad {
            None => return PropertyReport::pass(Property::Homogeneity, Some(Witness::Degree { d })),
            Some(x) => failures.push(DegreeFailure {
                d,
                a: stride as u32,
                x: x as u32,
            }),
        }
    }
    PropertyReport::fail(Property::Homogeneity, Witness::NoDegree { failures })
}

/// The degree found by [`homogeneity_degree`], if any.
pub fn degree_of(f: &FunctionTable) -> Option<u32> {
    match homogeneity_degree(f).witness {
        Some(Witness::Degree { d }) => Some(d),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuEntry {
    /// exponent of a ∈ GF(q)*
    pub a: u32,
    pub mu: ElemJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCountTable {
    pub a: u32,
    /// row-major q × q table, rows indexed by f(x), columns by f(ax), both in subfield order
    pub counts: Vec<u64>,
}

/// μ_a for each a ∈ GF(q)* and sampled pair-count tables N_{b1,b2}(a).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoTupleProfile {
    pub mu_map: Vec<MuEntry>,
    pub count_tables: Vec<PairCountTable>,
}

impl TwoTupleProfile {
    /// μ_{aa'} = μ_a μ_{a'} over all recorded pairs.
    pub fn mu_is_multiplicative(&self, field: &Field) -> bool {
        let lookup = |a: u32| self.mu_map.iter().find(|e| e.a == a).map(|e| e.mu);
        self.mu_map.iter().all(|x| {
            self.mu_map.iter().all(|y| {
                let prod = (x.a as u64 + y.a as u64) % field.group_order() as u64;
                let mu_x = crate::report::elem_from_json(x.mu);
                let mu_y = crate::report::elem_from_json(y.mu);
                lookup(prod as u32) == Some(elem_json(field.mul(mu_x, mu_y)))
            })
        })
    }
}

/// Two-tuple balance: joint counts of (f(x), f(ax)) for every a ∈ GF(q^n)*.
pub fn is_two_tuple_balanced(f: &FunctionTable) -> (PropertyReport, TwoTupleProfile) {
    let field = f.field();
    let tables = SubfieldTables::new(field);
    let q = field.q() as usize;
    let values = f.subfield_indices();
    let n = values.len();
    let stride = field.subfield_stride() as usize;
    let big = field.fibre_size();
    let small = big / field.q() as u64;
    let mut profile = TwoTupleProfile::default();
    let mut counts = vec![0u64; q * q];

    for j in 0..n {
        counts.iter_mut().for_each(|c| *c = 0);
        for i in 0..n {
            let pair = values[i] as usize * q + values[(i + j) % n] as usize;
            counts[pair] += 1;
        }
        if j == 1 || j == stride {
            profile.count_tables.push(PairCountTable {
                a: j as u32,
                counts: counts.clone(),
            });
        }

        let expected: Vec<u64> = if j % stride == 0 {
            // μ from the first x with f(x) != 0
            let Some(i) = (0..n).find(|&i| values[i] != 0) else {
                return (
                    PropertyReport::fail(
                        Property::TwoTupleBalance,
                        Witness::PairCount {
                            a: j as u32,
                            b1: None,
                            b2: None,
                            expected: big - 1,
                            actual: n as u64,
                        },
                    ),
                    profile,
                );
            };
            let fx = field.subfield_element(values[i] as usize);
            let fax = field.subfield_element(values[(i + j) % n] as usize);
            let mu = field.mul(fax, field.inv(fx).unwrap());
            profile.mu_map.push(MuEntry {
                a: j as u32,
                mu: elem_json(mu),
            });
            let mu_idx = field.subfield_index(mu).unwrap() as u16;
            let mut e = vec![0u64; q * q];
            e[0] = big - 1;
            for b in 1..q as u16 {
                e[b as usize * q + tables.mul(mu_idx, b) as usize] = big;
            }
            e
        } else {
            let mut e = vec![small; q * q];
            e[0] = small - 1;
            e
        };

        if let Some(pos) = (0..q * q).find(|&k| counts[k] != expected[k]) {
            return (
                PropertyReport::fail(
                    Property::TwoTupleBalance,
                    Witness::PairCount {
                        a: j as u32,
                        b1: elem_json(field.subfield_element(pos / q)),
                        b2: elem_json(field.subfield_element(pos % q)),
                        expected: expected[pos],
                        actual: counts[pos],
                    },
                ),
                profile,
            );
        }
    }
    (PropertyReport::pass(Property::TwoTupleBalance, None), profile)
}

/// The first b (subfield order) such that f - b is balanced.
pub fn balanced_shift(f: &FunctionTable) -> PropertyReport {
    let counts = value_counts(f);
    let fibre = f.field().fibre_size();
    let found = (0..counts.len()).find(|&b| {
        counts[b] + 1 == fibre
            && counts
                .iter()
                .enumerate()
                .all(|(i, &c)| i == b || c == fibre)
    });
    match found {
        Some(b) => PropertyReport::pass(
            Property::BalancedShift,
            Some(Witness::Shift {
                b: elem_json(f.field().subfield_element(b)),
            }),
        ),
        None => PropertyReport::fail(Property::BalancedShift, Witness::ValueCounts { counts }),
    }
}

/// The shift b found by [`balanced_shift`], if any.
pub fn shift_of(f: &FunctionTable) -> Option<Elem> {
    match balanced_shift(f).witness {
        Some(Witness::Shift { b }) => Some(crate::report::elem_from_json(b)),
        _ => None,
    }
}
