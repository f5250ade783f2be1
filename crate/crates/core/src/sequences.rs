//! p-ary sequences s_i = f(θ^i) and their periodic autocorrelation.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::FunctionTable;
use crate::error::{Error, Result};
use crate::report::{Property, PropertyReport, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PSequence {
    pub p: u32,
    pub symbols: Vec<u8>,
}

impl PSequence {
    pub fn new(p: u32, symbols: Vec<u8>) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s as u32 >= p) {
            return Err(Error::Validation(format!("symbol {s} is not a residue mod {p}")));
        }
        Ok(PSequence { p, symbols })
    }

    pub fn period(&self) -> usize {
        self.symbols.len()
    }

    /// One digit per symbol.
    pub fn digits(&self) -> String {
        self.symbols
            .iter()
            .map(|&s| char::from_digit(s as u32, 36).expect("p <= 36"))
            .collect()
    }
}

/// s_i = f(θ^i) read as an integer mod p. Needs q = p.
pub fn to_sequence(f: &FunctionTable) -> Result<PSequence> {
    let field = f.field();
    if field.m() != 1 {
        return Err(Error::Parameters("sequences need q = p".into()));
    }
    let symbols = f
        .values()
        .iter()
        .map(|&v| field.residue(v).map(|r| r as u8))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::NotInSubfield("value outside GF(p)".into()))?;
    PSequence::new(field.p(), symbols)
}

/// N_c = |{i : s_{i+τ} - s_i ≡ c}| and C(τ) = Σ_c N_c ζ_p^c.
pub fn autocorrelation(s: &PSequence, tau: usize) -> Result<(Vec<u64>, Complex64)> {
    let period = s.period();
    if tau >= period {
        return Err(Error::Parameters(format!("shift {tau} outside [0, {period})")));
    }
    let p = s.p as usize;
    let mut counts = vec![0u64; p];
    for i in 0..period {
        let a = s.symbols[(i + tau) % period] as usize;
        let b = s.symbols[i] as usize;
        counts[(a + p - b) % p] += 1;
    }
    let value = counts
        .iter()
        .enumerate()
        .map(|(c, &n)| Complex64::from_polar(n as f64, TAU * c as f64 / p as f64))
        .sum();
    Ok((counts, value))
}

/// The integer value of C(τ) when the count vector is of the form
/// (a, b, b, ..., b), where C(τ) = a - b.
pub fn integer_value(counts: &[u64]) -> Option<i64> {
    let rest = counts.get(1).copied().unwrap_or(0);
    counts[1..]
        .iter()
        .all(|&c| c == rest)
        .then(|| counts[0] as i64 - rest as i64)
}

/// Every τ != 0 has counts (p^{n-1} - 1, p^{n-1}, ..., p^{n-1}).
pub fn is_ideal_two_level(s: &PSequence) -> PropertyReport {
    let period = s.period();
    let p = s.p as u64;
    let level = (period as u64 + 1) / p;
    let ideal = |counts: &[u64]| {
        (period as u64 + 1).is_multiple_of(p)
            && counts[0] + 1 == level
            && counts[1..].iter().all(|&c| c == level)
    };
    let failure = (1..period).into_par_iter().find_first(|&tau| {
        let (counts, _) = autocorrelation(s, tau).expect("tau in range");
        !ideal(&counts)
    });
    match failure {
        None => PropertyReport::pass(Property::IdealAutocorrelation, None),
        Some(tau) => {
            let (counts, _) = autocorrelation(s, tau).expect("tau in range");
            PropertyReport::fail(
                Property::IdealAutocorrelation,
                Witness::Autocorrelation {
                    tau: tau as u32,
                    counts,
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::{affine_shift, lin_function, trace_function};
    use crate::field::{Elem, Field};
    use crate::properties::{is_difference_balanced, value_counts};

    fn field(p: u32, n: u32) -> Arc<Field> {
        Arc::new(Field::build(p, 1, n, None).unwrap())
    }

    #[test]
    fn m_sequence() {
        let gf = field(3, 2);
        let f = trace_function(&gf);
        let s = to_sequence(&f).unwrap();
        assert_eq!(s.period(), 8);
        let mut hist = [0u64; 3];
        s.symbols.iter().for_each(|&x| hist[x as usize] += 1);
        let counts = value_counts(&f);
        assert_eq!(hist.to_vec(), counts);
        for tau in 1..8 {
            let (counts, value) = autocorrelation(&s, tau).unwrap();
            assert_eq!(counts, vec![2, 3, 3]);
            assert!((value - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        }
        assert_eq!(autocorrelation(&s, 0).unwrap().0, vec![8, 0, 0]);
        assert!(autocorrelation(&s, 8).is_err());
        assert!(is_ideal_two_level(&s).verdict);
    }

    #[test]
    fn shift_is_pointwise() {
        let gf = field(3, 2);
        let f = trace_function(&gf);
        let s = to_sequence(&f).unwrap();
        let t = to_sequence(&affine_shift(&f, Elem::ONE).unwrap()).unwrap();
        for (a, b) in s.symbols.iter().zip(&t.symbols) {
            assert_eq!((a + 1) % 3, *b);
        }
    }

    #[test]
    fn constant_sequence() {
        let s = PSequence::new(3, vec![1; 8]).unwrap();
        let (counts, value) = autocorrelation(&s, 3).unwrap();
        assert_eq!(counts, vec![8, 0, 0]);
        assert!((value.re - 8.0).abs() < 1e-9);
        assert!(!is_ideal_two_level(&s).verdict);
        assert!(PSequence::new(3, vec![3]).is_err());
    }

    #[test]
    fn lin3_ideal() {
        let gf = field(3, 3);
        let f = lin_function(&gf).unwrap();
        assert!(is_difference_balanced(&f).verdict);
        let s = to_sequence(&f).unwrap();
        assert!(is_ideal_two_level(&s).verdict);
        // Parseval: Σ_{τ≠0} C(τ) = |Σ ζ^{s_i}|² - C(0)
        let total: Complex64 = (1..s.period()).map(|t| autocorrelation(&s, t).unwrap().1).sum();
        let sum: Complex64 = s
            .symbols
            .iter()
            .map(|&x| Complex64::from_polar(1.0, TAU * x as f64 / 3.0))
            .sum();
        assert!((total.re - (sum.norm_sqr() - 26.0)).abs() < 1e-9);
        assert!((total.re - -25.0).abs() < 1e-9);
    }

    #[test]
    fn conjugate_symmetry() {
        let s = PSequence::new(5, vec![0, 3, 1, 4, 4, 2, 0, 1, 3]).unwrap();
        for tau in 1..9 {
            let (a, _) = autocorrelation(&s, tau).unwrap();
            let (b, _) = autocorrelation(&s, 9 - tau).unwrap();
            for c in 0..5 {
                assert_eq!(a[c], b[(5 - c) % 5]);
            }
        }
    }

    #[test]
    fn integer_values() {
        assert_eq!(integer_value(&[8, 9, 9]), Some(-1));
        assert_eq!(integer_value(&[26, 0, 0]), Some(26));
        assert_eq!(integer_value(&[1, 2, 3]), None);
    }
}
