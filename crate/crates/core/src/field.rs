//! Arithmetic in GF(p^{mn}) with a distinguished subfield GF(q), q = p^m.
//!
//! Nonzero elements are stored as discrete logarithms with respect to a fixed
//! primitive element θ (the root of the modulus). Multiplication is exponent
//! addition; addition goes through a Zech logarithm table,
//! θ^a + θ^b = θ^a (1 + θ^{b-a}).
//!
//! The subfield GF(q) is {0} ∪ {θ^{j·s} : 0 <= j < q-1} with stride
//! s = (q^n - 1)/(q - 1), so membership is a divisibility test on the exponent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Default bound on the field order p^{mn}; keeps log/antilog tables in memory.
pub const DEFAULT_SIZE_LIMIT: u64 = 1 << 24;

const ZERO_SENTINEL: u32 = u32::MAX;

/// A field element: either zero or θ^e with 0 <= e < q^n - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(ZERO_SENTINEL);
    pub const ONE: Elem = Elem(0);

    /// θ^e; the caller is responsible for reducing `e` modulo the group order.
    pub const fn from_exp(e: u32) -> Elem {
        Elem(e)
    }

    pub fn is_zero(self) -> bool {
        self.0 == ZERO_SENTINEL
    }

    /// The discrete log, or `None` for zero.
    pub fn exp(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp() {
            None => write!(f, "0"),
            Some(e) => write!(f, "θ^{e}"),
        }
    }
}

/// Serialized form of a field: `{"p":3,"m":1,"n":2,"modulus":[2,1,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

/// The tower GF(p) ⊂ GF(q) ⊂ GF(q^n) with log/antilog/Zech tables.
pub struct Field {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    group_order: u32,
    stride: u32,
    // exponent -> packed coefficient vector (base-p digits, low degree first)
    antilog: Vec<u32>,
    // packed coefficient vector -> exponent; entry 0 unused
    log: Vec<u32>,
    // e -> log(1 + θ^e), or the zero sentinel
    zech: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub(crate) fn pow_mod_u64(base: u64, mut e: u64, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * b as u128 % modulus as u128) as u64;
        }
        b = (b as u128 * b as u128 % modulus as u128) as u64;
        e >>= 1;
    }
    result
}

/// Lexicographically smallest monic primitive polynomial of the given degree,
/// ordering candidates by their base-p encoding Σ a_i p^i (a_{deg-1} most
/// significant). Returned low-degree-first, including the leading 1.
pub fn smallest_primitive_polynomial(p: u32, degree: u32) -> Vec<u32> {
    let count = (p as u64).pow(degree);
    for code in 0..count {
        let mut coeffs: Vec<u64> = Vec::with_capacity(degree as usize + 1);
        let mut c = code;
        for _ in 0..degree {
            coeffs.push(c % p as u64);
            c /= p as u64;
        }
        coeffs.push(1);
        if coeffs[0] == 0 {
            continue;
        }
        if poly::is_primitive(&coeffs, p as u64) {
            return coeffs.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

impl Field {
    /// Build GF(p^{mn}) with the default size limit.
    pub fn build(p: u32, m: u32, n: u32, modulus: Option<&[u32]>) -> Result<Field> {
        Self::build_with_limit(p, m, n, modulus, DEFAULT_SIZE_LIMIT)
    }

    pub fn build_with_limit(
        p: u32,
        m: u32,
        n: u32,
        modulus: Option<&[u32]>,
        size_limit: u64,
    ) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if m < 1 || n < 2 {
            return Err(Error::InvalidDegree { m, n });
        }
        let degree = m * n;
        let order = (p as u64)
            .checked_pow(degree)
            .filter(|&o| o <= size_limit && o <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge {
                p,
                degree,
                limit: size_limit,
            })?;

        let modulus = match modulus {
            Some(coeffs) => {
                validate_modulus(p, degree, coeffs)?;
                coeffs.to_vec()
            }
            None => smallest_primitive_polynomial(p, degree),
        };

        let q = p.pow(m);
        let group_order = (order - 1) as u32;
        let stride = group_order / (q - 1);
        let (antilog, log) = build_tables(p, degree, &modulus, order);

        let mut field = Field {
            p,
            m,
            n,
            q,
            modulus,
            group_order,
            stride,
            antilog,
            log,
            zech: Vec::new(),
        };
        field.zech = (0..group_order)
            .map(|e| {
                let packed = field.antilog[e as usize];
                let c0 = packed % p;
                let plus_one = if c0 == p - 1 { packed - (p - 1) } else { packed + 1 };
                if plus_one == 0 {
                    ZERO_SENTINEL
                } else {
                    field.log[plus_one as usize]
                }
            })
            .collect();
        Ok(field)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        Self::build(d.p, d.m, d.n, Some(&d.modulus))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            m: self.m,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Order of the subfield, q = p^m.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// q^n - 1, the order of the multiplicative group.
    pub fn group_order(&self) -> u32 {
        self.group_order
    }

    /// (q^n - 1)/(q - 1); GF(q)* = ⟨θ^stride⟩.
    pub fn subfield_stride(&self) -> u32 {
        self.stride
    }

    /// q^{n-1}, the common size of the nonzero fibres of a balanced function.
    pub fn fibre_size(&self) -> u64 {
        (self.q as u64).pow(self.n - 1)
    }

    /// θ^e for any integer exponent (reduced modulo the group order).
    pub fn theta_pow(&self, e: i64) -> Elem {
        Elem(e.rem_euclid(self.group_order as i64) as u32)
    }

    /// Coefficient vector of an element in the polynomial basis, low degree first.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        let mut packed = match a.exp() {
            None => 0,
            Some(e) => self.antilog[e as usize],
        };
        (0..self.m * self.n)
            .map(|_| {
                let c = packed % self.p;
                packed /= self.p;
                c
            })
            .collect()
    }

    /// Inverse of [`Field::coefficients`]; coefficients must be reduced mod p.
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        let packed = coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p);
        if packed == 0 {
            Elem::ZERO
        } else {
            Elem(self.log[packed as usize])
        }
    }

    /// The prime-field element with residue r (the constant polynomial r).
    pub fn from_residue(&self, r: i64) -> Elem {
        let r = r.rem_euclid(self.p as i64) as usize;
        if r == 0 {
            Elem::ZERO
        } else {
            Elem(self.log[r])
        }
    }

    /// The residue of a prime-field element, or `None` if `a` lies outside GF(p).
    pub fn residue(&self, a: Elem) -> Option<u32> {
        match a.exp() {
            None => Some(0),
            Some(e) => {
                let packed = self.antilog[e as usize];
                (packed < self.p).then_some(packed)
            }
        }
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match (a.exp(), b.exp()) {
            (None, _) => b,
            (_, None) => a,
            (Some(x), Some(y)) => {
                let d = if y >= x { y - x } else { y + self.group_order - x };
                let z = self.zech[d as usize];
                if z == ZERO_SENTINEL {
                    Elem::ZERO
                } else {
                    Elem(((x as u64 + z as u64) % self.group_order as u64) as u32)
                }
            }
        }
    }

    /// -1 = θ^{(q^n-1)/2} in odd characteristic.
    pub fn neg(&self, a: Elem) -> Elem {
        match a.exp() {
            None => a,
            Some(e) => Elem(((e as u64 + self.group_order as u64 / 2) % self.group_order as u64) as u32),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match (a.exp(), b.exp()) {
            (Some(x), Some(y)) => Elem(((x as u64 + y as u64) % self.group_order as u64) as u32),
            _ => Elem::ZERO,
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        match a.exp() {
            None => Err(Error::ZeroInverse),
            Some(0) => Ok(Elem(0)),
            Some(e) => Ok(Elem(self.group_order - e)),
        }
    }

    /// a^e for any integer e; 0^0 = 1 and negative powers of zero are an error.
    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        match a.exp() {
            None if e == 0 => Ok(Elem::ONE),
            None if e > 0 => Ok(Elem::ZERO),
            None => Err(Error::ZeroInverse),
            Some(x) => {
                let n = self.group_order as i128;
                Ok(Elem((x as i128 * e as i128).rem_euclid(n) as u32))
            }
        }
    }

    /// a^e for a nonnegative exponent given modulo nothing (e.g. q^i).
    fn pow_u64(&self, a: Elem, e: u64) -> Elem {
        match a.exp() {
            None => {
                if e == 0 {
                    Elem::ONE
                } else {
                    Elem::ZERO
                }
            }
            Some(x) => {
                let n = self.group_order as u64;
                Elem(((x as u128 * (e % n) as u128) % n as u128) as u32)
            }
        }
    }

    /// Σ_{i<count} x^{base^i}.
    fn frobenius_sum(&self, x: Elem, base: u64, count: u32) -> Elem {
        let n = self.group_order as u64;
        let mut acc = Elem::ZERO;
        let mut power = 1u64;
        for _ in 0..count {
            acc = self.add(acc, self.pow_u64(x, power));
            power = power * (base % n) % n;
        }
        acc
    }

    /// Relative trace tr_{q^n/q}(x) = Σ_{i<n} x^{q^i}.
    pub fn rel_trace(&self, x: Elem) -> Elem {
        self.frobenius_sum(x, self.q as u64, self.n)
    }

    /// Trace from GF(q^n) down to the intermediate field GF(q^ell), ell | n.
    pub fn trace_to_intermediate(&self, x: Elem, ell: u32) -> Result<Elem> {
        if ell == 0 || !self.n.is_multiple_of(ell) {
            return Err(Error::Parameters(format!("{ell} does not divide n = {}", self.n)));
        }
        Ok(self.frobenius_sum(x, (self.q as u64).pow(ell), self.n / ell))
    }

    /// Trace from GF(q^ell) to GF(q) for an element lying in GF(q^ell).
    pub fn trace_from_intermediate(&self, x: Elem, ell: u32) -> Result<Elem> {
        if !self.in_intermediate(x, ell)? {
            return Err(Error::Parameters(format!("{x:?} is not in GF(q^{ell})")));
        }
        Ok(self.frobenius_sum(x, self.q as u64, ell))
    }

    /// Absolute trace GF(q) -> GF(p) of a subfield element, as a residue mod p.
    pub fn subfield_trace_residue(&self, y: Elem) -> Result<u32> {
        if !self.in_subfield(y) {
            return Err(Error::NotInSubfield(format!("{y:?}")));
        }
        let t = self.frobenius_sum(y, self.p as u64, self.m);
        self.residue(t)
            .ok_or_else(|| Error::Inconsistent("absolute trace left GF(p)".into()))
    }

    /// Exponent stride (q^n - 1)/(q^ell - 1) of GF(q^ell)* inside GF(q^n)*.
    pub fn intermediate_stride(&self, ell: u32) -> Result<u32> {
        if ell == 0 || !self.n.is_multiple_of(ell) {
            return Err(Error::Parameters(format!("{ell} does not divide n = {}", self.n)));
        }
        let sub_order = (self.q as u64).pow(ell) - 1;
        Ok((self.group_order as u64 / sub_order) as u32)
    }

    pub fn in_intermediate(&self, x: Elem, ell: u32) -> Result<bool> {
        let s = self.intermediate_stride(ell)?;
        Ok(x.exp().is_none_or(|e| e % s == 0))
    }

    pub fn in_subfield(&self, x: Elem) -> bool {
        x.exp().is_none_or(|e| e % self.stride == 0)
    }

    /// GF(q) in deterministic order: zero first, then increasing exponent.
    pub fn subfield_elements(&self) -> Vec<Elem> {
        std::iter::once(Elem::ZERO)
            .chain((0..self.q - 1).map(|j| Elem(j * self.stride)))
            .collect()
    }

    /// Position of a subfield element in [`Field::subfield_elements`].
    pub fn subfield_index(&self, x: Elem) -> Option<usize> {
        match x.exp() {
            None => Some(0),
            Some(e) if e % self.stride == 0 => Some((e / self.stride) as usize + 1),
            Some(_) => None,
        }
    }

    pub fn subfield_element(&self, index: usize) -> Elem {
        if index == 0 {
            Elem::ZERO
        } else {
            Elem((index as u32 - 1) * self.stride)
        }
    }

    /// GF(p) as a subset of the subfield, ordered by residue.
    pub fn prime_subfield_elements(&self) -> Vec<Elem> {
        (0..self.p as i64).map(|r| self.from_residue(r)).collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Elem) -> Option<u32> {
        a.exp()
            .map(|e| (self.group_order as u64 / gcd(e as u64, self.group_order as u64)) as u32)
    }
}

/// Addition, subtraction and multiplication tables of GF(q) on subfield
/// indices (see [`Field::subfield_index`]). Index 0 is zero, index 1 is one.
#[derive(Clone, Debug)]
pub struct SubfieldTables {
    pub q: usize,
    pub add: Vec<u16>,
    pub sub: Vec<u16>,
    pub mul: Vec<u16>,
    pub neg: Vec<u16>,
}

impl SubfieldTables {
    pub fn new(field: &Field) -> Self {
        let elems = field.subfield_elements();
        let q = elems.len();
        let idx = |e: Elem| field.subfield_index(e).expect("subfield closed") as u16;
        let mut add = vec![0u16; q * q];
        let mut sub = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                add[i * q + j] = idx(field.add(a, b));
                sub[i * q + j] = idx(field.sub(a, b));
                mul[i * q + j] = idx(field.mul(a, b));
            }
        }
        let neg = elems.iter().map(|&a| idx(field.neg(a))).collect();
        SubfieldTables { q, add, sub, mul, neg }
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.sub[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }
}

fn validate_modulus(p: u32, degree: u32, coeffs: &[u32]) -> Result<()> {
    let expected = degree as usize + 1;
    if coeffs.len() != expected {
        return Err(Error::ModulusLength {
            expected,
            actual: coeffs.len(),
        });
    }
    if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
        return Err(Error::CoefficientOutOfRange { coefficient: c, p });
    }
    if coeffs[degree as usize] != 1 {
        return Err(Error::ModulusNotMonic);
    }
    let wide: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
    if !poly::is_irreducible(&wide, p as u64) {
        return Err(Error::Reducible { p });
    }
    if !poly::is_primitive(&wide, p as u64) {
        return Err(Error::NotPrimitive);
    }
    Ok(())
}

/// Powers of x modulo the (primitive) modulus, packed as base-p integers.
fn build_tables(p: u32, degree: u32, modulus: &[u32], order: u64) -> (Vec<u32>, Vec<u32>) {
    let group_order = (order - 1) as usize;
    let d = degree as usize;
    let mut antilog = Vec::with_capacity(group_order);
    let mut log = vec![ZERO_SENTINEL; order as usize];
    let mut coeffs = vec![0u32; d];
    coeffs[0] = 1;
    let mut place = vec![1u32; d];
    for i in 1..d {
        place[i] = place[i - 1] * p;
    }
    for e in 0..group_order {
        let packed: u32 = coeffs.iter().zip(&place).map(|(&c, &w)| c * w).sum();
        antilog.push(packed);
        log[packed as usize] = e as u32;
        // multiply by x, reduce with x^d = -Σ modulus[i] x^i
        let top = coeffs[d - 1];
        for i in (1..d).rev() {
            coeffs[i] = coeffs[i - 1];
        }
        coeffs[0] = 0;
        if top != 0 {
            for i in 0..d {
                coeffs[i] = (coeffs[i] + (p - modulus[i]) * top) % p;
            }
        }
    }
    (antilog, log)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf9() -> Field {
        Field::build(3, 1, 2, None).unwrap()
    }

    /// Smallest primitive quadratic over GF(3) by brute force: no root in GF(3)
    /// and the root has order 8, found by iterating x^k mod f.
    fn brute_smallest_primitive_quadratic() -> Vec<u32> {
        for code in 0..9u32 {
            let (a0, a1) = (code % 3, code / 3);
            let has_root = (0..3).any(|x| (x * x + a1 * x + a0) % 3 == 0);
            if has_root {
                continue;
            }
            // track x^k = c1 x + c0
            let (mut c0, mut c1) = (0u32, 1u32);
            let mut order = 1;
            while !(c0 == 1 && c1 == 0) {
                // multiply by x: c1 x^2 + c0 x = c1(-a1 x - a0) + c0 x
                let n1 = (c0 + (3 - a1) * c1) % 3;
                let n0 = ((3 - a0) * c1) % 3;
                c0 = n0;
                c1 = n1;
                order += 1;
            }
            if order == 8 {
                return vec![a0, a1, 1];
            }
        }
        unreachable!()
    }

    #[test]
    fn smallest_modulus_gf9() {
        let f = gf9();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        assert_eq!(brute_smallest_primitive_quadratic(), vec![2, 1, 1]);
        assert_eq!(f.pow(f.theta_pow(1), 8).unwrap(), Elem::ONE);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // roots of x^2 + 2 over GF(5): x^2 = 3 has no solution, so it is irreducible;
        // x^2 + 1 has the root 2 (4 + 1 = 5).
        let roots: Vec<u32> = (0..5).filter(|x| (x * x + 2) % 5 == 0).collect();
        assert!(roots.is_empty());
        let err = Field::build(5, 1, 2, Some(&[2, 0, 1])).unwrap_err();
        // irreducible but θ^2 = -2 = 3 has order 4, so θ has order 8 < 24
        assert!(matches!(err, Error::NotPrimitive));
        let err = Field::build(5, 1, 2, Some(&[1, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::Reducible { p: 5 }));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(Field::build(9, 1, 2, None), Err(Error::NotPrime(9))));
        assert!(matches!(Field::build(2, 1, 2, None), Err(Error::EvenCharacteristic)));
        assert!(matches!(Field::build(3, 1, 1, None), Err(Error::InvalidDegree { .. })));
        assert!(matches!(
            Field::build_with_limit(3, 1, 4, None, 80),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(
            Field::build(3, 1, 2, Some(&[2, 1])),
            Err(Error::ModulusLength { .. })
        ));
        assert!(matches!(
            Field::build(3, 1, 2, Some(&[2, 1, 2])),
            Err(Error::ModulusNotMonic)
        ));
        assert!(matches!(
            Field::build(3, 1, 2, Some(&[2, 3, 1])),
            Err(Error::CoefficientOutOfRange { .. })
        ));
    }

    #[test]
    fn basic_arithmetic() {
        let f = gf9();
        let t = |e| f.theta_pow(e);
        assert_eq!(f.mul(t(2), t(3)), t(5));
        for e in 0..8 {
            assert_eq!(f.add(t(e), f.neg(t(e))), Elem::ZERO);
            assert_eq!(f.inv(t(e)).unwrap(), t(8 - e));
        }
        assert!(matches!(f.inv(Elem::ZERO), Err(Error::ZeroInverse)));
        assert_eq!(f.pow(Elem::ZERO, 0).unwrap(), Elem::ONE);
        assert!(f.pow(Elem::ZERO, -1).is_err());
    }

    #[test]
    fn addition_matches_coefficients() {
        let f = Field::build(5, 1, 2, None).unwrap();
        for a in 0..24 {
            for b in 0..24 {
                let (x, y) = (f.theta_pow(a), f.theta_pow(b));
                let cx = f.coefficients(x);
                let cy = f.coefficients(y);
                let sum: Vec<u32> = cx.iter().zip(&cy).map(|(u, v)| (u + v) % 5).collect();
                assert_eq!(f.add(x, y), f.from_coefficients(&sum));
            }
        }
    }

    #[test]
    fn subfield_of_gf9() {
        let f = gf9();
        let s = f.subfield_elements();
        assert_eq!(s, vec![Elem::ZERO, f.theta_pow(0), f.theta_pow(4)]);
        for &a in &s {
            for &b in &s {
                assert!(f.in_subfield(f.add(a, b)));
                assert!(f.in_subfield(f.mul(a, b)));
            }
        }
        for &e in &s[1..] {
            assert_eq!(f.pow(e, 2).unwrap(), Elem::ONE);
        }
    }

    #[test]
    fn trace_zero_fibre_gf9() {
        let f = gf9();
        assert_eq!(f.rel_trace(Elem::ZERO), Elem::ZERO);
        let zeros = (0..8).filter(|&e| f.rel_trace(f.theta_pow(e)).is_zero()).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn trace_gf81_over_gf9_fixed_by_frobenius() {
        let f = Field::build(3, 2, 2, None).unwrap();
        assert_eq!(f.q(), 9);
        for e in (0..80).step_by(4) {
            let t = f.rel_trace(f.theta_pow(e));
            assert!(f.in_subfield(t));
            assert_eq!(f.pow(t, 9).unwrap(), t);
        }
    }

    #[test]
    fn residues_round_trip() {
        let f = Field::build(5, 2, 2, None).unwrap();
        for r in 0..5 {
            let e = f.from_residue(r);
            assert!(f.in_subfield(e));
            assert_eq!(f.residue(e), Some(r as u32));
        }
        assert_eq!(f.prime_subfield_elements().len(), 5);
    }

    #[test]
    fn deterministic_build() {
        let a = Field::build(3, 1, 4, None).unwrap();
        let b = Field::build(3, 1, 4, None).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.antilog, b.antilog);
    }

    #[test]
    fn descriptor_json() {
        let f = gf9();
        let json = serde_json::to_string(&f.descriptor()).unwrap();
        assert_eq!(json, r#"{"p":3,"m":1,"n":2,"modulus":[2,1,1]}"#);
        let back: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(Field::from_descriptor(&back).unwrap(), f);
    }
}
