//! Function tables f: GF(q^n)* -> GF(q) and the known difference balanced
//! families: trace, Helleseth–Gong, Lin, and the product (GMW / No) cascade
//! built from relative difference sets.

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::designs::{verify_relative_cyclic, RelativeParams};
use crate::error::{Error, Result};
use crate::field::{gcd, pow_mod_u64, Elem, Field, FieldDescriptor};
use crate::properties::is_difference_balanced;
use crate::report::{elem_from_json, elem_json, ElemJson};

/// A function GF(q^n)* -> GF(q) stored by discrete log: `values[i] = f(θ^i)`.
#[derive(Clone, Debug)]
pub struct FunctionTable {
    field: Arc<Field>,
    values: Vec<Elem>,
}

impl PartialEq for FunctionTable {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.values == other.values
    }
}

impl FunctionTable {
    pub fn new(field: Arc<Field>, values: Vec<Elem>) -> Result<Self> {
        let expected = field.group_order() as usize;
        if values.len() != expected {
            return Err(Error::TableLength {
                expected,
                actual: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|&&v| !field.in_subfield(v)) {
            return Err(Error::NotInSubfield(format!("{bad:?}")));
        }
        Ok(FunctionTable { field, values })
    }

    pub fn from_fn(field: Arc<Field>, mut f: impl FnMut(u32) -> Elem) -> Result<Self> {
        let values = (0..field.group_order()).map(&mut f).collect();
        Self::new(field, values)
    }

    /// Build from subfield indices (0 = zero, j+1 = θ^{j·stride}).
    pub fn from_subfield_indices(field: Arc<Field>, indices: &[u16]) -> Result<Self> {
        let q = field.q() as usize;
        if let Some(&bad) = indices.iter().find(|&&i| i as usize >= q) {
            return Err(Error::NotInSubfield(format!("subfield index {bad}")));
        }
        let values = indices
            .iter()
            .map(|&i| field.subfield_element(i as usize))
            .collect();
        Self::new(field, values)
    }

    pub fn constant(field: Arc<Field>, b: Elem) -> Result<Self> {
        let len = field.group_order() as usize;
        Self::new(field, vec![b; len])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// f(θ^i), index reduced modulo q^n - 1.
    pub fn at(&self, i: u64) -> Elem {
        self.values[(i % self.values.len() as u64) as usize]
    }

    pub fn eval(&self, x: Elem) -> Result<Elem> {
        x.exp()
            .map(|e| self.values[e as usize])
            .ok_or_else(|| Error::Parameters("f is defined on GF(q^n)* only".into()))
    }

    pub fn subfield_indices(&self) -> Vec<u16> {
        self.values
            .iter()
            .map(|&v| self.field.subfield_index(v).expect("table invariant") as u16)
            .collect()
    }

    /// x ↦ f(θ^c x).
    pub fn rescale(&self, c: u32) -> FunctionTable {
        let n = self.values.len();
        let values = (0..n).map(|i| self.values[(i + c as usize) % n]).collect();
        FunctionTable {
            field: self.field.clone(),
            values,
        }
    }

    pub fn to_file(&self) -> FunctionTableFile {
        FunctionTableFile {
            field: self.field.descriptor(),
            values: self.values.iter().map(|&v| elem_json(v)).collect(),
        }
    }

    pub fn from_file(file: &FunctionTableFile) -> Result<Self> {
        let field = Arc::new(Field::from_descriptor(&file.field)?);
        let values = file.values.iter().map(|&v| elem_from_json(v)).collect();
        let group_order = field.group_order();
        if let Some(bad) = file.values.iter().flatten().find(|&&e| e >= group_order) {
            return Err(Error::Parameters(format!("exponent {bad} out of range")));
        }
        Self::new(field, values)
    }
}

/// On-disk form: `{"field": {...}, "values": [v_0, ...]}`, v_i the exponent of
/// f(θ^i) or null for zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTableFile {
    pub field: FieldDescriptor,
    pub values: Vec<ElemJson>,
}

impl Serialize for FunctionTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FunctionTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = FunctionTableFile::deserialize(deserializer)?;
        FunctionTable::from_file(&file).map_err(serde::de::Error::custom)
    }
}

/// f(x) = tr_{q^n/q}(x).
pub fn trace_function(field: &Arc<Field>) -> FunctionTable {
    FunctionTable::from_fn(field.clone(), |i| field.rel_trace(Elem::from_exp(i)))
        .expect("trace lands in GF(q)")
}

/// The b-sequence b_0, ..., b_{2ℓ} (entries ±1), read as b_0 = 1,
/// b_{ij mod (2ℓ+1)} = (-1)^i for 1 <= i <= ℓ, and b_i = b_{2ℓ+1-i}.
pub fn hg_b_sequence(ell: u32, j: u32) -> Result<Vec<i64>> {
    let len = 2 * ell + 1;
    if ell == 0 || j == 0 || j >= len || gcd(j as u64, len as u64) != 1 {
        return Err(Error::Parameters(format!(
            "reading multiplier j = {j} must be coprime to 2ℓ+1 = {len} and lie in [1, 2ℓ]"
        )));
    }
    let mut b = vec![0i64; len as usize];
    b[0] = 1;
    for i in 1..=ell {
        let idx = ((i as u64 * j as u64) % len as u64) as usize;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        b[idx] = sign;
        b[len as usize - idx] = sign;
    }
    debug_assert!(b.iter().all(|&x| x != 0));
    Ok(b)
}

/// Coefficients u_0 = b_0/2 and u_i = b_{2i}, as residues mod p.
pub fn hg_coefficients(p: u32, ell: u32, j: u32) -> Result<Vec<u32>> {
    let b = hg_b_sequence(ell, j)?;
    let len = b.len();
    let half = (p as i64 + 1) / 2;
    let mut u = vec![(b[0] * half).rem_euclid(p as i64) as u32];
    for i in 1..=ell as usize {
        u.push(b[(2 * i) % len].rem_euclid(p as i64) as u32);
    }
    Ok(u)
}

/// Exponents (q^{2ki} + 1)/2 for i = 0..=ℓ, reduced modulo q^n - 1.
pub fn hg_exponents(field: &Field, k: u32, ell: u32) -> Vec<u64> {
    let n = field.group_order() as u64;
    (0..=ell as u64)
        .map(|i| {
            let odd = pow_mod_u64(field.q() as u64, 2 * k as u64 * i, 2 * n);
            odd.div_ceil(2) % n
        })
        .collect()
}

/// Helleseth–Gong function tr(Σ u_i x^{(q^{2ki}+1)/2}), n = (2ℓ+1)k, using the
/// b-sequence reading with multiplier j = 1.
pub fn helleseth_gong(field: &Arc<Field>, k: u32, ell: u32) -> Result<FunctionTable> {
    helleseth_gong_with_reading(field, k, ell, 1)
}

/// Helleseth–Gong with an explicit reading multiplier j. The table is checked
/// for difference balance before it is returned.
pub fn helleseth_gong_with_reading(
    field: &Arc<Field>,
    k: u32,
    ell: u32,
    j: u32,
) -> Result<FunctionTable> {
    let f = helleseth_gong_unchecked(field, k, ell, j)?;
    let report = is_difference_balanced(&f);
    if !report.verdict {
        return Err(Error::Validation(format!(
            "Helleseth–Gong table (k = {k}, ℓ = {ell}, j = {j}) is not difference balanced: {:?}",
            report.witness
        )));
    }
    Ok(f)
}

pub fn helleseth_gong_unchecked(
    field: &Arc<Field>,
    k: u32,
    ell: u32,
    j: u32,
) -> Result<FunctionTable> {
    if k == 0 || ell == 0 || (2 * ell + 1) * k != field.n() {
        return Err(Error::Parameters(format!(
            "n = {} is not (2ℓ+1)k with k = {k}, ℓ = {ell}",
            field.n()
        )));
    }
    let coeffs: Vec<Elem> = hg_coefficients(field.p(), ell, j)?
        .into_iter()
        .map(|u| field.from_residue(u as i64))
        .collect();
    let exps = hg_exponents(field, k, ell);
    let n = field.group_order() as u64;
    FunctionTable::from_fn(field.clone(), |i| {
        let inner = coeffs.iter().zip(&exps).fold(Elem::ZERO, |acc, (&u, &e)| {
            let term = field.mul(u, Elem::from_exp((i as u64 * e % n) as u32));
            field.add(acc, term)
        });
        field.rel_trace(inner)
    })
}

/// Every admissible reading multiplier j with whether its table validates.
pub fn hg_readings(field: &Arc<Field>, k: u32, ell: u32) -> Result<Vec<(u32, bool)>> {
    let len = 2 * ell + 1;
    (1..len)
        .filter(|&j| gcd(j as u64, len as u64) == 1)
        .map(|j| {
            let f = helleseth_gong_unchecked(field, k, ell, j)?;
            Ok((j, is_difference_balanced(&f).verdict))
        })
        .collect()
}

/// e = 2·3^{(n-1)/2} + 1.
pub fn lin_exponent(n: u32) -> u64 {
    2 * 3u64.pow((n - 1) / 2) + 1
}

/// Lin's function tr_{3^n/3}(x + x^e) in characteristic 3.
pub fn lin_function(field: &Arc<Field>) -> Result<FunctionTable> {
    if field.p() != 3 || field.m() != 1 {
        return Err(Error::Parameters("Lin's function needs q = 3".into()));
    }
    let n = field.n();
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::Parameters(format!("Lin's function needs odd n >= 3, got {n}")));
    }
    let e = lin_exponent(n);
    let order = field.group_order() as u64;
    FunctionTable::from_fn(field.clone(), |i| {
        let x = Elem::from_exp(i);
        let xe = Elem::from_exp((i as u64 * e % order) as u32);
        field.rel_trace(field.add(x, xe))
    })
}

/// x ↦ f(x) + b for b ∈ GF(q).
pub fn affine_shift(f: &FunctionTable, b: Elem) -> Result<FunctionTable> {
    let field = f.field();
    if !field.in_subfield(b) {
        return Err(Error::NotInSubfield(format!("{b:?}")));
    }
    let values = f.values().iter().map(|&v| field.add(v, b)).collect();
    FunctionTable::new(field.clone(), values)
}

/// Parameters ((q^n-1)/(q-1), q-1, q^{n-1}, q^{n-2}) of a relative difference
/// set in GF(q^n)* relative to GF(q)*.
pub fn singer_rds_params(field: &Field) -> RelativeParams {
    let q = field.q() as u64;
    let n = field.n();
    RelativeParams {
        m: field.subfield_stride() as u64,
        n: q - 1,
        k: q.pow(n - 1),
        lambda: q.pow(n - 2),
    }
}

/// {x : tr_{q^n/q^ℓ}(x) = 1}, as exponents.
pub fn intermediate_trace_preimage(field: &Field, ell: u32) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for i in 0..field.group_order() {
        if field.trace_to_intermediate(Elem::from_exp(i), ell)? == Elem::ONE {
            out.push(i);
        }
    }
    Ok(out)
}

/// {y ∈ GF(q^ℓ)* : tr_{q^ℓ/q}(y) = 1}, as exponents relative to θ^{(q^n-1)/(q^ℓ-1)}.
pub fn intermediate_subfield_preimage(field: &Field, ell: u32) -> Result<Vec<u32>> {
    let stride = field.intermediate_stride(ell)?;
    let sub_order = field.group_order() / stride;
    let mut out = Vec::new();
    for j in 0..sub_order {
        if field.trace_from_intermediate(Elem::from_exp(j * stride), ell)? == Elem::ONE {
            out.push(j);
        }
    }
    Ok(out)
}

/// Product {d_1 d_2} of a relative difference set D1 ⊂ GF(q^n)* (relative to
/// GF(q^ℓ)*) and D2 ⊂ GF(q^ℓ)* (relative to GF(q)*). D2 is given by exponents
/// relative to θ^{(q^n-1)/(q^ℓ-1)}. Both inputs are verified first; the output
/// is verified as a ((q^n-1)/(q-1), q-1, q^{n-1}, q^{n-2}) relative difference set.
pub fn rds_product(field: &Field, d1: &[u32], d2: &[u32], ell: u32) -> Result<Vec<u32>> {
    let n = field.n();
    let q = field.q() as u64;
    let stride = field.intermediate_stride(ell)?;
    let order = field.group_order();
    let sub_order = order / stride;

    // a zero exponent means the λ slot is vacuous (no differences outside the subgroup)
    let lambda = |e: i64| if e >= 0 { q.pow(e as u32) } else { 0 };
    let p1 = RelativeParams {
        m: stride as u64,
        n: sub_order as u64,
        k: q.pow(n - ell),
        lambda: lambda(n as i64 - 2 * ell as i64),
    };
    let r1 = verify_relative_cyclic(d1, order as u64, &p1)?;
    if !r1.verdict {
        return Err(Error::Validation(format!("D1 is not a {p1:?} relative difference set")));
    }
    let p2 = RelativeParams {
        m: sub_order as u64 / (q - 1),
        n: q - 1,
        k: q.pow(ell - 1),
        lambda: lambda(ell as i64 - 2),
    };
    let r2 = verify_relative_cyclic(d2, sub_order as u64, &p2)?;
    if !r2.verdict {
        return Err(Error::Validation(format!("D2 is not a {p2:?} relative difference set")));
    }

    let mut seen = vec![false; order as usize];
    let mut product = Vec::with_capacity(d1.len() * d2.len());
    for &a in d1 {
        for &j in d2 {
            let e = ((a as u64 + j as u64 * stride as u64) % order as u64) as u32;
            if std::mem::replace(&mut seen[e as usize], true) {
                return Err(Error::Validation(format!("product repeats θ^{e}")));
            }
            product.push(e);
        }
    }
    product.sort_unstable();

    let params = singer_rds_params(field);
    let report = verify_relative_cyclic(&product, order as u64, &params)?;
    if !report.verdict {
        return Err(Error::Validation(format!(
            "product is not a {params:?} relative difference set: {:?}",
            report.witness
        )));
    }
    Ok(product)
}

/// The function f(x) = b^d on C_b = bC (b ∈ GF(q)*), 0 on the rest, for a
/// ((q^n-1)/(q-1), q-1, q^{n-1}, q^{n-2}) relative difference set C.
pub fn from_rds(field: &Arc<Field>, c: &[u32], d: u32) -> Result<FunctionTable> {
    let q = field.q() as u64;
    if gcd(d as u64, q - 1) != 1 {
        return Err(Error::Parameters(format!("gcd({d}, q - 1 = {}) != 1", q - 1)));
    }
    let order = field.group_order() as u64;
    let report = verify_relative_cyclic(c, order, &singer_rds_params(field))?;
    if !report.verdict {
        return Err(Error::Validation(format!(
            "input is not a relative difference set: {:?}",
            report.witness
        )));
    }
    let stride = field.subfield_stride() as u64;
    let mut values: Vec<Option<Elem>> = vec![None; order as usize];
    for j in 0..q - 1 {
        let value = Elem::from_exp((j * stride * d as u64 % order) as u32);
        for &x in c {
            let e = ((x as u64 + j * stride) % order) as usize;
            if values[e].replace(value).is_some() {
                return Err(Error::Validation(format!("translates of C overlap at θ^{e}")));
            }
        }
    }
    let values = values.into_iter().map(|v| v.unwrap_or(Elem::ZERO)).collect();
    FunctionTable::new(field.clone(), values)
}

/// The cascaded function from the product of tr_{q^n/q^ℓ}^{-1}(1) and
/// tr_{q^ℓ/q}^{-1}(1), with degree d = 1.
pub fn product_function(field: &Arc<Field>, ell: u32) -> Result<FunctionTable> {
    let d1 = intermediate_trace_preimage(field, ell)?;
    let d2 = intermediate_subfield_preimage(field, ell)?;
    let c = rds_product(field, &d1, &d2, ell)?;
    from_rds(field, &c, 1)
}
