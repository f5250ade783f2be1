//! Group-ring machinery over G = (GF(q^n)*, ·) × (GF(q), +).
//!
//! Group elements are pairs (θ^x, y) stored as (x, additive index); the
//! additive part is any small abelian group given by tables, which lets the
//! same code run on quotients G/H for H ≤ (GF(q), +). Group-ring elements are
//! dense integer vectors. Every verdict here comes from integer counting;
//! complex character values are only a cross-check.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{from_rds, singer_rds_params, FunctionTable};
use crate::properties::admissible_degrees;
use crate::error::{Error, Result};
use crate::field::{gcd, Elem, Field, SubfieldTables};
use crate::report::{elem_json, PairJson, Property, PropertyReport, SpectrumMismatch, Witness};

/// A finite abelian group of small order given by its addition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveTable {
    order: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
}

impl AdditiveTable {
    pub fn from_subfield(tables: &SubfieldTables) -> Self {
        AdditiveTable {
            order: tables.q,
            add: tables.add.clone(),
            neg: tables.neg.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// t·a as a repeated sum (t >= 0).
    pub fn multiple(&self, a: u16, t: u64) -> u16 {
        // the exponent of the group divides its order
        (0..t % self.order as u64).fold(0, |acc, _| self.add(acc, a))
    }

    fn is_subgroup(&self, h: &[u16]) -> bool {
        let mut mask = vec![false; self.order];
        for &x in h {
            if x as usize >= self.order {
                return false;
            }
            mask[x as usize] = true;
        }
        mask[0] && h.iter().all(|&a| h.iter().all(|&b| mask[self.add(a, b) as usize]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    /// exponent of θ
    pub mult: u32,
    /// index into the additive group
    pub add: u16,
}

/// Z_N × A with N the multiplicative order and A an [`AdditiveTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductGroup {
    mult_order: u32,
    additive: AdditiveTable,
}

impl ProductGroup {
    pub fn new(mult_order: u32, additive: AdditiveTable) -> Self {
        ProductGroup {
            mult_order,
            additive,
        }
    }

    /// G = GF(q^n)* × (GF(q), +), additive part indexed in subfield order.
    pub fn from_field(field: &Field) -> Self {
        Self::new(
            field.group_order(),
            AdditiveTable::from_subfield(&SubfieldTables::new(field)),
        )
    }

    pub fn order(&self) -> usize {
        self.mult_order as usize * self.additive.order
    }

    pub fn mult_order(&self) -> u32 {
        self.mult_order
    }

    pub fn additive(&self) -> &AdditiveTable {
        &self.additive
    }

    #[inline]
    pub fn index(&self, g: GroupElement) -> usize {
        g.mult as usize * self.additive.order + g.add as usize
    }

    #[inline]
    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement {
            mult: (index / self.additive.order) as u32,
            add: (index % self.additive.order) as u16,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { mult: 0, add: 0 }
    }

    #[inline]
    pub fn op(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        GroupElement {
            mult: ((g.mult as u64 + h.mult as u64) % self.mult_order as u64) as u32,
            add: self.additive.add(g.add, h.add),
        }
    }

    #[inline]
    pub fn inv(&self, g: GroupElement) -> GroupElement {
        GroupElement {
            mult: (self.mult_order - g.mult) % self.mult_order,
            add: self.additive.neg(g.add),
        }
    }

    /// N1 = {1} × A.
    pub fn additive_subgroup(&self) -> Subgroup {
        Subgroup::new(
            (0..self.additive.order)
                .map(|a| self.index(GroupElement { mult: 0, add: a as u16 }))
                .collect(),
        )
    }

    /// N2 = Z_N × {0}.
    pub fn multiplicative_subgroup(&self) -> Subgroup {
        Subgroup::new(
            (0..self.mult_order)
                .map(|x| self.index(GroupElement { mult: x, add: 0 }))
                .collect(),
        )
    }

    /// G/H for an additive subgroup H ≤ A, with the projection on additive indices.
    pub fn quotient(&self, h: &[u16]) -> Result<(ProductGroup, Vec<u16>)> {
        if !self.additive.is_subgroup(h) {
            return Err(Error::Subgroup(format!("{h:?} is not a subgroup of the additive part")));
        }
        let order = self.additive.order;
        let mut label = vec![u16::MAX; order];
        let mut reps = Vec::new();
        for a in 0..order as u16 {
            if label[a as usize] != u16::MAX {
                continue;
            }
            let id = reps.len() as u16;
            reps.push(a);
            for &x in h {
                label[self.additive.add(a, x) as usize] = id;
            }
        }
        let k = reps.len();
        let mut add = vec![0u16; k * k];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                add[i * k + j] = label[self.additive.add(a, b) as usize];
            }
        }
        let neg = reps.iter().map(|&a| label[self.additive.neg(a) as usize]).collect();
        let table = AdditiveTable { order: k, add, neg };
        Ok((ProductGroup::new(self.mult_order, table), label))
    }
}

/// A subgroup as a sorted list of group indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_subgroup_of(&self, group: &ProductGroup) -> bool {
        let mut mask = vec![false; group.order()];
        for &m in &self.members {
            if m >= group.order() {
                return false;
            }
            mask[m] = true;
        }
        mask[group.index(group.identity())]
            && self.members.iter().all(|&a| {
                self.members.iter().all(|&b| {
                    mask[group.index(group.op(group.element(a), group.inv(group.element(b))))]
                })
            })
    }
}

/// Dense integer coefficients Σ a_g g indexed by [`ProductGroup::index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    coeffs: Vec<i64>,
}

impl GroupRingElement {
    pub fn zero(group: &ProductGroup) -> Self {
        GroupRingElement {
            coeffs: vec![0; group.order()],
        }
    }

    pub fn scalar(group: &ProductGroup, c: i64) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[group.index(group.identity())] = c;
        e
    }

    pub fn from_set(group: &ProductGroup, set: &[GroupElement]) -> Self {
        let mut e = Self::zero(group);
        for &g in set {
            e.coeffs[group.index(g)] += 1;
        }
        e
    }

    /// The whole group G as a group-ring element.
    pub fn all(group: &ProductGroup) -> Self {
        GroupRingElement {
            coeffs: vec![1; group.order()],
        }
    }

    pub fn from_subgroup(group: &ProductGroup, h: &Subgroup) -> Self {
        let mut e = Self::zero(group);
        for &m in h.members() {
            e.coeffs[m] = 1;
        }
        e
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coefficient(&self, group: &ProductGroup, g: GroupElement) -> i64 {
        self.coeffs[group.index(g)]
    }

    pub fn add_scaled(&mut self, other: &GroupRingElement, c: i64) -> &mut Self {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += c * b;
        }
        self
    }

    pub fn mass(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Σ a_g g^{-1}.
    pub fn inverse_image(&self, group: &ProductGroup) -> Self {
        let mut out = Self::zero(group);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out.coeffs[group.index(group.inv(group.element(i)))] += c;
            }
        }
        out
    }

    /// Convolution product in Z[G].
    pub fn product(&self, other: &GroupRingElement, group: &ProductGroup) -> Self {
        let mut out = Self::zero(group);
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            let g = group.element(i);
            for (j, &b) in other.coeffs.iter().enumerate().filter(|(_, &b)| b != 0) {
                out.coeffs[group.index(group.op(g, group.element(j)))] += a * b;
            }
        }
        out
    }
}

/// D = {(x, f(x))} with the additive part in subfield order.
pub fn graph_set(f: &FunctionTable) -> Vec<GroupElement> {
    f.subfield_indices()
        .into_iter()
        .enumerate()
        .map(|(i, y)| GroupElement {
            mult: i as u32,
            add: y,
        })
        .collect()
}

pub fn pair_json(field: &Field, g: GroupElement) -> PairJson {
    PairJson {
        x: g.mult,
        y: elem_json(field.subfield_element(g.add as usize)),
    }
}

/// DD^{(-1)}, including the |D| diagonal pairs at the identity.
pub fn difference_multiset(group: &ProductGroup, set: &[GroupElement]) -> GroupRingElement {
    let inverses: Vec<GroupElement> = set.iter().map(|&d| group.inv(d)).collect();
    let chunk = set.len().div_ceil(rayon::current_num_threads().max(1)).max(1);
    let coeffs = set
        .par_chunks(chunk)
        .map(|rows| {
            let mut acc = vec![0i64; group.order()];
            for &d1 in rows {
                for &d2inv in &inverses {
                    acc[group.index(group.op(d1, d2inv))] += 1;
                }
            }
            acc
        })
        .reduce(
            || vec![0i64; group.order()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    GroupRingElement { coeffs }
}

/// (v; n_1, ..., n_r; k, λ; λ_1, ..., λ_r).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub v: u64,
    pub n: Vec<u64>,
    pub k: u64,
    pub lambda: u64,
    pub lambdas: Vec<u64>,
}

impl DesignParams {
    /// (q(q^n-1); q, q^n-1; q^n-1, q^{n-1}; 0, q^{n-1}-1), the parameters of
    /// the graph of a difference balanced function relative to N1 = (GF(q), +)
    /// and N2 = GF(q^n)*.
    pub fn for_function(field: &Field) -> Self {
        let q = field.q() as u64;
        let big = field.group_order() as u64;
        let fibre = field.fibre_size();
        DesignParams {
            v: q * big,
            n: vec![q, big],
            k: big,
            lambda: fibre,
            lambdas: vec![0, fibre - 1],
        }
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    /// k(k-1) = λ(v - 1 - Σ(n_i - 1)) + Σ λ_i (n_i - 1).
    pub fn counting_identity_holds(&self) -> bool {
        let inside: u64 = self.n.iter().map(|&n| n.saturating_sub(1)).sum();
        let Some(outside) = self.v.checked_sub(1 + inside) else {
            return false;
        };
        let rhs = self.lambda as u128 * outside as u128
            + self
                .n
                .iter()
                .zip(&self.lambdas)
                .map(|(&n, &l)| l as u128 * n.saturating_sub(1) as u128)
                .sum::<u128>();
        self.k as u128 * (self.k as u128).saturating_sub(1) == rhs
    }

    pub fn to_vec(&self) -> Vec<u64> {
        let mut v = vec![self.v];
        v.extend(&self.n);
        v.push(self.k);
        v.push(self.lambda);
        v.extend(&self.lambdas);
        v
    }
}

/// The right-hand side of the group-ring characterization,
/// (k - (λ(1-r) + Σλ_i)) + λ(G - ΣN_i) + Σ λ_i N_i.
pub fn gds_group_ring(
    group: &ProductGroup,
    params: &DesignParams,
    subgroups: &[Subgroup],
) -> GroupRingElement {
    let r = params.r() as i64;
    let lambda = params.lambda as i64;
    let sum_lambdas: i64 = params.lambdas.iter().map(|&l| l as i64).sum();
    let constant = params.k as i64 - (lambda * (1 - r) + sum_lambdas);
    let mut e = GroupRingElement::scalar(group, constant);
    e.add_scaled(&GroupRingElement::all(group), lambda);
    for (h, &l) in subgroups.iter().zip(&params.lambdas) {
        let hn = GroupRingElement::from_subgroup(group, h);
        e.add_scaled(&hn, l as i64 - lambda);
    }
    e
}

/// q^n + q^{n-1}G - q^{n-1}N1 - N2, the specialization for function graphs.
pub fn function_gds_group_ring(field: &Field, group: &ProductGroup) -> GroupRingElement {
    let qn = field.group_order() as i64 + 1;
    let fibre = field.fibre_size() as i64;
    let mut e = GroupRingElement::scalar(group, qn);
    e.add_scaled(&GroupRingElement::all(group), fibre);
    e.add_scaled(
        &GroupRingElement::from_subgroup(group, &group.additive_subgroup()),
        -fibre,
    );
    e.add_scaled(
        &GroupRingElement::from_subgroup(group, &group.multiplicative_subgroup()),
        -1,
    );
    e
}

fn check_design_setup(
    group: &ProductGroup,
    params: &DesignParams,
    subgroups: &[Subgroup],
) -> Result<()> {
    if params.v != group.order() as u64 {
        return Err(Error::Parameters(format!(
            "v = {} but |G| = {}",
            params.v,
            group.order()
        )));
    }
    if params.n.len() != subgroups.len() || params.lambdas.len() != subgroups.len() {
        return Err(Error::Parameters("one n_i and λ_i per exceptional subgroup".into()));
    }
    if !params.counting_identity_holds() {
        return Err(Error::Parameters(format!(
            "{:?} fails the counting identity",
            params.to_vec()
        )));
    }
    let identity = group.index(group.identity());
    for (i, (h, &n)) in subgroups.iter().zip(&params.n).enumerate() {
        if h.order() as u64 != n || !h.is_subgroup_of(group) {
            return Err(Error::Subgroup(format!("N_{} is not a subgroup of order {n}", i + 1)));
        }
        for other in &subgroups[i + 1..] {
            if h.members().iter().any(|m| *m != identity && other.members().binary_search(m).is_ok()) {
                return Err(Error::Subgroup("exceptional subgroups intersect nontrivially".into()));
            }
        }
    }
    Ok(())
}

/// Compare DD^{(-1)} coefficient-by-coefficient with the group-ring
/// characterization for the given parameters and exceptional subgroups.
pub fn verify_gds(
    group: &ProductGroup,
    set: &[GroupElement],
    params: &DesignParams,
    subgroups: &[Subgroup],
) -> Result<PropertyReport> {
    check_design_setup(group, params, subgroups)?;
    let expected = gds_group_ring(group, params, subgroups);
    let actual = difference_multiset(group, set);
    let mismatch = (0..group.order()).find(|&i| expected.coeffs[i] != actual.coeffs[i]);
    Ok(match mismatch {
        None => PropertyReport::pass(
            Property::GeneralizedDifferenceSet,
            Some(Witness::Parameters {
                params: params.to_vec(),
            }),
        ),
        Some(i) => {
            let g = group.element(i);
            PropertyReport::fail(
                Property::GeneralizedDifferenceSet,
                Witness::Coefficient {
                    mult: g.mult,
                    add: g.add,
                    expected: expected.coeffs[i],
                    actual: actual.coeffs[i],
                },
            )
        }
    })
}

/// Graph set of f checked against (q(q^n-1); q, q^n-1; q^n-1, q^{n-1}; 0, q^{n-1}-1).
pub fn verify_function_gds(f: &FunctionTable) -> PropertyReport {
    let field = f.field();
    let group = ProductGroup::from_field(field);
    let subgroups = [group.additive_subgroup(), group.multiplicative_subgroup()];
    verify_gds(&group, &graph_set(f), &DesignParams::for_function(field), &subgroups)
        .expect("standard parameters are consistent")
}

/// Image of a generalized difference set under G -> G/H.
#[derive(Clone, Debug)]
pub struct Projection {
    pub group: ProductGroup,
    pub set: Vec<GroupElement>,
    pub params: DesignParams,
    pub report: PropertyReport,
}

/// Project D along H ≤ N1. For parameters (v; n1, n2; k, λ; 0, λ2) the image is
/// predicted to be (v/m; n1/m, n2; k, mλ; 0, λ(m-1) + λ2) with m = |H|.
pub fn project(
    group: &ProductGroup,
    set: &[GroupElement],
    params: &DesignParams,
    h: &[u16],
) -> Result<Projection> {
    if params.r() != 2 {
        return Err(Error::Parameters("projection needs two exceptional subgroups".into()));
    }
    if params.lambdas[0] != 0 {
        return Err(Error::Parameters("λ1 must be 0 for the image to be a set".into()));
    }
    let (quotient, label) = group.quotient(h)?;
    let m = h.len() as u64;
    let mut image: Vec<GroupElement> = set
        .iter()
        .map(|g| GroupElement {
            mult: g.mult,
            add: label[g.add as usize],
        })
        .collect();
    image.sort_unstable();
    let before = image.len();
    image.dedup();
    let predicted = DesignParams {
        v: params.v / m,
        n: vec![params.n[0] / m, params.n[1]],
        k: params.k,
        lambda: m * params.lambda,
        lambdas: vec![0, params.lambda * (m - 1) + params.lambdas[1]],
    };
    let report = if image.len() != before {
        PropertyReport::fail(
            Property::GeneralizedDifferenceSet,
            Witness::SetSize {
                expected: before as u64,
                actual: image.len() as u64,
            },
        )
    } else {
        let subgroups = [quotient.additive_subgroup(), quotient.multiplicative_subgroup()];
        verify_gds(&quotient, &image, &predicted, &subgroups)?
    };
    Ok(Projection {
        group: quotient,
        set: image,
        params: predicted,
        report,
    })
}

/// (m, n, k, λ): relative difference set in Z_{mn} relative to its subgroup of order n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeParams {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
}

/// (m, n, k, λ1, λ2): divisible difference set in Z_{mn}; λ1 inside the
/// subgroup of order n, λ2 outside.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibleParams {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub lambda1: u64,
    pub lambda2: u64,
}

/// (v, k, λ) cyclic difference set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

/// counts[d] = |{(a, b) ∈ S × S : a - b ≡ d (mod v)}|.
pub fn cyclic_difference_counts(set: &[u32], v: u64) -> Vec<u64> {
    let mut counts = vec![0u64; v as usize];
    for &a in set {
        for &b in set {
            counts[((a as u64 + v - b as u64 % v) % v) as usize] += 1;
        }
    }
    counts
}

#[allow(clippy::too_many_arguments)]
fn check_cyclic(
    set: &[u32],
    v: u64,
    subgroup_stride: u64,
    k: u64,
    inside: u64,
    outside: u64,
    property: Property,
    params: Vec<u64>,
) -> PropertyReport {
    if set.len() as u64 != k {
        return PropertyReport::fail(
            property,
            Witness::SetSize {
                expected: k,
                actual: set.len() as u64,
            },
        );
    }
    let counts = cyclic_difference_counts(set, v);
    let expect = |d: u64| {
        if d == 0 {
            k
        } else if d.is_multiple_of(subgroup_stride) {
            inside
        } else {
            outside
        }
    };
    match (0..v).find(|&d| counts[d as usize] != expect(d)) {
        None => PropertyReport::pass(property, Some(Witness::Parameters { params })),
        Some(d) => PropertyReport::fail(
            property,
            Witness::CyclicCoefficient {
                difference: d as u32,
                expected: expect(d),
                actual: counts[d as usize],
            },
        ),
    }
}

/// Verify a relative difference set in Z_v relative to the subgroup of order n
/// (the multiples of m).
pub fn verify_relative_cyclic(set: &[u32], v: u64, params: &RelativeParams) -> Result<PropertyReport> {
    if params.m * params.n != v {
        return Err(Error::Parameters(format!("{params:?} does not factor v = {v}")));
    }
    Ok(check_cyclic(
        set,
        v,
        params.m,
        params.k,
        0,
        params.lambda,
        Property::RelativeDifferenceSet,
        vec![params.m, params.n, params.k, params.lambda],
    ))
}

pub fn verify_divisible_cyclic(
    set: &[u32],
    v: u64,
    params: &DivisibleParams,
) -> Result<PropertyReport> {
    if params.m * params.n != v {
        return Err(Error::Parameters(format!("{params:?} does not factor v = {v}")));
    }
    Ok(check_cyclic(
        set,
        v,
        params.m,
        params.k,
        params.lambda1,
        params.lambda2,
        Property::DivisibleDifferenceSet,
        vec![params.m, params.n, params.k, params.lambda1, params.lambda2],
    ))
}

pub fn verify_cyclic_ds(set: &[u32], params: &CyclicParams) -> PropertyReport {
    // the "subgroup" is trivial: stride v never divides a nonzero difference
    check_cyclic(
        set,
        params.v,
        params.v,
        params.k,
        params.lambda,
        params.lambda,
        Property::CyclicDifferenceSet,
        vec![params.v, params.k, params.lambda],
    )
}

/// ((q^n-1)/(q-1), q-1, q^{n-1}-1, q^{n-1}-1, q^{n-2}-1) for the zero fibre.
pub fn zero_fibre_params(field: &Field) -> DivisibleParams {
    let q = field.q() as u64;
    let fibre = field.fibre_size();
    DivisibleParams {
        m: field.subfield_stride() as u64,
        n: q - 1,
        k: fibre - 1,
        lambda1: fibre - 1,
        lambda2: fibre / q - 1,
    }
}

/// D_b = {x : f(x) = b} as sorted exponents, verified as a relative difference
/// set (b != 0) or divisible difference set (b = 0).
pub fn preimage_rds(f: &FunctionTable, b: Elem) -> Result<(Vec<u32>, PropertyReport)> {
    let field = f.field();
    if !field.in_subfield(b) {
        return Err(Error::NotInSubfield(format!("{b:?}")));
    }
    let set: Vec<u32> = f
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == b)
        .map(|(i, _)| i as u32)
        .collect();
    let v = field.group_order() as u64;
    let report = if b.is_zero() {
        verify_divisible_cyclic(&set, v, &zero_fibre_params(field))?
    } else {
        verify_relative_cyclic(&set, v, &singer_rds_params(field))?
    };
    Ok((set, report))
}

/// C = f^{-1}(1) is a ((q^n-1)/(q-1), q-1, q^{n-1}, q^{n-2}) relative
/// difference set and f is rebuilt from it as x ↦ b^d on bC for some
/// admissible d. The witness on success is that d.
pub fn rds_reconstructs(f: &FunctionTable) -> Result<PropertyReport> {
    let field = f.field();
    let (set, report) = preimage_rds(f, Elem::ONE)?;
    if !report.verdict {
        return Ok(report);
    }
    for d in admissible_degrees(field.q()) {
        if from_rds(field, &set, d).is_ok_and(|g| &g == f) {
            return Ok(PropertyReport::pass(
                Property::RelativeDifferenceSet,
                Some(Witness::Degree { d }),
            ));
        }
    }
    Ok(PropertyReport::fail(
        Property::RelativeDifferenceSet,
        Witness::Note {
            message: "f is not x ↦ b^d on the translates bC of its preimage of 1".into(),
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreimageKind {
    Zero,
    NonZero,
}

/// Singer parameters of the image of D_b in GF(q^n)*/GF(q)* ≅ Z_{(q^n-1)/(q-1)}.
pub fn singer_params(field: &Field, kind: PreimageKind) -> CyclicParams {
    let q = field.q() as u64;
    let v = field.subfield_stride() as u64;
    let fibre = field.fibre_size();
    match kind {
        PreimageKind::NonZero => CyclicParams {
            v,
            k: fibre,
            lambda: fibre / q * (q - 1),
        },
        PreimageKind::Zero => CyclicParams {
            v,
            k: (fibre - 1) / (q - 1),
            lambda: (fibre / q - 1) / (q - 1),
        },
    }
}

/// Reduce exponents modulo (q^n-1)/(q-1) and verify the Singer parameters.
/// A nonzero fibre must map injectively; the zero fibre must be a union of
/// full cosets of GF(q)*, each contributing one point.
pub fn singer_projection(field: &Field, set: &[u32], kind: PreimageKind) -> (Vec<u32>, PropertyReport) {
    let v = field.subfield_stride();
    let coset = (field.q() - 1) as usize;
    let mut multiplicity = vec![0usize; v as usize];
    for &x in set {
        multiplicity[(x % v) as usize] += 1;
    }
    let image: Vec<u32> = (0..v).filter(|&r| multiplicity[r as usize] > 0).collect();
    let expected_mult = match kind {
        PreimageKind::NonZero => 1,
        PreimageKind::Zero => coset,
    };
    if let Some(r) = (0..v as usize).find(|&r| multiplicity[r] != 0 && multiplicity[r] != expected_mult) {
        return (
            image,
            PropertyReport::fail(
                Property::CyclicDifferenceSet,
                Witness::Note {
                    message: format!(
                        "coset {r} of GF(q)* meets the set {} times, expected {expected_mult}",
                        multiplicity[r]
                    ),
                },
            ),
        );
    }
    let report = verify_cyclic_ds(&image, &singer_params(field, kind));
    (image, report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterClass {
    Principal,
    /// χ|N1 principal, χ nonprincipal
    TrivialOnAdditive,
    /// χ|N2 principal, χ nonprincipal
    TrivialOnMultiplicative,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterEntry {
    pub u: u32,
    /// additive character index in subfield order: ψ_c(y) = ζ_p^{Tr(c y)}
    pub c: u16,
    pub class: CharacterClass,
    pub expected: i64,
    pub exact: Option<i64>,
    pub approx: f64,
}

/// Coefficients of DD^{(-1)} when constant on identity, N1 \ 1, N2 \ 1 and the rest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionCoefficients {
    pub identity: i64,
    pub additive: i64,
    pub multiplicative: i64,
    pub rest: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterSpectrum {
    pub regions: Option<RegionCoefficients>,
    pub entries: Vec<CharacterEntry>,
    pub report: PropertyReport,
}

fn region_coefficients(group: &ProductGroup, dd: &GroupRingElement) -> Option<RegionCoefficients> {
    let mut additive = None;
    let mut multiplicative = None;
    let mut rest = None;
    let identity = dd.coeffs[group.index(group.identity())];
    for (i, &c) in dd.coeffs.iter().enumerate() {
        let g = group.element(i);
        let slot = match (g.mult == 0, g.add == 0) {
            (true, true) => continue,
            (true, false) => &mut additive,
            (false, true) => &mut multiplicative,
            (false, false) => &mut rest,
        };
        match *slot {
            None => *slot = Some(c),
            Some(prev) if prev != c => return None,
            _ => {}
        }
    }
    Some(RegionCoefficients {
        identity,
        additive: additive.unwrap_or(0),
        multiplicative: multiplicative.unwrap_or(0),
        rest: rest.unwrap_or(0),
    })
}

/// |χ(D)|² for every character of G = GF(q^n)* × (GF(q), +).
///
/// The exact value comes from DD^{(-1)} via orthogonality once its
/// coefficients are known to be constant on the four regions; the float value
/// evaluates χ(D) directly. The verdict requires the exact value to match the
/// four-case table and the float value to agree within 1e-6.
pub fn character_spectrum(field: &Field, set: &[GroupElement]) -> Result<CharacterSpectrum> {
    let group = ProductGroup::from_field(field);
    let n = field.group_order();
    let q = field.q() as usize;
    let p = field.p();
    let subfield = field.subfield_elements();
    let dd = difference_multiset(&group, set);
    let regions = region_coefficients(&group, &dd);

    // trace_residue[c][y] = Tr_{q/p}(c·y)
    let mut trace_residue = vec![0u32; q * q];
    for (ci, &c) in subfield.iter().enumerate() {
        for (yi, &y) in subfield.iter().enumerate() {
            trace_residue[ci * q + yi] = field.subfield_trace_residue(field.mul(c, y))?;
        }
    }
    let zeta_n: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect();
    let zeta_p: Vec<Complex64> = (0..p)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / p as f64))
        .collect();

    let qn = n as i64 + 1;
    let d_size = set.len() as i64;
    let order = group.order() as i64;

    let entries: Vec<CharacterEntry> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let trace_residue = &trace_residue;
            let zeta_n = &zeta_n;
            let zeta_p = &zeta_p;
            (0..q as u16).map(move |c| {
                let class = match (u == 0, c == 0) {
                    (true, true) => CharacterClass::Principal,
                    (false, true) => CharacterClass::TrivialOnAdditive,
                    (true, false) => CharacterClass::TrivialOnMultiplicative,
                    (false, false) => CharacterClass::Generic,
                };
                let expected = match class {
                    CharacterClass::Principal => (qn - 1) * (qn - 1),
                    CharacterClass::TrivialOnAdditive => 0,
                    CharacterClass::TrivialOnMultiplicative => 1,
                    CharacterClass::Generic => qn,
                };
                let exact = regions.map(|r| {
                    let chi_n1 = if c == 0 { q as i64 } else { 0 };
                    let chi_n2 = if u == 0 { n as i64 } else { 0 };
                    let chi_g = if class == CharacterClass::Principal { order } else { 0 };
                    r.identity
                        + r.additive * (chi_n1 - 1)
                        + r.multiplicative * (chi_n2 - 1)
                        + r.rest * (chi_g - chi_n1 - chi_n2 + 1)
                });
                let value: Complex64 = set
                    .iter()
                    .map(|g| {
                        let k = (u as u64 * g.mult as u64 % n as u64) as usize;
                        zeta_n[k] * zeta_p[trace_residue[c as usize * q + g.add as usize] as usize]
                    })
                    .sum();
                CharacterEntry {
                    u,
                    c,
                    class,
                    expected,
                    exact,
                    approx: value.norm_sqr(),
                }
            })
        })
        .collect();

    let mismatches: Vec<SpectrumMismatch> = entries
        .iter()
        .filter(|e| e.exact != Some(e.expected) || (e.approx - e.expected as f64).abs() >= 1e-6)
        .map(|e| SpectrumMismatch {
            u: e.u,
            c: elem_json(field.subfield_element(e.c as usize)),
            expected: e.expected,
            exact: e.exact,
            approx: e.approx,
        })
        .collect();
    let principal_ok = entries
        .iter()
        .find(|e| e.class == CharacterClass::Principal)
        .is_some_and(|e| e.exact.is_none_or(|x| x == d_size * d_size));
    let witness = Witness::Spectrum {
        characters: entries.len() as u64,
        mismatches: mismatches.iter().take(16).cloned().collect(),
    };
    let report = if mismatches.is_empty() && principal_ok {
        PropertyReport::pass(Property::CharacterSpectrum, Some(witness))
    } else {
        PropertyReport::fail(Property::CharacterSpectrum, witness)
    };
    Ok(CharacterSpectrum {
        regions,
        entries,
        report,
    })
}

/// All g with gD = target.
pub fn translates_between(
    group: &ProductGroup,
    set: &[GroupElement],
    target: &[GroupElement],
) -> Vec<GroupElement> {
    let Some(&d0) = set.first() else {
        return vec![group.identity()];
    };
    if set.len() != target.len() {
        return Vec::new();
    }
    let mut mask = vec![false; group.order()];
    for &t in target {
        mask[group.index(t)] = true;
    }
    let d0inv = group.inv(d0);
    // any translate maps d0 into the target, so these candidates are exhaustive
    let mut found: Vec<GroupElement> = target
        .iter()
        .map(|&t| group.op(t, d0inv))
        .filter(|&g| set.iter().all(|&d| mask[group.index(group.op(g, d))]))
        .collect();
    found.sort_unstable();
    found.dedup();
    found
}

/// D^{(t1, t2)} = {(x^{t1}, t2·y)}.
pub fn multiplier_image(
    field: &Field,
    set: &[GroupElement],
    t1: u64,
    t2: Elem,
) -> Vec<GroupElement> {
    let n = field.group_order() as u64;
    let tables = SubfieldTables::new(field);
    let t2 = field.subfield_index(t2).expect("t2 in GF(q)") as u16;
    let mut image: Vec<GroupElement> = set
        .iter()
        .map(|g| GroupElement {
            mult: (g.mult as u64 * t1 % n) as u32,
            add: tables.mul(t2, g.add),
        })
        .collect();
    image.sort_unstable();
    image
}

/// Whether D^{(t1, t2)} is a translate (a, h)D. The witness lists every such
/// translate and whether one of them has h = 0.
pub fn multiplier_check(
    field: &Field,
    set: &[GroupElement],
    t1: i64,
    t2: Elem,
) -> Result<PropertyReport> {
    let n = field.group_order() as i64;
    let t1 = t1.rem_euclid(n) as u64;
    if gcd(t1, n as u64) != 1 {
        return Err(Error::Parameters(format!("gcd(t1, q^n - 1) != 1 for t1 = {t1}")));
    }
    if t2.is_zero() || !field.in_subfield(t2) {
        return Err(Error::Parameters(format!("t2 = {t2:?} must be a nonzero element of GF(q)")));
    }
    let group = ProductGroup::from_field(field);
    let image = multiplier_image(field, set, t1, t2);
    let translates = translates_between(&group, set, &image);
    let zero_additive = translates.iter().any(|g| g.add == 0);
    let witness = Witness::Translates {
        translates: translates.iter().map(|&g| pair_json(field, g)).collect(),
        zero_additive,
    };
    Ok(if translates.is_empty() {
        PropertyReport::fail(Property::Multiplier, witness)
    } else {
        PropertyReport::pass(Property::Multiplier, Some(witness))
    })
}

/// Condition (iii) of the equivalence theorem: graph set is a GDS and every
/// (1, t), t ∈ GF(q)*, is a multiplier with a translate of the form (a, 0).
pub fn unit_multipliers_hold(f: &FunctionTable) -> bool {
    let field = f.field();
    let set = graph_set(f);
    verify_function_gds(f).verdict
        && field.subfield_elements()[1..].iter().all(|&t| {
            matches!(
                multiplier_check(field, &set, 1, t),
                Ok(PropertyReport {
                    verdict: true,
                    witness: Some(Witness::Translates {
                        zero_additive: true,
                        ..
                    }),
                    ..
                })
            )
        })
}

/// t_i = p + i(p^n - 1), i = 1..p-1.
pub fn predicted_multipliers(p: u32, n: u32) -> Vec<u64> {
    let big = (p as u64).pow(n) - 1;
    (1..p as u64).map(|i| p as u64 + i * big).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionMultiplier {
    pub t: u64,
    /// t mod (p^n - 1)
    pub t1: u64,
    /// t mod p
    pub t2: u64,
    pub translates: Vec<PairJson>,
    pub zero_additive: bool,
}

/// All integers t in [1, p(p^n-1)) coprime to p(p^n-1) acting as
/// (x, y) ↦ (x^t, t·y) that map D to a translate. Only for q = p.
pub fn find_function_multipliers(field: &Field, set: &[GroupElement]) -> Result<Vec<FunctionMultiplier>> {
    if field.m() != 1 {
        return Err(Error::Parameters("numerical multipliers need q = p".into()));
    }
    let group = ProductGroup::from_field(field);
    let n = field.group_order() as u64;
    let p = field.p() as u64;
    let modulus = n * p;
    let mut out = Vec::new();
    for t in 1..modulus {
        if gcd(t, modulus) != 1 {
            continue;
        }
        // single-integer action: additive part multiplied by t as a repeated sum
        let mut direct: Vec<GroupElement> = set
            .iter()
            .map(|g| GroupElement {
                mult: (g.mult as u64 * t % n) as u32,
                add: group.additive().multiple(g.add, t),
            })
            .collect();
        direct.sort_unstable();
        // pair action (t mod (p^n-1), t mod p)
        let (t1, t2) = (t % n, t % p);
        let paired = multiplier_image(field, set, t1, field.from_residue(t2 as i64));
        if direct != paired {
            return Err(Error::Inconsistent(format!(
                "integer and pair forms of the multiplier t = {t} disagree"
            )));
        }
        let translates = translates_between(&group, set, &paired);
        if !translates.is_empty() {
            out.push(FunctionMultiplier {
                t,
                t1,
                t2,
                zero_additive: translates.iter().any(|g| g.add == 0),
                translates: translates.iter().map(|&g| pair_json(field, g)).collect(),
            });
        }
    }
    Ok(out)
}

/// Report whether every predicted t_i appears among the function multipliers.
pub fn function_multiplier_report(field: &Field, set: &[GroupElement]) -> Result<PropertyReport> {
    let found = find_function_multipliers(field, set)?;
    let ts: Vec<u64> = found.iter().map(|m| m.t).collect();
    let all = predicted_multipliers(field.p(), field.n())
        .iter()
        .all(|t| ts.binary_search(t).is_ok());
    let witness = Witness::Multipliers { t: ts };
    Ok(if all {
        PropertyReport::pass(Property::FunctionMultipliers, Some(witness))
    } else {
        PropertyReport::fail(Property::FunctionMultipliers, witness)
    })
}
