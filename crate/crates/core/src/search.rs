//! Exhaustive and restricted enumeration of difference balanced functions.
//!
//! Candidates are numbered 0..total and decoded independently, so any
//! contiguous range can be handed to a worker and results merge by
//! concatenation in range order. Work proceeds in blocks; after each block a
//! checkpoint with the next index and running tallies can be written.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{affine_shift, trace_function, FunctionTable};
use crate::error::{Error, Result};
use crate::field::{gcd, Elem, Field, FieldDescriptor};
use crate::properties::{admissible_degrees, degree_of, shift_of, DbChecker};
use crate::report::{elem_json, ElemJson};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchMode {
    /// Every map GF(q^n)* → GF(q), as base-q counters over q^n - 1 positions.
    Full,
    /// f(θ^{r + js}) = θ^{jsd} f(θ^r): values on coset representatives of
    /// GF(q)* times an admissible degree d.
    HomogeneousOnly,
    /// σ ∘ Tr for every permutation σ of GF(q) fixing 0.
    Relabel,
    /// Uniform random maps; candidate i is drawn from stream i of the seeded generator.
    RandomSample { seed: u64, samples: u64 },
}

impl SearchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::Full => "full",
            SearchMode::HomogeneousOnly => "homogeneous_only",
            SearchMode::Relabel => "relabel",
            SearchMode::RandomSample { .. } => "random_sample",
        }
    }

    /// Description of the candidate class, `None` for full enumeration.
    pub fn restriction(&self, field: &Field) -> Option<String> {
        let q = field.q();
        match self {
            SearchMode::Full => None,
            SearchMode::HomogeneousOnly => Some(format!(
                "d-homogeneous maps only: arbitrary values on the {} cosets of GF({q})*, extended by f(ax) = a^d f(x) for each admissible d",
                field.subfield_stride()
            )),
            SearchMode::Relabel => Some(format!(
                "maps σ∘Tr with σ a permutation of GF({q}) fixing 0; not exhaustive"
            )),
            SearchMode::RandomSample { seed, samples } => Some(format!(
                "{samples} uniform random maps from seed {seed}; not exhaustive"
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub field: Arc<Field>,
    pub mode: SearchMode,
    /// 0 means one per available core.
    pub workers: usize,
    pub budget: u64,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
    pub resume: bool,
    /// Stop (with a checkpoint) once this many candidates have been visited in total.
    pub stop_after: Option<u64>,
}

impl SearchConfig {
    pub fn new(field: Arc<Field>, mode: SearchMode) -> Self {
        SearchConfig {
            field,
            mode,
            workers: 1,
            budget: DEFAULT_BUDGET,
            checkpoint: None,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            resume: false,
            stop_after: None,
        }
    }

    fn worker_count(&self) -> usize {
        match self.workers {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            w => w,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum SurvivorFlag {
    /// Difference balanced but no balanced shift exists.
    NoBalancedShift,
    /// Difference balanced, balanced after shifting, but not d-homogeneous.
    ConjectureCounterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub index: u64,
    /// b with f - b balanced; absent when there is none
    #[serde(default, skip_serializing_if = "Option::is_none", deserialize_with = "present_elem")]
    pub shift: Option<ElemJson>,
    /// homogeneity degree of f - b
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<SurvivorFlag>,
    /// f(θ^i) as exponents, `null` for zero
    pub values: Vec<ElemJson>,
}

fn present_elem<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<ElemJson>, D::Error> {
    ElemJson::deserialize(d).map(Some)
}

/// Equality and serialization ignore `wall_time`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchReport {
    pub field: FieldDescriptor,
    #[serde(flatten)]
    pub mode: SearchMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<String>,
    pub total_candidates: u64,
    pub visited: u64,
    pub complete: bool,
    pub db_count: u64,
    pub counterexamples: u64,
    pub no_balanced_shift: u64,
    pub survivors: Vec<Survivor>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PartialEq for SearchReport {
    fn eq(&self, other: &Self) -> bool {
        let strip = |r: &SearchReport| SearchReport {
            wall_time: Duration::ZERO,
            ..r.clone()
        };
        serde_json::to_value(strip(self)).ok() == serde_json::to_value(strip(other)).ok()
    }
}

impl SearchReport {
    pub fn survivor_tables(&self, field: &Arc<Field>) -> Result<Vec<FunctionTable>> {
        self.survivors
            .iter()
            .map(|s| {
                FunctionTable::new(
                    field.clone(),
                    s.values.iter().map(|&v| crate::report::elem_from_json(v)).collect(),
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    field: FieldDescriptor,
    #[serde(flatten)]
    mode: SearchMode,
    total_candidates: u64,
    next: u64,
    db_count: u64,
    survivors: Vec<Survivor>,
}

/// Shifts θ^j ordered by the multiplicative order of θ^j, smallest first
/// (ties by j).
pub fn prune_order(field: &Field) -> Vec<u32> {
    let n = field.group_order() as u64;
    let mut shifts: Vec<u32> = (1..field.group_order()).collect();
    shifts.sort_by_key(|&j| (n / gcd(j as u64, n), j));
    shifts
}

/// Number of candidates in a mode, saturating at u128::MAX.
pub fn candidate_count(field: &Field, mode: &SearchMode) -> u128 {
    let q = field.q() as u128;
    let pow = |e: u32| q.checked_pow(e).unwrap_or(u128::MAX);
    match mode {
        SearchMode::Full => pow(field.group_order()),
        SearchMode::HomogeneousOnly => pow(field.subfield_stride())
            .saturating_mul(admissible_degrees(field.q()).len() as u128),
        SearchMode::Relabel => (1..q).product(),
        SearchMode::RandomSample { samples, .. } => *samples as u128,
    }
}

/// Decodes candidate indices into subfield-index tables.
struct Decoder {
    field: Arc<Field>,
    mode: SearchMode,
    q: u64,
    degrees: Vec<u32>,
    trace: Vec<u16>,
    mul: Vec<u16>,
}

impl Decoder {
    fn new(field: Arc<Field>, mode: SearchMode) -> Self {
        let q = field.q() as u64;
        let tables = crate::field::SubfieldTables::new(&field);
        Decoder {
            degrees: admissible_degrees(field.q()),
            trace: trace_function(&field).subfield_indices(),
            mul: tables.mul,
            q,
            field,
            mode,
        }
    }

    fn decode(&self, index: u64, out: &mut [u16]) {
        let q = self.q;
        match self.mode {
            SearchMode::Full => {
                let mut c = index;
                for v in out.iter_mut() {
                    *v = (c % q) as u16;
                    c /= q;
                }
            }
            SearchMode::HomogeneousOnly => {
                let s = self.field.subfield_stride() as usize;
                let per_degree = q.pow(s as u32);
                let d = self.degrees[(index / per_degree) as usize] as u64;
                let mut c = index % per_degree;
                for v in out[..s].iter_mut() {
                    *v = (c % q) as u16;
                    c /= q;
                }
                for i in s..out.len() {
                    let (j, r) = ((i / s) as u64, i % s);
                    // θ^{jsd} sits at subfield index (jd mod (q-1)) + 1
                    let scalar = (j * d % (q - 1)) as usize + 1;
                    out[i] = self.mul[scalar * q as usize + out[r] as usize];
                }
            }
            SearchMode::Relabel => {
                // Lehmer code over the q-1 nonzero indices
                let mut pool: Vec<u16> = (1..q as u16).collect();
                let mut sigma = vec![0u16; q as usize];
                let mut c = index;
                for slot in sigma.iter_mut().skip(1) {
                    let radix = pool.len() as u64;
                    *slot = pool.remove((c % radix) as usize);
                    c /= radix;
                }
                for (v, &t) in out.iter_mut().zip(&self.trace) {
                    *v = sigma[t as usize];
                }
            }
            SearchMode::RandomSample { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index);
                for v in out.iter_mut() {
                    *v = rng.gen_range(0..q as u16);
                }
            }
        }
    }
}

fn classify(field: &Arc<Field>, index: u64, values: &[u16]) -> Survivor {
    let table = FunctionTable::from_subfield_indices(field.clone(), values)
        .expect("decoded tables are valid");
    let shift = shift_of(&table);
    let degree = shift.and_then(|b| {
        let g = affine_shift(&table, field.neg(b)).expect("b in GF(q)");
        degree_of(&g)
    });
    let flag = match (shift, degree) {
        (None, _) => Some(SurvivorFlag::NoBalancedShift),
        (Some(_), None) => Some(SurvivorFlag::ConjectureCounterexample),
        _ => None,
    };
    Survivor {
        index,
        shift: shift.map(elem_json),
        degree,
        flag,
        values: table.values().iter().map(|&v| elem_json(v)).collect(),
    }
}

fn scan_range(decoder: &Decoder, checker: &DbChecker, start: u64, end: u64) -> (u64, Vec<Survivor>) {
    let field = &decoder.field;
    let mut values = vec![0u16; field.group_order() as usize];
    let mut counts = vec![0u32; field.q() as usize];
    let mut db = 0;
    let mut survivors = Vec::new();
    for index in start..end {
        decoder.decode(index, &mut values);
        if checker.is_db(&values, &mut counts) {
            db += 1;
            survivors.push(classify(field, index, &values));
        }
    }
    (db, survivors)
}

fn scan_block(
    decoder: &Decoder,
    checker: &DbChecker,
    start: u64,
    end: u64,
    workers: usize,
) -> (u64, Vec<Survivor>) {
    if workers <= 1 || end - start < 2 {
        return scan_range(decoder, checker, start, end);
    }
    let len = end - start;
    let chunk = len.div_ceil(workers as u64);
    let parts: Vec<(u64, Vec<Survivor>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| (start + w * chunk, (start + (w + 1) * chunk).min(end)))
            .filter(|(a, b)| a < b)
            .map(|(a, b)| scope.spawn(move || scan_range(decoder, checker, a, b)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    parts
        .into_iter()
        .fold((0, Vec::new()), |(db, mut all), (d, s)| {
            all.extend(s);
            (db + d, all)
        })
}

fn load_checkpoint(path: &Path, field: &Field, mode: &SearchMode, total: u64) -> Result<Checkpoint> {
    let ckpt: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if ckpt.field != field.descriptor() || &ckpt.mode != mode || ckpt.total_candidates != total {
        return Err(Error::CheckpointMismatch(format!(
            "{} was written for a different field or mode",
            path.display()
        )));
    }
    if ckpt.next > total {
        return Err(Error::CheckpointMismatch("resume counter past the end".into()));
    }
    Ok(ckpt)
}

fn write_checkpoint(path: &Path, ckpt: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(ckpt)?)?;
    std::fs::rename(tmp, path)?;
    Ok(())
}

/// Run the search described by `config`.
pub fn enumerate_db(config: &SearchConfig) -> Result<SearchReport> {
    let started = Instant::now();
    let field = &config.field;
    let total = candidate_count(field, &config.mode);
    if total > config.budget as u128 {
        return Err(Error::BudgetExceeded {
            candidates: total,
            budget: config.budget,
        });
    }
    let total = total as u64;
    let mut next = 0;
    let mut db_count = 0;
    let mut survivors = Vec::new();
    if config.resume {
        let path = config
            .checkpoint
            .as_deref()
            .ok_or_else(|| Error::Parameters("resume needs a checkpoint path".into()))?;
        let ckpt = load_checkpoint(path, field, &config.mode, total)?;
        next = ckpt.next;
        db_count = ckpt.db_count;
        survivors = ckpt.survivors;
    }

    let decoder = Decoder::new(field.clone(), config.mode.clone());
    let checker = DbChecker::with_schedule(field, prune_order(field));
    let workers = config.worker_count();
    let stop = config.stop_after.map_or(total, |s| s.min(total));
    let block = config.checkpoint_every.max(1);
    while next < stop {
        let end = (next + block).min(stop);
        let (db, found) = scan_block(&decoder, &checker, next, end, workers);
        db_count += db;
        survivors.extend(found);
        next = end;
        if let Some(path) = &config.checkpoint {
            write_checkpoint(
                path,
                &Checkpoint {
                    field: field.descriptor(),
                    mode: config.mode.clone(),
                    total_candidates: total,
                    next,
                    db_count,
                    survivors: survivors.clone(),
                },
            )?;
        }
    }

    let count = |flag| survivors.iter().filter(|s| s.flag == Some(flag)).count() as u64;
    Ok(SearchReport {
        field: field.descriptor(),
        restriction: config.mode.restriction(field),
        mode: config.mode.clone(),
        total_candidates: total,
        visited: next,
        complete: next == total,
        db_count,
        counterexamples: count(SurvivorFlag::ConjectureCounterexample),
        no_balanced_shift: count(SurvivorFlag::NoBalancedShift),
        survivors,
        wall_time: started.elapsed(),
    })
}

/// f(cx) + b for c = θ^j.
pub fn translate(f: &FunctionTable, j: u32, b: Elem) -> Result<FunctionTable> {
    let n = f.len() as u64;
    let field = f.field().clone();
    let moved = FunctionTable::from_fn(field, |i| f.at((i as u64 + j as u64) % n))?;
    affine_shift(&moved, b)
}
