//! `M(p;q)`: the largest height `A(pqr)` over all primes `r > q`.
//!
//! Heights depend only on `r mod pq`, so one prime per primitive class suffices.
//! Classes `c` and `-c` give equal heights; by default only `c < pq/2` is computed.

pub mod cache;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cache::{CacheLine, ClassRecord, FamilyCache, SummaryRecord};

use crate::error::{Error, Result};
use crate::kaplan::{HeightOptions, TernaryInstance, DEFAULT_KAPLAN_DEGREE_CAP, DEFAULT_VECTOR_DEGREE_CAP};
use crate::numtheory::{default_search_cap, gcd, is_prime, primes_between, smallest_prime_in_class, ResidueClass};

#[derive(Debug, Clone)]
pub struct FamilyOptions {
    /// Compute every primitive class and check `A(c) = A(-c)`.
    pub full_classes: bool,
    pub cache: Option<PathBuf>,
    pub degree_cap: u64,
    /// Ceiling for the prime search; `None` uses [`default_search_cap`].
    pub search_cap: Option<u64>,
    /// Classes slower than this are logged as a warning.
    pub class_warn: Duration,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            full_classes: false,
            cache: None,
            degree_cap: DEFAULT_KAPLAN_DEGREE_CAP,
            search_cap: None,
            class_warn: Duration::from_secs(60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "M")]
    pub m: u64,
    /// Heights keyed by class; only `c < pq/2` when `paired`.
    pub class_heights: BTreeMap<u64, ClassRecord>,
    /// Largest height, then smallest class, then smallest `k`.
    pub witness: ClassRecord,
    pub paired: bool,
}

impl FamilyResult {
    pub fn from_records(p: u64, q: u64, records: impl IntoIterator<Item = ClassRecord>, paired: bool) -> Result<Self> {
        let class_heights: BTreeMap<u64, ClassRecord> = records.into_iter().map(|r| (r.class, r)).collect();
        let witness = class_heights
            .values()
            .min_by_key(|r| (std::cmp::Reverse(r.a), r.class, r.witness_k))
            .cloned()
            .ok_or_else(|| Error::InvariantViolated(format!("no classes for ({p}, {q})")))?;
        Ok(FamilyResult { p, q, m: witness.a, class_heights, witness, paired })
    }

    /// Height of any primitive class, resolving `-c` through the pairing.
    pub fn class_height(&self, class: u64) -> Option<u64> {
        let pq = self.p * self.q;
        let c = class % pq;
        self.class_heights
            .get(&c)
            .or_else(|| self.class_heights.get(&((pq - c) % pq)))
            .map(|r| r.a)
    }

    /// Cache lines for this result: one per class, then the summary.
    pub fn cache_lines(&self) -> Vec<CacheLine> {
        let mut lines: Vec<CacheLine> = self.class_heights.values().cloned().map(CacheLine::Class).collect();
        lines.push(CacheLine::Summary(SummaryRecord { p: self.p, q: self.q, m: self.m }));
        lines
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    pub computed: usize,
    pub reused: usize,
}

fn check_pair(p: u64, q: u64) -> Result<()> {
    if 2 < p && p < q && is_prime(p) && is_prime(q) {
        Ok(())
    } else {
        Err(Error::BadPrimes(format!("need odd primes 2 < p < q, got ({p}, {q})")))
    }
}

/// Primitive classes mod `pq`, only `c < pq/2` when `paired`.
pub fn primitive_classes(p: u64, q: u64, paired: bool) -> Vec<u64> {
    let pq = p * q;
    let top = if paired { pq / 2 } else { pq - 1 };
    (1..=top).filter(|&c| gcd(c, pq) == 1).collect()
}

/// Smallest prime `r > q` with `r = class (mod pq)`.
pub fn class_representative(p: u64, q: u64, class: u64, search_cap: Option<u64>) -> Result<u64> {
    let pq = p * q;
    let cap = search_cap.unwrap_or_else(|| default_search_cap(pq, q));
    smallest_prime_in_class(ResidueClass::new(class as i64, pq), q, cap)
}

fn height_record(p: u64, q: u64, class: u64, r: u64, opts: &FamilyOptions) -> Result<ClassRecord> {
    let start = Instant::now();
    let inst = TernaryInstance::new(p, q, r)?;
    let h = inst.height(HeightOptions { degree_cap: opts.degree_cap, ..HeightOptions::default() })?;
    let elapsed = start.elapsed();
    if elapsed > opts.class_warn {
        log::warn!("class {class} of ({p}, {q}) with r = {r} took {elapsed:.1?}");
    }
    Ok(ClassRecord {
        p,
        q,
        class,
        r,
        a: h.height,
        witness_k: h.witness_k,
        witness_value: h.witness_value,
    })
}

/// Height record for one class, using its smallest prime representative.
pub fn class_record(p: u64, q: u64, class: u64, opts: &FamilyOptions) -> Result<ClassRecord> {
    let r = class_representative(p, q, class, opts.search_cap)?;
    height_record(p, q, class, r, opts)
}

pub fn compute_mpq(p: u64, q: u64, opts: &FamilyOptions) -> Result<FamilyResult> {
    compute_mpq_with_stats(p, q, opts).map(|(r, _)| r)
}

pub fn compute_mpq_with_stats(p: u64, q: u64, opts: &FamilyOptions) -> Result<(FamilyResult, RunStats)> {
    check_pair(p, q)?;
    let cache = opts.cache.as_ref().map(FamilyCache::open).transpose()?;
    let classes = primitive_classes(p, q, !opts.full_classes);
    let cached = cache.as_ref().and_then(|c| c.classes(p, q));

    let mut records: HashMap<u64, ClassRecord> = HashMap::new();
    let mut todo = Vec::new();
    for &c in &classes {
        match cached.and_then(|m| m.get(&c)) {
            Some(rec) => {
                records.insert(c, rec.clone());
            }
            None => todo.push((class_representative(p, q, c, opts.search_cap)?, c)),
        }
    }
    let stats = RunStats { computed: todo.len(), reused: records.len() };
    todo.sort_unstable();
    log::info!("({p}, {q}): {} classes to compute, {} from cache", stats.computed, stats.reused);

    let fresh: Vec<ClassRecord> = todo
        .par_iter()
        .map(|&(r, c)| {
            let rec = height_record(p, q, c, r, opts)?;
            if let Some(cache) = &cache {
                cache.append_class(&rec)?;
            }
            Ok(rec)
        })
        .collect::<Result<_>>()?;
    records.extend(fresh.into_iter().map(|r| (r.class, r)));

    if opts.full_classes {
        let pq = p * q;
        for (&c, rec) in &records {
            let twin = &records[&(pq - c)];
            if twin.a != rec.a {
                return Err(Error::InvariantViolated(format!(
                    "A differs on classes {c} ({}) and {} ({}) mod {pq}",
                    rec.a, twin.class, twin.a
                )));
            }
        }
    }

    let result = FamilyResult::from_records(p, q, records.into_values(), !opts.full_classes)?;
    if let Some(cache) = &cache {
        if cache.summary(p, q) != Some(result.m) {
            cache.append_summary(p, q, result.m)?;
        }
    }
    Ok((result, stats))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpResult {
    pub p: u64,
    pub q_cap: u64,
    pub values: BTreeMap<u64, FamilyResult>,
    /// Largest `M(p;q)` seen; only a lower bound for `M(p)`.
    pub running_max: u64,
    pub argmax_q: u64,
}

/// `M(p;q)` for every prime `p < q <= q_cap`.
pub fn compute_mp(p: u64, q_cap: u64, opts: &FamilyOptions) -> Result<MpResult> {
    if p < 3 || !is_prime(p) || q_cap <= p {
        return Err(Error::BadPrimes(format!("need an odd prime p and q_cap > p, got ({p}, {q_cap})")));
    }
    let mut values = BTreeMap::new();
    for q in primes_between(p + 1, q_cap) {
        values.insert(q, compute_mpq(p, q, opts)?);
    }
    let (argmax_q, running_max) = values
        .iter()
        .map(|(&q, f)| (q, f.m))
        .min_by_key(|&(q, m)| (std::cmp::Reverse(m), q))
        .ok_or_else(|| Error::BadPrimes(format!("no prime q in ({p}, {q_cap}]")))?;
    Ok(MpResult { p, q_cap, values, running_max, argmax_q })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSetReport {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub observed: BTreeSet<i64>,
    /// Integers in `[-M, M]` not seen in any sampled polynomial.
    pub missing: BTreeSet<i64>,
    pub r_samples: Vec<u64>,
}

/// Coefficient values of `Phi_pqr` over sampled `r`.
///
/// The sample starts with the witness class and its negation, then continues
/// through the remaining classes in ascending order.
pub fn coefficient_set_survey(p: u64, q: u64, sample_size: usize, opts: &FamilyOptions) -> Result<CoefficientSetReport> {
    let family = compute_mpq(p, q, opts)?;
    let pq = p * q;
    let first = [family.witness.class, pq - family.witness.class];
    let mut classes = first.to_vec();
    classes.extend(primitive_classes(p, q, false).into_iter().filter(|c| !first.contains(c)));
    classes.truncate(sample_size.max(2));

    let mut observed = BTreeSet::new();
    let mut r_samples = Vec::new();
    for c in classes {
        let r = class_representative(p, q, c, opts.search_cap)?;
        let inst = TernaryInstance::new(p, q, r)?;
        observed.extend(inst.coefficient_vector(opts.degree_cap.min(DEFAULT_VECTOR_DEGREE_CAP))?);
        r_samples.push(r);
    }
    let m = family.m as i64;
    let missing = (-m..=m).filter(|v| !observed.contains(v)).collect();
    Ok(CoefficientSetReport { p, q, m: family.m, observed, missing, r_samples })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub d: u64,
    /// Least prime from which `M(p;q)` depends only on `q mod d` within the scanned range.
    pub q0: u64,
    pub consistent: bool,
    /// Values per residue on `q >= q0`.
    pub residue_table: BTreeMap<u64, BTreeSet<u64>>,
    /// Values per residue over the whole range.
    pub all_values: BTreeMap<u64, BTreeSet<u64>>,
    /// Residues coprime to `d` with fewer than two primes in the tail.
    pub thin_residues: Vec<u64>,
    /// Whether `g(a) = g(d - a)` wherever both sides are observed.
    pub symmetric: Option<bool>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorScan {
    pub p: u64,
    pub q_min: u64,
    pub q_max: u64,
    pub values: BTreeMap<u64, u64>,
    pub candidates: Vec<CandidateReport>,
    /// Always true: the scan is evidence, not a proof.
    pub exploratory: bool,
}

/// Tail consistency of `q -> M(p;q)` modulo `d`.
pub fn analyze_candidate(p: u64, values: &BTreeMap<u64, u64>, d: u64) -> CandidateReport {
    let d = d.max(1);
    let qs: Vec<u64> = values.keys().copied().collect();
    let mut seen: HashMap<u64, u64> = HashMap::new();
    let mut q0 = qs.first().copied().unwrap_or(0);
    for (i, &q) in qs.iter().enumerate().rev() {
        let v = values[&q];
        if *seen.entry(q % d).or_insert(v) != v {
            q0 = qs.get(i + 1).copied().unwrap_or(u64::MAX);
            break;
        }
    }

    let mut residue_table: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    let mut all_values: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    let mut support: HashMap<u64, usize> = HashMap::new();
    for (&q, &v) in values {
        all_values.entry(q % d).or_default().insert(v);
        if q >= q0 {
            residue_table.entry(q % d).or_default().insert(v);
            *support.entry(q % d).or_default() += 1;
        }
    }
    let thin_residues: Vec<u64> = (0..d)
        .filter(|&a| gcd(a, d) == 1 || d == 1)
        .filter(|a| support.get(a).copied().unwrap_or(0) < 2)
        .collect();
    let consistent = thin_residues.is_empty() && residue_table.values().all(|s| s.len() == 1);

    let pairs: Vec<bool> = residue_table
        .iter()
        .filter(|(&a, _)| a != 0)
        .filter_map(|(&a, s)| residue_table.get(&(d - a)).map(|t| s == t))
        .collect();
    let symmetric = (!pairs.is_empty()).then(|| pairs.iter().all(|&b| b));

    let mut notes = Vec::new();
    if p >= 11 && d % p != 0 {
        notes.push(format!("d = {d} is not divisible by p = {p}; no modulus of this kind is expected for p >= 11"));
    }
    if !thin_residues.is_empty() {
        notes.push(format!("{} residues have fewer than two primes in the tail", thin_residues.len()));
    }
    CandidateReport { d, q0, consistent, residue_table, all_values, thin_residues, symmetric, notes }
}

/// `M(p;q)` for `p < q <= q_cap` and a tail-consistency report per candidate modulus.
pub fn conductor_scan(p: u64, q_cap: u64, d_candidates: &[u64], opts: &FamilyOptions) -> Result<ConductorScan> {
    let mp = compute_mp(p, q_cap, opts)?;
    let values: BTreeMap<u64, u64> = mp.values.iter().map(|(&q, f)| (q, f.m)).collect();
    let candidates = d_candidates.iter().map(|&d| analyze_candidate(p, &values, d)).collect();
    Ok(ConductorScan {
        p,
        q_min: *values.keys().next().unwrap_or(&p),
        q_max: q_cap,
        values,
        candidates,
        exploratory: true,
    })
}
