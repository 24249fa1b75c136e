//! Ternary cyclotomic coefficients through Kaplan's lemma.
//!
//! For primes `2 < p < q < r` and `k >= 0`,
//!
//! ```text
//! a_pqr(k) = sum_{m=0}^{p-1} ( b(f(m)) - b(f(m+q)) ),   f(m) = r^{-1} (k - m) mod pq,
//! ```
//!
//! where `b(i) = a_pq(i)` when `r*i <= k` and `0` otherwise. The threshold is
//! evaluated in its part form `([i]_p p + [i]_q q) r <= k` (minus `pq` in the
//! negative case), entirely in integers.
//!
//! Shifting `k` by one shifts the window: `f_{k+1}(m) = f_k(m-1)`. Since no index
//! inside either window crosses its threshold on that step, consecutive
//! coefficients differ by four `b` lookups:
//!
//! ```text
//! a(k+1) = a(k) + b(f(0)) - b(f(p)) - b(f(q)) + b(f(q+p))     (f = f_{k+1})
//! ```
//!
//! [`KaplanSweep`] uses that update to stream coefficients in O(1) per index,
//! which is what [`TernaryInstance::height`] runs on.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binary::BinaryContext;
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, mod_inverse};

/// Default per-instance degree cap for Kaplan-path computations.
pub const DEFAULT_KAPLAN_DEGREE_CAP: u64 = 100_000_000;

/// Materialized coefficient vectors are held to a tighter cap.
pub const DEFAULT_VECTOR_DEGREE_CAP: u64 = 20_000_000;

const SCAN_CHUNK: u64 = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryInstance {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub ctx: BinaryContext,
    pub r_inv_mod_pq: u64,
}

/// Height `A(n)` with the smallest index attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightRecord {
    pub factors: Vec<u64>,
    pub height: u64,
    pub witness_k: u64,
    pub witness_value: i64,
}

impl HeightRecord {
    pub fn n(&self) -> u64 {
        self.factors.iter().product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMethod {
    /// O(1) per index via the sliding-window update.
    Sweep,
    /// Full Kaplan sum at every index, O(p) each.
    PerIndex,
}

#[derive(Debug, Clone, Copy)]
pub struct HeightOptions {
    /// Scan `[0, deg]` instead of `[0, deg/2]`.
    pub full_scan: bool,
    pub method: ScanMethod,
    pub degree_cap: u64,
}

impl Default for HeightOptions {
    fn default() -> Self {
        HeightOptions {
            full_scan: false,
            method: ScanMethod::Sweep,
            degree_cap: DEFAULT_KAPLAN_DEGREE_CAP,
        }
    }
}

/// The `p`-part and `q`-part of `f(m)` and `f(m+q)` for `m` in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowParts {
    pub f_m: Vec<(u64, u64)>,
    pub f_mq: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    coef: i8,
    threshold: u64,
}

/// Per-instance lookup of `a_pq(i)` and the index at which `b(i)` switches on.
#[derive(Debug, Clone)]
pub struct KaplanTable {
    entries: Vec<Entry>,
}

impl KaplanTable {
    pub fn new(inst: &TernaryInstance) -> Self {
        let ctx = &inst.ctx;
        let pq = ctx.pq();
        let entries = (0..pq)
            .map(|i| {
                let d = ctx.decompose_unchecked(i);
                let coef = ctx.sign_of(&d);
                let threshold = match coef {
                    1 => (d.p_part * ctx.p + d.q_part * ctx.q) * inst.r,
                    -1 => (d.p_part * ctx.p + d.q_part * ctx.q - pq) * inst.r,
                    _ => u64::MAX,
                };
                Entry {
                    coef: coef as i8,
                    threshold,
                }
            })
            .collect();
        KaplanTable { entries }
    }

    #[inline(always)]
    fn b(&self, i: u64, k: u64) -> i64 {
        let e = self.entries[i as usize];
        if e.threshold <= k {
            e.coef as i64
        } else {
            0
        }
    }
}

impl TernaryInstance {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        if !(q < r && is_prime(r)) {
            return Err(Error::BadPrimes(format!(
                "need primes 2 < p < q < r, got ({p}, {q}, {r})"
            )));
        }
        let ctx = BinaryContext::new(p, q)?;
        let n = (p * q)
            .checked_mul(r)
            .and_then(|n| n.checked_mul(2))
            .ok_or_else(|| Error::Overflow(format!("{p}*{q}*{r} exceeds 63 bits")))?;
        debug_assert!(n > 0);
        let r_inv_mod_pq = mod_inverse(r as i64, p * q)?;
        Ok(TernaryInstance {
            p,
            q,
            r,
            ctx,
            r_inv_mod_pq,
        })
    }

    pub fn n(&self) -> u64 {
        self.p * self.q * self.r
    }

    pub fn pq(&self) -> u64 {
        self.p * self.q
    }

    /// `phi(pqr)`.
    pub fn degree(&self) -> u64 {
        (self.p - 1) * (self.q - 1) * (self.r - 1)
    }

    /// `f_k(m)`: the representative in `[0, pq)` of `r^{-1} (k - m)`.
    pub fn f_index(&self, k: u64, m: u64) -> u64 {
        let pq = self.pq();
        let diff = (k % pq + pq - m % pq) % pq;
        diff * self.r_inv_mod_pq % pq
    }

    /// `b_i` at index `k`, with the threshold tested as `(...) * r <= k`.
    pub fn b_value(&self, k: u64, i: u64) -> i64 {
        let ctx = &self.ctx;
        assert!(i < ctx.pq(), "b_value index {i} outside [0, pq)");
        let d = ctx.decompose_unchecked(i);
        let r = self.r as u128;
        let k = k as u128;
        let lin = (d.p_part * ctx.p + d.q_part * ctx.q) as u128;
        if d.p_part <= ctx.rho && d.q_part <= ctx.sigma {
            if lin * r <= k {
                1
            } else {
                0
            }
        } else if d.p_part > ctx.rho && d.q_part > ctx.sigma {
            if (lin - ctx.pq() as u128) * r <= k {
                -1
            } else {
                0
            }
        } else {
            0
        }
    }

    /// `a_pqr(k)` by the Kaplan sum, O(p).
    pub fn coefficient(&self, k: u64) -> i64 {
        (0..self.p)
            .map(|m| self.b_value(k, self.f_index(k, m)) - self.b_value(k, self.f_index(k, m + self.q)))
            .sum()
    }

    fn coefficient_with_table(&self, table: &KaplanTable, k: u64) -> i64 {
        let pq = self.pq();
        let step = self.r_inv_mod_pq;
        let mut fm = self.f_index(k, 0);
        let mut fmq = self.f_index(k, self.q);
        let mut acc = 0;
        for _ in 0..self.p {
            acc += table.b(fm, k) - table.b(fmq, k);
            fm = (fm + pq - step) % pq;
            fmq = (fmq + pq - step) % pq;
        }
        acc
    }

    /// Streams `a(k)` for `k = start, start+1, ...`.
    pub fn sweep<'a>(&'a self, table: &'a KaplanTable, start: u64) -> KaplanSweep<'a> {
        KaplanSweep::new(self, table, start)
    }

    /// Coefficients of `Phi_pqr` in ascending degree.
    pub fn coefficient_vector(&self, degree_cap: u64) -> Result<Vec<i64>> {
        let deg = self.degree();
        if deg > degree_cap {
            return Err(Error::BudgetExceeded {
                what: "coefficient vector degree",
                value: deg,
                cap: degree_cap,
            });
        }
        let table = KaplanTable::new(self);
        Ok(self.sweep(&table, 0).take(deg as usize + 1).map(|(_, a)| a).collect())
    }

    pub fn height(&self, opts: HeightOptions) -> Result<HeightRecord> {
        let deg = self.degree();
        if deg > opts.degree_cap {
            return Err(Error::BudgetExceeded {
                what: "Kaplan degree",
                value: deg,
                cap: opts.degree_cap,
            });
        }
        let last = if opts.full_scan { deg } else { deg / 2 };
        let table = KaplanTable::new(self);
        let chunks = last / SCAN_CHUNK + 1;
        let best = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * SCAN_CHUNK;
                let hi = (lo + SCAN_CHUNK - 1).min(last);
                match opts.method {
                    ScanMethod::Sweep => self.scan_sweep(&table, lo, hi),
                    ScanMethod::PerIndex => self.scan_per_index(&table, lo, hi),
                }
            })
            .reduce(|| Best::EMPTY, Best::merge);
        Ok(HeightRecord {
            factors: vec![self.p, self.q, self.r],
            height: best.abs,
            witness_k: best.k,
            witness_value: best.value,
        })
    }

    fn scan_sweep(&self, table: &KaplanTable, lo: u64, hi: u64) -> Best {
        let mut best = Best::EMPTY;
        for (k, v) in self.sweep(table, lo).take((hi - lo + 1) as usize) {
            best.offer(k, v);
        }
        best
    }

    fn scan_per_index(&self, table: &KaplanTable, lo: u64, hi: u64) -> Best {
        let mut best = Best::EMPTY;
        for k in lo..=hi {
            best.offer(k, self.coefficient_with_table(table, k));
        }
        best
    }

    /// Both sides of the identity `sum a_pq(f_k(m)) = sum a_pq(f_k(m+q))`.
    pub fn gelijk_sums(&self, k: u64) -> (i64, i64) {
        let a = |i| self.ctx.sign_of(&self.ctx.decompose_unchecked(i));
        let lhs = (0..self.p).map(|m| a(self.f_index(k, m))).sum();
        let rhs = (0..self.p).map(|m| a(self.f_index(k, m + self.q))).sum();
        (lhs, rhs)
    }

    pub fn check_gelijk(&self, k: u64) -> bool {
        let (lhs, rhs) = self.gelijk_sums(k);
        lhs == rhs
    }

    /// `([f(m)]_p, [f(m)]_q)` and the same for `f(m+q)`, `m` in `[0, p)`.
    pub fn flow_parts(&self, k: u64) -> FlowParts {
        let parts = |i| {
            let d = self.ctx.decompose_unchecked(i);
            (d.p_part, d.q_part)
        };
        FlowParts {
            f_m: (0..self.p).map(|m| parts(self.f_index(k, m))).collect(),
            f_mq: (0..self.p).map(|m| parts(self.f_index(k, m + self.q))).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Best {
    abs: u64,
    k: u64,
    value: i64,
}

impl Best {
    const EMPTY: Best = Best {
        abs: 0,
        k: u64::MAX,
        value: 0,
    };

    #[inline]
    fn offer(&mut self, k: u64, value: i64) {
        let abs = value.unsigned_abs();
        if abs > self.abs || (abs == self.abs && k < self.k) {
            *self = Best { abs, k, value };
        }
    }

    fn merge(a: Best, b: Best) -> Best {
        if b.abs > a.abs || (b.abs == a.abs && b.k < a.k) {
            b
        } else {
            a
        }
    }
}

/// Iterator over `(k, a_pqr(k))` from a starting index, O(1) per step.
pub struct KaplanSweep<'a> {
    table: &'a KaplanTable,
    pq: u64,
    step: u64,
    k: u64,
    value: i64,
    f0: u64,
    fp: u64,
    fq: u64,
    fqp: u64,
    started: bool,
}

impl<'a> KaplanSweep<'a> {
    fn new(inst: &'a TernaryInstance, table: &'a KaplanTable, start: u64) -> Self {
        KaplanSweep {
            table,
            pq: inst.pq(),
            step: inst.r_inv_mod_pq,
            k: start,
            value: inst.coefficient_with_table(table, start),
            f0: inst.f_index(start, 0),
            fp: inst.f_index(start, inst.p),
            fq: inst.f_index(start, inst.q),
            fqp: inst.f_index(start, inst.q + inst.p),
            started: false,
        }
    }

    #[inline(always)]
    fn advance(&mut self) {
        let (pq, step) = (self.pq, self.step);
        let bump = |f: &mut u64| {
            *f += step;
            if *f >= pq {
                *f -= pq;
            }
        };
        bump(&mut self.f0);
        bump(&mut self.fp);
        bump(&mut self.fq);
        bump(&mut self.fqp);
        self.k += 1;
        let (t, k) = (self.table, self.k);
        self.value += t.b(self.f0, k) - t.b(self.fp, k) - t.b(self.fq, k) + t.b(self.fqp, k);
    }
}

impl Iterator for KaplanSweep<'_> {
    type Item = (u64, i64);

    #[inline]
    fn next(&mut self) -> Option<(u64, i64)> {
        if self.started {
            self.advance();
        } else {
            self.started = true;
        }
        Some((self.k, self.value))
    }
}

pub fn ternary_coefficient(inst: &TernaryInstance, k: u64) -> i64 {
    inst.coefficient(k)
}

pub fn height(inst: &TernaryInstance) -> Result<HeightRecord> {
    inst.height(HeightOptions::default())
}

/// `A(pqr)` for primes `p < q < r` given in any order.
pub fn height_of(p: u64, q: u64, r: u64) -> Result<HeightRecord> {
    let mut f = [p, q, r];
    f.sort_unstable();
    TernaryInstance::new(f[0], f[1], f[2])?.height(HeightOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_105_examples() {
        let inst = TernaryInstance::new(3, 5, 7).unwrap();
        assert_eq!(inst.coefficient(7), -2);
        assert_eq!(inst.coefficient(0), 1);
        let h = inst.height(HeightOptions::default()).unwrap();
        assert_eq!((h.height, h.witness_k, h.witness_value), (2, 7, -2));
    }

    #[test]
    fn b_values_at_phi_105_index_7() {
        // Per-m table for (3, 5, 7), k = 7; r^{-1} mod 15 = 13.
        let inst = TernaryInstance::new(3, 5, 7).unwrap();
        assert_eq!(inst.r_inv_mod_pq, 13);
        let fm: Vec<u64> = (0..3).map(|m| inst.f_index(7, m)).collect();
        let fmq: Vec<u64> = (0..3).map(|m| inst.f_index(7, m + 5)).collect();
        assert_eq!(fm, vec![1, 3, 5]);
        assert_eq!(fmq, vec![11, 13, 0]);
        let bm: Vec<i64> = fm.iter().map(|&i| inst.b_value(7, i)).collect();
        let bmq: Vec<i64> = fmq.iter().map(|&i| inst.b_value(7, i)).collect();
        // a_15: f(m) -> (-1, 1, 1), thresholds 7, 21, 35 against k = 7
        assert_eq!(bm, vec![-1, 0, 0]);
        // a_15(11) = 0, a_15(13) = 0, a_15(0) = 1 with threshold 0
        assert_eq!(bmq, vec![0, 0, 1]);
    }

    #[test]
    fn moeller_instance() {
        let inst = TernaryInstance::new(5, 7, 17).unwrap();
        assert_eq!(inst.coefficient(240), 3);
    }

    #[test]
    fn f_index_properties() {
        let inst = TernaryInstance::new(5, 7, 11).unwrap();
        let pq = inst.pq();
        for k in 0..200 {
            assert_eq!(inst.f_index(k, k % pq), 0);
            for m in 0..inst.p + inst.q {
                let next = inst.f_index(k, m + 1);
                assert_eq!((inst.f_index(k, m) + pq - inst.r_inv_mod_pq) % pq, next);
                assert_eq!(inst.f_index(k, m), inst.f_index(k + pq, m));
            }
        }
    }

    #[test]
    fn b_matches_binary_coefficient_beyond_n() {
        let inst = TernaryInstance::new(5, 7, 11).unwrap();
        let k = inst.n();
        for i in 0..inst.pq() {
            assert_eq!(inst.b_value(k, i), inst.ctx.coefficient(i).unwrap());
        }
    }

    #[test]
    fn sweep_matches_kaplan_sum() {
        for (p, q, r) in [(3, 5, 7), (5, 7, 11), (7, 11, 13), (3, 11, 101), (11, 13, 17)] {
            let inst = TernaryInstance::new(p, q, r).unwrap();
            let table = KaplanTable::new(&inst);
            for (k, v) in inst.sweep(&table, 0).take(inst.degree() as usize + 40) {
                assert_eq!(v, inst.coefficient(k), "({p},{q},{r}) k = {k}");
            }
            let mid = inst.degree() / 3;
            for (k, v) in inst.sweep(&table, mid).take(100) {
                assert_eq!(v, inst.coefficient(k));
            }
        }
    }

    #[test]
    fn coefficients_vanish_past_degree() {
        let inst = TernaryInstance::new(5, 7, 13).unwrap();
        let d = inst.degree();
        for k in d + 1..d + 3 * inst.n() {
            assert_eq!(inst.coefficient(k), 0);
        }
        assert_eq!(inst.coefficient(d), 1);
    }

    #[test]
    fn vector_shape() {
        let inst = TernaryInstance::new(3, 5, 7).unwrap();
        let v = inst.coefficient_vector(DEFAULT_VECTOR_DEGREE_CAP).unwrap();
        assert_eq!(v.len(), 49);
        assert_eq!(v.iter().sum::<i64>(), 1);
        assert!(v.iter().eq(v.iter().rev()));
        assert!(matches!(
            inst.coefficient_vector(10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn half_scan_agrees_with_full_and_per_index() {
        for (p, q, r) in [(3, 5, 7), (5, 7, 11), (7, 17, 23), (5, 11, 31)] {
            let inst = TernaryInstance::new(p, q, r).unwrap();
            let half = inst.height(HeightOptions::default()).unwrap();
            let full = inst
                .height(HeightOptions { full_scan: true, ..Default::default() })
                .unwrap();
            let slow = inst
                .height(HeightOptions { method: ScanMethod::PerIndex, ..Default::default() })
                .unwrap();
            assert_eq!(half, full);
            assert_eq!(half, slow);
        }
    }

    #[test]
    fn gelijk_and_flow_small() {
        let inst = TernaryInstance::new(3, 5, 7).unwrap();
        assert!(inst.check_gelijk(7));
        let inst = TernaryInstance::new(5, 7, 11).unwrap();
        for k in 0..inst.pq() {
            assert!(inst.check_gelijk(k));
            let flow = inst.flow_parts(k);
            let mut qs: Vec<u64> = flow.f_m.iter().map(|x| x.1).collect();
            qs.sort_unstable();
            assert_eq!(qs, (0..5).collect::<Vec<_>>());
        }
    }

    #[test]
    fn instance_validation() {
        assert!(TernaryInstance::new(3, 5, 5).is_err());
        assert!(TernaryInstance::new(3, 7, 5).is_err());
        assert!(TernaryInstance::new(3, 5, 9).is_err());
        assert!(TernaryInstance::new(2, 5, 7).is_err());
    }
}
