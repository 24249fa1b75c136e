//! Closed-form upper and lower bounds on `A(pqr)` and `M(p;q)`.
//!
//! Rational thresholds are kept as exact fractions and compared by
//! cross-multiplication through [`Ratio`].

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::binary::BinaryContext;
use crate::error::{Error, Result};
use crate::kaplan::{self, TernaryInstance};
use crate::numtheory::{is_prime, mod_inverse};
use crate::oracle::{oracle_height, DEFAULT_ORACLE_CAP};

pub type Rational = Ratio<i64>;

fn check_pair(p: u64, q: u64) -> Result<()> {
    if 2 < p && p < q && is_prime(p) && is_prime(q) {
        Ok(())
    } else {
        Err(Error::BadPrimes(format!("need odd primes 2 < p < q, got ({p}, {q})")))
    }
}

/// The residues `j = q* mod p`, `k = r* mod p` and the derived `a`, `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BzdegaInput {
    pub p: u64,
    pub j: u64,
    pub k: u64,
    pub a: u64,
    pub b: u64,
}

impl BzdegaInput {
    pub fn new(p: u64, j: u64, k: u64) -> Result<Self> {
        if p < 3 || j == 0 || k == 0 || j >= p || k >= p {
            return Err(Error::OutOfRange { index: j.max(k), bound: p });
        }
        let a = j.min(k).min(p - j).min(p - k);
        let b = j.min(p - j).max(k.min(p - k));
        Ok(BzdegaInput { p, j, k, a, b })
    }

    /// Inputs for an actual triple: `j = q^{-1}`, `k = r^{-1}` modulo `p`.
    pub fn for_instance(inst: &TernaryInstance) -> Result<Self> {
        let j = mod_inverse(inst.q as i64, inst.p)?;
        let k = mod_inverse(inst.r as i64, inst.p)?;
        BzdegaInput::new(inst.p, j, k)
    }
}

/// `min((p-1)/2 + a, p - b)`.
pub fn gb_bound(input: &BzdegaInput) -> u64 {
    ((input.p - 1) / 2 + input.a).min(input.p - input.b)
}

/// `min(2a + b, p - b)`.
pub fn bb_bound(input: &BzdegaInput) -> u64 {
    (2 * input.a + input.b).min(input.p - input.b)
}

/// `f(j) = GB(j, j)`, symmetric under `j -> p - j`.
pub fn f_function(p: u64, j: u64) -> Result<u64> {
    if j == 0 || j >= p {
        return Err(Error::OutOfRange { index: j, bound: p });
    }
    let j = if j > (p - 1) / 2 { p - j } else { j };
    Ok(if 4 * j < p { (p - 1) / 2 + j } else { p - j })
}

/// `M(p;q) <= f(q*)`.
pub fn upper1_bound(p: u64, q: u64) -> Result<u64> {
    check_pair(p, q)?;
    f_function(p, mod_inverse(q as i64, p)?)
}

/// `p + rho - sigma` when `rho <= sigma`, else `q + sigma - rho`.
pub fn newbound(p: u64, q: u64) -> Result<u64> {
    let ctx = BinaryContext::new(p, q)?;
    Ok(newbound_for(&ctx))
}

fn newbound_for(ctx: &BinaryContext) -> u64 {
    if ctx.rho <= ctx.sigma {
        ctx.p + ctx.rho - ctx.sigma
    } else {
        ctx.q + ctx.sigma - ctx.rho
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorollaryKind {
    /// `q = (kp - 1)/h`, needs `p >= k + h`.
    Minus,
    /// `q = (kp + 1)/h`, needs `p > h` and `q > k + h`.
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryBound {
    pub kind: CorollaryKind,
    pub h: u64,
    pub k: u64,
    pub bound: u64,
}

/// Best admissible `k + h` over all `h <= (q-1)/2` with `q = (kp -+ 1)/h`.
pub fn corollary_bounds(p: u64, q: u64) -> Option<CorollaryBound> {
    let mut best: Option<CorollaryBound> = None;
    let mut offer = |c: CorollaryBound| {
        if best.is_none_or(|b| c.bound < b.bound) {
            best = Some(c);
        }
    };
    for h in 1..=(q - 1) / 2 {
        if (h * q + 1) % p == 0 {
            let k = (h * q + 1) / p;
            if k > h && p >= k + h {
                offer(CorollaryBound { kind: CorollaryKind::Minus, h, k, bound: k + h });
            }
        }
        if (h * q - 1) % p == 0 {
            let k = (h * q - 1) / p;
            if k > h && p > h && q > k + h {
                offer(CorollaryBound { kind: CorollaryKind::Plus, h, k, bound: k + h });
            }
        }
    }
    best
}

/// `M(p;q) = min((q-1)/p + 1, (p+1)/2)` for `q = 1 (mod p)`.
pub fn exact_1modp(p: u64, q: u64) -> Result<u64> {
    check_pair(p, q)?;
    if q % p != 1 {
        return Err(Error::WrongResidue { p, q, expected: 1 });
    }
    Ok(((q - 1) / p + 1).min((p + 1) / 2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundProfile {
    pub p: u64,
    pub q: u64,
    pub q_star: u64,
    pub f_of_q_star: u64,
    pub rho: u64,
    pub sigma: u64,
    pub newbound: u64,
    /// `q = +-1 (mod p)`, where `A(pqr) <= (p+1)/2`.
    pub beiter_bloom_applicable: bool,
    pub trivial_bound: u64,
}

impl BoundProfile {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        let ctx = BinaryContext::new(p, q)?;
        let q_star = mod_inverse(q as i64, p)?;
        Ok(BoundProfile {
            p,
            q,
            q_star,
            f_of_q_star: f_function(p, q_star)?,
            rho: ctx.rho,
            sigma: ctx.sigma,
            newbound: newbound_for(&ctx),
            beiter_bloom_applicable: q % p == 1 || q % p == p - 1,
            trivial_bound: p,
        })
    }
}

/// `floor(2p/3)`, the global bound on `M(p)`.
pub fn zhao_zhang_bound(p: u64) -> u64 {
    2 * p / 3
}

// ---------------------------------------------------------------------------
// flatness criterion for n = 3qr

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeiterCertificate {
    pub q: u64,
    pub r: u64,
    pub h: u64,
    pub k: u64,
    /// `+1` when `r = (kq + 1)/h`, `-1` when `r = (kq - 1)/h`.
    pub sign: i8,
    /// The criterion's verdict, `A(3qr) = 1`.
    pub criterion_flat: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeiterCheck {
    pub certificate: BeiterCertificate,
    pub computed_height: u64,
    /// `"oracle"` when `3qr` is within the oracle cap, else `"kaplan"`.
    pub height_source: String,
    pub computed_flat: bool,
    pub disagreement: bool,
}

/// Evaluates the criterion exactly as stated for `n = 3qr`.
pub fn beiter_flat_criterion(q: u64, r: u64) -> Result<BeiterCertificate> {
    if !(3 < q && q < r && is_prime(q) && is_prime(r)) {
        return Err(Error::BadPrimes(format!("need primes 3 < q < r, got ({q}, {r})")));
    }
    let (h, sign) = (1..=(q - 1) / 2)
        .find_map(|h| match (h * r) % q {
            1 => Some((h, 1i8)),
            x if x == q - 1 => Some((h, -1i8)),
            _ => None,
        })
        .ok_or(Error::NoDecomposition { q, r })?;
    let k = if sign == 1 { (h * r - 1) / q } else { (h * r + 1) / q };
    let k0 = k % 3 == 0;
    let criterion_flat = if h == 1 {
        k0
    } else {
        (k0 && (h + q) % 3 == 0) || (k0 && (h + r) % 3 == 0)
    };
    Ok(BeiterCertificate { q, r, h, k, sign, criterion_flat })
}

/// Criterion verdict next to the computed height of `Phi_3qr`.
pub fn beiter_check(q: u64, r: u64) -> Result<BeiterCheck> {
    let certificate = beiter_flat_criterion(q, r)?;
    let n = 3 * q * r;
    let (computed_height, height_source) = if n <= DEFAULT_ORACLE_CAP {
        (oracle_height(n)?.height, "oracle")
    } else {
        (kaplan::height_of(3, q, r)?.height, "kaplan")
    };
    let computed_flat = computed_height == 1;
    Ok(BeiterCheck {
        certificate,
        computed_height,
        height_source: height_source.into(),
        computed_flat,
        disagreement: computed_flat != certificate.criterion_flat,
    })
}

// ---------------------------------------------------------------------------
// the sets B-(p), B+(p) and their thresholds

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OudSet {
    Minus,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OudBeta {
    pub beta: u64,
    pub beta_star: u64,
    pub set: OudSet,
    /// `gamma`, only for the plus set.
    pub gamma: Option<Rational>,
    /// `q-(p)` or `q+(p)`; `None` when the plus-set denominator is not positive.
    pub threshold: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OudProfile {
    pub p: u64,
    pub betas: Vec<OudBeta>,
}

impl OudProfile {
    pub fn b_minus(&self) -> BTreeSet<u64> {
        self.select(OudSet::Minus)
    }

    pub fn b_plus(&self) -> BTreeSet<u64> {
        self.select(OudSet::Plus)
    }

    /// The union of both sets.
    pub fn b_all(&self) -> BTreeSet<u64> {
        self.betas.iter().map(|b| b.beta).collect()
    }

    fn select(&self, set: OudSet) -> BTreeSet<u64> {
        self.betas.iter().filter(|b| b.set == set).map(|b| b.beta).collect()
    }

    pub fn get(&self, beta: u64) -> Option<&OudBeta> {
        self.betas.iter().find(|b| b.beta == beta)
    }
}

fn ratio(n: u64, d: u64) -> Rational {
    Rational::new(n as i64, d as i64)
}

/// `gamma` and `q+(p)` for a given `beta`, `beta*`.
fn plus_threshold(p: u64, beta: u64, beta_star: u64) -> (Rational, Option<Rational>) {
    let pi = p as i64;
    let bi = beta as i64;
    let bs = beta_star as i64;
    let gamma = Rational::new(pi - bs, pi - bi).min(Rational::new(bs - bi, bs));
    let denom = gamma * Rational::from_integer(pi - 1 - bi) - Rational::from_integer(pi - 1 - 2 * bi);
    let threshold = (denom > Rational::from_integer(0))
        .then(|| Rational::from_integer(pi * (pi - 1 - bi)) / denom);
    (gamma, threshold)
}

pub fn oud_profile(p: u64) -> Result<OudProfile> {
    if p < 11 || !is_prime(p) {
        return Err(Error::BadPrimes(format!("need a prime p >= 11, got {p}")));
    }
    let mut betas = Vec::new();
    for beta in 1..=(p - 3) / 2 {
        let beta_star = mod_inverse(beta as i64, p)?;
        if p <= beta + 2 * beta_star + 1 && beta > beta_star {
            let threshold = ratio(p * (p - beta_star) * (p - beta_star - 2), 2 * beta);
            betas.push(OudBeta { beta, beta_star, set: OudSet::Minus, gamma: None, threshold: Some(threshold) });
        } else if p <= beta + beta_star && 2 * beta >= beta_star {
            let (gamma, threshold) = plus_threshold(p, beta, beta_star);
            betas.push(OudBeta { beta, beta_star, set: OudSet::Plus, gamma: Some(gamma), threshold });
        }
    }
    Ok(OudProfile { p, betas })
}

/// `p - beta` when `q = beta (mod p)` with `beta` in the union and `q` strictly above the threshold.
pub fn oud_lower_bound(p: u64, q: u64) -> Option<u64> {
    if q <= p || !is_prime(q) {
        return None;
    }
    let profile = oud_profile(p).ok()?;
    let entry = profile.get(q % p)?;
    let threshold = entry.threshold?;
    (Rational::from_integer(q as i64) > threshold).then_some(p - entry.beta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct X0Rule {
    pub p: u64,
    /// Smallest positive root of `x^2 + 1 = 0 (mod p)`.
    pub x0: u64,
    pub residue: u64,
    pub threshold: Option<Rational>,
    /// `x0 > p/3`.
    pub applies: bool,
    /// `p - x0`.
    pub value: u64,
}

impl X0Rule {
    /// `M(p;q) = p - x0` when the rule applies, `q = x0 (mod p)` and `q >= q+(p)`.
    pub fn value_for(&self, q: u64) -> Option<u64> {
        let t = self.threshold?;
        (self.applies && q % self.p == self.residue && Rational::from_integer(q as i64) >= t)
            .then_some(self.value)
    }
}

pub fn x0_exact_rule(p: u64) -> Option<X0Rule> {
    if p < 13 || p % 4 != 1 || !is_prime(p) {
        return None;
    }
    let x0 = (1..p).find(|x| (x * x + 1) % p == 0)?;
    let (_, threshold) = plus_threshold(p, x0, p - x0);
    Some(X0Rule {
        p,
        x0,
        residue: x0,
        threshold,
        applies: 3 * x0 > p,
        value: p - x0,
    })
}

// ---------------------------------------------------------------------------
// combined report

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub value: u64,
    pub note: String,
    pub binding: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub p: u64,
    pub q: u64,
    pub profile: BoundProfile,
    pub entries: Vec<BoundEntry>,
    pub upper: u64,
    pub lower: u64,
    /// Set when the best lower and upper bounds meet.
    pub determined: Option<u64>,
}

/// Every applicable bound for `M(p;q)`, with the binding ones marked.
pub fn bounds_report(p: u64, q: u64) -> Result<BoundsReport> {
    let profile = BoundProfile::new(p, q)?;
    let mut entries = Vec::new();
    let mut push = |name: &str, kind, value, note: String| {
        entries.push(BoundEntry { name: name.into(), kind, value, note, binding: false });
    };
    push("trivial", BoundKind::Upper, p, "M(p;q) <= p".into());
    push("zhao-zhang", BoundKind::Upper, zhao_zhang_bound(p), "floor(2p/3)".into());
    push("f(q*)", BoundKind::Upper, profile.f_of_q_star, format!("q* = {}", profile.q_star));
    push(
        "newbound",
        BoundKind::Upper,
        profile.newbound,
        format!("rho = {}, sigma = {}", profile.rho, profile.sigma),
    );
    if let Some(c) = corollary_bounds(p, q) {
        let form = match c.kind {
            CorollaryKind::Minus => "q = (kp-1)/h",
            CorollaryKind::Plus => "q = (kp+1)/h",
        };
        push("corollary", BoundKind::Upper, c.bound, format!("{form}, h = {}, k = {}", c.h, c.k));
    }
    push("referee", BoundKind::Lower, 2, "M(p;q) >= 2".into());
    if p >= 11 {
        let profile = oud_profile(p)?;
        if let Some(entry) = profile.get(q % p) {
            let note = match entry.threshold {
                Some(t) => format!(
                    "beta = {}, threshold {} ({})",
                    entry.beta,
                    t,
                    if Rational::from_integer(q as i64) > t { "cleared" } else { "not cleared" }
                ),
                None => format!("beta = {}, no positive threshold", entry.beta),
            };
            if let Some(v) = oud_lower_bound(p, q) {
                push("oud", BoundKind::Lower, v, note);
            }
        }
    }
    if let Some(rule) = x0_exact_rule(p) {
        if let Some(v) = rule.value_for(q) {
            push("x0-rule", BoundKind::Exact, v, format!("x0 = {}", rule.x0));
        }
    }
    if q % p == 1 {
        push("1modp", BoundKind::Exact, exact_1modp(p, q)?, "q = 1 (mod p)".into());
    }

    let upper = entries
        .iter()
        .filter(|e| e.kind != BoundKind::Lower)
        .map(|e| e.value)
        .min()
        .unwrap_or(p);
    let lower = entries
        .iter()
        .filter(|e| e.kind != BoundKind::Upper)
        .map(|e| e.value)
        .max()
        .unwrap_or(2);
    for e in &mut entries {
        e.binding = match e.kind {
            BoundKind::Upper => e.value == upper,
            BoundKind::Lower => e.value == lower,
            BoundKind::Exact => true,
        };
    }
    Ok(BoundsReport {
        p,
        q,
        profile,
        entries,
        upper,
        lower,
        determined: (upper == lower).then_some(upper),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::primes_between;

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn gb_bb_examples() {
        let i = BzdegaInput::new(11, 2, 2).unwrap();
        assert_eq!(gb_bound(&i), 7);
        let i = BzdegaInput::new(11, 2, 5).unwrap();
        assert_eq!((i.a, i.b), (2, 5));
        assert_eq!(bb_bound(&i), 6);
        for p in primes_between(5, 60) {
            for k in 1..p {
                let i = BzdegaInput::new(p, 1, k).unwrap();
                assert!(gb_bound(&i) <= (p + 1) / 2);
            }
            let h = (p - 1) / 2;
            let i = BzdegaInput::new(p, h, h).unwrap();
            assert_eq!(bb_bound(&i), (p + 1) / 2);
        }
    }

    #[test]
    fn bb_never_exceeds_gb_and_both_peak_at_f() {
        for p in primes_between(3, 110) {
            for j in 1..p {
                let mut max_gb = 0;
                let mut max_bb = 0;
                for k in 1..p {
                    let i = BzdegaInput::new(p, j, k).unwrap();
                    assert!(i.b >= i.a && i.a >= 1 && i.b <= (p - 1) / 2);
                    assert!(bb_bound(&i) <= gb_bound(&i));
                    max_gb = max_gb.max(gb_bound(&i));
                    max_bb = max_bb.max(bb_bound(&i));
                }
                let f = f_function(p, j).unwrap();
                assert_eq!(f, gb_bound(&BzdegaInput::new(p, j, j).unwrap()));
                assert_eq!((max_gb, max_bb), (f, f), "p = {p}, j = {j}");
            }
        }
    }

    #[test]
    fn f_examples() {
        let f: Vec<u64> = (1..=5).map(|j| f_function(11, j).unwrap()).collect();
        assert_eq!(f, vec![6, 7, 8, 7, 6]);
        for p in primes_between(3, 200) {
            for j in 1..p {
                assert_eq!(f_function(p, j).unwrap(), f_function(p, p - j).unwrap());
            }
            let max = (1..p).map(|j| f_function(p, j).unwrap()).max().unwrap();
            assert_eq!(max, p - 1 - p / 4);
        }
        assert_eq!((1..7).map(|j| f_function(7, j).unwrap()).max(), Some(5));
        assert!(f_function(11, 0).is_err());
        assert!(f_function(11, 11).is_err());
    }

    #[test]
    fn upper1_examples() {
        assert_eq!(upper1_bound(11, 17).unwrap(), 7);
        for p in primes_between(3, 60) {
            for q in primes_between(p + 1, 400) {
                if q % p == 2 || q % p == 1 {
                    assert_eq!(upper1_bound(p, q).unwrap(), (p + 1) / 2, "({p}, {q})");
                }
            }
        }
        assert!(upper1_bound(17, 11).is_err());
    }

    #[test]
    fn newbound_examples() {
        assert_eq!(newbound(11, 17).unwrap(), 5);
        assert_eq!(newbound(11, 23).unwrap(), 3);
        assert_eq!(newbound(11, 43).unwrap(), 5);
        for p in primes_between(3, 40) {
            for q in primes_between(p + 1, 300) {
                assert!(newbound(p, q).unwrap() >= 2);
            }
        }
    }

    #[test]
    fn corollary_examples() {
        let c = corollary_bounds(11, 23).unwrap();
        assert_eq!((c.kind, c.h, c.k, c.bound), (CorollaryKind::Plus, 1, 2, 3));
        for p in [7, 19, 31, 37] {
            let c = corollary_bounds(p, 2 * p - 1).unwrap();
            assert_eq!(c.bound, 3);
        }
        let c = corollary_bounds(5, 7).unwrap();
        assert_eq!((c.kind, c.h, c.k, c.bound), (CorollaryKind::Minus, 2, 3, 5));
        assert_eq!(corollary_bounds(11, 17).unwrap().bound, 5);
        assert_eq!(corollary_bounds(11, 43).unwrap().bound, 5);
    }

    #[test]
    fn exact_1modp_examples() {
        assert_eq!(exact_1modp(5, 11).unwrap(), 3);
        assert_eq!(exact_1modp(7, 29).unwrap(), 4);
        assert_eq!(exact_1modp(11, 23).unwrap(), 3);
        assert!(matches!(exact_1modp(11, 17), Err(Error::WrongResidue { .. })));
    }

    #[test]
    fn beiter_certificates() {
        let c = beiter_flat_criterion(5, 11).unwrap();
        assert_eq!((c.h, c.k, c.sign, c.criterion_flat), (1, 2, 1, false));
        let c = beiter_flat_criterion(7, 43).unwrap();
        assert_eq!((c.h, c.k, c.criterion_flat), (1, 6, true));
        let c = beiter_flat_criterion(5, 7).unwrap();
        assert_eq!((c.h, c.k, c.sign, c.criterion_flat), (2, 3, -1, true));
        assert!(beiter_flat_criterion(3, 7).is_err());
        let c = beiter_check(5, 7).unwrap();
        assert_eq!((c.computed_height, c.height_source.as_str()), (2, "oracle"));
        assert!(c.certificate.criterion_flat && c.disagreement);
    }

    #[test]
    fn oud_sets() {
        assert_eq!(oud_profile(11).unwrap().b_all(), set(&[4]));
        assert_eq!(oud_profile(13).unwrap().b_all(), set(&[5]));
        assert_eq!(oud_profile(17).unwrap().b_all(), set(&[7]));
        assert_eq!(oud_profile(19).unwrap().b_all(), set(&[8]));
        for p in primes_between(11, 97) {
            let prof = oud_profile(p).unwrap();
            assert!(prof.b_minus().is_disjoint(&prof.b_plus()));
            assert!(prof.b_all().contains(&((p - 3) / 2)), "p = {p}");
        }
        assert!(oud_profile(7).is_err());
    }

    #[test]
    fn oud_thresholds() {
        let prof = oud_profile(11).unwrap();
        let e = prof.get(4).unwrap();
        assert_eq!((e.set, e.beta_star), (OudSet::Minus, 3));
        assert_eq!(e.threshold, Some(Rational::from_integer(66)));
        let prof = oud_profile(19).unwrap();
        let e = prof.get(8).unwrap();
        assert_eq!(e.set, OudSet::Plus);
        assert_eq!(e.gamma, Some(Rational::new(1, 3)));
        assert_eq!(e.threshold, Some(Rational::new(285, 2)));
    }

    #[test]
    fn oud_lower_examples() {
        assert_eq!(oud_lower_bound(19, 179), Some(11));
        assert_eq!(oud_lower_bound(19, 103), None);
        assert_eq!(oud_lower_bound(11, 103), Some(7));
        assert_eq!(oud_lower_bound(11, 37), None);
        assert_eq!(oud_lower_bound(11, 113), None);
    }

    #[test]
    fn x0_examples() {
        let r = x0_exact_rule(13).unwrap();
        assert_eq!((r.x0, r.applies, r.value), (5, true, 8));
        assert_eq!(r.threshold, Some(Rational::new(728, 5)));
        assert_eq!(r.value_for(239), Some(8));
        assert_eq!(r.value_for(109), None);
        let r = x0_exact_rule(29).unwrap();
        assert_eq!((r.x0, r.applies, r.value), (12, true, 17));
        assert!(x0_exact_rule(11).is_none());
        let r = x0_exact_rule(17).unwrap();
        assert_eq!((r.x0, r.applies), (4, false));
    }

    #[test]
    fn report_examples() {
        let r = bounds_report(11, 23).unwrap();
        assert_eq!(r.upper, 3);
        assert_eq!(r.determined, Some(3));
        let r = bounds_report(11, 17).unwrap();
        assert_eq!(r.upper, 5);
        assert_eq!(r.profile.f_of_q_star, 7);
        let r = bounds_report(19, 179).unwrap();
        assert_eq!(r.lower, 11);
        assert!(r.entries.iter().any(|e| e.name == "oud" && e.value == 11 && e.binding));
    }
}
