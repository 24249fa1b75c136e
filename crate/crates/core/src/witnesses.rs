//! Explicit coefficient witnesses: congruence conditions on `q` and `r`, an index
//! `k` and a predicted value `a_pqr(k)`, each checked through Kaplan's lemma.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kaplan::TernaryInstance;
use crate::numtheory::{crt, default_search_cap, is_prime, mod_inverse, next_prime, primes_between, smallest_prime_in_class, ResidueClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LemmaId {
    Moeller,
    Wilms2,
    Wilms1,
    WilmsM1,
    PMinus1,
    PPlus1,
    Elf11,
    L11_3,
    L11_7,
    L11_8,
    L19,
    D2pM1,
}

impl LemmaId {
    pub const ALL: [LemmaId; 12] = [
        LemmaId::Moeller,
        LemmaId::Wilms2,
        LemmaId::Wilms1,
        LemmaId::WilmsM1,
        LemmaId::PMinus1,
        LemmaId::PPlus1,
        LemmaId::Elf11,
        LemmaId::L11_3,
        LemmaId::L11_7,
        LemmaId::L11_8,
        LemmaId::L19,
        LemmaId::D2pM1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Moeller => "MOELLER",
            LemmaId::Wilms2 => "WILMS2",
            LemmaId::Wilms1 => "WILMS1",
            LemmaId::WilmsM1 => "WILMS_M1",
            LemmaId::PMinus1 => "P_MINUS_1",
            LemmaId::PPlus1 => "P_PLUS_1",
            LemmaId::Elf11 => "ELF11",
            LemmaId::L11_3 => "L11_3",
            LemmaId::L11_7 => "L11_7",
            LemmaId::L11_8 => "L11_8",
            LemmaId::L19 => "L19",
            LemmaId::D2pM1 => "D_2P_M1",
        }
    }

    /// The prime `p` when the lemma is stated for a single one.
    pub fn fixed_p(self) -> Option<u64> {
        match self {
            LemmaId::Elf11 | LemmaId::L11_3 | LemmaId::L11_7 | LemmaId::L11_8 => Some(11),
            LemmaId::L19 => Some(19),
            _ => None,
        }
    }

    /// Whether the lemma admits this `p` at all.
    pub fn admits_p(self, p: u64) -> bool {
        if !is_prime(p) || p < 3 {
            return false;
        }
        match self {
            LemmaId::Moeller | LemmaId::Wilms2 | LemmaId::Wilms1 | LemmaId::WilmsM1 | LemmaId::PMinus1 | LemmaId::PPlus1 => p > 3,
            LemmaId::D2pM1 => p >= 7 && is_prime(2 * p - 1),
            other => other.fixed_p().is_none_or(|f| f == p),
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let alias = match s.to_ascii_lowercase().as_str() {
            "wilms-1" => Some(LemmaId::WilmsM1),
            "p-1" => Some(LemmaId::PMinus1),
            "p+1" => Some(LemmaId::PPlus1),
            _ => None,
        };
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_uppercase();
        alias
            .or_else(|| LemmaId::ALL.into_iter().find(|l| l.name().replace('_', "") == key))
            .ok_or_else(|| Error::ConditionUnsatisfiable(format!("unknown lemma '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub lemma: LemmaId,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub k: u64,
    pub predicted: i64,
    /// `alpha` for ELF11, `a` for L19.
    pub aux: Option<u64>,
    pub q_conditions: String,
    pub r_conditions: Vec<String>,
    pub notes: Vec<String>,
}

fn unsat(msg: impl Into<String>) -> Error {
    Error::ConditionUnsatisfiable(msg.into())
}

fn half(x: u64) -> u64 {
    x / 2
}

/// Residue class of `r` from a residue of `r^{-1}` modulo `m`.
fn from_inverse(inv: i64, m: u64) -> Result<ResidueClass> {
    Ok(ResidueClass::new(mod_inverse(inv, m)? as i64, m))
}

struct Plan {
    class: ResidueClass,
    aux: Option<u64>,
    q_conditions: String,
    r_conditions: Vec<String>,
    notes: Vec<String>,
}

fn plan(lemma: LemmaId, p: u64, q: u64) -> Result<Plan> {
    let pq = p * q;
    let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(unsat(format!("{lemma}: {what} fails for p = {p}, q = {q}"))) };
    let plain = |class, qc: &str, rc: Vec<String>| Plan {
        class,
        aux: None,
        q_conditions: qc.into(),
        r_conditions: rc,
        notes: vec![],
    };
    need(lemma.admits_p(p), "p")?;
    need(q > p && is_prime(q), "q prime above p")?;
    Ok(match lemma {
        LemmaId::Moeller => {
            need(q % p == 2, "q = 2 (mod p)")?;
            let class = crt(&[(half(p - 1) as i64, p), (half(q - 1) as i64, q)])?;
            plain(class, "q = 2 (mod p)", vec!["r = (p-1)/2 (mod p)".into(), "r = (q-1)/2 (mod q)".into()])
        }
        LemmaId::Wilms2 => {
            need(q % p == 1, "q = 1 (mod p)")?;
            plain(from_inverse(half(p + q) as i64, pq)?, "q = 1 (mod p)", vec!["r^-1 = (p+q)/2 (mod pq)".into()])
        }
        LemmaId::Wilms1 => {
            need(q % p == p - 2, "q = -2 (mod p)")?;
            need(2 * q > p * p, "q > p^2/2")?;
            let mut plan = plain(
                from_inverse(p as i64 - 2, pq)?,
                "q = -2 (mod p), q > p^2/2",
                vec!["r^-1 = p-2 (mod pq)".into()],
            );
            plan.notes.push("q > p^2/2 enforced exactly as stated; the optimal constant is unknown".into());
            plan
        }
        LemmaId::WilmsM1 => {
            need(q % p == p - 1, "q = -1 (mod p)")?;
            need(q + 2 * p >= p * p, "q >= p^2 - 2p")?;
            plain(from_inverse(half(p + q) as i64, pq)?, "q = -1 (mod p), q >= p^2-2p", vec!["r^-1 = (p+q)/2 (mod pq)".into()])
        }
        LemmaId::PMinus1 => {
            need(q % p == half(p - 1), "q = (p-1)/2 (mod p)")?;
            need(q >= 3 * p && 4 * q >= p * (p + 1), "q >= max(3p, p(p+1)/4)")?;
            let inv = crt(&[(half(p + 1) as i64, p), (p as i64, q)])?;
            plain(
                from_inverse(inv.representative as i64, pq)?,
                "q = (p-1)/2 (mod p), q >= max(3p, p(p+1)/4)",
                vec!["r^-1 = (p+1)/2 (mod p)".into(), "r^-1 = p (mod q)".into()],
            )
        }
        LemmaId::PPlus1 => {
            need(q % p == half(p + 1), "q = (p+1)/2 (mod p)")?;
            need(q >= 3 * p && 4 * q >= p * (p - 1) + 4, "q >= max(3p, p(p-1)/4 + 1)")?;
            let inv = crt(&[(half(p - 1) as i64, p), (p as i64, q)])?;
            plain(
                from_inverse(inv.representative as i64, pq)?,
                "q = (p+1)/2 (mod p), q >= max(3p, p(p-1)/4 + 1)",
                vec!["r^-1 = (p-1)/2 (mod p)".into(), "r^-1 = p (mod q)".into()],
            )
        }
        LemmaId::Elf11 => {
            need(q % 11 == 4, "q = 4 (mod 11)")?;
            // smallest integer alpha with q/33 < alpha <= (3q-1)/77
            let alpha = q / 33 + 1;
            need(77 * alpha < 3 * q, "nonempty interval (q/33, (3q-1)/77]")?;
            let mod_q = mod_inverse((11 * alpha) as i64, q)?;
            let class = crt(&[(-3, 11), (mod_q as i64, q)])?;
            let mut plan = plain(class, "q = 4 (mod 11)", vec!["r = -3 (mod 11)".into(), "r = (11 alpha)^-1 (mod q)".into()]);
            plan.aux = Some(alpha);
            plan
        }
        LemmaId::L11_3 => {
            need(q % 11 == 3, "q = 3 (mod 11)")?;
            need(q >= 133, "q >= 133")?;
            let mut plan = plain(
                from_inverse(half(q - 19) as i64, pq)?,
                "q = 3 (mod 11), q >= 133",
                vec!["r^-1 = (q-19)/2 (mod pq)".into()],
            );
            plan.notes.push("the size hypothesis is read as q >= 133".into());
            plan
        }
        LemmaId::L11_7 => {
            need(q % 11 == 7, "q = 7 (mod 11)")?;
            plain(from_inverse(half(q + 7) as i64, pq)?, "q = 7 (mod 11)", vec!["r^-1 = (q+7)/2 (mod pq)".into()])
        }
        LemmaId::L11_8 => {
            need(q % 11 == 8, "q = 8 (mod 11)")?;
            plain(from_inverse(half(q - 3) as i64, pq)?, "q = 8 (mod 11)", vec!["r^-1 = (q-3)/2 (mod pq)".into()])
        }
        LemmaId::L19 => {
            need(q % 19 == 4 || q % 19 == 15, "q = +-4 (mod 19)")?;
            // smallest a with qa = -1 (mod 3) and q/(6p) < a <= (5q-18)/(6p)
            let a = (q / (6 * p) + 1..)
                .take_while(|&a| 6 * p * a + 18 <= 5 * q)
                .find(|&a| (q * a) % 3 == 2)
                .ok_or_else(|| unsat(format!("{lemma}: no admissible a for q = {q}")))?;
            let shift = q as i64 - (a * p) as i64;
            let class = ResidueClass::new((3 * mod_inverse(shift, pq)?) as i64, pq);
            let mut plan = plain(class, "q = +-4 (mod 19)", vec!["r (q - a p) = 3 (mod pq)".into()]);
            plan.aux = Some(a);
            plan
        }
        LemmaId::D2pM1 => {
            need(q == 2 * p - 1, "q = 2p - 1")?;
            let class = ResidueClass::new(-2 * mod_inverse((p + q) as i64, pq)? as i64, pq);
            plain(class, "q = 2p - 1", vec!["(p+q) r = -2 (mod pq)".into()])
        }
    })
}

fn index_and_value(lemma: LemmaId, p: u64, q: u64, r: u64, aux: Option<u64>) -> Result<(u64, i64)> {
    let (pi, qi, ri) = (p as i128, q as i128, r as i128);
    let half_p1 = (pi + 1) / 2;
    let (k, v): (i128, i128) = match lemma {
        LemmaId::Moeller => ((pi - 1) * (qi * ri + 1) / 2, half_p1),
        LemmaId::Wilms2 => ((pi - 1) * qi * ri / 2 - pi * ri + 2, -(((qi - 1) / pi + 1).min(half_p1))),
        LemmaId::Wilms1 => (half_p1 * (1 + ri * (2 - pi + qi)) + ri + qi - ri * qi, -half_p1),
        LemmaId::WilmsM1 => (pi * (qi - 1) * ri / 2 - ri * qi + pi - 1, -half_p1),
        LemmaId::PMinus1 => (pi - 1 + ri * (1 + qi * (pi - 1) / 2 - pi * (pi + 1) / 2), half_p1),
        LemmaId::PPlus1 => (qi + pi - 1 + ri * (qi * (pi - 1) / 2 - pi * (pi + 1) / 2), half_p1),
        LemmaId::Elf11 => (10 + (6 * qi - 77 * aux.unwrap_or(0) as i128) * ri, -7),
        LemmaId::L11_3 => (qi + 7 * ri * (qi - 19) / 2, 7),
        LemmaId::L11_7 | LemmaId::L11_8 => (6 * qi * ri + 4, 7),
        LemmaId::L19 if q % 19 == 15 => (7 * qi * ri + qi, -12),
        LemmaId::L19 => (7 * qi * ri + ri, -12),
        LemmaId::D2pM1 => (ri * qi * (pi - 1) / 2 + 2 * pi - pi * qi, 3),
    };
    let k = u64::try_from(k).map_err(|_| Error::InvariantViolated(format!("{lemma}: index {k} is negative or too large")))?;
    Ok((k, v as i64))
}

/// Concrete witness for `(p, q)`; with `q = None` the smallest admissible `q` is used.
pub fn instantiate(lemma: LemmaId, p: u64, q: Option<u64>, search_cap: Option<u64>) -> Result<WitnessSpec> {
    match q {
        Some(q) => instantiate_at(lemma, p, q, search_cap),
        None => admissible_qs(lemma, p, 1, search_cap)?
            .into_iter()
            .next()
            .ok_or_else(|| unsat(format!("{lemma}: no admissible q for p = {p}"))),
    }
}

fn instantiate_at(lemma: LemmaId, p: u64, q: u64, search_cap: Option<u64>) -> Result<WitnessSpec> {
    let plan = plan(lemma, p, q)?;
    let cap = search_cap.unwrap_or_else(|| default_search_cap(p * q, q));
    let r = smallest_prime_in_class(plan.class, q, cap)?;
    let (k, predicted) = index_and_value(lemma, p, q, r, plan.aux)?;
    Ok(WitnessSpec {
        lemma,
        p,
        q,
        r,
        k,
        predicted,
        aux: plan.aux,
        q_conditions: plan.q_conditions,
        r_conditions: plan.r_conditions,
        notes: plan.notes,
    })
}

/// The first `count` instantiable witnesses for `p`, in increasing `q`.
pub fn admissible_qs(lemma: LemmaId, p: u64, count: usize, search_cap: Option<u64>) -> Result<Vec<WitnessSpec>> {
    if !lemma.admits_p(p) {
        return Err(unsat(format!("{lemma}: p = {p} is not admissible")));
    }
    if lemma == LemmaId::D2pM1 {
        return Ok(vec![instantiate_at(lemma, p, 2 * p - 1, search_cap)?]);
    }
    let limit = (8 * p * p).max(2000);
    let mut found = Vec::new();
    let mut q = next_prime(p);
    while found.len() < count && q <= limit {
        match instantiate_at(lemma, p, q, search_cap) {
            Ok(spec) => found.push(spec),
            Err(Error::ConditionUnsatisfiable(_)) => {}
            Err(e) => return Err(e),
        }
        q = next_prime(q);
    }
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Confirmed,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub spec: WitnessSpec,
    pub computed: i64,
    pub outcome: Outcome,
}

/// Computes `a_pqr(k)` and compares it with the prediction.
pub fn verify(spec: &WitnessSpec) -> Result<Verification> {
    let inst = TernaryInstance::new(spec.p, spec.q, spec.r)?;
    let computed = inst.coefficient(spec.k);
    let outcome = if computed == spec.predicted { Outcome::Confirmed } else { Outcome::Refuted };
    if outcome == Outcome::Refuted {
        log::error!(
            "{} refuted at (p, q, r, k) = ({}, {}, {}, {}): predicted {}, computed {}",
            spec.lemma, spec.p, spec.q, spec.r, spec.k, spec.predicted, computed
        );
    }
    Ok(Verification { spec: spec.clone(), computed, outcome })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub lemma: LemmaId,
    pub p: u64,
    pub q: Option<u64>,
    pub r: Option<u64>,
    pub k: Option<u64>,
    pub predicted: Option<i64>,
    pub computed: Option<i64>,
    /// `None` when instantiation or verification failed; see `error`.
    pub outcome: Option<Outcome>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMatrix {
    pub p_cap: u64,
    pub rows: Vec<MatrixRow>,
}

impl WitnessMatrix {
    pub fn confirmed(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome == Some(Outcome::Confirmed)).count()
    }

    pub fn refuted(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome == Some(Outcome::Refuted)).count()
    }

    pub fn errors(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Every lemma at every admissible `p <= p_cap`, at the two smallest admissible `q`.
pub fn verify_all(p_cap: u64) -> WitnessMatrix {
    let mut rows = Vec::new();
    for lemma in LemmaId::ALL {
        for p in primes_between(3, p_cap).into_iter().filter(|&p| lemma.admits_p(p)) {
            let failed = |q: Option<u64>, e: Error| MatrixRow {
                lemma,
                p,
                q,
                r: None,
                k: None,
                predicted: None,
                computed: None,
                outcome: None,
                error: Some(e.to_string()),
            };
            let specs = match admissible_qs(lemma, p, 2, None) {
                Ok(s) if s.is_empty() => {
                    rows.push(failed(None, unsat("no admissible q in range")));
                    continue;
                }
                Ok(s) => s,
                Err(e) => {
                    rows.push(failed(None, e));
                    continue;
                }
            };
            for spec in specs {
                rows.push(match verify(&spec) {
                    Ok(v) => MatrixRow {
                        lemma,
                        p,
                        q: Some(spec.q),
                        r: Some(spec.r),
                        k: Some(spec.k),
                        predicted: Some(spec.predicted),
                        computed: Some(v.computed),
                        outcome: Some(v.outcome),
                        error: None,
                    },
                    Err(e) => failed(Some(spec.q), e),
                });
            }
        }
    }
    WitnessMatrix { p_cap, rows }
}
