//! Coefficients of binary cyclotomic polynomials `Phi_pq` (Lam-Leung).
//!
//! With `rho`, `sigma` the non-negative solution of `1 + pq = (rho+1)p + (sigma+1)q`,
//! every `0 <= m < pq` is written as `alpha*p + beta*q` or `alpha*p + beta*q - pq`
//! with `alpha` in `[0, q)` and `beta` in `[0, p)`. The coefficient is `+1` when
//! `alpha <= rho` and `beta <= sigma`, `-1` when `alpha > rho` and `beta > sigma`,
//! and `0` otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, mod_inverse};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryContext {
    pub p: u64,
    pub q: u64,
    pub rho: u64,
    pub sigma: u64,
    pub p_inv_mod_q: u64,
    pub q_inv_mod_p: u64,
}

/// The `p`-part / `q`-part coordinates of an index `m < pq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartDecomposition {
    pub m: u64,
    /// `[m]_p`: the unique `alpha` in `[0, q)` with `alpha*p = m (mod q)`.
    pub p_part: u64,
    /// `[m]_q`: the unique `beta` in `[0, p)` with `beta*q = m (mod p)`.
    pub q_part: u64,
    /// True when `m = p_part*p + q_part*q - pq`.
    pub wrapped: bool,
}

impl BinaryContext {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if !(2 < p && p < q && is_prime(p) && is_prime(q)) {
            return Err(Error::BadPrimes(format!(
                "need odd primes 2 < p < q, got p = {p}, q = {q}"
            )));
        }
        let target = 1 + p * q;
        let (rho, sigma) = (0..p)
            .find_map(|sigma| {
                let rest = target.checked_sub((sigma + 1) * q)?;
                (rest % p == 0 && rest >= p).then(|| (rest / p - 1, sigma))
            })
            .ok_or_else(|| Error::InvariantViolated(format!("no (rho, sigma) for ({p}, {q})")))?;
        Ok(BinaryContext {
            p,
            q,
            rho,
            sigma,
            p_inv_mod_q: mod_inverse(p as i64, q)?,
            q_inv_mod_p: mod_inverse(q as i64, p)?,
        })
    }

    pub fn pq(&self) -> u64 {
        self.p * self.q
    }

    /// Degree of `Phi_pq`.
    pub fn degree(&self) -> u64 {
        (self.p - 1) * (self.q - 1)
    }

    pub fn decompose(&self, m: u64) -> Result<PartDecomposition> {
        let pq = self.pq();
        if m >= pq {
            return Err(Error::OutOfRange { index: m, bound: pq });
        }
        Ok(self.decompose_unchecked(m))
    }

    #[inline]
    pub(crate) fn decompose_unchecked(&self, m: u64) -> PartDecomposition {
        let p_part = (m % self.q) * self.p_inv_mod_q % self.q;
        let q_part = (m % self.p) * self.q_inv_mod_p % self.p;
        let sum = p_part * self.p + q_part * self.q;
        PartDecomposition {
            m,
            p_part,
            q_part,
            wrapped: sum != m,
        }
    }

    /// Sign class of a decomposition: `+1`, `-1` or `0`.
    #[inline]
    pub fn sign_of(&self, d: &PartDecomposition) -> i64 {
        if d.p_part <= self.rho && d.q_part <= self.sigma && !d.wrapped {
            1
        } else if d.p_part > self.rho && d.q_part > self.sigma {
            -1
        } else {
            0
        }
    }

    /// `a_pq(m)` for `0 <= m < pq`.
    pub fn coefficient(&self, m: u64) -> Result<i64> {
        let d = self.decompose(m)?;
        Ok(self.sign_of(&d))
    }

    /// All `pq` values `a_pq(0), ..., a_pq(pq - 1)`.
    pub fn coefficients(&self) -> Vec<i64> {
        (0..self.pq())
            .map(|m| self.sign_of(&self.decompose_unchecked(m)))
            .collect()
    }
}

pub fn make_context(p: u64, q: u64) -> Result<BinaryContext> {
    BinaryContext::new(p, q)
}

pub fn decompose(ctx: &BinaryContext, m: u64) -> Result<PartDecomposition> {
    ctx.decompose(m)
}

pub fn binary_coefficient(ctx: &BinaryContext, m: u64) -> Result<i64> {
    ctx.coefficient(m)
}
