//! Exact dense integer polynomials and an independent cyclotomic oracle.
//!
//! Nothing here touches the binary or Kaplan machinery: `Phi_n` is obtained by
//! exact long division of products of binomials `x^d - 1`, and every division
//! verifies a zero remainder.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::kaplan::HeightRecord;
use crate::numtheory::{divisors, gcd, mobius};

/// Default cap on `n` (and so on the degree) for oracle expansions.
pub const DEFAULT_ORACLE_CAP: u64 = 2_000_000;

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DensePoly {
    coeffs: Vec<i64>,
}

fn overflow(op: &str) -> Error {
    Error::Overflow(format!("polynomial {op}"))
}

impl DensePoly {
    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DensePoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    /// `x^d - 1`.
    pub fn binomial(d: u64) -> Self {
        let mut c = vec![0; d as usize + 1];
        c[0] = -1;
        c[d as usize] += 1;
        DensePoly::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    fn nonzero_terms(&self) -> Vec<(usize, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect()
    }

    pub fn mul(&self, other: &DensePoly) -> Result<DensePoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(DensePoly::zero());
        }
        let (dense, sparse) = if self.nonzero_terms().len() <= other.nonzero_terms().len() {
            (other, self.nonzero_terms())
        } else {
            (self, other.nonzero_terms())
        };
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (j, s) in sparse {
            for (i, &c) in dense.coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let t = c.checked_mul(s).ok_or_else(|| overflow("multiply"))?;
                out[i + j] = out[i + j].checked_add(t).ok_or_else(|| overflow("multiply"))?;
            }
        }
        Ok(DensePoly::from_coeffs(out))
    }

    /// Maximum absolute coefficient with the smallest index attaining it.
    pub fn height_with_witness(&self) -> (u64, usize, i64) {
        let mut best = (0u64, 0usize, 0i64);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.unsigned_abs() > best.0 {
                best = (c.unsigned_abs(), k, c);
            }
        }
        best
    }

    /// `index,coefficient` lines in ascending index, no header.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(s, "{i},{c}");
        }
        s
    }
}

/// Quotient of `num / den`, failing unless the remainder is zero.
pub fn exact_divide(num: &DensePoly, den: &DensePoly) -> Result<DensePoly> {
    let Some(dd) = den.degree() else {
        return Err(Error::InexactDivision);
    };
    let Some(nd) = num.degree() else {
        return Ok(DensePoly::zero());
    };
    if nd < dd {
        return Err(Error::InexactDivision);
    }
    let lead = den.coeffs[dd];
    let tail: Vec<(usize, i64)> = den.nonzero_terms().into_iter().filter(|&(i, _)| i < dd).collect();
    let mut rem = num.coeffs.clone();
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        if c == 0 {
            continue;
        }
        if c % lead != 0 {
            return Err(Error::InexactDivision);
        }
        let qc = c / lead;
        quot[i] = qc;
        rem[i + dd] = 0;
        for &(j, dj) in &tail {
            let t = qc.checked_mul(dj).ok_or_else(|| overflow("divide"))?;
            rem[i + j] = rem[i + j].checked_sub(t).ok_or_else(|| overflow("divide"))?;
        }
    }
    if rem[..dd].iter().any(|&c| c != 0) {
        return Err(Error::InexactDivision);
    }
    Ok(DensePoly::from_coeffs(quot))
}

/// Largest `n` whose expansion is kept in the memo cache.
const MEMO_LIMIT: u64 = 100_000;

/// `Phi_n` oracle with a memo cache. Cached polynomials are shared, immutable.
pub struct CyclotomicOracle {
    cap: u64,
    cache: Mutex<HashMap<u64, Arc<DensePoly>>>,
}

impl CyclotomicOracle {
    pub fn new(cap: u64) -> Self {
        CyclotomicOracle {
            cap,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn check_cap(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.cap {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }

    fn cached(&self, n: u64) -> Option<Arc<DensePoly>> {
        self.cache.lock().expect("oracle cache poisoned").get(&n).cloned()
    }

    fn store(&self, n: u64, poly: DensePoly) -> Arc<DensePoly> {
        let poly = Arc::new(poly);
        if n > MEMO_LIMIT {
            return poly;
        }
        self.cache
            .lock()
            .expect("oracle cache poisoned")
            .entry(n)
            .or_insert(poly)
            .clone()
    }

    /// `Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}`: multiply out the positive
    /// factors, then divide exactly by the negative ones, largest first.
    pub fn cyclotomic(&self, n: u64) -> Result<Arc<DensePoly>> {
        self.check_cap(n)?;
        if let Some(p) = self.cached(n) {
            return Ok(p);
        }
        let mut up = Vec::new();
        let mut down = Vec::new();
        for d in divisors(n) {
            match mobius(n / d) {
                1 => up.push(d),
                -1 => down.push(d),
                _ => {}
            }
        }
        let mut acc = DensePoly::one();
        for d in up {
            acc = acc.mul(&DensePoly::binomial(d))?;
        }
        for &d in down.iter().rev() {
            acc = exact_divide(&acc, &DensePoly::binomial(d))?;
        }
        Ok(self.store(n, acc))
    }

    /// `Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d`, recursing through the cache.
    pub fn cyclotomic_by_divisors(&self, n: u64) -> Result<Arc<DensePoly>> {
        self.check_cap(n)?;
        let mut acc = DensePoly::binomial(n);
        for d in divisors(n).into_iter().rev().skip(1) {
            let phi_d = match self.cached(d) {
                Some(p) => p,
                None => self.cyclotomic_by_divisors(d)?,
            };
            acc = exact_divide(&acc, &phi_d)?;
        }
        Ok(self.store(n, acc))
    }
}

impl Default for CyclotomicOracle {
    fn default() -> Self {
        CyclotomicOracle::new(DEFAULT_ORACLE_CAP)
    }
}

fn shared() -> &'static CyclotomicOracle {
    static ORACLE: OnceLock<CyclotomicOracle> = OnceLock::new();
    ORACLE.get_or_init(CyclotomicOracle::default)
}

/// `Phi_n` through the process-wide oracle (default cap).
pub fn cyclotomic(n: u64) -> Result<Arc<DensePoly>> {
    shared().cyclotomic(n)
}

/// `A(n)` from the oracle expansion.
pub fn oracle_height(n: u64) -> Result<HeightRecord> {
    let phi = cyclotomic(n)?;
    let (height, k, value) = phi.height_with_witness();
    Ok(HeightRecord {
        factors: vec![n],
        height,
        witness_k: k as u64,
        witness_value: value,
    })
}

/// `prod (x^{d_i} - 1)`, expanded term by term over subsets.
fn binomial_product(degrees: &[u64]) -> DensePoly {
    let total: u64 = degrees.iter().sum();
    let mut c = vec![0i64; total as usize + 1];
    for mask in 0..(1usize << degrees.len()) {
        let mut e = 0u64;
        let mut picked = 0;
        for (i, &d) in degrees.iter().enumerate() {
            if mask >> i & 1 == 1 {
                e += d;
                picked += 1;
            }
        }
        let sign = if (degrees.len() - picked) % 2 == 0 { 1 } else { -1 };
        c[e as usize] += sign;
    }
    DensePoly::from_coeffs(c)
}

/// The inclusion-exclusion polynomial
/// `(x^pqr - 1)(x^p - 1)(x^q - 1)(x^r - 1) / ((x - 1)(x^pq - 1)(x^pr - 1)(x^qr - 1))`.
pub fn inclusion_exclusion(p: u64, q: u64, r: u64) -> Result<DensePoly> {
    inclusion_exclusion_capped(p, q, r, DEFAULT_ORACLE_CAP)
}

pub fn inclusion_exclusion_capped(p: u64, q: u64, r: u64, cap: u64) -> Result<DensePoly> {
    if p == 0 || q == 0 || r == 0 || gcd(p, q) != 1 || gcd(p, r) != 1 || gcd(q, r) != 1 {
        return Err(Error::NotCoprime { a: p as i64, m: q * r });
    }
    let n = p
        .checked_mul(q)
        .and_then(|x| x.checked_mul(r))
        .filter(|&n| n <= cap)
        .ok_or(Error::CapExceeded { n: p.saturating_mul(q).saturating_mul(r), cap })?;
    let num = binomial_product(&[n, p, q, r]);
    let den = binomial_product(&[1, p * q, p * r, q * r]);
    exact_divide(&num, &den)
}

/// `A'(p, q, r)` with the smallest witnessing index.
pub fn ie_height(p: u64, q: u64, r: u64) -> Result<HeightRecord> {
    let poly = inclusion_exclusion(p, q, r)?;
    let (height, k, value) = poly.height_with_witness();
    Ok(HeightRecord {
        factors: vec![p, q, r],
        height,
        witness_k: k as u64,
        witness_value: value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> DensePoly {
        DensePoly::from_coeffs(c.to_vec())
    }

    #[test]
    fn small_cyclotomics() {
        let o = CyclotomicOracle::default();
        assert_eq!(*o.cyclotomic(1).unwrap(), poly(&[-1, 1]));
        assert_eq!(*o.cyclotomic(7).unwrap(), poly(&[1; 7]));
        assert_eq!(*o.cyclotomic(6).unwrap(), poly(&[1, -1, 1]));
        assert_eq!(*o.cyclotomic(15).unwrap(), poly(&[1, -1, 0, 1, -1, 1, 0, -1, 1]));
        let phi105 = o.cyclotomic(105).unwrap();
        assert_eq!(phi105.degree(), Some(48));
        assert_eq!(phi105.coeff(7), -2);
    }

    #[test]
    fn both_routes_agree() {
        let a = CyclotomicOracle::default();
        let b = CyclotomicOracle::default();
        for n in 1..=400 {
            assert_eq!(a.cyclotomic(n).unwrap(), b.cyclotomic_by_divisors(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn division_examples() {
        let q = exact_divide(&poly(&[-1, 0, 1]), &poly(&[-1, 1])).unwrap();
        assert_eq!(q, poly(&[1, 1]));
        let o = CyclotomicOracle::default();
        let den = o
            .cyclotomic(1)
            .unwrap()
            .mul(&o.cyclotomic(3).unwrap())
            .unwrap()
            .mul(&o.cyclotomic(5).unwrap())
            .unwrap();
        let q = exact_divide(&DensePoly::binomial(15), &den).unwrap();
        assert_eq!(q, *o.cyclotomic(15).unwrap());
        assert_eq!(
            exact_divide(&DensePoly::binomial(4), &DensePoly::binomial(3)),
            Err(Error::InexactDivision)
        );
        assert_eq!(exact_divide(&poly(&[1]), &DensePoly::zero()), Err(Error::InexactDivision));
    }

    #[test]
    fn cap_enforced() {
        let o = CyclotomicOracle::new(100);
        assert!(matches!(o.cyclotomic(101), Err(Error::CapExceeded { .. })));
        assert!(matches!(o.cyclotomic(0), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn inclusion_exclusion_examples() {
        assert_eq!(inclusion_exclusion(3, 5, 7).unwrap(), *cyclotomic(105).unwrap());
        assert_eq!(inclusion_exclusion(3, 5, 7).unwrap(), inclusion_exclusion(3, 7, 5).unwrap());
        // degenerate first parameter collapses to the constant 1
        assert_eq!(inclusion_exclusion(1, 5, 7).unwrap(), DensePoly::one());
        assert_eq!(inclusion_exclusion(1, 4, 9).unwrap(), DensePoly::one());
        assert!(matches!(inclusion_exclusion(3, 6, 7), Err(Error::NotCoprime { .. })));
        assert_eq!(ie_height(3, 5, 7).unwrap().height, 2);
    }

    #[test]
    fn csv_export() {
        assert_eq!(cyclotomic(3).unwrap().to_csv(), "0,1\n1,1\n2,1\n");
    }
}
