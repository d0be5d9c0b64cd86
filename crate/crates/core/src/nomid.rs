//! f-nomid coefficients and prime-indexed exponent sequences.
//!
//! `[n k]_f = f_n f_{n−1} ⋯ f_{n−k+1} / (f_k f_{k−1} ⋯ f_1)`. A sequence is
//! binomid when every such coefficient is an integer, which happens iff for
//! each prime `p` the valuations `(ν_p(f_1), ν_p(f_2), …)` form a binomid
//! index. All statements here are about the supplied finite prefix
//! `f_1, …, f_N` only.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::FiniteIndex;

/// A finite sequence of positive integers `(f_1, …, f_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PositiveSequence(Vec<u64>);

impl PositiveSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.contains(&0) {
            return Err(Error::InvalidArgument("sequence terms must be positive".into()));
        }
        Ok(PositiveSequence(terms))
    }

    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `f_i`, 1-based.
    fn term(&self, i: usize) -> u64 {
        self.0[i - 1]
    }
}

impl TryFrom<Vec<u64>> for PositiveSequence {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        PositiveSequence::new(v)
    }
}

impl From<PositiveSequence> for Vec<u64> {
    fn from(f: PositiveSequence) -> Self {
        f.0
    }
}

fn check_range(f: &PositiveSequence, n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n || n > f.len() {
        return Err(Error::range(
            "(n, k)",
            format!("need 1 <= k <= n <= {}, got n={n}, k={k}", f.len()),
        ));
    }
    Ok(())
}

/// `[n k]_f` as an exact reduced rational.
pub fn nomid_coefficient(f: &PositiveSequence, n: usize, k: usize) -> Result<BigRational> {
    check_range(f, n, k)?;
    let num: BigInt = (n - k + 1..=n).map(|i| BigInt::from(f.term(i))).product();
    let den: BigInt = (1..=k).map(|i| BigInt::from(f.term(i))).product();
    Ok(BigRational::new(num, den))
}

/// Whether `[n k]_f` is an integer for all `1 ≤ k ≤ n ≤ N`.
pub fn is_binomid_sequence(f: &PositiveSequence) -> bool {
    (1..=f.len()).all(|n| row_is_integral(f, n))
}

/// Checks `[n k]_f` for `k = 1..n`, with the running products in `u128`
/// until they would overflow.
fn row_is_integral(f: &PositiveSequence, n: usize) -> bool {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 1..=n {
        match (
            num.checked_mul(f.term(n - k + 1) as u128),
            den.checked_mul(f.term(k) as u128),
        ) {
            (Some(a), Some(b)) => {
                num = a;
                den = b;
                if !num.is_multiple_of(den) {
                    return false;
                }
            }
            _ => return row_is_integral_big(f, n, k, BigUint::from(num), BigUint::from(den)),
        }
    }
    true
}

fn row_is_integral_big(f: &PositiveSequence, n: usize, from: usize, mut num: BigUint, mut den: BigUint) -> bool {
    for k in from..=n {
        num *= f.term(n - k + 1);
        den *= f.term(k);
        if !(&num % &den).is_zero() {
            return false;
        }
    }
    true
}

/// Exponent index `(ν_p(f_1), …, ν_p(f_N))` for every prime dividing some
/// term. Serializes as a JSON object keyed by the decimal prime.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeIndexMap(pub BTreeMap<u64, FiniteIndex>);

impl PrimeIndexMap {
    /// Recomputes `f_i = ∏_p p^{ν_p(f_i)}`; `None` on overflow.
    pub fn reconstruct(&self, len: usize) -> Option<Vec<u64>> {
        let mut out = vec![1u64; len];
        for (&p, exps) in &self.0 {
            for (slot, &e) in out.iter_mut().zip(exps.entries()) {
                let pow = p.checked_pow(u32::try_from(e).ok()?)?;
                *slot = slot.checked_mul(pow)?;
            }
        }
        Some(out)
    }
}

/// Trial-division factorization as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_indices(f: &PositiveSequence) -> PrimeIndexMap {
    let mut map: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (pos, &term) in f.terms().iter().enumerate() {
        for (p, e) in factorize(term) {
            map.entry(p).or_insert_with(|| vec![0; f.len()])[pos] = e as u64;
        }
    }
    PrimeIndexMap(
        map.into_iter()
            .map(|(p, v)| (p, FiniteIndex::new(v).expect("valuations are small")))
            .collect(),
    )
}

/// Compares `[n k]_f` with `∏_p p^{ν}` where
/// `ν = Σ_{i=n−k+1}^{n} ν_p(f_i) − Σ_{i=1}^{k} ν_p(f_i)`.
pub fn product_formula_check(f: &PositiveSequence, n: usize, k: usize) -> Result<bool> {
    let lhs = nomid_coefficient(f, n, k)?;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (p, exps) in prime_indices(f).0 {
        let e = exps.entries();
        let top: i64 = e[n - k..n].iter().map(|&x| x as i64).sum();
        let bottom: i64 = e[..k].iter().map(|&x| x as i64).sum();
        let nu = top - bottom;
        let pow = BigInt::from(p).pow(nu.unsigned_abs() as u32);
        if nu >= 0 {
            num *= pow;
        } else {
            den *= pow;
        }
    }
    Ok(lhs == BigRational::new(num, den))
}

/// Whether `x` is an integer (reduced denominator 1).
pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one()
}
