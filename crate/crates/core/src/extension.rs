//! Lex-minimal extensions of finite binomid indices.
//!
//! The extension `η̃` of a binomid prefix of length `m` is produced by the
//! recurrence `S_k = max_{1≤i<k} (S_i + S_{k−i})` for `k > m`: each new
//! entry is the smallest value keeping every `δ(i, k−i)` nonnegative, which
//! makes `Δ(k) = 0` beyond the prefix.
//!
//! The tail is periodic with minimal period `gcd { i ≤ m : A_i = A_max }`
//! and `k·m(m+1)/2` is a preperiod for any `k` in that argmax set. Both facts
//! feed [`canonical_form`], which nevertheless re-verifies the period on the
//! materialized prefix instead of trusting it.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{self, FiniteIndex, PartialSumTable};
use crate::periodic::EventuallyPeriodicIndex;

/// Partial sums of `η̃` up to `horizon` (which may be shorter than `e`).
/// The caller guarantees `e` is binomid.
pub(crate) fn extended_sums(e: &FiniteIndex, horizon: usize) -> Result<PartialSumTable> {
    let base = index::partial_sums(e);
    let mut sums: Vec<i64> = base.as_slice().iter().copied().take(horizon).collect();
    sums.reserve(horizon.saturating_sub(sums.len()));
    for k in sums.len() + 1..=horizon {
        let mut best = i64::MIN;
        for i in 1..=k / 2 {
            let s = sums[i - 1]
                .checked_add(sums[k - i - 1])
                .ok_or(Error::Overflow("extension partial sums"))?;
            best = best.max(s);
        }
        sums.push(best);
    }
    Ok(PartialSumTable::from_monotone(sums))
}

fn differences(sums: &PartialSumTable) -> Vec<u64> {
    let mut prev = 0;
    sums.as_slice()
        .iter()
        .map(|&s| {
            let d = (s - prev) as u64;
            prev = s;
            d
        })
        .collect()
}

/// The length-`horizon` prefix of the lex-minimal extension of `e`.
pub fn extend(e: &FiniteIndex, horizon: usize) -> Result<FiniteIndex> {
    index::require_binomid(e)?;
    if horizon < e.len() {
        return Err(Error::range(
            "horizon",
            format!("{horizon} is shorter than the index ({})", e.len()),
        ));
    }
    FiniteIndex::new(differences(&extended_sums(e, horizon)?))
}

/// Item multiplicities `(n_1, …, n_m)` with `Σ n_i·i = k` and
/// `Σ n_i·S_i = S_k(η̃)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub counts: Vec<u64>,
    pub target: usize,
}

impl Witness {
    /// `(Σ n_i·i, Σ n_i·S_i)` evaluated against the prefix sums of `e`.
    pub fn evaluate(&self, e: &FiniteIndex) -> Option<(u128, i128)> {
        if self.counts.len() != e.len() {
            return None;
        }
        let sums = index::partial_sums(e);
        let mut weight = 0u128;
        let mut value = 0i128;
        for (i, &n) in self.counts.iter().enumerate() {
            weight += n as u128 * (i as u128 + 1);
            value += n as i128 * sums.get(i + 1) as i128;
        }
        Some((weight, value))
    }
}

/// Decomposes `S_k` of the extension into prefix sums.
///
/// Targets `k ≤ m` are their own witness. Larger targets split at the
/// smallest `i` with `S_k = S_i + S_{k−i}` and recurse on both halves.
pub fn witness(e: &FiniteIndex, k: usize) -> Result<Witness> {
    index::require_binomid(e)?;
    if k == 0 {
        return Err(Error::range("k", "witness target must be positive"));
    }
    let m = e.len();
    let sums = extended_sums(e, k.max(m))?;
    let mut counts = vec![0u64; m];
    let mut stack = vec![k];
    while let Some(t) = stack.pop() {
        if t <= m {
            counts[t - 1] = counts[t - 1]
                .checked_add(1)
                .ok_or(Error::Overflow("witness counts"))?;
            continue;
        }
        let st = sums.get(t);
        let i = (1..t)
            .find(|&i| sums.get(i) + sums.get(t - i) == st)
            .expect("every S_t beyond the prefix is attained by some split");
        stack.push(t - i);
        stack.push(i);
    }
    Ok(Witness { counts, target: k })
}

/// `gcd { i ≤ m : A_i = A_max }`.
pub fn minimal_period(e: &FiniteIndex) -> Result<usize> {
    let (_, argmax) = index::max_average(e)?;
    Ok(argmax.iter().fold(0, |g, &i| g.gcd(&i)))
}

/// `k_min · m(m+1)/2` where `k_min` is the smallest position attaining
/// `A_max`.
pub fn preperiod_bound(e: &FiniteIndex) -> Result<usize> {
    let (_, argmax) = index::max_average(e)?;
    let m = e.len();
    let tri = if m.is_multiple_of(2) {
        (m / 2).checked_mul(m + 1)
    } else {
        m.checked_mul(m.div_ceil(2))
    };
    tri.and_then(|t| t.checked_mul(argmax[0]))
        .ok_or(Error::Overflow("preperiod bound"))
}

/// Horizon used to read off the canonical form: the preperiod bound plus
/// two periods.
pub fn certification_horizon(e: &FiniteIndex) -> Result<usize> {
    let bound = preperiod_bound(e)?;
    let period = minimal_period(e)?;
    period
        .checked_mul(2)
        .and_then(|p| p.checked_add(bound))
        .ok_or(Error::Overflow("certification horizon"))
}

/// `η̃` as `pre (per)^∞` with both lengths minimal.
pub fn canonical_form(e: &FiniteIndex) -> Result<EventuallyPeriodicIndex> {
    let bound = preperiod_bound(e)?;
    let period = minimal_period(e)?;
    let horizon = certification_horizon(e)?;
    let entries = differences(&extended_sums(e, horizon)?);

    let tail = &entries[bound..];
    if (period..tail.len()).any(|i| tail[i] != tail[i - period]) {
        return Err(Error::Certificate(format!(
            "extension of {e} is not {period}-periodic after position {bound}"
        )));
    }
    let form = EventuallyPeriodicIndex::new(
        entries[..bound].to_vec(),
        tail[..period].to_vec(),
    )?;
    if form.period().len() != period {
        return Err(Error::Certificate(format!(
            "extension of {e} has period {} instead of {period}",
            form.period().len()
        )));
    }
    Ok(form)
}

/// Result of checking `Δ(k') = 0` for `k < k' ≤ horizon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexminCheck {
    pub lexmin: bool,
    pub k: usize,
    pub horizon: usize,
    /// The horizon reaches past the preperiod plus one full period.
    pub covers_period: bool,
}

/// Whether `x` looks like the lex-minimal extension of `x|_k`, judged on the
/// first `horizon` entries.
pub fn lexmin_check(x: &EventuallyPeriodicIndex, k: usize, horizon: usize) -> Result<LexminCheck> {
    if k == 0 || horizon < k {
        return Err(Error::range(
            "horizon",
            format!("need 1 <= k <= horizon, got k={k}, horizon={horizon}"),
        ));
    }
    let prefix = x.prefix_index(horizon)?;
    let sums = index::partial_sums(&prefix);
    let lexmin = index::is_binomid(&prefix)
        && (k + 1..=horizon).all(|kk| index::min_split_delta(&sums, kk) == 0);
    Ok(LexminCheck {
        lexmin,
        k,
        horizon,
        covers_period: horizon >= x.preperiod().len() + x.period().len(),
    })
}

pub fn is_lexmin_of_prefix(x: &EventuallyPeriodicIndex, k: usize, horizon: usize) -> Result<bool> {
    Ok(lexmin_check(x, k, horizon)?.lexmin)
}
