//! Eventually periodic sequences `η_0 (η_1)^∞` in canonical form.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{self, FiniteIndex};

/// An infinite sequence `pre (per)^∞` of nonnegative integers.
///
/// Always stored canonically: `per` is primitive (not a power of a shorter
/// word) and `pre` cannot be shortened (its last entry differs from the last
/// entry of `per`). Two values are therefore equal iff they represent the same
/// infinite sequence.
///
/// The binomid property is not enforced at construction since it concerns the
/// whole infinite sequence; see [`EventuallyPeriodicIndex::is_binomid_up_to`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPeriodic")]
pub struct EventuallyPeriodicIndex {
    pre: Vec<u64>,
    per: Vec<u64>,
}

#[derive(Deserialize)]
struct RawPeriodic {
    #[serde(default)]
    pre: Vec<u64>,
    per: Vec<u64>,
}

impl TryFrom<RawPeriodic> for EventuallyPeriodicIndex {
    type Error = Error;

    fn try_from(raw: RawPeriodic) -> Result<Self> {
        EventuallyPeriodicIndex::new(raw.pre, raw.per)
    }
}

impl EventuallyPeriodicIndex {
    /// Builds the canonical form of `pre (per)^∞`.
    pub fn new(mut pre: Vec<u64>, per: Vec<u64>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::InvalidArgument("period must be nonempty".into()));
        }
        let mut per = primitive_root(per);
        while let Some(&last) = pre.last() {
            if last != *per.last().expect("nonempty") {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(EventuallyPeriodicIndex { pre, per })
    }

    /// The purely periodic sequence `(per)^∞`.
    pub fn periodic(per: Vec<u64>) -> Result<Self> {
        Self::new(Vec::new(), per)
    }

    /// `0^∞`, canonically `pre = [], per = [0]`.
    pub fn zero() -> Self {
        EventuallyPeriodicIndex {
            pre: Vec::new(),
            per: vec![0],
        }
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.pre
    }

    pub fn period(&self) -> &[u64] {
        &self.per
    }

    pub fn is_zero(&self) -> bool {
        self.pre.is_empty() && self.per == [0]
    }

    /// `e_i` of the represented sequence, 1-based. Returns 0 for `i = 0`.
    pub fn get(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        let i = i - 1;
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    /// The first `len` entries.
    pub fn prefix(&self, len: usize) -> Vec<u64> {
        (1..=len).map(|i| self.get(i)).collect()
    }

    /// The first `len` entries as a [`FiniteIndex`] (`len ≥ 1`).
    pub fn prefix_index(&self, len: usize) -> Result<FiniteIndex> {
        FiniteIndex::new(self.prefix(len))
    }

    /// Componentwise sum, recanonicalized.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let pre_len = self.pre.len().max(other.pre.len());
        let per_len = self
            .per
            .len()
            .checked_mul(other.per.len() / self.per.len().gcd(&other.per.len()))
            .ok_or(Error::Overflow("period lcm"))?;
        let sum_at = |i: usize| {
            self.get(i)
                .checked_add(other.get(i))
                .ok_or(Error::Overflow("sequence sum"))
        };
        let pre = (1..=pre_len).map(sum_at).collect::<Result<Vec<_>>>()?;
        let per = (pre_len + 1..=pre_len + per_len)
            .map(sum_at)
            .collect::<Result<Vec<_>>>()?;
        Self::new(pre, per)
    }

    /// `σ^l`: prepends `l` zeros.
    pub fn shift(&self, l: usize) -> Self {
        let mut pre = vec![0; l];
        pre.extend_from_slice(&self.pre);
        Self::new(pre, self.per.clone()).expect("period is nonempty")
    }

    /// Checks `δ(i, j) ≥ 0` on the first `horizon` entries.
    pub fn is_binomid_up_to(&self, horizon: usize) -> Result<bool> {
        if horizon == 0 {
            return Ok(true);
        }
        Ok(index::is_binomid(&self.prefix_index(horizon)?))
    }
}

/// Shortest word `u` with `per = u^r`.
fn primitive_root(per: Vec<u64>) -> Vec<u64> {
    let n = per.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| per[i] == per[i - d]) {
            return per[..d].to_vec();
        }
    }
    per
}

impl fmt::Debug for EventuallyPeriodicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EventuallyPeriodicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        if !self.pre.is_empty() {
            write!(f, "({})", join(&self.pre))?;
        }
        write!(f, "({})^inf", join(&self.per))
    }
}
