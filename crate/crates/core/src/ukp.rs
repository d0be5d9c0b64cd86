//! Unbounded knapsack and its correspondence with lex-minimal extensions.
//!
//! For items with values `v` and weights `w`, the optimal value table
//! `φ(k)` has increments `φ(k) − φ(k−1)` that form a binomid index up to
//! `max w`, and the partial sums of that index's lex-minimal extension are
//! exactly `φ(1), φ(2), …`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension;
use crate::index::{self, FiniteIndex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct UkpInstance {
    values: Vec<u64>,
    weights: Vec<u64>,
}

#[derive(Deserialize)]
struct RawInstance {
    values: Vec<u64>,
    weights: Vec<u64>,
}

impl TryFrom<RawInstance> for UkpInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        UkpInstance::new(raw.values, raw.weights)
    }
}

impl UkpInstance {
    pub fn new(values: Vec<u64>, weights: Vec<u64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        if values.is_empty() {
            return Err(Error::InvalidArgument("instance has no items".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidArgument("item weights must be positive".into()));
        }
        Ok(UkpInstance { values, weights })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_weight(&self) -> u64 {
        *self.weights.iter().max().expect("nonempty")
    }
}

/// `φ(0), φ(1), …, φ(K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    phi: Vec<u64>,
}

impl PhiTable {
    pub fn get(&self, k: usize) -> u64 {
        self.phi[k]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.phi
    }

    pub fn capacity(&self) -> usize {
        self.phi.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UkpSolution {
    pub counts: Vec<u64>,
    pub value: u64,
    pub capacity: usize,
}

/// `φ` for capacities `0..=capacity`.
pub fn phi_table(inst: &UkpInstance, capacity: usize) -> Result<PhiTable> {
    let mut phi = Vec::with_capacity(capacity + 1);
    phi.push(0u64);
    for k in 1..=capacity {
        let mut best = phi[k - 1];
        for (&v, &w) in inst.values.iter().zip(&inst.weights) {
            if w as usize <= k {
                let cand = phi[k - w as usize]
                    .checked_add(v)
                    .ok_or(Error::Overflow("knapsack value"))?;
                best = best.max(cand);
            }
        }
        phi.push(best);
    }
    Ok(PhiTable { phi })
}

/// Solves the instance for every capacity up to `capacity` and returns one
/// optimal packing at the full capacity.
///
/// Backtracking prefers the lowest-numbered item that attains `φ(c)` and only
/// falls back to dropping a unit of capacity when no item does, so a
/// unit-weight item always leads to a packing of weight exactly `capacity`.
pub fn solve(inst: &UkpInstance, capacity: usize) -> Result<(PhiTable, UkpSolution)> {
    let table = phi_table(inst, capacity)?;
    let phi = &table.phi;
    let mut counts = vec![0u64; inst.len()];
    let mut c = capacity;
    while c > 0 {
        let item = inst
            .values
            .iter()
            .zip(&inst.weights)
            .position(|(&v, &w)| w as usize <= c && phi[c - w as usize] + v == phi[c]);
        match item {
            Some(i) => {
                counts[i] += 1;
                c -= inst.weights[i] as usize;
            }
            None => c -= 1,
        }
    }
    let value = table.get(capacity);
    Ok((
        table,
        UkpSolution {
            counts,
            value,
            capacity,
        },
    ))
}

/// The index of `φ` increments, `η_k = φ(k) − φ(k−1)` for `k ≤ max w`.
pub fn index_from_ukp(inst: &UkpInstance) -> Result<FiniteIndex> {
    let len = usize::try_from(inst.max_weight())
        .map_err(|_| Error::Overflow("maximum weight"))?;
    let table = phi_table(inst, len)?;
    let e = FiniteIndex::new(table.phi.windows(2).map(|w| w[1] - w[0]).collect())?;
    index::require_binomid(&e)?;
    Ok(e)
}

/// Whether the extension of [`index_from_ukp`] has partial sums
/// `φ(1), …, φ(horizon)`.
pub fn phi_matches_extension(inst: &UkpInstance, horizon: usize) -> Result<bool> {
    let e = index_from_ukp(inst)?;
    if horizon < e.len() {
        return Err(Error::range(
            "horizon",
            format!("{horizon} is below the maximum weight {}", e.len()),
        ));
    }
    let ext = extension::extend(&e, horizon)?;
    let sums = index::partial_sums(&ext);
    let table = phi_table(inst, horizon)?;
    Ok((1..=horizon).all(|k| sums.get(k) as u64 == table.get(k)))
}
