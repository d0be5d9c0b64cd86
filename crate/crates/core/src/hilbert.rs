//! Hilbert bases of the polyhedral monoids `𝕀_k`.
//!
//! `𝕀_k` is the set of `x ∈ ℕ^k` with `S_{i+j} − S_i − S_j ≥ 0` for all
//! `i + j ≤ k`. Adding one slack variable per inequality turns it into the
//! homogeneous system `C x − s = 0` over `ℕ^{k+r}`, whose minimal nonzero
//! solutions are found with the Contejean–Devie completion procedure:
//! starting from unit vectors, a partial solution `y` is only grown by `e_j`
//! when `⟨A y, A e_j⟩ < 0`, and anything dominating an already found
//! solution is dropped. Projecting the minimal solutions onto `x` gives the
//! Hilbert basis, since the slack part is determined by `x`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{self, FiniteIndex};

/// Largest `k` accepted by [`hilbert_basis`].
pub const MAX_HILBERT_K: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasis {
    pub k: usize,
    pub generators: Vec<FiniteIndex>,
    /// Every element of `𝕀_k` with coordinates up to this bound was checked
    /// to be a combination of the generators.
    pub verified_bound: u64,
}

/// Rows of `C` for `𝕀_k`, one per unordered split `i ≤ j`, `i + j ≤ k`.
pub fn binomid_constraints(k: usize) -> Vec<Vec<i64>> {
    let mut rows = Vec::new();
    for total in 2..=k {
        for i in 1..=total / 2 {
            let j = total - i;
            let row = (1..=k)
                .map(|t| (t <= total) as i64 - (t <= i) as i64 - (t <= j) as i64)
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Minimal nonzero `y ∈ ℕ^n` with `A y = 0`, given `A` by columns.
fn minimal_solutions(columns: &[Vec<i64>]) -> Vec<Vec<u32>> {
    let n = columns.len();
    let rows = columns.first().map_or(0, Vec::len);
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let dominated = |y: &[u32], sols: &[Vec<u32>]| {
        sols.iter().any(|s| s.iter().zip(y).all(|(a, b)| a <= b))
    };

    let mut solutions: Vec<Vec<u32>> = Vec::new();
    let mut frontier: Vec<(Vec<u32>, Vec<i64>)> = (0..n)
        .map(|j| {
            let mut y = vec![0; n];
            y[j] = 1;
            (y, columns[j].clone())
        })
        .collect();

    while !frontier.is_empty() {
        let (done, open): (Vec<_>, Vec<_>) = frontier
            .into_iter()
            .partition(|(_, d)| d.iter().all(|&x| x == 0));
        solutions.extend(done.into_iter().map(|(y, _)| y));

        let mut next: HashMap<Vec<u32>, Vec<i64>> = HashMap::new();
        for (y, d) in open {
            for (j, col) in columns.iter().enumerate() {
                if dot(&d, col) >= 0 {
                    continue;
                }
                let mut z = y.clone();
                z[j] += 1;
                if next.contains_key(&z) || dominated(&z, &solutions) {
                    continue;
                }
                let dz = (0..rows).map(|r| d[r] + col[r]).collect();
                next.insert(z, dz);
            }
        }
        frontier = next.into_iter().collect();
        frontier.sort();
    }
    solutions
}

/// Hilbert basis of `{x ∈ ℕ^dim : C x ≥ 0}`, sorted in decreasing
/// lexicographic order.
pub fn cone_hilbert_basis(constraints: &[Vec<i64>], dim: usize) -> Vec<Vec<u64>> {
    let r = constraints.len();
    let mut columns: Vec<Vec<i64>> = (0..dim)
        .map(|t| constraints.iter().map(|row| row[t]).collect())
        .collect();
    for slack in 0..r {
        columns.push((0..r).map(|row| -((row == slack) as i64)).collect());
    }
    let mut basis: Vec<Vec<u64>> = minimal_solutions(&columns)
        .into_iter()
        .map(|y| y[..dim].iter().map(|&v| v as u64).collect())
        .filter(|x: &Vec<u64>| x.iter().any(|&v| v > 0))
        .collect();
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis.dedup();
    basis
}

/// The Hilbert basis of `𝕀_k`, verified against every element of `𝕀_k` with
/// coordinates at most `bound`.
pub fn hilbert_basis(k: usize, bound: u64) -> Result<HilbertBasis> {
    if k == 0 || k > MAX_HILBERT_K {
        return Err(Error::Unsupported(format!(
            "Hilbert basis of I_{k}: supported range is 1..={MAX_HILBERT_K}"
        )));
    }
    if bound == 0 {
        return Err(Error::InvalidArgument("verification bound must be positive".into()));
    }
    let generators: Vec<FiniteIndex> = cone_hilbert_basis(&binomid_constraints(k), k)
        .into_iter()
        .map(FiniteIndex::new)
        .collect::<Result<_>>()?;
    verify_basis(k, &generators, bound)?;
    Ok(HilbertBasis {
        k,
        generators,
        verified_bound: bound,
    })
}

/// Mixed-radix enumeration of the box `[0, hi_1] × ⋯ × [0, hi_k]`, first
/// coordinate most significant.
pub(crate) struct BoxIter {
    hi: Vec<u64>,
    cur: Option<Vec<u64>>,
}

impl BoxIter {
    pub(crate) fn new(hi: Vec<u64>) -> Self {
        let cur = Some(vec![0; hi.len()]);
        BoxIter { hi, cur }
    }
}

impl Iterator for BoxIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut pos = next.len();
        loop {
            if pos == 0 {
                self.cur = None;
                break;
            }
            pos -= 1;
            if next[pos] < self.hi[pos] {
                next[pos] += 1;
                next[pos + 1..].iter_mut().for_each(|x| *x = 0);
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

fn in_cone(x: &[u64]) -> bool {
    index::is_binomid(&FiniteIndex::new(x.to_vec()).expect("small coordinates"))
}

/// Flags, over the box `[0, hi]`, which points are sums of `gens`.
fn representable_in_box(hi: &[u64], gens: &[&[u64]]) -> Vec<bool> {
    let radix: Vec<usize> = hi.iter().map(|&h| h as usize + 1).collect();
    let size: usize = radix.iter().product();
    let offset = |x: &[u64]| {
        x.iter()
            .zip(&radix)
            .fold(0usize, |acc, (&v, &r)| acc * r + v as usize)
    };
    let mut rep = vec![false; size];
    // BoxIter visits points in increasing offset order, and x − g has a
    // smaller offset than x.
    for (pos, x) in BoxIter::new(hi.to_vec()).enumerate() {
        if pos == 0 {
            rep[0] = true;
            continue;
        }
        rep[pos] = gens.iter().any(|g| {
            g.iter().zip(&x).all(|(a, b)| a <= b) && {
                let rest: Vec<u64> = x.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
                rep[offset(&rest)]
            }
        });
    }
    rep
}

/// Whether `x ∈ 𝕀_k` splits as `a + b` with `a, b` nonzero in `𝕀_k`.
pub(crate) fn is_reducible(x: &[u64]) -> bool {
    BoxIter::new(x.to_vec()).any(|a| {
        let b: Vec<u64> = x.iter().zip(&a).map(|(p, q)| p - q).collect();
        a.iter().any(|&v| v > 0) && b.iter().any(|&v| v > 0) && in_cone(&a) && in_cone(&b)
    })
}

/// Checks that `gens` is the Hilbert basis of `𝕀_k` as far as the bounded
/// box can tell.
pub fn verify_basis(k: usize, gens: &[FiniteIndex], bound: u64) -> Result<()> {
    let fail = |msg: String| Err(Error::Certificate(msg));
    for g in gens {
        if g.len() != k || !index::is_binomid(g) || g.is_zero() {
            return fail(format!("{g} is not a nonzero element of I_{k}"));
        }
        if is_reducible(g.entries()) {
            return fail(format!("{g} is a sum of two nonzero elements of I_{k}"));
        }
    }
    for (n, g) in gens.iter().enumerate() {
        let others: Vec<&[u64]> = gens
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != n)
            .map(|(_, h)| h.entries())
            .collect();
        let rep = representable_in_box(g.entries(), &others);
        if *rep.last().expect("box is nonempty") {
            return fail(format!("{g} is spanned by the other generators"));
        }
    }
    let all: Vec<&[u64]> = gens.iter().map(FiniteIndex::entries).collect();
    let hi = vec![bound; k];
    let rep = representable_in_box(&hi, &all);
    for (pos, x) in BoxIter::new(hi).enumerate() {
        if !rep[pos] && in_cone(&x) {
            return fail(format!("{x:?} is in I_{k} but not spanned"));
        }
    }
    Ok(())
}
