//! Atoms of the monoid of lex-minimal extensions.
//!
//! If `η̃ = η_1 + η_2` with both summands binomid, each summand is itself the
//! lex-minimal extension of its length-`k` prefix. Every decomposition of the
//! extension of a length-`k` prefix `e` therefore comes from a split
//! `e = μ_1 + μ_2` into binomid prefixes with `μ̃_1 + μ̃_2 = ẽ`, and a nonzero
//! summand has a nonzero prefix (the only extension of `0^k` is `0^∞`). That
//! reduces atomicity to a finite search over prefix splits.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{self, canonical_form};
use crate::hilbert::BoxIter;
use crate::index::{self, FiniteIndex};
use crate::periodic::EventuallyPeriodicIndex;

/// `l(k) = k³ + lcm(1, …, k)`.
pub fn l_of_k(k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::range("k", "l(k) needs k >= 1"));
    }
    let overflow = || Error::Overflow("l(k)");
    let cube = k
        .checked_mul(k)
        .and_then(|v| v.checked_mul(k))
        .ok_or_else(overflow)?;
    let mut lcm = 1usize;
    for i in 2..=k {
        lcm = (lcm / lcm.gcd(&i)).checked_mul(i).ok_or_else(overflow)?;
    }
    cube.checked_add(lcm).ok_or_else(overflow)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicityReport {
    pub atomic: bool,
    /// Prefixes `(μ_1, μ_2)` whose extensions sum to the input's extension.
    pub witness: Option<(FiniteIndex, FiniteIndex)>,
}

/// Caches canonical forms during a search.
#[derive(Default)]
struct Canon(HashMap<FiniteIndex, EventuallyPeriodicIndex>);

impl Canon {
    fn get(&mut self, e: &FiniteIndex) -> Result<EventuallyPeriodicIndex> {
        if let Some(c) = self.0.get(e) {
            return Ok(c.clone());
        }
        let c = canonical_form(e)?;
        self.0.insert(e.clone(), c.clone());
        Ok(c)
    }
}

fn require_nonzero_binomid(e: &FiniteIndex) -> Result<()> {
    index::require_binomid(e)?;
    if e.is_zero() {
        return Err(Error::InvalidArgument(
            "the zero index has no atomic decomposition".into(),
        ));
    }
    Ok(())
}

/// Binomid splits `e = μ_1 + μ_2` with both parts nonzero, `μ_1` in
/// increasing lexicographic order.
fn binomid_splits(e: &FiniteIndex) -> impl Iterator<Item = (FiniteIndex, FiniteIndex)> + '_ {
    BoxIter::new(e.entries().to_vec()).filter_map(move |a| {
        let b: Vec<u64> = e.entries().iter().zip(&a).map(|(x, y)| x - y).collect();
        let a = FiniteIndex::new(a).ok()?;
        let b = FiniteIndex::new(b).ok()?;
        if a.is_zero() || b.is_zero() || !index::is_binomid(&a) || !index::is_binomid(&b) {
            return None;
        }
        Some((a, b))
    })
}

fn find_split(e: &FiniteIndex, canon: &mut Canon) -> Result<Option<(FiniteIndex, FiniteIndex)>> {
    let target = canon.get(e)?;
    for (a, b) in binomid_splits(e) {
        if canon.get(&a)?.checked_add(&canon.get(&b)?)? == target {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

/// Decides whether the lex-minimal extension of `e` is atomic.
pub fn is_atomic(e: &FiniteIndex) -> Result<AtomicityReport> {
    require_nonzero_binomid(e)?;
    let witness = find_split(e, &mut Canon::default())?;
    Ok(AtomicityReport {
        atomic: witness.is_none(),
        witness,
    })
}

/// Splits the extension of `e` into atomic extensions, returned as their
/// length-`k` prefixes. Always recurses on the lexicographically smallest
/// first summand.
pub fn atomic_decomposition(e: &FiniteIndex) -> Result<Vec<FiniteIndex>> {
    require_nonzero_binomid(e)?;
    let mut canon = Canon::default();
    let mut atoms = Vec::new();
    let mut stack = vec![e.clone()];
    while let Some(x) = stack.pop() {
        match find_split(&x, &mut canon)? {
            Some((a, b)) => {
                stack.push(b);
                stack.push(a);
            }
            None => atoms.push(x),
        }
    }
    Ok(atoms)
}

/// Atoms whose length-`k` prefix has entries at most `entry_bound`, one per
/// distinct extension. Only a bounded slice of `Atom ∩ L_k(𝕀_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomCatalog {
    pub k: usize,
    pub entry_bound: u64,
    pub atoms: Vec<EventuallyPeriodicIndex>,
    pub prefixes: Vec<FiniteIndex>,
}

pub fn enumerate_atoms(k: usize, entry_bound: u64) -> Result<AtomCatalog> {
    if k == 0 {
        return Err(Error::range("k", "prefix length must be positive"));
    }
    let mut canon = Canon::default();
    let mut seen = BTreeSet::new();
    let mut atoms = Vec::new();
    let mut prefixes = Vec::new();
    for v in BoxIter::new(vec![entry_bound; k]) {
        let e = FiniteIndex::new(v)?;
        if e.is_zero() || !index::is_binomid(&e) {
            continue;
        }
        let c = canon.get(&e)?;
        if seen.contains(&c) {
            continue;
        }
        if find_split(&e, &mut canon)?.is_none() {
            seen.insert(c.clone());
            atoms.push(c);
            prefixes.push(e);
        }
    }
    Ok(AtomCatalog {
        k,
        entry_bound,
        atoms,
        prefixes,
    })
}

/// Whether `target` is a nonnegative integer combination of `generators`.
pub fn in_span(target: &EventuallyPeriodicIndex, generators: &[EventuallyPeriodicIndex]) -> Result<bool> {
    Ok(span_coefficients(target, generators)?.is_some())
}

/// Coefficients `c` with `target = Σ c_i·g_i`, if any exist.
///
/// Every such sum is eventually periodic with preperiod at most the largest
/// preperiod and period dividing the lcm of the periods, so agreement on a
/// prefix of length `max pre + lcm per` is equality.
pub fn span_coefficients(
    target: &EventuallyPeriodicIndex,
    generators: &[EventuallyPeriodicIndex],
) -> Result<Option<Vec<u64>>> {
    if generators.is_empty() {
        return Err(Error::InvalidArgument("no generators given".into()));
    }
    if generators.iter().any(EventuallyPeriodicIndex::is_zero) {
        return Err(Error::InvalidArgument("generators must be nonzero".into()));
    }
    let all = std::iter::once(target).chain(generators);
    let max_pre = all.clone().map(|x| x.preperiod().len()).max().unwrap_or(0);
    let mut lcm = 1usize;
    for x in all {
        let p = x.period().len();
        lcm = (lcm / lcm.gcd(&p))
            .checked_mul(p)
            .ok_or(Error::Overflow("span horizon"))?;
    }
    let horizon = max_pre.checked_add(lcm).ok_or(Error::Overflow("span horizon"))?;

    let residual = target.prefix(horizon);
    let gens: Vec<Vec<u64>> = generators.iter().map(|g| g.prefix(horizon)).collect();
    let mut coeffs = vec![0u64; gens.len()];
    let mut dead = HashSet::new();
    if search_span(0, residual, &gens, &mut coeffs, &mut dead) {
        Ok(Some(coeffs))
    } else {
        Ok(None)
    }
}

fn search_span(
    i: usize,
    residual: Vec<u64>,
    gens: &[Vec<u64>],
    coeffs: &mut [u64],
    dead: &mut HashSet<(usize, Vec<u64>)>,
) -> bool {
    if i == gens.len() {
        return residual.iter().all(|&x| x == 0);
    }
    if dead.contains(&(i, residual.clone())) {
        return false;
    }
    let g = &gens[i];
    let max = g
        .iter()
        .zip(&residual)
        .filter(|(&gv, _)| gv > 0)
        .map(|(&gv, &r)| r / gv)
        .min()
        .expect("generators are nonzero on the horizon");
    for c in (0..=max).rev() {
        let next: Vec<u64> = residual.iter().zip(g).map(|(&r, &gv)| r - c * gv).collect();
        coeffs[i] = c;
        if search_span(i + 1, next, gens, coeffs, dead) {
            return true;
        }
    }
    coeffs[i] = 0;
    dead.insert((i, residual));
    false
}

/// A split assignment `π(i) < i` with `S_i = S_{π(i)} + S_{i−π(i)}` on the
/// lex-minimal extension, for every `i ∈ (k, l(k)]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    pub k: usize,
    pub l: usize,
    pub assignments: BTreeMap<usize, usize>,
}

impl PathWitness {
    /// Re-evaluates every equation against a fresh extension of `e`.
    pub fn verify(&self, e: &FiniteIndex) -> Result<bool> {
        if e.len() != self.k {
            return Ok(false);
        }
        let ext = extension::extend(e, self.l)?;
        let sums = index::partial_sums(&ext);
        let expected: Vec<usize> = (self.k + 1..=self.l).collect();
        let keys: Vec<usize> = self.assignments.keys().copied().collect();
        Ok(keys == expected
            && self.assignments.iter().all(|(&i, &p)| {
                p >= 1 && p < i && sums.get(i) - sums.get(p) - sums.get(i - p) == 0
            }))
    }
}

pub fn path_witness(e: &FiniteIndex) -> Result<PathWitness> {
    index::require_binomid(e)?;
    let k = e.len();
    let l = l_of_k(k)?;
    let sums = extension::extended_sums(e, l)?;
    let assignments = (k + 1..=l)
        .map(|i| {
            let p = (1..i)
                .find(|&p| sums.get(i) == sums.get(p) + sums.get(i - p))
                .expect("Δ vanishes beyond the prefix");
            (i, p)
        })
        .collect();
    Ok(PathWitness { k, l, assignments })
}

/// Enumerates every split of `ẽ|_horizon` into two binomid sequences and
/// checks that both parts have `Δ(k') = 0` for `k < k' ≤ horizon`.
///
/// The search runs position by position; past the prefix a vanishing
/// `δ` of the total forces the split, so the branching stays at the prefix.
pub fn decomp_closure_check(e: &FiniteIndex, horizon: usize) -> Result<bool> {
    let k = e.len();
    let h = horizon.max(k);
    let total = extension::extend(e, h)?;
    let mut search = ClosureSearch {
        k,
        total: total.entries(),
        a: Vec::with_capacity(h),
        b: Vec::with_capacity(h),
        decompositions: 0,
    };
    Ok(search.run())
}

struct ClosureSearch<'a> {
    k: usize,
    total: &'a [u64],
    /// Partial sums of the two parts.
    a: Vec<i64>,
    b: Vec<i64>,
    decompositions: u64,
}

impl ClosureSearch<'_> {
    fn sum(v: &[i64], i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            v[i - 1]
        }
    }

    fn delta(v: &[i64], i: usize, j: usize) -> i64 {
        Self::sum(v, i + j) - Self::sum(v, i) - Self::sum(v, j)
    }

    /// `Δ(n)` over the splits of `n` is nonnegative for both parts, where `n`
    /// is the current length.
    fn newest_ok(&self) -> bool {
        let n = self.a.len();
        (1..=n / 2).all(|i| Self::delta(&self.a, i, n - i) >= 0 && Self::delta(&self.b, i, n - i) >= 0)
    }

    fn lexmin_beyond_prefix(v: &[i64], k: usize) -> bool {
        (k + 1..=v.len()).all(|n| (1..=n / 2).map(|i| Self::delta(v, i, n - i)).min() == Some(0))
    }

    fn run(&mut self) -> bool {
        let pos = self.a.len();
        if pos == self.total.len() {
            self.decompositions += 1;
            return Self::lexmin_beyond_prefix(&self.a, self.k)
                && Self::lexmin_beyond_prefix(&self.b, self.k);
        }
        let t = self.total[pos] as i64;
        let (sa, sb) = (Self::sum(&self.a, pos), Self::sum(&self.b, pos));
        for x in 0..=t {
            self.a.push(sa + x);
            self.b.push(sb + t - x);
            let ok = !self.newest_ok() || self.run();
            self.a.pop();
            self.b.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v: &[u64]) -> FiniteIndex {
        FiniteIndex::new(v.to_vec()).unwrap()
    }

    fn ep(pre: &[u64], per: &[u64]) -> EventuallyPeriodicIndex {
        EventuallyPeriodicIndex::new(pre.to_vec(), per.to_vec()).unwrap()
    }

    #[test]
    fn l_of_k_examples() {
        assert_eq!(l_of_k(1).unwrap(), 2);
        assert_eq!(l_of_k(2).unwrap(), 10);
        assert_eq!(l_of_k(3).unwrap(), 33);
        assert_eq!(l_of_k(4).unwrap(), 76);
        assert!(l_of_k(0).is_err());
        assert!(matches!(l_of_k(100), Err(Error::Overflow(_))));
    }

    #[test]
    fn atomicity_examples() {
        for atom in [&[0, 1, 1][..], &[0, 0, 1], &[0, 0, 0, 1, 1]] {
            let r = is_atomic(&idx(atom)).unwrap();
            assert!(r.atomic, "{atom:?}");
            assert_eq!(r.witness, None);
        }
        let r = is_atomic(&idx(&[2])).unwrap();
        assert!(!r.atomic);
        assert_eq!(r.witness, Some((idx(&[1]), idx(&[1]))));
        assert!(matches!(is_atomic(&idx(&[0, 0])), Err(Error::InvalidArgument(_))));
        assert!(matches!(is_atomic(&idx(&[1, 0])), Err(Error::NotBinomid(_))));
    }

    #[test]
    fn nonunique_example_parts_are_atomic() {
        for e in [&[0, 1, 1][..], &[0, 1, 2, 1, 1], &[0, 2, 1], &[0, 0, 2, 0, 1]] {
            assert!(is_atomic(&idx(e)).unwrap().atomic, "{e:?}");
        }
    }

    fn check_decomposition(e: &FiniteIndex) {
        let parts = atomic_decomposition(e).unwrap();
        let mut sum = EventuallyPeriodicIndex::zero();
        for p in &parts {
            assert!(index::is_binomid(p));
            assert!(is_atomic(p).unwrap().atomic, "{p} should be atomic");
            sum = sum.checked_add(&canonical_form(p).unwrap()).unwrap();
        }
        assert_eq!(sum, canonical_form(e).unwrap());
        let total = *index::partial_sums(e).as_slice().last().unwrap();
        assert!(parts.len() as i64 <= total);
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(atomic_decomposition(&idx(&[2])).unwrap(), vec![idx(&[1]), idx(&[1])]);
        assert_eq!(atomic_decomposition(&idx(&[0, 1, 1])).unwrap(), vec![idx(&[0, 1, 1])]);
        check_decomposition(&idx(&[0, 2, 3, 1, 2]));
        check_decomposition(&idx(&[3, 3, 3]));
        check_decomposition(&idx(&[0, 2, 2, 2]));
        assert!(atomic_decomposition(&idx(&[0, 0])).is_err());
    }

    #[test]
    fn span_examples() {
        let gens = [ep(&[], &[1]), ep(&[], &[0, 1]), ep(&[], &[0, 0, 1])];
        assert!(!in_span(&ep(&[], &[0, 1, 1]), &gens).unwrap());
        assert_eq!(span_coefficients(&ep(&[], &[2]), &[ep(&[], &[1])]).unwrap(), Some(vec![2]));
        assert!(in_span(&EventuallyPeriodicIndex::zero(), &gens).unwrap());
        assert!(in_span(&ep(&[], &[1, 2, 2, 1, 2, 2]), &gens).is_ok());
        assert!(matches!(
            in_span(&ep(&[], &[1]), &[EventuallyPeriodicIndex::zero()]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(in_span(&ep(&[], &[1]), &[]).is_err());
    }

    #[test]
    fn span_finds_nonunique_sum() {
        let gens: Vec<_> = [&[0, 1, 1][..], &[0, 1, 2, 1, 1], &[0, 2, 1], &[0, 0, 2, 0, 1]]
            .iter()
            .map(|e| canonical_form(&idx(e)).unwrap())
            .collect();
        let target = gens[0].checked_add(&gens[1]).unwrap();
        let c = span_coefficients(&target, &gens).unwrap().unwrap();
        let mut sum = EventuallyPeriodicIndex::zero();
        for (g, &n) in gens.iter().zip(&c) {
            for _ in 0..n {
                sum = sum.checked_add(g).unwrap();
            }
        }
        assert_eq!(sum, target);
    }

    #[test]
    fn path_examples() {
        let w = path_witness(&idx(&[0, 1, 1])).unwrap();
        assert_eq!((w.k, w.l), (3, 33));
        assert_eq!(w.assignments[&4], 1);
        assert!(w.verify(&idx(&[0, 1, 1])).unwrap());

        let w = path_witness(&idx(&[0])).unwrap();
        assert_eq!(w.assignments.values().copied().collect::<Vec<_>>(), vec![1]);

        let w = path_witness(&idx(&[1, 2])).unwrap();
        assert_eq!(w.assignments.len(), 8);
        assert!(w.verify(&idx(&[1, 2])).unwrap());

        let mut bad = path_witness(&idx(&[0, 1, 1])).unwrap();
        bad.assignments.insert(5, 4);
        // S_5 = 3, S_4 + S_1 = 2
        assert!(!bad.verify(&idx(&[0, 1, 1])).unwrap());
    }

    #[test]
    fn closure_examples() {
        assert!(decomp_closure_check(&idx(&[0, 2, 3]), l_of_k(3).unwrap()).unwrap());
        assert!(decomp_closure_check(&idx(&[2]), l_of_k(1).unwrap()).unwrap());
        assert!(decomp_closure_check(&idx(&[0, 0, 0]), 40).unwrap());
        assert!(decomp_closure_check(&idx(&[0, 2, 3, 1, 2]), 60).unwrap());
    }

    #[test]
    fn closure_search_counts_prefix_splits() {
        // Each decomposition of the materialized extension is determined by
        // its prefix split, so the count equals the number of prefix splits
        // (zero parts included) whose extensions sum to the extension of e.
        for e in [&[0, 2, 3][..], &[0, 2, 2], &[1, 2, 2]] {
            let e = idx(e);
            let h = l_of_k(3).unwrap();
            let ext = extension::extend(&e, h).unwrap();
            let mut search = ClosureSearch {
                k: 3,
                total: ext.entries(),
                a: vec![],
                b: vec![],
                decompositions: 0,
            };
            assert!(search.run());
            let target = canonical_form(&e).unwrap();
            let matching = BoxIter::new(e.entries().to_vec())
                .filter(|a| {
                    let b: Vec<u64> = e.entries().iter().zip(a).map(|(x, y)| x - y).collect();
                    let (a, b) = (idx(a), idx(&b));
                    index::is_binomid(&a)
                        && index::is_binomid(&b)
                        && canonical_form(&a).unwrap().checked_add(&canonical_form(&b).unwrap()).unwrap() == target
                })
                .count() as u64;
            assert_eq!(search.decompositions, matching, "{e}");
        }
    }

    #[test]
    fn atom_catalog_small() {
        let cat = enumerate_atoms(2, 2).unwrap();
        // (1,2)^∞ = 1^∞ + (0,1)^∞ and (0,2), (2,2) are doubles.
        assert_eq!(cat.prefixes, vec![idx(&[0, 1]), idx(&[1, 1])]);
        assert_eq!(cat.atoms.len(), 2);
    }
}
