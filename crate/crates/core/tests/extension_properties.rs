use binomid::extension::{canonical_form, extend, minimal_period, preperiod_bound, witness};
use binomid::index::{self, average, max_average, partial_sums, FiniteIndex, Fraction};
use binomid::monoid::{atomic_decomposition, is_atomic};
use binomid::EventuallyPeriodicIndex;

/// Every index of length 1..=max_len with entries in 0..=max.
fn all_indices(max_len: usize, max: u64) -> Vec<FiniteIndex> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|v| (0..=max).map(move |x| [v.as_slice(), &[x]].concat()))
            .collect();
        out.extend(layer.iter().cloned().map(|v| FiniteIndex::new(v).unwrap()));
    }
    out
}

fn binomid_indices(max_len: usize, max: u64) -> Vec<FiniteIndex> {
    all_indices(max_len, max).into_iter().filter(index::is_binomid).collect()
}

/// Appends, one position at a time, the smallest entry that keeps the
/// sequence binomid.
fn greedy_extension(e: &[u64], horizon: usize) -> Vec<u64> {
    let mut x = e.to_vec();
    while x.len() < horizon {
        let next = (0..)
            .find(|&v| {
                let mut y = x.clone();
                y.push(v);
                index::is_binomid(&FiniteIndex::new(y).unwrap())
            })
            .unwrap();
        x.push(next);
    }
    x
}

#[test]
fn extend_matches_greedy_oracle() {
    for e in binomid_indices(5, 3) {
        let g = greedy_extension(e.entries(), 40);
        for h in e.len()..=40 {
            assert_eq!(extend(&e, h).unwrap().entries(), &g[..h], "{e} to {h}");
        }
    }
}

#[test]
fn averages_never_exceed_prefix_maximum() {
    for e in binomid_indices(5, 3) {
        let (a_max, argmax) = max_average(&e).unwrap();
        let ext = extend(&e, 120).unwrap();
        let sums = partial_sums(&ext);
        for i in 1..=120 {
            assert!(average(&sums, i) <= a_max, "{e} at {i}");
        }
        // Multiples of an argmax position attain A_max.
        let k = argmax[0];
        for n in 1..=120 / k {
            assert_eq!(average(&sums, n * k), a_max);
        }
    }
}

#[test]
fn period_is_stable_under_longer_prefixes() {
    for e in binomid_indices(4, 3) {
        let p = minimal_period(&e).unwrap();
        let c = canonical_form(&e).unwrap();
        for len in e.len() + 1..=e.len() + 6 {
            let longer = extend(&e, len).unwrap();
            assert_eq!(minimal_period(&longer).unwrap(), p, "{e} as {longer}");
            assert_eq!(canonical_form(&longer).unwrap(), c);
        }
    }
}

#[test]
fn canonical_form_agrees_with_materialized_prefix() {
    for e in binomid_indices(5, 2) {
        let c = canonical_form(&e).unwrap();
        assert!(c.preperiod().len() <= preperiod_bound(&e).unwrap());
        assert_eq!(c.period().len(), minimal_period(&e).unwrap());
        let h = c.preperiod().len() + 3 * c.period().len() + 10;
        assert_eq!(c.prefix(h), extend(&e, h).unwrap().entries());
    }
}

#[test]
fn witnesses_satisfy_both_equations() {
    for e in binomid_indices(4, 3) {
        let sums = partial_sums(&extend(&e, 90).unwrap());
        for k in 1..=90 {
            let w = witness(&e, k).unwrap();
            let (weight, value) = w.evaluate(&e).unwrap();
            assert_eq!((weight, value), (k as u128, sums.get(k) as i128), "{e}, k={k}");
        }
    }
}

#[test]
fn fractions_compare_by_cross_multiplication() {
    let vals: Vec<Fraction> = (0..6u64)
        .flat_map(|n| (1..6u64).map(move |d| Fraction::new(n, d).unwrap()))
        .collect();
    for a in &vals {
        for b in &vals {
            let lhs = a.num() as u128 * b.den() as u128;
            let rhs = b.num() as u128 * a.den() as u128;
            assert_eq!(a.cmp(b), lhs.cmp(&rhs));
        }
    }
}

/// Atoms independently re-checked: no split of the prefix into two nonzero
/// binomid parts reproduces the extension.
fn has_decomposition(e: &FiniteIndex) -> bool {
    let target = canonical_form(e).unwrap();
    let k = e.len();
    all_indices(k, *e.entries().iter().max().unwrap())
        .into_iter()
        .filter(|a| a.len() == k && a.entries().iter().zip(e.entries()).all(|(x, y)| x <= y))
        .any(|a| {
            let b = FiniteIndex::new(e.entries().iter().zip(a.entries()).map(|(x, y)| x - y).collect()).unwrap();
            !a.is_zero()
                && !b.is_zero()
                && index::is_binomid(&a)
                && index::is_binomid(&b)
                && canonical_form(&a).unwrap().checked_add(&canonical_form(&b).unwrap()).unwrap() == target
        })
}

#[test]
fn basis_of_lexmin_monoid_is_consistent() {
    for e in binomid_indices(3, 2) {
        if e.is_zero() {
            continue;
        }
        let report = is_atomic(&e).unwrap();
        assert_eq!(report.atomic, !has_decomposition(&e), "{e}");
        let parts = atomic_decomposition(&e).unwrap();
        let mut sum = EventuallyPeriodicIndex::zero();
        for p in &parts {
            assert!(is_atomic(p).unwrap().atomic);
            sum = sum.checked_add(&canonical_form(p).unwrap()).unwrap();
        }
        assert_eq!(sum, canonical_form(&e).unwrap());
        if report.atomic {
            assert_eq!(parts, vec![e.clone()]);
        }
    }
}
