//! Finite indices, partial sums and the `δ`/`Δ` statistics.
//!
//! A finite index `(e_1, …, e_m)` is binomid iff
//! `δ(i, j) = S_{i+j} − S_i − S_j ≥ 0` for every `i, j ≥ 1` with
//! `i + j ≤ m`, where `S_i` are the partial sums. Everything here is exact:
//! averages are [`Fraction`]s compared by cross-multiplication.
//!
//! Positions are 1-based throughout the public API, matching the usual
//! notation `e_1, e_2, …`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonempty finite sequence of nonnegative integers.
///
/// Construction checks that the total sum fits in an `i64`, so partial sums
/// and `δ` values of a `FiniteIndex` can never overflow.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteIndex(Vec<u64>);

impl FiniteIndex {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let mut total: i64 = 0;
        for &x in &entries {
            let x = i64::try_from(x).map_err(|_| Error::Overflow("index entries"))?;
            total = total
                .checked_add(x)
                .ok_or(Error::Overflow("partial sums"))?;
        }
        Ok(FiniteIndex(entries))
    }

    /// All-zero index of length `len`.
    pub fn zero(len: usize) -> Result<Self> {
        FiniteIndex::new(vec![0; len])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `e_i`, 1-based.
    pub fn get(&self, i: usize) -> Option<u64> {
        i.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Truncation `η|_k`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::range("prefix length", format!("{k} not in 1..={}", self.len())));
        }
        Ok(FiniteIndex(self.0[..k].to_vec()))
    }

    /// Componentwise sum of two indices of equal length.
    pub fn checked_add(&self, other: &FiniteIndex) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidArgument(format!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let entries = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("index sum")))
            .collect::<Result<Vec<_>>>()?;
        FiniteIndex::new(entries)
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

impl TryFrom<Vec<u64>> for FiniteIndex {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteIndex::new(v)
    }
}

impl From<FiniteIndex> for Vec<u64> {
    fn from(e: FiniteIndex) -> Self {
        e.0
    }
}

impl fmt::Debug for FiniteIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for FiniteIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, x) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Partial sums `(S_1, …, S_m)` of a [`FiniteIndex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSumTable(Vec<i64>);

impl PartialSumTable {
    /// `S_i`, 1-based. `S_0 = 0`.
    pub fn get(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.0[i - 1]
        }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Wraps sums that are already known to be nonnegative and monotone.
    pub(crate) fn from_monotone(sums: Vec<i64>) -> Self {
        debug_assert!(sums.first().is_none_or(|&s| s >= 0));
        debug_assert!(sums.windows(2).all(|w| w[0] <= w[1]));
        PartialSumTable(sums)
    }

    /// `δ(i, j)` without range checks. Cannot overflow: the table is
    /// monotone with entries in `[0, i64::MAX]`.
    pub(crate) fn delta_unchecked(&self, i: usize, j: usize) -> i64 {
        (self.get(i + j) - self.get(i)) - self.get(j)
    }
}

/// Computes `(S_1, …, S_m)`.
pub fn partial_sums(e: &FiniteIndex) -> PartialSumTable {
    // FiniteIndex::new bounds the total, so plain addition is safe here.
    let mut acc = 0i64;
    PartialSumTable(
        e.entries()
            .iter()
            .map(|&x| {
                acc += x as i64;
                acc
            })
            .collect(),
    )
}

/// `δ(i, j) = S_{i+j} − S_i − S_j`.
pub fn delta(e: &FiniteIndex, i: usize, j: usize) -> Result<i64> {
    if i == 0 || j == 0 || i + j > e.len() {
        return Err(Error::range(
            "split (i, j)",
            format!("({i}, {j}) with length {}", e.len()),
        ));
    }
    Ok(partial_sums(e).delta_unchecked(i, j))
}

/// `Δ(k) = min { δ(i, j) : i + j = k }`.
pub fn big_delta(e: &FiniteIndex, k: usize) -> Result<i64> {
    if k < 2 || k > e.len() {
        return Err(Error::range("k", format!("{k} not in 2..={}", e.len())));
    }
    Ok(min_split_delta(&partial_sums(e), k))
}

pub(crate) fn min_split_delta(sums: &PartialSumTable, k: usize) -> i64 {
    // δ is symmetric, so i ≤ k/2 covers every split.
    (1..=k / 2)
        .map(|i| sums.delta_unchecked(i, k - i))
        .min()
        .expect("k >= 2 has at least one split")
}

/// A failed `δ(i, j) ≥ 0` condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub value: i64,
}

/// Outcome of [`validate_binomid`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Converts a failed validation into [`Error::NotBinomid`].
    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::NotBinomid(self.violations))
        }
    }
}

/// Checks every `δ(i, j)` with `i + j ≤ m`. Violations are listed in
/// lexicographic order of `(i + j, i)`.
pub fn validate_binomid(e: &FiniteIndex) -> Validation {
    let sums = partial_sums(e);
    let m = e.len();
    let mut violations = Vec::new();
    for k in 2..=m {
        for i in 1..k {
            let value = sums.delta_unchecked(i, k - i);
            if value < 0 {
                violations.push(Violation { i, j: k - i, value });
            }
        }
    }
    Validation { violations }
}

pub fn is_binomid(e: &FiniteIndex) -> bool {
    let sums = partial_sums(e);
    (2..=e.len()).all(|k| min_split_delta(&sums, k) >= 0)
}

pub(crate) fn require_binomid(e: &FiniteIndex) -> Result<()> {
    validate_binomid(e).into_result()
}

/// A nonnegative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFraction")]
pub struct Fraction {
    num: u64,
    den: u64,
}

#[derive(Deserialize)]
struct RawFraction {
    num: u64,
    den: u64,
}

impl TryFrom<RawFraction> for Fraction {
    type Error = Error;

    fn try_from(raw: RawFraction) -> Result<Self> {
        Fraction::new(raw.num, raw.den)
    }
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = num.gcd(&den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The average `A_i = S_i / i` as an exact fraction.
pub fn average(sums: &PartialSumTable, i: usize) -> Fraction {
    debug_assert!(i >= 1);
    Fraction::new(sums.get(i) as u64, i as u64).expect("i >= 1")
}

/// `A_max` over the index together with the ascending set of positions
/// attaining it.
pub fn max_average(e: &FiniteIndex) -> Result<(Fraction, Vec<usize>)> {
    require_binomid(e)?;
    Ok(max_average_of(&partial_sums(e)))
}

pub(crate) fn max_average_of(sums: &PartialSumTable) -> (Fraction, Vec<usize>) {
    let mut best = average(sums, 1);
    let mut argmax = vec![1];
    for i in 2..=sums.len() {
        let a = average(sums, i);
        match a.cmp(&best) {
            Ordering::Greater => {
                best = a;
                argmax.clear();
                argmax.push(i);
            }
            Ordering::Equal => argmax.push(i),
            Ordering::Less => {}
        }
    }
    (best, argmax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(v: &[u64]) -> FiniteIndex {
        FiniteIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partial_sums_examples() {
        assert_eq!(partial_sums(&idx(&[0, 1, 1])).as_slice(), &[0, 1, 2]);
        assert_eq!(partial_sums(&idx(&[0, 1, 2, 1, 1])).as_slice(), &[0, 1, 3, 4, 5]);
        assert_eq!(partial_sums(&idx(&[0, 0, 0])).as_slice(), &[0, 0, 0]);
    }

    #[test]
    fn empty_and_overflowing_indices_are_rejected() {
        assert_eq!(FiniteIndex::new(vec![]), Err(Error::EmptyIndex));
        assert!(matches!(
            FiniteIndex::new(vec![u64::MAX]),
            Err(Error::Overflow(_))
        ));
        assert!(matches!(
            FiniteIndex::new(vec![i64::MAX as u64, 1]),
            Err(Error::Overflow(_))
        ));
        assert!(FiniteIndex::new(vec![i64::MAX as u64]).is_ok());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&idx(&[0, 1, 1]), 1, 2).unwrap(), 1);
        assert_eq!(delta(&idx(&[1, 0]), 1, 1).unwrap(), -1);
        for (i, j) in [(1, 1), (1, 2), (2, 1)] {
            assert_eq!(delta(&idx(&[0, 0, 0]), i, j).unwrap(), 0);
        }
        assert!(matches!(delta(&idx(&[0, 1]), 1, 2), Err(Error::Range { .. })));
        assert!(matches!(delta(&idx(&[0, 1]), 0, 1), Err(Error::Range { .. })));
    }

    #[test]
    fn delta_extremes_do_not_overflow() {
        let big = i64::MAX as u64;
        assert_eq!(delta(&idx(&[big, 0]), 1, 1).unwrap(), -i64::MAX);
    }

    #[test]
    fn big_delta_examples() {
        assert_eq!(big_delta(&idx(&[0, 1, 2, 1, 1]), 5).unwrap(), 1);
        assert_eq!(big_delta(&idx(&[0, 1, 1]), 2).unwrap(), 1);
        assert_eq!(big_delta(&idx(&[0, 0, 0]), 3).unwrap(), 0);
        assert!(big_delta(&idx(&[0, 0, 0]), 1).is_err());
        assert!(big_delta(&idx(&[0, 0, 0]), 4).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(validate_binomid(&idx(&[0, 1, 1])).is_ok());
        assert_eq!(
            validate_binomid(&idx(&[1, 0])).violations,
            vec![Violation { i: 1, j: 1, value: -1 }]
        );
        assert!(validate_binomid(&idx(&[0, 0, 0, 0])).is_ok());
    }

    #[test]
    fn violations_are_ordered_by_total_then_i() {
        // S = (3, 3, 3, 3): every split is negative.
        let v = validate_binomid(&idx(&[3, 0, 0, 0])).violations;
        let order: Vec<_> = v.iter().map(|v| (v.i, v.j)).collect();
        assert_eq!(
            order,
            vec![(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]
        );
    }

    #[test]
    fn max_average_examples() {
        let (a, arg) = max_average(&idx(&[0, 1, 1])).unwrap();
        assert_eq!((a, arg), (Fraction::new(2, 3).unwrap(), vec![3]));
        let (a, arg) = max_average(&idx(&[0, 2, 1])).unwrap();
        assert_eq!((a, arg), (Fraction::new(1, 1).unwrap(), vec![2, 3]));
        let (a, arg) = max_average(&idx(&[0, 0, 0])).unwrap();
        assert_eq!((a, arg), (Fraction::new(0, 1).unwrap(), vec![1, 2, 3]));
        assert!(matches!(
            max_average(&idx(&[1, 0])),
            Err(Error::NotBinomid(_))
        ));
    }

    #[test]
    fn fraction_is_reduced_and_serializes() {
        let f = Fraction::new(4, 6).unwrap();
        assert_eq!((f.num(), f.den()), (2, 3));
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"num":2,"den":3}"#);
        let back: Fraction = serde_json::from_str(r#"{"num":4,"den":6}"#).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Fraction>(r#"{"num":1,"den":0}"#).is_err());
        assert!(Fraction::new(1, 0).is_err());
    }

    #[test]
    fn finite_index_json() {
        let e: FiniteIndex = serde_json::from_str("[0,1,1]").unwrap();
        assert_eq!(e, idx(&[0, 1, 1]));
        assert_eq!(serde_json::to_string(&e).unwrap(), "[0,1,1]");
        assert!(serde_json::from_str::<FiniteIndex>("[]").is_err());
        assert!(serde_json::from_str::<FiniteIndex>("[-1]").is_err());
    }

    fn binomid_strategy(max_len: usize) -> impl Strategy<Value = FiniteIndex> {
        // Build S_t ≥ max(S_{t-1}, S_i + S_{t-i}) plus random slack.
        (1..=max_len)
            .prop_flat_map(|len| proptest::collection::vec(0u64..4, len))
            .prop_map(|slack| {
                let mut sums: Vec<i64> = Vec::with_capacity(slack.len());
                for (t, s) in slack.iter().enumerate() {
                    let k = t + 1;
                    let mut lo = if k > 1 { sums[k - 2] } else { 0 };
                    for i in 1..k {
                        lo = lo.max(sums[i - 1] + sums[k - i - 1]);
                    }
                    sums.push(lo + *s as i64);
                }
                let mut prev = 0;
                let entries = sums
                    .iter()
                    .map(|&s| {
                        let e = (s - prev) as u64;
                        prev = s;
                        e
                    })
                    .collect();
                FiniteIndex::new(entries).unwrap()
            })
    }

    proptest! {
        #[test]
        fn fraction_order_matches_cross_multiplication(
            a in 0u64..1000, b in 1u64..1000, c in 0u64..1000, d in 1u64..1000
        ) {
            let x = Fraction::new(a, b).unwrap();
            let y = Fraction::new(c, d).unwrap();
            prop_assert_eq!(x.cmp(&y), (a * d).cmp(&(c * b)));
            prop_assert_eq!(x == y, a * d == c * b);
        }

        #[test]
        fn generated_indices_are_binomid(e in binomid_strategy(8)) {
            prop_assert!(validate_binomid(&e).is_ok());
            prop_assert!(is_binomid(&e));
            let sums = partial_sums(&e);
            for i in 1..e.len() {
                for j in 1..=e.len() - i {
                    prop_assert!(delta(&e, i, j).unwrap() >= 0);
                }
            }
            // A_k ≤ A_{kn}
            for k in 1..=e.len() {
                for n in 1..=e.len() / k {
                    prop_assert!(average(&sums, k) <= average(&sums, k * n));
                }
            }
        }

        #[test]
        fn delta_is_additive(pair in (1usize..8).prop_flat_map(|n| {
            (binomid_strategy(n).prop_filter("len", move |e| e.len() == n),
             binomid_strategy(n).prop_filter("len", move |e| e.len() == n))
        })) {
            let (e, g) = pair;
            let s = e.checked_add(&g).unwrap();
            for i in 1..s.len() {
                for j in 1..=s.len() - i {
                    prop_assert_eq!(
                        delta(&s, i, j).unwrap(),
                        delta(&e, i, j).unwrap() + delta(&g, i, j).unwrap()
                    );
                }
            }
            for k in 2..=s.len() {
                prop_assert!(big_delta(&s, k).unwrap() >= big_delta(&e, k).unwrap() + big_delta(&g, k).unwrap());
            }
        }

        #[test]
        fn validation_agrees_with_big_delta(v in proptest::collection::vec(0u64..4, 1..7)) {
            let e = FiniteIndex::new(v).unwrap();
            let via_delta = (2..=e.len()).all(|k| big_delta(&e, k).unwrap() >= 0);
            prop_assert_eq!(validate_binomid(&e).is_ok(), via_delta);
            prop_assert_eq!(is_binomid(&e), via_delta);
        }

        #[test]
        fn partial_sums_are_injective(
            v in proptest::collection::vec(0u64..3, 4),
            w in proptest::collection::vec(0u64..3, 4)
        ) {
            let e = FiniteIndex::new(v.clone()).unwrap();
            let f = FiniteIndex::new(w.clone()).unwrap();
            prop_assert_eq!(partial_sums(&e) == partial_sums(&f), v == w);
        }

        #[test]
        fn raising_an_entry_raises_the_total(
            v in proptest::collection::vec(0u64..5, 1..6),
            pos in 0usize..6, bump in 1u64..3
        ) {
            let e = FiniteIndex::new(v.clone()).unwrap();
            let mut w = v;
            let p = pos % w.len();
            w[p] += bump;
            let f = FiniteIndex::new(w).unwrap();
            prop_assert!(partial_sums(&e).as_slice().last() < partial_sums(&f).as_slice().last());
        }
    }
}
