//! Character-level Levenshtein distance.
//!
//! Unit costs for insertion, deletion and substitution. The unbounded route
//! is a two-row Wagner-Fischer table; the bounded route only fills the
//! diagonal band `|i - j| <= bound` and exits as soon as every cell of a row
//! exceeds the bound.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    /// The true distance is strictly greater than the bound.
    Exceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub distance: Distance,
    pub bound: Option<usize>,
}

impl DistanceResult {
    pub fn exact(self) -> Option<usize> {
        match self.distance {
            Distance::Exact(d) => Some(d),
            Distance::Exceeded => None,
        }
    }

    pub fn is_exceeded(self) -> bool {
        self.distance == Distance::Exceeded
    }
}

/// Edit distance between `a` and `b` in characters. With a bound, returns
/// [`Distance::Exceeded`] instead of any distance above it.
pub fn levenshtein(a: &str, b: &str, bound: Option<usize>) -> DistanceResult {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b, bound)
}

pub fn levenshtein_chars(a: &[char], b: &[char], bound: Option<usize>) -> DistanceResult {
    let distance = match bound {
        None => Distance::Exact(unbounded(a, b)),
        Some(k) => banded(a, b, k).0,
    };
    DistanceResult { distance, bound }
}

fn trim_common<'a>(mut a: &'a [char], mut b: &'a [char]) -> (&'a [char], &'a [char]) {
    let prefix = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    a = &a[prefix..];
    b = &b[prefix..];
    let suffix = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    (&a[..a.len() - suffix], &b[..b.len() - suffix])
}

fn unbounded(a: &[char], b: &[char]) -> usize {
    let (a, b) = trim_common(a, b);
    // rows over the longer string, columns over the shorter one
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut prev: Vec<usize> = (0..=short.len()).collect();
    let mut cur = vec![0usize; short.len() + 1];
    for (i, &lc) in long.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &sc) in short.iter().enumerate() {
            let sub = prev[j] + usize::from(lc != sc);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Banded evaluation. Returns the result and the number of DP cells filled.
fn banded(a: &[char], b: &[char], k: usize) -> (Distance, usize) {
    let (a, b) = trim_common(a, b);
    // rows over the shorter string so the band has at most 2k+1 cells per row
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (n, m) = (short.len(), long.len());
    if m - n > k {
        return (Distance::Exceeded, 0);
    }
    if n == 0 {
        return (Distance::Exact(m), 0);
    }
    let inf = k + 1;
    let mut prev = vec![inf; m + 1];
    let mut cur = vec![inf; m + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(m.min(k) + 1) {
        *cell = j;
    }
    let mut cells = m.min(k) + 1;
    for i in 1..=n {
        let lo = i.saturating_sub(k);
        let hi = m.min(i + k);
        let sc = short[i - 1];
        let (start, mut left) = if lo == 0 {
            cur[0] = i.min(inf);
            (1, cur[0])
        } else {
            (lo, inf)
        };
        let mut row_min = left;
        let cells_in_row = cur[start..=hi]
            .iter_mut()
            .zip(prev[start - 1..=hi].windows(2))
            .zip(&long[start - 1..hi]);
        for ((cell, up), &lc) in cells_in_row {
            let diag = up[0] + usize::from(sc != lc);
            let value = diag.min(up[1] + 1).min(left + 1).min(inf);
            *cell = value;
            left = value;
            row_min = row_min.min(value);
        }
        cells += hi - lo + 1;
        if row_min > k {
            return (Distance::Exceeded, cells);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    match prev[m] {
        d if d <= k => (Distance::Exact(d), cells),
        _ => (Distance::Exceeded, cells),
    }
}

/// Distance divided by the longer string's length in characters, in `[0, 1]`.
pub fn normalized_levenshtein(a: &str, b: &str) -> Result<f64> {
    let la = a.chars().count();
    let lb = b.chars().count();
    let longest = la.max(lb);
    if longest == 0 {
        return Err(Error::EmptyComparison);
    }
    let d = unbounded(
        &a.chars().collect::<Vec<_>>(),
        &b.chars().collect::<Vec<_>>(),
    );
    Ok(normalize_distance(d, longest))
}

#[inline]
pub(crate) fn normalize_distance(distance: usize, longest: usize) -> f64 {
    distance as f64 / longest as f64
}

/// Absolute difference of the two lengths in characters; a lower bound on
/// the edit distance.
pub fn length_difference(a: &str, b: &str) -> usize {
    a.chars().count().abs_diff(b.chars().count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(a: &str, b: &str) -> usize {
        levenshtein(a, b, None).exact().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(d("abc", "abc"), 0);
        assert_eq!(d("", "abc"), 3);
        assert_eq!(d("kitten", "sitting"), 3);
        assert_eq!(
            levenshtein("kitten", "sitting", Some(2)).distance,
            Distance::Exceeded
        );
        assert_eq!(levenshtein("kitten", "sitting", Some(3)).exact(), Some(3));
        assert_eq!(levenshtein("", "", Some(0)).exact(), Some(0));
        assert_eq!(levenshtein("abc", "", Some(2)).distance, Distance::Exceeded);
        assert_eq!(d("flaw", "lawn"), 2);
        assert_eq!(d("naïve", "naive"), 1);
    }

    #[test]
    fn normalized_examples() {
        assert_eq!(normalized_levenshtein("abc", "abc").unwrap(), 0.0);
        assert_eq!(normalized_levenshtein("", "abcd").unwrap(), 1.0);
        assert_eq!(normalized_levenshtein("abcd", "abce").unwrap(), 0.25);
        assert!(matches!(
            normalized_levenshtein("", ""),
            Err(Error::EmptyComparison)
        ));
        assert_eq!(normalized_levenshtein("abc", "xyz").unwrap(), 1.0);
    }

    #[test]
    fn length_difference_examples() {
        assert_eq!(length_difference("abc", "abc"), 0);
        assert_eq!(length_difference("abc", "a"), 2);
        assert_eq!(length_difference("é", "ab"), 1);
    }

    #[test]
    fn band_visits_bounded_cells() {
        let a: Vec<char> = "the quick brown fox jumps over the lazy dog again and again"
            .chars()
            .collect();
        let b: Vec<char> = "a quick brown cat jumped over one lazy dog once and again!"
            .chars()
            .collect();
        for k in [0usize, 1, 3, 7, 20] {
            let (_, cells) = banded(&a, &b, k);
            assert!(
                cells <= (2 * k + 1) * (a.len().min(b.len()) + 1),
                "k={k} cells={cells}"
            );
        }
    }

    #[test]
    fn band_exits_early_on_disjoint_strings() {
        let a: Vec<char> = "a".repeat(500).chars().collect();
        let b: Vec<char> = "b".repeat(500).chars().collect();
        let (dist, cells) = banded(&a, &b, 5);
        assert_eq!(dist, Distance::Exceeded);
        assert!(cells < 100, "cells={cells}");
    }

    proptest! {
        #[test]
        fn metric_axioms(a in "[abc]{0,8}", b in "[abc]{0,8}", c in "[abc]{0,8}") {
            prop_assert_eq!(d(&a, &a), 0);
            prop_assert_eq!(d(&a, &b), d(&b, &a));
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
            prop_assert!(length_difference(&a, &b) <= d(&a, &b));
        }

        #[test]
        fn banded_agrees_when_within_bound(a in "\\PC{0,20}", b in "\\PC{0,20}", k in 0usize..25) {
            let full = d(&a, &b);
            let banded = levenshtein(&a, &b, Some(k));
            if full <= k {
                prop_assert_eq!(banded.exact(), Some(full));
            } else {
                prop_assert!(banded.is_exceeded());
            }
        }

        #[test]
        fn normalized_in_unit_interval(a in "\\PC{0,20}", b in "\\PC{1,20}") {
            let x = normalized_levenshtein(&a, &b).unwrap();
            prop_assert!((0.0..=1.0).contains(&x));
        }
    }
}
