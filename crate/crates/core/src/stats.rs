//! Distribution summaries of the quantities the length and distance filters act on.

use serde::Serialize;

use crate::corpus_io::SentencePair;
use crate::editdist::{levenshtein_chars, normalize_distance};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub count: u64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Distribution {
    pub summary: Option<Summary>,
    pub histogram: Vec<Bin>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusStats {
    pub pairs: u64,
    pub source_length: Distribution,
    pub target_length: Distribution,
    pub levenshtein: Distribution,
    pub normalized_levenshtein: Distribution,
    pub length_difference: Distribution,
}

/// Nearest-rank quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn histogram(sorted: &[f64], bins: usize) -> Vec<Bin> {
    let (Some(&lo), Some(&hi)) = (sorted.first(), sorted.last()) else {
        return Vec::new();
    };
    if lo == hi {
        return vec![Bin {
            lower: lo,
            upper: hi,
            count: sorted.len() as u64,
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<Bin> = (0..bins)
        .map(|i| Bin {
            lower: lo + width * i as f64,
            upper: if i + 1 == bins {
                hi
            } else {
                lo + width * (i + 1) as f64
            },
            count: 0,
        })
        .collect();
    for &v in sorted {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        out[i].count += 1;
    }
    out
}

pub fn distribution(mut values: Vec<f64>, bins: usize) -> Distribution {
    values.sort_by(f64::total_cmp);
    let summary = (!values.is_empty()).then(|| Summary {
        count: values.len() as u64,
        min: values[0],
        max: values[values.len() - 1],
        mean: values.iter().sum::<f64>() / values.len() as f64,
        p05: quantile(&values, 0.05),
        p25: quantile(&values, 0.25),
        p50: quantile(&values, 0.50),
        p75: quantile(&values, 0.75),
        p95: quantile(&values, 0.95),
    });
    Distribution {
        summary,
        histogram: histogram(&values, bins.max(1)),
    }
}

pub fn corpus_stats<'a, I>(pairs: I, bins: usize) -> CorpusStats
where
    I: IntoIterator<Item = &'a SentencePair>,
{
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    let mut lev = Vec::new();
    let mut norm = Vec::new();
    let mut diff = Vec::new();
    for pair in pairs {
        let a: Vec<char> = pair.source.chars().collect();
        let b: Vec<char> = pair.target.chars().collect();
        let d = levenshtein_chars(&a, &b, None)
            .exact()
            .expect("unbounded distance is exact");
        src.push(a.len() as f64);
        tgt.push(b.len() as f64);
        lev.push(d as f64);
        let longest = a.len().max(b.len());
        if longest > 0 {
            norm.push(normalize_distance(d, longest));
        }
        diff.push(a.len().abs_diff(b.len()) as f64);
    }
    CorpusStats {
        pairs: src.len() as u64,
        source_length: distribution(src, bins),
        target_length: distribution(tgt, bins),
        levenshtein: distribution(lev, bins),
        normalized_levenshtein: distribution(norm, bins),
        length_difference: distribution(diff, bins),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &str, b: &str) -> SentencePair {
        SentencePair::new(a, b).unwrap()
    }

    #[test]
    fn identical_pairs_have_zero_distance() {
        let pairs = [pair("a cat", "a cat"), pair("dog", "dog")];
        let s = corpus_stats(&pairs, 4);
        let lev = s.levenshtein.summary.unwrap();
        assert_eq!((lev.min, lev.max), (0.0, 0.0));
        assert_eq!(s.normalized_levenshtein.summary.unwrap().max, 0.0);
    }

    #[test]
    fn min_and_max_distance() {
        let pairs = [pair("aaa", "bbb"), pair("aaaaaaaaaa", "bbbbbbbbbb")];
        let lev = corpus_stats(&pairs, 4).levenshtein.summary.unwrap();
        assert_eq!((lev.min, lev.max), (3.0, 10.0));
        assert_eq!(
            corpus_stats(&pairs, 4)
                .length_difference
                .summary
                .unwrap()
                .max,
            0.0
        );
    }

    #[test]
    fn empty_corpus() {
        let s = corpus_stats(&[], 10);
        assert_eq!(s.pairs, 0);
        assert!(s.levenshtein.summary.is_none());
        assert!(s.levenshtein.histogram.is_empty());
    }

    #[test]
    fn histogram_counts_everything() {
        let d = distribution((0..100).map(f64::from).collect(), 10);
        assert_eq!(d.histogram.iter().map(|b| b.count).sum::<u64>(), 100);
        let s = d.summary.unwrap();
        assert_eq!(s.p50, 49.0);
        assert_eq!(s.p95, 94.0);
    }
}
