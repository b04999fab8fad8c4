//! Synthetic pair corpora with a known stage report.
//!
//! Every row belongs to a category built to be dropped at one specific
//! stage, or to survive. Each emitted pair is re-checked against the
//! predicates of the stages before its target stage, and edit pairs have
//! their distance confirmed with the unbounded edit distance, so the
//! expected report follows from the category counts alone.

use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus_io::SentencePair;
use crate::editdist::{levenshtein, normalize_distance};
use crate::error::{Error, Result};
use crate::normalize::{
    collapse_spaces, expand_contractions, fold_ascii, lowercase, strip_punctuation,
    ContractionTable,
};
use crate::pipeline::{build_report, FilterConfig, Stage, StageReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    ExactDup,
    FoldOnly,
    SpaceOnly,
    CaseOnly,
    ContractionOnly,
    PunctOnly,
    OutOfBandEdit,
    NormOutOfBand,
    InBandEdit,
}

impl Category {
    pub const ALL: [Category; 9] = [
        Category::ExactDup,
        Category::FoldOnly,
        Category::SpaceOnly,
        Category::CaseOnly,
        Category::ContractionOnly,
        Category::PunctOnly,
        Category::OutOfBandEdit,
        Category::NormOutOfBand,
        Category::InBandEdit,
    ];

    /// The stage that drops pairs of this category, `None` for survivors.
    pub fn drop_stage(self) -> Option<Stage> {
        match self {
            Category::ExactDup => Some(Stage::RemoveIdentical),
            Category::FoldOnly => Some(Stage::TextNormalization),
            Category::SpaceOnly => Some(Stage::SpaceRemoval),
            Category::CaseOnly => Some(Stage::Lowercasing),
            Category::ContractionOnly => Some(Stage::Contractions),
            Category::PunctOnly => Some(Stage::PunctuationRemoval),
            Category::OutOfBandEdit => Some(Stage::LengthAndDistance),
            Category::NormOutOfBand => Some(Stage::NormalizedDistance),
            Category::InBandEdit => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::ExactDup => "exact_dup",
            Category::FoldOnly => "fold_only",
            Category::SpaceOnly => "space_only",
            Category::CaseOnly => "case_only",
            Category::ContractionOnly => "contraction_only",
            Category::PunctOnly => "punct_only",
            Category::OutOfBandEdit => "out_of_band_edit",
            Category::NormOutOfBand => "norm_out_of_band",
            Category::InBandEdit => "in_band_edit",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidSynthSpec(format!("unknown category `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    pub rows: usize,
    /// Share of rows per category; must sum to 1.
    pub proportions: Vec<(Category, f64)>,
    pub seed: u64,
    pub filter: FilterConfig,
}

impl SynthSpec {
    pub fn new(rows: usize, proportions: Vec<(Category, f64)>, seed: u64) -> Self {
        SynthSpec {
            rows,
            proportions,
            seed,
            filter: FilterConfig::default(),
        }
    }

    /// Equal share for every category.
    pub fn uniform(rows: usize, seed: u64) -> Self {
        let share = 1.0 / Category::ALL.len() as f64;
        SynthSpec::new(
            rows,
            Category::ALL.iter().map(|&c| (c, share)).collect(),
            seed,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.filter.validate()?;
        let mut seen = Vec::new();
        let mut sum = 0.0;
        for &(cat, p) in &self.proportions {
            if seen.contains(&cat) {
                return Err(Error::InvalidSynthSpec(format!("{cat} listed twice")));
            }
            seen.push(cat);
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::InvalidSynthSpec(format!(
                    "{cat} proportion {p} is invalid"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidSynthSpec(format!(
                "proportions sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }

    /// Row count per category by largest remainder, summing exactly to `rows`.
    pub fn counts(&self) -> Vec<(Category, usize)> {
        let exact: Vec<f64> = self
            .proportions
            .iter()
            .map(|&(_, p)| p * self.rows as f64)
            .collect();
        let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let assigned: usize = counts.iter().sum();
        let mut order: Vec<usize> = (0..exact.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = exact[a] - exact[a].floor();
            let rb = exact[b] - exact[b].floor();
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for &i in order.iter().take(self.rows.saturating_sub(assigned)) {
            counts[i] += 1;
        }
        self.proportions
            .iter()
            .map(|&(c, _)| c)
            .zip(counts)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Synthesized {
    pub pairs: Vec<SentencePair>,
    pub categories: Vec<Category>,
    pub expected: Vec<StageReport>,
}

const WORDS: &[&str] = &[
    "the",
    "cat",
    "dog",
    "house",
    "river",
    "green",
    "walk",
    "school",
    "friend",
    "letter",
    "morning",
    "quickly",
    "write",
    "study",
    "english",
    "language",
    "teacher",
    "yesterday",
    "tomorrow",
    "city",
    "train",
    "water",
    "coffee",
    "people",
    "because",
    "about",
    "very",
    "good",
    "happy",
    "little",
    "mountain",
    "summer",
    "winter",
    "garden",
    "window",
    "travel",
    "music",
    "movie",
    "book",
    "family",
    "mother",
    "father",
    "brother",
    "sister",
    "work",
    "office",
    "market",
    "apple",
    "orange",
    "bread",
    "evening",
    "night",
    "weather",
    "rain",
    "sunny",
    "cold",
    "warm",
    "often",
    "always",
    "never",
    "sometimes",
    "think",
    "want",
    "like",
    "enjoy",
    "play",
    "learn",
    "speak",
    "listen",
    "read",
    "visit",
    "country",
    "japan",
    "korea",
    "china",
    "france",
    "station",
    "street",
    "bicycle",
    "computer",
    "phone",
    "picture",
    "dinner",
    "lunch",
    "breakfast",
    "party",
    "birthday",
    "holiday",
    "beautiful",
    "interesting",
    "difficult",
    "easy",
    "new",
    "old",
    "big",
    "small",
    "and",
    "with",
    "from",
    "into",
    "after",
    "before",
    "during",
    "every",
    "many",
    "some",
];

const ACCENTS: &[(char, &[char])] = &[
    ('a', &['à', 'á', 'â', 'ä', 'å']),
    ('e', &['è', 'é', 'ê', 'ë']),
    ('i', &['ì', 'í', 'î', 'ï']),
    ('o', &['ò', 'ó', 'ô', 'ö']),
    ('u', &['ù', 'ú', 'û', 'ü']),
    ('c', &['ç']),
    ('n', &['ñ']),
    ('y', &['ý', 'ÿ']),
];

const PUNCT: &[char] = &[',', '.', '!', '?', ';', ':', '-', '"', '(', ')'];

const MAX_ATTEMPTS: usize = 10_000;

/// Substituting close to every character lets shifted alignments undercut
/// the intended distance, so edit pairs keep at least a quarter of their
/// characters intact.
fn min_len(k: usize) -> usize {
    (4 * k).div_ceil(3)
}

fn max_k(len: usize) -> usize {
    3 * len / 4
}

/// Lowercase letters and single interior spaces: every transform of
/// stages 2-6 leaves such text unchanged.
fn is_canonical(s: &str) -> bool {
    !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_lowercase() || b == b' ')
        && !s.starts_with(' ')
        && !s.ends_with(' ')
        && !s.contains("  ")
}

struct Generator<'a> {
    rng: ChaCha8Rng,
    filter: FilterConfig,
    table: &'a ContractionTable,
    contractions: Vec<(&'a str, &'a str)>,
    in_band: Vec<(usize, usize)>,
    norm_low: Vec<(usize, usize)>,
    norm_high: Vec<(usize, usize)>,
}

impl<'a> Generator<'a> {
    fn new(spec: &SynthSpec, table: &'a ContractionTable) -> Self {
        let f = spec.filter;
        let mut in_band = Vec::new();
        let mut norm_low = Vec::new();
        let mut norm_high = Vec::new();
        for k in f.lev_min.max(1)..=f.lev_max.min(f.max_sentence_len) {
            for len in min_len(k)..=f.max_sentence_len {
                let ratio = normalize_distance(k, len);
                if ratio < f.norm_min {
                    norm_low.push((k, len));
                } else if ratio > f.norm_max {
                    norm_high.push((k, len));
                } else {
                    in_band.push((k, len));
                }
            }
        }
        // bare words only: `'cause`-style keys would need a preceding boundary check
        let contractions = table
            .entries()
            .filter(|(k, _)| !k.starts_with('\''))
            .collect();
        Generator {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            filter: f,
            table,
            contractions,
            in_band,
            norm_low,
            norm_high,
        }
    }

    fn words(&mut self, min: usize, max: usize) -> Vec<&'static str> {
        let n = self.rng.random_range(min..=max);
        (0..n)
            .map(|_| *WORDS.choose(&mut self.rng).unwrap())
            .collect()
    }

    fn sentence(&mut self) -> String {
        self.words(3, 10).join(" ")
    }

    fn letter(&mut self) -> char {
        char::from(b'a' + self.rng.random_range(0..26u8))
    }

    /// Canonical text of exactly `len` characters.
    fn text_of_len(&mut self, len: usize) -> String {
        let mut s = String::with_capacity(len + 12);
        while s.len() < len {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(WORDS.choose(&mut self.rng).unwrap());
        }
        s.truncate(len);
        if s.ends_with(' ') {
            s.pop();
            let c = self.letter();
            s.push(c);
        }
        s
    }

    /// Canonical pair of equal length `len` at edit distance exactly `k`.
    fn edit_pair(&mut self, k: usize, len: usize) -> Result<SentencePair> {
        for _ in 0..MAX_ATTEMPTS {
            let source = self.text_of_len(len);
            let mut target: Vec<char> = source.chars().collect();
            let positions = rand::seq::index::sample(&mut self.rng, len, k);
            for i in positions {
                let old = target[i];
                target[i] = loop {
                    let c = self.letter();
                    if c != old {
                        break c;
                    }
                };
            }
            let target: String = target.into_iter().collect();
            if levenshtein(&source, &target, None).exact() == Some(k) {
                return Ok(SentencePair { source, target });
            }
        }
        Err(Error::InvalidSynthSpec(format!(
            "could not build a pair at distance {k} over {len} characters"
        )))
    }

    /// Uniform pick that lands on the extreme element a third of the time.
    fn pick_favoring<T: Copy>(&mut self, items: &[T], extreme: T) -> T {
        if self.rng.random_bool(1.0 / 3.0) {
            extreme
        } else {
            *items.choose(&mut self.rng).unwrap()
        }
    }

    fn build(&mut self, cat: Category) -> Result<SentencePair> {
        for _ in 0..MAX_ATTEMPTS {
            let pair = match cat {
                Category::ExactDup => {
                    let mut s = self.sentence();
                    s[..1].make_ascii_uppercase();
                    s.push('.');
                    SentencePair {
                        source: s.clone(),
                        target: s,
                    }
                }
                Category::FoldOnly => {
                    let target = self.sentence();
                    let mut changed = false;
                    let source: String = target
                        .chars()
                        .map(|c| match ACCENTS.iter().find(|(base, _)| *base == c) {
                            Some((_, variants)) if self.rng.random_bool(0.3) => {
                                changed = true;
                                *variants.choose(&mut self.rng).unwrap()
                            }
                            _ => c,
                        })
                        .collect();
                    if !changed {
                        continue;
                    }
                    SentencePair { source, target }
                }
                Category::SpaceOnly => {
                    let words = self.words(2, 10);
                    let target = words.join(" ");
                    let mut source = " ".repeat(self.rng.random_range(0..3));
                    for (i, w) in words.iter().enumerate() {
                        if i > 0 {
                            source.push_str(&" ".repeat(self.rng.random_range(1..4)));
                        }
                        source.push_str(w);
                    }
                    source.push_str(&" ".repeat(self.rng.random_range(0..3)));
                    SentencePair { source, target }
                }
                Category::CaseOnly => {
                    let words = self.words(2, 10);
                    let target = words.join(" ");
                    let source = words
                        .iter()
                        .map(|w| match self.rng.random_range(0..3) {
                            0 => w.to_ascii_uppercase(),
                            1 => {
                                let mut w = w.to_string();
                                w[..1].make_ascii_uppercase();
                                w
                            }
                            _ => w.to_string(),
                        })
                        .collect::<Vec<_>>()
                        .join(" ");
                    SentencePair { source, target }
                }
                Category::ContractionOnly => {
                    let (key, expansion) =
                        *self.contractions.choose(&mut self.rng).ok_or_else(|| {
                            Error::InvalidSynthSpec(
                                "contraction table has no usable entries".into(),
                            )
                        })?;
                    let mut before = self.words(0, 4);
                    let after = self.words(1, 4);
                    let mut source = before.clone();
                    source.push(key);
                    source.extend(&after);
                    before.push(expansion);
                    before.extend(&after);
                    SentencePair {
                        source: source.join(" "),
                        target: before.join(" "),
                    }
                }
                Category::PunctOnly => {
                    let words = self.words(2, 10);
                    let target = words.join(" ");
                    let mut source = String::new();
                    for (i, w) in words.iter().enumerate() {
                        if i > 0 {
                            source.push(' ');
                        }
                        source.push_str(w);
                        if self.rng.random_bool(0.3) {
                            source.push(*PUNCT.choose(&mut self.rng).unwrap());
                        }
                    }
                    if self.rng.random_bool(0.5) {
                        source.push(*PUNCT.choose(&mut self.rng).unwrap());
                    }
                    SentencePair { source, target }
                }
                Category::InBandEdit => {
                    let (k, len) = self.in_band_case()?;
                    self.edit_pair(k, len)?
                }
                Category::OutOfBandEdit => {
                    let (k, len) = self.out_of_band_case()?;
                    self.edit_pair(k, len)?
                }
                Category::NormOutOfBand => {
                    let (k, len) = self.norm_out_case()?;
                    self.edit_pair(k, len)?
                }
            };
            if self.check(cat, &pair) {
                return Ok(pair);
            }
        }
        Err(Error::InvalidSynthSpec(format!(
            "could not build a {cat} pair"
        )))
    }

    fn in_band_case(&mut self) -> Result<(usize, usize)> {
        if self.in_band.is_empty() {
            return Err(Error::InvalidSynthSpec(
                "no in-band distance/length combination".into(),
            ));
        }
        let f = self.filter;
        let cands = self.in_band.clone();
        let ratio = |&(k, l): &(usize, usize)| normalize_distance(k, l);
        Ok(match self.rng.random_range(0..5) {
            0 => *cands
                .iter()
                .min_by(|a, b| ratio(a).total_cmp(&ratio(b)))
                .unwrap(),
            1 => *cands
                .iter()
                .max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
                .unwrap(),
            2 | 3 => {
                let k = if self.rng.random_bool(0.5) {
                    f.lev_min.max(1)
                } else {
                    f.lev_max
                };
                let at_k: Vec<_> = cands.iter().copied().filter(|c| c.0 == k).collect();
                match at_k.choose(&mut self.rng) {
                    Some(&c) => c,
                    None => *cands.choose(&mut self.rng).unwrap(),
                }
            }
            _ => *cands.choose(&mut self.rng).unwrap(),
        })
    }

    fn out_of_band_case(&mut self) -> Result<(usize, usize)> {
        let f = self.filter;
        let mut variants = Vec::new();
        if f.lev_min > 1 {
            variants.push(0);
        }
        if f.lev_max < max_k(f.max_sentence_len) {
            variants.push(1);
        }
        if f.lev_min.max(1) <= f.lev_max {
            variants.push(2);
        }
        let variant = *variants.choose(&mut self.rng).ok_or_else(|| {
            Error::InvalidSynthSpec("no out-of-band construction possible".into())
        })?;
        Ok(match variant {
            0 => {
                // below the band
                let all: Vec<usize> = (1..f.lev_min).collect();
                let k = self.pick_favoring(&all, f.lev_min - 1);
                let shortest = (2 * k).max(2);
                (
                    k,
                    self.rng
                        .random_range(shortest..=f.max_sentence_len.max(shortest)),
                )
            }
            1 => {
                // above the band
                let all: Vec<usize> = (f.lev_max + 1..=max_k(f.max_sentence_len)).collect();
                let k = self.pick_favoring(&all, f.lev_max + 1);
                (k, self.rng.random_range(min_len(k)..=f.max_sentence_len))
            }
            _ => {
                // over the length cap
                let len = f.max_sentence_len + self.rng.random_range(1..=20);
                let k = self.rng.random_range(f.lev_min.max(1)..=f.lev_max.min(len));
                (k, len)
            }
        })
    }

    fn norm_out_case(&mut self) -> Result<(usize, usize)> {
        let side = match (self.norm_low.is_empty(), self.norm_high.is_empty()) {
            (true, true) => {
                return Err(Error::InvalidSynthSpec(
                    "no distance/length combination falls outside the normalized band".into(),
                ))
            }
            (false, true) => 0,
            (true, false) => 1,
            (false, false) => self.rng.random_range(0..2),
        };
        let ratio = |&(k, l): &(usize, usize)| normalize_distance(k, l);
        let (cands, extreme) = if side == 0 {
            let c = self.norm_low.clone();
            let e = *c
                .iter()
                .max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
                .unwrap();
            (c, e)
        } else {
            let c = self.norm_high.clone();
            let e = *c
                .iter()
                .min_by(|a, b| ratio(a).total_cmp(&ratio(b)))
                .unwrap();
            (c, e)
        };
        Ok(if self.rng.random_bool(0.5) {
            extreme
        } else {
            *cands.choose(&mut self.rng).unwrap()
        })
    }

    /// Re-checks that `pair` passes every stage before its category's stage
    /// and is caught by that stage.
    fn check(&self, cat: Category, pair: &SentencePair) -> bool {
        let (s, t) = (pair.source.as_str(), pair.target.as_str());
        if pair.validate().is_err() {
            return false;
        }
        if cat == Category::ExactDup {
            return s == t;
        }
        if s == t {
            return false;
        }
        match cat {
            Category::ExactDup => unreachable!(),
            Category::FoldOnly => !s.is_ascii() && is_canonical(t) && fold_ascii(s) == t,
            Category::SpaceOnly => s.is_ascii() && is_canonical(t) && collapse_spaces(s) == t,
            Category::CaseOnly => {
                s.is_ascii() && collapse_spaces(s) == s && is_canonical(t) && lowercase(s) == t
            }
            Category::ContractionOnly => {
                let t_ok = is_canonical(t);
                s.is_ascii()
                    && collapse_spaces(s) == s
                    && lowercase(s) == s
                    && t_ok
                    && expand_contractions(s, self.table) == t
            }
            Category::PunctOnly => {
                s.is_ascii()
                    && !s.contains('\'')
                    && collapse_spaces(s) == s
                    && lowercase(s) == s
                    && is_canonical(t)
                    && strip_punctuation(s) == t
            }
            Category::OutOfBandEdit | Category::NormOutOfBand | Category::InBandEdit => {
                if !(is_canonical(s) && is_canonical(t)) {
                    return false;
                }
                let f = &self.filter;
                let (ls, lt) = (s.chars().count(), t.chars().count());
                let Some(d) = levenshtein(s, t, None).exact() else {
                    return false;
                };
                let stage7_ok = ls <= f.max_sentence_len
                    && lt <= f.max_sentence_len
                    && (f.lev_min..=f.lev_max).contains(&d);
                let ratio = normalize_distance(d, ls.max(lt));
                let stage8_ok = f.norm_min <= ratio && ratio <= f.norm_max;
                match cat {
                    Category::OutOfBandEdit => !stage7_ok,
                    Category::NormOutOfBand => stage7_ok && !stage8_ok,
                    _ => stage7_ok && stage8_ok,
                }
            }
        }
    }
}

/// Generates `spec.rows` pairs in shuffled category order, with the stage
/// report the pipeline must produce on them.
pub fn generate(spec: &SynthSpec, table: &ContractionTable) -> Result<Synthesized> {
    spec.validate()?;
    let mut generator = Generator::new(spec, table);
    let mut categories: Vec<Category> = spec
        .counts()
        .into_iter()
        .flat_map(|(c, n)| std::iter::repeat_n(c, n))
        .collect();
    categories.shuffle(&mut generator.rng);

    let mut removed = [0u64; 8];
    let mut pairs = Vec::with_capacity(categories.len());
    for &cat in &categories {
        pairs.push(generator.build(cat)?);
        if let Some(stage) = cat.drop_stage() {
            removed[usize::from(stage.id() - 1)] += 1;
        }
    }
    Ok(Synthesized {
        pairs,
        categories,
        expected: build_report(spec.rows as u64, removed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::run_pipeline;

    fn only(rows: usize, parts: &[(Category, f64)], seed: u64) -> Synthesized {
        generate(
            &SynthSpec::new(rows, parts.to_vec(), seed),
            &ContractionTable::default(),
        )
        .unwrap()
    }

    #[test]
    fn all_exact_dup() {
        let out = only(10, &[(Category::ExactDup, 1.0)], 1);
        assert_eq!(out.expected[0].removed, 10);
        assert_eq!(out.expected[0].remaining, 0);
        assert!(out.pairs.iter().all(|p| p.source == p.target));
    }

    #[test]
    fn case_only_plus_in_band() {
        let out = only(
            10,
            &[(Category::CaseOnly, 0.4), (Category::InBandEdit, 0.6)],
            2,
        );
        assert_eq!(out.expected[3].removed, 4);
        assert_eq!(out.expected[7].remaining, 6);
        let table = ContractionTable::default();
        let run = run_pipeline(out.pairs.clone(), FilterConfig::default(), &table).unwrap();
        assert_eq!(run.report, out.expected);
        for (pair, cat) in out.pairs.iter().zip(&out.categories) {
            if *cat == Category::InBandEdit {
                let d = levenshtein(&pair.source, &pair.target, None)
                    .exact()
                    .unwrap();
                assert!((7..=42).contains(&d));
            }
        }
    }

    #[test]
    fn seeded_determinism() {
        let spec = SynthSpec::uniform(200, 99);
        let table = ContractionTable::default();
        let a = generate(&spec, &table).unwrap();
        let b = generate(&spec, &table).unwrap();
        assert_eq!(a, b);
        let c = generate(&SynthSpec { seed: 100, ..spec }, &table).unwrap();
        assert_ne!(a.pairs, c.pairs);
    }

    #[test]
    fn counts_sum_to_rows() {
        let spec = SynthSpec::uniform(1000, 0);
        assert_eq!(spec.counts().iter().map(|c| c.1).sum::<usize>(), 1000);
        let spec = SynthSpec::new(
            7,
            vec![(Category::ExactDup, 0.5), (Category::CaseOnly, 0.5)],
            0,
        );
        let counts = spec.counts();
        assert_eq!(counts[0].1 + counts[1].1, 7);
    }

    #[test]
    fn invalid_specs() {
        let table = ContractionTable::default();
        let bad = SynthSpec::new(5, vec![(Category::ExactDup, 0.5)], 0);
        assert!(generate(&bad, &table).is_err());
        let dup = SynthSpec::new(
            5,
            vec![(Category::ExactDup, 0.5), (Category::ExactDup, 0.5)],
            0,
        );
        assert!(generate(&dup, &table).is_err());
        assert!("nonsense".parse::<Category>().is_err());
        assert_eq!(
            "in_band_edit".parse::<Category>().unwrap(),
            Category::InBandEdit
        );
    }

    #[test]
    fn uniform_spec_matches_pipeline() {
        let table = ContractionTable::default();
        let out = generate(&SynthSpec::uniform(500, 5), &table).unwrap();
        let run = run_pipeline(out.pairs.clone(), FilterConfig::default(), &table).unwrap();
        assert_eq!(run.report, out.expected);
    }
}
