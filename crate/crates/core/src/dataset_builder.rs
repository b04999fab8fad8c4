//! Labeled dataset construction from a cleaned pair corpus.
//!
//! Splits take incorrect sentences from the top rows and corrected
//! sentences from the bottom rows, so no row contributes both of its
//! sentences to training. Validation rows come from the middle.

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus_io::{LabeledExample, SentencePair};
use crate::error::{Error, Result};

pub const INCORRECT: u8 = 0;
pub const CORRECT: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_per_class: usize,
    pub val_rows: usize,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_per_class: 90_000,
            val_rows: 20_000,
        }
    }
}

impl SplitSpec {
    pub fn rows_required(&self) -> usize {
        2 * self.train_per_class + self.val_rows
    }
}

/// Row ranges each part of a split draws from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitLayout {
    pub train_incorrect: std::ops::Range<usize>,
    pub train_correct: std::ops::Range<usize>,
    pub val_incorrect: std::ops::Range<usize>,
    pub val_correct: std::ops::Range<usize>,
}

impl SplitLayout {
    /// When the corpus has more rows than needed, the validation block is
    /// centred in the gap between the top and bottom training blocks.
    pub fn new(rows: usize, spec: SplitSpec) -> Result<Self> {
        let required = spec.rows_required();
        if rows < required {
            return Err(Error::InsufficientRows {
                required,
                available: rows,
            });
        }
        let top = spec.train_per_class;
        let bottom = rows - spec.train_per_class;
        let val_start = top + (bottom - top - spec.val_rows) / 2;
        let val_mid = val_start + spec.val_rows / 2;
        let val_end = val_start + spec.val_rows;
        Ok(SplitLayout {
            train_incorrect: 0..top,
            train_correct: bottom..rows,
            val_incorrect: val_start..val_mid,
            val_correct: val_mid..val_end,
        })
    }
}

fn column(
    corpus: &[SentencePair],
    rows: std::ops::Range<usize>,
    label: u8,
) -> impl Iterator<Item = LabeledExample> + '_ {
    corpus[rows].iter().map(move |pair| LabeledExample {
        text: if label == INCORRECT {
            pair.source.clone()
        } else {
            pair.target.clone()
        },
        label,
    })
}

/// Builds `(train, val)`. Train holds column 0 of the first
/// `train_per_class` rows labeled 0 followed by column 1 of the last
/// `train_per_class` rows labeled 1; val takes column 0 from the first half
/// of the middle rows and column 1 from the second half.
pub fn build_split(
    corpus: &[SentencePair],
    spec: SplitSpec,
) -> Result<(Vec<LabeledExample>, Vec<LabeledExample>)> {
    let layout = SplitLayout::new(corpus.len(), spec)?;
    let train = column(corpus, layout.train_incorrect, INCORRECT)
        .chain(column(corpus, layout.train_correct, CORRECT))
        .collect();
    let val = column(corpus, layout.val_incorrect, INCORRECT)
        .chain(column(corpus, layout.val_correct, CORRECT))
        .collect();
    Ok((train, val))
}

/// Batch composition: how many examples come from each pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixSpec {
    pub cleaned_count: usize,
    pub discarded_count: usize,
    pub seed: u64,
}

impl MixSpec {
    pub fn total(&self) -> usize {
        self.cleaned_count + self.discarded_count
    }
}

/// Label-balanced sample of `count` examples; label 0 takes the extra one
/// when `count` is odd. Pool order is kept in the sample.
fn draw_balanced(
    pool: &[LabeledExample],
    count: usize,
    name: &'static str,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<LabeledExample>> {
    let mut drawn = Vec::with_capacity(count);
    for (label, need) in [(INCORRECT, count - count / 2), (CORRECT, count / 2)] {
        let candidates: Vec<&LabeledExample> = pool.iter().filter(|e| e.label == label).collect();
        if candidates.len() < need {
            return Err(Error::InsufficientPool {
                pool: name,
                label,
                required: need,
                available: candidates.len(),
            });
        }
        let mut picks = index::sample(rng, candidates.len(), need).into_vec();
        picks.sort_unstable();
        drawn.extend(picks.into_iter().map(|i| candidates[i].clone()));
    }
    Ok(drawn)
}

/// Draws `cleaned_count` examples from the cleaned pool and
/// `discarded_count` from the discarded pool, each label-balanced, then
/// shuffles the batch. Identical seeds give identical batches.
pub fn build_mix(
    cleaned: &[LabeledExample],
    discarded: &[LabeledExample],
    spec: MixSpec,
) -> Result<Vec<LabeledExample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut batch = draw_balanced(cleaned, spec.cleaned_count, "cleaned", &mut rng)?;
    batch.extend(draw_balanced(
        discarded,
        spec.discarded_count,
        "discarded",
        &mut rng,
    )?);
    batch.shuffle(&mut rng);
    Ok(batch)
}

/// Labels both sentences of each pair: column 0 as incorrect, column 1 as correct.
pub fn label_pairs<'a, I>(pairs: I) -> impl Iterator<Item = LabeledExample> + 'a
where
    I: IntoIterator<Item = &'a SentencePair>,
    I::IntoIter: 'a,
{
    pairs.into_iter().flat_map(|p| {
        [
            LabeledExample {
                text: p.source.clone(),
                label: INCORRECT,
            },
            LabeledExample {
                text: p.target.clone(),
                label: CORRECT,
            },
        ]
    })
}
