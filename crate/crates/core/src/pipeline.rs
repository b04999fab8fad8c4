//! The eight-stage cleaning pipeline.
//!
//! Stages 2-5 persist their transform into the retained text. Stage 6
//! compares punctuation-stripped forms but keeps the unstripped text.
//! Stages 7 and 8 are pure filters.
//!
//! Pairs are processed in chunks; within a chunk they may be evaluated on a
//! worker pool, but verdicts are consumed in input order so outputs and
//! reports do not depend on the worker count.

use std::fmt;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus_io::{DiscardedPair, SentencePair};
use crate::editdist::{levenshtein_chars, normalize_distance};
use crate::error::{Error, Result};
use crate::normalize::{
    collapse_spaces, expand_contractions, fold_ascii, lowercase, strip_punctuation,
    ContractionTable,
};

/// Thresholds for stages 7 and 8. Both distance intervals are inclusive;
/// sentences longer than `max_sentence_len` characters are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    pub lev_min: usize,
    pub lev_max: usize,
    pub max_sentence_len: usize,
    pub norm_min: f64,
    pub norm_max: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            lev_min: 7,
            lev_max: 42,
            max_sentence_len: 100,
            norm_min: 0.08,
            norm_max: 0.5,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lev_min > self.lev_max {
            return Err(Error::InvalidConfig(format!(
                "lev_min {} exceeds lev_max {}",
                self.lev_min, self.lev_max
            )));
        }
        if !(0.0 <= self.norm_min && self.norm_min <= self.norm_max && self.norm_max <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "normalized bounds must satisfy 0 <= {} <= {} <= 1",
                self.norm_min, self.norm_max
            )));
        }
        if self.max_sentence_len == 0 {
            return Err(Error::InvalidConfig(
                "max_sentence_len must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    RemoveIdentical = 1,
    TextNormalization = 2,
    SpaceRemoval = 3,
    Lowercasing = 4,
    Contractions = 5,
    PunctuationRemoval = 6,
    LengthAndDistance = 7,
    NormalizedDistance = 8,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::RemoveIdentical,
        Stage::TextNormalization,
        Stage::SpaceRemoval,
        Stage::Lowercasing,
        Stage::Contractions,
        Stage::PunctuationRemoval,
        Stage::LengthAndDistance,
        Stage::NormalizedDistance,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Stage> {
        Stage::ALL.get(usize::from(id).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::RemoveIdentical => "Removing Similar Sentences",
            Stage::TextNormalization => "Text Normalization",
            Stage::SpaceRemoval => "Space Removal",
            Stage::Lowercasing => "Lower-casing",
            Stage::Contractions => "Handling Contractions",
            Stage::PunctuationRemoval => "Punctuation Removal",
            Stage::LengthAndDistance => "Sentence Length & Levenshtein Distance Filtering",
            Stage::NormalizedDistance => "Normalized Levenshtein Distance Filtering",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.id(), self.name())
    }
}

/// One row of the stage report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage_id: u8,
    pub stage_name: String,
    pub removed: u64,
    pub remaining: u64,
}

/// Builds the 8-row report from the input size and per-stage removal counts.
pub fn build_report(input: u64, removed: [u64; 8]) -> Vec<StageReport> {
    let mut remaining = input;
    Stage::ALL
        .iter()
        .zip(removed)
        .map(|(stage, removed)| {
            remaining -= removed;
            StageReport {
                stage_id: stage.id(),
                stage_name: stage.name().to_owned(),
                removed,
                remaining,
            }
        })
        .collect()
}

/// Checks `remaining[k] = remaining[k-1] - removed[k]` on every row.
pub fn check_conservation(input: u64, report: &[StageReport]) -> std::result::Result<(), String> {
    if report.len() != 8 {
        return Err(format!("expected 8 rows, got {}", report.len()));
    }
    let mut previous = input;
    for (row, stage) in report.iter().zip(Stage::ALL) {
        if row.stage_id != stage.id() {
            return Err(format!(
                "row for stage {} has id {}",
                stage.id(),
                row.stage_id
            ));
        }
        if previous.checked_sub(row.removed) != Some(row.remaining) {
            return Err(format!(
                "stage {}: {} - {} != {}",
                row.stage_id, previous, row.removed, row.remaining
            ));
        }
        previous = row.remaining;
    }
    Ok(())
}

/// Writes the report as CSV: `stage_id,stage_name,removed,remaining`.
pub fn write_report<W: Write>(report: &[StageReport], out: W) -> Result<()> {
    if report.len() != 8 {
        return Err(Error::ReportShape(report.len()));
    }
    let mut writer = csv::Writer::from_writer(out);
    for row in report {
        writer
            .serialize(row)
            .map_err(|e| Error::io("<report>", e.into()))?;
    }
    writer.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(())
}

pub fn report_to_file(report: &[StageReport], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_report(report, std::io::BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Vec<StageReport>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Parse {
        path: path.to_owned(),
        line: 0,
        message: e.to_string(),
    })?;
    reader
        .deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                path: path.to_owned(),
                line: i as u64 + 2,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Outcome of running one pair through the stages.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Survived all stages; carries the persistently transformed text.
    Kept(SentencePair),
    Dropped(Stage),
}

/// Stage logic bound to a config and contraction table.
#[derive(Clone, Copy, Debug)]
pub struct Cleaner<'t> {
    config: FilterConfig,
    table: &'t ContractionTable,
}

impl<'t> Cleaner<'t> {
    pub fn new(config: FilterConfig, table: &'t ContractionTable) -> Result<Self> {
        config.validate()?;
        Ok(Cleaner { config, table })
    }

    pub fn config(&self) -> &FilterConfig {
        &self.config
    }

    pub fn judge(&self, pair: &SentencePair) -> Verdict {
        type Transform<'f> = dyn Fn(&str) -> String + 'f;
        if pair.source == pair.target {
            return Verdict::Dropped(Stage::RemoveIdentical);
        }

        let persistent: [(Stage, &Transform); 4] = [
            (Stage::TextNormalization, &fold_ascii),
            (Stage::SpaceRemoval, &collapse_spaces),
            (Stage::Lowercasing, &lowercase),
            (Stage::Contractions, &|s| expand_contractions(s, self.table)),
        ];
        let mut source = pair.source.clone();
        let mut target = pair.target.clone();
        for (stage, transform) in persistent {
            source = transform(&source);
            target = transform(&target);
            if source == target {
                return Verdict::Dropped(stage);
            }
        }

        if strip_punctuation(&source) == strip_punctuation(&target) {
            return Verdict::Dropped(Stage::PunctuationRemoval);
        }

        let cfg = &self.config;
        let a: Vec<char> = source.chars().collect();
        let b: Vec<char> = target.chars().collect();
        if a.len() > cfg.max_sentence_len || b.len() > cfg.max_sentence_len {
            return Verdict::Dropped(Stage::LengthAndDistance);
        }
        let distance = match levenshtein_chars(&a, &b, Some(cfg.lev_max)).exact() {
            Some(d) if d >= cfg.lev_min => d,
            _ => return Verdict::Dropped(Stage::LengthAndDistance),
        };

        // source != target here, so the longer side is non-empty
        let ratio = normalize_distance(distance, a.len().max(b.len()));
        if ratio < cfg.norm_min || ratio > cfg.norm_max {
            return Verdict::Dropped(Stage::NormalizedDistance);
        }

        Verdict::Kept(SentencePair { source, target })
    }
}

/// Receives pipeline results in input order.
pub trait PipelineSink {
    fn cleaned(&mut self, pair: SentencePair) -> Result<()>;
    fn discarded(&mut self, pair: DiscardedPair) -> Result<()>;
}

/// Survivors, dropped pairs (original text, tagged with stage) and the report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineOutput {
    pub cleaned: Vec<SentencePair>,
    pub discarded: Vec<DiscardedPair>,
    pub report: Vec<StageReport>,
}

impl PipelineSink for PipelineOutput {
    fn cleaned(&mut self, pair: SentencePair) -> Result<()> {
        self.cleaned.push(pair);
        Ok(())
    }

    fn discarded(&mut self, pair: DiscardedPair) -> Result<()> {
        self.discarded.push(pair);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub workers: usize,
    pub chunk_size: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            chunk_size: 8192,
        }
    }
}

/// Streams pairs through the stages into `sink`, returning the stage report.
pub fn run_streaming<I, S>(
    pairs: I,
    config: FilterConfig,
    table: &ContractionTable,
    options: RunOptions,
    sink: &mut S,
) -> Result<Vec<StageReport>>
where
    I: IntoIterator<Item = Result<SentencePair>>,
    S: PipelineSink,
{
    let cleaner = Cleaner::new(config, table)?;
    let pool = if options.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.workers)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?,
        )
    } else {
        None
    };
    let chunk_size = options.chunk_size.max(1);

    let mut input = 0u64;
    let mut removed = [0u64; 8];
    let mut chunk = Vec::with_capacity(chunk_size);
    let mut pairs = pairs.into_iter();
    loop {
        chunk.clear();
        for pair in pairs.by_ref().take(chunk_size) {
            chunk.push(pair?);
        }
        if chunk.is_empty() {
            break;
        }
        let verdicts: Vec<Verdict> = match &pool {
            Some(pool) => pool.install(|| chunk.par_iter().map(|p| cleaner.judge(p)).collect()),
            None => chunk.iter().map(|p| cleaner.judge(p)).collect(),
        };
        input += chunk.len() as u64;
        for (pair, verdict) in chunk.drain(..).zip(verdicts) {
            match verdict {
                Verdict::Kept(cleaned) => sink.cleaned(cleaned)?,
                Verdict::Dropped(stage) => {
                    removed[usize::from(stage.id() - 1)] += 1;
                    sink.discarded(DiscardedPair {
                        pair,
                        stage_id: stage.id(),
                    })?;
                }
            }
        }
    }
    Ok(build_report(input, removed))
}

/// Runs the whole pipeline in memory on a single thread.
pub fn run_pipeline<I>(
    pairs: I,
    config: FilterConfig,
    table: &ContractionTable,
) -> Result<PipelineOutput>
where
    I: IntoIterator<Item = SentencePair>,
{
    let mut output = PipelineOutput::default();
    let report = run_streaming(
        pairs.into_iter().map(Ok),
        config,
        table,
        RunOptions::default(),
        &mut output,
    )?;
    output.report = report;
    Ok(output)
}

/// How the final fixed-size dataset is drawn from the survivors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SampleMode {
    /// First `n` survivors in input order.
    #[default]
    Head,
    /// Seeded uniform sample of `n` survivors, kept in input order.
    Random,
}

impl std::str::FromStr for SampleMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "head" => Ok(SampleMode::Head),
            "random" => Ok(SampleMode::Random),
            other => Err(format!(
                "unknown sample mode `{other}` (expected head or random)"
            )),
        }
    }
}

/// Reduces `pairs` to at most `n` rows.
pub fn subsample(
    mut pairs: Vec<SentencePair>,
    n: usize,
    mode: SampleMode,
    seed: u64,
) -> Vec<SentencePair> {
    if pairs.len() <= n {
        return pairs;
    }
    match mode {
        SampleMode::Head => {
            pairs.truncate(n);
            pairs
        }
        SampleMode::Random => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut keep = rand::seq::index::sample(&mut rng, pairs.len(), n).into_vec();
            keep.sort_unstable();
            let mut slots: Vec<Option<SentencePair>> = pairs.into_iter().map(Some).collect();
            keep.into_iter().map(|i| slots[i].take().unwrap()).collect()
        }
    }
}
