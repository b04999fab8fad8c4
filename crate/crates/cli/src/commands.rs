use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use tracing::info;

use ged_forge_core::corpus_io::{
    read_discarded, read_labeled, read_pairs, write_labeled, write_pairs, TsvWriter,
};
use ged_forge_core::dataset_builder::label_pairs;
use ged_forge_core::metrics::{score_file, table_row, MetricsReport, Scores};
use ged_forge_core::pipeline::{
    report_to_file, run_streaming, subsample, PipelineSink, RunOptions, SampleMode,
};
use ged_forge_core::stats::{corpus_stats, Distribution};
use ged_forge_core::synth::{generate, Category, SynthSpec};
use ged_forge_core::{
    build_mix, build_split, ContractionTable, DiscardedPair, FilterConfig, LabeledExample, MixSpec,
    PairFormat, SentencePair, SplitSpec,
};

use crate::config::{pick, FileConfig};
use crate::{CleanArgs, LabelArgs, MixArgs, ScoreArgs, SplitArgs, StatsArgs, SynthArgs};

fn elapsed_ms(since: Instant) -> u64 {
    since.elapsed().as_millis() as u64
}

fn pair_format(flag: Option<String>, file: Option<String>, path: &Path) -> Result<PairFormat> {
    match flag.or(file) {
        Some(s) => s.parse().map_err(|e: String| anyhow!(e)),
        None => Ok(PairFormat::from_path(path)),
    }
}

fn load_pairs(path: &Path, format: PairFormat) -> Result<Vec<SentencePair>> {
    let mut reader = read_pairs(path, format)?;
    let pairs = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    info!(path = %path.display(), rows = pairs.len(), malformed = reader.malformed(), "read pairs");
    Ok(pairs)
}

fn load_labeled(path: &Path) -> Result<Vec<LabeledExample>> {
    let examples = read_labeled(path)?.collect::<Result<Vec<_>, _>>()?;
    info!(path = %path.display(), rows = examples.len(), "read labeled examples");
    Ok(examples)
}

struct CleanSink {
    cleaned: TsvWriter<io::BufWriter<fs::File>>,
    discarded: TsvWriter<io::BufWriter<fs::File>>,
    limit: Option<usize>,
    mode: SampleMode,
    buffered: Vec<SentencePair>,
    survivors: u64,
}

impl PipelineSink for CleanSink {
    fn cleaned(&mut self, pair: SentencePair) -> ged_forge_core::Result<()> {
        self.survivors += 1;
        match (self.limit, self.mode) {
            (None, _) => self.cleaned.write_pair(&pair),
            (Some(n), SampleMode::Head) => {
                if (self.cleaned.written() as usize) < n {
                    self.cleaned.write_pair(&pair)?;
                }
                Ok(())
            }
            (Some(_), SampleMode::Random) => {
                self.buffered.push(pair);
                Ok(())
            }
        }
    }

    fn discarded(&mut self, pair: DiscardedPair) -> ged_forge_core::Result<()> {
        self.discarded.write_discarded(&pair)
    }
}

pub fn clean(args: CleanArgs, file: &FileConfig, workers: usize) -> Result<()> {
    let started = Instant::now();
    let d = FilterConfig::default();
    let config = FilterConfig {
        lev_min: pick(args.lev_min, file.lev_min, d.lev_min),
        lev_max: pick(args.lev_max, file.lev_max, d.lev_max),
        max_sentence_len: pick(args.max_len, file.max_len, d.max_sentence_len),
        norm_min: pick(args.norm_min, file.norm_min, d.norm_min),
        norm_max: pick(args.norm_max, file.norm_max, d.norm_max),
    };
    config.validate()?;
    let table = match args.contractions.or_else(|| file.contractions.clone()) {
        Some(path) => ContractionTable::from_file(&path)?,
        None => ContractionTable::default(),
    };
    let format = pair_format(args.input_format, file.input_format.clone(), &args.input)?;
    let limit = args.sample.or(file.sample);
    let mode: SampleMode = match args.sample_mode.or_else(|| file.sample_mode.clone()) {
        Some(s) => s.parse().map_err(|e: String| anyhow!(e))?,
        None => SampleMode::Head,
    };
    let seed = pick(args.seed, file.seed, 0);
    info!(
        input = %args.input.display(),
        %format,
        lev_min = config.lev_min,
        lev_max = config.lev_max,
        max_len = config.max_sentence_len,
        norm_min = config.norm_min,
        norm_max = config.norm_max,
        contractions = table.len(),
        sample = ?limit,
        sample_mode = ?mode,
        seed,
        workers,
        "clean config"
    );

    let mut reader = read_pairs(&args.input, format)?;
    let mut sink = CleanSink {
        cleaned: TsvWriter::create(&args.output_cleaned)?,
        discarded: TsvWriter::create(&args.output_discarded)?,
        limit,
        mode,
        buffered: Vec::new(),
        survivors: 0,
    };
    let report = run_streaming(
        reader.by_ref(),
        config,
        &table,
        RunOptions {
            workers,
            ..RunOptions::default()
        },
        &mut sink,
    )?;
    info!(
        rows = reader.rows(),
        malformed = reader.malformed(),
        survivors = sink.survivors,
        elapsed_ms = elapsed_ms(started),
        "cleaning stages done"
    );

    let CleanSink {
        mut cleaned,
        discarded,
        limit,
        buffered,
        ..
    } = sink;
    if let (Some(n), SampleMode::Random) = (limit, mode) {
        for pair in subsample(buffered, n, SampleMode::Random, seed) {
            cleaned.write_pair(&pair)?;
        }
    }
    let written = cleaned.finish()?;
    let dropped = discarded.finish()?;
    report_to_file(&report, &args.report)?;
    for row in &report {
        info!(stage = row.stage_id, name = %row.stage_name, removed = row.removed, remaining = row.remaining, "stage");
    }
    info!(
        cleaned = written,
        discarded = dropped,
        elapsed_ms = elapsed_ms(started),
        "clean finished"
    );
    Ok(())
}

pub fn split(args: SplitArgs, file: &FileConfig) -> Result<()> {
    let started = Instant::now();
    let d = SplitSpec::default();
    let spec = SplitSpec {
        train_per_class: pick(
            args.train_per_class,
            file.train_per_class,
            d.train_per_class,
        ),
        val_rows: pick(args.val_rows, file.val_rows, d.val_rows),
    };
    info!(?spec, input = %args.input.display(), "split config");
    let corpus = load_pairs(&args.input, PairFormat::from_path(&args.input))?;
    let (train, val) = build_split(&corpus, spec)?;
    let n_train = write_labeled(train, &args.out_train)?;
    let n_val = write_labeled(val, &args.out_val)?;
    info!(
        train = n_train,
        val = n_val,
        elapsed_ms = elapsed_ms(started),
        "split finished"
    );
    Ok(())
}

pub fn mix(args: MixArgs, file: &FileConfig) -> Result<()> {
    let started = Instant::now();
    let spec = MixSpec {
        cleaned_count: args
            .cleaned_count
            .or(file.cleaned_count)
            .context("--cleaned-count is required")?,
        discarded_count: args
            .discarded_count
            .or(file.discarded_count)
            .context("--discarded-count is required")?,
        seed: pick(args.seed, file.seed, 0),
    };
    info!(?spec, "mix config");
    let cleaned = load_labeled(&args.cleaned)?;
    let discarded = load_labeled(&args.discarded)?;
    let batch = build_mix(&cleaned, &discarded, spec)?;
    let n = write_labeled(batch, &args.out)?;
    info!(
        written = n,
        elapsed_ms = elapsed_ms(started),
        "mix finished"
    );
    Ok(())
}

fn score_modes(mode: &str, scores: &Scores) -> Result<Vec<MetricsReport>> {
    Ok(match mode {
        "positive" | "positive_class" => vec![scores.positive_class.clone()],
        "macro" => vec![scores.macro_avg.clone()],
        "both" => vec![scores.positive_class.clone(), scores.macro_avg.clone()],
        other => bail!("unknown mode `{other}` (expected positive, macro or both)"),
    })
}

pub fn score(args: ScoreArgs, file: &FileConfig) -> Result<()> {
    let started = Instant::now();
    let mode = pick(args.mode, file.mode.clone(), "both".to_owned());
    let format = pick(args.format, file.format.clone(), "table".to_owned());
    let scores = score_file(&args.predictions)?;
    let reports = score_modes(&mode, &scores)?;
    let m = &scores.matrix;
    let mut out = io::stdout().lock();
    match format.as_str() {
        "table" => {
            writeln!(
                out,
                "{:<24} {:>6} {:>6} {:>6} {:>6} {:>6}",
                "Model", "TP", "TN", "FP", "FN", "F1"
            )?;
            writeln!(out, "{}", table_row(&args.name, m, &reports[0]))?;
            writeln!(out)?;
            writeln!(
                out,
                "{:<16} {:>9} {:>9} {:>9} {:>9}",
                "mode", "accuracy", "precision", "recall", "f1"
            )?;
            for r in &reports {
                writeln!(
                    out,
                    "{:<16} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
                    r.mode.to_string(),
                    r.accuracy,
                    r.precision,
                    r.recall,
                    r.f1
                )?;
            }
        }
        "json" => {
            let value = serde_json::json!({ "matrix": m, "metrics": reports });
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        }
        "csv" => {
            writeln!(out, "mode,tp,tn,fp,fn,accuracy,precision,recall,f1")?;
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.mode, m.tp, m.tn, m.fp, m.fn_, r.accuracy, r.precision, r.recall, r.f1
                )?;
            }
        }
        other => bail!("unknown format `{other}` (expected table, json or csv)"),
    }
    info!(
        records = m.total(),
        elapsed_ms = elapsed_ms(started),
        "score finished"
    );
    Ok(())
}

fn print_distribution(out: &mut impl Write, name: &str, d: &Distribution) -> io::Result<()> {
    match &d.summary {
        None => writeln!(out, "{name:<24} (empty)"),
        Some(s) => writeln!(
            out,
            "{name:<24} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>8.3}",
            s.min, s.p05, s.p25, s.p50, s.mean, s.p75, s.p95, s.max
        ),
    }
}

pub fn stats(args: StatsArgs, file: &FileConfig) -> Result<()> {
    let started = Instant::now();
    let format = pair_format(args.input_format, file.input_format.clone(), &args.input)?;
    let bins = pick(args.bins, file.bins, 10);
    let pairs = load_pairs(&args.input, format)?;
    let stats = corpus_stats(&pairs, bins);
    let mut out = io::stdout().lock();
    match pick(args.format, file.format.clone(), "json".to_owned()).as_str() {
        "json" => writeln!(out, "{}", serde_json::to_string_pretty(&stats)?)?,
        "table" => {
            writeln!(out, "pairs: {}", stats.pairs)?;
            writeln!(
                out,
                "{:<24} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
                "quantity", "min", "p05", "p25", "p50", "mean", "p75", "p95", "max"
            )?;
            print_distribution(&mut out, "source_length", &stats.source_length)?;
            print_distribution(&mut out, "target_length", &stats.target_length)?;
            print_distribution(&mut out, "levenshtein", &stats.levenshtein)?;
            print_distribution(
                &mut out,
                "normalized_levenshtein",
                &stats.normalized_levenshtein,
            )?;
            print_distribution(&mut out, "length_difference", &stats.length_difference)?;
        }
        other => bail!("unknown format `{other}` (expected json or table)"),
    }
    info!(
        pairs = stats.pairs,
        elapsed_ms = elapsed_ms(started),
        "stats finished"
    );
    Ok(())
}

fn load_proportions(path: &Path) -> Result<Vec<(Category, f64)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: BTreeMap<String, f64> =
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    raw.into_iter()
        .map(|(name, p)| Ok((name.parse::<Category>()?, p)))
        .collect()
}

pub fn synth(args: SynthArgs, file: &FileConfig) -> Result<()> {
    let started = Instant::now();
    let rows = pick(args.rows, file.rows, 1000);
    let seed = pick(args.seed, file.seed, 0);
    let spec = match &args.spec {
        Some(path) => SynthSpec::new(rows, load_proportions(path)?, seed),
        None => SynthSpec::uniform(rows, seed),
    };
    info!(rows, seed, proportions = ?spec.proportions, "synth config");
    let out = generate(&spec, &ContractionTable::default())?;
    let n = write_pairs(out.pairs, &args.out)?;
    report_to_file(&out.expected, &args.expected)?;
    info!(
        written = n,
        elapsed_ms = elapsed_ms(started),
        "synth finished"
    );
    Ok(())
}

pub fn label(args: LabelArgs) -> Result<()> {
    let started = Instant::now();
    let pairs: Vec<SentencePair> = if args.discarded {
        let mut reader = read_discarded(&args.input)?;
        let rows = reader
            .by_ref()
            .map(|r| r.map(|d| d.pair))
            .collect::<Result<Vec<_>, _>>()?;
        info!(
            rows = rows.len(),
            malformed = reader.malformed(),
            "read discarded pairs"
        );
        rows
    } else {
        load_pairs(&args.input, PairFormat::from_path(&args.input))?
    };
    let n = write_labeled(label_pairs(&pairs), &args.out)?;
    info!(
        written = n,
        elapsed_ms = elapsed_ms(started),
        "label finished"
    );
    Ok(())
}
