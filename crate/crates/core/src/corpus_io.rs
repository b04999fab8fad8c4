//! Streaming readers and writers for the corpus file formats.
//!
//! - Pair TSV: UTF-8, exactly two tab-separated fields per line, `\n`
//!   terminated, no header. Column 0 is the learner sentence, column 1 its
//!   correction.
//! - Pair JSONL: one `{"source": .., "target": ..}` object per line.
//! - Discarded TSV: pair TSV with a third `stage_id` column.
//! - Labeled JSONL: `{"text": .., "label": 0|1}` per line.
//! - Prediction JSONL: `{"text": .., "label": 0|1, "pred": 0|1}` per line.
//!
//! Pair readers skip malformed rows and count them. Labeled and prediction
//! readers treat a malformed record as fatal and report its line number.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One corpus row: a candidate-incorrect sentence and its correction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SentencePair {
    pub source: String,
    pub target: String,
}

impl SentencePair {
    /// Builds a pair, rejecting empty fields and embedded tabs or line breaks.
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Result<Self> {
        let pair = SentencePair {
            source: source.into(),
            target: target.into(),
        };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        check_field("source", &self.source)?;
        check_field("target", &self.target)
    }
}

fn check_field(name: &str, value: &str) -> Result<()> {
    if value.is_empty() {
        return Err(Error::InvalidPair(format!("{name} is empty")));
    }
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::InvalidPair(format!(
            "{name} contains a tab or line break"
        )));
    }
    Ok(())
}

/// A pair removed by the cleaning pipeline, tagged with the stage (1-8) that dropped it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscardedPair {
    pub pair: SentencePair,
    pub stage_id: u8,
}

/// A single sentence with its grammaticality label (0 = incorrect, 1 = correct).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LabeledExample {
    pub text: String,
    pub label: u8,
}

impl LabeledExample {
    pub fn new(text: impl Into<String>, label: u8) -> Result<Self> {
        check_label(label as i64)?;
        Ok(LabeledExample {
            text: text.into(),
            label,
        })
    }
}

/// A scored sentence: gold label and model prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionRecord {
    pub text: String,
    pub label: u8,
    pub pred: u8,
}

fn check_label(label: i64) -> Result<u8> {
    match label {
        0 | 1 => Ok(label as u8),
        other => Err(Error::InvalidLabel(other)),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairFormat {
    #[default]
    Tsv,
    Jsonl,
}

impl PairFormat {
    /// `.jsonl` / `.json` select JSONL, anything else TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => PairFormat::Jsonl,
            _ => PairFormat::Tsv,
        }
    }
}

impl FromStr for PairFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(PairFormat::Tsv),
            "jsonl" => Ok(PairFormat::Jsonl),
            other => Err(format!(
                "unknown pair format `{other}` (expected tsv or jsonl)"
            )),
        }
    }
}

impl fmt::Display for PairFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairFormat::Tsv => "tsv",
            PairFormat::Jsonl => "jsonl",
        })
    }
}

/// Row types a [`RowReader`] can produce.
pub trait CorpusRow: Sized {
    fn parse(line: &str, format: PairFormat) -> Result<Self, String>;
}

#[derive(Deserialize)]
struct JsonPair {
    source: String,
    target: String,
}

impl CorpusRow for SentencePair {
    fn parse(line: &str, format: PairFormat) -> Result<Self, String> {
        let pair = match format {
            PairFormat::Tsv => {
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() != 2 {
                    return Err(format!("expected 2 fields, found {}", fields.len()));
                }
                SentencePair {
                    source: fields[0].to_owned(),
                    target: fields[1].to_owned(),
                }
            }
            PairFormat::Jsonl => {
                let raw: JsonPair = serde_json::from_str(line).map_err(|e| e.to_string())?;
                SentencePair {
                    source: raw.source,
                    target: raw.target,
                }
            }
        };
        pair.validate().map_err(|e| e.to_string())?;
        Ok(pair)
    }
}

impl CorpusRow for DiscardedPair {
    fn parse(line: &str, _format: PairFormat) -> Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(format!("expected 3 fields, found {}", fields.len()));
        }
        let stage_id: u8 = fields[2]
            .parse()
            .map_err(|_| format!("invalid stage id `{}`", fields[2]))?;
        if !(1..=8).contains(&stage_id) {
            return Err(format!("stage id {stage_id} out of range 1-8"));
        }
        let pair = SentencePair {
            source: fields[0].to_owned(),
            target: fields[1].to_owned(),
        };
        pair.validate().map_err(|e| e.to_string())?;
        Ok(DiscardedPair { pair, stage_id })
    }
}

/// Line-at-a-time reader that skips and counts malformed rows.
///
/// Only I/O failures are yielded as `Err`; the malformed count is available
/// through [`RowReader::malformed`] and is logged once the stream ends.
pub struct RowReader<R, T = SentencePair> {
    inner: R,
    format: PairFormat,
    path: PathBuf,
    line: u64,
    malformed: u64,
    rows: u64,
    buf: Vec<u8>,
    done: bool,
    _row: PhantomData<T>,
}

pub type PairReader<R> = RowReader<R, SentencePair>;

impl<R: BufRead, T: CorpusRow> RowReader<R, T> {
    /// `path` is only used to label diagnostics.
    pub fn from_reader(inner: R, format: PairFormat, path: impl Into<PathBuf>) -> Self {
        RowReader {
            inner,
            format,
            path: path.into(),
            line: 0,
            malformed: 0,
            rows: 0,
            buf: Vec::new(),
            done: false,
            _row: PhantomData,
        }
    }

    pub fn malformed(&self) -> u64 {
        self.malformed
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }
}

impl<R: BufRead, T: CorpusRow> Iterator for RowReader<R, T> {
    type Item = Result<T>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            self.buf.clear();
            match self.inner.read_until(b'\n', &mut self.buf) {
                Ok(0) => {
                    self.done = true;
                    if self.malformed > 0 {
                        tracing::warn!(
                            path = %self.path.display(),
                            malformed = self.malformed,
                            rows = self.rows,
                            "skipped malformed rows"
                        );
                    }
                    return None;
                }
                Ok(_) => {}
                Err(e) => {
                    self.done = true;
                    return Some(Err(Error::io(&self.path, e)));
                }
            }
            self.line += 1;
            let mut bytes: &[u8] = &self.buf;
            if let Some(rest) = bytes.strip_suffix(b"\n") {
                bytes = rest;
            }
            if let Some(rest) = bytes.strip_suffix(b"\r") {
                bytes = rest;
            }
            let parsed = std::str::from_utf8(bytes)
                .map_err(|_| "invalid UTF-8".to_owned())
                .and_then(|line| T::parse(line, self.format));
            match parsed {
                Ok(row) => {
                    self.rows += 1;
                    return Some(Ok(row));
                }
                Err(reason) => {
                    self.malformed += 1;
                    tracing::debug!(
                        path = %self.path.display(),
                        line = self.line,
                        %reason,
                        "malformed row"
                    );
                }
            }
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Opens a pair corpus for streaming.
pub fn read_pairs(
    path: impl AsRef<Path>,
    format: PairFormat,
) -> Result<PairReader<BufReader<File>>> {
    let path = path.as_ref();
    Ok(RowReader::from_reader(open(path)?, format, path))
}

/// Opens a discarded-pair TSV (pair columns plus `stage_id`).
pub fn read_discarded(path: impl AsRef<Path>) -> Result<RowReader<BufReader<File>, DiscardedPair>> {
    let path = path.as_ref();
    Ok(RowReader::from_reader(open(path)?, PairFormat::Tsv, path))
}

/// Buffered TSV writer for pairs and discarded pairs.
pub struct TsvWriter<W: Write> {
    inner: W,
    path: PathBuf,
    written: u64,
}

impl TsvWriter<BufWriter<File>> {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Ok(TsvWriter::new(create(path)?, path))
    }
}

impl<W: Write> TsvWriter<W> {
    pub fn new(inner: W, path: impl Into<PathBuf>) -> Self {
        TsvWriter {
            inner,
            path: path.into(),
            written: 0,
        }
    }

    pub fn write_pair(&mut self, pair: &SentencePair) -> Result<()> {
        pair.validate()?;
        writeln!(self.inner, "{}\t{}", pair.source, pair.target)
            .map_err(|e| Error::io(&self.path, e))?;
        self.written += 1;
        Ok(())
    }

    pub fn write_discarded(&mut self, discarded: &DiscardedPair) -> Result<()> {
        let pair = &discarded.pair;
        pair.validate()?;
        writeln!(
            self.inner,
            "{}\t{}\t{}",
            pair.source, pair.target, discarded.stage_id
        )
        .map_err(|e| Error::io(&self.path, e))?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    /// Flushes and returns the number of rows written.
    pub fn finish(mut self) -> Result<u64> {
        self.inner.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.written)
    }
}

/// Writes pairs as TSV, returning the number of rows written.
pub fn write_pairs<I>(pairs: I, path: impl AsRef<Path>) -> Result<u64>
where
    I: IntoIterator<Item = SentencePair>,
{
    let mut writer = TsvWriter::create(path)?;
    for pair in pairs {
        writer.write_pair(&pair)?;
    }
    writer.finish()
}

fn write_jsonl<T, I>(records: I, path: &Path, check: impl Fn(&T) -> Result<()>) -> Result<u64>
where
    T: Serialize,
    I: IntoIterator<Item = T>,
{
    let mut out = create(path)?;
    let mut count = 0u64;
    for record in records {
        check(&record)?;
        serde_json::to_writer(&mut out, &record).map_err(|e| Error::io(path, e.into()))?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        count += 1;
    }
    out.flush().map_err(|e| Error::io(path, e))?;
    Ok(count)
}

/// Writes labeled examples as JSONL. A label outside {0, 1} aborts the write.
pub fn write_labeled<I>(examples: I, path: impl AsRef<Path>) -> Result<u64>
where
    I: IntoIterator<Item = LabeledExample>,
{
    write_jsonl(examples, path.as_ref(), |ex: &LabeledExample| {
        check_label(ex.label as i64).map(drop)
    })
}

pub fn write_predictions<I>(records: I, path: impl AsRef<Path>) -> Result<u64>
where
    I: IntoIterator<Item = PredictionRecord>,
{
    write_jsonl(records, path.as_ref(), |r: &PredictionRecord| {
        check_label(r.label as i64)?;
        check_label(r.pred as i64).map(drop)
    })
}

#[derive(Deserialize)]
struct RawLabeled {
    text: String,
    label: i64,
}

#[derive(Deserialize)]
struct RawPrediction {
    text: String,
    label: i64,
    pred: i64,
}

/// Strict JSONL reader: the first malformed record ends the stream with an error.
pub struct JsonlReader<R, T> {
    lines: io::Lines<R>,
    path: PathBuf,
    line: u64,
    parse: fn(&str) -> Result<T, String>,
}

impl<R: BufRead, T> Iterator for JsonlReader<R, T> {
    type Item = Result<T>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(Error::io(&self.path, e))),
            };
            self.line += 1;
            if line.trim().is_empty() {
                continue;
            }
            return Some((self.parse)(&line).map_err(|message| Error::Parse {
                path: self.path.clone(),
                line: self.line,
                message,
            }));
        }
    }
}

fn parse_labeled(line: &str) -> Result<LabeledExample, String> {
    let raw: RawLabeled = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let label = check_label(raw.label).map_err(|e| e.to_string())?;
    Ok(LabeledExample {
        text: raw.text,
        label,
    })
}

fn parse_prediction(line: &str) -> Result<PredictionRecord, String> {
    let raw: RawPrediction = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let label = check_label(raw.label).map_err(|e| format!("label: {e}"))?;
    let pred = check_label(raw.pred).map_err(|e| format!("pred: {e}"))?;
    Ok(PredictionRecord {
        text: raw.text,
        label,
        pred,
    })
}

pub fn labeled_from_reader<R: BufRead>(
    reader: R,
    path: impl Into<PathBuf>,
) -> JsonlReader<R, LabeledExample> {
    JsonlReader {
        lines: reader.lines(),
        path: path.into(),
        line: 0,
        parse: parse_labeled,
    }
}

pub fn predictions_from_reader<R: BufRead>(
    reader: R,
    path: impl Into<PathBuf>,
) -> JsonlReader<R, PredictionRecord> {
    JsonlReader {
        lines: reader.lines(),
        path: path.into(),
        line: 0,
        parse: parse_prediction,
    }
}

pub fn read_labeled(
    path: impl AsRef<Path>,
) -> Result<JsonlReader<BufReader<File>, LabeledExample>> {
    let path = path.as_ref();
    Ok(labeled_from_reader(open(path)?, path))
}

pub fn read_predictions(
    path: impl AsRef<Path>,
) -> Result<JsonlReader<BufReader<File>, PredictionRecord>> {
    let path = path.as_ref();
    Ok(predictions_from_reader(open(path)?, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn pairs_from(text: &str) -> (Vec<SentencePair>, u64) {
        let mut reader: PairReader<_> = RowReader::from_reader(
            Cursor::new(text.as_bytes().to_vec()),
            PairFormat::Tsv,
            "mem",
        );
        let pairs = reader.by_ref().collect::<Result<Vec<_>>>().unwrap();
        (pairs, reader.malformed())
    }

    #[test]
    fn tsv_line_maps_to_fields() {
        let (pairs, bad) = pairs_from("I has a cat\tI have a cat\n");
        assert_eq!(bad, 0);
        assert_eq!(
            pairs,
            vec![SentencePair::new("I has a cat", "I have a cat").unwrap()]
        );
    }

    #[test]
    fn three_fields_is_skipped_and_counted() {
        let (pairs, bad) = pairs_from("a\tb\tc\nx\ty\n");
        assert_eq!(bad, 1);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].source, "x");
    }

    #[test]
    fn empty_input() {
        let (pairs, bad) = pairs_from("");
        assert!(pairs.is_empty());
        assert_eq!(bad, 0);
    }

    #[test]
    fn empty_fields_and_bad_utf8_are_malformed() {
        let mut data = b"\tb\na\t\nok\tfine\n".to_vec();
        data.extend_from_slice(&[0xff, b'\t', b'x', b'\n']);
        let mut reader: PairReader<_> =
            RowReader::from_reader(Cursor::new(data), PairFormat::Tsv, "mem");
        let pairs: Vec<_> = reader.by_ref().map(Result::unwrap).collect();
        assert_eq!(pairs.len(), 1);
        assert_eq!(reader.malformed(), 3);
    }

    #[test]
    fn crlf_terminators_are_accepted() {
        let (pairs, bad) = pairs_from("a b\tc d\r\n");
        assert_eq!(bad, 0);
        assert_eq!(pairs[0].target, "c d");
    }

    #[test]
    fn jsonl_pairs() {
        let text = "{\"source\":\"a\\tb\",\"target\":\"c\"}\n{\"source\":\"x\",\"target\":\"y\"}\nnot json\n";
        let mut reader: PairReader<_> =
            RowReader::from_reader(Cursor::new(text.as_bytes()), PairFormat::Jsonl, "mem");
        let pairs: Vec<_> = reader.by_ref().map(Result::unwrap).collect();
        assert_eq!(pairs, vec![SentencePair::new("x", "y").unwrap()]);
        assert_eq!(reader.malformed(), 2);
    }

    #[test]
    fn write_then_read_preserves_internal_spaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.tsv");
        let pairs = vec![
            SentencePair::new("a  b   c", "a b c").unwrap(),
            SentencePair::new(" lead", "trail ").unwrap(),
            SentencePair::new("café", "cafe").unwrap(),
        ];
        assert_eq!(write_pairs(pairs.clone(), &path).unwrap(), 3);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
        let back: Vec<_> = read_pairs(&path, PairFormat::Tsv)
            .unwrap()
            .map(Result::unwrap)
            .collect();
        assert_eq!(back, pairs);
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = read_pairs("/no/such/file.tsv", PairFormat::Tsv)
            .err()
            .unwrap();
        assert!(err.to_string().contains("/no/such/file.tsv"));
    }

    #[test]
    fn labeled_output_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l.jsonl");
        let n =
            write_labeled(vec![LabeledExample::new("i have a cat", 1).unwrap()], &path).unwrap();
        assert_eq!(n, 1);
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "{\"text\":\"i have a cat\",\"label\":1}\n"
        );
        assert_eq!(write_labeled(Vec::new(), &path).unwrap(), 0);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "");
    }

    #[test]
    fn labeled_write_rejects_bad_label() {
        let dir = tempfile::tempdir().unwrap();
        let bad = LabeledExample {
            text: "x".into(),
            label: 2,
        };
        let err = write_labeled(vec![bad], dir.path().join("l.jsonl")).unwrap_err();
        assert!(matches!(err, Error::InvalidLabel(2)));
        assert!(LabeledExample::new("x", 3).is_err());
    }

    #[test]
    fn prediction_with_bad_pred_reports_line() {
        let text =
            "{\"text\":\"a\",\"label\":1,\"pred\":1}\n{\"text\":\"b\",\"label\":0,\"pred\":2}\n";
        let results: Vec<_> = predictions_from_reader(Cursor::new(text), "p.jsonl").collect();
        assert!(results[0].is_ok());
        match &results[1] {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(*line, 2);
                assert!(message.contains("pred"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn discarded_rows_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.tsv");
        let mut w = TsvWriter::create(&path).unwrap();
        let d = DiscardedPair {
            pair: SentencePair::new("a", "b").unwrap(),
            stage_id: 6,
        };
        w.write_discarded(&d).unwrap();
        assert_eq!(w.finish().unwrap(), 1);
        let back: Vec<_> = read_discarded(&path).unwrap().map(Result::unwrap).collect();
        assert_eq!(back, vec![d]);
    }
}
