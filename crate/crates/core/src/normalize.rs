//! Pure text transforms used by the cleaning stages.
//!
//! All functions are total and idempotent (contraction expansion is
//! idempotent for tables whose expansions contain no keys, which the
//! table constructor enforces by rejecting apostrophes in expansions).

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

const DEFAULT_CONTRACTIONS: &str = include_str!("../data/contractions.tsv");

/// Characters with no ASCII compatibility decomposition that still have an
/// obvious ASCII rendering.
fn ascii_substitute(c: char) -> Option<&'static str> {
    Some(match c {
        '\u{2018}' | '\u{2019}' | '\u{201A}' | '\u{201B}' | '\u{2032}' | '\u{2035}'
        | '\u{02BC}' | '\u{02B9}' | '\u{0060}' | '\u{00B4}' | '\u{2039}' | '\u{203A}' => "'",
        '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{201F}' | '\u{2033}' | '\u{2036}'
        | '\u{00AB}' | '\u{00BB}' | '\u{02BA}' => "\"",
        '\u{2010}' | '\u{2011}' | '\u{2012}' | '\u{2013}' | '\u{2014}' | '\u{2015}'
        | '\u{2212}' | '\u{2043}' | '\u{FE58}' => "-",
        '\u{2044}' | '\u{2215}' => "/",
        '\u{2022}' | '\u{00B7}' => " ",
        '\u{00DF}' => "ss",
        '\u{1E9E}' => "SS",
        '\u{00E6}' => "ae",
        '\u{00C6}' => "AE",
        '\u{0153}' => "oe",
        '\u{0152}' => "OE",
        '\u{00F8}' => "o",
        '\u{00D8}' => "O",
        '\u{0111}' | '\u{00F0}' => "d",
        '\u{0110}' | '\u{00D0}' => "D",
        '\u{0142}' => "l",
        '\u{0141}' => "L",
        '\u{00FE}' => "th",
        '\u{00DE}' => "TH",
        '\u{0131}' => "i",
        '\u{0127}' => "h",
        '\u{0126}' => "H",
        '\u{014B}' => "ng",
        '\u{014A}' => "NG",
        c if c.is_whitespace() => " ",
        _ => return None,
    })
}

/// Maps text onto ASCII: compatibility decomposition, combining marks
/// stripped, typographic punctuation mapped to its ASCII form, everything
/// else without an ASCII equivalent dropped.
pub fn fold_ascii(s: &str) -> String {
    if s.is_ascii() {
        return s.to_owned();
    }
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c.is_ascii() {
            out.push(c);
        } else if let Some(rep) = ascii_substitute(c) {
            out.push_str(rep);
        } else {
            for d in std::iter::once(c).nfkd() {
                if d.is_ascii() {
                    out.push(d);
                } else if let Some(rep) = ascii_substitute(d) {
                    out.push_str(rep);
                }
            }
        }
    }
    out
}

/// Trims and collapses every whitespace run to a single ASCII space.
pub fn collapse_spaces(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for word in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

pub fn lowercase(s: &str) -> String {
    s.to_ascii_lowercase()
}

/// Replaces ASCII punctuation with spaces and collapses the result.
/// Used for comparison only; callers keep the original text.
pub fn strip_punctuation(s: &str) -> String {
    let replaced: String = s
        .chars()
        .map(|c| if c.is_ascii_punctuation() { ' ' } else { c })
        .collect();
    collapse_spaces(&replaced)
}

/// Contraction surface forms and their expansions, keyed case-insensitively.
#[derive(Clone, Debug)]
pub struct ContractionTable {
    entries: Vec<(String, String)>,
    index: HashMap<String, usize>,
}

impl ContractionTable {
    pub fn from_entries<I, K, V>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut table = ContractionTable {
            entries: Vec::new(),
            index: HashMap::new(),
        };
        for (key, expansion) in entries {
            table.insert(key.as_ref(), expansion.as_ref())?;
        }
        Ok(table)
    }

    fn insert(&mut self, key: &str, expansion: &str) -> Result<()> {
        let key = key.trim().to_lowercase();
        let expansion = expansion.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::InvalidContractionTable(format!(
                "key `{key}` must be a single non-empty token"
            )));
        }
        if expansion.is_empty() || expansion.contains('\'') {
            return Err(Error::InvalidContractionTable(format!(
                "expansion `{expansion}` for `{key}` must be non-empty and contain no apostrophes"
            )));
        }
        if self.index.contains_key(&key) {
            return Err(Error::InvalidContractionTable(format!(
                "duplicate key `{key}`"
            )));
        }
        self.index.insert(key.clone(), self.entries.len());
        self.entries.push((key, expansion.to_owned()));
        Ok(())
    }

    /// Parses `key<TAB>expansion` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = ContractionTable::from_entries(Vec::<(String, String)>::new())?;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (key, expansion) = line.split_once('\t').ok_or_else(|| {
                Error::InvalidContractionTable(format!(
                    "line {}: expected key<TAB>expansion",
                    n + 1
                ))
            })?;
            table.insert(key, expansion)?;
        }
        Ok(table)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.index.get(key).map(|&i| self.entries[i].1.as_str())
    }

    /// Entries in file order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Looks up a token, falling back to the token with surrounding quote
    /// apostrophes removed. Returns (leading, expansion, trailing).
    fn lookup<'t>(&self, token: &'t str) -> Option<(&'t str, &str, &'t str)> {
        if let Some(exp) = self.get(token) {
            return Some(("", exp, ""));
        }
        let trimmed_end = token.trim_end_matches('\'');
        if let Some(exp) = self.get(trimmed_end) {
            return Some(("", exp, &token[trimmed_end.len()..]));
        }
        let core = trimmed_end.trim_start_matches('\'');
        let lead = &token[..trimmed_end.len() - core.len()];
        self.get(core)
            .map(|exp| (lead, exp, &token[trimmed_end.len()..]))
    }
}

impl Default for ContractionTable {
    fn default() -> Self {
        ContractionTable::parse(DEFAULT_CONTRACTIONS).expect("bundled contraction table is valid")
    }
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Replaces whole-token contractions with their expansions.
///
/// A token is a maximal run of alphanumerics and apostrophes, so `scan't`
/// never matches `can't`. Input is expected to be lowercase already.
pub fn expand_contractions(s: &str, table: &ContractionTable) -> String {
    if !s.contains('\'') {
        return s.to_owned();
    }
    let mut out = String::with_capacity(s.len() + 16);
    let mut rest = s;
    while !rest.is_empty() {
        let start = rest.find(is_token_char).unwrap_or(rest.len());
        out.push_str(&rest[..start]);
        rest = &rest[start..];
        let end = rest.find(|c| !is_token_char(c)).unwrap_or(rest.len());
        let token = &rest[..end];
        match table.lookup(token) {
            Some((lead, expansion, trail)) => {
                out.push_str(lead);
                out.push_str(expansion);
                out.push_str(trail);
            }
            None => out.push_str(token),
        }
        rest = &rest[end..];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fold_examples() {
        assert_eq!(fold_ascii("café"), "cafe");
        assert_eq!(fold_ascii("don\u{2019}t"), "don't");
        assert_eq!(fold_ascii("abc"), "abc");
        assert_eq!(fold_ascii("\u{201C}hi\u{201D} \u{2014} ok"), "\"hi\" - ok");
        assert_eq!(fold_ascii("ﬁne Ｆｕｌｌ"), "fine Full");
        assert_eq!(fold_ascii("straße"), "strasse");
        assert_eq!(fold_ascii("日本語 ok"), " ok");
        assert_eq!(fold_ascii("wait\u{2026}"), "wait...");
        assert_eq!(fold_ascii("a\u{00A0}b"), "a b");
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(collapse_spaces("  a  b "), "a b");
        assert_eq!(collapse_spaces("a b"), "a b");
        assert_eq!(collapse_spaces("\t a\n"), "a");
        assert_eq!(collapse_spaces("   "), "");
    }

    #[test]
    fn lowercase_examples() {
        assert_eq!(lowercase("I Am"), "i am");
        assert_eq!(lowercase("abc1!"), "abc1!");
    }

    #[test]
    fn strip_examples() {
        assert_eq!(strip_punctuation("hello, world!"), "hello world");
        assert_eq!(strip_punctuation("a b"), "a b");
        assert_eq!(strip_punctuation("a...b"), "a b");
        assert_eq!(strip_punctuation("!?"), "");
    }

    #[test]
    fn contraction_examples() {
        let table = ContractionTable::default();
        assert_eq!(expand_contractions("i can't swim", &table), "i cannot swim");
        assert_eq!(expand_contractions("i have a cat", &table), "i have a cat");
        assert_eq!(expand_contractions("scan't", &table), "scan't");
        assert_eq!(expand_contractions("can'ts", &table), "can'ts");
        assert_eq!(
            expand_contractions("he's sure it's fine, isn't it?", &table),
            "he is sure it is fine, is not it?"
        );
        assert_eq!(
            expand_contractions("she said 'won't'", &table),
            "she said 'will not'"
        );
        assert_eq!(
            expand_contractions("'cause i'm here", &table),
            "because i am here"
        );
        assert_eq!(
            expand_contractions("rock 'n' roll", &table),
            "rock 'n' roll"
        );
    }

    #[test]
    fn bundled_table_shape() {
        let table = ContractionTable::default();
        assert!(table.len() >= 120);
        assert_eq!(table.get("can't"), Some("cannot"));
        assert_eq!(table.get("he's"), Some("he is"));
        for (key, exp) in table.entries() {
            assert!(key.contains('\''), "{key}");
            assert!(!exp.contains('\''));
            assert_eq!(key, key.to_lowercase());
        }
    }

    #[test]
    fn table_rejects_case_duplicates_and_apostrophe_expansions() {
        assert!(
            ContractionTable::from_entries([("Can't", "cannot"), ("can't", "can not")]).is_err()
        );
        assert!(ContractionTable::from_entries([("can't", "can't")]).is_err());
        assert!(ContractionTable::parse("can't cannot\n").is_err());
        let t = ContractionTable::parse("# c\n\nCan't\tcannot\n").unwrap();
        assert_eq!(t.get("can't"), Some("cannot"));
    }

    proptest! {
        #[test]
        fn transforms_are_idempotent(s in "\\PC{0,40}") {
            let f = fold_ascii(&s);
            prop_assert!(f.is_ascii());
            prop_assert_eq!(fold_ascii(&f), f.clone());
            let c = collapse_spaces(&s);
            prop_assert_eq!(collapse_spaces(&c), c.clone());
            prop_assert!(!c.contains("  "));
            let l = lowercase(&s);
            prop_assert_eq!(lowercase(&l), l.clone());
            let p = strip_punctuation(&s);
            prop_assert_eq!(strip_punctuation(&p), p.clone());
            prop_assert!(!p.chars().any(|c| c.is_ascii_punctuation()));
        }

        #[test]
        fn expansion_is_idempotent(words in proptest::collection::vec("[a-z']{1,8}|can't|won't|he's|i'm", 0..8)) {
            let table = ContractionTable::default();
            let s = words.join(" ");
            let once = expand_contractions(&s, &table);
            prop_assert_eq!(expand_contractions(&once, &table), once);
        }
    }
}
