use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{tokenize, ExampleMeta, ParallelCorpus, ParallelExample, TokenizerConfig};
use crate::error::{Error, Result};

/// Defaults: lenient, non-empty examples, passthrough tokenization.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Fail on the first malformed line instead of skipping it.
    pub strict: bool,
    /// Accept examples whose source or target tokenizes to nothing.
    pub allow_empty: bool,
    pub source_tokenizer: TokenizerConfig,
    pub target_tokenizer: TokenizerConfig,
}

impl LoadOptions {
    pub fn strict(mut self, on: bool) -> Self {
        self.strict = on;
        self
    }

    pub fn allow_empty(mut self, on: bool) -> Self {
        self.allow_empty = on;
        self
    }

    /// Uses the same tokenizer for both sides.
    pub fn tokenizer(mut self, config: TokenizerConfig) -> Self {
        self.source_tokenizer = config.clone();
        self.target_tokenizer = config;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedLine {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub loaded: usize,
    pub skipped: Vec<SkippedLine>,
}

#[derive(Deserialize)]
struct JsonlRecord {
    #[serde(default)]
    id: Option<String>,
    src: String,
    tgt: String,
    #[serde(default)]
    meta: Option<ExampleMeta>,
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Loads a JSON Lines corpus. Records without an `id` get their 1-based line
/// number as id.
pub fn load_jsonl(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<(ParallelCorpus, LoadReport)> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    parse_jsonl(&text, path, opts)
}

pub(crate) fn parse_jsonl(text: &str, path: &Path, opts: &LoadOptions) -> Result<(ParallelCorpus, LoadReport)> {
    let mut builder = Builder::new(path, opts);
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            builder.malformed(lineno, "blank line")?;
            continue;
        }
        let record: JsonlRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                builder.malformed(lineno, &e.to_string())?;
                continue;
            }
        };
        let id = record.id.unwrap_or_else(|| lineno.to_string());
        builder.push(lineno, id, &record.src, &record.tgt, record.meta)?;
    }
    Ok(builder.finish())
}

/// Loads aligned line-per-example files. Example ids are 0-based line numbers.
pub fn load_parallel_files(
    src_path: impl AsRef<Path>,
    tgt_path: impl AsRef<Path>,
    opts: &LoadOptions,
) -> Result<(ParallelCorpus, LoadReport)> {
    let src_path = src_path.as_ref();
    let src = read_to_string(src_path)?;
    let tgt = read_to_string(tgt_path.as_ref())?;
    parse_parallel(&src, &tgt, src_path, opts)
}

pub(crate) fn parse_parallel(
    src: &str,
    tgt: &str,
    path: &Path,
    opts: &LoadOptions,
) -> Result<(ParallelCorpus, LoadReport)> {
    let src_lines: Vec<&str> = src.lines().collect();
    let tgt_lines: Vec<&str> = tgt.lines().collect();
    if src_lines.len() != tgt_lines.len() {
        return Err(Error::LineCountMismatch {
            src: src_lines.len(),
            tgt: tgt_lines.len(),
        });
    }
    let mut builder = Builder::new(path, opts);
    for (idx, (s, t)) in src_lines.iter().zip(&tgt_lines).enumerate() {
        builder.push(idx + 1, idx.to_string(), s, t, None)?;
    }
    Ok(builder.finish())
}

struct Builder<'a> {
    path: &'a Path,
    opts: &'a LoadOptions,
    seen: HashMap<String, usize>,
    examples: Vec<ParallelExample>,
    report: LoadReport,
}

impl<'a> Builder<'a> {
    fn new(path: &'a Path, opts: &'a LoadOptions) -> Self {
        Self {
            path,
            opts,
            seen: HashMap::new(),
            examples: Vec::new(),
            report: LoadReport::default(),
        }
    }

    fn malformed(&mut self, line: usize, reason: &str) -> Result<()> {
        if self.opts.strict {
            return Err(Error::MalformedLine {
                path: self.path.to_path_buf(),
                line,
                reason: reason.to_string(),
            });
        }
        self.report.skipped.push(SkippedLine {
            line,
            reason: reason.to_string(),
        });
        Ok(())
    }

    fn push(&mut self, line: usize, id: String, src: &str, tgt: &str, meta: Option<ExampleMeta>) -> Result<()> {
        let source = tokenize(src, &self.opts.source_tokenizer);
        let target = tokenize(tgt, &self.opts.target_tokenizer);
        if !self.opts.allow_empty && (source.is_empty() || target.is_empty()) {
            return self.malformed(line, "empty source or target");
        }
        if let Some(&first) = self.seen.get(&id) {
            return Err(Error::DuplicateId {
                id,
                first,
                second: line,
            });
        }
        self.seen.insert(id.clone(), line);
        self.examples.push(ParallelExample {
            id,
            source,
            target,
            meta,
        });
        Ok(())
    }

    fn finish(mut self) -> (ParallelCorpus, LoadReport) {
        self.report.loaded = self.examples.len();
        (ParallelCorpus::new(self.examples), self.report)
    }
}
