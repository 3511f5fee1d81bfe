use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::java::{doc_summary, scan_java};
use crate::corpus::{tokenize, ExampleMeta, TokenSequence, TokenizerConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodRecord {
    pub project: String,
    /// Relative to the extraction root, `/`-separated.
    pub path: String,
    pub class_name: String,
    pub method_name: String,
    pub param_count: usize,
    pub comment: TokenSequence,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractOptions {
    /// Keep the whole summary instead of its first sentence.
    pub full_comment: bool,
    pub tokenizer: TokenizerConfig,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            full_comment: false,
            tokenizer: TokenizerConfig::punctuation().with_lowercase(true),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExtractReport {
    pub files: usize,
    pub unreadable_files: usize,
    pub undelimited_methods: usize,
    /// Documented methods whose summary was empty.
    pub empty_comments: usize,
    pub records: usize,
}

/// Records for the documented methods of one Java source.
pub fn extract_from_source(
    project: &str,
    path: &str,
    src: &str,
    opts: &ExtractOptions,
) -> (Vec<MethodRecord>, ExtractReport) {
    let scan = scan_java(src);
    let mut report = ExtractReport {
        files: 1,
        undelimited_methods: scan.undelimited,
        ..Default::default()
    };
    let mut records = Vec::new();
    for m in scan.methods {
        let Some(doc) = m.doc else { continue };
        let comment = tokenize(&doc_summary(&doc, opts.full_comment), &opts.tokenizer);
        if comment.is_empty() {
            report.empty_comments += 1;
            continue;
        }
        records.push(MethodRecord {
            project: project.to_string(),
            path: path.to_string(),
            class_name: m.class_name,
            method_name: m.name,
            param_count: m.param_count,
            comment,
            body: m.body,
        });
    }
    report.records = records.len();
    (records, report)
}

fn java_files(root: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in WalkDir::new(root).follow_links(false) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "java") {
            files.push(entry.into_path());
        }
    }
    files.sort();
    Ok(files)
}

/// Walks `root`; each top-level directory is a project. Files that cannot be
/// read as UTF-8 are skipped and counted.
pub fn extract_methods(root: impl AsRef<Path>, opts: &ExtractOptions) -> Result<(Vec<MethodRecord>, ExtractReport)> {
    let root = root.as_ref();
    if !root.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let root_name = root
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| ".".to_string());
    let files = java_files(root)?;

    let per_file: Vec<(Vec<MethodRecord>, ExtractReport)> = files
        .par_iter()
        .map(|file| {
            let rel = file.strip_prefix(root).unwrap_or(file);
            let parts: Vec<String> = rel
                .components()
                .map(|c| c.as_os_str().to_string_lossy().into_owned())
                .collect();
            let project = if parts.len() > 1 {
                parts[0].clone()
            } else {
                root_name.clone()
            };
            let rel = parts.join("/");
            match fs::read_to_string(file) {
                Ok(src) => extract_from_source(&project, &rel, &src, opts),
                Err(_) => (
                    Vec::new(),
                    ExtractReport {
                        files: 1,
                        unreadable_files: 1,
                        ..Default::default()
                    },
                ),
            }
        })
        .collect();

    let mut records = Vec::new();
    let mut report = ExtractReport::default();
    for (recs, r) in per_file {
        report.files += r.files;
        report.unreadable_files += r.unreadable_files;
        report.undelimited_methods += r.undelimited_methods;
        report.empty_comments += r.empty_comments;
        records.extend(recs);
    }
    report.records = records.len();
    Ok((records, report))
}

/// One line of the corpus JSONL format. `src` holds the raw method body.
#[derive(Serialize, Deserialize)]
struct RecordLine {
    id: String,
    src: String,
    tgt: String,
    meta: ExampleMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tokenizer: Option<String>,
}

impl MethodRecord {
    pub fn meta(&self) -> ExampleMeta {
        ExampleMeta {
            project: Some(self.project.clone()),
            class_name: Some(self.class_name.clone()),
            path: Some(self.path.clone()),
            method_name: Some(self.method_name.clone()),
            param_count: Some(self.param_count),
        }
    }
}

pub fn write_records_jsonl<W: Write>(records: &[MethodRecord], mut w: W) -> Result<()> {
    for (i, r) in records.iter().enumerate() {
        let line = RecordLine {
            id: i.to_string(),
            src: r.body.clone(),
            tgt: r.comment.joined(),
            meta: r.meta(),
            tokenizer: Some(r.comment.tokenizer_id().to_string()),
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
    }
    Ok(())
}

/// Reads records written by [`write_records_jsonl`]. The comment keeps the
/// stored tokenization.
pub fn read_records_jsonl(path: impl AsRef<Path>) -> Result<Vec<MethodRecord>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: &str| Error::MalformedLine {
            path: path.to_path_buf(),
            line: idx + 1,
            reason: reason.to_string(),
        };
        let rec: RecordLine = serde_json::from_str(&line).map_err(|e| malformed(&e.to_string()))?;
        let comment = TokenSequence::from_spaced(&rec.tgt);
        let comment = match &rec.tokenizer {
            Some(id) => TokenSequence::new(comment.into_tokens(), id.as_str())?,
            None => comment,
        };
        if comment.is_empty() {
            return Err(malformed("empty comment"));
        }
        let m = rec.meta;
        out.push(MethodRecord {
            project: m.project.ok_or_else(|| malformed("missing meta.project"))?,
            path: m.path.unwrap_or_default(),
            class_name: m.class_name.ok_or_else(|| malformed("missing meta.class_name"))?,
            method_name: m.method_name.ok_or_else(|| malformed("missing meta.method_name"))?,
            param_count: m.param_count.unwrap_or(0),
            comment,
            body: rec.src,
        });
    }
    Ok(out)
}
