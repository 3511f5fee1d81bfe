//! Binary snapshot of a built index.
//!
//! Layout (all integers little-endian):
//! `CBIX` magic, u16 version, analyzer as length-prefixed JSON, u32 doc
//! count, per doc (id, dl, payload tokenizer id, payload tokens), avgdl as
//! f64 bits, u32 term count, per term (term, u32 postings, (doc, tf)*).
//! Strings are u32 length + UTF-8 bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::analyzer::AnalyzerConfig;
use super::index::{mean_length, Index, Posting};
use crate::corpus::TokenSequence;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"CBIX";
const VERSION: u16 = 1;

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Snapshot(format!("truncated at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|e| Error::Snapshot(e.to_string()))
    }
}

impl Index {
    /// Serializes the index. Building twice from the same corpus yields the
    /// same bytes.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        put_str(&mut out, &serde_json::to_string(&self.analyzer)?);
        put_u32(&mut out, self.n_docs() as u32);
        for doc in 0..self.n_docs() {
            put_str(&mut out, &self.ids[doc]);
            put_u32(&mut out, self.doc_lengths[doc]);
            let payload = &self.payloads[doc];
            put_str(&mut out, payload.tokenizer_id());
            put_u32(&mut out, payload.len() as u32);
            for t in payload.iter() {
                put_str(&mut out, t);
            }
        }
        out.extend_from_slice(&self.avgdl.to_bits().to_le_bytes());
        put_u32(&mut out, self.postings.len() as u32);
        for (term, list) in &self.postings {
            put_str(&mut out, term);
            put_u32(&mut out, list.len() as u32);
            for p in list {
                put_u32(&mut out, p.doc);
                put_u32(&mut out, p.tf);
            }
        }
        Ok(out)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Index> {
        let mut r = Reader { buf, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Snapshot("not an index snapshot".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let analyzer: AnalyzerConfig = serde_json::from_str(&r.string()?)?;
        let n_docs = r.u32()? as usize;
        if n_docs == 0 {
            return Err(Error::Snapshot("no documents".into()));
        }
        let mut ids = Vec::new();
        let mut doc_lengths = Vec::new();
        let mut payloads = Vec::new();
        for _ in 0..n_docs {
            ids.push(r.string()?);
            doc_lengths.push(r.u32()?);
            let tok_id = r.string()?;
            let n = r.u32()? as usize;
            let tokens = (0..n).map(|_| r.string()).collect::<Result<Vec<_>>>()?;
            payloads.push(TokenSequence::new(tokens, tok_id).map_err(|e| Error::Snapshot(e.to_string()))?);
        }
        let avgdl = f64::from_bits(r.u64()?);
        if avgdl.to_bits() != mean_length(&doc_lengths).to_bits() {
            return Err(Error::Snapshot("avgdl does not match document lengths".into()));
        }

        let n_terms = r.u32()?;
        let mut postings = BTreeMap::new();
        let mut seen = vec![0u64; n_docs];
        for _ in 0..n_terms {
            let term = r.string()?;
            let n = r.u32()? as usize;
            let mut list = Vec::with_capacity(n.min(n_docs));
            for _ in 0..n {
                let p = Posting {
                    doc: r.u32()?,
                    tf: r.u32()?,
                };
                let ordered = list.last().is_none_or(|q: &Posting| q.doc < p.doc);
                if p.doc as usize >= n_docs || p.tf == 0 || !ordered {
                    return Err(Error::Snapshot(format!("bad posting for {term:?}")));
                }
                seen[p.doc as usize] += p.tf as u64;
                list.push(p);
            }
            if list.is_empty() || postings.insert(term.clone(), list).is_some() {
                return Err(Error::Snapshot(format!("bad postings list for {term:?}")));
            }
        }
        if r.pos != buf.len() {
            return Err(Error::Snapshot("trailing bytes".into()));
        }
        if seen.iter().zip(&doc_lengths).any(|(&s, &dl)| s != dl as u64) {
            return Err(Error::Snapshot("postings disagree with document lengths".into()));
        }
        Ok(Index {
            postings,
            doc_lengths,
            avgdl,
            ids,
            payloads,
            analyzer,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Index> {
        let path = path.as_ref();
        let buf = fs::read(path).map_err(|e| Error::io(path, e))?;
        Index::from_bytes(&buf)
    }
}
