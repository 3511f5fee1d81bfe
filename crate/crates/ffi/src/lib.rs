//! C ABI for commentbench.
//!
//! Every function returns a [`CbStatus`]. On failure the message is kept per
//! thread and read with [`cb_last_error_message`]. Text crosses the boundary
//! as NUL-terminated UTF-8 and is tokenized on whitespace.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use commentbench::analysis::{bh_adjust, spearman};
use commentbench::corpus::{tokenize, ParallelCorpus, ParallelExample, TokenSequence, TokenizerConfig};
use commentbench::metrics::{score_set, BleuVariant, ScoredPair};
use commentbench::retrieval::{build_index, AnalyzerConfig, Bm25Params, Index};
use commentbench::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Data = 5,
    Panic = 6,
}

/// Opaque BM25 index.
pub struct CbIndex {
    inner: Index,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(CbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => CbStatus::Io,
            Error::UnknownVariant(_) | Error::UnknownTokenizer(_) | Error::InvalidParameter(_) => {
                CbStatus::InvalidArgument
            }
            _ => CbStatus::Data,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CbStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CbStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(CbStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(CbStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn texts<'a>(p: *const *const c_char, n: usize, what: &str) -> Result<Vec<&'a str>, Fail> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null(what));
    }
    std::slice::from_raw_parts(p, n)
        .iter()
        .map(|&s| text(s, what))
        .collect()
}

unsafe fn floats<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Fail> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn whitespace(s: &str) -> TokenSequence {
    tokenize(s, &TokenizerConfig::whitespace())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Scores `n` candidate lines against one reference line each under
/// `variant` (e.g. "M2", "Moses"). Writes the 0–100 score to `out`.
///
/// # Safety
/// `candidates` and `references` must point to `n` valid C strings; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_bleu(
    variant: *const c_char,
    candidates: *const *const c_char,
    references: *const *const c_char,
    n: usize,
    out: *mut f64,
) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let variant: BleuVariant = text(variant, "variant")?.parse()?;
        let cands: Vec<TokenSequence> = texts(candidates, n, "candidates")?
            .into_iter()
            .map(whitespace)
            .collect();
        let refs: Vec<[TokenSequence; 1]> = texts(references, n, "references")?
            .into_iter()
            .map(|r| [whitespace(r)])
            .collect();
        let pairs: Vec<ScoredPair<'_, TokenSequence>> = cands
            .iter()
            .zip(&refs)
            .map(|(c, r)| ScoredPair::new(c.tokens(), r))
            .collect();
        *out = score_set(&pairs, variant)?.score;
        Ok(())
    })
}

/// Spearman's rho and two-sided p-value. Both are NaN when either input is
/// constant.
///
/// # Safety
/// `xs` and `ys` must point to `n` doubles; `rho` and `p` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_spearman(xs: *const f64, ys: *const f64, n: usize, rho: *mut f64, p: *mut f64) -> CbStatus {
    guard(|| {
        if rho.is_null() || p.is_null() {
            return Err(null("output"));
        }
        let r = spearman(floats(xs, n, "xs")?, floats(ys, n, "ys")?)?;
        *rho = r.map_or(f64::NAN, |s| s.rho);
        *p = r.map_or(f64::NAN, |s| s.p);
        Ok(())
    })
}

/// Benjamini-Hochberg adjusted p-values, in input order.
///
/// # Safety
/// `pvals` and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn cb_bh_adjust(pvals: *const f64, n: usize, out: *mut f64) -> CbStatus {
    guard(|| {
        let adjusted = bh_adjust(floats(pvals, n, "pvals")?)?;
        if n > 0 {
            if out.is_null() {
                return Err(null("out"));
            }
            std::slice::from_raw_parts_mut(out, n).copy_from_slice(&adjusted);
        }
        Ok(())
    })
}

/// Builds an index over `n` code/comment pairs. Free it with
/// [`cb_index_free`].
///
/// # Safety
/// `sources` and `comments` must point to `n` valid C strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cb_index_build(
    sources: *const *const c_char,
    comments: *const *const c_char,
    n: usize,
    out: *mut *mut CbIndex,
) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let srcs = texts(sources, n, "sources")?;
        let tgts = texts(comments, n, "comments")?;
        let examples = srcs
            .iter()
            .zip(&tgts)
            .enumerate()
            .map(|(i, (s, t))| ParallelExample {
                id: i.to_string(),
                source: whitespace(s),
                target: whitespace(t),
                meta: None,
            })
            .collect();
        let index = build_index(
            &ParallelCorpus::new(examples),
            AnalyzerConfig::new(TokenizerConfig::whitespace()),
        )?;
        *out = Box::into_raw(Box::new(CbIndex { inner: index }));
        Ok(())
    })
}

/// # Safety
/// `path` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_index_load(path: *const c_char, out: *mut *mut CbIndex) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let index = Index::load(Path::new(text(path, "path")?))?;
        *out = Box::into_raw(Box::new(CbIndex { inner: index }));
        Ok(())
    })
}

/// # Safety
/// `index` must come from this library; `path` must be a valid C string.
#[no_mangle]
pub unsafe extern "C" fn cb_index_save(index: *const CbIndex, path: *const c_char) -> CbStatus {
    guard(|| {
        let index = index.as_ref().ok_or_else(|| null("index"))?;
        index.inner.save(Path::new(text(path, "path")?))?;
        Ok(())
    })
}

/// Number of indexed documents, or 0 for a null handle.
///
/// # Safety
/// `index` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn cb_index_len(index: *const CbIndex) -> usize {
    index.as_ref().map_or(0, |i| i.inner.n_docs())
}

/// Top `k` documents for `code` under k1 = 1.2, b = 0.75. Fills up to `k`
/// entries of `docs` and `scores` and writes the count to `n_hits`; zero hits
/// means no document shares a term with the query.
///
/// # Safety
/// `index` must come from this library; `docs` and `scores` must hold `k`
/// entries; `n_hits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_index_retrieve(
    index: *const CbIndex,
    code: *const c_char,
    k: usize,
    docs: *mut usize,
    scores: *mut f64,
    n_hits: *mut usize,
) -> CbStatus {
    guard(|| {
        let index = index.as_ref().ok_or_else(|| null("index"))?;
        if n_hits.is_null() || (k > 0 && (docs.is_null() || scores.is_null())) {
            return Err(null("output"));
        }
        let hits = index.inner.retrieve(text(code, "code")?, k, Bm25Params::default());
        for (i, h) in hits.iter().enumerate() {
            *docs.add(i) = h.doc;
            *scores.add(i) = h.score;
        }
        *n_hits = hits.len();
        Ok(())
    })
}

/// The stored comment of `doc`, space-joined. Release with
/// [`cb_string_free`].
///
/// # Safety
/// `index` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_index_comment(index: *const CbIndex, doc: usize, out: *mut *mut c_char) -> CbStatus {
    guard(|| {
        let index = index.as_ref().ok_or_else(|| null("index"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let comment = index
            .inner
            .payload(doc)
            .ok_or_else(|| Fail::from(Error::UnknownDocument(doc)))?;
        *out = CString::new(comment.joined())
            .map_err(|_| Fail(CbStatus::Data, "comment contains NUL".into()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `index` must be null or come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cb_index_free(index: *mut CbIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
