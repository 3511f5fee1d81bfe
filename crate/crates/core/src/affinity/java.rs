//! A tolerant scanner for Java sources: finds documented methods and the
//! class they belong to by brace matching. It does not parse expressions.

/// A `/** ... */` comment located in the source by byte offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DocComment {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScannedMethod {
    /// Dotted for nested classes, e.g. `Outer.Inner`.
    pub class_name: String,
    pub name: String,
    pub param_count: usize,
    /// Raw Javadoc including delimiters.
    pub doc: Option<String>,
    /// From the opening to the closing brace; empty for abstract methods.
    pub body: String,
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanResult {
    pub methods: Vec<ScannedMethod>,
    /// Method headers whose body never closed.
    pub undelimited: usize,
}

/// Copy of `src` with comment text and string/char literal contents replaced
/// by spaces. Byte offsets are preserved. Also returns Javadoc positions.
pub(crate) fn blank_out(src: &str) -> (Vec<u8>, Vec<DocComment>) {
    let b = src.as_bytes();
    let mut out = b.to_vec();
    let mut docs = Vec::new();
    let blank = |out: &mut Vec<u8>, from: usize, to: usize| {
        for c in &mut out[from..to] {
            if *c != b'\n' {
                *c = b' ';
            }
        }
    };
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'/' if b.get(i + 1) == Some(&b'/') => {
                let end = b[i..].iter().position(|&c| c == b'\n').map_or(b.len(), |p| i + p);
                blank(&mut out, i, end);
                i = end;
            }
            b'/' if b.get(i + 1) == Some(&b'*') => {
                let end = find(b, i + 2, b"*/").map_or(b.len(), |p| p + 2);
                let is_doc = b.get(i + 2) == Some(&b'*') && b.get(i + 3) != Some(&b'/');
                if is_doc {
                    docs.push(DocComment { start: i, end });
                }
                blank(&mut out, i, end);
                i = end;
            }
            b'"' if b[i..].starts_with(b"\"\"\"") => {
                let end = find(b, i + 3, b"\"\"\"").map_or(b.len(), |p| p + 3);
                blank(&mut out, i + 3, end.saturating_sub(3).max(i + 3));
                i = end;
            }
            q @ (b'"' | b'\'') => {
                let mut j = i + 1;
                while j < b.len() && b[j] != q && b[j] != b'\n' {
                    j += if b[j] == b'\\' { 2 } else { 1 };
                }
                let j = j.min(b.len());
                blank(&mut out, i + 1, j);
                i = j + 1;
            }
            _ => i += 1,
        }
    }
    (out, docs)
}

fn find(hay: &[u8], from: usize, needle: &[u8]) -> Option<usize> {
    if from > hay.len() {
        return None;
    }
    hay[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| p + from)
}

/// Index of the brace closing the one at `open`, on blanked text.
fn matching_brace(clean: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (k, &c) in clean.iter().enumerate().skip(open) {
        match c {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(k);
                }
            }
            _ => {}
        }
    }
    None
}

const KEYWORDS: [&str; 16] = [
    "if",
    "for",
    "while",
    "switch",
    "catch",
    "synchronized",
    "return",
    "new",
    "try",
    "do",
    "else",
    "throw",
    "assert",
    "case",
    "this",
    "super",
];

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_' || c == '$')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Removes `@Name` and `@Name(...)` annotations, keeping `@interface`.
fn strip_annotations(header: &str) -> String {
    let chars: Vec<char> = header.chars().collect();
    let mut out = String::with_capacity(header.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != '@' {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (ident_char(chars[j]) || chars[j] == '.') {
            j += 1;
        }
        let name: String = chars[i + 1..j].iter().collect();
        if name == "interface" {
            out.push_str(" interface");
            i = j;
            continue;
        }
        let mut k = j;
        while k < chars.len() && chars[k].is_whitespace() {
            k += 1;
        }
        if chars.get(k) == Some(&'(') {
            let mut depth = 0;
            while k < chars.len() {
                match chars[k] {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            k += 1;
                            break;
                        }
                    }
                    _ => {}
                }
                k += 1;
            }
            j = k;
        }
        out.push(' ');
        i = j;
    }
    out
}

#[derive(Debug, PartialEq)]
enum Decl {
    Class(String),
    Method { name: String, params: usize },
    Other,
}

fn count_params(inner: &str) -> usize {
    if inner.trim().is_empty() {
        return 0;
    }
    let mut depth = 0i32;
    let mut n = 1;
    for c in inner.chars() {
        match c {
            '<' | '(' | '[' => depth += 1,
            '>' | ')' | ']' => depth -= 1,
            ',' if depth == 0 => n += 1,
            _ => {}
        }
    }
    n
}

fn classify(header: &str, class_simple_name: Option<&str>, with_body: bool) -> Decl {
    let h = strip_annotations(header);
    for word in h.split(|c: char| !ident_char(c)) {
        let at = word.as_ptr() as usize - h.as_ptr() as usize;
        if !matches!(word, "class" | "interface" | "enum" | "record") {
            continue;
        }
        let before = &h[..at];
        if before.contains('(') || before.contains('=') {
            break;
        }
        let after = &h[at + word.len()..];
        let trimmed = after.trim_start();
        if trimmed.len() == after.len() {
            continue;
        }
        let next: String = trimmed.chars().take_while(|&c| ident_char(c)).collect();
        if is_ident(&next) {
            return Decl::Class(next);
        }
    }

    let Some(open) = h.find('(') else {
        return Decl::Other;
    };
    let before = h[..open].trim_end();
    let name_start = before
        .char_indices()
        .rev()
        .take_while(|&(_, c)| ident_char(c))
        .last()
        .map_or(before.len(), |(i, _)| i);
    let name = &before[name_start..];
    let prefix = before[..name_start].trim();
    if !is_ident(name) || KEYWORDS.contains(&name) {
        return Decl::Other;
    }
    let is_ctor = class_simple_name == Some(name);
    if prefix.is_empty() && !is_ctor {
        return Decl::Other;
    }
    let mut angle = 0i32;
    for c in prefix.chars() {
        match c {
            '<' => angle += 1,
            '>' => angle -= 1,
            ',' if angle > 0 => {}
            c if ident_char(c) || c.is_whitespace() || matches!(c, '.' | '[' | ']' | '?' | '&') => {}
            _ => return Decl::Other,
        }
    }

    let mut depth = 0;
    let mut close = None;
    for (k, c) in h[open..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(open + k);
                    break;
                }
            }
            _ => {}
        }
    }
    let Some(close) = close else {
        return Decl::Other;
    };
    let rest = h[close + 1..].trim();
    let rest_ok = rest.is_empty() || rest.starts_with("throws ") || (!with_body && rest.starts_with("default"));
    if !rest_ok {
        return Decl::Other;
    }
    Decl::Method {
        name: name.to_string(),
        params: count_params(&h[open + 1..close]),
    }
}

fn line_of(src: &str, offset: usize) -> usize {
    src.as_bytes()[..offset].iter().filter(|&&c| c == b'\n').count() + 1
}

pub fn scan_java(src: &str) -> ScanResult {
    let (clean, docs) = blank_out(src);
    let mut stack: Vec<(String, String)> = Vec::new(); // (full name, simple name)
    let mut result = ScanResult::default();
    let mut stmt = 0;
    let mut i = 0;

    let doc_in = |from: usize, to: usize| {
        docs.iter()
            .rev()
            .find(|d| d.start >= from && d.end <= to)
            .map(|d| src[d.start..d.end].to_string())
    };
    let header_at = |from: usize, to: usize| String::from_utf8_lossy(&clean[from..to]).into_owned();
    // Offset of the first non-space header byte, for line numbers.
    let first_code = |from: usize, to: usize| {
        clean[from..to]
            .iter()
            .position(|c| !c.is_ascii_whitespace())
            .map_or(from, |p| from + p)
    };

    let mut parens = 0i32;
    while i < clean.len() {
        match clean[i] {
            b'(' => {
                parens += 1;
                i += 1;
            }
            b')' => {
                parens -= 1;
                i += 1;
            }
            // Braces and semicolons inside an open parenthesis belong to
            // annotation arguments or default values.
            b'{' | b'}' | b';' if parens > 0 => i += 1,
            b'{' => {
                let header = header_at(stmt, i);
                let simple = stack.last().map(|(_, s)| s.as_str());
                match classify(&header, simple, true) {
                    Decl::Class(name) => {
                        let full = match stack.last() {
                            Some((outer, _)) => format!("{outer}.{name}"),
                            None => name.clone(),
                        };
                        stack.push((full, name));
                        i += 1;
                        stmt = i;
                        parens = 0;
                    }
                    Decl::Method { name, params, .. } if !stack.is_empty() => {
                        let Some(close) = matching_brace(&clean, i) else {
                            result.undelimited += 1;
                            break;
                        };
                        if let Some(doc) = doc_in(stmt, i) {
                            result.methods.push(ScannedMethod {
                                class_name: stack.last().unwrap().0.clone(),
                                name,
                                param_count: params,
                                doc: Some(doc),
                                body: src[i..=close].to_string(),
                                line: line_of(src, first_code(stmt, i)),
                            });
                        }
                        i = close + 1;
                        stmt = i;
                        parens = 0;
                    }
                    _ => {
                        let Some(close) = matching_brace(&clean, i) else {
                            break;
                        };
                        i = close + 1;
                        stmt = i;
                        parens = 0;
                    }
                }
            }
            b'}' => {
                stack.pop();
                i += 1;
                stmt = i;
                parens = 0;
            }
            b';' => {
                if let Some((class, simple)) = stack.last() {
                    let header = header_at(stmt, i);
                    if let Decl::Method { name, params } = classify(&header, Some(simple), false) {
                        if let Some(doc) = doc_in(stmt, i) {
                            result.methods.push(ScannedMethod {
                                class_name: class.clone(),
                                name,
                                param_count: params,
                                doc: Some(doc),
                                body: String::new(),
                                line: line_of(src, first_code(stmt, i)),
                            });
                        }
                    }
                }
                i += 1;
                stmt = i;
                parens = 0;
            }
            _ => i += 1,
        }
    }
    result
}

/// The summary of a Javadoc comment: tags and HTML removed, inline tags
/// replaced by their text, cut at the first block tag. With `full` unset
/// only the first sentence is kept.
pub fn doc_summary(javadoc: &str, full: bool) -> String {
    let inner = javadoc.trim().trim_start_matches("/**").trim_end_matches("*/");
    let mut lines = Vec::new();
    for line in inner.lines() {
        let l = line.trim_start();
        let l = l.strip_prefix('*').unwrap_or(l);
        let l = l.strip_prefix(' ').unwrap_or(l);
        if l.trim_start().starts_with('@') {
            break;
        }
        lines.push(l.trim_end());
    }
    let text = strip_html(&inline_tags(&lines.join("\n")));

    let text = if full {
        text
    } else {
        let para = match text.trim_start().find("\n\n") {
            Some(p) => text.trim_start()[..p].to_string(),
            None => text.trim_start().to_string(),
        };
        first_sentence(&para).to_string()
    };
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn first_sentence(text: &str) -> &str {
    let b = text.as_bytes();
    for (i, &c) in b.iter().enumerate() {
        if c == b'.' && b.get(i + 1).is_none_or(|n| n.is_ascii_whitespace()) {
            return &text[..=i];
        }
    }
    text
}

/// `{@code x}` → `x`, `{@link A#b label}` → `label`, `{@link A#b}` → `A.b`.
fn inline_tags(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(p) = rest.find("{@") {
        out.push_str(&rest[..p]);
        let after = &rest[p + 2..];
        let mut depth = 1;
        let mut end = None;
        for (k, c) in after.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(k);
                        break;
                    }
                }
                _ => {}
            }
        }
        let Some(end) = end else {
            out.push_str(&rest[p..]);
            return out;
        };
        let body = &after[..end];
        let (tag, arg) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let arg = arg.trim();
        let repl = match tag {
            "link" | "linkplain" => match arg.split_once(char::is_whitespace) {
                Some((_, label)) => label.trim().to_string(),
                None => arg.trim_start_matches('#').replace('#', "."),
            },
            "inheritDoc" => String::new(),
            _ => arg.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;"),
        };
        out.push_str(&repl);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    out
}

fn strip_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_tag = false;
    for c in text.chars() {
        match c {
            '<' if !in_tag => in_tag = true,
            '>' if in_tag => {
                in_tag = false;
                out.push(' ');
            }
            _ if !in_tag => out.push(c),
            _ => {}
        }
    }
    out.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&nbsp;", " ")
        .replace("&amp;", "&")
}
