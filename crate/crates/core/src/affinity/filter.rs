use std::collections::HashSet;

use super::extract::MethodRecord;
use super::java::blank_out;

fn accessor_name(name: &str) -> bool {
    ["get", "set", "is"].iter().any(|p| {
        name.strip_prefix(p)
            .and_then(|rest| rest.chars().next())
            .is_some_and(char::is_uppercase)
    })
}

/// A body holding exactly one statement that is a `return` or a plain
/// assignment.
fn trivial_body(body: &str) -> bool {
    let (clean, _) = blank_out(body);
    let clean = String::from_utf8_lossy(&clean);
    let inner = clean.trim();
    let Some(inner) = inner.strip_prefix('{').and_then(|s| s.strip_suffix('}')) else {
        return false;
    };
    let stmt = inner.trim();
    if stmt.is_empty() || stmt.contains('{') || stmt.matches(';').count() != 1 || !stmt.ends_with(';') {
        return false;
    }
    if stmt.starts_with("return ") || stmt.starts_with("return(") || stmt == "return;" {
        return true;
    }
    // `target = value;` where `=` is not part of a comparison.
    match stmt.find('=') {
        Some(p) => {
            let lhs = stmt[..p].trim();
            let next = stmt[p + 1..].chars().next();
            !lhs.is_empty()
                && next != Some('=')
                && lhs
                    .chars()
                    .all(|c| c.is_alphanumeric() || matches!(c, '_' | '$' | '.' | '[' | ']'))
        }
        None => false,
    }
}

pub fn is_getter_or_setter(record: &MethodRecord) -> bool {
    accessor_name(&record.method_name) || trivial_body(&record.body)
}

/// Drops getters and setters, then keeps only the first record (in input
/// order) of each overloaded method name within a class.
pub fn filter_records(records: &[MethodRecord]) -> Vec<MethodRecord> {
    let mut seen: HashSet<(&str, &str, &str, &str)> = HashSet::new();
    records
        .iter()
        .filter(|r| !is_getter_or_setter(r))
        .filter(|r| {
            seen.insert((
                r.project.as_str(),
                r.path.as_str(),
                r.class_name.as_str(),
                r.method_name.as_str(),
            ))
        })
        .cloned()
        .collect()
}
