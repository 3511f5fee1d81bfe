mod common;

use commentbench::corpus::split_subtokens;
use regex::Regex;

/// Letter runs, digit runs and uppercase runs; an uppercase run followed by
/// lowercase gives its last capital to the next word.
fn regex_split(token: &str) -> Vec<String> {
    let word = Regex::new(r"[A-Z]*[a-z]+|[A-Z]+|[0-9]+").unwrap();
    let mut out = Vec::new();
    for chunk in token.split('_') {
        for m in word.find_iter(chunk) {
            let s = m.as_str();
            let caps = s.chars().take_while(|c| c.is_ascii_uppercase()).count();
            if caps >= 2 && caps < s.len() {
                out.push(s[..caps - 1].to_lowercase());
                out.push(s[caps - 1..].to_lowercase());
            } else {
                out.push(s.to_lowercase());
            }
        }
    }
    out
}

#[test]
fn fixture_agrees_with_both_oracles() {
    let text = std::fs::read_to_string(common::fixture("subtokens.tsv")).unwrap();
    let mut n = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (token, expected) = line.split_once('\t').unwrap();
        let expected: Vec<String> = expected.split(' ').map(String::from).collect();
        assert_eq!(split_subtokens(token, true), expected, "split of {token}");
        assert_eq!(regex_split(token), expected, "regex oracle on {token}");
        n += 1;
    }
    assert_eq!(n, 50);
}

#[test]
fn random_identifiers_agree_with_regex_oracle() {
    use rand::{Rng, SeedableRng};
    let alphabet: Vec<char> = "aAbBzZ09_".chars().collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let len = rng.random_range(1..12);
        let token: String = (0..len)
            .map(|_| alphabet[rng.random_range(0..alphabet.len())])
            .collect();
        assert_eq!(split_subtokens(&token, true), regex_split(&token), "{token}");
    }
}
