use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    /// Arithmetic mean of per-example scores.
    Sentence,
    /// Counts accumulated over the whole set before combining.
    Corpus,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::Sentence => "sentence",
            Aggregation::Corpus => "corpus",
        }
    }
}

/// How zero or small n-gram precisions are adjusted before the geometric mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothing {
    None,
    /// `(m + 1) / (c + 1)` for every order `n >= from_order`.
    AddOne {
        from_order: usize,
    },
    /// Orders with no match get `1 / ((n - 1) + 5 / ln(cand_len))`.
    LengthFallback,
    /// The i-th order with no match (i = 1, 2, ..) gets `1 / (2^i * c)`.
    Exponential,
}

/// The BLEU implementations found in code-comment generation work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BleuVariant {
    Cn,
    Dc,
    Fc,
    Moses,
    Ncs,
    Sacre,
    M2,
}

impl BleuVariant {
    pub const ALL: [BleuVariant; 7] = [
        BleuVariant::Cn,
        BleuVariant::Dc,
        BleuVariant::Fc,
        BleuVariant::Moses,
        BleuVariant::Ncs,
        BleuVariant::Sacre,
        BleuVariant::M2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BleuVariant::Cn => "CN",
            BleuVariant::Dc => "DC",
            BleuVariant::Fc => "FC",
            BleuVariant::Moses => "Moses",
            BleuVariant::Ncs => "NCS",
            BleuVariant::Sacre => "Sacre",
            BleuVariant::M2 => "M2",
        }
    }

    pub fn aggregation(self) -> Aggregation {
        match self {
            BleuVariant::Cn | BleuVariant::Dc | BleuVariant::Ncs | BleuVariant::M2 => Aggregation::Sentence,
            BleuVariant::Fc | BleuVariant::Moses | BleuVariant::Sacre => Aggregation::Corpus,
        }
    }

    pub fn smoothing(self) -> Smoothing {
        match self {
            // CN and M2 only differ in lineage; both leave unigrams alone.
            BleuVariant::Cn | BleuVariant::M2 => Smoothing::AddOne { from_order: 2 },
            BleuVariant::Ncs => Smoothing::AddOne { from_order: 1 },
            BleuVariant::Dc => Smoothing::LengthFallback,
            // Moses is scored exactly like FC.
            BleuVariant::Fc | BleuVariant::Moses => Smoothing::None,
            BleuVariant::Sacre => Smoothing::Exponential,
        }
    }

    pub fn parse_list(names: &[String]) -> Result<Vec<BleuVariant>, Error> {
        let mut out = Vec::new();
        for name in names {
            for part in name.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                if part.eq_ignore_ascii_case("all") {
                    out.extend(BleuVariant::ALL);
                } else {
                    out.push(part.parse()?);
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|v| seen.insert(*v));
        Ok(out)
    }
}

impl fmt::Display for BleuVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BleuVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let lower = s.trim().to_ascii_lowercase();
        let key = lower
            .strip_prefix("bleu-")
            .or_else(|| lower.strip_prefix("bleu_"))
            .unwrap_or(&lower);
        Ok(match key {
            "cn" => BleuVariant::Cn,
            "dc" => BleuVariant::Dc,
            "fc" => BleuVariant::Fc,
            "moses" => BleuVariant::Moses,
            "ncs" => BleuVariant::Ncs,
            "sacre" | "sacrebleu" => BleuVariant::Sacre,
            "m2" => BleuVariant::M2,
            _ => return Err(Error::UnknownVariant(s.to_string())),
        })
    }
}

impl Serialize for BleuVariant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for BleuVariant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
