use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::extract::MethodRecord;
use crate::error::{Error, Result};

pub const DEFAULT_PAIR_COUNT: usize = 5000;
pub const DEFAULT_MAX_PER_CLASS: usize = 6;

/// Ordered from least to most expected similarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AffinityGroupKind {
    InterProject,
    IntraProject,
    IntraClass,
}

impl AffinityGroupKind {
    pub const ALL: [AffinityGroupKind; 3] = [
        AffinityGroupKind::InterProject,
        AffinityGroupKind::IntraProject,
        AffinityGroupKind::IntraClass,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AffinityGroupKind::InterProject => "inter_project",
            AffinityGroupKind::IntraProject => "intra_project",
            AffinityGroupKind::IntraClass => "intra_class",
        }
    }

    /// Whether records from `a` and `b` may form a pair of this kind. Pairs
    /// must also be two distinct records.
    pub fn admits(self, a: &MethodRecord, b: &MethodRecord) -> bool {
        let same_project = a.project == b.project;
        let same_class = same_project && a.class_name == b.class_name;
        match self {
            AffinityGroupKind::InterProject => !same_project,
            AffinityGroupKind::IntraProject => same_project && !same_class,
            AffinityGroupKind::IntraClass => same_class,
        }
    }
}

impl fmt::Display for AffinityGroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AffinityGroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "inter_project" | "inter" => Ok(AffinityGroupKind::InterProject),
            "intra_project" | "project" => Ok(AffinityGroupKind::IntraProject),
            "intra_class" | "class" => Ok(AffinityGroupKind::IntraClass),
            _ => Err(Error::InvalidParameter(format!("unknown affinity group {s:?}"))),
        }
    }
}

/// Index pairs into the record list; the first of each pair is the
/// reference, the second the candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSample {
    pub kind: AffinityGroupKind,
    pub seed: u64,
    pub max_per_class: usize,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy)]
pub struct SampleOptions {
    pub count: usize,
    pub seed: u64,
    pub max_per_class: usize,
}

impl SampleOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            count: DEFAULT_PAIR_COUNT,
            seed,
            max_per_class: DEFAULT_MAX_PER_CLASS,
        }
    }
}

/// Records grouped so every project and every class is a contiguous run of
/// `order`.
struct Layout {
    order: Vec<usize>,
    /// Per position in `order`: project range and class range.
    project: Vec<(usize, usize)>,
    class: Vec<(usize, usize)>,
    class_id: Vec<usize>,
}

fn layout(records: &[MethodRecord]) -> Layout {
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (&records[a], &records[b]);
        (&ra.project, &ra.class_name, a).cmp(&(&rb.project, &rb.class_name, b))
    });
    let n = order.len();
    let mut project = vec![(0, 0); n];
    let mut class = vec![(0, 0); n];
    let mut class_id = vec![0; n];
    let runs = |same: &dyn Fn(usize, usize) -> bool, out: &mut Vec<(usize, usize)>| {
        let mut start = 0;
        for i in 1..=n {
            if i == n || !same(order[start], order[i]) {
                out[start..i].fill((start, i));
                start = i;
            }
        }
    };
    runs(&|a, b| records[a].project == records[b].project, &mut project);
    runs(
        &|a, b| records[a].project == records[b].project && records[a].class_name == records[b].class_name,
        &mut class,
    );
    let mut id = 0;
    for i in 0..n {
        if i > 0 && class[i].0 != class[i - 1].0 {
            id += 1;
        }
        class_id[i] = id;
    }
    Layout {
        order,
        project,
        class,
        class_id,
    }
}

/// Uniform position in `outer` minus the sub-range `hole`.
fn pick_outside(rng: &mut ChaCha8Rng, outer: (usize, usize), hole: (usize, usize)) -> usize {
    let size = (outer.1 - outer.0) - (hole.1 - hole.0);
    let r = outer.0 + rng.random_range(0..size);
    if r >= hole.0 {
        r + (hole.1 - hole.0)
    } else {
        r
    }
}

impl Layout {
    fn partners(&self, kind: AffinityGroupKind, pos: usize) -> usize {
        let n = self.order.len();
        let (p, c) = (self.project[pos], self.class[pos]);
        match kind {
            AffinityGroupKind::InterProject => n - (p.1 - p.0),
            AffinityGroupKind::IntraProject => (p.1 - p.0) - (c.1 - c.0),
            AffinityGroupKind::IntraClass => (c.1 - c.0) - 1,
        }
    }

    fn pick_partner(&self, kind: AffinityGroupKind, pos: usize, rng: &mut ChaCha8Rng) -> usize {
        let (p, c) = (self.project[pos], self.class[pos]);
        match kind {
            AffinityGroupKind::InterProject => pick_outside(rng, (0, self.order.len()), p),
            AffinityGroupKind::IntraProject => pick_outside(rng, p, c),
            AffinityGroupKind::IntraClass => pick_outside(rng, c, (pos, pos + 1)),
        }
    }
}

fn unordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Draws `count` distinct pairs of the given kind, uniformly over the
/// ordered pairs still available. For intra-class pairs no class contributes
/// more than `max_per_class` pairs.
pub fn sample_pairs(records: &[MethodRecord], kind: AffinityGroupKind, opts: SampleOptions) -> Result<PairSample> {
    let insufficient = |reason: String| Error::InsufficientPopulation {
        kind: kind.as_str(),
        reason,
    };
    if kind == AffinityGroupKind::IntraClass && opts.max_per_class == 0 {
        return Err(Error::InvalidParameter("max_per_class must be at least 1".into()));
    }
    let lay = layout(records);
    let n = records.len();
    let weights: Vec<u64> = (0..n).map(|pos| lay.partners(kind, pos) as u64).collect();

    // Unordered pairs available, after the per-class cap.
    let capacity: u128 = match kind {
        AffinityGroupKind::IntraClass => {
            let mut total = 0u128;
            let mut pos = 0;
            while pos < n {
                let (s, e) = lay.class[pos];
                let m = (e - s) as u128;
                total += (m * m.saturating_sub(1) / 2).min(opts.max_per_class as u128);
                pos = e;
            }
            total
        }
        _ => weights.iter().map(|&w| w as u128).sum::<u128>() / 2,
    };
    if (opts.count as u128) > capacity {
        return Err(insufficient(format!(
            "{} pairs requested, {capacity} available among {n} records",
            opts.count
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut pairs = Vec::with_capacity(opts.count);
    if opts.count == 0 {
        return Ok(PairSample {
            kind,
            seed: opts.seed,
            max_per_class: opts.max_per_class,
            pairs,
        });
    }

    if kind != AffinityGroupKind::IntraClass && (opts.count as u128) * 2 > capacity {
        // Dense request: enumerate every pair and take a random subset.
        let mut all: Vec<(usize, usize)> = Vec::with_capacity(capacity as usize);
        for a in 0..n {
            for b in a + 1..n {
                if kind.admits(&records[lay.order[a]], &records[lay.order[b]]) {
                    all.push((a, b));
                }
            }
        }
        for i in 0..opts.count {
            let j = rng.random_range(i..all.len());
            all.swap(i, j);
            let (a, b) = all[i];
            let (a, b) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            pairs.push((lay.order[a], lay.order[b]));
        }
    } else {
        let mut weights = weights;
        let mut dist = WeightedIndex::new(&weights).map_err(|e| insufficient(e.to_string()))?;
        let mut used: HashSet<(usize, usize)> = HashSet::new();
        let mut per_class: HashMap<usize, usize> = HashMap::new();
        while pairs.len() < opts.count {
            let a = dist.sample(&mut rng);
            let b = lay.pick_partner(kind, a, &mut rng);
            if !used.insert(unordered(a, b)) {
                continue;
            }
            pairs.push((lay.order[a], lay.order[b]));
            if kind == AffinityGroupKind::IntraClass {
                let cid = lay.class_id[a];
                let taken = per_class.entry(cid).or_default();
                *taken += 1;
                let (s, e) = lay.class[a];
                let m = e - s;
                if *taken >= opts.max_per_class.min(m * (m - 1) / 2) && pairs.len() < opts.count {
                    weights[s..e].fill(0);
                    dist = WeightedIndex::new(&weights).map_err(|e| insufficient(e.to_string()))?;
                }
            }
        }
    }
    Ok(PairSample {
        kind,
        seed: opts.seed,
        max_per_class: opts.max_per_class,
        pairs,
    })
}

/// Every structural rule the sample must satisfy.
pub fn check_sample(records: &[MethodRecord], sample: &PairSample) -> Result<()> {
    let bad = |msg: String| Error::InvalidParameter(format!("invalid {} sample: {msg}", sample.kind));
    let mut seen = HashSet::new();
    let mut per_class: HashMap<(&str, &str), usize> = HashMap::new();
    for &(a, b) in &sample.pairs {
        let (ra, rb) = match (records.get(a), records.get(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(bad(format!("index out of range in ({a}, {b})"))),
        };
        if a == b || !sample.kind.admits(ra, rb) {
            return Err(bad(format!("pair ({a}, {b}) violates the group constraint")));
        }
        if !seen.insert(unordered(a, b)) {
            return Err(bad(format!("pair ({a}, {b}) drawn twice")));
        }
        if sample.kind == AffinityGroupKind::IntraClass {
            let c = per_class.entry((&ra.project, &ra.class_name)).or_default();
            *c += 1;
            if *c > sample.max_per_class {
                return Err(bad(format!(
                    "class {} exceeds {} pairs",
                    ra.class_name, sample.max_per_class
                )));
            }
        }
    }
    Ok(())
}
