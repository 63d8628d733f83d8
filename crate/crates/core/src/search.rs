//! Exhaustive search for circular FS words of a given length.
//!
//! Candidates are generated as binary necklaces (least rotations) in
//! lexicographic order, using the Fredricksen-Kessler-Maiorana prenecklace
//! recurrence to discard prefixes that cannot start a necklace. Each appended
//! symbol is checked only against squares ending at the new position; a
//! complete necklace is then checked for squares that wrap around.
//!
//! Because necklaces come out in lexicographic order, the first complete
//! candidate that passes is the least circular FS word of that length.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{is_circular_fs, CircularWord, Word, BINARY};

pub const DEFAULT_MAX_LENGTH: usize = 128;
pub const DEFAULT_SPLIT_DEPTH: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("length {length} exceeds the search bound {bound}; raise the bound explicitly")]
    AboveBound { length: usize, bound: usize },
    #[error("empty range {lo}..={hi}")]
    EmptyRange { lo: usize, hi: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest length accepted.
    pub max_length: usize,
    /// Depth at which the tree is split into independent parallel jobs.
    pub split_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_length: DEFAULT_MAX_LENGTH,
            split_depth: DEFAULT_SPLIT_DEPTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub length: usize,
    pub exists: bool,
    /// Least circular FS word of this length, as its canonical representative.
    #[serde(with = "opt_circular")]
    pub witness: Option<CircularWord>,
    pub nodes_explored: u64,
    /// Number of circular FS words (rotation classes), when requested.
    pub count: Option<u64>,
}

mod opt_circular {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::words::{CircularWord, BINARY};

    pub fn serialize<S: Serializer>(w: &Option<CircularWord>, s: S) -> Result<S::Ok, S::Error> {
        w.as_ref().map(|w| w.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<CircularWord>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| CircularWord::parse(BINARY, &t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// A partial necklace: `word[1..=len]` holds the prefix (1-based, `word[0]`
/// is a sentinel 0) and `period` is the length of its longest Lyndon prefix.
#[derive(Clone)]
struct Node {
    word: Vec<u8>,
    len: usize,
    period: usize,
}

struct Walker<'a> {
    n: usize,
    want_count: bool,
    nodes: u64,
    count: u64,
    witness: Option<Vec<u8>>,
    /// Abort when a job with a smaller index has already found a witness.
    cancel: Option<(&'a AtomicUsize, usize)>,
}

/// No forbidden square ends at the last position of `w[1..=len]`.
#[inline]
fn suffix_ok(w: &[u8], len: usize) -> bool {
    for period in 2..=len / 2 {
        let a = len + 1 - 2 * period;
        let b = len + 1 - period;
        if w[a..b] == w[b..=len] && !(period == 2 && w[a] == 0 && w[a + 1] == 1) {
            return false;
        }
    }
    true
}

/// No forbidden square of length at most n straddles the end of the circular
/// word `w[1..=n]`.
fn wrap_ok(w: &[u8], n: usize) -> bool {
    let at = |i: usize| w[1 + i % n];
    for start in 1..n {
        for period in ((n - start) / 2 + 1)..=n / 2 {
            if (0..period).all(|t| at(start + t) == at(start + period + t))
                && !(period == 1 || (period == 2 && at(start) == 0 && at(start + 1) == 1))
            {
                return false;
            }
        }
    }
    true
}

impl Walker<'_> {
    fn cancelled(&self) -> bool {
        match self.cancel {
            Some((best, me)) => best.load(Ordering::Relaxed) < me,
            None => false,
        }
    }

    /// Returns true when the walk should stop (witness found in existence
    /// mode, or cancelled).
    fn walk(&mut self, node: &mut Node) -> bool {
        self.nodes += 1;
        if node.len == self.n {
            if self.n % node.period == 0 && wrap_ok(&node.word, self.n) {
                self.count += 1;
                if self.witness.is_none() {
                    self.witness = Some(node.word[1..=self.n].to_vec());
                }
                return !self.want_count;
            }
            return false;
        }
        if self.nodes & 0xfff == 0 && self.cancelled() {
            return true;
        }
        let t = node.len + 1;
        let lower = node.word[t - node.period];
        let period = node.period;
        for symbol in lower..=1 {
            node.word[t] = symbol;
            node.len = t;
            node.period = if symbol == lower { period } else { t };
            if suffix_ok(&node.word, t) && self.walk(node) {
                node.len = t - 1;
                node.period = period;
                return true;
            }
        }
        node.len = t - 1;
        node.period = period;
        false
    }
}

/// Collects, in lexicographic order, the surviving prefixes of length
/// `depth`, and the number of tree nodes above that depth.
fn frontier(n: usize, depth: usize) -> (Vec<Node>, u64) {
    fn go(node: &mut Node, depth: usize, out: &mut Vec<Node>, nodes: &mut u64) {
        if node.len == depth {
            out.push(node.clone());
            return;
        }
        *nodes += 1;
        let t = node.len + 1;
        let lower = node.word[t - node.period];
        let period = node.period;
        for symbol in lower..=1 {
            node.word[t] = symbol;
            node.len = t;
            node.period = if symbol == lower { period } else { t };
            if suffix_ok(&node.word, t) {
                go(node, depth, out, nodes);
            }
        }
        node.len = t - 1;
        node.period = period;
    }
    let mut root = Node {
        word: vec![0; n + 1],
        len: 0,
        period: 1,
    };
    let mut out = Vec::new();
    let mut nodes = 0;
    go(&mut root, depth, &mut out, &mut nodes);
    (out, nodes)
}

struct JobResult {
    nodes: u64,
    count: u64,
    witness: Option<Vec<u8>>,
}

fn finish(m: usize, want_count: bool, nodes: u64, count: u64, witness: Option<Vec<u8>>) -> SearchOutcome {
    let witness = witness.map(|w| CircularWord::new(Word::new(BINARY, w).expect("binary symbols")));
    if let Some(w) = &witness {
        // independent recheck, not the search's own pruning
        assert!(is_circular_fs(w).expect("binary"), "search returned a non-FS witness {w}");
        assert_eq!(w.len(), m);
    }
    SearchOutcome {
        length: m,
        exists: witness.is_some(),
        witness,
        nodes_explored: nodes,
        count: want_count.then_some(count),
    }
}

/// Decides whether a circular FS word of length `m` exists, with the default
/// bound and split depth.
pub fn decide(m: usize, want_count: bool) -> Result<SearchOutcome, SearchError> {
    decide_with(m, want_count, &SearchConfig::default())
}

pub fn decide_with(m: usize, want_count: bool, config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if m > config.max_length {
        return Err(SearchError::AboveBound {
            length: m,
            bound: config.max_length,
        });
    }
    if m == 0 {
        return Ok(SearchOutcome {
            length: 0,
            exists: true,
            witness: Some(CircularWord::new(Word::empty(BINARY))),
            nodes_explored: 1,
            count: want_count.then_some(1),
        });
    }
    let depth = config.split_depth.min(m);
    if depth == 0 || depth == m {
        let mut walker = Walker {
            n: m,
            want_count,
            nodes: 0,
            count: 0,
            witness: None,
            cancel: None,
        };
        let mut root = Node {
            word: vec![0; m + 1],
            len: 0,
            period: 1,
        };
        walker.walk(&mut root);
        return Ok(finish(m, want_count, walker.nodes, walker.count, walker.witness));
    }

    let (jobs, upper_nodes) = frontier(m, depth);
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<JobResult> = jobs
        .into_par_iter()
        .enumerate()
        .map(|(index, mut node)| {
            if !want_count && best.load(Ordering::Relaxed) < index {
                return JobResult {
                    nodes: 0,
                    count: 0,
                    witness: None,
                };
            }
            let mut walker = Walker {
                n: m,
                want_count,
                nodes: 0,
                count: 0,
                witness: None,
                cancel: (!want_count).then_some((&best, index)),
            };
            walker.walk(&mut node);
            if walker.witness.is_some() {
                best.fetch_min(index, Ordering::Relaxed);
            }
            JobResult {
                nodes: walker.nodes,
                count: walker.count,
                witness: walker.witness,
            }
        })
        .collect();

    // Only jobs up to the first witness count, so the totals do not depend
    // on scheduling.
    let winner = results.iter().position(|r| r.witness.is_some());
    let considered = match (want_count, winner) {
        (false, Some(w)) => &results[..=w],
        _ => &results[..],
    };
    let nodes = upper_nodes + considered.iter().map(|r| r.nodes).sum::<u64>();
    let count = considered.iter().map(|r| r.count).sum();
    let witness = winner.and_then(|w| results[w].witness.clone());
    Ok(finish(m, want_count, nodes, count, witness))
}

/// [`decide_with`] for every length in `lo..=hi`.
pub fn decide_range(lo: usize, hi: usize, want_count: bool, config: &SearchConfig) -> Result<Vec<SearchOutcome>, SearchError> {
    if lo > hi {
        return Err(SearchError::EmptyRange { lo, hi });
    }
    if hi > config.max_length {
        return Err(SearchError::AboveBound {
            length: hi,
            bound: config.max_length,
        });
    }
    (lo..=hi).map(|m| decide_with(m, want_count, config)).collect()
}
