//! Level circular square-free ternary words and the `a -> d` / `b -> d`
//! substitutions used to vary letter counts.
//!
//! Words are found by depth-first search over linear square-free words with
//! running letter-count bounds, closed up with a circular check at full
//! length. Every returned word is re-verified before it leaves this module.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::words::{
    is_circular_square_free, CircularWord, Word, WordError, QUATERNARY, TERNARY,
};

/// Lengths with no circular square-free ternary word at all.
pub const EXCEPTIONAL_LENGTHS: [usize; 6] = [5, 7, 9, 10, 14, 17];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TernaryError {
    #[error("no circular square-free ternary word of length {0} exists")]
    Exceptional(usize),
    #[error("length must be positive")]
    ZeroLength,
    #[error("search exhausted at admissible length {0} (internal error)")]
    SearchExhausted(usize),
    #[error("cannot replace {k} occurrences of {letter:?}: only {available} present")]
    TooManyReplacements {
        letter: char,
        k: usize,
        available: usize,
    },
    #[error("substitution source must be a or b, got {0:?}")]
    BadSourceLetter(char),
    #[error("profile ({a}, {b}, {c}) cannot be arranged as (i+j, i, i) with i={i}, j={j}")]
    ProfileMismatch {
        a: usize,
        b: usize,
        c: usize,
        i: usize,
        j: i64,
    },
    #[error("substituted word {0} is not circular square-free (internal error)")]
    VerificationFailed(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Letter counts of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterProfile {
    pub counts: Vec<usize>,
    pub total: usize,
}

impl LetterProfile {
    pub fn of(w: &Word) -> LetterProfile {
        let mut counts = vec![0; w.alphabet().size()];
        for &s in w.symbols() {
            counts[s as usize] += 1;
        }
        LetterProfile {
            counts,
            total: w.len(),
        }
    }

    /// Every pair of letter counts differs by at most one.
    pub fn is_level(&self) -> bool {
        match (self.counts.iter().max(), self.counts.iter().min()) {
            (Some(hi), Some(lo)) => hi - lo <= 1,
            _ => true,
        }
    }
}

pub fn is_exceptional(n: usize) -> bool {
    EXCEPTIONAL_LENGTHS.contains(&n)
}

#[derive(Debug)]
enum Outcome {
    Found(Vec<u8>),
    Exhausted,
    OutOfBudget,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

const ORDERS: [[u8; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

struct Search {
    n: usize,
    level: bool,
    hi: usize,
    lo: usize,
    word: Vec<u8>,
    counts: [usize; 3],
    key: Option<u64>,
    nodes: u64,
    budget: Option<u64>,
}

impl Search {
    fn branch_order(&self, depth: usize) -> [u8; 3] {
        match self.key {
            None => ORDERS[0],
            Some(key) => ORDERS[(splitmix64(key ^ (depth as u64).wrapping_mul(0x2545_f491)) % 6) as usize],
        }
    }

    fn square_free_after_push(&self) -> bool {
        let w = &self.word;
        let len = w.len();
        (1..=len / 2).all(|p| w[len - 2 * p..len - p] != w[len - p..])
    }

    fn counts_feasible(&self) -> bool {
        if !self.level {
            return true;
        }
        let remaining = self.n - self.word.len();
        let deficit: usize = self.counts.iter().map(|&c| self.lo.saturating_sub(c)).sum();
        self.counts.iter().all(|&c| c <= self.hi) && deficit <= remaining
    }

    fn run(&mut self) -> Outcome {
        if let Some(budget) = self.budget {
            if self.nodes >= budget {
                return Outcome::OutOfBudget;
            }
        }
        self.nodes += 1;
        let len = self.word.len();
        if len == self.n {
            let cw = CircularWord::new(Word::from_symbols_unchecked(TERNARY, self.word.clone()));
            return if is_circular_square_free(&cw) {
                Outcome::Found(self.word.clone())
            } else {
                Outcome::Exhausted
            };
        }
        let mut out_of_budget = false;
        for letter in self.branch_order(len) {
            // letter renaming: the first letter is a, the first different letter is b
            if (len == 0 && letter != 0) || (len == 1 && letter != 1) {
                continue;
            }
            if len > 0 && self.word[len - 1] == letter {
                continue;
            }
            if len + 1 == self.n && self.n > 1 && self.word[0] == letter {
                continue;
            }
            self.word.push(letter);
            self.counts[letter as usize] += 1;
            if self.counts_feasible() && self.square_free_after_push() {
                match self.run() {
                    Outcome::Found(w) => return Outcome::Found(w),
                    Outcome::OutOfBudget => out_of_budget = true,
                    Outcome::Exhausted => {}
                }
            }
            self.counts[letter as usize] -= 1;
            self.word.pop();
            if out_of_budget {
                return Outcome::OutOfBudget;
            }
        }
        Outcome::Exhausted
    }
}

fn search(n: usize, level: bool, key: Option<u64>, budget: Option<u64>) -> (Outcome, u64) {
    let mut s = Search {
        n,
        level,
        hi: n.div_ceil(3),
        lo: n / 3,
        word: Vec::with_capacity(n),
        counts: [0; 3],
        key,
        nodes: 0,
        budget,
    };
    let outcome = s.run();
    (outcome, s.nodes)
}

/// Exhaustive search for a circular square-free ternary word of length `n`,
/// level or not. Returns the word found (if any) and the node count.
pub fn exhaustive_circular_square_free(n: usize, level: bool) -> (Option<CircularWord>, u64) {
    if n == 0 {
        return (Some(CircularWord::new(Word::empty(TERNARY))), 0);
    }
    let (outcome, nodes) = search(n, level, None, None);
    let word = match outcome {
        Outcome::Found(w) => Some(CircularWord::new(Word::from_symbols_unchecked(TERNARY, w))),
        _ => None,
    };
    (word, nodes)
}

fn cache() -> &'static Mutex<HashMap<(usize, u64), CircularWord>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), CircularWord>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

const ATTEMPTS: u64 = 24;

/// A level circular square-free word over {a, b, c} of length `n`.
///
/// The same `(n, seed)` always yields the same word. Results are memoized
/// per process.
pub fn generate_level_ternary(n: usize, seed: u64) -> Result<CircularWord, TernaryError> {
    if n == 0 {
        return Err(TernaryError::ZeroLength);
    }
    if is_exceptional(n) {
        return Err(TernaryError::Exceptional(n));
    }
    if let Some(hit) = cache().lock().expect("cache poisoned").get(&(n, seed)) {
        return Ok(hit.clone());
    }
    let mut found = None;
    for attempt in 0..ATTEMPTS {
        let key = splitmix64(seed.wrapping_mul(0x1000_0000_01b3) ^ attempt);
        let budget = 20_000 * (n as u64 + 10) << attempt.min(8);
        if let (Outcome::Found(w), _) = search(n, true, Some(key), Some(budget)) {
            found = Some(w);
            break;
        }
    }
    let symbols = match found {
        Some(w) => w,
        None => match search(n, true, None, None).0 {
            Outcome::Found(w) => w,
            _ => return Err(TernaryError::SearchExhausted(n)),
        },
    };
    let cw = CircularWord::new(Word::from_symbols_unchecked(TERNARY, symbols));
    assert!(is_circular_square_free(&cw), "generator produced a word with a square");
    assert!(LetterProfile::of(cw.representative()).is_level(), "generator produced an unlevel word");
    cache()
        .lock()
        .expect("cache poisoned")
        .insert((n, seed), cw.clone());
    Ok(cw)
}

/// Renames letters of a level ternary word of length `3i + j` so that
/// `|w|_a = i + j` and `|w|_b = |w|_c = i`.
pub fn arrange_profile(w: &CircularWord, i: usize, j: i64) -> Result<CircularWord, TernaryError> {
    w.representative().expect_alphabet(TERNARY)?;
    let counts = LetterProfile::of(w.representative()).counts;
    let mismatch = || TernaryError::ProfileMismatch {
        a: counts[0],
        b: counts[1],
        c: counts[2],
        i,
        j,
    };
    let target_a = i as i64 + j;
    let odd = (0..3u8)
        .find(|&x| counts[x as usize] as i64 == target_a)
        .ok_or_else(mismatch)?;
    let mut rename = [0u8, 1, 2];
    rename.swap(0, odd as usize);
    // rename maps old letter -> new letter; a swap is its own inverse
    let symbols = w
        .representative()
        .symbols()
        .iter()
        .map(|&s| rename[s as usize])
        .collect();
    let out = CircularWord::new(Word::from_symbols_unchecked(TERNARY, symbols));
    let c = LetterProfile::of(out.representative()).counts;
    if c[0] as i64 != target_a || c[1] != i || c[2] != i {
        return Err(mismatch());
    }
    Ok(out)
}

/// Replaces the first `k` occurrences of `from_letter` (a or b) in the
/// canonical representative of `w` by `d`.
pub fn substitute(w: &CircularWord, from_letter: char, k: usize) -> Result<CircularWord, TernaryError> {
    w.representative().expect_alphabet(TERNARY)?;
    let from = match from_letter {
        'a' => 0u8,
        'b' => 1u8,
        other => return Err(TernaryError::BadSourceLetter(other)),
    };
    let available = w.representative().count(from);
    if k > available {
        return Err(TernaryError::TooManyReplacements {
            letter: from_letter,
            k,
            available,
        });
    }
    let mut left = k;
    let symbols = w
        .representative()
        .symbols()
        .iter()
        .map(|&s| {
            if s == from && left > 0 {
                left -= 1;
                3
            } else {
                s
            }
        })
        .collect();
    let out = CircularWord::new(Word::from_symbols_unchecked(QUATERNARY, symbols));
    if !is_circular_square_free(&out) {
        return Err(TernaryError::VerificationFailed(out.to_string()));
    }
    Ok(out)
}
