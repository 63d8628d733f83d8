//! Alphabets, linear and circular words, and square detection.
//!
//! A word stores letter indices into its alphabet, so lexicographic order on
//! words follows the order in which the alphabet lists its letters.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter:?} is not in alphabet {alphabet}")]
    InvalidLetter { letter: char, alphabet: &'static str },
    #[error("symbol index {index} is out of range for alphabet {alphabet}")]
    InvalidSymbol { index: u8, alphabet: &'static str },
    #[error("expected a word over alphabet {expected}, found one over {found}")]
    WrongAlphabet {
        expected: &'static str,
        found: &'static str,
    },
    #[error("factor length {max_len} exceeds circular word length {len}")]
    FactorTooLong { max_len: usize, len: usize },
    #[error("unknown alphabet {0:?} (expected B, S or T)")]
    UnknownAlphabet(String),
}

/// A finite ordered alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    name: &'static str,
    letters: &'static [u8],
}

/// B = {0, 1}
pub const BINARY: Alphabet = Alphabet {
    name: "B",
    letters: b"01",
};

/// S = {a, b, c}
pub const TERNARY: Alphabet = Alphabet {
    name: "S",
    letters: b"abc",
};

/// T = {a, b, c, d}
pub const QUATERNARY: Alphabet = Alphabet {
    name: "T",
    letters: b"abcd",
};

impl Alphabet {
    pub fn by_name(name: &str) -> Result<Alphabet, WordError> {
        match name {
            "B" | "b" | "binary" => Ok(BINARY),
            "S" | "s" | "ternary" => Ok(TERNARY),
            "T" | "t" | "quaternary" => Ok(QUATERNARY),
            other => Err(WordError::UnknownAlphabet(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letter(&self, index: u8) -> char {
        self.letters[index as usize] as char
    }

    pub fn index_of(&self, letter: char) -> Option<u8> {
        self.letters
            .iter()
            .position(|&l| l as char == letter)
            .map(|i| i as u8)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// A finite word: a sequence of letter indices over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Word, WordError> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.size()) {
            return Err(WordError::InvalidSymbol {
                index: bad,
                alphabet: alphabet.name,
            });
        }
        Ok(Word { alphabet, symbols })
    }

    pub(crate) fn from_symbols_unchecked(alphabet: Alphabet, symbols: Vec<u8>) -> Word {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.size()));
        Word { alphabet, symbols }
    }

    pub fn empty(alphabet: Alphabet) -> Word {
        Word {
            alphabet,
            symbols: Vec::new(),
        }
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Word, WordError> {
        let symbols = text
            .chars()
            .map(|c| {
                alphabet.index_of(c).ok_or(WordError::InvalidLetter {
                    letter: c,
                    alphabet: alphabet.name,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { alphabet, symbols })
    }

    /// Shorthand for `Word::parse(BINARY, text)`.
    pub fn binary(text: &str) -> Result<Word, WordError> {
        Word::parse(BINARY, text)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of occurrences of the letter with the given index.
    pub fn count(&self, letter: u8) -> usize {
        self.symbols.iter().filter(|&&s| s == letter).count()
    }

    /// Factor of length `len` starting at the 0-based offset `start`.
    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            symbols: self.symbols[start..start + len].to_vec(),
        }
    }

    /// The conjugate `vu` of `uv` with `|u| = shift` (taken modulo the length).
    pub fn rotate(&self, shift: usize) -> Word {
        if self.symbols.is_empty() {
            return self.clone();
        }
        let mut symbols = self.symbols.clone();
        symbols.rotate_left(shift % self.symbols.len());
        Word {
            alphabet: self.alphabet,
            symbols,
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        self.expect_alphabet(other.alphabet)?;
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Word {
            alphabet: self.alphabet,
            symbols,
        })
    }

    pub fn expect_alphabet(&self, expected: Alphabet) -> Result<(), WordError> {
        if self.alphabet == expected {
            Ok(())
        } else {
            Err(WordError::WrongAlphabet {
                expected: expected.name,
                found: self.alphabet.name,
            })
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self.symbols.iter().map(|&s| self.alphabet.letter(s)).collect();
        f.write_str(&text)
    }
}

/// All rotations of `w`, by 0, 1, ..., |w|-1. The empty word has the single
/// conjugate ε.
pub fn conjugates(w: &Word) -> Vec<Word> {
    if w.is_empty() {
        return vec![w.clone()];
    }
    (0..w.len()).map(|shift| w.rotate(shift)).collect()
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation(symbols: &[u8]) -> usize {
    let n = symbols.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| symbols[i % n];
    let mut failure = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = failure[j - k - 1];
        while i != usize::MAX && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = failure[i];
        }
        if i == usize::MAX && sj != at(k) {
            if sj < at(k) {
                k = j;
            }
            failure[j - k] = usize::MAX;
        } else {
            failure[j - k] = if i == usize::MAX { 0 } else { i + 1 };
        }
    }
    k % n
}

/// A conjugacy class of words, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircularWord {
    representative: Word,
}

impl CircularWord {
    pub fn new(w: Word) -> CircularWord {
        let shift = least_rotation(&w.symbols);
        CircularWord {
            representative: w.rotate(shift),
        }
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<CircularWord, WordError> {
        Word::parse(alphabet, text).map(CircularWord::new)
    }

    pub fn representative(&self) -> &Word {
        &self.representative
    }

    pub fn into_representative(self) -> Word {
        self.representative
    }

    pub fn alphabet(&self) -> Alphabet {
        self.representative.alphabet
    }

    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }
}

impl fmt::Display for CircularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.representative.fmt(f)
    }
}

/// One occurrence of a square `xx` inside a linear word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareOccurrence {
    pub root: Word,
    /// 1-based start position.
    pub index: usize,
    pub period: usize,
}

impl PartialOrd for SquareOccurrence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SquareOccurrence {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index, self.period).cmp(&(other.index, other.period))
    }
}

impl fmt::Display for SquareOccurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})^2 at index {} (period {})",
            self.root, self.index, self.period
        )
    }
}

#[inline]
fn halves_equal(symbols: &[u8], start: usize, period: usize) -> bool {
    symbols[start..start + period] == symbols[start + period..start + 2 * period]
}

/// Every square factor of `w`, sorted by (index, period).
pub fn find_squares(w: &Word) -> Vec<SquareOccurrence> {
    let s = &w.symbols;
    let n = s.len();
    let mut found = Vec::new();
    for start in 0..n {
        for period in 1..=(n - start) / 2 {
            if halves_equal(s, start, period) {
                found.push(SquareOccurrence {
                    root: w.factor(start, period),
                    index: start + 1,
                    period,
                });
            }
        }
    }
    found
}

fn first_square_where(symbols: &[u8], mut forbidden: impl FnMut(&[u8]) -> bool) -> Option<(usize, usize)> {
    let n = symbols.len();
    for start in 0..n {
        for period in 1..=(n - start) / 2 {
            if halves_equal(symbols, start, period) && forbidden(&symbols[start..start + period]) {
                return Some((start, period));
            }
        }
    }
    None
}

pub fn is_square_free(w: &Word) -> bool {
    first_square_where(&w.symbols, |_| true).is_none()
}

/// Roots whose squares an FS word may contain: 0, 1 and 01.
#[inline]
pub(crate) fn is_permitted_root(root: &[u8]) -> bool {
    matches!(root, [_] | [0, 1])
}

/// First square in a binary word whose root is not 0, 1 or 01.
pub fn first_forbidden_square(w: &Word) -> Result<Option<SquareOccurrence>, WordError> {
    w.expect_alphabet(BINARY)?;
    Ok(
        first_square_where(&w.symbols, |root| !is_permitted_root(root)).map(|(start, period)| {
            SquareOccurrence {
                root: w.factor(start, period),
                index: start + 1,
                period,
            }
        }),
    )
}

/// True iff the only squares in the binary word `w` are 00, 11 and 0101.
pub fn is_fs_word(w: &Word) -> Result<bool, WordError> {
    Ok(first_forbidden_square(w)?.is_none())
}

/// First square with a forbidden root among the factors of length at most
/// `n` of `rr`, where `r` has length `n`. Returns the 0-based start (in
/// `0..n`) and period.
pub(crate) fn first_circular_square_where(
    symbols: &[u8],
    mut forbidden: impl FnMut(&[u8]) -> bool,
) -> Option<(usize, usize)> {
    let n = symbols.len();
    if n == 0 {
        return None;
    }
    let doubled: Vec<u8> = symbols.iter().chain(symbols.iter()).copied().collect();
    for start in 0..n {
        for period in 1..=n / 2 {
            if halves_equal(&doubled, start, period)
                && forbidden(&doubled[start..start + period])
            {
                return Some((start, period));
            }
        }
    }
    None
}

/// All factors of `[cw]` of length at most `max_len`.
pub fn circular_factors(cw: &CircularWord, max_len: usize) -> Result<BTreeSet<Word>, WordError> {
    let n = cw.len();
    if max_len > n {
        return Err(WordError::FactorTooLong { max_len, len: n });
    }
    let doubled = cw.representative.concat(&cw.representative)?;
    let mut factors = BTreeSet::new();
    for len in 1..=max_len {
        for start in 0..n {
            factors.insert(doubled.factor(start, len));
        }
    }
    Ok(factors)
}

fn circular_occurrence(symbols: &[u8], alphabet: Alphabet, start: usize, period: usize) -> SquareOccurrence {
    let root = (0..period).map(|t| symbols[(start + t) % symbols.len()]).collect();
    SquareOccurrence {
        root: Word::from_symbols_unchecked(alphabet, root),
        index: start + 1,
        period,
    }
}

/// First square among the factors of the circular word, with its index
/// taken in the canonical representative doubled.
pub fn first_circular_square(cw: &CircularWord) -> Option<SquareOccurrence> {
    let symbols = cw.representative.symbols();
    first_circular_square_where(symbols, |_| true)
        .map(|(start, period)| circular_occurrence(symbols, cw.alphabet(), start, period))
}

pub fn is_circular_square_free(cw: &CircularWord) -> bool {
    first_circular_square_where(cw.representative.symbols(), |_| true).is_none()
}

/// First forbidden square among the factors of the circular word, reported
/// relative to the canonical representative doubled.
pub fn first_forbidden_circular_square(
    cw: &CircularWord,
) -> Result<Option<SquareOccurrence>, WordError> {
    cw.representative.expect_alphabet(BINARY)?;
    let symbols = cw.representative.symbols();
    Ok(first_circular_square_where(symbols, |root| !is_permitted_root(root))
        .map(|(start, period)| circular_occurrence(symbols, BINARY, start, period)))
}

/// True iff every conjugate of the representative is an FS word.
pub fn is_circular_fs(cw: &CircularWord) -> Result<bool, WordError> {
    Ok(first_forbidden_circular_square(cw)?.is_none())
}

/// Replaces every `d` of a word over T by `target` (a letter of S, given by
/// index), yielding a word over S of the same length.
pub fn project_to_ternary(w: &Word, target: u8) -> Result<Word, WordError> {
    w.expect_alphabet(QUATERNARY)?;
    if target as usize >= TERNARY.size() {
        return Err(WordError::InvalidSymbol {
            index: target,
            alphabet: TERNARY.name,
        });
    }
    let symbols = w
        .symbols
        .iter()
        .map(|&s| if s == 3 { target } else { s })
        .collect();
    Ok(Word::from_symbols_unchecked(TERNARY, symbols))
}

/// Exchanges 0 and 1.
pub fn complement(w: &Word) -> Result<Word, WordError> {
    w.expect_alphabet(BINARY)?;
    Ok(Word::from_symbols_unchecked(
        BINARY,
        w.symbols.iter().map(|&s| 1 - s).collect(),
    ))
}
