//! Morphisms into {0,1}* and a checker for the synchronizing-prefix
//! sufficient condition for a morphism to be an FS morphism.
//!
//! The checker looks at two things:
//!
//! 1. every square-free word of length three over the source alphabet maps
//!    to an FS word;
//! 2. there is a common prefix `p` of all images, `|p| >= 3`, such that `p`
//!    occurs in a concatenation of images only at image boundaries.
//!
//! The second condition is stated over arbitrarily long concatenations. Since
//! `p` is a prefix of every image, `|p|` is at most the shortest image length,
//! so any occurrence of `p` in `f(w)` lies inside `f(ab)` for two consecutive
//! letters `ab` of `w`. Scanning the ordered pairs `f(a)f(b)` is therefore
//! equivalent; the integration tests check the equivalence on sampled words.

use std::fmt;

use thiserror::Error;

use crate::words::{
    first_forbidden_square, Alphabet, CircularWord, SquareOccurrence, Word, WordError, BINARY,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("expected {expected} images, one per letter of {alphabet}, got {got}")]
    ImageCount {
        alphabet: Alphabet,
        expected: usize,
        got: usize,
    },
    #[error("image of {letter:?} is empty")]
    EmptyImage { letter: char },
    #[error("image of {letter:?} is not a binary word")]
    NonBinaryImage { letter: char },
    #[error("synchronizer must have length at least 3, got {0}")]
    ShortSynchronizer(usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A morphism from a source alphabet into B*, given by one nonempty binary
/// image per source letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(source: Alphabet, images: Vec<Word>) -> Result<Morphism, MorphismError> {
        if images.len() != source.size() {
            return Err(MorphismError::ImageCount {
                alphabet: source,
                expected: source.size(),
                got: images.len(),
            });
        }
        for (letter, image) in images.iter().enumerate() {
            let letter = source.letter(letter as u8);
            if image.alphabet() != BINARY {
                return Err(MorphismError::NonBinaryImage { letter });
            }
            if image.is_empty() {
                return Err(MorphismError::EmptyImage { letter });
            }
        }
        Ok(Morphism { source, images })
    }

    pub fn source(&self) -> Alphabet {
        self.source
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: u8) -> &Word {
        &self.images[letter as usize]
    }

    pub fn image_lengths(&self) -> Vec<usize> {
        self.images.iter().map(Word::len).collect()
    }

    /// The morphism `x -> f(roles[x])`: letter `x` of the source takes over
    /// the image of letter `roles[x]`. `roles` must be a permutation.
    pub fn relabel(&self, roles: &[u8]) -> Morphism {
        assert_eq!(roles.len(), self.images.len(), "relabelling must be a permutation");
        let mut seen = vec![false; roles.len()];
        for &r in roles {
            assert!(!std::mem::replace(&mut seen[r as usize], true), "relabelling must be a permutation");
        }
        Morphism {
            source: self.source,
            images: roles.iter().map(|&r| self.images[r as usize].clone()).collect(),
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word, MorphismError> {
        w.expect_alphabet(self.source)?;
        let total: usize = w.symbols().iter().map(|&s| self.images[s as usize].len()).sum();
        let mut out = Vec::with_capacity(total);
        for &s in w.symbols() {
            out.extend_from_slice(self.images[s as usize].symbols());
        }
        Ok(Word::from_symbols_unchecked(BINARY, out))
    }

    pub fn apply_circular(&self, cw: &CircularWord) -> Result<CircularWord, MorphismError> {
        Ok(CircularWord::new(self.apply(cw.representative())?))
    }

    /// Length of the longest common prefix of all images.
    pub fn common_prefix_len(&self) -> usize {
        let first = self.images[0].symbols();
        let mut len = first.len();
        for image in &self.images[1..] {
            len = first
                .iter()
                .zip(image.symbols())
                .take(len)
                .take_while(|(x, y)| x == y)
                .count();
        }
        len
    }

    /// First square-free length-3 source word (in lexicographic order) whose
    /// image is not an FS word, or `None` if there is none.
    pub fn check_condition1(&self) -> Option<HnWitness> {
        let k = self.source.size() as u8;
        for x in 0..k {
            for y in (0..k).filter(|&y| y != x) {
                for z in (0..k).filter(|&z| z != y) {
                    let triple = Word::from_symbols_unchecked(self.source, vec![x, y, z]);
                    let image = self.apply(&triple).expect("triple is over the source alphabet");
                    if let Some(square) = first_forbidden_square(&image).expect("images are binary") {
                        return Some(HnWitness::NonFsTriple { triple, square });
                    }
                }
            }
        }
        None
    }

    /// Checks that `p` is a prefix of every image and occurs in each `f(a)f(b)`
    /// only at offsets 0 and `|f(a)|`. Returns the first violation found,
    /// scanning letters then pairs in lexicographic order.
    pub fn check_condition2(&self, p: &Word) -> Result<Option<HnWitness>, MorphismError> {
        if p.len() < 3 {
            return Err(MorphismError::ShortSynchronizer(p.len()));
        }
        p.expect_alphabet(BINARY)?;
        let needle = p.symbols();
        for (letter, image) in self.images.iter().enumerate() {
            if !image.symbols().starts_with(needle) {
                return Ok(Some(HnWitness::NotPrefix {
                    letter: self.source.letter(letter as u8),
                }));
            }
        }
        let mut window = Vec::new();
        for (a, fa) in self.images.iter().enumerate() {
            for (b, fb) in self.images.iter().enumerate() {
                window.clear();
                window.extend_from_slice(fa.symbols());
                window.extend_from_slice(fb.symbols());
                let misplaced = window
                    .windows(needle.len())
                    .enumerate()
                    .find(|&(pos, slice)| slice == needle && pos != 0 && pos != fa.len());
                if let Some((pos, _)) = misplaced {
                    return Ok(Some(HnWitness::MisalignedSynchronizer {
                        first: self.source.letter(a as u8),
                        second: self.source.letter(b as u8),
                        position: pos + 1,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Runs condition 1, then condition 2 for every prefix of the longest
    /// common prefix of the images, longest first.
    pub fn certify_hn(&self) -> HnReport {
        if let Some(witness) = self.check_condition1() {
            return HnReport::fail(witness);
        }
        let lcp = self.common_prefix_len();
        if lcp < 3 {
            return HnReport::fail(HnWitness::ShortCommonPrefix { length: lcp });
        }
        let mut first_failure = None;
        for len in (3..=lcp).rev() {
            let p = self.images[0].factor(0, len);
            match self.check_condition2(&p).expect("|p| >= 3") {
                None => {
                    return HnReport {
                        verdict: Verdict::Pass,
                        prefix_length: Some(len),
                        synchronizer: Some(p),
                        failing_witness: None,
                    }
                }
                Some(w) => {
                    first_failure.get_or_insert(w);
                }
            }
        }
        HnReport::fail(first_failure.expect("at least one candidate was tried"))
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (letter, image) in self.images.iter().enumerate() {
            writeln!(f, "{} -> {}", self.source.letter(letter as u8), image)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Why a morphism failed certification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HnWitness {
    /// A square-free triple whose image contains a square other than 00, 11, 0101.
    NonFsTriple {
        triple: Word,
        square: SquareOccurrence,
    },
    /// The images share no common prefix of length 3.
    ShortCommonPrefix { length: usize },
    /// The candidate synchronizer is not a prefix of this letter's image.
    NotPrefix { letter: char },
    /// The synchronizer occurs in `f(first) f(second)` at a 1-based position
    /// other than 1 and `|f(first)| + 1`.
    MisalignedSynchronizer {
        first: char,
        second: char,
        position: usize,
    },
}

impl fmt::Display for HnWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HnWitness::NonFsTriple { triple, square } => {
                write!(f, "image of square-free {triple} contains {square}")
            }
            HnWitness::ShortCommonPrefix { length } => {
                write!(f, "images share a common prefix of length {length} < 3")
            }
            HnWitness::NotPrefix { letter } => {
                write!(f, "synchronizer is not a prefix of f({letter})")
            }
            HnWitness::MisalignedSynchronizer {
                first,
                second,
                position,
            } => write!(
                f,
                "synchronizer occurs inside f({first})f({second}) at position {position}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnReport {
    pub verdict: Verdict,
    pub synchronizer: Option<Word>,
    pub prefix_length: Option<usize>,
    pub failing_witness: Option<HnWitness>,
}

impl HnReport {
    fn fail(witness: HnWitness) -> HnReport {
        HnReport {
            verdict: Verdict::Fail,
            synchronizer: None,
            prefix_length: None,
            failing_witness: Some(witness),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for HnReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.verdict, &self.synchronizer, &self.failing_witness) {
            (Verdict::Pass, Some(p), _) => write!(f, "pass: synchronizer {p} (length {})", p.len()),
            (_, _, Some(w)) => write!(f, "fail: {w}"),
            _ => write!(f, "{:?}", self.verdict),
        }
    }
}
