//! The embedded morphism catalog (33 FS morphisms over {a,b,c,d}) and the
//! explicit circular FS words used for short lengths, with the line-oriented
//! morphism text format.
//!
//! Everything here is checked when loaded: image lengths against the
//! declared lengths, each morphism against the synchronizing-prefix
//! certificate, and each fixture against the circular FS property.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::morphism::{HnReport, Morphism, MorphismError};
use crate::words::{is_circular_fs, Alphabet, CircularWord, Word, WordError, QUATERNARY, TERNARY};

pub const CATALOG_SIZE: usize = 33;

const MORPHISM_SOURCES: [&str; CATALOG_SIZE] = [
    include_str!("../data/morphisms/f00.txt"),
    include_str!("../data/morphisms/f01.txt"),
    include_str!("../data/morphisms/f02.txt"),
    include_str!("../data/morphisms/f03.txt"),
    include_str!("../data/morphisms/f04.txt"),
    include_str!("../data/morphisms/f05.txt"),
    include_str!("../data/morphisms/f06.txt"),
    include_str!("../data/morphisms/f07.txt"),
    include_str!("../data/morphisms/f08.txt"),
    include_str!("../data/morphisms/f09.txt"),
    include_str!("../data/morphisms/f10.txt"),
    include_str!("../data/morphisms/f11.txt"),
    include_str!("../data/morphisms/f12.txt"),
    include_str!("../data/morphisms/f13.txt"),
    include_str!("../data/morphisms/f14.txt"),
    include_str!("../data/morphisms/f15.txt"),
    include_str!("../data/morphisms/f16.txt"),
    include_str!("../data/morphisms/f17.txt"),
    include_str!("../data/morphisms/f18.txt"),
    include_str!("../data/morphisms/f19.txt"),
    include_str!("../data/morphisms/f20.txt"),
    include_str!("../data/morphisms/f21.txt"),
    include_str!("../data/morphisms/f22.txt"),
    include_str!("../data/morphisms/f23.txt"),
    include_str!("../data/morphisms/f24.txt"),
    include_str!("../data/morphisms/f25.txt"),
    include_str!("../data/morphisms/f26.txt"),
    include_str!("../data/morphisms/f27.txt"),
    include_str!("../data/morphisms/f28.txt"),
    include_str!("../data/morphisms/f29.txt"),
    include_str!("../data/morphisms/f30.txt"),
    include_str!("../data/morphisms/f31.txt"),
    include_str!("../data/morphisms/f32.txt"),
];

/// Declared image lengths `(|f(a)|, |f(b)|, |f(c)|, |f(d)|)`, checked against
/// the transcribed images at load.
const DECLARED_LENGTHS: [[usize; 4]; CATALOG_SIZE] = [
    [24, 30, 50, 51],
    [24, 50, 54, 55],
    [30, 44, 50, 51],
    [28, 52, 62, 63],
    [31, 36, 50, 51],
    [36, 50, 54, 55],
    [50, 55, 62, 63],
    [39, 44, 54, 55],
    [28, 51, 62, 63],
    [30, 36, 55, 56],
    [39, 50, 54, 55],
    [30, 32, 50, 51],
    [44, 51, 57, 58],
    [36, 42, 50, 51],
    [24, 44, 55, 67],
    [60, 62, 62, 63],
    [50, 50, 50, 51],
    [24, 48, 57, 58],
    [24, 51, 54, 55],
    [24, 52, 54, 55],
    [28, 32, 51, 52],
    [28, 44, 57, 58],
    [28, 46, 51, 52],
    [28, 50, 56, 57],
    [28, 50, 57, 58],
    [28, 56, 57, 58],
    [28, 57, 62, 63],
    [32, 36, 54, 55],
    [32, 50, 54, 55],
    [36, 50, 51, 52],
    [36, 50, 62, 63],
    [39, 48, 62, 63],
    [44, 52, 54, 55],
];

const FIXTURES_SOURCE: &str = include_str!("../data/fixtures.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("line {line}: expected `<letter> -> <binary word>`, got {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: letter {letter:?} defined twice")]
    DuplicateLetter { line: usize, letter: char },
    #[error("line {line}: unknown source letter {letter:?}")]
    UnknownLetter { line: usize, letter: char },
    #[error("line {line}: image {image:?} is not a nonempty binary word")]
    NonBinaryImage { line: usize, image: String },
    #[error("no image given for letter {0:?}")]
    MissingLetter(char),
    #[error("morphism f{id}: |f({letter})| = {actual}, declared {declared}")]
    LengthMismatch {
        id: usize,
        letter: char,
        declared: usize,
        actual: usize,
    },
    #[error("morphism f{id} failed certification: {report}")]
    NotCertified { id: usize, report: String },
    #[error("fixture of declared length {declared} has length {actual}")]
    FixtureLength { declared: usize, actual: usize },
    #[error("fixture of length {0} is not a circular FS word")]
    FixtureNotFs(usize),
    #[error("fixture line {line}: {message}")]
    MalformedFixture { line: usize, message: String },
    #[error("no catalog morphism with id {0}")]
    UnknownId(usize),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Parses the morphism text format: one `<letter> -> <binary word>` line per
/// source letter. Blank lines and `#` comments are ignored. The source
/// alphabet is T when a `d` line is present and S otherwise.
pub fn parse_morphism(text: &str) -> Result<Morphism, CatalogError> {
    let mut images: [Option<Word>; 4] = Default::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (lhs, rhs) = content
            .split_once("->")
            .ok_or_else(|| CatalogError::MalformedLine {
                line,
                text: raw.to_string(),
            })?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        let mut chars = lhs.chars();
        let letter = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => {
                return Err(CatalogError::MalformedLine {
                    line,
                    text: raw.to_string(),
                })
            }
        };
        let slot = QUATERNARY
            .index_of(letter)
            .ok_or(CatalogError::UnknownLetter { line, letter })?;
        let image = Word::binary(rhs)
            .ok()
            .filter(|w| !w.is_empty())
            .ok_or_else(|| CatalogError::NonBinaryImage {
                line,
                image: rhs.to_string(),
            })?;
        if images[slot as usize].replace(image).is_some() {
            return Err(CatalogError::DuplicateLetter { line, letter });
        }
    }
    let source: Alphabet = if images[3].is_some() { QUATERNARY } else { TERNARY };
    let mut out = Vec::with_capacity(source.size());
    for (slot, image) in images.into_iter().enumerate().take(source.size()) {
        out.push(image.ok_or(CatalogError::MissingLetter(source.letter(slot as u8)))?);
    }
    Ok(Morphism::new(source, out)?)
}

/// Inverse of [`parse_morphism`]: letters in alphabet order, no comments.
pub fn serialize_morphism(f: &Morphism) -> String {
    f.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: usize,
    pub morphism: Morphism,
    pub declared_lengths: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureSource {
    Explicit,
    /// Image of a word over T under a catalog morphism.
    Image { morphism_id: usize, preimage: Word },
}

impl fmt::Display for FixtureSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureSource::Explicit => f.write_str("explicit"),
            FixtureSource::Image {
                morphism_id,
                preimage,
            } => write!(f, "f{morphism_id}({preimage})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureEntry {
    pub length: usize,
    pub word: CircularWord,
    pub source: FixtureSource,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub fixtures: Vec<FixtureEntry>,
    pub reports: Vec<HnReport>,
}

impl Catalog {
    /// Parses the embedded data without running any verification.
    pub fn parse_embedded() -> Result<Catalog, CatalogError> {
        let entries = MORPHISM_SOURCES
            .iter()
            .zip(DECLARED_LENGTHS)
            .enumerate()
            .map(|(id, (text, declared_lengths))| {
                Ok(CatalogEntry {
                    id,
                    morphism: parse_morphism(text)?,
                    declared_lengths,
                })
            })
            .collect::<Result<Vec<_>, CatalogError>>()?;
        let fixtures = parse_fixtures(FIXTURES_SOURCE, &entries)?;
        Ok(Catalog {
            entries,
            fixtures,
            reports: Vec::new(),
        })
    }

    /// Checks declared lengths, certifies every morphism and checks every
    /// fixture. Stops at the first failure.
    pub fn verify(&mut self) -> Result<(), CatalogError> {
        for entry in &self.entries {
            let actual = entry.morphism.image_lengths();
            for (slot, (&declared, &actual)) in entry.declared_lengths.iter().zip(&actual).enumerate() {
                if declared != actual {
                    return Err(CatalogError::LengthMismatch {
                        id: entry.id,
                        letter: QUATERNARY.letter(slot as u8),
                        declared,
                        actual,
                    });
                }
            }
        }
        let mut reports = Vec::with_capacity(self.entries.len());
        for entry in &self.entries {
            let report = entry.morphism.certify_hn();
            if !report.passed() {
                return Err(CatalogError::NotCertified {
                    id: entry.id,
                    report: report.to_string(),
                });
            }
            reports.push(report);
        }
        for fixture in &self.fixtures {
            if fixture.word.len() != fixture.length {
                return Err(CatalogError::FixtureLength {
                    declared: fixture.length,
                    actual: fixture.word.len(),
                });
            }
            if !is_circular_fs(&fixture.word)? {
                return Err(CatalogError::FixtureNotFs(fixture.length));
            }
        }
        self.reports = reports;
        Ok(())
    }

    pub fn entry(&self, id: usize) -> Result<&CatalogEntry, CatalogError> {
        self.entries.get(id).ok_or(CatalogError::UnknownId(id))
    }

    pub fn fixture(&self, length: usize) -> Option<&FixtureEntry> {
        self.fixtures.iter().find(|f| f.length == length)
    }
}

fn parse_fixtures(text: &str, entries: &[CatalogEntry]) -> Result<Vec<FixtureEntry>, CatalogError> {
    let mut fixtures = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: &str| CatalogError::MalformedFixture {
            line,
            message: message.to_string(),
        };
        let (len, body) = content
            .split_once(char::is_whitespace)
            .ok_or_else(|| bad("expected `<length> <word>`"))?;
        let length: usize = len.parse().map_err(|_| bad("length is not a number"))?;
        let body = body.trim();
        let (word, source) = match body.strip_prefix('r') {
            Some(reference) => {
                let (id, pre) = reference
                    .split_once(':')
                    .ok_or_else(|| bad("expected rNN:<word over T>"))?;
                let morphism_id: usize = id.parse().map_err(|_| bad("bad morphism id"))?;
                let entry = entries.get(morphism_id).ok_or(CatalogError::UnknownId(morphism_id))?;
                let preimage = Word::parse(QUATERNARY, pre)?;
                let word = entry
                    .morphism
                    .apply_circular(&CircularWord::new(preimage.clone()))?;
                (
                    word,
                    FixtureSource::Image {
                        morphism_id,
                        preimage,
                    },
                )
            }
            None => (CircularWord::new(Word::binary(body)?), FixtureSource::Explicit),
        };
        fixtures.push(FixtureEntry {
            length,
            word,
            source,
        });
    }
    Ok(fixtures)
}

/// The embedded catalog, verified on first use.
pub fn load_catalog() -> Result<&'static Catalog, CatalogError> {
    static CATALOG: OnceLock<Result<Catalog, CatalogError>> = OnceLock::new();
    CATALOG
        .get_or_init(|| {
            let mut catalog = Catalog::parse_embedded()?;
            catalog.verify()?;
            Ok(catalog)
        })
        .as_ref()
        .map_err(Clone::clone)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_morphism() {
        let f = parse_morphism("a -> 01\nb -> 10\nc -> 0\nd -> 1").unwrap();
        assert_eq!(f.source(), QUATERNARY);
        assert_eq!(f.image_lengths(), vec![2, 2, 1, 1]);
        assert_eq!(serialize_morphism(&f), "a -> 01\nb -> 10\nc -> 0\nd -> 1\n");
    }

    #[test]
    fn parse_ignores_comments_and_blank_lines() {
        let f = parse_morphism("# three letters\n\nc -> 011 # last\na -> 0\n  b -> 01\n").unwrap();
        assert_eq!(f.source(), TERNARY);
        assert_eq!(f.image(2).to_string(), "011");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_morphism("a -> 02"),
            Err(CatalogError::NonBinaryImage { line: 1, .. })
        ));
        assert!(matches!(
            parse_morphism("a -> 0\na -> 1\nb -> 0\nc -> 1"),
            Err(CatalogError::DuplicateLetter { line: 2, letter: 'a' })
        ));
        assert_eq!(
            parse_morphism("a -> 0\nb -> 1\nd -> 1").unwrap_err(),
            CatalogError::MissingLetter('c')
        );
        assert!(matches!(
            parse_morphism("a = 0"),
            Err(CatalogError::MalformedLine { line: 1, .. })
        ));
        assert!(matches!(
            parse_morphism("e -> 0"),
            Err(CatalogError::UnknownLetter { letter: 'e', .. })
        ));
        assert!(matches!(
            parse_morphism("a -> "),
            Err(CatalogError::NonBinaryImage { .. })
        ));
    }

    #[test]
    fn first_entry_lengths() {
        let catalog = Catalog::parse_embedded().unwrap();
        assert_eq!(catalog.entries.len(), CATALOG_SIZE);
        assert_eq!(catalog.entries[0].morphism.image_lengths(), vec![24, 30, 50, 51]);
        assert_eq!(
            catalog.fixture(19).unwrap().word.to_string(),
            "0001011100011001011"
        );
    }

    #[test]
    fn detects_length_mismatch() {
        let mut catalog = Catalog::parse_embedded().unwrap();
        catalog.entries[3].declared_lengths[1] += 1;
        assert!(matches!(
            catalog.verify(),
            Err(CatalogError::LengthMismatch { id: 3, letter: 'b', .. })
        ));
    }

    #[test]
    fn detects_broken_fixture() {
        let mut catalog = Catalog::parse_embedded().unwrap();
        catalog.fixtures[6].word = CircularWord::new(Word::binary("0000111").unwrap());
        assert_eq!(catalog.verify(), Err(CatalogError::FixtureNotFs(7)));
    }
}
