//! Lengths reachable from catalog morphisms, and construction of verified
//! circular FS words of any admissible length with replayable certificates.
//!
//! Given a morphism with image lengths (α, β, γ, δ) in the roles of a, b, c, d,
//! a level circular square-free ternary word of length `3i + j` with
//! `|w|_a = i + j` and `|w|_b = |w|_c = i`, and `k` of its a's (or b's)
//! replaced by d, the image has length
//!
//! ```text
//! (α + β + γ) i + α j + k (δ - α)    replacing a's, k <= i + j
//! (α + β + γ) i + α j + k (δ - β)    replacing b's, k <= i
//! ```
//!
//! with `i >= 1`, `-1 <= j <= 1` and `3i + j` not an exceptional ternary length.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{load_catalog, Catalog, CatalogError, FixtureSource};
use crate::morphism::MorphismError;
use crate::search::{decide_with, SearchConfig, SearchError};
use crate::ternary::{
    arrange_profile, generate_level_ternary, is_exceptional, substitute, LetterProfile,
    TernaryError,
};
use crate::words::{
    is_circular_fs, is_circular_square_free, CircularWord, WordError, BINARY, TERNARY,
};

/// Lengths with no circular FS word.
pub const FORBIDDEN_LENGTHS: [usize; 33] = [
    9, 10, 11, 13, 15, 16, 17, 18, 21, 22, 23, 25, 26, 27, 29, 31, 32, 33, 34, 35, 37, 40, 41, 42,
    45, 47, 49, 53, 56, 59, 61, 64, 73,
];

/// From this length on, every length is produced by morphism 16 alone.
pub const LARGE_LENGTH_THRESHOLD: usize = 7400;
const LARGE_LENGTH_MORPHISM: usize = 16;

pub fn is_forbidden(m: usize) -> bool {
    FORBIDDEN_LENGTHS.contains(&m)
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("no circular FS word of length {0} exists")]
    Impossible(usize),
    #[error("no recipe or fixture produces length {0} (internal error)")]
    NoRecipe(usize),
    #[error("constructed word of length {m} failed verification: {reason} (internal error)")]
    VerificationFailed { m: usize, reason: String },
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error(transparent)]
    Ternary(#[from] TernaryError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubstitutionTarget {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

impl SubstitutionTarget {
    pub fn letter(self) -> char {
        match self {
            SubstitutionTarget::A => 'a',
            SubstitutionTarget::B => 'b',
        }
    }
}

/// All 24 orderings of the four letters, identity first, lexicographic.
pub fn permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                let d = 6 - a - b - c;
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// Parameters of one application of the length formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Recipe {
    pub morphism_id: usize,
    /// Role letter x (a, b, c, d in order) uses the image of `permutation[x]`.
    pub permutation: [u8; 4],
    pub i: usize,
    pub j: i64,
    pub k: usize,
    pub substitution_target: SubstitutionTarget,
}

impl Recipe {
    pub fn ternary_length(&self) -> i64 {
        3 * self.i as i64 + self.j
    }

    /// Checks the side conditions on `i`, `j` and `k`.
    pub fn is_admissible(&self) -> bool {
        let n = self.ternary_length();
        let k_max = match self.substitution_target {
            SubstitutionTarget::A => self.i as i64 + self.j,
            SubstitutionTarget::B => self.i as i64,
        };
        self.i >= 1
            && (-1..=1).contains(&self.j)
            && !is_exceptional(n as usize)
            && (self.k as i64) <= k_max
    }

    /// Length of the constructed word, from image lengths in original letter
    /// order.
    pub fn predicted_length(&self, image_lengths: &[usize]) -> i64 {
        let role = |x: usize| image_lengths[self.permutation[x] as usize] as i64;
        let (alpha, beta, gamma, delta) = (role(0), role(1), role(2), role(3));
        formula(
            [alpha, beta, gamma, delta],
            self.i as i64,
            self.j,
            self.k as i64,
            self.substitution_target,
        )
    }
}

fn formula(roles: [i64; 4], i: i64, j: i64, k: i64, target: SubstitutionTarget) -> i64 {
    let [alpha, beta, gamma, delta] = roles;
    let replaced = match target {
        SubstitutionTarget::A => alpha,
        SubstitutionTarget::B => beta,
    };
    (alpha + beta + gamma) * i + alpha * j + k * (delta - replaced)
}

/// Every `m` in `1..=max_m` given by either length formula for the image
/// lengths `(α, β, γ, δ)` in that role order.
pub fn reachable_lengths(image_lengths: [usize; 4], max_m: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    if image_lengths.contains(&0) {
        return out;
    }
    let roles = image_lengths.map(|l| l as i64);
    let shortest = *image_lengths.iter().min().expect("four lengths");
    // every letter of the ternary word contributes at least `shortest`
    let n_max = (max_m / shortest) as i64;
    let max_m = max_m as i64;
    for i in 1..=(n_max + 1) / 3 {
        for j in -1..=1i64 {
            let n = 3 * i + j;
            if n > n_max || is_exceptional(n as usize) {
                continue;
            }
            for (target, k_max) in [(SubstitutionTarget::A, i + j), (SubstitutionTarget::B, i)] {
                for k in 0..=k_max {
                    let m = formula(roles, i, j, k, target);
                    if (1..=max_m).contains(&m) {
                        out.insert(m as usize);
                    }
                }
            }
        }
    }
    out
}

/// Lengths in `1..max_m` not reachable from any catalog morphism under any
/// assignment of its image lengths to the four roles.
pub fn knockout(catalog: &Catalog, max_m: usize) -> Vec<usize> {
    let perms = permutations();
    let jobs: Vec<[usize; 4]> = catalog
        .entries
        .iter()
        .flat_map(|entry| {
            let lengths = entry.morphism.image_lengths();
            perms
                .iter()
                .map(move |p| p.map(|x| lengths[x as usize]))
                .collect::<Vec<_>>()
        })
        .collect();
    let reachable = jobs
        .par_iter()
        .map(|&roles| reachable_lengths(roles, max_m))
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    (1..max_m).filter(|m| !reachable.contains(m)).collect()
}

/// First recipe for `m` in the order: morphism id, permutation (identity
/// first), then `(i, |j|, k)`, replacing a's before b's.
pub fn find_recipe(catalog: &Catalog, m: usize) -> Option<Recipe> {
    if m == 0 {
        return None;
    }
    let perms = permutations();
    for entry in &catalog.entries {
        let lengths = entry.morphism.image_lengths();
        let shortest = *lengths.iter().min().expect("four images");
        let n_max = (m / shortest) as i64;
        for permutation in &perms {
            let roles = permutation.map(|x| lengths[x as usize] as i64);
            for i in 1..=(n_max + 1) / 3 {
                for j in [0i64, -1, 1] {
                    let n = 3 * i + j;
                    if n > n_max || is_exceptional(n as usize) {
                        continue;
                    }
                    let mut best: Option<Recipe> = None;
                    for (target, k_max) in [(SubstitutionTarget::A, i + j), (SubstitutionTarget::B, i)] {
                        let base = formula(roles, i, j, 0, target);
                        let step = formula(roles, i, j, 1, target) - base;
                        let gap = m as i64 - base;
                        let k = if step == 0 {
                            (gap == 0).then_some(0)
                        } else if gap % step == 0 && gap / step >= 0 {
                            Some(gap / step)
                        } else {
                            None
                        };
                        if let Some(k) = k.filter(|&k| k <= k_max) {
                            if best.is_none_or(|b| (k as usize) < b.k) {
                                best = Some(Recipe {
                                    morphism_id: entry.id,
                                    permutation: *permutation,
                                    i: i as usize,
                                    j,
                                    k: k as usize,
                                    substitution_target: target,
                                });
                            }
                        }
                    }
                    if best.is_some() {
                        return best;
                    }
                }
            }
        }
    }
    None
}

/// The recipe covering every `m >= 7400` with morphism 16 (image lengths
/// 50, 50, 50, 51): write `m = 50 l + k` and `l = 3i + j`, then replace `k`
/// of the b's.
pub fn large_length_recipe(m: usize) -> Option<Recipe> {
    if m < LARGE_LENGTH_THRESHOLD {
        return None;
    }
    let l = (m / 50) as i64;
    let k = m % 50;
    let j = (l + 1).rem_euclid(3) - 1;
    let i = ((l - j) / 3) as usize;
    Some(Recipe {
        morphism_id: LARGE_LENGTH_MORPHISM,
        permutation: [0, 1, 2, 3],
        i,
        j,
        k,
        substitution_target: SubstitutionTarget::B,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Recipe,
    Explicit,
    Impossible,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::Recipe => "recipe",
            CertificateKind::Explicit => "explicit",
            CertificateKind::Impossible => "impossible",
        })
    }
}

/// Record of an exhaustive search that found nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpossibilityStamp {
    pub method: String,
    pub split_depth: usize,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CertificateRecord", into = "CertificateRecord")]
pub struct LengthCertificate {
    pub m: usize,
    pub kind: CertificateKind,
    pub recipe: Option<Recipe>,
    /// Level ternary word (canonical form) the recipe starts from.
    pub base_word: Option<String>,
    /// Where an explicit witness comes from, e.g. `f27(abdcd)`.
    pub source: Option<String>,
    pub witness: Option<String>,
    pub impossibility: Option<ImpossibilityStamp>,
}

/// Flat wire form of a certificate.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateRecord {
    m: usize,
    kind: CertificateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    morphism_id: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    substitution_target: Option<SubstitutionTarget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    impossibility: Option<ImpossibilityStamp>,
}

fn roles_to_text(roles: &[u8; 4]) -> String {
    roles.iter().map(|&r| (b'a' + r) as char).collect()
}

fn roles_from_text(text: &str) -> Result<[u8; 4], String> {
    let bytes = text.as_bytes();
    if bytes.len() != 4 {
        return Err(format!("permutation {text:?} must have four letters"));
    }
    let mut roles = [0u8; 4];
    let mut seen = [false; 4];
    for (slot, &b) in bytes.iter().enumerate() {
        let r = b.wrapping_sub(b'a');
        if r > 3 || std::mem::replace(&mut seen[r as usize], true) {
            return Err(format!("permutation {text:?} must use a, b, c, d once each"));
        }
        roles[slot] = r;
    }
    Ok(roles)
}

impl TryFrom<CertificateRecord> for LengthCertificate {
    type Error = String;

    fn try_from(r: CertificateRecord) -> Result<Self, String> {
        let recipe = match (r.morphism_id, r.permutation, r.i, r.j, r.k, r.substitution_target) {
            (None, None, None, None, None, None) => None,
            (Some(morphism_id), Some(permutation), Some(i), Some(j), Some(k), Some(substitution_target)) => {
                Some(Recipe {
                    morphism_id,
                    permutation: roles_from_text(&permutation)?,
                    i,
                    j,
                    k,
                    substitution_target,
                })
            }
            _ => return Err("recipe fields must be all present or all absent".into()),
        };
        Ok(LengthCertificate {
            m: r.m,
            kind: r.kind,
            recipe,
            base_word: r.base_word,
            source: r.source,
            witness: r.witness,
            impossibility: r.impossibility,
        })
    }
}

impl From<LengthCertificate> for CertificateRecord {
    fn from(c: LengthCertificate) -> Self {
        CertificateRecord {
            m: c.m,
            kind: c.kind,
            morphism_id: c.recipe.map(|r| r.morphism_id),
            permutation: c.recipe.map(|r| roles_to_text(&r.permutation)),
            i: c.recipe.map(|r| r.i),
            j: c.recipe.map(|r| r.j),
            k: c.recipe.map(|r| r.k),
            substitution_target: c.recipe.map(|r| r.substitution_target),
            base_word: c.base_word,
            source: c.source,
            witness: c.witness,
            impossibility: c.impossibility,
        }
    }
}

impl LengthCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<LengthCertificate, ConstructError> {
        serde_json::from_str(text).map_err(|e| ConstructError::CertificateRejected(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Seed for the ternary generator.
    pub seed: u64,
    /// Run the exhaustive search to stamp impossible lengths.
    pub stamp_impossible: bool,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            seed: 0,
            stamp_impossible: true,
        }
    }
}

/// Builds the word a recipe describes from its (arranged) base word.
fn build_from_recipe(
    catalog: &Catalog,
    recipe: &Recipe,
    base: &CircularWord,
) -> Result<CircularWord, ConstructError> {
    let entry = catalog.entry(recipe.morphism_id)?;
    let u = substitute(base, recipe.substitution_target.letter(), recipe.k)?;
    let g = entry.morphism.relabel(&recipe.permutation);
    Ok(g.apply_circular(&u)?)
}

fn verify_built(m: usize, word: &CircularWord) -> Result<(), ConstructError> {
    if word.len() != m {
        return Err(ConstructError::VerificationFailed {
            m,
            reason: format!("length {} differs from {m}", word.len()),
        });
    }
    if !is_circular_fs(word)? {
        return Err(ConstructError::VerificationFailed {
            m,
            reason: "not a circular FS word".into(),
        });
    }
    Ok(())
}

/// Produces the word for a recipe from a freshly generated ternary word.
pub fn realize_recipe(
    catalog: &Catalog,
    recipe: &Recipe,
    seed: u64,
) -> Result<(CircularWord, CircularWord), ConstructError> {
    let n = recipe.ternary_length() as usize;
    let level = generate_level_ternary(n, seed)?;
    let base = arrange_profile(&level, recipe.i, recipe.j)?;
    let word = build_from_recipe(catalog, recipe, &base)?;
    Ok((base, word))
}

pub fn construct(m: usize) -> Result<LengthCertificate, ConstructError> {
    construct_with(m, &ConstructOptions::default())
}

pub fn construct_with(m: usize, options: &ConstructOptions) -> Result<LengthCertificate, ConstructError> {
    let catalog = load_catalog()?;
    let blank = |kind| LengthCertificate {
        m,
        kind,
        recipe: None,
        base_word: None,
        source: None,
        witness: None,
        impossibility: None,
    };
    if m == 0 {
        return Ok(LengthCertificate {
            witness: Some(String::new()),
            source: Some("empty word".into()),
            ..blank(CertificateKind::Explicit)
        });
    }
    if is_forbidden(m) {
        let impossibility = if options.stamp_impossible {
            let config = SearchConfig {
                max_length: m.max(crate::search::DEFAULT_MAX_LENGTH),
                ..SearchConfig::default()
            };
            let outcome = decide_with(m, false, &config)?;
            if outcome.exists {
                return Err(ConstructError::VerificationFailed {
                    m,
                    reason: "search found a word at a forbidden length".into(),
                });
            }
            Some(ImpossibilityStamp {
                method: "exhaustive binary necklace search".into(),
                split_depth: config.split_depth,
                nodes_explored: outcome.nodes_explored,
            })
        } else {
            None
        };
        return Ok(LengthCertificate {
            impossibility,
            ..blank(CertificateKind::Impossible)
        });
    }
    if let Some(fixture) = catalog.fixture(m) {
        verify_built(m, &fixture.word)?;
        let source = match &fixture.source {
            FixtureSource::Explicit => "table".to_string(),
            other => other.to_string(),
        };
        return Ok(LengthCertificate {
            source: Some(source),
            witness: Some(fixture.word.to_string()),
            ..blank(CertificateKind::Explicit)
        });
    }
    let recipe = match large_length_recipe(m).or_else(|| find_recipe(catalog, m)) {
        Some(recipe) => recipe,
        None => return search_witness(m).map(|witness| LengthCertificate {
            source: Some("exhaustive search".into()),
            witness: Some(witness.to_string()),
            ..blank(CertificateKind::Explicit)
        }),
    };
    let entry = catalog.entry(recipe.morphism_id)?;
    debug_assert!(recipe.is_admissible());
    if recipe.predicted_length(&entry.morphism.image_lengths()) != m as i64 {
        return Err(ConstructError::VerificationFailed {
            m,
            reason: "recipe arithmetic does not give m".into(),
        });
    }
    let (base, word) = realize_recipe(catalog, &recipe, options.seed)?;
    verify_built(m, &word)?;
    Ok(LengthCertificate {
        recipe: Some(recipe),
        base_word: Some(base.to_string()),
        witness: Some(word.to_string()),
        ..blank(CertificateKind::Recipe)
    })
}

/// Least circular FS word of length `m` by exhaustive search, for the few
/// lengths that neither a recipe nor a fixture covers.
fn search_witness(m: usize) -> Result<CircularWord, ConstructError> {
    let config = SearchConfig {
        max_length: m,
        ..SearchConfig::default()
    };
    let outcome = decide_with(m, false, &config)?;
    let word = outcome.witness.ok_or(ConstructError::NoRecipe(m))?;
    verify_built(m, &word)?;
    Ok(word)
}

fn reject(reason: impl Into<String>) -> ConstructError {
    ConstructError::CertificateRejected(reason.into())
}

/// Rebuilds the witness a certificate describes and re-verifies it.
pub fn replay(cert: &LengthCertificate) -> Result<CircularWord, ConstructError> {
    let catalog = load_catalog()?;
    let m = cert.m;
    let word = match cert.kind {
        CertificateKind::Impossible => {
            return Err(reject(format!("length {m} is certified impossible; nothing to replay")))
        }
        CertificateKind::Explicit => {
            let text = cert.witness.as_deref().ok_or_else(|| reject("explicit certificate without witness"))?;
            let word = CircularWord::parse(BINARY, text)?;
            if let Some(FixtureSource::Image { morphism_id, preimage }) =
                catalog.fixture(m).map(|f| &f.source)
            {
                let expected = catalog
                    .entry(*morphism_id)?
                    .morphism
                    .apply_circular(&CircularWord::new(preimage.clone()))?;
                if expected != word {
                    return Err(reject(format!("witness differs from f{morphism_id}({preimage})")));
                }
            }
            word
        }
        CertificateKind::Recipe => {
            let recipe = cert.recipe.ok_or_else(|| reject("recipe certificate without recipe"))?;
            if !recipe.is_admissible() {
                return Err(reject("recipe parameters violate the side conditions"));
            }
            let entry = catalog.entry(recipe.morphism_id)?;
            if recipe.predicted_length(&entry.morphism.image_lengths()) != m as i64 {
                return Err(reject("recipe arithmetic does not give m"));
            }
            let base_text = cert.base_word.as_deref().ok_or_else(|| reject("recipe certificate without base word"))?;
            let base = CircularWord::parse(TERNARY, base_text)?;
            if base.to_string() != base_text {
                return Err(reject("base word is not in canonical form"));
            }
            if !is_circular_square_free(&base) {
                return Err(reject("base word is not circular square-free"));
            }
            let counts = LetterProfile::of(base.representative()).counts;
            let i = recipe.i;
            if counts != [(i as i64 + recipe.j) as usize, i, i] {
                return Err(reject("base word letter counts do not match i and j"));
            }
            let word = build_from_recipe(catalog, &recipe, &base)?;
            if let Some(text) = cert.witness.as_deref() {
                if word.to_string() != text {
                    return Err(reject("replayed word differs from recorded witness"));
                }
            }
            word
        }
    };
    verify_built(m, &word).map_err(|e| reject(e.to_string()))?;
    Ok(word)
}
