//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed. Built without the libtest harness so the
//! lines always appear.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fsword::constructor::{CertificateKind, SubstitutionTarget, LARGE_LENGTH_THRESHOLD};
use fsword::search::{decide_range, SearchConfig};
use fsword::words::{complement, is_circular_fs, is_fs_word, CircularWord, Word, BINARY, QUATERNARY};
use fsword::{construct, decide, knockout, load_catalog, replay, Catalog, LengthCertificate};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use common::*;

// Runtime budgets (release-grade test profile, one core).
const CATALOG_BUDGET: Duration = Duration::from_secs(10);
const LARGE_BUDGET: Duration = Duration::from_secs(120);
const KNOCKOUT_BUDGET: Duration = Duration::from_secs(30);
const SEARCH_BUDGET: Duration = Duration::from_secs(30 * 60);
const ROUNDTRIP_BUDGET: Duration = Duration::from_secs(5 * 60);

// Sample sizes.
const LINEAR_SAMPLES: usize = 1000;
const SAMPLED_MORPHISMS: usize = 5;
const CIRCULAR_SAMPLES: usize = 200;

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(start: Instant, budget: Duration) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    ensure(elapsed <= budget, || format!("took {elapsed:.1?}, budget {budget:?}"))?;
    Ok(elapsed)
}

fn catalog_integrity() -> Outcome {
    let start = Instant::now();
    let mut catalog = Catalog::parse_embedded().map_err(|e| e.to_string())?;
    catalog.verify().map_err(|e| e.to_string())?;
    ensure(catalog.entries.len() == 33, || format!("{} morphisms", catalog.entries.len()))?;
    let lengths_checked: usize = catalog.entries.iter().map(|e| e.declared_lengths.len()).sum();
    ensure(lengths_checked == 132, || format!("{lengths_checked} image lengths"))?;
    ensure(catalog.reports.iter().all(|r| r.passed()), || "a morphism failed certification".into())?;
    let expected: Vec<usize> = vec![
        1, 2, 3, 4, 5, 6, 7, 8, 12, 14, 19, 20, 24, 28, 30, 36, 38, 39, 43, 44, 46, 48, 50, 51, 52, 55, 57, 58, 63,
        65, 69, 70, 71, 77, 116, 127, 232, 241, 253,
    ];
    let got: Vec<usize> = catalog.fixtures.iter().map(|f| f.length).collect();
    ensure(got == expected, || format!("fixture lengths {got:?}"))?;
    for f in &catalog.fixtures {
        ensure(f.word.len() == f.length, || format!("fixture {} has length {}", f.length, f.word.len()))?;
        ensure(is_circular_fs(&f.word).unwrap(), || format!("fixture {} is not circular FS", f.length))?;
    }
    let elapsed = within(start, CATALOG_BUDGET)?;
    Ok(format!(
        "33 morphisms certified, 132 lengths matched, {} fixtures verified ({elapsed:.1?})",
        got.len()
    ))
}

fn large_lengths() -> Outcome {
    let start = Instant::now();
    let catalog = load_catalog().map_err(|e| e.to_string())?;
    ensure(catalog.entry(16).unwrap().morphism.certify_hn().passed(), || "f16 does not certify".into())?;
    for m in LARGE_LENGTH_THRESHOLD..=7500 {
        let cert = construct(m).map_err(|e| format!("m={m}: {e}"))?;
        ensure(cert.kind == CertificateKind::Recipe, || format!("m={m}: kind {}", cert.kind))?;
        let recipe = cert.recipe.unwrap();
        ensure(
            recipe.morphism_id == 16 && recipe.substitution_target == SubstitutionTarget::B,
            || format!("m={m}: recipe {recipe:?}"),
        )?;
        let word = replay(&cert).map_err(|e| format!("m={m}: {e}"))?;
        ensure(word.len() == m, || format!("m={m}: replayed length {}", word.len()))?;
    }
    let elapsed = within(start, LARGE_BUDGET)?;
    Ok(format!("7400..=7500 built with f16 and replayed ({elapsed:.1?})"))
}

fn knockout_list() -> Outcome {
    let start = Instant::now();
    let catalog = load_catalog().map_err(|e| e.to_string())?;
    let got: BTreeSet<usize> = knockout(catalog, LARGE_LENGTH_THRESHOLD).into_iter().collect();
    let expected = reference_leftover();
    let extra: Vec<_> = got.difference(&expected).collect();
    let missing: Vec<_> = expected.difference(&got).collect();
    ensure(extra.is_empty() && missing.is_empty(), || {
        format!(
            "{} lengths left over, expected {}; extra {extra:?}, missing {missing:?}",
            got.len(),
            expected.len()
        )
    })?;
    let elapsed = within(start, KNOCKOUT_BUDGET)?;
    Ok(format!("72 lengths left over ({elapsed:.1?})"))
}

fn existence_below_81() -> Outcome {
    let start = Instant::now();
    let outcomes = decide_range(0, 80, false, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let impossible: Vec<usize> = outcomes.iter().filter(|o| !o.exists).map(|o| o.length).collect();
    let expected: Vec<usize> = FORBIDDEN.iter().copied().filter(|&m| m <= 80).collect();
    ensure(impossible == expected, || format!("impossible lengths {impossible:?}"))?;
    for o in outcomes.iter().filter(|o| o.exists) {
        let w = o.witness.as_ref().unwrap();
        ensure(w.len() == o.length && is_circular_fs(w).unwrap(), || format!("bad witness at {}", o.length))?;
    }
    // counting mode never stops early, so this is the whole tree
    let full = decide(73, true).map_err(|e| e.to_string())?;
    ensure(!full.exists && full.count == Some(0), || "length 73 not exhausted".into())?;
    let elapsed = within(start, SEARCH_BUDGET)?;
    Ok(format!(
        "{} impossible lengths in 0..=80; 73 exhausted after {} nodes ({elapsed:.1?})",
        impossible.len(),
        full.nodes_explored
    ))
}

fn cross_oracle() -> Outcome {
    let mut failures = Vec::new();

    // (a) circular FS against every conjugate
    let mut a_checked = 0;
    for len in 0..=14 {
        for bits in 0..1u64 << len {
            let w = bits_to_word(bits, len);
            let cw = CircularWord::new(Word::new(BINARY, w.clone()).unwrap());
            a_checked += 1;
            if is_circular_fs(&cw).unwrap() != naive_circular_fs(&w) {
                failures.push(format!("(a) {}", ascii(&w, b"01")));
            }
        }
    }

    // (b) images of square-free words under sampled catalog morphisms
    let catalog = load_catalog().map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(2024);
    let mut ids: Vec<usize> = (0..catalog.entries.len()).collect();
    for slot in 0..SAMPLED_MORPHISMS {
        let pick = rng.random_range(slot..ids.len());
        ids.swap(slot, pick);
    }
    ids.truncate(SAMPLED_MORPHISMS);
    for _ in 0..LINEAR_SAMPLES {
        let len = rng.random_range(1..=10);
        let w = Word::new(QUATERNARY, random_square_free(&mut rng, 4, len)).unwrap();
        for &id in &ids {
            let image = catalog.entry(id).unwrap().morphism.apply(&w).unwrap();
            if !is_fs_word(&image).unwrap() {
                failures.push(format!("(b) f{id}({w})"));
            }
        }
    }

    // (c) circular images
    for _ in 0..CIRCULAR_SAMPLES {
        let len = rng.random_range(2..=10);
        let cw = CircularWord::new(Word::new(QUATERNARY, random_circular_square_free(&mut rng, 4, len)).unwrap());
        for entry in &catalog.entries {
            let image = entry.morphism.apply_circular(&cw).unwrap();
            if !is_circular_fs(&image).unwrap() {
                failures.push(format!("(c) f{}([{cw}])", entry.id));
            }
        }
    }

    // (d) exchanging 0 and 1
    let mut d_failures = 0;
    for m in 0..=12 {
        for bits in 0..1u64 << m {
            let w = Word::new(BINARY, bits_to_word(bits, m)).unwrap();
            let c = complement(&w).unwrap();
            let before = is_circular_fs(&CircularWord::new(w.clone())).unwrap();
            let after = is_circular_fs(&CircularWord::new(c)).unwrap();
            if before != after {
                if d_failures == 0 {
                    failures.push(format!("(d) [{w}] is {before}, its complement is {after}"));
                }
                d_failures += 1;
            }
        }
    }
    if d_failures > 1 {
        failures.push(format!("(d) {d_failures} words in total"));
    }

    ensure(failures.is_empty(), || {
        let shown: Vec<&str> = failures.iter().take(4).map(|s| s.as_str()).collect();
        format!("{} failures: {}", failures.len(), shown.join("; "))
    })?;
    Ok(format!(
        "(a) {a_checked} words, (b) {LINEAR_SAMPLES} words x f{ids:?}, (c) {CIRCULAR_SAMPLES} words x 33, (d) m <= 12"
    ))
}

fn certificate_roundtrip() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for m in (0..=300).filter(|m| !FORBIDDEN.contains(m)) {
        let cert = construct(m).map_err(|e| format!("m={m}: {e}"))?;
        let word = replay(&cert).map_err(|e| format!("m={m}: {e}"))?;
        ensure(word.len() == m, || format!("m={m}: replayed length {}", word.len()))?;
        let json = cert.to_json();
        let parsed = LengthCertificate::from_json(&json).map_err(|e| format!("m={m}: {e}"))?;
        ensure(parsed == cert, || format!("m={m}: re-parsed certificate differs"))?;
        ensure(parsed.to_json() == json, || format!("m={m}: re-serialized text differs"))?;
        let again = replay(&parsed).map_err(|e| format!("m={m}: {e}"))?;
        ensure(again == word, || format!("m={m}: replay of re-parsed certificate differs"))?;
        checked += 1;
    }
    let elapsed = within(start, ROUNDTRIP_BUDGET)?;
    Ok(format!("{checked} certificates replayed and round-tripped ({elapsed:.1?})"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("catalog integrity", catalog_integrity),
        ("large lengths via f16", large_lengths),
        ("knockout leftover list", knockout_list),
        ("existence for m <= 80", existence_below_81),
        ("cross-oracle properties", cross_oracle),
        ("certificate round-trip", certificate_roundtrip),
    ];
    let mut failed = 0;
    for (number, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", number + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", number + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
