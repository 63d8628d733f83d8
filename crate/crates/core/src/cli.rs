//! The `fsword` command line.
//!
//! Exit codes: 0 for an affirmative answer or success, 1 for a negative
//! mathematical answer (word not FS, length impossible, morphism not
//! certified), 2 for usage and data errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::catalog::{load_catalog, parse_morphism, serialize_morphism, Catalog};
use crate::constructor::{
    construct_with, knockout, replay, CertificateKind, ConstructError, ConstructOptions,
    LengthCertificate, LARGE_LENGTH_THRESHOLD,
};
use crate::morphism::{HnReport, HnWitness, Morphism};
use crate::search::{decide_range, decide_with, SearchConfig, SearchOutcome, DEFAULT_MAX_LENGTH};
use crate::words::{
    find_squares, first_circular_square, first_forbidden_circular_square, first_forbidden_square,
    Alphabet, CircularWord, SquareOccurrence, Word, BINARY,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment variable overriding the ternary generator seed.
pub const SEED_VAR: &str = "FSWORD_SEED";

#[derive(Parser, Debug)]
#[command(name = "fsword", version)]
#[command(about = "Circular binary words whose only squares are 00, 11 and 0101")]
struct Cli {
    /// Cap on worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a word for squares
    Check(CheckArgs),
    /// Build a circular FS word of length M, or show that none exists
    Construct(ConstructArgs),
    /// Rebuild and re-verify the word described by a certificate file
    Replay {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Lengths below MAX not reachable from the catalog morphisms
    Coverage {
        #[arg(long, default_value_t = LARGE_LENGTH_THRESHOLD)]
        max: usize,
        #[arg(long)]
        json: bool,
    },
    /// Morphism tools
    #[command(subcommand)]
    Morphism(MorphismCommand),
    /// Exhaustive search for circular FS words
    Search(SearchArgs),
    /// Embedded catalog tools
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args, Debug)]
struct CheckArgs {
    word: String,
    /// Treat the word as circular
    #[arg(long)]
    circular: bool,
    /// Test square-freeness instead of the FS property
    #[arg(long)]
    squarefree: bool,
    /// Alphabet of the word: B (0,1), S (a,b,c) or T (a,b,c,d)
    #[arg(long, default_value = "B")]
    alphabet: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    m: usize,
    /// Write the certificate (JSON) to this file
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Ternary generator seed (defaults to $FSWORD_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum MorphismCommand {
    /// Certify a morphism given as a file or as builtin:R
    Check {
        source: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(required_unless_present = "range")]
    m: Option<usize>,
    /// Also count the circular FS words (rotation classes)
    #[arg(long)]
    count: bool,
    /// Decide every length in LO..=HI
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "m")]
    range: Option<Vec<usize>>,
    /// Largest length accepted
    #[arg(long, default_value_t = DEFAULT_MAX_LENGTH)]
    max_length: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// Re-check every morphism and fixture
    Verify {
        #[arg(long)]
        json: bool,
    },
    /// Print one catalog morphism in the text format
    Export {
        #[arg(long)]
        id: usize,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Fails the command with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_ERROR
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_YES
            };
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // only the first call in a process can size the global pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Check(args) => check(&mut io, args),
        Command::Construct(args) => construct_cmd(&mut io, args),
        Command::Replay { file, json } => replay_cmd(&mut io, file, json),
        Command::Coverage { max, json } => coverage(&mut io, max, json),
        Command::Morphism(MorphismCommand::Check { source, json }) => morphism_check(&mut io, &source, json),
        Command::Search(args) => search(&mut io, args),
        Command::Catalog(CatalogCommand::Verify { json }) => catalog_verify(&mut io, json),
        Command::Catalog(CatalogCommand::Export { id }) => catalog_export(&mut io, id),
    };
    match result {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(io.err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn square_json(sq: &Option<SquareOccurrence>) -> serde_json::Value {
    match sq {
        Some(sq) => json!({"root": sq.root.to_string(), "index": sq.index, "period": sq.period}),
        None => serde_json::Value::Null,
    }
}

fn check(io: &mut Io, args: CheckArgs) -> CmdResult {
    let alphabet = Alphabet::by_name(&args.alphabet)?;
    let word = Word::parse(alphabet, &args.word)?;
    if !args.squarefree && alphabet != BINARY {
        return Err(Failure(format!(
            "the FS property is defined for binary words; use --squarefree for alphabet {alphabet}"
        )));
    }
    let (square, label) = match (args.circular, args.squarefree) {
        (false, false) => (first_forbidden_square(&word)?, "FS"),
        (true, false) => (
            first_forbidden_circular_square(&CircularWord::new(word.clone()))?,
            "circular FS",
        ),
        (false, true) => (find_squares(&word).into_iter().next(), "square-free"),
        (true, true) => (
            first_circular_square(&CircularWord::new(word.clone())),
            "circular square-free",
        ),
    };
    let ok = square.is_none();
    if args.json {
        let value = json!({
            "word": word.to_string(),
            "circular": args.circular,
            "property": label,
            "holds": ok,
            "square": square_json(&square),
        });
        writeln!(io.out, "{value}")?;
    } else if let Some(sq) = &square {
        writeln!(io.out, "not {label}: {sq}")?;
    } else {
        writeln!(io.out, "{label}")?;
    }
    Ok(if ok { EXIT_YES } else { EXIT_NO })
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure(format!("{SEED_VAR} must be an unsigned integer, got {text:?}"))),
        Err(_) => Ok(0),
    }
}

fn describe_certificate(cert: &LengthCertificate) -> String {
    let m = cert.m;
    match cert.kind {
        CertificateKind::Impossible => match &cert.impossibility {
            Some(stamp) => format!(
                "{m} impossible (forbidden length; exhaustive search explored {} nodes)",
                stamp.nodes_explored
            ),
            None => format!("{m} impossible (forbidden length)"),
        },
        CertificateKind::Explicit => format!(
            "{m} explicit ({}) {}",
            cert.source.as_deref().unwrap_or("given"),
            cert.witness.as_deref().unwrap_or("")
        ),
        CertificateKind::Recipe => {
            let r = cert.recipe.expect("recipe certificate");
            let roles: String = r.permutation.iter().map(|&x| (b'a' + x) as char).collect();
            format!(
                "{m} recipe f{} roles={roles} i={} j={} k={} replace={} base={} {}",
                r.morphism_id,
                r.i,
                r.j,
                r.k,
                r.substitution_target.letter(),
                cert.base_word.as_deref().unwrap_or(""),
                cert.witness.as_deref().unwrap_or("")
            )
        }
    }
}

fn construct_cmd(io: &mut Io, args: ConstructArgs) -> CmdResult {
    let seed = match args.seed {
        Some(seed) => seed,
        None => seed_from_env()?,
    };
    let options = ConstructOptions {
        seed,
        ..ConstructOptions::default()
    };
    let cert = construct_with(args.m, &options)?;
    if let Some(path) = &args.certificate {
        fs::write(path, cert.to_json() + "\n")
            .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
    }
    if args.json {
        writeln!(io.out, "{}", cert.to_json())?;
    } else {
        writeln!(io.out, "{}", describe_certificate(&cert))?;
    }
    Ok(match cert.kind {
        CertificateKind::Impossible => EXIT_NO,
        _ => EXIT_YES,
    })
}

fn replay_cmd(io: &mut Io, file: PathBuf, json: bool) -> CmdResult {
    let text = fs::read_to_string(&file)
        .map_err(|e| Failure(format!("cannot read {}: {e}", file.display())))?;
    let cert = LengthCertificate::from_json(&text)?;
    if cert.kind == CertificateKind::Impossible {
        if json {
            writeln!(io.out, "{}", json!({"m": cert.m, "kind": "impossible", "verified": false}))?;
        } else {
            writeln!(io.out, "{} impossible: nothing to replay", cert.m)?;
        }
        return Ok(EXIT_NO);
    }
    let word = match replay(&cert) {
        Ok(word) => word,
        Err(ConstructError::CertificateRejected(reason)) => {
            return Err(Failure(format!("certificate rejected: {reason}")))
        }
        Err(e) => return Err(e.into()),
    };
    if json {
        writeln!(
            io.out,
            "{}",
            json!({"m": cert.m, "kind": cert.kind.to_string(), "verified": true, "witness": word.to_string()})
        )?;
    } else {
        writeln!(io.out, "{} verified circular FS {}", cert.m, word)?;
    }
    Ok(EXIT_YES)
}

fn coverage(io: &mut Io, max: usize, json: bool) -> CmdResult {
    let catalog = load_catalog()?;
    let leftover = knockout(catalog, max);
    if json {
        writeln!(io.out, "{}", json!({"max": max, "unreachable": leftover}))?;
    } else {
        let list: Vec<String> = leftover.iter().map(|m| m.to_string()).collect();
        writeln!(io.out, "unreachable below {max} ({}): {}", leftover.len(), list.join(" "))?;
    }
    Ok(EXIT_YES)
}

fn load_morphism(source: &str) -> Result<Morphism, Failure> {
    if let Some(id) = source.strip_prefix("builtin:") {
        let id: usize = id
            .parse()
            .map_err(|_| Failure(format!("bad builtin id {id:?}")))?;
        return Ok(load_catalog()?.entry(id)?.morphism.clone());
    }
    let text = fs::read_to_string(source).map_err(|e| Failure(format!("cannot read {source}: {e}")))?;
    Ok(parse_morphism(&text)?)
}

fn report_json(f: &Morphism, report: &HnReport) -> serde_json::Value {
    let witness = report.failing_witness.as_ref().map(|w| {
        let detail = match w {
            HnWitness::NonFsTriple { triple, square } => {
                json!({"kind": "non_fs_triple", "triple": triple.to_string(), "square": square_json(&Some(square.clone()))})
            }
            HnWitness::ShortCommonPrefix { length } => json!({"kind": "short_common_prefix", "length": length}),
            HnWitness::NotPrefix { letter } => json!({"kind": "not_prefix", "letter": letter.to_string()}),
            HnWitness::MisalignedSynchronizer { first, second, position } => json!({
                "kind": "misaligned_synchronizer",
                "pair": format!("{first}{second}"),
                "position": position,
            }),
        };
        json!({"description": w.to_string(), "detail": detail})
    });
    json!({
        "verdict": if report.passed() { "pass" } else { "fail" },
        "image_lengths": f.image_lengths(),
        "synchronizer": report.synchronizer.as_ref().map(|p| p.to_string()),
        "prefix_length": report.prefix_length,
        "failing_witness": witness,
    })
}

fn morphism_check(io: &mut Io, source: &str, json: bool) -> CmdResult {
    let f = load_morphism(source)?;
    let report = f.certify_hn();
    if json {
        writeln!(io.out, "{}", report_json(&f, &report))?;
    } else {
        let lengths: Vec<String> = f.image_lengths().iter().map(|l| l.to_string()).collect();
        writeln!(io.out, "image lengths {}", lengths.join(" "))?;
        writeln!(io.out, "{report}")?;
    }
    Ok(if report.passed() { EXIT_YES } else { EXIT_NO })
}

fn outcome_line(o: &SearchOutcome) -> String {
    let witness = o.witness.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "–".into());
    let witness = if witness.is_empty() { "ε".to_string() } else { witness };
    match o.count {
        Some(count) => format!("{} {} {} {}", o.length, o.exists, witness, count),
        None => format!("{} {} {}", o.length, o.exists, witness),
    }
}

fn search(io: &mut Io, args: SearchArgs) -> CmdResult {
    let config = SearchConfig {
        max_length: args.max_length,
        ..SearchConfig::default()
    };
    if let Some(range) = &args.range {
        let outcomes = decide_range(range[0], range[1], args.count, &config)?;
        if args.json {
            writeln!(io.out, "{}", serde_json::to_string(&outcomes)?)?;
        } else {
            for o in &outcomes {
                writeln!(io.out, "{}", outcome_line(o))?;
            }
        }
        return Ok(EXIT_YES);
    }
    let m = args.m.expect("clap requires m without --range");
    let outcome = decide_with(m, args.count, &config)?;
    if args.json {
        writeln!(io.out, "{}", serde_json::to_string(&outcome)?)?;
    } else {
        writeln!(io.out, "{}", outcome_line(&outcome))?;
    }
    Ok(if outcome.exists { EXIT_YES } else { EXIT_NO })
}

fn catalog_verify(io: &mut Io, json: bool) -> CmdResult {
    let mut catalog = Catalog::parse_embedded()?;
    catalog.verify()?;
    if json {
        let entries: Vec<_> = catalog
            .entries
            .iter()
            .zip(&catalog.reports)
            .map(|(e, r)| json!({"id": e.id, "image_lengths": e.declared_lengths, "synchronizer_length": r.prefix_length}))
            .collect();
        let fixtures: Vec<_> = catalog.fixtures.iter().map(|f| f.length).collect();
        writeln!(io.out, "{}", json!({"ok": true, "morphisms": entries, "fixtures": fixtures}))?;
    } else {
        writeln!(
            io.out,
            "ok: {} morphisms certified, {} image lengths matched, {} fixtures verified",
            catalog.entries.len(),
            catalog.entries.len() * 4,
            catalog.fixtures.len()
        )?;
    }
    Ok(EXIT_YES)
}

fn catalog_export(io: &mut Io, id: usize) -> CmdResult {
    let catalog = load_catalog()?;
    let entry = catalog.entry(id)?;
    write!(io.out, "{}", serialize_morphism(&entry.morphism))?;
    Ok(EXIT_YES)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fsword").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_command_is_usage_error() {
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn fs_check_over_non_binary_is_data_error() {
        let (code, _, err) = run_capture(&["check", "abc", "--alphabet", "S"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("--squarefree"));
        let (code, out, _) = run_capture(&["check", "abc", "--alphabet", "S", "--squarefree", "--circular"]);
        assert_eq!(code, EXIT_YES);
        assert_eq!(out.trim(), "circular square-free");
    }

    #[test]
    fn search_line_format() {
        let (code, out, _) = run_capture(&["search", "9"]);
        assert_eq!(code, EXIT_NO);
        assert_eq!(out.trim(), "9 false –");
    }
}
