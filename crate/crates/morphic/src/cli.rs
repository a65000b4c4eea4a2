//! The `morphic` command line.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use morphic_core::conjugacy::complete_classes_up_to;
use morphic_core::factors::{closure_factor_set_within, coded_factor_set_within, required_underlying_bound};
use morphic_core::morphism::coded_prefix;
use morphic_core::verify::{full_report, Clock, Construction, VerifyConfig};
use morphic_core::{Level, MorphicOracle, OracleConfig};

use crate::format::read_morphism;
use crate::json::report_json;
use crate::text::{report_text, verdict_text};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "morphic", version, about = "Factors and conjugacy classes of morphic words")]
pub struct Cli {
    #[command(flatten)]
    pub source: Source,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Built-in morphisms.
    #[arg(long, value_enum, global = true, conflicts_with_all = ["inner", "outer"])]
    pub preset: Option<Preset>,
    /// File with the endomorphism F; the underlying word is F^ω(seed).
    #[arg(long, global = true, requires = "outer")]
    pub inner: Option<PathBuf>,
    /// File with the coding G; the coded word is G(F^ω(seed)).
    #[arg(long, global = true, requires = "inner")]
    pub outer: Option<PathBuf>,
    #[arg(long, global = true, default_value = "0")]
    pub seed: char,
    /// Largest factor length any exact factor set may be built for.
    #[arg(long, global = true, default_value_t = morphic_core::factors::DEFAULT_UNDERLYING_LIMIT)]
    pub max_bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Underlying,
    Coded,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Underlying => Level::Underlying,
            LevelArg::Coded => Level::Coded,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a prefix of the underlying or coded word.
    Generate {
        #[arg(long, value_enum, default_value = "coded")]
        level: LevelArg,
        #[arg(long)]
        length: usize,
    },
    /// Decide whether a word is a factor, with its derivation.
    Member {
        #[arg(long, value_enum, default_value = "coded")]
        level: LevelArg,
        word: String,
        #[arg(long, default_value = "01")]
        inner_marker: String,
        #[arg(long, default_value = "ab")]
        outer_marker: String,
        #[arg(long, default_value_t = 200)]
        base_bound: usize,
    },
    /// List the complete conjugacy classes up to a length.
    Classes {
        #[arg(long, value_enum, default_value = "coded")]
        level: LevelArg,
        #[arg(long)]
        max_len: usize,
        /// Only classes with at most this many occurrences of 1.
        #[arg(long)]
        max_index: Option<usize>,
    },
    /// Run every check on the construction.
    VerifyPaper {
        #[arg(long, default_value_t = 5)]
        max_d: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Include membership derivations in JSON output.
        #[arg(long)]
        certificates: bool,
        #[arg(long, default_value_t = 100)]
        coded_len: usize,
        #[arg(long, default_value_t = 40)]
        enumeration_len: usize,
        #[arg(long, default_value_t = 2)]
        margin: usize,
        #[arg(long, default_value_t = 200)]
        base_bound: usize,
    },
}

struct WallClock(Instant);

impl Clock for WallClock {
    fn now_ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}

fn morphisms(source: &Source) -> anyhow::Result<Construction> {
    match (&source.inner, &source.outer) {
        (Some(inner), Some(outer)) => {
            let big_f = read_morphism(inner)?;
            let big_g = read_morphism(outer)?;
            Ok(Construction::from_base(big_f, big_g)?)
        }
        _ => Ok(Construction::preset()),
    }
}

fn oracle_config(source: &Source, base_bound: usize) -> OracleConfig {
    OracleConfig {
        base_bound,
        underlying_limit: source.max_bound,
        coded_limit: source.max_bound,
        ..OracleConfig::default()
    }
}

fn generate(pm: &Construction, seed: char, level: Level, length: usize, out: &mut dyn Write) -> anyhow::Result<u8> {
    let seed = pm.underlying().letter(seed)?;
    let word = match level {
        Level::Underlying => pm.big_f.fixed_point_prefix(seed, length)?,
        Level::Coded => coded_prefix(&pm.big_f, seed, &pm.big_g, length)?,
    };
    if length > 0 {
        writeln!(out, "{word}")?;
    }
    Ok(EXIT_PASS)
}

fn classes(
    pm: &Construction,
    source: &Source,
    level: Level,
    max_len: usize,
    max_index: Option<usize>,
    out: &mut dyn Write,
) -> anyhow::Result<u8> {
    let seed = pm.underlying().letter(source.seed)?;
    let found = if max_len < 2 {
        Vec::new()
    } else {
        let set = match level {
            Level::Underlying => closure_factor_set_within(&pm.f, seed, max_len, source.max_bound)?,
            Level::Coded => {
                let k = required_underlying_bound(max_len, &pm.g);
                let under = closure_factor_set_within(&pm.f, seed, k, source.max_bound)?;
                coded_factor_set_within(&under, &pm.g, max_len, source.max_bound)?
            }
        };
        complete_classes_up_to(&set, max_len, max_index)?
    };
    for c in &found {
        match c.index() {
            Some(i) => writeln!(out, "{}\tlength={}\tindex={i}", c.canonical(), c.len())?,
            None => writeln!(out, "{}\tlength={}", c.canonical(), c.len())?,
        }
    }
    writeln!(out, "{} complete classes", found.len())?;
    Ok(EXIT_PASS)
}

fn run_command(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<u8> {
    let pm = morphisms(&cli.source)?;
    match &cli.command {
        Command::Generate { level, length } => generate(&pm, cli.source.seed, (*level).into(), *length, out),
        Command::Member { level, word, inner_marker, outer_marker, base_bound } => {
            let level: Level = (*level).into();
            let seed = pm.underlying().letter(cli.source.seed)?;
            let m01 = pm.underlying().parse(inner_marker)?;
            let mab = pm.coded().parse(outer_marker)?;
            let config = oracle_config(&cli.source, *base_bound);
            let oracle = MorphicOracle::new(&pm.f, seed, &pm.g, &m01, &mab, config)?;
            let w = oracle.alphabet(level).parse(word).context("word")?;
            let verdict = oracle.decide(&w, level)?;
            if verdict.replay(&oracle)? != verdict.is_factor {
                bail!("derivation does not replay");
            }
            out.write_all(verdict_text(&verdict).as_bytes())?;
            Ok(EXIT_PASS)
        }
        Command::Classes { level, max_len, max_index } => {
            classes(&pm, &cli.source, (*level).into(), *max_len, *max_index, out)
        }
        Command::VerifyPaper {
            max_d,
            format,
            output,
            certificates,
            coded_len,
            enumeration_len,
            margin,
            base_bound,
        } => {
            if cli.source.seed != '0' {
                bail!("verify-paper uses the seed 0");
            }
            let cfg = VerifyConfig {
                max_d: *max_d,
                coded_len: *coded_len,
                enumeration_len: *enumeration_len,
                margin: *margin,
                oracle: oracle_config(&cli.source, *base_bound),
            };
            let report = full_report(&pm, &cfg, &WallClock(Instant::now()));
            let text = match format {
                Format::Text => report_text(&report),
                Format::Json => serde_json::to_string_pretty(&report_json(&report, *certificates))? + "\n",
            };
            match output {
                Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(if report.passed() {
                EXIT_PASS
            } else if report.only_resource_failures() {
                EXIT_RESOURCE
            } else {
                EXIT_CHECK_FAILED
            })
        }
    }
}

/// Exit code for an error: resource limits map to 3, everything else is
/// bad input.
pub fn error_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(core) = cause.downcast_ref::<morphic_core::Error>() {
            if core.is_resource() {
                return EXIT_RESOURCE;
            }
        }
    }
    EXIT_USAGE
}

/// Runs a parsed command line, writing results to `out` and errors to
/// `err`, and returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match run_command(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            error_code(&e)
        }
    }
}
