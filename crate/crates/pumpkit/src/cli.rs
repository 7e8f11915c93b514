//! Subcommands of the `pumpkit` binary.
//!
//! Exit codes: 0 success or accepted, 1 not accepted or verification failed,
//! 2 usage, parse or validation errors, 3 search limits exceeded, 4 no
//! pumping witness found.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pumpkit_core::corpus;
use pumpkit_core::extract::{extract, ExtractError, ExtractionMode};
use pumpkit_core::level::max_level;
use pumpkit_core::normalize::{normalize, pumping_params, ParamsError};
use pumpkit_core::pda::{is_star_form, validate, GeneralPda, NormalizedPda};
use pumpkit_core::runner::{minimal_accepting_path, SearchError, SearchLimits};
use pumpkit_core::verify::{verify, DEFAULT_COUNTS};

use crate::chart::{Annotation, Chart};
use crate::document::PdaDocument;
use crate::report::PumpReport;

pub const EXIT_OK: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_LIMITS: u8 = 3;
pub const EXIT_NO_WITNESS: u8 = 4;

const BUILTIN_PREFIX: &str = "builtin:";

#[derive(Parser, Debug)]
#[command(name = "pumpkit", version, about = "Pumping decompositions from pushdown automaton runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the pumping parameters p' and p of the normalized machine.
    Params {
        /// PDA file, or builtin:NAME.
        pda: String,
    },
    /// Write the ±1 normal form of a machine.
    Normalize {
        pda: String,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a machine in the file format, e.g. to export a builtin.
    Export {
        pda: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide membership for one word or every line of a word file.
    Check {
        pda: String,
        #[command(flatten)]
        word: WordArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Extract and verify a pumping decomposition.
    Pump {
        pda: String,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_enum, default_value_t = Mode::BestEffort)]
        mode: Mode,
        /// Pumping counts to verify, comma separated.
        #[arg(long = "n", value_delimiter = ',', default_values_t = DEFAULT_COUNTS)]
        counts: Vec<usize>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Draw the stack-height profile of the minimal accepting run.
    Profile {
        pda: String,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_enum, default_value_t = Render::Ascii)]
        render: Render,
        /// Mark the level triple, pump positions and u/v/x/y/z spans.
        #[arg(long)]
        annotate: bool,
        /// Extraction mode used by --annotate.
        #[arg(long, value_enum, default_value_t = Mode::BestEffort)]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Args, Debug)]
struct WordArgs {
    /// The input word, one symbol per character.
    #[arg(conflicts_with = "word_file")]
    word: Option<String>,
    /// Read words from a file, one per line.
    #[arg(long)]
    word_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Maximum run length explored by searches.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Maximum stack height explored by searches.
    #[arg(long)]
    max_height: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Strict,
    BestEffort,
}

impl From<Mode> for ExtractionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => ExtractionMode::Strict,
            Mode::BestEffort => ExtractionMode::BestEffort,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Render {
    Ascii,
    Svg,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, message)
    }
}

type Outcome = Result<u8, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Params { pda } => cmd_params(&mut io, &pda),
        Command::Normalize { pda, output } => cmd_normalize(&mut io, &pda, output.as_deref()),
        Command::Export { pda, output } => cmd_export(&mut io, &pda, output.as_deref()),
        Command::Check { pda, word, limits } => cmd_check(&mut io, &pda, &word, &limits),
        Command::Pump { pda, word, mode, counts, report, limits } => {
            cmd_pump(&mut io, &pda, &word, mode.into(), &counts, report, &limits)
        }
        Command::Profile { pda, word, render, annotate, mode, output, limits } => {
            cmd_profile(&mut io, &pda, &word, render, annotate, mode.into(), output.as_deref(), &limits)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message.trim_end());
            f.code
        }
    }
}

struct Loaded {
    general: GeneralPda,
    name: Option<String>,
    description: Option<String>,
}

fn load(io: &mut Io, source: &str) -> Result<Loaded, Failure> {
    let loaded = if let Some(name) = source.strip_prefix(BUILTIN_PREFIX) {
        let entry = corpus::builtin(name).map_err(|e| Failure::usage(e.to_string()))?;
        Loaded { general: entry.pda, name: Some(entry.name.into()), description: Some(entry.description.into()) }
    } else {
        let text = fs::read_to_string(source).map_err(|e| Failure::usage(format!("cannot read {source}: {e}")))?;
        let doc = PdaDocument::parse(&text).map_err(|e| Failure::usage(format!("{source}: {e}")))?;
        let general = doc.to_general().map_err(|e| Failure::usage(format!("{source}: {e}")))?;
        Loaded { general, name: doc.name, description: doc.description }
    };
    let report = validate(&loaded.general);
    if !report.is_well_formed() {
        return Err(Failure::usage(format!("{source} is not a valid automaton:\n{report}")));
    }
    for w in &report.warnings {
        let _ = writeln!(io.err, "warning: {w}");
    }
    Ok(loaded)
}

fn normalized(io: &mut Io, source: &str) -> Result<(Loaded, NormalizedPda), Failure> {
    let loaded = load(io, source)?;
    let pda = normalize(&loaded.general).map_err(|r| Failure::usage(format!("normalization failed:\n{r}")))?;
    Ok((loaded, pda))
}

fn write_output(io: &mut Io, output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => io.out.write_all(text.as_bytes()).map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

fn cmd_params(io: &mut Io, source: &str) -> Outcome {
    let (loaded, pda) = normalized(io, source)?;
    let (a, g) = (pda.state_count(), pda.stack_alphabet_size());
    let p = match pumping_params(&pda) {
        Ok(params) => format!("p'={} p={}", params.p_prime, params.p),
        Err(ParamsError::Overflow { p_prime, exponent }) => {
            format!("p'={p_prime} p={a}*{}^{exponent} (exceeds 64 bits)", g + 1)
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let changed = if is_star_form(&loaded.general) { "unchanged" } else { "changed" };
    let _ = writeln!(io.out, "{p} |A|={a} |Γ|={g} normalization={changed}");
    Ok(EXIT_OK)
}

fn cmd_normalize(io: &mut Io, source: &str, output: Option<&Path>) -> Outcome {
    let (loaded, pda) = normalized(io, source)?;
    let doc = PdaDocument::from_general(&pda.to_general(), loaded.name, loaded.description);
    write_output(io, output, &doc.to_json())?;
    Ok(EXIT_OK)
}

fn cmd_export(io: &mut Io, source: &str, output: Option<&Path>) -> Outcome {
    let loaded = load(io, source)?;
    let doc = PdaDocument::from_general(&loaded.general, loaded.name, loaded.description);
    write_output(io, output, &doc.to_json())?;
    Ok(EXIT_OK)
}

fn read_words(args: &WordArgs, alphabet: &[char]) -> Result<Vec<Vec<char>>, Failure> {
    let words: Vec<String> = match (&args.word, &args.word_file) {
        (Some(w), None) => vec![w.clone()],
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?
            .lines()
            .map(str::to_string)
            .collect(),
        _ => return Err(Failure::usage("give a word or --word-file")),
    };
    words
        .into_iter()
        .map(|w| {
            let chars: Vec<char> = w.chars().collect();
            match chars.iter().position(|c| !alphabet.contains(c)) {
                Some(at) => Err(Failure::usage(format!(
                    "symbol {:?} at offset {at} of {w:?} is not in the input alphabet",
                    chars[at]
                ))),
                None => Ok(chars),
            }
        })
        .collect()
}

fn single_word(args: &WordArgs, alphabet: &[char]) -> Result<Vec<char>, Failure> {
    let mut words = read_words(args, alphabet)?;
    if words.len() != 1 {
        return Err(Failure::usage(format!("expected exactly one word, got {}", words.len())));
    }
    Ok(words.remove(0))
}

fn limits_for(args: &LimitArgs, word_len: usize, pda: &NormalizedPda) -> Result<(SearchLimits, bool), Failure> {
    let default = SearchLimits::for_word(word_len, pumping_params(pda).ok().map(|p| p.p));
    let given = args.max_steps.is_some() || args.max_height.is_some();
    let limits = SearchLimits::new(
        args.max_steps.unwrap_or(default.max_steps),
        args.max_height.unwrap_or(default.max_stack_height),
    )
    .map_err(|e| Failure::usage(e.to_string()))?;
    Ok((limits, given))
}

fn cmd_check(io: &mut Io, source: &str, word: &WordArgs, limit_args: &LimitArgs) -> Outcome {
    let (_, pda) = normalized(io, source)?;
    let words = read_words(word, pda.input_alphabet())?;
    let (mut rejected, mut limited) = (false, false);
    for w in &words {
        let (limits, _) = limits_for(limit_args, w.len(), &pda)?;
        let text: String = w.iter().collect();
        let verdict = match minimal_accepting_path(&pda, w, limits) {
            Ok(path) => format!("accepted ({} steps)", path.len()),
            Err(SearchError::NotAccepted) => {
                rejected = true;
                "not accepted".into()
            }
            Err(SearchError::LimitExceeded(hit)) => {
                limited = true;
                format!("limit exceeded ({hit})")
            }
        };
        let _ = writeln!(io.out, "{verdict}\t{text}");
    }
    Ok(if limited {
        EXIT_LIMITS
    } else if rejected {
        EXIT_REJECTED
    } else {
        EXIT_OK
    })
}

fn extraction_failure(e: ExtractError) -> Failure {
    let code = match &e {
        ExtractError::NotAccepted => EXIT_REJECTED,
        ExtractError::LimitExceeded(_) => EXIT_LIMITS,
        ExtractError::StrictPreconditionViolated { .. } | ExtractError::Params(_) => EXIT_USAGE,
        ExtractError::NoWitnessFound(_) | ExtractError::NoRepeatFound => EXIT_NO_WITNESS,
        ExtractError::Level(_) | ExtractError::MinimalityViolation { .. } => EXIT_REJECTED,
    };
    let mut message = e.to_string();
    if let ExtractError::NoWitnessFound(d) = &e {
        message.push_str(&format!(
            "\nrun of {} steps, level {}, {} repeated configuration(s), {} repeated full state(s), {} attempt(s)",
            d.path_length,
            d.level,
            d.repeated_configurations,
            d.repeated_full_states,
            d.attempts.len()
        ));
    }
    Failure::new(code, message)
}

fn cmd_pump(
    io: &mut Io,
    source: &str,
    word: &WordArgs,
    mode: ExtractionMode,
    counts: &[usize],
    format: ReportFormat,
    limit_args: &LimitArgs,
) -> Outcome {
    let (loaded, pda) = normalized(io, source)?;
    let w = single_word(word, pda.input_alphabet())?;
    let (limits, given) = limits_for(limit_args, w.len(), &pda)?;
    let found = extract(&pda, &w, mode, limits).map_err(extraction_failure)?;
    let verification = verify(&pda, &found.path, &found.decomposition, counts, given.then_some(limits));
    let report = PumpReport::new(loaded.name, &found, &verification);
    let text = match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Text => report.to_text(),
    };
    let _ = io.out.write_all(text.as_bytes());
    Ok(if report.overall { EXIT_OK } else { EXIT_REJECTED })
}

#[allow(clippy::too_many_arguments)]
fn cmd_profile(
    io: &mut Io,
    source: &str,
    word: &WordArgs,
    render: Render,
    annotate: bool,
    mode: ExtractionMode,
    output: Option<&Path>,
    limit_args: &LimitArgs,
) -> Outcome {
    let (_, pda) = normalized(io, source)?;
    let w = single_word(word, pda.input_alphabet())?;
    let (limits, _) = limits_for(limit_args, w.len(), &pda)?;
    let path = minimal_accepting_path(&pda, &w, limits).map_err(|e| {
        let code = match e {
            SearchError::NotAccepted => EXIT_REJECTED,
            SearchError::LimitExceeded(_) => EXIT_LIMITS,
        };
        Failure::new(code, e.to_string())
    })?;
    let mut code = EXIT_OK;
    let annotation = if annotate {
        match extract(&pda, &w, mode, limits) {
            Ok(found) => Some(Annotation {
                level: found.diagnostics.level_witness,
                decomposition: Some(found.decomposition),
            }),
            Err(ExtractError::NoWitnessFound(d)) => {
                code = EXIT_NO_WITNESS;
                let _ = writeln!(io.err, "note: no pumping witness found; only the level triple is marked");
                Some(Annotation { level: d.level_witness, decomposition: None })
            }
            Err(e) => return Err(extraction_failure(e)),
        }
    } else {
        None
    };
    let annotation = annotation.map(|mut a| {
        if a.level.is_none() {
            a.level = max_level(path.profile(), path.len()).1;
        }
        a
    });
    let chart = Chart::from_path(&path, annotation);
    let text = match render {
        Render::Ascii => chart.to_ascii(),
        Render::Svg => chart.to_svg(),
    };
    write_output(io, output, &text)?;
    Ok(code)
}
