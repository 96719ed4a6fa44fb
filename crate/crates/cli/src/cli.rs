use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sadic::{
    bounded_property_a, check_compat_nonuniform, desubstitute, global_language, iterate, lift_set,
    local_language, local_language_set, recover_sequence, s_patterns, s_patterns_up_to,
    DecoratedLetter, DecoratedSystem, GlobalSource, Letter, ParseMode, ParseResult, Projection,
    PropertyAStatus, PropertyAVerdict, Recovery, RectPattern, SequenceSpec, SubstitutionSet,
};

use crate::document::{load_pattern, load_system, System};
use crate::error::{CliError, Result};
use crate::render::{render, Format, Palette};

const DEFAULT_BUDGET: usize = 1 << 20;

#[derive(Debug, Parser)]
#[command(
    name = "sadic",
    version,
    about = "Explore multidimensional S-adic substitution systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the level-n iterate of the system's sequence on one letter.
    Gen(GenArgs),
    /// Windows of iterates (local language).
    Lang(LangArgs),
    /// Windows of configurations with preimages at every order (global language).
    GlobalLang(LangArgs),
    /// S-patterns of a given level.
    Spatterns(SpatternsArgs),
    /// Iterate the decorated system.
    Decorate(DecorateArgs),
    /// Read the history word along the bottom row of a decorated iterate.
    History(HistoryArgs),
    /// Desubstitute a pattern.
    Parse(ParseArgs),
    /// Recover the first substitutions of a sequence from sample iterates.
    Recover(RecoverArgs),
    /// Check that a substitution pattern can be applied to a pattern.
    CheckCompat(CompatArgs),
    /// Check that a decorated pattern is synchronized.
    CheckSync(SyncArgs),
    /// Check property A, by a sufficient condition or a bounded search.
    CheckPropa(PropaArgs),
    /// Render a pattern file.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct SystemArg {
    /// System document (JSON).
    #[arg(long)]
    pub system: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = "ascii")]
    pub format: Format,
    /// Colours as `#rrggbb,...` in alphabet order or `glyph=#rrggbb,...`.
    #[arg(long)]
    pub palette: Option<String>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub level: usize,
    #[arg(long)]
    pub letter: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceMode {
    /// Follow the document's sequence.
    Seq,
    /// Allow every member at every stage.
    Set,
}

#[derive(Debug, Args)]
pub struct LangArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub level: usize,
    /// Window shape as WxH.
    #[arg(long, value_parser = parse_window)]
    pub window: (usize, usize),
    #[arg(long, value_enum, default_value = "seq")]
    pub mode: SourceMode,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpatternsArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub level: usize,
    /// Include every level up to the given one.
    #[arg(long)]
    pub up_to: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProjectionArg {
    Lifted,
    Base,
    Vertical,
    Horizontal,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Vertical decoration of the seed (defaults to the sequence at n+1).
    #[arg(long)]
    pub v_seed: Option<String>,
    /// Horizontal decoration of the seed (defaults to the sequence at n+1).
    #[arg(long)]
    pub h_seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct DecorateArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub level: usize,
    #[arg(long)]
    pub letter: String,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[arg(long, value_enum, default_value = "lifted")]
    pub projection: ProjectionArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HistoryArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub level: usize,
    /// Base letter of the seed (defaults to the first letter).
    #[arg(long)]
    pub letter: Option<String>,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParseModeArg {
    Anchored,
    Windowed,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Pattern file, glyph rows from the top down.
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long, value_enum, default_value = "anchored")]
    pub mode: ParseModeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Number of substitutions to recover.
    #[arg(long)]
    pub depth: usize,
    /// Highest sample level used to break ties (defaults to depth + 3).
    #[arg(long)]
    pub max_level: Option<usize>,
    /// Draw samples from the periodic sequence with these names instead of
    /// the document's sequence.
    #[arg(long)]
    pub samples_from_seq: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompatArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub pattern: PathBuf,
    /// Grid of substitution names, rows from the top down separated by `/`.
    #[arg(long)]
    pub subs: String,
}

#[derive(Debug, Args)]
pub struct SyncArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Pattern over the decorated alphabet, e.g. `(o,a,d) (o,c,d)`.
    #[arg(long)]
    pub pattern: PathBuf,
}

#[derive(Debug, Args)]
pub struct PropaArgs {
    #[command(flatten)]
    pub system: SystemArg,
    /// Highest S-pattern level K searched.
    #[arg(long, default_value_t = 2)]
    pub level: usize,
    /// Longest block derivation N searched.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Run the bounded search even when a sufficient condition holds.
    #[arg(long)]
    pub bounded: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub system: SystemArg,
    #[arg(long)]
    pub pattern: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn text(text: impl Into<String>) -> Self {
        let mut text = text.into();
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
        Outcome {
            stdout: text.into_bytes(),
            ..Outcome::default()
        }
    }

    fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }

    fn failure(err: &CliError) -> Self {
        Outcome {
            stdout: Vec::new(),
            stderr: format!("error: {err}\n"),
            code: err.exit_code(),
        }
    }
}

/// Parses the arguments (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command).unwrap_or_else(|e| Outcome::failure(&e)),
        Err(e) if e.use_stderr() => Outcome {
            stdout: Vec::new(),
            stderr: e.render().to_string(),
            code: 2,
        },
        Err(e) => Outcome::text(e.render().to_string()),
    }
}

pub fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Lang(a) => lang(a, false),
        Command::GlobalLang(a) => lang(a, true),
        Command::Spatterns(a) => spatterns(a),
        Command::Decorate(a) => decorate(a),
        Command::History(a) => history(a),
        Command::Parse(a) => parse(a),
        Command::Recover(a) => recover(a),
        Command::CheckCompat(a) => check_compat(a),
        Command::CheckSync(a) => check_sync(a),
        Command::CheckPropa(a) => check_propa(a),
        Command::Render(a) => render_cmd(a),
    }
}

pub fn parse_window(text: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("`{text}` is not of the form WxH"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .ok()
            .filter(|v| *v > 0)
            .ok_or_else(|| format!("`{s}` is not a positive integer"))
    };
    Ok((parse(w)?, parse(h)?))
}

fn letter(set: &SubstitutionSet, symbol: &str) -> Result<Letter> {
    set.alphabet()
        .letter(symbol)
        .ok_or_else(|| CliError::Usage(format!("`{symbol}` is not in the alphabet")))
}

fn emit(bytes: Vec<u8>, out: Option<&Path>) -> Result<Outcome> {
    match out {
        Some(path) => {
            fs::write(path, &bytes).map_err(|e| CliError::io(path, e))?;
            Ok(Outcome::default())
        }
        None => Ok(Outcome {
            stdout: bytes,
            ..Outcome::default()
        }),
    }
}

fn emit_pattern(set: &SubstitutionSet, p: &RectPattern, output: &OutputArgs) -> Result<Outcome> {
    let palette = output
        .palette
        .as_deref()
        .map(|text| Palette::parse(text, set.alphabet()))
        .transpose()?;
    let bytes = render(p, set.alphabet(), output.format, palette.as_ref())?;
    emit(bytes, output.out.as_deref())
}

/// Patterns as blank-line separated blocks, in the order given.
fn blocks<'a>(
    set: &SubstitutionSet,
    patterns: impl IntoIterator<Item = &'a RectPattern>,
) -> String {
    let mut text = patterns
        .into_iter()
        .map(|p| set.alphabet().format_pattern(p))
        .collect::<Vec<_>>()
        .join("\n\n");
    if !text.is_empty() {
        text.push('\n');
    }
    text
}

fn gen(a: GenArgs) -> Result<Outcome> {
    let System { set, sequence } = load_system(&a.system.system)?;
    let p = iterate(&set, &sequence, a.level, letter(&set, &a.letter)?)?;
    emit_pattern(&set, &p, &a.output)
}

fn lang(a: LangArgs, global: bool) -> Result<Outcome> {
    let System { set, sequence } = load_system(&a.system.system)?;
    let (w, h) = a.window;
    let windows = match (global, a.mode) {
        (false, SourceMode::Seq) => local_language(&set, &sequence, a.level, w, h)?,
        (false, SourceMode::Set) => local_language_set(&set, a.level, w, h, a.budget)?,
        (true, SourceMode::Seq) => global_language(
            &set,
            GlobalSource::Sequence(&sequence),
            a.level,
            w,
            h,
            a.budget,
        )?,
        (true, SourceMode::Set) => {
            global_language(&set, GlobalSource::Set, a.level, w, h, a.budget)?
        }
    };
    emit(blocks(&set, windows.iter()).into_bytes(), a.out.as_deref())
}

fn spatterns(a: SpatternsArgs) -> Result<Outcome> {
    let System { set, .. } = load_system(&a.system.system)?;
    let patterns = if a.up_to {
        s_patterns_up_to(&set, a.level, a.budget)?
    } else {
        s_patterns(&set, a.level, a.budget)?
    };
    emit(blocks(&set, &patterns).into_bytes(), a.out.as_deref())
}

fn seed_letter(
    sys: &DecoratedSystem,
    sequence: &SequenceSpec,
    level: usize,
    base: Letter,
    seed: &SeedArgs,
) -> Result<DecoratedLetter> {
    let default = sequence.name_at(level + 1);
    let v = seed.v_seed.as_deref().unwrap_or(&default);
    let h = seed.h_seed.as_deref().unwrap_or(&default);
    Ok(sys.letter(base, v, h)?)
}

fn decorate(a: DecorateArgs) -> Result<Outcome> {
    let System { set, sequence } = load_system(&a.system.system)?;
    let sys = lift_set(&set)?;
    let base = letter(&set, &a.letter)?;
    let seed = seed_letter(&sys, &sequence, a.level, base, &a.seed)?;
    let p = sys.iterate(&sequence, a.level, seed)?;
    let text = match a.projection {
        ProjectionArg::Lifted => sys.lifted_set().alphabet().format_pattern(&p),
        ProjectionArg::Base => set
            .alphabet()
            .format_pattern(&sys.project(&p, Projection::Base)?),
        ProjectionArg::Vertical => set
            .names_alphabet()
            .format_pattern(&sys.project(&p, Projection::Vertical)?),
        ProjectionArg::Horizontal => set
            .names_alphabet()
            .format_pattern(&sys.project(&p, Projection::Horizontal)?),
    };
    emit(format!("{text}\n").into_bytes(), a.out.as_deref())
}

fn history(a: HistoryArgs) -> Result<Outcome> {
    let System { set, sequence } = load_system(&a.system.system)?;
    let sys = lift_set(&set)?;
    let base = match &a.letter {
        Some(symbol) => letter(&set, symbol)?,
        None => Letter::new(0),
    };
    let seed = seed_letter(&sys, &sequence, a.level, base, &a.seed)?;
    let word = sys.history_word(&sequence, a.level, seed)?;
    let mut out = Outcome::text(word.names.join(" "));
    if !word.uniform_width {
        out.stderr = "note: some stage has letter-dependent widths; the word need not follow the ruler pattern\n".into();
    }
    Ok(out)
}

fn describe_parse(set: &SubstitutionSet, r: &ParseResult) -> String {
    let alphabet = set.alphabet();
    let mut head = format!(
        "{} offset ({}, {}){}",
        r.substitution,
        r.offset.0,
        r.offset.1,
        if r.cropped { " cropped" } else { "" }
    );
    for ((x, y), options) in &r.undetermined {
        let options: Vec<&str> = options.iter().map(|l| alphabet.symbol(*l)).collect();
        head.push_str(&format!("\nundetermined ({x}, {y}): {}", options.join(" ")));
    }
    format!("{head}\n{}", alphabet.format_pattern(&r.preimage))
}

fn parse(a: ParseArgs) -> Result<Outcome> {
    let System { set, .. } = load_system(&a.system.system)?;
    let p = load_pattern(&a.pattern, set.alphabet())?;
    let mode = match a.mode {
        ParseModeArg::Anchored => ParseMode::Anchored,
        ParseModeArg::Windowed => ParseMode::Windowed,
    };
    let parses = desubstitute(&p, &set, mode)?;
    if parses.is_empty() {
        return Ok(Outcome {
            stderr: "unparseable\n".into(),
            code: 1,
            ..Outcome::default()
        });
    }
    let text = parses
        .iter()
        .map(|r| describe_parse(&set, r))
        .collect::<Vec<_>>()
        .join("\n\n");
    emit(format!("{text}\n").into_bytes(), a.out.as_deref())
}

/// Iterates of every letter at `level`, skipping letters whose iterate
/// runs into an incompatible stage.
fn sample_iterates(
    set: &SubstitutionSet,
    sequence: &SequenceSpec,
    level: usize,
) -> sadic::Result<Vec<RectPattern>> {
    let mut out = Vec::new();
    for a in set.alphabet().letters() {
        match iterate(set, sequence, level, a) {
            Ok(p) => out.push(p),
            Err(sadic::Error::StageIncompatible { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn recover(a: RecoverArgs) -> Result<Outcome> {
    let System { set, sequence } = load_system(&a.system.system)?;
    let sequence = match &a.samples_from_seq {
        Some(names) => {
            let names: Vec<String> = names
                .split([',', ' '])
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .map(String::from)
                .collect();
            let seq = SequenceSpec::periodic(names)?;
            seq.validate(&set)?;
            seq
        }
        None => sequence,
    };
    let max_level = a.max_level.unwrap_or(a.depth + 3);
    let provider = |level| sample_iterates(&set, &sequence, level);
    match recover_sequence(provider, &set, a.depth, max_level)? {
        Recovery::Sequence(names) => Ok(Outcome::text(names.join(" "))),
        Recovery::Ambiguous(report) => {
            let mut text = format!(
                "ambiguous at stage {} on a {}x{} sample; candidates:",
                report.stage, report.window.0, report.window.1
            );
            for c in &report.candidates {
                text.push_str("\n\n");
                text.push_str(&describe_parse(&set, c));
            }
            Ok(Outcome::text(text).with_code(1))
        }
    }
}

fn check_compat(a: CompatArgs) -> Result<Outcome> {
    let System { set, .. } = load_system(&a.system.system)?;
    let p = load_pattern(&a.pattern, set.alphabet())?;
    let sp = set.parse_substitution_pattern(&a.subs)?;
    if check_compat_nonuniform(&set, &sp, &p)? {
        Ok(Outcome::text("compatible"))
    } else {
        Ok(Outcome::text("incompatible").with_code(1))
    }
}

fn check_sync(a: SyncArgs) -> Result<Outcome> {
    let System { set, .. } = load_system(&a.system.system)?;
    let sys = lift_set(&set)?;
    let p = load_pattern(&a.pattern, sys.lifted_set().alphabet())?;
    if sys.sync_check(&p)? {
        Ok(Outcome::text("synchronized"))
    } else {
        Ok(Outcome::text("not synchronized").with_code(1))
    }
}

fn status_name(status: PropertyAStatus) -> &'static str {
    match status {
        PropertyAStatus::HoldsUniformSupport => "holds-uniform-support",
        PropertyAStatus::HoldsSingleton => "holds-singleton",
        PropertyAStatus::NoCounterexampleUpToBounds => "no-counterexample-up-to-bounds",
        PropertyAStatus::Counterexample => "counterexample",
        PropertyAStatus::Unknown => "unknown",
    }
}

fn describe_verdict(set: &SubstitutionSet, verdict: &PropertyAVerdict) -> String {
    let mut text = status_name(verdict.status).to_string();
    if let Some(w) = &verdict.witness {
        let alphabet = set.alphabet();
        text.push_str(&format!(
            "\npattern (block at {}, {}):\n{}",
            w.placement.0,
            w.placement.1,
            alphabet.format_pattern(&w.pattern)
        ));
        for (t, l) in w.chain.iter().enumerate() {
            text.push_str(&format!("\nl_{t}:\n{}", alphabet.format_pattern(l)));
            if let Some(step) = w.steps.get(t) {
                text.push_str(&format!(
                    "\nstep {t}:\n{}",
                    set.format_substitution_pattern(step)
                ));
            }
        }
    }
    text
}

fn check_propa(a: PropaArgs) -> Result<Outcome> {
    let System { set, .. } = load_system(&a.system.system)?;
    let sufficient = sadic::sufficient_property_a(&set);
    let verdict = if sufficient.holds() && !a.bounded {
        sufficient
    } else {
        bounded_property_a(&set, a.level, a.depth, a.budget)?
    };
    let code = i32::from(verdict.status == PropertyAStatus::Counterexample);
    Ok(Outcome::text(describe_verdict(&set, &verdict)).with_code(code))
}

fn render_cmd(a: RenderArgs) -> Result<Outcome> {
    let System { set, .. } = load_system(&a.system.system)?;
    let p = load_pattern(&a.pattern, set.alphabet())?;
    emit_pattern(&set, &p, &a.output)
}
