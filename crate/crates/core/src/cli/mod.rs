//! The `treemono` command line.
//!
//! ```text
//! treemono portrait validate|dot|json FILE
//! treemono model [FILE] [--families s,m:s,m] [--family s,m --role a|b]
//! treemono verify THEOREM [--portrait NAME|FILE] [--families s,m:s,m] [--level N] ...
//! ```
//!
//! `FILE` may be `-` for stdin or the name of a bundled portrait. Exit codes:
//! 0 pass (or not applicable), 1 domain violation, 2 usage or parse error,
//! 3 counterexample, 4 resource cap. `TREEMONO_LEVEL_CAP` sets the level cap.

use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::portrait::{self, disjoint_orbit_family, Portrait, Role};
use crate::verify::{self, ExperimentReport, FamilyParams, ModelGroup, Verdict};
use crate::{limits, Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Resolved process configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub level_cap: usize,
    pub group_level_cap: usize,
    pub seed: u64,
    pub format: Format,
    pub inputs: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            level_cap: limits::DEFAULT_LEVEL_CAP,
            group_level_cap: limits::DEFAULT_GROUP_LEVEL_CAP,
            seed: 0,
            format: Format::Text,
            inputs: Vec::new(),
        }
    }
}

impl Config {
    /// Applies the caps to the process-wide limits.
    pub fn install(&self) {
        limits::set_level_cap(self.level_cap);
        limits::set_group_level_cap(self.group_level_cap);
    }
}

#[derive(Debug, Parser)]
#[command(name = "treemono", version, about = "Wreath recursions and finite-level checks for cubic model groups")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Highest level at which stabilizer chains are built.
    #[arg(long, global = true, default_value_t = limits::DEFAULT_GROUP_LEVEL_CAP)]
    pub group_level_cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check or export a ramification portrait.
    Portrait {
        #[command(subcommand)]
        action: PortraitAction,
    },
    /// Print the model generators of a portrait or family composition.
    Model(ModelArgs),
    /// Run a finite-level check and print its report.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum PortraitAction {
    /// Check that every finite vertex has at most two incoming edges.
    Validate { file: String },
    /// Graphviz export with the DSL embedded.
    Dot { file: String },
    Json { file: String },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Portrait file, `-` or a bundled name.
    pub file: Option<String>,
    /// Two disjoint critical orbits, `s,m` for `a` then for `b`.
    #[arg(long, conflicts_with_all = ["file", "family"])]
    pub families: Option<String>,
    /// A single orbit family `s,m`.
    #[arg(long, conflicts_with = "file")]
    pub family: Option<String>,
    #[arg(long, value_enum, default_value_t = RoleArg::A, requires = "family")]
    pub role: RoleArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RoleArg {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    Invgen,
    Simconj,
    Branch,
    Torsion,
    Filtration,
    ConjugacyOracle,
    ClassNotClosed,
    SelfReplication,
    Forms,
    CommutatorFraming,
    Counterexample,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub theorem: Theorem,
    /// Bundled portrait name or portrait file.
    #[arg(long, default_value = "two-fixed")]
    pub portrait: String,
    /// Use a family composition `s,m:s,m` instead of a portrait.
    #[arg(long)]
    pub families: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub level: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Torsion: exponent of 2.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Torsion: exponent of 3.
    #[arg(long, default_value_t = 1)]
    pub n3: usize,
    /// Filtration: the smaller group, `s,m:s,m`.
    #[arg(long)]
    pub sub: Option<String>,
    /// Filtration: the larger group, `s,m:s,m`.
    #[arg(long)]
    pub sup: Option<String>,
    /// Fill `elapsed_ms` in the report.
    #[arg(long)]
    pub timings: bool,
}

/// Maps a library error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) => EXIT_DOMAIN,
        Error::Resource { .. } => EXIT_RESOURCE,
        Error::Argument(_) | Error::Parse { .. } | Error::Unsupported(_) | Error::Json(_) => EXIT_USAGE,
    }
}

/// A counterexample is exit 3; an unmet hypothesis is not a falsifier.
pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass | Verdict::NotApplicable => EXIT_PASS,
        Verdict::Counterexample => EXIT_COUNTEREXAMPLE,
    }
}

/// Parses `args`, runs the command and returns the exit code. `level_cap_env`
/// is the value of `TREEMONO_LEVEL_CAP`, if set.
pub fn run<I, T>(
    args: I,
    level_cap_env: Option<&str>,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let config = match resolve_config(&cli, level_cap_env) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "treemono: {e}");
            return exit_code(&e);
        }
    };
    config.install();
    match execute(&cli, &config, stdin) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "treemono: {e}");
            exit_code(&e)
        }
    }
}

pub fn resolve_config(cli: &Cli, level_cap_env: Option<&str>) -> Result<Config> {
    let level_cap = match level_cap_env {
        None => limits::DEFAULT_LEVEL_CAP,
        Some(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c >= 1)
            .ok_or_else(|| Error::Argument(format!("{} must be a positive integer, got {v:?}", limits::LEVEL_CAP_ENV)))?,
    };
    if cli.group_level_cap == 0 {
        return Err(Error::arg("--group-level-cap must be at least 1"));
    }
    let inputs = match &cli.command {
        Command::Portrait { action } => match action {
            PortraitAction::Validate { file } | PortraitAction::Dot { file } | PortraitAction::Json { file } => {
                vec![file.clone()]
            }
        },
        Command::Model(m) => m.file.iter().cloned().collect(),
        Command::Verify(v) => vec![v.portrait.clone()],
    };
    Ok(Config {
        level_cap,
        group_level_cap: cli.group_level_cap,
        seed: cli.seed,
        format: cli.format,
        inputs,
    })
}

fn execute(cli: &Cli, config: &Config, stdin: &mut dyn Read) -> Result<(String, i32)> {
    match &cli.command {
        Command::Portrait { action } => cmd_portrait(action, config.format, stdin),
        Command::Model(args) => cmd_model(args, config.format, stdin),
        Command::Verify(args) => cmd_verify(args, config, stdin),
    }
}

/// Reads a portrait from a bundled name, `-` (stdin) or a path. DSL, the
/// exported JSON and the exported DOT are all accepted.
pub fn load_portrait(source: &str, stdin: &mut dyn Read) -> Result<Portrait> {
    if let Some(p) = portrait::builtin(source) {
        return Ok(p);
    }
    let text = if source == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| Error::Argument(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(source).map_err(|e| Error::Argument(format!("reading {source}: {e}")))?
    };
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        Portrait::from_json(&serde_json::from_str(trimmed)?)
    } else if trimmed.starts_with("digraph") {
        Portrait::from_dot_meta(&text)
    } else {
        Portrait::parse(&text)
    }
}

fn cmd_portrait(action: &PortraitAction, format: Format, stdin: &mut dyn Read) -> Result<(String, i32)> {
    match action {
        PortraitAction::Validate { file } => {
            let report = load_portrait(file, stdin)?.validate_y();
            let code = if report.valid { EXIT_PASS } else { EXIT_DOMAIN };
            let text = match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
                Format::Text if report.valid => "valid\n".to_string(),
                Format::Text => {
                    let mut s = String::from("invalid\n");
                    for (v, k) in &report.violators {
                        s.push_str(&format!("  {v}: {k} incoming edges\n"));
                    }
                    s
                }
            };
            Ok((text, code))
        }
        PortraitAction::Dot { file } => Ok((load_portrait(file, stdin)?.export_dot(), EXIT_PASS)),
        PortraitAction::Json { file } => {
            let p = load_portrait(file, stdin)?;
            Ok((format!("{}\n", serde_json::to_string_pretty(&p.to_json())?), EXIT_PASS))
        }
    }
}

fn cmd_model(args: &ModelArgs, format: Format, stdin: &mut dyn Read) -> Result<(String, i32)> {
    if let Some(f) = &args.family {
        let fp = FamilyParams::parse(f)?;
        let role = match args.role {
            RoleArg::A => Role::A,
            RoleArg::B => Role::B,
        };
        let machine = disjoint_orbit_family(fp.s, fp.m, role)?.machine()?;
        let text = match format {
            Format::Text => format!("{}\n", machine.listing()),
            Format::Json => format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "listing": machine.listing(),
                    "machine": machine.to_json(),
                    "role": role,
                }))?
            ),
        };
        return Ok((text, EXIT_PASS));
    }
    let group = match (&args.families, &args.file) {
        (Some(f), _) => family_group(f)?,
        (None, Some(file)) => ModelGroup::from_portrait(&portrait_with_y(file, stdin)?)?,
        (None, None) => return Err(Error::arg("model needs a portrait file, --families or --family")),
    };
    let gens = group.gens();
    let roles: Vec<String> = gens
        .labels
        .iter()
        .map(|(v, s)| format!("{v}:{}", gens.machine.state(*s).name))
        .collect();
    let text = match format {
        Format::Text if roles.is_empty() => format!("{}\n", gens.listing()),
        Format::Text => format!("{}\nroles: {}\n", gens.listing(), roles.join(" ")),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "listing": gens.listing(),
                "machine": gens.machine.to_json(),
                "r": gens.r(),
                "roles": gens.labels.iter().map(|(v, s)| json!({
                    "vertex": v,
                    "state": gens.machine.state(*s).name,
                })).collect::<Vec<_>>(),
            }))?
        ),
    };
    Ok((text, EXIT_PASS))
}

/// Loads a portrait and turns a failed Y check into a domain error that
/// names the violating vertices.
fn portrait_with_y(source: &str, stdin: &mut dyn Read) -> Result<Portrait> {
    let p = load_portrait(source, stdin)?;
    let report = p.validate_y();
    if !report.valid {
        let names: Vec<String> = report.violators.iter().map(|(v, k)| format!("{v} ({k} incoming)")).collect();
        return Err(Error::Precondition(format!("not a Y-portrait: {}", names.join(", "))));
    }
    Ok(p)
}

fn family_group(text: &str) -> Result<ModelGroup> {
    let [fa, fb] = FamilyParams::parse_pair(text)?;
    ModelGroup::from_families((fa.s, fa.m), (fb.s, fb.m))
}

fn cmd_verify(args: &VerifyArgs, config: &Config, stdin: &mut dyn Read) -> Result<(String, i32)> {
    let seed = config.seed;
    let n = args.level;
    let mut group = || -> Result<ModelGroup> {
        match &args.families {
            Some(f) => family_group(f),
            None => ModelGroup::from_portrait(&portrait_with_y(&args.portrait, stdin)?),
        }
    };
    let start = Instant::now();
    let mut report = match args.theorem {
        Theorem::Invgen => verify::check_invariable_generation(&group()?, n, args.trials, seed)?,
        Theorem::Simconj => verify::check_simultaneous_conjugation(&group()?, n, args.trials, seed)?,
        Theorem::Branch => verify::check_branch(&group()?, n)?,
        Theorem::Torsion => verify::check_torsion(&group()?, args.m, args.n3)?,
        Theorem::Filtration => {
            let sub = args.sub.as_deref().ok_or_else(|| Error::arg("filtration needs --sub"))?;
            let sup = args.sup.as_deref().ok_or_else(|| Error::arg("filtration needs --sup"))?;
            verify::check_filtration(FamilyParams::parse_pair(sub)?, FamilyParams::parse_pair(sup)?, n)?
        }
        Theorem::ConjugacyOracle => verify::check_conjugacy_oracle(n, args.trials, seed)?,
        Theorem::ClassNotClosed => verify::check_class_not_closed(&group()?, n, seed)?,
        Theorem::SelfReplication => verify::check_self_replication(&group()?, n)?,
        Theorem::Forms => verify::check_forms(&group()?, n)?,
        Theorem::CommutatorFraming => verify::check_commutator_framing(&group()?, n, args.trials, seed)?,
        Theorem::Counterexample => counterexample_report(&group()?, n)?,
    };
    if args.timings {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    let code = verdict_exit_code(report.verdict);
    let text = match config.format {
        Format::Json => format!("{}\n", report.to_json()?),
        Format::Text => report.to_text(),
    };
    Ok((text, code))
}

/// `⟨a, b^{ba}⟩` must be a proper subgroup at every level `1..=n`: the
/// conjugated generating set does not generate.
fn counterexample_report(g: &ModelGroup, n: usize) -> Result<ExperimentReport> {
    let mut levels = Vec::with_capacity(n);
    for k in 1..=n {
        let sub = verify::example_counterexample_order(g, k)?;
        let full = g.level_group(k)?.order();
        let proper = sub < full;
        levels.push(verify::LevelReport::new(
            k,
            vec![verify::TrialOutcome::new(
                Verdict::from_bool(proper),
                Some(json!({ "subgroup_order": sub.to_string(), "group_order": full.to_string() })),
            )],
        ));
    }
    let params = json!({ "model": g.gens().listing(), "level": n });
    Ok(ExperimentReport::new("counterexample", params, 0, levels))
}
