//! The `minimalist` command line.
//!
//! Exit status: 0 on success, 1 when nothing is derivable within the bound
//! (or, for `compare`, when some MG string has no MCG proof), 2 on bad
//! input.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use minimalist_core::equivalence::{self, PairedGrammar};
use minimalist_core::mcg::{self, check_proof, MCGrammar, Proved};
use minimalist_core::mg::{self, Recognition};
use minimalist_core::MGrammar;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "minimalist",
    version,
    about = "Minimalist Grammars and Minimalist Categorial Grammars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimalist Grammar lexicons (`phon :: features`)
    #[command(subcommand)]
    Mg(MgCommand),
    /// Minimalist Categorial Grammar lexicons (`phon :: formula`)
    #[command(subcommand)]
    Mcg(McgCommand),
    /// Compare the strings an MG lexicon and its MCG counterpart generate
    Compare {
        file: PathBuf,
        #[arg(long, default_value_t = 10, value_parser = steps)]
        max_steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
        /// Turn off the shortest move condition on the MG side
        #[arg(long)]
        no_smc: bool,
    },
    /// Print the MCG lexicon an MG lexicon translates to
    Translate { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum MgCommand {
    /// Validate a lexicon
    Check { file: PathBuf },
    /// List every accepted string within the bound
    Derive {
        file: PathBuf,
        #[command(flatten)]
        opts: Output,
        #[command(flatten)]
        conditions: Conditions,
    },
    /// Look for a derivation of one sentence
    Recognize {
        file: PathBuf,
        sentence: String,
        #[command(flatten)]
        opts: Output,
        #[command(flatten)]
        conditions: Conditions,
    },
}

#[derive(Subcommand, Debug)]
enum McgCommand {
    /// Validate a lexicon
    Check { file: PathBuf },
    /// List every accepted string within the bound
    Generate {
        file: PathBuf,
        #[command(flatten)]
        opts: Output,
    },
    /// Look for a proof of one sentence
    Prove {
        file: PathBuf,
        sentence: String,
        #[command(flatten)]
        opts: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    /// Bound on merge and move applications
    #[arg(long, default_value_t = 8, value_parser = steps)]
    max_steps: usize,
    #[arg(long, value_enum)]
    render: Option<Render>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct Conditions {
    /// Turn off the shortest move condition
    #[arg(long)]
    no_smc: bool,
    /// Turn on the specifier island condition
    #[arg(long)]
    spic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Render {
    Tree,
    Trace,
    Proof,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn steps(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

/// A failed command: what to print and the exit status.
struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Display) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path) -> Result<T, Failure>
where
    T: std::str::FromStr,
    T::Err: Display,
{
    read(path)?
        .parse()
        .map_err(|e| input_error(format!("{}:{e}", path.display())))
}

fn json_mode(opts: &Output) -> bool {
    opts.format == Format::Json || opts.render == Some(Render::Json)
}

fn check_render(render: Option<Render>, allowed: &[Render], command: &str) -> Result<(), Failure> {
    match render {
        Some(r) if r != Render::Json && !allowed.contains(&r) => Err(input_error(format!(
            "--render {} does not apply to `{command}`",
            r.to_possible_value().expect("value").get_name()
        ))),
        _ => Ok(()),
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut stdout = String::new();
    let mut stderr = String::new();
    let code = match execute(cli.command, &mut stdout, &mut stderr) {
        Ok(code) => code,
        Err(f) => {
            stderr.push_str(&f.message);
            stderr.push('\n');
            f.code
        }
    };
    let _ = out.write_all(stdout.as_bytes());
    let _ = err.write_all(stderr.as_bytes());
    code
}

fn execute(command: Command, out: &mut String, err: &mut String) -> Result<i32, Failure> {
    match command {
        Command::Mg(c) => mg_command(c, out, err),
        Command::Mcg(c) => mcg_command(c, out, err),
        Command::Compare {
            file,
            max_steps,
            report,
            no_smc,
        } => {
            let mut pg: PairedGrammar = load(&file)?;
            if no_smc {
                pg.mg.options.smc = false;
            }
            let r = equivalence::compare(&pg, max_steps);
            match report {
                Format::Text => out.push_str(&r.render()),
                Format::Json => push_json(out, &r),
            }
            Ok(if r.mg_only.is_empty() { 0 } else { 1 })
        }
        Command::Translate { file } => {
            let g: MGrammar = load(&file)?;
            let t = equivalence::translate_lexicon(&g).map_err(|e| input_error(format!("{}: {e}", file.display())))?;
            out.push_str(&t.to_string());
            Ok(0)
        }
    }
}

fn push_json(out: &mut String, v: &impl serde::Serialize) {
    out.push_str(&serde_json::to_string_pretty(v).expect("serializable"));
    out.push('\n');
}

fn warn(err: &mut String, warnings: Vec<String>) {
    for w in warnings {
        err.push_str(&format!("warning: {w}\n"));
    }
}

fn load_mg(file: &Path, conditions: &Conditions, err: &mut String) -> Result<MGrammar, Failure> {
    let mut g: MGrammar = load(file)?;
    if conditions.no_smc {
        g.options.smc = false;
    }
    if conditions.spic {
        g.options.spic = true;
    }
    warn(err, g.warnings());
    Ok(g)
}

fn mg_command(c: MgCommand, out: &mut String, err: &mut String) -> Result<i32, Failure> {
    match c {
        MgCommand::Check { file } => {
            let g: MGrammar = load(&file)?;
            warn(err, g.warnings());
            out.push_str(&format!("ok: {} items, accepting `{}`\n", g.lexicon.len(), g.accepting));
            Ok(0)
        }
        MgCommand::Derive { file, opts, conditions } => {
            check_render(opts.render, &[Render::Tree, Render::Trace], "mg derive")?;
            let g = load_mg(&file, &conditions, err)?;
            let ds = mg::derive(&g, opts.max_steps);
            if json_mode(&opts) {
                push_json(out, &json!({ "max_steps": ds.max_steps, "accepted": ds.accepted }));
            } else {
                match opts.render {
                    None => {
                        for s in ds.strings() {
                            out.push_str(&format!("{s}\n"));
                        }
                    }
                    Some(r) => {
                        for (i, a) in ds.accepted.iter().enumerate() {
                            if i > 0 {
                                out.push('\n');
                            }
                            out.push_str(&format!("# {} ({} steps)\n", a.string, a.steps));
                            if r == Render::Tree {
                                out.push_str(&format!("{}\n", a.tree));
                            } else {
                                out.push_str(&a.trace.render());
                            }
                        }
                    }
                }
            }
            if ds.accepted.is_empty() {
                err.push_str(&format!("no derivation within {} steps\n", opts.max_steps));
                return Ok(1);
            }
            Ok(0)
        }
        MgCommand::Recognize {
            file,
            sentence,
            opts,
            conditions,
        } => {
            check_render(opts.render, &[Render::Tree, Render::Trace], "mg recognize")?;
            let g = load_mg(&file, &conditions, err)?;
            match mg::recognize(&g, &sentence, opts.max_steps) {
                Recognition::Derived(a) => {
                    if json_mode(&opts) {
                        push_json(out, &a);
                    } else if opts.render == Some(Render::Tree) {
                        out.push_str(&format!("{}\n", a.tree));
                    } else {
                        out.push_str(&a.trace.render());
                    }
                    Ok(0)
                }
                Recognition::NoDerivation { closest } | Recognition::BoundExhausted { closest } if json_mode(&opts) => {
                    let closest: Vec<String> = closest.iter().map(|c| c.tree.to_string()).collect();
                    push_json(out, &json!({ "derived": false, "closest": closest }));
                    Ok(1)
                }
                Recognition::NoDerivation { closest } => {
                    err.push_str(&format!("`{sentence}` is not derivable (the search saturated)\n"));
                    closest_lines(err, closest.iter().map(|c| c.tree.to_string()));
                    Ok(1)
                }
                Recognition::BoundExhausted { closest } => {
                    err.push_str(&format!(
                        "`{sentence}` is not derivable within {} steps\n",
                        opts.max_steps
                    ));
                    closest_lines(err, closest.iter().map(|c| c.tree.to_string()));
                    Ok(1)
                }
            }
        }
    }
}

fn closest_lines(err: &mut String, trees: impl Iterator<Item = String>) {
    for t in trees {
        err.push_str(&format!("  closest: {t}\n"));
    }
}

fn load_mcg(file: &Path, err: &mut String) -> Result<MCGrammar, Failure> {
    let g: MCGrammar = load(file)?;
    warn(err, g.warnings());
    Ok(g)
}

fn mcg_command(c: McgCommand, out: &mut String, err: &mut String) -> Result<i32, Failure> {
    match c {
        McgCommand::Check { file } => {
            let g = load_mcg(&file, err)?;
            let join = |s: &std::collections::BTreeSet<String>| {
                if s.is_empty() {
                    "(none)".to_string()
                } else {
                    s.iter().cloned().collect::<Vec<_>>().join(" ")
                }
            };
            out.push_str(&format!(
                "ok: {} items, accepting `{}`, p1: {}, p2: {}\n",
                g.lexicon.len(),
                g.accepting,
                join(&g.partition.p1),
                join(&g.partition.p2)
            ));
            Ok(0)
        }
        McgCommand::Generate { file, opts } => {
            check_render(opts.render, &[Render::Proof], "mcg generate")?;
            let g = load_mcg(&file, err)?;
            let gen = mcg::generate(&g, opts.max_steps);
            if json_mode(&opts) {
                push_json(out, &gen);
            } else if opts.render == Some(Render::Proof) {
                for (i, a) in gen.accepted.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&format!("# {} ({} steps)\n", a.string, a.steps));
                    out.push_str(&a.proof.render());
                }
            } else {
                for s in gen.strings() {
                    out.push_str(&format!("{s}\n"));
                }
            }
            if gen.accepted.is_empty() {
                err.push_str(&format!("no proof within {} steps\n", opts.max_steps));
                return Ok(1);
            }
            Ok(0)
        }
        McgCommand::Prove { file, sentence, opts } => {
            check_render(opts.render, &[Render::Proof], "mcg prove")?;
            let g = load_mcg(&file, err)?;
            match mcg::prove(&g, &sentence, opts.max_steps) {
                Proved::Derived(a) => {
                    let report = check_proof(&a.proof, &g).map_err(|e| Failure {
                        code: 1,
                        message: format!("internal proof check failed: {e}"),
                    })?;
                    if json_mode(&opts) {
                        push_json(out, &json!({ "proof": a.proof, "check": report }));
                    } else {
                        out.push_str(&a.proof.render());
                    }
                    Ok(0)
                }
                Proved::NotFound { max_steps } => {
                    if json_mode(&opts) {
                        push_json(out, &json!({ "derived": false }));
                    }
                    err.push_str(&format!("`{sentence}` has no proof within {max_steps} steps\n"));
                    Ok(1)
                }
            }
        }
    }
}
