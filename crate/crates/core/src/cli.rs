//! The `relkit` command line.
//!
//! Exit codes: 0 on success, 1 when a check finds a mismatch, 2 on usage,
//! parse or capacity errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formalism::{Formalism, Limits, Object};
use crate::sample::{sample_equal, RelationSample};
use crate::symbol::Symbol;
use crate::transforms::{run_construction, Construction, Homomorphism, RunOptions};
use crate::word::Word;
use crate::wordset::Viewpoint;
use crate::zoo::{zoo_check, zoo_emit, zoo_entry, zoo_list, zoo_sample};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "relkit", version, about = "Two-tape and unfolded word relations: enumerate, convert, compare")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum View {
    TwoTape,
    Unfolded,
}

impl From<View> for Viewpoint {
    fn from(v: View) -> Viewpoint {
        match v {
            View::TwoTape => Viewpoint::TwoTape,
            View::Unfolded => Viewpoint::Unfolded,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Largest component length considered.
    #[arg(long, default_value_t = 6)]
    bound: usize,
    /// Caps derivation depth, table applications and ε-runs.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl Common {
    fn limits(&self) -> Limits {
        match self.steps {
            Some(n) => Limits { depth: n, apps: n, steps: n },
            None => Limits::for_bound(self.bound),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct Input {
    file: PathBuf,
    /// Overrides the formalism implied by the file extension.
    #[arg(long)]
    formalism: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a file and describe it.
    Validate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the words of a file's language within the bound.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        viewpoint: Option<View>,
    },
    /// Print the relation sample of a file.
    Sample {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        viewpoint: Option<View>,
    },
    /// Test whether (U, V) lies in the relation.
    Member {
        #[command(flatten)]
        input: Input,
        u: String,
        v: String,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum)]
        viewpoint: Option<View>,
    },
    /// Apply a construction and check it against its input.
    Convert {
        construction: String,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        emit: Emit,
        /// Homomorphism images as `a=word`; repeatable.
        #[arg(long = "map")]
        maps: Vec<String>,
    },
    /// Word-problem grammar for the monoid presented by a file.
    Wp {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        emit: Emit,
        #[arg(long, value_enum, default_value_t = View::TwoTape)]
        viewpoint: View,
    },
    /// Compare the relations of two files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        viewpoint: Option<View>,
    },
    /// The catalogue of known relations.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
}

#[derive(Args, Debug, Clone)]
struct Emit {
    /// Write the output object here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Emit the output even when it was not checked or failed the check.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Subcommand, Debug)]
enum ZooAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Sample {
        name: String,
        #[command(flatten)]
        common: Common,
    },
    Check {
        name: String,
        /// Defaults to the entry's own check bound.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Emit {
        name: String,
        representation: String,
    },
}

/// Runs the command line `args` (program name first).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Invalid(e.to_string()))?;
    writeln!(out, "{text}").map_err(io)
}

fn load(path: &Path, formalism: Option<&str>) -> Result<Object> {
    let kind = match formalism {
        Some(f) => f.parse()?,
        None => Formalism::from_path(path).ok_or_else(|| Error::Invalid(format!("cannot infer a formalism from `{}`; pass --formalism", path.display())))?,
    };
    let src = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Object::parse(kind, &src)
}

fn load_input(input: &Input) -> Result<Object> {
    load(&input.file, input.formalism.as_deref())
}

/// The relation of `obj`, read through `view` when given.
fn relation(obj: &Object, bound: usize, limits: Limits, view: Option<View>) -> Result<(RelationSample, bool)> {
    obj.sample_as(view.map_or(obj.viewpoint(), Viewpoint::from), bound, limits)
}

fn parse_map(maps: &[String]) -> Result<Option<Homomorphism>> {
    if maps.is_empty() {
        return Ok(None);
    }
    let mut h = Homomorphism::new();
    for m in maps {
        let (a, w) = m.split_once('=').ok_or_else(|| Error::Invalid(format!("expected `symbol=word`, got `{m}`")))?;
        h.insert(Symbol::new(a.trim()), Word::parse(w));
    }
    Ok(Some(h))
}

#[derive(Serialize)]
struct Description {
    formalism: String,
    viewpoint: String,
    alphabet: Vec<String>,
}

#[derive(Serialize)]
struct Words {
    viewpoint: String,
    bound: usize,
    complete: bool,
    words: Vec<String>,
}

#[derive(Serialize)]
struct ZooRow {
    name: String,
    description: String,
    check_bound: usize,
    representations: Vec<String>,
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { input, format } => {
            let obj = load_input(&input)?;
            let d = Description {
                formalism: obj.formalism().to_string(),
                viewpoint: obj.viewpoint().to_string(),
                alphabet: obj.alphabet().symbols().iter().map(|s| s.to_string()).collect(),
            };
            match format {
                Format::Structured => json(out, &d)?,
                Format::Text => writeln!(out, "{}: {} over {{{}}} ({} view)", input.file.display(), d.formalism, d.alphabet.join(", "), d.viewpoint).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { input, common, viewpoint } => {
            let obj = load_input(&input)?;
            let view = viewpoint.map(Viewpoint::from).unwrap_or_else(|| obj.viewpoint());
            let set = obj.enumerate(view.budget(common.bound), common.limits())?;
            let w = Words { viewpoint: view.to_string(), bound: common.bound, complete: set.complete, words: set.strings() };
            match common.format {
                Format::Structured => json(out, &w)?,
                Format::Text => {
                    for s in &w.words {
                        writeln!(out, "{}", if s.is_empty() { "ε" } else { s }).map_err(io)?;
                    }
                    if !w.complete {
                        writeln!(out, "# limits reached; the list may be partial").map_err(io)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Sample { input, common, viewpoint } => {
            let obj = load_input(&input)?;
            let (s, complete) = relation(&obj, common.bound, common.limits(), viewpoint)?;
            write_sample(out, &s, complete, common.format)?;
            Ok(EXIT_OK)
        }
        Command::Member { input, u, v, steps, viewpoint } => {
            let obj = load_input(&input)?;
            let (u, v) = (Word::parse(&u), Word::parse(&v));
            let bound = u.len().max(v.len());
            let limits = steps.map_or(Limits::for_bound(bound), |n| Limits { depth: n, apps: n, steps: n });
            let (s, complete) = relation(&obj, bound, limits, viewpoint)?;
            let member = s.contains(&u, &v);
            let verdict = match (member, complete) {
                (true, _) => "member",
                (false, true) => "not a member",
                (false, false) => "not found within the step limits",
            };
            writeln!(out, "{verdict}").map_err(io)?;
            Ok(if member { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Convert { construction, input, common, emit, maps } => {
            let c: Construction = construction.parse().map_err(|_| Error::Invalid(format!("unknown construction `{construction}`")))?;
            let obj = load_input(&input)?;
            let opts = RunOptions { bound: common.bound, limits: common.limits(), verify: !emit.no_verify, homomorphism: parse_map(&maps)? };
            convert(c, &obj, &opts, &common, &emit, out)
        }
        Command::Wp { input, common, emit, viewpoint } => {
            let c = match viewpoint {
                View::TwoTape => Construction::WpTwoTape,
                View::Unfolded => Construction::WpUnfolded,
            };
            let obj = load_input(&input)?;
            let opts = RunOptions { bound: common.bound, limits: common.limits(), verify: !emit.no_verify, homomorphism: None };
            convert(c, &obj, &opts, &common, &emit, out)
        }
        Command::Compare { a, b, common, viewpoint } => {
            let (x, y) = (load(&a, None)?, load(&b, None)?);
            let (sa, ca) = relation(&x, common.bound, common.limits(), viewpoint)?;
            let (sb, cb) = relation(&y, common.bound, common.limits(), viewpoint)?;
            let diff = sample_equal(&sa, &sb)?;
            match common.format {
                Format::Structured => json(out, &diff)?,
                Format::Text => {
                    write!(out, "{diff}").map_err(io)?;
                    if diff.equal() {
                        writeln!(out).map_err(io)?;
                    }
                    if !(ca && cb) {
                        writeln!(out, "note: enumeration hit its step limits").map_err(io)?;
                    }
                }
            }
            Ok(if diff.equal() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Zoo { action } => zoo(action, out),
    }
}

fn write_sample(out: &mut dyn Write, s: &RelationSample, complete: bool, format: Format) -> Result<()> {
    match format {
        Format::Structured => json(out, &s.to_structured()),
        Format::Text => {
            out.write_all(s.to_tsv().as_bytes()).map_err(io)?;
            if !complete {
                writeln!(out, "# limits reached; the sample may be partial").map_err(io)?;
            }
            Ok(())
        }
    }
}

fn convert(c: Construction, obj: &Object, opts: &RunOptions, common: &Common, emit: &Emit, out: &mut dyn Write) -> Result<i32> {
    let report = run_construction(c, obj, opts)?;
    match common.format {
        Format::Structured => json(out, &report.to_structured())?,
        Format::Text => write!(out, "{report}").map_err(io)?,
    }
    let ok = report.verified();
    if ok || emit.no_verify {
        let text = report.output.to_string();
        match &emit.output {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                if common.format == Format::Text {
                    writeln!(out, "wrote {}", path.display()).map_err(io)?;
                }
            }
            None if common.format == Format::Text => write!(out, "---\n{text}").map_err(io)?,
            None => {}
        }
    } else if common.format == Format::Text {
        writeln!(out, "output withheld; pass --no-verify to emit it anyway").map_err(io)?;
    }
    Ok(if ok || emit.no_verify { EXIT_OK } else { EXIT_MISMATCH })
}

fn zoo(action: ZooAction, out: &mut dyn Write) -> Result<i32> {
    match action {
        ZooAction::List { format } => {
            let rows: Vec<ZooRow> = zoo_list()
                .into_iter()
                .map(|e| ZooRow {
                    description: e.description.to_string(),
                    check_bound: e.check_bound,
                    representations: e.representations.iter().map(|r| r.label.clone()).collect(),
                    name: e.name,
                })
                .collect();
            match format {
                Format::Structured => json(out, &rows)?,
                Format::Text => {
                    for r in &rows {
                        writeln!(out, "{:<16} {}", r.name, r.description).map_err(io)?;
                        if !r.representations.is_empty() {
                            writeln!(out, "{:<16} representations: {}", "", r.representations.join(", ")).map_err(io)?;
                        }
                    }
                }
            }
            Ok(EXIT_OK)
        }
        ZooAction::Sample { name, common } => {
            let s = zoo_sample(&name, common.bound)?;
            write_sample(out, &s, true, common.format)?;
            Ok(EXIT_OK)
        }
        ZooAction::Check { name, bound, format } => {
            let bound = match bound {
                Some(b) => b,
                None => zoo_entry(&name)?.check_bound,
            };
            let report = zoo_check(&name, bound)?;
            match format {
                Format::Structured => json(out, &report)?,
                Format::Text => write!(out, "{report}").map_err(io)?,
            }
            Ok(if report.verified() { EXIT_OK } else { EXIT_MISMATCH })
        }
        ZooAction::Emit { name, representation } => {
            write!(out, "{}", zoo_emit(&name, &representation)?).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("relkit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn temp(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("relkit-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn zoo_check_kappa() {
        let (code, out, _) = call(&["zoo", "check", "kappa", "--bound", "5"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("verified"));
    }

    #[test]
    fn convert_rev_to_lig() {
        let cfg = temp("rev.cfg", &zoo_emit("rev", "cfg-two-tape").unwrap());
        let lig = cfg.with_extension("lig");
        let (code, out, err) = call(&["convert", "t2u-cfg-lig", cfg.to_str().unwrap(), "--bound", "6", "-o", lig.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{out}{err}");
        assert!(out.contains("verified at bound 6"));
        assert!(load(&lig, None).is_ok());
    }

    #[test]
    fn compare_and_exit_codes() {
        let a = temp("a.etol", &zoo_emit("kappa", "et0l-unfolded").unwrap());
        let b = temp("b.lig", &zoo_emit("kappa", "lig-unfolded").unwrap());
        let (code, out, _) = call(&["compare", a.to_str().unwrap(), b.to_str().unwrap(), "--bound", "4", "--viewpoint", "unfolded"]);
        assert_eq!(code, EXIT_OK, "{out}");
        let c = temp("c.cfg", &zoo_emit("rev", "cfg-two-tape").unwrap());
        let (code, out, _) = call(&["compare", a.to_str().unwrap(), c.to_str().unwrap(), "--bound", "3"]);
        assert_eq!(code, EXIT_MISMATCH);
        assert!(out.contains("only in"));
        assert_eq!(call(&["zoo", "check", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        let bad = temp("bad.cfg", "start S\nS -> \n(");
        assert_eq!(call(&["validate", bad.to_str().unwrap()]).0, EXIT_USAGE);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["zoo", "sample", "rho_g", "--bound", "4", "--format", "structured"];
        let (_, first, _) = call(&args);
        let (_, second, _) = call(&args);
        assert_eq!(first, second);
        assert!(first.contains("\"pairs\""));
    }

    #[test]
    fn member_verb() {
        let f = temp("m.cfg", &zoo_emit("rev", "cfg-two-tape").unwrap());
        assert_eq!(call(&["member", f.to_str().unwrap(), "ab", "ba"]).0, EXIT_OK);
        assert_eq!(call(&["member", f.to_str().unwrap(), "ab", "ab"]).0, EXIT_MISMATCH);
    }
}
