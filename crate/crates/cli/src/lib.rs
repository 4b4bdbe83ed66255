//! Command-line front end: subcommand definitions and their handlers.
//!
//! Exit codes: 0 on success or a positive answer, 1 on a negative answer or
//! failed validation, 2 on input errors.

pub mod format;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use format::*;
use qorder::build::{build_itov_total_binary, build_total_strict_binary, build_width2, strictify};
use qorder::count::{count_auto, count_bruteforce, count_cedar, count_sp, count_trunk};
use qorder::generate::*;
use qorder::iso::{iso_bruteforce, iso_trunk, iso_up_regular};
use qorder::recognize::*;
use qorder::tqd::{
    qrep_to_clique, tqd_from_clique_term, tqd_from_tree_decomposition, tqd_grid, tqd_validate,
};
use qorder::word::{validate_qrep, QuestionableRepresentation};
use qorder::{Error, FiniteOrder};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "qorder",
    version,
    about = "Finite orders, word representations and decompositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report which order classes a file belongs to
    Check {
        file: PathBuf,
        #[arg(long)]
        class: Option<Class>,
    },
    /// Build or validate word representations
    #[command(subcommand)]
    Qrep(QrepCommand),
    /// Count linear extensions
    Count {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CountMethod::Auto)]
        method: CountMethod,
    },
    /// Decide whether two orders are isomorphic
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = IsoMethod::Auto)]
        method: IsoMethod,
    },
    /// Generate an order or a graph
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Tree-questionable decompositions
    #[command(subcommand)]
    Tqd(TqdCommand),
    /// Clique-width terms
    #[command(subcommand)]
    Clique(CliqueCommand),
}

#[derive(Subcommand, Debug)]
pub enum QrepCommand {
    Build {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = BuildMethod::Auto)]
        method: BuildMethod,
        #[arg(long)]
        strict: bool,
        /// Shuffles the insertion order of the total builder
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    Validate {
        order: PathBuf,
        qrep: PathBuf,
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum TqdCommand {
    Grid {
        p: usize,
        q: usize,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    Validate {
        structure: PathBuf,
        tqd: PathBuf,
        /// Fail pairs that no mapping tells apart instead of reading them as the default type
        #[arg(long)]
        strict: bool,
    },
    FromClique {
        term: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    FromTreedec {
        structure: PathBuf,
        td: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CliqueCommand {
    FromQrep {
        order: PathBuf,
        qrep: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    Eval {
        term: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Class {
    Itov,
    Trunk,
    Sp,
    UpRegular,
    Cedar,
    Obs1Free,
    Obs2Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildMethod {
    Auto,
    Total,
    Itov,
    Width2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Auto,
    Brute,
    Trunk,
    Cedar,
    Sp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IsoMethod {
    Auto,
    UpRegular,
    Trunk,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Chain,
    Antichain,
    Zigzag,
    Tw,
    Pmrh,
    Groups,
    RandomSp,
    RandomItov,
    RandomCedar,
    RandomTrunk,
    Random,
    Grid,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_order(path: &Path) -> Result<FiniteOrder> {
    Ok(parse_order(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?
        .order)
}

fn read_qrep(path: &Path) -> Result<QuestionableRepresentation> {
    parse_qrep(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

/// Library errors that answer the question negatively rather than signal bad input.
fn is_negative(e: &Error) -> bool {
    matches!(
        e,
        Error::NotTotal
            | Error::NotItov
            | Error::NotSeriesParallel(_)
            | Error::NotTrunk
            | Error::NotCedar
            | Error::NotUpRegular
            | Error::Alphabet { .. }
            | Error::DuplicateWord(..)
            | Error::Length { .. }
            | Error::Validation(_)
            | Error::NotCompact(_)
            | Error::InvalidDecomposition(_)
            | Error::Coverage(_)
    )
}

/// Turns a negative library answer into exit code 1 with a message.
fn answer<T>(r: qorder::Result<T>, stdout: &mut dyn Write) -> Result<std::result::Result<T, u8>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if is_negative(&e) => {
            writeln!(stdout, "no: {e}")?;
            Ok(Err(EXIT_NEGATIVE))
        }
        Err(e) => Err(e.into()),
    }
}

fn witness(w: &[usize]) -> String {
    w.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn classify(o: &FiniteOrder, class: Class) -> (bool, String) {
    let free = |p: Pattern| match find_obstruction(o, p) {
        None => (true, String::new()),
        Some(w) => (
            false,
            format!(
                "{} witness {}",
                format!("{p:?}").to_uppercase(),
                witness(&w)
            ),
        ),
    };
    match class {
        Class::Itov => {
            if is_itov_fast(o) {
                (true, String::new())
            } else {
                let (_, why) = free(Pattern::Obs1);
                if why.is_empty() {
                    free(Pattern::Obs2)
                } else {
                    (false, why)
                }
            }
        }
        Class::Trunk => free(Pattern::Obst),
        Class::Sp => match sp_decompose(o) {
            Ok(_) => (true, String::new()),
            Err(Error::NotSeriesParallel(w)) => (false, format!("OBS2 witness {}", witness(&w))),
            Err(e) => (false, e.to_string()),
        },
        Class::UpRegular => (is_up_regular(o), String::new()),
        Class::Cedar => (is_cedar(o), String::new()),
        Class::Obs1Free => free(Pattern::Obs1),
        Class::Obs2Free => free(Pattern::Obs2),
    }
}

fn class_name(c: Class) -> String {
    c.to_possible_value().unwrap().get_name().to_string()
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, what: &str) -> Result<T> {
    let p = params
        .get(i)
        .with_context(|| format!("missing parameter {what}"))?;
    p.parse().ok().with_context(|| format!("bad {what} `{p}`"))
}

fn generate(kind: GenKind, params: &[String], seed: u64) -> Result<String> {
    let n = || param::<usize>(params, 0, "size");
    let order = |o: qorder::Result<FiniteOrder>| -> Result<String> { Ok(print_order(&o?.into())) };
    match kind {
        GenKind::Chain => order(Ok(FiniteOrder::chain(n()?))),
        GenKind::Antichain => order(Ok(FiniteOrder::antichain(n()?))),
        GenKind::Zigzag => order(zigzag(n()?)),
        GenKind::Tw => order(trunk_with_woodpeckers(n()?)),
        GenKind::Pmrh => {
            let i = n()?;
            let names = pmrh_names(i).into_iter().enumerate().collect();
            Ok(print_order(&NamedOrder {
                order: pmrh(i),
                names,
            }))
        }
        GenKind::Groups => order(groups_order(n()?)),
        GenKind::RandomSp => order(random_sp(n()?, seed)),
        GenKind::RandomItov => order(random_itov(n()?, seed)),
        GenKind::RandomCedar => order(random_cedar(n()?, seed)),
        GenKind::RandomTrunk => order(random_trunk(n()?, seed)),
        GenKind::Random => order(random_order(n()?, param(params, 1, "density")?, seed)),
        GenKind::Grid => print_graph(&grid(n()?, param(params, 1, "columns")?)?),
    }
}

/// Runs one command, writing its report to `stdout`, and returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<u8> {
    macro_rules! answer {
        ($e:expr) => {
            match answer($e, stdout)? {
                Ok(v) => v,
                Err(code) => return Ok(code),
            }
        };
    }
    match cli.command {
        Command::Check { file, class } => {
            let o = read_order(&file)?;
            let classes = match class {
                Some(c) => vec![c],
                None => Class::value_variants().to_vec(),
            };
            let mut all = true;
            for c in classes {
                let (yes, why) = classify(&o, c);
                all &= yes;
                let verdict = if yes {
                    "yes".to_string()
                } else if why.is_empty() {
                    "no".into()
                } else {
                    format!("no ({why})")
                };
                writeln!(stdout, "{}: {verdict}", class_name(c))?;
            }
            Ok(if class.is_some() && !all {
                EXIT_NEGATIVE
            } else {
                EXIT_OK
            })
        }
        Command::Qrep(QrepCommand::Build {
            file,
            method,
            strict,
            seed,
            out,
        }) => {
            let o = read_order(&file)?;
            let method = match method {
                BuildMethod::Auto if o.is_total() => BuildMethod::Total,
                BuildMethod::Auto if is_itov_fast(&o) => BuildMethod::Itov,
                BuildMethod::Auto if sp_decompose(&o).is_ok() => BuildMethod::Width2,
                BuildMethod::Auto => {
                    writeln!(stdout, "no: no builder applies to this order")?;
                    return Ok(EXIT_NEGATIVE);
                }
                m => m,
            };
            let mut q = match method {
                BuildMethod::Total => {
                    let ins = match seed {
                        Some(s) => random_permutation(o.len(), s),
                        None => (0..o.len()).collect(),
                    };
                    answer!(build_total_strict_binary(&o, &ins))
                }
                BuildMethod::Itov => answer!(build_itov_total_binary(&o)),
                _ => answer!(build_width2(&o)),
            };
            if strict {
                q = answer!(strictify(&o, &q));
            }
            emit(&out, &print_qrep(&q), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Qrep(QrepCommand::Validate {
            order,
            qrep,
            strict,
        }) => {
            let o = read_order(&order)?;
            let q = read_qrep(&qrep)?;
            let report = answer!(validate_qrep(&o, &q, strict));
            if report.ok {
                writeln!(stdout, "valid")?;
                Ok(EXIT_OK)
            } else {
                let (x, y) = report.offending.unwrap();
                writeln!(stdout, "invalid: elements {x} and {y}: {}", report.detail)?;
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Count { file, method } => {
            let o = read_order(&file)?;
            let c = match method {
                CountMethod::Auto => answer!(count_auto(&o)),
                CountMethod::Brute => answer!(count_bruteforce(&o)),
                CountMethod::Trunk => count_trunk(&answer!(trunk_profile(&o))),
                CountMethod::Cedar => answer!(count_cedar(&o)),
                CountMethod::Sp => answer!(count_sp(&o)),
            };
            writeln!(stdout, "{c}")?;
            Ok(EXIT_OK)
        }
        Command::Iso { a, b, method } => {
            let (a, b) = (read_order(&a)?, read_order(&b)?);
            let method = match method {
                IsoMethod::Auto if is_trunk(&a) && is_trunk(&b) => IsoMethod::Trunk,
                IsoMethod::Auto if is_up_regular(&a) && is_up_regular(&b) => IsoMethod::UpRegular,
                IsoMethod::Auto => IsoMethod::Brute,
                m => m,
            };
            let same = match method {
                IsoMethod::Trunk => {
                    iso_trunk(&answer!(trunk_profile(&a)), &answer!(trunk_profile(&b)))
                }
                IsoMethod::UpRegular => answer!(iso_up_regular(&a, &b)),
                _ => answer!(iso_bruteforce(&a, &b)),
            };
            writeln!(
                stdout,
                "{}",
                if same { "isomorphic" } else { "not isomorphic" }
            )?;
            Ok(if same { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Gen {
            kind,
            params,
            seed,
            out,
        } => {
            emit(&out, &generate(kind, &params, seed)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Tqd(TqdCommand::Grid { p, q, out }) => {
            emit(&out, &print_tqd(&tqd_grid(p, q)?), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Tqd(TqdCommand::Validate {
            structure,
            tqd,
            strict,
        }) => {
            let x = parse_structure(&read(&structure)?)?.adjacency();
            let d =
                parse_tqd(&read(&tqd)?).with_context(|| format!("parsing {}", tqd.display()))?;
            let report = answer!(tqd_validate(&x, &d, strict));
            let (alpha, beta) = d.depths();
            if report.ok {
                writeln!(
                    stdout,
                    "valid: width {}, structural depth {alpha}, logical depth {beta}",
                    d.width()
                )?;
                Ok(EXIT_OK)
            } else {
                match report.offending {
                    Some((u, v)) => {
                        writeln!(stdout, "invalid: elements {u} and {v}: {}", report.detail)?
                    }
                    None => writeln!(stdout, "invalid: {}", report.detail)?,
                }
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Tqd(TqdCommand::FromClique { term, out }) => {
            let t =
                parse_term(&read(&term)?).with_context(|| format!("parsing {}", term.display()))?;
            let x = t.eval()?.0;
            let d = answer!(tqd_from_clique_term(&x, &t));
            emit(&out, &print_tqd(&d), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Tqd(TqdCommand::FromTreedec { structure, td, out }) => {
            let x = parse_structure(&read(&structure)?)?.adjacency();
            let td =
                parse_treedec(&read(&td)?).with_context(|| format!("parsing {}", td.display()))?;
            let d = answer!(tqd_from_tree_decomposition(&x, &td));
            emit(&out, &print_tqd(&d), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Clique(CliqueCommand::FromQrep { order, qrep, out }) => {
            let o = read_order(&order)?;
            let q = read_qrep(&qrep)?;
            let (t, leaves) = answer!(qrep_to_clique(&o, &q));
            let text = format!(
                "# vertex i is element leaves[i]: {}\n{}",
                witness(&leaves),
                print_term(&t)
            );
            emit(&out, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Clique(CliqueCommand::Eval { term, out }) => {
            let t =
                parse_term(&read(&term)?).with_context(|| format!("parsing {}", term.display()))?;
            let x = t.eval()?.0;
            let s =
                Structure::from_adjacency(&x).context("the term mixes order and graph types")?;
            emit(&out, &print_structure(&s), stdout)?;
            Ok(EXIT_OK)
        }
    }
}

pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match run(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_INPUT
        }
    }
}
