//! Command implementations behind the `exmaj` binary.
//!
//! Each command returns a [`Report`]: line-oriented `key: value` text plus the process exit
//! code (0 affirmative, 1 definite negative, 2 usage, parse or resource error).

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use exmaj_core::congruence::{DEFAULT_LATTICE_CAP, ORACLE_MAX_SIZE};
use exmaj_core::subpower::DEFAULT_CAP;
use exmaj_core::{
    all_congruences_bruteforce, check_distributive, check_exact_majority, check_gumm_identities,
    check_m_majority, check_maltsev_identities, check_modular, check_permutable,
    congruence_lattice, derive_collapse, derive_gumm, derive_maltsev, derive_near_unanimity,
    derive_nu_from_nonexact, find_exact_majority_term, format_algebra, gallery, load_algebra,
    parse_term, FiniteAlgebra, MajorityVerdict, SearchOptions, SearchOutcome, Term,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "exmaj",
    version,
    about = "Exact-majority terms on finite algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the algebra has an n-ary exact-m-majority term.
    Find {
        /// Algebra file, or a gallery name such as `z_mod:2`.
        algebra: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Print the witness term and re-check it.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_closure: usize,
        /// Keep coordinates whose generator column and target coincide.
        #[arg(long)]
        no_dedup: bool,
    },
    /// Check that a term is an exact (or non-exact) m-majority term.
    Verify {
        algebra: String,
        #[arg(long)]
        term: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        nonexact: bool,
    },
    /// Derive terms from an exact-majority term and check the resulting identities.
    Derive {
        algebra: String,
        #[arg(long)]
        term: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// One of maltsev, collapse=K, nu, nu-nonexact, gumm.
        #[arg(long)]
        rule: String,
    },
    /// Compute the congruence lattice and check permutability, modularity, distributivity.
    Con {
        algebra: String,
        #[arg(long, value_enum, default_value_t = Property::All)]
        check: Property,
        /// Skip the brute-force cross-check (required above size 6).
        #[arg(long)]
        no_oracle: bool,
    },
    /// Print a built-in algebra in file format.
    Gallery { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Perm,
    Mod,
    Dist,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub code: i32,
    /// Diagnostics rather than a report; the binary writes these to standard error.
    pub to_stderr: bool,
}

impl Report {
    fn new(text: String, code: i32) -> Report {
        Report {
            text,
            code,
            to_stderr: false,
        }
    }

    fn diagnostic(text: String, code: i32) -> Report {
        Report {
            text,
            code,
            to_stderr: true,
        }
    }
}

/// A file path if one exists, otherwise a gallery name.
pub fn resolve_algebra(arg: &str) -> Result<FiniteAlgebra> {
    let path = Path::new(arg);
    if path.is_file() {
        return load_algebra(path).with_context(|| format!("cannot load `{arg}`"));
    }
    gallery(arg)
        .map_err(|e| anyhow!("`{arg}` is neither a readable file nor a gallery algebra: {e}"))
}

fn parse_term_arg(text: &str) -> Result<Term> {
    parse_term(text).map_err(|e| anyhow!("cannot parse term `{text}`: {e}"))
}

fn verdict_line(v: &MajorityVerdict) -> String {
    match v {
        MajorityVerdict::Pass => "pass".to_string(),
        MajorityVerdict::Fail(cx) => format!("FAIL {cx}"),
    }
}

pub fn cmd_find(
    alg: &FiniteAlgebra,
    n: usize,
    m: usize,
    witness: bool,
    opts: SearchOptions,
) -> Result<Report> {
    let outcome = find_exact_majority_term(alg, n, m, opts)?;
    let mut out = String::new();
    writeln!(out, "algebra: {}", alg.name())?;
    writeln!(out, "n: {n}")?;
    writeln!(out, "m: {m}")?;
    writeln!(out, "result: {}", outcome.label())?;
    let code = match &outcome {
        SearchOutcome::Found {
            term,
            closure_size,
            coordinates,
        } => {
            writeln!(out, "coordinates: {coordinates}")?;
            writeln!(out, "closure: {closure_size}")?;
            if witness {
                writeln!(out, "witness: {term}")?;
                let v = check_exact_majority(alg, term, n, m)?;
                writeln!(out, "recheck: {}", verdict_line(&v))?;
                if !v.passed() {
                    return Ok(Report::new(out, EXIT_ERROR));
                }
            }
            EXIT_OK
        }
        SearchOutcome::NotFound {
            closure_size,
            coordinates,
        } => {
            writeln!(out, "coordinates: {coordinates}")?;
            writeln!(out, "closure: {closure_size}")?;
            EXIT_NEGATIVE
        }
        SearchOutcome::TrivialOnly(cert) => {
            writeln!(out, "certificate: {cert}")?;
            EXIT_NEGATIVE
        }
        SearchOutcome::Overflow { cap } => {
            writeln!(out, "cap: {cap}")?;
            EXIT_ERROR
        }
    };
    Ok(Report::new(out, code))
}

pub fn cmd_verify(
    alg: &FiniteAlgebra,
    term: &Term,
    n: usize,
    m: usize,
    nonexact: bool,
) -> Result<Report> {
    let v = if nonexact {
        check_m_majority(alg, term, n, m)?
    } else {
        check_exact_majority(alg, term, n, m)?
    };
    let mut out = String::new();
    writeln!(out, "algebra: {}", alg.name())?;
    writeln!(
        out,
        "check: {}({n},{m})",
        if nonexact { "majority" } else { "exact" }
    )?;
    match &v {
        MajorityVerdict::Pass => writeln!(out, "verdict: pass")?,
        MajorityVerdict::Fail(cx) => {
            writeln!(out, "verdict: FAIL")?;
            writeln!(out, "pattern: {{{}}}", join(&cx.pattern))?;
            writeln!(out, "a: {}", cx.a)?;
            writeln!(out, "b: {}", cx.b)?;
            writeln!(out, "got: {}", cx.got)?;
            writeln!(out, "want: {}", cx.want)?;
        }
    }
    Ok(Report::new(
        out,
        if v.passed() { EXIT_OK } else { EXIT_NEGATIVE },
    ))
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Maltsev,
    Collapse(usize),
    Nu,
    NuNonexact,
    Gumm,
}

impl std::str::FromStr for Rule {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Rule> {
        Ok(match s {
            "maltsev" => Rule::Maltsev,
            "nu" => Rule::Nu,
            "nu-nonexact" => Rule::NuNonexact,
            "gumm" => Rule::Gumm,
            _ => match s.strip_prefix("collapse=") {
                Some(k) => Rule::Collapse(
                    k.parse()
                        .with_context(|| format!("bad collapse factor `{k}`"))?,
                ),
                None => bail!(
                    "unknown rule `{s}` (expected maltsev, collapse=K, nu, nu-nonexact or gumm)"
                ),
            },
        })
    }
}

pub fn cmd_derive(alg: &FiniteAlgebra, u: &Term, n: usize, m: usize, rule: Rule) -> Result<Report> {
    let mut out = String::new();
    writeln!(out, "algebra: {}", alg.name())?;
    let input = if rule == Rule::NuNonexact {
        writeln!(out, "input: majority({n},{m})")?;
        check_m_majority(alg, u, n, m)?
    } else {
        writeln!(out, "input: exact({n},{m})")?;
        check_exact_majority(alg, u, n, m)?
    };
    writeln!(out, "input-check: {}", verdict_line(&input))?;
    if !input.passed() {
        return Ok(Report::new(out, EXIT_NEGATIVE));
    }
    let passed = match rule {
        Rule::Maltsev => {
            let t = derive_maltsev(u, n, m)?;
            writeln!(out, "t: {t}")?;
            let v = check_maltsev_identities(alg, &t)?;
            writeln!(out, "maltsev: {v}")?;
            v.passed()
        }
        Rule::Collapse(k) => {
            let t = derive_collapse(u, n, m, k)?;
            writeln!(out, "t: {t}")?;
            let v = check_exact_majority(alg, &t, n / k, m / k)?;
            writeln!(out, "exact({},{}): {}", n / k, m / k, verdict_line(&v))?;
            v.passed()
        }
        Rule::Nu => {
            let (t, arity) = derive_near_unanimity(u, n, m)?;
            writeln!(out, "t: {t}")?;
            let v = check_m_majority(alg, &t, arity, arity - 1)?;
            writeln!(out, "nu({arity}): {}", verdict_line(&v))?;
            v.passed()
        }
        Rule::NuNonexact => {
            let t = derive_nu_from_nonexact(alg, u, n, m)?;
            writeln!(out, "t: {t}")?;
            let v = check_m_majority(alg, &t, m + 1, m)?;
            writeln!(out, "nu({}): {}", m + 1, verdict_line(&v))?;
            v.passed()
        }
        Rule::Gumm => {
            let g = derive_gumm(u, n, m)?;
            writeln!(out, "k: {}", g.k)?;
            writeln!(out, "h: {}", g.h)?;
            writeln!(out, "ell: {}", g.ell)?;
            for (i, d) in g.d.iter().enumerate() {
                writeln!(out, "d{}: {d}", i + 1)?;
            }
            writeln!(out, "q: {}", g.q)?;
            let v = check_gumm_identities(alg, &g)?;
            writeln!(out, "gumm-identities: {v}")?;
            v.passed()
        }
    };
    Ok(Report::new(
        out,
        if passed { EXIT_OK } else { EXIT_NEGATIVE },
    ))
}

pub fn cmd_con(alg: &FiniteAlgebra, check: Property, no_oracle: bool) -> Result<Report> {
    if !no_oracle && alg.size() > ORACLE_MAX_SIZE {
        bail!(
            "size {} exceeds the brute-force oracle bound {ORACLE_MAX_SIZE}; pass --no-oracle",
            alg.size()
        );
    }
    let lattice = congruence_lattice(alg, DEFAULT_LATTICE_CAP)?;
    let mut out = String::new();
    writeln!(out, "algebra: {}", alg.name())?;
    writeln!(out, "congruences: {}", lattice.len())?;
    if !no_oracle {
        let oracle = all_congruences_bruteforce(alg)?;
        if oracle.as_slice() != lattice.congruences() {
            writeln!(
                out,
                "oracle: MISMATCH ({} brute-force congruences)",
                oracle.len()
            )?;
            return Ok(Report::new(out, EXIT_ERROR));
        }
        writeln!(out, "oracle: agree")?;
    }
    let mut all = true;
    if matches!(check, Property::Perm | Property::All) {
        let v = check_permutable(&lattice);
        all &= v.passed();
        writeln!(
            out,
            "permutable: {}",
            if v.passed() {
                "pass".into()
            } else {
                format!("FAIL {v}")
            }
        )?;
    }
    if matches!(check, Property::Mod | Property::All) {
        let v = check_modular(&lattice);
        all &= v.passed();
        writeln!(
            out,
            "modular: {}",
            if v.passed() {
                "pass".into()
            } else {
                format!("FAIL {v}")
            }
        )?;
    }
    if matches!(check, Property::Dist | Property::All) {
        let v = check_distributive(&lattice);
        all &= v.passed();
        writeln!(
            out,
            "distributive: {}",
            if v.passed() {
                "pass".into()
            } else {
                format!("FAIL {v}")
            }
        )?;
    }
    Ok(Report::new(out, if all { EXIT_OK } else { EXIT_NEGATIVE }))
}

pub fn cmd_gallery(name: &str) -> Result<Report> {
    let alg = gallery(name)?;
    Ok(Report::new(format_algebra(&alg), EXIT_OK))
}

/// Runs one parsed command line; errors are returned, not turned into reports.
pub fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Find {
            algebra,
            n,
            m,
            witness,
            max_closure,
            no_dedup,
        } => {
            let alg = resolve_algebra(&algebra)?;
            let opts = SearchOptions {
                cap: max_closure,
                dedup: !no_dedup,
            };
            cmd_find(&alg, n, m, witness, opts)
        }
        Command::Verify {
            algebra,
            term,
            n,
            m,
            nonexact,
        } => {
            let alg = resolve_algebra(&algebra)?;
            cmd_verify(&alg, &parse_term_arg(&term)?, n, m, nonexact)
        }
        Command::Derive {
            algebra,
            term,
            n,
            m,
            rule,
        } => {
            let rule: Rule = rule.parse()?;
            let alg = resolve_algebra(&algebra)?;
            cmd_derive(&alg, &parse_term_arg(&term)?, n, m, rule)
        }
        Command::Con {
            algebra,
            check,
            no_oracle,
        } => cmd_con(&resolve_algebra(&algebra)?, check, no_oracle),
        Command::Gallery { name } => cmd_gallery(&name),
    }
}

/// Parses `args` (program name first) and runs; usage and runtime errors become exit code 2.
pub fn run_args<I, S>(args: I) -> Report
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                Report::diagnostic(e.to_string(), EXIT_ERROR)
            } else {
                Report::new(e.to_string(), EXIT_OK)
            };
        }
    };
    match run(cli) {
        Ok(report) => report,
        Err(e) => Report::diagnostic(format!("error: {e:#}\n"), EXIT_ERROR),
    }
}
