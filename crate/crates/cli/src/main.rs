use std::fmt::Display;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cestrat::harness::{
    catalog, check_all, check_law, render_report, sample_terms, Corpus, CorpusConfig, DEFAULT_SEED,
};
use cestrat::{
    apply_ce, check_well_founded, combine_pce, eq_pce, normalize_pce, parse_signature, parse_strategy,
    parse_term, psi, to_canonical, unify_pce, CeError, ParseError, Pce, Signature, Strategy, Term, Unifier,
};

/// Apply, canonicalize, unify and combine context-embedding strategies.
#[derive(Parser)]
#[command(name = "cestrat", version)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Signature file (`name/arity` declarations). Terms are checked against it.
    #[arg(long, global = true, value_name = "FILE")]
    signature: Option<PathBuf>,
    /// Seed for generated corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Maximum depth of generated terms.
    #[arg(long, global = true, default_value_t = 3)]
    max_depth: usize,
    /// Check the result against Ψ pointwise on generated terms.
    #[arg(long, global = true)]
    check_equiv: bool,
    /// Print results as computed, without normalization.
    #[arg(long, global = true)]
    raw: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a strategy to a term.
    Apply { strategy: PathBuf, term: PathBuf },
    /// Unify two strategies.
    Unify { left: PathBuf, right: PathBuf, term: Option<PathBuf> },
    /// Combine two strategies.
    Combine { left: PathBuf, right: PathBuf, term: Option<PathBuf> },
    /// Print the canonical form of a strategy.
    Canon { strategy: PathBuf },
    /// Print the embedding a strategy computes on a term.
    Psi { strategy: PathBuf, term: PathBuf },
    /// Run a law from the catalog, or `all`.
    Check { law: String },
    /// List the law catalog.
    Laws,
}

enum Failure {
    /// Exit 1: the computation itself failed or a check did not hold.
    Fail(String),
    /// Exit 2: bad input.
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input_error(what: impl Display) -> Failure {
    Failure::Input(what.to_string())
}

struct Session {
    opts: Options,
    signature: Option<Signature>,
    stdin_used: bool,
}

impl Session {
    fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        if path.as_os_str() == "-" {
            if self.stdin_used {
                return Err(input_error("stdin (`-`) can be read only once"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| input_error(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
    }

    fn parse<T>(
        &mut self,
        path: &PathBuf,
        parse: impl Fn(&str) -> Result<T, ParseError>,
    ) -> Result<T, Failure> {
        let src = self.read(path)?;
        parse(&src).map_err(|e| {
            let (line, col) = e.line_col(&src);
            input_error(format!("{}:{line}:{col}: {}", path.display(), e.message))
        })
    }

    fn strategy(&mut self, path: &PathBuf) -> Result<Strategy, Failure> {
        let s = self.parse(path, parse_strategy)?;
        check_well_founded(&s).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        Ok(s)
    }

    fn term(&mut self, path: &PathBuf) -> Result<Term, Failure> {
        let t = self.parse(path, parse_term)?;
        if let Some(sig) = &self.signature {
            sig.check_term(&t).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        }
        Ok(t)
    }

    fn signatures(&self) -> Vec<Signature> {
        match &self.signature {
            Some(sig) => vec![sig.clone()],
            None => vec![Signature::figure(), Signature::abstract_small()],
        }
    }

    fn config(&self) -> CorpusConfig {
        CorpusConfig {
            seed: self.opts.seed,
            max_depth: self.opts.max_depth,
            ..CorpusConfig::default()
        }
    }

    fn show_strategy(&self, s: &Strategy) -> Result<Strategy, Failure> {
        if self.opts.raw {
            Ok(s.clone())
        } else {
            to_canonical(s).map_err(contract)
        }
    }

    fn show_pce(&self, e: &Pce) -> Pce {
        if self.opts.raw {
            e.clone()
        } else {
            normalize_pce(e)
        }
    }

    /// Compares `actual` with `expected` on every generated term plus `extra`.
    fn check_equiv(&self, extra: Option<&Term>, actual: impl Fn(&Term) -> Pce, expected: impl Fn(&Term) -> Pce) -> Outcome {
        let config = self.config();
        let mut terms: Vec<Term> = self
            .signatures()
            .iter()
            .flat_map(|sig| sample_terms(sig, config.max_depth, config.seed, config.terms_per_signature))
            .collect();
        terms.extend(extra.cloned());
        for t in &terms {
            let (a, b) = (actual(t), expected(t));
            if !eq_pce(&a, &b) {
                return Err(Failure::Fail(format!("not equivalent at {t}: {a} vs {b}")));
            }
        }
        println!("# equivalent on {} terms", terms.len());
        Ok(())
    }
}

fn contract(e: CeError) -> Failure {
    input_error(e)
}

fn print_application(result: Option<Term>) -> Outcome {
    match result {
        Some(t) => {
            println!("{t}");
            Ok(())
        }
        None => {
            println!("FAIL");
            Err(Failure::Fail(String::new()))
        }
    }
}

fn binary(session: &mut Session, combine: bool, left: &PathBuf, right: &PathBuf, term: Option<&PathBuf>) -> Outcome {
    let s = to_canonical(&session.strategy(left)?).map_err(contract)?;
    let s2 = to_canonical(&session.strategy(right)?).map_err(contract)?;
    let t = term.map(|p| session.term(p)).transpose()?;
    let mut unifier = Unifier::new();
    let out = if combine { unifier.combine(&s, &s2) } else { unifier.unify(&s, &s2) }.map_err(contract)?;
    let shown = session.show_strategy(&out)?;
    println!("{shown}");
    if session.opts.check_equiv {
        let pce_op = if combine { combine_pce } else { unify_pce };
        session.check_equiv(t.as_ref(), |t| psi(&shown, t), |t| pce_op(&psi(&s, t), &psi(&s2, t)))?;
    }
    match t {
        Some(t) => print_application(apply_ce(&shown, Some(&t))),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Outcome {
    let signature = match &cli.opts.signature {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            Some(parse_signature(&src).map_err(|e| {
                let (line, col) = e.line_col(&src);
                input_error(format!("{}:{line}:{col}: {}", path.display(), e.message))
            })?)
        }
        None => None,
    };
    let mut session = Session {
        opts: cli.opts,
        signature,
        stdin_used: false,
    };
    match &cli.command {
        Command::Apply { strategy, term } => {
            let s = session.strategy(strategy)?;
            let t = session.term(term)?;
            print_application(apply_ce(&s, Some(&t)))
        }
        Command::Unify { left, right, term } => binary(&mut session, false, left, right, term.as_ref()),
        Command::Combine { left, right, term } => binary(&mut session, true, left, right, term.as_ref()),
        Command::Canon { strategy } => {
            let s = session.strategy(strategy)?;
            let c = to_canonical(&s).map_err(contract)?;
            println!("{c}");
            if session.opts.check_equiv {
                session.check_equiv(None, |t| psi(&c, t), |t| psi(&s, t))?;
            }
            Ok(())
        }
        Command::Psi { strategy, term } => {
            let s = session.strategy(strategy)?;
            let t = session.term(term)?;
            println!("{}", session.show_pce(&psi(&s, &t)));
            Ok(())
        }
        Command::Check { law } => {
            let corpus = Corpus::new(&session.signatures(), session.config());
            let reports = if law == "all" {
                check_all(&corpus)
            } else {
                vec![check_law(law, &corpus).map_err(input_error)?]
            };
            print!("{}", render_report(&corpus, &reports));
            if reports.iter().all(|r| r.as_expected()) {
                Ok(())
            } else {
                Err(Failure::Fail(String::new()))
            }
        }
        Command::Laws => {
            for law in catalog() {
                println!("{}\t{}", law.id, law.statement);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Fail(msg)) => {
            if !msg.is_empty() {
                eprintln!("cestrat: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("cestrat: error: {msg}");
            ExitCode::from(2)
        }
    }
}
