use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mncomm_cli::{self as cli, Exit, Failure, Limits, Report};

/// Finite presentability of F/[M,N] for normal closures M, N in a free group.
#[derive(Parser, Debug)]
#[command(name = "mncomm", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Opts {
    /// Coset enumeration bound.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_cosets: u64,
    /// Saturation rounds allowed after the seed round.
    #[arg(long, global = true, default_value_t = 16)]
    max_rounds: usize,
    /// Shift candidates examined by `witness`.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Group backend: table, abelian or free:<map> (e.g. free:x->1,y->t).
    #[arg(long, global = true, default_value = "table")]
    backend: String,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized batches.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the artifact (certificate, witness) or JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide [F : MN]: finite n, infinite (abelianization), or undecided.
    Index { file: PathBuf },
    /// Finite presentation of F/[M,N] when [F : MN] is finite.
    Present {
        file: PathBuf,
        /// Write the Stallings graph of the lifted generators in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Certificate for [m_i^f, n_j] over the relators of `present`.
    Certify {
        file: PathBuf,
        /// Index into the lifted M generators.
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value = "")]
        f: String,
        /// Index into the lifted N generators.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Certify this many seeded random triples instead.
        #[arg(long)]
        random: Option<usize>,
        /// Longest f drawn by --random.
        #[arg(long, default_value_t = 16)]
        max_len: usize,
    },
    /// Class c of the pair (M, N) and its orientation.
    Class { file: PathBuf },
    /// Witness that [M,N] is not the normal closure of Y.
    Witness {
        file: PathBuf,
        /// Words of Y; repeat the flag or give a comma list.
        #[arg(long = "Y", value_name = "WORDS")]
        y: Vec<String>,
    },
    /// Re-validate a certificate or witness artifact.
    Recheck { artifact: PathBuf },
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let o = &cli.opts;
    let limits = Limits {
        max_cosets: o.max_cosets as usize,
        max_rounds: o.max_rounds,
        budget: o.budget as usize,
    };
    match &cli.command {
        Command::Index { file } => cli::index(&cli::load_presentation(file)?, &limits),
        Command::Present { file, dot } => {
            let rep = cli::present(&cli::load_presentation(file)?, &limits)?;
            if let (Some(path), Some(d)) = (dot, &rep.dot) {
                write(path, d)?;
            }
            Ok(rep)
        }
        Command::Certify {
            file,
            m,
            f,
            n,
            random,
            max_len,
        } => {
            let p = cli::load_presentation(file)?;
            match random {
                Some(k) => cli::certify_random(&p, &limits, *k, o.seed, *max_len),
                None => cli::certify(&p, &limits, *m, f, *n),
            }
        }
        Command::Class { file } => cli::class(&cli::load_presentation(file)?, &limits, &o.backend),
        Command::Witness { file, y } => {
            let p = cli::load_presentation(file)?;
            let y = cli::parse_y(&p.alphabet, y)?;
            cli::witness(&p, &limits, &o.backend, &y)
        }
        Command::Recheck { artifact } => {
            let text = std::fs::read_to_string(artifact)
                .map_err(|e| io_failure(artifact, e))?;
            cli::recheck(&text, &limits)
        }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure {
        exit: Exit::Input,
        stage: "io",
        message: format!("{}: {e}", path.display()),
    }
}

fn write(path: &std::path::Path, s: &str) -> Result<(), Failure> {
    std::fs::write(path, s).map_err(|e| io_failure(path, e))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json renders") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|rep| {
        if let Some(path) = &cli.opts.out {
            write(path, &pretty(rep.artifact.as_ref().unwrap_or(&rep.json)))?;
        }
        Ok(rep)
    });
    match outcome {
        Ok(rep) => {
            if cli.opts.json {
                print!("{}", pretty(&rep.json));
            } else {
                print!("{}", rep.text);
            }
            ExitCode::from(rep.exit.code() as u8)
        }
        Err(f) => {
            eprintln!("{f}");
            if cli.opts.json {
                print!("{}", pretty(&f.to_json()));
            }
            ExitCode::from(f.exit.code() as u8)
        }
    }
}
