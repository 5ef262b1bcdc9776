use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use mpcore::harness::{render_report, run_suite, Format, SuiteParams};
use mpcore::json::{bruhat_to_json, sp_from_json, word_from_json, word_rank};
use mpcore::mpcover::{cocycle_word, x_value};
use mpcore::rational::{format_rational, parse_rational};
use mpcore::scalars::{hilbert, weil_index, weil_index_oracle, AdditiveCharacter};
use mpcore::spgroup::bruhat_decompose;
use mpcore::{Error, Place};

#[derive(Parser)]
#[command(name = "mpk", version, about = "Exact checks on the metaplectic double cover")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Word,
    #[cfg(feature = "leray")]
    Leray,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hilbert symbol (A, B) at a place; prints 1 or -1.
    Hilbert {
        #[arg(long)]
        place: Place,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Weil index of x -> psi(A x^2); prints the exponent of the eighth root of unity.
    WeilIndex {
        #[arg(long)]
        place: Place,
        /// psi(x) = psi_standard(shift * x).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        shift: String,
        /// Evaluate with the Gauss-sum oracle instead of the closed form.
        #[arg(long)]
        oracle: bool,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Siegel-parabolic Bruhat decomposition of a symplectic matrix.
    Bruhat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Cocycle of two factored words; prints 1, -1 or "irreducible".
    Cocycle {
        #[arg(long)]
        place: Place,
        #[arg(long)]
        word1: PathBuf,
        #[arg(long)]
        word2: PathBuf,
        #[arg(long, value_enum, default_value = "word")]
        backend: BackendArg,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Hilbert { place, a, b } => {
            println!("{}", hilbert(&parse_rational(&a)?, &parse_rational(&b)?, place)?);
        }
        Cmd::WeilIndex { place, shift, oracle, a } => {
            let psi = AdditiveCharacter::new(place, parse_rational(&shift)?)?;
            let a = parse_rational(&a)?;
            let value = if oracle {
                weil_index_oracle(&a, &psi)?.value
            } else {
                weil_index(&a, &psi)?
            };
            println!("{}", value.exponent());
        }
        Cmd::Bruhat { n, matrix } => {
            let g = sp_from_json(&read_json(&matrix)?, Some(n))?;
            let b = bruhat_decompose(&g);
            let out = bruhat_to_json(&b, &format_rational(&x_value(&g)));
            println!("{}", serde_json::to_string_pretty(&out).expect("json value"));
        }
        Cmd::Cocycle { place, word1, word2, backend } => {
            let (v1, v2) = (read_json(&word1)?, read_json(&word2)?);
            let n = word_rank(&v1)?.max(word_rank(&v2)?);
            let (w1, w2) = (word_from_json(&v1, n)?, word_from_json(&v2, n)?);
            let c = match backend {
                BackendArg::Word => cocycle_word(&w1, &w2, place),
                #[cfg(feature = "leray")]
                BackendArg::Leray => Ok(mpcore::mpcover::cocycle_leray(&w1.product(), &w2.product(), place)),
            };
            match c {
                Ok(s) => println!("{s}"),
                Err(Error::Irreducible) => println!("irreducible"),
                Err(e) => return Err(e),
            }
        }
        Cmd::Verify { suite, n_max, primes, trials, seed, json } => {
            let params = SuiteParams {
                n_max,
                k_range: None,
                primes,
                trials,
                seed,
            };
            let report = run_suite(&suite, &params)?;
            let format = if json { Format::Json } else { Format::Text };
            print!("{}", render_report(&report, format));
            if !report.pass {
                return Ok(Outcome::Fail);
            }
        }
    }
    Ok(Outcome::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
