mod cache;
mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cache::Cache;
use crate::commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "kpcat", version, about = "Exact computations in the category of KP modules")]
pub struct Cli {
    /// Emit versioned JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Bypass the on-disk cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Module arguments (`--module`, `--from`, `--to`, `--left`, `--right`)
/// accept a permutation (`231`, `[2,3,1]`), `T` for the full tilting module,
/// or a module JSON file (`path.json` or `@path`).
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Schubert polynomial of a permutation.
    Schubert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        perm: String,
    },
    /// The KP module of a permutation.
    Kp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        perm: String,
        #[command(flatten)]
        view: View,
    },
    /// The indecomposable tilting module T(λ), λ ∈ Λ_n.
    Tilting {
        #[arg(long)]
        n: usize,
        /// Comma-separated weight, e.g. `1,1,0`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        view: View,
    },
    /// Character of a module.
    Char {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        module: String,
    },
    /// Expansion of a polynomial or a module character in Schubert polynomials.
    Expand {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "module", required_unless_present = "module")]
        poly: Option<String>,
        #[arg(long)]
        module: Option<String>,
    },
    /// Dimension of the space of module homomorphisms.
    Hom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Dimensions of Ext^i(from, to) for 0 <= i <= max-degree.
    Ext {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Standard filtration of a module.
    Filtration {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        module: String,
    },
    /// The Ringel dual F(S_w) = Hom(S_w, T), checked against S_{w0 w w0}.
    Dual {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        perm: String,
    },
    /// Tensor product of two modules, optionally restricted to Λ_n.
    Tensor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Take the largest quotient with weights in Λ_n.
        #[arg(long)]
        restricted: bool,
        #[command(flatten)]
        view: View,
    },
    /// dim (T^{⊗k})^{Λ_n} against (k+1)^{n(n-1)/2}.
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also print dimensions by exterior degree.
        #[arg(long)]
        graded: bool,
    },
    /// Run a verification suite; exit code 0 iff every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: usize,
        /// Restrict the ringel suite to these permutations (comma-separated).
        #[arg(long, value_delimiter = ',')]
        sample: Option<Vec<String>>,
    },
}

#[derive(clap::Args, Debug, Clone, Copy)]
#[group(multiple = false)]
pub struct View {
    /// Print the character only.
    #[arg(long = "char")]
    pub character: bool,
    /// Print the dimension only.
    #[arg(long)]
    pub dims: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    Ringel,
    TensorDual,
    ExtSymmetry,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::from_env()
    };
    match commands::run(&cli, &cache) {
        Ok(Outcome { text, json, passed }) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json).expect("JSON values serialize")
                );
            } else {
                println!("{text}");
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
