use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hsums", version, about = "Nested harmonic sums of weight <= 6")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Working precision in decimal digits
    #[arg(long, global = true, env = "HSUMS_DIGITS", default_value_t = 30,
          value_parser = clap::value_parser!(u32).range(20..=200))]
    pub digits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Relation catalog to use instead of the built-in one
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Evaluate an expression: exact at integer N when possible
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Values of N, e.g. `1..12` or `2,5,9`
        #[arg(long = "N", short = 'N', allow_hyphen_values = true)]
        n: Option<String>,
    },
    /// Mellin transform of a kernel, e.g. `M[Li2(x)/(x-1)]+`
    Mellin {
        atom: String,
        #[arg(long = "N", short = 'N', allow_hyphen_values = true, default_value = "1..5")]
        n: String,
    },
    /// Reduce sums to the algebraic basis, e.g. `2,1,1`
    Reduce {
        #[arg(required = true, allow_hyphen_values = true)]
        vectors: Vec<String>,
    },
    /// Check catalog relations
    Verify {
        /// 2..6, appendix, auxiliary or all
        #[arg(long, default_value = "all")]
        section: String,
        #[arg(long = "N", short = 'N', allow_hyphen_values = true, default_value = "1..12")]
        n: String,
    },
    /// List basic functions of a weight
    Basis {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
        weight: u32,
        /// All weights from 3 up to `--weight`
        #[arg(long)]
        cumulative: bool,
    },
    /// Continue a sum to complex N, e.g. `2,1,1,1,1 --N 2.5,3.5+1i`
    Continue {
        #[arg(allow_hyphen_values = true)]
        vector: String,
        #[arg(long = "N", short = 'N', allow_hyphen_values = true)]
        n: String,
        /// Parity branch; defaults to the parity of integer N, else even
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
        /// Also evaluate from one step further out and report the difference
        #[arg(long)]
        check_shift: bool,
    },
    /// Print the constant registry
    Constants,
    /// Inverse-power series of a kernel regular at x = 1
    Asym {
        /// e.g. `Li5(1-x)/(1-x)`
        kernel: String,
        #[arg(long, default_value_t = 19)]
        terms: usize,
        /// Expand in 1/(N+1) (default) or 1/N
        #[arg(long, value_enum, default_value_t = Variable::NPlusOne)]
        variable: Variable,
        /// Also evaluate the truncated series at these real points
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Even,
    Odd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    #[value(name = "n")]
    N,
    #[value(name = "n+1")]
    NPlusOne,
}
