//! `ob`: command-line reports for cyclotomic oriented Brauer categories.
//!
//! Every command prints a deterministic report on standard output. Exit
//! status is 0 on success, 1 when a verification command finds a failure
//! and 2 on usage errors.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Config, Format};

#[derive(Debug, Parser)]
#[command(name = "ob", version, about = "Exact computations in cyclotomic oriented Brauer categories")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Configuration file and per-flag overrides.
#[derive(Debug, Args)]
struct GlobalArgs {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (overrides `output`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Level ℓ (overrides `level`).
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Characteristic, 0 or a prime (overrides `char`).
    #[arg(long = "char", global = true)]
    char_p: Option<u64>,
    /// Charges u as a bracketed list, e.g. "[0, 2]".
    #[arg(long, global = true)]
    u: Option<String>,
    /// Charges u' as a bracketed list.
    #[arg(long, global = true)]
    uprime: Option<String>,
    /// Largest number of endpoints accepted in word arguments.
    #[arg(long, global = true)]
    size_limit: Option<usize>,
    /// Box truncation for K-theory commands.
    #[arg(long, global = true)]
    truncation: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Straighten a layer-word JSON file into normal form.
    Normalize {
        /// JSON file `{"src": "ud", "layers": [{"pos": 0, "gen": "CapL"}]}`.
        file: PathBuf,
    },
    /// List the normal-form basis of `Hom(src, dst)`.
    HomBasis(HomArgs),
    /// Dimension of `Hom(src, dst)`.
    HomDim(HomArgs),
    /// Compose two morphism JSON files: `outer ∘ inner`.
    Compose { outer: PathBuf, inner: PathBuf },
    /// Check every relation in every whiskering context.
    VerifyRelations {
        /// Largest total length of the whiskering words.
        #[arg(long, default_value_t = 2)]
        max_context: usize,
        /// Check only this many randomly chosen contexts.
        #[arg(long)]
        sample: Option<usize>,
        /// Seed for context sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Basis and dimension of the corner algebra at a word.
    Corner {
        #[arg(long)]
        dst: String,
        /// Also print the structure constants.
        #[arg(long)]
        structure: bool,
    },
    /// Check the Hecke presentation on the corner `↑^r ↓^s`.
    HeckeCheck {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Value of a bubble carrying `dots` dots.
    Bubble {
        #[arg(long)]
        dots: u32,
        /// Evaluate the counterclockwise bubble.
        #[arg(long)]
        counterclockwise: bool,
    },
    /// Generalized eigenspace dimensions of the dot operators on `Hom(src, dst)`.
    Eigenprofile(HomArgs),
    /// Path counts by type into a bipartition.
    Character {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Dimension of `Hom(a, Δ(λ))`.
    StdDim {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        dst: String,
    },
    /// Paths of a given length into a bipartition.
    Paths {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        max_len: usize,
        /// Keep only paths of this type.
        #[arg(long)]
        dst: Option<String>,
    },
    /// Apply `e_i` or `f_i` to a bipartition in the truncated K-group.
    KApply {
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long, value_enum, default_value_t = SectorArg::Total)]
        sector: SectorArg,
        #[arg(long)]
        residue: String,
        #[arg(long)]
        shape: String,
    },
    /// Check `[e_i, f_j]` on all bipartitions up to the truncation.
    CommutatorCheck,
    /// Decide semisimplicity from the charges.
    SemisimpleCheck,
    /// Group the charges into orbits modulo the integers.
    Orbits,
}

#[derive(Debug, Args)]
pub struct HomArgs {
    #[arg(long, default_value = "")]
    pub src: String,
    #[arg(long, default_value = "")]
    pub dst: String,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum OpArg {
    E,
    F,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum SectorArg {
    Total,
    Up,
    Down,
}

fn load_config(g: &GlobalArgs) -> Result<Config, String> {
    let mut c = match &g.config {
        Some(p) => Config::load(p).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    let mut text = String::new();
    if let Some(u) = &g.u {
        text.push_str(&format!("u = {u}\n"));
    }
    if let Some(u) = &g.uprime {
        text.push_str(&format!("uprime = {u}\n"));
    }
    let lists = Config::parse(&text).map_err(|e| e.to_string())?;
    if g.u.is_some() {
        c.u = lists.u;
    }
    if g.uprime.is_some() {
        c.uprime = lists.uprime;
    }
    if let Some(v) = g.level {
        c.level = v;
    }
    if let Some(v) = g.char_p {
        c.char_p = v;
    }
    if let Some(v) = g.size_limit {
        c.size_limit = v;
    }
    if let Some(v) = g.truncation {
        c.truncation = v;
    }
    if let Some(v) = g.format {
        c.output = v;
    }
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli.command, &config) {
        Ok(outcome) => {
            let text = outcome.report.render(config.output);
            print!("{text}");
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
