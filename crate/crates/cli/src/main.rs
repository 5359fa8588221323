//! `catmt`: batch front end for the catmt workbench.

mod commands;

use catmt::{ReportDocument, Verdict};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "catmt", version, about = "Finite-scale checks for categorical model theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized sampling, recorded in the report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Print the report as a table (the default).
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Independence predicates on commuting squares.
    #[command(subcommand)]
    Indep(IndepCmd),
    /// Amalgamation, Galois types and universal extensions.
    #[command(subcommand)]
    Amalg(AmalgCmd),
    /// Full diagrams and full indices.
    #[command(subcommand)]
    Exhaust(ExhaustCmd),
    /// Quantifier-free finite model theory.
    #[command(subcommand)]
    Fo(FoCmd),
    /// Finite categories.
    #[command(subcommand)]
    Cat(CatCmd),
}

#[derive(Args, Debug, Clone)]
pub struct CategoryArgs {
    /// Built-in category name.
    #[arg(long)]
    pub category: String,
    /// Characteristic of the linear categories.
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

#[derive(Subcommand, Debug)]
pub enum IndepCmd {
    /// Runs the axiom fragments for one predicate.
    Suite {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        predicate: String,
        /// Largest carrier size.
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Looks for a square on which two predicates disagree.
    Canonicity {
        #[command(flatten)]
        cat: CategoryArgs,
        /// Two predicates; graph categories default to the two cross-edge rivals.
        #[arg(long)]
        predicate: Vec<String>,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum AmalgCmd {
    /// Checks that every base object of the given size is an amalgamation base.
    Check {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        base_size: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Enumerates Galois types over base objects of the given size.
    Types {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        base_size: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Builds a universal extension chain and checks universality.
    Universal {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long)]
        base_size: usize,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Largest extension size; defaults to base size plus steps.
        #[arg(long)]
        ext_bound: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExhaustCmd {
    /// Builds a full diagram for a demo construction category.
    Run {
        /// zorn | generic | filtration | universal-extension
        #[arg(long)]
        demo: String,
        #[arg(long)]
        poset: Option<PathBuf>,
        #[arg(long)]
        filtration: Option<PathBuf>,
        /// Domain size of the generic function.
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        base_size: usize,
        /// Diagram length; defaults to a size that suffices for the demo.
        #[arg(long)]
        steps: Option<usize>,
        /// Target size for the universal-extension demo.
        #[arg(long)]
        ext_bound: Option<usize>,
    },
    /// Computes the full indices of a filtration pair.
    Club {
        #[arg(long)]
        filtration: Option<PathBuf>,
        /// Length of a random filtration when no file is given.
        #[arg(long, default_value_t = 20)]
        length: usize,
        /// Width of a random filtration.
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum FoCmd {
    /// Searches for a sequence ordered by a formula.
    OrderProperty {
        #[arg(long)]
        structure: PathBuf,
        /// Formula in two blocks of variables; omit to search all formulas.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        length: usize,
        /// Tuple length when no formula is given.
        #[arg(long, default_value_t = 1)]
        arity: usize,
    },
    /// Counts the types of tuples over a base.
    Types {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value = "")]
        base: String,
        #[arg(long, default_value_t = 1)]
        arity: usize,
    },
    /// Decides independence of a tuple, or checks the independence properties.
    Independent {
        #[arg(long)]
        structure: PathBuf,
        /// Tuple to test; omit to run the property diagnostics.
        #[arg(long)]
        tuple: Option<String>,
        #[arg(long, default_value = "")]
        base: String,
        /// The set the tuple should be independent from.
        #[arg(long, default_value = "")]
        with: String,
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Largest set size in the diagnostics.
        #[arg(long, default_value_t = 1)]
        bound: usize,
        /// Smallest base in the diagnostics.
        #[arg(long, default_value_t = 1)]
        base_size: usize,
    },
    /// Extracts an indiscernible subsequence.
    Indiscernibles {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, required = true)]
        formula: Vec<String>,
        /// Required length.
        #[arg(long)]
        length: usize,
        /// Tuples separated by `;`, entries by `,`; defaults to every element.
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Lists forbidden substructures of a built-in family.
    Axiomatize {
        /// graphs | reflexive-symmetric | binary-relations
        #[arg(long)]
        space: String,
        /// all | triangle-free | kN-free | equivalence
        #[arg(long)]
        family: String,
        /// Size of the forbidden structures.
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Largest structure compared with the family.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatCmd {
    /// Checks that the hom-structure embedding is full and faithful.
    Embed {
        #[arg(long, conflicts_with = "category")]
        poset: Option<PathBuf>,
        /// Category JSON file.
        #[arg(long)]
        category: Option<PathBuf>,
    },
}

/// An input or usage problem; reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn print_table(doc: &ReportDocument) {
    println!("{}", doc.command);
    for c in &doc.checks {
        let witness = serde_json::to_string(&c.witness).unwrap_or_default();
        let witness = if witness.chars().count() > 160 { format!("{}...", witness.chars().take(157).collect::<String>()) } else { witness };
        println!(
            "  {:<13} {:<48} {}{}",
            c.verdict.to_string(),
            c.name,
            if c.exhaustive { "" } else { "(bounded) " },
            if c.witness.is_null() { String::new() } else { witness }
        );
    }
    println!("overall: {}", doc.overall());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let checks = match commands::run(&cli.command, cli.output.seed) {
        Ok(checks) => checks,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let doc = ReportDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: format!("catmt {}", args.join(" ")),
        seed: cli.output.seed,
        checks,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    let json = serde_json::to_string_pretty(&doc).expect("reports serialize");
    if let Some(path) = &cli.output.out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.output.json {
        println!("{json}");
    } else {
        print_table(&doc);
    }
    match doc.overall() {
        Verdict::Pass => ExitCode::SUCCESS,
        _ => ExitCode::from(1),
    }
}
