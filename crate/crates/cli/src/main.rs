use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser};
use subopt_core::autgrp::AutError;
use subopt_core::catalog::{self, CatalogEntry};
use subopt_core::cli::{build_report, export_dot, parse_document, render_text, to_json};
use subopt_core::relation::{optimal_system_with, Options, DEFAULT_TRIALS, DEFAULT_WORD_LENGTH};
use subopt_core::symx;

/// Optimal systems of p-families of Lie subalgebras.
#[derive(Debug, Parser)]
#[command(name = "subopt", version)]
#[command(group(ArgGroup::new("source").required(true).args(["catalog", "algebra", "list"])))]
struct Args {
    /// Built-in algebra label, e.g. A_{3,8} or 2A2.
    #[arg(long)]
    catalog: Option<String>,
    /// Path to an algebra document.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Print the catalog labels and exit.
    #[arg(long)]
    list: bool,
    /// Subalgebra dimensions, comma separated. Defaults to 1..r-1.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Longest automorphism word used for edges.
    #[arg(long, default_value_t = DEFAULT_WORD_LENGTH)]
    word_length: usize,
    /// Sampling seed. SUBOPT_SEED takes precedence when set.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for one DOT file per dimension.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Path for the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Oracle samples per edge; 0 disables the replay.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    oracle_trials: usize,
    /// Worker threads for edge discovery.
    #[arg(long)]
    jobs: Option<usize>,
}

const EXIT_INVALID: u8 = 2;
const EXIT_NO_EXPONENTIAL: u8 = 3;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn slug(label: &str) -> String {
    label
        .chars()
        .filter_map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' => Some(c),
            '+' => Some('p'),
            ',' | '_' => Some('_'),
            _ => None,
        })
        .collect()
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for l in catalog::labels() {
            println!("{l}");
        }
        return ExitCode::SUCCESS;
    }
    let seed = match std::env::var("SUBOPT_SEED") {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(v) => Some(v),
            Err(_) => {
                return fail(
                    EXIT_INVALID,
                    format!("SUBOPT_SEED is not an integer: {s:?}"),
                )
            }
        },
        Err(_) => args.seed,
    };
    if let Some(s) = seed {
        symx::set_seed(s);
    }
    if let Some(n) = args.jobs {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            return fail(EXIT_INVALID, e);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = n;
    }
    if args.word_length == 0 {
        return fail(EXIT_INVALID, "--word-length must be at least 1");
    }

    let (alg, overrides, entry): (_, _, Option<CatalogEntry>) = if let Some(label) = &args.catalog {
        match catalog::lookup(label) {
            Ok(e) => (e.algebra.clone(), e.exponentials.clone(), Some(e)),
            Err(e) => return fail(EXIT_INVALID, e),
        }
    } else {
        let path = args.algebra.as_ref().expect("clap enforces a source");
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(EXIT_INVALID, format!("{}: {e}", path.display())),
        };
        let doc = match parse_document(&text) {
            Ok(d) => d,
            Err(e) => return fail(EXIT_INVALID, format!("{}: {e}", path.display())),
        };
        match doc.algebra() {
            Ok(a) => (a, doc.exponentials, None),
            Err(e) => return fail(EXIT_INVALID, format!("{}: {e}", path.display())),
        }
    };
    if let Some(d) = args.dims.iter().find(|&&d| d == 0 || d >= alg.dim()) {
        return fail(
            EXIT_INVALID,
            format!("dimension {d} outside 1..{}", alg.dim() - 1),
        );
    }

    let start = Instant::now();
    let opts = Options {
        dims: args.dims.clone(),
        word_length: args.word_length,
        parallel: true,
    };
    let sys = match optimal_system_with(&alg, &overrides, &opts) {
        Ok(s) => s,
        Err(e @ AutError::ExponentialUnavailable(_)) => return fail(EXIT_NO_EXPONENTIAL, e),
        Err(e) => return fail(EXIT_INVALID, e),
    };
    let report = build_report(
        &alg,
        &sys,
        entry.as_ref(),
        &overrides,
        args.oracle_trials,
        symx::seed(),
    );
    print!("{}", render_text(&report, Some(start.elapsed())));

    if let Some(path) = &args.report {
        if let Err(e) = fs::write(path, to_json(&report)) {
            return fail(EXIT_INVALID, format!("{}: {e}", path.display()));
        }
    }
    if let Some(dir) = &args.dot {
        if let Err(e) = fs::create_dir_all(dir) {
            return fail(EXIT_INVALID, format!("{}: {e}", dir.display()));
        }
        let name = alg.label().map(slug).unwrap_or_else(|| "algebra".into());
        for d in &sys.dims {
            let title = format!("{} d={}", alg.label().unwrap_or("algebra"), d.dim);
            let path = dir.join(format!("{name}_d{}.dot", d.dim));
            if let Err(e) = fs::write(&path, export_dot(&d.graph, &title)) {
                return fail(EXIT_INVALID, format!("{}: {e}", path.display()));
            }
        }
    }
    ExitCode::SUCCESS
}
