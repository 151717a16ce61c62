use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::{run_all, run_experiment, ExperimentConfig};
use crate::symbols::catalog_names;
use crate::thresholds::{parse_exponent, parse_rational, threshold_table};

/// Exit code for a successful run.
const EXIT_OK: i32 = 0;
/// Exit code when an experiment or self-test fails.
const EXIT_FAILED: i32 = 1;
/// Exit code for usage and configuration errors.
const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fio-lab",
    version,
    about = "Numerical laboratory for rough Fourier integral operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the admissible orders for one (ρ, p, q, n).
    Thresholds {
        #[arg(long, default_value = "1")]
        rho: String,
        #[arg(long, default_value = "inf")]
        p: String,
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Run one experiment from a TOML or JSON config.
    Run {
        /// Config path; `--config` is an alias for the positional form.
        #[arg(value_name = "CONFIG")]
        path: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory; overrides the config's `out`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// List the builtin amplitudes and phases.
    Catalog,
    /// Run the acceptance suite.
    Selftest,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Thresholds { rho, p, q, n } => thresholds(&rho, &p, &q, n),
        Command::Run {
            path,
            config,
            out,
            seed,
            budget,
        } => run(path.or(config), out, seed, budget),
        Command::Catalog => {
            for (name, about) in catalog_names() {
                println!("{name:<14} {about}");
            }
            EXIT_OK
        }
        Command::Selftest => {
            let outcomes = run_all();
            for o in &outcomes {
                println!("{}", o.line());
            }
            if outcomes.iter().all(|o| o.passed) {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
    }
}

fn thresholds(rho: &str, p: &str, q: &str, n: u32) -> i32 {
    let table = parse_rational(rho)
        .and_then(|rho| Ok((rho, parse_exponent(p)?, parse_exponent(q)?)))
        .and_then(|(rho, p, q)| threshold_table(&rho, &p, &q, n));
    match table {
        Ok(t) => {
            println!("rho = {}, p = {}, q = {}, n = {}", t.rho, t.p, t.q, t.n);
            println!("m_arc = {} (exact), {:.6}", t.m_arc, t.m_arc_decimal);
            println!("branch = {}", format!("{:?}", t.branch).to_lowercase());
            match &t.m_script {
                Some(v) => println!("m_script = {v}"),
                None => println!("m_script = undefined"),
            }
            println!("theorem_a_order = {} ({:.6})", t.theorem_a, t.theorem_a_decimal);
            println!("pseudodifferential_order = {}", t.pseudodifferential);
            EXIT_OK
        }
        Err(e) => {
            eprintln!("fio-lab: {e}");
            EXIT_USAGE
        }
    }
}

fn run(path: Option<PathBuf>, out: Option<PathBuf>, seed: Option<u64>, budget: Option<f64>) -> i32 {
    let Some(path) = path else {
        eprintln!("fio-lab: run needs a config path");
        return EXIT_USAGE;
    };
    let mut cfg = match ExperimentConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fio-lab: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if budget.is_some() {
        cfg.budget = budget;
    }
    if out.is_some() {
        cfg.out = out;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("fio-lab: {e}");
        return EXIT_USAGE;
    }
    let report = run_experiment(&cfg);
    print!("{}", report.render());
    if let Some(dir) = &cfg.out {
        if let Err(e) = report.write(dir) {
            eprintln!("fio-lab: {e}");
            return EXIT_FAILED;
        }
        println!("wrote {}", dir.display());
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}
