use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use hermcodes::codes::Mode;
use hermcodes::experiments::{
    parse_form, run_classify_form, run_classify_preset, run_conjecture1, run_conjecture2, run_scan,
    run_spectrum,
};
use hermcodes::pairs::ConjectureReport;
use hermcodes::{Field, Space};

#[derive(Parser)]
#[command(name = "hermcodes", version, about = "Functional codes on quadrics and hermitian varieties")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(clap::Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Samples drawn in sampled mode.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl ModeArgs {
    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Sampled => Mode::Sampled {
                samples: self.samples,
                seed: self.seed,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a form and count its points.
    Classify {
        /// Comma-separated coefficients: upper-triangular row-major for a quadric,
        /// the full (n+1)x(n+1) matrix for a hermitian form.
        #[arg(long, conflicts_with = "preset", requires = "n")]
        form: Option<String>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: Option<usize>,
        /// Read --form as a hermitian matrix.
        #[arg(long)]
        hermitian: bool,
    },
    /// Weight spectrum of C_h(X) with configuration checks.
    Spectrum {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        h: u32,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Histogram of |X ∩ Z(f)| over all quadrics f.
    ScanMax {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Evidence campaigns for the two conjectures on hermitian varieties.
    Conjectures {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long)]
        t: u32,
        /// Largest degree for the first conjecture; defaults to t.
        #[arg(long)]
        hmax: Option<u32>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

fn print_reports(reports: &[hermcodes::Result<ConjectureReport>]) -> bool {
    let mut ok = true;
    for r in reports {
        match r {
            Ok(rep) => {
                println!("{} ({}): {}", rep.name, rep.parameters, rep.verdict());
                for d in &rep.details {
                    println!("  {d}");
                }
                ok &= rep.consistent;
            }
            Err(e) => println!("REFUSED: {e}"),
        }
    }
    ok
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match cli.command {
        Command::Classify {
            form,
            preset,
            q,
            n,
            hermitian,
        } => {
            let r = match (form, preset) {
                (Some(text), None) => {
                    let n = n.expect("clap requires --n with --form");
                    let field = Field::with_order(q)?;
                    let space = Space::new(n, field.clone())?;
                    let f = parse_form(&field, n, &text, hermitian)?;
                    run_classify_form(&space, &f)?
                }
                (None, Some(name)) => run_classify_preset(&name, q)?,
                _ => bail!("give exactly one of --form or --preset"),
            };
            println!("{}", r.summary());
            Ok(true)
        }
        Command::Spectrum {
            variety,
            q,
            h,
            mode,
            out,
        } => {
            let r = run_spectrum(&variety, q, h, mode.mode(), Some(&out))?;
            println!("{}", r.summary());
            let mut ok = true;
            if let Some(rep) = &r.verification {
                for c in &rep.checks {
                    let status = match (c.asserted, c.passed()) {
                        (false, _) => "REPORTED",
                        (true, true) => "PASS",
                        (true, false) => "FAIL",
                    };
                    println!(
                        "{status} weight {}: {} ({} representatives, {} hold, {} reported, {} fail)",
                        c.weight, c.description, c.representatives, c.holds, c.reported, c.fails
                    );
                    ok &= c.passed();
                }
            }
            if let Some(dir) = &r.out_dir {
                println!("wrote {}", dir.display());
            }
            Ok(ok)
        }
        Command::ScanMax {
            variety,
            q,
            mode,
            out,
        } => {
            let r = run_scan(&variety, q, mode.mode(), Some(&out))?;
            println!("{}", r.summary());
            if let Some(dir) = &r.out_dir {
                println!("wrote {}", dir.display());
            }
            Ok(true)
        }
        Command::Conjectures { which, t, hmax, out } => {
            let reports = if which == 1 {
                run_conjecture1(t, hmax.unwrap_or(t), Some(&out))?
            } else {
                run_conjecture2(t, Some(&out))?
            };
            Ok(print_reports(&reports))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
