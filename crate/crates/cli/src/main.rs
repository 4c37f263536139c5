//! `borsuk`: build, search, verify and reproduce cover partitions.

use std::path::PathBuf;
use std::process::ExitCode;

use borsuk_core::error::Error;
use borsuk_core::optimize::DEFAULT_THRESHOLD;
use clap::{Parser, Subcommand};

use borsuk_cli::commands;

#[derive(Parser)]
#[command(
    name = "borsuk",
    version,
    about = "Partition search over truncated universal covers with certified diameter bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the four cover spec skeletons.
    BuildUcs {
        /// Output directory for U1.spec .. U4p.spec.
        #[arg(long)]
        out: PathBuf,
    },
    /// Multistart partition search on one cover spec.
    Search {
        /// Input spec file (cover, grids, seed).
        spec: PathBuf,
        /// Number of seeded restarts.
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        /// Inscribed-sample grid; defaults to the spec file's value.
        #[arg(long)]
        m_lower: Option<usize>,
        /// Circumscribed-polytope grid; defaults to the spec file's value.
        #[arg(long)]
        m_upper: Option<usize>,
        /// Random seed; defaults to the spec file's value.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Output path for the completed spec; the certificate lands next
        /// to it with a .cert extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the certificate of a completed spec; exit 0 iff it
    /// passes, 1 on fail, 2 on malformed input.
    Verify {
        spec: PathBuf,
        /// Circumscribed-polytope grid; defaults to the spec file's value.
        #[arg(long)]
        m_upper: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Full planar pipeline on both demo covers, with figure data.
    Demo2d {
        #[arg(long, default_value_t = 7)]
        m_lower: usize,
        #[arg(long, default_value_t = 17)]
        m_upper: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search all four covers and aggregate a run report.
    Reproduce {
        /// Restarts per element.
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[arg(long, default_value_t = 5)]
        m_lower: usize,
        #[arg(long, default_value_t = 9)]
        m_upper: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Output directory for specs, certificates and report.txt.
        #[arg(long)]
        out: PathBuf,
    },
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::BuildUcs { out } => match commands::build_ucs(&out) {
            Ok(paths) => {
                for p in paths {
                    println!("{}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Cmd::Search {
            spec,
            restarts,
            m_lower,
            m_upper,
            seed,
            workers,
            out,
        } => {
            let opts = commands::SearchOptions {
                restarts,
                m_lower,
                m_upper,
                seed,
                workers,
                threshold: DEFAULT_THRESHOLD,
            };
            match commands::search(&spec, &opts, &out) {
                Ok(cert) => {
                    print!("{}", commands::format_verification(&cert));
                    println!("spec: {}", out.display());
                    println!("certificate: {}", commands::cert_path(&out).display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Verify {
            spec,
            m_upper,
            threshold,
        } => match commands::verify(&spec, m_upper, threshold) {
            Ok(cert) => {
                print!("{}", commands::format_verification(&cert));
                if cert.pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => fail(e),
        },
        Cmd::Demo2d {
            m_lower,
            m_upper,
            out,
        } => match commands::demo2d(m_lower, m_upper, &out) {
            Ok(certs) => {
                for cert in &certs {
                    print!("{}", commands::format_verification(cert));
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Cmd::Reproduce {
            budget,
            m_lower,
            m_upper,
            seed,
            workers,
            threshold,
            out,
        } => {
            let opts = commands::ReproduceOptions {
                budget,
                m_lower,
                m_upper,
                seed,
                workers,
                threshold,
            };
            match commands::reproduce(&opts, &out) {
                Ok(report) => {
                    print!("{}", commands::format_report(&report));
                    println!("report: {}", out.join("report.txt").display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
