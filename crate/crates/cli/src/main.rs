use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use porient_cli::{
    cmd_enumerate, cmd_maxbis, cmd_montecarlo, cmd_table1, cmd_verify, ExperimentConfig, TableFormat, PRECISION_ENV,
};
use porient_core::exact_math::DEFAULT_PRECISION;

#[derive(Parser)]
#[command(name = "porient", version, about = "p-orientations of random regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the classification grid.
    Table1 {
        #[arg(long, default_value_t = 20)]
        dmax: u32,
        #[arg(long, default_value_t = 4)]
        pmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the certificate chain for one pair.
    Verify {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, env = PRECISION_ENV, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare enumerated moments with the exact formulas.
    Enumerate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Sample random simple regular graphs and search for p-orientations.
    Montecarlo {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = PRECISION_ENV, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Exact maximum bisection of an edge-list file and the obstruction verdict.
    Maxbis {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: usize,
    },
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let ok = match cli.command {
        Command::Table1 { dmax, pmax, format } => {
            let format = match format {
                Format::Text => TableFormat::Text,
                Format::Csv => TableFormat::Csv,
            };
            print!("{}", cmd_table1(dmax, pmax).render(format));
            true
        }
        Command::Verify { d, p, precision, seed } => {
            let report = cmd_verify(d, p, precision, seed)?;
            print!("{}", report.render());
            report.passed()
        }
        Command::Enumerate { d, n, p } => {
            let report = cmd_enumerate(d, n, p)?;
            print!("{}", report.render());
            report.passed()
        }
        Command::Montecarlo { d, p, n, trials, seed, workers, out, precision } => {
            let config =
                ExperimentConfig { command: "montecarlo".into(), d, p, n, trials, seed, workers, out: out.clone(), precision };
            let start = Instant::now();
            let record = cmd_montecarlo(&config)?;
            let json = record.to_json()?;
            match &out {
                Some(path) => {
                    std::fs::write(path, format!("{json}\n"))?;
                    std::fs::write(path.with_extension("csv"), record.to_csv())?;
                    print!("{}", record.to_csv());
                }
                None => println!("{json}"),
            }
            eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
            true
        }
        Command::Maxbis { graph, p } => {
            print!("{}", cmd_maxbis(&graph, p)?.render());
            true
        }
    };
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
