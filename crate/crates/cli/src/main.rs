use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quncert::channels::ChannelSpec;
use quncert::metrics::ObservablePair;
use quncert::scenarios::{
    classify_longtime_ad, emit_csv, fig2_preset, fig3_preset, property_check_unital,
    run_time_sweep, sample_spmc_surface, smfig_b_preset, write_csv_file, Column, Spacing,
    SweepConfig, TimeGrid,
};
use quncert::{BellDiagonalState, Error};

/// Entropic uncertainty under local noise on Bell-diagonal states.
#[derive(Parser, Debug)]
#[command(name = "quncert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve a state in time and print U, Ub, D, E, M as CSV
    Sweep {
        /// Initial state, e.g. bd:-0.5,0.4,0.8
        #[arg(long)]
        state: BellDiagonalState,
        /// Channel per unit time: flip:l:eta, pd:gt, pd:g:t or ad:gt
        #[arg(long)]
        channel: ChannelSpec,
        /// Measured Pauli pair, e.g. 1,3
        #[arg(long, default_value = "1,3")]
        pair: ObservablePair,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Logarithmic time spacing (needs --t-min > 0)
        #[arg(long)]
        log: bool,
        /// Columns to emit, e.g. U,Ub
        #[arg(long, value_delimiter = ',', value_parser = parse_column)]
        columns: Option<Vec<Column>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase damping of (-0.5, 0.4, 0.8), pair 1,3, Γt in [0, 10]
    Fig2 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amplitude damping of (-0.5, 0.4, 0.8), pair 1,3, Γt in [0, 10]
    Fig3 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Amplitude damping of the Bell state (-1, 1, 1), pair 1,3, Γt in [0, 10]
    SmfigB {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Does long-time amplitude damping lower Ub?
    Classify {
        #[arg(long)]
        state: BellDiagonalState,
    },
    /// Grid of states saturating the bound for a pair, as c1,c2,c3 CSV
    Surface {
        #[arg(long)]
        pair: ObservablePair,
        #[arg(long)]
        resolution: usize,
    },
    /// Randomised check that unital noise never lowers S(ρ) or Ub
    CheckUnital {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_column(s: &str) -> Result<Column, String> {
    Column::from_header(s)
        .ok_or_else(|| format!("unknown column {s:?}, expected one of U, Ub, D, E, M"))
}

enum Failure {
    Input(Error),
    Property,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn io_error(e: io::Error) -> Failure {
    Failure::Input(Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    })
}

fn sweep(cfg: &SweepConfig, out: Option<PathBuf>) -> Result<(), Failure> {
    let records = run_time_sweep(cfg)?;
    let columns = cfg.columns();
    match out {
        Some(path) => write_csv_file(&path, &records, &columns)?,
        None => emit_csv(&records, &columns, io::stdout().lock()).map_err(io_error)?,
    }
    Ok(())
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Sweep {
            state,
            channel,
            pair,
            t_min,
            t_max,
            points,
            log,
            columns,
            out,
        } => {
            let cfg = SweepConfig {
                initial: state,
                channel,
                pair,
                grid: TimeGrid {
                    start: t_min,
                    end: t_max,
                    points,
                    spacing: if log { Spacing::Log } else { Spacing::Linear },
                },
                outputs: columns.unwrap_or_else(|| Column::ALL.to_vec()),
            };
            sweep(&cfg, out)
        }
        Command::Fig2 { out } => sweep(&fig2_preset(), out),
        Command::Fig3 { out } => sweep(&fig3_preset(), out),
        Command::SmfigB { out } => sweep(&smfig_b_preset(), out),
        Command::Classify { state } => {
            let r = classify_longtime_ad(&state)?;
            let mut w = io::stdout().lock();
            writeln!(w, "state {state}").map_err(io_error)?;
            writeln!(w, "Ub_initial {:.12}", r.u_b_initial).map_err(io_error)?;
            writeln!(w, "Ub_limit {:.12}", r.u_b_limit).map_err(io_error)?;
            writeln!(w, "verdict {}", r.verdict).map_err(io_error)
        }
        Command::Surface { pair, resolution } => {
            let states = sample_spmc_surface(pair, resolution)?;
            let mut w = io::BufWriter::new(io::stdout().lock());
            writeln!(w, "c1,c2,c3").map_err(io_error)?;
            for s in states {
                let [c1, c2, c3] = s.coeffs();
                // + 0.0 turns -0 into 0.
                writeln!(w, "{:.12},{:.12},{:.12}", c1 + 0.0, c2 + 0.0, c3 + 0.0)
                    .map_err(io_error)?;
            }
            w.flush().map_err(io_error)
        }
        Command::CheckUnital { trials, seed } => {
            let report = property_check_unital(trials, seed)?;
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Property)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Property) => {
            eprintln!("error: property violation");
            ExitCode::from(2)
        }
    }
}
