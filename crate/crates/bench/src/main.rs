use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use daplsr_bench::{emit, run, synth_dataset, ExperimentConfig, Format, ResultTable, SynthSpec};

#[derive(Parser)]
#[command(name = "daplsr-bench", version, about = "Seeded PLS benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write results.<ext> into the output directory.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the configured formats.
        #[arg(long, value_enum)]
        format: Vec<FormatArg>,
        /// Overrides the configured base seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write a Gaussian-blob dataset as CSV (features, then label).
    Synth {
        /// Samples per class, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<usize>,
        #[arg(long)]
        dims: usize,
        #[arg(long)]
        spread: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        header: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a saved JSON result file.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Output directory; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_all(table: &ResultTable, formats: &[Format], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for &f in formats {
        let path = dir.join(format!("results.{}", f.extension()));
        emit::emit(table, f, &path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn write_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            format,
            seed,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            if !format.is_empty() {
                cfg.formats = format.into_iter().map(Format::from).collect();
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            match run(&cfg) {
                Ok(table) => write_all(&table, &cfg.formats, &cfg.output_dir),
                Err(failure) => {
                    let partial = cfg.output_dir.join("partial");
                    write_all(&failure.partial, &cfg.formats, &partial)?;
                    Err(failure.error.into())
                }
            }
        }
        Command::Synth {
            counts,
            dims,
            spread,
            seed,
            header,
            out,
        } => {
            let spec = SynthSpec {
                counts,
                dims,
                spread,
                seed: Some(seed),
            };
            let ds = synth_dataset(&spec, seed)?;
            write_text(&ds.to_csv_string(header), out.as_deref())
        }
        Command::Report { input, format, out } => {
            let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let table = emit::from_json(&text)?;
            match out {
                Some(dir) => write_all(&table, &[format.into()], &dir),
                None => write_text(&emit::render(&table, format.into())?, None),
            }
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
