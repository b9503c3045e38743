//! Command-line front end: solve a configured case, re-check a saved field
//! table, or report section geometry.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shellsv::config::{parse_config, parse_psi_variant, RunConfig, RunMode};
use shellsv::runner::{run_case, section_case, verify_case, write_artifacts};

#[derive(Parser)]
#[command(
    name = "shellsv",
    about = "Closed-form extension, bending, torsion and flexure of thin shell tubes, \
             with built-in numerical verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the run mode (exact | thin | circular | all).
    #[arg(long)]
    mode: Option<String>,
    /// Override the arc grid size.
    #[arg(long = "grid-s")]
    grid_s: Option<usize>,
    /// Override the axial station count.
    #[arg(long = "grid-z")]
    grid_z: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the circular warping-coefficient variant
    /// (corollary | flexure-fn).
    #[arg(long = "psi-variant")]
    psi_variant: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: solve, verify, write tables and summary.
    Solve(CommonArgs),
    /// Re-check a saved field table against the configuration.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Path to the field table to re-check.
        #[arg(long)]
        table: PathBuf,
    },
    /// Report section geometry only.
    Section(CommonArgs),
}

fn load_config(common: &CommonArgs) -> Result<RunConfig, String> {
    let text = fs::read_to_string(&common.config)
        .map_err(|e| format!("cannot read {}: {e}", common.config.display()))?;
    let mut config = parse_config(&text).map_err(|e| e.to_string())?;
    if let Some(mode) = &common.mode {
        config.mode = RunMode::parse(mode).map_err(|e| e.to_string())?;
    }
    if let Some(n) = common.grid_s {
        if n < shellsv::curve::MIN_GRID || n % 2 != 0 {
            return Err(format!("--grid-s {n} must be an even count >= 64"));
        }
        config.grid_s = n;
    }
    if let Some(n) = common.grid_z {
        if n < 2 {
            return Err("--grid-z must be at least 2".to_owned());
        }
        config.grid_z = n;
    }
    if let Some(v) = &common.psi_variant {
        config.psi_variant = parse_psi_variant(v).map_err(|e| e.to_string())?;
    }
    if let Some(dir) = &common.out {
        config.output.dir = dir.display().to_string();
    }
    if config.mode == RunMode::Circular && config.section.kind != "circle" {
        return Err("circular mode requires a circle section".to_owned());
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(common) => load_config(common).and_then(|config| {
            let artifacts = run_case(&config).map_err(|e| e.to_string())?;
            let dir = PathBuf::from(&config.output.dir);
            if config.output.summary || config.output.tables {
                let path = write_artifacts(&artifacts, &dir).map_err(|e| e.to_string())?;
                eprintln!("wrote {}", path.display());
                for (name, _) in &artifacts.tables {
                    eprintln!("wrote {}", dir.join(name).display());
                }
            }
            print!("{}", artifacts.summary_text);
            Ok(artifacts.gates_passed)
        }),
        Command::Verify { common, table } => load_config(common).and_then(|config| {
            let text = fs::read_to_string(table)
                .map_err(|e| format!("cannot read {}: {e}", table.display()))?;
            let (summary, passed) = verify_case(&config, &text).map_err(|e| e.to_string())?;
            if config.output.summary {
                let dir = PathBuf::from(&config.output.dir);
                fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
                let path = dir.join("verify.toml");
                fs::write(&path, &summary).map_err(|e| e.to_string())?;
                eprintln!("wrote {}", path.display());
            }
            print!("{summary}");
            Ok(passed)
        }),
        Command::Section(common) => load_config(common).and_then(|config| {
            let summary = section_case(&config).map_err(|e| e.to_string())?;
            print!("{summary}");
            Ok(true)
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("residual gates exceeded");
            ExitCode::FAILURE
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
