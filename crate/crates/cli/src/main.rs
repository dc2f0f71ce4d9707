use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use caustics_cli::{compute_document, prepare_document, render, serve, Format};
use caustics_core::scene::Layer;
use caustics_core::verify::run_verify;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "caustics", version, about = "Caustics of plane mirror curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SceneArgs {
    /// Scene document (TOML or JSON).
    #[arg(long)]
    scene: PathBuf,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the number of grid points.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, value_enum, default_value = "data")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the layers requested by the scene.
    Compute(SceneArgs),
    /// Second envelope of the focal circles.
    Beta(SceneArgs),
    /// Rolling focal circles and the no-slip check.
    Roll(SceneArgs),
    /// Caustic components, cusps and asymptotes.
    Cusps(SceneArgs),
    /// Render the scene as SVG.
    Render(SceneArgs),
    /// Run the acceptance fixtures; `all` by default.
    Verify {
        /// Criterion ids (1-8) or names.
        fixtures: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the compute service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("writing stdout"),
            }
        }
    }
}

fn batch(args: SceneArgs, layers: Option<&[Layer]>, format: Option<Format>) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.scene).with_context(|| format!("reading {}", args.scene.display()))?;
    let doc = prepare_document(&text, args.grid, layers)?;
    let payload = compute_document(doc)?;
    emit(args.out.as_ref(), &render(&payload, format.unwrap_or(args.format))?)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Compute(args) => batch(args, None, None)?,
        Command::Beta(args) => batch(args, Some(&[Layer::Alpha, Layer::Beta]), None)?,
        Command::Roll(args) => batch(args, Some(&[Layer::Alpha, Layer::Caustic, Layer::RollingFrames]), None)?,
        Command::Cusps(args) => {
            batch(args, Some(&[Layer::Alpha, Layer::Caustic, Layer::Cusps, Layer::Asymptotes]), None)?
        }
        Command::Render(args) => batch(args, None, Some(Format::Svg))?,
        Command::Verify { fixtures, out } => {
            let selection: Vec<&str> = if fixtures.is_empty() {
                vec!["all"]
            } else {
                fixtures.iter().map(String::as_str).collect()
            };
            let report = run_verify(&selection)?;
            for c in &report.criteria {
                eprintln!("{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name);
            }
            emit(out.as_ref(), &report.to_json())?;
            return Ok(report.passed);
        }
        Command::Serve { port } => {
            tokio::runtime::Runtime::new()?.block_on(serve(port))?;
        }
    }
    Ok(true)
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
