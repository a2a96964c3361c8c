mod config;
mod output;
mod scenario;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use config::{ConfigError, Format, Scenario};
use output::{sha256_hex, write_atomic, Manifest, Versions};

const EXIT_NUMERICAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

/// Curvature estimates for minimal graphs of codimension two and higher.
#[derive(Parser, Debug)]
#[command(name = "mgcl", version)]
struct Cli {
    scenario: Scenario,
    /// TOML scenario configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `numeric.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of csv,json,svg; overrides `output.formats`.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
}

fn thread_count() -> Result<usize, ConfigError> {
    let n = match std::env::var("MGCL_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| ConfigError(format!("MGCL_THREADS must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError(format!("cannot configure thread pool: {e}")))?;
    Ok(rayon::current_num_threads())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let threads = match thread_count() {
        Ok(t) => t,
        Err(err) => {
            eprintln!("{err}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let text = match std::fs::read(&cli.config) {
        Ok(t) => t,
        Err(err) => {
            eprintln!("config error: cannot read {}: {err}", cli.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let parsed = std::str::from_utf8(&text)
        .map_err(|_| ConfigError("config is not valid UTF-8".into()))
        .and_then(config::parse);
    let mut cfg = match parsed {
        Ok(c) => c,
        Err(err) => {
            eprintln!("{err}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.numeric.seed = seed;
    }
    if let Some(dir) = cli.out {
        cfg.output.directory = dir;
    }
    if let Some(formats) = cli.format {
        cfg.output.formats = formats;
    }
    if let Err(err) = cfg.validate(cli.scenario) {
        eprintln!("{err}");
        return ExitCode::from(EXIT_CONFIG);
    }

    let dir = cfg.output.directory.clone();
    let mut files = Vec::new();
    let mut warnings = Vec::new();
    let mut error = None;
    let write = |name: &str, contents: &[u8], files: &mut Vec<String>| -> bool {
        match write_atomic(&dir, name, contents) {
            Ok(_) => {
                files.push(name.to_string());
                true
            }
            Err(err) => {
                eprintln!("error: cannot write {}: {err}", dir.join(name).display());
                false
            }
        }
    };

    let mut code = 0;
    match scenario::run(cli.scenario, &cfg) {
        Ok(artifacts) => {
            for line in &artifacts.summary {
                println!("{line}");
            }
            for (name, format, contents) in &artifacts.files {
                if cfg.output.formats.contains(format) && !write(name, contents.as_bytes(), &mut files) {
                    code = EXIT_NUMERICAL;
                }
            }
            if let (Some(plot), true) = (&artifacts.plot, cfg.output.formats.contains(&Format::Svg)) {
                let name = format!("{}.svg", cli.scenario.name());
                match svg::render(&plot.points, &plot.style) {
                    Some(svg) => {
                        if !write(&name, svg.as_bytes(), &mut files) {
                            code = EXIT_NUMERICAL;
                        }
                    }
                    None => {
                        let w = format!("no plottable data; {name} not written");
                        eprintln!("warning: {w}");
                        warnings.push(w);
                    }
                }
            }
            if let Some(f) = artifacts.failure {
                eprintln!("error: {f}");
                error = Some(f);
                code = EXIT_NUMERICAL;
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            error = Some(err);
            code = EXIT_NUMERICAL;
        }
    }

    let manifest = Manifest {
        scenario: cli.scenario.name().to_string(),
        config_path: cli.config.display().to_string(),
        config_sha256: sha256_hex(&text),
        seed: cfg.numeric.seed,
        versions: Versions {
            mgcl: env!("CARGO_PKG_VERSION"),
            mgcl_core: mgcl_core::VERSION,
        },
        threads,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        exit_code: code,
        files: files.clone(),
        warnings,
        error,
    };
    match serde_json::to_string_pretty(&manifest) {
        Ok(mut m) => {
            m.push('\n');
            if !write("manifest.json", m.as_bytes(), &mut files) {
                code = EXIT_NUMERICAL;
            }
        }
        Err(err) => {
            eprintln!("error: cannot serialize manifest: {err}");
            code = EXIT_NUMERICAL;
        }
    }
    ExitCode::from(code)
}
