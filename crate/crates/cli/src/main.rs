//! `isoasym`: Frenet tables, isoasymptotic verification and mesh export for
//! hypersurface families in R⁴.
//!
//! Exit status is 0 on success, 1 when a family fails verification and 2 on
//! bad input (unreadable or invalid configuration, degenerate curve, ...).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use isoasym_core::viz::{export_csv, fmt_sig};
use isoasym_core::{
    builtin, export_mesh, frenet_apparatus, load_config, slice_surface, Config, FixedParam,
    Projection, BUILTIN_NAMES,
};

#[derive(Parser)]
#[command(name = "isoasym", version, about = "Hypersurface families in R^4 sharing an isoasymptotic curve")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the Frenet apparatus along the curve
    Frenet {
        #[command(flatten)]
        source: Source,
        /// number of s samples (default: grid.frenet_samples)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Decide whether the curve is an isoasymptotic of the family; prints a JSON report
    Verify {
        #[command(flatten)]
        source: Source,
        /// number of s grid points (default: grid.n_s)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Export a projected 2-parameter slice as Wavefront OBJ
    Mesh {
        #[command(flatten)]
        source: Source,
        /// parameter held fixed, e.g. q=0 (default: mesh.fix)
        #[arg(long)]
        fix: Option<FixedParam>,
        /// projection to 3-space, e.g. drop:4 (default: mesh.project)
        #[arg(long)]
        project: Option<Projection>,
        /// samples per free parameter (default: grid.mesh)
        #[arg(long)]
        samples: Option<usize>,
        /// OBJ output path
        #[arg(long)]
        out: PathBuf,
        /// also write a CSV vertex dump
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a builtin configuration, or write all of them into a directory
    Example {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BUILTIN_NAMES))]
        name: Option<String>,
        /// directory for <name>.json files
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// builtin family
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(BUILTIN_NAMES))]
    name: Option<String>,
}

impl Source {
    fn load(&self) -> Result<Config> {
        match (&self.config, &self.name) {
            (Some(path), _) => Ok(load_config(path)?),
            (None, Some(name)) => Ok(builtin(name).expect("name checked by clap")),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

fn frenet(source: &Source, samples: Option<usize>) -> Result<bool> {
    let cfg = source.load()?;
    let family = cfg.build()?;
    let n = samples.unwrap_or(cfg.grid.frenet_samples);
    if n == 0 {
        bail!("--samples must be positive");
    }
    let mut out = io::stdout().lock();
    let mut header = vec!["s".to_string(), "kappa1".into(), "kappa2".into(), "kappa3".into()];
    for v in ["T", "N", "B1", "B2"] {
        header.extend((1..=4).map(|i| format!("{v}_{i}")));
    }
    writeln!(out, "{}", header.join("\t"))?;
    for s in family.curve().interval().samples(n) {
        let f = frenet_apparatus(family.curve(), s)?;
        let mut row: Vec<f64> = vec![s, f.kappa1, f.kappa2, f.kappa3];
        for v in f.frame() {
            row.extend(v.0);
        }
        let cells: Vec<String> = row.iter().map(|&x| fmt_sig(x, 9)).collect();
        writeln!(out, "{}", cells.join("\t"))?;
    }
    Ok(true)
}

fn verify(source: &Source, samples: Option<usize>) -> Result<bool> {
    let cfg = source.load()?;
    let family = cfg.build()?;
    let n = samples.unwrap_or(cfg.grid.n_s);
    if n < 2 {
        bail!("--samples must be at least 2");
    }
    let report = family.verify(n, cfg.tolerances.tol, cfg.tolerances.tol_nondeg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report.isoasymptotic)
}

struct MeshArgs<'a> {
    fix: Option<FixedParam>,
    project: Option<Projection>,
    samples: Option<usize>,
    out: &'a Path,
    csv: Option<&'a Path>,
}

fn mesh(source: &Source, args: MeshArgs) -> Result<bool> {
    let cfg = source.load()?;
    let family = cfg.build()?;
    let fix = args.fix.or(cfg.mesh.fix).context("no fixed parameter: pass --fix or set mesh.fix")?;
    let project = args
        .project
        .or(cfg.mesh.project)
        .context("no projection: pass --project or set mesh.project")?;
    let grid = match args.samples {
        Some(n) if n < 2 => bail!("--samples must be at least 2"),
        Some(n) => (n, n),
        None => (cfg.grid.mesh[0], cfg.grid.mesh[1]),
    };
    let mesh = slice_surface(&family, fix, grid, project)?;
    export_mesh(&mesh, args.out)?;
    if let Some(csv) = args.csv {
        export_csv(&mesh, csv)?;
    }
    eprintln!(
        "wrote {} ({} vertices, {} quads)",
        args.out.display(),
        mesh.vertices.len(),
        mesh.quads.len()
    );
    Ok(true)
}

fn example(name: Option<&str>, out: Option<&Path>) -> Result<bool> {
    match (name, out) {
        (Some(name), None) => println!("{}", builtin(name).expect("name checked by clap").to_json()),
        (names, Some(dir)) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let names: Vec<&str> = names.map_or(BUILTIN_NAMES.to_vec(), |n| vec![n]);
            for name in names {
                let path = dir.join(format!("{name}.json"));
                let json = builtin(name).expect("builtin name").to_json();
                fs::write(&path, json + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
        }
        (None, None) => bail!("pass --name or --out"),
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Frenet { source, samples } => frenet(&source, samples),
        Command::Verify { source, samples } => verify(&source, samples),
        Command::Mesh { source, fix, project, samples, out, csv } => mesh(
            &source,
            MeshArgs { fix, project, samples, out: &out, csv: csv.as_deref() },
        ),
        Command::Example { name, out } => example(name.as_deref(), out.as_deref()),
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
