use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use randci::harness::{
    distance_rows, run_invariants, run_lowdeg_match, run_rarefaction, run_residual, run_tube, topology_rows, with_pool,
    ExperimentKind, ExperimentSpec, OutputDir, OutputFormat, Table,
};
use randci::kostlan::{read_records, sample, BasisSet, RngSeed, SectionRecord, SectionSystem};
use randci::Error;

#[derive(Parser)]
#[command(
    name = "randci",
    version,
    about = "Random real complete intersections: invariants, sampling and Monte Carlo studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML experiment description; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory (default `randci-out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Projective factor dimensions, e.g. `1,1`.
    #[arg(long, global = true, value_delimiter = ',')]
    factors: Option<Vec<usize>>,
    /// Bundle multidegrees, rows separated by `;`, e.g. `1;1` or `1,1;1,2`.
    #[arg(long, global = true)]
    multidegrees: Option<String>,
    #[arg(long, global = true, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    #[arg(long, global = true)]
    ell: Option<usize>,
    #[arg(long, global = true)]
    t: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true)]
    resolution: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Euler characteristic, Betti numbers and discriminant data.
    Invariants,
    /// Draw Kostlan sections and serialize them.
    Sample {
        /// Write the binary little-endian format instead of JSON lines.
        #[arg(long)]
        binary: bool,
    },
    /// Measure real zero loci of serialized (or freshly sampled) sections.
    Topology {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Distance to the real discriminant for each section.
    Distance {
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Tube fractions around the discriminant.
    Tube,
    /// Residual of the low-degree approximation.
    Approx,
    /// Frequency of near-maximal real loci.
    Rarefaction,
    /// Topology of a section against its low-degree approximation.
    LowdegMatch,
}

fn parse_rows(text: &str) -> Result<Vec<Vec<usize>>, Error> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|e| Error::InvalidConfig(format!("multidegrees: {e}"))))
                .collect()
        })
        .collect()
}

fn build_spec(c: &Common, kind: Option<ExperimentKind>) -> Result<ExperimentSpec, Error> {
    let mut spec = match &c.config {
        Some(p) => ExperimentSpec::from_path(p)?,
        None => ExperimentSpec::new(kind.unwrap_or(ExperimentKind::Invariants)),
    };
    if let Some(k) = kind {
        if c.config.is_some() && spec.kind != k {
            return Err(Error::InvalidConfig(format!("config is a {} spec, not {}", spec.kind.name(), k.name())));
        }
    }
    macro_rules! set {
        ($($f:ident),*) => { $(if let Some(v) = c.$f.clone() { spec.$f = v; })* };
    }
    set!(seed, trials, jobs, format, factors, degrees, radii, budget, resolution);
    if let Some(v) = c.ell {
        spec.ell = Some(v);
        spec.t = None;
    }
    if let Some(v) = c.t {
        spec.t = Some(v);
        spec.ell = None;
    }
    if let Some(v) = c.epsilon {
        spec.epsilon = Some(v);
    }
    if let Some(m) = &c.multidegrees {
        spec.multidegrees = parse_rows(m)?;
    }
    if let Some(o) = &c.out {
        spec.out = Some(o.display().to_string());
    }
    Ok(spec)
}

fn out_dir(spec: &ExperimentSpec) -> Result<OutputDir, Error> {
    OutputDir::create(spec.out.clone().unwrap_or_else(|| "randci-out".into()), spec.format)
}

fn sampled_sections(spec: &ExperimentSpec) -> Result<Vec<SectionSystem>, Error> {
    let mut out = Vec::new();
    for &d in &spec.degrees {
        let space = Arc::new(BasisSet::new(&spec.ambient()?, &spec.bundles(d)?)?);
        out.extend((0..spec.trials).map(|t| sample(&space, RngSeed::new(spec.seed, t, d as u64))));
    }
    Ok(out)
}

fn load_sections(input: &Option<PathBuf>, spec: &ExperimentSpec) -> Result<Vec<SectionSystem>, Error> {
    match input {
        Some(p) => {
            let bytes =
                std::fs::read(p).map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", p.display())))?;
            read_records(&bytes)?.iter().map(SectionRecord::to_section).collect()
        }
        None => {
            spec.validate_sections()?;
            sampled_sections(spec)
        }
    }
}

fn table<T: serde::Serialize>(rows: &[T]) -> Result<Table, Error> {
    Table::from_rows(rows)
}

/// Runs one command and returns the number of numerical failures reported.
fn run(cli: &Cli) -> Result<usize, Error> {
    let c = &cli.common;
    let kind = match cli.command {
        Command::Invariants => Some(ExperimentKind::Invariants),
        Command::Tube => Some(ExperimentKind::Tube),
        Command::Approx => Some(ExperimentKind::Residual),
        Command::Rarefaction => Some(ExperimentKind::Rarefaction),
        Command::LowdegMatch => Some(ExperimentKind::LowdegMatch),
        _ => None,
    };
    let spec = build_spec(c, kind)?;
    match kind {
        Some(_) => spec.validate()?,
        None if matches!(cli.command, Command::Sample { .. }) => spec.validate_sections()?,
        None => {}
    }
    with_pool(spec.jobs, || execute(cli, &spec))?
}

fn execute(cli: &Cli, spec: &ExperimentSpec) -> Result<usize, Error> {
    let mut out = out_dir(spec)?;
    let name = match &cli.command {
        Command::Invariants => "invariants",
        Command::Sample { .. } => "sample",
        Command::Topology { .. } => "topology",
        Command::Distance { .. } => "distance",
        Command::Tube => "tube",
        Command::Approx => "approx",
        Command::Rarefaction => "rarefaction",
        Command::LowdegMatch => "lowdeg-match",
    };
    let failures = match &cli.command {
        Command::Invariants => {
            let reports = run_invariants(spec)?;
            for r in &reports {
                println!("{r}");
            }
            out.write_json("invariants.json", &reports)?;
            0
        }
        Command::Sample { binary } => {
            let sections = sampled_sections(spec)?;
            let records: Vec<SectionRecord> =
                sections.iter().map(SectionRecord::from_section).collect::<Result<_, _>>()?;
            if *binary {
                let mut bytes = Vec::new();
                for r in &records {
                    r.write_binary(&mut bytes).map_err(|e| Error::InvalidRecord(e.to_string()))?;
                }
                out.write_bytes("sections.bin", &bytes)?;
            } else {
                let text: String = records.iter().map(|r| r.to_json_line() + "\n").collect();
                out.write_bytes("sections.jsonl", text.as_bytes())?;
            }
            println!("wrote {} sections to {}", records.len(), out.path().display());
            0
        }
        Command::Topology { input } => {
            let rows = topology_rows(&load_sections(input, spec)?, spec.budget)?;
            let censored = rows.iter().filter(|r| r.censored).count();
            println!("{} sections, {} censored", rows.len(), censored);
            out.write_table("topology", &table(&rows)?)?;
            rows.iter().filter(|r| r.status == randci::harness::TrialStatus::Numerical).count()
        }
        Command::Distance { input } => {
            let rows = distance_rows(&load_sections(input, spec)?, &spec.search()?)?;
            for r in &rows {
                println!("section {}: distance <= {:.6e} (norm {:.6e})", r.index, r.distance_upper, r.norm);
            }
            out.write_table("distance", &table(&rows)?)?;
            0
        }
        Command::Tube => {
            let rep = run_tube(spec)?;
            for (d, recs) in &rep.records {
                out.write_table(&format!("tube_d{d}"), &table(recs)?)?;
            }
            for row in &rep.summary {
                let f = &row.fraction;
                println!(
                    "d={} r={} fraction={:.4} [{:.4}, {:.4}]",
                    row.d, f.radius_fraction, f.fraction, f.ci_low, f.ci_high
                );
            }
            out.write_table("tube_summary", &table(&rep.summary)?)?;
            0
        }
        Command::Approx => {
            let rep = run_residual(spec)?;
            for r in &rep.profile.rows {
                println!("d={} ell={} mean={:.4e} max={:.4e}", r.d, r.ell, r.mean, r.max);
            }
            if let Some(f) = rep.profile.fit_linear {
                println!("log residual vs d: slope {:.4} r2 {:.4}", f.slope, f.r2);
            }
            out.write_table("residuals", &table(&rep.profile.rows)?)?;
            out.write_json("residual_fits.json", &rep.profile)?;
            let lines: String =
                rep.records.iter().map(|r| serde_json::to_string(r).expect("record serializes") + "\n").collect();
            out.write_bytes("approx_records.jsonl", lines.as_bytes())?;
            rep.numerical_failures()
        }
        Command::Rarefaction => {
            let rep = run_rarefaction(spec)?;
            for s in &rep.summaries {
                println!(
                    "d={} threshold={} of {}: {}/{} ({:.4} [{:.4}, {:.4}]), mean betti {:.4} ± {:.4}, censored {}",
                    s.d,
                    s.threshold,
                    s.bound,
                    s.hits,
                    s.trials - s.censored,
                    s.frequency,
                    s.ci_low,
                    s.ci_high,
                    s.mean_betti,
                    s.se_betti,
                    s.censored
                );
            }
            out.write_table("rarefaction_summary", &table(&rep.summaries)?)?;
            out.write_table("rarefaction_histogram", &table(&rep.histogram)?)?;
            out.write_table("rarefaction_trials", &table(&rep.records)?)?;
            rep.numerical_failures()
        }
        Command::LowdegMatch => {
            let rep = run_lowdeg_match(spec)?;
            for s in &rep.summaries {
                println!(
                    "d={} ell={}: match {:.4} [{:.4}, {:.4}], SAFE {} with {} violations, censored {}",
                    s.d, s.ell, s.match_frequency, s.ci_low, s.ci_high, s.safe, s.safe_violations, s.censored
                );
            }
            out.write_table("lowdeg_summary", &table(&rep.summaries)?)?;
            out.write_table("lowdeg_trials", &table(&rep.records)?)?;
            rep.numerical_failures()
        }
    };
    out.finish(spec, name, failures)?;
    Ok(failures)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(n) => {
            eprintln!("numerical failures reported: {n}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numerical(_) => ExitCode::from(3),
                Error::InvalidConfig(_)
                | Error::InvalidAmbient(_)
                | Error::InvalidBundles(_)
                | Error::InvalidRecord(_)
                | Error::Overdetermined { .. }
                | Error::DegreeUnderflow { .. }
                | Error::SymbolicDegree
                | Error::Unsupported(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
