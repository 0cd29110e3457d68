//! Runs a tube experiment from a TOML description and writes the tables and manifest
//! that the command-line tool would produce.

use randci::harness::{run_tube, ExperimentSpec, OutputDir, Table};

const CONFIG: &str = r#"
kind = "tube"
factors = [1]
multidegrees = [[1]]
degrees = [6]
trials = 200
seed = 17
radii = [0.01, 0.05, 0.1]
jobs = 2
format = "csv"
"#;

fn main() -> randci::Result<()> {
    let spec = ExperimentSpec::from_toml(CONFIG)?;
    spec.validate()?;
    let report = run_tube(&spec)?;

    let dir = std::env::temp_dir().join("randci-example-tube");
    let mut out = OutputDir::create(&dir, spec.format)?;
    let summary = Table::from_rows(&report.summary)?;
    print!("{}", String::from_utf8_lossy(&summary.to_csv()?));
    out.write_table("tube_summary", &summary)?;
    for (d, records) in &report.records {
        out.write_table(&format!("tube_d{d}"), &Table::from_rows(records)?)?;
    }
    out.finish(&spec, "tube", 0)?;
    println!("wrote {}", dir.display());
    Ok(())
}
