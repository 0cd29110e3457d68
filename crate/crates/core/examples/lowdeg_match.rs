//! Compares root counts of a section and its low-degree approximation, split by whether
//! the stability test certified the pair.

use randci::harness::{run_lowdeg_match, ExperimentKind, ExperimentSpec};

fn main() -> randci::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::LowdegMatch);
    spec.factors = vec![1];
    spec.multidegrees = vec![vec![1]];
    spec.degrees = vec![20, 30];
    spec.ell = Some(1);
    spec.trials = 100;
    spec.jobs = 4;
    spec.validate()?;

    let report = run_lowdeg_match(&spec)?;
    for s in &report.summaries {
        println!(
            "d={} ell={}  matches {}/{}  safe {}  safe matches {}  violations {}",
            s.d,
            s.ell,
            s.matches,
            s.trials - s.censored,
            s.safe,
            s.safe_matches,
            s.safe_violations
        );
    }
    Ok(())
}
