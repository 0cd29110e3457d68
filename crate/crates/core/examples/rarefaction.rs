//! How often a random plane curve has nearly maximal total Betti number.

use randci::harness::{run_rarefaction, ExperimentKind, ExperimentSpec};

fn main() -> randci::Result<()> {
    let mut spec = ExperimentSpec::new(ExperimentKind::Rarefaction);
    spec.factors = vec![2];
    spec.multidegrees = vec![vec![1]];
    spec.degrees = vec![4, 6];
    spec.trials = 300;
    spec.epsilon = Some(0.5);
    spec.jobs = 4;
    spec.validate()?;

    let report = run_rarefaction(&spec)?;
    for s in &report.summaries {
        println!(
            "d={}  bound {}  threshold {}  hits {}/{}  freq {:.4} [{:.4}, {:.4}]  mean betti {:.2}",
            s.d,
            s.bound,
            s.threshold,
            s.hits,
            s.trials - s.censored,
            s.frequency,
            s.ci_low,
            s.ci_high,
            s.mean_betti
        );
    }
    for h in report.histogram.iter().filter(|h| h.trials > 0) {
        println!("  d={} betti {} : {}", h.d, h.betti_total, h.trials);
    }
    Ok(())
}
