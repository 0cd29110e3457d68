//! Experiment drivers. Trials are keyed by `(seed, trial, degree)`, run on the current
//! rayon pool and collected in trial order, so outputs do not depend on the pool width.

use std::sync::Arc;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::spec::{ExperimentKind, ExperimentSpec};
use super::stats::{mean_se, wilson, Z95};
use crate::discriminant::{discriminant_distance, stability_check, tube_fraction, tube_samples, TubeFraction, Verdict};
use crate::error::{Error, Result};
use crate::intersection::{invariant_report, smith_thom_bound, InvariantReport};
use crate::kostlan::{c1_norm, sample, BasisSet, RealPoint, RngSeed, SearchParams, SectionSystem};
use crate::lowdeg::{multiply_by_sigma_power, subspace_basis, ResidualProfile, ResidualRow, SigmaSection};
use crate::topology::{measure_topology, TopologyProfile};

/// Runs `f` on a dedicated pool of `jobs` threads.
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Ok,
    NotTransversal,
    BudgetExceeded,
    Degenerate,
    Numerical,
}

impl TrialStatus {
    /// Status for an error that censors a trial; other errors abort the run.
    pub fn from_error(e: &Error) -> Option<Self> {
        match e {
            Error::NotTransversal => Some(Self::NotTransversal),
            Error::BudgetExceeded { .. } => Some(Self::BudgetExceeded),
            Error::Degenerate(_) => Some(Self::Degenerate),
            Error::Numerical(_) => Some(Self::Numerical),
            _ => None,
        }
    }

    pub fn censored(self) -> bool {
        self != Self::Ok
    }
}

/// One trial of a topology experiment. Censored trials carry no counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub degree: usize,
    pub status: TrialStatus,
    pub censored: bool,
    pub count: Option<usize>,
    pub betti_total: Option<usize>,
    /// Count for the low-degree approximation.
    pub approx_count: Option<usize>,
    pub distance_upper: Option<f64>,
    pub perturbation_c1: Option<f64>,
    pub verdict: Option<Verdict>,
    pub matched: Option<bool>,
}

impl TrialRecord {
    fn new(trial: u64, seed: u64, degree: usize) -> Self {
        TrialRecord {
            trial,
            seed,
            degree,
            status: TrialStatus::Ok,
            censored: false,
            count: None,
            betti_total: None,
            approx_count: None,
            distance_upper: None,
            perturbation_c1: None,
            verdict: None,
            matched: None,
        }
    }

    fn censor(mut self, status: TrialStatus) -> Self {
        self.status = status;
        self.censored = true;
        self.count = None;
        self.betti_total = None;
        self.approx_count = None;
        self.matched = None;
        self
    }
}

fn measure(s: &SectionSystem, budget: usize) -> Result<std::result::Result<TopologyProfile, TrialStatus>> {
    match measure_topology(s, budget) {
        Ok(p) => Ok(Ok(p)),
        Err(e) => TrialStatus::from_error(&e).map(Err).ok_or(e),
    }
}

fn space_for(spec: &ExperimentSpec, d: usize) -> Result<Arc<BasisSet>> {
    Ok(Arc::new(BasisSet::new(&spec.ambient()?, &spec.bundles(d)?)?))
}

fn trial_seed(spec: &ExperimentSpec, t: u64, d: usize) -> RngSeed {
    RngSeed::new(spec.seed, t, d as u64)
}

fn expect_kind(spec: &ExperimentSpec, kind: ExperimentKind) -> Result<()> {
    spec.validate()?;
    if spec.kind != kind {
        return Err(Error::InvalidConfig(format!("expected a {} spec, got {}", kind.name(), spec.kind.name())));
    }
    Ok(())
}

/// `ceil(x)` that treats values within rounding of an integer as that integer.
fn robust_ceil(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RarefactionSummary {
    pub d: usize,
    pub trials: usize,
    pub censored: usize,
    pub censor_rate: f64,
    pub numerical_failures: usize,
    pub bound: usize,
    pub threshold: usize,
    pub hits: usize,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_betti: f64,
    pub se_betti: f64,
    pub max_betti: usize,
    /// Certified profiles above the Smith–Thom bound; any nonzero value is a bug.
    pub bound_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub d: usize,
    pub betti_total: usize,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RarefactionReport {
    pub summaries: Vec<RarefactionSummary>,
    pub histogram: Vec<HistogramRow>,
    pub records: Vec<TrialRecord>,
}

impl RarefactionReport {
    pub fn numerical_failures(&self) -> usize {
        self.summaries.iter().map(|s| s.numerical_failures + s.bound_violations).sum()
    }
}

pub fn run_rarefaction(spec: &ExperimentSpec) -> Result<RarefactionReport> {
    expect_kind(spec, ExperimentKind::Rarefaction)?;
    let eps = spec.epsilon.expect("validated");
    let x = spec.ambient()?;
    let mut report = RarefactionReport { summaries: Vec::new(), histogram: Vec::new(), records: Vec::new() };
    for &d in &spec.degrees {
        let bundles = spec.bundles(d)?;
        let bound =
            smith_thom_bound(&x, &bundles)?.coeff(0).to_usize().ok_or(Error::Numerical("bound overflow".into()))?;
        let threshold = robust_ceil((1.0 - eps) * bound as f64);
        let space = space_for(spec, d)?;
        let records: Vec<TrialRecord> = (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                let s = sample(&space, trial_seed(spec, t, d));
                let rec = TrialRecord::new(t, spec.seed, d);
                Ok(match measure(&s, spec.budget)? {
                    Ok(p) => TrialRecord { count: Some(p.count), betti_total: Some(p.betti_total), ..rec },
                    Err(status) => rec.censor(status),
                })
            })
            .collect::<Result<_>>()?;
        let betti: Vec<usize> = records.iter().filter_map(|r| r.betti_total).collect();
        let censored = records.len() - betti.len();
        let numerical = records.iter().filter(|r| r.status == TrialStatus::Numerical).count();
        let hits = betti.iter().filter(|&&b| b >= threshold).count();
        let (lo, hi) = wilson(hits, betti.len(), Z95);
        let stats = mean_se(&betti.iter().map(|&b| b as f64).collect::<Vec<_>>());
        let max_betti = betti.iter().copied().max().unwrap_or(0);
        let mut hist = vec![0usize; max_betti.max(bound) + 1];
        for &b in &betti {
            hist[b] += 1;
        }
        report.histogram.extend(hist.into_iter().enumerate().map(|(b, n)| HistogramRow {
            d,
            betti_total: b,
            trials: n,
        }));
        report.summaries.push(RarefactionSummary {
            d,
            trials: records.len(),
            censored,
            censor_rate: censored as f64 / records.len() as f64,
            numerical_failures: numerical,
            bound,
            threshold,
            hits,
            frequency: if betti.is_empty() { 0.0 } else { hits as f64 / betti.len() as f64 },
            ci_low: lo,
            ci_high: hi,
            mean_betti: stats.mean,
            se_betti: stats.se,
            max_betti,
            bound_violations: betti.iter().filter(|&&b| b > bound).count(),
        });
        report.records.extend(records);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowdegSummary {
    pub d: usize,
    pub ell: usize,
    pub trials: usize,
    pub censored: usize,
    pub numerical_failures: usize,
    pub matches: usize,
    pub match_frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub safe: usize,
    pub safe_matches: usize,
    /// Matches among uncensored SAFE trials; empty when there are none.
    pub safe_match_frequency: Option<f64>,
    /// SAFE trials whose counts differ. Must be zero.
    pub safe_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowdegReport {
    pub summaries: Vec<LowdegSummary>,
    pub records: Vec<TrialRecord>,
}

impl LowdegReport {
    pub fn numerical_failures(&self) -> usize {
        self.summaries.iter().map(|s| s.numerical_failures + s.safe_violations).sum()
    }
}

fn lowdeg_trial(
    space: &Arc<BasisSet>,
    sigma: &SigmaSection,
    sub: &crate::lowdeg::SubspaceBasis,
    spec: &ExperimentSpec,
    params: &SearchParams,
    t: u64,
    d: usize,
) -> Result<TrialRecord> {
    let s = sample(space, trial_seed(spec, t, d));
    let rec = TrialRecord::new(t, spec.seed, d);
    let low = match sub.approx(&s) {
        Ok(low) => low,
        Err(Error::Numerical(_)) => return Ok(rec.censor(TrialStatus::Numerical)),
        Err(e) => return Err(e),
    };
    let lifted = multiply_by_sigma_power(&low, sigma, sub.ell())?;
    let stab = stability_check(&s, &lifted, params)?;
    let rec = TrialRecord {
        distance_upper: Some(stab.distance_upper),
        perturbation_c1: Some(stab.perturbation_c1),
        verdict: Some(stab.verdict),
        ..rec
    };
    let a = match measure(&s, spec.budget)? {
        Ok(p) => p,
        Err(status) => return Ok(rec.censor(status)),
    };
    let b = match measure(&low, spec.budget)? {
        Ok(p) => p,
        Err(status) => return Ok(rec.censor(status)),
    };
    Ok(TrialRecord {
        count: Some(a.count),
        betti_total: Some(a.betti_total),
        approx_count: Some(b.count),
        matched: Some(a.count == b.count),
        ..rec
    })
}

pub fn run_lowdeg_match(spec: &ExperimentSpec) -> Result<LowdegReport> {
    expect_kind(spec, ExperimentKind::LowdegMatch)?;
    let x = spec.ambient()?;
    let mode = spec.ell_mode()?;
    let params = spec.search()?;
    let mut report = LowdegReport { summaries: Vec::new(), records: Vec::new() };
    for &d in &spec.degrees {
        let space = space_for(spec, d)?;
        let sigma = SigmaSection::new(&x, space.bundles(), spec.sigma_power)?;
        let ell = mode.ell(d);
        let sub = subspace_basis(&space, &sigma, ell)?;
        let records: Vec<TrialRecord> = (0..spec.trials)
            .into_par_iter()
            .map(|t| lowdeg_trial(&space, &sigma, &sub, spec, &params, t, d))
            .collect::<Result<_>>()?;
        let observed: Vec<&TrialRecord> = records.iter().filter(|r| !r.censored).collect();
        let matches = observed.iter().filter(|r| r.matched == Some(true)).count();
        let safe: Vec<&&TrialRecord> = observed.iter().filter(|r| r.verdict == Some(Verdict::Safe)).collect();
        let safe_matches = safe.iter().filter(|r| r.matched == Some(true)).count();
        let (lo, hi) = wilson(matches, observed.len(), Z95);
        report.summaries.push(LowdegSummary {
            d,
            ell,
            trials: records.len(),
            censored: records.len() - observed.len(),
            numerical_failures: records.iter().filter(|r| r.status == TrialStatus::Numerical).count(),
            matches,
            match_frequency: if observed.is_empty() { 0.0 } else { matches as f64 / observed.len() as f64 },
            ci_low: lo,
            ci_high: hi,
            safe: safe.len(),
            safe_matches,
            safe_match_frequency: (!safe.is_empty()).then(|| safe_matches as f64 / safe.len() as f64),
            safe_violations: safe.len() - safe_matches,
        });
        report.records.extend(records);
    }
    Ok(report)
}

/// Default radius fractions for tube runs without explicit radii.
pub const DEFAULT_RADII: [f64; 8] = [0.0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeRecord {
    pub trial: u64,
    pub seed: u64,
    pub norm: f64,
    pub distance_upper: f64,
    pub argmin: RealPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeRow {
    pub d: usize,
    #[serde(flatten)]
    pub fraction: TubeFraction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TubeReport {
    pub summary: Vec<TubeRow>,
    /// Per-degree trial records, in the order of the spec's degrees.
    pub records: Vec<(usize, Vec<TubeRecord>)>,
}

pub fn run_tube(spec: &ExperimentSpec) -> Result<TubeReport> {
    expect_kind(spec, ExperimentKind::Tube)?;
    let params = spec.search()?;
    let radii: Vec<f64> = if spec.radii.is_empty() { DEFAULT_RADII.to_vec() } else { spec.radii.clone() };
    let mut report = TubeReport { summary: Vec::new(), records: Vec::new() };
    for &d in &spec.degrees {
        let space = space_for(spec, d)?;
        let samples = tube_samples(&space, spec.trials, spec.seed, &params)?;
        for &r in &radii {
            report.summary.push(TubeRow { d, fraction: tube_fraction(&samples, r) });
        }
        let recs = samples
            .into_iter()
            .map(|s| TubeRecord {
                trial: s.trial,
                seed: s.seed,
                norm: s.norm,
                distance_upper: s.estimate.distance_upper,
                argmin: s.estimate.argmin,
            })
            .collect();
        report.records.push((d, recs));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxRecord {
    pub trial: u64,
    pub seed: u64,
    pub d: usize,
    pub ell: usize,
    pub status: TrialStatus,
    /// `|s_perp|_{C¹} / |s|_{L²}`.
    pub residual: f64,
    pub perp_c1: f64,
    pub s: Vec<Vec<f64>>,
    pub s0: Vec<Vec<f64>>,
    pub s_prime: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub profile: ResidualProfile,
    pub records: Vec<ApproxRecord>,
}

impl ResidualReport {
    pub fn numerical_failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == TrialStatus::Numerical).count()
    }
}

pub fn run_residual(spec: &ExperimentSpec) -> Result<ResidualReport> {
    expect_kind(spec, ExperimentKind::Residual)?;
    let x = spec.ambient()?;
    let mode = spec.ell_mode()?;
    let params = spec.search()?;
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for &d in &spec.degrees {
        let space = space_for(spec, d)?;
        let sigma = SigmaSection::new(&x, space.bundles(), spec.sigma_power)?;
        let ell = mode.ell(d);
        let sub = subspace_basis(&space, &sigma, ell)?;
        let records: Vec<ApproxRecord> = (0..spec.trials)
            .into_par_iter()
            .map(|t| {
                let s = sample(&space, trial_seed(spec, t, d));
                let (s0, perp) = sub.project(&s)?;
                let perp_c1 = c1_norm(&perp, &params)?.value;
                let (status, s_prime) = match sub.divide(&s0) {
                    Ok(q) => (TrialStatus::Ok, Some(q.coeffs().to_vec())),
                    Err(Error::Numerical(_)) => (TrialStatus::Numerical, None),
                    Err(e) => return Err(e),
                };
                Ok(ApproxRecord {
                    trial: t,
                    seed: spec.seed,
                    d,
                    ell,
                    status,
                    residual: perp_c1 / s.norm_l2(),
                    perp_c1,
                    s: s.coeffs().to_vec(),
                    s0: s0.coeffs().to_vec(),
                    s_prime,
                })
            })
            .collect::<Result<_>>()?;
        let res: Vec<f64> = records.iter().map(|r| r.residual).collect();
        rows.push(ResidualRow::from_values(d, ell, &res));
        all.extend(records);
    }
    Ok(ResidualReport { profile: ResidualProfile::from_rows(rows), records: all })
}

/// Symbolic report when the spec has no degrees, otherwise one report per degree.
pub fn run_invariants(spec: &ExperimentSpec) -> Result<Vec<InvariantReport>> {
    expect_kind(spec, ExperimentKind::Invariants)?;
    let x = spec.ambient()?;
    if spec.degrees.is_empty() {
        return Ok(vec![invariant_report(&x, &spec.symbolic_bundles()?)?]);
    }
    spec.degrees.iter().map(|&d| invariant_report(&x, &spec.bundles(d)?)).collect()
}

/// Topology of given sections, one row each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyRow {
    pub index: usize,
    pub status: TrialStatus,
    pub censored: bool,
    #[serde(flatten)]
    pub profile: Option<TopologyProfile>,
}

pub fn topology_rows(sections: &[SectionSystem], budget: usize) -> Result<Vec<TopologyRow>> {
    sections
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            Ok(match measure(s, budget)? {
                Ok(p) => TopologyRow { index, status: TrialStatus::Ok, censored: false, profile: Some(p) },
                Err(status) => TopologyRow { index, status, censored: true, profile: None },
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRow {
    pub index: usize,
    pub norm: f64,
    pub distance_upper: f64,
    pub grid_spacing: f64,
    pub jet_distance_at_argmin: f64,
    pub argmin: RealPoint,
}

pub fn distance_rows(sections: &[SectionSystem], params: &SearchParams) -> Result<Vec<DistanceRow>> {
    sections
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            let est = discriminant_distance(s, params)?;
            let fiber = crate::discriminant::fiber_distance(s, &est.argmin)?;
            Ok(DistanceRow {
                index,
                norm: s.norm_l2(),
                distance_upper: est.distance_upper,
                grid_spacing: est.grid_spacing,
                jet_distance_at_argmin: fiber.jet_distance,
                argmin: est.argmin,
            })
        })
        .collect()
}
