//! Monte Carlo simulation of the block-Markov superposition schemes over
//! Gaussian channels, with exhaustive minimum-distance decoding in place
//! of joint typicality.

mod codebook;
mod schemes;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{type2_relay_coherence, GaussianError, GaussianParams, Type1Aux, Type2Aux};
use crate::geometry::RatePair;
use crate::info::DegradationType;

/// Largest number of message bits any single decoding step may enumerate.
pub const MAX_DECODE_BITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("rate {rate} bits/use times n = {n} is not a whole number of bits")]
    RateGranularity { rate: f64, n: usize },
    #[error("{bits} message bits per block exceed the decoder limit of {MAX_DECODE_BITS}")]
    TooManyBits { bits: u32 },
    #[error("scheme {scheme:?} cannot run on these noise variances: {source}")]
    WrongType { scheme: Scheme, source: GaussianError },
    #[error("rate split {r1p} + {r1pp} does not equal r1 = {r1}")]
    SplitInvalid { r1: f64, r1p: f64, r1pp: f64 },
    #[error("invalid simulation config: {0}")]
    BadConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    Type1,
    Type2,
    Type3,
}

impl Scheme {
    fn degradation(self) -> DegradationType {
        match self {
            Scheme::Type1 => DegradationType::TypeI,
            Scheme::Type2 => DegradationType::TypeII,
            Scheme::Type3 => DegradationType::TypeIII,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SimAux {
    Type1(Type1Aux),
    Type2(Type2Aux),
    Type3 { alpha: f64 },
}

impl SimAux {
    pub fn scheme(&self) -> Scheme {
        match self {
            SimAux::Type1(_) => Scheme::Type1,
            SimAux::Type2(_) => Scheme::Type2,
            SimAux::Type3 { .. } => Scheme::Type3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: GaussianParams,
    pub aux: SimAux,
    /// Symbols per block.
    pub n: usize,
    /// Message blocks; Types I and II send B + 1 blocks.
    pub blocks: usize,
    pub r1: f64,
    pub r2: f64,
    /// (R1', R1'') for Type I; defaults to (0, R1).
    pub split: Option<(f64, f64)>,
    pub trials: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn scheme(&self) -> Scheme {
        self.aux.scheme()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerStats {
    pub target: f64,
    pub mean: f64,
    pub stderr: f64,
    pub blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub scheme: Scheme,
    pub trials: usize,
    pub n: usize,
    pub blocks: usize,
    pub r1: f64,
    pub r2: f64,
    /// Message bits per block: [M1', M2, M1''] for Type I, [M1, M2, 0] otherwise.
    pub bits: [u32; 3],
    pub relay_errors: usize,
    pub rx1_errors: usize,
    pub rx2_errors: usize,
    pub overall_errors: usize,
    pub relay_error_rate: f64,
    pub rx1_error_rate: f64,
    pub rx2_error_rate: f64,
    pub overall_error_rate: f64,
    pub effective_r1: f64,
    pub effective_r2: f64,
    /// Decoding steps whose best metric was shared by another candidate.
    pub ties: u64,
    pub tx_power: PowerStats,
    pub relay_power: PowerStats,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct TrialOutcome {
    pub relay_err: bool,
    pub rx1_err: bool,
    pub rx2_err: bool,
    pub ties: u64,
    pub tx_power: Vec<f64>,
    pub relay_power: Vec<f64>,
}

/// Validated per-run constants shared by every trial.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Plan {
    pub cfg: SimConfig,
    pub bits: [u32; 3],
}

fn whole_bits(rate: f64, n: usize) -> Result<u32, SimError> {
    let k = rate * n as f64;
    if !(rate >= 0.0) || !k.is_finite() || (k - k.round()).abs() > 1e-9 {
        return Err(SimError::RateGranularity { rate, n });
    }
    Ok(k.round() as u32)
}

fn plan(cfg: &SimConfig, scheme: Scheme) -> Result<Plan, SimError> {
    if cfg.scheme() != scheme {
        return Err(SimError::BadConfig(format!(
            "auxiliary parameters are for {:?}, not {scheme:?}",
            cfg.scheme()
        )));
    }
    if cfg.n == 0 || cfg.blocks == 0 {
        return Err(SimError::BadConfig("n and blocks must be at least 1".into()));
    }
    cfg.params
        .require(scheme.degradation())
        .map_err(|source| SimError::WrongType { scheme, source })?;
    let k2 = whole_bits(cfg.r2, cfg.n)?;
    let bits = match scheme {
        Scheme::Type1 => {
            let (r1p, r1pp) = cfg.split.unwrap_or((0.0, cfg.r1));
            if (r1p + r1pp - cfg.r1).abs() > 1e-12 || r1p < 0.0 || r1pp < 0.0 {
                return Err(SimError::SplitInvalid { r1: cfg.r1, r1p, r1pp });
            }
            whole_bits(cfg.r1, cfg.n)?;
            [whole_bits(r1p, cfg.n)?, k2, whole_bits(r1pp, cfg.n)?]
        }
        _ => [whole_bits(cfg.r1, cfg.n)?, k2, 0],
    };
    let total: u32 = bits.iter().sum();
    if total > MAX_DECODE_BITS {
        return Err(SimError::TooManyBits { bits: total });
    }
    Ok(Plan { cfg: *cfg, bits })
}

fn power_stats(samples: &[f64], target: f64) -> PowerStats {
    let k = samples.len().max(1) as f64;
    let mean = samples.iter().sum::<f64>() / k;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (k - 1.0).max(1.0);
    PowerStats {
        target,
        mean,
        stderr: (var / k).sqrt(),
        blocks: samples.len(),
    }
}

fn run(plan: Plan, trial: fn(&Plan, u64) -> TrialOutcome) -> SimReport {
    let cfg = plan.cfg;
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials as u64).into_par_iter().map(|t| trial(&plan, t)).collect();
    let (mut relay, mut rx1, mut rx2, mut overall, mut ties) = (0, 0, 0, 0, 0);
    let (mut tx_p, mut relay_p) = (Vec::new(), Vec::new());
    for o in &outcomes {
        relay += o.relay_err as usize;
        rx1 += o.rx1_err as usize;
        rx2 += o.rx2_err as usize;
        overall += (o.relay_err || o.rx1_err || o.rx2_err) as usize;
        ties += o.ties;
        tx_p.extend_from_slice(&o.tx_power);
        relay_p.extend_from_slice(&o.relay_power);
    }
    let scheme = cfg.scheme();
    let discount = match scheme {
        Scheme::Type3 => 1.0,
        _ => cfg.blocks as f64 / (cfg.blocks + 1) as f64,
    };
    let (tx_target, relay_target) = match cfg.aux {
        SimAux::Type1(_) => (cfg.params.p, cfg.params.pr),
        SimAux::Type2(a) => (cfg.params.p - 2.0 * type2_relay_coherence(&cfg.params, &a), cfg.params.pr),
        SimAux::Type3 { .. } => (cfg.params.p, 0.0),
    };
    let rate = |e: usize| if cfg.trials == 0 { 0.0 } else { e as f64 / cfg.trials as f64 };
    SimReport {
        scheme,
        trials: cfg.trials,
        n: cfg.n,
        blocks: cfg.blocks,
        r1: cfg.r1,
        r2: cfg.r2,
        bits: plan.bits,
        relay_errors: relay,
        rx1_errors: rx1,
        rx2_errors: rx2,
        overall_errors: overall,
        relay_error_rate: rate(relay),
        rx1_error_rate: rate(rx1),
        rx2_error_rate: rate(rx2),
        overall_error_rate: rate(overall),
        effective_r1: cfg.r1 * discount,
        effective_r2: cfg.r2 * discount,
        ties,
        tx_power: power_stats(&tx_p, tx_target),
        relay_power: power_stats(&relay_p, relay_target),
    }
}

pub fn simulate_type1(cfg: &SimConfig) -> Result<SimReport, SimError> {
    Ok(run(plan(cfg, Scheme::Type1)?, schemes::type1_trial))
}

pub fn simulate_type2(cfg: &SimConfig) -> Result<SimReport, SimError> {
    Ok(run(plan(cfg, Scheme::Type2)?, schemes::type2_trial))
}

pub fn simulate_type3(cfg: &SimConfig) -> Result<SimReport, SimError> {
    Ok(run(plan(cfg, Scheme::Type3)?, schemes::type3_trial))
}

pub fn simulate(cfg: &SimConfig) -> Result<SimReport, SimError> {
    match cfg.scheme() {
        Scheme::Type1 => simulate_type1(cfg),
        Scheme::Type2 => simulate_type2(cfg),
        Scheme::Type3 => simulate_type3(cfg),
    }
}

/// Runs `base` at each rate pair with seed `base.seed ^ index`. For Type I
/// the cloud share R1' is kept when it fits and R1'' takes the rest.
pub fn sweep_rates(base: &SimConfig, points: &[RatePair]) -> Result<Vec<SimReport>, SimError> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut cfg = *base;
            cfg.r1 = p.r1;
            cfg.r2 = p.r2;
            cfg.seed = base.seed ^ i as u64;
            if let Some((r1p, _)) = base.split {
                let r1p = r1p.min(p.r1);
                cfg.split = Some((r1p, p.r1 - r1p));
            }
            simulate(&cfg)
        })
        .collect()
}

pub const SWEEP_CSV_HEADER: &str = "r1,r2,relay_err,rx1_err,rx2_err,overall";

pub fn sweep_csv(reports: &[SimReport]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.r1, r.r2, r.relay_error_rate, r.rx1_error_rate, r.rx2_error_rate, r.overall_error_rate
        ));
    }
    out
}
