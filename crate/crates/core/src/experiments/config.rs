//! JSON experiment configuration and its validation.

use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::ExperimentError;
use crate::analytic::{BandwidthSplit, NetworkDensity, OutageTarget, PathLoss, TrafficSpec};
use crate::feedback::{AntennaConfig, Beta3Form, C4Convention, FeedbackOptions, FeedbackSpec, DEFAULT_C3};
use crate::montecarlo::{SimRegion, TrialPlan};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPathLoss {
    alpha: f64,
    d: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTraffic {
    b_tr: f64,
    b_rt: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSplit {
    f_total: f64,
    f_tr: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutage {
    eps: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDensity {
    lambda: Option<f64>,
    lambda0: Option<f64>,
    p_a: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAntennas {
    n: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeedback {
    b_fb: u32,
    c3: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawC4 {
    #[default]
    Product,
    Reciprocal,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawBeta3 {
    #[default]
    Verbatim,
    MinusOne,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeedbackOptions {
    #[serde(default)]
    c4: RawC4,
    #[serde(default)]
    beta3: RawBeta3,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    n_trials: u64,
    master_seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion {
    radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: String,
    comment: Option<String>,
    path_loss: RawPathLoss,
    traffic_spec: RawTraffic,
    bandwidth_split: RawSplit,
    outage_target: Option<RawOutage>,
    eps_grid: Option<Vec<f64>>,
    network_density: Option<RawDensity>,
    lambda_grid: Option<Vec<f64>>,
    b_fb_grid: Option<Vec<u32>>,
    f_tr_grid: Option<Vec<f64>>,
    antenna_config: Option<RawAntennas>,
    feedback_spec: Option<RawFeedback>,
    feedback_options: Option<RawFeedbackOptions>,
    trial_plan: Option<RawPlan>,
    sim_region: Option<RawRegion>,
    output: Option<PathBuf>,
}

/// The single axis a run sweeps over.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    Epsilon(Vec<f64>),
    Lambda(Vec<f64>),
    FeedbackBits(Vec<u32>),
    ForwardBandwidth(Vec<f64>),
}

impl Sweep {
    pub fn field(&self) -> &'static str {
        match self {
            Sweep::Epsilon(_) => "eps_grid",
            Sweep::Lambda(_) => "lambda_grid",
            Sweep::FeedbackBits(_) => "b_fb_grid",
            Sweep::ForwardBandwidth(_) => "f_tr_grid",
        }
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub comment: Option<String>,
    pub path_loss: PathLoss,
    pub traffic: TrafficSpec,
    pub f_total: f64,
    pub f_tr: Option<f64>,
    pub outage: Option<OutageTarget>,
    pub density: Option<NetworkDensity>,
    pub sweep: Option<Sweep>,
    pub antennas: Option<AntennaConfig>,
    pub feedback: Option<FeedbackSpec>,
    pub feedback_options: FeedbackOptions,
    pub trial_plan: Option<TrialPlan>,
    pub sim_region: Option<SimRegion>,
    pub output: Option<PathBuf>,
}

fn field_err(field: impl Into<String>, e: impl ToString) -> ExperimentError {
    ExperimentError::Config {
        field: field.into(),
        message: e.to_string(),
    }
}

fn check<T>(field: &str, r: crate::Result<T>) -> Result<T, ExperimentError> {
    r.map_err(|e| field_err(field, e))
}

fn strictly_increasing<T: PartialOrd + Copy>(field: &str, grid: &[T]) -> Result<(), ExperimentError> {
    if grid.is_empty() {
        return Err(field_err(field, "grid must not be empty"));
    }
    if let Some(i) = grid.windows(2).position(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less)) {
        return Err(field_err(
            format!("{field}[{}]", i + 1),
            "grid must be strictly increasing",
        ));
    }
    Ok(())
}

fn each<T: Copy, U>(field: &str, grid: &[T], f: impl Fn(T) -> crate::Result<U>) -> Result<(), ExperimentError> {
    for (i, &v) in grid.iter().enumerate() {
        check(&format!("{field}[{i}]"), f(v))?;
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let raw: RawConfig = serde_json::from_str(text)?;
        Self::validate(raw)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(|source| ExperimentError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    fn validate(raw: RawConfig) -> Result<Self, ExperimentError> {
        if raw.scenario.trim().is_empty() {
            return Err(field_err("scenario", "must not be empty"));
        }
        let path_loss = check("path_loss", PathLoss::new(raw.path_loss.alpha, raw.path_loss.d))?;
        let traffic = check(
            "traffic_spec",
            TrafficSpec::new(raw.traffic_spec.b_tr, raw.traffic_spec.b_rt),
        )?;
        let f_total = raw.bandwidth_split.f_total;
        if !(f_total.is_finite() && f_total > 0.0) {
            return Err(field_err("bandwidth_split.f_total", format!("must be positive, got {f_total}")));
        }
        let f_tr = raw.bandwidth_split.f_tr;
        if let Some(f_tr) = f_tr {
            check("bandwidth_split", BandwidthSplit::new(f_total, f_tr))?;
        }

        let grids = [
            raw.eps_grid.as_ref().map(|_| "eps_grid"),
            raw.lambda_grid.as_ref().map(|_| "lambda_grid"),
            raw.b_fb_grid.as_ref().map(|_| "b_fb_grid"),
            raw.f_tr_grid.as_ref().map(|_| "f_tr_grid"),
        ];
        let present: Vec<&str> = grids.into_iter().flatten().collect();
        if present.len() > 1 {
            return Err(field_err(
                present.join(", "),
                "only one sweep axis may be given per run",
            ));
        }
        let sweep = if let Some(g) = raw.eps_grid {
            strictly_increasing("eps_grid", &g)?;
            each("eps_grid", &g, OutageTarget::new)?;
            Some(Sweep::Epsilon(g))
        } else if let Some(g) = raw.lambda_grid {
            strictly_increasing("lambda_grid", &g)?;
            each("lambda_grid", &g, NetworkDensity::new)?;
            Some(Sweep::Lambda(g))
        } else if let Some(g) = raw.b_fb_grid {
            strictly_increasing("b_fb_grid", &g)?;
            each("b_fb_grid", &g, |b| FeedbackSpec::new(b, DEFAULT_C3))?;
            Some(Sweep::FeedbackBits(g))
        } else if let Some(g) = raw.f_tr_grid {
            strictly_increasing("f_tr_grid", &g)?;
            each("f_tr_grid", &g, |x| BandwidthSplit::new(f_total, x))?;
            Some(Sweep::ForwardBandwidth(g))
        } else {
            None
        };

        if raw.outage_target.is_some() && matches!(sweep, Some(Sweep::Epsilon(_))) {
            return Err(field_err("outage_target", "give either outage_target or eps_grid, not both"));
        }
        let outage = raw
            .outage_target
            .map(|o| check("outage_target.eps", OutageTarget::new(o.eps)))
            .transpose()?;

        if raw.network_density.is_some() && matches!(sweep, Some(Sweep::Lambda(_))) {
            return Err(field_err(
                "network_density",
                "give either network_density or lambda_grid, not both",
            ));
        }
        let density = raw
            .network_density
            .map(|nd| match (nd.lambda, nd.lambda0, nd.p_a) {
                (Some(l), None, None) => check("network_density.lambda", NetworkDensity::new(l)),
                (None, Some(l0), Some(p)) => check("network_density", NetworkDensity::from_aloha(l0, p)),
                _ => Err(field_err(
                    "network_density",
                    "give either lambda, or both lambda0 and p_a",
                )),
            })
            .transpose()?;

        let antennas = raw
            .antenna_config
            .map(|a| check("antenna_config.n", AntennaConfig::new(a.n)))
            .transpose()?;
        let feedback = raw
            .feedback_spec
            .map(|f| check("feedback_spec", FeedbackSpec::new(f.b_fb, f.c3.unwrap_or(DEFAULT_C3))))
            .transpose()?;
        if let (Some(Sweep::FeedbackBits(g)), Some(f)) = (&sweep, &feedback) {
            each("b_fb_grid", g, |b| FeedbackSpec::new(b, f.c3()))?;
        }
        let opts = raw.feedback_options.unwrap_or_default();
        let feedback_options = FeedbackOptions {
            c4: match opts.c4 {
                RawC4::Product => C4Convention::Product,
                RawC4::Reciprocal => C4Convention::Reciprocal,
            },
            beta3: match opts.beta3 {
                RawBeta3::Verbatim => Beta3Form::Verbatim,
                RawBeta3::MinusOne => Beta3Form::MinusOne,
            },
        };
        let trial_plan = raw
            .trial_plan
            .map(|p| check("trial_plan", TrialPlan::new(p.n_trials, p.master_seed)))
            .transpose()?;
        let sim_region = raw
            .sim_region
            .map(|r| check("sim_region.radius", SimRegion::new(r.radius, &path_loss)))
            .transpose()?;

        Ok(Self {
            scenario: raw.scenario,
            comment: raw.comment,
            path_loss,
            traffic,
            f_total,
            f_tr,
            outage,
            density,
            sweep,
            antennas,
            feedback,
            feedback_options,
            trial_plan,
            sim_region,
            output: raw.output,
        })
    }

    /// Applies command-line overrides of the seed and the trial count. A plan
    /// is created when only `trials` is given, seeded with 0 unless `seed` is set.
    pub fn with_overrides(mut self, seed: Option<u64>, trials: Option<u64>) -> Result<Self, ExperimentError> {
        let plan = match (self.trial_plan, seed, trials) {
            (_, None, None) => return Ok(self),
            (Some(p), s, t) => TrialPlan::new(t.unwrap_or(p.n_trials()), s.unwrap_or(p.master_seed())),
            (None, s, Some(t)) => TrialPlan::new(t, s.unwrap_or(0)),
            (None, Some(_), None) => {
                return Err(field_err("trial_plan", "--seed needs a trial_plan or --trials"));
            }
        };
        self.trial_plan = Some(check("trial_plan", plan)?);
        Ok(self)
    }

    pub fn split(&self) -> Result<BandwidthSplit, ExperimentError> {
        let f_tr = self
            .f_tr
            .ok_or_else(|| field_err("bandwidth_split.f_tr", "required by this command"))?;
        check("bandwidth_split", BandwidthSplit::new(self.f_total, f_tr))
    }

    pub fn require_outage(&self) -> Result<OutageTarget, ExperimentError> {
        self.outage
            .ok_or_else(|| field_err("outage_target", "required by this command"))
    }

    pub fn require_plan(&self) -> Result<TrialPlan, ExperimentError> {
        self.trial_plan
            .ok_or_else(|| field_err("trial_plan", "required by this command"))
    }

    pub fn require_antennas(&self) -> Result<AntennaConfig, ExperimentError> {
        self.antennas
            .ok_or_else(|| field_err("antenna_config", "required by this command"))
    }

    pub fn require_feedback(&self) -> Result<FeedbackSpec, ExperimentError> {
        self.feedback
            .ok_or_else(|| field_err("feedback_spec", "required by this command"))
    }
}
