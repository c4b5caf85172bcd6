use super::config::{ExperimentConfig, Sweep};
use super::{ExperimentError, Table};
use crate::allocation::{optimal_split_default, AllocationProblem};
use crate::analytic::{tc_interval, BandwidthSplit, OutageTarget, SirThresholds, TrafficSpec};
use crate::feedback::{feedback_tc_lower, genie_tc, FeedbackSpec};
use crate::montecarlo::{estimate_joint_success, GainModel, Parallelism, SimRegion, SuccessCurve};

/// Relative bracket width used when inverting simulated success curves.
pub const INVERSION_REL_TOL: f64 = 1e-4;

const DEFAULT_ALLOCATION_POINTS: usize = 99;

fn cell(v: f64) -> String {
    format!("{v}")
}

fn wrong_axis(cfg: &ExperimentConfig, allowed: &str) -> ExperimentError {
    let field = cfg.sweep.as_ref().map_or("sweep", Sweep::field);
    ExperimentError::Config {
        field: field.to_string(),
        message: format!("this command needs {allowed}"),
    }
}

/// Analytic lower and upper capacity bounds across the outage grid.
pub fn cmd_bounds(cfg: &ExperimentConfig) -> Result<Table, ExperimentError> {
    let Some(Sweep::Epsilon(grid)) = &cfg.sweep else {
        return Err(wrong_axis(cfg, "eps_grid"));
    };
    let split = cfg.split()?;
    let mut table = Table::new(&["epsilon", "tc_lower", "tc_upper"]);
    for &eps in grid {
        let tc = tc_interval(&OutageTarget::new(eps)?, &cfg.traffic, &split, &cfg.path_loss)?;
        table.push(vec![cell(eps), cell(tc.lower), cell(tc.upper)]);
    }
    Ok(table)
}

/// Simulated joint success, either at the density meeting each outage in
/// `eps_grid` or at each density in `lambda_grid`.
pub fn cmd_simulate(cfg: &ExperimentConfig, par: Parallelism) -> Result<Table, ExperimentError> {
    let plan = cfg.require_plan()?;
    let split = cfg.split()?;
    let th = SirThresholds::from_traffic(&cfg.traffic, &split, &cfg.path_loss)?;
    let efficiency = cfg.traffic.total() / split.f_total();
    match &cfg.sweep {
        Some(Sweep::Epsilon(grid)) => {
            let eps_max = *grid.last().expect("grids are non-empty");
            let curve = SuccessCurve::rayleigh_for_outage(eps_max, &th, &plan, cfg.sim_region, &cfg.path_loss, par)?;
            let mut table = Table::new(&["epsilon", "p_joint", "p_fwd", "p_rev", "ci", "tc_mc"]);
            for &eps in grid {
                let est = curve.density_at_outage(eps, INVERSION_REL_TOL)?;
                let tc = (1.0 - eps) * est.lambda * efficiency;
                table.push(vec![
                    cell(eps),
                    cell(est.joint.p_hat),
                    cell(est.fwd.p_hat),
                    cell(est.rev.p_hat),
                    cell(est.joint.ci_halfwidth),
                    cell(tc),
                ]);
            }
            Ok(table)
        }
        Some(Sweep::Lambda(grid)) => {
            let lambda_max = *grid.last().expect("grids are non-empty");
            let region = match cfg.sim_region {
                Some(r) => r,
                None => SimRegion::auto(&cfg.path_loss, lambda_max, th.beta1() + th.beta2())?,
            };
            let mut table = Table::new(&["lambda", "p_joint", "p_fwd", "p_rev", "ci", "tc_mc"]);
            for &lambda in grid {
                let est = estimate_joint_success(lambda, &th, &plan, &region, &cfg.path_loss, par);
                let tc = est.joint.p_hat * lambda * efficiency;
                table.push(vec![
                    cell(lambda),
                    cell(est.joint.p_hat),
                    cell(est.fwd.p_hat),
                    cell(est.rev.p_hat),
                    cell(est.joint.ci_halfwidth),
                    cell(tc),
                ]);
            }
            Ok(table)
        }
        _ => Err(wrong_axis(cfg, "eps_grid or lambda_grid")),
    }
}

/// Lower capacity bound across forward bandwidths, plus a summary row with
/// the optimal split, the proportional split and the gain of one over the other.
pub fn cmd_allocate(cfg: &ExperimentConfig) -> Result<(Table, Table), ExperimentError> {
    let ot = cfg.require_outage()?;
    let grid = match &cfg.sweep {
        Some(Sweep::ForwardBandwidth(g)) => g.clone(),
        None => (1..=DEFAULT_ALLOCATION_POINTS)
            .map(|k| cfg.f_total * k as f64 / (DEFAULT_ALLOCATION_POINTS + 1) as f64)
            .collect(),
        _ => return Err(wrong_axis(cfg, "f_tr_grid or no sweep")),
    };
    let mut table = Table::new(&["f_tr", "tc_lower"]);
    for f_tr in grid {
        let split = BandwidthSplit::new(cfg.f_total, f_tr)?;
        let tc = tc_interval(&ot, &cfg.traffic, &split, &cfg.path_loss)?;
        table.push(vec![cell(f_tr), cell(tc.lower)]);
    }
    let problem = AllocationProblem::from_path_loss(cfg.traffic, cfg.f_total, &cfg.path_loss)?;
    let result = optimal_split_default(&problem)?;
    let mut summary = Table::new(&["x_star", "x_prop", "gain"]);
    summary.push(vec![
        cell(result.f_tr_star),
        cell(result.proportional),
        cell(result.gain_vs_proportional),
    ]);
    Ok((table, summary))
}

struct FeedbackRow {
    feedback: f64,
    genie: f64,
    simulated: Option<f64>,
}

/// Simulated success curve for the feedback network, built once per
/// feedback configuration and inverted at every outage up to `eps_max`.
fn feedback_curve(
    cfg: &ExperimentConfig,
    eps_max: f64,
    split: &BandwidthSplit,
    fs: &FeedbackSpec,
    par: Parallelism,
) -> Result<Option<SuccessCurve>, ExperimentError> {
    let Some(plan) = cfg.trial_plan else {
        return Ok(None);
    };
    let ac = cfg.require_antennas()?;
    let ot = OutageTarget::new(eps_max)?;
    let bound = feedback_tc_lower(&ot, &cfg.traffic, split, fs, &ac, &cfg.path_loss, cfg.feedback_options)?;
    let curve = SuccessCurve::beamforming_for_outage(
        eps_max,
        ac.n(),
        GainModel::Quantized { gamma: bound.gamma },
        bound.beta1,
        bound.beta3,
        &plan,
        cfg.sim_region,
        &cfg.path_loss,
        par,
    )?;
    Ok(Some(curve))
}

fn feedback_row(
    cfg: &ExperimentConfig,
    ot: &OutageTarget,
    split: &BandwidthSplit,
    fs: &FeedbackSpec,
    curve: Option<&SuccessCurve>,
) -> Result<FeedbackRow, ExperimentError> {
    let ac = cfg.require_antennas()?;
    let pl = &cfg.path_loss;
    let bound = feedback_tc_lower(ot, &cfg.traffic, split, fs, &ac, pl, cfg.feedback_options)?;
    let genie = genie_tc(ot, &cfg.traffic, split, &ac, pl, cfg.feedback_options.c4)?;
    let simulated = match curve {
        Some(c) => {
            let est = c.density_at_outage(ot.eps(), INVERSION_REL_TOL)?;
            Some(ot.success() * est.lambda * forward_efficiency(&cfg.traffic, split))
        }
        None => None,
    };
    Ok(FeedbackRow {
        feedback: bound.tc_lower,
        genie,
        simulated,
    })
}

fn forward_efficiency(traffic: &TrafficSpec, split: &BandwidthSplit) -> f64 {
    traffic.b_tr() / split.f_total()
}

/// Limited-feedback lower bound, genie-aided one-way capacity and, when a
/// trial plan is present, the simulated feedback-network capacity.
pub fn cmd_feedback(cfg: &ExperimentConfig, par: Parallelism) -> Result<Table, ExperimentError> {
    let split = cfg.split()?;
    let fs = cfg.require_feedback()?;
    let header = |axis| [axis, "tc_lower_feedback", "tc_oneway_genie", "tc_mc"];
    let row = |x: String, r: FeedbackRow| {
        vec![x, cell(r.feedback), cell(r.genie), r.simulated.map(cell).unwrap_or_default()]
    };
    match &cfg.sweep {
        Some(Sweep::Epsilon(grid)) => {
            let eps_max = *grid.last().expect("grids are non-empty");
            let curve = feedback_curve(cfg, eps_max, &split, &fs, par)?;
            let mut table = Table::new(&header("epsilon"));
            for &eps in grid {
                let ot = OutageTarget::new(eps)?;
                table.push(row(cell(eps), feedback_row(cfg, &ot, &split, &fs, curve.as_ref())?));
            }
            Ok(table)
        }
        Some(Sweep::FeedbackBits(grid)) => {
            let ot = cfg.require_outage()?;
            let mut table = Table::new(&header("B"));
            for &b in grid {
                let fs_b = FeedbackSpec::new(b, fs.c3())?;
                let curve = feedback_curve(cfg, ot.eps(), &split, &fs_b, par)?;
                table.push(row(b.to_string(), feedback_row(cfg, &ot, &split, &fs_b, curve.as_ref())?));
            }
            Ok(table)
        }
        _ => Err(wrong_axis(cfg, "eps_grid or b_fb_grid")),
    }
}
