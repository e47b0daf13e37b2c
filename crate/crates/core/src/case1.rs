//! Case 1: maximize throughput subject to a cap `xi` on the average
//! information leakage rate.
//!
//! The closed form solves the approximate problem (leakage replaced by
//! [`leakage_approx`]); [`solve_case1_exact`] solves the original problem
//! numerically and serves as the baseline the closed form is judged by.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{
    approx_constant, leakage_approx, leakage_exact_raw, p_tx, ChannelParams, MetricBundle, RatePair,
};
use crate::specfun::{find_root, lambert_w0, minimize_scalar, SolverConfig};
use crate::{Error, Result};

/// Smallest codeword rate considered by the exact baseline.
pub const EXACT_RB_LO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case1Problem {
    pub params: ChannelParams,
    /// Leakage cap, bits per channel use.
    pub xi: f64,
}

impl Case1Problem {
    pub fn new(params: ChannelParams, xi: f64) -> Self {
        Case1Problem { params, xi }
    }
}

/// Where the optimum sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Case1Branch {
    /// Smallest codeword rate whose full payload meets the cap: `r_s = r_b`.
    AtRbMin,
    /// Stationary point of the throughput along the binding constraint.
    AtRbInterior,
    /// Cap slack; `r_s = r_b` at the peak of `r p_tx(r)`.
    AtRbPeak,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case1Solution {
    pub rates: RatePair,
    pub metrics: MetricBundle,
    pub branch: Case1Branch,
    /// Whether the leakage constraint binds at the returned rates.
    pub constraint_active: bool,
    /// `R_b1,min`; closed form only.
    pub rb_min: Option<f64>,
    /// `R_b1,0`; closed form only.
    pub rb_stationary: Option<f64>,
}

/// Supremum of the leakage caps the approximate problem can meet,
/// `3 ge e^{1/ge} / (10 ln2)`. It equals `1 / A`.
pub fn xi_max(params: &ChannelParams) -> f64 {
    1.0 / approx_constant(params.gamma_bar_e)
}

/// `R_b1,min = -log2(1 - xi A)`.
fn rb_min(xi_a: f64) -> f64 {
    -(-xi_a).ln_1p() / LN_2
}

/// `R_b1,0 = log2((e^{W0(xi A gb)} - 1) / (xi A))`.
fn rb_stationary(xi_a: f64, gamma_bar_b: f64) -> Result<f64> {
    let w = lambert_w0(xi_a * gamma_bar_b)?;
    Ok((w.exp_m1() / xi_a).log2())
}

fn check_closed_form_domain(prob: &Case1Problem) -> Result<f64> {
    let max = xi_max(&prob.params);
    if !(prob.xi > 0.0 && prob.xi < max) {
        return Err(Error::Infeasible {
            constraint: "xi",
            value: prob.xi,
            range: format!("(0, {max}) (the supremum xi_max = {max} is not attained)"),
        });
    }
    Ok(prob.xi * approx_constant(prob.params.gamma_bar_e))
}

/// Closed-form optimum of the approximate Case-1 problem.
///
/// The confidential rate is pushed up to the leakage cap,
/// `r_s = log2(1 + xi A 2^{r_b})`, so the approximate leakage equals `xi`,
/// and the codeword rate is `max(R_b1,min, R_b1,0)`.
///
/// Below `R_b1,min` the cap cannot bind and the feasible pairs are
/// `r_s = r_b`, where throughput peaks at `r_peak = W0(gb)/ln2`. Once
/// `R_b1,min` passes `r_peak` that diagonal peak is the optimum and the cap
/// is slack ([`Case1Branch::AtRbPeak`]). Requires `0 < xi < xi_max`; at
/// `xi_max` itself `R_b1,min` diverges.
pub fn solve_case1_closed_form(prob: &Case1Problem) -> Result<Case1Solution> {
    let xi_a = check_closed_form_domain(prob)?;
    let lower = rb_min(xi_a);
    let stationary = rb_stationary(xi_a, prob.params.gamma_bar_b)?;
    let peak = diagonal_peak(&prob.params);

    let (r_b, r_s, branch) = if lower < stationary {
        let r_s = (xi_a * stationary.exp2()).ln_1p() / LN_2;
        (stationary, r_s.min(stationary), Case1Branch::AtRbInterior)
    } else if lower <= peak {
        (lower, lower, Case1Branch::AtRbMin)
    } else {
        (peak, peak, Case1Branch::AtRbPeak)
    };
    let rates = RatePair::new(r_b, r_s)?;
    Ok(Case1Solution {
        rates,
        metrics: MetricBundle::evaluate(&prob.params, &rates),
        branch,
        constraint_active: branch != Case1Branch::AtRbPeak,
        rb_min: Some(lower),
        rb_stationary: Some(stationary),
    })
}

fn diagonal_peak(params: &ChannelParams) -> f64 {
    lambert_w0(params.gamma_bar_b).expect("gamma_bar_b > 0 by construction") / LN_2
}

/// Leakage cap above which the closed form saturates at the diagonal peak:
/// `R_b1,min(xi) = r_peak`, i.e. `xi = (1 - 2^{-r_peak}) / A`.
pub fn saturation_xi(params: &ChannelParams) -> f64 {
    -(-diagonal_peak(params) * LN_2).exp_m1() / approx_constant(params.gamma_bar_e)
}

/// Leakage cap `xi_0` at which `R_b1,0` and `R_b1,min` meet. Above it the
/// closed form sends no randomization bits.
pub fn crossover_xi0(params: &ChannelParams, cfg: &SolverConfig) -> Result<f64> {
    cfg.validate()?;
    let a = approx_constant(params.gamma_bar_e);
    let max = 1.0 / a;
    let gap = |xi: f64| {
        let xi_a = xi * a;
        rb_stationary(xi_a, params.gamma_bar_b).unwrap_or(f64::NAN) - rb_min(xi_a)
    };
    let lo = max * 1e-12;
    let hi = max * (1.0 - 1e-12);
    let (g_lo, g_hi) = (gap(lo), gap(hi));
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::RootNotFound(format!(
            "R_b1,0 - R_b1,min does not change sign on (0, xi_max): {g_lo} at {lo}, {g_hi} at {hi}"
        )));
    }
    find_root(gap, lo, hi, cfg)
}

/// Search interval for the exact baselines: beyond the upper end the
/// transmission probability drops below `1e-8`.
pub fn exact_search_interval(params: &ChannelParams) -> (f64, f64) {
    let hi = (params.gamma_bar_b * 1e8f64.ln()).ln_1p() / LN_2;
    (EXACT_RB_LO, hi)
}

/// Largest confidential rate at codeword rate `r_b` whose exact leakage stays
/// within `xi`. Leakage grows with `r_s`, so the constraint is either slack
/// on the diagonal or binds at a unique root in `[0, r_b]`.
fn max_confidential_rate(ge: f64, xi: f64, r_b: f64, cfg: &SolverConfig) -> Result<f64> {
    if leakage_exact_raw(ge, r_b, r_b) <= xi {
        return Ok(r_b);
    }
    find_root(|r_s| leakage_exact_raw(ge, r_b, r_s) - xi, 0.0, r_b, cfg)
}

/// Numerical optimum of the original Case-1 problem with the exact leakage.
///
/// For each codeword rate the confidential rate is the largest one meeting
/// the cap. Throughput along that curve is then maximized by a dense scan
/// plus golden-section refinement over [`exact_search_interval`]. Caps above
/// the exact leakage supremum simply leave the constraint slack.
pub fn solve_case1_exact(prob: &Case1Problem, cfg: &SolverConfig) -> Result<Case1Solution> {
    cfg.validate()?;
    if !(prob.xi > 0.0) || prob.xi.is_nan() {
        return Err(Error::Infeasible {
            constraint: "xi",
            value: prob.xi,
            range: "(0, inf)".to_string(),
        });
    }
    let ChannelParams {
        gamma_bar_b: gb,
        gamma_bar_e: ge,
    } = prob.params;
    let (lo, hi) = exact_search_interval(&prob.params);

    let neg_eta = |r_b: f64| match max_confidential_rate(ge, prob.xi, r_b, cfg) {
        Ok(r_s) => -p_tx(gb, r_b) * r_s,
        Err(_) => f64::NAN,
    };
    let (r_b, _) = minimize_scalar(neg_eta, lo, hi, cfg)?;
    let r_s = max_confidential_rate(ge, prob.xi, r_b, cfg)?.min(r_b);

    let rates = RatePair::new(r_b, r_s)?;
    let branch = if r_s < r_b {
        Case1Branch::AtRbInterior
    } else if (r_b - diagonal_peak(&prob.params)).abs() <= 1e3 * cfg.abs_tol {
        Case1Branch::AtRbPeak
    } else {
        Case1Branch::AtRbMin
    };
    Ok(Case1Solution {
        rates,
        metrics: MetricBundle::evaluate(&prob.params, &rates),
        branch,
        constraint_active: leakage_exact_raw(ge, r_b, r_b) > prob.xi,
        rb_min: None,
        rb_stationary: None,
    })
}

/// Approximate-problem throughput at codeword rate `r_b` with the binding
/// confidential rate, or `None` where `r_s <= r_b` cannot hold.
pub fn approx_throughput_along_constraint(prob: &Case1Problem, r_b: f64) -> Option<f64> {
    let xi_a = prob.xi * approx_constant(prob.params.gamma_bar_e);
    let r_s = (xi_a * r_b.exp2()).ln_1p() / LN_2;
    if r_s > r_b * (1.0 + 1e-12) {
        return None;
    }
    let rates = RatePair::new(r_b, r_s.min(r_b)).ok()?;
    debug_assert!((leakage_approx(&prob.params, &rates) - prob.xi).abs() < 1e-9);
    Some(p_tx(prob.params.gamma_bar_b, r_b) * rates.r_s)
}
