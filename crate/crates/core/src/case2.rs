//! Case 2: minimize the average information leakage rate subject to a
//! throughput floor `Γ`.
//!
//! Throughput binds at the optimum, which fixes the confidential rate as a
//! function of the codeword rate: `r_s(r_b) = Γ e^{(2^{r_b} - 1)/gb}`.
//! Feasible codeword rates form the interval where `r_s(r_b) <= r_b`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{
    eta_diagonal, leakage_approx_raw, leakage_exact_raw, ChannelParams, MetricBundle, RatePair,
};
use crate::specfun::{find_root, lambert_w0, minimize_scalar, SolverConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case2Problem {
    pub params: ChannelParams,
    /// Required throughput `Γ`, bits per channel use.
    pub gamma_floor: f64,
}

impl Case2Problem {
    pub fn new(params: ChannelParams, gamma_floor: f64) -> Self {
        Case2Problem {
            params,
            gamma_floor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Case2Branch {
    ClampMin,
    Interior,
    ClampMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case2Solution {
    pub rates: RatePair,
    pub metrics: MetricBundle,
    pub branch: Case2Branch,
    /// Root `B` of the stationarity equation, when the closed-form path
    /// produced the answer.
    pub b_root: Option<f64>,
    /// Feasible codeword-rate interval `[R_b2,min, R_b2,max]`.
    pub rb_bounds: Option<(f64, f64)>,
    /// The closed form fell back to direct minimization.
    pub used_fallback: bool,
}

/// Codeword rate that maximizes `r e^{(1 - 2^r)/gb}`: `W0(gb) / ln2`.
pub fn r_peak(params: &ChannelParams) -> f64 {
    lambert_w0(params.gamma_bar_b).expect("gamma_bar_b > 0 by construction") / LN_2
}

/// Largest achievable throughput, reached at `r_s = r_b = r_peak`.
pub fn gamma_max(params: &ChannelParams) -> f64 {
    eta_diagonal(params.gamma_bar_b, r_peak(params))
}

/// Confidential rate at which the throughput floor binds for codeword rate
/// `r_b`.
pub fn required_confidential_rate(params: &ChannelParams, gamma_floor: f64, r_b: f64) -> f64 {
    gamma_floor * ((r_b * LN_2).exp_m1() / params.gamma_bar_b).exp()
}

fn check_feasible(prob: &Case2Problem) -> Result<f64> {
    let max = gamma_max(&prob.params);
    if !(prob.gamma_floor >= 0.0 && prob.gamma_floor <= max) {
        return Err(Error::Infeasible {
            constraint: "throughput floor",
            value: prob.gamma_floor,
            range: format!("[0, {max}] (gamma_max = {max})"),
        });
    }
    Ok(max)
}

/// The two solutions of `x e^{(1 - 2^x)/gb} = Γ`, on either side of
/// [`r_peak`]. They coincide at `Γ = gamma_max`.
pub fn rb_feasible_bounds(prob: &Case2Problem, cfg: &SolverConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    check_feasible(prob)?;
    let gamma = prob.gamma_floor;
    if gamma == 0.0 {
        return Err(Error::Infeasible {
            constraint: "throughput floor",
            value: gamma,
            range: "(0, gamma_max] for finite codeword-rate bounds".to_string(),
        });
    }
    let gb = prob.params.gamma_bar_b;
    let peak = r_peak(&prob.params);
    let excess = |x: f64| eta_diagonal(gb, x) - gamma;
    if excess(peak) <= 0.0 {
        return Ok((peak, peak));
    }

    let lower = find_root(excess, 0.0, peak, cfg)?;

    // eta(r, r) -> 0 as r -> inf, so doubling the offset terminates.
    let mut inside = peak;
    let mut offset = 1.0;
    while excess(peak + offset) >= 0.0 {
        inside = peak + offset;
        offset *= 2.0;
        if offset > 1e6 {
            return Err(Error::RootNotFound(
                "no upper bracket for R_b2,max".to_string(),
            ));
        }
    }
    let upper = find_root(excess, inside, peak + offset, cfg)?;
    Ok((lower, upper))
}

/// Stationarity equation in `t = ln x`:
/// `x ln x ln(K ln x) - x + 1` with `K = e^{1/gb} / (Γ ln2)`.
fn b_equation_log(t: f64, k: f64) -> f64 {
    t.exp() * t * (k * t).ln() - t.exp_m1()
}

/// Residual of `x ln(x) ln(e^{1/gb} ln(x) / (Γ ln2)) - x + 1` at `x`.
pub fn b_equation_residual(prob: &Case2Problem, x: f64) -> f64 {
    let k = b_constant(prob);
    let l = x.ln();
    x * l * (k * l).ln() - x + 1.0
}

fn b_constant(prob: &Case2Problem) -> f64 {
    (1.0 / prob.params.gamma_bar_b).exp() / (prob.gamma_floor * LN_2)
}

/// Root `B > 1` of the stationarity equation of the approximate Case-2
/// objective. Takes the smallest root found by doubling `B` upward from
/// just above 1.
pub fn solve_b(prob: &Case2Problem, cfg: &SolverConfig) -> Result<f64> {
    cfg.validate()?;
    let max = check_feasible(prob)?;
    if !(prob.gamma_floor > 0.0 && prob.gamma_floor < max) {
        return Err(Error::Infeasible {
            constraint: "throughput floor",
            value: prob.gamma_floor,
            range: format!("(0, {max}) for the stationarity equation"),
        });
    }
    let k = b_constant(prob);
    let h = |t: f64| b_equation_log(t, k);

    let mut t_lo = 1e-3;
    while h(t_lo) >= 0.0 {
        t_lo *= 0.5;
        if t_lo < 1e-15 {
            return Err(Error::RootNotFound(
                "B equation is not negative just above 1".to_string(),
            ));
        }
    }
    let mut t_hi = t_lo;
    loop {
        let next = t_hi + LN_2;
        if h(next) > 0.0 {
            t_hi = next;
            break;
        }
        t_lo = next;
        t_hi = next;
        if t_hi > 700.0 {
            return Err(Error::RootNotFound(
                "no sign change of the B equation below e^700".to_string(),
            ));
        }
    }

    let tight = SolverConfig {
        abs_tol: cfg.abs_tol * 1e-3,
        rel_tol: cfg.rel_tol * 1e-3,
        ..*cfg
    };
    let t = find_root(h, t_lo, t_hi, &tight)?;
    let b = t.exp();
    let residual = b_equation_residual(prob, b);
    if !(residual.abs() < cfg.abs_tol) {
        return Err(Error::RootNotFound(format!(
            "B = {b} leaves residual {residual}"
        )));
    }
    Ok(b)
}

/// `R_b2,0 = log2(1 + gb ln(ln B / (Γ ln2)))`; `None` when the argument of
/// the outer logarithm is not positive.
fn rb_from_b(prob: &Case2Problem, b: f64) -> Option<f64> {
    let inner = 1.0 + prob.params.gamma_bar_b * (b.ln() / (prob.gamma_floor * LN_2)).ln();
    (inner > 0.0).then(|| inner.log2())
}

fn approx_objective(prob: &Case2Problem, r_b: f64) -> f64 {
    let r_s = required_confidential_rate(&prob.params, prob.gamma_floor, r_b);
    leakage_approx_raw(prob.params.gamma_bar_e, r_b, r_s)
}

fn exact_objective(prob: &Case2Problem, r_b: f64) -> f64 {
    let r_s = required_confidential_rate(&prob.params, prob.gamma_floor, r_b);
    leakage_exact_raw(prob.params.gamma_bar_e, r_b, r_s.min(r_b))
}

fn is_local_min(prob: &Case2Problem, r: f64) -> bool {
    let delta = 1e-5 * r.abs().max(1.0);
    let here = approx_objective(prob, r);
    let slack = 1e-12 * here.abs();
    here <= approx_objective(prob, r - delta) + slack && here <= approx_objective(prob, r + delta) + slack
}

fn degenerate_zero_floor(prob: &Case2Problem) -> Result<Case2Solution> {
    let rates = RatePair::new(0.0, 0.0)?;
    Ok(Case2Solution {
        rates,
        metrics: MetricBundle::evaluate(&prob.params, &rates),
        branch: Case2Branch::ClampMin,
        b_root: None,
        rb_bounds: None,
        used_fallback: false,
    })
}

fn build(
    prob: &Case2Problem,
    r_b: f64,
    bounds: (f64, f64),
    branch: Case2Branch,
    b_root: Option<f64>,
    used_fallback: bool,
) -> Result<Case2Solution> {
    let r_s = if bounds.0 == bounds.1 {
        r_b
    } else {
        required_confidential_rate(&prob.params, prob.gamma_floor, r_b).min(r_b)
    };
    let rates = RatePair::new(r_b, r_s)?;
    Ok(Case2Solution {
        rates,
        metrics: MetricBundle::evaluate(&prob.params, &rates),
        branch,
        b_root,
        rb_bounds: Some(bounds),
        used_fallback,
    })
}

fn classify(r_b: f64, (lo, hi): (f64, f64), cfg: &SolverConfig) -> Case2Branch {
    let tol = 10.0 * cfg.abs_tol;
    if r_b - lo <= tol {
        Case2Branch::ClampMin
    } else if hi - r_b <= tol {
        Case2Branch::ClampMax
    } else {
        Case2Branch::Interior
    }
}

/// Closed-form optimum of the approximate Case-2 problem.
///
/// `R_b2,0` comes from the root `B` of the stationarity equation and is
/// clamped into `[R_b2,min, R_b2,max]`. If `B` cannot be found, or does not
/// give a local minimum, the approximate objective is minimized directly
/// over the feasible interval instead ([`solve_case2_direct`]). `Γ = 0`
/// returns `r_b = r_s = 0`.
pub fn solve_case2_closed_form(prob: &Case2Problem, cfg: &SolverConfig) -> Result<Case2Solution> {
    cfg.validate()?;
    check_feasible(prob)?;
    if prob.gamma_floor == 0.0 {
        return degenerate_zero_floor(prob);
    }
    let bounds = rb_feasible_bounds(prob, cfg)?;
    let (lo, hi) = bounds;
    if lo == hi {
        return build(prob, lo, bounds, Case2Branch::ClampMin, None, false);
    }

    let stationary = solve_b(prob, cfg)
        .ok()
        .and_then(|b| rb_from_b(prob, b).map(|r| (b, r)))
        .filter(|&(_, r)| is_local_min(prob, r));
    let Some((b, r0)) = stationary else {
        return solve_case2_direct(prob, cfg);
    };

    let (r_b, branch) = if r0 < lo {
        (lo, Case2Branch::ClampMin)
    } else if r0 > hi {
        (hi, Case2Branch::ClampMax)
    } else {
        (r0, Case2Branch::Interior)
    };
    build(prob, r_b, bounds, branch, Some(b), false)
}

/// Direct minimization of the approximate objective
/// `R_Lp(r_b, r_s(r_b))` over the feasible interval. This is the fallback
/// of [`solve_case2_closed_form`].
pub fn solve_case2_direct(prob: &Case2Problem, cfg: &SolverConfig) -> Result<Case2Solution> {
    cfg.validate()?;
    check_feasible(prob)?;
    if prob.gamma_floor == 0.0 {
        return degenerate_zero_floor(prob);
    }
    let bounds = rb_feasible_bounds(prob, cfg)?;
    let (r_b, _) = minimize_scalar(|r| approx_objective(prob, r), bounds.0, bounds.1, cfg)?;
    build(prob, r_b, bounds, classify(r_b, bounds, cfg), None, true)
}

/// Numerical optimum of the original Case-2 problem with the exact leakage:
/// dense scan plus golden-section refinement of `R_L(r_b, r_s(r_b))` over
/// the feasible interval.
pub fn solve_case2_exact(prob: &Case2Problem, cfg: &SolverConfig) -> Result<Case2Solution> {
    cfg.validate()?;
    check_feasible(prob)?;
    if prob.gamma_floor == 0.0 {
        return degenerate_zero_floor(prob);
    }
    let bounds = rb_feasible_bounds(prob, cfg)?;
    if bounds.0 == bounds.1 {
        return build(prob, bounds.0, bounds, Case2Branch::ClampMin, None, false);
    }
    let (r_b, _) = minimize_scalar(|r| exact_objective(prob, r), bounds.0, bounds.1, cfg)?;
    build(prob, r_b, bounds, classify(r_b, bounds, cfg), None, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::throughput;
    use proptest::prelude::*;

    fn params(gb_db: f64, ge_db: f64) -> ChannelParams {
        ChannelParams::from_db(gb_db, ge_db).unwrap()
    }

    #[test]
    fn peak_at_two_ln_two() {
        let p = ChannelParams::new(2.0 * LN_2, 1.0).unwrap();
        assert!((r_peak(&p) - 1.0).abs() < 1e-15);
        let expected = (-1.0 / (2.0 * LN_2)).exp();
        assert!((gamma_max(&p) - expected).abs() < 1e-15);
    }

    #[test]
    fn peak_is_stationary_and_maximal() {
        let p = params(13.0, 3.0);
        let gb = p.gamma_bar_b;
        let r = r_peak(&p);
        // Pinned from mpmath: W0(10^1.3) / ln 2.
        assert!((r - R_PEAK_13DB).abs() < 1e-12, "{r}");
        let h = 1e-5;
        let slope = (eta_diagonal(gb, r + h) - eta_diagonal(gb, r - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-9);
        for d in [1e-3, 1e-2, 0.3] {
            assert!(eta_diagonal(gb, r + d) <= eta_diagonal(gb, r));
            assert!(eta_diagonal(gb, r - d) <= eta_diagonal(gb, r));
        }
        assert!(gamma_max(&p) <= r);
    }

    const R_PEAK_13DB: f64 = 3.178_793_566_566_934;

    #[test]
    fn gamma_max_matches_dense_grid() {
        let p = ChannelParams::new(10.0, 1.0).unwrap();
        let best = (0..=200_000)
            .map(|i| eta_diagonal(10.0, 8.0 * i as f64 / 200_000.0))
            .fold(0.0, f64::max);
        assert!((gamma_max(&p) - best).abs() < 1e-9);
    }

    #[test]
    fn bounds_at_tangency_and_near_zero() {
        let cfg = SolverConfig::default();
        let p = params(13.0, 3.0);
        let gm = gamma_max(&p);
        let (lo, hi) = rb_feasible_bounds(&Case2Problem::new(p, gm), &cfg).unwrap();
        assert_eq!((lo, hi), (r_peak(&p), r_peak(&p)));

        let (lo, hi) = rb_feasible_bounds(&Case2Problem::new(p, 1e-6), &cfg).unwrap();
        assert!(lo < 1e-5);
        assert!(hi > 2.0 * r_peak(&p));
    }

    #[test]
    fn bounds_solve_the_tangency_equation() {
        let cfg = SolverConfig::default();
        let p = params(13.0, 3.0);
        let (lo, hi) = rb_feasible_bounds(&Case2Problem::new(p, 0.5), &cfg).unwrap();
        assert!(lo < r_peak(&p) && r_peak(&p) < hi);
        assert!((eta_diagonal(p.gamma_bar_b, lo) - 0.5).abs() < 1e-9);
        assert!((eta_diagonal(p.gamma_bar_b, hi) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn infeasible_floors() {
        let cfg = SolverConfig::default();
        let p = params(13.0, 3.0);
        for g in [-0.1, gamma_max(&p) * 1.001, 99.0, f64::NAN] {
            let prob = Case2Problem::new(p, g);
            assert!(matches!(
                solve_case2_closed_form(&prob, &cfg),
                Err(Error::Infeasible { .. })
            ));
            assert!(matches!(
                solve_case2_exact(&prob, &cfg),
                Err(Error::Infeasible { .. })
            ));
        }
    }

    #[test]
    fn b_root_is_stationary() {
        let cfg = SolverConfig::default();
        let p = params(13.0, 3.0);
        let prob = Case2Problem::new(p, 0.5);
        let b = solve_b(&prob, &cfg).unwrap();
        assert!(b > 1.0);
        assert!(b_equation_residual(&prob, b).abs() < 1e-9);
        // Pinned from an independent mpmath solve.
        assert!((b - B_13DB_3DB_HALF).abs() < 1e-9, "{b}");

        let r0 = rb_from_b(&prob, b).unwrap();
        let h = 1e-6;
        let slope = (approx_objective(&prob, r0 + h) - approx_objective(&prob, r0 - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-7, "slope {slope}");
    }

    const B_13DB_3DB_HALF: f64 = 1.975_472_474_731_960;

    #[test]
    fn zero_floor_is_degenerate() {
        let cfg = SolverConfig::default();
        let p = params(10.0, 3.0);
        for sol in [
            solve_case2_closed_form(&Case2Problem::new(p, 0.0), &cfg).unwrap(),
            solve_case2_exact(&Case2Problem::new(p, 0.0), &cfg).unwrap(),
        ] {
            assert_eq!(sol.rates.r_s, 0.0);
            assert_eq!(sol.rates.r_b, 0.0);
            assert_eq!(sol.metrics.r_l_exact, 0.0);
            assert_eq!(sol.metrics.r_lp, 0.0);
            assert_eq!(sol.branch, Case2Branch::ClampMin);
        }
    }

    #[test]
    fn full_floor_sends_no_randomization() {
        let cfg = SolverConfig::default();
        let p = params(13.0, 3.0);
        let prob = Case2Problem::new(p, gamma_max(&p));
        for sol in [
            solve_case2_closed_form(&prob, &cfg).unwrap(),
            solve_case2_exact(&prob, &cfg).unwrap(),
        ] {
            assert_eq!(sol.rates.r_s, sol.rates.r_b);
            assert_eq!(sol.rates.r_b, r_peak(&p));
            assert_eq!(sol.metrics.phi, 0.0);
        }
    }

    #[test]
    fn fallback_agrees_with_b_path() {
        let cfg = SolverConfig::default();
        for (gb_db, ge_db) in [(10.0, 3.0), (13.0, 3.0), (20.0, 0.0), (6.0, 6.0)] {
            let p = params(gb_db, ge_db);
            let gm = gamma_max(&p);
            for k in 1..20 {
                let prob = Case2Problem::new(p, gm * k as f64 / 20.0);
                let closed = solve_case2_closed_form(&prob, &cfg).unwrap();
                let direct = solve_case2_direct(&prob, &cfg).unwrap();
                assert!(!closed.used_fallback);
                assert!(
                    (closed.metrics.r_lp - direct.metrics.r_lp).abs() <= 10.0 * cfg.abs_tol,
                    "{gb_db} {ge_db} {k}: {} vs {}",
                    closed.metrics.r_lp,
                    direct.metrics.r_lp
                );
            }
        }
    }

    #[test]
    fn interior_beats_endpoints() {
        let cfg = SolverConfig::default();
        let p = params(13.0, 3.0);
        let gm = gamma_max(&p);
        let mut interior = 0;
        for k in 1..50 {
            let prob = Case2Problem::new(p, gm * k as f64 / 50.0);
            let sol = solve_case2_closed_form(&prob, &cfg).unwrap();
            if sol.branch == Case2Branch::Interior {
                interior += 1;
                let (lo, hi) = sol.rb_bounds.unwrap();
                assert!(sol.metrics.r_lp <= approx_objective(&prob, lo));
                assert!(sol.metrics.r_lp <= approx_objective(&prob, hi));
            }
        }
        assert!(interior > 0);
    }

    proptest! {
        #[test]
        fn throughput_binds(gb_db in 3.0f64..25.0, ge_db in -3.0f64..8.0, frac in 0.01f64..0.999) {
            let cfg = SolverConfig::default();
            let p = params(gb_db, ge_db);
            let prob = Case2Problem::new(p, frac * gamma_max(&p));
            for sol in [solve_case2_closed_form(&prob, &cfg).unwrap(), solve_case2_exact(&prob, &cfg).unwrap()] {
                prop_assert!((throughput(&p, &sol.rates) - prob.gamma_floor).abs() <= 1e-9);
                prop_assert!(sol.rates.r_s <= sol.rates.r_b);
            }
        }
    }
}
