use anyhow::anyhow;
use serde::Serialize;

use leakrate::case1::{
    saturation_xi, solve_case1_closed_form, solve_case1_exact, xi_max, Case1Problem,
};
use leakrate::case2::{
    gamma_max, solve_case2_closed_form, solve_case2_direct, solve_case2_exact, Case2Problem,
};
use leakrate::channel::{leakage_exact, tx_probability, ChannelParams, RatePair};
use leakrate::oracle::{
    grid_optimize, grid_step_bound, mc_tx_probability, objective, quad_leakage, GridSpec,
    ProblemKind,
};
use leakrate::specfun::{ei_neg, ei_neg_scaled, lambert_w0, quad_exp_over_t, SolverConfig};
type Result<T> = leakrate::Result<T>;

use crate::{resolve_seed, Failure, Format, ValidateArgs, EXIT_USAGE, EXIT_VALIDATION};

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    error: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct ValidateReport {
    seed: u64,
    tol_scale: f64,
    passed: usize,
    failed: usize,
    checks: Vec<Check>,
}

const INSTANCES_DB: [(f64, f64); 3] = [(10.0, 3.0), (13.0, 3.0), (20.0, 0.0)];
const MC_SAMPLES: usize = 200_000;

fn instances() -> Vec<ChannelParams> {
    INSTANCES_DB
        .iter()
        .map(|&(b, e)| ChannelParams::from_db(b, e).expect("fixed instances are valid"))
        .collect()
}

fn ei_vs_quadrature() -> Result<f64> {
    let cfg = SolverConfig {
        quad_tol: 1e-13,
        ..SolverConfig::default()
    };
    let mut worst = 0.0f64;
    for k in 0..=60 {
        let x = 1e-3 * (5e4f64).powf(k as f64 / 60.0);
        let q = quad_exp_over_t(x, x + 60.0, &cfg)?;
        worst = worst.max(((-ei_neg(x)? - q) / q).abs());
    }
    Ok(worst)
}

fn lambert_residual() -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..=120 {
        let x = 1e-6 * (1e12f64).powf(k as f64 / 120.0);
        let w = lambert_w0(x)?;
        worst = worst.max((w * w.exp() - x).abs() / x.max(1.0));
    }
    Ok(worst)
}

/// Largest relative violation of `ln(1 + 2/x)/2 < e^x E1(x) < ln(1 + 1/x)`.
fn ei_envelope() -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..=80 {
        let x = 1e-3 * (7e5f64).powf(k as f64 / 80.0);
        let s = -ei_neg_scaled(x)?;
        let lo = 0.5 * (2.0 / x).ln_1p();
        let hi = (1.0 / x).ln_1p();
        worst = worst.max((lo - s) / s).max((s - hi) / s);
    }
    Ok(worst.max(0.0))
}

fn leakage_vs_quadrature(cfg: &SolverConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in instances() {
        for (r_b, r_s) in [(0.5, 0.2), (2.0, 1.0), (3.0, 2.5), (5.0, 0.5)] {
            let pair = RatePair::new(r_b, r_s)?;
            let want = leakage_exact(&p, &pair);
            let got = quad_leakage(&p, &pair, cfg)?;
            worst = worst.max((got - want).abs() / want.abs().max(1e-12));
        }
    }
    Ok(worst)
}

/// Worst |estimate - exact| in standard errors.
fn monte_carlo(seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, p) in instances().iter().enumerate() {
        for (j, frac) in [0.2, 0.5, 0.8].into_iter().enumerate() {
            let r_b = frac * (1.0 + 2.0 * p.gamma_bar_b).log2();
            let est = mc_tx_probability(p, r_b, MC_SAMPLES, seed.wrapping_add((3 * i + j) as u64))?;
            let want = tx_probability(p, r_b)?;
            let dev = (est.estimate - want).abs();
            worst = worst.max(if est.stderr > 0.0 {
                dev / est.stderr
            } else if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            });
        }
    }
    Ok(worst)
}

/// Rates chosen by the solver that `kind` checks.
fn solver_optimum(
    kind: ProblemKind,
    p: &ChannelParams,
    c: f64,
    cfg: &SolverConfig,
) -> Result<RatePair> {
    Ok(match kind {
        ProblemKind::Case1Exact => solve_case1_exact(&Case1Problem::new(*p, c), cfg)?.rates,
        ProblemKind::Case1Approx => solve_case1_closed_form(&Case1Problem::new(*p, c))?.rates,
        ProblemKind::Case2Exact => solve_case2_exact(&Case2Problem::new(*p, c), cfg)?.rates,
        ProblemKind::Case2Approx => solve_case2_closed_form(&Case2Problem::new(*p, c), cfg)?.rates,
    })
}

/// Worst `|grid - solver| / bound` over the fixed instances.
fn grid_oracle(kind: ProblemKind, n: usize, cfg: &SolverConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in instances() {
        let c = match kind {
            ProblemKind::Case1Exact | ProblemKind::Case1Approx => 0.3 * xi_max(&p),
            ProblemKind::Case2Exact | ProblemKind::Case2Approx => 0.5 * gamma_max(&p),
        };
        let grid = GridSpec {
            n_rb: n,
            n_rs: n,
            ..GridSpec::default_for(&p)
        };
        let rates = solver_optimum(kind, &p, c, cfg)?;
        let solved = objective(kind, &p, rates.r_b, rates.r_s);
        let g = grid_optimize(kind, &p, c, &grid)?;
        let bound = grid_step_bound(kind, &p, &rates, &grid);
        worst = worst.max((g.objective - solved).abs() / bound);
    }
    Ok(worst)
}

fn case1_binding(cfg: &SolverConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in instances() {
        for frac in [0.1, 0.5, 0.9] {
            let xi = frac * saturation_xi(&p).min(xi_max(&p));
            let prob = Case1Problem::new(p, xi);
            let a = solve_case1_closed_form(&prob)?;
            worst = worst.max((a.metrics.r_lp - xi).abs());
            let e = solve_case1_exact(&prob, cfg)?;
            if e.constraint_active {
                worst = worst.max((e.metrics.r_l_exact - xi).abs());
            }
        }
    }
    Ok(worst)
}

fn case2_binding(cfg: &SolverConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in instances() {
        for frac in [0.1, 0.5, 0.9] {
            let floor = frac * gamma_max(&p);
            let prob = Case2Problem::new(p, floor);
            let a = solve_case2_closed_form(&prob, cfg)?;
            let e = solve_case2_exact(&prob, cfg)?;
            worst = worst
                .max((a.metrics.eta - floor).abs())
                .max((e.metrics.eta - floor).abs());
        }
    }
    Ok(worst)
}

fn fallback_equivalence(cfg: &SolverConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in instances() {
        for k in 1..10 {
            let prob = Case2Problem::new(p, gamma_max(&p) * k as f64 / 10.0);
            let closed = solve_case2_closed_form(&prob, cfg)?;
            let direct = solve_case2_direct(&prob, cfg)?;
            worst = worst.max((closed.metrics.r_lp - direct.metrics.r_lp).abs());
        }
    }
    Ok(worst)
}

pub fn run(args: &ValidateArgs) -> std::result::Result<(), Failure> {
    if !(args.tol_scale >= 0.0) || !args.tol_scale.is_finite() {
        return Err(Failure::new(
            EXIT_USAGE,
            anyhow!(
                "--tol-scale must be a finite number >= 0, got {}",
                args.tol_scale
            ),
        ));
    }
    let seed = resolve_seed(args.seed)?;
    let cfg = SolverConfig::default();
    GridSpec::new(1e-3, 1.0, args.oracle_grid, args.oracle_grid)?;

    let mut raw: Vec<(String, Result<f64>, f64)> = vec![
        ("ei vs quadrature".into(), ei_vs_quadrature(), 1e-9),
        ("lambert w residual".into(), lambert_residual(), 1e-12),
        ("e1 envelope".into(), ei_envelope(), 0.0),
        (
            "exact leakage vs quadrature".into(),
            leakage_vs_quadrature(&cfg),
            1e-8,
        ),
        (
            "monte-carlo transmission probability (z)".into(),
            monte_carlo(seed),
            4.0,
        ),
    ];
    for kind in ProblemKind::ALL {
        raw.push((
            format!("grid oracle {kind:?} (gap / step bound)"),
            grid_oracle(kind, args.oracle_grid, &cfg),
            1.0,
        ));
    }
    raw.push(("case1 leakage cap binds".into(), case1_binding(&cfg), 1e-8));
    raw.push((
        "case2 throughput floor binds".into(),
        case2_binding(&cfg),
        1e-8,
    ));
    raw.push((
        "case2 fallback agrees with closed form".into(),
        fallback_equivalence(&cfg),
        10.0 * cfg.abs_tol,
    ));

    let checks: Vec<Check> = raw
        .into_iter()
        .map(|(name, err, tol)| {
            let tolerance = tol * args.tol_scale;
            let error = match err {
                Ok(e) => e,
                Err(e) => {
                    log::warn!("{name}: {e}");
                    f64::INFINITY
                }
            };
            Check {
                name,
                error,
                tolerance,
                pass: error <= tolerance,
            }
        })
        .collect();
    let failed = checks.iter().filter(|c| !c.pass).count();
    let report = ValidateReport {
        seed,
        tol_scale: args.tol_scale,
        passed: checks.len() - failed,
        failed,
        checks,
    };

    match args.format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("plain data serializes")
            )
        }
        Format::Csv => {
            println!("check,error,tolerance,pass");
            for c in &report.checks {
                println!("{},{},{},{}", c.name, c.error, c.tolerance, c.pass);
            }
        }
        Format::Plain => {
            for c in &report.checks {
                println!(
                    "{} {}: error {:.3e}, tolerance {:.3e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.error,
                    c.tolerance
                );
            }
            println!(
                "{} passed, {} failed (seed {seed})",
                report.passed, report.failed
            );
        }
    }
    if failed > 0 {
        return Err(Failure::new(
            EXIT_VALIDATION,
            anyhow!("{failed} validation checks failed"),
        ));
    }
    Ok(())
}
