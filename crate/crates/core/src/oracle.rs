//! Independent ground truth for the solvers: exhaustive 2-D grid search,
//! Monte-Carlo transmission probability, and leakage by quadrature.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::case1::exact_search_interval;
use crate::channel::{
    leakage_approx_raw, leakage_exact_raw, p_tx, sample_snr, ChannelParams, RatePair,
};
use crate::specfun::{ei_neg_scaled, quad_exp_over_t, SolverConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProblemKind {
    /// Maximize throughput s.t. exact leakage <= xi.
    Case1Exact,
    /// Maximize throughput s.t. approximate leakage <= xi.
    Case1Approx,
    /// Minimize exact leakage s.t. throughput >= Γ.
    Case2Exact,
    /// Minimize approximate leakage s.t. throughput >= Γ.
    Case2Approx,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::Case1Exact,
        ProblemKind::Case1Approx,
        ProblemKind::Case2Exact,
        ProblemKind::Case2Approx,
    ];

    fn maximizes(self) -> bool {
        matches!(self, ProblemKind::Case1Exact | ProblemKind::Case1Approx)
    }

    fn exact(self) -> bool {
        matches!(self, ProblemKind::Case1Exact | ProblemKind::Case2Exact)
    }
}

/// Rectangular-in-`(r_b, t)` grid: column `i` sits at
/// `r_b = rb_lo + i (rb_hi - rb_lo) / (n_rb - 1)` and row `j` at
/// `r_s = j r_b / (n_rs - 1)`, so the diagonal `r_s = r_b` is always on the
/// grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rb_lo: f64,
    pub rb_hi: f64,
    pub n_rb: usize,
    pub n_rs: usize,
}

pub const DEFAULT_GRID_POINTS: usize = 1500;
pub const DEFAULT_RB_LO: f64 = 1e-3;

impl GridSpec {
    pub fn new(rb_lo: f64, rb_hi: f64, n_rb: usize, n_rs: usize) -> Result<Self> {
        let g = GridSpec {
            rb_lo,
            rb_hi,
            n_rb,
            n_rs,
        };
        g.validate()?;
        Ok(g)
    }

    /// 1500 x 1500 over `[1e-3, r_b_hi]`, with `r_b_hi` the exact-solver
    /// search bound where `p_tx` drops below 1e-8.
    pub fn default_for(params: &ChannelParams) -> Self {
        GridSpec {
            rb_lo: DEFAULT_RB_LO,
            rb_hi: exact_search_interval(params).1,
            n_rb: DEFAULT_GRID_POINTS,
            n_rs: DEFAULT_GRID_POINTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rb_lo >= 0.0 && self.rb_lo < self.rb_hi && self.rb_hi.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "grid needs 0 <= rb_lo < rb_hi < inf, got [{}, {}]",
                self.rb_lo, self.rb_hi
            )));
        }
        if self.n_rb < 2 || self.n_rs < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid counts must be >= 2, got {} x {}",
                self.n_rb, self.n_rs
            )));
        }
        Ok(())
    }

    pub fn rb_step(&self) -> f64 {
        (self.rb_hi - self.rb_lo) / (self.n_rb - 1) as f64
    }

    /// Widest `r_s` step, reached in the last column.
    pub fn rs_step_max(&self) -> f64 {
        self.rb_hi / (self.n_rs - 1) as f64
    }

    pub fn rb_at(&self, i: usize) -> f64 {
        if i + 1 == self.n_rb {
            self.rb_hi
        } else {
            self.rb_lo + i as f64 * self.rb_step()
        }
    }

    pub fn rs_at(&self, r_b: f64, j: usize) -> f64 {
        if j + 1 == self.n_rs {
            r_b
        } else {
            r_b * j as f64 / (self.n_rs - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOptimum {
    pub rates: RatePair,
    pub objective: f64,
    pub column: usize,
    pub row: usize,
}

/// Exact leakage along one column. The far Ei term depends only on `r_b`.
struct ExactColumn {
    ge: f64,
    r_b: f64,
    far: f64,
}

impl ExactColumn {
    fn new(ge: f64, r_b: f64) -> Self {
        ExactColumn {
            ge,
            r_b,
            far: scaled_term(ge, r_b.exp2()),
        }
    }

    fn leakage(&self, r_s: f64) -> f64 {
        let near = scaled_term(self.ge, (self.r_b - r_s).exp2());
        ((self.far - near) / LN_2).max(0.0)
    }
}

fn scaled_term(ge: f64, x: f64) -> f64 {
    let arg = x / ge;
    if arg.is_infinite() {
        return 0.0;
    }
    ((1.0 - x) / ge).exp() * ei_neg_scaled(arg).expect("argument is positive")
}

/// Best feasible point of one column as `(objective, row)`; first row wins
/// ties.
fn scan_column(
    kind: ProblemKind,
    params: &ChannelParams,
    constraint: f64,
    grid: &GridSpec,
    i: usize,
) -> Option<(f64, usize)> {
    let r_b = grid.rb_at(i);
    let half = 0.5 * r_b / (grid.n_rs - 1) as f64;
    let ptx = p_tx(params.gamma_bar_b, r_b);
    let ge = params.gamma_bar_e;
    let column = kind.exact().then(|| ExactColumn::new(ge, r_b));
    let leak = |r_s: f64| match &column {
        Some(c) => c.leakage(r_s),
        None => leakage_approx_raw(ge, r_b, r_s),
    };

    let mut best: Option<(f64, usize)> = None;
    for j in 0..grid.n_rs {
        let r_s = grid.rs_at(r_b, j);
        let (feasible, objective) = if kind.maximizes() {
            let feasible = leak((r_s - half).max(0.0)) <= constraint;
            (feasible, ptx * r_s)
        } else {
            let feasible = ptx * (r_s + half) >= constraint;
            (feasible, if feasible { leak(r_s) } else { f64::NAN })
        };
        if !feasible || objective.is_nan() {
            continue;
        }
        let better = match best {
            None => true,
            Some((b, _)) if kind.maximizes() => objective > b,
            Some((b, _)) => objective < b,
        };
        if better {
            best = Some((objective, j));
        }
    }
    best
}

/// Exhaustive search of `kind` over every feasible point of `grid`.
///
/// Feasibility carries a half-step slack along `r_s` so a binding optimum
/// is not lost between rows. Columns run in parallel; the reduction keeps
/// the lowest `(column, row)` among equal objectives, so the result equals
/// the sequential scan.
pub fn grid_optimize(
    kind: ProblemKind,
    params: &ChannelParams,
    constraint: f64,
    grid: &GridSpec,
) -> Result<GridOptimum> {
    grid.validate()?;
    if constraint.is_nan() {
        return Err(Error::Domain {
            what: "grid_optimize constraint",
            value: constraint,
            expected: "a number",
        });
    }
    let columns: Vec<Option<(f64, usize)>> = (0..grid.n_rb)
        .into_par_iter()
        .map(|i| scan_column(kind, params, constraint, grid, i))
        .collect();

    let mut best: Option<(f64, usize, usize)> = None;
    for (i, col) in columns.into_iter().enumerate() {
        let Some((obj, j)) = col else { continue };
        let better = match best {
            None => true,
            Some((b, _, _)) if kind.maximizes() => obj > b,
            Some((b, _, _)) => obj < b,
        };
        if better {
            best = Some((obj, i, j));
        }
    }
    let (objective, column, row) = best.ok_or_else(|| Error::Infeasible {
        constraint: if kind.maximizes() {
            "leakage cap"
        } else {
            "throughput floor"
        },
        value: constraint,
        range: "no grid point satisfies the constraint".to_string(),
    })?;
    let r_b = grid.rb_at(column);
    Ok(GridOptimum {
        rates: RatePair::new(r_b, grid.rs_at(r_b, row))?,
        objective,
        column,
        row,
    })
}

/// Objective of `kind` at a rate pair, without domain checks.
pub fn objective(kind: ProblemKind, params: &ChannelParams, r_b: f64, r_s: f64) -> f64 {
    match kind {
        ProblemKind::Case1Exact | ProblemKind::Case1Approx => p_tx(params.gamma_bar_b, r_b) * r_s,
        ProblemKind::Case2Exact => leakage_exact_raw(params.gamma_bar_e, r_b, r_s),
        ProblemKind::Case2Approx => leakage_approx_raw(params.gamma_bar_e, r_b, r_s),
    }
}

/// How far the grid optimum may sit from the continuous optimum at `at`.
///
/// A grid point lies within one `r_b` step and one `r_s` step of any point,
/// and following a constraint curve of slope up to one adds another `r_b`
/// step along `r_s`. With forward-difference partials `f_b`, `f_s` at `at`
/// this gives `|f_b| Δb + |f_s| (Δb + Δs)`; the result is doubled to cover
/// curvature and steeper curve segments.
pub fn grid_step_bound(
    kind: ProblemKind,
    params: &ChannelParams,
    at: &RatePair,
    grid: &GridSpec,
) -> f64 {
    let h = 1e-6;
    let f0 = objective(kind, params, at.r_b, at.r_s);
    let f_b = (objective(kind, params, at.r_b + h, at.r_s) - f0) / h;
    let f_s = (objective(kind, params, at.r_b, at.r_s + h) - f0) / h;
    let db = grid.rb_step();
    let ds = grid.rs_step_max();
    2.0 * (f_b.abs() * db + f_s.abs() * (db + ds))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

pub const MC_MIN_SAMPLES: usize = 10_000;

/// Fraction of `n` sampled main-channel SNRs whose capacity supports `r_b`,
/// with its binomial standard error.
pub fn mc_tx_probability(
    params: &ChannelParams,
    r_b: f64,
    n: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n < MC_MIN_SAMPLES {
        return Err(Error::InvalidConfig(format!(
            "Monte-Carlo needs n >= {MC_MIN_SAMPLES}, got {n}"
        )));
    }
    if !(r_b >= 0.0) {
        return Err(Error::Domain {
            what: "mc_tx_probability",
            value: r_b,
            expected: "r_b >= 0",
        });
    }
    let hits = sample_snr(params.gamma_bar_b, seed, n)?
        .into_iter()
        .filter(|&g| g.ln_1p() / LN_2 >= r_b)
        .count();
    let p = hits as f64 / n as f64;
    Ok(McEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / n as f64).sqrt(),
    })
}

/// Exact leakage by direct integration of `e^{-t}/t` instead of Ei.
pub fn quad_leakage(params: &ChannelParams, pair: &RatePair, cfg: &SolverConfig) -> Result<f64> {
    let ge = params.gamma_bar_e;
    let u = (pair.r_b - pair.r_s).exp2() / ge;
    let v = pair.r_b.exp2() / ge;
    if u == v {
        return Ok(0.0);
    }
    Ok((1.0 / ge).exp() * quad_exp_over_t(u, v, cfg)? / LN_2)
}
