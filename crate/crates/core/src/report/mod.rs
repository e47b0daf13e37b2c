//! Constraint sweeps comparing the exact optimum with the closed-form
//! approximation, plus CSV and SVG output.

mod csv_out;
mod svg;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::case1::{solve_case1_closed_form, solve_case1_exact, xi_max, Case1Problem};
use crate::case2::{gamma_max, solve_case2_closed_form, solve_case2_exact, Case2Problem};
use crate::channel::{ChannelParams, MetricBundle, RatePair};
use crate::specfun::SolverConfig;
use crate::{Error, Result};

pub use csv_out::{emit_csv, format_sig, header};
pub use svg::{emit_svg, render_svg, PlotMetric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SweepCase {
    /// Throughput maximization under a leakage cap `ξ`.
    Case1,
    /// Leakage minimization under a throughput floor `Γ`.
    Case2,
}

impl SweepCase {
    pub fn constraint_name(self) -> &'static str {
        match self {
            SweepCase::Case1 => "xi",
            SweepCase::Case2 => "throughput",
        }
    }
}

/// Largest constraint value the closed form accepts for `params`.
pub fn feasible_max(case: SweepCase, params: &ChannelParams) -> f64 {
    match case {
        SweepCase::Case1 => xi_max(params),
        SweepCase::Case2 => gamma_max(params),
    }
}

pub const DEFAULT_SWEEP_POINTS: usize = 50;
pub const DEFAULT_SWEEP_FRACTIONS: (f64, f64) = (0.02, 0.95);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub case: SweepCase,
    pub params_list: Vec<ChannelParams>,
    pub constraint_grid: Vec<f64>,
    pub cfg: SolverConfig,
}

impl SweepSpec {
    /// `n` uniformly spaced constraint values over `[lo, hi]` times the
    /// smallest feasible maximum among `params_list`, so every curve covers
    /// the whole grid when `hi < 1`.
    pub fn uniform(
        case: SweepCase,
        params_list: Vec<ChannelParams>,
        n: usize,
        (lo, hi): (f64, f64),
        cfg: SolverConfig,
    ) -> Result<Self> {
        let top = params_list
            .iter()
            .map(|p| feasible_max(case, p))
            .fold(f64::INFINITY, f64::min);
        let constraint_grid = match n {
            0 => Vec::new(),
            1 => vec![lo * top],
            _ => (0..n)
                .map(|k| (lo + (hi - lo) * k as f64 / (n - 1) as f64) * top)
                .collect(),
        };
        let spec = SweepSpec {
            case,
            params_list,
            constraint_grid,
            cfg,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// 50 points over `[0.02, 0.95]` of the feasible maximum.
    pub fn default_for(case: SweepCase, params_list: Vec<ChannelParams>) -> Result<Self> {
        Self::uniform(
            case,
            params_list,
            DEFAULT_SWEEP_POINTS,
            DEFAULT_SWEEP_FRACTIONS,
            SolverConfig::default(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        if self.params_list.is_empty() {
            return Err(Error::InvalidConfig("sweep needs at least one params entry".into()));
        }
        if self.constraint_grid.is_empty() {
            return Err(Error::InvalidConfig("sweep needs at least one constraint value".into()));
        }
        if let Some(bad) = self.constraint_grid.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "constraint values must be finite and >= 0, got {bad}"
            )));
        }
        Ok(())
    }
}

/// Exact optimum and closed-form solution of one (constraint, params) cell,
/// both evaluated with the exact and the approximate metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub rb_exact: f64,
    pub rs_exact: f64,
    pub eta_exact: f64,
    pub rl_exact: f64,
    pub phi_exact: f64,
    pub rb_approx: f64,
    pub rs_approx: f64,
    pub eta_at_approx: f64,
    pub rl_at_approx: f64,
    pub rlp_approx: f64,
    pub phi_approx: f64,
    pub err_eta: f64,
    pub err_rl: f64,
    pub err_rb: f64,
    pub err_rs: f64,
    /// `|rl_exact - rlp_approx|`: the approximate curve read as the
    /// approximate metric rather than the exact metric at approximate rates.
    pub err_rl_alt: f64,
}

/// Per-cell columns in output order.
pub const CELL_FIELDS: [&str; 15] = [
    "rb_exact",
    "rs_exact",
    "eta_exact",
    "rl_exact",
    "phi_exact",
    "rb_approx",
    "rs_approx",
    "eta_at_approx",
    "rl_at_approx",
    "rlp_approx",
    "phi_approx",
    "err_eta",
    "err_rl",
    "err_rb",
    "err_rs",
];

impl SweepCell {
    pub fn new(exact: (&RatePair, &MetricBundle), approx: (&RatePair, &MetricBundle)) -> Self {
        let (xr, xm) = exact;
        let (ar, am) = approx;
        SweepCell {
            rb_exact: xr.r_b,
            rs_exact: xr.r_s,
            eta_exact: xm.eta,
            rl_exact: xm.r_l_exact,
            phi_exact: xm.phi,
            rb_approx: ar.r_b,
            rs_approx: ar.r_s,
            eta_at_approx: am.eta,
            rl_at_approx: am.r_l_exact,
            rlp_approx: am.r_lp,
            phi_approx: am.phi,
            err_eta: (xm.eta - am.eta).abs(),
            err_rl: (xm.r_l_exact - am.r_l_exact).abs(),
            err_rb: (xr.r_b - ar.r_b).abs(),
            err_rs: (xr.r_s - ar.r_s).abs(),
            err_rl_alt: (xm.r_l_exact - am.r_lp).abs(),
        }
    }

    /// Values in [`CELL_FIELDS`] order.
    pub fn values(&self) -> [f64; 15] {
        [
            self.rb_exact,
            self.rs_exact,
            self.eta_exact,
            self.rl_exact,
            self.phi_exact,
            self.rb_approx,
            self.rs_approx,
            self.eta_at_approx,
            self.rl_at_approx,
            self.rlp_approx,
            self.phi_approx,
            self.err_eta,
            self.err_rl,
            self.err_rb,
            self.err_rs,
        ]
    }
}

/// One constraint value; `cells[k]` belongs to `params_list[k]` and is
/// `None` where either solver rejected the constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub constraint: f64,
    pub cells: Vec<Option<SweepCell>>,
}

/// Largest errors over the feasible rows of one params entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub label: String,
    pub feasible_rows: usize,
    pub max_err_eta: f64,
    pub max_err_rl: f64,
    pub max_err_rl_alt: f64,
    pub max_err_rb: f64,
    pub max_err_rs: f64,
}

impl SweepSummary {
    /// Largest distance between the exact and approximate rate curves.
    pub fn rate_distance(&self) -> f64 {
        self.max_err_rb.max(self.max_err_rs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub case: SweepCase,
    pub params_list: Vec<ChannelParams>,
    pub rows: Vec<SweepRow>,
    pub summary: Vec<SweepSummary>,
}

impl SweepTable {
    pub fn new(case: SweepCase, params_list: Vec<ChannelParams>, mut rows: Vec<SweepRow>) -> Self {
        rows.sort_by(|a, b| a.constraint.total_cmp(&b.constraint));
        let summary = params_list
            .iter()
            .enumerate()
            .map(|(k, p)| summarize(params_label(p), rows.iter().filter_map(|r| r.cells[k])))
            .collect();
        SweepTable {
            case,
            params_list,
            rows,
            summary,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.params_list.iter().map(params_label).collect()
    }

    /// `(constraint, value)` over the feasible rows of params entry `k`.
    pub fn series(&self, k: usize, pick: impl Fn(&SweepCell) -> f64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| r.cells[k].as_ref().map(|c| (r.constraint, pick(c))))
            .collect()
    }
}

fn summarize(label: String, cells: impl Iterator<Item = SweepCell>) -> SweepSummary {
    let mut s = SweepSummary {
        label,
        feasible_rows: 0,
        max_err_eta: 0.0,
        max_err_rl: 0.0,
        max_err_rl_alt: 0.0,
        max_err_rb: 0.0,
        max_err_rs: 0.0,
    };
    for c in cells {
        s.feasible_rows += 1;
        s.max_err_eta = s.max_err_eta.max(c.err_eta);
        s.max_err_rl = s.max_err_rl.max(c.err_rl);
        s.max_err_rl_alt = s.max_err_rl_alt.max(c.err_rl_alt);
        s.max_err_rb = s.max_err_rb.max(c.err_rb);
        s.max_err_rs = s.max_err_rs.max(c.err_rs);
    }
    s
}

/// Label such as `b13dB_e3dB`, used for CSV column blocks and legends.
pub fn params_label(p: &ChannelParams) -> String {
    format!(
        "b{}dB_e{}dB",
        format_sig(10.0 * p.gamma_bar_b.log10(), 6),
        format_sig(10.0 * p.gamma_bar_e.log10(), 6)
    )
}

fn solve_cell(
    case: SweepCase,
    params: &ChannelParams,
    constraint: f64,
    cfg: &SolverConfig,
) -> Result<SweepCell> {
    match case {
        SweepCase::Case1 => {
            let prob = Case1Problem::new(*params, constraint);
            let approx = solve_case1_closed_form(&prob)?;
            let exact = solve_case1_exact(&prob, cfg)?;
            Ok(SweepCell::new(
                (&exact.rates, &exact.metrics),
                (&approx.rates, &approx.metrics),
            ))
        }
        SweepCase::Case2 => {
            let prob = Case2Problem::new(*params, constraint);
            let approx = solve_case2_closed_form(&prob, cfg)?;
            let exact = solve_case2_exact(&prob, cfg)?;
            Ok(SweepCell::new(
                (&exact.rates, &exact.metrics),
                (&approx.rates, &approx.metrics),
            ))
        }
    }
}

/// Solves every (constraint, params) cell of `spec`. Constraint values
/// beyond a params entry's feasible range leave that cell empty; they are
/// logged and excluded from the summary maxima. Solver errors other than
/// infeasibility abort the sweep.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let n_params = spec.params_list.len();
    let cells: Vec<Result<Option<SweepCell>>> = (0..spec.constraint_grid.len() * n_params)
        .into_par_iter()
        .map(|idx| {
            let c = spec.constraint_grid[idx / n_params];
            let p = &spec.params_list[idx % n_params];
            match solve_cell(spec.case, p, c, &spec.cfg) {
                Ok(cell) => Ok(Some(cell)),
                Err(Error::Infeasible { .. }) => {
                    log::warn!(
                        "{} = {c} is infeasible for {} (max {}); cell left empty",
                        spec.case.constraint_name(),
                        params_label(p),
                        feasible_max(spec.case, p)
                    );
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut flat = cells.into_iter();
    let mut rows = Vec::with_capacity(spec.constraint_grid.len());
    for &constraint in &spec.constraint_grid {
        let cells = flat.by_ref().take(n_params).collect::<Result<Vec<_>>>()?;
        rows.push(SweepRow { constraint, cells });
    }
    Ok(SweepTable::new(spec.case, spec.params_list.clone(), rows))
}

/// Discrete second differences `v[i+1] - 2 v[i] + v[i-1]`.
pub fn second_differences(values: &[f64]) -> Vec<f64> {
    values.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect()
}
