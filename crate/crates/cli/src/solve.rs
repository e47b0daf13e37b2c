use anyhow::anyhow;
use serde::Serialize;

use leakrate::case1::{solve_case1_closed_form, solve_case1_exact, xi_max, Case1Problem};
use leakrate::case2::{gamma_max, solve_case2_closed_form, solve_case2_exact, Case2Problem};
use leakrate::channel::{ChannelParams, MetricBundle, RatePair};
use leakrate::report::format_sig;

use crate::{Case, Failure, Format, SolveArgs, EXIT_USAGE};

#[derive(Debug, Serialize)]
struct SolutionView {
    r_b: f64,
    r_s: f64,
    p_tx: f64,
    eta: f64,
    phi: f64,
    r_l_exact: f64,
    r_lp: f64,
    branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_root: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    used_fallback: Option<bool>,
}

impl SolutionView {
    fn new(rates: &RatePair, m: &MetricBundle, branch: impl Serialize) -> Self {
        let branch = serde_json::to_value(branch)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        SolutionView {
            r_b: rates.r_b,
            r_s: rates.r_s,
            p_tx: m.p_tx,
            eta: m.eta,
            phi: m.phi,
            r_l_exact: m.r_l_exact,
            r_lp: m.r_lp,
            branch,
            b_root: None,
            used_fallback: None,
        }
    }

    fn numbers(&self) -> [f64; 7] {
        [
            self.r_b,
            self.r_s,
            self.p_tx,
            self.eta,
            self.phi,
            self.r_l_exact,
            self.r_lp,
        ]
    }
}

#[derive(Debug, Serialize)]
struct SolveReport {
    case: &'static str,
    gamma_b_db: f64,
    gamma_e_db: f64,
    gamma_b_linear: f64,
    gamma_e_linear: f64,
    constraint_name: &'static str,
    constraint: f64,
    feasible_max: f64,
    closed_form: SolutionView,
    exact: SolutionView,
}

const COLUMNS: [&str; 7] = ["r_b", "r_s", "p_tx", "eta", "phi", "r_l_exact", "r_lp"];

fn constraint(args: &SolveArgs) -> Result<(&'static str, f64), Failure> {
    let usage = |msg: &str| Failure::new(EXIT_USAGE, anyhow!("{msg}"));
    match (args.case, args.xi, args.throughput) {
        (Case::Case1, Some(xi), None) => Ok(("xi", xi)),
        (Case::Case2, None, Some(t)) => Ok(("throughput", t)),
        (Case::Case1, _, _) => Err(usage("case1 takes --xi and no --throughput")),
        (Case::Case2, _, _) => Err(usage("case2 takes --throughput and no --xi")),
    }
}

pub fn run(args: &SolveArgs) -> Result<(), Failure> {
    let (name, value) = constraint(args)?;
    let params = ChannelParams::from_db(args.gamma_b_db, args.gamma_e_db)?;
    let cfg = args.solver.to_config();
    cfg.validate()?;

    let (case, feasible_max, closed_form, exact) = match args.case {
        Case::Case1 => {
            let prob = Case1Problem::new(params, value);
            let a = solve_case1_closed_form(&prob)?;
            let e = solve_case1_exact(&prob, &cfg)?;
            (
                "case1",
                xi_max(&params),
                SolutionView::new(&a.rates, &a.metrics, a.branch),
                SolutionView::new(&e.rates, &e.metrics, e.branch),
            )
        }
        Case::Case2 => {
            let prob = Case2Problem::new(params, value);
            let a = solve_case2_closed_form(&prob, &cfg)?;
            let e = solve_case2_exact(&prob, &cfg)?;
            let mut closed = SolutionView::new(&a.rates, &a.metrics, a.branch);
            closed.b_root = a.b_root;
            closed.used_fallback = Some(a.used_fallback);
            (
                "case2",
                gamma_max(&params),
                closed,
                SolutionView::new(&e.rates, &e.metrics, e.branch),
            )
        }
    };
    let report = SolveReport {
        case,
        gamma_b_db: args.gamma_b_db,
        gamma_e_db: args.gamma_e_db,
        gamma_b_linear: params.gamma_bar_b,
        gamma_e_linear: params.gamma_bar_e,
        constraint_name: name,
        constraint: value,
        feasible_max,
        closed_form,
        exact,
    };
    print!("{}", render(&report, args.format));
    Ok(())
}

fn render(r: &SolveReport, format: Format) -> String {
    let rows = [("closed-form", &r.closed_form), ("exact", &r.exact)];
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("plain data serializes") + "\n",
        Format::Csv => {
            let mut s = format!("solver,branch,{}\n", COLUMNS.join(","));
            for (solver, v) in rows {
                let nums: Vec<String> = v.numbers().iter().map(f64::to_string).collect();
                s += &format!("{solver},{},{}\n", v.branch, nums.join(","));
            }
            s
        }
        Format::Plain => {
            let max_name = if r.case == "case1" {
                "xi_max"
            } else {
                "gamma_max"
            };
            let mut s = format!(
                "{}: gamma_b = {} dB, gamma_e = {} dB, {} = {} ({max_name} = {})\n",
                r.case,
                format_sig(r.gamma_b_db, 6),
                format_sig(r.gamma_e_db, 6),
                r.constraint_name,
                format_sig(r.constraint, 6),
                format_sig(r.feasible_max, 6)
            );
            s += &format!("{:<12} {:<15}", "solver", "branch");
            for c in COLUMNS {
                s += &format!(" {c:>12}");
            }
            s += "\n";
            for (solver, v) in rows {
                s += &format!("{solver:<12} {:<15}", v.branch);
                for x in v.numbers() {
                    s += &format!(" {:>12}", format_sig(x, 6));
                }
                s += "\n";
            }
            if let Some(b) = r.closed_form.b_root {
                s += &format!("B = {}\n", format_sig(b, 6));
            }
            s
        }
    }
}
