use anyhow::Context;
use serde::Serialize;

use leakrate::channel::ChannelParams;
use leakrate::report::{
    emit_csv, emit_svg, format_sig, sweep, PlotMetric, SweepCase, SweepSpec, SweepSummary,
};

use crate::{Case, Failure, Format, SweepArgs, EXIT_IO};

#[derive(Debug, Serialize)]
struct SweepReport<'a> {
    case: SweepCase,
    points: usize,
    files: Vec<String>,
    summary: &'a [SweepSummary],
}

pub fn run(args: &SweepArgs) -> Result<(), Failure> {
    let case = match args.case {
        Case::Case1 => SweepCase::Case1,
        Case::Case2 => SweepCase::Case2,
    };
    let params = args
        .gamma_b_db
        .iter()
        .map(|&gb| ChannelParams::from_db(gb, args.gamma_e_db))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SweepSpec::uniform(
        case,
        params,
        args.points,
        (args.lo, args.hi),
        args.solver.to_config(),
    )?;
    let table = sweep(&spec)?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))
        .map_err(|e| Failure::new(EXIT_IO, e))?;
    let stem = match case {
        SweepCase::Case1 => "case1",
        SweepCase::Case2 => "case2",
    };
    let main_metric = match case {
        SweepCase::Case1 => (PlotMetric::Throughput, "throughput"),
        SweepCase::Case2 => (PlotMetric::Leakage, "leakage"),
    };
    let mut files = Vec::new();
    let csv_path = args.out_dir.join(format!("{stem}.csv"));
    emit_csv(&table, &csv_path)?;
    files.push(csv_path);
    for (metric, name) in [
        main_metric,
        (PlotMetric::Rates, "rates"),
        (PlotMetric::SecrecyCost, "secrecy_cost"),
    ] {
        let path = args.out_dir.join(format!("{stem}_{name}.svg"));
        emit_svg(&table, metric, &path)?;
        files.push(path);
    }
    let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();

    match args.format {
        Format::Json => {
            let report = SweepReport {
                case,
                points: table.rows.len(),
                files,
                summary: &table.summary,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("plain data serializes")
            );
        }
        Format::Plain | Format::Csv => {
            for s in &table.summary {
                println!(
                    "{}: {} feasible rows, max |d eta| {}, max |d R_L| {} (approximate-metric reading {}), max |d R_b| {}, max |d R_s| {}",
                    s.label,
                    s.feasible_rows,
                    format_sig(s.max_err_eta, 6),
                    format_sig(s.max_err_rl, 6),
                    format_sig(s.max_err_rl_alt, 6),
                    format_sig(s.max_err_rb, 6),
                    format_sig(s.max_err_rs, 6)
                );
            }
            for f in files {
                println!("wrote {f}");
            }
        }
    }
    Ok(())
}
