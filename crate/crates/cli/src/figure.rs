//! Plot-ready data for the replacement-versus-FCFS average age comparison.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use aoi_core::analytics;
use aoi_core::format::fmt_real;
use aoi_core::QueuePolicy;

use crate::error::CliError;
use crate::sweep::{run_sweep, SweepRow, SweepSpec};

pub const DEFAULT_FIGURE_RHO: &str = "0.1:3:0.1";
pub const FIGURE_COLUMNS: &str = "rho,replacement_analytic,replacement_sim,fcfs_sim,asymptote";

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutcome {
    pub rows: Vec<SweepRow>,
    pub data: String,
    pub script: String,
    pub data_path: PathBuf,
    pub script_path: PathBuf,
}

fn script_path_for(data: &Path) -> PathBuf {
    let mut name = data
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".gp");
    data.with_file_name(name)
}

fn gnuplot_script(data: &Path, mu: f64) -> String {
    let file = data.display();
    format!(
        "# gnuplot script for {file}\n\
         set datafile separator ','\n\
         set key top right\n\
         set xlabel 'rho'\n\
         set ylabel 'average age'\n\
         set title 'Average age with and without packet replacement (mu = {mu})'\n\
         set yrange [0:*]\n\
         plot '{file}' using 1:2 with lines title 'replacement (analytic)', \\\n\
         \x20    '{file}' using 1:3 with points pt 7 title 'replacement (simulated)', \\\n\
         \x20    '{file}' using 1:4 with linespoints title 'FCFS (simulated)', \\\n\
         \x20    '{file}' using 1:5 with lines dashtype 2 title 'asymptote 2/mu'\n"
    )
}

/// Runs both policies over the spec's grid and writes two files: the curve
/// data at `path` and a gnuplot script at `path` + `.gp`.
///
/// Columns: `rho`, replacement analytic and simulated age, FCFS simulated
/// age, and the constant asymptote `2/mu`. Missing values are empty fields.
pub fn emit_figure_data(spec: &SweepSpec, path: &Path) -> Result<FigureOutcome, CliError> {
    let sweep = SweepSpec {
        policies: vec![QueuePolicy::Replacement, QueuePolicy::Fcfs],
        output_path: None,
        ..spec.clone()
    };
    let outcome = run_sweep(&sweep)?;
    let asymptote = analytics::avg_age_min(spec.mu);
    let f = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
    let mut data = String::new();
    data.push_str(FIGURE_COLUMNS);
    data.push('\n');
    for pair in outcome.rows.chunks(2) {
        let (rep, fcfs) = (&pair[0], &pair[1]);
        let _ = writeln!(
            data,
            "{},{},{},{},{}",
            fmt_real(rep.rho),
            f(rep.analytic_avg_age),
            f(rep.sim_avg_age),
            f(fcfs.sim_avg_age),
            fmt_real(asymptote)
        );
    }
    let script_path = script_path_for(path);
    let script = gnuplot_script(path, spec.mu);
    fs::write(path, &data).map_err(|e| CliError::io(path, e))?;
    fs::write(&script_path, &script).map_err(|e| CliError::io(&script_path, e))?;
    Ok(FigureOutcome {
        rows: outcome.rows,
        data,
        script,
        data_path: path.to_path_buf(),
        script_path,
    })
}
