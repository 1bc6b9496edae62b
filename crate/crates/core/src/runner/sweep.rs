use std::io::Write;

use rayon::prelude::*;

use super::config::SweepGrid;
use super::output::{fmt_f64, report_values, write_table, Metadata, REPORT_COLUMNS};
use crate::bogoliubov::geometry::H_SQUARED_REGIME;
use crate::bogoliubov::perturbative::truncation_tail_estimate;
use crate::error::{Error, Result};
use crate::protocol::{FidelityReport, Protocol};
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub tau_s: f64,
    pub a_m_s2: f64,
    pub h: f64,
    pub report: FidelityReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SweepGrid,
    /// Tau-major: all accelerations for the first tau, then the next tau.
    pub rows: Vec<SweepRow>,
    /// Worst truncation defect over all grid points.
    pub worst_defect: f64,
}

impl SweepResult {
    /// Largest `(F_opt(rest) - F_opt) / F_opt(rest)` and the row where it occurs.
    pub fn max_relative_deficit(&self, rest_fidelity: f64) -> (f64, &SweepRow) {
        let mut best = (f64::NEG_INFINITY, &self.rows[0]);
        for row in &self.rows {
            let d = (rest_fidelity - row.report.f_opt_numeric) / rest_fidelity;
            if d > best.0 {
                best = (d, row);
            }
        }
        best
    }
}

/// Evaluates the full report on every grid point with up to `jobs` worker
/// threads (`0` lets the pool decide). Output order and values do not
/// depend on `jobs`.
pub fn run_sweep(protocol: &Protocol, grid: &SweepGrid, jobs: usize) -> Result<SweepResult> {
    grid.validate()?;
    let geometry = protocol.params().geometry;
    let h_max = geometry.h_for_acceleration(grid.a_max_m_s2);
    if h_max * h_max > H_SQUARED_REGIME {
        log::warn!("grid reaches h^2 = {:.6} > {H_SQUARED_REGIME}; higher orders in h are not small", h_max * h_max);
    }
    let points: Vec<(f64, f64)> = grid
        .tau_values()
        .into_iter()
        .flat_map(|tau| grid.a_values().into_iter().map(move |a| (tau, a)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .map(|&(tau_s, a_m_s2)| {
                let trajectory = Trajectory::single_acceleration(a_m_s2, tau_s, geometry)?;
                let report = protocol.consistency_report(&trajectory)?;
                Ok(SweepRow {
                    tau_s,
                    a_m_s2,
                    h: geometry.h_for_acceleration(a_m_s2),
                    report,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let worst_defect = rows
        .iter()
        .map(|r| r.report.truncation_defect)
        .fold(0.0, f64::max);
    Ok(SweepResult {
        grid: *grid,
        rows,
        worst_defect,
    })
}

pub const SWEEP_COLUMNS: [&str; 11] = [
    "tau_s",
    "a_m_s2",
    "h",
    "phi",
    "F_raw",
    "F_corrected",
    "F_opt_numeric",
    "F_pert",
    "F_pert_opt",
    "nu",
    "residual_pert",
];

/// Metadata common to all outputs of a protocol run.
pub fn run_metadata(protocol: &Protocol, preset: &str) -> Metadata {
    let p = protocol.params();
    let g = p.geometry;
    let mut md = Metadata::new();
    md.push("tool", format!("cvtele {}", env!("CARGO_PKG_VERSION")))
        .push("preset", preset)
        .push(
            "params",
            format!(
                "r={} k={} kp={} L_m={} c_m_per_s={} alice_clock={:?}",
                p.r, p.k, p.kp, g.length_m, g.c_m_per_s, p.clock
            ),
        )
        .push(
            "truncation",
            format!(
                "n_max={} trusted_modes={} tail_estimate={}",
                g.n_max,
                g.trusted_modes(),
                fmt_f64(truncation_tail_estimate(p.kp, g.n_max))
            ),
        );
    md
}

pub fn write_sweep_csv<W: Write>(w: W, protocol: &Protocol, preset: &str, default_grid: bool, result: &SweepResult) -> Result<()> {
    let mut md = run_metadata(protocol, preset);
    let g = &result.grid;
    md.push(
        "grid",
        format!(
            "tau_s=[{}, {}] x {} ; a_m_s2=[{}, {}] x {} ; order=tau-major",
            fmt_f64(g.tau_min_s),
            fmt_f64(g.tau_max_s),
            g.tau_steps,
            fmt_f64(g.a_min_m_s2),
            fmt_f64(g.a_max_m_s2),
            g.a_steps
        ),
    );
    if default_grid {
        md.push("grid_note", "default axes are a reconstruction, not published ranges");
    }
    md.push("worst_truncation_defect", fmt_f64(result.worst_defect));
    let rows: Vec<Vec<String>> = result
        .rows
        .iter()
        .map(|row| {
            [row.tau_s, row.a_m_s2, row.h]
                .into_iter()
                .chain(report_values(&row.report))
                .map(fmt_f64)
                .collect()
        })
        .collect();
    debug_assert_eq!(SWEEP_COLUMNS.len(), 3 + REPORT_COLUMNS.len());
    write_table(w, &md, &SWEEP_COLUMNS, &rows)
}

/// gnuplot `splot` data: one `tau a F_opt` line per point, a blank line
/// between tau blocks.
pub fn write_plot_data<W: Write>(mut w: W, result: &SweepResult) -> Result<()> {
    writeln!(w, "# tau_s a_m_s2 F_opt_numeric")?;
    for (i, row) in result.rows.iter().enumerate() {
        if i > 0 && i % result.grid.a_steps == 0 {
            writeln!(w)?;
        }
        writeln!(
            w,
            "{} {} {}",
            fmt_f64(row.tau_s),
            fmt_f64(row.a_m_s2),
            fmt_f64(row.report.f_opt_numeric)
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ProtocolParams;

    fn small_grid() -> SweepGrid {
        SweepGrid {
            tau_min_s: 0.0,
            tau_max_s: 2e-10,
            tau_steps: 3,
            a_min_m_s2: 1e16,
            a_max_m_s2: 1e17,
            a_steps: 2,
        }
    }

    #[test]
    fn row_order_and_h() {
        let p = Protocol::new(ProtocolParams::default()).unwrap();
        let res = run_sweep(&p, &small_grid(), 1).unwrap();
        assert_eq!(res.rows.len(), 6);
        assert_eq!(res.rows[1].tau_s, 0.0);
        assert_eq!(res.rows[2].tau_s, 1e-10);
        assert_eq!(res.rows[1].a_m_s2, 1e17);
        for row in &res.rows {
            let h = row.a_m_s2 * 0.012 / (1.2e8 * 1.2e8);
            assert!(((row.h - h) / h).abs() <= 1e-15);
        }
        let (d, _) = res.max_relative_deficit(p.params().rest_fidelity());
        assert!(d > 0.0 && d < 0.01);
    }

    #[test]
    fn csv_independent_of_jobs() {
        let p = Protocol::new(ProtocolParams::default()).unwrap();
        let render = |jobs| {
            let res = run_sweep(&p, &small_grid(), jobs).unwrap();
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &p, "fig3", false, &res).unwrap();
            let mut plot = Vec::new();
            write_plot_data(&mut plot, &res).unwrap();
            (buf, plot)
        };
        let one = render(1);
        assert_eq!(one, render(3));
        let text = String::from_utf8(one.0).unwrap();
        assert!(text.starts_with("# tool: cvtele"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);
        let plot = String::from_utf8(one.1).unwrap();
        assert_eq!(plot.lines().filter(|l| l.is_empty()).count(), 2);
    }
}
