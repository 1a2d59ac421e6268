//! Figure curves for the reference parameters, as CSV plus gnuplot scripts.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use movq::metrology::cramer_rao_bound;
use movq::witness::coherence_half;
use movq::{PhysicalParams, QubitEvolution, Table};
use rayon::prelude::*;

use crate::config::Observable;
use crate::error::{ExperimentError, Result};
use crate::sweep::{observe, write_tables, VERSION};

/// Samples per curve, endpoints included.
pub const FIGURE_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5, FigureId::Fig6];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| ExperimentError::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    Observable(Observable),
    CoherenceHalf,
    DeltaPhiMin,
}

impl Curve {
    pub fn column(&self) -> &'static str {
        match self {
            Curve::Observable(o) => o.column(),
            Curve::CoherenceHalf => "c_half",
            Curve::DeltaPhiMin => "delta_phi_min",
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Curve::Observable(Observable::WitnessX) => "W",
            Curve::Observable(Observable::WitnessOpt) => "W'",
            Curve::Observable(Observable::Entropy) => "S",
            Curve::Observable(Observable::Purity) => "P",
            Curve::Observable(Observable::Qfi) => "F",
            Curve::Observable(_) => self.column(),
            Curve::CoherenceHalf => "C/2",
            Curve::DeltaPhiMin => "delta phi min",
        }
    }

    fn eval(&self, evolution: &QubitEvolution, t: f64) -> Result<f64> {
        match self {
            Curve::Observable(o) => observe(*o, evolution, t),
            Curve::CoherenceHalf => Ok(coherence_half(t, evolution)),
            Curve::DeltaPhiMin => Ok(cramer_rao_bound(observe(Observable::Qfi, evolution, t)?).value()),
        }
    }
}

/// One CSV: columns `beta, gamma_t` and then one column per curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub name: String,
    pub betas: Vec<f64>,
    pub gamma_t_max: f64,
    pub curves: Vec<Curve>,
}

pub fn panels(id: FigureId) -> Vec<Panel> {
    let panel = |name: &str, betas: &[f64], gamma_t_max: f64, curves: &[Curve]| Panel {
        name: name.to_string(),
        betas: betas.to_vec(),
        gamma_t_max,
        curves: curves.to_vec(),
    };
    let fig2_curves = [Curve::Observable(Observable::WitnessX), Curve::CoherenceHalf];
    match id {
        FigureId::Fig2 => {
            vec![panel("fig2_I", &[0.0], 200.0, &fig2_curves), panel("fig2_II", &[0.05e-9], 200.0, &fig2_curves)]
        }
        FigureId::Fig3 => vec![panel(
            "fig3",
            &[0.0, 0.1e-9],
            200.0,
            &[Curve::Observable(Observable::WitnessOpt), Curve::CoherenceHalf],
        )],
        FigureId::Fig4 => vec![
            panel("fig4_a", &[0.0, 0.01e-9, 0.1e-9], 1000.0, &[Curve::Observable(Observable::Entropy)]),
            panel("fig4_b", &[0.5e-9, 0.7e-9, 1e-9], 2.0e5, &[Curve::Observable(Observable::Entropy)]),
        ],
        FigureId::Fig5 => vec![panel("fig5", &[0.0, 0.05e-9], 1000.0, &[Curve::Observable(Observable::Purity)])],
        FigureId::Fig6 => vec![panel(
            "fig6",
            &[0.0, 0.05e-9, 0.1e-9, 1e-9],
            100.0,
            &[Curve::Observable(Observable::Qfi), Curve::DeltaPhiMin],
        )],
    }
}

fn curve_rows(panel: &Panel, beta: f64) -> Result<Vec<Vec<f64>>> {
    let params = PhysicalParams::reference(beta).map_err(|e| ExperimentError::model("beta", e))?;
    let evolution = QubitEvolution::with_fallback_horizon(params, params.seconds(panel.gamma_t_max))
        .map_err(|e| ExperimentError::model("params", e))?;
    let step = panel.gamma_t_max / (FIGURE_POINTS - 1) as f64;
    (0..FIGURE_POINTS)
        .map(|k| {
            let gt = k as f64 * step;
            let mut row = vec![beta, gt];
            for c in &panel.curves {
                row.push(c.eval(&evolution, params.seconds(gt))?);
            }
            Ok(row)
        })
        .collect()
}

pub fn panel_table(panel: &Panel) -> Result<Table> {
    let reference = PhysicalParams::reference(0.0).map_err(|e| ExperimentError::model("params", e))?;
    let mut table = Table::new(["beta", "gamma_t"].into_iter().chain(panel.curves.iter().map(|c| c.column())));
    table.add_comment(format!("movq-experiment {VERSION}"));
    table.add_comment(format!("panel = {}", panel.name));
    table.add_comment(format!(
        "gamma = {:e} Hz, lambda = {:e} Hz, delta = {:e} Hz, omega0 = {:e} Hz, theta = {:e}",
        reference.gamma(),
        reference.lambda(),
        reference.delta(),
        reference.omega0(),
        reference.theta()
    ));
    let betas: Vec<String> = panel.betas.iter().map(|b| format!("{b:e}")).collect();
    table.add_comment(format!("beta = [{}]", betas.join(", ")));
    table.add_comment(format!("gamma_t = [0, {}], {FIGURE_POINTS} points", panel.gamma_t_max));

    let blocks = panel.betas.par_iter().map(|&b| curve_rows(panel, b)).collect::<Result<Vec<_>>>()?;
    for row in blocks.into_iter().flatten() {
        table.push_row(row);
    }
    Ok(table)
}

/// gnuplot commands drawing every curve of every panel of `id`.
pub fn plot_script(id: FigureId, panels: &[Panel]) -> String {
    let mut s = format!("# {id}: run with `gnuplot {id}.gp` from this directory\n");
    s.push_str("set datafile separator \",\"\nset terminal pngcairo size 900,600\n");
    s.push_str(&format!("set output \"{id}.png\"\nset xlabel \"gamma t\"\n"));
    let total: usize = panels.iter().map(|p| p.curves.len()).sum();
    if total > 1 {
        s.push_str(&format!("set multiplot layout 1,{total}\n"));
    }
    for panel in panels {
        for curve in &panel.curves {
            s.push_str(&format!("set title \"{} {}\"\nplot \\\n", panel.name, curve.label()));
            let lines: Vec<String> = panel
                .betas
                .iter()
                .map(|b| {
                    format!(
                        "  \"{}.csv\" using \"gamma_t\":(column(\"beta\") == {b:e} ? column(\"{}\") : NaN) with lines title \"beta = {b:e}\"",
                        panel.name,
                        curve.column()
                    )
                })
                .collect();
            s.push_str(&lines.join(", \\\n"));
            s.push('\n');
        }
    }
    if total > 1 {
        s.push_str("unset multiplot\n");
    }
    s
}

/// Writes `<panel>.csv` for each panel and `<id>.gp` under `out`.
pub fn reproduce_figure(id: FigureId, out: &Path, force: bool) -> Result<Vec<PathBuf>> {
    let panels = panels(id);
    let tables = panels.iter().map(panel_table).collect::<Result<Vec<_>>>()?;
    let named: Vec<(String, &Table)> =
        panels.iter().zip(&tables).map(|(p, t)| (format!("{}.csv", p.name), t)).collect();
    let script_path = out.join(format!("{id}.gp"));
    if !force && script_path.exists() {
        return Err(ExperimentError::Collision(script_path));
    }
    let mut written = write_tables(out, &named, force)?;
    fs::write(&script_path, plot_script(id, &panels)).map_err(|e| ExperimentError::io(&script_path, e))?;
    written.push(script_path);
    Ok(written)
}
