//! CSV and JSON renderings of solutions, comparisons and sweeps.

use std::fmt::Write as _;

use fwdosc::{check_feasibility, residuals, ArcKind, Comparison, Config, Mode, Solution, Trajectory};
use serde::{Deserialize, Serialize};

/// Formats a number with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_line(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

/// Uniform sample times on `[0, horizon]`, the last one exactly `horizon`.
pub fn sample_times(horizon: f64, samples: usize) -> Vec<f64> {
    let last = samples.max(2) - 1;
    (0..=last)
        .map(|k| if k == last { horizon } else { horizon * k as f64 / last as f64 })
        .collect()
}

fn arc_kind_name(kind: &ArcKind<f64>) -> &'static str {
    match kind {
        ArcKind::Free(_) => "free",
        ArcKind::Hold { .. } => "hold",
    }
}

/// Trajectory CSV with columns `t,x1,x2,u,arc_index,arc_kind`.
pub fn trajectory_csv(sol: &Solution, samples: usize) -> String {
    let mut out = String::from("t,x1,x2,u,arc_index,arc_kind\n");
    for t in sample_times(sol.problem().horizon(), samples) {
        let i = sol.arc_index_at(t).expect("sample inside horizon");
        let st = sol.eval(t).expect("sample inside horizon");
        csv_line(
            &mut out,
            &[
                num(t),
                num(st.x1),
                num(st.x2),
                num(st.u),
                i.to_string(),
                arc_kind_name(&sol.arcs()[i].kind).to_string(),
            ],
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub s: f64,
    pub x_f: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub index: usize,
    pub kind: String,
    pub t_start: f64,
    pub t_end: f64,
    /// `[c1, c2, c3, c4]` of `x1 = c1 cos t + c2 sin t + c3 t cos t + c4 t sin t`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coefficients: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub position: Option<f64>,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub dynamics: f64,
    pub boundary: f64,
    pub junction: f64,
    pub min_x2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub problem: ProblemRecord,
    pub mode: String,
    #[serde(rename = "J")]
    pub cost: f64,
    pub junction_times: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tau2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x1s: Option<f64>,
    pub arcs: Vec<ArcRecord>,
    pub residuals: ResidualRecord,
}

impl SolutionSummary {
    pub fn new(sol: &Solution, cfg: &Config) -> Self {
        let p = sol.problem();
        let junctions = sol.junction_times();
        let (tau, tau1, tau2, x1s) = match (sol.mode(), junctions.as_slice()) {
            (Mode::WaitMove | Mode::MoveWait, [t]) => (Some(*t), None, None, None),
            (Mode::MoveWaitMove, [a, b]) => (None, Some(*a), Some(*b), sol.hold_position()),
            _ => (None, None, None, None),
        };
        let arcs = sol
            .arcs()
            .iter()
            .enumerate()
            .map(|(index, arc)| {
                let (coefficients, position) = match arc.kind {
                    ArcKind::Free(c) => (Some([c.c1, c.c2, c.c3, c.c4]), None),
                    ArcKind::Hold { position } => (None, Some(position)),
                };
                ArcRecord {
                    index,
                    kind: arc_kind_name(&arc.kind).to_string(),
                    t_start: arc.t_start,
                    t_end: arc.t_end,
                    coefficients,
                    position,
                    energy: arc.energy(),
                }
            })
            .collect();
        let r = residuals(sol);
        Self {
            problem: ProblemRecord {
                s: p.s(),
                x_f: p.x_f(),
                horizon: p.horizon(),
            },
            mode: sol.mode().as_str().to_string(),
            cost: sol.cost(),
            junction_times: junctions,
            tau,
            tau1,
            tau2,
            x1s,
            arcs,
            residuals: ResidualRecord {
                dynamics: r.dynamics,
                boundary: r.boundary,
                junction: r.junction,
                min_x2: check_feasibility(sol, cfg).min_x2,
            },
        }
    }
}

/// Side-by-side CSV of analytic (`_as`) and numeric (`_ns`) node values.
pub fn comparison_csv(sol: &Solution, dt: &Trajectory) -> String {
    let mut out = String::from("t,x1_as,x1_ns,x2_as,x2_ns,u_as,u_ns\n");
    for (i, t) in dt.times().into_iter().enumerate() {
        let st = sol.eval(t).expect("grid inside horizon");
        csv_line(
            &mut out,
            &[
                num(t),
                num(st.x1),
                num(dt.x1[i]),
                num(st.x2),
                num(dt.x2[i]),
                num(st.u),
                num(dt.u[i]),
            ],
        );
    }
    out
}

/// Limits a comparison must meet for `compare` to succeed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub cost_gap: f64,
    pub sup_x1: f64,
    pub sup_u: f64,
    pub require_mode_consistent: bool,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            cost_gap: 2e-2,
            sup_x1: 5e-3,
            sup_u: 2e-2,
            require_mode_consistent: true,
        }
    }
}

impl Thresholds {
    /// Names of the limits `report` breaks.
    pub fn breaches(&self, report: &Comparison) -> Vec<String> {
        let mut out = Vec::new();
        if !(report.cost_gap <= self.cost_gap) {
            out.push(format!("cost_gap {} > {}", report.cost_gap, self.cost_gap));
        }
        if !(report.sup_x1 <= self.sup_x1) {
            out.push(format!("sup_x1 {} > {}", report.sup_x1, self.sup_x1));
        }
        if !(report.sup_u <= self.sup_u) {
            out.push(format!("sup_u {} > {}", report.sup_u, self.sup_u));
        }
        if self.require_mode_consistent && !report.mode_consistent {
            out.push("hold intervals do not match the analytic mode".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub changes: usize,
    pub active_nodes: usize,
    pub kkt_residual: f64,
    pub max_defect: f64,
    pub min_x2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub problem: ProblemRecord,
    pub mode: String,
    pub nodes: usize,
    pub sup_x1: f64,
    pub sup_x2: f64,
    pub sup_u: f64,
    pub cost_gap: f64,
    pub j_analytic: f64,
    pub j_numeric: f64,
    pub mode_consistent: bool,
    pub analytic_holds: Vec<[f64; 2]>,
    pub numeric_holds: Vec<[f64; 2]>,
    pub oracle: OracleRecord,
    pub thresholds: Thresholds,
    pub within_thresholds: bool,
}

impl ComparisonSummary {
    pub fn new(sol: &Solution, dt: &Trajectory, report: &Comparison, thresholds: Thresholds) -> Self {
        let p = sol.problem();
        let pairs = |v: &[(f64, f64)]| v.iter().map(|&(a, b)| [a, b]).collect();
        Self {
            problem: ProblemRecord {
                s: p.s(),
                x_f: p.x_f(),
                horizon: p.horizon(),
            },
            mode: sol.mode().as_str().to_string(),
            nodes: report.nodes,
            sup_x1: report.sup_x1,
            sup_x2: report.sup_x2,
            sup_u: report.sup_u,
            cost_gap: report.cost_gap,
            j_analytic: sol.cost(),
            j_numeric: dt.cost,
            mode_consistent: report.mode_consistent,
            analytic_holds: pairs(&report.analytic_holds),
            numeric_holds: pairs(&report.numeric_holds),
            oracle: OracleRecord {
                changes: dt.changes,
                active_nodes: dt.active.len(),
                kkt_residual: dt.kkt_residual,
                max_defect: dt.max_defect,
                min_x2: dt.min_x2(),
            },
            thresholds,
            within_thresholds: thresholds.breaches(report).is_empty(),
        }
    }
}

/// One horizon of a sweep; `error` is set when the solve failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T")]
    pub horizon: f64,
    pub mode: Option<String>,
    #[serde(rename = "J")]
    pub cost: Option<f64>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub x1s: Option<f64>,
    pub error: Option<String>,
}

/// Sweep CSV with columns `T,mode,J,tau1,tau2,x1s,error`; absent values are empty.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let mut out = String::from("T,mode,J,tau1,tau2,x1s,error\n");
    for r in rows {
        let error = r
            .error
            .as_deref()
            .map(|e| format!("\"{}\"", e.replace('"', "\"\"")))
            .unwrap_or_default();
        csv_line(
            &mut out,
            &[
                num(r.horizon),
                r.mode.clone().unwrap_or_default(),
                opt(r.cost),
                opt(r.tau1),
                opt(r.tau2),
                opt(r.x1s),
                error,
            ],
        );
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

/// Fixed-width text table used for terminal output.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&mut out, header.to_vec());
    for row in rows {
        line(&mut out, row.iter().map(String::as_str).collect());
    }
    out
}
