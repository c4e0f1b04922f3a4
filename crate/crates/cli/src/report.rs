//! CSV rows shared by every subcommand.

use std::io::{self, Write};

use relay_switching::{ExperimentReport, RateReport};

pub const HEADER: &str =
    "scheme,quantity,param_name,param_value,analytic,sim_mean,sim_stderr,n_events,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scheme: String,
    pub quantity: String,
    pub param_name: String,
    pub param_value: f64,
    pub analytic: Option<f64>,
    pub sim: Option<SimColumns>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimColumns {
    pub mean: f64,
    pub stderr: f64,
    pub n_events: usize,
}

impl Row {
    pub fn analytic(scheme: &str, quantity: &str, param: (&str, f64), value: f64) -> Self {
        Self {
            scheme: scheme.into(),
            quantity: quantity.into(),
            param_name: param.0.into(),
            param_value: param.1,
            analytic: Some(value),
            sim: None,
            seed: None,
        }
    }

    pub fn from_report(scheme: &str, param: (&str, f64), r: &RateReport, seed: u64) -> Self {
        Self {
            scheme: scheme.into(),
            quantity: r.quantity.label(),
            param_name: param.0.into(),
            param_value: param.1,
            analytic: r.analytic,
            sim: Some(SimColumns {
                mean: r.sim_mean,
                stderr: r.sim_stderr,
                n_events: r.n_events,
            }),
            seed: Some(seed),
        }
    }

    /// Multiplies the numeric columns by `k` (used for normalized figures).
    pub fn scaled(mut self, k: f64) -> Self {
        self.analytic = self.analytic.map(|a| a * k);
        if let Some(s) = self.sim.as_mut() {
            s.mean *= k;
            s.stderr *= k;
        }
        self
    }
}

/// Every quantity of `report` as rows.
pub fn report_rows(report: &ExperimentReport, param: (&str, f64)) -> Vec<Row> {
    report
        .all()
        .into_iter()
        .map(|r| Row::from_report(report.scheme.name(), param, r, report.base_seed))
        .collect()
}

fn float(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(mut out: W, comments: &[String], rows: &[Row]) -> io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:e},{},{},{},{},{}",
            r.scheme,
            r.quantity,
            r.param_name,
            r.param_value,
            float(r.analytic),
            float(r.sim.map(|s| s.mean)),
            float(r.sim.map(|s| s.stderr)),
            r.sim.map(|s| s.n_events.to_string()).unwrap_or_default(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_row_leaves_sim_columns_empty() {
        let row = Row::analytic(
            "or",
            "switch_rate_hz",
            ("L", 2.0),
            std::f64::consts::PI * 10.0,
        );
        let mut buf = Vec::new();
        write_csv(&mut buf, &["note".into()], &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# note");
        assert_eq!(lines[1], HEADER);
        assert_eq!(lines[2], "or,switch_rate_hz,L,2e0,3.141592653589793e1,,,,");
    }

    #[test]
    fn scaling_touches_values_only() {
        let row = Row {
            sim: Some(SimColumns {
                mean: 2.0,
                stderr: 0.5,
                n_events: 9,
            }),
            seed: Some(3),
            ..Row::analytic("or", "q", ("x", 1.0), 4.0)
        }
        .scaled(0.5);
        assert_eq!(row.analytic, Some(2.0));
        assert_eq!(row.sim.unwrap().mean, 1.0);
        assert_eq!(row.sim.unwrap().stderr, 0.25);
        assert_eq!(row.sim.unwrap().n_events, 9);
        assert_eq!(row.param_value, 1.0);
    }
}
