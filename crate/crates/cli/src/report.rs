//! Plain-text result tables for the `run` subcommand.

use servobench_core::plant::{AligningTime, ServoRunResult};

/// One formatted row of the results table.
#[derive(Debug, Clone)]
pub struct RunRow {
    pub method: String,
    pub environment: String,
    pub x_cm: f64,
    pub y_cm: f64,
    pub theta_deg: f64,
    pub aligning: AligningTime,
    pub aligned: bool,
}

impl RunRow {
    pub fn new(method: &str, environment: &str, result: &ServoRunResult) -> RunRow {
        let (x_cm, y_cm, theta_deg) = result.final_error_cm_deg();
        RunRow {
            method: method.to_owned(),
            environment: environment.to_owned(),
            x_cm,
            y_cm,
            theta_deg,
            aligning: result.aligning_time,
            aligned: result.aligned,
        }
    }

    fn cells(&self) -> [String; 7] {
        [
            self.method.clone(),
            self.environment.clone(),
            format!("{:.2}", self.x_cm),
            format!("{:.2}", self.y_cm),
            format!("{:.2}", self.theta_deg),
            match self.aligning {
                AligningTime::Seconds(t) => format!("{t:.2}"),
                AligningTime::Timeout => "-".to_owned(),
            },
            if self.aligned { "aligned" } else { "timeout" }.to_owned(),
        ]
    }
}

const HEADERS: [&str; 7] = [
    "method",
    "environment",
    "x_cm",
    "y_cm",
    "theta_deg",
    "aligning_s",
    "outcome",
];

/// Renders rows as an aligned table with a header line.
pub fn render_table(rows: &[RunRow]) -> String {
    let mut widths: Vec<usize> = HEADERS.iter().map(|h| h.len()).collect();
    let cells: Vec<[String; 7]> = rows.iter().map(RunRow::cells).collect();
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |fields: &[&str]| {
        let mut line = String::new();
        for (i, (field, w)) in fields.iter().zip(&widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(field);
            if i + 1 < fields.len() {
                for _ in field.len()..*w {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    push_row(&HEADERS);
    for row in &cells {
        let fields: Vec<&str> = row.iter().map(String::as_str).collect();
        push_row(&fields);
    }
    out
}
