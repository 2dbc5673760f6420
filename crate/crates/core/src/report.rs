//! Table of published figures against recomputed values.

use serde::{Deserialize, Serialize};

use crate::complexity::{blockchain_machine, paper_reproduction_report};
use crate::pow::{collision_horizon, collision_probability, leading_zero_probability};
use crate::symbolic::{infer_causal_states, statistical_complexity, EpsilonMachine, InferenceConfig};

pub const PUBLISHED_DIFFICULTY: f64 = 595_921_917_085.42;
pub const PUBLISHED_BLOCK_COUNT: u64 = 431_616;
pub const INFERENCE_STREAM_LENGTH: usize = 10_000;
pub const INFERENCE_SEED: u64 = 2017;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub paper_value: String,
    pub computed_value: String,
    /// Relative error, or absolute error when the published value is zero.
    pub relative_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReportOptions {
    /// Replaces every row's tolerance.
    pub tolerance_override: Option<f64>,
    /// Render computed values with all significant digits.
    pub full_precision: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub all_pass: bool,
}

pub fn format_sci(value: f64, full_precision: bool) -> String {
    if full_precision {
        format!("{value:e}")
    } else {
        format!("{value:.5e}")
    }
}

struct Builder {
    options: ReportOptions,
    rows: Vec<ReportRow>,
}

impl Builder {
    fn row(&mut self, label: &str, paper_value: &str, computed: f64, tolerance: f64) {
        let published: f64 = paper_value.parse().expect("numeric literal");
        let relative_error = if published == 0.0 {
            (computed - published).abs()
        } else {
            ((computed - published) / published).abs()
        };
        let tolerance = self.options.tolerance_override.unwrap_or(tolerance);
        self.rows.push(ReportRow {
            label: label.to_string(),
            paper_value: paper_value.to_string(),
            computed_value: format_sci(computed, self.options.full_precision),
            relative_error,
            tolerance,
            pass: relative_error <= tolerance,
        });
    }
}

fn inferred_complexity(machine: &EpsilonMachine<f64>) -> f64 {
    let stream = machine
        .generate(INFERENCE_STREAM_LENGTH, INFERENCE_SEED)
        .expect("valid machine");
    let inferred = infer_causal_states(&stream, &InferenceConfig::default()).expect("stream long enough");
    statistical_complexity(&inferred).expect("valid machine")
}

/// Builds every row. Tolerances follow the precision of the quoted figure:
/// 1e-9 for the 17-digit target, 1% or 2% for two-digit figures, 1e-12 or
/// exact for the canonical complexity values.
pub fn published_report(options: ReportOptions) -> Report {
    let mut b = Builder {
        options,
        rows: Vec::new(),
    };
    let repro = paper_reproduction_report(PUBLISHED_DIFFICULTY).expect("published difficulty is valid");
    b.row(
        "target at difficulty 595921917085.42",
        "4.5240046586784463e55",
        repro.target_value,
        1e-9,
    );
    b.row(
        "P(18) = 16^-18",
        "2.1e-22",
        leading_zero_probability(18).expect("k in range"),
        0.01,
    );
    let c_mu = blockchain_machine(2f64.powi(-72))
        .and_then(|m| m.statistical_complexity())
        .expect("p in (0,1)");
    b.row("C_mu blockchain, p = 2^-72", "1.56e-20", c_mu, 0.01);
    b.row(
        "collision probability, k = 431616",
        "8.0e-67",
        collision_probability(PUBLISHED_BLOCK_COUNT),
        0.01,
    );
    let horizon = collision_horizon(10.0).expect("positive interval");
    b.row("collision horizon, blocks", "3.4e38", horizon.expected_blocks, 0.02);
    b.row("collision horizon, years at 10 min", "6.5e33", horizon.years, 0.02);

    let canonical = [
        ("tick-tock", EpsilonMachine::<f64>::tick_tock(), "1", 1e-12),
        ("crystal", EpsilonMachine::crystal(), "0", 0.0),
        ("fair coin", EpsilonMachine::fair_coin(), "0", 0.0),
    ];
    for (name, machine, value, tol) in canonical {
        let analytic = statistical_complexity(&machine).expect("valid machine");
        b.row(&format!("C_mu {name}, analytic"), value, analytic, tol);
        b.row(
            &format!("C_mu {name}, inferred from 10^4 symbols"),
            value,
            inferred_complexity(&machine),
            tol,
        );
    }
    let all_pass = b.rows.iter().all(|r| r.pass);
    Report { rows: b.rows, all_pass }
}

impl Report {
    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let header = ["label", "published", "computed", "error", "tolerance", "pass"];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.label.clone(),
                    r.paper_value.clone(),
                    r.computed_value.clone(),
                    format!("{:.2e}", r.relative_error),
                    format!("{:.0e}", r.tolerance),
                    if r.pass { "PASS" } else { "FAIL" }.to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cols: &[String]| -> String {
            cols.iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = line(&header.map(String::from));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        out.push_str(if self.all_pass {
            "all rows pass\n"
        } else {
            "some rows FAIL\n"
        });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
