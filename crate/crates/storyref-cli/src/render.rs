//! Render a [`ComparisonReport`] as Markdown, CSV, or JSON.
//!
//! The three formats carry numerically identical content; only the layout
//! differs. Absent values render as JSON `null` and as empty Markdown/CSV
//! cells, never as zero. Significance markers: a dagger on means that
//! differ from the reference at p < 0.05, and `**` on correlations
//! significant at p < 0.05.

use std::fmt::Write as _;

use anyhow::Result;

use crate::comparison::ComparisonReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Md,
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" => Ok(OutputFormat::Md),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => anyhow::bail!("unknown format {other:?}; expected md, csv, or json"),
        }
    }
}

pub fn render(report: &ComparisonReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Md => Ok(render_md(report)),
        OutputFormat::Csv => Ok(render_csv(report)),
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            Ok(text)
        }
    }
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn render_md(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Corpus comparison\n");
    let _ = writeln!(out, "Reference source: {}\n", report.reference);
    let _ = writeln!(out, "| source | stories |");
    let _ = writeln!(out, "|---|---|");
    for source in &report.sources {
        let _ = writeln!(out, "| {} | {} |", source, report.stories_per_source[source]);
    }
    for metric in &report.metrics {
        let _ = writeln!(out, "\n## {}\n", metric.metric);
        let _ = writeln!(out, "| source | mean | min | max | n | absent | t | p | d | sig |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|---|---|---|");
        for row in &metric.rows {
            let (t, p, d, sig) = match &row.test_vs_reference {
                Some(test) => (
                    test.statistic.to_string(),
                    test.p_value.to_string(),
                    test.effect_size.to_string(),
                    if test.significant_05 { "\u{2020}" } else { "" }.to_string(),
                ),
                None => Default::default(),
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                row.source,
                opt(row.aggregate.mean),
                opt(row.aggregate.min),
                opt(row.aggregate.max),
                row.aggregate.n,
                row.aggregate.n_absent,
                t,
                p,
                d,
                sig,
            );
        }
    }
    let _ = writeln!(out, "\n## Correlations\n");
    let _ = writeln!(out, "| source | metrics | rho | p | n | excluded | sig |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|");
    for row in &report.correlations {
        let (rho, p, sig) = match &row.result {
            Some(test) => (
                test.statistic.to_string(),
                test.p_value.to_string(),
                if test.significant_05 { "**" } else { "" }.to_string(),
            ),
            None => Default::default(),
        };
        let _ = writeln!(
            out,
            "| {} | {} ~ {} | {} | {} | {} | {} | {} |",
            row.source, row.metric_a, row.metric_b, rho, p, row.n, row.n_excluded, sig,
        );
    }
    out
}

fn render_csv(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "kind,metric,source,mean,min,max,n,n_absent,statistic,p_value,effect_size,significant_05,significant_001,n_pairs,n_excluded"
    );
    for metric in &report.metrics {
        for row in &metric.rows {
            let (t, p, d, s05, s001) = match &row.test_vs_reference {
                Some(test) => (
                    test.statistic.to_string(),
                    test.p_value.to_string(),
                    test.effect_size.to_string(),
                    test.significant_05.to_string(),
                    test.significant_001.to_string(),
                ),
                None => Default::default(),
            };
            let _ = writeln!(
                out,
                "aggregate,{},{},{},{},{},{},{},{},{},{},{},{},,",
                metric.metric,
                row.source,
                opt(row.aggregate.mean),
                opt(row.aggregate.min),
                opt(row.aggregate.max),
                row.aggregate.n,
                row.aggregate.n_absent,
                t,
                p,
                d,
                s05,
                s001,
            );
        }
    }
    for row in &report.correlations {
        let (rho, p, s05, s001) = match &row.result {
            Some(test) => (
                test.statistic.to_string(),
                test.p_value.to_string(),
                test.significant_05.to_string(),
                test.significant_001.to_string(),
            ),
            None => Default::default(),
        };
        let _ = writeln!(
            out,
            "correlation,{}~{},{},,,,,,{},{},,{},{},{},{}",
            row.metric_a, row.metric_b, row.source, rho, p, s05, s001, row.n, row.n_excluded,
        );
    }
    out
}
