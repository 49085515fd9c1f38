//! Corpus-level comparison: per-source aggregates, significance tests
//! against a reference source, and within-source metric correlations.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use storyref::report::{pairwise_metric_correlation, Metric, MetricReport};
use storyref::stats::{aggregate, welch_t_test, Aggregate, TestResult};

/// One source's aggregate for one metric, with the test against the
/// reference where it could be computed (the reference row and degenerate
/// samples carry no test).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SourceRow {
    pub source: String,
    pub aggregate: Aggregate,
    pub test_vs_reference: Option<TestResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricComparison {
    pub metric: String,
    pub rows: Vec<SourceRow>,
}

/// Per-source correlation between two metrics, pairwise-complete.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub source: String,
    pub metric_a: String,
    pub metric_b: String,
    pub result: Option<TestResult>,
    pub n: usize,
    pub n_excluded: usize,
}

/// The full comparison: every metric aggregated per source plus the
/// referring-expression-change vs length correlation per source.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub reference: String,
    pub sources: Vec<String>,
    pub stories_per_source: BTreeMap<String, usize>,
    pub metrics: Vec<MetricComparison>,
    pub correlations: Vec<CorrelationRow>,
}

/// Metric values of one source as an optional column.
fn column(reports: &[&MetricReport], metric: Metric) -> Vec<Option<f64>> {
    reports.iter().map(|r| r.get(metric)).collect()
}

fn defined(values: &[Option<f64>]) -> Vec<f64> {
    values.iter().flatten().copied().collect()
}

/// Build the comparison across sources. The reference source must be
/// present; sources are ordered reference first, the rest alphabetically.
pub fn build_comparison(reports: &[MetricReport], reference: &str) -> Result<ComparisonReport> {
    let mut by_source: BTreeMap<&str, Vec<&MetricReport>> = BTreeMap::new();
    for report in reports {
        by_source.entry(&report.source_label).or_default().push(report);
    }
    if !by_source.contains_key(reference) {
        let known: Vec<&str> = by_source.keys().copied().collect();
        bail!(
            "reference source {reference:?} not present; sources found: {}",
            if known.is_empty() { "none".to_string() } else { known.join(", ") }
        );
    }

    let mut sources: Vec<String> = vec![reference.to_string()];
    sources.extend(by_source.keys().filter(|s| **s != reference).map(|s| s.to_string()));

    let mut metrics = Vec::new();
    for metric in Metric::ALL {
        let reference_defined = defined(&column(&by_source[reference], metric));
        let mut rows = Vec::new();
        for source in &sources {
            let values = column(&by_source[source.as_str()], metric);
            let agg = aggregate(&values);
            let test_vs_reference = if source == reference {
                None
            } else {
                welch_t_test(&defined(&values), &reference_defined).ok()
            };
            rows.push(SourceRow { source: source.clone(), aggregate: agg, test_vs_reference });
        }
        metrics.push(MetricComparison { metric: metric.name().to_string(), rows });
    }

    // Within-source correlation between form variation and story length.
    let mut correlations = Vec::new();
    for source in &sources {
        let source_reports: Vec<MetricReport> =
            by_source[source.as_str()].iter().map(|r| (*r).clone()).collect();
        let row = match pairwise_metric_correlation(&source_reports, Metric::Rec, Metric::Words) {
            Ok((result, n, n_excluded)) => CorrelationRow {
                source: source.clone(),
                metric_a: Metric::Rec.name().to_string(),
                metric_b: Metric::Words.name().to_string(),
                result: Some(result),
                n,
                n_excluded,
            },
            Err(_) => CorrelationRow {
                source: source.clone(),
                metric_a: Metric::Rec.name().to_string(),
                metric_b: Metric::Words.name().to_string(),
                result: None,
                n: 0,
                n_excluded: source_reports.len(),
            },
        };
        correlations.push(row);
    }

    let stories_per_source = by_source
        .iter()
        .map(|(source, reports)| (source.to_string(), reports.len()))
        .collect();

    Ok(ComparisonReport {
        reference: reference.to_string(),
        sources,
        stories_per_source,
        metrics,
        correlations,
    })
}
