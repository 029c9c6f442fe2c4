//! Comparison tables.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{Metric, SummaryRow};
use crate::solver::Algorithm;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Aligned plain-text tables: the min-cost/min-NFE grid, then one
    /// min/avg/max table per size.
    pub text: String,
    /// One line per summary row.
    pub csv: String,
    pub warnings: Vec<String>,
}

pub const REPORT_CSV_HEADER: &str = "algorithm,n,phase,metric,min,avg,max,replications";

fn trim_avg(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn table(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..rows.first().map_or(0, Vec::len))
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Renders the summaries. Missing (algorithm, size) cells are left blank
/// and reported in `warnings`.
pub fn render_report(summaries: &[SummaryRow]) -> Report {
    let algorithms: Vec<Algorithm> = {
        let present: BTreeSet<Algorithm> = summaries.iter().map(|s| s.algorithm).collect();
        Algorithm::ALL.into_iter().filter(|a| present.contains(a)).collect()
    };
    let sizes: Vec<usize> = summaries.iter().map(|s| s.n).collect::<BTreeSet<_>>().into_iter().collect();
    let find = |a: Algorithm, n: usize, m: Metric| summaries.iter().find(|s| s.algorithm == a && s.n == n && s.metric == m);

    let mut warnings = Vec::new();
    let mut grid = vec![{
        let mut h = vec!["Algorithm".to_string(), "Metric".to_string()];
        h.extend(sizes.iter().map(|n| n.to_string()));
        h
    }];
    for &a in &algorithms {
        for (i, (m, label)) in [(Metric::Cost, "Min Cost"), (Metric::Nfe, "Min NFE")].into_iter().enumerate() {
            let mut line = vec![if i == 0 { a.label().to_string() } else { String::new() }, label.to_string()];
            for &n in &sizes {
                match find(a, n, m) {
                    Some(s) => line.push(s.min.to_string()),
                    None => {
                        if m == Metric::Cost {
                            warnings.push(format!("no results for {a} at n={n}"));
                        }
                        line.push(String::new());
                    }
                }
            }
            grid.push(line);
        }
    }

    let mut text = String::from("Minimum cost and NFE per problem size\n\n");
    text.push_str(&table(&grid));
    for &n in &sizes {
        let _ = write!(text, "\nN = {n}\n\n");
        let mut rows = vec![["Algorithm", "Metric", "Min", "AVG", "MAX"].map(String::from).to_vec()];
        for &a in &algorithms {
            for (i, m) in [Metric::Cost, Metric::Nfe].into_iter().enumerate() {
                let name = if i == 0 { a.label().to_string() } else { String::new() };
                match find(a, n, m) {
                    Some(s) => rows.push(vec![name, m.label().into(), s.min.to_string(), trim_avg(s.avg), s.max.to_string()]),
                    None => rows.push(vec![name, m.label().into(), String::new(), String::new(), String::new()]),
                }
            }
        }
        text.push_str(&table(&rows));
    }

    let mut csv = format!("{REPORT_CSV_HEADER}\n");
    let mut sorted: Vec<&SummaryRow> = summaries.iter().collect();
    sorted.sort_by_key(|s| (s.algorithm, s.n, s.phase, s.metric));
    for s in sorted {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            s.algorithm.key(),
            s.n,
            s.phase,
            match s.metric {
                Metric::Cost => "cost",
                Metric::Nfe => "nfe",
            },
            s.min,
            s.avg,
            s.max,
            s.replications
        );
    }
    Report { text, csv, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Phase;

    fn summary(a: Algorithm, n: usize, metric: Metric, min: u64, avg: f64, max: u64) -> SummaryRow {
        SummaryRow { algorithm: a, n, phase: Phase::Final, metric, min, avg, max, replications: 10 }
    }

    #[test]
    fn empty_input_is_header_only() {
        let r = render_report(&[]);
        assert_eq!(r.csv, format!("{REPORT_CSV_HEADER}\n"));
        assert!(r.warnings.is_empty());
        assert!(r.text.contains("Algorithm  Metric\n"));
    }

    #[test]
    fn cells_project_summary_fields() {
        let s = vec![
            summary(Algorithm::Brado, 8, Metric::Cost, 0, 3.0, 7),
            summary(Algorithm::Brado, 8, Metric::Nfe, 16560, 53271.0, 69930),
            summary(Algorithm::Ls, 8, Metric::Cost, 1, 4.8, 7),
            summary(Algorithm::Ls, 8, Metric::Nfe, 159, 183.0, 283),
            summary(Algorithm::Ls, 25, Metric::Cost, 15, 22.25, 35),
            summary(Algorithm::Ls, 25, Metric::Nfe, 190, 325.2, 453),
        ];
        let r = render_report(&s);
        let grid: Vec<&str> = r.text.lines().skip(2).take(5).collect();
        assert_eq!(grid[0], "Algorithm  Metric    8      25");
        assert_eq!(grid[1], "BRADO      Min Cost  0");
        assert_eq!(grid[2], "           Min NFE   16560");
        assert_eq!(grid[3], "LS         Min Cost  1      15");
        assert_eq!(grid[4], "           Min NFE   159    190");
        assert_eq!(r.warnings, vec!["no results for BRADO at n=25".to_string()]);
        assert!(r.text.contains("LS         Cost    15   22.25  35"));
        assert_eq!(r.csv.lines().count(), 7);
        assert!(r.csv.contains("\nls,25,final,cost,15,22.25,35,10\n"));
    }
}
