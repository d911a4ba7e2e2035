//! Table emitters: CSV for scripts, JSON for structured consumers (counts
//! as decimal strings, since they exceed 64-bit), aligned markdown for
//! humans.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::blockmoves::DistanceTable;
use crate::counting::CountTable;
use crate::estimator::{EstimateModel, TableReplica};
use crate::{format_rational_2dp, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Parse(format!(
                "unknown format {other:?} (expected csv|json|markdown)"
            ))),
        }
    }
}

fn markdown_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    // markdown separators need >= 3 dashes, so 3 is the width floor
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len().max(3)).collect();
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    let fmt_row = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{:>width$}", cell, width = widths[c]))
            .collect();
        format!("| {} |", padded.join(" | "))
    };
    let sep: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let mut out = String::new();
    out.push_str(&fmt_row(headers));
    out.push('\n');
    out.push_str(&format!("| {} |", sep.join(" | ")));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), cols);
        out.push_str(&fmt_row(row));
        out.push('\n');
    }
    out
}

fn csv_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Rows `n = 2..=n_max` of a count table in the chosen format.
pub fn render_count_table(table: &CountTable, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Csv => {
            let headers = vec!["n".into(), "k".into(), "count".into()];
            let mut rows = Vec::new();
            for n in 2..=table.n_max() {
                for (k, v) in table.row(n).expect("row in range").iter().enumerate() {
                    rows.push(vec![n.to_string(), k.to_string(), v.to_string()]);
                }
            }
            csv_table(&headers, &rows)
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = (2..=table.n_max())
                .map(|n| {
                    let counts: Vec<String> = table
                        .row(n)
                        .expect("row in range")
                        .iter()
                        .map(|v| v.to_string())
                        .collect();
                    json!({"n": n, "counts": counts})
                })
                .collect();
            let doc = json!({
                "adjacency_type": table.adjacency_type().to_string(),
                "n_max": table.n_max(),
                "rows": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        OutputFormat::Markdown => {
            let t = table.adjacency_type();
            let max_k = t.max_adjacencies(table.n_max());
            let mut headers: Vec<String> = vec!["n\\k".into()];
            headers.extend((0..=max_k).map(|k| k.to_string()));
            headers.push("sum".into());
            let mut rows = Vec::new();
            for n in 2..=table.n_max() {
                let mut row = vec![n.to_string()];
                for k in 0..=max_k {
                    row.push(table.get(n, k).to_string());
                }
                row.push(table.row_sum(n).expect("row in range").to_string());
                rows.push(row);
            }
            markdown_table(&headers, &rows)
        }
    }
}

/// Per-class distance statistics (`avg_distance` blank for empty classes).
pub fn render_distance_stats(table: &DistanceTable, fmt: OutputFormat) -> String {
    let stats = table.class_stats();
    let avg_str = |avg: Option<BigRational>| avg.map(|a| format_rational_2dp(&a)).unwrap_or_default();
    match fmt {
        OutputFormat::Csv | OutputFormat::Markdown => {
            let headers: Vec<String> = ["n", "class_k", "count", "avg_distance"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows: Vec<Vec<String>> = stats
                .iter()
                .map(|s| {
                    vec![
                        table.n().to_string(),
                        s.k.to_string(),
                        s.count.to_string(),
                        avg_str(s.average()),
                    ]
                })
                .collect();
            if fmt == OutputFormat::Csv {
                csv_table(&headers, &rows)
            } else {
                markdown_table(&headers, &rows)
            }
        }
        OutputFormat::Json => {
            let classes: Vec<Value> = stats
                .iter()
                .map(|s| {
                    json!({
                        "k": s.k,
                        "count": s.count,
                        "avg_distance": s.average().map(|a| format_rational_2dp(&a)),
                    })
                })
                .collect();
            let doc = json!({
                "n": table.n(),
                "move": table.kind().to_string(),
                "adjacency_type": table.kind().paired_adjacency().to_string(),
                "diameter": table.diameter(),
                "classes": classes,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    }
}

/// One estimation run: per size, the base average for the irreducible
/// class and the expected moves over all of `P_n`, flagged as computed
/// (exact search) or predicted (model).
pub fn render_estimate(model: &EstimateModel, fmt: OutputFormat) -> String {
    let source = |n: usize| if model.is_predicted(n) { "predicted" } else { "computed" };
    match fmt {
        OutputFormat::Csv | OutputFormat::Markdown => {
            let headers: Vec<String> = ["n", "base", "expected", "source"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows: Vec<Vec<String>> = (2..=model.n_max)
                .map(|n| {
                    vec![
                        n.to_string(),
                        format_rational_2dp(&model.base[n]),
                        format_rational_2dp(&model.expected[n]),
                        source(n).to_string(),
                    ]
                })
                .collect();
            if fmt == OutputFormat::Csv {
                csv_table(&headers, &rows)
            } else {
                markdown_table(&headers, &rows)
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = (2..=model.n_max)
                .map(|n| {
                    json!({
                        "n": n,
                        "base": format_rational_2dp(&model.base[n]),
                        "expected": format_rational_2dp(&model.expected[n]),
                        "source": source(n),
                    })
                })
                .collect();
            let doc = json!({
                "move": model.kind.to_string(),
                "limit": model.limit,
                "n_max": model.n_max,
                "psi": model.psi_mode.to_string(),
                "rows": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    }
}

/// Replica of the published computed-versus-predicted tables: one column of
/// exact values plus one prediction column per initialization limit.
/// Unavailable cells render empty.
pub fn render_replica(replica: &TableReplica, fmt: OutputFormat) -> String {
    let mut headers: Vec<String> = vec!["n".into(), "computed".into()];
    headers.extend(
        replica
            .predictions
            .iter()
            .map(|(limit, _)| format!("pred_i{limit}")),
    );
    let cell = |v: &Option<BigRational>| v.as_ref().map(format_rational_2dp).unwrap_or_default();
    let rows: Vec<Vec<String>> = (2..=replica.n_max)
        .map(|n| {
            let mut row = vec![n.to_string(), cell(&replica.computed[n])];
            row.extend(replica.predictions.iter().map(|(_, col)| cell(&col[n])));
            row
        })
        .collect();
    match fmt {
        OutputFormat::Csv => csv_table(&headers, &rows),
        OutputFormat::Markdown => markdown_table(&headers, &rows),
        OutputFormat::Json => {
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let obj: serde_json::Map<String, Value> = headers
                        .iter()
                        .zip(r.iter())
                        .map(|(h, v)| (h.clone(), json!(v)))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({ "rows": json_rows })).expect("serializable")
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmoves::{bfs_distances, BlockMoveKind};
    use crate::counting::build_count_table;
    use crate::permutation::AdjacencyType;

    #[test]
    fn count_table_csv_shape() {
        let t = build_count_table(2, AdjacencyType::Type2).unwrap();
        let csv = render_count_table(&t, OutputFormat::Csv);
        assert_eq!(csv, "n,k,count\n2,0,1\n2,1,0\n2,2,1\n");
    }

    #[test]
    fn count_table_json_uses_decimal_strings() {
        let t = build_count_table(14, AdjacencyType::Type1).unwrap();
        let out = render_count_table(&t, OutputFormat::Json);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["adjacency_type"], "type1");
        assert_eq!(doc["rows"][12]["counts"][0], "34361893981");
    }

    #[test]
    fn distance_stats_csv_shape() {
        let dt = bfs_distances(5, BlockMoveKind::PrefixTransposition).unwrap();
        let csv = render_distance_stats(&dt, OutputFormat::Csv);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n,class_k,count,avg_distance");
        assert_eq!(lines.next().unwrap(), "5,0,44,3.09");
        // the k = n-1 class is empty under type 2
        assert!(csv.lines().any(|l| l == "5,4,0,"));
    }

    #[test]
    fn markdown_rows_align() {
        let t = build_count_table(4, AdjacencyType::Type4).unwrap();
        let md = render_count_table(&t, OutputFormat::Markdown);
        let widths: Vec<usize> = md.lines().map(|l| l.len()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]), "{md}");
    }
}
