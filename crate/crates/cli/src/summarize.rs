use std::io::{Read, Write};

use anyhow::{anyhow, Result};

use crate::runner::{aggregate, ResultRow, RowKind};

/// Reads the cell rows of a results CSV.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize::<ResultRow>().enumerate() {
        let row = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            anyhow!("malformed results row {} (line {line}): {e}", i + 1)
        })?;
        if row.kind == RowKind::Cell {
            rows.push(row);
        }
    }
    Ok(rows)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v}")).unwrap_or_else(|| "-".into())
}

fn fmt_pm(mean: Option<f64>, std: Option<f64>) -> String {
    match (mean, std) {
        (Some(m), Some(s)) => format!("{m:.4} ± {s:.4}"),
        _ => "-".into(),
    }
}

/// Prints mean ± sample standard deviation of both d_norm columns per
/// `(method, ε, n, p, q)`.
pub fn summarize<R: Read, W: Write>(input: R, mut out: W) -> Result<()> {
    let rows = read_rows(input)?;
    let table = aggregate(&rows);
    writeln!(
        out,
        "{:<32} {:>8} {:>7} {:>6} {:>6} {:>5} {:>18} {:>18}",
        "method", "epsilon", "n", "p", "q", "runs", "dnorm_spectral", "dnorm_truth"
    )?;
    for agg in &table {
        let runs = rows.iter().filter(|r| r.group_key() == agg.group_key() && r.error.is_empty()).count();
        writeln!(
            out,
            "{:<32} {:>8} {:>7} {:>6} {:>6} {:>5} {:>18} {:>18}",
            agg.method,
            fmt_opt(agg.epsilon),
            agg.n,
            fmt_opt(agg.p),
            fmt_opt(agg.q),
            runs,
            fmt_pm(agg.dnorm_spectral, agg.dnorm_spectral_std),
            fmt_pm(agg.dnorm_truth, agg.dnorm_truth_std),
        )?;
    }
    Ok(())
}
