use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ldp_pic::generators::{gen_sbm, SbmParams};
use ldp_pic::graph::{d_norm, io::read_edge_list, k_core, Cut, Graph};
use ldp_pic::protocol::{run_protocol_non_private, run_protocol_with_sink, CountingSink, ProtocolConfig};
use ldp_pic::rr::{randomize_response_with_limit, FlipParams};
use ldp_pic::spectral::{eigen_gap_g, iteration_count, pic_cut, spectral_cut};
use ldp_pic::Seed;

use crate::spec::{ExperimentSpec, GraphSource, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Cell,
    Aggregate,
}

/// One CSV line. Empty fields mean "not applicable".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub kind: RowKind,
    pub method: String,
    pub n: usize,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub t_used: Option<f64>,
    pub g_measured: Option<f64>,
    pub delta: Option<f64>,
    pub dnorm_spectral: Option<f64>,
    pub dnorm_spectral_std: Option<f64>,
    pub dnorm_truth: Option<f64>,
    pub dnorm_truth_std: Option<f64>,
    pub wall_ms: Option<f64>,
    pub error: String,
}

impl ResultRow {
    fn cell(method: String, inst: &Instance, epsilon: Option<f64>) -> Self {
        ResultRow {
            kind: RowKind::Cell,
            method,
            n: inst.graph.node_count(),
            p: inst.p,
            q: inst.q,
            epsilon,
            seed: Some(inst.seed),
            t_used: None,
            g_measured: inst.gap,
            delta: None,
            dnorm_spectral: None,
            dnorm_spectral_std: None,
            dnorm_truth: None,
            dnorm_truth_std: None,
            wall_ms: None,
            error: String::new(),
        }
    }

    /// Grouping key shared by aggregation and `summarize`.
    pub fn group_key(&self) -> (String, Option<u64>, usize, Option<u64>, Option<u64>) {
        (
            self.method.clone(),
            self.epsilon.map(f64::to_bits),
            self.n,
            self.p.map(f64::to_bits),
            self.q.map(f64::to_bits),
        )
    }
}

/// One graph to run every method on.
struct Instance {
    graph: Graph,
    truth: Option<Cut>,
    p: Option<f64>,
    q: Option<f64>,
    seed: u64,
    gap: Option<f64>,
}

/// Runs the full sweep and returns cell rows followed by aggregate rows.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let fixed = match &spec.source {
        GraphSource::EdgeList { path, k } => {
            let list = read_edge_list(path)?;
            Some(match k {
                Some(k) => k_core(&list.graph, *k).graph,
                None => list.graph,
            })
        }
        GraphSource::Sbm { .. } => None,
    };
    let mut jobs = Vec::new();
    match &spec.source {
        GraphSource::Sbm { n, p, q } => {
            for &n in n {
                for &p in p {
                    for &q in q {
                        for seed in spec.seed_values() {
                            jobs.push((Some((n, p, q)), seed));
                        }
                    }
                }
            }
        }
        GraphSource::EdgeList { .. } => jobs.extend(spec.seed_values().map(|s| (None, s))),
    }
    let cells: Vec<Vec<ResultRow>> = jobs
        .par_iter()
        .map(|&(params, seed)| {
            let inst = match params {
                Some((n, p, q)) => match gen_sbm(&SbmParams::balanced(n, p, q), Seed(seed)) {
                    Ok(pl) => Instance {
                        graph: pl.graph,
                        truth: Some(pl.truth),
                        p: Some(p),
                        q: Some(q),
                        seed,
                        gap: None,
                    },
                    Err(e) => {
                        let g = Graph::empty(n);
                        let inst = Instance {
                            graph: g,
                            truth: None,
                            p: Some(p),
                            q: Some(q),
                            seed,
                            gap: None,
                        };
                        return failed_instance(spec, &inst, &e.to_string());
                    }
                },
                None => Instance {
                    graph: fixed.clone().expect("edge-list source loaded"),
                    truth: None,
                    p: None,
                    q: None,
                    seed,
                    gap: None,
                },
            };
            run_instance(spec, inst)
        })
        .collect();
    let mut rows: Vec<ResultRow> = cells.into_iter().flatten().collect();
    let aggregates = aggregate(&rows);
    rows.extend(aggregates);
    Ok(rows)
}

fn sanitize(msg: &str) -> String {
    msg.replace([',', '"', '\n', '\r'], ";")
}

fn method_label(spec: &ExperimentSpec, m: Method) -> String {
    let base = m.name();
    if matches!(m, Method::Ours | Method::PicNonelim) && !spec.is_private() {
        format!("{base}[non-private]")
    } else {
        base.to_string()
    }
}

/// Rows a method would produce, all marked with `err`.
fn failed_instance(spec: &ExperimentSpec, inst: &Instance, err: &str) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for &m in &spec.methods {
        for (label, eps, _) in method_variants(spec, m) {
            let mut row = ResultRow::cell(label, inst, eps);
            row.error = sanitize(err);
            rows.push(row);
        }
    }
    rows
}

/// `(label, ε, lazy factor)` for each row a method produces per graph.
fn method_variants(spec: &ExperimentSpec, m: Method) -> Vec<(String, Option<f64>, Option<f64>)> {
    match m {
        Method::Spectral => vec![(m.name().to_string(), None, None)],
        Method::PicLazySweep => spec
            .lazy_alphas
            .iter()
            .map(|&a| (format!("pic-lazy-sweep[alpha={a}]"), None, Some(a)))
            .collect(),
        _ => spec
            .epsilons
            .iter()
            .map(|&e| (method_label(spec, m), Some(e), None))
            .collect(),
    }
}

fn run_instance(spec: &ExperimentSpec, mut inst: Instance) -> Vec<ResultRow> {
    let reference = match spectral_cut(&inst.graph) {
        Ok(c) => c,
        Err(e) => return failed_instance(spec, &inst, &format!("spectral reference: {e}")),
    };
    let t = match spec.iterations {
        Some(t) => Ok(t),
        None => eigen_gap_g(&inst.graph).and_then(|g| {
            inst.gap = Some(g);
            iteration_count(inst.graph.node_count(), g, Some(spec.cap_iters))
        }),
    };
    let t = match t {
        Ok(t) => t,
        Err(e) => return failed_instance(spec, &inst, &format!("iteration count: {e}")),
    };
    let score = |row: &mut ResultRow, cut: &Cut| -> ldp_pic::Result<()> {
        row.dnorm_spectral = Some(d_norm(&inst.graph, cut, &reference)?);
        if let Some(truth) = &inst.truth {
            row.dnorm_truth = Some(d_norm(&inst.graph, cut, truth)?);
        }
        Ok(())
    };
    let mut rows = Vec::new();
    for &m in &spec.methods {
        for (label, eps, alpha) in method_variants(spec, m) {
            let mut row = ResultRow::cell(label, &inst, eps);
            let start = Instant::now();
            let result = match m {
                Method::Spectral => score(&mut row, &reference),
                Method::PicLazySweep => {
                    let alpha = alpha.expect("sweep has a lazy factor");
                    row.t_used = Some(t as f64);
                    pic_cut(&inst.graph, t, Seed(inst.seed), true, alpha).and_then(|c| score(&mut row, &c))
                }
                Method::Rr => {
                    let eps = eps.expect("rr has epsilon");
                    FlipParams::new(eps)
                        .and_then(|_| randomize_response_with_limit(&inst.graph, eps, Seed(inst.seed), spec.rr_max_nodes))
                        .and_then(|noisy| spectral_cut(&noisy))
                        .and_then(|c| score(&mut row, &c))
                }
                Method::Ours | Method::PicNonelim => {
                    let mut cfg = ProtocolConfig::new(eps.expect("protocol has epsilon"), t, Seed(inst.seed))
                        .with_clip_factor(spec.clip_factor);
                    if m == Method::PicNonelim {
                        cfg = cfg.without_elimination();
                    }
                    cfg.noise_enabled = !spec.no_noise;
                    cfg.padding_enabled = !spec.no_padding;
                    row.t_used = Some(t as f64);
                    let mut sink = CountingSink::default();
                    let out = if cfg.is_private() {
                        run_protocol_with_sink(&inst.graph, &cfg, &mut sink)
                    } else {
                        run_protocol_non_private(&inst.graph, &cfg, &mut sink)
                    };
                    out.and_then(|o| {
                        row.delta = Some(o.delta);
                        score(&mut row, &o.cut)
                    })
                }
            };
            row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            if let Err(e) = result {
                row.error = sanitize(&e.to_string());
            }
            rows.push(row);
        }
    }
    rows
}

pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Some((mean, std))
}

/// One aggregate row per `(method, ε, n, p, q)`, in order of first
/// appearance, over the error-free cell rows.
pub fn aggregate(rows: &[ResultRow]) -> Vec<ResultRow> {
    let mut order = Vec::new();
    let mut groups: std::collections::HashMap<_, Vec<&ResultRow>> = std::collections::HashMap::new();
    for r in rows.iter().filter(|r| r.kind == RowKind::Cell) {
        let key = r.group_key();
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let members = &groups[&key];
            let ok: Vec<&ResultRow> = members.iter().copied().filter(|r| r.error.is_empty()).collect();
            let col = |f: fn(&ResultRow) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
            let mean = |f: fn(&ResultRow) -> Option<f64>| mean_std(&col(f)).map(|m| m.0);
            let spectral = mean_std(&col(|r| r.dnorm_spectral));
            let truth = mean_std(&col(|r| r.dnorm_truth));
            let first = members[0];
            let failed = members.len() - ok.len();
            ResultRow {
                kind: RowKind::Aggregate,
                method: first.method.clone(),
                n: first.n,
                p: first.p,
                q: first.q,
                epsilon: first.epsilon,
                seed: None,
                t_used: mean(|r| r.t_used),
                g_measured: mean(|r| r.g_measured),
                delta: mean(|r| r.delta),
                dnorm_spectral: spectral.map(|m| m.0),
                dnorm_spectral_std: spectral.map(|m| m.1),
                dnorm_truth: truth.map(|m| m.0),
                dnorm_truth_std: truth.map(|m| m.1),
                wall_ms: mean(|r| r.wall_ms),
                error: if failed > 0 {
                    format!("{failed} of {} runs failed", members.len())
                } else {
                    String::new()
                },
            }
        })
        .collect()
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    private: bool,
    /// The baseline runs spectral clustering on the raw flipped graph.
    rr_postprocessing: &'static str,
    /// The eigen-gap and T are read from the true graph.
    g_measured: &'static str,
    seeds: Vec<u64>,
    spec: &'a ExperimentSpec,
}

/// Writes the `#` metadata line, the header and all rows.
pub fn write_csv<W: Write>(spec: &ExperimentSpec, rows: &[ResultRow], mut out: W) -> Result<()> {
    let meta = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        private: spec.is_private(),
        rr_postprocessing: "raw",
        g_measured: "non-private",
        seeds: spec.seed_values().collect(),
        spec,
    };
    writeln!(out, "# {}", serde_json::to_string(&meta)?)?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).context("writing result row")?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: &str, v: f64, err: &str) -> ResultRow {
        ResultRow {
            kind: RowKind::Cell,
            method: method.into(),
            n: 10,
            p: Some(0.5),
            q: Some(0.1),
            epsilon: Some(1.0),
            seed: Some(0),
            t_used: Some(3.0),
            g_measured: None,
            delta: None,
            dnorm_spectral: Some(v),
            dnorm_spectral_std: None,
            dnorm_truth: None,
            dnorm_truth_std: None,
            wall_ms: Some(1.0),
            error: err.into(),
        }
    }

    #[test]
    fn mean_and_sample_std() {
        assert_eq!(mean_std(&[]), None);
        assert_eq!(mean_std(&[0.3]), Some((0.3, 0.0)));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn aggregate_skips_failed_runs() {
        let rows = vec![row("ours", 0.2, ""), row("ours", 0.4, ""), row("ours", 0.0, "boom"), row("rr", 0.9, "")];
        let agg = aggregate(&rows);
        assert_eq!(agg.len(), 2);
        assert_eq!(agg[0].method, "ours");
        assert!((agg[0].dnorm_spectral.unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(agg[0].error, "1 of 3 runs failed");
        assert_eq!(agg[1].dnorm_spectral_std, Some(0.0));
    }

    #[test]
    fn sanitized_errors_need_no_quoting() {
        assert_eq!(sanitize("a, \"b\"\nc"), "a; ;b;;c");
    }
}
