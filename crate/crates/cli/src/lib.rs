//! Experiment harness: sweep specification, runner, CSV output and the
//! summary table.

pub mod runner;
pub mod spec;
pub mod summarize;

use std::io::Write;

use anyhow::Result;
use ldp_pic::graph::{Cut, KCore};

pub use runner::{run_experiment, write_csv, ResultRow, RowKind};
pub use spec::{ExperimentSpec, GraphSource, Method};

/// Process exit code for an error, by category.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use ldp_pic::Error as E;
    match err.downcast_ref::<E>().map(E::root) {
        Some(E::Argument(_)) => 2,
        Some(E::Parse { .. }) => 3,
        Some(E::Domain(_)) => 4,
        Some(E::Convergence { .. }) => 5,
        Some(E::ProtocolOrder(_)) | Some(E::Budget { .. }) | Some(E::Phase { .. }) => 6,
        Some(E::Resource(_)) => 7,
        Some(E::Io(_)) => 8,
        None if err.downcast_ref::<std::io::Error>().is_some() => 8,
        None => 1,
    }
}

/// `node side` per line, side 1 for members of the first cluster.
pub fn write_truth<W: Write>(truth: &Cut, mut out: W) -> Result<()> {
    writeln!(out, "# node in_first_cluster")?;
    for (i, &m) in truth.mask().iter().enumerate() {
        writeln!(out, "{i} {}", u8::from(m))?;
    }
    Ok(())
}

/// Writes a k-core using the node labels of the input file.
pub fn write_core_edges<W: Write>(core: &KCore, labels: &[u64], mut out: W) -> Result<()> {
    for (u, v) in core.graph.edges() {
        writeln!(out, "{} {}", labels[core.original[u]], labels[core.original[v]])?;
    }
    Ok(())
}
