//! Edge-list text files.
//!
//! One undirected edge `u v` per line, separated by whitespace. Blank lines
//! and lines starting with `#` are ignored. Labels are non-negative
//! integers; on read they are compacted to `0..n` in ascending label order.
//! Self-loops are dropped and repeated or reversed edges collapse to one.
//!
//! The writer emits each edge once as `u v` with `u < v`, sorted, one per
//! line, each line newline-terminated.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::Graph;
use crate::error::{Error, Result};

/// A graph read from disk plus the original label of every node.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    /// `labels[node] = label in the file`.
    pub labels: Vec<u64>,
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    let file = File::open(path)?;
    parse_edge_list(BufReader::new(file), path)
}

/// Parses edge-list text; `origin` is only used in error messages.
pub fn parse_edge_list<R: BufRead>(reader: R, origin: &Path) -> Result<EdgeList> {
    let parse_error = |line: usize, message: String| Error::Parse {
        path: PathBuf::from(origin),
        line,
        message,
    };
    let mut raw = Vec::new();
    let mut labels = BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(parse_error(
                lineno,
                format!("expected two node labels, found {} tokens", tokens.len()),
            ));
        }
        let mut ends = [0u64; 2];
        for (slot, tok) in ends.iter_mut().zip(&tokens) {
            *slot = tok
                .parse::<u64>()
                .map_err(|_| parse_error(lineno, format!("`{tok}` is not a node label")))?;
        }
        labels.insert(ends[0]);
        labels.insert(ends[1]);
        raw.push((ends[0], ends[1]));
    }
    let labels: Vec<u64> = labels.into_iter().collect();
    let index = |label: u64| labels.binary_search(&label).expect("label collected above");
    let graph = Graph::from_edges(labels.len(), raw.iter().map(|&(u, v)| (index(u), index(v))))?;
    Ok(EdgeList { graph, labels })
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_edge_list_to(g, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_edge_list_to<W: Write>(g: &Graph, out: &mut W) -> Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<EdgeList> {
        parse_edge_list(text.as_bytes(), Path::new("<mem>"))
    }

    #[test]
    fn path_graph() {
        let e = parse("0 1\n1 2\n").unwrap();
        assert_eq!(e.graph.node_count(), 3);
        assert_eq!(e.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn duplicates_and_loops() {
        assert_eq!(parse("0 1\n1 0\n").unwrap().graph.edge_count(), 1);
        let e = parse("0 0\n0 1\n").unwrap();
        assert_eq!(e.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn comments_and_label_compaction() {
        let e = parse("# header\n10 30\n\n30\t7\n").unwrap();
        assert_eq!(e.labels, vec![7, 10, 30]);
        assert_eq!(e.graph.edges().collect::<Vec<_>>(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("0 1\n# ok\n1 2 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("-1 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn writer_output_is_sorted_pairs() {
        let g = Graph::from_edges(4, [(3, 1), (2, 0), (1, 0)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list_to(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1\n0 2\n1 3\n");
    }
}
