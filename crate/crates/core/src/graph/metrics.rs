//! Cut metrics.
//!
//! `Vol(S)` here is the number of edges with both endpoints in `S`, not the
//! degree sum. The degree-sum counterparts (`degree_volume`,
//! `d_norm_degree_sum`) are provided for diagnostics only.

use super::{Cut, Graph};
use crate::error::{Error, Result};

fn check(g: &Graph, s: &Cut) -> Result<()> {
    if s.n() != g.node_count() {
        return Err(Error::argument(format!(
            "cut over {} nodes used with a graph of {} nodes",
            s.n(),
            g.node_count()
        )));
    }
    Ok(())
}

/// Number of edges with both endpoints in `s`.
pub fn volume(g: &Graph, s: &Cut) -> Result<usize> {
    check(g, s)?;
    let mut count = 0;
    for u in s.members() {
        count += g
            .neighbors(u)
            .iter()
            .filter(|&&v| (v as usize) > u && s.contains(v as usize))
            .count();
    }
    Ok(count)
}

/// Number of edges with one endpoint in `s` and the other in `s2`.
pub fn edges_across(g: &Graph, s: &Cut, s2: &Cut) -> Result<usize> {
    check(g, s)?;
    check(g, s2)?;
    if !s.is_disjoint(s2) {
        return Err(Error::argument("edges_across requires disjoint vertex sets"));
    }
    let mut count = 0;
    for u in s.members() {
        count += g
            .neighbors(u)
            .iter()
            .filter(|&&v| s2.contains(v as usize))
            .count();
    }
    Ok(count)
}

/// `e(S, S̄) / min(Vol(S), Vol(S̄))`.
pub fn conductance(g: &Graph, s: &Cut) -> Result<f64> {
    check(g, s)?;
    if s.is_trivial() {
        return Err(Error::domain("conductance of a trivial cut is undefined"));
    }
    let comp = s.complement();
    let denom = volume(g, s)?.min(volume(g, &comp)?);
    if denom == 0 {
        return Err(Error::domain(
            "conductance undefined: one side of the cut has zero volume",
        ));
    }
    Ok(edges_across(g, s, &comp)? as f64 / denom as f64)
}

/// `min(2 Vol(S △ S'), 2 Vol(S △ S̄'))`.
pub fn d_vol(g: &Graph, s: &Cut, s2: &Cut) -> Result<usize> {
    check(g, s)?;
    check(g, s2)?;
    let same = s.symmetric_difference(s2)?;
    let flipped = s.symmetric_difference(&s2.complement())?;
    Ok(2 * volume(g, &same)?.min(volume(g, &flipped)?))
}

/// `d_vol(S, S') / Vol(V)`, in `[0, 1]` and invariant to relabelling either cut.
pub fn d_norm(g: &Graph, s: &Cut, s2: &Cut) -> Result<f64> {
    let total = g.edge_count();
    if total == 0 {
        return Err(Error::domain("d_norm undefined on a graph without edges"));
    }
    Ok(d_vol(g, s, s2)? as f64 / total as f64)
}

/// Sum of degrees over `s`.
pub fn degree_volume(g: &Graph, s: &Cut) -> Result<usize> {
    check(g, s)?;
    Ok(s.members().map(|u| g.neighbors(u).len()).sum())
}

/// `d_vol` with degree-sum volumes.
pub fn d_vol_degree_sum(g: &Graph, s: &Cut, s2: &Cut) -> Result<usize> {
    check(g, s)?;
    check(g, s2)?;
    let same = s.symmetric_difference(s2)?;
    let flipped = s.symmetric_difference(&s2.complement())?;
    Ok(2 * degree_volume(g, &same)?.min(degree_volume(g, &flipped)?))
}

/// `d_norm` with degree-sum volumes; a uniformly random relabelling scores
/// close to 1 under this convention.
pub fn d_norm_degree_sum(g: &Graph, s: &Cut, s2: &Cut) -> Result<f64> {
    let total = 2 * g.edge_count();
    if total == 0 {
        return Err(Error::domain("d_norm undefined on a graph without edges"));
    }
    Ok(d_vol_degree_sum(g, s, s2)? as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn cut(n: usize, m: &[usize]) -> Cut {
        Cut::new(n, m.iter().copied()).unwrap()
    }

    #[test]
    fn volume_examples() {
        let k3 = complete(3);
        assert_eq!(volume(&k3, &cut(3, &[0, 1, 2])).unwrap(), 3);
        assert_eq!(volume(&k3, &cut(3, &[0])).unwrap(), 0);
        assert_eq!(volume(&cycle(4), &cut(4, &[0, 1])).unwrap(), 1);
    }

    #[test]
    fn edges_across_examples() {
        let c4 = cycle(4);
        assert_eq!(edges_across(&c4, &cut(4, &[0, 1]), &cut(4, &[2, 3])).unwrap(), 2);
        assert_eq!(edges_across(&c4, &cut(4, &[]), &cut(4, &[1, 2])).unwrap(), 0);
        let k4 = complete(4);
        assert_eq!(edges_across(&k4, &cut(4, &[0]), &cut(4, &[1, 2, 3])).unwrap(), 3);
    }

    #[test]
    fn edges_across_rejects_overlap() {
        let err = edges_across(&cycle(4), &cut(4, &[0, 1]), &cut(4, &[1, 2])).unwrap_err();
        assert!(matches!(err, Error::Argument(_)));
    }

    #[test]
    fn conductance_examples() {
        let g = barbell_triangles();
        let phi = conductance(&g, &cut(6, &[0, 1, 2])).unwrap();
        assert!((phi - 1.0 / 3.0).abs() < 1e-15);
        // K4 with S={0,1}: four crossing edges, one internal edge per side.
        assert_eq!(conductance(&complete(4), &cut(4, &[0, 1])).unwrap(), 4.0);
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(conductance(&two, &cut(6, &[0, 1, 2])).unwrap(), 0.0);
    }

    #[test]
    fn conductance_errors() {
        let k4 = complete(4);
        assert!(matches!(conductance(&k4, &cut(4, &[])), Err(Error::Domain(_))));
        assert!(matches!(conductance(&k4, &cut(4, &[0, 1, 2, 3])), Err(Error::Domain(_))));
        // singleton side has no internal edge
        assert!(matches!(conductance(&k4, &cut(4, &[0])), Err(Error::Domain(_))));
    }

    #[test]
    fn d_vol_and_d_norm_examples() {
        let c4 = cycle(4);
        let s = cut(4, &[0, 1]);
        assert_eq!(d_vol(&c4, &s, &s).unwrap(), 0);
        assert_eq!(d_vol(&c4, &s, &s.complement()).unwrap(), 0);
        assert_eq!(d_vol(&c4, &s, &cut(4, &[0, 2])).unwrap(), 2);
        assert_eq!(d_norm(&c4, &s, &cut(4, &[0, 2])).unwrap(), 0.5);
        assert_eq!(d_norm(&c4, &s, &s.complement()).unwrap(), 0.0);
    }

    #[test]
    fn d_norm_on_edgeless_graph_is_domain_error() {
        let g = Graph::empty(3);
        assert!(matches!(
            d_norm(&g, &cut(3, &[0]), &cut(3, &[1])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn degree_sum_variant() {
        let c4 = cycle(4);
        let s = cut(4, &[0, 1]);
        assert_eq!(degree_volume(&c4, &s).unwrap(), 4);
        assert_eq!(d_norm_degree_sum(&c4, &s, &cut(4, &[0, 2])).unwrap(), 1.0);
    }
}
