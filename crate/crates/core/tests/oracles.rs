mod common;

use common::*;
use ldp_pic::graph::{d_norm, Cut};
use ldp_pic::spectral::{eigen_gap_g, reference_eigen, spectral_cut, EigenOptions, WalkOperator};
use nalgebra::DMatrix;

#[test]
fn reference_eigen_matches_dense_top_pairs() {
    for g in random_connected_graphs(8, 10..=80, 11) {
        let dense = lazy_walk_spectrum(&g);
        let op = WalkOperator::deflated(&g, 0.5).unwrap();
        let pairs = reference_eigen(&op, 3, &EigenOptions::default()).unwrap();
        // the deflated spectrum is λ₂(W), λ₃(W), ... plus a zero
        let mut expected: Vec<f64> = dense[1..].to_vec();
        expected.push(0.0);
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (p, e) in pairs.iter().zip(&expected) {
            assert!((p.value - e).abs() < 1e-8, "{} vs {e}", p.value);
        }
        // W̃ v = θ v for the returned vector
        let wt = dense_deflated(&g);
        let v = nalgebra::DVector::from_column_slice(&pairs[0].vector);
        let r = &wt * &v - &v * pairs[0].value;
        assert!(r.norm() / v.norm() < 1e-8);
    }
}

#[test]
fn lazy_spectrum_is_affine_image_of_walk_spectrum() {
    for g in random_connected_graphs(6, 8..=40, 5) {
        let a = adjacency(&g);
        let n = g.node_count();
        let inv_sqrt: Vec<f64> = (0..n).map(|i| 1.0 / a.row(i).sum().sqrt()).collect();
        let s = DMatrix::from_fn(n, n, |i, j| inv_sqrt[i] * a[(i, j)] * inv_sqrt[j]);
        let mut b: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
        b.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let w = lazy_walk_spectrum(&g);
        for (lb, lw) in b.iter().zip(&w) {
            assert!((0.5 * lb + 0.5 - lw).abs() < 1e-10);
        }
    }
}

#[test]
fn spectral_cut_agrees_with_dense_eigenvector() {
    for g in random_connected_graphs(6, 20..=60, 23) {
        // leading eigenvector of W̃ from the symmetric form of W and the
        // shift v − (Σv / nθ)·1
        let a = adjacency(&g);
        let n = g.node_count();
        let d: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
        let sym = DMatrix::from_fn(n, n, |i, j| {
            0.5 * a[(i, j)] / (d[i] * d[j]).sqrt() + if i == j { 0.5 } else { 0.0 }
        });
        let se = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| se.eigenvalues[y].partial_cmp(&se.eigenvalues[x]).unwrap());
        let k = order[1];
        let theta = se.eigenvalues[k];
        if (se.eigenvalues[order[1]] - se.eigenvalues[order[2]]).abs() < 1e-6 {
            continue;
        }
        let v: Vec<f64> = (0..n).map(|i| se.eigenvectors[(i, k)] / d[i].sqrt()).collect();
        let shift = v.iter().sum::<f64>() / (n as f64 * theta);
        let u: Vec<f64> = v.iter().map(|x| x - shift).collect();
        let dense_cut = Cut::from_signs(&u);
        let cut = spectral_cut(&g).unwrap();
        assert_eq!(d_norm(&g, &cut, &dense_cut).unwrap(), 0.0);
    }
}

#[test]
fn eigen_gap_matches_dense() {
    for g in random_connected_graphs(5, 12..=60, 41) {
        let w = lazy_walk_spectrum(&g);
        let (l2, l3) = (2.0 * w[1] - 1.0, 2.0 * w[2] - 1.0);
        let expected = (l2 + 1.0) / (l3 + 1.0);
        let got = eigen_gap_g(&g).unwrap();
        assert!((got - expected).abs() < 1e-5 * expected, "{got} vs {expected}");
    }
}
