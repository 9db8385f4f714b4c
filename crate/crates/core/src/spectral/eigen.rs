//! Iterative reference eigensolver for walk operators.
//!
//! `B`, `W_α` and `W̃_α` are similar to symmetric matrices through
//! `D^{1/2}`: `W_α = D^{-1/2} S D^{1/2}` with
//! `S = αI + (1 − α) D^{-1/2} A D^{-1/2}`. The solver runs block power
//! iteration with Rayleigh–Ritz on `S` (shifted to be positive
//! semidefinite when `α < ½`), so eigenvalues come out as Rayleigh
//! quotients of a symmetric problem.
//!
//! For `W̃_α` the iteration is deflated: every block is kept orthogonal to
//! `S`'s constant-walk eigenvector `D^{1/2}1`, which yields
//! `λ₂(W), λ₃(W), …`. Subtracting `J/n` maps those eigenvalues to
//! themselves and the constant vector to eigenvalue 0; a right eigenvector
//! `v` of `W` becomes `v − (Σv / nλ) 1` for `W̃`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::operator::WalkOperator;
use crate::error::{Error, Result};
use crate::seed::{Purpose, Seed};

/// Eigenvalue with a unit-norm right eigenvector of the operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖M v − λ v‖₂` measured on the operator itself.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Convergence threshold on each Ritz residual of the symmetric problem.
    pub tolerance: f64,
    /// Iteration cap; `None` means `10 n ln n` (at least 1000).
    pub max_iters: Option<usize>,
    /// Extra block columns beyond the requested `k`.
    pub oversample: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tolerance: 1e-10,
            max_iters: None,
            oversample: 2,
        }
    }
}

impl EigenOptions {
    pub fn iteration_cap(&self, n: usize) -> usize {
        self.max_iters.unwrap_or_else(|| {
            let n = n.max(2) as f64;
            ((10.0 * n * n.ln()).ceil() as usize).max(1000)
        })
    }
}

/// Top-`k` eigenpairs of `op`, sorted by decreasing eigenvalue.
pub fn reference_eigen(op: &WalkOperator<'_>, k: usize, opts: &EigenOptions) -> Result<Vec<EigenPair>> {
    if !(opts.tolerance > 0.0) {
        return Err(Error::argument("eigensolver tolerance must be positive"));
    }
    let n = op.n();
    let k = k.min(n);
    if k == 0 {
        return Ok(Vec::new());
    }
    let g = op.graph();
    let alpha = op.walk().lazy_factor();
    let deflated = op.walk().is_deflated();
    let sqrt_d: Vec<f64> = (0..n).map(|i| (g.neighbors(i).len() as f64).sqrt()).collect();
    let sym = SymmetricWalk {
        op,
        alpha,
        inv_sqrt_d: sqrt_d.iter().map(|s| 1.0 / s).collect(),
    };

    let mut pairs = Vec::with_capacity(k + 1);
    if deflated {
        let norm = sqrt_d.iter().map(|s| s * s).sum::<f64>().sqrt();
        let trivial: Vec<f64> = sqrt_d.iter().map(|s| s / norm).collect();
        let want = k.min(n - 1);
        let ritz = if want > 0 {
            block_iteration(&sym, want, Some(&trivial), opts)?
        } else {
            Vec::new()
        };
        for (theta, u) in ritz {
            let mut v: Vec<f64> = u.iter().zip(&sym.inv_sqrt_d).map(|(a, b)| a * b).collect();
            if theta.abs() > 1e-12 {
                let c = v.iter().sum::<f64>() / (n as f64 * theta);
                v.iter_mut().for_each(|x| *x -= c);
            }
            pairs.push((theta, v));
        }
        pairs.push((0.0, vec![1.0; n]));
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs.truncate(k);
    } else {
        for (theta, u) in block_iteration(&sym, k, None, opts)? {
            let v = u.iter().zip(&sym.inv_sqrt_d).map(|(a, b)| a * b).collect();
            pairs.push((theta, v));
        }
    }

    let mut scratch = vec![0.0; n];
    Ok(pairs
        .into_iter()
        .map(|(value, mut vector)| {
            normalize(&mut vector);
            op.apply_into(&vector, &mut scratch);
            let residual = scratch
                .iter()
                .zip(&vector)
                .map(|(mv, v)| (mv - value * v).powi(2))
                .sum::<f64>()
                .sqrt();
            EigenPair {
                value,
                vector,
                residual,
            }
        })
        .collect())
}

struct SymmetricWalk<'a, 'g> {
    op: &'a WalkOperator<'g>,
    alpha: f64,
    inv_sqrt_d: Vec<f64>,
}

impl SymmetricWalk<'_, '_> {
    /// `out = (αI + (1 − α) D^{-1/2} A D^{-1/2}) u`.
    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let g = self.op.graph();
        for (i, o) in out.iter_mut().enumerate() {
            let s: f64 = g
                .neighbors(i)
                .iter()
                .map(|&j| u[j as usize] * self.inv_sqrt_d[j as usize])
                .sum();
            *o = self.alpha * u[i] + (1.0 - self.alpha) * self.inv_sqrt_d[i] * s;
        }
    }

    /// Shift making the spectrum nonnegative (`S ⪰ 2α − 1`).
    fn shift(&self) -> f64 {
        (1.0 - 2.0 * self.alpha).max(0.0)
    }
}

/// Block power iteration with Rayleigh–Ritz; returns the top `k` Ritz pairs
/// of the symmetric walk, optionally restricted to the orthogonal
/// complement of a unit vector.
fn block_iteration(
    sym: &SymmetricWalk<'_, '_>,
    k: usize,
    exclude: Option<&[f64]>,
    opts: &EigenOptions,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = sym.inv_sqrt_d.len();
    let dim = if exclude.is_some() { n - 1 } else { n };
    let b = (k + opts.oversample).min(dim);
    let mut rng = Seed(0x5EED_E16E).stream(Purpose::Eigensolver);
    let mut q: Vec<Vec<f64>> = (0..b)
        .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    orthonormalize(&mut q, exclude, &mut rng);

    let shift = sym.shift();
    let cap = opts.iteration_cap(n);
    let mut sq: Vec<Vec<f64>> = vec![vec![0.0; n]; b];
    let mut worst = f64::INFINITY;
    for _ in 0..cap {
        for (col, out) in q.iter().zip(sq.iter_mut()) {
            sym.apply(col, out);
        }
        // Rayleigh–Ritz on span(q)
        let mut h = vec![vec![0.0; b]; b];
        for i in 0..b {
            for j in i..b {
                let v = dot(&q[i], &sq[j]);
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        let (theta, y) = jacobi_eigen(h);
        let u = combine(&q, &y);
        let su = combine(&sq, &y);
        worst = (0..k)
            .map(|c| {
                su[c]
                    .iter()
                    .zip(&u[c])
                    .map(|(a, x)| (a - theta[c] * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if worst <= opts.tolerance || b == dim {
            return Ok(theta.into_iter().zip(u).take(k).collect());
        }
        q = su
            .into_iter()
            .zip(&u)
            .map(|(mut s, x)| {
                if shift != 0.0 {
                    s.iter_mut().zip(x).for_each(|(a, b)| *a += shift * b);
                }
                s
            })
            .collect();
        orthonormalize(&mut q, exclude, &mut rng);
    }
    Err(Error::Convergence {
        iterations: cap,
        residual: worst,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn project_out(v: &mut [f64], u: &[f64]) {
    let c = dot(v, u);
    v.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
}

/// Modified Gram–Schmidt, applied twice. Columns that collapse are
/// replaced by fresh random directions.
fn orthonormalize<R: Rng>(q: &mut [Vec<f64>], exclude: Option<&[f64]>, rng: &mut R) {
    for i in 0..q.len() {
        let mut attempts = 0;
        loop {
            let (done, rest) = q.split_at_mut(i);
            let col = &mut rest[0];
            let before = dot(col, col).sqrt();
            for _ in 0..2 {
                if let Some(e) = exclude {
                    project_out(col, e);
                }
                for prev in done.iter() {
                    project_out(col, prev);
                }
            }
            let after = normalize(col);
            if after > 1e-10 * before.max(1e-300) && after > 0.0 {
                break;
            }
            attempts += 1;
            assert!(attempts < 100, "cannot extend orthonormal basis");
            col.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        }
    }
}

/// Columns `out[c] = Σ_r basis[r] * y[r][c]`.
fn combine(basis: &[Vec<f64>], y: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = basis[0].len();
    let b = basis.len();
    (0..b)
        .map(|c| {
            let mut col = vec![0.0; n];
            for (r, v) in basis.iter().enumerate() {
                let w = y[r][c];
                if w != 0.0 {
                    col.iter_mut().zip(v).for_each(|(a, x)| *a += w * x);
                }
            }
            col
        })
        .collect()
}

/// Cyclic Jacobi for a small symmetric matrix. Returns eigenvalues in
/// decreasing order and the matching eigenvectors as columns of `y`.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = a.len();
    let mut v = vec![vec![0.0; m]; m];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..m).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-32 * scale.max(1e-300) {
            break;
        }
        for p in 0..m {
            for r in p + 1..m {
                if a[p][r].abs() < 1e-300 {
                    continue;
                }
                let tau = (a[r][r] - a[p][p]) / (2.0 * a[p][r]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k][p];
                    let akr = a[k][r];
                    a[k][p] = c * akp - s * akr;
                    a[k][r] = s * akp + c * akr;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let ark = a[r][k];
                    a[p][k] = c * apk - s * ark;
                    a[r][k] = s * apk + c * ark;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vr = row[r];
                    row[p] = c * vp - s * vr;
                    row[r] = s * vp + c * vr;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..m)
        .map(|r| order.iter().map(|&c| v[r][c]).collect())
        .collect();
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;

    #[test]
    fn jacobi_small() {
        let (vals, vecs) = jacobi_eigen(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((vals[0] - 3.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!((vecs[0][0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn complete_graph_deflated_spectrum() {
        for n in [5usize, 10] {
            let g = complete(n);
            let op = WalkOperator::deflated(&g, 0.5).unwrap();
            let pairs = reference_eigen(&op, n, &EigenOptions::default()).unwrap();
            let top = (n as f64 - 2.0) / (2.0 * (n as f64 - 1.0));
            for p in &pairs[..n - 1] {
                assert!((p.value - top).abs() < 1e-12, "{}", p.value);
                assert!(p.residual < 1e-9);
            }
            assert!(pairs[n - 1].value.abs() < 1e-12);
        }
    }

    #[test]
    fn disjoint_triangles_split_by_sign() {
        let g = Graph::from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        let op = WalkOperator::deflated(&g, 0.5).unwrap();
        let top = &reference_eigen(&op, 1, &EigenOptions::default()).unwrap()[0];
        assert!((top.value - 1.0).abs() < 1e-12);
        let v = &top.vector;
        assert!(v[..3].iter().all(|x| (x - v[0]).abs() < 1e-9));
        assert!(v[3..].iter().all(|x| (x - v[3]).abs() < 1e-9));
        assert!(v[0] * v[3] < 0.0);
    }

    #[test]
    fn plain_walk_on_bipartite_graph_finds_minus_one_last() {
        let g = cycle(6);
        let op = WalkOperator::plain(&g).unwrap();
        let pairs = reference_eigen(&op, 6, &EigenOptions::default()).unwrap();
        assert!((pairs[0].value - 1.0).abs() < 1e-12);
        assert!((pairs[5].value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn convergence_failure_reports_residual() {
        let g = barbell_triangles();
        let op = WalkOperator::deflated(&g, 0.5).unwrap();
        let opts = EigenOptions {
            tolerance: 1e-300,
            max_iters: Some(3),
            oversample: 0,
        };
        match reference_eigen(&op, 1, &opts) {
            Err(Error::Convergence { iterations, residual }) => {
                assert_eq!(iterations, 3);
                assert!(residual.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
