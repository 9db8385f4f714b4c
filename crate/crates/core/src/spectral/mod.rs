//! Non-private reference clustering: walk operators, a reference
//! eigensolver, spectral clustering and power iteration clustering.

mod eigen;
mod operator;

pub use eigen::{reference_eigen, EigenOptions, EigenPair};
pub use operator::{lazy_walk_entry, mean, neighbor_sum, Walk, WalkOperator, DEFAULT_LAZY};

use crate::error::{Error, Result};
use crate::generators::gen_init_vector;
use crate::graph::{Cut, Graph};
use crate::seed::Seed;

/// Spectral clustering cut: `{ i : v₁(W̃)_i > 0 }` with `W̃` the deflated
/// lazy walk, whose leading eigenvector is the clustering eigenvector of `B`.
///
/// On a disconnected graph the leading eigenvalue is 1 and the cut follows
/// the components.
pub fn spectral_cut(g: &Graph) -> Result<Cut> {
    spectral_cut_with(g, &EigenOptions::default())
}

pub fn spectral_cut_with(g: &Graph, opts: &EigenOptions) -> Result<Cut> {
    let op = WalkOperator::deflated(g, DEFAULT_LAZY)?;
    let pairs = reference_eigen(&op, 1, opts)?;
    Ok(Cut::from_signs(&pairs[0].vector))
}

/// Noise-free power iteration: `x ← W_α x − mean(x)` (or without the mean
/// subtraction when `deflate` is false), `iterations` times from the seed's
/// Gaussian start vector.
pub fn pic_vector(
    g: &Graph,
    iterations: usize,
    seed: Seed,
    deflate: bool,
    lazy_alpha: f64,
) -> Result<Vec<f64>> {
    let walk = if deflate {
        Walk::Deflated { alpha: lazy_alpha }
    } else {
        Walk::Lazy { alpha: lazy_alpha }
    };
    let op = WalkOperator::new(g, walk)?;
    let mut x = gen_init_vector(g.node_count(), seed);
    let mut next = vec![0.0; x.len()];
    for _ in 0..iterations {
        op.apply_into(&x, &mut next);
        std::mem::swap(&mut x, &mut next);
    }
    Ok(x)
}

pub fn pic_cut(
    g: &Graph,
    iterations: usize,
    seed: Seed,
    deflate: bool,
    lazy_alpha: f64,
) -> Result<Cut> {
    Ok(Cut::from_signs(&pic_vector(g, iterations, seed, deflate, lazy_alpha)?))
}

/// `g = (λ₂(B) + 1) / (λ₃(B) + 1)`, read off the top two eigenvalues of
/// the deflated lazy walk (`λ₂(W)`, `λ₃(W)` with `λ(B) = 2λ(W) − 1`).
/// Infinite when `λ₃(B) = −1`.
pub fn eigen_gap_g(g: &Graph) -> Result<f64> {
    // Only Ritz values are needed and they converge quadratically in the
    // residual, so a loose residual tolerance already pins g to ~1e-5.
    let opts = EigenOptions {
        tolerance: 1e-4,
        max_iters: None,
        oversample: 6,
    };
    eigen_gap_g_with(g, &opts)
}

pub fn eigen_gap_g_with(g: &Graph, opts: &EigenOptions) -> Result<f64> {
    if g.node_count() < 3 {
        return Err(Error::argument("eigen-gap needs at least 3 nodes"));
    }
    let op = WalkOperator::deflated(g, DEFAULT_LAZY)?;
    let pairs = reference_eigen(&op, 2, opts)?;
    let l2b = 2.0 * pairs[0].value - 1.0;
    let l3b = 2.0 * pairs[1].value - 1.0;
    let denom = l3b + 1.0;
    if denom <= 1e-14 {
        return Ok(f64::INFINITY);
    }
    Ok((l2b + 1.0) / denom)
}

/// `T = ceil(2 ln n / ln g)`, at least 1, then capped.
///
/// For `g ≤ 1` the formula diverges; a cap is then returned as is, and
/// without one this is a domain error.
pub fn iteration_count(n: usize, g: f64, cap: Option<usize>) -> Result<usize> {
    iteration_count_real(n as f64, g, cap)
}

pub(crate) fn iteration_count_real(n: f64, g: f64, cap: Option<usize>) -> Result<usize> {
    if g.is_nan() || g <= 1.0 {
        return cap.ok_or_else(|| {
            Error::domain(format!(
                "eigen-gap g = {g} ≤ 1 gives no finite iteration count; supply an iteration cap or an explicit T"
            ))
        });
    }
    let raw = 2.0 * n.ln() / g.ln();
    // absorb rounding in exact cases such as n = e, g = e²
    let t = ((raw - 1e-9).ceil().max(1.0)) as usize;
    Ok(match cap {
        Some(c) => t.min(c),
        None => t,
    })
}
