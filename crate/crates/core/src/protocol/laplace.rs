use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};

/// One draw from the zero-mean Laplace distribution with scale `b`
/// (density `e^{-|x|/b} / 2b`), as a signed exponential.
pub fn laplace_sample<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::argument(format!(
            "Laplace scale must be positive and finite, got {scale}"
        )));
    }
    let magnitude: f64 = rng.sample(Exp1);
    Ok(if rng.random::<bool>() {
        scale * magnitude
    } else {
        -scale * magnitude
    })
}
