use graphseed_core::{Basis64, Complex64, Error, Result, Signal64};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumLaw {
    /// Independent real `N(0, 1)` coefficients on the active band.
    #[default]
    UnitGaussian,
}

/// `V_K x̂_K` with `x̂_K` drawn from `law`. Also returns `x̂_K`.
pub fn random_bandlimited(
    basis: &Basis64,
    k: usize,
    rng: &mut impl Rng,
    law: SpectrumLaw,
) -> Result<(Signal64, Vec<Complex64>)> {
    if k == 0 || k > basis.n() {
        return Err(Error::InvalidArgument(format!("bandwidth {k} outside 1..={}", basis.n())));
    }
    let yk: Vec<Complex64> = match law {
        SpectrumLaw::UnitGaussian => (0..k).map(|_| Complex64::new(rng.sample(StandardNormal), 0.0)).collect(),
    };
    Ok((Signal64::new(basis.v_active(k).matvec(&yk)), yk))
}
