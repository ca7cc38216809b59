use nalgebra::DMatrix;

use super::state::block_determinants;
use super::symplectic::omega;
use super::{is_physical, GaussianState, PHYSICALITY_TOL};
use crate::error::{Error, Result};

/// Below this (relative) value `det σ - 1` is treated as zero: the state is pure.
const PURE_TOL: f64 = 1e-10;

/// Uhlmann fidelity `(Tr √(√ρ₁ ρ₂ √ρ₁))²` of two one- or two-mode Gaussian states.
///
/// Mixed states use the one- and two-mode closed forms collected by
/// P. Marian and T. A. Marian, PRA 86, 022340 (2012), rewritten in the
/// vacuum = identity convention. When either state is pure the fidelity
/// reduces to the overlap `Tr ρ₁ρ₂ = 2^m / √det(σ₁ + σ₂) · exp(-½ δᵀ(σ₁ + σ₂)⁻¹δ)`,
/// which is used directly because the mixed-state expression loses half its
/// digits to a square root of a vanishing quantity in that limit.
pub fn gaussian_fidelity(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    if a.modes() != b.modes() {
        return Err(Error::invalid(format!(
            "fidelity between {}-mode and {}-mode states",
            a.modes(),
            b.modes()
        )));
    }
    if a.modes() > 2 {
        return Err(Error::invalid(
            "fidelity is implemented for one and two modes only",
        ));
    }
    for (name, s) in [("first", a), ("second", b)] {
        if !is_physical(s.covariance(), PHYSICALITY_TOL) {
            return Err(Error::unphysical(format!(
                "{name} state violates σ + iΩ ≥ 0"
            )));
        }
    }
    Ok(fidelity_unchecked(a, b).clamp(0.0, 1.0))
}

/// `∏(ν_k² - 1)` together with a purity flag.
fn mixedness(sigma: &DMatrix<f64>) -> (f64, bool) {
    let scale = 1.0 + sigma.amax().powi(2);
    let (product, det) = if sigma.nrows() == 2 {
        let det = sigma.determinant();
        (det - 1.0, det)
    } else {
        let (a, b, c, d) = block_determinants(sigma);
        (d - (a + b + 2.0 * c) + 1.0, d)
    };
    let pure = det - 1.0 <= PURE_TOL * scale;
    let product = if product <= PURE_TOL * scale {
        0.0
    } else {
        product
    };
    (product, pure)
}

/// Fidelity without validation; the caller guarantees one or two physical modes.
pub(crate) fn fidelity_unchecked(a: &GaussianState, b: &GaussianState) -> f64 {
    let modes = a.modes();
    let sum = a.covariance() + b.covariance();
    let delta = a.displacement() - b.displacement();
    let gauss = if delta.iter().all(|&x| x == 0.0) {
        1.0
    } else {
        let solved = sum
            .clone()
            .cholesky()
            .map(|c| c.solve(&delta))
            .unwrap_or_else(|| {
                sum.clone()
                    .lu()
                    .solve(&delta)
                    .unwrap_or_else(|| delta.clone())
            });
        (-0.5 * delta.dot(&solved)).exp()
    };

    let (pa, pure_a) = mixedness(a.covariance());
    let (pb, pure_b) = mixedness(b.covariance());
    // Δ = det(V₁ + V₂) with V = σ/2
    let big_delta = sum.determinant() / 4f64.powi(modes as i32);
    if pure_a || pure_b {
        return gauss / big_delta.sqrt();
    }
    let overlap = if modes == 1 {
        let small = pa * pb / 4.0;
        ((big_delta + small).sqrt() + small.sqrt()) / big_delta
    } else {
        let om = omega(2);
        let cross = &om * a.covariance() * &om * b.covariance() - DMatrix::identity(4, 4);
        let gamma = (cross.determinant() / 16.0).max(0.0);
        let lambda = pa * pb / 16.0;
        let s = gamma.sqrt() + lambda.sqrt();
        (s + (s * s - big_delta).max(0.0).sqrt()) / big_delta
    };
    gauss * overlap
}
