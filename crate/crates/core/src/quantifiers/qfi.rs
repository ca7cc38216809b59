//! Fidelity-based quantum Fisher information and the brute-force
//! minimization over local generators that defines interferometric power.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase_space::{
    fidelity_unchecked, is_physical, phase_rotation, single_mode_squeezer, GaussianState,
    SymplecticMatrix, PHYSICALITY_TOL,
};

/// A harmonic-spectrum generator on mode A: the number operator conjugated by
/// the local symplectic `R(chi) · S(xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub xi: f64,
    pub chi: f64,
}

impl GeneratorParams {
    /// `chi` is reduced modulo π (a squeezing axis has period π).
    pub fn new(xi: f64, chi: f64) -> Result<Self> {
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(Error::invalid(format!(
                "generator squeezing must be finite and >= 0, got {xi}"
            )));
        }
        if !chi.is_finite() {
            return Err(Error::invalid(format!(
                "generator angle must be finite, got {chi}"
            )));
        }
        Ok(Self {
            xi,
            chi: chi.rem_euclid(PI),
        })
    }

    /// The bare number operator.
    pub fn number() -> Self {
        Self { xi: 0.0, chi: 0.0 }
    }

    fn frame(&self) -> Result<SymplecticMatrix> {
        phase_rotation(self.chi, 0, 1)?.then_after(&single_mode_squeezer(self.xi)?)
    }

    /// Phase-space action of `exp(iεH)` on mode A of an `m`-mode system.
    fn flow(&self, eps: f64, modes: usize) -> Result<SymplecticMatrix> {
        let frame = self.frame()?;
        frame
            .then_after(&phase_rotation(eps, 0, 1)?)?
            .then_after(&frame.inverse())?
            .embed_local(0, modes)
    }
}

fn check_state(state: &GaussianState) -> Result<()> {
    if state.modes() > 2 {
        return Err(Error::invalid(
            "QFI is implemented for one and two modes only",
        ));
    }
    if !is_physical(state.covariance(), PHYSICALITY_TOL) {
        return Err(Error::unphysical("probe state violates σ + iΩ ≥ 0"));
    }
    Ok(())
}

fn qfi_unchecked(state: &GaussianState, g: &GeneratorParams, d_eps: f64) -> Result<f64> {
    let plus = state.apply(&g.flow(d_eps, state.modes())?)?;
    let minus = state.apply(&g.flow(-d_eps, state.modes())?)?;
    let f_plus = fidelity_unchecked(state, &plus);
    let f_minus = fidelity_unchecked(state, &minus);
    Ok((-2.0 * (f_plus - 2.0 + f_minus) / (d_eps * d_eps)).max(0.0))
}

/// QFI for phase estimation with generator `g` on mode A, from the central
/// second difference of the fidelity, `-2 (F(+ε) - 2 + F(-ε)) / ε²`.
pub fn qfi_phase(state: &GaussianState, g: &GeneratorParams, d_eps: f64) -> Result<f64> {
    if !(1e-4..=1e-2).contains(&d_eps) {
        return Err(Error::invalid(format!(
            "finite-difference step must lie in [1e-4, 1e-2], got {d_eps}"
        )));
    }
    check_state(state)?;
    qfi_unchecked(state, g, d_eps)
}

/// Quantum Cramér-Rao bound `1 / (n F)` on the estimator variance.
pub fn crb(qfi: f64, n_measurements: u64) -> Result<f64> {
    if !(qfi.is_finite() && qfi > 0.0) {
        return Err(Error::invalid(format!(
            "Fisher information must be positive, got {qfi}"
        )));
    }
    if n_measurements == 0 {
        return Err(Error::invalid("number of measurements must be positive"));
    }
    Ok(1.0 / (n_measurements as f64 * qfi))
}

/// Search specification for [`gip_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    pub xi_max: f64,
    pub xi_step: f64,
    /// Number of coarse angles in `[0, π)`.
    pub chi_steps: usize,
    /// Refinement passes, each sampling a `(2k+1)²` patch around the incumbent.
    pub refinements: usize,
    /// Cell shrink factor per pass.
    pub shrink: usize,
    pub d_eps: f64,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self {
            xi_max: 2.0,
            xi_step: 0.1,
            chi_steps: 36,
            refinements: 2,
            shrink: 10,
            d_eps: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    /// `min QFI / 4` over the searched generators.
    pub value: f64,
    pub generator: GeneratorParams,
    /// The minimizer sits on the `xi_max` boundary, so the true infimum may be lower.
    pub at_xi_cap: bool,
}

fn better(candidate: (f64, f64, f64), incumbent: (f64, f64, f64)) -> bool {
    let (v, xi, chi) = candidate;
    let (bv, bxi, bchi) = incumbent;
    v < bv || (v == bv && (xi < bxi || (xi == bxi && chi < bchi)))
}

/// Interferometric power by direct minimization of `QFI / 4` over
/// [`GeneratorParams`]: a coarse `(xi, chi)` grid followed by
/// `refinements` passes that zoom in on the incumbent.
///
/// Cells are evaluated in parallel; the reduction is order-independent
/// (ties go to the smallest `xi`, then the smallest `chi`).
pub fn gip_oracle(state: &GaussianState, grid: &OracleGrid) -> Result<OracleResult> {
    if state.modes() != 2 {
        return Err(Error::invalid(
            "interferometric power needs a two-mode state",
        ));
    }
    if !(grid.xi_max >= 0.0 && grid.xi_step > 0.0 && grid.chi_steps > 0 && grid.shrink > 0) {
        return Err(Error::invalid("degenerate oracle grid"));
    }
    if !(1e-4..=1e-2).contains(&grid.d_eps) {
        return Err(Error::invalid(
            "oracle finite-difference step must lie in [1e-4, 1e-2]",
        ));
    }
    check_state(state)?;

    let evaluate = |points: Vec<(f64, f64)>| -> Result<(f64, f64, f64)> {
        let values: Vec<Result<(f64, f64, f64)>> = points
            .par_iter()
            .map(|&(xi, chi)| {
                let g = GeneratorParams::new(xi, chi)?;
                Ok((qfi_unchecked(state, &g, grid.d_eps)? / 4.0, g.xi, g.chi))
            })
            .collect();
        let mut best = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        for v in values {
            let v = v?;
            if better(v, best) {
                best = v;
            }
        }
        Ok(best)
    };

    let xi_count = (grid.xi_max / grid.xi_step + 1e-9).floor() as usize;
    let chi_step = PI / grid.chi_steps as f64;
    let coarse: Vec<(f64, f64)> = (0..=xi_count)
        .flat_map(|i| {
            (0..grid.chi_steps).map(move |j| (i as f64 * grid.xi_step, j as f64 * chi_step))
        })
        .collect();
    let mut best = evaluate(coarse)?;

    let (mut half_xi, mut half_chi) = (grid.xi_step, chi_step);
    let k = grid.shrink as i64;
    for _ in 0..grid.refinements {
        let (_, xi0, chi0) = best;
        let patch: Vec<(f64, f64)> = (-k..=k)
            .map(|i| xi0 + i as f64 * half_xi / k as f64)
            .filter(|xi| (0.0..=grid.xi_max).contains(xi))
            .flat_map(|xi| (-k..=k).map(move |j| (xi, chi0 + j as f64 * half_chi / k as f64)))
            .collect();
        let refined = evaluate(patch)?;
        if better(refined, best) {
            best = refined;
        }
        half_xi /= k as f64;
        half_chi /= k as f64;
    }

    let (value, xi, chi) = best;
    Ok(OracleResult {
        value,
        generator: GeneratorParams { xi, chi },
        at_xi_cap: xi >= grid.xi_max - 1e-12,
    })
}
