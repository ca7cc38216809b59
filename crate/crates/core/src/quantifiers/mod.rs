//! Correlation quantifiers for two-mode Gaussian states.
//!
//! Everything here reads the covariance matrix only, so the results are
//! insensitive to displacements and to local phase rotations.

mod qfi;

pub use qfi::{crb, gip_oracle, qfi_phase, GeneratorParams, OracleGrid, OracleResult};

use nalgebra::DMatrix;

use crate::channels::{evolve_closed_form, BathParams};
use crate::error::{Error, Result};
use crate::phase_space::{is_physical, symplectic_eigenvalues, GaussianState, PHYSICALITY_TOL};

/// Default flow time used to lift a pure state off the `0/0` point of the GIP formula.
pub const DEFAULT_REGULARIZATION: f64 = 1e-6;
/// Default relative tolerance for `|det α - det β|` in [`eof_symmetric`].
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-8;

/// Local symplectic invariants `A = det α`, `B = det β`, `C = det γ`, `D = det σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticInvariants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

fn check_two_mode(sigma: &DMatrix<f64>) -> Result<()> {
    if sigma.shape() != (4, 4) {
        return Err(Error::invalid(format!(
            "expected a 4x4 two-mode covariance, got {}x{}",
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    Ok(())
}

fn check_physical(sigma: &DMatrix<f64>) -> Result<()> {
    if !is_physical(sigma, PHYSICALITY_TOL) {
        return Err(Error::unphysical("covariance violates σ + iΩ ≥ 0"));
    }
    Ok(())
}

pub fn invariants(sigma: &DMatrix<f64>) -> Result<SymplecticInvariants> {
    check_two_mode(sigma)?;
    // validates symmetry
    crate::phase_space::block_decompose(sigma)?;
    let (a, b, c, d) = crate::phase_space::block_determinants(sigma);
    Ok(SymplecticInvariants { a, b, c, d })
}

/// Result of [`gip`]: the value and whether the pure-state regularization kicked in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gip {
    pub value: f64,
    pub regularized: bool,
}

struct GipTerms {
    x: f64,
    y: f64,
    z: f64,
}

fn gip_terms(inv: &SymplecticInvariants) -> GipTerms {
    let SymplecticInvariants { a, b, c, d } = *inv;
    GipTerms {
        x: (a + c) * (1.0 + b + c - d) - d * d,
        y: (d - 1.0) * (1.0 + a + b + 2.0 * c + d),
        z: (a + d) * (a * b - d) + c * (2.0 * a + c) * (1.0 + b),
    }
}

fn degenerate(inv: &SymplecticInvariants, y: f64) -> bool {
    y.abs() < 1e-9 * (1.0 + inv.a + inv.b + inv.d).powi(2)
}

/// Gaussian interferometric power with respect to mode A,
/// `P = (X + √(X² + YZ)) / 2Y`.
///
/// Pure states make every term vanish; they are first flowed for time
/// `regularization` through the unit-rate bath with `N = 0.5` on both modes.
pub fn gip(sigma: &DMatrix<f64>, regularization: f64) -> Result<Gip> {
    check_two_mode(sigma)?;
    if !(regularization.is_finite() && regularization >= 0.0) {
        return Err(Error::invalid(format!(
            "regularization must be finite and non-negative, got {regularization}"
        )));
    }
    check_physical(sigma)?;
    let mut inv = invariants(sigma)?;
    let mut terms = gip_terms(&inv);
    let mut regularized = false;
    if degenerate(&inv, terms.y) {
        if regularization == 0.0 {
            return Err(Error::Numerical(
                "interferometric power formula is 0/0 for this (pure) state".into(),
            ));
        }
        let bath = BathParams::thermal(1.0, vec![0.5, 0.5]);
        let state = GaussianState::centered(sigma.clone())?;
        let flowed = evolve_closed_form(&state, &bath, regularization)?;
        inv = invariants(flowed.covariance())?;
        terms = gip_terms(&inv);
        regularized = true;
        if terms.y <= 0.0 {
            return Err(Error::Numerical(
                "regularized state is still degenerate".into(),
            ));
        }
    }
    let GipTerms { x, y, z } = terms;
    let root = (x * x + y * z).max(0.0).sqrt();
    // X < 0 would cancel catastrophically in X + √(X² + YZ)
    let value = if x >= 0.0 {
        (x + root) / (2.0 * y)
    } else if root - x > 0.0 {
        z / (2.0 * (root - x))
    } else {
        0.0
    };
    Ok(Gip {
        value: value.max(0.0),
        regularized,
    })
}

/// Smallest symplectic eigenvalue of the partial transpose,
/// `2ν̃₋² = Δ̃ - √(Δ̃² - 4 det σ)` with `Δ̃ = A + B - 2C`.
pub fn nu_tilde_minus(sigma: &DMatrix<f64>) -> Result<f64> {
    check_two_mode(sigma)?;
    check_physical(sigma)?;
    let inv = invariants(sigma)?;
    let delta = inv.a + inv.b - 2.0 * inv.c;
    let disc = delta * delta - 4.0 * inv.d;
    if disc < -1e-10 * delta.powi(2).max(1.0) {
        return Err(Error::Numerical(format!(
            "negative discriminant {disc:e} for the partially transposed spectrum"
        )));
    }
    let root = disc.max(0.0).sqrt();
    // ν̃₊²ν̃₋² = det σ avoids the cancellation in Δ̃ - √(Δ̃² - 4 det σ)
    Ok((2.0 * inv.d / (delta + root)).sqrt())
}

/// Same quantity through the symplectic spectrum of `P σ P`, `P = diag(1, 1, 1, -1)`.
pub fn nu_tilde_minus_spectral(sigma: &DMatrix<f64>) -> Result<f64> {
    check_two_mode(sigma)?;
    let mut pt = sigma.clone();
    for i in 0..4 {
        if i != 3 {
            pt[(i, 3)] = -pt[(i, 3)];
            pt[(3, i)] = -pt[(3, i)];
        }
    }
    Ok(symplectic_eigenvalues(&pt)?[0])
}

fn xlog2x(y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        y * y.log2()
    }
}

/// `h(x) = f((1+x)²/4x) - f((1-x)²/4x)` with `f(y) = y log₂ y`, `f(0) = 0`.
pub fn entropy_h(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::invalid(format!(
            "entropy function needs x > 0, got {x}"
        )));
    }
    let plus = (1.0 + x).powi(2) / (4.0 * x);
    let minus = (1.0 - x).powi(2) / (4.0 * x);
    Ok(xlog2x(plus) - xlog2x(minus))
}

/// Entanglement of formation of a symmetric two-mode state, `max{0, h(ν̃₋)}`.
///
/// States with `|det α - det β| > symmetry_tol · max(det α, det β)` are
/// refused with [`Error::NotApplicable`].
pub fn eof_symmetric(sigma: &DMatrix<f64>, symmetry_tol: f64) -> Result<f64> {
    let inv = invariants(sigma)?;
    if (inv.a - inv.b).abs() > symmetry_tol * inv.a.max(inv.b) {
        return Err(Error::NotApplicable(format!(
            "state is not symmetric: det α = {}, det β = {}",
            inv.a, inv.b
        )));
    }
    let nu = nu_tilde_minus(sigma)?;
    if nu >= 1.0 {
        return Ok(0.0);
    }
    Ok(entropy_h(nu)?.max(0.0))
}

/// `max{0, -log₂ ν̃₋}`.
pub fn log_negativity(sigma: &DMatrix<f64>) -> Result<f64> {
    Ok((-nu_tilde_minus(sigma)?.log2()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::evolve_closed_form;
    use crate::phase_space::{phase_rotation, two_mode_squeezer};
    use nalgebra::DVector;

    fn tmsv(r: f64) -> GaussianState {
        GaussianState::vacuum(2)
            .unwrap()
            .apply(&two_mode_squeezer(r).unwrap())
            .unwrap()
    }

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(v))
    }

    fn evolved(r: f64, t: f64) -> DMatrix<f64> {
        let bath = BathParams::thermal(1.0, vec![0.5, 0.5]);
        evolve_closed_form(&tmsv(r), &bath, t)
            .unwrap()
            .covariance()
            .clone()
    }

    #[test]
    fn invariants_of_products_and_tmsv() {
        let inv = invariants(&diag(&[2.0, 2.0, 2.0, 2.0])).unwrap();
        assert_eq!(
            inv,
            SymplecticInvariants {
                a: 4.0,
                b: 4.0,
                c: 0.0,
                d: 16.0
            }
        );
        let r = 0.55f64;
        let inv = invariants(tmsv(r).covariance()).unwrap();
        let (c2, s2) = ((2.0 * r).cosh(), (2.0 * r).sinh());
        assert!((inv.a - c2 * c2).abs() < 1e-12);
        assert!((inv.b - c2 * c2).abs() < 1e-12);
        assert!((inv.c + s2 * s2).abs() < 1e-12);
        assert!((inv.d - 1.0).abs() < 1e-12);
        assert!(invariants(&DMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn invariants_survive_local_rotations() {
        let sigma = evolved(0.7, 0.3);
        let local = phase_rotation(0.4, 0, 2)
            .unwrap()
            .then_after(&phase_rotation(-1.3, 1, 2).unwrap())
            .unwrap();
        let rotated = GaussianState::centered(sigma.clone())
            .unwrap()
            .apply(&local)
            .unwrap();
        let a = invariants(&sigma).unwrap();
        let b = invariants(rotated.covariance()).unwrap();
        assert!((a.a - b.a).abs() < 1e-12 && (a.b - b.b).abs() < 1e-12);
        assert!((a.c - b.c).abs() < 1e-12 && (a.d - b.d).abs() < 1e-12);
    }

    #[test]
    fn gip_vanishes_on_thermal_products() {
        for (n1, n2) in [(0.2, 0.5), (1.0, 0.2), (3.0, 3.0)] {
            let s = diag(&[
                2.0 * n1 + 1.0,
                2.0 * n1 + 1.0,
                2.0 * n2 + 1.0,
                2.0 * n2 + 1.0,
            ]);
            let g = gip(&s, DEFAULT_REGULARIZATION).unwrap();
            assert_eq!(g.value, 0.0);
            assert!(!g.regularized);
        }
    }

    #[test]
    fn gip_pure_state_is_regularized() {
        let g = gip(tmsv(0.3).covariance(), DEFAULT_REGULARIZATION).unwrap();
        assert!(g.regularized);
        // pure-state limit sinh²(2r)/4 up to the O(ε) flow
        let limit = (0.6f64).sinh().powi(2) / 4.0;
        assert!(
            (g.value - limit).abs() < 1e-4 * limit,
            "{} vs {limit}",
            g.value
        );
        assert!(matches!(
            gip(tmsv(0.3).covariance(), 0.0),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn gip_mixed_state_values() {
        // frozen from the closed form; cross-checked against the QFI oracle in
        // the acceptance suite
        let g = gip(&evolved(0.3, 0.1), DEFAULT_REGULARIZATION).unwrap();
        assert!(!g.regularized);
        assert!(
            (g.value - 0.073_313_336_825_569_87).abs() < 1e-12,
            "{}",
            g.value
        );
    }

    #[test]
    fn gip_rejects_unphysical() {
        assert!(matches!(
            gip(&(DMatrix::identity(4, 4) * 0.5), 1e-6),
            Err(Error::Physicality(_))
        ));
    }

    #[test]
    fn nu_minus_anchors() {
        for r in [0.1f64, 0.8, 2.0] {
            let nu = nu_tilde_minus(tmsv(r).covariance()).unwrap();
            assert!((nu - (-2.0 * r).exp()).abs() < 1e-10, "r = {r}: {nu}");
        }
        for n in [0.0f64, 0.5, 2.0] {
            let v = 2.0 * n + 1.0;
            let nu = nu_tilde_minus(&diag(&[v, v, v, v])).unwrap();
            assert!((nu - v).abs() < 1e-12);
        }
        let nu = nu_tilde_minus(&evolved(0.9, 0.25)).unwrap();
        let spectral = nu_tilde_minus_spectral(&evolved(0.9, 0.25)).unwrap();
        assert!((nu - spectral).abs() < 1e-9);
    }

    #[test]
    fn entropy_function() {
        assert_eq!(entropy_h(1.0).unwrap(), 0.0);
        for r in [0.3f64, 1.2] {
            let (c2, s2) = (r.cosh().powi(2), r.sinh().powi(2));
            let expect = c2 * c2.log2() - s2 * s2.log2();
            assert!((entropy_h((-2.0 * r).exp()).unwrap() - expect).abs() < 1e-12);
        }
        let mut prev = f64::INFINITY;
        for i in 1..1000 {
            let h = entropy_h(i as f64 / 1000.0).unwrap();
            assert!(h < prev);
            prev = h;
        }
        assert!(entropy_h(0.0).is_err());
        assert!(entropy_h(-1.0).is_err());
    }

    #[test]
    fn eof_values() {
        let r = 1.2f64;
        let n = r.sinh().powi(2);
        let entropy = (n + 1.0) * (n + 1.0).log2() - n * n.log2();
        let e = eof_symmetric(tmsv(r).covariance(), DEFAULT_SYMMETRY_TOL).unwrap();
        assert!((e - entropy).abs() < 1e-10);
        assert_eq!(
            eof_symmetric(&diag(&[2.0, 2.0, 2.0, 2.0]), DEFAULT_SYMMETRY_TOL).unwrap(),
            0.0
        );
        // entanglement sudden death while the discord-type quantifier survives
        let s = evolved(0.3, 0.5);
        assert_eq!(eof_symmetric(&s, DEFAULT_SYMMETRY_TOL).unwrap(), 0.0);
        assert!(gip(&s, DEFAULT_REGULARIZATION).unwrap().value > 0.0);
    }

    #[test]
    fn eof_refuses_asymmetric() {
        let s = diag(&[2.0, 2.0, 3.0, 3.0]);
        assert!(matches!(
            eof_symmetric(&s, DEFAULT_SYMMETRY_TOL),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn log_negativity_values() {
        for r in [0.2f64, 0.9] {
            let ln = log_negativity(tmsv(r).covariance()).unwrap();
            assert!((ln - 2.0 * r * std::f64::consts::LOG2_E).abs() < 1e-10);
        }
        assert_eq!(log_negativity(&diag(&[3.0, 3.0, 3.0, 3.0])).unwrap(), 0.0);
        let s = evolved(1.0, 0.2);
        assert_eq!(
            log_negativity(&s).unwrap() > 0.0,
            eof_symmetric(&s, DEFAULT_SYMMETRY_TOL).unwrap() > 0.0
        );
    }
}
