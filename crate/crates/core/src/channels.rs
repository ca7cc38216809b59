//! Markovian Gaussian bath acting independently on every mode.
//!
//! The second moments relax exponentially towards the bath covariance,
//! `dσ/dt = -Γ(σ - σ∞)`, and the first moments decay as `dd/dt = -Γ/2 d`.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::phase_space::{is_physical, GaussianState, PHYSICALITY_TOL};

/// Bath parameters: damping rate `Γ`, thermal photon number `N_k` and
/// squeezing `M_k` for every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct BathParams {
    pub gamma: f64,
    pub n: Vec<f64>,
    pub m: Vec<Complex<f64>>,
}

impl BathParams {
    pub fn new(gamma: f64, n: Vec<f64>, m: Vec<Complex<f64>>) -> Self {
        Self { gamma, n, m }
    }

    /// Unsqueezed thermal bath.
    pub fn thermal(gamma: f64, n: Vec<f64>) -> Self {
        let m = vec![Complex::new(0.0, 0.0); n.len()];
        Self { gamma, n, m }
    }

    pub fn n_modes(&self) -> usize {
        self.n.len()
    }

    /// Checks `Γ > 0`, `N_k ≥ 0` and the positivity constraint `|M_k|² ≤ N_k(N_k + 1)`.
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::invalid(format!(
                "damping rate must be finite and positive, got {}",
                self.gamma
            )));
        }
        if self.n.is_empty() {
            return Err(Error::invalid("bath needs at least one mode"));
        }
        if self.m.len() != self.n.len() {
            return Err(Error::invalid(format!(
                "bath has {} occupations but {} squeezing values",
                self.n.len(),
                self.m.len()
            )));
        }
        for (k, (&n, m)) in self.n.iter().zip(&self.m).enumerate() {
            if !(n.is_finite() && n >= 0.0) {
                return Err(Error::invalid(format!(
                    "bath occupation of mode {k} must be finite and non-negative, got {n}"
                )));
            }
            if !(m.re.is_finite() && m.im.is_finite()) {
                return Err(Error::invalid(format!(
                    "bath squeezing of mode {k} is not finite"
                )));
            }
            let m2 = m.norm_sqr();
            let bound = n * (n + 1.0);
            if m2 > bound {
                return Err(Error::unphysical(format!(
                    "bath mode {k}: |M|² = {m2} exceeds N(N+1) = {bound}"
                )));
            }
        }
        Ok(())
    }
}

pub fn validate_bath(bath: &BathParams) -> Result<()> {
    bath.validate()
}

/// Fixed point `σ∞ = ⊕_k [(2N_k + 1) I + 2 [[Re M_k, Im M_k], [Im M_k, -Re M_k]]]`.
pub fn asymptotic_cm(bath: &BathParams) -> Result<DMatrix<f64>> {
    bath.validate()?;
    let modes = bath.n_modes();
    let mut sigma = DMatrix::zeros(2 * modes, 2 * modes);
    for (k, (&n, m)) in bath.n.iter().zip(&bath.m).enumerate() {
        let diag = 2.0 * n + 1.0;
        sigma[(2 * k, 2 * k)] = diag + 2.0 * m.re;
        sigma[(2 * k + 1, 2 * k + 1)] = diag - 2.0 * m.re;
        sigma[(2 * k, 2 * k + 1)] = 2.0 * m.im;
        sigma[(2 * k + 1, 2 * k)] = 2.0 * m.im;
    }
    Ok(sigma)
}

fn check_inputs(state: &GaussianState, bath: &BathParams, t: f64) -> Result<DMatrix<f64>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(format!(
            "interaction time must be finite and non-negative, got {t}"
        )));
    }
    if bath.n_modes() != state.modes() {
        return Err(Error::invalid(format!(
            "{}-mode bath applied to {}-mode state",
            bath.n_modes(),
            state.modes()
        )));
    }
    let sigma_inf = asymptotic_cm(bath)?;
    if !is_physical(state.covariance(), PHYSICALITY_TOL) {
        return Err(Error::unphysical("input state violates σ + iΩ ≥ 0"));
    }
    Ok(sigma_inf)
}

/// `σ(t) = e^{-Γt} σ + (1 - e^{-Γt}) σ∞`, `d(t) = e^{-Γt/2} d`.
pub fn evolve_closed_form(
    state: &GaussianState,
    bath: &BathParams,
    t: f64,
) -> Result<GaussianState> {
    let sigma_inf = check_inputs(state, bath, t)?;
    let decay = (-bath.gamma * t).exp();
    let sigma = state.covariance() * decay + sigma_inf * (1.0 - decay);
    let d = state.displacement() * (-0.5 * bath.gamma * t).exp();
    Ok(GaussianState::with_parts(state.modes(), d, sigma))
}

/// Integrates the moment equations with classical fixed-step RK4.
///
/// The last step is shortened to land exactly on `t`.
pub fn evolve_ode(
    state: &GaussianState,
    bath: &BathParams,
    t: f64,
    dt: f64,
) -> Result<GaussianState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!(
            "time step must be finite and positive, got {dt}"
        )));
    }
    let sigma_inf = check_inputs(state, bath, t)?;
    let g = bath.gamma;
    let sigma_rhs = |s: &DMatrix<f64>| -> DMatrix<f64> { (s - &sigma_inf) * (-g) };
    let d_rhs = |d: &DVector<f64>| -> DVector<f64> { d * (-0.5 * g) };

    let mut sigma = state.covariance().clone();
    let mut d = state.displacement().clone();
    let full_steps = (t / dt).floor() as usize;
    let remainder = t - full_steps as f64 * dt;
    let mut steps = vec![dt; full_steps];
    if remainder > 1e-12 * dt {
        steps.push(remainder);
    }
    for h in steps {
        let k1 = sigma_rhs(&sigma);
        let k2 = sigma_rhs(&(&sigma + &k1 * (0.5 * h)));
        let k3 = sigma_rhs(&(&sigma + &k2 * (0.5 * h)));
        let k4 = sigma_rhs(&(&sigma + &k3 * h));
        sigma += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);

        let l1 = d_rhs(&d);
        let l2 = d_rhs(&(&d + &l1 * (0.5 * h)));
        let l3 = d_rhs(&(&d + &l2 * (0.5 * h)));
        let l4 = d_rhs(&(&d + &l3 * h));
        d += (l1 + l2 * 2.0 + l3 * 2.0 + l4) * (h / 6.0);
    }
    Ok(GaussianState::with_parts(state.modes(), d, sigma))
}

/// Closed-form evolution of a single mode `target` through a one-mode bath,
/// leaving the other modes untouched.
pub fn evolve_local(
    state: &GaussianState,
    bath: &BathParams,
    target: usize,
    t: f64,
) -> Result<GaussianState> {
    if bath.n_modes() != 1 {
        return Err(Error::invalid("local evolution takes a single-mode bath"));
    }
    if target >= state.modes() {
        return Err(Error::invalid(format!(
            "target mode {target} out of range for {} modes",
            state.modes()
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(format!(
            "interaction time must be finite and non-negative, got {t}"
        )));
    }
    let block_inf = asymptotic_cm(bath)?;
    let n = 2 * state.modes();
    let mut x = DMatrix::identity(n, n);
    let mut y = DMatrix::zeros(n, n);
    let amplitude = (-0.5 * bath.gamma * t).exp();
    for i in 0..2 {
        x[(2 * target + i, 2 * target + i)] = amplitude;
    }
    y.view_mut((2 * target, 2 * target), (2, 2))
        .copy_from(&(block_inf * (1.0 - amplitude * amplitude)));
    let sigma = &x * state.covariance() * x.transpose() + y;
    let d = &x * state.displacement();
    Ok(GaussianState::with_parts(state.modes(), d, sigma))
}
