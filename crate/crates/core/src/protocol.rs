//! Probe preparation, black-box phase, thermal channel, quantifiers.
//!
//! The probe is a displaced, beam-split, two-mode squeezed thermal state
//! `D(α) R(θ) S(r) (ρ_th ⊗ ρ_th) S(r)† R(θ)† D(α)†`. Mode A then picks up
//! the unknown phase `φ`, and both modes relax for time `t` in their baths.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::channels::{evolve_closed_form, BathParams};
use crate::error::{Error, Result};
use crate::phase_space::{
    is_physical, phase_rotation, two_mode_rotation, two_mode_squeezer, GaussianState,
    PHYSICALITY_TOL,
};
use crate::quantifiers::{
    eof_symmetric, gip, log_negativity, nu_tilde_minus, DEFAULT_REGULARIZATION,
    DEFAULT_SYMMETRY_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    /// Two-mode squeezing.
    pub r: f64,
    /// Beam-splitter angle.
    pub theta: f64,
    /// Black-box phase on mode A.
    pub phi: f64,
    /// Thermal occupations of the two modes before squeezing.
    pub nbar_in: [f64; 2],
    /// Displacement `(Q1, P1, Q2, P2)` applied last.
    pub alpha: [f64; 4],
    pub bath: BathParams,
    pub t: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            r: 0.0,
            theta: 0.0,
            phi: 0.0,
            nbar_in: [0.0, 0.0],
            alpha: [0.0; 4],
            bath: BathParams::thermal(1.0, vec![0.5, 0.5]),
            t: 0.0,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("r", self.r), ("theta", self.theta), ("phi", self.phi)] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {v}")));
            }
        }
        for (k, &n) in self.nbar_in.iter().enumerate() {
            if !(n.is_finite() && n >= 0.0) {
                return Err(Error::invalid(format!(
                    "input occupation of mode {k} must be finite and non-negative, got {n}"
                )));
            }
        }
        if self.alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("displacement must be finite"));
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::invalid(format!(
                "interaction time must be finite and non-negative, got {}",
                self.t
            )));
        }
        if self.bath.n_modes() != 2 {
            return Err(Error::invalid("the protocol needs a two-mode bath"));
        }
        self.bath.validate()
    }
}

pub fn build_input(p: &ScenarioParams) -> Result<GaussianState> {
    p.validate()?;
    GaussianState::thermal(p.nbar_in[0])?
        .tensor(&GaussianState::thermal(p.nbar_in[1])?)
        .apply(&two_mode_squeezer(p.r)?)?
        .apply(&two_mode_rotation(p.theta)?)?
        .displace(&p.alpha)
}

/// One evaluated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub params: ScenarioParams,
    pub sigma_out: DMatrix<f64>,
    pub gip: f64,
    /// `None` when the output is not symmetric and the closed form does not apply.
    pub eof: Option<f64>,
    pub logneg: f64,
    pub nu_minus: f64,
    pub physical: bool,
    pub regularized: bool,
}

pub fn output_state(p: &ScenarioParams) -> Result<GaussianState> {
    let input = build_input(p)?;
    let probed = input.apply(&phase_rotation(p.phi, 0, 2)?)?;
    evolve_closed_form(&probed, &p.bath, p.t)
}

pub fn run_point(p: &ScenarioParams) -> Result<PointRecord> {
    let out = output_state(p)?;
    let sigma = out.covariance();
    if !is_physical(sigma, PHYSICALITY_TOL) {
        return Err(Error::unphysical("output covariance violates σ + iΩ ≥ 0"));
    }
    let g = gip(sigma, DEFAULT_REGULARIZATION)?;
    let eof = match eof_symmetric(sigma, DEFAULT_SYMMETRY_TOL) {
        Ok(v) => Some(v),
        Err(Error::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(PointRecord {
        params: p.clone(),
        sigma_out: sigma.clone(),
        gip: g.value,
        eof,
        logneg: log_negativity(sigma)?,
        nu_minus: nu_tilde_minus(sigma)?,
        physical: true,
        regularized: g.regularized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Theta,
    R,
    T,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Theta => "theta",
            Axis::R => "r",
            Axis::T => "t",
        }
    }

    pub fn with_value(self, base: &ScenarioParams, value: f64) -> ScenarioParams {
        let mut p = base.clone();
        match self {
            Axis::Theta => p.theta = value,
            Axis::R => p.r = value,
            Axis::T => p.t = value,
        }
        p
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: Axis,
    pub rows: Vec<(f64, PointRecord)>,
}

impl SweepTable {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|(v, _)| *v)
    }
}

/// Runs every grid point (in parallel) and returns them in grid order.
pub fn sweep(base: &ScenarioParams, axis: Axis, grid: &[f64]) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::invalid("sweep grid is empty"));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("sweep grid has non-finite values"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("sweep grid must be strictly increasing"));
    }
    let results: Vec<Result<PointRecord>> = grid
        .par_iter()
        .map(|&v| run_point(&axis.with_value(base, v)))
        .collect();
    let mut rows = Vec::with_capacity(grid.len());
    for (&value, res) in grid.iter().zip(results) {
        match res {
            Ok(rec) => rows.push((value, rec)),
            Err(e) => {
                return Err(Error::AtPoint {
                    axis: axis.name(),
                    value,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok(SweepTable { axis, rows })
}

/// `min, min + step, ...` up to `max` (inclusive within 1e-9 steps).
pub fn linear_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(Error::invalid("grid bounds must be finite"));
    }
    if step <= 0.0 {
        return Err(Error::invalid(format!(
            "grid step must be positive, got {step}"
        )));
    }
    if min >= max {
        return Err(Error::invalid(format!(
            "grid min {min} must be below max {max}"
        )));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| min + i as f64 * step).collect())
}

/// Interaction times drawn in the angle and squeezing figures.
pub const FIGURE_TIMES: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
/// Squeezing values drawn in the time figure.
pub const FIGURE_SQUEEZINGS: [f64; 3] = [0.3, 0.8, 1.2];

/// One curve of a figure recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// File stem, `fig<k>_<panel>_<paramtag>`.
    pub name: String,
    pub base: ScenarioParams,
    pub axis: Axis,
    pub grid: Vec<f64>,
}

fn tag(x: f64) -> String {
    format!("{x}")
}

/// Quantifiers versus beam-splitter angle: GIP panel at `r = 0.3`, EoF panel
/// at `r = 1.2`, one curve per time in [`FIGURE_TIMES`].
pub fn fig2_recipe() -> Vec<Curve> {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * (PI / 200.0)).collect();
    let mut curves = Vec::new();
    for (panel, r) in [("a", 0.3), ("b", 1.2)] {
        for t in FIGURE_TIMES {
            curves.push(Curve {
                name: format!("fig2_{panel}_r{}_t{}", tag(r), tag(t)),
                base: ScenarioParams {
                    r,
                    t,
                    ..Default::default()
                },
                axis: Axis::Theta,
                grid: grid.clone(),
            });
        }
    }
    curves
}

/// Quantifiers versus squeezing at `θ = π/2`, one curve per time.
pub fn fig3_recipe() -> Vec<Curve> {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
    FIGURE_TIMES
        .iter()
        .map(|&t| Curve {
            name: format!("fig3_ab_t{}", tag(t)),
            base: ScenarioParams {
                theta: PI / 2.0,
                t,
                ..Default::default()
            },
            axis: Axis::R,
            grid: grid.clone(),
        })
        .collect()
}

/// Quantifiers versus interaction time at `θ = π/2`, one curve per squeezing.
pub fn fig4_recipe() -> Vec<Curve> {
    let grid: Vec<f64> = (0..=300).map(|i| i as f64 * 0.01).collect();
    FIGURE_SQUEEZINGS
        .iter()
        .map(|&r| Curve {
            name: format!("fig4_ab_r{}", tag(r)),
            base: ScenarioParams {
                theta: PI / 2.0,
                r,
                ..Default::default()
            },
            axis: Axis::T,
            grid: grid.clone(),
        })
        .collect()
}
