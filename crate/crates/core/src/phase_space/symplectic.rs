use nalgebra::DMatrix;

use super::SYMPLECTIC_TOL;
use crate::error::{Error, Result};

/// The symplectic form `Ω = ⊕ω` with `ω = [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::invalid("symplectic form needs at least one mode"));
        }
        Ok(Self {
            modes,
            matrix: omega(modes),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

pub(crate) fn omega(modes: usize) -> DMatrix<f64> {
    let mut matrix = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        matrix[(2 * k, 2 * k + 1)] = 1.0;
        matrix[(2 * k + 1, 2 * k)] = -1.0;
    }
    matrix
}

/// A real `2m × 2m` matrix with `S Ω Sᵀ = Ω`, checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(Error::invalid(format!(
                "symplectic matrix must be square with even dimension, got {rows}x{cols}"
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("symplectic matrix has non-finite entries"));
        }
        let modes = rows / 2;
        let om = omega(modes);
        let defect = (&matrix * &om * matrix.transpose() - &om).amax();
        if defect > SYMPLECTIC_TOL {
            return Err(Error::invalid(format!(
                "matrix is not symplectic: max|SΩSᵀ - Ω| = {defect:e}"
            )));
        }
        Ok(Self { modes, matrix })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            modes,
            matrix: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `S⁻¹ = -Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let om = omega(self.modes);
        Self {
            modes: self.modes,
            matrix: -(&om * self.matrix.transpose() * &om),
        }
    }

    /// Matrix product `self · other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &SymplecticMatrix) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::invalid(format!(
                "cannot compose {}-mode and {}-mode transformations",
                self.modes, other.modes
            )));
        }
        Ok(Self {
            modes: self.modes,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &SymplecticMatrix) -> Self {
        let n1 = 2 * self.modes;
        let n2 = 2 * other.modes;
        let mut matrix = DMatrix::zeros(n1 + n2, n1 + n2);
        matrix.view_mut((0, 0), (n1, n1)).copy_from(&self.matrix);
        matrix.view_mut((n1, n1), (n2, n2)).copy_from(&other.matrix);
        Self {
            modes: self.modes + other.modes,
            matrix,
        }
    }

    /// Embeds a single-mode transformation on `target` of an `m`-mode system.
    pub fn embed_local(&self, target: usize, modes: usize) -> Result<Self> {
        if self.modes != 1 {
            return Err(Error::invalid(
                "only single-mode transformations can be embedded",
            ));
        }
        if target >= modes {
            return Err(Error::invalid(format!(
                "target mode {target} out of range for {modes} modes"
            )));
        }
        let mut matrix = DMatrix::identity(2 * modes, 2 * modes);
        matrix
            .view_mut((2 * target, 2 * target), (2, 2))
            .copy_from(&self.matrix);
        Ok(Self { modes, matrix })
    }
}

fn finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

/// Two-mode squeezer `exp(r(a₁†a₂† - a₁a₂))`.
pub fn two_mode_squeezer(r: f64) -> Result<SymplecticMatrix> {
    finite("squeezing r", r)?;
    let (c, s) = (r.cosh(), r.sinh());
    #[rustfmt::skip]
    let matrix = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    SymplecticMatrix::new(matrix)
}

/// Beam splitter `exp(θ(a₁†a₂ - a₁a₂†))`, transmissivity `cos²θ`.
pub fn two_mode_rotation(theta: f64) -> Result<SymplecticMatrix> {
    finite("rotation angle theta", theta)?;
    let (c, s) = (theta.cos(), theta.sin());
    #[rustfmt::skip]
    let matrix = DMatrix::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, s,
        -s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    SymplecticMatrix::new(matrix)
}

/// Phase shift on mode `target` of an `m`-mode system.
pub fn phase_rotation(phi: f64, target: usize, modes: usize) -> Result<SymplecticMatrix> {
    finite("phase phi", phi)?;
    let (c, s) = (phi.cos(), phi.sin());
    let block = SymplecticMatrix {
        modes: 1,
        matrix: DMatrix::from_row_slice(2, 2, &[c, s, -s, c]),
    };
    block.embed_local(target, modes)
}

/// Single-mode squeezer `diag(e^{-ξ}, e^{ξ})`.
pub fn single_mode_squeezer(xi: f64) -> Result<SymplecticMatrix> {
    finite("squeezing xi", xi)?;
    Ok(SymplecticMatrix {
        modes: 1,
        matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![(-xi).exp(), xi.exp()])),
    })
}
