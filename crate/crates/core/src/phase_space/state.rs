use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};

use super::symplectic::omega;
use super::{SymplecticMatrix, SYMMETRY_TOL};
use crate::error::{Error, Result};

/// A Gaussian state: first moments `d` and covariance matrix `sigma`.
///
/// The covariance is stored symmetrized. Construction checks shape and
/// symmetry only; physicality is a separate question (see [`is_physical`]).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: usize,
    d: DVector<f64>,
    sigma: DMatrix<f64>,
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn check_covariance(sigma: &DMatrix<f64>) -> Result<usize> {
    let (rows, cols) = sigma.shape();
    if rows != cols || rows == 0 || rows % 2 != 0 {
        return Err(Error::invalid(format!(
            "covariance must be square with even dimension, got {rows}x{cols}"
        )));
    }
    if sigma.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("covariance has non-finite entries"));
    }
    let asym = (sigma - sigma.transpose()).amax();
    if asym > SYMMETRY_TOL * sigma.amax().max(1.0) {
        return Err(Error::invalid(format!(
            "covariance is not symmetric: max|σ - σᵀ| = {asym:e}"
        )));
    }
    Ok(rows / 2)
}

impl GaussianState {
    pub fn new(d: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let modes = check_covariance(&sigma)?;
        if d.len() != 2 * modes {
            return Err(Error::invalid(format!(
                "displacement has length {}, expected {}",
                d.len(),
                2 * modes
            )));
        }
        if d.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("displacement has non-finite entries"));
        }
        Ok(Self {
            modes,
            d,
            sigma: symmetrize(&sigma),
        })
    }

    /// Zero-mean state with the given covariance.
    pub fn centered(sigma: DMatrix<f64>) -> Result<Self> {
        let n = sigma.nrows();
        Self::new(DVector::zeros(n), sigma)
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::invalid("a state needs at least one mode"));
        }
        Self::centered(DMatrix::identity(2 * modes, 2 * modes))
    }

    /// Single-mode thermal state with mean photon number `nbar`: `σ = (2n̄ + 1) I`.
    pub fn thermal(nbar: f64) -> Result<Self> {
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::invalid(format!(
                "thermal occupation must be finite and non-negative, got {nbar}"
            )));
        }
        Self::centered(DMatrix::from_diagonal_element(2, 2, 2.0 * nbar + 1.0))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// `self ⊗ other`: covariances are direct-summed, displacements concatenated.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let n1 = 2 * self.modes;
        let n2 = 2 * other.modes;
        let mut sigma = DMatrix::zeros(n1 + n2, n1 + n2);
        sigma.view_mut((0, 0), (n1, n1)).copy_from(&self.sigma);
        sigma.view_mut((n1, n1), (n2, n2)).copy_from(&other.sigma);
        let d = DVector::from_iterator(n1 + n2, self.d.iter().chain(other.d.iter()).copied());
        GaussianState {
            modes: self.modes + other.modes,
            d,
            sigma,
        }
    }

    /// `σ → S σ Sᵀ`, `d → S d`.
    pub fn apply(&self, s: &SymplecticMatrix) -> Result<GaussianState> {
        if s.modes() != self.modes {
            return Err(Error::invalid(format!(
                "{}-mode transformation applied to {}-mode state",
                s.modes(),
                self.modes
            )));
        }
        let m = s.matrix();
        Ok(GaussianState {
            modes: self.modes,
            d: m * &self.d,
            sigma: symmetrize(&(m * &self.sigma * m.transpose())),
        })
    }

    pub fn displace(&self, delta: &[f64]) -> Result<GaussianState> {
        if delta.len() != 2 * self.modes {
            return Err(Error::invalid(format!(
                "displacement has length {}, expected {}",
                delta.len(),
                2 * self.modes
            )));
        }
        if delta.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("displacement has non-finite entries"));
        }
        Ok(GaussianState {
            modes: self.modes,
            d: &self.d + DVector::from_column_slice(delta),
            sigma: self.sigma.clone(),
        })
    }

    /// Replaces the covariance, keeping the displacement.
    pub(crate) fn with_parts(modes: usize, d: DVector<f64>, sigma: DMatrix<f64>) -> GaussianState {
        GaussianState {
            modes,
            d,
            sigma: symmetrize(&sigma),
        }
    }
}

/// The `2 × 2` blocks of a two-mode covariance `[[α, γ], [γᵀ, β]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDecomposition {
    pub alpha: Matrix2<f64>,
    pub beta: Matrix2<f64>,
    pub gamma: Matrix2<f64>,
}

impl BlockDecomposition {
    pub fn reassemble(&self) -> DMatrix<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.alpha);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.beta);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&self.gamma);
        m.fixed_view_mut::<2, 2>(2, 0)
            .copy_from(&self.gamma.transpose());
        DMatrix::from_column_slice(4, 4, m.as_slice())
    }
}

pub fn block_decompose(sigma: &DMatrix<f64>) -> Result<BlockDecomposition> {
    if sigma.shape() != (4, 4) {
        return Err(Error::invalid(format!(
            "block decomposition needs a 4x4 covariance, got {}x{}",
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    check_covariance(sigma)?;
    Ok(BlockDecomposition {
        alpha: sigma.fixed_view::<2, 2>(0, 0).into_owned(),
        beta: sigma.fixed_view::<2, 2>(2, 2).into_owned(),
        gamma: sigma.fixed_view::<2, 2>(0, 2).into_owned(),
    })
}

/// Symplectic spectrum of `σ`, ascending.
///
/// With `σ = L Lᵀ` (`L = σ^{1/2}`), the antisymmetric `K = L Ω L` has
/// eigenvalues `±iν_k`, so `KᵀK` carries each `ν_k²` twice.
pub fn symplectic_eigenvalues(sigma: &DMatrix<f64>) -> Result<Vec<f64>> {
    let modes = check_covariance(sigma)?;
    let eig = sigma.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::invalid("covariance is not positive definite"));
    }
    let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let k = &root * omega(modes) * &root;
    let gram = symmetrize(&(k.transpose() * &k));
    let mut squares: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
    squares.sort_by(f64::total_cmp);
    Ok(squares
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

/// Determinants `(det α, det β, det γ, det σ)` of a two-mode covariance.
///
/// `det σ` goes through the Schur complement so that a product state
/// (`γ = 0`) yields exactly `det α · det β`.
pub(crate) fn block_determinants(sigma: &DMatrix<f64>) -> (f64, f64, f64, f64) {
    let alpha: Matrix2<f64> = sigma.fixed_view::<2, 2>(0, 0).into_owned();
    let beta: Matrix2<f64> = sigma.fixed_view::<2, 2>(2, 2).into_owned();
    let gamma: Matrix2<f64> = sigma.fixed_view::<2, 2>(0, 2).into_owned();
    let a = alpha.determinant();
    let b = beta.determinant();
    let c = gamma.determinant();
    let d = match alpha.try_inverse() {
        Some(inv) if a != 0.0 => a * (beta - gamma.transpose() * inv * gamma).determinant(),
        _ => sigma.determinant(),
    };
    (a, b, c, d)
}

/// `σ + iΩ ≥ 0` up to `tol` on the smallest symplectic eigenvalue.
/// Indefinite or malformed input is reported as unphysical.
pub fn is_physical(sigma: &DMatrix<f64>, tol: f64) -> bool {
    match symplectic_eigenvalues(sigma) {
        Ok(nu) => nu.first().is_some_and(|&n| n >= 1.0 - tol),
        Err(_) => false,
    }
}

/// `μ = 1/√det σ`.
pub fn purity(sigma: &DMatrix<f64>) -> Result<f64> {
    check_covariance(sigma)?;
    let det = sigma.determinant();
    if det <= 0.0 {
        return Err(Error::invalid(format!("det σ = {det:e} is not positive")));
    }
    Ok(1.0 / det.sqrt())
}
