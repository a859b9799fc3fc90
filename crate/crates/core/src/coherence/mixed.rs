//! Density-matrix forms of the Tsallis quantities.
//!
//! Matrix powers go through a dense Hermitian eigendecomposition, so this
//! path is limited to small dimensions. It exists to check the closed-form
//! minimization over incoherent states directly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AlphaBranch, AlphaParam};
use crate::error::{Error, Result};

pub const MAX_DENSITY_DIM: usize = 64;
const TOL: f64 = 1e-10;
const EIGEN_FLOOR: f64 = 1e-14;

/// Hermitian, positive semidefinite, unit-trace matrix of dimension at most 64.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallDensityMatrix {
    rho: DMatrix<Complex64>,
    // eigen-pairs, eigenvalues at roundoff level set to zero
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl SmallDensityMatrix {
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        let d = rho.nrows();
        if d == 0 || d != rho.ncols() {
            return Err(Error::InvalidDensityMatrix(format!("shape {}x{}", rho.nrows(), rho.ncols())));
        }
        if d > MAX_DENSITY_DIM {
            return Err(Error::InvalidDensityMatrix(format!("dimension {d} exceeds {MAX_DENSITY_DIM}")));
        }
        for i in 0..d {
            for j in 0..d {
                if (rho[(i, j)] - rho[(j, i)].conj()).norm() > TOL {
                    return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
                }
            }
        }
        let trace: f64 = (0..d).map(|i| rho[(i, i)].re).sum();
        if (trace - 1.0).abs() > TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let eig = rho.clone().symmetric_eigen();
        if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
            if min < -TOL {
                return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min}")));
            }
        }
        let floor = EIGEN_FLOOR * d as f64;
        Ok(Self {
            values: eig.eigenvalues.iter().map(|&v| if v > floor { v } else { 0.0 }).collect(),
            vectors: eig.eigenvectors,
            rho,
        })
    }

    /// `|psi><psi|` for a normalized amplitude vector.
    pub fn pure(amp: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amp);
        Self::new(&v * v.adjoint())
    }

    pub fn pure_real(amp: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = amp.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        Self::pure(&c)
    }

    pub fn diagonal(p: &[f64]) -> Result<Self> {
        let d = p.len();
        Self::new(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(p[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.rho[(i, i)].re).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.rho[(i, j)].norm() <= TOL))
    }

    /// Diagonal of `rho^power`, computed from the eigendecomposition.
    pub fn power_diag(&self, power: f64) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|j| {
                self.values
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l > 0.0)
                    .map(|(m, &l)| l.powf(power) * self.vectors[(j, m)].norm_sqr())
                    .sum()
            })
            .collect()
    }

    /// `-Tr(rho ln rho)`.
    pub fn von_neumann_entropy(&self) -> f64 {
        -self.values.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln()).sum::<f64>()
    }

    /// `Tr(rho ln rho) - sum_j rho_jj ln sigma_jj`, infinite when the support of
    /// `rho`'s diagonal leaves that of `sigma`.
    fn relative_entropy_to_diag(&self, sigma: &[f64]) -> f64 {
        let cross: f64 = self
            .diag()
            .iter()
            .zip(sigma)
            .map(|(&r, &s)| {
                if r <= TOL {
                    0.0
                } else if s <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    r * s.ln()
                }
            })
            .sum();
        -self.von_neumann_entropy() - cross
    }
}

fn diagonal_of(sigma: &SmallDensityMatrix) -> Result<Vec<f64>> {
    if !sigma.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    Ok(sigma.diag())
}

/// `f_alpha(rho, sigma) = Tr(rho^alpha sigma^(1-alpha))` for diagonal `sigma`.
fn f_alpha(rho: &SmallDensityMatrix, sigma: &[f64], a: f64) -> f64 {
    rho.power_diag(a)
        .iter()
        .zip(sigma)
        .map(|(&r, &s)| {
            if r <= 0.0 {
                0.0
            } else if s <= 0.0 {
                if a > 1.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            } else {
                r * s.powf(1.0 - a)
            }
        })
        .sum()
}

/// Tsallis relative alpha entropy `(Tr(rho^a sigma^(1-a)) - 1) / (a - 1)` to a
/// diagonal `sigma`.
///
/// Near `a = 1` this is `ln 2 * S(rho || sigma)` with `S` in bits. Returns
/// `+inf` when `a > 1` and `rho` has weight where `sigma` vanishes.
pub fn tsallis_relative_entropy(
    rho: &SmallDensityMatrix,
    sigma: &SmallDensityMatrix,
    alpha: AlphaParam,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: sigma.dim() });
    }
    let s = diagonal_of(sigma)?;
    Ok(match alpha.branch() {
        AlphaBranch::Limit => rho.relative_entropy_to_diag(&s),
        _ => {
            let a = alpha.get();
            (f_alpha(rho, &s, a) - 1.0) / (a - 1.0)
        }
    })
}

/// The functional minimized by `C_alpha`: `(f_alpha^(1/alpha) - 1) / (alpha - 1)`.
pub fn coherence_objective(
    rho: &SmallDensityMatrix,
    sigma: &SmallDensityMatrix,
    alpha: AlphaParam,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: sigma.dim() });
    }
    let s = diagonal_of(sigma)?;
    Ok(match alpha.branch() {
        AlphaBranch::Limit => rho.relative_entropy_to_diag(&s),
        _ => {
            let a = alpha.get();
            (f_alpha(rho, &s, a).powf(1.0 / a) - 1.0) / (a - 1.0)
        }
    })
}

fn diag_power_sum(rho: &SmallDensityMatrix, a: f64) -> f64 {
    rho.power_diag(a).iter().map(|&x| if x > 0.0 { x.powf(1.0 / a) } else { 0.0 }).sum()
}

fn relative_entropy_of_coherence_nats(rho: &SmallDensityMatrix) -> f64 {
    let diag_entropy: f64 = -rho.diag().iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>();
    diag_entropy - rho.von_neumann_entropy()
}

/// `C_alpha(rho) = (sum_j <j|rho^a|j>^(1/a) - 1) / (a - 1)`.
pub fn c_alpha_mixed(rho: &SmallDensityMatrix, alpha: AlphaParam) -> f64 {
    match alpha.branch() {
        AlphaBranch::Limit => relative_entropy_of_coherence_nats(rho),
        _ => {
            let a = alpha.get();
            (diag_power_sum(rho, a) - 1.0) / (a - 1.0)
        }
    }
}

/// `C~_alpha(rho) = ((sum_j <j|rho^a|j>^(1/a))^a - 1) / (a - 1)`, the minimum of
/// `D_alpha` itself over incoherent states.
pub fn c_tilde_alpha(rho: &SmallDensityMatrix, alpha: AlphaParam) -> f64 {
    match alpha.branch() {
        AlphaBranch::Limit => relative_entropy_of_coherence_nats(rho),
        _ => {
            let a = alpha.get();
            (diag_power_sum(rho, a).powf(a) - 1.0) / (a - 1.0)
        }
    }
}

/// Minimizing incoherent state, `sigma*_jj` proportional to `<j|rho^a|j>^(1/a)`.
pub fn optimal_incoherent_state(rho: &SmallDensityMatrix, alpha: AlphaParam) -> Result<SmallDensityMatrix> {
    let weights: Vec<f64> = match alpha.branch() {
        AlphaBranch::Limit => rho.diag(),
        _ => {
            let a = alpha.get();
            rho.power_diag(a).iter().map(|&x| if x > 0.0 { x.powf(1.0 / a) } else { 0.0 }).collect()
        }
    };
    let total: f64 = weights.iter().sum();
    assert!(total > 0.0, "unit-trace PSD matrix has a nonzero diagonal of rho^alpha");
    SmallDensityMatrix::diagonal(&weights.iter().map(|w| w / total).collect::<Vec<_>>())
}
