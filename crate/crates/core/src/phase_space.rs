//! Wigner functions, covariance matrices and Gaussian entanglement tests.
//!
//! Phase-space vectors are ordered γ = (x₁, x₂, p₁, p₂) throughout, so the
//! standard symplectic matrix is J = [[0, I], [−I, 0]] and the partial
//! transpose on the second mode is Λ = diag(1, 1, 1, −1). Logarithms are
//! natural.

use std::f64::consts::PI;

use nalgebra::{Cholesky, Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;

use crate::quadrature::GaussianRule2d;
use crate::states::{OscillatorGeometry, QuadraticGaussian, ShiftParams};
use crate::{Error, Mode, Result};

/// Relative tolerance for the ±iλ pairing of the eigenvalues of JΣ.
pub const PAIRING_TOL: f64 = 1e-10;

/// λ_min ≥ (ħ/2)(1 − SEPARABILITY_TOL) counts as separable.
pub const SEPARABILITY_TOL: f64 = 1e-10;

/// Allowed negative margin in the Robertson–Schrödinger test, relative to ‖Σ‖.
pub const UNCERTAINTY_TOL: f64 = 1e-12;

/// Default order of the chord-variable rule in [`wigner_numeric`].
pub const DEFAULT_WIGNER_ORDER: usize = 48;

/// Allowed change between orders n and 2n, relative to (πħ)^{−2}.
pub const WIGNER_CONVERGENCE_TOL: f64 = 1e-9;

/// Symmetric 4×4 covariance matrix over (x₁, x₂, p₁, p₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    sigma: Matrix4<f64>,
    hbar: f64,
}

impl CovarianceMatrix {
    pub fn new(sigma: Matrix4<f64>, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::invalid("hbar", hbar, "must be finite and positive"));
        }
        let asym = (sigma - sigma.transpose()).abs().max();
        if !(asym <= 1e-12 * sigma.abs().max()) {
            return Err(Error::invalid("sigma", asym, "covariance matrix must be symmetric"));
        }
        Ok(Self { sigma, hbar })
    }

    pub fn sigma(&self) -> &Matrix4<f64> {
        &self.sigma
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn position_block(&self) -> Matrix2<f64> {
        self.sigma.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn momentum_block(&self) -> Matrix2<f64> {
        self.sigma.fixed_view::<2, 2>(2, 2).into_owned()
    }
}

/// J for the ordering (x₁, x₂, p₁, p₂).
pub fn symplectic_form() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 2)] = 1.0;
    j[(1, 3)] = 1.0;
    j[(2, 0)] = -1.0;
    j[(3, 1)] = -1.0;
    j
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseSpacePoint {
    pub x1: f64,
    pub x2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl PhaseSpacePoint {
    pub fn new(x1: f64, x2: f64, p1: f64, p2: f64) -> Self {
        Self { x1, x2, p1, p2 }
    }

    pub fn as_vector(&self) -> Vector4<f64> {
        Vector4::new(self.x1, self.x2, self.p1, self.p2)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

/// (πħ)^{−2} exp(−½ (γ−γ₀)ᵀ Σ⁻¹ (γ−γ₀)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWigner {
    sigma_inv: Matrix4<f64>,
    peak: f64,
    center: Vector4<f64>,
}

impl GaussianWigner {
    pub fn new(cov: &CovarianceMatrix) -> Result<Self> {
        let chol = Cholesky::new(*cov.sigma()).ok_or(Error::NotPositiveDefinite("covariance matrix"))?;
        Ok(Self {
            sigma_inv: chol.inverse(),
            peak: 1.0 / (PI * cov.hbar()).powi(2),
            center: Vector4::zeros(),
        })
    }

    /// The same function translated by a Heisenberg–Weyl shift.
    pub fn shifted(&self, p: &ShiftParams) -> Self {
        Self {
            center: self.center + p.as_phase_space(),
            ..*self
        }
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn center(&self) -> PhaseSpacePoint {
        PhaseSpacePoint::from_vector(&self.center)
    }

    pub fn eval(&self, pt: &PhaseSpacePoint) -> f64 {
        let d = pt.as_vector() - self.center;
        self.peak * (-0.5 * d.dot(&(self.sigma_inv * d))).exp()
    }
}

/// ad − bc with a single rounding (Kahan's FMA scheme).
fn det_2x2(m: &Matrix2<f64>) -> f64 {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let w = b * c;
    let e = b.mul_add(-c, w);
    a.mul_add(d, -w) + e
}

fn inverse_2x2(m: &Matrix2<f64>) -> Option<Matrix2<f64>> {
    let det = det_2x2(m);
    if !(det > 0.0) {
        return None;
    }
    Some(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det)
}

/// Covariance blockdiag(M⁻¹/2, ħ²M/2) and Wigner function of a centred
/// Gaussian.
pub fn wigner_gaussian(g: &QuadraticGaussian, hbar: f64) -> Result<(CovarianceMatrix, GaussianWigner)> {
    let m = g.matrix();
    let inv = inverse_2x2(m).ok_or(Error::NotPositiveDefinite("Gaussian quadratic form"))?;
    let mut sigma = Matrix4::zeros();
    sigma.fixed_view_mut::<2, 2>(0, 0).copy_from(&(inv * 0.5));
    sigma.fixed_view_mut::<2, 2>(2, 2).copy_from(&(m * (0.5 * hbar * hbar)));
    let cov = CovarianceMatrix::new(sigma, hbar)?;
    let w = GaussianWigner::new(&cov)?;
    Ok((cov, w))
}

/// Closed-form covariance of the centred state of route k.
pub fn covariance(k: Mode, alpha: f64, geom: &OscillatorGeometry) -> Result<CovarianceMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", alpha, "covariance needs 0 < α < 1"));
    }
    let (a, b, h) = (geom.a, geom.b, geom.hbar);
    let sigma = match k {
        Mode::Product => Matrix4::from_diagonal(&Vector4::new(
            0.5 * alpha / (a * a),
            0.5 * alpha / (b * b),
            0.5 * a * a * h * h / alpha,
            0.5 * b * b * h * h / alpha,
        )),
        Mode::TwoMode => {
            let f = 1.0 / (4.0 * alpha);
            let (p, m) = (1.0 + alpha * alpha, 1.0 - alpha * alpha);
            Matrix4::new(
                f * p / (a * a),
                -f * m / (a * b),
                0.0,
                0.0,
                -f * m / (a * b),
                f * p / (b * b),
                0.0,
                0.0,
                0.0,
                0.0,
                f * p * a * a * h * h,
                f * m * a * b * h * h,
                0.0,
                0.0,
                f * m * a * b * h * h,
                f * p * b * b * h * h,
            )
        }
    };
    CovarianceMatrix::new(sigma, h)
}

/// The chord integral
/// (2πħ)^{−2} ∫ dX e^{−ip·X/ħ} f(x + X/2) conj(f(x − X/2)),
/// returned with its (ideally vanishing) imaginary part.
///
/// `envelope` is the quadratic form of |f| ~ exp(−½ rᵀ M r); the integrand
/// modulus then decays like exp(−¼ Xᵀ M X), which fixes the rule.
pub fn wigner_integral<F>(f: F, envelope: &Matrix2<f64>, pt: &PhaseSpacePoint, hbar: f64, order: usize) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    if !(hbar > 0.0) {
        return Err(Error::invalid("hbar", hbar, "must be positive"));
    }
    let eval = |ord: usize| -> Result<Complex64> {
        let rule = GaussianRule2d::new(Vector2::zeros(), &(envelope * 0.25), ord)?;
        let s: Complex64 = rule.integrate(|x1, x2| {
            let phase = Complex64::from_polar(1.0, -(pt.p1 * x1 + pt.p2 * x2) / hbar);
            phase * f(pt.x1 + 0.5 * x1, pt.x2 + 0.5 * x2) * f(pt.x1 - 0.5 * x1, pt.x2 - 0.5 * x2).conj()
        });
        Ok(s / (2.0 * PI * hbar).powi(2))
    };
    let coarse = eval(order)?;
    let fine = eval(2 * order)?;
    let tol = WIGNER_CONVERGENCE_TOL / (PI * hbar).powi(2);
    if (fine - coarse).norm() > tol {
        return Err(Error::NonConvergence {
            what: "Wigner chord integral",
            coarse_order: order,
            fine_order: 2 * order,
            coarse: coarse.re,
            fine: fine.re,
            tolerance: tol,
        });
    }
    Ok(fine)
}

/// Real part of [`wigner_integral`].
pub fn wigner_numeric<F>(f: F, envelope: &Matrix2<f64>, pt: &PhaseSpacePoint, hbar: f64, order: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> Complex64,
{
    Ok(wigner_integral(f, envelope, pt, hbar, order)?.re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyCheck {
    pub passed: bool,
    /// Smallest eigenvalue of Σ + (iħ/2)J.
    pub margin: f64,
}

/// Σ + (iħ/2)J ⪰ 0, tested on the eigenvalues of the Hermitian matrix.
pub fn robertson_schrodinger_check(cov: &CovarianceMatrix) -> UncertaintyCheck {
    let j = symplectic_form();
    let h = cov.sigma().map(|v| Complex64::new(v, 0.0)) + j.map(|v| Complex64::new(0.0, 0.5 * cov.hbar() * v));
    let eig = SymmetricEigen::new(h);
    let margin = eig.eigenvalues.min();
    let scale = cov.sigma().abs().max().max(cov.hbar());
    UncertaintyCheck {
        passed: margin >= -UNCERTAINTY_TOL * scale,
        margin,
    }
}

/// ΛΣΛᵀ with Λ = diag(1, 1, 1, −1).
pub fn partial_transpose(cov: &CovarianceMatrix) -> CovarianceMatrix {
    let lambda = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
    CovarianceMatrix {
        sigma: lambda * cov.sigma() * lambda.transpose(),
        hbar: cov.hbar(),
    }
}

/// Symplectic eigenvalues in ascending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    values: [f64; 2],
}

impl SymplecticSpectrum {
    pub fn values(&self) -> [f64; 2] {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[1]
    }
}

fn require_positive_definite(cov: &CovarianceMatrix) -> Result<()> {
    Cholesky::new(*cov.sigma())
        .map(|_| ())
        .ok_or(Error::NotPositiveDefinite("covariance matrix"))
}

/// Matches eigenvalues of JΣ into pairs ±iλ and returns the two λ > 0.
fn pair_imaginary(eigs: &[Complex64]) -> Result<[f64; 2]> {
    let scale = eigs.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let tol = PAIRING_TOL * scale.max(f64::MIN_POSITIVE);
    if let Some(e) = eigs.iter().find(|e| e.re.abs() > tol) {
        return Err(Error::SpectrumPairing(format!("eigenvalue {e} has a real part")));
    }
    let mut pos: Vec<f64> = eigs.iter().filter(|e| e.im > 0.0).map(|e| e.im).collect();
    let mut neg: Vec<f64> = eigs.iter().filter(|e| e.im < 0.0).map(|e| -e.im).collect();
    if pos.len() != 2 || neg.len() != 2 {
        return Err(Error::SpectrumPairing(format!("expected two ±iλ pairs, got {eigs:?}")));
    }
    pos.sort_by(f64::total_cmp);
    neg.sort_by(f64::total_cmp);
    for (p, n) in pos.iter().zip(&neg) {
        if (p - n).abs() > tol {
            return Err(Error::SpectrumPairing(format!("+i{p} has no partner −i{p} (nearest −i{n})")));
        }
    }
    Ok([0.5 * (pos[0] + neg[0]), 0.5 * (pos[1] + neg[1])])
}

/// Recovers the smaller value from λ₁λ₂ = √det Σ, which is exact for two
/// modes and avoids the absolute-error floor of the eigensolver on the
/// small eigenvalue.
fn refine_small(cov: &CovarianceMatrix, large: f64) -> f64 {
    cov.sigma().determinant().sqrt() / large
}

/// Symplectic spectrum from the eigenvalues of JΣ.
pub fn symplectic_spectrum(cov: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    require_positive_definite(cov)?;
    let js = symplectic_form() * cov.sigma();
    let eigs: Vec<Complex64> = js.complex_eigenvalues().iter().copied().collect();
    let [_, large] = pair_imaginary(&eigs)?;
    Ok(SymplecticSpectrum {
        values: [refine_small(cov, large), large],
    })
}

/// Symplectic spectrum through −(JΣ)², whose eigenvalues are λ² (each
/// twice). It is evaluated on the similar symmetric matrix
/// Σ^{1/2} Jᵀ Σ J Σ^{1/2}.
pub fn symplectic_spectrum_squared(cov: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    require_positive_definite(cov)?;
    let eig = SymmetricEigen::new(*cov.sigma());
    let root = eig.eigenvectors * Matrix4::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * eig.eigenvectors.transpose();
    let j = symplectic_form();
    let k = root * j.transpose() * cov.sigma() * j * root;
    let k = (k + k.transpose()) * 0.5;
    let mut sq: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().copied().collect();
    sq.sort_by(f64::total_cmp);
    let tol = PAIRING_TOL * sq[3].abs();
    if (sq[0] - sq[1]).abs() > tol || (sq[2] - sq[3]).abs() > tol || sq[0] <= 0.0 {
        return Err(Error::SpectrumPairing(format!(
            "−(JΣ)² eigenvalues {sq:?} are not doubly degenerate"
        )));
    }
    let large = (0.5 * (sq[2] + sq[3])).sqrt();
    Ok(SymplecticSpectrum {
        values: [refine_small(cov, large), large],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Separable,
    Entangled,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Separable => "SEPARABLE",
            Verdict::Entangled => "ENTANGLED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptReport {
    pub verdict: Verdict,
    /// Smallest symplectic eigenvalue of the partially transposed matrix.
    pub lambda_min: f64,
    /// λ_min lies within the separability tolerance of ħ/2, so the verdict
    /// is decided by the tolerance rather than by the data.
    pub boundary: bool,
}

/// Peres–Horodecki–Simon test: separable iff λ_min(Σ̃) ≥ ħ/2.
pub fn ppt_separable(cov: &CovarianceMatrix) -> Result<PptReport> {
    let lambda_min = symplectic_spectrum(&partial_transpose(cov))?.min();
    let half = 0.5 * cov.hbar();
    let verdict = if lambda_min >= half * (1.0 - SEPARABILITY_TOL) {
        Verdict::Separable
    } else {
        Verdict::Entangled
    };
    Ok(PptReport {
        verdict,
        lambda_min,
        boundary: (lambda_min - half).abs() <= half * SEPARABILITY_TOL,
    })
}

/// E_L = max(ln(ħ / 2λ_min), 0) with λ_min from the partial transpose.
pub fn log_negativity(cov: &CovarianceMatrix) -> Result<f64> {
    let lambda_min = symplectic_spectrum(&partial_transpose(cov))?.min();
    Ok((cov.hbar() / (2.0 * lambda_min)).ln().max(0.0))
}
