//! Schrödinger wave functions of the bipartite squeezed coherent states.
//!
//! Both closed forms are Gaussians in (x₁, x₂) with a linear phase: the
//! product route (k = 1) has covariance diag(a²/α, b²/α), the two-mode
//! route (k = 2) couples the modes through the off-diagonal entry
//! (1−α²)ab/(2α). Each is a Heisenberg–Weyl shift of its centred version
//! ([`unshifted_gaussian`]), and each is the sum of its Fock series
//! Σ φ_{k,(m,n)} ⟨x₁,x₂|m,n⟩ once the coefficients are normalised by
//! e^{−(|z₁|²+|z₂|²)/2}.
//!
//! Labels follow z_i = a_i x_i + i p_i/(2a_i ħ). Lengths scale with 1/a and
//! 1/b; momentum shifts carry one factor of ħ.

use std::f64::consts::PI;

use nalgebra::{Matrix2, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;

use crate::basis::coefficient_table;
use crate::hermite::{factorial, hermite_functions};
use crate::quadrature::GaussHermite;
use crate::{Error, Mode, Result};

/// Inverse oscillator lengths along x₁ and x₂, plus ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorGeometry {
    pub a: f64,
    pub b: f64,
    pub hbar: f64,
}

impl OscillatorGeometry {
    pub fn new(a: f64, b: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, v, "must be finite and positive"));
            }
        }
        Ok(Self { a, b, hbar })
    }

    pub fn unit() -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            hbar: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.a, self.b, self.hbar).map(|_| ())
    }
}

impl Default for OscillatorGeometry {
    fn default() -> Self {
        Self::unit()
    }
}

/// Complex phase-space labels z₁, z₂.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DisplacementLabels {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl DisplacementLabels {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn swapped(&self) -> Self {
        Self {
            z1: self.z2,
            z2: self.z1,
        }
    }

    fn validate(&self) -> Result<()> {
        for v in [self.z1.re, self.z1.im, self.z2.re, self.z2.im] {
            if !v.is_finite() {
                return Err(Error::invalid("z", v, "labels must be finite"));
            }
        }
        Ok(())
    }
}

/// Parameters of a Heisenberg–Weyl translation: position shifts y and
/// momentum shifts q.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShiftParams {
    pub y1: f64,
    pub y2: f64,
    pub q1: f64,
    pub q2: f64,
}

impl ShiftParams {
    pub fn zero() -> Self {
        Self::default()
    }

    /// (y₁, y₂, q₁, q₂), the phase-space displacement of the Wigner function.
    pub fn as_phase_space(&self) -> Vector4<f64> {
        Vector4::new(self.y1, self.y2, self.q1, self.q2)
    }
}

impl std::ops::Add for ShiftParams {
    type Output = ShiftParams;
    fn add(self, o: ShiftParams) -> ShiftParams {
        ShiftParams {
            y1: self.y1 + o.y1,
            y2: self.y2 + o.y2,
            q1: self.q1 + o.q1,
            q2: self.q2 + o.q2,
        }
    }
}

/// A centred normalised Gaussian (det M/π²)^{1/4} exp(−½ rᵀ M r) on ℝ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticGaussian {
    m: Matrix2<f64>,
    norm_prefactor: f64,
}

impl QuadraticGaussian {
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let asym = (m[(0, 1)] - m[(1, 0)]).abs();
        if asym > 1e-14 * m.abs().max() {
            return Err(Error::invalid("M", asym, "matrix must be symmetric"));
        }
        let eig = SymmetricEigen::new(m);
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::NotPositiveDefinite("Gaussian quadratic form"));
        }
        let norm_prefactor = (m.determinant() / (PI * PI)).powf(0.25);
        Ok(Self { m, norm_prefactor })
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn norm_prefactor(&self) -> f64 {
        self.norm_prefactor
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let r = Vector2::new(x1, x2);
        self.norm_prefactor * (-0.5 * r.dot(&(self.m * r))).exp()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("alpha", alpha, "wave functions need 0 < α < 1"))
    }
}

/// A squeezed coherent state for one route, evaluable in position space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedCoherentState {
    pub k: Mode,
    pub alpha: f64,
    pub geom: OscillatorGeometry,
    pub labels: DisplacementLabels,
}

impl SqueezedCoherentState {
    pub fn new(k: Mode, alpha: f64, geom: OscillatorGeometry, labels: DisplacementLabels) -> Result<Self> {
        check_alpha(alpha)?;
        geom.validate()?;
        labels.validate()?;
        Ok(Self { k, alpha, geom, labels })
    }

    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        match self.k {
            Mode::Product => psi1_unchecked(x1, x2, &self.geom, &self.labels, self.alpha),
            Mode::TwoMode => psi2_unchecked(x1, x2, &self.geom, &self.labels, self.alpha),
        }
    }

    pub fn shift_params(&self) -> ShiftParams {
        shift_params_unchecked(self.k, self.alpha, &self.geom, &self.labels)
    }

    pub fn unshifted(&self) -> QuadraticGaussian {
        unshifted_gaussian(self.k, self.alpha, &self.geom).expect("validated at construction")
    }
}

fn psi1_unchecked(x1: f64, x2: f64, g: &OscillatorGeometry, l: &DisplacementLabels, alpha: f64) -> Complex64 {
    let (a, b) = (g.a, g.b);
    let (z1r, z1i, z2r, z2i) = (l.z1.re, l.z1.im, l.z2.re, l.z2.im);
    let s = (2.0 * alpha).sqrt();
    let d1 = x1 - s / a * z1r;
    let d2 = x2 - s / b * z2r;
    let re = -a * a / (2.0 * alpha) * d1 * d1 - b * b / (2.0 * alpha) * d2 * d2;
    let im = (2.0 / alpha).sqrt() * (a * x1 * z1i + b * x2 * z2i) - (z1r * z1i + z2r * z2i);
    Complex64::new(re, im).exp() * (a * b / (PI * alpha)).sqrt()
}

fn psi2_unchecked(x1: f64, x2: f64, g: &OscillatorGeometry, l: &DisplacementLabels, alpha: f64) -> Complex64 {
    let (a, b) = (g.a, g.b);
    let (z1r, z1i, z2r, z2i) = (l.z1.re, l.z1.im, l.z2.re, l.z2.im);
    let s = (2.0 * alpha).sqrt();
    let d1 = x1 - ((alpha + 1.0) * z1r + (alpha - 1.0) * z2r) / (a * s);
    let d2 = x2 - ((alpha - 1.0) * z1r + (alpha + 1.0) * z2r) / (b * s);
    let diag = (1.0 + alpha * alpha) / (4.0 * alpha);
    let cross = (1.0 - alpha * alpha) / (2.0 * alpha);
    let re = -diag * a * a * d1 * d1 - diag * b * b * d2 * d2 - cross * a * b * d1 * d2;
    let im = -(z1r * z1i + z2r * z2i)
        + a * x1 / s * ((1.0 + alpha) * z1i + (1.0 - alpha) * z2i)
        + b * x2 / s * ((1.0 + alpha) * z2i + (1.0 - alpha) * z1i);
    Complex64::new(re, im).exp() * (a * b / PI).sqrt()
}

/// Product-route wave function.
pub fn psi1(x1: f64, x2: f64, geom: &OscillatorGeometry, labels: &DisplacementLabels, alpha: f64) -> Result<Complex64> {
    Ok(SqueezedCoherentState::new(Mode::Product, alpha, *geom, *labels)?.eval(x1, x2))
}

/// Two-mode-route wave function.
pub fn psi2(x1: f64, x2: f64, geom: &OscillatorGeometry, labels: &DisplacementLabels, alpha: f64) -> Result<Complex64> {
    Ok(SqueezedCoherentState::new(Mode::TwoMode, alpha, *geom, *labels)?.eval(x1, x2))
}

/// ⟨x₁,x₂|m,n⟩ = √(ab) ψ_m(a x₁) ψ_n(b x₂) with orthonormal Hermite
/// functions ψ.
pub fn fock_position_basis(m: usize, n: usize, x1: f64, x2: f64, geom: &OscillatorGeometry) -> f64 {
    let f1 = hermite_functions(m, geom.a * x1);
    let f2 = hermite_functions(n, geom.b * x2);
    (geom.a * geom.b).sqrt() * f1[m] * f2[n]
}

/// Partial Fock series of a squeezed coherent state with coefficients
/// computed once.
#[derive(Debug, Clone)]
pub struct SeriesExpansion {
    coeffs: Vec<Complex64>,
    n_max: usize,
    geom: OscillatorGeometry,
}

impl SeriesExpansion {
    /// Σ_{m,n≤N} φ_{k,(m,n)}^(α)(z₁,z₂) e^{−(|z₁|²+|z₂|²)/2} ⟨x₁,x₂|m,n⟩.
    pub fn new(k: Mode, n: usize, geom: &OscillatorGeometry, labels: &DisplacementLabels, alpha: f64) -> Result<Self> {
        geom.validate()?;
        labels.validate()?;
        let norm = (-0.5 * (labels.z1.norm_sqr() + labels.z2.norm_sqr())).exp();
        let coeffs = coefficient_table(k, n, alpha, labels.z1, labels.z2)?
            .into_iter()
            .map(|c| c * norm)
            .collect();
        Ok(Self {
            coeffs,
            n_max: n,
            geom: *geom,
        })
    }

    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        let f1 = hermite_functions(self.n_max, self.geom.a * x1);
        let f2 = hermite_functions(self.n_max, self.geom.b * x2);
        let w = self.n_max + 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, fm) in f1.iter().enumerate() {
            let row: Complex64 = self.coeffs[m * w..(m + 1) * w].iter().zip(&f2).map(|(c, fnv)| c * fnv).sum();
            acc += row * fm;
        }
        acc * (self.geom.a * self.geom.b).sqrt()
    }
}

pub fn series_expansion_psi(
    k: Mode,
    n: usize,
    x1: f64,
    x2: f64,
    geom: &OscillatorGeometry,
    labels: &DisplacementLabels,
    alpha: f64,
) -> Result<Complex64> {
    Ok(SeriesExpansion::new(k, n, geom, labels, alpha)?.eval(x1, x2))
}

fn shift_params_unchecked(k: Mode, alpha: f64, g: &OscillatorGeometry, l: &DisplacementLabels) -> ShiftParams {
    let (a, b, hbar) = (g.a, g.b, g.hbar);
    let (z1r, z1i, z2r, z2i) = (l.z1.re, l.z1.im, l.z2.re, l.z2.im);
    match k {
        Mode::Product => {
            let s = (2.0 * alpha).sqrt();
            let t = (2.0 / alpha).sqrt();
            ShiftParams {
                y1: s / a * z1r,
                y2: s / b * z2r,
                q1: hbar * t * a * z1i,
                q2: hbar * t * b * z2i,
            }
        }
        Mode::TwoMode => {
            let s = (2.0 * alpha).sqrt();
            ShiftParams {
                y1: ((alpha + 1.0) * z1r + (alpha - 1.0) * z2r) / (a * s),
                y2: ((alpha - 1.0) * z1r + (alpha + 1.0) * z2r) / (b * s),
                q1: hbar * a / s * ((1.0 + alpha) * z1i + (1.0 - alpha) * z2i),
                q2: hbar * b / s * ((1.0 + alpha) * z2i + (1.0 - alpha) * z1i),
            }
        }
    }
}

/// Heisenberg–Weyl parameters carrying the centred Gaussian of route k onto
/// the state with labels z₁, z₂.
pub fn shift_params(k: Mode, alpha: f64, geom: &OscillatorGeometry, labels: &DisplacementLabels) -> Result<ShiftParams> {
    check_alpha(alpha)?;
    geom.validate()?;
    labels.validate()?;
    Ok(shift_params_unchecked(k, alpha, geom, labels))
}

/// exp[(i/ħ)(q·x) − (i/2ħ)(q·y)] f(x − y).
pub fn heisenberg_weyl_shift<F>(params: &ShiftParams, f: F, x1: f64, x2: f64, hbar: f64) -> Complex64
where
    F: Fn(f64, f64) -> Complex64,
{
    let p = params;
    let phase = (p.q1 * x1 + p.q2 * x2 - 0.5 * (p.q1 * p.y1 + p.q2 * p.y2)) / hbar;
    Complex64::from_polar(1.0, phase) * f(x1 - p.y1, x2 - p.y2)
}

/// The centred Gaussian of route k: M₁ = diag(a², b²)/α or
/// M₂ = (1/2α)[[(1+α²)a², (1−α²)ab], [(1−α²)ab, (1+α²)b²]].
pub fn unshifted_gaussian(k: Mode, alpha: f64, geom: &OscillatorGeometry) -> Result<QuadraticGaussian> {
    check_alpha(alpha)?;
    geom.validate()?;
    let (a, b) = (geom.a, geom.b);
    let m = match k {
        Mode::Product => Matrix2::new(a * a / alpha, 0.0, 0.0, b * b / alpha),
        Mode::TwoMode => {
            let d = (1.0 + alpha * alpha) / (2.0 * alpha);
            let o = (1.0 - alpha * alpha) / (2.0 * alpha) * a * b;
            Matrix2::new(d * a * a, o, o, d * b * b)
        }
    };
    QuadraticGaussian::new(m)
}

/// ⟨x₁,x₂|w₁,w₂⟩ including the e^{−|w₁|²−|w₂|²} factor of the measure.
pub fn segal_bargmann_kernel(x1: f64, x2: f64, w1: Complex64, w2: Complex64, geom: &OscillatorGeometry) -> Complex64 {
    let (a, b) = (geom.a, geom.b);
    let e = (w1 * w1 + w2 * w2 + a * a * x1 * x1 + b * b * x2 * x2) * -0.5 + (w1 * (a * x1) + w2 * (b * x2)) * 2f64.sqrt()
        - w1.norm_sqr()
        - w2.norm_sqr();
    e.exp() * (a * b / PI).sqrt()
}

/// A Bargmann-space function Σ c_{mn} w̄₁^m w̄₂^n / √(m! n!).
#[derive(Debug, Clone)]
pub struct BargmannSeries {
    coeffs: Vec<Complex64>,
    n_max: usize,
}

impl BargmannSeries {
    /// Row-major coefficients c_{mn}, m, n ≤ n_max.
    pub fn from_coefficients(n_max: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != (n_max + 1) * (n_max + 1) {
            return Err(Error::invalid("coeffs", coeffs.len() as f64, "need (n_max+1)² coefficients"));
        }
        Ok(Self { coeffs, n_max })
    }

    /// The squeezed coherent state of route k truncated at m, n ≤ n_max,
    /// with coefficients φ_{k,(m,n)} e^{−(|z₁|²+|z₂|²)/2}.
    pub fn squeezed_state(k: Mode, alpha: f64, labels: &DisplacementLabels, n_max: usize) -> Result<Self> {
        labels.validate()?;
        let norm = (-0.5 * (labels.z1.norm_sqr() + labels.z2.norm_sqr())).exp();
        let coeffs = coefficient_table(k, n_max, alpha, labels.z1, labels.z2)?
            .into_iter()
            .map(|c| c * norm)
            .collect();
        Ok(Self { coeffs, n_max })
    }

    pub fn eval(&self, w1: Complex64, w2: Complex64) -> Complex64 {
        let pw = |w: Complex64| -> Vec<Complex64> {
            let wb = w.conj();
            let mut out = Vec::with_capacity(self.n_max + 1);
            let mut p = Complex64::new(1.0, 0.0);
            for m in 0..=self.n_max {
                out.push(p);
                p = p * wb / ((m + 1) as f64).sqrt();
            }
            out
        };
        let (p1, p2) = (pw(w1), pw(w2));
        let w = self.n_max + 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, pm) in p1.iter().enumerate() {
            let row: Complex64 = self.coeffs[m * w..(m + 1) * w].iter().zip(&p2).map(|(c, q)| c * q).sum();
            acc += row * pm;
        }
        acc
    }
}

/// Default per-axis order of the inverse transform quadrature.
pub const DEFAULT_BARGMANN_ORDER: usize = 24;

/// Allowed change between orders n and 2n, relative to
/// max(|ψ|, √(ab/π)).
pub const BARGMANN_CONVERGENCE_TOL: f64 = 1e-4;

/// π^{−2} ∫ dw₁ dw₂ ⟨x₁,x₂|w₁,w₂⟩ ψ_B(w₁,w₂).
///
/// |⟨x|w⟩| contains exp(−3u²/2 − v²/2) per mode in w = u + iv, so each of
/// the four real axes gets its own rescaled Gauss–Hermite rule. The value
/// at order 2·`order` is returned after checking it against `order`.
pub fn inverse_segal_bargmann<F>(psi_b: F, x1: f64, x2: f64, geom: &OscillatorGeometry, order: usize) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    geom.validate()?;
    let eval = |ord: usize| -> Result<Complex64> {
        let base = GaussHermite::new(ord)?;
        let gu = base.for_weight(1.5)?;
        let gv = base.for_weight(0.5)?;
        // per-mode nodes with the kernel factor left after dividing out the weight
        let mode_nodes = |ax: f64| -> Vec<(Complex64, Complex64)> {
            let s = 2f64.sqrt() * ax;
            let mut out = Vec::with_capacity(ord * ord);
            for (u, wu) in gu.points() {
                for (v, wv) in gv.points() {
                    let factor = Complex64::from_polar((s * u).exp(), s * v - u * v) * (wu * wv);
                    out.push((Complex64::new(u, v), factor));
                }
            }
            out
        };
        let n1 = mode_nodes(geom.a * x1);
        let n2 = mode_nodes(geom.b * x2);
        let mut acc = Complex64::new(0.0, 0.0);
        for (w1, f1) in &n1 {
            let mut row = Complex64::new(0.0, 0.0);
            for (w2, f2) in &n2 {
                row += psi_b(*w1, *w2) * f2;
            }
            acc += row * f1;
        }
        let front =
            (geom.a * geom.b / PI).sqrt() * (-0.5 * (geom.a * geom.a * x1 * x1 + geom.b * geom.b * x2 * x2)).exp() / (PI * PI);
        Ok(acc * front)
    };
    let coarse = eval(order)?;
    let fine = eval(2 * order)?;
    let scale = fine.norm().max((geom.a * geom.b / PI).sqrt());
    if (fine - coarse).norm() > BARGMANN_CONVERGENCE_TOL * scale {
        return Err(Error::NonConvergence {
            what: "inverse Segal–Bargmann quadrature",
            coarse_order: order,
            fine_order: 2 * order,
            coarse: coarse.norm(),
            fine: fine.norm(),
            tolerance: BARGMANN_CONVERGENCE_TOL * scale,
        });
    }
    Ok(fine)
}

/// e^{−(|z₁|²+|z₂|²)/2}, the factor that normalises the Fock coefficients.
pub fn coherent_normalisation(labels: &DisplacementLabels) -> f64 {
    (-0.5 * (labels.z1.norm_sqr() + labels.z2.norm_sqr())).exp()
}

/// √(m! n!) as used by the Bargmann monomial basis.
pub fn monomial_norm(m: usize, n: usize) -> f64 {
    (factorial(m as u64) * factorial(n as u64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn trapezoid_norm<F: Fn(f64, f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / (n - 1) as f64;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += f(lo + i as f64 * h, lo + j as f64 * h);
            }
        }
        s * h * h
    }

    #[test]
    fn psi1_zero_labels_is_diagonal_gaussian() {
        let g = OscillatorGeometry::new(1.3, 0.8, 1.0).unwrap();
        let z = DisplacementLabels::zero();
        let alpha: f64 = 0.35;
        for (x1, x2) in [(0.0, 0.0), (0.4, -0.9), (-1.1, 0.2)] {
            let v = psi1(x1, x2, &g, &z, alpha).unwrap();
            let e = (g.a * g.b / (PI * alpha)).sqrt() * (-(g.a * g.a * x1 * x1 + g.b * g.b * x2 * x2) / (2.0 * alpha)).exp();
            assert_relative_eq!(v.re, e, max_relative = 1e-14);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn psi2_zero_labels_matches_unshifted_form() {
        let g = OscillatorGeometry::new(1.0, 1.5, 1.0).unwrap();
        let alpha: f64 = 0.3;
        let q = unshifted_gaussian(Mode::TwoMode, alpha, &g).unwrap();
        for (x1, x2) in [(0.0, 0.0), (0.4, -0.9), (-1.1, 0.2)] {
            let v = psi2(x1, x2, &g, &DisplacementLabels::zero(), alpha).unwrap();
            let lit = (g.a * g.b / PI).sqrt()
                * (-0.5
                    * ((1.0 + alpha * alpha) / (2.0 * alpha) * (g.a * g.a * x1 * x1 + g.b * g.b * x2 * x2)
                        + (1.0 - alpha * alpha) / alpha * g.a * g.b * x1 * x2))
                    .exp();
            assert_relative_eq!(v.re, lit, max_relative = 1e-13);
            assert_relative_eq!(q.eval(x1, x2), lit, max_relative = 1e-13);
        }
    }

    #[test]
    fn normalisation_by_trapezoid() {
        let labels = [
            DisplacementLabels::zero(),
            DisplacementLabels::new(c(0.3, -0.2), c(-0.1, 0.4)),
            DisplacementLabels::new(c(-0.5, 0.5), c(0.5, 0.0)),
        ];
        for k in Mode::ALL {
            for alpha in [0.2, 0.5, 0.8] {
                for (a, b) in [(1.0, 1.0), (1.0, 2.0)] {
                    for l in labels {
                        let s = SqueezedCoherentState::new(k, alpha, OscillatorGeometry::new(a, b, 1.0).unwrap(), l).unwrap();
                        let n = trapezoid_norm(|x, y| s.eval(x, y).norm_sqr(), -9.0, 9.0, 301);
                        assert!((n - 1.0).abs() < 1e-9, "k={k} α={alpha} a={a} b={b} l={l:?}: {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn psi2_swap_symmetry_for_equal_lengths() {
        let g = OscillatorGeometry::new(1.2, 1.2, 1.0).unwrap();
        let l = DisplacementLabels::new(c(0.3, -0.4), c(-0.2, 0.1));
        for (x1, x2) in [(0.1, 0.7), (-0.8, 0.3), (1.1, -1.0)] {
            let lhs = psi2(x1, x2, &g, &l, 0.45).unwrap();
            let rhs = psi2(x2, x1, &g, &l.swapped(), 0.45).unwrap();
            assert!((lhs - rhs).norm() < 1e-15);
        }
    }

    #[test]
    fn fock_basis_examples() {
        let g = OscillatorGeometry::new(1.4, 0.6, 1.0).unwrap();
        assert_relative_eq!(
            fock_position_basis(0, 0, 0.0, 0.0, &g),
            (g.a * g.b / PI).sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(fock_position_basis(1, 0, 0.0, 0.7, &g), 0.0);
        let v = fock_position_basis(1, 0, 0.3, 0.7, &g);
        assert_relative_eq!(fock_position_basis(1, 0, -0.3, 0.7, &g), -v);
    }

    #[test]
    fn fock_basis_orthonormal() {
        let g = OscillatorGeometry::new(1.4, 0.6, 1.0).unwrap();
        let base = GaussHermite::new(16).unwrap();
        let r1 = base.for_weight(g.a * g.a).unwrap();
        let r2 = base.for_weight(g.b * g.b).unwrap();
        let idx: Vec<(usize, usize)> = (0..=5).flat_map(|m| (0..=5).map(move |n| (m, n))).collect();
        for &(m, n) in &idx {
            for &(mp, np) in &idx {
                let mut s = 0.0;
                for (x1, w1) in r1.points() {
                    for (x2, w2) in r2.points() {
                        let e = (g.a * g.a * x1 * x1 + g.b * g.b * x2 * x2).exp();
                        s += w1 * w2 * e * fock_position_basis(m, n, x1, x2, &g) * fock_position_basis(mp, np, x1, x2, &g);
                    }
                }
                let expect = if (m, n) == (mp, np) { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-9, "({m},{n}) vs ({mp},{np}): {s}");
            }
        }
    }

    #[test]
    fn series_converges_to_closed_forms() {
        let g = OscillatorGeometry::unit();
        let l = DisplacementLabels::new(c(0.3, 0.2), c(-0.2, 0.1));
        for k in Mode::ALL {
            let st = SqueezedCoherentState::new(k, 0.5, g, l).unwrap();
            let ser = SeriesExpansion::new(k, 50, &g, &l, 0.5).unwrap();
            let mut gap: f64 = 0.0;
            for i in 0..21 {
                for j in 0..21 {
                    let (x1, x2) = (-3.0 + 0.3 * i as f64, -3.0 + 0.3 * j as f64);
                    gap = gap.max((ser.eval(x1, x2) - st.eval(x1, x2)).norm());
                }
            }
            assert!(gap < 1e-7, "k={k} sup gap {gap}");
        }
    }

    #[test]
    fn series_leading_term() {
        let g = OscillatorGeometry::new(1.1, 0.9, 1.0).unwrap();
        let l = DisplacementLabels::new(c(0.2, 0.1), c(0.3, -0.3));
        for k in Mode::ALL {
            let v = series_expansion_psi(k, 0, 0.4, -0.2, &g, &l, 0.6).unwrap();
            let phi = crate::basis::coefficient(k, 0, 0, 0.6, l.z1, l.z2).unwrap();
            let expect = phi * coherent_normalisation(&l) * fock_position_basis(0, 0, 0.4, -0.2, &g);
            assert!((v - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn shift_params_examples() {
        let g = OscillatorGeometry::new(1.3, 0.7, 1.0).unwrap();
        for k in Mode::ALL {
            assert_eq!(
                shift_params(k, 0.4, &g, &DisplacementLabels::zero()).unwrap(),
                ShiftParams::zero()
            );
        }
        let l = DisplacementLabels::new(c(0.4, 0.1), c(-0.3, 0.2));
        let p = shift_params(Mode::TwoMode, 1.0 - 1e-12, &g, &l).unwrap();
        assert!((p.y1 - 2f64.sqrt() * 0.4 / g.a).abs() < 1e-10);
    }

    #[test]
    fn heisenberg_weyl_reconstructs_both_routes() {
        let labels = [
            DisplacementLabels::new(c(0.3, -0.2), c(-0.1, 0.4)),
            DisplacementLabels::new(c(-0.7, 0.5), c(0.6, -0.8)),
        ];
        for hbar in [1.0, 0.37] {
            let g = OscillatorGeometry::new(1.2, 0.8, hbar).unwrap();
            for k in Mode::ALL {
                for l in labels {
                    let st = SqueezedCoherentState::new(k, 0.45, g, l).unwrap();
                    let centred = st.unshifted();
                    let p = st.shift_params();
                    for (x1, x2) in [(0.0, 0.0), (0.5, -0.3), (-1.2, 0.9), (1.7, 1.1)] {
                        let v = heisenberg_weyl_shift(&p, |u, v| c(centred.eval(u, v), 0.0), x1, x2, hbar);
                        let d = st.eval(x1, x2);
                        assert!((v - d).norm() < 1e-12, "k={k} ħ={hbar} at ({x1},{x2}): {v} vs {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn heisenberg_weyl_identity_and_weyl_relation() {
        let f = |u: f64, v: f64| c((-u * u - 0.5 * v * v).exp(), 0.3 * u);
        assert_eq!(heisenberg_weyl_shift(&ShiftParams::zero(), f, 0.3, -0.4, 1.0), f(0.3, -0.4));
        let p1 = ShiftParams {
            y1: 0.2,
            y2: -0.1,
            q1: 0.5,
            q2: 0.3,
        };
        let p2 = ShiftParams {
            y1: -0.4,
            y2: 0.3,
            q1: 0.1,
            q2: -0.6,
        };
        let hbar = 0.8;
        for (x1, x2) in [(0.0, 0.0), (0.7, -0.2), (-0.5, 0.9)] {
            let inner = |u: f64, v: f64| heisenberg_weyl_shift(&p2, f, u, v, hbar);
            let double = heisenberg_weyl_shift(&p1, inner, x1, x2, hbar);
            let single = heisenberg_weyl_shift(&(p1 + p2), f, x1, x2, hbar);
            assert!((double.norm() - single.norm()).abs() < 1e-14);
            // the leftover phase is the symplectic area term
            let sigma = (p1.q1 * p2.y1 + p1.q2 * p2.y2 - p2.q1 * p1.y1 - p2.q2 * p1.y2) / (2.0 * hbar);
            let expect = single * Complex64::from_polar(1.0, sigma);
            assert!((double - expect).norm() < 1e-14, "{double} vs {expect}");
        }
    }

    #[test]
    fn unshifted_gaussian_examples() {
        let g = OscillatorGeometry::new(1.0, 1.0, 1.0).unwrap();
        let q = unshifted_gaussian(Mode::Product, 0.5, &g).unwrap();
        assert_eq!(*q.matrix(), Matrix2::new(2.0, 0.0, 0.0, 2.0));
        let g = OscillatorGeometry::new(1.3, 0.6, 1.0).unwrap();
        let q = unshifted_gaussian(Mode::TwoMode, 1.0 - 1e-12, &g).unwrap();
        assert!((q.matrix() - Matrix2::new(1.69, 0.0, 0.0, 0.36)).abs().max() < 1e-10);
        for alpha in [0.05, 0.3, 0.77] {
            let q = unshifted_gaussian(Mode::TwoMode, alpha, &g).unwrap();
            assert_relative_eq!(q.matrix().determinant(), (1.3f64 * 0.6).powi(2), max_relative = 1e-12);
        }
        assert!(unshifted_gaussian(Mode::TwoMode, 1.0, &g).is_err());
    }

    #[test]
    fn factorisation_of_log_modulus() {
        let g = OscillatorGeometry::new(1.1, 1.6, 1.0).unwrap();
        let l = DisplacementLabels::new(c(0.2, -0.3), c(0.4, 0.1));
        let alpha = 0.4;
        let h = 1e-3;
        let cross = |k: Mode, x1: f64, x2: f64| {
            let s = SqueezedCoherentState::new(k, alpha, g, l).unwrap();
            let lm = |u: f64, v: f64| s.eval(u, v).norm().ln();
            (lm(x1 + h, x2 + h) - lm(x1 + h, x2 - h) - lm(x1 - h, x2 + h) + lm(x1 - h, x2 - h)) / (4.0 * h * h)
        };
        let coupling = (1.0 - alpha * alpha) * g.a * g.b / (2.0 * alpha);
        for (x1, x2) in [(0.1, 0.2), (-0.5, 0.4)] {
            assert!(cross(Mode::Product, x1, x2).abs() < 1e-10 * coupling.max(1.0) + 1e-8);
            assert!((cross(Mode::TwoMode, x1, x2) + coupling).abs() < 1e-6 * coupling);
        }
    }

    #[test]
    fn kernel_examples() {
        let g = OscillatorGeometry::new(1.2, 0.7, 1.0).unwrap();
        let zero = c(0.0, 0.0);
        let (x1, x2) = (0.3, -0.8);
        let v = segal_bargmann_kernel(x1, x2, zero, zero, &g);
        let e = (g.a * g.b / PI).sqrt() * (-0.5 * (g.a * g.a * x1 * x1 + g.b * g.b * x2 * x2)).exp();
        assert_relative_eq!(v.re, e, max_relative = 1e-15);
        let w1 = c(0.3, 0.2);
        let near = segal_bargmann_kernel(0.0, 0.0, w1, zero, &g).norm();
        let far = segal_bargmann_kernel(6.0, 0.0, w1, zero, &g).norm();
        assert!(far < 1e-6 * near);
    }

    #[test]
    fn kernel_is_holomorphic_apart_from_measure_factor() {
        let g = OscillatorGeometry::new(1.2, 0.7, 1.0).unwrap();
        let hol =
            |w1: Complex64, w2: Complex64| segal_bargmann_kernel(0.4, -0.3, w1, w2, &g) * (w1.norm_sqr() + w2.norm_sqr()).exp();
        let h = 1e-4;
        for (w1, w2) in [(c(0.2, 0.1), c(-0.3, 0.5)), (c(-0.7, 0.4), c(0.1, -0.2))] {
            // ∂/∂w̄₁ = ½(∂_u + i∂_v)
            let du = (hol(w1 + h, w2) - hol(w1 - h, w2)) / (2.0 * h);
            let dv = (hol(w1 + c(0.0, h), w2) - hol(w1 - c(0.0, h), w2)) / (2.0 * h);
            let cr = (du + dv * c(0.0, 1.0)) * 0.5;
            assert!(cr.norm() < 1e-8 * du.norm().max(1.0), "residual {}", cr.norm());
        }
    }

    #[test]
    fn inverse_transform_of_vacuum() {
        let g = OscillatorGeometry::new(1.0, 1.3, 1.0).unwrap();
        for (x1, x2) in [(0.0, 0.0), (0.5, -0.4)] {
            let v = inverse_segal_bargmann(|_, _| c(1.0, 0.0), x1, x2, &g, 12).unwrap();
            let e = fock_position_basis(0, 0, x1, x2, &g);
            assert!((v - e).norm() < 1e-8, "{v} vs {e}");
            let s = inverse_segal_bargmann(|_, _| c(0.0, 2.5), x1, x2, &g, 12).unwrap();
            assert!((s - v * c(0.0, 2.5)).norm() < 1e-13);
        }
    }

    #[test]
    fn inverse_transform_reproduces_two_mode_state() {
        let g = OscillatorGeometry::unit();
        let l = DisplacementLabels::zero();
        let series = BargmannSeries::squeezed_state(Mode::TwoMode, 0.5, &l, 12).unwrap();
        for (x1, x2) in [(0.0, 0.0), (0.5, 0.0), (0.0, -0.6), (0.4, 0.3), (-0.7, 0.5)] {
            let v = inverse_segal_bargmann(|w1, w2| series.eval(w1, w2), x1, x2, &g, DEFAULT_BARGMANN_ORDER).unwrap();
            let e = psi2(x1, x2, &g, &l, 0.5).unwrap();
            assert!((v - e).norm() < 1e-5, "({x1},{x2}): {v} vs {e}");
        }
    }

    proptest! {
        #[test]
        fn heisenberg_weyl_preserves_modulus(y1 in -1.0f64..1.0, y2 in -1.0f64..1.0,
                                             q1 in -2.0f64..2.0, q2 in -2.0f64..2.0,
                                             x1 in -2.0f64..2.0, x2 in -2.0f64..2.0) {
            let f = |u: f64, v: f64| c((-u * u - v * v).exp(), 0.0);
            let p = ShiftParams { y1, y2, q1, q2 };
            let v = heisenberg_weyl_shift(&p, f, x1, x2, 1.0);
            prop_assert!((v.norm() - f(x1 - y1, x2 - y2).re).abs() < 1e-15);
        }

        #[test]
        fn unshifted_two_mode_determinant(alpha in 0.01f64..0.99, a in 0.2f64..3.0, b in 0.2f64..3.0) {
            let g = OscillatorGeometry::new(a, b, 1.0).unwrap();
            let q = unshifted_gaussian(Mode::TwoMode, alpha, &g).unwrap();
            prop_assert!((q.matrix().determinant() / (a * a * b * b) - 1.0).abs() < 1e-10);
        }
    }
}
