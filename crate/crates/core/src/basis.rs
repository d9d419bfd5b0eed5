//! α-parameterised holomorphic Hermite functions.
//!
//! With r = (1−α)/(1+α) = tanh ξ,
//!
//! h_n^(α)(z) = (2√α/(1+α))^{1/2} r^{n/2} e^{r z²/2} H_n(κz)/√(2^n n!),
//! κ = √(2α/(1−α²)),
//!
//! h_{m,n}^(α)(z₁,z₂) = 2√α/(1+α) r^{(m+n)/2} e^{r z₁z₂} H_{m,n}(λz₁, λz₂)/√(m!n!),
//! λ = 2√α/√(1−α²).
//!
//! The first family gives the product coefficients φ₁, the second the
//! two-mode coefficients φ₂. Both are orthonormal under the Gaussian measure
//! π^{−2} e^{−|w₁|²−|w₂|²}.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::hermite::{scaled_holo_table, scaled_two_variable_table};
use crate::quadrature::GaussHermite;
use crate::{Error, Mode, Result};

/// Squeezing strength, stored as α ∈ (0, 1] together with ξ = −½ ln α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    alpha: f64,
    xi: f64,
}

impl SqueezeParam {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid("alpha", alpha, "squeezing needs 0 < α ≤ 1"));
        }
        Ok(Self {
            alpha,
            xi: -0.5 * alpha.ln(),
        })
    }

    pub fn from_xi(xi: f64) -> Result<Self> {
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::invalid("xi", xi, "squeezing parameter must be finite and ≥ 0"));
        }
        Ok(Self {
            alpha: alpha_from_xi(xi),
            xi,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// ξ through the hyperbolic route artanh((1−α)/(1+α)).
    pub fn xi_artanh(&self) -> f64 {
        self.ratio().atanh()
    }

    /// r = (1−α)/(1+α) = tanh ξ.
    pub fn ratio(&self) -> f64 {
        (1.0 - self.alpha) / (1.0 + self.alpha)
    }
}

pub fn squeeze_from_alpha(alpha: f64) -> Result<SqueezeParam> {
    SqueezeParam::from_alpha(alpha)
}

pub fn alpha_from_xi(xi: f64) -> f64 {
    (-2.0 * xi).exp()
}

fn check_open_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("alpha", alpha, "basis functions need 0 < α < 1"))
    }
}

/// h_k^(α)(z) for k = 0..=n_max.
pub fn h_alpha_table(n_max: usize, alpha: f64, z: Complex64) -> Result<Vec<Complex64>> {
    check_open_alpha(alpha)?;
    let r = (1.0 - alpha) / (1.0 + alpha);
    let kappa = (2.0 * alpha / (1.0 - alpha * alpha)).sqrt();
    let g = scaled_holo_table(n_max, z * kappa);
    let front = (2.0 * alpha.sqrt() / (1.0 + alpha)).sqrt() * (z * z * (0.5 * r)).exp();
    let sr = r.sqrt();
    let mut rp = 1.0;
    Ok(g.into_iter()
        .map(|gk| {
            let v = front * gk * rp;
            rp *= sr;
            v
        })
        .collect())
}

pub fn h_alpha(n: usize, alpha: f64, z: Complex64) -> Result<Complex64> {
    Ok(h_alpha_table(n, alpha, z)?[n])
}

/// h_{i,j}^(α)(z₁,z₂) for i, j ≤ n_max, row-major with row length n_max + 1.
pub fn h_alpha_2v_table(n_max: usize, alpha: f64, z1: Complex64, z2: Complex64) -> Result<Vec<Complex64>> {
    check_open_alpha(alpha)?;
    let r = (1.0 - alpha) / (1.0 + alpha);
    let lambda = 2.0 * alpha.sqrt() / (1.0 - alpha * alpha).sqrt();
    let g = scaled_two_variable_table(n_max, n_max, z1 * lambda, z2 * lambda);
    let front = (z1 * z2 * r).exp() * (2.0 * alpha.sqrt() / (1.0 + alpha));
    let sr = r.sqrt();
    let pw: Vec<f64> = (0..=n_max)
        .scan(1.0, |p, _| {
            let v = *p;
            *p *= sr;
            Some(v)
        })
        .collect();
    let w = n_max + 1;
    Ok(g.into_iter()
        .enumerate()
        .map(|(idx, gij)| front * gij * (pw[idx / w] * pw[idx % w]))
        .collect())
}

pub fn h_alpha_2v(m: usize, n: usize, alpha: f64, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    let nm = m.max(n);
    Ok(h_alpha_2v_table(nm, alpha, z1, z2)?[m * (nm + 1) + n])
}

/// φ_{k,(i,j)}^(α)(z₁,z₂) for i, j ≤ n_max, row-major.
pub fn coefficient_table(k: Mode, n_max: usize, alpha: f64, z1: Complex64, z2: Complex64) -> Result<Vec<Complex64>> {
    match k {
        Mode::Product => {
            let h1 = h_alpha_table(n_max, alpha, z1)?;
            let h2 = h_alpha_table(n_max, alpha, z2)?;
            Ok(h1.iter().flat_map(|a| h2.iter().map(move |b| a * b)).collect())
        }
        Mode::TwoMode => h_alpha_2v_table(n_max, alpha, z1, z2),
    }
}

pub fn coefficient(k: Mode, m: usize, n: usize, alpha: f64, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    let nm = m.max(n);
    Ok(coefficient_table(k, nm, alpha, z1, z2)?[m * (nm + 1) + n])
}

/// Σ_{m,n≤N} |φ_{k,(m,n)}^(α)(z₁,z₂)|².
///
/// The full sum equals e^{|z₁|²+|z₂|²} for both k.
pub fn coefficient_norm_partial(k: Mode, alpha: f64, z1: Complex64, z2: Complex64, n: usize) -> Result<f64> {
    Ok(coefficient_table(k, n, alpha, z1, z2)?.iter().map(|c| c.norm_sqr()).sum())
}

/// π^{−2} exp(−|w₁|² − |w₂|²).
pub fn gaussian_measure_density(w1: Complex64, w2: Complex64) -> f64 {
    (-(w1.norm_sqr() + w2.norm_sqr())).exp() / (PI * PI)
}

/// Default per-axis order of the orthonormality quadrature. The rule is
/// exact once it exceeds 2·index_max + 1.
pub const DEFAULT_ORTHONORMALITY_ORDER: usize = 12;

/// Gram matrix ⟨h_{m,n}, h_{m',n'}⟩ under the Gaussian measure for
/// m, n ≤ index_max, flattened as m·(index_max+1) + n.
///
/// |h_{m,n}|² e^{−|w|²} is a polynomial times
/// exp(−(1−r)u² − (1+r)v² − (1+r)s² − (1−r)t²) in the rotated coordinates
/// u, v = (Re w₁ ± Re w₂)/√2 and s, t = (Im w₁ ± Im w₂)/√2, so a
/// Gauss–Hermite rule per rotated axis integrates it exactly.
pub fn two_mode_gram(alpha: f64, index_max: usize, order: usize) -> Result<DMatrix<Complex64>> {
    check_open_alpha(alpha)?;
    let r = (1.0 - alpha) / (1.0 + alpha);
    let base = GaussHermite::new(order)?;
    let lo = base.for_weight(1.0 - r)?;
    let hi = base.for_weight(1.0 + r)?;
    let dim = (index_max + 1) * (index_max + 1);
    let mut gram = DMatrix::<Complex64>::zeros(dim, dim);
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    for (u, wu) in lo.points() {
        for (v, wv) in hi.points() {
            let (x1, x2) = ((u + v) * s2, (u - v) * s2);
            let wx = wu * wv * (u * u * (1.0 - r) + v * v * (1.0 + r)).exp();
            for (s, ws) in hi.points() {
                for (t, wt) in lo.points() {
                    let (y1, y2) = ((s + t) * s2, (s - t) * s2);
                    let wy = ws * wt * (s * s * (1.0 + r) + t * t * (1.0 - r)).exp();
                    let (w1, w2) = (Complex64::new(x1, y1), Complex64::new(x2, y2));
                    // weight divided back out, then the measure density applied
                    let weight = wx * wy * gaussian_measure_density(w1, w2);
                    let h = h_alpha_2v_table(index_max, alpha, w1, w2)?;
                    for i in 0..dim {
                        let hi_w = h[i] * weight;
                        for j in 0..dim {
                            gram[(i, j)] += hi_w * h[j].conj();
                        }
                    }
                }
            }
        }
    }
    Ok(gram)
}
