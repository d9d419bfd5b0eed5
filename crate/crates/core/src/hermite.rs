//! Hermite polynomial families.
//!
//! Three families appear here:
//!
//! * the physicists' polynomials H_n(x) of a real variable,
//! * the same polynomials at a complex argument, H_n(z), which are the
//!   holomorphic Hermite polynomials orthogonal under the non-rotational
//!   weight exp(−(1−α)x² − (1/α − 1)y²),
//! * the two-variable complex Hermite polynomials
//!   H_{m,n}(z₁, z₂) = Σ_k C(m,k) C(n,k) (−1)^k k! z₁^{m−k} z₂^{n−k},
//!   with generating function exp(s z₁ + t z₂ − s t).
//!
//! Values are computed with three-term recurrences. The scaled tables
//! ([`scaled_holo_table`], [`scaled_two_variable_table`],
//! [`hermite_functions`]) divide out the factorial growth inside the
//! recurrence, which keeps high orders finite; the basis functions and
//! series expansions are built on them. The defining finite sums are kept
//! in [`explicit`] for cross-checking only.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::quadrature::GaussHermite;
use crate::{Error, Result};

/// Above this n the factorial is taken from log-gamma.
const EXACT_FACTORIAL_MAX: u64 = 20;

/// n! as a float; exact integer arithmetic up to 20!.
pub fn factorial(n: u64) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        (1..=n).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

pub fn ln_factorial(n: u64) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        ((1..=n).product::<u64>() as f64).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Binomial coefficient C(n, k) as a float.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 60 {
        // exact in u128 for this range
        let mut c: u128 = 1;
        for i in 0..k as u128 {
            c = c * (n as u128 - i) / (i + 1);
        }
        c as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
    }
}

/// H_n(x) by H_{k+1} = 2x H_k − 2k H_{k−1}.
pub fn hermite_real(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Holomorphic H_n(z), same recurrence at complex argument.
pub fn hermite_holo(n: usize, z: Complex64) -> Complex64 {
    let (mut prev, mut cur) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    for k in 0..n {
        let next = z * cur * 2.0 - prev * (2.0 * k as f64);
        prev = cur;
        cur = next;
    }
    cur
}

/// H_{m,n}(z₁, z₂) by the recurrence H_{i+1,j} = z₁ H_{i,j} − j H_{i,j−1}
/// started from H_{0,j} = z₂^j.
pub fn hermite_complex_2v(m: usize, n: usize, z1: Complex64, z2: Complex64) -> Complex64 {
    // iterate along the shorter index so the work is O(min·max)
    if m > n {
        return hermite_complex_2v(n, m, z2, z1);
    }
    let mut col: Vec<Complex64> = Vec::with_capacity(m + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..=m {
        col.push(p);
        p *= z1;
    }
    // col[i] = H_{i,0}; now step in the second index
    for _ in 0..n {
        // H_{i,j+1} = z₂ H_{i,j} − i H_{i−1,j}; walk i downwards in place
        for i in (0..=m).rev() {
            let lower = if i > 0 {
                col[i - 1] * i as f64
            } else {
                Complex64::new(0.0, 0.0)
            };
            col[i] = z2 * col[i] - lower;
        }
    }
    col[m]
}

/// Orthonormal Hermite functions ψ_k(x) = (2^k k! √π)^{−1/2} H_k(x) e^{−x²/2}
/// for k = 0..=n_max.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(cur);
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// g_k(z) = H_k(z) / √(2^k k!) for k = 0..=n_max.
pub fn scaled_holo_table(n_max: usize, z: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    out.push(cur);
    for k in 0..n_max {
        let kf = k as f64;
        let next = z * cur * (2.0 / (kf + 1.0)).sqrt() - prev * (kf / (kf + 1.0)).sqrt();
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// G_{i,j} = H_{i,j}(z₁, z₂) / √(i! j!) for i ≤ m_max, j ≤ n_max, row-major
/// with row length `n_max + 1`.
pub fn scaled_two_variable_table(m_max: usize, n_max: usize, z1: Complex64, z2: Complex64) -> Vec<Complex64> {
    let w = n_max + 1;
    let mut t = vec![Complex64::new(0.0, 0.0); (m_max + 1) * w];
    // G_{0,j} = z₂^j / √j!
    t[0] = Complex64::new(1.0, 0.0);
    for j in 1..=n_max {
        t[j] = t[j - 1] * z2 / (j as f64).sqrt();
    }
    // G_{i+1,j} = (z₁ G_{i,j} − √j G_{i,j−1}) / √(i+1)
    for i in 0..m_max {
        let norm = 1.0 / ((i + 1) as f64).sqrt();
        for j in 0..=n_max {
            let mut v = z1 * t[i * w + j];
            if j > 0 {
                v -= t[i * w + j - 1] * (j as f64).sqrt();
            }
            t[(i + 1) * w + j] = v * norm;
        }
    }
    t
}

/// A truncated series next to the closed form it should converge to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPair {
    pub series: Complex64,
    pub closed: Complex64,
}

impl SeriesPair {
    pub fn gap(&self) -> f64 {
        (self.series - self.closed).norm()
    }
}

/// Default truncation order for the Mehler sums.
pub const DEFAULT_MEHLER_TRUNCATION: usize = 60;

/// Σ_{l≤N} t^l/(2^l l!) H_l(z₁)H_l(z₂) next to
/// (1−t²)^{−1/2} exp([2t z₁z₂ − t²(z₁²+z₂²)]/(1−t²)).
pub fn mehler_product(t: f64, z1: Complex64, z2: Complex64, truncation: usize) -> Result<SeriesPair> {
    if !(t.abs() < 1.0) {
        return Err(Error::invalid("t", t, "Mehler product formula needs |t| < 1"));
    }
    let g1 = scaled_holo_table(truncation, z1);
    let g2 = scaled_holo_table(truncation, z2);
    let mut series = Complex64::new(0.0, 0.0);
    let mut tp = 1.0;
    for l in 0..=truncation {
        series += g1[l] * g2[l] * tp;
        tp *= t;
    }
    let d = 1.0 - t * t;
    let closed = ((z1 * z2 * (2.0 * t) - (z1 * z1 + z2 * z2) * (t * t)) / d).exp() / d.sqrt();
    Ok(SeriesPair { series, closed })
}

/// Σ_{m,n≤N} s^m t^n /(√2^{m+n} m! n!) H_{m,n}(z₁,z₂) H_m(u) H_n(v) next to
/// its closed form.
#[allow(clippy::too_many_arguments)]
pub fn mehler_two_variable(
    s: f64,
    t: f64,
    z1: Complex64,
    z2: Complex64,
    u: f64,
    v: f64,
    truncation: usize,
) -> Result<SeriesPair> {
    if !((s * t).abs() < 1.0) {
        return Err(Error::invalid("st", s * t, "two-variable Mehler formula needs |st| < 1"));
    }
    let n = truncation;
    let g = scaled_two_variable_table(n, n, z1, z2);
    let hu = scaled_holo_table(n, Complex64::new(u, 0.0));
    let hv = scaled_holo_table(n, Complex64::new(v, 0.0));
    let mut series = Complex64::new(0.0, 0.0);
    let mut sp = 1.0;
    for m in 0..=n {
        let mut tp = 1.0;
        let mut row = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            row += g[m * (n + 1) + k] * hv[k] * tp;
            tp *= t;
        }
        series += row * hu[m] * sp;
        sp *= s;
    }
    let d = 1.0 - s * s * t * t;
    let sqrt2 = 2f64.sqrt();
    let first = ((z1 * (s * u) + z2 * (t * v) + (z1 * (s * v) + z2 * (t * u)) * (s * t)) * (2.0 * sqrt2)
        - z1 * z1 * (s * s)
        - z2 * z2 * (t * t))
        / (2.0 * d);
    let second = ((z1 * z2 + u * u + v * v) * (-2.0 * s * s * t * t) - 4.0 * s * t * u * v) / (2.0 * d);
    let closed = (first + second).exp() / d.sqrt();
    Ok(SeriesPair { series, closed })
}

/// Right-hand side of the orthogonality relation of the holomorphic
/// polynomials: π√α/(1−α) · (2(1+α)/(1−α))^n n! δ_{mn}.
pub fn orthogonality_norm(m: usize, n: usize, alpha: f64) -> f64 {
    if m != n {
        return 0.0;
    }
    let base = PI * alpha.sqrt() / (1.0 - alpha);
    let ratio = 2.0 * (1.0 + alpha) / (1.0 - alpha);
    (ln_factorial(n as u64) + n as f64 * ratio.ln()).exp() * base
}

/// Default per-axis order for the orthogonality quadrature.
pub const DEFAULT_ORTHOGONALITY_ORDER: usize = 80;

/// Relative tolerance between the order-n and order-2n quadratures.
pub const ORTHOGONALITY_CONVERGENCE_TOL: f64 = 1e-10;

/// ∫_ℂ H_m(z) conj(H_n(z)) exp(−(1−α)x² − (1/α − 1)y²) dx dy.
///
/// Uses per-axis Gauss–Hermite rules rescaled to the two weights and
/// compares orders `order` and `2·order`. Differences are measured against
/// the geometric mean of the two diagonal norms.
pub fn orthogonality_integral(m: usize, n: usize, alpha: f64, order: usize) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", alpha, "orthogonality weight needs 0 < α < 1"));
    }
    let eval = |ord: usize| -> Result<Complex64> {
        let base = GaussHermite::new(ord)?;
        let gx = base.for_weight(1.0 - alpha)?;
        let gy = base.for_weight(1.0 / alpha - 1.0)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, wx) in gx.points() {
            let mut row = Complex64::new(0.0, 0.0);
            for (y, wy) in gy.points() {
                let z = Complex64::new(x, y);
                row += hermite_holo(m, z) * hermite_holo(n, z).conj() * wy;
            }
            acc += row * wx;
        }
        Ok(acc)
    };
    let coarse = eval(order)?;
    let fine = eval(2 * order)?;
    let scale = (orthogonality_norm(m, m, alpha) * orthogonality_norm(n, n, alpha)).sqrt();
    let diff = (fine - coarse).norm();
    if diff > ORTHOGONALITY_CONVERGENCE_TOL * scale {
        return Err(Error::NonConvergence {
            what: "orthogonality quadrature",
            coarse_order: order,
            fine_order: 2 * order,
            coarse: coarse.norm(),
            fine: fine.norm(),
            tolerance: ORTHOGONALITY_CONVERGENCE_TOL * scale,
        });
    }
    Ok(fine)
}

/// Direct transcriptions of the defining sums and the generating function.
///
/// These are slower and lose accuracy to cancellation at high order; they
/// exist so the recurrences can be checked against an independent route.
pub mod explicit {
    use super::*;

    /// n! Σ_{m=0}^{⌊n/2⌋} (−1)^m (2z)^{n−2m} / (m! (n−2m)!).
    pub fn hermite_holo_sum(n: usize, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..=n / 2 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let c = sign * factorial(n as u64) / (factorial(m as u64) * factorial((n - 2 * m) as u64));
            acc += (z * 2.0).powu((n - 2 * m) as u32) * c;
        }
        acc
    }

    /// Σ_k C(m,k) C(n,k) (−1)^k k! z₁^{m−k} z₂^{n−k}.
    pub fn hermite_complex_2v_sum(m: usize, n: usize, z1: Complex64, z2: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=m.min(n) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let c = sign * binomial(m as u64, k as u64) * binomial(n as u64, k as u64) * factorial(k as u64);
            acc += z1.powu((m - k) as u32) * z2.powu((n - k) as u32) * c;
        }
        acc
    }

    /// exp(s z₁ + t z₂ − s t) at complex (s, t).
    pub fn two_variable_generating_function(s: Complex64, t: Complex64, z1: Complex64, z2: Complex64) -> Complex64 {
        (s * z1 + t * z2 - s * t).exp()
    }

    /// Taylor coefficient [s^m t^n] of the generating function, extracted
    /// with the trapezoidal Cauchy integral on circles of radius `rho`.
    pub fn generating_coefficient(m: usize, n: usize, z1: Complex64, z2: Complex64, rho: f64, points: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let dth = 2.0 * PI / points as f64;
        for a in 0..points {
            let sa = Complex64::from_polar(rho, a as f64 * dth);
            for b in 0..points {
                let tb = Complex64::from_polar(rho, b as f64 * dth);
                let f = two_variable_generating_function(sa, tb, z1, z2);
                acc += f / (sa.powu(m as u32) * tb.powu(n as u32));
            }
        }
        acc / (points * points) as f64
    }
}
