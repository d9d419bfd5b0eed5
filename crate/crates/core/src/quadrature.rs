//! Gauss–Hermite rules and their Gaussian-adapted variants.
//!
//! Every integral in the crate is either a Gaussian times something smooth
//! or a Gaussian times a polynomial, so a single family of rules is enough:
//! the classical rule for the weight e^{−x²}, rescaled per axis or rotated
//! into the eigenbasis of a 2×2 quadratic form.

use std::f64::consts::PI;
use std::iter::Sum;
use std::ops::Mul;

use nalgebra::{Matrix2, SymmetricEigen, Vector2};

use crate::{Error, Result};

const NEWTON_MAX_ITER: usize = 100;

/// An n-point Gauss–Hermite rule for ∫ g(x) e^{−c x²} dx.
///
/// `GaussHermite::new(n)` is the classical rule (c = 1); it is exact for
/// polynomials of degree ≤ 2n − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Exponent coefficient c of the weight e^{−c x²}.
    scale: f64,
}

impl GaussHermite {
    /// Builds the classical rule by Newton iteration on orthonormal Hermite
    /// functions, starting from the usual asymptotic node estimates.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("order", 0.0, "quadrature order must be positive"));
        }
        let n = order;
        let nf = n as f64;
        let pim4 = PI.powf(-0.25);
        let half = n.div_ceil(2);
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let mut z = 0.0f64;
        for i in 0..half {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..NEWTON_MAX_ITER {
                let (p1, p2) = orthonormal_hermite_pair(n, z, pim4);
                pp = (2.0 * nf).sqrt() * p2;
                let step = p1 / pp;
                z -= step;
                if step.abs() <= 4.0 * f64::EPSILON * z.abs().max(1.0) {
                    break;
                }
            }
            // one more evaluation at the converged node for the weight
            let (_, p2) = orthonormal_hermite_pair(n, z, pim4);
            if p2 != 0.0 {
                pp = (2.0 * nf).sqrt() * p2;
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[n / 2] = 0.0;
        }
        // ascending order
        x.reverse();
        w.reverse();
        Ok(Self {
            nodes: x,
            weights: w,
            scale: 1.0,
        })
    }

    /// The same rule transformed to integrate against e^{−c x²}.
    pub fn for_weight(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("c", c, "Gaussian weight exponent must be positive"));
        }
        let s = (self.scale / c).sqrt();
        Ok(Self {
            nodes: self.nodes.iter().map(|x| x * s).collect(),
            weights: self.weights.iter().map(|w| w * s).collect(),
            scale: c,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Exponent coefficient c of the weight e^{−c x²} this rule integrates against.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Iterator over (node, weight) pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// ∫ g(x) e^{−c x²} dx.
    pub fn integrate<T, F>(&self, mut g: F) -> T
    where
        F: FnMut(f64) -> T,
        T: Mul<f64, Output = T> + Sum<T>,
    {
        self.points().map(|(x, w)| g(x) * w).sum()
    }
}

/// Returns (ψ_n(z), ψ_{n−1}(z)) for the orthonormal Hermite functions
/// without the Gaussian factor.
fn orthonormal_hermite_pair(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// A tensor-product Gauss–Hermite rule on ℝ² adapted to the Gaussian
/// weight exp(−(r − c)ᵀ A (r − c)).
///
/// Nodes live on the principal axes of `A`, so a product of the weight and
/// a polynomial of total degree ≤ 2n − 1 is integrated exactly.
#[derive(Debug, Clone)]
pub struct GaussianRule2d {
    nodes: Vec<Vector2<f64>>,
    /// Weights for ∫ g(r) exp(−(r−c)ᵀA(r−c)) dr.
    weights: Vec<f64>,
    /// Weights for the plain integral ∫ f(r) dr (weight divided out).
    plain_weights: Vec<f64>,
}

impl GaussianRule2d {
    pub fn new(center: Vector2<f64>, metric: &Matrix2<f64>, order: usize) -> Result<Self> {
        let sym = (metric + metric.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::NotPositiveDefinite("quadrature metric"));
        }
        let base = GaussHermite::new(order)?;
        let axes: Vec<GaussHermite> = eig.eigenvalues.iter().map(|&l| base.for_weight(l)).collect::<Result<_>>()?;
        let mut nodes = Vec::with_capacity(order * order);
        let mut weights = Vec::with_capacity(order * order);
        let mut plain = Vec::with_capacity(order * order);
        let v0 = eig.eigenvectors.column(0).into_owned();
        let v1 = eig.eigenvectors.column(1).into_owned();
        for (i, (s, ws)) in axes[0].points().enumerate() {
            for (j, (t, wt)) in axes[1].points().enumerate() {
                nodes.push(center + v0 * s + v1 * t);
                weights.push(ws * wt);
                // divide out the weight using the standard-rule node values
                let u0 = base.nodes[i];
                let u1 = base.nodes[j];
                let lw = base.weights[i].ln() + base.weights[j].ln() + u0 * u0 + u1 * u1;
                let jac = 1.0 / (eig.eigenvalues[0] * eig.eigenvalues[1]).sqrt();
                plain.push(lw.exp() * jac);
            }
        }
        Ok(Self {
            nodes,
            weights,
            plain_weights: plain,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vector2<f64>] {
        &self.nodes
    }

    /// ∫ g(r) exp(−(r−c)ᵀA(r−c)) dr.
    pub fn integrate_weighted<T, F>(&self, mut g: F) -> T
    where
        F: FnMut(f64, f64) -> T,
        T: Mul<f64, Output = T> + Sum<T>,
    {
        self.nodes.iter().zip(&self.weights).map(|(r, &w)| g(r.x, r.y) * w).sum()
    }

    /// ∫ f(r) dr, accurate when f is close to a multiple of the weight.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        F: FnMut(f64, f64) -> T,
        T: Mul<f64, Output = T> + Sum<T>,
    {
        self.nodes
            .iter()
            .zip(&self.plain_weights)
            .map(|(r, &w)| f(r.x, r.y) * w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn double_factorial_odd(k: u32) -> f64 {
        (1..=k).filter(|j| j % 2 == 1).map(|j| j as f64).product()
    }

    #[test]
    fn rejects_zero_order() {
        assert!(GaussHermite::new(0).is_err());
    }

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for n in [1, 2, 5, 20, 48, 80, 160] {
            let gh = GaussHermite::new(n).unwrap();
            let total: f64 = gh.weights().iter().sum();
            assert_relative_eq!(total, PI.sqrt(), max_relative = 1e-13);
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let gh = GaussHermite::new(33).unwrap();
        let x = gh.nodes();
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for i in 0..x.len() {
            assert!((x[i] + x[x.len() - 1 - i]).abs() < 1e-13);
        }
    }

    #[test]
    fn exact_for_even_moments_up_to_degree_2n_minus_1() {
        // ∫ x^{2k} e^{-x²} = (2k−1)!! √π / 2^k
        let n = 12;
        let gh = GaussHermite::new(n).unwrap();
        for k in 0..n as u32 {
            let exact = double_factorial_odd(2 * k) * PI.sqrt() / 2f64.powi(k as i32);
            let got = gh.integrate(|x| x.powi(2 * k as i32));
            assert_relative_eq!(got, exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn scaled_rule_integrates_other_widths() {
        let gh = GaussHermite::new(10).unwrap().for_weight(3.5).unwrap();
        let got = gh.integrate(|x| x * x);
        let exact = 0.5 * (PI / 3.5).sqrt() / 3.5;
        assert_relative_eq!(got, exact, max_relative = 1e-13);
    }

    #[test]
    fn rotated_rule_integrates_correlated_gaussian() {
        let a = Matrix2::new(2.0, 0.7, 0.7, 1.0);
        let c = Vector2::new(0.3, -0.4);
        let rule = GaussianRule2d::new(c, &a, 12).unwrap();
        let norm = PI / a.determinant().sqrt();
        let w: f64 = rule.integrate_weighted(|_, _| 1.0);
        assert_relative_eq!(w, norm, max_relative = 1e-13);
        // plain integral of the weight itself
        let p: f64 = rule.integrate(|x, y| {
            let d = Vector2::new(x, y) - c;
            (-(d.transpose() * a * d)[0]).exp()
        });
        assert_relative_eq!(p, norm, max_relative = 1e-12);
        // second moment E[(x−c₁)(y−c₂)] = (A⁻¹)₁₂ / 2
        let inv = a.try_inverse().unwrap();
        let m: f64 = rule.integrate_weighted(|x, y| (x - c.x) * (y - c.y)) / norm;
        assert_relative_eq!(m, inv[(0, 1)] / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn rotated_rule_rejects_indefinite_metric() {
        let a = Matrix2::new(1.0, 2.0, 2.0, 1.0);
        assert!(GaussianRule2d::new(Vector2::zeros(), &a, 4).is_err());
    }
}
