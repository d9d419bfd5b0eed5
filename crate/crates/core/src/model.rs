//! The coupled two-oscillator Hamiltonian whose ground state is the
//! two-mode squeezed coherent state.
//!
//! Ladder operators follow c_i = a_i x_i + i p_i / (2 a_i ħ) with
//! a_i = √(M ω_i / 2ħ). The transformed operators are
//!
//! C₁ = μ(c₁ + z₁) − ν(c₂† + z̄₂),  C₂ = −ν(c₁† + z̄₁) + μ(c₂ + z₂),
//!
//! with μ = (1+α)/(2√α) and ν = (1−α)/(2√α), and
//! H = ħω₁C₁†C₁ + ħω₂C₂†C₂ + ħ(ω₁+ω₂)/2.

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;

use crate::phase_space::PhaseSpacePoint;
use crate::states::{heisenberg_weyl_shift, DisplacementLabels, OscillatorGeometry, QuadraticGaussian, ShiftParams};
use crate::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 20;

/// Levels per mode that truncation is allowed to corrupt.
pub const TRUNCATION_MARGIN: usize = 2;

pub const MIN_LADDER_TRUNCATION: usize = 4;
pub const MIN_HAMILTONIAN_TRUNCATION: usize = 8;

/// Grid points per axis in [`ground_state_energy_check`].
pub const DEFAULT_GROUND_STATE_ORDER: usize = 160;

/// Allowed energy change between a grid and its refinement, relative to
/// the zero-point energy.
pub const GROUND_STATE_CONVERGENCE_TOL: f64 = 1e-7;

/// Half-width of the ground-state box in Gaussian widths.
const BOX_WIDTHS: f64 = 8.0;

const GEOMETRY_MATCH_TOL: f64 = 1e-12;

const D1: [f64; 5] = [0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("alpha", alpha, "must lie in (0, 1]"))
    }
}

/// Frequencies, mass and ħ of the two uncoupled oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    pub omega1: f64,
    pub omega2: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl OscillatorSpec {
    pub fn new(omega1: f64, omega2: f64, mass: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("omega1", omega1), ("omega2", omega2), ("mass", mass), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, v, "must be finite and positive"));
            }
        }
        Ok(Self {
            omega1,
            omega2,
            mass,
            hbar,
        })
    }

    /// ω_i = 2ħ a_i² / M.
    pub fn from_geometry(geom: &OscillatorGeometry, mass: f64) -> Result<Self> {
        let f = 2.0 * geom.hbar / mass;
        Self::new(f * geom.a * geom.a, f * geom.b * geom.b, mass, geom.hbar)
    }

    /// a_i = √(M ω_i / 2ħ).
    pub fn ladder_scales(&self) -> (f64, f64) {
        let f = self.mass / (2.0 * self.hbar);
        ((f * self.omega1).sqrt(), (f * self.omega2).sqrt())
    }

    pub fn geometry(&self) -> OscillatorGeometry {
        let (a, b) = self.ladder_scales();
        OscillatorGeometry { a, b, hbar: self.hbar }
    }

    /// ħ(ω₁ + ω₂)/2.
    pub fn zero_point_energy(&self) -> f64 {
        0.5 * self.hbar * (self.omega1 + self.omega2)
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.omega1, self.omega2, self.mass, self.hbar).map(|_| ())
    }
}

/// (μ, ν) = ((1+α)/(2√α), (1−α)/(2√α)).
pub fn bogoliubov_scalars(alpha: f64) -> (f64, f64) {
    let s = 2.0 * alpha.sqrt();
    ((1.0 + alpha) / s, (1.0 - alpha) / s)
}

/// Coefficients of
/// C_i† = Σ_j (μ_ij c_j† + μ̃_ij c_j) + ξ_i and
/// C_i = Σ_j (ν_ij c_j† + ν̃_ij c_j) + ζ_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderCoefficients {
    pub mu: Matrix2<f64>,
    pub mu_tilde: Matrix2<f64>,
    pub nu: Matrix2<f64>,
    pub nu_tilde: Matrix2<f64>,
    pub xi_shift: [Complex64; 2],
    pub zeta_shift: [Complex64; 2],
}

pub fn ladder_coefficients(alpha: f64, labels: &DisplacementLabels) -> Result<LadderCoefficients> {
    check_alpha(alpha)?;
    let (m, n) = bogoliubov_scalars(alpha);
    let (z1, z2) = (labels.z1, labels.z2);
    Ok(LadderCoefficients {
        mu: Matrix2::new(m, 0.0, 0.0, m),
        mu_tilde: Matrix2::new(0.0, -n, -n, 0.0),
        nu: Matrix2::new(0.0, -n, -n, 0.0),
        nu_tilde: Matrix2::new(m, 0.0, 0.0, m),
        xi_shift: [z1.conj() * m - z2 * n, z2.conj() * m - z1 * n],
        zeta_shift: [z1 * m - z2.conj() * n, z2 * m - z1.conj() * n],
    })
}

/// An operator on the product Fock space |m, n⟩, m, n < N, stored with
/// basis index m·N + n.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    matrix: DMatrix<Complex64>,
    n_trunc: usize,
}

impl TruncatedOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>, n_trunc: usize) -> Result<Self> {
        let dim = n_trunc * n_trunc;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::invalid("matrix", matrix.nrows() as f64, "dimension must be N²"));
        }
        Ok(Self { matrix, n_trunc })
    }

    pub fn identity(n_trunc: usize) -> Self {
        let dim = n_trunc * n_trunc;
        Self {
            matrix: DMatrix::identity(dim, dim),
            n_trunc,
        }
    }

    /// c₁ (mode 1) or c₂ (mode 2).
    pub fn annihilation(mode: usize, n_trunc: usize) -> Result<Self> {
        if !(mode == 1 || mode == 2) {
            return Err(Error::invalid("mode", mode as f64, "must be 1 or 2"));
        }
        let dim = n_trunc * n_trunc;
        let mut a = DMatrix::zeros(dim, dim);
        for m in 0..n_trunc {
            for n in 0..n_trunc {
                let (level, target) = if mode == 1 {
                    (m, m.checked_sub(1).map(|mm| mm * n_trunc + n))
                } else {
                    (n, n.checked_sub(1).map(|nn| m * n_trunc + nn))
                };
                if let Some(t) = target {
                    a[(t, m * n_trunc + n)] = c((level as f64).sqrt(), 0.0);
                }
            }
        }
        Ok(Self { matrix: a, n_trunc })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn index(&self, m: usize, n: usize) -> usize {
        m * self.n_trunc + n
    }

    pub fn entry(&self, (m, n): (usize, usize), (mp, np): (usize, usize)) -> Complex64 {
        self.matrix[(self.index(m, n), self.index(mp, np))]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            n_trunc: self.n_trunc,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            n_trunc: self.n_trunc,
        }
    }

    /// Rows and columns with m, n < N − margin.
    pub fn interior(&self, margin: usize) -> DMatrix<Complex64> {
        let keep: Vec<usize> = (0..self.n_trunc.saturating_sub(margin))
            .flat_map(|m| (0..self.n_trunc.saturating_sub(margin)).map(move |n| (m, n)))
            .map(|(m, n)| self.index(m, n))
            .collect();
        DMatrix::from_fn(keep.len(), keep.len(), |i, j| self.matrix[(keep[i], keep[j])])
    }

    /// max |A_ij − B_ij| over the interior block.
    pub fn interior_distance(&self, other: &Self, margin: usize) -> f64 {
        (self.interior(margin) - other.interior(margin))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// max |A_ij − A_ji*|.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    fn lin(terms: &[(Complex64, &Self)], shift: Complex64, n_trunc: usize) -> Self {
        let dim = n_trunc * n_trunc;
        let mut out = DMatrix::identity(dim, dim) * shift;
        for (k, op) in terms {
            out += &op.matrix * *k;
        }
        Self { matrix: out, n_trunc }
    }

    fn hermitian_part(mut self) -> Self {
        self.matrix = (&self.matrix + self.matrix.adjoint()) * c(0.5, 0.0);
        self
    }
}

#[derive(Debug, Clone)]
pub struct TransformedLadder {
    pub c1: TruncatedOperator,
    pub c1_dag: TruncatedOperator,
    pub c2: TruncatedOperator,
    pub c2_dag: TruncatedOperator,
}

/// Ĉ_i and Ĉ_i† on the truncated Fock space, assembled from the
/// coefficient matrices.
pub fn transformed_ladder_matrices(alpha: f64, labels: &DisplacementLabels, n_trunc: usize) -> Result<TransformedLadder> {
    if n_trunc < MIN_LADDER_TRUNCATION {
        return Err(Error::invalid("n_trunc", n_trunc as f64, "truncation too small"));
    }
    let k = ladder_coefficients(alpha, labels)?;
    let a = [
        TruncatedOperator::annihilation(1, n_trunc)?,
        TruncatedOperator::annihilation(2, n_trunc)?,
    ];
    let ad = [a[0].adjoint(), a[1].adjoint()];
    let build = |plain: &Matrix2<f64>, tilde: &Matrix2<f64>, shift: Complex64, i: usize| {
        let terms: Vec<(Complex64, &TruncatedOperator)> = (0..2)
            .flat_map(|j| [(c(plain[(i, j)], 0.0), &ad[j]), (c(tilde[(i, j)], 0.0), &a[j])])
            .collect();
        TruncatedOperator::lin(&terms, shift, n_trunc)
    };
    Ok(TransformedLadder {
        c1: build(&k.nu, &k.nu_tilde, k.zeta_shift[0], 0),
        c2: build(&k.nu, &k.nu_tilde, k.zeta_shift[1], 1),
        c1_dag: build(&k.mu, &k.mu_tilde, k.xi_shift[0], 0),
        c2_dag: build(&k.mu, &k.mu_tilde, k.xi_shift[1], 1),
    })
}

/// How [`hamiltonian_fock_with`] assembles the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianPath {
    /// ħω₁C₁†C₁ + ħω₂C₂†C₂ + ħ(ω₁+ω₂)/2.
    Transformed,
    /// The expanded term list in c_i, c_i† with ℜ{X} = (X + X†)/2.
    Expanded,
}

pub fn hamiltonian_fock(
    alpha: f64,
    spec: &OscillatorSpec,
    labels: &DisplacementLabels,
    n_trunc: usize,
) -> Result<TruncatedOperator> {
    hamiltonian_fock_with(HamiltonianPath::Transformed, alpha, spec, labels, n_trunc)
}

pub fn hamiltonian_fock_with(
    path: HamiltonianPath,
    alpha: f64,
    spec: &OscillatorSpec,
    labels: &DisplacementLabels,
    n_trunc: usize,
) -> Result<TruncatedOperator> {
    check_alpha(alpha)?;
    spec.validate()?;
    if n_trunc < MIN_HAMILTONIAN_TRUNCATION {
        return Err(Error::invalid("n_trunc", n_trunc as f64, "truncation too small"));
    }
    let (h, w1, w2) = (spec.hbar, spec.omega1, spec.omega2);
    let n = n_trunc;
    let op = match path {
        HamiltonianPath::Transformed => {
            let t = transformed_ladder_matrices(alpha, labels, n)?;
            let m = (&t.c1_dag.matrix * &t.c1.matrix) * c(h * w1, 0.0)
                + (&t.c2_dag.matrix * &t.c2.matrix) * c(h * w2, 0.0)
                + DMatrix::identity(n * n, n * n) * c(spec.zero_point_energy(), 0.0);
            TruncatedOperator { matrix: m, n_trunc: n }
        }
        HamiltonianPath::Expanded => {
            let (z1, z2) = (labels.z1, labels.z2);
            let (p, q) = ((1.0 + alpha).powi(2), (1.0 - alpha).powi(2));
            let k1 = h / (4.0 * alpha) * (p * w1 + q * w2);
            let k2 = h / (4.0 * alpha) * (q * w1 + p * w2);
            let kx = h / (2.0 * alpha) * (1.0 - alpha * alpha) * (w1 + w2);
            let c1 = TruncatedOperator::annihilation(1, n)?;
            let c2 = TruncatedOperator::annihilation(2, n)?;
            let id = DMatrix::<Complex64>::identity(n * n, n * n);
            let re = |x: DMatrix<Complex64>| (&x + x.adjoint()) * c(0.5, 0.0);
            let n1 = c1.matrix.adjoint() * &c1.matrix;
            let n2 = c2.matrix.adjoint() * &c2.matrix;
            let pair = (&c1.matrix + &id * z1) * (&c2.matrix + &id * z2);
            let m = n1 * c(k1, 0.0) + n2 * c(k2, 0.0) - re(pair) * c(kx, 0.0)
                + re(&c2.matrix * z2.conj()) * c(2.0 * k2, 0.0)
                + re(&c1.matrix * z1.conj()) * c(2.0 * k1, 0.0)
                + &id
                    * c(
                        k1 * z1.norm_sqr() + k2 * z2.norm_sqr() + h / (4.0 * alpha) * (1.0 + alpha * alpha) * (w1 + w2),
                        0.0,
                    );
            TruncatedOperator { matrix: m, n_trunc: n }
        }
    };
    Ok(op.hermitian_part())
}

/// H(γ) = γᵀQγ/2 + Lᵀγ + c over γ = (x₁, x₂, p₁, p₂); the Weyl symbol of
/// the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticHamiltonian {
    pub q: Matrix4<f64>,
    pub l: Vector4<f64>,
    pub c: f64,
}

impl QuadraticHamiltonian {
    pub fn eval(&self, pt: &PhaseSpacePoint) -> f64 {
        let g = pt.as_vector();
        0.5 * g.dot(&(self.q * g)) + self.l.dot(&g) + self.c
    }

    /// (Q_{x₁x₂}, Q_{p₁p₂}).
    pub fn coupling(&self) -> (f64, f64) {
        (self.q[(0, 1)], self.q[(2, 3)])
    }

    pub fn position_block(&self) -> Matrix2<f64> {
        self.q.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn momentum_block(&self) -> Matrix2<f64> {
        self.q.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn cross_block(&self) -> Matrix2<f64> {
        self.q.fixed_view::<2, 2>(0, 2).into_owned()
    }
}

/// Writes each C_i = v_i·γ + s_i and sums ħω_i|v_i·γ + s_i|², which is the
/// Weyl symbol of ħω_i(C_i†C_i + ½).
pub fn hamiltonian_quadratic(alpha: f64, spec: &OscillatorSpec, labels: &DisplacementLabels) -> Result<QuadraticHamiltonian> {
    check_alpha(alpha)?;
    spec.validate()?;
    let (a1, a2) = spec.ladder_scales();
    let h = spec.hbar;
    let (mu, nu) = bogoliubov_scalars(alpha);
    let u1 = [c(a1, 0.0), c(0.0, 0.0), c(0.0, 0.5 / (a1 * h)), c(0.0, 0.0)];
    let u2 = [c(0.0, 0.0), c(a2, 0.0), c(0.0, 0.0), c(0.0, 0.5 / (a2 * h))];
    let v1: [Complex64; 4] = std::array::from_fn(|k| u1[k] * mu - u2[k].conj() * nu);
    let v2: [Complex64; 4] = std::array::from_fn(|k| -u1[k].conj() * nu + u2[k] * mu);
    let k = ladder_coefficients(alpha, labels)?;
    let mut q = Matrix4::zeros();
    let mut l = Vector4::zeros();
    let mut cst = 0.0;
    for (v, s, w) in [(v1, k.zeta_shift[0], spec.omega1), (v2, k.zeta_shift[1], spec.omega2)] {
        let f = 2.0 * h * w;
        for i in 0..4 {
            for j in 0..4 {
                q[(i, j)] += f * (v[i].conj() * v[j]).re;
            }
            l[i] += f * (s.conj() * v[i]).re;
        }
        cst += h * w * s.norm_sqr();
    }
    Ok(QuadraticHamiltonian { q, l, c: cst })
}

/// The state annihilated by Ĉ₁ and Ĉ₂: a Heisenberg–Weyl shift of a
/// centred Gaussian exp(−½ xᵀGx) with
/// G = (1/α)[[(1+α²)a₁², −(1−α²)a₁a₂], [−(1−α²)a₁a₂, (1+α²)a₂²]],
/// centred at x_i = −Re z_i / a_i, p_i = −2a_iħ Im z_i.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelGroundState {
    gaussian: QuadraticGaussian,
    shift: ShiftParams,
    hbar: f64,
}

impl ModelGroundState {
    pub fn new(alpha: f64, spec: &OscillatorSpec, labels: &DisplacementLabels) -> Result<Self> {
        check_alpha(alpha)?;
        spec.validate()?;
        let (a1, a2) = spec.ladder_scales();
        let d = (1.0 + alpha * alpha) / alpha;
        let o = -(1.0 - alpha * alpha) / alpha * a1 * a2;
        let gaussian = QuadraticGaussian::new(Matrix2::new(d * a1 * a1, o, o, d * a2 * a2))?;
        let h = spec.hbar;
        let shift = ShiftParams {
            y1: -labels.z1.re / a1,
            y2: -labels.z2.re / a2,
            q1: -2.0 * a1 * h * labels.z1.im,
            q2: -2.0 * a2 * h * labels.z2.im,
        };
        Ok(Self {
            gaussian,
            shift,
            hbar: h,
        })
    }

    pub fn gaussian(&self) -> &QuadraticGaussian {
        &self.gaussian
    }

    pub fn shift(&self) -> &ShiftParams {
        &self.shift
    }

    pub fn eval(&self, x1: f64, x2: f64) -> Complex64 {
        heisenberg_weyl_shift(&self.shift, |u, v| c(self.gaussian.eval(u, v), 0.0), x1, x2, self.hbar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateCheck {
    /// ⟨ψ|H|ψ⟩/⟨ψ|ψ⟩ on the refined grid.
    pub energy: f64,
    /// ħ(ω₁ + ω₂)/2.
    pub expected: f64,
    /// ‖(H − E₀)ψ‖/‖ψ‖ on the refined grid.
    pub residual: f64,
    pub coarse_energy: f64,
    pub coarse_residual: f64,
    pub order: usize,
}

impl GroundStateCheck {
    pub fn energy_error(&self) -> f64 {
        (self.energy - self.expected).abs()
    }

    pub fn residual_decreased(&self) -> bool {
        self.residual < self.coarse_residual
    }
}

/// Applies the Weyl-quantised (Q, L, c) Hamiltonian to the ground state on
/// a grid aligned with the principal axes of |ψ|², with 8th-order central
/// differences, and repeats the computation at twice the resolution.
///
/// `order` is the number of grid points per axis; the box spans ±8 Gaussian
/// widths.
pub fn ground_state_energy_check(
    alpha: f64,
    spec: &OscillatorSpec,
    geom: &OscillatorGeometry,
    labels: &DisplacementLabels,
    order: usize,
) -> Result<GroundStateCheck> {
    spec.validate()?;
    let (a1, a2) = spec.ladder_scales();
    let gap = ((geom.a - a1) / a1)
        .abs()
        .max(((geom.b - a2) / a2).abs())
        .max(((geom.hbar - spec.hbar) / spec.hbar).abs());
    if gap > GEOMETRY_MATCH_TOL {
        return Err(Error::invalid("geom", gap, "geometry must satisfy ω_i = 2ħa_i²/M"));
    }
    if order < 16 {
        return Err(Error::invalid("order", order as f64, "need at least 16 grid points per axis"));
    }
    let ham = hamiltonian_quadratic(alpha, spec, labels)?;
    let state = ModelGroundState::new(alpha, spec, labels)?;
    let expected = spec.zero_point_energy();
    let (coarse_energy, coarse_residual) = apply_on_grid(&ham, &state, order, expected);
    let (energy, residual) = apply_on_grid(&ham, &state, 2 * order, expected);
    let tol = GROUND_STATE_CONVERGENCE_TOL * expected;
    if (energy - coarse_energy).abs() > tol {
        return Err(Error::NonConvergence {
            what: "ground-state energy",
            coarse_order: order,
            fine_order: 2 * order,
            coarse: coarse_energy,
            fine: energy,
            tolerance: tol,
        });
    }
    Ok(GroundStateCheck {
        energy,
        expected,
        residual,
        coarse_energy,
        coarse_residual,
        order,
    })
}

/// Returns (⟨ψ|H|ψ⟩/⟨ψ|ψ⟩, ‖(H − e0)ψ‖/‖ψ‖) on an n×n grid.
fn apply_on_grid(ham: &QuadraticHamiltonian, state: &ModelGroundState, n: usize, e0: f64) -> (f64, f64) {
    let h = state.hbar;
    let eig = SymmetricEigen::new(*state.gaussian.matrix());
    let r = eig.eigenvectors;
    let widths = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    let center = Vector2::new(state.shift.y1, state.shift.y2);
    let step = widths.map(|w| 2.0 * BOX_WIDTHS * w / (n - 1) as f64);
    let coord = |i: usize, axis: usize| -BOX_WIDTHS * widths[axis] + i as f64 * step[axis];
    let point = |i: usize, j: usize| center + r * Vector2::new(coord(i, 0), coord(j, 1));

    let psi: Vec<Complex64> = (0..n * n)
        .map(|k| {
            let x = point(k / n, k % n);
            state.eval(x.x, x.y)
        })
        .collect();

    // derivative along the rotated axes, zero outside the box
    let stencil = |f: &[Complex64], coeffs: &[f64; 5], axis: usize, even: bool| -> Vec<Complex64> {
        let hk = step[axis];
        let scale = if even { 1.0 / (hk * hk) } else { 1.0 / hk };
        let sign = if even { 1.0 } else { -1.0 };
        let at = |i: isize, j: isize| -> Complex64 {
            if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
                c(0.0, 0.0)
            } else {
                f[i as usize * n + j as usize]
            }
        };
        (0..n * n)
            .map(|k| {
                let (i, j) = ((k / n) as isize, (k % n) as isize);
                let mut acc = f[k] * coeffs[0];
                for (o, &w) in coeffs.iter().enumerate().skip(1) {
                    let o = o as isize;
                    let (fw, bw) = if axis == 0 {
                        (at(i + o, j), at(i - o, j))
                    } else {
                        (at(i, j + o), at(i, j - o))
                    };
                    acc += (fw + bw * sign) * w;
                }
                acc * scale
            })
            .collect()
    };

    let d_s = stencil(&psi, &D1, 0, false);
    let d_t = stencil(&psi, &D1, 1, false);
    let d_ss = stencil(&psi, &D2, 0, true);
    let d_tt = stencil(&psi, &D2, 1, true);
    let d_st = stencil(&d_s, &D1, 1, false);

    let qxx = ham.position_block();
    let qpp = r.transpose() * ham.momentum_block() * r;
    let qxp = ham.cross_block();
    let lx = Vector2::new(ham.l[0], ham.l[1]);
    let lp = r.transpose() * Vector2::new(ham.l[2], ham.l[3]);
    let i_h = c(0.0, -h);

    let (mut num, mut norm, mut res) = (0.0, 0.0, 0.0);
    for k in 0..n * n {
        let x = point(k / n, k % n);
        let v = 0.5 * x.dot(&(qxx * x)) + lx.dot(&x) + ham.c;
        // p = −iħ R ∇_s
        let grad = [d_s[k], d_t[k]];
        let kinetic = -0.5 * h * h * (qpp[(0, 0)] * d_ss[k] + 2.0 * qpp[(0, 1)] * d_st[k] + qpp[(1, 1)] * d_tt[k]);
        let linear_p = i_h * (grad[0] * lp[0] + grad[1] * lp[1]);
        // Weyl ordering of x_i p_j: x_i p_j − (iħ/2) δ_ij
        let wx = qxp.transpose() * x;
        let rw = r.transpose() * wx;
        let mixed = i_h * (grad[0] * rw[0] + grad[1] * rw[1]) - psi[k] * c(0.0, 0.5 * h * qxp.trace());
        let hpsi = psi[k] * v + kinetic + linear_p + mixed;
        num += (psi[k].conj() * hpsi).re;
        norm += psi[k].norm_sqr();
        res += (hpsi - psi[k] * e0).norm_sqr();
    }
    (num / norm, (res / norm).sqrt())
}
