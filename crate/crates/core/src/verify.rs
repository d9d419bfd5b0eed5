//! Self-checks grouped by module, each reporting a measured residual and the
//! tolerance it is held to.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::basis::{alpha_from_xi, coefficient_norm_partial, squeeze_from_alpha, two_mode_gram, DEFAULT_ORTHONORMALITY_ORDER};
use crate::hermite::{
    explicit, hermite_holo, mehler_product, mehler_two_variable, orthogonality_integral, orthogonality_norm,
    DEFAULT_MEHLER_TRUNCATION, DEFAULT_ORTHOGONALITY_ORDER,
};
use crate::model::{
    bogoliubov_scalars, ground_state_energy_check, hamiltonian_fock_with, transformed_ladder_matrices, HamiltonianPath,
    OscillatorSpec, TruncatedOperator, DEFAULT_GROUND_STATE_ORDER, TRUNCATION_MARGIN,
};
use crate::phase_space::{
    covariance, log_negativity, partial_transpose, ppt_separable, robertson_schrodinger_check, symplectic_spectrum,
    symplectic_spectrum_squared, wigner_gaussian, Verdict,
};
use crate::states::{
    heisenberg_weyl_shift, series_expansion_psi, unshifted_gaussian, DisplacementLabels, OscillatorGeometry,
    SqueezedCoherentState,
};
use crate::{Error, Mode, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ tolerance` and is finite.
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            passed: measured.is_finite() && measured <= tolerance,
        }
    }

    /// A check that could not be evaluated.
    pub fn errored(name: impl Into<String>, err: &Error) -> Self {
        Self {
            name: format!("{} ({err})", name.into()),
            measured: f64::NAN,
            tolerance: 0.0,
            passed: false,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} measured={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Hermite,
    Basis,
    States,
    PhaseSpace,
    Model,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 5] = [Suite::Hermite, Suite::Basis, Suite::States, Suite::PhaseSpace, Suite::Model];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Hermite => "hermite",
            Suite::Basis => "basis",
            Suite::States => "states",
            Suite::PhaseSpace => "phase_space",
            Suite::Model => "model",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::MODULES)
            .find(|m| m.name() == s)
            .ok_or(Error::invalid("suite", f64::NAN, "unknown suite name"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub hbar: f64,
    pub mass: f64,
    pub truncation: usize,
    /// Grid points per axis for the ground-state check.
    pub ground_state_order: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            truncation: 12,
            ground_state_order: DEFAULT_GROUND_STATE_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{}: {} checks, {} failed", self.suite, self.checks.len(), failed)
    }
}

pub fn run(suite: Suite, config: &VerifyConfig) -> Report {
    let mut checks = Vec::new();
    let modules: Vec<Suite> = if suite == Suite::All {
        Suite::MODULES.to_vec()
    } else {
        vec![suite]
    };
    for m in modules {
        let mut out = Vec::new();
        match m {
            Suite::Hermite => hermite_checks(&mut out),
            Suite::Basis => basis_checks(&mut out),
            Suite::States => states_checks(config, &mut out),
            Suite::PhaseSpace => phase_space_checks(config, &mut out),
            Suite::Model => model_checks(config, &mut out),
            Suite::All => unreachable!(),
        }
        checks.extend(out.into_iter().map(|c| Check {
            name: format!("{}.{}", m.name(), c.name),
            ..c
        }));
    }
    Report { suite, checks }
}

fn record(out: &mut Vec<Check>, name: &str, tolerance: f64, measured: Result<f64>) {
    out.push(match measured {
        Ok(v) => Check::new(name, v, tolerance),
        Err(e) => Check::errored(name, &e),
    });
}

fn alpha_grid() -> Vec<f64> {
    (1..=19).map(|i| 0.05 * i as f64).collect()
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hermite_checks(out: &mut Vec<Check>) {
    let pts = [cx(0.3, -0.7), cx(-1.2, 0.4), cx(2.0, 1.5)];
    let mut worst: f64 = 0.0;
    for n in 0..=25 {
        for &z in &pts {
            let r = hermite_holo(n, z);
            let e = explicit::hermite_holo_sum(n, z);
            worst = worst.max((r - e).norm() / e.norm().max(1.0));
        }
    }
    record(out, "recurrence_vs_explicit_sum", 1e-11, Ok(worst));
    record(
        out,
        "mehler_product",
        1e-9,
        mehler_product(0.6, cx(0.4, 0.2), cx(-0.3, 0.5), DEFAULT_MEHLER_TRUNCATION).map(|p| p.gap()),
    );
    record(
        out,
        "mehler_two_variable",
        1e-9,
        mehler_two_variable(0.4, 0.4, cx(0.3, 0.1), cx(-0.2, 0.5), 0.7, -1.1, 50).map(|p| p.gap()),
    );
    let orth = (|| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for alpha in [0.3, 0.5, 0.7] {
            for m in 0..=4 {
                for n in 0..=4 {
                    let v = orthogonality_integral(m, n, alpha, DEFAULT_ORTHOGONALITY_ORDER)?;
                    let scale = (orthogonality_norm(m, m, alpha) * orthogonality_norm(n, n, alpha)).sqrt();
                    worst = worst.max((v - cx(orthogonality_norm(m, n, alpha), 0.0)).norm() / scale);
                }
            }
        }
        Ok(worst)
    })();
    record(out, "orthogonality_relation", 1e-8, orth);
}

fn basis_checks(out: &mut Vec<Check>) {
    let rt = (|| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for alpha in alpha_grid() {
            let s = squeeze_from_alpha(alpha)?;
            worst = worst.max((alpha_from_xi(s.xi()) - alpha).abs() / alpha);
            worst = worst.max((s.xi() - s.xi_artanh()).abs());
        }
        Ok(worst)
    })();
    record(out, "xi_alpha_round_trip", 1e-14, rt);
    let norm = (|| -> Result<f64> {
        let (z1, z2) = (cx(0.3, 0.2), cx(-0.4, 0.1));
        let limit = (z1.norm_sqr() + z2.norm_sqr()).exp();
        let mut worst: f64 = 0.0;
        for k in Mode::ALL {
            let v = coefficient_norm_partial(k, 0.5, z1, z2, 60)?;
            worst = worst.max((v - limit).abs() / limit);
        }
        Ok(worst)
    })();
    record(out, "coefficient_norm_limit", 1e-12, norm);
    let gram = (|| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for alpha in [0.3, 0.6] {
            let g = two_mode_gram(alpha, 3, DEFAULT_ORTHONORMALITY_ORDER)?;
            for i in 0..g.nrows() {
                for j in 0..g.ncols() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((g[(i, j)] - cx(e, 0.0)).norm());
                }
            }
        }
        Ok(worst)
    })();
    record(out, "two_mode_orthonormality", 1e-7, gram);
}

fn trapezoid_norm(st: &SqueezedCoherentState) -> f64 {
    let (lo, hi, n) = (-9.0, 9.0, 301);
    let h = (hi - lo) / (n - 1) as f64;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x1 = lo + i as f64 * h;
            let x2 = lo + j as f64 * h;
            s += st.eval(x1, x2).norm_sqr();
        }
    }
    s * h * h
}

fn states_checks(config: &VerifyConfig, out: &mut Vec<Check>) {
    let labels = DisplacementLabels::new(cx(0.3, 0.2), cx(-0.2, 0.1));
    let norm = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, config.hbar)?;
        let mut worst: f64 = 0.0;
        for k in Mode::ALL {
            for alpha in [0.2, 0.5, 0.8] {
                let st = SqueezedCoherentState::new(k, alpha, g, labels)?;
                worst = worst.max((trapezoid_norm(&st) - 1.0).abs());
            }
        }
        Ok(worst)
    })();
    record(out, "normalisation", 1e-9, norm);
    let series = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, config.hbar)?;
        let mut worst: f64 = 0.0;
        for k in Mode::ALL {
            let st = SqueezedCoherentState::new(k, 0.5, g, labels)?;
            for i in 0..11 {
                for j in 0..11 {
                    let (x1, x2) = (-3.0 + 0.6 * i as f64, -3.0 + 0.6 * j as f64);
                    let s = series_expansion_psi(k, 50, x1, x2, &g, &labels, 0.5)?;
                    worst = worst.max((s - st.eval(x1, x2)).norm());
                }
            }
        }
        Ok(worst)
    })();
    record(out, "series_expansion", 1e-7, series);
    let shift = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, config.hbar)?;
        let mut worst: f64 = 0.0;
        for k in Mode::ALL {
            let st = SqueezedCoherentState::new(k, 0.4, g, labels)?;
            let q = st.unshifted();
            for (x1, x2) in [(0.1, -0.3), (0.8, 0.5), (-1.1, 0.2)] {
                let r = heisenberg_weyl_shift(&st.shift_params(), |u, v| cx(q.eval(u, v), 0.0), x1, x2, g.hbar);
                worst = worst.max((r - st.eval(x1, x2)).norm());
            }
        }
        Ok(worst)
    })();
    record(out, "shift_reconstruction", 1e-12, shift);
}

fn phase_space_checks(config: &VerifyConfig, out: &mut Vec<Check>) {
    let h = config.hbar;
    let spectra = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, h)?;
        let mut worst: f64 = 0.0;
        for alpha in alpha_grid() {
            let t1 = symplectic_spectrum(&partial_transpose(&covariance(Mode::Product, alpha, &g)?))?;
            let t2 = symplectic_spectrum(&partial_transpose(&covariance(Mode::TwoMode, alpha, &g)?))?;
            for v in t1.values() {
                worst = worst.max((v / (0.5 * h) - 1.0).abs());
            }
            worst = worst.max((t2.min() / (0.5 * h * alpha) - 1.0).abs());
            worst = worst.max((t2.max() / (0.5 * h / alpha) - 1.0).abs());
        }
        Ok(worst)
    })();
    record(out, "symplectic_spectrum_closed_form", 1e-12, spectra);
    let routes = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, h)?;
        let mut worst: f64 = 0.0;
        for alpha in alpha_grid() {
            let t = partial_transpose(&covariance(Mode::TwoMode, alpha, &g)?);
            let a = symplectic_spectrum(&t)?.values();
            let b = symplectic_spectrum_squared(&t)?.values();
            for i in 0..2 {
                worst = worst.max((a[i] / b[i] - 1.0).abs());
            }
        }
        Ok(worst)
    })();
    record(out, "symplectic_spectrum_routes", 1e-12, routes);
    let dual = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, h)?;
        let mut worst: f64 = 0.0;
        for k in Mode::ALL {
            for alpha in [0.2, 0.5, 0.8] {
                let a = covariance(k, alpha, &g)?;
                let (b, _) = wigner_gaussian(&unshifted_gaussian(k, alpha, &g)?, h)?;
                worst = worst.max((a.sigma() - b.sigma()).abs().max() / a.sigma().abs().max());
            }
        }
        Ok(worst)
    })();
    record(out, "covariance_dual_path", 1e-14, dual);
    let rs = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, h)?;
        let mut worst: f64 = 0.0;
        for k in Mode::ALL {
            for alpha in alpha_grid() {
                let r = robertson_schrodinger_check(&covariance(k, alpha, &g)?);
                worst = worst.max(-r.margin);
            }
        }
        Ok(worst)
    })();
    record(out, "robertson_schrodinger_margin", 1e-12, rs);
    let ppt = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, h)?;
        let mut wrong = 0usize;
        for alpha in alpha_grid() {
            if ppt_separable(&covariance(Mode::Product, alpha, &g)?)?.verdict != Verdict::Separable {
                wrong += 1;
            }
            if ppt_separable(&covariance(Mode::TwoMode, alpha, &g)?)?.verdict != Verdict::Entangled {
                wrong += 1;
            }
        }
        Ok(wrong as f64)
    })();
    record(out, "ppt_verdicts_wrong", 0.0, ppt);
    let ln = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, h)?;
        let mut worst: f64 = 0.0;
        for alpha in alpha_grid() {
            let e = log_negativity(&covariance(Mode::TwoMode, alpha, &g)?)?;
            worst = worst.max((e - (-alpha.ln()).max(0.0)).abs());
        }
        Ok(worst)
    })();
    record(out, "log_negativity_closed_form", 1e-12, ln);
}

fn model_checks(config: &VerifyConfig, out: &mut Vec<Check>) {
    let bog = alpha_grid()
        .into_iter()
        .map(|a| {
            let (m, n) = bogoliubov_scalars(a);
            (m * m - n * n - 1.0).abs()
        })
        .fold(0.0, f64::max);
    record(out, "bogoliubov_identity", 1e-15, Ok(bog));
    let n = config.truncation;
    let z = DisplacementLabels::new(cx(0.3, 0.1), cx(0.3, 0.1));
    let comm = (|| -> Result<f64> {
        let t = transformed_ladder_matrices(0.5, &z, n)?;
        let id = TruncatedOperator::identity(n);
        let zero = TruncatedOperator::from_matrix(nalgebra::DMatrix::zeros(n * n, n * n), n)?;
        Ok(t.c1
            .commutator(&t.c1_dag)
            .interior_distance(&id, TRUNCATION_MARGIN)
            .max(t.c2.commutator(&t.c2_dag).interior_distance(&id, TRUNCATION_MARGIN))
            .max(t.c1.commutator(&t.c2).interior_distance(&zero, TRUNCATION_MARGIN))
            .max(t.c1.commutator(&t.c2_dag).interior_distance(&zero, TRUNCATION_MARGIN)))
    })();
    record(out, "transformed_commutators", 1e-12, comm);
    let paths = (|| -> Result<f64> {
        let s = OscillatorSpec::new(1.3, 0.8, config.mass, config.hbar)?;
        let mut worst: f64 = 0.0;
        for alpha in [0.25, 0.5, 0.75] {
            for zz in [DisplacementLabels::zero(), z] {
                let a = hamiltonian_fock_with(HamiltonianPath::Transformed, alpha, &s, &zz, n)?;
                let b = hamiltonian_fock_with(HamiltonianPath::Expanded, alpha, &s, &zz, n)?;
                worst = worst.max(a.interior_distance(&b, TRUNCATION_MARGIN));
            }
        }
        Ok(worst)
    })();
    record(out, "fock_paths_agree", 1e-10, paths);
    let gs = (|| -> Result<f64> {
        let g = OscillatorGeometry::new(1.0, 1.0, config.hbar)?;
        let s = OscillatorSpec::from_geometry(&g, config.mass)?;
        let r = ground_state_energy_check(0.5, &s, &g, &DisplacementLabels::zero(), config.ground_state_order)?;
        if !r.residual_decreased() {
            return Err(Error::NonConvergence {
                what: "ground-state residual",
                coarse_order: r.order,
                fine_order: 2 * r.order,
                coarse: r.coarse_residual,
                fine: r.residual,
                tolerance: 0.0,
            });
        }
        Ok(r.energy_error())
    })();
    record(out, "ground_state_energy", 1e-6, gs);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All].into_iter().chain(Suite::MODULES) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nonsense".parse::<Suite>().is_err());
    }

    #[test]
    fn check_rejects_nan() {
        assert!(!Check::new("x", f64::NAN, 1.0).passed);
        assert!(Check::new("x", 0.5, 1.0).passed);
        assert!(!Check::new("x", 1.5, 1.0).passed);
    }

    #[test]
    fn phase_space_suite_passes() {
        let r = run(Suite::PhaseSpace, &VerifyConfig::default());
        assert!(r.passed(), "{r}");
        assert!(r
            .checks
            .iter()
            .any(|c| c.name == "phase_space.symplectic_spectrum_closed_form"));
    }

    #[test]
    fn model_suite_passes() {
        let r = run(Suite::Model, &VerifyConfig::default());
        assert!(r.passed(), "{r}");
    }
}
