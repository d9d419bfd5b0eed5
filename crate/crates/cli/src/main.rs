//! `holosqueeze`: entanglement sweeps, Wigner grids, self-checks and
//! Hamiltonian export.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use holosqueeze::basis::squeeze_from_alpha;
use holosqueeze::model::{
    ground_state_energy_check, hamiltonian_fock, hamiltonian_fock_with, hamiltonian_quadratic, HamiltonianPath, OscillatorSpec,
    DEFAULT_GROUND_STATE_ORDER, TRUNCATION_MARGIN,
};
use holosqueeze::phase_space::{
    covariance, log_negativity, partial_transpose, ppt_separable, symplectic_spectrum, wigner_gaussian, PhaseSpacePoint,
};
use holosqueeze::states::{shift_params, unshifted_gaussian, DisplacementLabels, OscillatorGeometry};
use holosqueeze::verify::{self, Suite, VerifyConfig};
use holosqueeze::Mode;

use output::{with_output, write_json, write_table, Format, Num, Params, Row};

#[derive(Debug, Parser)]
#[command(
    name = "holosqueeze",
    version,
    about = "Bipartite squeezed coherent states: entanglement, Wigner grids and the coupled-oscillator model"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Reduced Planck constant.
    #[arg(long, global = true, default_value_t = 1.0, env = "HOLOSQUEEZE_HBAR")]
    hbar: f64,
    /// Particle mass.
    #[arg(long, global = true, default_value_t = 1.0, env = "HOLOSQUEEZE_MASS")]
    mass: f64,
    /// Grid points per axis for the ground-state energy check.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUND_STATE_ORDER, env = "HOLOSQUEEZE_ORDER")]
    order: usize,
    /// Fock-space cutoff per mode.
    #[arg(long, global = true, default_value_t = 20, env = "HOLOSQUEEZE_TRUNC")]
    trunc: usize,
    /// Tolerance for the ground-state energy and sweep residuals.
    #[arg(long, global = true, default_value_t = 1e-6, env = "HOLOSQUEEZE_TOL")]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "HOLOSQUEEZE_FORMAT")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, global = true, env = "HOLOSQUEEZE_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symplectic spectra, PPT verdicts and log-negativity over a list of α.
    Sweep(SweepArgs),
    /// Wigner function of a squeezed coherent state on a 2D phase-space slice.
    Wigner(WignerArgs),
    /// Run module self-checks.
    Verify(VerifyArgs),
    /// Export the (Q, L, c) Hamiltonian, a Fock summary and the ground-state check.
    Hamiltonian(HamiltonianArgs),
}

#[derive(Debug, Args)]
struct GeometryArgs {
    /// Inverse oscillator length along x₁.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Inverse oscillator length along x₂.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated squeezing parameters in (0, 1).
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    alpha: Vec<f64>,
    #[command(flatten)]
    geom: GeometryArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Plane {
    X1x2,
    P1p2,
    X1p1,
    X2p2,
    X1p2,
    X2p1,
}

impl Plane {
    fn axes(&self) -> (usize, usize) {
        match self {
            Plane::X1x2 => (0, 1),
            Plane::P1p2 => (2, 3),
            Plane::X1p1 => (0, 2),
            Plane::X2p2 => (1, 3),
            Plane::X1p2 => (0, 3),
            Plane::X2p1 => (1, 2),
        }
    }
}

const AXIS_NAMES: [&str; 4] = ["x1", "x2", "p1", "p2"];

#[derive(Debug, Args)]
struct WignerArgs {
    /// Route: 1 (product) or 2 (two-mode).
    #[arg(long, default_value_t = 2)]
    k: u8,
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[command(flatten)]
    geom: GeometryArgs,
    /// Label z₁ as `re,im`.
    #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
    z1: Complex64,
    /// Label z₂ as `re,im`.
    #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
    z2: Complex64,
    #[arg(long, value_enum, default_value_t = Plane::X1x2)]
    plane: Plane,
    /// Range of the first slice axis as `lo,hi`.
    #[arg(long, default_value = "-3,3", value_parser = parse_range, allow_hyphen_values = true)]
    u_range: (f64, f64),
    /// Range of the second slice axis as `lo,hi`.
    #[arg(long, default_value = "-3,3", value_parser = parse_range, allow_hyphen_values = true)]
    v_range: (f64, f64),
    #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u32).range(2..))]
    u_points: u32,
    #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u32).range(2..))]
    v_points: u32,
    /// Values of the two coordinates held fixed, as `x1,x2,p1,p2` (the
    /// slice axes are ignored).
    #[arg(long, default_value = "0,0,0,0", value_parser = parse_point, allow_hyphen_values = true)]
    fixed: [f64; 4],
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Hermite,
    Basis,
    States,
    #[value(name = "phase_space", alias = "phase-space")]
    PhaseSpace,
    Model,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Hermite => Suite::Hermite,
            SuiteArg::Basis => Suite::Basis,
            SuiteArg::States => Suite::States,
            SuiteArg::PhaseSpace => Suite::PhaseSpace,
            SuiteArg::Model => Suite::Model,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Args)]
struct HamiltonianArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    omega1: f64,
    #[arg(long, default_value_t = 2.0)]
    omega2: f64,
    #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
    z1: Complex64,
    #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
    z2: Complex64,
}

fn parse_floats(s: &str, n: usize) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let v = parse_floats(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    if v[0] >= v[1] {
        return Err("range must satisfy lo < hi".into());
    }
    Ok((v[0], v[1]))
}

fn parse_point(s: &str) -> std::result::Result<[f64; 4], String> {
    let v = parse_floats(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

#[derive(Serialize)]
struct SweepRow {
    k: u8,
    alpha: Num,
    xi: Num,
    lambda1: Num,
    lambda2: Num,
    verdict: String,
    boundary: bool,
    log_negativity: Num,
    closed_form: Num,
    residual: Num,
}

impl Row for SweepRow {
    fn columns() -> Vec<String> {
        [
            "k",
            "alpha",
            "xi",
            "lambda1",
            "lambda2",
            "verdict",
            "boundary",
            "log_negativity",
            "closed_form",
            "residual",
        ]
        .map(String::from)
        .to_vec()
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            self.alpha.text(),
            self.xi.text(),
            self.lambda1.text(),
            self.lambda2.text(),
            self.verdict.clone(),
            self.boundary.to_string(),
            self.log_negativity.text(),
            self.closed_form.text(),
            self.residual.text(),
        ]
    }
}

fn cmd_sweep(g: &Global, args: &SweepArgs) -> Result<bool> {
    let geom = OscillatorGeometry::new(args.geom.a, args.geom.b, g.hbar)?;
    let mut rows = Vec::new();
    for k in Mode::ALL {
        for &alpha in &args.alpha {
            let sq = squeeze_from_alpha(alpha)?;
            let cov = covariance(k, alpha, &geom)?;
            let spec = symplectic_spectrum(&partial_transpose(&cov))?;
            let ppt = ppt_separable(&cov)?;
            let el = log_negativity(&cov)?;
            let closed = match k {
                Mode::Product => 0.0,
                Mode::TwoMode => (-alpha.ln()).max(0.0),
            };
            rows.push(SweepRow {
                k: k.index(),
                alpha: Num(alpha),
                xi: Num(sq.xi()),
                lambda1: Num(spec.min()),
                lambda2: Num(spec.max()),
                verdict: ppt.verdict.to_string(),
                boundary: ppt.boundary,
                log_negativity: Num(el),
                closed_form: Num(closed),
                residual: Num((el - closed).abs()),
            });
        }
    }
    let params = Params::default()
        .text("command", "sweep")
        .num("hbar", g.hbar)
        .num("a", args.geom.a)
        .num("b", args.geom.b);
    with_output(g.out.as_deref(), |w| write_table(g.format, &params, &rows, w))?;
    Ok(rows.iter().all(|r| r.residual.0 <= g.tol))
}

#[derive(Serialize)]
struct GridRow {
    u: Num,
    v: Num,
    wigner: Num,
}

struct WignerRow<'a> {
    names: (&'a str, &'a str),
    row: GridRow,
}

impl Serialize for WignerRow<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry(self.names.0, &self.row.u)?;
        m.serialize_entry(self.names.1, &self.row.v)?;
        m.serialize_entry("wigner", &self.row.wigner)?;
        m.end()
    }
}

// column names depend on the plane, so they are fixed up after writing
impl Row for WignerRow<'_> {
    fn columns() -> Vec<String> {
        ["u", "v", "wigner"].map(String::from).to_vec()
    }

    fn fields(&self) -> Vec<String> {
        vec![self.row.u.text(), self.row.v.text(), self.row.wigner.text()]
    }
}

fn cmd_wigner(g: &Global, args: &WignerArgs) -> Result<bool> {
    let k = Mode::from_index(args.k)?;
    let geom = OscillatorGeometry::new(args.geom.a, args.geom.b, g.hbar)?;
    let labels = DisplacementLabels::new(args.z1, args.z2);
    let (_, w) = wigner_gaussian(&unshifted_gaussian(k, args.alpha, &geom)?, g.hbar)?;
    let w = w.shifted(&shift_params(k, args.alpha, &geom, &labels)?);
    let (iu, iv) = args.plane.axes();
    let names = (AXIS_NAMES[iu], AXIS_NAMES[iv]);
    let (nu, nv) = (args.u_points as usize, args.v_points as usize);
    let mut rows = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = args.u_range.0 + (args.u_range.1 - args.u_range.0) * i as f64 / (nu - 1) as f64;
        for j in 0..nv {
            let v = args.v_range.0 + (args.v_range.1 - args.v_range.0) * j as f64 / (nv - 1) as f64;
            let mut gamma = args.fixed;
            gamma[iu] = u;
            gamma[iv] = v;
            let value = w.eval(&PhaseSpacePoint::new(gamma[0], gamma[1], gamma[2], gamma[3]));
            rows.push(WignerRow {
                names,
                row: GridRow {
                    u: Num(u),
                    v: Num(v),
                    wigner: Num(value),
                },
            });
        }
    }
    let mut params = Params::default()
        .text("command", "wigner")
        .int("k", k.index() as usize)
        .num("alpha", args.alpha)
        .num("a", args.geom.a)
        .num("b", args.geom.b)
        .num("hbar", g.hbar)
        .num("z1_re", args.z1.re)
        .num("z1_im", args.z1.im)
        .num("z2_re", args.z2.re)
        .num("z2_im", args.z2.im)
        .text("plane", &format!("{}{}", names.0, names.1));
    for (idx, name) in AXIS_NAMES.iter().enumerate() {
        if idx != iu && idx != iv {
            params = params.num(name, args.fixed[idx]);
        }
    }
    params = params
        .num("u_min", args.u_range.0)
        .num("u_max", args.u_range.1)
        .int("u_points", nu)
        .num("v_min", args.v_range.0)
        .num("v_max", args.v_range.1)
        .int("v_points", nv);
    with_output(g.out.as_deref(), |out| match g.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_table(Format::Csv, &params, &rows, &mut buf)?;
            let text = String::from_utf8(buf)?;
            let renamed = text.replacen("u,v,wigner", &format!("{},{},wigner", names.0, names.1), 1);
            out.write_all(renamed.as_bytes())?;
            Ok(())
        }
        Format::Json => write_table(Format::Json, &params, &rows, out),
    })?;
    Ok(true)
}

#[derive(Serialize)]
struct CheckOut {
    name: String,
    measured: Num,
    tolerance: Num,
    passed: bool,
}

impl Row for CheckOut {
    fn columns() -> Vec<String> {
        ["name", "measured", "tolerance", "passed"].map(String::from).to_vec()
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.name.clone(),
            self.measured.text(),
            self.tolerance.text(),
            self.passed.to_string(),
        ]
    }
}

fn cmd_verify(g: &Global, args: &VerifyArgs) -> Result<bool> {
    let suite: Suite = args.suite.into();
    let config = VerifyConfig {
        hbar: g.hbar,
        mass: g.mass,
        truncation: g.trunc,
        ground_state_order: g.order,
    };
    let report = verify::run(suite, &config);
    println!("{report}");
    if let Some(path) = g.out.as_deref() {
        let rows: Vec<CheckOut> = report
            .checks
            .iter()
            .map(|c| CheckOut {
                name: c.name.clone(),
                measured: Num(c.measured),
                tolerance: Num(c.tolerance),
                passed: c.passed,
            })
            .collect();
        let params = Params::default()
            .text("command", "verify")
            .text("suite", suite.name())
            .num("hbar", g.hbar)
            .num("mass", g.mass)
            .int("trunc", g.trunc)
            .int("order", g.order);
        with_output(Some(path), |w| write_table(g.format, &params, &rows, w))?;
    }
    Ok(report.passed())
}

#[derive(Serialize)]
struct FockSummary {
    truncation: usize,
    dimension: usize,
    hermiticity_defect: Num,
    path_difference: Num,
    vacuum_expectation: Num,
}

#[derive(Serialize)]
struct GroundStateOut {
    energy: Num,
    expected: Num,
    error: Num,
    residual: Num,
    coarse_energy: Num,
    coarse_residual: Num,
    residual_decreased: bool,
    passed: bool,
}

#[derive(Serialize)]
struct HamiltonianDoc<'a> {
    parameters: &'a Params,
    q: Vec<Vec<Num>>,
    l: Vec<Num>,
    c: Num,
    fock: FockSummary,
    ground_state: GroundStateOut,
}

#[derive(Serialize)]
struct QuantityRow {
    quantity: String,
    row: usize,
    col: usize,
    value: Num,
}

impl Row for QuantityRow {
    fn columns() -> Vec<String> {
        ["quantity", "row", "col", "value"].map(String::from).to_vec()
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.quantity.clone(),
            self.row.to_string(),
            self.col.to_string(),
            self.value.text(),
        ]
    }
}

fn cmd_hamiltonian(g: &Global, args: &HamiltonianArgs) -> Result<bool> {
    let spec = OscillatorSpec::new(args.omega1, args.omega2, g.mass, g.hbar)?;
    let labels = DisplacementLabels::new(args.z1, args.z2);
    let hq = hamiltonian_quadratic(args.alpha, &spec, &labels)?;
    let fock = hamiltonian_fock(args.alpha, &spec, &labels, g.trunc)?;
    let expanded = hamiltonian_fock_with(HamiltonianPath::Expanded, args.alpha, &spec, &labels, g.trunc)?;
    let gs = ground_state_energy_check(args.alpha, &spec, &spec.geometry(), &labels, g.order)?;
    let passed = gs.energy_error() <= g.tol && gs.residual_decreased();

    let params = Params::default()
        .text("command", "hamiltonian")
        .num("alpha", args.alpha)
        .num("omega1", spec.omega1)
        .num("omega2", spec.omega2)
        .num("mass", spec.mass)
        .num("hbar", spec.hbar)
        .num("z1_re", args.z1.re)
        .num("z1_im", args.z1.im)
        .num("z2_re", args.z2.re)
        .num("z2_im", args.z2.im)
        .int("trunc", g.trunc)
        .int("order", g.order)
        .num("tol", g.tol);
    let summary = FockSummary {
        truncation: g.trunc,
        dimension: g.trunc * g.trunc,
        hermiticity_defect: Num(fock.hermiticity_defect()),
        path_difference: Num(fock.interior_distance(&expanded, TRUNCATION_MARGIN)),
        vacuum_expectation: Num(fock.entry((0, 0), (0, 0)).re),
    };
    let ground = GroundStateOut {
        energy: Num(gs.energy),
        expected: Num(gs.expected),
        error: Num(gs.energy_error()),
        residual: Num(gs.residual),
        coarse_energy: Num(gs.coarse_energy),
        coarse_residual: Num(gs.coarse_residual),
        residual_decreased: gs.residual_decreased(),
        passed,
    };
    match g.format {
        Format::Json => {
            let doc = HamiltonianDoc {
                parameters: &params,
                q: (0..4).map(|i| (0..4).map(|j| Num(hq.q[(i, j)])).collect()).collect(),
                l: hq.l.iter().map(|&v| Num(v)).collect(),
                c: Num(hq.c),
                fock: summary,
                ground_state: ground,
            };
            with_output(g.out.as_deref(), |w| write_json(&doc, w))?;
        }
        Format::Csv => {
            let mut rows = Vec::new();
            let mut push = |q: &str, r: usize, c: usize, v: f64| {
                rows.push(QuantityRow {
                    quantity: q.to_string(),
                    row: r,
                    col: c,
                    value: Num(v),
                })
            };
            for i in 0..4 {
                for j in 0..4 {
                    push("q", i, j, hq.q[(i, j)]);
                }
            }
            for i in 0..4 {
                push("l", i, 0, hq.l[i]);
            }
            push("c", 0, 0, hq.c);
            push("fock.hermiticity_defect", 0, 0, summary.hermiticity_defect.0);
            push("fock.path_difference", 0, 0, summary.path_difference.0);
            push("fock.vacuum_expectation", 0, 0, summary.vacuum_expectation.0);
            push("ground_state.energy", 0, 0, gs.energy);
            push("ground_state.expected", 0, 0, gs.expected);
            push("ground_state.error", 0, 0, gs.energy_error());
            push("ground_state.residual", 0, 0, gs.residual);
            push("ground_state.coarse_energy", 0, 0, gs.coarse_energy);
            push("ground_state.coarse_residual", 0, 0, gs.coarse_residual);
            push("ground_state.passed", 0, 0, if passed { 1.0 } else { 0.0 });
            with_output(g.out.as_deref(), |w| write_table(Format::Csv, &params, &rows, w))?;
        }
    }
    Ok(passed)
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    for (name, v) in [("hbar", g.hbar), ("mass", g.mass), ("tol", g.tol)] {
        if !(v > 0.0 && v.is_finite()) {
            bail!(holosqueeze::Error::InvalidParameter {
                name,
                value: v,
                reason: "must be finite and positive",
            });
        }
    }
    match &cli.command {
        Command::Sweep(a) => cmd_sweep(g, a),
        Command::Wigner(a) => cmd_wigner(g, a),
        Command::Verify(a) => cmd_verify(g, a),
        Command::Hamiltonian(a) => cmd_hamiltonian(g, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("holosqueeze: check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("holosqueeze: {e:#}");
            match e.downcast_ref::<holosqueeze::Error>() {
                Some(holosqueeze::Error::InvalidParameter { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
