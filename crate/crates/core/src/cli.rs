//! The `dk` command line: operator checks, Sobolev diagnostics, boundary
//! form tests and spectrum sweeps.
//!
//! Parameters come from an optional TOML file (`--config`) with the tables
//! `[grid]`, `[bc]`, `[spectrum]`, `[sobolev]` and `[check]`, overridden by
//! flags. Exit codes: 0 all checks pass, 1 a numerical check failed (or a
//! computation errored), 2 invalid configuration.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::boundary::{
    bc_subspace, boundary_form, boundary_term, cayley_residual, form_matrix, green_boundary_term,
    TraceKind, TraceVector, UnitaryBC,
};
use crate::error::Error;
use crate::exterior::{assemble_operator, dirac_green_residual, green_residual};
use crate::fields::{random_compact, random_smooth};
use crate::forms::{fmt_f64, Component, Domain, FormField, Space};
use crate::grids::{Grid1D, Mapping, RadialGrid, Scheme};
use crate::sobolev::{Builtin, MembershipVerdict, ModeProfile, SampledProfile, Verdict};
use crate::spectral::{impose_bc, solve_spectrum, mode_inner_bc, ConstraintMethod, SpectrumResult};

pub const SEED_VAR: &str = "DK_SEED";

#[derive(Parser, Debug)]
#[command(name = "dk", version, about = "Self-adjoint extensions of the Dirac-Kähler operator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Inclusive mode range `a..b` for radial spectra.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub modes: Option<String>,
    /// Endpoint condition `U = e^{iλ}`.
    #[arg(long = "bc.lambda", global = true, allow_negative_numbers = true)]
    pub bc_lambda: Option<f64>,
    /// Puncture unitary, row-major `re im` pairs (8 numbers).
    #[arg(long = "bc.u", global = true, num_args = 8, allow_negative_numbers = true)]
    pub bc_u: Option<Vec<f64>>,
    /// Include eigenvectors in JSON output.
    #[arg(long, global = true)]
    pub eigenvectors: bool,
    /// Builtin function for `sobolev-check`.
    #[arg(long, global = true)]
    pub function: Option<String>,
    /// `x,f` samples for `sobolev-check`.
    #[arg(long, global = true)]
    pub samples: Option<PathBuf>,
    /// Expected verdict for `sobolev-check`; mismatch exits with 1.
    #[arg(long, global = true)]
    pub expect: Option<String>,
    /// Node count.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Grid kind: `interval` or `radial`.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Constraint method: `projection` or `tau`.
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// Number of eigenvalues per spectrum.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Trace vector `re im …` for `boundary-form`.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub beta: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Green identities against boundary forms on random and builtin fields.
    CheckAdjoint,
    /// H¹ membership diagnostics.
    SobolevCheck,
    /// Isotropy and maximality of a Cayley boundary condition.
    BoundaryForm,
    /// Spectra of the constrained operator.
    Spectrum,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub bc: BcConfig,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub sobolev: SobolevConfig,
    #[serde(default)]
    pub check: CheckConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub scheme: Option<String>,
    pub mapping: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub eps_min: Option<f64>,
    #[serde(rename = "R")]
    pub r_max: Option<f64>,
    pub cutoffs: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcConfig {
    pub lambda: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub outer_lambda: Option<f64>,
    pub u: Option<Vec<[f64; 2]>>,
    pub us: Option<Vec<Vec<[f64; 2]>>>,
    pub outer_u: Option<Vec<[f64; 2]>>,
    /// Additional Haar-random puncture unitaries drawn from `DK_SEED`.
    pub random: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub count: Option<usize>,
    pub method: Option<String>,
    pub modes: Option<String>,
    pub eigenvectors: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SobolevConfig {
    pub function: Option<String>,
    pub cutoffs: Option<Vec<f64>>,
    pub k: Option<i32>,
    pub profile: Option<String>,
    pub samples: Option<PathBuf>,
    pub polar: Option<bool>,
    pub expect: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub pairs: Option<usize>,
    pub tolerance: Option<f64>,
    pub compact_tolerance: Option<f64>,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn config_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

/// A command's output: optional comment lines, a CSV table, the JSON
/// equivalent and whether every check passed.
struct Report {
    comments: Vec<String>,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Value,
    passed: bool,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                for c in &self.comments {
                    s.push_str("# ");
                    s.push_str(c);
                    s.push('\n');
                }
                s.push_str(&self.header.join(","));
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GridKind {
    Interval,
    Radial,
}

struct Settings {
    cli: Cli,
    cfg: RunConfig,
    seed: u64,
}

impl Settings {
    fn kind(&self) -> Result<GridKind, Failure> {
        let explicit = self.cli.grid.as_deref().or(self.cfg.grid.kind.as_deref());
        match explicit {
            Some("interval") => Ok(GridKind::Interval),
            Some("radial") => Ok(GridKind::Radial),
            Some(other) => Err(Failure::Config(format!("unknown grid kind `{other}`"))),
            None => {
                let bc = &self.cfg.bc;
                let radial = self.cli.bc_u.is_some()
                    || self.cli.modes.is_some()
                    || self.cfg.spectrum.modes.is_some()
                    || bc.u.is_some()
                    || bc.us.is_some()
                    || bc.random.is_some();
                Ok(if radial { GridKind::Radial } else { GridKind::Interval })
            }
        }
    }

    fn space(&self) -> Result<Space, Failure> {
        let g = &self.cfg.grid;
        let n = self.cli.n.or(g.n).unwrap_or(64);
        let scheme: Scheme = g.scheme.as_deref().map(str::parse).transpose().map_err(config_err)?.unwrap_or_default();
        let mapping: Mapping = g.mapping.as_deref().map(str::parse).transpose().map_err(config_err)?.unwrap_or_default();
        match self.kind()? {
            GridKind::Interval => {
                let (a, b) = (g.a.unwrap_or(0.0), g.b.unwrap_or(1.0));
                Ok(Space::interval(Grid1D::new(n, a, b, scheme, mapping).map_err(config_err)?))
            }
            GridKind::Radial => {
                let grid = RadialGrid::new(
                    n,
                    g.eps_min.unwrap_or(1e-3),
                    g.r_max.unwrap_or(1.0),
                    g.cutoffs.unwrap_or(5),
                    scheme,
                    mapping,
                )
                .map_err(config_err)?;
                Ok(Space::radial(grid))
            }
        }
    }

    fn format(&self) -> Format {
        self.cli.format.unwrap_or_default()
    }

    fn method(&self) -> Result<ConstraintMethod, Failure> {
        self.cli
            .method
            .as_deref()
            .or(self.cfg.spectrum.method.as_deref())
            .map(str::parse)
            .transpose()
            .map_err(config_err)
            .map(Option::unwrap_or_default)
    }

    fn count(&self) -> usize {
        self.cli.count.or(self.cfg.spectrum.count).unwrap_or(10)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn lambdas(&self) -> Vec<f64> {
        if let Some(l) = self.cli.bc_lambda {
            return vec![l];
        }
        let bc = &self.cfg.bc;
        bc.lambdas.clone().or(bc.lambda.map(|l| vec![l])).unwrap_or_else(|| vec![PI])
    }

    fn outer_1d(&self) -> Option<UnitaryBC> {
        self.cfg.bc.outer_lambda.map(UnitaryBC::from_lambda)
    }

    fn puncture_unitaries(&self) -> Result<Vec<UnitaryBC>, Failure> {
        let bc = &self.cfg.bc;
        let mut out = Vec::new();
        if let Some(v) = &self.cli.bc_u {
            let pairs: Vec<[f64; 2]> = v.chunks(2).map(|c| [c[0], c[1]]).collect();
            out.push(UnitaryBC::from_pairs(&pairs).map_err(config_err)?);
        } else if let Some(us) = &bc.us {
            for u in us {
                out.push(UnitaryBC::from_pairs(u).map_err(config_err)?);
            }
        } else if let Some(u) = &bc.u {
            out.push(UnitaryBC::from_pairs(u).map_err(config_err)?);
        }
        let mut rng = self.rng();
        for _ in 0..bc.random.unwrap_or(0) {
            out.push(UnitaryBC::random(2, &mut rng));
        }
        if out.is_empty() {
            out.push(UnitaryBC::identity(2));
        }
        Ok(out)
    }

    fn outer_2d(&self) -> Result<Option<UnitaryBC>, Failure> {
        self.cfg
            .bc
            .outer_u
            .as_ref()
            .map(|u| UnitaryBC::from_pairs(u).map_err(config_err))
            .transpose()
    }

    fn modes(&self) -> Result<(i32, i32), Failure> {
        let text = self.cli.modes.as_deref().or(self.cfg.spectrum.modes.as_deref()).unwrap_or("0..2");
        parse_modes(text).ok_or_else(|| Failure::Config(format!("bad mode range `{text}` (expected a..b)")))
    }
}

/// Parses an inclusive range `a..b` (or a single integer).
pub fn parse_modes(text: &str) -> Option<(i32, i32)> {
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().ok()?, b.trim().trim_start_matches('=').parse().ok()?),
        None => {
            let k = text.trim().parse().ok()?;
            (k, k)
        }
    };
    (lo <= hi).then_some((lo, hi))
}

fn status(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

fn check_row(name: &str, value: f64, tolerance: f64, ok: bool) -> (Vec<String>, Value) {
    (
        vec![name.to_string(), fmt_f64(value), fmt_f64(tolerance), status(ok)],
        json!({"check": name, "value": value, "tolerance": tolerance, "status": status(ok)}),
    )
}

fn info_row(name: &str, value: f64) -> (Vec<String>, Value) {
    (
        vec![name.to_string(), fmt_f64(value), String::new(), "info".to_string()],
        json!({"check": name, "value": value, "tolerance": null, "status": "info"}),
    )
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "" } else { "+" };
    format!("{}{sign}{}i", fmt_f64(z.re), fmt_f64(z.im))
}

fn domain_for(space: &Space) -> Domain {
    match space {
        Space::Interval(_) => Domain::Interval,
        Space::Radial(_) => Domain::RadialMode(0),
    }
}

/// The mixed-degree pair `α = (1 + s)` (0-form), `β = (1 + 2s) dr`.
fn mixed_degree_pair(space: &Space, domain: Domain) -> crate::Result<(FormField, FormField)> {
    let nodes = space.nodes();
    let (a, b) = (nodes[0], nodes[nodes.len() - 1]);
    let s = move |x: f64| (x - a) / (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let alpha = FormField::from_fn(space.clone(), domain, |c, x| {
        if c == Component::C0 { Complex64::new(1.0 + s(x), 0.0) } else { zero }
    })?;
    let beta = FormField::from_fn(space.clone(), domain, |c, x| match c {
        Component::C1x | Component::C1r => Complex64::new(1.0 + 2.0 * s(x), 0.0),
        _ => zero,
    })?;
    Ok((alpha, beta))
}

fn cmd_check_adjoint(st: &Settings) -> Result<Report, Failure> {
    let space = st.space()?;
    let domain = domain_for(&space);
    let metric = domain.metric();
    let pairs = st.cfg.check.pairs.unwrap_or(50);
    let tol = st.cfg.check.tolerance.unwrap_or(1e-6);
    let compact_tol = st.cfg.check.compact_tolerance.unwrap_or(1e-8);
    let mut rng = st.rng();
    let (mut formal, mut dirac, mut compact) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..pairs {
        let a = random_smooth(&space, domain, &mut rng)?;
        let b = random_smooth(&space, domain, &mut rng)?;
        formal = formal.max((green_residual(&a, &b, metric)? - green_boundary_term(&a, &b)?).norm());
        dirac = dirac.max((dirac_green_residual(&a, &b, metric)? - boundary_term(&a, &b)?).norm());
        let ca = random_compact(&space, domain, &mut rng)?;
        let cb = random_compact(&space, domain, &mut rng)?;
        compact = compact.max(green_residual(&ca, &cb, metric)?.norm());
    }
    let (alpha, beta) = mixed_degree_pair(&space, domain)?;
    let mixed = boundary_term(&alpha, &beta)?;
    let mixed_gap = (dirac_green_residual(&alpha, &beta, metric)? - mixed).norm();

    let checks = [
        check_row("formal-green-vs-trace", formal, tol, formal <= tol),
        check_row("dirac-green-vs-boundary-form", dirac, tol, dirac <= tol),
        check_row("compact-support-residual", compact, compact_tol, compact <= compact_tol),
        check_row("mixed-degree-boundary-term", mixed.norm(), tol, mixed.norm() > tol),
        check_row("mixed-degree-consistency", mixed_gap, tol, mixed_gap <= tol),
    ];
    let passed = checks.iter().all(|(row, _)| row[3] == "pass");
    Ok(Report {
        comments: vec![format!(
            "domain={domain} nodes={} scheme={} pairs={pairs} seed={}",
            space.len(),
            space.grid().scheme(),
            st.seed
        )],
        header: vec!["check", "value", "tolerance", "status"],
        rows: checks.iter().map(|(r, _)| r.clone()).collect(),
        json: json!({
            "domain": domain.to_string(),
            "nodes": space.len(),
            "seed": st.seed,
            "checks": checks.iter().map(|(_, j)| j.clone()).collect::<Vec<_>>(),
            "passed": passed,
        }),
        passed,
    })
}

fn verdict_comment(v: &MembershipVerdict) -> String {
    let mut s = format!("verdict={}", v.verdict);
    if let Some(fit) = &v.divergence_rate {
        s.push_str(&format!(
            " rate={} slope={} intercept={} r_squared={}",
            fit.rate,
            fmt_f64(fit.slope),
            fmt_f64(fit.intercept),
            fmt_f64(fit.r_squared)
        ));
    }
    if let Some(limit) = v.limit_estimate {
        s.push_str(&format!(" limit={}", fmt_f64(limit)));
    }
    s
}

fn parse_verdict(s: &str) -> Result<Verdict, Failure> {
    match s {
        "in-H1" | "in-h1" => Ok(Verdict::InH1),
        "not-in-H1" | "not-in-h1" => Ok(Verdict::NotInH1),
        "inconclusive" => Ok(Verdict::Inconclusive),
        other => Err(Failure::Config(format!("unknown verdict `{other}`"))),
    }
}

fn cmd_sobolev_check(st: &Settings) -> Result<Report, Failure> {
    let sc = &st.cfg.sobolev;
    let expect = st.cli.expect.as_deref().or(sc.expect.as_deref()).map(parse_verdict).transpose()?;
    let samples = st.cli.samples.as_ref().or(sc.samples.as_ref());
    let (label, verdict) = if let Some(path) = samples {
        let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let profile = SampledProfile::from_csv(&text, sc.polar.unwrap_or(false)).map_err(config_err)?;
        let cutoffs = sc.cutoffs.clone().unwrap_or_else(|| profile.default_cutoffs(5));
        (path.display().to_string(), profile.diagnose(&cutoffs)?)
    } else {
        let name = st.cli.function.as_deref().or(sc.function.as_deref()).unwrap_or("sqrt-x");
        let profile: ModeProfile = sc.profile.as_deref().map(str::parse).transpose().map_err(config_err)?.unwrap_or_default();
        let builtin = Builtin::parse(name, profile, sc.k.unwrap_or(1)).map_err(config_err)?;
        let cutoffs = sc.cutoffs.clone().unwrap_or_else(Builtin::default_cutoffs);
        let v = builtin.diagnose(&cutoffs).map_err(|e| match e {
            Error::TooFewCutoffs { .. } | Error::Config(_) | Error::UnresolvedCutoff(_) => config_err(e),
            other => other.into(),
        })?;
        (name.to_string(), v)
    };
    let passed = expect.is_none_or(|e| e == verdict.verdict);
    let mut comments = vec![format!("function={label}")];
    comments.push(verdict_comment(&verdict));
    Ok(Report {
        comments,
        header: vec!["cutoff", "seminorm"],
        rows: verdict
            .cutoffs
            .iter()
            .zip(&verdict.seminorm_sequence)
            .map(|(c, s)| vec![fmt_f64(*c), fmt_f64(*s)])
            .collect(),
        json: json!({"function": label, "diagnostic": verdict, "passed": passed}),
        passed,
    })
}

fn parse_trace(v: &[f64], pairs: usize) -> Result<TraceVector, Failure> {
    if v.len() != 4 * pairs {
        return Err(Failure::Config(format!(
            "trace needs {} numbers (re im per entry), got {}",
            4 * pairs,
            v.len()
        )));
    }
    let values = v.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let kind = if pairs == 1 { TraceKind::Endpoint1d } else { TraceKind::Puncture2d };
    TraceVector::new(kind, values).map_err(config_err)
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn cmd_boundary_form(st: &Settings) -> Result<Report, Failure> {
    let bc = if st.cli.bc_u.is_some() || st.cfg.bc.u.is_some() {
        st.puncture_unitaries()?.remove(0)
    } else {
        UnitaryBC::from_lambda(st.lambdas()[0])
    };
    let d = bc.dim();
    let basis = bc_subspace(&bc);
    let j = form_matrix(d);
    let mut rng = st.rng();
    let trials = 20;
    let mut isotropy = 0.0_f64;
    let mut straddle = f64::INFINITY;
    for _ in 0..trials {
        let ca = DMatrix::from_fn(d, 1, |_, _| random_complex(&mut rng));
        let cb = DMatrix::from_fn(d, 1, |_, _| random_complex(&mut rng));
        let (ta, tb) = (&basis * ca, &basis * cb);
        isotropy = isotropy.max((ta.adjoint() * &j * &tb)[(0, 0)].norm());
        // a trace with a component outside the subspace pairs nontrivially
        let t = DMatrix::from_fn(2 * d, 1, |_, _| random_complex(&mut rng));
        let inside = &basis * (basis.adjoint() * &t);
        let outside = &t - inside;
        let scale = outside.norm();
        let pairing = (basis.adjoint() * &j * &t).norm() / scale.max(f64::MIN_POSITIVE);
        straddle = straddle.min(pairing);
    }
    let rank = (basis.adjoint() * &j).rank(1e-10);
    let mut checks = vec![
        check_row("isotropy-max", isotropy, 1e-12, isotropy <= 1e-12),
        check_row("maximality-rank", rank as f64, d as f64, rank == d),
        check_row("straddle-pairing-min", straddle, 1e-8, straddle > 1e-8),
    ];
    if let Some(a) = &st.cli.alpha {
        let ta = parse_trace(a, d)?;
        checks.push(info_row("cayley-residual-alpha", cayley_residual(&ta, &bc)?));
        if let Some(b) = &st.cli.beta {
            let tb = parse_trace(b, d)?;
            let s = boundary_form(&ta, &tb)?;
            checks.push(info_row("sigma-re", s.re));
            checks.push(info_row("sigma-im", s.im));
        }
    }
    let passed = checks.iter().all(|(r, _)| r[3] != "fail");
    let basis_rows: Vec<Vec<[f64; 2]>> = (0..basis.ncols())
        .map(|c| basis.column(c).iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let mut comments = vec![format!("dimension={d} seed={}", st.seed)];
    comments.push(format!(
        "u={}",
        bc.to_pairs().iter().map(|p| fmt_complex(Complex64::new(p[0], p[1]))).collect::<Vec<_>>().join(";")
    ));
    for (i, col) in basis_rows.iter().enumerate() {
        let entries: Vec<String> = col.iter().map(|p| fmt_complex(Complex64::new(p[0], p[1]))).collect();
        comments.push(format!("basis[{i}]=({})", entries.join(", ")));
    }
    Ok(Report {
        comments,
        header: vec!["check", "value", "tolerance", "status"],
        rows: checks.iter().map(|(r, _)| r.clone()).collect(),
        json: json!({
            "dimension": d,
            "u": bc.to_pairs(),
            "basis": basis_rows,
            "checks": checks.iter().map(|(_, j)| j.clone()).collect::<Vec<_>>(),
            "passed": passed,
        }),
        passed,
    })
}

fn field_json(f: &FormField) -> Value {
    let comps: serde_json::Map<String, Value> = f
        .domain()
        .components()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let vals: Vec<[f64; 2]> = f.component_by_index(ci).iter().map(|z| [z.re, z.im]).collect();
            (c.label().to_string(), json!(vals))
        })
        .collect();
    json!({"nodes": f.space().nodes(), "components": comps})
}

fn bc_description(u: &UnitaryBC) -> String {
    match u.label() {
        Some(l) => format!("lambda={}", fmt_f64(l)),
        None => format!(
            "u=[{}]",
            u.to_pairs().iter().map(|p| format!("[{},{}]", fmt_f64(p[0]), fmt_f64(p[1]))).collect::<Vec<_>>().join(",")
        ),
    }
}

fn cmd_spectrum(st: &Settings) -> Result<Report, Failure> {
    let space = st.space()?;
    let method = st.method()?;
    let count = st.count();
    let with_vectors = st.cli.eigenvectors || st.cfg.spectrum.eigenvectors.unwrap_or(false);
    let mut runs: Vec<(Option<i32>, usize, UnitaryBC, SpectrumResult)> = Vec::new();
    match space {
        Space::Interval(_) => {
            let outer = st.outer_1d();
            let op = assemble_operator(&space, Domain::Interval)?;
            for (id, l) in st.lambdas().into_iter().enumerate() {
                let u = UnitaryBC::from_lambda(l);
                let r = solve_spectrum(&impose_bc(&op, &u, outer.as_ref(), method)?, count)?;
                runs.push((None, id, u, r));
            }
        }
        Space::Radial(_) => {
            let (lo, hi) = st.modes()?;
            let unitaries = st.puncture_unitaries()?;
            let outer = st.outer_2d()?;
            for k in lo..=hi {
                let op = assemble_operator(&space, Domain::RadialMode(k))?;
                for (id, u) in unitaries.iter().enumerate() {
                    let c = impose_bc(&op, &mode_inner_bc(k, u), outer.as_ref(), method)?;
                    runs.push((Some(k), id, u.clone(), solve_spectrum(&c, count)?));
                }
            }
        }
    }
    let mut comments = vec![format!(
        "domain={} nodes={} method={method} count={count}",
        if matches!(space, Space::Interval(_)) { "interval" } else { "radial" },
        space.len()
    )];
    let mut seen = Vec::new();
    for (_, id, u, _) in &runs {
        if !seen.contains(id) {
            seen.push(*id);
            comments.push(format!("bc_id={id} {}", bc_description(u)));
        }
    }
    let mut rows = Vec::new();
    let mut spectra = Vec::new();
    for (k, id, u, r) in &runs {
        let mode = k.map(|k| k.to_string()).unwrap_or_default();
        comments.push(format!(
            "mode_k={mode} bc_id={id} zero_modes={} max_imag={}",
            r.zero_modes.len(),
            fmt_f64(r.max_imag)
        ));
        for (i, e) in r.eigenvalues.iter().enumerate() {
            rows.push(vec![mode.clone(), id.to_string(), i.to_string(), fmt_f64(*e), fmt_f64(r.symmetry_defect)]);
        }
        let mut entry = json!({
            "mode_k": k,
            "bc_id": id,
            "bc": {"u": u.to_pairs(), "lambda": u.label()},
            "eigenvalues": r.eigenvalues,
            "symmetry_defect": r.symmetry_defect,
            "max_imag": r.max_imag,
            "zero_modes": r.zero_modes.len(),
            "method": r.method.name(),
            "nodes": r.nodes,
        });
        if with_vectors {
            entry["eigenvectors"] = Value::Array(r.eigenvectors.iter().map(field_json).collect());
            entry["zero_mode_vectors"] = Value::Array(r.zero_modes.iter().map(field_json).collect());
        }
        spectra.push(entry);
    }
    Ok(Report {
        comments,
        header: vec!["mode_k", "bc_id", "eigen_index", "eigenvalue", "symmetry_defect"],
        rows,
        json: json!({"spectra": spectra}),
        passed: true,
    })
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig, Failure> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("{SEED_VAR} must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(0),
    }
}

fn execute(cli: Cli) -> Result<(Report, Option<PathBuf>, Format), Failure> {
    let cfg = load_config(cli.config.as_ref())?;
    let seed = seed_from_env()?;
    let st = Settings { cli, cfg, seed };
    let report = match st.cli.command {
        Command::CheckAdjoint => cmd_check_adjoint(&st)?,
        Command::SobolevCheck => cmd_sobolev_check(&st)?,
        Command::BoundaryForm => cmd_boundary_form(&st)?,
        Command::Spectrum => cmd_spectrum(&st)?,
    };
    Ok((report, st.cli.out.clone(), st.format()))
}

/// Runs the CLI on `args` (program name first); returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok((report, out, format)) => {
            let text = report.render(format);
            let written = match out {
                Some(path) => fs::write(&path, text),
                None => io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return 1;
            }
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_ranges() {
        assert_eq!(parse_modes("0..2"), Some((0, 2)));
        assert_eq!(parse_modes("-2..=1"), Some((-2, 1)));
        assert_eq!(parse_modes("3"), Some((3, 3)));
        assert_eq!(parse_modes("2..0"), None);
        assert_eq!(parse_modes("a..b"), None);
    }

    #[test]
    fn config_tables_parse() {
        let cfg: RunConfig = toml::from_str(
            r#"
            [grid]
            kind = "radial"
            n = 32
            eps_min = 1e-3
            R = 1.0
            [bc]
            u = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
            [spectrum]
            count = 5
            modes = "0..2"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.grid.r_max, Some(1.0));
        assert_eq!(cfg.bc.u.unwrap().len(), 4);
        assert!(toml::from_str::<RunConfig>("[grid]\nbogus = 1\n").is_err());
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from([
            "dk", "spectrum", "--bc.u", "1", "0", "0", "0", "0", "0", "-1", "0", "--modes", "-1..1",
        ])
        .unwrap();
        assert_eq!(cli.bc_u.unwrap().len(), 8);
        assert_eq!(cli.modes.as_deref(), Some("-1..1"));
        assert!(Cli::try_parse_from(["dk", "spectrum", "--bc.u", "1", "0"]).is_err());
    }
}
