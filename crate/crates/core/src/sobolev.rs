//! Numerical H¹ membership diagnostics for functions singular at a point.
//!
//! The truncated seminorm `S(c) = ∫_{c}^{…} |∇f|²` is evaluated along a
//! decreasing cutoff sequence and the sequence is classified:
//!
//! 1. *Cauchy*: the last increment is below `1e-3 · S` and increments shrink.
//! 2. *Slow convergence*: increments fit `S = A - B L^{-q}` with
//!    `L = ln(1/c)` and `q ≥ 0.1`, and the limits `A` extrapolated from
//!    successive triples agree to `1e-3` relative.
//! 3. *Divergence*: the best growing fit of `S` against `ln(1/c)` or
//!    `c^{-p}` (`p ∈ {0.5, 1, 2}`) with `R² > 0.99`.
//!
//! Anything else is inconclusive.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grids::{Grid1D, Mapping, Scheme};

pub const CAUCHY_TOLERANCE: f64 = 1e-3;
pub const MIN_R_SQUARED: f64 = 0.99;
pub const MIN_TAIL_EXPONENT: f64 = 0.1;
pub const POWER_RATES: [f64; 3] = [0.5, 1.0, 2.0];
/// Nodes of the log-mapped quadrature used on smooth regions.
pub const QUADRATURE_NODES: usize = 96;
const MAX_RESOLVED_CELLS: f64 = 5e7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "in-H1")]
    InH1,
    #[serde(rename = "not-in-H1")]
    NotInH1,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::InH1 => "in-H1",
            Verdict::NotInH1 => "not-in-H1",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthRate {
    Log,
    Power(f64),
}

impl fmt::Display for GrowthRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthRate::Log => f.write_str("log"),
            GrowthRate::Power(p) => write!(f, "power({p})"),
        }
    }
}

/// `S ≈ intercept + slope · X(c)` with `X = ln(1/c)` or `c^{-p}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub rate: GrowthRate,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub cutoffs: Vec<f64>,
    pub seminorm_sequence: Vec<f64>,
    pub divergence_rate: Option<RateFit>,
    /// Estimated `c → 0` limit of the seminorm for convergent sequences.
    pub limit_estimate: Option<f64>,
}

/// Where the seminorm is integrated; the singular point sits at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// `∫_c^end |f'|² dx`.
    Interval { end: f64 },
    /// `2π ∫_c^radius (|f'|² + k² |f|²/r²) r dr` for `f(r) e^{ikθ}`.
    Disk { radius: f64, k: i32 },
    /// Finite differences on the uniform grid of spacing `c` over `[a, b]`;
    /// the cutoff is the sample resolution.
    Resolved { a: f64, b: f64 },
}

fn log_grid(c: f64, end: f64) -> Result<Grid1D> {
    if !(c > 0.0 && c < end) {
        return Err(Error::UnresolvedCutoff(c));
    }
    Grid1D::new(QUADRATURE_NODES, c, end, Scheme::LegendreGaussLobatto, Mapping::Logarithmic)
}

pub fn h1_seminorm_truncated(f: &dyn Fn(f64) -> f64, cutoff: f64, region: Region) -> Result<f64> {
    match region {
        Region::Interval { end } => {
            let g = log_grid(cutoff, end)?;
            let df = g.derivative_real(&g.sample(f));
            Ok(g.integrate(&df.iter().map(|d| d * d).collect::<Vec<_>>()))
        }
        Region::Disk { radius, k } => {
            let g = log_grid(cutoff, radius)?;
            let v = g.sample(f);
            let df = g.derivative_real(&v);
            let k2 = (k as f64).powi(2);
            let integrand: Vec<f64> = g
                .nodes()
                .iter()
                .zip(v.iter().zip(&df))
                .map(|(r, (fv, d))| (d * d + k2 * fv * fv / (r * r)) * r)
                .collect();
            Ok(2.0 * PI * g.integrate(&integrand))
        }
        Region::Resolved { a, b } => {
            let cells = (b - a) / cutoff;
            if cutoff.is_nan() || cutoff <= 0.0 || !(4.0..=MAX_RESOLVED_CELLS).contains(&cells.round()) {
                return Err(Error::UnresolvedCutoff(cutoff));
            }
            let n = cells.round() as usize;
            let h = (b - a) / n as f64;
            let mut prev = f(a);
            let mut sum = 0.0;
            for j in 1..=n {
                let next = f(a + j as f64 * h);
                sum += (next - prev).powi(2);
                prev = next;
            }
            Ok(sum / h)
        }
    }
}

/// User-supplied samples `(x_j, f(x_j))`, singular point at `x = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledProfile {
    x: Vec<f64>,
    f: Vec<f64>,
    polar: bool,
}

impl SampledProfile {
    /// `polar` integrates with the measure `2π r dr`.
    pub fn new(x: Vec<f64>, f: Vec<f64>, polar: bool) -> Result<Self> {
        if x.len() != f.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: f.len(),
            });
        }
        if x.len() < 3 {
            return Err(Error::TooFewSamples {
                needed: 3,
                got: x.len(),
            });
        }
        if !x.windows(2).all(|w| w[1] > w[0]) || x[0] < 0.0 {
            return Err(Error::Config("sample abscissae must be non-negative and increasing".into()));
        }
        Ok(Self { x, f, polar })
    }

    /// Reads `x,f` rows; a non-numeric first line is taken as a header.
    pub fn from_csv(text: &str, polar: bool) -> Result<Self> {
        let mut x = Vec::new();
        let mut f = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let parsed = match (cols.next(), cols.next()) {
                (Some(a), Some(b)) => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
                _ => None,
            };
            match parsed {
                Some((a, b)) => {
                    x.push(a);
                    f.push(b);
                }
                None if x.is_empty() && i == 0 => continue,
                None => return Err(Error::Config(format!("bad sample row {}: {line}", i + 1))),
            }
        }
        Self::new(x, f, polar)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Seminorm of the piecewise-linear interpolant on `x ≥ cutoff`.
    pub fn seminorm(&self, cutoff: f64) -> Result<f64> {
        if cutoff < self.x[0] {
            return Err(Error::UnresolvedCutoff(cutoff));
        }
        let start = self.x.partition_point(|&v| v < cutoff);
        if self.x.len() - start < 3 {
            return Err(Error::UnresolvedCutoff(cutoff));
        }
        Ok((start + 1..self.x.len())
            .map(|j| {
                let dx = self.x[j] - self.x[j - 1];
                let df = self.f[j] - self.f[j - 1];
                let measure = if self.polar {
                    PI * (self.x[j] + self.x[j - 1])
                } else {
                    1.0
                };
                df * df / dx * measure
            })
            .sum())
    }

    /// Geometric cutoffs from the data: `m` values between `x_1`-ish and a
    /// quarter of the sample range.
    pub fn default_cutoffs(&self, m: usize) -> Vec<f64> {
        let first = self.x.iter().copied().find(|&v| v > 0.0).unwrap_or(self.x[1]);
        let last = self.x[self.x.len() - 1] / 4.0;
        geometric(last, first.max(last * 1e-12), m)
    }

    pub fn diagnose(&self, cutoffs: &[f64]) -> Result<MembershipVerdict> {
        check_cutoffs(cutoffs)?;
        let seq = cutoffs.iter().map(|&c| self.seminorm(c)).collect::<Result<Vec<_>>>()?;
        Ok(classify(cutoffs, &seq))
    }
}

/// `m` geometrically spaced values from `hi` down to `lo`.
pub fn geometric(hi: f64, lo: f64, m: usize) -> Vec<f64> {
    if m < 2 {
        return vec![hi];
    }
    let ratio = (lo / hi).powf(1.0 / (m - 1) as f64);
    (0..m).map(|j| if j == m - 1 { lo } else { hi * ratio.powi(j as i32) }).collect()
}

fn check_cutoffs(cutoffs: &[f64]) -> Result<()> {
    if cutoffs.len() < 4 {
        return Err(Error::TooFewCutoffs {
            needed: 4,
            got: cutoffs.len(),
        });
    }
    if !cutoffs.windows(2).all(|w| w[1] < w[0]) || cutoffs[cutoffs.len() - 1] <= 0.0 {
        return Err(Error::Config("cutoffs must be positive and strictly decreasing".into()));
    }
    Ok(())
}

pub fn membership_diagnostic(
    f: &dyn Fn(f64) -> f64,
    cutoffs: &[f64],
    region: Region,
) -> Result<MembershipVerdict> {
    check_cutoffs(cutoffs)?;
    let seq = cutoffs
        .iter()
        .map(|&c| h1_seminorm_truncated(f, c, region))
        .collect::<Result<Vec<_>>>()?;
    Ok(classify(cutoffs, &seq))
}

/// Seminorm of the mode field `f(r) e^{ikθ}` on the disk of `radius`.
pub fn h1_mode_seminorm(
    f: &dyn Fn(f64) -> f64,
    k: i32,
    cutoffs: &[f64],
    radius: f64,
) -> Result<MembershipVerdict> {
    membership_diagnostic(f, cutoffs, Region::Disk { radius, k })
}

/// Classifies a seminorm sequence taken along decreasing `cutoffs`.
pub fn classify(cutoffs: &[f64], seq: &[f64]) -> MembershipVerdict {
    let verdict = |verdict, rate, limit| MembershipVerdict {
        verdict,
        cutoffs: cutoffs.to_vec(),
        seminorm_sequence: seq.to_vec(),
        divergence_rate: rate,
        limit_estimate: limit,
    };
    let last = seq[seq.len() - 1];
    if seq.iter().any(|s| !s.is_finite()) {
        return verdict(Verdict::Inconclusive, None, None);
    }
    if is_cauchy(seq) {
        return verdict(Verdict::InH1, None, Some(last));
    }
    if let Some(limit) = tail_limit(cutoffs, seq) {
        return verdict(Verdict::InH1, None, Some(limit));
    }
    match best_growth_fit(cutoffs, seq) {
        Some(fit) => verdict(Verdict::NotInH1, Some(fit), None),
        None => verdict(Verdict::Inconclusive, None, None),
    }
}

fn is_cauchy(seq: &[f64]) -> bool {
    let inc: Vec<f64> = seq.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last = seq[seq.len() - 1].abs();
    let floor = 1e-12 * seq.iter().fold(1.0_f64, |m, s| m.max(s.abs()));
    let shrinking = inc.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-6) + floor);
    shrinking && inc[inc.len() - 1] <= CAUCHY_TOLERANCE * last + floor
}

/// Tail families `S = A - B t(c)` with `t → 0` as `c → 0`: logarithmic
/// `t = (ln 1/c)^{-q}` and algebraic `t = c^q`.
#[derive(Clone, Copy)]
enum Tail {
    Logarithmic,
    Algebraic,
}

impl Tail {
    fn variable(self, c: f64) -> f64 {
        match self {
            Tail::Logarithmic => (1.0 / c).ln(),
            Tail::Algebraic => c,
        }
    }

    /// `t(v)`, continued to `±ln v` at `q = 0` for the ratio below.
    fn basis(self, v: f64, q: f64) -> f64 {
        match self {
            Tail::Logarithmic if q.abs() < 1e-12 => -v.ln(),
            Tail::Logarithmic => v.powf(-q),
            Tail::Algebraic if q.abs() < 1e-12 => v.ln(),
            Tail::Algebraic => v.powf(q),
        }
    }

    fn exponent_range(self) -> (f64, f64) {
        match self {
            Tail::Logarithmic => (-4.0, 40.0),
            Tail::Algebraic => (-2.0, 20.0),
        }
    }
}

/// Ratio of consecutive increments of `t` over three levels.
fn increment_ratio(tail: Tail, v: [f64; 3], q: f64) -> f64 {
    (tail.basis(v[1], q) - tail.basis(v[2], q)) / (tail.basis(v[0], q) - tail.basis(v[1], q))
}

/// Solves `increment_ratio = target` for `q` by bisection.
fn solve_tail_exponent(tail: Tail, v: [f64; 3], target: f64) -> Option<f64> {
    let (mut lo, mut hi) = tail.exponent_range();
    let g = |q: f64| increment_ratio(tail, v, q) - target;
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo.is_finite() && ghi.is_finite()) || glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Limit of `S = A - B t(c)` fitted to each consecutive triple; returns
/// the last estimate when all triples agree and `q ≥ MIN_TAIL_EXPONENT`.
fn tail_limit_in(tail: Tail, cutoffs: &[f64], seq: &[f64]) -> Option<f64> {
    let v: Vec<f64> = cutoffs.iter().map(|&c| tail.variable(c)).collect();
    let inc: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
    let mut limits = Vec::new();
    for j in 1..seq.len() - 1 {
        let triple = [v[j - 1], v[j], v[j + 1]];
        let q = solve_tail_exponent(tail, triple, inc[j] / inc[j - 1])?;
        if q < MIN_TAIL_EXPONENT {
            return None;
        }
        let b = inc[j] / (tail.basis(triple[1], q) - tail.basis(triple[2], q));
        limits.push(seq[j + 1] + b * tail.basis(triple[2], q));
    }
    let a = *limits.last()?;
    let spread = limits.iter().map(|x| (x - a).abs()).fold(0.0, f64::max);
    (spread <= CAUCHY_TOLERANCE * a.abs()).then_some(a)
}

fn tail_limit(cutoffs: &[f64], seq: &[f64]) -> Option<f64> {
    if cutoffs.iter().any(|&c| c >= 1.0) {
        return None;
    }
    let inc: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
    if !(inc.iter().all(|&d| d > 0.0) || inc.iter().all(|&d| d < 0.0)) {
        return None;
    }
    tail_limit_in(Tail::Algebraic, cutoffs, seq).or_else(|| tail_limit_in(Tail::Logarithmic, cutoffs, seq))
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 0.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

fn best_growth_fit(cutoffs: &[f64], seq: &[f64]) -> Option<RateFit> {
    let log_x: Vec<f64> = cutoffs.iter().map(|c| (1.0 / c).ln()).collect();
    let mut candidates = vec![(GrowthRate::Log, log_x)];
    for p in POWER_RATES {
        candidates.push((GrowthRate::Power(p), cutoffs.iter().map(|c| c.powf(-p)).collect()));
    }
    candidates
        .into_iter()
        .filter_map(|(rate, x)| {
            let (slope, intercept, r_squared) = linear_fit(&x, seq);
            (slope > 0.0 && r_squared > MIN_R_SQUARED).then_some(RateFit {
                rate,
                slope,
                intercept,
                r_squared,
            })
        })
        .max_by(|a, b| a.r_squared.total_cmp(&b.r_squared))
}

/// Radial profile used by the `mode-profile` builtin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeProfile {
    #[default]
    One,
    Linear,
    LogThird,
}

impl ModeProfile {
    pub fn eval(self, r: f64) -> f64 {
        match self {
            ModeProfile::One => 1.0,
            ModeProfile::Linear => r,
            ModeProfile::LogThird => r.ln().cbrt(),
        }
    }
}

impl FromStr for ModeProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" | "constant" => Ok(ModeProfile::One),
            "r" | "linear" => Ok(ModeProfile::Linear),
            "log-third-r" | "log-third" => Ok(ModeProfile::LogThird),
            other => Err(Error::Config(format!("unknown mode profile `{other}`"))),
        }
    }
}

/// The worked examples: `√x` on (0,1), the Heaviside step at 1/2,
/// `log^{1/3} r` on the disk of radius 1/2 and mode profiles `f(r) e^{ikθ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    SqrtX,
    Heaviside,
    LogThirdR,
    ModeProfile { profile: ModeProfile, k: i32 },
}

/// Radius of the disk used for `log^{1/3} r`; its gradient is not square
/// integrable up to `r = 1`.
pub const LOG_THIRD_RADIUS: f64 = 0.5;

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::SqrtX => "sqrt-x",
            Builtin::Heaviside => "heaviside",
            Builtin::LogThirdR => "log-third-r",
            Builtin::ModeProfile { .. } => "mode-profile",
        }
    }

    pub fn parse(name: &str, profile: ModeProfile, k: i32) -> Result<Self> {
        match name {
            "sqrt-x" => Ok(Builtin::SqrtX),
            "heaviside" => Ok(Builtin::Heaviside),
            "log-third-r" => Ok(Builtin::LogThirdR),
            "mode-profile" => Ok(Builtin::ModeProfile { profile, k }),
            other => Err(Error::Config(format!("unknown function `{other}`"))),
        }
    }

    pub fn region(self) -> Region {
        match self {
            Builtin::SqrtX => Region::Interval { end: 1.0 },
            Builtin::Heaviside => Region::Resolved { a: 0.0, b: 1.0 },
            Builtin::LogThirdR => Region::Disk {
                radius: LOG_THIRD_RADIUS,
                k: 0,
            },
            Builtin::ModeProfile { profile, k } => Region::Disk {
                radius: if profile == ModeProfile::LogThird { LOG_THIRD_RADIUS } else { 1.0 },
                k,
            },
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Builtin::SqrtX => x.sqrt(),
            Builtin::Heaviside => {
                if x >= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            Builtin::LogThirdR => x.ln().cbrt(),
            Builtin::ModeProfile { profile, .. } => profile.eval(x),
        }
    }

    pub fn default_cutoffs() -> Vec<f64> {
        geometric(1e-2, 1e-6, 5)
    }

    pub fn diagnose(self, cutoffs: &[f64]) -> Result<MembershipVerdict> {
        membership_diagnostic(&|x| self.eval(x), cutoffs, self.region())
    }
}
