//! One-dimensional collocation grids and radial grids on `[eps_min, R]`.
//!
//! Every grid carries nodes (endpoints included), positive quadrature
//! weights and a dense differentiation matrix. The Legendre-Gauss-Lobatto
//! and uniform-trapezoid schemes satisfy the summation-by-parts identity
//! `W D + Dᵀ W = diag(-1, 0, …, 0, 1)` exactly, which makes the discrete
//! Dirac-Kähler operator symmetric up to pure boundary terms. The
//! Chebyshev/Clenshaw-Curtis pair does not have that property.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible node count.
pub const MIN_NODES: usize = 4;
/// Smallest admissible length of the puncture cutoff sequence.
pub const MIN_CUTOFFS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[derive(Default)]
pub enum Scheme {
    /// Equispaced nodes, trapezoid weights, second-order SBP differences.
    UniformTrapezoid,
    /// Chebyshev-Gauss-Lobatto nodes with Clenshaw-Curtis weights.
    ChebyshevClenshawCurtis,
    /// Legendre-Gauss-Lobatto nodes and weights.
    #[default]
    LegendreGaussLobatto,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::UniformTrapezoid => "uniform-trapezoid",
            Scheme::ChebyshevClenshawCurtis => "chebyshev-clenshaw-curtis",
            Scheme::LegendreGaussLobatto => "legendre-gauss-lobatto",
        }
    }

    /// Whether `W D + Dᵀ W` is exactly the boundary matrix.
    pub fn is_summation_by_parts(self) -> bool {
        !matches!(self, Scheme::ChebyshevClenshawCurtis)
    }
}


impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform-trapezoid" => Ok(Scheme::UniformTrapezoid),
            "chebyshev" | "chebyshev-clenshaw-curtis" => Ok(Scheme::ChebyshevClenshawCurtis),
            "lgl" | "legendre" | "legendre-gauss-lobatto" => Ok(Scheme::LegendreGaussLobatto),
            other => Err(Error::Config(format!("unknown grid scheme `{other}`"))),
        }
    }
}

/// How reference nodes on `[-1, 1]` are placed in physical space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mapping {
    /// `x = a + (ξ + 1)(b - a)/2`.
    #[default]
    Affine,
    /// `ln x` is affine in `ξ`; needs `a > 0`. Resolves `log` and power-law
    /// behaviour near `a`. SBP is preserved because `W` and `D` pick up
    /// reciprocal Jacobians.
    Logarithmic,
}

impl FromStr for Mapping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affine" | "linear" => Ok(Mapping::Affine),
            "log" | "logarithmic" => Ok(Mapping::Logarithmic),
            other => Err(Error::Config(format!("unknown grid mapping `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Grid1D {
    a: f64,
    b: f64,
    scheme: Scheme,
    mapping: Mapping,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    diff: DMatrix<f64>,
    reference: Vec<f64>,
    barycentric: Vec<f64>,
}

/// Builds an affine grid on `[a, b]`.
pub fn make_grid_1d(n: usize, a: f64, b: f64, scheme: Scheme) -> Result<Grid1D> {
    Grid1D::new(n, a, b, scheme, Mapping::Affine)
}

impl Grid1D {
    pub fn new(n: usize, a: f64, b: f64, scheme: Scheme, mapping: Mapping) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::TooFewNodes(n, MIN_NODES));
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval(a, b));
        }
        if mapping == Mapping::Logarithmic && a <= 0.0 {
            return Err(Error::InvalidInterval(a, b));
        }

        let (reference, ref_weights, ref_diff) = match scheme {
            Scheme::UniformTrapezoid => uniform_reference(n),
            Scheme::ChebyshevClenshawCurtis => {
                let xi = chebyshev_lobatto_nodes(n);
                let w = clenshaw_curtis_weights(n);
                let d = barycentric_diff(&xi, &barycentric_weights(&xi));
                (xi, w, d)
            }
            Scheme::LegendreGaussLobatto => {
                let (xi, w) = legendre_lobatto(n);
                let d = barycentric_diff(&xi, &barycentric_weights(&xi));
                (xi, w, d)
            }
        };
        let barycentric = match scheme {
            Scheme::UniformTrapezoid => Vec::new(),
            _ => barycentric_weights(&reference),
        };

        let (nodes, weights, diff) = match mapping {
            Mapping::Affine => {
                let half = 0.5 * (b - a);
                let mut nodes: Vec<f64> = reference.iter().map(|xi| a + (xi + 1.0) * half).collect();
                nodes[0] = a;
                nodes[n - 1] = b;
                let weights = ref_weights.iter().map(|w| w * half).collect();
                (nodes, weights, ref_diff / half)
            }
            Mapping::Logarithmic => {
                let (la, lb) = (a.ln(), b.ln());
                let half = 0.5 * (lb - la);
                let mut nodes: Vec<f64> =
                    reference.iter().map(|xi| (la + (xi + 1.0) * half).exp()).collect();
                nodes[0] = a;
                nodes[n - 1] = b;
                let weights = ref_weights
                    .iter()
                    .zip(&nodes)
                    .map(|(w, x)| w * half * x)
                    .collect();
                let mut diff = ref_diff / half;
                for (i, x) in nodes.iter().enumerate() {
                    let mut row = diff.row_mut(i);
                    row /= *x;
                }
                (nodes, weights, diff)
            }
        };

        Ok(Self {
            a,
            b,
            scheme,
            mapping,
            nodes,
            weights,
            diff,
            reference,
            barycentric,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn mapping(&self) -> Mapping {
        self.mapping
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn diff_matrix(&self) -> &DMatrix<f64> {
        &self.diff
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn integrate_complex(&self, values: &[Complex64]) -> Complex64 {
        self.weights.iter().zip(values).map(|(w, v)| v * *w).sum()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    pub fn derivative(&self, values: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| values[j] * self.diff[(i, j)]).sum())
            .collect()
    }

    pub fn derivative_real(&self, values: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| values[j] * self.diff[(i, j)]).sum())
            .collect()
    }

    fn to_reference(&self, x: f64) -> f64 {
        match self.mapping {
            Mapping::Affine => 2.0 * (x - self.a) / (self.b - self.a) - 1.0,
            Mapping::Logarithmic => {
                let (la, lb) = (self.a.ln(), self.b.ln());
                2.0 * (x.ln() - la) / (lb - la) - 1.0
            }
        }
    }

    /// Coefficients `c` with `u(x) ≈ Σ c_j u_j` for nodal samples `u_j`:
    /// barycentric Lagrange interpolation for the spectral schemes,
    /// piecewise-linear for the uniform scheme.
    pub fn interpolation_row(&self, x: f64) -> Result<Vec<f64>> {
        let tol = 1e-12 * (self.b - self.a);
        if !(x >= self.a - tol && x <= self.b + tol) {
            return Err(Error::UnresolvedCutoff(x));
        }
        let n = self.len();
        let xi = self.to_reference(x.clamp(self.a, self.b)).clamp(-1.0, 1.0);
        let mut row = vec![0.0; n];
        if self.scheme == Scheme::UniformTrapezoid {
            let h = 2.0 / (n - 1) as f64;
            let pos = (xi + 1.0) / h;
            let j = (pos.floor() as usize).min(n - 2);
            let t = pos - j as f64;
            row[j] = 1.0 - t;
            row[j + 1] = t;
            return Ok(row);
        }
        if let Some(j) = self.reference.iter().position(|&r| (r - xi).abs() < 1e-15) {
            row[j] = 1.0;
            return Ok(row);
        }
        let mut denom = 0.0;
        for ((out, w), r) in row.iter_mut().zip(&self.barycentric).zip(&self.reference) {
            *out = w / (xi - r);
            denom += *out;
        }
        for c in &mut row {
            *c /= denom;
        }
        Ok(row)
    }

    pub fn interpolate(&self, values: &[Complex64], x: f64) -> Result<Complex64> {
        let row = self.interpolation_row(x)?;
        Ok(row.iter().zip(values).map(|(c, v)| v * *c).sum())
    }

    pub(crate) fn same_as(&self, other: &Grid1D) -> bool {
        std::ptr::eq(self, other)
            || (self.scheme == other.scheme
                && self.mapping == other.mapping
                && self.nodes == other.nodes)
    }
}

/// Grid on `[eps_min, R]` in the radial variable, plus the polar measure
/// `r dr` (per unit angle) and the cutoff sequence used for `eps -> 0`
/// extrapolation at the puncture.
#[derive(Clone, Debug)]
pub struct RadialGrid {
    base: Grid1D,
    measure_weights: Vec<f64>,
    cutoffs: Vec<f64>,
}

/// Builds the default radial grid (Legendre-Gauss-Lobatto, affine in `r`).
pub fn make_radial_grid(n: usize, eps_min: f64, r_max: f64, m: usize) -> Result<RadialGrid> {
    RadialGrid::new(n, eps_min, r_max, m, Scheme::default(), Mapping::Affine)
}

impl RadialGrid {
    pub fn new(
        n: usize,
        eps_min: f64,
        r_max: f64,
        m: usize,
        scheme: Scheme,
        mapping: Mapping,
    ) -> Result<Self> {
        if !(eps_min > 0.0 && eps_min < r_max && r_max.is_finite()) {
            return Err(Error::InvalidRadialExtent { eps_min, r_max });
        }
        if m < MIN_CUTOFFS {
            return Err(Error::TooFewCutoffs {
                needed: MIN_CUTOFFS,
                got: m,
            });
        }
        let base = Grid1D::new(n, eps_min, r_max, scheme, mapping)?;
        let measure_weights = base
            .weights()
            .iter()
            .zip(base.nodes())
            .map(|(w, r)| w * r)
            .collect();
        Ok(Self {
            base,
            measure_weights,
            cutoffs: geometric_cutoffs(eps_min, r_max, m),
        })
    }

    pub fn base(&self) -> &Grid1D {
        &self.base
    }

    pub fn nodes(&self) -> &[f64] {
        self.base.nodes()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn eps_min(&self) -> f64 {
        self.base.a
    }

    pub fn r_max(&self) -> f64 {
        self.base.b
    }

    /// Quadrature weights for `∫ · r dr`.
    pub fn measure_weights(&self) -> &[f64] {
        &self.measure_weights
    }

    pub fn cutoff_sequence(&self) -> &[f64] {
        &self.cutoffs
    }
}

/// Geometric sequence from `R/4` (or `sqrt(eps_min R)` when `eps_min` is
/// not below `R/4`) down to `eps_min`.
fn geometric_cutoffs(eps_min: f64, r_max: f64, m: usize) -> Vec<f64> {
    let start = if eps_min < 0.25 * r_max {
        0.25 * r_max
    } else {
        (eps_min * r_max).sqrt()
    };
    let ratio = (eps_min / start).powf(1.0 / (m - 1) as f64);
    let mut seq: Vec<f64> = (0..m).map(|j| start * ratio.powi(j as i32)).collect();
    seq[m - 1] = eps_min;
    seq
}

fn uniform_reference(n: usize) -> (Vec<f64>, Vec<f64>, DMatrix<f64>) {
    let h = 2.0 / (n - 1) as f64;
    let xi: Vec<f64> = (0..n).map(|j| -1.0 + j as f64 * h).collect();
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    let mut d = DMatrix::zeros(n, n);
    d[(0, 0)] = -1.0 / h;
    d[(0, 1)] = 1.0 / h;
    d[(n - 1, n - 2)] = -1.0 / h;
    d[(n - 1, n - 1)] = 1.0 / h;
    for i in 1..n - 1 {
        d[(i, i - 1)] = -0.5 / h;
        d[(i, i + 1)] = 0.5 / h;
    }
    (xi, w, d)
}

/// Ascending Chebyshev-Gauss-Lobatto points `-cos(jπ/N)`.
fn chebyshev_lobatto_nodes(n: usize) -> Vec<f64> {
    let big_n = (n - 1) as f64;
    let mut xi: Vec<f64> = (0..n).map(|j| -(PI * j as f64 / big_n).cos()).collect();
    // symmetric rounding
    for j in 0..n / 2 {
        let v = 0.5 * (xi[n - 1 - j] - xi[j]);
        xi[j] = -v;
        xi[n - 1 - j] = v;
    }
    if n % 2 == 1 {
        xi[n / 2] = 0.0;
    }
    xi
}

fn clenshaw_curtis_weights(n: usize) -> Vec<f64> {
    let big_n = n - 1;
    let nf = big_n as f64;
    let mut w = vec![0.0; n];
    let theta: Vec<f64> = (0..n).map(|j| PI * j as f64 / nf).collect();
    let mut v = vec![1.0; n];
    if big_n.is_multiple_of(2) {
        w[0] = 1.0 / (nf * nf - 1.0);
        w[big_n] = w[0];
        for k in 1..big_n / 2 {
            let kf = k as f64;
            for i in 1..big_n {
                v[i] -= 2.0 * (2.0 * kf * theta[i]).cos() / (4.0 * kf * kf - 1.0);
            }
        }
        for i in 1..big_n {
            v[i] -= (nf * theta[i]).cos() / (nf * nf - 1.0);
        }
    } else {
        w[0] = 1.0 / (nf * nf);
        w[big_n] = w[0];
        for k in 1..=(big_n - 1) / 2 {
            let kf = k as f64;
            for i in 1..big_n {
                v[i] -= 2.0 * (2.0 * kf * theta[i]).cos() / (4.0 * kf * kf - 1.0);
            }
        }
    }
    for i in 1..big_n {
        w[i] = 2.0 * v[i] / nf;
    }
    w
}

/// Legendre-Gauss-Lobatto nodes (ascending) and weights on `[-1, 1]`.
fn legendre_lobatto(n: usize) -> (Vec<f64>, Vec<f64>) {
    let big_n = n - 1;
    let nf = big_n as f64;
    // Newton iteration started from Chebyshev-Gauss-Lobatto points.
    let mut x: Vec<f64> = (0..n).map(|j| (PI * j as f64 / nf).cos()).collect();
    let mut p_n = vec![0.0; n];
    for _ in 0..100 {
        let mut max_step: f64 = 0.0;
        for (i, xi) in x.iter_mut().enumerate() {
            let (pn, pn1) = legendre_pair(big_n, *xi);
            p_n[i] = pn;
            let step = (*xi * pn - pn1) / (n as f64 * pn);
            *xi -= step;
            max_step = max_step.max(step.abs());
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for (i, xi) in x.iter().enumerate() {
        p_n[i] = legendre_pair(big_n, *xi).0;
    }
    let mut nodes: Vec<f64> = x.iter().rev().copied().collect();
    let mut weights: Vec<f64> = p_n
        .iter()
        .rev()
        .map(|p| 2.0 / (nf * (nf + 1.0) * p * p))
        .collect();
    nodes[0] = -1.0;
    nodes[big_n] = 1.0;
    for j in 0..n / 2 {
        let v = 0.5 * (nodes[big_n - j] - nodes[j]);
        nodes[j] = -v;
        nodes[big_n - j] = v;
        let w = 0.5 * (weights[j] + weights[big_n - j]);
        weights[j] = w;
        weights[big_n - j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_N(x), P_{N-1}(x))` by the three-term recurrence.
fn legendre_pair(big_n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    for k in 2..=big_n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * cur - (kf - 1.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `λ_j = 1 / Π_{k≠j} (x_j - x_k)`, rescaled so that `max |λ_j| = 1`.
fn barycentric_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut logs = vec![0.0; n];
    let mut signs = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                let d = x[j] - x[k];
                logs[j] -= d.abs().ln();
                if d < 0.0 {
                    signs[j] = -signs[j];
                }
            }
        }
    }
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    logs.iter()
        .zip(&signs)
        .map(|(l, s)| s * (l - top).exp())
        .collect()
}

fn barycentric_diff(x: &[f64], lambda: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = lambda[j] / lambda[i] / (x[i] - x[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_schemes() -> [Scheme; 3] {
        [
            Scheme::UniformTrapezoid,
            Scheme::ChebyshevClenshawCurtis,
            Scheme::LegendreGaussLobatto,
        ]
    }

    #[test]
    fn weights_sum_to_length() {
        for scheme in all_schemes() {
            for n in [4, 5, 17, 64] {
                let g = make_grid_1d(n, -0.3, 2.2, scheme).unwrap();
                let s: f64 = g.weights().iter().sum();
                assert!((s - 2.5).abs() / 2.5 < 1e-12, "{scheme} n={n}: {s}");
                assert!(g.weights().iter().all(|w| *w > 0.0));
                assert_eq!(g.nodes()[0], -0.3);
                assert_eq!(g.nodes()[n - 1], 2.2);
            }
        }
    }

    #[test]
    fn integrates_identity_on_unit_interval() {
        // ∫_0^1 x dx over the weights, and constants exactly
        for scheme in all_schemes() {
            let g = make_grid_1d(8, 0.0, 1.0, scheme).unwrap();
            assert!((g.integrate(&g.sample(|x| x)) - 0.5).abs() < 1e-14);
            assert!((g.integrate(&g.sample(|_| 3.5)) - 3.5).abs() < 1e-13);
        }
    }

    #[test]
    fn chebyshev_cubic_integral() {
        let g = make_grid_1d(16, 0.0, 1.0, Scheme::ChebyshevClenshawCurtis).unwrap();
        assert!((g.integrate(&g.sample(|x| x.powi(3))) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn spectral_diff_is_exact_on_polynomials() {
        for scheme in [Scheme::ChebyshevClenshawCurtis, Scheme::LegendreGaussLobatto] {
            let n = 12;
            let g = make_grid_1d(n, 0.5, 2.0, scheme).unwrap();
            let f = g.sample(|x| x.powi(11) - 3.0 * x.powi(4) + x);
            let df = g.derivative_real(&f);
            for (x, d) in g.nodes().iter().zip(&df) {
                let exact = 11.0 * x.powi(10) - 12.0 * x.powi(3) + 1.0;
                assert!((d - exact).abs() < 1e-10 * exact.abs().max(1.0), "{scheme}");
            }
        }
    }

    #[test]
    fn uniform_diff_is_exact_on_lines() {
        let g = make_grid_1d(9, 0.0, 2.0, Scheme::UniformTrapezoid).unwrap();
        let df = g.derivative_real(&g.sample(|x| 3.0 * x - 1.0));
        assert!(df.iter().all(|d| (d - 3.0).abs() < 1e-12));
    }

    #[test]
    fn summation_by_parts_holds_for_sbp_schemes() {
        for scheme in [Scheme::UniformTrapezoid, Scheme::LegendreGaussLobatto] {
            for mapping in [Mapping::Affine, Mapping::Logarithmic] {
                let g = Grid1D::new(24, 0.01, 1.3, scheme, mapping).unwrap();
                let n = g.len();
                let w = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(g.weights()));
                let q = &w * g.diff_matrix();
                let sbp = &q + q.transpose();
                let mut b = DMatrix::zeros(n, n);
                b[(0, 0)] = -1.0;
                b[(n - 1, n - 1)] = 1.0;
                let err = (sbp - b).abs().max();
                assert!(err < 1e-10, "{scheme} {mapping:?}: {err}");
            }
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let g = make_grid_1d(10, -1.0, 3.0, Scheme::LegendreGaussLobatto).unwrap();
        let vals: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&x| Complex64::new(x.powi(5), -x * x))
            .collect();
        for x in [-1.0, -0.77, 0.1, 2.5, 3.0] {
            let v = g.interpolate(&vals, x).unwrap();
            assert!((v - Complex64::new(x.powi(5), -x * x)).norm() < 1e-10);
        }
        assert!(g.interpolate(&vals, 3.5).is_err());
    }

    #[test]
    fn log_mapping_integrates_smoothly_near_zero() {
        let g = Grid1D::new(48, 1e-6, 1.0, Scheme::LegendreGaussLobatto, Mapping::Logarithmic)
            .unwrap();
        let v = g.integrate(&g.sample(|x| 1.0 / x));
        assert!((v - (1e6f64).ln()).abs() < 1e-10);
    }

    #[test]
    fn radial_grid_measure_and_cutoffs() {
        let g = make_radial_grid(32, 1e-3, 1.0, 5).unwrap();
        let ones: f64 = g.measure_weights().iter().sum();
        assert!((ones - (1.0 - 1e-6) / 2.0).abs() < 1e-12);
        let c = g.cutoff_sequence();
        assert_eq!(c.len(), 5);
        assert_eq!(*c.last().unwrap(), 1e-3);
        assert!((c[0] - 0.25).abs() < 1e-15);
        assert!(c.windows(2).all(|p| p[0] > p[1]));
        assert!(g.nodes().iter().all(|r| *r > 0.0));
    }

    #[test]
    fn radial_measure_of_r() {
        let eps = 1e-3;
        let g = RadialGrid::new(32, eps, 1.0, 5, Scheme::ChebyshevClenshawCurtis, Mapping::Affine)
            .unwrap();
        let v: f64 = g
            .measure_weights()
            .iter()
            .zip(g.nodes())
            .map(|(w, r)| w * r)
            .sum();
        assert!((v - (1.0 - eps.powi(3)) / 3.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            make_grid_1d(3, 0.0, 1.0, Scheme::default()),
            Err(Error::TooFewNodes(3, 4))
        ));
        assert!(make_grid_1d(8, 1.0, 1.0, Scheme::default()).is_err());
        assert!(make_radial_grid(16, 0.0, 1.0, 4).is_err());
        assert!(make_radial_grid(16, 1.0, 1.0, 4).is_err());
        assert!(make_radial_grid(16, 0.1, 1.0, 2).is_err());
    }

    #[test]
    fn chebyshev_quadrature_converges_super_algebraically() {
        let exact = (1.0f64).exp() - 1.0;
        let err = |n| {
            let g = make_grid_1d(n, 0.0, 1.0, Scheme::ChebyshevClenshawCurtis).unwrap();
            (g.integrate(&g.sample(f64::exp)) - exact).abs()
        };
        assert!(err(4) > 1e-5);
        assert!(err(8) < 1e-9);
        let uerr = |n| {
            let g = make_grid_1d(n, 0.0, 1.0, Scheme::UniformTrapezoid).unwrap();
            (g.integrate(&g.sample(f64::exp)) - exact).abs()
        };
        let ratio = uerr(33) / uerr(65);
        assert!((ratio - 4.0).abs() < 0.05, "trapezoid ratio {ratio}");
    }
}
