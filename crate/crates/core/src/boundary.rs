//! Boundary data, the boundary sesquilinear form and Cayley-transform
//! boundary conditions.
//!
//! Traces come in Cayley pairs `(t₁, t₂), (t₃, t₄), …`. On an interval
//! endpoint the single pair is `(α⁽⁰⁾, α⁽¹⁾_x)`. At the puncture of the plane
//! (mode `k = 0`) the pairs are the weighted limits
//! `(β⁽⁰⁾₀, ε β⁽¹⁾_{r,0})` and `(β⁽¹⁾_{θ,0}, β⁽²⁾₀ / ε)`.
//!
//! The boundary form of a pair of trace vectors is
//!
//! ```text
//! Σ(α, β) = Σ_j  t_{2j}(β) conj(t_{2j+1}(α)) - conj(t_{2j}(α)) t_{2j+1}(β)
//! ```
//!
//! and a unitary `U` selects the maximally isotropic subspace
//! `t₋ = U t₊` with `t∓_j = t_{2j} ∓ i t_{2j+1}`.
//!
//! Orientation: on a grid `[a, b]` (or an annulus `[ε, R]`) the Green
//! residual `⟨α, Dβ⟩ - ⟨Dα, β⟩` equals `m · (Σ_outer - Σ_inner)`, with the
//! angular measure `m = 2π` on the plane and `m = 1` on an interval.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::forms::{Component, Domain, FormField, Space};

/// Tolerance used when validating user-supplied unitaries.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceKind {
    /// `(α⁽⁰⁾(x₀), α⁽¹⁾_x(x₀))` at an interval endpoint.
    Endpoint1d,
    /// Weighted `ε → 0` limits at the puncture, mode `k = 0`.
    Puncture2d,
    /// Weighted values `(a₀, ρ a_r, a_θ, a₂/ρ)` on the circle `r = ρ`.
    Circle2d { radius: f64 },
}

impl TraceKind {
    /// Number of Cayley pairs, i.e. the size of the unitary.
    pub fn pairs(self) -> usize {
        match self {
            TraceKind::Endpoint1d => 1,
            TraceKind::Puncture2d | TraceKind::Circle2d { .. } => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceVector {
    pub kind: TraceKind,
    pub values: Vec<Complex64>,
    /// Size of the last correction in the `ε → 0` extrapolation; zero for
    /// traces read directly from nodal values.
    pub extrapolation_residual: f64,
}

impl TraceVector {
    pub fn new(kind: TraceKind, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != 2 * kind.pairs() {
            return Err(Error::DimensionMismatch {
                expected: 2 * kind.pairs(),
                got: values.len(),
            });
        }
        Ok(Self {
            kind,
            values,
            extrapolation_residual: 0.0,
        })
    }

    pub fn endpoint(value: Complex64, partner: Complex64) -> Self {
        Self {
            kind: TraceKind::Endpoint1d,
            values: vec![value, partner],
            extrapolation_residual: 0.0,
        }
    }

    pub fn puncture(values: [Complex64; 4]) -> Self {
        Self {
            kind: TraceKind::Puncture2d,
            values: values.to_vec(),
            extrapolation_residual: 0.0,
        }
    }

    pub fn pairs(&self) -> usize {
        self.values.len() / 2
    }

    /// `(t₋, t₊)` with `t∓_j = t_{2j} ∓ i t_{2j+1}`.
    pub fn cayley_vectors(&self) -> (DVector<Complex64>, DVector<Complex64>) {
        let d = self.pairs();
        let minus = DVector::from_fn(d, |j, _| self.values[2 * j] - I * self.values[2 * j + 1]);
        let plus = DVector::from_fn(d, |j, _| self.values[2 * j] + I * self.values[2 * j + 1]);
        (minus, plus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Boundary component of the computational domain: left/right endpoint
/// of an interval, or the puncture circle `r = ε_min` / outer wall `r = R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    Inner,
    Outer,
}

pub fn extract_endpoint_trace(alpha: &FormField, which: Side) -> Result<TraceVector> {
    if alpha.domain() != Domain::Interval {
        return Err(Error::DomainMismatch("endpoint traces need an interval field".into()));
    }
    let i = match which {
        Side::Left => 0,
        Side::Right => alpha.node_count() - 1,
    };
    Ok(TraceVector::endpoint(
        alpha.component(Component::C0)[i],
        alpha.component(Component::C1x)[i],
    ))
}

fn weight_traces(k: [Complex64; 4], rho: f64) -> [Complex64; 4] {
    [k[0], k[1] * rho, k[2], k[3] / rho]
}

/// Radial-mode data that can be evaluated at arbitrary radii.
pub trait RadialSampler {
    fn mode(&self) -> i32;
    /// Coordinate components `(a₀, a_r, a_θ, a₂)` at radius `r`.
    fn sample(&self, r: f64) -> Result<[Complex64; 4]>;
}

impl RadialSampler for FormField {
    fn mode(&self) -> i32 {
        self.domain().mode().unwrap_or(0)
    }

    fn sample(&self, r: f64) -> Result<[Complex64; 4]> {
        let grid = self
            .space()
            .radial_grid()
            .ok_or_else(|| Error::DomainMismatch("radial sampling of an interval field".into()))?;
        let row = grid.base().interpolation_row(r)?;
        let mut out = [zero(); 4];
        for (ci, slot) in out.iter_mut().enumerate() {
            *slot = row
                .iter()
                .zip(self.component_by_index(ci))
                .map(|(c, v)| v * *c)
                .sum();
        }
        Ok(out)
    }
}

/// Closed-form radial profiles `r ↦ (a₀, a_r, a_θ, a₂)` of mode `k`.
pub struct AnalyticMode<F> {
    pub k: i32,
    pub profiles: F,
}

impl<F: Fn(f64) -> [Complex64; 4]> RadialSampler for AnalyticMode<F> {
    fn mode(&self) -> i32 {
        self.k
    }

    fn sample(&self, r: f64) -> Result<[Complex64; 4]> {
        Ok((self.profiles)(r))
    }
}

/// Weighted traces `(a₀, ρ a_r, a_θ, a₂/ρ)` on the circle `r = ρ`.
pub fn weighted_trace_at<S: RadialSampler + ?Sized>(field: &S, rho: f64) -> Result<TraceVector> {
    let values = weight_traces(field.sample(rho)?, rho);
    TraceVector::new(TraceKind::Circle2d { radius: rho }, values.to_vec())
}

const TRACE_LABELS: [&str; 4] = ["t1", "t2", "t3", "t4"];

/// Weighted traces along `cutoffs`, one row per cutoff.
pub fn weighted_trace_sequence<S: RadialSampler + ?Sized>(
    field: &S,
    cutoffs: &[f64],
) -> Result<Vec<[Complex64; 4]>> {
    cutoffs
        .iter()
        .map(|&eps| Ok(weight_traces(field.sample(eps)?, eps)))
        .collect()
}

/// Result of extrapolating one weighted trace to `ε → 0`.
#[derive(Clone, Copy, Debug)]
pub struct Extrapolation {
    pub limit: Complex64,
    pub residual: f64,
    pub divergent: bool,
}

/// Richardson (Neville) extrapolation of `q(ε)` to `ε = 0` over a strictly
/// decreasing sequence. A sequence is declared divergent when `|q|` grows
/// monotonically as `ε` shrinks and either grows by more than 10× overall
/// or the pairwise linear extrapolants stop contracting.
pub fn richardson_limit(eps: &[f64], q: &[Complex64]) -> Extrapolation {
    let m = eps.len();
    let mut table: Vec<Vec<Complex64>> = vec![q.to_vec()];
    for j in 1..m {
        let prev = &table[j - 1];
        let next: Vec<Complex64> = (j..m)
            .map(|i| {
                let (lo, hi) = (eps[i], eps[i - j]);
                (prev[i - j + 1] * hi - prev[i - j] * lo) / (hi - lo)
            })
            .collect();
        table.push(next);
    }
    let limit = table[m - 1][0];
    let residual = (limit - table[m - 2][table[m - 2].len() - 1]).norm();

    let mags: Vec<f64> = q.iter().map(|z| z.norm()).collect();
    let scale = mags.iter().cloned().fold(0.0, f64::max);
    let monotone = mags.windows(2).all(|w| w[1] > w[0]);
    let linear = &table[1];
    let steps: Vec<f64> = linear.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let stalled = match (steps.first(), steps.last()) {
        (Some(&first), Some(&last)) => first > 1e-12 * scale.max(1.0) && last > 0.5 * first,
        _ => false,
    };
    let blown_up = mags[m - 1] > 10.0 * mags[0];
    Extrapolation {
        limit,
        residual,
        divergent: monotone && (blown_up || stalled),
    }
}

/// Extrapolates the four weighted `k = 0` traces to the puncture.
pub fn extract_puncture_trace<S: RadialSampler + ?Sized>(
    field: &S,
    cutoffs: &[f64],
) -> Result<TraceVector> {
    if field.mode() != 0 {
        return Err(Error::DomainMismatch(format!(
            "puncture traces are defined for the k = 0 mode, got k = {}",
            field.mode()
        )));
    }
    if cutoffs.len() < 3 {
        return Err(Error::TooFewCutoffs {
            needed: 3,
            got: cutoffs.len(),
        });
    }
    if !cutoffs.windows(2).all(|w| w[1] < w[0]) || cutoffs[cutoffs.len() - 1] <= 0.0 {
        return Err(Error::Config("cutoff sequence must be positive and strictly decreasing".into()));
    }
    let rows = weighted_trace_sequence(field, cutoffs)?;
    let mut values = Vec::with_capacity(4);
    let mut residual: f64 = 0.0;
    for (j, label) in TRACE_LABELS.iter().enumerate() {
        let q: Vec<Complex64> = rows.iter().map(|r| r[j]).collect();
        let ex = richardson_limit(cutoffs, &q);
        if ex.divergent {
            return Err(Error::DivergentTrace { component: label });
        }
        residual = residual.max(ex.residual);
        values.push(ex.limit);
    }
    Ok(TraceVector {
        kind: TraceKind::Puncture2d,
        values,
        extrapolation_residual: residual,
    })
}

fn check_same_shape(a: &TraceVector, b: &TraceVector) -> Result<()> {
    if a.values.len() != b.values.len() {
        return Err(Error::DimensionMismatch {
            expected: a.values.len(),
            got: b.values.len(),
        });
    }
    Ok(())
}

/// `Σ_j t_{2j}(β) conj(t_{2j+1}(α))`, the trace form of `∫ d(β ∧ ⋆ᾱ)`.
pub fn green_half_form(alpha: &TraceVector, beta: &TraceVector) -> Result<Complex64> {
    check_same_shape(alpha, beta)?;
    Ok((0..alpha.pairs())
        .map(|j| beta.values[2 * j] * alpha.values[2 * j + 1].conj())
        .sum())
}

/// The boundary sesquilinear form `Σ(α, β)`.
pub fn boundary_form(alpha: &TraceVector, beta: &TraceVector) -> Result<Complex64> {
    Ok(green_half_form(alpha, beta)? - green_half_form(beta, alpha)?.conj())
}

/// Matrix `J` with `Σ(α, β) = t(α)† J t(β)`.
pub fn form_matrix(pairs: usize) -> DMatrix<Complex64> {
    let mut j = DMatrix::from_element(2 * pairs, 2 * pairs, zero());
    for p in 0..pairs {
        j[(2 * p + 1, 2 * p)] = Complex64::new(1.0, 0.0);
        j[(2 * p, 2 * p + 1)] = Complex64::new(-1.0, 0.0);
    }
    j
}

fn edge_node(space: &Space, edge: Edge) -> usize {
    match edge {
        Edge::Inner => 0,
        Edge::Outer => space.len() - 1,
    }
}

/// Linear map from stacked nodal values to the trace vector on `edge`
/// (`2d × N`). Radial edges use the weighted traces at `ρ = ε_min` or `R`.
pub fn trace_functional(space: &Space, domain: Domain, edge: Edge) -> Result<DMatrix<Complex64>> {
    let n = space.len();
    let ncomp = domain.components().len();
    let node = edge_node(space, edge);
    let mut t = DMatrix::from_element(ncomp, n * ncomp, zero());
    match (space, domain) {
        (Space::Interval(_), Domain::Interval) => {
            t[(0, node)] = Complex64::new(1.0, 0.0);
            t[(1, n + node)] = Complex64::new(1.0, 0.0);
        }
        (Space::Radial(_), Domain::RadialMode(_)) => {
            let rho = space.nodes()[node];
            let w = [1.0, rho, 1.0, 1.0 / rho];
            for (ci, wi) in w.iter().enumerate() {
                t[(ci, ci * n + node)] = Complex64::new(*wi, 0.0);
            }
        }
        _ => return Err(Error::DomainMismatch(format!("{domain} traces on the wrong grid"))),
    }
    Ok(t)
}

/// Linear map from nodal values to the `ε → 0` Richardson limits of the
/// weighted puncture traces over the grid's cutoff sequence (`4 × N`).
pub fn extrapolated_puncture_functional(space: &Space, domain: Domain) -> Result<DMatrix<Complex64>> {
    let grid = match (space, domain) {
        (Space::Radial(g), Domain::RadialMode(_)) => g,
        _ => return Err(Error::DomainMismatch("puncture traces need a radial mode".into())),
    };
    let n = grid.len();
    let eps = grid.cutoff_sequence();
    let mut t = DMatrix::from_element(4, 4 * n, zero());
    for (i, &e) in eps.iter().enumerate() {
        let lagrange: f64 = eps
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != i)
            .map(|(_, &em)| em / (em - e))
            .product();
        let row = grid.base().interpolation_row(e)?;
        let w = [1.0, e, 1.0, 1.0 / e];
        for (ci, wi) in w.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                t[(ci, ci * n + j)] += Complex64::new(lagrange * wi * r, 0.0);
            }
        }
    }
    Ok(t)
}

/// Trace vector of `alpha` on a grid edge, read from nodal values.
pub fn edge_trace(alpha: &FormField, edge: Edge) -> Result<TraceVector> {
    let t = trace_functional(alpha.space(), alpha.domain(), edge)? * alpha.as_vector();
    let kind = match alpha.domain() {
        Domain::Interval => TraceKind::Endpoint1d,
        Domain::RadialMode(_) => TraceKind::Circle2d {
            radius: alpha.space().nodes()[edge_node(alpha.space(), edge)],
        },
    };
    TraceVector::new(kind, t.iter().copied().collect())
}

fn angular_measure(domain: Domain) -> f64 {
    match domain {
        Domain::Interval => 1.0,
        Domain::RadialMode(_) => 2.0 * PI,
    }
}

/// Boundary contribution to `⟨α, Dβ⟩ - ⟨Dα, β⟩` on the grid:
/// `m · (Σ_outer - Σ_inner)`.
pub fn boundary_term(alpha: &FormField, beta: &FormField) -> Result<Complex64> {
    alpha.check_compatible(beta)?;
    if alpha.domain() != beta.domain() {
        return Ok(zero());
    }
    let form = |edge| boundary_form(&edge_trace(alpha, edge)?, &edge_trace(beta, edge)?);
    Ok((form(Edge::Outer)? - form(Edge::Inner)?) * angular_measure(alpha.domain()))
}

/// Boundary contribution to `⟨α, dβ⟩ - ⟨δα, β⟩`, i.e. `∫ d(β ∧ ⋆ᾱ)`.
pub fn green_boundary_term(alpha: &FormField, beta: &FormField) -> Result<Complex64> {
    alpha.check_compatible(beta)?;
    if alpha.domain() != beta.domain() {
        return Ok(zero());
    }
    let half = |edge| green_half_form(&edge_trace(alpha, edge)?, &edge_trace(beta, edge)?);
    Ok((half(Edge::Outer)? - half(Edge::Inner)?) * angular_measure(alpha.domain()))
}

/// A unitary `d × d` matrix (`d ∈ {1, 2}`) labelling a self-adjoint
/// extension through `t₋ = U t₊`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryBC {
    u: DMatrix<Complex64>,
    label: Option<f64>,
}

/// `e^{iλ}`, exact at multiples of `π/2`.
fn unit_phase(lambda: f64) -> Complex64 {
    let quarter = lambda / (0.5 * PI);
    let nearest = quarter.round();
    if (quarter - nearest).abs() <= 4.0 * f64::EPSILON * quarter.abs().max(1.0) {
        return match (nearest as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, lambda)
}

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let d = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex64>::identity(d, d))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

impl UnitaryBC {
    /// Validates unitarity to [`UNITARITY_TOLERANCE`] and then replaces `u`
    /// by its nearest unitary (polar factor) so that `u†u = I` to rounding.
    pub fn new(u: DMatrix<Complex64>) -> Result<Self> {
        let d = u.nrows();
        if d != u.ncols() || !(1..=2).contains(&d) {
            return Err(Error::DimensionMismatch { expected: 2, got: d });
        }
        let defect = unitarity_defect(&u);
        if defect.is_nan() || defect > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary(defect));
        }
        let polished = if defect == 0.0 {
            u
        } else {
            let svd = u.svd(true, true);
            let (w, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
            w * vt
        };
        Ok(Self {
            u: polished,
            label: None,
        })
    }

    /// `U = e^{iλ}` on a single endpoint.
    pub fn from_lambda(lambda: f64) -> Self {
        let u = DMatrix::from_element(1, 1, unit_phase(lambda));
        Self {
            u,
            label: Some(lambda.rem_euclid(2.0 * PI)),
        }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            u: DMatrix::identity(d, d),
            label: (d == 1).then_some(0.0),
        }
    }

    pub fn minus_identity(d: usize) -> Self {
        Self {
            u: -DMatrix::<Complex64>::identity(d, d),
            label: (d == 1).then_some(PI),
        }
    }

    /// Row-major `[re, im]` pairs, e.g. four pairs for a 2 × 2 matrix.
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        let d = match pairs.len() {
            1 => 1,
            4 => 2,
            n => return Err(Error::DimensionMismatch { expected: 4, got: n }),
        };
        Self::new(DMatrix::from_row_iterator(
            d,
            d,
            pairs.iter().map(|p| Complex64::new(p[0], p[1])),
        ))
    }

    /// Haar-distributed unitary (QR of a complex Gaussian matrix with the
    /// phases of `R`'s diagonal divided out).
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let z = DMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let qr = z.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..d {
            let phase = r[(j, j)] / r[(j, j)].norm();
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
        Self::new(q).expect("QR factor is unitary")
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.u
    }

    pub fn label(&self) -> Option<f64> {
        self.label
    }

    /// Row-major `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        let d = self.dim();
        (0..d * d)
            .map(|idx| {
                let z = self.u[(idx / d, idx % d)];
                [z.re, z.im]
            })
            .collect()
    }
}

fn check_bc_dim(t_pairs: usize, bc: &UnitaryBC) -> Result<()> {
    if t_pairs != bc.dim() {
        return Err(Error::DimensionMismatch {
            expected: t_pairs,
            got: bc.dim(),
        });
    }
    Ok(())
}

/// `‖t₋ - U t₊‖₂`; zero iff the trace satisfies the boundary condition.
pub fn cayley_residual(t: &TraceVector, bc: &UnitaryBC) -> Result<f64> {
    check_bc_dim(t.pairs(), bc)?;
    let (minus, plus) = t.cayley_vectors();
    Ok((minus - bc.matrix() * plus).norm())
}

/// Rows `C` (`d × 2d`) with `C t = t₋ - U t₊`.
pub fn cayley_rows(bc: &UnitaryBC) -> DMatrix<Complex64> {
    let d = bc.dim();
    let u = bc.matrix();
    DMatrix::from_fn(d, 2 * d, |i, col| {
        let j = col / 2;
        let delta = if i == j { Complex64::new(1.0, 0.0) } else { zero() };
        if col % 2 == 0 {
            delta - u[(i, j)]
        } else {
            -I * (delta + u[(i, j)])
        }
    })
}

/// Orthonormal basis (`2d × d`) of the traces obeying `t₋ = U t₊`.
///
/// Built from the parameterization `t₊ = v`, `t₋ = U v`; columns are
/// Gram-Schmidt orthonormalized and phase-fixed so that each column's first
/// non-negligible entry is real and positive.
pub fn bc_subspace(bc: &UnitaryBC) -> DMatrix<Complex64> {
    let d = bc.dim();
    let u = bc.matrix();
    let mut basis = DMatrix::from_element(2 * d, d, zero());
    for col in 0..d {
        for j in 0..d {
            let plus = if j == col { Complex64::new(1.0, 0.0) } else { zero() };
            let minus = u[(j, col)];
            basis[(2 * j, col)] = (plus + minus) * 0.5;
            basis[(2 * j + 1, col)] = (plus - minus) / (2.0 * I);
        }
    }
    for col in 0..d {
        for prev in 0..col {
            let proj: Complex64 = basis.column(prev).dotc(&basis.column(col));
            let p = basis.column(prev).clone_owned();
            let mut c = basis.column_mut(col);
            c -= p * proj;
        }
        let norm = basis.column(col).norm();
        let mut c = basis.column_mut(col);
        c /= Complex64::new(norm, 0.0);
        if let Some(lead) = c.iter().copied().find(|z| z.norm() > 1e-14) {
            let phase = lead.conj() / lead.norm();
            c *= phase;
        }
    }
    basis
}

/// Constraint rows `C (d × N)` imposing `t₋ = U t₊` on the traces of `edge`.
pub fn cayley_constraint(
    bc: &UnitaryBC,
    space: &Space,
    domain: Domain,
    edge: Edge,
) -> Result<DMatrix<Complex64>> {
    let t = trace_functional(space, domain, edge)?;
    check_bc_dim(t.nrows() / 2, bc)?;
    Ok(cayley_rows(bc) * t)
}

/// Constraint rows at the outer wall `r = R`; defaults to `U_out = -I`
/// (vanishing `c0` and `c1theta` at `R`).
pub fn outer_boundary_condition(
    bc: Option<&UnitaryBC>,
    space: &Space,
    domain: Domain,
) -> Result<DMatrix<Complex64>> {
    let default = UnitaryBC::minus_identity(2);
    cayley_constraint(bc.unwrap_or(&default), space, domain, Edge::Outer)
}
