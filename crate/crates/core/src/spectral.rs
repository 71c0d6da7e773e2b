//! Boundary conditions imposed on the discrete operator, and its spectrum.
//!
//! Two constraint methods are available. *Projection* restricts the
//! weight-symmetrized matrix `S A S⁻¹` (`S = W^{1/2}`) to an orthonormal
//! basis of the admissible subspace `{u : C u = 0}`. *Tau* replaces the rows
//! of `A` at the pivot unknowns of `C` by the constraint rows and eliminates
//! those unknowns.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    cayley_constraint, extrapolated_puncture_functional, cayley_rows, Edge, UnitaryBC,
};
use crate::dense;
use crate::error::{Error, Result};
use crate::exterior::{assemble_operator, OperatorMatrix};
use crate::forms::{Domain, FormField, Space};

/// Relative singular-value threshold below which modes count as kernel.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintMethod {
    #[default]
    Projection,
    Tau,
}

impl ConstraintMethod {
    pub fn name(self) -> &'static str {
        match self {
            ConstraintMethod::Projection => "projection",
            ConstraintMethod::Tau => "tau",
        }
    }
}

impl fmt::Display for ConstraintMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstraintMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" => Ok(ConstraintMethod::Projection),
            "tau" => Ok(ConstraintMethod::Tau),
            other => Err(Error::Config(format!("unknown constraint method `{other}`"))),
        }
    }
}

/// How the puncture condition reads the weighted traces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PunctureStencil {
    /// Weighted nodal values at `r = ε_min`.
    #[default]
    Node,
    /// Richardson limit over the grid's cutoff sequence.
    Extrapolated,
}

#[derive(Clone, Debug)]
pub struct ConstrainedOperator {
    op: OperatorMatrix,
    constraints: DMatrix<Complex64>,
    method: ConstraintMethod,
    inner: Option<UnitaryBC>,
    outer: Option<UnitaryBC>,
    /// Orthonormal basis `P` of `null(C S⁻¹)`.
    basis: DMatrix<Complex64>,
    /// `P† S A S⁻¹ P`.
    reduced: DMatrix<Complex64>,
}

fn sqrt_weights(op: &OperatorMatrix) -> Vec<f64> {
    op.weights.iter().map(|w| w.sqrt()).collect()
}

fn admissible_basis(c_scaled: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = c_scaled.ncols();
    let m = c_scaled.nrows();
    if m == 0 {
        return Ok(DMatrix::identity(n, n));
    }
    let mut stacked = DMatrix::from_element(n, m + n, Complex64::new(0.0, 0.0));
    stacked.view_mut((0, 0), (n, m)).copy_from(&c_scaled.adjoint());
    stacked
        .view_mut((0, m), (n, n))
        .copy_from(&DMatrix::<Complex64>::identity(n, n));
    let qr = stacked.qr();
    let r = qr.r();
    let scale = (0..m).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    if (0..m).any(|i| r[(i, i)].norm() <= 1e-12 * scale) {
        return Err(Error::Config("constraint rows are linearly dependent".into()));
    }
    Ok(qr.q().columns(m, n - m).into_owned())
}

/// Imposes `t₋ = U t₊` on the inner and outer boundary.
///
/// Interval: `inner` acts at the left end, `outer` (default: `inner`) at
/// the right end. Radial modes: `inner` acts at the puncture and `outer`
/// (default `-I`) at `r = R`.
pub fn impose_bc(
    op: &OperatorMatrix,
    inner: &UnitaryBC,
    outer: Option<&UnitaryBC>,
    method: ConstraintMethod,
) -> Result<ConstrainedOperator> {
    impose_bc_with_stencil(op, inner, outer, method, PunctureStencil::Node)
}

pub fn impose_bc_with_stencil(
    op: &OperatorMatrix,
    inner: &UnitaryBC,
    outer: Option<&UnitaryBC>,
    method: ConstraintMethod,
    stencil: PunctureStencil,
) -> Result<ConstrainedOperator> {
    let (space, domain) = (op.space(), op.domain());
    let outer = match (domain, outer) {
        (_, Some(u)) => u.clone(),
        (Domain::Interval, None) => inner.clone(),
        (Domain::RadialMode(_), None) => UnitaryBC::minus_identity(2),
    };
    let inner_rows = match (domain, stencil) {
        (Domain::RadialMode(_), PunctureStencil::Extrapolated) => {
            if inner.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: inner.dim(),
                });
            }
            cayley_rows(inner) * extrapolated_puncture_functional(space, domain)?
        }
        _ => cayley_constraint(inner, space, domain, Edge::Inner)?,
    };
    let outer_rows = cayley_constraint(&outer, space, domain, Edge::Outer)?;
    let mut rows = DMatrix::from_element(
        inner_rows.nrows() + outer_rows.nrows(),
        op.dim(),
        Complex64::new(0.0, 0.0),
    );
    rows.view_mut((0, 0), inner_rows.shape()).copy_from(&inner_rows);
    rows.view_mut((inner_rows.nrows(), 0), outer_rows.shape())
        .copy_from(&outer_rows);
    let mut constrained = impose_constraints(op, rows, method)?;
    constrained.inner = Some(inner.clone());
    constrained.outer = Some(outer);
    Ok(constrained)
}

/// Restricts `op` to `{u : rows · u = 0}` for arbitrary constraint rows.
pub fn impose_constraints(
    op: &OperatorMatrix,
    rows: DMatrix<Complex64>,
    method: ConstraintMethod,
) -> Result<ConstrainedOperator> {
    if rows.ncols() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: rows.ncols(),
        });
    }
    let s = sqrt_weights(op);
    let c_scaled = DMatrix::from_fn(rows.nrows(), rows.ncols(), |i, j| rows[(i, j)] / s[j]);
    let basis = admissible_basis(&c_scaled)?;
    let reduced = basis.adjoint() * op.weight_symmetrized() * &basis;
    Ok(ConstrainedOperator {
        op: op.clone(),
        constraints: rows,
        method,
        inner: None,
        outer: None,
        basis,
        reduced,
    })
}

/// Pivot columns of `c` chosen by Gaussian elimination with full pivoting.
fn pivot_columns(c: &DMatrix<Complex64>) -> Result<Vec<usize>> {
    let mut work = c.clone();
    let (m, n) = work.shape();
    let mut rows_left: Vec<usize> = (0..m).collect();
    let mut pivots = Vec::with_capacity(m);
    let scale = work.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for _ in 0..m {
        let mut best = (0, 0, 0.0);
        for &i in &rows_left {
            for j in 0..n {
                let v = work[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, pv) = best;
        if pv <= 1e-12 * scale {
            return Err(Error::Config("constraint rows are linearly dependent".into()));
        }
        rows_left.retain(|&i| i != pi);
        let prow = work.row(pi).clone_owned();
        for &i in &rows_left {
            let f = work[(i, pj)] / prow[pj];
            let mut r = work.row_mut(i);
            r -= &prow * f;
        }
        pivots.push(pj);
    }
    Ok(pivots)
}

struct TauSystem {
    free: Vec<usize>,
    pivots: Vec<usize>,
    /// `-C_p⁻¹ C_q`: pivot unknowns in terms of the free ones.
    elimination: DMatrix<Complex64>,
    matrix: DMatrix<Complex64>,
}

impl ConstrainedOperator {
    pub fn operator(&self) -> &OperatorMatrix {
        &self.op
    }

    pub fn constraints(&self) -> &DMatrix<Complex64> {
        &self.constraints
    }

    pub fn method(&self) -> ConstraintMethod {
        self.method
    }

    pub fn inner_bc(&self) -> Option<&UnitaryBC> {
        self.inner.as_ref()
    }

    pub fn outer_bc(&self) -> Option<&UnitaryBC> {
        self.outer.as_ref()
    }

    pub fn admissible_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `P† S A S⁻¹ P`, Hermitian exactly when the constraint is isotropic.
    pub fn reduced_matrix(&self) -> &DMatrix<Complex64> {
        &self.reduced
    }

    /// Nodal basis `S⁻¹ P` of the admissible fields, orthonormal in the
    /// weighted inner product.
    pub fn admissible_fields(&self) -> DMatrix<Complex64> {
        let s = sqrt_weights(&self.op);
        DMatrix::from_fn(self.basis.nrows(), self.basis.ncols(), |i, j| self.basis[(i, j)] / s[i])
    }

    /// `A` with the pivot rows replaced by the constraint rows, and the
    /// indices of the replaced rows.
    pub fn tau_matrix(&self) -> Result<(DMatrix<Complex64>, Vec<usize>)> {
        let pivots = pivot_columns(&self.constraints)?;
        let mut a = self.op.matrix.clone();
        for (r, &p) in pivots.iter().enumerate() {
            a.row_mut(p).copy_from(&self.constraints.row(r));
        }
        Ok((a, pivots))
    }

    fn tau_system(&self) -> Result<TauSystem> {
        let n = self.op.dim();
        let pivots = pivot_columns(&self.constraints)?;
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let cp = self.constraints.select_columns(&pivots);
        let cq = self.constraints.select_columns(&free);
        let elimination = if pivots.is_empty() {
            DMatrix::from_element(0, free.len(), Complex64::new(0.0, 0.0))
        } else {
            -cp.lu()
                .solve(&cq)
                .ok_or_else(|| Error::Eigensolver("singular pivot block".into()))?
        };
        let a = &self.op.matrix;
        let aq = a.select_rows(&free);
        let matrix = aq.select_columns(&free) + aq.select_columns(&pivots) * &elimination;
        Ok(TauSystem {
            free,
            pivots,
            elimination,
            matrix,
        })
    }
}

fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Spectral norm of the anti-Hermitian part of the reduced matrix, i.e. of
/// `(A - A†)/2` in the weighted inner product on admissible fields.
pub fn symmetry_defect(op: &ConstrainedOperator) -> f64 {
    let h = &op.reduced;
    spectral_norm(&((h - h.adjoint()) * Complex64::new(0.5, 0.0)))
}

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// The `count` smallest-magnitude nonzero eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenfields aligned with `eigenvalues`, unit weighted norm.
    pub eigenvectors: Vec<FormField>,
    /// Kernel of the constrained operator.
    pub zero_modes: Vec<FormField>,
    /// Largest imaginary part among the reported eigenvalues (and kernel)
    /// of the unsymmetrized constrained operator.
    pub max_imag: f64,
    pub symmetry_defect: f64,
    pub method: ConstraintMethod,
    pub domain: Domain,
    pub nodes: usize,
    pub inner_bc: Option<UnitaryBC>,
    pub outer_bc: Option<UnitaryBC>,
}

fn normalize_field(op: &OperatorMatrix, mut u: DVector<Complex64>) -> DVector<Complex64> {
    let norm: f64 = u
        .iter()
        .zip(op.weights.iter())
        .map(|(z, w)| z.norm_sqr() * w)
        .sum::<f64>()
        .sqrt();
    let lead = u
        .iter()
        .zip(op.weights.iter())
        .map(|(z, w)| *z * w.sqrt())
        .fold(Complex64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() * (1.0 + 1e-9) { z } else { best });
    let phase = if lead.norm() > 0.0 { lead.conj() / lead.norm() } else { Complex64::new(1.0, 0.0) };
    u *= phase / norm;
    u
}

struct RawEigen {
    values: Vec<Complex64>,
    vectors: Vec<DVector<Complex64>>,
    /// Eigenvalues of the unsymmetrized reduced matrix, for `max_imag`.
    raw_values: Vec<Complex64>,
    scale: f64,
}

fn projection_eigen(c: &ConstrainedOperator) -> Result<RawEigen> {
    let h = &c.reduced;
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let q = c.admissible_fields();
    let values: Vec<Complex64> = eig.eigenvalues.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let vectors = (0..values.len())
        .map(|j| &q * eig.eigenvectors.column(j))
        .collect();
    Ok(RawEigen {
        values,
        vectors,
        raw_values: dense::eigenvalues(h)?,
        scale: spectral_norm(h),
    })
}

fn tau_eigen(c: &ConstrainedOperator) -> Result<RawEigen> {
    let tau = c.tau_system()?;
    let (values, free_vectors) = dense::eigen(&tau.matrix)?;
    let n = c.op.dim();
    let vectors = free_vectors
        .iter()
        .map(|x| {
            let xp = &tau.elimination * x;
            let mut u = DVector::from_element(n, Complex64::new(0.0, 0.0));
            for (k, &i) in tau.free.iter().enumerate() {
                u[i] = x[k];
            }
            for (k, &i) in tau.pivots.iter().enumerate() {
                u[i] = xp[k];
            }
            u
        })
        .collect();
    Ok(RawEigen {
        raw_values: values.clone(),
        values,
        vectors,
        scale: spectral_norm(&tau.matrix),
    })
}

/// Indices of the kernel (`|μ| ≤ ZERO_MODE_TOLERANCE · scale`) and of the
/// `count` smallest nonzero eigenvalues, the latter in ascending order.
fn select(values: &[Complex64], scale: f64, count: usize) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .norm()
            .total_cmp(&values[b].norm())
            .then(values[a].re.total_cmp(&values[b].re))
    });
    let zero_count = order
        .iter()
        .take_while(|&&j| values[j].norm() <= ZERO_MODE_TOLERANCE * scale)
        .count();
    let zeros = order[..zero_count].to_vec();
    let mut chosen: Vec<usize> = order.iter().skip(zero_count).take(count).copied().collect();
    chosen.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));
    (zeros, chosen)
}

pub fn solve_spectrum(c: &ConstrainedOperator, count: usize) -> Result<SpectrumResult> {
    let raw = match c.method {
        ConstraintMethod::Projection => projection_eigen(c)?,
        ConstraintMethod::Tau => tau_eigen(c)?,
    };
    let (zeros, chosen) = select(&raw.values, raw.scale, count);
    let (raw_zeros, raw_chosen) = select(&raw.raw_values, raw.scale, count);
    let max_imag = raw_zeros
        .iter()
        .chain(&raw_chosen)
        .map(|&j| raw.raw_values[j].im.abs())
        .fold(0.0, f64::max);
    let field = |j: usize| {
        FormField::new(
            c.op.space().clone(),
            c.op.domain(),
            normalize_field(&c.op, raw.vectors[j].clone()),
        )
    };
    Ok(SpectrumResult {
        eigenvalues: chosen.iter().map(|&j| raw.values[j].re).collect(),
        eigenvectors: chosen.iter().map(|&j| field(j)).collect::<Result<_>>()?,
        zero_modes: zeros.iter().map(|&j| field(j)).collect::<Result<_>>()?,
        max_imag,
        symmetry_defect: symmetry_defect(c),
        method: c.method,
        domain: c.op.domain(),
        nodes: c.op.space().len(),
        inner_bc: c.inner.clone(),
        outer_bc: c.outer.clone(),
    })
}

/// One spectrum per boundary condition along `path`.
pub fn sweep_bc(
    op: &OperatorMatrix,
    path: &[UnitaryBC],
    outer: Option<&UnitaryBC>,
    count: usize,
    method: ConstraintMethod,
) -> Result<Vec<SpectrumResult>> {
    if let Some(first) = path.first() {
        if let Some(bad) = path.iter().find(|u| u.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                got: bad.dim(),
            });
        }
    }
    path.iter()
        .map(|u| solve_spectrum(&impose_bc(op, u, outer, method)?, count))
        .collect()
}

/// Inner condition actually imposed on mode `k`: the puncture unitary acts
/// on `k = 0`; every other mode has vanishing `a₀` and `a_θ` traces.
pub fn mode_inner_bc(k: i32, puncture: &UnitaryBC) -> UnitaryBC {
    if k == 0 {
        puncture.clone()
    } else {
        UnitaryBC::minus_identity(2)
    }
}

/// Spectrum of radial mode `k` with puncture condition `puncture`.
pub fn solve_mode(
    space: &Space,
    k: i32,
    puncture: &UnitaryBC,
    outer: Option<&UnitaryBC>,
    count: usize,
    method: ConstraintMethod,
) -> Result<SpectrumResult> {
    let op = assemble_operator(space, Domain::RadialMode(k))?;
    solve_spectrum(&impose_bc(&op, &mode_inner_bc(k, puncture), outer, method)?, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{bc_subspace, cayley_residual, edge_trace, form_matrix};
    use crate::forms::{Component, inner_product};
    use crate::grids::{make_grid_1d, make_radial_grid, Scheme};
    use std::f64::consts::PI;

    fn interval_op(n: usize) -> OperatorMatrix {
        let s = Space::interval(make_grid_1d(n, 0.0, 1.0, Scheme::default()).unwrap());
        assemble_operator(&s, Domain::Interval).unwrap()
    }

    #[test]
    fn dirichlet_type_interval_spectrum() {
        let op = interval_op(64);
        let c = impose_bc(&op, &UnitaryBC::from_lambda(PI), None, ConstraintMethod::Projection).unwrap();
        assert_eq!(c.admissible_dim(), 126);
        let r = solve_spectrum(&c, 10).unwrap();
        let want = [-5.0, -4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0, 5.0].map(|m| m * PI);
        for (got, w) in r.eigenvalues.iter().zip(want) {
            assert!((got - w).abs() <= 1e-6 * w.abs(), "{got} vs {w}");
        }
        // constant c1x plus the parasitic mode c1x = P_{n-1}(2x - 1)
        assert_eq!(r.zero_modes.len(), 2);
        for z in &r.zero_modes {
            assert!(z.component(Component::C0).iter().all(|v| v.norm() < 1e-10));
        }
        let ones = FormField::from_fn(op.space().clone(), Domain::Interval, |comp, _| match comp {
            Component::C0 => Complex64::new(0.0, 0.0),
            _ => Complex64::new(1.0, 0.0),
        })
        .unwrap();
        let captured: f64 = r.zero_modes.iter().map(|z| inner_product(z, &ones).unwrap().norm_sqr()).sum();
        assert!((captured - inner_product(&ones, &ones).unwrap().re).abs() < 1e-10);
        assert!(r.symmetry_defect < 1e-10, "{}", r.symmetry_defect);
        for v in &r.eigenvectors {
            assert!((inner_product(v, v).unwrap().re - 1.0).abs() < 1e-10);
            for edge in [Edge::Inner, Edge::Outer] {
                assert!(cayley_residual(&edge_trace(v, edge).unwrap(), &UnitaryBC::from_lambda(PI)).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn tau_and_projection_agree() {
        let op = interval_op(64);
        for lambda in [PI, 0.0, 1.0] {
            let bc = UnitaryBC::from_lambda(lambda);
            let p = solve_spectrum(&impose_bc(&op, &bc, None, ConstraintMethod::Projection).unwrap(), 6).unwrap();
            let t = solve_spectrum(&impose_bc(&op, &bc, None, ConstraintMethod::Tau).unwrap(), 6).unwrap();
            for (a, b) in p.eigenvalues.iter().zip(&t.eigenvalues) {
                assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0), "λ={lambda}: {a} vs {b}");
            }
            for v in &t.eigenvectors {
                for edge in [Edge::Inner, Edge::Outer] {
                    assert!(cayley_residual(&edge_trace(v, edge).unwrap(), &bc).unwrap() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn tau_rows_keep_interior_action() {
        let op = interval_op(24);
        let c = impose_bc(&op, &UnitaryBC::from_lambda(PI), None, ConstraintMethod::Tau).unwrap();
        let (a, replaced) = c.tau_matrix().unwrap();
        assert_eq!(replaced.len(), 2);
        let f = FormField::from_fn(op.space().clone(), Domain::Interval, |_, x| {
            Complex64::new((-1.0 / (x * (1.0 - x)).max(1e-300)).exp(), 0.0)
        })
        .unwrap();
        let full = &op.matrix * f.as_vector();
        let tau = &a * f.as_vector();
        for i in (0..op.dim()).filter(|i| !replaced.contains(i)) {
            assert_eq!(full[i], tau[i]);
        }
    }

    #[test]
    fn non_isotropic_constraints_break_symmetry() {
        let op = interval_op(64);
        let free = impose_constraints(&op, DMatrix::zeros(0, op.dim()), ConstraintMethod::Projection).unwrap();
        assert!(symmetry_defect(&free) > 1e-2);
        // f = 2i g at both ends: Σ(t, t) = 4i|g|² ≠ 0
        let n = 64;
        let mut rows = DMatrix::zeros(2, op.dim());
        for (r, node) in [(0, 0), (1, n - 1)] {
            rows[(r, node)] = Complex64::new(1.0, 0.0);
            rows[(r, n + node)] = Complex64::new(0.0, -2.0);
        }
        let c = impose_constraints(&op, rows, ConstraintMethod::Projection).unwrap();
        assert!(symmetry_defect(&c) > 1e-2);
    }

    #[test]
    fn isotropy_iff_symmetry_for_endpoint_rows() {
        let op = interval_op(32);
        let n = 32;
        for (a, b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -2.0), (Complex64::new(1.0, 0.0).re, 3.0)] {
            for im in [0.0, 0.5] {
                let row = [Complex64::new(a, 0.0), Complex64::new(b, im)];
                let mut rows = DMatrix::zeros(2, op.dim());
                for (r, node) in [(0, 0), (1, n - 1)] {
                    rows[(r, node)] = row[0];
                    rows[(r, n + node)] = row[1];
                }
                let defect = symmetry_defect(&impose_constraints(&op, rows, ConstraintMethod::Projection).unwrap());
                // admissible trace: orthogonal complement of the row
                let t = DMatrix::from_column_slice(2, 1, &[-row[1].conj(), row[0].conj()]);
                let isotropic = (t.adjoint() * form_matrix(1) * &t).norm() < 1e-12;
                assert_eq!(defect < 1e-10, isotropic, "row {row:?} defect {defect}");
            }
        }
    }

    #[test]
    fn lambda_sweep_endpoints() {
        let op = interval_op(48);
        let path: Vec<UnitaryBC> = [0.0, 0.5, 1.0, 1.5].iter().map(|t| UnitaryBC::from_lambda(t * PI)).collect();
        let r = sweep_bc(&op, &path, None, 4, ConstraintMethod::Projection).unwrap();
        assert_eq!(r.len(), 4);
        for s in [&r[0], &r[2]] {
            assert!((s.eigenvalues[2] - PI).abs() < 1e-6);
            assert_eq!(s.zero_modes.len(), 2);
        }
        assert!(sweep_bc(&op, &[UnitaryBC::from_lambda(0.0), UnitaryBC::identity(2)], None, 4, ConstraintMethod::Projection).is_err());
        assert!(bc_subspace(&path[0])[(0, 0)] == Complex64::new(1.0, 0.0));
    }

    #[test]
    fn radial_modes_symmetric_and_u_dependent() {
        let s = Space::radial(make_radial_grid(32, 1e-3, 1.0, 5).unwrap());
        let plus = solve_mode(&s, 0, &UnitaryBC::identity(2), None, 5, ConstraintMethod::Projection).unwrap();
        let minus = solve_mode(&s, 0, &UnitaryBC::minus_identity(2), None, 5, ConstraintMethod::Projection).unwrap();
        assert!(plus.symmetry_defect < 1e-8 && minus.symmetry_defect < 1e-8);
        let diff = plus.eigenvalues.iter().zip(&minus.eigenvalues).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff > 1e-3);
        let k1a = solve_mode(&s, 1, &UnitaryBC::identity(2), None, 5, ConstraintMethod::Projection).unwrap();
        let k1b = solve_mode(&s, 1, &UnitaryBC::minus_identity(2), None, 5, ConstraintMethod::Projection).unwrap();
        assert_eq!(k1a.eigenvalues, k1b.eigenvalues);
    }

    #[test]
    fn extrapolated_puncture_rows_are_not_exactly_isotropic() {
        let s = Space::radial(make_radial_grid(32, 1e-3, 1.0, 5).unwrap());
        let op = assemble_operator(&s, Domain::RadialMode(0)).unwrap();
        let u = UnitaryBC::identity(2);
        let node = impose_bc(&op, &u, None, ConstraintMethod::Projection).unwrap();
        let ex = impose_bc_with_stencil(&op, &u, None, ConstraintMethod::Projection, PunctureStencil::Extrapolated).unwrap();
        assert!(symmetry_defect(&node) < 1e-8);
        assert!(symmetry_defect(&ex) > symmetry_defect(&node));
    }

    #[test]
    fn dimension_checks() {
        let op = interval_op(16);
        assert!(impose_bc(&op, &UnitaryBC::identity(2), None, ConstraintMethod::Projection).is_err());
        assert!(impose_constraints(&op, DMatrix::zeros(1, 3), ConstraintMethod::Tau).is_err());
        assert_eq!("tau".parse::<ConstraintMethod>().unwrap(), ConstraintMethod::Tau);
    }
}
