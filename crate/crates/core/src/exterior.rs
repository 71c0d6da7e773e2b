//! Exterior derivative, codifferential and the Dirac-Kähler operator
//! `D = d + δ`, plus the Green-identity residuals that expose the boundary
//! term.
//!
//! The codifferential is built literally as `δ = (-1)^{n(p-1)+1} ⋆ d ⋆` on
//! `p`-forms, never as a matrix adjoint of `d`, so the discrete Green
//! identity keeps its boundary contribution.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{
    fmt_f64, hodge_star, inner_product, inner_product_weights, Component, Domain, FormField, Metric,
    Space,
};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn diff(space: &Space, values: &[Complex64]) -> Vec<Complex64> {
    space.grid().derivative(values)
}

pub fn exterior_derivative(alpha: &FormField) -> Result<FormField> {
    let space = alpha.space().clone();
    let mut out = FormField::zeros(space.clone(), alpha.domain())?;
    match alpha.domain() {
        Domain::Interval => {
            out.set_component(Component::C1x, &diff(&space, alpha.component(Component::C0)));
        }
        Domain::RadialMode(k) => {
            let ik = Complex64::new(0.0, k as f64);
            let a0 = alpha.component(Component::C0);
            let ar = alpha.component(Component::C1r);
            let dtheta = diff(&space, alpha.component(Component::C1Theta));
            out.set_component(Component::C1r, &diff(&space, a0));
            out.set_component(
                Component::C1Theta,
                &a0.iter().map(|z| ik * z).collect::<Vec<_>>(),
            );
            out.set_component(
                Component::C2,
                &dtheta
                    .iter()
                    .zip(ar)
                    .map(|(d, z)| d - ik * z)
                    .collect::<Vec<_>>(),
            );
        }
    }
    Ok(out)
}

/// Sign of `δ = sign · ⋆d⋆` on forms of degree `p ≥ 1` in dimension `n`.
pub fn codifferential_sign(n: usize, p: usize) -> f64 {
    if (n * (p - 1) + 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn codifferential(alpha: &FormField, metric: Metric) -> Result<FormField> {
    let n = alpha.domain().dimension();
    let mut out = FormField::zeros(alpha.space().clone(), alpha.domain())?;
    for p in 1..=n {
        let part = alpha.degree_part(p);
        if part.is_zero() {
            continue;
        }
        let star_d_star = hodge_star(&exterior_derivative(&hodge_star(&part, metric)?)?, metric)?;
        out = &out + &(&star_d_star * Complex64::new(codifferential_sign(n, p), 0.0));
    }
    Ok(out)
}

pub fn dirac_kahler(alpha: &FormField, metric: Metric) -> Result<FormField> {
    let d = exterior_derivative(alpha)?;
    let delta = codifferential(alpha, metric)?;
    Ok(&d + &delta)
}

/// `⟨α, dβ⟩ - ⟨δα, β⟩`: zero for fields vanishing near every boundary
/// component, otherwise the boundary integral `∫ d(β ∧ ⋆ᾱ)`.
pub fn green_residual(alpha: &FormField, beta: &FormField, metric: Metric) -> Result<Complex64> {
    alpha.check_compatible(beta)?;
    let d_beta = exterior_derivative(beta)?;
    let delta_alpha = codifferential(alpha, metric)?;
    Ok(inner_product(alpha, &d_beta)? - inner_product(&delta_alpha, beta)?)
}

/// `⟨α, Dβ⟩ - ⟨Dα, β⟩`, the symmetry defect of `D` on a pair of fields.
pub fn dirac_green_residual(
    alpha: &FormField,
    beta: &FormField,
    metric: Metric,
) -> Result<Complex64> {
    alpha.check_compatible(beta)?;
    let d_beta = dirac_kahler(beta, metric)?;
    let d_alpha = dirac_kahler(alpha, metric)?;
    Ok(inner_product(alpha, &d_beta)? - inner_product(&d_alpha, beta)?)
}

/// Dense matrix of `D` acting on component-major stacked nodal vectors,
/// with the diagonal weight realizing the inner product (`⟨u, v⟩ = u†Wv`).
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub matrix: DMatrix<Complex64>,
    pub weights: DVector<f64>,
    space: Space,
    domain: Domain,
}

impl OperatorMatrix {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, alpha: &FormField) -> Result<FormField> {
        if alpha.domain() != self.domain || !alpha.space().same_as(&self.space) {
            return Err(Error::GridMismatch);
        }
        alpha.with_data(&self.matrix * alpha.as_vector())
    }

    /// `W^{1/2} A W^{-1/2}`: Hermitian iff `A` is symmetric in the weighted
    /// inner product.
    pub fn weight_symmetrized(&self) -> DMatrix<Complex64> {
        let s: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.matrix[(i, j)] * (s[i] / s[j]))
    }

    /// Debug dump: `#` header with the layout, then one row per matrix row
    /// with interleaved real/imaginary parts.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let labels: Vec<&str> = self.domain.components().iter().map(|c| c.label()).collect();
        writeln!(
            out,
            "# domain={} nodes={} components={} layout=component-major",
            self.domain,
            self.space.len(),
            labels.join(";")
        )?;
        writeln!(out, "# rows={} cols={}", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .flat_map(|j| {
                    let z = self.matrix[(i, j)];
                    [fmt_f64(z.re), fmt_f64(z.im)]
                })
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Assembles the matrix of `D` from its block formulas.
///
/// Interval, layout `(c0, c1x)`: `[[0, -∂], [∂, 0]]`.
/// Radial mode `k`, layout `(c0, c1r, c1θ, c2)`, with `R = diag(r)`:
///
/// ```text
/// c0  ← -R⁻¹∂R c1r - ik R⁻² c1θ
/// c1r ←  ∂ c0 + ik R⁻² c2
/// c1θ ←  ik c0 - R∂R⁻¹ c2
/// c2  ← -ik c1r + ∂ c1θ
/// ```
pub fn assemble_operator(space: &Space, domain: Domain) -> Result<OperatorMatrix> {
    let n = space.len();
    let ncomp = domain.components().len();
    if !matches!(
        (space, domain),
        (Space::Interval(_), Domain::Interval) | (Space::Radial(_), Domain::RadialMode(_))
    ) {
        return Err(Error::DomainMismatch(format!("{domain} operator on the wrong grid")));
    }
    let d = space.diff_matrix().map(|v| Complex64::new(v, 0.0));
    let mut a = DMatrix::from_element(n * ncomp, n * ncomp, zero());
    let mut put = |bi: usize, bj: usize, block: &DMatrix<Complex64>| {
        a.view_mut((bi * n, bj * n), (n, n)).copy_from(block);
    };
    match domain {
        Domain::Interval => {
            put(0, 1, &(-&d));
            put(1, 0, &d);
        }
        Domain::RadialMode(k) => {
            let r = space.nodes();
            let ik = Complex64::new(0.0, k as f64);
            let diag = |f: &dyn Fn(f64) -> Complex64| {
                DMatrix::from_diagonal(&DVector::from_iterator(n, r.iter().map(|&x| f(x))))
            };
            let r_mat = diag(&|x| Complex64::new(x, 0.0));
            let r_inv = diag(&|x| Complex64::new(1.0 / x, 0.0));
            put(0, 1, &(-(&r_inv * &d * &r_mat)));
            put(0, 2, &diag(&|x| -ik / (x * x)));
            put(1, 0, &d);
            put(1, 3, &diag(&|x| ik / (x * x)));
            put(2, 0, &diag(&|_| ik));
            put(2, 3, &(-(&r_mat * &d * &r_inv)));
            put(3, 1, &diag(&|_| -ik));
            put(3, 2, &d);
        }
    }
    Ok(OperatorMatrix {
        matrix: a,
        weights: inner_product_weights(space, domain),
        space: space.clone(),
        domain,
    })
}
