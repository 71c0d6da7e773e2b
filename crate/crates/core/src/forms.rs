//! Non-homogeneous differential forms sampled on a grid.
//!
//! Components are stored in the coordinate basis. On an interval the labels
//! are `c0, c1x` (coefficients of `1, dx`); on the punctured plane a field
//! is a single angular Fourier mode `e^{ikθ}` with radial coefficients
//! `c0, c1r, c1theta, c2` of `1, dr, dθ, dr∧dθ`. Metric factors `r` and
//! `1/r` enter only through the Hodge star.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{Grid1D, RadialGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    C0,
    C1x,
    C1r,
    C1Theta,
    C2,
}

impl Component {
    pub fn degree(self) -> usize {
        match self {
            Component::C0 => 0,
            Component::C1x | Component::C1r | Component::C1Theta => 1,
            Component::C2 => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Component::C0 => "c0",
            Component::C1x => "c1x",
            Component::C1r => "c1r",
            Component::C1Theta => "c1theta",
            Component::C2 => "c2",
        }
    }
}

const INTERVAL_COMPONENTS: [Component; 2] = [Component::C0, Component::C1x];
const POLAR_COMPONENTS: [Component; 4] = [
    Component::C0,
    Component::C1r,
    Component::C1Theta,
    Component::C2,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Interval,
    /// Angular Fourier mode `e^{ikθ}` on the punctured plane.
    RadialMode(i32),
}

impl Domain {
    pub fn components(self) -> &'static [Component] {
        match self {
            Domain::Interval => &INTERVAL_COMPONENTS,
            Domain::RadialMode(_) => &POLAR_COMPONENTS,
        }
    }

    /// Manifold dimension `n`.
    pub fn dimension(self) -> usize {
        match self {
            Domain::Interval => 1,
            Domain::RadialMode(_) => 2,
        }
    }

    pub fn mode(self) -> Option<i32> {
        match self {
            Domain::Interval => None,
            Domain::RadialMode(k) => Some(k),
        }
    }

    pub fn index_of(self, c: Component) -> Option<usize> {
        self.components().iter().position(|x| *x == c)
    }

    pub fn metric(self) -> Metric {
        match self {
            Domain::Interval => Metric::Euclidean1d,
            Domain::RadialMode(_) => Metric::Polar2d,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval => f.write_str("interval"),
            Domain::RadialMode(k) => write!(f, "radial-mode({k})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Euclidean1d,
    Polar2d,
}

impl Metric {
    /// Lengths of the coordinate line elements at `x`: `|dx| = 1`, or
    /// `|dr| = 1` and `|dθ| = r` so that `e¹ = dr`, `e² = r dθ` is orthonormal.
    pub fn frame_factors(self, x: f64) -> Vec<f64> {
        match self {
            Metric::Euclidean1d => vec![1.0],
            Metric::Polar2d => vec![1.0, x],
        }
    }

    fn check(self, domain: Domain) -> Result<()> {
        if self == domain.metric() {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "metric {self:?} cannot act on a {domain} field"
            )))
        }
    }
}

/// The grid a field is sampled on.
#[derive(Clone, Debug)]
pub enum Space {
    Interval(Arc<Grid1D>),
    Radial(Arc<RadialGrid>),
}

impl Space {
    pub fn interval(grid: Grid1D) -> Self {
        Space::Interval(Arc::new(grid))
    }

    pub fn radial(grid: RadialGrid) -> Self {
        Space::Radial(Arc::new(grid))
    }

    pub fn grid(&self) -> &Grid1D {
        match self {
            Space::Interval(g) => g,
            Space::Radial(g) => g.base(),
        }
    }

    pub fn radial_grid(&self) -> Option<&RadialGrid> {
        match self {
            Space::Radial(g) => Some(g),
            Space::Interval(_) => None,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid().nodes()
    }

    pub fn len(&self) -> usize {
        self.grid().len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid().is_empty()
    }

    pub fn diff_matrix(&self) -> &DMatrix<f64> {
        self.grid().diff_matrix()
    }

    pub fn same_as(&self, other: &Space) -> bool {
        match (self, other) {
            (Space::Interval(a), Space::Interval(b)) => Arc::ptr_eq(a, b) || a.same_as(b),
            (Space::Radial(a), Space::Radial(b)) => Arc::ptr_eq(a, b) || a.base().same_as(b.base()),
            _ => false,
        }
    }

    fn accepts(&self, domain: Domain) -> bool {
        matches!(
            (self, domain),
            (Space::Interval(_), Domain::Interval) | (Space::Radial(_), Domain::RadialMode(_))
        )
    }
}

/// A non-homogeneous form: one complex nodal array per component, stored
/// stacked component-major (`[c0 nodes…, c1 nodes…, …]`).
#[derive(Clone, Debug)]
pub struct FormField {
    space: Space,
    domain: Domain,
    data: DVector<Complex64>,
}

impl FormField {
    pub fn new(space: Space, domain: Domain, data: DVector<Complex64>) -> Result<Self> {
        if !space.accepts(domain) {
            return Err(Error::DomainMismatch(format!("{domain} field on the wrong grid")));
        }
        let expected = space.len() * domain.components().len();
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: data.len(),
            });
        }
        Ok(Self {
            space,
            domain,
            data,
        })
    }

    pub fn zeros(space: Space, domain: Domain) -> Result<Self> {
        let len = space.len() * domain.components().len();
        Self::new(space, domain, DVector::zeros(len))
    }

    pub fn from_fn<F>(space: Space, domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(Component, f64) -> Complex64,
    {
        let n = space.len();
        let comps = domain.components();
        let mut data = DVector::zeros(n * comps.len());
        for (ci, c) in comps.iter().enumerate() {
            for (i, x) in space.nodes().iter().enumerate() {
                data[ci * n + i] = f(*c, *x);
            }
        }
        Self::new(space, domain, data)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn node_count(&self) -> usize {
        self.space.len()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.data
    }

    pub fn into_vector(self) -> DVector<Complex64> {
        self.data
    }

    pub fn with_data(&self, data: DVector<Complex64>) -> Result<Self> {
        Self::new(self.space.clone(), self.domain, data)
    }

    pub fn component(&self, c: Component) -> &[Complex64] {
        let n = self.node_count();
        match self.domain.index_of(c) {
            Some(i) => &self.data.as_slice()[i * n..(i + 1) * n],
            None => &[],
        }
    }

    pub fn component_by_index(&self, i: usize) -> &[Complex64] {
        let n = self.node_count();
        &self.data.as_slice()[i * n..(i + 1) * n]
    }

    pub(crate) fn set_component(&mut self, c: Component, values: &[Complex64]) {
        let n = self.node_count();
        if let Some(i) = self.domain.index_of(c) {
            self.data.as_mut_slice()[i * n..(i + 1) * n].copy_from_slice(values);
        }
    }

    /// Homogeneous part of degree `k`; all other components are exactly zero.
    pub fn degree_part(&self, k: usize) -> Self {
        let n = self.node_count();
        let mut out = self.clone();
        for (ci, c) in self.domain.components().iter().enumerate() {
            if c.degree() != k {
                out.data.as_mut_slice()[ci * n..(ci + 1) * n].fill(Complex64::new(0.0, 0.0));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_compatible(&self, other: &FormField) -> Result<()> {
        if !self.space.same_as(&other.space) {
            return Err(Error::GridMismatch);
        }
        match (self.domain, other.domain) {
            (Domain::Interval, Domain::Interval) | (Domain::RadialMode(_), Domain::RadialMode(_)) => {
                Ok(())
            }
            (a, b) => Err(Error::DomainMismatch(format!("{a} vs {b}"))),
        }
    }

    /// One row per node: coordinate, then real and imaginary part of each
    /// component, printed with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let comps = self.domain.components();
        let coord = if self.domain == Domain::Interval { "x" } else { "r" };
        write!(out, "{coord}")?;
        for c in comps {
            write!(out, ",{0}_re,{0}_im", c.label())?;
        }
        writeln!(out)?;
        for (i, x) in self.space.nodes().iter().enumerate() {
            write!(out, "{}", fmt_f64(*x))?;
            for ci in 0..comps.len() {
                let z = self.component_by_index(ci)[i];
                write!(out, ",{},{}", fmt_f64(z.re), fmt_f64(z.im))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Fixed 17-significant-digit float formatting used by every text output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Add for &FormField {
    type Output = FormField;

    fn add(self, rhs: &FormField) -> FormField {
        assert_eq!(self.data.len(), rhs.data.len(), "adding fields of different shape");
        FormField {
            space: self.space.clone(),
            domain: self.domain,
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &FormField {
    type Output = FormField;

    fn sub(self, rhs: &FormField) -> FormField {
        assert_eq!(self.data.len(), rhs.data.len(), "subtracting fields of different shape");
        FormField {
            space: self.space.clone(),
            domain: self.domain,
            data: &self.data - &rhs.data,
        }
    }
}

impl Mul<Complex64> for &FormField {
    type Output = FormField;

    fn mul(self, rhs: Complex64) -> FormField {
        FormField {
            space: self.space.clone(),
            domain: self.domain,
            data: &self.data * rhs,
        }
    }
}

/// Pointwise Hodge star in the orthonormal-frame convention.
///
/// Interval: `⋆(f + g dx) = g + f dx`. Polar (`e¹ = dr`, `e² = r dθ`):
/// `⋆1 = r dr∧dθ`, `⋆dr = r dθ`, `⋆dθ = -(1/r) dr`, `⋆(dr∧dθ) = 1/r`.
pub fn hodge_star(alpha: &FormField, metric: Metric) -> Result<FormField> {
    metric.check(alpha.domain)?;
    let mut out = FormField::zeros(alpha.space.clone(), alpha.domain)?;
    match alpha.domain {
        Domain::Interval => {
            out.set_component(Component::C0, alpha.component(Component::C1x));
            out.set_component(Component::C1x, alpha.component(Component::C0));
        }
        Domain::RadialMode(_) => {
            let r = alpha.space.nodes();
            let scale = |c: Component, f: &dyn Fn(f64) -> f64| -> Vec<Complex64> {
                alpha
                    .component(c)
                    .iter()
                    .zip(r)
                    .map(|(z, &x)| z * f(x))
                    .collect()
            };
            out.set_component(Component::C0, &scale(Component::C2, &|x| 1.0 / x));
            out.set_component(Component::C1r, &scale(Component::C1Theta, &|x| -1.0 / x));
            out.set_component(Component::C1Theta, &scale(Component::C1r, &|x| x));
            out.set_component(Component::C2, &scale(Component::C0, &|x| x));
        }
    }
    Ok(out)
}

/// Sign of `e_a ∧ e_b` relative to the top coordinate form, when the two
/// components have complementary degree.
fn top_wedge_sign(a: Component, b: Component) -> Option<f64> {
    use Component::*;
    match (a, b) {
        (C0, C1x) | (C1x, C0) => Some(1.0),
        (C0, C2) | (C2, C0) => Some(1.0),
        (C1r, C1Theta) => Some(1.0),
        (C1Theta, C1r) => Some(-1.0),
        _ => None,
    }
}

/// Nodal coefficient of `ᾱ ∧ ⋆β` on the top coordinate form (`dx` or
/// `dr∧dθ`). Only equal-degree pairs contribute.
pub fn wedge_star_density(alpha: &FormField, beta: &FormField) -> Result<Vec<Complex64>> {
    alpha.check_compatible(beta)?;
    let star = hodge_star(beta, beta.domain.metric())?;
    let comps = alpha.domain.components();
    let n = alpha.node_count();
    let mut density = vec![Complex64::new(0.0, 0.0); n];
    for &ca in comps {
        for &cb in comps {
            if let Some(sign) = top_wedge_sign(ca, cb) {
                let (xa, xb) = (alpha.component(ca), star.component(cb));
                for i in 0..n {
                    density[i] += xa[i].conj() * xb[i] * sign;
                }
            }
        }
    }
    Ok(density)
}

/// `⟨α, β⟩ = Σ_k ∫ ᾱ⁽ᵏ⁾ ∧ ⋆β⁽ᵏ⁾`, by quadrature. Radial-mode fields carry
/// the angular factor `∫ e^{-ikθ} e^{ik'θ} dθ`, i.e. `2π` for equal modes
/// and zero otherwise.
pub fn inner_product(alpha: &FormField, beta: &FormField) -> Result<Complex64> {
    alpha.check_compatible(beta)?;
    let angular = match (alpha.domain, beta.domain) {
        (Domain::RadialMode(k), Domain::RadialMode(l)) if k != l => return Ok(Complex64::new(0.0, 0.0)),
        (Domain::RadialMode(_), _) => 2.0 * PI,
        _ => 1.0,
    };
    let density = wedge_star_density(alpha, beta)?;
    Ok(alpha.space.grid().integrate_complex(&density) * angular)
}

pub fn l2_norm(alpha: &FormField) -> f64 {
    inner_product(alpha, alpha)
        .map(|z| z.re.max(0.0).sqrt())
        .unwrap_or(0.0)
}

/// Diagonal of the weight matrix realizing [`inner_product`] on stacked
/// nodal vectors: `⟨u, v⟩ = Σ_i w_i conj(u_i) v_i`.
pub fn inner_product_weights(space: &Space, domain: Domain) -> DVector<f64> {
    let grid = space.grid();
    let n = grid.len();
    let comps = domain.components();
    let mut w = DVector::zeros(n * comps.len());
    for (ci, c) in comps.iter().enumerate() {
        for i in 0..n {
            let x = grid.nodes()[i];
            let q = grid.weights()[i];
            w[ci * n + i] = match (domain, c) {
                (Domain::Interval, _) => q,
                (Domain::RadialMode(_), Component::C0 | Component::C1r) => 2.0 * PI * q * x,
                (Domain::RadialMode(_), _) => 2.0 * PI * q / x,
            };
        }
    }
    w
}
