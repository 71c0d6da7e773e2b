//! Angular Fourier modes and the per-mode radial systems of the punctured
//! plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::boundary::{weighted_trace_sequence, RadialSampler};
use crate::error::{Error, Result};
use crate::exterior::{assemble_operator, OperatorMatrix};
use crate::forms::{Domain, Metric, Space};
use crate::grids::RadialGrid;

pub const DEFAULT_K_MAX: i32 = 8;

/// Discrete Fourier coefficients `β_k` of samples on `θ_j = 2πj/N`.
///
/// All `N` coefficients are kept, indexed by the symmetric range returned by
/// [`FourierModes::range`], so that `Σ β_k e^{ikθ_j}` reproduces the samples.
#[derive(Clone, Debug)]
pub struct FourierModes {
    coeffs: Vec<Complex64>,
    k_max: i32,
}

impl FourierModes {
    pub fn sample_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn k_max(&self) -> i32 {
        self.k_max
    }

    /// Inclusive range of stored mode indices.
    pub fn range(&self) -> (i32, i32) {
        let n = self.coeffs.len() as i32;
        (-(n - 1) / 2, n / 2)
    }

    pub fn coefficient(&self, k: i32) -> Complex64 {
        let (lo, hi) = self.range();
        if k < lo || k > hi {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[k.rem_euclid(self.coeffs.len() as i32) as usize]
    }

    /// `(k, β_k)` for `|k| ≤ k_max`, in increasing `k`.
    pub fn truncated(&self) -> Vec<(i32, Complex64)> {
        (-self.k_max..=self.k_max).map(|k| (k, self.coefficient(k))).collect()
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ β_k e^{ikθ}` over all stored modes.
    pub fn evaluate(&self, theta: f64) -> Complex64 {
        let (lo, hi) = self.range();
        (lo..=hi)
            .map(|k| self.coefficient(k) * Complex64::from_polar(1.0, k as f64 * theta))
            .sum()
    }
}

pub fn fourier_decompose(samples: &[Complex64], k_max: i32) -> Result<FourierModes> {
    let needed = 2 * k_max.max(0) as usize + 1;
    if samples.len() < needed {
        return Err(Error::TooFewSamples {
            needed,
            got: samples.len(),
        });
    }
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    Ok(FourierModes { coeffs: buf, k_max })
}

/// Inverse of [`fourier_decompose`]: the samples on the uniform θ-grid.
pub fn reconstruct(modes: &FourierModes) -> Vec<Complex64> {
    let mut buf = modes.coeffs.clone();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// The 4-component radial system of angular mode `k`.
#[derive(Clone, Debug)]
pub struct ModeProblem {
    pub k: i32,
    pub operator: OperatorMatrix,
}

impl ModeProblem {
    pub fn grid(&self) -> &RadialGrid {
        self.operator
            .space()
            .radial_grid()
            .expect("mode problems live on radial grids")
    }
}

pub fn reduce_mode(k: i32, space: &Space, metric: Metric) -> Result<ModeProblem> {
    if metric != Metric::Polar2d || space.radial_grid().is_none() {
        return Err(Error::DomainMismatch(
            "mode reduction needs the polar metric on a radial grid".into(),
        ));
    }
    Ok(ModeProblem {
        k,
        operator: assemble_operator(space, Domain::RadialMode(k))?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayStatus {
    Decaying,
    Flagged,
    /// `k = 0`: the traces carry the boundary data and need not vanish.
    Exempt,
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub k: i32,
    pub cutoffs: Vec<f64>,
    /// Weighted traces `(a₀, ε a_r, a_θ, a₂/ε)` at each cutoff.
    pub traces: Vec<[Complex64; 4]>,
    /// Largest trace magnitude per cutoff.
    pub magnitudes: Vec<f64>,
    /// Log-log slope of `magnitudes` against `ε` (positive when decaying).
    pub rate: Option<f64>,
    pub status: DecayStatus,
}

const NEGLIGIBLE_TRACE: f64 = 1e-12;
const MIN_DECAY_SLOPE: f64 = 0.05;

/// Weighted traces of a `k ≠ 0` mode along `cutoffs`; flags fields whose
/// traces fail to decay as `ε → 0`.
pub fn angular_mode_trace_decay<S: RadialSampler + ?Sized>(
    field: &S,
    cutoffs: &[f64],
) -> Result<DecayReport> {
    let traces = weighted_trace_sequence(field, cutoffs)?;
    let magnitudes: Vec<f64> = traces
        .iter()
        .map(|t| t.iter().map(|z| z.norm()).fold(0.0, f64::max))
        .collect();
    let k = field.mode();
    let rate = loglog_slope(cutoffs, &magnitudes);
    let status = if k == 0 {
        DecayStatus::Exempt
    } else if magnitudes.iter().all(|&m| m <= NEGLIGIBLE_TRACE) {
        DecayStatus::Decaying
    } else {
        let shrinking = magnitudes.last() < magnitudes.first();
        match rate {
            Some(s) if shrinking && s > MIN_DECAY_SLOPE => DecayStatus::Decaying,
            _ => DecayStatus::Flagged,
        }
    };
    Ok(DecayReport {
        k,
        cutoffs: cutoffs.to_vec(),
        traces,
        magnitudes,
        rate,
        status,
    })
}

fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
