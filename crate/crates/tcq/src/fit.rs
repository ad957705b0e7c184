//! Least-squares polynomial fits used by the sweep reports.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    Linear,
    Quadratic,
}

impl FitKind {
    pub fn degree(self) -> usize {
        match self {
            FitKind::Linear => 1,
            FitKind::Quadratic => 2,
        }
    }
}

/// Polynomial fit; `coefficients[p]` multiplies xᵖ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub kind: FitKind,
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
}

impl Fit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// coefficient of the highest power
    pub fn leading(&self) -> f64 {
        *self.coefficients.last().unwrap()
    }
}

/// Ordinary least squares on a rescaled abscissa, solved by SVD.
pub fn polyfit(xs: &[f64], ys: &[f64], kind: FitKind) -> Result<Fit> {
    let deg = kind.degree();
    if xs.len() != ys.len() || xs.len() <= deg {
        return domain(format!("need more than {deg} points of equal-length data"));
    }
    let shift = xs.iter().sum::<f64>() / xs.len() as f64;
    let scale = xs.iter().map(|x| (x - shift).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let yscale = ys.iter().map(|y| y.abs()).fold(0.0, f64::max);
    let yscale = if yscale > 0.0 { yscale } else { 1.0 };
    let a = DMatrix::from_fn(xs.len(), deg + 1, |r, c| ((xs[r] - shift) / scale).powi(c as i32));
    let b = DVector::from_iterator(ys.len(), ys.iter().map(|y| y / yscale));
    let sol = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| crate::Error::Domain(e.to_string()))?;
    // expand Σ c_q ((x−s)/h)^q into powers of x
    let mut coefficients = vec![0.0; deg + 1];
    for (q, cq) in sol.iter().enumerate() {
        for p in 0..=q {
            let binom = binomial(q, p) as f64;
            coefficients[p] += cq * yscale * binom * (-shift).powi((q - p) as i32) / scale.powi(q as i32);
        }
    }
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let fitted: Vec<f64> = (0..xs.len())
        .map(|r| yscale * (0..=deg).map(|c| sol[c] * a[(r, c)]).sum::<f64>())
        .collect();
    let ss_res: f64 = ys.iter().zip(&fitted).map(|(y, f)| (y - f).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(Fit { kind, coefficients, r_squared })
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Slope of log y against log x.
pub fn log_log_exponent(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return domain("log-log fit needs positive data");
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    Ok(polyfit(&lx, &ly, FitKind::Linear)?.coefficients[1])
}
