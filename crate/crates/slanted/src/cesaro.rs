//! Triangular localization windows.
//!
//! psi_c^N(t) = max(0, 1 - |t - c| / N): a tent of height 1 over c with
//! support radius N. Real centers and scales are allowed; the dilation
//! identity psi_{a c}^{a N}(t) = psi_c^N(t / a) holds exactly up to
//! floating-point rounding of the two divisions.

use crate::error::{Error, Result};
use crate::slant::IndexWindow;
use crate::NormP;

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CesaroWindow {
    center: f64,
    scale: f64,
}

impl CesaroWindow {
    pub fn new(center: f64, scale: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "window center must be finite, got {center}"
            )));
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "window scale must be positive, got {scale}"
            )));
        }
        Ok(CesaroWindow { center, scale })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, t: f64) -> f64 {
        (1.0 - (t - self.center).abs() / self.scale).max(0.0)
    }

    /// Window with center and scale multiplied by factor > 0.
    pub fn dilated(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be positive, got {factor}"
            )));
        }
        CesaroWindow::new(self.center * factor, self.scale * factor)
    }
}

/// Pointwise product (Psi x)_k = psi(k) x_k on the window coordinates.
pub fn window_multiply(
    x: &[f64],
    psi: &CesaroWindow,
    window: &IndexWindow,
) -> Result<Vec<f64>> {
    if x.len() != window.size() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match window size {}",
            x.len(),
            window.size()
        )));
    }
    Ok(window
        .coords()
        .zip(x)
        .map(|(k, &v)| psi.eval(k as f64) * v)
        .collect())
}

/// Hard crop to |k - center| <= radius, zero elsewhere.
pub fn crop(x: &[f64], center: i64, radius: f64, window: &IndexWindow) -> Result<Vec<f64>> {
    if x.len() != window.size() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match window size {}",
            x.len(),
            window.size()
        )));
    }
    if !(radius >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "crop radius must be nonnegative, got {radius}"
        )));
    }
    Ok(window
        .coords()
        .zip(x)
        .map(|(k, &v)| if ((k - center) as f64).abs() <= radius { v } else { 0.0 })
        .collect())
}

/// Windowed ell^p norm: for finite p the p-th root of
/// sum_n sum_j |psi_n^N(j) x_j|^p, for p = inf the plain sup. Centers n run
/// over every position whose tent touches the window.
pub fn triple_norm(x: &[f64], scale: u32, p: NormP, window: &IndexWindow) -> Result<f64> {
    if x.len() != window.size() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} does not match window size {}",
            x.len(),
            window.size()
        )));
    }
    if scale < 2 {
        return Err(Error::InvalidParameter(
            "triple norm scale must be at least 2".into(),
        ));
    }
    let l = window.half_width();
    let n_scale = scale as i64;
    let mut total = 0.0_f64;
    let mut sup = 0.0_f64;
    for n in (-l - n_scale + 1)..=(l + n_scale - 1) {
        let lo = (n - n_scale + 1).max(-l);
        let hi = (n + n_scale - 1).min(l);
        for j in lo..=hi {
            let xi = x[window.index_of(j).expect("coordinate inside window")];
            if xi == 0.0 {
                continue;
            }
            let weight = 1.0 - (j - n).abs() as f64 / n_scale as f64;
            let term = weight * xi.abs();
            match p {
                NormP::One => total += term,
                NormP::Two => total += term * term,
                NormP::Inf => sup = sup.max(term),
            }
        }
    }
    Ok(match p {
        NormP::One => total,
        NormP::Two => total.sqrt(),
        NormP::Inf => sup,
    })
}
