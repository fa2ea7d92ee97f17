use crate::error::{Error, Result};

/// Least-squares power law `value ≈ e^{intercept} t^{exponent}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    /// RMS of the log-residuals.
    pub residual: f64,
    pub trust_window_end: f64,
    pub samples: usize,
}

pub const MIN_SAMPLES: usize = 5;

/// Fits a line to `(log t, log value)` over the samples with `t ∈ window`.
pub fn decay_fit(series: &[(f64, f64)], window: (f64, f64), trust_window_end: f64) -> Result<DecayFit> {
    let (t0, t1) = window;
    if !(t0 > 0.0 && t0 < t1) {
        return Err(Error::Range(format!("fit window [{t0}, {t1}] is empty or not positive")));
    }
    if t1 > trust_window_end {
        return Err(Error::Range(format!(
            "fit window end {t1} exceeds the trust window end {trust_window_end}"
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(t, v) in series.iter().filter(|(t, _)| *t >= t0 && *t <= t1) {
        if !(v > 0.0) {
            return Err(Error::Domain(format!("nonpositive value {v} at t = {t}")));
        }
        xs.push(t.ln());
        ys.push(v.ln());
    }
    let m = xs.len();
    if m < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{m} samples in [{t0}, {t1}], need at least {MIN_SAMPLES}"
        )));
    }
    let mf = m as f64;
    let mx = xs.iter().sum::<f64>() / mf;
    let my = ys.iter().sum::<f64>() / mf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all samples share one time".into()));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum::<f64>()
        / mf)
        .sqrt();
    Ok(DecayFit {
        exponent,
        intercept,
        window,
        residual,
        trust_window_end,
        samples: m,
    })
}
