//! Dominant oscillation frequency of a uniformly sampled series.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Peak-to-mean spread below which a series counts as flat.
pub const FLAT_TOL: f64 = 1e-12;
/// Relative jitter allowed in the sample spacing.
const GRID_TOL: f64 = 1e-9;
/// Zero-padding factor before the transform.
const PAD: usize = 8;

fn check_uniform(times: &[f64]) -> Result<f64> {
    let n = times.len();
    let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidTrajectory("time grid has zero span".into()));
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > GRID_TOL * dt.max(1.0) {
            return Err(Error::InvalidTrajectory("spectral fit needs a uniform time grid".into()));
        }
    }
    Ok(dt)
}

/// Angular frequency of the strongest spectral component of `series`,
/// ignoring anything slower than one cycle over the record.
///
/// Hann window, zero padding and a log-parabolic fit through the three
/// bins around the peak. Returns `None` for flat series or when the
/// spectrum only falls away from zero frequency.
pub fn dominant_frequency(times: &[f64], series: &[f64]) -> Result<Option<f64>> {
    let n = series.len();
    if times.len() != n {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            got: n,
        });
    }
    if n < 4 {
        return Ok(None);
    }
    let dt = check_uniform(times)?;
    let mean = series.iter().sum::<f64>() / n as f64;
    let spread = series.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    if spread < FLAT_TOL {
        return Ok(None);
    }

    let n_fft = (PAD * n).next_power_of_two();
    let mut buf = vec![C64::new(0.0, 0.0); n_fft];
    for (k, (slot, x)) in buf.iter_mut().zip(series).enumerate() {
        let w = 0.5 - 0.5 * (TAU * k as f64 / (n - 1) as f64).cos();
        *slot = C64::new((x - mean) * w, 0.0);
    }
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    let mags: Vec<f64> = buf[..=n_fft / 2].iter().map(|z| z.norm()).collect();

    let bin = 1.0 / (n_fft as f64 * dt);
    let span = dt * (n - 1) as f64;
    let k_min = ((1.0 / span) / bin).ceil().max(1.0) as usize;
    let k_max = n_fft / 2;
    if k_min >= k_max {
        return Ok(None);
    }
    let peak = (k_min..k_max)
        .max_by(|&a, &b| mags[a].total_cmp(&mags[b]))
        .expect("non-empty range");
    if mags[peak] <= 0.0 || mags[peak - 1] >= mags[peak] {
        return Ok(None);
    }

    let (a, b, c) = (mags[peak - 1], mags[peak], mags[peak + 1]);
    let offset = if a > 0.0 && c > 0.0 {
        let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
        let denom = la - 2.0 * lb + lc;
        if denom < 0.0 {
            0.5 * (la - lc) / denom
        } else {
            0.0
        }
    } else {
        0.0
    };
    Ok(Some(TAU * (peak as f64 + offset) * bin))
}
