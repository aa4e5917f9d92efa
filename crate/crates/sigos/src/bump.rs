//! Smooth compactly supported profiles shared across the crate, plus a
//! tabulated Fourier transform for the 1D profile.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// The standard bump: `exp(1 - 1/(1-u^2))` on `|u| < 1`, zero outside.
/// Peaks at 1.
pub fn bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

/// Radial bump on a slice: `bump(|u|)`.
pub fn bump_radial(u: &[f64]) -> f64 {
    let r2: f64 = u.iter().map(|x| x * x).sum();
    if r2 < 1.0 {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// Tensor product of 1D bumps.
pub fn bump_tensor(u: &[f64]) -> f64 {
    u.iter().map(|&x| bump(x)).product()
}

fn transition(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Smooth step: 1 for `t <= a`, 0 for `t >= b`, monotone in between.
pub fn smooth_step(t: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a < b);
    let x = (t - a) / (b - a);
    let up = transition(1.0 - x);
    let down = transition(x);
    up / (up + down)
}

/// Plateau profile: exactly 1 on `|u| <= 1/2`, 0 outside `|u| < 1`.
pub fn plateau(u: f64) -> f64 {
    smooth_step(u.abs(), 0.5, 1.0)
}

/// Tensor plateau scaled into the unit ball of R^m.
pub fn plateau_ball(u: &[f64]) -> f64 {
    let s = (u.len() as f64).sqrt();
    u.iter().map(|&x| plateau(x * s)).product()
}

/// Radial plateau: 1 on `|u| <= inner`, 0 outside `|u| >= outer`.
pub fn radial_plateau(u: &[f64], inner: f64, outer: f64) -> f64 {
    let r = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    smooth_step(r, inner, outer)
}

/// Tabulated Fourier transform `F(s) = int f(u) e^{-2 pi i s u} du` of a
/// real even profile supported in `[-half_width, half_width]`, with cubic
/// interpolation. The transform of an even real profile is real and even.
pub struct ProfileTransform {
    values: Vec<f64>,
    step: f64,
    max_s: f64,
}

impl ProfileTransform {
    /// Builds the table by FFT of `samples` equispaced samples of the
    /// profile, zero-padded by `pad` for resolution in s.
    pub fn new(profile: impl Fn(f64) -> f64, half_width: f64, samples: usize, pad: usize) -> Self {
        let n = samples;
        let m = (n * pad).next_power_of_two();
        let h = 2.0 * half_width / n as f64;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (j, slot) in buf.iter_mut().enumerate().take(n) {
            let u = -half_width + (j as f64 + 0.5) * h;
            *slot = Complex64::new(profile(u), 0.0);
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(m).process(&mut buf);
        // Sample j sits at u_j = -half_width + (j + 1/2) h, so the bin-k sum
        // equals e^{2 pi i s_k (half_width - h/2)} F(s_k) / h for
        // s_k = k / (m h).
        let step = 1.0 / (m as f64 * h);
        let keep = m / 2;
        let mut values = vec![0.0f64; keep];
        for (k, v) in values.iter_mut().enumerate() {
            let s = k as f64 * step;
            let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * s * (half_width - 0.5 * h));
            *v = (buf[k] * phase).re * h;
        }
        ProfileTransform {
            values,
            step,
            max_s: (keep.saturating_sub(2)) as f64 * step,
        }
    }

    /// Catmull-Rom interpolation; even extension in s, zero beyond the table.
    pub fn eval(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= self.max_s {
            return 0.0;
        }
        let x = s / self.step;
        let i = x.floor() as usize;
        let t = x - i as f64;
        let get = |k: i64| -> f64 {
            if k < 0 {
                // even extension
                self.values[(-k) as usize]
            } else {
                self.values[k as usize]
            }
        };
        let p0 = get(i as i64 - 1);
        let p1 = get(i as i64);
        let p2 = get(i as i64 + 1);
        let p3 = get(i as i64 + 2);
        0.5 * ((2.0 * p1)
            + (-p0 + p2) * t
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t
            + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t)
    }
}
