//! Scale-R wave packet decomposition on the frequency side, tube
//! descriptors on the spatial side, concentration diagnostics, and
//! tangency filtering against a subspace or model variety.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::bump::{bump, smooth_step};
use crate::error::{Error, Result};
use crate::geometry::{Subspace, VarietyZ};
use crate::grid::{Field, SampledFunction};
use crate::oscillatory::PhaseFamily;

/// Default tube-thickening exponent.
pub const DELTA_DEFAULT: f64 = 0.05;
/// Default tangency-window exponent (much larger than the tube exponent).
pub const DELTA_M_DEFAULT: f64 = 0.2;
/// Relative squared-mass threshold below which packets are dropped.
pub const DROP_THRESHOLD: f64 = 1e-12;

/// Tangency constants; the angle bound multiplier and the neighbourhood
/// search factor are configuration, reported rather than asserted against.
#[derive(Clone, Copy, Debug)]
pub struct TangencyConstants {
    pub c_tang: f64,
    pub big_c_tang: f64,
}

impl Default for TangencyConstants {
    fn default() -> Self {
        TangencyConstants {
            c_tang: 1.0,
            big_c_tang: 2.0,
        }
    }
}

/// One wave packet: a frequency cap paired with a spatial lattice point and
/// the corresponding piece of the input.
#[derive(Clone, Debug)]
pub struct WavePacket {
    pub theta_index: usize,
    pub theta_center: Vec<f64>,
    pub theta_radius: f64,
    pub v: Vec<f64>,
    pub coeff_fn: SampledFunction,
    pub mass_sq: f64,
}

/// Decomposition summary alongside the packets.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub packets: Vec<WavePacket>,
    pub r: f64,
    pub delta: f64,
    /// Relative squared mass discarded by the drop threshold.
    pub dropped_mass: f64,
    /// Actual spatial lattice spacing after periodization (within one grid
    /// period of the nominal `R^{(1+delta)/2}`).
    pub v_spacing: f64,
    pub cap_spacing: f64,
}

struct CapCover {
    centers: Vec<Vec<f64>>,
    spacing: f64,
    dim: usize,
    per_axis: usize,
}

impl CapCover {
    fn new(dim: usize, r: f64) -> CapCover {
        let spacing = r.powf(-0.5);
        // Lattice covering [-1, 1] with one margin cap on each side.
        let per_axis = (2.0 / spacing).ceil() as usize + 1;
        let count = per_axis.pow(dim as u32);
        let mut centers = Vec::with_capacity(count);
        for flat in 0..count {
            let mut c = vec![0.0; dim];
            let mut rem = flat;
            for axis in (0..dim).rev() {
                let idx = rem % per_axis;
                rem /= per_axis;
                c[axis] = -1.0 + idx as f64 * spacing;
            }
            centers.push(c);
        }
        CapCover {
            centers,
            spacing,
            dim,
            per_axis,
        }
    }

    /// Unnormalized translate weight: radial bump of support radius
    /// 0.9 * spacing about the cap center.
    fn weight(&self, center: &[f64], omega: &[f64]) -> f64 {
        let r2: f64 = omega
            .iter()
            .zip(center)
            .map(|(w, c)| (w - c) * (w - c))
            .sum();
        bump(r2.sqrt() / (0.9 * self.spacing))
    }

    /// Sum of translate weights at a point; positive on the covered cube.
    fn weight_sum(&self, omega: &[f64]) -> f64 {
        // Only the caps within one spacing contribute.
        let mut total = 0.0;
        let mut idx = vec![0usize; self.dim];
        let lo: Vec<i64> = omega
            .iter()
            .map(|w| ((w + 1.0) / self.spacing).floor() as i64 - 1)
            .collect();
        let combos = 3usize.pow(self.dim as u32);
        for combo in 0..combos {
            let mut rem = combo;
            let mut ok = true;
            for axis in 0..self.dim {
                let off = (rem % 3) as i64;
                rem /= 3;
                let i = lo[axis] + off;
                if i < 0 || i >= self.per_axis as i64 {
                    ok = false;
                    break;
                }
                idx[axis] = i as usize;
            }
            if !ok {
                continue;
            }
            let mut flat = 0usize;
            for axis in 0..self.dim {
                flat = flat * self.per_axis + idx[axis];
            }
            total += self.weight(&self.centers[flat], omega);
        }
        total
    }

    /// Plateau window that equals 1 on the support of the normalized cap
    /// weight and vanishes outside the cap ball of radius `spacing`.
    fn outer_window(&self, center: &[f64], omega: &[f64]) -> f64 {
        let r: f64 = omega
            .iter()
            .zip(center)
            .map(|(w, c)| (w - c) * (w - c))
            .sum::<f64>()
            .sqrt();
        smooth_step(r / self.spacing, 0.9, 1.0)
    }
}

/// Frequency-side window machinery: translated profiles on the periodic
/// DFT frequency axis, normalized to a partition of unity.
struct ModulationWindows {
    /// Window centers per axis (shared across axes).
    centers: Vec<f64>,
    spacing: f64,
    period: f64,
    half_support: f64,
}

impl ModulationWindows {
    fn new(nominal_spacing: f64, period: f64) -> ModulationWindows {
        let count = (period / nominal_spacing).round().max(1.0);
        let spacing = period / count;
        let centers: Vec<f64> = (0..count as usize)
            .map(|i| -period / 2.0 + i as f64 * spacing)
            .collect();
        ModulationWindows {
            centers,
            spacing,
            period,
            half_support: spacing,
        }
    }

    fn periodic_dist(&self, a: f64, b: f64) -> f64 {
        let mut d = (a - b) % self.period;
        if d > self.period / 2.0 {
            d -= self.period;
        }
        if d < -self.period / 2.0 {
            d += self.period;
        }
        d
    }

    fn raw(&self, center: f64, z: f64) -> f64 {
        bump(self.periodic_dist(z, center) / self.half_support)
    }

    /// Normalized window value: translates divided by their sum, so the
    /// family sums to exactly 1 over the periodic axis.
    fn window(&self, index: usize, z: f64) -> f64 {
        let c = self.centers[index];
        let raw = self.raw(c, z);
        if raw == 0.0 {
            return 0.0;
        }
        let mut total = 0.0;
        for &other in &self.centers {
            total += self.raw(other, z);
        }
        raw / total
    }
}

fn fft_nd(values: &mut [Complex64], shape: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let dim = shape.len();
    for axis in 0..dim {
        let len = shape[axis];
        let fft = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let mut scratch = vec![Complex64::new(0.0, 0.0); len];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * len * stride + s;
                for k in 0..len {
                    scratch[k] = values[base + k * stride];
                }
                fft.process(&mut scratch);
                for k in 0..len {
                    values[base + k * stride] = scratch[k];
                }
            }
        }
    }
}

/// DFT frequency value for bin `k` of an N-point grid with spacing `step`:
/// wrapped to the symmetric range.
fn bin_frequency(k: usize, n: usize, step: f64) -> f64 {
    let period = 1.0 / step;
    let raw = k as f64 / (n as f64 * step);
    if raw >= period / 2.0 {
        raw - period
    } else {
        raw
    }
}

/// Wave packet decomposition of an input supported in the unit ball.
///
/// Caps of radius `R^{-1/2}` cover the frequency support with a normalized
/// bump partition; per cap, the spectrum is split by periodized windows on
/// the lattice of nominal spacing `R^{(1+delta)/2}`. Packets below the
/// relative mass threshold are dropped (and the discarded mass reported).
pub fn decompose(f: &SampledFunction, r: f64, delta: f64) -> Result<Decomposition> {
    if r < 64.0 {
        return Err(Error::parameter(format!("need R >= 64, got {r}")));
    }
    if f.dim > 2 {
        return Err(Error::parameter(
            "decomposition supports input dimension 1 or 2",
        ));
    }
    let dim = f.dim;
    let n = f.n_per_axis;
    let total_mass = f.l2_norm_sq();
    if total_mass == 0.0 {
        return Ok(Decomposition {
            packets: Vec::new(),
            r,
            delta,
            dropped_mass: 0.0,
            v_spacing: r.powf((1.0 + delta) / 2.0),
            cap_spacing: r.powf(-0.5),
        });
    }
    let cover = CapCover::new(dim, r);
    let period = 1.0 / f.step;
    let windows = ModulationWindows::new(r.powf((1.0 + delta) / 2.0), period);
    let shape = vec![n; dim];
    let w_per_axis = windows.centers.len();
    let w_total = w_per_axis.pow(dim as u32);

    let mut packets = Vec::new();
    let mut dropped = 0.0;
    let mut point = vec![0.0; dim];

    for (theta_index, center) in cover.centers.iter().enumerate() {
        // Cap piece psi_theta * f via the normalized partition of unity.
        let mut cap_vals = vec![Complex64::new(0.0, 0.0); f.len()];
        let mut cap_mass = 0.0;
        for flat in 0..f.len() {
            if f.values[flat].norm_sqr() == 0.0 {
                continue;
            }
            f.point_at(flat, &mut point);
            let w = cover.weight(center, &point);
            if w == 0.0 {
                continue;
            }
            let v = f.values[flat] * (w / cover.weight_sum(&point));
            cap_mass += v.norm_sqr();
            cap_vals[flat] = v;
        }
        if cap_mass * f.step.powi(dim as i32) / total_mass < DROP_THRESHOLD {
            dropped += cap_mass * f.step.powi(dim as i32);
            continue;
        }

        let mut spectrum = cap_vals;
        fft_nd(&mut spectrum, &shape, false);

        // Window masses first: the outer cap window only shrinks packets, so
        // a window whose spectral mass is already below threshold is dropped
        // without an inverse transform.
        let spec_total: f64 = spectrum.iter().map(|v| v.norm_sqr()).sum();
        for w_flat in 0..w_total {
            let mut w_idx = vec![0usize; dim];
            let mut rem = w_flat;
            for axis in (0..dim).rev() {
                w_idx[axis] = rem % w_per_axis;
                rem /= w_per_axis;
            }
            let v: Vec<f64> = w_idx.iter().map(|&i| windows.centers[i]).collect();

            let mut windowed = vec![Complex64::new(0.0, 0.0); spectrum.len()];
            let mut wmass = 0.0;
            for (flat, value) in spectrum.iter().enumerate() {
                if value.norm_sqr() == 0.0 {
                    continue;
                }
                let mut rem = flat;
                let mut wprod = 1.0;
                for axis in (0..dim).rev() {
                    let k = rem % n;
                    rem /= n;
                    let z = bin_frequency(k, n, f.step);
                    wprod *= windows.window(w_idx[axis], z);
                    if wprod == 0.0 {
                        break;
                    }
                }
                if wprod == 0.0 {
                    continue;
                }
                let wv = value * wprod;
                wmass += wv.norm_sqr();
                windowed[flat] = wv;
            }
            // Parseval bound for the eventual packet mass.
            let bound = wmass / spec_total.max(1e-300) * cap_mass * f.step.powi(dim as i32);
            if bound / total_mass < DROP_THRESHOLD {
                dropped += bound;
                continue;
            }

            fft_nd(&mut windowed, &shape, true);
            let scale = 1.0 / f.len() as f64;
            let mut coeff = SampledFunction::zeros(dim, n)?;
            let mut mass = 0.0;
            for flat in 0..windowed.len() {
                f.point_at(flat, &mut point);
                let outer = cover.outer_window(center, &point);
                if outer == 0.0 {
                    continue;
                }
                let v = windowed[flat] * scale * outer;
                mass += v.norm_sqr();
                coeff.values[flat] = v;
            }
            mass *= f.step.powi(dim as i32);
            if mass / total_mass < DROP_THRESHOLD {
                dropped += mass;
                continue;
            }
            packets.push(WavePacket {
                theta_index,
                theta_center: center.clone(),
                theta_radius: cover.spacing,
                v,
                coeff_fn: coeff,
                mass_sq: mass,
            });
        }
    }
    // Canonical order: lexicographic in (cap index, lattice point).
    packets.sort_by(|a, b| {
        a.theta_index
            .cmp(&b.theta_index)
            .then_with(|| a.v.partial_cmp(&b.v).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(Decomposition {
        packets,
        r,
        delta,
        dropped_mass: dropped / total_mass,
        v_spacing: windows.spacing,
        cap_spacing: cover.spacing,
    })
}

impl Decomposition {
    /// Relative L2 reconstruction error of the kept packets against the
    /// original input.
    pub fn reconstruction_error(&self, f: &SampledFunction) -> f64 {
        let mut sum = vec![Complex64::new(0.0, 0.0); f.len()];
        for p in &self.packets {
            for (a, b) in sum.iter_mut().zip(p.coeff_fn.values.iter()) {
                *a += b;
            }
        }
        let cell = f.step.powi(f.dim as i32);
        let mut err = 0.0;
        for (a, b) in sum.iter().zip(f.values.iter()) {
            err += (a - b).norm_sqr();
        }
        (err * cell).sqrt() / f.l2_norm()
    }

    /// Ratio of the packet mass sum to the input mass.
    pub fn orthogonality_ratio(&self, f: &SampledFunction) -> f64 {
        let total: f64 = self.packets.iter().map(|p| p.mass_sq).sum();
        total / f.l2_norm_sq()
    }
}

/// A tube: core curve samples with the packet's thickness and range.
#[derive(Clone, Debug)]
pub struct Tube {
    pub theta_index: usize,
    pub theta_center: Vec<f64>,
    pub v: Vec<f64>,
    pub radius: f64,
    pub t_range: (f64, f64),
    pub core_ts: Vec<f64>,
    pub core_points: Vec<Vec<f64>>,
}

impl Tube {
    /// Distance from x to the core, measured in the horizontal slice at the
    /// nearest sampled height.
    pub fn horizontal_distance(&self, x: &[f64]) -> f64 {
        let t = x[x.len() - 1];
        let step = if self.core_ts.len() > 1 {
            self.core_ts[1] - self.core_ts[0]
        } else {
            1.0
        };
        let idx = ((t - self.core_ts[0]) / step).round();
        if idx < 0.0 || idx as usize >= self.core_ts.len() {
            return f64::INFINITY;
        }
        let core = &self.core_points[idx as usize];
        x[..x.len() - 1]
            .iter()
            .zip(&core[..core.len() - 1])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64], dilate: f64) -> bool {
        let t = x[x.len() - 1];
        if t < self.t_range.0 || t > self.t_range.1 {
            return false;
        }
        self.horizontal_distance(x) < dilate * self.radius
    }
}

/// Builds the tube of a packet under a phase family at scale lambda: the
/// core solves `grad_w phi^lambda(x; w_theta) = v` for x' given the height,
/// in closed form for this phase class, with a residual check.
pub fn tube(
    packet: &WavePacket,
    phase: &PhaseFamily,
    lambda: f64,
    r: f64,
    delta: f64,
    samples: usize,
) -> Result<Tube> {
    let t_range = (-r, r);
    let samples = samples.max(2);
    let mut core_ts = Vec::with_capacity(samples);
    let mut core_points = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = t_range.0 + (t_range.1 - t_range.0) * i as f64 / (samples - 1) as f64;
        let x = phase.core_point(lambda, &packet.theta_center, &packet.v, t);
        let resid = (phase.grad_omega_lambda(lambda, &x, &packet.theta_center)
            - nalgebra::DVector::from_row_slice(&packet.v))
        .norm();
        if resid > 1e-8 {
            return Err(Error::CoreSolve {
                theta: packet.theta_index,
                v: packet.v.clone(),
                reason: format!("defining-equation residual {resid:.3e}"),
            });
        }
        core_ts.push(t);
        core_points.push(x);
    }
    Ok(Tube {
        theta_index: packet.theta_index,
        theta_center: packet.theta_center.clone(),
        v: packet.v.clone(),
        radius: r.powf(0.5 + delta),
        t_range,
        core_ts,
        core_points,
    })
}

/// Fraction of the squared field mass inside the dilated tube.
pub fn tube_mass_fraction(field: &Field, tube: &Tube, dilate: f64) -> f64 {
    let mut inside = 0.0;
    let mut total = 0.0;
    let mut x = vec![0.0; field.dim()];
    for flat in 0..field.len() {
        let m = field.values[flat].norm_sqr();
        if m == 0.0 {
            continue;
        }
        field.point_at(flat, &mut x);
        total += m;
        if dilate > 0.0 && tube.contains(&x, dilate) {
            inside += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        inside / total
    }
}

/// Target for tangency filtering.
#[derive(Clone, Debug)]
pub enum TangencyTarget {
    Subspace(Subspace),
    Variety(VarietyZ),
}

impl TangencyTarget {
    fn distance(&self, x: &[f64]) -> f64 {
        match self {
            TangencyTarget::Subspace(v) => {
                v.distance(&nalgebra::DVector::from_row_slice(x))
            }
            TangencyTarget::Variety(z) => z.distance(x),
        }
    }

    fn angle_to(&self, x: &[f64], dir: &nalgebra::DVector<f64>) -> f64 {
        match self {
            TangencyTarget::Subspace(v) => v.angle_to_vector(dir),
            TangencyTarget::Variety(z) => match z.tangent_space(x) {
                Ok(t) if t.dim() > 0 => t.angle_to_vector(dir),
                _ => std::f64::consts::FRAC_PI_2,
            },
        }
    }
}

/// Retains the packets whose tubes are contained in the
/// `R^{1/2 + delta_m}`-neighbourhood of the target and whose rescaled Gauss
/// directions along the core stay within the tangency angle window.
pub fn tangency_filter(
    packets: &[WavePacket],
    target: &TangencyTarget,
    phase: &PhaseFamily,
    lambda: f64,
    r: f64,
    delta: f64,
    delta_m: f64,
    constants: TangencyConstants,
) -> Result<Vec<usize>> {
    let window = r.powf(0.5 + delta_m);
    let angle_bound = constants.c_tang * r.powf(-0.5 + delta_m);
    let mut kept = Vec::new();
    for (i, p) in packets.iter().enumerate() {
        let tb = tube(p, phase, lambda, r, delta, 33)?;
        let mut ok = true;
        for (t, x) in tb.core_ts.iter().zip(&tb.core_points) {
            if x[..x.len() - 1].iter().any(|c| c.abs() > r) {
                continue;
            }
            if target.distance(x) + tb.radius > window {
                ok = false;
                break;
            }
            let g = phase.gauss_dir_lambda(lambda, *t, &p.theta_center);
            let g = &g / g.norm();
            if target.angle_to(x, &g) > angle_bound {
                ok = false;
                break;
            }
        }
        if ok {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// Mass fraction of the field's spectrum within `dist_scale` of the graph
/// cap `{(w, Q(w)) : w in theta}`, after demodulating by the cap-center
/// frequency. Operates on a cube-region field with equal steps.
pub fn fourier_cap_mass(
    field: &Field,
    form: &crate::geometry::QuadraticForm,
    theta_center: &[f64],
    theta_radius: f64,
    dist_scale: f64,
) -> Result<f64> {
    let dim = field.dim();
    let n_w = dim - 1;
    let step = field.steps[0];
    if field.steps.iter().any(|&s| (s - step).abs() > 1e-12) {
        return Err(Error::parameter("cap-mass check needs equal field steps"));
    }
    let wc = nalgebra::DVector::from_row_slice(theta_center);
    let mut xi_theta: Vec<f64> = theta_center.to_vec();
    xi_theta.push(form.eval(&wc));

    // Demodulate and transform.
    let mut buf = field.values.clone();
    let mut x = vec![0.0; dim];
    for (flat, v) in buf.iter_mut().enumerate() {
        field.point_at(flat, &mut x);
        let dot: f64 = x.iter().zip(&xi_theta).map(|(a, b)| a * b).sum();
        *v *= Complex64::from_polar(1.0, -2.0 * PI * dot);
    }
    fft_nd(&mut buf, &field.shape, false);

    // Sample the shifted cap once.
    let mut cap_pts: Vec<Vec<f64>> = Vec::new();
    let samples = 33usize;
    let mut idx = vec![0usize; n_w];
    loop {
        let mut w = Vec::with_capacity(n_w);
        for (axis, &i) in idx.iter().enumerate() {
            let _ = axis;
            w.push(theta_center[idx.len() - 1 - (idx.len() - 1)] + 0.0
                + (-1.0 + 2.0 * i as f64 / (samples - 1) as f64) * theta_radius);
        }
        // Recenter per axis.
        for (axis, &i) in idx.iter().enumerate() {
            w[axis] =
                theta_center[axis] + (-1.0 + 2.0 * i as f64 / (samples - 1) as f64) * theta_radius;
        }
        let wv = nalgebra::DVector::from_row_slice(&w);
        let mut pt: Vec<f64> = w.clone();
        pt.push(form.eval(&wv));
        for (a, b) in pt.iter_mut().zip(&xi_theta) {
            *a -= b;
        }
        cap_pts.push(pt);
        let mut axis = 0;
        loop {
            if axis == n_w {
                break;
            }
            idx[axis] += 1;
            if idx[axis] < samples {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
        if idx.iter().all(|&i| i == 0) {
            break;
        }
    }

    let mut near = 0.0;
    let mut total = 0.0;
    for (flat, v) in buf.iter().enumerate() {
        let m = v.norm_sqr();
        if m == 0.0 {
            continue;
        }
        total += m;
        let mut rem = flat;
        let mut xi = vec![0.0; dim];
        for axis in (0..dim).rev() {
            let k = rem % field.shape[axis];
            rem /= field.shape[axis];
            xi[axis] = bin_frequency(k, field.shape[axis], step);
        }
        let mut best = f64::INFINITY;
        for cp in &cap_pts {
            let d2: f64 = xi.iter().zip(cp).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d2);
            if best <= dist_scale * dist_scale {
                break;
            }
        }
        if best.sqrt() <= dist_scale {
            near += m;
        }
    }
    if total == 0.0 {
        Ok(1.0)
    } else {
        Ok(near / total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Signature;
    use crate::geometry::QuadraticForm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn smooth_random_input(dim: usize, n: usize, seed: u64) -> SampledFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(Vec<f64>, Complex64)> = (0..6)
            .map(|_| {
                let k: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let c = Complex64::from_polar(rng.gen::<f64>(), rng.gen_range(0.0..6.28));
                (k, c)
            })
            .collect();
        SampledFunction::from_fn(dim, n, |p| {
            let env: f64 = p.iter().map(|&x| bump(x / 0.85)).product();
            let mut v = Complex64::new(0.0, 0.0);
            for (k, c) in &modes {
                let dot: f64 = k.iter().zip(p).map(|(a, b)| a * b).sum();
                v += c * Complex64::from_polar(1.0, 2.0 * PI * dot);
            }
            v * env
        })
        .unwrap()
    }

    #[test]
    fn rejects_small_r() {
        let f = smooth_random_input(1, 128, 0);
        assert!(decompose(&f, 32.0, DELTA_DEFAULT).is_err());
    }

    #[test]
    fn reconstruction_and_orthogonality_1d() {
        for seed in 0..5 {
            let f = smooth_random_input(1, 512, seed);
            let dec = decompose(&f, 256.0, DELTA_DEFAULT).unwrap();
            let err = dec.reconstruction_error(&f);
            assert!(err <= 1e-6, "reconstruction error {err:.3e} at seed {seed}");
            let ratio = dec.orthogonality_ratio(&f);
            assert!(
                (0.25..=4.0).contains(&ratio),
                "orthogonality ratio {ratio} at seed {seed}"
            );
        }
    }

    #[test]
    fn reconstruction_and_orthogonality_2d() {
        for seed in 0..3 {
            let f = smooth_random_input(2, 128, seed);
            let dec = decompose(&f, 64.0, DELTA_DEFAULT).unwrap();
            let err = dec.reconstruction_error(&f);
            assert!(err <= 1e-6, "reconstruction error {err:.3e} at seed {seed}");
            let ratio = dec.orthogonality_ratio(&f);
            assert!(
                (0.25..=4.0).contains(&ratio),
                "orthogonality ratio {ratio} at seed {seed}"
            );
        }
    }

    #[test]
    fn single_packet_input_concentrates() {
        let r: f64 = 256.0;
        let n = 1024;
        // Aligned cap center and lattice point.
        let dec0 = decompose(&smooth_random_input(1, n, 1), r, DELTA_DEFAULT).unwrap();
        let s_v = dec0.v_spacing;
        let cap = dec0.cap_spacing;
        // Snap the cap center to the cover lattice (origin -1, spacing cap).
        let omega0 = ((0.3 + 1.0) / cap).round() * cap - 1.0;
        let v0 = 2.0 * s_v;
        let f = SampledFunction::from_fn(1, n, |p| {
            let env = bump((p[0] - omega0) * r.sqrt());
            Complex64::from_polar(env, -2.0 * PI * v0 * p[0])
        })
        .unwrap();
        let dec = decompose(&f, r, DELTA_DEFAULT).unwrap();
        let total: f64 = dec.packets.iter().map(|p| p.mass_sq).sum();
        let near: f64 = dec
            .packets
            .iter()
            .filter(|p| {
                let dv: f64 = p.v.iter().map(|&x| (x - v0) * (x - v0)).sum::<f64>().sqrt();
                let dw: f64 = (p.theta_center[0] - omega0).abs();
                dv <= 2.0 * s_v && dw <= 2.0 * cap
            })
            .map(|p| p.mass_sq)
            .sum();
        assert!(
            near / total >= 0.9,
            "single-packet concentration only {:.3}",
            near / total
        );
    }

    #[test]
    fn extension_tube_is_straight_and_vertical_at_origin() {
        let sig = Signature::new(3, 2).unwrap();
        let form = QuadraticForm::signature_matrix(sig);
        let phase = PhaseFamily::extension(&form);
        let packet = WavePacket {
            theta_index: 0,
            theta_center: vec![0.0, 0.0],
            theta_radius: 0.1,
            v: vec![3.0, -2.0],
            coeff_fn: SampledFunction::zeros(2, 4).unwrap(),
            mass_sq: 1.0,
        };
        let tb = tube(&packet, &phase, f64::INFINITY, 256.0, DELTA_DEFAULT, 9).unwrap();
        for p in &tb.core_points {
            assert_eq!(&p[..2], &[3.0, -2.0]);
        }

        // Nonzero center: straight line with direction (-grad Q, 1).
        let packet = WavePacket {
            theta_center: vec![0.5, 0.25],
            ..packet
        };
        let tb = tube(&packet, &phase, f64::INFINITY, 256.0, DELTA_DEFAULT, 9).unwrap();
        let g = form.gradient(&nalgebra::DVector::from_row_slice(&[0.5, 0.25]));
        for (t, p) in tb.core_ts.iter().zip(&tb.core_points) {
            assert!((p[0] - (3.0 - t * g[0])).abs() < 1e-12);
            assert!((p[1] - (-2.0 - t * g[1])).abs() < 1e-12);
        }
    }

    #[test]
    fn curved_tube_satisfies_defining_equation() {
        let phase = PhaseFamily::hyperbolic_model(3).unwrap();
        let lambda = 256.0;
        let packet = WavePacket {
            theta_index: 0,
            theta_center: vec![0.4, -0.3],
            theta_radius: 0.1,
            v: vec![1.0, 2.0],
            coeff_fn: SampledFunction::zeros(2, 4).unwrap(),
            mass_sq: 1.0,
        };
        let tb = tube(&packet, &phase, lambda, 128.0, DELTA_DEFAULT, 33).unwrap();
        // Curvature: the core is not affine in t.
        let a = &tb.core_points[0];
        let b = &tb.core_points[16];
        let c = &tb.core_points[32];
        let bend = (0..2)
            .map(|i| (a[i] + c[i] - 2.0 * b[i]).abs())
            .fold(0.0f64, f64::max);
        assert!(bend > 1e-6, "expected a curved core, bend = {bend:.3e}");
        for (t, x) in tb.core_ts.iter().zip(&tb.core_points) {
            let resid = (phase.grad_omega_lambda(lambda, x, &packet.theta_center)
                - nalgebra::DVector::from_row_slice(&packet.v))
            .norm();
            assert!(resid <= 1e-8, "residual {resid:.3e} at t = {t}");
        }
    }

    #[test]
    fn core_tangent_parallels_gauss_direction() {
        let phase = PhaseFamily::hyperbolic_model(3).unwrap();
        let lambda = 512.0;
        let packet = WavePacket {
            theta_index: 0,
            theta_center: vec![0.2, 0.6],
            theta_radius: 0.1,
            v: vec![-1.0, 0.5],
            coeff_fn: SampledFunction::zeros(2, 4).unwrap(),
            mass_sq: 1.0,
        };
        let tb = tube(&packet, &phase, lambda, 256.0, DELTA_DEFAULT, 257).unwrap();
        for i in 1..tb.core_ts.len() - 1 {
            let dt = tb.core_ts[i + 1] - tb.core_ts[i - 1];
            let tangent = nalgebra::DVector::from_fn(3, |a, _| {
                (tb.core_points[i + 1][a] - tb.core_points[i - 1][a]) / dt
            });
            let tangent = &tangent / tangent.norm();
            let g = phase.gauss_dir_lambda(lambda, tb.core_ts[i], &packet.theta_center);
            let g = &g / g.norm();
            let cross = (&tangent - &g).norm().min((&tangent + &g).norm());
            assert!(cross < 1e-6, "tangent deviates from Gauss direction: {cross:.3e}");
        }
    }

    #[test]
    fn tangency_filter_selects_aligned_caps() {
        // Packets on a grid of caps; target V = span{e2, e3}.
        let sig = Signature::new(3, 2).unwrap();
        let elliptic = QuadraticForm::signature_matrix(sig);
        let hyperbolic =
            QuadraticForm::new(nalgebra::DMatrix::from_row_slice(2, 2, &[0., 1., 1., 0.]))
                .unwrap();
        let v = Subspace::coordinate(3, &[2, 3]).unwrap();
        let r: f64 = 256.0;
        let delta_m = DELTA_M_DEFAULT;
        let mut packets = Vec::new();
        let caps = 17;
        for i in 0..caps {
            for j in 0..caps {
                let c = vec![
                    -0.8 + 1.6 * i as f64 / (caps - 1) as f64,
                    -0.8 + 1.6 * j as f64 / (caps - 1) as f64,
                ];
                packets.push(WavePacket {
                    theta_index: i * caps + j,
                    theta_center: c,
                    theta_radius: r.powf(-0.5),
                    v: vec![0.0, 0.0],
                    coeff_fn: SampledFunction::zeros(2, 4).unwrap(),
                    mass_sq: 1.0,
                });
            }
        }
        let window = r.powf(-0.5 + delta_m);

        let phase = PhaseFamily::extension(&elliptic);
        let kept = tangency_filter(
            &packets,
            &TangencyTarget::Subspace(v.clone()),
            &phase,
            f64::INFINITY,
            r,
            DELTA_DEFAULT,
            delta_m,
            TangencyConstants::default(),
        )
        .unwrap();
        assert!(!kept.is_empty());
        for &i in &kept {
            // Elliptic: retained caps near the line {w1 = 0}.
            assert!(
                packets[i].theta_center[0].abs() <= 2.0 * window,
                "elliptic filter kept cap at {:?}",
                packets[i].theta_center
            );
        }

        let phase = PhaseFamily::extension(&hyperbolic);
        let kept = tangency_filter(
            &packets,
            &TangencyTarget::Subspace(v),
            &phase,
            f64::INFINITY,
            r,
            DELTA_DEFAULT,
            delta_m,
            TangencyConstants::default(),
        )
        .unwrap();
        assert!(!kept.is_empty());
        for &i in &kept {
            // Hyperbolic: retained caps near the line {w2 = 0}.
            assert!(
                packets[i].theta_center[1].abs() <= 2.0 * window,
                "hyperbolic filter kept cap at {:?}",
                packets[i].theta_center
            );
        }

        // Empty input stays empty.
        let kept = tangency_filter(
            &[],
            &TangencyTarget::Subspace(Subspace::coordinate(3, &[2, 3]).unwrap()),
            &phase,
            f64::INFINITY,
            r,
            DELTA_DEFAULT,
            delta_m,
            TangencyConstants::default(),
        )
        .unwrap();
        assert!(kept.is_empty());
    }
}
