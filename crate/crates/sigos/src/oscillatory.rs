//! Numerical evaluation of extension operators and their variable-coefficient
//! generalisations with phase `<x', w> + (1/2) <A(x_n) w, w>`, plus the
//! reduced-phase validator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::bump::bump;
use crate::error::{Error, Result};
use crate::exponents::Signature;
use crate::geometry::QuadraticForm;
use crate::grid::{Field, Region, SampledFunction};

/// Default scale of the amplitude cutoffs relative to the unit ball.
pub const AMPLITUDE_SCALE: f64 = 0.9;

/// Safety factor in the resolution rule `h <= 1 / (4 max|x|)`.
pub const RESOLUTION_MARGIN: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseKind {
    /// Linear-in-t family `A(t) = t L`: the extension operator for the
    /// graph of the quadratic form L.
    Extension,
    /// Curved family with paired blocks `[[0, t], [t, t^2]]` (signature 0).
    HyperbolicModel,
    /// Curved family with paired blocks `[[t, t^2], [t^2, t + t^3]]`
    /// (maximal signature).
    EllipticModel,
    /// Direct sum of the hyperbolic and elliptic model families.
    TensorModel,
}

/// A one-parameter family of symmetric matrices, polynomial in t:
/// `A(t) = sum_k t^k C_k` with `C_0 = 0`.
#[derive(Clone, Debug)]
pub struct PhaseFamily {
    pub n: usize,
    pub kind: PhaseKind,
    pub sigma: i64,
    coeffs: Vec<DMatrix<f64>>,
}

fn block_diag(dim: usize, pair_block: [f64; 4], pairs: usize, tail: Option<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for p in 0..pairs {
        let i = 2 * p;
        m[(i, i)] = pair_block[0];
        m[(i, i + 1)] = pair_block[1];
        m[(i + 1, i)] = pair_block[2];
        m[(i + 1, i + 1)] = pair_block[3];
    }
    if let Some(t) = tail {
        m[(dim - 1, dim - 1)] = t;
    }
    m
}

impl PhaseFamily {
    pub fn extension(form: &QuadraticForm) -> Self {
        PhaseFamily {
            n: form.dim() + 1,
            kind: PhaseKind::Extension,
            sigma: form.sigma,
            coeffs: vec![DMatrix::zeros(form.dim(), form.dim()), form.mat.clone()],
        }
    }

    pub fn hyperbolic_model(d: usize) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::parameter(format!(
                "hyperbolic model family needs odd d >= 3, got {d}"
            )));
        }
        let dim = d - 1;
        let pairs = dim / 2;
        Ok(PhaseFamily {
            n: d,
            kind: PhaseKind::HyperbolicModel,
            sigma: 0,
            coeffs: vec![
                DMatrix::zeros(dim, dim),
                block_diag(dim, [0., 1., 1., 0.], pairs, None),
                block_diag(dim, [0., 0., 0., 1.], pairs, None),
            ],
        })
    }

    pub fn elliptic_model(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::parameter(format!(
                "elliptic model family needs d >= 2, got {d}"
            )));
        }
        let dim = d - 1;
        let pairs = dim / 2;
        let tail = if d % 2 == 0 { Some(1.0) } else { None };
        Ok(PhaseFamily {
            n: d,
            kind: PhaseKind::EllipticModel,
            sigma: (d - 1) as i64,
            coeffs: vec![
                DMatrix::zeros(dim, dim),
                block_diag(dim, [1., 0., 0., 1.], pairs, tail),
                block_diag(dim, [0., 1., 1., 0.], pairs, None),
                block_diag(dim, [0., 0., 0., 1.], pairs, None),
            ],
        })
    }

    /// `H_{n-sigma} (+) E_{sigma+1}` on R^{n-1}.
    pub fn tensor_model(sig: Signature) -> Result<Self> {
        let n = sig.n as usize;
        let sigma = sig.sigma as usize;
        let dim = n - 1;
        let hyp_dim = n - sigma - 1;
        if hyp_dim == 0 {
            let mut fam = Self::elliptic_model(n)?;
            fam.kind = PhaseKind::TensorModel;
            return Ok(fam);
        }
        let hyp = Self::hyperbolic_model(n - sigma)?;
        let mut coeffs = vec![DMatrix::zeros(dim, dim); 4];
        for (k, c) in hyp.coeffs.iter().enumerate() {
            coeffs[k].view_mut((0, 0), (hyp_dim, hyp_dim)).copy_from(c);
        }
        if sigma > 0 {
            let ell = Self::elliptic_model(sigma + 1)?;
            for (k, c) in ell.coeffs.iter().enumerate() {
                coeffs[k]
                    .view_mut((hyp_dim, hyp_dim), (sigma, sigma))
                    .copy_from(c);
            }
        }
        while coeffs.last().map(|c| c.amax() == 0.0) == Some(true) && coeffs.len() > 1 {
            coeffs.pop();
        }
        Ok(PhaseFamily {
            n,
            kind: PhaseKind::TensorModel,
            sigma: sig.sigma,
            coeffs,
        })
    }

    pub fn omega_dim(&self) -> usize {
        self.n - 1
    }

    pub fn is_linear_in_t(&self) -> bool {
        self.coeffs.len() <= 2
    }

    pub fn a_at(&self, t: f64) -> DMatrix<f64> {
        let dim = self.omega_dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut tk = 1.0;
        for c in &self.coeffs {
            m += c * tk;
            tk *= t;
        }
        m
    }

    pub fn a_deriv_at(&self, t: f64) -> DMatrix<f64> {
        let dim = self.omega_dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut tk = 1.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            m += c * (k as f64 * tk);
            tk *= t;
        }
        m
    }

    /// `lambda A(x_n / lambda) = sum_k x_n^k lambda^{1-k} C_k`, evaluated
    /// without forming `x_n / lambda` (exact for linear families even at
    /// infinite lambda).
    pub fn scaled_matrix(&self, lambda: f64, x_n: f64) -> DMatrix<f64> {
        let dim = self.omega_dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let factor = x_n.powi(k as i32) / lambda.powi(k as i32 - 1);
            if factor != 0.0 {
                m += c * factor;
            }
        }
        m
    }

    /// Unscaled phase `phi(x; w)`.
    pub fn phi(&self, x: &[f64], omega: &[f64]) -> f64 {
        self.phi_lambda(1.0, x, omega)
    }

    /// `phi^lambda(x; w) = <x', w> + (1/2) <lambda A(x_n/lambda) w, w>`.
    pub fn phi_lambda(&self, lambda: f64, x: &[f64], omega: &[f64]) -> f64 {
        let dim = self.omega_dim();
        let mut linear = 0.0;
        for i in 0..dim {
            linear += x[i] * omega[i];
        }
        linear + self.quad_part(lambda, x[dim], omega)
    }

    /// The non-linear part of `phi^lambda` at height x_n.
    pub fn quad_part(&self, lambda: f64, x_n: f64, omega: &[f64]) -> f64 {
        let m = self.scaled_matrix(lambda, x_n);
        let w = DVector::from_row_slice(omega);
        0.5 * (&m * &w).dot(&w)
    }

    /// Gradient of `phi^lambda` in omega: `x' + lambda A(x_n/lambda) w`.
    pub fn grad_omega_lambda(&self, lambda: f64, x: &[f64], omega: &[f64]) -> DVector<f64> {
        let dim = self.omega_dim();
        let m = self.scaled_matrix(lambda, x[dim]);
        let w = DVector::from_row_slice(omega);
        DVector::from_row_slice(&x[..dim]) + m * w
    }

    /// Rescaled unnormalised Gauss direction `(-A'(x_n/lambda) w, 1)`.
    pub fn gauss_dir_lambda(&self, lambda: f64, x_n: f64, omega: &[f64]) -> DVector<f64> {
        let dim = self.omega_dim();
        let d = self.a_deriv_at(x_n / lambda);
        let w = DVector::from_row_slice(omega);
        let g = d * w;
        let mut out = DVector::zeros(dim + 1);
        for i in 0..dim {
            out[i] = -g[i];
        }
        out[dim] = 1.0;
        out
    }

    /// Closed-form core point of the defining equation
    /// `grad_w phi^lambda(x; w_theta) = v`: `x' = v - lambda A(x_n/lambda) w`.
    pub fn core_point(&self, lambda: f64, omega_theta: &[f64], v: &[f64], t: f64) -> Vec<f64> {
        let m = self.scaled_matrix(lambda, t);
        let w = DVector::from_row_slice(omega_theta);
        let shift = m * w;
        let mut x = Vec::with_capacity(self.n);
        for i in 0..self.omega_dim() {
            x.push(v[i] - shift[i]);
        }
        x.push(t);
        x
    }
}

/// Amplitude cutoff for the variable-coefficient operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Amplitude {
    One,
    /// Tensor product of 1D bumps of scale [`AMPLITUDE_SCALE`] in every
    /// spatial and frequency coordinate.
    TensorBump,
}

impl Amplitude {
    pub fn omega_factor(&self, omega: &[f64]) -> f64 {
        match self {
            Amplitude::One => 1.0,
            Amplitude::TensorBump => omega.iter().map(|&w| bump(w / AMPLITUDE_SCALE)).product(),
        }
    }

    pub fn x_factor(&self, lambda: f64, x: &[f64]) -> f64 {
        match self {
            Amplitude::One => 1.0,
            Amplitude::TensorBump => x
                .iter()
                .map(|&v| bump(v / (AMPLITUDE_SCALE * lambda)))
                .product(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformMode {
    Auto,
    Direct,
    Fft,
}

/// An oscillatory integral operator: phase family, scale, amplitude.
#[derive(Clone, Debug)]
pub struct Operator {
    pub phase: PhaseFamily,
    pub lambda: f64,
    pub amplitude: Amplitude,
}

impl Operator {
    pub fn extension(form: &QuadraticForm) -> Self {
        Operator {
            phase: PhaseFamily::extension(form),
            lambda: f64::INFINITY,
            amplitude: Amplitude::One,
        }
    }

    pub fn hormander(phase: PhaseFamily, lambda: f64) -> Self {
        Operator {
            phase,
            lambda,
            amplitude: Amplitude::TensorBump,
        }
    }

    pub fn with_amplitude(mut self, amplitude: Amplitude) -> Self {
        self.amplitude = amplitude;
        self
    }

    fn check_resolution(&self, f: &SampledFunction, region: &Region) -> Result<()> {
        let required = 1.0 / (RESOLUTION_MARGIN * region.max_norm().max(1.0));
        if f.step > required * (1.0 + 1e-12) {
            return Err(Error::Resolution {
                required,
                got: f.step,
            });
        }
        Ok(())
    }

    fn check_region(&self, region: &Region) -> Result<()> {
        if region.dim() != self.phase.n {
            return Err(Error::parameter(format!(
                "region dimension {} does not match operator dimension {}",
                region.dim(),
                self.phase.n
            )));
        }
        if self.lambda.is_finite() && region.max_norm() > self.lambda * (1.0 + 1e-9) {
            return Err(Error::parameter(format!(
                "region escapes the lambda-ball: |x| up to {:.3} > lambda = {}",
                region.max_norm(),
                self.lambda
            )));
        }
        Ok(())
    }

    /// Pointwise evaluation by direct quadrature over the input grid.
    pub fn eval_point(&self, f: &SampledFunction, x: &[f64]) -> Complex64 {
        let dim = f.dim;
        let mut point = vec![0.0; dim];
        let mut acc = Complex64::new(0.0, 0.0);
        for flat in 0..f.len() {
            f.point_at(flat, &mut point);
            let amp = self.amplitude.omega_factor(&point);
            if amp == 0.0 || f.values[flat].norm_sqr() == 0.0 {
                continue;
            }
            let phase = self.phase.phi_lambda(self.lambda, x, &point);
            acc += f.values[flat] * amp * Complex64::from_polar(1.0, 2.0 * PI * phase);
        }
        let cell = f.step.powi(dim as i32);
        acc * cell * self.amplitude.x_factor(self.lambda, x)
    }

    /// Full field over a region: per-slice transforms in the last
    /// coordinate, FFT-accelerated when the output grid is compatible.
    pub fn apply(
        &self,
        f: &SampledFunction,
        region: &Region,
        steps: &[f64],
        mode: TransformMode,
    ) -> Result<Field> {
        self.check_region(region)?;
        self.check_resolution(f, region)?;
        if f.dim != self.phase.omega_dim() {
            return Err(Error::parameter(
                "input dimension does not match the operator",
            ));
        }
        let mut field = Field::zeros(region.clone(), steps.to_vec(), self.lambda)?;
        let xdim = self.phase.omega_dim();
        let slice_shape: Vec<usize> = field.shape[..xdim].to_vec();
        let slice_len: usize = slice_shape.iter().product();
        let n_slices = field.shape[xdim];

        let plans = SlicePlan::build(f, &field, mode)?;

        let slices: Vec<Vec<Complex64>> = (0..n_slices)
            .into_par_iter()
            .map(|k| {
                let x_n = region.min[xdim] + k as f64 * steps[xdim];
                self.transform_slice(f, &field, &plans, x_n, slice_len)
            })
            .collect();

        let mut x = vec![0.0; region.dim()];
        for (k, slice) in slices.iter().enumerate() {
            for (m, value) in slice.iter().enumerate() {
                let flat = m * n_slices + k;
                field.point_at(flat, &mut x);
                field.values[flat] = value * self.amplitude.x_factor(self.lambda, &x);
            }
        }
        Ok(field)
    }

    fn transform_slice(
        &self,
        f: &SampledFunction,
        field: &Field,
        plans: &SlicePlan,
        x_n: f64,
        slice_len: usize,
    ) -> Vec<Complex64> {
        let dim = f.dim;
        let mut point = vec![0.0; dim];
        let cell = f.step.powi(dim as i32);
        let mut weighted = vec![Complex64::new(0.0, 0.0); f.len()];
        for flat in 0..f.len() {
            if f.values[flat].norm_sqr() == 0.0 {
                continue;
            }
            f.point_at(flat, &mut point);
            let amp = self.amplitude.omega_factor(&point);
            if amp == 0.0 {
                continue;
            }
            let quad = self.phase.quad_part(self.lambda, x_n, &point);
            weighted[flat] =
                f.values[flat] * amp * Complex64::from_polar(cell, 2.0 * PI * quad);
        }
        plans.run(f, field, &weighted, slice_len)
    }
}

enum SlicePlan {
    Direct,
    Fft { pads: Vec<usize>, ffts: Vec<Arc<dyn Fft<f64>>> },
}

impl SlicePlan {
    fn build(f: &SampledFunction, field: &Field, mode: TransformMode) -> Result<SlicePlan> {
        let xdim = f.dim;
        let compatible = (0..xdim).all(|a| {
            let m = 1.0 / (field.steps[a] * f.step);
            (m - m.round()).abs() < 1e-6 && m.round() >= f.n_per_axis as f64
        }) && xdim <= 2;
        match mode {
            TransformMode::Direct => Ok(SlicePlan::Direct),
            TransformMode::Fft if !compatible => Err(Error::parameter(
                "output grid is not compatible with the FFT path; steps must satisfy dx * h = 1/M with M >= the input grid size",
            )),
            TransformMode::Auto if !compatible => Ok(SlicePlan::Direct),
            _ => {
                let mut planner = FftPlanner::new();
                let pads: Vec<usize> = (0..xdim)
                    .map(|a| (1.0 / (field.steps[a] * f.step)).round() as usize)
                    .collect();
                let ffts = pads
                    .iter()
                    .map(|&m| planner.plan_fft_inverse(m))
                    .collect();
                Ok(SlicePlan::Fft { pads, ffts })
            }
        }
    }

    fn run(
        &self,
        f: &SampledFunction,
        field: &Field,
        weighted: &[Complex64],
        slice_len: usize,
    ) -> Vec<Complex64> {
        match self {
            SlicePlan::Direct => direct_slice(f, field, weighted, slice_len),
            SlicePlan::Fft { pads, ffts } => fft_slice(f, field, weighted, slice_len, pads, ffts),
        }
    }
}

fn direct_slice(
    f: &SampledFunction,
    field: &Field,
    weighted: &[Complex64],
    slice_len: usize,
) -> Vec<Complex64> {
    let xdim = f.dim;
    let mut out = vec![Complex64::new(0.0, 0.0); slice_len];
    let mut omega = vec![0.0; xdim];
    let mut x = vec![0.0; xdim];
    for (m, slot) in out.iter_mut().enumerate() {
        let mut rem = m;
        for axis in (0..xdim).rev() {
            let idx = rem % field.shape[axis];
            rem /= field.shape[axis];
            x[axis] = field.region.min[axis] + idx as f64 * field.steps[axis];
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, w) in weighted.iter().enumerate() {
            if w.norm_sqr() == 0.0 {
                continue;
            }
            f.point_at(flat, &mut omega);
            let dot: f64 = x.iter().zip(&omega).map(|(a, b)| a * b).sum();
            acc += w * Complex64::from_polar(1.0, 2.0 * PI * dot);
        }
        *slot = acc;
    }
    out
}

/// The same sum reorganised as a zero-padded inverse DFT per axis: with
/// `dx_a h = 1/M_a`, `e^{2 pi i x_m w_j}` splits into a fixed input phase, a
/// fixed output phase, and the DFT kernel `e^{2 pi i m j / M}`.
fn fft_slice(
    f: &SampledFunction,
    field: &Field,
    weighted: &[Complex64],
    slice_len: usize,
    pads: &[usize],
    ffts: &[Arc<dyn Fft<f64>>],
) -> Vec<Complex64> {
    let xdim = f.dim;
    let n = f.n_per_axis;
    match xdim {
        1 => {
            let m0 = pads[0];
            let mut buf = vec![Complex64::new(0.0, 0.0); m0];
            for j in 0..n {
                let omega = f.origin[0] + j as f64 * f.step;
                let phase = 2.0 * PI * field.region.min[0] * omega;
                buf[j] = weighted[j] * Complex64::from_polar(1.0, phase);
            }
            ffts[0].process(&mut buf);
            let mut out = vec![Complex64::new(0.0, 0.0); slice_len];
            for (m, slot) in out.iter_mut().enumerate() {
                let post = 2.0 * PI * (m as f64 * field.steps[0]) * f.origin[0];
                *slot = buf[m % m0] * Complex64::from_polar(1.0, post);
            }
            out
        }
        2 => {
            let (m0, m1) = (pads[0], pads[1]);
            let mut buf = vec![Complex64::new(0.0, 0.0); m0 * m1];
            for j0 in 0..n {
                let w0 = f.origin[0] + j0 as f64 * f.step;
                let p0 = field.region.min[0] * w0;
                for j1 in 0..n {
                    let w1 = f.origin[1] + j1 as f64 * f.step;
                    let p = 2.0 * PI * (p0 + field.region.min[1] * w1);
                    buf[j0 * m1 + j1] =
                        weighted[j0 * n + j1] * Complex64::from_polar(1.0, p);
                }
            }
            for row in buf.chunks_exact_mut(m1) {
                ffts[1].process(row);
            }
            let mut col = vec![Complex64::new(0.0, 0.0); m0];
            let c1 = field.shape[1];
            for j1 in 0..c1.min(m1) {
                for (j0, c) in col.iter_mut().enumerate() {
                    *c = buf[j0 * m1 + j1];
                }
                ffts[0].process(&mut col);
                for (j0, c) in col.iter().enumerate() {
                    buf[j0 * m1 + j1] = *c;
                }
            }
            let mut out = vec![Complex64::new(0.0, 0.0); slice_len];
            let c0 = field.shape[0];
            for m_0 in 0..c0 {
                let post0 = (m_0 as f64 * field.steps[0]) * f.origin[0];
                for m_1 in 0..c1 {
                    let post = 2.0 * PI * (post0 + (m_1 as f64 * field.steps[1]) * f.origin[1]);
                    out[m_0 * c1 + m_1] =
                        buf[(m_0 % m0) * m1 + (m_1 % m1)] * Complex64::from_polar(1.0, post);
                }
            }
            out
        }
        _ => direct_slice(f, field, weighted, slice_len),
    }
}

/// Deviation report for the reduced-phase conditions on a sample box.
#[derive(Clone, Debug)]
pub struct ReducedPhaseReport {
    /// Operator-norm deviation of the mixed Hessian from the identity
    /// (identically zero for this phase class).
    pub dev_mixed: f64,
    /// Largest `|grad_w d_{x_n} phi|` over the sample box.
    pub dev_gradient: f64,
    /// Largest operator-norm drift `|A'(x_n) - A'(0)|` over the box.
    pub dev_curvature: f64,
    /// Operator-norm distance of `A'(0)` from the reference signature
    /// matrix (informational; the family is reduced after a linear change
    /// of frequency coordinates).
    pub ref_distance: f64,
    pub signature_ok: bool,
    pub c_ex: f64,
    pub pass: bool,
}

fn sym_opnorm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &e| a.max(e.abs()))
}

/// Checks the three reduced-phase conditions by exact differentiation of the
/// polynomial phase at sampled points of `x_box x omega_box`.
pub fn validate_reduced_phase(
    phase: &PhaseFamily,
    x_box: &Region,
    omega_box: &Region,
    samples_per_axis: usize,
    c_ex: f64,
) -> Result<ReducedPhaseReport> {
    if x_box.dim() != phase.n || omega_box.dim() != phase.omega_dim() {
        return Err(Error::parameter("sample box dimensions do not match"));
    }
    let xdim = phase.omega_dim();
    let samples = samples_per_axis.max(2);
    let a0 = phase.a_deriv_at(0.0);
    let sig_ref = QuadraticForm::signature_matrix(Signature::new(
        phase.n as i64,
        phase.sigma,
    )?);
    let ref_distance = sym_opnorm(&(&a0 - &sig_ref.mat));
    let signature_ok = QuadraticForm::new(a0.clone())
        .map(|q| q.sigma == phase.sigma)
        .unwrap_or(false);

    let grid = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (samples - 1) as f64;
    let mut dev_curvature = 0.0f64;
    let mut dev_gradient = 0.0f64;
    for i in 0..samples {
        let x_n = grid(x_box.min[xdim], x_box.max[xdim], i);
        let d = phase.a_deriv_at(x_n);
        dev_curvature = dev_curvature.max(sym_opnorm(&(&d - &a0)));
        // |A'(x_n) w| is maximised over the omega box at a corner.
        for mask in 0..(1usize << xdim) {
            let w = DVector::from_fn(xdim, |a, _| {
                if mask >> a & 1 == 1 {
                    omega_box.max[a]
                } else {
                    omega_box.min[a]
                }
            });
            dev_gradient = dev_gradient.max((&d * w).norm());
        }
    }
    let dev_mixed = 0.0;
    let pass =
        dev_mixed < c_ex && dev_gradient < c_ex && dev_curvature < c_ex && signature_ok;
    Ok(ReducedPhaseReport {
        dev_mixed,
        dev_gradient,
        dev_curvature,
        ref_distance,
        signature_ok,
        c_ex,
        pass,
    })
}

/// Bisects the half-width of a centred cube `X` until the reduced-phase
/// check passes with the given omega box; returns the largest passing
/// half-width found.
pub fn largest_passing_box(
    phase: &PhaseFamily,
    omega_box: &Region,
    c_ex: f64,
) -> Result<f64> {
    let check = |half: f64| -> Result<bool> {
        let x_box = Region::cube(phase.n, half);
        Ok(validate_reduced_phase(phase, &x_box, omega_box, 17, c_ex)?.pass)
    };
    if !check(1e-9)? {
        return Ok(0.0);
    }
    let mut lo = 1e-9;
    let mut hi = 1.0;
    if check(hi)? {
        return Ok(hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if check(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
