//! Finite-dimensional linear algebra: signature forms, Gauss maps, the
//! auxiliary-subspace construction, restricted-form eigenvalue counts,
//! transversality angles and the model varieties.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::{self, Signature};

const SYMMETRY_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-10;
const RANK_TOL: f64 = 1e-8;

/// Angle threshold under which a subspace counts as degenerate relative to
/// the horizontal hyperplane.
pub const ANGLE_REJECT: f64 = 1e-6;

/// Guard band around the small-eigenvalue interval endpoints; instances with
/// an eigenvalue this close to the boundary are resampled by fuzz drivers.
pub const EIG_GUARD: f64 = 1e-10;

/// A symmetric invertible form `Q(u) = (1/2) <L u, u>` on R^(n-1) with
/// declared signature.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    pub mat: DMatrix<f64>,
    pub sigma: i64,
}

impl QuadraticForm {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim || dim == 0 {
            return Err(Error::parameter("form matrix must be square and nonempty"));
        }
        let asym = (&mat - mat.transpose()).amax();
        if asym > SYMMETRY_TOL * (1.0 + mat.amax()) {
            return Err(Error::parameter(format!(
                "form matrix not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let eigs = mat.clone().symmetric_eigen().eigenvalues;
        let min_abs = eigs.iter().fold(f64::INFINITY, |a, &e| a.min(e.abs()));
        if min_abs <= 0.0 {
            return Err(Error::parameter("form matrix is singular"));
        }
        let pos = eigs.iter().filter(|&&e| e > 0.0).count() as i64;
        let neg = dim as i64 - pos;
        Ok(QuadraticForm {
            mat,
            sigma: (pos - neg).abs(),
        })
    }

    /// Block-diagonal form with `(n-1+sigma)/2` entries +1 followed by
    /// `(n-1-sigma)/2` entries -1.
    pub fn signature_matrix(sig: Signature) -> Self {
        let dim = (sig.n - 1) as usize;
        let pos = ((sig.n - 1 + sig.sigma) / 2) as usize;
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = if i < pos { 1.0 } else { -1.0 };
        }
        QuadraticForm {
            mat: m,
            sigma: sig.sigma,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn eval(&self, u: &DVector<f64>) -> f64 {
        0.5 * (&self.mat * u).dot(u)
    }

    pub fn gradient(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.mat * u
    }

    /// Unnormalised Gauss map `(-grad Q(u), 1)` in R^n.
    pub fn gauss_map(&self, u: &DVector<f64>) -> DVector<f64> {
        let g = self.gradient(u);
        let mut out = DVector::zeros(self.dim() + 1);
        for i in 0..self.dim() {
            out[i] = -g[i];
        }
        out[self.dim()] = 1.0;
        out
    }

    /// Minimum eigenvalue modulus.
    pub fn spectral_gap(&self) -> f64 {
        self.mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &e| a.min(e.abs()))
    }

    /// Random form of prescribed signature: a fixed-sign diagonal with
    /// moduli in [1/2, 5/2], conjugated by a Haar-ish rotation.
    pub fn random(sig: Signature, rng: &mut ChaCha8Rng) -> Self {
        let dim = (sig.n - 1) as usize;
        let pos = ((sig.n - 1 + sig.sigma) / 2) as usize;
        let rot = random_rotation(dim, rng);
        let mut d = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let modulus = 0.5 + 2.0 * rng.gen::<f64>();
            d[(i, i)] = if i < pos { modulus } else { -modulus };
        }
        let m = &rot * d * rot.transpose();
        let m = 0.5 * (&m + m.transpose());
        QuadraticForm {
            mat: m,
            sigma: sig.sigma,
        }
    }
}

/// A linear subspace of R^ambient stored as a column-orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: DMatrix<f64>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: DMatrix::zeros(ambient, 0),
        }
    }

    /// Orthonormalizes the given spanning columns, discarding numerically
    /// dependent ones.
    pub fn from_span(ambient: usize, columns: &[DVector<f64>]) -> Result<Self> {
        for c in columns {
            if c.len() != ambient {
                return Err(Error::parameter("span vector has wrong ambient dimension"));
            }
        }
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for c in columns {
            let mut v = c.clone();
            for _ in 0..2 {
                for b in &basis {
                    let p = b.dot(&v);
                    v -= b * p;
                }
            }
            let norm = v.norm();
            if norm > RANK_TOL * (1.0 + c.norm()) {
                basis.push(v / norm);
            }
        }
        Ok(Self::from_orthonormal(ambient, basis))
    }

    fn from_orthonormal(ambient: usize, cols: Vec<DVector<f64>>) -> Self {
        let mut basis = DMatrix::zeros(ambient, cols.len());
        for (j, c) in cols.iter().enumerate() {
            basis.set_column(j, c);
        }
        Subspace { ambient, basis }
    }

    /// Span of the coordinate axes in `axes` (1-based).
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Result<Self> {
        let cols: Vec<DVector<f64>> = axes
            .iter()
            .map(|&a| {
                if a == 0 || a > ambient {
                    Err(Error::parameter(format!("axis {a} out of range")))
                } else {
                    let mut v = DVector::zeros(ambient);
                    v[a - 1] = 1.0;
                    Ok(v)
                }
            })
            .collect::<Result<_>>()?;
        Self::from_span(ambient, &cols)
    }

    pub fn random(ambient: usize, dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let cols: Vec<DVector<f64>> = (0..dim)
            .map(|_| DVector::from_fn(ambient, |_, _| rng.sample::<f64, _>(StandardNormal)))
            .collect();
        Self::from_span(ambient, &cols).expect("gaussian span")
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn check_orthonormal(&self) -> Result<()> {
        let g = self.basis.transpose() * &self.basis;
        let err = (&g - DMatrix::identity(self.dim(), self.dim())).amax();
        if err > ORTHO_TOL {
            return Err(Error::Assertion(format!(
                "basis not orthonormal (gram deviation {err:.3e})"
            )));
        }
        Ok(())
    }

    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.transpose() * v)
    }

    pub fn distance(&self, v: &DVector<f64>) -> f64 {
        (v - self.project(v)).norm()
    }

    /// Orthogonal projector as a dense matrix.
    fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Orthogonal complement within the ambient space.
    pub fn complement(&self) -> Subspace {
        let p = DMatrix::identity(self.ambient, self.ambient) - self.projector();
        let se = p.symmetric_eigen();
        let mut cols = Vec::new();
        for (i, &ev) in se.eigenvalues.iter().enumerate() {
            if ev > 0.5 {
                cols.push(se.eigenvectors.column(i).into_owned());
            }
        }
        Subspace::from_span(self.ambient, &cols).expect("complement span")
    }

    /// Intersection of two subspaces: eigenvectors of `P_V + P_W` at
    /// eigenvalue two.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::parameter("ambient dimension mismatch"));
        }
        let p = self.projector() + other.projector();
        let se = p.symmetric_eigen();
        let mut cols = Vec::new();
        for (i, &ev) in se.eigenvalues.iter().enumerate() {
            if (ev - 2.0).abs() < 1e-6 {
                cols.push(se.eigenvectors.column(i).into_owned());
            }
        }
        Subspace::from_span(self.ambient, &cols)
    }

    /// Image under an invertible matrix, re-orthonormalized.
    pub fn map(&self, m: &DMatrix<f64>) -> Result<Subspace> {
        let cols: Vec<DVector<f64>> = (0..self.dim())
            .map(|j| m * self.basis.column(j).into_owned())
            .collect();
        Subspace::from_span(m.nrows(), &cols)
    }

    /// Angle between a vector and this subspace.
    pub fn angle_to_vector(&self, v: &DVector<f64>) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        let c = (self.project(v).norm() / n).clamp(0.0, 1.0);
        c.acos().min(std::f64::consts::FRAC_PI_2)
    }
}

/// Minimum angle between nonzero vectors of two subspaces, computed as the
/// arccosine of the largest singular value of `B_V^T B_W`.
pub fn min_pair_angle(v: &Subspace, w: &Subspace) -> Result<f64> {
    if v.dim() == 0 || w.dim() == 0 {
        return Err(Error::parameter("angle undefined for the zero subspace"));
    }
    if v.ambient != w.ambient {
        return Err(Error::parameter("ambient dimension mismatch"));
    }
    let m = v.basis.transpose() * &w.basis;
    let smax = m
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |a, &s| a.max(s));
    Ok(smax.clamp(0.0, 1.0).acos())
}

/// Largest angle between a unit vector of V and the horizontal hyperplane
/// (the orthogonal complement of the last coordinate axis): equals
/// arcsin of the norm of the projection of e_n onto V.
pub fn max_angle_to_horizontal(v: &Subspace) -> Result<f64> {
    if v.dim() == 0 {
        return Err(Error::parameter("angle undefined for the zero subspace"));
    }
    let mut en = DVector::zeros(v.ambient);
    en[v.ambient - 1] = 1.0;
    let s = v.project(&en).norm().clamp(0.0, 1.0);
    Ok(s.asin())
}

/// Output of the auxiliary-subspace construction.
#[derive(Clone, Debug)]
pub struct AuxSubspaces {
    pub v_sl: Subspace,
    pub v_tilde_sl: Subspace,
    pub v_aux: Subspace,
}

/// Builds the horizontal slice of V, its preimage under L, and their joint
/// orthocomplement inside R^(n-1). Asserts the dimension window
/// `mu(n, sigma, dim V) <= dim V_aux <= n - dim V`.
pub fn aux_subspace(form: &QuadraticForm, v: &Subspace) -> Result<AuxSubspaces> {
    let n = v.ambient;
    if form.dim() != n - 1 {
        return Err(Error::parameter(
            "form dimension must be one less than the subspace ambient dimension",
        ));
    }
    if v.dim() == 0 || v.dim() >= n {
        return Err(Error::parameter("need 1 <= dim V <= n-1"));
    }
    if max_angle_to_horizontal(v)? < ANGLE_REJECT {
        return Err(Error::parameter(
            "subspace is degenerate: contained in the horizontal hyperplane",
        ));
    }

    // Horizontal slice, dropped to R^(n-1).
    let horizontal = Subspace::coordinate(n, &(1..n).collect::<Vec<_>>())?;
    let cap = v.intersect(&horizontal)?;
    let v_sl_cols: Vec<DVector<f64>> = (0..cap.dim())
        .map(|j| cap.basis.column(j).rows(0, n - 1).into_owned())
        .collect();
    let v_sl = Subspace::from_span(n - 1, &v_sl_cols)?;
    if v_sl.dim() != v.dim() - 1 {
        return Err(Error::Assertion(format!(
            "horizontal slice has dimension {} but expected {}",
            v_sl.dim(),
            v.dim() - 1
        )));
    }

    let inv = form
        .mat
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::parameter("form matrix not invertible"))?;
    let v_tilde_sl = v_sl.map(&inv)?;

    let v_aux = v_sl.complement().intersect(&v_tilde_sl.complement())?;

    let sig = Signature::new(n as i64, form.sigma)?;
    let lower = exponents::mu(sig, v.dim() as i64)?
        .value
        .finite()
        .expect("mu is finite");
    let lower = (*lower.numer() as f64 / *lower.denom() as f64).ceil() as usize;
    let upper = n - v.dim();
    if v_aux.dim() < lower || v_aux.dim() > upper {
        return Err(Error::Assertion(format!(
            "auxiliary dimension {} outside [{lower}, {upper}]",
            v_aux.dim()
        )));
    }
    Ok(AuxSubspaces {
        v_sl,
        v_tilde_sl,
        v_aux,
    })
}

/// Eigenvalue data of a form restricted to a subspace U of R^(n-1).
#[derive(Clone, Debug)]
pub struct RestrictedSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Minimum eigenvalue modulus of the full form.
    pub gap: f64,
    pub small: usize,
    pub negative: usize,
    pub positive: usize,
    /// Smallest distance of a restricted eigenvalue modulus to the gap;
    /// below [`EIG_GUARD`] the instance should be resampled.
    pub boundary_margin: f64,
}

/// Restricts the form to U (via an orthonormal basis) and counts
/// eigenvalues in the open interval `(-gap, gap)`.
pub fn count_small_eigs(form: &QuadraticForm, u: &Subspace) -> Result<RestrictedSpectrum> {
    if u.ambient != form.dim() {
        return Err(Error::parameter("subspace must live in the form's space"));
    }
    if u.dim() == 0 {
        return Err(Error::parameter("restriction to the zero subspace"));
    }
    let restricted = u.basis.transpose() * &form.mat * &u.basis;
    let restricted = 0.5 * (&restricted + restricted.transpose());
    let eigs: Vec<f64> = restricted
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    let gap = form.spectral_gap();
    let small = eigs.iter().filter(|e| e.abs() < gap).count();
    let negative = eigs.iter().filter(|&&e| e <= -gap).count();
    let positive = eigs.iter().filter(|&&e| e >= gap).count();
    let boundary_margin = eigs
        .iter()
        .map(|e| (e.abs() - gap).abs())
        .fold(f64::INFINITY, f64::min);
    Ok(RestrictedSpectrum {
        eigenvalues: eigs,
        gap,
        small,
        negative,
        positive,
        boundary_margin,
    })
}

/// Rotation sampled by orthonormalizing a Gaussian matrix.
pub fn random_rotation(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    // Fix the sign convention so the distribution is rotation-invariant.
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            for i in 0..dim {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// The model hyperbolic variety in R^d at scale lambda:
/// `x_{2j-1} x_d = lambda x_{2j}` for `1 <= j <= floor((d-1)/2)`.
#[derive(Clone, Copy, Debug)]
pub struct VarietyZ {
    pub d: usize,
    pub lambda: f64,
}

impl VarietyZ {
    pub fn new(d: usize, lambda: f64) -> Result<Self> {
        if d < 2 || lambda <= 0.0 {
            return Err(Error::parameter("need d >= 2 and lambda > 0"));
        }
        Ok(VarietyZ { d, lambda })
    }

    pub fn equation_count(&self) -> usize {
        (self.d - 1) / 2
    }

    pub fn dim(&self) -> i64 {
        exponents::variety_dim(self.d as i64)
    }

    fn residual(&self, x: &[f64], j: usize) -> f64 {
        x[2 * j] * x[self.d - 1] - self.lambda * x[2 * j + 1]
    }

    fn gradient_norm(&self, x: &[f64], j: usize) -> f64 {
        (x[self.d - 1].powi(2) + self.lambda.powi(2) + x[2 * j].powi(2)).sqrt()
    }

    /// First-order distance estimate: the largest residual-over-gradient
    /// ratio among the defining polynomials. Exact zero on the variety.
    pub fn distance(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.d);
        (0..self.equation_count())
            .map(|j| self.residual(x, j).abs() / self.gradient_norm(x, j))
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// Basis of the gradient span at x; the tangent space is its
    /// orthocomplement.
    pub fn tangent_space(&self, x: &[f64]) -> Result<Subspace> {
        let mut grads = Vec::new();
        for j in 0..self.equation_count() {
            let mut g = DVector::zeros(self.d);
            g[2 * j] = x[self.d - 1];
            g[2 * j + 1] = -self.lambda;
            g[self.d - 1] = x[2 * j];
            grads.push(g);
        }
        let normal = Subspace::from_span(self.d, &grads)?;
        Ok(normal.complement())
    }

    /// Grid-counted volume of the width-c neighbourhood of the slice at
    /// height `x_d`, inside the ball of radius lambda, measured within the
    /// slice hyperplane. Grid counting for ambient slice dimension <= 2,
    /// seeded Monte Carlo above that.
    pub fn slice_volume(&self, x_d: f64, c: f64, step: f64, seed: u64) -> f64 {
        let m = self.d - 1;
        let lam = self.lambda;
        let dist_in_slice = |y: &[f64]| -> f64 {
            (0..self.equation_count())
                .map(|j| {
                    (y[2 * j] * x_d - lam * y[2 * j + 1]).abs()
                        / (x_d.powi(2) + lam.powi(2)).sqrt()
                })
                .fold(0.0, f64::max)
        };
        let r2 = lam * lam - x_d * x_d;
        if r2 <= 0.0 {
            return 0.0;
        }
        if m <= 2 {
            let half = (r2.sqrt() / step).ceil() as i64;
            let mut count = 0u64;
            let mut idx = vec![-half; m];
            loop {
                let y: Vec<f64> = idx.iter().map(|&i| i as f64 * step).collect();
                let norm2: f64 = y.iter().map(|v| v * v).sum();
                if norm2 <= r2 && dist_in_slice(&y) <= c {
                    count += 1;
                }
                let mut axis = 0;
                loop {
                    if axis == m {
                        return count as f64 * step.powi(m as i32);
                    }
                    idx[axis] += 1;
                    if idx[axis] <= half {
                        break;
                    }
                    idx[axis] = -half;
                    axis += 1;
                }
            }
        } else {
            use rand::SeedableRng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let trials = 400_000usize;
            let r = r2.sqrt();
            let mut hits = 0u64;
            for _ in 0..trials {
                let y: Vec<f64> = (0..m).map(|_| (2.0 * rng.gen::<f64>() - 1.0) * r).collect();
                let norm2: f64 = y.iter().map(|v| v * v).sum();
                if norm2 <= r2 && dist_in_slice(&y) <= c {
                    hits += 1;
                }
            }
            hits as f64 / trials as f64 * (2.0 * r). powi(m as i32)
        }
    }
}

/// One row of a fuzz campaign over random (form, subspace) instances.
#[derive(Clone, Debug)]
pub struct FuzzRow {
    pub trial: u64,
    pub dim_v: usize,
    pub dim_v_aux: Option<usize>,
    pub eig_count: Option<usize>,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub rows: Vec<FuzzRow>,
    pub violations: usize,
    pub resamples: u64,
}

/// Random (L, V) instances checking the auxiliary-subspace dimension window.
/// Per-trial seeds are `seed ^ trial`, so results do not depend on thread
/// count.
pub fn fuzz_aux_subspace(sig: Signature, dim_v: usize, trials: u64, seed: u64) -> FuzzReport {
    use rand::SeedableRng;
    let n = sig.n as usize;
    let rows: Vec<FuzzRow> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
            loop {
                let form = QuadraticForm::random(sig, &mut rng);
                let v = Subspace::random(n, dim_v, &mut rng);
                if max_angle_to_horizontal(&v).unwrap_or(0.0) < ANGLE_REJECT {
                    continue;
                }
                let mu = exponents::mu(sig, dim_v as i64).unwrap().value.to_f64();
                match aux_subspace(&form, &v) {
                    Ok(aux) => {
                        let da = aux.v_aux.dim();
                        let pass = da as f64 >= mu && da <= n - dim_v;
                        return FuzzRow {
                            trial,
                            dim_v,
                            dim_v_aux: Some(da),
                            eig_count: None,
                            bound: mu,
                            pass,
                        };
                    }
                    Err(Error::Assertion(_)) => {
                        return FuzzRow {
                            trial,
                            dim_v,
                            dim_v_aux: None,
                            eig_count: None,
                            bound: mu,
                            pass: false,
                        };
                    }
                    Err(_) => continue,
                }
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| !r.pass).count();
    FuzzReport {
        rows,
        violations,
        resamples: 0,
    }
}

/// Random (L, U) instances checking the restricted small-eigenvalue bound
/// and the two one-sided inertia bounds.
pub fn fuzz_restricted_eigs(sig: Signature, d: i64, trials: u64, seed: u64) -> FuzzReport {
    use rand::SeedableRng;
    let n = sig.n;
    let bound = exponents::nu(sig, d).expect("valid d");
    let bound_f = *bound.numer() as f64 / *bound.denom() as f64;
    let dim_x_neg = ((n - 1 - sig.sigma) / 2) as usize;
    let dim_x_pos = ((n - 1 + sig.sigma) / 2) as usize;
    let rows: Vec<FuzzRow> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ trial);
            loop {
                let form = QuadraticForm::random(sig, &mut rng);
                let u = Subspace::random((n - 1) as usize, (d - 1) as usize, &mut rng);
                let spec = match count_small_eigs(&form, &u) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                if spec.boundary_margin < EIG_GUARD {
                    continue;
                }
                let pass = (spec.small as f64) <= bound_f
                    && spec.negative + spec.small <= dim_x_neg
                    && spec.positive + spec.small <= dim_x_pos;
                return FuzzRow {
                    trial,
                    dim_v: (d - 1) as usize,
                    dim_v_aux: None,
                    eig_count: Some(spec.small),
                    bound: bound_f,
                    pass,
                };
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| !r.pass).count();
    FuzzReport {
        rows,
        violations,
        resamples: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use std::f64::consts::FRAC_PI_2;

    fn sig(n: i64, sigma: i64) -> Signature {
        Signature::new(n, sigma).unwrap()
    }

    fn vecn(vals: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(vals)
    }

    #[test]
    fn signature_matrix_blocks() {
        let q = QuadraticForm::signature_matrix(sig(3, 0));
        assert_eq!(q.mat, DMatrix::from_row_slice(2, 2, &[1., 0., 0., -1.]));
        let q = QuadraticForm::signature_matrix(sig(3, 2));
        assert_eq!(q.mat, DMatrix::identity(2, 2));
        let q = QuadraticForm::signature_matrix(sig(5, 2));
        let d: Vec<f64> = (0..4).map(|i| q.mat[(i, i)]).collect();
        assert_eq!(d, vec![1., 1., 1., -1.]);
        assert_eq!(q.sigma, 2);
    }

    #[test]
    fn gauss_map_values() {
        let q = QuadraticForm::signature_matrix(sig(3, 2));
        let g = q.gauss_map(&vecn(&[0., 0.]));
        assert_eq!(g, vecn(&[0., 0., 1.]));
        // Q = (w1^2 + w2^2)/2: gradient is the identity.
        let g = q.gauss_map(&vecn(&[1., 0.]));
        assert_eq!(g, vecn(&[-1., 0., 1.]));
        // Q = w1 w2 as a form: matrix [[0,1],[1,0]], gradient swaps.
        let q = QuadraticForm::new(DMatrix::from_row_slice(2, 2, &[0., 1., 1., 0.])).unwrap();
        assert_eq!(q.sigma, 0);
        let g = q.gauss_map(&vecn(&[1., 0.]));
        assert_eq!(g, vecn(&[0., -1., 1.]));
    }

    #[test]
    fn gauss_map_is_affine() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = QuadraticForm::random(sig(5, 2), &mut rng);
        for _ in 0..50 {
            let a = DVector::from_fn(4, |_, _| rng.sample::<f64, _>(StandardNormal));
            let b = DVector::from_fn(4, |_, _| rng.sample::<f64, _>(StandardNormal));
            let lhs = q.gauss_map(&a) + q.gauss_map(&b) - q.gauss_map(&DVector::zeros(4));
            let rhs = q.gauss_map(&(a + b));
            assert!((lhs - rhs).amax() < 1e-12);
        }
    }

    #[test]
    fn aux_subspace_elliptic_example() {
        // L = identity, V = span{e2, e3} in R^3: V_aux = span{e1}.
        let form = QuadraticForm::signature_matrix(sig(3, 2));
        let v = Subspace::coordinate(3, &[2, 3]).unwrap();
        let aux = aux_subspace(&form, &v).unwrap();
        assert_eq!(aux.v_aux.dim(), 1);
        let e1 = vecn(&[1., 0.]);
        assert!(aux.v_aux.distance(&e1) < 1e-10);
    }

    #[test]
    fn aux_subspace_hyperbolic_example() {
        // L = [[0,1],[1,0]], V = span{e2, e3}: V_sl^perp = span{e1},
        // tilde-slice perp = span{e2}, so the auxiliary space is trivial.
        let form = QuadraticForm::new(DMatrix::from_row_slice(2, 2, &[0., 1., 1., 0.])).unwrap();
        let v = Subspace::coordinate(3, &[2, 3]).unwrap();
        let aux = aux_subspace(&form, &v).unwrap();
        assert_eq!(aux.v_aux.dim(), 0);
        let mu = exponents::mu(sig(3, 0), 2).unwrap().value.to_f64();
        assert_eq!(mu, 0.0);
    }

    #[test]
    fn aux_subspace_definite_always_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=6usize {
            let form = QuadraticForm::signature_matrix(sig(n as i64, n as i64 - 1));
            for dim_v in 1..n {
                for _ in 0..20 {
                    let v = Subspace::random(n, dim_v, &mut rng);
                    if max_angle_to_horizontal(&v).unwrap() < ANGLE_REJECT {
                        continue;
                    }
                    let aux = aux_subspace(&form, &v).unwrap();
                    assert_eq!(aux.v_aux.dim(), n - dim_v);
                    // Transversality per the angle identity: the pairwise
                    // angle between V and V_aux x {0} is at least the
                    // maximum angle of V to the horizontal hyperplane.
                    if aux.v_aux.dim() > 0 {
                        let lifted: Vec<DVector<f64>> = (0..aux.v_aux.dim())
                            .map(|j| {
                                let mut x = DVector::zeros(n);
                                for i in 0..n - 1 {
                                    x[i] = aux.v_aux.basis[(i, j)];
                                }
                                x
                            })
                            .collect();
                        let vaux_lift = Subspace::from_span(n, &lifted).unwrap();
                        let pair = min_pair_angle(&v, &vaux_lift).unwrap();
                        let horiz = max_angle_to_horizontal(&v).unwrap();
                        assert!(
                            pair >= horiz - 1e-8,
                            "pair angle {pair} below horizontal angle {horiz}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn count_small_eigs_hand_cases() {
        let form = QuadraticForm::signature_matrix(sig(3, 0));
        // <L u, u> = 0 on the diagonal line: one small eigenvalue.
        let u = Subspace::from_span(2, &[vecn(&[1., 1.]) / 2f64.sqrt()]).unwrap();
        let spec = count_small_eigs(&form, &u).unwrap();
        assert_eq!(spec.small, 1);
        // Restricted to e1 the eigenvalue is 1, outside the open interval.
        let u = Subspace::coordinate(2, &[1]).unwrap();
        let spec = count_small_eigs(&form, &u).unwrap();
        assert_eq!(spec.small, 0);
    }

    #[test]
    fn angles_hand_cases() {
        let v = Subspace::coordinate(3, &[2, 3]).unwrap();
        let w = Subspace::coordinate(3, &[1]).unwrap();
        assert_abs_diff_eq!(min_pair_angle(&v, &w).unwrap(), FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(min_pair_angle(&v, &v).unwrap(), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(
            max_angle_to_horizontal(&v).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-12
        );
        assert!(min_pair_angle(&v, &Subspace::zero(3)).is_err());
    }

    #[test]
    fn variety_membership_and_distance() {
        let z = VarietyZ::new(3, 10.0).unwrap();
        assert_eq!(z.distance(&[0., 0., 0.]), 0.0);
        // x1 x3 = 1 = lambda x2 exactly.
        assert_eq!(z.distance(&[1.0, 0.1, 1.0]), 0.0);
        assert!(z.distance(&[1.0, 0.5, 1.0]) > 0.0);
        assert_eq!(z.dim(), 2);
    }

    #[test]
    fn variety_slice_volume_scales_linearly() {
        let mut pts = Vec::new();
        for exp in 6..=9 {
            let lam = f64::powi(2.0, exp);
            let z = VarietyZ::new(3, lam).unwrap();
            let vol = z.slice_volume(lam / 4.0, 1.0, 0.25, 0);
            pts.push(((lam as f64).ln(), vol.ln()));
        }
        // Least-squares slope of log-volume against log-lambda.
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            (slope - 1.0).abs() <= 0.1,
            "slice volume slope {slope} not within 0.1 of 1.0"
        );
    }

    #[test]
    fn fuzz_small_campaigns() {
        for (n, s) in [(3i64, 0i64), (4, 1), (5, 2), (6, 1)] {
            let sg = sig(n, s);
            for dim_v in 1..n as usize {
                let rep = fuzz_aux_subspace(sg, dim_v, 200, 0xface);
                assert_eq!(rep.violations, 0, "aux violations at ({n}, {s}, {dim_v})");
            }
            for d in 1..=n {
                let rep = fuzz_restricted_eigs(sg, d, 200, 0xbeef);
                assert_eq!(rep.violations, 0, "eig violations at ({n}, {s}, {d})");
            }
        }
    }
}
