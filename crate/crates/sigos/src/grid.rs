//! Sampled inputs and output fields on uniform grids.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex samples of an input on a uniform lattice over the cube
/// `[-1, 1)^dim`, `n_per_axis` points per axis with spacing `step`
/// (`n_per_axis * step = 2`).
#[derive(Clone, Debug)]
pub struct SampledFunction {
    pub dim: usize,
    pub step: f64,
    pub origin: Vec<f64>,
    pub n_per_axis: usize,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn zeros(dim: usize, n_per_axis: usize) -> Result<Self> {
        if dim == 0 || n_per_axis < 2 {
            return Err(Error::parameter("need dim >= 1 and at least 2 samples"));
        }
        let step = 2.0 / n_per_axis as f64;
        Ok(SampledFunction {
            dim,
            step,
            origin: vec![-1.0; dim],
            n_per_axis,
            values: vec![Complex64::new(0.0, 0.0); n_per_axis.pow(dim as u32)],
        })
    }

    pub fn from_fn(dim: usize, n_per_axis: usize, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let mut out = Self::zeros(dim, n_per_axis)?;
        let mut point = vec![0.0; dim];
        for flat in 0..out.values.len() {
            out.point_at(flat, &mut point);
            out.values[flat] = f(&point);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Multi-index of a flat index, row-major with axis 0 slowest.
    pub fn point_at(&self, flat: usize, point: &mut [f64]) {
        let mut rem = flat;
        for axis in (0..self.dim).rev() {
            let idx = rem % self.n_per_axis;
            rem /= self.n_per_axis;
            point[axis] = self.origin[axis] + idx as f64 * self.step;
        }
    }

    /// Squared L2 norm by the Riemann sum.
    pub fn l2_norm_sq(&self) -> f64 {
        let cell = self.step.powi(self.dim as i32);
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn scale_add(&mut self, other: &SampledFunction, weight: Complex64) -> Result<()> {
        if self.len() != other.len() || self.dim != other.dim {
            return Err(Error::parameter("grid mismatch in scale_add"));
        }
        for (a, b) in self.values.iter_mut().zip(other.values.iter()) {
            *a += weight * b;
        }
        Ok(())
    }

    /// Validates the grid invariants: step divides the domain evenly and the
    /// support stays inside the closed unit cube.
    pub fn validate(&self) -> Result<()> {
        if self.origin.len() != self.dim {
            return Err(Error::parameter("origin length must equal dim"));
        }
        let span = self.n_per_axis as f64 * self.step;
        if (span - 2.0).abs() > 1e-9 {
            return Err(Error::parameter(format!(
                "step {} times {} samples must span the domain [-1, 1), got {span}",
                self.step, self.n_per_axis
            )));
        }
        if self.values.len() != self.n_per_axis.pow(self.dim as u32) {
            return Err(Error::parameter("value count does not match the grid"));
        }
        let mut point = vec![0.0; self.dim];
        for flat in 0..self.values.len() {
            if self.values[flat].norm_sqr() > 0.0 {
                self.point_at(flat, &mut point);
                if point.iter().any(|x| x.abs() > 1.0 + 1e-12) {
                    return Err(Error::parameter(
                        "support escapes the closed unit cube".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SampledFunctionWire {
    dim: usize,
    step: f64,
    origin: Vec<f64>,
    values: Vec<[f64; 2]>,
}

impl Serialize for SampledFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SampledFunctionWire {
            dim: self.dim,
            step: self.step,
            origin: self.origin.clone(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampledFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = SampledFunctionWire::deserialize(d)?;
        let per_axis = (wire.values.len() as f64)
            .powf(1.0 / wire.dim as f64)
            .round() as usize;
        if per_axis.pow(wire.dim as u32) != wire.values.len() {
            return Err(D::Error::custom("values length is not a perfect power"));
        }
        Ok(SampledFunction {
            dim: wire.dim,
            step: wire.step,
            origin: wire.origin,
            n_per_axis: per_axis,
            values: wire
                .values
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        })
    }
}

/// Axis-aligned box in R^n.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Region {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Region {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() || min.is_empty() {
            return Err(Error::parameter("region bounds must have equal dimension"));
        }
        if min.iter().zip(&max).any(|(a, b)| a >= b) {
            return Err(Error::parameter("region must have positive extent"));
        }
        Ok(Region { min, max })
    }

    pub fn cube(dim: usize, half: f64) -> Self {
        Region {
            min: vec![-half; dim],
            max: vec![half; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.min.iter().zip(&self.max))
            .all(|(v, (a, b))| *v >= *a - 1e-12 && *v <= *b + 1e-12)
    }

    pub fn contains_region(&self, inner: &Region) -> bool {
        self.contains(&inner.min) && self.contains(&inner.max)
    }

    /// Largest Euclidean norm over the corners.
    pub fn max_norm(&self) -> f64 {
        let mut max2 = 0.0f64;
        let dim = self.dim();
        for mask in 0..(1usize << dim) {
            let mut s = 0.0;
            for axis in 0..dim {
                let v = if mask >> axis & 1 == 1 {
                    self.max[axis]
                } else {
                    self.min[axis]
                };
                s += v * v;
            }
            max2 = max2.max(s);
        }
        max2.sqrt()
    }
}

/// Complex samples of an operator output over a region, on a uniform grid
/// with per-axis steps.
#[derive(Clone, Debug)]
pub struct Field {
    pub region: Region,
    pub steps: Vec<f64>,
    pub shape: Vec<usize>,
    pub lambda: f64,
    pub values: Vec<Complex64>,
}

impl Field {
    pub fn zeros(region: Region, steps: Vec<f64>, lambda: f64) -> Result<Self> {
        if steps.len() != region.dim() || steps.iter().any(|&s| s <= 0.0) {
            return Err(Error::parameter("field steps must be positive per axis"));
        }
        let shape: Vec<usize> = region
            .min
            .iter()
            .zip(region.max.iter().zip(&steps))
            .map(|(a, (b, s))| ((b - a) / s).round() as usize + 1)
            .collect();
        let count: usize = shape.iter().product();
        Ok(Field {
            region,
            steps,
            shape,
            lambda,
            values: vec![Complex64::new(0.0, 0.0); count],
        })
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point_at(&self, flat: usize, point: &mut [f64]) {
        let mut rem = flat;
        for axis in (0..self.dim()).rev() {
            let idx = rem % self.shape[axis];
            rem /= self.shape[axis];
            point[axis] = self.region.min[axis] + idx as f64 * self.steps[axis];
        }
    }

    pub fn cell_volume(&self) -> f64 {
        self.steps.iter().product()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_function_roundtrip_json() {
        let f = SampledFunction::from_fn(2, 8, |p| Complex64::new(p[0], p[1])).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let g: SampledFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(g.n_per_axis, 8);
        assert_eq!(g.dim, 2);
        assert_eq!(f.values, g.values);
        assert_eq!(f.step, g.step);
    }

    #[test]
    fn grid_points_cover_cube() {
        let f = SampledFunction::zeros(2, 4).unwrap();
        let mut p = vec![0.0; 2];
        f.point_at(0, &mut p);
        assert_eq!(p, vec![-1.0, -1.0]);
        f.point_at(f.len() - 1, &mut p);
        assert_eq!(p, vec![0.5, 0.5]);
        f.validate().unwrap();
    }

    #[test]
    fn region_norm_and_containment() {
        let r = Region::new(vec![-1.0, 0.0], vec![2.0, 3.0]).unwrap();
        assert!((r.max_norm() - (4.0f64 + 9.0).sqrt()).abs() < 1e-14);
        assert!(r.contains(&[0.0, 1.0]));
        assert!(!r.contains(&[0.0, 4.0]));
        assert!(Region::new(vec![0.0], vec![0.0]).is_err());
    }
}
