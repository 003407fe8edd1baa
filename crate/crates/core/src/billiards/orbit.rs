//! Length of closed inscribed polygons, its gradient and second variation.

use nalgebra::{DMatrix, DVector, Vector3};

use super::shape::Shape;
use crate::error::{Error, Result};

/// Polygon vertices below this distance (relative to the shape scale) count
/// as coincident.
const COINCIDENT: f64 = 1e-12;

/// A point on the shape with its chart tangent frame.
type FramedPoint = (Vector3<f64>, [Vector3<f64>; 2]);

/// Splits flat chart parameters into one slice per vertex.
fn vertices(shape: &Shape, params: &[f64]) -> Result<usize> {
    let m = shape.dim();
    if params.len() % m != 0 || params.len() / m < 2 {
        return Err(Error::InvalidArgument(format!(
            "expected at least two points of {m} parameters, got {} values",
            params.len()
        )));
    }
    Ok(params.len() / m)
}

fn points(shape: &Shape, chart: usize, params: &[f64]) -> Result<Vec<FramedPoint>> {
    let m = shape.dim();
    let p = vertices(shape, params)?;
    Ok((0..p)
        .map(|i| shape.point_and_frame(chart, &params[i * m..(i + 1) * m]))
        .collect())
}

/// Unit vectors from each neighbour towards each vertex, with the cyclic
/// edge lengths.
fn unit_edges(shape: &Shape, pts: &[FramedPoint]) -> Result<(Vec<Vector3<f64>>, f64)> {
    let p = pts.len();
    let tiny = COINCIDENT * shape.scale();
    let mut units = Vec::with_capacity(p);
    let mut length = 0.0;
    for i in 0..p {
        let j = (i + 1) % p;
        let d = pts[i].0 - pts[j].0;
        let n = d.norm();
        if n < tiny {
            return Err(Error::OnDiagonal(i, j));
        }
        units.push(d / n);
        length += n;
    }
    Ok((units, length))
}

/// Length of the closed polygon through the chart points.
pub fn perimeter(shape: &Shape, chart: usize, params: &[f64]) -> Result<f64> {
    let pts = points(shape, chart, params)?;
    Ok(unit_edges(shape, &pts)?.1)
}

/// Per-vertex bisector sums `unit(x_i - x_(i+1)) + unit(x_i - x_(i-1))`.
fn bisectors(shape: &Shape, pts: &[FramedPoint]) -> Result<Vec<Vector3<f64>>> {
    let (units, _) = unit_edges(shape, pts)?;
    let p = pts.len();
    Ok((0..p).map(|i| units[i] - units[(i + p - 1) % p]).collect())
}

/// Gradient of [`perimeter`] in chart coordinates: the bisector sums
/// projected onto the chart frames.
pub fn perimeter_gradient(shape: &Shape, chart: usize, params: &[f64]) -> Result<Vec<f64>> {
    let m = shape.dim();
    let pts = points(shape, chart, params)?;
    let bis = bisectors(shape, &pts)?;
    let mut g = Vec::with_capacity(params.len());
    for (i, b) in bis.iter().enumerate() {
        for k in 0..m {
            g.push(pts[i].1[k].dot(b));
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// Tangential norm of each bisector sum.
    pub per_point: Vec<f64>,
    /// The same vectors in chart coordinates; equals the perimeter gradient.
    pub gradient: Vec<f64>,
}

impl Residual {
    pub fn max(&self) -> f64 {
        self.per_point.iter().copied().fold(0.0, f64::max)
    }
}

/// Tangential part of the bisector sum at each vertex. All components
/// vanish exactly at billiard trajectories.
pub fn reflection_residual(shape: &Shape, chart: usize, params: &[f64]) -> Result<Residual> {
    let m = shape.dim();
    let pts = points(shape, chart, params)?;
    let bis = bisectors(shape, &pts)?;
    let mut per_point = Vec::with_capacity(pts.len());
    let mut gradient = Vec::with_capacity(params.len());
    for (i, b) in bis.iter().enumerate() {
        let frame = &pts[i].1;
        let g: Vec<f64> = (0..m).map(|k| frame[k].dot(b)).collect();
        let metric = DMatrix::from_fn(m, m, |r, c| frame[r].dot(&frame[c]));
        let rhs = DVector::from_column_slice(&g);
        let norm2 = metric
            .clone()
            .cholesky()
            .map(|ch| rhs.dot(&ch.solve(&rhs)))
            .ok_or_else(|| {
                Error::InvalidArgument(format!("chart {chart} is singular at point {i}"))
            })?;
        per_point.push(norm2.max(0.0).sqrt());
        gradient.extend(g);
    }
    Ok(Residual {
        per_point,
        gradient,
    })
}

/// Central-difference Jacobian of the perimeter gradient.
pub(crate) fn gradient_jacobian(
    shape: &Shape,
    chart: usize,
    params: &[f64],
    h: f64,
) -> Result<DMatrix<f64>> {
    let n = params.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut x = params.to_vec();
    for k in 0..n {
        x[k] = params[k] + h;
        let up = perimeter_gradient(shape, chart, &x)?;
        x[k] = params[k] - h;
        let dn = perimeter_gradient(shape, chart, &x)?;
        x[k] = params[k];
        for r in 0..n {
            jac[(r, k)] = (up[r] - dn[r]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Eigenvalues (ascending) of the second variation of the perimeter with
/// respect to the induced metric on the product of tangent spaces.
pub fn hessian_spectrum(shape: &Shape, chart: usize, params: &[f64]) -> Result<Vec<f64>> {
    let m = shape.dim();
    let pts = points(shape, chart, params)?;
    let h = gradient_jacobian(shape, chart, params, 1e-5)?;
    let sym = (&h + h.transpose()) * 0.5;
    let n = params.len();
    let mut metric = DMatrix::zeros(n, n);
    for (i, (_, frame)) in pts.iter().enumerate() {
        for r in 0..m {
            for c in 0..m {
                metric[(i * m + r, i * m + c)] = frame[r].dot(&frame[c]);
            }
        }
    }
    let chol = metric.cholesky().ok_or_else(|| {
        Error::InvalidArgument(format!("chart {chart} is singular at this tuple"))
    })?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("metric factor is not invertible".into()))?;
    let whitened = &l_inv * sym * l_inv.transpose();
    let mut eig: Vec<f64> = whitened
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}
