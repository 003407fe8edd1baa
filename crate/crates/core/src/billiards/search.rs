//! Multistart search for periodic billiard trajectories.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orbit::{
    gradient_jacobian, hessian_spectrum, perimeter, perimeter_gradient, reflection_residual,
};
use super::shape::Shape;
use crate::bounds::{bt2_lower_bound, bt3_lower_bound};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Grid points per parameter; `None` picks 32 for curves and 12 for
    /// surfaces.
    pub density: Option<usize>,
    /// Surfaces switch from the lattice to a quasi-random sequence of this
    /// many starts per chart when the lattice is larger.
    pub max_surface_starts: usize,
    /// Acceptance threshold on [`reflection_residual`] (dimensionless).
    pub tol_residual: f64,
    /// Minimum vertex separation as a fraction of the shape scale.
    pub sep_min: f64,
    /// Minimum scale-normalized Hessian eigenvalue magnitude for genericity.
    pub tol_hess: f64,
    /// Distance below which two solutions are one orbit, relative to scale.
    pub cluster_tol: f64,
    pub max_iterations: usize,
    /// Charts with quality below this are left to the other charts.
    pub min_chart_quality: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            density: None,
            max_surface_starts: 200_000,
            tol_residual: 1e-9,
            sep_min: 1e-4,
            tol_hess: 1e-6,
            cluster_tol: 1e-6,
            max_iterations: 100,
            min_chart_quality: 0.5,
        }
    }
}

impl SearchConfig {
    pub fn density_for(&self, shape: &Shape) -> usize {
        self.density
            .unwrap_or(if shape.dim() == 1 { 32 } else { 12 })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BilliardOrbit {
    pub chart: usize,
    /// Chart parameters of each vertex.
    pub params: Vec<Vec<f64>>,
    pub points: Vec<[f64; 3]>,
    pub length: f64,
    pub residual: f64,
    pub hessian_spectrum: Vec<f64>,
    pub generic: bool,
}

impl BilliardOrbit {
    pub fn flat_params(&self) -> Vec<f64> {
        self.params.concat()
    }

    /// Smallest eigenvalue magnitude times the shape scale.
    pub fn normalized_min_eigenvalue(&self, shape: &Shape) -> f64 {
        self.hessian_spectrum
            .iter()
            .map(|l| l.abs())
            .fold(f64::INFINITY, f64::min)
            * shape.scale()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub shape: Shape,
    pub period: usize,
    pub starts: usize,
    pub converged: usize,
    pub orbits: Vec<BilliardOrbit>,
}

impl SearchOutcome {
    pub fn all_generic(&self) -> bool {
        self.orbits.iter().all(|o| o.generic)
    }
}

/// Deterministic shifted lattice, or an additive quasi-random sequence of
/// `max_starts` points when the lattice is too large.
fn starts(
    shape: &Shape,
    chart: usize,
    period: usize,
    density: usize,
    max_starts: usize,
) -> Vec<Vec<f64>> {
    let max_starts = if shape.dim() == 1 {
        usize::MAX
    } else {
        max_starts
    };
    let domain = shape.chart_domain(chart);
    let dims = domain.len() * period;
    let span = |k: usize, t: f64| {
        let d = domain[k % domain.len()];
        d.lo + t * (d.hi - d.lo)
    };
    // Irrational offsets keep starts off symmetry lines.
    let offsets: Vec<f64> = (0..dims)
        .map(|k| ((k + 1) as f64 * 0.618_033_988_749_895).fract())
        .collect();
    let lattice = (density as u128)
        .checked_pow(dims as u32)
        .unwrap_or(u128::MAX);
    if lattice <= max_starts as u128 {
        let total = lattice as usize;
        (0..total)
            .map(|mut idx| {
                (0..dims)
                    .map(|k| {
                        let i = idx % density;
                        idx /= density;
                        span(k, (i as f64 + offsets[k]) / density as f64)
                    })
                    .collect()
            })
            .collect()
    } else {
        // Generalized golden-ratio sequence in `dims` dimensions.
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dims as f64 + 1.0));
        }
        let alpha: Vec<f64> = (1..=dims).map(|k| phi.powi(-(k as i32)).fract()).collect();
        (0..max_starts)
            .map(|n| {
                (0..dims)
                    .map(|k| span(k, (offsets[k] + (n + 1) as f64 * alpha[k]).fract()))
                    .collect()
            })
            .collect()
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Backtracking along `step`; returns the accepted point and its gradient.
fn line_search(
    shape: &Shape,
    chart: usize,
    x: &[f64],
    step: &DVector<f64>,
    gn: f64,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut t = 1.0;
    while t > 1e-4 {
        let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
        if let Ok(gt) = perimeter_gradient(shape, chart, &trial) {
            if inf_norm(&gt) < (1.0 - 1e-4 * t) * gn {
                return Some((trial, gt));
            }
        }
        t *= 0.5;
    }
    None
}

/// Newton iteration on the perimeter gradient with a backtracking line
/// search on its norm, falling back to damped least squares steps.
pub fn refine(shape: &Shape, chart: usize, x0: &[f64], iterations: usize) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    let mut g = perimeter_gradient(shape, chart, &x)?;
    let floor = 1e-13 * shape.scale().max(1.0);
    let mut stalled = 0;
    for _ in 0..iterations {
        let gn = inf_norm(&g);
        if gn < floor {
            break;
        }
        let jac = gradient_jacobian(shape, chart, &x, 1e-6)?;
        let rhs = -DVector::from_column_slice(&g);
        let newton = jac
            .clone()
            .lu()
            .solve(&rhs)
            .filter(|step| step.iter().all(|v| v.is_finite()))
            .and_then(|step| line_search(shape, chart, &x, &step, gn));
        let next = newton.or_else(|| {
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let jtr = &jt * &rhs;
            let base = jtj
                .diagonal()
                .iter()
                .fold(0.0f64, |a, v| a.max(v.abs()))
                .max(1e-12);
            [1e-6, 1e-3, 1e-1, 1e1].into_iter().find_map(|mu| {
                let damped = &jtj + DMatrix::identity(x.len(), x.len()) * (mu * base);
                let step = damped.cholesky()?.solve(&jtr);
                line_search(shape, chart, &x, &step, gn)
            })
        });
        match next {
            Some((nx, ng)) => {
                stalled = if inf_norm(&ng) > 0.9 * gn {
                    stalled + 1
                } else {
                    0
                };
                x = nx;
                g = ng;
                // Slow drift means no critical point nearby, typically a
                // slide towards the diagonal.
                if stalled >= 10 {
                    break;
                }
            }
            None => break,
        }
    }
    Ok(x)
}

struct Candidate {
    chart: usize,
    params: Vec<f64>,
    points: Vec<Vector3<f64>>,
    residual: f64,
    quality: f64,
}

fn min_separation(points: &[Vector3<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

/// Reindexings of a `p`-cycle: rotations then reflections.
fn dihedral_reindexings(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(2 * p);
    for r in 0..p {
        out.push((0..p).map(|i| (i + r) % p).collect());
    }
    for r in 0..p {
        out.push((0..p).map(|i| (r + p - i) % p).collect());
    }
    out
}

fn orbit_distance(a: &[Vector3<f64>], b: &[Vector3<f64>], perms: &[Vec<usize>]) -> f64 {
    perms
        .iter()
        .map(|s| {
            a.iter()
                .enumerate()
                .map(|(i, x)| (x - b[s[i]]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Reindexing whose rounded ambient coordinates are lexicographically least.
fn canonical_reindexing(points: &[Vector3<f64>], perms: &[Vec<usize>], scale: f64) -> Vec<usize> {
    let key = |s: &Vec<usize>| -> Vec<i64> {
        s.iter()
            .flat_map(|&i| {
                points[i]
                    .iter()
                    .map(|v| (v / scale * 1e8).round() as i64)
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    perms
        .iter()
        .min_by_key(|s| key(s))
        .expect("nonempty group")
        .clone()
}

fn bucket(x: &Vector3<f64>, cell: f64) -> [i64; 3] {
    [
        (x.x / cell).floor() as i64,
        (x.y / cell).floor() as i64,
        (x.z / cell).floor() as i64,
    ]
}

/// Critical points of the perimeter on `period`-tuples off the diagonal,
/// one per orbit of the dihedral reindexing action.
pub fn find_orbits(shape: &Shape, period: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    shape.validate()?;
    if !(2..=3).contains(&period) {
        return Err(Error::InvalidArgument(format!(
            "period {period} is not supported; use 2 or 3"
        )));
    }
    let scale = shape.scale();
    let m = shape.dim();
    let density = cfg.density_for(shape);
    let mut jobs: Vec<(usize, Vec<f64>)> = Vec::new();
    for chart in 0..shape.chart_count() {
        for s in starts(shape, chart, period, density, cfg.max_surface_starts) {
            jobs.push((chart, s));
        }
    }
    let sep = cfg.sep_min * scale;
    let candidates: Vec<Option<Candidate>> = jobs
        .par_iter()
        .map(|(chart, x0)| {
            let pts: Vec<Vector3<f64>> = (0..period)
                .map(|i| shape.point(*chart, &x0[i * m..(i + 1) * m]))
                .collect();
            if min_separation(&pts) < 10.0 * sep {
                return None;
            }
            let x = refine(shape, *chart, x0, cfg.max_iterations).ok()?;
            let residual = reflection_residual(shape, *chart, &x).ok()?.max();
            if residual.is_nan() || residual > cfg.tol_residual {
                return None;
            }
            let points: Vec<Vector3<f64>> = (0..period)
                .map(|i| shape.point(*chart, &x[i * m..(i + 1) * m]))
                .collect();
            if min_separation(&points) < sep {
                return None;
            }
            let quality = (0..period)
                .map(|i| shape.chart_quality(*chart, &x[i * m..(i + 1) * m]))
                .fold(f64::INFINITY, f64::min);
            if quality < cfg.min_chart_quality {
                return None;
            }
            Some(Candidate {
                chart: *chart,
                params: x,
                points,
                residual,
                quality,
            })
        })
        .collect();
    let converged = candidates.iter().filter(|c| c.is_some()).count();

    let perms = dihedral_reindexings(period);
    let tol = cfg.cluster_tol * scale;
    let cell = (1e3 * tol).max(1e-9);
    let mut kept: Vec<Candidate> = Vec::new();
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for cand in candidates.into_iter().flatten() {
        let b = bucket(&cand.points[0], cell);
        let mut hit = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = grid.get(&[b[0] + dx, b[1] + dy, b[2] + dz]) {
                        for &id in ids {
                            if orbit_distance(&kept[id].points, &cand.points, &perms) < tol {
                                hit = Some(id);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        match hit {
            Some(id) => {
                let better_chart = cand.quality > kept[id].quality + 1e-9;
                let same_chart = (cand.quality - kept[id].quality).abs() <= 1e-9;
                if better_chart || (same_chart && cand.residual < kept[id].residual) {
                    kept[id] = cand;
                }
            }
            None => {
                let id = kept.len();
                for p in &cand.points {
                    grid.entry(bucket(p, cell)).or_default().push(id);
                }
                kept.push(cand);
            }
        }
    }

    let mut orbits: Vec<BilliardOrbit> = kept
        .into_par_iter()
        .map(|c| finish(shape, c, &perms, cfg))
        .collect::<Result<Vec<_>>>()?;
    orbits.sort_by(|a, b| {
        b.length.total_cmp(&a.length).then_with(|| {
            a.points
                .iter()
                .flatten()
                .map(|v| (v * 1e9).round() as i64)
                .cmp(b.points.iter().flatten().map(|v| (v * 1e9).round() as i64))
        })
    });
    Ok(SearchOutcome {
        shape: shape.clone(),
        period,
        starts: jobs.len(),
        converged,
        orbits,
    })
}

fn finish(
    shape: &Shape,
    c: Candidate,
    perms: &[Vec<usize>],
    cfg: &SearchConfig,
) -> Result<BilliardOrbit> {
    let m = shape.dim();
    let order = canonical_reindexing(&c.points, perms, shape.scale());
    let params: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            c.params[i * m..(i + 1) * m]
                .iter()
                .map(|&v| wrap_angle(v))
                .collect()
        })
        .collect();
    let flat = params.concat();
    let spectrum = hessian_spectrum(shape, c.chart, &flat)?;
    let min_eig = spectrum
        .iter()
        .map(|l| l.abs())
        .fold(f64::INFINITY, f64::min);
    Ok(BilliardOrbit {
        chart: c.chart,
        points: order
            .iter()
            .map(|&i| [c.points[i].x, c.points[i].y, c.points[i].z])
            .collect(),
        length: perimeter(shape, c.chart, &flat)?,
        residual: reflection_residual(shape, c.chart, &flat)?.max(),
        hessian_spectrum: spectrum,
        generic: min_eig * shape.scale() >= cfg.tol_hess,
        params,
    })
}

fn wrap_angle(v: f64) -> f64 {
    v.rem_euclid(std::f64::consts::TAU)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum BoundComparison {
    Pass { count: usize, bound: u64 },
    Fail { count: usize, bound: u64 },
    NotApplicable { count: usize, reason: String },
}

impl BoundComparison {
    pub fn passed(&self) -> bool {
        matches!(self, BoundComparison::Pass { .. })
    }
}

/// Compares an orbit count with the lower bound for the given homology.
pub fn compare_to_bound(
    orbits: &[BilliardOrbit],
    betti_sum: u64,
    m: u64,
    period: usize,
) -> Result<BoundComparison> {
    let count = orbits.len();
    if orbits.iter().any(|o| !o.generic) {
        return Ok(BoundComparison::NotApplicable {
            count,
            reason: "non-generic embedding: bound not applicable".into(),
        });
    }
    let bound = match period {
        2 => bt2_lower_bound(betti_sum, m)?,
        3 => bt3_lower_bound(betti_sum, m)?,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no bound for period {period}"
            )))
        }
    };
    Ok(if count as u64 >= bound {
        BoundComparison::Pass { count, bound }
    } else {
        BoundComparison::Fail { count, bound }
    })
}
