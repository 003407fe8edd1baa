//! Random valid FD-modules for cross-checks.

use rand::Rng;

use super::models::sphere_model;
use super::module::{direct_sum, point_module, FdModule};
use super::sparse::SparseMap;
use crate::error::Result;
use crate::gf2::Gf2Matrix;

fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Gf2Matrix, Gf2Matrix) {
    loop {
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(0..2u8)).collect())
            .collect();
        let m = if n == 0 {
            Gf2Matrix::zeros(0, 0)
        } else {
            Gf2Matrix::from_dense(&rows).expect("bits")
        };
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

/// Conjugates every operator by a random change of basis per level. The
/// result is isomorphic to `k` but its maps are no longer basis-to-basis.
pub fn scramble<R: Rng + ?Sized>(k: &FdModule, rng: &mut R) -> Result<FdModule> {
    let top = k.q_max();
    let bases: Vec<(Gf2Matrix, Gf2Matrix)> = k
        .levels()
        .iter()
        .map(|&n| random_invertible(rng, n))
        .collect();
    let conj = |map: &SparseMap, from: usize, to: usize| -> Result<SparseMap> {
        let d = bases[to].0.mul(&map.to_dense())?.mul(&bases[from].1)?;
        Ok(SparseMap::from_dense(&d))
    };
    let mut faces = Vec::with_capacity(top + 1);
    let mut degens = Vec::with_capacity(top + 1);
    for q in 0..=top {
        faces.push(if q == 0 {
            Vec::new()
        } else {
            (0..=q)
                .map(|i| conj(k.face(q, i), q, q - 1))
                .collect::<Result<_>>()?
        });
        degens.push(if q == top {
            Vec::new()
        } else {
            (0..=q)
                .map(|i| conj(k.degeneracy(q, i), q, q + 1))
                .collect::<Result<_>>()?
        });
    }
    FdModule::new(k.levels().to_vec(), faces, degens, None)
}

/// Random direct sum of point and sphere models (dimensions 1..=3) with every
/// level of size at most `max_level`, scrambled by a change of basis.
pub fn random_fd_module<R: Rng + ?Sized>(
    rng: &mut R,
    q_max: usize,
    max_level: usize,
) -> Result<FdModule> {
    let mut candidates = vec![point_module(q_max)];
    for m in 1..=3.min(q_max) {
        candidates.push(sphere_model(m, q_max)?);
    }
    let mut parts: Vec<FdModule> = Vec::new();
    let mut sizes = vec![0usize; q_max + 1];
    for _ in 0..8 {
        let c = &candidates[rng.random_range(0..candidates.len())];
        let fits = sizes
            .iter()
            .zip(c.levels())
            .all(|(s, l)| s + l <= max_level);
        if fits {
            for (s, l) in sizes.iter_mut().zip(c.levels()) {
                *s += l;
            }
            parts.push(c.clone());
        }
    }
    if parts.is_empty() {
        parts.push(point_module(q_max));
    }
    let refs: Vec<&FdModule> = parts.iter().collect();
    scramble(&direct_sum(&refs)?, rng)
}
