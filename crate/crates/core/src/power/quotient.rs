//! Orbit chain complexes relative to the contracted diagonal.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::subdivide::EquivariantComplex;
use crate::chain::{BettiVector, ChainComplex};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// Chains of orbits of simplices off the diagonal, with sparse boundary
/// columns (ascending row indices).
#[derive(Clone, Debug)]
pub struct OrbitComplex {
    dims: Vec<usize>,
    columns: Vec<Vec<Vec<u32>>>,
    /// Off-diagonal simplices per dimension before taking orbits.
    free_counts: Vec<usize>,
    group_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BurnsideCheck {
    pub free_counts: Vec<usize>,
    pub group_order: usize,
    pub orbit_counts: Vec<usize>,
    /// Every off-diagonal orbit has full size.
    pub free: bool,
    pub euler_from_counts: i64,
    pub euler_from_complex: i64,
}

impl BurnsideCheck {
    pub fn holds(&self) -> bool {
        self.free && self.euler_from_counts == self.euler_from_complex
    }
}

/// Orbit complex of `t` with every simplex on the diagonal sent to the
/// basepoint, so its homology is that of the quotient relative to the
/// diagonal image.
pub fn quotient_and_contract(t: &EquivariantComplex) -> Result<OrbitComplex> {
    t.check_regular()?;
    let top = t.dimension();
    let mut orbit_of: Vec<HashMap<Vec<u32>, u32>> = Vec::with_capacity(top + 1);
    let mut reps: Vec<Vec<Vec<u32>>> = Vec::with_capacity(top + 1);
    let mut free_counts = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let mut map = HashMap::new();
        let mut level_reps = Vec::new();
        let mut free = 0;
        for s in t.simplices(q) {
            if t.on_diagonal(s) {
                continue;
            }
            free += 1;
            let canon = (0..t.group_order())
                .map(|g| t.act(g, s))
                .min()
                .expect("group is nonempty");
            let next = level_reps.len() as u32;
            let id = *map.entry(canon.clone()).or_insert_with(|| {
                level_reps.push(canon.clone());
                next
            });
            map.insert(s.clone(), id);
        }
        free_counts.push(free);
        orbit_of.push(map);
        reps.push(level_reps);
    }
    let dims: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut columns = vec![vec![Vec::new(); dims[0]]];
    for q in 1..=top {
        let level: Vec<Vec<u32>> = reps[q]
            .par_iter()
            .map(|s| {
                let mut col = Vec::with_capacity(s.len());
                for skip in 0..s.len() {
                    let f: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if let Some(&row) = orbit_of[q - 1].get(&f) {
                        col.push(row);
                    }
                }
                col.sort_unstable();
                reduce_mod2(&mut col);
                col
            })
            .collect();
        columns.push(level);
    }
    Ok(OrbitComplex {
        dims,
        columns,
        free_counts,
        group_order: t.group_order(),
    })
}

fn reduce_mod2(col: &mut Vec<u32>) {
    let mut out = Vec::with_capacity(col.len());
    let mut i = 0;
    while i < col.len() {
        let mut j = i;
        while j < col.len() && col[j] == col[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(col[i]);
        }
        i = j;
    }
    *col = out;
}

/// Symmetric difference of two ascending lists.
fn xor_into(target: &mut Vec<u32>, other: &[u32]) {
    let mut out = Vec::with_capacity(target.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&other[j..]);
    *target = out;
}

impl OrbitComplex {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn columns(&self, q: usize) -> &[Vec<u32>] {
        &self.columns[q]
    }

    /// First degree and column where the boundary of a boundary is nonzero.
    pub fn validate(&self) -> Result<()> {
        for q in 2..self.dims.len() {
            for (j, col) in self.columns[q].iter().enumerate() {
                let mut acc = Vec::new();
                for &r in col {
                    xor_into(&mut acc, &self.columns[q - 1][r as usize]);
                }
                if !acc.is_empty() {
                    return Err(Error::BoundarySquared {
                        degree: q,
                        element: j,
                    });
                }
            }
        }
        Ok(())
    }

    /// Boundary ranks by column reduction from the top degree down, skipping
    /// columns already known to reduce to zero.
    pub fn boundary_ranks(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut ranks = vec![0; n];
        let mut cleared: Vec<bool> = Vec::new();
        for q in (1..n).rev() {
            let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
            let mut next_cleared = vec![false; self.dims[q - 1]];
            for (j, col) in self.columns[q].iter().enumerate() {
                if cleared.get(j).copied().unwrap_or(false) {
                    continue;
                }
                let mut c = col.clone();
                while let Some(&low) = c.last() {
                    match pivots.get(&low) {
                        Some(p) => xor_into(&mut c, p),
                        None => break,
                    }
                }
                if let Some(&low) = c.last() {
                    next_cleared[low as usize] = true;
                    pivots.insert(low, c);
                    ranks[q] += 1;
                }
            }
            cleared = next_cleared;
        }
        ranks
    }

    pub fn betti(&self) -> Result<BettiVector> {
        self.validate()?;
        let ranks = self.boundary_ranks();
        let n = self.dims.len();
        Ok(BettiVector::new(
            (0..n)
                .map(|q| self.dims[q] - ranks[q] - if q + 1 < n { ranks[q + 1] } else { 0 })
                .collect(),
        ))
    }

    pub fn euler_characteristic(&self) -> i64 {
        crate::chain::alternating_sum(&self.dims)
    }

    /// Independent orbit bookkeeping: the action off the diagonal is free,
    /// so each orbit count is the simplex count over the group order.
    pub fn burnside(&self) -> BurnsideCheck {
        let free = self
            .free_counts
            .iter()
            .zip(&self.dims)
            .all(|(&c, &d)| c == d * self.group_order);
        let per_orbit: Vec<usize> = self
            .free_counts
            .iter()
            .map(|c| c / self.group_order)
            .collect();
        BurnsideCheck {
            free_counts: self.free_counts.clone(),
            group_order: self.group_order,
            orbit_counts: self.dims.clone(),
            free,
            euler_from_counts: crate::chain::alternating_sum(&per_orbit),
            euler_from_complex: self.euler_characteristic(),
        }
    }

    /// Dense copy for cross-checks and serialization.
    pub fn to_chain_complex(&self) -> Result<ChainComplex> {
        let mut boundaries = vec![Gf2Matrix::zeros(0, self.dims[0])];
        for q in 1..self.dims.len() {
            let entries: Vec<(usize, usize)> = self.columns[q]
                .iter()
                .enumerate()
                .flat_map(|(j, col)| col.iter().map(move |&r| (r as usize, j)))
                .collect();
            boundaries.push(Gf2Matrix::from_entries(
                self.dims[q - 1],
                self.dims[q],
                entries,
            )?);
        }
        ChainComplex::new(self.dims.clone(), boundaries, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_and_reduce() {
        let mut a = vec![1, 3, 5];
        xor_into(&mut a, &[3, 4]);
        assert_eq!(a, vec![1, 4, 5]);
        let mut c = vec![2, 2, 2, 7, 9, 9];
        reduce_mod2(&mut c);
        assert_eq!(c, vec![2, 7]);
    }
}
