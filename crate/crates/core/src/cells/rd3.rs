//! Cells of the reduced dihedral cube of an m-sphere.
//!
//! Three interior points of the cube model are compared coordinate by
//! coordinate; each coordinate contributes a weak order of the points (a list
//! of tie blocks in increasing order). These are the U-cells, taken up to
//! relabeling of the points. Tuples with two points tied in every coordinate
//! lie in the collapsed diagonal. When one point reaches the basepoint the
//! other two span a sign-vector cell: these are the V-cells.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::rd2::{all_patterns, canonical_pattern, pattern_string, Sign};
use crate::chain::{BettiVector, ChainComplex};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

pub const MAX_RD3_DIM: usize = 4;

const PERMS: [[u8; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Tie blocks in increasing order, each a bitmask over the points {0, 1, 2}.
pub type WeakOrder = Vec<u8>;

fn weak_orders() -> Vec<WeakOrder> {
    fn rec(remaining: u8, acc: &mut WeakOrder, out: &mut Vec<WeakOrder>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for block in 1..8u8 {
            if block & !remaining == 0 {
                acc.push(block);
                rec(remaining & !block, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0b111, &mut Vec::new(), &mut out);
    out
}

fn relabel_mask(mask: u8, perm: &[u8; 3]) -> u8 {
    (0..3)
        .filter(|&i| mask >> i & 1 == 1)
        .fold(0, |acc, i| acc | 1 << perm[i])
}

fn block_of(order: &WeakOrder, point: u8) -> usize {
    order
        .iter()
        .position(|&b| b >> point & 1 == 1)
        .expect("points cover")
}

fn on_diagonal(cell: &[WeakOrder]) -> bool {
    [(0u8, 1u8), (0, 2), (1, 2)]
        .iter()
        .any(|&(a, b)| cell.iter().all(|w| block_of(w, a) == block_of(w, b)))
}

fn canonical_u(cell: &[WeakOrder]) -> Vec<WeakOrder> {
    PERMS
        .iter()
        .map(|p| {
            cell.iter()
                .map(|w| w.iter().map(|&b| relabel_mask(b, p)).collect())
                .collect::<Vec<WeakOrder>>()
        })
        .min()
        .expect("nonempty")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TripleCell {
    U(Vec<WeakOrder>),
    /// Third point at the basepoint; the other two compared by sign.
    V(Vec<Sign>),
}

impl TripleCell {
    pub fn dimension(&self) -> usize {
        match self {
            TripleCell::U(c) => c.iter().map(Vec::len).sum(),
            TripleCell::V(s) => s.iter().map(|&x| if x == Sign::Eq { 1 } else { 2 }).sum(),
        }
    }

    pub fn is_u(&self) -> bool {
        matches!(self, TripleCell::U(_))
    }
}

impl fmt::Display for TripleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleCell::U(c) => {
                let parts: Vec<String> = c
                    .iter()
                    .map(|w| {
                        w.iter()
                            .map(|&b| {
                                (0..3)
                                    .filter(|&i| b >> i & 1 == 1)
                                    .map(|i| (b'a' + i) as char)
                                    .collect::<String>()
                            })
                            .collect::<Vec<_>>()
                            .join("<")
                    })
                    .collect();
                write!(f, "U[{}]", parts.join(";"))
            }
            TripleCell::V(s) => write!(f, "V({})", pattern_string(s)),
        }
    }
}

fn boundary_u(cell: &[WeakOrder]) -> Vec<TripleCell> {
    let mut out = Vec::new();
    for (alpha, w) in cell.iter().enumerate() {
        // Adjacent blocks meet.
        for j in 0..w.len().saturating_sub(1) {
            let mut nw = w.clone();
            nw[j] |= nw[j + 1];
            nw.remove(j + 1);
            let mut nc = cell.to_vec();
            nc[alpha] = nw;
            if !on_diagonal(&nc) {
                out.push(TripleCell::U(canonical_u(&nc)));
            }
        }
        // An extreme point leaves the cube. Only when it was tied with
        // someone in every other coordinate is the image nondegenerate.
        let ends = if w.len() == 1 {
            vec![w[0]]
        } else {
            vec![w[0], w[w.len() - 1]]
        };
        for end in ends {
            if end.count_ones() != 1 {
                continue;
            }
            let c = end.trailing_zeros() as u8;
            let tied_elsewhere = cell
                .iter()
                .enumerate()
                .all(|(beta, w2)| beta == alpha || w2[block_of(w2, c)].count_ones() > 1);
            if !tied_elsewhere {
                continue;
            }
            let others: Vec<u8> = (0..3).filter(|&x| x != c).collect();
            let sig: Vec<Sign> = cell
                .iter()
                .map(|w2| {
                    let (ia, ib) = (block_of(w2, others[0]), block_of(w2, others[1]));
                    match ia.cmp(&ib) {
                        std::cmp::Ordering::Less => Sign::Lt,
                        std::cmp::Ordering::Greater => Sign::Gt,
                        std::cmp::Ordering::Equal => Sign::Eq,
                    }
                })
                .collect();
            if sig.iter().any(|&s| s != Sign::Eq) {
                out.push(TripleCell::V(canonical_pattern(&sig)));
            }
        }
    }
    out
}

fn boundary_v(sig: &[Sign]) -> Vec<TripleCell> {
    (0..sig.len())
        .filter(|&i| sig[i] != Sign::Eq)
        .filter_map(|i| {
            let mut s = sig.to_vec();
            s[i] = Sign::Eq;
            s.iter()
                .any(|&x| x != Sign::Eq)
                .then(|| TripleCell::V(canonical_pattern(&s)))
        })
        .collect()
}

fn check_dim(m: usize) -> Result<()> {
    if m == 0 || m > MAX_RD3_DIM {
        return Err(Error::InvalidArgument(format!(
            "sphere dimension must be in 1..={MAX_RD3_DIM}, got {m}"
        )));
    }
    Ok(())
}

/// Sorted canonical U- and V-cells.
pub fn rd3_cells(m: usize) -> Result<Vec<TripleCell>> {
    check_dim(m)?;
    let orders = weak_orders();
    let mut cells = BTreeSet::new();
    let total = orders.len().pow(m as u32);
    for mut code in 0..total {
        let mut cell = Vec::with_capacity(m);
        for _ in 0..m {
            cell.push(orders[code % orders.len()].clone());
            code /= orders.len();
        }
        if !on_diagonal(&cell) {
            cells.insert(TripleCell::U(canonical_u(&cell)));
        }
    }
    for p in all_patterns(m) {
        if p.iter().any(|&s| s != Sign::Eq) {
            cells.insert(TripleCell::V(canonical_pattern(&p)));
        }
    }
    Ok(cells.into_iter().collect())
}

/// Chain complex of the reduced dihedral cube of `S^m`, degrees `0..=3m`.
pub fn rd3_sphere_complex(m: usize) -> Result<ChainComplex> {
    Ok(build(m)?.0)
}

fn build(m: usize) -> Result<(ChainComplex, usize)> {
    let cells = rd3_cells(m)?;
    let top = 3 * m;
    let mut by_degree: Vec<Vec<TripleCell>> = vec![Vec::new(); top + 1];
    for c in cells {
        by_degree[c.dimension()].push(c);
    }
    let index: Vec<HashMap<TripleCell, usize>> = by_degree
        .iter()
        .map(|cs| {
            cs.iter()
                .cloned()
                .enumerate()
                .map(|(i, c)| (c, i))
                .collect()
        })
        .collect();
    let dims: Vec<usize> = by_degree.iter().map(Vec::len).collect();
    let mut mixing = 0;
    let mut boundaries = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let rows = if q == 0 { 0 } else { dims[q - 1] };
        let mut b = Gf2Matrix::zeros(rows, dims[q]);
        if q > 0 {
            for (j, cell) in by_degree[q].iter().enumerate() {
                let faces = match cell {
                    TripleCell::U(c) => boundary_u(c),
                    TripleCell::V(s) => boundary_v(s),
                };
                for f in faces {
                    b.toggle_unchecked(index[q - 1][&f], j);
                }
                if cell.is_u() {
                    mixing += b
                        .column_ones(j)
                        .iter()
                        .filter(|&&i| !by_degree[q - 1][i].is_u())
                        .count();
                }
            }
        }
        boundaries.push(b);
    }
    let labels = by_degree
        .iter()
        .map(|cs| cs.iter().map(ToString::to_string).collect())
        .collect();
    Ok((ChainComplex::new(dims, boundaries, Some(labels))?, mixing))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleCensus {
    pub m: usize,
    pub u_cells: usize,
    /// V-cells up to swapping the two free points.
    pub v_cells: usize,
    /// V-cells as ordered sign patterns.
    pub v_patterns: usize,
    pub dims: Vec<usize>,
    pub u_dims: Vec<usize>,
    pub v_dims: Vec<usize>,
    /// Nonzero incidences from a U-cell onto a V-cell.
    pub u_to_v_incidences: usize,
    pub betti: BettiVector,
    /// Homology of the V-cells alone (they form a subcomplex).
    pub v_betti: BettiVector,
    /// Homology of the U-cells modulo the V-subcomplex.
    pub u_betti: BettiVector,
    /// Labels grouped by degree.
    pub cells: BTreeMap<usize, Vec<String>>,
}

pub fn rd3_sphere_uv_cells(m: usize) -> Result<TripleCensus> {
    let (complex, mixing) = build(m)?;
    let labels = complex.labels().expect("labeled").to_vec();
    let mut u_keep = Vec::new();
    let mut v_keep = Vec::new();
    for l in &labels {
        let (u, v): (Vec<usize>, Vec<usize>) = (0..l.len()).partition(|&i| l[i].starts_with('U'));
        u_keep.push(u);
        v_keep.push(v);
    }
    let v_part = complex.restrict(&v_keep)?;
    // Dropping the V rows of every U boundary gives the quotient complex.
    let u_part = complex.restrict(&u_keep)?;
    let v_patterns = all_patterns(m)
        .filter(|p| p.iter().any(|&s| s != Sign::Eq))
        .count();
    Ok(TripleCensus {
        m,
        u_cells: u_part.total_cells(),
        v_cells: v_part.total_cells(),
        v_patterns,
        dims: complex.dims().to_vec(),
        u_dims: u_part.dims().to_vec(),
        v_dims: v_part.dims().to_vec(),
        u_to_v_incidences: mixing,
        betti: complex.betti()?,
        v_betti: v_part.betti()?,
        u_betti: u_part.betti()?,
        cells: labels
            .into_iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_weak_orders() {
        assert_eq!(weak_orders().len(), 13);
    }

    #[test]
    fn circle_cube() {
        let c = rd3_sphere_uv_cells(1).unwrap();
        assert_eq!(c.u_cells, 1);
        assert_eq!(c.v_cells, 1);
        assert_eq!(c.v_patterns, 2);
        assert_eq!(c.betti.values, vec![0, 0, 1, 1]);
        assert_eq!(c.betti.sum(), 2);
        assert_eq!(c.u_to_v_incidences, 0);
    }

    #[test]
    fn betti_sum_is_twice_the_dimension() {
        for m in 1..=3 {
            let c = rd3_sphere_complex(m).unwrap();
            assert!(c.validate().is_ok());
            assert_eq!(c.betti().unwrap().sum(), 2 * m, "m = {m}");
        }
    }

    #[test]
    fn two_sphere_census() {
        let c = rd3_sphere_uv_cells(2).unwrap();
        assert_eq!(c.dims, vec![0, 0, 0, 2, 8, 12, 6]);
        assert_eq!(c.betti.values, vec![0, 0, 0, 1, 1, 1, 1]);
        // U boundaries do reach V-cells once m >= 2.
        assert!(c.u_to_v_incidences > 0);
    }

    #[test]
    fn v_cells_are_closed() {
        for m in 1..=3 {
            let c = rd3_sphere_complex(m).unwrap();
            let labels = c.labels().unwrap();
            for q in 1..c.dims().len() {
                for (j, l) in labels[q].iter().enumerate() {
                    if l.starts_with('V') {
                        for i in c.boundary(q).column_ones(j) {
                            assert!(labels[q - 1][i].starts_with('V'));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn census_invariant_under_relabeling() {
        let cells = rd3_cells(2).unwrap();
        for cell in &cells {
            if let TripleCell::U(c) = cell {
                for p in &PERMS {
                    let moved: Vec<WeakOrder> = c
                        .iter()
                        .map(|w| w.iter().map(|&b| relabel_mask(b, p)).collect())
                        .collect();
                    assert_eq!(&canonical_u(&moved), c);
                }
            }
        }
    }

    #[test]
    fn range_guard() {
        assert!(rd3_cells(0).is_err());
        assert!(rd3_cells(MAX_RD3_DIM + 1).is_err());
    }
}
