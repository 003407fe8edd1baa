//! Sign-vector cells of the reduced symmetric square of an m-sphere.
//!
//! The sphere is the cube `I^m` with its boundary collapsed to the basepoint.
//! An ordered pair `(x, y)` of interior points lies in the cell named by the
//! sign vector comparing `x_i` with `y_i`. The swap of factors flips every
//! sign, so cells are taken up to flip. Pairs with one factor at the basepoint
//! sweep out two m-cells `pt x S^m` and `S^m x pt`, which the swap identifies
//! into the special cell. The diagonal (all signs `=`) is collapsed.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// Largest sphere dimension the enumerators accept (3^m patterns).
pub const MAX_RD2_DIM: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Lt,
    Eq,
    Gt,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Lt, Sign::Eq, Sign::Gt];

    pub fn flip(self) -> Self {
        match self {
            Sign::Lt => Sign::Gt,
            Sign::Gt => Sign::Lt,
            Sign::Eq => Sign::Eq,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Lt => '<',
            Sign::Eq => '=',
            Sign::Gt => '>',
        }
    }
}

pub(crate) fn pattern_string(pattern: &[Sign]) -> String {
    pattern.iter().map(|s| s.symbol()).collect()
}

/// Lexicographically smaller of a pattern and its flip.
pub fn canonical_pattern(pattern: &[Sign]) -> Vec<Sign> {
    let flipped: Vec<Sign> = pattern.iter().map(|s| s.flip()).collect();
    if flipped.as_slice() < pattern {
        flipped
    } else {
        pattern.to_vec()
    }
}

pub(crate) fn all_patterns(m: usize) -> impl Iterator<Item = Vec<Sign>> {
    let total = 3usize.pow(m as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![Sign::Lt; m];
        for slot in v.iter_mut().rev() {
            *slot = Sign::ALL[code % 3];
            code /= 3;
        }
        v
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CellKind {
    Pair,
    Special,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignVectorCell {
    pub pattern: Vec<Sign>,
    pub kind: CellKind,
    pub dimension: usize,
}

impl SignVectorCell {
    pub fn pair(pattern: &[Sign]) -> Result<Self> {
        if pattern.iter().all(|&s| s == Sign::Eq) {
            return Err(Error::InvalidArgument(
                "all-equal pattern is the diagonal".into(),
            ));
        }
        let eq = pattern.iter().filter(|&&s| s == Sign::Eq).count();
        Ok(Self {
            pattern: canonical_pattern(pattern),
            kind: CellKind::Pair,
            dimension: 2 * pattern.len() - eq,
        })
    }

    pub fn special(m: usize) -> Self {
        Self {
            pattern: vec![Sign::Eq; m],
            kind: CellKind::Special,
            dimension: m,
        }
    }
}

impl fmt::Display for SignVectorCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CellKind::Pair => write!(f, "e({})", pattern_string(&self.pattern)),
            CellKind::Special => write!(f, "e_special^{}", self.dimension),
        }
    }
}

/// Codimension-one faces of a pair cell before the swap quotient.
#[derive(Debug, PartialEq, Eq)]
enum Face {
    Pair(Vec<Sign>),
    /// `x` fixed at the basepoint, `y` sweeping the sphere.
    BaseFirst,
    /// `y` fixed at the basepoint.
    BaseSecond,
    Basepoint,
}

fn faces(pattern: &[Sign]) -> Vec<Face> {
    let mut out = Vec::new();
    let moving: Vec<usize> = (0..pattern.len())
        .filter(|&i| pattern[i] != Sign::Eq)
        .collect();
    for &i in &moving {
        // x_i and y_i meet.
        let mut p = pattern.to_vec();
        p[i] = Sign::Eq;
        if p.iter().all(|&s| s == Sign::Eq) {
            out.push(Face::Basepoint);
        } else {
            out.push(Face::Pair(p));
        }
        // The smaller of x_i, y_i reaches 0 and the larger reaches 1.
        // Either way one factor hits the collapsed cube boundary. The other
        // factor only sweeps a full m-cell when it is free in every
        // coordinate, i.e. when every other coordinate was tied.
        let sweeps = moving.len() == 1;
        let (low, high) = if pattern[i] == Sign::Lt {
            (Face::BaseFirst, Face::BaseSecond)
        } else {
            (Face::BaseSecond, Face::BaseFirst)
        };
        if sweeps {
            out.push(low);
            out.push(high);
        } else {
            out.push(Face::Basepoint);
            out.push(Face::Basepoint);
        }
    }
    out
}

/// Cells of the reduced symmetric square of `S^m`, sorted by dimension and
/// then pattern. The special cell comes first in its degree.
pub fn rd2_cells(m: usize) -> Result<Vec<SignVectorCell>> {
    check_dim(m)?;
    let mut cells = vec![SignVectorCell::special(m)];
    let mut seen = std::collections::BTreeSet::new();
    for p in all_patterns(m) {
        if p.iter().all(|&s| s == Sign::Eq) {
            continue;
        }
        let c = canonical_pattern(&p);
        if seen.insert(c.clone()) {
            cells.push(SignVectorCell::pair(&c)?);
        }
    }
    cells.sort_by(|a, b| {
        (a.dimension, a.kind == CellKind::Pair, &a.pattern).cmp(&(
            b.dimension,
            b.kind == CellKind::Pair,
            &b.pattern,
        ))
    });
    Ok(cells)
}

fn check_dim(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "sphere dimension must be at least 1".into(),
        ));
    }
    if m > MAX_RD2_DIM {
        return Err(Error::InvalidArgument(format!(
            "sphere dimension {m} exceeds the enumeration limit {MAX_RD2_DIM}"
        )));
    }
    Ok(())
}

/// Chain complex of the reduced symmetric square of `S^m` in degrees `0..=2m`.
pub fn rd2_sphere_complex(m: usize) -> Result<ChainComplex> {
    let cells = rd2_cells(m)?;
    let top = 2 * m;
    let mut by_degree: Vec<Vec<&SignVectorCell>> = vec![Vec::new(); top + 1];
    for c in &cells {
        by_degree[c.dimension].push(c);
    }
    let index: Vec<HashMap<(CellKind, &[Sign]), usize>> = by_degree
        .iter()
        .map(|cs| {
            cs.iter()
                .enumerate()
                .map(|(i, c)| ((c.kind, c.pattern.as_slice()), i))
                .collect()
        })
        .collect();
    let special = vec![Sign::Eq; m];
    let dims: Vec<usize> = by_degree.iter().map(Vec::len).collect();
    let mut boundaries = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let rows = if q == 0 { 0 } else { dims[q - 1] };
        let mut b = Gf2Matrix::zeros(rows, dims[q]);
        if q > 0 {
            for (j, cell) in by_degree[q].iter().enumerate() {
                if cell.kind == CellKind::Special {
                    // Both lifts have boundary in the basepoint.
                    continue;
                }
                for face in faces(&cell.pattern) {
                    let key = match &face {
                        Face::Pair(p) => Some((CellKind::Pair, canonical_pattern(p))),
                        Face::BaseFirst | Face::BaseSecond => {
                            Some((CellKind::Special, special.clone()))
                        }
                        Face::Basepoint => None,
                    };
                    if let Some((kind, p)) = key {
                        let i = index[q - 1][&(kind, p.as_slice())];
                        b.toggle_unchecked(i, j);
                    }
                }
            }
        }
        boundaries.push(b);
    }
    let labels = by_degree
        .iter()
        .map(|cs| cs.iter().map(|c| c.to_string()).collect())
        .collect();
    ChainComplex::new(dims, boundaries, Some(labels))
}

/// Splits the complex into the pair-cell part and the special cell.
pub fn split_rd2(m: usize) -> Result<(ChainComplex, ChainComplex)> {
    let full = rd2_sphere_complex(m)?;
    let labels = full.labels().expect("labels always attached").to_vec();
    let mut pair_keep = Vec::new();
    let mut special_keep = Vec::new();
    for l in &labels {
        let (s, p): (Vec<usize>, Vec<usize>) =
            (0..l.len()).partition(|&i| l[i].starts_with("e_special"));
        pair_keep.push(p);
        special_keep.push(s);
    }
    Ok((full.restrict(&pair_keep)?, full.restrict(&special_keep)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::direct_sum;

    fn ones_in(m: usize) -> Vec<usize> {
        (0..=2 * m).map(|q| usize::from(q >= m)).collect()
    }

    #[test]
    fn circle_square() {
        let c = rd2_sphere_complex(1).unwrap();
        assert_eq!(c.dims(), &[0, 1, 1]);
        assert_eq!(c.betti().unwrap().values, vec![0, 1, 1]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn two_sphere_square() {
        let b = rd2_sphere_complex(2).unwrap().betti().unwrap();
        assert_eq!(b.values, vec![0, 0, 1, 1, 1]);
        assert_eq!(b.sum(), 3);
    }

    #[test]
    fn three_sphere_census() {
        let c = rd2_sphere_complex(3).unwrap();
        assert_eq!(c.total_cells(), (27 - 1) / 2 + 1);
        let b = c.betti().unwrap();
        assert_eq!(c.euler_characteristic(), b.euler_characteristic());
    }

    #[test]
    fn ones_from_m_to_2m() {
        for m in 1..=6 {
            let c = rd2_sphere_complex(m).unwrap();
            assert!(c.validate().is_ok());
            assert_eq!(c.betti().unwrap().values, ones_in(m), "m = {m}");
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            rd2_sphere_complex(0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(rd2_sphere_complex(MAX_RD2_DIM + 1).is_err());
    }

    #[test]
    fn lifts_of_the_special_cell_cancel() {
        // Before the swap quotient the single moving coordinate produces both
        // lifts; they land on the same cell and cancel.
        let f = faces(&[Sign::Eq, Sign::Lt]);
        assert!(f.contains(&Face::BaseFirst) && f.contains(&Face::BaseSecond));
        let c = rd2_sphere_complex(2).unwrap();
        assert!(c.boundary(3).row_is_zero(0));
    }

    #[test]
    fn split_parts() {
        let s = split_rd2(1).unwrap().1.betti().unwrap();
        assert_eq!(s.values, vec![0, 1, 0]);
        for m in 1..=4 {
            let full = rd2_sphere_complex(m).unwrap();
            let (b, s) = split_rd2(m).unwrap();
            assert_eq!(s.total_cells(), 1);
            assert!(s.boundary(m).is_zero());
            let dims: Vec<usize> = b.dims().iter().zip(s.dims()).map(|(x, y)| x + y).collect();
            assert_eq!(dims, full.dims());
            assert_eq!(direct_sum(&[b, s]).betti().unwrap(), full.betti().unwrap());
        }
        let (b, s) = split_rd2(2).unwrap();
        assert_eq!(
            b.betti().unwrap().plus(&s.betti().unwrap()).values,
            vec![0, 0, 1, 1, 1]
        );
    }

    #[test]
    fn canonical_is_flip_invariant() {
        for p in all_patterns(3) {
            let f: Vec<Sign> = p.iter().map(|s| s.flip()).collect();
            assert_eq!(canonical_pattern(&p), canonical_pattern(&f));
        }
    }
}
