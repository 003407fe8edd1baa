//! Cartesian powers of a simplicial complex with the slot-permuting action.

use super::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// A cell is a tuple of faces `(f_0, .., f_{p-1})`; cell ids use the mixed
/// radix `sum f_i * F^(p-1-i)` with `F` the number of faces.
#[derive(Clone, Debug)]
pub struct CwProduct {
    factor: SimplicialComplex,
    power: usize,
    group: Vec<Vec<usize>>,
    /// Group elements whose fixed cells make up the contracted diagonal.
    diagonal: Vec<usize>,
}

/// Symmetries of a `p`-cycle acting on slots, identity first: for `p = 2`
/// the swap, for `p = 3` all six permutations.
pub fn dihedral_slot_group(p: usize) -> Result<Vec<Vec<usize>>> {
    match p {
        2 => Ok(vec![vec![0, 1], vec![1, 0]]),
        3 => {
            let mut g = Vec::new();
            for r in 0..3 {
                g.push((0..3).map(|i| (i + r) % 3).collect());
            }
            for r in 0..3 {
                g.push((0..3).map(|i| (r + 3 - i) % 3).collect());
            }
            Ok(g)
        }
        _ => Err(Error::InvalidArgument(format!(
            "power {p} is not supported; use 2 or 3"
        ))),
    }
}

impl CwProduct {
    pub fn new(factor: &SimplicialComplex, power: usize) -> Result<Self> {
        let group = dihedral_slot_group(power)?;
        // Transpositions of cyclically adjacent slots.
        let diagonal = group
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                let moved: Vec<usize> = (0..power).filter(|&i| g[i] != i).collect();
                moved.len() == 2 && {
                    let (a, b) = (moved[0], moved[1]);
                    (b - a == 1 || (a == 0 && b == power - 1)) && g[a] == b && g[b] == a
                }
            })
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            factor: factor.clone(),
            power,
            group,
            diagonal,
        })
    }

    pub fn factor(&self) -> &SimplicialComplex {
        &self.factor
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn group(&self) -> &[Vec<usize>] {
        &self.group
    }

    pub fn diagonal_elements(&self) -> &[usize] {
        &self.diagonal
    }

    pub fn cell_count(&self) -> usize {
        self.factor.faces().len().pow(self.power as u32)
    }

    pub fn decode(&self, cell: usize) -> Vec<usize> {
        let f = self.factor.faces().len();
        let mut t = vec![0; self.power];
        let mut c = cell;
        for slot in (0..self.power).rev() {
            t[slot] = c % f;
            c /= f;
        }
        t
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        let f = self.factor.faces().len();
        tuple.iter().fold(0, |acc, &x| acc * f + x)
    }

    pub fn cell_dim(&self, cell: usize) -> usize {
        self.decode(cell)
            .iter()
            .map(|&x| self.factor.faces()[x].len() - 1)
            .sum()
    }

    /// Image of a cell under group element `g`: slot `i` moves to `g[i]`.
    pub fn act(&self, g: usize, cell: usize) -> usize {
        let t = self.decode(cell);
        let mut out = vec![0; self.power];
        for (i, &x) in t.iter().enumerate() {
            out[self.group[g][i]] = x;
        }
        self.encode(&out)
    }

    /// Codimension-one faces in the product cell structure.
    pub fn facets_of(&self, cell: usize) -> Vec<usize> {
        let t = self.decode(cell);
        let faces = self.factor.faces();
        let mut out = Vec::new();
        for slot in 0..self.power {
            let f = &faces[t[slot]];
            if f.len() < 2 {
                continue;
            }
            for skip in 0..f.len() {
                let g: Vec<u32> = f
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                let mut u = t.clone();
                u[slot] = self
                    .factor
                    .face_index(&g)
                    .expect("faces are closed under subsets");
                out.push(self.encode(&u));
            }
        }
        out.sort_unstable();
        out
    }

    /// All cells below or equal to `cell` in the face order.
    pub fn closure(&self, cell: usize) -> Vec<usize> {
        let t = self.decode(cell);
        let subs: Vec<Vec<usize>> = t.iter().map(|&x| self.factor.subfaces(x)).collect();
        let mut out = vec![0usize];
        for s in &subs {
            out = out
                .iter()
                .flat_map(|&acc| s.iter().map(move |&x| (acc, x)))
                .map(|(acc, x)| acc * self.factor.faces().len() + x)
                .collect();
        }
        out
    }

    /// Whether some adjacent pair of slots carries the same face, i.e. the
    /// cell meets the diagonal in its interior.
    pub fn meets_diagonal(&self, cell: usize) -> bool {
        self.diagonal.iter().any(|&g| self.act(g, cell) == cell)
    }

    pub fn orbit_count(&self) -> usize {
        let mut seen = vec![false; self.cell_count()];
        let mut n = 0;
        for c in 0..self.cell_count() {
            if !seen[c] {
                n += 1;
                for g in 0..self.group.len() {
                    seen[self.act(g, c)] = true;
                }
            }
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_square_counts() {
        let k = SimplicialComplex::polygon(3).unwrap();
        let p = CwProduct::new(&k, 2).unwrap();
        assert_eq!(p.cell_count(), 36);
        // Burnside: the swap fixes the 6 diagonal tuples.
        let fixed = (0..36).filter(|&c| p.act(1, c) == c).count();
        assert_eq!(fixed, 6);
        assert_eq!(p.orbit_count(), (36 + fixed) / 2);
        assert_eq!(p.orbit_count(), 21);
    }

    #[test]
    fn point_cube() {
        let k = SimplicialComplex::from_facets(&[vec![7]]).unwrap();
        let p = CwProduct::new(&k, 3).unwrap();
        assert_eq!(p.cell_count(), 1);
        assert!(CwProduct::new(&k, 5).is_err());
    }

    #[test]
    fn action_commutes_with_incidence() {
        let k = SimplicialComplex::polygon(3).unwrap();
        let p = CwProduct::new(&k, 3).unwrap();
        assert_eq!(p.group().len(), 6);
        assert_eq!(p.diagonal_elements().len(), 3);
        for c in 0..p.cell_count() {
            for g in 0..6 {
                let mut moved: Vec<usize> = p.facets_of(c).iter().map(|&f| p.act(g, f)).collect();
                moved.sort_unstable();
                assert_eq!(moved, p.facets_of(p.act(g, c)));
                assert_eq!(p.cell_dim(p.act(g, c)), p.cell_dim(c));
            }
            for f in p.facets_of(c) {
                assert_eq!(p.cell_dim(f) + 1, p.cell_dim(c));
            }
        }
    }

    #[test]
    fn group_is_closed() {
        let g = dihedral_slot_group(3).unwrap();
        for a in &g {
            for b in &g {
                let c: Vec<usize> = (0..3).map(|i| a[b[i]]).collect();
                assert!(g.contains(&c));
            }
        }
    }
}
