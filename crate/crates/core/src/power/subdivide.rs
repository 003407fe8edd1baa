//! Barycentric subdivision of equivariant cell structures.

use std::collections::HashMap;

use super::complex::SimplicialComplex;
use super::product::CwProduct;
use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// A simplicial complex with a group acting by vertex permutations.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    /// Simplices by dimension, each an ascending vertex list.
    simplices: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, u32>>,
    /// One vertex permutation per group element; element 0 is the identity.
    vertex_action: Vec<Vec<u32>>,
    /// Group elements whose fixed simplices form the contracted subcomplex.
    diagonal: Vec<usize>,
    rounds: usize,
}

impl EquivariantComplex {
    /// The complex itself with the trivial group.
    pub fn from_simplicial(k: &SimplicialComplex) -> Self {
        let top = k.dimension();
        let mut simplices = vec![Vec::new(); top + 1];
        for f in k.faces() {
            simplices[f.len() - 1].push(f.clone());
        }
        let identity = (0..k.vertex_count() as u32).collect();
        Self::assemble(simplices, vec![identity], Vec::new(), 0)
    }

    /// First barycentric subdivision of the product cell structure: the
    /// order complex of its face poset. Vertices are product cells.
    pub fn from_product(p: &CwProduct) -> Self {
        let n = p.cell_count();
        let below: Vec<Vec<u32>> = (0..n)
            .map(|c| {
                p.closure(c)
                    .into_iter()
                    .filter(|&d| d != c)
                    .map(|d| d as u32)
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = (0..n).map(|c| p.cell_dim(c)).collect();
        let action = (0..p.group().len())
            .map(|g| (0..n).map(|c| p.act(g, c) as u32).collect())
            .collect();
        let simplices = order_complex(&below, &dims);
        Self::assemble(simplices, action, p.diagonal_elements().to_vec(), 1)
    }

    fn assemble(
        simplices: Vec<Vec<Vec<u32>>>,
        vertex_action: Vec<Vec<u32>>,
        diagonal: Vec<usize>,
        rounds: usize,
    ) -> Self {
        let index = simplices
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i as u32))
                    .collect()
            })
            .collect();
        Self {
            simplices,
            index,
            vertex_action,
            diagonal,
            rounds,
        }
    }

    /// Barycentric subdivision: vertices are the simplices of `self`.
    pub fn subdivide(&self) -> Self {
        let offsets: Vec<u32> = self
            .simplices
            .iter()
            .scan(0u32, |acc, level| {
                let start = *acc;
                *acc += level.len() as u32;
                Some(start)
            })
            .collect();
        let id = |s: &[u32]| offsets[s.len() - 1] + self.index[s.len() - 1][s];
        let mut below = Vec::new();
        let mut dims = Vec::new();
        for (d, level) in self.simplices.iter().enumerate() {
            for s in level {
                let n = s.len();
                let full = (1u32 << n) - 1;
                below.push(
                    (1..full)
                        .map(|mask| {
                            let f: Vec<u32> = (0..n)
                                .filter(|b| mask >> b & 1 == 1)
                                .map(|b| s[b])
                                .collect();
                            id(&f)
                        })
                        .collect::<Vec<u32>>(),
                );
                dims.push(d);
            }
        }
        let action = (0..self.vertex_action.len())
            .map(|g| {
                self.simplices
                    .iter()
                    .flatten()
                    .map(|s| id(&self.act(g, s)))
                    .collect()
            })
            .collect();
        let simplices = order_complex(&below, &dims);
        Self::assemble(simplices, action, self.diagonal.clone(), self.rounds + 1)
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn group_order(&self) -> usize {
        self.vertex_action.len()
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<u32>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplex_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplex_index(&self, s: &[u32]) -> Option<u32> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    /// Image of a simplex under group element `g`, as an ascending list.
    pub fn act(&self, g: usize, s: &[u32]) -> Vec<u32> {
        let perm = &self.vertex_action[g];
        let mut out: Vec<u32> = s.iter().map(|&v| perm[v as usize]).collect();
        out.sort_unstable();
        out
    }

    /// Whether every vertex is fixed by one common contracted element.
    pub fn on_diagonal(&self, s: &[u32]) -> bool {
        self.diagonal
            .iter()
            .any(|&g| s.iter().all(|&v| self.vertex_action[g][v as usize] == v))
    }

    /// Every simplex mapped to itself by a group element must be fixed
    /// pointwise.
    pub fn check_regular(&self) -> Result<()> {
        for level in &self.simplices {
            for s in level {
                for g in 1..self.vertex_action.len() {
                    let perm = &self.vertex_action[g];
                    if self.act(g, s) == *s && s.iter().any(|&v| perm[v as usize] != v) {
                        return Err(Error::Irregular {
                            rounds: self.rounds,
                            detail: format!(
                                "element {g} maps simplex {s:?} to itself without fixing it"
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Simplicial chain complex of the underlying space.
    pub fn chain_complex(&self) -> ChainComplex {
        let dims = self.simplex_counts();
        let mut boundaries = vec![Gf2Matrix::zeros(0, dims[0])];
        for q in 1..dims.len() {
            let mut b = Gf2Matrix::zeros(dims[q - 1], dims[q]);
            for (col, s) in self.simplices[q].iter().enumerate() {
                for skip in 0..s.len() {
                    let f: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    b.set(self.index[q - 1][&f] as usize, col, true)
                        .expect("in range");
                }
            }
            boundaries.push(b);
        }
        ChainComplex::new(dims, boundaries, None).expect("shapes are consistent")
    }
}

/// Chains of a graded poset, given the strict down-set of every element.
fn order_complex(below: &[Vec<u32>], dims: &[usize]) -> Vec<Vec<Vec<u32>>> {
    let top = dims.iter().copied().max().unwrap_or(0);
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new(); top + 1];
    let mut chain = Vec::with_capacity(top + 1);
    for x in 0..below.len() as u32 {
        chain.push(x);
        descend(below, &mut chain, &mut out);
        chain.pop();
    }
    for level in &mut out {
        level.sort_unstable();
    }
    out
}

fn descend(below: &[Vec<u32>], chain: &mut Vec<u32>, out: &mut [Vec<Vec<u32>>]) {
    let mut s = chain.clone();
    s.sort_unstable();
    out[s.len() - 1].push(s);
    let last = *chain.last().expect("nonempty chain") as usize;
    for &y in &below[last] {
        chain.push(y);
        descend(below, chain, out);
        chain.pop();
    }
}

/// Number of simplices per dimension after `rounds` subdivisions of the
/// product, computed without enumerating them.
pub fn estimate_simplices(p: &CwProduct, rounds: usize) -> Vec<u128> {
    let n = p.cell_count();
    let dims: Vec<usize> = (0..n).map(|c| p.cell_dim(c)).collect();
    let top = dims.iter().copied().max().unwrap_or(0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| dims[c]);
    // chains[c][k]: chains of length k + 1 whose largest element is c.
    let mut chains: Vec<Vec<u128>> = vec![Vec::new(); n];
    let mut counts = vec![0u128; top + 1];
    for &c in &order {
        let mut row = vec![0u128; dims[c] + 1];
        row[0] = 1;
        for d in p.closure(c) {
            if d == c {
                continue;
            }
            for (k, &v) in chains[d].iter().enumerate() {
                row[k + 1] += v;
            }
        }
        for (k, &v) in row.iter().enumerate() {
            counts[k] += v;
        }
        chains[c] = row;
    }
    for _ in 1..rounds {
        counts = resubdivide_counts(&counts);
    }
    counts
}

/// Simplex counts of the barycentric subdivision: a `d`-simplex contributes
/// one `k`-simplex per ordered partition of its `d + 1` vertices into
/// `k + 1` blocks.
fn resubdivide_counts(counts: &[u128]) -> Vec<u128> {
    let n = counts.len();
    let mut stirling = vec![vec![0u128; n + 1]; n + 1];
    stirling[0][0] = 1;
    for a in 1..=n {
        for b in 1..=a {
            stirling[a][b] = b as u128 * stirling[a - 1][b] + stirling[a - 1][b - 1];
        }
    }
    let mut fact = vec![1u128; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as u128;
    }
    let mut out = vec![0u128; n];
    for (d, &c) in counts.iter().enumerate() {
        for k in 0..=d {
            out[k] += c * fact[k + 1] * stirling[d + 1][k + 1];
        }
    }
    out
}
