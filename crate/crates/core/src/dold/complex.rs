//! Chain complexes attached to an FD-module.

use serde::Serialize;

use super::module::FdModule;
use crate::chain::{BettiVector, ChainComplex};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// A subspace of `GF(2)^n` held as reduced row-echelon rows.
struct Subspace {
    basis: Gf2Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    fn from_rows(rows: &Gf2Matrix) -> Self {
        let (r, pivots) = rows.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        Self {
            basis: r.select_rows(&keep),
            pivots,
        }
    }

    fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of the columns of `vectors` (each a vector in the ambient
    /// space), or `None` if some column leaves the subspace.
    fn coordinates(&self, vectors: &Gf2Matrix) -> Option<Gf2Matrix> {
        let coords = vectors.select_rows(&self.pivots);
        let rebuilt = self.basis.transpose().mul(&coords).ok()?;
        (rebuilt == *vectors).then_some(coords)
    }
}

/// Joint kernel of faces `0..q` at level `q`, one basis vector per row.
fn joint_kernel(k: &FdModule, q: usize) -> Gf2Matrix {
    let n = k.levels()[q];
    let mut basis = Gf2Matrix::identity(n);
    for i in 0..q {
        if basis.rows() == 0 {
            break;
        }
        let face = k.face(q, i).to_dense();
        // Images of the current basis vectors, as columns.
        let images = face.mul(&basis.transpose()).expect("shapes agree");
        let combos = images.nullspace().vectors;
        basis = combos.mul(&basis).expect("shapes agree");
    }
    basis
}

/// Normalized complex: degree `q` is the joint kernel of the faces
/// `d_0 .. d_(q-1)` and the boundary is the restriction of `d_q`.
pub fn moore_complex(k: &FdModule) -> Result<ChainComplex> {
    k.check_axioms()?;
    let top = k.q_max();
    let spaces: Vec<Subspace> = (0..=top)
        .map(|q| Subspace::from_rows(&joint_kernel(k, q)))
        .collect();
    let dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
    let mut boundaries = vec![Gf2Matrix::zeros(0, dims[0])];
    for q in 1..=top {
        let face = k.face(q, q).to_dense();
        let images = face.mul(&spaces[q].basis.transpose())?;
        let coords = spaces[q - 1].coordinates(&images).ok_or_else(|| {
            Error::Shape(format!(
                "last face at level {q} leaves the normalized subspace"
            ))
        })?;
        boundaries.push(coords);
    }
    let c = ChainComplex::new(dims, boundaries, None)?;
    if let Err(v) = c.validate() {
        return Err(Error::BoundarySquared {
            degree: v.degree,
            element: v.element,
        });
    }
    Ok(c)
}

/// Unnormalized complex with boundary `sum_i d_i`.
pub fn alternating_complex(k: &FdModule) -> Result<ChainComplex> {
    k.check_axioms()?;
    let top = k.q_max();
    let mut boundaries = vec![Gf2Matrix::zeros(0, k.levels()[0])];
    for q in 1..=top {
        let mut b = Gf2Matrix::zeros(k.levels()[q - 1], k.levels()[q]);
        for i in 0..=q {
            b = b.add(&k.face(q, i).to_dense())?;
        }
        boundaries.push(b);
    }
    let c = ChainComplex::new(
        k.levels().to_vec(),
        boundaries,
        k.labels().map(<[_]>::to_vec),
    )?;
    if let Err(v) = c.validate() {
        return Err(Error::BoundarySquared {
            degree: v.degree,
            element: v.element,
        });
    }
    Ok(c)
}

/// Dimension of the span of all degeneracy images in level `q`.
pub fn degenerate_dim(k: &FdModule, q: usize) -> usize {
    if q == 0 {
        return 0;
    }
    let parts: Vec<Gf2Matrix> = (0..q)
        .map(|i| k.degeneracy(q - 1, i).to_dense().transpose())
        .collect();
    let refs: Vec<&Gf2Matrix> = parts.iter().collect();
    Gf2Matrix::vstack(&refs).map_or(0, |m| m.rank())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedHomology {
    pub betti: BettiVector,
    /// Degrees from here on may be wrong because the model stops at `q_max`.
    pub unreliable_from: usize,
}

/// Betti numbers of the normalized complex in degrees `0..=d`.
pub fn homology_through_degree(k: &FdModule, d: usize) -> Result<TruncatedHomology> {
    if k.q_max() < d + 1 {
        return Err(Error::Truncation(format!(
            "degree {d} needs q_max >= {}, model stops at {}",
            d + 1,
            k.q_max()
        )));
    }
    let b = moore_complex(k)?.betti()?;
    Ok(TruncatedHomology {
        betti: BettiVector::new(b.values[..=d].to_vec()),
        unreliable_from: k.q_max() - 1,
    })
}
