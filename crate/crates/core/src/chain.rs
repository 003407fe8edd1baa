//! Chain complexes over GF(2) and their Betti numbers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// Graded GF(2) vector spaces in degrees `0..=N` with boundary maps.
///
/// `boundaries[q]` maps degree `q` to degree `q - 1` and has shape
/// `dims[q - 1] x dims[q]`; `boundaries[0]` is the `0 x dims[0]` zero map.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<Gf2Matrix>,
    labels: Option<Vec<Vec<String>>>,
}

/// Where `boundary[q - 1] * boundary[q]` first fails to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: usize,
    pub element: usize,
    pub label: Option<String>,
}

impl ChainComplex {
    pub fn new(
        dims: Vec<usize>,
        boundaries: Vec<Gf2Matrix>,
        labels: Option<Vec<Vec<String>>>,
    ) -> Result<Self> {
        if dims.len() != boundaries.len() {
            return Err(Error::Shape(format!(
                "{} degrees but {} boundary maps",
                dims.len(),
                boundaries.len()
            )));
        }
        for (q, b) in boundaries.iter().enumerate() {
            let expected = (if q == 0 { 0 } else { dims[q - 1] }, dims[q]);
            if b.shape() != expected {
                return Err(Error::Shape(format!(
                    "boundary[{q}] is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        if let Some(l) = &labels {
            if l.len() != dims.len() || l.iter().zip(&dims).any(|(l, &d)| l.len() != d) {
                return Err(Error::Shape("labels do not match dims".into()));
            }
        }
        Ok(Self {
            dims,
            boundaries,
            labels,
        })
    }

    /// A complex with the given dimensions and all boundaries zero.
    pub fn zero(dims: Vec<usize>) -> Self {
        let boundaries = (0..dims.len())
            .map(|q| Gf2Matrix::zeros(if q == 0 { 0 } else { dims[q - 1] }, dims[q]))
            .collect();
        Self {
            dims,
            boundaries,
            labels: None,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, q: usize) -> &Gf2Matrix {
        &self.boundaries[q]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Checks `boundary[q - 1] * boundary[q] = 0` in every degree. The report
    /// names the lowest failing degree and the first basis element there.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for q in 2..self.dims.len() {
            let prod = self.boundaries[q - 1]
                .mul(&self.boundaries[q])
                .expect("shapes checked at construction");
            if prod.is_zero() {
                continue;
            }
            let element = (0..prod.cols())
                .find(|&j| !prod.column_ones(j).is_empty())
                .unwrap_or(0);
            let label = self.labels.as_ref().map(|l| l[q][element].clone());
            return Err(Violation {
                degree: q,
                element,
                label,
            });
        }
        Ok(())
    }

    /// Ranks of every boundary map, index `q` for `boundary[q]`.
    pub fn boundary_ranks(&self) -> Vec<usize> {
        self.boundaries.par_iter().map(Gf2Matrix::rank).collect()
    }

    pub fn betti(&self) -> Result<BettiVector> {
        self.validate().map_err(|v| Error::BoundarySquared {
            degree: v.degree,
            element: v.element,
        })?;
        let ranks = self.boundary_ranks();
        let values = (0..self.dims.len())
            .map(|q| {
                let out = ranks[q];
                let inc = ranks.get(q + 1).copied().unwrap_or(0);
                self.dims[q] - out - inc
            })
            .collect();
        Ok(BettiVector::new(values))
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.dims)
    }

    /// Keeps only the listed basis elements of each degree. The caller must
    /// pick a subcomplex (closed under boundary) for the result to be valid.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<Self> {
        if keep.len() != self.dims.len() {
            return Err(Error::Shape("one index list per degree".into()));
        }
        let dims: Vec<usize> = keep.iter().map(Vec::len).collect();
        let mut boundaries = Vec::with_capacity(dims.len());
        for q in 0..dims.len() {
            let rows = if q == 0 { 0 } else { dims[q - 1] };
            let mut b = Gf2Matrix::zeros(rows, dims[q]);
            if q > 0 {
                for (jj, &j) in keep[q].iter().enumerate() {
                    for (ii, &i) in keep[q - 1].iter().enumerate() {
                        if self.boundaries[q].get_unchecked(i, j) {
                            b.set_unchecked(ii, jj, true);
                        }
                    }
                }
            }
            boundaries.push(b);
        }
        let labels = self.labels.as_ref().map(|l| {
            keep.iter()
                .enumerate()
                .map(|(q, idx)| idx.iter().map(|&i| l[q][i].clone()).collect())
                .collect()
        });
        Self::new(dims, boundaries, labels)
    }

    pub fn to_json(&self) -> ChainComplexDoc {
        ChainComplexDoc {
            dims: self.dims.clone(),
            boundaries: self.boundaries.iter().map(Gf2Matrix::to_hex_rows).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(doc: &ChainComplexDoc) -> Result<Self> {
        if doc.boundaries.len() != doc.dims.len() {
            return Err(Error::Shape("one boundary per degree".into()));
        }
        let boundaries = doc
            .boundaries
            .iter()
            .enumerate()
            .map(|(q, rows)| {
                let expect_rows = if q == 0 { 0 } else { doc.dims[q - 1] };
                if rows.len() != expect_rows {
                    return Err(Error::Shape(format!(
                        "boundary[{q}] has {} rows, expected {expect_rows}",
                        rows.len()
                    )));
                }
                Gf2Matrix::from_hex_rows(rows, doc.dims[q])
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.dims.clone(), boundaries, doc.labels.clone())
    }
}

/// Wire format of a chain complex:
/// `{"dims":[...], "boundaries":[[hex rows]...], "labels":[[...]...]}`.
///
/// `boundaries[q]` lists the `dims[q-1]` rows of the degree-`q` boundary.
/// Each row is `ceil(dims[q] / 4)` hex digits; column 0 is the high bit of
/// the first digit and padding bits are zero. `labels` may be `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainComplexDoc {
    pub dims: Vec<usize>,
    pub boundaries: Vec<Vec<String>>,
    #[serde(default)]
    pub labels: Option<Vec<Vec<String>>>,
}

/// Block-diagonal sum; shorter complexes are padded with zero degrees.
pub fn direct_sum(parts: &[ChainComplex]) -> ChainComplex {
    let len = parts.iter().map(|c| c.dims.len()).max().unwrap_or(0);
    let dim_at = |c: &ChainComplex, q: usize| c.dims.get(q).copied().unwrap_or(0);
    let dims: Vec<usize> = (0..len)
        .map(|q| parts.iter().map(|c| dim_at(c, q)).sum())
        .collect();
    let mut boundaries = Vec::with_capacity(len);
    for q in 0..len {
        let blocks: Vec<Gf2Matrix> = parts
            .iter()
            .map(|c| {
                if q < c.dims.len() {
                    c.boundaries[q].clone()
                } else {
                    Gf2Matrix::zeros(if q == 0 { 0 } else { dim_at(c, q - 1) }, 0)
                }
            })
            .collect();
        let refs: Vec<&Gf2Matrix> = blocks.iter().collect();
        boundaries.push(Gf2Matrix::block_diagonal(&refs));
    }
    let labels = if parts.iter().all(|c| c.labels.is_some()) {
        Some(
            (0..len)
                .map(|q| {
                    parts
                        .iter()
                        .flat_map(|c| {
                            c.labels
                                .as_ref()
                                .and_then(|l| l.get(q))
                                .cloned()
                                .unwrap_or_default()
                        })
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };
    ChainComplex {
        dims,
        boundaries,
        labels,
    }
}

pub(crate) fn alternating_sum(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Homology dimensions indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BettiVector {
    pub values: Vec<usize>,
}

impl BettiVector {
    pub fn new(values: Vec<usize>) -> Self {
        Self { values }
    }

    pub fn top_degree(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn sum(&self) -> usize {
        self.values.iter().sum()
    }

    pub fn get(&self, q: usize) -> usize {
        self.values.get(q).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.values)
    }

    /// Drops trailing zero degrees.
    pub fn trimmed(&self) -> Self {
        let mut v = self.values.clone();
        while v.last() == Some(&0) {
            v.pop();
        }
        Self::new(v)
    }

    /// Degrees carrying nonzero homology.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&q| self.values[q] > 0)
            .collect()
    }

    /// Componentwise sum, padding the shorter vector with zeros.
    pub fn plus(&self, other: &Self) -> Self {
        let n = self.values.len().max(other.values.len());
        Self::new((0..n).map(|q| self.get(q) + other.get(q)).collect())
    }

    /// Checks the vector can be the mod-2 Betti vector of a closed connected
    /// `m`-manifold: length `m + 1`, `values[0] = 1`, `values[i] = values[m - i]`.
    pub fn validate_manifold(&self) -> Result<()> {
        let m = self.top_degree();
        if self.values.is_empty() {
            return Err(Error::Duality("empty vector".into()));
        }
        if self.values[0] != 1 {
            return Err(Error::Duality(format!(
                "b_0 = {}, expected 1",
                self.values[0]
            )));
        }
        for i in 0..=m {
            if self.values[i] != self.values[m - i] {
                return Err(Error::Duality(format!(
                    "b_{i} = {} but b_{} = {}",
                    self.values[i],
                    m - i,
                    self.values[m - i]
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Boundary of a triangle: vertices 0,1,2; edges 01, 02, 12.
    pub(crate) fn triangle_boundary() -> ChainComplex {
        let d1 = Gf2Matrix::from_dense(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        ChainComplex::new(vec![3, 3], vec![Gf2Matrix::zeros(0, 3), d1], None).unwrap()
    }

    #[test]
    fn zero_complexes_validate() {
        assert!(ChainComplex::zero(vec![2, 3, 1]).validate().is_ok());
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let c = triangle_boundary();
        assert!(c.validate().is_ok());
        assert_eq!(c.betti().unwrap().values, vec![1, 1]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn circle_with_one_cell_each() {
        let c = ChainComplex::zero(vec![1, 1]);
        assert_eq!(c.betti().unwrap().values, vec![1, 1]);
    }

    #[test]
    fn single_cell() {
        let c = ChainComplex::zero(vec![0, 0, 0, 1]);
        assert_eq!(c.betti().unwrap().values, vec![0, 0, 0, 1]);
        assert_eq!(ChainComplex::zero(vec![1]).euler_characteristic(), 1);
    }

    #[test]
    fn injected_violation_reported_at_degree_two() {
        let d1 = Gf2Matrix::from_dense(&[vec![1]]).unwrap();
        let d2 = Gf2Matrix::from_dense(&[vec![1]]).unwrap();
        let c = ChainComplex::new(
            vec![1, 1, 1],
            vec![Gf2Matrix::zeros(0, 1), d1, d2],
            Some(vec![vec!["v".into()], vec!["e".into()], vec!["f".into()]]),
        )
        .unwrap();
        let v = c.validate().unwrap_err();
        assert_eq!(v.degree, 2);
        assert_eq!(v.element, 0);
        assert_eq!(v.label.as_deref(), Some("f"));
        assert!(matches!(
            c.betti(),
            Err(Error::BoundarySquared { degree: 2, .. })
        ));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let r = ChainComplex::new(
            vec![1, 2],
            vec![Gf2Matrix::zeros(0, 1), Gf2Matrix::zeros(2, 2)],
            None,
        );
        assert!(matches!(r, Err(Error::Shape(_))));
    }

    #[test]
    fn direct_sum_examples() {
        let a = ChainComplex::zero(vec![0, 1]);
        let b = ChainComplex::zero(vec![0, 0, 1]);
        assert_eq!(direct_sum(&[a, b]).betti().unwrap().values, vec![0, 1, 1]);
        let t = triangle_boundary();
        let s = direct_sum(&[t.clone(), t.clone(), t]);
        assert_eq!(s.betti().unwrap().values, vec![3, 3]);
    }

    #[test]
    fn json_roundtrip_and_golden() {
        let c = triangle_boundary();
        let doc = c.to_json();
        assert_eq!(doc.boundaries[1], vec!["c", "a", "6"]);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ChainComplexDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(ChainComplex::from_json(&back).unwrap(), c);
    }

    #[test]
    fn manifold_validation() {
        assert!(BettiVector::new(vec![1, 2, 1]).validate_manifold().is_ok());
        assert!(BettiVector::new(vec![1, 2, 2]).validate_manifold().is_err());
        assert!(BettiVector::new(vec![2, 0, 2]).validate_manifold().is_err());
    }

    /// Boundary matrices of the full simplex complex on random facets,
    /// assembled directly, compared with a Vec<u8> elimination oracle.
    fn random_simplicial(facets: &[Vec<usize>]) -> (ChainComplex, Vec<Vec<Vec<u8>>>) {
        use std::collections::BTreeSet;
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let n = f.len();
            for mask in 1u32..(1 << n) {
                let s: Vec<usize> = (0..n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                faces.insert(s);
            }
        }
        let top = faces.iter().map(Vec::len).max().unwrap_or(1) - 1;
        let by_dim: Vec<Vec<Vec<usize>>> = (0..=top)
            .map(|d| faces.iter().filter(|s| s.len() == d + 1).cloned().collect())
            .collect();
        let mut mats = Vec::new();
        let mut dense = Vec::new();
        for q in 0..=top {
            let rows = if q == 0 { 0 } else { by_dim[q - 1].len() };
            let mut m = vec![vec![0u8; by_dim[q].len()]; rows];
            if q > 0 {
                for (j, s) in by_dim[q].iter().enumerate() {
                    for v in 0..s.len() {
                        let mut f = s.clone();
                        f.remove(v);
                        let i = by_dim[q - 1].iter().position(|x| *x == f).unwrap();
                        m[i][j] ^= 1;
                    }
                }
            }
            let g = if rows == 0 {
                Gf2Matrix::zeros(0, by_dim[q].len())
            } else {
                Gf2Matrix::from_dense(&m).unwrap()
            };
            mats.push(g);
            dense.push(m);
        }
        let dims = by_dim.iter().map(Vec::len).collect();
        (ChainComplex::new(dims, mats, None).unwrap(), dense)
    }

    fn oracle_rank(m: &[Vec<u8>]) -> usize {
        let mut a = m.to_vec();
        let cols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            if let Some(p) = (r..a.len()).find(|&i| a[i][c] == 1) {
                a.swap(r, p);
                let pr = a[r].clone();
                for row in a.iter_mut().skip(r + 1) {
                    if row[c] == 1 {
                        for (x, y) in row.iter_mut().zip(&pr) {
                            *x ^= y;
                        }
                    }
                }
                r += 1;
            }
        }
        r
    }

    fn arb_facets() -> impl Strategy<Value = Vec<Vec<usize>>> {
        proptest::collection::vec(
            proptest::collection::btree_set(0usize..7, 1..4).prop_map(|s| s.into_iter().collect()),
            1..6,
        )
    }

    proptest! {
        #[test]
        fn betti_matches_dense_oracle(facets in arb_facets()) {
            let (c, dense) = random_simplicial(&facets);
            prop_assert!(c.validate().is_ok());
            let b = c.betti().unwrap();
            let ranks: Vec<usize> = dense.iter().map(|m| oracle_rank(m)).collect();
            for q in 0..c.dims().len() {
                let expect = c.dims()[q] - ranks[q] - ranks.get(q + 1).copied().unwrap_or(0);
                prop_assert_eq!(b.values[q], expect);
            }
            prop_assert_eq!(c.euler_characteristic(), b.euler_characteristic());
        }

        #[test]
        fn direct_sum_adds_betti(a in arb_facets(), b in arb_facets()) {
            let (x, _) = random_simplicial(&a);
            let (y, _) = random_simplicial(&b);
            let s = direct_sum(&[x.clone(), y.clone()]);
            let expect = x.betti().unwrap().plus(&y.betti().unwrap());
            prop_assert_eq!(s.betti().unwrap(), expect);
        }
    }
}
