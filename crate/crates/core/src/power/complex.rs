//! Finite abstract simplicial complexes given by their facets.

use std::collections::{BTreeSet, HashMap};

use crate::chain::ChainComplex;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// Original vertex labels; vertex `i` internally is `labels[i]`.
    labels: Vec<usize>,
    facets: Vec<Vec<u32>>,
    /// Every nonempty face, ordered by dimension and then lexicographically.
    faces: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SimplicialComplex {
    pub fn from_facets(facets: &[Vec<usize>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::InvalidArgument(
                "a complex needs at least one facet".into(),
            ));
        }
        let labels: Vec<usize> = facets
            .iter()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let relabel: HashMap<usize, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let mut sets: Vec<Vec<u32>> = Vec::with_capacity(facets.len());
        for (n, f) in facets.iter().enumerate() {
            if f.is_empty() {
                return Err(Error::InvalidArgument(format!("facet {n} is empty")));
            }
            let mut s: Vec<u32> = f.iter().map(|v| relabel[v]).collect();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "facet {n} repeats a vertex"
                )));
            }
            if s.len() > 16 {
                return Err(Error::InvalidArgument(format!(
                    "facet {n} has more than 16 vertices"
                )));
            }
            sets.push(s);
        }
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                if i != j && is_subset(a, b) && (a.len() < b.len() || i > j) {
                    return Err(Error::InvalidArgument(format!(
                        "facet {i} is contained in facet {j}; facets must be maximal"
                    )));
                }
            }
        }
        let mut all: BTreeSet<(usize, Vec<u32>)> = BTreeSet::new();
        for s in &sets {
            let n = s.len();
            for mask in 1u32..(1 << n) {
                let face: Vec<u32> = (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| s[b])
                    .collect();
                all.insert((face.len(), face));
            }
        }
        let faces: Vec<Vec<u32>> = all.into_iter().map(|(_, f)| f).collect();
        let index = faces
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        sets.sort();
        Ok(Self {
            labels,
            facets: sets,
            faces,
            index,
        })
    }

    /// Parses one facet per line: integer vertices separated by whitespace
    /// or commas. `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut facets = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let facet = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>().map_err(|e| Error::Parse {
                        line: n + 1,
                        reason: format!("{t:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            facets.push(facet);
        }
        if facets.is_empty() {
            return Err(Error::Parse {
                line: 0,
                reason: "no facets".into(),
            });
        }
        Self::from_facets(&facets)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.facets {
            let words: Vec<String> = f
                .iter()
                .map(|&v| self.labels[v as usize].to_string())
                .collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
        out
    }

    /// Boundary of the `n`-simplex, a triangulated `(n-1)`-sphere.
    pub fn simplex_boundary(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "the 0-simplex has empty boundary".into(),
            ));
        }
        let facets: Vec<Vec<usize>> = (0..=n)
            .map(|skip| (0..=n).filter(|&v| v != skip).collect())
            .collect();
        Self::from_facets(&facets)
    }

    /// Cycle graph on `n >= 3` vertices.
    pub fn polygon(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(
                "a polygon needs at least 3 vertices".into(),
            ));
        }
        let facets: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::from_facets(&facets)
    }

    pub fn octahedron_boundary() -> Self {
        let mut facets = Vec::new();
        for x in [0, 1] {
            for y in [2, 3] {
                for z in [4, 5] {
                    facets.push(vec![x, y, z]);
                }
            }
        }
        Self::from_facets(&facets).expect("octahedron facets are valid")
    }

    /// Polygons of `sizes[i]` vertices glued at a common vertex.
    pub fn circle_wedge(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.iter().any(|&n| n < 3) {
            return Err(Error::InvalidArgument(
                "each circle needs at least 3 vertices".into(),
            ));
        }
        let mut facets = Vec::new();
        let mut next = 1;
        for &n in sizes {
            let ring: Vec<usize> = std::iter::once(0).chain(next..next + n - 1).collect();
            next += n - 1;
            for i in 0..n {
                facets.push(vec![ring[i], ring[(i + 1) % n]]);
            }
        }
        Self::from_facets(&facets)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dimension(&self) -> usize {
        self.faces.last().map_or(0, |f| f.len() - 1)
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn faces(&self) -> &[Vec<u32>] {
        &self.faces
    }

    pub fn face_index(&self, face: &[u32]) -> Option<usize> {
        self.index.get(face).copied()
    }

    /// Indices of all nonempty subfaces of face `i`, itself included.
    pub fn subfaces(&self, i: usize) -> Vec<usize> {
        let f = &self.faces[i];
        let n = f.len();
        (1u32..(1 << n))
            .map(|mask| {
                let g: Vec<u32> = (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| f[b])
                    .collect();
                self.index[&g]
            })
            .collect()
    }

    /// Simplicial chain complex, cells ordered as in [`faces`](Self::faces).
    pub fn chain_complex(&self) -> ChainComplex {
        let top = self.dimension();
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        for (i, f) in self.faces.iter().enumerate() {
            by_dim[f.len() - 1].push(i);
        }
        let local: HashMap<usize, usize> = by_dim
            .iter()
            .flat_map(|d| d.iter().enumerate().map(|(k, &i)| (i, k)))
            .collect();
        let dims: Vec<usize> = by_dim.iter().map(Vec::len).collect();
        let mut boundaries = vec![Gf2Matrix::zeros(0, dims[0])];
        for q in 1..=top {
            let mut b = Gf2Matrix::zeros(dims[q - 1], dims[q]);
            for (col, &i) in by_dim[q].iter().enumerate() {
                let f = &self.faces[i];
                for skip in 0..f.len() {
                    let g: Vec<u32> = f
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    b.set(local[&self.index[&g]], col, true).expect("in range");
                }
            }
            boundaries.push(b);
        }
        let labels = by_dim
            .iter()
            .map(|d| {
                d.iter()
                    .map(|&i| {
                        let words: Vec<String> = self.faces[i]
                            .iter()
                            .map(|&v| self.labels[v as usize].to_string())
                            .collect();
                        format!("[{}]", words.join(","))
                    })
                    .collect()
            })
            .collect();
        ChainComplex::new(dims, boundaries, Some(labels)).expect("shapes are consistent")
    }
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments() {
        let k = SimplicialComplex::parse("# triangle boundary\n0 1\n1,2 # edge\n\n2 0\n").unwrap();
        assert_eq!(k.vertex_count(), 3);
        assert_eq!(k.faces().len(), 6);
        assert_eq!(k.dimension(), 1);
        assert_eq!(SimplicialComplex::parse(&k.to_text()).unwrap(), k);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            SimplicialComplex::parse("0 1\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(SimplicialComplex::parse("# nothing\n").is_err());
        assert!(SimplicialComplex::parse("0 1 2\n0 1\n").is_err());
        assert!(SimplicialComplex::parse("0 0\n").is_err());
    }

    #[test]
    fn sphere_homology() {
        assert_eq!(
            SimplicialComplex::polygon(4)
                .unwrap()
                .chain_complex()
                .betti()
                .unwrap()
                .values,
            vec![1, 1]
        );
        let s2 = SimplicialComplex::simplex_boundary(3).unwrap();
        assert_eq!(s2.faces().len(), 14);
        assert_eq!(s2.chain_complex().betti().unwrap().values, vec![1, 0, 1]);
        let oct = SimplicialComplex::octahedron_boundary();
        assert_eq!(oct.faces().len(), 26);
        assert_eq!(oct.chain_complex().betti().unwrap().values, vec![1, 0, 1]);
        let eight = SimplicialComplex::circle_wedge(&[3, 3]).unwrap();
        assert_eq!(eight.chain_complex().betti().unwrap().values, vec![1, 2]);
    }
}
