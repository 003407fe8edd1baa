use serde::{Deserialize, Serialize};

use super::sparse::SparseMap;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// A simplicial vector space over GF(2), truncated at level `q_max`.
///
/// `faces[q][i]` maps level `q` to level `q - 1` (`faces[0]` is empty) and
/// `degeneracies[q][i]` maps level `q` to level `q + 1` (`degeneracies[q_max]`
/// is empty), for `i` in `0..=q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FdModule {
    levels: Vec<usize>,
    faces: Vec<Vec<SparseMap>>,
    degeneracies: Vec<Vec<SparseMap>>,
    labels: Option<Vec<Vec<String>>>,
}

impl FdModule {
    pub fn new(
        levels: Vec<usize>,
        faces: Vec<Vec<SparseMap>>,
        degeneracies: Vec<Vec<SparseMap>>,
        labels: Option<Vec<Vec<String>>>,
    ) -> Result<Self> {
        let n = levels.len();
        if n == 0 {
            return Err(Error::Shape("at least one level required".into()));
        }
        if faces.len() != n || degeneracies.len() != n {
            return Err(Error::Shape(
                "one face and degeneracy list per level".into(),
            ));
        }
        for q in 0..n {
            let nf = if q == 0 { 0 } else { q + 1 };
            let nd = if q + 1 == n { 0 } else { q + 1 };
            if faces[q].len() != nf || degeneracies[q].len() != nd {
                return Err(Error::Axiom {
                    axiom: "index range",
                    q,
                    i: faces[q].len(),
                    j: degeneracies[q].len(),
                });
            }
            for f in &faces[q] {
                if (f.rows(), f.cols()) != (levels[q - 1], levels[q]) {
                    return Err(Error::Shape(format!("face at level {q} has wrong shape")));
                }
            }
            for s in &degeneracies[q] {
                if (s.rows(), s.cols()) != (levels[q + 1], levels[q]) {
                    return Err(Error::Shape(format!(
                        "degeneracy at level {q} has wrong shape"
                    )));
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n || l.iter().zip(&levels).any(|(l, &d)| l.len() != d) {
                return Err(Error::Shape("labels do not match levels".into()));
            }
        }
        Ok(Self {
            levels,
            faces,
            degeneracies,
            labels,
        })
    }

    /// Builds a module whose face and degeneracy maps send basis elements to
    /// basis elements or zero, from callbacks returning the image index.
    pub fn from_functions(
        levels: Vec<usize>,
        face: impl Fn(usize, usize, usize) -> Option<usize>,
        degeneracy: impl Fn(usize, usize, usize) -> Option<usize>,
        labels: Option<Vec<Vec<String>>>,
    ) -> Result<Self> {
        let n = levels.len();
        let map =
            |rows: usize, q: usize, i: usize, f: &dyn Fn(usize, usize, usize) -> Option<usize>| {
                let cols = (0..levels[q])
                    .map(|j| f(q, i, j).map(|r| vec![r as u32]).unwrap_or_default())
                    .collect();
                SparseMap::from_columns(rows, cols)
            };
        let mut faces = Vec::with_capacity(n);
        let mut degens = Vec::with_capacity(n);
        for q in 0..n {
            let fs = if q == 0 {
                Vec::new()
            } else {
                (0..=q)
                    .map(|i| map(levels[q - 1], q, i, &face))
                    .collect::<Result<_>>()?
            };
            let ds = if q + 1 == n {
                Vec::new()
            } else {
                (0..=q)
                    .map(|i| map(levels[q + 1], q, i, &degeneracy))
                    .collect::<Result<_>>()?
            };
            faces.push(fs);
            degens.push(ds);
        }
        Self::new(levels, faces, degens, labels)
    }

    pub fn q_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn face(&self, q: usize, i: usize) -> &SparseMap {
        &self.faces[q][i]
    }

    pub fn degeneracy(&self, q: usize, i: usize) -> &SparseMap {
        &self.degeneracies[q][i]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, q: usize, j: usize) -> String {
        self.labels
            .as_ref()
            .map_or_else(|| j.to_string(), |l| l[q][j].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|&d| d == 0)
    }

    /// Replaces one face map; meant for constructing counterexamples.
    pub fn with_face(mut self, q: usize, i: usize, map: SparseMap) -> Result<Self> {
        if (map.rows(), map.cols()) != (self.faces[q][i].rows(), self.faces[q][i].cols()) {
            return Err(Error::Shape("replacement face has the wrong shape".into()));
        }
        self.faces[q][i] = map;
        Ok(self)
    }

    /// Checks the simplicial identities at every level where both sides are
    /// defined, reporting the first failure.
    pub fn check_axioms(&self) -> Result<()> {
        let top = self.q_max();
        let fail = |axiom, q, i, j| Err(Error::Axiom { axiom, q, i, j });
        let d = |q: usize, i: usize| &self.faces[q][i];
        let s = |q: usize, i: usize| &self.degeneracies[q][i];
        for q in 0..=top {
            // Faces after faces: d_i d_j = d_{j-1} d_i for i < j, on level q.
            if q >= 2 {
                for j in 1..=q {
                    for i in 0..j {
                        if d(q - 1, i).compose(d(q, j))? != d(q - 1, j - 1).compose(d(q, i))? {
                            return fail("d_i d_j = d_(j-1) d_i", q, i, j);
                        }
                    }
                }
            }
            // Degeneracies after degeneracies, landing at q + 2.
            if q + 2 <= top {
                for j in 0..=q {
                    for i in 0..=j {
                        if s(q + 1, i).compose(s(q, j))? != s(q + 1, j + 1).compose(s(q, i))? {
                            return fail("s_i s_j = s_(j+1) s_i", q, i, j);
                        }
                    }
                }
            }
            if q + 1 > top {
                continue;
            }
            let id = SparseMap::identity(self.levels[q]);
            for j in 0..=q {
                for i in 0..=q + 1 {
                    let lhs = d(q + 1, i).compose(s(q, j))?;
                    if i == j || i == j + 1 {
                        if lhs != id {
                            return fail("d_i s_i = d_(i+1) s_i = id", q, i, j);
                        }
                    } else if i < j {
                        if q >= 1 && lhs != s(q - 1, j - 1).compose(d(q, i))? {
                            return fail("d_i s_j = s_(j-1) d_i", q, i, j);
                        }
                    } else if q >= 1 && lhs != s(q - 1, j).compose(d(q, i - 1))? {
                        return fail("d_i s_j = s_j d_(i-1)", q, i, j);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_doc(&self) -> FdModuleDoc {
        let hex = |m: &SparseMap| m.to_dense().to_hex_rows();
        FdModuleDoc {
            levels: self.levels.clone(),
            faces: self
                .faces
                .iter()
                .map(|l| l.iter().map(hex).collect())
                .collect(),
            degeneracies: self
                .degeneracies
                .iter()
                .map(|l| l.iter().map(hex).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_doc(doc: &FdModuleDoc) -> Result<Self> {
        let n = doc.levels.len();
        if doc.faces.len() != n || doc.degeneracies.len() != n {
            return Err(Error::Shape(
                "one face and degeneracy list per level".into(),
            ));
        }
        let parse = |rows: &[String], r: usize, c: usize| -> Result<SparseMap> {
            if rows.len() != r {
                return Err(Error::Shape(format!(
                    "expected {r} rows, got {}",
                    rows.len()
                )));
            }
            Ok(SparseMap::from_dense(&Gf2Matrix::from_hex_rows(rows, c)?))
        };
        let mut faces = Vec::with_capacity(n);
        let mut degens = Vec::with_capacity(n);
        for q in 0..n {
            let c = doc.levels[q];
            faces.push(
                doc.faces[q]
                    .iter()
                    .map(|rows| {
                        let r = if q == 0 { 0 } else { doc.levels[q - 1] };
                        parse(rows, r, c)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
            degens.push(
                doc.degeneracies[q]
                    .iter()
                    .map(|rows| {
                        let r = doc.levels.get(q + 1).copied().unwrap_or(0);
                        parse(rows, r, c)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Self::new(doc.levels.clone(), faces, degens, doc.labels.clone())
    }
}

/// Wire format: level sizes, then per level a list of hex-row matrices for the
/// faces and degeneracies (same row encoding as chain complexes).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdModuleDoc {
    pub levels: Vec<usize>,
    pub faces: Vec<Vec<Vec<String>>>,
    pub degeneracies: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub labels: Option<Vec<Vec<String>>>,
}

/// One basis element per level, every operator the identity.
pub fn point_module(q_max: usize) -> FdModule {
    FdModule::from_functions(
        vec![1; q_max + 1],
        |_, _, _| Some(0),
        |_, _, _| Some(0),
        Some(vec![vec!["*".to_string()]; q_max + 1]),
    )
    .expect("well-formed")
}

pub fn zero_module(q_max: usize) -> FdModule {
    FdModule::from_functions(vec![0; q_max + 1], |_, _, _| None, |_, _, _| None, None)
        .expect("well-formed")
}

/// Levelwise direct sum.
pub fn direct_sum(parts: &[&FdModule]) -> Result<FdModule> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidArgument("empty direct sum".into()));
    };
    let n = first.levels.len();
    if parts.iter().any(|p| p.levels.len() != n) {
        return Err(Error::Truncation(
            "summands have different truncation levels".into(),
        ));
    }
    let levels = (0..n)
        .map(|q| parts.iter().map(|p| p.levels[q]).sum())
        .collect();
    let join = |pick: &dyn Fn(&FdModule) -> &Vec<Vec<SparseMap>>| -> Vec<Vec<SparseMap>> {
        (0..n)
            .map(|q| {
                (0..pick(first)[q].len())
                    .map(|i| {
                        let blocks: Vec<&SparseMap> =
                            parts.iter().map(|p| &pick(p)[q][i]).collect();
                        SparseMap::direct_sum(&blocks)
                    })
                    .collect()
            })
            .collect()
    };
    let faces = join(&|p| &p.faces);
    let degens = join(&|p| &p.degeneracies);
    let labels = (0..n)
        .map(|q| {
            parts
                .iter()
                .enumerate()
                .flat_map(|(k, p)| (0..p.levels[q]).map(move |j| format!("{k}:{}", p.label(q, j))))
                .collect()
        })
        .collect();
    FdModule::new(levels, faces, degens, Some(labels))
}

/// Levelwise tensor product with the diagonal action; basis element
/// `(a, b)` of level `q` has index `a * rhs.levels[q] + b`.
pub fn product(lhs: &FdModule, rhs: &FdModule) -> Result<FdModule> {
    if lhs.levels.len() != rhs.levels.len() {
        return Err(Error::Truncation(format!(
            "truncation levels differ: {} vs {}",
            lhs.q_max(),
            rhs.q_max()
        )));
    }
    let n = lhs.levels.len();
    let levels = (0..n).map(|q| lhs.levels[q] * rhs.levels[q]).collect();
    let faces = (0..n)
        .map(|q| {
            lhs.faces[q]
                .iter()
                .zip(&rhs.faces[q])
                .map(|(a, b)| a.kron(b))
                .collect()
        })
        .collect();
    let degens = (0..n)
        .map(|q| {
            lhs.degeneracies[q]
                .iter()
                .zip(&rhs.degeneracies[q])
                .map(|(a, b)| a.kron(b))
                .collect()
        })
        .collect();
    let labels = (0..n)
        .map(|q| {
            let mut l = Vec::with_capacity(lhs.levels[q] * rhs.levels[q]);
            for a in 0..lhs.levels[q] {
                for b in 0..rhs.levels[q] {
                    l.push(format!("({},{})", lhs.label(q, a), rhs.label(q, b)));
                }
            }
            l
        })
        .collect();
    let out = FdModule::new(levels, faces, degens, Some(labels))?;
    out.check_axioms()?;
    Ok(out)
}
