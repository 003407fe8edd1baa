use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// Sorts and cancels repeated indices in pairs.
pub(crate) fn sum_mod2(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}

/// Linear map stored by columns: column `j` lists the rows holding a one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMap {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<u32>>,
}

impl SparseMap {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            columns: (0..n as u32).map(|i| vec![i]).collect(),
        }
    }

    /// Builds from column lists; entries are reduced mod 2.
    pub fn from_columns(rows: usize, columns: Vec<Vec<u32>>) -> Result<Self> {
        let columns: Vec<Vec<u32>> = columns.into_iter().map(sum_mod2).collect();
        if let Some(bad) = columns.iter().flatten().find(|&&r| r as usize >= rows) {
            return Err(Error::Shape(format!(
                "row {bad} out of range for {rows} rows"
            )));
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            columns,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        sum_mod2(
            v.iter()
                .flat_map(|&j| self.columns[j as usize].iter().copied())
                .collect(),
        )
    }

    /// `self * rhs`.
    pub fn compose(&self, rhs: &SparseMap) -> Result<SparseMap> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(SparseMap {
            rows: self.rows,
            cols: rhs.cols,
            columns: rhs.columns.iter().map(|c| self.apply(c)).collect(),
        })
    }

    pub fn kron(&self, rhs: &SparseMap) -> SparseMap {
        let mut columns = Vec::with_capacity(self.cols * rhs.cols);
        for a in &self.columns {
            for b in &rhs.columns {
                let mut c = Vec::with_capacity(a.len() * b.len());
                for &x in a {
                    for &y in b {
                        c.push(x * rhs.rows as u32 + y);
                    }
                }
                columns.push(c);
            }
        }
        SparseMap {
            rows: self.rows * rhs.rows,
            cols: self.cols * rhs.cols,
            columns,
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(parts: &[&SparseMap]) -> SparseMap {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut columns = Vec::new();
        let mut offset = 0u32;
        for p in parts {
            for c in &p.columns {
                columns.push(c.iter().map(|&r| r + offset).collect());
            }
            offset += p.rows as u32;
        }
        SparseMap {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn to_dense(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.rows, self.cols);
        for (j, c) in self.columns.iter().enumerate() {
            for &i in c {
                m.set_unchecked(i as usize, j, true);
            }
        }
        m
    }

    pub fn from_dense(m: &Gf2Matrix) -> Self {
        let t = m.transpose();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            columns: (0..m.cols())
                .map(|j| t.row_ones(j).map(|i| i as u32).collect())
                .collect(),
        }
    }
}
