//! Exactness bookkeeping for the Smith sequence of the swap on `S^m x S^m`.

use serde::Serialize;

use crate::chain::BettiVector;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Feasibility {
    Feasible,
    /// 1-based index of the first image rank forced negative, or
    /// `dims.len()` when the sequence does not close at zero.
    Infeasible {
        position: usize,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

/// Decides whether `0 -> V_0 -> ... -> V_n -> 0` with `dim V_i = dims[i]` can
/// be exact: writing `dims[i] = r_i + r_{i+1}` with `r_0 = 0` forces every
/// rank, and all must be non-negative with the last one zero.
pub fn smith_feasibility(dims: &[usize]) -> Feasibility {
    let mut r: i64 = 0;
    for (i, &d) in dims.iter().enumerate() {
        r = d as i64 - r;
        if r < 0 {
            return Feasibility::Infeasible { position: i + 1 };
        }
    }
    if r == 0 {
        Feasibility::Feasible
    } else {
        Feasibility::Infeasible {
            position: dims.len(),
        }
    }
}

/// Dimension sequence of the Smith sequence for the factor swap on
/// `S^m x S^m`, read from degree `2m` down to 0. Each degree contributes
/// `H(X/T, F) + H(F)`, `H(X)`, `H(X/T, F)`, where `F` is the diagonal copy of
/// `S^m` and `H(X/T, F)` is given by `relative`.
pub fn smith_sequence_dims(m: usize, relative: &BettiVector) -> Result<Vec<usize>> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "sphere dimension must be at least 1".into(),
        ));
    }
    let total = |q: usize| -> usize {
        usize::from(q == 0) + 2 * usize::from(q == m) + usize::from(q == 2 * m)
    };
    let fixed = |q: usize| -> usize { usize::from(q == 0) + usize::from(q == m) };
    let mut out = Vec::with_capacity(3 * (2 * m + 1));
    for q in (0..=2 * m).rev() {
        let rel = relative.get(q);
        out.push(rel + fixed(q));
        out.push(total(q));
        out.push(rel);
    }
    Ok(out)
}
