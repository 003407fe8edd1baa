//! Simplicial models of spheres and bouquets.

use std::collections::HashMap;

use super::module::{direct_sum, point_module, FdModule};
use crate::cells::BouquetSpec;
use crate::error::{Error, Result};

/// Monotone surjections `[q] -> [m]` as value sequences of length `q + 1`.
fn surjections(q: usize, m: usize) -> Vec<Vec<u8>> {
    fn rec(pos: usize, q: usize, steps_left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == q + 1 {
            if steps_left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().expect("starts at 0");
        // Stay, or step up by one if steps remain.
        let remaining = q + 1 - pos;
        if remaining > steps_left {
            cur.push(last);
            rec(pos + 1, q, steps_left, cur, out);
            cur.pop();
        }
        if steps_left > 0 {
            cur.push(last + 1);
            rec(pos + 1, q, steps_left - 1, cur, out);
            cur.pop();
        }
    }
    if q < m {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(1, q, m, &mut vec![0], &mut out);
    out
}

fn is_surjective(seq: &[u8], m: usize) -> bool {
    seq.first() == Some(&0)
        && seq.last() == Some(&(m as u8))
        && seq.windows(2).all(|w| w[1] - w[0] <= 1)
}

struct Surjections {
    bases: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

impl Surjections {
    fn new(m: usize, q_max: usize) -> Self {
        let bases: Vec<Vec<Vec<u8>>> = (0..=q_max).map(|q| surjections(q, m)).collect();
        let index = bases
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        Self { bases, index }
    }

    fn face(&self, m: usize, q: usize, i: usize, j: usize) -> Option<usize> {
        let mut s = self.bases[q][j].clone();
        s.remove(i);
        is_surjective(&s, m).then(|| self.index[q - 1][&s])
    }

    fn degeneracy(&self, q: usize, i: usize, j: usize) -> usize {
        let mut s = self.bases[q][j].clone();
        s.insert(i, s[i]);
        self.index[q + 1][&s]
    }

    fn labels(&self) -> Vec<Vec<String>> {
        self.bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|s| s.iter().map(|v| char::from(b'0' + v)).collect())
                    .collect()
            })
            .collect()
    }
}

fn check(m: usize, q_max: usize) -> Result<()> {
    if m == 0 || m > 9 {
        return Err(Error::InvalidArgument(format!(
            "sphere dimension {m} outside 1..=9"
        )));
    }
    if q_max < m {
        return Err(Error::Truncation(format!(
            "q_max = {q_max} is below the dimension {m}"
        )));
    }
    Ok(())
}

/// Reduced chains of `Delta^m / boundary`: level `q` has one basis element per
/// monotone surjection `[q] -> [m]`, and faces that stop being surjective
/// vanish.
pub fn sphere_model(m: usize, q_max: usize) -> Result<FdModule> {
    check(m, q_max)?;
    let s = Surjections::new(m, q_max);
    let levels = s.bases.iter().map(Vec::len).collect();
    FdModule::from_functions(
        levels,
        |q, i, j| s.face(m, q, i, j),
        |q, i, j| Some(s.degeneracy(q, i, j)),
        Some(s.labels()),
    )
}

/// Unreduced chains of `Delta^m / boundary`: the surjections plus the
/// basepoint (index 0), which absorbs the faces that leave the top cell.
pub fn pointed_sphere_set(m: usize, q_max: usize) -> Result<FdModule> {
    check(m, q_max)?;
    let s = Surjections::new(m, q_max);
    let levels = s.bases.iter().map(|b| b.len() + 1).collect();
    let mut labels = s.labels();
    for l in &mut labels {
        l.insert(0, "*".into());
    }
    FdModule::from_functions(
        levels,
        |q, i, j| match j {
            0 => Some(0),
            _ => Some(s.face(m, q, i, j - 1).map_or(0, |k| k + 1)),
        },
        |q, i, j| match j {
            0 => Some(0),
            _ => Some(s.degeneracy(q, i, j - 1) + 1),
        },
        Some(labels),
    )
}

/// Adds a disjoint basepoint summand, turning a reduced model into an
/// unreduced one up to isomorphism.
pub fn pointed(k: &FdModule) -> Result<FdModule> {
    direct_sum(&[k, &point_module(k.q_max())])
}

/// Reduced model of a bouquet: `k_p` copies of the `p`-sphere model.
pub fn wedge_model(spec: &BouquetSpec, q_max: usize) -> Result<FdModule> {
    spec.validate()?;
    if q_max < spec.m {
        return Err(Error::Truncation(format!(
            "q_max = {q_max} is below the top dimension {}",
            spec.m
        )));
    }
    let mut parts = Vec::new();
    for p in 1..=spec.m {
        let model = sphere_model(p, q_max)?;
        for _ in 0..spec.kp(p) {
            parts.push(model.clone());
        }
    }
    let refs: Vec<&FdModule> = parts.iter().collect();
    direct_sum(&refs)
}
