//! Symmetric quotients of tensor powers.
//!
//! The `p`-th tensor power of a module is kept implicit: basis tuples are
//! encoded as mixed-radix integers and operators act slot by slot. The
//! quotient kills the span of
//!
//! * `abc + bca` (cyclic shift), `abc + bac` (swap of the first two slots),
//!   and `aac` (repeat in the first two slots) for cubes;
//! * `ab + ba` and `aa` for squares.
//!
//! Repeats in the other slot pairs of a cube are tested against that span and
//! then added, so the report records whether they were redundant.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::module::FdModule;
use super::sparse::{sum_mod2, SparseMap};
use crate::error::{Error, Result};

/// Largest tensor level accepted, so indices fit comfortably in `u32`.
pub const DEFAULT_TENSOR_CAP: usize = 2_000_000;

/// Implicit `p`-fold tensor power.
pub struct TensorPower<'a> {
    base: &'a FdModule,
    p: usize,
}

impl<'a> TensorPower<'a> {
    pub fn new(base: &'a FdModule, p: usize, cap: usize) -> Result<Self> {
        if !(2..=3).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "tensor power {p} not in 2..=3"
            )));
        }
        for &n in base.levels() {
            let size = (n as u128).pow(p as u32);
            if size > cap as u128 {
                return Err(Error::CellCap {
                    estimate: size,
                    cap: cap as u128,
                });
            }
        }
        Ok(Self { base, p })
    }

    pub fn level_size(&self, q: usize) -> usize {
        self.base.levels()[q].pow(self.p as u32)
    }

    fn decode(&self, q: usize, mut t: u32) -> Vec<u32> {
        let n = self.base.levels()[q] as u32;
        let mut out = vec![0; self.p];
        for slot in out.iter_mut().rev() {
            *slot = t % n;
            t /= n;
        }
        out
    }

    fn encode(&self, q: usize, parts: &[u32]) -> u32 {
        let n = self.base.levels()[q] as u32;
        parts.iter().fold(0, |acc, &x| acc * n + x)
    }

    /// Image of basis tuple `t` under the operator applied in every slot.
    fn apply(&self, map: &SparseMap, q_from: usize, q_to: usize, t: u32) -> Vec<u32> {
        let slots = self.decode(q_from, t);
        let n = self.base.levels()[q_to] as u32;
        let mut acc: Vec<u32> = vec![0];
        for &s in &slots {
            let col = map.column(s as usize);
            let mut next = Vec::with_capacity(acc.len() * col.len());
            for &a in &acc {
                for &c in col {
                    next.push(a * n + c);
                }
            }
            acc = next;
        }
        acc.sort_unstable();
        acc
    }

    fn apply_vec(&self, map: &SparseMap, q_from: usize, q_to: usize, v: &[u32]) -> Vec<u32> {
        sum_mod2(
            v.iter()
                .flat_map(|&t| self.apply(map, q_from, q_to, t))
                .collect(),
        )
    }

    pub fn face(&self, q: usize, i: usize, v: &[u32]) -> Vec<u32> {
        self.apply_vec(self.base.face(q, i), q, q - 1, v)
    }

    pub fn degeneracy(&self, q: usize, i: usize, v: &[u32]) -> Vec<u32> {
        self.apply_vec(self.base.degeneracy(q, i), q, q + 1, v)
    }

    /// Generators of the symmetric relations at level `q`, split into the
    /// primary family and the extra slot-pair repeats.
    fn generators(&self, q: usize) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let n = self.base.levels()[q] as u32;
        let mut primary = Vec::new();
        let mut extra = Vec::new();
        let pair = |x: u32, y: u32| -> Option<Vec<u32>> {
            (x != y).then(|| if x < y { vec![x, y] } else { vec![y, x] })
        };
        if self.p == 2 {
            for a in 0..n {
                primary.push(vec![self.encode(q, &[a, a])]);
                for b in a + 1..n {
                    primary.extend(pair(self.encode(q, &[a, b]), self.encode(q, &[b, a])));
                }
            }
            return (primary, extra);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = self.encode(q, &[a, b, c]);
                    primary.extend(pair(t, self.encode(q, &[b, c, a])));
                    primary.extend(pair(t, self.encode(q, &[b, a, c])));
                }
                primary.push(vec![self.encode(q, &[a, a, b])]);
                if a != b {
                    extra.push(vec![self.encode(q, &[a, b, a])]);
                    extra.push(vec![self.encode(q, &[b, a, a])]);
                }
            }
        }
        (primary, extra)
    }
}

/// Span of sparse vectors, eliminated on the largest index.
#[derive(Default)]
struct Echelon {
    rows: HashMap<u32, Vec<u32>>,
}

impl Echelon {
    /// Adds `v`; returns whether the span grew.
    fn insert(&mut self, mut v: Vec<u32>) -> bool {
        while let Some(&lead) = v.last() {
            match self.rows.get(&lead) {
                Some(r) => v = sum_mod2(v.iter().chain(r).copied().collect()),
                None => {
                    self.rows.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }

    /// Rewrites every row as its pivot plus non-pivot entries.
    fn into_tails(self) -> HashMap<u32, Vec<u32>> {
        let mut pivots: Vec<u32> = self.rows.keys().copied().collect();
        pivots.sort_unstable();
        let mut tails: HashMap<u32, Vec<u32>> = HashMap::with_capacity(pivots.len());
        for p in pivots {
            let row = &self.rows[&p];
            let mut acc = Vec::new();
            for &e in &row[..row.len() - 1] {
                match tails.get(&e) {
                    Some(t) => acc.extend_from_slice(t),
                    None => acc.push(e),
                }
            }
            tails.insert(p, sum_mod2(acc));
        }
        tails
    }
}

struct LevelQuotient {
    tails: HashMap<u32, Vec<u32>>,
    /// Tensor index of each quotient basis element.
    reps: Vec<u32>,
    /// Quotient coordinate of each non-pivot tensor index.
    coord: HashMap<u32, u32>,
}

impl LevelQuotient {
    fn normal_form(&self, v: &[u32]) -> Vec<u32> {
        let mut acc = Vec::with_capacity(v.len());
        for &e in v {
            match self.tails.get(&e) {
                Some(t) => acc.extend_from_slice(t),
                None => acc.push(e),
            }
        }
        sum_mod2(acc)
    }

    fn to_quotient(&self, v: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = self.normal_form(v).iter().map(|e| self.coord[e]).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    pub power: usize,
    pub tensor_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    pub generators: Vec<usize>,
    /// Repeats in slot pairs other than the first two that were not already in
    /// the span of the primary generators.
    pub extra_repeats_outside_span: usize,
    pub extra_repeats_checked: usize,
    /// Generator images checked to vanish in the quotient.
    pub descent_checks: usize,
    /// Generators that enlarge the span on a second pass (expected 0).
    pub residual_generators: usize,
}

pub struct SymQuotient {
    pub module: FdModule,
    /// Tensor index of each quotient basis element, per level.
    pub representatives: Vec<Vec<u32>>,
    pub report: QuotientReport,
}

fn build_level(tp: &TensorPower<'_>, q: usize) -> (LevelQuotient, usize, usize, usize) {
    let (primary, extra) = tp.generators(q);
    let mut ech = Echelon::default();
    let mut count = 0;
    for g in &primary {
        ech.insert(g.clone());
        count += 1;
    }
    let mut outside = 0;
    for g in &extra {
        if ech.insert(g.clone()) {
            outside += 1;
        }
        count += 1;
    }
    let tails = ech.into_tails();
    let size = tp.level_size(q) as u32;
    let reps: Vec<u32> = (0..size).filter(|t| !tails.contains_key(t)).collect();
    let coord = reps
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i as u32))
        .collect();
    (
        LevelQuotient { tails, reps, coord },
        count,
        outside,
        extra.len(),
    )
}

/// Quotient of the `p`-th tensor power of `base` (`p` in 2..=3) by the
/// symmetric relations, with every generator checked to map into the span.
pub fn sym_quotient(base: &FdModule, p: usize, cap: usize) -> Result<SymQuotient> {
    let tp = TensorPower::new(base, p, cap)?;
    let top = base.q_max();
    let built: Vec<(LevelQuotient, usize, usize, usize)> = (0..=top)
        .into_par_iter()
        .map(|q| build_level(&tp, q))
        .collect();
    let levels: Vec<usize> = built.iter().map(|b| b.0.reps.len()).collect();

    // Descent: generator images vanish modulo the span one level over.
    let descent: Vec<Result<usize>> = (0..=top)
        .into_par_iter()
        .map(|q| {
            let (primary, extra) = tp.generators(q);
            let mut checks = 0;
            for g in primary.iter().chain(&extra) {
                if q > 0 {
                    for i in 0..=q {
                        if !built[q - 1].0.normal_form(&tp.face(q, i, g)).is_empty() {
                            return Err(Error::Descent(format!(
                                "face {i} of a level-{q} generator leaves the span"
                            )));
                        }
                        checks += 1;
                    }
                }
                if q < top {
                    for i in 0..=q {
                        if !built[q + 1]
                            .0
                            .normal_form(&tp.degeneracy(q, i, g))
                            .is_empty()
                        {
                            return Err(Error::Descent(format!(
                                "degeneracy {i} of a level-{q} generator leaves the span"
                            )));
                        }
                        checks += 1;
                    }
                }
            }
            Ok(checks)
        })
        .collect();
    let mut descent_checks = 0;
    for d in descent {
        descent_checks += d?;
    }

    // Second pass: every generator already reduces to zero.
    let residual: usize = (0..=top)
        .into_par_iter()
        .map(|q| {
            let (primary, extra) = tp.generators(q);
            primary
                .iter()
                .chain(&extra)
                .filter(|g| !built[q].0.normal_form(g).is_empty())
                .count()
        })
        .sum();

    let mut faces = Vec::with_capacity(top + 1);
    let mut degens = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let lq = &built[q].0;
        let fs = if q == 0 {
            Vec::new()
        } else {
            (0..=q)
                .map(|i| {
                    let cols = lq
                        .reps
                        .iter()
                        .map(|&t| built[q - 1].0.to_quotient(&tp.face(q, i, &[t])))
                        .collect();
                    SparseMap::from_columns(levels[q - 1], cols)
                })
                .collect::<Result<Vec<_>>>()?
        };
        let ds = if q == top {
            Vec::new()
        } else {
            (0..=q)
                .map(|i| {
                    let cols = lq
                        .reps
                        .iter()
                        .map(|&t| built[q + 1].0.to_quotient(&tp.degeneracy(q, i, &[t])))
                        .collect();
                    SparseMap::from_columns(levels[q + 1], cols)
                })
                .collect::<Result<Vec<_>>>()?
        };
        faces.push(fs);
        degens.push(ds);
    }
    let labels = (0..=top)
        .map(|q| {
            built[q]
                .0
                .reps
                .iter()
                .map(|&t| {
                    let parts: Vec<String> = tp
                        .decode(q, t)
                        .iter()
                        .map(|&x| base.label(q, x as usize))
                        .collect();
                    format!("{{{}}}", parts.join(","))
                })
                .collect()
        })
        .collect();
    let module = FdModule::new(levels.clone(), faces, degens, Some(labels))?;
    let report = QuotientReport {
        power: p,
        tensor_dims: (0..=top).map(|q| tp.level_size(q)).collect(),
        quotient_dims: levels,
        generators: built.iter().map(|b| b.1).collect(),
        extra_repeats_outside_span: built.iter().map(|b| b.2).sum(),
        extra_repeats_checked: built.iter().map(|b| b.3).sum(),
        descent_checks,
        residual_generators: residual,
    };
    Ok(SymQuotient {
        module,
        representatives: built.into_iter().map(|b| b.0.reps).collect(),
        report,
    })
}

pub fn sym_quotient3(base: &FdModule) -> Result<SymQuotient> {
    sym_quotient(base, 3, DEFAULT_TENSOR_CAP)
}

pub fn sym_quotient2(base: &FdModule) -> Result<SymQuotient> {
    sym_quotient(base, 2, DEFAULT_TENSOR_CAP)
}
