//! Closed-form lower bounds on the number of period-2 and period-3 billiard
//! trajectories, and the two duality identities behind them.

use serde::Serialize;

use crate::cells::{rd2_bouquet_assembly, rd3_bouquet_assembly, BouquetSpec};
use crate::chain::BettiVector;
use crate::error::{Error, Result};

fn check_args(b: u64, m: u64) -> Result<()> {
    if b == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "betti sum and dimension must be positive (B = {b}, m = {m})"
        )));
    }
    Ok(())
}

fn exact(num: u128, den: u128) -> Result<u64> {
    if num % den != 0 {
        return Err(Error::NonIntegral(format!("{num} / {den}")));
    }
    u64::try_from(num / den).map_err(|_| Error::InvalidArgument("bound overflows u64".into()))
}

/// `(B^2 + (m - 1)B) / 2`, integral on the same domain as the cube bound.
pub fn bt2_lower_bound(b: u64, m: u64) -> Result<u64> {
    check_args(b, m)?;
    let (b, m) = (b as u128, m as u128);
    exact(b * b + (m - 1) * b, 2)
}

/// `(B^3 + 3(m - 1)B^2 + 2B) / 6`.
///
/// The division is exact when `B` or `m` is even, which holds for every
/// closed manifold (odd `m` forces Euler characteristic 0, so `B` is even).
/// Other inputs are rejected as non-integral.
pub fn bt3_lower_bound(b: u64, m: u64) -> Result<u64> {
    check_args(b, m)?;
    let (b, m) = (b as u128, m as u128);
    exact(b * b * b + 3 * (m - 1) * b * b + 2 * b, 6)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Identity {
    pub lhs: i128,
    pub rhs: i128,
    pub equal: bool,
}

impl Identity {
    fn new(lhs: i128, rhs: i128) -> Self {
        Self {
            lhs,
            rhs,
            equal: lhs == rhs,
        }
    }
}

/// `sum_i i k_i` against `mB / 2`.
pub fn duality_weighted_sum(k: &BettiVector) -> Result<Identity> {
    k.validate_manifold()?;
    let m = k.top_degree() as i128;
    let b = k.sum() as i128;
    let lhs = (1..k.values.len())
        .map(|i| i as i128 * k.values[i] as i128)
        .sum();
    if (m * b) % 2 != 0 {
        return Err(Error::NonIntegral(format!("mB / 2 with mB = {}", m * b)));
    }
    Ok(Identity::new(lhs, m * b / 2))
}

/// `sum_i i k_i^2 + sum_{i != j} i k_i k_j` against `(mB^2 - mB) / 2`, indices
/// running over `1..=m`.
pub fn duality_weighted_sum3(k: &BettiVector) -> Result<Identity> {
    k.validate_manifold()?;
    let m = k.top_degree() as i128;
    let b = k.sum() as i128;
    let kv: Vec<i128> = k.values.iter().map(|&v| v as i128).collect();
    let mut lhs = 0;
    for i in 1..kv.len() {
        lhs += i as i128 * kv[i] * kv[i];
        for j in 1..kv.len() {
            if i != j {
                lhs += i as i128 * kv[i] * kv[j];
            }
        }
    }
    let num = m * b * b - m * b;
    if num % 2 != 0 {
        return Err(Error::NonIntegral(format!(
            "(mB^2 - mB) / 2 with numerator {num}"
        )));
    }
    Ok(Identity::new(lhs, num / 2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(rename = "B")]
    pub b: u64,
    pub m: u64,
    pub bt2: u64,
    pub bt3: u64,
    pub betti: Option<BettiVector>,
    pub weighted_sum: Option<Identity>,
    pub weighted_sum3: Option<Identity>,
    /// Routes whose value agreed with the closed forms.
    pub provenance: Vec<String>,
}

impl BoundReport {
    pub fn from_sum(b: u64, m: u64) -> Result<Self> {
        Ok(Self {
            b,
            m,
            bt2: bt2_lower_bound(b, m)?,
            bt3: bt3_lower_bound(b, m)?,
            betti: None,
            weighted_sum: None,
            weighted_sum3: None,
            provenance: vec!["closed formula".into()],
        })
    }

    /// Bounds from a manifold-mode Betti vector, confirmed through both
    /// bouquet assemblies.
    pub fn from_betti(betti: &BettiVector) -> Result<Self> {
        let spec = BouquetSpec::from_betti(betti)?;
        let mut r = Self::from_sum(betti.sum() as u64, betti.top_degree() as u64)?;
        r.weighted_sum = Some(duality_weighted_sum(betti)?);
        r.weighted_sum3 = Some(duality_weighted_sum3(betti)?);
        if rd2_bouquet_assembly(&spec)?.total as u64 == r.bt2 {
            r.provenance.push("square assembly".into());
        }
        if rd3_bouquet_assembly(&spec)?.total as u64 == r.bt3 {
            r.provenance.push("cube assembly".into());
        }
        r.betti = Some(betti.clone());
        Ok(r)
    }

    pub fn lemmas_hold(&self) -> bool {
        [self.weighted_sum, self.weighted_sum3]
            .iter()
            .all(|x| x.is_none_or(|i| i.equal))
    }
}
