use serde::Serialize;

use super::complex::homology_through_degree;
use super::models::{pointed, wedge_model};
use super::quotient::{sym_quotient, QuotientReport, DEFAULT_TENSOR_CAP};
use crate::cells::BouquetSpec;
use crate::chain::BettiVector;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoldRoute {
    pub power: usize,
    pub spec: BouquetSpec,
    pub q_max: usize,
    /// Reduced homology of the symmetric power, degrees `0..=power * m`.
    pub betti: BettiVector,
    pub total: usize,
    pub unreliable_from: usize,
    pub quotient: QuotientReport,
}

/// Homology of the reduced symmetric `power`-th power of a bouquet through the
/// symmetric quotient of the tensor power of its pointed model.
///
/// The truncation is `power * m + 2`: one guard level above the top degree.
pub fn dold_rd_power(spec: &BouquetSpec, power: usize) -> Result<DoldRoute> {
    dold_rd_power_capped(spec, power, DEFAULT_TENSOR_CAP)
}

pub fn dold_rd_power_capped(spec: &BouquetSpec, power: usize, cap: usize) -> Result<DoldRoute> {
    let top = power * spec.m;
    let q_max = top + 2;
    let base = pointed(&wedge_model(spec, q_max)?)?;
    let quotient = sym_quotient(&base, power, cap)?;
    let h = homology_through_degree(&quotient.module, top)?;
    Ok(DoldRoute {
        power,
        spec: spec.clone(),
        q_max,
        total: h.betti.sum(),
        betti: h.betti,
        unreliable_from: h.unreliable_from,
        quotient: quotient.report,
    })
}
