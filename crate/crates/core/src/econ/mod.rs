//! Emissions, energy cost, retrofit cost, and discounted payback.

mod catalog;
mod payback;

pub use catalog::{
    catalog, measure_cost, measure_cost_with, pv_capacity_w, pv_sizing_and_cost, pv_unit_cost,
    round_half_up, spec_for, unit_count, AppliancePrices, AreaBasis, CostRule, MeasureSpec,
    ParameterModification, UnitBasis, UnitRule, APPLIANCE_PRICES, PV_ACTIVE_AREA_FRACTION,
    PV_CELL_EFFICIENCY, PV_INVERTER_EFFICIENCY, PV_TIER_HIGH_W, PV_TIER_LOW_W,
};
pub use payback::{discounted_payback, DEFAULT_HORIZON_YEARS};

use thiserror::Error;

use crate::domain::{
    ApplianceSet, BuildingGeometry, FuelVector, MeasureId, OutcomeRecord, PerFuel, RateTable,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EconError {
    #[error("geometry field {0} is required but absent")]
    MissingGeometry(&'static str),
    #[error("geometry field {0} must be finite and non-negative, got {1}")]
    InvalidGeometry(&'static str, f64),
}

fn weighted_sum(fuels: &FuelVector, weights: &PerFuel<f64>) -> f64 {
    fuels
        .consumption
        .iter()
        .map(|(fuel, c)| c * weights.get(fuel))
        .sum()
}

/// Annual emissions, kg CO₂.
pub fn annual_emissions(fuels: &FuelVector, rates: &RateTable) -> f64 {
    weighted_sum(fuels, &rates.emission_factors)
}

/// Annual energy cost, USD.
pub fn annual_energy_cost(fuels: &FuelVector, rates: &RateTable) -> f64 {
    weighted_sum(fuels, &rates.utility_rates)
}

/// What a building's retrofit cost depends on besides the measure.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBasis {
    pub geometry: BuildingGeometry,
    pub appliances: ApplianceSet,
}

/// Compare baseline and post-retrofit consumption for one measure.
pub fn compute_outcome(
    building_id: &str,
    baseline: &FuelVector,
    retrofitted: &FuelVector,
    measure: MeasureId,
    basis: &CostBasis,
    rates: &RateTable,
) -> Result<OutcomeRecord, EconError> {
    let retrofit_cost = measure_cost_with(measure, &basis.geometry, basis.appliances)?;
    Ok(outcome_with_cost(
        building_id,
        baseline,
        retrofitted,
        measure,
        retrofit_cost,
        rates,
    ))
}

/// As [`compute_outcome`], with the retrofit cost already known.
pub fn outcome_with_cost(
    building_id: &str,
    baseline: &FuelVector,
    retrofitted: &FuelVector,
    measure: MeasureId,
    retrofit_cost: f64,
    rates: &RateTable,
) -> OutcomeRecord {
    let energy_cost_saving =
        annual_energy_cost(baseline, rates) - annual_energy_cost(retrofitted, rates);
    OutcomeRecord {
        building_id: building_id.to_string(),
        measure,
        co2_reduction: annual_emissions(baseline, rates) - annual_emissions(retrofitted, rates),
        net_site_energy_reduction: baseline.net_site_energy - retrofitted.net_site_energy,
        energy_cost_saving,
        retrofit_cost,
        dpy: discounted_payback(
            retrofit_cost,
            energy_cost_saving,
            rates.discount_rate,
            DEFAULT_HORIZON_YEARS,
        ),
    }
}
