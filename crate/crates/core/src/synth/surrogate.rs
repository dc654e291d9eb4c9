//! A deliberately non-physical stand-in for whole-building simulation.
//!
//! Baseline consumption is floor-area intensity split across fuels by a
//! rough end-use breakdown. Each measure then scales each fuel by a
//! configured multiplier. The numbers exercise the pipeline arithmetic; they
//! carry no claim of energy accuracy.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SimResult, SynthError};
use crate::domain::{
    resolve_hvac_subtype, BuildingGeometry, BuildingRecord, ClimateZone, DryerFuel, FuelType,
    FuelVector, HvacType, MeasureCategory, MeasureId, PerFuel, Vintage,
};
use crate::econ::pv_capacity_w;
use crate::seed::rng_for;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateParams {
    /// Per-measure multiplier applied to each fuel's annual consumption.
    pub effects: BTreeMap<MeasureCategory, PerFuel<f64>>,
    /// Baseline site energy intensity, kWh per m² per year.
    pub base_intensity: f64,
    /// Relative amplitude of the per-building baseline perturbation.
    pub noise: f64,
    /// Relative amplitude of the per-building perturbation of each
    /// measure's savings. A multiplier of exactly 1 stays 1.
    pub effect_jitter: f64,
    /// Annual PV yield, kWh per installed kW (after inverter losses).
    pub pv_specific_yield: f64,
    pub seed: u64,
}

pub const MULTIPLIER_RANGE: (f64, f64) = (0.0, 1.5);

impl Default for SurrogateParams {
    fn default() -> Self {
        use MeasureCategory as C;
        let m = |electricity, natural_gas, propane, fuel_oil| PerFuel {
            electricity,
            natural_gas,
            propane,
            fuel_oil,
        };
        let effects = BTreeMap::from([
            (C::WallInsulation, m(0.95, 0.86, 0.86, 0.86)),
            (C::RoofCeilingInsulation, m(0.96, 0.90, 0.90, 0.90)),
            (C::WindowReplacement, m(0.93, 0.92, 0.92, 0.92)),
            (C::AirSealing, m(0.96, 0.90, 0.90, 0.90)),
            (C::HvacUpgrade, m(0.78, 0.75, 0.70, 0.70)),
            (C::PvInstallation, m(1.0, 1.0, 1.0, 1.0)),
            (C::ApplianceReplacement, m(0.93, 0.98, 0.98, 1.0)),
            (C::LightingReplacement, m(0.94, 1.0, 1.0, 1.0)),
            (C::WaterHeaterReplacement, m(0.90, 0.82, 0.82, 0.82)),
        ]);
        SurrogateParams {
            effects,
            base_intensity: 140.0,
            noise: 0.15,
            effect_jitter: 0.3,
            pv_specific_yield: 1300.0,
            seed: 0,
        }
    }
}

impl SurrogateParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        let (lo, hi) = MULTIPLIER_RANGE;
        for category in MeasureCategory::ALL {
            let Some(effect) = self.effects.get(category) else {
                return Err(SynthError::Params(format!(
                    "no effect configured for {category}"
                )));
            };
            for (fuel, m) in effect.iter() {
                if !(lo..=hi).contains(&m) {
                    return Err(SynthError::Params(format!(
                        "multiplier for {category}/{fuel} is {m}, outside [{lo}, {hi}]"
                    )));
                }
            }
        }
        if !(self.base_intensity.is_finite() && self.base_intensity >= 0.0) {
            return Err(SynthError::Params(
                "base_intensity must be non-negative".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.noise) || !(0.0..=1.0).contains(&self.effect_jitter) {
            return Err(SynthError::Params(
                "noise must be in [0, 1) and jitter in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

fn vintage_factor(v: Option<Vintage>) -> f64 {
    match v {
        Some(Vintage::Pre1940) => 1.4,
        Some(Vintage::D1940s) => 1.3,
        Some(Vintage::D1950s) => 1.25,
        Some(Vintage::D1960s) => 1.2,
        Some(Vintage::D1970s) => 1.1,
        Some(Vintage::D1980s) => 1.0,
        Some(Vintage::D1990s) => 0.95,
        Some(Vintage::D2000s) => 0.9,
        Some(Vintage::D2010s) | None => 0.8,
    }
}

/// (heating share, cooling share) of total site energy.
fn climate_shares(z: Option<ClimateZone>) -> (f64, f64) {
    use ClimateZone as Z;
    match z {
        Some(Z::Z1A) => (0.05, 0.30),
        Some(Z::Z2A | Z::Z2B) => (0.15, 0.22),
        Some(Z::Z3A | Z::Z3B | Z::Z3C) => (0.28, 0.14),
        Some(Z::Z4A | Z::Z4B | Z::Z4C) | None => (0.40, 0.08),
        Some(Z::Z5A | Z::Z5B) => (0.48, 0.06),
        Some(Z::Z6A | Z::Z6B) => (0.54, 0.04),
        Some(Z::Z7 | Z::Z8) => (0.60, 0.02),
    }
}

fn baseline(record: &BuildingRecord, params: &SurrogateParams, u: f64) -> PerFuel<f64> {
    let area = record.conditioned_floor_area.unwrap_or(0.0);
    let total = params.base_intensity
        * area
        * vintage_factor(record.vintage_decade)
        * (1.0 + params.noise * u);
    let (heat_share, cool_share) = climate_shares(record.climate_region);
    let cool_share = if record.cooling_present == Some(false) {
        0.0
    } else {
        cool_share
    };

    let mut fuels = PerFuel::splat(0.0);
    if let Some(fuel) = record.heating_fuel.and_then(|f| f.fuel()) {
        let efficiency = if record.hvac_type == Some(HvacType::HeatPump) {
            0.45
        } else {
            1.0
        };
        *fuels.get_mut(fuel) += total * heat_share * efficiency;
    }
    fuels.electricity += total * cool_share;
    let water_fuel = record.water_heater_fuel.unwrap_or(FuelType::Electricity);
    *fuels.get_mut(water_fuel) += total * 0.15;
    if let Some(f) = record.dryer_fuel.unwrap_or(DryerFuel::Electricity).fuel() {
        *fuels.get_mut(f) += total * 0.03;
    }
    // lighting, refrigeration, plug loads
    fuels.electricity += total * 0.22;
    fuels
}

fn with_pv_credit(consumption: PerFuel<f64>, generation: f64) -> FuelVector {
    let gross: f64 = consumption.iter().map(|(_, c)| c).sum();
    let mut net = consumption;
    net.electricity = (consumption.electricity - generation).max(0.0);
    FuelVector {
        consumption: net,
        net_site_energy: gross - generation,
    }
}

/// Baseline and per-measure consumption for one building.
pub fn surrogate_simulate(
    record: &BuildingRecord,
    geom: &BuildingGeometry,
    params: &SurrogateParams,
) -> Result<SimResult, SynthError> {
    let hvac = resolve_hvac_subtype(record)?;
    let mut rng = rng_for(params.seed, &record.building_id);
    let u: f64 = rng.random_range(-1.0..=1.0);
    let base = baseline(record, params, u);

    let pv_potential =
        pv_capacity_w(geom.roof_area.unwrap_or(0.0)) / 1000.0 * params.pv_specific_yield;
    // An existing array occupies part of the roof and offsets at most 40%
    // of the electric load; the measure fills the remaining roof.
    let (existing_gen, added_gen) = if record.existing_pv_present == Some(true) {
        let existing = (pv_potential * 0.5).min(base.electricity * 0.4);
        (existing, pv_potential - existing)
    } else {
        (0.0, pv_potential)
    };

    let baseline = with_pv_credit(base, existing_gen);
    let mut retrofits = BTreeMap::new();
    for measure in MeasureId::applicable(hvac) {
        let category = measure.category();
        let effect = params.effects[&category];
        let jitter: f64 = rng.random_range(-1.0..=1.0);
        let (lo, hi) = MULTIPLIER_RANGE;
        let scaled = base.map(|fuel, c| {
            let m = effect.get(fuel);
            let m = (1.0 - (1.0 - m) * (1.0 + params.effect_jitter * jitter)).clamp(lo, hi);
            c * m
        });
        let generation = if category == MeasureCategory::PvInstallation {
            existing_gen + added_gen
        } else {
            existing_gen
        };
        retrofits.insert(measure, with_pv_credit(scaled, generation));
    }
    Ok(SimResult {
        baseline,
        retrofits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gen_buildings;

    fn no_noise() -> SurrogateParams {
        SurrogateParams {
            noise: 0.0,
            effect_jitter: 0.0,
            ..SurrogateParams::default()
        }
    }

    #[test]
    fn default_params_valid() {
        SurrogateParams::default().validate().unwrap();
        let mut bad = SurrogateParams::default();
        bad.effects
            .get_mut(&MeasureCategory::AirSealing)
            .unwrap()
            .propane = 1.6;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn identity_multiplier() {
        let (mut record, geom) = gen_buildings(1, 1).remove(0);
        record.existing_pv_present = Some(false);
        let mut params = SurrogateParams::default();
        params
            .effects
            .insert(MeasureCategory::WallInsulation, PerFuel::splat(1.0));
        let sim = surrogate_simulate(&record, &geom, &params).unwrap();
        assert_eq!(sim.retrofits[&MeasureId::WallInsulation], sim.baseline);
    }

    #[test]
    fn half_electricity() {
        let (mut record, geom) = gen_buildings(1, 2).remove(0);
        record.existing_pv_present = Some(false);
        let mut params = no_noise();
        params.effects.insert(
            MeasureCategory::LightingReplacement,
            PerFuel {
                electricity: 0.5,
                ..PerFuel::splat(1.0)
            },
        );
        let sim = surrogate_simulate(&record, &geom, &params).unwrap();
        let r = sim.retrofits[&MeasureId::LightingReplacement];
        assert!(
            (r.consumption.electricity - sim.baseline.consumption.electricity * 0.5).abs() < 1e-9
        );
        for fuel in [FuelType::NaturalGas, FuelType::Propane, FuelType::FuelOil] {
            assert_eq!(r.consumption.get(fuel), sim.baseline.consumption.get(fuel));
        }
    }

    #[test]
    fn pv_lowers_net_site_energy() {
        let (record, geom) = gen_buildings(1, 5).remove(0);
        let sim = surrogate_simulate(&record, &geom, &SurrogateParams::default()).unwrap();
        let pv = sim.retrofits[&MeasureId::PvInstallation];
        assert!(pv.net_site_energy < sim.baseline.net_site_energy);
        pv.validate().unwrap();
    }

    #[test]
    fn unresolvable_hvac() {
        let (mut record, geom) = gen_buildings(1, 5).remove(0);
        record.hvac_type = None;
        assert!(matches!(
            surrogate_simulate(&record, &geom, &SurrogateParams::default()),
            Err(SynthError::Hvac(_))
        ));
    }

    #[test]
    fn outputs_are_valid_fuel_vectors_across_seeds() {
        let buildings = gen_buildings(3, 11);
        for seed in 0..10_000u64 {
            let params = SurrogateParams {
                seed,
                ..SurrogateParams::default()
            };
            for (record, geom) in &buildings {
                let sim = surrogate_simulate(record, geom, &params).unwrap();
                sim.baseline.validate().unwrap();
                assert_eq!(sim.retrofits.len(), 9);
                for v in sim.retrofits.values() {
                    v.validate().unwrap();
                }
            }
        }
    }
}
