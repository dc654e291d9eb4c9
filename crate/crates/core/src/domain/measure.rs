use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::record::{BuildingRecord, DryerFuel, HeatingFuel, HvacType};
use crate::wire::{wire_enum, UnknownName};

wire_enum! {
    /// The nine retrofit categories, declared in catalog row order.
    pub enum MeasureCategory: "measure" {
        WallInsulation => "wall_insulation",
        RoofCeilingInsulation => "roof_ceiling_insulation",
        WindowReplacement => "window_replacement",
        AirSealing => "air_sealing",
        HvacUpgrade => "hvac_upgrade",
        PvInstallation => "pv_installation",
        ApplianceReplacement => "appliance_replacement",
        LightingReplacement => "lighting_replacement",
        WaterHeaterReplacement => "water_heater_replacement",
    }
}

impl MeasureCategory {
    /// Position in catalog order, used as the final tie-breaker in rankings.
    pub fn canonical_index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            MeasureCategory::WallInsulation => "Wall insulation",
            MeasureCategory::RoofCeilingInsulation => "Roof & ceiling insulation",
            MeasureCategory::WindowReplacement => "Window replacement",
            MeasureCategory::AirSealing => "Air sealing",
            MeasureCategory::HvacUpgrade => "HVAC upgrade",
            MeasureCategory::PvInstallation => "Photovoltaic (PV) installation",
            MeasureCategory::ApplianceReplacement => "Appliance replacement",
            MeasureCategory::LightingReplacement => "Lighting replacement",
            MeasureCategory::WaterHeaterReplacement => "Water-heater replacement",
        }
    }
}

/// The nine categories in catalog row order.
pub fn canonical_measure_order() -> [MeasureCategory; 9] {
    [
        MeasureCategory::WallInsulation,
        MeasureCategory::RoofCeilingInsulation,
        MeasureCategory::WindowReplacement,
        MeasureCategory::AirSealing,
        MeasureCategory::HvacUpgrade,
        MeasureCategory::PvInstallation,
        MeasureCategory::ApplianceReplacement,
        MeasureCategory::LightingReplacement,
        MeasureCategory::WaterHeaterReplacement,
    ]
}

wire_enum! {
    pub enum HvacSubtype: "hvac subtype" {
        DxCoolingPlusDxHeating => "dx_cooling_dx_heating",
        DxCoolingOnly => "dx_cooling_only",
        ElectricFurnaceBaseboard => "electric_furnace_baseboard",
        NaturalGasFurnace => "natural_gas_furnace",
        FuelFurnace => "fuel_furnace",
        HotWaterBoiler => "hot_water_boiler",
        SharedCooling => "shared_cooling",
    }
}

/// A retrofit measure. HVAC upgrades carry the subtype resolved for the
/// building, so the wire name is `hvac_upgrade:<subtype>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureId {
    WallInsulation,
    RoofCeilingInsulation,
    WindowReplacement,
    AirSealing,
    HvacUpgrade(HvacSubtype),
    PvInstallation,
    ApplianceReplacement,
    LightingReplacement,
    WaterHeaterReplacement,
}

impl MeasureId {
    pub fn category(self) -> MeasureCategory {
        match self {
            MeasureId::WallInsulation => MeasureCategory::WallInsulation,
            MeasureId::RoofCeilingInsulation => MeasureCategory::RoofCeilingInsulation,
            MeasureId::WindowReplacement => MeasureCategory::WindowReplacement,
            MeasureId::AirSealing => MeasureCategory::AirSealing,
            MeasureId::HvacUpgrade(_) => MeasureCategory::HvacUpgrade,
            MeasureId::PvInstallation => MeasureCategory::PvInstallation,
            MeasureId::ApplianceReplacement => MeasureCategory::ApplianceReplacement,
            MeasureId::LightingReplacement => MeasureCategory::LightingReplacement,
            MeasureId::WaterHeaterReplacement => MeasureCategory::WaterHeaterReplacement,
        }
    }

    /// The measure for a non-HVAC category; `None` for `HvacUpgrade`, which
    /// needs a subtype.
    pub fn from_category(category: MeasureCategory) -> Option<MeasureId> {
        Some(match category {
            MeasureCategory::WallInsulation => MeasureId::WallInsulation,
            MeasureCategory::RoofCeilingInsulation => MeasureId::RoofCeilingInsulation,
            MeasureCategory::WindowReplacement => MeasureId::WindowReplacement,
            MeasureCategory::AirSealing => MeasureId::AirSealing,
            MeasureCategory::HvacUpgrade => return None,
            MeasureCategory::PvInstallation => MeasureId::PvInstallation,
            MeasureCategory::ApplianceReplacement => MeasureId::ApplianceReplacement,
            MeasureCategory::LightingReplacement => MeasureId::LightingReplacement,
            MeasureCategory::WaterHeaterReplacement => MeasureId::WaterHeaterReplacement,
        })
    }

    pub fn hvac_subtype(self) -> Option<HvacSubtype> {
        match self {
            MeasureId::HvacUpgrade(s) => Some(s),
            _ => None,
        }
    }

    pub fn canonical_index(self) -> usize {
        self.category().canonical_index()
    }

    /// Every measure a building can receive, in catalog order.
    pub fn applicable(hvac: HvacSubtype) -> [MeasureId; 9] {
        canonical_measure_order()
            .map(|c| MeasureId::from_category(c).unwrap_or(MeasureId::HvacUpgrade(hvac)))
    }
}

impl PartialOrd for MeasureId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeasureId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.category(), self.hvac_subtype()).cmp(&(other.category(), other.hvac_subtype()))
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureId::HvacUpgrade(s) => write!(f, "hvac_upgrade:{s}"),
            other => f.write_str(other.category().as_str()),
        }
    }
}

impl FromStr for MeasureId {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || UnknownName {
            kind: "measure",
            value: s.to_string(),
        };
        if let Some(sub) = s.strip_prefix("hvac_upgrade:") {
            return sub
                .parse()
                .map(MeasureId::HvacUpgrade)
                .map_err(|_| unknown());
        }
        let category: MeasureCategory = s.parse().map_err(|_| unknown())?;
        MeasureId::from_category(category).ok_or_else(unknown)
    }
}

impl Serialize for MeasureId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasureId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HvacResolveError {
    #[error("cannot resolve HVAC subtype: hvac_type is unknown")]
    UnknownHvacType,
    #[error("cannot resolve HVAC subtype for {0}: heating_fuel is unknown")]
    UnknownHeatingFuel(HvacType),
}

/// Map the described HVAC system and heating fuel onto a catalog HVAC row.
///
/// | hvac_type        | heating fuel                  | subtype                     |
/// |------------------|-------------------------------|-----------------------------|
/// | heat pump        | any                           | DX cooling + DX heating     |
/// | furnace          | electricity                   | electric furnace/baseboard  |
/// | furnace          | natural gas                   | natural gas furnace         |
/// | furnace          | propane, fuel oil             | fuel furnace                |
/// | furnace          | none                          | DX cooling only             |
/// | baseboard        | electricity                   | electric furnace/baseboard  |
/// | baseboard        | natural gas, propane, oil     | hot-water boiler            |
/// | baseboard        | none                          | DX cooling only             |
/// | boiler           | any                           | hot-water boiler            |
/// | central AC only  | any                           | DX cooling only             |
/// | shared system    | electricity, none             | shared cooling              |
/// | shared system    | natural gas, propane, oil     | hot-water boiler            |
///
/// Heat pumps, boilers and AC-only systems resolve without knowing the fuel.
pub fn resolve_hvac_subtype(record: &BuildingRecord) -> Result<HvacSubtype, HvacResolveError> {
    let hvac = record.hvac_type.ok_or(HvacResolveError::UnknownHvacType)?;
    match hvac {
        HvacType::HeatPump => return Ok(HvacSubtype::DxCoolingPlusDxHeating),
        HvacType::Boiler => return Ok(HvacSubtype::HotWaterBoiler),
        HvacType::CentralAcOnly => return Ok(HvacSubtype::DxCoolingOnly),
        _ => {}
    }
    let fuel = record
        .heating_fuel
        .ok_or(HvacResolveError::UnknownHeatingFuel(hvac))?;
    Ok(resolve_known(hvac, fuel))
}

fn resolve_known(hvac: HvacType, fuel: HeatingFuel) -> HvacSubtype {
    use HeatingFuel as F;
    use HvacSubtype as S;
    match (hvac, fuel) {
        (HvacType::HeatPump, _) => S::DxCoolingPlusDxHeating,
        (HvacType::Boiler, _) => S::HotWaterBoiler,
        (HvacType::CentralAcOnly, _) => S::DxCoolingOnly,
        (HvacType::Furnace, F::Electricity) => S::ElectricFurnaceBaseboard,
        (HvacType::Furnace, F::NaturalGas) => S::NaturalGasFurnace,
        (HvacType::Furnace, F::Propane | F::FuelOil) => S::FuelFurnace,
        (HvacType::Furnace, F::NoHeating) => S::DxCoolingOnly,
        (HvacType::Baseboard, F::Electricity) => S::ElectricFurnaceBaseboard,
        (HvacType::Baseboard, F::NaturalGas | F::Propane | F::FuelOil) => S::HotWaterBoiler,
        (HvacType::Baseboard, F::NoHeating) => S::DxCoolingOnly,
        (HvacType::SharedSystem, F::Electricity | F::NoHeating) => S::SharedCooling,
        (HvacType::SharedSystem, F::NaturalGas | F::Propane | F::FuelOil) => S::HotWaterBoiler,
    }
}

/// The geometric and capacity quantities the catalog cost rules consume.
/// Areas in m², capacities in kW. A `None` field is absent data.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BuildingGeometry {
    pub exterior_wall_area: Option<f64>,
    pub roof_area: Option<f64>,
    pub total_window_area: Option<f64>,
    pub conditioned_floor_area: Option<f64>,
    pub cooling_capacity: Option<f64>,
    pub heating_capacity: Option<f64>,
}

impl BuildingGeometry {
    pub fn complete(
        exterior_wall_area: f64,
        roof_area: f64,
        total_window_area: f64,
        conditioned_floor_area: f64,
        cooling_capacity: f64,
        heating_capacity: f64,
    ) -> Self {
        BuildingGeometry {
            exterior_wall_area: Some(exterior_wall_area),
            roof_area: Some(roof_area),
            total_window_area: Some(total_window_area),
            conditioned_floor_area: Some(conditioned_floor_area),
            cooling_capacity: Some(cooling_capacity),
            heating_capacity: Some(heating_capacity),
        }
    }
}

/// Which appliances the appliance-replacement measure replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplianceSet {
    pub refrigerator: bool,
    pub washer: bool,
    pub dishwasher: bool,
    pub dryer: bool,
}

impl ApplianceSet {
    pub const ALL: ApplianceSet = ApplianceSet {
        refrigerator: true,
        washer: true,
        dishwasher: true,
        dryer: true,
    };

    /// The record carries only a dryer flag (via `dryer_fuel`); the other
    /// three appliances are assumed present.
    pub fn from_record(record: &BuildingRecord) -> Self {
        ApplianceSet {
            dryer: record.dryer_fuel != Some(DryerFuel::NoDryer),
            ..ApplianceSet::ALL
        }
    }
}

impl Default for ApplianceSet {
    fn default() -> Self {
        ApplianceSet::ALL
    }
}

/// Discounted payback in whole years, or no payback within the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PaybackResult {
    Finite(u32),
    NoPayback,
}

impl PaybackResult {
    pub fn years(self) -> Option<u32> {
        match self {
            PaybackResult::Finite(n) => Some(n),
            PaybackResult::NoPayback => None,
        }
    }
}

impl fmt::Display for PaybackResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaybackResult::Finite(n) => write!(f, "{n}"),
            PaybackResult::NoPayback => f.write_str("no payback"),
        }
    }
}

// Wire form: integer years, or null for no payback.
impl Serialize for PaybackResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.years().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PaybackResult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Option::<u32>::deserialize(d)? {
            Some(0) => Err(serde::de::Error::custom("payback years must be at least 1")),
            Some(n) => Ok(PaybackResult::Finite(n)),
            None => Ok(PaybackResult::NoPayback),
        }
    }
}

/// Per-(building, measure) outcome. Reductions are baseline minus
/// retrofitted and keep their sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub building_id: String,
    pub measure: MeasureId,
    /// kg CO₂ per year
    pub co2_reduction: f64,
    /// kWh per year
    pub net_site_energy_reduction: f64,
    /// USD per year
    pub energy_cost_saving: f64,
    /// USD
    pub retrofit_cost: f64,
    pub dpy: PaybackResult,
}
