//! Shared domain types: fuels, building descriptors, measures, outcomes and
//! rate tables.

mod fuel;
mod measure;
mod rates;
mod record;

pub use fuel::{FuelType, FuelVector, FuelVectorError, PerFuel};
pub use measure::{
    canonical_measure_order, resolve_hvac_subtype, ApplianceSet, BuildingGeometry,
    HvacResolveError, HvacSubtype, MeasureCategory, MeasureId, OutcomeRecord, PaybackResult,
};
pub use rates::{RateError, RateTable, UnitConversions, DEFAULT_RATES_TOML};
pub use record::{
    AtticType, BuildingRecord, BuildingType, ClimateZone, DryerFuel, FieldName, FieldValue,
    Foundation, HeatingFuel, HvacType, RecordError, UsState, Vintage, WallConstruction, WindowType,
};
