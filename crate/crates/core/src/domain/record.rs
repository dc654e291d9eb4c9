//! The homeowner-accessible building description.
//!
//! Every descriptor is an `Option`: `None` is the explicit Unknown marker used
//! by masking and by partial queries. Serialized records always carry all 21
//! keys, with Unknown written as `null`, so masked records keep their shape.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::fuel::FuelType;
use crate::wire::{wire_enum, UnknownName};

const STATES: &[(&str, &str)] = &[
    ("AL", "Alabama"),
    ("AK", "Alaska"),
    ("AZ", "Arizona"),
    ("AR", "Arkansas"),
    ("CA", "California"),
    ("CO", "Colorado"),
    ("CT", "Connecticut"),
    ("DE", "Delaware"),
    ("DC", "District of Columbia"),
    ("FL", "Florida"),
    ("GA", "Georgia"),
    ("HI", "Hawaii"),
    ("ID", "Idaho"),
    ("IL", "Illinois"),
    ("IN", "Indiana"),
    ("IA", "Iowa"),
    ("KS", "Kansas"),
    ("KY", "Kentucky"),
    ("LA", "Louisiana"),
    ("ME", "Maine"),
    ("MD", "Maryland"),
    ("MA", "Massachusetts"),
    ("MI", "Michigan"),
    ("MN", "Minnesota"),
    ("MS", "Mississippi"),
    ("MO", "Missouri"),
    ("MT", "Montana"),
    ("NE", "Nebraska"),
    ("NV", "Nevada"),
    ("NH", "New Hampshire"),
    ("NJ", "New Jersey"),
    ("NM", "New Mexico"),
    ("NY", "New York"),
    ("NC", "North Carolina"),
    ("ND", "North Dakota"),
    ("OH", "Ohio"),
    ("OK", "Oklahoma"),
    ("OR", "Oregon"),
    ("PA", "Pennsylvania"),
    ("RI", "Rhode Island"),
    ("SC", "South Carolina"),
    ("SD", "South Dakota"),
    ("TN", "Tennessee"),
    ("TX", "Texas"),
    ("UT", "Utah"),
    ("VT", "Vermont"),
    ("VA", "Virginia"),
    ("WA", "Washington"),
    ("WV", "West Virginia"),
    ("WI", "Wisconsin"),
    ("WY", "Wyoming"),
];

/// A U.S. state (or DC), serialized as its two-letter postal code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UsState(u8);

impl UsState {
    pub fn all() -> impl Iterator<Item = UsState> {
        (0..STATES.len() as u8).map(UsState)
    }

    pub fn code(self) -> &'static str {
        STATES[self.0 as usize].0
    }

    pub fn name(self) -> &'static str {
        STATES[self.0 as usize].1
    }

    pub fn from_code(code: &str) -> Option<UsState> {
        STATES
            .iter()
            .position(|(c, _)| c.eq_ignore_ascii_case(code))
            .map(|i| UsState(i as u8))
    }

    pub fn from_name(name: &str) -> Option<UsState> {
        STATES
            .iter()
            .position(|(_, n)| n.eq_ignore_ascii_case(name))
            .map(|i| UsState(i as u8))
    }
}

impl fmt::Display for UsState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for UsState {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UsState::from_code(s).ok_or_else(|| UnknownName {
            kind: "state",
            value: s.to_string(),
        })
    }
}

impl Serialize for UsState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for UsState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

wire_enum! {
    /// IECC climate zone.
    pub enum ClimateZone: "climate zone" {
        Z1A => "1A",
        Z2A => "2A",
        Z2B => "2B",
        Z3A => "3A",
        Z3B => "3B",
        Z3C => "3C",
        Z4A => "4A",
        Z4B => "4B",
        Z4C => "4C",
        Z5A => "5A",
        Z5B => "5B",
        Z6A => "6A",
        Z6B => "6B",
        Z7 => "7",
        Z8 => "8",
    }
}

wire_enum! {
    pub enum Vintage: "vintage" {
        Pre1940 => "pre_1940",
        D1940s => "1940s",
        D1950s => "1950s",
        D1960s => "1960s",
        D1970s => "1970s",
        D1980s => "1980s",
        D1990s => "1990s",
        D2000s => "2000s",
        D2010s => "2010s",
    }
}

wire_enum! {
    pub enum BuildingType: "building type" {
        SingleFamilyDetached => "single_family_detached",
        SingleFamilyAttached => "single_family_attached",
        MultiFamilySmall => "multifamily_2_4_units",
        MultiFamilyLarge => "multifamily_5plus_units",
        MobileHome => "mobile_home",
    }
}

wire_enum! {
    pub enum Foundation: "foundation type" {
        Slab => "slab",
        Crawlspace => "crawlspace",
        UnheatedBasement => "unheated_basement",
        HeatedBasement => "heated_basement",
        PierAndBeam => "pier_and_beam",
    }
}

wire_enum! {
    pub enum AtticType: "attic type" {
        Vented => "vented_attic",
        Unvented => "unvented_attic",
        Finished => "finished_attic",
        NoAttic => "no_attic",
    }
}

wire_enum! {
    pub enum WallConstruction: "wall construction" {
        WoodFrame => "wood_frame",
        SteelFrame => "steel_frame",
        Brick => "brick",
        Concrete => "concrete",
    }
}

wire_enum! {
    pub enum WindowType: "window type" {
        SinglePane => "single_pane",
        DoublePane => "double_pane",
        DoublePaneLowE => "double_pane_low_e",
        TriplePane => "triple_pane",
    }
}

wire_enum! {
    /// Primary HVAC system as a homeowner would describe it.
    pub enum HvacType: "hvac type" {
        HeatPump => "heat_pump",
        Furnace => "furnace",
        Baseboard => "baseboard",
        Boiler => "boiler",
        CentralAcOnly => "central_ac_only",
        SharedSystem => "shared_system",
    }
}

wire_enum! {
    /// Main heating fuel, or no heating at all.
    pub enum HeatingFuel: "heating fuel" {
        Electricity => "electricity",
        NaturalGas => "natural_gas",
        Propane => "propane",
        FuelOil => "fuel_oil",
        NoHeating => "none",
    }
}

impl HeatingFuel {
    pub fn fuel(self) -> Option<FuelType> {
        match self {
            HeatingFuel::Electricity => Some(FuelType::Electricity),
            HeatingFuel::NaturalGas => Some(FuelType::NaturalGas),
            HeatingFuel::Propane => Some(FuelType::Propane),
            HeatingFuel::FuelOil => Some(FuelType::FuelOil),
            HeatingFuel::NoHeating => None,
        }
    }
}

wire_enum! {
    pub enum DryerFuel: "dryer fuel" {
        Electricity => "electricity",
        NaturalGas => "natural_gas",
        Propane => "propane",
        NoDryer => "none",
    }
}

impl DryerFuel {
    pub fn fuel(self) -> Option<FuelType> {
        match self {
            DryerFuel::Electricity => Some(FuelType::Electricity),
            DryerFuel::NaturalGas => Some(FuelType::NaturalGas),
            DryerFuel::Propane => Some(FuelType::Propane),
            DryerFuel::NoDryer => None,
        }
    }
}

wire_enum! {
    /// The 21 descriptor names, in record order.
    pub enum FieldName: "field" {
        LocationState => "location_state",
        ClimateRegion => "climate_region",
        VintageDecade => "vintage_decade",
        BuildingType => "building_type",
        ConditionedFloorArea => "conditioned_floor_area",
        NumStories => "num_stories",
        NumBedrooms => "num_bedrooms",
        NumOccupants => "num_occupants",
        FoundationType => "foundation_type",
        AtticType => "attic_type",
        WallConstruction => "wall_construction",
        WindowType => "window_type",
        GaragePresent => "garage_present",
        HvacType => "hvac_type",
        HeatingFuel => "heating_fuel",
        CoolingPresent => "cooling_present",
        HeatingSetpoint => "heating_setpoint",
        CoolingSetpoint => "cooling_setpoint",
        WaterHeaterFuel => "water_heater_fuel",
        DryerFuel => "dryer_fuel",
        ExistingPvPresent => "existing_pv_present",
    }
}

impl FieldName {
    /// Fields that are never masked and that anchor a query.
    pub const CORE: [FieldName; 5] = [
        FieldName::LocationState,
        FieldName::ClimateRegion,
        FieldName::VintageDecade,
        FieldName::BuildingType,
        FieldName::ConditionedFloorArea,
    ];

    pub fn is_core(self) -> bool {
        FieldName::CORE.contains(&self)
    }

    pub fn is_numeric(self) -> bool {
        matches!(
            self,
            FieldName::ConditionedFloorArea
                | FieldName::NumStories
                | FieldName::NumBedrooms
                | FieldName::NumOccupants
                | FieldName::HeatingSetpoint
                | FieldName::CoolingSetpoint
        )
    }
}

/// A field value, as numeric fields and everything else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldValue {
    Number(f64),
    Label(&'static str),
}

/// The 21 homeowner-accessible descriptors of one dwelling.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingRecord {
    pub building_id: String,
    pub location_state: Option<UsState>,
    pub climate_region: Option<ClimateZone>,
    pub vintage_decade: Option<Vintage>,
    pub building_type: Option<BuildingType>,
    /// m²
    pub conditioned_floor_area: Option<f64>,
    pub num_stories: Option<u8>,
    pub num_bedrooms: Option<u8>,
    pub num_occupants: Option<u8>,
    pub foundation_type: Option<Foundation>,
    pub attic_type: Option<AtticType>,
    pub wall_construction: Option<WallConstruction>,
    pub window_type: Option<WindowType>,
    pub garage_present: Option<bool>,
    pub hvac_type: Option<HvacType>,
    pub heating_fuel: Option<HeatingFuel>,
    pub cooling_present: Option<bool>,
    /// °C
    pub heating_setpoint: Option<f64>,
    /// °C
    pub cooling_setpoint: Option<f64>,
    pub water_heater_fuel: Option<FuelType>,
    pub dryer_fuel: Option<DryerFuel>,
    pub existing_pv_present: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("conditioned floor area must be positive and finite, got {0}")]
    FloorArea(f64),
    #[error("number of stories must be at least 1")]
    Stories,
    #[error("setpoint must be finite, got {0}")]
    Setpoint(f64),
    #[error("heating setpoint {heating} must be below cooling setpoint {cooling}")]
    SetpointOrder { heating: f64, cooling: f64 },
}

impl BuildingRecord {
    /// A record with every descriptor Unknown.
    pub fn unknown(building_id: impl Into<String>) -> Self {
        BuildingRecord {
            building_id: building_id.into(),
            ..Default::default()
        }
    }

    pub fn is_known(&self, field: FieldName) -> bool {
        match field {
            FieldName::LocationState => self.location_state.is_some(),
            FieldName::ClimateRegion => self.climate_region.is_some(),
            FieldName::VintageDecade => self.vintage_decade.is_some(),
            FieldName::BuildingType => self.building_type.is_some(),
            FieldName::ConditionedFloorArea => self.conditioned_floor_area.is_some(),
            FieldName::NumStories => self.num_stories.is_some(),
            FieldName::NumBedrooms => self.num_bedrooms.is_some(),
            FieldName::NumOccupants => self.num_occupants.is_some(),
            FieldName::FoundationType => self.foundation_type.is_some(),
            FieldName::AtticType => self.attic_type.is_some(),
            FieldName::WallConstruction => self.wall_construction.is_some(),
            FieldName::WindowType => self.window_type.is_some(),
            FieldName::GaragePresent => self.garage_present.is_some(),
            FieldName::HvacType => self.hvac_type.is_some(),
            FieldName::HeatingFuel => self.heating_fuel.is_some(),
            FieldName::CoolingPresent => self.cooling_present.is_some(),
            FieldName::HeatingSetpoint => self.heating_setpoint.is_some(),
            FieldName::CoolingSetpoint => self.cooling_setpoint.is_some(),
            FieldName::WaterHeaterFuel => self.water_heater_fuel.is_some(),
            FieldName::DryerFuel => self.dryer_fuel.is_some(),
            FieldName::ExistingPvPresent => self.existing_pv_present.is_some(),
        }
    }

    /// Mark a field Unknown.
    pub fn clear(&mut self, field: FieldName) {
        match field {
            FieldName::LocationState => self.location_state = None,
            FieldName::ClimateRegion => self.climate_region = None,
            FieldName::VintageDecade => self.vintage_decade = None,
            FieldName::BuildingType => self.building_type = None,
            FieldName::ConditionedFloorArea => self.conditioned_floor_area = None,
            FieldName::NumStories => self.num_stories = None,
            FieldName::NumBedrooms => self.num_bedrooms = None,
            FieldName::NumOccupants => self.num_occupants = None,
            FieldName::FoundationType => self.foundation_type = None,
            FieldName::AtticType => self.attic_type = None,
            FieldName::WallConstruction => self.wall_construction = None,
            FieldName::WindowType => self.window_type = None,
            FieldName::GaragePresent => self.garage_present = None,
            FieldName::HvacType => self.hvac_type = None,
            FieldName::HeatingFuel => self.heating_fuel = None,
            FieldName::CoolingPresent => self.cooling_present = None,
            FieldName::HeatingSetpoint => self.heating_setpoint = None,
            FieldName::CoolingSetpoint => self.cooling_setpoint = None,
            FieldName::WaterHeaterFuel => self.water_heater_fuel = None,
            FieldName::DryerFuel => self.dryer_fuel = None,
            FieldName::ExistingPvPresent => self.existing_pv_present = None,
        }
    }

    /// The value of one field, or `None` when Unknown.
    pub fn value(&self, field: FieldName) -> Option<FieldValue> {
        use FieldValue::{Label, Number};
        let flag = |b: bool| Label(if b { "yes" } else { "no" });
        Some(match field {
            FieldName::LocationState => Label(self.location_state?.code()),
            FieldName::ClimateRegion => Label(self.climate_region?.as_str()),
            FieldName::VintageDecade => Label(self.vintage_decade?.as_str()),
            FieldName::BuildingType => Label(self.building_type?.as_str()),
            FieldName::ConditionedFloorArea => Number(self.conditioned_floor_area?),
            FieldName::NumStories => Number(self.num_stories?.into()),
            FieldName::NumBedrooms => Number(self.num_bedrooms?.into()),
            FieldName::NumOccupants => Number(self.num_occupants?.into()),
            FieldName::FoundationType => Label(self.foundation_type?.as_str()),
            FieldName::AtticType => Label(self.attic_type?.as_str()),
            FieldName::WallConstruction => Label(self.wall_construction?.as_str()),
            FieldName::WindowType => Label(self.window_type?.as_str()),
            FieldName::GaragePresent => flag(self.garage_present?),
            FieldName::HvacType => Label(self.hvac_type?.as_str()),
            FieldName::HeatingFuel => Label(self.heating_fuel?.as_str()),
            FieldName::CoolingPresent => flag(self.cooling_present?),
            FieldName::HeatingSetpoint => Number(self.heating_setpoint?),
            FieldName::CoolingSetpoint => Number(self.cooling_setpoint?),
            FieldName::WaterHeaterFuel => Label(self.water_heater_fuel?.as_str()),
            FieldName::DryerFuel => Label(self.dryer_fuel?.as_str()),
            FieldName::ExistingPvPresent => flag(self.existing_pv_present?),
        })
    }

    pub fn known_fields(&self) -> Vec<FieldName> {
        FieldName::ALL
            .iter()
            .copied()
            .filter(|&f| self.is_known(f))
            .collect()
    }

    pub fn has_core_field(&self) -> bool {
        FieldName::CORE.iter().any(|&f| self.is_known(f))
    }

    /// Fill this record's Unknown fields from `other`.
    pub fn fill_unknown_from(&mut self, other: &BuildingRecord) {
        macro_rules! fill {
            ($($f:ident),+) => { $( if self.$f.is_none() { self.$f = other.$f; } )+ };
        }
        fill!(
            location_state,
            climate_region,
            vintage_decade,
            building_type,
            conditioned_floor_area,
            num_stories,
            num_bedrooms,
            num_occupants,
            foundation_type,
            attic_type,
            wall_construction,
            window_type,
            garage_present,
            hvac_type,
            heating_fuel,
            cooling_present,
            heating_setpoint,
            cooling_setpoint,
            water_heater_fuel,
            dryer_fuel,
            existing_pv_present
        );
    }

    pub fn validate(&self) -> Result<(), RecordError> {
        if let Some(a) = self.conditioned_floor_area {
            if !(a.is_finite() && a > 0.0) {
                return Err(RecordError::FloorArea(a));
            }
        }
        if self.num_stories == Some(0) {
            return Err(RecordError::Stories);
        }
        for sp in [self.heating_setpoint, self.cooling_setpoint]
            .into_iter()
            .flatten()
        {
            if !sp.is_finite() {
                return Err(RecordError::Setpoint(sp));
            }
        }
        if let (Some(heating), Some(cooling)) = (self.heating_setpoint, self.cooling_setpoint) {
            if heating >= cooling {
                return Err(RecordError::SetpointOrder { heating, cooling });
            }
        }
        Ok(())
    }
}
