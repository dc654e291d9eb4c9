//! Fourteen English templates for the user turn.
//!
//! Templates differ in voice, field order and sentence grouping. Each known
//! field is rendered exactly once; Unknown fields are left out.

use crate::domain::{
    AtticType, BuildingRecord, BuildingType, DryerFuel, FieldName, Foundation, FuelType, HvacType,
    Vintage, WallConstruction, WindowType,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Voice {
    /// "The house was built in the 1970s, has ..."
    Narrative,
    /// "My home was constructed in the 1970s, offers ..."
    Owner,
    /// "Home details: vintage: 1970s; ..."
    Listing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOrder {
    Record,
    Reversed,
    SystemsFirst,
    EnvelopeFirst,
    Interleaved,
}

#[derive(Debug, Clone, Copy)]
pub struct Template {
    pub id: u8,
    pub voice: Voice,
    pub order: FieldOrder,
    /// Fields per sentence, counted over the full ordered field list.
    pub groups: &'static [usize],
    pub subject: &'static str,
    pub continuation: &'static str,
    pub intro: &'static str,
    pub outro: &'static str,
    pub weight: f64,
}

const W: f64 = 1.0 / 14.0;

#[rustfmt::skip]
pub const TEMPLATES: [Template; 14] = [
    Template { id: 1, voice: Voice::Narrative, order: FieldOrder::Record, groups: &[7, 7, 7], subject: "The house", continuation: "It", intro: "", outro: "Which retrofit measures would you recommend?", weight: W },
    Template { id: 2, voice: Voice::Owner, order: FieldOrder::Record, groups: &[5, 8, 8], subject: "My home", continuation: "It", intro: "I am looking for energy upgrades.", outro: "What should I do first?", weight: W },
    Template { id: 3, voice: Voice::Listing, order: FieldOrder::Record, groups: &[21], subject: "Home details:", continuation: "", intro: "", outro: "Recommend retrofit options.", weight: W },
    Template { id: 4, voice: Voice::Narrative, order: FieldOrder::Reversed, groups: &[4, 6, 6, 5], subject: "This home", continuation: "It", intro: "Here is a description of a dwelling.", outro: "Rank the best retrofits for it.", weight: W },
    Template { id: 5, voice: Voice::Owner, order: FieldOrder::SystemsFirst, groups: &[6, 5, 5, 5], subject: "Our house", continuation: "It", intro: "", outro: "Which upgrades pay off best?", weight: W },
    Template { id: 6, voice: Voice::Listing, order: FieldOrder::EnvelopeFirst, groups: &[21], subject: "Building profile:", continuation: "", intro: "Please evaluate this property.", outro: "", weight: W },
    Template { id: 7, voice: Voice::Narrative, order: FieldOrder::Interleaved, groups: &[3, 5, 5, 4, 4], subject: "The dwelling", continuation: "It also", intro: "", outro: "Suggest the top retrofit measures.", weight: W },
    Template { id: 8, voice: Voice::Owner, order: FieldOrder::Reversed, groups: &[21], subject: "My place", continuation: "", intro: "Hello.", outro: "What retrofits make sense here?", weight: W },
    Template { id: 9, voice: Voice::Listing, order: FieldOrder::Reversed, groups: &[21], subject: "Property facts:", continuation: "", intro: "", outro: "Which measures should be prioritized?", weight: W },
    Template { id: 10, voice: Voice::Narrative, order: FieldOrder::SystemsFirst, groups: &[21], subject: "The building", continuation: "", intro: "Consider the following residence.", outro: "", weight: W },
    Template { id: 11, voice: Voice::Owner, order: FieldOrder::EnvelopeFirst, groups: &[7, 7, 7], subject: "Our home", continuation: "It", intro: "", outro: "How should we upgrade it?", weight: W },
    Template { id: 12, voice: Voice::Listing, order: FieldOrder::Interleaved, groups: &[21], subject: "Dwelling summary:", continuation: "", intro: "", outro: "List the recommended retrofits.", weight: W },
    Template { id: 13, voice: Voice::Narrative, order: FieldOrder::EnvelopeFirst, groups: &[5, 8, 8], subject: "The residence", continuation: "It", intro: "", outro: "Which retrofit options are best?", weight: W },
    Template { id: 14, voice: Voice::Owner, order: FieldOrder::Interleaved, groups: &[4, 6, 6, 5], subject: "My house", continuation: "It", intro: "I want to renovate.", outro: "Where should I start?", weight: W },
];

pub fn template(id: u8) -> Option<&'static Template> {
    TEMPLATES.iter().find(|t| t.id == id)
}

const SYSTEMS: [FieldName; 8] = [
    FieldName::HvacType,
    FieldName::HeatingFuel,
    FieldName::CoolingPresent,
    FieldName::HeatingSetpoint,
    FieldName::CoolingSetpoint,
    FieldName::WaterHeaterFuel,
    FieldName::DryerFuel,
    FieldName::ExistingPvPresent,
];

const ENVELOPE: [FieldName; 5] = [
    FieldName::FoundationType,
    FieldName::AtticType,
    FieldName::WallConstruction,
    FieldName::WindowType,
    FieldName::GaragePresent,
];

fn ordered_fields(order: FieldOrder) -> Vec<FieldName> {
    let all = FieldName::ALL.to_vec();
    match order {
        FieldOrder::Record => all,
        FieldOrder::Reversed => all.into_iter().rev().collect(),
        FieldOrder::SystemsFirst | FieldOrder::EnvelopeFirst => {
            let first: &[FieldName] = if order == FieldOrder::SystemsFirst {
                &SYSTEMS
            } else {
                &ENVELOPE
            };
            first
                .iter()
                .copied()
                .chain(all.into_iter().filter(|f| !first.contains(f)))
                .collect()
        }
        FieldOrder::Interleaved => {
            let (even, odd): (Vec<_>, Vec<_>) =
                all.into_iter().enumerate().partition(|(i, _)| i % 2 == 0);
            even.into_iter().chain(odd).map(|(_, f)| f).collect()
        }
    }
}

fn number_word(n: u8) -> String {
    const WORDS: [&str; 10] = [
        "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    ];
    match n {
        1..=10 => WORDS[n as usize - 1].to_string(),
        _ => n.to_string(),
    }
}

fn plural(n: u8, one: &str, many: &str) -> String {
    if n == 1 {
        one.to_string()
    } else {
        many.to_string()
    }
}

fn fuel_name(f: FuelType) -> &'static str {
    f.label()
}

fn fuel_adjective(f: FuelType) -> &'static str {
    match f {
        FuelType::Electricity => "an electric",
        FuelType::NaturalGas => "a natural gas",
        FuelType::Propane => "a propane",
        FuelType::FuelOil => "a fuel oil",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn vintage_decade(v: Vintage) -> Option<&'static str> {
    match v {
        Vintage::Pre1940 => None,
        Vintage::D1940s => Some("1940s"),
        Vintage::D1950s => Some("1950s"),
        Vintage::D1960s => Some("1960s"),
        Vintage::D1970s => Some("1970s"),
        Vintage::D1980s => Some("1980s"),
        Vintage::D1990s => Some("1990s"),
        Vintage::D2000s => Some("2000s"),
        Vintage::D2010s => Some("2010s"),
    }
}

fn building_type_phrase(t: BuildingType) -> &'static str {
    match t {
        BuildingType::SingleFamilyDetached => "single-family detached house",
        BuildingType::SingleFamilyAttached => "single-family attached house",
        BuildingType::MultiFamilySmall => "unit in a 2-4 unit building",
        BuildingType::MultiFamilyLarge => "unit in a building with 5 or more units",
        BuildingType::MobileHome => "mobile home",
    }
}

fn foundation_phrase(f: Foundation) -> (&'static str, &'static str) {
    // (with article, short form)
    match f {
        Foundation::Slab => ("a slab foundation", "slab"),
        Foundation::Crawlspace => ("a crawlspace foundation", "crawlspace"),
        Foundation::UnheatedBasement => ("an unheated basement", "unheated basement"),
        Foundation::HeatedBasement => ("a heated basement", "heated basement"),
        Foundation::PierAndBeam => ("a pier-and-beam foundation", "pier-and-beam"),
    }
}

fn attic_phrase(a: AtticType) -> (&'static str, &'static str) {
    match a {
        AtticType::Vented => ("a vented attic", "vented"),
        AtticType::Unvented => ("an unvented attic", "unvented"),
        AtticType::Finished => ("a finished attic", "finished"),
        AtticType::NoAttic => ("no attic", "none"),
    }
}

fn wall_phrase(w: WallConstruction) -> &'static str {
    match w {
        WallConstruction::WoodFrame => "wood-frame",
        WallConstruction::SteelFrame => "steel-frame",
        WallConstruction::Brick => "brick",
        WallConstruction::Concrete => "concrete",
    }
}

fn window_phrase(w: WindowType) -> &'static str {
    match w {
        WindowType::SinglePane => "single-pane",
        WindowType::DoublePane => "double-pane",
        WindowType::DoublePaneLowE => "double-pane low-e",
        WindowType::TriplePane => "triple-pane",
    }
}

fn hvac_phrase(h: HvacType) -> (&'static str, &'static str) {
    match h {
        HvacType::HeatPump => ("a heat pump", "heat pump"),
        HvacType::Furnace => ("a furnace", "furnace"),
        HvacType::Baseboard => ("baseboard heaters", "baseboard heaters"),
        HvacType::Boiler => ("a boiler", "boiler"),
        HvacType::CentralAcOnly => (
            "central air conditioning only",
            "central air conditioning only",
        ),
        HvacType::SharedSystem => ("a shared building system", "shared building system"),
    }
}

/// The clause for one field, or `None` when the field is Unknown.
pub fn clause(record: &BuildingRecord, field: FieldName, voice: Voice) -> Option<String> {
    use Voice::*;
    let r = record;
    let s = match field {
        FieldName::LocationState => {
            let name = r.location_state?.name();
            match voice {
                Narrative => format!("is located in {name}"),
                Owner => format!("is in {name}"),
                Listing => format!("state: {name}"),
            }
        }
        FieldName::ClimateRegion => {
            let z = r.climate_region?;
            match voice {
                Narrative => format!("is in climate zone {z}"),
                Owner => format!("falls in IECC climate zone {z}"),
                Listing => format!("climate zone: {z}"),
            }
        }
        FieldName::VintageDecade => {
            let v = r.vintage_decade?;
            match (voice, vintage_decade(v)) {
                (Narrative, Some(d)) => format!("was built in the {d}"),
                (Narrative, None) => "was built before 1940".into(),
                (Owner, Some(d)) => format!("was constructed in the {d}"),
                (Owner, None) => "was constructed before 1940".into(),
                (Listing, Some(d)) => format!("vintage: {d}"),
                (Listing, None) => "vintage: pre-1940".into(),
            }
        }
        FieldName::BuildingType => {
            let t = building_type_phrase(r.building_type?);
            match voice {
                Narrative | Owner => format!("is a {t}"),
                Listing => format!("type: {t}"),
            }
        }
        FieldName::ConditionedFloorArea => {
            let a = r.conditioned_floor_area?;
            match voice {
                Narrative => format!("has {a} m² of conditioned floor area"),
                Owner => format!("offers a conditioned floor area of {a} m²"),
                Listing => format!("conditioned floor area: {a} m²"),
            }
        }
        FieldName::NumStories => {
            let n = r.num_stories?;
            match voice {
                Narrative => format!("has {} {}", number_word(n), plural(n, "story", "stories")),
                Owner => format!("is {n} {} tall", plural(n, "story", "stories")),
                Listing => format!("stories: {n}"),
            }
        }
        FieldName::NumBedrooms => {
            let n = r.num_bedrooms?;
            let word = plural(n, "bedroom", "bedrooms");
            match voice {
                Narrative => format!("has {n} {word}"),
                Owner => format!("includes {n} {word}"),
                Listing => format!("bedrooms: {n}"),
            }
        }
        FieldName::NumOccupants => {
            let n = r.num_occupants?;
            match voice {
                Narrative => format!("is home to {n} {}", plural(n, "person", "people")),
                Owner => format!("houses a household of {n}"),
                Listing => format!("occupants: {n}"),
            }
        }
        FieldName::FoundationType => {
            let (long, short) = foundation_phrase(r.foundation_type?);
            match voice {
                Narrative => format!("sits on {long}"),
                Owner => format!("has {long}"),
                Listing => format!("foundation: {short}"),
            }
        }
        FieldName::AtticType => {
            let (long, short) = attic_phrase(r.attic_type?);
            match voice {
                Narrative => format!("has {long}"),
                Owner => format!("comes with {long}"),
                Listing => format!("attic: {short}"),
            }
        }
        FieldName::WallConstruction => {
            let w = wall_phrase(r.wall_construction?);
            match voice {
                Narrative => format!("has {w} walls"),
                Owner => format!("is built with {w} walls"),
                Listing => format!("walls: {w}"),
            }
        }
        FieldName::WindowType => {
            let w = window_phrase(r.window_type?);
            match voice {
                Narrative => format!("has {w} windows"),
                Owner => format!("is fitted with {w} windows"),
                Listing => format!("windows: {w}"),
            }
        }
        FieldName::GaragePresent => {
            let g = r.garage_present?;
            match (voice, g) {
                (Narrative, true) => "has a garage".into(),
                (Narrative, false) => "has no garage".into(),
                (Owner, true) => "comes with a garage".into(),
                (Owner, false) => "comes without a garage".into(),
                (Listing, g) => format!("garage: {}", yes_no(g)),
            }
        }
        FieldName::HvacType => {
            let (long, short) = hvac_phrase(r.hvac_type?);
            match voice {
                Narrative => format!("uses {long} for space conditioning"),
                Owner => format!("is conditioned by {long}"),
                Listing => format!("HVAC: {short}"),
            }
        }
        FieldName::HeatingFuel => {
            let f = r.heating_fuel?;
            match (voice, f.fuel()) {
                (Narrative, Some(f)) => format!("is heated with {}", fuel_name(f)),
                (Narrative, None) => "has no heating fuel".into(),
                (Owner, Some(f)) => format!("uses {} for space heating", fuel_name(f)),
                (Owner, None) => "uses no heating fuel".into(),
                (Listing, Some(f)) => format!("heating fuel: {}", fuel_name(f)),
                (Listing, None) => "heating fuel: none".into(),
            }
        }
        FieldName::CoolingPresent => {
            let c = r.cooling_present?;
            match (voice, c) {
                (Narrative, true) => "has space cooling".into(),
                (Narrative, false) => "has no space cooling".into(),
                (Owner, true) => "comes with space cooling".into(),
                (Owner, false) => "comes without space cooling".into(),
                (Listing, c) => format!("space cooling: {}", yes_no(c)),
            }
        }
        FieldName::HeatingSetpoint => {
            let t = r.heating_setpoint?;
            match voice {
                Narrative => format!("keeps a heating setpoint of {t} °C"),
                Owner => format!("sets the thermostat to {t} °C for heating"),
                Listing => format!("heating setpoint: {t} °C"),
            }
        }
        FieldName::CoolingSetpoint => {
            let t = r.cooling_setpoint?;
            match voice {
                Narrative => format!("keeps a cooling setpoint of {t} °C"),
                Owner => format!("sets the thermostat to {t} °C for cooling"),
                Listing => format!("cooling setpoint: {t} °C"),
            }
        }
        FieldName::WaterHeaterFuel => {
            let f = r.water_heater_fuel?;
            match voice {
                Narrative => format!("has {} water heater", fuel_adjective(f)),
                Owner => format!("heats water with {}", fuel_name(f)),
                Listing => format!("water heater fuel: {}", fuel_name(f)),
            }
        }
        FieldName::DryerFuel => {
            let d = r.dryer_fuel?;
            match (voice, d) {
                (Narrative | Owner, DryerFuel::NoDryer) => "has no clothes dryer".into(),
                (Narrative, d) => format!("has {} clothes dryer", fuel_adjective(d.fuel()?)),
                (Owner, d) => format!("dries laundry with {}", fuel_name(d.fuel()?)),
                (Listing, DryerFuel::NoDryer) => "dryer fuel: none".into(),
                (Listing, d) => format!("dryer fuel: {}", fuel_name(d.fuel()?)),
            }
        }
        FieldName::ExistingPvPresent => {
            let pv = r.existing_pv_present?;
            match (voice, pv) {
                (Narrative, true) => "has existing rooftop solar panels".into(),
                (Narrative, false) => "has no existing solar panels".into(),
                (Owner, true) => "already has rooftop solar panels".into(),
                (Owner, false) => "has no rooftop solar panels".into(),
                (Listing, pv) => format!("existing solar panels: {}", yes_no(pv)),
            }
        }
    };
    Some(s)
}

fn join_clauses(clauses: &[String]) -> String {
    match clauses {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Render the user turn for a (possibly masked) record.
pub fn render_user(record: &BuildingRecord, template: &Template) -> String {
    let fields = ordered_fields(template.order);
    let mut sentences: Vec<String> = Vec::new();
    if !template.intro.is_empty() {
        sentences.push(template.intro.to_string());
    }

    let mut start = 0;
    let mut first = true;
    for &size in template.groups {
        let end = (start + size).min(fields.len());
        let clauses: Vec<String> = fields[start..end]
            .iter()
            .filter_map(|&f| clause(record, f, template.voice))
            .collect();
        start = end;
        if clauses.is_empty() {
            continue;
        }
        let sentence = match template.voice {
            Voice::Listing => format!("{} {}.", template.subject, clauses.join("; ")),
            _ => {
                let subject = if first || template.continuation.is_empty() {
                    template.subject
                } else {
                    template.continuation
                };
                format!("{subject} {}.", join_clauses(&clauses))
            }
        };
        first = false;
        sentences.push(sentence);
    }

    if !template.outro.is_empty() {
        sentences.push(template.outro.to_string());
    }
    sentences.join(" ")
}
