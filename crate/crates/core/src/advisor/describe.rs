//! Rule-based extraction of building descriptors from free text.
//!
//! Each field has a handful of patterns; the first match wins. A field with
//! no match stays Unknown.

use std::sync::LazyLock;

use regex::{Captures, Regex};

use super::AdvisorError;
use crate::domain::{
    AtticType, BuildingRecord, BuildingType, ClimateZone, DryerFuel, Foundation, FuelType,
    HeatingFuel, HvacType, UsState, Vintage, WallConstruction, WindowType,
};

const FUEL: &str = "(electricity|natural gas|propane|fuel oil)";
const NUM: &str = r"(-?\d+(?:\.\d+)?)";

fn re(pattern: &str) -> Regex {
    Regex::new(&format!("(?i){pattern}")).expect("static pattern")
}

struct Patterns {
    state: Regex,
    climate: Regex,
    decade: Regex,
    pre_1940: Regex,
    building_type: Vec<(Regex, BuildingType)>,
    area: Regex,
    stories: Regex,
    bedrooms: Regex,
    occupants: Regex,
    foundation: Regex,
    attic: Regex,
    walls: Regex,
    windows: Regex,
    garage_listing: Regex,
    garage_absent: Regex,
    garage: Regex,
    hvac: Regex,
    heating_fuel: Regex,
    cooling_listing: Regex,
    cooling_absent: Regex,
    cooling: Regex,
    heating_setpoint: Regex,
    cooling_setpoint: Regex,
    water_heater: Regex,
    dryer: Regex,
    pv_listing: Regex,
    pv_absent: Regex,
    pv: Regex,
}

static PATTERNS: LazyLock<Patterns> = LazyLock::new(|| {
    let mut names: Vec<&str> = UsState::all().map(UsState::name).collect();
    // longest first so "West Virginia" wins over "Virginia"
    names.sort_by_key(|n| std::cmp::Reverse(n.len()));
    let states = names
        .iter()
        .map(|n| regex::escape(n))
        .collect::<Vec<_>>()
        .join("|");
    Patterns {
        state: re(&format!(r"\b({states})\b")),
        climate: re(r"\bclimate zone:?\s*([1-8][abc]?)\b"),
        decade: re(
            r"\b(?:built|constructed|dating from|from)\s+(?:in\s+)?the\s+(\d{4})s\b|\bvintage:\s*(\d{4})s\b",
        ),
        pre_1940: re(r"\b(?:built|constructed)\s+before\s+1940\b|\bpre-1940\b"),
        building_type: vec![
            (
                re(r"\bsingle-family detached\b|\bdetached (?:single-family )?(?:house|home)\b"),
                BuildingType::SingleFamilyDetached,
            ),
            (
                re(r"\bsingle-family attached\b|\btown(?:house|home)\b"),
                BuildingType::SingleFamilyAttached,
            ),
            (re(r"\b2-4 unit building\b"), BuildingType::MultiFamilySmall),
            (
                re(r"\bbuilding with 5 or more units\b"),
                BuildingType::MultiFamilyLarge,
            ),
            (
                re(r"\b(?:mobile|manufactured) home\b"),
                BuildingType::MobileHome,
            ),
        ],
        area: re(r"(\d+(?:\.\d+)?)\s*(?:m²|m2\b|sq\.?\s?m\b|square met(?:er|re)s\b)"),
        stories: re(
            r"\b(\d+|one|two|three|four|five|six|seven|eight|nine|ten)[- ]stor(?:y|ey|ies)\b|\bstories:\s*(\d+)",
        ),
        bedrooms: re(r"\b(\d+)\s+bedrooms?\b|\bbedrooms:\s*(\d+)"),
        occupants: re(
            r"\b(\d+)\s+(?:people|persons?|occupants?|residents?)\b|\bhousehold of (\d+)\b|\boccupants:\s*(\d+)",
        ),
        foundation: re(r"\b(slab|crawlspace|unheated basement|heated basement|pier-and-beam)\b"),
        attic: re(
            r"\b(vented|unvented|finished|no) attic\b|\battic:\s*(vented|unvented|finished|none)\b",
        ),
        walls: re(
            r"\b(wood-frame|steel-frame|brick|concrete) walls\b|\bwalls:\s*(wood-frame|steel-frame|brick|concrete)\b",
        ),
        windows: re(
            r"\b(single-pane|double-pane low-e|double-pane|triple-pane) windows\b|\bwindows:\s*(single-pane|double-pane low-e|double-pane|triple-pane)\b",
        ),
        garage_listing: re(r"\bgarage:\s*(yes|no)\b"),
        garage_absent: re(r"\b(?:no|without a) garage\b"),
        garage: re(r"\bgarage\b"),
        hvac: re(
            r"\b(heat pump|furnace|baseboard heaters|boiler|central air conditioning only|shared building system)\b",
        ),
        heating_fuel: re(&format!(
            r"\bheated with {FUEL}\b|\buses {FUEL} for space heating\b|\bheating fuel:\s*(electricity|natural gas|propane|fuel oil|none)\b|\b(no) heating fuel\b"
        )),
        cooling_listing: re(r"\bspace cooling:\s*(yes|no)\b"),
        cooling_absent: re(r"\b(?:no|without) space cooling\b"),
        cooling: re(r"\bspace cooling\b"),
        heating_setpoint: re(&format!(
            r"\bheating setpoint(?: of|:)\s*{NUM}\s*°?\s*C\b|\bthermostat to {NUM}\s*°?\s*C for heating\b"
        )),
        cooling_setpoint: re(&format!(
            r"\bcooling setpoint(?: of|:)\s*{NUM}\s*°?\s*C\b|\bthermostat to {NUM}\s*°?\s*C for cooling\b"
        )),
        water_heater: re(&format!(
            r"\b(electric|natural gas|propane|fuel oil) water heater\b|\bheats water with {FUEL}\b|\bwater heater fuel:\s*{FUEL}\b"
        )),
        dryer: re(
            r"\b(electric|natural gas|propane) clothes dryer\b|\bdries laundry with (electricity|natural gas|propane)\b|\bdryer fuel:\s*(electricity|natural gas|propane|none)\b|\b(no) clothes dryer\b",
        ),
        pv_listing: re(r"\bexisting solar panels:\s*(yes|no)\b"),
        pv_absent: re(r"\bno (?:existing |rooftop )?solar panels\b"),
        pv: re(r"\bsolar panels\b"),
    }
});

/// First participating group of the first match, lowercased.
fn capture(re: &Regex, text: &str) -> Option<String> {
    let caps: Captures = re.captures(text)?;
    caps.iter()
        .skip(1)
        .flatten()
        .next()
        .map(|m| m.as_str().to_lowercase())
}

fn flag(listing: &Regex, absent: &Regex, present: &Regex, text: &str) -> Option<bool> {
    if let Some(v) = capture(listing, text) {
        return Some(v == "yes");
    }
    if absent.is_match(text) {
        return Some(false);
    }
    present.is_match(text).then_some(true)
}

fn small_number(word: &str) -> Option<u8> {
    const WORDS: [&str; 10] = [
        "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    ];
    match WORDS.iter().position(|w| *w == word) {
        Some(i) => Some(i as u8 + 1),
        None => word.parse().ok(),
    }
}

fn fuel(word: &str) -> Option<FuelType> {
    match word {
        "electricity" | "electric" => Some(FuelType::Electricity),
        "natural gas" => Some(FuelType::NaturalGas),
        "propane" => Some(FuelType::Propane),
        "fuel oil" => Some(FuelType::FuelOil),
        _ => None,
    }
}

fn vintage(text: &str, p: &Patterns) -> Option<Vintage> {
    if let Some(decade) = capture(&p.decade, text).and_then(|d| d.parse::<u16>().ok()) {
        return match decade {
            ..1940 => Some(Vintage::Pre1940),
            d => format!("{d}s").parse().ok(),
        };
    }
    p.pre_1940.is_match(text).then_some(Vintage::Pre1940)
}

/// Extract a partial record. Fails only when no core field is found.
pub fn parse_description(text: &str) -> Result<BuildingRecord, AdvisorError> {
    let p = &*PATTERNS;
    let num = |re: &Regex| {
        capture(re, text)
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|x| x.is_finite())
    };
    let count = |re: &Regex| capture(re, text).and_then(|s| s.parse::<u8>().ok());

    let record = BuildingRecord {
        building_id: "query".into(),
        location_state: capture(&p.state, text).and_then(|s| UsState::from_name(&s)),
        climate_region: capture(&p.climate, text)
            .and_then(|z| z.to_uppercase().parse::<ClimateZone>().ok()),
        vintage_decade: vintage(text, p),
        building_type: p
            .building_type
            .iter()
            .filter_map(|(re, t)| re.find(text).map(|m| (m.start(), *t)))
            .min_by_key(|(start, _)| *start)
            .map(|(_, t)| t),
        conditioned_floor_area: num(&p.area).filter(|a| *a > 0.0),
        num_stories: capture(&p.stories, text)
            .and_then(|w| small_number(&w))
            .filter(|n| *n >= 1),
        num_bedrooms: count(&p.bedrooms),
        num_occupants: count(&p.occupants),
        foundation_type: capture(&p.foundation, text).and_then(|f| match f.as_str() {
            "slab" => Some(Foundation::Slab),
            "crawlspace" => Some(Foundation::Crawlspace),
            "unheated basement" => Some(Foundation::UnheatedBasement),
            "heated basement" => Some(Foundation::HeatedBasement),
            "pier-and-beam" => Some(Foundation::PierAndBeam),
            _ => None,
        }),
        attic_type: capture(&p.attic, text).and_then(|a| match a.as_str() {
            "vented" => Some(AtticType::Vented),
            "unvented" => Some(AtticType::Unvented),
            "finished" => Some(AtticType::Finished),
            "no" | "none" => Some(AtticType::NoAttic),
            _ => None,
        }),
        wall_construction: capture(&p.walls, text).and_then(|w| match w.as_str() {
            "wood-frame" => Some(WallConstruction::WoodFrame),
            "steel-frame" => Some(WallConstruction::SteelFrame),
            "brick" => Some(WallConstruction::Brick),
            "concrete" => Some(WallConstruction::Concrete),
            _ => None,
        }),
        window_type: capture(&p.windows, text).and_then(|w| match w.as_str() {
            "single-pane" => Some(WindowType::SinglePane),
            "double-pane" => Some(WindowType::DoublePane),
            "double-pane low-e" => Some(WindowType::DoublePaneLowE),
            "triple-pane" => Some(WindowType::TriplePane),
            _ => None,
        }),
        garage_present: flag(&p.garage_listing, &p.garage_absent, &p.garage, text),
        hvac_type: capture(&p.hvac, text).and_then(|h| match h.as_str() {
            "heat pump" => Some(HvacType::HeatPump),
            "furnace" => Some(HvacType::Furnace),
            "baseboard heaters" => Some(HvacType::Baseboard),
            "boiler" => Some(HvacType::Boiler),
            "central air conditioning only" => Some(HvacType::CentralAcOnly),
            "shared building system" => Some(HvacType::SharedSystem),
            _ => None,
        }),
        heating_fuel: capture(&p.heating_fuel, text).and_then(|f| match f.as_str() {
            "no" | "none" => Some(HeatingFuel::NoHeating),
            f => fuel(f).map(|f| match f {
                FuelType::Electricity => HeatingFuel::Electricity,
                FuelType::NaturalGas => HeatingFuel::NaturalGas,
                FuelType::Propane => HeatingFuel::Propane,
                FuelType::FuelOil => HeatingFuel::FuelOil,
            }),
        }),
        cooling_present: flag(&p.cooling_listing, &p.cooling_absent, &p.cooling, text),
        heating_setpoint: num(&p.heating_setpoint),
        cooling_setpoint: num(&p.cooling_setpoint),
        water_heater_fuel: capture(&p.water_heater, text).and_then(|f| fuel(&f)),
        dryer_fuel: capture(&p.dryer, text).and_then(|d| match d.as_str() {
            "no" | "none" => Some(DryerFuel::NoDryer),
            d => match fuel(d)? {
                FuelType::Electricity => Some(DryerFuel::Electricity),
                FuelType::NaturalGas => Some(DryerFuel::NaturalGas),
                FuelType::Propane => Some(DryerFuel::Propane),
                FuelType::FuelOil => None,
            },
        }),
        existing_pv_present: flag(&p.pv_listing, &p.pv_absent, &p.pv, text),
    };

    if !record.has_core_field() {
        return Err(AdvisorError::NoCoreFields);
    }
    Ok(record)
}
