use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{
    AtticType, BuildingGeometry, BuildingRecord, BuildingType, ClimateZone, DryerFuel, Foundation,
    FuelType, HeatingFuel, HvacType, UsState, Vintage, WallConstruction, WindowType,
};
use crate::seed::rng_for;

const STATE_ZONES: &[(&str, &[ClimateZone])] = &[
    (
        "TX",
        &[ClimateZone::Z2A, ClimateZone::Z3A, ClimateZone::Z3B],
    ),
    (
        "CA",
        &[ClimateZone::Z3B, ClimateZone::Z3C, ClimateZone::Z4B],
    ),
    ("FL", &[ClimateZone::Z1A, ClimateZone::Z2A]),
    (
        "NY",
        &[ClimateZone::Z4A, ClimateZone::Z5A, ClimateZone::Z6A],
    ),
    ("IL", &[ClimateZone::Z4A, ClimateZone::Z5A]),
    ("MN", &[ClimateZone::Z6A, ClimateZone::Z7]),
    ("GA", &[ClimateZone::Z3A]),
    ("AZ", &[ClimateZone::Z2B, ClimateZone::Z5B]),
    ("CO", &[ClimateZone::Z5B, ClimateZone::Z6B]),
    ("WA", &[ClimateZone::Z4C, ClimateZone::Z5B]),
    ("MA", &[ClimateZone::Z5A]),
    ("OH", &[ClimateZone::Z4A, ClimateZone::Z5A]),
    ("PA", &[ClimateZone::Z4A, ClimateZone::Z5A]),
    ("NC", &[ClimateZone::Z3A, ClimateZone::Z4A]),
    ("MI", &[ClimateZone::Z5A, ClimateZone::Z6A]),
    ("AK", &[ClimateZone::Z7, ClimateZone::Z8]),
];

const HVAC_COMBOS: &[(HvacType, HeatingFuel, f64)] = &[
    (HvacType::Furnace, HeatingFuel::NaturalGas, 0.30),
    (HvacType::Furnace, HeatingFuel::Propane, 0.04),
    (HvacType::Furnace, HeatingFuel::FuelOil, 0.03),
    (HvacType::Furnace, HeatingFuel::Electricity, 0.06),
    (HvacType::HeatPump, HeatingFuel::Electricity, 0.17),
    (HvacType::Baseboard, HeatingFuel::Electricity, 0.08),
    (HvacType::Boiler, HeatingFuel::NaturalGas, 0.07),
    (HvacType::Boiler, HeatingFuel::FuelOil, 0.04),
    (HvacType::CentralAcOnly, HeatingFuel::NoHeating, 0.03),
    (HvacType::SharedSystem, HeatingFuel::NaturalGas, 0.05),
    (HvacType::SharedSystem, HeatingFuel::Electricity, 0.03),
];

fn weighted<'a, T>(rng: &mut ChaCha8Rng, items: &'a [(T, f64)]) -> &'a T {
    &items
        .choose_weighted(rng, |(_, w)| *w)
        .expect("weights are positive")
        .0
}

fn half_degree(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let steps = ((hi - lo) * 2.0) as u32;
    lo + rng.random_range(0..=steps) as f64 * 0.5
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn building_id(index: usize) -> String {
    format!("bldg-{:06}", index + 1)
}

/// `n` synthetic dwellings with correlated descriptors and geometry.
/// Each record draws from its own stream seeded by `hash(seed, building_id)`.
pub fn gen_buildings(n: usize, seed: u64) -> Vec<(BuildingRecord, BuildingGeometry)> {
    (0..n)
        .map(|i| gen_building(&building_id(i), seed))
        .collect()
}

pub fn gen_building(id: &str, seed: u64) -> (BuildingRecord, BuildingGeometry) {
    let mut rng = rng_for(seed, id);
    let rng = &mut rng;

    let (state_code, zones) = STATE_ZONES.choose(rng).expect("non-empty");
    let climate = *zones.choose(rng).expect("non-empty");
    let vintage = *Vintage::ALL.choose(rng).expect("non-empty");
    let building_type = *weighted(
        rng,
        &[
            (BuildingType::SingleFamilyDetached, 0.60),
            (BuildingType::SingleFamilyAttached, 0.08),
            (BuildingType::MultiFamilySmall, 0.10),
            (BuildingType::MultiFamilyLarge, 0.17),
            (BuildingType::MobileHome, 0.05),
        ],
    );
    let multifamily = matches!(
        building_type,
        BuildingType::MultiFamilySmall | BuildingType::MultiFamilyLarge
    );
    let (area_lo, area_hi, max_stories) = match building_type {
        BuildingType::SingleFamilyDetached => (80, 350, 3),
        BuildingType::SingleFamilyAttached => (70, 220, 3),
        BuildingType::MultiFamilySmall => (50, 150, 3),
        BuildingType::MultiFamilyLarge => (40, 130, 4),
        BuildingType::MobileHome => (50, 120, 1),
    };
    let area = rng.random_range(area_lo..=area_hi) as f64;
    let stories: u8 = rng.random_range(1..=max_stories);
    let bedrooms = ((area / 45.0).round() as i32 + rng.random_range(-1..=1)).clamp(1, 5) as u8;
    let occupants = rng.random_range(1..=(bedrooms + 2).min(8));

    let foundation = match building_type {
        BuildingType::MobileHome => Foundation::PierAndBeam,
        BuildingType::MultiFamilyLarge => *[Foundation::Slab, Foundation::HeatedBasement]
            .choose(rng)
            .expect("non-empty"),
        _ => *Foundation::ALL.choose(rng).expect("non-empty"),
    };
    let attic = if building_type == BuildingType::MultiFamilyLarge && rng.random_bool(0.7) {
        AtticType::NoAttic
    } else {
        *weighted(
            rng,
            &[
                (AtticType::Vented, 0.6),
                (AtticType::Unvented, 0.15),
                (AtticType::Finished, 0.15),
                (AtticType::NoAttic, 0.10),
            ],
        )
    };
    let walls = *weighted(
        rng,
        &[
            (WallConstruction::WoodFrame, 0.7),
            (WallConstruction::SteelFrame, 0.05),
            (WallConstruction::Brick, 0.15),
            (WallConstruction::Concrete, 0.10),
        ],
    );
    let old = (vintage as usize) < (Vintage::D1980s as usize);
    let windows = *weighted(
        rng,
        &[
            (WindowType::SinglePane, if old { 0.4 } else { 0.1 }),
            (WindowType::DoublePane, 0.35),
            (WindowType::DoublePaneLowE, if old { 0.2 } else { 0.45 }),
            (WindowType::TriplePane, 0.05),
        ],
    );
    let garage = match building_type {
        BuildingType::SingleFamilyDetached => rng.random_bool(0.6),
        BuildingType::SingleFamilyAttached => rng.random_bool(0.4),
        _ => false,
    };

    let (hvac, heating_fuel) = loop {
        let (h, f, _) = *HVAC_COMBOS
            .choose_weighted(rng, |c| c.2)
            .expect("weights are positive");
        if h != HvacType::SharedSystem || multifamily {
            break (h, f);
        }
    };
    let cooling = match hvac {
        HvacType::HeatPump | HvacType::CentralAcOnly => true,
        HvacType::SharedSystem if heating_fuel == HeatingFuel::Electricity => true,
        _ => rng.random_bool(0.8),
    };
    let heating_setpoint = half_degree(rng, 18.0, 22.0);
    let cooling_setpoint = half_degree(rng, 23.0, 27.0);
    let water_heater = if heating_fuel == HeatingFuel::NaturalGas {
        *weighted(
            rng,
            &[(FuelType::NaturalGas, 0.7), (FuelType::Electricity, 0.3)],
        )
    } else {
        *weighted(
            rng,
            &[
                (FuelType::Electricity, 0.6),
                (FuelType::NaturalGas, 0.3),
                (FuelType::Propane, 0.05),
                (FuelType::FuelOil, 0.05),
            ],
        )
    };
    let dryer = *weighted(
        rng,
        &[
            (DryerFuel::Electricity, 0.6),
            (DryerFuel::NaturalGas, 0.2),
            (DryerFuel::Propane, 0.05),
            (DryerFuel::NoDryer, 0.15),
        ],
    );
    let pv = rng.random_bool(0.05);

    let record = BuildingRecord {
        building_id: id.to_string(),
        location_state: UsState::from_code(state_code),
        climate_region: Some(climate),
        vintage_decade: Some(vintage),
        building_type: Some(building_type),
        conditioned_floor_area: Some(area),
        num_stories: Some(stories),
        num_bedrooms: Some(bedrooms),
        num_occupants: Some(occupants),
        foundation_type: Some(foundation),
        attic_type: Some(attic),
        wall_construction: Some(walls),
        window_type: Some(windows),
        garage_present: Some(garage),
        hvac_type: Some(hvac),
        heating_fuel: Some(heating_fuel),
        cooling_present: Some(cooling),
        heating_setpoint: Some(heating_setpoint),
        cooling_setpoint: Some(cooling_setpoint),
        water_heater_fuel: Some(water_heater),
        dryer_fuel: Some(dryer),
        existing_pv_present: Some(pv),
    };

    // Geometry scales with floor area: square-ish footprint per story.
    let footprint = area / stories as f64;
    let perimeter = 4.0 * footprint.sqrt() * rng.random_range(1.0..1.2);
    let exposure = if multifamily {
        rng.random_range(0.35..0.7)
    } else {
        1.0
    };
    let gross_wall = perimeter * 2.7 * stories as f64 * exposure;
    let window_area = gross_wall * rng.random_range(0.10..0.18);
    let roof_area = if attic == AtticType::NoAttic {
        footprint
    } else {
        footprint * 1.12
    } * if multifamily {
        rng.random_range(0.3..1.0)
    } else {
        1.0
    };
    let cooling_capacity = if cooling {
        area * rng.random_range(0.06..0.09)
    } else {
        0.0
    };
    let heating_capacity = if heating_fuel == HeatingFuel::NoHeating {
        0.0
    } else {
        area * rng.random_range(0.06..0.10)
    };
    let geometry = BuildingGeometry::complete(
        round2(gross_wall - window_area),
        round2(roof_area),
        round2(window_area),
        area,
        round2(cooling_capacity),
        round2(heating_capacity),
    );
    (record, geometry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn deterministic() {
        assert_eq!(gen_buildings(1, 42), gen_buildings(1, 42));
        assert_ne!(gen_buildings(3, 42), gen_buildings(3, 43));
    }

    #[test]
    fn unique_ids_and_valid_records() {
        let all = gen_buildings(500, 7);
        let ids: BTreeSet<_> = all.iter().map(|(r, _)| r.building_id.clone()).collect();
        assert_eq!(ids.len(), 500);
        for (r, g) in &all {
            r.validate().unwrap();
            assert_eq!(r.known_fields().len(), 21);
            assert!(crate::domain::resolve_hvac_subtype(r).is_ok());
            assert_eq!(g.conditioned_floor_area, r.conditioned_floor_area);
            for v in [
                g.exterior_wall_area,
                g.roof_area,
                g.total_window_area,
                g.cooling_capacity,
                g.heating_capacity,
            ] {
                assert!(v.unwrap() >= 0.0);
            }
            assert!(g.roof_area.unwrap() > 0.0);
        }
    }

    #[test]
    fn larger_homes_have_more_wall() {
        let all = gen_buildings(400, 3);
        let mut single: Vec<_> = all
            .iter()
            .filter(|(r, _)| {
                r.building_type == Some(BuildingType::SingleFamilyDetached)
                    && r.num_stories == Some(1)
            })
            .map(|(r, g)| {
                (
                    r.conditioned_floor_area.unwrap(),
                    g.exterior_wall_area.unwrap(),
                )
            })
            .collect();
        single.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = single.len();
        let small: f64 = single[..n / 4].iter().map(|x| x.1).sum::<f64>() / (n / 4) as f64;
        let large: f64 = single[n - n / 4..].iter().map(|x| x.1).sum::<f64>() / (n / 4) as f64;
        assert!(large > small);
    }
}
