//! Retrofit catalog: what each measure modifies and how its cost is computed.

use serde::Serialize;

use super::EconError;
use crate::domain::{ApplianceSet, BuildingGeometry, HvacSubtype, MeasureCategory, MeasureId};

/// One modified model parameter, as listed in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterModification {
    pub parameter: &'static str,
    pub retrofit_value: &'static str,
    pub unit: &'static str,
}

/// The geometric basis of a per-area cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaBasis {
    ExteriorWall,
    Roof,
    Window,
    ConditionedFloor,
}

/// What a unit count divides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitBasis {
    CoolingCapacity,
    HeatingCapacity,
    ConditionedFloorArea,
}

/// `round(basis / divisor) * unit_cost`, with at least one unit whenever the
/// conditioned floor area is non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitRule {
    pub basis: UnitBasis,
    pub divisor: f64,
    pub unit_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostRule {
    PerArea { basis: AreaBasis, unit_cost: f64 },
    Units { rules: Vec<UnitRule>, fixed: f64 },
    PvTiered,
    Appliances(AppliancePrices),
    Fixed { amount: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppliancePrices {
    pub refrigerator: f64,
    pub washer: f64,
    pub dishwasher: f64,
    pub dryer: f64,
}

pub const APPLIANCE_PRICES: AppliancePrices = AppliancePrices {
    refrigerator: 1159.02,
    washer: 1350.76,
    dishwasher: 1079.79,
    dryer: 453.69,
};

/// One catalog row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureSpec {
    pub category: MeasureCategory,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hvac_subtype: Option<HvacSubtype>,
    pub label: &'static str,
    pub modified_parameters: Vec<ParameterModification>,
    pub cost_rule: CostRule,
}

impl MeasureSpec {
    pub fn applies_to(&self, measure: MeasureId) -> bool {
        self.category == measure.category() && self.hvac_subtype == measure.hvac_subtype()
    }
}

pub const PV_ACTIVE_AREA_FRACTION: f64 = 0.22;
pub const PV_CELL_EFFICIENCY: f64 = 0.21;
pub const PV_INVERTER_EFFICIENCY: f64 = 0.95;
/// Below this capacity (W) the flat small-system unit cost applies.
pub const PV_TIER_LOW_W: f64 = 880.0;
/// Above this capacity (W) the flat large-system unit cost applies.
pub const PV_TIER_HIGH_W: f64 = 14080.0;

const HVAC_FIXED_SMALL: f64 = 634.41;
const HVAC_FIXED_FURNACE: f64 = 2217.75;
const HEATING_UNIT: UnitRule = UnitRule {
    basis: UnitBasis::HeatingCapacity,
    divisor: 3.52,
    unit_cost: 1699.0,
};
const DX_COOLING_UNIT: UnitRule = UnitRule {
    basis: UnitBasis::CoolingCapacity,
    divisor: 7.03,
    unit_cost: 1623.0,
};

fn p(
    parameter: &'static str,
    retrofit_value: &'static str,
    unit: &'static str,
) -> ParameterModification {
    ParameterModification {
        parameter,
        retrofit_value,
        unit,
    }
}

fn hvac_row(
    subtype: HvacSubtype,
    label: &'static str,
    modified_parameters: Vec<ParameterModification>,
    rules: Vec<UnitRule>,
    fixed: f64,
) -> MeasureSpec {
    MeasureSpec {
        category: MeasureCategory::HvacUpgrade,
        hvac_subtype: Some(subtype),
        label,
        modified_parameters,
        cost_rule: CostRule::Units { rules, fixed },
    }
}

/// The full catalog: one row per non-HVAC category and one per HVAC subtype.
pub fn catalog() -> Vec<MeasureSpec> {
    use MeasureCategory as C;
    let simple = |category, label, modified_parameters, cost_rule| MeasureSpec {
        category,
        hvac_subtype: None,
        label,
        modified_parameters,
        cost_rule,
    };
    vec![
        simple(
            C::WallInsulation,
            "Wall insulation",
            vec![p(
                "Wall material thermal conductivity",
                "Thermal conductivity = Thickness / 6.34",
                "W/m·K",
            )],
            CostRule::PerArea {
                basis: AreaBasis::ExteriorWall,
                unit_cost: 150.4,
            },
        ),
        simple(
            C::RoofCeilingInsulation,
            "Roof & ceiling insulation",
            vec![p(
                "Roof/ceiling material thermal conductivity",
                "Thermal conductivity = Thickness / 8.63",
                "W/m·K",
            )],
            CostRule::PerArea {
                basis: AreaBasis::Roof,
                unit_cost: 19.7,
            },
        ),
        simple(
            C::WindowReplacement,
            "Window replacement",
            vec![
                p("Glazing U-value", "1.476", "W/m²·K"),
                p("SHGC", "0.22", "–"),
            ],
            CostRule::PerArea {
                basis: AreaBasis::Window,
                unit_cost: 974.4,
            },
        ),
        simple(
            C::AirSealing,
            "Air sealing",
            vec![p(
                "Effective leakage area (ELA)",
                "ELA = 0.08 * baseline ELA",
                "m²",
            )],
            CostRule::PerArea {
                basis: AreaBasis::ConditionedFloor,
                unit_cost: 11.8,
            },
        ),
        hvac_row(
            HvacSubtype::DxCoolingPlusDxHeating,
            "HVAC – DX cooling + DX heating (electric ASHP/MSHP)",
            vec![
                p("DX cooling COP", "8.32", "–"),
                p("DX heating COP", "3.2", "–"),
            ],
            vec![DX_COOLING_UNIT],
            HVAC_FIXED_SMALL,
        ),
        hvac_row(
            HvacSubtype::DxCoolingOnly,
            "HVAC – DX cooling only",
            vec![p("DX cooling COP", "7.39", "–")],
            vec![DX_COOLING_UNIT],
            HVAC_FIXED_SMALL,
        ),
        hvac_row(
            HvacSubtype::ElectricFurnaceBaseboard,
            "HVAC – Electric furnace / baseboard",
            vec![p("Heating efficiency (COP-equivalent)", "3.2", "–")],
            vec![HEATING_UNIT],
            HVAC_FIXED_SMALL,
        ),
        hvac_row(
            HvacSubtype::NaturalGasFurnace,
            "HVAC – Natural gas furnace",
            vec![p("Burner efficiency", "0.98", "–")],
            vec![
                HEATING_UNIT,
                UnitRule {
                    basis: UnitBasis::CoolingCapacity,
                    divisor: 25.11,
                    unit_cost: 3472.93,
                },
            ],
            HVAC_FIXED_FURNACE,
        ),
        hvac_row(
            HvacSubtype::FuelFurnace,
            "HVAC – Fuel furnace (oil / propane / other)",
            vec![p("Burner efficiency", "0.80", "–")],
            vec![
                HEATING_UNIT,
                UnitRule {
                    basis: UnitBasis::CoolingCapacity,
                    divisor: 39.32,
                    unit_cost: 3232.0,
                },
            ],
            HVAC_FIXED_FURNACE,
        ),
        hvac_row(
            HvacSubtype::HotWaterBoiler,
            "HVAC – Hot-water boiler (shared heating)",
            vec![p("Boiler thermal efficiency", "0.95", "–")],
            vec![
                HEATING_UNIT,
                UnitRule {
                    basis: UnitBasis::CoolingCapacity,
                    divisor: 21.98,
                    unit_cost: 3472.93,
                },
            ],
            4399.77,
        ),
        hvac_row(
            HvacSubtype::SharedCooling,
            "HVAC – Shared cooling system",
            vec![p("DX cooling COP", "8.32", "–")],
            vec![UnitRule {
                basis: UnitBasis::CoolingCapacity,
                divisor: 7.03,
                unit_cost: 3073.0,
            }],
            2309.70,
        ),
        simple(
            C::PvInstallation,
            "Photovoltaic (PV)",
            vec![
                p("Cell efficiency", "0.21", "–"),
                p("Active area fraction", "0.22", "–"),
                p("Inverter efficiency", "0.95", "–"),
            ],
            CostRule::PvTiered,
        ),
        simple(
            C::ApplianceReplacement,
            "Appliance replacement",
            vec![
                p("Refrigerator power scaling", "Refrigerator * 0.76", "–"),
                p("Washer power scaling", "Washer * 0.333", "–"),
                p("Dishwasher power scaling", "Dishwasher * 0.76", "–"),
                p(
                    "Dryer power scaling",
                    "Dryer * 0.9467 (electricity) or 0.9456 (gas)",
                    "–",
                ),
            ],
            CostRule::Appliances(APPLIANCE_PRICES),
        ),
        simple(
            C::LightingReplacement,
            "Lighting replacement",
            vec![p("Interior lighting power", "Lighting power * 0.47", "–")],
            CostRule::Units {
                rules: vec![UnitRule {
                    basis: UnitBasis::ConditionedFloorArea,
                    divisor: 6.97,
                    unit_cost: 7.87,
                }],
                fixed: 0.0,
            },
        ),
        simple(
            C::WaterHeaterReplacement,
            "Water-heater replacement",
            vec![p("Rated COP of heat pump water heater", "4.07", "–")],
            CostRule::Fixed { amount: 3707.0 },
        ),
    ]
}

/// The catalog row for a measure.
pub fn spec_for(measure: MeasureId) -> MeasureSpec {
    catalog()
        .into_iter()
        .find(|s| s.applies_to(measure))
        .expect("catalog covers every measure")
}

/// Round half up (x ≥ 0). A relative slack of 1e-9 keeps decimal halves like
/// 17.575 / 7.03 from falling just short of .5 in binary.
pub fn round_half_up(x: f64) -> f64 {
    (x + 0.5 + 1e-9 * x.abs().max(1.0)).floor()
}

/// Unit count with the catalog's minimum of one unit for a non-zero
/// conditioned floor area.
pub fn unit_count(quantity: f64, divisor: f64, conditioned_floor_area: f64) -> f64 {
    let n = round_half_up(quantity / divisor);
    if conditioned_floor_area > 0.0 {
        n.max(1.0)
    } else {
        n
    }
}

fn required(value: Option<f64>, name: &'static str) -> Result<f64, EconError> {
    match value {
        Some(v) if v.is_finite() && v >= 0.0 => Ok(v),
        Some(v) => Err(EconError::InvalidGeometry(name, v)),
        None => Err(EconError::MissingGeometry(name)),
    }
}

/// PV capacity (W) from roof area (m²).
pub fn pv_capacity_w(roof_area: f64) -> f64 {
    roof_area * PV_ACTIVE_AREA_FRACTION * PV_CELL_EFFICIENCY * 1000.0
}

/// Unit cost (USD/W). The linear tier includes both of its endpoints.
pub fn pv_unit_cost(capacity_w: f64) -> f64 {
    if capacity_w < PV_TIER_LOW_W {
        4.30
    } else if capacity_w <= PV_TIER_HIGH_W {
        4.37 - 0.000091 * capacity_w
    } else {
        3.10
    }
}

/// PV capacity (W) and installed cost (USD) for the building's roof.
pub fn pv_sizing_and_cost(geom: &BuildingGeometry) -> Result<(f64, f64), EconError> {
    let roof = required(geom.roof_area, "roof_area")?;
    let capacity = pv_capacity_w(roof);
    Ok((capacity, capacity * pv_unit_cost(capacity)))
}

/// Retrofit cost in USD, assuming all four appliances are replaced.
pub fn measure_cost(measure: MeasureId, geom: &BuildingGeometry) -> Result<f64, EconError> {
    measure_cost_with(measure, geom, ApplianceSet::ALL)
}

/// Retrofit cost in USD, with appliance replacement limited to `appliances`.
pub fn measure_cost_with(
    measure: MeasureId,
    geom: &BuildingGeometry,
    appliances: ApplianceSet,
) -> Result<f64, EconError> {
    let spec = spec_for(measure);
    let cost = match spec.cost_rule {
        CostRule::PerArea { basis, unit_cost } => {
            let area = match basis {
                AreaBasis::ExteriorWall => required(geom.exterior_wall_area, "exterior_wall_area")?,
                AreaBasis::Roof => required(geom.roof_area, "roof_area")?,
                AreaBasis::Window => required(geom.total_window_area, "total_window_area")?,
                AreaBasis::ConditionedFloor => {
                    required(geom.conditioned_floor_area, "conditioned_floor_area")?
                }
            };
            unit_cost * area
        }
        CostRule::Units { rules, fixed } => {
            let cfa = required(geom.conditioned_floor_area, "conditioned_floor_area")?;
            let mut total = fixed;
            for rule in rules {
                let quantity = match rule.basis {
                    UnitBasis::CoolingCapacity => {
                        required(geom.cooling_capacity, "cooling_capacity")?
                    }
                    UnitBasis::HeatingCapacity => {
                        required(geom.heating_capacity, "heating_capacity")?
                    }
                    UnitBasis::ConditionedFloorArea => cfa,
                };
                total += unit_count(quantity, rule.divisor, cfa) * rule.unit_cost;
            }
            total
        }
        CostRule::PvTiered => pv_sizing_and_cost(geom)?.1,
        CostRule::Appliances(prices) => {
            let mut total = 0.0;
            for (present, price) in [
                (appliances.refrigerator, prices.refrigerator),
                (appliances.washer, prices.washer),
                (appliances.dishwasher, prices.dishwasher),
                (appliances.dryer, prices.dryer),
            ] {
                if present {
                    total += price;
                }
            }
            total
        }
        CostRule::Fixed { amount } => amount,
    };
    Ok(cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> BuildingGeometry {
        BuildingGeometry::complete(100.0, 80.0, 20.0, 150.0, 7.03, 3.52)
    }

    #[test]
    fn every_row_once() {
        let rows = catalog();
        assert_eq!(rows.len(), 8 + HvacSubtype::ALL.len());
        for &sub in HvacSubtype::ALL {
            for m in MeasureId::applicable(sub) {
                assert_eq!(rows.iter().filter(|s| s.applies_to(m)).count(), 1, "{m}");
            }
        }
    }

    #[test]
    fn verbatim_retrofit_values() {
        let window = spec_for(MeasureId::WindowReplacement);
        assert_eq!(window.modified_parameters[0].retrofit_value, "1.476");
        assert_eq!(window.modified_parameters[1].retrofit_value, "0.22");
        let wh = spec_for(MeasureId::WaterHeaterReplacement);
        assert_eq!(wh.modified_parameters[0].retrofit_value, "4.07");
        let light = spec_for(MeasureId::LightingReplacement);
        assert!(light.modified_parameters[0].retrofit_value.contains("0.47"));
        let seal = spec_for(MeasureId::AirSealing);
        assert!(seal.modified_parameters[0].retrofit_value.contains("0.08"));
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_up(2.5), 3.0);
        assert_eq!(round_half_up(2.4999), 2.0);
        assert_eq!(round_half_up(17.575 / 7.03), 3.0);
        assert_eq!(round_half_up(0.0), 0.0);
        assert_eq!(unit_count(0.0, 7.03, 100.0), 1.0);
        assert_eq!(unit_count(0.0, 7.03, 0.0), 0.0);
        assert_eq!(unit_count(1.0, 7.03, 10.0), 1.0);
        assert_eq!(unit_count(24.6, 7.03, 10.0), 3.0);
    }

    #[test]
    fn missing_geometry() {
        let mut g = geom();
        g.exterior_wall_area = None;
        assert_eq!(
            measure_cost(MeasureId::WallInsulation, &g),
            Err(EconError::MissingGeometry("exterior_wall_area"))
        );
        // fixed-cost measures need no geometry
        assert_eq!(
            measure_cost(
                MeasureId::WaterHeaterReplacement,
                &BuildingGeometry::default()
            ),
            Ok(3707.0)
        );
    }

    #[test]
    fn appliances_only_when_replaced() {
        let all = measure_cost(MeasureId::ApplianceReplacement, &geom()).unwrap();
        assert!((all - (1159.02 + 1350.76 + 1079.79 + 453.69)).abs() < 1e-9);
        let no_dryer = ApplianceSet {
            dryer: false,
            ..ApplianceSet::ALL
        };
        let c = measure_cost_with(MeasureId::ApplianceReplacement, &geom(), no_dryer).unwrap();
        assert!((c - (1159.02 + 1350.76 + 1079.79)).abs() < 1e-9);
    }
}
