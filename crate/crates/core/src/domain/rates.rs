use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::fuel::{FuelType, PerFuel};

/// Emission factors, utility rates, and the discount rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateTable {
    /// kg CO₂ per kWh of delivered site energy
    pub emission_factors: PerFuel<f64>,
    /// USD per kWh of delivered site energy
    pub utility_rates: PerFuel<f64>,
    #[serde(default = "default_discount_rate")]
    pub discount_rate: f64,
}

fn default_discount_rate() -> f64 {
    0.03
}

#[derive(Debug, Error)]
pub enum RateError {
    #[error("reading rate table: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing rate table: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{kind} for {fuel} must be finite and non-negative, got {value}")]
    Negative {
        kind: &'static str,
        fuel: FuelType,
        value: f64,
    },
    #[error("discount rate must lie in [0, 1), got {0}")]
    DiscountRate(f64),
}

/// The shipped configuration. Its emission factors and utility rates are
/// placeholders, not published values.
pub const DEFAULT_RATES_TOML: &str = include_str!("../../config/rates.toml");

impl RateTable {
    pub fn from_toml_str(text: &str) -> Result<Self, RateError> {
        let table: RateTable = toml::from_str(text)?;
        table.validate()?;
        Ok(table)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, RateError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), RateError> {
        for (kind, values) in [
            ("emission factor", &self.emission_factors),
            ("utility rate", &self.utility_rates),
        ] {
            for (fuel, value) in values.iter() {
                if !(value.is_finite() && value >= 0.0) {
                    return Err(RateError::Negative { kind, fuel, value });
                }
            }
        }
        if !(0.0..1.0).contains(&self.discount_rate) {
            return Err(RateError::DiscountRate(self.discount_rate));
        }
        Ok(())
    }
}

impl Default for RateTable {
    fn default() -> Self {
        RateTable::from_toml_str(DEFAULT_RATES_TOML).expect("shipped rate table is valid")
    }
}

/// Multipliers from native fuel units to kWh of site energy, applied when
/// ingesting simulation results reported in native units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitConversions {
    pub to_kwh: PerFuel<f64>,
}

impl UnitConversions {
    /// Inputs already in kWh.
    pub const IDENTITY: UnitConversions = UnitConversions {
        to_kwh: PerFuel {
            electricity: 1.0,
            natural_gas: 1.0,
            propane: 1.0,
            fuel_oil: 1.0,
        },
    };

    /// kWh, therms, gallons of propane, gallons of No. 2 fuel oil.
    pub const NATIVE_US: UnitConversions = UnitConversions {
        to_kwh: PerFuel {
            electricity: 1.0,
            natural_gas: 29.3071,
            propane: 26.8,
            fuel_oil: 40.6,
        },
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_table_loads() {
        let t = RateTable::default();
        assert_eq!(t.discount_rate, 0.03);
        assert!(t.emission_factors.electricity > 0.0);
    }

    #[test]
    fn rejects_bad_values() {
        let text = DEFAULT_RATES_TOML.replace("discount_rate = 0.03", "discount_rate = 1.0");
        assert!(matches!(
            RateTable::from_toml_str(&text),
            Err(RateError::DiscountRate(_))
        ));
        let text = r#"
            discount_rate = 0.03
            [emission_factors]
            electricity = -0.1
            natural_gas = 0.0
            propane = 0.0
            fuel_oil = 0.0
            [utility_rates]
            electricity = 0.1
            natural_gas = 0.0
            propane = 0.0
            fuel_oil = 0.0
        "#;
        assert!(matches!(
            RateTable::from_toml_str(text),
            Err(RateError::Negative {
                fuel: FuelType::Electricity,
                ..
            })
        ));
    }
}
