use serde::{Deserialize, Serialize};

use crate::wire::wire_enum;

wire_enum! {
    /// Fuels reported separately by the annual simulation output.
    pub enum FuelType: "fuel type" {
        Electricity => "electricity",
        NaturalGas => "natural_gas",
        Propane => "propane",
        FuelOil => "fuel_oil",
    }
}

impl FuelType {
    pub fn label(self) -> &'static str {
        match self {
            FuelType::Electricity => "electricity",
            FuelType::NaturalGas => "natural gas",
            FuelType::Propane => "propane",
            FuelType::FuelOil => "fuel oil",
        }
    }
}

/// One value per fuel type.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerFuel<T> {
    pub electricity: T,
    pub natural_gas: T,
    pub propane: T,
    pub fuel_oil: T,
}

impl<T: Copy> PerFuel<T> {
    pub fn splat(value: T) -> Self {
        PerFuel {
            electricity: value,
            natural_gas: value,
            propane: value,
            fuel_oil: value,
        }
    }

    pub fn get(&self, fuel: FuelType) -> T {
        match fuel {
            FuelType::Electricity => self.electricity,
            FuelType::NaturalGas => self.natural_gas,
            FuelType::Propane => self.propane,
            FuelType::FuelOil => self.fuel_oil,
        }
    }

    pub fn get_mut(&mut self, fuel: FuelType) -> &mut T {
        match fuel {
            FuelType::Electricity => &mut self.electricity,
            FuelType::NaturalGas => &mut self.natural_gas,
            FuelType::Propane => &mut self.propane,
            FuelType::FuelOil => &mut self.fuel_oil,
        }
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(FuelType, T) -> U) -> PerFuel<U> {
        PerFuel {
            electricity: f(FuelType::Electricity, self.electricity),
            natural_gas: f(FuelType::NaturalGas, self.natural_gas),
            propane: f(FuelType::Propane, self.propane),
            fuel_oil: f(FuelType::FuelOil, self.fuel_oil),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (FuelType, T)> + '_ {
        FuelType::ALL.iter().map(move |&f| (f, self.get(f)))
    }
}

/// Annual site energy per fuel (kWh) plus net site energy after any on-site
/// PV credit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FuelVector {
    #[serde(flatten)]
    pub consumption: PerFuel<f64>,
    pub net_site_energy: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuelVectorError {
    #[error("{0} consumption must be finite and non-negative, got {1}")]
    BadComponent(FuelType, f64),
    #[error("net site energy must be finite, got {0}")]
    BadNet(f64),
    #[error("net site energy {net} exceeds the sum of fuel components {sum}")]
    NetAboveSum { net: f64, sum: f64 },
}

impl FuelVector {
    /// A vector with no on-site generation: net equals the component sum.
    pub fn from_consumption(consumption: PerFuel<f64>) -> Self {
        let net_site_energy = consumption.iter().map(|(_, c)| c).sum();
        FuelVector {
            consumption,
            net_site_energy,
        }
    }

    pub fn total_consumption(&self) -> f64 {
        self.consumption.iter().map(|(_, c)| c).sum()
    }

    pub fn validate(&self) -> Result<(), FuelVectorError> {
        for (fuel, c) in self.consumption.iter() {
            if !c.is_finite() || c < 0.0 {
                return Err(FuelVectorError::BadComponent(fuel, c));
            }
        }
        if !self.net_site_energy.is_finite() {
            return Err(FuelVectorError::BadNet(self.net_site_energy));
        }
        let sum = self.total_consumption();
        // PV credit can only lower net below the component sum.
        if self.net_site_energy > sum + 1e-6 * sum.max(1.0) {
            return Err(FuelVectorError::NetAboveSum {
                net: self.net_site_energy,
                sum,
            });
        }
        Ok(())
    }
}
