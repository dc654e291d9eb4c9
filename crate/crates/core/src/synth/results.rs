//! Per-scenario results in CSV.
//!
//! Header: `building_id,scenario,electricity_kwh,natural_gas_kwh,propane_kwh,fuel_oil_kwh,net_site_energy_kwh`.
//! `scenario` is `baseline` or a measure name. UTF-8, `.` decimal separator.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use super::{SimDataset, SimResult, SynthError};
use crate::domain::{FuelType, FuelVector, MeasureId, PerFuel, UnitConversions};

pub const RESULTS_HEADER: [&str; 7] = [
    "building_id",
    "scenario",
    "electricity_kwh",
    "natural_gas_kwh",
    "propane_kwh",
    "fuel_oil_kwh",
    "net_site_energy_kwh",
];

const BASELINE: &str = "baseline";

fn fuel_column(fuel: FuelType) -> usize {
    2 + FuelType::ALL
        .iter()
        .position(|f| *f == fuel)
        .expect("closed set")
}

pub fn write_results<W: Write>(data: &SimDataset, out: W) -> Result<(), SynthError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    let mut row = |id: &str, scenario: &str, v: &FuelVector| -> Result<(), SynthError> {
        let c = &v.consumption;
        w.write_record([
            id.to_string(),
            scenario.to_string(),
            c.electricity.to_string(),
            c.natural_gas.to_string(),
            c.propane.to_string(),
            c.fuel_oil.to_string(),
            v.net_site_energy.to_string(),
        ])?;
        Ok(())
    };
    for (id, sim) in data {
        row(id, BASELINE, &sim.baseline)?;
        for (measure, v) in &sim.retrofits {
            row(id, &measure.to_string(), v)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn export_results(data: &SimDataset, path: impl AsRef<Path>) -> Result<(), SynthError> {
    let file = std::fs::File::create(path)?;
    write_results(data, std::io::BufWriter::new(file))
}

/// Parse results; fuel columns are multiplied by `units` to reach kWh.
/// The net site energy column is always kWh.
pub fn read_results<R: Read>(input: R, units: &UnitConversions) -> Result<SimDataset, SynthError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(RESULTS_HEADER) {
        return Err(SynthError::Parse {
            line: 1,
            column: "header".into(),
            message: format!("expected {}", RESULTS_HEADER.join(",")),
        });
    }

    let mut baselines: BTreeMap<String, FuelVector> = BTreeMap::new();
    let mut retrofits: BTreeMap<String, BTreeMap<MeasureId, FuelVector>> = BTreeMap::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let err = |col: usize, message: String| SynthError::Parse {
            line,
            column: RESULTS_HEADER[col].to_string(),
            message,
        };
        let number = |col: usize| -> Result<f64, SynthError> {
            let raw = &row[col];
            let x: f64 = raw
                .trim()
                .parse()
                .map_err(|_| err(col, format!("not a number: {raw:?}")))?;
            if !x.is_finite() {
                return Err(err(col, format!("not finite: {raw:?}")));
            }
            Ok(x)
        };

        let id = row[0].to_string();
        if id.is_empty() {
            return Err(err(0, "empty building id".into()));
        }
        let mut consumption = PerFuel::splat(0.0);
        for fuel in FuelType::ALL.iter().copied() {
            let col = fuel_column(fuel);
            let x = number(col)?;
            if x < 0.0 {
                return Err(err(col, format!("negative consumption {x}")));
            }
            *consumption.get_mut(fuel) = x * units.to_kwh.get(fuel);
        }
        let vector = FuelVector {
            consumption,
            net_site_energy: number(6)?,
        };
        vector.validate().map_err(|e| err(6, e.to_string()))?;

        let scenario = &row[1];
        let duplicate = if scenario == BASELINE {
            baselines.insert(id.clone(), vector).is_some()
        } else {
            let measure: MeasureId = scenario.parse().map_err(|e| err(1, format!("{e}")))?;
            retrofits
                .entry(id.clone())
                .or_default()
                .insert(measure, vector)
                .is_some()
        };
        if duplicate {
            return Err(err(1, format!("duplicate scenario {scenario:?} for {id}")));
        }
    }

    if let Some(id) = retrofits.keys().find(|id| !baselines.contains_key(*id)) {
        return Err(SynthError::MissingBaseline(id.clone()));
    }
    Ok(baselines
        .into_iter()
        .map(|(id, baseline)| {
            let retrofits = retrofits.remove(&id).unwrap_or_default();
            (
                id,
                SimResult {
                    baseline,
                    retrofits,
                },
            )
        })
        .collect())
}

pub fn ingest_results(
    path: impl AsRef<Path>,
    units: &UnitConversions,
) -> Result<SimDataset, SynthError> {
    read_results(std::fs::File::open(path)?, units)
}
