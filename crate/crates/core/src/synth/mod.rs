//! Desk-scale stand-in for the simulation stage: synthetic dwellings, a
//! surrogate energy model, and CSV exchange of per-scenario results.

mod generate;
mod results;
mod surrogate;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::domain::{FuelVector, HvacResolveError, MeasureId};

pub use generate::{building_id, gen_building, gen_buildings};
pub use results::{export_results, ingest_results, read_results, write_results, RESULTS_HEADER};
pub use surrogate::{surrogate_simulate, SurrogateParams, MULTIPLIER_RANGE};

/// Annual consumption before and after each applicable measure.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimResult {
    pub baseline: FuelVector,
    pub retrofits: BTreeMap<MeasureId, FuelVector>,
}

/// Results keyed by building id.
pub type SimDataset = BTreeMap<String, SimResult>;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid surrogate parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Hvac(#[from] HvacResolveError),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },
    #[error("building {0} has retrofit rows but no baseline row")]
    MissingBaseline(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
