//! Simulation results to outcomes to ground truth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    ApplianceSet, BuildingGeometry, BuildingRecord, FuelVector, MeasureId, OutcomeRecord, RateTable,
};
use crate::econ::{compute_outcome, CostBasis, EconError};
use crate::ranker::{GroundTruth, RankError, TruthStore};
use crate::synth::{gen_buildings, surrogate_simulate, SimResult, SurrogateParams, SynthError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("building {0}: {1}")]
    Econ(String, EconError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("building {0}: no simulation results")]
    MissingResults(String),
}

/// One simulated dwelling: what the advisor stores and re-derives from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prototype {
    pub record: BuildingRecord,
    pub geometry: BuildingGeometry,
    pub baseline: FuelVector,
    pub retrofits: BTreeMap<MeasureId, FuelVector>,
    /// Full-precision outcomes, one per simulated measure.
    pub outcomes: Vec<OutcomeRecord>,
}

impl Prototype {
    pub fn new(
        record: BuildingRecord,
        geometry: BuildingGeometry,
        sim: SimResult,
        rates: &RateTable,
    ) -> Result<Self, PipelineError> {
        let basis = CostBasis {
            geometry,
            appliances: ApplianceSet::from_record(&record),
        };
        let id = &record.building_id;
        let outcomes = sim
            .retrofits
            .iter()
            .map(|(&measure, after)| {
                compute_outcome(id, &sim.baseline, after, measure, &basis, rates)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| PipelineError::Econ(id.clone(), e))?;
        Ok(Prototype {
            record,
            geometry,
            baseline: sim.baseline,
            retrofits: sim.retrofits,
            outcomes,
        })
    }

    pub fn ground_truth(&self) -> Result<GroundTruth, RankError> {
        GroundTruth::from_outcomes(&self.record.building_id, &self.outcomes)
    }
}

/// Prototypes from externally simulated results (e.g. an ingested CSV).
pub fn prototypes_from_results(
    buildings: Vec<(BuildingRecord, BuildingGeometry)>,
    results: &mut crate::synth::SimDataset,
    rates: &RateTable,
) -> Result<Vec<Prototype>, PipelineError> {
    buildings
        .into_iter()
        .map(|(record, geometry)| {
            let sim = results
                .remove(&record.building_id)
                .ok_or_else(|| PipelineError::MissingResults(record.building_id.clone()))?;
            Prototype::new(record, geometry, sim, rates)
        })
        .collect()
}

pub fn truth_store(prototypes: &[Prototype]) -> Result<TruthStore, RankError> {
    let mut store = TruthStore::new();
    for p in prototypes {
        store.insert(p.ground_truth()?)?;
    }
    Ok(store)
}

#[derive(Debug, Clone)]
pub struct SyntheticRun {
    pub prototypes: Vec<Prototype>,
    pub truth: TruthStore,
}

/// Generate `n` dwellings, simulate them with the surrogate, and rank.
pub fn run_synthetic(
    n: usize,
    seed: u64,
    params: &SurrogateParams,
    rates: &RateTable,
) -> Result<SyntheticRun, PipelineError> {
    params.validate()?;
    let prototypes = gen_buildings(n, seed)
        .into_iter()
        .map(|(record, geometry)| {
            let sim = surrogate_simulate(&record, &geometry, params)?;
            Prototype::new(record, geometry, sim, rates)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let truth = truth_store(&prototypes)?;
    Ok(SyntheticRun { prototypes, truth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranker::Objective;

    #[test]
    fn deterministic_store() {
        let params = SurrogateParams::default();
        let rates = RateTable::default();
        let a = run_synthetic(20, 4, &params, &rates).unwrap();
        let b = run_synthetic(20, 4, &params, &rates).unwrap();
        assert_eq!(a.truth.to_bytes(), b.truth.to_bytes());
        assert_eq!(a.truth.len(), 20);
        for p in &a.prototypes {
            assert_eq!(p.outcomes.len(), 9);
        }
    }

    #[test]
    fn rankings_have_room_for_a_swap() {
        let run =
            run_synthetic(500, 1, &SurrogateParams::default(), &RateTable::default()).unwrap();
        for gt in run.truth.iter() {
            assert_eq!(gt.ranking(Objective::MaxCo2Reduction).len(), 3);
            assert!(
                gt.ranking(Objective::MinDpy).len() >= 2,
                "{}",
                gt.building_id
            );
        }
    }
}
