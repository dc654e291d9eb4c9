//! Model generations and the deterministic mock models used to check the
//! evaluation harness end to end.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::CorpusSample;
use crate::payload::{render_assistant, render_payload, Payload, Precision, RenderError};
use crate::ranker::{Objective, TruthStore};
use crate::seed::rng_for;
use crate::wire::wire_enum;

wire_enum! {
    /// Whether the prompt described the full record or a masked one.
    pub enum Condition: "condition" {
        Complete => "complete",
        Masked => "masked",
    }
}

impl Condition {
    pub fn of(sample: &CorpusSample) -> Condition {
        if sample.mask_seed.is_some() {
            Condition::Masked
        } else {
            Condition::Complete
        }
    }
}

/// One model answer for one sample. `raw_text` is kept exactly as received.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationRecord {
    pub building_id: String,
    pub condition: Condition,
    pub prompt_hash: String,
    pub raw_text: String,
    pub latency_ms: u64,
    pub attempts: u32,
}

/// SHA-256 over the system and user turns.
pub fn prompt_hash(sample: &CorpusSample) -> String {
    let mut h = Sha256::new();
    h.update(sample.system_text().as_bytes());
    h.update([0u8]);
    h.update(sample.user_text().as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("no ground truth for building {0}")]
    MissingTruth(String),
    #[error("building {0}: {1}")]
    Render(String, RenderError),
    #[error("invalid mock parameters: {0}")]
    Params(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
}

/// Emits the ground-truth payload exactly as the corpus renders it.
pub fn mock_perfect(sample: &CorpusSample, store: &TruthStore) -> Result<String, GenerationError> {
    let gt = store
        .get(&sample.building_id)
        .ok_or_else(|| GenerationError::MissingTruth(sample.building_id.clone()))?;
    render_assistant(gt).map_err(|e| GenerationError::Render(sample.building_id.clone(), e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradeParams {
    /// Relative error applied to every number, with a random sign.
    pub noise: f64,
    /// Probability that ranks 1 and 2 trade places, per objective.
    pub swap_prob: f64,
    pub seed: u64,
}

impl DegradeParams {
    pub fn validate(&self) -> Result<(), GenerationError> {
        if !(self.noise.is_finite() && (0.0..1.0).contains(&self.noise)) {
            return Err(GenerationError::Params(format!(
                "noise {} outside [0, 1)",
                self.noise
            )));
        }
        if !(0.0..=1.0).contains(&self.swap_prob) {
            return Err(GenerationError::Params(format!(
                "swap_prob {} outside [0, 1]",
                self.swap_prob
            )));
        }
        Ok(())
    }
}

/// Ground truth with every number moved by exactly `noise` relative error
/// and ranks 1 and 2 swapped with probability `swap_prob`.
pub fn mock_degraded(
    sample: &CorpusSample,
    store: &TruthStore,
    params: &DegradeParams,
) -> Result<String, GenerationError> {
    params.validate()?;
    let gt = store
        .get(&sample.building_id)
        .ok_or_else(|| GenerationError::MissingTruth(sample.building_id.clone()))?;
    let mut rng = rng_for(params.seed, &format!("degraded/{}", sample.building_id));
    let mut payload = Payload::from_truth(gt);
    for &objective in Objective::ALL {
        let list = payload.ranking_mut(objective);
        for option in list.iter_mut() {
            let mut jitter = |x: f64| {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                x * (1.0 + sign * params.noise)
            };
            option.co2_reduction = jitter(option.co2_reduction);
            option.net_site_energy_reduction = jitter(option.net_site_energy_reduction);
            option.retrofit_cost = jitter(option.retrofit_cost);
            option.energy_cost_saving = jitter(option.energy_cost_saving);
            option.dpy = option.dpy.map(&mut jitter);
        }
        if list.len() >= 2 && rng.random_bool(params.swap_prob) {
            list.swap(0, 1);
        }
    }
    Ok(render_payload(&payload, Precision::Exact))
}

/// A deterministic stand-in for a model endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MockModel {
    Perfect,
    Degraded(DegradeParams),
}

/// Runs a mock over every sample, one record each, in input order.
pub fn generate_mock(
    samples: &[CorpusSample],
    store: &TruthStore,
    model: MockModel,
) -> Result<Vec<GenerationRecord>, GenerationError> {
    samples
        .iter()
        .map(|s| {
            let raw_text = match &model {
                MockModel::Perfect => mock_perfect(s, store)?,
                MockModel::Degraded(p) => mock_degraded(s, store, p)?,
            };
            Ok(GenerationRecord {
                building_id: s.building_id.clone(),
                condition: Condition::of(s),
                prompt_hash: prompt_hash(s),
                raw_text,
                latency_ms: 0,
                attempts: 1,
            })
        })
        .collect()
}

pub fn write_generations<W: Write>(
    records: &[GenerationRecord],
    mut out: W,
) -> Result<(), GenerationError> {
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_generations<R: BufRead>(input: R) -> Result<Vec<GenerationRecord>, GenerationError> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|source| GenerationError::Parse {
            line: i + 1,
            source,
        })?;
        records.push(record);
    }
    Ok(records)
}

pub fn save_generations(
    records: &[GenerationRecord],
    path: impl AsRef<Path>,
) -> Result<(), GenerationError> {
    write_generations(records, BufWriter::new(File::create(path)?))
}

pub fn load_generations(path: impl AsRef<Path>) -> Result<Vec<GenerationRecord>, GenerationError> {
    read_generations(BufReader::new(File::open(path)?))
}
