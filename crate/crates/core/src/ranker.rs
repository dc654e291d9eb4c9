//! Ground truth: the top-3 measures per building under each objective.
//!
//! Stored outcome numbers are quantized to the precision the assistant
//! payload carries (0.1 for kg, kWh and USD/yr; whole USD for retrofit cost),
//! so the store, the corpus, and the evaluator see identical values.
//! Ranking itself runs on full-precision outcomes.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::domain::{OutcomeRecord, PaybackResult};
use crate::wire::wire_enum;

wire_enum! {
    pub enum Objective: "objective" {
        MaxCo2Reduction => "max_co2_reduction",
        MinDpy => "min_dpy",
    }
}

/// Maximum list length per objective.
pub const TOP_K: usize = 3;
/// Options paying back later than this are excluded from DPY rankings.
pub const DPY_CUTOFF_YEARS: u32 = 100;

#[derive(Debug, Error)]
pub enum RankError {
    #[error("no outcomes to rank")]
    EmptyOutcomeSet,
    #[error("building id {0:?} appears more than once")]
    DuplicateBuildingId(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn canonical(a: &OutcomeRecord, b: &OutcomeRecord) -> Ordering {
    a.measure.cmp(&b.measure)
}

/// Largest CO₂ reduction first; ties in catalog order. Options without a
/// payback stay eligible.
pub fn rank_co2(outcomes: &[OutcomeRecord]) -> Result<Vec<OutcomeRecord>, RankError> {
    if outcomes.is_empty() {
        return Err(RankError::EmptyOutcomeSet);
    }
    let mut ranked = outcomes.to_vec();
    ranked.sort_by(|a, b| {
        b.co2_reduction
            .total_cmp(&a.co2_reduction)
            .then_with(|| canonical(a, b))
    });
    ranked.truncate(TOP_K);
    Ok(ranked)
}

/// Whether an option may appear in a DPY ranking.
pub fn dpy_eligible(outcome: &OutcomeRecord) -> bool {
    matches!(outcome.dpy, PaybackResult::Finite(n) if n <= DPY_CUTOFF_YEARS)
}

/// Shortest payback first, excluding no-payback and > 100 years. Ties go to
/// the larger annual saving, then catalog order. May return fewer than three
/// (or zero) options.
pub fn rank_dpy(outcomes: &[OutcomeRecord]) -> Result<Vec<OutcomeRecord>, RankError> {
    if outcomes.is_empty() {
        return Err(RankError::EmptyOutcomeSet);
    }
    let mut ranked: Vec<OutcomeRecord> = outcomes
        .iter()
        .filter(|o| dpy_eligible(o))
        .cloned()
        .collect();
    ranked.sort_by(|a, b| {
        a.dpy
            .years()
            .cmp(&b.dpy.years())
            .then_with(|| b.energy_cost_saving.total_cmp(&a.energy_cost_saving))
            .then_with(|| canonical(a, b))
    });
    ranked.truncate(TOP_K);
    Ok(ranked)
}

pub fn rank(
    objective: Objective,
    outcomes: &[OutcomeRecord],
) -> Result<Vec<OutcomeRecord>, RankError> {
    match objective {
        Objective::MaxCo2Reduction => rank_co2(outcomes),
        Objective::MinDpy => rank_dpy(outcomes),
    }
}

fn round_to(x: f64, scale: f64) -> f64 {
    // `+ 0.0` folds -0.0 into 0.0
    (x * scale).round() / scale + 0.0
}

/// Round an outcome to payload precision.
pub fn quantize(outcome: &OutcomeRecord) -> OutcomeRecord {
    OutcomeRecord {
        co2_reduction: round_to(outcome.co2_reduction, 10.0),
        net_site_energy_reduction: round_to(outcome.net_site_energy_reduction, 10.0),
        energy_cost_saving: round_to(outcome.energy_cost_saving, 10.0),
        retrofit_cost: round_to(outcome.retrofit_cost, 1.0),
        ..outcome.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruth {
    pub building_id: String,
    pub max_co2_reduction: Vec<OutcomeRecord>,
    pub min_dpy: Vec<OutcomeRecord>,
}

impl GroundTruth {
    pub fn from_outcomes(building_id: &str, outcomes: &[OutcomeRecord]) -> Result<Self, RankError> {
        let q = |v: Vec<OutcomeRecord>| v.iter().map(quantize).collect();
        Ok(GroundTruth {
            building_id: building_id.to_string(),
            max_co2_reduction: q(rank_co2(outcomes)?),
            min_dpy: q(rank_dpy(outcomes)?),
        })
    }

    pub fn ranking(&self, objective: Objective) -> &[OutcomeRecord] {
        match objective {
            Objective::MaxCo2Reduction => &self.max_co2_reduction,
            Objective::MinDpy => &self.min_dpy,
        }
    }

    pub fn ranking_mut(&mut self, objective: Objective) -> &mut Vec<OutcomeRecord> {
        match objective {
            Objective::MaxCo2Reduction => &mut self.max_co2_reduction,
            Objective::MinDpy => &mut self.min_dpy,
        }
    }
}

pub const STORE_SCHEMA: &str = "retrofit-ground-truth";
pub const STORE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoreHeader {
    schema: String,
    version: u32,
    count: usize,
}

/// Ground truth keyed by building id.
///
/// On disk: a header line `{"schema":"retrofit-ground-truth","version":1,"count":N}`
/// followed by one `GroundTruth` JSON object per line, ordered by building id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TruthStore {
    entries: BTreeMap<String, GroundTruth>,
}

impl TruthStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, truth: GroundTruth) -> Result<(), RankError> {
        if self.entries.contains_key(&truth.building_id) {
            return Err(RankError::DuplicateBuildingId(truth.building_id));
        }
        self.entries.insert(truth.building_id.clone(), truth);
        Ok(())
    }

    pub fn get(&self, building_id: &str) -> Option<&GroundTruth> {
        self.entries.get(building_id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundTruth> {
        self.entries.values()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<(), RankError> {
        let header = StoreHeader {
            schema: STORE_SCHEMA.to_string(),
            version: STORE_VERSION,
            count: self.entries.len(),
        };
        serde_json::to_writer(&mut out, &header).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
        for truth in self.entries.values() {
            serde_json::to_writer(&mut out, truth).map_err(std::io::Error::from)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        buf
    }

    /// SHA-256 of the serialized store, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_bytes()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), RankError> {
        std::fs::write(path, self.to_bytes())?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self, RankError> {
        let mut lines = input.lines();
        let parse_err = |line: usize, e: &dyn std::fmt::Display| RankError::Parse {
            line,
            message: e.to_string(),
        };
        let header_line = lines
            .next()
            .ok_or_else(|| parse_err(1, &"missing header"))??;
        let header: StoreHeader =
            serde_json::from_str(&header_line).map_err(|e| parse_err(1, &e))?;
        if header.schema != STORE_SCHEMA || header.version != STORE_VERSION {
            return Err(parse_err(
                1,
                &format!("unsupported store {} v{}", header.schema, header.version),
            ));
        }
        let mut store = TruthStore::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let truth: GroundTruth =
                serde_json::from_str(&line).map_err(|e| parse_err(i + 2, &e))?;
            store.insert(truth)?;
        }
        if store.len() != header.count {
            return Err(parse_err(
                1,
                &format!("header count {} but {} entries", header.count, store.len()),
            ));
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RankError> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

/// Rank every building and collect the results.
pub fn build_ground_truth<I>(per_building: I) -> Result<TruthStore, RankError>
where
    I: IntoIterator<Item = (String, Vec<OutcomeRecord>)>,
{
    let mut store = TruthStore::new();
    for (building_id, outcomes) in per_building {
        store.insert(GroundTruth::from_outcomes(&building_id, &outcomes)?)?;
    }
    Ok(store)
}
