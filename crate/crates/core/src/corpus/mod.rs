//! Fine-tuning corpus: system, user and assistant turns per building, a
//! seeded train/eval split, and masked re-renderings of the eval split.
//!
//! Files written by [`Corpus::write_dir`]:
//!
//! - `train.jsonl`, `eval.jsonl`: one [`CorpusSample`] per line, ordered by
//!   building id.
//! - `metadata.json`: counts, seed, and the SHA-256 of the system prompt.

mod mask;
mod templates;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::{index, IndexedRandom};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::domain::{BuildingRecord, FieldName};
use crate::payload::{render_assistant, RenderError};
use crate::ranker::TruthStore;
use crate::seed::rng_for;
use crate::wire::wire_enum;

pub use mask::{mask_record, MaskPolicy, MaskPolicyError, MAX_MASK_FRACTION};
pub use templates::{clause, render_user, template, FieldOrder, Template, Voice, TEMPLATES};

/// Fixed system turn.
pub const SYSTEM_PROMPT: &str = include_str!("../../config/system_prompt.txt");

pub const DEFAULT_HOLDOUT: usize = 2000;

pub fn system_prompt_sha256() -> String {
    hex::encode(Sha256::digest(SYSTEM_PROMPT.as_bytes()))
}

wire_enum! {
    pub enum Role: "role" {
        System => "system",
        User => "user",
        Assistant => "assistant",
    }
}

wire_enum! {
    pub enum Split: "split" {
        Train => "train",
        Eval => "eval",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSample {
    pub messages: Vec<Message>,
    pub building_id: String,
    pub template_id: u8,
    pub split: Split,
    pub masked_fields: Vec<FieldName>,
    /// Seed of the mask policy, when the user turn was rendered from a
    /// masked record.
    pub mask_seed: Option<u64>,
}

impl CorpusSample {
    fn content(&self, role: Role) -> &str {
        self.messages
            .iter()
            .find(|m| m.role == role)
            .map_or("", |m| m.content.as_str())
    }

    pub fn system_text(&self) -> &str {
        self.content(Role::System)
    }

    pub fn user_text(&self) -> &str {
        self.content(Role::User)
    }

    pub fn assistant_text(&self) -> &str {
        self.content(Role::Assistant)
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{have} records cannot supply a holdout of {holdout}")]
    InsufficientRecords { have: usize, holdout: usize },
    #[error("building id {0:?} appears more than once")]
    DuplicateBuildingId(String),
    #[error("no ground truth for building {0}")]
    MissingTruth(String),
    #[error("building {0}: {1}")]
    Render(String, RenderError),
    #[error(transparent)]
    MaskPolicy(#[from] MaskPolicyError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusConfig {
    pub holdout: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            holdout: DEFAULT_HOLDOUT,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusMetadata {
    pub seed: u64,
    pub holdout: usize,
    pub n_train: usize,
    pub n_eval: usize,
    pub system_prompt_sha256: String,
    pub template_weights: BTreeMap<u8, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub train: Vec<CorpusSample>,
    pub eval: Vec<CorpusSample>,
    pub metadata: CorpusMetadata,
}

/// The template used for a building, drawn by weight from a stream seeded
/// by the corpus seed and the building id.
pub fn draw_template(seed: u64, building_id: &str) -> &'static Template {
    let mut rng = rng_for(seed, &format!("template/{building_id}"));
    TEMPLATES
        .choose_weighted(&mut rng, |t| t.weight)
        .expect("template weights are positive")
}

fn sample(
    record: &BuildingRecord,
    template: &Template,
    assistant: String,
    split: Split,
    masked_fields: Vec<FieldName>,
    mask_seed: Option<u64>,
) -> CorpusSample {
    CorpusSample {
        messages: vec![
            Message {
                role: Role::System,
                content: SYSTEM_PROMPT.to_string(),
            },
            Message {
                role: Role::User,
                content: render_user(record, template),
            },
            Message {
                role: Role::Assistant,
                content: assistant,
            },
        ],
        building_id: record.building_id.clone(),
        template_id: template.id,
        split,
        masked_fields,
        mask_seed,
    }
}

/// One sample per building; a seeded uniform draw of `holdout` buildings
/// goes to the eval split.
pub fn build_corpus(
    records: &[BuildingRecord],
    truth: &TruthStore,
    config: CorpusConfig,
) -> Result<Corpus, CorpusError> {
    if records.len() <= config.holdout {
        return Err(CorpusError::InsufficientRecords {
            have: records.len(),
            holdout: config.holdout,
        });
    }
    let mut sorted: Vec<&BuildingRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.building_id.cmp(&b.building_id));
    if let Some(w) = sorted
        .windows(2)
        .find(|w| w[0].building_id == w[1].building_id)
    {
        return Err(CorpusError::DuplicateBuildingId(w[0].building_id.clone()));
    }

    let mut rng = rng_for(config.seed, "holdout");
    let held: BTreeSet<usize> = index::sample(&mut rng, sorted.len(), config.holdout)
        .into_iter()
        .collect();

    let mut train = Vec::with_capacity(sorted.len() - config.holdout);
    let mut eval = Vec::with_capacity(config.holdout);
    for (i, record) in sorted.into_iter().enumerate() {
        let id = &record.building_id;
        let gt = truth
            .get(id)
            .ok_or_else(|| CorpusError::MissingTruth(id.clone()))?;
        let assistant = render_assistant(gt).map_err(|e| CorpusError::Render(id.clone(), e))?;
        let template = draw_template(config.seed, id);
        if held.contains(&i) {
            eval.push(sample(
                record,
                template,
                assistant,
                Split::Eval,
                vec![],
                None,
            ));
        } else {
            train.push(sample(
                record,
                template,
                assistant,
                Split::Train,
                vec![],
                None,
            ));
        }
    }

    let metadata = CorpusMetadata {
        seed: config.seed,
        holdout: config.holdout,
        n_train: train.len(),
        n_eval: eval.len(),
        system_prompt_sha256: system_prompt_sha256(),
        template_weights: TEMPLATES.iter().map(|t| (t.id, t.weight)).collect(),
    };
    Ok(Corpus {
        train,
        eval,
        metadata,
    })
}

/// Re-render eval samples from masked records. Each sample keeps its
/// template and assistant turn.
pub fn mask_samples(
    samples: &[CorpusSample],
    records: &[BuildingRecord],
    policy: &MaskPolicy,
) -> Result<Vec<CorpusSample>, CorpusError> {
    policy.validate()?;
    let by_id: BTreeMap<&str, &BuildingRecord> = records
        .iter()
        .map(|r| (r.building_id.as_str(), r))
        .collect();
    samples
        .iter()
        .map(|s| {
            let record = by_id
                .get(s.building_id.as_str())
                .ok_or_else(|| CorpusError::MissingTruth(s.building_id.clone()))?;
            let template = template(s.template_id).expect("samples carry valid template ids");
            let (masked, fields) = mask_record(record, policy);
            Ok(sample(
                &masked,
                template,
                s.assistant_text().to_string(),
                s.split,
                fields,
                Some(policy.seed),
            ))
        })
        .collect()
}

pub fn write_samples<W: Write>(samples: &[CorpusSample], mut out: W) -> Result<(), CorpusError> {
    for s in samples {
        serde_json::to_writer(&mut out, s).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_samples<R: BufRead>(input: R) -> Result<Vec<CorpusSample>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| CorpusError::Parse {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(out)
}

pub fn save_samples(samples: &[CorpusSample], path: impl AsRef<Path>) -> Result<(), CorpusError> {
    write_samples(samples, BufWriter::new(std::fs::File::create(path)?))
}

pub fn load_samples(path: impl AsRef<Path>) -> Result<Vec<CorpusSample>, CorpusError> {
    read_samples(BufReader::new(std::fs::File::open(path)?))
}

impl Corpus {
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<(), CorpusError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        save_samples(&self.train, dir.join("train.jsonl"))?;
        save_samples(&self.eval, dir.join("eval.jsonl"))?;
        let meta = serde_json::to_string_pretty(&self.metadata).map_err(std::io::Error::from)?;
        std::fs::write(dir.join("metadata.json"), meta + "\n")?;
        Ok(())
    }

    pub fn samples(&self) -> impl Iterator<Item = &CorpusSample> {
        self.train.iter().chain(&self.eval)
    }
}
