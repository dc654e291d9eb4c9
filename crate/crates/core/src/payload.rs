//! The structured answer block shared by the corpus and the evaluator.
//!
//! ```json
//! {"max_co2_reduction":[{"rank":1,"measure":"hvac_upgrade:natural_gas_furnace",
//!   "co2_reduction_kg":812.4,"net_site_energy_reduction_kwh":4120.0,
//!   "retrofit_cost_usd":14185,"energy_cost_saving_usd":164.8,"dpy":null}],
//!  "min_dpy":[...]}
//! ```
//!
//! Both objective keys are required, each holding at most three entries with
//! `rank` equal to list position. `dpy` is `null` when the option never pays
//! back. No other keys are accepted.

use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::domain::{MeasureId, OutcomeRecord, PaybackResult};
use crate::ranker::{GroundTruth, Objective, TOP_K};

pub const ENTRY_FIELDS: [&str; 7] = [
    "rank",
    "measure",
    "co2_reduction_kg",
    "net_site_energy_reduction_kwh",
    "retrofit_cost_usd",
    "energy_cost_saving_usd",
    "dpy",
];

/// One recommended option as stated by a model.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedOption {
    pub measure: MeasureId,
    pub co2_reduction: f64,
    pub net_site_energy_reduction: f64,
    pub retrofit_cost: f64,
    pub energy_cost_saving: f64,
    /// Years; `None` for no payback. May be fractional in model output.
    pub dpy: Option<f64>,
}

impl From<&OutcomeRecord> for PredictedOption {
    fn from(o: &OutcomeRecord) -> Self {
        PredictedOption {
            measure: o.measure,
            co2_reduction: o.co2_reduction,
            net_site_energy_reduction: o.net_site_energy_reduction,
            retrofit_cost: o.retrofit_cost,
            energy_cost_saving: o.energy_cost_saving,
            dpy: o.dpy.years().map(f64::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Payload {
    pub max_co2_reduction: Vec<PredictedOption>,
    pub min_dpy: Vec<PredictedOption>,
}

impl Payload {
    pub fn from_truth(gt: &GroundTruth) -> Self {
        let conv = |v: &[OutcomeRecord]| v.iter().map(PredictedOption::from).collect();
        Payload {
            max_co2_reduction: conv(&gt.max_co2_reduction),
            min_dpy: conv(&gt.min_dpy),
        }
    }

    pub fn ranking(&self, objective: Objective) -> &[PredictedOption] {
        match objective {
            Objective::MaxCo2Reduction => &self.max_co2_reduction,
            Objective::MinDpy => &self.min_dpy,
        }
    }

    pub fn ranking_mut(&mut self, objective: Objective) -> &mut Vec<PredictedOption> {
        match objective {
            Objective::MaxCo2Reduction => &mut self.max_co2_reduction,
            Objective::MinDpy => &mut self.min_dpy,
        }
    }

    /// Convert back to ground truth. Fails when a `dpy` is not a whole
    /// number of years.
    pub fn to_truth(&self, building_id: &str) -> Result<GroundTruth, InvalidReason> {
        let conv = |v: &[PredictedOption]| -> Result<Vec<OutcomeRecord>, InvalidReason> {
            v.iter()
                .map(|p| {
                    let dpy = match p.dpy {
                        None => PaybackResult::NoPayback,
                        Some(y) if y >= 1.0 && y.fract() == 0.0 && y <= u32::MAX as f64 => {
                            PaybackResult::Finite(y as u32)
                        }
                        Some(_) => return Err(InvalidReason::BadValue("dpy")),
                    };
                    Ok(OutcomeRecord {
                        building_id: building_id.to_string(),
                        measure: p.measure,
                        co2_reduction: p.co2_reduction,
                        net_site_energy_reduction: p.net_site_energy_reduction,
                        energy_cost_saving: p.energy_cost_saving,
                        retrofit_cost: p.retrofit_cost,
                        dpy,
                    })
                })
                .collect()
        };
        Ok(GroundTruth {
            building_id: building_id.to_string(),
            max_co2_reduction: conv(&self.max_co2_reduction)?,
            min_dpy: conv(&self.min_dpy)?,
        })
    }
}

/// How numbers are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// 1 decimal for kg, kWh and USD/yr; whole numbers for cost and DPY.
    Fixed,
    /// Shortest representation that parses back to the same `f64`.
    Exact,
}

fn push_number(out: &mut String, x: f64, decimals: usize, precision: Precision) {
    // `+ 0.0` avoids printing "-0.0"
    let x = x + 0.0;
    match precision {
        Precision::Fixed => write!(out, "{x:.decimals$}"),
        Precision::Exact => write!(out, "{x}"),
    }
    .expect("writing to a String");
}

pub fn render_payload(payload: &Payload, precision: Precision) -> String {
    let mut out = String::from("{");
    for (i, objective) in Objective::ALL.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "\"{objective}\":[").expect("writing to a String");
        for (rank, p) in payload.ranking(*objective).iter().enumerate() {
            if rank > 0 {
                out.push(',');
            }
            write!(
                out,
                "{{\"rank\":{},\"measure\":\"{}\",\"co2_reduction_kg\":",
                rank + 1,
                p.measure
            )
            .expect("writing to a String");
            push_number(&mut out, p.co2_reduction, 1, precision);
            out.push_str(",\"net_site_energy_reduction_kwh\":");
            push_number(&mut out, p.net_site_energy_reduction, 1, precision);
            out.push_str(",\"retrofit_cost_usd\":");
            push_number(&mut out, p.retrofit_cost, 0, precision);
            out.push_str(",\"energy_cost_saving_usd\":");
            push_number(&mut out, p.energy_cost_saving, 1, precision);
            out.push_str(",\"dpy\":");
            match p.dpy {
                Some(y) => push_number(&mut out, y, 0, precision),
                None => out.push_str("null"),
            }
            out.push('}');
        }
        out.push(']');
    }
    out.push('}');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("ground truth has no options under either objective")]
    EmptyGroundTruth,
}

/// The assistant turn for one building.
pub fn render_assistant(gt: &GroundTruth) -> Result<String, RenderError> {
    if gt.max_co2_reduction.is_empty() && gt.min_dpy.is_empty() {
        return Err(RenderError::EmptyGroundTruth);
    }
    Ok(render_payload(&Payload::from_truth(gt), Precision::Fixed))
}

/// Why an output failed the schema. The first violation found is reported.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidReason {
    #[error("not valid JSON")]
    InvalidJson,
    #[error("top level is not an object")]
    NotAnObject,
    #[error("unexpected key {0:?}")]
    UnknownKey(String),
    #[error("objective {0} is missing")]
    MissingObjective(Objective),
    #[error("objective {0} is not a list")]
    NotAList(Objective),
    #[error("objective {0} has more than three entries")]
    TooManyEntries(Objective),
    #[error("an entry is not an object")]
    EntryNotObject,
    #[error("entry is missing field {0}")]
    MissingField(&'static str),
    #[error("entry has unexpected field {0:?}")]
    UnknownField(String),
    #[error("rank does not match list position")]
    BadRank,
    #[error("unknown measure {0:?}")]
    UnknownMeasure(String),
    #[error("measure {0} listed twice under one objective")]
    DuplicateMeasure(MeasureId),
    #[error("field {0} has an invalid value")]
    BadValue(&'static str),
    #[error("empty response")]
    EmptyResponse,
}

impl InvalidReason {
    /// Stable name for histograms.
    pub fn kind(&self) -> &'static str {
        match self {
            InvalidReason::InvalidJson => "invalid_json",
            InvalidReason::NotAnObject => "not_an_object",
            InvalidReason::UnknownKey(_) => "unknown_key",
            InvalidReason::MissingObjective(_) => "missing_objective",
            InvalidReason::NotAList(_) => "not_a_list",
            InvalidReason::TooManyEntries(_) => "too_many_entries",
            InvalidReason::EntryNotObject => "entry_not_object",
            InvalidReason::MissingField(_) => "missing_field",
            InvalidReason::UnknownField(_) => "unknown_field",
            InvalidReason::BadRank => "bad_rank",
            InvalidReason::UnknownMeasure(_) => "unknown_measure",
            InvalidReason::DuplicateMeasure(_) => "duplicate_measure",
            InvalidReason::BadValue(_) => "bad_value",
            InvalidReason::EmptyResponse => "empty_response",
        }
    }
}

fn number(entry: &Map<String, Value>, field: &'static str) -> Result<f64, InvalidReason> {
    entry
        .get(field)
        .ok_or(InvalidReason::MissingField(field))?
        .as_f64()
        .filter(|x| x.is_finite())
        .ok_or(InvalidReason::BadValue(field))
}

fn parse_entry(value: &Value, position: usize) -> Result<PredictedOption, InvalidReason> {
    let entry = value.as_object().ok_or(InvalidReason::EntryNotObject)?;
    if let Some(key) = entry.keys().find(|k| !ENTRY_FIELDS.contains(&k.as_str())) {
        return Err(InvalidReason::UnknownField(key.clone()));
    }
    let rank = number(entry, "rank")?;
    if rank != (position + 1) as f64 {
        return Err(InvalidReason::BadRank);
    }
    let measure = match entry.get("measure") {
        None => return Err(InvalidReason::MissingField("measure")),
        Some(Value::String(s)) => s
            .parse::<MeasureId>()
            .map_err(|_| InvalidReason::UnknownMeasure(s.clone()))?,
        Some(_) => return Err(InvalidReason::BadValue("measure")),
    };
    let dpy = match entry.get("dpy") {
        None => return Err(InvalidReason::MissingField("dpy")),
        Some(Value::Null) => None,
        Some(v) => Some(
            v.as_f64()
                .filter(|y| y.is_finite() && *y > 0.0)
                .ok_or(InvalidReason::BadValue("dpy"))?,
        ),
    };
    Ok(PredictedOption {
        measure,
        co2_reduction: number(entry, "co2_reduction_kg")?,
        net_site_energy_reduction: number(entry, "net_site_energy_reduction_kwh")?,
        retrofit_cost: number(entry, "retrofit_cost_usd")?,
        energy_cost_saving: number(entry, "energy_cost_saving_usd")?,
        dpy,
    })
}

/// Strict parse: the whole text must be one schema-conformant JSON object.
pub fn parse_payload(text: &str) -> Result<Payload, InvalidReason> {
    if text.trim().is_empty() {
        return Err(InvalidReason::EmptyResponse);
    }
    let value: Value = serde_json::from_str(text).map_err(|_| InvalidReason::InvalidJson)?;
    let top = value.as_object().ok_or(InvalidReason::NotAnObject)?;
    if let Some(key) = top.keys().find(|k| k.parse::<Objective>().is_err()) {
        return Err(InvalidReason::UnknownKey(key.clone()));
    }
    let mut payload = Payload::default();
    for &objective in Objective::ALL {
        let list = top
            .get(objective.as_str())
            .ok_or(InvalidReason::MissingObjective(objective))?
            .as_array()
            .ok_or(InvalidReason::NotAList(objective))?;
        if list.len() > TOP_K {
            return Err(InvalidReason::TooManyEntries(objective));
        }
        let ranking = payload.ranking_mut(objective);
        for (i, v) in list.iter().enumerate() {
            let option = parse_entry(v, i)?;
            if ranking.iter().any(|p| p.measure == option.measure) {
                return Err(InvalidReason::DuplicateMeasure(option.measure));
            }
            ranking.push(option);
        }
    }
    Ok(payload)
}
