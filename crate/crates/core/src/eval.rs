//! Scoring model generations against ground truth.
//!
//! Selection metrics (Top-1, Top-3, NDCG@3) are averaged over valid cases
//! whose baseline list for the objective is non-empty. MAPE is pooled over
//! both objectives and only uses options the model placed at the same rank
//! as the baseline.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{MeasureId, OutcomeRecord};
use crate::generation::{Condition, GenerationRecord};
use crate::payload::{parse_payload, InvalidReason, Payload, PredictedOption};
use crate::ranker::{dpy_eligible, Objective, TruthStore, TOP_K};
use crate::wire::wire_enum;

/// Relevance of baseline ranks 1, 2, 3.
pub const RELEVANCE: [u32; TOP_K] = [3, 2, 1];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("baseline ranking is empty")]
    EmptyBaseline,
    #[error("no ground truth for building {0}")]
    MissingTruth(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedOutput {
    Valid(Payload),
    Invalid(InvalidReason),
}

impl ParsedOutput {
    pub fn is_valid(&self) -> bool {
        matches!(self, ParsedOutput::Valid(_))
    }
}

/// Strict schema check; no repair of near misses.
pub fn parse_output(raw: &str) -> ParsedOutput {
    match parse_payload(raw) {
        Ok(p) => ParsedOutput::Valid(p),
        Err(e) => ParsedOutput::Invalid(e),
    }
}

pub fn top1_hit(model: &[MeasureId], baseline: &[MeasureId]) -> bool {
    matches!((model.first(), baseline.first()), (Some(m), Some(b)) if m == b)
}

pub fn top3_hit(model: &[MeasureId], baseline: &[MeasureId]) -> bool {
    baseline
        .first()
        .is_some_and(|b| model.iter().take(TOP_K).any(|m| m == b))
}

fn gain(rel: u32, position: usize) -> f64 {
    (2f64.powi(rel as i32) - 1.0) / ((position + 2) as f64).log2()
}

/// NDCG@3 with relevance 3/2/1 for baseline ranks 1/2/3.
pub fn ndcg_at_3(model: &[MeasureId], baseline: &[MeasureId]) -> Result<f64, EvalError> {
    if baseline.is_empty() {
        return Err(EvalError::EmptyBaseline);
    }
    let baseline = &baseline[..baseline.len().min(TOP_K)];
    let dcg: f64 = model
        .iter()
        .take(TOP_K)
        .enumerate()
        .filter_map(|(i, m)| {
            let j = baseline.iter().position(|b| b == m)?;
            Some(gain(RELEVANCE[j], i))
        })
        .sum();
    let idcg: f64 = (0..baseline.len()).map(|i| gain(RELEVANCE[i], i)).sum();
    Ok(dcg / idcg)
}

/// Rank positions (0-based) where model and baseline name the same measure.
pub fn match_positions(model: &[MeasureId], baseline: &[MeasureId]) -> Vec<usize> {
    model
        .iter()
        .zip(baseline)
        .enumerate()
        .filter(|(_, (m, b))| m == b)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MapeStat {
    /// Percent; `None` when nothing was scored.
    pub mape_percent: Option<f64>,
    /// Matched options offered to this field.
    pub n_matched: usize,
    /// Options that entered the mean.
    pub n_scored: usize,
    /// Matched options with a zero baseline value.
    pub n_zero_excluded: usize,
    /// Matched options with an eligible baseline DPY but a null prediction.
    pub n_missing_prediction: usize,
}

/// Mean absolute percentage error over `(baseline, predicted)` pairs.
/// Zero baselines are skipped and counted.
pub fn mape(pairs: &[(f64, f64)]) -> MapeStat {
    let mut stat = MapeStat {
        n_matched: pairs.len(),
        ..Default::default()
    };
    let mut sum = 0.0;
    for &(y, y_hat) in pairs {
        if y == 0.0 {
            stat.n_zero_excluded += 1;
            continue;
        }
        sum += ((y - y_hat) / y).abs();
        stat.n_scored += 1;
    }
    if stat.n_scored > 0 {
        stat.mape_percent = Some(sum / stat.n_scored as f64 * 100.0);
    }
    stat
}

wire_enum! {
    pub enum Field: "field" {
        Co2Reduction => "co2_reduction",
        NetSiteEnergyReduction => "net_site_energy_reduction",
        RetrofitCost => "retrofit_cost",
        Dpy => "dpy",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveReport {
    pub n_total: usize,
    pub n_valid: usize,
    /// Valid cases with a non-empty baseline list; the rate denominator.
    pub n_scored: usize,
    pub top1_hits: usize,
    pub top1_accuracy: Option<f64>,
    pub top3_hits: usize,
    pub top3_hit_rate: Option<f64>,
    pub ndcg_at_3: Option<f64>,
    pub n_matched_options: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub condition: Condition,
    pub n_total: usize,
    pub n_valid: usize,
    pub objectives: BTreeMap<Objective, ObjectiveReport>,
    pub mape: BTreeMap<Field, MapeStat>,
    pub invalid_reasons: BTreeMap<String, usize>,
}

fn measures_of_truth(list: &[OutcomeRecord]) -> Vec<MeasureId> {
    list.iter().map(|o| o.measure).collect()
}

fn measures_of_payload(list: &[PredictedOption]) -> Vec<MeasureId> {
    list.iter().map(|o| o.measure).collect()
}

fn ratio(hits: usize, n: usize) -> Option<f64> {
    (n > 0).then(|| hits as f64 / n as f64)
}

/// Scores every generation tagged with `condition`; others are ignored.
pub fn evaluate_run(
    generations: &[GenerationRecord],
    store: &TruthStore,
    condition: Condition,
) -> Result<EvalReport, EvalError> {
    let mut n_total = 0;
    let mut n_valid = 0;
    let mut invalid_reasons = BTreeMap::new();
    let mut hits = BTreeMap::<Objective, (usize, usize, usize, f64, usize)>::new();
    let mut pairs = BTreeMap::<Field, Vec<(f64, f64)>>::new();
    let mut missing_dpy = 0;

    for g in generations.iter().filter(|g| g.condition == condition) {
        let truth = store
            .get(&g.building_id)
            .ok_or_else(|| EvalError::MissingTruth(g.building_id.clone()))?;
        n_total += 1;
        let payload = match parse_output(&g.raw_text) {
            ParsedOutput::Valid(p) => p,
            ParsedOutput::Invalid(reason) => {
                *invalid_reasons
                    .entry(reason.kind().to_string())
                    .or_insert(0) += 1;
                continue;
            }
        };
        n_valid += 1;
        for &objective in Objective::ALL {
            let baseline = truth.ranking(objective);
            let predicted = payload.ranking(objective);
            let (b, m) = (measures_of_truth(baseline), measures_of_payload(predicted));
            let entry = hits.entry(objective).or_default();
            let matched = match_positions(&m, &b);
            entry.4 += matched.len();
            for i in matched {
                let (y, y_hat) = (&baseline[i], &predicted[i]);
                let push =
                    |pairs: &mut BTreeMap<Field, Vec<_>>, f, v| pairs.entry(f).or_default().push(v);
                push(
                    &mut pairs,
                    Field::Co2Reduction,
                    (y.co2_reduction, y_hat.co2_reduction),
                );
                push(
                    &mut pairs,
                    Field::NetSiteEnergyReduction,
                    (y.net_site_energy_reduction, y_hat.net_site_energy_reduction),
                );
                push(
                    &mut pairs,
                    Field::RetrofitCost,
                    (y.retrofit_cost, y_hat.retrofit_cost),
                );
                if dpy_eligible(y) {
                    let years = y
                        .dpy
                        .years()
                        .map(f64::from)
                        .expect("eligible options pay back");
                    match y_hat.dpy {
                        Some(p) => push(&mut pairs, Field::Dpy, (years, p)),
                        None => missing_dpy += 1,
                    }
                }
            }
            let Ok(ndcg) = ndcg_at_3(&m, &b) else {
                continue;
            };
            entry.0 += 1;
            entry.1 += usize::from(top1_hit(&m, &b));
            entry.2 += usize::from(top3_hit(&m, &b));
            entry.3 += ndcg;
        }
    }

    let objectives = Objective::ALL
        .iter()
        .map(|&objective| {
            let (n_scored, top1, top3, ndcg_sum, n_matched) =
                hits.get(&objective).copied().unwrap_or_default();
            let report = ObjectiveReport {
                n_total,
                n_valid,
                n_scored,
                top1_hits: top1,
                top1_accuracy: ratio(top1, n_scored),
                top3_hits: top3,
                top3_hit_rate: ratio(top3, n_scored),
                ndcg_at_3: (n_scored > 0).then(|| ndcg_sum / n_scored as f64),
                n_matched_options: n_matched,
            };
            (objective, report)
        })
        .collect();

    let mape = Field::ALL
        .iter()
        .map(|&field| {
            let mut stat = mape(pairs.get(&field).map_or(&[][..], Vec::as_slice));
            if field == Field::Dpy {
                stat.n_matched += missing_dpy;
                stat.n_missing_prediction = missing_dpy;
            }
            (field, stat)
        })
        .collect();

    Ok(EvalReport {
        condition,
        n_total,
        n_valid,
        objectives,
        mape,
        invalid_reasons,
    })
}

fn opt(x: Option<f64>, scale: f64, decimals: usize) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{:.decimals$}", v * scale))
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width summary for terminals.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            "condition: {}   valid cases: {}/{}",
            self.condition, self.n_valid, self.n_total
        );
        let _ = writeln!(
            w,
            "{:<18} {:>7} {:>8} {:>8} {:>8} {:>8}",
            "objective", "scored", "top1", "top3", "ndcg@3", "matched"
        );
        for (objective, r) in &self.objectives {
            let _ = writeln!(
                w,
                "{:<18} {:>7} {:>8} {:>8} {:>8} {:>8}",
                objective.as_str(),
                r.n_scored,
                opt(r.top1_accuracy, 1.0, 4),
                opt(r.top3_hit_rate, 1.0, 4),
                opt(r.ndcg_at_3, 1.0, 4),
                r.n_matched_options
            );
        }
        let _ = writeln!(
            w,
            "{:<26} {:>10} {:>8} {:>8} {:>8}",
            "field", "mape %", "scored", "zero", "null"
        );
        for (field, s) in &self.mape {
            let _ = writeln!(
                w,
                "{:<26} {:>10} {:>8} {:>8} {:>8}",
                field.as_str(),
                opt(s.mape_percent, 1.0, 3),
                s.n_scored,
                s.n_zero_excluded,
                s.n_missing_prediction
            );
        }
        if !self.invalid_reasons.is_empty() {
            let _ = writeln!(w, "invalid outputs:");
            for (kind, n) in &self.invalid_reasons {
                let _ = writeln!(w, "  {kind:<24} {n}");
            }
        }
        out
    }
}
