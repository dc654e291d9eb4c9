//! Homeowner queries answered from the nearest stored prototype.

mod describe;

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    BuildingRecord, FieldName, FieldValue, FuelType, MeasureId, OutcomeRecord, RateError, RateTable,
};
use crate::econ::outcome_with_cost;
use crate::pipeline::Prototype;
use crate::ranker::{GroundTruth, Objective, RankError, TruthStore};
use crate::wire::wire_enum;

pub use describe::parse_description;

#[derive(Debug, Error)]
pub enum AdvisorError {
    #[error("no core field (state, climate zone, vintage, building type or floor area) could be determined")]
    NoCoreFields,
    #[error("the prototype store is empty")]
    EmptyStore,
    #[error("invalid override: {0}")]
    Override(#[from] RateError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("store line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Per-field weights of the prototype distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceWeights(pub BTreeMap<FieldName, f64>);

impl Default for DistanceWeights {
    fn default() -> Self {
        DistanceWeights(
            FieldName::ALL
                .iter()
                .map(|&f| (f, if f.is_core() { 2.0 } else { 1.0 }))
                .collect(),
        )
    }
}

impl DistanceWeights {
    pub fn get(&self, field: FieldName) -> f64 {
        self.0.get(&field).copied().unwrap_or(1.0)
    }
}

pub const STORE_SCHEMA: &str = "retrofit-prototypes";
pub const STORE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoreHeader {
    schema: String,
    version: u32,
    count: usize,
}

/// Prototypes with their ground truth, sorted by building id.
#[derive(Debug, Clone, Default)]
pub struct PrototypeStore {
    prototypes: Vec<Prototype>,
    truth: TruthStore,
    /// Observed (min, max) of each numeric field.
    ranges: BTreeMap<FieldName, (f64, f64)>,
}

impl PrototypeStore {
    pub fn new(mut prototypes: Vec<Prototype>) -> Result<Self, AdvisorError> {
        prototypes.sort_by(|a, b| a.record.building_id.cmp(&b.record.building_id));
        let truth = crate::pipeline::truth_store(&prototypes)?;
        let mut ranges: BTreeMap<FieldName, (f64, f64)> = BTreeMap::new();
        for p in &prototypes {
            for &f in FieldName::ALL {
                if let Some(FieldValue::Number(x)) = p.record.value(f) {
                    let e = ranges.entry(f).or_insert((x, x));
                    e.0 = e.0.min(x);
                    e.1 = e.1.max(x);
                }
            }
        }
        Ok(PrototypeStore {
            prototypes,
            truth,
            ranges,
        })
    }

    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }

    pub fn prototypes(&self) -> &[Prototype] {
        &self.prototypes
    }

    pub fn truth(&self) -> &TruthStore {
        &self.truth
    }

    pub fn get(&self, building_id: &str) -> Option<&Prototype> {
        self.prototypes
            .binary_search_by(|p| p.record.building_id.as_str().cmp(building_id))
            .ok()
            .map(|i| &self.prototypes[i])
    }

    /// One header line, then one prototype per line.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<(), AdvisorError> {
        let header = StoreHeader {
            schema: STORE_SCHEMA.into(),
            version: STORE_VERSION,
            count: self.prototypes.len(),
        };
        let to_io = |e: serde_json::Error| AdvisorError::Io(e.into());
        serde_json::to_writer(&mut out, &header).map_err(to_io)?;
        out.write_all(b"\n")?;
        for p in &self.prototypes {
            serde_json::to_writer(&mut out, p).map_err(to_io)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self, AdvisorError> {
        let mut lines = input.lines().enumerate();
        let parse_err = |line: usize, e: &dyn std::fmt::Display| AdvisorError::Parse {
            line: line + 1,
            message: e.to_string(),
        };
        let (i, first) = lines.next().ok_or(AdvisorError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let header: StoreHeader = serde_json::from_str(&first?).map_err(|e| parse_err(i, &e))?;
        if header.schema != STORE_SCHEMA || header.version != STORE_VERSION {
            return Err(parse_err(
                i,
                &format!("unsupported store {} v{}", header.schema, header.version),
            ));
        }
        let mut prototypes = Vec::with_capacity(header.count);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            prototypes.push(serde_json::from_str(&line).map_err(|e| parse_err(i, &e))?);
        }
        if prototypes.len() != header.count {
            return Err(parse_err(
                0,
                &format!(
                    "header says {} prototypes, found {}",
                    header.count,
                    prototypes.len()
                ),
            ));
        }
        Self::new(prototypes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), AdvisorError> {
        self.write_to(BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, AdvisorError> {
        Self::read_from(BufReader::new(std::fs::File::open(path)?))
    }

    /// Weighted mismatch distance. Unknown query fields contribute nothing;
    /// numeric differences are scaled by the store's observed range.
    pub fn distance(
        &self,
        query: &BuildingRecord,
        prototype: &BuildingRecord,
        weights: &DistanceWeights,
    ) -> f64 {
        FieldName::ALL
            .iter()
            .map(|&f| {
                let (Some(q), Some(p)) = (query.value(f), prototype.value(f)) else {
                    return 0.0;
                };
                let d = match (q, p) {
                    (FieldValue::Number(a), FieldValue::Number(b)) => {
                        let (lo, hi) = self.ranges.get(&f).copied().unwrap_or((0.0, 0.0));
                        let span = if hi > lo { hi - lo } else { 1.0 };
                        ((a - b).abs() / span).min(1.0)
                    }
                    (a, b) => f64::from(u8::from(a != b)),
                };
                weights.get(f) * d
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrototypeMatch {
    pub building_id: String,
    pub distance: f64,
}

/// The `k` nearest prototypes, closest first. Ties go to a prototype whose
/// id equals the query's, then to the smaller id.
pub fn nearest_prototypes(
    query: &BuildingRecord,
    store: &PrototypeStore,
    k: usize,
    weights: &DistanceWeights,
) -> Result<Vec<PrototypeMatch>, AdvisorError> {
    if store.is_empty() {
        return Err(AdvisorError::EmptyStore);
    }
    let mut all: Vec<PrototypeMatch> = store
        .prototypes
        .iter()
        .map(|p| PrototypeMatch {
            building_id: p.record.building_id.clone(),
            distance: store.distance(query, &p.record, weights),
        })
        .collect();
    all.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then_with(|| {
                (b.building_id == query.building_id).cmp(&(a.building_id == query.building_id))
            })
            .then_with(|| a.building_id.cmp(&b.building_id))
    });
    all.truncate(k.max(1));
    Ok(all)
}

/// Partial rate changes applied on top of the configured table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default)]
    pub discount_rate: Option<f64>,
    /// USD per kWh, by fuel.
    #[serde(default)]
    pub utility_rates: BTreeMap<FuelType, f64>,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        self.discount_rate.is_none() && self.utility_rates.is_empty()
    }

    pub fn apply(&self, base: &RateTable) -> Result<RateTable, RateError> {
        let mut rates = base.clone();
        if let Some(d) = self.discount_rate {
            rates.discount_rate = d;
        }
        for (&fuel, &rate) in &self.utility_rates {
            *rates.utility_rates.get_mut(fuel) = rate;
        }
        rates.validate()?;
        Ok(rates)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    /// Free-text description.
    #[serde(default)]
    pub description: Option<String>,
    /// Explicit fields; these win over anything parsed from the text.
    #[serde(default)]
    pub record: Option<BuildingRecord>,
    #[serde(default = "default_objective")]
    pub objective: Objective,
    #[serde(default)]
    pub overrides: Overrides,
    /// Fields to treat as Unknown (what-if).
    #[serde(default)]
    pub masked_fields: Vec<FieldName>,
}

fn default_objective() -> Objective {
    Objective::MaxCo2Reduction
}

impl Default for Query {
    fn default() -> Self {
        Query {
            description: None,
            record: None,
            objective: default_objective(),
            overrides: Overrides::default(),
            masked_fields: Vec::new(),
        }
    }
}

wire_enum! {
    pub enum Provenance: "provenance" {
        PrototypeMatch => "prototype-match",
        Model => "model",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendedOption {
    pub rank: usize,
    pub measure: MeasureId,
    pub outcome: OutcomeRecord,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub objective: Objective,
    pub options: Vec<RecommendedOption>,
    pub prototype_id: String,
    pub match_distance: f64,
    /// Prototypes tied at the best distance.
    pub matched_prototypes: usize,
    /// The record the lookup used, after parsing and masking.
    pub parsed_record: BuildingRecord,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdvisorConfig {
    pub rates: RateTable,
    pub weights: DistanceWeights,
}

/// The record a query describes.
pub fn query_record(query: &Query) -> Result<BuildingRecord, AdvisorError> {
    let mut record = query
        .record
        .clone()
        .unwrap_or_else(|| BuildingRecord::unknown("query"));
    if let Some(text) = &query.description {
        match parse_description(text) {
            Ok(parsed) => record.fill_unknown_from(&parsed),
            Err(AdvisorError::NoCoreFields) => {}
            Err(e) => return Err(e),
        }
    }
    for &f in &query.masked_fields {
        record.clear(f);
    }
    if !record.has_core_field() {
        return Err(AdvisorError::NoCoreFields);
    }
    Ok(record)
}

/// Outcomes of a prototype re-derived under different rates. Emissions,
/// energy and cost are unchanged; saving and payback follow the new rates.
pub fn rederive(prototype: &Prototype, rates: &RateTable) -> Vec<OutcomeRecord> {
    prototype
        .outcomes
        .iter()
        .filter_map(|o| {
            let after = prototype.retrofits.get(&o.measure)?;
            Some(outcome_with_cost(
                &o.building_id,
                &prototype.baseline,
                after,
                o.measure,
                o.retrofit_cost,
                rates,
            ))
        })
        .collect()
}

pub fn recommend(
    query: &Query,
    store: &PrototypeStore,
    config: &AdvisorConfig,
) -> Result<Recommendation, AdvisorError> {
    let record = query_record(query)?;
    let matches = nearest_prototypes(&record, store, store.len(), &config.weights)?;
    let best = &matches[0];
    let tied = matches
        .iter()
        .take_while(|m| m.distance == best.distance)
        .count();
    let prototype = store
        .get(&best.building_id)
        .expect("match comes from the store");

    let truth: GroundTruth = if query.overrides.is_empty() {
        store
            .truth
            .get(&best.building_id)
            .expect("every prototype has ground truth")
            .clone()
    } else {
        let rates = query.overrides.apply(&config.rates)?;
        GroundTruth::from_outcomes(&best.building_id, &rederive(prototype, &rates))?
    };

    let options = truth
        .ranking(query.objective)
        .iter()
        .enumerate()
        .map(|(i, o)| RecommendedOption {
            rank: i + 1,
            measure: o.measure,
            outcome: o.clone(),
            provenance: Provenance::PrototypeMatch,
        })
        .collect();
    Ok(Recommendation {
        objective: query.objective,
        options,
        prototype_id: best.building_id.clone(),
        match_distance: best.distance,
        matched_prototypes: tied,
        parsed_record: record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::PaybackResult;
    use crate::econ::discounted_payback;
    use crate::pipeline::run_synthetic;
    use crate::synth::SurrogateParams;

    fn store(n: usize) -> PrototypeStore {
        let run = run_synthetic(n, 17, &SurrogateParams::default(), &RateTable::default()).unwrap();
        PrototypeStore::new(run.prototypes).unwrap()
    }

    fn query_for(record: &BuildingRecord, objective: Objective) -> Query {
        Query {
            record: Some(record.clone()),
            objective,
            ..Query::default()
        }
    }

    #[test]
    fn identity_match_and_passthrough() {
        let store = store(40);
        let config = AdvisorConfig::default();
        for p in store.prototypes() {
            for &objective in Objective::ALL {
                let rec = recommend(&query_for(&p.record, objective), &store, &config).unwrap();
                assert_eq!(rec.prototype_id, p.record.building_id);
                assert_eq!(rec.match_distance, 0.0);
                let stored = store
                    .truth()
                    .get(&p.record.building_id)
                    .unwrap()
                    .ranking(objective);
                let got: Vec<_> = rec.options.iter().map(|o| o.outcome.clone()).collect();
                assert_eq!(got, stored);
            }
        }
    }

    #[test]
    fn single_core_field_distance() {
        let store = store(30);
        let w = DistanceWeights::default();
        let mut q = BuildingRecord::unknown("q");
        q.building_type = store.prototypes()[0].record.building_type;
        for p in store.prototypes() {
            let d = store.distance(&q, &p.record, &w);
            let expected = if p.record.building_type == q.building_type {
                0.0
            } else {
                2.0
            };
            assert_eq!(d, expected);
        }
    }

    #[test]
    fn k_beyond_store_returns_everything() {
        let store = store(7);
        let q = store.prototypes()[3].record.clone();
        let m = nearest_prototypes(&q, &store, 50, &DistanceWeights::default()).unwrap();
        assert_eq!(m.len(), 7);
        assert!(m.windows(2).all(|w| w[0].distance <= w[1].distance));
        let empty = PrototypeStore::default();
        assert!(matches!(
            nearest_prototypes(&q, &empty, 1, &DistanceWeights::default()),
            Err(AdvisorError::EmptyStore)
        ));
    }

    #[test]
    fn masking_never_increases_distance() {
        let store = store(25);
        let w = DistanceWeights::default();
        let base = store.prototypes()[0].record.clone();
        for p in store.prototypes() {
            let mut q = base.clone();
            let mut last = store.distance(&q, &p.record, &w);
            for &f in FieldName::ALL {
                q.clear(f);
                let d = store.distance(&q, &p.record, &w);
                assert!(d <= last + 1e-12);
                last = d;
            }
            assert_eq!(last, 0.0);
        }
    }

    #[test]
    fn discount_override_rederives_payback() {
        let store = store(20);
        let config = AdvisorConfig::default();
        let p = &store.prototypes()[2];
        let mut q = query_for(&p.record, Objective::MinDpy);
        q.overrides.discount_rate = Some(0.06);
        let rec = recommend(&q, &store, &config).unwrap();
        for o in &rec.options {
            let full = p.outcomes.iter().find(|x| x.measure == o.measure).unwrap();
            // brute-force cumulative sum at 6%
            let mut cum = 0.0;
            let mut year = None;
            for t in 1..=300 {
                cum += full.energy_cost_saving / 1.06f64.powi(t);
                if cum >= full.retrofit_cost {
                    year = Some(t as u32);
                    break;
                }
            }
            assert_eq!(
                o.outcome.dpy,
                year.map_or(PaybackResult::NoPayback, PaybackResult::Finite)
            );
            assert_eq!(
                o.outcome.dpy,
                discounted_payback(full.retrofit_cost, full.energy_cost_saving, 0.06, 300)
            );
        }
        assert!(rec
            .options
            .windows(2)
            .all(|w| w[0].outcome.dpy.years() <= w[1].outcome.dpy.years()));
    }

    #[test]
    fn store_round_trips() {
        let store = store(5);
        let mut buf = Vec::new();
        store.write_to(&mut buf).unwrap();
        let back = PrototypeStore::read_from(buf.as_slice()).unwrap();
        assert_eq!(back.prototypes(), store.prototypes());
        assert_eq!(back.truth(), store.truth());
    }

    #[test]
    fn text_query() {
        let store = store(30);
        let q = Query {
            description: Some("built in the 1970s, 150 m² two-story house".into()),
            ..Query::default()
        };
        let rec = recommend(&q, &store, &AdvisorConfig::default()).unwrap();
        assert_eq!(rec.parsed_record.num_stories, Some(2));
        assert!(!rec.options.is_empty());
        let q = Query {
            description: Some("hello".into()),
            ..Query::default()
        };
        assert!(matches!(
            recommend(&q, &store, &AdvisorConfig::default()),
            Err(AdvisorError::NoCoreFields)
        ));
    }
}
