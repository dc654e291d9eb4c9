//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! ```bash
//! cargo test -p retrofit-service --test acceptance
//! ```
//!
//! Every expected value is produced by an oracle written here, independent
//! of the library code it checks.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use retrofit_core::advisor::{
    parse_description, AdvisorConfig, PrototypeStore, Query, Recommendation,
};
use retrofit_core::corpus::{
    build_corpus, mask_record, CorpusConfig, CorpusError, MaskPolicy, TEMPLATES,
};
use retrofit_core::domain::{
    BuildingGeometry, FieldName, HvacSubtype, MeasureId, OutcomeRecord, PaybackResult, RateTable,
};
use retrofit_core::econ::{discounted_payback, measure_cost, pv_unit_cost, DEFAULT_HORIZON_YEARS};
use retrofit_core::eval::{evaluate_run, ndcg_at_3, EvalReport, Field};
use retrofit_core::generation::{generate_mock, Condition, DegradeParams, MockModel};
use retrofit_core::payload::{parse_payload, render_assistant};
use retrofit_core::pipeline::{run_synthetic, SyntheticRun};
use retrofit_core::ranker::{rank_dpy, Objective};
use retrofit_core::synth::SurrogateParams;
use retrofit_service::server::{router, AppState};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn synthetic(n: usize, seed: u64) -> SyntheticRun {
    run_synthetic(
        n,
        seed,
        &SurrogateParams {
            seed,
            ..SurrogateParams::default()
        },
        &RateTable::default(),
    )
    .expect("synthetic run")
}

// ---------------------------------------------------------------- payback

fn annuity_years(i: f64, s: f64, d: f64) -> PaybackResult {
    if i <= 0.0 {
        return PaybackResult::Finite(1);
    }
    let x = i * d / s;
    if s <= 0.0 || x >= 1.0 {
        return PaybackResult::NoPayback;
    }
    let n = (-(1.0 - x).ln() / (1.0 + d).ln()).ceil().max(1.0);
    if n > f64::from(DEFAULT_HORIZON_YEARS) {
        PaybackResult::NoPayback
    } else {
        PaybackResult::Finite(n as u32)
    }
}

fn payback_oracle() -> Outcome {
    ensure(
        discounted_payback(1000.0, 100.0, 0.03, DEFAULT_HORIZON_YEARS) == PaybackResult::Finite(13),
        || "I=1000 S=100 d=0.03 is not 13".into(),
    )?;
    let investments = [
        150.0, 730.0, 1000.0, 2_480.0, 3_707.0, 6_113.0, 9_850.0, 14_185.0, 27_400.0, 51_230.0,
    ];
    let savings = [
        13.0, 48.5, 100.0, 164.8, 311.0, 577.7, 902.0, 1_460.0, 2_333.3, 4_010.0,
    ];
    let rates = [0.005, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.075, 0.09, 0.12];
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut n = 0;
    for &i in &investments {
        for &s in &savings {
            for &d in &rates {
                n += 1;
                let got = discounted_payback(i, s, d, DEFAULT_HORIZON_YEARS);
                let want = annuity_years(i, s, d);
                if got != want {
                    mismatches.push(format!("I={i} S={s} d={d}: {got} vs {want}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(mismatches.is_empty(), || {
        format!("{} mismatches, first {}", mismatches.len(), mismatches[0])
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("grid took {elapsed:?}")
    })?;
    Ok(format!(
        "{n}/{n} grid points match the annuity closed form in {elapsed:.2?}"
    ))
}

// ---------------------------------------------------------------- table 1

/// Round half up on values given to at most three decimals, in exact
/// integer thousandths, with at least one unit.
fn units(quantity: f64, divisor: f64) -> f64 {
    let q = (quantity * 1000.0).round() as i64;
    let d = (divisor * 1000.0).round() as i64;
    ((2 * q + d) / (2 * d)).max(1) as f64
}

fn table_cost(
    m: MeasureId,
    wall: f64,
    roof: f64,
    window: f64,
    floor: f64,
    cool: f64,
    heat: f64,
) -> f64 {
    use HvacSubtype as H;
    match m {
        MeasureId::WallInsulation => 150.4 * wall,
        MeasureId::RoofCeilingInsulation => 19.7 * roof,
        MeasureId::WindowReplacement => 974.4 * window,
        MeasureId::AirSealing => 11.8 * floor,
        MeasureId::HvacUpgrade(H::DxCoolingPlusDxHeating | H::DxCoolingOnly) => {
            units(cool, 7.03) * 1623.0 + 634.41
        }
        MeasureId::HvacUpgrade(H::ElectricFurnaceBaseboard) => units(heat, 3.52) * 1699.0 + 634.41,
        MeasureId::HvacUpgrade(H::NaturalGasFurnace) => {
            units(heat, 3.52) * 1699.0 + units(cool, 25.11) * 3472.93 + 2217.75
        }
        MeasureId::HvacUpgrade(H::FuelFurnace) => {
            units(heat, 3.52) * 1699.0 + units(cool, 39.32) * 3232.0 + 2217.75
        }
        MeasureId::HvacUpgrade(H::HotWaterBoiler) => {
            units(heat, 3.52) * 1699.0 + units(cool, 21.98) * 3472.93 + 4399.77
        }
        MeasureId::HvacUpgrade(H::SharedCooling) => units(cool, 7.03) * 3073.0 + 2309.70,
        MeasureId::PvInstallation => {
            let w = roof * 0.22 * 0.21 * 1000.0;
            let unit = if w < 880.0 {
                4.30
            } else if w <= 14080.0 {
                4.37 - 0.000091 * w
            } else {
                3.10
            };
            w * unit
        }
        MeasureId::ApplianceReplacement => 1159.02 + 1350.76 + 1079.79 + 453.69,
        MeasureId::LightingReplacement => units(floor, 6.97) * 7.87,
        MeasureId::WaterHeaterReplacement => 3707.0,
    }
}

fn table1_costs() -> Outcome {
    let mut measures: BTreeSet<MeasureId> = BTreeSet::new();
    for s in HvacSubtype::ALL {
        measures.extend(MeasureId::applicable(*s));
    }
    // capacities include exact halves: 17.575 / 7.03 = 2.5, 5.28 / 3.52 = 1.5
    let geometries = [
        [220.0, 110.0, 18.0, 160.0, 10.5, 21.0],
        [95.5, 19.0, 6.2, 48.0, 17.575, 5.28],
        [310.0, 19.1, 31.0, 260.0, 2.0, 1.0],
        [410.2, 304.7, 44.4, 3.0, 62.855, 44.0],
        [150.0, 304.8, 12.0, 17.425, 0.4, 0.3],
        [180.0, 500.0, 20.0, 210.0, 98.3, 52.8],
    ];
    let mut checked = 0;
    for g in &geometries {
        let geom = BuildingGeometry::complete(g[0], g[1], g[2], g[3], g[4], g[5]);
        for &m in &measures {
            let got = measure_cost(m, &geom).map_err(|e| e.to_string())?;
            let want = table_cost(m, g[0], g[1], g[2], g[3], g[4], g[5]);
            ensure((got - want).abs() <= 1e-9 * want.abs(), || {
                format!("{m} on {g:?}: {got} vs {want}")
            })?;
            checked += 1;
        }
    }
    let whr = measure_cost(
        MeasureId::WaterHeaterReplacement,
        &BuildingGeometry::complete(1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
    )
    .map_err(|e| e.to_string())?;
    ensure(whr == 3707.0, || format!("water heater {whr}"))?;
    for (w, want) in [
        (879.0, 4.30),
        (880.0, 4.37 - 0.000091 * 880.0),
        (14080.0, 4.37 - 0.000091 * 14080.0),
        (14081.0, 3.10),
    ] {
        let got = pv_unit_cost(w);
        ensure((got - want).abs() <= 1e-9 * want, || {
            format!("PV unit cost at {w} W: {got} vs {want}")
        })?;
    }
    Ok(format!("{checked} (measure, geometry) costs exact to 1e-9; water heater 3707; PV tiers at 879/880/14080/14081 W"))
}

// ---------------------------------------------------------------- ndcg

fn ndcg_oracle(model: &[MeasureId], baseline: &[MeasureId]) -> f64 {
    let rel: HashMap<MeasureId, i32> = baseline
        .iter()
        .zip([3, 2, 1])
        .map(|(m, r)| (*m, r))
        .collect();
    let dcg = |rels: Vec<i32>| -> f64 {
        rels.iter()
            .enumerate()
            .map(|(i, r)| (2f64.powi(*r) - 1.0) / (i as f64 + 2.0).log2())
            .sum()
    };
    let mut ideal: Vec<i32> = rel.values().copied().collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    dcg(model
        .iter()
        .map(|m| rel.get(m).copied().unwrap_or(0))
        .collect())
        / dcg(ideal)
}

fn orderings(items: &[MeasureId]) -> Vec<[MeasureId; 3]> {
    let mut out = Vec::new();
    for a in items {
        for b in items.iter().filter(|b| *b != a) {
            for c in items.iter().filter(|c| *c != a && *c != b) {
                out.push([*a, *b, *c]);
            }
        }
    }
    out
}

fn ndcg_equivalence() -> Outcome {
    let candidates = &MeasureId::applicable(HvacSubtype::NaturalGasFurnace)[..5];
    let all = orderings(candidates);
    ensure(all.len() == 60, || format!("{} orderings", all.len()))?;
    let mut worst: f64 = 0.0;
    for baseline in &all {
        for model in &all {
            let got = ndcg_at_3(model, baseline).map_err(|e| e.to_string())?;
            worst = worst.max((got - ndcg_oracle(model, baseline)).abs());
        }
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    let b = [candidates[0], candidates[1], candidates[2]];
    let hand = ndcg_at_3(&[b[1], b[0], candidates[4]], &b).map_err(|e| e.to_string())?;
    ensure((hand - 0.7896).abs() <= 1e-4, || {
        format!("hand case {hand}")
    })?;
    Ok(format!(
        "3600 (model, baseline) pairs agree (max dev {worst:.1e}); hand case {hand:.5}"
    ))
}

// ---------------------------------------------------------------- end to end

struct EndToEnd {
    run: SyntheticRun,
    samples: Vec<retrofit_core::corpus::CorpusSample>,
}

fn end_to_end_fixture() -> Result<(EndToEnd, Duration), String> {
    let start = Instant::now();
    let run = synthetic(500, 1);
    let records: Vec<_> = run.prototypes.iter().map(|p| p.record.clone()).collect();
    let corpus = build_corpus(
        &records,
        &run.truth,
        CorpusConfig {
            holdout: 100,
            seed: 1,
        },
    )
    .map_err(|e| e.to_string())?;
    let samples: Vec<_> = corpus.samples().cloned().collect();
    Ok((EndToEnd { run, samples }, start.elapsed()))
}

fn score(fx: &EndToEnd, model: MockModel) -> Result<EvalReport, String> {
    let gens = generate_mock(&fx.samples, &fx.run.truth, model).map_err(|e| e.to_string())?;
    evaluate_run(&gens, &fx.run.truth, Condition::Complete).map_err(|e| e.to_string())
}

fn perfect_end_to_end(fx: &EndToEnd, setup: Duration) -> Outcome {
    let start = Instant::now();
    let report = score(fx, MockModel::Perfect)?;
    let elapsed = setup + start.elapsed();
    ensure(report.n_valid == 500 && report.n_total == 500, || {
        format!("n_valid {}", report.n_valid)
    })?;
    for (objective, r) in &report.objectives {
        let all_one = [r.top1_accuracy, r.top3_hit_rate, r.ndcg_at_3]
            .iter()
            .all(|x| *x == Some(1.0));
        ensure(all_one, || format!("{objective}: {r:?}"))?;
    }
    for field in Field::ALL {
        let s = &report.mape[field];
        ensure(s.mape_percent == Some(0.0), || {
            format!("{field} MAPE {:?}", s.mape_percent)
        })?;
    }
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "500/500 valid; top1 = top3 = ndcg = 1, MAPE 0 on 4 fields; {elapsed:.2?}"
    ))
}

fn swapped_ndcg(len: usize) -> f64 {
    let g = |rel: i32, pos: usize| (2f64.powi(rel) - 1.0) / ((pos + 2) as f64).log2();
    match len {
        0 | 1 => 1.0,
        2 => (g(2, 0) + g(3, 1)) / (g(3, 0) + g(2, 1)),
        _ => (g(2, 0) + g(3, 1) + g(1, 2)) / (g(3, 0) + g(2, 1) + g(1, 2)),
    }
}

fn degraded_calibration(fx: &EndToEnd) -> Outcome {
    let noisy = score(
        fx,
        MockModel::Degraded(DegradeParams {
            noise: 0.10,
            swap_prob: 0.0,
            seed: 7,
        }),
    )?;
    let mut mapes = Vec::new();
    for field in Field::ALL {
        let m = noisy.mape[field]
            .mape_percent
            .ok_or_else(|| format!("{field}: nothing scored"))?;
        ensure((m - 10.0).abs() <= 0.01, || format!("{field} MAPE {m}"))?;
        mapes.push(m);
    }
    for (objective, r) in &noisy.objectives {
        ensure(r.top1_accuracy == Some(1.0), || {
            format!("{objective} top1 {:?} under noise", r.top1_accuracy)
        })?;
    }

    let swapped = score(
        fx,
        MockModel::Degraded(DegradeParams {
            noise: 0.0,
            swap_prob: 1.0,
            seed: 7,
        }),
    )?;
    let mut detail = Vec::new();
    for (objective, r) in &swapped.objectives {
        let lens: Vec<usize> = fx
            .samples
            .iter()
            .map(|s| {
                fx.run
                    .truth
                    .get(&s.building_id)
                    .map_or(0, |t| t.ranking(*objective).len())
            })
            .filter(|&n| n > 0)
            .collect();
        let expected = lens.iter().map(|&n| swapped_ndcg(n)).sum::<f64>() / lens.len() as f64;
        let ndcg = r.ndcg_at_3.unwrap_or(f64::NAN);
        // a single eligible option has nothing to swap with
        let singles = lens.iter().filter(|&&n| n == 1).count();
        let top1 = singles as f64 / lens.len() as f64;
        ensure(r.top1_accuracy == Some(top1), || {
            format!("{objective} top1 {:?} vs {top1}", r.top1_accuracy)
        })?;
        ensure(r.top3_hit_rate == Some(1.0), || {
            format!("{objective} top3 {:?}", r.top3_hit_rate)
        })?;
        ensure((ndcg - expected).abs() <= 1e-4, || {
            format!("{objective} ndcg {ndcg} vs {expected}")
        })?;
        detail.push(format!(
            "{objective} top1 {top1} ({singles} single-option) ndcg {ndcg:.6}"
        ));
    }
    let max_dev = mapes.iter().map(|m| (m - 10.0).abs()).fold(0.0, f64::max);
    Ok(format!(
        "noise 10%: MAPE within {max_dev:.1e} of 10%; swap: top3 1, {}",
        detail.join(", ")
    ))
}

// ---------------------------------------------------------------- corpus

fn corpus_contract() -> Outcome {
    let run = synthetic(2500, 4);
    let records: Vec<_> = run.prototypes.iter().map(|p| p.record.clone()).collect();
    let config = CorpusConfig {
        holdout: 2000,
        seed: 4,
    };

    match build_corpus(&records[..2000], &run.truth, config) {
        Err(CorpusError::InsufficientRecords { .. }) => {}
        other => {
            return Err(format!(
                "2000 records: expected InsufficientRecords, got {:?}",
                other.map(|c| c.eval.len())
            ))
        }
    }
    for n in [2001, 2500] {
        let c = build_corpus(&records[..n], &run.truth, config).map_err(|e| e.to_string())?;
        ensure(c.eval.len() == 2000 && c.train.len() == n - 2000, || {
            format!("{n}: eval {}", c.eval.len())
        })?;
        let ids: Vec<_> = c.samples().map(|s| s.building_id.as_str()).collect();
        let unique: BTreeSet<_> = ids.iter().collect();
        ensure(ids.len() == n && unique.len() == n, || {
            format!("{n}: {} samples, {} unique", ids.len(), unique.len())
        })?;
    }

    let corpus = build_corpus(&records, &run.truth, config).map_err(|e| e.to_string())?;
    for s in corpus.samples() {
        let gt = run.truth.get(&s.building_id).ok_or("missing truth")?;
        let back = parse_payload(s.assistant_text())
            .map_err(|e| e.to_string())?
            .to_truth(&s.building_id);
        ensure(back.as_ref() == Ok(gt), || {
            format!("{} payload does not round-trip", s.building_id)
        })?;
        ensure(
            render_assistant(gt).as_deref() == Ok(s.assistant_text()),
            || "render mismatch".into(),
        )?;
    }

    let dirs = [
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    ];
    for d in &dirs {
        let rerun = synthetic(2500, 4);
        let recs: Vec<_> = rerun.prototypes.iter().map(|p| p.record.clone()).collect();
        build_corpus(&recs, &rerun.truth, config)
            .and_then(|c| c.write_dir(d.path()))
            .map_err(|e| e.to_string())?;
    }
    for file in ["train.jsonl", "eval.jsonl", "metadata.json"] {
        let a = std::fs::read(dirs[0].path().join(file)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].path().join(file)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{file} differs between reruns"))?;
    }
    Ok("holdout 2000 at 2001 and 2500 records, rejected at 2000; ids unique; 2500 payloads round-trip; reruns byte-identical".into())
}

// ---------------------------------------------------------------- masking

fn masking_protocol() -> Outcome {
    let run = synthetic(200, 5);
    let maskable = MaskPolicy::new(0.4, 0).maskable_fields.len();
    let bound = (0.4 * maskable as f64).ceil() as usize;
    let mut max_seen = 0;
    for draw in 0..10_000u64 {
        let record = &run.prototypes[(draw % 200) as usize].record;
        let (masked, fields) = mask_record(record, &MaskPolicy::new(0.4, draw));
        for core in FieldName::CORE {
            ensure(masked.is_known(core), || {
                format!("draw {draw} lost core field {core}")
            })?;
        }
        ensure(fields.len() <= bound, || {
            format!("draw {draw} masked {}", fields.len())
        })?;
        ensure(fields.iter().all(|f| !masked.is_known(*f)), || {
            format!("draw {draw} left a masked field set")
        })?;
        max_seen = max_seen.max(fields.len());
    }
    Ok(format!("10000 draws: core fields always present; masked count max {max_seen} <= {bound} of {maskable}"))
}

// ---------------------------------------------------------------- dpy exclusion

fn outcome(measure: MeasureId, dpy: PaybackResult, saving: f64) -> OutcomeRecord {
    OutcomeRecord {
        building_id: "b".into(),
        measure,
        co2_reduction: 1.0,
        net_site_energy_reduction: 1.0,
        energy_cost_saving: saving,
        retrofit_cost: 1.0,
        dpy,
    }
}

fn dpy_exclusion() -> Outcome {
    let measures = MeasureId::applicable(HvacSubtype::HotWaterBoiler);
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let mut emitted = 0;
    for _ in 0..10_000 {
        let set: Vec<_> = measures
            .iter()
            .map(|&m| {
                let dpy = match rng.random_range(0..4) {
                    0 => PaybackResult::NoPayback,
                    1 => PaybackResult::Finite(rng.random_range(95..=105)),
                    _ => PaybackResult::Finite(rng.random_range(1..=300)),
                };
                outcome(m, dpy, rng.random_range(-50.0..500.0))
            })
            .collect();
        let ranked = rank_dpy(&set).map_err(|e| e.to_string())?;
        for o in &ranked {
            ensure(
                matches!(o.dpy, PaybackResult::Finite(n) if n <= 100),
                || format!("emitted {}", o.dpy),
            )?;
        }
        emitted += ranked.len();
    }
    let boundary = vec![
        outcome(MeasureId::AirSealing, PaybackResult::Finite(100), 10.0),
        outcome(
            MeasureId::WindowReplacement,
            PaybackResult::Finite(101),
            10.0,
        ),
    ];
    let ranked = rank_dpy(&boundary).map_err(|e| e.to_string())?;
    ensure(
        ranked.len() == 1 && ranked[0].dpy == PaybackResult::Finite(100),
        || format!("boundary kept {ranked:?}"),
    )?;
    Ok(format!("10000 random sets ({emitted} ranked options): none NoPayback or > 100; dpy 100 kept, 101 dropped"))
}

// ---------------------------------------------------------------- advisor

async fn advisor_fidelity(fx: &EndToEnd) -> Outcome {
    let store = PrototypeStore::new(fx.run.prototypes.clone()).map_err(|e| e.to_string())?;
    let state = Arc::new(AppState::new(store.clone(), AdvisorConfig::default(), None));
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
        .await
        .map_err(|e| e.to_string())?;
    let base = format!(
        "http://{}",
        listener.local_addr().map_err(|e| e.to_string())?
    );
    tokio::spawn(async move { axum::serve(listener, router(state)).await });

    let http = reqwest::Client::new();
    let mut queried = 0;
    for p in store.prototypes() {
        for &objective in Objective::ALL {
            let query = Query {
                record: Some(p.record.clone()),
                objective,
                ..Query::default()
            };
            let resp = http
                .post(format!("{base}/recommend"))
                .json(&query)
                .send()
                .await
                .map_err(|e| e.to_string())?;
            ensure(resp.status() == 200, || {
                format!("{}: HTTP {}", p.record.building_id, resp.status())
            })?;
            let rec: Recommendation = resp.json().await.map_err(|e| e.to_string())?;
            let truth = store
                .truth()
                .get(&p.record.building_id)
                .ok_or("missing truth")?
                .ranking(objective);
            let got: Vec<_> = rec.options.iter().map(|o| &o.outcome).collect();
            ensure(
                got.len() == truth.len() && got.iter().zip(truth).all(|(a, b)| *a == b),
                || {
                    format!(
                        "{} {objective}: response differs from stored truth",
                        p.record.building_id
                    )
                },
            )?;
            queried += 1;
        }
    }

    let corpus_run = synthetic(2500, 6);
    let records: HashMap<_, _> = corpus_run
        .prototypes
        .iter()
        .map(|p| (p.record.building_id.clone(), &p.record))
        .collect();
    let all: Vec<_> = corpus_run
        .prototypes
        .iter()
        .map(|p| p.record.clone())
        .collect();
    let corpus = build_corpus(
        &all,
        &corpus_run.truth,
        CorpusConfig {
            holdout: 2000,
            seed: 6,
        },
    )
    .map_err(|e| e.to_string())?;
    let masked = retrofit_core::corpus::mask_samples(&corpus.eval, &all, &MaskPolicy::new(0.4, 6))
        .map_err(|e| e.to_string())?;
    let mut templates = BTreeSet::new();
    let mut texts = 0;
    for s in corpus.samples().chain(&masked) {
        let mut expected = records[&s.building_id].clone();
        for f in &s.masked_fields {
            expected.clear(*f);
        }
        let parsed =
            parse_description(s.user_text()).map_err(|e| format!("{}: {e}", s.building_id))?;
        ensure(parsed.known_fields() == expected.known_fields(), || {
            format!(
                "{} template {}: field set differs",
                s.building_id, s.template_id
            )
        })?;
        for f in expected.known_fields() {
            ensure(parsed.value(f) == expected.value(f), || {
                format!("{} template {}: {f} differs", s.building_id, s.template_id)
            })?;
        }
        templates.insert(s.template_id);
        texts += 1;
    }
    ensure(templates.len() == TEMPLATES.len(), || {
        format!("only {} templates seen", templates.len())
    })?;
    Ok(format!("{queried} /recommend calls reproduce stored truth; {texts}/{texts} user texts over {} templates extract exactly", templates.len()))
}

// ---------------------------------------------------------------- runner

fn report(results: &mut Vec<bool>, name: &str, outcome: Outcome) {
    match outcome {
        Ok(detail) => {
            println!("PASS  {name:<28} {detail}");
            results.push(true);
        }
        Err(detail) => {
            println!("FAIL  {name:<28} {detail}");
            results.push(false);
        }
    }
}

fn main() {
    let runtime = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .expect("runtime");
    let mut results = Vec::new();
    report(&mut results, "payback-annuity-oracle", payback_oracle());
    report(&mut results, "table1-cost-fidelity", table1_costs());
    report(&mut results, "ndcg-brute-force", ndcg_equivalence());
    let fixture = end_to_end_fixture();
    match &fixture {
        Ok((fx, setup)) => {
            report(
                &mut results,
                "perfect-oracle-end-to-end",
                perfect_end_to_end(fx, *setup),
            );
            report(
                &mut results,
                "degraded-oracle-calibration",
                degraded_calibration(fx),
            );
        }
        Err(e) => {
            report(&mut results, "perfect-oracle-end-to-end", Err(e.clone()));
            report(&mut results, "degraded-oracle-calibration", Err(e.clone()));
        }
    }
    report(&mut results, "corpus-contract", corpus_contract());
    report(&mut results, "masking-protocol", masking_protocol());
    report(&mut results, "dpy-exclusion", dpy_exclusion());
    let advisor = match &fixture {
        Ok((fx, _)) => runtime.block_on(advisor_fidelity(fx)),
        Err(e) => Err(e.clone()),
    };
    report(&mut results, "advisor-fidelity", advisor);

    let passed = results.iter().filter(|r| **r).count();
    println!("\n{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
