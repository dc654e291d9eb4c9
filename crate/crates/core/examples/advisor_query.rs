//! Answer a homeowner's description from the nearest stored prototype, then
//! again with a higher discount rate.
//!
//! ```bash
//! cargo run -p retrofit-core --example advisor_query -- "a 1960s ranch house in Texas, about 140 m², with central AC"
//! ```

use retrofit_core::advisor::{
    recommend, AdvisorConfig, Overrides, PrototypeStore, Query, Recommendation,
};
use retrofit_core::domain::RateTable;
use retrofit_core::pipeline::run_synthetic;
use retrofit_core::ranker::Objective;
use retrofit_core::synth::SurrogateParams;

fn show(title: &str, rec: &Recommendation) {
    println!(
        "\n{title}: prototype {} at distance {:.3}",
        rec.prototype_id, rec.match_distance
    );
    for o in &rec.options {
        println!(
            "  {}. {:<36} co2 {:>8.1} kg  cost {:>8.0} USD  dpy {}",
            o.rank,
            o.measure.to_string(),
            o.outcome.co2_reduction,
            o.outcome.retrofit_cost,
            o.outcome.dpy
        );
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| {
        "We own a single-family detached home in Texas built in the 1960s, about 140 m², \
         one story, heated by a natural gas furnace with central air."
            .to_string()
    });
    let run = run_synthetic(400, 9, &SurrogateParams::default(), &RateTable::default())?;
    let store = PrototypeStore::new(run.prototypes)?;
    let config = AdvisorConfig::default();

    let query = Query {
        description: Some(text),
        ..Query::default()
    };
    let rec = recommend(&query, &store, &config)?;
    println!("understood: {:?}", rec.parsed_record.known_fields());
    show("largest CO2 reduction", &rec);

    let query = Query {
        objective: Objective::MinDpy,
        ..query
    };
    show("shortest payback", &recommend(&query, &store, &config)?);

    let overrides = Overrides {
        discount_rate: Some(0.06),
        ..Overrides::default()
    };
    let query = Query { overrides, ..query };
    show(
        "shortest payback at 6% discount rate",
        &recommend(&query, &store, &config)?,
    );
    Ok(())
}
