//! Generate synthetic homes, export their simulation results as CSV, ingest
//! the CSV back, and write the ground-truth and prototype stores.
//!
//! ```bash
//! cargo run -p retrofit-core --example synth_dataset -- --n 500 --out data
//! ```

use std::path::PathBuf;

use clap::Parser;
use retrofit_core::advisor::PrototypeStore;
use retrofit_core::domain::{RateTable, UnitConversions};
use retrofit_core::pipeline::{prototypes_from_results, truth_store};
use retrofit_core::synth::{
    export_results, gen_buildings, ingest_results, surrogate_simulate, SimDataset, SurrogateParams,
};

#[derive(Parser)]
struct Args {
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "data")]
    out: PathBuf,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    std::fs::create_dir_all(&args.out)?;
    let params = SurrogateParams {
        seed: args.seed,
        ..SurrogateParams::default()
    };
    let buildings = gen_buildings(args.n, args.seed);

    let mut results = SimDataset::new();
    for (record, geometry) in &buildings {
        results.insert(
            record.building_id.clone(),
            surrogate_simulate(record, geometry, &params)?,
        );
    }
    let csv = args.out.join("results.csv");
    export_results(&results, &csv)?;

    // the same path external simulation results take
    let mut ingested = ingest_results(&csv, &UnitConversions::IDENTITY)?;
    let prototypes = prototypes_from_results(buildings, &mut ingested, &RateTable::default())?;
    let truth = truth_store(&prototypes)?;
    truth.save(args.out.join("truth.jsonl"))?;
    PrototypeStore::new(prototypes)?.save(args.out.join("prototypes.jsonl"))?;

    println!("buildings:   {}", args.n);
    println!("results:     {}", csv.display());
    println!(
        "truth store: {} ({})",
        args.out.join("truth.jsonl").display(),
        truth.content_hash()
    );
    println!(
        "prototypes:  {}",
        args.out.join("prototypes.jsonl").display()
    );
    Ok(())
}
