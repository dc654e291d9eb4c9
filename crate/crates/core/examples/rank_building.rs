//! Simulate one synthetic home, compute outcomes for all nine measures, and
//! rank them under both objectives.
//!
//! ```bash
//! cargo run -p retrofit-core --example rank_building -- 7
//! ```

use retrofit_core::domain::RateTable;
use retrofit_core::pipeline::Prototype;
use retrofit_core::ranker::Objective;
use retrofit_core::synth::{gen_building, surrogate_simulate, SurrogateParams};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let (record, geometry) = gen_building("bldg-demo", seed);
    let params = SurrogateParams {
        seed,
        ..SurrogateParams::default()
    };
    let sim = surrogate_simulate(&record, &geometry, &params)
        .expect("generated records resolve an HVAC subtype");
    let proto =
        Prototype::new(record, geometry, sim, &RateTable::default()).expect("complete geometry");

    println!("{}", serde_json::to_string_pretty(&proto.record).unwrap());
    println!(
        "\n{:<36} {:>10} {:>12} {:>10} {:>10} {:>10}",
        "measure", "co2 kg", "energy kWh", "cost USD", "save USD", "dpy"
    );
    for o in &proto.outcomes {
        println!(
            "{:<36} {:>10.1} {:>12.1} {:>10.0} {:>10.1} {:>10}",
            o.measure.to_string(),
            o.co2_reduction,
            o.net_site_energy_reduction,
            o.retrofit_cost,
            o.energy_cost_saving,
            o.dpy.to_string()
        );
    }

    let truth = proto.ground_truth().expect("nine outcomes");
    for objective in Objective::ALL {
        println!("\n{objective}:");
        for (i, o) in truth.ranking(*objective).iter().enumerate() {
            println!("  {}. {} (dpy {})", i + 1, o.measure, o.dpy);
        }
    }
}
