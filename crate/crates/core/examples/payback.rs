//! Discounted payback and retrofit cost for one home.
//!
//! ```bash
//! cargo run -p retrofit-core --example payback
//! ```

use retrofit_core::domain::{BuildingGeometry, HvacSubtype, MeasureId};
use retrofit_core::econ::{discounted_payback, measure_cost, DEFAULT_HORIZON_YEARS};

fn main() {
    println!("investment  saving/yr  rate   payback");
    for (investment, saving, rate) in [
        (1000.0, 100.0, 0.03),
        (1000.0, 100.0, 0.06),
        (14_185.0, 164.8, 0.03),
        (4000.0, 100.0, 0.03),
        (0.0, 0.0, 0.03),
    ] {
        let dpy = discounted_payback(investment, saving, rate, DEFAULT_HORIZON_YEARS);
        println!("{investment:>10.0}  {saving:>9.1}  {rate:>4.2}   {dpy}");
    }

    // walls 220 m², roof 110 m², windows 18 m², floor 160 m², cooling 10.5 kW, heating 21 kW
    let geometry = BuildingGeometry::complete(220.0, 110.0, 18.0, 160.0, 10.5, 21.0);
    println!("\nretrofit costs for a 160 m² home with a gas furnace:");
    for measure in MeasureId::applicable(HvacSubtype::NaturalGasFurnace) {
        let cost = measure_cost(measure, &geometry).expect("geometry is complete");
        println!("  {:<36} {:>10.0} USD", measure.to_string(), cost);
    }
}
