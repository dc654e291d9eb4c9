use std::sync::LazyLock;

use proptest::prelude::*;
use proptest::sample::{select, subsequence};
use retrofit_core::advisor::{recommend, AdvisorConfig, DistanceWeights, PrototypeStore, Query};
use retrofit_core::domain::{FieldName, RateTable};
use retrofit_core::pipeline::run_synthetic;
use retrofit_core::ranker::Objective;
use retrofit_core::synth::{gen_building, SurrogateParams};

static STORE: LazyLock<PrototypeStore> = LazyLock::new(|| {
    let run = run_synthetic(60, 33, &SurrogateParams::default(), &RateTable::default()).unwrap();
    PrototypeStore::new(run.prototypes).unwrap()
});

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn masking_never_increases_distance(
        seed in any::<u64>(),
        masked in subsequence(FieldName::ALL.to_vec(), 0..10),
        extra in select(FieldName::ALL.to_vec()),
    ) {
        let (mut query, _) = gen_building("q", seed);
        for f in masked {
            query.clear(f);
        }
        let mut more = query.clone();
        more.clear(extra);
        let w = DistanceWeights::default();
        for p in STORE.prototypes() {
            prop_assert!(STORE.distance(&more, &p.record, &w) <= STORE.distance(&query, &p.record, &w));
        }
    }

    #[test]
    fn recommendations_are_deterministic(seed in any::<u64>(), min_dpy in any::<bool>()) {
        let (record, _) = gen_building("q", seed);
        let query = Query {
            record: Some(record),
            objective: if min_dpy { Objective::MinDpy } else { Objective::MaxCo2Reduction },
            ..Query::default()
        };
        let config = AdvisorConfig::default();
        let a = recommend(&query, &STORE, &config).unwrap();
        let b = recommend(&query, &STORE, &config).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
