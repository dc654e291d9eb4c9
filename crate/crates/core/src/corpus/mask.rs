use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{BuildingRecord, FieldName};
use crate::seed::rng_for;

/// Upper bound on the configurable mask fraction.
pub const MAX_MASK_FRACTION: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskPolicy {
    pub core_fields: Vec<FieldName>,
    pub maskable_fields: Vec<FieldName>,
    pub mask_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaskPolicyError {
    #[error("mask fraction {0} outside [0, {MAX_MASK_FRACTION}]")]
    Fraction(f64),
    #[error("field {0} is both core and maskable")]
    Overlap(FieldName),
    #[error("field {0} must be a core field")]
    MissingCore(FieldName),
}

impl MaskPolicy {
    /// Core fields are the five anchors; the other 16 are maskable.
    pub fn new(mask_fraction: f64, seed: u64) -> Self {
        MaskPolicy {
            core_fields: FieldName::CORE.to_vec(),
            maskable_fields: FieldName::ALL
                .iter()
                .copied()
                .filter(|f| !f.is_core())
                .collect(),
            mask_fraction,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), MaskPolicyError> {
        if !(0.0..=MAX_MASK_FRACTION).contains(&self.mask_fraction) {
            return Err(MaskPolicyError::Fraction(self.mask_fraction));
        }
        for required in [
            FieldName::BuildingType,
            FieldName::ConditionedFloorArea,
            FieldName::VintageDecade,
        ] {
            if !self.core_fields.contains(&required) {
                return Err(MaskPolicyError::MissingCore(required));
            }
        }
        if let Some(f) = self
            .maskable_fields
            .iter()
            .find(|f| self.core_fields.contains(f))
        {
            return Err(MaskPolicyError::Overlap(*f));
        }
        Ok(())
    }
}

/// Draw a fraction uniformly from `[0, mask_fraction]` and mark
/// `round(fraction * |maskable|)` maskable fields Unknown. The draw depends
/// only on the policy seed and the building id.
pub fn mask_record(
    record: &BuildingRecord,
    policy: &MaskPolicy,
) -> (BuildingRecord, Vec<FieldName>) {
    let mut rng = rng_for(policy.seed, &format!("mask/{}", record.building_id));
    let fraction = if policy.mask_fraction > 0.0 {
        rng.random_range(0.0..=policy.mask_fraction)
    } else {
        0.0
    };
    let n = policy.maskable_fields.len();
    let k = ((fraction * n as f64).round() as usize).min(n);

    let mut masked: Vec<FieldName> = index::sample(&mut rng, n, k)
        .into_iter()
        .map(|i| policy.maskable_fields[i])
        .collect();
    masked.sort();
    let mut out = record.clone();
    for &f in &masked {
        out.clear(f);
    }
    (out, masked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gen_buildings;

    #[test]
    fn policy_shape() {
        let p = MaskPolicy::new(0.4, 1);
        p.validate().unwrap();
        assert_eq!(p.maskable_fields.len(), 16);
        assert!(MaskPolicy::new(0.5, 1).validate().is_err());
        let mut bad = MaskPolicy::new(0.2, 1);
        bad.core_fields.retain(|f| *f != FieldName::VintageDecade);
        assert_eq!(
            bad.validate(),
            Err(MaskPolicyError::MissingCore(FieldName::VintageDecade))
        );
    }

    #[test]
    fn zero_fraction_is_identity() {
        let (record, _) = gen_buildings(1, 1).remove(0);
        let (masked, fields) = mask_record(&record, &MaskPolicy::new(0.0, 9));
        assert_eq!(masked, record);
        assert!(fields.is_empty());
    }

    #[test]
    fn core_fields_survive_and_count_is_bounded() {
        let (record, _) = gen_buildings(1, 1).remove(0);
        let mut max_seen = 0;
        for seed in 0..2_000 {
            let (masked, fields) = mask_record(&record, &MaskPolicy::new(0.4, seed));
            assert!(fields.len() <= 6);
            max_seen = max_seen.max(fields.len());
            for f in FieldName::CORE {
                assert!(masked.is_known(f));
            }
            for f in &fields {
                assert!(!masked.is_known(*f));
            }
            assert_eq!(masked.known_fields().len(), 21 - fields.len());
        }
        assert_eq!(max_seen, 6);
    }

    #[test]
    fn deterministic_per_record_and_seed() {
        let (record, _) = gen_buildings(1, 1).remove(0);
        let p = MaskPolicy::new(0.4, 3);
        assert_eq!(mask_record(&record, &p), mask_record(&record, &p));
    }
}
