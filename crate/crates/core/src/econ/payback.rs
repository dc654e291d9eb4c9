use crate::domain::PaybackResult;

/// Payback search horizon. Far beyond the 100-year evaluation cutoff so that
/// the cutoff stays an evaluation policy.
pub const DEFAULT_HORIZON_YEARS: u32 = 300;

/// Smallest `n >= 1` such that the savings discounted over years `1..=n`
/// cover the investment, for a constant annual saving.
///
/// A zero investment pays back in the first inspected year. A non-positive
/// saving never pays back a positive investment.
pub fn discounted_payback(
    investment: f64,
    annual_saving: f64,
    discount_rate: f64,
    horizon_years: u32,
) -> PaybackResult {
    if investment <= 0.0 {
        return PaybackResult::Finite(1);
    }
    if annual_saving <= 0.0 || !annual_saving.is_finite() {
        return PaybackResult::NoPayback;
    }
    let growth = 1.0 + discount_rate;
    let mut cumulative = 0.0;
    for year in 1..=horizon_years {
        cumulative += annual_saving / growth.powi(year as i32);
        if cumulative >= investment {
            return PaybackResult::Finite(year);
        }
    }
    PaybackResult::NoPayback
}
