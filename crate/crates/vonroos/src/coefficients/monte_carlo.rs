//! Seeded Monte Carlo estimator, the independent oracle for the quadrature
//! path.
//!
//! Uniform rejection sampling over the square bounding box of the region;
//! accepted points contribute their density to self-normalized ratio
//! estimators for the two coefficients. Standard errors come from the delta
//! method for a ratio of sample means, so they shrink as `n^(-1/2)`.
//! Results are bit-reproducible for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Region;
use crate::weight::{WeightError, WeightSpec};

use super::{eta1_integrand, eta2_integrand, CoefficientError};

/// Smallest sample count accepted.
pub const MIN_MC_SAMPLES: u64 = 1000;

/// Monte Carlo estimate with delta-method standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub eta1: f64,
    pub eta2: f64,
    pub stderr1: f64,
    pub stderr2: f64,
    /// Total samples drawn (including rejected ones).
    pub n: u64,
    pub seed: u64,
    /// Samples that landed inside the region.
    pub accepted: u64,
}

/// Estimate `(eta1, eta2)` by rejection sampling with `n` draws.
pub fn mc_estimate(
    region: &Region,
    weight: &WeightSpec,
    n: u64,
    seed: u64,
) -> Result<McEstimate, CoefficientError> {
    if !weight.is_continuous() {
        return Err(WeightError::NotContinuous.into());
    }
    if n < MIN_MC_SAMPLES {
        return Err(CoefficientError::TooFewSamples {
            min: MIN_MC_SAMPLES,
            got: n,
        });
    }
    if region.is_degenerate() {
        return Err(CoefficientError::DegenerateRegion);
    }

    let (lo, hi) = region.bounding_box();
    let width = hi - lo;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Per-sample variables: b = rho (zero when rejected), a = rho * first
    // integrand, g = rho * second integrand.
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut sum_g = 0.0;
    let mut sum_aa = 0.0;
    let mut sum_ab = 0.0;
    let mut sum_bb = 0.0;
    let mut sum_gg = 0.0;
    let mut sum_gb = 0.0;
    let mut accepted = 0u64;

    for _ in 0..n {
        let alpha = lo + width * rng.random::<f64>();
        let beta = lo + width * rng.random::<f64>();
        if !region.contains(alpha, beta) {
            continue;
        }
        let rho = weight.eval(alpha, beta)?;
        let a = rho * eta1_integrand(alpha, beta);
        let g = rho * eta2_integrand(alpha, beta);
        sum_a += a;
        sum_b += rho;
        sum_g += g;
        sum_aa += a * a;
        sum_ab += a * rho;
        sum_bb += rho * rho;
        sum_gg += g * g;
        sum_gb += g * rho;
        accepted += 1;
    }

    if sum_b <= 0.0 {
        return Err(CoefficientError::NoAcceptedSamples);
    }

    let nf = n as f64;
    let mean_b = sum_b / nf;
    let eta1 = sum_a / sum_b;
    let eta2 = sum_g / sum_b;
    // Var(a - R b) over all n draws, rejected draws contributing zeros.
    let var1 = (sum_aa - 2.0 * eta1 * sum_ab + eta1 * eta1 * sum_bb) / (nf - 1.0);
    let var2 = (sum_gg - 2.0 * eta2 * sum_gb + eta2 * eta2 * sum_bb) / (nf - 1.0);
    let stderr1 = (var1 / nf).sqrt() / mean_b;
    let stderr2 = (var2 / nf).sqrt() / mean_b;

    Ok(McEstimate {
        eta1,
        eta2,
        stderr1,
        stderr2,
        n,
        seed,
        accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::uniform_closed_form;

    #[test]
    fn deterministic_for_a_fixed_seed() {
        let region = Region::new(0.0).unwrap();
        let a = mc_estimate(&region, &WeightSpec::Uniform, 10_000, 7).unwrap();
        let b = mc_estimate(&region, &WeightSpec::Uniform, 10_000, 7).unwrap();
        assert_eq!(a, b);
        let c = mc_estimate(&region, &WeightSpec::Uniform, 10_000, 8).unwrap();
        assert_ne!(a.eta1, c.eta1);
    }

    #[test]
    fn uniform_estimates_bracket_the_closed_form() {
        let region = Region::new(0.0).unwrap();
        let est = mc_estimate(&region, &WeightSpec::Uniform, 200_000, 42).unwrap();
        let closed = uniform_closed_form(0.0).unwrap();
        assert!(
            (est.eta1 - closed.eta1).abs() <= 3.0 * est.stderr1,
            "eta1 {} vs {} (stderr {})",
            est.eta1,
            closed.eta1,
            est.stderr1
        );
        assert!(
            (est.eta2 - closed.eta2).abs() <= 3.0 * est.stderr2,
            "eta2 {} vs {} (stderr {})",
            est.eta2,
            closed.eta2,
            est.stderr2
        );
        // roughly half the box lands in the triangle at b = 0
        let rate = est.accepted as f64 / est.n as f64;
        assert!((rate - 0.5).abs() < 0.01, "acceptance rate {rate}");
    }

    #[test]
    fn stderr_shrinks_with_sample_count() {
        let region = Region::new(0.0).unwrap();
        let small = mc_estimate(&region, &WeightSpec::Uniform, 10_000, 3).unwrap();
        let large = mc_estimate(&region, &WeightSpec::Uniform, 640_000, 3).unwrap();
        let shrink = small.stderr1 / large.stderr1;
        // n grows by 64, so stderr should shrink by about 8
        assert!((6.0..10.0).contains(&shrink), "shrink factor {shrink}");
    }

    #[test]
    fn input_validation() {
        let region = Region::new(0.0).unwrap();
        assert!(matches!(
            mc_estimate(&region, &WeightSpec::Uniform, 10, 1),
            Err(CoefficientError::TooFewSamples { .. })
        ));
        let degenerate = Region::new(crate::domain::MIN_REGION_SIZE).unwrap();
        assert!(matches!(
            mc_estimate(&degenerate, &WeightSpec::Uniform, 10_000, 1),
            Err(CoefficientError::DegenerateRegion)
        ));
        let discrete = crate::weight::preset_orderings();
        assert!(matches!(
            mc_estimate(&region, &discrete, 10_000, 1),
            Err(CoefficientError::Weight(WeightError::NotContinuous))
        ));
    }
}
