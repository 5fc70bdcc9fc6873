use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::count_triangle_factors;
use crate::generators::{gnq, Family};
use crate::par;
use crate::sparsify::check_probability;

/// Largest `n` accepted by [`factor_count_experiment`].
pub const COUNT_CAP: usize = 24;

/// `n!/((n/3)!·6^{n/3})`: triangle factors of `K_n`.
pub fn complete_factor_count(n: usize) -> BigUint {
    let m = n / 3;
    let num: BigUint = (1..=n).fold(BigUint::one(), |a, x| a * x);
    let den: BigUint = (1..=m).fold(BigUint::one(), |a, x| a * x) * BigUint::from(6u32).pow(m as u32);
    num / den
}

/// `E[T(G(n, q))] = q^n·n!/((n/3)!·6^{n/3})`.
pub fn expected_factor_count(n: usize, q: f64) -> f64 {
    q.powi(n as i32) * complete_factor_count(n).to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorCountReport {
    pub n: usize,
    pub q: f64,
    pub trials: usize,
    pub seed: u64,
    /// `T(G)` per trial, exact; decimal strings in JSON.
    #[serde(with = "decimal")]
    pub counts: Vec<BigUint>,
    pub mean: f64,
    pub standard_error: f64,
    pub expected: f64,
    /// `(mean − expected) / standard_error`; zero when both agree exactly.
    pub z_score: f64,
    pub within_three_se: bool,
    /// Fraction of samples with at least one triangle factor.
    pub factor_fraction: f64,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}

/// Samples `G(n, q)` and counts its triangle factors exactly, comparing the
/// empirical mean with the first-moment formula.
pub fn factor_count_experiment(n: usize, q: f64, trials: usize, seed: u64) -> Result<FactorCountReport> {
    check_probability(q)?;
    if !n.is_multiple_of(3) {
        return Err(Error::InvalidArgument(format!("n = {n} is not divisible by 3")));
    }
    if n > COUNT_CAP {
        return Err(Error::CapExceeded(format!(
            "n = {n} exceeds the exact-count cap {COUNT_CAP}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let family = Family::Gnq { q };
    let counts: Vec<BigUint> = par::map_range(trials, |i| {
        let g = gnq(n, q, super::trial_seed(seed, &family, n, i))?;
        Ok(count_triangle_factors(&g).value)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let xs: Vec<f64> = counts.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect();
    let t = trials as f64;
    let mean = xs.iter().sum::<f64>() / t;
    let var = if trials > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    let standard_error = (var / t).sqrt();
    let expected = expected_factor_count(n, q);
    let diff = mean - expected;
    let tol = 1e-9 * expected.abs().max(1.0);
    let z_score = if diff.abs() <= tol {
        0.0
    } else if standard_error > 0.0 {
        diff / standard_error
    } else {
        f64::INFINITY.copysign(diff)
    };
    Ok(FactorCountReport {
        n,
        q,
        trials,
        seed,
        factor_fraction: xs.iter().filter(|&&x| x > 0.0).count() as f64 / t,
        counts,
        mean,
        standard_error,
        expected,
        z_score,
        within_three_se: z_score.abs() <= 3.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_counts() {
        assert_eq!(complete_factor_count(3), BigUint::from(1u32));
        assert_eq!(complete_factor_count(6), BigUint::from(10u32));
        assert_eq!(complete_factor_count(9), BigUint::from(280u32));
    }

    #[test]
    fn q_one_and_zero() {
        let r = factor_count_experiment(9, 1.0, 4, 3).unwrap();
        assert!(r.counts.iter().all(|c| *c == BigUint::from(280u32)));
        assert!(r.within_three_se && r.z_score == 0.0);
        let r = factor_count_experiment(9, 0.0, 4, 3).unwrap();
        assert!(r.counts.iter().all(|c| *c == BigUint::from(0u32)));
        assert!(factor_count_experiment(10, 0.5, 4, 3).is_err());
        assert!(factor_count_experiment(27, 0.5, 4, 3).is_err());
    }
}
