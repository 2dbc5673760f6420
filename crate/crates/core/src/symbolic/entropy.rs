use super::{EpsilonMachine, ProbabilityDistribution, SymbolicError};
use crate::Scalar;

/// Below this probability `entropy_term_precise` switches to the rational
/// Shanks approximation of `ln(1 − x)`.
pub const PRECISE_SWITCHOVER: f64 = 1e-8;

/// Rational approximation `ln(1 − x) ≈ −x(6 − x)/(6 − 4x)`, exact through `x³`.
pub fn log1m_shanks<F: Scalar>(x: F) -> Result<F, SymbolicError> {
    if !(x >= F::zero() && x < F::one()) {
        return Err(SymbolicError::Domain {
            name: "x",
            value: x.to_f64().unwrap_or(f64::NAN),
            domain: "[0, 1)",
        });
    }
    let six = F::lit(6.0);
    Ok(-x * (six - x) / (six - F::lit(4.0) * x))
}

/// `−(1 − p)·log₂(1 − p)` in bits, accurate for `p` far below the resolution of `1 − p`.
pub fn entropy_term_precise<F: Scalar>(p: F) -> Result<F, SymbolicError> {
    if !(p >= F::zero() && p <= F::one()) {
        return Err(SymbolicError::Domain {
            name: "p",
            value: p.to_f64().unwrap_or(f64::NAN),
            domain: "[0, 1]",
        });
    }
    if p == F::one() {
        return Ok(F::zero());
    }
    let ln_one_minus_p = if p < F::lit(PRECISE_SWITCHOVER) {
        log1m_shanks(p)?
    } else {
        (-p).ln_1p()
    };
    Ok(-(F::one() - p) * ln_one_minus_p / F::lit(std::f64::consts::LN_2))
}

fn plogp<F: Scalar>(w: F) -> F {
    if w > F::zero() {
        -w * w.log2()
    } else {
        F::zero()
    }
}

/// Shannon entropy in bits.
///
/// A weight within [`PRECISE_SWITCHOVER`] of one contributes through its
/// complement (the summed remaining mass), which keeps terms like
/// `(1 − 2⁻⁷²)·log₂(1 − 2⁻⁷²)` that a plain `w·log₂ w` rounds to zero.
pub fn shannon_entropy<F: Scalar>(dist: &ProbabilityDistribution<F>) -> Result<F, SymbolicError> {
    // Re-validate: the value may have been deserialized or built elsewhere.
    let dist = ProbabilityDistribution::new(dist.weights().to_vec())?;
    let weights = dist.weights();
    let switch = F::lit(PRECISE_SWITCHOVER);
    let mut total = F::zero();
    for (i, &w) in weights.iter().enumerate() {
        total = total
            + if F::one() - w < switch {
                let rest: F = weights
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, &v)| v)
                    .sum();
                entropy_term_precise(rest.min(F::one()))?
            } else {
                plogp(w)
            };
    }
    Ok(total.max(F::zero()))
}

/// `H(p, 1 − p)` in bits.
pub fn binary_entropy<F: Scalar>(p: F) -> Result<F, SymbolicError> {
    if !(p >= F::zero() && p <= F::one()) {
        return Err(SymbolicError::Domain {
            name: "p",
            value: p.to_f64().unwrap_or(f64::NAN),
            domain: "[0, 1]",
        });
    }
    let small = if p > F::lit(0.5) { F::one() - p } else { p };
    Ok(plogp(small) + entropy_term_precise(small)?)
}

/// Statistical complexity `C_μ = H[P(σ)]` in bits.
pub fn statistical_complexity<F: Scalar>(machine: &EpsilonMachine<F>) -> Result<F, SymbolicError> {
    shannon_entropy(machine.state_probabilities())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(w: &[f64]) -> ProbabilityDistribution<f64> {
        ProbabilityDistribution::new(w.to_vec()).unwrap()
    }

    fn series(x: f64) -> f64 {
        -x - x * x / 2.0 - x * x * x / 3.0 - x * x * x * x / 4.0
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&dist(&[1.0])).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&dist(&[0.5, 0.5])).unwrap(), 1.0);
        // −Σ p log₂ p evaluated at 60 digits.
        let h = shannon_entropy(&dist(&[2.0 / 3.0, 1.0 / 3.0])).unwrap();
        assert!((h - 0.918_295_834_054_489_5).abs() < 1e-15);
    }

    #[test]
    fn entropy_uses_complement_for_near_certain_weight() {
        let p = 2f64.powi(-72);
        let h = shannon_entropy(&dist(&[1.0 - p, p])).unwrap();
        // extended-precision value 1.5552095608695741606e-20
        assert!((h / 1.555_209_560_869_574_2e-20 - 1.0).abs() < 1e-12);
        assert!((h / 1.56e-20 - 1.0).abs() < 0.01);
    }

    #[test]
    fn entropy_rejects_invalid() {
        let bad = serde_json::from_str::<ProbabilityDistribution<f64>>("[0.7, 0.7]").unwrap();
        assert!(shannon_entropy(&bad).is_err());
    }

    #[test]
    fn shanks_examples() {
        assert_eq!(log1m_shanks(0.0f64).unwrap(), 0.0);
        let x = 1e-10f64;
        let s = log1m_shanks(x).unwrap();
        assert!(((s - series(x)) / series(x)).abs() <= 1e-12);
        assert_eq!(log1m_shanks(0.5f64).unwrap(), -0.6875);
        assert!((log1m_shanks(0.5f64).unwrap() - 0.5f64.ln()).abs() > 5e-3);
        assert!(log1m_shanks(1.0f64).is_err());
        assert!(log1m_shanks(-1e-3f64).is_err());
    }

    #[test]
    fn precise_term_examples() {
        assert_eq!(entropy_term_precise(0.0f64).unwrap(), 0.0);
        assert_eq!(entropy_term_precise(0.5f64).unwrap(), 0.5);
        let p = 2f64.powi(-72);
        // extended precision: 3.055025581183355032e-22
        let t = entropy_term_precise(p).unwrap();
        assert!((t / 3.055_025_581_183_355e-22 - 1.0).abs() < 1e-12);
        assert!(entropy_term_precise(1.5f64).is_err());
    }

    #[test]
    fn precise_term_continuous_at_switchover() {
        let below = entropy_term_precise(PRECISE_SWITCHOVER * (1.0 - 1e-12)).unwrap();
        let at = entropy_term_precise(PRECISE_SWITCHOVER).unwrap();
        assert!(((below - at) / at).abs() <= 1e-9);
    }

    #[test]
    fn binary_entropy_matches_oracle() {
        // 60-digit reference values.
        let cases: [(f64, f64); 6] = [
            (1e-30, 1.011_005_378_875_098_3e-28),
            (1e-20, 6.788_125_693_863_621e-19),
            (2f64.powi(-72), 1.555_209_560_869_574_2e-20),
            (1e-6, 2.137_426_288_886_537_7e-5),
            (1.0 / 16.0, 0.337_290_066_617_013_9),
            (0.5, 1.0),
        ];
        for (p, want) in cases {
            let got = binary_entropy(p).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "p={p}: {got} vs {want}");
        }
        assert!((binary_entropy(0.75f64).unwrap() - binary_entropy(0.25f64).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn f32_path_agrees() {
        let p = 2f32.powi(-72);
        let h = binary_entropy(p).unwrap();
        assert!((h / 1.555_209_6e-20 - 1.0).abs() < 1e-5);
    }
}
