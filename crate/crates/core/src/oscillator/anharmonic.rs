//! Cubic approximation to the anharmonic spectrum:
//! `x³ − x = (4/3)(1 + 2n/3)λ` with `Ω_n = (2n + 1)x`.

use crate::error::{Error, Result};

use super::params::{EnergyLevel, ModelParams};

/// `|β|` beyond which a negative coupling leaves no root on the harmonic branch.
pub fn breakdown_beta() -> f64 {
    2.0 / (3.0 * 3f64.sqrt())
}

/// Right-hand side `β_n` of the level equation.
pub fn level_beta(lambda: f64, n: usize) -> f64 {
    4.0 / 3.0 * (1.0 + 2.0 * n as f64 / 3.0) * lambda
}

/// Root of `x³ − x = β` on the branch through `x = 1` at `β = 0`.
pub fn branch_root(beta: f64) -> Option<f64> {
    if !beta.is_finite() {
        return None;
    }
    if beta == 0.0 {
        return Some(1.0);
    }
    let f = |x: f64| x * x * x - x - beta;
    let (mut lo, mut hi) = if beta > 0.0 {
        (1.0, 1.0 + beta)
    } else {
        if -beta > breakdown_beta() {
            return None;
        }
        (3f64.sqrt().recip(), 1.0)
    };
    // f(lo) <= 0 < f(hi) on both branches
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    Some(x)
}

/// Level `n` for coupling `lambda`; the intrinsic volume is scaled by `params`.
pub fn anharmonic_level(lambda: f64, n: usize, params: &ModelParams) -> Result<EnergyLevel> {
    let beta = level_beta(lambda, n);
    let x = branch_root(beta).ok_or(Error::LevelBreakdown { n, beta })?;
    Ok(EnergyLevel::new(n, (2 * n + 1) as f64 * x, params))
}

/// Levels `0..=n_max`; fails at the first level without a branch root.
pub fn anharmonic_levels(lambda: f64, n_max: usize, params: &ModelParams) -> Result<Vec<EnergyLevel>> {
    (0..=n_max).map(|n| anharmonic_level(lambda, n, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ModelParams {
        ModelParams::harmonic(1.0, 1.0).unwrap()
    }

    fn bisect_oracle(beta: f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - mid - beta > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn zero_coupling_gives_odd_integers() {
        let levels = anharmonic_levels(0.0, 3, &unit()).unwrap();
        let omegas: Vec<f64> = levels.iter().map(|l| l.omega).collect();
        assert_eq!(omegas, vec![1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn ground_level_matches_bisection_oracle() {
        let beta = 4.0 / 3.0 * 0.1;
        let expected = bisect_oracle(beta, 1.0, 2.0);
        let l0 = anharmonic_level(0.1, 0, &unit()).unwrap();
        assert!((l0.omega - expected).abs() < 1e-13);
        assert!(l0.omega > 1.0);
        let x = l0.omega;
        assert!((x * x * x - x - beta).abs() <= 1e-12);
    }

    #[test]
    fn positive_coupling_gaps_grow() {
        let l = anharmonic_levels(0.05, 2, &unit()).unwrap();
        let g1 = l[1].omega - l[0].omega;
        let g2 = l[2].omega - l[1].omega;
        assert!(g1 > 2.0 && g2 > g1, "gaps {g1} {g2}");
    }

    #[test]
    fn negative_coupling_gaps_shrink() {
        let l = anharmonic_levels(-0.05, 5, &unit()).unwrap();
        assert!(l[0].omega < 1.0);
        let gaps: Vec<f64> = l.windows(2).map(|w| w[1].omega - w[0].omega).collect();
        assert!(gaps.iter().all(|g| *g < 2.0));
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        for lvl in &l {
            let x = lvl.omega / (2 * lvl.n + 1) as f64;
            assert!(x > 3f64.sqrt().recip() && x < 1.0);
            let beta = level_beta(-0.05, lvl.n);
            assert!((x * x * x - x - beta).abs() <= 1e-12);
        }
    }

    #[test]
    fn breakdown_for_strong_negative_coupling() {
        // β_0 = -4/3 · 0.5 lies past -2/(3√3)
        let err = anharmonic_level(-0.5, 0, &unit()).unwrap_err();
        assert!(matches!(err, Error::LevelBreakdown { n: 0, .. }));
        // λ = -0.05 survives to n = 7 and breaks at n = 8
        assert!(anharmonic_level(-0.05, 7, &unit()).is_ok());
        assert!(anharmonic_level(-0.05, 8, &unit()).is_err());
        assert!(anharmonic_levels(-0.05, 8, &unit()).is_err());
    }

    #[test]
    fn energy_scale_applied() {
        let p = ModelParams::new(4.0, 1.0, 0.0).unwrap();
        let l = anharmonic_level(0.2, 1, &p).unwrap();
        assert!((l.e_bar - 0.5 * 2.0 * l.omega).abs() < 1e-15);
    }
}
