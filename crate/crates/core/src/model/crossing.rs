//! Minimum advantageous problem size along the log10(n) axis.
//!
//! The answer is the smallest size from which the quantum side stays at or
//! below the classical side up to the search cap. Scanning runs downward from
//! the cap over a coarse grid, then bisects the bracket around the highest
//! size where classical is still strictly faster. A spurious quantum win at
//! tiny sizes (e.g. `ln(1) = 0` in a runtime) is therefore ignored.

use std::sync::OnceLock;

use super::ModelError;
use crate::scalar::Scalar;

/// Upper end of the size search, in log10(n).
pub const SIZE_CAP_LOG10: f64 = 1e6;

const FINE_STEP: f64 = 0.05;
const FINE_END: f64 = 10.0;
const COARSE_RATIO: f64 = 1.05;
const BISECT_ITERATIONS: usize = 64;

fn grid() -> &'static [f64] {
    static GRID: OnceLock<Vec<f64>> = OnceLock::new();
    GRID.get_or_init(|| {
        let fine = (FINE_END / FINE_STEP).round() as usize;
        let mut g: Vec<f64> = (0..=fine).map(|k| k as f64 * FINE_STEP).collect();
        let mut l = FINE_END * COARSE_RATIO;
        while l < SIZE_CAP_LOG10 {
            g.push(l);
            l *= COARSE_RATIO;
        }
        g.push(SIZE_CAP_LOG10);
        g
    })
}

/// Smallest log10(n) from which `quantum_wins` holds all the way to the cap.
///
/// Returns `0` when quantum wins everywhere and `+inf` when it does not win
/// at the cap.
pub(crate) fn min_advantage_log10<T, F>(mut quantum_wins: F) -> Result<T, ModelError>
where
    T: Scalar,
    F: FnMut(T) -> Result<bool, ModelError>,
{
    let g = grid();
    let mut above = g.len() - 1;
    if !quantum_wins(T::lit(g[above]))? {
        return Ok(T::infinity());
    }
    let below = loop {
        if above == 0 {
            return Ok(T::zero());
        }
        let k = above - 1;
        if !quantum_wins(T::lit(g[k]))? {
            break k;
        }
        above = k;
    };
    let (mut lo, mut hi) = (T::lit(g[below]), T::lit(g[above]));
    for _ in 0..BISECT_ITERATIONS {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if quantum_wins(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if !hi.is_finite() {
        return Err(ModelError::NoConvergence {
            from: g[below],
            to: g[above],
            message: "bisection left a non-finite bracket".into(),
        });
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_found() {
        let got: f64 = min_advantage_log10(|l: f64| Ok(l >= 32.96)).unwrap();
        assert!((got - 32.96).abs() < 1e-9);
    }

    #[test]
    fn everywhere_and_nowhere() {
        assert_eq!(min_advantage_log10(|_: f64| Ok(true)).unwrap(), 0.0);
        assert_eq!(
            min_advantage_log10(|_: f64| Ok(false)).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn early_spurious_win_ignored() {
        let got: f64 = min_advantage_log10(|l: f64| Ok(l == 0.0 || l >= 2.5)).unwrap();
        assert!((got - 2.5).abs() < 1e-9);
    }

    #[test]
    fn grid_is_increasing_and_capped() {
        let g = grid();
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*g.last().unwrap(), SIZE_CAP_LOG10);
        assert!(g.len() < 600);
    }
}
