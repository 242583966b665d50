//! Quasi-Monte-Carlo reference integrator. Test-suite oracle only: the
//! production paths never call into this module.
//!
//! Uses the R₂ low-discrepancy lattice with Cranley–Patterson random
//! shifts, so each estimate comes with a statistical error bar from the
//! spread over independent shifts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Integral estimate with a standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    /// |value - reference| within k standard errors (plus a tiny floor for
    /// exactly-integrable cases).
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        (self.value - reference).abs() <= k * self.std_error + 1e-12 * reference.abs()
    }
}

/// Generalized-golden-ratio increments for the R₂ sequence in `dim`
/// dimensions.
fn r2_alphas(dim: usize) -> Vec<f64> {
    // φ_d is the unique positive root of x^{d+1} = x + 1.
    let d = dim as f64;
    let mut phi = 1.5f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (d + 1.0));
    }
    (1..=dim).map(|k| (1.0 / phi.powi(k as i32)).fract()).collect()
}

/// ∫_{[lo,hi]^dim} f dx by a shifted R₂ lattice; `shifts` independent
/// Cranley–Patterson offsets provide the error estimate.
pub fn integrate_box(
    f: impl Fn(&[f64]) -> f64 + Sync,
    lo: f64,
    hi: f64,
    dim: usize,
    samples: usize,
    shifts: usize,
    seed: u64,
) -> McEstimate {
    use rayon::prelude::*;
    let alphas = r2_alphas(dim);
    let vol = (hi - lo).powi(dim as i32);
    let per_shift = samples / shifts.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offsets: Vec<Vec<f64>> = (0..shifts)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let means: Vec<f64> = offsets
        .par_iter()
        .map(|offset| {
            let mut acc = crate::quad::Kahan::new();
            let mut x = vec![0.0; dim];
            for k in 0..per_shift {
                for (d, xd) in x.iter_mut().enumerate() {
                    let u = (offset[d] + alphas[d] * (k as f64 + 1.0)).fract();
                    *xd = lo + (hi - lo) * u;
                }
                acc.add(f(&x));
            }
            vol * acc.sum() / per_shift as f64
        })
        .collect();
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    let var = means
        .iter()
        .map(|m| (m - mean) * (m - mean))
        .sum::<f64>()
        / (means.len().max(2) - 1) as f64;
    McEstimate {
        value: mean,
        std_error: (var / means.len() as f64).sqrt(),
        samples: per_shift * shifts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_box_integral() {
        // ∫_{R⁴} e^{-|x|²} dx = π², box truncation at ±5 is ≤ 1e-10 off.
        let est = integrate_box(
            |x| (-x.iter().map(|v| v * v).sum::<f64>()).exp(),
            -5.0,
            5.0,
            4,
            400_000,
            8,
            17,
        );
        assert!(
            est.agrees_with(std::f64::consts::PI.powi(2), 3.5),
            "{est:?} vs {}",
            std::f64::consts::PI.powi(2)
        );
        assert!(est.std_error < 3e-2, "{est:?}");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = |x: &[f64]| x[0] * x[0] + x[1];
        let a = integrate_box(f, 0.0, 1.0, 2, 10_000, 4, 9);
        let b = integrate_box(f, 0.0, 1.0, 2, 10_000, 4, 9);
        assert_eq!(a.value, b.value);
    }
}
