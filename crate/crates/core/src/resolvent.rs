//! Free resolvent kernels `R_h±(σ, z)` of `(h²G₀ - z²)^{-1}`, the
//! perturbed resolvent built through the dense inversion of
//! `1 + h²V R₀,h±(z)`, and the associated envelope measurements.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::potential::{RadialPotential, ResonanceOutcome};
use crate::radialops::fit::{fit_envelope, EnvelopeFitReport, SampleSet};
use crate::radialops::{DiscretizedOperator, RadialKernel};
use crate::specfun::{self, Branch, Order};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Spectral point for resolvent evaluation: `(h²G₀ - z²)^{-1}` with
/// ±Im z ≥ 0 matching the branch.
#[derive(Debug, Clone, Copy)]
pub struct ResolventPoint {
    pub z: Complex64,
    pub branch: Branch,
    pub h: f64,
    pub dimension: u32,
}

impl ResolventPoint {
    pub fn new(z: Complex64, branch: Branch, h: f64, dimension: u32) -> Result<Self> {
        if h <= 0.0 {
            return Err(Error::Domain("scale h must be positive".into()));
        }
        match branch {
            Branch::Plus if z.im < 0.0 => {
                return Err(Error::Domain("plus branch needs Im z ≥ 0".into()))
            }
            Branch::Minus if z.im > 0.0 => {
                return Err(Error::Domain("minus branch needs Im z ≤ 0".into()))
            }
            _ => {}
        }
        Ok(ResolventPoint {
            z,
            branch,
            h,
            dimension,
        })
    }

    pub fn order(&self) -> Order {
        Order::from_dimension(self.dimension).expect("dimension validated at construction")
    }
}

/// Kernel prefactor `± i σ^{-2ν} / (4 (2π)^ν)`.
fn kernel_prefactor(n: u32, branch: Branch) -> Complex64 {
    let nu = (n as f64 - 2.0) / 2.0;
    Complex64::new(0.0, branch.sign()) / (4.0 * (2.0 * PI).powf(nu))
}

/// Free resolvent kernel
/// `R_h±(σ, z) = ± h^{-2} i σ^{-2ν} / (4(2π)^ν) · ℋν±(σ z / h)`.
pub fn free_resolvent_kernel(p: &ResolventPoint, sigma: f64) -> Result<Complex64> {
    if sigma <= 0.0 {
        return Err(Error::Domain(format!("σ must be positive, got {sigma}")));
    }
    let order = p.order();
    let lam = sigma * p.z / p.h;
    let h_val = if lam == Complex64::default() {
        specfun::hankel_scaled_at_zero(order, p.branch)
    } else {
        specfun::hankel_scaled(order, p.branch, lam)?.value
    };
    let two_nu = order.two_nu();
    Ok(p.h.powi(-2) * kernel_prefactor(p.dimension, p.branch) * sigma.powi(-two_nu) * h_val)
}

/// The free resolvent as a `RadialKernel` (unit profile at h = 1 rescaled
/// exactly, so the scaling identity `R_h(σ,z) = h^{-n} R_1(σ/h, z)` is
/// structural).
pub fn free_resolvent_radial_kernel(p: &ResolventPoint) -> RadialKernel {
    let unit = ResolventPoint {
        h: 1.0,
        ..*p
    };
    let n = p.dimension;
    RadialKernel::new(n, p.h, move |s| {
        free_resolvent_kernel(&unit, s).unwrap_or_default()
    })
}

/// Interpolation-backed profile of σ ↦ R(σ, z) for operator assembly:
/// σ² R(σ, z) is smooth on a log grid, so that combination is tabulated.
pub fn free_resolvent_profile(
    p: &ResolventPoint,
    s_min: f64,
    s_max: f64,
) -> Result<impl Fn(f64) -> Complex64 + Send + Sync + Clone + use<>> {
    let order = p.order();
    let two_nu = order.two_nu();
    let pref = p.h.powi(-2) * kernel_prefactor(p.dimension, p.branch);
    let zh = p.z / p.h;
    let branch = p.branch;
    // Resolve the e^{iσ|z|/h} oscillation: points per log-unit scaled by
    // the largest phase per log-step at s_max.
    let lo = (0.5 * s_min).ln();
    let hi = (2.0 * s_max).ln();
    let zmag = zh.norm().max(1e-9);
    let pts = (((hi - lo) * (3.0 + 6.0 * zmag * s_max / (hi - lo))).ceil() as usize)
        .clamp(600, 30_000);
    let step = (hi - lo) / (pts - 1) as f64;
    let values: Vec<Complex64> = (0..pts)
        .map(|i| {
            let s = (lo + step * i as f64).exp();
            let lam = s * zh;
            let h_val = if lam == Complex64::default() {
                specfun::hankel_scaled_at_zero(order, branch)
            } else {
                match branch {
                    Branch::Plus => specfun::cyl::hankel_scaled_plus(two_nu, lam),
                    Branch::Minus => specfun::cyl::hankel_scaled_minus(two_nu, lam),
                }
            };
            // store σ^{2} · R(σ) · σ^{2ν-2}⁻¹-free part: keep σ^{2ν} R
            pref * h_val
        })
        .collect();
    Ok(move |s: f64| -> Complex64 {
        let t = ((s.max(s_min * 0.5).min(s_max * 2.0)).ln() - lo) / step;
        let i = (t.floor() as usize).clamp(1, pts - 3);
        let f = t - i as f64;
        let (p0, p1, p2, p3) = (values[i - 1], values[i], values[i + 1], values[i + 2]);
        let smooth = 0.5
            * ((2.0 * p1)
                + (p2 - p0) * f
                + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (f * f)
                + (3.0 * (p1 - p2) + p3 - p0) * (f * f * f));
        smooth * s.powi(-two_nu)
    })
}

/// Discretized free resolvent `R₀,h±(z)` on a grid.
pub fn free_resolvent_op(p: &ResolventPoint, grid: Arc<RadialGrid>) -> Result<DiscretizedOperator> {
    let profile = free_resolvent_profile(p, grid.nodes()[0].min(1e-4), 2.2 * grid.s_max())?;
    Ok(DiscretizedOperator::convolution(
        grid,
        &profile,
        10,
        10,
    ))
}

/// Envelope of `|R₁±(σ,z)| ≤ C σ^{-2ν} ⟨σ⟩^{-5/2} |Im z|^{-(n+2)/2}`
/// for Im z ≠ 0.
pub fn decay_envelope_2_16(
    n: u32,
    z: Complex64,
    sigma_grid: &[f64],
) -> Result<EnvelopeFitReport> {
    if z.im == 0.0 {
        return Err(Error::Domain(
            "the |Im z|-envelope is undefined on the real axis".into(),
        ));
    }
    let branch = if z.im > 0.0 { Branch::Plus } else { Branch::Minus };
    let p = ResolventPoint::new(z, branch, 1.0, n)?;
    let two_nu = n as f64 - 2.0;
    let mut set = SampleSet::new(&["sigma"]);
    for &s in sigma_grid {
        let v = free_resolvent_kernel(&p, s)?;
        let env = s.powf(-two_nu)
            * (1.0 + s * s).powf(-5.0 / 4.0)
            * z.im.abs().powf(-(n as f64 + 2.0) / 2.0);
        set.push(&[s], v.norm(), env);
    }
    fit_envelope(&set, "2.16")
}

/// Perturbed resolvent data: the inversion factor
/// `(1 + h² V R₀,h±(z))^{-1}` and its validity diagnostics.
#[derive(Debug, Clone)]
pub struct PerturbedResolvent {
    pub base: ResolventPoint,
    pub inverse_factor: DiscretizedOperator,
    pub valid: bool,
    pub smallest_singular: f64,
    /// L¹ residual of `inverse_factor · (1 + h²VR₀) - 1`.
    pub residual: f64,
}

/// Builds `1 + h² V R₀,h±(z)` on the grid.
pub fn one_plus_h2_v_r0(
    v: &RadialPotential,
    p: &ResolventPoint,
    grid: Arc<RadialGrid>,
) -> Result<DiscretizedOperator> {
    let r0 = free_resolvent_op(p, grid.clone())?;
    let mult = DiscretizedOperator::multiplication(grid.clone(), &|r| {
        Complex64::new(v.eval(r), 0.0)
    });
    let vr0 = mult.compose(&r0).scale(Complex64::new(p.h * p.h, 0.0));
    Ok(DiscretizedOperator::identity(grid).add(&vr0))
}

/// Inverts `1 + h²VR₀,h±(z)` by dense factorization. Near-singular
/// factors flag `valid = false` with the smallest-singular-value
/// diagnostic instead of erroring.
pub fn born_inverse(
    v: &RadialPotential,
    p: &ResolventPoint,
    grid: Arc<RadialGrid>,
) -> Result<PerturbedResolvent> {
    if let Some(dc) = &v.decay_class {
        // quick certificate corresponding to the sup-convolution condition
        let needed = (p.dimension as f64 + 2.0) / 2.0;
        if dc.delta <= needed && !v.is_zero() {
            return Err(Error::Domain(format!(
                "potential decay delta = {} too weak (needs > {needed})",
                dc.delta
            )));
        }
    }
    if v.is_zero() {
        return Ok(PerturbedResolvent {
            base: *p,
            inverse_factor: DiscretizedOperator::identity(grid),
            valid: true,
            smallest_singular: 1.0,
            residual: 0.0,
        });
    }
    let factor = one_plus_h2_v_r0(v, p, grid.clone())?;
    let ssv = factor.smallest_singular();
    if ssv <= 1e-8 {
        return Ok(PerturbedResolvent {
            base: *p,
            inverse_factor: DiscretizedOperator::identity(grid),
            valid: false,
            smallest_singular: ssv,
            residual: f64::INFINITY,
        });
    }
    let inv = factor.inverse()?;
    let residual = inv
        .compose(&factor)
        .sub(&DiscretizedOperator::identity(grid))
        .l1_norm();
    Ok(PerturbedResolvent {
        base: *p,
        inverse_factor: inv,
        valid: residual <= 1e-6,
        smallest_singular: ssv,
        residual,
    })
}

/// The discretized difference `R_h±(z) − R₀,h±(z) T`
/// = `R₀ ((1 + h²VR₀)^{-1} − T)`.
pub fn perturbed_minus_free_t(
    v: &RadialPotential,
    p: &ResolventPoint,
    grid: Arc<RadialGrid>,
    resonance: &ResonanceOutcome,
) -> Result<DiscretizedOperator> {
    if !resonance.report.regular {
        return Err(Error::Dependency(
            "resonance module reports zero is not regular; T is unavailable".into(),
        ));
    }
    let pr = born_inverse(v, p, grid.clone())?;
    if !pr.valid {
        return Err(Error::Accuracy(format!(
            "born inverse invalid (smallest singular {:.3e})",
            pr.smallest_singular
        )));
    }
    let r0 = free_resolvent_op(p, grid)?;
    Ok(r0.compose(&pr.inverse_factor.sub(&resonance.t_operator)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::resonance_test;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn rp(z: Complex64, h: f64, n: u32) -> ResolventPoint {
        ResolventPoint::new(z, Branch::Plus, h, n).unwrap()
    }

    #[test]
    fn newtonian_limit_two_routes() {
        // Route 1: Hankel small-argument limit inside the kernel formula at
        // z = 0. Route 2: the classical Newtonian kernel of (-Δ)^{-1}.
        for n in 4..=6u32 {
            let p = rp(Complex64::default(), 1.0, n);
            for &s in &[0.3, 1.0, 2.5] {
                let via_hankel = free_resolvent_kernel(&p, s).unwrap();
                let newton = -crate::potential::newtonian_kernel(n, s).unwrap();
                assert_relative_eq!(via_hankel.re, newton, max_relative = 1e-12);
                assert!(via_hankel.im.abs() <= 1e-14 * newton.abs());
            }
        }
        // n = 4 closed form 1/(4π²σ²).
        let p4 = rp(Complex64::default(), 1.0, 4);
        assert_relative_eq!(
            free_resolvent_kernel(&p4, 1.5).unwrap().re,
            1.0 / (4.0 * PI * PI * 1.5 * 1.5),
            max_relative = 1e-12
        );
    }

    #[test]
    fn scaling_identity_random_tuples() {
        // R_h(σ, z) = h^{-n} R_1(σ/h, z) at random (σ, z, h).
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..20 {
            let n = 4 + (rng.gen::<u32>() % 3);
            let sigma = 0.1 + 4.0 * rng.gen::<f64>();
            let h = 0.5 + 3.0 * rng.gen::<f64>();
            let z = Complex64::new(0.6 + rng.gen::<f64>(), 0.8 * rng.gen::<f64>());
            let lhs = free_resolvent_kernel(&rp(z, h, n), sigma).unwrap();
            let rhs = h.powi(-(n as i32)) * free_resolvent_kernel(&rp(z, 1.0, n), sigma / h).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-10 * rhs.norm(),
                "n={n} σ={sigma} h={h} z={z}"
            );
        }
    }

    #[test]
    fn radial_kernel_wrapper_scaling() {
        let z = Complex64::new(1.2, 0.3);
        let k = free_resolvent_radial_kernel(&rp(z, 2.0, 4));
        let direct = free_resolvent_kernel(&rp(z, 2.0, 4), 3.0).unwrap();
        assert!((k.eval(3.0) - direct).norm() <= 1e-12 * direct.norm());
        // spec example: h=2 at σ=3 equals 2^{-4} R₁(1.5, z)
        let r1 = free_resolvent_kernel(&rp(z, 1.0, 4), 1.5).unwrap();
        assert!((k.eval(3.0) - r1 / 16.0).norm() <= 1e-12 * r1.norm());
    }

    #[test]
    fn envelope_2_9_sigma_sweep() {
        // |R₁(σ, z)| ≤ C (σ^{-n+2} + σ^{-(n-1)/2}) over supp-arc z.
        for n in [4u32, 5] {
            let mut set = SampleSet::new(&["sigma", "re_z", "im_z"]);
            for &im in &[0.0, 0.2, 0.4] {
                for iz in 0..6 {
                    let re = 1.0 + 0.45 * iz as f64 / 5.0;
                    let z = Complex64::new(re, im);
                    let p = rp(z, 1.0, n);
                    for i in 0..160 {
                        let s = 1e-3 * (1e3f64 / 1e-3).powf(i as f64 / 159.0);
                        let v = free_resolvent_kernel(&p, s).unwrap();
                        let env = s.powi(-(n as i32) + 2) + s.powf(-(n as f64 - 1.0) / 2.0);
                        set.push(&[s, re, im], v.norm(), env);
                    }
                }
            }
            let rep = fit_envelope(&set, "2.9").unwrap();
            assert!(rep.fitted_constant.is_finite());
            assert!(rep.refinement_stable, "n={n}: {}", rep.summary());
        }
    }

    #[test]
    fn envelope_2_16_behaviour() {
        let sig: Vec<f64> = (0..200)
            .map(|i| 1e-3 * (1e3f64 / 1e-3).powf(i as f64 / 199.0))
            .collect();
        let rep = decay_envelope_2_16(4, Complex64::new(1.5, 0.2), &sig).unwrap();
        assert!(rep.fitted_constant.is_finite() && rep.refinement_stable);
        // Two-point comparison: a larger |Im z| must not increase the
        // fitted constant by more than the envelope accounts for.
        let rep2 = decay_envelope_2_16(4, Complex64::new(1.5, 0.4), &sig).unwrap();
        assert!(rep2.fitted_constant <= rep.fitted_constant * 1.05);
        // Real axis is a domain error.
        assert!(matches!(
            decay_envelope_2_16(4, Complex64::new(1.5, 0.0), &sig),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn born_inverse_identity_for_zero_potential() {
        let grid = Arc::new(RadialGrid::new(4, 1e-3, 20.0, 3, 8));
        let p = rp(Complex64::new(1.2, 0.1), 4.0, 4);
        let pr = born_inverse(&RadialPotential::zero(), &p, grid.clone()).unwrap();
        assert!(pr.valid);
        let diff = pr
            .inverse_factor
            .sub(&DiscretizedOperator::identity(grid))
            .l1_norm();
        assert_eq!(diff, 0.0);
    }

    #[test]
    fn born_inverse_matches_neumann_series_small_coupling() {
        let grid = Arc::new(RadialGrid::new(4, 1e-3, 20.0, 3, 8));
        let v = RadialPotential::preset("gaussian*0.001").unwrap();
        let p = rp(Complex64::new(1.2, 0.0), 10.0, 4);
        let pr = born_inverse(&v, &p, grid.clone()).unwrap();
        assert!(pr.valid, "residual {}", pr.residual);
        // Neumann oracle: (1+A)^{-1} ≈ 1 - A + A².
        let a = one_plus_h2_v_r0(&v, &p, grid.clone())
            .unwrap()
            .sub(&DiscretizedOperator::identity(grid.clone()));
        let id = DiscretizedOperator::identity(grid);
        let neumann = id.sub(&a).add(&a.compose(&a));
        let diff = pr.inverse_factor.sub(&neumann).l1_norm();
        assert!(diff < 1e-6, "Neumann mismatch {diff}");
    }

    #[test]
    fn perturbed_minus_free_zero_potential_is_zero() {
        let grid = Arc::new(RadialGrid::new(4, 1e-3, 20.0, 3, 8));
        let v = RadialPotential::zero();
        let reso = resonance_test(&v, grid.clone()).unwrap();
        let p = rp(Complex64::new(1.2, 0.15), 8.0, 4);
        let d = perturbed_minus_free_t(&v, &p, grid, &reso).unwrap();
        assert!(d.l1_norm() < 1e-12);
    }

    #[test]
    fn zero_limit_consistency_with_newtonian_operator() {
        // 1 + h²VR₀(0) = 1 - VΔ^{-1} entrywise, independent of h.
        let grid = Arc::new(RadialGrid::new(4, 1e-3, 20.0, 3, 8));
        let v = RadialPotential::preset("gaussian*0.3").unwrap();
        let newt = DiscretizedOperator::identity(grid.clone())
            .sub(&crate::potential::v_newtonian_op(&v, grid.clone()));
        for &h in &[2.0, 16.0] {
            let p = rp(Complex64::default(), h, 4);
            let lhs = one_plus_h2_v_r0(&v, &p, grid.clone()).unwrap();
            let diff = lhs.sub(&newt);
            let scale = newt.l1_norm();
            assert!(
                diff.l1_norm() <= 1e-10 * scale,
                "h={h}: {} vs scale {scale}",
                diff.l1_norm()
            );
        }
    }
}
