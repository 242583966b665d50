//! Radial convolution/multiplication operators on `R^n`, their
//! `L¹→L¹`, `L¹→L²`, `L¹→L∞` norm functionals, and the envelope-fit
//! harness shared by every bound check.

pub mod bipolar;
pub mod fit;
pub mod op;

use crate::error::{Error, Result};
use crate::potential::RadialPotential;
use bipolar::{BipolarParams, PlanePoint, ThreeFactorParams};
use num_complex::Complex64;
use std::sync::Arc;

pub use op::{DiscretizedOperator, OperatorKind};

/// Convolution-type kernel `k_h(σ) = h^{-n} k_1(σ / h)` of a radial
/// operator on `R^n`, carried as the unit-scale profile plus the scale.
#[derive(Clone)]
pub struct RadialKernel {
    profile: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    pub scale_h: f64,
    pub dimension: u32,
}

impl RadialKernel {
    pub fn new(
        dimension: u32,
        scale_h: f64,
        unit_profile: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        assert!(scale_h > 0.0);
        RadialKernel {
            profile: Arc::new(unit_profile),
            scale_h,
            dimension,
        }
    }

    /// Kernel value at distance σ.
    pub fn eval(&self, sigma: f64) -> Complex64 {
        let h = self.scale_h;
        h.powi(-(self.dimension as i32)) * (self.profile)(sigma / h)
    }

    /// Same unit profile at a different scale.
    pub fn rescale(&self, h: f64) -> Self {
        RadialKernel {
            profile: self.profile.clone(),
            scale_h: h,
            dimension: self.dimension,
        }
    }
}

impl std::fmt::Debug for RadialKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RadialKernel(h={}, n={})", self.scale_h, self.dimension)
    }
}

/// Sample offsets |y| at which the `sup_y` of the norm integrals is
/// realized numerically (the grid includes y = 0).
fn default_y_samples(r_max: f64) -> Vec<f64> {
    let mut ys = vec![0.0];
    let mut d = 0.05;
    while d < 0.6 * r_max {
        ys.push(d);
        d *= 2.2;
    }
    ys
}

/// Result of a sup-over-y norm evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SupNorm {
    pub value: f64,
    pub maximizer: f64,
}

fn tail_guarded_sup<F: Fn(&BipolarParams) -> f64>(
    eval_at: F,
    params: &BipolarParams,
    what: &str,
) -> Result<f64> {
    let base = eval_at(params);
    let wider = eval_at(&BipolarParams {
        r_max: 2.0 * params.r_max,
        ..*params
    });
    let drift = (wider - base).abs() / wider.abs().max(f64::MIN_POSITIVE);
    if drift > 1e-3 {
        let wider2 = eval_at(&BipolarParams {
            r_max: 4.0 * params.r_max,
            ..*params
        });
        let drift2 = (wider2 - wider).abs() / wider2.abs().max(f64::MIN_POSITIVE);
        if drift2 > 0.5 * drift {
            return Err(Error::Divergence(format!(
                "{what}: integral keeps growing under domain doubling \
                 (drift {drift:.2e} then {drift2:.2e}); integrand decays too slowly at infinity"
            )));
        }
        return Ok(wider2);
    }
    Ok(wider)
}

/// `sup_y ∫ |V(x)| |k(|x-y|)| dx`: the `L¹ → L¹` norm of `V ∘ conv(k)`
/// (for V ≡ 1 this is the exact convolution norm ∫ |k|).
pub fn norm_l1_to_l1(
    v: &RadialPotential,
    k: &RadialKernel,
    params: &BipolarParams,
) -> Result<SupNorm> {
    let n = k.dimension;
    let mut best = SupNorm {
        value: f64::NEG_INFINITY,
        maximizer: 0.0,
    };
    if v.is_unit() {
        // Pure convolution: translation invariance makes sup_y trivial.
        let value = tail_guarded_sup(
            |p| {
                let f = |_r: f64, s: f64| k.eval(s).norm();
                bipolar::two_factor(n, 0.0, &f, p)
            },
            params,
            "L1->L1 norm",
        )?;
        return Ok(SupNorm {
            value,
            maximizer: 0.0,
        });
    }
    for &d in &default_y_samples(params.r_max) {
        let value = tail_guarded_sup(
            |p| {
                let f = |r: f64, s: f64| v.eval_abs(r) * k.eval(s).norm();
                bipolar::two_factor(n, d, &f, p)
            },
            params,
            "L1->L1 norm",
        )?;
        if value > best.value {
            best = SupNorm {
                value,
                maximizer: d,
            };
        }
    }
    Ok(best)
}

/// `sup_y ⟨y⟩^{-s} (∫ ⟨x⟩^{2s} |k(|x-y|)|² dx)^{1/2}`:
/// the weighted `L¹ → L²` column norm.
pub fn norm_l1_to_l2(s_weight: f64, k: &RadialKernel, params: &BipolarParams) -> Result<SupNorm> {
    let n = k.dimension;
    let mut best = SupNorm {
        value: f64::NEG_INFINITY,
        maximizer: 0.0,
    };
    for &d in &default_y_samples(params.r_max) {
        let sq = tail_guarded_sup(
            |p| {
                let f = |r: f64, s: f64| {
                    (1.0 + r * r).powf(s_weight) * k.eval(s).norm_sqr()
                };
                bipolar::two_factor(n, d, &f, p)
            },
            params,
            "L1->L2 norm",
        )?;
        let value = (1.0 + d * d).powf(-s_weight / 2.0) * sq.sqrt();
        if value > best.value {
            best = SupNorm {
                value,
                maximizer: d,
            };
        }
        if s_weight == 0.0 {
            break; // independent of y
        }
    }
    Ok(best)
}

/// `L¹ → L∞` norm of a radial kernel: the sup of |k| over the sampled
/// distances (σ → 0 behaviour must be sampled by the caller's grid).
pub fn norm_l1_to_linf_radial(k: &RadialKernel, sigmas: &[f64]) -> f64 {
    sigmas
        .iter()
        .map(|&s| k.eval(s).norm())
        .fold(0.0, f64::max)
}

/// ∫ k1(|x-ξ|) V(|ξ|) k2(|ξ-y|) dξ with x, y given in a shared plane
/// through the center of V.
///
/// The arguments are canonicalized under the exact relabeling symmetry
/// `(k1, x) ↔ (k2, y)`, so the composition symmetry holds bit-for-bit.
pub fn bipolar_compose(
    k1: &RadialKernel,
    v: &RadialPotential,
    k2: &RadialKernel,
    x: PlanePoint,
    y: PlanePoint,
    params: &ThreeFactorParams,
) -> Result<Complex64> {
    if k1.dimension != k2.dimension {
        return Err(Error::Usage("kernel dimensions differ".into()));
    }
    let n = k1.dimension;
    let swap = (y[0], y[1]) < (x[0], x[1]);
    let (ka, kb, pa, pb) = if swap {
        (k2, k1, y, x)
    } else {
        (k1, k2, x, y)
    };
    let g = |rx: f64, r0: f64, ry: f64| ka.eval(rx) * v.eval(r0) * kb.eval(ry);
    Ok(bipolar::three_factor(n, pa, pb, &g, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::RadialPotential;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn gaussian_kernel(n: u32) -> RadialKernel {
        RadialKernel::new(n, 1.0, |s| Complex64::new((-s * s).exp(), 0.0))
    }

    #[test]
    fn l1_norm_gaussian_unit_potential() {
        let k = gaussian_kernel(4);
        let p = BipolarParams {
            r_max: 10.0,
            ..Default::default()
        };
        let norm = norm_l1_to_l1(&RadialPotential::unit(), &k, &p).unwrap();
        assert_relative_eq!(norm.value, PI * PI, max_relative = 1e-8);
    }

    #[test]
    fn l1_norm_scaling_invariance() {
        // ∫ |k_h| = ∫ |k_1| for the pure convolution norm.
        let k = gaussian_kernel(4);
        let p = BipolarParams {
            r_max: 30.0,
            ..Default::default()
        };
        let v = RadialPotential::unit();
        let n1 = norm_l1_to_l1(&v, &k, &p).unwrap().value;
        let nh = norm_l1_to_l1(&v, &k.rescale(2.5), &p).unwrap().value;
        assert_relative_eq!(n1, nh, max_relative = 1e-7);
    }

    #[test]
    fn l1_norm_against_mc_oracle() {
        // V = ⟨x⟩^{-4}, k = σ^{-2}, n = 4: finite, equal to the
        // quasi-Monte-Carlo oracle within statistical error. The sup over
        // y sits at y = 0 where the singular kernel overlaps the peak of V.
        let k = RadialKernel::new(4, 1.0, |s| Complex64::new(s.powi(-2), 0.0));
        let v = RadialPotential::preset("power:4").unwrap();
        let p = BipolarParams {
            r_max: 400.0,
            r_panels_per_decade: 5,
            ..Default::default()
        };
        let norm = norm_l1_to_l1(&v, &k, &p).unwrap();
        assert_eq!(norm.maximizer, 0.0);
        // At y = 0: ω₃ ∫ r³ ⟨r⟩^{-4} r^{-2} dr = 2π² ∫ r ⟨r⟩^{-4} dr = π².
        assert_relative_eq!(norm.value, PI * PI, max_relative = 2e-3);
        // Monte-Carlo oracle after the radial stretch x = w|w| whose
        // Jacobian 2|w|⁴ cancels the kernel singularity exactly:
        // ∫ ⟨x⟩^{-4} |x|^{-2} dx = 2 ∫ (1 + |w|⁴)^{-2} dw.
        let mc = crate::mc::integrate_box(
            |w| {
                let s2: f64 = w.iter().map(|v| v * v).sum();
                2.0 / (1.0 + s2 * s2).powi(2)
            },
            -7.0,
            7.0,
            4,
            10_000_000,
            8,
            7,
        );
        assert!(
            (norm.value - mc.value).abs() <= 3.0 * mc.std_error + 2e-3 * norm.value,
            "norm {} vs mc {} ± {}",
            norm.value,
            mc.value,
            mc.std_error
        );
    }

    #[test]
    fn l1_norm_divergent_tail_detected() {
        // k = σ^{-1} alone is not integrable against V ≡ 1 in R⁴.
        let k = RadialKernel::new(4, 1.0, |s| Complex64::new(1.0 / s, 0.0));
        let p = BipolarParams {
            r_max: 20.0,
            ..Default::default()
        };
        let r = norm_l1_to_l1(&RadialPotential::unit(), &k, &p);
        assert!(matches!(r, Err(Error::Divergence(_))), "{r:?}");
    }

    #[test]
    fn l1_to_l2_gaussian_closed_form() {
        // weight ≡ 1 (s = 0): (ω₃ ∫ e^{-2σ²} σ³ dσ)^{1/2} = π/2 in R⁴.
        let k = gaussian_kernel(4);
        let p = BipolarParams {
            r_max: 12.0,
            ..Default::default()
        };
        let norm = norm_l1_to_l2(0.0, &k, &p).unwrap();
        assert_relative_eq!(norm.value, PI / 2.0, max_relative = 1e-8);
    }

    #[test]
    fn l1_to_l2_zero_kernel() {
        let k = RadialKernel::new(4, 1.0, |_| Complex64::default());
        let p = BipolarParams::default();
        assert_eq!(norm_l1_to_l2(0.5, &k, &p).unwrap().value, 0.0);
    }

    #[test]
    fn linf_norm_constant_kernel() {
        let k = RadialKernel::new(4, 1.0, |_| Complex64::new(0.0, -2.5));
        let sig: Vec<f64> = (1..100).map(|i| 0.1 * i as f64).collect();
        assert_relative_eq!(norm_l1_to_linf_radial(&k, &sig), 2.5);
    }

    #[test]
    fn compose_gaussians_closed_form() {
        let k = gaussian_kernel(4);
        let v = RadialPotential::unit();
        let p = ThreeFactorParams {
            half_width: 7.0,
            plane_panels: 7,
            ..Default::default()
        };
        let x = [0.9f64, 0.0];
        let y = [0.0f64, 0.4];
        let d2: f64 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
        let got = bipolar_compose(&k, &v, &k, x, y, &p).unwrap();
        let exact = (PI / 2.0).powi(2) * (-d2 / 2.0).exp();
        assert_relative_eq!(got.re, exact, max_relative = 1e-7);
    }

    #[test]
    fn compose_zero_potential() {
        let k = gaussian_kernel(4);
        let v = RadialPotential::zero();
        let p = ThreeFactorParams::default();
        let got = bipolar_compose(&k, &v, &k, [1.0, 0.0], [0.0, 0.0], &p).unwrap();
        assert_eq!(got, Complex64::default());
    }

    #[test]
    fn compose_relabeling_symmetry_is_exact() {
        let k1 = gaussian_kernel(4);
        let k2 = RadialKernel::new(4, 1.0, |s| Complex64::new((-0.5 * s * s).exp(), 0.1 * s.cos()));
        let v = RadialPotential::preset("gaussian").unwrap();
        let p = ThreeFactorParams::default();
        let a = bipolar_compose(&k1, &v, &k2, [1.2, 0.3], [-0.4, 0.8], &p).unwrap();
        let b = bipolar_compose(&k2, &v, &k1, [-0.4, 0.8], [1.2, 0.3], &p).unwrap();
        assert_eq!(a, b, "swap symmetry must be quadrature-identical");
    }

    #[test]
    fn norm_monotone_under_kernel_domination() {
        // Nested Gaussians: e^{-2σ²} ≤ e^{-σ²} pointwise.
        let kw = gaussian_kernel(4);
        let kn = RadialKernel::new(4, 1.0, |s| Complex64::new((-2.0 * s * s).exp(), 0.0));
        let v = RadialPotential::preset("gaussian").unwrap();
        let p = BipolarParams {
            r_max: 10.0,
            ..Default::default()
        };
        let a = norm_l1_to_l1(&v, &kn, &p).unwrap().value;
        let b = norm_l1_to_l1(&v, &kw, &p).unwrap().value;
        assert!(a < b);
        let a2 = norm_l1_to_l2(0.3, &kn, &p).unwrap().value;
        let b2 = norm_l1_to_l2(0.3, &kw, &p).unwrap().value;
        assert!(a2 < b2);
    }
}
