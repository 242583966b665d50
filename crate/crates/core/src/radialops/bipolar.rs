//! Bipolar reductions of `R^n` integrals against radial factors.
//!
//! Two-factor: ∫ F(|x|, |x-y|) dx collapses to an (r, s) integral with the
//! (n-2)-sphere factor. Three-factor: ∫ k1(|x-ξ|) V(|ξ|) k2(|ξ-y|) dξ
//! collapses to two in-plane coordinates plus one orthogonal radius with
//! the (n-3)-sphere factor.

use crate::grid::sphere_area;
use crate::quad::{gl_rule, Kahan, KahanC};
use num_complex::Complex64;

/// Quadrature resolution knobs for the bipolar reductions.
#[derive(Debug, Clone, Copy)]
pub struct BipolarParams {
    /// Outer radial panels per decade.
    pub r_panels_per_decade: usize,
    /// Gauss order of the outer radial panels.
    pub r_order: usize,
    /// Panels of the inner angular (θ) integral.
    pub theta_panels: usize,
    pub theta_order: usize,
    /// Truncation radius for the outer integral.
    pub r_max: f64,
    /// Smallest resolved radius.
    pub r_min: f64,
}

impl Default for BipolarParams {
    fn default() -> Self {
        BipolarParams {
            r_panels_per_decade: 4,
            r_order: 12,
            theta_panels: 4,
            theta_order: 12,
            r_max: 40.0,
            r_min: 1e-6,
        }
    }
}

impl BipolarParams {
    pub fn refined(&self, factor: usize) -> Self {
        BipolarParams {
            r_panels_per_decade: self.r_panels_per_decade * factor,
            theta_panels: self.theta_panels * factor,
            ..*self
        }
    }
}

/// ∫_{R^n} F(|x|, |x-y|) dx for |y| = d ≥ 0.
///
/// The inner s-integral runs over [|r-d|, r+d] with the substitution
/// s = c - e cosθ, which absorbs the endpoint zeros of the sphere factor
/// for every n ≥ 4.
pub fn two_factor(
    n: u32,
    d: f64,
    f: &(dyn Fn(f64, f64) -> f64 + Sync),
    p: &BipolarParams,
) -> f64 {
    if d <= 0.0 {
        // Concentric case: |x - y| = |x|.
        let mut acc = Kahan::new();
        let area = sphere_area(n);
        let breaks = crate::quad::geometric_breaks(
            p.r_min,
            p.r_max,
            (p.r_panels_per_decade as f64 * (p.r_max / p.r_min).log10()).ceil() as usize,
        );
        let rule = gl_rule(p.r_order);
        for w in breaks.windows(2) {
            let c = 0.5 * (w[0] + w[1]);
            let h = 0.5 * (w[1] - w[0]);
            for (x, gw) in rule.nodes.iter().zip(&rule.weights) {
                let r = c + h * x;
                acc.add(gw * h * area * r.powi(n as i32 - 1) * f(r, r));
            }
        }
        return acc.sum();
    }
    let omega = sphere_area(n - 1); // ω_{n-2}
    let inner = |r: f64| -> f64 {
        let a = (r - d).abs();
        let b = r + d;
        let c = 0.5 * (a + b);
        let e = 0.5 * (b - a);
        let rule = gl_rule(p.theta_order);
        let mut acc = Kahan::new();
        let breaks = crate::quad::uniform_breaks(0.0, std::f64::consts::PI, p.theta_panels);
        for w in breaks.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let half = 0.5 * (w[1] - w[0]);
            for (x, gw) in rule.nodes.iter().zip(&rule.weights) {
                let th = mid + half * x;
                let (sin_th, cos_th) = th.sin_cos();
                let s = c - e * cos_th;
                if s <= 0.0 {
                    continue;
                }
                // ρ = e sinθ √((s+a)(s+b)) / (2d)
                let rho = e * sin_th * ((s + a) * (s + b)).sqrt() / (2.0 * d);
                let jac = e * sin_th; // ds
                acc.add(gw * half * s * f(r, s) * rho.powi(n as i32 - 3) * jac);
            }
        }
        acc.sum()
    };
    // Outer r-panels: geometric, with a break inserted at r = d where the
    // inner interval has a corner.
    let mut breaks = crate::quad::geometric_breaks(
        p.r_min,
        p.r_max,
        (p.r_panels_per_decade as f64 * (p.r_max / p.r_min).log10()).ceil() as usize,
    );
    if d > p.r_min && d < p.r_max {
        breaks.push(d);
        breaks.sort_by(f64::total_cmp);
    }
    let rule = gl_rule(p.r_order);
    let mut acc = Kahan::new();
    for w in breaks.windows(2) {
        let c = 0.5 * (w[0] + w[1]);
        let h = 0.5 * (w[1] - w[0]);
        for (x, gw) in rule.nodes.iter().zip(&rule.weights) {
            let r = c + h * x;
            acc.add(gw * h * r * inner(r));
        }
    }
    acc.sum() * omega / d
}

/// Point in the shared 2-plane of the three-factor reduction.
pub type PlanePoint = [f64; 2];

/// Quadrature knobs for the three-factor reduction.
#[derive(Debug, Clone, Copy)]
pub struct ThreeFactorParams {
    /// In-plane panels per axis.
    pub plane_panels: usize,
    pub plane_order: usize,
    /// Panels for the orthogonal radius.
    pub ortho_panels: usize,
    pub ortho_order: usize,
    /// Integration box half-width (set from the decay of the middle factor).
    pub half_width: f64,
}

impl Default for ThreeFactorParams {
    fn default() -> Self {
        ThreeFactorParams {
            plane_panels: 6,
            plane_order: 10,
            ortho_panels: 3,
            ortho_order: 10,
            half_width: 6.0,
        }
    }
}

impl ThreeFactorParams {
    pub fn node_count(&self) -> usize {
        let per_axis = self.plane_panels * self.plane_order;
        per_axis * per_axis * self.ortho_panels * self.ortho_order
    }

    pub fn refined(&self, factor: usize) -> Self {
        ThreeFactorParams {
            plane_panels: self.plane_panels * factor,
            ortho_panels: self.ortho_panels * factor,
            ..*self
        }
    }
}

/// ∫_{R^n} g(|ξ - x|, |ξ|, |ξ - y|) dξ with x, y in a common plane.
///
/// ξ is reduced to its two in-plane coordinates plus the orthogonal
/// radius ρ, carrying the factor ω_{n-3} ρ^{n-3}.
pub fn three_factor(
    n: u32,
    x: PlanePoint,
    y: PlanePoint,
    g: &(dyn Fn(f64, f64, f64) -> Complex64 + Sync),
    p: &ThreeFactorParams,
) -> Complex64 {
    let omega = sphere_area(n - 2); // ω_{n-3}
    let rule_p = gl_rule(p.plane_order);
    let rule_o = gl_rule(p.ortho_order);
    let l = p.half_width;
    let pb = crate::quad::uniform_breaks(-l, l, p.plane_panels);
    let ob = crate::quad::uniform_breaks(0.0, l, p.ortho_panels);
    let mut acc = KahanC::new();
    for w1 in pb.windows(2) {
        let c1 = 0.5 * (w1[0] + w1[1]);
        let h1 = 0.5 * (w1[1] - w1[0]);
        for (x1, g1) in rule_p.nodes.iter().zip(&rule_p.weights) {
            let xi1 = c1 + h1 * x1;
            for w2 in pb.windows(2) {
                let c2 = 0.5 * (w2[0] + w2[1]);
                let h2 = 0.5 * (w2[1] - w2[0]);
                for (x2, g2) in rule_p.nodes.iter().zip(&rule_p.weights) {
                    let xi2 = c2 + h2 * x2;
                    let dx1 = xi1 - x[0];
                    let dx2 = xi2 - x[1];
                    let dy1 = xi1 - y[0];
                    let dy2 = xi2 - y[1];
                    let base_x = dx1 * dx1 + dx2 * dx2;
                    let base_0 = xi1 * xi1 + xi2 * xi2;
                    let base_y = dy1 * dy1 + dy2 * dy2;
                    let w12 = g1 * g2 * h1 * h2;
                    for wo in ob.windows(2) {
                        let co = 0.5 * (wo[0] + wo[1]);
                        let ho = 0.5 * (wo[1] - wo[0]);
                        for (xo, go) in rule_o.nodes.iter().zip(&rule_o.weights) {
                            let rho = co + ho * xo;
                            let r2 = rho * rho;
                            let v = g(
                                (base_x + r2).sqrt(),
                                (base_0 + r2).sqrt(),
                                (base_y + r2).sqrt(),
                            );
                            acc.add(v * (w12 * go * ho * rho.powi(n as i32 - 3)));
                        }
                    }
                }
            }
        }
    }
    acc.sum() * omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn two_factor_gaussian_convolution_value() {
        // ∫ e^{-|x|²} e^{-|x-y|²} dx = (π/2)^{n/2} e^{-d²/2}.
        for n in 4..=6u32 {
            for &d in &[0.0, 0.7, 2.0] {
                let p = BipolarParams {
                    r_max: 12.0,
                    ..Default::default()
                };
                let f = |r: f64, s: f64| (-r * r).exp() * (-s * s).exp();
                let v = two_factor(n, d, &f, &p);
                let exact = (PI / 2.0).powf(n as f64 / 2.0) * (-d * d / 2.0).exp();
                assert_relative_eq!(v, exact, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn two_factor_translation_invariance_constant_v() {
        // With F = |k(s)| only, the answer is independent of d.
        let p = BipolarParams {
            r_max: 14.0,
            ..Default::default()
        };
        let f = |_r: f64, s: f64| (-s * s).exp();
        let v0 = two_factor(4, 0.0, &f, &p);
        let v1 = two_factor(4, 1.3, &f, &p);
        assert_relative_eq!(v0, PI * PI, max_relative = 1e-8);
        assert_relative_eq!(v1, PI * PI, max_relative = 1e-8);
    }

    #[test]
    fn two_factor_singular_kernel_against_quasi_mc() {
        // V = ⟨x⟩^{-4}, k = σ^{-2}, n = 4, d = 1: cross-checked against the
        // quasi-Monte-Carlo oracle within 3.5 standard errors.
        let p = BipolarParams {
            r_max: 300.0,
            r_panels_per_decade: 6,
            theta_panels: 6,
            ..Default::default()
        };
        let f = |r: f64, s: f64| (1.0 + r * r).powi(-2) * s.powi(-2);
        let v = two_factor(4, 1.0, &f, &p);
        // Monte-Carlo oracle in the desingularized variables x = y + w|w|
        // (Jacobian 2|w|⁴ cancels |x - y|^{-2} exactly), y = (1,0,0,0).
        let mc = crate::mc::integrate_box(
            |w| {
                let s: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                let x0 = 1.0 + w[0] * s;
                let r2 = x0 * x0 + (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]) * s * s;
                2.0 / (1.0 + r2).powi(2)
            },
            -7.0,
            7.0,
            4,
            4_000_000,
            8,
            42,
        );
        assert!(
            (v - mc.value).abs() <= 3.5 * mc.std_error + 2e-3 * v,
            "quadrature {v} vs MC {} ± {}",
            mc.value,
            mc.std_error
        );
    }

    #[test]
    fn three_factor_gaussian_pair() {
        // k1 = k2 = e^{-σ²}, V ≡ 1 ⇒ (π/2)^{n/2} e^{-|x-y|²/2}.
        let n = 4;
        let x = [0.4, 0.0];
        let y = [-0.3, 0.5];
        let d2 = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
        let g = |rx: f64, _r0: f64, ry: f64| {
            Complex64::new((-rx * rx).exp() * (-ry * ry).exp(), 0.0)
        };
        let p = ThreeFactorParams {
            half_width: 7.0,
            plane_panels: 7,
            ..Default::default()
        };
        let v = three_factor(n, x, y, &g, &p);
        let exact = (PI / 2.0).powf(2.0) * (-d2 / 2.0).exp();
        assert_relative_eq!(v.re, exact, max_relative = 1e-7);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn three_factor_triple_gaussian_closed_form() {
        // k1 = k2 = e^{-σ²}, V = e^{-|ξ|²}, x = y = 0:
        // ∫ e^{-3|ξ|²} dξ = (π/3)^{n/2}.
        let g = |rx: f64, r0: f64, ry: f64| {
            Complex64::new((-rx * rx - r0 * r0 - ry * ry).exp(), 0.0)
        };
        let p = ThreeFactorParams {
            half_width: 5.0,
            ..Default::default()
        };
        let v = three_factor(4, [0.0, 0.0], [0.0, 0.0], &g, &p);
        assert_relative_eq!(v.re, (PI / 3.0).powi(2), max_relative = 1e-8);
    }
}
