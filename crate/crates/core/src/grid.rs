//! Radial quadrature grids carrying the measure `ω_{n-1} σ^{n-1} dσ` of
//! `R^n`, with geometric panel spacing dense near σ = 0 so that the
//! power-singular kernels (σ^{-n+2} and friends) are integrated accurately.

use crate::quad::gl_rule;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Surface area of the unit sphere S^{n-1} ⊂ R^n.
pub fn sphere_area(n: u32) -> f64 {
    // ω_{n-1} = 2 π^{n/2} / Γ(n/2)
    2.0 * PI.powf(n as f64 / 2.0) / crate::specfun::cyl::gamma_half(n as i32)
}

/// Quadrature grid for radial integrals on `R^n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialGrid {
    dimension: u32,
    /// Panel boundaries (geometric from `s_min` to `s_max`).
    breaks: Vec<f64>,
    gl_order: usize,
    /// Quadrature nodes σ_i (increasing).
    nodes: Vec<f64>,
    /// Plain 1-D weights: Σ w_i f(σ_i) ≈ ∫ f dσ.
    plain_weights: Vec<f64>,
    /// Measure weights: Σ W_i f(σ_i) ≈ ω_{n-1} ∫ f σ^{n-1} dσ.
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(dimension: u32, s_min: f64, s_max: f64, panels_per_decade: usize, gl_order: usize) -> Self {
        assert!(dimension >= 4, "grids are defined for n ≥ 4");
        assert!(s_min > 0.0 && s_max > s_min);
        let decades = (s_max / s_min).log10();
        let n_panels = ((decades * panels_per_decade as f64).ceil() as usize).max(1);
        let breaks = crate::quad::geometric_breaks(s_min, s_max, n_panels);
        Self::from_breaks(dimension, breaks, gl_order)
    }

    pub fn from_breaks(dimension: u32, breaks: Vec<f64>, gl_order: usize) -> Self {
        let rule = gl_rule(gl_order);
        let area = sphere_area(dimension);
        let mut nodes = Vec::new();
        let mut plain = Vec::new();
        let mut weights = Vec::new();
        for w in breaks.windows(2) {
            let c = 0.5 * (w[0] + w[1]);
            let h = 0.5 * (w[1] - w[0]);
            for (x, gw) in rule.nodes.iter().zip(&rule.weights) {
                let s = c + h * x;
                let pw = gw * h;
                nodes.push(s);
                plain.push(pw);
                weights.push(pw * s.powi(dimension as i32 - 1) * area);
            }
        }
        RadialGrid {
            dimension,
            breaks,
            gl_order,
            nodes,
            plain_weights: plain,
            weights,
        }
    }

    /// A grid with twice the panel density, for refinement-stability gates.
    pub fn refined(&self) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len() * 2);
        for w in self.breaks.windows(2) {
            breaks.push(w[0]);
            breaks.push(0.5 * (w[0] + w[1]));
        }
        breaks.push(*self.breaks.last().unwrap());
        Self::from_breaks(self.dimension, breaks, self.gl_order)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Measure weights implementing `ω_{n-1} ∫ f(σ) σ^{n-1} dσ`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn plain_weights(&self) -> &[f64] {
        &self.plain_weights
    }

    pub fn s_max(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn describe(&self) -> String {
        format!(
            "n={} nodes={} range=[{:.1e},{:.1e}] order={}",
            self.dimension,
            self.nodes.len(),
            self.breaks[0],
            self.s_max(),
            self.gl_order
        )
    }

    /// ∫_{R^n} f(|x|) dx over the truncated range.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = crate::quad::Kahan::new();
        for (s, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(f(*s) * w);
        }
        acc.sum()
    }

    /// Plain 1-D integral ∫ f(σ) dσ on the grid range.
    pub fn integrate_plain(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = crate::quad::Kahan::new();
        for (s, w) in self.nodes.iter().zip(&self.plain_weights) {
            acc.add(f(*s) * w);
        }
        acc.sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area(4), 2.0 * PI * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(5), 8.0 * PI * PI / 3.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(6), PI.powi(3), max_relative = 1e-14);
    }

    #[test]
    fn gaussian_quadrature_exactness() {
        // ∫_{R^n} e^{-|x|²} dx = π^{n/2} to 1e-8 relative, n ∈ {4,5,6}.
        for n in 4..=6 {
            let g = RadialGrid::new(n, 1e-4, 12.0, 4, 12);
            let v = g.integrate(|s| (-s * s).exp());
            assert_relative_eq!(v, PI.powf(n as f64 / 2.0), max_relative = 1e-8);
        }
    }

    #[test]
    fn weights_positive_and_nodes_increasing() {
        let g = RadialGrid::new(4, 1e-3, 30.0, 3, 8);
        assert!(g.weights().iter().all(|w| *w > 0.0));
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn singular_kernel_integration() {
        // ω₃ ∫ σ^{-2} e^{-σ} σ³ dσ = 2π² ∫ σ e^{-σ} dσ = 2π² exactly.
        let g = RadialGrid::new(4, 1e-6, 60.0, 6, 14);
        let v = g.integrate(|s| s.powi(-2) * (-s).exp());
        assert_relative_eq!(v, 2.0 * PI * PI, max_relative = 1e-9);
    }

    #[test]
    fn refinement_preserves_value() {
        let g = RadialGrid::new(5, 1e-4, 12.0, 3, 8);
        let f = |s: f64| (-(s - 1.0) * (s - 1.0)).exp();
        let a = g.integrate(f);
        let b = g.refined().integrate(f);
        assert_relative_eq!(a, b, max_relative = 2e-7);
    }
}
