//! Quadrature toolkit: Gauss–Legendre panels, phase-budgeted panel layouts
//! for oscillatory integrands, a composite Filon rule for `∫ g(u) e^{itu} du`,
//! and compensated summation.

use num_complex::Complex64;
use std::sync::OnceLock;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GlRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GlRule {
    /// Computes an n-point rule by Newton iteration on the Legendre
    /// polynomial; accurate to machine precision for n ≤ 64.
    fn compute(n: usize) -> GlRule {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GlRule { nodes, weights }
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

static RULES: OnceLock<Vec<GlRule>> = OnceLock::new();

/// Returns a cached Gauss–Legendre rule (orders up to 64).
pub fn gl_rule(n: usize) -> &'static GlRule {
    let rules = RULES.get_or_init(|| (1..=64).map(GlRule::compute).collect());
    &rules[n.clamp(1, 64) - 1]
}

/// ∫_a^b f(x) dx by a single n-point Gauss–Legendre panel.
pub fn gl_complex(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let rule = gl_rule(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = KahanC::new();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc.add(f(c + h * x) * *w);
    }
    acc.sum() * h
}

pub fn gl_real(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let rule = gl_rule(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = Kahan::new();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc.add(f(c + h * x) * *w);
    }
    acc.sum() * h
}

/// Integrates over consecutive panels given by `breaks`.
pub fn panels_complex(
    f: &mut impl FnMut(f64) -> Complex64,
    breaks: &[f64],
    order: usize,
) -> Complex64 {
    let mut acc = KahanC::new();
    for w in breaks.windows(2) {
        acc.add(gl_complex(f, w[0], w[1], order));
    }
    acc.sum()
}

pub fn panels_real(f: &mut impl FnMut(f64) -> f64, breaks: &[f64], order: usize) -> f64 {
    let mut acc = Kahan::new();
    for w in breaks.windows(2) {
        acc.add(gl_real(f, w[0], w[1], order));
    }
    acc.sum()
}

/// Uniform panel boundaries.
pub fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let n = panels.max(1);
    (0..=n)
        .map(|i| a + (b - a) * i as f64 / n as f64)
        .collect()
}

/// Geometric panel boundaries from `a` to `b` (both positive), densest at `a`.
pub fn geometric_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a);
    let n = panels.max(1);
    let r = (b / a).ln() / n as f64;
    (0..=n).map(|i| a * (r * i as f64).exp()).collect()
}

/// Panel boundaries sized so each panel carries at most `budget` radians of
/// accumulated phase, where `phase_rate(x) = |dφ/dx|`. A floor on the step
/// keeps the count finite near integrable singularities of the rate.
pub fn phase_breaks(
    a: f64,
    b: f64,
    phase_rate: &dyn Fn(f64) -> f64,
    budget: f64,
    max_panels: usize,
) -> Vec<f64> {
    assert!(b > a);
    let min_step = (b - a) / max_panels as f64;
    let mut breaks = vec![a];
    let mut x = a;
    while x < b {
        let rate = phase_rate(x).abs().max(1e-300);
        let step = (budget / rate).max(min_step);
        x = (x + step).min(b);
        breaks.push(x);
    }
    breaks
}

/// Adaptive ∫_a^b f dx: bisects until the order-n vs order-2n panel
/// difference is below tolerance. Returns the refined value and an error
/// estimate; errs on the side of refinement.
pub fn adaptive_complex(
    f: &mut impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
    order: usize,
    max_depth: u32,
) -> (Complex64, f64) {
    fn rec(
        f: &mut impl FnMut(f64) -> Complex64,
        a: f64,
        b: f64,
        tol: f64,
        order: usize,
        depth: u32,
    ) -> (Complex64, f64) {
        let coarse = gl_complex(f, a, b, order);
        let fine = gl_complex(f, a, b, 2 * order);
        let err = (fine - coarse).norm();
        if err <= tol || depth == 0 {
            return (fine, err);
        }
        let m = 0.5 * (a + b);
        let (l, el) = rec(f, a, m, 0.5 * tol, order, depth - 1);
        let (r, er) = rec(f, m, b, 0.5 * tol, order, depth - 1);
        (l + r, el + er)
    }
    rec(f, a, b, tol, order, max_depth)
}

/// Composite Filon rule for ∫_a^b g(u) e^{i t u} du with g sampled on a
/// uniform grid of `2m` intervals. The rule integrates the oscillation
/// exactly; `m` only has to resolve `g` itself.
pub fn filon_complex(
    g: &mut impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    t: f64,
    half_intervals: usize,
) -> Complex64 {
    let m = half_intervals.max(1);
    let n = 2 * m;
    let d = (b - a) / n as f64;
    let theta = t * d;
    let (alpha, beta, gamma) = filon_coeffs(theta);
    let e = |u: f64| Complex64::new(0.0, t * u).exp();
    let mut s_even = KahanC::new();
    let mut s_odd = KahanC::new();
    for j in 0..=n {
        let u = a + d * j as f64;
        let v = g(u) * e(u);
        if j % 2 == 0 {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            s_even.add(v * w);
        } else {
            s_odd.add(v);
        }
    }
    let ga = g(a) * e(a);
    let gb = g(b) * e(b);
    d * (Complex64::i() * alpha * (ga - gb) + beta * s_even.sum() + gamma * s_odd.sum())
}

fn filon_coeffs(theta: f64) -> (f64, f64, f64) {
    if theta.abs() < 0.25 {
        let t2 = theta * theta;
        let alpha = theta * t2 * (2.0 / 45.0 - t2 * (2.0 / 315.0 - t2 * 2.0 / 4725.0));
        let beta = 2.0 / 3.0 + t2 * (2.0 / 15.0 - t2 * (4.0 / 105.0 - t2 * 2.0 / 567.0));
        let gamma = 4.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * (1.0 / 210.0 - t2 / 11340.0));
        (alpha, beta, gamma)
    } else {
        let (s, c) = theta.sin_cos();
        let t3 = theta * theta * theta;
        let alpha = (theta * theta + theta * s * c - 2.0 * s * s) / t3;
        let beta = 2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3;
        let gamma = 4.0 * (s - theta * c) / t3;
        (alpha, beta, gamma)
    }
}

/// Kahan–Neumaier compensated accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    s: f64,
    c: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }
    pub fn sum(&self) -> f64 {
        self.s + self.c
    }
}

/// Compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanC {
    re: Kahan,
    im: Kahan,
}

impl KahanC {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }
    pub fn sum(&self) -> Complex64 {
        Complex64::new(self.re.sum(), self.im.sum())
    }
}
