//! Complex cylinder-function engine for the scaled functions
//! `ℋν(z) = z^ν Hν(z)` and `𝒥ν(z) = z^ν Jν(z)` at the orders
//! `ν = (n-2)/2` needed in dimensions 4..6 (plus the lower orders reached
//! by derivative recurrences).
//!
//! Orders are passed as `two_nu = 2ν` so integer and half-integer cases
//! share one entry point. Evaluation strategy:
//!
//! * half-integer ν: exact closed forms propagated by the scaled
//!   recurrence `ℋ_{ν+1} = 2ν ℋ_ν − z² ℋ_{ν-1}`;
//! * integer ν, |z| ≤ 12: power series; the `J + iY` combination is used
//!   near the real axis and a modified-Bessel route (`w^ν K_ν(w)`,
//!   `w = -iz`) where the imaginary part dominates, which avoids the
//!   `e^{2 Im z}` cancellation;
//! * integer ν, |z| > 12: Hankel asymptotic expansion truncated adaptively
//!   at the smallest term.

use num_complex::Complex64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Radius where the integer-order evaluator switches from power series to
/// the asymptotic expansion.
pub const SWITCH_RADIUS: f64 = 12.0;

/// Γ(k) for 2k integer: `gamma_half(two_a)` = Γ(two_a / 2), two_a ≥ 1.
pub fn gamma_half(two_a: i32) -> f64 {
    assert!(two_a >= 1, "gamma_half needs a positive argument");
    if two_a % 2 == 0 {
        let mut g = 1.0;
        for k in 2..(two_a / 2) {
            g *= k as f64;
        }
        g
    } else {
        // Γ(1/2) = √π, then Γ(a+1) = a Γ(a).
        let mut g = PI.sqrt();
        let mut a = 0.5;
        while a + 1.0 <= two_a as f64 / 2.0 {
            g *= a;
            a += 1.0;
        }
        g
    }
}

fn digamma_int(m: usize) -> f64 {
    // ψ(m) for integer m ≥ 1.
    let mut s = -EULER_GAMMA;
    for j in 1..m {
        s += 1.0 / j as f64;
    }
    s
}

/// ℋν⁺(0) = −i 2^ν Γ(ν) / π, the finite small-argument limit (ν > 0).
pub fn hankel_scaled_plus_at_zero(two_nu: i32) -> Complex64 {
    assert!(two_nu > 0);
    let nu = two_nu as f64 / 2.0;
    Complex64::new(0.0, -(2f64.powf(nu)) * gamma_half(two_nu) / PI)
}

/// ℋν⁺(z) = z^ν Hν^{(1)}(z) on the closed upper half-plane (z ≠ 0).
pub fn hankel_scaled_plus(two_nu: i32, z: Complex64) -> Complex64 {
    if two_nu % 2 != 0 {
        return hankel_half_integer_plus(two_nu, z);
    }
    let m = two_nu / 2;
    if m < 0 {
        // ℋ_{-m} = (-1)^m ℋ_m / z^{2m}.
        let v = hankel_scaled_plus(-two_nu, z);
        let sign = if (-m) % 2 == 0 { 1.0 } else { -1.0 };
        return sign * v / z.powi(-2 * m);
    }
    if z.norm() > SWITCH_RADIUS {
        hankel_scaled_asymptotic(two_nu, z, true)
    } else if z.im > 0.4 * z.re.abs() && z.im > 1.0 {
        // The J + iY combination cancels like e^{2 Im z}; deep in the
        // upper half-plane the modified-Bessel integral is exact instead.
        hankel_scaled_cosh_route(m as u32, z)
    } else {
        hankel_scaled_series(m as u32, z)
    }
}

/// ℋν⁻(z) on the closed lower half-plane, via `ℋν⁻(z) = conj(ℋν⁺(z̄))`.
pub fn hankel_scaled_minus(two_nu: i32, z: Complex64) -> Complex64 {
    hankel_scaled_plus(two_nu, z.conj()).conj()
}

/// Half-integer closed forms: recurrence up from
/// ℋ_{1/2}⁺(z) = −i√(2/π) e^{iz} and ℋ_{-1/2}⁺(z) = √(2/π) e^{iz} / z.
fn hankel_half_integer_plus(two_nu: i32, z: Complex64) -> Complex64 {
    debug_assert!(two_nu % 2 != 0);
    let c = (2.0 / PI).sqrt();
    let e = (Complex64::i() * z).exp();
    let lo = c * e / z; // ν = -1/2
    let hi = -Complex64::i() * c * e; // ν = +1/2
    match two_nu {
        -1 => lo,
        1 => hi,
        t if t > 1 => {
            let z2 = z * z;
            let mut prev = lo;
            let mut cur = hi;
            let mut two = 1; // 2ν of `cur`
            while two < t {
                let next = (two as f64) * cur - z2 * prev;
                prev = cur;
                cur = next;
                two += 2;
            }
            cur
        }
        _ => {
            // Downward: ℋ_{ν-1} = (2ν ℋ_ν − ℋ_{ν+1}) / z².
            let z2 = z * z;
            let mut above = hi; // ν = 1/2
            let mut cur = lo; // ν = -1/2
            let mut two = -1;
            while two > two_nu {
                let below = ((two as f64) * cur - above) / z2;
                above = cur;
                cur = below;
                two -= 2;
            }
            cur
        }
    }
}

/// z^m (J_m + iY_m)(z) by power series (integer m ≥ 0, |z| ≤ 12,
/// near-real z).
fn hankel_scaled_series(m: u32, z: Complex64) -> Complex64 {
    let jm = jscaled_series_int(m as i32, z);
    let ym = yscaled_series(m, z, jm);
    jm + Complex64::i() * ym
}

/// z^m Y_m(z) scaled series; `jm` is the already-computed z^m J_m(z).
fn yscaled_series(m: u32, z: Complex64, jm: Complex64) -> Complex64 {
    let z2q = z * z * 0.25; // (z/2)²
    let log_half = (z * 0.5).ln();
    // Finite sum: -(2^m/π) Σ_{k<m} ((m-k-1)!/k!) (z²/4)^k.
    let mut finite = Complex64::default();
    let mut pw = Complex64::new(1.0, 0.0);
    for k in 0..m {
        let num = factorial((m - k - 1) as usize);
        let den = factorial(k as usize);
        finite += pw * (num / den);
        pw *= z2q;
    }
    finite *= -(2f64.powi(m as i32)) / PI;
    // Tail: -(z^{2m}/(2^m π)) Σ_k (ψ(k+1)+ψ(m+k+1)) (-z²/4)^k / (k!(m+k)!).
    let mut tail = Complex64::default();
    let mut term = Complex64::new(1.0 / factorial(m as usize), 0.0);
    for k in 0..200 {
        let contrib = term * (digamma_int(k + 1) + digamma_int(m as usize + k + 1));
        tail += contrib;
        if contrib.norm() < 1e-18 * tail.norm().max(1e-280) && k > 4 {
            break;
        }
        let kf = (k + 1) as f64;
        term = -term * z2q / (kf * (m as f64 + kf));
    }
    let zp2m = z.powi(2 * m as i32);
    tail *= -zp2m / (2f64.powi(m as i32) * PI);
    (2.0 / PI) * log_half * jm + finite + tail
}

/// ℋ_m⁺ via `−(2i/π) w^m K_m(w)`, `w = −iz`, with the modified Bessel
/// function from its integral representation
/// `K_m(w) = ∫_0^∞ e^{-w cosh t} cosh(m t) dt` (Re w > 0). The integrand
/// never suffers the `e^{2 Im z}` cancellation of the power-series routes,
/// so this is the accurate path deep in the upper half-plane.
fn hankel_scaled_cosh_route(m: u32, z: Complex64) -> Complex64 {
    let w = -Complex64::i() * z;
    debug_assert!(w.re > 0.0);
    let rew = w.re;
    let nu = m as f64;
    // e^{-w(cosh t - 1)} has decayed to ~1e-20 here even after the
    // cosh(mt) growth is accounted for.
    let reach = 1.0 + 50.0 / rew;
    let t_max = (reach + (reach * reach - 1.0).sqrt()).ln().max(1.0);
    let rate = move |t: f64| (w.im.abs() + rew) * t.sinh() + 1.0;
    let breaks = crate::quad::phase_breaks(0.0, t_max, &rate, 0.8, 6000);
    // Work with e^{Re w} K_m(w): the exponent Re w (1 - cosh t) stays ≤ 0,
    // which keeps the quadrature in a healthy floating-point range even
    // when K_m itself underflows.
    let mut f = |t: f64| {
        (Complex64::new(w.re, 0.0) - w * t.cosh()).exp() * (nu * t).cosh()
    };
    let km_scaled = crate::quad::panels_complex(&mut f, &breaks, 12);
    let km = km_scaled * (-w.re).exp();
    -(Complex64::i() * 2.0 / PI) * w.powi(m as i32) * km
}

fn factorial(n: usize) -> f64 {
    let mut f = 1.0;
    for k in 2..=n {
        f *= k as f64;
    }
    f
}

/// Hankel asymptotic expansion of ℋν±(z), adaptively truncated at the
/// smallest term. Valid away from the origin; used for |z| > 12.
pub fn hankel_scaled_asymptotic(two_nu: i32, z: Complex64, plus: bool) -> Complex64 {
    let nu = two_nu as f64 / 2.0;
    let sgn = if plus { 1.0 } else { -1.0 };
    // √(2/(πz)) e^{±i(z − νπ/2 − π/4)} Σ_k (±i)^k a_k(ν) z^{-k}
    let omega = z - (nu * PI / 2.0 + PI / 4.0);
    let phase = (Complex64::i() * sgn * omega).exp();
    let mut sum = Complex64::new(1.0, 0.0);
    let mut ak = 1.0;
    let mut ipow = Complex64::new(1.0, 0.0);
    let zinv = 1.0 / z;
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..=50 {
        let kf = k as f64;
        ak *= (4.0 * nu * nu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (8.0 * kf);
        ipow *= Complex64::new(0.0, sgn);
        zpow *= zinv;
        let term = ipow * ak * zpow;
        let mag = term.norm();
        if mag > last {
            break; // asymptotic series started diverging
        }
        sum += term;
        last = mag;
        if mag < 1e-17 {
            break;
        }
    }
    let amp = (2.0 / PI).sqrt() * z.powf(nu - 0.5);
    amp * phase * sum
}

/// 𝒥ν(z) = z^ν Jν(z); entire in z for 2ν a nonnegative integer.
pub fn jscaled(two_nu: i32, z: Complex64) -> Complex64 {
    if two_nu % 2 != 0 {
        return jscaled_half_integer(two_nu, z);
    }
    let m = two_nu / 2;
    if m < 0 {
        let sign = if (-m) % 2 == 0 { 1.0 } else { -1.0 };
        return sign * jscaled(-two_nu, z) / z.powi(-2 * m);
    }
    if z.norm() <= SWITCH_RADIUS {
        jscaled_series_int(m, z)
    } else {
        0.5 * (hankel_scaled_asymptotic(two_nu, z, true)
            + hankel_scaled_asymptotic(two_nu, z, false))
    }
}

/// Half-integer 𝒥 by closed trigonometric forms and the recurrence
/// 𝒥_{ν+1} = 2ν 𝒥_ν − z² 𝒥_{ν-1}.
fn jscaled_half_integer(two_nu: i32, z: Complex64) -> Complex64 {
    let c = (2.0 / PI).sqrt();
    let (s, co) = (z.sin(), z.cos());
    let lo = c * co / z; // ν = -1/2
    let hi = c * s; // ν = +1/2
    match two_nu {
        -1 => lo,
        1 => hi,
        t if t > 1 => {
            let z2 = z * z;
            let mut prev = lo;
            let mut cur = hi;
            let mut two = 1;
            while two < t {
                let next = (two as f64) * cur - z2 * prev;
                prev = cur;
                cur = next;
                two += 2;
            }
            cur
        }
        _ => unreachable!("half-integer orders below -1/2 are not used"),
    }
}

/// Integer-order scaled series z^m J_m(z) (m ≥ 0).
fn jscaled_series_int(m: i32, z: Complex64) -> Complex64 {
    debug_assert!(m >= 0);
    let z2q = z * z * 0.25;
    let mut sum = Complex64::default();
    let mut term = Complex64::new(1.0 / (2f64.powi(m) * factorial(m as usize)), 0.0);
    for k in 0..250 {
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-280) && k > 4 {
            break;
        }
        let kf = (k + 1) as f64;
        term = -term * z2q / (kf * (m as f64 + kf));
    }
    sum * z.powi(2 * m)
}

/// 𝒥ν(z)/z^{2ν} for real z ≥ 0 — the entire "ratio" form used by kernel
/// quadratures (finite and equal to 1/(2^ν Γ(ν+1)) at z = 0).
pub fn jscaled_ratio(two_nu: i32, z: f64) -> f64 {
    debug_assert!(two_nu >= 0 && z >= 0.0);
    let nu = two_nu as f64 / 2.0;
    if z <= SWITCH_RADIUS {
        let z2q = z * z * 0.25;
        let mut sum = 0.0;
        let mut term = 1.0 / (2f64.powf(nu) * gamma_half(two_nu + 2));
        for k in 0..250 {
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-280) && k > 4 {
                break;
            }
            let kf = (k + 1) as f64;
            term = -term * z2q / (kf * (nu + kf));
        }
        sum
    } else {
        let j = jscaled(two_nu, Complex64::new(z, 0.0)).re;
        j / z.powi(two_nu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn half_integer_closed_form_order_three_halves() {
        // Independent closed form: ℋ_{3/2}⁺(z) = −√(2/π) e^{iz} (z + i).
        for &z in &[c(1.0, 0.0), c(0.3, 0.7), c(5.0, 2.0), c(-2.0, 1.0)] {
            let expect = -(2.0 / PI).sqrt() * (Complex64::i() * z).exp() * (z + Complex64::i());
            let got = hankel_scaled_plus(3, z);
            assert!((got - expect).norm() <= 1e-13 * expect.norm());
        }
    }

    #[test]
    fn integer_series_matches_reference_values() {
        // H₁⁽¹⁾(1) from standard tables: J₁(1)=0.4400505857449335,
        // Y₁(1)=-0.7812128213002887.
        let v = hankel_scaled_plus(2, c(1.0, 0.0));
        assert_relative_eq!(v.re, 0.4400505857449335, max_relative = 1e-12);
        assert_relative_eq!(v.im, -0.7812128213002887, max_relative = 1e-12);
        // J₀(2)=0.22389077914123567, Y₀(2)=0.5103756726497451.
        let v0 = hankel_scaled_plus(0, c(2.0, 0.0));
        assert_relative_eq!(v0.re, 0.22389077914123567, max_relative = 1e-12);
        assert_relative_eq!(v0.im, 0.5103756726497451, max_relative = 1e-12);
        // J₂(3)=0.4860912605858911, Y₂(3)=-0.16040039348492372.
        let v2 = hankel_scaled_plus(4, c(3.0, 0.0));
        assert_relative_eq!(v2.re / 9.0, 0.4860912605858911, max_relative = 1e-12);
        assert_relative_eq!(v2.im / 9.0, -0.16040039348492372, max_relative = 1e-12);
    }

    #[test]
    fn small_argument_limit_is_the_named_constant() {
        // ν = 1: limit −2i/π, approached like z² log z.
        let lim = hankel_scaled_plus_at_zero(2);
        assert_relative_eq!(lim.im, -2.0 / PI, max_relative = 1e-15);
        let v = hankel_scaled_plus(2, c(1e-5, 0.0));
        assert!((v - lim).norm() < 1e-8);
        // ν = 2: −4i/π.
        let lim2 = hankel_scaled_plus_at_zero(4);
        assert_relative_eq!(lim2.im, -4.0 / PI, max_relative = 1e-15);
        // ν = 3/2: −i√(2/π).
        let lim32 = hankel_scaled_plus_at_zero(3);
        assert_relative_eq!(lim32.im, -(2.0 / PI).sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn cosh_route_agrees_with_series_route_on_the_seam() {
        // Both routes are valid where they hand over (Im z = 0.4 Re z);
        // the series loses at most a digit there.
        for &r in &[3.0, 6.0, 10.0, 11.9] {
            let z = c(r, 0.4 * r);
            for m in 0..3u32 {
                let k = hankel_scaled_cosh_route(m, z);
                let s = hankel_scaled_series(m, z);
                assert!(
                    (k - s).norm() <= 3e-9 * k.norm(),
                    "seam mismatch at r={r}, m={m}: {k} vs {s}"
                );
            }
        }
    }

    #[test]
    fn series_asymptotic_switchover_is_continuous() {
        // Evaluate both representations at the switch radius; below the
        // route seam the series path applies, above it the cosh path.
        for &m in &[0i32, 2, 4] {
            for &arg in &[0.0, 0.2, 0.37, 0.6, 1.1, 1.5] {
                let z = Complex64::from_polar(SWITCH_RADIUS, arg);
                let inner = if z.im > 0.4 * z.re.abs() && z.im > 1.0 {
                    hankel_scaled_cosh_route((m / 2) as u32, z)
                } else {
                    hankel_scaled_series((m / 2) as u32, z)
                };
                let asym = hankel_scaled_asymptotic(m, z, true);
                assert!(
                    (inner - asym).norm() <= 1e-9 * inner.norm(),
                    "switchover gap for 2ν={m}, arg={arg}: {inner} vs {asym}"
                );
            }
        }
    }

    #[test]
    fn jscaled_matches_definitional_identity_large_z() {
        // 𝒥₁(20) via asymptotics vs series pushed past its comfort zone
        // only slightly (reference from J₁(20) = 0.0668331241757452).
        let v = jscaled(2, c(20.0, 0.0));
        assert_relative_eq!(v.re, 20.0 * 0.06683312417574524, max_relative = 1e-10);
    }

    #[test]
    fn jscaled_ratio_limit_and_consistency() {
        assert_relative_eq!(jscaled_ratio(2, 0.0), 0.5, max_relative = 1e-15);
        // ratio · z^{2ν} = 𝒥ν.
        for &z in &[0.3, 3.0, 14.0] {
            let r = jscaled_ratio(3, z);
            let j = jscaled(3, c(z, 0.0)).re;
            assert_relative_eq!(r * z.powi(3), j, max_relative = 1e-9);
        }
    }

    #[test]
    fn gamma_half_values() {
        assert_relative_eq!(gamma_half(2), 1.0);
        assert_relative_eq!(gamma_half(6), 2.0);
        assert_relative_eq!(gamma_half(1), PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_half(3), PI.sqrt() / 2.0, max_relative = 1e-15);
        assert_relative_eq!(gamma_half(5), 0.75 * PI.sqrt(), max_relative = 1e-15);
    }
}
