//! Scaled cylinder functions ℋν±(λ) = λ^ν Hν±(λ) and 𝒥ν(z) = z^ν Jν(z)
//! for ν = (n−2)/2, together with the amplitude factors bν±(z) of the
//! oscillatory decomposition 𝒥ν(z) = e^{iz} bν⁺(z) + e^{-iz} bν⁻(z).

pub mod cyl;

use crate::error::{Error, Result};
use crate::radialops::fit::{fit_envelope, EnvelopeFitReport, SampleSet};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest argument magnitude accepted by the evaluators.
pub const MAX_ARGUMENT: f64 = 1e6;
/// Imaginary parts beyond this make e^{-|Im λ|} underflow past any
/// relative-accuracy target.
pub const MAX_IMAG: f64 = 700.0;

/// Cylinder-function order ν = (n−2)/2 for a dimension n ≥ 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order {
    two_nu: i32,
    dimension: u32,
}

impl Order {
    pub fn from_dimension(n: u32) -> Result<Order> {
        if n < 4 {
            return Err(Error::Domain(format!("dimension {n} < 4")));
        }
        Ok(Order {
            two_nu: n as i32 - 2,
            dimension: n,
        })
    }

    pub fn nu(&self) -> f64 {
        self.two_nu as f64 / 2.0
    }

    pub fn two_nu(&self) -> i32 {
        self.two_nu
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn is_half_integer(&self) -> bool {
        self.two_nu % 2 != 0
    }
}

/// Outgoing (`Plus`, upper half-plane) or incoming (`Minus`, lower
/// half-plane) branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// A value of ℋν± together with the evaluation metadata.
#[derive(Debug, Clone, Copy)]
pub struct ScaledCylinderValue {
    pub value: Complex64,
    pub argument: Complex64,
    pub branch: Branch,
}

/// Amplitude pair (bν⁺, bν⁻) at a positive argument.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudePair {
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    pub at: f64,
}

fn check_half_plane(branch: Branch, lambda: Complex64) -> Result<()> {
    match branch {
        Branch::Plus if lambda.im < 0.0 => Err(Error::Domain(format!(
            "plus branch requires Im λ ≥ 0, got λ = {lambda}"
        ))),
        Branch::Minus if lambda.im > 0.0 => Err(Error::Domain(format!(
            "minus branch requires Im λ ≤ 0, got λ = {lambda}"
        ))),
        _ => Ok(()),
    }
}

fn check_range(lambda: Complex64) -> Result<()> {
    if lambda == Complex64::default() {
        return Err(Error::Domain("λ = 0; use hankel_scaled_at_zero".into()));
    }
    if lambda.norm() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "|λ| = {} exceeds the evaluator domain {MAX_ARGUMENT:.0e}",
            lambda.norm()
        )));
    }
    if lambda.im.abs() > MAX_IMAG {
        return Err(Error::Range(format!(
            "|Im λ| = {} makes e^(-|Im λ|) underflow; no relative accuracy is possible",
            lambda.im.abs()
        )));
    }
    Ok(())
}

/// ℋν±(λ) on the matching closed half-plane.
pub fn hankel_scaled(order: Order, branch: Branch, lambda: Complex64) -> Result<ScaledCylinderValue> {
    check_half_plane(branch, lambda)?;
    check_range(lambda)?;
    let value = match branch {
        Branch::Plus => cyl::hankel_scaled_plus(order.two_nu, lambda),
        Branch::Minus => cyl::hankel_scaled_minus(order.two_nu, lambda),
    };
    Ok(ScaledCylinderValue {
        value,
        argument: lambda,
        branch,
    })
}

/// The finite limit ℋν±(0) (the constant term of the small-argument form).
pub fn hankel_scaled_at_zero(order: Order, branch: Branch) -> Complex64 {
    let v = cyl::hankel_scaled_plus_at_zero(order.two_nu);
    match branch {
        Branch::Plus => v,
        Branch::Minus => v.conj(),
    }
}

/// 𝒥ν(z) = z^ν Jν(z), entire in z.
pub fn bessel_j_scaled(order: Order, z: Complex64) -> Result<Complex64> {
    if z.norm() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "|z| = {} exceeds the evaluator domain",
            z.norm()
        )));
    }
    if z.im.abs() > MAX_IMAG {
        return Err(Error::Range("Im z beyond exp range".into()));
    }
    Ok(cyl::jscaled(order.two_nu, z))
}

/// j-th derivative of 𝒥ν at real z > 0 (j ≤ 2), by the exact recurrence
/// ∂z 𝒥ν = z 𝒥_{ν-1}.
pub fn bessel_j_scaled_deriv(order: Order, j: u32, z: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::Domain("derivative recurrences need z > 0".into()));
    }
    let zc = Complex64::new(z, 0.0);
    let t = order.two_nu;
    let v = match j {
        0 => cyl::jscaled(t, zc),
        1 => zc * cyl::jscaled(t - 2, zc),
        2 => cyl::jscaled(t - 2, zc) + zc * zc * cyl::jscaled(t - 4, zc),
        _ => {
            return Err(Error::Domain(
                "derivative orders above 2 are not provided".into(),
            ))
        }
    };
    Ok(v.re)
}

/// j-th derivative of ℋν± at real z > 0 (j ≤ 2).
pub fn hankel_scaled_deriv(order: Order, branch: Branch, j: u32, z: f64) -> Result<Complex64> {
    if z <= 0.0 {
        return Err(Error::Domain("derivative recurrences need z > 0".into()));
    }
    let zc = Complex64::new(z, 0.0);
    let h = |two_nu: i32| match branch {
        Branch::Plus => cyl::hankel_scaled_plus(two_nu, zc),
        Branch::Minus => cyl::hankel_scaled_minus(two_nu, zc),
    };
    let t = order.two_nu;
    Ok(match j {
        0 => h(t),
        1 => zc * h(t - 2),
        2 => h(t - 2) + zc * zc * h(t - 4),
        _ => {
            return Err(Error::Domain(
                "derivative orders above 2 are not provided".into(),
            ))
        }
    })
}

/// Amplitude factor bν±(z) = e^{∓iz} ℋν±(z) / 2 for z > 0.
pub fn amplitude_b(order: Order, branch: Branch, z: f64) -> Result<Complex64> {
    if z <= 0.0 {
        return Err(Error::Domain(format!("amplitude_b needs z > 0, got {z}")));
    }
    let zc = Complex64::new(z, 0.0);
    let h = hankel_scaled(order, branch, zc)?.value;
    let phase = Complex64::new(0.0, -branch.sign() * z).exp();
    Ok(0.5 * phase * h)
}

/// Both amplitudes at once, satisfying
/// e^{iz} b⁺ + e^{-iz} b⁻ = 𝒥ν(z) exactly.
pub fn amplitude_pair(order: Order, z: f64) -> Result<AmplitudePair> {
    Ok(AmplitudePair {
        b_plus: amplitude_b(order, Branch::Plus, z)?,
        b_minus: amplitude_b(order, Branch::Minus, z)?,
        at: z,
    })
}

/// j-th derivative of bν± at z > 0 (j ≤ 2), by cylinder recurrences.
pub fn amplitude_b_deriv(order: Order, branch: Branch, j: u32, z: f64) -> Result<Complex64> {
    if z <= 0.0 {
        return Err(Error::Domain("amplitude derivatives need z > 0".into()));
    }
    let zc = Complex64::new(z, 0.0);
    let h = |two_nu: i32| match branch {
        Branch::Plus => cyl::hankel_scaled_plus(two_nu, zc),
        Branch::Minus => cyl::hankel_scaled_minus(two_nu, zc),
    };
    let t = order.two_nu;
    let s = branch.sign();
    let phase = Complex64::new(0.0, -s * z).exp();
    let mi = Complex64::new(0.0, -s); // ∓i
    Ok(match j {
        0 => 0.5 * phase * h(t),
        1 => 0.5 * phase * (zc * h(t - 2) + mi * h(t)),
        2 => {
            0.5 * phase
                * (zc * zc * h(t - 4) + (Complex64::new(1.0, 0.0) + 2.0 * mi * zc) * h(t - 2)
                    - h(t))
        }
        _ => {
            return Err(Error::Domain(
                "derivative orders above 2 are not provided".into(),
            ))
        }
    })
}

/// Japanese bracket ⟨z⟩ = (1 + |z|²)^{1/2}.
pub fn bracket(z: f64) -> f64 {
    (1.0 + z * z).sqrt()
}

/// Measures the growth envelope |ℋν±(λ)| ≤ C ⟨λ⟩^{(n-3)/2} e^{-|Im λ|}
/// over the supplied grid (which must lie in the branch's half-plane).
/// Stability is judged against the every-other-point coarsening of the
/// grid, so callers should pass the refined sweep.
pub fn check_envelope_2_6(
    order: Order,
    branch: Branch,
    grid: &[Complex64],
) -> Result<EnvelopeFitReport> {
    if grid.is_empty() {
        return Err(Error::Usage("empty sample grid".into()));
    }
    let p = (order.dimension() as f64 - 3.0) / 2.0;
    let mut set = SampleSet::new(&["re_lambda", "im_lambda"]);
    for &lam in grid {
        let v = hankel_scaled(order, branch, lam)?;
        let env = bracket(lam.norm()).powf(p) * (-lam.im.abs()).exp();
        set.push(&[lam.re, lam.im], v.value.norm(), env);
    }
    fit_envelope(&set, "2.6")
}

/// Rectangle grid helper for envelope sweeps on a half-plane quadrant.
pub fn quadrant_grid(
    re: (f64, f64),
    im: (f64, f64),
    n_re: usize,
    n_im: usize,
    log_re: bool,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_re * n_im);
    for i in 0..n_re {
        let fr = i as f64 / (n_re - 1).max(1) as f64;
        let x = if log_re {
            re.0 * (re.1 / re.0).powf(fr)
        } else {
            re.0 + (re.1 - re.0) * fr
        };
        for k in 0..n_im {
            let fi = k as f64 / (n_im - 1).max(1) as f64;
            let y = im.0 + (im.1 - im.0) * fi;
            out.push(Complex64::new(x, y));
        }
    }
    out
}
