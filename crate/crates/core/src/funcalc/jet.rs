//! Truncated Taylor ("jet") arithmetic. The smooth cutoffs here are all
//! built from `exp(-1/x)` by field operations, so propagating jets
//! through those operations yields machine-exact derivatives of any
//! cutoff-derived quantity — no finite differences.

/// Number of Taylor coefficients carried (derivative orders 0..=7).
pub const JET_LEN: usize = 8;

/// Taylor coefficients `f(x₀), f'(x₀), f''(x₀)/2!, ...` at a base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; JET_LEN]);

impl Jet {
    pub fn constant(c: f64) -> Jet {
        let mut a = [0.0; JET_LEN];
        a[0] = c;
        Jet(a)
    }

    pub fn variable(x: f64) -> Jet {
        let mut a = [0.0; JET_LEN];
        a[0] = x;
        a[1] = 1.0;
        Jet(a)
    }

    pub fn zero() -> Jet {
        Jet([0.0; JET_LEN])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// k-th derivative (k! times the k-th coefficient).
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for j in 2..=k {
            fact *= j as f64;
        }
        self.0[k] * fact
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(&o.0) {
            *x += y;
        }
        Jet(a)
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(&o.0) {
            *x -= y;
        }
        Jet(a)
    }

    pub fn neg(&self) -> Jet {
        let mut a = self.0;
        for x in a.iter_mut() {
            *x = -*x;
        }
        Jet(a)
    }

    pub fn scale(&self, c: f64) -> Jet {
        let mut a = self.0;
        for x in a.iter_mut() {
            *x *= c;
        }
        Jet(a)
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut a = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut s = 0.0;
            for j in 0..=k {
                s += self.0[j] * o.0[k - j];
            }
            a[k] = s;
        }
        Jet(a)
    }

    /// 1/f, requiring f(x₀) ≠ 0.
    pub fn recip(&self) -> Jet {
        let f0 = self.0[0];
        debug_assert!(f0 != 0.0, "jet reciprocal at a zero");
        let mut r = [0.0; JET_LEN];
        r[0] = 1.0 / f0;
        for k in 1..JET_LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.0[j] * r[k - j];
            }
            r[k] = -s / f0;
        }
        Jet(r)
    }

    pub fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.recip())
    }

    /// exp(f), via k e_k = Σ_{j=1..k} j f_j e_{k-j}.
    pub fn exp(&self) -> Jet {
        let mut e = [0.0; JET_LEN];
        e[0] = self.0[0].exp();
        for k in 1..JET_LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.0[j] * e[k - j];
            }
            e[k] = s / k as f64;
        }
        Jet(e)
    }
}
