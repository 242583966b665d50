//! Small interpolation tables used to cache kernel profiles inside the
//! nested Born quadratures.

use num_complex::Complex64;

/// Cubic (Catmull–Rom) interpolation on a uniform grid.
#[derive(Debug, Clone)]
pub struct UniformTable1 {
    a: f64,
    step: f64,
    values: Vec<Complex64>,
}

impl UniformTable1 {
    pub fn build(a: f64, b: f64, n: usize, mut f: impl FnMut(f64) -> Complex64) -> Self {
        assert!(n >= 4 && b > a);
        let step = (b - a) / (n - 1) as f64;
        let values = (0..n).map(|i| f(a + step * i as f64)).collect();
        UniformTable1 { a, step, values }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        let t = ((x - self.a) / self.step).clamp(0.0, (n - 1) as f64);
        let i = (t.floor() as usize).clamp(1, n - 3);
        let s = t - i as f64;
        let (p0, p1, p2, p3) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        // Catmull–Rom basis
        0.5 * ((2.0 * p1)
            + (p2 - p0) * s
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (s * s)
            + (3.0 * (p1 - p2) + p3 - p0) * (s * s * s))
    }
}

/// Bilinear interpolation on a uniform 2-D tensor grid.
#[derive(Debug, Clone)]
pub struct UniformTable2 {
    a: [f64; 2],
    step: [f64; 2],
    shape: [usize; 2],
    values: Vec<Complex64>,
}

impl UniformTable2 {
    pub fn build(
        a: [f64; 2],
        b: [f64; 2],
        shape: [usize; 2],
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> Self {
        let step = [
            (b[0] - a[0]) / (shape[0] - 1) as f64,
            (b[1] - a[1]) / (shape[1] - 1) as f64,
        ];
        let mut values = Vec::with_capacity(shape[0] * shape[1]);
        for i in 0..shape[0] {
            let x = a[0] + step[0] * i as f64;
            for j in 0..shape[1] {
                let y = a[1] + step[1] * j as f64;
                values.push(f(x, y));
            }
        }
        UniformTable2 {
            a,
            step,
            shape,
            values,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let tx = ((x - self.a[0]) / self.step[0]).clamp(0.0, (self.shape[0] - 1) as f64);
        let ty = ((y - self.a[1]) / self.step[1]).clamp(0.0, (self.shape[1] - 1) as f64);
        let i = (tx.floor() as usize).min(self.shape[0] - 2);
        let j = (ty.floor() as usize).min(self.shape[1] - 2);
        let fx = tx - i as f64;
        let fy = ty - j as f64;
        let idx = |i: usize, j: usize| self.values[i * self.shape[1] + j];
        idx(i, j) * ((1.0 - fx) * (1.0 - fy))
            + idx(i + 1, j) * (fx * (1.0 - fy))
            + idx(i, j + 1) * ((1.0 - fx) * fy)
            + idx(i + 1, j + 1) * (fx * fy)
    }
}

/// Trilinear interpolation on a uniform 3-D tensor grid.
#[derive(Debug, Clone)]
pub struct UniformTable3 {
    a: [f64; 3],
    step: [f64; 3],
    shape: [usize; 3],
    values: Vec<Complex64>,
}

impl UniformTable3 {
    pub fn build(
        a: [f64; 3],
        b: [f64; 3],
        shape: [usize; 3],
        f: impl Fn(f64, f64, f64) -> Complex64 + Sync,
    ) -> Self {
        use rayon::prelude::*;
        let step = [
            (b[0] - a[0]) / (shape[0] - 1) as f64,
            (b[1] - a[1]) / (shape[1] - 1) as f64,
            (b[2] - a[2]) / (shape[2] - 1) as f64,
        ];
        let values: Vec<Complex64> = (0..shape[0] * shape[1] * shape[2])
            .into_par_iter()
            .map(|lin| {
                let i = lin / (shape[1] * shape[2]);
                let j = (lin / shape[2]) % shape[1];
                let k = lin % shape[2];
                f(
                    a[0] + step[0] * i as f64,
                    a[1] + step[1] * j as f64,
                    a[2] + step[2] * k as f64,
                )
            })
            .collect();
        UniformTable3 {
            a,
            step,
            shape,
            values,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        let t = [
            ((x - self.a[0]) / self.step[0]).clamp(0.0, (self.shape[0] - 1) as f64),
            ((y - self.a[1]) / self.step[1]).clamp(0.0, (self.shape[1] - 1) as f64),
            ((z - self.a[2]) / self.step[2]).clamp(0.0, (self.shape[2] - 1) as f64),
        ];
        let i = (t[0].floor() as usize).min(self.shape[0] - 2);
        let j = (t[1].floor() as usize).min(self.shape[1] - 2);
        let k = (t[2].floor() as usize).min(self.shape[2] - 2);
        let f = [t[0] - i as f64, t[1] - j as f64, t[2] - k as f64];
        let idx = |i: usize, j: usize, k: usize| {
            self.values[(i * self.shape[1] + j) * self.shape[2] + k]
        };
        let mut acc = Complex64::default();
        for (di, wi) in [(0, 1.0 - f[0]), (1, f[0])] {
            for (dj, wj) in [(0, 1.0 - f[1]), (1, f[1])] {
                for (dk, wk) in [(0, 1.0 - f[2]), (1, f[2])] {
                    acc += idx(i + di, j + dj, k + dk) * (wi * wj * wk);
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_reproduces_smooth_function() {
        let t = UniformTable1::build(0.0, 10.0, 400, |x| {
            Complex64::new((x * 0.7).sin(), (x * 0.3).cos())
        });
        for i in 0..57 {
            let x = 0.05 + 9.9 * i as f64 / 57.0;
            let e = Complex64::new((x * 0.7).sin(), (x * 0.3).cos());
            assert!((t.eval(x) - e).norm() < 2e-7, "x={x}");
        }
    }

    #[test]
    fn trilinear_is_exact_for_affine() {
        let t = UniformTable3::build([0.0; 3], [1.0; 3], [5, 5, 5], |x, y, z| {
            Complex64::new(1.0 + 2.0 * x - y + 0.5 * z, 0.0)
        });
        let v = t.eval(0.33, 0.71, 0.52);
        assert!((v.re - (1.0 + 0.66 - 0.71 + 0.26)).abs() < 1e-12);
    }
}
