//! Tabulated-inversion sampling support.
//!
//! A [`MonotoneCdfTable`] stores a strictly increasing grid together with the
//! (normalized) CDF values of a density on that grid, interpolated by a
//! monotone piecewise cubic (Fritsch-Carlson). Sampling inverts the
//! interpolant by bisection/Newton inside the bracketing segment, so the
//! sampled law equals the interpolated CDF; accuracy is set by the grid, and
//! builders refine until a doubling test passes.

/// Monotone cubic interpolated CDF on a fixed grid, invertible for sampling.
#[derive(Debug, Clone)]
pub struct MonotoneCdfTable {
    x: Vec<f64>,
    cdf: Vec<f64>,
    /// Fritsch-Carlson endpoint derivatives of the CDF per node.
    slope: Vec<f64>,
}

impl MonotoneCdfTable {
    /// Build from a grid and unnormalized per-segment masses.
    ///
    /// `masses[i]` is the integral of the density over `[x[i], x[i+1]]`.
    pub fn from_segment_masses(x: Vec<f64>, masses: &[f64]) -> Self {
        assert_eq!(masses.len() + 1, x.len());
        assert!(x.len() >= 2);
        let mut cdf = Vec::with_capacity(x.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for &m in masses {
            acc += m.max(0.0);
            cdf.push(acc);
        }
        let total = acc;
        assert!(
            total > 0.0 && total.is_finite(),
            "degenerate density: total mass {total}"
        );
        for c in cdf.iter_mut() {
            *c /= total;
        }
        *cdf.last_mut().unwrap() = 1.0;
        let slope = fritsch_carlson_slopes(&x, &cdf);
        MonotoneCdfTable { x, cdf, slope }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    /// CDF value at `x` (clamped to the table support).
    pub fn cdf(&self, xq: f64) -> f64 {
        if xq <= self.x[0] {
            return 0.0;
        }
        if xq >= *self.x.last().unwrap() {
            return 1.0;
        }
        let i = self.x.partition_point(|&v| v <= xq) - 1;
        let i = i.min(self.x.len() - 2);
        let (h, t) = {
            let h = self.x[i + 1] - self.x[i];
            ((xq - self.x[i]) / h, h)
        };
        hermite(self.cdf[i], self.cdf[i + 1], self.slope[i] * t, self.slope[i + 1] * t, h)
    }

    /// Quantile: the x with interpolated CDF equal to `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        // Bracketing segment by binary search on node CDF values.
        let mut i = self.cdf.partition_point(|&c| c < u);
        if i == 0 {
            return self.x[0];
        }
        if i >= self.cdf.len() {
            return *self.x.last().unwrap();
        }
        i -= 1;
        let c0 = self.cdf[i];
        let c1 = self.cdf[i + 1];
        if c1 <= c0 {
            return self.x[i];
        }
        let t = self.x[i + 1] - self.x[i];
        let (d0, d1) = (self.slope[i] * t, self.slope[i + 1] * t);
        // Solve hermite(h) = u for h in [0,1] by safeguarded Newton.
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut h = (u - c0) / (c1 - c0);
        for _ in 0..40 {
            let f = hermite(c0, c1, d0, d1, h) - u;
            if f > 0.0 {
                hi = h;
            } else {
                lo = h;
            }
            let df = hermite_deriv(c0, c1, d0, d1, h);
            let mut step = if df > 0.0 { h - f / df } else { f64::NAN };
            if !(step > lo && step < hi) {
                step = 0.5 * (lo + hi);
            }
            if (step - h).abs() < 1e-14 {
                h = step;
                break;
            }
            h = step;
        }
        self.x[i] + h * t
    }
}

/// Cubic Hermite basis evaluation on a unit segment.
fn hermite(y0: f64, y1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + d0 * (t3 - 2.0 * t2 + t)
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + d1 * (t3 - t2)
}

fn hermite_deriv(y0: f64, y1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let t2 = t * t;
    y0 * (6.0 * t2 - 6.0 * t)
        + d0 * (3.0 * t2 - 4.0 * t + 1.0)
        + y1 * (-6.0 * t2 + 6.0 * t)
        + d1 * (3.0 * t2 - 2.0 * t)
}

/// Monotonicity-preserving node derivatives (Fritsch-Carlson limiter).
fn fritsch_carlson_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut delta = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        delta.push((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
    }
    let mut d = vec![0.0; n];
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            let w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // Clamp endpoint slopes to preserve monotonicity.
    for i in [0, n - 1] {
        let adj = if i == 0 { delta[0] } else { delta[n - 2] };
        if d[i] * adj <= 0.0 {
            d[i] = 0.0;
        } else if d[i].abs() > 3.0 * adj.abs() {
            d[i] = 3.0 * adj;
        }
    }
    d
}

/// Build a CDF table for a density given by `log_density`, on an explicit grid.
///
/// Per-segment masses come from 8-point Gauss-Legendre applied to
/// exp(log_density - shift); the shift is the grid maximum of the
/// log-density, so extreme scales are safe.
pub fn table_from_log_density<F: Fn(f64) -> f64>(grid: &[f64], log_density: F) -> MonotoneCdfTable {
    use std::sync::OnceLock;
    static GL8: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let rule = GL8.get_or_init(|| crate::quad::gauss_legendre(8));

    let node_vals: Vec<f64> = grid.iter().map(|&x| log_density(x)).collect();
    let shift = node_vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(
        shift.is_finite(),
        "log-density is -inf on the whole grid"
    );
    let mut masses = Vec::with_capacity(grid.len() - 1);
    for i in 0..grid.len() - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for &(t, w) in rule {
            let v = log_density(c + h * t) - shift;
            if v > -745.0 {
                s += w * v.exp();
            }
        }
        masses.push(s * h);
    }
    MonotoneCdfTable::from_segment_masses(grid.to_vec(), &masses)
}

/// Log-spaced grid of `n` points over [lo, hi] (both positive).
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Uniform grid of `n` points over [lo, hi].
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(hi > lo && n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
