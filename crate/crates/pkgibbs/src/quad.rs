//! Numerical integration utilities.
//!
//! Adaptive Gauss-Kronrod (G7,K15) on finite intervals, plus peak-normalized
//! log-domain integration for densities of the form exp(logf) whose scale can
//! be far outside double range. Half-line integrals are handled by locating
//! the integrand's peak and extending geometrically until the log-integrand
//! falls a fixed depth below it.

/// Kronrod-15 abscissae on [0, 1] side of the symmetric rule.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Gauss-7 weights paired with the odd-indexed Kronrod abscissae.
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7,K15 panel: returns (kronrod, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for (i, (&x, &wk)) in XGK[..7].iter().zip(WGK[..7].iter()).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        k += wk * (f1 + f2);
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    (k * h, (k - g).abs() * h)
}

/// Adaptive G7,K15 integration of `f` over [a, b].
///
/// Splits the worst panel until the summed error estimate satisfies
/// `err <= max(abs_tol, rel_tol * |integral|)` or the panel budget runs out.
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    #[derive(Clone, Copy)]
    struct Panel {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
    }
    let (val, err) = gk15(f, a, b);
    let mut panels = vec![Panel { a, b, val, err }];
    for _ in 0..2000 {
        let total: f64 = panels.iter().map(|p| p.val).sum();
        let err_sum: f64 = panels.iter().map(|p| p.err).sum();
        if err_sum <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        // Split the panel with the largest error estimate.
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .unwrap();
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            panels.push(p);
            break; // interval exhausted at double precision
        }
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        panels.push(Panel {
            a: p.a,
            b: m,
            val: v1,
            err: e1,
        });
        panels.push(Panel {
            a: m,
            b: p.b,
            val: v2,
            err: e2,
        });
    }
    panels.iter().map(|p| p.val).sum()
}

/// log of ∫_a^b exp(logf(x)) dx on a finite interval, shift-normalized.
///
/// The maximum of `logf` is located on a scan grid and the integral is
/// computed as m + log ∫ exp(logf - m), which is safe even when the values
/// of exp(logf) under- or overflow.
pub fn log_integrate_finite<F: Fn(f64) -> f64>(
    logf: &F,
    a: f64,
    b: f64,
    scan: usize,
    rel_tol: f64,
) -> f64 {
    let n = scan.max(16);
    let mut m = f64::NEG_INFINITY;
    for i in 0..=n {
        let x = a + (b - a) * (i as f64) / (n as f64);
        let v = logf(x);
        if v > m {
            m = v;
        }
    }
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let g = |x: f64| {
        let v = logf(x) - m;
        if v < -745.0 {
            0.0
        } else {
            v.exp()
        }
    };
    let integral = adaptive_gk(&g, a, b, rel_tol, 0.0);
    if integral <= 0.0 {
        f64::NEG_INFINITY
    } else {
        m + integral.ln()
    }
}

/// log of ∫_0^∞ exp(logf(t)) dt for a unimodal-after-scan integrand.
///
/// Work happens in the log-abscissa y = ln t, where the integrand is
/// g(y) = logf(e^y) + y; the bracket is grown until g falls a fixed depth
/// below its peak. Using g rather than logf bounds the discarded mass even
/// for power-law tails of logf, where g still decays linearly in y.
pub fn log_integrate_half_line<F: Fn(f64) -> f64>(logf: &F, t_hint: f64, rel_tol: f64) -> f64 {
    let hint = if t_hint.is_finite() && t_hint > 0.0 {
        t_hint
    } else {
        1.0
    };
    let g = |y: f64| logf(y.exp()) + y;
    // Coarse peak scan over a wide grid around the hint.
    let y_hint = hint.ln();
    let mut peak_y = y_hint;
    let mut peak_v = g(y_hint);
    for i in -80..=80 {
        let y = y_hint + 0.5 * i as f64;
        let v = g(y);
        if v > peak_v {
            peak_v = v;
            peak_y = y;
        }
    }
    if peak_v == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let depth = 55.0;
    let mut lo = peak_y;
    while lo > -690.0 && g(lo) > peak_v - depth {
        lo -= 0.7;
    }
    let mut hi = peak_y;
    while hi < 690.0 && g(hi) > peak_v - depth {
        hi += 0.7;
    }
    log_integrate_finite(&g, lo, hi, 512, rel_tol)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Initial guess (Chebyshev-like), then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Value and derivative of the Legendre polynomial P_n at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gk_integrates_polynomial_exactly() {
        let f = |x: f64| 3.0 * x * x;
        assert_relative_eq!(adaptive_gk(&f, 0.0, 2.0, 1e-12, 0.0), 8.0, epsilon = 1e-12);
    }

    #[test]
    fn gk_handles_singular_endpoint() {
        // ∫_0^1 x^{-1/2} dx = 2
        let f = |x: f64| if x > 0.0 { x.powf(-0.5) } else { 0.0 };
        assert_relative_eq!(adaptive_gk(&f, 0.0, 1.0, 1e-10, 0.0), 2.0, epsilon = 1e-6);
    }

    #[test]
    fn log_half_line_matches_gamma_integral() {
        // ∫_0^∞ t^{4} e^{-t} dt = Γ(5) = 24
        let logf = |t: f64| 4.0 * t.ln() - t;
        let v = log_integrate_half_line(&logf, 4.0, 1e-11);
        assert_relative_eq!(v.exp(), 24.0, epsilon = 1e-8);
    }

    #[test]
    fn log_half_line_handles_extreme_scale() {
        // ∫ exp(-t/s) dt = s with s = 1e-250: peak value 1, tiny support.
        let s = 1e-250;
        let logf = |t: f64| -t / s;
        let v = log_integrate_half_line(&logf, s, 1e-11);
        assert_relative_eq!(v, s.ln(), epsilon = 1e-8);
    }

    #[test]
    fn gauss_legendre_nodes_integrate_cubics() {
        let rule = gauss_legendre(8);
        let integral: f64 = rule.iter().map(|&(x, w)| w * (x * x * x + x * x)).sum();
        assert_relative_eq!(integral, 2.0 / 3.0, epsilon = 1e-13);
    }
}
