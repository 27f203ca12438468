use pkgibbs::special::*;
use pkgibbs::quad::*;
use pkgibbs::stable::*;
use statrs::distribution::{Beta as BetaDist, ContinuousCDF};

#[test]
fn probe_ml2_identity() {
    let (alpha, lambda, theta) = (0.3f64, 2.0f64, 0.8f64);
    let (n, k) = (4u32, 4u32);
    let (nf, kf) = (n as f64, k as f64);
    let p = StableParams::new(alpha).unwrap();
    let cache = cache_for(p);
    // Route 1: series
    let series = ml3_function(theta/alpha + kf, alpha, theta + nf, lambda).unwrap();
    // Route 2: E[ E^{((θ+n)/α)}_{α,θ+n}(-λ B_{θ/α+k, n/α-k}) ] by quadrature
    let bdist = BetaDist::new(theta/alpha + kf, nf/alpha - kf).unwrap();
    let rule = gauss_legendre(128);
    let mut mix = 0.0;
    for &(x, w) in &rule {
        let pr = (0.5*(x+1.0)).clamp(1e-14, 1.0-1e-14);
        let b = bdist.inverse_cdf(pr);
        mix += 0.5 * w * ml3_function((theta+nf)/alpha, alpha, theta+nf, lambda*b).unwrap();
    }
    // Route 3: direct 2-D quadrature E[e^{-λ b^α t^{-α}}], t ~ tilted(θ+kα), b ~ Beta(θ+kα, n-kα)
    let bdist2 = BetaDist::new(theta + kf*alpha, nf - kf*alpha).unwrap();
    let mut direct = 0.0;
    for &(x, w) in &rule {
        let pr = (0.5*(x+1.0)).clamp(1e-14, 1.0-1e-14);
        let b = bdist2.inverse_cdf(pr);
        let logf = |t: f64| -lambda * b.powf(alpha) * t.powf(-alpha) + log_tilted_pdf(&cache, theta + kf*alpha, t);
        direct += 0.5 * w * log_integrate_half_line(&logf, 1.0, 1e-11).exp();
    }
    println!("series = {:.12}", series);
    println!("beta-mixture = {:.12}", mix);
    println!("direct 2d = {:.12}", direct);
}

#[test]
fn probe_ml3_fixed() {
    // mpmath reference values at (alpha=0.3, theta=0.8, n=4)
    let truth = [
        (1u32, 4.618110311073e-02),
        (2, 1.961660876217e-02),
        (3, 8.262733347759e-03),
        (4, 3.449087117803e-03),
    ];
    for &(k, v) in &truth {
        let got = ml3_function(0.8/0.3 + k as f64, 0.3, 0.8 + 4.0, 2.0).unwrap();
        println!("k={k}: got={:.12e} truth={:.12e} rel={:.2e}", got, v, (got/v - 1.0).abs());
    }
}
