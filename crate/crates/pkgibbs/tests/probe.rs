use pkgibbs::special::StableParams;
use pkgibbs::stable::*;

#[test]
fn probe_cache_mismatch() {
    for &alpha in &[0.3f64, 0.5, 0.8] {
        let p = StableParams::new(alpha).unwrap();
        let cache = cache_for(p);
        let grid = pkgibbs::table::log_grid(1e-5, 1e9, 300);
        let mut worst = (0.0f64, 0.0f64, 0.0, 0.0);
        for &t in &grid {
            let fast = cache.log_pdf(t);
            let slow = log_stable_pdf(p, t);
            if slow > -800.0 {
                let err = (fast - slow).abs();
                if err > worst.0 { worst = (err, t, fast, slow); }
            }
        }
        println!("alpha={} worst abs log err={:.3e} at t={:.6e} fast={:.10} slow={:.10}", alpha, worst.0, worst.1, worst.2, worst.3);
    }
}

#[test]
fn probe_integral_alpha03() {
    let p = StableParams::new(0.3).unwrap();
    for &t in &[1e3, 5e3, 1e4, 2.0e4, 2.2e4, 5e4, 1e5] {
        let full = log_stable_pdf(p, t);
        println!("t={:e} log f={:.12}", t, full);
    }
    let total = pkgibbs::quad::log_integrate_half_line(&|t| log_stable_pdf(p, t), 0.5, 1e-10).exp();
    println!("total={:.10}", total);
    let thr = 0.05f64.powf(-1.0/0.3);
    println!("threshold={:.4e}", thr);
    for &t in &[thr*0.99, thr*1.00001, thr*1.01] {
        println!("t={:.6e} logf={:.12}", t, log_stable_pdf(p, t));
    }
}
