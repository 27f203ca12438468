//! The Gibbs-type model object and its prior-predictive laws.
//!
//! A [`GibbsModel`] is an index α ∈ (0,1) together with a tilting family h
//! with E[h(T_α)] = 1. Its partition law is the canonical stable EPPF
//!
//!   p_α(n_1,…,n_k) = α^{k-1} Γ(k)/Γ(n) Π_j (1-α)_{n_j-1}
//!
//! reweighted by the Gibbs weight Ψ_{n,k} = E[h(T_α) | K_n = k], so that the
//! partition probability is Ψ_{n,k} · p_α(n_1,…,n_k), the block-count law is
//! P(K_n = k) = Ψ_{n,k} α^{k-1} Γ(k) S_α(n,k)/Γ(n), and the next observation
//! joins a new block with probability (Ψ_{n+1,k+1}/Ψ_{n,k})·kα/n or block j
//! with probability (Ψ_{n+1,k}/Ψ_{n,k})·(n_j-α)/n.
//!
//! Ψ is computed in closed form for the Pitman-Yor family, by one-dimensional
//! quadrature for the generalized gamma family, through the three-parameter
//! Mittag-Leffler series for the Mittag-Leffler tilt, and by (Beta × tilted
//! stable) quadrature over the conditional total-mass representation
//! T_α | K_n = k  =_d  T_{α,kα} / B_{kα, n-kα} for custom h.

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, log_integrate_half_line};
use crate::rng::RngState;
use crate::special::{ml3_function, StableParams, SpecialValue, StirlingTable};
use crate::stable::{cache_for, log_tilted_pdf};
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta as BetaDist, ContinuousCDF};
use statrs::function::gamma::ln_gamma;
use std::fmt;
use std::sync::{Arc, RwLock};

/// Observed data reduced to its sufficient statistic: the multiset of block
/// sizes (n_1,…,n_k), stored in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    sizes: Vec<u32>,
}

impl Partition {
    pub fn new(sizes: impl Into<Vec<u32>>) -> Result<Self> {
        let mut sizes = sizes.into();
        if sizes.is_empty() {
            return Err(Error::domain("partition needs at least one block"));
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::domain("block sizes must be positive"));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { sizes })
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn n(&self) -> u32 {
        self.sizes.iter().sum()
    }

    pub fn k(&self) -> u32 {
        self.sizes.len() as u32
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.sizes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// A user-supplied mixing tilt h with the metadata rejection sampling needs.
#[derive(Clone)]
pub struct CustomH {
    pub h: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Upper bound sup_t h(t), required by the rejection sampler.
    pub sup_h: f64,
}

impl fmt::Debug for CustomH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomH").field("sup_h", &self.sup_h).finish()
    }
}

/// The tilting family h(t) of the mixing density h(t) f_α(t).
#[derive(Debug, Clone)]
pub enum Family {
    /// h(t) = t^{-θ} / E[T_α^{-θ}]; the Pitman-Yor process PY(α, θ).
    PitmanYor { theta: f64 },
    /// h(t) = exp(λ^α - λt); the normalized generalized gamma process.
    GeneralizedGamma { lambda: f64 },
    /// h(t) ∝ exp(-λ t^{-α}) t^{-θ-jα}: PY(α,θ) conditioned on a mixed
    /// Poisson count N(λ L_{α,θ}) = j of its local time.
    MittagLefflerTilt { lambda: f64, theta: f64, j: u32 },
    /// Arbitrary positive h, validated to satisfy E[h(T_α)] = 1.
    Custom(CustomH),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum FamilySpec {
    PitmanYor { theta: f64 },
    GeneralizedGamma { lambda: f64 },
    MittagLefflerTilt {
        lambda: f64,
        theta: f64,
        #[serde(default)]
        j: u32,
    },
}

#[derive(Serialize, Deserialize)]
struct ModelSpec {
    alpha: f64,
    family: FamilySpec,
}

/// An α-stable Poisson-Kingman (Gibbs-type) model: index α and tilt family.
///
/// Immutable after construction; Ψ and Stirling tables are memoized behind
/// locks, so shared references can be used concurrently.
#[derive(Debug)]
pub struct GibbsModel {
    alpha: StableParams,
    family: Family,
    /// log Ψ_{n,k} rows, rows[n-1][k-1], grown on demand.
    psi_rows: RwLock<Vec<Vec<f64>>>,
    stirling: RwLock<Option<Arc<StirlingTable>>>,
}

impl Clone for GibbsModel {
    fn clone(&self) -> Self {
        GibbsModel {
            alpha: self.alpha,
            family: self.family.clone(),
            psi_rows: RwLock::new(self.psi_rows.read().unwrap().clone()),
            stirling: RwLock::new(self.stirling.read().unwrap().clone()),
        }
    }
}

impl GibbsModel {
    pub fn new(alpha: StableParams, family: Family) -> Result<Self> {
        let a = alpha.alpha();
        match &family {
            Family::PitmanYor { theta } => {
                if !(*theta > -a) {
                    return Err(Error::domain(format!(
                        "Pitman-Yor requires theta > -alpha, got theta = {theta}, alpha = {a}"
                    )));
                }
            }
            Family::GeneralizedGamma { lambda } => {
                if !(*lambda > 0.0) {
                    return Err(Error::domain("generalized gamma requires lambda > 0"));
                }
            }
            Family::MittagLefflerTilt { lambda, theta, .. } => {
                if !(*lambda >= 0.0) {
                    return Err(Error::domain("Mittag-Leffler tilt requires lambda >= 0"));
                }
                if !(*theta > -a) {
                    return Err(Error::domain(format!(
                        "Mittag-Leffler tilt requires theta > -alpha, got theta = {theta}"
                    )));
                }
            }
            Family::Custom(custom) => {
                if !(custom.sup_h > 0.0 && custom.sup_h.is_finite()) {
                    return Err(Error::domain("custom family requires a finite sup_h > 0"));
                }
                // E[h(T_α)] = 1 must hold; validate by quadrature.
                let h = Arc::clone(&custom.h);
                let cache = cache_for(alpha);
                let logf = move |t: f64| {
                    let v = h(t);
                    if v > 0.0 {
                        v.ln() + cache.log_pdf(t)
                    } else {
                        f64::NEG_INFINITY
                    }
                };
                let mean = log_integrate_half_line(&logf, 1.0, 1e-9).exp();
                if !((mean - 1.0).abs() < 1e-4) {
                    return Err(Error::domain(format!(
                        "custom h is not normalized: quadrature gives E[h(T_alpha)] = {mean:.6}"
                    )));
                }
            }
        }
        Ok(GibbsModel {
            alpha,
            family,
            psi_rows: RwLock::new(Vec::new()),
            stirling: RwLock::new(None),
        })
    }

    pub fn pitman_yor(alpha: f64, theta: f64) -> Result<Self> {
        GibbsModel::new(StableParams::new(alpha)?, Family::PitmanYor { theta })
    }

    pub fn generalized_gamma(alpha: f64, lambda: f64) -> Result<Self> {
        GibbsModel::new(StableParams::new(alpha)?, Family::GeneralizedGamma { lambda })
    }

    pub fn mittag_leffler_tilt(alpha: f64, lambda: f64, theta: f64, j: u32) -> Result<Self> {
        GibbsModel::new(
            StableParams::new(alpha)?,
            Family::MittagLefflerTilt { lambda, theta, j },
        )
    }

    /// The canonical model with h ≡ 1 (a Pitman-Yor model with θ = 0).
    pub fn stable_canonical(alpha: f64) -> Result<Self> {
        GibbsModel::pitman_yor(alpha, 0.0)
    }

    pub fn params(&self) -> StableParams {
        self.alpha
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.alpha()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// log h(t) of the family tilt.
    pub fn log_h(&self, t: f64) -> f64 {
        let a = self.alpha.alpha();
        match &self.family {
            Family::PitmanYor { theta } => {
                -theta * t.ln() - (ln_gamma(theta / a + 1.0) - ln_gamma(theta + 1.0))
            }
            Family::GeneralizedGamma { lambda } => lambda.powf(a) - lambda * t,
            Family::MittagLefflerTilt { lambda, theta, j } => {
                let tp = theta + *j as f64 * a;
                let norm = ml3_function(tp / a + 1.0, a, tp + 1.0, *lambda)
                    .expect("normalizer series")
                    .ln()
                    + ln_gamma(tp / a + 1.0)
                    - ln_gamma(tp + 1.0);
                -lambda * t.powf(-a) - tp * t.ln() - norm
            }
            Family::Custom(custom) => {
                let v = (custom.h)(t);
                if v > 0.0 {
                    v.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// Serialize the model descriptor to JSON (built-in families only).
    pub fn to_json(&self) -> Result<String> {
        let family = match &self.family {
            Family::PitmanYor { theta } => FamilySpec::PitmanYor { theta: *theta },
            Family::GeneralizedGamma { lambda } => {
                FamilySpec::GeneralizedGamma { lambda: *lambda }
            }
            Family::MittagLefflerTilt { lambda, theta, j } => FamilySpec::MittagLefflerTilt {
                lambda: *lambda,
                theta: *theta,
                j: *j,
            },
            Family::Custom(_) => {
                return Err(Error::Serialization(
                    "custom tilts carry a function handle and cannot be serialized".into(),
                ))
            }
        };
        serde_json::to_string_pretty(&ModelSpec {
            alpha: self.alpha.alpha(),
            family,
        })
        .map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let spec: ModelSpec =
            serde_json::from_str(json).map_err(|e| Error::Serialization(e.to_string()))?;
        let alpha = StableParams::new(spec.alpha)?;
        let family = match spec.family {
            FamilySpec::PitmanYor { theta } => Family::PitmanYor { theta },
            FamilySpec::GeneralizedGamma { lambda } => Family::GeneralizedGamma { lambda },
            FamilySpec::MittagLefflerTilt { lambda, theta, j } => {
                Family::MittagLefflerTilt { lambda, theta, j }
            }
        };
        GibbsModel::new(alpha, family)
    }

    /// Shared Stirling table covering at least n.
    pub fn stirling(&self, n: u32) -> Arc<StirlingTable> {
        {
            let guard = self.stirling.read().unwrap();
            if let Some(t) = guard.as_ref() {
                if t.n_max() >= n {
                    return Arc::clone(t);
                }
            }
        }
        let mut guard = self.stirling.write().unwrap();
        if guard.as_ref().map_or(true, |t| t.n_max() < n) {
            *guard = Some(Arc::new(StirlingTable::new(self.alpha, n.max(16))));
        }
        Arc::clone(guard.as_ref().unwrap())
    }

    /// log Ψ_{n,k}, memoized.
    pub fn log_psi(&self, n: u32, k: u32) -> Result<f64> {
        if !(k >= 1 && k <= n) {
            return Err(Error::domain(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
        }
        {
            let rows = self.psi_rows.read().unwrap();
            if let Some(row) = rows.get((n - 1) as usize) {
                let v = row[(k - 1) as usize];
                if !v.is_nan() {
                    return Ok(v);
                }
            }
        }
        let v = self.compute_log_psi(n, k)?;
        let mut rows = self.psi_rows.write().unwrap();
        while rows.len() < n as usize {
            let m = rows.len() + 1;
            rows.push(vec![f64::NAN; m]);
        }
        rows[(n - 1) as usize][(k - 1) as usize] = v;
        Ok(v)
    }

    /// The Gibbs weight Ψ_{n,k} = E[h(T_α) | K_n = k] as a log-scale value.
    pub fn psi_weight(&self, n: u32, k: u32) -> Result<SpecialValue> {
        Ok(SpecialValue::from_log(self.log_psi(n, k)?))
    }

    fn compute_log_psi(&self, n: u32, k: u32) -> Result<f64> {
        let a = self.alpha.alpha();
        let (nf, kf) = (n as f64, k as f64);
        match &self.family {
            Family::PitmanYor { theta } => Ok(log_psi_pitman_yor(a, *theta, n, k)),
            Family::GeneralizedGamma { lambda } => {
                // Ψ = α e^{λ^α}/Γ(k) ∫ u^{n-1} (λ+u)^{kα-n} e^{-(λ+u)^α} du,
                // a positive integrand, from the normalized-CRM form of the
                // partition weights.
                let l = *lambda;
                let logf = move |u: f64| {
                    (nf - 1.0) * u.ln() + (kf * a - nf) * (l + u).ln() - (l + u).powf(a)
                };
                let log_i = log_integrate_half_line(&logf, nf.max(1.0), 1e-11);
                Ok(a.ln() + l.powf(a) - ln_gamma(kf) + log_i)
            }
            Family::MittagLefflerTilt { lambda, theta, j } => {
                let tp = theta + *j as f64 * a;
                let num = ml3_function(tp / a + kf, a, tp + nf, *lambda)?;
                let den = ml3_function(tp / a + 1.0, a, tp + 1.0, *lambda)?;
                Ok(num.ln() - den.ln() + log_psi_pitman_yor(a, tp, n, k))
            }
            Family::Custom(custom) => self.log_psi_custom_quadrature(custom, n, k),
        }
    }

    /// Ψ for custom h: E[h(T_{α,kα}/B_{kα,n-kα})] by nested quadrature in the
    /// Beta probability coordinate (outer) and over t (inner).
    fn log_psi_custom_quadrature(&self, custom: &CustomH, n: u32, k: u32) -> Result<f64> {
        let a = self.alpha.alpha();
        let (nf, kf) = (n as f64, k as f64);
        let cache = cache_for(self.alpha);
        let k_alpha = kf * a;
        let inner = |b: f64| -> f64 {
            let h = &custom.h;
            let logf = |t: f64| {
                let v = h(t / b);
                if v > 0.0 {
                    v.ln() + log_tilted_pdf(&cache, k_alpha, t)
                } else {
                    f64::NEG_INFINITY
                }
            };
            log_integrate_half_line(&logf, 1.0, 1e-9)
        };
        let outer = |rule: &[(f64, f64)]| -> f64 {
            let beta = BetaDist::new(k_alpha, nf - k_alpha).expect("beta parameters");
            let mut terms: Vec<f64> = Vec::with_capacity(rule.len());
            for &(x, w) in rule {
                let p = 0.5 * (x + 1.0);
                let b = beta.inverse_cdf(p.clamp(1e-12, 1.0 - 1e-12));
                let b = b.clamp(1e-12, 1.0 - 1e-12);
                terms.push((0.5 * w).ln() + inner(b));
            }
            let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
        };
        let coarse = outer(&gauss_legendre(48));
        let fine = outer(&gauss_legendre(96));
        let diff = (coarse - fine).abs();
        if diff > 1e-7 {
            return Err(Error::QuadratureTolerance {
                what: "custom-family Gibbs weight",
                tol: 1e-7,
                estimate: fine.exp(),
            });
        }
        Ok(fine)
    }

    /// log p_α(n_1,…,n_k): the canonical (h ≡ 1) EPPF at this α.
    pub fn log_canonical_eppf(&self, partition: &Partition) -> f64 {
        let a = self.alpha.alpha();
        let n = partition.n() as f64;
        let k = partition.k() as f64;
        let mut lp = (k - 1.0) * a.ln() + ln_gamma(k) - ln_gamma(n);
        for &nj in partition.sizes() {
            lp += ln_gamma(nj as f64 - a) - ln_gamma(1.0 - a);
        }
        lp
    }

    /// EPPF of the model: probability of one labeled partition with the given
    /// block-size profile, Ψ_{n,k} · p_α(n_1,…,n_k). Symmetric in the sizes;
    /// profile probabilities need the labeled-partition multiplicity factor.
    pub fn eppf(&self, partition: &Partition) -> Result<SpecialValue> {
        let lp = self.log_psi(partition.n(), partition.k())? + self.log_canonical_eppf(partition);
        Ok(SpecialValue::from_log(lp))
    }

    /// Block-count law: P(K_n = k) = Ψ_{n,k} α^{k-1} Γ(k) S_α(n,k) / Γ(n)
    /// for k = 1..n. Entries sum to one up to Ψ quadrature error.
    pub fn k_pmf(&self, n: u32) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::domain("k_pmf requires n >= 1"));
        }
        let table = self.stirling(n);
        let base = table.block_count_log_pmf(n);
        let mut out = Vec::with_capacity(n as usize);
        for k in 1..=n {
            out.push((self.log_psi(n, k)? + base[(k - 1) as usize]).exp());
        }
        Ok(out)
    }

    /// One-step prediction: probability the next observation opens a new
    /// block, and per-block probabilities of joining each existing block
    /// (aligned with `partition.sizes()`).
    pub fn predict(&self, partition: &Partition) -> Result<(f64, Vec<f64>)> {
        let n = partition.n();
        let k = partition.k();
        let a = self.alpha.alpha();
        let log_psi_nk = self.log_psi(n, k)?;
        let new_block =
            (self.log_psi(n + 1, k + 1)? - log_psi_nk).exp() * (k as f64 * a) / n as f64;
        let ratio_same = (self.log_psi(n + 1, k)? - log_psi_nk).exp();
        let existing: Vec<f64> = partition
            .sizes()
            .iter()
            .map(|&nj| ratio_same * (nj as f64 - a) / n as f64)
            .collect();
        Ok((new_block, existing))
    }

    /// Draw a partition of [n] by iterating the prediction rule from a single
    /// observation. The resulting block-size profile has the EPPF law.
    pub fn sample_partition_sequential(&self, rng: &mut RngState, n: u32) -> Result<Partition> {
        if n == 0 {
            return Err(Error::domain("partition size must be >= 1"));
        }
        let mut counts: Vec<u32> = vec![1];
        let a = self.alpha.alpha();
        for m in 1..n {
            let k = counts.len() as u32;
            let log_psi_mk = self.log_psi(m, k)?;
            let new_block =
                (self.log_psi(m + 1, k + 1)? - log_psi_mk).exp() * (k as f64 * a) / m as f64;
            let ratio_same = (self.log_psi(m + 1, k)? - log_psi_mk).exp();
            let mut u = rng.open01();
            if u < new_block {
                counts.push(1);
                continue;
            }
            u -= new_block;
            let mut assigned = false;
            for c in counts.iter_mut() {
                let p = ratio_same * (*c as f64 - a) / m as f64;
                if u < p {
                    *c += 1;
                    assigned = true;
                    break;
                }
                u -= p;
            }
            if !assigned {
                // Rounding at the simplex boundary; the last block absorbs it.
                *counts.last_mut().unwrap() += 1;
            }
        }
        Partition::new(counts)
    }

    /// Draw X_1..X_n: ties follow a sequentially sampled partition and each
    /// block receives a fresh atom from `base`. Returns (values, partition).
    pub fn sample_marginal<A: Clone>(
        &self,
        rng: &mut RngState,
        n: u32,
        mut base: impl FnMut(&mut RngState) -> A,
    ) -> Result<(Vec<A>, Partition)> {
        if n == 0 {
            return Err(Error::domain("sample_marginal requires n >= 1"));
        }
        let mut labels: Vec<usize> = vec![0];
        let mut counts: Vec<u32> = vec![1];
        let mut atoms: Vec<A> = vec![base(rng)];
        let a = self.alpha.alpha();
        for m in 1..n {
            let k = counts.len() as u32;
            let log_psi_mk = self.log_psi(m, k)?;
            let new_block =
                (self.log_psi(m + 1, k + 1)? - log_psi_mk).exp() * (k as f64 * a) / m as f64;
            let ratio_same = (self.log_psi(m + 1, k)? - log_psi_mk).exp();
            let mut u = rng.open01();
            let mut chosen: Option<usize> = None;
            if u < new_block {
                counts.push(1);
                atoms.push(base(rng));
                labels.push(counts.len() - 1);
                continue;
            }
            u -= new_block;
            for (idx, c) in counts.iter().enumerate() {
                let p = ratio_same * (*c as f64 - a) / m as f64;
                if u < p {
                    chosen = Some(idx);
                    break;
                }
                u -= p;
            }
            let idx = chosen.unwrap_or(counts.len() - 1);
            counts[idx] += 1;
            labels.push(idx);
        }
        let values = labels.iter().map(|&l| atoms[l].clone()).collect();
        Ok((values, Partition::new(counts)?))
    }
}

/// log Ψ_{n,k} for the Pitman-Yor family, in the θ-safe product form
/// Ψ = [Π_{i=1}^{k-1} (θ+iα)] / (θ+1)_{n-1} · Γ(n)/(α^{k-1} Γ(k)),
/// valid for all θ > -α including θ = 0 and negative θ.
pub fn log_psi_pitman_yor(alpha: f64, theta: f64, n: u32, k: u32) -> f64 {
    let mut lp = 0.0;
    for i in 1..k {
        lp += (theta + i as f64 * alpha).ln();
    }
    lp -= ln_gamma(theta + n as f64) - ln_gamma(theta + 1.0);
    lp + ln_gamma(n as f64) - (k as f64 - 1.0) * alpha.ln() - ln_gamma(k as f64)
}

/// All block-size profiles (integer partitions, nonincreasing) of n.
pub fn partition_profiles(n: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        let hi = remaining.min(max_part);
        for part in (1..=hi).rev() {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Profiles of n with exactly k parts.
pub fn partition_profiles_with_k(n: u32, k: u32) -> Vec<Vec<u32>> {
    partition_profiles(n)
        .into_iter()
        .filter(|p| p.len() as u32 == k)
        .collect()
}

/// ln of the number of set partitions of [n] sharing a block-size profile:
/// n! / (Π_j n_j! · Π_s m_s!) with m_s the multiplicity of size s.
pub fn profile_multiplicity_ln(profile: &[u32]) -> f64 {
    let n: u32 = profile.iter().sum();
    let mut lm = ln_gamma(n as f64 + 1.0);
    for &nj in profile {
        lm -= ln_gamma(nj as f64 + 1.0);
    }
    let mut mult_count = std::collections::HashMap::new();
    for &nj in profile {
        *mult_count.entry(nj).or_insert(0u32) += 1;
    }
    for (_, m) in mult_count {
        lm -= ln_gamma(m as f64 + 1.0);
    }
    lm
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn partition_validation_and_ordering() {
        let p = Partition::new(vec![1, 3, 2]).unwrap();
        assert_eq!(p.sizes(), &[3, 2, 1]);
        assert_eq!(p.n(), 6);
        assert_eq!(p.k(), 3);
        assert!(Partition::new(Vec::<u32>::new()).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn psi_is_one_at_n1_for_every_family() {
        let models = [
            GibbsModel::pitman_yor(0.5, 0.5).unwrap(),
            GibbsModel::pitman_yor(0.3, -0.1).unwrap(),
            GibbsModel::generalized_gamma(0.5, 1.0).unwrap(),
            GibbsModel::mittag_leffler_tilt(0.5, 1.0, 0.5, 0).unwrap(),
        ];
        for m in &models {
            assert_relative_eq!(m.log_psi(1, 1).unwrap(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn pitman_yor_psi_example() {
        // α = 0.5, θ = 0.5, n = 3, k = 2: Ψ = 2/1.875.
        let m = GibbsModel::pitman_yor(0.5, 0.5).unwrap();
        assert_relative_eq!(
            m.psi_weight(3, 2).unwrap().value(),
            2.0 / 1.875,
            epsilon = 1e-12
        );
    }

    #[test]
    fn canonical_eppf_examples() {
        let m = GibbsModel::stable_canonical(0.5).unwrap();
        let p2 = Partition::new(vec![2]).unwrap();
        assert_relative_eq!(m.eppf(&p2).unwrap().value(), 0.5, epsilon = 1e-12);
        let p1 = Partition::new(vec![1]).unwrap();
        assert_relative_eq!(m.eppf(&p1).unwrap().value(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pitman_yor_eppf_example() {
        let m = GibbsModel::pitman_yor(0.5, 0.5).unwrap();
        let p = Partition::new(vec![2, 1]).unwrap();
        assert_relative_eq!(m.eppf(&p).unwrap().value(), 0.4 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn k_pmf_examples() {
        let canonical = GibbsModel::stable_canonical(0.5).unwrap();
        let pmf = canonical.k_pmf(3).unwrap();
        assert_relative_eq!(pmf[0], 0.375, epsilon = 1e-11);
        assert_relative_eq!(pmf[1], 0.375, epsilon = 1e-11);
        assert_relative_eq!(pmf[2], 0.25, epsilon = 1e-11);
        assert_eq!(canonical.k_pmf(1).unwrap(), vec![1.0]);

        let py = GibbsModel::pitman_yor(0.5, 0.5).unwrap();
        let pmf2 = py.k_pmf(2).unwrap();
        assert_relative_eq!(pmf2[0], 1.0 / 3.0, epsilon = 1e-11);
        assert_relative_eq!(pmf2[1], 2.0 / 3.0, epsilon = 1e-11);
    }

    #[test]
    fn k_pmf_sums_to_one_for_builtins() {
        let models = [
            GibbsModel::pitman_yor(0.3, 2.0).unwrap(),
            GibbsModel::pitman_yor(0.7, -0.35).unwrap(),
            GibbsModel::generalized_gamma(0.5, 1.0).unwrap(),
            GibbsModel::generalized_gamma(0.3, 2.5).unwrap(),
            GibbsModel::mittag_leffler_tilt(0.5, 1.0, 0.5, 0).unwrap(),
            GibbsModel::mittag_leffler_tilt(0.3, 2.0, 0.5, 1).unwrap(),
        ];
        for m in &models {
            for n in [1u32, 4, 9, 12] {
                let total: f64 = m.k_pmf(n).unwrap().iter().sum();
                assert_relative_eq!(total, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn predict_examples() {
        // PY closed form: new block with probability (θ+kα)/(θ+n).
        let m = GibbsModel::pitman_yor(0.5, 0.5).unwrap();
        let p = Partition::new(vec![2, 1]).unwrap();
        let (new_block, existing) = m.predict(&p).unwrap();
        assert_relative_eq!(new_block, 1.5 / 3.5, epsilon = 1e-12);
        assert_relative_eq!(existing[0], 1.5 / 3.5, epsilon = 1e-12);
        assert_relative_eq!(existing[1], 0.5 / 3.5, epsilon = 1e-12);

        // Canonical model from a single observation: new block w.p. α.
        let c = GibbsModel::stable_canonical(0.5).unwrap();
        let single = Partition::new(vec![1]).unwrap();
        let (nb, _) = c.predict(&single).unwrap();
        assert_relative_eq!(nb, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn predict_components_sum_to_one() {
        let models = [
            GibbsModel::pitman_yor(0.3, 1.5).unwrap(),
            GibbsModel::generalized_gamma(0.5, 1.0).unwrap(),
            GibbsModel::mittag_leffler_tilt(0.5, 1.0, 0.5, 0).unwrap(),
        ];
        for m in &models {
            for profile in [vec![1u32], vec![2, 1], vec![3, 2, 2], vec![5, 1, 1, 1]] {
                let p = Partition::new(profile).unwrap();
                let (new_block, existing) = m.predict(&p).unwrap();
                let total = new_block + existing.iter().sum::<f64>();
                assert_relative_eq!(total, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn eppf_profiles_sum_to_one() {
        let models = [
            GibbsModel::pitman_yor(0.5, 0.5).unwrap(),
            GibbsModel::generalized_gamma(0.4, 1.0).unwrap(),
            GibbsModel::mittag_leffler_tilt(0.6, 1.0, 0.5, 0).unwrap(),
        ];
        for m in &models {
            for n in 1..=8u32 {
                let mut total = 0.0;
                for profile in partition_profiles(n) {
                    let mult = profile_multiplicity_ln(&profile);
                    let p = Partition::new(profile).unwrap();
                    total += (mult + m.eppf(&p).unwrap().log_magnitude()).exp();
                }
                assert_relative_eq!(total, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn gibbs_recursion_holds() {
        // V_{n,k} = (n - kα) V_{n+1,k} + V_{n+1,k+1} with
        // V_{n,k} = Ψ_{n,k} α^{k-1} Γ(k)/Γ(n).
        let models = [
            GibbsModel::pitman_yor(0.5, 0.5).unwrap(),
            GibbsModel::pitman_yor(0.3, -0.15).unwrap(),
            GibbsModel::generalized_gamma(0.5, 1.0).unwrap(),
            GibbsModel::mittag_leffler_tilt(0.5, 1.0, 0.5, 0).unwrap(),
        ];
        for m in &models {
            let a = m.alpha();
            let log_v = |n: u32, k: u32| -> f64 {
                m.log_psi(n, k).unwrap() + (k as f64 - 1.0) * a.ln() + ln_gamma(k as f64)
                    - ln_gamma(n as f64)
            };
            for n in 1..=12u32 {
                for k in 1..=n {
                    let lhs = log_v(n, k).exp();
                    let rhs = (n as f64 - k as f64 * a) * log_v(n + 1, k).exp()
                        + log_v(n + 1, k + 1).exp();
                    assert_relative_eq!(lhs, rhs, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn custom_unit_h_reproduces_canonical() {
        let custom = GibbsModel::new(
            StableParams::new(0.5).unwrap(),
            Family::Custom(CustomH {
                h: Arc::new(|_| 1.0),
                sup_h: 1.0,
            }),
        )
        .unwrap();
        for (n, k) in [(1u32, 1u32), (3, 2), (5, 3), (6, 1)] {
            let psi = custom.psi_weight(n, k).unwrap().value();
            assert_relative_eq!(psi, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn custom_h_must_be_normalized() {
        let bad = GibbsModel::new(
            StableParams::new(0.5).unwrap(),
            Family::Custom(CustomH {
                h: Arc::new(|_| 2.0),
                sup_h: 2.0,
            }),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn model_json_roundtrip_is_bit_exact() {
        let m = GibbsModel::pitman_yor(0.5000000000000001, 0.4999999999999999).unwrap();
        let json = m.to_json().unwrap();
        let back = GibbsModel::from_json(&json).unwrap();
        assert_eq!(m.alpha().to_bits(), back.alpha().to_bits());
        match (m.family(), back.family()) {
            (Family::PitmanYor { theta: t1 }, Family::PitmanYor { theta: t2 }) => {
                assert_eq!(t1.to_bits(), t2.to_bits());
            }
            _ => panic!("family mismatch"),
        }
        let mlt = GibbsModel::mittag_leffler_tilt(0.3, 1.25, -0.1, 2).unwrap();
        let back = GibbsModel::from_json(&mlt.to_json().unwrap()).unwrap();
        match back.family() {
            Family::MittagLefflerTilt { lambda, theta, j } => {
                assert_eq!(*lambda, 1.25);
                assert_eq!(*theta, -0.1);
                assert_eq!(*j, 2);
            }
            _ => panic!("family mismatch"),
        }
    }

    #[test]
    fn profiles_and_multiplicities() {
        // Bell number check: Σ_profiles multiplicity = B_n.
        let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
        for n in 1..=8u32 {
            let total: f64 = partition_profiles(n)
                .iter()
                .map(|p| profile_multiplicity_ln(p).exp())
                .sum();
            assert_relative_eq!(total, bell[n as usize] as f64, epsilon = 1e-6);
        }
        assert_eq!(partition_profiles_with_k(6, 2).len(), 3);
    }

    #[test]
    fn mltilt_reduces_to_py_at_lambda_zero() {
        let py = GibbsModel::pitman_yor(0.5, 0.7).unwrap();
        let ml = GibbsModel::mittag_leffler_tilt(0.5, 0.0, 0.7, 0).unwrap();
        for (n, k) in [(2u32, 1u32), (5, 3), (9, 4)] {
            assert_relative_eq!(
                py.log_psi(n, k).unwrap(),
                ml.log_psi(n, k).unwrap(),
                epsilon = 1e-12
            );
        }
    }
}
