//! Stable Poisson-Kingman (Gibbs-type) random partitions for 0 < α < 1.
//!
//! A Gibbs-type prior in this class is a random probability measure whose
//! ranked weights follow PK_α(h·f_α): the law of the normalized jumps of an
//! α-stable subordinator conditioned on its total mass T_α = t, mixed over t
//! with density h(t)f_α(t), where f_α is the positive stable density with
//! Laplace transform E[exp(-λT_α)] = exp(-λ^α) and h ≥ 0 has E[h(T_α)] = 1.
//!
//! The crate provides:
//!
//! - [`special`]: log-scale special functions — Pochhammer symbols,
//!   generalized Stirling numbers S_α(n,k), the three-parameter
//!   Mittag-Leffler series, the confluent hypergeometric ₁F₁(a;b;-λ), and
//!   negative moments of T_α.
//! - [`stable`]: the positive stable density f_α (angle-integral evaluation
//!   with series tails), its polynomial tilts f_{α,θ}, and the
//!   Mittag-Leffler local-time densities g_{α,θ}.
//! - [`samplers`]: exact variate generation for T_α, T_{α,θ}, Dirichlet and
//!   GEM(α,θ) stick weights, and the size-biased sticks of PD(α|t).
//! - [`model`]: [`model::GibbsModel`] — α plus a tilting family h
//!   (Pitman-Yor, generalized gamma, Mittag-Leffler tilt, or custom) — with
//!   the Gibbs weights Ψ_{n,k}, the EPPF, the block-count law, the
//!   prediction rule, and sequential partition/marginal sampling.
//! - [`posterior`]: exact samplers for the conditional law of the measure
//!   given an observed partition, in both the size-biased (T1) and the
//!   coagulation/fragmentation (T2) representation, plus the posterior-mean
//!   identity with the prediction rule.
//! - [`families`]: closed forms for the Pitman-Yor and generalized
//!   Mittag-Leffler specializations, used both as fast paths and as oracles.
//! - [`stats`]: Kolmogorov-Smirnov and chi-square tests for the Monte-Carlo
//!   verification harness.

pub mod error;
pub mod families;
pub mod model;
pub mod posterior;
pub mod quad;
pub mod rng;
pub mod samplers;
pub mod special;
pub mod stable;
pub mod stats;
pub mod table;

pub use error::Error;
pub use rng::RngState;
pub use special::{SpecialValue, StableParams};
