//! Closed-form analysis: cycle statistics of large random regular graphs,
//! the high-probability cut-fraction envelope they imply, and the
//! order-statistics model that prices multishot sampling against a
//! classical anytime solver.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::config::EngineConfig;
use crate::error::{Error, Result};
use crate::graph::{anchored_regular_tree, anchored_single_cycle, canonical_key_capped};
use crate::qaoa::{key_hex, ExpectationTable};
use crate::solvers::PerformanceProfile;

/// Required samples saturate here; the doubly exponential growth in n
/// leaves machine range quickly and the flag records that it did.
pub const SAMPLE_SENTINEL: u64 = i64::MAX as u64;

/// Poisson cycle census of the d-regular configuration model, valid in the
/// large-n limit: counts of l-cycles are independent Poisson with mean
/// (d-1)^l / (2l).
#[derive(Debug, Clone, Serialize)]
pub struct CycleStats {
    pub d: u32,
    pub lambda_by_length: BTreeMap<u32, f64>,
    pub m_by_length: BTreeMap<u32, f64>,
    /// The cited asymptotic is proven for odd degree; even degrees are
    /// computed anyway but flagged.
    pub asymptotic_guaranteed: bool,
}

impl CycleStats {
    /// Census over cycle lengths 3..=lmax.
    pub fn new(d: u32, lmax: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "degree must be at least 2, got {d}"
            )));
        }
        if lmax < 3 {
            return Err(Error::InvalidArgument(format!(
                "cycle census needs lmax >= 3, got {lmax}"
            )));
        }
        let mut lambda_by_length = BTreeMap::new();
        for l in 3..=lmax {
            let (num, den) = Self::mean_rational(d, l);
            lambda_by_length.insert(l, num as f64 / den as f64);
        }
        Ok(CycleStats {
            d,
            m_by_length: lambda_by_length.clone(),
            lambda_by_length,
            asymptotic_guaranteed: d % 2 == 1,
        })
    }

    /// The exact rational ((d-1)^l, 2l) behind the Poisson mean, kept in
    /// integers so the identity m_l * 2l = (d-1)^l is checkable without
    /// rounding.
    pub fn mean_rational(d: u32, l: u32) -> (u128, u32) {
        let base = (d - 1) as u128;
        (base.pow(l), 2 * l)
    }
}

/// Probability mass with the validity caveat of the underlying asymptotic.
#[derive(Debug, Clone, Copy)]
pub struct CycleProbability {
    pub mass: f64,
    /// False for even degree, where the Poisson form is not guaranteed.
    pub asymptotic_guaranteed: bool,
}

/// P(exactly t cycles of length l) in the large-n limit: Poisson mass at t
/// with mean (d-1)^l / (2l). Computed in log space so large means and
/// large t stay finite.
pub fn cycle_probability(d: u32, l: u32, t: u64) -> Result<CycleProbability> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "degree must be at least 2, got {d}"
        )));
    }
    if l < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycles have length at least 3, got {l}"
        )));
    }
    let (num, den) = CycleStats::mean_rational(d, l);
    let lambda = num as f64 / den as f64;
    let tf = t as f64;
    let log_mass = tf * lambda.ln() - lambda - libm::lgamma(tf + 1.0);
    Ok(CycleProbability {
        mass: log_mass.exp(),
        asymptotic_guaranteed: d % 2 == 1,
    })
}

/// High-probability envelope on the ensemble cut fraction at size n,
/// obtained by lower-bounding the tree-subgraph count and the single-cycle
/// class counts, then substituting extremal values for everything else.
#[derive(Debug, Clone, Serialize)]
pub struct WhpBounds {
    pub n: u64,
    pub d: u32,
    pub p: u32,
    /// Lower bound on the number of edges whose neighbourhood is the tree.
    pub m_tree_lower: f64,
    /// Lower bounds on the single-l-cycle class counts actually used.
    pub cycle_count_lowers: BTreeMap<u32, f64>,
    pub cut_lower: f64,
    pub cut_upper: f64,
    /// Cycle lengths in range whose value was absent from the table; their
    /// terms are dropped, which is the extremal 0/1 substitution.
    pub missing_cycle_lengths: Vec<u32>,
    /// True when the cycle-count lower bounds exceeded the edge budget
    /// (tiny n). The counting premise is vacuous there and the envelope
    /// falls back to the tree-only form, which at m_tree_lower = 0 is the
    /// whole interval [0, 1].
    pub degenerate: bool,
}

/// Envelope at size n from a depth-p expectation table. The table must
/// contain the tree class; cycle classes are used when present and dropped
/// (extremal substitution) when not.
pub fn whp_bounds(
    n: u64,
    d: u32,
    p: u32,
    table: &ExpectationTable,
    cfg: &EngineConfig,
) -> Result<WhpBounds> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 2 and d >= 2, got n={n} d={d}"
        )));
    }
    if table.depth() != p {
        return Err(Error::InvalidArgument(format!(
            "table depth {} does not match p={p}",
            table.depth()
        )));
    }
    let class_key = |sub: &crate::graph::AnchoredSubgraph| -> Result<String> {
        Ok(key_hex(&canonical_key_capped(sub, cfg.canon_cap)?.key))
    };
    let tree_key = class_key(&anchored_regular_tree(d, p))?;
    let f_tree = table
        .get(&tree_key)
        .ok_or_else(|| Error::MissingClasses(vec![tree_key.clone()]))?
        .value;

    let m = n as f64 * d as f64 / 2.0;
    let census = CycleStats::new(d, 2 * p + 1)?;
    let cycle_edges: f64 = census
        .m_by_length
        .iter()
        .map(|(&l, &ml)| l as f64 * ml)
        .sum();
    let m_tree_lower = (m - cycle_edges).max(0.0);

    let mut cycle_count_lowers = BTreeMap::new();
    let mut missing = Vec::new();
    let mut sum_count = 0.0;
    let mut sum_f = 0.0;
    let mut sum_loss = 0.0;
    for (&l, &ml) in &census.m_by_length {
        let count = l as f64 * ml * (1.0 - m_tree_lower / m);
        match table.get(&class_key(&anchored_single_cycle(d, p, l))?) {
            Some(entry) => {
                cycle_count_lowers.insert(l, count);
                sum_count += count;
                sum_f += count * entry.value;
                sum_loss += count * (1.0 - entry.value);
            }
            None => missing.push(l),
        }
    }

    // Counting argument is consistent only while the class lower bounds
    // fit inside the edge budget; that always holds when any tree edges
    // remain and fails only for n small enough that every edge sits on a
    // short cycle.
    let degenerate = m_tree_lower + sum_count > m;
    let (cut_lower, cut_upper) = if degenerate {
        (
            (m_tree_lower * f_tree / m).clamp(0.0, 1.0),
            ((m - m_tree_lower * (1.0 - f_tree)) / m).clamp(0.0, 1.0),
        )
    } else {
        (
            ((m_tree_lower * f_tree + sum_f) / m).clamp(0.0, 1.0),
            ((m - m_tree_lower * (1.0 - f_tree) - sum_loss) / m).clamp(0.0, 1.0),
        )
    };
    Ok(WhpBounds {
        n,
        d,
        p,
        m_tree_lower,
        cycle_count_lowers,
        cut_lower,
        cut_upper,
        missing_cycle_lengths: missing,
        degenerate,
    })
}

/// Gaussian model of the single-shot cut-fraction distribution: mean mu,
/// standard deviation gamma_p / sqrt(n).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CostDistributionModel {
    pub mu: f64,
    pub gamma_p: f64,
    pub n: u64,
    pub sigma: f64,
}

impl CostDistributionModel {
    pub fn new(mu: f64, gamma_p: f64, n: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidArgument(format!(
                "mean cut fraction must be in [0,1], got {mu}"
            )));
        }
        if !(gamma_p > 0.0) || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "need gamma_p > 0 and n >= 1, got gamma_p={gamma_p} n={n}"
            )));
        }
        Ok(CostDistributionModel {
            mu,
            gamma_p,
            n,
            sigma: gamma_p / (n as f64).sqrt(),
        })
    }

    /// Model from empirically fitted moments instead of a known gamma_p.
    pub fn from_fit(mu: f64, sigma: f64, n: u64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "fitted sigma must be positive, got {sigma}"
            )));
        }
        Self::new(mu, sigma * (n as f64).sqrt(), n)
    }
}

/// Expected best of k independent draws from the model.
#[derive(Debug, Clone, Copy)]
pub struct BestOfK {
    /// Quadrature over the order-statistic density, relative error 1e-6.
    pub numeric: f64,
    /// mu + sigma * sqrt(2 ln k), the standard Gaussian max bound.
    pub upper_bound: f64,
}

pub fn best_of_k(model: &CostDistributionModel, k: u64) -> Result<BestOfK> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let upper_bound = model.mu + model.sigma * (2.0 * (k as f64).ln()).sqrt();
    let numeric = model.mu + model.sigma * standard_normal_max_mean(k);
    Ok(BestOfK {
        numeric,
        upper_bound,
    })
}

fn normal_pdf(x: f64) -> f64 {
    (-x * x / 2.0).exp() / (2.0 * PI).sqrt()
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// E[max of k standard normals] = int x k phi(x) Phi(x)^(k-1) dx, clipped
/// to +-12 where the remaining mass is < 1e-30 even at k = 10^6.
fn standard_normal_max_mean(k: u64) -> f64 {
    if k == 1 {
        // The integral is the plain Gaussian mean; skip the quadrature so
        // best-of-1 is the model mean to the last bit.
        return 0.0;
    }
    let kf = k as f64;
    let density = move |x: f64| {
        let cdf = normal_cdf(x);
        if cdf <= 0.0 {
            return 0.0;
        }
        x * kf * normal_pdf(x) * ((kf - 1.0) * cdf.ln()).exp()
    };
    adaptive_simpson(&density, -12.0, 12.0, 1e-10)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    let c = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fc = f(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_refine(f, a, b, fa, fb, fc, whole, eps, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let fd = f(d);
    let fe = f(e);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_refine(f, a, c, fa, fc, fd, left, eps / 2.0, depth - 1)
        + simpson_refine(f, c, b, fc, fb, fe, right, eps / 2.0, depth - 1)
}

/// Expected cut-fraction improvement from keeping the best of k samples:
/// gamma_p * sqrt((2/n) ln k). Natural log, consistent with the Gaussian
/// max bound the expression descends from.
pub fn multishot_gain(gamma_p: f64, n: u64, k: u64) -> f64 {
    debug_assert!(gamma_p > 0.0 && n >= 1 && k >= 1);
    gamma_p * (2.0 / n as f64 * (k as f64).ln()).sqrt()
}

/// Which exponent required_samples inverts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleExponent {
    /// exp(n delta^2 / (2 gamma^2)): the exact inversion of the gain
    /// formula. Default.
    Derived,
    /// exp(n delta^2 / gamma^2): compatibility with the doubled exponent
    /// some derivations quote; twice the exponent of `Derived`.
    Doubled,
}

#[derive(Debug, Clone, Copy)]
pub struct RequiredSamples {
    pub k: u64,
    /// True when the true k exceeds the sentinel.
    pub saturated: bool,
}

/// Samples needed before the expected best matches a deficit of delta;
/// 1 when the single-shot mean already suffices.
pub fn required_samples(gamma_p: f64, n: u64, delta: f64, mode: SampleExponent) -> RequiredSamples {
    debug_assert!(gamma_p > 0.0 && n >= 1);
    if delta <= 0.0 {
        return RequiredSamples {
            k: 1,
            saturated: false,
        };
    }
    let exponent = match mode {
        SampleExponent::Derived => n as f64 * delta * delta / (2.0 * gamma_p * gamma_p),
        SampleExponent::Doubled => n as f64 * delta * delta / (gamma_p * gamma_p),
    };
    let k = exponent.exp().ceil();
    if !k.is_finite() || k >= SAMPLE_SENTINEL as f64 {
        return RequiredSamples {
            k: SAMPLE_SENTINEL,
            saturated: true,
        };
    }
    RequiredSamples {
        k: (k as u64).max(1),
        saturated: false,
    }
}

/// Shot rate a sampler must sustain to deliver k samples within t seconds.
pub fn threshold_frequency(k: u64, t_seconds: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if !(t_seconds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time must be positive, got {t_seconds}"
        )));
    }
    Ok(k as f64 / t_seconds)
}

/// Quality-speed quadrant of one comparison point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    BetterFaster,
    BetterSlower,
    WorseFaster,
    WorseSlower,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::BetterFaster => "better-faster",
            Region::BetterSlower => "better-slower",
            Region::WorseFaster => "worse-faster",
            Region::WorseSlower => "worse-slower",
        })
    }
}

/// One classical profile point priced against the quantum model.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AdvantageQuery {
    pub t_seconds: f64,
    pub classical_quality: f64,
    /// classical_quality - quantum mu; positive means the sampler must
    /// make up ground.
    pub delta: f64,
    pub k: u64,
    pub saturated: bool,
    pub nu_hz: f64,
    pub region: Region,
}

/// The full sweep over profile points, with the minimising time.
#[derive(Debug, Clone, Serialize)]
pub struct AdvantageCurve {
    pub n: u64,
    pub p: u32,
    pub gamma_p: f64,
    pub quantum_mu: f64,
    pub shot_seconds: f64,
    pub points: Vec<AdvantageQuery>,
    pub min_nu_hz: f64,
    pub argmin_t_seconds: f64,
}

/// Evaluate delta, required samples, and the threshold frequency at every
/// point of every profile; classify each point into a quality-speed
/// quadrant given a hypothetical seconds-per-shot for the sampler.
pub fn advantage_curve(
    profiles: &[PerformanceProfile],
    model: &CostDistributionModel,
    p: u32,
    shot_seconds: f64,
    mode: SampleExponent,
) -> Result<AdvantageCurve> {
    if profiles.is_empty() {
        return Err(Error::InvalidArgument("no profiles to evaluate".into()));
    }
    if !(shot_seconds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "seconds per shot must be positive, got {shot_seconds}"
        )));
    }
    for profile in profiles {
        if !profile.valid {
            return Err(Error::InvalidArgument(format!(
                "profile {} is invalid: {}",
                profile.instance,
                profile.diagnostics.join("; ")
            )));
        }
    }
    let mut points = Vec::new();
    for profile in profiles {
        for pt in &profile.trace {
            let quality = pt.cut as f64 / profile.num_edges as f64;
            let delta = quality - model.mu;
            let rs = required_samples(model.gamma_p, model.n, delta, mode);
            let nu_hz = threshold_frequency(rs.k, pt.seconds)?;
            // Saturated k means the sampling time is beyond astronomical;
            // the multiplication overflowing to inf classifies correctly.
            let quantum_seconds = rs.k as f64 * shot_seconds;
            let region = match (delta <= 0.0, quantum_seconds <= pt.seconds) {
                (true, true) => Region::BetterFaster,
                (true, false) => Region::BetterSlower,
                (false, true) => Region::WorseFaster,
                (false, false) => Region::WorseSlower,
            };
            points.push(AdvantageQuery {
                t_seconds: pt.seconds,
                classical_quality: quality,
                delta,
                k: rs.k,
                saturated: rs.saturated,
                nu_hz,
                region,
            });
        }
    }
    let best = points
        .iter()
        .min_by(|a, b| {
            a.nu_hz
                .total_cmp(&b.nu_hz)
                .then(a.t_seconds.total_cmp(&b.t_seconds))
        })
        .expect("nonempty by construction");
    Ok(AdvantageCurve {
        n: model.n,
        p,
        gamma_p: model.gamma_p,
        quantum_mu: model.mu,
        shot_seconds,
        min_nu_hz: best.nu_hz,
        argmin_t_seconds: best.t_seconds,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qaoa::TableEntry;
    use crate::solvers::ProfilePoint;
    use crate::tensor::QaoaAngles;
    use approx::assert_abs_diff_eq;

    #[test]
    fn poisson_mass_matches_direct_evaluation() {
        let p = cycle_probability(3, 3, 0).unwrap();
        assert!(p.asymptotic_guaranteed);
        assert_abs_diff_eq!(p.mass, (-4.0f64 / 3.0).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.mass, 0.2636, epsilon = 5e-5);
        assert!(!cycle_probability(4, 3, 0).unwrap().asymptotic_guaranteed);
        assert!(cycle_probability(3, 2, 0).is_err());
        assert!(cycle_probability(1, 3, 0).is_err());
    }

    #[test]
    fn poisson_normalizes_with_mean_lambda_up_to_length_13() {
        for l in 3..=13u32 {
            let (num, den) = CycleStats::mean_rational(3, l);
            let lambda = num as f64 / den as f64;
            // Sum far enough past the mean that the missing tail is below
            // the tolerance even at lambda = 2^13/26.
            let tmax = (lambda + 60.0 * lambda.sqrt()) as u64 + 50;
            let mut total = 0.0;
            let mut mean = 0.0;
            for t in 0..=tmax {
                let mass = cycle_probability(3, l, t).unwrap().mass;
                total += mass;
                mean += t as f64 * mass;
            }
            assert!((total - 1.0).abs() <= 1e-12, "l={l}: total {total}");
            assert!(
                ((mean - lambda) / lambda).abs() <= 1e-12,
                "l={l}: mean {mean} vs {lambda}"
            );
        }
    }

    #[test]
    fn census_keeps_the_exact_rational_identity() {
        let stats = CycleStats::new(3, 13).unwrap();
        for (&l, &m) in &stats.m_by_length {
            let (num, den) = CycleStats::mean_rational(3, l);
            // Identity holds in integers; the float field is its rounding.
            assert_eq!(num, 2u128.pow(l));
            assert_eq!(den, 2 * l);
            assert_eq!(m, num as f64 / den as f64);
            assert_eq!(stats.lambda_by_length[&l], m);
        }
        assert!(stats.asymptotic_guaranteed);
        assert!(!CycleStats::new(4, 5).unwrap().asymptotic_guaranteed);
        assert!(CycleStats::new(3, 2).is_err());
    }

    /// Depth-2 cubic table with the frozen reference values for the tree
    /// and the three in-window cycle classes.
    fn p2_table(cfg: &EngineConfig) -> (QaoaAngles, ExpectationTable) {
        let angles = QaoaAngles::new(
            vec![0.48815930327587925, 0.8977321736413455],
            vec![0.5537670644267164, 0.29145634969827183],
        )
        .unwrap();
        let table = ExpectationTable::new(&angles);
        let mut put = |sub: &crate::graph::AnchoredSubgraph, value: f64| {
            let key = key_hex(&canonical_key_capped(sub, cfg.canon_cap).unwrap().key);
            table.insert(
                key,
                TableEntry {
                    value,
                    width: 0,
                    seconds: 0.0,
                },
            );
        };
        put(&anchored_regular_tree(3, 2), 0.7559);
        put(&anchored_single_cycle(3, 2, 3), 0.6457);
        put(&anchored_single_cycle(3, 2, 4), 0.7905);
        put(&anchored_single_cycle(3, 2, 5), 0.7503);
        (angles, table)
    }

    #[test]
    fn bounds_collapse_to_the_tree_value_in_the_limit() {
        let cfg = EngineConfig::default();
        let (_, table) = p2_table(&cfg);
        let b = whp_bounds(1_000_000_000, 3, 2, &table, &cfg).unwrap();
        assert!(!b.degenerate);
        assert!(b.missing_cycle_lengths.is_empty());
        assert_abs_diff_eq!(b.cut_lower, 0.7559, epsilon = 1e-6);
        assert_abs_diff_eq!(b.cut_upper, 0.7559, epsilon = 1e-6);
    }

    #[test]
    fn bounds_at_n256_match_the_hand_computation() {
        // M = 384, tree lower bound 384 - (4 + 8 + 16) = 356, cycle class
        // lower bounds l * m_l * 28/384; weighted sums evaluated by hand.
        let cfg = EngineConfig::default();
        let (_, table) = p2_table(&cfg);
        let b = whp_bounds(256, 3, 2, &table, &cfg).unwrap();
        assert!(!b.degenerate);
        assert_abs_diff_eq!(b.m_tree_lower, 356.0, epsilon = 1e-9);
        assert_abs_diff_eq!(b.cycle_count_lowers[&3], 4.0 * 28.0 / 384.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.cut_lower, 0.704754, epsilon = 1e-4);
        assert_abs_diff_eq!(b.cut_upper, 0.772353, epsilon = 1e-4);
        assert!(b.cut_lower <= 0.7559 && 0.7559 <= b.cut_upper);
    }

    #[test]
    fn tiny_instances_fall_back_to_the_trivial_envelope() {
        // At n = 10, M = 15 while short cycles claim 28 edges; every count
        // bound is vacuous and the envelope is the whole interval.
        let cfg = EngineConfig::default();
        let (_, table) = p2_table(&cfg);
        let b = whp_bounds(10, 3, 2, &table, &cfg).unwrap();
        assert!(b.degenerate);
        assert_eq!(b.m_tree_lower, 0.0);
        assert_eq!(b.cut_lower, 0.0);
        assert_eq!(b.cut_upper, 1.0);
    }

    #[test]
    fn envelope_brackets_the_tree_value_and_shrinks_like_one_over_n() {
        let cfg = EngineConfig::default();
        let (_, table) = p2_table(&cfg);
        let mut scaled_widths = Vec::new();
        for n in [1_000u64, 10_000, 100_000, 1_000_000] {
            let b = whp_bounds(n, 3, 2, &table, &cfg).unwrap();
            assert!(b.m_tree_lower > 0.0);
            assert!(b.cut_lower <= 0.7559 && 0.7559 <= b.cut_upper, "n={n}");
            scaled_widths.push((b.cut_upper - b.cut_lower) * n as f64);
        }
        // Width * n approaches a constant: successive estimates agree.
        let last = scaled_widths[scaled_widths.len() - 1];
        let prev = scaled_widths[scaled_widths.len() - 2];
        assert!(
            ((last - prev) / last).abs() < 0.01,
            "scaled widths {scaled_widths:?}"
        );
    }

    #[test]
    fn missing_cycle_rows_degrade_to_tree_only_bounds() {
        let cfg = EngineConfig::default();
        let angles = QaoaAngles::new(vec![0.4, 0.2], vec![0.3, 0.1]).unwrap();
        let table = ExpectationTable::new(&angles);
        let tree_key = key_hex(
            &canonical_key_capped(&anchored_regular_tree(3, 2), cfg.canon_cap)
                .unwrap()
                .key,
        );
        table.insert(
            tree_key,
            TableEntry {
                value: 0.75,
                width: 0,
                seconds: 0.0,
            },
        );
        let b = whp_bounds(10_000, 3, 2, &table, &cfg).unwrap();
        assert_eq!(b.missing_cycle_lengths, vec![3, 4, 5]);
        assert!(b.cycle_count_lowers.is_empty());
        let m = 15_000.0;
        let t = m - 28.0;
        assert_abs_diff_eq!(b.cut_lower, t * 0.75 / m, epsilon = 1e-12);
        assert_abs_diff_eq!(b.cut_upper, (m - t * 0.25) / m, epsilon = 1e-12);
    }

    #[test]
    fn tree_row_is_mandatory() {
        let cfg = EngineConfig::default();
        let angles = QaoaAngles::new(vec![0.4], vec![0.3]).unwrap();
        let empty = ExpectationTable::new(&angles);
        match whp_bounds(100, 3, 1, &empty, &cfg) {
            Err(Error::MissingClasses(keys)) => assert_eq!(keys.len(), 1),
            other => panic!("expected missing tree class, got {other:?}"),
        }
        // Depth mismatch between table and p is refused outright.
        assert!(whp_bounds(100, 3, 2, &empty, &cfg).is_err());
    }

    #[test]
    fn best_of_one_is_the_mean_and_two_has_a_closed_form() {
        let model = CostDistributionModel::new(0.7, 0.19, 256).unwrap();
        let one = best_of_k(&model, 1).unwrap();
        assert_eq!(one.numeric, 0.7);
        assert_eq!(one.upper_bound, 0.7);
        let two = best_of_k(&model, 2).unwrap();
        assert_abs_diff_eq!(
            two.numeric,
            model.mu + model.sigma / PI.sqrt(),
            epsilon = 1e-9
        );
        assert!(best_of_k(&model, 0).is_err());
    }

    #[test]
    fn numeric_best_grows_but_never_beats_the_bound() {
        let model = CostDistributionModel::new(0.5, 0.2, 64).unwrap();
        let mut last = f64::NEG_INFINITY;
        for k in [1u64, 2, 4, 16, 256, 4096, 65_536, 1_000_000] {
            let b = best_of_k(&model, k).unwrap();
            assert!(b.numeric > last, "k={k}");
            assert!(b.numeric <= b.upper_bound + 1e-12, "k={k}");
            last = b.numeric;
        }
    }

    #[test]
    fn model_constructors_enforce_their_domain() {
        assert!(CostDistributionModel::new(1.2, 0.1, 16).is_err());
        assert!(CostDistributionModel::new(0.5, 0.0, 16).is_err());
        assert!(CostDistributionModel::new(0.5, 0.1, 0).is_err());
        let fit = CostDistributionModel::from_fit(0.6, 0.01, 400).unwrap();
        assert_abs_diff_eq!(fit.gamma_p, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.sigma, 0.01, epsilon = 1e-15);
    }

    #[test]
    fn gain_is_zero_at_one_shot_and_matches_the_frozen_point() {
        assert_eq!(multishot_gain(0.1926, 256, 1), 0.0);
        let gain = multishot_gain(0.1926, 256, 200);
        assert_abs_diff_eq!(gain, 0.0392, epsilon = 1e-4);
        // Added to the depth-6 tree value this reaches the depth-11
        // single-shot level.
        assert_abs_diff_eq!(0.8499 + gain, 0.889, epsilon = 1e-3);
    }

    #[test]
    fn required_samples_inverts_the_gain_within_one_step() {
        for &delta in &[0.01, 0.0392, 0.08] {
            let rs = required_samples(0.1926, 256, delta, SampleExponent::Derived);
            assert!(!rs.saturated);
            assert!(multishot_gain(0.1926, 256, rs.k) >= delta);
            if rs.k > 1 {
                assert!(multishot_gain(0.1926, 256, rs.k - 1) < delta + 1e-12);
            }
        }
        let frozen = required_samples(0.1926, 256, 0.0392, SampleExponent::Derived);
        assert!((frozen.k as i64 - 200).abs() <= 1, "k = {}", frozen.k);
        assert_eq!(
            required_samples(0.1926, 256, -0.01, SampleExponent::Derived).k,
            1
        );
    }

    #[test]
    fn doubling_n_squares_the_sample_count() {
        let k1 = required_samples(0.19, 300, 0.02, SampleExponent::Derived).k;
        let k2 = required_samples(0.19, 600, 0.02, SampleExponent::Derived).k;
        assert!(k2 <= k1 * k1 && k2 >= (k1 - 1) * (k1 - 1), "{k1} {k2}");
    }

    #[test]
    fn doubled_mode_doubles_the_exponent() {
        let derived = required_samples(0.19, 300, 0.02, SampleExponent::Derived).k;
        let doubled = required_samples(0.19, 300, 0.02, SampleExponent::Doubled).k;
        assert!(doubled <= derived * derived && doubled >= (derived - 1) * (derived - 1));
    }

    #[test]
    fn overflow_saturates_at_the_sentinel() {
        let rs = required_samples(0.1, 10_000, 0.5, SampleExponent::Derived);
        assert!(rs.saturated);
        assert_eq!(rs.k, SAMPLE_SENTINEL);
    }

    #[test]
    fn threshold_frequency_is_a_plain_rate() {
        assert_eq!(threshold_frequency(1, 0.002).unwrap(), 500.0);
        assert_eq!(threshold_frequency(200, 0.05).unwrap(), 4000.0);
        assert!(threshold_frequency(200, 0.05).unwrap() < threshold_frequency(400, 0.05).unwrap());
        assert!(threshold_frequency(200, 0.1).unwrap() < threshold_frequency(200, 0.05).unwrap());
        assert!(threshold_frequency(0, 1.0).is_err());
        assert!(threshold_frequency(1, 0.0).is_err());
    }

    fn profile_with(points: Vec<ProfilePoint>) -> PerformanceProfile {
        PerformanceProfile::new("test".into(), 0, 150, points).unwrap()
    }

    #[test]
    fn single_weak_classical_point_needs_one_sample() {
        let model = CostDistributionModel::new(0.8, 0.19, 100).unwrap();
        let profile = profile_with(vec![ProfilePoint {
            seconds: 0.004,
            cut: 90,
        }]);
        let curve =
            advantage_curve(&[profile], &model, 2, 1e-4, SampleExponent::Derived).unwrap();
        assert_eq!(curve.points.len(), 1);
        let q = &curve.points[0];
        assert!(q.delta < 0.0);
        assert_eq!(q.k, 1);
        assert_abs_diff_eq!(q.nu_hz, 250.0, epsilon = 1e-9);
        assert_eq!(q.region, Region::BetterFaster);
        assert_eq!(curve.argmin_t_seconds, 0.004);
    }

    #[test]
    fn regions_cover_both_axes() {
        let model = CostDistributionModel::new(0.8, 0.19, 100).unwrap();
        let profile = profile_with(vec![
            ProfilePoint {
                seconds: 0.05,
                cut: 90,
            },
            ProfilePoint {
                seconds: 0.10,
                cut: 135,
            },
        ]);
        // 10 ms per shot: one weak point (quantum better, one shot fits in
        // 50 ms) and one strong point (quantum worse, k shots do not fit).
        let curve = advantage_curve(&[profile], &model, 2, 0.01, SampleExponent::Derived).unwrap();
        assert_eq!(curve.points[0].region, Region::BetterFaster);
        assert!(curve.points[1].delta > 0.0);
        assert_eq!(curve.points[1].region, Region::WorseSlower);
    }

    #[test]
    fn invalid_or_empty_profiles_are_refused() {
        let model = CostDistributionModel::new(0.8, 0.19, 100).unwrap();
        assert!(advantage_curve(&[], &model, 1, 1e-4, SampleExponent::Derived).is_err());
        let broken = PerformanceProfile::flagged(
            "x".into(),
            0,
            150,
            vec![],
            vec!["solver exited with status 1".into()],
        );
        assert!(advantage_curve(&[broken], &model, 1, 1e-4, SampleExponent::Derived).is_err());
    }

    #[test]
    fn threshold_rate_eventually_grows_with_n() {
        // Fixed positive deficit, classical time linear in n: the
        // exponential sample count dominates and nu turns increasing. The
        // deficit is small enough that k stays below the sentinel at
        // n = 2^14 (saturation would freeze k and let the linear time win).
        let mut rates = Vec::new();
        for e in 7..=14u32 {
            let n = 1u64 << e;
            let model = CostDistributionModel::new(0.76, 0.19, n).unwrap();
            let m = 3 * n / 2;
            let profile = PerformanceProfile::new(
                format!("n{n}"),
                0,
                m as usize,
                vec![ProfilePoint {
                    seconds: 1e-5 * n as f64,
                    // 49/64 of the edges: quality 0.765625 exactly, so the
                    // deficit is the same at every size.
                    cut: 49 * m / 64,
                }],
            )
            .unwrap();
            let curve =
                advantage_curve(&[profile], &model, 2, 1e-4, SampleExponent::Derived).unwrap();
            rates.push(curve.min_nu_hz);
        }
        for w in rates[4..].windows(2) {
            assert!(w[1] > w[0], "tail not increasing: {rates:?}");
        }
    }
}
