//! Statistical kernels: discrete power-law fitting, degree assortativity,
//! conditional co-occurrence probabilities, G² independence tests,
//! point-biserial correlation and the category prevalence test.
//!
//! Everything here is a pure function; randomized procedures (permutation
//! p-values) take an explicit seed so concurrent runs stay reproducible.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::graph::BipartiteGraph;
use crate::labels::LabelTable;
use crate::pld::PayLevelDomain;
use crate::rank::DomainSet;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("samples are degenerate (fewer than two distinct values)")]
    DegenerateSamples,
    #[error("samples must be positive integers")]
    NonPositiveSample,
    #[error("degenerate degree sequence: zero variance on the {0} side")]
    DegenerateDegrees(&'static str),
    #[error("tracker {0} has no sites")]
    ZeroDegreeTracker(String),
    #[error("contingency table has a zero margin")]
    ZeroMargin,
    #[error("input lengths differ: {0} vs {1}")]
    MismatchedLengths(usize, usize),
    #[error("dichotomous variable has a single group")]
    SingleGroup,
    #[error("continuous variable has zero variance")]
    ZeroVariance,
    #[error("values must be finite")]
    NonFiniteInput,
    #[error("domain set {0:?} is empty")]
    EmptyDomainSet(String),
}

/// Result of a Clauset–Shalizi–Newman style discrete power-law fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Smallest degree from which the power law holds.
    pub x_min: u64,
    /// Estimated exponent (> 1).
    pub alpha: f64,
    /// Kolmogorov–Smirnov distance of the chosen fit.
    pub ks_distance: f64,
    /// Number of samples ≥ x_min.
    pub n_tail: usize,
}

/// Maximum-likelihood variant for the discrete fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerLawMethod {
    /// Continuous MLE with the standard ½-offset shift. Accurate once
    /// x_min is large (the approximation error decays like x_min⁻²).
    #[default]
    HalfOffsetApprox,
    /// Exact discrete (Hurwitz-zeta) MLE; preferable for small x_min and
    /// small tails.
    DiscreteExact,
}

const MIN_POWER_LAW_SAMPLES: usize = 50;

/// Fits a discrete power law with the default ½-offset method.
pub fn fit_power_law(samples: &[u64]) -> Result<PowerLawFit, StatsError> {
    fit_power_law_with(samples, PowerLawMethod::HalfOffsetApprox)
}

/// Fits a discrete power law by scanning every observed value as an x_min
/// candidate, estimating alpha at each by maximum likelihood, and keeping
/// the candidate whose fitted tail CDF is closest (Kolmogorov–Smirnov) to
/// the empirical tail CDF.
pub fn fit_power_law_with(
    samples: &[u64],
    method: PowerLawMethod,
) -> Result<PowerLawFit, StatsError> {
    if samples.len() < MIN_POWER_LAW_SAMPLES {
        return Err(StatsError::TooFewSamples {
            needed: MIN_POWER_LAW_SAMPLES,
            got: samples.len(),
        });
    }
    if samples.iter().any(|&x| x == 0) {
        return Err(StatsError::NonPositiveSample);
    }
    let mut xs: Vec<u64> = samples.to_vec();
    xs.sort_unstable();
    let mut distinct: Vec<u64> = xs.clone();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(StatsError::DegenerateSamples);
    }

    // Suffix sums of ln(x) so each candidate's likelihood is O(1).
    let ln_xs: Vec<f64> = xs.iter().map(|&x| (x as f64).ln()).collect();
    let mut suffix_ln = vec![0.0f64; xs.len() + 1];
    for i in (0..xs.len()).rev() {
        suffix_ln[i] = suffix_ln[i + 1] + ln_xs[i];
    }

    let mut best: Option<PowerLawFit> = None;
    for (d_idx, &v) in distinct.iter().enumerate() {
        // Need at least two distinct tail values, otherwise the MLE
        // degenerates and the KS distance is vacuously zero.
        if distinct.len() - d_idx < 2 {
            break;
        }
        let start = xs.partition_point(|&x| x < v);
        let n_tail = xs.len() - start;
        let mean_ln_tail = suffix_ln[start] / n_tail as f64;

        let alpha = match method {
            PowerLawMethod::HalfOffsetApprox => {
                let denom = suffix_ln[start] - n_tail as f64 * (v as f64 - 0.5).ln();
                1.0 + n_tail as f64 / denom
            }
            PowerLawMethod::DiscreteExact => exact_discrete_alpha(mean_ln_tail, v),
        };
        if !alpha.is_finite() || alpha <= 1.0 {
            continue;
        }

        let ks = ks_distance(&xs, &distinct[d_idx..], start, v, alpha, method);
        let candidate = PowerLawFit {
            x_min: v,
            alpha,
            ks_distance: ks,
            n_tail,
        };
        let better = match &best {
            None => true,
            Some(b) => ks < b.ks_distance,
        };
        if better {
            best = Some(candidate);
        }
    }
    best.ok_or(StatsError::DegenerateSamples)
}

/// KS distance between the empirical tail CDF and the fitted model,
/// evaluated at every distinct observed tail value.
fn ks_distance(
    xs: &[u64],
    tail_distinct: &[u64],
    tail_start: usize,
    x_min: u64,
    alpha: f64,
    method: PowerLawMethod,
) -> f64 {
    let n_tail = (xs.len() - tail_start) as f64;
    let zeta_xmin = match method {
        PowerLawMethod::DiscreteExact => hurwitz_zeta(alpha, x_min as f64),
        PowerLawMethod::HalfOffsetApprox => 0.0,
    };
    let mut worst = 0.0f64;
    for &w in tail_distinct {
        let le = xs.partition_point(|&x| x <= w) - tail_start;
        let emp_cdf = le as f64 / n_tail;
        let fit_cdf = match method {
            PowerLawMethod::HalfOffsetApprox => {
                1.0 - ((w as f64 + 0.5) / (x_min as f64 - 0.5)).powf(-(alpha - 1.0))
            }
            PowerLawMethod::DiscreteExact => {
                1.0 - hurwitz_zeta(alpha, w as f64 + 1.0) / zeta_xmin
            }
        };
        let gap = (emp_cdf - fit_cdf).abs();
        if gap > worst {
            worst = gap;
        }
    }
    worst
}

/// Maximizes the exact discrete log-likelihood
/// −α·mean(ln x) − ln ζ(α, x_min) by golden-section search.
fn exact_discrete_alpha(mean_ln_tail: f64, x_min: u64) -> f64 {
    let q = x_min as f64;
    let nll = |a: f64| a * mean_ln_tail + hurwitz_zeta(a, q).ln();
    let (mut lo, mut hi) = (1.000001f64, 12.0f64);
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - gr * (hi - lo);
    let mut d = lo + gr * (hi - lo);
    let (mut fc, mut fd) = (nll(c), nll(d));
    for _ in 0..100 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = nll(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = nll(d);
        }
    }
    (lo + hi) / 2.0
}

/// Hurwitz zeta ζ(s, q) for s > 1, q ≥ 1, by Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    // Sum directly until the argument is large, then apply the tail
    // expansion with three Bernoulli correction terms.
    let cutoff = 25.0f64.max(q);
    let mut k = q;
    let mut sum = 0.0;
    while k < cutoff {
        sum += k.powf(-s);
        k += 1.0;
    }
    let t = k;
    sum += t.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * t.powf(-s);
    sum += s * t.powf(-s - 1.0) / 12.0;
    sum -= s * (s + 1.0) * (s + 2.0) * t.powf(-s - 3.0) / 720.0;
    sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * t.powf(-s - 5.0) / 30240.0;
    sum
}

/// A correlation estimate with its p-value and sample count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub p_value: f64,
    pub n: usize,
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx.sqrt() * syy.sqrt())
}

/// Degree assortativity of the bipartite graph: the Pearson correlation
/// of (site degree, third-party degree) over all edges, with a two-sided
/// permutation p-value (seeded, `permutations` shuffles).
pub fn assortativity(
    g: &BipartiteGraph,
    permutations: usize,
    seed: u64,
) -> Result<CorrelationResult, StatsError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in 0..g.sites().len() as u32 {
        for &t in g.third_parties_of(s) {
            xs.push(g.left_degree(s) as f64);
            ys.push(g.right_degree(t) as f64);
        }
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFewSamples {
            needed: 2,
            got: xs.len(),
        });
    }
    let var = |vals: &[f64]| {
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
    };
    if var(&xs) == 0.0 {
        return Err(StatsError::DegenerateDegrees("site"));
    }
    if var(&ys) == 0.0 {
        return Err(StatsError::DegenerateDegrees("third-party"));
    }
    let r = pearson(&xs, &ys);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = ys.clone();
    let mut at_least_as_extreme = 0usize;
    for _ in 0..permutations {
        shuffled.shuffle(&mut rng);
        if pearson(&xs, &shuffled).abs() >= r.abs() {
            at_least_as_extreme += 1;
        }
    }
    let p_value = (1 + at_least_as_extreme) as f64 / (permutations + 1) as f64;
    Ok(CorrelationResult {
        r,
        p_value,
        n: xs.len(),
    })
}

/// Conditional probability matrix: entry (i, j) is P(tᵢ | tⱼ), the
/// fraction of the sites embedding tⱼ that also embed tᵢ. Diagonal is 1.
pub fn cond_prob_matrix(
    g: &BipartiteGraph,
    trackers: &[PayLevelDomain],
) -> Result<Vec<Vec<f64>>, StatsError> {
    let mut site_sets: Vec<&[u32]> = Vec::with_capacity(trackers.len());
    for pld in trackers {
        let t = g
            .third_party_index(pld)
            .ok_or_else(|| StatsError::ZeroDegreeTracker(pld.to_string()))?;
        let sites = g.sites_of(t);
        if sites.is_empty() {
            return Err(StatsError::ZeroDegreeTracker(pld.to_string()));
        }
        site_sets.push(sites);
    }
    let mut matrix = vec![vec![0.0; trackers.len()]; trackers.len()];
    for i in 0..trackers.len() {
        for j in 0..trackers.len() {
            if i == j {
                matrix[i][j] = 1.0;
            } else {
                let both = sorted_intersection_count(site_sets[i], site_sets[j]);
                matrix[i][j] = both as f64 / site_sets[j].len() as f64;
            }
        }
    }
    Ok(matrix)
}

fn sorted_intersection_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Observed counts of a 2×2 contingency table, rows × columns
/// [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable2x2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl ContingencyTable2x2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        ContingencyTable2x2 { a, b, c, d }
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }
}

/// Log-likelihood ratio test of independence: G² = 2 Σ O ln(O/E) with E
/// from the margins, p-value from χ² with one degree of freedom.
pub fn g2_test(t: &ContingencyTable2x2) -> Result<(f64, f64), StatsError> {
    let (a, b, c, d) = (t.a as f64, t.b as f64, t.c as f64, t.d as f64);
    let n = a + b + c + d;
    let (r1, r2, c1, c2) = (a + b, c + d, a + c, b + d);
    if r1 == 0.0 || r2 == 0.0 || c1 == 0.0 || c2 == 0.0 {
        return Err(StatsError::ZeroMargin);
    }
    let mut g2 = 0.0;
    for (obs, row, col) in [(a, r1, c1), (b, r1, c2), (c, r2, c1), (d, r2, c2)] {
        if obs > 0.0 {
            g2 += obs * (obs * n / (row * col)).ln();
        }
    }
    let g2 = (2.0 * g2).max(0.0);
    let chi = ChiSquared::new(1.0).expect("df 1");
    let p = (1.0 - chi.cdf(g2)).clamp(0.0, 1.0);
    Ok((g2, p))
}

/// Point-biserial correlation between a 0/1 variable and a continuous
/// one: r = (M₁ − M₀)/sₙ · √(n₁n₀/n²) with the population standard
/// deviation, p-value from Student's t with n − 2 degrees of freedom.
pub fn point_biserial(
    dichotomous: &[u8],
    continuous: &[f64],
) -> Result<CorrelationResult, StatsError> {
    if dichotomous.len() != continuous.len() {
        return Err(StatsError::MismatchedLengths(
            dichotomous.len(),
            continuous.len(),
        ));
    }
    let n = dichotomous.len();
    if n < 3 {
        return Err(StatsError::TooFewSamples { needed: 3, got: n });
    }
    if continuous.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFiniteInput);
    }
    let n1 = dichotomous.iter().filter(|&&v| v != 0).count();
    let n0 = n - n1;
    if n1 == 0 || n0 == 0 {
        return Err(StatsError::SingleGroup);
    }
    let mean = continuous.iter().sum::<f64>() / n as f64;
    let var = continuous.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    if var <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let m1 = continuous
        .iter()
        .zip(dichotomous)
        .filter(|(_, &d)| d != 0)
        .map(|(v, _)| v)
        .sum::<f64>()
        / n1 as f64;
    let m0 = continuous
        .iter()
        .zip(dichotomous)
        .filter(|(_, &d)| d == 0)
        .map(|(v, _)| v)
        .sum::<f64>()
        / n0 as f64;
    let r = (m1 - m0) / var.sqrt() * ((n1 as f64 * n0 as f64) / (n as f64 * n as f64)).sqrt();

    let df = (n - 2) as f64;
    let p = if (1.0 - r * r) <= f64::EPSILON {
        0.0
    } else {
        let t = r * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("valid df");
        (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
    };
    Ok(CorrelationResult { r, p_value: p, n })
}

/// Which side of a prevalence comparison the tracker leans to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrevalenceDirection {
    MoreOnCritical,
    MoreOnNoncritical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceResult {
    pub direction: PrevalenceDirection,
    pub statistic: f64,
    pub p_value: f64,
    /// Rows: has/lacks tracker; columns: critical/noncritical.
    pub table: ContingencyTable2x2,
    pub critical_rate: f64,
    pub noncritical_rate: f64,
}

impl PrevalenceResult {
    pub fn stars(&self) -> &'static str {
        significance_stars(self.p_value)
    }
}

pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Tests whether a tracker (single PLD or a company's PLD union) deviates
/// from a random distribution across the critical and noncritical site
/// sets, via [`g2_test`] on the 2×2 presence table.
pub fn prevalence_test(
    tracker_sites: &[u32],
    critical: &DomainSet,
    noncritical: &DomainSet,
) -> Result<PrevalenceResult, StatsError> {
    if critical.is_empty() {
        return Err(StatsError::EmptyDomainSet(critical.label().to_string()));
    }
    if noncritical.is_empty() {
        return Err(StatsError::EmptyDomainSet(noncritical.label().to_string()));
    }
    let crit_with = sorted_intersection_count(tracker_sites, critical.site_indices()) as u64;
    let noncrit_with = sorted_intersection_count(tracker_sites, noncritical.site_indices()) as u64;
    let table = ContingencyTable2x2::new(
        crit_with,
        noncrit_with,
        critical.len() as u64 - crit_with,
        noncritical.len() as u64 - noncrit_with,
    );
    let (statistic, p_value) = g2_test(&table)?;
    let critical_rate = crit_with as f64 / critical.len() as f64;
    let noncritical_rate = noncrit_with as f64 / noncritical.len() as f64;
    let direction = if critical_rate > noncritical_rate {
        PrevalenceDirection::MoreOnCritical
    } else {
        PrevalenceDirection::MoreOnNoncritical
    };
    Ok(PrevalenceResult {
        direction,
        statistic,
        p_value,
        table,
        critical_rate,
        noncritical_rate,
    })
}

/// Convenience: the sorted site indices a company's PLDs cover in `g`.
pub fn company_site_union(g: &BipartiteGraph, labels: &LabelTable, company: &str) -> Vec<u32> {
    let mut union: Vec<u32> = Vec::new();
    for pld in labels.plds_of_company(company) {
        if let Some(t) = g.third_party_index(pld) {
            union.extend_from_slice(g.sites_of(t));
        }
    }
    union.sort_unstable();
    union.dedup();
    union
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::EmbeddingEdge;

    fn pld(s: &str) -> PayLevelDomain {
        PayLevelDomain::from_resolved(s)
    }

    fn graph(edges: &[(&str, &str)]) -> BipartiteGraph {
        let edges: Vec<EmbeddingEdge> = edges
            .iter()
            .map(|&(s, t)| EmbeddingEdge {
                site: pld(s),
                third_party: pld(t),
                page_count: 1,
            })
            .collect();
        BipartiteGraph::build(&edges).unwrap()
    }

    #[test]
    fn g2_exact_independence_is_zero() {
        let (g2, p) = g2_test(&ContingencyTable2x2::new(10, 10, 10, 10)).unwrap();
        assert_eq!(g2, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g2_diagonal_table_matches_closed_form() {
        let (g2, _) = g2_test(&ContingencyTable2x2::new(10, 0, 0, 10)).unwrap();
        assert!((g2 - 40.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn g2_zero_margin_errors() {
        assert!(matches!(
            g2_test(&ContingencyTable2x2::new(0, 0, 5, 5)),
            Err(StatsError::ZeroMargin)
        ));
        assert!(matches!(
            g2_test(&ContingencyTable2x2::new(0, 0, 0, 0)),
            Err(StatsError::ZeroMargin)
        ));
    }

    #[test]
    fn g2_invariant_under_transpose_and_swaps() {
        let t = ContingencyTable2x2::new(12, 5, 7, 20);
        let (g, _) = g2_test(&t).unwrap();
        let transposed = ContingencyTable2x2::new(t.a, t.c, t.b, t.d);
        let rows_swapped = ContingencyTable2x2::new(t.c, t.d, t.a, t.b);
        let cols_swapped = ContingencyTable2x2::new(t.b, t.a, t.d, t.c);
        for other in [transposed, rows_swapped, cols_swapped] {
            let (g_other, _) = g2_test(&other).unwrap();
            assert!((g - g_other).abs() < 1e-12);
        }
    }

    #[test]
    fn hurwitz_zeta_matches_reference_values() {
        // Riemann zeta special cases: ζ(2, 1) = π²/6, ζ(4, 1) = π⁴/90.
        let pi = std::f64::consts::PI;
        assert!((hurwitz_zeta(2.0, 1.0) - pi * pi / 6.0).abs() < 1e-10);
        assert!((hurwitz_zeta(4.0, 1.0) - pi.powi(4) / 90.0).abs() < 1e-10);
        // ζ(2, 5) = π²/6 − 1 − 1/4 − 1/9 − 1/16.
        let expected = pi * pi / 6.0 - 1.0 - 0.25 - 1.0 / 9.0 - 1.0 / 16.0;
        assert!((hurwitz_zeta(2.0, 5.0) - expected).abs() < 1e-10);
    }

    #[test]
    fn power_law_rejects_degenerate_inputs() {
        assert!(matches!(
            fit_power_law(&[7; 100]),
            Err(StatsError::DegenerateSamples)
        ));
        assert!(matches!(
            fit_power_law(&[1, 2, 3]),
            Err(StatsError::TooFewSamples { .. })
        ));
        assert!(matches!(
            fit_power_law(&vec![0; 100]),
            Err(StatsError::NonPositiveSample)
        ));
    }

    #[test]
    fn assortativity_constant_degrees_error() {
        // K_{2,3}: every site has degree 3, every third-party degree 2.
        let g = graph(&[
            ("a.com", "t1.net"),
            ("a.com", "t2.net"),
            ("a.com", "t3.net"),
            ("b.com", "t1.net"),
            ("b.com", "t2.net"),
            ("b.com", "t3.net"),
        ]);
        assert!(matches!(
            assortativity(&g, 100, 7),
            Err(StatsError::DegenerateDegrees(_))
        ));
    }

    #[test]
    fn assortativity_detects_dissortative_fixture() {
        // One hub tracker picked up by low-degree sites; a clique of
        // higher-degree sites shares the niche trackers.
        let g = graph(&[
            ("s1.com", "hub.net"),
            ("s2.com", "hub.net"),
            ("s3.com", "hub.net"),
            ("s4.com", "hub.net"),
            ("s5.com", "niche1.org"),
            ("s5.com", "niche2.org"),
            ("s6.com", "niche1.org"),
            ("s6.com", "niche2.org"),
        ]);
        let got = assortativity(&g, 1000, 42).unwrap();
        assert!(got.r < 0.0, "expected dissortative, got {}", got.r);
        assert_eq!(got.n, 8);
        // Deterministic for a fixed seed.
        let again = assortativity(&g, 1000, 42).unwrap();
        assert_eq!(got, again);
    }

    #[test]
    fn cond_prob_diagonal_and_superset() {
        let g = graph(&[
            ("a.com", "t1.net"),
            ("b.com", "t1.net"),
            ("c.com", "t1.net"),
            ("a.com", "t2.net"),
            ("b.com", "t2.net"),
        ]);
        let m = cond_prob_matrix(&g, &[pld("t1.net"), pld("t2.net")]).unwrap();
        assert_eq!(m[0][0], 1.0);
        assert_eq!(m[1][1], 1.0);
        // t1 is on every site embedding t2.
        assert_eq!(m[0][1], 1.0);
        assert!((m[1][0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cond_prob_unknown_tracker_is_named() {
        let g = graph(&[("a.com", "t1.net")]);
        let err = cond_prob_matrix(&g, &[pld("ghost.io")]).unwrap_err();
        match err {
            StatsError::ZeroDegreeTracker(name) => assert_eq!(name, "ghost.io"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn point_biserial_perfect_separation() {
        let dich = [0u8, 0, 1, 1];
        let cont = [0.0, 0.0, 1.0, 1.0];
        let got = point_biserial(&dich, &cont).unwrap();
        assert!((got.r - 1.0).abs() < 1e-12);
        assert_eq!(got.p_value, 0.0);
    }

    #[test]
    fn point_biserial_error_paths() {
        assert!(matches!(
            point_biserial(&[0, 0, 0], &[1.0, 2.0, 3.0]),
            Err(StatsError::SingleGroup)
        ));
        assert!(matches!(
            point_biserial(&[0, 1, 0], &[2.0, 2.0, 2.0]),
            Err(StatsError::ZeroVariance)
        ));
        assert!(matches!(
            point_biserial(&[0, 1], &[1.0, 2.0]),
            Err(StatsError::TooFewSamples { .. })
        ));
        assert!(matches!(
            point_biserial(&[0, 1, 1], &[1.0, 2.0]),
            Err(StatsError::MismatchedLengths(3, 2))
        ));
    }

    #[test]
    fn prevalence_identical_rates_is_insignificant() {
        let critical = DomainSet::from_site_indices("crit", (0..10).collect());
        let noncritical = DomainSet::from_site_indices("noncrit", (10..20).collect());
        // Tracker on half of each set.
        let tracker_sites: Vec<u32> = (0..5).chain(10..15).collect();
        let got = prevalence_test(&tracker_sites, &critical, &noncritical).unwrap();
        assert!(got.p_value > 0.9);
        assert_eq!(got.statistic, 0.0);
    }
}
