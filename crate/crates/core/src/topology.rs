//! Network statistics for validation and threshold selection: degree
//! distributions and CCDFs, discrete power-law tail fits, average nearest
//! neighbor degree, local clustering, and Kullback-Leibler divergence
//! between degree distributions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::net::SimpleGraph;

/// When an empirical PMF has support where the reference has none, reference
/// probabilities are floored at this value and the result is flagged.
pub const KL_FLOOR: f64 = 1e-12;

/// Empirical degree distribution summary.
#[derive(Debug, Clone)]
pub struct DegreeStats {
    /// Exact empirical probability mass per degree.
    pub pmf: BTreeMap<usize, f64>,
    /// `P(k' > k)` at every observed degree, non-increasing.
    pub ccdf: Vec<(usize, f64)>,
    pub mean_degree: f64,
}

/// Exact empirical PMF/CCDF over a degree multiset.
pub fn degree_stats(degrees: &[usize]) -> Result<DegreeStats> {
    if degrees.is_empty() {
        return Err(Error::validation("degree statistics of an empty network".into()));
    }
    let n = degrees.len() as f64;
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in degrees {
        *counts.entry(k).or_insert(0) += 1;
    }
    let pmf: BTreeMap<usize, f64> = counts.iter().map(|(&k, &c)| (k, c as f64 / n)).collect();
    let mut ccdf = Vec::with_capacity(pmf.len());
    let mut above = 1.0;
    for (&k, &p) in &pmf {
        above -= p;
        ccdf.push((k, above.max(0.0)));
    }
    let mean_degree = degrees.iter().sum::<usize>() as f64 / n;
    Ok(DegreeStats { pmf, ccdf, mean_degree })
}

/// Degree PMF restricted to positive degrees and renormalized; the form used
/// when comparing against production-network degree distributions, which are
/// reported over connected firms.
pub fn degree_pmf_positive(degrees: &[usize]) -> Result<BTreeMap<usize, f64>> {
    let positive: Vec<usize> = degrees.iter().copied().filter(|&k| k > 0).collect();
    if positive.is_empty() {
        return Err(Error::validation("no nodes with positive degree".into()));
    }
    Ok(degree_stats(&positive)?.pmf)
}

/// Discrete power-law tail fit.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub stderr: f64,
    pub kmin: usize,
    pub n_tail: usize,
}

/// Maximum-likelihood exponent for `p(k) ~ k^-alpha` over `k >= kmin`,
/// using the continuous-approximation discrete estimator
/// `alpha = 1 + n / sum ln(k_i / (kmin - 1/2))` with
/// `stderr = (alpha - 1) / sqrt(n)`.
pub fn powerlaw_tail_fit(degrees: &[usize], kmin: usize) -> Result<PowerLawFit> {
    if kmin < 1 {
        return Err(Error::validation("kmin must be at least 1".into()));
    }
    let tail: Vec<usize> = degrees.iter().copied().filter(|&k| k >= kmin).collect();
    if tail.len() < 10 {
        return Err(Error::Undefined(format!(
            "power-law fit needs at least 10 observations >= kmin={kmin}, got {}",
            tail.len()
        )));
    }
    if tail.iter().all(|&k| k == kmin) {
        return Err(Error::Undefined(
            "power-law fit degenerate: no variation above kmin".into(),
        ));
    }
    let shift = kmin as f64 - 0.5;
    let log_sum: f64 = tail.iter().map(|&k| (k as f64 / shift).ln()).sum();
    if log_sum <= 0.0 {
        return Err(Error::Undefined("power-law fit degenerate: zero log-sum".into()));
    }
    let n = tail.len() as f64;
    let alpha = 1.0 + n / log_sum;
    Ok(PowerLawFit {
        alpha,
        stderr: (alpha - 1.0) / n.sqrt(),
        kmin,
        n_tail: tail.len(),
    })
}

/// Average nearest-neighbor degree as a function of degree:
/// `k_nn(k)` = mean over nodes of degree `k` of their neighbors' mean degree.
/// Degree-zero nodes are excluded.
pub fn knn_curve(g: &SimpleGraph) -> Result<BTreeMap<usize, f64>> {
    if g.edge_count() == 0 {
        return Err(Error::validation("knn curve needs at least one edge".into()));
    }
    let deg = g.degrees();
    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for i in 0..g.node_count() {
        let k = deg[i];
        if k == 0 {
            continue;
        }
        let avg_nb = g.neighbors(i).iter().map(|&j| deg[j as usize] as f64).sum::<f64>() / k as f64;
        let e = sums.entry(k).or_insert((0.0, 0));
        e.0 += avg_nb;
        e.1 += 1;
    }
    Ok(sums.into_iter().map(|(k, (s, c))| (k, s / c as f64)).collect())
}

/// Mean nearest-neighbor degree over all nodes with `k >= 1`.
pub fn mean_knn(g: &SimpleGraph) -> Option<f64> {
    let deg = g.degrees();
    let mut sum = 0.0;
    let mut cnt = 0usize;
    for i in 0..g.node_count() {
        if deg[i] == 0 {
            continue;
        }
        sum += g.neighbors(i).iter().map(|&j| deg[j as usize] as f64).sum::<f64>() / deg[i] as f64;
        cnt += 1;
    }
    (cnt > 0).then(|| sum / cnt as f64)
}

/// Triangles through each node, via sorted-adjacency lookups.
fn triangle_counts(g: &SimpleGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut t = vec![0usize; n];
    for i in 0..n {
        let nb = g.neighbors(i);
        for (xi, &u) in nb.iter().enumerate() {
            for &v in &nb[xi + 1..] {
                if g.has_edge(u, v) {
                    t[i] += 1;
                }
            }
        }
    }
    t
}

/// Local clustering `c_i = 2 t_i / (k_i (k_i - 1))` averaged per degree, plus
/// the overall mean. Nodes with `k < 2` have undefined clustering and are
/// excluded from both.
pub fn clustering_curve(g: &SimpleGraph) -> (BTreeMap<usize, f64>, f64) {
    let deg = g.degrees();
    let tri = triangle_counts(g);
    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    let mut total = 0.0;
    let mut eligible = 0usize;
    for i in 0..g.node_count() {
        let k = deg[i];
        if k < 2 {
            continue;
        }
        let c = 2.0 * tri[i] as f64 / (k as f64 * (k as f64 - 1.0));
        let e = sums.entry(k).or_insert((0.0, 0));
        e.0 += c;
        e.1 += 1;
        total += c;
        eligible += 1;
    }
    let overall = if eligible > 0 { total / eligible as f64 } else { 0.0 };
    (
        sums.into_iter().map(|(k, (s, c))| (k, s / c as f64)).collect(),
        overall,
    )
}

/// KL divergence outcome; `floored` marks that the reference PMF was zero
/// somewhere on the empirical support and the floor kicked in.
#[derive(Debug, Clone, Copy)]
pub struct KlDivergence {
    pub value: f64,
    pub floored: bool,
}

fn check_normalized(pmf: &BTreeMap<usize, f64>, name: &str) -> Result<()> {
    let sum: f64 = pmf.values().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!("{name} PMF not normalized (sum {sum})")));
    }
    if pmf.values().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::validation(format!("{name} PMF has invalid entries")));
    }
    Ok(())
}

/// `KL(P || Q) = sum_k P(k) ln(P(k)/Q(k))` over the support of `P`, with
/// `Q` floored at [`KL_FLOOR`]. Natural logarithm.
pub fn kl_divergence(p: &BTreeMap<usize, f64>, q: &BTreeMap<usize, f64>) -> Result<KlDivergence> {
    check_normalized(p, "P")?;
    check_normalized(q, "Q")?;
    let mut value = 0.0;
    let mut floored = false;
    for (k, &pk) in p {
        if pk <= 0.0 {
            continue;
        }
        let qk = q.get(k).copied().unwrap_or(0.0);
        let q_eff = if qk < KL_FLOOR {
            floored = true;
            KL_FLOOR
        } else {
            qk
        };
        value += pk * (pk / q_eff).ln();
    }
    Ok(KlDivergence { value, floored })
}

/// One row of the network-characteristics summary: mean degree, mean local
/// clustering, the link probability of a random graph with the same density,
/// and mean nearest-neighbor degree.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NetworkSummary {
    pub name: String,
    pub mean_degree: f64,
    pub mean_clustering: f64,
    pub random_p: f64,
    pub mean_knn: f64,
}

pub fn summary_row(name: impl Into<String>, g: &SimpleGraph) -> NetworkSummary {
    let n = g.node_count() as f64;
    let e = g.edge_count() as f64;
    let (_, mean_clustering) = clustering_curve(g);
    NetworkSummary {
        name: name.into(),
        mean_degree: if n > 0.0 { 2.0 * e / n } else { 0.0 },
        mean_clustering,
        random_p: if n > 1.0 { 2.0 * e / (n * (n - 1.0)) } else { 0.0 },
        mean_knn: mean_knn(g).unwrap_or(0.0),
    }
}
