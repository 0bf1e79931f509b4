//! Economic Systemic Risk Index (ESRI) engine.
//!
//! For every firm the engine answers: if this firm stops operating, which
//! fraction of the economy's size-weighted production is impeded once the
//! shock has cascaded through the supply network?
//!
//! The cascade runs two independent fixed-point iterations from the shock
//! vector `psi`: a downstream channel where customers lose inputs, weighted
//! by a generalized Leontief production function (essential input types bind
//! via a `min`, non-essential types enter linearly), and an upstream channel
//! where suppliers lose demand proportionally to the share of their output
//! sold to each customer. Supply losses are discounted by the dynamic
//! intraindustry market share `sigma`, which lets intact same-sector
//! capacity absorb part of a failed supplier's deliveries and rises toward 1
//! as the sector empties out. The final production level of a firm is the
//! minimum of its two channel levels.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::{self, Parallelism};
use crate::net::{Regime, SupplyNetwork};
use crate::stats;

/// Cascade iteration controls.
#[derive(Debug, Clone, Copy)]
pub struct CascadeParams {
    /// Convergence threshold on the largest one-step drop of any production
    /// level.
    pub epsilon: f64,
    /// Hard iteration cap; exceeding it is a reported non-convergence.
    pub max_iter: u32,
}

impl Default for CascadeParams {
    fn default() -> Self {
        CascadeParams {
            epsilon: 1e-2,
            max_iter: 1000,
        }
    }
}

impl CascadeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::validation(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::validation("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Optional per-(firm sector, input sector) essentiality overrides. Without
/// an override, all input types of a Leontief firm are essential and all
/// input types of a linear firm are non-essential.
#[derive(Debug, Clone, Default)]
pub struct EssentialityOverrides {
    map: BTreeMap<(String, String), bool>,
}

impl EssentialityOverrides {
    pub fn set(&mut self, firm_sector: impl Into<String>, input_sector: impl Into<String>, essential: bool) {
        self.map.insert((firm_sector.into(), input_sector.into()), essential);
    }

    fn lookup(&self, firm_sector: &str, input_sector: &str) -> Option<bool> {
        self.map
            .get(&(firm_sector.to_string(), input_sector.to_string()))
            .copied()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Per-firm production-function parameters derived from the supply network.
#[derive(Debug, Clone)]
pub struct ProductionSpec {
    /// Input sector indices entering production in a Leontief (binding) way.
    pub essential_inputs: Vec<Vec<u16>>,
    /// Input sector indices entering production linearly.
    pub non_essential_inputs: Vec<Vec<u16>>,
    /// Share of the firm's output value spent on each input type
    /// (`alpha_ik`); zero for firms without output.
    pub alpha_ik: Vec<Vec<(u16, f64)>>,
    /// Overall input share `alpha_i`; zero for firms without output.
    pub alpha: Vec<f64>,
    /// Attainable production level on essential inputs alone (`beta_i`).
    pub beta: Vec<f64>,
}

/// Derives essential/non-essential input sets and the production-function
/// parameters for every firm. Input types with positive inflow are split by
/// the firm's regime, with optional per-sector-pair overrides.
pub fn derive_production_spec(
    net: &SupplyNetwork,
    overrides: &EssentialityOverrides,
) -> ProductionSpec {
    let n = net.node_count();
    let mut essential_inputs = Vec::with_capacity(n);
    let mut non_essential_inputs = Vec::with_capacity(n);
    let mut alpha_ik = Vec::with_capacity(n);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);

    for i in 0..n {
        let mut inflow_by_type: BTreeMap<u16, f64> = BTreeMap::new();
        for &(j, w) in net.in_arcs(i) {
            if w > 0.0 {
                *inflow_by_type.entry(net.sector_index_of(j as usize)).or_insert(0.0) += w;
            }
        }
        let total_in: f64 = inflow_by_type.values().sum();
        let s_out = net.out_strength(i);
        let firm_sector = net.sector_code(net.sector_index_of(i)).to_string();

        let mut es = Vec::new();
        let mut ne = Vec::new();
        let mut shares = Vec::with_capacity(inflow_by_type.len());
        let mut es_in = 0.0;
        for (&k, &inflow) in &inflow_by_type {
            let default_essential = net.regime(i) == Regime::Leontief;
            let essential = overrides
                .lookup(&firm_sector, net.sector_code(k))
                .unwrap_or(default_essential);
            if essential {
                es.push(k);
                es_in += inflow;
            } else {
                ne.push(k);
            }
            shares.push((k, if s_out > 0.0 { inflow / s_out } else { 0.0 }));
        }
        let es_share = if total_in > 0.0 { es_in / total_in } else { 1.0 };

        essential_inputs.push(es);
        non_essential_inputs.push(ne);
        alpha_ik.push(shares);
        alpha.push(if s_out > 0.0 { total_in / s_out } else { 0.0 });
        beta.push(s_out * es_share);
    }

    ProductionSpec {
        essential_inputs,
        non_essential_inputs,
        alpha_ik,
        alpha,
        beta,
    }
}

/// One supplying arc as seen from the buyer, with both downstream impact
/// weights: `lambda_d1` normalizes by the buyer's inflow of the supplier's
/// type, `lambda_d2` by the buyer's total inflow.
#[derive(Debug, Clone, Copy)]
pub struct DownstreamEntry {
    pub supplier: u32,
    pub sector: u16,
    pub lambda_d1: f64,
    pub lambda_d2: f64,
    pub essential: bool,
}

/// Sparse downstream and upstream impact matrices plus initial out-strengths.
#[derive(Debug, Clone)]
pub struct ImpactMatrices {
    /// Per buyer: entries for every positive-weight supplying arc, essential
    /// entries first and grouped by supplier sector.
    pub downstream: Vec<Vec<DownstreamEntry>>,
    /// Per supplier: `(customer, share of the supplier's output)`; shares sum
    /// to one for firms with positive out-strength.
    pub upstream: Vec<Vec<(u32, f64)>>,
    pub s_out: Vec<f64>,
}

/// Assembles the impact matrices from raw arc weights and the production
/// spec. Zero denominators cannot occur for existing entries: an arc with
/// positive weight always contributes to its own normalization sum.
pub fn build_impact_matrices(net: &SupplyNetwork, spec: &ProductionSpec) -> ImpactMatrices {
    let n = net.node_count();
    let s_out: Vec<f64> = (0..n).map(|i| net.out_strength(i)).collect();

    let mut downstream = Vec::with_capacity(n);
    for i in 0..n {
        let mut inflow_by_type: BTreeMap<u16, f64> = BTreeMap::new();
        let mut total_in = 0.0;
        for &(j, w) in net.in_arcs(i) {
            if w > 0.0 {
                *inflow_by_type.entry(net.sector_index_of(j as usize)).or_insert(0.0) += w;
                total_in += w;
            }
        }
        let mut entries: Vec<DownstreamEntry> = net
            .in_arcs(i)
            .iter()
            .filter(|&&(_, w)| w > 0.0)
            .map(|&(j, w)| {
                let sector = net.sector_index_of(j as usize);
                DownstreamEntry {
                    supplier: j,
                    sector,
                    lambda_d1: w / inflow_by_type[&sector],
                    lambda_d2: w / total_in,
                    essential: spec.essential_inputs[i].contains(&sector),
                }
            })
            .collect();
        entries.sort_by_key(|e| (!e.essential, e.sector, e.supplier));
        downstream.push(entries);
    }

    let mut upstream = Vec::with_capacity(n);
    for i in 0..n {
        let entries: Vec<(u32, f64)> = if s_out[i] > 0.0 {
            net.out_arcs(i)
                .iter()
                .filter(|&&(_, w)| w > 0.0)
                .map(|&(j, w)| (j, w / s_out[i]))
                .collect()
        } else {
            Vec::new()
        };
        upstream.push(entries);
    }

    ImpactMatrices {
        downstream,
        upstream,
        s_out,
    }
}

/// Snapshot of a cascade iteration, carried by non-convergence errors.
#[derive(Debug, Clone)]
pub struct CascadeState {
    pub h_down: Vec<f64>,
    pub h_up: Vec<f64>,
    pub psi: Vec<f64>,
    pub sigma: Vec<f64>,
    pub t: u32,
}

/// Converged cascade result.
#[derive(Debug, Clone)]
pub struct CascadeOutcome {
    /// `h_j(T) = min(h^d_j(T), h^u_j(T))`, the final relative output levels.
    pub h: Vec<f64>,
    pub h_down: Vec<f64>,
    pub h_up: Vec<f64>,
    /// Convergence time `T`: first step after which the largest one-step
    /// drop is within epsilon, plus one.
    pub iterations: u32,
    /// Both channels decreased monotonically over all iterations.
    pub monotone: bool,
}

/// Runs the shock cascade from an exogenous shock vector `psi` (componentwise
/// in `[0, 1]`; a firm's level never exceeds its own `psi`).
///
/// Firms without customers inside the network carry no upstream constraint:
/// the demand-loss sum is empty, so their upstream level stays at `psi`.
pub fn run_cascade(
    net: &SupplyNetwork,
    mats: &ImpactMatrices,
    psi: &[f64],
    params: &CascadeParams,
) -> Result<CascadeOutcome> {
    params.validate()?;
    let n = net.node_count();
    if psi.len() != n {
        return Err(Error::validation(format!(
            "psi has length {} but the network has {n} nodes",
            psi.len()
        )));
    }
    if psi.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::validation("psi components must lie in [0, 1]".into()));
    }

    let n_sectors = net.sectors().len();
    let mut h_d = psi.to_vec();
    let mut h_u = psi.to_vec();
    let mut next_d = vec![0.0; n];
    let mut next_u = vec![0.0; n];
    let mut sigma = vec![0.0; n];
    let mut capacity = vec![0.0; n_sectors];
    let mut monotone = true;
    let mut residual = f64::INFINITY;

    for t in 0..params.max_iter {
        // Dynamic intraindustry market share against currently available
        // sector capacity; an empty sector saturates sigma at 1.
        capacity.fill(0.0);
        for j in 0..n {
            capacity[net.sector_index_of(j) as usize] += mats.s_out[j] * h_d[j];
        }
        for j in 0..n {
            let cap = capacity[net.sector_index_of(j) as usize];
            sigma[j] = if cap > 0.0 { (mats.s_out[j] / cap).min(1.0) } else { 1.0 };
        }

        // Downstream: essential input types bind via the worst per-type
        // loss, non-essential types aggregate linearly.
        for i in 0..n {
            let mut worst_es = 0.0f64;
            let mut run_loss = 0.0f64;
            let mut run_sector = u16::MAX;
            let mut ne_loss = 0.0f64;
            for e in &mats.downstream[i] {
                let l = sigma[e.supplier as usize] * (1.0 - h_d[e.supplier as usize]);
                if e.essential {
                    if e.sector != run_sector {
                        worst_es = worst_es.max(run_loss);
                        run_loss = 0.0;
                        run_sector = e.sector;
                    }
                    run_loss += e.lambda_d1 * l;
                } else {
                    ne_loss += e.lambda_d2 * l;
                }
            }
            worst_es = worst_es.max(run_loss);
            next_d[i] = (1.0 - worst_es).min(1.0 - ne_loss).min(psi[i]).clamp(0.0, 1.0);
        }

        // Upstream: demand losses flow from customers to suppliers.
        for i in 0..n {
            let loss: f64 = mats.upstream[i]
                .iter()
                .map(|&(j, share)| share * (1.0 - h_u[j as usize]))
                .sum();
            next_u[i] = (1.0 - loss).min(psi[i]).clamp(0.0, 1.0);
        }

        let mut diff = 0.0f64;
        for i in 0..n {
            let dd = h_d[i] - next_d[i];
            let du = h_u[i] - next_u[i];
            if dd < -1e-12 || du < -1e-12 {
                monotone = false;
            }
            diff = diff.max(dd).max(du);
        }
        std::mem::swap(&mut h_d, &mut next_d);
        std::mem::swap(&mut h_u, &mut next_u);
        residual = diff;

        if diff <= params.epsilon {
            let h = h_d.iter().zip(&h_u).map(|(&d, &u)| d.min(u)).collect();
            return Ok(CascadeOutcome {
                h,
                h_down: h_d,
                h_up: h_u,
                iterations: t + 1,
                monotone,
            });
        }
    }

    Err(Error::NonConvergence {
        iterations: params.max_iter,
        residual,
        state: Box::new(CascadeState {
            h_down: h_d,
            h_up: h_u,
            psi: psi.to_vec(),
            sigma,
            t: params.max_iter,
        }),
    })
}

/// ESRI of one firm: size-weighted production loss after its default.
/// A single end division keeps exact cases exact.
pub fn esri_of(
    net: &SupplyNetwork,
    mats: &ImpactMatrices,
    firm: usize,
    params: &CascadeParams,
) -> Result<(f64, u32)> {
    let n = net.node_count();
    let mut psi = vec![1.0; n];
    psi[firm] = 0.0;
    let out = run_cascade(net, mats, &psi, params)?;
    let lost: f64 = (0..n).map(|j| net.size(j) * (1.0 - out.h[j])).sum();
    Ok((lost / net.total_size(), out.iterations))
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EsriEntry {
    pub id: String,
    pub esri: f64,
    pub iterations: u32,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CascadeFailure {
    pub id: String,
    pub iterations: u32,
    pub residual: f64,
}

/// Per-firm systemic risk profile of one network.
#[derive(Debug, Clone)]
pub struct EsriProfile {
    /// Converged firms in node order.
    pub entries: Vec<EsriEntry>,
    /// Firms whose cascade hit the iteration cap.
    pub failures: Vec<CascadeFailure>,
}

impl EsriProfile {
    /// Entries sorted by descending ESRI; ties broken by id.
    pub fn sorted_desc(&self) -> Vec<&EsriEntry> {
        let mut v: Vec<&EsriEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| {
            b.esri
                .partial_cmp(&a.esri)
                .unwrap()
                .then_with(|| a.id.cmp(&b.id))
        });
        v
    }

    pub fn value(&self, id: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.id == id).map(|e| e.esri)
    }
}

/// ESRI for every firm, one independent cascade per firm.
pub fn esri_all(net: &SupplyNetwork, params: &CascadeParams, par: Parallelism) -> Result<EsriProfile> {
    esri_all_with(net, &EssentialityOverrides::default(), params, par)
}

/// Like [`esri_all`] with explicit essentiality overrides.
pub fn esri_all_with(
    net: &SupplyNetwork,
    overrides: &EssentialityOverrides,
    params: &CascadeParams,
    par: Parallelism,
) -> Result<EsriProfile> {
    params.validate()?;
    let spec = derive_production_spec(net, overrides);
    let mats = build_impact_matrices(net, &spec);
    let n = net.node_count();
    let results = exec::map_indexed(n, par, |i| esri_of(net, &mats, i, params));
    let mut entries = Vec::with_capacity(n);
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        let id = net.firm(i).id.clone();
        match r {
            Ok((esri, iterations)) => entries.push(EsriEntry { id, esri, iterations }),
            Err(Error::NonConvergence {
                iterations,
                residual,
                ..
            }) => failures.push(CascadeFailure {
                id,
                iterations,
                residual,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(EsriProfile { entries, failures })
}

/// Ensemble ESRI configuration: pilot runs over a few members rank the
/// firms, the full ensemble is then evaluated for the top-k only.
#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub pilot_size: usize,
    pub top_k: usize,
    pub params: CascadeParams,
    pub parallelism: Parallelism,
}

impl EnsembleConfig {
    pub fn new(top_k: usize) -> Self {
        EnsembleConfig {
            pilot_size: 5,
            top_k,
            params: CascadeParams::default(),
            parallelism: Parallelism::default(),
        }
    }
}

/// Distribution summary of one firm's ESRI across ensemble members.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EnsembleStat {
    pub id: String,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub max: f64,
    pub n: usize,
}

/// Two-stage ensemble result.
#[derive(Debug, Clone)]
pub struct EnsembleEsri {
    /// Top-k firms sorted by descending median ESRI.
    pub stats: Vec<EnsembleStat>,
    /// Stage-1 mean ESRI per firm over the pilot members, in node order.
    pub pilot_mean: Vec<(String, f64)>,
}

/// Two-stage ensemble ESRI: mean profile over a pilot subset selects the
/// `top_k` riskiest firms, whose ESRI is then computed on every member.
/// Quantiles are linearly interpolated.
pub fn ensemble_esri(nets: &[SupplyNetwork], cfg: &EnsembleConfig) -> Result<EnsembleEsri> {
    if nets.is_empty() {
        return Err(Error::validation("ensemble is empty".into()));
    }
    cfg.params.validate()?;
    let n = nets[0].node_count();
    for net in &nets[1..] {
        if net.node_count() != n
            || (0..n).any(|i| net.firm(i).id != nets[0].firm(i).id)
        {
            return Err(Error::validation(
                "ensemble members must share an identical node set".into(),
            ));
        }
    }

    // Stage 1: pilot mean per firm.
    let pilot_n = cfg.pilot_size.clamp(1, nets.len());
    let mut sums = vec![0.0f64; n];
    let mut counts = vec![0usize; n];
    for net in &nets[..pilot_n] {
        let profile = esri_all(net, &cfg.params, cfg.parallelism)?;
        for e in &profile.entries {
            let i = net.node_index(&e.id).unwrap() as usize;
            sums[i] += e.esri;
            counts[i] += 1;
        }
    }
    let pilot_mean: Vec<(String, f64)> = (0..n)
        .map(|i| {
            let m = if counts[i] > 0 { sums[i] / counts[i] as f64 } else { f64::NAN };
            (nets[0].firm(i).id.clone(), m)
        })
        .collect();

    let mut ranked: Vec<usize> = (0..n).filter(|&i| counts[i] > 0).collect();
    ranked.sort_by(|&a, &b| {
        pilot_mean[b]
            .1
            .partial_cmp(&pilot_mean[a].1)
            .unwrap()
            .then_with(|| pilot_mean[a].0.cmp(&pilot_mean[b].0))
    });
    let top: Vec<usize> = ranked.into_iter().take(cfg.top_k.min(n)).collect();

    // Stage 2: the selected firms on every member; one flat parallel batch.
    let prepared: Vec<(ProductionSpec, ImpactMatrices)> = nets
        .iter()
        .map(|net| {
            let spec = derive_production_spec(net, &EssentialityOverrides::default());
            let mats = build_impact_matrices(net, &spec);
            (spec, mats)
        })
        .collect();
    let jobs = nets.len() * top.len();
    let results = exec::map_indexed(jobs, cfg.parallelism, |job| {
        let net_idx = job / top.len();
        let firm = top[job % top.len()];
        esri_of(&nets[net_idx], &prepared[net_idx].1, firm, &cfg.params)
    });

    let mut stats_out = Vec::with_capacity(top.len());
    for (pos, &firm) in top.iter().enumerate() {
        let mut values: Vec<f64> = Vec::with_capacity(nets.len());
        for net_idx in 0..nets.len() {
            if let Ok((v, _)) = &results[net_idx * top.len() + pos] {
                values.push(*v);
            }
        }
        if values.is_empty() {
            continue;
        }
        let sorted = stats::sorted(&values);
        stats_out.push(EnsembleStat {
            id: nets[0].firm(firm).id.clone(),
            median: stats::quantile_linear(&sorted, 0.5),
            q25: stats::quantile_linear(&sorted, 0.25),
            q75: stats::quantile_linear(&sorted, 0.75),
            max: *sorted.last().unwrap(),
            n: sorted.len(),
        });
    }
    stats_out.sort_by(|a, b| {
        b.median
            .partial_cmp(&a.median)
            .unwrap()
            .then_with(|| a.id.cmp(&b.id))
    });

    Ok(EnsembleEsri {
        stats: stats_out,
        pilot_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{build_supply_network, FirmRecord};

    fn firm(id: &str, sector: &str, size: f64) -> FirmRecord {
        FirmRecord::new(id, sector, size, 1)
    }

    /// A -> B -> C with unit weights, distinct Leontief sectors.
    fn chain() -> SupplyNetwork {
        build_supply_network(
            vec![firm("A", "A01", 1.0), firm("B", "C20", 1.0), firm("C", "C28", 1.0)],
            &[("A".into(), "B".into(), 1.0), ("B".into(), "C".into(), 1.0)],
        )
        .unwrap()
    }

    fn mats_for(net: &SupplyNetwork) -> (ProductionSpec, ImpactMatrices) {
        let spec = derive_production_spec(net, &EssentialityOverrides::default());
        let mats = build_impact_matrices(net, &spec);
        (spec, mats)
    }

    #[test]
    fn spec_shares_single_supplier() {
        // B buys 5 from A and sells 10 to C: alpha_Bk = alpha_B = 0.5
        let net = build_supply_network(
            vec![firm("A", "A01", 1.0), firm("B", "C20", 1.0), firm("C", "C28", 1.0)],
            &[("A".into(), "B".into(), 5.0), ("B".into(), "C".into(), 10.0)],
        )
        .unwrap();
        let (spec, _) = mats_for(&net);
        let b = net.node_index("B").unwrap() as usize;
        let a_sector = net.sector_index_of(net.node_index("A").unwrap() as usize);
        assert_eq!(spec.alpha_ik[b], vec![(a_sector, 0.5)]);
        assert_eq!(spec.alpha[b], 0.5);
        assert_eq!(spec.essential_inputs[b], vec![a_sector]);
        assert!(spec.non_essential_inputs[b].is_empty());
    }

    #[test]
    fn spec_no_inputs_unconstrained() {
        let net = chain();
        let (spec, mats) = mats_for(&net);
        let a = net.node_index("A").unwrap() as usize;
        assert!(spec.essential_inputs[a].is_empty());
        assert!(spec.non_essential_inputs[a].is_empty());
        // bounded only by psi
        let out = run_cascade(&net, &mats, &[0.7, 1.0, 1.0], &CascadeParams::default()).unwrap();
        assert_eq!(out.h_down[a], 0.7);
    }

    #[test]
    fn impact_chain_unit_entries() {
        let net = chain();
        let (_, mats) = mats_for(&net);
        let (a, b, c) = (0usize, 1usize, 2usize);
        assert_eq!(mats.upstream[a], vec![(b as u32, 1.0)]);
        assert_eq!(mats.upstream[b], vec![(c as u32, 1.0)]);
        assert!(mats.upstream[c].is_empty());
        assert_eq!(mats.downstream[b].len(), 1);
        assert_eq!(mats.downstream[b][0].lambda_d1, 1.0);
        assert_eq!(mats.downstream[c][0].lambda_d1, 1.0);
        assert!(mats.downstream[a].is_empty());
    }

    #[test]
    fn impact_same_sector_suppliers_normalize_within_type() {
        let net = build_supply_network(
            vec![
                firm("S1", "C10", 1.0),
                firm("S2", "C10", 1.0),
                firm("B", "C28", 1.0),
            ],
            &[("S1".into(), "B".into(), 1.0), ("S2".into(), "B".into(), 3.0)],
        )
        .unwrap();
        let (_, mats) = mats_for(&net);
        let b = net.node_index("B").unwrap() as usize;
        let mut d1: Vec<f64> = mats.downstream[b].iter().map(|e| e.lambda_d1).collect();
        d1.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(d1, vec![0.25, 0.75]);
    }

    #[test]
    fn isolated_node_has_empty_rows() {
        let net = build_supply_network(
            vec![firm("A", "A01", 1.0), firm("B", "C20", 1.0), firm("Z", "K64", 1.0)],
            &[("A".into(), "B".into(), 1.0)],
        )
        .unwrap();
        let (_, mats) = mats_for(&net);
        let z = net.node_index("Z").unwrap() as usize;
        assert!(mats.downstream[z].is_empty());
        assert!(mats.upstream[z].is_empty());
        assert_eq!(mats.s_out[z], 0.0);
    }

    #[test]
    fn no_shock_is_a_fixed_point() {
        let net = chain();
        let (_, mats) = mats_for(&net);
        let out = run_cascade(&net, &mats, &[1.0, 1.0, 1.0], &CascadeParams::default()).unwrap();
        assert_eq!(out.h, vec![1.0, 1.0, 1.0]);
        assert_eq!(out.iterations, 1);
        assert!(out.monotone);
    }

    #[test]
    fn chain_downstream_collapse() {
        let net = chain();
        let (_, mats) = mats_for(&net);
        let out = run_cascade(&net, &mats, &[0.0, 1.0, 1.0], &CascadeParams::default()).unwrap();
        assert_eq!(out.h, vec![0.0, 0.0, 0.0]);
        assert!(out.monotone);
    }

    #[test]
    fn chain_upstream_collapse() {
        let net = chain();
        let (_, mats) = mats_for(&net);
        let out = run_cascade(&net, &mats, &[1.0, 1.0, 0.0], &CascadeParams::default()).unwrap();
        assert_eq!(out.h, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn linear_firm_loses_input_share_linearly() {
        // C (linear, G46) buys 1 of type a from A and 3 of type c from B; A
        // at half output costs C exactly 0.5 * 0.25 of production.
        let net = build_supply_network(
            vec![firm("A", "A01", 1.0), firm("B", "C20", 1.0), firm("C", "G46", 1.0)],
            &[("A".into(), "C".into(), 1.0), ("B".into(), "C".into(), 3.0)],
        )
        .unwrap();
        let (spec, mats) = mats_for(&net);
        let c = net.node_index("C").unwrap() as usize;
        assert_eq!(spec.essential_inputs[c], Vec::<u16>::new());
        assert_eq!(spec.non_essential_inputs[c].len(), 2);
        let out = run_cascade(&net, &mats, &[0.5, 1.0, 1.0], &CascadeParams::default()).unwrap();
        assert_eq!(out.h, vec![0.5, 1.0, 0.875]);
    }

    #[test]
    fn isolated_firm_esri_is_size_share() {
        let net = build_supply_network(
            vec![firm("A", "A01", 1.0), firm("B", "C20", 1.0), firm("Big", "C28", 2.0)],
            &[],
        )
        .unwrap();
        let profile = esri_all(&net, &CascadeParams::default(), Parallelism::Sequential).unwrap();
        assert_eq!(profile.value("Big"), Some(0.5));
        assert_eq!(profile.value("A"), Some(0.25));
    }

    #[test]
    fn chain_esri_all_ones() {
        let net = chain();
        let profile = esri_all(&net, &CascadeParams::default(), Parallelism::Sequential).unwrap();
        for id in ["A", "B", "C"] {
            assert_eq!(profile.value(id), Some(1.0), "firm {id}");
        }
    }

    #[test]
    fn non_convergence_carries_state() {
        let firms: Vec<FirmRecord> = (0..8)
            .map(|i| firm(&format!("F{i}"), if i % 2 == 0 { "C10" } else { "C20" }, 1.0))
            .collect();
        let arcs: Vec<(String, String, f64)> = (0..7)
            .map(|i| (format!("F{i}"), format!("F{}", i + 1), 1.0))
            .collect();
        let net = build_supply_network(firms, &arcs).unwrap();
        let (_, mats) = mats_for(&net);
        let mut psi = vec![1.0; 8];
        psi[0] = 0.0;
        let params = CascadeParams {
            epsilon: 1e-2,
            max_iter: 2,
        };
        match run_cascade(&net, &mats, &psi, &params) {
            Err(Error::NonConvergence { iterations, state, .. }) => {
                assert_eq!(iterations, 2);
                assert_eq!(state.h_down.len(), 8);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn epsilon_zero_rejected() {
        let net = chain();
        let params = CascadeParams {
            epsilon: 0.0,
            max_iter: 10,
        };
        assert!(esri_all(&net, &params, Parallelism::Sequential).is_err());
    }

    #[test]
    fn ensemble_of_identical_networks_collapses_quartiles() {
        let net = chain();
        let nets = vec![net.clone(), net.clone(), net];
        let cfg = EnsembleConfig::new(3);
        let ens = ensemble_esri(&nets, &cfg).unwrap();
        let single = esri_all(&nets[0], &CascadeParams::default(), Parallelism::Sequential).unwrap();
        for s in &ens.stats {
            let v = single.value(&s.id).unwrap();
            assert_eq!(s.median, v);
            assert_eq!(s.q25, v);
            assert_eq!(s.q75, v);
            assert_eq!(s.max, v);
        }
    }

    #[test]
    fn two_member_ensemble_matches_direct_runs() {
        // 4-node fixture; members differ in one arc direction.
        let firms = || {
            vec![
                firm("A", "A01", 1.0),
                firm("B", "C20", 2.0),
                firm("C", "C28", 1.0),
                firm("D", "G46", 1.0),
            ]
        };
        let base = vec![
            ("A".to_string(), "B".to_string(), 1.0),
            ("B".to_string(), "C".to_string(), 1.0),
        ];
        let mut flipped = base.clone();
        flipped.push(("C".to_string(), "D".to_string(), 1.0));
        let mut straight = base;
        straight.push(("D".to_string(), "C".to_string(), 1.0));
        let net1 = build_supply_network(firms(), &straight).unwrap();
        let net2 = build_supply_network(firms(), &flipped).unwrap();

        let p1 = esri_all(&net1, &CascadeParams::default(), Parallelism::Sequential).unwrap();
        let p2 = esri_all(&net2, &CascadeParams::default(), Parallelism::Sequential).unwrap();

        let mut cfg = EnsembleConfig::new(4);
        cfg.pilot_size = 2;
        let ens = ensemble_esri(&[net1, net2], &cfg).unwrap();
        for s in &ens.stats {
            let a = p1.value(&s.id).unwrap();
            let b = p2.value(&s.id).unwrap();
            let (lo, hi) = (a.min(b), a.max(b));
            let mid = 0.5 * (lo + hi);
            let d = hi - lo;
            assert!((s.median - mid).abs() < 1e-15, "median of {}", s.id);
            assert!((s.q25 - (mid - 0.25 * d)).abs() < 1e-15);
            assert!((s.q75 - (mid + 0.25 * d)).abs() < 1e-15);
            assert_eq!(s.max, hi);
            assert!((s.q75 - s.q25 - 0.5 * d).abs() < 1e-15);
        }
    }

    #[test]
    fn ensemble_rejects_mismatched_node_sets() {
        let net1 = chain();
        let net2 = build_supply_network(
            vec![firm("A", "A01", 1.0), firm("X", "C20", 1.0), firm("C", "C28", 1.0)],
            &[],
        )
        .unwrap();
        assert!(ensemble_esri(&[net1, net2], &EnsembleConfig::new(1)).is_err());
    }
}
