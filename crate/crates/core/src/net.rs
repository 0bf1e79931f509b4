//! Core domain types: firm records, communication networks, supply networks,
//! and sector flow (input-output) tables.
//!
//! All types are immutable after construction and safe to share across
//! worker threads. Firm ids are opaque strings at the boundary and mapped to
//! dense indices internally.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// NACE level-2 sectors excluded from analysis (call centers and similar
/// businesses with telephone activity at the core of their operations).
pub const EXCLUDED_SECTORS: [&str; 4] = ["J61", "J62", "M70", "N82"];

/// Production regime of a firm, assigned from its industry code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Physical production; inputs enter in a Leontief (binding) way.
    Leontief,
    /// Services and trade; inputs enter linearly.
    Linear,
}

/// Extracts the two-digit division from a NACE-style code such as `C28`.
pub fn nace_division(sector: &str) -> Option<u32> {
    let digits: String = sector.chars().filter(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        None
    } else {
        digits.parse().ok()
    }
}

/// Division up to F43 means a physical production process, hence Leontief;
/// everything else (and codes without a division) is linear.
pub fn regime_for_sector(sector: &str) -> Regime {
    match nace_division(sector) {
        Some(d) if d <= 43 => Regime::Leontief,
        _ => Regime::Linear,
    }
}

/// A firm: opaque id, sector code, size (total-assets proxy), device count.
#[derive(Debug, Clone, PartialEq)]
pub struct FirmRecord {
    pub id: String,
    pub sector: String,
    pub size: f64,
    pub devices: u32,
}

impl FirmRecord {
    pub fn new(id: impl Into<String>, sector: impl Into<String>, size: f64, devices: u32) -> Self {
        FirmRecord {
            id: id.into(),
            sector: sector.into(),
            size,
            devices,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sector.is_empty() {
            return Err(Error::validation(format!("firm {}: empty sector", self.id)));
        }
        if !(self.size > 0.0) || !self.size.is_finite() {
            return Err(Error::validation(format!(
                "firm {}: size must be a positive finite number, got {}",
                self.id, self.size
            )));
        }
        Ok(())
    }
}

/// Indexed firm list with unique ids.
#[derive(Debug, Clone)]
pub struct FirmTable {
    firms: Vec<FirmRecord>,
    index: HashMap<String, usize>,
}

impl FirmTable {
    pub fn new(firms: Vec<FirmRecord>) -> Result<Self> {
        let mut index = HashMap::with_capacity(firms.len());
        for (i, f) in firms.iter().enumerate() {
            f.validate()?;
            if index.insert(f.id.clone(), i).is_some() {
                return Err(Error::validation(format!("duplicate firm id {}", f.id)));
            }
        }
        Ok(FirmTable { firms, index })
    }

    pub fn get(&self, id: &str) -> Option<&FirmRecord> {
        self.index.get(id).map(|&i| &self.firms[i])
    }

    pub fn records(&self) -> &[FirmRecord] {
        &self.firms
    }

    pub fn len(&self) -> usize {
        self.firms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.firms.is_empty()
    }
}

/// Maps firm sector codes onto the sector codes of an IO table when the two
/// classifications differ lexically.
pub type SectorMap = BTreeMap<String, String>;

/// An undirected communication edge between node indices `a < b`, weighted
/// by average daily call duration in seconds per day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommEdge {
    pub a: u32,
    pub b: u32,
    pub duration: f64,
}

/// Undirected weighted firm-to-firm communication network. No self-loops, at
/// most one edge per unordered pair, strictly positive durations. Isolated
/// nodes are first-class members of the node set.
#[derive(Debug, Clone)]
pub struct CommunicationNetwork {
    ids: Vec<String>,
    index: HashMap<String, u32>,
    /// Canonical `a < b`, sorted by `(a, b)`.
    edges: Vec<CommEdge>,
}

impl CommunicationNetwork {
    pub fn new(node_ids: Vec<String>, edges: Vec<(String, String, f64)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(node_ids.len());
        for (i, id) in node_ids.iter().enumerate() {
            if index.insert(id.clone(), i as u32).is_some() {
                return Err(Error::validation(format!("duplicate node id {id}")));
            }
        }
        let mut es = Vec::with_capacity(edges.len());
        for (u, v, d) in &edges {
            let &ui = index
                .get(u.as_str())
                .ok_or_else(|| Error::validation(format!("edge endpoint {u} not in node set")))?;
            let &vi = index
                .get(v.as_str())
                .ok_or_else(|| Error::validation(format!("edge endpoint {v} not in node set")))?;
            if ui == vi {
                return Err(Error::validation(format!("self-loop on node {u}")));
            }
            if !(*d > 0.0) || !d.is_finite() {
                return Err(Error::validation(format!(
                    "edge ({u},{v}): duration must be positive and finite, got {d}"
                )));
            }
            es.push(CommEdge {
                a: ui.min(vi),
                b: ui.max(vi),
                duration: *d,
            });
        }
        es.sort_by_key(|e| (e.a, e.b));
        if es.windows(2).any(|w| w[0].a == w[1].a && w[0].b == w[1].b) {
            return Err(Error::validation(
                "duplicate edge for an unordered node pair".into(),
            ));
        }
        Ok(CommunicationNetwork {
            ids: node_ids,
            index,
            edges: es,
        })
    }

    /// Construction from already-validated dense parts.
    pub(crate) fn from_parts(ids: Vec<String>, mut edges: Vec<CommEdge>) -> Self {
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i as u32))
            .collect();
        edges.sort_by_key(|e| (e.a, e.b));
        CommunicationNetwork { ids, index, edges }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, idx: u32) -> &str {
        &self.ids[idx as usize]
    }

    pub fn node_index(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[CommEdge] {
        &self.edges
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        let (a, b) = (i.min(j), i.max(j));
        self.edges
            .binary_search_by_key(&(a, b), |e| (e.a, e.b))
            .is_ok()
    }

    /// Undirected degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.ids.len()];
        for e in &self.edges {
            deg[e.a as usize] += 1;
            deg[e.b as usize] += 1;
        }
        deg
    }

    /// Same node set, edges restricted by a predicate.
    pub fn filter_edges<F: Fn(&CommEdge) -> bool>(&self, keep: F) -> Self {
        let edges = self.edges.iter().copied().filter(|e| keep(e)).collect();
        CommunicationNetwork {
            ids: self.ids.clone(),
            index: self.index.clone(),
            edges,
        }
    }

    /// Subgraph induced by a node subset: exactly those nodes and every edge
    /// with both endpoints inside. Node order follows the original network.
    pub fn induced_subgraph(&self, nodes: &[String]) -> Result<Self> {
        let mut keep = vec![false; self.ids.len()];
        for id in nodes {
            let idx = self
                .node_index(id)
                .ok_or_else(|| Error::validation(format!("node {id} not in network")))?;
            keep[idx as usize] = true;
        }
        let mut remap = vec![u32::MAX; self.ids.len()];
        let mut ids = Vec::new();
        for (i, k) in keep.iter().enumerate() {
            if *k {
                remap[i] = ids.len() as u32;
                ids.push(self.ids[i].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.a as usize] && keep[e.b as usize])
            .map(|e| CommEdge {
                a: remap[e.a as usize],
                b: remap[e.b as usize],
                duration: e.duration,
            })
            .collect();
        Ok(CommunicationNetwork::from_parts(ids, edges))
    }

    pub fn undirected_view(&self) -> SimpleGraph {
        let mut adj = vec![Vec::new(); self.ids.len()];
        for e in &self.edges {
            adj[e.a as usize].push(e.b);
            adj[e.b as usize].push(e.a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        SimpleGraph { adj }
    }
}

/// Which degree notion to use on a directed network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeKind {
    Total,
    In,
    Out,
}

/// Directed weighted supply network: the cascade substrate. Every node
/// carries its firm record, a sector (= product type) index and a production
/// regime. Arcs `i -> j` have weight `W_ij >= 0`, the value of goods of
/// firm `i`'s type delivered to `j`.
#[derive(Debug, Clone)]
pub struct SupplyNetwork {
    firms: Vec<FirmRecord>,
    index: HashMap<String, u32>,
    sectors: Vec<String>,
    sector_of: Vec<u16>,
    regimes: Vec<Regime>,
    /// Outgoing arcs per node, sorted by target.
    out: Vec<Vec<(u32, f64)>>,
    /// Incoming arcs per node, sorted by source.
    inn: Vec<Vec<(u32, f64)>>,
}

/// Builds a validated supply network. Duplicate arcs merge by weight
/// summation; arc endpoints must exist; weights must be non-negative.
pub fn build_supply_network(
    firms: Vec<FirmRecord>,
    arcs: &[(String, String, f64)],
) -> Result<SupplyNetwork> {
    let table = FirmTable::new(firms)?;
    let resolved: Vec<(u32, u32, f64)> = arcs
        .iter()
        .map(|(u, v, w)| {
            let ui = table
                .index
                .get(u.as_str())
                .copied()
                .ok_or_else(|| Error::validation(format!("arc endpoint {u} unknown")))?;
            let vi = table
                .index
                .get(v.as_str())
                .copied()
                .ok_or_else(|| Error::validation(format!("arc endpoint {v} unknown")))?;
            Ok((ui as u32, vi as u32, *w))
        })
        .collect::<Result<_>>()?;
    SupplyNetwork::from_indexed_arcs(table.firms, resolved)
}

impl SupplyNetwork {
    /// Index-based construction shared by the public builder and internal
    /// callers (reconstruction, generators). Validates weights and
    /// self-loops; merges duplicate arcs by summation.
    pub(crate) fn from_indexed_arcs(
        firms: Vec<FirmRecord>,
        arcs: Vec<(u32, u32, f64)>,
    ) -> Result<SupplyNetwork> {
        let n = firms.len();
        if n == 0 {
            return Err(Error::validation("supply network needs at least one node".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, f) in firms.iter().enumerate() {
            f.validate()?;
            if index.insert(f.id.clone(), i as u32).is_some() {
                return Err(Error::validation(format!("duplicate firm id {}", f.id)));
            }
        }

        let mut sectors: Vec<String> = firms.iter().map(|f| f.sector.clone()).collect();
        sectors.sort();
        sectors.dedup();
        if sectors.len() > u16::MAX as usize {
            return Err(Error::validation("too many distinct sectors".into()));
        }
        let sector_idx: HashMap<&str, u16> = sectors
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u16))
            .collect();
        let sector_of: Vec<u16> = firms.iter().map(|f| sector_idx[f.sector.as_str()]).collect();
        let regimes: Vec<Regime> = firms.iter().map(|f| regime_for_sector(&f.sector)).collect();

        let mut merged: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for (u, v, w) in arcs {
            if u == v {
                return Err(Error::validation(format!(
                    "self-loop on firm {}",
                    firms[u as usize].id
                )));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::validation(format!(
                    "arc ({},{}) has invalid weight {w}",
                    firms[u as usize].id, firms[v as usize].id
                )));
            }
            *merged.entry((u, v)).or_insert(0.0) += w;
        }

        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (&(u, v), &w) in &merged {
            out[u as usize].push((v, w));
            inn[v as usize].push((u, w));
        }
        for l in &mut inn {
            l.sort_unstable_by_key(|&(s, _)| s);
        }

        Ok(SupplyNetwork {
            firms,
            index,
            sectors,
            sector_of,
            regimes,
            out,
            inn,
        })
    }

    pub fn node_count(&self) -> usize {
        self.firms.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn firm(&self, i: usize) -> &FirmRecord {
        &self.firms[i]
    }

    pub fn firms(&self) -> &[FirmRecord] {
        &self.firms
    }

    pub fn node_index(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn size(&self, i: usize) -> f64 {
        self.firms[i].size
    }

    pub fn total_size(&self) -> f64 {
        self.firms.iter().map(|f| f.size).sum()
    }

    pub fn sector_index_of(&self, i: usize) -> u16 {
        self.sector_of[i]
    }

    pub fn sector_code(&self, s: u16) -> &str {
        &self.sectors[s as usize]
    }

    pub fn sectors(&self) -> &[String] {
        &self.sectors
    }

    pub fn regime(&self, i: usize) -> Regime {
        self.regimes[i]
    }

    pub fn out_arcs(&self, i: usize) -> &[(u32, f64)] {
        &self.out[i]
    }

    pub fn in_arcs(&self, i: usize) -> &[(u32, f64)] {
        &self.inn[i]
    }

    pub fn out_strength(&self, i: usize) -> f64 {
        self.out[i].iter().map(|&(_, w)| w).sum()
    }

    pub fn in_strength(&self, i: usize) -> f64 {
        self.inn[i].iter().map(|&(_, w)| w).sum()
    }

    /// All arcs as `(source, target, weight)` in `(source, target)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&(v, w)| (u as u32, v, w)))
    }

    /// True if an arc `i -> j` (any weight, including zero) exists.
    pub fn has_arc(&self, i: u32, j: u32) -> bool {
        self.out[i as usize]
            .binary_search_by_key(&j, |&(t, _)| t)
            .is_ok()
    }

    pub fn degrees(&self, kind: DegreeKind) -> Vec<usize> {
        let n = self.node_count();
        let mut deg = vec![0usize; n];
        for i in 0..n {
            match kind {
                DegreeKind::Total => deg[i] = self.out[i].len() + self.inn[i].len(),
                DegreeKind::In => deg[i] = self.inn[i].len(),
                DegreeKind::Out => deg[i] = self.out[i].len(),
            }
        }
        deg
    }

    /// Replaces every arc weight via `f(source, target, weight)`.
    pub(crate) fn map_weights<F: Fn(usize, usize, f64) -> f64>(&self, f: F) -> SupplyNetwork {
        let mut net = self.clone();
        for (u, l) in net.out.iter_mut().enumerate() {
            for (v, w) in l.iter_mut() {
                *w = f(u, *v as usize, *w);
            }
        }
        for (v, l) in net.inn.iter_mut().enumerate() {
            for (u, w) in l.iter_mut() {
                *w = f(*u as usize, v, *w);
            }
        }
        net
    }

    /// Subgraph induced by a node subset; arc weights preserved.
    pub fn induced_subgraph(&self, nodes: &[String]) -> Result<SupplyNetwork> {
        let mut keep = vec![false; self.node_count()];
        for id in nodes {
            let idx = self
                .node_index(id)
                .ok_or_else(|| Error::validation(format!("node {id} not in network")))?;
            keep[idx as usize] = true;
        }
        self.induced_by_mask(&keep)
    }

    /// Index-mask variant used by sampling experiments.
    pub fn induced_by_mask(&self, keep: &[bool]) -> Result<SupplyNetwork> {
        let mut remap = vec![u32::MAX; self.node_count()];
        let mut firms = Vec::new();
        for (i, k) in keep.iter().enumerate() {
            if *k {
                remap[i] = firms.len() as u32;
                firms.push(self.firms[i].clone());
            }
        }
        let arcs: Vec<(u32, u32, f64)> = self
            .arcs()
            .filter(|&(u, v, _)| keep[u as usize] && keep[v as usize])
            .map(|(u, v, w)| (remap[u as usize], remap[v as usize], w))
            .collect();
        SupplyNetwork::from_indexed_arcs(firms, arcs)
    }

    /// Collapses directions: nodes plus an undirected simple edge wherever at
    /// least one arc with positive weight connects a pair.
    pub fn undirected_view(&self) -> SimpleGraph {
        let n = self.node_count();
        let mut adj = vec![Vec::new(); n];
        for (u, v, _) in self.arcs() {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        SimpleGraph { adj }
    }
}

/// Square non-negative matrix of sector-to-sector flows (the IO table).
#[derive(Debug, Clone)]
pub struct SectorFlowTable {
    sectors: Vec<String>,
    index: HashMap<String, u16>,
    /// Row-major `n x n`; `g[a*n + b]` is the flow from sector `a` to `b`.
    g: Vec<f64>,
}

impl SectorFlowTable {
    pub fn new(sectors: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = sectors.len();
        if n == 0 {
            return Err(Error::validation("sector flow table needs at least one sector".into()));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::validation(format!(
                "sector flow table must be square ({n} sectors)"
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, s) in sectors.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::validation("empty sector code in flow table".into()));
            }
            if index.insert(s.clone(), i as u16).is_some() {
                return Err(Error::validation(format!("duplicate sector code {s}")));
            }
        }
        let mut g = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            for (b, &x) in row.iter().enumerate() {
                if !(x >= 0.0) || !x.is_finite() {
                    return Err(Error::validation(format!(
                        "flow {} -> {} is negative or non-finite: {x}",
                        sectors[a], sectors[b]
                    )));
                }
                g.push(x);
            }
        }
        Ok(SectorFlowTable { sectors, index, g })
    }

    pub fn n_sectors(&self) -> usize {
        self.sectors.len()
    }

    pub fn sectors(&self) -> &[String] {
        &self.sectors
    }

    pub fn sector_index(&self, code: &str) -> Option<u16> {
        self.index.get(code).copied()
    }

    pub fn flow(&self, a: u16, b: u16) -> f64 {
        self.g[a as usize * self.sectors.len() + b as usize]
    }

    pub fn row(&self, a: u16) -> &[f64] {
        let n = self.sectors.len();
        &self.g[a as usize * n..(a as usize + 1) * n]
    }

    /// Probability that a link between sectors `(a, b)` points `a -> b`:
    /// `G_ab / (G_ab + G_ba)`, or 1/2 when both flows vanish.
    pub fn direction_prob(&self, a: u16, b: u16) -> f64 {
        let gab = self.flow(a, b);
        let gba = self.flow(b, a);
        let total = gab + gba;
        if total > 0.0 {
            gab / total
        } else {
            0.5
        }
    }
}

/// Plain undirected simple graph used by the topology statistics; sorted,
/// deduplicated neighbor lists without self-loops.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    pub(crate) adj: Vec<Vec<u32>>,
}

impl SimpleGraph {
    pub fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        for (i, l) in adj.iter_mut().enumerate() {
            l.sort_unstable();
            l.dedup();
            l.retain(|&j| j != i as u32);
        }
        SimpleGraph { adj }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        self.adj[i as usize].binary_search(&j).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn firm(id: &str, sector: &str) -> FirmRecord {
        FirmRecord::new(id, sector, 1.0, 1)
    }

    #[test]
    fn build_merges_duplicate_arcs() {
        let firms = vec![firm("A", "C10"), firm("B", "C20"), firm("C", "G46")];
        let arcs = vec![
            ("A".into(), "B".into(), 1.0),
            ("A".into(), "B".into(), 2.0),
        ];
        let net = build_supply_network(firms, &arcs).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.arc_count(), 1);
        assert_eq!(net.out_arcs(0), &[(1, 3.0)]);
    }

    #[test]
    fn build_rejects_unknown_endpoint() {
        let firms = vec![firm("A", "C10")];
        let arcs = vec![("A".into(), "Z".into(), 1.0)];
        assert!(build_supply_network(firms, &arcs).is_err());
    }

    #[test]
    fn build_rejects_negative_weight_and_self_loop() {
        let firms = vec![firm("A", "C10"), firm("B", "C20")];
        assert!(build_supply_network(firms.clone(), &[("A".into(), "B".into(), -1.0)]).is_err());
        assert!(build_supply_network(firms, &[("A".into(), "A".into(), 1.0)]).is_err());
    }

    #[test]
    fn simple_three_node_network() {
        let firms = vec![firm("A", "C10"), firm("B", "C20"), firm("C", "G46")];
        let net = build_supply_network(firms, &[("A".into(), "B".into(), 1.0)]).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.arc_count(), 1);
        assert_eq!(net.degrees(DegreeKind::Total), vec![1, 1, 0]);
    }

    #[test]
    fn regimes_follow_the_nace_rule() {
        assert_eq!(regime_for_sector("C28"), Regime::Leontief);
        assert_eq!(regime_for_sector("F43"), Regime::Leontief);
        assert_eq!(regime_for_sector("G45"), Regime::Linear);
        assert_eq!(regime_for_sector("K64"), Regime::Linear);
        assert_eq!(regime_for_sector("X"), Regime::Linear);
    }

    #[test]
    fn induced_subgraph_star_leaves() {
        // K_{1,3}: center X with leaves L1..L3; keeping two leaves leaves no edges
        let ids: Vec<String> = vec!["X".into(), "L1".into(), "L2".into(), "L3".into()];
        let edges = vec![
            ("X".to_string(), "L1".to_string(), 1.0),
            ("X".to_string(), "L2".to_string(), 1.0),
            ("X".to_string(), "L3".to_string(), 1.0),
        ];
        let comm = CommunicationNetwork::new(ids, edges).unwrap();
        let sub = comm
            .induced_subgraph(&["L1".to_string(), "L2".to_string()])
            .unwrap();
        assert_eq!(sub.node_count(), 2);
        assert_eq!(sub.edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_identity_and_empty() {
        let ids: Vec<String> = vec!["A".into(), "B".into()];
        let comm =
            CommunicationNetwork::new(ids.clone(), vec![("A".into(), "B".into(), 2.0)]).unwrap();
        let full = comm.induced_subgraph(&ids).unwrap();
        assert_eq!(full.edge_count(), 1);
        assert_eq!(full.node_count(), 2);
        let empty = comm.induced_subgraph(&[]).unwrap();
        assert_eq!(empty.node_count(), 0);
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_unknown_node_errors() {
        let comm = CommunicationNetwork::new(vec!["A".into()], vec![]).unwrap();
        assert!(comm.induced_subgraph(&["Q".to_string()]).is_err());
    }

    #[test]
    fn comm_network_rejects_bad_edges() {
        assert!(CommunicationNetwork::new(
            vec!["A".into(), "B".into()],
            vec![("A".into(), "A".into(), 1.0)]
        )
        .is_err());
        assert!(CommunicationNetwork::new(
            vec!["A".into(), "B".into()],
            vec![("A".into(), "B".into(), 0.0)]
        )
        .is_err());
        assert!(CommunicationNetwork::new(
            vec!["A".into(), "B".into()],
            vec![
                ("A".into(), "B".into(), 1.0),
                ("B".into(), "A".into(), 1.0)
            ]
        )
        .is_err());
    }

    #[test]
    fn flow_table_validation() {
        let t = SectorFlowTable::new(
            vec!["a".into(), "f".into()],
            vec![vec![0.0, 3400.0], vec![450.0, 0.0]],
        )
        .unwrap();
        assert_eq!(t.flow(0, 1), 3400.0);
        assert_eq!(t.flow(1, 0), 450.0);
        let p = t.direction_prob(0, 1);
        assert!((p - 3400.0 / 3850.0).abs() < 1e-15);
        assert_eq!(t.direction_prob(0, 0), 0.5);

        assert!(SectorFlowTable::new(
            vec!["a".into(), "f".into()],
            vec![vec![0.0, 1.0, 2.0], vec![0.0, 0.0, 0.0]],
        )
        .is_err());
        assert!(SectorFlowTable::new(vec!["a".into()], vec![vec![-1.0]]).is_err());
        let single = SectorFlowTable::new(vec!["a".into()], vec![vec![5.0]]).unwrap();
        assert_eq!(single.n_sectors(), 1);
    }
}
