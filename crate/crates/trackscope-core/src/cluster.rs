//! Co-occurrence cluster analysis: G² edge pruning, modularity, Louvain
//! community detection with a hyperparameter grid search, and the labeled
//! cluster report.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BipartiteGraph, CooccurrenceGraph};
use crate::labels::LabelTable;
use crate::stats::{g2_test, ContingencyTable2x2};

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has no edges (modularity undefined)")]
    NoEdges,
    #[error("partition covers {partition} vertices, graph has {graph}")]
    MismatchedPartition { partition: usize, graph: usize },
    #[error("co-occurrence graph does not match the bipartite graph it was supposedly projected from: {0}")]
    MismatchedProjection(&'static str),
    #[error(
        "cluster pipeline emptied out at the {stage} stage \
         (projection: {projection_edges} edges, pruned: {pruned_edges} edges, \
         2-core: {core_vertices} vertices)"
    )]
    EmptyPipeline {
        stage: &'static str,
        projection_edges: u64,
        pruned_edges: u64,
        core_vertices: usize,
    },
}

/// A community assignment over a graph's vertices; ids are contiguous
/// from 0 and canonicalized by first appearance in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<u32>,
    community_count: u32,
}

impl Partition {
    pub fn new(assignment: Vec<u32>) -> Partition {
        let mut p = Partition {
            assignment,
            community_count: 0,
        };
        p.canonicalize();
        p
    }

    pub fn singletons(n: usize) -> Partition {
        Partition {
            assignment: (0..n as u32).collect(),
            community_count: n as u32,
        }
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn community_of(&self, v: u32) -> u32 {
        self.assignment[v as usize]
    }

    pub fn community_count(&self) -> u32 {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Members per community, in vertex order.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.community_count as usize];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c as usize].push(v as u32);
        }
        out
    }

    /// Relabels ids to 0..k in order of first appearance so equal
    /// partitions compare equal.
    fn canonicalize(&mut self) {
        let mut remap: BTreeMap<u32, u32> = BTreeMap::new();
        let mut next = 0u32;
        for c in self.assignment.iter_mut() {
            let new = *remap.entry(*c).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            *c = new;
        }
        self.community_count = next;
    }
}

/// Modularity Q = (1/2m) Σᵢⱼ [Aᵢⱼ − kᵢkⱼ/2m] δ(cᵢ, cⱼ) over the weighted
/// co-occurrence graph.
pub fn modularity(g: &CooccurrenceGraph, p: &Partition) -> Result<f64, ClusterError> {
    if p.len() != g.vertex_count() {
        return Err(ClusterError::MismatchedPartition {
            partition: p.len(),
            graph: g.vertex_count(),
        });
    }
    let m: f64 = g.edges().map(|(_, _, w)| w as f64).sum();
    if m == 0.0 {
        return Err(ClusterError::NoEdges);
    }
    let mut intra = vec![0.0f64; p.community_count() as usize];
    for (a, b, w) in g.edges() {
        if p.community_of(a) == p.community_of(b) {
            intra[p.community_of(a) as usize] += w as f64;
        }
    }
    let mut degree_mass = vec![0.0f64; p.community_count() as usize];
    for v in 0..g.vertex_count() as u32 {
        let k: f64 = g.neighbors(v).iter().map(|&(_, w)| w as f64).sum();
        degree_mass[p.community_of(v) as usize] += k;
    }
    let mut q = 0.0;
    for (w_in, k_c) in intra.iter().zip(&degree_mass) {
        q += w_in / m - (k_c / (2.0 * m)) * (k_c / (2.0 * m));
    }
    Ok(q)
}

/// Working graph for the Louvain phases; aggregation introduces self
/// loops, which the public co-occurrence graph never has.
struct WorkGraph {
    adj: Vec<Vec<(u32, f64)>>,
    self_loop: Vec<f64>,
    degree: Vec<f64>,
    total_weight: f64,
}

impl WorkGraph {
    fn from_cooccurrence(g: &CooccurrenceGraph) -> WorkGraph {
        let n = g.vertex_count();
        let mut adj = Vec::with_capacity(n);
        for v in 0..n as u32 {
            adj.push(
                g.neighbors(v)
                    .iter()
                    .map(|&(nbr, w)| (nbr, w as f64))
                    .collect::<Vec<_>>(),
            );
        }
        let degree: Vec<f64> = adj
            .iter()
            .map(|list| list.iter().map(|&(_, w)| w).sum())
            .collect();
        let total_weight: f64 = degree.iter().sum::<f64>() / 2.0;
        WorkGraph {
            adj,
            self_loop: vec![0.0; n],
            degree,
            total_weight,
        }
    }

    fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// One Louvain local-move phase. Nodes are visited in seeded shuffled
    /// order; each moves to the neighboring community with the largest
    /// positive modularity gain. Returns whether anything moved.
    fn local_moves(
        &self,
        node_to_comm: &mut [u32],
        resolution: f64,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        let two_m = 2.0 * self.total_weight;
        let mut comm_degree = vec![0.0f64; self.node_count()];
        for (node, &c) in node_to_comm.iter().enumerate() {
            comm_degree[c as usize] += self.degree[node];
        }
        let mut order: Vec<u32> = (0..self.node_count() as u32).collect();
        let mut moved_any = false;
        loop {
            order.shuffle(rng);
            let mut moved = false;
            for &node in &order {
                let node_usize = node as usize;
                let k_i = self.degree[node_usize];
                let old_comm = node_to_comm[node_usize];

                // Weight from this node into each neighboring community,
                // in ascending community order for deterministic ties.
                let mut links: BTreeMap<u32, f64> = BTreeMap::new();
                for &(nbr, w) in &self.adj[node_usize] {
                    *links.entry(node_to_comm[nbr as usize]).or_insert(0.0) += w;
                }

                comm_degree[old_comm as usize] -= k_i;
                let gain = |comm: u32, k_i_c: f64| {
                    k_i_c - resolution * comm_degree[comm as usize] * k_i / two_m
                };
                let mut best_comm = old_comm;
                let mut best_gain = gain(old_comm, links.get(&old_comm).copied().unwrap_or(0.0));
                for (&comm, &k_i_c) in &links {
                    if comm == old_comm {
                        continue;
                    }
                    let g = gain(comm, k_i_c);
                    if g > best_gain + 1e-12 {
                        best_gain = g;
                        best_comm = comm;
                    }
                }
                comm_degree[best_comm as usize] += k_i;
                if best_comm != old_comm {
                    node_to_comm[node_usize] = best_comm;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        moved_any
    }

    /// Collapses communities to supernodes; total weight is preserved.
    fn aggregate(&self, node_to_comm: &[u32]) -> (WorkGraph, Vec<u32>) {
        let mut ids: Vec<u32> = node_to_comm.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let remap: BTreeMap<u32, u32> = ids
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new as u32))
            .collect();
        let n_new = ids.len();
        let mut self_loop = vec![0.0f64; n_new];
        let mut inter: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for (node, list) in self.adj.iter().enumerate() {
            let a = remap[&node_to_comm[node]];
            self_loop[a as usize] += self.self_loop[node];
            for &(nbr, w) in list {
                if (nbr as usize) < node {
                    continue; // each undirected edge once
                }
                let b = remap[&node_to_comm[nbr as usize]];
                if a == b {
                    self_loop[a as usize] += w;
                } else {
                    let key = (a.min(b), a.max(b));
                    *inter.entry(key).or_insert(0.0) += w;
                }
            }
        }
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n_new];
        for (&(a, b), &w) in &inter {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        for list in &mut adj {
            list.sort_by(|x, y| x.0.cmp(&y.0));
        }
        let degree: Vec<f64> = (0..n_new)
            .map(|v| adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self_loop[v])
            .collect();
        let node_map: Vec<u32> = node_to_comm.iter().map(|c| remap[c]).collect();
        (
            WorkGraph {
                adj,
                self_loop,
                degree,
                total_weight: self.total_weight,
            },
            node_map,
        )
    }
}

/// Two-phase Louvain modularity maximization. The vertex visiting order
/// is shuffled by `seed`; `resolution` scales the null-model term of the
/// gain. Greedy moves only ever accept positive gain, so the result never
/// scores below the singleton partition.
pub fn louvain(
    g: &CooccurrenceGraph,
    resolution: f64,
    seed: u64,
) -> Result<Partition, ClusterError> {
    if g.vertex_count() == 0 {
        return Err(ClusterError::EmptyGraph);
    }
    let mut work = WorkGraph::from_cooccurrence(g);
    if work.total_weight == 0.0 {
        return Err(ClusterError::NoEdges);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // assignment[v] = current supernode of original vertex v
    let mut assignment: Vec<u32> = (0..g.vertex_count() as u32).collect();
    loop {
        let mut node_to_comm: Vec<u32> = (0..work.node_count() as u32).collect();
        let improved = work.local_moves(&mut node_to_comm, resolution, &mut rng);
        if !improved {
            break;
        }
        let (aggregated, node_map) = work.aggregate(&node_to_comm);
        for slot in assignment.iter_mut() {
            *slot = node_map[*slot as usize];
        }
        if aggregated.node_count() == work.node_count() {
            work = aggregated;
            break;
        }
        work = aggregated;
    }
    Ok(Partition::new(assignment))
}

/// Prunes co-occurrence edges by a G² independence test on the 2×2 table
/// (t1 present/absent × t2 present/absent over all sites of `b`): an edge
/// survives only when significant at the Bonferroni-corrected
/// `alpha_level` *and* observed co-occurrence exceeds the independence
/// expectation.
pub fn prune_g2(
    g: &CooccurrenceGraph,
    b: &BipartiteGraph,
    alpha_level: f64,
) -> Result<CooccurrenceGraph, ClusterError> {
    if g.vertices() != b.third_parties() {
        return Err(ClusterError::MismatchedProjection(
            "vertex sets differ",
        ));
    }
    for (t, _) in g.vertices().iter().enumerate() {
        if g.site_degree(t as u32) != b.right_degree(t as u32) {
            return Err(ClusterError::MismatchedProjection(
                "diagonal does not equal the right degree vector",
            ));
        }
    }
    let n_sites = b.sites().len() as u64;
    let candidates = g.edge_count();
    if candidates == 0 {
        return Ok(g.with_edges(&[]));
    }
    let threshold = alpha_level / candidates as f64;
    let mut kept = Vec::new();
    for (t1, t2, w) in g.edges() {
        let d1 = g.site_degree(t1) as u64;
        let d2 = g.site_degree(t2) as u64;
        let expected = d1 as f64 * d2 as f64 / n_sites as f64;
        if (w as f64) <= expected {
            continue; // not over-represented
        }
        let table = ContingencyTable2x2::new(
            w as u64,
            d1 - w as u64,
            d2 - w as u64,
            n_sites - d1 - d2 + w as u64,
        );
        let (_, p) = g2_test(&table).map_err(|_| {
            ClusterError::MismatchedProjection("degenerate margins in co-occurrence table")
        })?;
        if p < threshold {
            kept.push((t1, t2, w));
        }
    }
    Ok(g.with_edges(&kept))
}

/// Whether the 2-core cleanup runs before or after clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreOrder {
    #[default]
    BeforeClustering,
    AfterClustering,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    /// Significance level for G² pruning (Bonferroni-corrected over the
    /// candidate edges).
    pub alpha_level: f64,
    pub resolutions: Vec<f64>,
    pub seeds_per_resolution: u32,
    pub base_seed: u64,
    /// k of the k-core cleanup.
    pub core_k: u32,
    pub core_order: CoreOrder,
    /// Cluster on co-occurrence counts (true) or binarized edges (false).
    pub weighted: bool,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            alpha_level: 0.01,
            resolutions: vec![0.5, 0.75, 1.0, 1.25, 1.5],
            seeds_per_resolution: 10,
            base_seed: 0,
            core_k: 2,
            core_order: CoreOrder::BeforeClustering,
            weighted: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityReport {
    pub id: u32,
    pub members: Vec<String>,
    pub country_histogram: BTreeMap<String, u64>,
    pub category_histogram: BTreeMap<String, u64>,
    /// TLDs of the sites embedding at least one member tracker.
    pub tld_histogram: BTreeMap<String, u64>,
    /// Share in this cluster over share in the whole corpus, per key.
    pub country_enrichment: BTreeMap<String, f64>,
    pub category_enrichment: BTreeMap<String, f64>,
    pub tld_enrichment: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineDiagnostics {
    pub projection_edges: u64,
    pub pruned_edges: u64,
    pub core_vertices: usize,
    pub core_edges: u64,
    pub grid_cells: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub config: ClusterConfig,
    pub q: f64,
    pub communities: Vec<CommunityReport>,
    pub diagnostics: PipelineDiagnostics,
    /// DOT rendering of the clustered graph with community coloring.
    #[serde(skip)]
    pub dot: String,
}

/// Runs the full co-occurrence pipeline on the tracking network:
/// projection → G² pruning → 2-core → Louvain grid search → best-Q
/// partition → labeled report. Identical config and seed give a
/// byte-identical report.
pub fn cluster_pipeline(
    b: &BipartiteGraph,
    labels: &LabelTable,
    config: &ClusterConfig,
) -> Result<ClusterReport, ClusterError> {
    let projection = b.one_mode_projection();
    let projection_edges = projection.edge_count();
    let pruned = prune_g2(&projection, b, config.alpha_level)?;
    let mut pruned = if config.weighted {
        pruned
    } else {
        let binary: Vec<(u32, u32, u32)> =
            pruned.edges().map(|(a, b, _)| (a, b, 1)).collect();
        pruned.with_edges(&binary)
    };
    let pruned_edges = pruned.edge_count();

    let (graph, partition, core_vertices) = match config.core_order {
        CoreOrder::BeforeClustering => {
            let core = pruned.k_core(config.core_k);
            let core_vertices = core.vertex_count();
            if core_vertices == 0 || core.edge_count() == 0 {
                return Err(ClusterError::EmptyPipeline {
                    stage: "2-core",
                    projection_edges,
                    pruned_edges,
                    core_vertices,
                });
            }
            let partition = grid_search(&core, config)?;
            (core, partition, core_vertices)
        }
        CoreOrder::AfterClustering => {
            if pruned.edge_count() == 0 {
                return Err(ClusterError::EmptyPipeline {
                    stage: "pruning",
                    projection_edges,
                    pruned_edges,
                    core_vertices: 0,
                });
            }
            let partition = grid_search(&pruned, config)?;
            let keep_graph = pruned.k_core(config.core_k);
            let core_vertices = keep_graph.vertex_count();
            if core_vertices == 0 || keep_graph.edge_count() == 0 {
                return Err(ClusterError::EmptyPipeline {
                    stage: "2-core",
                    projection_edges,
                    pruned_edges,
                    core_vertices,
                });
            }
            // Restrict the partition to the surviving vertices.
            let mut keep = vec![false; pruned.vertex_count()];
            for pld in keep_graph.vertices() {
                let idx = pruned
                    .vertices()
                    .binary_search(pld)
                    .expect("core vertex exists in pruned graph");
                keep[idx] = true;
            }
            let restricted: Vec<u32> = partition
                .assignment()
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&c, _)| c)
                .collect();
            (keep_graph, Partition::new(restricted), core_vertices)
        }
    };

    let q = modularity(&graph, &partition)?;
    let diagnostics = PipelineDiagnostics {
        projection_edges,
        pruned_edges,
        core_vertices,
        core_edges: graph.edge_count(),
        grid_cells: config.resolutions.len() as u32 * config.seeds_per_resolution,
    };
    let communities = build_community_reports(&graph, &partition, b, labels);
    let dot = to_dot(&graph, &partition);
    Ok(ClusterReport {
        config: config.clone(),
        q,
        communities,
        diagnostics,
        dot,
    })
}

/// Grid search over (resolution × seed) cells; the best plain-modularity
/// partition wins, ties broken by fewer communities then lexicographic
/// assignment.
fn grid_search(g: &CooccurrenceGraph, config: &ClusterConfig) -> Result<Partition, ClusterError> {
    let mut best: Option<(f64, Partition)> = None;
    let mut cell = 0u64;
    for &resolution in &config.resolutions {
        for _ in 0..config.seeds_per_resolution {
            let seed = config.base_seed.wrapping_add(cell);
            cell += 1;
            let partition = louvain(g, resolution, seed)?;
            let q = modularity(g, &partition)?;
            let take = match &best {
                None => true,
                Some((best_q, best_p)) => {
                    if q > best_q + 1e-12 {
                        true
                    } else if (q - best_q).abs() <= 1e-12 {
                        (partition.community_count(), partition.assignment())
                            < (best_p.community_count(), best_p.assignment())
                    } else {
                        false
                    }
                }
            };
            if take {
                best = Some((q, partition));
            }
        }
    }
    Ok(best.expect("grid has at least one cell").1)
}

/// Attribute distributions per community, with enrichment against the
/// corpus-wide baselines: tracker countries/categories over all labeled
/// third-parties of `b`, site TLDs over all sites of `b`.
fn build_community_reports(
    g: &CooccurrenceGraph,
    p: &Partition,
    b: &BipartiteGraph,
    labels: &LabelTable,
) -> Vec<CommunityReport> {
    let mut corpus_country: BTreeMap<String, u64> = BTreeMap::new();
    let mut corpus_category: BTreeMap<String, u64> = BTreeMap::new();
    for pld in b.third_parties() {
        if let Some(label) = labels.get(pld) {
            if !label.country.is_empty() {
                *corpus_country.entry(label.country.clone()).or_insert(0) += 1;
            }
            if !label.category.is_empty() {
                *corpus_category.entry(label.category.clone()).or_insert(0) += 1;
            }
        }
    }
    let mut corpus_tld: BTreeMap<String, u64> = BTreeMap::new();
    for site in b.sites() {
        *corpus_tld.entry(site.tld().to_string()).or_insert(0) += 1;
    }

    let mut reports = Vec::new();
    for (id, members) in p.members().into_iter().enumerate() {
        let mut country_histogram = BTreeMap::new();
        let mut category_histogram = BTreeMap::new();
        let mut member_names = Vec::with_capacity(members.len());
        let mut member_sites: Vec<u32> = Vec::new();
        for &v in &members {
            let pld = &g.vertices()[v as usize];
            member_names.push(pld.to_string());
            if let Some(label) = labels.get(pld) {
                if !label.country.is_empty() {
                    *country_histogram.entry(label.country.clone()).or_insert(0) += 1;
                }
                if !label.category.is_empty() {
                    *category_histogram
                        .entry(label.category.clone())
                        .or_insert(0) += 1;
                }
            }
            if let Some(t) = b.third_party_index(pld) {
                member_sites.extend_from_slice(b.sites_of(t));
            }
        }
        member_sites.sort_unstable();
        member_sites.dedup();
        let mut tld_histogram: BTreeMap<String, u64> = BTreeMap::new();
        for &s in &member_sites {
            *tld_histogram
                .entry(b.sites()[s as usize].tld().to_string())
                .or_insert(0) += 1;
        }
        reports.push(CommunityReport {
            id: id as u32,
            country_enrichment: enrichment(&country_histogram, &corpus_country),
            category_enrichment: enrichment(&category_histogram, &corpus_category),
            tld_enrichment: enrichment(&tld_histogram, &corpus_tld),
            members: member_names,
            country_histogram,
            category_histogram,
            tld_histogram,
        });
    }
    reports
}

fn enrichment(
    cluster: &BTreeMap<String, u64>,
    corpus: &BTreeMap<String, u64>,
) -> BTreeMap<String, f64> {
    let cluster_total: u64 = cluster.values().sum();
    let corpus_total: u64 = corpus.values().sum();
    if cluster_total == 0 || corpus_total == 0 {
        return BTreeMap::new();
    }
    cluster
        .iter()
        .filter_map(|(key, &count)| {
            let base = *corpus.get(key)?;
            let cluster_share = count as f64 / cluster_total as f64;
            let corpus_share = base as f64 / corpus_total as f64;
            Some((key.clone(), cluster_share / corpus_share))
        })
        .collect()
}

const DOT_PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

/// DOT rendering with one color per community; deterministic ordering.
pub fn to_dot(g: &CooccurrenceGraph, p: &Partition) -> String {
    let mut out = String::from("graph cooccurrence {\n  node [style=filled];\n");
    for v in 0..g.vertex_count() as u32 {
        let comm = p.community_of(v);
        let color = DOT_PALETTE[comm as usize % DOT_PALETTE.len()];
        out.push_str(&format!(
            "  \"{}\" [community={} fillcolor=\"{}\"];\n",
            g.vertices()[v as usize],
            comm,
            color
        ));
    }
    for (a, b, w) in g.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\" [weight={}];\n",
            g.vertices()[a as usize],
            g.vertices()[b as usize],
            w
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pld::PayLevelDomain;

    fn pld(s: &str) -> PayLevelDomain {
        PayLevelDomain::from_resolved(s)
    }

    fn cograph(n: usize, edges: &[(u32, u32, u32)]) -> CooccurrenceGraph {
        let vertices: Vec<_> = (0..n).map(|i| pld(&format!("v{i:02}.example"))).collect();
        CooccurrenceGraph::from_parts(vertices, edges, vec![0; n])
    }

    #[test]
    fn modularity_single_community_is_zero() {
        let g = cograph(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let p = Partition::new(vec![0, 0, 0]);
        let q = modularity(&g, &p).unwrap();
        assert!(q.abs() < 1e-12);
    }

    #[test]
    fn modularity_two_triangles_is_half() {
        let g = cograph(6, &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)]);
        let p = Partition::new(vec![0, 0, 0, 1, 1, 1]);
        let q = modularity(&g, &p).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn modularity_singleton_triangle_is_minus_third() {
        let g = cograph(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
        let p = Partition::singletons(3);
        let q = modularity(&g, &p).unwrap();
        assert!((q + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn modularity_requires_edges_and_cover() {
        let g = cograph(3, &[]);
        assert!(matches!(
            modularity(&g, &Partition::singletons(3)),
            Err(ClusterError::NoEdges)
        ));
        let g = cograph(3, &[(0, 1, 1)]);
        assert!(matches!(
            modularity(&g, &Partition::singletons(2)),
            Err(ClusterError::MismatchedPartition { .. })
        ));
    }

    fn two_cliques() -> CooccurrenceGraph {
        let mut edges = Vec::new();
        for block in 0..2u32 {
            let base = block * 4;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    edges.push((base + i, base + j, 1));
                }
            }
        }
        edges.push((0, 4, 1)); // bridge
        cograph(8, &edges)
    }

    #[test]
    fn louvain_recovers_two_cliques() {
        let g = two_cliques();
        for seed in 0..5 {
            let p = louvain(&g, 1.0, seed).unwrap();
            assert_eq!(p.community_count(), 2, "seed {seed}");
            assert_eq!(p.assignment()[..4], [0, 0, 0, 0]);
            assert_eq!(p.assignment()[4..], [1, 1, 1, 1]);
        }
    }

    #[test]
    fn louvain_never_underperforms_singletons() {
        let g = two_cliques();
        let p = louvain(&g, 1.0, 3).unwrap();
        let q = modularity(&g, &p).unwrap();
        let q_single = modularity(&g, &Partition::singletons(8)).unwrap();
        assert!(q >= q_single);
    }

    #[test]
    fn louvain_rejects_empty_and_edgeless() {
        let g = cograph(0, &[]);
        assert!(matches!(louvain(&g, 1.0, 0), Err(ClusterError::EmptyGraph)));
        let g = cograph(3, &[]);
        assert!(matches!(louvain(&g, 1.0, 0), Err(ClusterError::NoEdges)));
    }

    #[test]
    fn louvain_is_deterministic_per_seed() {
        let g = two_cliques();
        let a = louvain(&g, 1.0, 11).unwrap();
        let b = louvain(&g, 1.0, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn partition_ids_are_contiguous_from_zero() {
        let p = Partition::new(vec![7, 3, 7, 9]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.community_count(), 3);
    }

    #[test]
    fn dot_output_is_deterministic() {
        let g = two_cliques();
        let p = louvain(&g, 1.0, 0).unwrap();
        assert_eq!(to_dot(&g, &p), to_dot(&g, &p));
        assert!(to_dot(&g, &p).starts_with("graph cooccurrence {"));
    }
}
