//! In-memory network structures: the bipartite third-party/tracking
//! networks, the directed hyperlink network, and the tracker co-occurrence
//! projection.
//!
//! All graphs use deterministic lexicographic vertex numbering so that
//! downstream reports are byte-reproducible run to run. Construction
//! returns immutable values that are safe to share across threads.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::PathBuf;

use thiserror::Error;

use crate::extract::EmbeddingEdge;
use crate::labels::LabelTable;
use crate::pld::PayLevelDomain;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate edge for ({site}, {third_party}); edges must be pre-aggregated")]
    DuplicateEdge {
        site: PayLevelDomain,
        third_party: PayLevelDomain,
    },
    #[error("{side} vertex set is empty")]
    EmptySide { side: &'static str },
    #[error("hyperlink tsv line {line} is not `src<TAB>dst`")]
    BadHyperlinkLine { line: usize },
    #[error("io error reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Which side of the bipartite graph an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Website PLDs.
    Left,
    /// Third-party PLDs.
    Right,
}

/// Sites × third-parties incidence structure. Incidence is presence-based
/// (an edge means "embedded at least once"); page counts are carried as
/// optional edge weights for reporting only.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    sites: Vec<PayLevelDomain>,
    third_parties: Vec<PayLevelDomain>,
    /// Per site, sorted third-party indices.
    site_adj: Vec<Vec<u32>>,
    /// Per site, page counts parallel to `site_adj`.
    site_weights: Vec<Vec<u32>>,
    /// Per third-party, sorted site indices.
    tp_adj: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    /// Builds the graph from a deduplicated edge list. Vertex numbering is
    /// lexicographic on both sides. Duplicate (site, third-party) pairs
    /// signal an upstream aggregation bug and are rejected.
    pub fn build(edges: &[EmbeddingEdge]) -> Result<Self, GraphError> {
        let mut sites: Vec<PayLevelDomain> = edges.iter().map(|e| e.site.clone()).collect();
        sites.sort();
        sites.dedup();
        let mut tps: Vec<PayLevelDomain> = edges.iter().map(|e| e.third_party.clone()).collect();
        tps.sort();
        tps.dedup();

        let site_idx: HashMap<&PayLevelDomain, u32> =
            sites.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let tp_idx: HashMap<&PayLevelDomain, u32> =
            tps.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();

        let mut site_pairs: Vec<Vec<(u32, u32)>> = vec![Vec::new(); sites.len()];
        let mut tp_adj: Vec<Vec<u32>> = vec![Vec::new(); tps.len()];
        for edge in edges {
            let s = site_idx[&edge.site];
            let t = tp_idx[&edge.third_party];
            site_pairs[s as usize].push((t, edge.page_count));
            tp_adj[t as usize].push(s);
        }
        let mut site_adj = Vec::with_capacity(sites.len());
        let mut site_weights = Vec::with_capacity(sites.len());
        for (s, mut pairs) in site_pairs.into_iter().enumerate() {
            pairs.sort();
            for w in pairs.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(GraphError::DuplicateEdge {
                        site: sites[s].clone(),
                        third_party: tps[w[0].0 as usize].clone(),
                    });
                }
            }
            site_adj.push(pairs.iter().map(|&(t, _)| t).collect());
            site_weights.push(pairs.iter().map(|&(_, w)| w).collect());
        }
        for adj in &mut tp_adj {
            adj.sort_unstable();
        }
        Ok(BipartiteGraph {
            sites,
            third_parties: tps,
            site_adj,
            site_weights,
            tp_adj,
        })
    }

    pub fn sites(&self) -> &[PayLevelDomain] {
        &self.sites
    }

    pub fn third_parties(&self) -> &[PayLevelDomain] {
        &self.third_parties
    }

    pub fn site_index(&self, pld: &PayLevelDomain) -> Option<u32> {
        self.sites.binary_search(pld).ok().map(|i| i as u32)
    }

    pub fn third_party_index(&self, pld: &PayLevelDomain) -> Option<u32> {
        self.third_parties.binary_search(pld).ok().map(|i| i as u32)
    }

    /// Sorted third-party indices embedded by site `s`.
    pub fn third_parties_of(&self, s: u32) -> &[u32] {
        &self.site_adj[s as usize]
    }

    /// Sorted site indices embedding third-party `t`.
    pub fn sites_of(&self, t: u32) -> &[u32] {
        &self.tp_adj[t as usize]
    }

    pub fn page_counts_of(&self, s: u32) -> &[u32] {
        &self.site_weights[s as usize]
    }

    pub fn edge_count(&self) -> u64 {
        self.site_adj.iter().map(|a| a.len() as u64).sum()
    }

    pub fn left_degree(&self, s: u32) -> u32 {
        self.site_adj[s as usize].len() as u32
    }

    pub fn right_degree(&self, t: u32) -> u32 {
        self.tp_adj[t as usize].len() as u32
    }

    /// Exports the (sorted) edge list, inverse of [`BipartiteGraph::build`].
    pub fn to_edges(&self) -> Vec<EmbeddingEdge> {
        let mut out = Vec::with_capacity(self.edge_count() as usize);
        for (s, adj) in self.site_adj.iter().enumerate() {
            for (k, &t) in adj.iter().enumerate() {
                out.push(EmbeddingEdge {
                    site: self.sites[s].clone(),
                    third_party: self.third_parties[t as usize].clone(),
                    page_count: self.site_weights[s][k],
                });
            }
        }
        out.sort();
        out
    }

    /// Restricts the right vertex set to labeled trackers. The left set is
    /// kept as-is (sites may end up with degree zero). Also returns the
    /// number of tracker labels that are absent from this graph.
    pub fn filter_trackers(&self, labels: &LabelTable) -> (BipartiteGraph, usize) {
        let mut keep: Vec<u32> = Vec::new();
        for (t, pld) in self.third_parties.iter().enumerate() {
            if labels.is_tracker(pld) {
                keep.push(t as u32);
            }
        }
        let missing = labels
            .tracker_plds()
            .iter()
            .filter(|pld| self.third_parties.binary_search(pld).is_err())
            .count();

        let mut remap = vec![u32::MAX; self.third_parties.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let third_parties: Vec<PayLevelDomain> = keep
            .iter()
            .map(|&t| self.third_parties[t as usize].clone())
            .collect();
        let tp_adj: Vec<Vec<u32>> = keep
            .iter()
            .map(|&t| self.tp_adj[t as usize].clone())
            .collect();
        let mut site_adj = Vec::with_capacity(self.sites.len());
        let mut site_weights = Vec::with_capacity(self.sites.len());
        for (s, adj) in self.site_adj.iter().enumerate() {
            let mut new_adj = Vec::new();
            let mut new_w = Vec::new();
            for (k, &t) in adj.iter().enumerate() {
                let mapped = remap[t as usize];
                if mapped != u32::MAX {
                    new_adj.push(mapped);
                    new_w.push(self.site_weights[s][k]);
                }
            }
            site_adj.push(new_adj);
            site_weights.push(new_w);
        }
        (
            BipartiteGraph {
                sites: self.sites.clone(),
                third_parties,
                site_adj,
                site_weights,
                tp_adj,
            },
            missing,
        )
    }

    /// Complementary cumulative degree distribution of one side: for each
    /// observed degree `d` in ascending order, the fraction of vertices
    /// with degree ≥ `d`. Fractions start at 1 and strictly decrease.
    pub fn degree_ccdf(&self, side: Side) -> Result<Vec<(u32, f64)>, GraphError> {
        let mut degrees: Vec<u32> = match side {
            Side::Left => self.site_adj.iter().map(|a| a.len() as u32).collect(),
            Side::Right => self.tp_adj.iter().map(|a| a.len() as u32).collect(),
        };
        if degrees.is_empty() {
            return Err(GraphError::EmptySide {
                side: match side {
                    Side::Left => "left",
                    Side::Right => "right",
                },
            });
        }
        degrees.sort_unstable();
        let n = degrees.len() as f64;
        let mut out = Vec::new();
        let mut i = 0;
        while i < degrees.len() {
            let d = degrees[i];
            let ge = degrees.len() - i;
            out.push((d, ge as f64 / n));
            while i < degrees.len() && degrees[i] == d {
                i += 1;
            }
        }
        Ok(out)
    }

    /// One-mode projection A = BᵀB on the third-party side: vertices are
    /// the third-parties, the weight of (t1, t2) counts the sites
    /// embedding both, and the diagonal (each tracker's site count) is
    /// exposed as a per-vertex attribute. Computed by per-site pair
    /// emission rather than a dense product.
    pub fn one_mode_projection(&self) -> CooccurrenceGraph {
        let mut pair_counts: HashMap<(u32, u32), u32> = HashMap::new();
        for adj in &self.site_adj {
            for (i, &a) in adj.iter().enumerate() {
                for &b in &adj[i + 1..] {
                    *pair_counts.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        let n = self.third_parties.len();
        let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for (&(a, b), &w) in &pair_counts {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let site_degree = (0..n as u32).map(|t| self.right_degree(t)).collect();
        CooccurrenceGraph {
            vertices: self.third_parties.clone(),
            adj,
            site_degree,
        }
    }
}

/// Directed PLD→PLD hyperlink network. Parallel edges are collapsed;
/// self-loops are dropped unless explicitly kept.
#[derive(Debug, Clone)]
pub struct HyperlinkGraph {
    vertices: Vec<PayLevelDomain>,
    out_edges: Vec<Vec<u32>>,
}

impl HyperlinkGraph {
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (PayLevelDomain, PayLevelDomain)>,
        keep_self_loops: bool,
    ) -> Result<Self, GraphError> {
        let pairs: Vec<(PayLevelDomain, PayLevelDomain)> = pairs.into_iter().collect();
        let mut vertices: Vec<PayLevelDomain> = Vec::with_capacity(pairs.len() * 2);
        for (src, dst) in &pairs {
            vertices.push(src.clone());
            vertices.push(dst.clone());
        }
        vertices.sort();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(GraphError::EmptySide { side: "vertex" });
        }
        let index: HashMap<&PayLevelDomain, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i as u32))
            .collect();
        let mut out_edges: Vec<Vec<u32>> = vec![Vec::new(); vertices.len()];
        for (src, dst) in &pairs {
            let s = index[src];
            let d = index[dst];
            if s == d && !keep_self_loops {
                continue;
            }
            out_edges[s as usize].push(d);
        }
        for adj in &mut out_edges {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(HyperlinkGraph {
            vertices,
            out_edges,
        })
    }

    /// Reads `src_pld<TAB>dst_pld` rows.
    pub fn read_tsv<R: BufRead>(input: R, keep_self_loops: bool) -> Result<Self, GraphError> {
        let mut pairs = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line.map_err(|source| GraphError::Io {
                path: PathBuf::from("<hyperlink tsv>"),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let Some((src, dst)) = line.split_once('\t') else {
                return Err(GraphError::BadHyperlinkLine { line: idx + 1 });
            };
            pairs.push((
                PayLevelDomain::from_resolved(src.trim()),
                PayLevelDomain::from_resolved(dst.trim()),
            ));
        }
        Self::from_pairs(pairs, keep_self_loops)
    }

    pub fn vertices(&self) -> &[PayLevelDomain] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn out_edges(&self, v: u32) -> &[u32] {
        &self.out_edges[v as usize]
    }

    pub fn edge_count(&self) -> u64 {
        self.out_edges.iter().map(|a| a.len() as u64).sum()
    }
}

/// Undirected weighted tracker–tracker co-occurrence graph (the one-mode
/// projection with the diagonal split out).
#[derive(Debug, Clone)]
pub struct CooccurrenceGraph {
    vertices: Vec<PayLevelDomain>,
    /// Per vertex, sorted (neighbor, weight) pairs; symmetric.
    adj: Vec<Vec<(u32, u32)>>,
    /// Diagonal of A: the number of sites embedding each tracker.
    site_degree: Vec<u32>,
}

impl CooccurrenceGraph {
    pub fn vertices(&self) -> &[PayLevelDomain] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Number of sites embedding tracker `v` (the diagonal of A).
    pub fn site_degree(&self, v: u32) -> u32 {
        self.site_degree[v as usize]
    }

    pub fn site_degrees(&self) -> &[u32] {
        &self.site_degree
    }

    pub fn weight(&self, a: u32, b: u32) -> Option<u32> {
        self.adj[a as usize]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| self.adj[a as usize][i].1)
    }

    pub fn edge_count(&self) -> u64 {
        self.adj.iter().map(|a| a.len() as u64).sum::<u64>() / 2
    }

    /// Undirected edges as (a, b, weight) with a < b, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .filter(move |&&(b, _)| (a as u32) < b)
                .map(move |&(b, w)| (a as u32, b, w))
        })
    }

    /// Keeps the vertices flagged in `keep`, re-indexing but preserving
    /// relative (lexicographic) order.
    pub fn subgraph(&self, keep: &[bool]) -> CooccurrenceGraph {
        assert_eq!(keep.len(), self.vertices.len());
        let mut remap = vec![u32::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        let mut site_degree = Vec::new();
        for (old, &k) in keep.iter().enumerate() {
            if k {
                remap[old] = vertices.len() as u32;
                vertices.push(self.vertices[old].clone());
                site_degree.push(self.site_degree[old]);
            }
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        for (old, list) in self.adj.iter().enumerate() {
            if remap[old] == u32::MAX {
                continue;
            }
            let new = remap[old] as usize;
            for &(nbr, w) in list {
                if remap[nbr as usize] != u32::MAX {
                    adj[new].push((remap[nbr as usize], w));
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        CooccurrenceGraph {
            vertices,
            adj,
            site_degree,
        }
    }

    /// Maximal subgraph in which every vertex has at least `k` neighbors,
    /// obtained by iterative peeling. May be empty.
    pub fn k_core(&self, k: u32) -> CooccurrenceGraph {
        let n = self.vertices.len();
        let mut degree: Vec<usize> = (0..n).map(|v| self.adj[v].len()).collect();
        let mut alive = vec![true; n];
        let mut queue: Vec<usize> = (0..n).filter(|&v| degree[v] < k as usize).collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &(nbr, _) in &self.adj[v] {
                let nbr = nbr as usize;
                if alive[nbr] {
                    degree[nbr] -= 1;
                    if degree[nbr] < k as usize {
                        queue.push(nbr);
                    }
                }
            }
        }
        self.subgraph(&alive)
    }

    /// Rebuilds the graph keeping only the given undirected edges
    /// (`a < b` pairs with weights). Vertices are preserved.
    pub fn with_edges(&self, edges: &[(u32, u32, u32)]) -> CooccurrenceGraph {
        let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.vertices.len()];
        for &(a, b, w) in edges {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        CooccurrenceGraph {
            vertices: self.vertices.clone(),
            adj,
            site_degree: self.site_degree.clone(),
        }
    }

    /// Builds a co-occurrence graph directly from parts; intended for
    /// tests and synthetic inputs.
    pub fn from_parts(
        vertices: Vec<PayLevelDomain>,
        edges: &[(u32, u32, u32)],
        site_degree: Vec<u32>,
    ) -> CooccurrenceGraph {
        let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); vertices.len()];
        for &(a, b, w) in edges {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        CooccurrenceGraph {
            vertices,
            adj,
            site_degree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pld(s: &str) -> PayLevelDomain {
        PayLevelDomain::from_resolved(s)
    }

    fn edge(site: &str, tp: &str, count: u32) -> EmbeddingEdge {
        EmbeddingEdge {
            site: pld(site),
            third_party: pld(tp),
            page_count: count,
        }
    }

    fn mini() -> BipartiteGraph {
        // 4 sites, 5 third-parties, 8 edges.
        BipartiteGraph::build(&[
            edge("a.com", "t1.net", 2),
            edge("a.com", "t2.net", 1),
            edge("b.com", "t1.net", 1),
            edge("b.com", "t3.org", 4),
            edge("c.de", "t2.net", 1),
            edge("c.de", "t4.io", 1),
            edge("d.fr", "t5.ru", 3),
            edge("d.fr", "t1.net", 1),
        ])
        .unwrap()
    }

    #[test]
    fn builds_mini_fixture() {
        let g = mini();
        assert_eq!(g.sites().len(), 4);
        assert_eq!(g.third_parties().len(), 5);
        assert_eq!(g.edge_count(), 8);
        let left: u64 = (0..4).map(|s| g.left_degree(s) as u64).sum();
        let right: u64 = (0..5).map(|t| g.right_degree(t) as u64).sum();
        assert_eq!(left, 8);
        assert_eq!(right, 8);
    }

    #[test]
    fn empty_edge_list_builds_empty_graph() {
        let g = BipartiteGraph::build(&[]).unwrap();
        assert_eq!(g.sites().len(), 0);
        assert_eq!(g.third_parties().len(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn duplicate_pair_is_rejected() {
        let err = BipartiteGraph::build(&[
            edge("a.com", "t1.net", 1),
            edge("a.com", "t1.net", 2),
        ])
        .unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge { .. }));
    }

    #[test]
    fn filter_trackers_keeps_left_side() {
        let labels = LabelTable::from_reader(
            "pld,company,category,country,is_tracker\n\
             t1.net,One,ads,US,true\n\
             t3.org,Three,analytics,DE,true\n\
             t9.xyz,Nine,ads,US,true\n\
             t2.net,Two,cdn,US,false\n"
                .as_bytes(),
        )
        .unwrap();
        let (tracking, missing) = mini().filter_trackers(&labels);
        assert_eq!(tracking.third_parties().len(), 2);
        assert_eq!(tracking.sites().len(), 4);
        assert_eq!(missing, 1); // t9.xyz is labeled but absent
        // c.de embeds only non-trackers and keeps degree 0.
        let c = tracking.site_index(&pld("c.de")).unwrap();
        assert_eq!(tracking.left_degree(c), 0);
    }

    #[test]
    fn degree_ccdf_small_case() {
        // right degrees: t1=3, t2=2, t3=1, t4=1, t5=1
        let got = mini().degree_ccdf(Side::Right).unwrap();
        assert_eq!(got, vec![(1, 1.0), (2, 2.0 / 5.0), (3, 1.0 / 5.0)]);
        assert!(got.windows(2).all(|w| w[0].1 > w[1].1));
    }

    #[test]
    fn degree_ccdf_empty_side_errors() {
        let g = BipartiteGraph::build(&[]).unwrap();
        assert!(matches!(
            g.degree_ccdf(Side::Right),
            Err(GraphError::EmptySide { .. })
        ));
    }

    #[test]
    fn projection_counts_shared_sites() {
        // Two sites both embedding {t1, t2}.
        let g = BipartiteGraph::build(&[
            edge("a.com", "t1.net", 1),
            edge("a.com", "t2.net", 1),
            edge("b.com", "t1.net", 1),
            edge("b.com", "t2.net", 1),
        ])
        .unwrap();
        let p = g.one_mode_projection();
        assert_eq!(p.weight(0, 1), Some(2));
        assert_eq!(p.site_degree(0), 2);
        assert_eq!(p.edge_count(), 1);
    }

    #[test]
    fn projection_has_no_edge_without_cooccurrence() {
        let g = BipartiteGraph::build(&[
            edge("a.com", "t1.net", 1),
            edge("b.com", "t2.net", 1),
        ])
        .unwrap();
        let p = g.one_mode_projection();
        assert_eq!(p.edge_count(), 0);
        assert_eq!(p.weight(0, 1), None);
    }

    #[test]
    fn single_site_single_tracker_projects_to_isolated_vertex() {
        let g = BipartiteGraph::build(&[edge("a.com", "t1.net", 1)]).unwrap();
        let p = g.one_mode_projection();
        assert_eq!(p.vertex_count(), 1);
        assert_eq!(p.edge_count(), 0);
        assert_eq!(p.site_degree(0), 1);
    }

    #[test]
    fn k_core_of_triangle_is_triangle() {
        let g = CooccurrenceGraph::from_parts(
            vec![pld("a.x"), pld("b.x"), pld("c.x")],
            &[(0, 1, 1), (1, 2, 1), (0, 2, 1)],
            vec![1, 1, 1],
        );
        let core = g.k_core(2);
        assert_eq!(core.vertex_count(), 3);
        assert_eq!(core.edge_count(), 3);
    }

    #[test]
    fn k_core_of_star_is_empty() {
        let vertices: Vec<_> = (0..6).map(|i| pld(&format!("v{i}.x"))).collect();
        let edges: Vec<_> = (1..6).map(|i| (0u32, i as u32, 1u32)).collect();
        let g = CooccurrenceGraph::from_parts(vertices, &edges, vec![1; 6]);
        let core = g.k_core(2);
        assert_eq!(core.vertex_count(), 0);
        assert_eq!(core.edge_count(), 0);
    }

    #[test]
    fn k_core_is_idempotent() {
        let vertices: Vec<_> = (0..7).map(|i| pld(&format!("v{i}.x"))).collect();
        // A triangle plus a pendant path.
        let g = CooccurrenceGraph::from_parts(
            vertices,
            &[(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1), (3, 4, 2), (4, 5, 1), (5, 6, 1)],
            vec![3; 7],
        );
        let once = g.k_core(2);
        let twice = once.k_core(2);
        assert_eq!(once.vertex_count(), twice.vertex_count());
        assert_eq!(
            once.edges().collect::<Vec<_>>(),
            twice.edges().collect::<Vec<_>>()
        );
    }

    #[test]
    fn hyperlink_graph_drops_self_loops_and_parallels() {
        let pairs = vec![
            (pld("a.com"), pld("b.com")),
            (pld("a.com"), pld("b.com")),
            (pld("b.com"), pld("b.com")),
            (pld("b.com"), pld("a.com")),
        ];
        let g = HyperlinkGraph::from_pairs(pairs.clone(), false).unwrap();
        assert_eq!(g.edge_count(), 2);
        let g_keep = HyperlinkGraph::from_pairs(pairs, true).unwrap();
        assert_eq!(g_keep.edge_count(), 3);
    }

    #[test]
    fn edge_export_roundtrips() {
        let g = mini();
        let edges = g.to_edges();
        let g2 = BipartiteGraph::build(&edges).unwrap();
        assert_eq!(g2.to_edges(), edges);
    }
}
