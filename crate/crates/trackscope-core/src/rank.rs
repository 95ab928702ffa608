//! PageRank over the hyperlink network and the prevalence measures built
//! on it: rank share, domain share, per-country company shares and the
//! dominance indicator.
//!
//! Rank share of a third-party t over a domain set D is the PageRank mass
//! of the sites in D that embed t, normalized by the PageRank mass of D;
//! domain share is the unweighted analogue |t(D)| / |D|.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BipartiteGraph, HyperlinkGraph};
use crate::labels::{CategoryMap, Criticality, LabelTable};
use crate::pld::PayLevelDomain;

/// ccTLD → country table bundled with the crate (50 rows; `.com` and
/// `.us` are deliberately absent from country-level analyses).
pub const BUNDLED_CCTLD_TABLE: &str = include_str!("../data/cctld_countries.csv");

#[derive(Debug, Error)]
pub enum RankError {
    #[error("hyperlink graph is empty")]
    EmptyGraph,
    #[error("domain set {0:?} is empty")]
    EmptyDomainSet(String),
    #[error("no ranked domain in set {0:?} (zero PageRank mass)")]
    ZeroRankMass(String),
    #[error("company {0:?} owns no labeled PLD")]
    UnknownCompany(String),
    #[error("no company rows for domain set {0:?}")]
    NoCompanyRows(String),
    #[error("rank tsv line {line} is malformed")]
    BadRankLine { line: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// How dangling-node mass is handled each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DanglingMode {
    /// Redistribute dangling mass uniformly over all vertices (default).
    Uniform,
    /// Treat dangling vertices as linking only to themselves.
    SelfLoop,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PagerankParams {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: u32,
    pub dangling: DanglingMode,
}

impl Default for PagerankParams {
    fn default() -> Self {
        PagerankParams {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
            dangling: DanglingMode::Uniform,
        }
    }
}

/// PageRank scores per PLD; entries sum to 1 within 1e-9.
#[derive(Debug, Clone)]
pub struct RankVector {
    entries: Vec<(PayLevelDomain, f64)>,
    pub converged: bool,
    pub iterations: u32,
    /// L1 change of the final iteration.
    pub residual: f64,
}

impl RankVector {
    pub fn score(&self, pld: &PayLevelDomain) -> Option<f64> {
        self.entries
            .binary_search_by(|(p, _)| p.cmp(pld))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PayLevelDomain, f64)> {
        self.entries.iter().map(|(p, s)| (p, *s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|(_, s)| s).sum()
    }

    /// Writes `pld<TAB>score` rows with 17 significant digits.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (pld, score) in &self.entries {
            writeln!(out, "{pld}\t{score:.16e}")?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(input: R) -> Result<Self, RankError> {
        let mut entries = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let Some((pld, score)) = line.split_once('\t') else {
                return Err(RankError::BadRankLine { line: idx + 1 });
            };
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|_| RankError::BadRankLine { line: idx + 1 })?;
            entries.push((PayLevelDomain::from_resolved(pld.trim()), score));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(RankVector {
            entries,
            converged: true,
            iterations: 0,
            residual: 0.0,
        })
    }

    /// Builds a rank vector from explicit entries; used by tests and by
    /// callers that load scores from other sources.
    pub fn from_entries(mut entries: Vec<(PayLevelDomain, f64)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        RankVector {
            entries,
            converged: true,
            iterations: 0,
            residual: 0.0,
        }
    }
}

/// Power iteration with uniform teleport. Dangling mass is redistributed
/// according to `params.dangling` every iteration; iteration stops when
/// the L1 change drops below `tol` or after `max_iter` rounds (reported
/// via [`RankVector::converged`], never an error). The result is
/// normalized to sum exactly 1.
pub fn pagerank(g: &HyperlinkGraph, params: &PagerankParams) -> Result<RankVector, RankError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(RankError::EmptyGraph);
    }
    let nf = n as f64;
    let d = params.damping;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0f64; n];
    let mut iterations = 0;
    let mut converged = false;
    let mut residual = f64::INFINITY;

    while iterations < params.max_iter {
        next.fill(0.0);
        let mut dangling_mass = 0.0;
        for v in 0..n {
            let out = g.out_edges(v as u32);
            if out.is_empty() {
                match params.dangling {
                    DanglingMode::Uniform => dangling_mass += x[v],
                    DanglingMode::SelfLoop => next[v] += d * x[v],
                }
            } else {
                let share = d * x[v] / out.len() as f64;
                for &w in out {
                    next[w as usize] += share;
                }
            }
        }
        let teleport = (1.0 - d) / nf + d * dangling_mass / nf;
        for value in next.iter_mut() {
            *value += teleport;
        }
        residual = x
            .iter()
            .zip(next.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut x, &mut next);
        iterations += 1;
        if residual < params.tol {
            converged = true;
            break;
        }
    }

    let total: f64 = x.iter().sum();
    if total > 0.0 {
        for value in x.iter_mut() {
            *value /= total;
        }
    }
    let entries = g
        .vertices()
        .iter()
        .cloned()
        .zip(x.iter().copied())
        .collect();
    Ok(RankVector {
        entries,
        converged,
        iterations,
        residual,
    })
}

/// A set of site PLDs to inspect, tied to the left vertex set of a
/// specific bipartite graph.
#[derive(Debug, Clone)]
pub struct DomainSet {
    label: String,
    /// Sorted site indices into the graph the set was built from.
    sites: Vec<u32>,
}

impl DomainSet {
    /// All sites of the graph.
    pub fn all(g: &BipartiteGraph) -> DomainSet {
        DomainSet {
            label: "all".to_string(),
            sites: (0..g.sites().len() as u32).collect(),
        }
    }

    /// Sites whose PLD ends in the given top-level domain.
    pub fn tld(g: &BipartiteGraph, tld: &str) -> DomainSet {
        let tld = tld.trim_start_matches('.').to_ascii_lowercase();
        let sites = g
            .sites()
            .iter()
            .enumerate()
            .filter(|(_, pld)| pld.tld() == tld)
            .map(|(i, _)| i as u32)
            .collect();
        DomainSet {
            label: format!("tld:{tld}"),
            sites,
        }
    }

    /// Sites mapped to the given category.
    pub fn category(g: &BipartiteGraph, map: &CategoryMap, category: &str) -> DomainSet {
        let sites = g
            .sites()
            .iter()
            .enumerate()
            .filter(|(_, pld)| map.get(pld).is_some_and(|(c, _)| c == category))
            .map(|(i, _)| i as u32)
            .collect();
        DomainSet {
            label: format!("category:{category}"),
            sites,
        }
    }

    /// Sites mapped to any category of the given criticality.
    pub fn criticality(g: &BipartiteGraph, map: &CategoryMap, crit: Criticality) -> DomainSet {
        let sites = g
            .sites()
            .iter()
            .enumerate()
            .filter(|(_, pld)| map.get(pld).is_some_and(|(_, k)| k == crit))
            .map(|(i, _)| i as u32)
            .collect();
        DomainSet {
            label: format!("criticality:{}", crit.as_str()),
            sites,
        }
    }

    pub fn from_site_indices(label: impl Into<String>, mut sites: Vec<u32>) -> DomainSet {
        sites.sort_unstable();
        sites.dedup();
        DomainSet {
            label: label.into(),
            sites,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn site_indices(&self) -> &[u32] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    fn contains(&self, site: u32) -> bool {
        self.sites.binary_search(&site).is_ok()
    }
}

/// What to compute a share for: a single third-party PLD or all PLDs of a
/// company.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShareTarget {
    Pld(PayLevelDomain),
    Company(String),
}

impl ShareTarget {
    /// The sorted site indices (within `g`) embedding this target; for a
    /// company this is the union over its labeled PLDs.
    fn sites_embedding(
        &self,
        g: &BipartiteGraph,
        labels: Option<&LabelTable>,
    ) -> Result<Vec<u32>, RankError> {
        match self {
            ShareTarget::Pld(pld) => Ok(g
                .third_party_index(pld)
                .map(|t| g.sites_of(t).to_vec())
                .unwrap_or_default()),
            ShareTarget::Company(name) => {
                let labels = labels.ok_or_else(|| RankError::UnknownCompany(name.clone()))?;
                let plds = labels.plds_of_company(name);
                if plds.is_empty() {
                    return Err(RankError::UnknownCompany(name.clone()));
                }
                let mut union = BTreeSet::new();
                for pld in plds {
                    if let Some(t) = g.third_party_index(pld) {
                        union.extend(g.sites_of(t).iter().copied());
                    }
                }
                Ok(union.into_iter().collect())
            }
        }
    }
}

/// Rank share ρ of `target` over `set`: PageRank mass of the sites in the
/// set embedding the target, over the PageRank mass of the whole set.
/// Sites without a score carry zero mass.
pub fn rank_share(
    set: &DomainSet,
    target: &ShareTarget,
    g: &BipartiteGraph,
    ranks: &RankVector,
    labels: Option<&LabelTable>,
) -> Result<f64, RankError> {
    if set.is_empty() {
        return Err(RankError::EmptyDomainSet(set.label.clone()));
    }
    let denominator: f64 = set
        .sites
        .iter()
        .map(|&s| ranks.score(&g.sites()[s as usize]).unwrap_or(0.0))
        .sum();
    if denominator <= 0.0 {
        return Err(RankError::ZeroRankMass(set.label.clone()));
    }
    let numerator: f64 = target
        .sites_embedding(g, labels)?
        .into_iter()
        .filter(|&s| set.contains(s))
        .map(|s| ranks.score(&g.sites()[s as usize]).unwrap_or(0.0))
        .sum();
    Ok(numerator / denominator)
}

/// Domain share d of `target` over `set`: |t(D)| / |D|.
pub fn domain_share(
    set: &DomainSet,
    target: &ShareTarget,
    g: &BipartiteGraph,
    labels: Option<&LabelTable>,
) -> Result<f64, RankError> {
    if set.is_empty() {
        return Err(RankError::EmptyDomainSet(set.label.clone()));
    }
    let covered = target
        .sites_embedding(g, labels)?
        .into_iter()
        .filter(|&s| set.contains(s))
        .count();
    Ok(covered as f64 / set.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanyShareRow {
    pub company: String,
    pub rank_share: f64,
    pub domain_share: f64,
}

/// Per-company shares over a domain set, sorted by rank share descending
/// (ties broken lexicographically by company name).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanyShareTable {
    pub domain_set: String,
    pub rows: Vec<CompanyShareRow>,
}

impl CompanyShareTable {
    /// Writes the `company,rank_share,domain_share` CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["company", "rank_share", "domain_share"])?;
        for row in &self.rows {
            w.write_record([
                row.company.as_str(),
                &format!("{}", row.rank_share),
                &format!("{}", row.domain_share),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Computes rank and domain share for every labeled company owning at
/// least one third-party present in `g`.
pub fn company_shares(
    set: &DomainSet,
    labels: &LabelTable,
    g: &BipartiteGraph,
    ranks: &RankVector,
) -> Result<CompanyShareTable, RankError> {
    if set.is_empty() {
        return Err(RankError::EmptyDomainSet(set.label.clone()));
    }
    let mut rows = Vec::new();
    for company in labels.companies() {
        let owns_present_pld = labels
            .plds_of_company(company)
            .iter()
            .any(|pld| g.third_party_index(pld).is_some());
        if !owns_present_pld {
            continue;
        }
        let target = ShareTarget::Company(company.to_string());
        rows.push(CompanyShareRow {
            company: company.to_string(),
            rank_share: rank_share(set, &target, g, ranks, Some(labels))?,
            domain_share: domain_share(set, &target, g, Some(labels))?,
        });
    }
    rows.sort_by(|a, b| {
        b.rank_share
            .partial_cmp(&a.rank_share)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.company.cmp(&b.company))
    });
    Ok(CompanyShareTable {
        domain_set: set.label.clone(),
        rows,
    })
}

/// Default company set for the dominance indicator.
pub fn default_dominant_companies() -> BTreeSet<String> {
    ["Google", "Facebook", "Twitter"]
        .into_iter()
        .map(str::to_string)
        .collect()
}

/// True iff the given companies hold more than half of the rank-share
/// mass accumulated by the top-ten companies of the set.
pub fn dominance(
    set: &DomainSet,
    labels: &LabelTable,
    g: &BipartiteGraph,
    ranks: &RankVector,
    companies: &BTreeSet<String>,
) -> Result<bool, RankError> {
    let table = company_shares(set, labels, g, ranks)?;
    if table.rows.is_empty() {
        return Err(RankError::NoCompanyRows(set.label.clone()));
    }
    let top = &table.rows[..table.rows.len().min(10)];
    let total: f64 = top.iter().map(|r| r.rank_share).sum();
    let mass: f64 = top
        .iter()
        .filter(|r| companies.contains(&r.company))
        .map(|r| r.rank_share)
        .sum();
    Ok(mass > 0.5 * total)
}

/// The bundled ccTLD → country table, parsed once.
pub fn cctld_countries() -> &'static BTreeMap<String, String> {
    static TABLE: OnceLock<BTreeMap<String, String>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut map = BTreeMap::new();
        let mut reader = csv::Reader::from_reader(BUNDLED_CCTLD_TABLE.as_bytes());
        for row in reader.deserialize::<(String, String)>() {
            let (tld, country) = row.expect("bundled country table parses");
            map.insert(tld, country);
        }
        map
    })
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

    fn uniform_ranks(g: &BipartiteGraph) -> RankVector {
        let n = g.sites().len() as f64;
        RankVector::from_entries(
            g.sites()
                .iter()
                .map(|p| (p.clone(), 1.0 / n))
                .collect(),
        )
    }

    #[test]
    fn two_cycle_is_symmetric() {
        let g = HyperlinkGraph::from_pairs(
            vec![(pld("a.com"), pld("b.com")), (pld("b.com"), pld("a.com"))],
            false,
        )
        .unwrap();
        let r = pagerank(&g, &PagerankParams::default()).unwrap();
        assert!((r.score(&pld("a.com")).unwrap() - 0.5).abs() < 1e-12);
        assert!((r.score(&pld("b.com")).unwrap() - 0.5).abs() < 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn single_dangling_vertex_normalizes_to_one() {
        let g = HyperlinkGraph::from_pairs(vec![(pld("a.com"), pld("a.com"))], false).unwrap();
        assert_eq!(g.edge_count(), 0);
        let r = pagerank(&g, &PagerankParams::default()).unwrap();
        assert!((r.score(&pld("a.com")).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scores_sum_to_one() {
        let g = HyperlinkGraph::from_pairs(
            vec![
                (pld("a.com"), pld("b.com")),
                (pld("b.com"), pld("c.com")),
                (pld("d.com"), pld("a.com")),
            ],
            false,
        )
        .unwrap();
        for mode in [DanglingMode::Uniform, DanglingMode::SelfLoop] {
            let params = PagerankParams {
                dangling: mode,
                ..Default::default()
            };
            let r = pagerank(&g, &params).unwrap();
            assert!((r.sum() - 1.0).abs() < 1e-9, "sum off in {mode:?}");
        }
    }

    #[test]
    fn rank_share_full_coverage_is_one() {
        let g = graph(&[("a.com", "t.net"), ("b.com", "t.net"), ("c.com", "t.net")]);
        let set = DomainSet::all(&g);
        let r = uniform_ranks(&g);
        let share = rank_share(&set, &ShareTarget::Pld(pld("t.net")), &g, &r, None).unwrap();
        assert!((share - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_ranks_reduce_rank_share_to_domain_share() {
        let g = graph(&[
            ("a.com", "t.net"),
            ("b.com", "other.org"),
            ("c.com", "other.org"),
            ("d.com", "other.org"),
        ]);
        let set = DomainSet::all(&g);
        let r = uniform_ranks(&g);
        let target = ShareTarget::Pld(pld("t.net"));
        let rs = rank_share(&set, &target, &g, &r, None).unwrap();
        let ds = domain_share(&set, &target, &g, None).unwrap();
        assert!((rs - 0.25).abs() < 1e-15);
        assert!((ds - 0.25).abs() < 1e-15);
    }

    #[test]
    fn absent_target_has_zero_share() {
        let g = graph(&[("a.com", "t.net")]);
        let set = DomainSet::all(&g);
        let ds = domain_share(&set, &ShareTarget::Pld(pld("ghost.io")), &g, None).unwrap();
        assert_eq!(ds, 0.0);
    }

    #[test]
    fn empty_domain_set_errors() {
        let g = graph(&[("a.com", "t.net")]);
        let set = DomainSet::tld(&g, "zz");
        assert!(set.is_empty());
        assert!(matches!(
            domain_share(&set, &ShareTarget::Pld(pld("t.net")), &g, None),
            Err(RankError::EmptyDomainSet(_))
        ));
    }

    #[test]
    fn zero_rank_mass_errors() {
        let g = graph(&[("a.com", "t.net")]);
        let set = DomainSet::all(&g);
        let r = RankVector::from_entries(vec![]);
        assert!(matches!(
            rank_share(&set, &ShareTarget::Pld(pld("t.net")), &g, &r, None),
            Err(RankError::ZeroRankMass(_))
        ));
    }

    #[test]
    fn company_union_counts_shared_sites_once() {
        // Both Google PLDs embedded on a.com; union must count a.com once.
        let g = graph(&[
            ("a.com", "google-analytics.com"),
            ("a.com", "doubleclick.net"),
            ("b.com", "doubleclick.net"),
            ("c.com", "other.org"),
            ("d.com", "other.org"),
        ]);
        let labels = LabelTable::from_reader(
            "pld,company,category,country,is_tracker\n\
             google-analytics.com,Google,analytics,US,true\n\
             doubleclick.net,Google,ads,US,true\n\
             other.org,Other,ads,DE,true\n"
                .as_bytes(),
        )
        .unwrap();
        let set = DomainSet::all(&g);
        let ds = domain_share(
            &set,
            &ShareTarget::Company("Google".into()),
            &g,
            Some(&labels),
        )
        .unwrap();
        assert!((ds - 0.5).abs() < 1e-15); // a.com and b.com out of 4
    }

    #[test]
    fn company_shares_sorted_and_dominance() {
        let g = graph(&[
            ("a.com", "google-analytics.com"),
            ("b.com", "google-analytics.com"),
            ("c.com", "google-analytics.com"),
            ("a.com", "nische.de"),
        ]);
        let labels = LabelTable::from_reader(
            "pld,company,category,country,is_tracker\n\
             google-analytics.com,Google,analytics,US,true\n\
             nische.de,Nische,ads,DE,true\n"
                .as_bytes(),
        )
        .unwrap();
        let set = DomainSet::all(&g);
        let r = uniform_ranks(&g);
        let table = company_shares(&set, &labels, &g, &r).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].company, "Google");
        assert!(table.rows[0].rank_share > table.rows[1].rank_share);

        assert!(dominance(&set, &labels, &g, &r, &default_dominant_companies()).unwrap());
        let only_nische: BTreeSet<String> = ["Nische".to_string()].into();
        assert!(!dominance(&set, &labels, &g, &r, &only_nische).unwrap());
    }

    #[test]
    fn rank_vector_tsv_roundtrip() {
        let r = RankVector::from_entries(vec![
            (pld("a.com"), 0.25),
            (pld("b.com"), 0.7500000000000001),
        ]);
        let mut buf = Vec::new();
        r.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains('\t'));
        let back = RankVector::read_tsv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back.score(&pld("a.com")), Some(0.25));
        assert_eq!(back.score(&pld("b.com")), Some(0.7500000000000001));
    }

    #[test]
    fn bundled_country_table_has_fifty_rows() {
        let table = cctld_countries();
        assert_eq!(table.len(), 50);
        assert_eq!(table.get("de").map(String::as_str), Some("Germany"));
        assert!(!table.contains_key("com"));
        assert!(!table.contains_key("us"));
    }
}
