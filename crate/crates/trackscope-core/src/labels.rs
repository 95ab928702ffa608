//! Input tables: per-third-party labels, site category map, and country
//! indicators.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pld::PayLevelDomain;

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("duplicate label row for {0}")]
    DuplicatePld(String),
    #[error("category {category:?} maps to both criticality levels")]
    InconsistentCriticality { category: String },
    #[error("unknown criticality {0:?} (expected highly_critical or less_critical)")]
    UnknownCriticality(String),
    #[error("indicator row for tld {0:?} is not in the country table")]
    UnknownTld(String),
    #[error("indicator {field} for tld {tld} is not finite")]
    NonFiniteIndicator { tld: String, field: &'static str },
}

/// Per-third-party metadata from the labels file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThirdPartyLabel {
    pub pld: PayLevelDomain,
    pub company: String,
    pub category: String,
    pub country: String,
    pub is_tracker: bool,
}

/// The labels file, indexed by PLD.
#[derive(Debug, Clone, Default)]
pub struct LabelTable {
    rows: BTreeMap<PayLevelDomain, ThirdPartyLabel>,
}

#[derive(Debug, Deserialize)]
struct LabelRow {
    pld: String,
    company: String,
    category: String,
    country: String,
    is_tracker: bool,
}

impl LabelTable {
    /// Reads the `pld,company,category,country,is_tracker` CSV (header
    /// required, RFC 4180 quoting).
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, LabelError> {
        let mut rows = BTreeMap::new();
        let mut csv = csv::Reader::from_reader(reader);
        for row in csv.deserialize::<LabelRow>() {
            let row = row?;
            let pld = PayLevelDomain::from_resolved(row.pld.trim().to_ascii_lowercase());
            let label = ThirdPartyLabel {
                pld: pld.clone(),
                company: row.company.trim().to_string(),
                category: row.category.trim().to_string(),
                country: row.country.trim().to_string(),
                is_tracker: row.is_tracker,
            };
            if rows.insert(pld.clone(), label).is_some() {
                return Err(LabelError::DuplicatePld(pld.to_string()));
            }
        }
        Ok(LabelTable { rows })
    }

    pub fn from_path(path: &Path) -> Result<Self, LabelError> {
        Ok(Self::from_reader(std::fs::File::open(path)?)?)
    }

    pub fn get(&self, pld: &PayLevelDomain) -> Option<&ThirdPartyLabel> {
        self.rows.get(pld)
    }

    pub fn is_tracker(&self, pld: &PayLevelDomain) -> bool {
        self.rows.get(pld).is_some_and(|l| l.is_tracker)
    }

    pub fn company_of(&self, pld: &PayLevelDomain) -> Option<&str> {
        self.rows.get(pld).map(|l| l.company.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &ThirdPartyLabel> {
        self.rows.values()
    }

    /// All tracker PLDs, sorted.
    pub fn tracker_plds(&self) -> Vec<&PayLevelDomain> {
        self.rows
            .values()
            .filter(|l| l.is_tracker)
            .map(|l| &l.pld)
            .collect()
    }

    /// PLDs owned by `company`, sorted.
    pub fn plds_of_company(&self, company: &str) -> Vec<&PayLevelDomain> {
        self.rows
            .values()
            .filter(|l| l.company == company)
            .map(|l| &l.pld)
            .collect()
    }

    /// Distinct company names, sorted.
    pub fn companies(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.rows.values().map(|l| l.company.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        names
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Privacy criticality of a site category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criticality {
    HighlyCritical,
    LessCritical,
}

impl Criticality {
    pub fn as_str(self) -> &'static str {
        match self {
            Criticality::HighlyCritical => "highly_critical",
            Criticality::LessCritical => "less_critical",
        }
    }
}

/// Site PLD → (category, criticality) assignments.
#[derive(Debug, Clone, Default)]
pub struct CategoryMap {
    rows: BTreeMap<PayLevelDomain, (String, Criticality)>,
}

impl CategoryMap {
    /// Reads the `pld,category,criticality` CSV. Each category must map
    /// to a single criticality level across the whole file.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, LabelError> {
        let mut rows = BTreeMap::new();
        let mut per_category: BTreeMap<String, Criticality> = BTreeMap::new();
        let mut csv = csv::Reader::from_reader(reader);
        for row in csv.deserialize::<(String, String, String)>() {
            let (pld, category, crit) = row?;
            let crit = match crit.trim() {
                "highly_critical" => Criticality::HighlyCritical,
                "less_critical" => Criticality::LessCritical,
                other => return Err(LabelError::UnknownCriticality(other.to_string())),
            };
            let category = category.trim().to_string();
            if let Some(prev) = per_category.insert(category.clone(), crit) {
                if prev != crit {
                    return Err(LabelError::InconsistentCriticality { category });
                }
            }
            let pld = PayLevelDomain::from_resolved(pld.trim().to_ascii_lowercase());
            rows.insert(pld, (category, crit));
        }
        Ok(CategoryMap { rows })
    }

    pub fn from_path(path: &Path) -> Result<Self, LabelError> {
        Ok(Self::from_reader(std::fs::File::open(path)?)?)
    }

    pub fn get(&self, pld: &PayLevelDomain) -> Option<(&str, Criticality)> {
        self.rows.get(pld).map(|(c, k)| (c.as_str(), *k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PayLevelDomain, &str, Criticality)> {
        self.rows.iter().map(|(pld, (c, k))| (pld, c.as_str(), *k))
    }

    /// Distinct categories with their criticality, sorted by name.
    pub fn categories(&self) -> Vec<(String, Criticality)> {
        let mut cats: Vec<(String, Criticality)> = self
            .rows
            .values()
            .map(|(c, k)| (c.clone(), *k))
            .collect();
        cats.sort();
        cats.dedup();
        cats
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Country-level indicator variables keyed by ccTLD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryIndicators {
    pub tld: String,
    pub democracy: f64,
    /// Already inverted so that high values mean a free press.
    pub press_freedom: f64,
    pub english_pct: f64,
    pub ad_spend_pc: f64,
    pub ad_spend_ratio: f64,
    pub us_trade_pc: f64,
}

impl CountryIndicators {
    /// Reads the indicator CSV and validates every TLD against the
    /// country table and every value for finiteness.
    pub fn read_table<R: Read>(
        reader: R,
        country_table: &BTreeMap<String, String>,
    ) -> Result<Vec<CountryIndicators>, LabelError> {
        let mut out = Vec::new();
        let mut csv = csv::Reader::from_reader(reader);
        for row in csv.deserialize::<CountryIndicators>() {
            let mut row = row?;
            row.tld = row.tld.trim().to_ascii_lowercase();
            if !country_table.contains_key(&row.tld) {
                return Err(LabelError::UnknownTld(row.tld));
            }
            for (value, field) in [
                (row.democracy, "democracy"),
                (row.press_freedom, "press_freedom"),
                (row.english_pct, "english_pct"),
                (row.ad_spend_pc, "ad_spend_pc"),
                (row.ad_spend_ratio, "ad_spend_ratio"),
                (row.us_trade_pc, "us_trade_pc"),
            ] {
                if !value.is_finite() {
                    return Err(LabelError::NonFiniteIndicator { tld: row.tld, field });
                }
            }
            out.push(row);
        }
        out.sort_by(|a, b| a.tld.cmp(&b.tld));
        Ok(out)
    }
}
