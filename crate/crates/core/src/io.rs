//! JSON exchange formats for posets, maps, factor chains, and custom
//! algebra tables.
//!
//! Serialization is canonical: elements sorted lexicographically, the order
//! relation exchanged as its covering pairs, map values keyed by element
//! name. Parsing then serializing any accepted input yields a fixed point.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Aggregator, AlgebraError, ConnectiveSet, Orientation};
use crate::decompose::{DecomposeError, FactorChain};
use crate::map::{EvalMap, MapError};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chain(#[from] DecomposeError),
    #[error("invalid file contents: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl PosetFile {
    pub fn from_poset(p: &Poset) -> PosetFile {
        let mut elements = p.elements().to_vec();
        elements.sort();
        PosetFile {
            elements,
            covers: p.covers(),
        }
    }
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string_pretty(&PosetFile::from_poset(p)).expect("poset serializes")
}

pub fn poset_from_json(json: &str) -> Result<Arc<Poset>, FormatError> {
    let file: PosetFile = serde_json::from_str(json)?;
    Ok(Poset::build(&file.elements, &file.covers)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    pub values: BTreeMap<String, String>,
}

pub fn map_to_json(m: &EvalMap) -> String {
    serde_json::to_string_pretty(&MapFile {
        values: m.values_by_name(),
    })
    .expect("map serializes")
}

/// Binds a value file against explicit domain and codomain posets.
pub fn map_from_json(
    json: &str,
    domain: Arc<Poset>,
    codomain: Arc<Poset>,
) -> Result<EvalMap, FormatError> {
    let file: MapFile = serde_json::from_str(json)?;
    Ok(EvalMap::new(domain, codomain, &file.values)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationBlock {
    pub fold_equal: bool,
    pub boxminus_count: usize,
    pub d: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainFile {
    pub orientation: String,
    pub factors: Vec<MapFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationBlock>,
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Primal => "primal",
        Orientation::Dual => "dual",
    }
}

fn orientation_from_name(s: &str) -> Result<Orientation, FormatError> {
    match s {
        "primal" => Ok(Orientation::Primal),
        "dual" => Ok(Orientation::Dual),
        other => Err(FormatError::Invalid(format!(
            "orientation must be primal or dual, got `{other}`"
        ))),
    }
}

/// Serializes a chain together with its verification block. `target`, when
/// given, is the map the fold is compared against; otherwise the fold is
/// trivially equal to itself.
pub fn chain_to_json(chain: &FactorChain, target: Option<&EvalMap>) -> String {
    let fold = chain.fold();
    let fold_equal = target.map(|t| fold == *t).unwrap_or(true);
    let file = ChainFile {
        orientation: orientation_name(chain.orientation()).to_string(),
        factors: chain
            .factors()
            .iter()
            .map(|f| MapFile {
                values: f.values_by_name(),
            })
            .collect(),
        verification: Some(VerificationBlock {
            fold_equal,
            boxminus_count: chain.boxminus_count(),
            d: chain.factors()[0].domain().max_chain_length(),
        }),
    };
    serde_json::to_string_pretty(&file).expect("chain serializes")
}

/// Rebinds a chain file against a domain poset and an algebra; factor
/// monotonicity and shared carriers are re-validated on the way in.
pub fn chain_from_json(
    json: &str,
    domain: Arc<Poset>,
    algebra: &ConnectiveSet,
) -> Result<FactorChain, FormatError> {
    let file: ChainFile = serde_json::from_str(json)?;
    let orientation = orientation_from_name(&file.orientation)?;
    let factors = file
        .factors
        .iter()
        .map(|mf| EvalMap::new(domain.clone(), algebra.codomain().clone(), &mf.values))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FactorChain::new(factors, algebra.clone(), orientation)?)
}

/// One explicit aggregator value in an algebra table file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxplusEntry {
    pub subset: Vec<String>,
    pub value: String,
}

/// Aggregator selection in an algebra table file: a named rule or explicit
/// per-subset values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoxplusRule {
    Named(String),
    Table(Vec<BoxplusEntry>),
}

/// A custom algebra: codomain poset, operation tables keyed by element
/// name, aggregator rule, optional join table and greatest element.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub codomain: PosetFile,
    pub orientation: String,
    pub boxminus: BTreeMap<String, BTreeMap<String, String>>,
    pub circ: BTreeMap<String, String>,
    pub boxplus: BoxplusRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uplus: Option<BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub greatest: Option<String>,
}

pub fn algebra_from_json(json: &str) -> Result<ConnectiveSet, FormatError> {
    let file: AlgebraFile = serde_json::from_str(json)?;
    let codomain = Poset::build(&file.codomain.elements, &file.codomain.covers)?;
    let n = codomain.len();
    let idx = |name: &str| -> Result<usize, FormatError> {
        codomain
            .index_of(name)
            .ok_or_else(|| FormatError::Invalid(format!("`{name}` is not a codomain element")))
    };
    let binary = |table: &BTreeMap<String, BTreeMap<String, String>>,
                  what: &str|
     -> Result<Vec<Vec<usize>>, FormatError> {
        let mut out = vec![vec![0usize; n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (a, row) in table {
            let i = idx(a)?;
            for (b, v) in row {
                let j = idx(b)?;
                out[i][j] = idx(v)?;
                seen[i][j] = true;
            }
        }
        if seen.iter().flatten().any(|&s| !s) {
            return Err(FormatError::Invalid(format!("{what} table is not total")));
        }
        Ok(out)
    };
    let boxminus = binary(&file.boxminus, "boxminus")?;
    let uplus = file
        .uplus
        .as_ref()
        .map(|t| binary(t, "uplus"))
        .transpose()?;
    let mut circ = vec![0usize; n];
    let mut seen = vec![false; n];
    for (a, v) in &file.circ {
        let i = idx(a)?;
        circ[i] = idx(v)?;
        seen[i] = true;
    }
    if seen.iter().any(|&s| !s) {
        return Err(FormatError::Invalid("circ table is not total".into()));
    }
    let aggregator = match &file.boxplus {
        BoxplusRule::Named(name) => match name.as_str() {
            "max" => Aggregator::Max,
            "min" => Aggregator::Min,
            "fold-uplus" => Aggregator::FoldUplus,
            other => {
                return Err(FormatError::Invalid(format!(
                    "boxplus rule must be max, min, or fold-uplus, got `{other}`"
                )))
            }
        },
        BoxplusRule::Table(entries) => {
            let mut table = BTreeMap::new();
            for entry in entries {
                let mut key = entry
                    .subset
                    .iter()
                    .map(|e| idx(e))
                    .collect::<Result<Vec<_>, _>>()?;
                key.sort_unstable();
                key.dedup();
                table.insert(key, idx(&entry.value)?);
            }
            Aggregator::Table(table)
        }
    };
    let greatest = file.greatest.as_deref().map(idx).transpose()?;
    Ok(ConnectiveSet::from_tables(
        codomain,
        boxminus,
        circ,
        aggregator,
        uplus,
        orientation_from_name(&file.orientation)?,
        greatest,
    )?)
}
