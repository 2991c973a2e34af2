//! Total maps between poset carriers and monotonicity diagnostics.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::poset::Poset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("no value assigned to domain element `{0}`")]
    MissingValue(String),
    #[error("unknown domain element `{0}`")]
    UnknownDomainElement(String),
    #[error("value `{0}` is not a codomain element")]
    UnknownValue(String),
    #[error("value list has {got} entries, domain has {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// A total map from one poset's carrier into another's.
#[derive(Clone)]
pub struct EvalMap {
    domain: Arc<Poset>,
    codomain: Arc<Poset>,
    values: Vec<usize>,
}

impl PartialEq for EvalMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && *self.domain == *other.domain
            && *self.codomain == *other.codomain
    }
}

impl Eq for EvalMap {}

impl std::fmt::Debug for EvalMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EvalMap{:?}", self.values_by_name())
    }
}

impl EvalMap {
    /// Builds a map from a name -> name assignment; every domain element must
    /// be assigned exactly once and every value must be a codomain element.
    pub fn new(
        domain: Arc<Poset>,
        codomain: Arc<Poset>,
        assignments: &BTreeMap<String, String>,
    ) -> Result<EvalMap, MapError> {
        for key in assignments.keys() {
            if domain.index_of(key).is_none() {
                return Err(MapError::UnknownDomainElement(key.clone()));
            }
        }
        let mut values = Vec::with_capacity(domain.len());
        for name in domain.elements() {
            let v = assignments
                .get(name)
                .ok_or_else(|| MapError::MissingValue(name.clone()))?;
            let idx = codomain
                .index_of(v)
                .ok_or_else(|| MapError::UnknownValue(v.clone()))?;
            values.push(idx);
        }
        Ok(EvalMap {
            domain,
            codomain,
            values,
        })
    }

    /// Builds a map from codomain indices listed in domain-element order.
    pub fn from_values(
        domain: Arc<Poset>,
        codomain: Arc<Poset>,
        values: Vec<usize>,
    ) -> Result<EvalMap, MapError> {
        if values.len() != domain.len() {
            return Err(MapError::LengthMismatch {
                got: values.len(),
                want: domain.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= codomain.len()) {
            return Err(MapError::UnknownValue(bad.to_string()));
        }
        Ok(EvalMap {
            domain,
            codomain,
            values,
        })
    }

    pub fn domain(&self) -> &Arc<Poset> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Poset> {
        &self.codomain
    }

    #[inline]
    pub fn value_idx(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, x: &str) -> Result<&str, MapError> {
        let i = self
            .domain
            .index_of(x)
            .ok_or_else(|| MapError::UnknownDomainElement(x.to_string()))?;
        Ok(self.codomain.name(self.values[i]))
    }

    pub fn values_by_name(&self) -> BTreeMap<String, String> {
        self.domain
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), self.codomain.name(self.values[i]).to_string()))
            .collect()
    }

    /// The non-monotonicity domain: all pairs `(m, m')` with `m <= m'` in the
    /// domain whose images are not ordered accordingly in the codomain.
    pub fn non_monotonicity(&self) -> NonMonotonicityReport {
        let pairs = self
            .non_monotone_pairs_idx()
            .into_iter()
            .map(|(i, j)| {
                (
                    self.domain.name(i).to_string(),
                    self.domain.name(j).to_string(),
                )
            })
            .collect::<Vec<_>>();
        let mut pairs = pairs;
        pairs.sort();
        NonMonotonicityReport { pairs }
    }

    pub fn non_monotone_pairs_idx(&self) -> Vec<(usize, usize)> {
        let n = self.domain.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.domain.leq_idx(i, j)
                    && !self.codomain.leq_idx(self.values[i], self.values[j])
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.domain.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                !self.domain.leq_idx(i, j) || self.codomain.leq_idx(self.values[i], self.values[j])
            })
        })
    }
}

/// Witnesses of non-monotonicity, sorted lexicographically by element name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonMonotonicityReport {
    pub pairs: Vec<(String, String)>,
}

impl NonMonotonicityReport {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }
}
