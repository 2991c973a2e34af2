//! Implicative normal forms of boolean functions.
//!
//! Every n-argument boolean function can be written as a left-nested
//! implication chain of monotone boolean functions with at most n
//! implications. Synthesis runs the dual decomposition engine over the
//! boolean cube; an independent exhaustive oracle confirms minimal chain
//! lengths at small arity.

use thiserror::Error;

use crate::algebra::ConnectiveSet;
use crate::decompose::{decompose_dual, DecomposeError};
use crate::map::EvalMap;
use crate::poset::Poset;

/// Largest arity accepted by synthesis.
pub const MAX_ARITY: usize = 10;

/// Largest arity for which the exhaustive minimality oracle runs.
pub const ORACLE_ARITY: usize = 3;

#[derive(Debug, Error)]
pub enum InfError {
    #[error("arity {0} out of range 1..={MAX_ARITY}")]
    SizeLimit(usize),
    #[error("arity {0} exceeds the exhaustive oracle limit {ORACLE_ARITY}")]
    OracleLimit(usize),
    #[error("factors have mismatched arity")]
    ArityMismatch,
    #[error("bit string must consist of 0/1 with power-of-two length, got `{0}`")]
    BadBitString(String),
    #[error("an implication chain needs at least one factor")]
    EmptyChain,
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// A boolean function of arity `n` as its truth table: row `k` holds the
/// value on the input whose bits spell `k` in binary, first argument most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    arity: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, bits: Vec<bool>) -> Result<TruthTable, InfError> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(InfError::SizeLimit(arity));
        }
        if bits.len() != 1 << arity {
            return Err(InfError::BadBitString(format!(
                "{} bits for arity {arity}",
                bits.len()
            )));
        }
        Ok(TruthTable { arity, bits })
    }

    /// Parses a row-ordered bit string such as `0110`; the arity is the
    /// base-2 logarithm of its length.
    pub fn parse(s: &str) -> Result<TruthTable, InfError> {
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(InfError::BadBitString(s.to_string())),
            })
            .collect::<Result<_, _>>()?;
        let len = bits.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(InfError::BadBitString(s.to_string()));
        }
        TruthTable::new(len.trailing_zeros() as usize, bits)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn row(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Componentwise monotonicity: flipping any input from 0 to 1 never
    /// drops the output.
    pub fn is_monotone(&self) -> bool {
        let rows = 1 << self.arity;
        (0..rows).all(|k| {
            (0..self.arity).all(|i| {
                let bit = 1 << (self.arity - 1 - i);
                k & bit != 0 || self.bits[k] <= self.bits[k | bit]
            })
        })
    }
}

/// A left-nested implication chain `((P_k -> P_{k-1}) -> ...) -> P_1` of
/// monotone factors, stored in application order (`P_k` first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfChain {
    factors: Vec<TruthTable>,
}

impl InfChain {
    pub fn new(factors: Vec<TruthTable>) -> Result<InfChain, InfError> {
        let first = factors.first().ok_or(InfError::EmptyChain)?;
        if factors.iter().any(|f| f.arity != first.arity) {
            return Err(InfError::ArityMismatch);
        }
        Ok(InfChain { factors })
    }

    pub fn factors(&self) -> &[TruthTable] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors[0].arity
    }

    pub fn implications(&self) -> usize {
        self.factors.len() - 1
    }
}

pub fn is_monotone_tt(t: &TruthTable) -> bool {
    t.is_monotone()
}

/// Synthesizes an implicative normal form for `t` by running the dual
/// decomposition over the boolean cube with the implication algebra. The
/// result evaluates back to `t`, every factor is monotone, and the number
/// of implications is at most the arity.
pub fn inf_synthesize(t: &TruthTable) -> Result<InfChain, InfError> {
    let n = t.arity;
    let cube = Poset::boolean_cube(n).map_err(|_| InfError::SizeLimit(n))?;
    let algebra = ConnectiveSet::boolean_dual();
    let values: Vec<usize> = t.bits.iter().map(|&b| b as usize).collect();
    let psi = EvalMap::from_values(cube, algebra.codomain().clone(), values)
        .expect("2^n values over the cube");
    let chain = decompose_dual(&psi, &algebra)?;
    // Stored order is outermost first; application order is the reverse.
    let factors: Vec<TruthTable> = chain
        .factors()
        .iter()
        .rev()
        .map(|f| {
            TruthTable::new(n, f.values().iter().map(|&v| v == 1).collect())
                .expect("factor arity matches")
        })
        .collect();
    InfChain::new(factors)
}

/// Evaluates the chain row by row.
pub fn inf_eval(chain: &InfChain) -> TruthTable {
    let mut acc: Vec<bool> = chain.factors[0].bits.clone();
    for f in &chain.factors[1..] {
        for (slot, &b) in acc.iter_mut().zip(&f.bits) {
            *slot = !*slot || b;
        }
    }
    TruthTable::new(chain.arity(), acc).expect("arity preserved")
}

/// All monotone truth tables of the given arity, in bit-string order.
pub fn enumerate_monotone(n: usize) -> Result<Vec<TruthTable>, InfError> {
    if n == 0 || n > ORACLE_ARITY {
        return Err(InfError::OracleLimit(n));
    }
    let rows = 1usize << n;
    let mut out = Vec::new();
    for code in 0u32..(1 << rows) {
        let bits: Vec<bool> = (0..rows).map(|k| code >> (rows - 1 - k) & 1 == 1).collect();
        let t = TruthTable::new(n, bits).expect("row count fits arity");
        if t.is_monotone() {
            out.push(t);
        }
    }
    Ok(out)
}

/// Smallest factor count of any monotone implication chain evaluating to
/// `t`, found by exhaustive search over monotone factor tuples. Independent
/// of the synthesis path; limited to arity 3 where the Dedekind counts keep
/// the search small.
pub fn minimal_inf_length(t: &TruthTable) -> Result<usize, InfError> {
    if t.arity > ORACLE_ARITY {
        return Err(InfError::OracleLimit(t.arity));
    }
    let monotone = enumerate_monotone(t.arity)?;
    let rows = 1 << t.arity;
    // depth-first over (acc -> next factor), extending the left fold
    fn extend(
        acc: &[bool],
        depth: usize,
        max_depth: usize,
        target: &[bool],
        monotone: &[TruthTable],
        rows: usize,
    ) -> bool {
        if acc == target {
            return true;
        }
        if depth == max_depth {
            return false;
        }
        monotone.iter().any(|f| {
            let next: Vec<bool> = (0..rows).map(|k| !acc[k] || f.bits[k]).collect();
            extend(&next, depth + 1, max_depth, target, monotone, rows)
        })
    }
    for k in 1..=(t.arity + 1) {
        let found = monotone
            .iter()
            .any(|p| extend(&p.bits, 1, k, &t.bits, &monotone, rows));
        if found {
            return Ok(k);
        }
    }
    Err(InfError::Decompose(DecomposeError::Internal(
        "no chain within the guaranteed factor bound".into(),
    )))
}
