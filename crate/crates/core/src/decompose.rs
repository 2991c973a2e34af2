//! The successive-approximation engine: factor an arbitrary map between
//! finite posets into a nested chain of monotone factors.
//!
//! The primal engine repeatedly splits the current residual into a monotone
//! factor (the aggregator applied over down-sets where non-monotone pairs
//! occur, the residual itself elsewhere) and a simpler residual obtained
//! through the least residual witness. The set of elements dominating a
//! non-monotone pair strictly shrinks every round, which bounds the number
//! of difference applications by the longest increasing chain of the domain.
//!
//! The dual engine runs the primal one on the order-mirrored instance and
//! re-labels the result as a left-nested chain.

use thiserror::Error;

use crate::algebra::{
    verify_codomain_axioms, AlgebraError, AxiomReport, AxiomSystem, ConnectiveSet, Orientation,
};
use crate::map::EvalMap;
use crate::poset::Poset;

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("algebra orientation must be {expected:?} for this engine")]
    OrientationMismatch { expected: Orientation },
    #[error("map codomain differs from the algebra codomain")]
    CodomainMismatch,
    #[error("algebra fails axiom system {system} ({count} violations, first: {first})")]
    AxiomFailure {
        system: AxiomSystem,
        count: usize,
        first: String,
    },
    #[error("no residual witness for boxminus({outer}, _) = {target}; algebra is invalid")]
    WitnessNotFound { outer: String, target: String },
    #[error("cannot pad a {current}-factor chain down to {requested}")]
    ShrinkRequested { current: usize, requested: usize },
    #[error("codomain has no greatest element")]
    NoGreatestElement,
    #[error("companion operation is not a constant map")]
    NonConstantCirc,
    #[error("companion constant is not the least codomain element")]
    FloorNotLeast,
    #[error("factor {0} is not monotone")]
    NonMonotoneFactor(usize),
    #[error("a factor chain needs at least one factor")]
    EmptyChain,
    #[error("factors do not share domain and codomain")]
    MixedFactors,
    #[error("aggregator failed during decomposition: {0}")]
    Aggregate(#[from] AlgebraError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn axiom_failure(report: &AxiomReport) -> DecomposeError {
    let first = report
        .violations
        .first()
        .map(|v| format!("{} {}", v.axiom_label(report.system), v.describe()))
        .unwrap_or_else(|| "unknown".to_string());
    DecomposeError::AxiomFailure {
        system: report.system,
        count: report.total_violations,
        first,
    }
}

/// An approximating form: monotone factors plus the nesting orientation.
///
/// Factors are stored outermost first. A primal chain of factors
/// `f1 ... fk` evaluates right-nested as `f1 - (f2 - (... - fk))`; a dual
/// chain evaluates left-nested as `(((fk * f(k-1)) * ...) * f1)` where `*`
/// is the stored difference operation with the accumulator in the first
/// slot.
#[derive(Debug, Clone)]
pub struct FactorChain {
    factors: Vec<EvalMap>,
    algebra: ConnectiveSet,
    orientation: Orientation,
}

impl FactorChain {
    /// Validates and assembles a chain: at least one factor, shared domain
    /// and codomain, codomain matching the algebra, every factor monotone.
    pub fn new(
        factors: Vec<EvalMap>,
        algebra: ConnectiveSet,
        orientation: Orientation,
    ) -> Result<FactorChain, DecomposeError> {
        let first = factors.first().ok_or(DecomposeError::EmptyChain)?;
        if factors
            .iter()
            .any(|f| f.domain() != first.domain() || f.codomain() != first.codomain())
        {
            return Err(DecomposeError::MixedFactors);
        }
        if **first.codomain() != **algebra.codomain() {
            return Err(DecomposeError::CodomainMismatch);
        }
        for (i, f) in factors.iter().enumerate() {
            if !f.is_monotone() {
                return Err(DecomposeError::NonMonotoneFactor(i));
            }
        }
        Ok(FactorChain {
            factors,
            algebra,
            orientation,
        })
    }

    pub fn factors(&self) -> &[EvalMap] {
        &self.factors
    }

    pub fn algebra(&self) -> &ConnectiveSet {
        &self.algebra
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Number of difference applications in the form: factor count minus one.
    pub fn boxminus_count(&self) -> usize {
        self.factors.len() - 1
    }

    /// Evaluates the nested form pointwise back into a single map.
    pub fn fold(&self) -> EvalMap {
        let last = self.factors.last().expect("chains are nonempty");
        let mut acc: Vec<usize> = last.values().to_vec();
        for f in self.factors[..self.factors.len() - 1].iter().rev() {
            for (x, slot) in acc.iter_mut().enumerate() {
                *slot = match self.orientation {
                    Orientation::Primal => self.algebra.boxminus(f.value_idx(x), *slot),
                    Orientation::Dual => self.algebra.boxminus(*slot, f.value_idx(x)),
                };
            }
        }
        EvalMap::from_values(last.domain().clone(), last.codomain().clone(), acc)
            .expect("fold stays inside the codomain")
    }

    /// Extends the chain to `target` factors by appending companion images
    /// of the innermost factor. The fold is unchanged and the new factors
    /// are monotone because the companion is.
    pub fn pad_to(&self, target: usize) -> Result<FactorChain, DecomposeError> {
        if target < self.factors.len() {
            return Err(DecomposeError::ShrinkRequested {
                current: self.factors.len(),
                requested: target,
            });
        }
        let mut factors = self.factors.clone();
        while factors.len() < target {
            let inner = factors.last().expect("chains are nonempty");
            let values = inner
                .values()
                .iter()
                .map(|&v| self.algebra.circ(v))
                .collect();
            let padded =
                EvalMap::from_values(inner.domain().clone(), inner.codomain().clone(), values)
                    .expect("companion stays inside the codomain");
            factors.push(padded);
        }
        FactorChain::new(factors, self.algebra.clone(), self.orientation)
    }
}

/// Sizes of the successive non-monotonicity carrier sets, one per
/// difference application; strictly decreasing by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTrace {
    pub bad_set_sizes: Vec<usize>,
}

/// Decomposes `psi` into a right-nested primal chain of monotone factors.
///
/// The algebra must be primal and satisfy the codomain axioms (the A system,
/// or the B system when the aggregator folds the binary join); the selection
/// axiom holds on every finite carrier and is not re-checked here. The
/// number of difference applications never exceeds the longest increasing
/// chain of the domain.
pub fn decompose(psi: &EvalMap, algebra: &ConnectiveSet) -> Result<FactorChain, DecomposeError> {
    decompose_with_trace(psi, algebra).map(|(chain, _)| chain)
}

/// [`decompose`] plus the shrinking carrier-set trace, for callers that want
/// to audit the strict-progress invariant.
pub fn decompose_with_trace(
    psi: &EvalMap,
    algebra: &ConnectiveSet,
) -> Result<(FactorChain, DecompositionTrace), DecomposeError> {
    if algebra.orientation() != Orientation::Primal {
        return Err(DecomposeError::OrientationMismatch {
            expected: Orientation::Primal,
        });
    }
    if **psi.codomain() != **algebra.codomain() {
        return Err(DecomposeError::CodomainMismatch);
    }
    let system = if algebra.aggregator_is_fold() {
        AxiomSystem::B
    } else {
        AxiomSystem::A
    };
    let report = verify_codomain_axioms(algebra, system)?;
    if !report.passed {
        return Err(axiom_failure(&report));
    }

    let domain = psi.domain().as_ref();
    let cod = algebra.codomain().as_ref();
    let n = domain.len();
    let depth_bound = domain.max_chain_length();
    let down_sets: Vec<Vec<usize>> = (0..n).map(|x| domain.down_set_idx(x)).collect();

    let mut current: Vec<usize> = psi.values().to_vec();
    let mut factors: Vec<Vec<usize>> = Vec::new();
    let mut trace = Vec::new();
    let mut prev_bad: Option<Vec<bool>> = None;

    loop {
        let bad_pairs = non_monotone_pairs(domain, cod, &current);
        if bad_pairs.is_empty() {
            factors.push(current);
            break;
        }
        // Elements dominating some non-monotone pair: the up-closure of the
        // pairs' upper members (the lower member is below it already).
        let in_bad: Vec<bool> = (0..n)
            .map(|x| bad_pairs.iter().any(|&(_, m2)| domain.leq_idx(m2, x)))
            .collect();
        if let Some(prev) = &prev_bad {
            let subset = in_bad
                .iter()
                .zip(prev)
                .all(|(&now, &before)| !now || before);
            let strict = in_bad
                .iter()
                .zip(prev)
                .any(|(&now, &before)| before && !now);
            if !subset || !strict {
                return Err(DecomposeError::Internal(
                    "non-monotonicity carrier did not strictly shrink".into(),
                ));
            }
        }
        trace.push(in_bad.iter().filter(|&&b| b).count());
        if trace.len() > depth_bound {
            return Err(DecomposeError::Internal(format!(
                "depth bound {depth_bound} exceeded"
            )));
        }
        prev_bad = Some(in_bad.clone());

        let mut phi = vec![0usize; n];
        for x in 0..n {
            phi[x] = if in_bad[x] {
                let image: Vec<usize> = down_sets[x].iter().map(|&t| current[t]).collect();
                algebra.boxplus(&image)?
            } else {
                current[x]
            };
        }
        let mut next = vec![0usize; n];
        for x in 0..n {
            next[x] = if phi[x] != current[x] {
                algebra
                    .residual_witness(phi[x], current[x])
                    .ok_or_else(|| DecomposeError::WitnessNotFound {
                        outer: cod.name(phi[x]).to_string(),
                        target: cod.name(current[x]).to_string(),
                    })?
            } else {
                algebra.circ(current[x])
            };
        }
        factors.push(phi);
        current = next;
    }

    let maps = factors
        .into_iter()
        .map(|vals| {
            EvalMap::from_values(psi.domain().clone(), psi.codomain().clone(), vals)
                .expect("factor values are codomain indices")
        })
        .collect();
    let chain = FactorChain::new(maps, algebra.clone(), Orientation::Primal)?;
    if chain.fold() != *psi {
        return Err(DecomposeError::Internal(
            "fold does not reproduce the input".into(),
        ));
    }
    Ok((
        chain,
        DecompositionTrace {
            bad_set_sizes: trace,
        },
    ))
}

/// Decomposes `psi` against a dual algebra into a left-nested chain by order
/// mirroring: dualize both posets and the algebra, run the primal engine,
/// and re-label. Monotonicity is self-dual, so the factors transfer as-is.
pub fn decompose_dual(
    psi: &EvalMap,
    algebra: &ConnectiveSet,
) -> Result<FactorChain, DecomposeError> {
    if algebra.orientation() != Orientation::Dual {
        return Err(DecomposeError::OrientationMismatch {
            expected: Orientation::Dual,
        });
    }
    if **psi.codomain() != **algebra.codomain() {
        return Err(DecomposeError::CodomainMismatch);
    }
    let mirrored = algebra.mirror();
    let dual_domain = psi.domain().order_dual();
    let dual_psi = EvalMap::from_values(
        dual_domain,
        mirrored.codomain().clone(),
        psi.values().to_vec(),
    )
    .expect("same carrier, same indices");
    let (primal_chain, _) = decompose_with_trace(&dual_psi, &mirrored)?;
    let factors: Vec<EvalMap> = primal_chain
        .factors()
        .iter()
        .map(|f| {
            EvalMap::from_values(
                psi.domain().clone(),
                psi.codomain().clone(),
                f.values().to_vec(),
            )
            .expect("same carrier, same indices")
        })
        .collect();
    let chain = FactorChain::new(factors, algebra.clone(), Orientation::Dual)?;
    if chain.fold() != *psi {
        return Err(DecomposeError::Internal(
            "dual fold does not reproduce the input".into(),
        ));
    }
    Ok(chain)
}

fn non_monotone_pairs(domain: &Poset, cod: &Poset, values: &[usize]) -> Vec<(usize, usize)> {
    let n = domain.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if domain.leq_idx(i, j) && !cod.leq_idx(values[i], values[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A monotone factor pinned to one rank block: floor-valued below its block,
/// free on it, maximal above it.
#[derive(Debug, Clone)]
pub struct ThetaFunction {
    map: EvalMap,
    rank: usize,
}

impl ThetaFunction {
    /// Validates the rank shape against the domain's rank partition and the
    /// algebra's floor constant and greatest element.
    pub fn new(
        map: EvalMap,
        rank: usize,
        algebra: &ConnectiveSet,
    ) -> Result<ThetaFunction, DecomposeError> {
        let floor = algebra
            .constant_circ()
            .ok_or(DecomposeError::NonConstantCirc)?;
        let gamma = algebra
            .greatest()
            .ok_or(DecomposeError::NoGreatestElement)?;
        let ranks = map.domain().ranks();
        for (x, &r) in ranks.iter().enumerate() {
            if r < rank && map.value_idx(x) != floor {
                return Err(DecomposeError::Internal(format!(
                    "theta of rank {rank} is not floor-valued below its block (at {})",
                    map.domain().name(x)
                )));
            }
            if r > rank && map.value_idx(x) != gamma {
                return Err(DecomposeError::Internal(format!(
                    "theta of rank {rank} is not maximal above its block (at {})",
                    map.domain().name(x)
                )));
            }
        }
        if !map.is_monotone() {
            return Err(DecomposeError::NonMonotoneFactor(rank - 1));
        }
        Ok(ThetaFunction { map, rank })
    }

    pub fn map(&self) -> &EvalMap {
        &self.map
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Decomposes `psi` into one theta factor per rank block of the domain.
///
/// Requires a primal algebra whose companion is a constant map equal to the
/// least codomain element, and a greatest element to saturate blocks above
/// the current rank. The fold of the returned factors reproduces `psi`.
pub fn theta_decompose(
    psi: &EvalMap,
    algebra: &ConnectiveSet,
) -> Result<Vec<ThetaFunction>, DecomposeError> {
    if algebra.orientation() != Orientation::Primal {
        return Err(DecomposeError::OrientationMismatch {
            expected: Orientation::Primal,
        });
    }
    if **psi.codomain() != **algebra.codomain() {
        return Err(DecomposeError::CodomainMismatch);
    }
    let floor = algebra
        .constant_circ()
        .ok_or(DecomposeError::NonConstantCirc)?;
    let gamma = algebra
        .greatest()
        .ok_or(DecomposeError::NoGreatestElement)?;
    let cod = algebra.codomain().as_ref();
    if !(0..cod.len()).all(|x| cod.leq_idx(floor, x)) {
        return Err(DecomposeError::FloorNotLeast);
    }
    let domain = psi.domain().as_ref();
    let ranks = domain.ranks();
    let block_count = ranks.iter().copied().max().unwrap_or(0);

    let mut current: Vec<usize> = psi.values().to_vec();
    let mut thetas = Vec::with_capacity(block_count);
    for i in 1..=block_count {
        let theta_values: Vec<usize> = ranks
            .iter()
            .zip(&current)
            .map(|(&r, &v)| {
                if r < i {
                    floor
                } else if r == i {
                    v
                } else {
                    gamma
                }
            })
            .collect();
        let mut next = current.clone();
        for (x, &r) in ranks.iter().enumerate() {
            if r <= i {
                next[x] = floor;
            } else {
                next[x] = algebra.residual_witness(gamma, current[x]).ok_or_else(|| {
                    DecomposeError::WitnessNotFound {
                        outer: cod.name(gamma).to_string(),
                        target: cod.name(current[x]).to_string(),
                    }
                })?;
            }
        }
        let map = EvalMap::from_values(psi.domain().clone(), psi.codomain().clone(), theta_values)
            .expect("theta values are codomain indices");
        thetas.push(ThetaFunction::new(map, i, algebra)?);
        current = next;
    }
    Ok(thetas)
}

/// Assembles theta factors (outermost first, by rank) into a primal chain.
pub fn theta_chain(
    thetas: &[ThetaFunction],
    algebra: &ConnectiveSet,
) -> Result<FactorChain, DecomposeError> {
    FactorChain::new(
        thetas.iter().map(|t| t.map().clone()).collect(),
        algebra.clone(),
        Orientation::Primal,
    )
}

/// Elements whose value sits strictly above the companion's floor constant.
pub fn support(phi: &EvalMap, algebra: &ConnectiveSet) -> Result<Vec<String>, DecomposeError> {
    let floor = algebra
        .constant_circ()
        .ok_or(DecomposeError::NonConstantCirc)?;
    let cod = phi.codomain().as_ref();
    let mut out: Vec<String> = phi
        .domain()
        .elements()
        .iter()
        .enumerate()
        .filter(|&(x, _)| cod.lt_idx(floor, phi.value_idx(x)))
        .map(|(_, name)| name.clone())
        .collect();
    out.sort();
    Ok(out)
}
