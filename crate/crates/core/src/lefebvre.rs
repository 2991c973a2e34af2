//! The Lefebvre choice model: ensembles of boolean-triple agents, the
//! readiness function and its axioms, pure (product) ensembles, the
//! golden-section realist construction, theta impulses on the three-state
//! chain, and the local-extremization choice algorithm.
//!
//! Conventions: an agent is a triple `(n1, n2, n3)` of bits; its readiness
//! is `(n3 -> n2) -> n1`; characteristics index the eight triples by
//! `k = 4*n1 + 2*n2 + n3` (first bit most significant).

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::map::EvalMap;
use crate::poset::Poset;

/// Probability bookkeeping tolerance for characteristics.
pub const PROB_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum LefebvreError {
    #[error("invalid characteristic: {0}")]
    InvalidCharacteristic(String),
    #[error("argument out of range: {0}")]
    RangeError(String),
    #[error("impulse index {0} out of range 1..=3")]
    IndexError(usize),
}

/// Readiness bit of the agent with index `k`: `(n3 -> n2) -> n1`.
fn readiness_bit(k: usize) -> bool {
    let n1 = k >> 2 & 1 == 1;
    let n2 = k >> 1 & 1 == 1;
    let n3 = k & 1 == 1;
    boolean_readiness(n1, n2, n3)
}

/// Probability vector over the eight boolean triples.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleCharacteristic {
    p: [f64; 8],
}

impl EnsembleCharacteristic {
    /// Validates membership of each entry in `[0, 1]` and normalization of
    /// the total within [`PROB_TOLERANCE`].
    pub fn new(p: [f64; 8]) -> Result<EnsembleCharacteristic, LefebvreError> {
        for (k, &v) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(LefebvreError::InvalidCharacteristic(format!(
                    "p{k} = {v} outside [0, 1]"
                )));
            }
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > PROB_TOLERANCE {
            return Err(LefebvreError::InvalidCharacteristic(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(EnsembleCharacteristic { p })
    }

    pub fn probabilities(&self) -> &[f64; 8] {
        &self.p
    }

    /// Indices with nonzero probability.
    pub fn support(&self) -> Vec<usize> {
        (0..8).filter(|&k| self.p[k] > 0.0).collect()
    }

    /// Ensemble averages of the three variables and of readiness.
    pub fn marginals(&self) -> LefebvrePoint {
        let p = &self.p;
        let x1 = p[4] + p[5] + p[6] + p[7];
        let x2 = p[2] + p[3] + p[6] + p[7];
        let x3 = p[1] + p[3] + p[5] + p[7];
        let z = p[1] + p[4] + p[5] + p[6] + p[7];
        LefebvrePoint {
            x1,
            x2,
            x3,
            z,
            model_readiness: readiness_value(x1, x2, x3),
        }
    }
}

/// Marginals of an ensemble together with the model readiness at the same
/// point. `z` is the ensemble average of the readiness bit; `model_readiness`
/// is the readiness function evaluated on `(x1, x2, x3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LefebvrePoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub z: f64,
    pub model_readiness: f64,
}

impl LefebvrePoint {
    /// Absolute difference between the ensemble average and the model value.
    pub fn gap(&self) -> f64 {
        (self.z - self.model_readiness).abs()
    }
}

fn check_unit(name: &str, v: f64) -> Result<(), LefebvreError> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(LefebvreError::RangeError(format!("{name} = {v}")));
    }
    Ok(())
}

fn readiness_value(x1: f64, x2: f64, x3: f64) -> f64 {
    x1 + (1.0 - x1) * (1.0 - x2) * x3
}

/// The readiness function `X1 = x1 + (1 - x1)(1 - x2) x3`.
///
/// This is the unique multiaffine extension of the boolean corner formula
/// `(b3 -> b2) -> b1` and satisfies all four choice axioms.
pub fn readiness(x1: f64, x2: f64, x3: f64) -> Result<f64, LefebvreError> {
    check_unit("x1", x1)?;
    check_unit("x2", x2)?;
    check_unit("x3", x3)?;
    Ok(readiness_value(x1, x2, x3))
}

/// A near-miss bilinear variant, `x1 + (1 - x1 - x2 + x2 x3) x3`, kept as a
/// verifier test case: it violates the credulity axiom (value `x3^2` instead
/// of 0 at `(0, 1, x3)`).
pub fn readiness_variant(x1: f64, x2: f64, x3: f64) -> Result<f64, LefebvreError> {
    check_unit("x1", x1)?;
    check_unit("x2", x2)?;
    check_unit("x3", x3)?;
    Ok(x1 + (1.0 - x1 - x2 + x2 * x3) * x3)
}

/// Boolean readiness `(b3 -> b2) -> b1`.
pub fn boolean_readiness(b1: bool, b2: bool, b3: bool) -> bool {
    let imp = |a: bool, b: bool| !a || b;
    imp(imp(b3, b2), b1)
}

/// Outcome of checking the four choice axioms on a candidate readiness
/// function. `None` means the axiom holds on the evaluation grid; a witness
/// string pinpoints the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LAxiomReport {
    pub free_choice: Option<String>,
    pub credulity: Option<String>,
    pub non_evil: Option<String>,
    pub simplicity: Option<String>,
}

impl LAxiomReport {
    pub fn passed(&self) -> bool {
        self.free_choice.is_none()
            && self.credulity.is_none()
            && self.non_evil.is_none()
            && self.simplicity.is_none()
    }
}

const AXIOM_TOLERANCE: f64 = 1e-9;

/// Checks the boundary axioms on a dense grid and the simplicity postulate
/// (affinity in each argument separately) through vanishing second
/// differences.
pub fn verify_l_axioms(f: &dyn Fn(f64, f64, f64) -> f64) -> LAxiomReport {
    let grid = |steps: usize| (0..=steps).map(move |i| i as f64 / steps as f64);

    let mut free_choice = None;
    for x3 in grid(100) {
        if (f(0.0, 0.0, x3) - x3).abs() > AXIOM_TOLERANCE {
            free_choice = Some(format!("f(0,0,{x3}) = {}", f(0.0, 0.0, x3)));
            break;
        }
    }
    let mut credulity = None;
    for x3 in grid(100) {
        if f(0.0, 1.0, x3).abs() > AXIOM_TOLERANCE {
            credulity = Some(format!("f(0,1,{x3}) = {}", f(0.0, 1.0, x3)));
            break;
        }
    }
    let mut non_evil = None;
    'outer: for x2 in grid(100) {
        for x3 in grid(100) {
            if (f(1.0, x2, x3) - 1.0).abs() > AXIOM_TOLERANCE {
                non_evil = Some(format!("f(1,{x2},{x3}) = {}", f(1.0, x2, x3)));
                break 'outer;
            }
        }
    }
    // Affinity in each variable: second difference vanishes along each axis.
    let mut simplicity = None;
    let h = 0.1;
    'simp: for axis in 0..3 {
        for a in grid(10) {
            for b in grid(10) {
                for i in 1..10 {
                    let t = i as f64 / 10.0;
                    let at = |v: f64| match axis {
                        0 => f(v, a, b),
                        1 => f(a, v, b),
                        _ => f(a, b, v),
                    };
                    let second = at(t - h) - 2.0 * at(t) + at(t + h);
                    if second.abs() > AXIOM_TOLERANCE {
                        simplicity = Some(format!(
                            "second difference {second} along x{} at ({a},{b},t={t})",
                            axis + 1
                        ));
                        break 'simp;
                    }
                }
            }
        }
    }
    LAxiomReport {
        free_choice,
        credulity,
        non_evil,
        simplicity,
    }
}

/// Product characteristic of three independent boolean variables with the
/// given means. Its ensemble-average readiness equals the readiness
/// function exactly.
pub fn pure_ensemble(x1: f64, x2: f64, x3: f64) -> Result<EnsembleCharacteristic, LefebvreError> {
    check_unit("x1", x1)?;
    check_unit("x2", x2)?;
    check_unit("x3", x3)?;
    let weight = |x: f64, bit: bool| if bit { x } else { 1.0 - x };
    let mut p = [0.0; 8];
    for (k, slot) in p.iter_mut().enumerate() {
        let n1 = k >> 2 & 1 == 1;
        let n2 = k >> 1 & 1 == 1;
        let n3 = k & 1 == 1;
        *slot = weight(x1, n1) * weight(x2, n2) * weight(x3, n3);
    }
    EnsembleCharacteristic::new(p)
}

/// Triples whose readiness equals their intention bit: the realist truth
/// area `(n3 -> n2) -> n1 = n3`.
pub fn realist_area() -> Vec<(bool, bool, bool)> {
    (0..8)
        .filter(|&k| readiness_bit(k) == (k & 1 == 1))
        .map(|k| (k >> 2 & 1 == 1, k >> 1 & 1 == 1, k & 1 == 1))
        .collect()
}

pub fn is_realist_index(k: usize) -> bool {
    readiness_bit(k) == (k & 1 == 1)
}

/// The root of `x^3 - 2x + 1 = 0` in the open unit interval, in closed
/// form `(sqrt 5 - 1) / 2`.
pub fn golden_root() -> f64 {
    (5.0_f64.sqrt() - 1.0) / 2.0
}

/// Realist characteristic at intention level `x3`: the two world variables
/// are independent with mean `1 - x3`, and the intention bit follows them
/// deterministically except on the double-zero row, where it is 1 with
/// probability `x3`. Supported entirely inside the realist area; at the
/// golden root the intention marginal reproduces `x3` itself.
pub fn realist_characteristic(x3: f64) -> Result<EnsembleCharacteristic, LefebvreError> {
    if !(x3 > 0.0 && x3 < 1.0) {
        return Err(LefebvreError::RangeError(format!(
            "x3 = {x3} not in (0, 1)"
        )));
    }
    let q = 1.0 - x3; // mean of the world variables
    let mut p = [0.0; 8];
    p[0] = x3 * x3 * (1.0 - x3); // (0,0) row, intention 0
    p[1] = x3 * x3 * x3; // (0,0) row, intention 1
    p[2] = x3 * q; // (0,1) -> intention 0
    p[5] = q * x3; // (1,0) -> intention 1
    p[7] = q * q; // (1,1) -> intention 1
    EnsembleCharacteristic::new(p)
}

/// Empirical summary of a Monte Carlo draw from a characteristic.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSummary {
    pub samples: u64,
    pub counts: [u64; 8],
    /// Fraction of sampled triples whose readiness bit is 1.
    pub readiness_fraction: f64,
    /// Binomial standard error of `readiness_fraction`.
    pub stderr: f64,
}

impl SampleSummary {
    /// Fraction of samples with variable `i` (1-based) equal to 1.
    pub fn bit_fraction(&self, i: usize) -> f64 {
        let shift = 3 - i;
        let hits: u64 = (0..8)
            .filter(|&k| k >> shift & 1 == 1)
            .map(|k| self.counts[k])
            .sum();
        hits as f64 / self.samples as f64
    }

    pub fn bit_stderr(&self, i: usize) -> f64 {
        let f = self.bit_fraction(i);
        (f * (1.0 - f) / self.samples as f64).sqrt()
    }
}

/// Draws `n` agents from the characteristic with a ChaCha8 generator seeded
/// by `seed`; identical seeds give identical counts.
pub fn sample_ensemble(
    characteristic: &EnsembleCharacteristic,
    n: u64,
    seed: u64,
) -> SampleSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = characteristic.probabilities();
    // rounding in the cumulative sum may leave a sliver above it; fall back
    // to the last supported index so the draw stays inside the support
    let last_supported = (0..8).rev().find(|&k| p[k] > 0.0).unwrap_or(7);
    let mut counts = [0u64; 8];
    for _ in 0..n {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = last_supported;
        for (k, &pk) in p.iter().enumerate() {
            acc += pk;
            if u < acc {
                chosen = k;
                break;
            }
        }
        counts[chosen] += 1;
    }
    let ready: u64 = (0..8)
        .filter(|&k| readiness_bit(k))
        .map(|k| counts[k])
        .sum();
    let z_hat = ready as f64 / n as f64;
    SampleSummary {
        samples: n,
        counts,
        readiness_fraction: z_hat,
        stderr: (z_hat * (1.0 - z_hat) / n as f64).sqrt(),
    }
}

/// The internal three-state chain `x1 <* x2 <* x3` (past, present, future).
pub fn state_poset() -> Arc<Poset> {
    Poset::build(&["x1", "x2", "x3"], &[("x1", "x2"), ("x2", "x3")])
        .expect("three-state chain is valid")
}

fn bit_codomain() -> Arc<Poset> {
    Poset::build(&["0", "1"], &[("0", "1")]).expect("two-chain is valid")
}

/// A pure motivation on the three-state chain: 1 above position `index`,
/// the given bit at it, 0 below. Always monotone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaImpulse {
    index: usize,
    bit: bool,
    values: [bool; 3],
}

impl ThetaImpulse {
    pub fn new(index: usize, bit: bool) -> Result<ThetaImpulse, LefebvreError> {
        if !(1..=3).contains(&index) {
            return Err(LefebvreError::IndexError(index));
        }
        let mut values = [false; 3];
        for (k0, slot) in values.iter_mut().enumerate() {
            let k = k0 + 1;
            *slot = match k.cmp(&index) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => bit,
                std::cmp::Ordering::Less => false,
            };
        }
        Ok(ThetaImpulse { index, bit, values })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bit(&self) -> bool {
        self.bit
    }

    /// Values on `(x1, x2, x3)` in state order.
    pub fn values(&self) -> [bool; 3] {
        self.values
    }

    pub fn as_eval_map(&self) -> EvalMap {
        let values: BTreeMap<String, String> = ["x1", "x2", "x3"]
            .iter()
            .zip(self.values)
            .map(|(s, v)| (s.to_string(), if v { "1" } else { "0" }.to_string()))
            .collect();
        EvalMap::new(state_poset(), bit_codomain(), &values).expect("total by construction")
    }
}

/// Convenience constructor for [`ThetaImpulse`].
pub fn theta_impulse(index: usize, bit: bool) -> Result<ThetaImpulse, LefebvreError> {
    ThetaImpulse::new(index, bit)
}

/// The external preference induced by a decision triple: the pointwise
/// nonimplication nesting of the three impulses,
/// `theta1 andnot (theta2 andnot theta3)`. Its closed form on
/// `(x1, x2, x3)` is `(b1, not b2, b3)`.
pub fn build_psi(b1: bool, b2: bool, b3: bool) -> EvalMap {
    let t1 = ThetaImpulse::new(1, b1).expect("index 1").values;
    let t2 = ThetaImpulse::new(2, b2).expect("index 2").values;
    let t3 = ThetaImpulse::new(3, b3).expect("index 3").values;
    let andnot = |a: bool, b: bool| a && !b;
    let values: Vec<usize> = (0..3)
        .map(|k| andnot(t1[k], andnot(t2[k], t3[k])) as usize)
        .collect();
    EvalMap::from_values(state_poset(), bit_codomain(), values).expect("three values")
}

/// Full record of one run of the local-extremization choice algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceTrace {
    pub bits: (bool, bool, bool),
    /// Visited states per stage, starting state included.
    pub stage_paths: [Vec<String>; 3],
    pub final_state: String,
    /// The decision: the input bit of the final state.
    pub output: bool,
}

/// Strict-ascent walk to the nearest local maximum of `g` on the
/// three-chain; plateaus do not permit movement.
fn ascend(g: [bool; 3], start: usize) -> Vec<usize> {
    let mut path = vec![start];
    let mut here = start;
    loop {
        let mut next = None;
        // lower neighbour first: deterministic, though the stage shapes
        // never make both neighbours ascend
        if here > 0 && g[here - 1] && !g[here] {
            next = Some(here - 1);
        } else if here + 1 < 3 && g[here + 1] && !g[here] {
            next = Some(here + 1);
        }
        match next {
            Some(s) => {
                path.push(s);
                here = s;
            }
            None => return path,
        }
    }
}

/// Runs the three-stage choice algorithm: ascend the first impulse from the
/// past state, then the inverted second impulse, then the third impulse
/// (whose double inversion restores it). The output equals the boolean
/// readiness of the input triple on all eight inputs.
pub fn choose(b1: bool, b2: bool, b3: bool) -> ChoiceTrace {
    let bits = [b1, b2, b3];
    let g1 = ThetaImpulse::new(1, b1).expect("index 1").values;
    let g2 = ThetaImpulse::new(2, b2)
        .expect("index 2")
        .values
        .map(|v| !v);
    let g3 = ThetaImpulse::new(3, b3).expect("index 3").values;

    let names = ["x1", "x2", "x3"];
    let to_names = |path: &[usize]| path.iter().map(|&s| names[s].to_string()).collect();

    let p1 = ascend(g1, 0);
    let p2 = ascend(g2, *p1.last().expect("nonempty path"));
    let p3 = ascend(g3, *p2.last().expect("nonempty path"));
    let final_idx = *p3.last().expect("nonempty path");
    ChoiceTrace {
        bits: (b1, b2, b3),
        stage_paths: [to_names(&p1), to_names(&p2), to_names(&p3)],
        final_state: names[final_idx].to_string(),
        output: bits[final_idx],
    }
}
