//! Helpers shared by the integration test targets.
#![allow(dead_code)] // each test target compiles this module separately

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use approxform::poset::Poset;

/// A random poset on up to `max_n` elements: random edges from lower to
/// higher index, closed transitively by the constructor.
pub fn random_poset(rng: &mut ChaCha8Rng, max_n: usize) -> Arc<Poset> {
    let n = rng.gen_range(1..=max_n);
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut covers = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.4) {
                covers.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Poset::build(&names, &covers).unwrap()
}

/// All labeled posets on `n` elements: every assignment of {incomparable,
/// up, down} to the element pairs whose strict relation is transitive.
pub fn all_posets(n: usize) -> Vec<Arc<Poset>> {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    let mut states = vec![0u8; pairs.len()];
    loop {
        let mut lt = vec![vec![false; n]; n];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            match states[p] {
                1 => lt[i][j] = true,
                2 => lt[j][i] = true,
                _ => {}
            }
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| !lt[i][j] || (0..n).all(|k| !lt[j][k] || lt[i][k])));
        if transitive {
            let covers: Vec<(String, String)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| lt[i][j])
                .map(|(i, j)| (names[i].clone(), names[j].clone()))
                .collect();
            out.push(Poset::build(&names, &covers).unwrap());
        }
        let mut p = 0;
        loop {
            if p == states.len() {
                return out;
            }
            states[p] += 1;
            if states[p] < 3 {
                break;
            }
            states[p] = 0;
            p += 1;
        }
    }
}

/// All maps from `domain` into an `m`-element codomain, as value vectors.
pub fn all_value_vectors(domain_size: usize, m: usize) -> Vec<Vec<usize>> {
    let total = m.pow(domain_size as u32);
    (0..total)
        .map(|code| {
            let mut c = code;
            (0..domain_size)
                .map(|_| {
                    let v = c % m;
                    c /= m;
                    v
                })
                .collect()
        })
        .collect()
}
