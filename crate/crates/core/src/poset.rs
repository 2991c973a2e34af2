//! Finite partially ordered sets with order-theoretic queries.
//!
//! A [`Poset`] stores its order relation as the reflexive-transitive closure
//! of a cover list, held in a dense bit matrix so that `leq` queries are O(1).
//! The carrier is a list of opaque string identifiers; indices into that list
//! are the working representation everywhere else in the crate.

use std::sync::Arc;

use thiserror::Error;

/// Maximum carrier size accepted by any constructor.
///
/// Every algorithm in this crate is an exhaustive scan over the carrier or
/// over comparable pairs, so the cap keeps worst cases bounded.
pub const MAX_ELEMENTS: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element identifier `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cycle detected: `{0}` and `{1}` are mutually below each other")]
    CycleDetected(String, String),
    #[error("size limit exceeded: {0} elements (maximum {MAX_ELEMENTS})")]
    SizeLimit(usize),
    #[error("boolean cube dimension {0} out of range 1..=16")]
    CubeDimension(usize),
}

/// Square bit matrix, row-major over u64 words.
#[derive(Clone, PartialEq, Eq)]
struct BitMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words_per_row,
            bits: vec![0; n * words_per_row],
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    /// row(i) |= row(j); returns true if row(i) changed.
    fn union_row(&mut self, i: usize, j: usize) -> bool {
        let mut changed = false;
        for w in 0..self.words_per_row {
            let src = self.bits[j * self.words_per_row + w];
            let dst = &mut self.bits[i * self.words_per_row + w];
            let old = *dst;
            *dst |= src;
            changed |= *dst != old;
        }
        changed
    }

    fn transpose(&self) -> Self {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    t.set(j, i);
                }
            }
        }
        t
    }
}

/// A finite poset: carrier of string identifiers plus the closed `leq` relation.
///
/// Immutable after construction; share across workers via [`Arc`].
#[derive(Clone)]
pub struct Poset {
    elements: Vec<String>,
    leq: BitMatrix,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.leq == other.leq
    }
}

impl Eq for Poset {}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.elements)
            .field("covers", &self.covers())
            .finish()
    }
}

impl Poset {
    /// Builds a poset from an element list and a cover list.
    ///
    /// The stored relation is the reflexive-transitive closure of `covers`
    /// (each pair `(a, b)` read as `a <= b`). Rejects duplicate identifiers,
    /// unknown identifiers in the cover list, and any cycle, which would
    /// violate antisymmetry.
    pub fn build<S: AsRef<str>>(
        elements: &[S],
        covers: &[(S, S)],
    ) -> Result<Arc<Poset>, PosetError> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        if elements.len() > MAX_ELEMENTS {
            return Err(PosetError::SizeLimit(elements.len()));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(PosetError::DuplicateElement(e.clone()));
            }
        }
        let index = |name: &str| -> Result<usize, PosetError> {
            elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| PosetError::UnknownElement(name.to_string()))
        };
        let n = elements.len();
        let mut leq = BitMatrix::new(n);
        for i in 0..n {
            leq.set(i, i);
        }
        for (a, b) in covers {
            leq.set(index(a.as_ref())?, index(b.as_ref())?);
        }
        close_transitively(&mut leq);
        check_antisymmetry(&leq, &elements)?;
        Ok(Arc::new(Poset { elements, leq }))
    }

    /// The boolean cube `B^n` under componentwise order.
    ///
    /// Elements are the n-bit strings (first character is the most
    /// significant bit). Subject to [`MAX_ELEMENTS`], which caps the usable
    /// dimension below the nominal 16.
    pub fn boolean_cube(n: usize) -> Result<Arc<Poset>, PosetError> {
        if n == 0 || n > 16 {
            return Err(PosetError::CubeDimension(n));
        }
        let size = 1usize << n;
        if size > MAX_ELEMENTS {
            return Err(PosetError::SizeLimit(size));
        }
        let elements: Vec<String> = (0..size).map(|k| format!("{k:0n$b}")).collect();
        let mut leq = BitMatrix::new(size);
        for u in 0..size {
            for v in 0..size {
                if u & v == u {
                    leq.set(u, v);
                }
            }
        }
        Ok(Arc::new(Poset { elements, leq }))
    }

    /// Order induced on `base` by ranking into `m_poset`:
    /// `s <= s'` iff `s = s'` or `rank(s)` is strictly below `rank(s')`.
    ///
    /// `rank_map` must assign an `m_poset` element to every base identifier.
    pub fn induced_order<S: AsRef<str>>(
        base: &[S],
        rank_map: &dyn Fn(&str) -> Option<String>,
        m_poset: &Poset,
    ) -> Result<Arc<Poset>, PosetError> {
        let base: Vec<String> = base.iter().map(|s| s.as_ref().to_string()).collect();
        if base.len() > MAX_ELEMENTS {
            return Err(PosetError::SizeLimit(base.len()));
        }
        for (i, e) in base.iter().enumerate() {
            if base[..i].contains(e) {
                return Err(PosetError::DuplicateElement(e.clone()));
            }
        }
        let mut ranks = Vec::with_capacity(base.len());
        for s in &base {
            let name = rank_map(s).ok_or_else(|| PosetError::UnknownElement(s.clone()))?;
            let idx = m_poset
                .index_of(&name)
                .ok_or(PosetError::UnknownElement(name))?;
            ranks.push(idx);
        }
        let n = base.len();
        let mut leq = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if i == j || m_poset.lt_idx(ranks[i], ranks[j]) {
                    leq.set(i, j);
                }
            }
        }
        // Strictness of the underlying order makes this reflexive,
        // antisymmetric, and transitive already; re-validate anyway.
        check_antisymmetry(&leq, &base)?;
        debug_assert!(is_transitive(&leq));
        Ok(Arc::new(Poset {
            elements: base,
            leq,
        }))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.elements[idx]
    }

    #[inline]
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    #[inline]
    pub fn lt_idx(&self, i: usize, j: usize) -> bool {
        i != j && self.leq.get(i, j)
    }

    pub fn leq(&self, a: &str, b: &str) -> Result<bool, PosetError> {
        let i = self
            .index_of(a)
            .ok_or_else(|| PosetError::UnknownElement(a.to_string()))?;
        let j = self
            .index_of(b)
            .ok_or_else(|| PosetError::UnknownElement(b.to_string()))?;
        Ok(self.leq_idx(i, j))
    }

    pub fn down_set_idx(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.leq_idx(t, x)).collect()
    }

    pub fn up_set_idx(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.leq_idx(x, t)).collect()
    }

    /// `{t | t <= x}`, sorted lexicographically.
    pub fn down_set(&self, x: &str) -> Result<Vec<String>, PosetError> {
        let i = self
            .index_of(x)
            .ok_or_else(|| PosetError::UnknownElement(x.to_string()))?;
        Ok(self.names_sorted(&self.down_set_idx(i)))
    }

    /// `{t | x <= t}`, sorted lexicographically.
    pub fn up_set(&self, x: &str) -> Result<Vec<String>, PosetError> {
        let i = self
            .index_of(x)
            .ok_or_else(|| PosetError::UnknownElement(x.to_string()))?;
        Ok(self.names_sorted(&self.up_set_idx(i)))
    }

    /// Elements of `s` with no strictly smaller element in `s`.
    ///
    /// The result is an antichain and every member of `s` dominates some
    /// member of the result (the finite-carrier selection property).
    pub fn minimal_of_idx(&self, s: &[usize]) -> Vec<usize> {
        s.iter()
            .copied()
            .filter(|&x| !s.iter().any(|&y| self.lt_idx(y, x)))
            .collect()
    }

    pub fn maximal_of_idx(&self, s: &[usize]) -> Vec<usize> {
        s.iter()
            .copied()
            .filter(|&x| !s.iter().any(|&y| self.lt_idx(x, y)))
            .collect()
    }

    /// Name-based [`Self::minimal_of_idx`], sorted lexicographically.
    pub fn minimal_of<S: AsRef<str>>(&self, s: &[S]) -> Result<Vec<String>, PosetError> {
        let idx = self.indices_of(s)?;
        Ok(self.names_sorted(&self.minimal_of_idx(&idx)))
    }

    pub fn maximal_of<S: AsRef<str>>(&self, s: &[S]) -> Result<Vec<String>, PosetError> {
        let idx = self.indices_of(s)?;
        Ok(self.names_sorted(&self.maximal_of_idx(&idx)))
    }

    /// Maximum number of covering steps (edges) on any strictly increasing
    /// chain; 0 for antichains and the empty poset.
    pub fn max_chain_length(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Per-element height: length in edges of the longest strictly
    /// increasing chain ending at the element.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut height = vec![usize::MAX; n];
        fn rec(p: &Poset, height: &mut Vec<usize>, v: usize) -> usize {
            if height[v] != usize::MAX {
                return height[v];
            }
            let mut h = 0;
            for u in 0..p.len() {
                if p.lt_idx(u, v) {
                    h = h.max(rec(p, height, u) + 1);
                }
            }
            height[v] = h;
            h
        }
        for v in 0..n {
            rec(self, &mut height, v);
        }
        height
    }

    /// Splits the carrier into rank blocks: block 1 is the set of minimal
    /// elements, block i+1 the minimal elements of what is left.
    ///
    /// Blocks are disjoint antichains covering the carrier.
    pub fn rank_partition_idx(&self) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..self.len()).collect();
        let mut blocks = Vec::new();
        while !remaining.is_empty() {
            let block = self.minimal_of_idx(&remaining);
            remaining.retain(|x| !block.contains(x));
            blocks.push(block);
        }
        blocks
    }

    /// Name-based [`Self::rank_partition_idx`]; members sorted lexicographically.
    pub fn rank_partition(&self) -> Vec<Vec<String>> {
        self.rank_partition_idx()
            .iter()
            .map(|b| self.names_sorted(b))
            .collect()
    }

    /// 1-based rank of every element (index into the rank partition).
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.len()];
        for (i, block) in self.rank_partition_idx().iter().enumerate() {
            for &x in block {
                ranks[x] = i + 1;
            }
        }
        ranks
    }

    /// Same carrier, reversed relation. Involutive.
    pub fn order_dual(&self) -> Arc<Poset> {
        Arc::new(Poset {
            elements: self.elements.clone(),
            leq: self.leq.transpose(),
        })
    }

    /// The greatest element, if one exists.
    pub fn greatest(&self) -> Option<usize> {
        (0..self.len()).find(|&g| (0..self.len()).all(|x| self.leq_idx(x, g)))
    }

    /// The least element, if one exists.
    pub fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|x| self.leq_idx(b, x)))
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.leq_idx(i, j) || self.leq_idx(j, i)))
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    /// Sorted lexicographically; this is the canonical exchange form.
    pub fn covers(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt_idx(i, j) && !(0..n).any(|k| self.lt_idx(i, k) && self.lt_idx(k, j)) {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out.sort();
        out
    }

    fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, PosetError> {
        names
            .iter()
            .map(|s| {
                self.index_of(s.as_ref())
                    .ok_or_else(|| PosetError::UnknownElement(s.as_ref().to_string()))
            })
            .collect()
    }

    fn names_sorted(&self, idx: &[usize]) -> Vec<String> {
        let mut out: Vec<String> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        out.sort();
        out
    }
}

fn close_transitively(leq: &mut BitMatrix) {
    let n = leq.n;
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..n {
            for i in 0..n {
                if leq.get(i, k) {
                    changed |= leq.union_row(i, k);
                }
            }
        }
    }
}

fn check_antisymmetry(leq: &BitMatrix, elements: &[String]) -> Result<(), PosetError> {
    for i in 0..leq.n {
        for j in (i + 1)..leq.n {
            if leq.get(i, j) && leq.get(j, i) {
                return Err(PosetError::CycleDetected(
                    elements[i].clone(),
                    elements[j].clone(),
                ));
            }
        }
    }
    Ok(())
}

fn is_transitive(leq: &BitMatrix) -> bool {
    let n = leq.n;
    (0..n)
        .all(|i| (0..n).all(|j| !leq.get(i, j) || (0..n).all(|k| !leq.get(j, k) || leq.get(i, k))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_chain() -> Arc<Poset> {
        Poset::build(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn builds_three_chain() {
        let p = three_chain();
        assert!(p.leq("a", "c").unwrap());
        assert!(!p.leq("c", "a").unwrap());
        assert!(p.leq("b", "b").unwrap());
    }

    #[test]
    fn singleton_poset() {
        let p = Poset::build(&["x"], &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq("x", "x").unwrap());
        assert_eq!(p.max_chain_length(), 0);
    }

    #[test]
    fn rejects_cycle() {
        let err = Poset::build(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, PosetError::CycleDetected(..)));
        // longer cycle, found through the closure
        let err =
            Poset::build(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap_err();
        assert!(matches!(err, PosetError::CycleDetected(..)));
    }

    #[test]
    fn rejects_duplicates_and_unknowns() {
        assert_eq!(
            Poset::build(&["a", "a"], &[]).unwrap_err(),
            PosetError::DuplicateElement("a".into())
        );
        assert_eq!(
            Poset::build(&["a"], &[("a", "z")]).unwrap_err(),
            PosetError::UnknownElement("z".into())
        );
    }

    #[test]
    fn boolean_cube_shapes() {
        let b1 = Poset::boolean_cube(1).unwrap();
        assert_eq!(b1.elements(), ["0", "1"]);
        assert!(b1.leq("0", "1").unwrap());

        let b2 = Poset::boolean_cube(2).unwrap();
        assert!(b2.leq("00", "01").unwrap());
        assert!(b2.leq("00", "10").unwrap());
        assert!(b2.leq("01", "11").unwrap());
        assert!(!b2.leq("01", "10").unwrap());
        assert!(!b2.leq("10", "01").unwrap());

        let b3 = Poset::boolean_cube(3).unwrap();
        assert_eq!(b3.len(), 8);
        assert_eq!(b3.max_chain_length(), 3);

        assert!(Poset::boolean_cube(0).is_err());
        assert!(Poset::boolean_cube(17).is_err());
        // carrier cap bites before the nominal 16-dimension limit
        assert!(matches!(
            Poset::boolean_cube(13).unwrap_err(),
            PosetError::SizeLimit(_)
        ));
    }

    #[test]
    fn induced_order_cases() {
        let m = three_chain();
        // two states mapped to the same rank are incomparable, not equal-ordered
        let p = Poset::induced_order(&["s", "t"], &|_| Some("b".to_string()), &m).unwrap();
        assert!(!p.leq("s", "t").unwrap());
        assert!(!p.leq("t", "s").unwrap());
        assert!(p.leq("s", "s").unwrap());

        // injective onto a chain gives an isomorphic chain
        let q = Poset::induced_order(
            &["u", "v", "w"],
            &|s| {
                Some(match s {
                    "u" => "a".to_string(),
                    "v" => "b".to_string(),
                    _ => "c".to_string(),
                })
            },
            &m,
        )
        .unwrap();
        assert!(q.leq("u", "w").unwrap());
        assert_eq!(q.max_chain_length(), 2);

        // three states onto an antichain give the discrete order
        let anti = Poset::build(&["p", "q", "r"], &[]).unwrap();
        let d = Poset::induced_order(
            &["1", "2", "3"],
            &|s| {
                Some(match s {
                    "1" => "p".to_string(),
                    "2" => "q".to_string(),
                    _ => "r".to_string(),
                })
            },
            &anti,
        )
        .unwrap();
        for a in ["1", "2", "3"] {
            for b in ["1", "2", "3"] {
                assert_eq!(d.leq(a, b).unwrap(), a == b);
            }
        }
    }

    #[test]
    fn down_and_up_sets() {
        let p = three_chain();
        assert_eq!(p.down_set("b").unwrap(), ["a", "b"]);
        assert_eq!(p.up_set("b").unwrap(), ["b", "c"]);

        let b2 = Poset::boolean_cube(2).unwrap();
        assert_eq!(b2.down_set("11").unwrap(), ["00", "01", "10", "11"]);

        let anti = Poset::build(&["x", "y"], &[]).unwrap();
        assert_eq!(anti.down_set("x").unwrap(), ["x"]);
        assert!(p.down_set("zz").is_err());
    }

    #[test]
    fn minimal_of_cases() {
        let p = three_chain();
        assert_eq!(p.minimal_of(&["b", "c"]).unwrap(), ["b"]);

        let b2 = Poset::boolean_cube(2).unwrap();
        assert_eq!(b2.minimal_of(&["01", "10"]).unwrap(), ["01", "10"]);
        assert_eq!(b2.minimal_of(&["00", "01", "10", "11"]).unwrap(), ["00"]);
    }

    #[test]
    fn chain_length_counts_steps() {
        assert_eq!(three_chain().max_chain_length(), 2);
        assert_eq!(Poset::boolean_cube(3).unwrap().max_chain_length(), 3);
        let anti = Poset::build(&["x", "y", "z"], &[]).unwrap();
        assert_eq!(anti.max_chain_length(), 0);
    }

    #[test]
    fn rank_partition_cases() {
        let p = three_chain();
        assert_eq!(p.rank_partition(), vec![vec!["a"], vec!["b"], vec!["c"]]);

        let b2 = Poset::boolean_cube(2).unwrap();
        assert_eq!(
            b2.rank_partition(),
            vec![vec!["00"], vec!["01", "10"], vec!["11"]]
        );

        let anti = Poset::build(&["x", "y", "z"], &[]).unwrap();
        assert_eq!(anti.rank_partition(), vec![vec!["x", "y", "z"]]);
    }

    #[test]
    fn rank_partition_blocks_are_ranked_antichains() {
        let b3 = Poset::boolean_cube(3).unwrap();
        let blocks = b3.rank_partition_idx();
        let mut seen = vec![false; b3.len()];
        for (i, block) in blocks.iter().enumerate() {
            for &x in block {
                assert!(!seen[x]);
                seen[x] = true;
                for &y in block {
                    assert!(!b3.lt_idx(x, y));
                }
                // all strict predecessors sit in earlier blocks
                for p in 0..b3.len() {
                    if b3.lt_idx(p, x) {
                        let pb = blocks.iter().position(|b| b.contains(&p)).unwrap();
                        assert!(pb < i);
                    }
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn dual_is_involutive_and_preserves_chain_length() {
        let p = three_chain();
        let d = p.order_dual();
        assert!(d.leq("c", "a").unwrap());
        assert!(!d.leq("a", "c").unwrap());
        assert_eq!(*d.order_dual(), *p);
        assert_eq!(d.max_chain_length(), p.max_chain_length());

        let b2 = Poset::boolean_cube(2).unwrap();
        let db2 = b2.order_dual();
        assert_eq!(db2.max_chain_length(), 2);
        assert_eq!(db2.greatest(), b2.least());
    }

    #[test]
    fn covers_recovers_hasse_edges() {
        let b2 = Poset::boolean_cube(2).unwrap();
        assert_eq!(
            b2.covers(),
            vec![
                ("00".to_string(), "01".to_string()),
                ("00".to_string(), "10".to_string()),
                ("01".to_string(), "11".to_string()),
                ("10".to_string(), "11".to_string()),
            ]
        );
        // closure input with a redundant long edge yields the same covers
        let p = Poset::build(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert_eq!(
            p.covers(),
            vec![
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "c".to_string()),
            ]
        );
    }

    #[test]
    fn greatest_and_least() {
        let p = three_chain();
        assert_eq!(p.greatest(), p.index_of("c"));
        assert_eq!(p.least(), p.index_of("a"));
        let anti = Poset::build(&["x", "y"], &[]).unwrap();
        assert_eq!(anti.greatest(), None);
        assert_eq!(anti.least(), None);
    }
}
