//! Subsets of a group as bit-vectors, and the set-algebra kernel built on
//! row gathers over the Cayley table: products, translates, powers,
//! symmetrization, the shift maximizer, Ruzsa covering and greedy translate
//! covers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Elem, Group};

/// Subset of the elements of a group of known order.
///
/// Cardinality is cached; the words past bit `n` are kept zero so equality
/// and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    n: usize,
    words: Vec<u64>,
    card: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("element {index} out of range for group order {order}")]
    IndexOutOfRange { index: usize, order: usize },
}

impl ElementSet {
    pub fn empty(n: usize) -> ElementSet {
        ElementSet { n, words: vec![0; n.div_ceil(64)], card: 0 }
    }

    pub fn full(n: usize) -> ElementSet {
        let mut s = ElementSet::empty(n);
        for i in 0..n {
            s.words[i / 64] |= 1u64 << (i % 64);
        }
        s.card = n;
        s
    }

    pub fn singleton(n: usize, x: usize) -> ElementSet {
        let mut s = ElementSet::empty(n);
        s.insert(x);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, xs: I) -> Result<ElementSet, SetError> {
        let mut s = ElementSet::empty(n);
        for x in xs {
            if x >= n {
                return Err(SetError::IndexOutOfRange { index: x, order: n });
            }
            s.insert(x);
        }
        Ok(s)
    }

    pub fn group_order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    pub fn is_full(&self) -> bool {
        self.card == self.n
    }

    #[inline(always)]
    pub fn contains(&self, x: usize) -> bool {
        debug_assert!(x < self.n);
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline(always)]
    pub fn insert(&mut self, x: usize) -> bool {
        debug_assert!(x < self.n);
        let w = &mut self.words[x / 64];
        let bit = 1u64 << (x % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.card += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, x: usize) -> bool {
        debug_assert!(x < self.n);
        let w = &mut self.words[x / 64];
        let bit = 1u64 << (x % 64);
        if *w & bit != 0 {
            *w &= !bit;
            self.card -= 1;
            true
        } else {
            false
        }
    }

    pub fn iter(&self) -> SetIter<'_> {
        SetIter { words: &self.words, word_ix: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn smallest(&self) -> Option<usize> {
        self.iter().next()
    }

    fn recount(&mut self) {
        self.card = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn assert_same_order(&self, other: &ElementSet) {
        assert_eq!(self.n, other.n, "sets belong to groups of different orders");
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        self.assert_same_order(other);
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.assert_same_order(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.recount();
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        self.assert_same_order(other);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out.recount();
        out
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        self.assert_same_order(other);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out.recount();
        out
    }

    pub fn complement(&self) -> ElementSet {
        let mut out = ElementSet::full(self.n);
        for (a, b) in out.words.iter_mut().zip(&self.words) {
            *a &= !b;
        }
        out.recount();
        out
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.assert_same_order(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &ElementSet) -> bool {
        self.assert_same_order(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection_size(&self, other: &ElementSet) -> usize {
        self.assert_same_order(other);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ElementSet(n={}, {:?})", self.n, self.to_indices())
    }
}

pub struct SetIter<'a> {
    words: &'a [u64],
    word_ix: usize,
    cur: u64,
}

impl Iterator for SetIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.cur == 0 {
            self.word_ix += 1;
            if self.word_ix >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.word_ix];
        }
        let tz = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - 1;
        Some(self.word_ix * 64 + tz)
    }
}

/// Product kernel parallelizes over left-factor elements past this size;
/// the bit-or reduction makes the result independent of the split.
const PRODUCT_PAR_MIN: usize = 256;

/// {x·y : x ∈ a, y ∈ b}, as a union of row gathers over the Cayley table.
pub fn product(g: &Group, a: &ElementSet, b: &ElementSet) -> ElementSet {
    let n = g.order();
    assert_eq!(a.group_order(), n);
    assert_eq!(b.group_order(), n);
    let b_idx: Vec<usize> = b.to_indices();
    let xs: Vec<usize> = a.to_indices();

    let gather = |acc: &mut Vec<u64>, x: usize| {
        let row = g.row(x);
        for &y in &b_idx {
            let z = row[y] as usize;
            acc[z / 64] |= 1u64 << (z % 64);
        }
    };

    let words = if xs.len() >= PRODUCT_PAR_MIN {
        xs.par_chunks(64)
            .map(|chunk| {
                let mut acc = vec![0u64; n.div_ceil(64)];
                for &x in chunk {
                    gather(&mut acc, x);
                }
                acc
            })
            .reduce(
                || vec![0u64; n.div_ceil(64)],
                |mut lhs, rhs| {
                    for (l, r) in lhs.iter_mut().zip(&rhs) {
                        *l |= r;
                    }
                    lhs
                },
            )
    } else {
        let mut acc = vec![0u64; n.div_ceil(64)];
        for &x in &xs {
            gather(&mut acc, x);
        }
        acc
    };

    let mut out = ElementSet { n, words, card: 0 };
    out.recount();
    out
}

/// x·A
pub fn left_translate(g: &Group, x: Elem, a: &ElementSet) -> ElementSet {
    let n = g.order();
    let mut out = ElementSet::empty(n);
    let row = g.row(x as usize);
    for y in a.iter() {
        out.insert(row[y] as usize);
    }
    out
}

/// A·x
pub fn right_translate(g: &Group, a: &ElementSet, x: Elem) -> ElementSet {
    let n = g.order();
    let mut out = ElementSet::empty(n);
    for y in a.iter() {
        out.insert(g.mul(y as Elem, x) as usize);
    }
    out
}

/// A⁻¹
pub fn inverse_set(g: &Group, a: &ElementSet) -> ElementSet {
    let mut out = ElementSet::empty(g.order());
    for y in a.iter() {
        out.insert(g.inv(y as Elem) as usize);
    }
    out
}

/// A·A·…·A with k factors, left associated. k ≥ 1.
pub fn power(g: &Group, a: &ElementSet, k: u32) -> ElementSet {
    assert!(k >= 1, "power needs k >= 1");
    let mut acc = a.clone();
    for _ in 1..k {
        acc = product(g, &acc, a);
    }
    acc
}

/// A ∪ A⁻¹ ∪ {identity}
pub fn symmetrize(g: &Group, a: &ElementSet) -> ElementSet {
    let mut out = a.union(&inverse_set(g, a));
    out.insert(Group::identity() as usize);
    out
}

pub fn is_symmetric(g: &Group, a: &ElementSet) -> bool {
    a.iter().all(|x| a.contains(g.inv(x as Elem) as usize))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestShift {
    pub shift: Elem,
    pub overlap: usize,
    /// |A·B⁻¹|, the other side of the counting identity
    /// Σ_{x ∈ AB⁻¹} |A ∩ xB| = |A|·|B|.
    pub diff_size: usize,
}

/// The shift g ∈ A·B⁻¹ maximizing |A ∩ g·B| (ties to the smallest index).
/// The maximizer always satisfies |A|·|B| ≤ |AB⁻¹| · overlap.
pub fn best_shift(g: &Group, a: &ElementSet, b: &ElementSet) -> BestShift {
    assert!(!a.is_empty() && !b.is_empty(), "best_shift needs nonempty sets");
    let d = product(g, a, &inverse_set(g, b));
    let b_idx: Vec<usize> = b.to_indices();
    let mut best = BestShift { shift: 0, overlap: 0, diff_size: d.len() };
    let mut first = true;
    for x in d.iter() {
        let row = g.row(x);
        let mut overlap = 0usize;
        for &y in &b_idx {
            if a.contains(row[y] as usize) {
                overlap += 1;
            }
        }
        if first || overlap > best.overlap {
            best.shift = x as Elem;
            best.overlap = overlap;
            first = false;
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct RuzsaCover {
    /// Scan-greedy maximal X with {x·A} pairwise disjoint.
    pub chosen: ElementSet,
    /// ⌈n / |A|⌉; the construction guarantees |chosen| ≤ bound.
    pub bound: usize,
}

/// Greedy maximal X ⊆ G with the translates {x·A : x ∈ X} pairwise disjoint,
/// scanning elements in index order. Maximality gives G ⊆ X·A·A⁻¹ and
/// disjointness gives |X| ≤ ⌈n/|A|⌉.
pub fn ruzsa_cover(g: &Group, a: &ElementSet) -> RuzsaCover {
    assert!(!a.is_empty(), "ruzsa_cover needs a nonempty set");
    let n = g.order();
    let a_idx: Vec<usize> = a.to_indices();
    let mut used = ElementSet::empty(n);
    let mut chosen = ElementSet::empty(n);
    for x in 0..n {
        let row = g.row(x);
        if a_idx.iter().all(|&y| !used.contains(row[y] as usize)) {
            for &y in &a_idx {
                used.insert(row[y] as usize);
            }
            chosen.insert(x);
        }
    }
    RuzsaCover { chosen, bound: n.div_ceil(a.len()) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    /// Chosen left shifts, in pick order; their translates g·A union to G.
    pub shifts: Vec<Elem>,
    /// The bound that was tested.
    pub bound: usize,
    /// True certifies a cover by at most `bound` translates. False only
    /// means greedy needed more; it does not disprove a smaller cover.
    pub within_bound: bool,
}

/// Greedy set cover of G by left translates g·A: each round picks the
/// translate covering the most uncovered elements, ties to the smallest g.
pub fn greedy_translate_cover(g: &Group, a: &ElementSet, bound: usize) -> CoverResult {
    assert!(!a.is_empty(), "cover needs a nonempty set");
    let n = g.order();
    let a_idx: Vec<usize> = a.to_indices();
    let mut uncovered = ElementSet::full(n);
    let mut shifts = Vec::new();
    while !uncovered.is_empty() {
        let mut best_x = 0usize;
        let mut best_gain = 0usize;
        for x in 0..n {
            let row = g.row(x);
            let gain = a_idx.iter().filter(|&&y| uncovered.contains(row[y] as usize)).count();
            if gain > best_gain {
                best_gain = gain;
                best_x = x;
            }
        }
        debug_assert!(best_gain > 0, "translates of a nonempty set always cover G");
        let row = g.row(best_x);
        for &y in &a_idx {
            uncovered.remove(row[y] as usize);
        }
        shifts.push(best_x as Elem);
    }
    let within = shifts.len() <= bound;
    CoverResult { shifts, bound, within_bound: within }
}

/// On-disk set format: `{"group": "<spec>", "elements": [indices]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetFile {
    pub group: String,
    pub elements: Vec<usize>,
}

impl SetFile {
    pub fn new(group: impl Into<String>, set: &ElementSet) -> SetFile {
        SetFile { group: group.into(), elements: set.to_indices() }
    }

    pub fn to_set(&self, g: &Group) -> Result<ElementSet, SetError> {
        ElementSet::from_indices(g.order(), self.elements.iter().copied())
    }
}
