//! Product-free sets: the decision predicate, exact maximum by
//! branch-and-bound, seeded heuristics, the cyclic and abelian-pullback
//! constructions, and the translate trick.
//!
//! A set A is product-free when no x, y, z ∈ A (not necessarily distinct)
//! satisfy x·y = z; equivalently A ∩ A·A = ∅. The non-distinct reading is
//! deliberate: x² ∈ A with x ∈ A is a violation, and the identity can never
//! belong to a product-free set.

use serde::{Deserialize, Serialize};

use crate::group::{Elem, Group};
use crate::ratio::Ratio;
use crate::rng::SplitMix64;
use crate::sets::{self, ElementSet};
use crate::subgroup::{self, SubgroupDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PfreeMethod {
    Exact,
    Greedy,
    LocalSearch,
    CyclicConstruction,
    AbelianPullback,
    Translate,
}

#[derive(Debug, Clone)]
pub struct PfreeCertificate {
    pub set: ElementSet,
    pub size: usize,
    pub density: Ratio,
    pub method: PfreeMethod,
    /// True only when an exact search ran to completion.
    pub optimal: bool,
}

impl PfreeCertificate {
    fn checked(g: &Group, set: ElementSet, method: PfreeMethod, optimal: bool) -> PfreeCertificate {
        assert!(is_product_free(g, &set), "certificate failed post-verification");
        let size = set.len();
        PfreeCertificate { size, density: Ratio::new(size as u64, g.order() as u64), set, method, optimal }
    }
}

/// A ∩ A·A = ∅. The empty set counts as product-free.
pub fn is_product_free(g: &Group, a: &ElementSet) -> bool {
    if a.is_empty() {
        return true;
    }
    for x in a.iter() {
        let row = g.row(x);
        for y in a.iter() {
            if a.contains(row[y] as usize) {
                return false;
            }
        }
    }
    true
}

/// Incremental bookkeeping shared by the exact search and the heuristics.
///
/// `forbidden[z]` counts the reasons z cannot join the current set A:
/// z ∈ A·A, z·a ∈ A or a·z ∈ A for some a ∈ A, z² ∈ A, or z is the
/// identity. Adding x to A contributes finitely many such reasons, each
/// recorded so removal can decrement them again.
struct PfreeState<'g> {
    g: &'g Group,
    forbidden: Vec<u32>,
    members: Vec<Elem>,
    in_set: Vec<bool>,
    /// Per member, the reasons it added (aligned with `members`).
    effects: Vec<Vec<Elem>>,
    /// sqrt_preimages[x] = all z with z² = x.
    sqrt_preimages: Vec<Vec<Elem>>,
}

impl<'g> PfreeState<'g> {
    fn new(g: &'g Group) -> PfreeState<'g> {
        let n = g.order();
        let mut sqrt_preimages = vec![Vec::new(); n];
        for z in 0..n {
            sqrt_preimages[g.mul(z as Elem, z as Elem) as usize].push(z as Elem);
        }
        let mut forbidden = vec![0u32; n];
        forbidden[0] = 1; // identity: e·e = e
        PfreeState { g, forbidden, members: Vec::new(), in_set: vec![false; n], effects: Vec::new(), sqrt_preimages }
    }

    #[inline]
    fn can_add(&self, x: usize) -> bool {
        self.forbidden[x] == 0 && !self.in_set[x]
    }

    fn add(&mut self, x: Elem) {
        debug_assert!(self.can_add(x as usize));
        let g = self.g;
        let xi = g.inv(x);
        let mut reasons: Vec<Elem> = Vec::with_capacity(6 * self.members.len() + 4);
        for &a in &self.members {
            let ai = g.inv(a);
            reasons.push(g.mul(a, x)); // products landing in the new A·A
            reasons.push(g.mul(x, a));
            reasons.push(g.mul(a, xi)); // z with z·x = a
            reasons.push(g.mul(xi, a)); // z with x·z = a
            reasons.push(g.mul(x, ai)); // z with z·a = x
            reasons.push(g.mul(ai, x)); // z with a·z = x
        }
        reasons.push(g.mul(x, x)); // x² joins A·A
        reasons.push(0); // z·x = x or x·z = x forces z = e
        reasons.extend_from_slice(&self.sqrt_preimages[x as usize]); // z² = x
        for &z in &reasons {
            self.forbidden[z as usize] += 1;
        }
        self.members.push(x);
        self.in_set[x as usize] = true;
        self.effects.push(reasons);
    }

    fn undo_last(&mut self) {
        let x = self.members.pop().expect("undo on empty state");
        self.in_set[x as usize] = false;
        for z in self.effects.pop().expect("effects aligned") {
            self.forbidden[z as usize] -= 1;
        }
    }

    fn remove_at(&mut self, i: usize) {
        let x = self.members.swap_remove(i);
        self.in_set[x as usize] = false;
        for z in self.effects.swap_remove(i) {
            self.forbidden[z as usize] -= 1;
        }
    }

    fn to_set(&self) -> ElementSet {
        ElementSet::from_indices(self.g.order(), self.members.iter().map(|&x| x as usize)).unwrap()
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Maximum product-free set by branch-and-bound over elements in index
/// order. The bound at a node is |A| plus the count of unforbidden
/// candidates ahead. `optimal` is true iff the search closed within the
/// node budget; otherwise the best set found so far is returned.
pub fn exact_max_pfree(g: &Group, node_budget: u64) -> PfreeCertificate {
    let n = g.order();
    let mut st = PfreeState::new(g);
    let mut best: Vec<Elem> = Vec::new();
    let mut nodes: u64 = 0;
    let mut complete = true;

    fn rec(
        st: &mut PfreeState,
        start: usize,
        best: &mut Vec<Elem>,
        nodes: &mut u64,
        budget: u64,
        complete: &mut bool,
    ) {
        *nodes += 1;
        if *nodes > budget {
            *complete = false;
            return;
        }
        if st.members.len() > best.len() {
            *best = st.members.clone();
        }
        let n = st.g.order();
        let mut free_ahead = (start..n).filter(|&x| st.can_add(x)).count();
        for x in start..n {
            if !*complete {
                return;
            }
            if !st.can_add(x) {
                continue;
            }
            if st.members.len() + free_ahead <= best.len() {
                return; // even taking every remaining candidate cannot win
            }
            st.add(x as Elem);
            rec(st, x + 1, best, nodes, budget, complete);
            st.undo_last();
            free_ahead -= 1;
        }
    }

    rec(&mut st, 1, &mut best, &mut nodes, node_budget, &mut complete);

    let set = ElementSet::from_indices(n, best.iter().map(|&x| x as usize)).unwrap();
    PfreeCertificate::checked(g, set, PfreeMethod::Exact, complete)
}

/// Greedy pass over a seeded random element order, keeping product-freeness.
pub fn greedy_pfree(g: &Group, seed: u64) -> PfreeCertificate {
    let mut order: Vec<usize> = (0..g.order()).collect();
    SplitMix64::new(seed).shuffle(&mut order);
    let mut st = PfreeState::new(g);
    for x in order {
        if st.can_add(x) {
            st.add(x as Elem);
        }
    }
    PfreeCertificate::checked(g, st.to_set(), PfreeMethod::Greedy, false)
}

/// Seeded (remove one, refill greedily) local search; the size never
/// decreases, so the result is at least as large as `start`.
pub fn local_search(g: &Group, start: &ElementSet, iters: u64, seed: u64) -> PfreeCertificate {
    assert!(is_product_free(g, start), "local_search needs a product-free start");
    let n = g.order();
    let mut st = PfreeState::new(g);
    for x in start.iter() {
        debug_assert!(st.can_add(x));
        st.add(x as Elem);
    }
    let mut rng = SplitMix64::new(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..iters {
        if st.members.is_empty() {
            break;
        }
        let victim = rng.below(st.members.len() as u64) as usize;
        let removed = st.members[victim];
        st.remove_at(victim);
        rng.shuffle(&mut order);
        let mut refilled = 0usize;
        for &x in &order {
            if st.can_add(x) {
                st.add(x as Elem);
                refilled += 1;
            }
        }
        if refilled == 0 {
            // the move shrank the set; put the removed element back
            debug_assert!(st.can_add(removed as usize));
            st.add(removed);
        }
    }
    PfreeCertificate::checked(g, st.to_set(), PfreeMethod::LocalSearch, false)
}

/// Best of three verified candidates in Z_m: odd residues (m even),
/// residues ≡ 1 (mod 3) when 3 | m, and the largest product-free integer
/// interval centered nearest m/2. The winner has density ≥ 2/7 for every
/// m ≥ 2, with equality at m = 7.
pub fn cyclic_construction(m: usize) -> ElementSet {
    assert!(m >= 2, "cyclic construction needs m >= 2");
    let mut candidates: Vec<ElementSet> = Vec::new();

    if m.is_multiple_of(2) {
        let odds = ElementSet::from_indices(m, (1..m).step_by(2)).unwrap();
        candidates.push(odds);
    }
    if m.is_multiple_of(3) {
        let ones = ElementSet::from_indices(m, (1..m).step_by(3)).unwrap();
        candidates.push(ones);
    }
    // Interval [a, b]: sums live in [2a, 2b]; avoiding [a, b] both before
    // and after wrap-around means b ≤ 2a−1 and b ≤ ⌊(m+a−1)/2⌋.
    let mut best_interval: Option<(usize, usize)> = None;
    for a in 1..m {
        let b = (2 * a - 1).min((m + a - 1) / 2).min(m - 1);
        if b < a {
            continue;
        }
        let better = match best_interval {
            None => true,
            Some((ba, bb)) => {
                let (sz, bsz) = (b - a + 1, bb - ba + 1);
                let (off, boff) = ((a + b).abs_diff(m), (ba + bb).abs_diff(m));
                sz > bsz || (sz == bsz && off < boff)
            }
        };
        if better {
            best_interval = Some((a, b));
        }
    }
    if let Some((a, b)) = best_interval {
        candidates.push(ElementSet::from_indices(m, a..=b).unwrap());
    }

    let verified: Vec<ElementSet> =
        candidates.into_iter().filter(|c| is_pfree_mod(m, c)).collect();
    assert!(!verified.is_empty(), "no candidate verified for m = {m}");
    let mut best = verified[0].clone();
    for c in &verified[1..] {
        if c.len() > best.len() {
            best = c.clone();
        }
    }
    best
}

fn is_pfree_mod(m: usize, a: &ElementSet) -> bool {
    for x in a.iter() {
        for y in a.iter() {
            if a.contains((x + y) % m) {
                return false;
            }
        }
    }
    true
}

/// Pull a cyclic construction back through the abelianization: pick an
/// element of maximal order M in the abelianization, split off a complement, map onto
/// Z_M and take the preimage of `cyclic_construction(M)`. The density in G
/// equals the density in Z_M, so it is ≥ 2/7. Returns None exactly when G
/// is perfect.
pub fn abelian_pullback(g: &Group) -> Option<PfreeCertificate> {
    let n = g.order();
    let der = subgroup::derived_subgroup(g);
    if der.len() == n {
        return None;
    }
    let desc = SubgroupDescriptor { index: n / der.len(), normal: true, elements: der };
    let (q, proj) = subgroup::quotient(g, &desc).expect("derived subgroup is normal");
    let qn = q.order();

    // Element of maximal order, smallest index on ties.
    let (qmax, m_ord) = (0..qn)
        .map(|x| (x, q.element_order(x as Elem)))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("nontrivial quotient");

    // Greedy complement K: maximal subgroup meeting <qmax> trivially. For
    // an element of maximal order in a finite abelian group this is a true
    // complement, so Q/K is cyclic of order m_ord generated by qmax.
    let cyc = subgroup::closure_of_elems(&q, &[qmax as Elem]);
    debug_assert_eq!(cyc.len(), m_ord);
    let mut k = ElementSet::singleton(qn, 0);
    for x in 1..qn {
        if k.contains(x) {
            continue;
        }
        let k_elems: Vec<usize> = k.to_indices();
        let cand = subgroup::extend_subgroup(&q, &k, &k_elems, x);
        if cand.intersection_size(&cyc) == 1 {
            k = cand;
        }
    }
    assert_eq!(k.len() * m_ord, qn, "complement of a maximal-order cyclic factor");

    // Discrete log against qmax modulo K: y ↦ j with y·qmax^{-j} ∈ K.
    let mut powers: Vec<Elem> = Vec::with_capacity(m_ord);
    let mut acc: Elem = 0;
    for _ in 0..m_ord {
        powers.push(acc);
        acc = q.mul(acc, qmax as Elem);
    }
    let mut dlog = vec![usize::MAX; qn];
    for y in 0..qn {
        for (j, &pj) in powers.iter().enumerate() {
            if k.contains(q.mul(y as Elem, q.inv(pj)) as usize) {
                dlog[y] = j;
                break;
            }
        }
        debug_assert_ne!(dlog[y], usize::MAX);
    }

    let base = cyclic_construction(m_ord);
    let mut set = ElementSet::empty(n);
    for x in 0..n {
        if base.contains(dlog[proj[x] as usize]) {
            set.insert(x);
        }
    }
    Some(PfreeCertificate::checked(g, set, PfreeMethod::AbelianPullback, false))
}

/// Right translate X·g that is product-free, with the smallest witness g.
/// X·g works iff g ∉ X⁻¹·X·X⁻¹, so None means X⁻¹XX⁻¹ = G.
pub fn translate_pfree(g: &Group, x: &ElementSet) -> Option<(Elem, ElementSet)> {
    assert!(!x.is_empty(), "translate needs a nonempty set");
    let xi = sets::inverse_set(g, x);
    let blocked = sets::product(g, &sets::product(g, &xi, x), &xi);
    let shift = blocked.complement().smallest()? as Elem;
    let translated = sets::right_translate(g, x, shift);
    assert!(is_product_free(g, &translated), "translate failed post-verification");
    Some((shift, translated))
}
