//! Subgroup machinery: generated closures, the derived subgroup, full
//! lattice enumeration by one-generator extension, normality and quotients.

use std::collections::HashMap;

use thiserror::Error;

use crate::group::{Elem, Group};
use crate::sets::ElementSet;

/// Smallest subgroup containing `seeds` (and the identity): breadth-first
/// closure under right multiplication by the seeds. Inverses come for free
/// in a finite group.
pub fn closure(g: &Group, seeds: &ElementSet) -> ElementSet {
    let n = g.order();
    assert_eq!(seeds.group_order(), n);
    let gens: Vec<usize> = seeds.to_indices();
    let mut res = ElementSet::empty(n);
    res.insert(0);
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let t = queue[head];
        head += 1;
        let row = g.row(t);
        for &s in &gens {
            let u = row[s] as usize;
            if res.insert(u) {
                queue.push(u);
            }
        }
    }
    res
}

pub fn closure_of_elems(g: &Group, seeds: &[Elem]) -> ElementSet {
    let set = ElementSet::from_indices(g.order(), seeds.iter().map(|&x| x as usize))
        .expect("seed out of range");
    closure(g, &set)
}

/// ⟨H ∪ {x}⟩ for a subgroup H, by breadth-first search over right cosets of
/// H: each newly reached coset is filled wholesale, which keeps the total
/// cost linear in the size of the result.
pub(crate) fn extend_subgroup(g: &Group, h: &ElementSet, h_elems: &[usize], x: usize) -> ElementSet {
    debug_assert!(h.contains(0));
    let mut k = h.clone();
    let mut reps = vec![0usize];
    let mut head = 0;
    while head < reps.len() {
        let t = reps[head];
        head += 1;
        let row = g.row(t);
        // Right-multiplying by every element of H and by x keeps K closed.
        for &s in h_elems.iter().chain(std::iter::once(&x)) {
            let u = row[s] as usize;
            if !k.contains(u) {
                for &e in h_elems {
                    k.insert(g.mul(e as Elem, u as Elem) as usize);
                }
                debug_assert!(k.contains(u));
                reps.push(u);
            }
        }
    }
    k
}

/// Closure of all commutators a⁻¹b⁻¹ab with a, b ranging over `within`.
pub fn derived_within(g: &Group, within: &ElementSet) -> ElementSet {
    let elems: Vec<usize> = within.to_indices();
    let mut comms = ElementSet::empty(g.order());
    for &a in &elems {
        for &b in &elems {
            comms.insert(g.commutator(a as Elem, b as Elem) as usize);
        }
    }
    closure(g, &comms)
}

/// The commutator subgroup [G, G].
pub fn derived_subgroup(g: &Group) -> ElementSet {
    derived_within(g, &ElementSet::full(g.order()))
}

pub fn is_perfect(g: &Group) -> bool {
    derived_subgroup(g).len() == g.order()
}

/// Contains the identity and is closed under the table. Inverse closure
/// follows in a finite group.
pub fn is_subgroup(g: &Group, s: &ElementSet) -> bool {
    if !s.contains(0) {
        return false;
    }
    let elems: Vec<usize> = s.to_indices();
    for &a in &elems {
        let row = g.row(a);
        for &b in &elems {
            if !s.contains(row[b] as usize) {
                return false;
            }
        }
    }
    true
}

pub fn is_normal(g: &Group, h: &ElementSet) -> bool {
    let elems: Vec<usize> = h.to_indices();
    for y in 0..g.order() {
        for &x in &elems {
            if !h.contains(g.conjugate(y as Elem, x as Elem) as usize) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct SubgroupDescriptor {
    pub elements: ElementSet,
    pub index: usize,
    pub normal: bool,
}

impl SubgroupDescriptor {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    /// Sorted by (order, element set); includes the trivial subgroup and G.
    pub subgroups: Vec<SubgroupDescriptor>,
    /// True when enumeration stopped at the budget; the list is then a
    /// subset of the lattice.
    pub truncated: bool,
}

impl SubgroupLattice {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }
}

/// Enumerate the full subgroup lattice by iterated one-generator extension:
/// seed with every cyclic subgroup, then close each known subgroup with each
/// outside element until no new subgroup appears. Every subgroup is
/// reachable this way because generators can be added one at a time.
pub fn enumerate_subgroups(g: &Group, max_count: usize) -> SubgroupLattice {
    let n = g.order();
    let mut by_words: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut list: Vec<ElementSet> = Vec::new();
    let mut truncated = false;

    let push = |set: ElementSet, list: &mut Vec<ElementSet>, by_words: &mut HashMap<Vec<u64>, usize>| -> bool {
        if by_words.contains_key(set.words()) {
            return true;
        }
        if list.len() >= max_count {
            return false;
        }
        by_words.insert(set.words().to_vec(), list.len());
        list.push(set);
        true
    };

    'seed: for x in 0..n {
        let cyc = closure_of_elems(g, &[x as Elem]);
        if !push(cyc, &mut list, &mut by_words) {
            truncated = true;
            break 'seed;
        }
    }

    if !truncated {
        let mut i = 0;
        'grow: while i < list.len() {
            let h = list[i].clone();
            let h_elems: Vec<usize> = h.to_indices();
            for x in 0..n {
                if h.contains(x) {
                    continue;
                }
                let k = extend_subgroup(g, &h, &h_elems, x);
                if !push(k, &mut list, &mut by_words) {
                    truncated = true;
                    break 'grow;
                }
            }
            i += 1;
        }
    }

    list.sort_by(|a, b| (a.len(), a.words()).cmp(&(b.len(), b.words())));
    let subgroups = list
        .into_iter()
        .map(|elements| {
            let index = n / elements.len();
            let normal = is_normal(g, &elements);
            SubgroupDescriptor { elements, index, normal }
        })
        .collect();
    SubgroupLattice { subgroups, truncated }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("set is not a subgroup")]
    NotASubgroup,
}

/// Quotient by a normal subgroup: the Cayley table on cosets, with the
/// subgroup's own coset at index 0, others ordered by smallest member.
/// The second component maps each element to its coset index.
pub fn quotient(g: &Group, sub: &SubgroupDescriptor) -> Result<(Group, Vec<Elem>), QuotientError> {
    let h = &sub.elements;
    if !is_subgroup(g, h) {
        return Err(QuotientError::NotASubgroup);
    }
    if !sub.normal || !is_normal(g, h) {
        return Err(QuotientError::NotNormal);
    }
    let n = g.order();
    let h_elems: Vec<usize> = h.to_indices();
    let m = n / h_elems.len();

    let mut coset_of = vec![u16::MAX; n];
    let mut reps: Vec<Elem> = Vec::with_capacity(m);
    for u in 0..n {
        if coset_of[u] != u16::MAX {
            continue;
        }
        let k = reps.len() as u16;
        for &e in &h_elems {
            coset_of[g.mul(e as Elem, u as Elem) as usize] = k;
        }
        reps.push(u as Elem);
    }
    debug_assert_eq!(reps.len(), m);

    let mut table = vec![0 as Elem; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = coset_of[g.mul(reps[i], reps[j]) as usize];
        }
    }
    let name = format!("{}/<{}>", g.name(), h_elems.len());
    let q = Group::from_table(name, m, table).expect("quotient of a group is a group");
    Ok((q, coset_of))
}
