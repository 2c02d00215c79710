//! Conjugacy classes: the partition of a group by g ~ xgx⁻¹, with sizes,
//! representatives and the inverse-class pairing.

use crate::group::{Elem, Group};
use crate::sets::ElementSet;

#[derive(Debug, Clone)]
pub struct ClassData {
    class_of: Vec<u32>,
    classes: Vec<ElementSet>,
    sizes: Vec<usize>,
    inverse_class: Vec<usize>,
    representatives: Vec<Elem>,
}

impl ClassData {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn class(&self, j: usize) -> &ElementSet {
        &self.classes[j]
    }

    pub fn classes(&self) -> &[ElementSet] {
        &self.classes
    }

    pub fn size(&self, j: usize) -> usize {
        self.sizes[j]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s
    }

    pub fn representative(&self, j: usize) -> Elem {
        self.representatives[j]
    }

    /// j′ with C_{j′} = C_j⁻¹; an involution fixing the identity class.
    pub fn inverse_class(&self, j: usize) -> usize {
        self.inverse_class[j]
    }
}

/// Partition the group into conjugacy classes. Elements are scanned in index
/// order, so class 0 is the identity class and each representative is the
/// smallest element of its class.
pub fn conjugacy_classes(g: &Group) -> ClassData {
    let n = g.order();
    let mut class_of = vec![u32::MAX; n];
    let mut classes: Vec<ElementSet> = Vec::new();
    let mut representatives: Vec<Elem> = Vec::new();

    for x in 0..n {
        if class_of[x] != u32::MAX {
            continue;
        }
        let j = classes.len() as u32;
        let mut orbit = ElementSet::empty(n);
        for y in 0..n {
            orbit.insert(g.conjugate(y as Elem, x as Elem) as usize);
        }
        for z in orbit.iter() {
            debug_assert_eq!(class_of[z], u32::MAX);
            class_of[z] = j;
        }
        representatives.push(x as Elem);
        classes.push(orbit);
    }

    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    let inverse_class: Vec<usize> = representatives
        .iter()
        .map(|&r| class_of[g.inv(r) as usize] as usize)
        .collect();

    ClassData { class_of, classes, sizes, inverse_class, representatives }
}
