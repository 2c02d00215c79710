//! Finite groups as dense Cayley tables with the identity at index 0.

use std::fmt;

use thiserror::Error;

use crate::rng::SplitMix64;

/// Element index into a group's Cayley table.
pub type Elem = u16;

/// Largest order representable at all (u16 element indices; a table this
/// size is 512 MiB). The practical cap lives in [`crate::catalog`].
pub const ABSOLUTE_ORDER_CAP: usize = 16_384;

/// Orders up to this get the full O(n³) associativity check; larger tables
/// are spot-checked on `ASSOC_SAMPLES` seeded random triples.
pub const ASSOC_FULL_MAX: usize = 512;
pub const ASSOC_SAMPLES: u64 = 1_000_000;

#[derive(Clone)]
pub struct Group {
    name: String,
    n: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotAGroup {
    #[error("table has {got} entries, want {want} for order {n}")]
    Shape { n: usize, want: usize, got: usize },
    #[error("entry table[{row}][{col}] = {value} is out of range for order {n}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, n: usize },
    #[error("order {0} exceeds the absolute cap {ABSOLUTE_ORDER_CAP}")]
    TooLarge(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not a Latin square: row {row} repeats value {value}")]
    RowNotPermutation { row: usize, value: Elem },
    #[error("not a Latin square: column {col} repeats value {value}")]
    ColumnNotPermutation { col: usize, value: Elem },
    #[error("element {0} has no inverse")]
    MissingInverse(Elem),
    #[error("inverse of {0} is not two-sided")]
    OneSidedInverse(Elem),
    #[error("associativity fails at ({a}, {b}, {c})")]
    NotAssociative { a: Elem, b: Elem, c: Elem },
}

/// How `validate` checked associativity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssocMode {
    Full,
    Sampled { triples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub order: usize,
    pub assoc: AssocMode,
}

impl Group {
    /// Build a group from a row-major `order × order` table.
    ///
    /// The identity is located and re-indexed to 0 if it sits elsewhere.
    /// Construction checks shape, identity and inverse existence; the full
    /// invariant suite (Latin square, associativity) is [`Group::validate`].
    pub fn from_table(name: impl Into<String>, order: usize, mut table: Vec<Elem>) -> Result<Group, NotAGroup> {
        let n = order;
        if n == 0 || n > ABSOLUTE_ORDER_CAP {
            return Err(NotAGroup::TooLarge(n));
        }
        if table.len() != n * n {
            return Err(NotAGroup::Shape { n, want: n * n, got: table.len() });
        }
        for (i, &v) in table.iter().enumerate() {
            if (v as usize) >= n {
                return Err(NotAGroup::EntryOutOfRange { row: i / n, col: i % n, value: v as usize, n });
            }
        }

        // Two-sided identity.
        let id = (0..n).find(|&e| {
            (0..n).all(|b| table[e * n + b] as usize == b) && (0..n).all(|a| table[a * n + e] as usize == a)
        });
        let id = match id {
            Some(e) => e,
            None => return Err(NotAGroup::NoIdentity),
        };

        if id != 0 {
            // Relabel by the transposition 0 <-> id.
            let perm = |x: usize| -> usize {
                if x == 0 { id } else if x == id { 0 } else { x }
            };
            let mut relabeled = vec![0 as Elem; n * n];
            for a in 0..n {
                for b in 0..n {
                    let v = table[perm(a) * n + perm(b)] as usize;
                    relabeled[a * n + b] = perm(v) as Elem;
                }
            }
            table = relabeled;
        }

        let mut inverse = vec![0 as Elem; n];
        for a in 0..n {
            match (0..n).find(|&x| table[a * n + x] == 0) {
                Some(x) => inverse[a] = x as Elem,
                None => return Err(NotAGroup::MissingInverse(a as Elem)),
            }
        }

        Ok(Group { name: name.into(), n, table, inverse })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub const fn identity() -> Elem {
        0
    }

    #[inline(always)]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.n + b as usize]
    }

    #[inline(always)]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    /// Row `a` of the table: the left-translation map x ↦ a·x.
    #[inline(always)]
    pub fn row(&self, a: usize) -> &[Elem] {
        &self.table[a * self.n..(a + 1) * self.n]
    }

    pub fn conjugate(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        // [a,b] = a⁻¹ b⁻¹ a b
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut y = a;
        let mut ord = 1usize;
        while y != 0 {
            y = self.mul(y, a);
            ord += 1;
        }
        ord
    }

    /// Least common multiple of the element orders (divides the group order).
    pub fn exponent(&self) -> u64 {
        let mut e: u64 = 1;
        for a in 0..self.n {
            let o = self.element_order(a as Elem) as u64;
            e = lcm(e, o);
        }
        e
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.table[a * self.n + b] != self.table[b * self.n + a] {
                    return false;
                }
            }
        }
        true
    }

    /// Run the full invariant suite: identity placement, Latin square rows
    /// and columns, two-sided inverses, associativity. Associativity is
    /// exhaustive up to `ASSOC_FULL_MAX` and sampled (seeded) beyond.
    pub fn validate(&self, seed: u64) -> Result<Validation, NotAGroup> {
        let n = self.n;
        for b in 0..n {
            if self.table[b] as usize != b {
                return Err(NotAGroup::NoIdentity);
            }
            if self.table[b * n] as usize != b {
                return Err(NotAGroup::NoIdentity);
            }
        }

        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let v = self.table[a * n + b];
                if seen[v as usize] {
                    return Err(NotAGroup::RowNotPermutation { row: a, value: v });
                }
                seen[v as usize] = true;
            }
        }
        for b in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..n {
                let v = self.table[a * n + b];
                if seen[v as usize] {
                    return Err(NotAGroup::ColumnNotPermutation { col: b, value: v });
                }
                seen[v as usize] = true;
            }
        }

        for a in 0..n {
            let x = self.inverse[a];
            if self.mul(a as Elem, x) != 0 {
                return Err(NotAGroup::MissingInverse(a as Elem));
            }
            if self.mul(x, a as Elem) != 0 {
                return Err(NotAGroup::OneSidedInverse(a as Elem));
            }
        }

        let assoc = if n <= ASSOC_FULL_MAX {
            for a in 0..n as Elem {
                for b in 0..n as Elem {
                    let ab = self.mul(a, b);
                    for c in 0..n as Elem {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(NotAGroup::NotAssociative { a, b, c });
                        }
                    }
                }
            }
            AssocMode::Full
        } else {
            let mut rng = SplitMix64::new(seed);
            for _ in 0..ASSOC_SAMPLES {
                let a = rng.below(n as u64) as Elem;
                let b = rng.below(n as u64) as Elem;
                let c = rng.below(n as u64) as Elem;
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(NotAGroup::NotAssociative { a, b, c });
                }
            }
            AssocMode::Sampled { triples: ASSOC_SAMPLES, seed }
        };

        Ok(Validation { order: n, assoc })
    }

    /// Parse the `.cayley` format: first non-comment line is the order, the
    /// next `n` lines are the table rows. `#` starts a comment.
    pub fn from_cayley_text(name: impl Into<String>, text: &str) -> Result<Group, CayleyError> {
        let mut tokens = Vec::new();
        for line in text.lines() {
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            };
            tokens.extend(line.split_whitespace().map(str::to_owned));
        }
        let mut it = tokens.into_iter();
        let n: usize = it
            .next()
            .ok_or_else(|| CayleyError::Parse("empty file".into()))?
            .parse()
            .map_err(|e| CayleyError::Parse(format!("bad order: {e}")))?;
        if n == 0 || n > ABSOLUTE_ORDER_CAP {
            return Err(CayleyError::Group(NotAGroup::TooLarge(n)));
        }
        let mut table = Vec::with_capacity(n * n);
        for tok in it {
            let v: usize = tok
                .parse()
                .map_err(|e| CayleyError::Parse(format!("bad entry {tok:?}: {e}")))?;
            if v >= n {
                let i = table.len();
                return Err(CayleyError::Group(NotAGroup::EntryOutOfRange {
                    row: i / n,
                    col: i % n,
                    value: v,
                    n,
                }));
            }
            table.push(v as Elem);
        }
        if table.len() != n * n {
            return Err(CayleyError::Group(NotAGroup::Shape { n, want: n * n, got: table.len() }));
        }
        Group::from_table(name, n, table).map_err(CayleyError::Group)
    }

    pub fn to_cayley_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n{}\n", self.name, self.n));
        for a in 0..self.n {
            let row: Vec<String> = self.row(a).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({:?}, order {})", self.name, self.n)
    }
}

#[derive(Debug, Error)]
pub enum CayleyError {
    #[error("cayley parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] NotAGroup),
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_table(m: usize) -> Vec<Elem> {
        let mut t = vec![0 as Elem; m * m];
        for a in 0..m {
            for b in 0..m {
                t[a * m + b] = ((a + b) % m) as Elem;
            }
        }
        t
    }

    #[test]
    fn c3_is_valid() {
        let g = Group::from_table("C3", 3, cyclic_table(3)).unwrap();
        let v = g.validate(0).unwrap();
        assert_eq!(v.assoc, AssocMode::Full);
        assert_eq!(g.mul(1, 2), 0);
        assert_eq!(g.inv(1), 2);
        assert_eq!(g.exponent(), 3);
        assert!(g.is_abelian());
    }

    #[test]
    fn row_0_1_1_is_not_latin() {
        // 3x3 table with a repeated value in row 2; identity still row 0.
        let table = vec![0, 1, 2, 1, 2, 0, 2, 0, 0];
        match Group::from_table("bad", 3, table) {
            // Row 2 has no entry equal to 0 twice -> caught at validate; but
            // from_table may already fail to find an inverse.
            Ok(g) => match g.validate(0) {
                Err(NotAGroup::RowNotPermutation { .. }) | Err(NotAGroup::ColumnNotPermutation { .. }) => {}
                other => panic!("expected Latin violation, got {other:?}"),
            },
            Err(NotAGroup::MissingInverse(_)) => {}
            Err(other) => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn intercalate_flip_breaks_associativity() {
        // Swapping a Latin-square intercalate in C6 keeps rows/columns
        // permutations but cannot stay associative.
        let mut t = cyclic_table(6);
        let at = |r: usize, c: usize| r * 6 + c;
        assert_eq!(t[at(1, 1)], t[at(4, 4)]);
        assert_eq!(t[at(1, 4)], t[at(4, 1)]);
        t.swap(at(1, 1), at(1, 4));
        t.swap(at(4, 1), at(4, 4));
        let g = Group::from_table("mutated", 6, t).unwrap();
        match g.validate(0) {
            Err(NotAGroup::NotAssociative { a, b, c }) => {
                // The reported witness must actually fail.
                assert_ne!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn identity_is_relocated_to_zero() {
        // C3 with labels rotated so the identity starts at index 2.
        // relabel x -> (x+1)%3 applied to the standard table.
        let mut t = vec![0 as Elem; 9];
        for a in 0..3usize {
            for b in 0..3usize {
                // original labels: a' = (a+2)%3 etc so that label 2 acts as 0
                let aa = (a + 2) % 3;
                let bb = (b + 2) % 3;
                t[a * 3 + b] = (((aa + bb) % 3 + 1) % 3) as Elem;
            }
        }
        let g = Group::from_table("rotated C3", 3, t).unwrap();
        g.validate(0).unwrap();
        assert_eq!(g.mul(0, 1), 1);
    }

    #[test]
    fn cayley_round_trip() {
        let g = Group::from_table("C4", 4, cyclic_table(4)).unwrap();
        let text = g.to_cayley_text();
        let h = Group::from_cayley_text("C4", &text).unwrap();
        h.validate(0).unwrap();
        assert_eq!(h.order(), 4);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(g.mul(a, b), h.mul(a, b));
            }
        }
    }

    #[test]
    fn cayley_comments_and_identity_normalization() {
        let text = "# order 2, identity is element 1\n2\n1 0\n0 1\n";
        let g = Group::from_cayley_text("swapped", text).unwrap();
        g.validate(0).unwrap();
        assert_eq!(g.mul(0, 1), 1, "identity must be re-indexed to 0");
    }

    #[test]
    fn large_groups_get_sampled_associativity() {
        let mut t = vec![0 as Elem; 600 * 600];
        for a in 0..600 {
            for b in 0..600 {
                t[a * 600 + b] = ((a + b) % 600) as Elem;
            }
        }
        let g = Group::from_table("C600", 600, t).unwrap();
        let v = g.validate(3).unwrap();
        assert_eq!(v.assoc, AssocMode::Sampled { triples: ASSOC_SAMPLES, seed: 3 });
    }

    #[test]
    fn element_orders() {
        let g = Group::from_table("C6", 6, cyclic_table(6)).unwrap();
        assert_eq!(g.element_order(0), 1);
        assert_eq!(g.element_order(1), 6);
        assert_eq!(g.element_order(2), 3);
        assert_eq!(g.element_order(3), 2);
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn s3_exponent_is_lcm_of_orders() {
        // one-line lex order on 3 points: transpositions and 3-cycles
        let table: Vec<Elem> = vec![
            0, 1, 2, 3, 4, 5,
            1, 0, 4, 5, 2, 3,
            2, 3, 0, 1, 5, 4,
            3, 2, 5, 4, 0, 1,
            4, 5, 1, 0, 3, 2,
            5, 4, 3, 2, 1, 0,
        ];
        let g = Group::from_table("S3", 6, table).unwrap();
        g.validate(0).unwrap();
        assert_eq!(g.exponent(), 6);
    }
}
