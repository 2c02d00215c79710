//! Constructors for named group families and the small expression language
//! that names them on the command line:
//!
//! `C<m>`, `D<m>`, `S<k>`, `A<k>`, `PSL2(<q>)`, products `<a>x<b>`
//! (left-associated), `perm:[(1,2),(1,2,3,4,5)]` in cycle notation, and
//! `file:<path>` for a `.cayley` table on disk.

use std::collections::HashMap;

use thiserror::Error;

use crate::group::{CayleyError, Elem, Group, NotAGroup, ABSOLUTE_ORDER_CAP};
use crate::modp::is_prime_u64;

/// Default largest group order built without an explicit opt-in; a table of
/// this size is about 32 MiB of u16 entries.
pub const DEFAULT_ORDER_CAP: usize = 4096;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("order {needed} exceeds the cap {cap} (raise it with --cap or PFREE_LAB_CAP)")]
    CapExceeded { needed: usize, cap: usize },
    #[error("PSL2 needs an odd prime, got {0}")]
    NotPrime(u64),
    #[error("bad group spec {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("failed to read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Group(#[from] NotAGroup),
}

/// Group factory with an order cap.
#[derive(Debug, Clone)]
pub struct Catalog {
    cap: usize,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog { cap: DEFAULT_ORDER_CAP }
    }
}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    pub fn with_cap(cap: usize) -> Catalog {
        Catalog { cap: cap.min(ABSOLUTE_ORDER_CAP) }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_cap(&self, needed: usize) -> Result<(), CatalogError> {
        if needed == 0 || needed > self.cap {
            Err(CatalogError::CapExceeded { needed, cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// Z_m under addition.
    pub fn cyclic(&self, m: usize) -> Result<Group, CatalogError> {
        self.check_cap(m)?;
        let mut table = vec![0 as Elem; m * m];
        for a in 0..m {
            for b in 0..m {
                table[a * m + b] = ((a + b) % m) as Elem;
            }
        }
        Ok(Group::from_table(format!("C{m}"), m, table)?)
    }

    /// Symmetries of the m-gon, order 2m. Elements are pairs (s, t) acting
    /// as x ↦ (−1)ˢx + t on Z_m, indexed s·m + t, so rotations come first.
    pub fn dihedral(&self, m: usize) -> Result<Group, CatalogError> {
        if m < 2 {
            return Err(CatalogError::BadSpec {
                spec: format!("D{m}"),
                reason: "dihedral needs m >= 2".into(),
            });
        }
        let n = 2 * m;
        self.check_cap(n)?;
        let mut table = vec![0 as Elem; n * n];
        for s1 in 0..2usize {
            for t1 in 0..m {
                for s2 in 0..2usize {
                    for t2 in 0..m {
                        // (s1,t1)∘(s2,t2): x ↦ (−1)^{s1+s2} x + (−1)^{s1} t2 + t1
                        let s = (s1 + s2) % 2;
                        let t = if s1 == 0 { (t1 + t2) % m } else { (t1 + m - t2 % m) % m };
                        table[(s1 * m + t1) * n + (s2 * m + t2)] = (s * m + t) as Elem;
                    }
                }
            }
        }
        Ok(Group::from_table(format!("D{m}"), n, table)?)
    }

    /// All permutations of {1..k} in lexicographic one-line order.
    pub fn symmetric(&self, k: usize) -> Result<Group, CatalogError> {
        let n = checked_factorial(k).ok_or(CatalogError::CapExceeded { needed: usize::MAX, cap: self.cap })?;
        self.check_cap(n)?;
        let perms = lex_permutations(k);
        self.permutation_table(format!("S{k}"), perms)
    }

    /// Even permutations of {1..k}, in the induced lexicographic order.
    pub fn alternating(&self, k: usize) -> Result<Group, CatalogError> {
        let full = checked_factorial(k).ok_or(CatalogError::CapExceeded { needed: usize::MAX, cap: self.cap })?;
        let n = if k < 2 { full } else { full / 2 };
        self.check_cap(n)?;
        let perms: Vec<Vec<u8>> = lex_permutations(k).into_iter().filter(|p| is_even(p)).collect();
        self.permutation_table(format!("A{k}"), perms)
    }

    fn permutation_table(&self, name: String, perms: Vec<Vec<u8>>) -> Result<Group, CatalogError> {
        let n = perms.len();
        let mut index: HashMap<&[u8], usize> = HashMap::with_capacity(n);
        for (i, p) in perms.iter().enumerate() {
            index.insert(p.as_slice(), i);
        }
        let k = perms.first().map_or(0, |p| p.len());
        let mut table = vec![0 as Elem; n * n];
        let mut buf = vec![0u8; k];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                for t in 0..k {
                    buf[t] = p[q[t] as usize];
                }
                table[i * n + j] = index[buf.as_slice()] as Elem;
            }
        }
        Ok(Group::from_table(name, n, table)?)
    }

    /// 2×2 matrices of determinant 1 over Z_q modulo ±I, for an odd prime q.
    ///
    /// Each coset {M, −M} is represented by the matrix whose first nonzero
    /// entry (scanning a, b, c, d) lies in 1..=(q−1)/2; elements are indexed
    /// by the lexicographic order of that representative, identity first.
    pub fn psl2(&self, q: u64) -> Result<Group, CatalogError> {
        if q < 3 || q.is_multiple_of(2) || !is_prime_u64(q) {
            return Err(CatalogError::NotPrime(q));
        }
        let qq = q as usize;
        let n = qq * (qq * qq - 1) / 2;
        self.check_cap(n)?;

        let half = (q - 1) / 2;
        let canonical = |m: [u64; 4]| -> [u64; 4] {
            let lead = m.iter().copied().find(|&x| x != 0).unwrap();
            if lead <= half {
                m
            } else {
                [neg(m[0], q), neg(m[1], q), neg(m[2], q), neg(m[3], q)]
            }
        };

        let mut reps: Vec<[u64; 4]> = Vec::with_capacity(n);
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        if (a * d % q + q - b * c % q) % q == 1 {
                            let m = [a, b, c, d];
                            if canonical(m) == m {
                                reps.push(m);
                            }
                        }
                    }
                }
            }
        }
        debug_assert_eq!(reps.len(), n);

        // identity to the front, the rest keep lexicographic order
        let id = [1, 0, 0, 1];
        let pos = reps.iter().position(|&m| m == id).expect("identity is canonical");
        reps.remove(pos);
        reps.insert(0, id);

        let mut index: HashMap<u64, usize> = HashMap::with_capacity(n);
        let key = |m: [u64; 4]| m[0] << 48 | m[1] << 32 | m[2] << 16 | m[3];
        for (i, &m) in reps.iter().enumerate() {
            index.insert(key(m), i);
        }

        let mut table = vec![0 as Elem; n * n];
        for (i, &x) in reps.iter().enumerate() {
            for (j, &y) in reps.iter().enumerate() {
                let prod = [
                    (x[0] * y[0] + x[1] * y[2]) % q,
                    (x[0] * y[1] + x[1] * y[3]) % q,
                    (x[2] * y[0] + x[3] * y[2]) % q,
                    (x[2] * y[1] + x[3] * y[3]) % q,
                ];
                table[i * n + j] = index[&key(canonical(prod))] as Elem;
            }
        }
        Ok(Group::from_table(format!("PSL2({q})"), n, table)?)
    }

    /// Componentwise product; index of (a, b) is i_a·|B| + i_b.
    pub fn direct_product(&self, a: &Group, b: &Group) -> Result<Group, CatalogError> {
        let n = a.order().saturating_mul(b.order());
        self.check_cap(n)?;
        let nb = b.order();
        let mut table = vec![0 as Elem; n * n];
        for ia in 0..a.order() {
            for ib in 0..nb {
                let i = ia * nb + ib;
                for ja in 0..a.order() {
                    for jb in 0..nb {
                        let j = ja * nb + jb;
                        let va = a.mul(ia as Elem, ja as Elem) as usize;
                        let vb = b.mul(ib as Elem, jb as Elem) as usize;
                        table[i * n + j] = (va * nb + vb) as Elem;
                    }
                }
            }
        }
        Ok(Group::from_table(format!("{}x{}", a.name(), b.name()), n, table)?)
    }

    /// Closure of the given permutations (one-line, 0-based, common ground
    /// set) with elements indexed in breadth-first discovery order,
    /// identity first, generators applied in the order given.
    pub fn from_permutations(&self, name: impl Into<String>, gens: &[Vec<u8>]) -> Result<Group, CatalogError> {
        let name = name.into();
        let k = gens.first().map(|p| p.len()).unwrap_or(0);
        for p in gens {
            if p.len() != k || !is_permutation(p) {
                return Err(CatalogError::BadSpec {
                    spec: name.clone(),
                    reason: "generators must be permutations of one ground set".into(),
                });
            }
        }
        let identity: Vec<u8> = (0..k as u8).collect();
        let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut elems: Vec<Vec<u8>> = Vec::new();
        index.insert(identity.clone(), 0);
        elems.push(identity);
        let mut head = 0;
        while head < elems.len() {
            let cur = elems[head].clone();
            head += 1;
            for gp in gens {
                let next: Vec<u8> = (0..k).map(|t| cur[gp[t] as usize]).collect();
                if !index.contains_key(&next) {
                    if elems.len() >= self.cap {
                        return Err(CatalogError::CapExceeded { needed: elems.len() + 1, cap: self.cap });
                    }
                    index.insert(next.clone(), elems.len());
                    elems.push(next);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0 as Elem; n * n];
        let mut buf = vec![0u8; k];
        for (i, p) in elems.iter().enumerate() {
            for (j, q) in elems.iter().enumerate() {
                for t in 0..k {
                    buf[t] = p[q[t] as usize];
                }
                table[i * n + j] = index[buf.as_slice()] as Elem;
            }
        }
        Ok(Group::from_table(name, n, table)?)
    }

    /// Load a `.cayley` file and run the full validation suite on it.
    pub fn load_cayley_file(&self, path: &str) -> Result<Group, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CatalogError::Io { path: path.to_string(), source })?;
        let g = Group::from_cayley_text(format!("file:{path}"), &text)?;
        self.check_cap(g.order())?;
        g.validate(0)?;
        Ok(g)
    }

    /// Parse a group spec. Products split on top-level `x`.
    pub fn parse(&self, spec: &str) -> Result<Group, CatalogError> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Err(CatalogError::BadSpec { spec: spec.into(), reason: "empty spec".into() });
        }
        let parts = split_top_level(spec);
        let mut acc: Option<Group> = None;
        for part in parts {
            let g = self.parse_atom(part)?;
            acc = Some(match acc {
                None => g,
                Some(prev) => self.direct_product(&prev, &g)?,
            });
        }
        let mut g = acc.expect("at least one part");
        if g.name() != spec {
            g.set_name(spec);
        }
        Ok(g)
    }

    fn parse_atom(&self, atom: &str) -> Result<Group, CatalogError> {
        let bad = |reason: &str| CatalogError::BadSpec { spec: atom.into(), reason: reason.into() };
        if let Some(rest) = atom.strip_prefix("file:") {
            return self.load_cayley_file(rest);
        }
        if let Some(rest) = atom.strip_prefix("perm:") {
            let gens = parse_cycle_list(rest).map_err(|r| bad(&r))?;
            return self.from_permutations(atom, &gens);
        }
        if let Some(rest) = atom.strip_prefix("PSL2(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| bad("missing closing paren"))?;
            let q: u64 = inner.trim().parse().map_err(|_| bad("PSL2 parameter must be an integer"))?;
            return self.psl2(q);
        }
        let (head, tail) = atom.split_at(1);
        let m: usize = tail.parse().map_err(|_| bad("expected an integer parameter"))?;
        match head {
            "C" => self.cyclic(m),
            "D" => self.dihedral(m),
            "S" => self.symmetric(m),
            "A" => self.alternating(m),
            _ => Err(bad("unknown constructor")),
        }
    }
}

fn neg(x: u64, q: u64) -> u64 {
    if x == 0 { 0 } else { q - x }
}

fn checked_factorial(k: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for i in 2..=k {
        acc = acc.checked_mul(i)?;
    }
    Some(acc)
}

fn lex_permutations(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn is_even(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut parity = 0usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        parity += len - 1;
    }
    parity.is_multiple_of(2)
}

fn is_permutation(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if (x as usize) >= p.len() || seen[x as usize] {
            return false;
        }
        seen[x as usize] = true;
    }
    true
}

/// Split on `x` at bracket depth zero. `C2xC3xS4` -> ["C2", "C3", "S4"].
fn split_top_level(spec: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, ch) in spec.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            'x' if depth == 0 => {
                parts.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&spec[start..]);
    parts
}

/// `[(1,2),(1,2,3,4,5)]` in 1-based cycle notation -> one-line permutations
/// on the common ground set {0..max point}.
fn parse_cycle_list(text: &str) -> Result<Vec<Vec<u8>>, String> {
    let text = text.trim();
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or("cycles must be wrapped in [ ... ]")?;

    let mut cycles_per_gen: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut cur_gen: Vec<Vec<usize>> = Vec::new();
    let mut cur_cycle: Vec<usize> = Vec::new();
    let mut num = String::new();
    let mut in_cycle = false;
    let mut max_point = 0usize;

    for ch in inner.chars() {
        match ch {
            '(' => {
                if in_cycle {
                    return Err("nested cycle".into());
                }
                in_cycle = true;
                cur_cycle.clear();
            }
            ')' => {
                if !in_cycle {
                    return Err("unbalanced parens".into());
                }
                if !num.is_empty() {
                    let p: usize = num.parse().map_err(|_| "bad point")?;
                    cur_cycle.push(p);
                    num.clear();
                }
                if cur_cycle.contains(&0) {
                    return Err("points are 1-based".into());
                }
                max_point = max_point.max(cur_cycle.iter().copied().max().unwrap_or(0));
                cur_gen.push(std::mem::take(&mut cur_cycle));
                in_cycle = false;
            }
            ',' => {
                if in_cycle {
                    if num.is_empty() {
                        return Err("missing point".into());
                    }
                    let p: usize = num.parse().map_err(|_| "bad point")?;
                    cur_cycle.push(p);
                    num.clear();
                } else {
                    // separates generators
                    if !cur_gen.is_empty() {
                        cycles_per_gen.push(std::mem::take(&mut cur_gen));
                    }
                }
            }
            c if c.is_ascii_digit() => num.push(c),
            c if c.is_whitespace() => {}
            c => return Err(format!("unexpected character {c:?}")),
        }
    }
    if in_cycle {
        return Err("unbalanced parens".into());
    }
    if !cur_gen.is_empty() {
        cycles_per_gen.push(cur_gen);
    }
    if cycles_per_gen.is_empty() {
        return Err("no generators".into());
    }

    let k = max_point;
    let mut gens = Vec::new();
    for cycles in cycles_per_gen {
        let mut one_line: Vec<u8> = (0..k as u8).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                let from = cyc[w] - 1;
                let to = cyc[(w + 1) % cyc.len()] - 1;
                one_line[from] = to as u8;
            }
        }
        if !is_permutation(&one_line) {
            return Err("cycles overlap within one generator".into());
        }
        gens.push(one_line);
    }
    Ok(gens)
}

/// The named groups the test suites sweep: cyclic, dihedral, symmetric,
/// alternating, PSL2 and assorted abelian products, 42 groups in all.
pub fn standard_catalog_specs() -> Vec<&'static str> {
    vec![
        "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C13", "C14", "C15",
        "C16", "D2", "D3", "D4", "D5", "D6", "D7", "D8", "D9", "D10", "S3", "S4", "A4", "A5",
        "PSL2(5)", "PSL2(7)", "C2xC2", "C2xC4", "C2xC6", "C2xC8", "C2xC10", "C2xC12", "C3xC3",
        "C3xC6", "C4xC4", "C5xC5", "C2xC2xC2", "C2xC2xC2xC2",
    ]
}

pub fn standard_catalog(cat: &Catalog) -> Vec<Group> {
    standard_catalog_specs()
        .into_iter()
        .map(|s| cat.parse(s).expect("standard catalog builds"))
        .collect()
}
