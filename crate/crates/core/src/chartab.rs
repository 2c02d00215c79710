//! Irreducible character degrees of a finite group, degrees only, via the
//! conjugacy-class algebra over a prime field.
//!
//! The class-algebra structure constants give r commuting integer matrices
//! whose simultaneous eigenvectors, normalized at the identity class, are
//! the central characters ω_j = h_j·χ(g_j)/χ(1). Over F_p with
//! p ≡ 1 (mod exponent) all eigenvalues are rational, and each degree is
//! recovered from d² ≡ n·(Σ_j ω_j ω_{j'} h_j⁻¹)⁻¹ (mod p) as the unique
//! square root in (0, √n]. Character *values* are never computed: the
//! quasirandomness parameter needs only the degree multiset.

use thiserror::Error;

use crate::classes::{conjugacy_classes, ClassData};
use crate::group::Group;
use crate::modp::{is_prime_u64, kernel_basis, solve_in_columns, Fp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeTable {
    /// Sorted ascending; always starts with 1 (the trivial character).
    pub degrees: Vec<u32>,
    pub prime_used: u64,
    pub group_order: usize,
}

impl DegreeTable {
    pub fn linear_count(&self) -> usize {
        self.degrees.iter().filter(|&&d| d == 1).count()
    }

    /// Smallest degree after setting aside one trivial character.
    pub fn min_nontrivial(&self) -> Option<u32> {
        self.degrees.get(1).copied()
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64 * d as u64).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartabError {
    #[error("no admissible prime below 2^31 for order {order}, exponent {exponent}")]
    PrimeOverflow { order: usize, exponent: u64 },
    #[error("prime {0} is not admissible for this group")]
    BadPrime(u64),
    #[error("class-algebra eigenspaces failed to split to dimension one")]
    SplitIncomplete,
    #[error("degree recovery found no square root in (0, √n]")]
    NoSquareRoot,
}

/// Class-algebra structure constants for class j: entry `[i][k]` counts the
/// pairs (x, y) ∈ C_j × C_i with x·y = z_k for a fixed representative z_k.
/// Computed as a_{jik} = #{x ∈ C_j : x⁻¹·z_k ∈ C_i}, one pass per column.
pub fn class_matrix(g: &Group, cd: &ClassData, j: usize) -> Vec<Vec<u32>> {
    let r = cd.num_classes();
    let mut m = vec![vec![0u32; r]; r];
    let xs: Vec<usize> = cd.class(j).to_indices();
    for k in 0..r {
        let z = cd.representative(k);
        for &x in &xs {
            let y = g.mul(g.inv(x as u16), z);
            m[cd.class_of(y)][k] += 1;
        }
    }
    m
}

fn ceil_sqrt(n: usize) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n as u64 {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n as u64 {
        r -= 1;
    }
    r
}

fn admissible(p: u64, n: usize, exponent: u64) -> bool {
    p > 2 * ceil_sqrt(n) && (p - 1).is_multiple_of(exponent) && !(n as u64).is_multiple_of(p) && is_prime_u64(p)
}

/// Primes usable for the eigenvalue method on this group, ascending:
/// p ≡ 1 (mod exponent), p > 2⌈√n⌉ and p ∤ n.
pub fn admissible_primes(n: usize, exponent: u64) -> impl Iterator<Item = u64> {
    (1u64..).map(move |t| exponent * t + 1).filter(move |&p| admissible(p, n, exponent))
}

/// The smallest admissible prime.
pub fn dixon_prime(g: &Group) -> Result<u64, ChartabError> {
    let n = g.order();
    let e = g.exponent();
    admissible_primes(n, e)
        .take_while(|&p| p < 1 << 31)
        .next()
        .ok_or(ChartabError::PrimeOverflow { order: n, exponent: e })
}

/// Character degrees with an explicitly chosen admissible prime.
pub fn char_degrees_with_prime(g: &Group, cd: &ClassData, p: u64) -> Result<DegreeTable, ChartabError> {
    let n = g.order();
    if !admissible(p, n, g.exponent()) {
        return Err(ChartabError::BadPrime(p));
    }
    let fp = Fp::new(p);
    let r = cd.num_classes();

    // Iterative simultaneous eigenspace splitting. Subspaces are kept as
    // column bases (vectors of length r). Class matrices are built one at
    // a time: holding all r of them is r³ words, too much for large
    // abelian groups.
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];

    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m: Vec<Vec<u64>> = class_matrix(g, cd, j)
            .into_iter()
            .map(|row| row.into_iter().map(|v| v as u64 % p).collect())
            .collect();
        let mut next = Vec::with_capacity(spaces.len());
        for basis in spaces {
            let d = basis.len();
            if d == 1 {
                next.push(basis);
                continue;
            }
            // Restriction R of M to the subspace: M·b_i = Σ_c R[c][i]·b_c.
            let mut restriction_cols: Vec<Vec<u64>> = Vec::with_capacity(d);
            for b in &basis {
                let image: Vec<u64> = (0..r)
                    .map(|row| {
                        let mut acc = 0u64;
                        for (col, &bv) in b.iter().enumerate() {
                            if bv != 0 && m[row][col] != 0 {
                                acc = fp.add(acc, fp.mul(m[row][col], bv));
                            }
                        }
                        acc
                    })
                    .collect();
                let coords = solve_in_columns(fp, &basis, &image).ok_or(ChartabError::SplitIncomplete)?;
                restriction_cols.push(coords);
            }
            // Eigen-split R by scanning every λ ∈ F_p for a nontrivial kernel.
            let mut remaining = d;
            for lambda in 0..p {
                if remaining == 0 {
                    break;
                }
                let mut shifted: Vec<Vec<u64>> = (0..d)
                    .map(|row| (0..d).map(|col| restriction_cols[col][row]).collect())
                    .collect();
                for (i, row) in shifted.iter_mut().enumerate() {
                    row[i] = fp.sub(row[i], lambda);
                }
                let kernel = kernel_basis(fp, &shifted);
                if kernel.is_empty() {
                    continue;
                }
                remaining -= kernel.len();
                // Lift the whole eigenspace: later matrices may still have
                // to split it further.
                let lifted_space: Vec<Vec<u64>> = kernel
                    .iter()
                    .map(|kv| {
                        let mut lifted = vec![0u64; r];
                        for (c, &coef) in kv.iter().enumerate() {
                            if coef != 0 {
                                for (row, l) in lifted.iter_mut().enumerate() {
                                    *l = fp.add(*l, fp.mul(coef, basis[c][row]));
                                }
                            }
                        }
                        lifted
                    })
                    .collect();
                next.push(lifted_space);
            }
            if remaining != 0 {
                return Err(ChartabError::SplitIncomplete);
            }
        }
        spaces = next;
    }

    if spaces.iter().any(|s| s.len() != 1) {
        return Err(ChartabError::SplitIncomplete);
    }

    // Normalize at the identity class and recover each degree.
    let n_mod = n as u64 % p;
    let mut degrees = Vec::with_capacity(r);
    for space in &spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(ChartabError::SplitIncomplete);
        }
        let scale = fp.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| fp.mul(x, scale)).collect();
        let mut s = 0u64;
        for j in 0..r {
            let jp = cd.inverse_class(j);
            let h_inv = fp.inv(cd.size(j) as u64 % p);
            s = fp.add(s, fp.mul(fp.mul(omega[j], omega[jp]), h_inv));
        }
        if s == 0 {
            return Err(ChartabError::NoSquareRoot);
        }
        let dd = fp.mul(n_mod, fp.inv(s));
        let mut found = None;
        let mut t = 1u64;
        while t * t <= n as u64 {
            if t * t % p == dd {
                found = Some(t as u32);
                break;
            }
            t += 1;
        }
        degrees.push(found.ok_or(ChartabError::NoSquareRoot)?);
    }
    degrees.sort_unstable();
    Ok(DegreeTable { degrees, prime_used: p, group_order: n })
}

/// Sorted multiset of irreducible character degrees.
pub fn char_degrees(g: &Group) -> Result<DegreeTable, ChartabError> {
    let cd = conjugacy_classes(g);
    let p = dixon_prime(g)?;
    char_degrees_with_prime(g, &cd, p)
}

/// Quasirandomness parameter d(G): the least dimension of a nontrivial
/// irreducible (equivalently unitary) representation. Equals 1 exactly when
/// the group has a nontrivial linear character, i.e. is not perfect. The
/// trivial group has no nontrivial representation at all; it is vacuously
/// d-quasirandom for every d, reported here as 2.
pub fn quasirandom_degree(g: &Group) -> Result<u32, ChartabError> {
    let table = char_degrees(g)?;
    Ok(table.min_nontrivial().unwrap_or(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::subgroup::derived_subgroup;

    #[test]
    fn class_matrix_of_identity_class_is_identity() {
        let g = Catalog::new().parse("S3").unwrap();
        let cd = conjugacy_classes(&g);
        let m = class_matrix(&g, &cd, 0);
        for (i, row) in m.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                assert_eq!(v, u32::from(i == k));
            }
        }
    }

    #[test]
    fn class_matrix_of_c3_generator_is_a_permutation() {
        let g = Catalog::new().parse("C3").unwrap();
        let cd = conjugacy_classes(&g);
        let m = class_matrix(&g, &cd, 1);
        for i in 0..3 {
            for k in 0..3 {
                assert_eq!(m[i][k], u32::from((i + 1) % 3 == k));
            }
        }
    }

    #[test]
    fn class_matrix_column_sums_are_class_size() {
        // Each x in C_j contributes one pair per fixed representative, so
        // every column of the matrix sums to h_j.
        let g = Catalog::new().parse("S3").unwrap();
        let cd = conjugacy_classes(&g);
        let tc = (0..cd.num_classes()).find(|&j| cd.size(j) == 3).unwrap();
        let m = class_matrix(&g, &cd, tc);
        for k in 0..cd.num_classes() {
            let col_sum: u32 = (0..cd.num_classes()).map(|i| m[i][k]).sum();
            assert_eq!(col_sum as usize, 3);
        }
        // brute-force pair count against the definition, all (i, k)
        for i in 0..cd.num_classes() {
            for k in 0..cd.num_classes() {
                let z = cd.representative(k);
                let count = (0..6u16)
                    .flat_map(|x| (0..6u16).map(move |y| (x, y)))
                    .filter(|&(x, y)| {
                        cd.class_of(x) == tc && cd.class_of(y) == i && g.mul(x, y) == z
                    })
                    .count() as u32;
                assert_eq!(m[i][k], count, "a at ({i},{k})");
            }
        }
    }

    #[test]
    fn dixon_primes_match_worked_examples() {
        let cat = Catalog::new();
        assert_eq!(dixon_prime(&cat.parse("C2").unwrap()).unwrap(), 5);
        assert_eq!(dixon_prime(&cat.parse("S3").unwrap()).unwrap(), 7);
        assert_eq!(dixon_prime(&cat.parse("A5").unwrap()).unwrap(), 31);
    }

    #[test]
    fn abelian_groups_have_all_linear_degrees() {
        let cat = Catalog::new();
        for spec in ["C5", "C8", "C2xC6"] {
            let g = cat.parse(spec).unwrap();
            let t = char_degrees(&g).unwrap();
            assert_eq!(t.degrees, vec![1; g.order()], "{spec}");
        }
    }

    #[test]
    fn s3_and_a5_degree_tables() {
        let cat = Catalog::new();
        let s3 = cat.parse("S3").unwrap();
        assert_eq!(char_degrees(&s3).unwrap().degrees, vec![1, 1, 2]);

        let a5 = cat.parse("A5").unwrap();
        let t = char_degrees(&a5).unwrap();
        assert_eq!(t.degrees, vec![1, 3, 3, 4, 5]);
        assert_eq!(t.sum_of_squares(), 60);

        // the arithmetic constraints alone already force this table: one
        // linear character (perfect group) and four degrees >= 2 whose
        // squares sum to 59
        let mut solutions = Vec::new();
        let mut stack = vec![(Vec::new(), 2u32, 59u32)];
        while let Some((prefix, lo, remaining)) = stack.pop() {
            if prefix.len() == 4 {
                if remaining == 0 {
                    solutions.push(prefix);
                }
                continue;
            }
            for d in lo..8 {
                if d * d <= remaining {
                    let mut next = prefix.clone();
                    next.push(d);
                    stack.push((next, d, remaining - d * d));
                }
            }
        }
        assert_eq!(solutions, vec![vec![3, 3, 4, 5]]);
    }

    #[test]
    fn degree_table_invariants_hold_broadly() {
        let cat = Catalog::new();
        for spec in ["C7", "D4", "D5", "S4", "A4", "PSL2(5)"] {
            let g = cat.parse(spec).unwrap();
            let cd = conjugacy_classes(&g);
            let t = char_degrees(&g).unwrap();
            assert_eq!(t.sum_of_squares(), g.order() as u64, "{spec}: Σd² = n");
            assert_eq!(t.degrees.len(), cd.num_classes(), "{spec}: one degree per class");
            assert_eq!(t.degrees[0], 1, "{spec}: trivial character");
            let der = derived_subgroup(&g);
            assert_eq!(t.linear_count(), g.order() / der.len(), "{spec}: linear characters");
        }
    }

    #[test]
    fn quasirandom_degrees() {
        let cat = Catalog::new();
        assert_eq!(quasirandom_degree(&cat.parse("C7").unwrap()).unwrap(), 1);
        assert_eq!(quasirandom_degree(&cat.parse("S4").unwrap()).unwrap(), 1);
        assert_eq!(quasirandom_degree(&cat.parse("A5").unwrap()).unwrap(), 3);
        assert_eq!(quasirandom_degree(&cat.parse("PSL2(7)").unwrap()).unwrap(), 3);
        assert_eq!(quasirandom_degree(&cat.parse("C1").unwrap()).unwrap(), 2);
    }

    #[test]
    fn symmetric_group_degree_tables() {
        let cat = Catalog::with_cap(800);
        let s5 = cat.symmetric(5).unwrap();
        assert_eq!(char_degrees(&s5).unwrap().degrees, vec![1, 1, 4, 4, 5, 5, 6]);
        let s6 = cat.symmetric(6).unwrap();
        assert_eq!(
            char_degrees(&s6).unwrap().degrees,
            vec![1, 1, 5, 5, 5, 5, 9, 9, 10, 10, 16]
        );
    }

    #[test]
    fn dihedral_degrees_match_the_closed_form() {
        // D_m has 2 linear characters and (m-1)/2 of degree 2 for odd m,
        // 4 linear and (m-2)/2 of degree 2 for even m.
        let cat = Catalog::new();
        for m in 3..=10usize {
            let g = cat.dihedral(m).unwrap();
            let t = char_degrees(&g).unwrap();
            let (linear, twos) = if m % 2 == 1 { (2, (m - 1) / 2) } else { (4, (m - 2) / 2) };
            let mut want = vec![1u32; linear];
            want.extend(std::iter::repeat_n(2, twos));
            assert_eq!(t.degrees, want, "D{m}");
        }
    }

    #[test]
    fn result_is_prime_independent() {
        let cat = Catalog::new();
        for spec in ["S3", "A4", "A5"] {
            let g = cat.parse(spec).unwrap();
            let cd = conjugacy_classes(&g);
            let reference = char_degrees(&g).unwrap();
            let primes: Vec<u64> = admissible_primes(g.order(), g.exponent()).take(3).collect();
            assert_eq!(primes[0], reference.prime_used);
            for &p in &primes[1..] {
                let t = char_degrees_with_prime(&g, &cd, p).unwrap();
                assert_eq!(t.degrees, reference.degrees, "{spec} with p = {p}");
            }
        }
    }

    #[test]
    fn relabeling_invariance_psl25_vs_a5() {
        let cat = Catalog::new();
        let a = char_degrees(&cat.parse("A5").unwrap()).unwrap();
        let b = char_degrees(&cat.parse("PSL2(5)").unwrap()).unwrap();
        assert_eq!(a.degrees, b.degrees);
    }

    #[test]
    fn rejects_inadmissible_prime() {
        let g = Catalog::new().parse("S3").unwrap();
        let cd = conjugacy_classes(&g);
        assert!(matches!(char_degrees_with_prime(&g, &cd, 11), Err(ChartabError::BadPrime(11))));
    }
}
