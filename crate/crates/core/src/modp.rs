//! Arithmetic and Gaussian elimination over a prime field F_p, p < 2³¹.
//! All values live in 64-bit integers with explicit reduction; pivoting is
//! by lowest index so eliminations are deterministic.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        assert!((2..1 << 31).contains(&p), "modulus out of range");
        Fp { p }
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 { 0 } else { self.p - a }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `a` must be nonzero mod p.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }
}

/// Reduced row echelon form in place. Returns the pivot column of each
/// pivot row, in order.
pub fn row_reduce(fp: Fp, mat: &mut [Vec<u64>]) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| mat[i][c] != 0) else { continue };
        mat.swap(r, pr);
        let inv = fp.inv(mat[r][c]);
        for x in mat[r].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && mat[i][c] != 0 {
                let f = mat[i][c];
                for j in 0..cols {
                    let t = fp.mul(f, mat[r][j]);
                    mat[i][j] = fp.sub(mat[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the null space {x : M·x = 0} of a rows×cols matrix.
pub fn kernel_basis(fp: Fp, mat: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = if mat.is_empty() { 0 } else { mat[0].len() };
    let mut m: Vec<Vec<u64>> = mat.to_vec();
    let pivots = row_reduce(fp, &mut m);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            // pivot row r: x_pc = -Σ_free m[r][free]·x_free
            v[pc] = fp.neg(m[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve B·x = t for x, where B is given by columns. Returns None when the
/// target is outside the column span.
pub fn solve_in_columns(fp: Fp, columns: &[Vec<u64>], target: &[u64]) -> Option<Vec<u64>> {
    let rows = target.len();
    let d = columns.len();
    let mut aug: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = columns.iter().map(|c| c[r]).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let pivots = row_reduce(fp, &mut aug);
    if pivots.contains(&d) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![0u64; d];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][d];
    }
    Some(x)
}

/// Deterministic primality by trial division; fine for the < 2³¹ range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let f = Fp::new(7);
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.pow(3, 6), 1);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.neg(2), 5);
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let f = Fp::new(7);
        // rows (1 2 3; 2 4 1): rank 2 over F7, kernel dim 1
        let m = vec![vec![1, 2, 3], vec![2, 4, 1]];
        let k = kernel_basis(f, &m);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot = row.iter().zip(&k[0]).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let f = Fp::new(11);
        let m = vec![vec![1, 0], vec![0, 1]];
        assert!(kernel_basis(f, &m).is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = Fp::new(7);
        let cols = vec![vec![1, 0, 2], vec![0, 1, 3]];
        // target = 2*c0 + 5*c1
        let target = vec![2, 5, f.add(f.mul(2, 2), f.mul(5, 3))];
        let x = solve_in_columns(f, &cols, &target).unwrap();
        assert_eq!(x, vec![2, 5]);
        let bad = vec![2, 5, 0];
        assert!(solve_in_columns(f, &cols, &bad).is_none());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(547));
        assert!(!is_prime_u64(1711), "1711 = 29*59");
    }
}
