//! The (p-1) x (p-1) power matrix over F_p and its product identities.
//!
//! Entry (r, c) is `c^r mod p` (1-based). Its determinant equals the
//! superfactorial sf(p-1) mod p, its diagonal product is the hyperfactorial
//! H(p-1) mod p, and each row sum at the top exponent feeds the classic
//! prime-detection sum.

use crate::modmath::{is_prime, mod_add, mod_inv, mod_mul, mod_pow, mod_sub};
use crate::{Error, Result};

/// Cap on p for matrix construction: a dense 498 x 498 build plus
/// elimination stays comfortably interactive.
pub const MAX_MATRIX_PRIME: u64 = 499;

/// Dense row-major power matrix for a prime p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerMatrix {
    p: u64,
    size: usize,
    entries: Vec<u64>,
}

impl PowerMatrix {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Matrix order, p - 1.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry at 1-based (row, col): `col^row mod p`.
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        assert!(
            (1..=self.size).contains(&row) && (1..=self.size).contains(&col),
            "1-based index out of range"
        );
        self.entries[(row - 1) * self.size + (col - 1)]
    }
}

/// Builds the power matrix for prime `p <= MAX_MATRIX_PRIME`. Each row is
/// the previous one multiplied pointwise by the column index.
pub fn build_power_matrix(p: u64) -> Result<PowerMatrix> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > MAX_MATRIX_PRIME {
        return Err(Error::MatrixTooLarge {
            p,
            cap: MAX_MATRIX_PRIME,
        });
    }
    let size = (p - 1) as usize;
    let mut entries = Vec::with_capacity(size * size);
    let mut row: Vec<u64> = (1..=size as u64).map(|c| c % p).collect();
    for _ in 0..size {
        entries.extend_from_slice(&row);
        for (idx, cell) in row.iter_mut().enumerate() {
            *cell = mod_mul(*cell, idx as u64 + 1, p);
        }
    }
    Ok(PowerMatrix { p, size, entries })
}

/// Determinant over F_p by Gaussian elimination: first nonzero pivot per
/// column, row swaps tracked for sign.
pub fn det_mod_p(matrix: &PowerMatrix) -> u64 {
    let p = matrix.p;
    let n = matrix.size;
    let mut a = matrix.entries.clone();
    let mut det = 1 % p;
    let mut negate = false;
    for col in 0..n {
        let pivot = match (col..n).find(|&r| a[r * n + col] != 0) {
            Some(r) => r,
            None => return 0,
        };
        if pivot != col {
            for c in col..n {
                a.swap(pivot * n + c, col * n + c);
            }
            negate = !negate;
        }
        let lead = a[col * n + col];
        det = mod_mul(det, lead, p);
        let inv = mod_inv(lead, p).expect("pivot is a unit mod prime p");
        for r in (col + 1)..n {
            let factor = mod_mul(a[r * n + col], inv, p);
            if factor == 0 {
                continue;
            }
            for c in col..n {
                let sub = mod_mul(factor, a[col * n + c], p);
                a[r * n + c] = mod_sub(a[r * n + c], sub, p);
            }
        }
    }
    if negate {
        (p - det) % p
    } else {
        det
    }
}

/// Product of the diagonal entries `r^r mod p`.
pub fn diagonal_product(matrix: &PowerMatrix) -> u64 {
    let p = matrix.p;
    let n = matrix.size;
    let mut acc = 1 % p;
    for r in 0..n {
        acc = mod_mul(acc, matrix.entries[r * n + r], p);
    }
    acc
}

/// `sum_{k=1}^{n-1} k^(n-1) mod n` for any `n >= 2`. Equals `n-1` at every
/// prime; composites are accepted on purpose, since the interesting claim is
/// that none of them ever attains `n-1`.
pub fn giuga_row_sum(n: u64) -> u64 {
    assert!(n >= 2, "giuga_row_sum needs n >= 2");
    let mut acc = 0u64;
    for k in 1..n {
        acc = mod_add(acc, mod_pow(k, n - 1, n), n);
    }
    acc
}
