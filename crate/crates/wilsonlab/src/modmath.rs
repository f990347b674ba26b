//! Modular arithmetic on `u64` values with exact 128-bit intermediates.
//!
//! Everything downstream (oracles, closed forms, the matrix module) reduces
//! to the primitives here. Products and sums are formed in `u128`, so every
//! modulus up to [`MAX_MODULUS`] is handled without rounding or overflow.

use std::fmt;

use crate::{Error, Result};

/// Largest supported modulus. Products are carried in 128-bit intermediates,
/// so the full 64-bit range is exact; callers that want a tighter operational
/// cap (the CLI honours `WILSONLAB_MAX_MODULUS`) can only lower this.
pub const MAX_MODULUS: u64 = u64::MAX;

/// A value reduced modulo a fixed positive modulus; `value < modulus` always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` into canonical range. Panics if `modulus` is zero.
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// `a * b mod m`, exact for all `u64` inputs.
#[inline(always)]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a + b mod m` without overflow.
#[inline(always)]
pub fn mod_add(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    ((a as u128 + b as u128) % m as u128) as u64
}

/// `a - b mod m` for already-reduced `a, b < m`.
#[inline(always)]
pub fn mod_sub(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `base^exp mod m` by binary exponentiation; `x^0 = 1` (which is 0 mod 1).
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended Euclid: `(g, x, y)` with `a*x + b*y = g = gcd(a, b) > 0`.
/// Errors when both arguments are zero, where no positive gcd exists.
pub fn bezout(a: i128, b: i128) -> Result<(i128, i128, i128)> {
    if a == 0 && b == 0 {
        return Err(Error::BezoutBothZero);
    }
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        r0 = -r0;
        x0 = -x0;
        y0 = -y0;
    }
    Ok((r0, x0, y0))
}

/// Multiplicative inverse of `a` modulo `m >= 2`.
pub fn mod_inv(a: u64, m: u64) -> Result<u64> {
    debug_assert!(m >= 2);
    let (g, x, _) = bezout((a % m) as i128, m as i128)?;
    if g != 1 {
        return Err(Error::NotInvertible {
            value: a,
            modulus: m,
            gcd: g as u64,
        });
    }
    Ok(x.rem_euclid(m as i128) as u64)
}

/// Combines `x ≡ x1 (mod m1)` and `x ≡ x2 (mod m2)` for coprime moduli into
/// the unique residue mod `m1 * m2`. The product must stay within range.
pub fn crt_combine(x1: Residue, x2: Residue) -> Result<Residue> {
    let (m1, m2) = (x1.modulus(), x2.modulus());
    let combined = m1
        .checked_mul(m2)
        .ok_or(Error::ModulusOverflow { m1, m2 })?;
    if m1 == 1 {
        return Ok(Residue::new(x2.value(), combined));
    }
    if m2 == 1 {
        return Ok(Residue::new(x1.value(), combined));
    }
    if gcd(m1, m2) != 1 {
        return Err(Error::ModuliNotCoprime { m1, m2 });
    }
    // x = x1 + m1 * t with t = (x2 - x1) / m1 (mod m2); the result is below
    // m1 * m2 by construction.
    let inv = mod_inv(m1 % m2, m2)?;
    let diff = mod_sub(x2.value(), x1.value() % m2, m2);
    let t = mod_mul(diff, inv, m2);
    let x = x1.value() as u128 + m1 as u128 * t as u128;
    Ok(Residue::new(x as u64, combined))
}

/// Witness set that makes Miller-Rabin deterministic on the whole u64 range.
const MILLER_RABIN_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MILLER_RABIN_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in MILLER_RABIN_BASES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residue class of an odd prime modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mod4 {
    One,
    Three,
}

/// Primality class of a positive integer. `1` counts as composite here: it is
/// not prime, and that is the only thing dispatch cares about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeClassification {
    Composite,
    Two,
    OddPrime(Mod4),
}

impl PrimeClassification {
    pub fn is_prime(self) -> bool {
        !matches!(self, PrimeClassification::Composite)
    }

    pub fn is_odd_prime(self) -> bool {
        matches!(self, PrimeClassification::OddPrime(_))
    }
}

/// Classifies `n >= 1` as composite, the even prime, or an odd prime with its
/// residue class mod 4.
pub fn classify(n: u64) -> Result<PrimeClassification> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    Ok(if !is_prime(n) {
        PrimeClassification::Composite
    } else if n == 2 {
        PrimeClassification::Two
    } else if n % 4 == 1 {
        PrimeClassification::OddPrime(Mod4::One)
    } else {
        PrimeClassification::OddPrime(Mod4::Three)
    })
}

/// An even number split as `odd_part * 2^two_exponent` with `odd_part` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvenDecomposition {
    pub two_exponent: u32,
    pub odd_part: u64,
}

impl EvenDecomposition {
    pub fn recompose(self) -> u64 {
        self.odd_part << self.two_exponent
    }
}

/// Splits an even `n` into its two-power and odd factors.
pub fn decompose_even(n: u64) -> Result<EvenDecomposition> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    if n % 2 != 0 {
        return Err(Error::NotEven(n));
    }
    let two_exponent = n.trailing_zeros();
    Ok(EvenDecomposition {
        two_exponent,
        odd_part: n >> two_exponent,
    })
}

/// Legendre symbol `(a|p)` in `{-1, 0, +1}` by Euler's criterion. Negative
/// `a` is reduced into `[0, p)` first.
pub fn legendre(a: i128, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    })
}

/// `(2|p)` for an odd prime: `+1` when p = ±1 (mod 8), `-1` when p = ±3.
pub fn second_supplement(p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(match p % 8 {
        1 | 7 => 1,
        _ => -1,
    })
}

/// The square root of -1 below p/2, for primes p = 1 (mod 4). The half
/// factorial w = ((p-1)/2)! mod p squares to -1 for this class of primes, and
/// min(w, p - w) is the canonical root; a linear scan backs the claim up.
pub fn sqrt_minus_one(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::WrongClassMod4 { p, class: 1 });
    }
    let mut w = 1u64;
    for j in 2..=(p - 1) / 2 {
        w = mod_mul(w, j, p);
    }
    let root = if mod_mul(w, w, p) == p - 1 {
        w.min(p - w)
    } else {
        sqrt_minus_one_linear(p)
    };
    debug_assert_eq!(mod_mul(root, root, p), p - 1);
    Ok(root)
}

/// Fallback scan for the root of -1; the factorial route above is always
/// available for valid input, so this only runs if that route is disturbed.
fn sqrt_minus_one_linear(p: u64) -> u64 {
    (2..=p / 2)
        .find(|&x| mod_mul(x, x, p) == p - 1)
        .expect("every prime p = 1 (mod 4) has a root of -1 at or below p/2")
}

/// Canonical residue of a sign: `+1 -> 1`, `-1 -> m-1`, `0 -> 0` (all mod m).
pub fn sign_to_residue(sign: i8, m: u64) -> u64 {
    debug_assert!(m >= 1);
    match sign {
        1 => 1 % m,
        -1 => (m - 1) % m,
        _ => 0,
    }
}
