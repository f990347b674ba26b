//! Closed-form congruences for the factorial family.
//!
//! Each function here predicts, from the arithmetic shape of its argument
//! alone, the residue that the matching oracle in [`crate::oracles`] grinds
//! out by definition. Most run in O(log n); the quadratic statistics are the
//! deliberate exception and say so. Signs are always returned as canonical
//! residues (`-1` maps to `m - 1`).

use crate::modmath::{
    decompose_even, is_prime, legendre, mod_inv, mod_mul, mod_pow, second_supplement,
    sign_to_residue, sqrt_minus_one,
};
use crate::oracles::factorial_mod;
use crate::{Error, Result};

/// `(n-1)! mod n` for `n >= 2`: `n-1` when n is prime, 2 at the isolated
/// point n = 4, and 0 for every other composite.
pub fn wilson_residue(n: u64) -> u64 {
    assert!(n >= 2, "wilson_residue needs n >= 2");
    if is_prime(n) {
        n - 1
    } else if n == 4 {
        2
    } else {
        0
    }
}

/// Counting statistics over the half-interval `(0, p/2)` of an odd prime p.
///
/// These are O(p) "statistic-grade" quantities: they exist to be enumerated
/// and compared against, not to be fast.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadStats {
    pub p: u64,
    /// Quadratic nonresidues j with `2 < j < p/2`.
    pub nu: u64,
    /// Quadratic nonresidues j with `0 < j < p/2`. Differs from `nu` only by
    /// whether 2 is a nonresidue, and then only for p > 4 where 2 < p/2; at
    /// p = 3 the two counts coincide at 0 even though 2 is a nonresidue.
    pub big_n: u64,
    /// Elements j with `0 < j < p/2` whose inverse mod p also lies below
    /// p/2. Always odd: j = 1 counts itself and the rest pair up.
    pub mu: u64,
    /// The root of -1 below p/2, present exactly when p = 1 (mod 4).
    pub i_p: Option<u64>,
}

/// Enumerates the statistics directly: one Legendre symbol and one modular
/// inverse per element of the half-interval.
pub fn quad_stats(p: u64) -> Result<QuadStats> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let half = p / 2;
    let (mut nu, mut big_n, mut mu) = (0u64, 0u64, 0u64);
    for j in 1..=half {
        if legendre(j as i128, p)? == -1 {
            big_n += 1;
            if j > 2 {
                nu += 1;
            }
        }
        if mod_inv(j, p)? <= half {
            mu += 1;
        }
    }
    let i_p = if p % 4 == 1 {
        Some(sqrt_minus_one(p)?)
    } else {
        None
    };
    Ok(QuadStats {
        p,
        nu,
        big_n,
        mu,
        i_p,
    })
}

/// `(p-1)!! mod p` for primes p = 3 (mod 4), always a signed unit.
///
/// Computed as `(2|p) * (-1)^N` with N = [`QuadStats::big_n`]. For p > 3
/// this equals `(-1)^nu`; at p = 3 only the N form is right, because 2 sits
/// above p/2 there and the nu adjustment is vacuous (2!! = 2 = -1 (mod 3),
/// yet nu = 0).
pub fn df_prime_3mod4(p: u64) -> Result<u64> {
    if !is_prime(p) || p == 2 {
        return Err(Error::NotOddPrime(p));
    }
    if p % 4 != 3 {
        return Err(Error::WrongClassMod4 { p, class: 3 });
    }
    let stats = quad_stats(p)?;
    let n_sign = if stats.big_n % 2 == 0 { 1 } else { -1 };
    Ok(sign_to_residue(second_supplement(p)? * n_sign, p))
}

/// `(p-1)!! mod p` for any odd prime, both residue classes mod 4.
///
/// The sign is `(-1)^((mu+1)/2)`; for p = 1 (mod 4) the result additionally
/// carries the root of -1 as a factor.
pub fn df_prime(p: u64) -> Result<u64> {
    let stats = quad_stats(p)?;
    Ok(df_from_stats(&stats))
}

fn df_from_stats(stats: &QuadStats) -> u64 {
    let p = stats.p;
    let negative = ((stats.mu + 1) / 2) % 2 == 1;
    match stats.i_p {
        None => sign_to_residue(if negative { -1 } else { 1 }, p),
        Some(root) => {
            if negative {
                p - root
            } else {
                root
            }
        }
    }
}

/// The sign s with `((p-1)/2)!^2 = s (mod p)` for odd prime p: +1 when
/// p = 3 (mod 4), -1 when p = 1 (mod 4). Equivalently `(-1)^((p+1)/2)`.
pub fn half_factorial_square_sign(p: u64) -> i8 {
    assert!(p > 2 && is_prime(p), "needs an odd prime");
    if ((p + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(p-1)!! mod p` through the half factorial: `(2|p) * ((p-1)/2)!`.
pub fn df_via_legendre(p: u64) -> Result<u64> {
    let supplement = second_supplement(p)?;
    let half = factorial_mod((p - 1) / 2, p);
    Ok(if supplement == 1 {
        half
    } else {
        (p - half) % p
    })
}

/// `sf(p-1) mod p` for prime p: the superfactorial collapses onto the double
/// factorial at primes, so this is [`df_prime`] for odd p and 1 at p = 2.
pub fn sf_prime(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    df_prime(p)
}

/// `sf(p-1) mod p` for odd prime p through the half factorial:
/// `(-1)^((p^2-1)/8) * ((p-1)/2)!`. The arithmetic is the same as
/// [`df_via_legendre`]; superfactorial and double factorial share one
/// residue at primes.
pub fn sf_prime_half_form(p: u64) -> Result<u64> {
    df_via_legendre(p)
}

/// `H(p-1) mod p` for odd prime p: `(-1)^((p-1)/2)` times the double
/// factorial.
pub fn hyper_prime(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let df = df_prime(p)?;
    Ok(if ((p - 1) / 2) % 2 == 0 {
        df
    } else {
        (p - df) % p
    })
}

/// `(n-1)!! mod n` for odd composite n: 0 for n > 9, and 6 at n = 9, the
/// only odd composite whose double factorial survives (8!! = 384 = 42*9+6).
pub fn df_odd_composite(n: u64) -> Result<u64> {
    if n % 2 == 0 || n < 9 || is_prime(n) {
        return Err(Error::NotOddComposite(n));
    }
    Ok(if n == 9 { 6 } else { 0 })
}

/// `(n-1)!! mod n` for even `n = q * 2^i` with q odd, by two-adic branch:
///
/// * `i = 1`: q
/// * `i = 2`: `-q^2` (n = 12 decides between the two candidate forms:
///   11!! = 10395 = 866*12 + 3 = -9, not -3)
/// * `i >= 3`: `q^(2^(i-2))`
pub fn df_even(n: u64) -> Result<u64> {
    let parts = decompose_even(n)?;
    let q = parts.odd_part;
    Ok(match parts.two_exponent {
        1 => q,
        2 => (n - mod_mul(q, q, n)) % n,
        i => mod_pow(q, 1u64 << (i - 2), n),
    })
}

/// Product of the units of Z/n in closed form: `n-1` exactly when n is 4, an
/// odd prime power, or twice an odd prime power (n = 2 included, where
/// 1 = -1); otherwise 1.
pub fn gauss_wilson(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::BelowMinimum { n, min: 2 });
    }
    if n == 2 || n == 4 {
        return Ok(n - 1);
    }
    let twos = n.trailing_zeros();
    if twos >= 2 {
        // 4 | n and n > 4: never a prime power or twice one
        return Ok(1);
    }
    let odd = n >> twos;
    Ok(if is_odd_prime_power(odd) { n - 1 } else { 1 })
}

/// Whether odd `m >= 3` is `p^k` for an odd prime p.
fn is_odd_prime_power(m: u64) -> bool {
    if is_prime(m) {
        return true;
    }
    for exp in 2..=63 {
        let root = integer_nth_root(m, exp);
        if root < 3 {
            break;
        }
        if root.checked_pow(exp) == Some(m) && is_prime(root) {
            return true;
        }
    }
    false
}

/// Floor of the `exp`-th root of m, by float seed plus exact fixup.
fn integer_nth_root(m: u64, exp: u32) -> u64 {
    if m <= 1 || exp == 1 {
        return m;
    }
    // an overflowing power counts as "exceeds m" in both loops
    let pow_gt = |base: u64| base.checked_pow(exp).is_none_or(|v| v > m);
    let mut root = (m as f64).powf(1.0 / exp as f64).round() as u64;
    while root > 0 && pow_gt(root) {
        root -= 1;
    }
    while !pow_gt(root + 1) {
        root += 1;
    }
    root
}

/// `!n mod n`: 1 for even n, `n-1` for odd n (0 at n = 1, where -1 = 0).
pub fn subfactorial_closed(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    Ok(if n % 2 == 0 { 1 } else { n - 1 })
}

/// `(n-1)!! mod n` for any `n >= 2`, dispatching on the shape of n.
pub fn df_closed(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::BelowMinimum { n, min: 2 });
    }
    if n % 2 == 0 {
        df_even(n)
    } else if is_prime(n) {
        df_prime(n)
    } else {
        df_odd_composite(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{double_factorial_mod, subfactorial_mod, unit_product_mod};

    #[test]
    fn wilson_examples() {
        assert_eq!(wilson_residue(2), 1);
        assert_eq!(wilson_residue(5), 4);
        assert_eq!(wilson_residue(4), 2);
        assert_eq!(wilson_residue(9), 0);
        assert_eq!(wilson_residue(12), 0);
    }

    #[test]
    #[should_panic(expected = "n >= 2")]
    fn wilson_rejects_small_n() {
        wilson_residue(1);
    }

    #[test]
    fn quad_stats_examples() {
        let s = quad_stats(7).unwrap();
        assert_eq!((s.nu, s.big_n, s.mu, s.i_p), (1, 1, 1, None));
        let s = quad_stats(11).unwrap();
        assert_eq!((s.nu, s.big_n, s.mu, s.i_p), (0, 1, 3, None));
        let s = quad_stats(13).unwrap();
        assert_eq!((s.mu, s.i_p), (1, Some(5)));
        let s = quad_stats(19).unwrap();
        assert_eq!((s.nu, s.mu), (2, 3));
        assert_eq!(quad_stats(2), Err(Error::NotOddPrime(2)));
        assert_eq!(quad_stats(15), Err(Error::NotOddPrime(15)));
    }

    #[test]
    fn quad_stats_boundary_p3() {
        // p = 3 is the one prime where 2 exceeds p/2: both nonresidue counts
        // are 0 although 2 is a nonresidue.
        let s = quad_stats(3).unwrap();
        assert_eq!((s.nu, s.big_n, s.mu, s.i_p), (0, 0, 1, None));
    }

    #[test]
    fn nu_tracks_big_n_except_at_3() {
        for p in (5..2000).filter(|&p| is_prime(p)) {
            let s = quad_stats(p).unwrap();
            let adjust = if legendre(2, p).unwrap() == -1 { 1 } else { 0 };
            assert_eq!(s.nu, s.big_n - adjust, "p={p}");
        }
    }

    #[test]
    fn df_prime_3mod4_examples() {
        assert_eq!(df_prime_3mod4(7).unwrap(), 6);
        assert_eq!(df_prime_3mod4(11).unwrap(), 1);
        assert_eq!(df_prime_3mod4(19).unwrap(), 1);
        // the boundary prime: the N form stays oracle-true
        assert_eq!(df_prime_3mod4(3).unwrap(), 2);
        assert_eq!(double_factorial_mod(2, 3), 2);
        assert_eq!(
            df_prime_3mod4(13),
            Err(Error::WrongClassMod4 { p: 13, class: 3 })
        );
        assert_eq!(df_prime_3mod4(9), Err(Error::NotOddPrime(9)));
    }

    #[test]
    fn nu_parity_equals_sign_only_above_3() {
        for p in (7..3000).filter(|&p| is_prime(p) && p % 4 == 3) {
            let s = quad_stats(p).unwrap();
            let from_nu = sign_to_residue(if s.nu % 2 == 0 { 1 } else { -1 }, p);
            assert_eq!(df_prime_3mod4(p).unwrap(), from_nu, "p={p}");
        }
        // ... and p = 3 is the lone counterexample to the nu form
        let s = quad_stats(3).unwrap();
        assert_eq!(s.nu % 2, 0);
        assert_ne!(df_prime_3mod4(3).unwrap(), 1);
    }

    #[test]
    fn df_prime_examples() {
        assert_eq!(df_prime(3).unwrap(), 2);
        assert_eq!(df_prime(5).unwrap(), 3);
        assert_eq!(df_prime(7).unwrap(), 6);
        assert_eq!(df_prime(13).unwrap(), 8);
        assert_eq!(df_prime(2), Err(Error::NotOddPrime(2)));
        assert_eq!(df_prime(21), Err(Error::NotOddPrime(21)));
    }

    #[test]
    fn half_square_sign_examples() {
        assert_eq!(half_factorial_square_sign(7), 1);
        assert_eq!(half_factorial_square_sign(11), 1);
        assert_eq!(half_factorial_square_sign(5), -1);
        assert_eq!(half_factorial_square_sign(13), -1);
        assert_eq!(half_factorial_square_sign(3), 1);
    }

    #[test]
    fn df_via_legendre_examples() {
        assert_eq!(df_via_legendre(7).unwrap(), 6);
        assert_eq!(df_via_legendre(5).unwrap(), 3);
        assert_eq!(df_via_legendre(13).unwrap(), 8);
        assert_eq!(df_via_legendre(3).unwrap(), 2);
        assert_eq!(df_via_legendre(15), Err(Error::NotOddPrime(15)));
    }

    #[test]
    fn sf_prime_examples() {
        assert_eq!(sf_prime(2).unwrap(), 1);
        assert_eq!(sf_prime(5).unwrap(), 3);
        assert_eq!(sf_prime(7).unwrap(), 6);
        assert_eq!(sf_prime_half_form(11).unwrap(), 1);
        assert_eq!(sf_prime(6), Err(Error::NotPrime(6)));
    }

    #[test]
    fn hyper_prime_examples() {
        assert_eq!(hyper_prime(3).unwrap(), 1);
        assert_eq!(hyper_prime(5).unwrap(), 3);
        assert_eq!(hyper_prime(7).unwrap(), 1);
        assert_eq!(hyper_prime(2), Err(Error::NotOddPrime(2)));
        assert_eq!(hyper_prime(9), Err(Error::NotOddPrime(9)));
    }

    #[test]
    fn df_odd_composite_examples() {
        assert_eq!(df_odd_composite(9).unwrap(), 6);
        assert_eq!(df_odd_composite(15).unwrap(), 0);
        assert_eq!(df_odd_composite(25).unwrap(), 0);
        assert_eq!(df_odd_composite(7), Err(Error::NotOddComposite(7)));
        assert_eq!(df_odd_composite(12), Err(Error::NotOddComposite(12)));
        assert_eq!(df_odd_composite(1), Err(Error::NotOddComposite(1)));
    }

    #[test]
    fn df_even_examples() {
        assert_eq!(df_even(2).unwrap(), 1);
        assert_eq!(df_even(4).unwrap(), 3);
        assert_eq!(df_even(6).unwrap(), 3);
        assert_eq!(df_even(12).unwrap(), 3); // the i = 2 branch: -(3^2) = 3, not -3 = 9
        assert_eq!(df_even(16).unwrap(), 1);
        assert_eq!(df_even(24).unwrap(), 9);
        assert_eq!(df_even(48).unwrap(), 33);
        assert_eq!(df_even(15), Err(Error::NotEven(15)));
    }

    #[test]
    fn gauss_wilson_examples() {
        assert_eq!(gauss_wilson(2).unwrap(), 1);
        assert_eq!(gauss_wilson(4).unwrap(), 3);
        assert_eq!(gauss_wilson(6).unwrap(), 5);
        assert_eq!(gauss_wilson(8).unwrap(), 1);
        assert_eq!(gauss_wilson(9).unwrap(), 8);
        assert_eq!(gauss_wilson(12).unwrap(), 1);
        assert_eq!(gauss_wilson(18).unwrap(), 17);
        assert_eq!(gauss_wilson(27).unwrap(), 26);
        assert_eq!(gauss_wilson(1), Err(Error::BelowMinimum { n: 1, min: 2 }));
        for n in 2..800 {
            assert_eq!(
                gauss_wilson(n).unwrap(),
                unit_product_mod(n).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn prime_power_detection() {
        assert!(is_odd_prime_power(3));
        assert!(is_odd_prime_power(27));
        assert!(is_odd_prime_power(3u64.pow(20)));
        assert!(is_odd_prime_power(5u64.pow(27)));
        assert!(!is_odd_prime_power(15));
        assert!(!is_odd_prime_power(9 * 25));
        assert!(!is_odd_prime_power(3u64.pow(20) + 2));
        // perfect power of a composite is not a prime power
        assert!(!is_odd_prime_power(15u64.pow(4)));
    }

    #[test]
    fn nth_root_is_exact() {
        assert_eq!(integer_nth_root(26, 3), 2);
        assert_eq!(integer_nth_root(27, 3), 3);
        assert_eq!(integer_nth_root(28, 3), 3);
        assert_eq!(integer_nth_root(u64::MAX, 2), 4_294_967_295);
        assert_eq!(integer_nth_root(u64::MAX, 63), 2);
        for base in [3u64, 7, 10, 6_700_417] {
            for exp in 2..=6 {
                let Some(m) = base.checked_pow(exp) else {
                    break;
                };
                assert_eq!(integer_nth_root(m, exp), base);
                assert_eq!(integer_nth_root(m - 1, exp), base - 1);
            }
        }
    }

    #[test]
    fn subfactorial_closed_examples() {
        assert_eq!(subfactorial_closed(1).unwrap(), 0);
        assert_eq!(subfactorial_closed(2).unwrap(), 1);
        assert_eq!(subfactorial_closed(4).unwrap(), 1);
        assert_eq!(subfactorial_closed(5).unwrap(), 4);
        assert_eq!(subfactorial_closed(0), Err(Error::ZeroInput));
        for n in 1..500 {
            assert_eq!(
                subfactorial_closed(n).unwrap(),
                subfactorial_mod(n, n),
                "n={n}"
            );
        }
    }

    #[test]
    fn df_closed_dispatch() {
        assert_eq!(df_closed(9).unwrap(), 6);
        assert_eq!(df_closed(12).unwrap(), 3);
        assert_eq!(df_closed(13).unwrap(), 8);
        assert_eq!(df_closed(48).unwrap(), 33);
        assert_eq!(df_closed(1), Err(Error::BelowMinimum { n: 1, min: 2 }));
        for n in 2..800 {
            assert_eq!(
                df_closed(n).unwrap(),
                double_factorial_mod(n - 1, n),
                "n={n}"
            );
        }
    }

    #[test]
    fn mu_is_always_odd() {
        for p in (3..1500).filter(|&p| is_prime(p)) {
            assert_eq!(quad_stats(p).unwrap().mu % 2, 1, "p={p}");
        }
    }
}
