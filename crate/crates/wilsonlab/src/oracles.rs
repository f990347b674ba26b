//! Definitional O(n) product oracles for the factorial family.
//!
//! Each function multiplies its definition out term by term, reducing as it
//! goes. None of them consult the closed forms they are later checked
//! against; that independence is the whole point. Empty products are 1
//! (`0!! = H(0) = sf(0) = 1`, `!0 = 1`), and the monotone products
//! short-circuit once the running value hits 0, which it never leaves.

use crate::modmath::{gcd, mod_add, mod_mul, mod_pow};
use crate::{Error, Result};

/// `n! mod m`.
pub fn factorial_mod(n: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    for k in 2..=n {
        acc = mod_mul(acc, k % m, m);
        if acc == 0 {
            return 0;
        }
    }
    acc
}

/// `n!! mod m`: the product n(n-2)(n-4)... down to 2 or 1.
pub fn double_factorial_mod(n: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut k = n;
    while k > 1 {
        acc = mod_mul(acc, k % m, m);
        if acc == 0 {
            return 0;
        }
        k -= 2;
    }
    acc
}

/// Hyperfactorial `H(n) = 1^1 2^2 ... n^n mod m`.
pub fn hyperfactorial_mod(n: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    for k in 2..=n {
        acc = mod_mul(acc, mod_pow(k, k, m), m);
        if acc == 0 {
            return 0;
        }
    }
    acc
}

/// Superfactorial `sf(n) = 1! 2! ... n! mod m`, via a running factorial.
pub fn superfactorial_mod(n: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut factorial = 1 % m;
    for k in 2..=n {
        factorial = mod_mul(factorial, k % m, m);
        acc = mod_mul(acc, factorial, m);
        if acc == 0 {
            return 0;
        }
    }
    acc
}

/// Subfactorial (derangement count) `!n mod m` by the recurrence
/// `!k = k * !(k-1) + (-1)^k` from `!0 = 1`. Not monotone, so no early exit.
pub fn subfactorial_mod(n: u64, m: u64) -> u64 {
    let mut d = 1 % m;
    for k in 1..=n {
        d = mod_mul(d, k % m, m);
        d = if k % 2 == 0 {
            mod_add(d, 1, m)
        } else {
            mod_add(d, m - 1, m)
        };
    }
    d
}

/// Gauss factorial: the product of `1 <= i <= n` coprime to `base`, mod `m`.
/// For odd n and base 2 this is exactly `n!!`.
pub fn gauss_factorial_mod(n: u64, base: u64, m: u64) -> u64 {
    debug_assert!(base >= 1);
    let mut acc = 1 % m;
    for i in 1..=n {
        if gcd(i, base) == 1 {
            acc = mod_mul(acc, i % m, m);
        }
    }
    acc
}

/// Product of the units of Z/n (all `1 <= s < n` with `gcd(s, n) = 1`), mod n.
pub fn unit_product_mod(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::BelowMinimum { n, min: 2 });
    }
    let mut acc = 1 % n;
    for s in 2..n {
        if gcd(s, n) == 1 {
            acc = mod_mul(acc, s, n);
        }
    }
    Ok(acc)
}

/// Selector for the oracle evaluators, as surfaced on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorialKind {
    Factorial,
    Double,
    Hyper,
    Sub,
    Super,
    /// Gauss factorial relative to a coprimality base.
    Gauss {
        base: u64,
    },
    UnitProduct,
}

impl FactorialKind {
    pub fn tag(self) -> &'static str {
        match self {
            FactorialKind::Factorial => "factorial",
            FactorialKind::Double => "double",
            FactorialKind::Hyper => "hyper",
            FactorialKind::Sub => "sub",
            FactorialKind::Super => "super",
            FactorialKind::Gauss { .. } => "gauss",
            FactorialKind::UnitProduct => "unit",
        }
    }

    /// Evaluates the matching oracle at `n` modulo `m`. The unit product is
    /// only defined modulo n itself, so it insists on `m == n`.
    pub fn eval_mod(self, n: u64, m: u64) -> Result<u64> {
        Ok(match self {
            FactorialKind::Factorial => factorial_mod(n, m),
            FactorialKind::Double => double_factorial_mod(n, m),
            FactorialKind::Hyper => hyperfactorial_mod(n, m),
            FactorialKind::Sub => subfactorial_mod(n, m),
            FactorialKind::Super => superfactorial_mod(n, m),
            FactorialKind::Gauss { base } => gauss_factorial_mod(n, base, m),
            FactorialKind::UnitProduct => {
                assert_eq!(m, n, "the unit product is only defined modulo n");
                unit_product_mod(n)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modmath::is_prime;
    use proptest::prelude::*;

    // Deterministic pseudo-random moduli for the recurrence sweeps.
    fn splitmix64(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial_mod(0, 7), 1);
        assert_eq!(factorial_mod(1, 7), 1);
        assert_eq!(factorial_mod(4, 5), 4);
        assert_eq!(factorial_mod(3, 4), 2);
        assert_eq!(factorial_mod(5, 6), 0);
        assert_eq!(factorial_mod(20, 1), 0);
        // early exit: a factor of m kills the product immediately
        assert_eq!(factorial_mod(1_000_000_000_000, 10), 0);
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial_mod(0, 5), 1);
        assert_eq!(double_factorial_mod(1, 5), 1);
        assert_eq!(double_factorial_mod(2, 5), 2);
        assert_eq!(double_factorial_mod(8, 9), 6);
        assert_eq!(double_factorial_mod(6, 7), 6);
        assert_eq!(double_factorial_mod(11, 12), 3);
        assert_eq!(double_factorial_mod(47, 48), 33);
        assert_eq!(double_factorial_mod(1_000_000_000_000, 6), 0);
    }

    #[test]
    fn hyperfactorial_examples() {
        assert_eq!(hyperfactorial_mod(0, 9), 1);
        assert_eq!(hyperfactorial_mod(4, 5), 3);
        assert_eq!(hyperfactorial_mod(3, 10), 8);
        assert_eq!(hyperfactorial_mod(1_000_000_000, 97), 0);
    }

    #[test]
    fn superfactorial_examples() {
        assert_eq!(superfactorial_mod(0, 9), 1);
        assert_eq!(superfactorial_mod(1, 9), 1);
        assert_eq!(superfactorial_mod(4, 5), 3);
        assert_eq!(superfactorial_mod(6, 7), 6);
        assert_eq!(superfactorial_mod(1_000_000_000, 101), 0);
    }

    #[test]
    fn subfactorial_examples() {
        assert_eq!(subfactorial_mod(0, 100), 1);
        assert_eq!(subfactorial_mod(1, 100), 0);
        assert_eq!(subfactorial_mod(2, 100), 1);
        assert_eq!(subfactorial_mod(3, 100), 2);
        assert_eq!(subfactorial_mod(4, 100), 9);
        assert_eq!(subfactorial_mod(5, 100), 44);
        // !12 = 176214841 in full, no reduction at this modulus
        assert_eq!(subfactorial_mod(12, 1_000_000_000), 176_214_841);
    }

    #[test]
    fn gauss_factorial_examples() {
        assert_eq!(gauss_factorial_mod(8, 2, 1000), 105);
        assert_eq!(gauss_factorial_mod(7, 2, 1000), 105);
        assert_eq!(gauss_factorial_mod(5, 1, 7), 1); // 5! = 120 = 17*7 + 1
        assert_eq!(gauss_factorial_mod(0, 3, 11), 1);
    }

    #[test]
    fn unit_product_examples() {
        assert_eq!(unit_product_mod(9).unwrap(), 8);
        assert_eq!(unit_product_mod(8).unwrap(), 1);
        assert_eq!(unit_product_mod(12).unwrap(), 1);
        assert_eq!(unit_product_mod(2).unwrap(), 1);
        assert_eq!(
            unit_product_mod(1),
            Err(Error::BelowMinimum { n: 1, min: 2 })
        );
    }

    #[test]
    fn unit_product_is_gauss_factorial_of_n() {
        for n in 2..500 {
            assert_eq!(
                unit_product_mod(n).unwrap(),
                gauss_factorial_mod(n, n, n),
                "n={n}"
            );
        }
    }

    #[test]
    fn unit_product_is_wilson_factorial_at_primes() {
        for p in (2..2000).filter(|&p| is_prime(p)) {
            assert_eq!(unit_product_mod(p).unwrap(), factorial_mod(p - 1, p));
        }
    }

    // Recurrence sweeps: each value is recomputed from scratch at step n and
    // checked against the recurrence applied to the (fresh) value at n-1.
    #[test]
    fn recurrences_hold_up_to_5000() {
        let mut state = 0x5eed_0001u64;
        let mut moduli = vec![1u64, 2, 720];
        for _ in 0..3 {
            moduli.push(splitmix64(&mut state) % 1_000_000_000 + 2);
        }
        for &m in &moduli {
            let (mut f, mut df_prev2, mut h, mut sf) = (1 % m, (1 % m, 1 % m), 1 % m, 1 % m);
            for n in 1..=5000u64 {
                let fact = factorial_mod(n, m);
                assert_eq!(fact, mod_mul(f, n % m, m), "factorial n={n} m={m}");
                f = fact;

                // n!! = n * (n-2)!!
                let df = double_factorial_mod(n, m);
                assert_eq!(df, mod_mul(df_prev2.0, n % m, m), "double n={n} m={m}");
                df_prev2 = (df_prev2.1, df);

                let hyper = hyperfactorial_mod(n, m);
                assert_eq!(hyper, mod_mul(h, mod_pow(n, n, m), m), "hyper n={n} m={m}");
                h = hyper;

                let sup = superfactorial_mod(n, m);
                assert_eq!(sup, mod_mul(sf, fact, m), "super n={n} m={m}");
                sf = sup;
            }
        }
    }

    #[test]
    fn even_double_factorial_splits_into_power_and_factorial() {
        let mut state = 42u64;
        for n in (0..=5000u64).step_by(2) {
            let m = splitmix64(&mut state) % 999_999 * 2 + 3; // odd
            let lhs = double_factorial_mod(n, m);
            let rhs = mod_mul(mod_pow(2, n / 2, m), factorial_mod(n / 2, m), m);
            assert_eq!(lhs, rhs, "n={n} m={m}");
        }
    }

    #[test]
    fn odd_double_factorial_is_gauss_factorial_base_2() {
        let mut state = 7u64;
        for n in (1..=5000u64).step_by(2) {
            let m = splitmix64(&mut state) % 1_000_000 + 1;
            assert_eq!(
                double_factorial_mod(n, m),
                gauss_factorial_mod(n, 2, m),
                "n={n} m={m}"
            );
        }
    }

    #[test]
    fn subfactorial_matches_derangement_enumeration() {
        // literal backtracking enumeration of fixed-point-free assignments
        fn count(pos: u32, n: u32, used: u16) -> u64 {
            if pos == n {
                return 1;
            }
            let mut total = 0;
            let mut free = !used & ((1u16 << n) - 1);
            while free != 0 {
                let bit = free & free.wrapping_neg();
                if bit.trailing_zeros() != pos {
                    total += count(pos + 1, n, used | bit);
                }
                free &= free - 1;
            }
            total
        }
        let big = 1_000_000_007u64;
        for n in 0..=10u32 {
            assert_eq!(subfactorial_mod(n as u64, big), count(0, n, 0), "n={n}");
        }
    }

    #[test]
    fn kind_dispatch() {
        assert_eq!(FactorialKind::Double.eval_mod(8, 9).unwrap(), 6);
        assert_eq!(
            FactorialKind::Gauss { base: 2 }.eval_mod(8, 1000).unwrap(),
            105
        );
        assert_eq!(FactorialKind::UnitProduct.eval_mod(9, 9).unwrap(), 8);
        assert_eq!(FactorialKind::Super.tag(), "super");
    }

    proptest! {
        #[test]
        fn prop_subfactorial_recurrence(n in 1u64..400, m in 1u64..1_000_000_000) {
            let prev = subfactorial_mod(n - 1, m);
            let step = if n % 2 == 0 {
                mod_add(mod_mul(prev, n % m, m), 1, m)
            } else {
                mod_add(mod_mul(prev, n % m, m), m - 1, m)
            };
            prop_assert_eq!(subfactorial_mod(n, m), step);
        }

        #[test]
        fn prop_oracles_reduce_like_integers(n in 0u64..18, m in 1u64..1_000_000) {
            // small enough to compute exactly in u128
            let mut fact = 1u128;
            for k in 2..=n as u128 { fact *= k; }
            prop_assert_eq!(factorial_mod(n, m) as u128, fact % m as u128);
            let mut df = 1u128;
            let mut k = n as u128;
            while k > 1 { df *= k; k -= 2; }
            prop_assert_eq!(double_factorial_mod(n, m) as u128, df % m as u128);
        }
    }
}
