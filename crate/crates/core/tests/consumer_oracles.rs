use ksqrng::consumer::{
    carmichael_harness, carmichael_numbers, jacobi, mul_mod, pow_mod, solovay_strassen, BitCursor, BitSource, Verdict,
};
use ksqrng::BitStream;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{is_carmichael_by_korselt, is_prime, jacobi_oracle, naive_pow_mod};

#[test]
fn jacobi_matches_euler_oracle_for_odd_moduli_below_1000() {
    for n in (1..1000u64).step_by(2) {
        for a in -(n as i64)..2 * n as i64 {
            assert_eq!(jacobi(a, n).unwrap(), jacobi_oracle(a, n), "({a}/{n})");
        }
    }
}

#[test]
fn jacobi_rejects_even_moduli() {
    assert!(jacobi(3, 0).is_err());
    assert!(jacobi(3, 10).is_err());
}

#[test]
fn pow_mod_matches_repeated_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let m = rng.random_range(1..1_000_000u64);
        let base = rng.random::<u64>();
        let exp = rng.random_range(0..2000u64);
        assert_eq!(pow_mod(base, exp, m), naive_pow_mod(base, exp, m), "{base}^{exp} mod {m}");
    }
}

proptest! {
    #[test]
    fn pow_mod_matches_bigint(base: u64, exp: u64, m in 1u64..(1 << 63)) {
        let expected = BigUint::from(base).modpow(&BigUint::from(exp), &BigUint::from(m));
        prop_assert_eq!(BigUint::from(pow_mod(base, exp, m)), expected);
    }

    #[test]
    fn mul_mod_matches_bigint(a: u64, b: u64, m in 1u64..=u64::MAX) {
        let expected = BigUint::from(a) * BigUint::from(b) % BigUint::from(m);
        prop_assert_eq!(BigUint::from(mul_mod(a, b, m)), expected);
    }
}

/// Fermat definition: composite and `a^(n−1) ≡ 1 (mod n)` for every `a`
/// coprime to `n`.
fn is_carmichael_by_fermat(n: u64) -> bool {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    n > 2 && !is_prime(n) && (2..n).filter(|&a| gcd(a, n) == 1).all(|a| naive_pow_mod(a, n - 1, n) == 1)
}

#[test]
fn carmichael_list_matches_fermat_definition_below_2000() {
    let expected: Vec<u64> = (2..2000).filter(|&n| is_carmichael_by_fermat(n)).collect();
    assert_eq!(expected, [561, 1105, 1729]);
    assert_eq!(carmichael_numbers(2000), expected);
}

#[test]
fn carmichael_list_matches_korselt_oracle_below_1e5() {
    let expected: Vec<u64> = (2..100_000).filter(|&n| is_carmichael_by_korselt(n)).collect();
    assert_eq!(expected.len(), 16);
    assert_eq!(carmichael_numbers(100_000), expected);
}

struct RngBits(ChaCha8Rng);

impl BitSource for RngBits {
    fn next_bit(&mut self) -> Option<bool> {
        Some(self.0.next_u32() & 1 == 1)
    }
}

#[test]
fn primes_are_never_called_composite() {
    let mut bits = RngBits(ChaCha8Rng::seed_from_u64(3));
    for n in (3..10_000u64).filter(|&n| is_prime(n)) {
        let v = solovay_strassen(n, &mut bits, 16).unwrap();
        assert_eq!(v.verdict, Verdict::ProbablyPrime, "{n}");
        if n > 3 {
            assert_eq!(v.witnesses_used, 16);
        }
    }
}

#[test]
fn odd_composites_are_caught() {
    let mut bits = RngBits(ChaCha8Rng::seed_from_u64(5));
    for n in (9..5_000u64).step_by(2).filter(|&n| !is_prime(n)) {
        let v = solovay_strassen(n, &mut bits, 64).unwrap();
        assert_eq!(v.verdict, Verdict::Composite, "{n}");
        assert!(v.witnesses_used >= 1 && v.bits_consumed > 0);
    }
}

#[test]
fn harness_over_ten_million_bits() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bytes = vec![0u8; 10_000_000 / 8];
    rng.fill_bytes(&mut bytes);
    let bits = BitStream::from_packed(bytes, 10_000_000).unwrap();
    let mut cursor = BitCursor::new(&bits);
    let report = carmichael_harness(100_000, &mut cursor, 64).unwrap();
    assert_eq!(report.numbers_tested, 16);
    assert_eq!(report.composite, 16);
    assert_eq!(report.total_bits_consumed, cursor.position() as u64);
    let first: Vec<u64> = report.verdicts.iter().take(3).map(|v| v.number).collect();
    assert_eq!(first, [561, 1105, 1729]);
}
