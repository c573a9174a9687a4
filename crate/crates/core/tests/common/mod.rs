//! Brute-force number-theory oracles shared by the integration targets.
#![allow(dead_code)]

pub fn naive_pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    for _ in 0..exp {
        acc = acc * (base % m) % m;
    }
    acc
}

/// Prime factors with multiplicity, ascending, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Legendre symbol from Euler's criterion, by repeated multiplication.
pub fn legendre_euler(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if p == 2 {
        return 1;
    }
    match naive_pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        r if r == p - 1 => -1,
        r => panic!("Euler criterion gave {r} mod {p}"),
    }
}

/// Product of Legendre symbols over the factorization of `n`.
pub fn jacobi_oracle(a: i64, n: u64) -> i8 {
    prime_factors(n).into_iter().map(|p| legendre_euler(a, p)).product()
}

/// Korselt's criterion from a full factorization.
pub fn is_carmichael_by_korselt(n: u64) -> bool {
    let f = prime_factors(n);
    let squarefree = f.windows(2).all(|w| w[0] != w[1]);
    f.len() >= 2 && squarefree && f.iter().all(|p| (n - 1).is_multiple_of(p - 1))
}
