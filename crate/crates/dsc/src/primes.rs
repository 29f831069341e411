//! Trial-division factorization backed by a cached sieve. Frequencies at
//! desk scale stay far below the point where anything cleverer pays off.

use std::sync::OnceLock;

static SMALL_PRIMES: OnceLock<Vec<u64>> = OnceLock::new();

fn sieve_upto(limit: usize) -> Vec<u64> {
    let mut is_comp = vec![false; limit + 1];
    let mut out = Vec::new();
    for p in 2..=limit {
        if !is_comp[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= limit {
                is_comp[q] = true;
                q += p;
            }
        }
    }
    out
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let cached = SMALL_PRIMES.get_or_init(|| sieve_upto(1 << 16));
    if count <= cached.len() {
        return cached[..count].to_vec();
    }
    // grow past the cache by trial division
    let mut out = cached.clone();
    let mut n = *out.last().unwrap() + 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize: n must be >= 1");
    let mut out = Vec::new();
    let primes = SMALL_PRIMES.get_or_init(|| sieve_upto(1 << 16));
    for &p in primes {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        // remaining cofactor; trial-divide past the sieve if necessary
        let mut m = n;
        let mut d = (1u64 << 16) + 1;
        while d * d <= m {
            if m % d == 0 {
                let mut e = 0u32;
                while m % d == 0 {
                    m /= d;
                    e += 1;
                }
                out.push((d, e));
            }
            d += 2;
        }
        if m > 1 {
            out.push((m, 1));
        }
        out.sort_unstable();
    }
    out
}
