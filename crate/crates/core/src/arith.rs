//! Integer plumbing: sieves, factorization, totients, von Mangoldt, modular
//! inverses and the w-smooth / w-rough split of a modulus.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Largest integer accepted by [`factorize`].
pub const FACTOR_BOUND: u64 = 1 << 50;

/// Size of the shared smallest-prime-factor table. Integers above it are
/// factored by trial division and Pollard rho.
pub const DEFAULT_SIEVE_LIMIT: usize = 10_000_000;

/// Smallest-prime-factor table on `0..=limit`.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    /// Linear sieve; `spf[n]` is the least prime dividing `n` (`spf[0] = spf[1] = 0`).
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(1);
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for n in 2..=limit {
            if spf[n] == 0 {
                spf[n] = n as u32;
                primes.push(n as u32);
            }
            let s = spf[n];
            for &p in &primes {
                let m = n * p as usize;
                if p > s || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        Sieve { spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    #[inline]
    pub fn spf(&self, n: usize) -> u32 {
        self.spf[n]
    }

    #[inline]
    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    /// Number of primes `≤ t` for `t ≤ limit`.
    pub fn pi(&self, t: usize) -> usize {
        self.primes.partition_point(|&p| (p as usize) <= t)
    }

    /// Splits off the smallest prime power: `n = p^k · m` with `p = spf(n)`, `p ∤ m`.
    /// Returns `(p, k, p^k)`.
    #[inline]
    pub fn leading_prime_power(&self, n: usize) -> (u64, u32, u64) {
        let p = self.spf[n] as u64;
        let mut m = n as u64 / p;
        let mut k = 1;
        let mut pk = p;
        while m % p == 0 {
            m /= p;
            k += 1;
            pk *= p;
        }
        (p, k, pk)
    }

    /// Prime factorization of `n ≤ limit`, primes ascending.
    pub fn factor(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let (p, k, pk) = self.leading_prime_power(n);
            out.push((p, k));
            n /= pk as usize;
        }
        out
    }
}

/// Process-wide sieve, built on first use and immutable afterwards.
pub fn shared_sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(DEFAULT_SIEVE_LIMIT))
}

/// Sieve covering at least `n`: the shared table when it is large enough,
/// otherwise a fresh one.
pub fn sieve_for(n: usize) -> std::borrow::Cow<'static, Sieve> {
    if n <= DEFAULT_SIEVE_LIMIT {
        std::borrow::Cow::Borrowed(shared_sieve())
    } else {
        std::borrow::Cow::Owned(Sieve::new(n))
    }
}

/// Primes up to `n` (simple Eratosthenes over odd numbers).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    primes_in_range(0, n)
}

/// Primes in `(lo, hi]`, by a segmented sieve of Eratosthenes.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi <= lo {
        return Vec::new();
    }
    let root = isqrt(hi);
    let base: Vec<u64> = {
        let r = root as usize;
        let mut composite = vec![false; r + 1];
        let mut ps = Vec::new();
        for i in 2..=r {
            if !composite[i] {
                ps.push(i as u64);
                let mut j = i * i;
                while j <= r {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        ps
    };
    const SEGMENT: u64 = 1 << 18;
    let mut out = Vec::new();
    let mut start = (lo + 1).max(2);
    let mut marks = vec![false; SEGMENT as usize];
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let len = (end - start + 1) as usize;
        marks[..len].iter_mut().for_each(|m| *m = false);
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut j = first;
            while j <= end {
                marks[(j - start) as usize] = true;
                j += p;
            }
        }
        out.extend((0..len).filter(|&i| !marks[i]).map(|i| start + i as u64));
        start = end + 1;
    }
    out
}

/// Prime factorization with derived totient and von Mangoldt value.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
    pub phi: u64,
    /// `Λ(n)`, natural log.
    pub von_mangoldt: f64,
}

impl Factorization {
    fn from_factors(n: u64, factors: Vec<(u64, u32)>) -> Self {
        let phi = factors
            .iter()
            .fold(1u64, |acc, &(p, k)| acc * (p - 1) * p.pow(k - 1));
        let von_mangoldt = match factors.as_slice() {
            [(p, _)] => (*p as f64).ln(),
            _ => 0.0,
        };
        Factorization {
            n,
            factors,
            phi,
            von_mangoldt,
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Largest prime factor, `1` for `n = 1`.
    pub fn largest_prime(&self) -> u64 {
        self.factors.last().map_or(1, |&(p, _)| p)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, k) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Factors `1 ≤ n ≤ 2^50`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 || n > FACTOR_BOUND {
        return domain(format!("factorize: n = {n} outside [1, 2^50]"));
    }
    if n as usize <= DEFAULT_SIEVE_LIMIT {
        let factors = shared_sieve().factor(n as usize);
        return Ok(Factorization::from_factors(n, factors));
    }
    let mut primes = Vec::new();
    let mut m = n;
    for &p in shared_sieve().primes().iter().take_while(|&&p| p < 1000) {
        let p = p as u64;
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    split_rho(m, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization::from_factors(n, factors))
}

fn split_rho(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_rho(d, out);
    split_rho(n / d, out);
}

/// Nontrivial factor of an odd composite `n` (Brent's variant, deterministic seeds).
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`. `m = 1` gives `Some(0)`.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    let m_i = m as i128;
    let (mut r0, mut r1) = (a as i128 % m_i, m_i);
    if r0 < 0 {
        r0 += m_i;
    }
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(s0.rem_euclid(m_i) as u64)
}

/// Euler's totient.
pub fn phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.phi)
}

/// `Λ(n)` in natural-log units.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    factorize(n).map(|f| f.von_mangoldt).unwrap_or(0.0)
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `q = q_s · q_r` with `q_s` w-smooth and `q_r` free of primes `≤ w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothRoughSplit {
    pub q: u64,
    pub w: u64,
    pub q_s: u64,
    pub q_r: u64,
}

pub fn smooth_rough_split(q: u64, w: u64) -> Result<SmoothRoughSplit> {
    if w < 2 {
        return domain(format!("smooth_rough_split: w = {w} < 2"));
    }
    let fac = factorize(q)?;
    let q_s = fac
        .factors
        .iter()
        .filter(|&&(p, _)| p <= w)
        .map(|&(p, k)| p.pow(k))
        .product();
    Ok(SmoothRoughSplit {
        q,
        w,
        q_s,
        q_r: q / q_s,
    })
}

/// Ensures `n` is within a resource bound.
pub(crate) fn check_bound(what: &str, n: u64, bound: u64) -> Result<()> {
    if n > bound {
        Err(Error::Resource(format!("{what} = {n} exceeds bound {bound}")))
    } else {
        Ok(())
    }
}
