//! Integer factorization, radicals, smoothness and d-part splittings.
//!
//! Trial division to 10^6 followed by Pollard rho (Brent variant) with a
//! deterministic restart schedule. Complete factorizations are guaranteed
//! for inputs below 2^80; anything the schedule cannot split is surfaced in
//! the `cofactor` field rather than silently mislabeled.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::ff::is_prime_u64;
use crate::Result;

/// Primality for arbitrary-precision n: deterministic below 2^64, and
/// Miller-Rabin with the first 13 prime bases above (deterministic for all
/// n < 3.3 * 10^24, which covers the crate's 2^80 completeness contract).
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let small: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &p in &small {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &small {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A complete-unless-stated-otherwise factorization: primes strictly
/// increasing, exponents >= 1, and `value = cofactor * prod p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn value(&self) -> BigUint {
        let mut v = self.cofactor.clone();
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigUint {
        let mut r = BigUint::one();
        for (p, _) in &self.factors {
            r *= p;
        }
        r
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }
}

fn brent_rho(n: &BigUint, c: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let budget: u64 = 1 << 22;
    let mut steps: u64 = 0;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k: u64 = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let m = 128.min(r - k);
            for _ in 0..m {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
            steps += m;
            if steps > budget {
                return None;
            }
        }
        r *= 2;
    }
    if &g == n {
        // backtrack
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

/// Complete factorization via trial division then Pollard rho with the
/// deterministic restart schedule c = 1, 2, 3, ...
pub fn factor(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Invalid("cannot factor 0".into()));
    }
    let mut m = n.clone();
    let mut factors: Vec<(BigUint, u32)> = vec![];
    let push = |p: BigUint, e: u32, factors: &mut Vec<(BigUint, u32)>| {
        if let Some(slot) = factors.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += e;
        } else {
            factors.push((p, e));
        }
    };

    // trial division to 10^6
    let mut d: u64 = 2;
    while d <= 1_000_000 {
        if &BigUint::from(d) * BigUint::from(d) > m {
            break;
        }
        let mut e = 0u32;
        while (&m % d).is_zero() {
            m /= d;
            e += 1;
        }
        if e > 0 {
            push(BigUint::from(d), e, &mut factors);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    // rho on what remains
    let mut stack = vec![];
    if !m.is_one() {
        stack.push(m);
    }
    let mut cofactor = BigUint::one();
    while let Some(v) = stack.pop() {
        if v.is_one() {
            continue;
        }
        if is_prime(&v) {
            push(v, 1, &mut factors);
            continue;
        }
        let mut split = None;
        for c in 1..=40u64 {
            if let Some(g) = brent_rho(&v, c) {
                split = Some(g);
                break;
            }
        }
        match split {
            Some(g) => {
                let h = &v / &g;
                stack.push(g);
                stack.push(h);
            }
            None => cofactor *= v,
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { factors, cofactor })
}

pub fn factor_u64(n: u64) -> Result<Factorization> {
    factor(&BigUint::from(n))
}

/// Product of the distinct primes dividing n.
pub fn radical(n: &BigUint) -> Result<BigUint> {
    let f = factor(n)?;
    if !f.is_complete() {
        return Err(Error::Invalid(format!(
            "factorization incomplete, cofactor {}",
            f.cofactor
        )));
    }
    Ok(f.radical())
}

/// Every prime factor of n is <= bound. Decided by trial division alone, so
/// no complete factorization is required.
pub fn is_smooth(n: &BigUint, bound: u64) -> bool {
    if bound < 2 {
        return n.is_one();
    }
    let mut m = n.clone();
    let mut d: u64 = 2;
    while d <= bound && !m.is_one() {
        while (&m % d).is_zero() {
            m /= d;
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    m.is_one()
}

/// p-adic valuation and coprime cofactor.
pub fn valuation(n: &BigUint, p: &BigUint) -> (u32, BigUint) {
    let mut v = 0u32;
    let mut m = n.clone();
    while !m.is_zero() && (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    (v, m)
}

/// Split N = N_d * N_d' where N_d collects the primes dividing d and
/// gcd(N_d, N_d') = 1 (the d-primary / prime-to-d decomposition of a cyclic
/// group order). Requires the complete factorization of d.
pub fn split_d_part(n: &BigUint, d: &BigUint) -> Result<(BigUint, BigUint)> {
    if d.is_zero() {
        return Err(Error::Invalid("d = 0 has no primary part".into()));
    }
    let df = factor(d)?;
    if !df.is_complete() {
        return Err(Error::Invalid("cannot factor d completely".into()));
    }
    let mut nd = BigUint::one();
    let mut rest = n.clone();
    for p in df.primes() {
        let (v, m) = valuation(&rest, p);
        nd *= p.pow(v);
        rest = m;
    }
    Ok((nd, rest))
}

/// Primes up to and including `bound`, by sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n as u64).filter(|&v| sieve[v as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact_pairs(n: u64) -> Vec<(u64, u32)> {
        factor_u64(n)
            .unwrap()
            .factors
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn factor_examples() {
        assert_eq!(fact_pairs(343), vec![(7, 3)]);
        assert_eq!(fact_pairs(1), vec![]);
        assert_eq!(fact_pairs(1008), vec![(2, 4), (3, 2), (7, 1)]);
        assert!(factor(&BigUint::zero()).is_err());
    }

    #[test]
    fn factor_recomposes() {
        for n in [1u64, 2, 12, 343, 1008, 9 * 25 * 343, 1_000_003, 67 * 71] {
            let f = factor_u64(n).unwrap();
            assert!(f.is_complete());
            assert_eq!(f.value(), BigUint::from(n));
        }
    }

    #[test]
    fn factor_needs_rho() {
        // two primes above the trial-division bound
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let f = factor(&(&p * &q)).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
        // a 64-bit semiprime
        let a = BigUint::from(4_294_967_311u64); // prime > 2^32
        let b = BigUint::from(4_294_967_357u64);
        let f = factor(&(&a * &b)).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.value(), &a * &b);
        assert_eq!(f.factors.len(), 2);
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&BigUint::one()).unwrap(), BigUint::one());
        let n = BigUint::from(9u32 * 25 * 343);
        assert_eq!(radical(&n).unwrap(), BigUint::from(105u32));
        assert_eq!(radical(&BigUint::from(12u32)).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn smoothness_examples() {
        assert!(is_smooth(&BigUint::from(343u32), 7));
        assert!(!is_smooth(&BigUint::from(343u32), 5));
        assert!(is_smooth(&BigUint::from(105u32), 7));
        assert!(is_smooth(&BigUint::one(), 1)); // only 1 is 1-smooth
        assert!(!is_smooth(&BigUint::from(2u32), 1));
    }

    #[test]
    fn d_part_split() {
        let n = BigUint::from(1008u32);
        let (nd, nperp) = split_d_part(&n, &BigUint::from(2u32)).unwrap();
        assert_eq!(nd, BigUint::from(16u32));
        assert_eq!(nperp, BigUint::from(63u32));
        let (nd, nperp) = split_d_part(&n, &BigUint::from(6u32)).unwrap();
        assert_eq!(nd, BigUint::from(16u32 * 9));
        assert_eq!(nperp, BigUint::from(7u32));
    }

    #[test]
    fn prime_sieve() {
        assert_eq!(primes_up_to(20), vec![2u64, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(1000).len(), 168);
    }

    #[test]
    fn big_primality() {
        // 2^89 - 1 is a Mersenne prime
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        assert!(is_prime(&m89));
        let composite = &m89 * BigUint::from(3u32);
        assert!(!is_prime(&composite));
    }
}
