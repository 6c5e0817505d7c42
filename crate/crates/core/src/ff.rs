//! Prime and extension finite fields F_{p^n} with p < 2^63.
//!
//! A [`FieldCtx`] owns the modulus data; elements are plain coefficient
//! vectors operated on through the context (fields are cheap to share,
//! elements carry no back-reference). All values are immutable once built.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::Result;

/// a + b mod m, all < 2^63.
#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

/// a - b mod m.
#[inline]
pub fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// a * b mod m via u128 widening.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m.
pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Modular inverse by extended Euclid; `a` must be coprime to `m`.
pub fn invmod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "invmod of non-unit");
    t0.rem_euclid(m as i128) as u64
}

/// Deterministic Miller-Rabin, valid for all n < 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol (a|p) in {-1, 0, +1}, computed by modular exponentiation.
pub fn legendre(a: &num_bigint::BigInt, p: u64) -> Result<i32> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let pm = num_bigint::BigInt::from(p);
    let r = ((a % &pm) + &pm) % &pm;
    let r = u64::try_from(r.magnitude().clone()).expect("residue fits u64");
    if r == 0 {
        return Ok(0);
    }
    let e = powmod(r, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Square root mod an odd prime by Tonelli-Shanks. Returns the root with the
/// smaller canonical representative, or None for non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        powmod(a, (p + 1) / 4, p)
    } else {
        // general Tonelli-Shanks
        let mut q = p - 1;
        let mut s = 0u32;
        while q & 1 == 0 {
            q >>= 1;
            s += 1;
        }
        let mut z = 2u64;
        while powmod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = powmod(z, q, p);
        let mut t = powmod(a, q, p);
        let mut r = powmod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = mulmod(tt, tt, p);
                i += 1;
            }
            let b = powmod(c, 1 << (m - i - 1), p);
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
        r
    };
    Some(r.min(p - r))
}

// ---------------------------------------------------------------------------
// raw polynomial helpers over F_p (used while constructing extension moduli)
// ---------------------------------------------------------------------------

fn raw_trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

fn raw_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    raw_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = invmod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (j, &mj) in m.iter().enumerate() {
            r[k + j] = submod(r[k + j], mulmod(c, mj, p), p);
        }
        raw_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn raw_mulrem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = addmod(prod[i + j], mulmod(ai, bj, p), p);
        }
    }
    raw_rem(&prod, m, p)
}

fn raw_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    raw_trim(&mut a);
    raw_trim(&mut b);
    while !b.is_empty() {
        let r = raw_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^(p^i) mod m for i = 1..=k, via iterated Frobenius.
fn frobenius_powers(m: &[u64], p: u64, k: usize) -> Vec<Vec<u64>> {
    let x = vec![0u64, 1];
    let mut acc = Vec::with_capacity(k);
    let mut cur = x.clone();
    for _ in 0..k {
        // cur^p mod m by square-and-multiply on the exponent p
        let mut result = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = raw_mulrem(&result, &base, m, p);
            }
            base = raw_mulrem(&base, &base, m, p);
            e >>= 1;
        }
        cur = result;
        acc.push(cur.clone());
    }
    acc
}

/// Is the monic polynomial `m` (degree n >= 1) irreducible over F_p?
/// Checks gcd(x^{p^i} - x, m) = 1 for every i <= n/2.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    if n == 1 {
        return true;
    }
    let frobs = frobenius_powers(m, p, n / 2);
    for xpi in frobs {
        // x^{p^i} - x
        let mut diff = xpi;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = submod(diff[1], 1, p);
        raw_trim(&mut diff);
        if diff.is_empty() {
            return false; // m divides x^{p^i} - x entirely
        }
        let g = raw_gcd(m, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// field context
// ---------------------------------------------------------------------------

/// An element of F_{p^n}: coefficients of the residue class representative,
/// ascending degree, always exactly `n` entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem(pub Vec<u64>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    /// Lexicographic comparison of representatives (constant coefficient
    /// most significant), the tie-break order used for embeddings.
    pub fn cmp_lex(&self, other: &FieldElem) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

/// Context for F_{p^n}: prime p, extension degree n, and a monic irreducible
/// modulus of degree n (the polynomial `x` itself when n = 1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldCtx {
    p: u64,
    n: usize,
    /// monic, ascending coefficients, length n + 1
    modulus: Vec<u64>,
}

impl FieldCtx {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= (1 << 63) {
            return Err(Error::Invalid(format!("characteristic {p} >= 2^63")));
        }
        Ok(FieldCtx {
            p,
            n: 1,
            modulus: vec![0, 1],
        })
    }

    /// F_{p^n} with the lexicographically smallest monic irreducible modulus.
    /// Candidates are enumerated with the constant coefficient most
    /// significant, so e.g. over F_3 the quadratic modulus is x^2 + 1.
    pub fn extension(p: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= (1 << 63) {
            return Err(Error::Invalid(format!("characteristic {p} >= 2^63")));
        }
        if n == 1 {
            return Self::prime(p);
        }
        let total = (p as u128).checked_pow(n as u32).ok_or(Error::Invalid(
            "extension field too large to search for a modulus".into(),
        ))?;
        let mut k = 0u128;
        while k < total {
            // digits of k, most significant digit first = c0
            let mut digits = vec![0u64; n];
            let mut t = k;
            for d in digits.iter_mut().rev() {
                *d = (t % p as u128) as u64;
                t /= p as u128;
            }
            let mut m = digits;
            m.push(1);
            if is_irreducible(&m, p) {
                return Ok(FieldCtx { p, n, modulus: m });
            }
            k += 1;
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field cardinality q = p^n.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.p).pow(self.n as u32)
    }

    /// Cardinality as u64, if it fits.
    pub fn cardinality_u64(&self) -> Option<u64> {
        let mut q: u64 = 1;
        for _ in 0..self.n {
            q = q.checked_mul(self.p)?;
        }
        Some(q)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.n])
    }

    pub fn one(&self) -> FieldElem {
        let mut c = vec![0; self.n];
        c[0] = 1;
        FieldElem(c)
    }

    /// The class of the generator x (equals `from_u64(p)`'s... no: the root
    /// of the modulus; for n = 1 this is the element 0's successor pattern
    /// and is only meaningful for n >= 2).
    pub fn generator(&self) -> FieldElem {
        if self.n == 1 {
            return self.zero();
        }
        let mut c = vec![0; self.n];
        c[1] = 1;
        FieldElem(c)
    }

    /// Embed an integer (the prime subfield).
    pub fn from_i64(&self, v: i64) -> FieldElem {
        let r = v.rem_euclid(self.p as i64) as u64;
        let mut c = vec![0; self.n];
        c[0] = r;
        FieldElem(c)
    }

    pub fn from_u64(&self, v: u64) -> FieldElem {
        let mut c = vec![0; self.n];
        c[0] = v % self.p;
        FieldElem(c)
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| addmod(x, y, self.p))
                .collect(),
        )
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| submod(x, y, self.p))
                .collect(),
        )
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect())
    }

    pub fn mul_scalar(&self, a: &FieldElem, s: u64) -> FieldElem {
        let s = s % self.p;
        FieldElem(a.0.iter().map(|&x| mulmod(x, s, self.p)).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        if self.n == 1 {
            return FieldElem(vec![mulmod(a.0[0], b.0[0], self.p)]);
        }
        let mut prod = vec![0u64; 2 * self.n - 1];
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                prod[i + j] = addmod(prod[i + j], mulmod(ai, bj, self.p), self.p);
            }
        }
        self.reduce_raw(prod)
    }

    /// Reduce a coefficient buffer of length <= 2n-1 by the monic modulus.
    fn reduce_raw(&self, mut buf: Vec<u64>) -> FieldElem {
        for i in (self.n..buf.len()).rev() {
            let c = buf[i];
            if c != 0 {
                buf[i] = 0;
                for j in 0..self.n {
                    let t = mulmod(c, self.modulus[j], self.p);
                    buf[i - self.n + j] = submod(buf[i - self.n + j], t, self.p);
                }
            }
        }
        buf.truncate(self.n);
        buf.resize(self.n, 0);
        FieldElem(buf)
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// a^e for a u64 exponent.
    pub fn pow_u64(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// a^e for an arbitrary-precision exponent.
    pub fn pow(&self, a: &FieldElem, e: &BigUint) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e.clone();
        while !e.is_zero() {
            if e.bit(0) {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: &FieldElem) -> FieldElem {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.n == 1 {
            return FieldElem(vec![invmod(a.0[0], self.p)]);
        }
        let e = self.cardinality() - BigUint::from(2u32);
        self.pow(a, &e)
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.mul(a, &self.inv(b))
    }

    /// Euler-criterion square test; rejects characteristic 2.
    pub fn is_square(&self, a: &FieldElem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if self.is_zero(a) {
            return Ok(true);
        }
        let e = (self.cardinality() - BigUint::one()) >> 1;
        Ok(self.pow(a, &e) == self.one())
    }

    /// Canonical index of an element: sum of c_i * p^i.
    pub fn index_of(&self, a: &FieldElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.0.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    pub fn elem_from_index(&self, mut idx: u64) -> FieldElem {
        let mut c = vec![0; self.n];
        for ci in c.iter_mut() {
            *ci = idx % self.p;
            idx /= self.p;
        }
        FieldElem(c)
    }

    /// In-place successor in index order; returns false on wraparound.
    pub fn next_elem(&self, a: &mut FieldElem) -> bool {
        for c in a.0.iter_mut() {
            *c += 1;
            if *c < self.p {
                return true;
            }
            *c = 0;
        }
        false
    }

    /// Iterate all field elements in index order.
    pub fn iter_elems(&self) -> FieldIter<'_> {
        FieldIter {
            ctx: self,
            cur: Some(self.zero()),
        }
    }

    /// The Frobenius x -> x^p.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow_u64(a, self.p)
    }
}

pub struct FieldIter<'a> {
    ctx: &'a FieldCtx,
    cur: Option<FieldElem>,
}

impl<'a> Iterator for FieldIter<'a> {
    type Item = FieldElem;

    fn next(&mut self) -> Option<FieldElem> {
        let out = self.cur.clone()?;
        let mut nxt = out.clone();
        if self.ctx.next_elem(&mut nxt) {
            self.cur = Some(nxt);
        } else {
            self.cur = None;
        }
        Some(out)
    }
}

/// F_p-linear embedding of F_{p^m} into F_{p^M} (m | M), fixed by sending the
/// small generator to the lexicographically smallest root of the small
/// modulus in the big field.
pub struct Embedding {
    /// powers rho^0 .. rho^{m-1} of the chosen root, as big-field elements
    powers: Vec<FieldElem>,
}

impl Embedding {
    pub fn new(small: &FieldCtx, big: &FieldCtx) -> Result<Embedding> {
        if small.p != big.p || big.n % small.n != 0 {
            return Err(Error::Invalid(
                "no embedding: degrees not nested or characteristics differ".into(),
            ));
        }
        if small.n == 1 {
            return Ok(Embedding {
                powers: vec![big.one()],
            });
        }
        // evaluate the small modulus at every big-field element
        let mut best: Option<FieldElem> = None;
        for x in big.iter_elems() {
            let mut acc = big.zero();
            for &c in small.modulus.iter().rev() {
                acc = big.mul(&acc, &x);
                if c != 0 {
                    acc = big.add(&acc, &big.from_u64(c));
                }
            }
            if big.is_zero(&acc) {
                best = match best {
                    None => Some(x),
                    Some(b) => {
                        if x.cmp_lex(&b) == std::cmp::Ordering::Less {
                            Some(x)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
        }
        let rho = best.ok_or_else(|| {
            Error::Invalid("small modulus has no root in the big field".into())
        })?;
        let mut powers = Vec::with_capacity(small.n);
        let mut cur = big.one();
        for _ in 0..small.n {
            powers.push(cur.clone());
            cur = big.mul(&cur, &rho);
        }
        Ok(Embedding { powers })
    }

    pub fn map(&self, a: &FieldElem, big: &FieldCtx) -> FieldElem {
        let mut acc = big.zero();
        for (c, pw) in a.0.iter().zip(&self.powers) {
            if *c != 0 {
                acc = big.add(&acc, &big.mul_scalar(pw, *c));
            }
        }
        acc
    }
}
