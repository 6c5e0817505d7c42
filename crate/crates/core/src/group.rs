//! Generic finite abelian group operations: scalar multiples, exact element
//! orders, and the d-primary / prime-to-d splitting projections.
//!
//! Carriers (cyclic groups, elliptic curves, Jacobians) implement [`Group`];
//! the ambient order always comes from outside (an L-polynomial or an
//! explicit modulus), never from structure probing.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::factorint::{factor, split_d_part, valuation, Factorization};
use crate::Result;

/// An abelian group whose elements are plain values; the group object holds
/// whatever context the law needs.
pub trait Group {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn identity(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// m-fold sum by double-and-add; negative m goes through the inverse.
pub fn scalar_mul<G: Group>(g: &G, m: &BigInt, x: &G::Elem) -> G::Elem {
    if m.is_negative() {
        let neg = g.neg(x);
        return scalar_mul(g, &(-m), &neg);
    }
    let mut acc = g.identity();
    let mut base = x.clone();
    let mut e = m.magnitude().clone();
    while !e.is_zero() {
        if e.bit(0) {
            acc = g.add(&acc, &base);
        }
        base = g.add(&base, &base);
        e >>= 1;
    }
    acc
}

pub fn scalar_mul_u64<G: Group>(g: &G, m: u64, x: &G::Elem) -> G::Elem {
    scalar_mul(g, &BigInt::from(m), x)
}

/// Exact order of x given a factored multiple N of it (N x = 0 is checked).
pub fn element_order<G: Group>(g: &G, x: &G::Elem, n_fact: &Factorization) -> Result<BigUint> {
    if !n_fact.is_complete() {
        return Err(Error::Invalid("ambient order not fully factored".into()));
    }
    let n = n_fact.value();
    if !g.is_identity(&scalar_mul(g, &BigInt::from(n.clone()), x)) {
        return Err(Error::InvariantViolation(
            "N x != 0: wrong ambient group order".into(),
        ));
    }
    let mut order = n;
    for (p, e) in &n_fact.factors {
        for _ in 0..*e {
            let candidate = &order / p;
            if g.is_identity(&scalar_mul(g, &BigInt::from(candidate.clone()), x)) {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Does x have order coprime to ell? Tests (N / ell^{v_ell(N)}) x = 0.
pub fn prime_to_ell_test<G: Group>(g: &G, x: &G::Elem, n: &BigUint, ell: u64) -> Result<bool> {
    let full = scalar_mul(g, &BigInt::from(n.clone()), x);
    if !g.is_identity(&full) {
        return Err(Error::InvariantViolation(
            "N x != 0: wrong ambient group order".into(),
        ));
    }
    let (_, m) = valuation(n, &BigUint::from(ell));
    Ok(g.is_identity(&scalar_mul(g, &BigInt::from(m), x)))
}

/// Order data for the d-primary / prime-to-d splitting of a group of order
/// N: N = N_d * N_perp with every prime of N_d dividing d and
/// gcd(N_d, N_perp) = 1.
#[derive(Clone, Debug)]
pub struct AmbientGroupInfo {
    pub order: BigUint,
    pub order_fact: Factorization,
    pub d: BigUint,
    pub d_part: BigUint,
    pub perp_part: BigUint,
}

impl AmbientGroupInfo {
    pub fn new(order: BigUint, d: &BigUint) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::Invalid("d = 0 has no primary splitting".into()));
        }
        let order_fact = factor(&order)?;
        if !order_fact.is_complete() {
            return Err(Error::Invalid("cannot factor the group order".into()));
        }
        let (d_part, perp_part) = split_d_part(&order, d)?;
        Ok(AmbientGroupInfo {
            order,
            order_fact,
            d: d.clone(),
            d_part,
            perp_part,
        })
    }

    /// The CRT idempotent e with e = 1 mod N_d and e = 0 mod N_perp.
    pub fn idempotent(&self) -> BigUint {
        if self.d_part.is_one() {
            return BigUint::zero();
        }
        if self.perp_part.is_one() {
            return BigUint::one();
        }
        let a = BigInt::from(self.perp_part.clone());
        let m = BigInt::from(self.d_part.clone());
        let ext = a.extended_gcd(&m);
        debug_assert!(ext.gcd.is_one());
        let inv = ext.x.mod_floor(&m);
        (inv * a).magnitude().clone()
    }
}

/// Split x = x_d + x_perp into its d-primary and prime-to-d components via
/// the CRT idempotent multipliers. order(x_d) | N_d and order(x_perp) | N_perp.
pub fn split_projection<G: Group>(
    g: &G,
    x: &G::Elem,
    info: &AmbientGroupInfo,
) -> (G::Elem, G::Elem) {
    let e = info.idempotent();
    let x_d = scalar_mul(g, &BigInt::from(e.clone()), x);
    let e_perp = (&info.order + BigUint::one() - e) % &info.order;
    let x_perp = scalar_mul(g, &BigInt::from(e_perp), x);
    (x_d, x_perp)
}

/// Z/N with elements represented by canonical residues.
#[derive(Clone, Debug)]
pub struct CyclicGroup {
    pub modulus: BigUint,
}

impl CyclicGroup {
    pub fn new(modulus: u64) -> CyclicGroup {
        CyclicGroup {
            modulus: BigUint::from(modulus),
        }
    }

    pub fn elem(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.modulus
    }
}

impl Group for CyclicGroup {
    type Elem = BigUint;

    fn identity(&self) -> BigUint {
        BigUint::zero()
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.modulus
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }
}

/// Shared check bundle used by the property suites: reconstruction, purity
/// and idempotence of the splitting at one element.
pub fn check_split_properties<G: Group>(
    g: &G,
    x: &G::Elem,
    info: &AmbientGroupInfo,
) -> Result<()> {
    let (x_d, x_perp) = split_projection(g, x, info);
    if g.add(&x_d, &x_perp) != *x {
        return Err(Error::InvariantViolation("x_d + x_perp != x".into()));
    }
    if !g.is_identity(&scalar_mul(g, &BigInt::from(info.d_part.clone()), &x_d)) {
        return Err(Error::InvariantViolation("N_d x_d != 0".into()));
    }
    if !g.is_identity(&scalar_mul(g, &BigInt::from(info.perp_part.clone()), &x_perp)) {
        return Err(Error::InvariantViolation("N_perp x_perp != 0".into()));
    }
    let (again_d, again_perp) = split_projection(g, &x_d, info);
    if again_d != x_d || !g.is_identity(&again_perp) {
        return Err(Error::InvariantViolation("splitting is not idempotent".into()));
    }
    Ok(())
}
