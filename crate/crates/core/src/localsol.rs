//! Local solubility of zero-dimensional schemes over Q: Hensel search at
//! finite places, Sturm counting at the real place.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
#[cfg(test)]
use num_traits::Signed;

use crate::error::Error;
use crate::poly::IntPoly;
use crate::Result;

/// A squarefree integer polynomial together with its declared factorization
/// into irreducible factors over Q. The product is verified; irreducibility
/// of each factor is verified where cheap (degree <= 3: no rational root;
/// degree 2 additionally negative or non-square discriminant is implied).
#[derive(Clone, Debug)]
pub struct ZeroDimScheme {
    pub poly: IntPoly,
    pub factors: Vec<IntPoly>,
}

impl ZeroDimScheme {
    /// Build from declared factors; checks the product, squarefreeness, and
    /// (for factors of degree <= 3) irreducibility via rational roots.
    pub fn with_factors(factors: Vec<IntPoly>) -> Result<ZeroDimScheme> {
        if factors.is_empty() {
            return Err(Error::Invalid("no factors supplied".into()));
        }
        let mut poly = IntPoly::from_i64(&[1]);
        for f in &factors {
            let d = f.degree().ok_or(Error::ZeroPolynomial)?;
            if d == 0 {
                return Err(Error::Invalid("constant factor".into()));
            }
            if d <= 3 && d > 1 && !f.rational_roots().is_empty() {
                return Err(Error::Invalid(format!(
                    "declared factor {f} has a rational root, so it is not irreducible"
                )));
            }
            poly = poly.mul(f);
        }
        if !poly.is_squarefree_q()? {
            return Err(Error::NotSquarefree);
        }
        Ok(ZeroDimScheme { poly, factors })
    }

    /// Build from a bare polynomial: rational roots split off as linear
    /// factors, the cofactor stays as one (possibly reducible) block.
    pub fn from_poly(poly: IntPoly) -> Result<ZeroDimScheme> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !poly.is_squarefree_q()? {
            return Err(Error::NotSquarefree);
        }
        let mut factors: Vec<IntPoly> = vec![];
        let mut rest = poly.clone();
        for (num, den) in poly.rational_roots() {
            // factor (den x - num)
            let lin = IntPoly::from_coeffs(vec![-num.clone(), den.clone()]);
            factors.push(lin.clone());
            // divide out over Q: rest = rest / lin, exact up to content
            rest = exact_divide_q(&rest, &lin)?;
        }
        if rest.degree().map_or(false, |d| d >= 1) {
            factors.push(rest);
        }
        ZeroDimScheme::with_factors(factors)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree().unwrap()).collect()
    }
}

/// Divide a by b over Q assuming exactness, clearing denominators by the
/// content afterwards.
fn exact_divide_q(a: &IntPoly, b: &IntPoly) -> Result<IntPoly> {
    // pseudo-division then content strip
    let da = a.degree().ok_or(Error::ZeroPolynomial)?;
    let db = b.degree().ok_or(Error::ZeroPolynomial)?;
    if da < db {
        return Err(Error::Invalid("division underflow".into()));
    }
    let lc = b.lc();
    let mult = lc.pow((da - db + 1) as u32);
    let mut r = a.mul_scalar(&mult);
    let mut q = vec![BigInt::zero(); da - db + 1];
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let c = r.lc() / b.lc();
        q[dr - db] = c.clone();
        let mut sub = vec![BigInt::zero(); dr - db];
        sub.extend(b.0.iter().map(|x| x * &c));
        r = r.sub(&IntPoly::from_coeffs(sub));
    }
    if !r.is_zero() {
        return Err(Error::Invalid("division is not exact".into()));
    }
    let q = IntPoly::from_coeffs(q);
    let content = q.content();
    if content.is_zero() || content.is_one() {
        return Ok(q);
    }
    Ok(IntPoly::from_coeffs(q.0.iter().map(|c| c / &content).collect()))
}

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(u64),
    Real,
}

/// v_p of a nonzero BigInt; None encodes +infinity (the value is 0).
fn vp(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let (v, _) = crate::factorint::valuation(x.magnitude(), &BigUint::from(p));
    Some(v)
}

/// Does f have a root in Z_p? Breadth-first Hensel search: enumerate the
/// roots mod p^k, accept as soon as v_p(f(x)) > 2 v_p(f'(x)) (Newton's
/// criterion), stop at the depth bound 2 v_p(res(f, f')) + 1. Within that
/// depth the search always decides for squarefree f; running past it would
/// be guessing, so it errs as indeterminate instead.
fn has_zp_root(f: &IntPoly, p: u64, require_zero_start: bool) -> Result<bool> {
    let fp = f.derivative();
    let res = f.resultant(&fp);
    if res.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let depth_bound = 2 * vp(&res, p).unwrap() + 1;
    let pb = BigInt::from(p);

    let mut modulus = pb.clone();
    let mut candidates: Vec<BigInt> = (0..p)
        .filter(|&x| !require_zero_start || x == 0)
        .map(BigInt::from)
        .filter(|x| (f.eval(x) % &pb).is_zero())
        .collect();
    for _k in 1..=depth_bound {
        if candidates.is_empty() {
            return Ok(false);
        }
        for x in &candidates {
            let fv = f.eval(x);
            let dv = fp.eval(x);
            match (vp(&fv, p), vp(&dv, p)) {
                (None, _) => return Ok(true), // exact integer root
                (Some(av), Some(bv)) if av > 2 * bv => return Ok(true),
                _ => {}
            }
        }
        // lift to the next level
        let next_modulus = &modulus * &pb;
        let mut next = Vec::new();
        for x in &candidates {
            for t in 0..p {
                let cand = x + BigInt::from(t) * &modulus;
                if (f.eval(&cand) % &next_modulus).is_zero() {
                    next.push(cand);
                }
            }
            if next.len() > 100_000 {
                return Err(Error::Indeterminate(format!(
                    "candidate explosion in the Hensel search at p = {p}"
                )));
            }
        }
        candidates = next;
        modulus = next_modulus;
    }
    if candidates.is_empty() {
        return Ok(false);
    }
    Err(Error::Indeterminate(format!(
        "Hensel depth bound {depth_bound} exceeded at p = {p} with candidates remaining"
    )))
}

/// Does f have a root in Q_p (allowing |x| > 1 when p divides the leading
/// coefficient)?
pub fn has_qp_root(f: &IntPoly, p: u64) -> Result<bool> {
    if has_zp_root(f, p, false)? {
        return Ok(true);
    }
    if vp(&f.lc(), p).map_or(false, |v| v > 0) {
        // roots of absolute value > 1 correspond to small roots of the
        // reversed polynomial
        let rev = f.reverse();
        if rev.degree().map_or(false, |d| d >= 1) && has_zp_root(&rev, p, true)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Local solubility of the scheme at one place: some irreducible factor has
/// a root there. Indeterminate surfaces as an error, never as a claim.
pub fn local_solubility(scheme: &ZeroDimScheme, place: Place) -> Result<bool> {
    match place {
        Place::Real => {
            for f in &scheme.factors {
                if f.has_real_root()? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Place::Finite(p) => {
            if !crate::ff::is_prime_u64(p) {
                return Err(Error::NotPrime(p));
            }
            let mut pending: Option<Error> = None;
            for f in &scheme.factors {
                match has_qp_root(f, p) {
                    Ok(true) => return Ok(true),
                    Ok(false) => {}
                    Err(e @ Error::Indeterminate(_)) => pending = Some(e),
                    Err(e) => return Err(e),
                }
            }
            match pending {
                Some(e) => Err(e),
                None => Ok(false),
            }
        }
    }
}
