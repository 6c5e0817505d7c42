//! Mumford arithmetic on odd-degree hyperelliptic Jacobians: Cantor
//! composition and reduction, the embedding P -> [P - infinity], and the
//! degree-lowering transform that turns an even-degree model with a
//! rational Weierstrass point into an odd-degree one.
//!
//! Even-degree ("real") models get no explicit arithmetic here; order-only
//! computations go through L-polynomials, and explicit arithmetic is reached
//! by transforming to an odd model over an extension where f has a root.

use crate::error::Error;
use crate::ff::{FieldCtx, FieldElem};
use crate::group::Group;
use crate::poly::FPoly;
use crate::Result;

/// Reduced divisor class (u, v): u monic of degree <= g, deg v < deg u and
/// u | v^2 - f. The identity is (1, 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MumfordDivisor {
    pub u: FPoly,
    pub v: FPoly,
}

/// Jacobian of y^2 = f(x) for odd-degree squarefree f over odd
/// characteristic; carries the group law.
#[derive(Clone, Debug)]
pub struct JacobianGroup {
    pub ctx: FieldCtx,
    pub f: FPoly,
    pub genus: u32,
}

impl JacobianGroup {
    pub fn new(ctx: FieldCtx, f: FPoly) -> Result<JacobianGroup> {
        if ctx.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let d = f.degree().ok_or(Error::ZeroPolynomial)?;
        if d % 2 == 0 {
            return Err(Error::EvenDegreeModel);
        }
        if d < 3 {
            return Err(Error::Invalid("degree must be at least 3".into()));
        }
        if !f.is_squarefree(&ctx)? {
            return Err(Error::NotSquarefree);
        }
        let genus = ((d - 1) / 2) as u32;
        Ok(JacobianGroup { ctx, f, genus })
    }

    /// Skips the squarefree validation; only the degenerate-model probes in
    /// tests should want this.
    pub fn new_unchecked(ctx: FieldCtx, f: FPoly) -> JacobianGroup {
        let d = f.degree().expect("nonzero f");
        JacobianGroup {
            ctx,
            f,
            genus: ((d - 1) / 2) as u32,
        }
    }

    /// Check the Mumford conditions for (u, v).
    pub fn is_valid(&self, div: &MumfordDivisor) -> bool {
        let c = &self.ctx;
        let du = match div.u.degree() {
            None => return false,
            Some(d) => d,
        };
        if du > self.genus as usize {
            return false;
        }
        if div.u.lc().map(|l| *l != c.one()) == Some(true) {
            return false;
        }
        if let Some(dv) = div.v.degree() {
            if dv >= du {
                return false;
            }
        }
        let v2f = div.v.mul(&div.v, c).sub(&self.f, c);
        v2f.rem(&div.u, c).is_zero()
    }

    pub fn divisor(&self, u: FPoly, v: FPoly) -> Result<MumfordDivisor> {
        let d = MumfordDivisor { u, v };
        if !self.is_valid(&d) {
            return Err(Error::InvariantViolation(
                "Mumford conditions fail: u monic of degree <= g and u | v^2 - f".into(),
            ));
        }
        Ok(d)
    }

    /// iota(P) = [P - infinity] for an affine point P = (x0, y0) on the curve.
    pub fn embed_point(&self, x0: &FieldElem, y0: &FieldElem) -> Result<MumfordDivisor> {
        let c = &self.ctx;
        let fx = self.f.eval(x0, c);
        if c.square(y0) != fx {
            return Err(Error::Invalid("point is not on the curve".into()));
        }
        let u = FPoly::from_coeffs(c, vec![c.neg(x0), c.one()]);
        let v = FPoly::from_coeffs(c, vec![y0.clone()]);
        Ok(MumfordDivisor { u, v })
    }

    /// Cantor composition followed by reduction to deg u <= g.
    fn compose_reduce(&self, d1: &MumfordDivisor, d2: &MumfordDivisor) -> MumfordDivisor {
        let c = &self.ctx;
        let (u1, v1) = (&d1.u, &d1.v);
        let (u2, v2) = (&d2.u, &d2.v);

        // d = gcd(u1, u2, v1 + v2) with Bezout coefficients s1 u1 + s2 u2 + s3 (v1+v2) = d
        let (g1, e1, e2) = u1.xgcd(u2, c);
        let vsum = v1.add(v2, c);
        let (d, c1, c2) = g1.xgcd(&vsum, c);
        let s1 = c1.mul(&e1, c);
        let s2 = c1.mul(&e2, c);
        let s3 = c2;

        // u = u1 u2 / d^2
        let u1u2 = u1.mul(u2, c);
        let d2sq = d.mul(&d, c);
        let (mut u, rem) = u1u2.divrem(&d2sq, c);
        debug_assert!(rem.is_zero(), "d^2 must divide u1 u2");

        // v = (s1 u1 v2 + s2 u2 v1 + s3 (v1 v2 + f)) / d  mod u
        let t1 = s1.mul(u1, c).mul(v2, c);
        let t2 = s2.mul(u2, c).mul(v1, c);
        let t3 = s3.mul(&v1.mul(v2, c).add(&self.f, c), c);
        let num = t1.add(&t2, c).add(&t3, c);
        let (vq, vrem) = num.divrem(&d, c);
        debug_assert!(vrem.is_zero(), "d must divide the v numerator");
        let mut v = vq.rem(&u, c);

        // reduction: replace (u, v) by ((f - v^2)/u made monic, -v mod u')
        while u.degree().map_or(false, |du| du > self.genus as usize) {
            let fv2 = self.f.sub(&v.mul(&v, c), c);
            let (unew, rem) = fv2.divrem(&u, c);
            debug_assert!(rem.is_zero(), "u must divide f - v^2");
            let unew = unew.monic(c);
            let vnew = v.neg(c).rem(&unew, c);
            u = unew;
            v = vnew;
        }
        MumfordDivisor {
            u: u.monic(c),
            v,
        }
    }
}

impl Group for JacobianGroup {
    type Elem = MumfordDivisor;

    fn identity(&self) -> MumfordDivisor {
        MumfordDivisor {
            u: FPoly::from_ints(&self.ctx, &[1]),
            v: FPoly::zero(),
        }
    }

    fn add(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
        self.compose_reduce(a, b)
    }

    fn neg(&self, a: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor {
            u: a.u.clone(),
            v: a.v.neg(&self.ctx).rem(&a.u, &self.ctx),
        }
    }
}

/// cantor_add with the spec's input contract: both divisors must satisfy the
/// Mumford invariants for f.
pub fn cantor_add(
    jac: &JacobianGroup,
    d1: &MumfordDivisor,
    d2: &MumfordDivisor,
) -> Result<MumfordDivisor> {
    if !jac.is_valid(d1) || !jac.is_valid(d2) {
        return Err(Error::InvariantViolation(
            "input divisor violates the Mumford conditions".into(),
        ));
    }
    Ok(jac.add(d1, d2))
}

// ---------------------------------------------------------------------------
// even-degree -> odd-degree transform
// ---------------------------------------------------------------------------

/// The change of model f~(x) = x^{2g+2} f(r + 1/x) for a root r of the
/// even-degree f, together with the induced point correspondence.
pub struct OddTransform {
    pub r: FieldElem,
    pub genus: u32,
    pub f_tilde: FPoly,
}

/// Turn an even-degree squarefree model with a rational root r of f into an
/// isomorphic odd-degree model of the same genus.
pub fn odd_degree_transform(f: &FPoly, r: &FieldElem, ctx: &FieldCtx) -> Result<OddTransform> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d % 2 == 1 {
        return Err(Error::Invalid(
            "input already has odd degree; nothing to transform".into(),
        ));
    }
    if !ctx.is_zero(&f.eval(r, ctx)) {
        return Err(Error::Invalid("r is not a root of f".into()));
    }
    if !f.is_squarefree(ctx)? {
        return Err(Error::NotSquarefree);
    }
    // f~(x) = sum_i c_i (r x + 1)^i x^{d - i}
    let rx1 = FPoly::from_coeffs(ctx, vec![ctx.one(), r.clone()]);
    let mut acc = FPoly::zero();
    let mut rx1_pow = FPoly::from_ints(ctx, &[1]);
    for i in 0..=d {
        let ci = f.coeff(i, ctx);
        if !ctx.is_zero(&ci) {
            // c_i (rx+1)^i x^{d-i}
            let mut term = rx1_pow.mul_elem(&ci, ctx);
            let mut shifted = vec![ctx.zero(); d - i];
            shifted.extend(term.0.drain(..));
            acc = acc.add(&FPoly::from_coeffs(ctx, shifted), ctx);
        }
        if i < d {
            rx1_pow = rx1_pow.mul(&rx1, ctx);
        }
    }
    if acc.degree() != Some(d - 1) {
        return Err(Error::InvariantViolation(
            "transformed polynomial has the wrong degree (is f squarefree?)".into(),
        ));
    }
    if !acc.is_squarefree(ctx)? {
        return Err(Error::InvariantViolation(
            "transformed polynomial is not squarefree".into(),
        ));
    }
    Ok(OddTransform {
        r: r.clone(),
        genus: ((d - 2) / 2) as u32,
        f_tilde: acc,
    })
}

impl OddTransform {
    /// Affine point (x, y) of y^2 = f with x != r maps to
    /// (1/(x - r), y / (x - r)^{g+1}); the point (r, 0) goes to infinity.
    pub fn map_affine(
        &self,
        x: &FieldElem,
        y: &FieldElem,
        ctx: &FieldCtx,
    ) -> Option<(FieldElem, FieldElem)> {
        let diff = ctx.sub(x, &self.r);
        if ctx.is_zero(&diff) {
            return None;
        }
        let inv = ctx.inv(&diff);
        let xg = ctx.pow_u64(&inv, self.genus as u64 + 1);
        Some((inv, ctx.mul(y, &xg)))
    }

    /// Inverse correspondence for points with nonzero first coordinate.
    pub fn unmap_affine(
        &self,
        x: &FieldElem,
        y: &FieldElem,
        ctx: &FieldCtx,
    ) -> Option<(FieldElem, FieldElem)> {
        if ctx.is_zero(x) {
            return None;
        }
        let inv = ctx.inv(x);
        let orig_x = ctx.add(&self.r, &inv);
        let xg = ctx.pow_u64(&inv, self.genus as u64 + 1);
        Some((orig_x, ctx.mul(y, &xg)))
    }
}
