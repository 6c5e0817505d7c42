//! Elliptic curve group law over finite fields (odd characteristic), point
//! enumeration, and the invariant-factor structure E(F_q) = Z/n1 x Z/n2.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::{count_points, CurveModel, EllipticModel};
use crate::error::Error;
use crate::factorint::factor;
use crate::ff::{sqrt_mod_prime, FieldCtx, FieldElem};
use crate::group::{element_order, scalar_mul, Group};
use crate::poly::FPoly;
use crate::Result;

/// A point on a long Weierstrass model, or the point at infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EcPoint {
    Infinity,
    Affine(FieldElem, FieldElem),
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a finite field of odd
/// characteristic.
#[derive(Clone, Debug)]
pub struct EllipticGroup {
    pub ctx: FieldCtx,
    pub a: [FieldElem; 5],
}

impl EllipticGroup {
    pub fn new(model: &EllipticModel) -> Result<EllipticGroup> {
        let ctx = model.base.ctx()?;
        if ctx.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let p = BigInt::from(ctx.characteristic());
        if (model.discriminant() % &p) == BigInt::from(0) {
            return Err(Error::SingularModel(format!(
                "discriminant vanishes over F_{}",
                ctx.characteristic()
            )));
        }
        let a = [
            reduce_big(&model.a[0], &ctx),
            reduce_big(&model.a[1], &ctx),
            reduce_big(&model.a[2], &ctx),
            reduce_big(&model.a[3], &ctx),
            reduce_big(&model.a[4], &ctx),
        ];
        Ok(EllipticGroup { ctx, a })
    }

    /// Right side of the defining equation, as a function of x.
    fn rhs(&self, x: &FieldElem) -> FieldElem {
        let c = &self.ctx;
        let x2 = c.square(x);
        let x3 = c.mul(&x2, x);
        let mut acc = x3;
        acc = c.add(&acc, &c.mul(&self.a[1], &x2));
        acc = c.add(&acc, &c.mul(&self.a[3], x));
        c.add(&acc, &self.a[4])
    }

    /// a1 x + a3.
    fn hline(&self, x: &FieldElem) -> FieldElem {
        self.ctx.add(&self.ctx.mul(&self.a[0], x), &self.a[2])
    }

    pub fn is_on_curve(&self, pt: &EcPoint) -> bool {
        match pt {
            EcPoint::Infinity => true,
            EcPoint::Affine(x, y) => {
                let c = &self.ctx;
                let lhs = c.add(&c.square(y), &c.mul(&self.hline(x), y));
                lhs == self.rhs(x)
            }
        }
    }

    pub fn point(&self, x: FieldElem, y: FieldElem) -> Result<EcPoint> {
        let pt = EcPoint::Affine(x, y);
        if !self.is_on_curve(&pt) {
            return Err(Error::Invalid("point is not on the curve".into()));
        }
        Ok(pt)
    }

    pub fn point_i64(&self, x: i64, y: i64) -> Result<EcPoint> {
        self.point(self.ctx.from_i64(x), self.ctx.from_i64(y))
    }

    /// All points, in (index(x), index(y)) order with infinity first.
    /// Restricted to prime fields, where square roots come from
    /// Tonelli-Shanks; this is what the exact structure mode enumerates.
    pub fn points(&self, budget: u64) -> Result<Vec<EcPoint>> {
        let c = &self.ctx;
        let p = c.characteristic();
        if c.degree() != 1 {
            return Err(Error::Invalid(
                "point enumeration is implemented over prime fields".into(),
            ));
        }
        if p > budget {
            return Err(Error::BudgetExceeded {
                needed: p as u128,
                budget,
            });
        }
        let inv2 = c.inv(&c.from_u64(2));
        let mut pts = vec![EcPoint::Infinity];
        for xi in 0..p {
            let x = c.from_u64(xi);
            // complete the square: (2y + h)^2 = h^2 + 4 rhs
            let h = self.hline(&x);
            let disc = c.add(&c.square(&h), &c.mul_scalar(&self.rhs(&x), 4));
            let d = disc.coeffs()[0];
            match sqrt_mod_prime(d, p) {
                None => continue,
                Some(r) => {
                    let mut ys: Vec<u64> = if r == 0 { vec![0] } else { vec![r, p - r] };
                    ys.sort_unstable();
                    let mut found: Vec<FieldElem> = ys
                        .into_iter()
                        .map(|t| {
                            // y = (t - h) / 2
                            let tt = c.from_u64(t);
                            c.mul(&c.sub(&tt, &h), &inv2)
                        })
                        .collect();
                    found.sort_by(|a, b| c.index_of(a).cmp(&c.index_of(b)));
                    for y in found {
                        pts.push(EcPoint::Affine(x.clone(), y));
                    }
                }
            }
        }
        Ok(pts)
    }
}

fn reduce_big(v: &BigInt, ctx: &FieldCtx) -> FieldElem {
    let p = BigInt::from(ctx.characteristic());
    let r = ((v % &p) + &p) % &p;
    ctx.from_u64(r.to_u64().unwrap())
}

impl Group for EllipticGroup {
    type Elem = EcPoint;

    fn identity(&self) -> EcPoint {
        EcPoint::Infinity
    }

    fn neg(&self, a: &EcPoint) -> EcPoint {
        match a {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine(x, y) => {
                let c = &self.ctx;
                // -(x, y) = (x, -y - a1 x - a3)
                let ny = c.neg(&c.add(y, &self.hline(x)));
                EcPoint::Affine(x.clone(), ny)
            }
        }
    }

    fn add(&self, a: &EcPoint, b: &EcPoint) -> EcPoint {
        let c = &self.ctx;
        let (x1, y1, x2, y2) = match (a, b) {
            (EcPoint::Infinity, _) => return b.clone(),
            (_, EcPoint::Infinity) => return a.clone(),
            (EcPoint::Affine(x1, y1), EcPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if *b == self.neg(a) {
                return EcPoint::Infinity;
            }
            // tangent: (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3)
            let num = {
                let mut t = c.mul_scalar(&c.square(x1), 3);
                t = c.add(&t, &c.mul_scalar(&c.mul(&self.a[1], x1), 2));
                t = c.add(&t, &self.a[3]);
                c.sub(&t, &c.mul(&self.a[0], y1))
            };
            let den = c.add(&c.mul_scalar(y1, 2), &self.hline(x1));
            c.div(&num, &den)
        } else {
            c.div(&c.sub(y2, y1), &c.sub(x2, x1))
        };
        let nu = c.sub(y1, &c.mul(&lambda, x1));
        // x3 = lambda^2 + a1 lambda - a2 - x1 - x2
        let mut x3 = c.add(&c.square(&lambda), &c.mul(&self.a[0], &lambda));
        x3 = c.sub(&x3, &self.a[1]);
        x3 = c.sub(&x3, x1);
        x3 = c.sub(&x3, x2);
        // y3 = -(lambda + a1) x3 - nu - a3
        let mut y3 = c.neg(&c.mul(&c.add(&lambda, &self.a[0]), &x3));
        y3 = c.sub(&y3, &nu);
        y3 = c.sub(&y3, &self.a[2]);
        EcPoint::Affine(x3, y3)
    }
}

/// Invariant factors of E(F_q) = Z/n1 x Z/n2 with n1 | n2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure {
    pub n1: BigUint,
    pub n2: BigUint,
    /// true when the exponent came from sampled points only
    pub heuristic: bool,
}

/// How to determine the group exponent.
#[derive(Clone, Copy, Debug)]
pub enum StructureMode {
    /// lcm of the orders of every point (exact); enumeration budget applies
    Exact { budget: u64 },
    /// lcm over at least 40 seeded random points, flagged heuristic
    Sampling { trials: u32, seed: u64 },
}

/// Compute E(F_p) = Z/n1 x Z/n2. The exponent n2 is the lcm of point
/// orders; exact mode folds in every point (with an early multiple-of-the-
/// current-exponent skip, which cannot change the lcm).
pub fn elliptic_structure(model: &EllipticModel, mode: StructureMode) -> Result<GroupStructure> {
    let g = EllipticGroup::new(model)?;
    let budget = match mode {
        StructureMode::Exact { budget } => budget,
        StructureMode::Sampling { .. } => crate::DEFAULT_BUDGET,
    };
    let n = count_points(&CurveModel::Elliptic(model.clone()), budget)?;
    let n_fact = factor(&BigUint::from(n))?;
    let mut exponent = BigUint::one();
    match mode {
        StructureMode::Exact { budget } => {
            for pt in g.points(budget)? {
                if g.is_identity(&scalar_mul(&g, &BigInt::from(exponent.clone()), &pt)) {
                    continue; // order divides the running exponent
                }
                let o = element_order(&g, &pt, &n_fact)?;
                exponent = num_integer::lcm(exponent, o);
            }
        }
        StructureMode::Sampling { trials, seed } => {
            let trials = trials.max(40);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = g.ctx.characteristic();
            let mut sampled = 0u32;
            while sampled < trials {
                let xi = rng.random_range(0..p);
                let x = g.ctx.from_u64(xi);
                let h = g.hline(&x);
                let disc = g
                    .ctx
                    .add(&g.ctx.square(&h), &g.ctx.mul_scalar(&g.rhs(&x), 4));
                if let Some(r) = sqrt_mod_prime(disc.coeffs()[0], p) {
                    let t = if rng.random_range(0..2u32) == 0 { r } else { (p - r) % p };
                    let inv2 = g.ctx.inv(&g.ctx.from_u64(2));
                    let y = g.ctx.mul(&g.ctx.sub(&g.ctx.from_u64(t), &h), &inv2);
                    let pt = EcPoint::Affine(x, y);
                    debug_assert!(g.is_on_curve(&pt));
                    let o = element_order(&g, &pt, &n_fact)?;
                    exponent = num_integer::lcm(exponent, o);
                    sampled += 1;
                }
            }
        }
    }
    let n1 = BigUint::from(n) / &exponent;
    Ok(GroupStructure {
        n1,
        n2: exponent,
        heuristic: matches!(mode, StructureMode::Sampling { .. }),
    })
}

/// Group object for a genus-1 model y^2 = cubic over a finite field. The
/// substitution (x, y) -> (ax, ay) identifies its points with those of
/// Y^2 = X^3 + b X^2 + (ac) X + a^2 d.
pub fn elliptic_group_of_cubic(f: &FPoly, ctx: &FieldCtx) -> Result<EllipticGroup> {
    if f.degree() != Some(3) {
        return Err(Error::Invalid("expected a cubic".into()));
    }
    let c = ctx;
    let a3 = f.coeff(3, c);
    let b = f.coeff(2, c);
    let cc = f.coeff(1, c);
    let d = f.coeff(0, c);
    Ok(EllipticGroup {
        ctx: ctx.clone(),
        a: [
            c.zero(),
            b,
            c.zero(),
            c.mul(&a3, &cc),
            c.mul(&c.square(&a3), &d),
        ],
    })
}
