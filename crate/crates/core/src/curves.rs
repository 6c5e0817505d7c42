//! Curve models over Q and over finite fields: reduction at primes,
//! exhaustive point counting, L-polynomials and Jacobian orders.
//!
//! Point counting walks every x in the field, testing the quadratic
//! character of f(x) against a precomputed square table; polynomial values
//! along each row are advanced by finite differences so the inner loop is
//! additions only. Jacobian orders come from exact integer resultants of the
//! Frobenius characteristic polynomial with x^n - 1; no floating point
//! appears anywhere.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::factorint::valuation;
use crate::ff::{FieldCtx, FieldElem};
use crate::poly::{FPoly, IntPoly};
use crate::Result;

/// Where a curve lives: the rationals or an explicit finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Rational,
    Finite { p: u64, n: usize },
}

impl Base {
    pub fn ctx(&self) -> Result<FieldCtx> {
        match self {
            Base::Rational => Err(Error::Invalid("curve is defined over Q".into())),
            Base::Finite { p, n } => FieldCtx::extension(*p, *n),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Base::Rational)
    }
}

/// y^2 = f(x) with integer coefficient data (interpreted in the base field).
#[derive(Clone, Debug)]
pub struct HyperellipticModel {
    pub f: IntPoly,
    pub base: Base,
    pub label: Option<String>,
}

/// Long Weierstrass model [a1, a2, a3, a4, a6].
#[derive(Clone, Debug)]
pub struct EllipticModel {
    pub a: [BigInt; 5],
    pub base: Base,
    pub label: Option<String>,
}

#[derive(Clone, Debug)]
pub enum CurveModel {
    Hyperelliptic(HyperellipticModel),
    Elliptic(EllipticModel),
}

impl CurveModel {
    pub fn base(&self) -> &Base {
        match self {
            CurveModel::Hyperelliptic(h) => &h.base,
            CurveModel::Elliptic(e) => &e.base,
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            CurveModel::Hyperelliptic(h) => h.label.as_deref(),
            CurveModel::Elliptic(e) => e.label.as_deref(),
        }
    }

    pub fn genus(&self) -> u32 {
        match self {
            CurveModel::Hyperelliptic(h) => h.genus(),
            CurveModel::Elliptic(_) => 1,
        }
    }
}

impl HyperellipticModel {
    pub fn new(f: IntPoly, base: Base, label: Option<String>) -> Result<Self> {
        let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
        if deg < 3 {
            return Err(Error::Invalid(format!(
                "hyperelliptic model needs deg(f) >= 3, got {deg}"
            )));
        }
        match &base {
            Base::Rational => {
                if !f.is_squarefree_q()? {
                    return Err(Error::NotSquarefree);
                }
            }
            Base::Finite { p, .. } => {
                if *p == 2 {
                    return Err(Error::CharacteristicTwo);
                }
                let ctx = base.ctx()?;
                let fbar = f.reduce_mod(&ctx);
                if fbar.degree() != Some(deg) {
                    return Err(Error::Invalid(
                        "leading coefficient vanishes in the base field".into(),
                    ));
                }
                if !fbar.is_squarefree(&ctx)? {
                    return Err(Error::NotSquarefree);
                }
            }
        }
        Ok(HyperellipticModel { f, base, label })
    }

    pub fn degree(&self) -> usize {
        self.f.degree().unwrap()
    }

    /// g = ceil(deg/2) - 1.
    pub fn genus(&self) -> u32 {
        (self.degree().div_ceil(2) - 1) as u32
    }

    pub fn is_odd_degree(&self) -> bool {
        self.degree() % 2 == 1
    }

    /// Genus-1 models convert to a Weierstrass model: y^2 = a x^3 + b x^2 +
    /// c x + d maps under (x, y) -> (ax, ay) to Y^2 = X^3 + bX^2 + acX + a^2 d.
    pub fn to_elliptic(&self) -> Result<EllipticModel> {
        if self.degree() != 3 {
            return Err(Error::Invalid(
                "only a cubic converts to a Weierstrass model".into(),
            ));
        }
        let a = self.f.coeff(3);
        let b = self.f.coeff(2);
        let c = self.f.coeff(1);
        let d = self.f.coeff(0);
        EllipticModel::new(
            [
                BigInt::zero(),
                b,
                BigInt::zero(),
                &a * &c,
                &a * &a * &d,
            ],
            self.base.clone(),
            self.label.clone(),
        )
    }
}

impl EllipticModel {
    pub fn new(a: [BigInt; 5], base: Base, label: Option<String>) -> Result<Self> {
        let m = EllipticModel { a, base, label };
        match &m.base {
            Base::Rational => {
                if m.discriminant().is_zero() {
                    return Err(Error::SingularModel("discriminant is zero".into()));
                }
            }
            Base::Finite { p, .. } => {
                if *p == 2 {
                    return Err(Error::CharacteristicTwo);
                }
                let pb = BigInt::from(*p);
                if (m.discriminant() % &pb).is_zero() {
                    return Err(Error::SingularModel(format!(
                        "discriminant vanishes mod {p}"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// b2, b4, b6, b8 of the model.
    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * (a3 * a3) - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2) * &b8 - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6) + 9 * &b2 * &b4 * &b6
    }

    /// The cubic D(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 whose square classes
    /// count points: completing the square gives (2y + a1 x + a3)^2 = D(x).
    pub fn square_completed_cubic(&self) -> IntPoly {
        let [b2, b4, b6, _] = self.b_invariants();
        IntPoly::from_coeffs(vec![b6, 2 * b4, b2, BigInt::from(4)])
    }
}

// ---------------------------------------------------------------------------
// reduction at a prime
// ---------------------------------------------------------------------------

/// Outcome of reducing a model over Q at a finite place.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionInfo {
    pub v: u64,
    pub good: bool,
    pub reason: String,
}

/// Conservative good-reduction test: v odd, leading coefficient preserved
/// and f squarefree mod v for hyperelliptic models; v odd and v not dividing
/// the discriminant of the given model for elliptic ones. Places flagged bad
/// here are skipped by every scan.
pub fn good_reduction(model: &CurveModel, v: u64) -> Result<(ReductionInfo, Option<CurveModel>)> {
    if v < 2 {
        return Err(Error::Invalid(format!("{v} is not a finite place")));
    }
    if !model.base().is_rational() {
        return Err(Error::Invalid("model is not defined over Q".into()));
    }
    if !crate::ff::is_prime_u64(v) {
        return Err(Error::NotPrime(v));
    }
    let bad = |reason: &str| {
        Ok((
            ReductionInfo {
                v,
                good: false,
                reason: reason.to_string(),
            },
            None,
        ))
    };
    if v == 2 {
        return bad("residue characteristic 2");
    }
    match model {
        CurveModel::Hyperelliptic(h) => {
            let pb = BigInt::from(v);
            if (h.f.lc() % &pb).is_zero() {
                return bad("leading coefficient vanishes (degree drops)");
            }
            let ctx = FieldCtx::prime(v)?;
            let fbar = h.f.reduce_mod(&ctx);
            if !fbar.is_squarefree(&ctx)? {
                return bad("reduction is not squarefree");
            }
            let reduced = HyperellipticModel::new(
                h.f.clone(),
                Base::Finite { p: v, n: 1 },
                h.label.clone(),
            )?;
            Ok((
                ReductionInfo {
                    v,
                    good: true,
                    reason: "squarefree of full degree".into(),
                },
                Some(CurveModel::Hyperelliptic(reduced)),
            ))
        }
        CurveModel::Elliptic(e) => {
            let pb = BigInt::from(v);
            if (e.discriminant() % &pb).is_zero() {
                return bad("discriminant vanishes");
            }
            let reduced =
                EllipticModel::new(e.a.clone(), Base::Finite { p: v, n: 1 }, e.label.clone())?;
            Ok((
                ReductionInfo {
                    v,
                    good: true,
                    reason: "discriminant is a unit".into(),
                },
                Some(CurveModel::Elliptic(reduced)),
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// point counting
// ---------------------------------------------------------------------------

/// Bitmap of the squares in the field, indexed by canonical element index.
pub fn square_table(ctx: &FieldCtx, budget: u64) -> Result<Vec<u64>> {
    let q = card_within(ctx, 1, budget)?;
    let mut bits = vec![0u64; (q as usize + 63) / 64];
    let mut set = |idx: u64| bits[(idx / 64) as usize] |= 1 << (idx % 64);
    // advance t^2 by finite differences within each +1 row
    let p = ctx.characteristic();
    let rows = q / p;
    let mut hi = ctx.zero();
    for _ in 0..rows.max(1) {
        if p <= 4 {
            let mut x = hi.clone();
            for _ in 0..p {
                let sq = ctx.square(&x);
                set(ctx.index_of(&sq));
                bump_low(ctx, &mut x);
            }
        } else {
            // v0 = x^2, v1 = delta, v2 = 2 (constant second difference)
            let x0 = hi.clone();
            let mut x1 = x0.clone();
            bump_low(ctx, &mut x1);
            let mut x2 = x1.clone();
            bump_low(ctx, &mut x2);
            let mut v = [ctx.square(&x0), ctx.square(&x1), ctx.square(&x2)];
            v[2] = ctx.sub(&v[2], &v[1]);
            v[1] = ctx.sub(&v[1], &v[0]);
            v[2] = ctx.sub(&v[2], &v[1]);
            for step in 0..p {
                set(ctx.index_of(&v[0]));
                if step + 1 < p {
                    v[0] = ctx.add(&v[0], &v[1]);
                    v[1] = ctx.add(&v[1], &v[2]);
                }
            }
        }
        if !bump_high(ctx, &mut hi) {
            break;
        }
    }
    Ok(bits)
}

/// add 1 to the constant digit only (field +1 within a row)
fn bump_low(ctx: &FieldCtx, x: &mut FieldElem) {
    let p = ctx.characteristic();
    x.0[0] += 1;
    if x.0[0] == p {
        x.0[0] = 0;
    }
}

/// advance the non-constant digits; returns false on wraparound
fn bump_high(ctx: &FieldCtx, x: &mut FieldElem) -> bool {
    let p = ctx.characteristic();
    for c in x.0.iter_mut().skip(1) {
        *c += 1;
        if *c < p {
            return true;
        }
        *c = 0;
    }
    false
}

fn card_within(ctx: &FieldCtx, n: usize, budget: u64) -> Result<u64> {
    let q = ctx.cardinality().pow(n as u32);
    match q.to_u64() {
        Some(v) if v <= budget => Ok(v),
        _ => Err(Error::BudgetExceeded {
            needed: q.to_u128().unwrap_or(u128::MAX),
            budget,
        }),
    }
}

/// Number of affine points on y^2 = f(x): sum over x of (1 + chi(f(x))),
/// where chi is the quadratic character and chi(0) contributes the single
/// point with y = 0.
pub fn affine_count(f: &FPoly, ctx: &FieldCtx, budget: u64) -> Result<u64> {
    if ctx.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = card_within(ctx, 1, budget)?;
    let squares = square_table(ctx, budget)?;
    let is_sq = |idx: u64| squares[(idx / 64) as usize] >> (idx % 64) & 1 == 1;
    let p = ctx.characteristic();
    let d = f.degree().unwrap();
    let mut count = 0u64;
    let rows = q / p;
    let mut hi = ctx.zero();
    for _ in 0..rows.max(1) {
        if (p as usize) <= d + 2 {
            let mut x = hi.clone();
            for _ in 0..p {
                let val = f.eval(&x, ctx);
                count += tally(ctx, &val, &is_sq);
                bump_low(ctx, &mut x);
            }
        } else {
            // difference table of depth d along the +1 row
            let mut v: Vec<FieldElem> = Vec::with_capacity(d + 1);
            let mut x = hi.clone();
            for _ in 0..=d {
                v.push(f.eval(&x, ctx));
                bump_low(ctx, &mut x);
            }
            for k in 1..=d {
                for j in (k..=d).rev() {
                    v[j] = ctx.sub(&v[j], &v[j - 1]);
                }
            }
            for step in 0..p {
                count += tally(ctx, &v[0], &is_sq);
                if step + 1 < p {
                    for i in 0..d {
                        let t = ctx.add(&v[i], &v[i + 1]);
                        v[i] = t;
                    }
                }
            }
        }
        if !bump_high(ctx, &mut hi) {
            break;
        }
    }
    Ok(count)
}

#[inline]
fn tally(ctx: &FieldCtx, val: &FieldElem, is_sq: &impl Fn(u64) -> bool) -> u64 {
    if ctx.is_zero(val) {
        1
    } else if is_sq(ctx.index_of(val)) {
        2
    } else {
        0
    }
}

/// Points at infinity of the smooth projective model of y^2 = f(x).
pub fn infinity_count(f: &FPoly, ctx: &FieldCtx) -> Result<u64> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d % 2 == 1 {
        Ok(1)
    } else if ctx.is_square(f.lc().unwrap())? {
        Ok(2)
    } else {
        Ok(0)
    }
}

/// Full point count of the smooth projective model of y^2 = f(x) over the
/// given field; f must be squarefree there.
pub fn count_points_fpoly(f: &FPoly, ctx: &FieldCtx, budget: u64) -> Result<u64> {
    if !f.is_squarefree(ctx)? {
        return Err(Error::SingularModel("f is not squarefree".into()));
    }
    Ok(affine_count(f, ctx, budget)? + infinity_count(f, ctx)?)
}

/// Count points of a model over its own finite base field.
pub fn count_points(model: &CurveModel, budget: u64) -> Result<u64> {
    count_points_ext(model, 1, budget)
}

/// Count points over the degree-n extension of the model's base field.
pub fn count_points_ext(model: &CurveModel, n: usize, budget: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let (p, m) = match model.base() {
        Base::Finite { p, n } => (*p, *n),
        Base::Rational => {
            return Err(Error::Invalid(
                "count over Q is not defined; reduce at a place first".into(),
            ))
        }
    };
    let big = FieldCtx::extension(p, m * n)?;
    match model {
        CurveModel::Hyperelliptic(h) => {
            let fbar = h.f.reduce_mod(&big);
            if fbar.degree() != Some(h.degree()) {
                return Err(Error::SingularModel("degree drops in reduction".into()));
            }
            count_points_fpoly(&fbar, &big, budget)
        }
        CurveModel::Elliptic(e) => {
            let cubic = e.square_completed_cubic().reduce_mod(&big);
            count_points_fpoly(&cubic, &big, budget)
        }
    }
}

// ---------------------------------------------------------------------------
// L-polynomials
// ---------------------------------------------------------------------------

/// Numerator of the zeta function: integer coefficients a_0..a_{2g} with
/// a_0 = 1, the functional equation a_{2g-i} = q^{g-i} a_i, and power sums
/// bounded by 2g q^{n/2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub q: u64,
    pub genus: u32,
    pub coeffs: Vec<BigInt>,
}

impl LPolynomial {
    /// Build from the counts N_1..N_g via the Newton-style recurrence
    /// k a_k = -sum_{j<k} a_j s_{k-j}, then complete by the functional
    /// equation. All invariants are checked before returning.
    pub fn from_counts(q: u64, genus: u32, counts: &[u64]) -> Result<LPolynomial> {
        let g = genus as usize;
        if counts.len() < g {
            return Err(Error::Invalid(format!(
                "need counts N_1..N_{g}, got {}",
                counts.len()
            )));
        }
        let qb = BigInt::from(q);
        let s: Vec<BigInt> = (1..=g)
            .map(|m| qb.pow(m as u32) + 1 - BigInt::from(counts[m - 1]))
            .collect();
        let mut a = vec![BigInt::one()];
        for k in 1..=g {
            let mut acc = BigInt::zero();
            for j in 0..k {
                acc += &a[j] * &s[k - j - 1];
            }
            let kb = BigInt::from(k);
            if (&acc % &kb) != BigInt::zero() {
                return Err(Error::InvariantViolation(format!(
                    "Newton recurrence not integral at k = {k}"
                )));
            }
            a.push(-acc / kb);
        }
        let mut coeffs = vec![BigInt::zero(); 2 * g + 1];
        coeffs[..=g].clone_from_slice(&a);
        for i in 0..g {
            coeffs[2 * g - i] = qb.pow((g - i) as u32) * &a[i];
        }
        let l = LPolynomial { q, genus, coeffs };
        l.check_invariants()?;
        Ok(l)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let g = self.genus as usize;
        if self.coeffs.len() != 2 * g + 1 {
            return Err(Error::InvariantViolation("wrong coefficient count".into()));
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::InvariantViolation("a_0 != 1".into()));
        }
        let qb = BigInt::from(self.q);
        for i in 0..=g {
            if self.coeffs[2 * g - i] != qb.pow((g - i) as u32) * &self.coeffs[i] {
                return Err(Error::InvariantViolation(format!(
                    "functional equation fails at i = {i}"
                )));
            }
        }
        // Riemann hypothesis bound on power sums: s_n^2 <= (2g)^2 q^n
        let s = self.power_sums(2 * g);
        let bound = BigInt::from(4 * g as u64 * g as u64);
        for (n, sn) in s.iter().enumerate() {
            let n = n + 1;
            if sn * sn > &bound * qb.pow(n as u32) {
                return Err(Error::InvariantViolation(format!(
                    "power sum s_{n} exceeds the Weil bound"
                )));
            }
        }
        Ok(())
    }

    /// Power sums s_1..s_upto of the 2g Frobenius eigenvalues.
    pub fn power_sums(&self, upto: usize) -> Vec<BigInt> {
        let deg = self.coeffs.len() - 1;
        let a = |j: usize| -> BigInt {
            self.coeffs.get(j).cloned().unwrap_or_else(BigInt::zero)
        };
        let mut s: Vec<BigInt> = Vec::with_capacity(upto);
        for k in 1..=upto {
            let mut acc = if k <= deg {
                -BigInt::from(k as u64) * a(k)
            } else {
                BigInt::zero()
            };
            for j in 1..k.min(deg + 1) {
                let term = a(j) * &s[k - j - 1];
                acc -= term;
            }
            s.push(acc);
        }
        s
    }

    /// Predicted point count over the degree-n extension: q^n + 1 - s_n.
    pub fn predicted_count(&self, n: usize) -> BigInt {
        let s = self.power_sums(n);
        BigInt::from(self.q).pow(n as u32) + 1 - &s[n - 1]
    }

    /// Monic characteristic polynomial of Frobenius, chi(x) = x^{2g} L(1/x).
    pub fn frobenius_charpoly(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::from_coeffs(c)
    }

    /// #J(F_{q^n}) = |prod (alpha_i^n - 1)|, as the absolute resultant of
    /// chi with x^n - 1 over Z.
    pub fn jacobian_order(&self, n: usize) -> BigUint {
        assert!(n >= 1, "extension degree must be >= 1");
        let chi = self.frobenius_charpoly();
        let mut xn1 = vec![BigInt::zero(); n + 1];
        xn1[0] = BigInt::from(-1);
        xn1[n] = BigInt::one();
        let r = chi.resultant(&IntPoly::from_coeffs(xn1));
        r.magnitude().clone()
    }

    /// L(1) = #J(F_q).
    pub fn order(&self) -> BigUint {
        self.jacobian_order(1)
    }

    /// For n = 1..n_max: (n, r_n, m_n) with #J(F_{q^n}) = ell^{r_n} m_n and
    /// ell coprime to m_n.
    pub fn ell_valuations(&self, ell: u64, n_max: usize) -> Vec<(usize, u32, BigUint)> {
        let ellb = BigUint::from(ell);
        (1..=n_max)
            .map(|n| {
                let order = self.jacobian_order(n);
                let (r, m) = valuation(&order, &ellb);
                (n, r, m)
            })
            .collect()
    }

    /// Product of two L-polynomials over the same field (Jacobian isogenous
    /// to a product).
    pub fn mul(&self, other: &LPolynomial) -> Result<LPolynomial> {
        if self.q != other.q {
            return Err(Error::Invalid("L-polynomials over different fields".into()));
        }
        let a = IntPoly::from_coeffs(self.coeffs.clone());
        let b = IntPoly::from_coeffs(other.coeffs.clone());
        let l = LPolynomial {
            q: self.q,
            genus: self.genus + other.genus,
            coeffs: a.mul(&b).0,
        };
        l.check_invariants()?;
        Ok(l)
    }
}

/// L-polynomial of a curve over its finite base field, from the counts
/// N_1..N_g gathered by exhaustive enumeration.
pub fn lpolynomial(model: &CurveModel, budget: u64) -> Result<LPolynomial> {
    let (p, m) = match model.base() {
        Base::Finite { p, n } => (*p, *n),
        Base::Rational => {
            return Err(Error::Invalid(
                "L-polynomial needs a finite base; reduce at a place first".into(),
            ))
        }
    };
    let g = model.genus();
    let q = FieldCtx::extension(p, m)?
        .cardinality_u64()
        .ok_or(Error::Invalid("base field too large".into()))?;
    let counts: Vec<u64> = (1..=g as usize)
        .map(|n| count_points_ext(model, n, budget))
        .collect::<Result<_>>()?;
    LPolynomial::from_counts(q, g, &counts)
}

/// L-polynomial of y^2 = f(x) given directly over a field context (used for
/// curves whose coefficients live in a proper extension field).
pub fn lpolynomial_fpoly(f: &FPoly, ctx: &FieldCtx, budget: u64) -> Result<LPolynomial> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    let g = (d.div_ceil(2) - 1) as u32;
    let q = ctx
        .cardinality_u64()
        .ok_or(Error::Invalid("base field too large".into()))?;
    let mut counts = vec![];
    for n in 1..=g as usize {
        let big = FieldCtx::extension(ctx.characteristic(), ctx.degree() * n)?;
        let emb = crate::ff::Embedding::new(ctx, &big)?;
        let fbig = FPoly::from_coeffs(&big, f.0.iter().map(|c| emb.map(c, &big)).collect());
        counts.push(count_points_fpoly(&fbig, &big, budget)?);
    }
    LPolynomial::from_counts(q, g, &counts)
}

// ---------------------------------------------------------------------------
// assorted curve predicates
// ---------------------------------------------------------------------------

/// (q + 1)^2 > 4 g^2 q, the exact form of q + 1 - 2g sqrt(q) > 0: every
/// genus-g curve over F_q then has a rational point.
pub fn weil_guarantee(genus: u32, q: u64) -> bool {
    let qq = q as u128;
    let g = genus as u128;
    (qq + 1) * (qq + 1) > 4 * g * g * qq
}

/// Weil interval check |N - q - 1| <= 2 g sqrt(q), exact integer form.
pub fn weil_bound_holds(genus: u32, q: u64, count: u64) -> bool {
    let diff = (count as i128) - (q as i128) - 1;
    (diff * diff) as u128 <= 4 * (genus as u128) * (genus as u128) * (q as u128)
}

/// Ordinarity of a genus-1 curve over F_q: the Frobenius trace a = q+1-N_1
/// is a unit mod the characteristic.
pub fn is_ordinary(model: &CurveModel, budget: u64) -> Result<bool> {
    if model.genus() != 1 {
        return Err(Error::Invalid("ordinarity test implemented for genus 1".into()));
    }
    let p = match model.base() {
        Base::Finite { p, .. } => *p,
        Base::Rational => return Err(Error::Invalid("need a finite base field".into())),
    };
    let l = lpolynomial(model, budget)?;
    let a = -l.coeffs[1].clone(); // L = 1 - a T + q T^2
    Ok(!(a % BigInt::from(p)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_BUDGET;
    use num_traits::One;

    fn hyper(f: &[i64], p: u64, n: usize) -> CurveModel {
        CurveModel::Hyperelliptic(
            HyperellipticModel::new(IntPoly::from_i64(f), Base::Finite { p, n }, None).unwrap(),
        )
    }

    fn elliptic_q(a: [i64; 5]) -> CurveModel {
        CurveModel::Elliptic(
            EllipticModel::new(a.map(BigInt::from), Base::Rational, None).unwrap(),
        )
    }

    #[test]
    fn count_examples_from_small_curves() {
        // y^2 = x^3 - x + 2 over F_3 has exactly the point at infinity
        assert_eq!(count_points(&hyper(&[2, -1, 0, 1], 3, 1), DEFAULT_BUDGET).unwrap(), 1);
        // y^2 = -x^6 + x^2 - 1 over F_3 is pointless
        assert_eq!(count_points(&hyper(&[-1, 0, 1, 0, 0, 0, -1], 3, 1), DEFAULT_BUDGET).unwrap(), 0);
        // y^2 = x^3 - x over F_5 has 8 points
        assert_eq!(count_points(&hyper(&[0, -1, 0, 1], 5, 1), DEFAULT_BUDGET).unwrap(), 8);
    }

    /// Oracle: count y^2 = f(x) by looping over all (x, y) pairs directly.
    fn oracle_count(f: &[i64], p: u64, n: usize) -> u64 {
        let ctx = FieldCtx::extension(p, n).unwrap();
        let fp = FPoly::from_ints(&ctx, f);
        let mut count = 0u64;
        for x in ctx.iter_elems() {
            let fx = fp.eval(&x, &ctx);
            for y in ctx.iter_elems() {
                if ctx.square(&y) == fx {
                    count += 1;
                }
            }
        }
        // points at infinity
        count
            + if f.len() % 2 == 0 {
                1
            } else {
                let lc = ctx.from_i64(*f.last().unwrap());
                if ctx.is_square(&lc).unwrap() {
                    2
                } else {
                    0
                }
            }
    }

    #[test]
    fn counts_match_pair_loop_oracle() {
        for (f, p, n) in [
            (vec![2i64, -1, 0, 1], 3u64, 1usize),
            (vec![-1, 0, 1, 0, 0, 0, -1], 3, 1),
            (vec![-1, 0, 1, 0, 0, 0, -1], 3, 2),
            (vec![0, -1, 0, 1], 5, 1),
            (vec![1, 2, 0, 0, 0, 1], 7, 1),
            (vec![1, 2, 0, 0, 0, 1], 7, 2),
            (vec![1, 1, 0, 0, 0, 1], 11, 1),
            (vec![2, 2, 1, 0, 2, 0, 1], 17, 1),
            (vec![1, 3, 0, 2, 1], 11, 1),
        ] {
            let model = hyper(&f, p, n);
            assert_eq!(
                count_points(&model, DEFAULT_BUDGET).unwrap(),
                oracle_count(&f, p, n),
                "mismatch for {f:?} over F_{p}^{n}"
            );
        }
    }

    #[test]
    fn extension_count_consistency() {
        let c0 = hyper(&[-1, 0, 1, 0, 0, 0, -1], 3, 1);
        assert_eq!(count_points_ext(&c0, 1, DEFAULT_BUDGET).unwrap(),
                   count_points(&c0, DEFAULT_BUDGET).unwrap());
        // N_2 of C0 over F_9 equals the pair-loop oracle
        assert_eq!(
            count_points_ext(&c0, 2, DEFAULT_BUDGET).unwrap(),
            oracle_count(&[-1, 0, 1, 0, 0, 0, -1], 3, 2)
        );
        // y^2 = x^3 - x + 2 over F_9: N_2 = 10 - (a^2 - 2q) with a = 3
        let e = hyper(&[2, -1, 0, 1], 3, 1);
        assert_eq!(count_points_ext(&e, 2, DEFAULT_BUDGET).unwrap(), 7);
    }

    #[test]
    fn elliptic_long_weierstrass_count() {
        // 67a1: y^2 + y = x^3 + x^2 - 12x - 21, discriminant -67
        let e = elliptic_q([0, 1, 1, -12, -21]);
        if let CurveModel::Elliptic(m) = &e {
            assert_eq!(m.discriminant(), BigInt::from(-67));
        }
        let (info, reduced) = good_reduction(&e, 3).unwrap();
        assert!(info.good);
        let n = count_points(&reduced.unwrap(), DEFAULT_BUDGET).unwrap();
        // oracle: direct loop over the long Weierstrass equation mod 3
        let mut oracle = 1u64;
        for x in 0..3i64 {
            for y in 0..3i64 {
                let lhs = y * y + y;
                let rhs = x * x * x + x * x - 12 * x - 21;
                if (lhs - rhs).rem_euclid(3) == 0 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(n, oracle);
        let (info67, _) = good_reduction(&e, 67).unwrap();
        assert!(!info67.good);
        let (info2, _) = good_reduction(&e, 2).unwrap();
        assert!(!info2.good);
    }

    #[test]
    fn index2_curve_reductions() {
        let f = [14i64, 14, 7, 0, 14, 0, 7];
        let c = CurveModel::Hyperelliptic(
            HyperellipticModel::new(IntPoly::from_i64(&f), Base::Rational, None).unwrap(),
        );
        let (i3, _) = good_reduction(&c, 3).unwrap();
        assert!(i3.good);
        let (i7, _) = good_reduction(&c, 7).unwrap();
        assert!(!i7.good, "7 divides the leading coefficient");
        assert!(good_reduction(&c, 1).is_err());
    }

    #[test]
    fn lpolynomial_of_c0_factors() {
        // L(C0/F_3) = (1 - T + 3T^2)(1 - 3T + 3T^2) = 1 -4T +9T^2 -12T^3 +9T^4
        let c0 = hyper(&[-1, 0, 1, 0, 0, 0, -1], 3, 1);
        let l = lpolynomial(&c0, DEFAULT_BUDGET).unwrap();
        let expected: Vec<BigInt> = [1i64, -4, 9, -12, 9].map(BigInt::from).to_vec();
        assert_eq!(l.coeffs, expected);
        // and it is the product of the two elliptic factors
        let lss = LPolynomial {
            q: 3,
            genus: 1,
            coeffs: [1i64, -3, 3].map(BigInt::from).to_vec(),
        };
        let lord = LPolynomial {
            q: 3,
            genus: 1,
            coeffs: [1i64, -1, 3].map(BigInt::from).to_vec(),
        };
        assert_eq!(lss.mul(&lord).unwrap().coeffs, l.coeffs);
    }

    #[test]
    fn jacobian_orders_match_resultants() {
        let c0 = hyper(&[-1, 0, 1, 0, 0, 0, -1], 3, 1);
        let l = lpolynomial(&c0, DEFAULT_BUDGET).unwrap();
        assert_eq!(l.jacobian_order(1), BigUint::from(3u32));
        assert_eq!(l.jacobian_order(2), BigUint::from(105u32));
        assert_eq!(l.jacobian_order(3), BigUint::from(1008u32));
        // n = 1 is L(1)
        let l1: BigInt = l.coeffs.iter().sum();
        assert_eq!(l.order(), l1.magnitude().clone());
        // divisibility for m | n
        for (m, n) in [(1usize, 4usize), (2, 4), (2, 6), (3, 6), (1, 12), (4, 12)] {
            let om = l.jacobian_order(m);
            let on = l.jacobian_order(n);
            assert!((&on % &om).is_zero(), "order({m}) does not divide order({n})");
        }
    }

    #[test]
    fn ell_valuation_sequences() {
        let c0 = hyper(&[-1, 0, 1, 0, 0, 0, -1], 3, 1);
        let l = lpolynomial(&c0, DEFAULT_BUDGET).unwrap();
        let seq = l.ell_valuations(2, 3);
        assert_eq!(seq[0], (1, 0, BigUint::from(3u32)));
        assert_eq!(seq[1], (2, 0, BigUint::from(105u32)));
        assert_eq!(seq[2], (3, 4, BigUint::from(63u32)));
        // ell larger than the group order
        let seq = l.ell_valuations(1009, 1);
        assert_eq!(seq[0].1, 0);
    }

    #[test]
    fn ell_valuations_of_index2_reduction_at_17() {
        // the twisted sextic has #J(F_17) = 271 (prime), so its 7-adic
        // valuation vanishes; the untwisted companion carries the 343 = 7^3
        let twisted = hyper(&[14, 14, 7, 0, 14, 0, 7], 17, 1);
        let l = lpolynomial(&twisted, DEFAULT_BUDGET).unwrap();
        let seq = l.ell_valuations(7, 1);
        assert_eq!(seq[0].1, 0);
        assert_eq!(seq[0].2, BigUint::from(271u32));
        let untwisted = hyper(&[2, 2, 1, 0, 2, 0, 1], 17, 1);
        let l = lpolynomial(&untwisted, DEFAULT_BUDGET).unwrap();
        let seq = l.ell_valuations(7, 1);
        assert_eq!(seq[0].1, 3);
        assert_eq!(seq[0].2, BigUint::one());
    }

    #[test]
    fn genus2_lpoly_predicts_higher_counts() {
        // corpus: the index-2 sextic at good places, and x^5+x+1 over F_11
        for (f, p) in [
            (vec![2i64, 2, 1, 0, 2, 0, 1], 3u64),
            (vec![2, 2, 1, 0, 2, 0, 1], 5),
            (vec![1, 1, 0, 0, 0, 1], 11),
        ] {
            let m = hyper(&f, p, 1);
            let l = lpolynomial(&m, DEFAULT_BUDGET).unwrap();
            for n in 3..=4usize {
                if p.pow(n as u32) <= 1_000_000 {
                    let predicted = l.predicted_count(n);
                    let actual = count_points_ext(&m, n, DEFAULT_BUDGET).unwrap();
                    assert_eq!(predicted, BigInt::from(actual), "n = {n}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn genus1_jacobian_order_equals_point_count() {
        // for genus 1 the Jacobian order over every extension is the point
        // count there
        let e = hyper(&[2, -1, 0, 1], 3, 1);
        let l = lpolynomial(&e, DEFAULT_BUDGET).unwrap();
        for n in 1..=8usize {
            let order = l.jacobian_order(n);
            let count = count_points_ext(&e, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(order, BigUint::from(count), "n = {n}");
        }
    }

    #[test]
    fn weil_checks() {
        assert!(weil_guarantee(3, 37));
        assert!(!weil_guarantee(3, 25));
        assert!(weil_guarantee(1, 2)); // (2+1)^2 = 9 > 8
        assert!(weil_bound_holds(1, 3, 1));
        assert!(weil_bound_holds(2, 3, 0));
        assert!(!weil_bound_holds(1, 5, 20));
    }

    #[test]
    fn ordinary_vs_supersingular() {
        // y^2 = -x^3 + x^2 - 1 over F_3 is ordinary
        let eord = hyper(&[-1, 0, 1, -1], 3, 1);
        assert!(is_ordinary(&eord, DEFAULT_BUDGET).unwrap());
        // y^2 = -x^3 + x - 1 over F_3 is supersingular
        let ess = hyper(&[-1, 1, 0, -1], 3, 1);
        assert!(!is_ordinary(&ess, DEFAULT_BUDGET).unwrap());
        // y^2 = x^3 - x + 2 over F_3: N_1 = 1 so a = 3, supersingular
        let e = hyper(&[2, -1, 0, 1], 3, 1);
        assert!(!is_ordinary(&e, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let c = hyper(&[1, 2, 0, 0, 0, 1], 7, 1);
        match count_points_ext(&c, 4, 1000) {
            Err(Error::BudgetExceeded { needed, budget }) => {
                assert_eq!(needed, 2401);
                assert_eq!(budget, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn singular_models_rejected() {
        assert!(HyperellipticModel::new(
            IntPoly::from_i64(&[0, 0, 1, 1]), // x^3 + x^2 = x^2(x+1)
            Base::Rational,
            None
        )
        .is_err());
        assert!(
            EllipticModel::new([0, 0, 0, 0, 0].map(BigInt::from), Base::Rational, None).is_err()
        );
        // char-2 curve-level operations are rejected
        assert!(HyperellipticModel::new(
            IntPoly::from_i64(&[1, 1, 0, 1]),
            Base::Finite { p: 2, n: 1 },
            None
        )
        .is_err());
    }
}
