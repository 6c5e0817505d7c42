//! Polynomials over a finite field context and over the integers.
//!
//! Coefficients are stored ascending; the zero polynomial has an empty
//! coefficient vector and `degree() == None` (the -infinity sentinel).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::Error;
use crate::ff::{FieldCtx, FieldElem};
use crate::Result;

// ---------------------------------------------------------------------------
// polynomials over F_{p^n}
// ---------------------------------------------------------------------------

/// Polynomial over a [`FieldCtx`]; operations take the context explicitly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FPoly(pub Vec<FieldElem>);

impl FPoly {
    pub fn zero() -> FPoly {
        FPoly(vec![])
    }

    pub fn from_coeffs(ctx: &FieldCtx, coeffs: Vec<FieldElem>) -> FPoly {
        let mut p = FPoly(coeffs);
        p.trim(ctx);
        p
    }

    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> FPoly {
        FPoly::from_coeffs(ctx, coeffs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    /// x itself.
    pub fn x(ctx: &FieldCtx) -> FPoly {
        FPoly::from_coeffs(ctx, vec![ctx.zero(), ctx.one()])
    }

    pub fn constant(c: FieldElem, ctx: &FieldCtx) -> FPoly {
        FPoly::from_coeffs(ctx, vec![c])
    }

    fn trim(&mut self, ctx: &FieldCtx) {
        while self.0.last().map(|c| ctx.is_zero(c)) == Some(true) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// None encodes degree -infinity.
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn lc(&self) -> Option<&FieldElem> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize, ctx: &FieldCtx) -> FieldElem {
        self.0.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn add(&self, other: &FPoly, ctx: &FieldCtx) -> FPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.add(&self.coeff(i, ctx), &other.coeff(i, ctx)));
        }
        FPoly::from_coeffs(ctx, out)
    }

    pub fn sub(&self, other: &FPoly, ctx: &FieldCtx) -> FPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.sub(&self.coeff(i, ctx), &other.coeff(i, ctx)));
        }
        FPoly::from_coeffs(ctx, out)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> FPoly {
        FPoly(self.0.iter().map(|c| ctx.neg(c)).collect())
    }

    pub fn mul(&self, other: &FPoly, ctx: &FieldCtx) -> FPoly {
        if self.is_zero() || other.is_zero() {
            return FPoly::zero();
        }
        let mut out = vec![ctx.zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = ctx.add(&out[i + j], &ctx.mul(a, b));
            }
        }
        FPoly::from_coeffs(ctx, out)
    }

    pub fn mul_elem(&self, s: &FieldElem, ctx: &FieldCtx) -> FPoly {
        FPoly::from_coeffs(ctx, self.0.iter().map(|c| ctx.mul(c, s)).collect())
    }

    /// Quotient and remainder; divisor must be nonzero.
    pub fn divrem(&self, divisor: &FPoly, ctx: &FieldCtx) -> (FPoly, FPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (FPoly::zero(), self.clone());
        }
        let lead_inv = ctx.inv(divisor.lc().unwrap());
        let mut rem = self.0.clone();
        let mut quot = vec![ctx.zero(); rem.len() - dd];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = ctx.mul(rem.last().unwrap(), &lead_inv);
            if !ctx.is_zero(&c) {
                quot[k] = c.clone();
                for (j, m) in divisor.0.iter().enumerate() {
                    rem[k + j] = ctx.sub(&rem[k + j], &ctx.mul(&c, m));
                }
            }
            while rem.last().map(|x| ctx.is_zero(x)) == Some(true) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        (FPoly::from_coeffs(ctx, quot), FPoly::from_coeffs(ctx, rem))
    }

    pub fn rem(&self, divisor: &FPoly, ctx: &FieldCtx) -> FPoly {
        self.divrem(divisor, ctx).1
    }

    pub fn monic(&self, ctx: &FieldCtx) -> FPoly {
        match self.lc() {
            None => FPoly::zero(),
            Some(l) => self.mul_elem(&ctx.inv(l), ctx),
        }
    }

    pub fn gcd(&self, other: &FPoly, ctx: &FieldCtx) -> FPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, ctx);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    /// Extended gcd: returns (g, s, t) with g = s*self + t*other, g monic.
    pub fn xgcd(&self, other: &FPoly, ctx: &FieldCtx) -> (FPoly, FPoly, FPoly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = FPoly::from_ints(ctx, &[1]);
        let mut s1 = FPoly::zero();
        let mut t0 = FPoly::zero();
        let mut t1 = FPoly::from_ints(ctx, &[1]);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, ctx);
            let ns = s0.sub(&q.mul(&s1, ctx), ctx);
            let nt = t0.sub(&q.mul(&t1, ctx), ctx);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if let Some(l) = r0.lc() {
            let li = ctx.inv(l);
            let li_poly = FPoly::constant(li, ctx);
            r0 = r0.mul(&li_poly, ctx);
            s0 = s0.mul(&li_poly, ctx);
            t0 = t0.mul(&li_poly, ctx);
        }
        (r0, s0, t0)
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> FPoly {
        if self.0.len() <= 1 {
            return FPoly::zero();
        }
        let mut out = Vec::with_capacity(self.0.len() - 1);
        for (i, c) in self.0.iter().enumerate().skip(1) {
            out.push(ctx.mul_scalar(c, i as u64));
        }
        FPoly::from_coeffs(ctx, out)
    }

    pub fn eval(&self, x: &FieldElem, ctx: &FieldCtx) -> FieldElem {
        let mut acc = ctx.zero();
        for c in self.0.iter().rev() {
            acc = ctx.mul(&acc, x);
            acc = ctx.add(&acc, c);
        }
        acc
    }

    /// True iff gcd(f, f') = 1; a vanishing derivative (inseparable) counts
    /// as not squarefree.
    pub fn is_squarefree(&self, ctx: &FieldCtx) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = self.derivative(ctx);
        if d.is_zero() {
            return Ok(self.degree() == Some(0));
        }
        Ok(self.gcd(&d, ctx).degree() == Some(0))
    }

    /// base^exp mod modulus, with arbitrary-precision exponent.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &FPoly, ctx: &FieldCtx) -> FPoly {
        let mut acc = FPoly::from_ints(ctx, &[1]);
        let mut base = self.rem(modulus, ctx);
        let mut e = exp.clone();
        while !e.is_zero() {
            if e.bit(0) {
                acc = acc.mul(&base, ctx).rem(modulus, ctx);
            }
            base = base.mul(&base, ctx).rem(modulus, ctx);
            e >>= 1;
        }
        acc
    }

    /// Does f have a root in the field? Exhaustive evaluation for q <= 10^6,
    /// otherwise gcd(x^q - x, f) computed in the quotient ring.
    pub fn has_root(&self, ctx: &FieldCtx) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(false);
        }
        match ctx.cardinality_u64() {
            Some(q) if q <= 1_000_000 => {
                let mut x = ctx.zero();
                loop {
                    if ctx.is_zero(&self.eval(&x, ctx)) {
                        return Ok(true);
                    }
                    if !ctx.next_elem(&mut x) {
                        return Ok(false);
                    }
                }
            }
            _ => {
                let q = ctx.cardinality();
                let xq = FPoly::x(ctx).pow_mod(&q, self, ctx);
                let diff = xq.sub(&FPoly::x(ctx), ctx);
                if diff.is_zero() {
                    return Ok(true); // f divides x^q - x, so it splits
                }
                Ok(self.gcd(&diff, ctx).degree() != Some(0))
            }
        }
    }

    /// All roots in the field (exhaustive; intended for small fields).
    pub fn roots(&self, ctx: &FieldCtx) -> Vec<FieldElem> {
        let mut out = vec![];
        for x in ctx.iter_elems() {
            if ctx.is_zero(&self.eval(&x, ctx)) {
                out.push(x);
            }
        }
        out
    }

    /// Coefficients as canonical indices, for serialization.
    pub fn coeff_indices(&self, ctx: &FieldCtx) -> Vec<u64> {
        self.0.iter().map(|c| ctx.index_of(c)).collect()
    }
}

// ---------------------------------------------------------------------------
// polynomials over Z
// ---------------------------------------------------------------------------

/// Integer-coefficient polynomial, ascending order, trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly(vec![])
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> IntPoly {
        let mut p = IntPoly(coeffs);
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.0.last().map(|c| c.is_zero()) == Some(true) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.0.len().max(other.0.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.0.len().max(other.0.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> IntPoly {
        IntPoly::from_coeffs(self.0.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.0.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Reduce coefficients into a finite field context.
    pub fn reduce_mod(&self, ctx: &FieldCtx) -> FPoly {
        let p = BigInt::from(ctx.characteristic());
        FPoly::from_coeffs(
            ctx,
            self.0
                .iter()
                .map(|c| {
                    let r = ((c % &p) + &p) % &p;
                    ctx.from_u64(r.to_u64().expect("reduced residue fits u64"))
                })
                .collect(),
        )
    }

    /// x^deg * f(1/x).
    pub fn reverse(&self) -> IntPoly {
        let mut c = self.0.clone();
        c.reverse();
        IntPoly::from_coeffs(c)
    }

    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    /// Resultant of f and g over Z, by Bareiss fraction-free elimination of
    /// the Sylvester matrix. Exact.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return BigInt::zero(),
        };
        if m == 0 {
            return self.lc().pow(n as u32);
        }
        if n == 0 {
            return other.lc().pow(m as u32);
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for (row, mr) in mat.iter_mut().enumerate().take(n) {
            for k in 0..=m {
                mr[row + k] = self.0[m - k].clone();
            }
        }
        for row in 0..m {
            for k in 0..=n {
                mat[n + row][row + k] = other.0[n - k].clone();
            }
        }
        det_bareiss(mat)
    }

    /// Squarefree over Q, i.e. disc != 0.
    pub fn is_squarefree_q(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(true);
        }
        Ok(!self.resultant(&self.derivative()).is_zero())
    }

    /// Rational roots (by the rational root theorem), as (num, den) pairs in
    /// lowest terms with den > 0.
    pub fn rational_roots(&self) -> Vec<(BigInt, BigInt)> {
        use num_integer::Integer;
        if self.is_zero() {
            return vec![];
        }
        let mut out = vec![];
        // strip the power of x first
        let mut f = self.clone();
        let mut x_root = false;
        while !f.0.is_empty() && f.0[0].is_zero() {
            f.0.remove(0);
            x_root = true;
        }
        if x_root {
            out.push((BigInt::zero(), BigInt::one()));
        }
        if f.degree().map_or(true, |d| d == 0) {
            return out;
        }
        let a0 = f.0[0].magnitude().clone();
        let an = f.lc().magnitude().clone();
        for p in divisors(&a0) {
            for q in divisors(&an) {
                let p = BigInt::from(p.clone());
                let q = BigInt::from(q);
                if p.gcd(&q) != BigInt::one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let num = &p * BigInt::from(sign);
                    // f(num/q) = 0 <=> sum c_i num^i q^{d-i} = 0
                    let d = f.degree().unwrap();
                    let mut acc = BigInt::zero();
                    for (i, c) in f.0.iter().enumerate() {
                        acc += c * num.pow(i as u32) * q.pow((d - i) as u32);
                    }
                    if acc.is_zero() && !out.contains(&(num.clone(), q.clone())) {
                        out.push((num, q.clone()));
                    }
                }
            }
        }
        out
    }

    /// Number of distinct real roots, by Sturm's theorem (exact integer
    /// arithmetic). Requires a squarefree input.
    pub fn count_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(0);
        }
        if !self.is_squarefree_q()? {
            return Err(Error::NotSquarefree);
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let a = &seq[seq.len() - 2];
            let b = &seq[seq.len() - 1];
            if b.is_zero() {
                seq.pop();
                break;
            }
            let (mult_positive, r) = pseudo_rem(a, b);
            let mut next = if mult_positive { r.neg() } else { r };
            // strip positive content to keep coefficients small
            let c = next.content();
            if c > BigInt::one() {
                next = IntPoly::from_coeffs(next.0.iter().map(|x| x / &c).collect());
            }
            seq.push(next);
        }
        // sign variations at -infinity and +infinity from leading terms
        let sign_at = |p: &IntPoly, at_minus_inf: bool| -> i32 {
            let d = p.degree().unwrap();
            let s = if p.lc().is_positive() { 1 } else { -1 };
            if at_minus_inf && d % 2 == 1 {
                -s
            } else {
                s
            }
        };
        let variations = |at_minus_inf: bool| -> usize {
            let signs: Vec<i32> = seq
                .iter()
                .filter(|p| !p.is_zero())
                .map(|p| sign_at(p, at_minus_inf))
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        Ok(variations(true) - variations(false))
    }

    /// Does f have a real root?
    pub fn has_real_root(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree().unwrap() % 2 == 1 {
            return Ok(true);
        }
        Ok(self.count_real_roots()? > 0)
    }
}

/// Pseudo-remainder: returns (multiplier_positive, r) where
/// lc(b)^(da-db+1) * a = q*b + r.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> (bool, IntPoly) {
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    let delta = da - db;
    let l = b.lc();
    let mult = l.pow((delta + 1) as u32);
    let mut r = a.mul_scalar(&mult);
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let c = r.lc() / b.lc(); // exact: r is scaled by lc(b) powers
        let shift = dr - db;
        let mut sub = vec![BigInt::zero(); shift];
        sub.extend(b.0.iter().map(|x| x * &c));
        r = r.sub(&IntPoly::from_coeffs(sub));
    }
    (mult.is_positive(), r)
}

fn divisors(n: &BigUint) -> Vec<BigUint> {
    // small-trial divisor list, adequate for rational-root testing of the
    // curve polynomials this crate handles
    let mut out = vec![BigUint::one()];
    if n.is_zero() {
        return out;
    }
    let mut d = BigUint::from(2u32);
    let mut m = n.clone();
    let mut primes: Vec<(BigUint, u32)> = vec![];
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += BigUint::one();
    }
    if m > BigUint::one() {
        primes.push((m, 1));
    }
    for (p, e) in primes {
        let cur = out.clone();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk *= &p;
            for c in &cur {
                out.push(c * &pk);
            }
        }
    }
    out
}

fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = t;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

// ---------------------------------------------------------------------------
// text format: bracket lists and a small expression grammar
// ---------------------------------------------------------------------------

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if i > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "x")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Parse either `[c0, c1, ...]` (ascending coefficients) or an expression in
/// x with integer coefficients, +, -, *, ^ and parentheses.
pub fn parse_int_poly(text: &str) -> Result<IntPoly> {
    let t = text.trim();
    if t.starts_with('[') {
        parse_bracket_list(t)
    } else {
        ExprParser::new(t).parse()
    }
}

fn parse_bracket_list(t: &str) -> Result<IntPoly> {
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse {
            line: 1,
            col: t.len(),
            msg: "expected closing ']'".into(),
        })?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(IntPoly::zero());
    }
    let mut coeffs = vec![];
    for (i, item) in inner.split(',').enumerate() {
        let s = item.trim().replace('\u{2212}', "-");
        let c: BigInt = s.parse().map_err(|_| Error::Parse {
            line: 1,
            col: i + 1,
            msg: format!("bad integer coefficient '{}'", item.trim()),
        })?;
        coeffs.push(c);
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

struct ExprParser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str) -> Self {
        ExprParser {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            col: self.pos + 1,
            msg: format!("{msg} in '{}'", self.src),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).map_or(false, |c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse(mut self) -> Result<IntPoly> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.bump();
                self.term()?.neg()
            }
            Some('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = acc.mul(&self.power()?);
                }
                // implicit multiplication: 7x, 2(x+1), (x+1)(x-1)
                Some('x') | Some('(') => {
                    acc = acc.mul(&self.power()?);
                }
                Some(c) if c.is_ascii_digit() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.integer()?;
            let e: u32 = e.to_u32().ok_or_else(|| self.err("exponent too large"))?;
            let mut acc = IntPoly::from_i64(&[1]);
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.peek() {
            Some('x') => {
                self.bump();
                Ok(IntPoly::from_i64(&[0, 1]))
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some('-') => {
                self.bump();
                Ok(self.atom()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(IntPoly::from_coeffs(vec![v]))
            }
            _ => Err(self.err("expected integer, 'x' or '('")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let mut neg = false;
        if self.chars.get(self.pos) == Some(&'-') {
            neg = true;
            self.pos += 1;
            self.skip_ws();
        }
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .map_or(false, |c| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let v: BigInt = s.parse().unwrap();
        Ok(if neg { -v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::prime(3).unwrap()
    }

    #[test]
    fn has_root_exhaustive_cases() {
        let ctx = f3();
        // x^2 + 1 over F_3: f(0)=1, f(1)=2, f(2)=2
        let f = FPoly::from_ints(&ctx, &[1, 0, 1]);
        assert!(!f.has_root(&ctx).unwrap());
        // x always has the root 0
        assert!(FPoly::x(&ctx).has_root(&ctx).unwrap());
        // x^6+2x^4+x^2+2x+2 over F_3 has no root
        let g = FPoly::from_ints(&ctx, &[2, 2, 1, 0, 2, 0, 1]);
        assert!(!g.has_root(&ctx).unwrap());
        assert!(FPoly::zero().has_root(&ctx).is_err());
    }

    #[test]
    fn has_root_paths_agree() {
        // exhaustive path vs gcd path for degree <= 8 over small fields
        for (p, n) in [(3u64, 1usize), (5, 1), (7, 1), (3, 2), (11, 2), (5, 2)] {
            let ctx = FieldCtx::extension(p, n).unwrap();
            let q = ctx.cardinality_u64().unwrap();
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
            for _ in 0..40 {
                let deg = rng.random_range(1..=8usize);
                let mut coeffs: Vec<FieldElem> = (0..=deg)
                    .map(|_| ctx.elem_from_index(rng.random_range(0..q)))
                    .collect();
                if ctx.is_zero(coeffs.last().unwrap()) {
                    *coeffs.last_mut().unwrap() = ctx.one();
                }
                let f = FPoly::from_coeffs(&ctx, coeffs);
                let exhaustive = f.roots(&ctx).first().is_some();
                let via_gcd = {
                    let xq = FPoly::x(&ctx).pow_mod(&ctx.cardinality(), &f, &ctx);
                    let diff = xq.sub(&FPoly::x(&ctx), &ctx);
                    diff.is_zero() || f.gcd(&diff, &ctx).degree() != Some(0)
                };
                assert_eq!(exhaustive, via_gcd, "paths disagree for {f:?} over F_{q}");
            }
        }
    }

    #[test]
    fn squarefree_cases() {
        let ctx = f3();
        let x2 = FPoly::from_ints(&ctx, &[0, 0, 1]);
        assert!(!x2.is_squarefree(&ctx).unwrap());
        // x^3 over F_3 has zero derivative
        let x3 = FPoly::from_ints(&ctx, &[0, 0, 0, 1]);
        assert!(!x3.is_squarefree(&ctx).unwrap());
        // x^3 - x over F_5
        let f5 = FieldCtx::prime(5).unwrap();
        let f = FPoly::from_ints(&f5, &[0, -1, 0, 1]);
        assert!(f.is_squarefree(&f5).unwrap());
    }

    #[test]
    fn divrem_and_gcd() {
        let ctx = FieldCtx::prime(7).unwrap();
        let f = FPoly::from_ints(&ctx, &[1, 1, 0, 0, 0, 1]); // x^5 + x + 1
        let g = FPoly::from_ints(&ctx, &[1, 1, 1]); // x^2 + x + 1 divides it
        let (q, r) = f.divrem(&g, &ctx);
        assert!(r.is_zero());
        assert_eq!(q.mul(&g, &ctx), f);
        assert_eq!(f.gcd(&g, &ctx), g.monic(&ctx));
        let (d, s, t) = f.xgcd(&g, &ctx);
        assert_eq!(s.mul(&f, &ctx).add(&t.mul(&g, &ctx), &ctx), d);
    }

    #[test]
    fn resultant_small_cases() {
        // res(x^2 - 1, x - 2) = f(2) = 3 (for monic g of degree 1)
        let f = IntPoly::from_i64(&[-1, 0, 1]);
        let g = IntPoly::from_i64(&[-2, 1]);
        assert_eq!(f.resultant(&g), BigInt::from(3));
        // res(f, f') != 0 iff squarefree
        assert!(IntPoly::from_i64(&[-1, 0, 1]).is_squarefree_q().unwrap());
        assert!(!IntPoly::from_i64(&[1, 2, 1]).is_squarefree_q().unwrap());
        // disc relation for quadratic x^2 + bx + c: res(f, f') = -(b^2 - 4c)
        let f = IntPoly::from_i64(&[5, 3, 1]);
        let expected = -(BigInt::from(9) - BigInt::from(20));
        assert_eq!(f.resultant(&f.derivative()), expected);
    }

    #[test]
    fn rational_roots_cases() {
        let f = IntPoly::from_i64(&[-8, 0, 0, 1]); // x^3 - 8
        assert_eq!(f.rational_roots(), vec![(BigInt::from(2), BigInt::one())]);
        let g = IntPoly::from_i64(&[-19, 0, 0, 1]); // x^3 - 19
        assert!(g.rational_roots().is_empty());
        let h = IntPoly::from_i64(&[-1, 0, 2]); // 2x^2 - 1
        assert!(h.rational_roots().is_empty());
        let k = IntPoly::from_i64(&[1, 3, 2]); // (2x+1)(x+1)
        let roots = k.rational_roots();
        assert!(roots.contains(&(BigInt::from(-1), BigInt::one())));
        assert!(roots.contains(&(BigInt::from(-1), BigInt::from(2))));
    }

    #[test]
    fn sturm_real_roots() {
        assert_eq!(
            IntPoly::from_i64(&[3, 0, 1]).count_real_roots().unwrap(),
            0
        ); // x^2 + 3
        assert_eq!(
            IntPoly::from_i64(&[-2, 0, 1]).count_real_roots().unwrap(),
            2
        ); // x^2 - 2
        assert_eq!(
            IntPoly::from_i64(&[-19, 0, 0, 1]).count_real_roots().unwrap(),
            1
        ); // x^3 - 19
        let brodd = IntPoly::from_i64(&[3, 0, 1]).mul(&IntPoly::from_i64(&[-19, 0, 0, 1]));
        assert!(brodd.has_real_root().unwrap());
        assert!(!IntPoly::from_i64(&[3, 0, 1]).has_real_root().unwrap());
    }

    #[test]
    fn parse_bracket_and_expr() {
        let a = parse_int_poly("[14, 14, 7, 0, 7, 0, 7]").unwrap();
        let b = parse_int_poly("7*x^6 + 7*x^4 + 7*x^2 + 14*x + 14").unwrap();
        assert_eq!(a, b);
        let c = parse_int_poly("7(x^6 + 2x^4 + x^2 + 2x + 2)").unwrap();
        assert_eq!(c, IntPoly::from_i64(&[14, 14, 7, 0, 14, 0, 7]));
        let d = parse_int_poly("(x^2+3)(x^3-19)").unwrap();
        assert_eq!(d, IntPoly::from_i64(&[-57, 0, -19, 3, 0, 1]));
        assert_eq!(parse_int_poly("-x^2 + 1").unwrap(), IntPoly::from_i64(&[1, 0, -1]));
        assert!(parse_int_poly("x +").is_err());
        assert!(parse_int_poly("[1, two]").is_err());
    }

    #[test]
    fn display_roundtrip() {
        for coeffs in [
            vec![-114i64, -114, -38, -146, 6, -36, 8, 0, 2],
            vec![1, 0, -1],
            vec![0, 1],
            vec![5],
        ] {
            let p = IntPoly::from_i64(&coeffs);
            let back = parse_int_poly(&p.to_string()).unwrap();
            assert_eq!(p, back, "roundtrip failed for {}", p);
        }
    }
}
