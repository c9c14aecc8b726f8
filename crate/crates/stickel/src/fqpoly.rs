//! Arithmetic in F_q and F_q[t] for prime q, places of k = F_q(t),
//! valuations and weak approximation.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Checks that `q` is a supported prime field size.
pub fn check_prime(q: u32) -> Result<()> {
    if q < 2 || q > 65_521 || !(2..q).take_while(|d| d * d <= q).all(|d| q % d != 0) {
        return Err(Error::Unsupported(format!("q = {q} is not a supported prime")));
    }
    Ok(())
}

fn inv_mod(a: u32, q: u32) -> u32 {
    assert!(a % q != 0, "inverse of zero in F_{q}");
    let mut r = 1u64;
    let mut b = a as u64 % q as u64;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q as u64;
        }
        b = b * b % q as u64;
        e >>= 1;
    }
    r as u32
}

/// Polynomial over F_q, coefficients stored low to high; the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    q: u32,
    c: Vec<u32>,
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for FqPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqPoly {
    /// Degree first, then the coefficient vector read from the top.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl FqPoly {
    pub fn new(q: u32, coeffs: Vec<u32>) -> Self {
        let mut p = FqPoly {
            q,
            c: coeffs.into_iter().map(|a| a % q).collect(),
        };
        p.trim();
        p
    }

    /// Builds from signed coefficients, reducing mod q.
    pub fn from_i64(q: u32, coeffs: &[i64]) -> Self {
        Self::new(
            q,
            coeffs
                .iter()
                .map(|&a| a.rem_euclid(q as i64) as u32)
                .collect(),
        )
    }

    pub fn zero(q: u32) -> Self {
        FqPoly { q, c: Vec::new() }
    }

    pub fn one(q: u32) -> Self {
        Self::constant(q, 1)
    }

    pub fn constant(q: u32, a: u32) -> Self {
        Self::new(q, vec![a])
    }

    /// The variable t.
    pub fn t(q: u32) -> Self {
        Self::new(q, vec![0, 1])
    }

    /// t^n.
    pub fn monomial(q: u32, n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        FqPoly { q, c }
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with deg 0 := 0 (callers must rule out zero when it matters).
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.coeff(i) + o.coeff(i)) % self.q)
            .collect();
        Self::new(self.q, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.q, self.c.iter().map(|&a| (self.q - a) % self.q).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: u32) -> Self {
        let q = self.q as u64;
        Self::new(
            self.q,
            self.c.iter().map(|&x| (x as u64 * a as u64 % q) as u32).collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.q);
        }
        let q = self.q as u64;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u64 * b as u64) % q;
            }
        }
        Self::new(self.q, c.into_iter().map(|x| x as u32).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(self.q);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let q = self.q as u64;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Self::zero(self.q), self.clone());
        }
        let inv = inv_mod(d.lead(), self.q) as u64;
        let mut r: Vec<u64> = self.c.iter().map(|&x| x as u64).collect();
        let mut quo = vec![0u64; self.c.len() - dd];
        for i in (0..quo.len()).rev() {
            let coef = r[i + dd] * inv % q;
            quo[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + q * q - coef * b as u64 % q) % q;
            }
        }
        r.truncate(dd);
        (
            Self::new(self.q, quo.into_iter().map(|x| x as u32).collect()),
            Self::new(self.q, r.into_iter().map(|x| x as u32).collect()),
        )
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn divides(&self, f: &Self) -> bool {
        f.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.q))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let q = self.q;
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Self::zero(q), Self::one(q));
        while !r1.is_zero() {
            let (quo, r) = r0.divrem(&r1);
            let s = s0.sub(&quo.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let c = inv_mod(r0.lead(), q);
        Some(s0.scale(c).rem(m))
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut r = Self::one(self.q).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&b, m);
            }
            b = b.mul_mod(&b, m);
            e >>= 1;
        }
        r
    }

    pub fn eval(&self, x: u32) -> u32 {
        let q = self.q as u64;
        self.c
            .iter()
            .rev()
            .fold(0u64, |acc, &a| (acc * x as u64 + a as u64) % q) as u32
    }

    /// Multiplicity of `p` in `self` (self nonzero), and the cofactor.
    pub fn strip(&self, p: &Self) -> (u32, Self) {
        let mut k = 0;
        let mut f = self.clone();
        loop {
            let (quo, r) = f.divrem(p);
            if !r.is_zero() {
                return (k, f);
            }
            f = quo;
            k += 1;
        }
    }
}

/// Irreducibility over F_q by Rabin's test; the zero polynomial is rejected.
pub fn is_irreducible(f: &FqPoly) -> Result<bool> {
    let n = match f.degree() {
        None => return Err(Error::InvalidInput("irreducibility of the zero polynomial".into())),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let q = f.q() as u64;
    let f = f.monic();
    let t = FqPoly::t(f.q());
    // x^{q^k} mod f by repeated q-th powering.
    let frob = |g: &FqPoly, k: usize| {
        let mut h = g.clone();
        for _ in 0..k {
            h = h.pow_mod(q, &f);
        }
        h
    };
    if frob(&t, n) != t.rem(&f) {
        return Ok(false);
    }
    for r in prime_divisors(n as u64) {
        let h = frob(&t, n / r as usize).sub(&t);
        if !h.gcd(&f).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Monic polynomials of degree `d`, ordered by the integer sum c_i q^i over
/// the non-leading coefficients, optionally restricted to those coprime to
/// `coprime_to`.
pub fn enumerate_monics(
    q: u32,
    d: usize,
    coprime_to: Option<&FqPoly>,
) -> impl Iterator<Item = FqPoly> + '_ {
    let total = (q as u64).pow(d as u32);
    (0..total).filter_map(move |mut idx| {
        let mut c = vec![0u32; d + 1];
        c[d] = 1;
        for slot in c.iter_mut().take(d) {
            *slot = (idx % q as u64) as u32;
            idx /= q as u64;
        }
        let f = FqPoly { q, c };
        match coprime_to {
            Some(m) if !m.is_zero() && !f.gcd(m).is_one() => None,
            _ => Some(f),
        }
    })
}

/// Monic irreducibles of degree `d` in enumeration order.
pub fn irreducibles(q: u32, d: usize) -> Vec<FqPoly> {
    enumerate_monics(q, d, None)
        .filter(|f| is_irreducible(f).unwrap_or(false))
        .collect()
}

/// Factorization of a nonzero polynomial into its leading constant and
/// monic irreducible factors with multiplicities, by trial division.
pub fn factor(f: &FqPoly) -> (u32, Vec<(FqPoly, u32)>) {
    assert!(!f.is_zero(), "factor of zero");
    let lead = f.lead();
    let mut g = f.monic();
    let mut out = Vec::new();
    let mut d = 1;
    while g.deg() >= 2 * d {
        for p in enumerate_monics(f.q(), d, None) {
            if g.deg() < 2 * d {
                break;
            }
            let (k, rest) = g.strip(&p);
            if k > 0 {
                out.push((p, k));
                g = rest;
            }
        }
        d += 1;
    }
    if g.deg() > 0 {
        if let Some(pos) = out.iter().position(|(p, _)| *p == g) {
            out[pos].1 += 1;
        } else {
            out.push((g, 1));
        }
    }
    out.sort();
    (lead, out)
}

/// A closed point of P^1 over F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(FqPoly),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Place {
    /// A finite place; the polynomial must be monic irreducible.
    pub fn finite(p: FqPoly) -> Result<Self> {
        if !p.is_monic() || !is_irreducible(&p)? {
            return Err(Error::InvalidInput(format!("{p} is not monic irreducible")));
        }
        Ok(Place::Finite(p))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.deg() as u32,
            Place::Infinity => 1,
        }
    }

    pub fn norm(&self, q: u32) -> u64 {
        (q as u64).pow(self.degree())
    }

    pub fn poly(&self) -> Option<&FqPoly> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

/// Nonzero-or-zero element of k = F_q(t) as a reduced fraction with monic
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: FqPoly,
    den: FqPoly,
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: FqPoly, den: FqPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let q = num.q();
        if num.is_zero() {
            return Ok(RatFunc { num, den: FqPoly::one(q) });
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let c = inv_mod(d.lead(), q);
        Ok(RatFunc { num: n.scale(c), den: d.scale(c) })
    }

    pub fn poly(p: FqPoly) -> Self {
        let q = p.q();
        RatFunc { num: p, den: FqPoly::one(q) }
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn q(&self) -> u32 {
        self.num.q()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero denominators")
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Self::new(base.num.pow(k), base.den.pow(k))
    }

    /// Valuation at a place; `x` must be nonzero.
    pub fn ord(&self, w: &Place) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::InvalidInput("valuation of zero".into()));
        }
        Ok(match w {
            Place::Infinity => self.den.deg() as i64 - self.num.deg() as i64,
            Place::Finite(p) => self.num.strip(p).0 as i64 - self.den.strip(p).0 as i64,
        })
    }

    /// Divisor as (place, order) pairs, finite places sorted, infinity last.
    pub fn divisor(&self) -> Result<Vec<(Place, i64)>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("divisor of zero".into()));
        }
        let mut out: Vec<(Place, i64)> = Vec::new();
        for (p, k) in factor(&self.num).1 {
            out.push((Place::Finite(p), k as i64));
        }
        for (p, k) in factor(&self.den).1 {
            out.push((Place::Finite(p), -(k as i64)));
        }
        out.sort();
        let o = self.ord(&Place::Infinity)?;
        if o != 0 {
            out.push((Place::Infinity, o));
        }
        Ok(out)
    }

    /// True if self/target is a unit congruent to 1 modulo pi_w^e.
    pub fn matches_at(&self, target: &RatFunc, w: &Place, e: u32) -> Result<bool> {
        let ratio = self.div(target)?;
        if ratio.ord(w)? != 0 {
            return Ok(false);
        }
        let diff = ratio.sub(&RatFunc::poly(FqPoly::one(self.q())));
        Ok(diff.is_zero() || diff.ord(w)? >= e as i64)
    }
}

/// (ord_w(x), deg_w(x) = ord_w(x) deg w).
pub fn local_ord_and_deg(x: &RatFunc, w: &Place) -> Result<(i64, i64)> {
    let o = x.ord(w)?;
    Ok((o, o * w.degree() as i64))
}

/// One weak-approximation requirement: alpha/target = 1 mod pi^precision.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub place: Place,
    pub target: RatFunc,
    pub precision: u32,
}

#[derive(Clone, Debug)]
pub struct Approximation {
    pub alpha: RatFunc,
    /// Divisor of alpha away from the constraint places.
    pub outside: Vec<(Place, i64)>,
}

/// Finds alpha in k* meeting every constraint; the result is re-verified in
/// each completion before it is returned.
pub fn weak_approximation(constraints: &[Constraint]) -> Result<Approximation> {
    let q = match constraints.first() {
        Some(c) => c.target.q(),
        None => return Err(Error::InvalidInput("no constraints".into())),
    };
    for (i, c) in constraints.iter().enumerate() {
        if c.precision == 0 {
            return Err(Error::InvalidInput("precision 0 is not a constraint".into()));
        }
        if c.target.is_zero() {
            return Err(Error::InvalidInput("zero target".into()));
        }
        if constraints[..i].iter().any(|d| d.place == c.place) {
            return Err(Error::InvalidInput(format!("place {} repeated", c.place)));
        }
    }
    let finite: Vec<&Constraint> = constraints.iter().filter(|c| !c.place.is_infinite()).collect();
    let infinite = constraints.iter().find(|c| c.place.is_infinite());

    // alpha = pre * b / g with pre carrying the prescribed valuations.
    let mut pre = RatFunc::poly(FqPoly::one(q));
    let mut ks = Vec::new();
    for c in &finite {
        let k = c.target.ord(&c.place)?;
        ks.push(k);
        pre = pre.mul(&RatFunc::poly(c.place.poly().unwrap().clone()).pow(k)?);
    }
    let mut modulus = FqPoly::one(q);
    let mut residue = FqPoly::zero(q);
    for c in &finite {
        let p = c.place.poly().unwrap();
        let pe = p.pow(c.precision as u64);
        // unit part of target / pre at this place, reduced mod p^e
        let u = c.target.div(&pre)?;
        let inv_den = u
            .den()
            .inv_mod(&pe)
            .ok_or_else(|| Error::Internal("non-unit in weak approximation".into()))?;
        let r = u.num().mul_mod(&inv_den, &pe);
        // CRT step: residue' = residue mod modulus, r mod pe
        let inv = modulus
            .inv_mod(&pe)
            .ok_or_else(|| Error::Internal("moduli not coprime".into()))?;
        let delta = r.sub(&residue).mul_mod(&inv, &pe);
        residue = residue.add(&modulus.mul(&delta));
        modulus = modulus.mul(&pe);
        residue = residue.rem(&modulus);
    }
    let nd = modulus.deg() as i64;
    let alpha = match infinite {
        None => pre.mul(&RatFunc::poly(residue)),
        Some(c) => {
            let y = c.target.div(&pre)?;
            let o = y.ord(&Place::Infinity)?;
            let e = c.precision as i64;
            let d = nd.max(nd + o + e - 1).max(o).max(0);
            let g = if d == 0 {
                FqPoly::one(q)
            } else {
                modulus
                    .mul(&FqPoly::monomial(q, (d - nd) as usize))
                    .add(&FqPoly::one(q))
            };
            let (quo, _) = y.num().mul(&g).divrem(y.den());
            let top_deg = (d - o) as usize;
            let low = (d - o - e + 1) as usize;
            let mut top = vec![0u32; top_deg + 1];
            for (i, slot) in top.iter_mut().enumerate().skip(low) {
                *slot = quo.coeff(i);
            }
            let top = FqPoly::new(q, top);
            let rest = residue.sub(&top).rem(&modulus);
            let b = top.add(&rest);
            pre.mul(&RatFunc::new(b, g)?)
        }
    };
    for c in constraints {
        if !alpha.matches_at(&c.target, &c.place, c.precision)? {
            return Err(Error::Internal(format!(
                "weak approximation failed its own check at {}",
                c.place
            )));
        }
    }
    let outside = alpha
        .divisor()?
        .into_iter()
        .filter(|(w, _)| constraints.iter().all(|c| c.place != *w))
        .collect();
    Ok(Approximation { alpha, outside })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(c: &[i64]) -> FqPoly {
        FqPoly::from_i64(3, c)
    }

    #[test]
    fn monic_counts() {
        assert_eq!(enumerate_monics(3, 2, None).count(), 9);
        let t = FqPoly::t(3);
        let v: Vec<_> = enumerate_monics(3, 1, Some(&t)).collect();
        assert_eq!(v, vec![p3(&[1, 1]), p3(&[2, 1])]);
        // independent root test for degree-2 irreducibility
        let roots_free = enumerate_monics(3, 2, None)
            .filter(|f| (0..3).all(|x| f.eval(x) != 0))
            .count();
        assert_eq!(roots_free, 3);
        assert_eq!(irreducibles(3, 2).len(), 3);
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&FqPoly::t(2)).unwrap());
        assert!(!is_irreducible(&p3(&[0, 0, 1])).unwrap());
        assert!(is_irreducible(&p3(&[1, 0, 1])).unwrap());
        assert!(is_irreducible(&FqPoly::zero(3)).is_err());
    }

    #[test]
    fn necklace_counts() {
        // number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) q^{n/d}
        assert_eq!(irreducibles(2, 4).len(), 3);
        assert_eq!(irreducibles(2, 6).len(), 9);
        assert_eq!(irreducibles(3, 4).len(), 18);
        assert_eq!(irreducibles(5, 3).len(), 40);
    }

    #[test]
    fn valuations() {
        let t = RatFunc::poly(FqPoly::t(3));
        let pt = Place::finite(FqPoly::t(3)).unwrap();
        assert_eq!(local_ord_and_deg(&t, &pt).unwrap(), (1, 1));
        assert_eq!(local_ord_and_deg(&t, &Place::Infinity).unwrap(), (-1, -1));
        let f = p3(&[1, 0, 1]);
        let pf = Place::finite(f.clone()).unwrap();
        assert_eq!(local_ord_and_deg(&RatFunc::poly(f), &pf).unwrap(), (1, 2));
        assert!(local_ord_and_deg(&RatFunc::poly(FqPoly::zero(3)), &pt).is_err());
    }

    #[test]
    fn weak_approx_examples() {
        let one = RatFunc::poly(FqPoly::one(3));
        let c = RatFunc::poly(FqPoly::constant(3, 2));
        let pt = Place::finite(FqPoly::t(3)).unwrap();
        let a = weak_approximation(&[Constraint { place: pt.clone(), target: c.clone(), precision: 1 }]).unwrap();
        assert_eq!(a.alpha, c);

        let p1 = Place::finite(p3(&[1, 1])).unwrap();
        let a = weak_approximation(&[
            Constraint { place: pt.clone(), target: RatFunc::poly(p3(&[1, 1])), precision: 2 },
            Constraint { place: p1, target: one.clone(), precision: 1 },
        ])
        .unwrap();
        assert!(a.alpha.den().is_one() && a.alpha.num().deg() <= 2);
        // brute-force CRT oracle: the unique solution of degree < 3
        let sols: Vec<_> = (0..27)
            .map(|i| p3(&[i % 3, (i / 3) % 3, i / 9]))
            .filter(|f| f.rem(&p3(&[0, 0, 1])) == p3(&[1, 1]) && f.eval(2) == 1)
            .collect();
        assert_eq!(sols, vec![a.alpha.num().clone()]);

        let t = RatFunc::poly(FqPoly::t(3));
        let a = weak_approximation(&[
            Constraint { place: pt, target: t.clone(), precision: 3 },
            Constraint { place: Place::Infinity, target: one, precision: 2 },
        ])
        .unwrap();
        assert_eq!(a.alpha.ord(&Place::Infinity).unwrap(), 0);
        assert!(a.outside.iter().all(|(w, _)| !w.is_infinite()));
    }

    #[test]
    fn weak_approx_rejects() {
        let one = RatFunc::poly(FqPoly::one(3));
        let pt = Place::finite(FqPoly::t(3)).unwrap();
        assert!(weak_approximation(&[Constraint { place: pt.clone(), target: one, precision: 0 }]).is_err());
        let zero = RatFunc::poly(FqPoly::zero(3));
        assert!(weak_approximation(&[Constraint { place: pt, target: zero, precision: 1 }]).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly(q: u32, max_deg: usize) -> impl Strategy<Value = FqPoly> {
        proptest::collection::vec(0..q, 0..=max_deg + 1).prop_map(move |c| FqPoly::new(q, c))
    }

    fn nonzero(q: u32, max_deg: usize) -> impl Strategy<Value = FqPoly> {
        poly(q, max_deg).prop_filter("nonzero", |f| !f.is_zero())
    }

    proptest! {
        #[test]
        fn divrem_identity(a in poly(3, 8), b in nonzero(3, 4)) {
            let (quo, r) = a.divrem(&b);
            prop_assert_eq!(quo.mul(&b).add(&r), a);
            prop_assert!(r.is_zero() || r.deg() < b.deg());
        }

        #[test]
        fn product_formula(n in nonzero(3, 6), d in nonzero(3, 6)) {
            let x = RatFunc::new(n, d).unwrap();
            let total: i64 = x.divisor().unwrap().iter()
                .map(|(w, k)| k * w.degree() as i64)
                .sum();
            prop_assert_eq!(total, 0);
        }

        #[test]
        fn factor_reassembles(f in nonzero(2, 10)) {
            let (c, fs) = factor(&f);
            let mut g = FqPoly::constant(2, c);
            for (p, k) in &fs {
                prop_assert!(is_irreducible(p).unwrap());
                g = g.mul(&p.pow(*k as u64));
            }
            prop_assert_eq!(g, f);
        }

        #[test]
        fn weak_approx_self_checks(
            a in nonzero(3, 3), b in nonzero(3, 3), e1 in 1u32..4, e2 in 1u32..3, e3 in 1u32..3,
        ) {
            let pt = Place::finite(FqPoly::t(3)).unwrap();
            let p2 = Place::finite(FqPoly::from_i64(3, &[1, 0, 1])).unwrap();
            let x = RatFunc::new(a.clone(), b.clone()).unwrap();
            let y = RatFunc::new(b, a).unwrap();
            let cs = vec![
                Constraint { place: pt, target: x.clone(), precision: e1 },
                Constraint { place: p2, target: y, precision: e2 },
                Constraint { place: Place::Infinity, target: x, precision: e3 },
            ];
            let sol = weak_approximation(&cs).unwrap();
            for c in &cs {
                prop_assert!(sol.alpha.matches_at(&c.target, &c.place, c.precision).unwrap());
            }
        }
    }

    fn coprime_count_by_inclusion_exclusion(q: u32, d: usize, primes: &[FqPoly]) -> i64 {
        let mut total = 0i64;
        for mask in 0u32..(1 << primes.len()) {
            let deg: usize = (0..primes.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| primes[i].deg())
                .sum();
            if deg <= d {
                let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                total += sign * (q as i64).pow((d - deg) as u32);
            }
        }
        total
    }

    #[test]
    fn coprime_count_identity() {
        for (q, dmax) in [(2u32, 6usize), (3, 6), (5, 4)] {
            let ps = [irreducibles(q, 1), irreducibles(q, 2)].concat();
            let chosen = vec![ps[0].clone(), ps[ps.len() - 1].clone()];
            let m = chosen[0].mul(&chosen[1]);
            for d in 0..=dmax {
                let n = enumerate_monics(q, d, Some(&m)).count() as i64;
                assert_eq!(n, coprime_count_by_inclusion_exclusion(q, d, &chosen), "q={q} d={d}");
            }
        }
    }
}
