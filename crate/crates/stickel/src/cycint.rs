//! Exact arithmetic in Z[zeta_N] = Z[x]/(Phi_N), dense coefficient vectors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<[i64]>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<[i64]>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Phi_n, low to high, by exact division of x^n - 1 by the
/// Phi_d for proper divisors d.
pub fn cyclotomic_poly(n: u64) -> Arc<[i64]> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_poly(d);
            num = exact_div_monic(&num, &den);
        }
    }
    let arc: Arc<[i64]> = num.into();
    phi_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd];
        q[i] = c;
        for (j, &b) in den.iter().enumerate() {
            r[i + j] -= c * b;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Element of Z[zeta_n]; the representation has exactly deg Phi_n entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    n: u64,
    c: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => write!(f, "{a}*z{}^{i}", self.n)?,
            }
        }
        Ok(())
    }
}

fn reduce_big(n: u64, mut raw: Vec<BigInt>) -> Vec<BigInt> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    if raw.len() < d {
        raw.resize(d, BigInt::zero());
        return raw;
    }
    for i in (d..raw.len()).rev() {
        if raw[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut raw[i]);
        for (j, &b) in phi[..d].iter().enumerate() {
            if b != 0 {
                raw[i - d + j] -= &c * b;
            }
        }
    }
    raw.truncate(d);
    raw
}

/// Reduction of an i128 vector, falling back to big integers on overflow.
fn reduce_small(n: u64, raw: &[i128]) -> Vec<BigInt> {
    let phi = cyclotomic_poly(n);
    let d = phi.len() - 1;
    let mut r = raw.to_vec();
    if r.len() < d {
        r.resize(d, 0);
    }
    let mut ok = true;
    'outer: for i in (d..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        r[i] = 0;
        for (j, &b) in phi[..d].iter().enumerate() {
            match c.checked_mul(b as i128).and_then(|x| r[i - d + j].checked_sub(x)) {
                Some(v) => r[i - d + j] = v,
                None => {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    if ok {
        r.truncate(d);
        r.into_iter().map(BigInt::from).collect()
    } else {
        reduce_big(n, raw.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl CycInt {
    pub fn zero(n: u64) -> Self {
        let d = cyclotomic_poly(n).len() - 1;
        CycInt { n, c: vec![BigInt::zero(); d] }
    }

    pub fn from_int(n: u64, a: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = a.into();
        z
    }

    pub fn one(n: u64) -> Self {
        Self::from_int(n, 1)
    }

    /// zeta_n^k.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![0i128; e + 1];
        raw[e] = 1;
        Self::from_raw(n, &raw)
    }

    /// Image of sum raw[i] x^i.
    pub fn from_raw(n: u64, raw: &[i128]) -> Self {
        CycInt { n, c: reduce_small(n, raw) }
    }

    pub fn from_raw_big(n: u64, raw: Vec<BigInt>) -> Self {
        CycInt { n, c: reduce_big(n, raw) }
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The integer value if the element lies in Z.
    pub fn as_rational(&self) -> Option<BigInt> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.n, o.n, "cyclotomic level mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        CycInt { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        CycInt { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        CycInt { n: self.n, c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn add_assign(&mut self, o: &Self) {
        self.check(o);
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { n: self.n, c: self.c.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let d = self.c.len();
        let mut raw = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Self::from_raw_big(self.n, raw)
    }

    /// Multiplication by zeta_n^k.
    pub fn mul_zeta(&self, k: i64) -> Self {
        let e = k.rem_euclid(self.n as i64) as usize;
        let mut raw = vec![BigInt::zero(); e + self.c.len()];
        for (i, a) in self.c.iter().enumerate() {
            raw[i + e] = a.clone();
        }
        Self::from_raw_big(self.n, raw)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.n);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Division by an integer, which must be exact.
    pub fn div_exact(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::Inexact("division by zero".into()));
        }
        let mut c = Vec::with_capacity(self.c.len());
        for a in &self.c {
            let (qt, r) = a.div_rem(k);
            if !r.is_zero() {
                return Err(Error::Inexact(format!("{self} / {k}")));
            }
            c.push(qt);
        }
        Ok(CycInt { n: self.n, c })
    }

    /// The automorphism zeta -> zeta^a, gcd(a, n) = 1.
    pub fn galois(&self, a: i64) -> Self {
        assert_eq!(a.gcd(&(self.n as i64)), 1, "not a Galois automorphism");
        let n = self.n as usize;
        let mut raw = vec![BigInt::zero(); n.max(1)];
        for (i, x) in self.c.iter().enumerate() {
            let j = ((i as i64 * a).rem_euclid(n as i64)) as usize;
            raw[j] += x;
        }
        Self::from_raw_big(self.n, raw)
    }

    /// Image in Z[zeta_m] for n | m.
    pub fn embed(&self, m: u64) -> Self {
        assert_eq!(m % self.n, 0, "embedding needs n | m");
        if m == self.n {
            return self.clone();
        }
        let s = (m / self.n) as usize;
        let mut raw = vec![BigInt::zero(); (self.c.len() - 1) * s + 1];
        for (i, x) in self.c.iter().enumerate() {
            raw[i * s] = x.clone();
        }
        Self::from_raw_big(m, raw)
    }

    /// Reduction of the coefficients modulo m (the image in (Z/m)[x]/Phi_n).
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        CycInt { n: self.n, c: self.c.iter().map(|a| a.mod_floor(m)).collect() }
    }

    /// Coefficients as i64, if they fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.c.iter().map(|a| a.to_i64()).collect()
    }

    pub fn max_abs(&self) -> BigInt {
        self.c.iter().map(|a| a.abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(&*cyclotomic_poly(1), &[-1, 1]);
        assert_eq!(&*cyclotomic_poly(4), &[1, 0, 1]);
        assert_eq!(&*cyclotomic_poly(6), &[1, -1, 1]);
        assert_eq!(&*cyclotomic_poly(9), &[1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
        assert!(cyclotomic_poly(105).iter().any(|&c| c == -2));
    }

    #[test]
    fn roots_of_unity() {
        for n in [1u64, 2, 3, 4, 6, 12, 27] {
            let z = CycInt::zeta_pow(n, 1);
            assert!(z.pow(n as u32).is_one());
            let s = (0..n as i64).fold(CycInt::zero(n), |acc, k| acc.add(&CycInt::zeta_pow(n, k)));
            assert_eq!(s.is_zero(), n > 1);
        }
    }

    fn elem(n: u64) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-20i128..20, n as usize).prop_map(move |v| CycInt::from_raw(n, &v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in elem(12), b in elem(12), c in elem(12)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn galois_is_ring_hom(a in elem(9), b in elem(9), k in prop::sample::select(vec![1i64, 2, 4, 5, 7, 8])) {
            prop_assert_eq!(a.mul(&b).galois(k), a.galois(k).mul(&b.galois(k)));
        }

        #[test]
        fn embedding_is_ring_hom(a in elem(6), b in elem(6)) {
            prop_assert_eq!(a.mul(&b).embed(18), a.embed(18).mul(&b.embed(18)));
        }
    }
}
