//! Dense group rings R[G] over Z, Z/p^M and cyclotomic integers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::abelian::{Character, CycInt, FinAbGroup, Hom, Subgroup};
use crate::error::{Error, Result};

/// A coefficient ring, carrying whatever context its elements need.
pub trait CoeffRing: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, a: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn tag(&self) -> String;
}

/// Z with overflow-checked i64 arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = i64;
    fn zero(&self) -> i64 {
        0
    }
    fn from_i64(&self, a: i64) -> i64 {
        a
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a.checked_add(*b).expect("integer overflow in Z[G]")
    }
    fn neg(&self, a: &i64) -> i64 {
        a.checked_neg().expect("integer overflow in Z[G]")
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a.checked_mul(*b).expect("integer overflow in Z[G]")
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn tag(&self) -> String {
        "Z".into()
    }
}

/// Z/p^M.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModPow {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
}

impl ModPow {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        let modulus = p
            .checked_pow(m)
            .filter(|&x| x < 1 << 62)
            .ok_or(Error::Overflow("p^M"))?;
        Ok(ModPow { p, m, modulus })
    }

    /// p-adic valuation of a residue, M for zero.
    pub fn val(&self, a: u64) -> u32 {
        let mut a = a % self.modulus;
        if a == 0 {
            return self.m;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn reduce(&self, a: i128) -> u64 {
        a.rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce_big(&self, a: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        ((a % &m + &m) % &m).to_u64().unwrap()
    }

    /// Symmetric lift into (-p^M/2, p^M/2].
    pub fn lift(&self, a: u64) -> i64 {
        let a = a % self.modulus;
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let (g, s, _) = crate::intmat::ext_gcd(a as i128, self.modulus as i128);
        (g == 1).then(|| self.reduce(s))
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus;
        let mut b = a % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
}

impl CoeffRing for ModPow {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, a: i64) -> u64 {
        self.reduce(a as i128)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.modulus as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.modulus as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.modulus == 0
    }
    fn tag(&self) -> String {
        format!("Z/{}^{}", self.p, self.m)
    }
}

/// Z[zeta_n].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclo {
    pub n: u64,
}

impl CoeffRing for Cyclo {
    type Elem = CycInt;
    fn zero(&self) -> CycInt {
        CycInt::zero(self.n)
    }
    fn from_i64(&self, a: i64) -> CycInt {
        CycInt::from_int(self.n, a)
    }
    fn add(&self, a: &CycInt, b: &CycInt) -> CycInt {
        a.add(b)
    }
    fn neg(&self, a: &CycInt) -> CycInt {
        a.neg()
    }
    fn mul(&self, a: &CycInt, b: &CycInt) -> CycInt {
        a.mul(b)
    }
    fn is_zero(&self, a: &CycInt) -> bool {
        a.is_zero()
    }
    fn tag(&self) -> String {
        format!("Z[zeta_{}]", self.n)
    }
}

/// Element of R[G] as a dense coefficient array in the group's index order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElem<R: CoeffRing> {
    group: FinAbGroup,
    ring: R,
    c: Vec<R::Elem>,
}

pub type ZElem = GroupRingElem<Integers>;
pub type ModElem = GroupRingElem<ModPow>;
pub type CycElem = GroupRingElem<Cyclo>;

impl<R: CoeffRing> GroupRingElem<R> {
    pub fn new(group: FinAbGroup, ring: R, c: Vec<R::Elem>) -> Result<Self> {
        if c.len() != group.order() {
            return Err(Error::Mismatch(format!(
                "{} coefficients for a group of order {}",
                c.len(),
                group.order()
            )));
        }
        Ok(GroupRingElem { group, ring, c })
    }

    pub fn zero(group: &FinAbGroup, ring: &R) -> Self {
        GroupRingElem { group: group.clone(), ring: ring.clone(), c: vec![ring.zero(); group.order()] }
    }

    /// The basis element [g].
    pub fn basis(group: &FinAbGroup, ring: &R, g: usize) -> Self {
        let mut z = Self::zero(group, ring);
        z.c[g] = ring.one();
        z
    }

    pub fn one(group: &FinAbGroup, ring: &R) -> Self {
        Self::basis(group, ring, 0)
    }

    /// [g] - 1.
    pub fn aug_gen(group: &FinAbGroup, ring: &R, g: usize) -> Self {
        Self::basis(group, ring, g).sub_unchecked(&Self::one(group, ring))
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.c
    }

    pub fn coeff(&self, g: usize) -> &R::Elem {
        &self.c[g]
    }

    pub fn set_coeff(&mut self, g: usize, a: R::Elem) {
        self.c[g] = a;
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| self.ring.is_zero(a))
    }

    fn same(&self, o: &Self) -> Result<()> {
        if self.group != o.group {
            return Err(Error::Mismatch("different groups".into()));
        }
        if self.ring != o.ring {
            return Err(Error::Mismatch("different coefficient rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(self.add_unchecked(o))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(self.sub_unchecked(o))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn add_unchecked(&self, o: &Self) -> Self {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| self.ring.add(a, b)).collect();
        GroupRingElem { group: self.group.clone(), ring: self.ring.clone(), c }
    }

    pub(crate) fn sub_unchecked(&self, o: &Self) -> Self {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| self.ring.sub(a, b)).collect();
        GroupRingElem { group: self.group.clone(), ring: self.ring.clone(), c }
    }

    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let g = &self.group;
        let mut out = vec![self.ring.zero(); g.order()];
        let nz: Vec<usize> = (0..o.c.len()).filter(|&j| !self.ring.is_zero(&o.c[j])).collect();
        for (i, a) in self.c.iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for &j in &nz {
                let k = g.add(i, j);
                out[k] = self.ring.add(&out[k], &self.ring.mul(a, &o.c[j]));
            }
        }
        GroupRingElem { group: g.clone(), ring: self.ring.clone(), c: out }
    }

    pub fn neg(&self) -> Self {
        let c = self.c.iter().map(|a| self.ring.neg(a)).collect();
        GroupRingElem { group: self.group.clone(), ring: self.ring.clone(), c }
    }

    pub fn scale(&self, k: &R::Elem) -> Self {
        let c = self.c.iter().map(|a| self.ring.mul(a, k)).collect();
        GroupRingElem { group: self.group.clone(), ring: self.ring.clone(), c }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.group, &self.ring), |acc, _| acc.mul_unchecked(self))
    }

    /// Coefficient sum.
    pub fn augment(&self) -> R::Elem {
        self.c.iter().fold(self.ring.zero(), |acc, a| self.ring.add(&acc, a))
    }

    /// Restriction of the measure to the coset gamma + H.
    pub fn gamma_part(&self, h: &Subgroup, gamma: usize) -> Result<Self> {
        let (reps, which) = h.cosets(&self.group);
        if !reps.contains(&gamma) {
            return Err(Error::InvalidInput(format!("{gamma} is not a coset representative")));
        }
        let target = which[gamma];
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(x, a)| if which[x] == target { a.clone() } else { self.ring.zero() })
            .collect();
        Ok(GroupRingElem { group: self.group.clone(), ring: self.ring.clone(), c })
    }

    /// Pushforward of coefficients along a homomorphism.
    pub fn pushforward(&self, f: &Hom) -> Result<Self> {
        if f.src != self.group {
            return Err(Error::Mismatch("homomorphism source".into()));
        }
        let table = f.table();
        let mut c = vec![self.ring.zero(); f.dst.order()];
        for (x, a) in self.c.iter().enumerate() {
            if !self.ring.is_zero(a) {
                c[table[x]] = self.ring.add(&c[table[x]], a);
            }
        }
        Ok(GroupRingElem { group: f.dst.clone(), ring: self.ring.clone(), c })
    }

    /// Pushforward along a quotient map; non-surjective maps are rejected.
    pub fn project(&self, f: &Hom) -> Result<Self> {
        if !f.is_surjective() {
            return Err(Error::InvalidInput("projection along a non-surjective map".into()));
        }
        self.pushforward(f)
    }

    /// Ring map induced by g -> g^n, landing in the subgroup H, written over
    /// H through its inclusion `incl`.
    pub fn transfer_ver(&self, incl: &Hom, n: i128) -> Result<Self> {
        if incl.dst != self.group {
            return Err(Error::Mismatch("inclusion target".into()));
        }
        let table = incl.table();
        let mut back = vec![usize::MAX; self.group.order()];
        for (h, &x) in table.iter().enumerate() {
            back[x] = h;
        }
        let mut c = vec![self.ring.zero(); incl.src.order()];
        for (x, a) in self.c.iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            let y = self.group.mul_int(x, n);
            let h = back[y];
            if h == usize::MAX {
                return Err(Error::Internal("transfer image outside the subgroup".into()));
            }
            c[h] = self.ring.add(&c[h], a);
        }
        Ok(GroupRingElem { group: incl.src.clone(), ring: self.ring.clone(), c })
    }

    /// Coefficientwise change of ring.
    pub fn map_ring<S: CoeffRing>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> GroupRingElem<S> {
        GroupRingElem { group: self.group.clone(), ring: ring.clone(), c: self.c.iter().map(f).collect() }
    }

    /// Pullback of the group along an isomorphism-preserving relabeling.
    pub fn with_group(&self, group: FinAbGroup) -> Result<Self> {
        Self::new(group, self.ring.clone(), self.c.clone())
    }
}

impl ZElem {
    pub fn from_ints(group: &FinAbGroup, c: Vec<i64>) -> Result<Self> {
        Self::new(group.clone(), Integers, c)
    }

    pub fn reduce(&self, ring: &ModPow) -> ModElem {
        self.map_ring(ring, |&a| ring.reduce(a as i128))
    }

    pub fn to_cyc(&self, n: u64) -> CycElem {
        self.map_ring(&Cyclo { n }, |&a| CycInt::from_int(n, a))
    }
}

impl CycElem {
    /// The integer element, if every coefficient is rational.
    pub fn to_int(&self) -> Option<ZElem> {
        let c: Option<Vec<i64>> = self.c.iter().map(|a| a.as_rational().and_then(|r| r.to_i64())).collect();
        c.map(|c| GroupRingElem { group: self.group.clone(), ring: Integers, c })
    }

    pub fn embed(&self, n: u64) -> CycElem {
        self.map_ring(&Cyclo { n }, |a| a.embed(n))
    }
}

/// Coefficient rings that embed in a cyclotomic ring.
pub trait ToCyc: CoeffRing {
    fn to_cyc(&self, a: &Self::Elem, n: u64) -> CycInt;
    fn level(&self) -> u64 {
        1
    }
}

impl ToCyc for Integers {
    fn to_cyc(&self, a: &i64, n: u64) -> CycInt {
        CycInt::from_int(n, *a)
    }
}

impl ToCyc for Cyclo {
    fn to_cyc(&self, a: &CycInt, n: u64) -> CycInt {
        a.embed(n)
    }
    fn level(&self) -> u64 {
        self.n
    }
}

/// The chi-twist: multiply the gamma-part of xi by chi(gamma), where `quot`
/// is G -> Gamma = G/H and chi is a character of Gamma.
pub fn chi_twist<R: ToCyc>(xi: &GroupRingElem<R>, quot: &Hom, chi: &Character) -> Result<CycElem> {
    if quot.src != *xi.group() {
        return Err(Error::Mismatch("twist quotient source".into()));
    }
    use num_integer::Integer;
    let n = xi.ring().level().lcm(&chi.level);
    let table = quot.table();
    let scale = (n / chi.level) as i64;
    let c = xi
        .coeffs()
        .iter()
        .enumerate()
        .map(|(x, a)| {
            let v = xi.ring().to_cyc(a, n);
            if v.is_zero() {
                v
            } else {
                v.mul_zeta(chi.exp_at(&quot.dst, table[x]) as i64 * scale)
            }
        })
        .collect();
    GroupRingElem::new(xi.group().clone(), Cyclo { n }, c)
}

/// Product in Z[G] with BigInt accumulation; errors instead of panicking when
/// the result leaves i64.
pub fn checked_mul(a: &ZElem, b: &ZElem) -> Result<ZElem> {
    a.same(b)?;
    let g = a.group();
    let mut out = vec![BigInt::zero(); g.order()];
    for (i, x) in a.coeffs().iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.coeffs().iter().enumerate() {
            if *y != 0 {
                out[g.add(i, j)] += BigInt::from(*x) * y;
            }
        }
    }
    let c: Option<Vec<i64>> = out.iter().map(|v| v.to_i64()).collect();
    ZElem::from_ints(g, c.ok_or(Error::Overflow("Z[G] product"))?)
}
