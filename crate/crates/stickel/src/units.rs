//! (S,T)-unit lattices of k = F_q(t), place modules, wedge elements and
//! the Rubin-type projection onto Lambda^n_{S,T}.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{characters, Character, CycInt, FinAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::fqpoly::{FqPoly, Place, RatFunc};
use crate::groupring::{CoeffRing, GroupRingElem};
use crate::intmat::{self, Mat};

/// A unit written as constant * prod (monic irreducible)^exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitExpr {
    pub constant: u32,
    /// (coefficients low to high of a monic irreducible, exponent)
    pub factors: Vec<(Vec<u32>, i64)>,
}

impl UnitExpr {
    pub fn to_ratfunc(&self, q: u32) -> Result<RatFunc> {
        if self.constant % q == 0 {
            return Err(Error::InvalidInput("unit with zero constant".into()));
        }
        let mut x = RatFunc::poly(FqPoly::constant(q, self.constant % q));
        for (c, e) in &self.factors {
            let p = FqPoly::new(q, c.clone());
            x = x.mul(&RatFunc::poly(p).pow(*e)?);
        }
        Ok(x)
    }

    pub fn from_ratfunc(u: &RatFunc) -> Result<Self> {
        let q = u.q();
        let c = crate::groupring::ModPow::new(q as u64, 1)?;
        let lead = c.inv(u.den().lead() as u64).expect("nonzero") * u.num().lead() as u64 % q as u64;
        let mut factors = Vec::new();
        for (w, k) in u.divisor()? {
            if let Place::Finite(p) = w {
                factors.push((p.coeffs().to_vec(), k));
            }
        }
        Ok(UnitExpr { constant: lead as u32, factors })
    }
}

/// Residue of a unit at v in F_v^*, as a polynomial mod v (a constant at infinity).
fn residue_at(u: &RatFunc, v: &Place) -> Result<FqPoly> {
    if u.ord(v)? != 0 {
        return Err(Error::InvalidInput(format!("{u} is not a unit at {v}")));
    }
    let q = u.q();
    match v {
        Place::Infinity => {
            let m = crate::groupring::ModPow::new(q as u64, 1)?;
            let inv = m.inv(u.den().lead() as u64).expect("nonzero");
            Ok(FqPoly::constant(q, (u.num().lead() as u64 * inv % q as u64) as u32))
        }
        Place::Finite(p) => {
            let inv = u.den().inv_mod(p).ok_or_else(|| Error::Internal("non-unit".into()))?;
            Ok(u.num().mul_mod(&inv, p))
        }
    }
}

/// Discrete logarithm table of F_v^*.
struct DiscreteLog {
    order: u64,
    table: HashMap<FqPoly, u64>,
}

impl DiscreteLog {
    fn new(q: u32, v: &Place) -> Result<Self> {
        let modulus = match v {
            Place::Infinity => FqPoly::t(q),
            Place::Finite(p) => p.clone(),
        };
        let d = modulus.deg() as u32;
        let order = (q as u64).pow(d) - 1;
        if order > 1 << 20 {
            return Err(Error::OutOfScope(format!("residue field at {v} too large")));
        }
        let primes: Vec<u64> = prime_factors(order);
        for idx in 1..=order {
            let mut c = vec![0u32; d as usize];
            let mut x = idx;
            for slot in c.iter_mut() {
                *slot = (x % q as u64) as u32;
                x /= q as u64;
            }
            let g = FqPoly::new(q, c);
            if primes.iter().all(|&l| !g.pow_mod(order / l, &modulus).is_one()) {
                let mut table = HashMap::with_capacity(order as usize);
                let mut x = FqPoly::one(q);
                for k in 0..order {
                    table.insert(x.clone(), k);
                    x = x.mul_mod(&g, &modulus);
                }
                return Ok(DiscreteLog { order, table });
            }
        }
        Err(Error::Internal(format!("no generator of F_v^* at {v}")))
    }

    fn log(&self, x: &FqPoly) -> Result<u64> {
        self.table.get(x).copied().ok_or_else(|| Error::Internal("discrete log of a non-unit".into()))
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// U(k) = (S,T)-units of the base field with its class number h_{k,S,T}.
#[derive(Clone, Debug)]
pub struct UnitLattice {
    pub q: u32,
    pub s: Vec<Place>,
    pub t: Vec<Place>,
    pub basis: Vec<RatFunc>,
    pub h: u64,
}

fn validate(q: u32, s: &[Place], t: &[Place]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::InvalidInput("S is empty".into()));
    }
    if t.is_empty() {
        return Err(Error::InvalidInput("T is empty: torsion would survive".into()));
    }
    if let Some(v) = t.iter().find(|v| s.contains(v)) {
        return Err(Error::InvalidInput(format!("{v} lies in both S and T")));
    }
    for v in s.iter().chain(t) {
        if let Place::Finite(p) = v {
            if p.q() != q {
                return Err(Error::InvalidInput(format!("{v} is over the wrong field")));
            }
        }
    }
    Ok(())
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The (S,T)-unit lattice of k and h_{k,S,T}, from the exact sequence
/// U -> O_S^* -> prod_T F_v^* -> Pic_T -> Pic -> 0.
pub fn sunit_lattice(q: u32, s: &[Place], t: &[Place]) -> Result<UnitLattice> {
    crate::fqpoly::check_prime(q)?;
    validate(q, s, t)?;
    let sfin: Vec<FqPoly> = s.iter().filter_map(|v| v.poly().cloned()).collect();
    let inf_in_s = s.contains(&Place::Infinity);
    let logs: Vec<DiscreteLog> = t.iter().map(|v| DiscreteLog::new(q, v)).collect::<Result<_>>()?;
    // generators of O_S^*: a generating constant, then the finite places
    let consts = DiscreteLog::new(q, &Place::Finite(FqPoly::t(q)))?;
    let c0 = consts.table.iter().find(|(_, &k)| k == 1.min(consts.order - 1)).map(|(x, _)| x.clone()).unwrap();
    let mut gens: Vec<RatFunc> = vec![RatFunc::poly(c0)];
    gens.extend(sfin.iter().map(|p| RatFunc::poly(p.clone())));
    let k = sfin.len();
    let ncols = t.len() + usize::from(!inf_in_s);
    let mut rows: Mat = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let mut row = Vec::with_capacity(ncols);
        for (v, dl) in t.iter().zip(&logs) {
            row.push(dl.log(&residue_at(g, v)?)? as i128);
        }
        if !inf_in_s {
            row.push(if gi == 0 { 0 } else { sfin[gi - 1].deg() as i128 });
        }
        rows.push(row);
    }
    for (i, dl) in logs.iter().enumerate() {
        let mut row = vec![0i128; ncols];
        row[i] = dl.order as i128;
        rows.push(row);
    }
    let ker = intmat::left_kernel(&rows, ncols)?;
    let proj: Mat = ker.iter().map(|r| r[1..=k].to_vec()).collect();
    let lattice = if k == 0 { vec![] } else { intmat::hnf(&proj, k)? };
    // cokernel of O_S^* -> prod F_v^*: the degree column (if any) only
    // restricts which generators count, so work with the degree-zero lattice
    let deg_zero: Mat = if inf_in_s {
        intmat::identity(k)
    } else {
        let degs: Mat = sfin.iter().map(|p| vec![p.deg() as i128]).collect();
        if k == 0 { vec![] } else { intmat::left_kernel(&degs, 1)? }
    };
    let mut img: Mat = vec![rows[0][..t.len()].to_vec()];
    for d in &deg_zero {
        let mut row = vec![0i128; t.len()];
        for (i, &a) in d.iter().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                *slot += a * rows[i + 1][c];
            }
        }
        img.push(row);
    }
    for (i, dl) in logs.iter().enumerate() {
        let mut row = vec![0i128; t.len()];
        row[i] = dl.order as i128;
        img.push(row);
    }
    let sm = intmat::smith(&img, t.len())?;
    let coker: i128 = sm.diag.iter().map(|d| d.abs()).product();
    let pic: i128 = if inf_in_s { 1 } else { sfin.iter().fold(0, |g, p| gcd(g, p.deg() as i128)) };
    if pic == 0 {
        return Err(Error::InvalidInput("S without finite places and without infinity".into()));
    }
    let h = u64::try_from(coker * pic).map_err(|_| Error::Overflow("class number"))?;
    // attach the constant that makes each basis element 1 at T
    let mut basis = Vec::with_capacity(lattice.len());
    for a in &lattice {
        let mut x = RatFunc::poly(FqPoly::one(q));
        for (p, &e) in sfin.iter().zip(a) {
            x = x.mul(&RatFunc::poly(p.clone()).pow(e as i64)?);
        }
        let one = RatFunc::poly(FqPoly::one(q));
        let c = (1..q)
            .map(|c| x.mul(&RatFunc::poly(FqPoly::constant(q, c))))
            .find(|y| t.iter().all(|v| y.matches_at(&one, v, 1).unwrap_or(false)))
            .ok_or_else(|| Error::Internal("no constant normalizes a kernel vector".into()))?;
        basis.push(c);
    }
    let lat = UnitLattice { q, s: s.to_vec(), t: t.to_vec(), basis, h };
    lat.verify()?;
    Ok(lat)
}

impl UnitLattice {
    /// A supplied basis, re-verified: S-units, 1 at T, and of index one in
    /// the computed lattice.
    pub fn supplied(q: u32, s: &[Place], t: &[Place], units: Vec<RatFunc>) -> Result<Self> {
        let auto = sunit_lattice(q, s, t)?;
        if units.len() != auto.rank() {
            return Err(Error::InvalidInput(format!("{} units supplied, rank is {}", units.len(), auto.rank())));
        }
        let lat = UnitLattice { q, s: s.to_vec(), t: t.to_vec(), basis: units, h: auto.h };
        lat.verify()?;
        let places: Vec<Place> = s[1..].to_vec();
        let a = intmat::det(&lat.degree_matrix(&places)?)?;
        let b = intmat::det(&auto.degree_matrix(&places)?)?;
        if a.abs() != b.abs() {
            return Err(Error::InvalidInput("supplied units do not form a basis of U".into()));
        }
        Ok(lat)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Invariants: S-units, congruent to 1 at T, degrees summing to zero,
    /// rank #S - 1.
    pub fn verify(&self) -> Result<()> {
        if self.basis.len() + 1 != self.s.len() {
            return Err(Error::Internal(format!("rank {} with #S = {}", self.basis.len(), self.s.len())));
        }
        let one = RatFunc::poly(FqPoly::one(self.q));
        for u in &self.basis {
            let mut total = 0i64;
            for (w, k) in u.divisor()? {
                if !self.s.contains(&w) {
                    return Err(Error::InvalidInput(format!("{u} has a zero or pole at {w} outside S")));
                }
                total += k * w.degree() as i64;
            }
            if total != 0 {
                return Err(Error::Internal(format!("degrees of {u} do not sum to zero")));
            }
            for v in &self.t {
                if !u.matches_at(&one, v, 1)? {
                    return Err(Error::InvalidInput(format!("{u} is not 1 at {v}")));
                }
            }
        }
        Ok(())
    }

    /// deg_{w_i}(u_j) for the given places (rows) and the basis (columns).
    pub fn degree_matrix(&self, places: &[Place]) -> Result<Mat> {
        places
            .iter()
            .map(|w| self.basis.iter().map(|u| Ok(u.ord(w)? as i128 * w.degree() as i128)).collect())
            .collect()
    }

    /// Orders the basis so that (-1)^r det(deg_{w_i}(u_j)) > 0, the sign of
    /// det(log|u_j|_{w_i}); inverts u_1 if needed.
    pub fn orient(&mut self, places: &[Place]) -> Result<()> {
        if places.len() != self.rank() {
            return Err(Error::InvalidInput("orientation needs r places".into()));
        }
        if self.rank() == 0 {
            return Ok(());
        }
        let d = intmat::det(&self.degree_matrix(places)?)?;
        if d == 0 {
            return Err(Error::InvalidInput("regulator places are dependent".into()));
        }
        let sign = if self.rank() % 2 == 0 { d } else { -d };
        if sign < 0 {
            self.basis[0] = self.basis[0].inv()?;
        }
        Ok(())
    }

    /// Classical regulator det(deg_{w_i}(u_j)) with Gamma trivial.
    pub fn classical_regulator(&self, places: &[Place]) -> Result<i128> {
        intmat::det(&self.degree_matrix(places)?)
    }
}

/// Determinant over a commutative group ring by expansion along permutations.
pub fn iota_eval<R: CoeffRing>(m: &[Vec<GroupRingElem<R>>], group: &FinAbGroup, ring: &R) -> Result<GroupRingElem<R>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Mismatch("determinant of a non-square matrix".into()));
    }
    let mut acc = GroupRingElem::zero(group, ring);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1i64;
    loop {
        let mut term = GroupRingElem::one(group, ring);
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&m[i][j])?;
        }
        acc = if sign > 0 { acc.add(&term)? } else { acc.sub(&term)? };
        if !next_permutation(&mut perm, &mut sign) {
            break;
        }
    }
    Ok(acc)
}

/// Lexicographic successor, tracking the sign.
fn next_permutation(p: &mut [usize], sign: &mut i64) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    *sign = -*sign;
    let tail = &mut p[i..];
    let swaps = tail.len() / 2;
    tail.reverse();
    if swaps % 2 == 1 {
        *sign = -*sign;
    }
    true
}

/// Z_(p)-combination of wedge monomials u_{i_1} ^ ... ^ u_{i_n}, indices
/// strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeElem {
    pub n: usize,
    pub terms: BTreeMap<Vec<usize>, BigRational>,
}

impl WedgeElem {
    pub fn zero(n: usize) -> Self {
        WedgeElem { n, terms: BTreeMap::new() }
    }

    /// c * u_{idx[0]} ^ ... ^ u_{idx[n-1]}, normalized.
    pub fn monomial(idx: &[usize], c: BigRational) -> Self {
        let mut v = idx.to_vec();
        let mut sign = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        let mut out = WedgeElem::zero(idx.len());
        if v.windows(2).any(|w| w[0] == w[1]) || c.is_zero() {
            return out;
        }
        out.terms.insert(v, if sign < 0 { -c } else { c });
        out
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::Mismatch("wedge degrees differ".into()));
        }
        let mut out = self.clone();
        for (k, c) in &o.terms {
            let e = out.terms.entry(k.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = WedgeElem::zero(self.n);
        if !c.is_zero() {
            for (k, v) in &self.terms {
                out.terms.insert(k.clone(), v * c);
            }
        }
        out
    }

    /// Every coefficient has denominator prime to p.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.terms.values().all(|c| (c.denom() % &p).is_zero().then_some(()).is_none())
    }

    /// iota(phi_1 ^ ... ^ phi_n)(self) with phi_i(u_j) = values[i][j] in Q.
    pub fn evaluate(&self, values: &[Vec<BigRational>]) -> Result<BigRational> {
        if values.len() != self.n {
            return Err(Error::Mismatch("functional count".into()));
        }
        let mut acc = BigRational::zero();
        for (idx, c) in &self.terms {
            let m: Vec<Vec<BigRational>> = values.iter().map(|row| idx.iter().map(|&j| row[j].clone()).collect()).collect();
            acc += c * rational_det(m);
        }
        Ok(acc)
    }
}

fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        let pv = m[k][k].clone();
        det *= &pv;
        for i in k + 1..n {
            let f = &m[i][k] / &pv;
            for j in k..n {
                let sub = &f * &m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}

/// r_chi = sum over v in S of [chi trivial on D_v] - [chi trivial].
pub fn r_chi(gamma: &FinAbGroup, chi: &Character, decomps: &[Subgroup]) -> usize {
    let trivial_on = |d: &Subgroup| d.members.iter().all(|&x| chi.exp_at(gamma, x) == 0);
    let n = decomps.iter().filter(|d| trivial_on(d)).count();
    n - usize::from(chi.is_trivial())
}

/// The same dimension from the permutation character of Gamma on S(K):
/// <chi, Ind 1> summed over places, minus the trivial part.
pub fn r_chi_oracle(gamma: &FinAbGroup, chi: &Character, decomps: &[Subgroup]) -> Result<usize> {
    let level = chi.level;
    let mut acc = CycInt::zero(level);
    for d in decomps {
        let index = (gamma.order() / d.order()) as i64;
        for &x in &d.members {
            let conj = CycInt::zeta_pow(level, -(chi.exp_at(gamma, x) as i64));
            acc = acc.add(&conj.scale(&BigInt::from(index)));
        }
    }
    let total = acc.div_exact(&BigInt::from(gamma.order()))?;
    let v = total.as_rational().ok_or_else(|| Error::Internal("eigenspace dimension is irrational".into()))?;
    let v = i64::try_from(v).map_err(|_| Error::Overflow("eigenspace dimension"))?;
    usize::try_from(v - i64::from(chi.is_trivial())).map_err(|_| Error::Internal("negative eigenspace dimension".into()))
}

/// The idempotent sum of e_chi over chi with r_chi <= n, in Q[Gamma].
pub fn st_projector(gamma: &FinAbGroup, decomps: &[Subgroup], n: usize) -> Result<Vec<BigRational>> {
    let chars: Vec<Character> = characters(gamma).into_iter().filter(|c| r_chi(gamma, c, decomps) <= n).collect();
    let order = BigInt::from(gamma.order());
    (0..gamma.order())
        .map(|x| {
            let mut acc = CycInt::zero(gamma.exponent());
            for chi in &chars {
                acc = acc.add(&CycInt::zeta_pow(gamma.exponent(), -(chi.exp_at(gamma, x) as i64)));
            }
            let v = acc.as_rational().ok_or_else(|| Error::Internal("projector is not rational".into()))?;
            Ok(BigRational::new(v, order.clone()))
        })
        .collect()
}

/// Projection of epsilon (with trivial Gamma-action) into Lambda^n_{S,T}:
/// the coefficient of the identity of the projector, which for a trivial
/// action is the only one that survives.
pub fn lambda_st_project(eps: &WedgeElem, gamma: &FinAbGroup, decomps: &[Subgroup]) -> Result<WedgeElem> {
    let e = st_projector(gamma, decomps, eps.n)?;
    let total: BigRational = e.iter().fold(BigRational::zero(), |a, b| a + b);
    Ok(eps.scale(&total))
}

/// Whether the absolute value of a rational is p-integral and nonzero mod p.
pub fn is_p_unit(x: &BigRational, p: u64) -> bool {
    let p = BigInt::from(p);
    !(x.numer().abs() % &p).is_zero() && !(x.denom() % &p).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{Integers, ZElem};
    use proptest::prelude::*;

    fn fin(q: u32, c: &[u32]) -> Place {
        Place::Finite(FqPoly::new(q, c.to_vec()))
    }

    fn rat(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    #[test]
    fn base_configs() {
        let lat = sunit_lattice(3, &[Place::Infinity, fin(3, &[0, 1])], &[fin(3, &[2, 1])]).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.h, 1);
        let t = RatFunc::poly(FqPoly::t(3));
        assert!(lat.basis[0] == t || lat.basis[0] == t.inv().unwrap());
        let lat = sunit_lattice(3, &[Place::Infinity], &[fin(3, &[0, 1])]).unwrap();
        assert_eq!((lat.rank(), lat.h), (0, 1));
        // q = 2: no torsion to kill
        let lat = sunit_lattice(2, &[Place::Infinity, fin(2, &[0, 1])], &[fin(2, &[1, 1])]).unwrap();
        assert_eq!(lat.rank(), 1);
    }

    #[test]
    fn class_numbers() {
        // S = {inf}, T = {P} of degree 2: F_9^* / F_3^* has order 4
        let lat = sunit_lattice(3, &[Place::Infinity], &[fin(3, &[1, 0, 1])]).unwrap();
        assert_eq!(lat.h, 4);
        // S = {inf, t}, T = {t + 1, t + 2}: t -> (1, 2) and constants
        let lat = sunit_lattice(3, &[Place::Infinity, fin(3, &[0, 1])], &[fin(3, &[1, 1]), fin(3, &[2, 1])]).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.h, 1);
        // infinity outside S: Hayes configuration
        let lat = sunit_lattice(3, &[fin(3, &[0, 1]), fin(3, &[1, 1])], &[fin(3, &[2, 1])]).unwrap();
        assert_eq!(lat.rank(), 1);
        let u = &lat.basis[0];
        let expect = RatFunc::new(FqPoly::new(3, vec![0, 2]), FqPoly::new(3, vec![1, 1])).unwrap();
        assert!(*u == expect || *u == expect.inv().unwrap());
    }

    #[test]
    fn rejections() {
        assert!(sunit_lattice(3, &[Place::Infinity], &[]).is_err());
        assert!(sunit_lattice(3, &[Place::Infinity], &[Place::Infinity]).is_err());
    }

    #[test]
    fn orientation() {
        let s = [Place::Infinity, fin(3, &[0, 1])];
        let mut lat = sunit_lattice(3, &s, &[fin(3, &[2, 1])]).unwrap();
        lat.orient(&s[1..]).unwrap();
        // (-1)^1 deg_t(u) > 0 forces u = 1/t
        assert_eq!(lat.basis[0], RatFunc::poly(FqPoly::t(3)).inv().unwrap());
        let s3 = [Place::Infinity, fin(3, &[0, 1]), fin(3, &[1, 1])];
        let mut lat = sunit_lattice(3, &s3, &[fin(3, &[2, 1])]).unwrap();
        lat.orient(&s3[1..]).unwrap();
        assert!(lat.classical_regulator(&s3[1..]).unwrap() > 0);
    }

    #[test]
    fn unit_expressions_round_trip() {
        let s = [Place::Infinity, fin(3, &[0, 1]), fin(3, &[1, 1])];
        let lat = sunit_lattice(3, &s, &[fin(3, &[2, 1])]).unwrap();
        for u in &lat.basis {
            let e = UnitExpr::from_ratfunc(u).unwrap();
            assert_eq!(&e.to_ratfunc(3).unwrap(), u);
        }
        let again = UnitLattice::supplied(3, &s, &[fin(3, &[2, 1])], lat.basis.clone()).unwrap();
        assert_eq!(again.h, lat.h);
        let bad = vec![lat.basis[0].pow(2).unwrap(), lat.basis[1].clone()];
        assert!(UnitLattice::supplied(3, &s, &[fin(3, &[2, 1])], bad).is_err());
    }

    #[test]
    fn determinants() {
        let g = FinAbGroup::cyclic(3);
        let e = |c: &[i64]| ZElem::from_ints(&g, c.to_vec()).unwrap();
        assert_eq!(iota_eval::<Integers>(&[], &g, &Integers).unwrap(), e(&[1, 0, 0]));
        let m = vec![vec![e(&[0, 1, 0]), e(&[1, 0, 0])], vec![e(&[2, 0, 0]), e(&[0, 0, 1])]];
        // [g][g^2] - 2 = 1 - 2
        assert_eq!(iota_eval(&m, &g, &Integers).unwrap(), e(&[-1, 0, 0]));
        let swapped = vec![m[1].clone(), m[0].clone()];
        assert_eq!(iota_eval(&swapped, &g, &Integers).unwrap(), e(&[1, 0, 0]));
    }

    #[test]
    fn wedges() {
        let w = WedgeElem::monomial(&[1, 0], rat(1));
        assert_eq!(w, WedgeElem::monomial(&[0, 1], rat(-1)));
        assert!(WedgeElem::monomial(&[1, 1], rat(1)).terms.is_empty());
        let vals = vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]];
        assert_eq!(WedgeElem::monomial(&[0, 1], rat(1)).evaluate(&vals).unwrap(), rat(-2));
        assert_eq!(w.evaluate(&vals).unwrap(), rat(2));
        let half = WedgeElem::monomial(&[0, 1], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert!(half.is_p_integral(3));
        assert!(!half.is_p_integral(2));
    }

    #[test]
    fn eigenspace_dimensions() {
        let g = FinAbGroup::cyclic(3);
        let whole = Subgroup::whole(&g);
        let triv = Subgroup::trivial(&g);
        // all of S split: r_chi = #S for nontrivial chi
        let split = vec![triv.clone(), triv.clone(), triv.clone()];
        for chi in characters(&g) {
            let r = r_chi(&g, &chi, &split);
            assert_eq!(r, if chi.is_trivial() { 2 } else { 3 });
            assert_eq!(r_chi_oracle(&g, &chi, &split).unwrap(), r);
        }
        let mixed = vec![whole.clone(), triv, whole];
        for chi in characters(&g) {
            assert_eq!(r_chi_oracle(&g, &chi, &mixed).unwrap(), r_chi(&g, &chi, &mixed));
        }
        // Gamma trivial: r = #S - 1
        let t = FinAbGroup::trivial();
        let d = vec![Subgroup::whole(&t); 3];
        assert_eq!(r_chi(&t, &characters(&t)[0], &d), 2);
        let eps = WedgeElem::monomial(&[0], rat(1));
        assert_eq!(lambda_st_project(&eps, &t, &vec![Subgroup::whole(&t); 2]).unwrap(), eps);
        assert!(lambda_st_project(&eps, &t, &d).unwrap().terms.is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn two_by_two_matches_expansion(a in -5i64..5, b in -5i64..5, c in -5i64..5, d in -5i64..5) {
            let vals = vec![vec![rat(a), rat(b)], vec![rat(c), rat(d)]];
            let w = WedgeElem::monomial(&[0, 1], rat(1));
            prop_assert_eq!(w.evaluate(&vals).unwrap(), rat(a * d - b * c));
        }

        #[test]
        fn unit_lattice_invariants(tdeg in 1usize..3, tidx in 0usize..3) {
            let ts = crate::fqpoly::irreducibles(3, tdeg);
            let tp = ts[tidx % ts.len()].clone();
            prop_assume!(tp != FqPoly::t(3) && tp != FqPoly::new(3, vec![1, 1]));
            let s = [Place::Infinity, fin(3, &[0, 1]), fin(3, &[1, 1])];
            let lat = sunit_lattice(3, &s, &[Place::Finite(tp)]).unwrap();
            prop_assert_eq!(lat.rank(), 2);
            prop_assert!(lat.verify().is_ok());
            prop_assert!(lat.h >= 1);
        }
    }
}
