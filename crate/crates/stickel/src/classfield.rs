//! Explicit abelian extensions of k = F_q(t): quotients of
//! (A/M)^* x Z/n, where (A/M)^* is the Galois group of the Carlitz
//! cyclotomic field of conductor M and Z/n that of the constant field
//! extension of degree n. Frobenius elements, inertia and decomposition
//! groups, and local Artin maps by weak approximation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{from_cayley, FinAbGroup, Hom, Product, Subgroup};
use crate::error::{Error, Result};
use crate::fqpoly::{factor, weak_approximation, Constraint, FqPoly, Place, RatFunc};

/// Serializable description of a layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    /// Carlitz conductor as base polynomial m (coefficients low to high) and
    /// depth j, giving M = m^j.
    #[serde(default)]
    pub carlitz: Option<CarlitzSpec>,
    /// Degree of the constant field extension (1 for none).
    #[serde(default = "one")]
    pub constant_degree: u64,
    /// Quotient by the image of F_q^*, making infinity unramified.
    #[serde(default)]
    pub real: bool,
    /// Further residues mod M whose classes are quotiented out.
    #[serde(default)]
    pub kill: Vec<Vec<u32>>,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarlitzSpec {
    pub m: Vec<u32>,
    #[serde(default = "one_u32")]
    pub depth: u32,
}

fn one_u32() -> u32 {
    1
}

impl LayerSpec {
    pub fn constant(n: u64) -> Self {
        LayerSpec { carlitz: None, constant_degree: n, real: false, kill: vec![] }
    }

    pub fn carlitz(m: &[u32], depth: u32) -> Self {
        LayerSpec { carlitz: Some(CarlitzSpec { m: m.to_vec(), depth }), constant_degree: 1, real: false, kill: vec![] }
    }

    pub fn real(mut self) -> Self {
        self.real = true;
        self
    }
}

/// A finite abelian extension L/k with G = Gal(L/k).
#[derive(Clone, Debug)]
pub struct Layer {
    q: u32,
    spec: LayerSpec,
    modulus: FqPoly,
    constant_degree: u64,
    units: FinAbGroup,
    residues: Vec<FqPoly>,
    lookup: HashMap<FqPoly, usize>,
    full: Product,
    quot: Hom,
    /// (place, exponent) factorization of M
    bad: Vec<(FqPoly, u32)>,
}

impl Layer {
    pub fn new(q: u32, spec: &LayerSpec) -> Result<Self> {
        crate::fqpoly::check_prime(q)?;
        if spec.constant_degree == 0 {
            return Err(Error::InvalidInput("constant degree 0".into()));
        }
        let modulus = match &spec.carlitz {
            None => FqPoly::one(q),
            Some(c) => {
                let m = FqPoly::new(q, c.m.clone());
                if !m.is_monic() || m.deg() == 0 || c.depth == 0 {
                    return Err(Error::InvalidInput(format!("Carlitz modulus {m} must be monic of positive degree")));
                }
                m.pow(c.depth as u64)
            }
        };
        let d = modulus.deg();
        if (q as u64).pow(d as u32) > 1 << 20 {
            return Err(Error::OutOfScope(format!("(A/M)^* too large for M = {modulus}")));
        }
        let mut residues = Vec::new();
        for idx in 0..(q as u64).pow(d as u32) {
            let mut c = vec![0u32; d];
            let mut x = idx;
            for slot in c.iter_mut() {
                *slot = (x % q as u64) as u32;
                x /= q as u64;
            }
            let f = FqPoly::new(q, c);
            if d == 0 || f.gcd(&modulus).is_one() {
                residues.push(f);
            }
        }
        let one = FqPoly::one(q).rem(&modulus);
        let (units, index) = from_cayley(&residues, &one, |a, b| a.mul_mod(b, &modulus))?;
        let lookup: HashMap<FqPoly, usize> = residues.iter().cloned().zip(index.iter().copied()).collect();
        let mut ordered = vec![FqPoly::zero(q); units.order()];
        for (f, &i) in residues.iter().zip(&index) {
            ordered[i] = f.clone();
        }
        let full = Product::new(vec![units.clone(), FinAbGroup::cyclic(spec.constant_degree)])?;
        let mut killed = Vec::new();
        let unit_index = |f: &FqPoly| -> Result<usize> {
            lookup
                .get(&f.rem(&modulus))
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("{f} is not a unit mod {modulus}")))
        };
        if spec.real {
            for c in 1..q {
                killed.push(full.join(&[unit_index(&FqPoly::constant(q, c))?, 0]));
            }
        }
        for k in &spec.kill {
            killed.push(full.join(&[unit_index(&FqPoly::new(q, k.clone()))?, 0]));
        }
        let sub = Subgroup::generated(full.group(), &killed);
        let quot = full.group().quotient(&sub)?;
        let bad = if d == 0 { vec![] } else { factor(&modulus).1 };
        Ok(Layer {
            q,
            spec: spec.clone(),
            modulus,
            constant_degree: spec.constant_degree,
            units,
            residues: ordered,
            lookup,
            full,
            quot,
            bad,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn spec(&self) -> &LayerSpec {
        &self.spec
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quot.dst
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    pub fn constant_degree(&self) -> u64 {
        self.constant_degree
    }

    /// Residue of a unit of (A/M)^* for an element index.
    pub fn residue(&self, unit: usize) -> &FqPoly {
        &self.residues[unit]
    }

    /// Image in G of (f mod M, d mod n) for f coprime to M.
    pub fn class_of(&self, f: &FqPoly, d: i64) -> Result<usize> {
        let u = *self
            .lookup
            .get(&f.rem(&self.modulus))
            .ok_or_else(|| Error::Ramified(format!("{f} is not prime to {}", self.modulus)))?;
        let c = d.rem_euclid(self.constant_degree as i64) as usize;
        Ok(self.quot.apply(self.full.join(&[u, c])))
    }

    /// Frobenius class [f] of a monic polynomial prime to M (multiplicative in f).
    pub fn frobenius_poly(&self, f: &FqPoly) -> Result<usize> {
        self.class_of(f, f.deg() as i64)
    }

    fn constants_image(&self) -> Vec<usize> {
        (1..self.q).map(|c| self.class_of(&FqPoly::constant(self.q, c), 0).expect("unit")).collect()
    }

    pub fn is_ramified(&self, v: &Place) -> bool {
        match v {
            Place::Infinity => self.constants_image().iter().any(|&x| x != 0),
            Place::Finite(p) => self.bad.iter().any(|(b, _)| b == p),
        }
    }

    pub fn ramified_places(&self) -> Vec<Place> {
        let mut out: Vec<Place> = self.bad.iter().map(|(p, _)| Place::Finite(p.clone())).collect();
        if self.is_ramified(&Place::Infinity) {
            out.push(Place::Infinity);
        }
        out
    }

    pub fn frobenius(&self, v: &Place) -> Result<usize> {
        if self.is_ramified(v) {
            return Err(Error::Ramified(format!("{v} ramifies in the layer")));
        }
        match v {
            Place::Infinity => self.class_of(&FqPoly::one(self.q), 1),
            Place::Finite(p) => self.frobenius_poly(p),
        }
    }

    /// M = P^e M' with P prime to M'.
    fn split_modulus(&self, p: &FqPoly) -> (u32, FqPoly) {
        self.modulus.strip(p)
    }

    pub fn inertia(&self, v: &Place) -> Subgroup {
        let g = self.group();
        match v {
            Place::Infinity => Subgroup::generated(g, &self.constants_image()),
            Place::Finite(p) => {
                let (e, rest) = self.split_modulus(p);
                if e == 0 {
                    return Subgroup::trivial(g);
                }
                // units congruent to 1 mod M'
                let gens: Vec<usize> = (0..self.units.order())
                    .filter(|&u| rest.deg() == 0 || self.residues[u].rem(&rest).is_one())
                    .map(|u| self.quot.apply(self.full.join(&[u, 0])))
                    .collect();
                Subgroup::generated(g, &gens)
            }
        }
    }

    pub fn decomposition(&self, v: &Place) -> Result<Subgroup> {
        let g = self.group();
        let mut gens = self.inertia(v).gens.clone();
        match v {
            Place::Infinity => gens.push(self.class_of(&FqPoly::one(self.q), 1)?),
            Place::Finite(p) => {
                let (e, rest) = self.split_modulus(p);
                if e == 0 {
                    gens.push(self.frobenius(v)?);
                } else {
                    // x = P mod M', x = 1 mod P^e
                    let pe = p.pow(e as u64);
                    let a = crt(p, &rest, &FqPoly::one(self.q), &pe)?;
                    gens.push(self.class_of(&a, p.deg() as i64)?);
                }
            }
        }
        Ok(Subgroup::generated(g, &gens))
    }

    /// Local precision (in powers of the uniformizer) at which units are norms.
    pub fn norm_precision(&self, v: &Place) -> u32 {
        match v {
            Place::Infinity => 2,
            Place::Finite(p) => self.split_modulus(p).0 + 1,
        }
    }

    /// The local Artin map at v applied to u.
    pub fn artin_local(&self, u: &RatFunc, v: &Place) -> Result<usize> {
        if u.is_zero() {
            return Err(Error::InvalidInput("Artin map of zero".into()));
        }
        let g = self.group();
        if !self.is_ramified(v) {
            return Ok(g.mul_int(self.frobenius(v)?, u.ord(v)? as i128));
        }
        let mut cons = vec![Constraint { place: v.clone(), target: u.clone(), precision: self.norm_precision(v) }];
        for w in self.ramified_places() {
            if &w != v {
                let precision = self.norm_precision(&w);
                cons.push(Constraint { place: w, target: RatFunc::poly(FqPoly::one(self.q)), precision });
            }
        }
        let approx = weak_approximation(&cons)?;
        let mut acc = 0;
        for (w, k) in &approx.outside {
            acc = g.add(acc, g.mul_int(self.frobenius(w)?, -(*k as i128)));
        }
        Ok(acc)
    }

    /// Global reciprocity: the sum of all local symbols of u is trivial.
    /// `s` must contain the ramified places and the support of u is allowed
    /// to leave it.
    pub fn reciprocity_defect(&self, u: &RatFunc, s: &[Place]) -> Result<usize> {
        let g = self.group();
        for w in self.ramified_places() {
            if !s.contains(&w) {
                return Err(Error::Ramified(format!("{w} ramifies but is outside S")));
            }
        }
        let mut acc = 0;
        for v in s {
            acc = g.add(acc, self.artin_local(u, v)?);
        }
        for (w, k) in u.divisor()? {
            if !s.contains(&w) {
                acc = g.add(acc, g.mul_int(self.frobenius(&w)?, k as i128));
            }
        }
        Ok(acc)
    }

    /// Image in G of the units congruent to 1 mod d, for d dividing M.
    pub fn units_congruent_one(&self, d: &FqPoly) -> Subgroup {
        let gens: Vec<usize> = (0..self.units.order())
            .filter(|&u| d.deg() == 0 || self.residues[u].rem(d).is_one())
            .map(|u| self.quot.apply(self.full.join(&[u, 0])))
            .collect();
        Subgroup::generated(self.group(), &gens)
    }

    /// Image in G of the constant Frobenius raised to `k`.
    pub fn constant_frobenius(&self, k: i64) -> usize {
        self.class_of(&FqPoly::one(self.q), k).expect("unit")
    }

    /// The natural surjection Gal(L/k) -> Gal(L'/k) for a sublayer L'.
    pub fn projection_to(&self, other: &Layer) -> Result<Hom> {
        if other.q != self.q || !other.modulus.divides(&self.modulus) || self.constant_degree % other.constant_degree != 0 {
            return Err(Error::InvalidInput("not a sublayer".into()));
        }
        let g = self.group();
        let mut table: Vec<Option<usize>> = vec![None; g.order()];
        for u in 0..self.units.order() {
            for c in 0..self.constant_degree {
                let x = self.quot.apply(self.full.join(&[u, c as usize]));
                let y = other.class_of(&self.residues[u], c as i64)?;
                match table[x] {
                    Some(z) if z != y => return Err(Error::InvalidInput("not a sublayer".into())),
                    _ => table[x] = Some(y),
                }
            }
        }
        let images = (0..g.factors().len()).map(|i| table[g.gen(i)].expect("surjective")).collect();
        Hom::new(g.clone(), other.group().clone(), images)
    }

    /// The Sylow p-subgroup of G.
    pub fn sylow(&self) -> Subgroup {
        let g = self.group();
        let p = self.q as u64;
        let gens: Vec<usize> = (0..g.order()).filter(|&x| is_power_of(g.element_order(x), p)).collect();
        Subgroup::generated(g, &gens)
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// x = a mod m, x = b mod n for coprime m, n.
fn crt(a: &FqPoly, m: &FqPoly, b: &FqPoly, n: &FqPoly) -> Result<FqPoly> {
    if m.deg() == 0 {
        return Ok(b.rem(n));
    }
    let mn = m.mul(n);
    let inv = n.inv_mod(m).ok_or_else(|| Error::Internal("moduli not coprime".into()))?;
    let minv = m.inv_mod(n).ok_or_else(|| Error::Internal("moduli not coprime".into()))?;
    Ok(a.mul(&inv).mul(n).add(&b.mul(&minv).mul(m)).rem(&mn))
}

/// An admissible layer: G with a chosen kernel H (a p-group) and
/// Gamma = G/H.
#[derive(Clone, Debug)]
pub struct Admissible {
    pub layer: Layer,
    pub h: Subgroup,
    /// H as an abstract group with its inclusion into G
    pub h_incl: Hom,
    /// G -> Gamma
    pub gamma: Hom,
}

impl Admissible {
    pub fn new(layer: Layer, h: Subgroup) -> Result<Self> {
        let g = layer.group().clone();
        let h_incl = h.as_group(&g)?;
        if !h_incl.src.is_p_group(layer.q() as u64) {
            return Err(Error::InvalidInput(format!("H = {:?} is not a p-group", h_incl.src.factors())));
        }
        let gamma = g.quotient(&h)?;
        Ok(Admissible { layer, h, h_incl, gamma })
    }

    /// H = G: the base field K = k.
    pub fn over_k(layer: Layer) -> Result<Self> {
        let h = Subgroup::whole(layer.group());
        Self::new(layer, h)
    }

    /// v splits completely in K iff its decomposition group lies in H.
    pub fn splits_completely(&self, v: &Place) -> Result<bool> {
        let d = self.layer.decomposition(v)?;
        Ok(d.members.iter().all(|&x| self.h.contains(x)))
    }

    /// rec_w(u) for w over v split completely in K, an element of H given as
    /// an index into h_incl.src.
    pub fn rec_in_h(&self, u: &RatFunc, v: &Place) -> Result<usize> {
        if !self.splits_completely(v)? {
            return Err(Error::OutOfScope(format!("{v} does not split completely in K")));
        }
        let x = self.layer.artin_local(u, v)?;
        self.h_incl
            .table()
            .iter()
            .position(|&y| y == x)
            .ok_or_else(|| Error::Internal("local symbol outside H".into()))
    }
}
