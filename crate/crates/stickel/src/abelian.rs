//! Finite abelian groups in invariant-factor form, homomorphisms, subgroups,
//! characters and the Fourier transform with cyclotomic-integer values.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;

pub use crate::cycint::{cyclotomic_poly, CycInt};
use crate::error::{Error, Result};
use crate::intmat::{self, Mat};

/// Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... | d_r and every d_i > 1.
/// Elements are indexed mixed-radix, first coordinate least significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Vec<u64>,
    order: usize,
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        let factors: Vec<u64> = factors.into_iter().filter(|&d| d != 1).collect();
        if factors.iter().any(|&d| d == 0) {
            return Err(Error::InvalidInput("infinite cyclic factor".into()));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidInput(format!("{factors:?} is not a divisibility chain")));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .ok_or(Error::Overflow("group order"))?;
        Ok(FinAbGroup { factors, order })
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new(), order: 1 }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("cyclic group")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Exponent (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the canonical generator of the i-th factor.
    pub fn gen(&self, i: usize) -> usize {
        self.factors[..i].iter().product::<u64>() as usize
    }

    pub fn index(&self, coords: &[i128]) -> usize {
        let mut idx = 0usize;
        let mut base = 1usize;
        for (i, &d) in self.factors.iter().enumerate() {
            let x = coords.get(i).copied().unwrap_or(0).rem_euclid(d as i128) as usize;
            idx += x * base;
            base *= d as usize;
        }
        idx
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&d| {
                let x = idx % d as usize;
                idx /= d as usize;
                x as u64
            })
            .collect()
    }

    pub fn coords_i128(&self, idx: usize) -> Vec<i128> {
        self.coords(idx).into_iter().map(|x| x as i128).collect()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut idx = 0;
        let mut base = 1;
        for &d in &self.factors {
            let d = d as usize;
            idx += ((a % d + b % d) % d) * base;
            a /= d;
            b /= d;
            base *= d;
        }
        idx
    }

    pub fn neg(&self, a: usize) -> usize {
        self.mul_int(a, -1)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul_int(&self, a: usize, k: i128) -> usize {
        let c: Vec<i128> = self.coords(a).into_iter().map(|x| x as i128 * k).collect();
        self.index(&c)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.factors
            .iter()
            .zip(self.coords(a))
            .fold(1u64, |acc, (&d, x)| acc.lcm(&(d / d.gcd(&x))))
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        let mut n = self.order as u64;
        while n % p == 0 {
            n /= p;
        }
        n == 1
    }

    /// Lattice of relations diag(d_i), in the coordinates of this group.
    pub fn relation_rows(&self) -> Mat {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| if i == j { self.factors[i] as i128 } else { 0 }).collect())
            .collect()
    }

    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        Subgroup::generated(self, gens)
    }

    /// Every subgroup, each listed once, ordered by (order, members).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut cyclic = Vec::new();
        for g in 0..self.order {
            let s = Subgroup::generated(self, &[g]);
            if seen.insert(s.members.clone()) {
                cyclic.push(s);
            }
        }
        let mut all: Vec<Subgroup> = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for c in &cyclic {
                    if c.members.iter().all(|&x| a.contains(x)) {
                        continue;
                    }
                    let mut gens = a.gens.clone();
                    gens.extend(&c.gens);
                    let s = Subgroup::generated(self, &gens);
                    if seen.insert(s.members.clone()) {
                        next.push(s.clone());
                        all.push(s);
                    }
                }
            }
            frontier = next;
        }
        all.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        all
    }

    /// The quotient map G -> G/H.
    pub fn quotient(&self, h: &Subgroup) -> Result<Hom> {
        let mut rels = self.relation_rows();
        for &g in &h.gens {
            rels.push(self.coords_i128(g));
        }
        let pres = Presentation::new(self.rank(), &rels)?;
        let images = (0..self.rank())
            .map(|i| {
                let mut e = vec![0i128; self.rank()];
                e[i] = 1;
                pres.to_group(&e)
            })
            .collect();
        Hom::new(self.clone(), pres.group.clone(), images)
    }
}

/// Z^n modulo a relation lattice, identified with a group in invariant
/// factor form through a Smith transform.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FinAbGroup,
    ambient: usize,
    q: Mat,
    keep: Vec<usize>,
    lifts: Vec<Vec<i128>>,
}

impl Presentation {
    pub fn new(ambient: usize, relations: &Mat) -> Result<Self> {
        let rels = if relations.is_empty() {
            intmat::zeros(1, ambient)
        } else {
            intmat::hnf(relations, ambient)?
        };
        let rels = if rels.is_empty() { intmat::zeros(1, ambient) } else { rels };
        let s = intmat::smith(&rels, ambient)?;
        if s.diag.iter().any(|&d| d == 0) {
            return Err(Error::InvalidInput("presentation of an infinite group".into()));
        }
        let keep: Vec<usize> = (0..ambient).filter(|&i| s.diag[i] != 1).collect();
        let group = FinAbGroup::new(keep.iter().map(|&i| s.diag[i] as u64).collect())?;
        let (_, qinv) = intmat::hnf_with_transform(&s.q, ambient)?;
        let lifts = keep.iter().map(|&i| qinv[i].clone()).collect();
        Ok(Presentation { group, ambient, q: s.q, keep, lifts })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn to_group(&self, v: &[i128]) -> usize {
        let coords: Vec<i128> = self
            .keep
            .iter()
            .map(|&j| {
                v.iter()
                    .zip(&self.q)
                    .map(|(&x, row)| x * row[j])
                    .sum::<i128>()
            })
            .collect();
        self.group.index(&coords)
    }

    /// A vector of Z^n mapping to `g`.
    pub fn lift(&self, g: usize) -> Vec<i128> {
        let c = self.group.coords(g);
        let mut v = vec![0i128; self.ambient];
        for (k, lift) in self.lifts.iter().enumerate() {
            for (slot, &x) in v.iter_mut().zip(lift) {
                *slot += c[k] as i128 * x;
            }
        }
        v
    }
}

/// Direct product, presented in invariant-factor form; `split` and `join`
/// convert to and from component tuples.
#[derive(Clone, Debug)]
pub struct Product {
    pub components: Vec<FinAbGroup>,
    pub pres: Presentation,
}

impl Product {
    pub fn new(components: Vec<FinAbGroup>) -> Result<Self> {
        let ambient: usize = components.iter().map(|g| g.rank()).sum();
        let mut rels = intmat::zeros(ambient, ambient);
        let mut k = 0;
        for g in &components {
            for &d in g.factors() {
                rels[k][k] = d as i128;
                k += 1;
            }
        }
        let pres = Presentation::new(ambient, &rels)?;
        Ok(Product { components, pres })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.pres.group
    }

    pub fn join(&self, parts: &[usize]) -> usize {
        let mut v = Vec::with_capacity(self.pres.ambient);
        for (g, &x) in self.components.iter().zip(parts) {
            v.extend(g.coords_i128(x));
        }
        self.pres.to_group(&v)
    }

    pub fn split(&self, x: usize) -> Vec<usize> {
        let v = self.pres.lift(x);
        let mut out = Vec::new();
        let mut k = 0;
        for g in &self.components {
            out.push(g.index(&v[k..k + g.rank()]));
            k += g.rank();
        }
        out
    }

    /// Canonical inclusion of the i-th component.
    pub fn inclusion(&self, i: usize) -> Result<Hom> {
        let src = self.components[i].clone();
        let images = (0..src.rank())
            .map(|j| {
                let mut parts = vec![0usize; self.components.len()];
                parts[i] = src.gen(j);
                self.join(&parts)
            })
            .collect();
        Hom::new(src, self.group().clone(), images)
    }

    /// Projection onto the i-th component.
    pub fn projection(&self, i: usize) -> Result<Hom> {
        let g = self.group().clone();
        let images = (0..g.rank()).map(|j| self.split(g.gen(j))[i]).collect();
        Hom::new(g, self.components[i].clone(), images)
    }
}

/// Homomorphism given by the images of the canonical generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    pub src: FinAbGroup,
    pub dst: FinAbGroup,
    images: Vec<usize>,
}

impl Hom {
    pub fn new(src: FinAbGroup, dst: FinAbGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != src.rank() {
            return Err(Error::Mismatch("generator image count".into()));
        }
        for (i, &y) in images.iter().enumerate() {
            let d = src.factors()[i] as i128;
            if dst.mul_int(y, d) != 0 {
                return Err(Error::InvalidInput("generator image violates a relation".into()));
            }
        }
        Ok(Hom { src, dst, images })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let images = (0..g.rank()).map(|i| g.gen(i)).collect();
        Hom { src: g.clone(), dst: g.clone(), images }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.src
            .coords(x)
            .into_iter()
            .zip(&self.images)
            .fold(0, |acc, (c, &y)| self.dst.add(acc, self.dst.mul_int(y, c as i128)))
    }

    /// Table of images of every source element.
    pub fn table(&self) -> Vec<usize> {
        (0..self.src.order()).map(|x| self.apply(x)).collect()
    }

    pub fn compose(&self, after: &Hom) -> Result<Hom> {
        if after.src != self.dst {
            return Err(Error::Mismatch("composition of homomorphisms".into()));
        }
        let images = self.images.iter().map(|&y| after.apply(y)).collect();
        Hom::new(self.src.clone(), after.dst.clone(), images)
    }

    pub fn is_surjective(&self) -> bool {
        Subgroup::generated(&self.dst, &self.images).order() == self.dst.order()
    }

    pub fn kernel(&self) -> Subgroup {
        let members: Vec<usize> = (0..self.src.order()).filter(|&x| self.apply(x) == 0).collect();
        Subgroup::from_members(&self.src, members)
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::generated(&self.dst, &self.images)
    }
}

/// Subgroup of an ambient group, stored by its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub members: Vec<usize>,
    pub gens: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn generated(g: &FinAbGroup, gens: &[usize]) -> Self {
        let mut mask = vec![false; g.order()];
        mask[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = g.add(x, s);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let members = (0..g.order()).filter(|&x| mask[x]).collect();
        let gens = gens.iter().copied().filter(|&x| x != 0).collect();
        Subgroup { members, gens, mask }
    }

    fn from_members(g: &FinAbGroup, members: Vec<usize>) -> Self {
        let mut mask = vec![false; g.order()];
        for &x in &members {
            mask[x] = true;
        }
        // a generating set: greedily add members not yet reached
        let mut gens = Vec::new();
        let mut reached = Subgroup::generated(g, &[]);
        for &x in &members {
            if !reached.contains(x) {
                gens.push(x);
                reached = Subgroup::generated(g, &gens);
            }
        }
        Subgroup { members, gens, mask }
    }

    pub fn trivial(g: &FinAbGroup) -> Self {
        Subgroup::generated(g, &[])
    }

    pub fn whole(g: &FinAbGroup) -> Self {
        let gens: Vec<usize> = (0..g.rank()).map(|i| g.gen(i)).collect();
        Subgroup::generated(g, &gens)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    /// The subgroup as a group in its own right with its inclusion map.
    pub fn as_group(&self, ambient: &FinAbGroup) -> Result<Hom> {
        // Z^k -> ambient via gens; the subgroup is Z^k / kernel
        let k = self.gens.len();
        let mut rows: Mat = self.gens.iter().map(|&x| ambient.coords_i128(x)).collect();
        rows.extend(ambient.relation_rows());
        let ker = intmat::left_kernel(&rows, ambient.rank())?;
        let rels: Mat = ker.into_iter().map(|r| r[..k].to_vec()).collect();
        let pres = Presentation::new(k, &rels)?;
        let images = (0..pres.group.rank())
            .map(|i| {
                let v = pres.lift(pres.group.gen(i));
                v.iter()
                    .zip(&self.gens)
                    .fold(0, |acc, (&c, &x)| ambient.add(acc, ambient.mul_int(x, c)))
            })
            .collect();
        Hom::new(pres.group.clone(), ambient.clone(), images)
    }

    /// Coset representatives of minimal index, and for every element of the
    /// ambient group the position of its coset.
    pub fn cosets(&self, ambient: &FinAbGroup) -> (Vec<usize>, Vec<usize>) {
        let mut which = vec![usize::MAX; ambient.order()];
        let mut reps = Vec::new();
        for x in 0..ambient.order() {
            if which[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &h in &self.members {
                which[ambient.add(x, h)] = c;
            }
        }
        (reps, which)
    }
}

/// A group built from a multiplication table on a finite set: greedy
/// generators, BFS exponent vectors, relations, Smith form. Returns the group
/// and the group index of each input element.
pub fn from_cayley<T, F>(elements: &[T], identity: &T, mul: F) -> Result<(FinAbGroup, Vec<usize>)>
where
    T: Eq + Hash + Clone,
    F: Fn(&T, &T) -> T,
{
    let pos: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let id = *pos
        .get(identity)
        .ok_or_else(|| Error::InvalidInput("identity not among the elements".into()))?;
    let n = elements.len();
    let mut gens: Vec<usize> = Vec::new();
    let mut vecs: Vec<Option<Vec<i128>>> = vec![None; n];
    let mut rels: Mat = Vec::new();
    let bfs = |gens: &[usize], vecs: &mut Vec<Option<Vec<i128>>>, rels: &mut Mat| -> Result<()> {
        let k = gens.len();
        vecs.iter_mut().for_each(|v| *v = None);
        rels.clear();
        vecs[id] = Some(vec![0; k]);
        let mut pending: Mat = Vec::new();
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let vx = vecs[x].clone().unwrap();
            for (i, &g) in gens.iter().enumerate() {
                let y = mul(&elements[x], &elements[g]);
                let yi = *pos
                    .get(&y)
                    .ok_or_else(|| Error::InvalidInput("set not closed under multiplication".into()))?;
                let mut v = vx.clone();
                v[i] += 1;
                match &vecs[yi] {
                    None => {
                        vecs[yi] = Some(v);
                        queue.push_back(yi);
                    }
                    Some(vy) => {
                        let r: Vec<i128> = v.iter().zip(vy).map(|(a, b)| a - b).collect();
                        if r.iter().any(|&x| x != 0) {
                            pending.push(r);
                        }
                        if pending.len() >= 128 {
                            pending.append(rels);
                            *rels = intmat::hnf(&pending, k)?;
                            pending.clear();
                        }
                    }
                }
            }
        }
        pending.append(rels);
        *rels = if pending.is_empty() { pending } else { intmat::hnf(&pending, k)? };
        Ok(())
    };
    bfs(&gens, &mut vecs, &mut rels)?;
    for x in 0..n {
        if vecs[x].is_none() {
            gens.push(x);
            bfs(&gens, &mut vecs, &mut rels)?;
        }
    }
    let k = gens.len();
    let pres = Presentation::new(k, &rels)?;
    if pres.group.order() != n {
        return Err(Error::InvalidInput("multiplication table is not an abelian group".into()));
    }
    let map: Vec<usize> = vecs.iter().map(|v| pres.to_group(v.as_ref().unwrap())).collect();
    Ok((pres.group, map))
}

/// Character of a group: chi(x) = zeta_N^{sum a_i x_i N/d_i}, N the exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub index: usize,
    pub exps: Vec<u64>,
    pub level: u64,
    weights: Vec<u64>,
}

impl Character {
    pub fn new(g: &FinAbGroup, index: usize) -> Self {
        let exps = g.coords(index);
        let level = g.exponent();
        let weights = exps
            .iter()
            .zip(g.factors())
            .map(|(&a, &d)| a * (level / d) % level)
            .collect();
        Character { index, exps, level, weights }
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// k with chi(x) = zeta_N^k.
    pub fn exp_at(&self, g: &FinAbGroup, x: usize) -> u64 {
        self.exp_at_coords(&g.coords(x))
    }

    fn exp_at_coords(&self, c: &[u64]) -> u64 {
        c.iter()
            .zip(&self.weights)
            .fold(0u64, |acc, (&x, &w)| (acc + x * w) % self.level)
    }

    pub fn value(&self, g: &FinAbGroup, x: usize) -> CycInt {
        CycInt::zeta_pow(self.level, self.exp_at(g, x) as i64)
    }

    /// The character chi o f of the source of f.
    pub fn pullback(&self, f: &Hom) -> Character {
        let src = &f.src;
        let n_src = src.exponent();
        let coords: Vec<i128> = f
            .images()
            .iter()
            .zip(src.factors())
            .map(|(&y, &d)| {
                let w = self.exp_at(&f.dst, y) as u128 * n_src as u128 / self.level as u128;
                (w / (n_src / d) as u128) as i128
            })
            .collect();
        Character::new(src, src.index(&coords))
    }

    /// Order of the character.
    pub fn order(&self, g: &FinAbGroup) -> u64 {
        g.element_order(self.index)
    }
}

pub fn characters(g: &FinAbGroup) -> Vec<Character> {
    (0..g.order()).map(|i| Character::new(g, i)).collect()
}

fn coords_table(g: &FinAbGroup) -> Vec<Vec<u64>> {
    (0..g.order()).map(|x| g.coords(x)).collect()
}

/// Fourier transform of an integer-coefficient element, indexed by character.
pub fn fourier_int(g: &FinAbGroup, coeffs: &[i64]) -> Vec<CycInt> {
    assert_eq!(coeffs.len(), g.order());
    let n = g.exponent();
    let table = coords_table(g);
    characters(g)
        .iter()
        .map(|chi| {
            let mut acc = vec![0i128; n as usize];
            for (c, &a) in table.iter().zip(coeffs) {
                if a != 0 {
                    acc[chi.exp_at_coords(c) as usize] += a as i128;
                }
            }
            CycInt::from_raw(n, &acc)
        })
        .collect()
}

/// Fourier transform of a cyclotomic-coefficient element. Values live at
/// level lcm(exponent, coefficient level).
pub fn fourier(g: &FinAbGroup, coeffs: &[CycInt]) -> Vec<CycInt> {
    assert_eq!(coeffs.len(), g.order());
    let m = coeffs.first().map_or(1, |c| c.level());
    let level = g.exponent().lcm(&m);
    let coeffs: Vec<CycInt> = coeffs.iter().map(|c| c.embed(level)).collect();
    let scale = (level / g.exponent()) as i64;
    let table = coords_table(g);
    characters(g)
        .iter()
        .map(|chi| {
            let mut acc = CycInt::zero(level);
            for (c, a) in table.iter().zip(&coeffs) {
                if !a.is_zero() {
                    acc.add_assign(&a.mul_zeta(chi.exp_at_coords(c) as i64 * scale));
                }
            }
            acc
        })
        .collect()
}

/// Result of the inverse transform over the fraction field: coefficient
/// g is numerators[g] / denominator.
#[derive(Clone, Debug)]
pub struct InverseFourier {
    pub numerators: Vec<CycInt>,
    pub denominator: BigInt,
    pub exact: bool,
}

impl InverseFourier {
    pub fn into_exact(self) -> Result<Vec<CycInt>> {
        if self.exact {
            Ok(self.numerators)
        } else {
            Err(Error::Inexact(format!(
                "inverse Fourier transform has denominator {}",
                self.denominator
            )))
        }
    }
}

/// Inverse transform; divides by |G| when every coefficient allows it.
pub fn inverse_fourier(g: &FinAbGroup, values: &[CycInt]) -> InverseFourier {
    assert_eq!(values.len(), g.order());
    let level = values.first().map_or(1, |v| v.level());
    let scale = (level / g.exponent()) as i64;
    let chars = characters(g);
    let table = coords_table(g);
    let order = BigInt::from(g.order());
    // each value as a raw polynomial mod x^level - 1
    let small: Option<Vec<Vec<i64>>> = values.iter().map(|v| v.to_i64s()).collect();
    let sums: Vec<CycInt> = (0..g.order())
        .map(|x| {
            let c = &table[x];
            match &small {
                Some(sv) => {
                    let mut acc = vec![0i128; level as usize];
                    for (chi, v) in chars.iter().zip(sv) {
                        let e = (level as i64 - (chi.exp_at_coords(c) as i64 * scale) % level as i64)
                            % level as i64;
                        for (i, &a) in v.iter().enumerate() {
                            if a != 0 {
                                acc[(i + e as usize) % level as usize] += a as i128;
                            }
                        }
                    }
                    CycInt::from_raw(level, &acc)
                }
                None => chars.iter().zip(values).fold(CycInt::zero(level), |acc, (chi, v)| {
                    acc.add(&v.mul_zeta(-(chi.exp_at_coords(c) as i64) * scale))
                }),
            }
        })
        .collect();
    let divided: Option<Vec<CycInt>> = sums.iter().map(|s| s.div_exact(&order).ok()).collect();
    match divided {
        Some(numerators) => InverseFourier { numerators, denominator: BigInt::from(1), exact: true },
        None => InverseFourier { numerators: sums, denominator: order, exact: false },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn character_examples() {
        let z2 = FinAbGroup::cyclic(2);
        assert_eq!(characters(&z2).len(), 2);
        let v22 = FinAbGroup::new(vec![2, 2]).unwrap();
        for chi in characters(&v22) {
            for x in 0..4 {
                let r = chi.value(&v22, x).as_rational().unwrap();
                assert!(r == BigInt::from(1) || r == BigInt::from(-1));
            }
        }
        let z4 = FinAbGroup::cyclic(4);
        for chi in characters(&z4) {
            assert!(chi.value(&z4, 1).pow(4).is_one());
        }
    }

    #[test]
    fn fourier_examples() {
        let z2 = FinAbGroup::cyclic(2);
        let f = fourier_int(&z2, &[1, 0]);
        assert!(f.iter().all(|v| v.is_one()));
        let f = fourier_int(&z2, &[5, 3]);
        assert_eq!(f[0].as_rational().unwrap(), BigInt::from(8));
        assert_eq!(f[1].as_rational().unwrap(), BigInt::from(2));
        let inv = inverse_fourier(&z2, &[CycInt::from_int(1, 1), CycInt::from_int(1, 0)]);
        assert!(!inv.exact);
    }

    #[test]
    fn orthogonality() {
        for fs in [vec![12u64], vec![2, 6], vec![3, 3], vec![2, 2, 2], vec![2, 4]] {
            let g = FinAbGroup::new(fs).unwrap();
            let n = g.exponent();
            let chars = characters(&g);
            for a in &chars {
                for b in &chars {
                    let s = (0..g.order()).fold(CycInt::zero(n), |acc, x| {
                        acc.add(&a.value(&g, x).mul(&b.value(&g, g.neg(x))))
                    });
                    let expect = if a == b { g.order() as i64 } else { 0 };
                    assert_eq!(s, CycInt::from_int(n, expect));
                }
            }
        }
    }

    #[test]
    fn cayley_units_mod_15() {
        let els: Vec<u64> = (1..15).filter(|x| x.gcd(&15) == 1).collect();
        let (g, map) = from_cayley(&els, &1, |a, b| a * b % 15).unwrap();
        assert_eq!(g.factors(), &[2, 4]);
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                let k = els.iter().position(|x| *x == a * b % 15).unwrap();
                assert_eq!(g.add(map[i], map[j]), map[k]);
            }
        }
    }

    #[test]
    fn subgroup_counts() {
        // Z/2 x Z/2 has 5 subgroups, Z/2 x Z/4 has 8, Z/3 x Z/3 has 6
        for (fs, n) in [(vec![2u64, 2], 5), (vec![2, 4], 8), (vec![3, 3], 6), (vec![12], 6)] {
            let g = FinAbGroup::new(fs).unwrap();
            assert_eq!(g.all_subgroups().len(), n);
        }
    }

    #[test]
    fn product_and_quotient() {
        let p = Product::new(vec![FinAbGroup::cyclic(3), FinAbGroup::cyclic(2)]).unwrap();
        assert_eq!(p.group().factors(), &[6]);
        for x in 0..6 {
            assert_eq!(p.join(&p.split(x)), x);
        }
        let g = FinAbGroup::cyclic(4);
        let h = g.subgroup(&[2]);
        let q = g.quotient(&h).unwrap();
        assert_eq!(q.dst.order(), 2);
        assert_eq!(q.kernel(), h);
        let sub = h.as_group(&g).unwrap();
        assert_eq!(sub.src.order(), 2);
        assert_eq!(sub.image(), h);
    }

    fn group() -> impl Strategy<Value = FinAbGroup> {
        prop::sample::select(vec![vec![6u64], vec![2, 2], vec![2, 4], vec![3, 9], vec![2, 6]])
            .prop_map(|f| FinAbGroup::new(f).unwrap())
    }

    proptest! {
        #[test]
        fn fourier_roundtrip(g in group(), seed in proptest::collection::vec(-50i64..50, 18)) {
            let coeffs: Vec<i64> = (0..g.order()).map(|i| seed[i % seed.len()]).collect();
            let f = fourier_int(&g, &coeffs);
            let back = inverse_fourier(&g, &f).into_exact().unwrap();
            for (a, b) in back.iter().zip(&coeffs) {
                prop_assert_eq!(a.as_rational().unwrap(), BigInt::from(*b));
            }
        }

        #[test]
        fn fourier_is_multiplicative(a in proptest::collection::vec(-5i64..5, 6), b in proptest::collection::vec(-5i64..5, 6)) {
            let g = FinAbGroup::cyclic(6);
            let mut c = vec![0i64; 6];
            for x in 0..6 {
                for y in 0..6 {
                    c[g.add(x, y)] += a[x] * b[y];
                }
            }
            let (fa, fb, fc) = (fourier_int(&g, &a), fourier_int(&g, &b), fourier_int(&g, &c));
            for i in 0..6 {
                prop_assert_eq!(fa[i].mul(&fb[i]), fc[i].clone());
            }
        }

        #[test]
        fn galois_equivariance(a in proptest::collection::vec(-9i64..9, 12), k in prop::sample::select(vec![1i64, 5, 7, 11])) {
            let g = FinAbGroup::new(vec![2, 6]).unwrap();
            let f = fourier_int(&g, &a);
            for chi in characters(&g) {
                let chik = g.mul_int(chi.index, k as i128);
                prop_assert_eq!(f[chi.index].galois(k), f[chik].clone());
            }
        }

        #[test]
        fn pullback_is_composition(x in 0usize..12, c in 0usize..3) {
            let g = FinAbGroup::cyclic(12);
            let q = g.quotient(&g.subgroup(&[3])).unwrap();
            let chi = Character::new(&q.dst, c);
            let pulled = chi.pullback(&q);
            prop_assert_eq!(pulled.value(&g, x), chi.value(&q.dst, q.apply(x)).embed(12));
        }
    }
}
