//! Independent checks of the augmentation filtrations: exhaustive span
//! closure for tiny rings, an integer Hermite lattice in the group basis
//! otherwise, plus integrality, pounds_n and transfer scaling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{FinAbGroup, Product};
use crate::augfilt::{monomials, AugFiltration, RelativeFiltration};
use crate::error::Result;
use crate::fqpoly::prime_divisors;
use crate::groupring::{CoeffRing, Integers, ModElem, ModPow, ZElem};
use crate::intmat::{ext_gcd, Mat};

/// Every finite abelian p-group of order <= `max_order` (p prime), the
/// trivial group once.
pub fn p_groups(max_order: u64) -> Vec<(u64, FinAbGroup)> {
    fn partitions(n: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(cap)).rev() {
            cur.push(k);
            partitions(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![(2, FinAbGroup::trivial())];
    for p in 2..=max_order {
        if prime_divisors(p) != [p] {
            continue;
        }
        let mut e = 1;
        while p.pow(e) <= max_order {
            let mut parts = Vec::new();
            partitions(e, e, &mut Vec::new(), &mut parts);
            for part in parts {
                let factors: Vec<u64> = part.iter().rev().map(|&k| p.pow(k)).collect();
                out.push((p, FinAbGroup::new(factors).expect("chain")));
            }
            e += 1;
        }
    }
    out
}

/// Z-generators of I(H)^n in the group basis: g times a product of n
/// generator differences e_i - 1.
pub fn ideal_power_generators(h: &FinAbGroup, n: usize) -> Vec<ZElem> {
    let r = h.rank();
    let mut out = Vec::new();
    for mono in monomials(&vec![u64::MAX; r], n) {
        let mut x = ZElem::one(h, &Integers);
        for (i, &a) in mono.iter().enumerate() {
            let d = ZElem::aug_gen(h, &Integers, h.gen(i));
            for _ in 0..a {
                x = x.mul(&d).expect("same group");
            }
        }
        for g in 0..h.order() {
            out.push(ZElem::basis(h, &Integers, g).mul(&x).expect("same group"));
        }
    }
    if r == 0 && n == 0 {
        out.push(ZElem::one(h, &Integers));
    }
    out
}

fn as_row(x: &ZElem) -> Vec<i128> {
    x.coeffs().iter().map(|&a| a as i128).collect()
}

/// Echelon basis of the lattice spanned by `gens` and d Z^n, each column
/// folded in with its d e_i row so entries stay below d.
fn padded_echelon(gens: &[Vec<i128>], d: i128, n: usize) -> Mat {
    let mut rest: Mat = gens.iter().map(|r| r.iter().map(|a| a.rem_euclid(d)).collect()).collect();
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let mut piv: Vec<i128> = (0..n).map(|j| if j == col { d } else { 0 }).collect();
        for row in rest.iter_mut() {
            if row[col] == 0 {
                continue;
            }
            let (x, y) = (piv[col], row[col]);
            let (g, s, t) = ext_gcd(x, y);
            let (a, b) = (-y / g, x / g);
            for k in col..n {
                let (u, v) = (piv[k], row[k]);
                piv[k] = (s * u + t * v).rem_euclid(d);
                row[k] = (a * u + b * v).rem_euclid(d);
            }
            // the pivot column keeps its gcd exactly
            piv[col] = g;
            row[col] = 0;
        }
        rest.retain(|r| r.iter().any(|&a| a != 0));
        out.push(piv);
    }
    out
}

/// Membership in an echelon lattice that contains d Z^n.
fn in_padded(basis: &Mat, d: i128, v: &[i128]) -> bool {
    let mut v: Vec<i128> = v.iter().map(|a| a.rem_euclid(d)).collect();
    for (c, row) in basis.iter().enumerate() {
        if v[c] % row[c] != 0 {
            return false;
        }
        let f = v[c] / row[c];
        for k in c..v.len() {
            v[k] = (v[k] - f * row[k]).rem_euclid(d);
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Row Hermite basis over Z with unbounded entries.
fn hnf_big(rows: &[Vec<i128>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&a| BigInt::from(a)).collect()).collect();
    let mut out = Vec::new();
    for col in 0..n {
        let mut piv: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for row in m.drain(..) {
            if row[col].is_zero() {
                rest.push(row);
                continue;
            }
            match piv.take() {
                None => piv = Some(row),
                Some(p) => {
                    let e = p[col].extended_gcd(&row[col]);
                    let (a, b) = (-(&row[col] / &e.gcd), &p[col] / &e.gcd);
                    let np: Vec<BigInt> = p.iter().zip(&row).map(|(u, v)| &e.x * u + &e.y * v).collect();
                    let nr: Vec<BigInt> = p.iter().zip(&row).map(|(u, v)| &a * u + &b * v).collect();
                    piv = Some(np);
                    if nr.iter().any(|x| !x.is_zero()) {
                        rest.push(nr);
                    }
                }
            }
        }
        m = rest;
        if let Some(mut p) = piv {
            if p[col].is_negative() {
                p.iter_mut().for_each(|x| *x = -&*x);
            }
            out.push(p);
        }
    }
    out
}

fn in_lattice_big(basis: &[Vec<BigInt>], v: &[i128]) -> bool {
    let mut v: Vec<BigInt> = v.iter().map(|&a| BigInt::from(a)).collect();
    for row in basis {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else { continue };
        if !(&v[c] % &row[c]).is_zero() {
            return false;
        }
        let f = &v[c] / &row[c];
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &f * y;
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// Lattice of I(H)^n + p^M Z[H] over Z, in echelon form.
fn padded_lattice(h: &FinAbGroup, ring: &ModPow, n: usize) -> Mat {
    let gens: Mat = ideal_power_generators(h, n).iter().map(as_row).collect();
    padded_echelon(&gens, ring.modulus as i128, h.order())
}

/// Failures from comparing the echelon filtration against an independent
/// computation, for every n <= depth.
pub fn filtration_mismatches(h: &FinAbGroup, ring: ModPow, depth: usize) -> Result<Vec<String>> {
    let f = AugFiltration::build(h, ring, depth)?;
    let size = h.order();
    let mut bad = Vec::new();
    let exhaustive = (ring.modulus as f64).powi(size as i32) <= (1u64 << 20) as f64;
    for n in 0..=depth {
        let label = format!("H={:?} M={} n={n}", h.factors(), ring.m);
        let gens: Vec<Vec<u64>> = ideal_power_generators(h, n)
            .iter()
            .map(|g| g.coeffs().iter().map(|&a| ring.from_i64(a)).collect())
            .collect();
        let log_card = f.log_card(n);
        if exhaustive {
            let members = span_closure(&gens, ring.modulus, size);
            if members.len() as u64 != ring.p.pow(log_card) {
                bad.push(format!("{label}: closure has {} elements, echelon {}^{log_card}", members.len(), ring.p));
            }
            for v in members {
                let e = ModElem::new(h.clone(), ring, v)?;
                if !f.contains(&e, n)? {
                    bad.push(format!("{label}: closure element outside echelon"));
                    break;
                }
            }
        } else {
            let lat = padded_lattice(h, &ring, n);
            let mut log_det = 0u32;
            for (i, row) in lat.iter().enumerate() {
                let mut d = row[i] as u64;
                while d > 1 {
                    d /= ring.p;
                    log_det += 1;
                }
            }
            let oracle = ring.m * size as u32 - log_det;
            if oracle != log_card {
                bad.push(format!("{label}: lattice gives {}^{oracle}, echelon {}^{log_card}", ring.p, ring.p));
            }
            for b in f.basis(n) {
                let v: Vec<i128> = b.coeffs().iter().map(|&a| a as i128).collect();
                if !in_padded(&lat, ring.modulus as i128, &v) {
                    bad.push(format!("{label}: echelon generator outside lattice"));
                    break;
                }
            }
        }
    }
    Ok(bad)
}

/// The additive subgroup of (Z/modulus)^len generated by `gens`.
pub fn span_closure(gens: &[Vec<u64>], modulus: u64, len: usize) -> Vec<Vec<u64>> {
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &a| acc * modulus + a);
    let total = modulus.pow(len as u32) as usize;
    let mut seen = vec![false; total];
    let zero = vec![0u64; len];
    seen[0] = true;
    let mut queue = vec![zero];
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head].clone();
        head += 1;
        for g in gens {
            let next: Vec<u64> = cur.iter().zip(g).map(|(a, b)| (a + b) % modulus).collect();
            let k = encode(&next) as usize;
            if !seen[k] {
                seen[k] = true;
                queue.push(next);
            }
        }
    }
    queue
}

/// Integrality: for integral xi of augmentation zero, xi in I(H)^n over Z
/// iff xi lies in the p-adic ideal, decided at precision M. Only run when
/// p^M I(H) is inside I(H)^n, which makes the precision-M test exact.
/// Returns (elements checked, failures) or None when M is too small.
pub fn base_change_mismatches(
    h: &FinAbGroup,
    ring: ModPow,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Option<(usize, Vec<String>)>> {
    let size = h.order();
    let rows: Mat = ideal_power_generators(h, n).iter().map(as_row).collect();
    let lattice = hnf_big(&rows, size);
    for i in 0..h.rank() {
        let x = ZElem::aug_gen(h, &Integers, h.gen(i));
        let v: Vec<i128> = as_row(&x).iter().map(|a| a * ring.modulus as i128).collect();
        if !in_lattice_big(&lattice, &v) {
            return Ok(None);
        }
    }
    let f = AugFiltration::build(h, ring, n)?;
    let gens = ideal_power_generators(h, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for k in 0..samples {
        // half the samples start inside the ideal, the rest are perturbed
        let mut c = vec![0i128; size];
        if !gens.is_empty() {
            for _ in 0..3 {
                let g = &gens[rng.gen_range(0..gens.len())];
                let t: i128 = rng.gen_range(-2..=2);
                for (a, b) in c.iter_mut().zip(g.coeffs()) {
                    *a += t * *b as i128;
                }
            }
        }
        if k % 2 == 1 {
            for a in c.iter_mut() {
                *a += rng.gen_range(-1..=1) * ring.p as i128;
            }
        }
        let aug: i128 = c.iter().sum();
        c[0] -= aug;
        let over_z = in_lattice_big(&lattice, &c);
        let red = ModElem::new(h.clone(), ring, c.iter().map(|&a| ring.reduce(a)).collect())?;
        let over_zp = f.contains(&red, n)?;
        if over_z != over_zp {
            bad.push(format!("H={:?} n={n}: integral {over_z}, p-adic {over_zp} for {c:?}", h.factors()));
        }
    }
    Ok(Some((samples, bad)))
}

/// pounds_n round trips on G = Gamma x H: assembling gamma (x) x^a and
/// decomposing again is the identity, and the degree is preserved.
pub fn pounds_mismatches(gamma: &FinAbGroup, h: &FinAbGroup, ring: ModPow, depth: usize) -> Result<Vec<String>> {
    let prod = Product::new(vec![gamma.clone(), h.clone()])?;
    let rf = RelativeFiltration::new(&prod.inclusion(1)?, ring, depth)?;
    let mut bad = Vec::new();
    for n in 0..depth {
        for a in monomials(h.factors(), n) {
            let x = rf.filt.monomial_elem(&a);
            let plain = rf.filt.degree(&x)?;
            for ci in 0..rf.reps.len() {
                let mut comps = vec![ModElem::zero(h, &ring); rf.reps.len()];
                comps[ci] = x.clone();
                let xi = rf.assemble(&comps)?;
                if rf.decompose(&xi)? != comps {
                    bad.push(format!("Gamma={:?} H={:?}: decompose . assemble differs", gamma.factors(), h.factors()));
                }
                if rf.degree(&xi)? != plain {
                    bad.push(format!("Gamma={:?} H={:?}: relative degree differs", gamma.factors(), h.factors()));
                }
            }
        }
    }
    Ok(bad)
}

/// For G = Gamma x H and xi in I(H)^m, Ver(xi) = |Gamma|^m xi in I^m/I^{m+1}.
pub fn ver_mismatches(gamma: &FinAbGroup, h: &FinAbGroup, ring: ModPow, depth: usize) -> Result<Vec<String>> {
    let prod = Product::new(vec![gamma.clone(), h.clone()])?;
    let incl = prod.inclusion(1)?;
    let f = AugFiltration::build(h, ring, depth)?;
    let k = gamma.order() as u64;
    let mut bad = Vec::new();
    for m in 0..depth {
        for a in monomials(h.factors(), m) {
            let xi = f.monomial_elem(&a);
            let v = xi.pushforward(&incl)?.transfer_ver(&incl, k as i128)?;
            let want = xi.scale(&ring.pow(k % ring.modulus, m as u64));
            if !f.contains(&v.sub(&want)?, m + 1)? {
                bad.push(format!("Gamma={:?} H={:?} m={m}: Ver is not |Gamma|^m", gamma.factors(), h.factors()));
            }
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct OracleSummary {
    pub filtrations: usize,
    pub base_change_checks: usize,
    pub pounds_cases: usize,
    pub ver_cases: usize,
    pub failures: Vec<String>,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The whole suite over p-groups of order <= max_order and M <= max_m.
pub fn run_suite(max_order: u64, max_m: u32, depth: usize, seed: u64) -> Result<OracleSummary> {
    let groups = p_groups(max_order);
    let cases: Vec<(u64, FinAbGroup, u32)> = groups
        .iter()
        .flat_map(|(p, h)| (1..=max_m).map(move |m| (*p, h.clone(), m)))
        .collect();
    let per_case: Vec<Result<(Vec<String>, usize)>> = cases
        .par_iter()
        .map(|(p, h, m)| {
            let ring = ModPow::new(*p, *m)?;
            let mut bad = filtration_mismatches(h, ring, depth)?;
            let mut checked = 0;
            for n in 1..=depth.min(3) {
                let seed = seed ^ ((h.order() as u64) << 16) ^ ((*m as u64) << 8) ^ n as u64;
                if let Some((k, b)) = base_change_mismatches(h, ring, n, 24, seed)? {
                    checked += k;
                    bad.extend(b);
                }
            }
            Ok((bad, checked))
        })
        .collect();
    let mut summary = OracleSummary { filtrations: cases.len(), ..Default::default() };
    for r in per_case {
        let (bad, checked) = r?;
        summary.failures.extend(bad);
        summary.base_change_checks += checked;
    }
    let gammas: Vec<FinAbGroup> = (1..=6).map(FinAbGroup::cyclic).collect();
    for (p, h) in groups.iter().filter(|(_, h)| h.order() <= 9) {
        let ring = ModPow::new(*p, max_m)?;
        for g in &gammas {
            summary.failures.extend(pounds_mismatches(g, h, ring, depth.min(3))?);
            summary.pounds_cases += 1;
            summary.failures.extend(ver_mismatches(g, h, ring, depth.min(3))?);
            summary.ver_cases += 1;
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_census() {
        let gs = p_groups(27);
        // trivial, 2, 4, 2x2, 8, 4x2, 2x2x2, 16 (5 types), 3, 9, 3x3, 27 (3 types),
        // 5, 25, 5x5, 7, 11, 13, 17, 19, 23
        assert_eq!(gs.len(), 1 + 12 + 6 + 3 + 5);
    }

    #[test]
    fn cyclic_two_filtration() {
        let h = FinAbGroup::cyclic(2);
        let ring = ModPow::new(2, 3).unwrap();
        assert!(filtration_mismatches(&h, ring, 4).unwrap().is_empty());
        let f = AugFiltration::build(&h, ring, 4).unwrap();
        // I^n = 2^{n-1} I over Z/8
        assert_eq!((1..=4).map(|n| f.log_card(n)).collect::<Vec<_>>(), vec![3, 2, 1, 0]);
    }

    #[test]
    fn lattice_path_agrees() {
        let h = FinAbGroup::new(vec![3, 3]).unwrap();
        assert!(filtration_mismatches(&h, ModPow::new(3, 3).unwrap(), 4).unwrap().is_empty());
    }

    #[test]
    fn base_change_small() {
        let h = FinAbGroup::cyclic(4);
        let ring = ModPow::new(2, 3).unwrap();
        let (k, bad) = base_change_mismatches(&h, ring, 2, 40, 7).unwrap().unwrap();
        assert_eq!(k, 40);
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn ver_and_pounds_small() {
        let h = FinAbGroup::new(vec![3, 3]).unwrap();
        let ring = ModPow::new(3, 2).unwrap();
        for g in [FinAbGroup::cyclic(2), FinAbGroup::cyclic(3), FinAbGroup::cyclic(6)] {
            assert!(pounds_mismatches(&g, &h, ring, 2).unwrap().is_empty());
            assert!(ver_mismatches(&g, &h, ring, 2).unwrap().is_empty());
        }
    }
}


