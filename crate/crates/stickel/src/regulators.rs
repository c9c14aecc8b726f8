//! Regulators: classical, refined, Gross's determinant, the pairing and its
//! discriminant, the Burns matrix, and the homogeneous polynomials f and xi.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abelian::{Character, FinAbGroup, Hom, Product, Subgroup};
use crate::augfilt::{AugClass, AugFiltration, HomogPoly, RelativeFiltration};
use crate::classfield::Layer;
use crate::error::{Error, Result};
use crate::fqpoly::Place;
use crate::groupring::{CoeffRing, Integers, ModElem, ModPow, ZElem};
use crate::lseries::ThetaPoly;
use crate::units::{iota_eval, UnitLattice, WedgeElem};

/// G -> G / (prime-to-p part), a p-group.
pub fn sylow_quotient(g: &FinAbGroup, p: u64) -> Result<Hom> {
    let gens: Vec<usize> = (0..g.order()).filter(|&x| g.element_order(x) % p != 0).collect();
    g.quotient(&Subgroup::generated(g, &gens))
}

/// The image of xi in I/I^2 = G, for xi of augmentation zero.
pub fn group_class(xi: &ZElem) -> Result<usize> {
    if xi.augment() != 0 {
        return Err(Error::InvalidInput("element is not in the augmentation ideal".into()));
    }
    let g = xi.group();
    let mut acc = g.identity();
    for (x, &a) in xi.coeffs().iter().enumerate() {
        if a != 0 {
            acc = g.add(acc, g.mul_int(x, a as i128));
        }
    }
    Ok(acc)
}

/// x mod p^M for a p-integral rational.
pub fn rational_mod(c: &BigRational, ring: &ModPow) -> Result<u64> {
    let num = ring.reduce_big(c.numer());
    let den = ring.reduce_big(c.denom());
    let inv = ring.inv(den).ok_or_else(|| Error::InvalidInput(format!("{c} is not {}-integral", ring.p)))?;
    Ok(ring.mul(&num, &inv))
}

fn basis_minus_one(g: &FinAbGroup, x: usize) -> ZElem {
    ZElem::basis(g, &Integers, x).sub(&ZElem::one(g, &Integers)).expect("same group")
}

/// deg_{w_i}(u_j) as rationals.
pub fn degree_values(lattice: &UnitLattice, places: &[Place]) -> Result<Vec<Vec<BigRational>>> {
    Ok(lattice
        .degree_matrix(places)?
        .into_iter()
        .map(|row| row.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect())
}

/// R_eta(eps) = iota(w_1* ^ ... ^ w_n*)(lambda eps) with Gamma trivial.
pub fn classical_regulator(lattice: &UnitLattice, places: &[Place], eps: &WedgeElem) -> Result<BigRational> {
    if places.len() != eps.n {
        return Err(Error::Mismatch(format!("{} functionals against a degree {} wedge", places.len(), eps.n)));
    }
    eps.evaluate(&degree_values(lattice, places)?)
}

/// det(rec_{w_i}(u_j) - 1) in Z[G], the Gross regulator before reduction.
pub fn gross_det(layer: &Layer, lattice: &UnitLattice, places: &[Place]) -> Result<ZElem> {
    if places.len() != lattice.rank() {
        return Err(Error::Mismatch(format!("{} places for rank {}", places.len(), lattice.rank())));
    }
    let g = layer.group();
    let m: Vec<Vec<ZElem>> = places
        .iter()
        .map(|w| lattice.basis.iter().map(|u| Ok(basis_minus_one(g, layer.artin_local(u, w)?))).collect())
        .collect::<Result<_>>()?;
    iota_eval(&m, g, &Integers)
}

/// R_{eta,H}(eps) in R[G] for K = k: the wedge evaluated on the rows
/// rec_{w_i}(u) - 1, coefficients reduced mod p^M.
pub fn refined_regulator(
    layer: &Layer,
    lattice: &UnitLattice,
    places: &[Place],
    eps: &WedgeElem,
    ring: &ModPow,
) -> Result<ModElem> {
    if places.len() != eps.n {
        return Err(Error::Mismatch("wedge degree differs from the number of places".into()));
    }
    let g = layer.group();
    let rows: Vec<Vec<ZElem>> = places
        .iter()
        .map(|w| lattice.basis.iter().map(|u| Ok(basis_minus_one(g, layer.artin_local(u, w)?))).collect())
        .collect::<Result<_>>()?;
    let mut acc = ModElem::zero(g, ring);
    for (idx, c) in &eps.terms {
        let m: Vec<Vec<ZElem>> = rows.iter().map(|r| idx.iter().map(|&j| r[j].clone()).collect()).collect();
        let d = iota_eval(&m, g, &Integers)?.reduce(ring);
        acc = acc.add(&d.scale(&rational_mod(c, ring)?))?;
    }
    Ok(acc)
}

/// Outcome of a congruence lhs = rhs mod I_p^n, tested in Z/p^M[P] for the
/// Sylow quotient P (exact, since the prime-to-p components of I_p are the
/// whole ring).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Congruence {
    pub depth: usize,
    pub precision: u32,
    pub holds: bool,
    /// lhs = -rhs holds while lhs = rhs does not
    pub sign_flip_only: bool,
    pub lhs_degree: usize,
    pub rhs_degree: usize,
}

pub fn congruence_mod_aug(lhs: &ZElem, rhs: &ZElem, depth: usize, p: u64, m: u32) -> Result<Congruence> {
    if lhs.group() != rhs.group() {
        return Err(Error::Mismatch("congruence across different groups".into()));
    }
    let q = sylow_quotient(lhs.group(), p)?;
    let ring = ModPow::new(p, m)?;
    let l = lhs.pushforward(&q)?.reduce(&ring);
    let r = rhs.pushforward(&q)?.reduce(&ring);
    let filt = AugFiltration::build(&q.dst, ring, depth)?;
    let holds = filt.contains(&l.sub(&r)?, depth)?;
    let flip = filt.contains(&l.add(&r)?, depth)?;
    Ok(Congruence {
        depth,
        precision: m,
        holds,
        sign_flip_only: flip && !holds,
        lhs_degree: filt.degree(&l)?,
        rhs_degree: filt.degree(&r)?,
    })
}

/// <u, phi> = sum_w phi(w) rec_w(u), a group element standing for its
/// class in I/I^2.
pub fn pairing_value(layer: &Layer, s: &[Place], u: &crate::fqpoly::RatFunc, phi: &[i64]) -> Result<usize> {
    if phi.len() != s.len() {
        return Err(Error::Mismatch("functional length differs from #S".into()));
    }
    let g = layer.group();
    let mut acc = g.identity();
    for (w, &a) in s.iter().zip(phi) {
        if a != 0 {
            acc = g.add(acc, g.mul_int(layer.artin_local(u, w)?, a as i128));
        }
    }
    Ok(acc)
}

/// The functionals phi_i(w) = [w = w_i] on Y, restricting to the basis of
/// X' dual to w_i - w_0.
pub fn dual_basis(s: &[Place], places: &[Place]) -> Result<Vec<Vec<i64>>> {
    places
        .iter()
        .map(|w| {
            let i = s.iter().position(|v| v == w).ok_or_else(|| Error::InvalidInput(format!("{w} is not in S")))?;
            let mut phi = vec![0i64; s.len()];
            phi[i] = 1;
            Ok(phi)
        })
        .collect()
}

/// The pairing table <u_i, phi_j> as group elements.
pub fn pairing_table(layer: &Layer, lattice: &UnitLattice, phis: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    lattice
        .basis
        .iter()
        .map(|u| phis.iter().map(|phi| pairing_value(layer, &lattice.s, u, phi)).collect())
        .collect()
}

/// Discriminant det(<a_i, b_j> - 1) of the pairing, a representative of a
/// class in I^r / I^{r+1}. Rows are the functionals so that the dual basis
/// reproduces gross_det entry by entry.
pub fn discriminant(layer: &Layer, lattice: &UnitLattice, phis: &[Vec<i64>]) -> Result<ZElem> {
    if phis.len() != lattice.rank() {
        return Err(Error::Mismatch("functional count differs from the rank".into()));
    }
    let g = layer.group();
    let table = pairing_table(layer, lattice, phis)?;
    let m: Vec<Vec<ZElem>> =
        (0..phis.len()).map(|i| (0..lattice.rank()).map(|j| basis_minus_one(g, table[j][i])).collect()).collect();
    iota_eval(&m, g, &Integers)
}

/// det(A) in Z[Gamma] for the Burns matrix: the first rows are the integer
/// values phi_i^(id)(u_j), the rest rec_{v_i}(u_j) - 1.
pub fn burns_det(gamma_layer: &Layer, lattice: &UnitLattice, phi_rows: &[Vec<i64>], places: &[Place]) -> Result<ZElem> {
    let r = lattice.rank();
    if phi_rows.len() + places.len() != r || phi_rows.iter().any(|row| row.len() != r) {
        return Err(Error::Mismatch("Burns matrix is not square".into()));
    }
    let g = gamma_layer.group();
    let mut m: Vec<Vec<ZElem>> = phi_rows
        .iter()
        .map(|row| row.iter().map(|&a| ZElem::one(g, &Integers).scale(&a)).collect())
        .collect();
    for v in places {
        let row = lattice
            .basis
            .iter()
            .map(|u| Ok(basis_minus_one(g, gamma_layer.artin_local(u, v)?)))
            .collect::<Result<Vec<_>>>()?;
        m.push(row);
    }
    iota_eval(&m, g, &Integers)
}

/// The n = 1 Stark unit at the level of k: c with c * deg_{v1}(u_1) = a_1.
pub fn stark_coefficient(a1: i64, lattice: &UnitLattice, v1: &Place, p: u64) -> Result<BigRational> {
    if lattice.rank() != 1 {
        return Err(Error::OutOfScope(format!("solving for eps needs rank 1, got {}", lattice.rank())));
    }
    let d = lattice.degree_matrix(std::slice::from_ref(v1))?[0][0];
    if d == 0 {
        return Err(Error::InvalidInput(format!("u_1 is a unit at {v1}")));
    }
    let c = BigRational::new(BigInt::from(a1), BigInt::from(d));
    if (c.denom() % BigInt::from(p)).is_zero() {
        return Err(Error::InvalidInput(format!("eps = {c} u_1 is not {p}-integral")));
    }
    Ok(c)
}

/// The n = 1 identity R_{eta,H}(c u_1) = [theta_G]_(1) on one layer with
/// Gamma trivial, with the coefficient solved from the layer alone.
#[derive(Clone, Debug, Serialize)]
pub struct StarkLayer {
    pub group: Vec<u64>,
    pub theta_in_i1: bool,
    pub holds: bool,
    /// c mod the order of rec_{v1}(u_1), solved from the layer
    pub solved: Option<u64>,
    pub modulus: u64,
    pub consistent: bool,
}

pub fn stark_layer(
    layer: &Layer,
    lattice: &UnitLattice,
    v1: &Place,
    c: &BigRational,
    theta_g: &ZElem,
) -> Result<StarkLayer> {
    let p = layer.q() as u64;
    let g = layer.group();
    if !g.is_p_group(p) {
        return Err(Error::InvalidInput("with Gamma trivial the layer must be a p-group".into()));
    }
    let factors = g.factors().to_vec();
    if theta_g.augment() != 0 {
        return Ok(StarkLayer { group: factors, theta_in_i1: false, holds: false, solved: None, modulus: 1, consistent: false });
    }
    let t = group_class(theta_g)?;
    let r = layer.artin_local(&lattice.basis[0], v1)?;
    let ord = g.element_order(r);
    let exp = g.exponent();
    let c_mod = rational_mod(c, &modpow_for(p, exp)?)?;
    let rhs = g.mul_int(r, c_mod as i128);
    let solved = (0..ord).find(|&k| g.mul_int(r, k as i128) == t);
    let consistent = solved.map(|k| k % ord == c_mod % ord).unwrap_or(false);
    Ok(StarkLayer { group: factors, theta_in_i1: true, holds: rhs == t, solved, modulus: ord, consistent })
}

fn modpow_for(p: u64, exponent: u64) -> Result<ModPow> {
    let mut m = 0u32;
    let mut x = exponent;
    while x > 1 {
        x /= p;
        m += 1;
    }
    ModPow::new(p, m.max(1))
}

/// Eq. bridging classical and refined regulators on the constant tower:
/// R_eta(eps) against Val_{sigma,n}(R_{eta,H}(eps)) with sigma the Frobenius.
#[derive(Clone, Debug, Serialize)]
pub struct Bridge {
    pub n: usize,
    pub precision: u32,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

pub fn classical_refined_bridge(
    layer: &Layer,
    lattice: &UnitLattice,
    places: &[Place],
    eps: &WedgeElem,
    m: u32,
) -> Result<Bridge> {
    let p = layer.q() as u64;
    let g = layer.group().clone();
    if layer.spec().carlitz.is_some() || !g.is_p_group(p) || g.rank() != 1 {
        return Err(Error::OutOfScope("the bridge needs a constant p-layer".into()));
    }
    let ring = ModPow::new(p, m)?;
    let refined = refined_regulator(layer, lattice, places, eps, &ring)?;
    let n = eps.n;
    let rel = RelativeFiltration::new(&Hom::identity(&g), ring, n)?;
    if !rel.contains(&refined, n)? {
        return Err(Error::Internal("refined regulator outside I^n".into()));
    }
    let class = AugClass { degree: n, rep: refined, relative: true, precision: m };
    let quot = g.quotient(&Subgroup::whole(&g))?;
    let sigma = layer.constant_frobenius(1);
    let val = rel.val_map(&class, sigma, &quot)?;
    let out_ring = *val.ring();
    let classical = classical_regulator(lattice, places, eps)?;
    let lhs = rational_mod(&classical, &out_ring)?;
    let rhs = *val.coeff(0);
    Ok(Bridge { n, precision: out_ring.m, lhs: classical.to_string(), rhs: rhs.to_string(), holds: lhs == rhs })
}

/// a_m = varpi^m Val_{sigma,m,G/H}([theta_G]_(m,H)) = Val_{sigma,m}(yen(...))
/// for G = Gamma' x H' built from Theta over Gamma' by the constant
/// Z/n-extension, H = varpi H'.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaBridge {
    pub m: usize,
    pub varpi: u64,
    pub precision: u32,
    pub a_m: Vec<i64>,
    pub direct: Vec<u64>,
    pub via_yen: Vec<u64>,
    pub holds_direct: bool,
    pub holds_yen: bool,
}

pub fn theta_bridge(poly: &ThetaPoly, n_const: u64, varpi: u64, m_prec: u32) -> Result<ThetaBridge> {
    let gp = poly.group.clone();
    let p = smallest_prime(n_const).ok_or_else(|| Error::InvalidInput("constant degree 1".into()))?;
    if !FinAbGroup::cyclic(n_const).is_p_group(p) || n_const % varpi != 0 || varpi == n_const {
        return Err(Error::InvalidInput("need n a p-power and varpi a proper divisor".into()));
    }
    let (prod, theta_g) = crate::lseries::constant_ext_theta(poly, n_const)?;
    let g = prod.group().clone();
    let hp = prod.components[1].clone();
    let h_sub_hp = Subgroup::generated(&hp, &[hp.mul_int(hp.gen(0), varpi as i128)]);
    let h_sub_g = Subgroup::generated(&g, &[prod.join(&[0, hp.mul_int(hp.gen(0), varpi as i128)])]);
    let h_incl = h_sub_g.as_group(&g)?;
    let sigma_g = prod.join(&[0, hp.mul_int(hp.gen(0), varpi as i128)]);
    let sigma_idx = h_incl
        .table()
        .iter()
        .position(|&x| x == sigma_g)
        .ok_or_else(|| Error::Internal("Frobenius outside H".into()))?;
    // Gamma = Gamma' x Z/varpi, Theta_Gamma = sum c_d tau^d u^d
    let gamma = Product::new(vec![gp.clone(), FinAbGroup::cyclic(varpi)])?;
    let gam = gamma.group().clone();
    let quot = Hom::new(
        g.clone(),
        gam.clone(),
        (0..g.rank())
            .map(|i| {
                let parts = prod.split(g.gen(i));
                gamma.join(&[parts[0], (hp.coords(parts[1])[0] % varpi) as usize])
            })
            .collect(),
    )?;
    let incl_gp = gamma.inclusion(0)?;
    let coeffs: Vec<ZElem> = poly
        .coeffs
        .iter()
        .enumerate()
        .map(|(d, c)| {
            let shifted = c.pushforward(&incl_gp)?;
            let tau = ZElem::basis(&gam, &Integers, gamma.join(&[0, (d as u64 % varpi) as usize]));
            shifted.mul(&tau)
        })
        .collect::<Result<_>>()?;
    let theta_gamma = ThetaPoly { group: gam.clone(), coeffs, ..poly.clone() };
    let m = theta_gamma
        .order_of_vanishing()?
        .ok_or_else(|| Error::InvalidInput("Theta vanishes identically".into()))?;
    let a_m = theta_gamma.derivative_coeffs(m)?.pop().expect("m + 1 coefficients");

    let ring = ModPow::new(p, m_prec)?;
    let rel = RelativeFiltration::new(&h_incl, ring, m)?;
    let tg = theta_g.reduce(&ring);
    if !rel.contains(&tg, m)? {
        return Err(Error::Internal("theta_G outside I_H^m although a_0..a_{m-1} vanish".into()));
    }
    let class = AugClass { degree: m, rep: tg, relative: true, precision: m_prec };
    let direct = rel.val_map(&class, sigma_idx, &quot)?;
    let out = *direct.ring();
    let w_m = out.pow(varpi % out.modulus, m as u64);
    let direct_scaled: Vec<u64> = direct.coeffs().iter().map(|c| out.mul(c, &w_m)).collect();

    let (target, incl, image) = crate::augfilt::yen_map(&theta_g, &prod, &h_sub_hp)?;
    let hq = hp.quotient(&h_sub_hp)?;
    let tq = target.components[1].clone();
    let lift_q: Vec<u64> = (0..tq.order())
        .map(|x| (0..varpi).find(|&k| hq.apply(hp.mul_int(hp.gen(0), k as i128)) == x).unwrap_or(0))
        .collect();
    let tg_grp = target.group().clone();
    let quot_yen = Hom::new(
        tg_grp.clone(),
        gam.clone(),
        (0..tg_grp.rank())
            .map(|i| {
                let parts = target.split(tg_grp.gen(i));
                gamma.join(&[parts[0], lift_q[parts[1]] as usize])
            })
            .collect(),
    )?;
    // sigma = varpi sigma' sits in H as the image of varpi under H' -> H
    let h_in_hp = h_sub_hp.as_group(&hp)?;
    let sig_abs = h_in_hp
        .table()
        .iter()
        .position(|&x| x == hp.mul_int(hp.gen(0), varpi as i128))
        .ok_or_else(|| Error::Internal("Frobenius outside H".into()))?;
    let rel_y = RelativeFiltration::new(&incl, ring, m)?;
    let yen_red = image.reduce(&ring);
    let class_y = AugClass { degree: m, rep: yen_red, relative: true, precision: m_prec };
    let via_yen = rel_y.val_map(&class_y, sig_abs, &quot_yen)?;

    let target_vals: Vec<u64> = a_m.coeffs().iter().map(|&a| out.reduce(a as i128)).collect();
    let yen_vals: Vec<u64> = via_yen.coeffs().to_vec();
    Ok(ThetaBridge {
        m,
        varpi,
        precision: out.m,
        a_m: a_m.coeffs().to_vec(),
        holds_direct: direct_scaled == target_vals,
        holds_yen: yen_vals.iter().zip(&target_vals).all(|(a, b)| a % via_yen.ring().modulus == b % via_yen.ring().modulus),
        direct: direct_scaled,
        via_yen: yen_vals,
    })
}

fn smallest_prime(n: u64) -> Option<u64> {
    (2..=n).find(|d| n % d == 0)
}

/// A primitive d-th root of unity in Z/p^M (Teichmuller lift), d | p - 1.
pub fn teichmuller_root(ring: &ModPow, d: u64) -> Result<u64> {
    let p = ring.p;
    if (p - 1) % d != 0 {
        return Err(Error::OutOfScope(format!("order {d} does not divide p - 1 = {}", p - 1)));
    }
    let small = ModPow::new(p, 1)?;
    let primes: Vec<u64> = (2..=d).filter(|l| d % l == 0 && (2..*l).all(|k| l % k != 0)).collect();
    let a = (1..p)
        .find(|&a| small.pow(a, d) == 1 && primes.iter().all(|l| small.pow(a, d / l) != 1))
        .ok_or_else(|| Error::Internal("no root of unity".into()))?;
    Ok(ring.pow(a, p.pow(ring.m - 1)))
}

/// theta_chi = sum_gamma chi(gamma) theta_gamma in R[H] for G = Gamma x H,
/// with chi valued in R through the Teichmuller embedding.
pub fn chi_component(theta_g: &ZElem, split: &Product, chi: &Character, ring: &ModPow) -> Result<ModElem> {
    if split.components.len() != 2 || split.group() != theta_g.group() {
        return Err(Error::InvalidInput("need G presented as Gamma x H".into()));
    }
    let gamma = &split.components[0];
    let h = &split.components[1];
    let omega = teichmuller_root(ring, chi.level)?;
    let mut out = ModElem::zero(h, ring);
    for (x, &a) in theta_g.coeffs().iter().enumerate() {
        if a == 0 {
            continue;
        }
        let parts = split.split(x);
        let v = ring.mul(&ring.reduce(a as i128), &ring.pow(omega, chi.exp_at(gamma, parts[0])));
        let prev = *out.coeff(parts[1]);
        out.set_coeff(parts[1], ring.add(&prev, &v));
    }
    Ok(out)
}

/// Ver on R[H]: h -> k h.
pub fn ver<R: CoeffRing>(xi: &crate::groupring::GroupRingElem<R>, k: u64) -> Result<crate::groupring::GroupRingElem<R>> {
    let h = xi.group();
    let f = Hom::new(h.clone(), h.clone(), (0..h.rank()).map(|i| h.mul_int(h.gen(i), k as i128)).collect())?;
    xi.pushforward(&f)
}

/// Filtration degree with the cap made explicit.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub enum Depth {
    Exact(usize),
    AtLeast(usize),
}

pub fn filtration_depth(filt: &AugFiltration, xi: &ModElem) -> Result<Depth> {
    let d = filt.degree(xi)?;
    Ok(if d == filt.depth() { Depth::AtLeast(d) } else { Depth::Exact(d) })
}

/// d_E of the class of xi in I^n / I^{n+1}, reduced to F_p.
pub fn homog_mod_p(filt: &AugFiltration, xi: &ModElem, n: usize) -> Result<HomogPoly> {
    if !filt.contains(xi, n)? {
        return Err(Error::InvalidInput(format!("element is not in I^{n}")));
    }
    let class = AugClass { degree: n, rep: xi.clone(), relative: false, precision: filt.ring().m };
    Ok(filt.poly_image_de(&class)?.at_precision(1))
}

/// Reduces a Z[G] element into R[H] through G -> H given by a table.
pub fn restrict_to(xi: &ZElem, h_incl: &Hom, ring: &ModPow) -> Result<ModElem> {
    let table = h_incl.table();
    let mut out = ModElem::zero(&h_incl.src, ring);
    for (x, &a) in xi.coeffs().iter().enumerate() {
        if a == 0 {
            continue;
        }
        let i = table.iter().position(|&y| y == x).ok_or_else(|| Error::InvalidInput("support leaves H".into()))?;
        out.set_coeff(i, ring.reduce(a as i128));
    }
    Ok(out)
}

/// Integer value of a p-integral rational, if it is an integer.
pub fn as_int(c: &BigRational) -> Option<i64> {
    if c.is_integer() {
        c.numer().to_i64()
    } else {
        None
    }
}

/// Greatest common divisor helper for solved coefficients.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classfield::LayerSpec;
    use crate::fqpoly::{FqPoly, RatFunc};
    use crate::lseries::{equivariant_theta, DEFAULT_WINDOW};
    use crate::units::sunit_lattice;
    use proptest::prelude::*;

    fn fin(q: u32, c: &[u32]) -> Place {
        Place::Finite(FqPoly::new(q, c.to_vec()))
    }

    fn rat(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    fn base() -> (Vec<Place>, Vec<Place>) {
        (vec![Place::Infinity, fin(3, &[0, 1])], vec![fin(3, &[2, 1])])
    }

    #[test]
    fn classical_examples() {
        let (s, t) = base();
        let mut lat = sunit_lattice(3, &s, &t).unwrap();
        lat.orient(&s[1..]).unwrap();
        let eps = WedgeElem::monomial(&[0], rat(1));
        assert_eq!(classical_regulator(&lat, &s[..1], &eps).unwrap(), rat(1));
        assert_eq!(classical_regulator(&lat, &s[1..], &eps).unwrap(), rat(-1));
        let s3 = vec![Place::Infinity, fin(3, &[0, 1]), fin(3, &[1, 1])];
        let lat = sunit_lattice(3, &s3, &t).unwrap();
        let rep = WedgeElem::monomial(&[0, 0], rat(1));
        assert!(classical_regulator(&lat, &s3[1..], &rep).unwrap().is_zero());
    }

    #[test]
    fn gross_on_constant_tower() {
        let (s, t) = base();
        let layer = Layer::new(3, &LayerSpec::constant(27)).unwrap();
        let mut lat = sunit_lattice(3, &s, &t).unwrap();
        lat.orient(&s[1..]).unwrap();
        let det = gross_det(&layer, &lat, &s[1..]).unwrap();
        let theta = equivariant_theta(&layer, &s, &t, 8, DEFAULT_WINDOW).unwrap().theta().unwrap();
        // theta = 1 - sigma against det = sigma^{-1} - 1
        assert_eq!(theta.coeffs()[..2], [1, -1]);
        assert_eq!(det.coeffs()[26], 1);
        let c = congruence_mod_aug(&theta, &det, 2, 3, 3).unwrap();
        assert!(c.holds && !c.sign_flip_only);
        assert_eq!(c.rhs_degree, 1);
        // empty determinant
        let lat0 = sunit_lattice(3, &[Place::Infinity], &[fin(3, &[0, 1])]).unwrap();
        assert_eq!(gross_det(&layer, &lat0, &[]).unwrap(), ZElem::one(layer.group(), &Integers));
    }

    #[test]
    fn discriminant_matches_det() {
        let s = vec![Place::Infinity, fin(3, &[0, 1]), fin(3, &[1, 1])];
        let t = vec![fin(3, &[2, 1])];
        let layer = Layer::new(3, &LayerSpec::constant(27)).unwrap();
        let lat = sunit_lattice(3, &s, &t).unwrap();
        let phis = dual_basis(&s, &s[1..]).unwrap();
        let det = gross_det(&layer, &lat, &s[1..]).unwrap();
        assert_eq!(discriminant(&layer, &lat, &phis).unwrap(), det);
        // adding the all-ones functional changes nothing, by reciprocity
        let shifted: Vec<Vec<i64>> = phis.iter().map(|f| f.iter().map(|a| a + 1).collect()).collect();
        assert_eq!(pairing_table(&layer, &lat, &shifted).unwrap(), pairing_table(&layer, &lat, &phis).unwrap());
    }

    #[test]
    fn refined_bridge_base_config() {
        let (s, t) = base();
        let layer = Layer::new(3, &LayerSpec::constant(27)).unwrap();
        let mut lat = sunit_lattice(3, &s, &t).unwrap();
        lat.orient(&s[1..]).unwrap();
        let eps = WedgeElem::monomial(&[0], rat(1));
        let b = classical_refined_bridge(&layer, &lat, &s[1..], &eps, 3).unwrap();
        assert!(b.holds, "{b:?}");
        let zero = classical_refined_bridge(&layer, &lat, &s[1..], &WedgeElem::zero(1), 3).unwrap();
        assert!(zero.holds);
        assert_eq!(zero.rhs, "0");
    }

    #[test]
    fn stark_base_config() {
        let (s, t) = base();
        let layer = Layer::new(3, &LayerSpec::constant(27)).unwrap();
        let mut lat = sunit_lattice(3, &s, &t).unwrap();
        lat.orient(&s[1..]).unwrap();
        let poly = equivariant_theta(&layer, &s, &t, 8, DEFAULT_WINDOW).unwrap();
        let base_layer = Layer::new(3, &LayerSpec::constant(1)).unwrap();
        let a1 = equivariant_theta(&base_layer, &s, &t, 8, DEFAULT_WINDOW).unwrap().derivative_coeffs(1).unwrap()[1]
            .coeffs()[0];
        assert_eq!(a1, -1);
        let c = stark_coefficient(a1, &lat, &s[1], 3).unwrap();
        assert_eq!(c, rat(1));
        let st = stark_layer(&layer, &lat, &s[1], &c, &poly.theta().unwrap()).unwrap();
        assert!(st.theta_in_i1 && st.holds && st.consistent);
    }

    #[test]
    fn theta_bridge_constant() {
        let (s, t) = base();
        let base_layer = Layer::new(3, &LayerSpec::constant(1)).unwrap();
        let poly = equivariant_theta(&base_layer, &s, &t, 8, DEFAULT_WINDOW).unwrap();
        for varpi in [1, 3] {
            let b = theta_bridge(&poly, 27, varpi, 3).unwrap();
            assert!(b.holds_direct && b.holds_yen, "{b:?}");
        }
    }

    #[test]
    fn teichmuller() {
        let r = ModPow::new(7, 3).unwrap();
        for d in [1, 2, 3, 6] {
            let w = teichmuller_root(&r, d).unwrap();
            assert_eq!(r.pow(w, d), 1);
        }
        assert!(teichmuller_root(&r, 5).is_err());
    }

    #[test]
    fn burns_pure_phi_rows() {
        let (s, t) = base();
        let layer = Layer::new(3, &LayerSpec::carlitz(&[0, 1], 2).real()).unwrap();
        let lat = sunit_lattice(3, &s, &t).unwrap();
        let d = burns_det(&layer, &lat, &[vec![5]], &[]).unwrap();
        assert_eq!(d, ZElem::one(layer.group(), &Integers).scale(&5));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn classical_is_linear(a in -4i64..4, b in -4i64..4) {
            let s = vec![Place::Infinity, fin(3, &[0, 1]), fin(3, &[1, 1])];
            let lat = sunit_lattice(3, &s, &[fin(3, &[2, 1])]).unwrap();
            let e = |i: usize, j: usize| WedgeElem::monomial(&[i, j], rat(1));
            let w = e(0, 1).scale(&rat(a)).add(&e(1, 0).scale(&rat(b))).unwrap();
            let lhs = classical_regulator(&lat, &s[1..], &w).unwrap();
            let base = classical_regulator(&lat, &s[1..], &e(0, 1)).unwrap();
            prop_assert_eq!(lhs, base * rat(a - b));
        }

        #[test]
        fn pairing_is_additive(i in 0usize..2, j in 0usize..2) {
            let s = vec![Place::Infinity, fin(3, &[0, 1]), fin(3, &[1, 1])];
            let layer = Layer::new(3, &LayerSpec::constant(9)).unwrap();
            let lat = sunit_lattice(3, &s, &[fin(3, &[2, 1])]).unwrap();
            let phi = vec![0, 1, 2];
            let uv: RatFunc = lat.basis[i].mul(&lat.basis[j]);
            let g = layer.group();
            let lhs = pairing_value(&layer, &s, &uv, &phi).unwrap();
            let rhs = g.add(pairing_value(&layer, &s, &lat.basis[i], &phi).unwrap(), pairing_value(&layer, &s, &lat.basis[j], &phi).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
