//! Augmentation filtrations I(H)^n over Z/p^M, relative filtrations
//! I_{R,H}^n in R[G], and the maps pounds_n, d_E, Val_{sigma,n} and yen.
//!
//! With x_i = e_i - 1 for the canonical generators e_i of H (orders N_i),
//! the monomials x^a with a_i < N_i form an R-basis of R[H]. I^n is spanned
//! by the monomials of total degree >= n together with the reductions of
//! x^c, c_i >= N_i for some i, under (1 + x_i)^{N_i} = 1. Only the parts of
//! those reductions below degree n matter, so I^n is stored as the echelon
//! form of a small module of "low parts".

use std::collections::BTreeMap;
use std::fmt;

use crate::abelian::{FinAbGroup, Hom, Product, Subgroup};
use crate::error::{Error, Result};
use crate::groupring::{CoeffRing, GroupRingElem, Integers, ModElem, ModPow, ZElem};

/// Echelon form of a submodule of (Z/p^M)^n with the Howell property:
/// pivots of minimal valuation, ties to the lowest row, and p^{M-v} times
/// every pivot row folded back into the remaining rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    ring: ModPow,
    ncols: usize,
    rows: Vec<(usize, u32, Vec<u64>)>,
}

impl Echelon {
    pub fn new(ring: ModPow, ncols: usize, gens: Vec<Vec<u64>>) -> Self {
        let r = ring;
        let mut rest: Vec<Vec<u64>> = gens
            .into_iter()
            .map(|v| v.into_iter().map(|a| a % r.modulus).collect::<Vec<_>>())
            .filter(|v| v.iter().any(|&a| a != 0))
            .collect();
        let mut rows = Vec::new();
        for col in 0..ncols {
            let best = rest
                .iter()
                .enumerate()
                .map(|(i, v)| (r.val(v[col]), i))
                .filter(|&(val, _)| val < r.m)
                .min();
            let Some((v, bi)) = best else { continue };
            let mut piv = rest.remove(bi);
            let unit = piv[col] / r.p.pow(v);
            let inv = r.inv(unit).expect("unit part");
            piv.iter_mut().for_each(|a| *a = r.mul(a, &inv));
            let pv = r.p.pow(v);
            for row in rest.iter_mut() {
                let a = row[col];
                if a == 0 {
                    continue;
                }
                let f = a / pv;
                for (x, y) in row.iter_mut().zip(&piv) {
                    *x = r.sub(x, &r.mul(&f, y));
                }
            }
            if v > 0 {
                let s = r.p.pow(r.m - v);
                let sat: Vec<u64> = piv.iter().map(|a| r.mul(a, &s)).collect();
                if sat.iter().any(|&a| a != 0) {
                    rest.push(sat);
                }
            }
            rest.retain(|v| v.iter().any(|&a| a != 0));
            rows.push((col, v, piv));
        }
        Echelon { ring, ncols, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Residual after reduction; zero exactly for members.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let r = &self.ring;
        let mut v: Vec<u64> = v.iter().map(|a| a % r.modulus).collect();
        for (col, val, row) in &self.rows {
            let a = v[*col];
            if a == 0 || r.val(a) < *val {
                continue;
            }
            let f = a / r.p.pow(*val);
            for (x, y) in v.iter_mut().zip(row) {
                *x = r.sub(x, &r.mul(&f, y));
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&a| a == 0)
    }

    /// log_p of the module's cardinality.
    pub fn log_card(&self) -> u32 {
        self.rows.iter().map(|(_, v, _)| self.ring.m - v).sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(|(_, _, r)| r.as_slice())
    }
}

/// Binomial coefficients mod p^M, rows 0..=n.
fn pascal(ring: &ModPow, n: usize) -> Vec<Vec<u64>> {
    let mut t: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![0u64; i + 1];
        row[0] = 1 % ring.modulus;
        row[i] = 1 % ring.modulus;
        for j in 1..i {
            row[j] = ring.add(&t[i - 1][j - 1], &t[i - 1][j]);
        }
        t.push(row);
    }
    t
}

/// Exponent vectors of total degree exactly `deg` with a_i < bound_i,
/// in lexicographic order.
pub fn monomials(bounds: &[u64], deg: usize) -> Vec<Vec<u32>> {
    fn rec(bounds: &[u64], deg: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == bounds.len() {
            if deg == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let i = cur.len();
        let top = (deg as u64).min(bounds[i].saturating_sub(1)) as u32;
        for a in (0..=top).rev() {
            cur.push(a);
            rec(bounds, deg - a as usize, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(bounds, deg, &mut Vec::new(), &mut out);
    out
}

/// Certified precision floor M' = M - n ceil(log_p(n+1)) for degree n < p.
pub fn certified_precision(p: u64, m: u32, n: usize) -> Result<u32> {
    if n as u64 >= p {
        return Err(Error::Precision(format!("degree {n} >= p = {p} is not certified")));
    }
    let mut k = 0u32;
    while p.pow(k) < n as u64 + 1 {
        k += 1;
    }
    let loss = n as u32 * k;
    if loss >= m {
        return Err(Error::Precision(format!("M = {m} leaves no certified digits at degree {n}")));
    }
    Ok(m - loss)
}

/// The filtration R[H] = I^0 > I^1 > ... > I^D over R = Z/p^M.
#[derive(Clone, Debug)]
pub struct AugFiltration {
    ring: ModPow,
    group: FinAbGroup,
    depth: usize,
    binom: Vec<Vec<u64>>,
    /// low[n] = monomials of total degree < n, the coordinates of echelons[n]
    low: Vec<Vec<Vec<u32>>>,
    echelons: Vec<Echelon>,
}

impl AugFiltration {
    pub fn build(h: &FinAbGroup, ring: ModPow, depth: usize) -> Result<Self> {
        if !h.is_p_group(ring.p) {
            return Err(Error::InvalidInput(format!("{:?} is not a {}-group", h.factors(), ring.p)));
        }
        let ns: Vec<u64> = h.factors().to_vec();
        let nmax = ns.iter().copied().max().unwrap_or(1) as usize;
        let binom = pascal(&ring, nmax + depth);
        // reductions of x_i^k for k < N_i + depth, kept as full polynomials
        let reds: Vec<Vec<Vec<u64>>> = ns
            .iter()
            .map(|&n| univariate_reductions(&ring, &binom, n as usize, n as usize + depth))
            .collect();
        let mut low = Vec::with_capacity(depth + 1);
        let mut echelons = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let lows: Vec<Vec<u32>> = (0..n).flat_map(|d| monomials(&ns, d)).collect();
            let pos: BTreeMap<&Vec<u32>, usize> = lows.iter().enumerate().map(|(i, a)| (a, i)).collect();
            let mut gens = Vec::new();
            // per coordinate: plain exponents below min(n, N_i), overflow ones in [N_i, N_i + n)
            let choices: Vec<Vec<usize>> = ns
                .iter()
                .map(|&ni| {
                    let ni = ni as usize;
                    (0..n.min(ni)).chain(ni..ni + n).collect()
                })
                .collect();
            let mut idx = vec![0usize; ns.len()];
            if n > 0 && !ns.is_empty() {
                loop {
                    let c: Vec<usize> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
                    let overflow = c.iter().zip(&ns).any(|(&ci, &ni)| ci >= ni as usize);
                    if overflow && c.iter().sum::<usize>() >= n {
                        // low part of prod_i red(x_i^{c_i})
                        let mut acc: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
                        acc.insert(vec![], 1 % ring.modulus);
                        for (i, &ci) in c.iter().enumerate() {
                            let poly = &reds[i][ci];
                            let mut next = BTreeMap::new();
                            for (mono, a) in &acc {
                                let d0: u32 = mono.iter().sum();
                                for (e, b) in poly.iter().enumerate() {
                                    if *b == 0 || d0 as usize + e >= n {
                                        continue;
                                    }
                                    let mut m2 = mono.clone();
                                    m2.push(e as u32);
                                    let v: &mut u64 = next.entry(m2).or_insert(0);
                                    *v = ring.add(v, &ring.mul(a, b));
                                }
                            }
                            acc = next;
                        }
                        let mut vec = vec![0u64; lows.len()];
                        for (mono, a) in acc {
                            vec[pos[&mono]] = a;
                        }
                        if vec.iter().any(|&a| a != 0) {
                            gens.push(vec);
                        }
                    }
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            break;
                        }
                        idx[k] += 1;
                        if idx[k] < choices[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == idx.len() {
                        break;
                    }
                }
            }
            echelons.push(Echelon::new(ring, lows.len(), gens));
            low.push(lows);
        }
        Ok(AugFiltration { ring, group: h.clone(), depth, binom, low, echelons })
    }

    pub fn ring(&self) -> &ModPow {
        &self.ring
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn binom(&self, k: u64, a: u32) -> u64 {
        if a as u64 > k {
            0
        } else {
            self.binom[k as usize][a as usize]
        }
    }

    /// Coefficient of x^a in the expansion of xi.
    pub fn x_coeff(&self, xi: &ModElem, a: &[u32]) -> u64 {
        let r = &self.ring;
        let mut acc = 0u64;
        for (g, c) in xi.coeffs().iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let gc = self.group.coords(g);
            let mut t = *c;
            for (gi, &ai) in gc.iter().zip(a) {
                t = r.mul(&t, &self.binom(*gi, ai));
                if t == 0 {
                    break;
                }
            }
            acc = r.add(&acc, &t);
        }
        acc
    }

    fn check(&self, xi: &ModElem) -> Result<()> {
        if xi.group() != &self.group || xi.ring() != &self.ring {
            return Err(Error::Mismatch("element does not live in this filtration".into()));
        }
        Ok(())
    }

    /// xi in I^n, for n <= D.
    pub fn contains(&self, xi: &ModElem, n: usize) -> Result<bool> {
        self.check(xi)?;
        if n > self.depth {
            return Err(Error::InvalidInput(format!("degree {n} beyond filtration depth {}", self.depth)));
        }
        let v: Vec<u64> = self.low[n].iter().map(|a| self.x_coeff(xi, a)).collect();
        Ok(self.echelons[n].contains(&v))
    }

    /// Largest n <= D with xi in I^n.
    pub fn degree(&self, xi: &ModElem) -> Result<usize> {
        let mut n = 0;
        while n < self.depth && self.contains(xi, n + 1)? {
            n += 1;
        }
        Ok(n)
    }

    pub fn residue_class(&self, xi: &ModElem) -> Result<AugClass> {
        let n = self.degree(xi)?;
        Ok(AugClass { degree: n, rep: xi.clone(), relative: false, precision: self.ring.m })
    }

    /// x^a written in the group basis.
    pub fn monomial_elem(&self, a: &[u32]) -> ModElem {
        let h = &self.group;
        let mut out = ModElem::one(h, &self.ring);
        for (i, &ai) in a.iter().enumerate() {
            let x = ModElem::aug_gen(h, &self.ring, h.gen(i));
            for _ in 0..ai {
                out = out.mul_unchecked(&x);
            }
        }
        out
    }

    /// Generators of I^n in the group basis: the monomials of degree >= n
    /// and the echelon rows of the low parts.
    pub fn basis(&self, n: usize) -> Vec<ModElem> {
        let ns = self.group.factors();
        let top: usize = ns.iter().map(|&x| x as usize - 1).sum();
        let mut out: Vec<ModElem> = (n..=top)
            .flat_map(|d| monomials(ns, d))
            .map(|a| self.monomial_elem(&a))
            .collect();
        for row in self.echelons[n].rows() {
            let mut e = ModElem::zero(&self.group, &self.ring);
            for (a, c) in self.low[n].iter().zip(row) {
                if *c != 0 {
                    e = e.add_unchecked(&self.monomial_elem(a).scale(c));
                }
            }
            out.push(e);
        }
        out
    }

    /// log_p |I^n|.
    pub fn log_card(&self, n: usize) -> u32 {
        let ns = self.group.factors();
        let top: usize = ns.iter().map(|&x| x as usize - 1).sum();
        let high: usize = (n..=top).map(|d| monomials(ns, d).len()).sum();
        high as u32 * self.ring.m + self.echelons[n].log_card()
    }

    /// Homogeneous degree-n image of a class of I^n, over Z/p^{M'}.
    pub fn poly_image_de(&self, class: &AugClass) -> Result<HomogPoly> {
        if class.relative {
            return Err(Error::InvalidInput("d_E takes a plain class".into()));
        }
        let n = class.degree;
        let m_eff = self.group.factors().iter().map(|&d| log_p(self.ring.p, d)).min().unwrap_or(self.ring.m);
        let mp = certified_precision(self.ring.p, self.ring.m.min(m_eff), n)?;
        let modulus = self.ring.p.pow(mp);
        for d in 0..n {
            for a in monomials(self.group.factors(), d) {
                if self.x_coeff(&class.rep, &a) % modulus != 0 {
                    return Err(Error::InvalidInput("representative has a nonzero lower-degree part".into()));
                }
            }
        }
        let mut terms = BTreeMap::new();
        for a in monomials(&vec![u64::MAX; self.group.rank()], n) {
            let c = if a.iter().zip(self.group.factors()).all(|(&ai, &ni)| (ai as u64) < ni) {
                self.x_coeff(&class.rep, &a) % modulus
            } else {
                0
            };
            if c != 0 {
                terms.insert(a, c);
            }
        }
        Ok(HomogPoly { nvars: self.group.rank(), degree: n, p: self.ring.p, precision: mp, terms })
    }
}

fn log_p(p: u64, mut d: u64) -> u32 {
    let mut k = 0;
    while d > 1 {
        d /= p;
        k += 1;
    }
    k
}

/// red[k] = x^k reduced modulo (1 + x)^N - 1, for k < kmax.
fn univariate_reductions(ring: &ModPow, binom: &[Vec<u64>], n: usize, kmax: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(kmax);
    let mut cur = vec![0u64; n];
    cur[0] = 1 % ring.modulus;
    for _ in 0..kmax {
        out.push(cur.clone());
        // multiply by x
        let top = cur[n - 1];
        let mut next = vec![0u64; n];
        next[1..n].copy_from_slice(&cur[..n - 1]);
        if top != 0 {
            // x^N = -sum_{j=1}^{N-1} C(N, j) x^j
            for j in 1..n {
                next[j] = ring.sub(&next[j], &ring.mul(&top, &binom[n][j]));
            }
        }
        cur = next;
    }
    out
}

/// A class [xi]_(n) or [xi]_(n,H), with the ring precision M.
#[derive(Clone, Debug, PartialEq)]
pub struct AugClass {
    pub degree: usize,
    pub rep: ModElem,
    pub relative: bool,
    pub precision: u32,
}

/// Homogeneous polynomial in s_1..s_d over Z/p^{precision}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    pub nvars: usize,
    pub degree: usize,
    pub p: u64,
    pub precision: u32,
    pub terms: BTreeMap<Vec<u32>, u64>,
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let mono: Vec<String> = a
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("s{}", i + 1) } else { format!("s{}^{e}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{} (mod {}^{})", parts.join(" + "), self.p, self.precision)
    }
}

impl HomogPoly {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    fn ring(&self) -> ModPow {
        ModPow::new(self.p, self.precision).expect("precision")
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = self.precision.min(o.precision);
        let r = ModPow::new(self.p, prec).expect("precision");
        let mut terms: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let m: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                let v = terms.entry(m).or_insert(0);
                *v = r.add(v, &r.mul(x, y));
            }
        }
        terms.retain(|_, v| *v != 0);
        HomogPoly { nvars: self.nvars, degree: self.degree + o.degree, p: self.p, precision: prec, terms }
    }

    pub fn scale(&self, c: i64) -> Self {
        let r = self.ring();
        let c = r.from_i64(c);
        let mut terms: BTreeMap<Vec<u32>, u64> = self.terms.iter().map(|(a, x)| (a.clone(), r.mul(x, &c))).collect();
        terms.retain(|_, v| *v != 0);
        HomogPoly { terms, ..self.clone() }
    }

    /// Reduction to a lower precision.
    pub fn at_precision(&self, prec: u32) -> Self {
        let prec = prec.min(self.precision);
        let m = self.p.pow(prec);
        let mut terms: BTreeMap<Vec<u32>, u64> = self.terms.iter().map(|(a, x)| (a.clone(), x % m)).collect();
        terms.retain(|_, v| *v != 0);
        HomogPoly { precision: prec, terms, ..self.clone() }
    }

    /// Equality modulo p^{min precision}.
    pub fn eq_mod(&self, o: &Self) -> bool {
        let prec = self.precision.min(o.precision);
        self.at_precision(prec).terms == o.at_precision(prec).terms
    }

    /// Scales so that the first nonzero coefficient becomes a power of p,
    /// returning the unit used. The zero polynomial is unchanged.
    pub fn normalized(&self) -> Self {
        let r = self.ring();
        match self.terms.values().next() {
            None => self.clone(),
            Some(&c) => {
                let v = r.val(c);
                let unit = c / self.p.pow(v);
                let inv = r.inv(unit).expect("unit");
                let mut terms: BTreeMap<Vec<u32>, u64> =
                    self.terms.iter().map(|(a, x)| (a.clone(), r.mul(x, &inv))).collect();
                terms.retain(|_, v| *v != 0);
                HomogPoly { terms, ..self.clone() }
            }
        }
    }
}

/// I_{R,H}^n inside R[G] through H's inclusion, with coset representatives
/// of minimal index.
#[derive(Clone, Debug)]
pub struct RelativeFiltration {
    pub g: FinAbGroup,
    pub incl: Hom,
    pub filt: AugFiltration,
    pub reps: Vec<usize>,
    /// position of each element of G as (coset, element of H)
    place: Vec<(usize, usize)>,
}

impl RelativeFiltration {
    pub fn new(incl: &Hom, ring: ModPow, depth: usize) -> Result<Self> {
        let g = incl.dst.clone();
        let table = incl.table();
        let sub = Subgroup::generated(&g, &table);
        if sub.order() != incl.src.order() {
            return Err(Error::InvalidInput("H -> G is not injective".into()));
        }
        let (reps, _) = sub.cosets(&g);
        let mut place = vec![(usize::MAX, 0); g.order()];
        for (ci, &r) in reps.iter().enumerate() {
            for (h, &x) in table.iter().enumerate() {
                place[g.add(r, x)] = (ci, h);
            }
        }
        let filt = AugFiltration::build(&incl.src, ring, depth)?;
        Ok(RelativeFiltration { g, incl: incl.clone(), filt, reps, place })
    }

    pub fn ring(&self) -> &ModPow {
        self.filt.ring()
    }

    /// Per-coset components in R[H], in representative order.
    pub fn decompose(&self, xi: &ModElem) -> Result<Vec<ModElem>> {
        if xi.group() != &self.g || xi.ring() != self.ring() {
            return Err(Error::Mismatch("element does not live over G".into()));
        }
        let h = &self.incl.src;
        let mut comps = vec![ModElem::zero(h, self.ring()); self.reps.len()];
        for (x, c) in xi.coeffs().iter().enumerate() {
            if *c != 0 {
                let (ci, hi) = self.place[x];
                let prev = *comps[ci].coeff(hi);
                comps[ci].set_coeff(hi, self.ring().add(&prev, c));
            }
        }
        Ok(comps)
    }

    /// pounds_n: sum of rep_gamma times the component at gamma.
    pub fn assemble(&self, comps: &[ModElem]) -> Result<ModElem> {
        if comps.len() != self.reps.len() {
            return Err(Error::Mismatch("component count".into()));
        }
        let table = self.incl.table();
        let mut out = ModElem::zero(&self.g, self.ring());
        for (ci, comp) in comps.iter().enumerate() {
            for (hi, c) in comp.coeffs().iter().enumerate() {
                if *c != 0 {
                    let x = self.g.add(self.reps[ci], table[hi]);
                    let prev = *out.coeff(x);
                    out.set_coeff(x, self.ring().add(&prev, c));
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, xi: &ModElem, n: usize) -> Result<bool> {
        for c in self.decompose(xi)? {
            if !self.filt.contains(&c, n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn degree(&self, xi: &ModElem) -> Result<usize> {
        let comps = self.decompose(xi)?;
        let mut n = self.filt.depth();
        for c in &comps {
            n = n.min(self.filt.degree(c)?);
        }
        Ok(n)
    }

    pub fn residue_class(&self, xi: &ModElem) -> Result<AugClass> {
        Ok(AugClass { degree: self.degree(xi)?, rep: xi.clone(), relative: true, precision: self.ring().m })
    }

    /// Whether two elements of I_H^n agree modulo I_H^{n+1}.
    pub fn congruent(&self, a: &ModElem, b: &ModElem, n: usize) -> Result<bool> {
        self.contains(&a.sub(b)?, n)
    }

    /// Val_{sigma,n}: coefficient of s^n per coset, as an element of
    /// Z/p^{M'}[Gamma] via `quot: G -> Gamma`. H must be cyclic and sigma
    /// (an element of H) must generate it.
    pub fn val_map(&self, class: &AugClass, sigma: usize, quot: &Hom) -> Result<ModElem> {
        let h = &self.incl.src;
        if h.rank() > 1 {
            return Err(Error::InvalidInput("Val needs a cyclic H".into()));
        }
        let order = h.order();
        let mut dlog = vec![usize::MAX; order];
        let mut x = 0;
        for k in 0..order {
            dlog[x] = k;
            x = h.add(x, sigma);
        }
        if dlog.iter().any(|&k| k == usize::MAX) {
            return Err(Error::InvalidInput("sigma does not generate H".into()));
        }
        let n = class.degree;
        let m_eff = log_p(self.ring().p, order as u64).min(self.ring().m);
        let mp = certified_precision(self.ring().p, m_eff, n)?;
        let out_ring = ModPow::new(self.ring().p, mp)?;
        let binom = pascal(self.ring(), order.max(n));
        let b = |k: usize, j: usize| if j > k { 0 } else { binom[k][j] };
        let mut out = ModElem::zero(&quot.dst, &out_ring);
        for (ci, comp) in self.decompose(&class.rep)?.iter().enumerate() {
            let mut coeffs = vec![0u64; n + 1];
            for (hi, c) in comp.coeffs().iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                for (j, slot) in coeffs.iter_mut().enumerate() {
                    *slot = self.ring().add(slot, &self.ring().mul(c, &b(dlog[hi], j)));
                }
            }
            if coeffs[..n].iter().any(|&c| c % out_ring.modulus != 0) {
                return Err(Error::InvalidInput("class has a nonzero lower-degree part".into()));
            }
            let gamma = quot.apply(self.reps[ci]);
            let prev = *out.coeff(gamma);
            out.set_coeff(gamma, out_ring.add(&prev, &(coeffs[n] % out_ring.modulus)));
        }
        Ok(out)
    }
}

/// The map yen: Gamma' x H' -> Gamma' x H'/H x H, (g, h) -> (g, h mod H, w h)
/// with w = |H'/H|. `split` presents xi's group as Gamma' x H'; `h` is a
/// subgroup of H' with w H' inside H. Returns the target group as a product
/// (Gamma', H'/H, H), the inclusion of H into it, and the image of xi.
pub fn yen_map<R: CoeffRing>(
    xi: &GroupRingElem<R>,
    split: &Product,
    h: &Subgroup,
) -> Result<(Product, Hom, GroupRingElem<R>)> {
    if split.components.len() != 2 || split.group() != xi.group() {
        return Err(Error::InvalidInput("yen needs G presented as Gamma' x H'".into()));
    }
    let gp = split.components[0].clone();
    let hp = split.components[1].clone();
    let q = hp.quotient(h)?;
    let w = q.dst.order() as i128;
    let h_incl = h.as_group(&hp)?;
    let h_table = h_incl.table();
    let mut back = vec![usize::MAX; hp.order()];
    for (i, &x) in h_table.iter().enumerate() {
        back[x] = i;
    }
    let target = Product::new(vec![gp, q.dst.clone(), h_incl.src.clone()])?;
    let g = xi.group();
    let images: Vec<usize> = (0..g.rank())
        .map(|i| {
            let parts = split.split(g.gen(i));
            let wh = hp.mul_int(parts[1], w);
            if back[wh] == usize::MAX {
                return Err(Error::InvalidInput("w H' is not inside H".into()));
            }
            Ok(target.join(&[parts[0], q.apply(parts[1]), back[wh]]))
        })
        .collect::<Result<_>>()?;
    let f = Hom::new(g.clone(), target.group().clone(), images)?;
    let image = xi.pushforward(&f)?;
    let incl = target.inclusion(2)?;
    Ok((target, incl, image))
}

/// Integer element reduced into R[G] for R = Z/p^M.
pub fn reduce_int(xi: &ZElem, ring: &ModPow) -> ModElem {
    xi.reduce(ring)
}

/// Symmetric integer lift of a Z/p^M element.
pub fn lift_int(xi: &ModElem) -> ZElem {
    let r = *xi.ring();
    xi.map_ring(&Integers, |&a| r.lift(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, m: u32) -> ModPow {
        ModPow::new(p, m).unwrap()
    }

    fn el(h: &FinAbGroup, r: &ModPow, c: &[i64]) -> ModElem {
        ModElem::new(h.clone(), *r, c.iter().map(|&a| r.from_i64(a)).collect()).unwrap()
    }

    #[test]
    fn spec_examples() {
        // Z/4[Z/2]: I^2 = 2 I
        let h = FinAbGroup::cyclic(2);
        let r = ring(2, 2);
        let f = AugFiltration::build(&h, r, 2).unwrap();
        let x = el(&h, &r, &[-1, 1]);
        assert!(f.contains(&x, 1).unwrap());
        assert!(!f.contains(&x, 2).unwrap());
        assert!(f.contains(&x.scale(&2), 2).unwrap());
        assert_eq!(f.log_card(2), f.log_card(1) - 1);
        // F_3[Z/3]: I^3 = 0
        let h = FinAbGroup::cyclic(3);
        let r = ring(3, 1);
        let f = AugFiltration::build(&h, r, 3).unwrap();
        assert_eq!(f.log_card(3), 0);
        assert_eq!(f.log_card(2), 1);
        // trivial H: I^1 = 0
        let f = AugFiltration::build(&FinAbGroup::trivial(), ring(3, 2), 2).unwrap();
        assert_eq!(f.log_card(1), 0);
        // sigma - 1 in I \ I^2 for Z/4, M = 3
        let h = FinAbGroup::cyclic(4);
        let r = ring(2, 3);
        let f = AugFiltration::build(&h, r, 2).unwrap();
        let x = el(&h, &r, &[-1, 1, 0, 0]);
        assert_eq!(f.degree(&x).unwrap(), 1);
    }

    #[test]
    fn de_examples() {
        let h = FinAbGroup::new(vec![27, 27]).unwrap();
        let r = ring(3, 3);
        let f = AugFiltration::build(&h, r, 2).unwrap();
        let x1 = ModElem::aug_gen(&h, &r, h.gen(0));
        let x2 = ModElem::aug_gen(&h, &r, h.gen(1));
        let c = f.residue_class(&x1.mul(&x2).unwrap()).unwrap();
        assert_eq!(c.degree, 2);
        let poly = f.poly_image_de(&c).unwrap();
        assert_eq!(poly.precision, 1);
        assert_eq!(poly.terms, BTreeMap::from([(vec![1, 1], 1)]));
        let c = f.residue_class(&x1.mul(&x1).unwrap()).unwrap();
        assert_eq!(f.poly_image_de(&c).unwrap().terms, BTreeMap::from([(vec![2, 0], 1)]));
        // degree one keeps two digits
        let c = f.residue_class(&x1.add(&x2.scale(&5)).unwrap()).unwrap();
        let poly = f.poly_image_de(&c).unwrap();
        assert_eq!(poly.precision, 2);
        assert_eq!(poly.terms, BTreeMap::from([(vec![0, 1], 5), (vec![1, 0], 1)]));
    }

    #[test]
    fn val_examples() {
        // G = Z/2 x Z/27 with H the Z/27 factor
        let gamma = FinAbGroup::cyclic(2);
        let hh = FinAbGroup::cyclic(27);
        let prod = Product::new(vec![gamma.clone(), hh.clone()]).unwrap();
        let g = prod.group().clone();
        let r = ring(3, 3);
        let incl = prod.inclusion(1).unwrap();
        let quot = prod.projection(0).unwrap();
        let rf = RelativeFiltration::new(&incl, r, 2).unwrap();
        let sigma = prod.join(&[0, 1]);
        let gam = prod.join(&[1, 0]);
        let x = ModElem::aug_gen(&g, &r, sigma);
        let xi = ModElem::basis(&g, &r, gam).mul(&x).unwrap().mul(&x).unwrap();
        let c = rf.residue_class(&xi).unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(rf.val_map(&c, 1, &quot).unwrap().coeffs(), &[0, 1]);
        let both = ModElem::basis(&g, &r, 0).add(&ModElem::basis(&g, &r, gam)).unwrap().mul(&x).unwrap();
        let c = rf.residue_class(&both).unwrap();
        let v = rf.val_map(&c, 1, &quot).unwrap();
        assert_eq!(v.coeffs(), &[1, 1]);
        // sigma' = 2 sigma: Val_sigma = 2^n Val_sigma'... at n = 1, 2 * Val_sigma' = Val_sigma
        let v2 = rf.val_map(&c, 2, &quot).unwrap();
        let rv = *v.ring();
        for (a, b) in v.coeffs().iter().zip(v2.coeffs()) {
            assert_eq!(rv.mul(b, &2), *a);
        }
        // 1 - sigma has Val = -1
        let c = rf.residue_class(&x.neg()).unwrap();
        let v = rf.val_map(&c, 1, &quot).unwrap();
        assert_eq!(v.coeffs(), &[rv.from_i64(-1), 0]);
    }

    #[test]
    fn relative_examples() {
        let gamma = FinAbGroup::cyclic(2);
        let hh = FinAbGroup::cyclic(3);
        let prod = Product::new(vec![gamma, hh]).unwrap();
        let g = prod.group().clone();
        let r = ring(3, 4);
        let rf = RelativeFiltration::new(&prod.inclusion(1).unwrap(), r, 2).unwrap();
        let h = prod.join(&[0, 1]);
        let g1 = prod.join(&[1, 0]);
        let x = ModElem::aug_gen(&g, &r, h);
        let xi = ModElem::basis(&g, &r, g1).mul(&x).unwrap();
        assert_eq!(rf.degree(&xi).unwrap(), 1);
        let comps = rf.decompose(&xi).unwrap();
        assert_eq!(rf.assemble(&comps).unwrap(), xi);
        let two = ModElem::basis(&g, &r, 0).sub(&ModElem::basis(&g, &r, g1)).unwrap().mul(&x).unwrap();
        assert!(rf.contains(&two, 1).unwrap() && !rf.contains(&two, 2).unwrap());
        let bad = ModElem::basis(&g, &r, g1);
        assert!(!rf.contains(&bad, 1).unwrap());
    }

    #[test]
    fn yen_lemma() {
        // G = H' = Z/27, H = 3H', w = 3
        let hp = FinAbGroup::cyclic(27);
        let split = Product::new(vec![FinAbGroup::trivial(), hp.clone()]).unwrap();
        let h = hp.subgroup(&[3]);
        let r = ring(3, 2);
        let g = split.group().clone();
        let s = ModElem::aug_gen(&g, &r, 1);
        let sig = ModElem::aug_gen(&g, &r, 3);
        let (target, incl, img) = yen_map(&s, &split, &h).unwrap();
        assert_eq!(target.group().order(), 27);
        assert!(!img.is_zero());
        let rf_g = RelativeFiltration::new(&h.as_group(&g).unwrap(), r, 2).unwrap();
        let rf_t = RelativeFiltration::new(&incl, r, 2).unwrap();
        let one = ModElem::one(&g, &r);
        for xi in [one.clone(), s.clone(), s.mul(&s).unwrap(), sig.clone(), sig.mul(&sig).unwrap(), sig.mul(&s).unwrap()] {
            for n in 0..=2 {
                let y = yen_map(&xi, &split, &h).unwrap().2;
                assert_eq!(rf_g.contains(&xi, n).unwrap(), rf_t.contains(&y, n).unwrap());
            }
        }
        // yen(rep (sigma - 1)^n) = w^n rep (sigma - 1)^n modulo the next ideal
        let sig_t = ModElem::aug_gen(target.group(), &r, incl.apply(1));
        for n in 0..=1usize {
            for rep in 0..3 {
                let lhs = ModElem::basis(&g, &r, rep).mul(&sig.pow(n as u32)).unwrap();
                let y = yen_map(&lhs, &split, &h).unwrap().2;
                let rep_t = yen_map(&ModElem::basis(&g, &r, rep), &split, &h).unwrap().2;
                let rhs = rep_t.mul(&sig_t.pow(n as u32)).unwrap().scale(&r.pow(3, n as u64));
                assert!(rf_t.contains(&y.sub(&rhs).unwrap(), n + 1).unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn filtration_is_multiplicative(a in proptest::collection::vec(-4i64..4, 9), b in proptest::collection::vec(-4i64..4, 9)) {
            let h = FinAbGroup::new(vec![3, 3]).unwrap();
            let r = ring(3, 2);
            let f = AugFiltration::build(&h, r, 3).unwrap();
            let mut x = el(&h, &r, &a);
            let mut y = el(&h, &r, &b);
            // push into I^1 by subtracting the augmentation
            let ax = x.augment();
            x.set_coeff(0, r.sub(x.coeff(0), &ax));
            let ay = y.augment();
            y.set_coeff(0, r.sub(y.coeff(0), &ay));
            let dx = f.degree(&x).unwrap();
            let dy = f.degree(&y).unwrap();
            let xy = x.mul(&y).unwrap();
            if dx + dy <= 3 {
                prop_assert!(f.contains(&xy, dx + dy).unwrap());
            }
            prop_assert!(f.contains(&x, 1).unwrap());
        }

        #[test]
        fn de_is_multiplicative(a in 1i128..7, b in 1i128..7, c in 1i128..7, u in -3i64..3) {
            let h = FinAbGroup::cyclic(2401);
            let r = ring(7, 4);
            let f = AugFiltration::build(&h, r, 3).unwrap();
            let x = ModElem::aug_gen(&h, &r, h.index(&[a])).scale(&r.from_i64(7 * u + 1));
            let y = ModElem::aug_gen(&h, &r, h.index(&[b])).mul(&ModElem::aug_gen(&h, &r, h.index(&[c]))).unwrap();
            let cx = f.residue_class(&x).unwrap();
            let cy = f.residue_class(&y).unwrap();
            let cxy = f.residue_class(&x.mul(&y).unwrap()).unwrap();
            prop_assert_eq!((cx.degree, cy.degree, cxy.degree), (1, 2, 3));
            let px = f.poly_image_de(&cx).unwrap();
            let py = f.poly_image_de(&cy).unwrap();
            let pxy = f.poly_image_de(&cxy).unwrap();
            prop_assert!(px.mul(&py).eq_mod(&pxy));
            prop_assert_eq!(pxy.terms.get(&vec![3]).copied(), Some((a * b * c * (7 * u as i128 + 1)).rem_euclid(7) as u64));
        }
    }

    #[test]
    fn degree_at_least_p_is_rejected_for_de() {
        let h = FinAbGroup::cyclic(3);
        let r = ring(3, 3);
        let f = AugFiltration::build(&h, r, 3).unwrap();
        let x = ModElem::aug_gen(&h, &r, 1).pow(3);
        let c = AugClass { degree: 3, rep: x, relative: false, precision: 3 };
        assert!(matches!(f.poly_image_de(&c), Err(Error::Precision(_))));
    }
}
