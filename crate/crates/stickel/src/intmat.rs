//! Small dense integer matrices: Hermite and Smith forms with transforms,
//! integer kernels and determinants. Entries are i128 with checked arithmetic.

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i128>>;

fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow("integer matrix"))
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0; c]; r]
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = b.first().map_or(0, |r| r.len());
    let mut out = zeros(a.len(), n);
    for (i, row) in a.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = ck(out[i][j].checked_add(ck(x.checked_mul(b[k][j]))?))?;
            }
        }
    }
    Ok(out)
}

/// Row vector times matrix.
pub fn vec_mul(v: &[i128], b: &Mat) -> Result<Vec<i128>> {
    Ok(mat_mul(&vec![v.to_vec()], b)?.remove(0))
}

/// g = gcd(a, b) >= 0 with s a + t b = g.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn row_combine(m: &mut Mat, i: usize, j: usize, coef: [i128; 4]) -> Result<()> {
    // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
    let [a, b, c, d] = coef;
    for k in 0..m[i].len() {
        let (x, y) = (m[i][k], m[j][k]);
        m[i][k] = ck(ck(a.checked_mul(x))?.checked_add(ck(b.checked_mul(y))?))?;
        m[j][k] = ck(ck(c.checked_mul(x))?.checked_add(ck(d.checked_mul(y))?))?;
    }
    Ok(())
}

fn row_axpy(m: &mut Mat, dst: usize, src: usize, f: i128) -> Result<()> {
    if f == 0 {
        return Ok(());
    }
    for k in 0..m[dst].len() {
        m[dst][k] = ck(m[dst][k].checked_sub(ck(f.checked_mul(m[src][k]))?))?;
    }
    Ok(())
}

/// Row Hermite normal form with transform: returns (H, U) with U A = H,
/// U unimodular, H in reduced row echelon form over Z (positive pivots,
/// entries above a pivot reduced into [0, pivot)). Zero rows are kept at the
/// bottom so that the matching rows of U span the left kernel.
pub fn hnf_with_transform(a: &Mat, ncols: usize) -> Result<(Mat, Mat)> {
    let r = a.len();
    let mut h = a.clone();
    let mut u = identity(r);
    let mut row = 0;
    for col in 0..ncols {
        if row == r {
            break;
        }
        for i in row + 1..r {
            if h[i][col] == 0 {
                continue;
            }
            let (x, y) = (h[row][col], h[i][col]);
            let (g, s, t) = ext_gcd(x, y);
            let coef = [s, t, -y / g, x / g];
            row_combine(&mut h, row, i, coef)?;
            row_combine(&mut u, row, i, coef)?;
        }
        if h[row][col] == 0 {
            continue;
        }
        if h[row][col] < 0 {
            for v in h[row].iter_mut().chain(u[row].iter_mut()) {
                *v = -*v;
            }
        }
        let piv = h[row][col];
        for i in 0..row {
            let f = h[i][col].div_euclid(piv);
            row_axpy(&mut h, i, row, f)?;
            row_axpy(&mut u, i, row, f)?;
        }
        row += 1;
    }
    Ok((h, u))
}

/// Nonzero rows of the Hermite form of the row span.
pub fn hnf(a: &Mat, ncols: usize) -> Result<Mat> {
    let (h, _) = hnf_with_transform(a, ncols)?;
    Ok(h.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect())
}

/// Basis of the left kernel {x : x A = 0}, in Hermite form.
pub fn left_kernel(a: &Mat, ncols: usize) -> Result<Mat> {
    let (h, u) = hnf_with_transform(a, ncols)?;
    let ker: Mat = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|&x| x == 0))
        .map(|(_, ur)| ur)
        .collect();
    if ker.is_empty() {
        return Ok(ker);
    }
    hnf(&ker, a.len())
}

/// Smith form P A Q = D of an r x c matrix; `diag` has length c, padded with
/// zeros for columns beyond the rank, and satisfies d_i | d_{i+1} on the
/// nonzero part.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<i128>,
    pub p: Mat,
    pub q: Mat,
}

pub fn smith(a: &Mat, ncols: usize) -> Result<Smith> {
    let r = a.len();
    let c = ncols;
    let mut m = a.clone();
    let mut p = identity(r);
    let mut q = identity(c);
    let n = r.min(c);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if m[i][j] != 0
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            m.swap(t, bi);
            p.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
            let piv = m[t][t];
            let mut dirty = false;
            for i in t + 1..r {
                let f = m[i][t].div_euclid(piv);
                row_axpy(&mut m, i, t, f)?;
                row_axpy(&mut p, i, t, f)?;
                dirty |= m[i][t] != 0;
            }
            for j in t + 1..c {
                let f = m[t][j].div_euclid(piv);
                for i in 0..r {
                    m[i][j] = ck(m[i][j].checked_sub(ck(f.checked_mul(m[i][t]))?))?;
                }
                for row in q.iter_mut() {
                    row[j] = ck(row[j].checked_sub(ck(f.checked_mul(row[t]))?))?;
                }
                dirty |= m[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| m[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    row_axpy(&mut m, t, i, -1)?;
                    row_axpy(&mut p, t, i, -1)?;
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for v in m[t].iter_mut().chain(p[t].iter_mut()) {
                *v = -*v;
            }
        }
    }
    let diag = (0..c).map(|i| if i < n { m[i][i] } else { 0 }).collect();
    Ok(Smith { diag, p, q })
}

/// Determinant by fraction-free elimination.
pub fn det(a: &Mat) -> Result<i128> {
    let n = a.len();
    if n == 0 {
        return Ok(1);
    }
    let mut m = a.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = ck(ck(m[i][j].checked_mul(m[k][k]))?
                    .checked_sub(ck(m[i][k].checked_mul(m[k][j]))?))?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}
