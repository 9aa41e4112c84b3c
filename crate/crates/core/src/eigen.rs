//! Dense real nonsymmetric eigenvalue problem.
//!
//! Balancing, reduction to upper Hessenberg form by stabilised elementary
//! similarity transforms, then the Francis double-shift QR iteration.
//! Eigenvectors, when needed, come from complex inverse iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

const RADIX: f64 = 2.0;
const MAX_ITS_PER_EIGENVALUE: usize = 60;

/// Square matrix stored row-major, 1-based internally for the QR sweep.
struct Work {
    n: usize,
    a: Vec<f64>,
}

impl Work {
    fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut a = vec![0.0; (n + 1) * (n + 1)];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidArgument(format!("non-finite entry at ({i}, {j})")));
                }
                a[(i + 1) * (n + 1) + j + 1] = v;
            }
        }
        Ok(Work { n, a })
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.n + 1) + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[i * (self.n + 1) + j]
    }

    fn balance(&mut self) {
        let n = self.n;
        let sqrdx = RADIX * RADIX;
        let mut done = false;
        while !done {
            done = true;
            for i in 1..=n {
                let mut r = 0.0;
                let mut c = 0.0;
                for j in 1..=n {
                    if j != i {
                        c += self.at(j, i).abs();
                        r += self.at(i, j).abs();
                    }
                }
                if c == 0.0 || r == 0.0 {
                    continue;
                }
                let s = c + r;
                let mut f = 1.0;
                let mut g = r / RADIX;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        *self.at_mut(i, j) *= g;
                    }
                    for j in 1..=n {
                        *self.at_mut(j, i) *= f;
                    }
                }
            }
        }
    }

    fn hessenberg(&mut self) {
        let n = self.n;
        for m in 2..n {
            let mut x = 0.0_f64;
            let mut piv = m;
            for j in m..=n {
                if self.at(j, m - 1).abs() > x.abs() {
                    x = self.at(j, m - 1);
                    piv = j;
                }
            }
            if piv != m {
                for j in (m - 1)..=n {
                    let (p, q) = (piv * (n + 1) + j, m * (n + 1) + j);
                    self.a.swap(p, q);
                }
                for j in 1..=n {
                    let (p, q) = (j * (n + 1) + piv, j * (n + 1) + m);
                    self.a.swap(p, q);
                }
            }
            if x != 0.0 {
                for i in (m + 1)..=n {
                    let mut y = self.at(i, m - 1);
                    if y != 0.0 {
                        y /= x;
                        *self.at_mut(i, m - 1) = y;
                        for j in m..=n {
                            let v = self.at(m, j);
                            *self.at_mut(i, j) -= y * v;
                        }
                        for j in 1..=n {
                            let v = self.at(j, i);
                            *self.at_mut(j, m) += y * v;
                        }
                    }
                }
            }
        }
        for i in 1..=n {
            for j in 1..i.saturating_sub(1) {
                *self.at_mut(i, j) = 0.0;
            }
        }
    }

    /// Francis double-shift QR on the Hessenberg matrix; destroys it.
    fn hqr(&mut self) -> Result<Vec<Complex64>> {
        let n = self.n;
        let mut wr = vec![0.0; n + 1];
        let mut wi = vec![0.0; n + 1];
        let mut anorm = 0.0;
        for i in 1..=n {
            for j in i.saturating_sub(1).max(1)..=n {
                anorm += self.at(i, j).abs();
            }
        }
        let mut nn = n;
        let mut t = 0.0;
        let (mut p, mut q, mut r): (f64, f64, f64);
        while nn >= 1 {
            let mut its = 0;
            loop {
                let mut l = nn;
                while l >= 2 {
                    let mut s = self.at(l - 1, l - 1).abs() + self.at(l, l).abs();
                    if s == 0.0 {
                        s = anorm;
                    }
                    if self.at(l, l - 1).abs() + s == s {
                        *self.at_mut(l, l - 1) = 0.0;
                        break;
                    }
                    l -= 1;
                }
                let mut x = self.at(nn, nn);
                if l == nn {
                    wr[nn] = x + t;
                    wi[nn] = 0.0;
                    nn -= 1;
                    break;
                }
                let mut y = self.at(nn - 1, nn - 1);
                let mut w = self.at(nn, nn - 1) * self.at(nn - 1, nn);
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + z.copysign(p);
                        wr[nn - 1] = x + z;
                        wr[nn] = if z != 0.0 { x - w / z } else { x + z };
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                    break;
                }
                if its == MAX_ITS_PER_EIGENVALUE {
                    return Err(Error::NoConvergence(its));
                }
                if its == 10 || its == 20 {
                    // exceptional shift
                    t += x;
                    for i in 1..=nn {
                        *self.at_mut(i, i) -= x;
                    }
                    let s = self.at(nn, nn - 1).abs() + self.at(nn - 1, nn - 2).abs();
                    x = 0.75 * s;
                    y = x;
                    w = -0.4375 * s * s;
                }
                its += 1;
                let mut m = nn - 2;
                loop {
                    let z = self.at(m, m);
                    let r0 = x - z;
                    let s0 = y - z;
                    p = (r0 * s0 - w) / self.at(m + 1, m) + self.at(m, m + 1);
                    q = self.at(m + 1, m + 1) - z - r0 - s0;
                    r = self.at(m + 2, m + 1);
                    let s = p.abs() + q.abs() + r.abs();
                    p /= s;
                    q /= s;
                    r /= s;
                    if m == l {
                        break;
                    }
                    let u = self.at(m, m - 1).abs() * (q.abs() + r.abs());
                    let v = p.abs() * (self.at(m - 1, m - 1).abs() + z.abs() + self.at(m + 1, m + 1).abs());
                    if u + v == v {
                        break;
                    }
                    m -= 1;
                }
                for i in (m + 2)..=nn {
                    *self.at_mut(i, i - 2) = 0.0;
                    if i != m + 2 {
                        *self.at_mut(i, i - 3) = 0.0;
                    }
                }
                let mut k = m;
                while k < nn {
                    if k != m {
                        p = self.at(k, k - 1);
                        q = self.at(k + 1, k - 1);
                        r = if k != nn - 1 { self.at(k + 2, k - 1) } else { 0.0 };
                        x = p.abs() + q.abs() + r.abs();
                        if x != 0.0 {
                            p /= x;
                            q /= x;
                            r /= x;
                        }
                    }
                    let s = (p * p + q * q + r * r).sqrt().copysign(p);
                    if s != 0.0 {
                        if k == m {
                            if l != m {
                                *self.at_mut(k, k - 1) = -self.at(k, k - 1);
                            }
                        } else {
                            *self.at_mut(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        let z = r / s;
                        q /= p;
                        r /= p;
                        for j in k..=nn {
                            let mut pp = self.at(k, j) + q * self.at(k + 1, j);
                            if k != nn - 1 {
                                pp += r * self.at(k + 2, j);
                                *self.at_mut(k + 2, j) -= pp * z;
                            }
                            *self.at_mut(k + 1, j) -= pp * y;
                            *self.at_mut(k, j) -= pp * x;
                        }
                        let mmin = nn.min(k + 3);
                        for i in l..=mmin {
                            let mut pp = x * self.at(i, k) + y * self.at(i, k + 1);
                            if k != nn - 1 {
                                pp += z * self.at(i, k + 2);
                                *self.at_mut(i, k + 2) -= pp * r;
                            }
                            *self.at_mut(i, k + 1) -= pp * q;
                            *self.at_mut(i, k) -= pp;
                        }
                    }
                    k += 1;
                }
            }
        }
        Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
    }
}

/// All eigenvalues of a square real matrix given as rows.
///
/// The result is sorted by descending real part, then descending imaginary
/// part, so conjugate pairs sit next to each other.
pub fn eigenvalues<R: AsRef<[f64]>>(rows: &[R]) -> Result<Vec<Complex64>> {
    let mut w = Work::from_rows(rows)?;
    if w.n == 0 {
        return Ok(vec![]);
    }
    w.balance();
    w.hessenberg();
    let mut ev = w.hqr()?;
    ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(ev)
}

/// Frobenius norm.
pub fn norm<R: AsRef<[f64]>>(rows: &[R]) -> f64 {
    rows.iter()
        .flat_map(|r| r.as_ref().iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

/// Unit eigenvector for an (approximate) eigenvalue `lambda`, by inverse
/// iteration on `A - lambda I` with a tiny shift offset.
pub fn eigenvector<R: AsRef<[f64]>>(rows: &[R], lambda: Complex64) -> Result<Vec<Complex64>> {
    let n = rows.len();
    let scale = norm(rows).max(1.0);
    let shift = lambda + Complex64::new(scale * 1e-10, scale * 1e-10);
    let mut lu: Vec<Vec<Complex64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.as_ref()
                .iter()
                .enumerate()
                .map(|(j, &v)| Complex64::new(v, 0.0) - if i == j { shift } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let tiny = scale * f64::EPSILON;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| lu[a][col].norm().total_cmp(&lu[b][col].norm()))
            .unwrap_or(col);
        lu.swap(col, piv);
        perm.swap(col, piv);
        if lu[col][col].norm() < tiny {
            lu[col][col] = Complex64::new(tiny, 0.0);
        }
        let d = lu[col][col];
        for i in (col + 1)..n {
            let m = lu[i][col] / d;
            lu[i][col] = m;
            for j in (col + 1)..n {
                let v = lu[col][j];
                lu[i][j] -= m * v;
            }
        }
    }
    let solve = |b: &[Complex64]| -> Vec<Complex64> {
        let mut x: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = x[j];
                x[i] -= lu[i][j] * v;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let v = x[j];
                x[i] -= lu[i][j] * v;
            }
            x[i] /= lu[i][i];
        }
        x
    };
    let normalize = |v: &mut Vec<Complex64>| {
        let s = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if s > 0.0 && s.is_finite() {
            v.iter_mut().for_each(|c| *c /= s);
        }
    };
    let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.0)).collect();
    normalize(&mut v);
    for _ in 0..4 {
        v = solve(&v);
        normalize(&mut v);
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::NoConvergence(4));
    }
    Ok(v)
}

/// `‖A v − λ v‖₂`.
pub fn residual<R: AsRef<[f64]>>(rows: &[R], lambda: Complex64, v: &[Complex64]) -> f64 {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let av: Complex64 = r.as_ref().iter().zip(v).map(|(&a, &x)| x * a).sum();
            (av - lambda * v[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros(n: usize) -> Vec<Vec<f64>> {
        vec![vec![0.0; n]; n]
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn diagonal_matrix() {
        let mut a = zeros(11);
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = i as f64 - 3.0;
        }
        let ev = eigenvalues(&a).unwrap();
        let mut re: Vec<f64> = ev.iter().map(|c| c.re).collect();
        re.sort_by(f64::total_cmp);
        for (i, v) in re.iter().enumerate() {
            assert!((v - (i as f64 - 3.0)).abs() < 1e-14);
        }
        assert!(ev.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn rotation_block() {
        let theta = 0.7;
        let mut a = zeros(11);
        a[4][5] = -theta;
        a[5][4] = theta;
        let ev = eigenvalues(&a).unwrap();
        let pos = ev.iter().filter(|c| close(**c, Complex64::new(0.0, theta), 1e-14)).count();
        let neg = ev.iter().filter(|c| close(**c, Complex64::new(0.0, -theta), 1e-14)).count();
        assert_eq!((pos, neg), (1, 1));
        assert_eq!(ev.iter().filter(|c| c.norm() < 1e-14).count(), 9);
    }

    #[test]
    fn cube_roots_of_unity() {
        let mut a = zeros(11);
        // companion matrix of x^3 - 1 in the top-left block
        a[0][2] = 1.0;
        a[1][0] = 1.0;
        a[2][1] = 1.0;
        for i in 3..11 {
            a[i][i] = -1.0 - i as f64;
        }
        let ev = eigenvalues(&a).unwrap();
        let h = 3f64.sqrt() / 2.0;
        for root in [Complex64::new(1.0, 0.0), Complex64::new(-0.5, h), Complex64::new(-0.5, -h)] {
            assert!(ev.iter().any(|c| close(*c, root, 1e-12)), "missing {root}");
        }
    }

    #[test]
    fn eigenvector_residuals() {
        let a = vec![
            vec![4.0, -2.0, 1.0, 0.5],
            vec![3.0, 1.0, -1.0, 2.0],
            vec![0.0, 2.0, 3.0, -4.0],
            vec![1.0, 0.0, 5.0, -2.0],
        ];
        let an = norm(&a);
        for lam in eigenvalues(&a).unwrap() {
            let v = eigenvector(&a, lam).unwrap();
            assert!(residual(&a, lam, &v) <= 1e-8 * an);
        }
    }

    #[test]
    fn trace_is_preserved() {
        let a: Vec<Vec<f64>> = (0..7)
            .map(|i| (0..7).map(|j| ((i * 7 + j) as f64 * 0.37).sin()).collect())
            .collect();
        let tr: f64 = (0..7).map(|i| a[i][i]).sum();
        let sum: Complex64 = eigenvalues(&a).unwrap().into_iter().sum();
        assert!((sum.re - tr).abs() < 1e-12);
        assert!(sum.im.abs() < 1e-12);
    }

    #[test]
    fn rejects_ragged_and_nan() {
        assert!(eigenvalues(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        assert!(eigenvalues(&[vec![f64::NAN]]).is_err());
        assert_eq!(eigenvalues::<Vec<f64>>(&[]).unwrap(), vec![]);
    }
}
