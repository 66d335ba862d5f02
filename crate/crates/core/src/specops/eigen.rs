//! Eigenvalues of a dense real nonsymmetric matrix: balancing, reduction to
//! upper Hessenberg form by stabilised elimination, then the Francis
//! double-shift QR iteration.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square matrix addressed with 1-based `(row, col)`, which keeps the QR
/// sweep's index arithmetic readable.
struct Mat1 {
    n: usize,
    data: Vec<f64>,
}

impl Mat1 {
    fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = vec![0.0; (n + 1) * (n + 1)];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                data[(i + 1) * (n + 1) + j + 1] = v;
            }
        }
        Self { n, data }
    }
}

impl Index<(usize, usize)> for Mat1 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * (self.n + 1) + j]
    }
}

impl IndexMut<(usize, usize)> for Mat1 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * (self.n + 1) + j]
    }
}

/// Diagonal similarity by powers of two so that row and column norms match.
fn balance(a: &mut Mat1) {
    const RADIX: f64 = 2.0;
    let n = a.n;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 1..=n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 1..=n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
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
                    a[(i, j)] *= g;
                }
                for j in 1..=n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Reduction to upper Hessenberg form by Gaussian elimination with
/// partial pivoting; entries below the subdiagonal are zeroed afterwards.
fn hessenberg(a: &mut Mat1) {
    let n = a.n;
    for m in 2..n {
        let mut x: f64 = 0.0;
        let mut i = m;
        for j in m..=n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let t = a[(i, j)];
                a[(i, j)] = a[(m, j)];
                a[(m, j)] = t;
            }
            for j in 1..=n {
                let t = a[(j, i)];
                a[(j, i)] = a[(j, m)];
                a[(j, m)] = t;
            }
        }
        if x != 0.0 {
            for i in (m + 1)..=n {
                let mut y = a[(i, m - 1)];
                if y != 0.0 {
                    y /= x;
                    a[(i, m - 1)] = y;
                    for j in m..=n {
                        a[(i, j)] -= y * a[(m, j)];
                    }
                    for j in 1..=n {
                        a[(j, m)] += y * a[(j, i)];
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i > j + 1 {
                a[(i, j)] = 0.0;
            }
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// All eigenvalues of an upper Hessenberg matrix. Gives up after `30 n`
/// iterations in total.
fn hqr(a: &mut Mat1) -> Result<Vec<Complex64>> {
    let n = a.n;
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[(i, j)].abs();
        }
    }
    let budget = 30 * n.max(1);
    let mut total = 0usize;
    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                let mut y = a[(nn - 1, nn - 1)];
                let mut w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
                if l == nn - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if total >= budget {
                        return Err(Error::Convergence { index: nn - 1 });
                    }
                    if its == 10 || its == 20 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[(i, i)] -= x;
                        }
                        let s = a[(nn, nn - 1)].abs() + a[(nn - 1, nn - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    total += 1;
                    let (mut p, mut q, mut r);
                    let mut z;
                    let mut m = nn - 2;
                    loop {
                        z = a[(m, m)];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                        q = a[(m + 1, m + 1)] - z - rr - ss;
                        r = a[(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                        if u <= f64::EPSILON * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[(i, i - 2)] = 0.0;
                        if i != m + 2 {
                            a[(i, i - 3)] = 0.0;
                        }
                    }
                    for k in m..nn {
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = if k != nn - 1 { a[(k + 2, k - 1)] } else { 0.0 };
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[(k, k - 1)] = -a[(k, k - 1)];
                                }
                            } else {
                                a[(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[(k, j)] + q * a[(k + 1, j)];
                                if k != nn - 1 {
                                    p += r * a[(k + 2, j)];
                                    a[(k + 2, j)] -= p * z;
                                }
                                a[(k + 1, j)] -= p * y;
                                a[(k, j)] -= p * x;
                            }
                            let mmin = nn.min(k + 3);
                            for i in l..=mmin {
                                p = x * a[(i, k)] + y * a[(i, k + 1)];
                                if k != nn - 1 {
                                    p += z * a[(i, k + 2)];
                                    a[(i, k + 2)] -= p * r;
                                }
                                a[(i, k + 1)] -= p * q;
                                a[(i, k)] -= p;
                            }
                        }
                    }
                }
            }
            if !(l + 1 < nn) {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// All eigenvalues of the square matrix given by `rows`.
pub fn eigenvalues(rows: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix entries must be finite".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = Mat1::from_rows(rows);
    balance(&mut a);
    hessenberg(&mut a);
    hqr(&mut a)
}
