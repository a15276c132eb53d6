use num_complex::Complex64;

use super::{normalized, ComplexMatrix, LinalgError, MAX_EIG_DIM, ONE, ZERO};

const RADIX: f64 = 2.0;
const ITERATIONS_PER_EIGENVALUE: usize = 60;

/// One eigenvalue with a unit-norm right eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

/// Eigenvalues and right eigenvectors of a general complex matrix.
///
/// Balancing, Householder reduction to Hessenberg form, then shifted complex
/// QR sweeps to Schur form. Eigenvectors are back-substituted from the
/// triangular factor. Pairs come out in the order they appear on the Schur
/// diagonal. At a defective eigenvalue the returned vectors are (nearly)
/// parallel, as they must be.
pub fn eig(m: &ComplexMatrix) -> Result<Vec<EigenPair>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_EIG_DIM {
        return Err(LinalgError::DimensionTooLarge {
            dim: n,
            max: MAX_EIG_DIM,
        });
    }
    m.ensure_finite()?;
    if n == 1 {
        return Ok(vec![EigenPair {
            value: m[(0, 0)],
            vector: vec![ONE],
        }]);
    }

    let mut a = m.clone();
    let d = balance(&mut a);
    let mut z = hessenberg(&mut a);
    schur(&mut a, &mut z)?;

    let norm = a.max_abs();
    let small = (f64::EPSILON * norm).max(f64::MIN_POSITIVE);
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = a[(k, k)];
        let x = triangular_eigenvector(&a, k, small);
        let mut v = z.matvec(&x);
        for (vi, di) in v.iter_mut().zip(&d) {
            *vi *= *di;
        }
        let vector = normalized(&v).unwrap_or_else(|| {
            let mut e = vec![ZERO; n];
            e[k] = ONE;
            e
        });
        pairs.push(EigenPair { value: lambda, vector });
    }
    Ok(pairs)
}

/// Parlett-Reinsch diagonal balancing in place; returns the scaling `D` with
/// `a ← D⁻¹ a D`.
fn balance(a: &mut ComplexMatrix) -> Vec<f64> {
    let n = a.rows();
    let mut d = vec![1.0; n];
    let sq = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
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
                c *= sq;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sq;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            return d;
        }
    }
}

/// Householder reduction to upper Hessenberg form; returns the accumulated
/// unitary `Q` with `a_in = Q a_out Q†`.
fn hessenberg(a: &mut ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let alpha: f64 = ((k + 1)..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        // v = x + phase·‖x‖·e1
        let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // a <- (I - beta v v†) a
        for j in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * a[(k + 1 + t, j)]).sum();
            let s = s * beta;
            for (t, vt) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= vt * s;
            }
        }
        // a <- a (I - beta v v†), same for q
        for target in [&mut *a, &mut q] {
            for i in 0..n {
                let s: Complex64 = v.iter().enumerate().map(|(t, vt)| target[(i, k + 1 + t)] * vt).sum();
                let s = s * beta;
                for (t, vt) in v.iter().enumerate() {
                    target[(i, k + 1 + t)] -= s * vt.conj();
                }
            }
        }
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
        }
    }
    q
}

/// Complex Givens rotation `G = [[c, s], [-s̄, c]]` with `G [a; b] = [·; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let n = na.hypot(nb);
    (na / n, (a / na) * b.conj() / n)
}

fn rotate_rows(h: &mut ComplexMatrix, k: usize, cs: f64, sn: Complex64, from: usize) {
    for j in from..h.cols() {
        let x = h[(k, j)];
        let y = h[(k + 1, j)];
        h[(k, j)] = x * cs + sn * y;
        h[(k + 1, j)] = -sn.conj() * x + y * cs;
    }
}

fn rotate_cols(h: &mut ComplexMatrix, k: usize, cs: f64, sn: Complex64, to: usize) {
    for i in 0..to {
        let x = h[(i, k)];
        let y = h[(i, k + 1)];
        h[(i, k)] = x * cs + sn.conj() * y;
        h[(i, k + 1)] = -sn * x + y * cs;
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Reduces the Hessenberg matrix `h` to upper triangular Schur form in place,
/// accumulating the transformations into `z`.
fn schur(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<(), LinalgError> {
    let n = h.rows();
    let norm = h.max_abs();
    if norm == 0.0 {
        return Ok(());
    }
    let max_iter = ITERATIONS_PER_EIGENVALUE * n;
    let mut total = 0;
    let mut hi = n - 1;
    let mut its = 0;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if scale == 0.0 {
                scale = norm;
            }
            if sub <= f64::EPSILON * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if total > max_iter {
            return Err(LinalgError::NoConvergence(total));
        }

        let shift = if its % 10 == 0 {
            let mut s = h[(hi, hi - 1)].norm();
            if hi >= 2 {
                s += h[(hi - 1, hi - 2)].norm();
            }
            h[(hi, hi)] + Complex64::new(0.75 * s, 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - shift, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (cs, sn) = givens(x, y);
            let from = if k == lo { lo } else { k - 1 };
            rotate_rows(h, k, cs, sn, from);
            let to = (k + 3).min(hi + 1);
            rotate_cols(h, k, cs, sn, to);
            rotate_cols(z, k, cs, sn, n);
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
        }
    }
    Ok(())
}

/// Solves `(T − t_kk) x = 0` with `x_k = 1` and `x_j = 0` for `j > k`.
fn triangular_eigenvector(t: &ComplexMatrix, k: usize, small: f64) -> Vec<Complex64> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let mut x = vec![ZERO; n];
    x[k] = ONE;
    for j in (0..k).rev() {
        let mut s = ZERO;
        for m in (j + 1)..=k {
            s += t[(j, m)] * x[m];
        }
        let mut denom = t[(j, j)] - lambda;
        if denom.norm() < small {
            denom = Complex64::new(small, 0.0);
        }
        x[j] = -s / denom;
        let big = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if big > 1e100 {
            for xi in x.iter_mut() {
                *xi /= big;
            }
        }
    }
    x
}
