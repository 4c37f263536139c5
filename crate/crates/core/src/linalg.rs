//! Small dense linear algebra on stack-friendly buffers.
//!
//! Everything here operates on row-major `&[f64]` slices so the hot paths in
//! the hull engine and the rotation charts stay allocation-free.  Matrices
//! are tiny (n <= 8 in practice), so partial-pivot Gaussian elimination and
//! Householder reflections are entirely adequate.

/// Dot product.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for i in 0..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

/// `out = a - b`.
#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + t * d`.
#[inline]
pub fn add_scaled(a: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    a.iter().zip(d).map(|(x, y)| x + t * y).collect()
}

/// Normalize in place; returns the original norm.
pub fn normalize(v: &mut [f64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Determinant of a small row-major matrix (clobbers the buffer).
pub fn det_in_place(a: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[r * n + j] -= f * a[col * n + j];
            }
        }
    }
    det
}

/// Householder QR of a row-major n x n matrix.  Returns `(q, r)` with
/// `a = q * r`, the diagonal of `r` corrected to be nonnegative (the sign
/// correction is what makes QR of a Gaussian matrix Haar-distributed).
pub fn qr_positive(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut r = a.to_vec();
    let mut q = identity(n);
    let mut v = vec![0.0; n];
    for k in 0..n {
        let mut nrm = 0.0;
        for i in k..n {
            nrm += r[i * n + k] * r[i * n + k];
        }
        let nrm = nrm.sqrt();
        if nrm < 1e-300 {
            continue;
        }
        let alpha = if r[k * n + k] >= 0.0 { -nrm } else { nrm };
        for i in 0..k {
            v[i] = 0.0;
        }
        for i in k..n {
            v[i] = r[i * n + k];
        }
        v[k] -= alpha;
        let beta = dot(&v[k..], &v[k..]);
        if beta < 1e-300 {
            continue;
        }
        // R <- H R (apply to columns k..n)
        for j in k..n {
            let mut s = 0.0;
            for i in k..n {
                s += v[i] * r[i * n + j];
            }
            let f = 2.0 * s / beta;
            for i in k..n {
                r[i * n + j] -= f * v[i];
            }
        }
        // Q <- Q H (accumulate the product H_0 H_1 ... on the right)
        for row in 0..n {
            let mut s = 0.0;
            for i in k..n {
                s += q[row * n + i] * v[i];
            }
            let f = 2.0 * s / beta;
            for i in k..n {
                q[row * n + i] -= f * v[i];
            }
        }
    }
    for j in 0..n {
        if r[j * n + j] < 0.0 {
            for i in j..n {
                r[j * n + i] = -r[j * n + i];
            }
            for i in 0..n {
                q[i * n + j] = -q[i * n + j];
            }
        }
    }
    (q, r)
}

pub fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

pub fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

/// Matrix exponential of a skew-symmetric matrix by scaling and squaring
/// with a truncated power series.  The result is orthogonal to machine
/// precision for the small step matrices used by the rotation chart.
pub fn exp_skew(s: &[f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(s.len(), n * n);
    let mut max = 0.0f64;
    for &x in s {
        max = max.max(x.abs());
    }
    let mut k = 0u32;
    let mut scale = 1.0;
    while max * scale > 0.25 {
        scale *= 0.5;
        k += 1;
    }
    let b: Vec<f64> = s.iter().map(|x| x * scale).collect();
    let mut result = identity(n);
    let mut term = identity(n);
    for order in 1..=16 {
        term = mat_mul(&term, &b, n);
        let f = 1.0 / (order as f64);
        let mut tmax = 0.0f64;
        for x in term.iter_mut() {
            *x *= f;
            tmax = tmax.max(x.abs());
        }
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
        }
        if tmax < 1e-18 {
            break;
        }
    }
    for _ in 0..k {
        result = mat_mul(&result, &result, n);
    }
    result
}
