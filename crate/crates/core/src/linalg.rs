//! Small dense matrix helpers for the 4-dimensional base and the
//! 16-dimensional Clifford fiber.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;

pub type Mat4<T> = [[T; 4]; 4];
pub type Mat16<T> = [[T; 16]; 16];
pub type Vec16<T> = [T; 16];

pub fn mat4_zero<T: Scalar>() -> Mat4<T> {
    [[T::zero(); 4]; 4]
}

pub fn mat4_identity<T: Scalar>() -> Mat4<T> {
    let mut m = mat4_zero();
    for i in 0..4 {
        m[i][i] = T::one();
    }
    m
}

pub fn mat4_mul<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = T::zero();
            for k in 0..4 {
                s = s + a[i][k] * b[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn mat4_transpose<T: Scalar>(a: &Mat4<T>) -> Mat4<T> {
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Determinant by cofactor expansion; no pivoting so it stays valid for
/// derivative-carrying scalars.
pub fn mat4_det<T: Scalar>(m: &Mat4<T>) -> T {
    let det3 = |r: [usize; 3], c: [usize; 3]| -> T {
        m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
            - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
            + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
    };
    let r = [1, 2, 3];
    m[0][0] * det3(r, [1, 2, 3]) - m[0][1] * det3(r, [0, 2, 3]) + m[0][2] * det3(r, [0, 1, 3])
        - m[0][3] * det3(r, [0, 1, 2])
}

/// Inverse via the adjugate.
pub fn mat4_inv<T: Scalar>(m: &Mat4<T>) -> Mat4<T> {
    let det = mat4_det(m);
    let inv_det = T::one() / det;
    let idx = |skip: usize| -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut k = 0;
        for i in 0..4 {
            if i != skip {
                out[k] = i;
                k += 1;
            }
        }
        out
    };
    let mut out = mat4_zero();
    for i in 0..4 {
        let rows = idx(i);
        for j in 0..4 {
            let cols = idx(j);
            let minor = m[rows[0]][cols[0]]
                * (m[rows[1]][cols[1]] * m[rows[2]][cols[2]]
                    - m[rows[1]][cols[2]] * m[rows[2]][cols[1]])
                - m[rows[0]][cols[1]]
                    * (m[rows[1]][cols[0]] * m[rows[2]][cols[2]]
                        - m[rows[1]][cols[2]] * m[rows[2]][cols[0]])
                + m[rows[0]][cols[2]]
                    * (m[rows[1]][cols[0]] * m[rows[2]][cols[1]]
                        - m[rows[1]][cols[1]] * m[rows[2]][cols[0]]);
            let sign = if (i + j) % 2 == 0 { T::one() } else { -T::one() };
            // adjugate transposes the cofactor matrix
            out[j][i] = sign * minor * inv_det;
        }
    }
    out
}

pub fn mat16_zero<T: Scalar>() -> Mat16<T> {
    [[T::zero(); 16]; 16]
}

pub fn mat16_identity<T: Scalar>() -> Mat16<T> {
    let mut m = mat16_zero();
    for i in 0..16 {
        m[i][i] = T::one();
    }
    m
}

pub fn mat16_mul<T: Scalar>(a: &Mat16<T>, b: &Mat16<T>) -> Mat16<T> {
    let mut out = mat16_zero();
    for i in 0..16 {
        for k in 0..16 {
            let aik = a[i][k];
            for j in 0..16 {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat16_vec<T: Scalar>(a: &Mat16<T>, v: &Vec16<T>) -> Vec16<T> {
    let mut out = [T::zero(); 16];
    for i in 0..16 {
        let mut s = T::zero();
        for j in 0..16 {
            s = s + a[i][j] * v[j];
        }
        out[i] = s;
    }
    out
}

pub fn mat16_transpose<T: Scalar>(a: &Mat16<T>) -> Mat16<T> {
    let mut out = mat16_zero();
    for i in 0..16 {
        for j in 0..16 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn mat16_add<T: Scalar>(a: &Mat16<T>, b: &Mat16<T>) -> Mat16<T> {
    let mut out = *a;
    for i in 0..16 {
        for j in 0..16 {
            out[i][j] = out[i][j] + b[i][j];
        }
    }
    out
}

pub fn mat16_sub<T: Scalar>(a: &Mat16<T>, b: &Mat16<T>) -> Mat16<T> {
    let mut out = *a;
    for i in 0..16 {
        for j in 0..16 {
            out[i][j] = out[i][j] - b[i][j];
        }
    }
    out
}

pub fn mat16_scale<T: Scalar>(a: &Mat16<T>, s: T) -> Mat16<T> {
    let mut out = *a;
    for i in 0..16 {
        for j in 0..16 {
            out[i][j] = out[i][j] * s;
        }
    }
    out
}

pub fn mat16_commutator<T: Scalar>(a: &Mat16<T>, b: &Mat16<T>) -> Mat16<T> {
    mat16_sub(&mat16_mul(a, b), &mat16_mul(b, a))
}

pub fn mat16_trace<T: Scalar>(a: &Mat16<T>) -> T {
    let mut s = T::zero();
    for i in 0..16 {
        s = s + a[i][i];
    }
    s
}

pub fn mat16_max_abs(a: &Mat16<f64>) -> f64 {
    let mut m = 0.0f64;
    for row in a {
        for &x in row {
            let ax = if x < 0.0 { -x } else { x };
            if ax > m {
                m = ax;
            }
        }
    }
    m
}

pub fn vec16_max_abs(v: &Vec16<f64>) -> f64 {
    let mut m = 0.0f64;
    for &x in v {
        let ax = if x < 0.0 { -x } else { x };
        if ax > m {
            m = ax;
        }
    }
    m
}

/// Gauss-Jordan inverse with partial pivoting. Returns `None` for a
/// numerically singular matrix.
pub fn mat16_inv(a: &Mat16<f64>) -> Option<Mat16<f64>> {
    let mut m = *a;
    let mut inv = mat16_identity::<f64>();
    for col in 0..16 {
        let mut piv = col;
        let mut best = libm::fabs(m[col][col]);
        for r in col + 1..16 {
            let v = libm::fabs(m[r][col]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let scale = 1.0 / m[col][col];
        for j in 0..16 {
            m[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for r in 0..16 {
            if r == col {
                continue;
            }
            let f = m[r][col];
            if f == 0.0 {
                continue;
            }
            for j in 0..16 {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Generic Gauss-Jordan inverse, pivoting on the underlying point value.
pub fn mat16_inv_generic<T: Scalar>(a: &Mat16<T>) -> Option<Mat16<T>> {
    let mut m = *a;
    let mut inv = mat16_identity::<T>();
    for col in 0..16 {
        let mut piv = col;
        let mut best = libm::fabs(m[col][col].value());
        for r in col + 1..16 {
            let v = libm::fabs(m[r][col].value());
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let scale = T::one() / m[col][col];
        for j in 0..16 {
            m[col][j] = m[col][j] * scale;
            inv[col][j] = inv[col][j] * scale;
        }
        for r in 0..16 {
            if r == col {
                continue;
            }
            let f = m[r][col];
            for j in 0..16 {
                m[r][j] = m[r][j] - f * m[col][j];
                inv[r][j] = inv[r][j] - f * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Coefficients of det(I + sA) = Σ s^k tr_k(A), computed from power sums
/// via Newton's identities. `a` is given row-major with dimension `n`.
pub fn char_coeffs(a: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    // power sums p_k = tr(A^k), k = 1..n
    let mut powers = vec![0.0f64; n * n];
    powers.copy_from_slice(a);
    let mut p = vec![0.0f64; n + 1];
    for k in 1..=n {
        if k > 1 {
            let mut next = vec![0.0f64; n * n];
            for i in 0..n {
                for l in 0..n {
                    let v = powers[i * n + l];
                    if v == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        next[i * n + j] += v * a[l * n + j];
                    }
                }
            }
            powers = next;
        }
        let mut tr = 0.0;
        for i in 0..n {
            tr += powers[i * n + i];
        }
        p[k] = tr;
    }
    // k e_k = Σ_{i=1..k} (-1)^{i-1} e_{k-i} p_i
    let mut e = vec![0.0f64; n + 1];
    e[0] = 1.0;
    for k in 1..=n {
        let mut s = 0.0;
        let mut sign = 1.0;
        for i in 1..=k {
            s += sign * e[k - i] * p[i];
            sign = -sign;
        }
        e[k] = s / k as f64;
    }
    e
}

/// k-th order trace: the coefficient of s^k in det(I + sA).
pub fn trace_k(a: &[f64], n: usize, k: usize) -> Option<f64> {
    if k > n {
        return None;
    }
    Some(char_coeffs(a, n)[k])
}

/// Matrix exponential by scaling and squaring with a Taylor series run
/// until the term falls below 1e-16 relative to unity.
pub fn matrix_exp<const N: usize>(a: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut norm = 0.0f64;
    for row in a.iter() {
        let mut s = 0.0;
        for &x in row.iter() {
            s += libm::fabs(x);
        }
        if s > norm {
            norm = s;
        }
    }
    let mut squarings = 0u32;
    let mut scale = 1.0f64;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }

    let mul = |x: &[[f64; N]; N], y: &[[f64; N]; N]| -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        for i in 0..N {
            for k in 0..N {
                let v = x[i][k];
                if v == 0.0 {
                    continue;
                }
                for j in 0..N {
                    out[i][j] += v * y[k][j];
                }
            }
        }
        out
    };

    let mut scaled = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            scaled[i][j] = a[i][j] * scale;
        }
    }

    let mut result = [[0.0; N]; N];
    for i in 0..N {
        result[i][i] = 1.0;
    }
    let mut term = result;
    for k in 1..200 {
        term = mul(&term, &scaled);
        let mut max = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                term[i][j] /= k as f64;
                let v = libm::fabs(term[i][j]);
                if v > max {
                    max = v;
                }
            }
        }
        for i in 0..N {
            for j in 0..N {
                result[i][j] += term[i][j];
            }
        }
        if max < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        result = mul(&result, &result);
    }
    result
}
