//! The rank-16 Clifford algebra of a symmetric 4x4 metric: structure
//! constants, extended metric, gamma matrices, the dagger involution,
//! and the grade-wise extension of linear maps.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{mat4_det, mat4_inv, Mat16, Mat4};
use crate::multivector::{basis_index, mv_add, mv_basis, mv_scale, mv_zero, Mv, BASIS};
use crate::scalar::Scalar;

/// A metric and its inverse at one spacetime point.
#[derive(Clone, Copy, Debug)]
pub struct MetricPoint<T> {
    pub g: Mat4<T>,
    pub g_inv: Mat4<T>,
}

impl<T: Scalar> MetricPoint<T> {
    /// Build without signature checks; used when `T` carries derivative
    /// data and the underlying point has already been validated.
    pub fn from_raw(g: Mat4<T>) -> Self {
        let g_inv = mat4_inv(&g);
        MetricPoint { g, g_inv }
    }
}

impl MetricPoint<f64> {
    pub fn new(g: Mat4<f64>) -> Result<Self> {
        let det = mat4_det(&g);
        if libm::fabs(det) < 1e-12 {
            return Err(Error::SingularMetric { det });
        }
        if det >= 0.0 {
            return Err(Error::NonLorentzian { det });
        }
        Ok(MetricPoint::from_raw(g))
    }
}

/// Metric-dependent pointwise structure of the Clifford fiber.
pub struct CliffordContext<T> {
    pub metric: MetricPoint<T>,
    /// structure[I * 16 + J] = e_I e_J expanded in the canonical basis.
    pub structure: Vec<Mv<T>>,
    /// Dagger images of the basis elements.
    pub dagger_basis: [Mv<T>; 16],
    /// Extended metric as a 16x16 matrix.
    pub ghat: Mat16<T>,
    /// gamma_lo[a] = left multiplication by e_a.
    pub gamma_lo: [Mat16<T>; 4],
    /// gamma_hi[a] = g^{ab} gamma_lo[b].
    pub gamma_hi: [Mat16<T>; 4],
}

/// Left-multiply the basis word `word` (strictly increasing) by the
/// single generator e_i, re-expressing in the canonical basis via
/// e_i e_j = 2 g_ij - e_j e_i.
fn gen_mul_word<T: Scalar>(g: &Mat4<T>, i: usize, word: &[usize]) -> Mv<T> {
    if word.is_empty() || i < word[0] {
        let mut idx = [0usize; 5];
        idx[0] = i;
        idx[1..=word.len()].copy_from_slice(word);
        return mv_basis(basis_index(&idx[..=word.len()]));
    }
    let j = word[0];
    let rest = &word[1..];
    if i == j {
        return mv_scale(&mv_basis(basis_index(rest)), g[i][i]);
    }
    // i > j: 2 g_ij e_rest - e_j (e_i e_rest)
    let mut out = mv_zero();
    out[basis_index(rest)] = T::from_f64(2.0) * g[i][j];
    let inner = gen_mul_word(g, i, rest);
    for (k, coeff) in inner.iter().enumerate() {
        // every index in `inner` exceeds j, so prepending j stays canonical
        let mut idx = [0usize; 5];
        idx[0] = j;
        let kw = BASIS[k];
        idx[1..=kw.len()].copy_from_slice(kw);
        let target = basis_index(&idx[..=kw.len()]);
        out[target] = out[target] - *coeff;
    }
    out
}

fn gen_mul_mv<T: Scalar>(g: &Mat4<T>, i: usize, a: &Mv<T>) -> Mv<T> {
    let mut out = mv_zero();
    for (k, coeff) in a.iter().enumerate() {
        let term = gen_mul_word(g, i, BASIS[k]);
        for l in 0..16 {
            out[l] = out[l] + term[l] * *coeff;
        }
    }
    out
}

/// Canonicalize an arbitrary generator word into the basis.
fn word_to_mv<T: Scalar>(g: &Mat4<T>, word: &[usize]) -> Mv<T> {
    let mut mv = mv_basis(0);
    for &gen in word.iter().rev() {
        mv = gen_mul_mv(g, gen, &mv);
    }
    mv
}

impl<T: Scalar> CliffordContext<T> {
    /// Assemble the full pointwise context from a metric. No signature
    /// validation happens here; use [`build_context`] for the checked
    /// entry point.
    pub fn from_metric(metric: MetricPoint<T>) -> Self {
        let g = &metric.g;
        let mut structure = Vec::with_capacity(256);
        for i in 0..16 {
            for j in 0..16 {
                let mut mv = mv_basis(j);
                for &gen in BASIS[i].iter().rev() {
                    mv = gen_mul_mv(g, gen, &mv);
                }
                structure.push(mv);
            }
        }

        let mut dagger_basis = [mv_zero(); 16];
        for i in 0..16 {
            let word = BASIS[i];
            let k = word.len();
            let mut reversed = [0usize; 4];
            for (p, &w) in word.iter().rev().enumerate() {
                reversed[p] = w;
            }
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            dagger_basis[i] = mv_scale(&word_to_mv(g, &reversed[..k]), sign);
        }

        // ghat_IJ = -1/2 < dag(e_I) e_J + dag(e_J) e_I >_scalar
        let mut ghat = [[T::zero(); 16]; 16];
        let half = T::from_f64(0.5);
        for i in 0..16 {
            for j in 0..16 {
                let mut s = T::zero();
                for k in 0..16 {
                    s = s + dagger_basis[i][k] * structure[k * 16 + j][0]
                        + dagger_basis[j][k] * structure[k * 16 + i][0];
                }
                ghat[i][j] = -(half * s);
            }
        }

        // (gamma_a)^J_I = coefficient of e_J in e_a e_I
        let mut gamma_lo = [[[T::zero(); 16]; 16]; 4];
        for a in 0..4 {
            for i in 0..16 {
                let col = &structure[(1 + a) * 16 + i];
                for j in 0..16 {
                    gamma_lo[a][j][i] = col[j];
                }
            }
        }
        let mut gamma_hi = [[[T::zero(); 16]; 16]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let c = metric.g_inv[a][b];
                for j in 0..16 {
                    for i in 0..16 {
                        gamma_hi[a][j][i] = gamma_hi[a][j][i] + c * gamma_lo[b][j][i];
                    }
                }
            }
        }

        CliffordContext {
            metric,
            structure,
            dagger_basis,
            ghat,
            gamma_lo,
            gamma_hi,
        }
    }

    pub fn product(&self, a: &Mv<T>, b: &Mv<T>) -> Mv<T> {
        let mut out = mv_zero();
        for i in 0..16 {
            for j in 0..16 {
                let c = a[i] * b[j];
                let col = &self.structure[i * 16 + j];
                for k in 0..16 {
                    out[k] = out[k] + col[k] * c;
                }
            }
        }
        out
    }

    pub fn dagger(&self, a: &Mv<T>) -> Mv<T> {
        let mut out = mv_zero();
        for i in 0..16 {
            out = mv_add(&out, &mv_scale(&self.dagger_basis[i], a[i]));
        }
        out
    }

    /// Extended metric applied to a pair of fiber elements.
    pub fn ghat_form(&self, a: &Mv<T>, b: &Mv<T>) -> T {
        let mut s = T::zero();
        for i in 0..16 {
            for j in 0..16 {
                s = s + a[i] * self.ghat[i][j] * b[j];
            }
        }
        s
    }

    /// Gamma matrix of an arbitrary four-vector: left multiplication
    /// by u^a e_a.
    pub fn gamma_of(&self, u: &[T; 4]) -> Mat16<T> {
        let mut out = [[T::zero(); 16]; 16];
        for a in 0..4 {
            for j in 0..16 {
                for i in 0..16 {
                    out[j][i] = out[j][i] + u[a] * self.gamma_lo[a][j][i];
                }
            }
        }
        out
    }

    /// Grade-wise multiplicative extension of a 4x4 linear map
    /// (column a of `A` is the image of e_a in components).
    pub fn extend_map(&self, a: &Mat4<T>) -> Mat16<T> {
        let mut out = [[T::zero(); 16]; 16];
        for i in 0..16 {
            let word = BASIS[i];
            let mut acc = mv_basis(0);
            for &gen in word {
                let mut img = mv_zero();
                for b in 0..4 {
                    img[1 + b] = a[b][gen];
                }
                acc = self.product(&acc, &img);
            }
            for j in 0..16 {
                out[j][i] = acc[j];
            }
        }
        out
    }

    /// Right multiplication by `u` as a 16x16 matrix: rho_u psi = psi u.
    pub fn right_mul(&self, u: &Mv<T>) -> Mat16<T> {
        let mut out = [[T::zero(); 16]; 16];
        for i in 0..16 {
            // column i = e_i u
            let col = {
                let mut acc = mv_zero();
                for j in 0..16 {
                    let cij = &self.structure[i * 16 + j];
                    for k in 0..16 {
                        acc[k] = acc[k] + cij[k] * u[j];
                    }
                }
                acc
            };
            for j in 0..16 {
                out[j][i] = col[j];
            }
        }
        out
    }
}

pub const MINKOWSKI: Mat4<f64> = [
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Checked construction from a plain metric value.
pub fn build_context(g: Mat4<f64>) -> Result<CliffordContext<f64>> {
    let mp = MetricPoint::new(g)?;
    Ok(CliffordContext::from_metric(mp))
}
