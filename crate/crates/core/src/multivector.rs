//! The canonical 16-element basis of the Clifford fiber and coefficient
//! vectors over it.

use crate::scalar::Scalar;

/// Canonical basis enumeration. Each entry lists the strictly increasing
/// generator indices of e_I.
pub const BASIS: [&[usize]; 16] = [
    &[],
    &[0],
    &[1],
    &[2],
    &[3],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[1, 2],
    &[1, 3],
    &[2, 3],
    &[0, 1, 2],
    &[0, 1, 3],
    &[0, 2, 3],
    &[1, 2, 3],
    &[0, 1, 2, 3],
];

pub const BASIS_NAMES: [&str; 16] = [
    "e", "e0", "e1", "e2", "e3", "e01", "e02", "e03", "e12", "e13", "e23", "e012", "e013", "e023",
    "e123", "e0123",
];

/// Grade (number of generator factors) of each basis element.
pub fn grade(i: usize) -> usize {
    BASIS[i].len()
}

/// Index of the basis element with the given strictly increasing
/// generator set.
pub fn basis_index(indices: &[usize]) -> usize {
    let mut mask = 0usize;
    for &i in indices {
        mask |= 1 << i;
    }
    MASK_TO_INDEX[mask]
}

/// Lookup from the 4-bit generator set to the canonical position.
const MASK_TO_INDEX: [usize; 16] = build_mask_table();

const fn build_mask_table() -> [usize; 16] {
    let mut table = [0usize; 16];
    let mut i = 0;
    while i < 16 {
        let mut mask = 0usize;
        let mut j = 0;
        while j < BASIS[i].len() {
            mask |= 1 << BASIS[i][j];
            j += 1;
        }
        table[mask] = i;
        i += 1;
    }
    table
}

/// Complementary index set I* in {0,1,2,3}.
pub fn complement_index(i: usize) -> usize {
    let mut mask = 0usize;
    for &k in BASIS[i] {
        mask |= 1 << k;
    }
    MASK_TO_INDEX[0b1111 & !mask]
}

/// A Clifford fiber element: 16 coefficients over the canonical basis.
pub type Mv<T> = [T; 16];

pub fn mv_zero<T: Scalar>() -> Mv<T> {
    [T::zero(); 16]
}

pub fn mv_basis<T: Scalar>(i: usize) -> Mv<T> {
    let mut v = mv_zero();
    v[i] = T::one();
    v
}

pub fn mv_add<T: Scalar>(a: &Mv<T>, b: &Mv<T>) -> Mv<T> {
    let mut out = *a;
    for i in 0..16 {
        out[i] = out[i] + b[i];
    }
    out
}

pub fn mv_sub<T: Scalar>(a: &Mv<T>, b: &Mv<T>) -> Mv<T> {
    let mut out = *a;
    for i in 0..16 {
        out[i] = out[i] - b[i];
    }
    out
}

pub fn mv_scale<T: Scalar>(a: &Mv<T>, s: T) -> Mv<T> {
    let mut out = *a;
    for i in 0..16 {
        out[i] = out[i] * s;
    }
    out
}

/// Coefficient of e_∅ (the scalar projection ⟨·⟩_∅).
pub fn scalar_part<T: Scalar>(a: &Mv<T>) -> T {
    a[0]
}

/// Grade-1 slice as a four-vector.
pub fn vector_part<T: Scalar>(a: &Mv<T>) -> [T; 4] {
    [a[1], a[2], a[3], a[4]]
}

/// Embed a four-vector as a grade-1 multivector.
pub fn from_vector<T: Scalar>(u: &[T; 4]) -> Mv<T> {
    let mut out = mv_zero();
    for i in 0..4 {
        out[1 + i] = u[i];
    }
    out
}
