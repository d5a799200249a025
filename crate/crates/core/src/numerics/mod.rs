//! Dense matrix primitives, symmetric eigendecomposition, singular values,
//! and the deterministic seeded random stream used by every other module.
//!
//! All floating-point accumulation orders are fixed (row-major, sequential
//! over the contraction index) so that repeated runs produce bit-identical
//! results on any platform. Elementary functions go through `libm` for the
//! same reason.

mod eig;
mod matrix;
mod rng;

pub use eig::{sym_eig, sym_eigenvalues, EigError};
pub use matrix::{axpy, dot, Matrix};
pub use rng::RandomStream;

use alloc::vec::Vec;

/// Singular values of `m`, descending.
///
/// Computed as the square roots of the eigenvalues of the smaller of `mᵀm`
/// or `mmᵀ`, which bounds the eigensolver cost at O(min(rows, cols)³).
/// Numerically negative eigenvalues of the (PSD) Gram matrix are clamped to
/// zero before the square root.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let gram = if m.rows() <= m.cols() {
        m.gram_nt()
    } else {
        m.gram_tn()
    };
    let mut vals = sym_eigenvalues(&gram);
    for v in vals.iter_mut() {
        *v = if *v > 0.0 { libm::sqrt(*v) } else { 0.0 };
    }
    vals
}
