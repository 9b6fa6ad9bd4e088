//! Named 4-form classes used by the worked examples and the CLI corpus.
//! All are with respect to the standard SU(4)-structure.

use crate::exterior::{dz, dz_monomial, dzb, Form};
use crate::linalg::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Coeff;

fn standard_omega<S: Coeff>() -> Form<S> {
    (1..=4).fold(Form::zero(), |acc, k| acc.add(&Form::dx(&[2 * k - 1, 2 * k])))
}

/// dz_1 ^ dz_2 ^ dzbar_1 ^ dzbar_2, the class of a product of curves.
pub fn product_class<S: Coeff>() -> Form<S> {
    dz_monomial(&[1, 2], &[1, 2])
}

/// dz_12 ^ dzbar_34 + dzbar_12 ^ dz_34, a primitive Weil-type class.
pub fn weil_class<S: Coeff>() -> Form<S> {
    let a = dz_monomial::<S>(&[1, 2], &[3, 4]);
    a.add(&a.conj())
}

/// The Weil class plus omega^2; it has k = 1 and is rotatable by c_1.
pub fn weil_plus_omega_sq<S: Coeff>() -> Form<S> {
    let w = standard_omega::<S>();
    weil_class().add(&w.wedge(&w))
}

/// The class of the diagonal in a product of two abelian surfaces, with
/// unit covolume: -1/4 (dz1 - dz3)(dzbar1 - dzbar3)(dz2 - dz4)(dzbar2 - dzbar4).
pub fn diagonal_class<S: Coeff>() -> Form<S> {
    let d13 = dz::<S>(1).sub(&dz(3));
    let d13b = dzb::<S>(1).sub(&dzb(3));
    let d24 = dz::<S>(2).sub(&dz(4));
    let d24b = dzb::<S>(2).sub(&dzb(4));
    d13.wedge(&d13b)
        .wedge(&d24)
        .wedge(&d24b)
        .scale(&S::from_ratio(-1, 4))
}

/// Delta - eps omega^2.
pub fn shifted_diagonal<S: Coeff>(eps: &S) -> Form<S> {
    let w = standard_omega::<S>();
    diagonal_class().sub(&w.wedge(&w).scale(eps))
}

/// The real (1,1)-form sum_jk a[j][k] dz_j ^ dzbar_k for an
/// anti-hermitian 4x4 matrix a; primitive when the trace vanishes.
pub fn form_11<S: Coeff>(a: &Matrix<S>) -> Result<Form<S>> {
    if a.rows() != 4 || a.cols() != 4 {
        return Err(Error::InvalidInput("expected a 4x4 matrix".into()));
    }
    if !a.add(&a.adjoint()).is_zero() {
        return Err(Error::InvalidInput("matrix is not anti-hermitian".into()));
    }
    let mut f = Form::zero();
    for j in 0..4 {
        for k in 0..4 {
            if !a[(j, k)].is_zero() {
                f = f.add(&dz_monomial(&[j + 1], &[k + 1]).scale(&a[(j, k)]));
            }
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn classes_are_real() {
        assert!(product_class::<Scalar>().is_real());
        assert!(weil_class::<Scalar>().is_real());
        assert!(diagonal_class::<Scalar>().is_real());
    }

    #[test]
    fn diagonal_pairings() {
        let d = diagonal_class::<Scalar>();
        let w = standard_omega::<Scalar>();
        assert_eq!(d.wedge(&w.wedge(&w)).vol_coeff(), Scalar::int(8));
        let c1 = crate::spin7::c_basis::<Scalar>()[0].clone();
        let cc = c1.wedge(&c1.conj());
        assert_eq!(d.wedge(&cc).vol_coeff(), Scalar::int(16));
        assert_eq!(w.wedge(&w).wedge(&cc).vol_coeff(), Scalar::int(16));
    }
}
