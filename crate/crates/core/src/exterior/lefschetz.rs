//! Lefschetz decomposition of real (2,2)-forms:
//! beta = beta0 + beta1 ^ omega + k omega^2 with beta0 ^ omega = 0 and
//! beta1 ^ omega^3 = 0.

use super::{basis, ComplexStructure, Form};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Coeff;

#[derive(Clone, Debug, PartialEq)]
pub struct Lefschetz<S> {
    /// Primitive (2,2) part.
    pub primitive: Form<S>,
    /// Primitive (1,1) form multiplying omega.
    pub beta1: Form<S>,
    pub k: S,
}

impl<S: Coeff> Lefschetz<S> {
    pub fn recombine(&self, omega: &Form<S>) -> Form<S> {
        self.primitive
            .add(&self.beta1.wedge(omega))
            .add(&omega.wedge(omega).scale(&self.k))
    }
}

pub fn lefschetz_decompose<S: Coeff>(
    beta: &Form<S>,
    omega: &Form<S>,
    j: &ComplexStructure<S>,
) -> Result<Lefschetz<S>> {
    beta.expect_degree(4)?;
    if !beta.is_real() {
        return Err(Error::NotReal);
    }
    if !j.is_bidegree(beta, 2, 2) {
        return Err(Error::Bidegree { p: 2, q: 2 });
    }
    let omega2 = omega.wedge(omega);
    let omega3 = omega2.wedge(omega);
    let k = beta
        .wedge(&omega2)
        .vol_coeff()
        .div(&omega2.wedge(&omega2).vol_coeff())?;
    let rhs = beta.wedge(omega).sub(&omega3.scale(&k));
    // Solve beta1 ^ omega^2 = rhs; wedge with omega^2 is an isomorphism
    // from 2-forms to 6-forms.
    let cols: Vec<Vec<S>> = basis(2)
        .iter()
        .map(|&m| Form::monomial(m, S::one()).wedge(&omega2).to_vector(6))
        .collect();
    let a = Matrix::from_cols(&cols);
    let b = Matrix::from_cols(&[rhs.to_vector(6)]);
    let x = a.solve(&b)?;
    let beta1 = Form::from_vector(2, &x.col(0));
    let primitive = beta.sub(&beta1.wedge(omega)).sub(&omega2.scale(&k));
    Ok(Lefschetz {
        primitive,
        beta1,
        k,
    })
}
