//! Spin(7)- and SU(4)-structures on R^8.
//!
//! [`Spin7Structure`] wraps a Cayley-type 4-form together with the operator
//! alpha -> *(Omega ^ alpha) on 2-forms and its eigenprojectors.
//! [`SU4Structure`] holds (J, omega, theta) and the L-operator on
//! (2,0)-forms; [`FourFormBasis`] splits 4-forms into the irreducible
//! Spin(7) pieces, refined by SU(4) type.

mod decompose;
mod su4;

pub use decompose::{
    representation_suite, span_checks, FourFormBasis, FourFormDecomposition, LineCheck, Piece,
    SpanReport,
};




pub use su4::{
    c_basis, c_prime_basis, gamma, gamma_prime, kahler_matrix, LOperator, SU4Structure,
};

use crate::error::{Error, Result};
use crate::exterior::{basis, derivation, Form, DIM};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::Coeff;

const CAYLEY_TERMS: [(&[usize], i64); 14] = [
    (&[1, 2, 3, 4], 1),
    (&[1, 2, 5, 6], 1),
    (&[1, 2, 7, 8], 1),
    (&[1, 3, 5, 7], 1),
    (&[1, 3, 6, 8], -1),
    (&[1, 4, 5, 8], -1),
    (&[1, 4, 6, 7], -1),
    (&[2, 3, 5, 8], -1),
    (&[2, 3, 6, 7], -1),
    (&[2, 4, 5, 7], -1),
    (&[2, 4, 6, 8], 1),
    (&[3, 4, 5, 6], 1),
    (&[3, 4, 7, 8], 1),
    (&[5, 6, 7, 8], 1),
];

/// The standard Cayley form Omega_0.
pub fn cayley_form<S: Coeff>() -> Form<S> {
    let mut f = Form::zero();
    for (idx, sign) in CAYLEY_TERMS {
        f = f.add(&Form::dx(idx).scale(&S::from_i64(sign)));
    }
    f
}

/// Necessary conditions for a 4-form to be a Spin(7)-structure. A pass does
/// not certify membership in the GL(8) orbit of Omega_0.
#[derive(Clone, Debug, PartialEq)]
pub struct Spin7Report<S> {
    pub self_dual: bool,
    /// (Omega ^ Omega) / vol.
    pub omega_wedge_omega: S,
    /// Multiplicity of the eigenvalue 3 of alpha -> *(Omega ^ alpha).
    pub mult_3: usize,
    /// Multiplicity of the eigenvalue -1.
    pub mult_minus_1: usize,
    pub pass: bool,
}

/// Matrix of alpha -> *(Omega ^ alpha) on [`basis`]`(2)`.
pub fn wedge_star_matrix<S: Coeff>(omega: &Form<S>) -> Matrix<S> {
    let cols: Vec<Vec<S>> = basis(2)
        .iter()
        .map(|&m| omega.wedge(&Form::monomial(m, S::one())).hodge().to_vector(2))
        .collect();
    Matrix::from_cols(&cols)
}

fn eigen_mult<S: Coeff>(a: &Matrix<S>, lambda: i64) -> usize {
    let shifted = a.sub(&Matrix::identity(a.rows()).scale(&S::from_i64(lambda)));
    a.rows() - shifted.rank()
}

pub fn verify_spin7<S: Coeff>(omega: &Form<S>) -> Spin7Report<S> {
    let self_dual = omega.degree() == Some(4) && omega.hodge().approx_eq(omega);
    let omega_wedge_omega = omega.pair(omega);
    let a = wedge_star_matrix(omega);
    let mult_3 = eigen_mult(&a, 3);
    let mult_minus_1 = eigen_mult(&a, -1);
    let pass = self_dual
        && omega.is_real()
        && (omega_wedge_omega.clone() - &S::from_i64(14)).is_zero()
        && mult_3 == 7
        && mult_minus_1 == 21;
    Spin7Report {
        self_dual,
        omega_wedge_omega,
        mult_3,
        mult_minus_1,
        pass,
    }
}

#[derive(Clone, Debug)]
pub struct Spin7Structure<S> {
    form: Form<S>,
    wedge_star: Matrix<S>,
    pi7: Matrix<S>,
    pi21: Matrix<S>,
}

impl<S: Coeff> Spin7Structure<S> {
    pub fn new(form: Form<S>) -> Result<Self> {
        let report = verify_spin7(&form);
        if !report.pass {
            return Err(Error::NotSpin7(format!(
                "self_dual={}, Omega^Omega={}, multiplicities (3: {}, -1: {})",
                report.self_dual, report.omega_wedge_omega, report.mult_3, report.mult_minus_1
            )));
        }
        let wedge_star = wedge_star_matrix(&form);
        let id = Matrix::identity(wedge_star.rows());
        let quarter = S::from_ratio(1, 4);
        let pi7 = wedge_star.add(&id).scale(&quarter);
        let pi21 = id.scale(&S::from_i64(3)).sub(&wedge_star).scale(&quarter);
        Ok(Spin7Structure {
            form,
            wedge_star,
            pi7,
            pi21,
        })
    }

    pub fn cayley() -> Self {
        Self::new(cayley_form()).expect("the Cayley form is a Spin(7) structure")
    }

    pub fn form(&self) -> &Form<S> {
        &self.form
    }

    pub fn wedge_star_matrix(&self) -> &Matrix<S> {
        &self.wedge_star
    }

    pub fn pi7(&self) -> &Matrix<S> {
        &self.pi7
    }

    pub fn pi21(&self) -> &Matrix<S> {
        &self.pi21
    }

    /// *(Omega ^ alpha).
    pub fn wedge_star(&self, alpha: &Form<S>) -> Form<S> {
        self.form.wedge(alpha).hodge()
    }

    /// (pi_7 alpha, pi_21 alpha).
    pub fn project_2form(&self, alpha: &Form<S>) -> Result<(Form<S>, Form<S>)> {
        alpha.expect_degree(2)?;
        let v = alpha.to_vector(2);
        Ok((
            Form::from_vector(2, &self.pi7.mul_vec(&v)),
            Form::from_vector(2, &self.pi21.mul_vec(&v)),
        ))
    }

    /// Basis of the eigenvalue-3 space of 2-forms.
    pub fn lambda2_7(&self) -> Vec<Form<S>> {
        column_space(&self.pi7, 2)
    }

    pub fn lambda2_21(&self) -> Vec<Form<S>> {
        column_space(&self.pi21, 2)
    }

    /// *(Omega ^ dx_a) for the eight coordinate 1-forms.
    pub fn lambda3_8(&self) -> Vec<Form<S>> {
        (1..=DIM)
            .map(|a| self.form.wedge(&Form::dx(&[a])).hodge())
            .collect()
    }

    /// Kernel of wedge with Omega on 3-forms.
    pub fn lambda3_48(&self) -> Vec<Form<S>> {
        let cols: Vec<Vec<S>> = basis(3)
            .iter()
            .map(|&m| Form::monomial(m, S::one()).wedge(&self.form).to_vector(7))
            .collect();
        Matrix::from_cols(&cols)
            .kernel()
            .iter()
            .map(|v| Form::from_vector(3, v))
            .collect()
    }

    /// The infinitesimal action of so(8) on Omega: X . Omega for the
    /// elementary skew matrices X. Its image is Lambda^4_7.
    pub fn lambda4_7(&self) -> Vec<Form<S>> {
        let mut out = Vec::new();
        for a in 0..DIM {
            for b in a + 1..DIM {
                let mut x = Matrix::zeros(DIM, DIM);
                x[(a, b)] = S::one();
                x[(b, a)] = -S::one();
                out.push(derivation(&x, &self.form));
            }
        }
        independent_forms(&out, 4)
    }

    /// Self-dual 4-forms orthogonal to Omega and to Lambda^4_7.
    pub fn lambda4_27(&self) -> Vec<Form<S>> {
        let sd = independent_forms(
            &basis(4)
                .iter()
                .map(|&m| {
                    let e = Form::monomial(m, S::one());
                    e.add(&e.hodge())
                })
                .collect::<Vec<_>>(),
            4,
        );
        let mut against = vec![self.form.clone()];
        against.extend(self.lambda4_7());
        let rows: Vec<Vec<S>> = against
            .iter()
            .map(|w| sd.iter().map(|s| s.inner(w)).collect())
            .collect();
        Matrix::from_rows(rows)
            .kernel()
            .iter()
            .map(|x| combine(&sd, x))
            .collect()
    }

    /// Anti-self-dual 4-forms.
    pub fn lambda4_35(&self) -> Vec<Form<S>> {
        independent_forms(
            &basis(4)
                .iter()
                .map(|&m| {
                    let e = Form::monomial(m, S::one());
                    e.sub(&e.hodge())
                })
                .collect::<Vec<_>>(),
            4,
        )
    }
}

fn column_space<S: Coeff>(m: &Matrix<S>, k: usize) -> Vec<Form<S>> {
    let cols: Vec<Vec<S>> = (0..m.cols()).map(|c| m.col(c)).collect();
    independent_subset(&cols)
        .into_iter()
        .map(|c| Form::from_vector(k, &cols[c]))
        .collect()
}

/// A maximal independent subfamily of degree-k forms.
pub(crate) fn independent_forms<S: Coeff>(forms: &[Form<S>], k: usize) -> Vec<Form<S>> {
    let vecs: Vec<Vec<S>> = forms.iter().map(|f| f.to_vector(k)).collect();
    independent_subset(&vecs)
        .into_iter()
        .map(|i| forms[i].clone())
        .collect()
}

/// sum_i x_i f_i.
pub(crate) fn combine<S: Coeff>(forms: &[Form<S>], x: &[S]) -> Form<S> {
    forms
        .iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .fold(Form::zero(), |acc, (f, c)| acc.add(&f.scale(c)))
}

/// Elements of span(`forms`) killed by `map`, where `map` lands in degree
/// `out_degree`.
pub(crate) fn kernel_in_span<S: Coeff>(
    forms: &[Form<S>],
    k: usize,
    out_degree: usize,
    map: impl Fn(&Form<S>) -> Form<S>,
) -> Vec<Form<S>> {
    let basis = independent_forms(forms, k);
    if basis.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<S>> = basis.iter().map(|b| map(b).to_vector(out_degree)).collect();
    Matrix::from_cols(&cols)
        .kernel()
        .iter()
        .map(|x| combine(&basis, x))
        .collect()
}

pub(crate) fn vectors<S: Coeff>(forms: &[Form<S>], k: usize) -> Vec<Vec<S>> {
    forms.iter().map(|f| f.to_vector(k)).collect()
}
