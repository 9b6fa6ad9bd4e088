//! Linear complex structures on R^8 and the bidegree splitting they induce.
//!
//! Convention: (1,0)-forms are the +i eigenforms of J^*, so on the standard
//! structure dz_j = dx_{2j-1} + i dx_{2j} and J e_{2j-1} = e_{2j}. With this
//! J the Kahler form satisfies omega(x, y) = g(Jx, y).

use super::{indices, wedge_sign, Form, DIM};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Coeff;

/// dz_j = dx_{2j-1} + i dx_{2j}, for j in 1..=4.
pub fn dz<S: Coeff>(j: usize) -> Form<S> {
    assert!((1..=4).contains(&j), "complex index {j} outside 1..=4");
    Form::dx(&[2 * j - 1]).add(&Form::dx(&[2 * j]).scale(&S::imag_unit()))
}

pub fn dzb<S: Coeff>(j: usize) -> Form<S> {
    dz::<S>(j).conj()
}

/// dz_{h1} ^ ... ^ dz_{hp} ^ dzbar_{a1} ^ ... ^ dzbar_{aq}.
pub fn dz_monomial<S: Coeff>(holo: &[usize], anti: &[usize]) -> Form<S> {
    let mut f = Form::scalar(S::one());
    for &j in holo {
        f = f.wedge(&dz(j));
    }
    for &j in anti {
        f = f.wedge(&dzb(j));
    }
    f
}

/// An orthogonal complex structure on R^8.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructure<S> {
    j: Matrix<S>,
}

impl<S: Coeff> ComplexStructure<S> {
    pub fn new(j: Matrix<S>) -> Result<Self> {
        if j.rows() != DIM || j.cols() != DIM {
            return Err(Error::ComplexStructure("J must be 8x8".into()));
        }
        let id = Matrix::identity(DIM);
        if !j.mul(&j).add(&id).is_zero() {
            return Err(Error::ComplexStructure("J^2 != -Id".into()));
        }
        if !j.transpose().mul(&j).sub(&id).is_zero() {
            return Err(Error::ComplexStructure("J is not orthogonal".into()));
        }
        Ok(ComplexStructure { j })
    }

    pub fn standard() -> Self {
        let mut j = Matrix::zeros(DIM, DIM);
        for k in 0..4 {
            j[(2 * k + 1, 2 * k)] = S::one();
            j[(2 * k, 2 * k + 1)] = -S::one();
        }
        ComplexStructure { j }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.j
    }

    /// The derivation extending J^*; it acts on (p,q)-forms as i(p - q).
    pub fn derivation(&self, form: &Form<S>) -> Form<S> {
        derivation(&self.j, form)
    }

    /// The (p,q) component of a form.
    pub fn project(&self, form: &Form<S>, p: usize, q: usize) -> Form<S> {
        let k = p + q;
        if p > 4 || q > 4 {
            return Form::zero();
        }
        let mut f = form.degree_part(k);
        if f.is_zero() {
            return f;
        }
        let target = p as i64 - q as i64;
        let i = S::imag_unit();
        for pp in k.saturating_sub(4)..=k.min(4) {
            let m = 2 * pp as i64 - k as i64;
            if m == target {
                continue;
            }
            let shift = i.clone() * &S::from_i64(m);
            let denom = i.clone() * &S::from_i64(target - m);
            let inv = denom.inv().expect("distinct eigenvalues");
            f = self.derivation(&f).sub(&f.scale(&shift)).scale(&inv);
        }
        f
    }

    pub fn is_bidegree(&self, form: &Form<S>, p: usize, q: usize) -> bool {
        self.project(form, p, q).approx_eq(form)
    }

    /// A (1,0)-coframe: (1 - i J^*)/2 applied to dx_1..dx_8, a maximal
    /// independent subset, then Gram-Schmidt.
    pub fn frame(&self) -> ComplexFrame<S> {
        let half = S::from_ratio(1, 2);
        let i = S::imag_unit();
        let candidates: Vec<Form<S>> = (0..DIM)
            .map(|a| {
                let dx = Form::monomial(1 << a, S::one());
                let jdx = Form::from_terms((0..DIM).map(|b| (1u8 << b, self.j[(a, b)].clone())));
                dx.sub(&jdx.scale(&i)).scale(&half)
            })
            .collect();
        let mut forms: Vec<Form<S>> = Vec::new();
        for c in candidates {
            let mut v = c;
            for e in &forms {
                let coef = v.inner(e).div(&e.norm_sq()).expect("nonzero frame vector");
                v = v.sub(&e.scale(&coef));
            }
            if !v.is_zero() {
                forms.push(v);
            }
            if forms.len() == 4 {
                break;
            }
        }
        // Rescale to |e_j|^2 = 2 when the factor is available in the field.
        let two = S::from_i64(2);
        let forms: Vec<Form<S>> = forms
            .into_iter()
            .map(|e| {
                let ratio = two.div(&e.norm_sq()).expect("nonzero frame vector");
                match rescale_factor(&ratio) {
                    Some(t) => e.scale(&t),
                    None => e,
                }
            })
            .collect();
        let norms_sq = forms.iter().map(Form::norm_sq).collect();
        ComplexFrame { forms, norms_sq }
    }
}

/// The derivation of the exterior algebra extending the endomorphism
/// dx_a -> sum_b x[a][b] dx_b of 1-forms.
pub fn derivation<S: Coeff>(x: &Matrix<S>, form: &Form<S>) -> Form<S> {
    let rows: Vec<Vec<(usize, S)>> = (0..DIM)
        .map(|a| {
            (0..DIM)
                .filter(|&b| !x[(a, b)].is_zero())
                .map(|b| (b, x[(a, b)].clone()))
                .collect()
        })
        .collect();
    let mut out = Form::zero();
    for (m, c) in form.terms() {
        for (pos, a) in indices(m).into_iter().enumerate() {
            let rest = m & !(1 << (a - 1));
            let lead_sign = pos % 2 == 1;
            for (b, xab) in &rows[a - 1] {
                let Some(s) = wedge_sign(1 << b, rest) else {
                    continue;
                };
                let v = c.clone() * xab;
                let neg = lead_sign != (s < 0);
                out.add_term(rest | (1 << b), if neg { -v } else { v });
            }
        }
    }
    out
}

fn rescale_factor<S: Coeff>(ratio: &S) -> Option<S> {
    if !S::EXACT {
        let r = ratio.to_c64().re;
        return Some(S::from_q(&crate::scalar::Q::from_float(r.sqrt())?));
    }
    let r = ratio.as_rational()?;
    crate::scalar::rational_sqrt(&r).map(|t| S::from_q(&t))
}

/// Four mutually orthogonal (1,0)-forms for a complex structure.
#[derive(Clone, Debug)]
pub struct ComplexFrame<S> {
    pub forms: Vec<Form<S>>,
    /// |e_j|^2; equal to 2 whenever the rescaling was exact.
    pub norms_sq: Vec<S>,
}
