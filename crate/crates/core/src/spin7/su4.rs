use super::{combine, independent_forms, kernel_in_span, Spin7Structure};
use crate::error::{Error, Result};
use crate::exterior::{basis, dz_monomial, ComplexStructure, Form, DIM};
use crate::linalg::Matrix;
use crate::scalar::Coeff;

/// The (2,0)-forms c_1..c_6 whose real parts span A+ for the standard
/// structure.
pub fn c_basis<S: Coeff>() -> Vec<Form<S>> {
    let i = S::imag_unit();
    let one = S::one();
    let z = |a, b| dz_monomial::<S>(&[a, b], &[]);
    let pair = |x: (usize, usize), y: (usize, usize), s: &S, t: &S| {
        z(x.0, x.1).scale(s).add(&z(y.0, y.1).scale(t))
    };
    vec![
        pair((1, 2), (3, 4), &one, &one),
        pair((1, 2), (3, 4), &i, &-i.clone()),
        pair((1, 3), (2, 4), &one, &-one.clone()),
        pair((1, 3), (2, 4), &i, &i),
        pair((1, 4), (2, 3), &one, &one),
        pair((1, 4), (2, 3), &i, &-i.clone()),
    ]
}

/// c'_j = i c_j; their real parts span A-.
pub fn c_prime_basis<S: Coeff>() -> Vec<Form<S>> {
    c_basis::<S>()
        .iter()
        .map(|c| c.scale(&S::imag_unit()))
        .collect()
}

/// gamma_j = (c_j + conj c_j) / 2, for j in 1..=6.
pub fn gamma<S: Coeff>(j: usize) -> Form<S> {
    c_basis::<S>()[j - 1].re()
}

/// gamma'_j = (c'_j + conj c'_j) / 2, for j in 1..=6.
pub fn gamma_prime<S: Coeff>(j: usize) -> Form<S> {
    c_prime_basis::<S>()[j - 1].re()
}

/// The complex-linear map L: (2,0) -> (0,2) fixed by
/// alpha ^ conj(L beta) = <alpha, beta> theta / 4.
#[derive(Clone, Debug)]
pub struct LOperator<S> {
    j: ComplexStructure<S>,
    basis: Vec<Form<S>>,
    coords: Matrix<S>,
    /// conj(L b_k) = sum_l n[l][k] b_l.
    n: Matrix<S>,
}

impl<S: Coeff> LOperator<S> {
    pub fn new(j: &ComplexStructure<S>, theta: &Form<S>) -> Result<Self> {
        let candidates: Vec<Form<S>> = basis(2)
            .iter()
            .map(|&m| j.project(&Form::monomial(m, S::one()), 2, 0))
            .collect();
        let b = independent_forms(&candidates, 2);
        if b.len() != 6 {
            return Err(Error::ComplexStructure(format!(
                "(2,0)-forms span {} dimensions",
                b.len()
            )));
        }
        let theta_bar = theta.conj();
        let norm = theta.pair(&theta_bar);
        let q = Matrix::from_fn(6, 6, |r, c| {
            b[r].wedge(&b[c])
                .pair(&theta_bar)
                .div(&norm)
                .expect("theta ^ conj(theta) != 0")
        });
        let g = Matrix::from_fn(6, 6, |r, c| b[r].inner(&b[c]));
        let n = q.solve(&g)?.scale(&S::from_ratio(1, 4));
        let coords = Matrix::from_cols(&b.iter().map(|f| f.to_vector(2)).collect::<Vec<_>>());
        Ok(LOperator {
            j: j.clone(),
            basis: b,
            coords,
            n,
        })
    }

    /// L on a (2,0)-form.
    pub fn apply(&self, alpha: &Form<S>) -> Result<Form<S>> {
        alpha.expect_degree(2)?;
        if !self.j.is_bidegree(alpha, 2, 0) {
            return Err(Error::Bidegree { p: 2, q: 0 });
        }
        let rhs = Matrix::from_cols(&[alpha.to_vector(2)]);
        let x = self.coords.solve(&rhs)?.col(0);
        let xc: Vec<S> = x.iter().map(Coeff::conj).collect();
        Ok(combine(&self.basis, &self.n.mul_vec(&xc)).conj())
    }

    /// L on a real form a in the real part of (2,0) + (0,2): writing
    /// a = (alpha + conj alpha) / 2, L(a) = Re L(alpha).
    pub fn apply_real(&self, a: &Form<S>) -> Result<Form<S>> {
        a.expect_degree(2)?;
        if !a.is_real() {
            return Err(Error::NotReal);
        }
        if !self.j.project(a, 1, 1).is_zero() {
            return Err(Error::InvalidInput(
                "form has a (1,1) component".into(),
            ));
        }
        let alpha = self.j.project(a, 2, 0).scale(&S::from_i64(2));
        Ok(self.apply(&alpha)?.re())
    }

    /// (a+, a-) with L(a+) = a+ and L(a-) = -a-.
    pub fn a_pm_decompose(&self, a: &Form<S>) -> Result<(Form<S>, Form<S>)> {
        let la = self.apply_real(a)?;
        let half = S::from_ratio(1, 2);
        Ok((a.add(&la).scale(&half), a.sub(&la).scale(&half)))
    }

    /// The (2,0) basis used internally.
    pub fn basis(&self) -> &[Form<S>] {
        &self.basis
    }
}

/// A linear SU(4)-structure (J, omega, theta) on R^8 with the standard
/// metric, normalised by omega^4 = 24 vol and theta ^ conj(theta) = 16 vol.
#[derive(Clone, Debug)]
pub struct SU4Structure<S> {
    j: ComplexStructure<S>,
    omega: Form<S>,
    theta: Form<S>,
    l: LOperator<S>,
    a_plus: Vec<Form<S>>,
    a_minus: Vec<Form<S>>,
}

/// The skew matrix w[a][b] = omega(e_a, e_b) of a 2-form.
pub fn kahler_matrix<S: Coeff>(omega: &Form<S>) -> Matrix<S> {
    let mut w = Matrix::zeros(DIM, DIM);
    for (m, c) in omega.degree_part(2).terms() {
        let idx = crate::exterior::indices(m);
        let (a, b) = (idx[0] - 1, idx[1] - 1);
        w[(a, b)] = c.clone();
        w[(b, a)] = -c.clone();
    }
    w
}

impl<S: Coeff> SU4Structure<S> {
    pub fn new(j: ComplexStructure<S>, omega: Form<S>, theta: Form<S>) -> Result<Self> {
        Self::validate(&j, &omega, &theta)?;
        let l = LOperator::new(&j, &theta)?;
        let mut real_20 = Vec::new();
        for b in l.basis() {
            real_20.push(b.re());
            real_20.push(b.im());
        }
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for a in &real_20 {
            let (p, m) = l.a_pm_decompose(a)?;
            plus.push(p);
            minus.push(m);
        }
        let a_plus = independent_forms(&plus, 2);
        let a_minus = independent_forms(&minus, 2);
        if a_plus.len() != 6 || a_minus.len() != 6 {
            return Err(Error::ComplexStructure(format!(
                "A+ and A- have dimensions {} and {}",
                a_plus.len(),
                a_minus.len()
            )));
        }
        Ok(SU4Structure {
            j,
            omega,
            theta,
            l,
            a_plus,
            a_minus,
        })
    }

    fn validate(j: &ComplexStructure<S>, omega: &Form<S>, theta: &Form<S>) -> Result<()> {
        omega.expect_degree(2)?;
        theta.expect_degree(4)?;
        if !omega.is_real() {
            return Err(Error::NotReal);
        }
        if !kahler_matrix(omega).sub(&j.matrix().transpose()).is_zero() {
            return Err(Error::ComplexStructure(
                "omega(x, y) != g(Jx, y)".into(),
            ));
        }
        let omega4 = omega.pow(4).vol_coeff();
        if !(omega4 - &S::from_i64(24)).is_zero() {
            return Err(Error::ComplexStructure("omega^4 != 24 vol".into()));
        }
        if !j.is_bidegree(theta, 4, 0) {
            return Err(Error::Bidegree { p: 4, q: 0 });
        }
        if !(theta.pair(&theta.conj()) - &S::from_i64(16)).is_zero() {
            return Err(Error::ComplexStructure(
                "theta ^ conj(theta) != 16 vol".into(),
            ));
        }
        Ok(())
    }

    /// J e_{2k-1} = e_{2k}, omega = sum dx_{2k-1,2k}, theta = dz_1234.
    pub fn standard() -> Self {
        let j = ComplexStructure::standard();
        let omega = (1..=4).fold(Form::zero(), |acc, k| acc.add(&Form::dx(&[2 * k - 1, 2 * k])));
        let theta = dz_monomial(&[1, 2, 3, 4], &[]);
        Self::validate(&j, &omega, &theta).expect("standard structure");
        let l = LOperator::new(&j, &theta).expect("standard structure");
        SU4Structure {
            j,
            omega,
            theta,
            l,
            a_plus: (1..=6).map(gamma).collect(),
            a_minus: (1..=6).map(gamma_prime).collect(),
        }
    }

    pub fn j(&self) -> &ComplexStructure<S> {
        &self.j
    }

    pub fn omega(&self) -> &Form<S> {
        &self.omega
    }

    pub fn theta(&self) -> &Form<S> {
        &self.theta
    }

    pub fn l_operator(&self) -> &LOperator<S> {
        &self.l
    }

    /// A basis of A+; the gamma_j for the standard structure.
    pub fn a_plus(&self) -> &[Form<S>] {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &[Form<S>] {
        &self.a_minus
    }

    /// Omega = omega^2 / 2 + Re theta.
    pub fn cayley(&self) -> Form<S> {
        self.omega
            .wedge(&self.omega)
            .scale(&S::from_ratio(1, 2))
            .add(&self.theta.re())
    }

    pub fn spin7(&self) -> Result<Spin7Structure<S>> {
        Spin7Structure::new(self.cayley())
    }

    /// Real forms of type (p,q) + (q,p).
    pub fn delta(&self, p: usize, q: usize) -> Vec<Form<S>> {
        let forms: Vec<Form<S>> = basis(p + q)
            .iter()
            .map(|&m| {
                let e = Form::monomial(m, S::one());
                let f = self.j.project(&e, p, q);
                if p == q {
                    f
                } else {
                    f.add(&self.j.project(&e, q, p))
                }
            })
            .collect();
        independent_forms(&forms, p + q)
    }

    /// Primitive real (1,1)-forms: alpha ^ omega^3 = 0.
    pub fn delta11_prim(&self) -> Vec<Form<S>> {
        let w3 = self.omega.pow(3);
        kernel_in_span(&self.delta(1, 1), 2, 8, |f| f.wedge(&w3))
    }

    /// Primitive real (2,1) + (1,2)-forms: alpha ^ omega^2 = 0.
    pub fn delta21_prim(&self) -> Vec<Form<S>> {
        let w2 = self.omega.pow(2);
        kernel_in_span(&self.delta(2, 1), 3, 7, |f| f.wedge(&w2))
    }

    /// Primitive real (2,2)-forms: alpha ^ omega = 0.
    pub fn delta22_prim(&self) -> Vec<Form<S>> {
        kernel_in_span(&self.delta(2, 2), 4, 6, |f| f.wedge(&self.omega))
    }

    /// Primitive real (1,3) + (3,1)-forms.
    pub fn delta13_prim(&self) -> Vec<Form<S>> {
        kernel_in_span(&self.delta(1, 3), 4, 6, |f| f.wedge(&self.omega))
    }

    /// Conjugate by an orthogonal map g: the structure whose forms are the
    /// pullbacks by g.
    pub fn pullback(&self, g: &Matrix<S>) -> Result<Self> {
        let ginv = g.inverse()?;
        let j = ComplexStructure::new(ginv.mul(self.j.matrix()).mul(g))?;
        Self::new(j, self.omega.pullback(g), self.theta.pullback(g))
    }
}

impl<S: Coeff> Default for SU4Structure<S> {
    fn default() -> Self {
        Self::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::same_span;
    use crate::scalar::{qi, Scalar};
    use crate::spin7::{cayley_form, vectors};

    type F = Form<Scalar>;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn standard_structure_gives_cayley_form() {
        let su4 = SU4Structure::<Scalar>::standard();
        assert_eq!(su4.cayley(), cayley_form());
        let w = su4.omega();
        let o = su4.cayley();
        assert_eq!(o.wedge(w).wedge(w).vol_coeff(), s(12));
        let re = su4.theta().re();
        assert_eq!(re.wedge(&re).vol_coeff(), s(8));
        assert_eq!(su4.theta().norm_sq(), s(16));
        assert_eq!(w.norm_sq(), s(4));
    }

    #[test]
    fn wedge_table() {
        let c = c_basis::<Scalar>();
        let cp = c_prime_basis::<Scalar>();
        let theta = SU4Structure::<Scalar>::standard().theta().clone();
        for i in 0..6 {
            for j in 0..6 {
                let cc = c[i].wedge(&c[j]);
                let ccp = c[i].wedge(&cp[j]);
                if i == j {
                    assert_eq!(cc, theta.scale(&s(2)));
                    assert_eq!(ccp, theta.scale(&Scalar::gaussian(qi(0), qi(2))));
                } else {
                    assert!(cc.is_zero() && ccp.is_zero());
                }
            }
        }
    }

    #[test]
    fn l_operator_on_standard_bases() {
        let su4 = SU4Structure::<Scalar>::standard();
        let l = su4.l_operator();
        for (c, cp) in c_basis::<Scalar>().iter().zip(c_prime_basis::<Scalar>()) {
            assert_eq!(l.apply(c).unwrap(), c.conj());
            assert_eq!(l.apply(&cp).unwrap(), cp.conj().scale(&s(-1)));
        }
        for j in 1..=6 {
            let g = gamma::<Scalar>(j);
            assert_eq!(l.a_pm_decompose(&g).unwrap(), (g.clone(), F::zero()));
            let gp = gamma_prime::<Scalar>(j);
            assert_eq!(l.a_pm_decompose(&gp).unwrap(), (F::zero(), gp.clone()));
            assert_eq!(g.norm_sq(), s(4));
            assert_eq!(gp.norm_sq(), s(4));
            assert!(g.inner(su4.omega()).is_zero());
            for k in 1..=6 {
                assert!(g.inner(&gamma_prime(k)).is_zero());
                if k != j {
                    assert!(g.inner(&gamma(k)).is_zero());
                }
            }
        }
        let mixed = c_basis::<Scalar>()[0]
            .add(&c_prime_basis::<Scalar>()[0])
            .scale(&Scalar::ratio(1, 2))
            .re();
        let (p, m) = l.a_pm_decompose(&mixed).unwrap();
        assert_eq!(p, gamma(1).scale(&Scalar::ratio(1, 2)));
        assert_eq!(m, gamma_prime(1).scale(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn generic_a_pm_matches_gamma_bases() {
        let std = SU4Structure::<Scalar>::standard();
        let generic =
            SU4Structure::new(std.j().clone(), std.omega().clone(), std.theta().clone()).unwrap();
        assert!(same_span(&vectors(generic.a_plus(), 2), &vectors(std.a_plus(), 2)));
        assert!(same_span(&vectors(generic.a_minus(), 2), &vectors(std.a_minus(), 2)));
    }

    #[test]
    fn l_is_an_isometric_involution() {
        let su4 = SU4Structure::<Scalar>::standard();
        let l = su4.l_operator();
        let alpha = dz_monomial::<Scalar>(&[1, 2], &[])
            .scale(&Scalar::gaussian(qi(3), qi(-1)))
            .add(&dz_monomial(&[2, 4], &[]).scale(&Scalar::ratio(2, 7)))
            .add(&dz_monomial(&[1, 3], &[]).scale(&Scalar::i()));
        let la = l.apply(&alpha).unwrap();
        assert_eq!(la.norm_sq(), alpha.norm_sq());
        assert_eq!(l.apply(&la.conj()).unwrap().conj(), alpha);
        let lhs = alpha.wedge(&la.conj());
        assert_eq!(lhs, su4.theta().scale(&alpha.norm_sq().div(&s(4)).unwrap()));
        assert!(l.apply(&F::dx(&[1, 2])).is_err());
    }

    #[test]
    fn piece_dimensions() {
        let su4 = SU4Structure::<Scalar>::standard();
        assert_eq!(su4.delta(1, 1).len(), 16);
        assert_eq!(su4.delta11_prim().len(), 15);
        assert_eq!(su4.delta(3, 0).len(), 8);
        assert_eq!(su4.delta21_prim().len(), 40);
        assert_eq!(su4.delta22_prim().len(), 20);
        assert_eq!(su4.delta13_prim().len(), 20);
    }

    #[test]
    fn rejects_bad_normalisation() {
        let std = SU4Structure::<Scalar>::standard();
        let r = SU4Structure::new(
            std.j().clone(),
            std.omega().scale(&s(2)),
            std.theta().clone(),
        );
        assert!(r.is_err());
        let r = SU4Structure::new(
            std.j().clone(),
            std.omega().clone(),
            std.theta().scale(&s(2)),
        );
        assert!(r.is_err());
    }
}
