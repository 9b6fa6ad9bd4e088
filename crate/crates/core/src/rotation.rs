//! Rotating an SU(4)-structure inside its Spin(7)-structure.
//!
//! For gamma in A+ the Kahler form is replaced by
//! omega' = 2 (omega + gamma) / rho with rho^2 = 4 + |gamma|^2, and theta by
//! the (4,0)-part of Omega - omega'^2 / 2 for the complex structure of
//! omega'. In exact mode rho is adjoined to the scalar tower.

use nalgebra::DMatrix;

use crate::bogomolov::k_value;
use crate::error::{Error, Result};
use crate::exterior::{basis, indices, lefschetz_decompose, ComplexStructure, Form, DIM};
use crate::linalg::{in_span, Matrix};
use crate::poly::real_rooted_sign_counts;
use crate::scalar::Coeff;
use crate::spin7::{kahler_matrix, SU4Structure};

/// A rotation direction gamma = (c + conj c) / 2 in A+.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationParameter<S> {
    pub c: Form<S>,
    pub gamma: Form<S>,
    pub gamma_norm_sq: S,
    /// |omega + gamma| = sqrt(4 + |gamma|^2).
    pub rho: S,
    /// When c is rotatable only after rescaling theta: the theta for which
    /// L(c) = conj c.
    pub rescaled_theta: Option<Form<S>>,
}

impl<S: Coeff> RotationParameter<S> {
    /// The parameter for a real 2-form gamma already known to lie in A+.
    pub fn from_gamma(su4: &SU4Structure<S>, gamma: &Form<S>) -> Result<Self> {
        let (plus, minus) = su4.l_operator().a_pm_decompose(gamma)?;
        if !minus.is_zero() || !plus.approx_eq(gamma) {
            return Err(Error::NotInAPlus("gamma has an A- component".into()));
        }
        let c = su4.j().project(gamma, 2, 0).scale(&S::from_i64(2));
        Self::build(c, gamma.clone(), None)
    }

    fn build(c: Form<S>, gamma: Form<S>, rescaled_theta: Option<Form<S>>) -> Result<Self> {
        let gamma_norm_sq = gamma.norm_sq();
        let rho = (S::from_i64(4) + &gamma_norm_sq).sqrt_real()?;
        Ok(RotationParameter {
            c,
            gamma,
            gamma_norm_sq,
            rho,
            rescaled_theta,
        })
    }

    /// The same direction scaled by a real factor.
    pub fn scaled(&self, t: &S) -> Result<Self> {
        Self::build(
            self.c.scale(t),
            self.gamma.scale(t),
            self.rescaled_theta.clone(),
        )
    }
}

/// gamma = (c + conj c) / 2 for a (2,0)-form c with L(c) = conj c.
pub fn gamma_from_c<S: Coeff>(su4: &SU4Structure<S>, c: &Form<S>) -> Result<RotationParameter<S>> {
    if c.is_zero() {
        return Err(Error::InvalidInput("c = 0 gives no rotation".into()));
    }
    c.expect_degree(2)?;
    if !su4.j().is_bidegree(c, 2, 0) {
        return Err(Error::Bidegree { p: 2, q: 0 });
    }
    let cc = c.wedge(c);
    let c_sq = c.norm_sq();
    if !(cc.norm_sq() - &(c_sq.clone() * &c_sq)).is_zero() {
        return Err(Error::NotInAPlus(
            "|c^c| != |c|^2, so c is not rotatable by any theta".into(),
        ));
    }
    let lc = su4.l_operator().apply(c)?;
    let rescaled = if lc.approx_eq(&c.conj()) {
        None
    } else {
        Some(cc.scale(&S::from_i64(4).div(&c_sq)?))
    };
    RotationParameter::build(c.clone(), c.re(), rescaled)
}

/// Which candidate for J' validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JConvention {
    /// J' = -W'^{-1}, with W' the matrix of omega'.
    Inverse,
    /// J' = (-W'^{-1})^T.
    Transposed,
}

impl JConvention {
    pub fn name(self) -> &'static str {
        match self {
            JConvention::Inverse => "inverse",
            JConvention::Transposed => "transposed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RotationResult<S> {
    /// (J', omega', theta').
    pub structure: SU4Structure<S>,
    /// omega + gamma before normalisation.
    pub omega_sum: Form<S>,
    pub rho: S,
    pub convention: JConvention,
    /// s in Im theta'(u1, ..) = s Re theta'(J' u1, ..), or 0 if neither
    /// sign holds.
    pub im_theta_sign: i8,
}

fn recover_j<S: Coeff>(omega: &Form<S>) -> Result<(ComplexStructure<S>, JConvention)> {
    let w = kahler_matrix(omega);
    let neg_inv = w.inverse()?.scale(&-S::one());
    let id = Matrix::identity(DIM);
    for (conv, cand) in [
        (JConvention::Inverse, neg_inv.clone()),
        (JConvention::Transposed, neg_inv.transpose()),
    ] {
        let Ok(j) = ComplexStructure::new(cand) else {
            continue;
        };
        let positive = w.mul(j.matrix()).sub(&id).is_zero();
        if positive && j.is_bidegree(omega, 1, 1) {
            return Ok((j, conv));
        }
    }
    Err(Error::ComplexStructure(
        "no compatible complex structure for omega'".into(),
    ))
}

fn im_theta_sign<S: Coeff>(j: &ComplexStructure<S>, theta: &Form<S>) -> i8 {
    let (re, im) = (theta.re(), theta.im());
    let e = |a: usize| -> Vec<S> {
        (0..DIM)
            .map(|b| if a == b { S::one() } else { S::zero() })
            .collect()
    };
    let je = |a: usize| j.matrix().col(a);
    let mut fits = [true, true];
    for &m in basis(4) {
        let idx: Vec<usize> = indices(m).into_iter().map(|a| a - 1).collect();
        let lhs = im.eval(&idx.iter().map(|&a| e(a)).collect::<Vec<_>>());
        let mut vs: Vec<Vec<S>> = idx.iter().map(|&a| e(a)).collect();
        vs[0] = je(idx[0]);
        let rhs = re.eval(&vs);
        fits[0] &= (lhs.clone() + &rhs).is_zero();
        fits[1] &= (lhs - &rhs).is_zero();
    }
    match fits {
        [true, _] => -1,
        [_, true] => 1,
        _ => 0,
    }
}

pub fn rotate<S: Coeff>(su4: &SU4Structure<S>, p: &RotationParameter<S>) -> Result<RotationResult<S>> {
    let omega_sum = su4.omega().add(&p.gamma);
    let omega_p = omega_sum.scale(&S::from_i64(2).div(&p.rho)?);
    let (j, convention) = recover_j(&omega_p)?;
    let cayley = su4.cayley();
    let rest = cayley.sub(&omega_p.wedge(&omega_p).scale(&S::from_ratio(1, 2)));
    let theta_p = j.project(&rest, 4, 0).scale(&S::from_i64(2));
    let im_theta_sign = im_theta_sign(&j, &theta_p);
    let structure = SU4Structure::new(j, omega_p, theta_p)?;
    if !structure.cayley().approx_eq(&cayley) {
        return Err(Error::NotSpin7(
            "rotated structure does not reproduce Omega".into(),
        ));
    }
    Ok(RotationResult {
        structure,
        omega_sum,
        rho: p.rho.clone(),
        convention,
        im_theta_sign,
    })
}

/// ((beta - 3k omega^2) ^ gamma^2) / vol.
pub fn rotation_residual<S: Coeff>(beta: &Form<S>, su4: &SU4Structure<S>, gamma: &Form<S>) -> Result<S> {
    check_real_22(beta, su4)?;
    let k = k_value(beta, su4)?;
    let w = su4.omega();
    let b = beta.sub(&w.wedge(w).scale(&(S::from_i64(3) * &k)));
    Ok(b.wedge(gamma).pair(gamma))
}

fn check_real_22<S: Coeff>(beta: &Form<S>, su4: &SU4Structure<S>) -> Result<()> {
    beta.expect_degree(4)?;
    if !beta.is_real() {
        return Err(Error::NotReal);
    }
    if !su4.j().is_bidegree(beta, 2, 2) {
        return Err(Error::Bidegree { p: 2, q: 2 });
    }
    Ok(())
}

/// The direction that rotates `rotated` back to the original structure:
/// gamma' = -(2 / rho)(gamma - |gamma|^2 omega / 4).
pub fn rotate_back_gamma<S: Coeff>(
    original: &SU4Structure<S>,
    rotated: &RotationResult<S>,
    p: &RotationParameter<S>,
) -> Result<RotationParameter<S>> {
    let shift = original
        .omega()
        .scale(&(p.gamma_norm_sq.clone() * &S::from_ratio(1, 4)));
    let factor = -S::from_i64(2).div(&p.rho)?;
    let gamma = p.gamma.sub(&shift).scale(&factor);
    RotationParameter::from_gamma(&rotated.structure, &gamma)
}

/// Phi_beta(gamma_i, gamma_j) = ((beta - 3k omega^2) ^ gamma_i ^ gamma_j) / vol
/// on the A+ basis of the structure.
/// A class omega^2 + mu beta0 with zero rotation residual for gamma, where
/// beta0 is the primitive part of Re(c ^ conj c).
pub fn rotatable_class<S: Coeff>(su4: &SU4Structure<S>, p: &RotationParameter<S>) -> Result<Form<S>> {
    let w = su4.omega();
    let w2 = w.wedge(w);
    let beta0 = lefschetz_decompose(&p.c.wedge(&p.c.conj()).re(), w, su4.j())?.primitive;
    let base = rotation_residual(&w2, su4, &p.gamma)?;
    let slope = rotation_residual(&w2.add(&beta0), su4, &p.gamma)? - &base;
    let mu = (-base).div(&slope)?;
    Ok(w2.add(&beta0.scale(&mu)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiForm<S> {
    pub matrix: Matrix<S>,
    pub k: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Zero,
    NegativeSemidefinite,
    PositiveSemidefinite,
    Indefinite,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Zero => "zero",
            Classification::NegativeSemidefinite => "negative-semidefinite",
            Classification::PositiveSemidefinite => "positive-semidefinite",
            Classification::Indefinite => "indefinite",
        }
    }

    fn from_inertia(pos: usize, neg: usize) -> Self {
        match (pos, neg) {
            (0, 0) => Classification::Zero,
            (0, _) => Classification::NegativeSemidefinite,
            (_, 0) => Classification::PositiveSemidefinite,
            _ => Classification::Indefinite,
        }
    }
}

/// Eigenvalue tolerance for float classification, relative to the largest
/// entry (or absolute when entries are below 1).
pub const CLASSIFY_TOL: f64 = 1e-9;

pub fn phi_form<S: Coeff>(beta: &Form<S>, su4: &SU4Structure<S>) -> Result<PhiForm<S>> {
    check_real_22(beta, su4)?;
    let k = k_value(beta, su4)?;
    let w = su4.omega();
    let b = beta.sub(&w.wedge(w).scale(&(S::from_i64(3) * &k)));
    let g = su4.a_plus();
    let bg: Vec<Form<S>> = g.iter().map(|x| b.wedge(x)).collect();
    let matrix = Matrix::from_fn(g.len(), g.len(), |i, j| bg[i].pair(&g[j]).re());
    Ok(PhiForm { matrix, k })
}

impl<S: Coeff> PhiForm<S> {
    /// (positive, zero, negative) eigenvalue counts.
    pub fn inertia(&self) -> (usize, usize, usize) {
        if S::EXACT {
            real_rooted_sign_counts(&self.matrix.char_poly())
        } else {
            let n = self.matrix.rows();
            let m = DMatrix::from_fn(n, n, |i, j| self.matrix[(i, j)].to_c64().re);
            let scale = m.amax().max(1.0);
            let ev = m.symmetric_eigen().eigenvalues;
            let tol = CLASSIFY_TOL * scale;
            let pos = ev.iter().filter(|&&x| x > tol).count();
            let neg = ev.iter().filter(|&&x| x < -tol).count();
            (pos, n - pos - neg, neg)
        }
    }

    pub fn classify(&self) -> Classification {
        let (pos, _, neg) = self.inertia();
        Classification::from_inertia(pos, neg)
    }

    /// Kernel basis, as coordinate vectors on the A+ basis.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        if S::EXACT {
            return self.matrix.kernel();
        }
        let n = self.matrix.rows();
        let m = DMatrix::from_fn(n, n, |i, j| self.matrix[(i, j)].to_c64().re);
        let tol = CLASSIFY_TOL * m.amax().max(1.0);
        let eig = m.symmetric_eigen();
        (0..n)
            .filter(|&i| eig.eigenvalues[i].abs() <= tol)
            .map(|i| {
                eig.eigenvectors
                    .column(i)
                    .iter()
                    .map(|&x| S::from_c64(x.into()).expect("float coefficients"))
                    .collect()
            })
            .collect()
    }
}

/// Diagnostics for the first-order terms of a solution of the rotation
/// equation.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstVariation<S> {
    /// (beta0 - 2k omega^2) ^ gamma.
    pub residual1: Form<S>,
    /// Whether beta1 ^ omega = gamma ^ gamma' for some gamma' in A-.
    pub solvable: bool,
}

pub fn first_variation_residuals<S: Coeff>(
    beta: &Form<S>,
    su4: &SU4Structure<S>,
    p: &RotationParameter<S>,
) -> Result<FirstVariation<S>> {
    let r = rotation_residual(beta, su4, &p.gamma)?;
    if !r.is_zero() {
        return Err(Error::InvalidInput(format!(
            "rotation residual is {r}, not zero"
        )));
    }
    let w = su4.omega();
    let lef = lefschetz_decompose(beta, w, su4.j())?;
    let residual1 = lef
        .primitive
        .sub(&w.wedge(w).scale(&(S::from_i64(2) * &lef.k)))
        .wedge(&p.gamma);
    let target = lef.beta1.wedge(w).to_vector(4);
    let span: Vec<Vec<S>> = su4
        .a_minus()
        .iter()
        .map(|a| p.gamma.wedge(a).to_vector(4))
        .collect();
    Ok(FirstVariation {
        residual1,
        solvable: in_span(&span, &target),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::dz_monomial;
    use crate::scalar::Scalar;
    use crate::Complex64;
    use crate::spin7::{c_basis, gamma};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type F = Form<Scalar>;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    fn weil_class() -> F {
        let a = dz_monomial::<Scalar>(&[1, 2], &[3, 4]);
        a.add(&a.conj())
    }

    #[test]
    fn gamma_from_c_examples() {
        let su4 = SU4Structure::<Scalar>::standard();
        let c = c_basis::<Scalar>();
        let p = gamma_from_c(&su4, &c[0]).unwrap();
        assert_eq!(p.gamma, gamma(1));
        assert!(p.rescaled_theta.is_none());
        assert_eq!(p.gamma_norm_sq, s(4));
        assert_eq!(p.rho.clone() * &p.rho, s(8));
        assert_eq!(gamma_from_c(&su4, &c[1]).unwrap().gamma, gamma(2));
        let dz12 = dz_monomial::<Scalar>(&[1, 2], &[]);
        assert!(matches!(
            gamma_from_c(&su4, &dz12),
            Err(Error::NotInAPlus(_))
        ));
        assert!(gamma_from_c(&su4, &F::zero()).is_err());
        // c'_1 = i c_1 is rotatable only after rescaling theta by -1.
        let cp = c[0].scale(&Scalar::i());
        let p = gamma_from_c(&su4, &cp).unwrap();
        assert_eq!(p.rescaled_theta, Some(su4.theta().scale(&s(-1))));
    }

    #[test]
    fn rotation_by_gamma1() {
        let su4 = SU4Structure::<Scalar>::standard();
        let p = gamma_from_c(&su4, &c_basis()[0]).unwrap();
        let r = rotate(&su4, &p).unwrap();
        let w = r.structure.omega();
        assert_eq!(w.norm_sq(), s(4));
        assert_eq!(w.pow(4).vol_coeff(), s(24));
        assert_eq!(r.structure.cayley(), su4.cayley());
        assert_eq!(r.convention, JConvention::Transposed);
        assert_eq!(r.im_theta_sign, -1);
        assert_eq!(im_theta_sign(su4.j(), su4.theta()), -1);
        let g4 = p.gamma.pow(4).vol_coeff();
        assert_eq!(g4, p.gamma_norm_sq.clone() * &p.gamma_norm_sq * &Scalar::ratio(3, 2));

        let back = rotate_back_gamma(&su4, &r, &p).unwrap();
        assert_eq!(back.gamma_norm_sq, p.gamma_norm_sq);
        assert!(back.gamma.inner(w).is_zero());
        let rr = rotate(&r.structure, &back).unwrap();
        assert_eq!(rr.structure.omega(), su4.omega());
    }

    #[test]
    fn residual_examples() {
        let su4 = SU4Structure::<Scalar>::standard();
        let product = dz_monomial::<Scalar>(&[1, 2], &[1, 2]);
        assert!(product.is_real());
        assert_eq!(k_value(&product, &su4).unwrap(), Scalar::ratio(1, 3));
        let half_c1 = c_basis::<Scalar>()[0].scale(&Scalar::ratio(1, 2));
        let p = gamma_from_c(&su4, &half_c1).unwrap();
        assert!(rotation_residual(&product, &su4, &p.gamma).unwrap().is_zero());

        let w2 = su4.omega().pow(2);
        let beta = weil_class().add(&w2);
        assert!(rotation_residual(&beta, &su4, &gamma(1)).unwrap().is_zero());
        for j in 1..=6 {
            let g = gamma::<Scalar>(j).add(&gamma(1).scale(&Scalar::ratio(j as i64, 3)));
            let r = rotation_residual(&w2, &su4, &g).unwrap();
            assert_eq!(r, g.norm_sq() * &s(-4));
        }
        assert!(rotation_residual(&F::dx(&[1, 3, 5, 7]), &su4, &gamma(1)).is_err());
    }

    #[test]
    fn rotatable_class_keeps_k() {
        let su4 = SU4Structure::<Scalar>::standard();
        let g = gamma::<Scalar>(1)
            .add(&gamma(4).scale(&Scalar::ratio(1, 2)))
            .sub(&gamma(6).scale(&Scalar::ratio(2, 3)));
        for g in [gamma::<Scalar>(1), gamma(3), g] {
            let p = RotationParameter::from_gamma(&su4, &g).unwrap();
            let beta = rotatable_class(&su4, &p).unwrap();
            assert!(rotation_residual(&beta, &su4, &g).unwrap().is_zero());
            let r = rotate(&su4, &p).unwrap();
            assert!(r.structure.j().is_bidegree(&beta, 2, 2));
            assert_eq!(k_value(&beta, &r.structure).unwrap(), k_value(&beta, &su4).unwrap());
        }
        // For gamma_1 the class is omega^2 + (3/5) prim Re(c_1 ^ conj c_1).
        let p = RotationParameter::from_gamma(&su4, &gamma(1)).unwrap();
        let beta = rotatable_class(&su4, &p).unwrap();
        assert_eq!(k_value(&beta, &su4).unwrap(), s(1));
    }

    #[test]
    fn phi_examples() {
        let su4 = SU4Structure::<Scalar>::standard();
        let w2 = su4.omega().pow(2);
        let phi = phi_form(&w2, &su4).unwrap();
        assert_eq!(phi.matrix, Matrix::identity(6).scale(&s(-16)));
        assert_eq!(phi.classify(), Classification::NegativeSemidefinite);
        let beta = weil_class().add(&w2);
        let phi = phi_form(&beta, &su4).unwrap();
        assert_eq!(phi.classify(), Classification::NegativeSemidefinite);
        assert!(phi.matrix.mul_vec(&[s(1), s(0), s(0), s(0), s(0), s(0)]).iter().all(Coeff::is_zero));
        let (_, zero, _) = phi.inertia();
        assert!(zero >= 1);
        // The Weil class alone has k = 0 and takes both signs on A+.
        let phi = phi_form(&weil_class(), &su4).unwrap();
        assert_eq!(phi.k, s(0));
        assert!(phi.matrix[(0, 0)].real_sign() == Some(std::cmp::Ordering::Greater));
        assert!(phi.matrix[(1, 1)].real_sign() == Some(std::cmp::Ordering::Less));
        assert_eq!(phi.classify(), Classification::Indefinite);
    }

    #[test]
    fn first_variation_on_worked_classes() {
        let su4 = SU4Structure::<Scalar>::standard();
        let w2 = su4.omega().pow(2);
        let beta = weil_class().add(&w2);
        let p = gamma_from_c(&su4, &c_basis()[0]).unwrap();
        let fv = first_variation_residuals(&beta, &su4, &p).unwrap();
        assert!(fv.residual1.is_zero());
        assert!(fv.solvable);
        assert!(first_variation_residuals(&w2, &su4, &p).is_err());
        let product = dz_monomial::<Scalar>(&[1, 2], &[1, 2]);
        let p = gamma_from_c(&su4, &c_basis::<Scalar>()[0].scale(&Scalar::ratio(1, 2))).unwrap();
        let fv = first_variation_residuals(&product, &su4, &p).unwrap();
        assert!(fv.residual1.is_zero());
    }

    #[test]
    fn float_rotations_stay_spin7() {
        let su4 = SU4Structure::<Complex64>::standard();
        let basis: Vec<Form<Complex64>> = (1..=6).map(gamma).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let id = Matrix::<Complex64>::identity(DIM);
        for _ in 0..100 {
            let scale: f64 = rng.random_range(0.01..5.0);
            let g = basis.iter().fold(Form::zero(), |acc, b| {
                acc.add(&b.scale(&Complex64::new(scale * rng.random_range(-1.0..1.0), 0.0)))
            });
            let p = RotationParameter::from_gamma(&su4, &g).unwrap();
            let r = rotate(&su4, &p).unwrap();
            let j = r.structure.j().matrix();
            let err = j.mul(j).add(&id).max_abs();
            assert!(err <= 1e-9, "J'^2 + Id = {err}");
            let diff = r.structure.cayley().sub(&su4.cayley());
            assert!(diff.terms().all(|(_, c)| c.norm() <= 1e-9));
        }
    }

    #[test]
    fn tiny_rotation_is_close_to_identity() {
        let su4 = SU4Structure::<Complex64>::standard();
        let g = gamma::<Complex64>(3).scale(&Complex64::new(1e-7, 0.0));
        let r = rotate(&su4, &RotationParameter::from_gamma(&su4, &g).unwrap()).unwrap();
        let d = r.structure.omega().sub(su4.omega());
        assert!(d.terms().all(|(_, c)| c.norm() < 1e-6));
    }
}
