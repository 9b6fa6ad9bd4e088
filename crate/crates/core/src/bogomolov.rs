//! The Bogomolov-type bound on real (2,2)-classes.
//!
//! For beta = beta0 + beta1 ^ omega + k omega^2 the bound reads k >= k_m,
//! where k_m is a quarter of the largest value of beta0 ^ c ^ conj(c) / vol
//! over unit (2,0)-forms c. Equality holds exactly for classes that some
//! Spin(7) rotation turns into (2,2)-classes with zero residual.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exterior::{dz_monomial, lefschetz_decompose, ComplexStructure, Form};
use crate::linalg::Matrix;
use crate::poly::{count_roots_above, eval, largest_real_root};
use crate::rotation::{phi_form, Classification};
use crate::scalar::{qi, Coeff, Q};
use crate::spin7::SU4Structure;
use crate::Complex64;

/// k with beta ^ omega^2 = 24 k vol.
pub fn k_value<S: Coeff>(beta: &Form<S>, su4: &SU4Structure<S>) -> Result<S> {
    beta.expect_degree(4)?;
    let w = su4.omega();
    beta.wedge(w).wedge(w).vol_coeff().div(&S::from_i64(24))
}

/// Enclosure width for irrational extremal eigenvalues, relative to their size.
pub const ROOT_WIDTH: f64 = 1e-12;

/// Tolerance for float comparisons of k against k_m, relative to max(1, |k_m|).
pub const FLOAT_TOL: f64 = 1e-9;

/// A real number computed either exactly or as a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Exact(Q),
    /// The value lies in (lo, hi].
    Enclosure { lo: Q, hi: Q },
    Float(f64),
}

impl Bound {
    pub fn to_f64(&self) -> f64 {
        match self {
            Bound::Exact(v) => v.to_f64().unwrap_or(f64::NAN),
            Bound::Enclosure { lo, hi } => ((lo + hi) / qi(2)).to_f64().unwrap_or(f64::NAN),
            Bound::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            Bound::Exact(v) => Some(v),
            _ => None,
        }
    }

    fn quarter(self) -> Self {
        let four = qi(4);
        match self {
            Bound::Exact(v) => Bound::Exact(v / &four),
            Bound::Enclosure { lo, hi } => Bound::Enclosure {
                lo: lo / &four,
                hi: hi / &four,
            },
            Bound::Float(x) => Bound::Float(x / 4.0),
        }
    }
}

const PAIRS: [[usize; 2]; 6] = [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]];

/// The hermitian form c -> beta0 ^ c ^ conj(c) / vol on the (2,0)-forms.
///
/// With c = sum_j conj(y_j) b_j the form is y* H y and |c|^2 = y* G y.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm6<S> {
    /// H[j][k] = beta0 ^ b_j ^ conj(b_k) / vol.
    pub matrix: Matrix<S>,
    /// G[j][k] = <b_j, b_k>; the identity on the standard basis dz_ab / 2.
    pub gram: Matrix<S>,
    pub basis: Vec<Form<S>>,
    pub hermitian: bool,
}

impl<S: Coeff> HermitianForm6<S> {
    pub fn new(beta0: &Form<S>, su4: &SU4Structure<S>) -> Result<Self> {
        check_primitive(beta0, su4)?;
        let basis: Vec<Form<S>> = if su4.j() == &ComplexStructure::standard() {
            let half = S::from_ratio(1, 2);
            PAIRS
                .iter()
                .map(|p| dz_monomial(p, &[]).scale(&half))
                .collect()
        } else {
            su4.l_operator().basis().to_vec()
        };
        let conj: Vec<Form<S>> = basis.iter().map(Form::conj).collect();
        let left: Vec<Form<S>> = basis.iter().map(|b| beta0.wedge(b)).collect();
        let matrix = Matrix::from_fn(6, 6, |j, k| left[j].wedge(&conj[k]).vol_coeff());
        let gram = Matrix::from_fn(6, 6, |j, k| basis[j].inner(&basis[k]));
        let hermitian = matrix.sub(&matrix.adjoint()).is_zero();
        Ok(HermitianForm6 {
            matrix,
            gram,
            basis,
            hermitian,
        })
    }

    /// The (2,0)-form sum_j conj(y_j) b_j.
    pub fn form_of(&self, y: &[S]) -> Form<S> {
        y.iter()
            .zip(&self.basis)
            .fold(Form::zero(), |acc, (c, b)| acc.add(&b.scale(&c.conj())))
    }

    /// Characteristic polynomial of G^{-1} H, lowest degree first. Its
    /// roots are the values of the form on unit eigenvectors.
    pub fn char_poly(&self) -> Result<Vec<S>> {
        Ok(self.gram.inverse()?.mul(&self.matrix).char_poly())
    }

    /// The largest eigenvalue of the pencil (H, G).
    pub fn lambda_max(&self) -> Result<Bound> {
        if !S::EXACT {
            let (values, _) = self.float_eigen()?;
            return Ok(Bound::Float(values[0]));
        }
        let p = self.char_poly()?;
        let root = largest_real_root(&p, ROOT_WIDTH)
            .ok_or_else(|| Error::Singular("hermitian pencil without real eigenvalues".into()))?;
        Ok(match root.exact {
            Some(v) => Bound::Exact(v),
            None => Bound::Enclosure {
                lo: root.lo,
                hi: root.hi,
            },
        })
    }

    /// Eigenvalues, largest first, and matching y-coordinate eigenvectors.
    fn float_eigen(&self) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
        let h = DMatrix::from_fn(6, 6, |i, j| self.matrix[(i, j)].to_c64());
        let g = DMatrix::from_fn(6, 6, |i, j| self.gram[(i, j)].to_c64());
        let chol = g
            .cholesky()
            .ok_or_else(|| Error::Singular("Gram matrix is not positive".into()))?;
        let linv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| Error::Singular("Gram matrix is singular".into()))?;
        let m = &linv * h * linv.adjoint();
        let m = (&m + m.adjoint()).scale(0.5);
        let eig = m.symmetric_eigen();
        let back = linv.adjoint();
        let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..6)
            .map(|i| {
                let y = &back * eig.eigenvectors.column(i);
                (eig.eigenvalues[i], y.iter().copied().collect())
            })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        Ok(pairs.into_iter().unzip())
    }

    /// Eigenvectors (as (2,0)-forms) for the eigenvalue `lambda`.
    fn eigenforms(&self, lambda: &S) -> Result<Vec<Form<S>>> {
        let ys: Vec<Vec<S>> = if S::EXACT {
            self.matrix.sub(&self.gram.scale(lambda)).kernel()
        } else {
            let (values, vectors) = self.float_eigen()?;
            let target = lambda.to_c64().re;
            let tol = FLOAT_TOL * target.abs().max(1.0);
            values
                .iter()
                .zip(vectors)
                .filter(|(v, _)| (*v - target).abs() <= tol)
                .map(|(_, y)| y.into_iter().map(|z| S::from_c64(z).expect("float coefficients")).collect())
                .collect()
        };
        Ok(ys.iter().map(|y| self.form_of(y)).collect())
    }
}

fn check_primitive<S: Coeff>(beta0: &Form<S>, su4: &SU4Structure<S>) -> Result<()> {
    beta0.expect_degree(4)?;
    if !beta0.is_real() {
        return Err(Error::NotReal);
    }
    if !su4.j().is_bidegree(beta0, 2, 2) {
        return Err(Error::Bidegree { p: 2, q: 2 });
    }
    if !beta0.wedge(su4.omega()).is_zero() {
        return Err(Error::InvalidInput("beta0 ^ omega != 0: form is not primitive".into()));
    }
    Ok(())
}

pub fn hermitian_form<S: Coeff>(beta0: &Form<S>, su4: &SU4Structure<S>) -> Result<HermitianForm6<S>> {
    HermitianForm6::new(beta0, su4)
}

/// k_m(beta0): a quarter of the largest eigenvalue of the hermitian form.
pub fn k_m<S: Coeff>(beta0: &Form<S>, su4: &SU4Structure<S>) -> Result<Bound> {
    Ok(hermitian_form(beta0, su4)?.lambda_max()?.quarter())
}

/// The largest-eigenvalue eigenspace and the sampled elements that also
/// satisfy the rotatability condition |c ^ c| = |c|^2.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSet<S> {
    pub eigenspace: Vec<Form<S>>,
    pub sampled: Vec<Form<S>>,
    pub rotatable: Vec<Form<S>>,
}

/// |c ^ c|^2 = |c|^4, a condition invariant under rescaling c.
pub fn is_rotatable_direction<S: Coeff>(c: &Form<S>) -> bool {
    let lhs = c.wedge(c).norm_sq();
    let n = c.norm_sq();
    let rhs = n.clone() * &n;
    if S::EXACT {
        (lhs - &rhs).is_zero()
    } else {
        let (l, r) = (lhs.to_c64().re, rhs.to_c64().re);
        (l - r).abs() <= FLOAT_TOL * r.abs().max(1.0)
    }
}

pub fn extremal_set<S: Coeff>(beta0: &Form<S>, su4: &SU4Structure<S>, k: &S) -> Result<ExtremalSet<S>> {
    let h = hermitian_form(beta0, su4)?;
    let lambda = S::from_i64(4) * k;
    if !is_largest_eigenvalue(&h, &lambda)? {
        return Err(Error::InvalidInput(format!("k = {k} is not k_m")));
    }
    let eigenspace = h.eigenforms(&lambda)?;
    let mut sampled = eigenspace.clone();
    for (a, x) in eigenspace.iter().enumerate() {
        for y in &eigenspace[a + 1..] {
            sampled.push(x.add(y));
            sampled.push(x.add(&y.scale(&S::imag_unit())));
        }
    }
    let rotatable = sampled
        .iter()
        .filter(|c| is_rotatable_direction(c))
        .cloned()
        .collect();
    Ok(ExtremalSet {
        eigenspace,
        sampled,
        rotatable,
    })
}

fn is_largest_eigenvalue<S: Coeff>(h: &HermitianForm6<S>, lambda: &S) -> Result<bool> {
    if S::EXACT {
        let p = h.char_poly()?;
        return Ok(count_roots_above(&p, lambda) == 0 && eval(&p, lambda).is_zero());
    }
    let top = h.float_eigen()?.0[0];
    Ok((lambda.to_c64().re - top).abs() <= FLOAT_TOL * top.abs().max(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BogomolovVerdict<S> {
    pub k: S,
    pub k_m: Bound,
    /// k >= max(k_m, 0).
    pub pass: bool,
    /// k = k_m.
    pub equality: bool,
    pub extremal: Option<ExtremalSet<S>>,
}

/// Checks k >= max(k_m, 0) for a real (2,2)-class.
pub fn bogomolov_check<S: Coeff>(beta: &Form<S>, su4: &SU4Structure<S>) -> Result<BogomolovVerdict<S>> {
    let lef = lefschetz_decompose(beta, su4.omega(), su4.j())?;
    let k = lef.k;
    let h = hermitian_form(&lef.primitive, su4)?;
    let k_m = h.lambda_max()?.quarter();
    let four_k = S::from_i64(4) * &k;
    let (nonneg, above, equality) = if S::EXACT {
        let p = h.char_poly()?;
        let sign = k
            .real_sign()
            .ok_or_else(|| Error::InvalidInput("k is not real".into()))?;
        let above = count_roots_above(&p, &four_k) > 0;
        (sign.is_ge(), above, !above && eval(&p, &four_k).is_zero())
    } else {
        let km = k_m.to_f64();
        let kf = k.to_c64().re;
        let tol = FLOAT_TOL * km.abs().max(1.0);
        (kf >= -tol, kf < km - tol, (kf - km).abs() <= tol)
    };
    let extremal = if equality {
        Some(extremal_set(&lef.primitive, su4, &k)?)
    } else {
        None
    };
    Ok(BogomolovVerdict {
        k,
        k_m,
        pass: nonneg && !above,
        equality,
        extremal,
    })
}

/// Sampling tolerance: a sphere value v passes when v <= 24 k (1 + 1e-9),
/// with an absolute floor of 1e-12 for k = 0.
pub const SPHERE_REL_TOL: f64 = 1e-9;
pub const SPHERE_ABS_TOL: f64 = 1e-12;

/// Samples per independently seeded stream.
const CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub struct SphereSup<S> {
    /// The supremum of beta ^ w'^2 / (24 vol) over w' in the radius-2
    /// sphere of Lambda^2_7; equal to k under the hypothesis.
    pub value: S,
    /// Directions omega + gamma, gamma in the kernel of Phi_beta; the
    /// maximisers are their multiples of length 2.
    pub argmax: Vec<Form<S>>,
    pub samples: usize,
    /// Largest sampled value of beta ^ w'^2 / vol.
    pub sampled_max: f64,
    /// 24 k (1 + 1e-9) + 1e-12.
    pub bound: f64,
    pub violations: usize,
}

impl<S> SphereSup<S> {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// k as the maximum of beta ^ w'^2 / 24 over the Kahler forms w' of the
/// Spin(7) structure, with a seeded Monte-Carlo check of the bound. Chunk
/// `i` of samples uses stream `i` of ChaCha8 seeded with `seed`.
pub fn k_sup_over_sphere<S: Coeff>(
    beta: &Form<S>,
    su4: &SU4Structure<S>,
    samples: usize,
    seed: u64,
) -> Result<SphereSup<S>> {
    let phi = phi_form(beta, su4)?;
    let class = phi.classify();
    if !matches!(class, Classification::Zero | Classification::NegativeSemidefinite) {
        return Err(Error::InvalidInput(format!(
            "Phi_beta is {}; the supremum formula needs it negative-semidefinite",
            class.name()
        )));
    }
    let w = su4.omega();
    let gammas = su4.a_plus();
    let mut argmax = vec![w.clone()];
    for v in phi.kernel() {
        let g = v
            .iter()
            .zip(gammas)
            .fold(Form::zero(), |acc, (c, x)| acc.add(&x.scale(c)));
        argmax.push(w.add(&g));
    }

    let frame = orthonormal_frame(w, gammas);
    let beta_f = beta.convert(Coeff::to_c64);
    let quad = DMatrix::from_fn(7, 7, |i, j| beta_f.wedge(&frame[i]).wedge(&frame[j]).vol_coeff().re);
    let k = phi.k.clone();
    let kf = k.to_c64().re;
    let bound = 24.0 * kf * (1.0 + SPHERE_REL_TOL) + SPHERE_ABS_TOL;
    let mut sampled_max = f64::NEG_INFINITY;
    let mut violations = 0;
    let mut done = 0;
    for chunk in 0.. {
        if done >= samples {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        for _ in 0..CHUNK.min(samples - done) {
            let u: Vec<f64> = (0..7).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n2: f64 = u.iter().map(|x| x * x).sum();
            // w' = 2u/|u|, so beta ^ w'^2 = 4 u^T Q u / |u|^2.
            let mut v = 0.0;
            for i in 0..7 {
                for j in 0..7 {
                    v += u[i] * quad[(i, j)] * u[j];
                }
            }
            let v = 4.0 * v / n2;
            sampled_max = sampled_max.max(v);
            if v > bound {
                violations += 1;
            }
            done += 1;
        }
    }
    Ok(SphereSup {
        value: k,
        argmax,
        samples,
        sampled_max,
        bound,
        violations,
    })
}

/// Float orthonormal frame of span{omega, A+}.
fn orthonormal_frame<S: Coeff>(omega: &Form<S>, gammas: &[Form<S>]) -> Vec<Form<Complex64>> {
    let mut frame: Vec<Form<Complex64>> = Vec::new();
    for f in std::iter::once(omega).chain(gammas) {
        let mut v = f.convert(|c| Complex64::new(c.to_c64().re, 0.0));
        for e in &frame {
            let c = v.inner(e);
            v = v.sub(&e.scale(&c));
        }
        let n = v.norm_sq().re.sqrt();
        frame.push(v.scale(&Complex64::new(1.0 / n, 0.0)));
    }
    frame
}
