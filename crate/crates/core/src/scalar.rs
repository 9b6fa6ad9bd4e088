//! Coefficient fields.
//!
//! Exact mode works in the tower Q(i, sqrt d) tensor Q(rho) with rho^2 a
//! declared positive rational. Float mode uses `Complex64`. Both implement
//! [`Coeff`], which the rest of the crate is generic over.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Absolute threshold below which a float coefficient counts as zero.
pub const FLOAT_EPS: f64 = 1e-10;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(r: &Q) -> Option<Q> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Q::new(sn, sd))
    } else {
        None
    }
}

pub fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// The operations shared by exact and float coefficients.
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(q: &Q) -> Self;
    fn imag_unit() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    /// Real part, as an element of the same field.
    fn re(&self) -> Self;
    /// Imaginary part, as an element of the same field.
    fn im(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    /// The float value as a coefficient; `None` for exact coefficients.
    fn from_c64(z: Complex64) -> Option<Self>;
    /// An exact scalar in this coefficient type.
    fn from_scalar(x: &Scalar) -> Self;
    /// Sign of a real element; `None` when the element is not real.
    fn real_sign(&self) -> Option<Ordering>;
    /// The positive square root of a square-free integer `d`.
    fn sqrt_d(d: u64) -> Result<Self>;
    /// The positive square root of a positive rational.
    fn sqrt_q(r: &Q) -> Result<Self>;
    /// Fails when two coefficients live in incompatible towers.
    fn check_compatible(&self, _other: &Self) -> Result<()> {
        Ok(())
    }
    /// The rational value, when the element is rational.
    fn as_rational(&self) -> Option<Q>;
    /// The positive square root of a positive real element. Exact
    /// coefficients need the element to be rational.
    fn sqrt_real(&self) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&qi(n))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_q(&q(n, d))
    }
    fn complex(re: &Q, im: &Q) -> Self {
        Self::from_q(re) + Self::imag_unit() * Self::from_q(im)
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn div(&self, other: &Self) -> Result<Self> {
        let inv = other
            .inv()
            .ok_or_else(|| Error::Singular("division by zero".into()))?;
        Ok(self.clone() * &inv)
    }
    /// |x|^2 = x * conj(x).
    fn norm_sq(&self) -> Self {
        self.clone() * &self.conj()
    }
    fn is_real(&self) -> bool {
        self.im().is_zero()
    }
}

/// Which tower an exact scalar lives in.
///
/// `d = 0` means no square root of `d` is adjoined (d = 1 folds to 0).
/// `rho_sq` is present only when rho is not already in Q(i, sqrt d).
#[derive(Clone, Debug, Default)]
pub struct FieldSpec {
    d: u64,
    rho_sq: Option<Arc<Q>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        if self.d != other.d {
            return false;
        }
        match (&self.rho_sq, &other.rho_sq) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Q(i).
    pub fn base() -> Self {
        Self::default()
    }

    pub fn with_d(d: u64) -> Result<Self> {
        if d > 1 && !is_squarefree(d) {
            return Err(Error::InvalidInput(format!("d = {d} is not square-free")));
        }
        Ok(FieldSpec {
            d: if d == 1 { 0 } else { d },
            rho_sq: None,
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn rho_sq(&self) -> Option<&Q> {
        self.rho_sq.as_deref()
    }

    /// Smallest tower containing both, or a mismatch error.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self == other {
            return Ok(self.clone());
        }
        let mismatch = || Error::TowerMismatch {
            left: self.to_string(),
            right: other.to_string(),
        };
        let d = match (self.d, other.d) {
            (x, 0) | (0, x) => x,
            (x, y) if x == y => x,
            _ => return Err(mismatch()),
        };
        let rho_sq = match (&self.rho_sq, &other.rho_sq) {
            (None, r) | (r, None) => r.clone(),
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => return Err(mismatch()),
        };
        let rho_sq = match rho_sq {
            Some(r) if d > 0 && rational_sqrt(&(r.as_ref() / qi(d as i64))).is_some() => None,
            other => other,
        };
        Ok(FieldSpec { d, rho_sq })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(i")?;
        if self.d > 0 {
            write!(f, ", sqrt({})", self.d)?;
        }
        if let Some(r) = &self.rho_sq {
            write!(f, ", sqrt({r})")?;
        }
        write!(f, ")")
    }
}

const I_BIT: usize = 1;
const D_BIT: usize = 2;
const RHO_BIT: usize = 4;

/// An element of Q(i, sqrt d, rho) in the basis i^a sqrt(d)^b rho^c.
///
/// Component `k` holds the coefficient of the basis element whose bits
/// are (a, b, c) = (k & 1, k >> 1 & 1, k >> 2 & 1).
#[derive(Clone)]
pub struct Scalar {
    spec: FieldSpec,
    c: [Q; 8],
}

fn zeros8() -> [Q; 8] {
    std::array::from_fn(|_| Q::zero())
}

impl Scalar {
    pub fn rational(v: Q) -> Self {
        let mut c = zeros8();
        c[0] = v;
        Scalar {
            spec: FieldSpec::base(),
            c,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(qi(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(q(n, d))
    }

    pub fn i() -> Self {
        let mut c = zeros8();
        c[I_BIT] = Q::one();
        Scalar {
            spec: FieldSpec::base(),
            c,
        }
    }

    /// `re + i im` with rational parts.
    pub fn gaussian(re: Q, im: Q) -> Self {
        let mut c = zeros8();
        c[0] = re;
        c[I_BIT] = im;
        Scalar {
            spec: FieldSpec::base(),
            c,
        }
    }

    /// sqrt(d) for square-free d.
    pub fn sqrt_of_d(d: u64) -> Result<Self> {
        let spec = FieldSpec::with_d(d)?;
        if spec.d == 0 {
            return Ok(if d == 0 { Self::int(0) } else { Self::int(1) });
        }
        let mut c = zeros8();
        c[D_BIT] = Q::one();
        Ok(Scalar { spec, c })
    }

    /// The positive square root of `r`, folded into Q(i) when rational.
    pub fn sqrt_rational(r: &Q) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidInput(format!(
                "cannot adjoin sqrt({r}): not positive"
            )));
        }
        if let Some(s) = rational_sqrt(r) {
            return Ok(Self::rational(s));
        }
        let mut c = zeros8();
        c[RHO_BIT] = Q::one();
        Ok(Scalar {
            spec: FieldSpec {
                d: 0,
                rho_sq: Some(Arc::new(r.clone())),
            },
            c,
        })
    }

    /// The positive square root of `r` in the tower over `base`.
    pub fn sqrt_rational_over(r: &Q, base: &FieldSpec) -> Result<Self> {
        let root = Self::sqrt_rational(r)?;
        let spec = base.join(&root.spec)?;
        Ok(root.lift(&spec))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn components(&self) -> &[Q; 8] {
        &self.c
    }

    /// Build from raw components over a given spec.
    pub fn from_components(spec: FieldSpec, c: [Q; 8]) -> Result<Self> {
        for (k, v) in c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if (k & D_BIT != 0 && spec.d == 0) || (k & RHO_BIT != 0 && spec.rho_sq.is_none()) {
                return Err(Error::InvalidInput(format!(
                    "component {k} is not part of the tower {spec}"
                )));
            }
        }
        Ok(Scalar { spec, c })
    }

    /// Re-express in a larger tower `target` (which must contain ours).
    pub fn lift(&self, target: &FieldSpec) -> Self {
        if &self.spec == target {
            return self.clone();
        }
        let mut out = zeros8();
        let rho_fold = match (&self.spec.rho_sq, &target.rho_sq) {
            (Some(r), None) => {
                // rho = t sqrt(d) in the target
                let t = rational_sqrt(&(r.as_ref() / qi(target.d as i64)))
                    .expect("join guarantees rho folds into sqrt d");
                Some(t)
            }
            _ => None,
        };
        for k in 0..8 {
            if self.c[k].is_zero() {
                continue;
            }
            if k & RHO_BIT != 0 {
                if let Some(t) = &rho_fold {
                    let base = k & !RHO_BIT;
                    if base & D_BIT != 0 {
                        out[base & !D_BIT] += &self.c[k] * t * qi(target.d as i64);
                    } else {
                        out[base | D_BIT] += &self.c[k] * t;
                    }
                    continue;
                }
            }
            out[k] += &self.c[k];
        }
        Scalar {
            spec: target.clone(),
            c: out,
        }
    }

    fn unify(&self, other: &Self) -> (Scalar, Scalar) {
        if self.spec == other.spec {
            return (self.clone(), other.clone());
        }
        let spec = self
            .spec
            .join(&other.spec)
            .unwrap_or_else(|e| panic!("{e}"));
        (self.lift(&spec), other.lift(&spec))
    }

    fn factor(&self, shared: usize) -> Q {
        let mut f = Q::one();
        if shared & I_BIT != 0 {
            f = -f;
        }
        if shared & D_BIT != 0 {
            f *= qi(self.spec.d as i64);
        }
        if shared & RHO_BIT != 0 {
            f *= self.spec.rho_sq.as_deref().expect("rho component").clone();
        }
        f
    }

    fn mul_same(&self, other: &Self) -> Self {
        let mut out = zeros8();
        for a in 0..8 {
            if self.c[a].is_zero() {
                continue;
            }
            for b in 0..8 {
                if other.c[b].is_zero() {
                    continue;
                }
                let p = &self.c[a] * &other.c[b];
                let shared = a & b;
                if shared == 0 {
                    out[a ^ b] += p;
                } else {
                    out[a ^ b] += p * self.factor(shared);
                }
            }
        }
        Scalar {
            spec: self.spec.clone(),
            c: out,
        }
    }

    /// Flip the sign of every component carrying bit `bit`.
    fn flip(&self, bit: usize) -> Self {
        let mut out = self.clone();
        for k in 0..8 {
            if k & bit != 0 {
                out.c[k] = -out.c[k].clone();
            }
        }
        out
    }

    /// The automorphism sqrt d -> -sqrt d.
    pub fn galois_d(&self) -> Self {
        self.flip(D_BIT)
    }

    /// The automorphism rho -> -rho.
    pub fn galois_rho(&self) -> Self {
        self.flip(RHO_BIT)
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn rational_part(&self) -> &Q {
        &self.c[0]
    }

    /// Sign of a + b sqrt(d) with rational a, b.
    fn sign_quadratic(a: &Q, b: &Q, d: u64) -> Ordering {
        let sa = a.cmp(&Q::zero());
        let sb = b.cmp(&Q::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let lhs = a * a;
        let rhs = b * b * qi(d as i64);
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match self.spec.join(&other.spec) {
            Ok(spec) => self.lift(&spec).c == other.lift(&spec).c,
            Err(_) => false,
        }
    }
}

impl Add<&Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let (mut a, b) = self.unify(rhs);
        for k in 0..8 {
            if !b.c[k].is_zero() {
                a.c[k] += &b.c[k];
            }
        }
        a
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self + &rhs
    }
}

impl Sub<&Scalar> for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let (mut a, b) = self.unify(rhs);
        for k in 0..8 {
            if !b.c[k].is_zero() {
                a.c[k] -= &b.c[k];
            }
        }
        a
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self - &rhs
    }
}

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.spec == rhs.spec {
            return self.mul_same(rhs);
        }
        let (a, b) = self.unify(rhs);
        a.mul_same(&b)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for x in self.c.iter_mut() {
            if !x.is_zero() {
                *x = -x.clone();
            }
        }
        self
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

const BASIS_NAMES: [&str; 8] = ["", "i", "S", "i*S", "R", "i*R", "S*R", "i*S*R"];

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sqrt_d = format!("sqrt({})", self.spec.d);
        let rho = self
            .spec
            .rho_sq
            .as_ref()
            .map(|r| format!("sqrt({r})"))
            .unwrap_or_default();
        let mut first = true;
        for k in 0..8 {
            let v = &self.c[k];
            if v.is_zero() {
                continue;
            }
            let name = BASIS_NAMES[k].replace('S', &sqrt_d).replace('R', &rho);
            let neg = v.is_negative();
            let abs = v.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if name.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{abs}*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // Very large numerators and denominators: scale down first.
        let n = v.numer().to_f64().unwrap_or(f64::NAN);
        let d = v.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Coeff for Scalar {
    const EXACT: bool = true;

    fn from_scalar(x: &Scalar) -> Self {
        x.clone()
    }

    fn zero() -> Self {
        Scalar::int(0)
    }
    fn one() -> Self {
        Scalar::int(1)
    }
    fn from_q(q: &Q) -> Self {
        Scalar::rational(q.clone())
    }
    fn imag_unit() -> Self {
        Scalar::i()
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
    fn inv(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            return None;
        }
        let s_rho = self.galois_rho();
        let n1 = self.clone() * &s_rho;
        let s_d = n1.galois_d();
        let n2 = n1 * &s_d;
        let c2 = n2.conj();
        let n3 = n2 * &c2;
        debug_assert!(n3.is_rational());
        let scale = Scalar::rational(n3.c[0].recip());
        Some(s_rho * &s_d * &c2 * &scale)
    }
    fn conj(&self) -> Self {
        self.flip(I_BIT)
    }
    fn re(&self) -> Self {
        let mut out = self.clone();
        for k in 0..8 {
            if k & I_BIT != 0 {
                out.c[k] = Q::zero();
            }
        }
        out
    }
    fn im(&self) -> Self {
        let mut out = zeros8();
        for k in 0..8 {
            if k & I_BIT != 0 {
                out[k & !I_BIT] = self.c[k].clone();
            }
        }
        Scalar {
            spec: self.spec.clone(),
            c: out,
        }
    }
    fn from_c64(_z: Complex64) -> Option<Self> {
        None
    }
    fn to_c64(&self) -> Complex64 {
        let sd = (self.spec.d as f64).sqrt();
        let rho = self
            .spec
            .rho_sq
            .as_deref()
            .map(|r| q_to_f64(r).sqrt())
            .unwrap_or(0.0);
        let mut out = Complex64::new(0.0, 0.0);
        for k in 0..8 {
            if self.c[k].is_zero() {
                continue;
            }
            let mut v = q_to_f64(&self.c[k]);
            if k & D_BIT != 0 {
                v *= sd;
            }
            if k & RHO_BIT != 0 {
                v *= rho;
            }
            if k & I_BIT != 0 {
                out.im += v;
            } else {
                out.re += v;
            }
        }
        out
    }
    fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        let d = self.spec.d;
        let sa = Scalar::sign_quadratic(&self.c[0], &self.c[D_BIT], d);
        let sb = Scalar::sign_quadratic(&self.c[RHO_BIT], &self.c[RHO_BIT | D_BIT], d);
        if sb == Ordering::Equal {
            return Some(sa);
        }
        if sa == Ordering::Equal || sa == sb {
            return Some(sb);
        }
        // Compare A^2 with B^2 rho^2, both in Q(sqrt d).
        let r = self.spec.rho_sq.as_deref().cloned().unwrap_or_else(Q::zero);
        let (a0, a1) = (&self.c[0], &self.c[D_BIT]);
        let (b0, b1) = (&self.c[RHO_BIT], &self.c[RHO_BIT | D_BIT]);
        let dq = qi(d as i64);
        let x0 = a0 * a0 + a1 * a1 * &dq - (b0 * b0 + b1 * b1 * &dq) * &r;
        let x1 = (a0 * a1 - b0 * b1 * &r) * qi(2);
        if Scalar::sign_quadratic(&x0, &x1, d) == Ordering::Greater {
            Some(sa)
        } else {
            Some(sb)
        }
    }
    fn sqrt_d(d: u64) -> Result<Self> {
        Scalar::sqrt_of_d(d)
    }
    fn sqrt_q(r: &Q) -> Result<Self> {
        Scalar::sqrt_rational(r)
    }
    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.spec.join(&other.spec).map(|_| ())
    }
    fn as_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.c[0].clone())
    }
    fn sqrt_real(&self) -> Result<Self> {
        let r = self.as_rational().ok_or_else(|| {
            Error::FloatFallbackRequired(format!("sqrt({self}) of an irrational element"))
        })?;
        Scalar::sqrt_rational(&r)
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn from_scalar(x: &Scalar) -> Self {
        x.to_c64()
    }

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_q(q: &Q) -> Self {
        Complex64::new(q_to_f64(q), 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn is_zero(&self) -> bool {
        self.norm() < FLOAT_EPS
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn re(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn im(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }
    fn real_sign(&self) -> Option<Ordering> {
        if self.im.abs() > FLOAT_EPS {
            return None;
        }
        Some(if self.re > FLOAT_EPS {
            Ordering::Greater
        } else if self.re < -FLOAT_EPS {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }
    fn sqrt_d(d: u64) -> Result<Self> {
        Ok(Complex64::new((d as f64).sqrt(), 0.0))
    }
    fn sqrt_q(r: &Q) -> Result<Self> {
        let v = q_to_f64(r);
        if v <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "cannot take sqrt({r}): not positive"
            )));
        }
        Ok(Complex64::new(v.sqrt(), 0.0))
    }
    fn as_rational(&self) -> Option<Q> {
        None
    }
    fn sqrt_real(&self) -> Result<Self> {
        if self.re <= 0.0 || self.im.abs() > FLOAT_EPS {
            return Err(Error::InvalidInput(format!(
                "cannot take sqrt({self}): not a positive real"
            )));
        }
        Ok(Complex64::new(self.re.sqrt(), 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn gaussian_arithmetic() {
        let a = Scalar::gaussian(q(1, 3), q(1, 5));
        let b = a.clone() * &a.conj();
        assert_eq!(b, Scalar::rational(q(1, 9) + q(1, 25)));
        assert_eq!(Scalar::i() * Scalar::i(), s(-1));
    }

    #[test]
    fn sqrt_d_squares_to_d() {
        let r = Scalar::sqrt_of_d(7).unwrap();
        assert_eq!(r.clone() * &r, s(7));
        assert_eq!(Scalar::sqrt_of_d(1).unwrap(), s(1));
        assert!(Scalar::sqrt_of_d(12).is_err());
    }

    #[test]
    fn rho_folds_when_rational() {
        assert_eq!(Scalar::sqrt_rational(&q(9, 4)).unwrap(), Scalar::ratio(3, 2));
        let r = Scalar::sqrt_rational(&qi(8)).unwrap();
        assert!(r.spec().rho_sq().is_some());
        assert_eq!(r.clone() * &r, s(8));
    }

    #[test]
    fn rho_folds_into_sqrt_d_on_join() {
        // rho^2 = 8 = 2 * 2^2, so rho = 2 sqrt 2 over Q(i, sqrt 2).
        let rho = Scalar::sqrt_rational(&qi(8)).unwrap();
        let sd = Scalar::sqrt_of_d(2).unwrap();
        let diff = rho - &(sd * &s(2));
        assert!(Coeff::is_zero(&diff));
        assert!(diff.spec().rho_sq().is_none());
    }

    #[test]
    fn inverse_in_full_tower() {
        let sd = Scalar::sqrt_of_d(3).unwrap();
        let rho = Scalar::sqrt_rational(&q(11, 2)).unwrap();
        let x = s(2) + &(Scalar::i() * &sd) + &(rho.clone() * &Scalar::ratio(1, 7))
            + &(Scalar::i() * &sd * &rho);
        let y = x.inv().unwrap();
        assert_eq!(x * &y, s(1));
    }

    #[test]
    fn mismatched_towers_are_rejected() {
        let a = Scalar::sqrt_of_d(2).unwrap();
        let b = Scalar::sqrt_of_d(3).unwrap();
        assert!(matches!(
            a.check_compatible(&b),
            Err(Error::TowerMismatch { .. })
        ));
    }

    #[test]
    fn real_sign_is_exact() {
        let sd = Scalar::sqrt_of_d(2).unwrap();
        // 1.414... - 1.4142 > 0
        let x = sd.clone() - &Scalar::ratio(7071, 5000);
        assert_eq!(x.real_sign(), Some(Ordering::Greater));
        let rho = Scalar::sqrt_rational(&qi(3)).unwrap();
        // sqrt 3 - sqrt 2 > 0, sqrt2*sqrt3 - 5/2 < 0 (2.449 < 2.5)
        assert_eq!((rho.clone() - &sd).real_sign(), Some(Ordering::Greater));
        assert_eq!(
            (rho * &sd - &Scalar::ratio(5, 2)).real_sign(),
            Some(Ordering::Less)
        );
        assert_eq!(Scalar::i().real_sign(), None);
    }

    #[test]
    fn display_is_readable() {
        let x = Scalar::gaussian(q(1, 3), q(-2, 5));
        assert_eq!(x.to_string(), "1/3 - 2/5*i");
        let sd = Scalar::sqrt_of_d(2).unwrap() * &Scalar::i();
        assert_eq!(sd.to_string(), "i*sqrt(2)");
        assert_eq!(Scalar::int(0).to_string(), "0");
    }
}
