//! Differential forms with constant coefficients on R^8.
//!
//! A basis monomial dx_{i1} ^ ... ^ dx_{ik} with i1 < ... < ik is stored as
//! the bitmask with bit (i - 1) set for each index. The metric is the
//! standard one and the volume form is dx_1 ^ ... ^ dx_8.

mod complex;
mod lefschetz;

pub use complex::{derivation, dz, dz_monomial, dzb, ComplexFrame, ComplexStructure};
pub use lefschetz::{lefschetz_decompose, Lefschetz};

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Coeff;

pub const DIM: usize = 8;
pub const VOL: u8 = 0xff;

/// Bitmask of a strictly increasing list of 1-based indices.
pub fn mask_of(idx: &[usize]) -> Result<u8> {
    let mut mask = 0u8;
    let mut last = 0;
    for &i in idx {
        if i == 0 || i > DIM {
            return Err(Error::InvalidInput(format!("index {i} outside 1..=8")));
        }
        if i <= last {
            return Err(Error::InvalidInput(format!(
                "indices {idx:?} are not strictly increasing"
            )));
        }
        last = i;
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

/// The 1-based indices of a mask, increasing.
pub fn indices(mask: u8) -> Vec<usize> {
    (0..DIM).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Sign of dx_a ^ dx_b relative to dx_{a|b}, or `None` if they overlap.
pub fn wedge_sign(a: u8, b: u8) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for j in 0..DIM {
        if b >> j & 1 == 1 {
            swaps += (a as u32 >> (j + 1)).count_ones();
        }
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

struct Tables {
    basis: Vec<Vec<u8>>,
    position: [usize; 256],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut basis = vec![Vec::new(); DIM + 1];
        let mut masks: Vec<u8> = (0..=255u8).collect();
        // lexicographic order on the index tuples
        masks.sort_by_key(|&m| indices(m));
        for m in masks {
            basis[m.count_ones() as usize].push(m);
        }
        let mut position = [0usize; 256];
        for b in &basis {
            for (i, &m) in b.iter().enumerate() {
                position[m as usize] = i;
            }
        }
        Tables { basis, position }
    })
}

/// Basis monomials of degree `k`, in lexicographic order of their indices.
pub fn basis(k: usize) -> &'static [u8] {
    &tables().basis[k]
}

pub fn dim_of_degree(k: usize) -> usize {
    binomial(DIM, k)
}

/// Position of a monomial within [`basis`] of its degree.
pub fn position(mask: u8) -> usize {
    tables().position[mask as usize]
}

/// A form with coefficients in `S`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<S> {
    terms: BTreeMap<u8, S>,
}

impl<S: Coeff> Default for Form<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Coeff> Form<S> {
    pub fn zero() -> Self {
        Form {
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: S) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(mask: u8, c: S) -> Self {
        let mut f = Self::zero();
        f.add_term(mask, c);
        f
    }

    /// dx_{idx} with unit coefficient; panics on malformed indices.
    pub fn dx(idx: &[usize]) -> Self {
        Self::monomial(mask_of(idx).expect("valid index tuple"), S::one())
    }

    pub fn vol() -> Self {
        Self::monomial(VOL, S::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u8, S)>) -> Self {
        let mut f = Self::zero();
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn add_term(&mut self, mask: u8, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mask) {
            Some(old) => {
                let v = old + &c;
                if !v.is_zero() {
                    self.terms.insert(mask, v);
                }
            }
            None => {
                self.terms.insert(mask, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u8, &S)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, mask: u8) -> S {
        self.terms.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The degree, if the form is homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn expect_degree(&self, k: usize) -> Result<()> {
        if self.terms.keys().all(|m| m.count_ones() as usize == k) {
            Ok(())
        } else {
            Err(Error::Degree(format!("expected a {k}-form")))
        }
    }

    pub fn degree_part(&self, k: usize) -> Self {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() as usize == k)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    /// First incompatibility between the scalar towers of two forms.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if let (Some(a), Some(b)) = (self.terms.values().next(), other.terms.values().next()) {
            for x in self.terms.values() {
                x.check_compatible(b)?;
            }
            for y in other.terms.values() {
                a.check_compatible(y)?;
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(&m, c)| (m, c.clone() * s)))
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self::from_terms(self.terms.iter().map(|(&m, c)| (m, f(c))))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out: BTreeMap<u8, S> = BTreeMap::new();
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                let Some(sign) = wedge_sign(a, b) else {
                    continue;
                };
                let p = x.clone() * y;
                let p = if sign < 0 { -p } else { p };
                let slot = out.entry(a | b).or_insert_with(S::zero);
                *slot = slot.clone() + &p;
            }
        }
        Form {
            terms: out.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::scalar(S::one()), |acc, _| acc.wedge(self))
    }

    /// Hodge star for the standard metric and orientation.
    pub fn hodge(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&m, c)| {
            let comp = !m;
            let s = wedge_sign(m, comp).expect("complementary masks");
            (comp, if s < 0 { -c.clone() } else { c.clone() })
        }))
    }

    /// Hermitian inner product, linear in `self`, conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                acc = acc + &(c.clone() * &d.conj());
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self)
    }

    pub fn conj(&self) -> Self {
        self.map(Coeff::conj)
    }

    pub fn re(&self) -> Self {
        self.map(Coeff::re)
    }

    pub fn im(&self) -> Self {
        self.map(Coeff::im)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Coeff::is_real)
    }

    /// Coefficient of the volume form.
    pub fn vol_coeff(&self) -> S {
        self.coeff(VOL)
    }

    /// (self ^ other) / vol.
    pub fn pair(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for (&a, x) in &self.terms {
            let Some(y) = other.terms.get(&!a) else {
                continue;
            };
            let s = wedge_sign(a, !a).expect("complementary masks");
            let p = x.clone() * y;
            acc = if s < 0 { acc - &p } else { acc + &p };
        }
        acc
    }

    /// Pullback by the linear map `g`, so that g^* dx_a = sum_b g[a][b] dx_b.
    pub fn pullback(&self, g: &Matrix<S>) -> Self {
        let ones: Vec<Self> = (0..DIM)
            .map(|a| Self::from_terms((0..DIM).map(|b| (1u8 << b, g[(a, b)].clone()))))
            .collect();
        let mut out = Self::zero();
        for (&m, c) in &self.terms {
            let mut term = Self::scalar(c.clone());
            for a in indices(m) {
                term = term.wedge(&ones[a - 1]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Interior product with the vector `v`, as in (i_v a)(w..) = a(v, w..).
    pub fn interior(&self, v: &[S]) -> Self {
        assert_eq!(v.len(), DIM);
        let mut out = Self::zero();
        for (&m, c) in &self.terms {
            for (pos, a) in indices(m).into_iter().enumerate() {
                let va = &v[a - 1];
                if va.is_zero() {
                    continue;
                }
                let p = c.clone() * va;
                out.add_term(m & !(1 << (a - 1)), if pos % 2 == 1 { -p } else { p });
            }
        }
        out
    }

    /// Evaluate a k-form on k vectors.
    pub fn eval(&self, vectors: &[Vec<S>]) -> S {
        let mut f = self.degree_part(vectors.len());
        for v in vectors {
            f = f.interior(v);
        }
        f.coeff(0)
    }

    /// Coordinates in [`basis`]`(k)`.
    pub fn to_vector(&self, k: usize) -> Vec<S> {
        let mut v = vec![S::zero(); dim_of_degree(k)];
        for (&m, c) in &self.terms {
            if m.count_ones() as usize == k {
                v[position(m)] = c.clone();
            }
        }
        v
    }

    pub fn from_vector(k: usize, v: &[S]) -> Self {
        assert_eq!(v.len(), dim_of_degree(k));
        Self::from_terms(basis(k).iter().zip(v).map(|(&m, c)| (m, c.clone())))
    }

    /// Convert coefficients, e.g. exact to float.
    pub fn convert<T: Coeff>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form::from_terms(self.terms.iter().map(|(&m, c)| (m, f(c))))
    }

    /// Whether every coefficient agrees within the coefficient type's notion
    /// of zero.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl<S: Coeff> std::ops::Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: &Form<S>) -> Form<S> {
        Form::add(self, rhs)
    }
}

impl<S: Coeff> std::ops::Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &Form<S>) -> Form<S> {
        Form::sub(self, rhs)
    }
}

impl<S: Coeff> std::ops::Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        Form::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    type F = Form<Scalar>;

    #[test]
    fn basis_sizes_and_order() {
        let sizes: Vec<usize> = (0..=8).map(|k| basis(k).len()).collect();
        assert_eq!(sizes, vec![1, 8, 28, 56, 70, 56, 28, 8, 1]);
        assert_eq!(indices(basis(2)[0]), vec![1, 2]);
        assert_eq!(indices(basis(2)[1]), vec![1, 3]);
        assert_eq!(indices(basis(2)[27]), vec![7, 8]);
    }

    #[test]
    fn wedge_signs() {
        let a = F::dx(&[2]);
        let b = F::dx(&[1]);
        assert_eq!(a.wedge(&b), F::dx(&[1, 2]).neg());
        assert!(a.wedge(&a).is_zero());
        let v = F::dx(&[1, 3, 5, 7]).wedge(&F::dx(&[2, 4, 6, 8]));
        // 1357 2468 -> 12345678 needs 6 transpositions
        assert_eq!(v, F::vol());
    }

    #[test]
    fn hodge_of_basis() {
        assert_eq!(F::scalar(Scalar::int(1)).hodge(), F::vol());
        assert_eq!(F::dx(&[1, 2]).hodge(), F::dx(&[3, 4, 5, 6, 7, 8]));
        let a = F::dx(&[1, 3]);
        assert_eq!(a.wedge(&a.hodge()), F::vol());
        // odd degree: ** = -1
        let b = F::dx(&[2]);
        assert_eq!(b.hodge().hodge(), b.neg());
    }

    #[test]
    fn interior_and_eval() {
        let e = |i: usize| -> Vec<Scalar> {
            (1..=8).map(|j| Scalar::int(i64::from(i == j))).collect()
        };
        let a = F::dx(&[1, 2, 3, 4]);
        assert_eq!(a.eval(&[e(1), e(2), e(3), e(4)]), Scalar::int(1));
        assert_eq!(a.eval(&[e(2), e(1), e(3), e(4)]), Scalar::int(-1));
    }

    #[test]
    fn mask_validation() {
        assert!(mask_of(&[1, 1]).is_err());
        assert!(mask_of(&[3, 2]).is_err());
        assert!(mask_of(&[9]).is_err());
        assert_eq!(mask_of(&[1, 8]).unwrap(), 0b1000_0001);
    }
}
