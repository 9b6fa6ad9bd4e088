//! Real polynomials with exact coefficients: Sturm counting, enclosure of
//! the largest real root, and sign counts for real-rooted polynomials.
//!
//! Polynomials are coefficient vectors, lowest degree first.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::scalar::{qi, Coeff, Scalar, Q};

pub type Poly<S = Scalar> = Vec<S>;

pub fn trim<S: Coeff>(mut p: Poly<S>) -> Poly<S> {
    while p.last().is_some_and(Coeff::is_zero) {
        p.pop();
    }
    p
}

pub fn degree<S: Coeff>(p: &[S]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval<S: Coeff>(p: &[S], x: &S) -> S {
    p.iter()
        .rev()
        .fold(S::zero(), |acc, c| acc * x + c)
}

pub fn derivative<S: Coeff>(p: &[S]) -> Poly<S> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * &S::from_i64(k as i64))
        .collect()
}

/// Quotient and remainder of `a` divided by `b`.
pub fn div_rem<S: Coeff>(a: &[S], b: &[S]) -> (Poly<S>, Poly<S>) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut r = trim(a.to_vec());
    let mut quot = vec![S::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = r[dr].clone() * &lead_inv;
        let shift = dr - db;
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                r[k + shift] = r[k + shift].clone() - &(f.clone() * bk);
            }
        }
        r[dr] = S::zero();
        quot[shift] = f;
        r = trim(r);
    }
    (trim(quot), r)
}

/// Remainder of `a` divided by `b`.
pub fn rem<S: Coeff>(a: &[S], b: &[S]) -> Poly<S> {
    div_rem(a, b).1
}

/// Monic greatest common divisor.
pub fn gcd<S: Coeff>(a: &[S], b: &[S]) -> Poly<S> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while degree(&y).is_some() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    match degree(&x) {
        Some(d) => {
            let inv = x[d].inv().expect("nonzero leading coefficient");
            x.into_iter().map(|c| c * &inv).collect()
        }
        None => x,
    }
}

/// The product of the distinct irreducible factors, p / gcd(p, p').
pub fn square_free<S: Coeff>(p: &[S]) -> Poly<S> {
    let g = gcd(p, &derivative(p));
    if degree(&g).unwrap_or(0) == 0 {
        return trim(p.to_vec());
    }
    div_rem(p, &g).0
}

/// Sturm sequence of the square-free part of `p`, so that counts are
/// valid at every point, roots of `p` included.
pub fn sturm_sequence<S: Coeff>(p: &[S]) -> Vec<Poly<S>> {
    let p = square_free(p);
    let mut seq = vec![p.clone(), trim(derivative(&p))];
    loop {
        let n = seq.len();
        if degree(&seq[n - 1]).is_none() {
            seq.pop();
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if degree(&r).is_none() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut changes = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign<S: Coeff>(x: &S) -> Ordering {
    x.real_sign().expect("polynomial with non-real coefficients")
}

fn changes_at<S: Coeff>(seq: &[Poly<S>], x: &S) -> usize {
    sign_changes(seq.iter().map(|p| sign(&eval(p, x))))
}

fn changes_at_infinity<S: Coeff>(seq: &[Poly<S>]) -> usize {
    sign_changes(
        seq.iter()
            .map(|p| sign(&p[degree(p).expect("nonzero polynomial")])),
    )
}

/// Number of distinct real roots strictly greater than `x`.
pub fn count_roots_above<S: Coeff>(p: &[S], x: &S) -> usize {
    let seq = sturm_sequence(p);
    changes_at(&seq, x) - changes_at_infinity(&seq)
}

/// A rational upper bound for the absolute value of every root.
pub fn root_bound<S: Coeff>(p: &[S]) -> Q {
    let d = degree(p).expect("nonzero polynomial");
    let lead = p[d].magnitude();
    let max = p[..d]
        .iter()
        .map(|c| c.magnitude() / lead)
        .fold(0.0, f64::max);
    let bound = (max * (1.0 + 1e-6)).ceil() as i64 + 2;
    qi(bound)
}

/// The largest real root: an isolating interval and, when the root is
/// rational, its exact value.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub lo: Q,
    pub hi: Q,
    pub exact: Option<Q>,
}

impl RootEnclosure {
    pub fn midpoint_f64(&self) -> f64 {
        if let Some(v) = &self.exact {
            return v.to_f64().unwrap_or(f64::NAN);
        }
        ((&self.lo + &self.hi) / qi(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }
}

fn denominator_lcm<S: Coeff>(p: &[S]) -> Option<BigInt> {
    let d = degree(p)?;
    let lead = p[d].as_rational()?;
    let mut l = BigInt::one();
    for c in &p[..=d] {
        let v = c.as_rational()? / &lead;
        l = l.lcm(v.denom());
    }
    Some(l)
}

/// Enclose the largest real root of `p` to relative width `rel_width`.
/// Returns `None` when `p` has no real root.
pub fn largest_real_root<S: Coeff>(p: &[S], rel_width: f64) -> Option<RootEnclosure> {
    let seq = sturm_sequence(p);
    let at_inf = changes_at_infinity(&seq);
    let above = |x: &Q| changes_at(&seq, &S::from_q(x)) - at_inf;
    let bound = root_bound(p);
    let mut lo = -bound.clone();
    let mut hi = bound;
    if above(&lo) == 0 {
        return None;
    }
    let target = Q::from_float(rel_width).unwrap_or_else(|| Q::new(1.into(), BigInt::from(10).pow(12)));
    let grid = denominator_lcm(p);
    let grid_step = grid.as_ref().map(|g| Q::new(BigInt::one(), g.clone()));
    for _ in 0..4000 {
        let width = &hi - &lo;
        let scale = if hi.abs() > Q::one() { hi.abs() } else { Q::one() };
        let fine = width <= &target * &scale;
        let separated = grid_step.as_ref().is_none_or(|s| &width < s);
        if fine && separated {
            break;
        }
        let mid = (&lo + &hi) / qi(2);
        if above(&mid) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let exact = grid.and_then(|g| {
        let gq = Q::from_integer(g.clone());
        let start = (&lo * &gq).floor().to_integer();
        let end = (&hi * &gq).ceil().to_integer();
        let mut mu = start;
        while mu <= end {
            let cand = Q::new(mu.clone(), g.clone());
            if cand > lo && cand <= hi && eval(p, &S::from_q(&cand)).is_zero() {
                return Some(cand);
            }
            mu += 1;
        }
        None
    });
    Some(RootEnclosure { lo, hi, exact })
}

/// Counts of (positive, zero, negative) roots with multiplicity of a
/// polynomial known to have only real roots (Descartes is exact there).
pub fn real_rooted_sign_counts<S: Coeff>(p: &[S]) -> (usize, usize, usize) {
    let p = trim(p.to_vec());
    let n = degree(&p).expect("nonzero polynomial");
    let zero = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let pos = sign_changes(p.iter().map(sign));
    let neg = sign_changes(p.iter().enumerate().map(|(k, c)| {
        let s = sign(c);
        if k % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }));
    debug_assert_eq!(pos + zero + neg, n);
    (pos, zero, neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn p(c: &[i64]) -> Poly {
        c.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn sturm_counts_roots() {
        // (t-1)(t-2)(t+3) = t^3 - 7t + 6
        let f = p(&[6, -7, 0, 1]);
        assert_eq!(count_roots_above(&f, &Scalar::int(-4)), 3);
        assert_eq!(count_roots_above(&f, &Scalar::int(0)), 2);
        assert_eq!(count_roots_above(&f, &Scalar::ratio(3, 2)), 1);
        assert_eq!(count_roots_above(&f, &Scalar::int(2)), 0);
    }

    #[test]
    fn largest_rational_root_is_exact() {
        // (3t - 2)(t + 5)(t^2 - 2)
        // (3t-2)(t+5) = 3t^2 + 13t - 10; times (t^2 - 2)
        let f2 = p(&[20, -26, -16, 13, 3]);
        let r = largest_real_root(&f2, 1e-12).unwrap();
        // roots: 2/3, -5, +-sqrt2 -> largest is sqrt2, irrational
        assert!(r.exact.is_none());
        assert!((r.midpoint_f64() - 2f64.sqrt()).abs() < 1e-11);
        let g = p(&[-10, 13, 3]);
        let r = largest_real_root(&g, 1e-12).unwrap();
        assert_eq!(r.exact, Some(q(2, 3)));
    }

    #[test]
    fn repeated_roots_are_handled() {
        // (t-1)^2 (t+1)
        let f = p(&[1, -1, -1, 1]);
        let r = largest_real_root(&f, 1e-12).unwrap();
        assert_eq!(r.exact, Some(qi(1)));
        assert_eq!(real_rooted_sign_counts(&f), (2, 0, 1));
    }

    #[test]
    fn sturm_counts_at_a_multiple_root() {
        // t^4 (t^2 - 16)
        let f = p(&[0, 0, 0, 0, -16, 0, 1]);
        assert_eq!(count_roots_above(&f, &Scalar::int(0)), 1);
        assert_eq!(count_roots_above(&f, &Scalar::int(-5)), 3);
        assert_eq!(largest_real_root(&f, 1e-12).unwrap().exact, Some(qi(4)));
        assert_eq!(square_free(&f), p(&[0, -16, 0, 1]));
    }

    #[test]
    fn sign_counts_with_zero_roots() {
        // t^2 (t + 2)
        let f = p(&[0, 0, 2, 1]);
        assert_eq!(real_rooted_sign_counts(&f), (0, 2, 1));
    }
}
