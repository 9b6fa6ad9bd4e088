//! Parsing of (2,0)-forms written as "dz12+dz34", "1/2*dz13 - i*dz24" or
//! "(1/3+1/5i)*dz14".

use spin7_core::exterior::dz_monomial;
use spin7_core::json::parse_gaussian;
use spin7_core::{Error, Form, Result, Scalar};

fn schema(message: impl Into<String>) -> Error {
    Error::Schema {
        field: "c".into(),
        message: message.into(),
    }
}

/// Splits at top-level '+' and '-', keeping each sign with its term.
fn split_terms(s: &str) -> Result<Vec<String>> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut depth = 0i32;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && !current.is_empty() && !current.ends_with('*') => {
                terms.push(std::mem::take(&mut current));
            }
            _ => {}
        }
        if depth < 0 {
            return Err(schema("unbalanced parentheses"));
        }
        current.push(ch);
    }
    if depth != 0 {
        return Err(schema("unbalanced parentheses"));
    }
    if !current.is_empty() {
        terms.push(current);
    }
    Ok(terms)
}

fn parse_term(term: &str) -> Result<Form<Scalar>> {
    let at = term
        .find("dz")
        .ok_or_else(|| schema(format!("term {term:?} has no dz")))?;
    let (coef, monomial) = term.split_at(at);
    let digits = &monomial[2..];
    if digits.len() != 2 || !digits.chars().all(|c| ('1'..='4').contains(&c)) {
        return Err(schema(format!("expected dzjk with 1 <= j < k <= 4, got {monomial:?}")));
    }
    let j = digits.as_bytes()[0] - b'0';
    let k = digits.as_bytes()[1] - b'0';
    if j >= k {
        return Err(schema(format!("indices of {monomial:?} must increase")));
    }
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let (sign, body) = match coef.as_bytes().first() {
        Some(b'-') => (-1, &coef[1..]),
        Some(b'+') => (1, &coef[1..]),
        _ => (1, coef),
    };
    let body = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .unwrap_or(body);
    let value = if body.is_empty() {
        Scalar::int(1)
    } else {
        parse_gaussian(body).ok_or_else(|| schema(format!("bad coefficient {body:?}")))?
    };
    let value = value * &Scalar::int(sign);
    Ok(dz_monomial::<Scalar>(&[j as usize, k as usize], &[]).scale(&value))
}

pub fn parse_two_zero(s: &str) -> Result<Form<Scalar>> {
    let terms = split_terms(s)?;
    if terms.is_empty() {
        return Err(schema("empty form"));
    }
    terms
        .iter()
        .try_fold(Form::zero(), |acc, t| Ok(acc.add(&parse_term(t)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use spin7_core::spin7::c_basis;

    #[test]
    fn parses_basis_forms() {
        let c = c_basis::<Scalar>();
        assert_eq!(parse_two_zero("dz12+dz34").unwrap(), c[0]);
        assert_eq!(parse_two_zero("i*dz12 - i*dz34").unwrap(), c[1]);
        assert_eq!(parse_two_zero("dz13 - dz24").unwrap(), c[2]);
        let half = parse_two_zero("(1/2)*dz12 + 1/2dz34").unwrap();
        assert_eq!(half, c[0].scale(&Scalar::ratio(1, 2)));
        let mixed = parse_two_zero("(1/3+1/5i)*dz14").unwrap();
        let expected = dz_monomial::<Scalar>(&[1, 4], &[])
            .scale(&Scalar::gaussian(spin7_core::scalar::q(1, 3), spin7_core::scalar::q(1, 5)));
        assert_eq!(mixed, expected);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "dz21", "dz15", "x*dz12", "dz12+(dz34", "dz1"] {
            assert!(
                matches!(parse_two_zero(bad), Err(Error::Schema { .. })),
                "{bad:?}"
            );
        }
    }
}
