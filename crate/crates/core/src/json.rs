//! Form, scalar and matrix JSON.
//!
//! A form is `{"field": {"d", "rho_sq"}, "degree", "terms": [...]}` where each
//! term carries `idx` (real coordinates) or `zidx`/`zbaridx` (complex ones)
//! and the nonzero rational components of its coefficient as "p/q" strings.

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exterior::{dz_monomial, indices, mask_of, Form};
use crate::linalg::Matrix;
use crate::scalar::{Coeff, FieldSpec, Scalar, Q};
use crate::Complex64;

/// Component keys in the order of [`Scalar::components`].
pub const COMPONENT_KEYS: [&str; 8] = [
    "re",
    "im",
    "re_sqrtd",
    "im_sqrtd",
    "re_rho",
    "im_rho",
    "re_sqrtd_rho",
    "im_sqrtd_rho",
];

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

/// "p/q", always with an explicit denominator.
pub fn rational_to_string(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Parses "p/q" or "p".
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Float with 17 significant digits.
pub fn float_to_string(x: f64) -> String {
    format!("{x:.16e}")
}

fn rational_field(v: &Value, field: &str) -> Result<Q> {
    v.as_str()
        .and_then(parse_rational)
        .ok_or_else(|| schema(field, "expected a rational string \"p/q\""))
}

pub fn field_to_json(spec: &FieldSpec) -> Value {
    json!({
        "d": spec.d(),
        "rho_sq": spec.rho_sq().map(rational_to_string),
    })
}

pub fn field_from_json(v: &Value) -> Result<FieldSpec> {
    let obj = v.as_object().ok_or_else(|| schema("field", "expected an object"))?;
    let d = obj
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("field.d", "expected a non-negative integer"))?;
    let mut spec = FieldSpec::with_d(d).map_err(|e| schema("field.d", e.to_string()))?;
    match obj.get("rho_sq") {
        None | Some(Value::Null) => {}
        Some(r) => {
            let r = rational_field(r, "field.rho_sq")?;
            let root = Scalar::sqrt_rational(&r).map_err(|e| schema("field.rho_sq", e.to_string()))?;
            spec = spec.join(root.spec()).map_err(|e| schema("field.rho_sq", e.to_string()))?;
        }
    }
    Ok(spec)
}

/// The nonzero components of an exact scalar; zero is `{"re": "0/1"}`.
pub fn scalar_to_json(x: &Scalar) -> Map<String, Value> {
    let mut m = Map::new();
    for (k, c) in x.components().iter().enumerate() {
        if !c.is_zero() {
            m.insert(COMPONENT_KEYS[k].into(), rational_to_string(c).into());
        }
    }
    if m.is_empty() {
        m.insert("re".into(), "0/1".into());
    }
    m
}

pub fn scalar_from_json(obj: &Map<String, Value>, spec: &FieldSpec, field: &str) -> Result<Scalar> {
    let mut c: [Q; 8] = std::array::from_fn(|_| Q::zero());
    let mut any = false;
    for (k, key) in COMPONENT_KEYS.iter().enumerate() {
        if let Some(v) = obj.get(*key) {
            c[k] = rational_field(v, &format!("{field}.{key}"))?;
            any = true;
        }
    }
    if !any {
        return Err(schema(field, "no coefficient component"));
    }
    Scalar::from_components(spec.clone(), c).map_err(|e| schema(field, e.to_string()))
}

/// Float scalar as {"re", "im"} strings with 17 significant digits.
pub fn complex_to_json(z: Complex64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("re".into(), float_to_string(z.re).into());
    m.insert("im".into(), float_to_string(z.im).into());
    m
}

/// Smallest tower holding every coefficient.
fn common_field<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<FieldSpec> {
    xs.into_iter()
        .try_fold(FieldSpec::base(), |acc, x| acc.join(x.spec()))
}

fn sorted_terms<S: Coeff>(form: &Form<S>) -> Vec<(Vec<usize>, &S)> {
    let mut terms: Vec<_> = form.terms().map(|(m, c)| (indices(m), c)).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    terms
}

/// Exact Form JSON. `degree` is required so the zero form round-trips.
pub fn form_to_json(form: &Form<Scalar>, degree: usize) -> Result<Value> {
    if form.terms().any(|(m, _)| m.count_ones() as usize != degree) {
        return Err(Error::Degree(format!("form has terms outside degree {degree}")));
    }
    let spec = common_field(form.terms().map(|(_, c)| c))?;
    let terms: Vec<Value> = sorted_terms(form)
        .into_iter()
        .map(|(idx, c)| {
            let mut t = Map::new();
            t.insert("idx".into(), json!(idx));
            t.extend(scalar_to_json(&c.lift(&spec)));
            Value::Object(t)
        })
        .collect();
    Ok(json!({
        "field": field_to_json(&spec),
        "degree": degree,
        "terms": terms,
    }))
}

/// Float Form JSON; `field` is always Q(i).
pub fn float_form_to_json(form: &Form<Complex64>, degree: usize) -> Value {
    let terms: Vec<Value> = sorted_terms(form)
        .into_iter()
        .map(|(idx, c)| {
            let mut t = Map::new();
            t.insert("idx".into(), json!(idx));
            t.extend(complex_to_json(*c));
            Value::Object(t)
        })
        .collect();
    json!({
        "field": field_to_json(&FieldSpec::base()),
        "degree": degree,
        "terms": terms,
    })
}

fn index_list(v: Option<&Value>, field: &str) -> Result<Option<Vec<usize>>> {
    let Some(v) = v else { return Ok(None) };
    let arr = v.as_array().ok_or_else(|| schema(field, "expected an array of indices"))?;
    arr.iter()
        .map(|x| {
            x.as_u64()
                .map(|i| i as usize)
                .ok_or_else(|| schema(field, "indices must be integers"))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Parses Form JSON, in real (`idx`) or complex (`zidx`/`zbaridx`) form.
pub fn form_from_json(v: &Value) -> Result<(Form<Scalar>, usize)> {
    let obj = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    let spec = field_from_json(obj.get("field").ok_or_else(|| schema("field", "missing"))?)?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .map(|d| d as usize)
        .filter(|&d| d <= 8)
        .ok_or_else(|| schema("degree", "expected an integer in 0..=8"))?;
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("terms", "expected an array"))?;
    let mut form = Form::zero();
    for (n, t) in terms.iter().enumerate() {
        let at = |k: &str| format!("terms[{n}].{k}");
        let t = t.as_object().ok_or_else(|| schema(format!("terms[{n}]"), "expected an object"))?;
        let c = scalar_from_json(t, &spec, &format!("terms[{n}]"))?;
        let idx = index_list(t.get("idx"), &at("idx"))?;
        let zidx = index_list(t.get("zidx"), &at("zidx"))?;
        let zbar = index_list(t.get("zbaridx"), &at("zbaridx"))?;
        let term = match (idx, zidx, zbar) {
            (Some(idx), None, None) => {
                if idx.len() != degree {
                    return Err(schema(at("idx"), format!("expected {degree} indices")));
                }
                let mask = mask_of(&idx).map_err(|e| schema(at("idx"), e.to_string()))?;
                Form::monomial(mask, c)
            }
            (None, z, zb) if z.is_some() || zb.is_some() => {
                let (z, zb) = (z.unwrap_or_default(), zb.unwrap_or_default());
                if z.len() + zb.len() != degree {
                    return Err(schema(at("zidx"), format!("expected {degree} indices in total")));
                }
                for (list, key) in [(&z, "zidx"), (&zb, "zbaridx")] {
                    if list.iter().any(|&j| j == 0 || j > 4) || list.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(schema(at(key), "indices must be strictly increasing in 1..=4"));
                    }
                }
                dz_monomial::<Scalar>(&z, &zb).scale(&c)
            }
            _ => return Err(schema(format!("terms[{n}]"), "need either idx or zidx/zbaridx")),
        };
        form = form.add(&term);
    }
    Ok((form, degree))
}

/// Exact scalars as component objects, floats as {"re", "im"} strings.
pub trait ToJson: Coeff {
    fn scalar_json(&self) -> Value;
    fn form_json(form: &Form<Self>, degree: usize) -> Result<Value>;

    /// A real value as a bare string ("p/q" or 17 significant digits);
    /// anything else as [`ToJson::scalar_json`].
    fn real_json(&self) -> Value {
        self.scalar_json()
    }
}

impl ToJson for Scalar {
    fn scalar_json(&self) -> Value {
        Value::Object(scalar_to_json(self))
    }

    fn form_json(form: &Form<Self>, degree: usize) -> Result<Value> {
        form_to_json(form, degree)
    }

    fn real_json(&self) -> Value {
        match self.as_rational() {
            Some(v) => Value::String(rational_to_string(&v)),
            None => self.scalar_json(),
        }
    }
}

impl ToJson for Complex64 {
    fn scalar_json(&self) -> Value {
        Value::Object(complex_to_json(*self))
    }

    fn form_json(form: &Form<Self>, degree: usize) -> Result<Value> {
        if form.terms().any(|(m, _)| m.count_ones() as usize != degree) {
            return Err(Error::Degree(format!("form has terms outside degree {degree}")));
        }
        Ok(float_form_to_json(form, degree))
    }

    fn real_json(&self) -> Value {
        if self.im == 0.0 {
            Value::String(float_to_string(self.re))
        } else {
            self.scalar_json()
        }
    }
}

/// Rows of scalar objects.
pub fn matrix_to_json<S: ToJson>(m: &Matrix<S>) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(ToJson::scalar_json).collect()))
            .collect(),
    )
}

/// Parses a complex rational such as "1/3+1/5i", "2/5i", "-i" or "3".
pub fn parse_gaussian(s: &str) -> Option<Scalar> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    // Split before every sign that is not the leading one.
    let mut parts = Vec::new();
    let mut start = 0;
    for (k, ch) in s.char_indices() {
        if k > 0 && (ch == '+' || ch == '-') {
            parts.push(&s[start..k]);
            start = k;
        }
    }
    parts.push(&s[start..]);
    if parts.len() > 2 {
        return None;
    }
    let (mut re, mut im) = (Q::zero(), Q::zero());
    let mut seen = (false, false);
    for p in parts {
        let (body, imag) = match p.strip_suffix('i') {
            Some(b) => (b.strip_suffix('*').unwrap_or(b), true),
            None => (p, false),
        };
        let v = match body {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            b => parse_rational(b.strip_prefix('+').unwrap_or(b))?,
        };
        let slot = if imag { &mut seen.1 } else { &mut seen.0 };
        if *slot {
            return None;
        }
        *slot = true;
        if imag {
            im = v;
        } else {
            re = v;
        }
    }
    Some(Scalar::gaussian(re, im))
}
