//! The identity corpus run by `spin7 verify`.
//!
//! Each entry recomputes one value or identity from the library and compares
//! it with its expected value. Value entries also run in float mode; the
//! relative gap between the two is reported as `float_residual`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use spin7_core::bogomolov::{bogomolov_check, k_m, k_sup_over_sphere, k_value, Bound};
use spin7_core::classes::{diagonal_class, form_11, product_class, shifted_diagonal, weil_class, weil_plus_omega_sq};
use spin7_core::json::{form_from_json, form_to_json, float_to_string};
use spin7_core::linalg::{in_span, Matrix};
use spin7_core::rotation::{
    gamma_from_c, phi_form, rotatable_class, rotate, rotate_back_gamma, rotation_residual, Classification,
    RotationParameter,
};
use spin7_core::scalar::{q, Coeff, Scalar};
use spin7_core::spin7::{
    c_basis, c_prime_basis, cayley_form, gamma, representation_suite, span_checks, verify_spin7, LineCheck,
    SU4Structure, Spin7Structure,
};
use spin7_core::torus::{endomorphism_space, weil_rotation_pipeline, EndomorphismSystem};
use spin7_core::{Complex64, Error, Form, Result, Q};

/// Relative tolerance for float values against their exact counterparts.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Seed for every sampled entry.
pub const CORPUS_SEED: u64 = 20_240_601;

/// The three Weil samples (d, y, a).
pub fn weil_samples() -> Vec<(u64, Q, Scalar)> {
    vec![
        (1, q(1, 2), Scalar::gaussian(q(1, 3), q(1, 5))),
        (2, q(1, 1), Scalar::gaussian(q(1, 4), q(1, 7))),
        (3, q(1, 3), Scalar::gaussian(q(0, 1), q(2, 5))),
    ]
}

type ExactFn = Box<dyn Fn() -> Result<Vec<Scalar>> + Send + Sync>;
type FloatFn = Box<dyn Fn() -> Result<Vec<Complex64>> + Send + Sync>;
type CheckFn = Box<dyn Fn() -> Result<Outcome> + Send + Sync>;

enum Kind {
    Values {
        expected: Vec<Scalar>,
        exact: ExactFn,
        float: Option<FloatFn>,
    },
    Check {
        expected: String,
        run: CheckFn,
    },
}

pub struct Entry {
    pub id: String,
    pub anchor: &'static str,
    /// Acceptance criterion the entry belongs to.
    pub criterion: u8,
    kind: Kind,
}

/// Result of a check entry.
pub struct Outcome {
    pub pass: bool,
    pub got: String,
    pub residual: f64,
}

impl Outcome {
    fn from_failures(failures: Vec<String>, ok: &str) -> Self {
        Outcome {
            pass: failures.is_empty(),
            got: if failures.is_empty() {
                ok.to_string()
            } else {
                format!("failed: {}", failures.join("; "))
            },
            residual: failures.len() as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub id: String,
    pub anchor: &'static str,
    pub criterion: u8,
    pub expected: String,
    pub got: String,
    pub residual: f64,
    /// Largest relative gap between float and exact values.
    pub float_residual: Option<f64>,
    pub pass: bool,
}

impl Record {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "anchor": self.anchor,
            "criterion": self.criterion,
            "expected": self.expected,
            "got": self.got,
            "residual": float_to_string(self.residual),
            "float_residual": self.float_residual.map(float_to_string),
            "pass": self.pass,
        })
    }
}

fn list(xs: &[Scalar]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn values(id: impl Into<String>, anchor: &'static str, criterion: u8, expected: Vec<Scalar>, exact: ExactFn, float: FloatFn) -> Entry {
    Entry {
        id: id.into(),
        anchor,
        criterion,
        kind: Kind::Values {
            expected,
            exact,
            float: Some(float),
        },
    }
}

/// A value entry with no float counterpart (integer dimensions).
fn exact_only(id: impl Into<String>, anchor: &'static str, criterion: u8, expected: Vec<Scalar>, exact: ExactFn) -> Entry {
    Entry {
        id: id.into(),
        anchor,
        criterion,
        kind: Kind::Values {
            expected,
            exact,
            float: None,
        },
    }
}

fn check(id: impl Into<String>, anchor: &'static str, criterion: u8, expected: &str, run: CheckFn) -> Entry {
    Entry {
        id: id.into(),
        anchor,
        criterion,
        kind: Kind::Check {
            expected: expected.to_string(),
            run,
        },
    }
}

/// Both instantiations of a generic value function.
macro_rules! twin {
    ($f:ident) => {
        (Box::new($f::<Scalar>) as ExactFn, Box::new($f::<Complex64>) as FloatFn)
    };
}

impl Entry {
    pub fn run(&self) -> Record {
        let (expected, got, residual, float_residual, pass) = match &self.kind {
            Kind::Values { expected, exact, float } => match exact() {
                Ok(got) => {
                    let residual = got
                        .iter()
                        .zip(expected)
                        .map(|(g, e)| (g.to_c64() - e.to_c64()).norm())
                        .fold(0.0, f64::max);
                    let pass = got.len() == expected.len() && got.iter().zip(expected).all(|(g, e)| g == e);
                    let float_residual = float.as_ref().map(|float| match float() {
                        Ok(f) if f.len() == got.len() => 
                            f.iter()
                                .zip(&got)
                                .map(|(x, g)| {
                                    let g = g.to_c64();
                                    (x - g).norm() / g.norm().max(1.0)
                                })
                                .fold(0.0, f64::max),
                        _ => f64::INFINITY,
                    });
                    (list(expected), list(&got), residual, float_residual, pass)
                }
                Err(e) => (list(expected), format!("error: {e}"), f64::INFINITY, None, false),
            },
            Kind::Check { expected, run } => match run() {
                Ok(o) => (expected.clone(), o.got, o.residual, None, o.pass),
                Err(e) => (expected.clone(), format!("error: {e}"), f64::INFINITY, None, false),
            },
        };
        Record {
            id: self.id.clone(),
            anchor: self.anchor,
            criterion: self.criterion,
            expected,
            got,
            residual,
            float_residual,
            pass,
        }
    }
}

/// Runs entries on all available threads; records come back sorted by id.
pub fn run_all(entries: &[Entry]) -> Vec<Record> {
    let next = AtomicUsize::new(0);
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(entries.len().max(1));
    let mut records: Vec<Record> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(e) = entries.get(i) else { break };
                        log::debug!("running {}", e.id);
                        out.push(e.run());
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("corpus worker panicked"))
            .collect()
    });
    records.sort_by(|a, b| a.id.cmp(&b.id));
    records
}

fn s(n: i64) -> Scalar {
    Scalar::int(n)
}

fn cayley_wedge<S: Coeff>() -> Result<Vec<S>> {
    let o = cayley_form::<S>();
    Ok(vec![o.pair(&o)])
}

fn lambda2_spectrum<S: Coeff>() -> Result<Vec<S>> {
    let r = verify_spin7(&cayley_form::<S>());
    Ok(vec![S::from_i64(r.mult_3 as i64), S::from_i64(r.mult_minus_1 as i64)])
}

fn product_values<S: Coeff>() -> Result<Vec<S>> {
    let su4 = SU4Structure::<S>::standard();
    let beta = product_class::<S>();
    let half_c1 = c_basis::<S>()[0].scale(&S::from_ratio(1, 2));
    let p = gamma_from_c(&su4, &half_c1)?;
    Ok(vec![k_value(&beta, &su4)?, rotation_residual(&beta, &su4, &p.gamma)?])
}

/// (3/4) Delta in flat coordinates with the standard omega.
fn diagonal_values<S: Coeff>() -> Result<Vec<S>> {
    let su4 = SU4Structure::<S>::standard();
    let beta = diagonal_class::<S>().scale(&S::from_ratio(3, 4));
    let c1 = c_basis::<S>()[0].clone();
    let cc = c1.wedge(&c1.conj());
    let w2 = su4.omega().pow(2);
    Ok(vec![k_value(&beta, &su4)?, beta.pair(&cc), w2.pair(&cc)])
}

fn bound_value<S: Coeff>(b: &Bound) -> Result<S> {
    match b {
        Bound::Exact(v) => Ok(S::from_q(v)),
        Bound::Float(x) => S::from_c64(Complex64::new(*x, 0.0))
            .ok_or_else(|| Error::InvalidInput("float bound for an exact coefficient".into())),
        Bound::Enclosure { .. } => Err(Error::FloatFallbackRequired("k_m is only enclosed".into())),
    }
}

fn weil_km<S: Coeff>() -> Result<Vec<S>> {
    let su4 = SU4Structure::<S>::standard();
    Ok(vec![bound_value(&k_m(&weil_class::<S>(), &su4)?)?])
}

fn weil_omega_residual<S: Coeff>() -> Result<Vec<S>> {
    let su4 = SU4Structure::<S>::standard();
    Ok(vec![rotation_residual(&weil_plus_omega_sq::<S>(), &su4, &gamma::<S>(1))?])
}

fn projectors() -> Result<Outcome> {
    let sp = Spin7Structure::<Scalar>::cayley();
    let (p7, p21) = (sp.pi7(), sp.pi21());
    let id = Matrix::identity(28);
    let mut f = Vec::new();
    if p7.add(p21) != id {
        f.push("pi7 + pi21 != Id".to_string());
    }
    if p7.mul(p7) != *p7 {
        f.push("pi7^2 != pi7".to_string());
    }
    if p21.mul(p21) != *p21 {
        f.push("pi21^2 != pi21".to_string());
    }
    Ok(Outcome::from_failures(f, "pi7 + pi21 = Id, both idempotent"))
}

fn cayley_identities() -> Result<Outcome> {
    let o = cayley_form::<Scalar>();
    let mut f = Vec::new();
    if o.hodge() != o {
        f.push("*Omega != Omega".to_string());
    }
    if SU4Structure::<Scalar>::standard().cayley() != o {
        f.push("omega^2/2 + Re theta != Omega".to_string());
    }
    Ok(Outcome::from_failures(f, "*Omega = Omega and omega^2/2 + Re theta = Omega"))
}

static SUITE: OnceLock<Result<Vec<LineCheck>>> = OnceLock::new();

fn suite() -> Result<Vec<LineCheck>> {
    SUITE
        .get_or_init(|| representation_suite(&SU4Structure::<Scalar>::standard()))
        .clone()
}

fn suite_line(n: usize) -> Result<Outcome> {
    let lines = suite()?;
    let line = lines
        .get(n)
        .ok_or_else(|| Error::InvalidInput(format!("the suite has {} lines", lines.len())))?;
    Ok(Outcome {
        pass: line.holds,
        got: format!(
            "{}: dim {} vs pieces {:?} ({})",
            line.line, line.lhs_dim, line.rhs_dims, line.relation
        ),
        residual: if line.holds { 0.0 } else { 1.0 },
    })
}

fn wedge_table() -> Result<Outcome> {
    let su4 = SU4Structure::<Scalar>::standard();
    let theta = su4.theta();
    let (c, cp) = (c_basis::<Scalar>(), c_prime_basis::<Scalar>());
    let mut f = Vec::new();
    for j in 0..6 {
        for k in 0..6 {
            let (want, want_p) = if j == k {
                (theta.scale(&s(2)), theta.scale(&Scalar::gaussian(q(0, 1), q(2, 1))))
            } else {
                (Form::zero(), Form::zero())
            };
            if c[j].wedge(&c[k]) != want {
                f.push(format!("c{} ^ c{}", j + 1, k + 1));
            }
            if c[j].wedge(&cp[k]) != want_p {
                f.push(format!("c{} ^ c'{}", j + 1, k + 1));
            }
        }
    }
    Ok(Outcome::from_failures(f, "c_j ^ c_j = 2 theta, c_j ^ c'_j = 2i theta, others 0"))
}

fn span_entry(mixed: bool) -> Result<Outcome> {
    let r = span_checks(&SU4Structure::<Scalar>::standard());
    let (pass, got) = if mixed {
        (r.mixed_matches, format!("dim {}, matches = {}", r.mixed_dim, r.mixed_matches))
    } else {
        let c = r
            .omega_sq_coefficient
            .as_ref()
            .map_or("none".to_string(), |c| c.to_string());
        (
            r.sym2_matches,
            format!(
                "dim {}, omega^2 coefficient {c}, matches = {}, Re theta + 8 omega^2 in span = {}",
                r.sym2_dim, r.sym2_matches, r.coefficient_8_in_span
            ),
        )
    };
    Ok(Outcome {
        pass,
        got,
        residual: if pass { 0.0 } else { 1.0 },
    })
}

/// The rotation identities for one gamma in A+, all exact.
pub fn rotation_identities(g: &Form<Scalar>) -> Result<Outcome> {
    let su4 = SU4Structure::<Scalar>::standard();
    let p = RotationParameter::from_gamma(&su4, g)?;
    let r = rotate(&su4, &p)?;
    let w = r.structure.omega();
    let mut f = Vec::new();
    if w.norm_sq() != s(4) {
        f.push(format!("|omega'|^2 = {}", w.norm_sq()));
    }
    let lhs = w.wedge(w).scale(&Scalar::ratio(1, 2)).add(&r.structure.theta().re());
    if lhs != cayley_form() {
        f.push("omega'^2/2 + Re theta' != Omega".into());
    }
    if w.pow(4).vol_coeff() != s(24) {
        f.push(format!("omega'^4 = {} vol", w.pow(4).vol_coeff()));
    }
    let n2 = p.gamma_norm_sq.clone() * &p.gamma_norm_sq;
    if p.gamma.pow(4).vol_coeff() != n2 * &Scalar::ratio(3, 2) {
        f.push("gamma^4 != 3/2 |gamma|^4 vol".into());
    }
    let back = rotate_back_gamma(&su4, &r, &p)?;
    if rotate(&r.structure, &back)?.structure.omega() != su4.omega() {
        f.push("rotate-back does not return omega".into());
    }
    let beta = rotatable_class(&su4, &p)?;
    let (k, kp) = (k_value(&beta, &su4)?, k_value(&beta, &r.structure)?);
    if k != kp {
        f.push(format!("k = {k}, k' = {kp}"));
    }
    Ok(Outcome::from_failures(f, "all six identities hold"))
}

/// A seeded rational combination of gamma_1..gamma_6.
pub fn random_a_plus(rng: &mut ChaCha8Rng) -> Form<Scalar> {
    (1..=6).fold(Form::zero(), |acc, j| {
        let c = q(rng.random_range(-3..=3), rng.random_range(1..=4));
        acc.add(&gamma::<Scalar>(j).scale(&Scalar::rational(c)))
    })
}

/// A seeded anti-hermitian trace-free 4x4 matrix with small rational entries.
pub fn random_anti_hermitian(rng: &mut ChaCha8Rng) -> Matrix<Scalar> {
    let mut m = Matrix::zeros(4, 4);
    let mut small = || q(rng.random_range(-4..=4), rng.random_range(1..=3));
    let mut trace = Q::from_integer(0.into());
    for j in 0..4 {
        for k in j + 1..4 {
            let z = Scalar::gaussian(small(), small());
            m[(k, j)] = -z.conj();
            m[(j, k)] = z;
        }
        if j < 3 {
            let t = small();
            trace += &t;
            m[(j, j)] = Scalar::gaussian(q(0, 1), t);
        }
    }
    m[(3, 3)] = Scalar::gaussian(q(0, 1), -trace);
    m
}

/// -alpha^2 has a negative-semidefinite Phi and k = |a|^2/3.
pub fn alpha_square_case(a: &Matrix<Scalar>) -> Result<Vec<String>> {
    let su4 = SU4Structure::<Scalar>::standard();
    let alpha = form_11(a)?;
    let beta = alpha.wedge(&alpha).neg();
    let mut f = Vec::new();
    let class = phi_form(&beta, &su4)?.classify();
    if !matches!(class, Classification::NegativeSemidefinite | Classification::Zero) {
        f.push(format!("Phi is {}", class.name()));
    }
    let norm = a
        .to_rows()
        .iter()
        .flatten()
        .fold(s(0), |acc, x| acc + &x.norm_sq());
    let k = k_value(&beta, &su4)?;
    if k != norm.clone() * &Scalar::ratio(1, 3) {
        f.push(format!("k = {k}, |a|^2/3 = {}", norm * &Scalar::ratio(1, 3)));
    }
    Ok(f)
}

/// A seeded class omega^2 + a small combination of four primitive (2,2) directions.
pub fn random_class(rng: &mut ChaCha8Rng, prim: &[Form<Scalar>]) -> Form<Scalar> {
    let su4 = SU4Structure::<Scalar>::standard();
    (0..4).fold(su4.omega().pow(2), |acc, _| {
        let b = &prim[rng.random_range(0..prim.len())];
        let c = q(rng.random_range(-2..=2), rng.random_range(4..=12));
        acc.add(&b.scale(&Scalar::rational(c)))
    })
}

/// Draws passing classes and checks that pairwise sums pass.
pub fn cone_pairs(pairs: usize, seed: u64) -> Result<Outcome> {
    let su4 = SU4Structure::<Scalar>::standard();
    let prim = su4.delta22_prim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passing = Vec::new();
    let mut drawn = 0;
    while passing.len() < pairs + 1 && drawn < 50 * (pairs + 1) {
        drawn += 1;
        let b = random_class(&mut rng, &prim);
        if bogomolov_check(&b, &su4)?.pass {
            passing.push(b);
        }
    }
    if passing.len() < pairs + 1 {
        return Err(Error::InvalidInput(format!(
            "only {} passing classes in {drawn} draws",
            passing.len()
        )));
    }
    let mut f = Vec::new();
    for i in 0..pairs {
        let sum = passing[i].add(&passing[i + 1]);
        if !bogomolov_check(&sum, &su4)?.pass {
            f.push(format!("pair {i}"));
        }
    }
    Ok(Outcome::from_failures(f, &format!("{pairs} sums of passing classes pass")))
}

fn sphere_entry(beta: Form<Scalar>, samples: usize) -> Result<Outcome> {
    let su4 = SU4Structure::<Scalar>::standard();
    let sup = k_sup_over_sphere(&beta, &su4, samples, CORPUS_SEED)?;
    Ok(Outcome {
        pass: sup.pass(),
        got: format!(
            "max over {} samples {:.6} <= bound {:.6}, {} violations",
            sup.samples, sup.sampled_max, sup.bound, sup.violations
        ),
        residual: (sup.sampled_max - sup.bound).max(0.0),
    })
}

/// The pipeline identities listed for the Weil sample.
pub const WEIL_CHECKS: [&str; 11] = [
    "phi^2 = -d",
    "phi preserves the rotated lattice",
    "q(1 + |a~|^2 + varpi^2) + varpi i = 0",
    "B = closed form",
    "C-hat* eta C-hat = lambda eta",
    "lambda = (1 - x^2)(1 - |a|^2)",
    "lambda is rational and positive",
    "F^2 = (4q^2 + 1) Id",
    "F(-q)^2 = (4q^2 + 1) Id",
    "F(-q) solves both endomorphism equations",
    "beta is (2,2) for the rotated structure",
];

fn weil_checks(d: u64, y: &Q, a: &Scalar) -> Result<Outcome> {
    let out = weil_rotation_pipeline(a, d, y)?;
    let f: Vec<String> = WEIL_CHECKS
        .iter()
        .filter(|n| !out.check(n).is_some_and(|c| c.pass))
        .map(|n| n.to_string())
        .collect();
    Ok(Outcome::from_failures(f, "all pipeline identities hold"))
}

fn weil_values<S: Coeff>(d: u64, y: &Q, a: &Scalar) -> Result<Vec<S>> {
    let out = weil_rotation_pipeline::<S>(&S::from_scalar(a), d, y)?;
    Ok(vec![out.lambda, out.q, out.f_square, out.relation_residual])
}

/// Closed forms: lambda = (1 - y^2/d)(1 - |a|^2), q = y sqrt(d) i/(y^2 + d),
/// 4q^2 + 1 = ((d - y^2)/(d + y^2))^2, relation residual 0.
fn weil_expected(d: u64, y: &Q, a: &Scalar) -> Vec<Scalar> {
    let dq = Q::from_integer(d.into());
    let lambda = (Q::from_integer(1.into()) - y * y / &dq) * (Q::from_integer(1.into()) - a.norm_sq().rational_part());
    let delta = Scalar::sqrt_of_d(d).expect("square-free");
    let qv = delta * &Scalar::gaussian(q(0, 1), y / (y * y + &dq));
    let r = (&dq - y * y) / (&dq + y * y);
    vec![Scalar::rational(lambda), qv, Scalar::rational(&r * &r), s(0)]
}

fn weil_endo_dim(d: u64, y: &Q, a: &Scalar) -> Result<Vec<Scalar>> {
    let out = weil_rotation_pipeline::<Scalar>(a, d, y)?;
    let space = endomorphism_space(&out.b, d, EndomorphismSystem::WithCompanion)?;
    Ok(vec![s(space.k_dim as i64)])
}

fn json_roundtrip() -> Result<Outcome> {
    let rho = Scalar::sqrt_rational(&q(5, 1))?;
    let forms = [
        cayley_form::<Scalar>(),
        weil_plus_omega_sq(),
        gamma::<Scalar>(2).wedge(&gamma(5)).scale(&rho),
    ];
    let mut f = Vec::new();
    for (n, form) in forms.iter().enumerate() {
        let text = serde_json::to_string(&form_to_json(form, 4)?).expect("serialisable");
        let parsed: Value = serde_json::from_str(&text).expect("valid JSON");
        let (back, _) = form_from_json(&parsed)?;
        let again = serde_json::to_string(&form_to_json(&back, 4)?).expect("serialisable");
        if &back != form || again != text {
            f.push(format!("form {n}"));
        }
    }
    Ok(Outcome::from_failures(f, "parse(emit(f)) = f and emit is byte-stable"))
}

/// The full corpus, in a fixed order.
pub fn corpus() -> Vec<Entry> {
    let mut v = Vec::new();
    let (e, f) = twin!(cayley_wedge);
    v.push(values("cayley-14vol", "Cayley form: Omega ^ Omega = 14 vol", 1, vec![s(14)], e, f));
    v.push(check("cayley-identities", "Cayley form: self-duality and SU(4) formula", 1, "both hold", Box::new(cayley_identities)));
    let (e, f) = twin!(lambda2_spectrum);
    v.push(values("lambda2-spectrum", "alpha -> *(Omega ^ alpha) on 2-forms: multiplicities of 3 and -1", 2, vec![s(7), s(21)], e, f));
    v.push(check("lambda2-projectors", "projections onto the 7 and 21 summands", 2, "pi7 + pi21 = Id, both idempotent", Box::new(projectors)));
    for n in 0..8 {
        v.push(check(
            format!("rep-line-{}", n + 1),
            "SU(4) refinement of the Spin(7) summands",
            3,
            "relation holds with the stated dimensions",
            Box::new(move || suite_line(n)),
        ));
    }
    v.push(check("wedge-table", "products of the basis (2,0)-forms", 3, "diagonal 2 theta / 2i theta, off-diagonal 0", Box::new(wedge_table)));
    v.push(check("span-sym2", "span of gamma_i ^ gamma_j", 3, "prim(2,2) + one line, coefficient reported", Box::new(|| span_entry(false))));
    v.push(check("span-mixed", "span of gamma_i ^ gamma'_j", 3, "prim(1,1)^omega + <Im theta>", Box::new(|| span_entry(true))));
    for j in 1..=6 {
        v.push(check(
            format!("rotation-gamma{j}"),
            "rotation identities for a basis element of A+",
            4,
            "all six identities hold",
            Box::new(move || rotation_identities(&gamma(j))),
        ));
    }
    for n in 0..3 {
        v.push(check(
            format!("rotation-random-{}", n + 1),
            "rotation identities for a rational combination in A+",
            4,
            "all six identities hold",
            Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED + n);
                rotation_identities(&random_a_plus(&mut rng))
            }),
        ));
    }
    let (e, f) = twin!(product_values);
    v.push(values("product-k", "product class dz_{12 1b 2b}: k and residual for c = dz12 + dz34", 5, vec![Scalar::ratio(1, 3), s(0)], e, f));
    let (e, f) = twin!(diagonal_values);
    v.push(values(
        "diagonal-k",
        "diagonal class in flat coordinates: k, beta ^ c1 ^ conj c1, omega^2 ^ c1 ^ conj c1",
        5,
        vec![Scalar::ratio(1, 2), s(12), s(16)],
        e,
        f,
    ));
    let (e, f) = twin!(weil_km);
    v.push(values("weil-km", "Weil class: k_m", 5, vec![s(1)], e, f));
    v.push(check(
        "weil-km-direction",
        "Weil class: c1 maximises",
        5,
        "c1 in the top eigenspace",
        Box::new(|| {
            let su4 = SU4Structure::<Scalar>::standard();
            let v = bogomolov_check(&weil_plus_omega_sq(), &su4)?;
            let ext = v.extremal.ok_or_else(|| Error::InvalidInput("no extremal set".into()))?;
            let span: Vec<Vec<Scalar>> = ext.eigenspace.iter().map(|f| f.to_vector(2)).collect();
            let ok = in_span(&span, &c_basis::<Scalar>()[0].to_vector(2));
            Ok(Outcome {
                pass: ok,
                got: format!("eigenspace dim {}, contains c1 = {ok}", span.len()),
                residual: if ok { 0.0 } else { 1.0 },
            })
        }),
    ));
    let (e, f) = twin!(weil_omega_residual);
    v.push(values("weil-omega-residual", "Weil class + omega^2 rotated by gamma_1: residual", 5, vec![s(0)], e, f));
    v.push(check(
        "alpha-square",
        "-alpha^2 for primitive (1,1) alpha",
        6,
        "Phi negative-semidefinite, k = |a|^2/3",
        Box::new(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
            let mut f = Vec::new();
            for n in 0..20 {
                let a = random_anti_hermitian(&mut rng);
                f.extend(alpha_square_case(&a)?.into_iter().map(|m| format!("sample {n}: {m}")));
            }
            Ok(Outcome::from_failures(f, "20 samples hold"))
        }),
    ));
    v.push(check("cone-closure", "sums of passing classes", 6, "all sums pass", Box::new(|| cone_pairs(10, CORPUS_SEED))));
    v.push(check(
        "shifted-diagonal-fails",
        "Delta - omega^2/100",
        6,
        "fails the Bogomolov check",
        Box::new(|| {
            let su4 = SU4Structure::<Scalar>::standard();
            let v = bogomolov_check(&shifted_diagonal(&Scalar::ratio(1, 100)), &su4)?;
            Ok(Outcome {
                pass: !v.pass,
                got: format!("k = {}, pass = {}", v.k, v.pass),
                residual: 0.0,
            })
        }),
    ));
    let sphere_classes: [(&str, fn() -> Form<Scalar>); 4] = [
        ("omega-sq", || SU4Structure::<Scalar>::standard().omega().pow(2)),
        ("weil-omega", weil_plus_omega_sq::<Scalar>),
        ("product", product_class::<Scalar>),
        ("diagonal", diagonal_class::<Scalar>),
    ];
    for (name, class) in sphere_classes {
        v.push(check(
            format!("sphere-{name}"),
            "sampled beta ^ omega'^2 against 24 k vol",
            7,
            "no violations in 1000 samples",
            Box::new(move || sphere_entry(class(), 1000)),
        ));
    }
    for (n, (d, y, a)) in weil_samples().into_iter().enumerate() {
        let n = n + 1;
        let (y1, a1) = (y.clone(), a.clone());
        v.push(check(
            format!("weil-{n}-identities"),
            "rotated Weil product: pipeline identities",
            8,
            "all pipeline identities hold",
            Box::new(move || weil_checks(d, &y1, &a1)),
        ));
        let (y1, a1, y2, a2) = (y.clone(), a.clone(), y.clone(), a.clone());
        v.push(values(
            format!("weil-{n}-values"),
            "rotated Weil product: lambda, q, 4q^2 + 1, relation residual",
            8,
            weil_expected(d, &y, &a),
            Box::new(move || weil_values::<Scalar>(d, &y1, &a1)),
            Box::new(move || weil_values::<Complex64>(d, &y2, &a2)),
        ));
        let (y1, a1) = (y.clone(), a.clone());
        v.push(exact_only(
            format!("weil-{n}-endomorphism-dim"),
            "rotated Weil product: K-dimension of the endomorphism space",
            8,
            vec![s(2)],
            Box::new(move || weil_endo_dim(d, &y1, &a1)),
        ));
    }
    v.push(check("json-roundtrip", "Form JSON emit and parse", 10, "byte-stable round trip", Box::new(json_roundtrip)));
    v
}

/// Whether the float twins of all value entries agree with the exact values.
pub fn float_agreement(records: &[Record]) -> (bool, f64) {
    let worst = records
        .iter()
        .filter_map(|r| r.float_residual)
        .fold(0.0, f64::max);
    (worst <= FLOAT_REL_TOL, worst)
}
