//! The JSON-producing commands behind the `spin7` binary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use spin7_core::bogomolov::{bogomolov_check, k_sup_over_sphere, Bound};
use spin7_core::json::{matrix_to_json, rational_to_string, ToJson};
use spin7_core::bogomolov::k_value;
use spin7_core::rotation::{gamma_from_c, phi_form, rotate, rotation_residual, RotationParameter};
use spin7_core::scalar::{q, Coeff, Scalar, Q};
use spin7_core::spin7::{gamma, FourFormBasis, SU4Structure};
use spin7_core::torus::{
    endomorphism_space, generic_endomorphism_dimension, weil_rotation_pipeline, EndomorphismSpace,
    EndomorphismSystem, WeilRotationOutput,
};
use spin7_core::{Complex64, Error, Form, Result};

/// Arithmetic used by a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact, with float allowed only where a step has no exact form.
    Default,
    /// Exact; a step that needs floats is an error.
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Default => "default",
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// Process exit code for an error: 2 for malformed input, 3 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Schema { .. } => 2,
        _ => 3,
    }
}

pub fn error_json(err: &Error) -> Value {
    match err {
        Error::Schema { field, message } => json!({
            "error": "schema",
            "field": field,
            "message": message,
        }),
        other => json!({
            "error": other.name(),
            "message": other.to_string(),
        }),
    }
}

fn to_float(f: &Form<Scalar>) -> Form<Complex64> {
    f.convert(Coeff::to_c64)
}

fn bound_json(b: &Bound) -> Value {
    match b {
        Bound::Exact(v) => json!({ "exact": rational_to_string(v) }),
        Bound::Enclosure { lo, hi } => json!({
            "lo": rational_to_string(lo),
            "hi": rational_to_string(hi),
            "width": rational_to_string(&(hi - lo)),
        }),
        Bound::Float(x) => json!({ "float": spin7_core::json::float_to_string(*x) }),
    }
}

fn forms_json<S: ToJson>(forms: &[Form<S>], degree: usize) -> Result<Value> {
    forms
        .iter()
        .map(|f| S::form_json(f, degree))
        .collect::<Result<Vec<_>>>()
        .map(Value::Array)
}

pub fn decompose(beta: &Form<Scalar>, degree: usize, mode: Mode) -> Result<Value> {
    match mode {
        Mode::Float => decompose_in(&to_float(beta), degree),
        _ => decompose_in(beta, degree),
    }
}

fn decompose_in<S: ToJson>(beta: &Form<S>, degree: usize) -> Result<Value> {
    let su4 = SU4Structure::<S>::standard();
    match degree {
        2 => {
            let (p7, p21) = su4.spin7()?.project_2form(beta)?;
            Ok(json!({
                "degree": 2,
                "summands": { "7": S::form_json(&p7, 2)?, "21": S::form_json(&p21, 2)? },
            }))
        }
        4 => {
            let d = FourFormBasis::new(&su4)?.decompose(beta)?;
            let mut pieces = Vec::new();
            for (p, f) in &d.pieces {
                if !f.is_zero() {
                    pieces.push(json!({
                        "piece": p.name(),
                        "summand": p.slot(),
                        "form": S::form_json(f, 4)?,
                    }));
                }
            }
            let mut summands = Map::new();
            for slot in [1, 7, 27, 35] {
                summands.insert(slot.to_string(), S::form_json(&d.slot(slot), 4)?);
            }
            Ok(json!({ "degree": 4, "pieces": pieces, "summands": summands }))
        }
        k => Err(Error::InvalidInput(format!("decompose handles degrees 2 and 4, got {k}"))),
    }
}

/// Direction of a rotation: a (2,0)-form c or a basis element gamma_j.
#[derive(Clone, Debug)]
pub enum Direction {
    C(Form<Scalar>),
    Gamma(usize),
}

fn parameter<S: Coeff>(su4: &SU4Structure<S>, dir: &Direction) -> Result<(SU4Structure<S>, RotationParameter<S>)> {
    match dir {
        Direction::C(c) => {
            let c = convert_in::<S>(c);
            let p = gamma_from_c(su4, &c)?;
            let base = match &p.rescaled_theta {
                Some(theta) => SU4Structure::new(su4.j().clone(), su4.omega().clone(), theta.clone())?,
                None => su4.clone(),
            };
            Ok((base, p))
        }
        Direction::Gamma(j) if (1..=6).contains(j) => {
            Ok((su4.clone(), RotationParameter::from_gamma(su4, &gamma::<S>(*j))?))
        }
        Direction::Gamma(j) => Err(Error::Schema {
            field: "gamma".into(),
            message: format!("expected 1..=6, got {j}"),
        }),
    }
}

fn convert_in<S: Coeff>(f: &Form<Scalar>) -> Form<S> {
    f.convert(S::from_scalar)
}

fn class_report<S: ToJson>(beta: &Form<S>, su4: &SU4Structure<S>, g: &Form<S>) -> Result<Value> {
    let k = k_value(beta, su4)?;
    let residual = rotation_residual(beta, su4, g)?;
    let class = phi_form(beta, su4)?.classify();
    Ok(json!({
        "k": k.real_json(),
        "residual": residual.real_json(),
        "classification": class.name(),
    }))
}

pub fn rotate_cmd(dir: &Direction, beta: Option<&Form<Scalar>>, mode: Mode) -> Result<Value> {
    match mode {
        Mode::Float => rotate_in::<Complex64>(dir, beta),
        _ => rotate_in::<Scalar>(dir, beta),
    }
}

fn rotate_in<S: ToJson>(dir: &Direction, beta: Option<&Form<Scalar>>) -> Result<Value> {
    let (su4, p) = parameter(&SU4Structure::<S>::standard(), dir)?;
    let r = rotate(&su4, &p)?;
    let mut out = match beta {
        Some(b) => class_report(&convert_in::<S>(b), &su4, &p.gamma)?,
        None => json!({ "k": null, "residual": null, "classification": null }),
    };
    let obj = out.as_object_mut().expect("object");
    obj.insert("gamma".into(), S::form_json(&p.gamma, 2)?);
    obj.insert("omega_prime".into(), S::form_json(r.structure.omega(), 2)?);
    obj.insert("J_prime".into(), matrix_to_json(r.structure.j().matrix()));
    obj.insert("convention".into(), r.convention.name().into());
    obj.insert("theta_rescaled".into(), p.rescaled_theta.is_some().into());
    Ok(out)
}

pub fn residual_cmd(dir: &Direction, beta: &Form<Scalar>, mode: Mode) -> Result<Value> {
    fn run<S: ToJson>(dir: &Direction, beta: &Form<Scalar>) -> Result<Value> {
        let (su4, p) = parameter(&SU4Structure::<S>::standard(), dir)?;
        class_report(&convert_in::<S>(beta), &su4, &p.gamma)
    }
    match mode {
        Mode::Float => run::<Complex64>(dir, beta),
        _ => run::<Scalar>(dir, beta),
    }
}

pub fn bogomolov_cmd(beta: &Form<Scalar>, mode: Mode, samples: usize, seed: u64) -> Result<Value> {
    match mode {
        Mode::Float => bogomolov_in(&to_float(beta), samples, seed),
        _ => bogomolov_in(beta, samples, seed),
    }
}

fn bogomolov_in<S: ToJson>(beta: &Form<S>, samples: usize, seed: u64) -> Result<Value> {
    let su4 = SU4Structure::<S>::standard();
    let v = bogomolov_check(beta, &su4)?;
    let extremal = match &v.extremal {
        Some(e) => json!({
            "eigenspace": forms_json(&e.eigenspace, 2)?,
            "rotatable": forms_json(&e.rotatable, 2)?,
        }),
        None => Value::Null,
    };
    let sphere = if samples == 0 {
        Value::Null
    } else {
        match k_sup_over_sphere(beta, &su4, samples, seed) {
            Ok(s) => json!({
                "value": s.value.real_json(),
                "samples": s.samples,
                "seed": seed,
                "sampled_max": spin7_core::json::float_to_string(s.sampled_max),
                "bound": spin7_core::json::float_to_string(s.bound),
                "violations": s.violations,
                "pass": s.pass(),
            }),
            Err(Error::InvalidInput(msg)) => json!({ "skipped": msg }),
            Err(e) => return Err(e),
        }
    };
    Ok(json!({
        "k": v.k.real_json(),
        "k_m": bound_json(&v.k_m),
        "pass": v.pass,
        "equality": v.equality,
        "extremal": extremal,
        "sphere": sphere,
    }))
}

/// Parameters of `weil-rotate`.
#[derive(Clone, Debug)]
pub struct WeilArgs {
    pub d: u64,
    pub a: Scalar,
    pub y: Q,
    pub samples: usize,
    pub seed: u64,
}

pub fn weil_rotate_cmd(args: &WeilArgs, mode: Mode) -> Result<Value> {
    match mode {
        Mode::Float => {
            let out = weil_rotation_pipeline::<Complex64>(&args.a.to_c64(), args.d, &args.y)?;
            Ok(weil_json(&out, None))
        }
        Mode::Default | Mode::Exact => {
            let out = weil_rotation_pipeline::<Scalar>(&args.a, args.d, &args.y)?;
            if mode == Mode::Exact && out.p_exact.is_none() {
                return Err(Error::FloatFallbackRequired(
                    "the diagonaliser P needs sqrt(d/(d+y^2)) and sqrt(y^2/(d+y^2)), which are irrational here"
                        .into(),
                ));
            }
            let single = endomorphism_space(&out.b, args.d, EndomorphismSystem::Single)?;
            let both = endomorphism_space(&out.b, args.d, EndomorphismSystem::WithCompanion)?;
            let mut v = weil_json(&out, Some((&single, &both)));
            if args.samples > 0 {
                let samples = random_weil_samples(args.samples, args.seed);
                let (min, dims) = generic_endomorphism_dimension(args.d, &samples, EndomorphismSystem::WithCompanion)?;
                v.as_object_mut().expect("object").insert(
                    "generic_endomorphism_dimension".into(),
                    json!({ "min": min, "per_sample": dims, "seed": args.seed }),
                );
            }
            Ok(v)
        }
    }
}

/// Seeded (a, y) with |a| < 1 and 0 < y < 1 <= sqrt d, small denominators.
pub fn random_weil_samples(n: usize, seed: u64) -> Vec<(Scalar, Q)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re = q(rng.random_range(-5..=5), 11);
            let im = q(rng.random_range(-5..=5), 13);
            let y = q(rng.random_range(1..=9), 10);
            (Scalar::gaussian(re, im), y)
        })
        .collect()
}

fn space_json(space: &EndomorphismSpace) -> Value {
    json!({
        "k_dim": space.k_dim,
        "basis": space.basis.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn weil_json<S: ToJson>(o: &WeilRotationOutput<S>, spaces: Option<(&EndomorphismSpace, &EndomorphismSpace)>) -> Value {
    let checks: Vec<Value> = o
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "pass": c.pass,
                "residual": spin7_core::json::float_to_string(c.residual),
            })
        })
        .collect();
    let endo = spaces.map(|(single, both)| {
        json!({
            "single_equation": space_json(single),
            "with_companion": space_json(both),
        })
    });
    let float_p = {
        let p = &o.p_float;
        Value::Array(
            p.to_rows()
                .iter()
                .map(|r| Value::Array(r.iter().map(|z| z.scalar_json()).collect()))
                .collect(),
        )
    };
    json!({
        "d": o.d,
        "a": o.a.scalar_json(),
        "y": rational_to_string(&o.y),
        "x": o.x.scalar_json(),
        "r": rational_to_string(&o.r),
        "s": o.s.scalar_json(),
        "reduced": matrix_to_json(&o.reduced),
        "rotated_lattice": matrix_to_json(o.rotated.complex()),
        "phi": matrix_to_json(&o.phi),
        "module_basis": matrix_to_json(&o.module_basis),
        "P": match &o.p_exact {
            Some(p) => json!({ "exact": matrix_to_json(p), "float": float_p }),
            None => json!({ "exact": null, "float": float_p }),
        },
        "C": matrix_to_json(&o.c),
        "C_scale": o.c_scale.scalar_json(),
        "C_hat": matrix_to_json(&o.c_hat),
        "C_hat_inverse": matrix_to_json(&o.c_hat_inv),
        "lambda": o.lambda.real_json(),
        "B": matrix_to_json(&o.b),
        "B_closed_form": matrix_to_json(&o.b_closed),
        "B_prime": matrix_to_json(&o.b_prime),
        "a_tilde": o.a_tilde.scalar_json(),
        "varpi": o.varpi.scalar_json(),
        "q": o.q.scalar_json(),
        "relation_residual": o.relation_residual.scalar_json(),
        "F": matrix_to_json(&o.f),
        "F_minus_q": matrix_to_json(&o.f_conj),
        "F_square": o.f_square.real_json(),
        "rotated_beta_is_22": o.rotated_beta_is_22,
        "endomorphisms": endo,
        "discrepancies": discrepancies(o),
        "checks": checks,
    })
}

fn discrepancies<S: Coeff>(o: &WeilRotationOutput<S>) -> Vec<Value> {
    let mut out = Vec::new();
    if o.check("4q^2 + 1 = r^2").is_some_and(|c| c.pass) {
        out.push(json!({
            "name": "F^2 is a rational square",
            "detail": format!(
                "4q^2 + 1 = r^2 with r = {}, so Q(F) splits and is not a field",
                rational_to_string(&o.r)
            ),
        }));
    }
    if o.check("F solves the endomorphism equation").is_some_and(|c| !c.pass) {
        out.push(json!({
            "name": "sign of q in F",
            "detail": "F fails the endomorphism equation; F with q replaced by -q solves it",
        }));
    }
    if let Some(c) = o.check("F(-q) preserves the eigenspaces of phi") {
        out.push(json!({
            "name": "F and the phi-eigenspaces",
            "detail": if c.pass { "F(-q) preserves them" } else { "F(-q) swaps them" },
        }));
    }
    out
}
