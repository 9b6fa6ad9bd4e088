use super::{su4::SU4Structure, vectors, Spin7Structure};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::{in_span, rank_of, same_span, Matrix};
use crate::scalar::Coeff;

/// SU(4)-pieces of the degree-4 Spin(7) summands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Piece {
    /// <Omega>, all of Lambda^4_1.
    Omega,
    /// A- ^ omega, in Lambda^4_7.
    AMinusOmega,
    /// <Im theta>, in Lambda^4_7.
    ImTheta,
    /// A+ ^ omega, in Lambda^4_27.
    APlusOmega,
    /// Primitive (2,2), in Lambda^4_27.
    Prim22,
    /// <omega^2 - 3/2 Re theta>, in Lambda^4_27.
    OmegaSqLine,
    /// Primitive (1,3) + (3,1), in Lambda^4_35.
    Prim13,
    /// Primitive (1,1) ^ omega, in Lambda^4_35.
    Prim11Omega,
}

impl Piece {
    pub const ALL: [Piece; 8] = [
        Piece::Omega,
        Piece::AMinusOmega,
        Piece::ImTheta,
        Piece::APlusOmega,
        Piece::Prim22,
        Piece::OmegaSqLine,
        Piece::Prim13,
        Piece::Prim11Omega,
    ];

    /// Dimension of the Spin(7) summand containing the piece.
    pub fn slot(self) -> usize {
        match self {
            Piece::Omega => 1,
            Piece::AMinusOmega | Piece::ImTheta => 7,
            Piece::APlusOmega | Piece::Prim22 | Piece::OmegaSqLine => 27,
            Piece::Prim13 | Piece::Prim11Omega => 35,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Piece::Omega => "Omega",
            Piece::AMinusOmega => "A-^omega",
            Piece::ImTheta => "Im theta",
            Piece::APlusOmega => "A+^omega",
            Piece::Prim22 => "prim(2,2)",
            Piece::OmegaSqLine => "omega^2 - 3/2 Re theta",
            Piece::Prim13 => "prim(1,3)",
            Piece::Prim11Omega => "prim(1,1)^omega",
        }
    }
}

/// A basis of 4-forms adapted to the SU(4) refinement of
/// Lambda^4 = Lambda^4_1 + Lambda^4_7 + Lambda^4_27 + Lambda^4_35.
#[derive(Clone, Debug)]
pub struct FourFormBasis<S> {
    pieces: Vec<(Piece, Vec<Form<S>>)>,
    inverse: Matrix<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourFormDecomposition<S> {
    pub pieces: Vec<(Piece, Form<S>)>,
}

impl<S: Coeff> FourFormDecomposition<S> {
    pub fn piece(&self, p: Piece) -> Form<S> {
        self.pieces
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, f)| f.clone())
            .unwrap_or_default()
    }

    /// Sum of the pieces in the summand of dimension `slot`.
    pub fn slot(&self, slot: usize) -> Form<S> {
        self.pieces
            .iter()
            .filter(|(p, _)| p.slot() == slot)
            .fold(Form::zero(), |acc, (_, f)| acc.add(f))
    }

    pub fn total(&self) -> Form<S> {
        self.pieces
            .iter()
            .fold(Form::zero(), |acc, (_, f)| acc.add(f))
    }
}

impl<S: Coeff> FourFormBasis<S> {
    pub fn new(su4: &SU4Structure<S>) -> Result<Self> {
        let w = su4.omega();
        let wedge_w = |fs: &[Form<S>]| fs.iter().map(|f| f.wedge(w)).collect::<Vec<_>>();
        let re = su4.theta().re();
        let line = w.wedge(w).sub(&re.scale(&S::from_ratio(3, 2)));
        let pieces = vec![
            (Piece::Omega, vec![su4.cayley()]),
            (Piece::AMinusOmega, wedge_w(su4.a_minus())),
            (Piece::ImTheta, vec![su4.theta().im()]),
            (Piece::APlusOmega, wedge_w(su4.a_plus())),
            (Piece::Prim22, su4.delta22_prim()),
            (Piece::OmegaSqLine, vec![line]),
            (Piece::Prim13, su4.delta13_prim()),
            (Piece::Prim11Omega, wedge_w(&su4.delta11_prim())),
        ];
        let cols: Vec<Vec<S>> = pieces
            .iter()
            .flat_map(|(_, fs)| fs.iter().map(|f| f.to_vector(4)))
            .collect();
        if cols.len() != 70 {
            return Err(Error::Singular(format!(
                "adapted basis has {} elements",
                cols.len()
            )));
        }
        let inverse = Matrix::from_cols(&cols).inverse()?;
        Ok(FourFormBasis { pieces, inverse })
    }

    pub fn pieces(&self) -> &[(Piece, Vec<Form<S>>)] {
        &self.pieces
    }

    pub fn piece_basis(&self, p: Piece) -> &[Form<S>] {
        self.pieces
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, fs)| fs.as_slice())
            .unwrap_or(&[])
    }

    /// All basis elements of one Spin(7) summand.
    pub fn slot_basis(&self, slot: usize) -> Vec<Form<S>> {
        self.pieces
            .iter()
            .filter(|(p, _)| p.slot() == slot)
            .flat_map(|(_, fs)| fs.iter().cloned())
            .collect()
    }

    pub fn decompose(&self, beta: &Form<S>) -> Result<FourFormDecomposition<S>> {
        beta.expect_degree(4)?;
        let coords = self.inverse.mul_vec(&beta.to_vector(4));
        let mut at = 0;
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (p, fs) in &self.pieces {
            let f = super::combine(fs, &coords[at..at + fs.len()]);
            at += fs.len();
            pieces.push((*p, f));
        }
        Ok(FourFormDecomposition { pieces })
    }
}

/// One line of the SU(4) refinement of the Spin(7) summands.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCheck {
    pub line: &'static str,
    /// Dimension of the Spin(7) summand, computed from its own
    /// characterisation.
    pub lhs_dim: usize,
    /// Dimensions of the SU(4) pieces on the right.
    pub rhs_dims: Vec<usize>,
    /// How the two sides are compared.
    pub relation: &'static str,
    pub holds: bool,
}

/// The summand equals the direct sum of the pieces.
const EQUAL: &str = "equal subspaces";
/// The summand is the graph of an isomorphism between the two pieces.
const GRAPH: &str = "graph of an isomorphism between the pieces";
/// The piece is a subspace whose complement in the summand is the
/// complement of the graph line inside the sum of the 8-dimensional pieces.
const COMPLEMENT: &str = "contains the piece; the quotient is an 8-dimensional graph";

fn equal_line<S: Coeff>(
    line: &'static str,
    expected: usize,
    lhs: &[Form<S>],
    rhs: &[Vec<Form<S>>],
    k: usize,
) -> LineCheck {
    let lv = vectors(lhs, k);
    let rv: Vec<Vec<S>> = rhs.iter().flat_map(|p| vectors(p, k)).collect();
    let rhs_dims: Vec<usize> = rhs.iter().map(|p| rank_of(&vectors(p, k))).collect();
    let lhs_dim = rank_of(&lv);
    let holds = lhs_dim == expected
        && rhs_dims.iter().sum::<usize>() == expected
        && same_span(&lv, &rv);
    LineCheck {
        line,
        lhs_dim,
        rhs_dims,
        relation: EQUAL,
        holds,
    }
}

/// Each Spin(7) summand in degrees 2, 3 and 4 compared with its SU(4)
/// pieces as exact subspaces of the exterior algebra.
pub fn representation_suite<S: Coeff>(su4: &SU4Structure<S>) -> Result<Vec<LineCheck>> {
    let spin7 = su4.spin7()?;
    let w = su4.omega();
    let j = su4.j();
    let mut out = Vec::new();

    let mut l27 = vec![w.clone()];
    l27.extend_from_slice(su4.a_plus());
    out.push(equal_line(
        "Lambda2_7 = <omega> + A+",
        7,
        &spin7.lambda2_7(),
        &[vec![w.clone()], su4.a_plus().to_vec()],
        2,
    ));
    let p11 = su4.delta11_prim();
    out.push(equal_line(
        "Lambda2_21 = prim(1,1) + A-",
        21,
        &spin7.lambda2_21(),
        &[p11.clone(), su4.a_minus().to_vec()],
        2,
    ));

    let l38 = spin7.lambda3_8();
    let d30 = su4.delta(3, 0);
    let d10w: Vec<Form<S>> = su4.delta(1, 0).iter().map(|f| f.wedge(w)).collect();
    let sum16: Vec<Vec<S>> = vectors(&d30, 3).into_iter().chain(vectors(&d10w, 3)).collect();
    let l38v = vectors(&l38, 3);
    let onto_30: Vec<Form<S>> = l38
        .iter()
        .map(|f| j.project(f, 3, 0).add(&j.project(f, 0, 3)))
        .collect();
    let onto_21: Vec<Form<S>> = l38
        .iter()
        .map(|f| j.project(f, 2, 1).add(&j.project(f, 1, 2)))
        .collect();
    let graph = rank_of(&l38v) == 8
        && l38v.iter().all(|v| in_span(&sum16, v))
        && rank_of(&vectors(&onto_30, 3)) == 8
        && rank_of(&vectors(&onto_21, 3)) == 8;
    out.push(LineCheck {
        line: "Lambda3_8 = Delta(3,0) + Delta(1,0)^omega",
        lhs_dim: rank_of(&l38v),
        rhs_dims: vec![rank_of(&vectors(&d30, 3)), rank_of(&vectors(&d10w, 3))],
        relation: GRAPH,
        holds: graph,
    });

    let l348 = vectors(&spin7.lambda3_48(), 3);
    let p21 = vectors(&su4.delta21_prim(), 3);
    let mut joint = l348.clone();
    joint.extend(sum16.iter().cloned());
    let lhs_dim = rank_of(&l348);
    let p21_dim = rank_of(&p21);
    // dim(Lambda3_48 intersected with the 16-dimensional sum).
    let meet = lhs_dim + 16 - rank_of(&joint);
    out.push(LineCheck {
        line: "Lambda3_48 = prim(2,1)",
        lhs_dim,
        rhs_dims: vec![p21_dim],
        relation: COMPLEMENT,
        holds: lhs_dim == 48
            && p21_dim == 40
            && p21.iter().all(|v| in_span(&l348, v))
            && meet == 8,
    });

    let omega = spin7.form();
    out.push(LineCheck {
        line: "Lambda4_1 = <omega^2/2 + Re theta>",
        lhs_dim: 1,
        rhs_dims: vec![1],
        relation: EQUAL,
        holds: su4.cayley() == *omega,
    });
    let basis = FourFormBasis::new(su4)?;
    let slot_rhs = |ps: &[Piece]| -> Vec<Vec<Form<S>>> {
        ps.iter().map(|&p| basis.piece_basis(p).to_vec()).collect()
    };
    out.push(equal_line(
        "Lambda4_7 = A-^omega + <Im theta>",
        7,
        &spin7.lambda4_7(),
        &slot_rhs(&[Piece::AMinusOmega, Piece::ImTheta]),
        4,
    ));
    out.push(equal_line(
        "Lambda4_27 = A+^omega + prim(2,2) + <omega^2 - 3/2 Re theta>",
        27,
        &spin7.lambda4_27(),
        &slot_rhs(&[Piece::APlusOmega, Piece::Prim22, Piece::OmegaSqLine]),
        4,
    ));
    out.push(equal_line(
        "Lambda4_35 = prim(1,3) + prim(1,1)^omega",
        35,
        &spin7.lambda4_35(),
        &slot_rhs(&[Piece::Prim13, Piece::Prim11Omega]),
        4,
    ));
    Ok(out)
}

/// Spans of the products gamma_i ^ gamma_j and gamma_i ^ gamma'_j.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanReport<S> {
    /// dim span{gamma_i ^ gamma_j}.
    pub sym2_dim: usize,
    /// The c with Re theta + c omega^2 in that span, if the span meets
    /// <Re theta, omega^2> in a line not equal to <omega^2>.
    pub omega_sq_coefficient: Option<S>,
    /// span = prim(2,2) + <Re theta + c omega^2> for the computed c.
    pub sym2_matches: bool,
    /// Whether Re theta + 8 omega^2 lies in the span.
    pub coefficient_8_in_span: bool,
    /// dim span{gamma_i ^ gamma'_j}.
    pub mixed_dim: usize,
    /// span = prim(1,1)^omega + <Im theta>.
    pub mixed_matches: bool,
}

pub fn span_checks<S: Coeff>(su4: &SU4Structure<S>) -> SpanReport<S> {
    let w = su4.omega();
    let w2 = w.wedge(w);
    let re = su4.theta().re();
    let ap = su4.a_plus();
    let am = su4.a_minus();
    let mut sym2 = Vec::new();
    for i in 0..ap.len() {
        for j in i..ap.len() {
            sym2.push(ap[i].wedge(&ap[j]).to_vector(4));
        }
    }
    let sym2_dim = rank_of(&sym2);

    // Solve sum x_ij gamma_i gamma_j = a Re theta + b omega^2.
    let mut cols = sym2.clone();
    cols.push(re.scale(&S::from_i64(-1)).to_vector(4));
    cols.push(w2.scale(&S::from_i64(-1)).to_vector(4));
    let kernel = Matrix::from_cols(&cols).kernel();
    let n = sym2.len();
    let omega_sq_coefficient = kernel
        .iter()
        .find(|x| !x[n].is_zero())
        .map(|x| x[n + 1].div(&x[n]).expect("nonzero"));

    let p22 = su4.delta22_prim();
    let sym2_matches = omega_sq_coefficient.as_ref().is_some_and(|c| {
        let mut rhs = vectors(&p22, 4);
        rhs.push(re.add(&w2.scale(c)).to_vector(4));
        same_span(&sym2, &rhs)
    });
    let coefficient_8_in_span = in_span(&sym2, &re.add(&w2.scale(&S::from_i64(8))).to_vector(4));

    let mixed: Vec<Vec<S>> = ap
        .iter()
        .flat_map(|a| am.iter().map(move |b| a.wedge(b).to_vector(4)))
        .collect();
    let mixed_dim = rank_of(&mixed);
    let mut rhs: Vec<Vec<S>> = su4
        .delta11_prim()
        .iter()
        .map(|f| f.wedge(w).to_vector(4))
        .collect();
    rhs.push(su4.theta().im().to_vector(4));
    let mixed_matches = same_span(&mixed, &rhs);
    SpanReport {
        sym2_dim,
        omega_sq_coefficient,
        sym2_matches,
        coefficient_8_in_span,
        mixed_dim,
        mixed_matches,
    }
}

impl<S: Coeff> Spin7Structure<S> {
    /// Self-dual part (beta + *beta) / 2.
    pub fn self_dual_part(&self, beta: &Form<S>) -> Form<S> {
        beta.add(&beta.hodge()).scale(&S::from_ratio(1, 2))
    }
}
