//! One exact checker per inequality. Each returns a [`Certificate`] whose
//! verdict comes from [`compare_radicals`] on the two sides.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{
    compare_radicals, conj_exponent, p_mean, ExactError, ExtendedExponent, OrderingProof,
    RadicalSum, Rational,
};
use crate::functions::{CubeSpec, FunctionError, Witness};
use crate::sets::{noninteger_endpoints, weighted_sum_count, SetError, SetExpr};

mod cardinality;
mod functional;
mod riemann;

pub use cardinality::{verify_card_sum, verify_trivial_card};
pub use functional::{
    hks_derived_instance, verify_bbl, verify_bbl_on, verify_hks, verify_hks_sqrt, BblInstance,
    HksInstance,
};
pub use riemann::riemann_limit_demo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {message}")]
    Hypothesis { message: String, witness: Box<Witness> },
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Number(#[from] ExactError),
}

/// Which inequality a request is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// `G((1−λ)K+λL+(−1,1)^n)^{1/n} ≥ (1−λ)G(K)^{1/n}+λG(L)^{1/n}`.
    MainBm,
    /// `αK+βL+[−(q−1)/q,(q−1)/q]^n` with `α=m/q`, `β=p/q`.
    RationalDilation,
    /// `(K+L)/2+[0,1]^n`.
    HalfSum,
    /// No corrector at all; fails in general.
    Naive,
    /// A caller-chosen corrector; no guarantee.
    Corrector,
    BmPmean,
    LemmaEll,
    Bbl,
    Hks,
    HksSqrt,
    CardSum,
    TrivialCard,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::MainBm,
        TheoremId::RationalDilation,
        TheoremId::HalfSum,
        TheoremId::Naive,
        TheoremId::Corrector,
        TheoremId::BmPmean,
        TheoremId::LemmaEll,
        TheoremId::Bbl,
        TheoremId::Hks,
        TheoremId::HksSqrt,
        TheoremId::CardSum,
        TheoremId::TrivialCard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::MainBm => "main_bm",
            TheoremId::RationalDilation => "rational_dilation",
            TheoremId::HalfSum => "half_sum",
            TheoremId::Naive => "naive",
            TheoremId::Corrector => "corrector",
            TheoremId::BmPmean => "bm_pmean",
            TheoremId::LemmaEll => "lemma_ell",
            TheoremId::Bbl => "bbl",
            TheoremId::Hks => "hks",
            TheoremId::HksSqrt => "hks_sqrt",
            TheoremId::CardSum => "card_sum",
            TheoremId::TrivialCard => "trivial_card",
        }
    }

    /// Whether a Violated verdict on valid input would contradict a theorem.
    pub fn is_guaranteed(self) -> bool {
        !matches!(self, TheoremId::Naive | TheoremId::Corrector)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| VerifyError::Precondition(format!("unknown theorem {s:?}")))
    }
}

impl Serialize for TheoremId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    HoldsStrict,
    HoldsEqual,
    Violated,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self != Verdict::Violated
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsStrict => "HoldsStrict",
            Verdict::HoldsEqual => "HoldsEqual",
            Verdict::Violated => "Violated",
        })
    }
}

/// Outcome of checking `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub verdict: Verdict,
    pub lhs: RadicalSum,
    pub rhs: RadicalSum,
    pub witness: Option<Witness>,
    pub proof: OrderingProof,
}

impl Certificate {
    /// Compares the sides; `detail` names the instance in the witness.
    pub fn decide(
        theorem: TheoremId,
        lhs: RadicalSum,
        rhs: RadicalSum,
        detail: impl FnOnce() -> String,
    ) -> Self {
        let ord = compare_radicals(&lhs, &rhs);
        let (verdict, witness) = match ord.relation {
            Ordering::Greater => (Verdict::HoldsStrict, None),
            Ordering::Equal => (
                Verdict::HoldsEqual,
                Some(Witness::Note {
                    message: format!("equality at {}", detail()),
                }),
            ),
            Ordering::Less => (
                Verdict::Violated,
                Some(Witness::Note {
                    message: format!("{}: {} < {}", detail(), lhs, rhs),
                }),
            ),
        };
        Certificate {
            theorem,
            verdict,
            lhs,
            rhs,
            witness,
            proof: ord.proof,
        }
    }

    /// Two-line summary with exact forms and 20-digit approximations.
    pub fn to_text(&self) -> String {
        let mut out = format!("theorem: {}\nverdict: {}\n", self.theorem, self.verdict);
        for (name, v) in [("lhs", &self.lhs), ("rhs", &self.rhs)] {
            out += &format!("{name}: {v}  (approx {})\n", v.approx(20));
        }
        match &self.witness {
            Some(Witness::Note { message }) => out += &format!("witness: {message}\n"),
            Some(w @ Witness::Pair { .. }) => {
                out += &format!("witness: {}\n", describe_witness(w));
            }
            None => {}
        }
        out
    }
}

pub(crate) fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::Pair {
            x,
            y,
            required,
            actual,
        } => format!(
            "x={} y={}: got {} but need {}",
            crate::functions::fmt_point(x),
            crate::functions::fmt_point(y),
            actual,
            required
        ),
        Witness::Note { message } => message.clone(),
    }
}

/// Input for the set inequalities.
///
/// `lambda` is ignored by the rational-dilation form, which reads its
/// weights from `dilation = (m, p, q)` instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyRequest {
    pub theorem: TheoremId,
    pub k: SetExpr,
    pub l: SetExpr,
    pub lambda: Rational,
    pub p: ExtendedExponent,
    pub dilation: Option<(u32, u32, u32)>,
    pub corrector: Option<CubeSpec>,
    /// Skips the `G(K)G(L) > 0` check of the half-sum form.
    pub unguarded: bool,
}

impl VerifyRequest {
    pub fn new(theorem: TheoremId, k: SetExpr, l: SetExpr, lambda: Rational) -> Self {
        VerifyRequest {
            theorem,
            k,
            l,
            lambda,
            p: ExtendedExponent::PosInf,
            dilation: None,
            corrector: None,
            unguarded: false,
        }
    }

    pub fn with_p(mut self, p: ExtendedExponent) -> Self {
        self.p = p;
        self
    }

    pub fn with_dilation(mut self, m: u32, p: u32, q: u32) -> Self {
        self.dilation = Some((m, p, q));
        self
    }

    pub fn with_corrector(mut self, c: CubeSpec) -> Self {
        self.corrector = Some(c);
        self
    }

    pub fn unguarded(mut self) -> Self {
        self.unguarded = true;
        self
    }
}

/// Dispatches on `req.theorem` for every inequality that takes two sets.
pub fn verify(req: &VerifyRequest) -> Result<Certificate, VerifyError> {
    match req.theorem {
        TheoremId::BmPmean => verify_bm_pmean(req),
        TheoremId::CardSum => verify_card_sum(&req.k, &req.l),
        TheoremId::TrivialCard => verify_trivial_card(&req.k, &req.l),
        TheoremId::HksSqrt => verify_hks_sqrt(&req.k, &req.l),
        _ => verify_bm(req),
    }
}

pub(crate) fn count(s: &SetExpr) -> Result<BigInt, VerifyError> {
    Ok(weighted_sum_count(&[(s, &Rational::one())])?)
}

pub(crate) fn rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

fn check_pair(k: &SetExpr, l: &SetExpr) -> Result<usize, VerifyError> {
    if k.dim() != l.dim() {
        return Err(SetError::DimensionMismatch {
            expected: k.dim(),
            got: l.dim(),
        }
        .into());
    }
    if k.is_empty() || l.is_empty() {
        return Err(VerifyError::Precondition("K and L must be non-empty".into()));
    }
    Ok(k.dim())
}

fn require_positive(gk: &BigInt, gl: &BigInt) -> Result<(), VerifyError> {
    if gk.is_positive() && gl.is_positive() {
        Ok(())
    } else {
        Err(VerifyError::Precondition("requires G_n(K)G_n(L)>0".into()))
    }
}

/// Weights and corrector for one of the set forms.
fn bm_setup(req: &VerifyRequest) -> Result<(Rational, Rational, CubeSpec), VerifyError> {
    let fixed = |c: CubeSpec| -> Result<CubeSpec, VerifyError> {
        match &req.corrector {
            Some(o) if *o != c => Err(VerifyError::Precondition(format!(
                "{} fixes the corrector to {c}",
                req.theorem
            ))),
            _ => Ok(c),
        }
    };
    let convex = || -> Result<(Rational, Rational), VerifyError> {
        crate::exactnum::check_lambda(&req.lambda)?;
        Ok((Rational::one() - &req.lambda, req.lambda.clone()))
    };
    Ok(match req.theorem {
        TheoremId::MainBm => {
            let (a, b) = convex()?;
            (a, b, fixed(CubeSpec::open_unit())?)
        }
        TheoremId::Naive => {
            let (a, b) = convex()?;
            (a, b, fixed(CubeSpec::None)?)
        }
        TheoremId::HalfSum => {
            if req.lambda != Rational::new(1.into(), 2.into()) {
                return Err(VerifyError::Precondition(
                    "half_sum requires lambda = 1/2".into(),
                ));
            }
            let (a, b) = convex()?;
            (a, b, fixed(CubeSpec::ClosedUnit)?)
        }
        TheoremId::Corrector => {
            let (a, b) = convex()?;
            let c = req.corrector.clone().ok_or_else(|| {
                VerifyError::Precondition("corrector theorem needs a corrector cube".into())
            })?;
            (a, b, c)
        }
        TheoremId::RationalDilation => {
            let (m, p, q) = req.dilation.ok_or_else(|| {
                VerifyError::Precondition("rational_dilation needs (m, p, q)".into())
            })?;
            if m == 0 || p == 0 || q == 0 {
                return Err(VerifyError::Precondition(
                    "m, p, q must be positive integers".into(),
                ));
            }
            if u64::from(m) + u64::from(p) > u64::from(q) {
                return Err(VerifyError::Precondition(
                    "requires m+p <= q so that alpha+beta <= 1".into(),
                ));
            }
            let q_big = BigInt::from(q);
            let r = Rational::new(BigInt::from(q - 1), q_big.clone());
            (
                Rational::new(m.into(), q_big.clone()),
                Rational::new(p.into(), q_big),
                fixed(CubeSpec::ClosedSym(r))?,
            )
        }
        other => {
            return Err(VerifyError::Precondition(format!(
                "{other} is not a set inequality with a corrector"
            )))
        }
    })
}

/// `G_n(αK+βL+C)^{1/n}` against `αG_n(K)^{1/n}+βG_n(L)^{1/n}` for the main
/// theorem, the rational-dilation and half-sum forms, the naive form and an
/// arbitrary corrector.
pub fn verify_bm(req: &VerifyRequest) -> Result<Certificate, VerifyError> {
    let n = check_pair(&req.k, &req.l)?;
    let (alpha, beta, cube) = bm_setup(req)?;
    let gk = count(&req.k)?;
    let gl = count(&req.l)?;
    let guarded = match req.theorem {
        TheoremId::RationalDilation => true,
        TheoremId::HalfSum => !req.unguarded,
        _ => false,
    };
    if guarded {
        require_positive(&gk, &gl)?;
    }
    let one = Rational::one();
    let cube_set = cube.to_set(n)?;
    let mut terms = vec![(&req.k, &alpha), (&req.l, &beta)];
    if let Some(c) = &cube_set {
        terms.push((c, &one));
    }
    let gm = weighted_sum_count(&terms)?;
    let deg = u32::try_from(n).map_err(|_| SetError::TooLarge)?;
    let lhs = RadicalSum::root(&rat(&gm), deg)?;
    let rhs = RadicalSum::new(deg, &[(alpha.clone(), rat(&gk)), (beta.clone(), rat(&gl))])?;
    Ok(Certificate::decide(req.theorem, lhs, rhs, || {
        let plus = match cube {
            CubeSpec::None => String::new(),
            c => format!("+{c}"),
        };
        format!("G_{n}({alpha}K+{beta}L{plus})={gm}, G_{n}(K)={gk}, G_{n}(L)={gl}")
    }))
}

/// `G_n((1−λ)K+λL+(−1,1)^n)` against `M_{p/(np+1)}(G_n(K), G_n(L), λ)`.
pub fn verify_bm_pmean(req: &VerifyRequest) -> Result<Certificate, VerifyError> {
    let n = check_pair(&req.k, &req.l)?;
    crate::exactnum::check_lambda(&req.lambda)?;
    let deg = u32::try_from(n).map_err(|_| SetError::TooLarge)?;
    let q = conj_exponent(&req.p, deg)?;
    let mu = Rational::one() - &req.lambda;
    let one = Rational::one();
    let cube = SetExpr::from_box(
        CubeSpec::open_unit()
            .to_cuboid(n)?
            .expect("open cube is present"),
    );
    let gm = weighted_sum_count(&[(&req.k, &mu), (&req.l, &req.lambda), (&cube, &one)])?;
    let gk = count(&req.k)?;
    let gl = count(&req.l)?;
    let lhs = RadicalSum::from_rational(&rat(&gm))?;
    let rhs = p_mean(&rat(&gk), &rat(&gl), &req.lambda, &q)?;
    Ok(Certificate::decide(TheoremId::BmPmean, lhs, rhs, || {
        format!(
            "G_{n}(M)={gm}, G_{n}(K)={gk}, G_{n}(L)={gl}, lambda={}, p={}",
            req.lambda, req.p
        )
    }))
}

/// `G_1(M)+ℓ(M)` against `(1−λ)G_1(K)+λG_1(L)` for a union `M` of disjoint
/// compact intervals containing `(1−λ)K+λL`.
pub fn verify_lemma_ell(
    k: &SetExpr,
    l: &SetExpr,
    m: &SetExpr,
    lambda: &Rational,
) -> Result<Certificate, VerifyError> {
    for s in [k, l, m] {
        if s.dim() != 1 {
            return Err(SetError::DimensionMismatch {
                expected: 1,
                got: s.dim(),
            }
            .into());
        }
    }
    check_pair(k, l)?;
    crate::exactnum::check_lambda(lambda)?;
    let pieces = m.normalize_1d(false)?;
    let ell = noninteger_endpoints(&pieces)
        .map_err(|e| VerifyError::Precondition(format!("M must be compact: {e}")))?;
    let m_norm = SetExpr::from_boxes(
        pieces
            .iter()
            .map(|iv| crate::sets::Cuboid::new(vec![iv.clone()]))
            .collect::<Result<_, _>>()?,
    )?;
    let mu = Rational::one() - lambda;
    let combo = k.scale(&mu)?.minkowski_sum(&l.scale(lambda)?)?;
    if !m_norm.contains_piecewise(&combo) {
        return Err(VerifyError::Precondition(
            "requires (1-lambda)K+lambda L contained in M".into(),
        ));
    }
    let gm: BigInt = pieces.iter().map(|iv| iv.lattice_count()).sum();
    let gk = count(k)?;
    let gl = count(l)?;
    let lhs_q = rat(&gm) + Rational::from_integer(BigInt::from(ell));
    let rhs_q = &mu * rat(&gk) + lambda * rat(&gl);
    let lhs = RadicalSum::from_rational(&lhs_q)?;
    let rhs = RadicalSum::from_rational(&rhs_q)?;
    Ok(Certificate::decide(TheoremId::LemmaEll, lhs, rhs, || {
        format!("G_1(M)={gm}, l(M)={ell}, G_1(K)={gk}, G_1(L)={gl}")
    }))
}
