//! Functional forms: the p-mean inequality for lattice sums with the
//! sup-convolution, and the floor/ceil product inequality on `Z^n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{check_pair, count, describe_witness, rat, Certificate, TheoremId, VerifyError};
use crate::exactnum::{
    conj_exponent, p_mean, rat_ceil, rat_floor, ExtendedExponent, RadicalSum, Rational,
};
use crate::functions::{
    check_hypothesis, lattice_sum, sup_conv, CubeSpec, Evaluate, FunctionError,
    PointMassFunction, Witness,
};
use crate::sets::{weighted_sum_count, weighted_sum_points, LatticeBasis, Point, SetError, SetExpr};

/// `f`, `g`, `h` with the sets and parameters of one lattice-sum inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BblInstance {
    pub f: PointMassFunction,
    pub g: PointMassFunction,
    pub h: PointMassFunction,
    #[serde(rename = "K")]
    pub k: SetExpr,
    #[serde(rename = "L")]
    pub l: SetExpr,
    #[serde(with = "crate::exactnum::serde_rational")]
    pub lambda: Rational,
    pub p: ExtendedExponent,
}

impl BblInstance {
    /// All data composed with `φ(x) = Bx`, i.e. moved to `Z^n` by `φ^{-1}`.
    pub fn pull_back(&self, basis: &LatticeBasis) -> Result<BblInstance, VerifyError> {
        Ok(BblInstance {
            f: self.f.pull_back(basis)?,
            g: self.g.pull_back(basis)?,
            h: self.h.pull_back(basis)?,
            k: self.k.lattice_transform(basis)?,
            l: self.l.lattice_transform(basis)?,
            lambda: self.lambda.clone(),
            p: self.p.clone(),
        })
    }
}

fn dims_agree(dims: &[usize]) -> Result<usize, VerifyError> {
    let n = dims[0];
    match dims.iter().find(|&&d| d != n) {
        Some(&d) => Err(SetError::DimensionMismatch {
            expected: n,
            got: d,
        }
        .into()),
        None => Ok(n),
    }
}

fn to_point(z: &[i64]) -> Point {
    z.iter().map(|&c| Rational::from_integer(c.into())).collect()
}

/// `Σ_{z ∈ M∩Z^n} h^□(z)` with `M = (1−λ)K+λL+(−1,1)^n` against
/// `M_{p/(np+1)}(Σ_K f, Σ_L g, λ)`, after checking the hypothesis on `h`.
pub fn verify_bbl(inst: &BblInstance) -> Result<Certificate, VerifyError> {
    let n = dims_agree(&[
        inst.f.dim(),
        inst.g.dim(),
        inst.h.dim(),
        inst.k.dim(),
        inst.l.dim(),
    ])?;
    check_pair(&inst.k, &inst.l)?;
    crate::exactnum::check_lambda(&inst.lambda)?;
    let q = conj_exponent(&inst.p, n as u32)?;
    if let Some(w) = check_hypothesis(
        &inst.f, &inst.g, &inst.h, &inst.k, &inst.l, &inst.lambda, &inst.p,
    )? {
        return Err(VerifyError::Hypothesis {
            message: describe_witness(&w),
            witness: Box::new(w),
        });
    }
    let cube_spec = CubeSpec::open_unit();
    let cube = cube_spec.to_set(n)?.expect("open cube is present");
    let mu = Rational::one() - &inst.lambda;
    let one = Rational::one();
    let omega = weighted_sum_points(&[(&inst.k, &mu), (&inst.l, &inst.lambda), (&cube, &one)])?;
    let conv = sup_conv(&inst.h, &cube_spec)?;
    let lhs_sum = omega
        .iter()
        .map(|z| conv.value_at(&to_point(z)))
        .fold(Rational::zero(), |a, v| a + v);
    let sf = lattice_sum(&inst.f, &inst.k)?;
    let sg = lattice_sum(&inst.g, &inst.l)?;
    let lhs = RadicalSum::from_rational(&lhs_sum)?;
    let rhs = p_mean(&sf, &sg, &inst.lambda, &q)?;
    Ok(Certificate::decide(TheoremId::Bbl, lhs, rhs, || {
        format!(
            "sum h^box over M = {lhs_sum}, sum_K f = {sf}, sum_L g = {sg}, lambda={}, p={}",
            inst.lambda, inst.p
        )
    }))
}

/// The same inequality on the lattice `BZ^n`, checked on the pulled-back data.
pub fn verify_bbl_on(inst: &BblInstance, basis: &LatticeBasis) -> Result<Certificate, VerifyError> {
    verify_bbl(&inst.pull_back(basis)?)
}

/// Functions on `Z^n` for the floor/ceil product inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HksInstance {
    pub f: PointMassFunction,
    pub g: PointMassFunction,
    pub h: PointMassFunction,
    pub k: PointMassFunction,
    #[serde(with = "crate::exactnum::serde_rational")]
    pub lambda: Rational,
    /// Region holding the supports of `f` and `g`.
    pub window: SetExpr,
}

/// Integer points where `f` may be positive.
fn carrier(f: &PointMassFunction) -> Result<BTreeSet<Vec<i64>>, VerifyError> {
    let mut pts = BTreeSet::new();
    for p in f.support().keys() {
        if p.iter().any(|x| !x.is_integer()) {
            return Err(VerifyError::Precondition(format!(
                "function on Z^n has support at non-integer point {}",
                crate::functions::fmt_point(p)
            )));
        }
        pts.insert(
            p.iter()
                .map(|x| crate::sets::to_i64(&x.to_integer()))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if let Some(c) = f.char_part() {
        pts.extend(c.lattice_points()?);
    }
    Ok(pts)
}

fn total_mass(f: &PointMassFunction) -> Result<Rational, VerifyError> {
    Ok(carrier(f)?
        .iter()
        .map(|z| f.value_at(&to_point(z)))
        .fold(Rational::zero(), |a, v| a + v))
}

fn positive_in_window(
    f: &PointMassFunction,
    window: &SetExpr,
) -> Result<Vec<(Point, Rational)>, VerifyError> {
    let mut out = Vec::new();
    for z in carrier(f)? {
        let x = to_point(&z);
        let v = f.value_at(&x);
        if !v.is_positive() {
            continue;
        }
        if !window.contains(&x) {
            return Err(VerifyError::Precondition(format!(
                "support point {} lies outside the window",
                crate::functions::fmt_point(&x)
            )));
        }
        out.push((x, v));
    }
    Ok(out)
}

/// `(Σh)(Σk) ≥ (Σf)(Σg)` given
/// `h(⌊(1−λ)x+λy⌋) k(⌈λx+(1−λ)y⌉) ≥ f(x)g(y)` on all pairs.
pub fn verify_hks(inst: &HksInstance) -> Result<Certificate, VerifyError> {
    dims_agree(&[
        inst.f.dim(),
        inst.g.dim(),
        inst.h.dim(),
        inst.k.dim(),
        inst.window.dim(),
    ])?;
    crate::exactnum::check_lambda(&inst.lambda)?;
    let lambda = &inst.lambda;
    let mu = Rational::one() - lambda;
    let fv = positive_in_window(&inst.f, &inst.window)?;
    let gv = positive_in_window(&inst.g, &inst.window)?;
    for (x, a) in &fv {
        for (y, b) in &gv {
            let lo: Point = x
                .iter()
                .zip(y)
                .map(|(s, t)| Rational::from_integer(rat_floor(&(&mu * s + lambda * t))))
                .collect();
            let hi: Point = x
                .iter()
                .zip(y)
                .map(|(s, t)| Rational::from_integer(rat_ceil(&(lambda * s + &mu * t))))
                .collect();
            let actual = inst.h.value_at(&lo) * inst.k.value_at(&hi);
            let required = a * b;
            if actual < required {
                let w = Witness::Pair {
                    x: x.clone(),
                    y: y.clone(),
                    required: RadicalSum::from_rational(&required)?,
                    actual,
                };
                return Err(VerifyError::Hypothesis {
                    message: describe_witness(&w),
                    witness: Box::new(w),
                });
            }
        }
    }
    let (sf, sg) = (total_mass(&inst.f)?, total_mass(&inst.g)?);
    let (sh, sk) = (total_mass(&inst.h)?, total_mass(&inst.k)?);
    let lhs = RadicalSum::from_rational(&(&sh * &sk))?;
    let rhs = RadicalSum::from_rational(&(&sf * &sg))?;
    Ok(Certificate::decide(TheoremId::Hks, lhs, rhs, || {
        format!("sum h={sh}, sum k={sk}, sum f={sf}, sum g={sg}")
    }))
}

fn half_sum_plus(k: &SetExpr, l: &SetExpr, cube: CubeSpec) -> Result<SetExpr, VerifyError> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let c = cube
        .to_set(k.dim())?
        .ok_or_else(|| FunctionError::BadCube(cube.to_string()))?;
    Ok(k
        .scale(&half)?
        .minkowski_sum(&l.scale(&half)?)?
        .minkowski_sum(&c)?)
}

/// `f = χ_K`, `g = χ_L`, `h = χ_{(K+L)/2+(−1,0]^n}`, `k = χ_{(K+L)/2+[0,1)^n}`
/// at `λ = 1/2`, with `K ∪ L` as the window.
pub fn hks_derived_instance(k: &SetExpr, l: &SetExpr) -> Result<HksInstance, VerifyError> {
    let n = check_pair(k, l)?;
    let window = SetExpr::new(
        n,
        k.boxes().iter().chain(l.boxes()).cloned().collect(),
        k.points().iter().chain(l.points()).cloned(),
    )?;
    Ok(HksInstance {
        f: PointMassFunction::characteristic(k.clone()),
        g: PointMassFunction::characteristic(l.clone()),
        h: PointMassFunction::characteristic(half_sum_plus(k, l, CubeSpec::HalfOpenNegUnit)?),
        k: PointMassFunction::characteristic(half_sum_plus(k, l, CubeSpec::HalfOpenUnit)?),
        lambda: Rational::new(BigInt::one(), BigInt::from(2)),
        window,
    })
}

/// `G_n((K+L)/2+[0,1]^n)` against `√(G_n(K)G_n(L))`.
pub fn verify_hks_sqrt(k: &SetExpr, l: &SetExpr) -> Result<Certificate, VerifyError> {
    let n = check_pair(k, l)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let one = Rational::one();
    let cube = CubeSpec::ClosedUnit.to_set(n)?.expect("unit cube is present");
    let gm = weighted_sum_count(&[(k, &half), (l, &half), (&cube, &one)])?;
    let gk = count(k)?;
    let gl = count(l)?;
    let lhs = RadicalSum::from_rational(&rat(&gm))?;
    let rhs = RadicalSum::root(&rat(&(&gk * &gl)), 2)?;
    Ok(Certificate::decide(TheoremId::HksSqrt, lhs, rhs, || {
        format!("G_{n}((K+L)/2+[0,1]^{n})={gm}, G_{n}(K)={gk}, G_{n}(L)={gl}")
    }))
}
