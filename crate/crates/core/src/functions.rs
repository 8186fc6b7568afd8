//! Finitely supported nonnegative functions on rational points, their
//! sup-convolutions with cubes, lattice sums and the p-mean hypothesis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{
    compare_radicals, p_mean, parse_rational, ExactError, ExtendedExponent, RadicalSum, Rational,
};
use crate::sets::{Cuboid, Interval1D, Point, SetError, SetExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("function values must be nonnegative, got {0}")]
    NegativeValue(String),
    #[error("cannot parse cube {0:?}")]
    BadCube(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Number(#[from] ExactError),
}

/// Corrector cube added to a set (or convolved with a function).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubeSpec {
    /// `(-r, r)^n`
    OpenSym(Rational),
    /// `[-r, r]^n`
    ClosedSym(Rational),
    /// `[0, 1]^n`
    ClosedUnit,
    /// `[0, 1)^n`
    HalfOpenUnit,
    /// `(-1, 0]^n`
    HalfOpenNegUnit,
    /// `I^n` for an arbitrary interval `I`.
    Uniform(Interval1D),
    /// An explicit box, e.g. `(-1,1)^{n-1} × {0}`.
    Explicit(Cuboid),
    /// No corrector.
    None,
}

impl CubeSpec {
    pub fn open_unit() -> Self {
        CubeSpec::OpenSym(Rational::one())
    }

    /// The cube in dimension `n`; `None` for the absent corrector.
    pub fn to_cuboid(&self, n: usize) -> Result<Option<Cuboid>, FunctionError> {
        let zero = Rational::zero();
        let one = Rational::one();
        let side = match self {
            CubeSpec::None => return Ok(None),
            CubeSpec::Explicit(b) => {
                if b.dim() != n {
                    return Err(FunctionError::DimensionMismatch {
                        expected: n,
                        got: b.dim(),
                    });
                }
                return Ok(Some(b.clone()));
            }
            CubeSpec::OpenSym(r) => Interval1D::open(-r.clone(), r.clone())?,
            CubeSpec::ClosedSym(r) => Interval1D::closed(-r.clone(), r.clone())?,
            CubeSpec::ClosedUnit => Interval1D::closed(zero, one)?,
            CubeSpec::HalfOpenUnit => Interval1D::new(zero, one, false, true)?,
            CubeSpec::HalfOpenNegUnit => Interval1D::new(-one, zero, true, false)?,
            CubeSpec::Uniform(iv) => iv.clone(),
        };
        Ok(Some(Cuboid::cube(n, side)))
    }

    pub fn to_set(&self, n: usize) -> Result<Option<SetExpr>, FunctionError> {
        Ok(self.to_cuboid(n)?.map(SetExpr::from_box))
    }

    pub fn contains_origin(&self, n: usize) -> Result<bool, FunctionError> {
        Ok(match self.to_cuboid(n)? {
            None => true,
            Some(b) => b.contains(&vec![Rational::zero(); n]),
        })
    }
}

impl fmt::Display for CubeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeSpec::OpenSym(r) => write!(f, "open:{r}"),
            CubeSpec::ClosedSym(r) => write!(f, "closed:{r}"),
            CubeSpec::ClosedUnit => f.write_str("unit"),
            CubeSpec::HalfOpenUnit => f.write_str("halfopen"),
            CubeSpec::HalfOpenNegUnit => f.write_str("halfopen-neg"),
            CubeSpec::Uniform(iv) => write!(f, "interval:{iv}"),
            CubeSpec::Explicit(b) => write!(f, "box:{b}"),
            CubeSpec::None => f.write_str("none"),
        }
    }
}

fn parse_interval(s: &str) -> Option<Interval1D> {
    let s = s.trim();
    let lo_open = match s.chars().next()? {
        '(' => true,
        '[' => false,
        _ => return None,
    };
    let hi_open = match s.chars().last()? {
        ')' => true,
        ']' => false,
        _ => return None,
    };
    let inner = &s[1..s.len() - 1];
    let (lo, hi) = inner.split_once(',')?;
    Interval1D::new(
        parse_rational(lo).ok()?,
        parse_rational(hi).ok()?,
        lo_open,
        hi_open,
    )
    .ok()
}

impl FromStr for CubeSpec {
    type Err = FunctionError;

    /// `open:r`, `closed:r`, `unit`, `halfopen`, `halfopen-neg`, `none`,
    /// `interval:[a,b)` or `box:[a,b]x(c,d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FunctionError::BadCube(s.to_string());
        let positive = |r: &str| -> Result<Rational, FunctionError> {
            let r = parse_rational(r).map_err(|_| bad())?;
            if r.is_positive() {
                Ok(r)
            } else {
                Err(bad())
            }
        };
        let t = s.trim();
        match t {
            "unit" => return Ok(CubeSpec::ClosedUnit),
            "halfopen" => return Ok(CubeSpec::HalfOpenUnit),
            "halfopen-neg" => return Ok(CubeSpec::HalfOpenNegUnit),
            "none" => return Ok(CubeSpec::None),
            _ => {}
        }
        let (kind, arg) = t.split_once(':').ok_or_else(bad)?;
        match kind {
            "open" => Ok(CubeSpec::OpenSym(positive(arg)?)),
            "closed" => Ok(CubeSpec::ClosedSym(positive(arg)?)),
            "interval" => parse_interval(arg).map(CubeSpec::Uniform).ok_or_else(bad),
            "box" => {
                let factors: Option<Vec<Interval1D>> = arg.split('x').map(parse_interval).collect();
                factors
                    .and_then(|f| Cuboid::new(f).ok())
                    .map(CubeSpec::Explicit)
                    .ok_or_else(bad)
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for CubeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CubeSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Anything that can be evaluated at rational points.
pub trait Evaluate {
    fn dim(&self) -> usize;
    fn value_at(&self, x: &[Rational]) -> Rational;
}

/// `x ↦ max(support(x), 1_{char}(x))` with finitely many positive support values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMassFunction {
    dim: usize,
    support: BTreeMap<Point, Rational>,
    char_part: Option<SetExpr>,
}

fn check_dim(expected: usize, got: usize) -> Result<(), FunctionError> {
    if expected == got {
        Ok(())
    } else {
        Err(FunctionError::DimensionMismatch { expected, got })
    }
}

impl PointMassFunction {
    /// Zero values are dropped; a repeated point keeps the last value.
    pub fn new(
        dim: usize,
        support: impl IntoIterator<Item = (Point, Rational)>,
        char_part: Option<SetExpr>,
    ) -> Result<Self, FunctionError> {
        let mut map = BTreeMap::new();
        for (p, v) in support {
            check_dim(dim, p.len())?;
            if v.is_negative() {
                return Err(FunctionError::NegativeValue(v.to_string()));
            }
            if v.is_zero() {
                map.remove(&p);
            } else {
                map.insert(p, v);
            }
        }
        if let Some(c) = &char_part {
            check_dim(dim, c.dim())?;
        }
        Ok(PointMassFunction {
            dim,
            support: map,
            char_part,
        })
    }

    /// `χ_M`, kept symbolic.
    pub fn characteristic(m: SetExpr) -> Self {
        PointMassFunction {
            dim: m.dim(),
            support: BTreeMap::new(),
            char_part: Some(m),
        }
    }

    pub fn zero(dim: usize) -> Self {
        PointMassFunction {
            dim,
            support: BTreeMap::new(),
            char_part: None,
        }
    }

    pub fn support(&self) -> &BTreeMap<Point, Rational> {
        &self.support
    }

    pub fn char_part(&self) -> Option<&SetExpr> {
        self.char_part.as_ref()
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational, FunctionError> {
        check_dim(self.dim, x.len())?;
        Ok(self.value_at(x))
    }

    /// `c · f` for `c > 0`; only defined without a characteristic part.
    pub fn scaled(&self, c: &Rational) -> Result<Self, FunctionError> {
        if self.char_part.is_some() {
            return Err(FunctionError::Unsupported(
                "scaling a characteristic part".into(),
            ));
        }
        Self::new(
            self.dim,
            self.support.iter().map(|(p, v)| (p.clone(), v * c)),
            None,
        )
    }

    /// `f ∘ φ` where `φ(x) = Bx`: support and characteristic part move by `φ^{-1}`.
    pub fn pull_back(&self, basis: &crate::sets::LatticeBasis) -> Result<Self, FunctionError> {
        check_dim(self.dim, basis.dim())?;
        let support: Vec<(Point, Rational)> = self
            .support
            .iter()
            .map(|(p, v)| (basis.preimage(p), v.clone()))
            .collect();
        let char_part = self
            .char_part
            .as_ref()
            .map(|c| c.lattice_transform(basis))
            .transpose()?;
        Self::new(self.dim, support, char_part)
    }
}

impl Evaluate for PointMassFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value_at(&self, x: &[Rational]) -> Rational {
        let v = self.support.get(x).cloned().unwrap_or_else(Rational::zero);
        if v < Rational::one() && self.char_part.as_ref().is_some_and(|c| c.contains(x)) {
            Rational::one()
        } else {
            v
        }
    }
}

/// `h^C(z) = sup { h(p) : z ∈ p + C }`, evaluated lazily.
#[derive(Clone, Debug)]
pub struct SupConv<'a> {
    h: &'a PointMassFunction,
    cube: Option<Cuboid>,
    char_sum: Option<SetExpr>,
}

/// Sup-convolution of `h` with the cube `C`: support point `p` reaches every
/// `z ∈ p + C`, and a characteristic part on `M` becomes one on `M + C`.
pub fn sup_conv<'a>(h: &'a PointMassFunction, c: &CubeSpec) -> Result<SupConv<'a>, FunctionError> {
    let cube = c.to_cuboid(h.dim)?;
    let char_sum = match (&h.char_part, &cube) {
        (Some(m), Some(b)) => Some(m.minkowski_sum(&SetExpr::from_box(b.clone()))?),
        (Some(m), None) => Some(m.clone()),
        (None, _) => None,
    };
    Ok(SupConv { h, cube, char_sum })
}

impl Evaluate for SupConv<'_> {
    fn dim(&self) -> usize {
        self.h.dim
    }

    fn value_at(&self, z: &[Rational]) -> Rational {
        let mut best = Rational::zero();
        if self.char_sum.as_ref().is_some_and(|c| c.contains(z)) {
            best = Rational::one();
        }
        for (p, v) in &self.h.support {
            if v <= &best {
                continue;
            }
            let reach = match &self.cube {
                None => p.as_slice() == z,
                Some(b) => {
                    let d: Point = z.iter().zip(p).map(|(a, b)| a - b).collect();
                    b.contains(&d)
                }
            };
            if reach {
                best = v.clone();
            }
        }
        best
    }
}

/// Values of `φ` at the lattice points of `Ω`, in lexicographic order.
fn lattice_values<F: Evaluate + ?Sized>(
    phi: &F,
    omega: &SetExpr,
) -> Result<Vec<Rational>, FunctionError> {
    check_dim(phi.dim(), omega.dim())?;
    Ok(omega
        .lattice_points()?
        .iter()
        .map(|z| {
            let x: Point = z
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect();
            phi.value_at(&x)
        })
        .collect())
}

/// `Σ_{z ∈ Ω ∩ Z^n} φ(z)`.
pub fn lattice_sum<F: Evaluate + ?Sized>(
    phi: &F,
    omega: &SetExpr,
) -> Result<Rational, FunctionError> {
    Ok(lattice_values(phi, omega)?
        .into_iter()
        .fold(Rational::zero(), |a, v| a + v))
}

/// Layer-cake form `Σ (k_i − k_{i−1}) · G_n({x ∈ Ω : φ(x) ≥ k_i})` over the
/// increasing positive values `k_i` of `φ` on `Ω ∩ Z^n`.
pub fn cavalieri_sum<F: Evaluate + ?Sized>(
    phi: &F,
    omega: &SetExpr,
) -> Result<Rational, FunctionError> {
    let values = lattice_values(phi, omega)?;
    let mut ladder: Vec<&Rational> = values.iter().filter(|v| v.is_positive()).collect();
    ladder.sort();
    ladder.dedup();
    let mut total = Rational::zero();
    let mut prev = Rational::zero();
    for k in ladder {
        let level = values.iter().filter(|v| *v >= k).count();
        total += (k - &prev) * Rational::from_integer(BigInt::from(level));
        prev = k.clone();
    }
    Ok(total)
}

/// Why a hypothesis check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `h((1−λ)x+λy) = actual < required = M_p(f(x), g(y), λ)`.
    Pair {
        #[serde(with = "crate::exactnum::serde_rational_vec")]
        x: Point,
        #[serde(with = "crate::exactnum::serde_rational_vec")]
        y: Point,
        required: RadicalSum,
        #[serde(with = "crate::exactnum::serde_rational")]
        actual: Rational,
    },
    Note {
        message: String,
    },
}

fn combine(x: &[Rational], y: &[Rational], lambda: &Rational) -> Point {
    let mu = Rational::one() - lambda;
    x.iter().zip(y).map(|(a, b)| &mu * a + lambda * b).collect()
}

/// Support points of `f` inside `K` with their values.
fn support_in<'a>(
    f: &'a PointMassFunction,
    k: &'a SetExpr,
) -> impl Iterator<Item = (&'a Point, Rational)> + 'a {
    f.support
        .keys()
        .filter(|x| k.contains(x))
        .map(|x| (x, f.value_at(x)))
}

/// Checks `h((1−λ)x+λy) ≥ M_p(f(x), g(y), λ)` for `x ∈ K`, `y ∈ L`.
///
/// Pairs of support points are checked one by one; pairs with `f(x)g(y) = 0`
/// impose nothing. Characteristic parts are handled by set containment: the
/// combination of `f`'s and `g`'s characteristic parts must lie in `h`'s,
/// and a support point paired with a characteristic part needs a mean of at
/// most 1 over a set that `h`'s characteristic part covers.
pub fn check_hypothesis(
    f: &PointMassFunction,
    g: &PointMassFunction,
    h: &PointMassFunction,
    k: &SetExpr,
    l: &SetExpr,
    lambda: &Rational,
    p: &ExtendedExponent,
) -> Result<Option<Witness>, FunctionError> {
    let n = f.dim;
    for d in [g.dim, h.dim, k.dim(), l.dim()] {
        check_dim(n, d)?;
    }
    crate::exactnum::check_lambda(lambda)?;
    let mut mean_cache: BTreeMap<(Rational, Rational), RadicalSum> = BTreeMap::new();
    let mut mean = |a: &Rational, b: &Rational| -> Result<RadicalSum, FunctionError> {
        if let Some(m) = mean_cache.get(&(a.clone(), b.clone())) {
            return Ok(m.clone());
        }
        let m = p_mean(a, b, lambda, p)?;
        mean_cache.insert((a.clone(), b.clone()), m.clone());
        Ok(m)
    };
    let below = |actual: &Rational, required: &RadicalSum| -> Result<bool, FunctionError> {
        let a = RadicalSum::from_rational(actual)?;
        Ok(compare_radicals(&a, required).relation == Ordering::Less)
    };
    for (x, a) in support_in(f, k) {
        for (y, b) in support_in(g, l) {
            let required = mean(&a, &b)?;
            if required.is_zero() {
                continue;
            }
            let z = combine(x, y, lambda);
            let actual = h.value_at(&z);
            if below(&actual, &required)? {
                return Ok(Some(Witness::Pair {
                    x: x.clone(),
                    y: y.clone(),
                    required,
                    actual,
                }));
            }
        }
    }
    let fk = f.char_part.as_ref().map(|c| c.intersect(k)).transpose()?;
    let gl = g.char_part.as_ref().map(|c| c.intersect(l)).transpose()?;
    let mu = Rational::one() - lambda;
    let covered = |s: &SetExpr| -> bool {
        let h_char = h.char_part.as_ref();
        s.boxes()
            .iter()
            .all(|b| h_char.is_some_and(|c| c.contains_piecewise(&SetExpr::from_box(b.clone()))))
            && s.points().iter().all(|z| h.value_at(z) >= Rational::one())
    };
    if let (Some(fk), Some(gl)) = (&fk, &gl) {
        if !fk.is_empty() && !gl.is_empty() {
            let s = fk.scale(&mu)?.minkowski_sum(&gl.scale(lambda)?)?;
            if !covered(&s) {
                return Ok(Some(Witness::Note {
                    message:
                        "combination of the characteristic parts of f and g is not covered by h"
                            .into(),
                }));
            }
        }
    }
    // support point of one function against the characteristic part of the other
    let mixed =
        |sup: &PointMassFunction, sup_set: &SetExpr, chr: &Option<SetExpr>, sup_first: bool| {
            let mut out = Vec::new();
            if let Some(c) = chr {
                if c.is_empty() {
                    return out;
                }
                for (x, a) in support_in(sup, sup_set) {
                    out.push((x.clone(), a, c.clone(), sup_first));
                }
            }
            out
        };
    let cases = mixed(f, k, &gl, true)
        .into_iter()
        .chain(mixed(g, l, &fk, false));
    for (x, a, c, sup_first) in cases {
        let one = Rational::one();
        let required = if sup_first {
            mean(&a, &one)?
        } else {
            mean(&one, &a)?
        };
        if required.is_zero() {
            continue;
        }
        let pt = SetExpr::from_points(n, [x.clone()])?;
        let s = if sup_first {
            pt.scale(&mu)?.minkowski_sum(&c.scale(lambda)?)?
        } else {
            c.scale(&mu)?.minkowski_sum(&pt.scale(lambda)?)?
        };
        // isolated points of the characteristic part behave like support points
        for z in s.points() {
            if below(&h.value_at(z), &required)? {
                return Ok(Some(Witness::Note {
                    message: format!(
                        "support point {} fails against a characteristic part",
                        fmt_point(&x)
                    ),
                }));
            }
        }
        let boxes_ok = s.boxes().is_empty()
            || (!below(&one, &required)? && covered(&SetExpr::new(n, s.boxes().to_vec(), [])?));
        if !boxes_ok {
            return Ok(Some(Witness::Note {
                message: format!(
                    "support point {} paired with a characteristic part needs h >= {} on a continuum",
                    fmt_point(&x),
                    required
                ),
            }));
        }
    }
    Ok(None)
}

pub(crate) fn fmt_point(p: &[Rational]) -> String {
    let c: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", c.join(","))
}

/// Smallest `d / 2^bits` with `d / 2^bits ≥ r`.
pub fn dyadic_ceil(r: &RadicalSum, bits: u32) -> Rational {
    if let Some(q) = r.as_rational() {
        let scale = Rational::from_integer(BigInt::one() << bits);
        return Rational::new((q * &scale).ceil().to_integer(), BigInt::one() << bits);
    }
    let (lo, _) = r.enclose(bits + 16);
    let denom = BigInt::one() << bits;
    let mut d = (lo * Rational::from_integer(denom.clone()))
        .ceil()
        .to_integer();
    loop {
        let cand = Rational::new(d.clone(), denom.clone());
        let c = RadicalSum::from_rational(&cand).expect("nonnegative");
        if compare_radicals(&c, r).relation != Ordering::Less {
            return cand;
        }
        d += 1;
    }
}

/// An `h` satisfying the hypothesis for `(f, g)`: on each combination point
/// it takes the largest required mean, rounded up to `bits` fractional bits.
pub fn make_admissible_h(
    f: &PointMassFunction,
    g: &PointMassFunction,
    k: &SetExpr,
    l: &SetExpr,
    lambda: &Rational,
    p: &ExtendedExponent,
    bits: u32,
) -> Result<PointMassFunction, FunctionError> {
    let n = f.dim;
    for d in [g.dim, k.dim(), l.dim()] {
        check_dim(n, d)?;
    }
    crate::exactnum::check_lambda(lambda)?;
    let fk = f
        .char_part
        .as_ref()
        .map(|c| c.intersect(k))
        .transpose()?
        .filter(|s| !s.is_empty());
    let gl = g
        .char_part
        .as_ref()
        .map(|c| c.intersect(l))
        .transpose()?
        .filter(|s| !s.is_empty());
    let f_sup = support_in(f, k).next().is_some();
    let g_sup = support_in(g, l).next().is_some();
    if (fk.is_some() && g_sup) || (gl.is_some() && f_sup) {
        return Err(FunctionError::Unsupported(
            "admissible h for a support point paired with a characteristic part".into(),
        ));
    }
    let mut best: BTreeMap<Point, RadicalSum> = BTreeMap::new();
    for (x, a) in support_in(f, k) {
        for (y, b) in support_in(g, l) {
            let m = p_mean(&a, &b, lambda, p)?;
            if m.is_zero() {
                continue;
            }
            let z = combine(x, y, lambda);
            match best.get(&z) {
                Some(cur) if compare_radicals(cur, &m).relation != Ordering::Less => {}
                _ => {
                    best.insert(z, m);
                }
            }
        }
    }
    let support: Vec<(Point, Rational)> = best
        .into_iter()
        .map(|(z, m)| (z, dyadic_ceil(&m, bits)))
        .collect();
    let char_part = match (fk, gl) {
        (Some(a), Some(b)) => {
            let mu = Rational::one() - lambda;
            Some(a.scale(&mu)?.minkowski_sum(&b.scale(lambda)?)?)
        }
        _ => None,
    };
    PointMassFunction::new(n, support, char_part)
}

#[derive(Serialize, Deserialize)]
struct FunctionWire {
    dim: usize,
    #[serde(default)]
    support: Vec<(Vec<String>, String)>,
    #[serde(default)]
    char: Option<SetExpr>,
}

impl Serialize for PointMassFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FunctionWire {
            dim: self.dim,
            support: self
                .support
                .iter()
                .map(|(p, v)| (p.iter().map(|x| x.to_string()).collect(), v.to_string()))
                .collect(),
            char: self.char_part.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointMassFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = FunctionWire::deserialize(d)?;
        let support = w
            .support
            .iter()
            .map(|(p, v)| {
                let p = p
                    .iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Point, _>>()?;
                Ok((p, parse_rational(v)?))
            })
            .collect::<Result<Vec<_>, ExactError>>()
            .map_err(serde::de::Error::custom)?;
        PointMassFunction::new(w.dim, support, w.char).map_err(serde::de::Error::custom)
    }
}
