//! Exact rationals, floor/ceil, p-means and certified radical comparison.

mod radical;
pub mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use radical::format_sig;
pub use radical::{compare_radicals, OrderingCertificate, OrderingProof, RadicalSum};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("lambda must lie strictly between 0 and 1, got {0}")]
    LambdaOutOfRange(String),
    #[error("p-mean arguments must be nonnegative")]
    NegativeMeanInput,
    #[error("radical coefficients and radicands must be nonnegative")]
    NegativeRadical,
    #[error("root degree must be positive")]
    ZeroDegree,
    #[error("zero raised to a non-positive power")]
    ZeroToNonPositivePower,
    #[error("exponent too large for exact evaluation")]
    ExponentTooLarge,
    #[error("exponent {p} is below -1/{n}")]
    ExponentBelowRange { p: String, n: u32 },
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    let err = || ExactError::Parse(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Greatest integer `<= x`.
pub fn rat_floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Least integer `>= x`.
pub fn rat_ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn is_integral(x: &Rational) -> bool {
    x.is_integer()
}

/// `λ` must satisfy `0 < λ < 1`.
pub fn check_lambda(lambda: &Rational) -> Result<(), ExactError> {
    if lambda.is_positive() && lambda < &Rational::one() {
        Ok(())
    } else {
        Err(ExactError::LambdaOutOfRange(lambda.to_string()))
    }
}

/// Exponent in `[-inf, inf]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedExponent {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtendedExponent {
    pub fn finite(p: Rational) -> Self {
        ExtendedExponent::Finite(p)
    }
}

impl Ord for ExtendedExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedExponent::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
        }
    }
}

impl PartialOrd for ExtendedExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedExponent::NegInf => f.write_str("-inf"),
            ExtendedExponent::PosInf => f.write_str("inf"),
            ExtendedExponent::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for ExtendedExponent {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtendedExponent::PosInf),
            "-inf" | "-∞" => Ok(ExtendedExponent::NegInf),
            t => parse_rational(t).map(ExtendedExponent::Finite),
        }
    }
}

impl Serialize for ExtendedExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `p/(np+1)`, with `inf -> 1/n` and `-1/n -> -inf`.
pub fn conj_exponent(p: &ExtendedExponent, n: u32) -> Result<ExtendedExponent, ExactError> {
    assert!(n >= 1, "dimension must be positive");
    let floor = -Rational::new(BigInt::one(), BigInt::from(n));
    match p {
        ExtendedExponent::PosInf => Ok(ExtendedExponent::Finite(-floor)),
        ExtendedExponent::NegInf => Err(ExactError::ExponentBelowRange {
            p: p.to_string(),
            n,
        }),
        ExtendedExponent::Finite(q) => match q.cmp(&floor) {
            Ordering::Less => Err(ExactError::ExponentBelowRange {
                p: q.to_string(),
                n,
            }),
            Ordering::Equal => Ok(ExtendedExponent::NegInf),
            Ordering::Greater => {
                let denom = q * Rational::from_integer(BigInt::from(n)) + Rational::one();
                Ok(ExtendedExponent::Finite(q / denom))
            }
        },
    }
}

const MAX_EXPONENT: u64 = 1 << 12;

fn small_exponent(x: &BigInt) -> Result<u32, ExactError> {
    x.magnitude()
        .to_u32()
        .filter(|e| u64::from(*e) <= MAX_EXPONENT)
        .ok_or(ExactError::ExponentTooLarge)
}

/// Exact `M_p(a, b, λ)`; zero whenever `ab = 0`.
pub fn p_mean(
    a: &Rational,
    b: &Rational,
    lambda: &Rational,
    p: &ExtendedExponent,
) -> Result<RadicalSum, ExactError> {
    check_lambda(lambda)?;
    if a.is_negative() || b.is_negative() {
        return Err(ExactError::NegativeMeanInput);
    }
    if a.is_zero() || b.is_zero() {
        return Ok(RadicalSum::zero());
    }
    let mu = Rational::one() - lambda;
    match p {
        ExtendedExponent::PosInf => RadicalSum::from_rational(a.max(b)),
        ExtendedExponent::NegInf => RadicalSum::from_rational(a.min(b)),
        ExtendedExponent::Finite(q) if q.is_zero() => {
            // a^(1-s/t) b^(s/t) = (a^(t-s) b^s)^(1/t)
            let s = small_exponent(lambda.numer())?;
            let t = small_exponent(lambda.denom())?;
            let radicand: Rational = Pow::pow(a, t - s) * Pow::pow(b, s);
            RadicalSum::root(&radicand, t)
        }
        ExtendedExponent::Finite(q) => {
            let u = small_exponent(q.numer())?;
            let v = small_exponent(q.denom())?;
            let (a, b) = if q.is_negative() {
                (a.recip(), b.recip())
            } else {
                (a.clone(), b.clone())
            };
            let base = RadicalSum::new(
                v,
                &[(mu, Pow::pow(&a, u)), (lambda.clone(), Pow::pow(&b, u))],
            )?;
            base.pow(&q.recip())
        }
    }
}

/// Serde adapter storing a rational as `"p/q"`.
pub mod serde_rational {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals.
pub mod serde_rational_vec {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|q| q.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pm(a: i64, b: i64, l: Rational, p: ExtendedExponent) -> RadicalSum {
        p_mean(&int(a), &int(b), &l, &p).unwrap()
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(rat_floor(&ratio(7, 2)), BigInt::from(3));
        assert_eq!(rat_floor(&ratio(-7, 2)), BigInt::from(-4));
        assert_eq!(rat_floor(&int(5)), BigInt::from(5));
        assert_eq!(rat_ceil(&ratio(-7, 2)), BigInt::from(-3));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(int(3).to_string(), "3");
        assert_eq!(ratio(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn p_mean_examples() {
        let inf = ExtendedExponent::PosInf;
        assert_eq!(pm(3, 5, ratio(1, 4), inf).as_rational(), Some(int(5)));
        assert!(pm(4, 0, ratio(1, 2), ExtendedExponent::Finite(int(2))).is_zero());
        assert_eq!(
            pm(4, 9, ratio(1, 2), ExtendedExponent::Finite(int(0))).as_rational(),
            Some(int(6))
        );
        assert_eq!(
            pm(2, 6, ratio(1, 4), ExtendedExponent::Finite(int(1))).as_rational(),
            Some(int(3))
        );
        assert_eq!(
            pm(3, 5, ratio(1, 4), ExtendedExponent::NegInf).as_rational(),
            Some(int(3))
        );
        // harmonic mean of 2 and 6 with equal weights: 3
        assert_eq!(
            pm(2, 6, ratio(1, 2), ExtendedExponent::Finite(int(-1))).as_rational(),
            Some(int(3))
        );
        // quadratic mean of 1 and 7: 5
        assert_eq!(
            pm(1, 7, ratio(1, 2), ExtendedExponent::Finite(int(2))).as_rational(),
            Some(int(5))
        );
        assert!(p_mean(&int(1), &int(2), &int(1), &ExtendedExponent::PosInf).is_err());
        assert!(p_mean(&int(1), &int(2), &int(0), &ExtendedExponent::PosInf).is_err());
    }

    #[test]
    fn conj_examples() {
        use ExtendedExponent::*;
        assert_eq!(conj_exponent(&PosInf, 3).unwrap(), Finite(ratio(1, 3)));
        assert_eq!(conj_exponent(&Finite(int(0)), 2).unwrap(), Finite(int(0)));
        assert_eq!(
            conj_exponent(&Finite(int(1)), 2).unwrap(),
            Finite(ratio(1, 3))
        );
        assert_eq!(conj_exponent(&Finite(ratio(-1, 2)), 2).unwrap(), NegInf);
        assert!(conj_exponent(&Finite(ratio(-1, 1)), 2).is_err());
        assert!(conj_exponent(&NegInf, 2).is_err());
    }

    #[test]
    fn exponent_strings() {
        for s in ["inf", "-inf", "1/3", "-2"] {
            let e: ExtendedExponent = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
            let j = serde_json::to_string(&e).unwrap();
            assert_eq!(serde_json::from_str::<ExtendedExponent>(&j).unwrap(), e);
        }
        assert!(ExtendedExponent::NegInf < ExtendedExponent::Finite(int(-100)));
        assert!(ExtendedExponent::Finite(int(100)) < ExtendedExponent::PosInf);
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..13).prop_map(|(n, d)| ratio(n, d))
    }

    fn exponent() -> impl Strategy<Value = ExtendedExponent> {
        prop_oneof![
            Just(ExtendedExponent::NegInf),
            Just(ExtendedExponent::PosInf),
            (-4i64..5, 1i64..4).prop_map(|(n, d)| ExtendedExponent::Finite(ratio(n, d))),
        ]
    }

    fn lambda() -> impl Strategy<Value = Rational> {
        (1i64..6).prop_flat_map(|d| (1..d + 1).prop_map(move |n| ratio(n, d + 1)))
    }

    proptest! {
        #[test]
        fn floor_ceil_duality(x in small_rat()) {
            prop_assert_eq!(rat_floor(&x) + rat_ceil(&-x.clone()), BigInt::zero());
            let f = Rational::from_integer(rat_floor(&x));
            prop_assert!(f <= x && x < f + Rational::one());
        }

        #[test]
        fn p_mean_monotone_in_p(a in 1i64..30, b in 1i64..30, l in lambda(), p in exponent(), q in exponent()) {
            let (p, q) = if p <= q { (p, q) } else { (q, p) };
            let mp = pm(a, b, l.clone(), p);
            let mq = pm(a, b, l, q);
            prop_assert_ne!(compare_radicals(&mp, &mq).relation, Ordering::Greater);
        }

        #[test]
        fn p_mean_between_min_and_max(a in 1i64..30, b in 1i64..30, l in lambda(), p in exponent()) {
            let m = pm(a, b, l, p);
            let lo = RadicalSum::from_rational(&int(a.min(b))).unwrap();
            let hi = RadicalSum::from_rational(&int(a.max(b))).unwrap();
            prop_assert_ne!(compare_radicals(&m, &lo).relation, Ordering::Less);
            prop_assert_ne!(compare_radicals(&m, &hi).relation, Ordering::Greater);
        }

        #[test]
        fn p_mean_homogeneous(a in 1i64..20, b in 1i64..20, d in 1i64..4, l in lambda(), p in exponent()) {
            // c = d^v keeps c^(p) rational for p = u/v, so c * M_p stays representable
            let v = match &p { ExtendedExponent::Finite(q) => q.denom().to_u32().unwrap(), _ => 1 };
            let c: Rational = Pow::pow(&int(d), v);
            let scaled = p_mean(&(&c * int(a)), &(&c * int(b)), &l, &p).unwrap();
            let base = pm(a, b, l, p);
            let expect = base.scale(&c).expect("representable");
            prop_assert_eq!(compare_radicals(&scaled, &expect).relation, Ordering::Equal);
        }

        #[test]
        fn normalization_idempotent(terms in proptest::collection::vec((0i64..20, 1i64..200, 1i64..5), 0..5), v in 1u32..5) {
            let t: Vec<_> = terms.iter().map(|&(c, n, d)| (int(c), ratio(n, d))).collect();
            let once = RadicalSum::new(v, &t).unwrap();
            let again: Vec<_> = once.terms().map(|(c, r)| (c.clone(), Rational::from_integer(BigInt::from(r.clone())))).collect();
            let twice = RadicalSum::new(once.degree(), &again).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn floor_identity_dilation(x in small_rat(), y in small_rat(), q in 1i64..9, m0 in 0i64..9, p0 in 0i64..9) {
            let m = 1 + m0 % q;
            let p = 1 + p0 % q;
            prop_assume!(m + p <= q);
            let lhs = rat_floor(&(ratio(m, q) * &x + ratio(p, q) * &y + ratio(q - 1, q)));
            let rhs = (int(m) * Rational::from_integer(rat_floor(&x)) + int(p) * Rational::from_integer(rat_floor(&y))) / int(q);
            prop_assert!(Rational::from_integer(lhs) >= rhs);
        }

        #[test]
        fn floor_identity_half(x in small_rat(), y in small_rat()) {
            let lhs = Rational::from_integer(rat_floor(&((&x + &y) / int(2)))) + ratio(1, 2);
            let rhs = Rational::from_integer(rat_floor(&x) + rat_floor(&y)) / int(2);
            prop_assert!(lhs >= rhs);
        }
    }
}
