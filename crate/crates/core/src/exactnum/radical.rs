//! Sums of v-th roots with nonnegative rational coefficients, kept in a
//! canonical power-free form so that equality is decided algebraically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::roots::{exact_root, floor_root, split_power};
use super::{parse_rational, ExactError, Rational};

/// Linear combination of v-th roots at a fixed degree.
///
/// Invariant: every radicand is a v-th-power-free positive integer and every
/// stored coefficient is strictly positive. Distinct power-free radicands have
/// roots that are linearly independent over the rationals, so two canonical
/// forms at the same degree denote the same real iff they are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Plain {
    degree: u32,
    terms: BTreeMap<BigUint, Rational>,
}

fn biguint_of(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

impl Plain {
    fn zero() -> Self {
        Plain {
            degree: 1,
            terms: BTreeMap::new(),
        }
    }

    fn one() -> Self {
        Plain::rational(Rational::one())
    }

    fn rational(c: Rational) -> Self {
        let mut p = Plain::zero();
        if !c.is_zero() {
            p.terms.insert(BigUint::one(), c);
        }
        p
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_rational(&self) -> bool {
        self.terms.keys().all(|r| r.is_one())
    }

    fn rational_value(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.terms.values().fold(Rational::zero(), |a, c| a + c))
        } else {
            None
        }
    }

    /// Adds `c * r^(1/degree)` for an arbitrary nonnegative rational `r`.
    fn push_raw(&mut self, c: &Rational, r: &Rational) -> Result<(), ExactError> {
        if c.is_negative() || r.is_negative() {
            return Err(ExactError::NegativeRadical);
        }
        if c.is_zero() || r.is_zero() {
            return Ok(());
        }
        // (a/b)^(1/v) = (a b^(v-1))^(1/v) / b
        let num = biguint_of(r.numer());
        let den = biguint_of(r.denom());
        let n = if den.is_one() {
            num
        } else {
            num * Pow::pow(&den, self.degree - 1)
        };
        let coeff = c / Rational::from_integer(BigInt::from(den));
        self.push_int(coeff, &n);
        Ok(())
    }

    fn push_int(&mut self, coeff: Rational, n: &BigUint) {
        if n.is_one() {
            self.accumulate(BigUint::one(), coeff);
            return;
        }
        let (s, rest) = split_power(n, self.degree);
        let coeff = if s.is_one() {
            coeff
        } else {
            coeff * Rational::from_integer(BigInt::from(s))
        };
        self.accumulate(rest, coeff);
    }

    fn accumulate(&mut self, radicand: BigUint, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(radicand).or_insert_with(Rational::zero);
        *entry += coeff;
    }

    /// Re-expresses the sum at a multiple of the current degree.
    fn lift(&self, degree: u32) -> Plain {
        debug_assert_eq!(degree % self.degree, 0);
        if degree == self.degree {
            return self.clone();
        }
        let k = degree / self.degree;
        Plain {
            degree,
            terms: self
                .terms
                .iter()
                .map(|(r, c)| (r.pow(k), c.clone()))
                .collect(),
        }
    }

    /// Smallest degree at which the same value is expressible.
    fn reduce_degree(self) -> Plain {
        if self.degree == 1 {
            return self;
        }
        if self.terms.is_empty() {
            return Plain::zero();
        }
        let d = self.degree;
        for k in (2..=d).rev().filter(|k| d.is_multiple_of(*k)) {
            let roots: Option<Vec<BigUint>> = self.terms.keys().map(|r| exact_root(r, k)).collect();
            if let Some(roots) = roots {
                return Plain {
                    degree: d / k,
                    terms: roots.into_iter().zip(self.terms.into_values()).collect(),
                };
            }
        }
        self
    }

    fn add(&self, other: &Plain) -> Plain {
        let degree = self.degree.lcm(&other.degree);
        let mut out = self.lift(degree);
        for (r, c) in other.lift(degree).terms {
            out.accumulate(r, c);
        }
        out
    }

    fn mul(&self, other: &Plain) -> Plain {
        let degree = self.degree.lcm(&other.degree);
        let a = self.lift(degree);
        let b = other.lift(degree);
        let mut out = Plain {
            degree,
            terms: BTreeMap::new(),
        };
        for (ra, ca) in &a.terms {
            for (rb, cb) in &b.terms {
                let coeff = ca * cb;
                if ra.is_one() {
                    out.accumulate(rb.clone(), coeff);
                } else if rb.is_one() {
                    out.accumulate(ra.clone(), coeff);
                } else {
                    out.push_int(coeff, &(ra * rb));
                }
            }
        }
        out
    }

    fn pow(&self, k: u32) -> Plain {
        let mut result = Plain::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    fn scale(&self, c: &Rational) -> Plain {
        if c.is_zero() {
            return Plain::zero();
        }
        Plain {
            degree: self.degree,
            terms: self.terms.iter().map(|(r, x)| (r.clone(), x * c)).collect(),
        }
    }

    /// Rational enclosure `[lo, hi]` using dyadic root bounds with `bits`
    /// fractional bits per term.
    fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        let scale = Rational::from_integer(BigInt::one() << bits);
        for (r, c) in &self.terms {
            if r.is_one() || self.degree == 1 {
                let v = c * Rational::from_integer(BigInt::from(r.clone()));
                lo += &v;
                hi += &v;
                continue;
            }
            let shifted: BigUint = r << (bits as usize * self.degree as usize);
            let (q, exact) = floor_root(&shifted, self.degree);
            let q = BigInt::from(q);
            lo += c * Rational::from_integer(q.clone()) / &scale;
            let up = if exact { q } else { q + 1 };
            hi += c * Rational::from_integer(up) / &scale;
        }
        (lo, hi)
    }

    fn into_sum(self) -> RadicalSum {
        RadicalSum {
            base: self,
            power: Rational::one(),
        }
    }
}

/// Exact value `(Σ cᵢ · rᵢ^(1/v))^e` with nonnegative coefficients.
///
/// The outer exponent `e` is 1 for ordinary radical sums. Means such as
/// `((1-λ)a^(2/3) + λb^(2/3))^(3/2)` are not radical sums, so they keep the
/// exponent symbolic; a single-term base is always folded into one radical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalSum {
    base: Plain,
    power: Rational,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Plain::zero().into_sum()
    }

    pub fn one() -> Self {
        Plain::one().into_sum()
    }

    /// A nonnegative rational as a degree-1 sum.
    pub fn from_rational(c: &Rational) -> Result<Self, ExactError> {
        if c.is_negative() {
            return Err(ExactError::NegativeRadical);
        }
        Ok(Plain::rational(c.clone()).into_sum())
    }

    /// `x^(1/v)`.
    pub fn root(x: &Rational, v: u32) -> Result<Self, ExactError> {
        Self::new(v, &[(Rational::one(), x.clone())])
    }

    /// `Σ coeff · radicand^(1/degree)`, normalized.
    pub fn new(degree: u32, terms: &[(Rational, Rational)]) -> Result<Self, ExactError> {
        if degree == 0 {
            return Err(ExactError::ZeroDegree);
        }
        let mut p = Plain {
            degree,
            terms: BTreeMap::new(),
        };
        for (c, r) in terms {
            p.push_raw(c, r)?;
        }
        Ok(p.reduce_degree().into_sum())
    }

    /// Raises the value to a rational power. Zero may only be raised to a
    /// positive power.
    pub fn pow(&self, e: &Rational) -> Result<Self, ExactError> {
        if e.is_zero() {
            return if self.is_zero() {
                Err(ExactError::ZeroToNonPositivePower)
            } else {
                Ok(RadicalSum::one())
            };
        }
        Self::from_base_power(self.base.clone(), &self.power * e)
    }

    fn from_base_power(base: Plain, power: Rational) -> Result<Self, ExactError> {
        let base = base.reduce_degree();
        if power.is_one() {
            return Ok(base.into_sum());
        }
        if base.is_zero() {
            return if power.is_positive() {
                Ok(RadicalSum::zero())
            } else {
                Err(ExactError::ZeroToNonPositivePower)
            };
        }
        if base.terms.len() == 1 {
            // (c r^(1/v))^(a/b) = (c^(av) r^a)^(1/(vb))
            let (r, c) = base.terms.iter().next().expect("one term");
            let a = power
                .numer()
                .to_i64()
                .filter(|a| a.unsigned_abs() <= MAX_EXPONENT)
                .ok_or(ExactError::ExponentTooLarge)?;
            let b = power
                .denom()
                .to_u32()
                .filter(|b| *b as u64 <= MAX_EXPONENT)
                .ok_or(ExactError::ExponentTooLarge)?;
            let v = base.degree;
            let r = Rational::from_integer(BigInt::from(r.clone()));
            let (c, r) = if a > 0 {
                (c.clone(), r)
            } else {
                (c.recip(), r.recip())
            };
            let a = a.unsigned_abs() as u32;
            let radicand: Rational = Pow::pow(&c, a * v) * Pow::pow(&r, a);
            return Self::new(v * b, &[(Rational::one(), radicand)]);
        }
        Ok(RadicalSum { base, power })
    }

    pub fn degree(&self) -> u32 {
        self.base.degree
    }

    /// Outer exponent; 1 for ordinary radical sums.
    pub fn power(&self) -> &Rational {
        &self.power
    }

    /// `(coefficient, radicand)` pairs of the base, radicands ascending.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &BigUint)> {
        self.base.terms.iter().map(|(r, c)| (c, r))
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn is_plain(&self) -> bool {
        self.power.is_one()
    }

    /// The value, when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_plain() {
            self.base.rational_value()
        } else {
            None
        }
    }

    /// Sum of two plain radical sums. `None` if either carries an outer exponent.
    pub fn checked_add(&self, other: &RadicalSum) -> Option<RadicalSum> {
        if !self.is_plain() || !other.is_plain() {
            return None;
        }
        Some(self.base.add(&other.base).reduce_degree().into_sum())
    }

    /// Product of two values with equal outer exponents (in particular, two
    /// plain sums).
    pub fn checked_mul(&self, other: &RadicalSum) -> Option<RadicalSum> {
        if self.power != other.power {
            return None;
        }
        Self::from_base_power(self.base.mul(&other.base), self.power.clone()).ok()
    }

    /// `c · self`, when representable: always for plain sums, and for power
    /// forms `S^e` when `c^(1/e)` is rational.
    pub fn scale(&self, c: &Rational) -> Option<RadicalSum> {
        if c.is_negative() {
            return None;
        }
        if self.is_plain() {
            return Some(self.base.scale(c).reduce_degree().into_sum());
        }
        let factor = rational_power_exact(c, &self.power.recip())?;
        Self::from_base_power(self.base.scale(&factor), self.power.clone()).ok()
    }

    /// Rigorous rational enclosure of the value.
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let (lo, hi) = self.base.enclose(bits);
        if self.power.is_one() {
            return (lo, hi);
        }
        let a = self.power.numer().to_i64().unwrap_or(1);
        let b = self.power.denom().to_u32().unwrap_or(1);
        let (lo, hi) = if a > 0 {
            (lo, hi)
        } else {
            let lo = if lo.is_zero() {
                // base is positive; tighten until the lower bound leaves 0
                let mut k = bits;
                loop {
                    k *= 2;
                    let (l, _) = self.base.enclose(k);
                    if l.is_positive() {
                        break l;
                    }
                }
            } else {
                lo
            };
            (hi.recip(), lo.recip())
        };
        let a = a.unsigned_abs() as u32;
        let lo = Pow::pow(&lo, a);
        let hi = Pow::pow(&hi, a);
        (
            rational_root_bound(&lo, b, bits, false),
            rational_root_bound(&hi, b, bits, true),
        )
    }

    /// Decimal approximation with `digits` significant digits.
    pub fn approx(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if let Some(q) = self.as_rational() {
            return format_sig(&q, digits);
        }
        let target = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits as u32 + 3));
        let mut bits = 96u32;
        loop {
            let (lo, hi) = self.enclose(bits);
            if (&hi - &lo) <= &target * &lo || bits > 1 << 16 {
                return format_sig(
                    &((lo + hi) / Rational::from_integer(BigInt::from(2))),
                    digits,
                );
            }
            bits *= 2;
        }
    }

    pub(crate) fn to_wire(&self) -> RadicalWire {
        RadicalWire {
            degree: self.degree(),
            terms: self
                .terms()
                .map(|(c, r)| [c.to_string(), r.to_string()])
                .collect(),
            power: (!self.power.is_one()).then(|| self.power.to_string()),
        }
    }

    pub(crate) fn from_wire(w: &RadicalWire) -> Result<Self, ExactError> {
        let terms = w
            .terms
            .iter()
            .map(|[c, r]| Ok((parse_rational(c)?, parse_rational(r)?)))
            .collect::<Result<Vec<_>, ExactError>>()?;
        let base = RadicalSum::new(w.degree, &terms)?;
        match &w.power {
            None => Ok(base),
            Some(e) => base.pow(&parse_rational(e)?),
        }
    }
}

const MAX_EXPONENT: u64 = 1 << 12;

/// `c^e` when it is rational.
fn rational_power_exact(c: &Rational, e: &Rational) -> Option<Rational> {
    if c.is_zero() {
        return e.is_positive().then(Rational::zero);
    }
    let a = e.numer().to_i64()?;
    let b = e.denom().to_u32()?;
    let base = if a < 0 { c.recip() } else { c.clone() };
    let raised: Rational = Pow::pow(&base, a.unsigned_abs() as u32);
    let num = exact_root(&biguint_of(raised.numer()), b)?;
    let den = exact_root(&biguint_of(raised.denom()), b)?;
    Some(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Lower or upper dyadic bound for `x^(1/b)`, `x >= 0`.
fn rational_root_bound(x: &Rational, b: u32, bits: u32, upper: bool) -> Rational {
    let scaled = x * Rational::from_integer(BigInt::one() << (bits as usize * b as usize));
    let n = if upper { scaled.ceil() } else { scaled.floor() }.to_integer();
    let n = biguint_of(&n);
    let (mut r, exact) = floor_root(&n, b);
    if upper && !exact {
        r += 1u32;
    }
    Rational::new(BigInt::from(r), BigInt::one() << bits)
}

/// Formats a nonnegative rational with `digits` significant decimal digits.
pub(crate) fn format_sig(x: &Rational, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let x = x.abs();
    let ten = BigInt::from(10u32);
    let lower = Pow::pow(&ten, digits as u32 - 1);
    let upper = Pow::pow(&ten, digits as u32);
    let est = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let mut s: i64 = digits as i64 - est;
    let scaled = |s: i64| -> BigInt {
        let v = if s >= 0 {
            &x * Rational::from_integer(Pow::pow(&ten, s as u32))
        } else {
            &x / Rational::from_integer(Pow::pow(&ten, (-s) as u32))
        };
        v.round().to_integer()
    };
    let mut y = scaled(s);
    while y >= upper {
        s -= 1;
        y = scaled(s);
    }
    while y < lower {
        s += 1;
        y = scaled(s);
    }
    let digits_str = y.to_string();
    let body = if s <= 0 {
        format!("{}{}", digits_str, "0".repeat((-s) as usize))
    } else {
        let s = s as usize;
        if s >= digits_str.len() {
            format!("0.{}{}", "0".repeat(s - digits_str.len()), digits_str)
        } else {
            let (i, f) = digits_str.split_at(digits_str.len() - s);
            format!("{i}.{f}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.base.is_zero() {
            "0".to_string()
        } else {
            self.base
                .terms
                .iter()
                .map(|(r, c)| {
                    if r.is_one() {
                        c.to_string()
                    } else {
                        let root = format!("{r}^(1/{})", self.base.degree);
                        if c.is_one() {
                            root
                        } else {
                            format!("{c}*{root}")
                        }
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        if self.power.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "({body})^({})", self.power)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct RadicalWire {
    pub degree: u32,
    pub terms: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<String>,
}

impl Serialize for RadicalSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadicalSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = RadicalWire::deserialize(d)?;
        RadicalSum::from_wire(&w).map_err(serde::de::Error::custom)
    }
}

/// How an ordering was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderingProof {
    /// Both sides reduced to canonical forms at a common degree; `identical`
    /// is true exactly for equality.
    Algebraic {
        identical: bool,
        lhs_form: RadicalSum,
        rhs_form: RadicalSum,
    },
    /// Disjoint rational enclosures of the reduced sides.
    Interval {
        bits: u32,
        #[serde(serialize_with = "ser_pair")]
        lhs: (Rational, Rational),
        #[serde(serialize_with = "ser_pair")]
        rhs: (Rational, Rational),
    },
}

fn ser_pair<S: serde::Serializer>(p: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    [p.0.to_string(), p.1.to_string()].serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingCertificate {
    #[serde(serialize_with = "ser_ordering")]
    pub relation: Ordering,
    pub proof: OrderingProof,
}

fn ser_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match o {
        Ordering::Less => "Less",
        Ordering::Equal => "Equal",
        Ordering::Greater => "Greater",
    })
}

const START_BITS: u32 = 64;

/// Certified ordering of two exact values.
///
/// Both sides are first raised to a common integer power so that only plain
/// radical sums remain, then lifted to a common degree. Identical canonical
/// forms mean equality; otherwise the values differ and doubling the dyadic
/// precision separates them.
pub fn compare_radicals(lhs: &RadicalSum, rhs: &RadicalSum) -> OrderingCertificate {
    match (lhs.is_zero(), rhs.is_zero()) {
        (true, true) => {
            return OrderingCertificate {
                relation: Ordering::Equal,
                proof: OrderingProof::Algebraic {
                    identical: true,
                    lhs_form: RadicalSum::zero(),
                    rhs_form: RadicalSum::zero(),
                },
            }
        }
        (true, false) | (false, true) => {
            return OrderingCertificate {
                relation: if lhs.is_zero() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                },
                proof: OrderingProof::Algebraic {
                    identical: false,
                    lhs_form: lhs.clone(),
                    rhs_form: rhs.clone(),
                },
            }
        }
        _ => {}
    }
    let (p, q) = clear_powers(lhs, rhs);
    let degree = p.degree.lcm(&q.degree);
    let p = p.lift(degree);
    let q = q.lift(degree);
    if p == q {
        return OrderingCertificate {
            relation: Ordering::Equal,
            proof: OrderingProof::Algebraic {
                identical: true,
                lhs_form: p.into_sum(),
                rhs_form: q.into_sum(),
            },
        };
    }
    // cancel shared radicands so the enclosures only cover the difference
    let mut pos = Plain {
        degree,
        terms: BTreeMap::new(),
    };
    let mut neg = pos.clone();
    let mut keys: Vec<&BigUint> = p.terms.keys().chain(q.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    for r in keys {
        let zero = Rational::zero();
        let d = p.terms.get(r).unwrap_or(&zero) - q.terms.get(r).unwrap_or(&zero);
        match d.cmp(&zero) {
            Ordering::Greater => pos.accumulate(r.clone(), d),
            Ordering::Less => neg.accumulate(r.clone(), -d),
            Ordering::Equal => {}
        }
    }
    if let (Some(a), Some(b)) = (pos.rational_value(), neg.rational_value()) {
        return OrderingCertificate {
            relation: a.cmp(&b),
            proof: OrderingProof::Algebraic {
                identical: false,
                lhs_form: p.into_sum(),
                rhs_form: q.into_sum(),
            },
        };
    }
    let mut bits = START_BITS;
    loop {
        let (plo, phi) = pos.enclose(bits);
        let (qlo, qhi) = neg.enclose(bits);
        if phi < qlo || qhi < plo {
            let relation = if phi < qlo {
                Ordering::Less
            } else {
                Ordering::Greater
            };
            return OrderingCertificate {
                relation,
                proof: OrderingProof::Interval {
                    bits,
                    lhs: (plo, phi),
                    rhs: (qlo, qhi),
                },
            };
        }
        bits *= 2;
    }
}

/// Replaces `S^e1` vs `T^e2` (both positive) by two plain sums with the same
/// ordering.
fn clear_powers(lhs: &RadicalSum, rhs: &RadicalSum) -> (Plain, Plain) {
    if lhs.is_plain() && rhs.is_plain() {
        return (lhs.base.clone(), rhs.base.clone());
    }
    let d = lhs.power.denom().lcm(rhs.power.denom());
    let d = Rational::from_integer(d);
    let i1 = (&lhs.power * &d).to_integer();
    let i2 = (&rhs.power * &d).to_integer();
    let k1 = i1.magnitude().to_u32().expect("exponent fits u32");
    let k2 = i2.magnitude().to_u32().expect("exponent fits u32");
    let s = lhs.base.pow(k1);
    let t = rhs.base.pow(k2);
    match (i1.sign() == Sign::Plus, i2.sign() == Sign::Plus) {
        (true, true) => (s, t),
        (false, true) => (Plain::one(), s.mul(&t)),
        (true, false) => (s.mul(&t), Plain::one()),
        (false, false) => (t, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ratio};

    fn rs(degree: u32, terms: &[(i64, i64)]) -> RadicalSum {
        let t: Vec<_> = terms.iter().map(|&(c, r)| (int(c), int(r))).collect();
        RadicalSum::new(degree, &t).unwrap()
    }

    #[test]
    fn two_root_two_equals_root_eight() {
        let c = compare_radicals(&rs(2, &[(2, 2)]), &rs(2, &[(1, 8)]));
        assert_eq!(c.relation, Ordering::Equal);
        assert!(matches!(
            c.proof,
            OrderingProof::Algebraic {
                identical: true,
                ..
            }
        ));
    }

    #[test]
    fn three_cuberoot_two_equals_cuberoot_54() {
        let c = compare_radicals(&rs(3, &[(3, 2)]), &rs(3, &[(1, 54)]));
        assert_eq!(c.relation, Ordering::Equal);
    }

    #[test]
    fn root2_plus_root3_below_root10() {
        let c = compare_radicals(&rs(2, &[(1, 2), (1, 3)]), &rs(2, &[(1, 10)]));
        assert_eq!(c.relation, Ordering::Less);
        assert!(matches!(c.proof, OrderingProof::Interval { .. }));
    }

    #[test]
    fn rational_radicands_canonicalize() {
        // sqrt(1/2) = sqrt(2)/2
        let a = RadicalSum::new(2, &[(int(1), ratio(1, 2))]).unwrap();
        let b = RadicalSum::new(2, &[(ratio(1, 2), int(2))]).unwrap();
        assert_eq!(a, b);
        // sqrt(2) and sqrt(1/2) collapse onto one radicand
        let c = RadicalSum::new(2, &[(int(1), int(2)), (int(1), ratio(1, 2))]).unwrap();
        assert_eq!(c.terms().count(), 1);
    }

    #[test]
    fn degree_reduces_when_all_radicands_are_powers() {
        let a = rs(4, &[(1, 4)]);
        assert_eq!(a.degree(), 2);
        assert_eq!(a, rs(2, &[(1, 2)]));
        let b = rs(2, &[(1, 36)]);
        assert_eq!(b.as_rational(), Some(int(6)));
    }

    #[test]
    fn mixed_degree_comparison() {
        // 2^(1/2) = 4^(1/4)
        let a = rs(2, &[(1, 2)]);
        let b = RadicalSum::new(4, &[(int(1), int(4))]).unwrap();
        assert_eq!(compare_radicals(&a, &b).relation, Ordering::Equal);
        // 2^(1/3) < 2^(1/2)
        let c = rs(3, &[(1, 2)]);
        assert_eq!(compare_radicals(&c, &a).relation, Ordering::Less);
    }

    #[test]
    fn single_term_power_folds() {
        let x = rs(1, &[(9, 1)]).pow(&ratio(1, 2)).unwrap();
        assert_eq!(x.as_rational(), Some(int(3)));
        let y = rs(2, &[(1, 2)]).pow(&int(-2)).unwrap();
        assert_eq!(y.as_rational(), Some(ratio(1, 2)));
    }

    #[test]
    fn power_forms_compare() {
        // (1 + 2^(1/2))^2 = 3 + 2*2^(1/2)
        let s = rs(2, &[(1, 1), (1, 2)]);
        let sq = s.pow(&int(2)).unwrap();
        assert!(!sq.is_plain());
        let expanded = rs(2, &[(3, 1), (2, 2)]);
        assert_eq!(compare_radicals(&sq, &expanded).relation, Ordering::Equal);
        // (1 + 2^(1/2))^(-1) = 2^(1/2) - 1 < 1/2
        let inv = s.pow(&int(-1)).unwrap();
        let half = RadicalSum::from_rational(&ratio(1, 2)).unwrap();
        assert_eq!(compare_radicals(&inv, &half).relation, Ordering::Less);
        assert_eq!(compare_radicals(&half, &inv).relation, Ordering::Greater);
        // (1 + 2^(1/2))^(3/2) vs (1 + 2^(1/2))^(1/2): both powers of the same base > 1
        let a = s.pow(&ratio(3, 2)).unwrap();
        let b = s.pow(&ratio(1, 2)).unwrap();
        assert_eq!(compare_radicals(&a, &b).relation, Ordering::Greater);
    }

    #[test]
    fn zero_handling() {
        let z = RadicalSum::zero();
        assert_eq!(compare_radicals(&z, &z).relation, Ordering::Equal);
        assert_eq!(
            compare_radicals(&z, &rs(2, &[(1, 2)])).relation,
            Ordering::Less
        );
        assert!(z.pow(&int(-1)).is_err());
        assert!(RadicalSum::new(2, &[(int(-1), int(2))]).is_err());
    }

    #[test]
    fn enclosure_contains_value() {
        let s = rs(2, &[(1, 2), (1, 3)]);
        let (lo, hi) = s.enclose(64);
        let v = 2f64.sqrt() + 3f64.sqrt();
        assert!(lo.to_f64().unwrap() <= v + 1e-12 && v - 1e-12 <= hi.to_f64().unwrap());
        let p = s.pow(&ratio(3, 2)).unwrap();
        let (lo, hi) = p.enclose(64);
        let v = v.powf(1.5);
        assert!(lo.to_f64().unwrap() <= v + 1e-9 && v - 1e-9 <= hi.to_f64().unwrap());
    }

    #[test]
    fn approx_digits() {
        assert_eq!(rs(2, &[(1, 2)]).approx(20), "1.4142135623730950488");
        assert_eq!(
            RadicalSum::from_rational(&ratio(16, 3)).unwrap().approx(5),
            "5.3333"
        );
        assert_eq!(
            RadicalSum::from_rational(&ratio(1, 3072))
                .unwrap()
                .approx(3),
            "0.000326"
        );
        assert_eq!(rs(1, &[(1200, 1)]).approx(2), "1200");
    }

    #[test]
    fn display_forms() {
        assert_eq!(rs(2, &[(3, 1), (2, 2)]).to_string(), "3 + 2*2^(1/2)");
        let p = rs(2, &[(1, 1), (1, 2)]).pow(&int(2)).unwrap();
        assert_eq!(p.to_string(), "(1 + 2^(1/2))^(2)");
    }

    #[test]
    fn wire_round_trip() {
        let p = rs(3, &[(1, 2), (2, 5)]).pow(&ratio(3, 2)).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: RadicalSum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(
            serde_json::to_string(&rs(2, &[(2, 2)])).unwrap(),
            r#"{"degree":2,"terms":[["2","2"]]}"#
        );
    }

    #[test]
    fn scale_power_form() {
        let s = rs(2, &[(1, 1), (1, 2)]).pow(&int(2)).unwrap();
        let scaled = s.scale(&int(4)).unwrap();
        let expect = rs(2, &[(2, 1), (2, 2)]).pow(&int(2)).unwrap();
        assert_eq!(compare_radicals(&scaled, &expect).relation, Ordering::Equal);
        assert!(s.scale(&int(2)).is_none());
    }
}
