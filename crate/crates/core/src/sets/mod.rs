//! Bounded subsets of R^n: finite unions of rational boxes plus finite point
//! sets, with Minkowski algebra and lattice point counting.

mod scaled;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{is_integral, parse_rational, rat_ceil, rat_floor, ExactError, Rational};

pub(crate) use scaled::Scaled;

pub type Point = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension must be at least {0}")]
    DimensionTooSmall(usize),
    #[error("empty interval {0}")]
    EmptyInterval(String),
    #[error("sets must be non-empty")]
    EmptySet,
    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(String),
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("endpoint functional needs closed intervals, got {0}")]
    OpenEndpoint(String),
    #[error("coordinates or denominators too large for lattice enumeration")]
    TooLarge,
    #[error("malformed set: {0}")]
    Malformed(String),
    #[error(transparent)]
    Number(#[from] ExactError),
}

/// Non-empty interval with independently open or closed endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval1D {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval1D {
    pub fn new(lo: Rational, hi: Rational, lo_open: bool, hi_open: bool) -> Result<Self, SetError> {
        let iv = Interval1D {
            lo,
            hi,
            lo_open,
            hi_open,
        };
        if iv.lo < iv.hi || (iv.lo == iv.hi && !lo_open && !hi_open) {
            Ok(iv)
        } else {
            Err(SetError::EmptyInterval(iv.to_string()))
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self, SetError> {
        Self::new(lo, hi, false, false)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self, SetError> {
        Self::new(lo, hi, true, true)
    }

    pub fn point(x: Rational) -> Self {
        Interval1D {
            lo: x.clone(),
            hi: x,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_open {
            x > &self.lo
        } else {
            x >= &self.lo
        };
        let below = if self.hi_open {
            x < &self.hi
        } else {
            x <= &self.hi
        };
        above && below
    }

    /// Smallest and largest integers inside, if any.
    pub fn integer_range(&self) -> Option<(BigInt, BigInt)> {
        let lo = if self.lo_open && is_integral(&self.lo) {
            rat_floor(&self.lo) + 1
        } else {
            rat_ceil(&self.lo)
        };
        let hi = if self.hi_open && is_integral(&self.hi) {
            rat_floor(&self.hi) - 1
        } else {
            rat_floor(&self.hi)
        };
        (lo <= hi).then_some((lo, hi))
    }

    pub fn lattice_count(&self) -> BigInt {
        match self.integer_range() {
            Some((lo, hi)) => hi - lo + 1,
            None => BigInt::zero(),
        }
    }

    /// `c · I` for `c > 0`.
    fn scaled(&self, c: &Rational) -> Interval1D {
        Interval1D {
            lo: &self.lo * c,
            hi: &self.hi * c,
            lo_open: self.lo_open,
            hi_open: self.hi_open,
        }
    }

    /// `c · I` for any nonzero `c`; negative factors swap the endpoints.
    fn scaled_signed(&self, c: &Rational) -> Interval1D {
        if c.is_negative() {
            Interval1D {
                lo: &self.hi * c,
                hi: &self.lo * c,
                lo_open: self.hi_open,
                hi_open: self.lo_open,
            }
        } else {
            self.scaled(c)
        }
    }

    fn translated(&self, t: &Rational) -> Interval1D {
        Interval1D {
            lo: &self.lo + t,
            hi: &self.hi + t,
            lo_open: self.lo_open,
            hi_open: self.hi_open,
        }
    }

    /// Minkowski sum: endpoints add, an endpoint is open if either summand's is.
    pub fn add(&self, other: &Interval1D) -> Interval1D {
        Interval1D {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            lo_open: self.lo_open || other.lo_open,
            hi_open: self.hi_open || other.hi_open,
        }
    }

    pub fn intersect(&self, other: &Interval1D) -> Option<Interval1D> {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_open),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_open),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_open),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_open),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        Interval1D::new(lo, hi, lo_open, hi_open).ok()
    }

    /// Whether `other ⊆ self`.
    pub fn contains_interval(&self, other: &Interval1D) -> bool {
        let lo_ok = self.lo < other.lo || (self.lo == other.lo && (!self.lo_open || other.lo_open));
        let hi_ok = other.hi < self.hi || (self.hi == other.hi && (!self.hi_open || other.hi_open));
        lo_ok && hi_ok
    }

    /// `[⌊lo⌋, ⌈hi⌉]`, the union of `[⌊x⌋, ⌈x⌉]` over the interval.
    fn closed_hull(&self) -> Interval1D {
        Interval1D {
            lo: Rational::from_integer(rat_floor(&self.lo)),
            hi: Rational::from_integer(rat_ceil(&self.hi)),
            lo_open: false,
            hi_open: false,
        }
    }
}

impl fmt::Display for Interval1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// Product of intervals. Named to stay clear of `std::boxed::Box`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cuboid {
    pub factors: Vec<Interval1D>,
}

impl Cuboid {
    pub fn new(factors: Vec<Interval1D>) -> Result<Self, SetError> {
        if factors.is_empty() {
            return Err(SetError::DimensionTooSmall(1));
        }
        Ok(Cuboid { factors })
    }

    /// `I × I × … × I`.
    pub fn cube(n: usize, side: Interval1D) -> Self {
        Cuboid {
            factors: vec![side; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.factors.iter().zip(x).all(|(f, v)| f.contains(v))
    }

    pub fn lattice_count(&self) -> BigInt {
        self.factors
            .iter()
            .map(Interval1D::lattice_count)
            .fold(BigInt::one(), |a, c| a * c)
    }

    pub fn add(&self, other: &Cuboid) -> Cuboid {
        Cuboid {
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn translated(&self, t: &[Rational]) -> Cuboid {
        Cuboid {
            factors: self
                .factors
                .iter()
                .zip(t)
                .map(|(a, b)| a.translated(b))
                .collect(),
        }
    }

    pub fn intersect(&self, other: &Cuboid) -> Option<Cuboid> {
        let factors: Option<Vec<_>> = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.intersect(b))
            .collect();
        factors.map(|factors| Cuboid { factors })
    }

    pub fn contains_cuboid(&self, other: &Cuboid) -> bool {
        self.factors
            .iter()
            .zip(&other.factors)
            .all(|(a, b)| a.contains_interval(b))
    }
}

impl fmt::Display for Cuboid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// A bounded subset of R^n: the union of `boxes` and `points`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetExpr {
    dim: usize,
    boxes: Vec<Cuboid>,
    points: BTreeSet<Point>,
}

impl SetExpr {
    /// Non-empty set from boxes and points of dimension `dim`.
    pub fn new(
        dim: usize,
        boxes: Vec<Cuboid>,
        points: impl IntoIterator<Item = Point>,
    ) -> Result<Self, SetError> {
        let s = Self::new_possibly_empty(dim, boxes, points)?;
        if s.is_empty() {
            return Err(SetError::EmptySet);
        }
        Ok(s)
    }

    fn new_possibly_empty(
        dim: usize,
        boxes: Vec<Cuboid>,
        points: impl IntoIterator<Item = Point>,
    ) -> Result<Self, SetError> {
        if dim == 0 {
            return Err(SetError::DimensionTooSmall(1));
        }
        let points: BTreeSet<Point> = points.into_iter().collect();
        for b in &boxes {
            check_dim(dim, b.dim())?;
        }
        for p in &points {
            check_dim(dim, p.len())?;
        }
        Ok(SetExpr { dim, boxes, points })
    }

    /// The empty set; only produced by sections.
    pub fn empty(dim: usize) -> Self {
        SetExpr {
            dim,
            boxes: Vec::new(),
            points: BTreeSet::new(),
        }
    }

    pub fn from_box(b: Cuboid) -> Self {
        SetExpr {
            dim: b.dim(),
            boxes: vec![b],
            points: BTreeSet::new(),
        }
    }

    pub fn from_boxes(boxes: Vec<Cuboid>) -> Result<Self, SetError> {
        let dim = boxes.first().ok_or(SetError::EmptySet)?.dim();
        Self::new(dim, boxes, [])
    }

    pub fn from_points(
        dim: usize,
        points: impl IntoIterator<Item = Point>,
    ) -> Result<Self, SetError> {
        Self::new(dim, Vec::new(), points)
    }

    /// Integer point set from `i64` coordinates.
    pub fn from_lattice_points<'a>(
        dim: usize,
        points: impl IntoIterator<Item = &'a [i64]>,
    ) -> Result<Self, SetError> {
        Self::from_points(
            dim,
            points.into_iter().map(|p| {
                p.iter()
                    .map(|&c| Rational::from_integer(c.into()))
                    .collect()
            }),
        )
    }

    /// One-dimensional interval as a set.
    pub fn interval(iv: Interval1D) -> Self {
        Self::from_box(Cuboid { factors: vec![iv] })
    }

    /// `[lo, hi]^n`.
    pub fn closed_cube(n: usize, lo: Rational, hi: Rational) -> Result<Self, SetError> {
        Ok(Self::from_box(Cuboid::cube(n, Interval1D::closed(lo, hi)?)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[Cuboid] {
        &self.boxes
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty() && self.points.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.points.contains(x) || self.boxes.iter().any(|b| b.contains(x))
    }

    /// Membership test with dimension checking.
    pub fn membership(&self, x: &[Rational]) -> Result<bool, SetError> {
        check_dim(self.dim, x.len())?;
        Ok(self.contains(x))
    }

    /// `{c·s : s ∈ S}`; `c = 0` collapses a non-empty set to the origin.
    pub fn scale(&self, c: &Rational) -> Result<SetExpr, SetError> {
        if c.is_negative() {
            return Err(SetError::NegativeScale(c.to_string()));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if c.is_zero() {
            return Ok(SetExpr {
                dim: self.dim,
                boxes: Vec::new(),
                points: [vec![Rational::zero(); self.dim]].into_iter().collect(),
            });
        }
        Ok(SetExpr {
            dim: self.dim,
            boxes: self
                .boxes
                .iter()
                .map(|b| Cuboid {
                    factors: b.factors.iter().map(|f| f.scaled(c)).collect(),
                })
                .collect(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| x * c).collect())
                .collect(),
        })
    }

    pub fn translate(&self, t: &[Rational]) -> Result<SetExpr, SetError> {
        check_dim(self.dim, t.len())?;
        Ok(SetExpr {
            dim: self.dim,
            boxes: self.boxes.iter().map(|b| b.translated(t)).collect(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().zip(t).map(|(a, b)| a + b).collect())
                .collect(),
        })
    }

    /// `A + B`, materialized pairwise.
    pub fn minkowski_sum(&self, other: &SetExpr) -> Result<SetExpr, SetError> {
        check_dim(self.dim, other.dim)?;
        let mut boxes = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                boxes.push(a.add(b));
            }
            for q in &other.points {
                boxes.push(a.translated(q));
            }
        }
        for p in &self.points {
            for b in &other.boxes {
                boxes.push(b.translated(p));
            }
        }
        boxes.sort();
        boxes.dedup();
        let points = self
            .points
            .iter()
            .flat_map(|p| {
                other
                    .points
                    .iter()
                    .map(move |q| p.iter().zip(q).map(|(a, b)| a + b).collect::<Point>())
            })
            .collect();
        Ok(SetExpr {
            dim: self.dim,
            boxes,
            points,
        })
    }

    /// `G_n(S) = |S ∩ Z^n|`.
    pub fn count_lattice(&self) -> BigInt {
        if self.points.is_empty() && self.boxes.len() == 1 {
            return self.boxes[0].lattice_count();
        }
        if self.is_empty() {
            return BigInt::zero();
        }
        let scaled =
            Scaled::from_set(self).unwrap_or_else(|e| panic!("cannot count lattice points: {e}"));
        BigInt::from(scaled.count())
    }

    /// Sorted integer points of the set.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>, SetError> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        Ok(Scaled::from_set(self)?.integer_points())
    }

    /// `M(t) = {x : (x, t) ∈ M}`, possibly empty.
    pub fn section(&self, t: &Rational) -> Result<SetExpr, SetError> {
        if self.dim < 2 {
            return Err(SetError::DimensionTooSmall(2));
        }
        let n = self.dim - 1;
        Ok(SetExpr {
            dim: n,
            boxes: self
                .boxes
                .iter()
                .filter(|b| b.factors[n].contains(t))
                .map(|b| Cuboid {
                    factors: b.factors[..n].to_vec(),
                })
                .collect(),
            points: self
                .points
                .iter()
                .filter(|p| &p[n] == t)
                .map(|p| p[..n].to_vec())
                .collect(),
        })
    }

    /// Projection onto the last coordinate.
    pub fn project_last(&self) -> SetExpr {
        let n = self.dim - 1;
        SetExpr {
            dim: 1,
            boxes: self
                .boxes
                .iter()
                .map(|b| Cuboid {
                    factors: vec![b.factors[n].clone()],
                })
                .collect(),
            points: self.points.iter().map(|p| vec![p[n].clone()]).collect(),
        }
    }

    /// Sorted disjoint intervals covering a 1-d set; with `closed_hull`, each
    /// `x` is first widened to `[⌊x⌋, ⌈x⌉]`.
    pub fn normalize_1d(&self, closed_hull: bool) -> Result<Vec<Interval1D>, SetError> {
        check_dim(1, self.dim)?;
        if self.is_empty() {
            return Err(SetError::EmptySet);
        }
        let mut ivs: Vec<Interval1D> = self
            .boxes
            .iter()
            .map(|b| b.factors[0].clone())
            .chain(self.points.iter().map(|p| Interval1D::point(p[0].clone())))
            .map(|iv| if closed_hull { iv.closed_hull() } else { iv })
            .collect();
        ivs.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.lo_open.cmp(&b.lo_open)));
        let mut out: Vec<Interval1D> = Vec::new();
        for iv in ivs {
            if let Some(last) = out.last_mut() {
                let touches =
                    iv.lo < last.hi || (iv.lo == last.hi && !(last.hi_open && iv.lo_open));
                if touches {
                    if iv.lo == last.lo {
                        last.lo_open &= iv.lo_open;
                    }
                    match iv.hi.cmp(&last.hi) {
                        std::cmp::Ordering::Greater => {
                            last.hi = iv.hi;
                            last.hi_open = iv.hi_open;
                        }
                        std::cmp::Ordering::Equal => last.hi_open &= iv.hi_open,
                        std::cmp::Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        Ok(out)
    }

    /// `φ^{-1}(S)` for `φ(x) = Bx`.
    ///
    /// Points are mapped exactly. For a diagonal basis boxes map to boxes; for
    /// any other basis a box becomes the finite set of integer `x` with
    /// `Bx` in the box, which is all that lattice counting needs.
    pub fn lattice_transform(&self, basis: &LatticeBasis) -> Result<SetExpr, SetError> {
        check_dim(self.dim, basis.dim())?;
        let points: BTreeSet<Point> = self.points.iter().map(|p| basis.preimage(p)).collect();
        if let Some(diag) = basis.diagonal() {
            let boxes = self
                .boxes
                .iter()
                .map(|b| Cuboid {
                    factors: b
                        .factors
                        .iter()
                        .zip(&diag)
                        .map(|(f, d)| f.scaled_signed(&d.recip()))
                        .collect(),
                })
                .collect();
            return Ok(SetExpr {
                dim: self.dim,
                boxes,
                points,
            });
        }
        let mut points = points;
        for b in &self.boxes {
            for x in preimage_lattice_points(b, basis)? {
                points.insert(x);
            }
        }
        Ok(SetExpr {
            dim: self.dim,
            boxes: Vec::new(),
            points,
        })
    }

    pub fn intersect(&self, other: &SetExpr) -> Result<SetExpr, SetError> {
        check_dim(self.dim, other.dim)?;
        let mut boxes: Vec<Cuboid> = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().filter_map(move |b| a.intersect(b)))
            .collect();
        boxes.sort();
        boxes.dedup();
        let points = self
            .points
            .iter()
            .filter(|p| other.contains(p))
            .chain(other.points.iter().filter(|p| self.contains(p)))
            .cloned()
            .collect();
        Ok(SetExpr {
            dim: self.dim,
            boxes,
            points,
        })
    }

    /// Whether every box and point of `other` lies in a single box or point of `self`.
    ///
    /// This is exact when each piece of `other` sits inside one piece of
    /// `self`, which covers hull-of-combination checks; a piece split across
    /// several boxes of `self` is reported as not contained.
    pub fn contains_piecewise(&self, other: &SetExpr) -> bool {
        other.boxes.iter().all(|b| {
            self.boxes.iter().any(|c| c.contains_cuboid(b))
                || is_point_box(b).is_some_and(|p| self.contains(&p))
        }) && other.points.iter().all(|p| self.contains(p))
    }
}

fn is_point_box(b: &Cuboid) -> Option<Point> {
    b.factors
        .iter()
        .map(|f| (f.lo == f.hi).then(|| f.lo.clone()))
        .collect()
}

fn check_dim(expected: usize, got: usize) -> Result<(), SetError> {
    if expected == got {
        Ok(())
    } else {
        Err(SetError::DimensionMismatch { expected, got })
    }
}

/// Number of non-integer endpoints of disjoint closed intervals.
pub fn noninteger_endpoints(intervals: &[Interval1D]) -> Result<usize, SetError> {
    let mut count = 0;
    for iv in intervals {
        if iv.lo_open || iv.hi_open {
            return Err(SetError::OpenEndpoint(iv.to_string()));
        }
        count += usize::from(!is_integral(&iv.lo)) + usize::from(!is_integral(&iv.hi));
    }
    Ok(count)
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.boxes.iter().map(|b| b.to_string()).collect();
        if !self.points.is_empty() {
            let pts: Vec<String> = self
                .points
                .iter()
                .map(|p| {
                    let c: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    format!("({})", c.join(","))
                })
                .collect();
            parts.push(format!("{{{}}}", pts.join(",")));
        }
        if parts.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&parts.join(" ∪ "))
        }
    }
}

/// Columns `v_1..v_n` of an invertible rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vec<Rational>>,
    inv: Vec<Vec<Rational>>,
}

impl LatticeBasis {
    /// From row-major entries; column `j` is the basis vector `v_j`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, SetError> {
        let n = rows.len();
        if n == 0 {
            return Err(SetError::DimensionTooSmall(1));
        }
        for r in &rows {
            check_dim(n, r.len())?;
        }
        let inv = invert(&rows)?;
        Ok(LatticeBasis { rows, inv })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rational::one()).expect("nonzero scalar")
    }

    /// `c · I` for `c ≠ 0`.
    pub fn scalar(n: usize, c: Rational) -> Result<Self, SetError> {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { c.clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `φ(x) = Bx`.
    pub fn apply(&self, x: &[Rational]) -> Point {
        mat_vec(&self.rows, x)
    }

    /// `φ^{-1}(y)`.
    pub fn preimage(&self, y: &[Rational]) -> Point {
        mat_vec(&self.inv, y)
    }

    fn diagonal(&self) -> Option<Vec<Rational>> {
        let n = self.dim();
        let off_zero = (0..n).all(|i| (0..n).all(|j| i == j || self.rows[i][j].is_zero()));
        off_zero.then(|| (0..n).map(|i| self.rows[i][i].clone()).collect())
    }
}

/// Gauss-Jordan inverse over the rationals.
fn invert(rows: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, SetError> {
    let n = rows.len();
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(SetError::SingularBasis)?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn mat_vec(m: &[Vec<Rational>], x: &[Rational]) -> Point {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Integer `x` with `Bx` in the box, searched over the bounding box of the
/// preimage of the box's closed hull.
fn preimage_lattice_points(b: &Cuboid, basis: &LatticeBasis) -> Result<Vec<Point>, SetError> {
    let n = b.dim();
    let mut lo: Vec<Rational> = Vec::with_capacity(n);
    let mut hi: Vec<Rational> = Vec::with_capacity(n);
    for row in &basis.inv {
        // extremes of a linear form over a box are attained coordinatewise
        let mut l = Rational::zero();
        let mut h = Rational::zero();
        for (a, f) in row.iter().zip(&b.factors) {
            let (x, y) = (a * &f.lo, a * &f.hi);
            if x <= y {
                l += x;
                h += y;
            } else {
                l += y;
                h += x;
            }
        }
        lo.push(l);
        hi.push(h);
    }
    let ranges: Vec<(i64, i64)> = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| Ok((to_i64(&rat_ceil(l))?, to_i64(&rat_floor(h))?)))
        .collect::<Result<_, SetError>>()?;
    let mut out = Vec::new();
    if ranges.iter().any(|(l, h)| l > h) {
        return Ok(out);
    }
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let x: Point = cur
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect();
        if b.contains(&basis.apply(&x)) {
            out.push(x);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
            i += 1;
        }
    }
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64, SetError> {
    i64::try_from(x).map_err(|_| SetError::TooLarge)
}

/// Lattice count of `Σ cᵢ Sᵢ` computed without materializing the sum in
/// rationals. Weights must be nonnegative.
pub fn weighted_sum_count(terms: &[(&SetExpr, &Rational)]) -> Result<BigInt, SetError> {
    Ok(BigInt::from(weighted_sum_scaled(terms)?.count()))
}

/// Sorted integer points of `Σ cᵢ Sᵢ`.
pub fn weighted_sum_points(terms: &[(&SetExpr, &Rational)]) -> Result<Vec<Vec<i64>>, SetError> {
    Ok(weighted_sum_scaled(terms)?.integer_points())
}

fn weighted_sum_scaled(terms: &[(&SetExpr, &Rational)]) -> Result<Scaled, SetError> {
    let (first, rest) = terms.split_first().ok_or(SetError::EmptySet)?;
    let mut acc = Scaled::from_set(first.0)?.scale(first.1)?;
    for (s, c) in rest {
        check_dim(acc.dim(), s.dim())?;
        acc = acc.add(&Scaled::from_set(s)?.scale(c)?)?;
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
struct BoxWire {
    lo: Vec<String>,
    hi: Vec<String>,
    lo_open: Vec<bool>,
    hi_open: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct SetWire {
    dim: usize,
    #[serde(default)]
    boxes: Vec<BoxWire>,
    #[serde(default)]
    points: Vec<Vec<String>>,
}

impl SetExpr {
    fn to_wire(&self) -> SetWire {
        SetWire {
            dim: self.dim,
            boxes: self
                .boxes
                .iter()
                .map(|b| BoxWire {
                    lo: b.factors.iter().map(|f| f.lo.to_string()).collect(),
                    hi: b.factors.iter().map(|f| f.hi.to_string()).collect(),
                    lo_open: b.factors.iter().map(|f| f.lo_open).collect(),
                    hi_open: b.factors.iter().map(|f| f.hi_open).collect(),
                })
                .collect(),
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    fn from_wire(w: SetWire) -> Result<Self, SetError> {
        let mut boxes = Vec::with_capacity(w.boxes.len());
        for b in w.boxes {
            let n = b.lo.len();
            if b.hi.len() != n || b.lo_open.len() != n || b.hi_open.len() != n {
                return Err(SetError::Malformed("box fields differ in length".into()));
            }
            let factors = (0..n)
                .map(|i| {
                    Interval1D::new(
                        parse_rational(&b.lo[i])?,
                        parse_rational(&b.hi[i])?,
                        b.lo_open[i],
                        b.hi_open[i],
                    )
                })
                .collect::<Result<Vec<_>, SetError>>()?;
            boxes.push(Cuboid::new(factors)?);
        }
        let points = w
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Point, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        SetExpr::new(w.dim, boxes, points)
    }
}

impl Serialize for SetExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        SetExpr::from_wire(SetWire::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
