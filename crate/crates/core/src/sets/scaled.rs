//! Set representation with all coordinates written over one common
//! denominator as `i64` numerators. Minkowski combinations and lattice
//! enumeration run here in machine integers.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{to_i64, SetError, SetExpr};
use crate::exactnum::Rational;

/// Bitmap enumeration is used while the bounding box has at most this many cells.
const BITMAP_LIMIT: u128 = 1 << 27;

#[derive(Clone, Debug)]
struct SBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
    lo_open: Vec<bool>,
    hi_open: Vec<bool>,
}

#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    dim: usize,
    den: i64,
    boxes: Vec<SBox>,
    points: Vec<Vec<i64>>,
}

fn mul(a: i64, b: i64) -> Result<i64, SetError> {
    a.checked_mul(b).ok_or(SetError::TooLarge)
}

fn add(a: i64, b: i64) -> Result<i64, SetError> {
    a.checked_add(b).ok_or(SetError::TooLarge)
}

fn numer_over(x: &Rational, den: &BigInt) -> Result<i64, SetError> {
    to_i64(&(x.numer() * (den / x.denom())))
}

/// Integer box `[lo, hi]` (inclusive), one pair per axis.
type IntBox = (Vec<i64>, Vec<i64>);

impl Scaled {
    pub(crate) fn from_set(s: &SetExpr) -> Result<Self, SetError> {
        let mut den = BigInt::one();
        for b in &s.boxes {
            for f in &b.factors {
                den = den.lcm(f.lo.denom()).lcm(f.hi.denom());
            }
        }
        for p in &s.points {
            for x in p {
                den = den.lcm(x.denom());
            }
        }
        let boxes = s
            .boxes
            .iter()
            .map(|b| {
                Ok(SBox {
                    lo: b
                        .factors
                        .iter()
                        .map(|f| numer_over(&f.lo, &den))
                        .collect::<Result<_, _>>()?,
                    hi: b
                        .factors
                        .iter()
                        .map(|f| numer_over(&f.hi, &den))
                        .collect::<Result<_, _>>()?,
                    lo_open: b.factors.iter().map(|f| f.lo_open).collect(),
                    hi_open: b.factors.iter().map(|f| f.hi_open).collect(),
                })
            })
            .collect::<Result<_, SetError>>()?;
        let points = s
            .points
            .iter()
            .map(|p| p.iter().map(|x| numer_over(x, &den)).collect())
            .collect::<Result<_, SetError>>()?;
        Ok(Scaled {
            dim: s.dim,
            den: to_i64(&den)?,
            boxes,
            points,
        })
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    fn is_empty(&self) -> bool {
        self.boxes.is_empty() && self.points.is_empty()
    }

    /// `c · S` for `c ≥ 0`.
    pub(crate) fn scale(mut self, c: &Rational) -> Result<Self, SetError> {
        if c.is_negative() {
            return Err(SetError::NegativeScale(c.to_string()));
        }
        if self.is_empty() {
            return Ok(self);
        }
        if c.is_zero() {
            self.boxes.clear();
            self.points = vec![vec![0; self.dim]];
            self.den = 1;
            return Ok(self);
        }
        let a = to_i64(c.numer())?;
        let b = to_i64(c.denom())?;
        self.den = mul(self.den, b)?;
        if a != 1 {
            for bx in &mut self.boxes {
                for v in bx.lo.iter_mut().chain(bx.hi.iter_mut()) {
                    *v = mul(*v, a)?;
                }
            }
            for p in &mut self.points {
                for v in p.iter_mut() {
                    *v = mul(*v, a)?;
                }
            }
        }
        Ok(self)
    }

    fn rescaled(&self, den: i64) -> Result<Self, SetError> {
        let k = den / self.den;
        if k == 1 {
            return Ok(self.clone());
        }
        let conv = |v: &[i64]| v.iter().map(|&x| mul(x, k)).collect::<Result<Vec<_>, _>>();
        Ok(Scaled {
            dim: self.dim,
            den,
            boxes: self
                .boxes
                .iter()
                .map(|b| {
                    Ok(SBox {
                        lo: conv(&b.lo)?,
                        hi: conv(&b.hi)?,
                        lo_open: b.lo_open.clone(),
                        hi_open: b.hi_open.clone(),
                    })
                })
                .collect::<Result<_, SetError>>()?,
            points: self
                .points
                .iter()
                .map(|p| conv(p))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Minkowski sum.
    pub(crate) fn add(&self, other: &Scaled) -> Result<Self, SetError> {
        let den = self.den.lcm(&other.den);
        let a = self.rescaled(den)?;
        let b = other.rescaled(den)?;
        let vadd = |x: &[i64], y: &[i64]| {
            x.iter()
                .zip(y)
                .map(|(&p, &q)| add(p, q))
                .collect::<Result<Vec<_>, _>>()
        };
        let mut boxes = Vec::new();
        for ba in &a.boxes {
            for bb in &b.boxes {
                boxes.push(SBox {
                    lo: vadd(&ba.lo, &bb.lo)?,
                    hi: vadd(&ba.hi, &bb.hi)?,
                    lo_open: ba
                        .lo_open
                        .iter()
                        .zip(&bb.lo_open)
                        .map(|(x, y)| *x || *y)
                        .collect(),
                    hi_open: ba
                        .hi_open
                        .iter()
                        .zip(&bb.hi_open)
                        .map(|(x, y)| *x || *y)
                        .collect(),
                });
            }
        }
        let translate = |bx: &SBox, p: &[i64]| -> Result<SBox, SetError> {
            Ok(SBox {
                lo: vadd(&bx.lo, p)?,
                hi: vadd(&bx.hi, p)?,
                lo_open: bx.lo_open.clone(),
                hi_open: bx.hi_open.clone(),
            })
        };
        for ba in &a.boxes {
            for p in &b.points {
                boxes.push(translate(ba, p)?);
            }
        }
        for p in &a.points {
            for bb in &b.boxes {
                boxes.push(translate(bb, p)?);
            }
        }
        let mut seen = HashSet::new();
        let mut points = Vec::new();
        for p in &a.points {
            for q in &b.points {
                let s = vadd(p, q)?;
                if seen.insert(s.clone()) {
                    points.push(s);
                }
            }
        }
        Ok(Scaled {
            dim: self.dim,
            den,
            boxes,
            points,
        })
    }

    /// Integer boxes whose union is `S ∩ Z^n`.
    fn integer_boxes(&self) -> Vec<IntBox> {
        let d = self.den;
        let mut out = Vec::with_capacity(self.boxes.len() + self.points.len());
        'boxes: for b in &self.boxes {
            let mut lo = Vec::with_capacity(self.dim);
            let mut hi = Vec::with_capacity(self.dim);
            for i in 0..self.dim {
                let mut l = Integer::div_ceil(&b.lo[i], &d);
                if b.lo_open[i] && l * d == b.lo[i] {
                    l += 1;
                }
                let mut h = Integer::div_floor(&b.hi[i], &d);
                if b.hi_open[i] && h * d == b.hi[i] {
                    h -= 1;
                }
                if l > h {
                    continue 'boxes;
                }
                lo.push(l);
                hi.push(h);
            }
            out.push((lo, hi));
        }
        for p in &self.points {
            if p.iter().all(|&x| x % d == 0) {
                let q: Vec<i64> = p.iter().map(|&x| x / d).collect();
                out.push((q.clone(), q));
            }
        }
        out
    }

    pub(crate) fn count(&self) -> u128 {
        let boxes = self.integer_boxes();
        match boxes.len() {
            0 => 0,
            1 => volume(&boxes[0]),
            _ => match Bitmap::build(self.dim, &boxes) {
                Some(bm) => bm.count(),
                None => compressed_count(self.dim, &boxes),
            },
        }
    }

    pub(crate) fn integer_points(&self) -> Vec<Vec<i64>> {
        let boxes = self.integer_boxes();
        if boxes.is_empty() {
            return Vec::new();
        }
        match Bitmap::build(self.dim, &boxes) {
            Some(bm) => bm.points(),
            None => panic!("lattice point set too large to enumerate"),
        }
    }
}

fn volume((lo, hi): &IntBox) -> u128 {
    lo.iter()
        .zip(hi)
        .map(|(l, h)| (h - l + 1) as u128)
        .fold(1u128, |a, c| a.saturating_mul(c))
}

/// Dense bit grid over the bounding box of a family of integer boxes.
struct Bitmap {
    lo: Vec<i64>,
    extent: Vec<usize>,
    bits: Vec<u64>,
}

impl Bitmap {
    fn build(dim: usize, boxes: &[IntBox]) -> Option<Bitmap> {
        let mut lo = boxes[0].0.clone();
        let mut hi = boxes[0].1.clone();
        for (l, h) in boxes {
            for i in 0..dim {
                lo[i] = lo[i].min(l[i]);
                hi[i] = hi[i].max(h[i]);
            }
        }
        let cells = volume(&(lo.clone(), hi.clone()));
        let work: u128 = boxes
            .iter()
            .map(volume)
            .fold(0u128, |a, c| a.saturating_add(c));
        if cells > BITMAP_LIMIT || work > BITMAP_LIMIT * 4 {
            return None;
        }
        let extent: Vec<usize> = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| (h - l + 1) as usize)
            .collect();
        let mut bm = Bitmap {
            lo,
            extent,
            bits: vec![0u64; (cells as usize).div_ceil(64)],
        };
        for b in boxes {
            bm.fill(b);
        }
        Some(bm)
    }

    fn fill(&mut self, (l, h): &IntBox) {
        let dim = l.len();
        let mut cur = l.clone();
        loop {
            // innermost axis 0 is contiguous in memory
            let base = self.index(&cur);
            let run = (h[0] - l[0] + 1) as usize;
            for k in 0..run {
                let i = base + k;
                self.bits[i / 64] |= 1 << (i % 64);
            }
            let mut ax = 1;
            loop {
                if ax >= dim {
                    return;
                }
                if cur[ax] < h[ax] {
                    cur[ax] += 1;
                    break;
                }
                cur[ax] = l[ax];
                ax += 1;
            }
        }
    }

    fn index(&self, x: &[i64]) -> usize {
        let mut idx = 0usize;
        for i in (0..x.len()).rev() {
            idx = idx * self.extent[i] + (x[i] - self.lo[i]) as usize;
        }
        idx
    }

    fn count(&self) -> u128 {
        self.bits.iter().map(|w| w.count_ones() as u128).sum()
    }

    /// Set cells in lexicographic order of coordinates.
    fn points(&self) -> Vec<Vec<i64>> {
        let dim = self.extent.len();
        let mut out = Vec::new();
        for (wi, &w) in self.bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                let mut idx = wi * 64 + b;
                let p: Vec<i64> = (0..dim)
                    .map(|i| {
                        let c = self.lo[i] + (idx % self.extent[i]) as i64;
                        idx /= self.extent[i];
                        c
                    })
                    .collect();
                out.push(p);
            }
        }
        out.sort();
        out
    }
}

/// Union size by coordinate compression: cells between consecutive
/// breakpoints are either fully covered by a box or disjoint from it.
fn compressed_count(dim: usize, boxes: &[IntBox]) -> u128 {
    let cuts: Vec<Vec<i64>> = (0..dim)
        .map(|i| {
            let mut c: Vec<i64> = boxes.iter().flat_map(|(l, h)| [l[i], h[i] + 1]).collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    let mut total = 0u128;
    let mut cell = vec![0usize; dim];
    if cuts.iter().any(|c| c.len() < 2) {
        return 0;
    }
    loop {
        let start: Vec<i64> = (0..dim).map(|i| cuts[i][cell[i]]).collect();
        if boxes
            .iter()
            .any(|(l, h)| (0..dim).all(|i| l[i] <= start[i] && start[i] <= h[i]))
        {
            total += (0..dim)
                .map(|i| (cuts[i][cell[i] + 1] - cuts[i][cell[i]]) as u128)
                .product::<u128>();
        }
        let mut i = 0;
        loop {
            if i == dim {
                return total;
            }
            if cell[i] + 2 < cuts[i].len() {
                cell[i] += 1;
                break;
            }
            cell[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compressed_matches_bitmap() {
        let boxes: Vec<IntBox> = vec![
            (vec![0, 0], vec![3, 2]),
            (vec![2, 1], vec![5, 5]),
            (vec![-4, 4], vec![-4, 4]),
            (vec![1, 1], vec![1, 1]),
        ];
        let bm = Bitmap::build(2, &boxes).unwrap();
        assert_eq!(bm.count(), compressed_count(2, &boxes));
        assert_eq!(bm.count(), 12 + 20 - 4 + 1);
        assert_eq!(bm.points().len() as u128, bm.count());
    }
}
