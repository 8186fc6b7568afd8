//! Lower Riemann sums of a box-union indicator on dyadic grids.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::VerifyError;
use crate::exactnum::Rational;
use crate::sets::{Cuboid, Interval1D, SetError, SetExpr};

const MAX_CELLS: u128 = 1 << 24;

/// `c \ b` as disjoint boxes.
fn subtract(c: &Cuboid, b: &Cuboid) -> Vec<Cuboid> {
    let mut out = Vec::new();
    let mut core = c.factors.clone();
    for i in 0..c.factors.len() {
        let ci = &c.factors[i];
        let bi = &b.factors[i];
        let left = Interval1D::new(ci.lo.clone(), bi.lo.clone(), ci.lo_open, !bi.lo_open)
            .ok()
            .and_then(|iv| iv.intersect(ci));
        let right = Interval1D::new(bi.hi.clone(), ci.hi.clone(), !bi.hi_open, ci.hi_open)
            .ok()
            .and_then(|iv| iv.intersect(ci));
        for side in [left, right].into_iter().flatten() {
            let mut f = core.clone();
            f[i] = side;
            out.push(Cuboid { factors: f });
        }
        match ci.intersect(bi) {
            Some(mid) => core[i] = mid,
            None => return vec![c.clone()],
        }
    }
    out
}

fn covered(c: &Cuboid, boxes: &[Cuboid]) -> bool {
    let Some((b, rest)) = boxes.split_first() else {
        return false;
    };
    if b.contains_cuboid(c) {
        return true;
    }
    if c.intersect(b).is_none() {
        return covered(c, rest);
    }
    subtract(c, b).iter().all(|piece| covered(piece, rest))
}

/// Half-width `m` of a window `[−m, m]^n` with integer `m ≥ 1`.
fn window_radius(window: &SetExpr) -> Result<i64, VerifyError> {
    let bad = || VerifyError::Precondition("window must be a single cube [-m,m]^n".into());
    if window.boxes().len() != 1 || !window.points().is_empty() {
        return Err(bad());
    }
    let b = &window.boxes()[0];
    let first = &b.factors[0];
    if first.lo_open || first.hi_open || first.lo != -first.hi.clone() || !first.hi.is_integer() {
        return Err(bad());
    }
    if b.factors.iter().any(|f| f != first) || !first.hi.is_positive() {
        return Err(bad());
    }
    first.hi.to_integer().to_i64().ok_or(bad())
}

/// For `k = 0..=k_max`, `2^{−kn} · #{x ∈ 2^{−k}Z^n : x + [0,2^{−k}]^n ⊆ S ∩ (−m,m]^n}`.
///
/// Grid points run over `(−m, m]^n`, so a cell starting there lies in the
/// half-open window exactly when it ends by `m`. Isolated points of `S`
/// carry no cells.
pub fn riemann_limit_demo(
    f_set: &SetExpr,
    window: &SetExpr,
    k_max: u32,
) -> Result<Vec<(u32, Rational)>, VerifyError> {
    if f_set.dim() != window.dim() {
        return Err(SetError::DimensionMismatch {
            expected: window.dim(),
            got: f_set.dim(),
        }
        .into());
    }
    let n = window.dim();
    let m = window_radius(window)?;
    let mut out = Vec::new();
    for k in 0..=k_max {
        (2 * m as u128)
            .checked_shl(k)
            .and_then(|c| c.checked_sub(1))
            .and_then(|c| c.checked_pow(n as u32))
            .filter(|&c| c <= MAX_CELLS)
            .ok_or(SetError::TooLarge)?;
        let step = Rational::new(BigInt::one(), BigInt::one() << k);
        // cells start at j·step with −m·2^k < j ≤ m·2^k − 1
        let lo = -(m << k) + 1;
        let hi = (m << k) - 1;
        let mut idx = vec![lo; n];
        let mut hits: u64 = 0;
        'grid: loop {
            let factors = idx
                .iter()
                .map(|&j| {
                    let a = Rational::from_integer(j.into()) * &step;
                    let b = &a + &step;
                    Interval1D::closed(a, b).expect("a < b")
                })
                .collect();
            if covered(&Cuboid { factors }, f_set.boxes()) {
                hits += 1;
            }
            for c in idx.iter_mut() {
                if *c < hi {
                    *c += 1;
                    continue 'grid;
                }
                *c = lo;
            }
            break;
        }
        out.push((
            k,
            Rational::new(BigInt::from(hits), BigInt::one() << (k as usize * n)),
        ));
    }
    Ok(out)
}
