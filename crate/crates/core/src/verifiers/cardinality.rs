//! Cardinality forms for finite subsets of `Z^n`.

use num_bigint::BigInt;
use num_traits::One;

use super::{check_pair, rat, Certificate, TheoremId, VerifyError};
use crate::exactnum::{RadicalSum, Rational};
use crate::sets::{weighted_sum_count, SetError, SetExpr};

/// Rejects anything but a finite set of integer points; returns `|A|`.
fn lattice_set_size(a: &SetExpr) -> Result<BigInt, VerifyError> {
    if !a.boxes().is_empty() {
        return Err(VerifyError::Precondition(
            "expected a finite point set, got boxes".into(),
        ));
    }
    if let Some(p) = a
        .points()
        .iter()
        .find(|p| p.iter().any(|x| !x.is_integer()))
    {
        return Err(VerifyError::Precondition(format!(
            "non-integer point {}",
            crate::functions::fmt_point(p)
        )));
    }
    Ok(BigInt::from(a.points().len()))
}

fn unit_lattice_cube(n: usize) -> SetExpr {
    let pts = (0..1u64 << n).map(|mask| {
        (0..n)
            .map(|i| Rational::from_integer(BigInt::from((mask >> i) & 1)))
            .collect()
    });
    SetExpr::from_points(n, pts).expect("n >= 1")
}

/// `|A+B+{0,1}^n|^{1/n}` against `|A|^{1/n}+|B|^{1/n}`.
pub fn verify_card_sum(a: &SetExpr, b: &SetExpr) -> Result<Certificate, VerifyError> {
    let n = check_pair(a, b)?;
    let na = lattice_set_size(a)?;
    let nb = lattice_set_size(b)?;
    if n > 16 {
        return Err(SetError::TooLarge.into());
    }
    let one = Rational::one();
    let cube = unit_lattice_cube(n);
    let total = weighted_sum_count(&[(a, &one), (b, &one), (&cube, &one)])?;
    let deg = n as u32;
    let lhs = RadicalSum::root(&rat(&total), deg)?;
    let rhs = RadicalSum::new(deg, &[(one.clone(), rat(&na)), (one, rat(&nb))])?;
    Ok(Certificate::decide(TheoremId::CardSum, lhs, rhs, || {
        format!("|A+B+{{0,1}}^{n}|={total}, |A|={na}, |B|={nb}")
    }))
}

/// `|A+B| ≥ |A|+|B|−1`.
pub fn verify_trivial_card(a: &SetExpr, b: &SetExpr) -> Result<Certificate, VerifyError> {
    check_pair(a, b)?;
    let na = lattice_set_size(a)?;
    let nb = lattice_set_size(b)?;
    let one = Rational::one();
    let total = weighted_sum_count(&[(a, &one), (b, &one)])?;
    let lhs = RadicalSum::from_rational(&rat(&total))?;
    let rhs = RadicalSum::from_rational(&(rat(&na) + rat(&nb) - one))?;
    Ok(Certificate::decide(TheoremId::TrivialCard, lhs, rhs, || {
        format!("|A+B|={total}, |A|={na}, |B|={nb}")
    }))
}
