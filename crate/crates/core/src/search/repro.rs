//! Replays the worked examples and compares against the recorded values.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::exactnum::{ExtendedExponent, RadicalSum, Rational};
use crate::functions::CubeSpec;
use crate::sets::{Cuboid, Interval1D, SetExpr};
use crate::verifiers::{
    hks_derived_instance, verify, verify_card_sum, verify_hks, verify_hks_sqrt, verify_lemma_ell,
    Certificate, TheoremId, Verdict, VerifyRequest,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReproCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn z(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn closed(lo: Rational, hi: Rational) -> Interval1D {
    Interval1D::closed(lo, hi).expect("lo <= hi")
}

fn interval(lo: Rational, hi: Rational) -> SetExpr {
    SetExpr::interval(closed(lo, hi))
}

fn cube(n: usize, lo: Rational, hi: Rational) -> SetExpr {
    SetExpr::closed_cube(n, lo, hi).expect("lo <= hi")
}

fn points(n: usize, p: &[&[i64]]) -> SetExpr {
    SetExpr::from_lattice_points(n, p.iter().copied()).expect("non-empty")
}

fn lattice_cube(n: usize, m: i64) -> SetExpr {
    let side = (m + 1) as u64;
    let pts: Vec<Vec<i64>> = (0..side.pow(n as u32))
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let c = (i % side) as i64;
                    i /= side;
                    c
                })
                .collect()
        })
        .collect();
    SetExpr::from_lattice_points(n, pts.iter().map(|p| p.as_slice())).expect("non-empty")
}

fn rational(r: Rational) -> RadicalSum {
    RadicalSum::from_rational(&r).expect("nonnegative")
}

fn run(req: VerifyRequest) -> Result<Certificate, String> {
    verify(&req).map_err(|e| e.to_string())
}

/// Checks verdict and both sides; returns a one-line summary.
fn expect(
    c: &Certificate,
    verdict: Verdict,
    lhs: &RadicalSum,
    rhs: Option<&RadicalSum>,
) -> Outcome {
    if c.verdict != verdict || &c.lhs != lhs || rhs.is_some_and(|r| &c.rhs != r) {
        return Err(format!(
            "expected {verdict} with lhs {lhs}{}, got {} with {} vs {}",
            rhs.map(|r| format!(" rhs {r}")).unwrap_or_default(),
            c.verdict,
            c.lhs,
            c.rhs
        ));
    }
    Ok(format!("{}: {} vs {}", c.verdict, c.lhs, c.rhs))
}

fn naive_counterexample() -> Outcome {
    // K = [0, m−ε]^n, L = [0, m+ε/2]^n with m = 3, ε = 1/2
    let mut last = String::new();
    for n in 1..=3 {
        let k = cube(n, z(0), q(5, 2));
        let l = cube(n, z(0), q(13, 4));
        let c = run(VerifyRequest::new(TheoremId::Naive, k, l, q(1, 2)))?;
        last = expect(&c, Verdict::Violated, &rational(z(3)), Some(&rational(q(7, 2))))?;
    }
    Ok(format!("n=1..3 {last}"))
}

fn interval_corrector_remark() -> Outcome {
    // I = [−a, 1), K = [−1, 0], L = [−2, 0], λ + a < 1: 2 < 2 + λ
    let mut out = Vec::new();
    for (a, lambda) in [(q(1, 2), q(1, 4)), (q(1, 4), q(1, 2)), (q(1, 3), q(1, 3))] {
        let corrector = CubeSpec::Uniform(
            Interval1D::new(-a.clone(), z(1), false, true).expect("non-empty"),
        );
        let req = VerifyRequest::new(
            TheoremId::Corrector,
            interval(z(-1), z(0)),
            interval(z(-2), z(0)),
            lambda.clone(),
        )
        .with_corrector(corrector);
        let c = run(req)?;
        out.push(expect(
            &c,
            Verdict::Violated,
            &rational(z(2)),
            Some(&rational(z(2) + lambda)),
        )?);
    }
    Ok(out.join("; "))
}

fn lambda_third_failure() -> Outcome {
    let mut last = String::new();
    for n in 1..=3 {
        let req = VerifyRequest::new(
            TheoremId::Corrector,
            cube(n, z(0), z(1)),
            cube(n, z(-5), z(6)),
            q(1, 3),
        )
        .with_corrector(CubeSpec::ClosedUnit);
        let c = run(req)?;
        last = expect(&c, Verdict::Violated, &rational(z(5)), Some(&rational(q(16, 3))))?;
    }
    let g = crate::sets::weighted_sum_count(&[(&cube(2, q(-5, 3), q(11, 3)), &z(1))])
        .map_err(|e| e.to_string())?;
    if g != BigInt::from(25) {
        return Err(format!("G_2([-5/3,11/3]^2) = {g}, expected 25"));
    }
    Ok(format!("n=1..3 {last}; G_2([-5/3,11/3]^2)=25"))
}

fn figure_card_sum(a: SetExpr, expected: i64) -> Outcome {
    let b = points(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
    let c = verify_card_sum(&a, &b).map_err(|e| e.to_string())?;
    let lhs = RadicalSum::root(&z(expected), 2).expect("positive");
    expect(&c, Verdict::HoldsStrict, &lhs, Some(&rational(z(4))))
        .map(|_| format!("|A+{{0,1}}^2+B| = {expected} >= 16"))
}

fn hks_noncomparable() -> Outcome {
    let half = q(1, 2);
    let sides = |x: Rational| -> Result<(Certificate, Certificate), String> {
        let k = interval(-x.clone(), x);
        let closed = verify_hks_sqrt(&k, &k).map_err(|e| e.to_string())?;
        let open = run(VerifyRequest::new(TheoremId::MainBm, k.clone(), k, half.clone()))?;
        Ok((closed, open))
    };
    // x = 3/2: 2⌊x⌋+2 = 4 < 5 = 2⌊x⌋+3
    let (c, o) = sides(q(3, 2))?;
    if c.lhs != rational(z(4)) || o.lhs != rational(z(5)) {
        return Err(format!("x=3/2: closed {} open {}, expected 4 and 5", c.lhs, o.lhs));
    }
    // x = 2: 2x+2 = 6 > 5 = 2x+1
    let (c, o) = sides(z(2))?;
    if c.lhs != rational(z(6)) || o.lhs != rational(z(5)) {
        return Err(format!("x=2: closed {} open {}, expected 6 and 5", c.lhs, o.lhs));
    }
    Ok("x=3/2: closed 4 < open 5; x=2: closed 6 > open 5".into())
}

fn main_equality() -> Outcome {
    for n in 1..=3 {
        for m in 0..=3 {
            let k = cube(n, z(0), z(m));
            let lhs = rational(z(m + 1));
            for lambda in [q(1, 4), q(1, 2), q(2, 3)] {
                let c = run(VerifyRequest::new(TheoremId::MainBm, k.clone(), k.clone(), lambda))?;
                expect(&c, Verdict::HoldsEqual, &lhs, Some(&lhs))?;
            }
        }
    }
    Ok("K=L=[0,m]^n, n=1..3, m=0..3: HoldsEqual at m+1".into())
}

fn half_sum_equality() -> Outcome {
    for n in 1..=3 {
        for m in [1, 3, 5] {
            let k = cube(n, z(0), z(m));
            let l = cube(n, z(-m), z(0));
            let c = run(VerifyRequest::new(TheoremId::HalfSum, k, l, q(1, 2)))?;
            let v = rational(z(m + 1));
            expect(&c, Verdict::HoldsEqual, &v, Some(&v))?;
        }
    }
    Ok("K=-L=[0,m]^n, m odd, n=1..3: HoldsEqual at m+1".into())
}

fn pmean_equality() -> Outcome {
    let k = cube(2, z(0), z(2));
    let c = run(VerifyRequest::new(TheoremId::BmPmean, k.clone(), k, q(1, 2)).with_p(ExtendedExponent::PosInf))?;
    expect(&c, Verdict::HoldsEqual, &rational(z(9)), Some(&rational(z(9))))
}

fn ell_remark() -> Outcome {
    let m = 2;
    let k = SetExpr::from_boxes(vec![
        Cuboid::new(vec![closed(z(-2 * m), z(-1))]).expect("1-d"),
        Cuboid::new(vec![closed(z(1), z(2 * m))]).expect("1-d"),
    ])
    .expect("non-empty");
    let l = points(1, &[&[0]]);
    let tight = SetExpr::from_boxes(vec![
        Cuboid::new(vec![closed(z(-m), q(-1, 2))]).expect("1-d"),
        Cuboid::new(vec![closed(q(1, 2), z(m))]).expect("1-d"),
    ])
    .expect("non-empty");
    let wide = interval(z(-m), z(m));
    let rhs = rational(q(9, 2));
    let a = verify_lemma_ell(&k, &l, &tight, &q(1, 2)).map_err(|e| e.to_string())?;
    expect(&a, Verdict::HoldsStrict, &rational(z(2 * m + 2)), Some(&rhs))?;
    let b = verify_lemma_ell(&k, &l, &wide, &q(1, 2)).map_err(|e| e.to_string())?;
    expect(&b, Verdict::HoldsStrict, &rational(z(2 * m + 1)), Some(&rhs))?;
    Ok("m=2: M gives 6, M' gives 5, both >= 9/2".into())
}

fn card_sum_cubes() -> Outcome {
    for n in 1..=3 {
        for (m1, m2) in [(0, 0), (1, 2), (2, 1)] {
            let c = verify_card_sum(&lattice_cube(n, m1), &lattice_cube(n, m2))
                .map_err(|e| e.to_string())?;
            let v = RadicalSum::root(&z((m1 + m2 + 2).pow(n as u32)), n as u32).expect("positive");
            expect(&c, Verdict::HoldsEqual, &v, None)?;
        }
    }
    Ok("lattice cubes {0..m1}^n, {0..m2}^n: HoldsEqual".into())
}

fn hks_derived() -> Outcome {
    let k = interval(z(0), z(2));
    let inst = hks_derived_instance(&k, &k).map_err(|e| e.to_string())?;
    let c = verify_hks(&inst).map_err(|e| e.to_string())?;
    expect(&c, Verdict::HoldsEqual, &rational(z(9)), Some(&rational(z(9))))
}

/// Every recorded example, in a fixed order.
pub fn repro_paper() -> Vec<ReproCheck> {
    let a1 = points(2, &[&[0, 0], &[1, 0], &[2, 0], &[1, 1]]);
    let a2 = points(2, &[&[0, 0], &[0, 1], &[1, 1], &[4, 1]]);
    let checks: Vec<(&'static str, Outcome)> = vec![
        ("naive-counterexample", naive_counterexample()),
        ("interval-corrector-remark", interval_corrector_remark()),
        ("lambda-third-failure", lambda_third_failure()),
        ("figure-card-sum-18", figure_card_sum(a1, 18)),
        ("figure-card-sum-24", figure_card_sum(a2, 24)),
        ("hks-noncomparable", hks_noncomparable()),
        ("main-equality-cubes", main_equality()),
        ("half-sum-equality-odd", half_sum_equality()),
        ("pmean-equality", pmean_equality()),
        ("ell-remark", ell_remark()),
        ("card-sum-lattice-cubes", card_sum_cubes()),
        ("hks-derived-equality", hks_derived()),
    ];
    checks
        .into_iter()
        .map(|(name, r)| match r {
            Ok(detail) => ReproCheck {
                name,
                passed: true,
                detail,
            },
            Err(detail) => ReproCheck {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}

pub fn repro_table(checks: &[ReproCheck]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(
            out,
            "{:<width$}  {}  {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
    out
}
