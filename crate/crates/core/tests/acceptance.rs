//! Acceptance criteria. Each test prints one PASS/FAIL line straight to the
//! process stdout so the summary survives output capture.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use discrete_bm::exactnum::{
    compare_radicals, rat_floor, ExtendedExponent, RadicalSum, Rational,
};
use discrete_bm::functions::{
    cavalieri_sum, lattice_sum, make_admissible_h, sup_conv, CubeSpec, PointMassFunction,
};
use discrete_bm::search::{generate, repro_paper, InstanceFamily};
use discrete_bm::sets::{Cuboid, Interval1D, LatticeBasis, SetExpr};
use discrete_bm::verifiers::{
    riemann_limit_demo, verify, verify_bbl, verify_bbl_on, BblInstance, Certificate, TheoremId,
    Verdict, VerifyRequest,
};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn z(n: i64) -> Rational {
    q(n, 1)
}

fn report(id: u32, name: &str, budget: Duration, start: Instant, result: Result<String, String>) {
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget {budget:?}")),
        Err(d) => (false, d),
    };
    let line = format!(
        "[{}] criterion {id}: {name} ({:.2}s) {detail}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(ok, "{line}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn criterion_1_worked_examples() {
    let start = Instant::now();
    let checks = repro_paper();
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    let result = if failed.is_empty() {
        Ok(format!("{} checks exact", checks.len()))
    } else {
        Err(failed.join("; "))
    };
    report(1, "worked examples", Duration::from_secs(10), start, result);
}

/// `|{z ∈ Z^n : ‖z − ((1−λ)a+λb)‖_∞ < 1 for some a ∈ A, b ∈ B}|`.
fn brute_open_sum(a: &[Vec<i64>], b: &[Vec<i64>], lambda: &Rational) -> usize {
    let n = a[0].len();
    let mu = Rational::one() - lambda;
    let mut hits = BTreeSet::new();
    for x in a {
        for y in b {
            let c: Vec<Rational> = (0..n).map(|i| &mu * z(x[i]) + lambda * z(y[i])).collect();
            let fl: Vec<i64> = c.iter().map(|v| rat_floor(v).try_into().unwrap()).collect();
            for mask in 0..3usize.pow(n as u32) {
                let mut m = mask;
                let p: Vec<i64> = (0..n)
                    .map(|i| {
                        let d = (m % 3) as i64 - 1;
                        m /= 3;
                        fl[i] + d
                    })
                    .collect();
                if (0..n).all(|i| (z(p[i]) - &c[i]).abs() < z(1)) {
                    hits.insert(p);
                }
            }
        }
    }
    hits.len()
}

#[test]
fn criterion_2_random_instances() {
    let start = Instant::now();
    let lambdas = [q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)];
    let dilations = [(1, 1, 2), (1, 2, 3), (2, 1, 4)];
    let mut pairs: Vec<(SetExpr, SetExpr)> = Vec::new();
    // 5,000 point-set pairs and 5,000 box-union pairs in [-6,6]^n
    for (n, density, count) in [(1, 0.3, 1700), (2, 0.08, 1700), (3, 0.006, 1600)] {
        pairs.extend(generate(&InstanceFamily::lattice_points(n, 6, density, 100 + n as u64), count).unwrap());
    }
    let point_pairs = pairs.len();
    for (n, count) in [(1, 1700), (2, 1700), (3, 1600)] {
        for d in 1..=4u32 {
            let fam = InstanceFamily::box_union(n, 6, 3, d, 200 + 10 * n as u64 + u64::from(d));
            pairs.extend(generate(&fam, count / 4).unwrap());
        }
    }
    let mut violations = Vec::new();
    let mut checked = 0usize;
    let mut oracle_checked = 0usize;
    for (i, (k, l)) in pairs.iter().enumerate() {
        let n = k.dim();
        let lambda = lambdas[i % lambdas.len()].clone();
        let ps = [
            ExtendedExponent::Finite(q(-1, n as i64)),
            ExtendedExponent::Finite(z(0)),
            ExtendedExponent::Finite(q(1, 2)),
            ExtendedExponent::Finite(z(1)),
            ExtendedExponent::Finite(z(2)),
            ExtendedExponent::PosInf,
        ];
        let mut reqs = vec![VerifyRequest::new(TheoremId::MainBm, k.clone(), l.clone(), lambda.clone())];
        reqs.extend(ps.iter().map(|p| {
            VerifyRequest::new(TheoremId::BmPmean, k.clone(), l.clone(), lambda.clone()).with_p(p.clone())
        }));
        let (m, p, qq) = dilations[i % dilations.len()];
        let dil = VerifyRequest::new(TheoremId::RationalDilation, k.clone(), l.clone(), lambda.clone())
            .with_dilation(m, p, qq);
        let positive = k.count_lattice().is_positive() && l.count_lattice().is_positive();
        if positive {
            reqs.push(dil);
        }
        if i < point_pairs {
            reqs.push(VerifyRequest::new(TheoremId::CardSum, k.clone(), l.clone(), lambda.clone()));
            reqs.push(VerifyRequest::new(TheoremId::TrivialCard, k.clone(), l.clone(), lambda.clone()));
        }
        for req in &reqs {
            let c = verify(req).unwrap_or_else(|e| panic!("instance {i} {}: {e}", req.theorem));
            checked += 1;
            if c.verdict == Verdict::Violated {
                violations.push(format!("instance {i} {} lambda {}", req.theorem, lambda));
            }
        }
        // independent count for a sample of the point-set pairs
        if i < point_pairs && i % 25 == 0 {
            let a = k.lattice_points().unwrap();
            let b = l.lattice_points().unwrap();
            let main = verify(&reqs[0]).unwrap();
            let brute = brute_open_sum(&a, &b, &lambda);
            let want = RadicalSum::root(&z(brute as i64), n as u32).unwrap();
            if main.lhs != want {
                violations.push(format!("instance {i}: lhs {} but brute count {brute}", main.lhs));
            }
            oracle_checked += 1;
        }
    }
    let result = if violations.is_empty() {
        Ok(format!(
            "{} instances, {checked} certificates, {oracle_checked} brute-checked, 0 violations",
            pairs.len()
        ))
    } else {
        Err(format!("{} problems, first: {}", violations.len(), violations[0]))
    };
    report(2, "random instances hold", Duration::from_secs(300), start, result);
}

fn random_pmf(r: &mut ChaCha8Rng, n: usize, max_pts: usize) -> (PointMassFunction, SetExpr) {
    let count = r.gen_range(1..=max_pts.min(7usize.pow(n as u32)));
    let mut pts = BTreeSet::new();
    while pts.len() < count {
        let p: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
        pts.insert(p);
    }
    let support: Vec<(Vec<Rational>, Rational)> = pts
        .iter()
        .map(|p| (p.iter().map(|&c| z(c)).collect(), q(r.gen_range(1..=16), 4)))
        .collect();
    let f = PointMassFunction::new(n, support, None).unwrap();
    let set = SetExpr::from_lattice_points(n, pts.iter().map(|p| p.as_slice())).unwrap();
    (f, set)
}

fn same_outcome(a: &Certificate, b: &Certificate) -> bool {
    a.verdict == b.verdict && a.lhs == b.lhs && a.rhs == b.rhs && a.proof == b.proof
}

#[test]
fn criterion_3_functional_inequality() {
    let start = Instant::now();
    let lambdas = [q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)];
    let mut r = rng(3);
    let mut problems = Vec::new();
    for i in 0..1000 {
        let n = 1 + i % 2;
        let p = match (i / 2) % 4 {
            0 => ExtendedExponent::Finite(q(-1, n as i64)),
            1 => ExtendedExponent::Finite(z(0)),
            2 => ExtendedExponent::Finite(z(1)),
            _ => ExtendedExponent::PosInf,
        };
        let lambda = lambdas[r.gen_range(0..lambdas.len())].clone();
        let (f, k) = random_pmf(&mut r, n, 12);
        let (g, l) = random_pmf(&mut r, n, 12);
        let h = make_admissible_h(&f, &g, &k, &l, &lambda, &p, 8).unwrap();
        let inst = BblInstance { f, g, h, k, l, lambda, p };
        match verify_bbl(&inst) {
            Ok(c) if c.verdict.holds() => {}
            Ok(c) => problems.push(format!("triple {i}: {} < {}", c.lhs, c.rhs)),
            Err(e) => problems.push(format!("triple {i}: {e}")),
        }
    }
    let mut agree = 0;
    for i in 0..500 {
        let n = 1 + i % 2;
        let fam = InstanceFamily::lattice_points(n, 3, if n == 1 { 0.4 } else { 0.15 }, 300 + i as u64);
        let (k, l) = generate(&fam, 1).unwrap().pop().unwrap();
        let lambda = lambdas[i % lambdas.len()].clone();
        let p = [
            ExtendedExponent::Finite(q(-1, n as i64)),
            ExtendedExponent::Finite(z(0)),
            ExtendedExponent::Finite(z(1)),
            ExtendedExponent::PosInf,
        ][i % 4]
            .clone();
        let mu = Rational::one() - &lambda;
        let combo = k.scale(&mu).unwrap().minkowski_sum(&l.scale(&lambda).unwrap()).unwrap();
        let inst = BblInstance {
            f: PointMassFunction::characteristic(k.clone()),
            g: PointMassFunction::characteristic(l.clone()),
            h: PointMassFunction::characteristic(combo),
            k: k.clone(),
            l: l.clone(),
            lambda: lambda.clone(),
            p: p.clone(),
        };
        let a = verify_bbl(&inst).unwrap();
        let b = verify(&VerifyRequest::new(TheoremId::BmPmean, k, l, lambda).with_p(p)).unwrap();
        if same_outcome(&a, &b) {
            agree += 1;
        } else {
            problems.push(format!("characteristic triple {i}: {} vs {}", a.lhs, b.lhs));
        }
    }
    let result = if problems.is_empty() {
        Ok(format!("1000 admissible triples hold, {agree}/500 characteristic triples match"))
    } else {
        Err(format!("{} problems, first: {}", problems.len(), problems[0]))
    };
    report(3, "functional inequality", Duration::from_secs(300), start, result);
}

fn brute_box_count(b: &Cuboid) -> BigInt {
    let ranges: Vec<(i64, i64)> = b
        .factors
        .iter()
        .map(|f| {
            let lo: i64 = rat_floor(&f.lo).try_into().unwrap();
            let hi: i64 = rat_floor(&f.hi).try_into().unwrap();
            (lo, hi + 1)
        })
        .collect();
    let mut total = BigInt::zero();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let x: Vec<Rational> = cur.iter().map(|&c| z(c)).collect();
        if b.contains(&x) {
            total += 1;
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return total;
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

/// `[lo, hi] · 2^{-256}` around `Σ cᵢ rᵢ^{1/v}` using integer `nth_root`.
fn oracle_enclosure(terms: &[(Rational, u64)], v: u32) -> (Rational, Rational) {
    let scale = BigUint::one() << (256 * v as usize);
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for (c, r) in terms {
        let root_lo = (BigUint::from(*r) * &scale).nth_root(v);
        let root_hi = &root_lo + 1u32;
        let (a, b) = (
            c * Rational::from_integer(BigInt::from(root_lo)),
            c * Rational::from_integer(BigInt::from(root_hi)),
        );
        lo += a.clone().min(b.clone());
        hi += a.max(b);
    }
    let d = Rational::from_integer(BigInt::one() << 256);
    (lo / &d, hi / d)
}

fn random_radical(r: &mut ChaCha8Rng) -> (Vec<(Rational, u64)>, u32, RadicalSum) {
    let v = r.gen_range(1..=4u32);
    let count = r.gen_range(1..=3);
    let terms: Vec<(Rational, u64)> = (0..count)
        .map(|_| (q(r.gen_range(1..=12), r.gen_range(1..=6)), r.gen_range(1..=400u64)))
        .collect();
    let exact: Vec<(Rational, Rational)> =
        terms.iter().map(|(c, x)| (c.clone(), z(*x as i64))).collect();
    (terms, v, RadicalSum::new(v, &exact).unwrap())
}

#[test]
fn criterion_4_oracle_equivalence() {
    let start = Instant::now();
    let mut r = rng(4);
    let mut problems = Vec::new();
    for i in 0..1000 {
        let n = r.gen_range(1..=3);
        let factors = (0..n)
            .map(|_| {
                let d = r.gen_range(1..=5);
                let a = r.gen_range(-20..=20);
                let b = r.gen_range(-20..=20);
                let (lo, hi) = (q(a.min(b), d), q(a.max(b), d));
                let open = lo != hi;
                Interval1D::new(lo, hi, open && r.gen_bool(0.3), open && r.gen_bool(0.3)).unwrap()
            })
            .collect();
        let b = Cuboid::new(factors).unwrap();
        let fast = SetExpr::from_box(b.clone()).count_lattice();
        let brute = brute_box_count(&b);
        if fast != brute {
            problems.push(format!("box {i} {b}: {fast} vs {brute}"));
        }
    }
    for i in 0..1000 {
        let n = 1 + i % 2;
        let (f, _) = random_pmf(&mut r, n, 10);
        let with_char = i % 3 == 0;
        let f = if with_char {
            let c = SetExpr::closed_cube(n, q(-3, 2), z(1)).unwrap();
            let support = f.support().iter().map(|(p, v)| (p.clone(), v.clone()));
            PointMassFunction::new(n, support, Some(c)).unwrap()
        } else {
            f
        };
        let omega = SetExpr::closed_cube(n, z(-3), z(3)).unwrap();
        let conv = sup_conv(&f, &CubeSpec::open_unit()).unwrap();
        let a = lattice_sum(&conv, &omega).unwrap();
        let b = cavalieri_sum(&conv, &omega).unwrap();
        if a != b {
            problems.push(format!("function {i}: {a} vs {b}"));
        }
    }
    let mut compared = 0;
    while compared < 10_000 {
        let (ta, va, a) = random_radical(&mut r);
        let (tb, vb, b) = random_radical(&mut r);
        let (alo, ahi) = oracle_enclosure(&ta, va);
        let (blo, bhi) = oracle_enclosure(&tb, vb);
        let expected = if ahi < blo {
            Ordering::Less
        } else if bhi < alo {
            Ordering::Greater
        } else {
            continue;
        };
        compared += 1;
        let got = compare_radicals(&a, &b).relation;
        if got != expected {
            problems.push(format!("{a} vs {b}: {got:?}, oracle {expected:?}"));
        }
    }
    let mut equal = 0;
    let fixed = [
        (RadicalSum::root(&z(8), 2).unwrap(), RadicalSum::new(2, &[(z(2), z(2))]).unwrap()),
        (RadicalSum::root(&z(54), 3).unwrap(), RadicalSum::new(3, &[(z(3), z(2))]).unwrap()),
        (RadicalSum::root(&z(4), 4).unwrap(), RadicalSum::root(&z(2), 2).unwrap()),
    ];
    for (a, b) in &fixed {
        if compare_radicals(a, b).relation == Ordering::Equal {
            equal += 1;
        } else {
            problems.push(format!("{a} vs {b} not Equal"));
        }
    }
    for _ in 0..1000 {
        // Σ cᵢ (aᵢ bᵢ^v)^{1/v} against Σ cᵢ bᵢ aᵢ^{1/v}
        let v = r.gen_range(2..=4u32);
        let count = r.gen_range(1..=3);
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for _ in 0..count {
            let c = q(r.gen_range(1..=9), r.gen_range(1..=4));
            let a = r.gen_range(1..=60i64);
            let b = r.gen_range(1..=6i64);
            lhs.push((c.clone(), z(a * b.pow(v))));
            rhs.push((c * z(b), z(a)));
        }
        let x = RadicalSum::new(v, &lhs).unwrap();
        let y = RadicalSum::new(v, &rhs).unwrap();
        if compare_radicals(&x, &y).relation == Ordering::Equal {
            equal += 1;
        } else {
            problems.push(format!("{x} vs {y} not Equal"));
        }
    }
    let result = if problems.is_empty() {
        Ok(format!(
            "1000 boxes, 1000 functions, {compared} separated comparisons, {equal} commensurate pairs Equal"
        ))
    } else {
        Err(format!("{} problems, first: {}", problems.len(), problems[0]))
    };
    report(4, "oracle equivalence", Duration::from_secs(300), start, result);
}

fn floor_q(x: &Rational) -> Rational {
    Rational::from_integer(rat_floor(x))
}

#[test]
fn criterion_5_floor_identities() {
    let start = Instant::now();
    let mut r = rng(5);
    let mut problems = Vec::new();
    let rand_q = |r: &mut ChaCha8Rng| q(r.gen_range(-500..=500), r.gen_range(1..=24));
    for i in 0..10_000 {
        let x = rand_q(&mut r);
        let y = rand_q(&mut r);
        let qq = r.gen_range(1..=12i64);
        let m = r.gen_range(0..=qq);
        let p = r.gen_range(0..=qq - m);
        // ⌊mx/q + py/q + (q−1)/q⌋ ≥ (m⌊x⌋ + p⌊y⌋)/q
        let lhs = floor_q(&(q(m, qq) * &x + q(p, qq) * &y + q(qq - 1, qq)));
        let rhs = (z(m) * floor_q(&x) + z(p) * floor_q(&y)) / z(qq);
        if lhs < rhs {
            problems.push(format!("dilation {i}: x={x} y={y} m={m} p={p} q={qq}"));
        }
        // ⌊(x+y)/2⌋ + 1/2 ≥ (⌊x⌋+⌊y⌋)/2
        let lhs = floor_q(&((&x + &y) / z(2))) + q(1, 2);
        let rhs = (floor_q(&x) + floor_q(&y)) / z(2);
        if lhs < rhs {
            problems.push(format!("half {i}: x={x} y={y}"));
        }
    }
    let result = if problems.is_empty() {
        Ok("10000 random tuples, both identities".to_string())
    } else {
        Err(format!("{} failures, first: {}", problems.len(), problems[0]))
    };
    report(5, "floor identities", Duration::from_secs(60), start, result);
}

#[test]
fn criterion_6_riemann_limit() {
    let start = Instant::now();
    let f = SetExpr::interval(Interval1D::closed(z(0), q(1, 3)).unwrap());
    let window = SetExpr::closed_cube(1, z(-1), z(1)).unwrap();
    let seq = riemann_limit_demo(&f, &window, 12).unwrap();
    let at10 = &seq[10].1;
    let err = (at10 - q(1, 3)).abs();
    let monotone = seq[1..].windows(2).all(|w| w[0].1 <= w[1].1);
    let result = if *at10 == q(341, 1024) && err <= q(1, 1024) && monotone {
        Ok(format!("k=10 gives {at10}, |error| = {err}, nondecreasing for k=1..12"))
    } else {
        Err(format!("k=10 gives {at10}, error {err}, monotone {monotone}"))
    };
    report(6, "Riemann lower sums", Duration::from_secs(60), start, result);
}

#[test]
fn criterion_7_lattice_variant() {
    let start = Instant::now();
    let lambdas = [q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)];
    let ps = [
        ExtendedExponent::Finite(z(0)),
        ExtendedExponent::Finite(z(1)),
        ExtendedExponent::PosInf,
    ];
    let mut r = rng(7);
    let mut problems = Vec::new();
    for i in 0..100 {
        let n = 1 + i % 2;
        let lambda = lambdas[i % lambdas.len()].clone();
        let p = ps[i % ps.len()].clone();
        // data on the pulled-back side, on Z^n
        let (f0, k0) = random_pmf(&mut r, n, 6);
        let (g0, l0) = random_pmf(&mut r, n, 6);
        let h0 = make_admissible_h(&f0, &g0, &k0, &l0, &lambda, &p, 8).unwrap();
        // the same data pushed forward to 2Z^n by doubling coordinates
        let push = |f: &PointMassFunction| {
            let support = f
                .support()
                .iter()
                .map(|(x, v)| (x.iter().map(|c| c * z(2)).collect(), v.clone()));
            PointMassFunction::new(n, support, None).unwrap()
        };
        let on_lattice = BblInstance {
            f: push(&f0),
            g: push(&g0),
            h: push(&h0),
            k: k0.scale(&z(2)).unwrap(),
            l: l0.scale(&z(2)).unwrap(),
            lambda: lambda.clone(),
            p: p.clone(),
        };
        let pulled = BblInstance {
            f: f0,
            g: g0,
            h: h0,
            k: k0,
            l: l0,
            lambda,
            p,
        };
        let basis = LatticeBasis::scalar(n, z(2)).unwrap();
        let a = verify_bbl_on(&on_lattice, &basis).unwrap();
        let b = verify_bbl(&pulled).unwrap();
        if a != b {
            problems.push(format!("instance {i}: {} vs {}", a.lhs, b.lhs));
        }
        if !a.verdict.holds() {
            problems.push(format!("instance {i}: Violated"));
        }
    }
    let result = if problems.is_empty() {
        Ok("100 instances, certificates identical".to_string())
    } else {
        Err(format!("{} problems, first: {}", problems.len(), problems[0]))
    };
    report(7, "lattice variant", Duration::from_secs(120), start, result);
}
