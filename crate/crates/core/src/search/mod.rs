//! Seeded instance generators, verifier scans and the worked-example suite.
//!
//! Randomness comes from ChaCha8 seeded with `seed`; instance `i` draws from
//! stream `i`, so any instance can be regenerated without the others.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactnum::{ExtendedExponent, RadicalSum, Rational};
use crate::functions::CubeSpec;
use crate::sets::{Cuboid, Interval1D, SetExpr};
use crate::verifiers::{verify, Certificate, TheoremId, Verdict, VerifyError, VerifyRequest};

mod repro;
#[cfg(test)]
mod tests;

pub use repro::{repro_paper, repro_table, ReproCheck};

/// How each set of a pair is drawn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Each lattice point of the window kept with probability `density`.
    LatticePoints { density: f64 },
    /// Up to `max_boxes` boxes with endpoints in `(1/denominator_bound)Z`.
    BoxUnion {
        max_boxes: usize,
        denominator_bound: u32,
    },
}

/// Sets inside `[−window, window]^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFamily {
    pub n: usize,
    pub window: i64,
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl InstanceFamily {
    pub fn lattice_points(n: usize, window: i64, density: f64, seed: u64) -> Self {
        InstanceFamily {
            n,
            window,
            kind: GeneratorKind::LatticePoints { density },
            seed,
        }
    }

    pub fn box_union(
        n: usize,
        window: i64,
        max_boxes: usize,
        denominator_bound: u32,
        seed: u64,
    ) -> Self {
        InstanceFamily {
            n,
            window,
            kind: GeneratorKind::BoxUnion {
                max_boxes,
                denominator_bound,
            },
            seed,
        }
    }

    fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: &str| Err(VerifyError::Precondition(m.into()));
        if self.n == 0 || self.n > 8 {
            return bad("dimension must be between 1 and 8");
        }
        if self.window < 0 || self.window > 1 << 20 {
            return bad("window must be a nonnegative integer below 2^20");
        }
        match self.kind {
            GeneratorKind::LatticePoints { density } if !(density > 0.0 && density <= 1.0) => {
                bad("density must lie in (0, 1]")
            }
            GeneratorKind::BoxUnion {
                max_boxes,
                denominator_bound,
            } if max_boxes == 0 || denominator_bound == 0 => {
                bad("max_boxes and denominator_bound must be at least 1")
            }
            _ => Ok(()),
        }
    }

    /// The RNG for instance `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    fn draw_set(&self, rng: &mut ChaCha8Rng) -> SetExpr {
        match self.kind {
            GeneratorKind::LatticePoints { density } => self.draw_points(rng, density),
            GeneratorKind::BoxUnion {
                max_boxes,
                denominator_bound,
            } => self.draw_boxes(rng, max_boxes, denominator_bound),
        }
    }

    fn draw_points(&self, rng: &mut ChaCha8Rng, density: f64) -> SetExpr {
        let w = self.window;
        let side = (2 * w + 1) as u64;
        let total = side.pow(self.n as u32);
        let coords = |mut i: u64| -> Vec<i64> {
            (0..self.n)
                .map(|_| {
                    let c = (i % side) as i64 - w;
                    i /= side;
                    c
                })
                .collect()
        };
        let mut pts: Vec<Vec<i64>> = (0..total)
            .filter(|_| rng.gen_bool(density))
            .map(coords)
            .collect();
        if pts.is_empty() {
            pts.push(coords(rng.gen_range(0..total)));
        }
        SetExpr::from_lattice_points(self.n, pts.iter().map(|p| p.as_slice()))
            .expect("non-empty")
    }

    fn draw_boxes(&self, rng: &mut ChaCha8Rng, max_boxes: usize, dmax: u32) -> SetExpr {
        let w = self.window;
        let count = rng.gen_range(1..=max_boxes);
        let boxes = (0..count)
            .map(|_| {
                let factors = (0..self.n)
                    .map(|_| {
                        let d = i64::from(dmax);
                        let a = rng.gen_range(-w * d..=w * d);
                        let b = rng.gen_range(-w * d..=w * d);
                        let lo = Rational::new(a.min(b).into(), d.into());
                        let hi = Rational::new(a.max(b).into(), d.into());
                        let open = lo != hi;
                        let lo_open = open && rng.gen_ratio(1, 4);
                        let hi_open = open && rng.gen_ratio(1, 4);
                        Interval1D::new(lo, hi, lo_open, hi_open).expect("lo < hi when open")
                    })
                    .collect();
                Cuboid::new(factors).expect("n >= 1")
            })
            .collect();
        SetExpr::from_boxes(boxes).expect("at least one box")
    }
}

/// `count` pairs `(K, L)`; the same family and count always give the same pairs.
pub fn generate(
    family: &InstanceFamily,
    count: usize,
) -> Result<Vec<(SetExpr, SetExpr)>, VerifyError> {
    family.validate()?;
    Ok((0..count as u64)
        .map(|i| {
            let mut rng = family.rng(i);
            let k = family.draw_set(&mut rng);
            let l = family.draw_set(&mut rng);
            (k, l)
        })
        .collect())
}

/// What a scan runs on each generated pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec {
    pub family: InstanceFamily,
    pub lambdas: Vec<Rational>,
    pub theorem: TheoremId,
    pub count: usize,
    pub p: ExtendedExponent,
    pub dilation: Option<(u32, u32, u32)>,
    pub corrector: Option<CubeSpec>,
    pub unguarded: bool,
}

impl ScanSpec {
    pub fn new(family: InstanceFamily, theorem: TheoremId, lambdas: Vec<Rational>, count: usize) -> Self {
        ScanSpec {
            family,
            lambdas,
            theorem,
            count,
            p: ExtendedExponent::PosInf,
            dilation: None,
            corrector: None,
            unguarded: false,
        }
    }

    fn uses_lambda(&self) -> bool {
        !matches!(
            self.theorem,
            TheoremId::RationalDilation
                | TheoremId::CardSum
                | TheoremId::TrivialCard
                | TheoremId::HksSqrt
        )
    }
}

/// One verified instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    /// Position of the pair in the generated list.
    pub index: usize,
    #[serde(rename = "K")]
    pub k: SetExpr,
    #[serde(rename = "L")]
    pub l: SetExpr,
    #[serde(with = "crate::exactnum::serde_rational")]
    pub lambda: Rational,
    /// `lhs − rhs`, exact when both sides are rational.
    #[serde(with = "crate::exactnum::serde_rational")]
    pub slack: Rational,
    pub certificate: Certificate,
}

pub const MAX_LISTED: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub theorem: TheoremId,
    pub instances_run: usize,
    /// Instances rejected by a precondition.
    pub skipped: usize,
    pub min_slack_instance: Option<ScanEntry>,
    pub equality_count: usize,
    /// The first [`MAX_LISTED`] equality instances.
    pub equality_instances: Vec<ScanEntry>,
    pub violation_count: usize,
    pub violations: Vec<ScanEntry>,
    /// Violations on a family the theorem covers.
    pub unexpected: bool,
}

/// `lhs − rhs`, exact for rational sides and from 128-bit enclosures otherwise.
fn slack(lhs: &RadicalSum, rhs: &RadicalSum) -> Rational {
    if let (Some(a), Some(b)) = (lhs.as_rational(), rhs.as_rational()) {
        return a - b;
    }
    let two = Rational::from_integer(BigInt::from(2));
    let (a, b) = lhs.enclose(128);
    let (c, d) = rhs.enclose(128);
    (a + b) / &two - (c + d) / two
}

/// Verdict first, so an equality never ranks above a strict instance whose
/// rounded margin is zero; then slack, pair index and `λ`.
fn rank(a: &ScanEntry, b: &ScanEntry) -> Ordering {
    let v = |e: &ScanEntry| match e.certificate.verdict {
        Verdict::Violated => 0,
        Verdict::HoldsEqual => 1,
        Verdict::HoldsStrict => 2,
    };
    v(a).cmp(&v(b))
        .then_with(|| a.slack.cmp(&b.slack))
        .then_with(|| a.index.cmp(&b.index))
        .then_with(|| a.lambda.cmp(&b.lambda))
}

/// Runs the theorem's verifier on every generated pair and every `λ`.
pub fn scan(spec: &ScanSpec) -> Result<ScanReport, VerifyError> {
    for l in &spec.lambdas {
        crate::exactnum::check_lambda(l)?;
    }
    if spec.uses_lambda() && spec.lambdas.is_empty() {
        return Err(VerifyError::Precondition("empty lambda grid".into()));
    }
    let pairs = generate(&spec.family, spec.count)?;
    let lambdas: Vec<Rational> = if spec.uses_lambda() {
        spec.lambdas.clone()
    } else {
        vec![Rational::new(BigInt::one(), BigInt::from(2))]
    };
    let mut report = ScanReport {
        theorem: spec.theorem,
        instances_run: 0,
        skipped: 0,
        min_slack_instance: None,
        equality_count: 0,
        equality_instances: Vec::new(),
        violation_count: 0,
        violations: Vec::new(),
        unexpected: false,
    };
    for (i, (k, l)) in pairs.into_iter().enumerate() {
        for lambda in &lambdas {
            let req = VerifyRequest {
                theorem: spec.theorem,
                k: k.clone(),
                l: l.clone(),
                lambda: lambda.clone(),
                p: spec.p.clone(),
                dilation: spec.dilation,
                corrector: spec.corrector.clone(),
                unguarded: spec.unguarded,
            };
            let cert = match verify(&req) {
                Ok(c) => c,
                Err(VerifyError::Precondition(_)) => {
                    report.skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            report.instances_run += 1;
            let entry = ScanEntry {
                index: i,
                k: k.clone(),
                l: l.clone(),
                lambda: lambda.clone(),
                slack: slack(&cert.lhs, &cert.rhs),
                certificate: cert,
            };
            match entry.certificate.verdict {
                Verdict::HoldsEqual => {
                    report.equality_count += 1;
                    if report.equality_instances.len() < MAX_LISTED {
                        report.equality_instances.push(entry.clone());
                    }
                }
                Verdict::Violated => {
                    report.violation_count += 1;
                    if report.violations.len() < MAX_LISTED {
                        report.violations.push(entry.clone());
                    }
                }
                Verdict::HoldsStrict => {}
            }
            let better = report
                .min_slack_instance
                .as_ref()
                .is_none_or(|m| rank(&entry, m) == Ordering::Less);
            if better {
                report.min_slack_instance = Some(entry);
            }
        }
    }
    report.unexpected =
        report.violation_count > 0 && spec.theorem.is_guaranteed() && !spec.unguarded;
    Ok(report)
}

impl ScanReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theorem          {}", self.theorem);
        let _ = writeln!(out, "instances run    {}", self.instances_run);
        let _ = writeln!(out, "skipped          {}", self.skipped);
        let _ = writeln!(out, "equalities       {}", self.equality_count);
        let _ = writeln!(out, "violations       {}", self.violation_count);
        if let Some(m) = &self.min_slack_instance {
            let _ = writeln!(
                out,
                "min slack        {} (instance {}, lambda {}, {} vs {})",
                crate::exactnum::format_sig(&m.slack, 12),
                m.index,
                m.lambda,
                m.certificate.lhs,
                m.certificate.rhs
            );
            let _ = writeln!(out, "  K = {}", m.k);
            let _ = writeln!(out, "  L = {}", m.l);
        }
        for v in self.violations.iter().take(5) {
            let _ = writeln!(
                out,
                "violation #{}: K = {}, L = {}, lambda {}: {} < {}",
                v.index, v.k, v.l, v.lambda, v.certificate.lhs, v.certificate.rhs
            );
        }
        if self.unexpected {
            out.push_str("UNEXPECTED: a covered family produced a violation\n");
        }
        out
    }
}
