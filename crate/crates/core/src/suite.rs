//! The acceptance battery: ten seeded, exact checks.
//!
//! Every criterion compares a fast path against an independent oracle or a
//! closed form, with exact rational arithmetic throughout. Criterion 10
//! audits every barcode produced by the others for endpoints off the
//! spectrum.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distance::{bottleneck_distance, interleaving_distance_bruteforce};
use crate::ellipsoid::{cz_index, ellipsoid_barcode, gaps_longer_than, EllipsoidParams};
use crate::error::Result;
use crate::invariants::{
    check_lipschitz, covering_number, spectral_invariant, translate_barcode,
    translated_point_lower_bound, PerturbationBall, ShClass,
};
use crate::oracle::{brute_force_covering, brute_force_decompose, in_ellipsoid_spectrum};
use crate::persistence::{
    decompose, module_from_barcode, Bar, Barcode, Parity, SampledModule, Spectrum,
};
use crate::random::{
    barcode_like, perturb_barcode, random_barcode, random_basis_change, random_module,
    random_spectrum, ModuleShape,
};
use crate::scalar::{floor, format_rational, int, rat, Rational, Scalar};

/// Result of one criterion.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    /// One deterministic line: `[PASS]  3 decomposition oracle: detail`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }

    /// Wall-clock time against the budget, e.g. `3: 0.42s of 60s`.
    pub fn timing(&self) -> String {
        format!(
            "{:>2}: {:.2}s of {}s",
            self.id,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

/// Collects every barcode the battery produces and checks that each finite
/// endpoint lies in the barcode's spectrum.
#[derive(Default, Debug)]
pub struct Auditor {
    pub checked: usize,
    pub offenders: Vec<String>,
}

impl Auditor {
    pub fn audit(&mut self, label: &str, b: &Barcode) {
        self.checked += 1;
        let off = b.off_spectrum_endpoints();
        if !off.is_empty() {
            let shown: Vec<String> = off.iter().map(format_rational).collect();
            self.offenders
                .push(format!("{label}: {}", shown.join(", ")));
        }
    }
}

pub const CRITERIA: [(u8, &str, u64); 10] = [
    (1, "ellipsoid barcode", 1),
    (2, "round trip", 10),
    (3, "decomposition oracle", 60),
    (4, "isometry", 300),
    (5, "metric axioms", 30),
    (6, "stability", 30),
    (7, "monotonicity", 5),
    (8, "covering bound", 10),
    (9, "gap existence", 5),
    (10, "endpoint spectrality", 1),
];

/// Runs criterion `id` (1 to 10) with the given seed.
pub fn run_criterion(id: u8, seed: u64, auditor: &mut Auditor) -> Outcome {
    let (_, name, secs) = CRITERIA[(id as usize).saturating_sub(1).min(9)];
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(id as u64));
    let result = match id {
        1 => ellipsoid_criterion(auditor),
        2 => round_trip_criterion(&mut rng, auditor),
        3 => decomposition_criterion(&mut rng, auditor),
        4 => isometry_criterion(&mut rng, auditor),
        5 => metric_criterion(&mut rng, auditor),
        6 => stability_criterion(&mut rng, auditor),
        7 => monotonicity_criterion(&mut rng, auditor),
        8 => covering_criterion(&mut rng, auditor),
        9 => gap_criterion(auditor),
        10 => Ok(spectrality_criterion(auditor)),
        _ => Ok(Err(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(secs);
    let (mut passed, mut detail) = match result {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    if passed && elapsed > budget {
        passed = false;
        detail = format!("{detail}; exceeded the time budget");
    }
    Outcome {
        id,
        name,
        passed,
        detail,
        elapsed,
        budget,
    }
}

/// Runs criteria 1 through 10 in order; criterion 10 sees the barcodes of all others.
pub fn run_suite(seed: u64) -> Vec<Outcome> {
    let mut auditor = Auditor::default();
    (1..=10)
        .map(|id| run_criterion(id, seed, &mut auditor))
        .collect()
}

type Check = Result<std::result::Result<String, String>>;

fn fail(msg: String) -> Check {
    Ok(Err(msg))
}

fn ellipsoid_criterion(auditor: &mut Auditor) -> Check {
    let p = EllipsoidParams::new(vec![int(1), int(1)], int(5))?;
    let b = ellipsoid_barcode(&p);
    auditor.audit("ellipsoid a=(1,1) T=5", &b);
    let mut expected: Vec<Bar> = (0..4)
        .map(|k| Bar::finite(int(k), int(k + 1), Parity::Even))
        .collect();
    expected.push(Bar::truncated(Scalar::from_int(4), int(5), Parity::Even));
    let spectrum = Spectrum::new((0..=5).map(int).collect(), int(0), int(5))?;
    if b != Barcode::new(spectrum, expected)? {
        return fail(format!("unexpected bars {:?}", b.sorted_bars()));
    }
    if let Some(x) = b
        .spectrum()
        .points()
        .iter()
        .find(|x| !in_ellipsoid_spectrum(x, p.factors(), p.horizon()))
    {
        return fail(format!("{} is not a Reeb period", format_rational(x)));
    }
    let mut cz = Vec::new();
    for k in 0..5 {
        let c = cz_index(&rat(2 * k + 1, 2), &p)?;
        if c.parity != Parity::Even {
            return fail(format!("odd index at {k}+1/2"));
        }
        cz.push(c.index);
    }
    let want: Vec<BigInt> = [2, 6, 10, 14, 18]
        .iter()
        .map(|&v| BigInt::from(v))
        .collect();
    if cz != want {
        return fail(format!("CZ values {cz:?}"));
    }
    Ok(Ok(
        "5 bars (k, k+1), last truncated at 5, parity 0; CZ 2, 6, 10, 14, 18".into(),
    ))
}

fn round_trip_criterion(rng: &mut ChaCha8Rng, auditor: &mut Auditor) -> Check {
    for trial in 0..500 {
        let s = random_spectrum(rng, 6);
        let b = random_barcode(rng, &s, 8, false);
        let density = rng.gen_range(1..=3);
        let back = decompose(&module_from_barcode(&b, density)?)?;
        auditor.audit("round trip input", &b);
        auditor.audit("round trip output", &back);
        if back != b {
            return fail(format!(
                "trial {trial}: {:?} came back as {:?}",
                b.sorted_bars(),
                back.sorted_bars()
            ));
        }
    }
    Ok(Ok("500/500 barcodes recovered exactly".into()))
}

fn decomposition_criterion(rng: &mut ChaCha8Rng, auditor: &mut Auditor) -> Check {
    let mut bars = 0;
    for trial in 0..200 {
        let s = random_spectrum(rng, 4);
        let shape = ModuleShape {
            density: rng.gen_range(1..=2),
            max_sample_dim: 4,
            total_budget: Some(4),
        };
        let m = random_module(rng, &s, &shape);
        let fast = decompose(&m)?;
        let slow = brute_force_decompose(&m)?;
        auditor.audit("decompose", &fast);
        auditor.audit("brute-force decompose", &slow);
        if fast != slow {
            return fail(format!(
                "trial {trial}: {:?} vs oracle {:?}",
                fast.sorted_bars(),
                slow.sorted_bars()
            ));
        }
        bars += fast.len();
    }
    Ok(Ok(format!(
        "200/200 modules agree with the basis-change oracle ({bars} bars)"
    )))
}

/// A pair of modules on the horizon `[0, 8]` with per-sample dimension at
/// most 2. Even trials draw arbitrary modules; odd trials draw barcodes with
/// matching infinite bars and hide them behind random changes of basis.
fn isometry_pair(rng: &mut ChaCha8Rng, trial: usize) -> Result<(SampledModule, SampledModule)> {
    let shape = ModuleShape {
        density: 1,
        max_sample_dim: 2,
        total_budget: None,
    };
    loop {
        let (s1, s2) = (random_spectrum(rng, 4), random_spectrum(rng, 4));
        if trial.is_multiple_of(2) {
            return Ok((
                random_module(rng, &s1, &shape),
                random_module(rng, &s2, &shape),
            ));
        }
        let b1 = random_barcode(rng, &s1, 3, false);
        let Some(b2) = barcode_like(rng, &b1, &s2, 2) else {
            continue;
        };
        let m1 = module_from_barcode(&b1, 1)?;
        let m2 = module_from_barcode(&b2, 1)?;
        if m1.max_total_dim() <= 2 && m2.max_total_dim() <= 2 {
            return Ok((random_basis_change(rng, &m1), random_basis_change(rng, &m2)));
        }
    }
}

fn isometry_criterion(rng: &mut ChaCha8Rng, auditor: &mut Auditor) -> Check {
    let mut positive = 0;
    for trial in 0..200 {
        let (m1, m2) = isometry_pair(rng, trial)?;
        let (b1, b2) = (decompose(&m1)?, decompose(&m2)?);
        auditor.audit("isometry left", &b1);
        auditor.audit("isometry right", &b2);
        for graded in [true, false] {
            let di = interleaving_distance_bruteforce(&m1, &m2, graded)?;
            let (db, _) = bottleneck_distance(&b1, &b2, graded);
            if di != db {
                return fail(format!(
                    "trial {trial} (graded {graded}): interleaving {di} but bottleneck {db}"
                ));
            }
            if di > Scalar::zero() && di.is_finite() {
                positive += 1;
            }
        }
    }
    Ok(Ok(format!(
        "200/200 pairs equal in both gradings ({positive} of 400 distances finite and positive)"
    )))
}

fn metric_criterion(rng: &mut ChaCha8Rng, auditor: &mut Auditor) -> Check {
    for trial in 0..300 {
        let bs: Vec<Barcode> = (0..3)
            .map(|_| {
                let s = random_spectrum(rng, 6);
                random_barcode(rng, &s, 6, true)
            })
            .collect();
        for b in &bs {
            auditor.audit("metric sample", b);
        }
        for graded in [false, true] {
            let d = |x: &Barcode, y: &Barcode| bottleneck_distance(x, y, graded).0;
            let (ab, ba, bc, ac) = (
                d(&bs[0], &bs[1]),
                d(&bs[1], &bs[0]),
                d(&bs[1], &bs[2]),
                d(&bs[0], &bs[2]),
            );
            if ab != ba {
                return fail(format!("trial {trial}: d(a,b) = {ab} but d(b,a) = {ba}"));
            }
            if ac > &ab + &bc {
                return fail(format!("trial {trial}: d(a,c) = {ac} > {ab} + {bc}"));
            }
            if d(&bs[0], &bs[0]) != Scalar::zero() {
                return fail(format!("trial {trial}: d(a,a) is not 0"));
            }
        }
    }
    Ok(Ok(
        "300/300 triples symmetric and triangular, graded and ungraded".into(),
    ))
}

fn stability_criterion(rng: &mut ChaCha8Rng, auditor: &mut Auditor) -> Check {
    let mut max_seen = Rational::from_integer(0.into());
    for trial in 0..100 {
        let s = random_spectrum(rng, 6);
        let b = random_barcode(rng, &s, 8, true).promote_truncated();
        let delta = rat(rng.gen_range(0..=8), 4);
        let seed: u64 = rng.gen();
        let mut local = ChaCha8Rng::seed_from_u64(seed);
        let moved = perturb_barcode(&b, &delta, &mut local);
        auditor.audit("stability base", &b);
        auditor.audit("stability perturbed", &moved);
        let (d, _) = bottleneck_distance(&b, &moved, false);
        if d > Scalar::Finite(delta.clone()) {
            return fail(format!(
                "trial {trial}: bottleneck {d} exceeds {}",
                format_rational(&delta)
            ));
        }
        let report = check_lipschitz(&b, &PerturbationBall::new(delta.clone())?, 1, seed)?;
        if !report.passed() {
            return fail(format!("trial {trial}: {}", report.violations.join("; ")));
        }
        if report.max_deviation > max_seen {
            max_seen = report.max_deviation;
        }
    }
    Ok(Ok(format!(
        "100/100 perturbations within delta; largest spectral shift {}",
        format_rational(&max_seen)
    )))
}

fn monotonicity_criterion(rng: &mut ChaCha8Rng, auditor: &mut Auditor) -> Check {
    let mut trial = 0;
    while trial < 100 {
        let s = random_spectrum(rng, 6);
        let Some(anchor) = s.points().first().cloned() else {
            continue;
        };
        let mut b = random_barcode(rng, &s, 6, false);
        if ShClass::of(&b)
            .generators
            .iter()
            .all(|g| g.birth == Scalar::NegInf)
        {
            let (spectrum, mut bars) = b.into_parts();
            bars.push(Bar::new(
                Scalar::Finite(anchor),
                Scalar::PosInf,
                Parity::Even,
            ));
            b = Barcode::new(spectrum, bars)?;
        }
        let class = ShClass::of(&b);
        let k = rng.gen_range(class.pi_span().len()..class.len());
        let t = rat(rng.gen_range(1..=40), rng.gen_range(1..=8));
        let moved = translate_barcode(&b, &t);
        auditor.audit("monotonicity base", &b);
        auditor.audit("monotonicity translated", &moved);
        let (before, after) = (spectral_invariant(&b, k)?, spectral_invariant(&moved, k)?);
        if after != before.shift(&t) || after <= before {
            return fail(format!(
                "trial {trial}: class {k} moved from {before} to {after} under t = {t}"
            ));
        }
        trial += 1;
    }
    Ok(Ok(
        "100/100 translations raise the spectral invariant by exactly t".into(),
    ))
}

fn covering_criterion(rng: &mut ChaCha8Rng, auditor: &mut Auditor) -> Check {
    for trial in 0..100 {
        let n = rng.gen_range(0..=8);
        let points: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(0..=40), 4)).collect();
        let delta = rat(rng.gen_range(1..=12), 4);
        let greedy = covering_number(&points, &delta)?;
        let best = brute_force_covering(&points, &delta);
        let half = &delta / int(2);
        let covered = points.iter().all(|e| {
            greedy
                .centers
                .iter()
                .any(|c| if e > c { e - c < half } else { c - e < half })
        });
        if greedy.count != best || greedy.centers.len() != greedy.count || !covered {
            return fail(format!(
                "trial {trial}: greedy {} (covering {covered}) vs brute force {best}",
                greedy.count
            ));
        }
    }
    let b = ellipsoid_barcode(&EllipsoidParams::new(vec![int(1), int(1)], int(5))?);
    auditor.audit("covering ellipsoid", &b);
    let k = translated_point_lower_bound(&b, &int(1))?;
    if k != 6 {
        return fail(format!(
            "ellipsoid a=(1,1) T=5 delta=1 gives K = {k}, expected 6"
        ));
    }
    Ok(Ok(
        "100/100 greedy covers optimal; ellipsoid a=(1,1), T=5, delta=1 gives K = 6".into(),
    ))
}

/// No multiple of any factor lies strictly inside `(lo, hi)`.
fn gap_is_clear(lo: &Rational, hi: &Rational, factors: &[Rational]) -> bool {
    factors.iter().all(|a| {
        let next = Rational::from_integer(floor(&(lo / a)) + 1) * a;
        next >= *hi
    })
}

fn gap_criterion(auditor: &mut Auditor) -> Check {
    let factors = vec![int(1), rat(1393, 985)];
    let ell = int(1) - rat(1, 10);
    let mut counts = Vec::new();
    for t in [100, 200] {
        let p = EllipsoidParams::new(factors.clone(), int(t))?;
        auditor.audit("gap scan", &ellipsoid_barcode(&p));
        let gaps = gaps_longer_than(&p, &ell);
        for (lo, hi) in &gaps {
            let ends_ok = in_ellipsoid_spectrum(lo, &factors, p.horizon())
                && (hi == p.horizon() || in_ellipsoid_spectrum(hi, &factors, p.horizon()));
            if !ends_ok || !gap_is_clear(lo, hi, &factors) || hi - lo <= ell {
                return fail(format!(
                    "T = {t}: ({}, {}) is not a long gap",
                    format_rational(lo),
                    format_rational(hi)
                ));
            }
        }
        counts.push(gaps.len());
    }
    if counts[0] < 5 || counts[1] < counts[0] {
        return fail(format!(
            "long-gap counts {} on [0,100] and {} on [0,200]",
            counts[0], counts[1]
        ));
    }
    Ok(Ok(format!(
        "{} gaps longer than 9/10 on [0,100], {} on [0,200]",
        counts[0], counts[1]
    )))
}

fn spectrality_criterion(auditor: &Auditor) -> std::result::Result<String, String> {
    if auditor.checked == 0 {
        Err("no barcodes were audited; run it after the other criteria".into())
    } else if auditor.offenders.is_empty() {
        Ok(format!(
            "{} barcodes audited, every finite endpoint in the spectrum",
            auditor.checked
        ))
    } else {
        Err(format!(
            "{} offending barcodes: {}",
            auditor.offenders.len(),
            auditor.offenders.join("; ")
        ))
    }
}
