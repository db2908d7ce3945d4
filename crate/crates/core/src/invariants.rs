//! Contact invariants read off a barcode.
//!
//! Half-infinite bars `(a, +inf)` index a basis of the full symplectic
//! cohomology, and fully infinite bars `(-inf, +inf)` span the subspace Π.
//! A class outside Π has spectral invariant equal to the birth of its bar.
//! Hofer-type perturbations are modelled by bottleneck balls; see
//! [`check_lipschitz`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distance::{bottleneck_distance, Partner};
use crate::error::{Error, Result};
use crate::persistence::Barcode;
use crate::random::perturb_barcode;
use crate::scalar::{format_rational, midpoint, Rational, Scalar};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum InfiniteKind {
    FullyInfinite,
    HalfInfinite,
}

/// One basis element of SH: a bar with infinite death.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShGenerator {
    pub birth: Scalar,
    pub kind: InfiniteKind,
    /// Index of the bar in the barcode it was read from.
    pub bar: usize,
}

/// Basis of SH read from the infinite bars, fully infinite bars first, then
/// half-infinite bars by ascending birth. Ties keep barcode order.
/// Truncated bars count as half-infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShClass {
    pub generators: Vec<ShGenerator>,
}

impl ShClass {
    pub fn of(b: &Barcode) -> Self {
        let mut generators: Vec<ShGenerator> = b
            .bars()
            .iter()
            .enumerate()
            .filter(|(_, bar)| bar.death == Scalar::PosInf)
            .map(|(i, bar)| ShGenerator {
                birth: bar.birth.clone(),
                kind: if bar.birth == Scalar::NegInf {
                    InfiniteKind::FullyInfinite
                } else {
                    InfiniteKind::HalfInfinite
                },
                bar: i,
            })
            .collect();
        generators.sort_by(|x, y| (x.kind, &x.birth).cmp(&(y.kind, &y.birth)));
        ShClass { generators }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Indices of the generators spanning Π.
    pub fn pi_span(&self) -> Vec<usize> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind == InfiniteKind::FullyInfinite)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Spectral invariant of basis element `index` of [`ShClass::of`].
///
/// Errors with [`Error::InPiSpan`] for a fully infinite generator; returns
/// `+inf` when the barcode has no generator with that index.
pub fn spectral_invariant(b: &Barcode, index: usize) -> Result<Scalar> {
    let class = ShClass::of(b);
    match class.generators.get(index) {
        None => Ok(Scalar::PosInf),
        Some(g) if g.kind == InfiniteKind::FullyInfinite => Err(Error::InPiSpan(index)),
        Some(g) => Ok(g.birth.clone()),
    }
}

/// Shifts every finite endpoint, truncation cut and spectrum point by `t`.
pub fn translate_barcode(b: &Barcode, t: &Rational) -> Barcode {
    let spectrum = b.spectrum().shifted(t);
    let bars = b.bars().iter().map(|bar| bar.shifted(t)).collect();
    Barcode::new(spectrum, bars).expect("translation preserves spectrality")
}

/// Length of the longest finite, untruncated bar; 0 when there is none.
pub fn boundary_depth(b: &Barcode) -> Rational {
    b.bars()
        .iter()
        .filter(|bar| bar.is_finite())
        .filter_map(|bar| match &bar.nominal_length() {
            Scalar::Finite(l) => Some(l.clone()),
            _ => None,
        })
        .max()
        .unwrap_or_else(Rational::zero)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covering {
    pub count: usize,
    pub centers: Vec<Rational>,
}

/// Fewest centers whose open `δ/2`-neighbourhoods cover `points`.
///
/// Sweeps the sorted points: the first uncovered point `e` opens a center
/// that absorbs every later point `p` with `p - e < δ`, placed at the
/// midpoint of `e` and the last absorbed point.
pub fn covering_number(points: &[Rational], delta: &Rational) -> Result<Covering> {
    if *delta <= Rational::zero() {
        return Err(Error::InvalidArgument(format!(
            "covering radius needs delta > 0, got {}",
            format_rational(delta)
        )));
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut centers = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let start = &sorted[i];
        let mut j = i;
        while j + 1 < sorted.len() && &sorted[j + 1] - start < *delta {
            j += 1;
        }
        centers.push(midpoint(start, &sorted[j]));
        i = j + 1;
    }
    Ok(Covering {
        count: centers.len(),
        centers,
    })
}

/// Finite nominal endpoints of the bars of nominal length at least `delta`.
pub fn long_bar_endpoints(b: &Barcode, delta: &Rational) -> Vec<Rational> {
    let mut out: Vec<Rational> = b
        .bars()
        .iter()
        .filter(|bar| bar.nominal_length() >= Scalar::Finite(delta.clone()))
        .flat_map(|bar| [bar.birth.clone(), bar.nominal_death()])
        .filter_map(|s| match s {
            Scalar::Finite(x) => Some(x),
            _ => None,
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Guaranteed number of distinct translated-point lengths: the covering
/// number of the endpoints of bars of length at least `delta`.
pub fn translated_point_lower_bound(b: &Barcode, delta: &Rational) -> Result<usize> {
    covering_number(&long_bar_endpoints(b, delta), delta).map(|c| c.count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    /// The answer depends on bars cut at the horizon.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VanishingFlags {
    pub has_bar_at_zero: bool,
    pub has_half_infinite: bool,
    pub forces_sh_zero: Verdict,
}

/// Reporting predicates for a model barcode of the identity. Truncated bars
/// are not certified half-infinite.
pub fn vanishing_predicates(b: &Barcode) -> VanishingFlags {
    let has_bar_at_zero = b.bars().iter().any(|bar| bar.birth == Scalar::zero());
    let has_half_infinite = b
        .bars()
        .iter()
        .any(|bar| bar.is_half_infinite() && !bar.is_truncated());
    let forces_sh_zero = if has_half_infinite {
        Verdict::No
    } else if b.bars().iter().any(|bar| bar.is_truncated()) {
        Verdict::Unknown
    } else {
        Verdict::Yes
    };
    VanishingFlags {
        has_bar_at_zero,
        has_half_infinite,
        forces_sh_zero,
    }
}

/// Radius of a bottleneck ball standing in for a Hofer-type ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationBall {
    radius: Rational,
}

impl PerturbationBall {
    pub fn new(radius: Rational) -> Result<Self> {
        if radius < Rational::zero() {
            return Err(Error::InvalidArgument(format!(
                "ball radius {} is negative",
                format_rational(&radius)
            )));
        }
        Ok(PerturbationBall { radius })
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzReport {
    pub invariant: String,
    pub trials: usize,
    pub max_deviation: Rational,
    pub violations: Vec<String>,
}

impl LipschitzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Perturbs `b` inside `ball` `trials` times and compares spectral invariants.
///
/// Truncated bars are promoted to half-infinite bars first. In every trial
/// each half-infinite bar is paired with its partner under an optimal
/// matching, and the birth difference must not exceed the radius. The
/// invariants of equal index are compared as well.
pub fn check_lipschitz(
    b: &Barcode,
    ball: &PerturbationBall,
    trials: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let base = b.promote_truncated();
    let radius = Scalar::Finite(ball.radius.clone());
    let mut max_deviation = Rational::zero();
    let mut violations = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let other = perturb_barcode(&base, &ball.radius, &mut rng);
        let (d, matching) = bottleneck_distance(&base, &other, false);
        if d > radius {
            violations.push(format!(
                "trial {trial}: perturbation left the ball (distance {d})"
            ));
            continue;
        }
        let mut compared: Vec<(String, Scalar, Scalar)> = Vec::new();
        for (i, bar) in base.bars().iter().enumerate() {
            if !bar.is_half_infinite() {
                continue;
            }
            match matching.partner_of_left(i) {
                Some(Partner::Bar(j)) => {
                    compared.push((
                        format!("class of bar {i}"),
                        bar.birth.clone(),
                        other.bars()[*j].birth.clone(),
                    ));
                }
                _ => violations.push(format!("trial {trial}: half-infinite bar {i} is unmatched")),
            }
        }
        let (c1, c2) = (ShClass::of(&base), ShClass::of(&other));
        for k in c1.pi_span().len()..c1.len().max(c2.len()) {
            compared.push((
                format!("spectral invariant {k}"),
                spectral_invariant(&base, k)?,
                spectral_invariant(&other, k)?,
            ));
        }
        for (what, x, y) in compared {
            match x.abs_diff(&y) {
                Scalar::Finite(dev) => {
                    if dev > ball.radius {
                        violations.push(format!(
                            "trial {trial}: {what} moved by {}",
                            format_rational(&dev)
                        ));
                    }
                    if dev > max_deviation {
                        max_deviation = dev;
                    }
                }
                _ => violations.push(format!("trial {trial}: {what} became infinite")),
            }
        }
    }
    Ok(LipschitzReport {
        invariant: "spectral".into(),
        trials,
        max_deviation,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellipsoid::{ellipsoid_barcode, EllipsoidParams};
    use crate::persistence::{Bar, Parity, Spectrum};
    use crate::scalar::{int, rat};

    fn barcode(points: &[Rational], bars: Vec<Bar>) -> Barcode {
        Barcode::new(Spectrum::from_points(points.to_vec(), int(0), int(0)), bars).unwrap()
    }

    fn ellipsoid(a: &[Rational], t: Rational) -> Barcode {
        ellipsoid_barcode(&EllipsoidParams::new(a.to_vec(), t).unwrap())
    }

    #[test]
    fn spectral_values() {
        let b = ellipsoid(&[int(1)], int(1));
        assert_eq!(spectral_invariant(&b, 0).unwrap(), Scalar::zero());
        let b = barcode(
            &[int(3)],
            vec![Bar::new(Scalar::from_int(3), Scalar::PosInf, Parity::Even)],
        );
        assert_eq!(spectral_invariant(&b, 0).unwrap(), Scalar::from_int(3));
        assert_eq!(spectral_invariant(&b, 1).unwrap(), Scalar::PosInf);
        let shifted = translate_barcode(&b, &rat(5, 2));
        assert_eq!(
            spectral_invariant(&shifted, 0).unwrap(),
            Scalar::from_ratio(11, 2)
        );
    }

    #[test]
    fn pi_span_is_rejected() {
        let b = barcode(
            &[int(1)],
            vec![
                Bar::new(Scalar::from_int(1), Scalar::PosInf, Parity::Even),
                Bar::new(Scalar::NegInf, Scalar::PosInf, Parity::Odd),
            ],
        );
        assert_eq!(ShClass::of(&b).pi_span(), vec![0]);
        assert_eq!(spectral_invariant(&b, 0), Err(Error::InPiSpan(0)));
        assert_eq!(spectral_invariant(&b, 1).unwrap(), Scalar::from_int(1));
    }

    #[test]
    fn translation() {
        let b = barcode(
            &[int(0), int(1)],
            vec![Bar::finite(int(0), int(1), Parity::Even)],
        );
        assert_eq!(translate_barcode(&b, &int(0)), b);
        let moved = translate_barcode(&b, &int(5));
        assert_eq!(moved.bars(), &[Bar::finite(int(5), int(6), Parity::Even)]);
        assert_eq!(translate_barcode(&moved, &int(-5)), b);
    }

    #[test]
    fn depth() {
        assert_eq!(boundary_depth(&barcode(&[], vec![])), int(0));
        let b = barcode(
            &[int(0), int(1), rat(3, 2), int(2), int(3)],
            vec![
                Bar::finite(int(0), int(2), Parity::Even),
                Bar::finite(int(1), rat(3, 2), Parity::Odd),
            ],
        );
        assert_eq!(boundary_depth(&b), int(2));
        assert_eq!(
            boundary_depth(&ellipsoid(&[int(1), int(1)], int(5))),
            int(1)
        );
    }

    #[test]
    fn coverings() {
        let c = covering_number(&[int(0), int(5)], &int(1)).unwrap();
        assert_eq!(c.count, 2);
        let c = covering_number(&[int(0), rat(1, 4), rat(1, 2)], &int(1)).unwrap();
        assert_eq!(
            c,
            Covering {
                count: 1,
                centers: vec![rat(1, 4)]
            }
        );
        assert_eq!(covering_number(&[], &int(1)).unwrap().count, 0);
        assert!(covering_number(&[int(0)], &int(0)).is_err());
        // open neighbourhoods: points exactly delta apart need two centers
        assert_eq!(
            covering_number(&[int(0), int(1)], &int(1)).unwrap().count,
            2
        );
    }

    #[test]
    fn lower_bounds() {
        let b = ellipsoid(&[int(1), int(1)], int(5));
        assert_eq!(
            long_bar_endpoints(&b, &int(1)),
            (0..=5).map(int).collect::<Vec<_>>()
        );
        assert_eq!(translated_point_lower_bound(&b, &int(1)).unwrap(), 6);
        assert_eq!(
            translated_point_lower_bound(&barcode(&[], vec![]), &int(1)).unwrap(),
            0
        );
        let single = barcode(
            &[int(0), int(2)],
            vec![Bar::finite(int(0), int(2), Parity::Even)],
        );
        assert_eq!(translated_point_lower_bound(&single, &int(3)).unwrap(), 0);
    }

    #[test]
    fn vanishing() {
        let f = vanishing_predicates(&ellipsoid(&[int(1)], int(2)));
        assert_eq!(f.forces_sh_zero, Verdict::Unknown);
        let b = barcode(
            &[int(0)],
            vec![Bar::new(Scalar::zero(), Scalar::PosInf, Parity::Even)],
        );
        assert_eq!(
            vanishing_predicates(&b),
            VanishingFlags {
                has_bar_at_zero: true,
                has_half_infinite: true,
                forces_sh_zero: Verdict::No
            }
        );
        let b = barcode(
            &[int(0), int(3)],
            vec![Bar::finite(int(0), int(3), Parity::Even)],
        );
        assert_eq!(vanishing_predicates(&b).forces_sh_zero, Verdict::Yes);
    }

    #[test]
    fn lipschitz_harness() {
        let b = barcode(
            &[int(0)],
            vec![Bar::new(Scalar::zero(), Scalar::PosInf, Parity::Even)],
        );
        let r = check_lipschitz(&b, &PerturbationBall::new(int(0)).unwrap(), 5, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_deviation, int(0));

        let b = ellipsoid(&[int(1), rat(3, 2)], int(6));
        let r = check_lipschitz(&b, &PerturbationBall::new(rat(1, 4)).unwrap(), 100, 7).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.max_deviation <= rat(1, 4));
        assert!(PerturbationBall::new(int(-1)).is_err());
    }
}
