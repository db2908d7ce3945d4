//! Barcodes of the Reeb flow on the boundary of an ellipsoid.
//!
//! For factors `a_1 <= ... <= a_n` the Reeb periods are the multiples
//! `k a_j`. Off those periods the Floer group has one generator of
//! Conley-Zehnder index `n + 2 Σ_j floor(s / a_j)`, and every gap between
//! consecutive periods is a bar. Irrational factors are out of reach; pass a
//! close rational instead (for example `1393/985` for `√2`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::persistence::{Bar, Barcode, Parity, Spectrum};
use crate::scalar::{floor, format_rational, int, is_integer, Rational, Scalar};

/// Positive factors sorted ascending, and the horizon `T` of the truncation `[0, T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipsoidParams {
    factors: Vec<Rational>,
    horizon: Rational,
}

impl EllipsoidParams {
    /// Sorts `factors`; rejects an empty list, non-positive factors or `T <= 0`.
    pub fn new(mut factors: Vec<Rational>, horizon: Rational) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidEllipsoid(
                "at least one factor is required".into(),
            ));
        }
        if let Some(a) = factors.iter().find(|a| **a <= Rational::zero()) {
            return Err(Error::InvalidEllipsoid(format!(
                "factor {} is not positive",
                format_rational(a)
            )));
        }
        if horizon <= Rational::zero() {
            return Err(Error::InvalidEllipsoid(format!(
                "horizon {} is not positive",
                format_rational(&horizon)
            )));
        }
        factors.sort();
        Ok(EllipsoidParams { factors, horizon })
    }

    pub fn factors(&self) -> &[Rational] {
        &self.factors
    }

    pub fn horizon(&self) -> &Rational {
        &self.horizon
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    /// Supergrading of every generator: `n mod 2`.
    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.factors.len() as u64)
    }

    fn with_horizon(&self, horizon: Rational) -> Self {
        EllipsoidParams {
            factors: self.factors.clone(),
            horizon,
        }
    }
}

/// All multiples `k a_j` in `[0, T]`, merged and deduplicated; horizon `[0, T]`.
pub fn ellipsoid_spectrum(p: &EllipsoidParams) -> Spectrum {
    let mut points = Vec::new();
    for a in &p.factors {
        let count = floor(&(&p.horizon / a));
        let count = count.to_u64().expect("number of multiples fits in u64");
        points.extend((0..=count).map(|k| a * Rational::from_integer(BigInt::from(k))));
    }
    Spectrum::from_points(points, int(0), p.horizon.clone())
}

/// Conley-Zehnder index of the generator at parameter `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CzIndex {
    pub index: BigInt,
    pub parity: Parity,
}

/// `n + 2 Σ_j floor(s / a_j)` for positive `s` off the spectrum.
pub fn cz_index(s: &Rational, p: &EllipsoidParams) -> Result<CzIndex> {
    if *s <= Rational::zero() {
        return Err(Error::InvalidArgument(format!(
            "Conley-Zehnder index needs s > 0, got {}",
            format_rational(s)
        )));
    }
    let mut sum = BigInt::zero();
    for a in &p.factors {
        let q = s / a;
        if is_integer(&q) {
            return Err(Error::OnSpectrum(format_rational(s)));
        }
        sum += floor(&q);
    }
    let index: BigInt = BigInt::from(p.dimension()) + sum * BigInt::from(2);
    let parity = if index.is_even() {
        Parity::Even
    } else {
        Parity::Odd
    };
    Ok(CzIndex { index, parity })
}

/// Connected components of `(0, T)` minus the spectrum, ascending.
fn components(p: &EllipsoidParams) -> Vec<(Rational, Rational)> {
    let spectrum = ellipsoid_spectrum(p);
    let mut cuts: Vec<Rational> = spectrum.points().to_vec();
    if cuts.last() != Some(&p.horizon) {
        cuts.push(p.horizon.clone());
    }
    cuts.windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect()
}

/// One bar per component of `(0, T)` off the spectrum, all of parity `n mod 2`.
/// The component reaching `T` is cut there and stored as a truncated bar.
pub fn ellipsoid_barcode(p: &EllipsoidParams) -> Barcode {
    let spectrum = ellipsoid_spectrum(p);
    let parity = p.parity();
    let comps = components(p);
    let last = comps.len().saturating_sub(1);
    let bars = comps
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            if i == last {
                Bar::truncated(Scalar::Finite(a), b, parity)
            } else {
                Bar::finite(a, b, parity)
            }
        })
        .collect();
    Barcode::new(spectrum, bars).expect("gap endpoints are spectrum points")
}

/// Maximal spectrum-free open intervals of `(0, T)` longer than `ell`, ascending.
/// The interval reaching `T` is included with right end `T`.
pub fn gaps_longer_than(p: &EllipsoidParams, ell: &Rational) -> Vec<(Rational, Rational)> {
    components(p)
        .into_iter()
        .filter(|(a, b)| &(b - a) > ell)
        .collect()
}

/// Number of long gaps on the horizons `T` and `2T`, for recurrence checks.
pub fn long_gap_growth(p: &EllipsoidParams, ell: &Rational) -> (usize, usize) {
    let doubled = p.with_horizon(&p.horizon * int(2));
    (
        gaps_longer_than(p, ell).len(),
        gaps_longer_than(&doubled, ell).len(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn params(a: &[Rational], t: Rational) -> EllipsoidParams {
        EllipsoidParams::new(a.to_vec(), t).unwrap()
    }

    #[test]
    fn spectra() {
        let s = ellipsoid_spectrum(&params(&[int(1)], int(3)));
        assert_eq!(s.points(), &[int(0), int(1), int(2), int(3)]);
        let s = ellipsoid_spectrum(&params(&[int(1), rat(3, 2)], int(3)));
        assert_eq!(s.points(), &[int(0), int(1), rat(3, 2), int(2), int(3)]);
        let s = ellipsoid_spectrum(&params(&[int(2), int(2)], int(5)));
        assert_eq!(s.points(), &[int(0), int(2), int(4)]);
        assert_eq!((s.lo(), s.hi()), (&int(0), &int(5)));
    }

    #[test]
    fn cz_values() {
        let p = params(&[int(1), int(1)], int(10));
        assert_eq!(cz_index(&rat(1, 2), &p).unwrap().index, BigInt::from(2));
        assert_eq!(cz_index(&rat(3, 2), &p).unwrap().index, BigInt::from(6));
        let p = params(&[int(1), int(2), int(5)], int(10));
        let cz = cz_index(&rat(7, 2), &p).unwrap();
        assert_eq!(cz.index, BigInt::from(11));
        assert_eq!(cz.parity, Parity::Odd);
        assert!(matches!(cz_index(&int(2), &p), Err(Error::OnSpectrum(_))));
        assert!(matches!(
            cz_index(&int(-1), &p),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn barcodes() {
        let b = ellipsoid_barcode(&params(&[int(1), int(1)], int(3)));
        assert_eq!(
            b.bars(),
            &[
                Bar::finite(int(0), int(1), Parity::Even),
                Bar::finite(int(1), int(2), Parity::Even),
                Bar::truncated(Scalar::from_int(2), int(3), Parity::Even),
            ]
        );
        let b = ellipsoid_barcode(&params(&[int(1)], int(1)));
        assert_eq!(
            b.bars(),
            &[Bar::truncated(Scalar::zero(), int(1), Parity::Odd)]
        );
        // T off the spectrum: the last piece is cut at T
        let b = ellipsoid_barcode(&params(&[int(1)], rat(5, 2)));
        assert_eq!(
            b.bars().last().unwrap(),
            &Bar::truncated(Scalar::from_int(2), rat(5, 2), Parity::Odd)
        );
    }

    #[test]
    fn one_generator_off_spectrum() {
        let p = params(&[int(1), rat(3, 2)], int(6));
        let b = ellipsoid_barcode(&p);
        for k in 1..24 {
            let s = rat(2 * k - 1, 4);
            if !b.spectrum().contains(&s) {
                assert_eq!(b.graded_count_over(&s), [1, 0], "s = {s}");
            }
        }
    }

    #[test]
    fn integer_gaps() {
        let g = gaps_longer_than(&params(&[int(1), int(1)], int(10)), &rat(9, 10));
        let expected: Vec<_> = (0..10).map(|k| (int(k), int(k + 1))).collect();
        assert_eq!(g, expected);
    }

    #[test]
    fn invalid_params() {
        assert!(EllipsoidParams::new(vec![], int(1)).is_err());
        assert!(EllipsoidParams::new(vec![int(0)], int(1)).is_err());
        assert!(EllipsoidParams::new(vec![int(1)], int(0)).is_err());
        let p = EllipsoidParams::new(vec![int(3), int(1)], int(1)).unwrap();
        assert_eq!(p.factors(), &[int(1), int(3)]);
    }
}
