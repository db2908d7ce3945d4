//! Persistence modules with a finite spectrum and their barcodes.
//!
//! A module is stored by sampling it once or more in every gap of its
//! spectrum; the structure maps between consecutive samples are GF(2)
//! matrices, one per parity. [`decompose`] recovers the barcode through the
//! rank invariant and [`module_from_barcode`] builds the canonical module of a
//! barcode, so the two are mutually inverse on valid input.

mod decompose;
mod module;

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};

pub(crate) use decompose::canonical_samples;
pub use decompose::{decompose, module_from_barcode, rank_invariant, rank_table};
pub use module::{validate_module, SampledModule, Violation};

/// Element of Z/2, the supergrading of a bar or a vector space summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn from_bit(bit: u64) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn index(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit((self.index() + rhs.index()) as u64)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A graded dimension `(even, odd)`.
pub type GradedDim = [usize; 2];

/// Finite truncation of a spectrum: strictly increasing points inside `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spectrum {
    points: Vec<Rational>,
    lo: Rational,
    hi: Rational,
}

impl Spectrum {
    pub fn new(points: Vec<Rational>, lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidSpectrum(format!(
                "horizon [{}, {}] is reversed",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpectrum(format!(
                "points not strictly increasing at {} >= {}",
                format_rational(&w[0]),
                format_rational(&w[1])
            )));
        }
        if let Some(p) = points.iter().find(|p| **p < lo || **p > hi) {
            return Err(Error::InvalidSpectrum(format!(
                "point {} outside the horizon",
                format_rational(p)
            )));
        }
        Ok(Spectrum { points, lo, hi })
    }

    /// Sorts and deduplicates `points`; the horizon is widened to cover them.
    pub fn from_points(mut points: Vec<Rational>, lo: Rational, hi: Rational) -> Self {
        points.sort();
        points.dedup();
        let lo = points.first().map_or(lo.clone(), |p| p.clone().min(lo));
        let hi = points.last().map_or(hi.clone(), |p| p.clone().max(hi));
        let hi = hi.max(lo.clone());
        Spectrum { points, lo, hi }
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// Number of points strictly below `x`; for `x` off the spectrum this is
    /// the index of the gap containing `x`.
    pub fn gap_index(&self, x: &Rational) -> usize {
        self.points.partition_point(|p| p < x)
    }

    /// Points in the open interval `(a, b)`.
    pub fn points_between<'a>(&'a self, a: &Rational, b: &Rational) -> &'a [Rational] {
        let start = self.points.partition_point(|p| p <= a);
        let end = self.points.partition_point(|p| p < b);
        &self.points[start..end.max(start)]
    }

    pub fn shifted(&self, t: &Rational) -> Spectrum {
        Spectrum {
            points: self.points.iter().map(|p| p + t).collect(),
            lo: &self.lo + t,
            hi: &self.hi + t,
        }
    }
}

/// One interval of a barcode.
///
/// Containment is strict: `s` lies in the bar when `birth < s < death`.
/// A bar produced by cutting an unbounded family at a horizon has
/// `death = +inf` and records the cut in `truncated_at`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub birth: Scalar,
    pub death: Scalar,
    pub parity: Parity,
    pub truncated_at: Option<Rational>,
}

impl Bar {
    pub fn new(birth: Scalar, death: Scalar, parity: Parity) -> Self {
        Bar {
            birth,
            death,
            parity,
            truncated_at: None,
        }
    }

    pub fn finite(birth: Rational, death: Rational, parity: Parity) -> Self {
        Bar::new(Scalar::Finite(birth), Scalar::Finite(death), parity)
    }

    /// A bar that is known to live at least until `cut`, stored with death `+inf`.
    pub fn truncated(birth: Scalar, cut: Rational, parity: Parity) -> Self {
        Bar {
            birth,
            death: Scalar::PosInf,
            parity,
            truncated_at: Some(cut),
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    pub fn contains(&self, s: &Rational) -> bool {
        self.birth < *s && self.death > *s
    }

    /// Death used when the bar is measured: the cut for truncated bars.
    pub fn nominal_death(&self) -> Scalar {
        match &self.truncated_at {
            Some(cut) => Scalar::Finite(cut.clone()),
            None => self.death.clone(),
        }
    }

    /// `death - birth` on the nominal interval; `+inf` when an end is infinite.
    pub fn nominal_length(&self) -> Scalar {
        match (&self.birth, self.nominal_death()) {
            (Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(b - a),
            _ => Scalar::PosInf,
        }
    }

    /// Both stored endpoints finite and not truncated.
    pub fn is_finite(&self) -> bool {
        self.birth.is_finite() && self.death.is_finite()
    }

    /// `(a, +inf)` with `a` finite, truncated or not.
    pub fn is_half_infinite(&self) -> bool {
        self.birth.is_finite() && self.death == Scalar::PosInf
    }

    pub fn is_fully_infinite(&self) -> bool {
        self.birth == Scalar::NegInf && self.death == Scalar::PosInf
    }

    pub fn shifted(&self, t: &Rational) -> Bar {
        Bar {
            birth: self.birth.shift(t),
            death: self.death.shift(t),
            parity: self.parity,
            truncated_at: self.truncated_at.as_ref().map(|c| c + t),
        }
    }

    /// Key used for graded multiset comparisons that ignore truncation marks.
    fn interval_key(&self) -> (Scalar, Scalar, Parity) {
        (self.birth.clone(), self.death.clone(), self.parity)
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}", self.birth, self.death)?;
        if let Some(cut) = &self.truncated_at {
            write!(f, " [cut {}]", format_rational(cut))?;
        }
        write!(f, ")_{}", self.parity)
    }
}

/// A finite multiset of bars whose finite endpoints lie in `spectrum`.
#[derive(Clone, Debug)]
pub struct Barcode {
    spectrum: Spectrum,
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(spectrum: Spectrum, bars: Vec<Bar>) -> Result<Self> {
        for bar in &bars {
            check_bar(&spectrum, bar)?;
        }
        Ok(Barcode { spectrum, bars })
    }

    pub fn empty(spectrum: Spectrum) -> Self {
        Barcode {
            spectrum,
            bars: Vec::new(),
        }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Bars sorted by (birth, death, parity, cut).
    pub fn sorted_bars(&self) -> Vec<Bar> {
        let mut bars = self.bars.clone();
        bars.sort();
        bars
    }

    /// Graded number of bars strictly containing `s`.
    pub fn graded_count_over(&self, s: &Rational) -> GradedDim {
        let mut dim = [0, 0];
        for bar in self.bars.iter().filter(|b| b.contains(s)) {
            dim[bar.parity.index()] += 1;
        }
        dim
    }

    /// Multiset equality of `(birth, death, parity)` with equal spectra,
    /// ignoring truncation marks.
    pub fn same_intervals(&self, other: &Barcode) -> bool {
        let keys = |b: &Barcode| {
            let mut v: Vec<_> = b.bars.iter().map(Bar::interval_key).collect();
            v.sort();
            v
        };
        self.spectrum == other.spectrum && keys(self) == keys(other)
    }

    /// Every finite endpoint, with multiplicity, that is not in the spectrum.
    /// Always empty for a barcode built through [`Barcode::new`].
    pub fn off_spectrum_endpoints(&self) -> Vec<Rational> {
        self.bars
            .iter()
            .flat_map(|b| [b.birth.finite(), b.death.finite()])
            .flatten()
            .filter(|x| !self.spectrum.contains(x))
            .cloned()
            .collect()
    }

    /// Replaces every truncated bar by an honest `(birth, +inf)` bar.
    pub fn promote_truncated(&self) -> Barcode {
        let bars = self
            .bars
            .iter()
            .map(|b| Bar {
                truncated_at: None,
                ..b.clone()
            })
            .collect();
        Barcode {
            spectrum: self.spectrum.clone(),
            bars,
        }
    }

    pub fn into_parts(self) -> (Spectrum, Vec<Bar>) {
        (self.spectrum, self.bars)
    }
}

impl PartialEq for Barcode {
    fn eq(&self, other: &Self) -> bool {
        self.spectrum == other.spectrum && self.sorted_bars() == other.sorted_bars()
    }
}

impl Eq for Barcode {}

fn check_bar(spectrum: &Spectrum, bar: &Bar) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidBarcode(format!("bar {bar}: {why}")));
    if bar.birth == Scalar::PosInf {
        return bad("birth is +inf");
    }
    if bar.death == Scalar::NegInf {
        return bad("death is -inf");
    }
    if bar.birth > bar.death {
        return bad("birth after death");
    }
    for end in [&bar.birth, &bar.death] {
        if let Scalar::Finite(x) = end {
            if !spectrum.contains(x) {
                return bad("finite endpoint is not a spectrum point");
            }
        }
    }
    if let Some(cut) = &bar.truncated_at {
        if bar.death != Scalar::PosInf {
            return bad("truncated bar must have death +inf");
        }
        if bar.birth >= *cut {
            return bad("truncation cut is not after the birth");
        }
    }
    Ok(())
}
