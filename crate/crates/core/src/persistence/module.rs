use std::fmt;

use super::{GradedDim, Parity, Spectrum};
use crate::gf2::Gf2Matrix;
use crate::scalar::{format_rational, Rational};

/// A persistence module sampled on a grid avoiding its spectrum.
///
/// `maps[i][p]` is the structure map of parity `p` from sample `i` to
/// sample `i + 1`, of shape `dims[i + 1][p] x dims[i][p]`. Construction does
/// not validate; see [`validate_module`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledModule {
    spectrum: Spectrum,
    samples: Vec<Rational>,
    dims: Vec<GradedDim>,
    maps: Vec<[Gf2Matrix; 2]>,
}

impl SampledModule {
    pub fn new(
        spectrum: Spectrum,
        samples: Vec<Rational>,
        dims: Vec<GradedDim>,
        maps: Vec<[Gf2Matrix; 2]>,
    ) -> Self {
        SampledModule {
            spectrum,
            samples,
            dims,
            maps,
        }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn samples(&self) -> &[Rational] {
        &self.samples
    }

    pub fn dims(&self) -> &[GradedDim] {
        &self.dims
    }

    pub fn maps(&self) -> &[[Gf2Matrix; 2]] {
        &self.maps
    }

    pub fn map(&self, i: usize, parity: Parity) -> &Gf2Matrix {
        &self.maps[i][parity.index()]
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Largest total dimension at any sample.
    pub fn max_total_dim(&self) -> usize {
        self.dims.iter().map(|d| d[0] + d[1]).max().unwrap_or(0)
    }

    /// Sum of total dimensions over all samples.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().map(|d| d[0] + d[1]).sum()
    }

    /// Forgets the grading: the odd part is stacked below the even part and
    /// the whole module lives in parity 0.
    pub fn ungraded(&self) -> SampledModule {
        let dims = self.dims.iter().map(|d| [d[0] + d[1], 0]).collect();
        let maps = self
            .maps
            .iter()
            .map(|[even, odd]| [even.direct_sum(odd), Gf2Matrix::zeros(0, 0)])
            .collect();
        SampledModule {
            spectrum: self.spectrum.clone(),
            samples: self.samples.clone(),
            dims,
            maps,
        }
    }

    /// The summand of one parity, stored in parity 0.
    pub fn parity_part(&self, parity: Parity) -> SampledModule {
        let p = parity.index();
        let dims = self.dims.iter().map(|d| [d[p], 0]).collect();
        let maps = self
            .maps
            .iter()
            .map(|m| [m[p].clone(), Gf2Matrix::zeros(0, 0)])
            .collect();
        SampledModule {
            spectrum: self.spectrum.clone(),
            samples: self.samples.clone(),
            dims,
            maps,
        }
    }
}

/// One reason a [`SampledModule`] fails its invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoSamples,
    SamplesNotIncreasing {
        index: usize,
    },
    SampleOnSpectrum {
        index: usize,
    },
    DimsLength {
        samples: usize,
        dims: usize,
    },
    MapsLength {
        expected: usize,
        found: usize,
    },
    MapShape {
        gap: usize,
        parity: Parity,
        expected: (usize, usize),
        found: (usize, usize),
    },
    NonInvertible {
        gap: usize,
        parity: Parity,
    },
    CrowdedGap {
        gap: usize,
        points: usize,
    },
    UnflankedSpectrumPoint {
        point: Rational,
    },
}

impl Violation {
    /// Violations that make the sample data unusable for decomposition.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Violation::NoSamples
                | Violation::SamplesNotIncreasing { .. }
                | Violation::SampleOnSpectrum { .. }
                | Violation::DimsLength { .. }
                | Violation::MapsLength { .. }
                | Violation::MapShape { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSamples => write!(f, "module has no samples"),
            Violation::SamplesNotIncreasing { index } => {
                write!(f, "sample {index} is not greater than sample {}", index - 1)
            }
            Violation::SampleOnSpectrum { index } => {
                write!(f, "sample {index} lies on the spectrum")
            }
            Violation::DimsLength { samples, dims } => {
                write!(f, "{dims} dimension pairs for {samples} samples")
            }
            Violation::MapsLength { expected, found } => {
                write!(f, "{found} structure maps, expected {expected}")
            }
            Violation::MapShape {
                gap,
                parity,
                expected,
                found,
            } => write!(
                f,
                "map {gap} parity {parity} has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Violation::NonInvertible { gap, parity } => write!(
                f,
                "map {gap} parity {parity} crosses no spectrum point but is not invertible"
            ),
            Violation::CrowdedGap { gap, points } => {
                write!(
                    f,
                    "{points} spectrum points between samples {gap} and {}",
                    gap + 1
                )
            }
            Violation::UnflankedSpectrumPoint { point } => write!(
                f,
                "spectrum point {} lacks a sample on one side",
                format_rational(point)
            ),
        }
    }
}

/// Lists every invariant violation of `m`; empty means valid.
pub fn validate_module(m: &SampledModule) -> Vec<Violation> {
    let mut out = Vec::new();
    let k = m.samples.len();
    if k == 0 {
        out.push(Violation::NoSamples);
    }
    for i in 1..k {
        if m.samples[i] <= m.samples[i - 1] {
            out.push(Violation::SamplesNotIncreasing { index: i });
        }
    }
    for (i, s) in m.samples.iter().enumerate() {
        if m.spectrum.contains(s) {
            out.push(Violation::SampleOnSpectrum { index: i });
        }
    }
    if m.dims.len() != k {
        out.push(Violation::DimsLength {
            samples: k,
            dims: m.dims.len(),
        });
    }
    let expected_maps = k.saturating_sub(1);
    if m.maps.len() != expected_maps {
        out.push(Violation::MapsLength {
            expected: expected_maps,
            found: m.maps.len(),
        });
    }
    if !out.is_empty() {
        return out;
    }

    for (i, pair) in m.maps.iter().enumerate() {
        let crossed = m
            .spectrum
            .points_between(&m.samples[i], &m.samples[i + 1])
            .len();
        if crossed > 1 {
            out.push(Violation::CrowdedGap {
                gap: i,
                points: crossed,
            });
        }
        for parity in Parity::BOTH {
            let p = parity.index();
            let expected = (m.dims[i + 1][p], m.dims[i][p]);
            let found = pair[p].shape();
            if found != expected {
                out.push(Violation::MapShape {
                    gap: i,
                    parity,
                    expected,
                    found,
                });
            } else if crossed == 0 && !pair[p].is_invertible() {
                out.push(Violation::NonInvertible { gap: i, parity });
            }
        }
    }
    if let (Some(first), Some(last)) = (m.samples.first(), m.samples.last()) {
        for point in m.spectrum.points() {
            if point >= m.spectrum.lo()
                && point <= m.spectrum.hi()
                && (point < first || point > last)
            {
                out.push(Violation::UnflankedSpectrumPoint {
                    point: point.clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn one_point_spectrum() -> Spectrum {
        Spectrum::new(vec![int(1)], int(0), int(2)).unwrap()
    }

    #[test]
    fn single_sample_is_valid() {
        let m = SampledModule::new(one_point_spectrum(), vec![rat(1, 2)], vec![[1, 0]], vec![]);
        let v = validate_module(&m);
        // the point 1 has no sample above it
        assert_eq!(v, vec![Violation::UnflankedSpectrumPoint { point: int(1) }]);

        let empty = Spectrum::new(vec![], int(0), int(2)).unwrap();
        let m = SampledModule::new(empty, vec![rat(1, 2)], vec![[1, 0]], vec![]);
        assert!(validate_module(&m).is_empty());
    }

    #[test]
    fn zero_map_in_spectrum_free_gap_is_reported() {
        let empty = Spectrum::new(vec![], int(0), int(2)).unwrap();
        let m = SampledModule::new(
            empty,
            vec![rat(1, 2), rat(3, 2)],
            vec![[1, 0], [1, 0]],
            vec![[Gf2Matrix::zeros(1, 1), Gf2Matrix::zeros(0, 0)]],
        );
        assert_eq!(
            validate_module(&m),
            vec![Violation::NonInvertible {
                gap: 0,
                parity: Parity::Even
            }]
        );
    }

    #[test]
    fn structural_problems() {
        let m = SampledModule::new(
            one_point_spectrum(),
            vec![int(1), rat(1, 2)],
            vec![[1, 0]],
            vec![],
        );
        let v = validate_module(&m);
        assert!(v.contains(&Violation::SamplesNotIncreasing { index: 1 }));
        assert!(v.contains(&Violation::SampleOnSpectrum { index: 0 }));
        assert!(v.contains(&Violation::DimsLength {
            samples: 2,
            dims: 1
        }));
        assert!(v.contains(&Violation::MapsLength {
            expected: 1,
            found: 0
        }));
        assert!(v.iter().all(Violation::is_structural));
    }

    #[test]
    fn shape_and_crowding() {
        let s = Spectrum::new(vec![int(1), int(2)], int(0), int(3)).unwrap();
        let m = SampledModule::new(
            s,
            vec![rat(1, 2), rat(5, 2)],
            vec![[1, 0], [2, 0]],
            vec![[Gf2Matrix::zeros(1, 1), Gf2Matrix::zeros(0, 0)]],
        );
        let v = validate_module(&m);
        assert!(v.contains(&Violation::CrowdedGap { gap: 0, points: 2 }));
        assert!(v.contains(&Violation::MapShape {
            gap: 0,
            parity: Parity::Even,
            expected: (2, 1),
            found: (1, 1)
        }));
    }
}
