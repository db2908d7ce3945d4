use super::module::{validate_module, SampledModule};
use super::{Bar, Barcode, GradedDim, Parity, Spectrum};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::scalar::{format_rational, int, Rational, Scalar};

fn ensure_structurally_sound(m: &SampledModule) -> Result<()> {
    let structural: Vec<String> = validate_module(m)
        .into_iter()
        .filter(|v| v.is_structural())
        .map(|v| v.to_string())
        .collect();
    if structural.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidModule(structural))
    }
}

/// `table[i][j - i]` is the rank of the composite structure map from sample
/// `i` to sample `j` in one parity; `table[i][0]` is the dimension at `i`.
pub fn rank_table(m: &SampledModule, parity: Parity) -> Result<Vec<Vec<usize>>> {
    ensure_structurally_sound(m)?;
    Ok(rank_table_unchecked(m, parity))
}

fn rank_table_unchecked(m: &SampledModule, parity: Parity) -> Vec<Vec<usize>> {
    let p = parity.index();
    let k = m.len();
    (0..k)
        .map(|i| {
            let mut composite = Gf2Matrix::identity(m.dims()[i][p]);
            let mut row = Vec::with_capacity(k - i);
            for j in i..k {
                row.push(composite.rank());
                if j + 1 < k {
                    composite = m.map(j, parity).mul(&composite);
                }
            }
            row
        })
        .collect()
}

/// Graded rank of the composite map from sample `i` to sample `j` (`i <= j`).
pub fn rank_invariant(m: &SampledModule, i: usize, j: usize) -> Result<GradedDim> {
    if i > j || j >= m.len() {
        return Err(Error::IndexOutOfRange { i, j, len: m.len() });
    }
    ensure_structurally_sound(m)?;
    let mut out = [0, 0];
    for parity in Parity::BOTH {
        let mut composite = Gf2Matrix::identity(m.dims()[i][parity.index()]);
        for g in i..j {
            composite = m.map(g, parity).mul(&composite);
        }
        out[parity.index()] = composite.rank();
    }
    Ok(out)
}

/// Endpoint of a bar whose boundary falls between samples `lo` and `hi`.
fn snap(spectrum: &Spectrum, lo: &Rational, hi: &Rational) -> Result<Scalar> {
    match spectrum.points_between(lo, hi) {
        [p] => Ok(Scalar::Finite(p.clone())),
        _ => Err(Error::NonUniqueSnap {
            lo: format_rational(lo),
            hi: format_rational(hi),
        }),
    }
}

/// Interval decomposition of a sampled module.
///
/// The multiplicity of the bar alive exactly on samples `i..=j` is the
/// inclusion-exclusion of the rank invariant around `(i, j)`. Births at the
/// first sample become `-inf`, deaths at the last sample `+inf`; every other
/// endpoint snaps to the spectrum point between the neighbouring samples.
pub fn decompose(m: &SampledModule) -> Result<Barcode> {
    ensure_structurally_sound(m)?;
    let k = m.len();
    let samples = m.samples();
    let mut bars = Vec::new();
    for parity in Parity::BOTH {
        let table = rank_table_unchecked(m, parity);
        let rank = |i: isize, j: usize| -> i64 {
            if i < 0 || j >= k || (i as usize) > j {
                0
            } else {
                table[i as usize][j - i as usize] as i64
            }
        };
        for i in 0..k {
            for j in i..k {
                let ii = i as isize;
                let mult = rank(ii, j) - rank(ii - 1, j) - rank(ii, j + 1) + rank(ii - 1, j + 1);
                debug_assert!(mult >= 0, "negative interval multiplicity");
                if mult <= 0 {
                    continue;
                }
                let birth = if i == 0 {
                    Scalar::NegInf
                } else {
                    snap(m.spectrum(), &samples[i - 1], &samples[i])?
                };
                let death = if j + 1 == k {
                    Scalar::PosInf
                } else {
                    snap(m.spectrum(), &samples[j], &samples[j + 1])?
                };
                for _ in 0..mult {
                    bars.push(Bar::new(birth.clone(), death.clone(), parity));
                }
            }
        }
    }
    Barcode::new(m.spectrum().clone(), bars)
}

/// `density` evenly spaced points strictly inside `(a, b)`.
fn spread(a: &Rational, b: &Rational, density: usize) -> Vec<Rational> {
    let step = (b - a) / int(density as i64 + 1);
    (1..=density).map(|k| a + &step * int(k as i64)).collect()
}

/// Sample positions for the canonical module of a spectrum.
///
/// Every gap receives `density` samples. The outer gaps use the part of the
/// horizon beyond the extreme points, or a unit-width window past the horizon
/// when an extreme point sits on its boundary.
pub(crate) fn canonical_samples(spectrum: &Spectrum, density: usize) -> Result<Vec<Rational>> {
    let (lo, hi) = (spectrum.lo(), spectrum.hi());
    if lo >= hi {
        return Err(Error::EmptyHorizon {
            lo: format_rational(lo),
            hi: format_rational(hi),
        });
    }
    let density = density.max(1);
    let points = spectrum.points();
    let Some((first, last)) = points.first().zip(points.last()) else {
        return Ok(spread(lo, hi, density));
    };
    let below = if first > lo {
        lo.clone()
    } else {
        first - int(1)
    };
    let above = if last < hi { hi.clone() } else { last + int(1) };
    let mut samples = spread(&below, first, density);
    for w in points.windows(2) {
        samples.extend(spread(&w[0], &w[1], density));
    }
    samples.extend(spread(last, &above, density));
    Ok(samples)
}

/// Canonical module of a barcode: at every sample the bars containing it form
/// the basis, and the structure maps send a bar to itself while it is alive
/// and to zero otherwise.
pub fn module_from_barcode(b: &Barcode, grid_density_hint: usize) -> Result<SampledModule> {
    let samples = canonical_samples(b.spectrum(), grid_density_hint)?;
    // basis[s][p] lists indices of bars alive at sample s with parity p
    let basis: Vec<[Vec<usize>; 2]> = samples
        .iter()
        .map(|s| {
            let mut by_parity = [Vec::new(), Vec::new()];
            for (idx, bar) in b.bars().iter().enumerate() {
                if bar.contains(s) {
                    by_parity[bar.parity.index()].push(idx);
                }
            }
            by_parity
        })
        .collect();
    let dims = basis.iter().map(|bp| [bp[0].len(), bp[1].len()]).collect();
    let maps = basis
        .windows(2)
        .map(|w| {
            let build = |p: usize| {
                let (from, to) = (&w[0][p], &w[1][p]);
                let mut mat = Gf2Matrix::zeros(to.len(), from.len());
                for (c, idx) in from.iter().enumerate() {
                    if let Some(r) = to.iter().position(|x| x == idx) {
                        mat.set(r, c, true);
                    }
                }
                mat
            };
            [build(0), build(1)]
        })
        .collect();
    Ok(SampledModule::new(
        b.spectrum().clone(),
        samples,
        dims,
        maps,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn spectrum(points: &[Rational], lo: Rational, hi: Rational) -> Spectrum {
        Spectrum::new(points.to_vec(), lo, hi).unwrap()
    }

    #[test]
    fn constant_module_is_one_infinite_bar() {
        let m = SampledModule::new(
            spectrum(&[int(1)], int(0), int(2)),
            vec![rat(1, 2), rat(3, 2)],
            vec![[1, 0], [1, 0]],
            vec![[Gf2Matrix::identity(1), Gf2Matrix::zeros(0, 0)]],
        );
        let b = decompose(&m).unwrap();
        assert_eq!(
            b.bars(),
            &[Bar::new(Scalar::NegInf, Scalar::PosInf, Parity::Even)]
        );
    }

    #[test]
    fn zero_map_across_point_splits_the_bar() {
        let m = SampledModule::new(
            spectrum(&[int(1)], int(0), int(2)),
            vec![rat(1, 2), rat(3, 2)],
            vec![[1, 0], [1, 0]],
            vec![[Gf2Matrix::zeros(1, 1), Gf2Matrix::zeros(0, 0)]],
        );
        let b = decompose(&m).unwrap();
        let expected = Barcode::new(
            m.spectrum().clone(),
            vec![
                Bar::new(Scalar::NegInf, Scalar::from_int(1), Parity::Even),
                Bar::new(Scalar::from_int(1), Scalar::PosInf, Parity::Even),
            ],
        )
        .unwrap();
        assert_eq!(b, expected);
        assert_eq!(rank_invariant(&m, 0, 1).unwrap(), [0, 0]);
    }

    #[test]
    fn non_invertible_spectrum_free_map_cannot_snap() {
        let m = SampledModule::new(
            spectrum(&[], int(0), int(2)),
            vec![rat(1, 2), rat(3, 2)],
            vec![[1, 0], [1, 0]],
            vec![[Gf2Matrix::zeros(1, 1), Gf2Matrix::zeros(0, 0)]],
        );
        assert!(matches!(decompose(&m), Err(Error::NonUniqueSnap { .. })));
    }

    #[test]
    fn rank_invariant_bounds_and_identity() {
        let id2 = Gf2Matrix::identity(2);
        let id1 = Gf2Matrix::identity(1);
        let m = SampledModule::new(
            spectrum(&[int(1), int(2)], int(0), int(3)),
            vec![rat(1, 2), rat(3, 2), rat(5, 2)],
            vec![[2, 1]; 3],
            vec![[id2.clone(), id1.clone()], [id2, id1]],
        );
        for j in 0..3 {
            assert_eq!(rank_invariant(&m, 0, j).unwrap(), [2, 1]);
        }
        assert!(matches!(
            rank_invariant(&m, 2, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            rank_invariant(&m, 0, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn canonical_module_dims() {
        let s = spectrum(&[int(0), int(1), int(2)], int(0), int(2));
        let b = Barcode::new(
            s,
            vec![
                Bar::finite(int(0), int(1), Parity::Even),
                Bar::finite(int(0), int(2), Parity::Even),
            ],
        )
        .unwrap();
        let m = module_from_barcode(&b, 1).unwrap();
        let dims: Vec<usize> = m.dims().iter().map(|d| d[0]).collect();
        assert_eq!(dims, vec![0, 2, 1, 0]);
        assert!(validate_module(&m).is_empty());
        assert_eq!(decompose(&m).unwrap(), b);
    }

    #[test]
    fn empty_barcode_gives_zero_module() {
        let s = spectrum(&[int(1)], int(0), int(2));
        let m = module_from_barcode(&Barcode::empty(s), 2).unwrap();
        assert!(m.dims().iter().all(|d| *d == [0, 0]));
        assert_eq!(m.len(), 4);
        assert!(decompose(&m).unwrap().is_empty());
    }

    #[test]
    fn full_bar_gives_identities() {
        let s = spectrum(&[int(1), int(3)], int(0), int(4));
        let b = Barcode::new(
            s,
            vec![Bar::new(Scalar::NegInf, Scalar::PosInf, Parity::Even)],
        )
        .unwrap();
        let m = module_from_barcode(&b, 1).unwrap();
        assert!(m.dims().iter().all(|d| *d == [1, 0]));
        assert!(m.maps().iter().all(|p| p[0] == Gf2Matrix::identity(1)));
    }

    #[test]
    fn degenerate_horizon() {
        let s = spectrum(&[int(1)], int(1), int(1));
        assert!(matches!(
            module_from_barcode(&Barcode::empty(s), 1),
            Err(Error::EmptyHorizon { .. })
        ));
    }
}
