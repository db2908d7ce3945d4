//! Seeded generators for spectra, barcodes, modules and perturbations.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gf2::Gf2Matrix;
use crate::persistence::canonical_samples;
use crate::persistence::{Bar, Barcode, GradedDim, Parity, SampledModule, Spectrum};
use crate::scalar::{int, rat, Rational, Scalar};

/// Up to `max_points` distinct multiples of `1/2` in `[0, 8]`, horizon `[0, 8]`.
pub fn random_spectrum<R: Rng>(rng: &mut R, max_points: usize) -> Spectrum {
    let mut grid: Vec<i64> = (0..=16).collect();
    grid.shuffle(rng);
    let n = rng.gen_range(0..=max_points.min(grid.len()));
    let points = grid[..n].iter().map(|&k| rat(k, 2)).collect();
    Spectrum::from_points(points, int(0), int(8))
}

fn random_parity<R: Rng>(rng: &mut R) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

/// Up to `max_bars` bars with endpoints in the spectrum or at `±inf`, all of
/// positive length. With `truncate` set, some `+inf` deaths become cuts at
/// the top of the horizon.
pub fn random_barcode<R: Rng>(
    rng: &mut R,
    spectrum: &Spectrum,
    max_bars: usize,
    truncate: bool,
) -> Barcode {
    let points = spectrum.points();
    let n = rng.gen_range(0..=max_bars);
    let mut bars = Vec::with_capacity(n);
    for _ in 0..n {
        let b = rng.gen_range(0..=points.len());
        let birth = if b == points.len() {
            Scalar::NegInf
        } else {
            Scalar::Finite(points[b].clone())
        };
        let first_death = if b == points.len() { 0 } else { b + 1 };
        let d = rng.gen_range(first_death..=points.len());
        let parity = random_parity(rng);
        let bar = if d == points.len() {
            let cut_ok = birth < *spectrum.hi();
            if truncate && cut_ok && rng.gen_bool(0.3) {
                Bar::truncated(birth, spectrum.hi().clone(), parity)
            } else {
                Bar::new(birth, Scalar::PosInf, parity)
            }
        } else {
            Bar::new(birth, Scalar::Finite(points[d].clone()), parity)
        };
        bars.push(bar);
    }
    Barcode::new(spectrum.clone(), bars).expect("endpoints drawn from the spectrum")
}

/// A uniformly random invertible `n x n` matrix over GF(2).
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Gf2Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_bool(0.5));
        }
    }
    m
}

/// Shape of a random module.
#[derive(Clone, Debug)]
pub struct ModuleShape {
    /// Samples per gap of the spectrum.
    pub density: usize,
    /// Bound on `even + odd` at each sample.
    pub max_sample_dim: usize,
    /// Bound on the sum of all sample dimensions.
    pub total_budget: Option<usize>,
}

/// A valid module on the canonical samples of `spectrum`: invertible maps
/// inside gaps and arbitrary maps across spectrum points.
pub fn random_module<R: Rng>(
    rng: &mut R,
    spectrum: &Spectrum,
    shape: &ModuleShape,
) -> SampledModule {
    let samples =
        canonical_samples(spectrum, shape.density).expect("random spectra have a proper horizon");
    let gaps = spectrum.len() + 1;
    let mut gap_dims: Vec<GradedDim> = (0..gaps)
        .map(|_| {
            let total = rng.gen_range(0..=shape.max_sample_dim);
            let even = rng.gen_range(0..=total);
            [even, total - even]
        })
        .collect();
    let per_gap: Vec<usize> = {
        let mut count = vec![0; gaps];
        for s in &samples {
            count[spectrum.gap_index(s)] += 1;
        }
        count
    };
    if let Some(budget) = shape.total_budget {
        let total = |dims: &[GradedDim]| -> usize {
            dims.iter()
                .zip(&per_gap)
                .map(|(d, k)| (d[0] + d[1]) * k)
                .sum()
        };
        while total(&gap_dims) > budget {
            let nonzero: Vec<(usize, usize)> = (0..gaps)
                .flat_map(|g| [(g, 0), (g, 1)])
                .filter(|&(g, p)| gap_dims[g][p] > 0)
                .collect();
            let &(g, p) = nonzero
                .choose(rng)
                .expect("positive total has a nonzero entry");
            gap_dims[g][p] -= 1;
        }
    }
    let dims: Vec<GradedDim> = samples
        .iter()
        .map(|s| gap_dims[spectrum.gap_index(s)])
        .collect();
    let maps = samples
        .windows(2)
        .zip(dims.windows(2))
        .map(|(s, d)| {
            let same_gap = spectrum.gap_index(&s[0]) == spectrum.gap_index(&s[1]);
            let mut pair = [Gf2Matrix::zeros(0, 0), Gf2Matrix::zeros(0, 0)];
            for p in 0..2 {
                pair[p] = if same_gap {
                    random_invertible(rng, d[0][p])
                } else {
                    random_matrix(rng, d[1][p], d[0][p])
                };
            }
            pair
        })
        .collect();
    SampledModule::new(spectrum.clone(), samples, dims, maps)
}

/// The same module written in random bases: every sample gets a random
/// invertible change of basis and the maps are conjugated accordingly.
pub fn random_basis_change<R: Rng>(rng: &mut R, m: &SampledModule) -> SampledModule {
    let changes: Vec<[(Gf2Matrix, Gf2Matrix); 2]> = m
        .dims()
        .iter()
        .map(|d| {
            let mut pair = [
                (Gf2Matrix::zeros(0, 0), Gf2Matrix::zeros(0, 0)),
                (Gf2Matrix::zeros(0, 0), Gf2Matrix::zeros(0, 0)),
            ];
            for p in 0..2 {
                let g = random_invertible(rng, d[p]);
                let inv = g.inverse().expect("invertible");
                pair[p] = (g, inv);
            }
            pair
        })
        .collect();
    let maps = m
        .maps()
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let conj = |p: usize| changes[i + 1][p].0.mul(&pair[p]).mul(&changes[i][p].1);
            [conj(0), conj(1)]
        })
        .collect();
    SampledModule::new(
        m.spectrum().clone(),
        m.samples().to_vec(),
        m.dims().to_vec(),
        maps,
    )
}

/// A random barcode on `spectrum` with the same infinite bars as `like`, up
/// to the position of their finite ends, plus up to `extra` finite bars.
/// `None` when `spectrum` has no point to carry a finite end.
pub fn barcode_like<R: Rng>(
    rng: &mut R,
    like: &Barcode,
    spectrum: &Spectrum,
    extra: usize,
) -> Option<Barcode> {
    let points = spectrum.points();
    let pick = |rng: &mut R| points.choose(rng).cloned().map(Scalar::Finite);
    let mut bars = Vec::new();
    for bar in like.bars() {
        let moved = match (&bar.birth, &bar.death) {
            (Scalar::Finite(_), Scalar::Finite(_)) => continue,
            (Scalar::NegInf, Scalar::PosInf) => bar.clone(),
            (Scalar::NegInf, _) => Bar::new(Scalar::NegInf, pick(rng)?, bar.parity),
            _ => Bar::new(pick(rng)?, Scalar::PosInf, bar.parity),
        };
        bars.push(moved);
    }
    if points.len() >= 2 {
        for _ in 0..rng.gen_range(0..=extra) {
            let i = rng.gen_range(0..points.len() - 1);
            let j = rng.gen_range(i + 1..points.len());
            bars.push(Bar::finite(
                points[i].clone(),
                points[j].clone(),
                random_parity(rng),
            ));
        }
    }
    Some(Barcode::new(spectrum.clone(), bars).expect("endpoints drawn from the spectrum"))
}

/// A barcode within bottleneck distance `radius` of `b`.
///
/// Every spectrum point moves by a multiple of `radius / 4` of size at most
/// `radius`, and bar endpoints follow their points. Bars turned inside out
/// are deleted, and a few new bars of length at most `2 radius` are added.
/// Truncation cuts move with the birth of their bar.
pub fn perturb_barcode<R: Rng>(b: &Barcode, radius: &Rational, rng: &mut R) -> Barcode {
    let spectrum = b.spectrum();
    let quarter = radius / int(4);
    let step = |rng: &mut R| &quarter * int(rng.gen_range(-4..=4));
    let moved: Vec<(Rational, Rational)> = spectrum
        .points()
        .iter()
        .map(|p| (p.clone(), p + step(rng)))
        .collect();
    let image = |x: &Scalar| match x {
        Scalar::Finite(p) => {
            let i = spectrum
                .points()
                .binary_search(p)
                .expect("endpoint lies in the spectrum");
            Scalar::Finite(moved[i].1.clone())
        }
        other => other.clone(),
    };

    let mut points: Vec<Rational> = moved.iter().map(|(_, q)| q.clone()).collect();
    let mut bars = Vec::new();
    for bar in b.bars() {
        let birth = image(&bar.birth);
        let death = image(&bar.death);
        if birth >= death {
            continue;
        }
        let truncated_at = bar
            .truncated_at
            .as_ref()
            .map(|cut| match (&bar.birth, &birth) {
                (Scalar::Finite(old), Scalar::Finite(new)) => cut + (new - old),
                _ => cut.clone(),
            });
        bars.push(Bar {
            birth,
            death,
            parity: bar.parity,
            truncated_at,
        });
    }
    if *radius > int(0) {
        for _ in 0..rng.gen_range(0..=2) {
            let x = spectrum.lo() + &quarter * int(rng.gen_range(0..=16));
            let y = &x + &quarter * int(rng.gen_range(1..=8));
            points.push(x.clone());
            points.push(y.clone());
            bars.push(Bar::finite(x, y, random_parity(rng)));
        }
    }
    let lo = spectrum.lo() - radius;
    let hi = spectrum.hi() + radius;
    Barcode::new(Spectrum::from_points(points, lo, hi), bars)
        .expect("moved endpoints are moved points")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::bottleneck_distance;
    use crate::persistence::validate_module;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modules_are_valid_and_within_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = random_spectrum(&mut rng, 4);
            let shape = ModuleShape {
                density: 2,
                max_sample_dim: 3,
                total_budget: Some(6),
            };
            let m = random_module(&mut rng, &s, &shape);
            assert!(validate_module(&m).is_empty(), "{:?}", validate_module(&m));
            assert!(m.total_dim() <= 6);
            assert!(m.max_total_dim() <= 3);
        }
    }

    #[test]
    fn perturbations_stay_in_the_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = random_spectrum(&mut rng, 6);
            let b = random_barcode(&mut rng, &s, 6, true);
            let r = rat(rng.gen_range(0..6), 4);
            let p = perturb_barcode(&b, &r, &mut rng);
            assert!(p.off_spectrum_endpoints().is_empty());
            assert!(bottleneck_distance(&b, &p, false).0 <= Scalar::Finite(r));
        }
    }

    #[test]
    fn zero_radius_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_spectrum(&mut rng, 5);
        let b = random_barcode(&mut rng, &s, 5, false);
        let p = perturb_barcode(&b, &int(0), &mut rng);
        assert_eq!(p.sorted_bars(), b.sorted_bars());
    }
}
