//! Slow reference implementations used to check the fast paths.
//!
//! None of these share code with the algorithms they check beyond the data
//! types and GF(2) matrix arithmetic.

use crate::error::{Error, Result};
use crate::gf2::{general_linear_group, Gf2Matrix};
use crate::persistence::{Bar, Barcode, Parity, SampledModule};
use crate::scalar::{is_integer, midpoint, Rational, Scalar};

/// Largest total dimension accepted by [`brute_force_decompose`].
pub const MAX_BRUTE_FORCE_TOTAL_DIM: usize = 4;

/// Searches all basis changes `g_i` at every sample, one parity at a time,
/// until each map `g_{i+1} M_i g_i^{-1}` is a partial permutation, then reads
/// the bars off the resulting chains of basis vectors.
///
/// The module must have total dimension (summed over samples and parities)
/// at most [`MAX_BRUTE_FORCE_TOTAL_DIM`].
pub fn brute_force_decompose(m: &SampledModule) -> Result<Barcode> {
    if m.total_dim() > MAX_BRUTE_FORCE_TOTAL_DIM {
        return Err(Error::TooLarge(format!(
            "total dimension {} exceeds {MAX_BRUTE_FORCE_TOTAL_DIM}",
            m.total_dim()
        )));
    }
    let mut bars = Vec::new();
    for parity in Parity::BOTH {
        let dims: Vec<usize> = m.dims().iter().map(|d| d[parity.index()]).collect();
        let maps: Vec<&Gf2Matrix> = (0..m.len().saturating_sub(1))
            .map(|i| m.map(i, parity))
            .collect();
        let normal = normal_form(&dims, &maps).ok_or_else(|| {
            Error::InvalidModule(vec!["no basis change normalises the maps".into()])
        })?;
        for (first, last) in chains(&dims, &normal) {
            let birth = if first == 0 {
                Scalar::NegInf
            } else {
                snap_by_scan(m, first - 1)?
            };
            let death = if last + 1 == m.len() {
                Scalar::PosInf
            } else {
                snap_by_scan(m, last)?
            };
            bars.push(Bar::new(birth, death, parity));
        }
    }
    Barcode::new(m.spectrum().clone(), bars)
}

/// Depth-first search over `GL(d_0) x GL(d_1) x ...`.
fn normal_form(dims: &[usize], maps: &[&Gf2Matrix]) -> Option<Vec<Gf2Matrix>> {
    fn go(
        i: usize,
        prev_inv: &Gf2Matrix,
        dims: &[usize],
        maps: &[&Gf2Matrix],
        out: &mut Vec<Gf2Matrix>,
    ) -> bool {
        if i == dims.len() {
            return true;
        }
        for g in general_linear_group(dims[i]) {
            let ok = i == 0 || g.mul(maps[i - 1]).mul(prev_inv).is_partial_permutation();
            if !ok {
                continue;
            }
            let inv = g.inverse().expect("group element");
            if i > 0 {
                out.push(g.mul(maps[i - 1]).mul(prev_inv));
            }
            if go(i + 1, &inv, dims, maps, out) {
                return true;
            }
            if i > 0 {
                out.pop();
            }
        }
        false
    }
    if dims.is_empty() {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    go(0, &Gf2Matrix::identity(dims[0]), dims, maps, &mut out).then_some(out)
}

/// `(first, last)` sample of every chain of basis vectors under partial permutations.
fn chains(dims: &[usize], perms: &[Gf2Matrix]) -> Vec<(usize, usize)> {
    let image_of = |i: usize, k: usize| (0..dims[i + 1]).find(|&r| perms[i].get(r, k));
    let has_preimage =
        |i: usize, k: usize| i > 0 && (0..dims[i - 1]).any(|c| perms[i - 1].get(k, c));
    let mut out = Vec::new();
    for (i, &d) in dims.iter().enumerate() {
        for k in 0..d {
            if has_preimage(i, k) {
                continue;
            }
            let (mut at, mut row) = (i, k);
            while at + 1 < dims.len() {
                match image_of(at, row) {
                    Some(r) => {
                        at += 1;
                        row = r;
                    }
                    None => break,
                }
            }
            out.push((i, at));
        }
    }
    out
}

/// The single spectrum point between samples `i` and `i + 1`, by linear scan.
fn snap_by_scan(m: &SampledModule, i: usize) -> Result<Scalar> {
    let (a, b) = (&m.samples()[i], &m.samples()[i + 1]);
    let inside: Vec<&Rational> = m
        .spectrum()
        .points()
        .iter()
        .filter(|p| *p > a && *p < b)
        .collect();
    match inside.as_slice() {
        [p] => Ok(Scalar::Finite((*p).clone())),
        _ => Err(Error::NonUniqueSnap {
            lo: a.to_string(),
            hi: b.to_string(),
        }),
    }
}

fn extended_distance(x: &Scalar, y: &Scalar) -> Scalar {
    match (x, y) {
        (Scalar::Finite(a), Scalar::Finite(b)) => Scalar::Finite(if a > b { a - b } else { b - a }),
        _ if x == y => Scalar::zero(),
        _ => Scalar::PosInf,
    }
}

fn nominal(bar: &Bar) -> (Scalar, Scalar) {
    let death = bar
        .truncated_at
        .clone()
        .map(Scalar::Finite)
        .unwrap_or_else(|| bar.death.clone());
    (bar.birth.clone(), death)
}

fn unmatched_cost(bar: &Bar) -> Scalar {
    match nominal(bar) {
        (Scalar::Finite(a), Scalar::Finite(b)) => {
            Scalar::Finite((b - a) / Rational::from_integer(2.into()))
        }
        _ => Scalar::PosInf,
    }
}

/// Bottleneck distance by enumerating every partial injection between the
/// two bar lists, with branch and bound on the best cost so far.
pub fn brute_force_bottleneck(b1: &Barcode, b2: &Barcode, graded: bool) -> Scalar {
    let left: Vec<(Scalar, Scalar, Parity)> = b1
        .bars()
        .iter()
        .map(|b| (nominal(b).0, nominal(b).1, b.parity))
        .collect();
    let right: Vec<(Scalar, Scalar, Parity)> = b2
        .bars()
        .iter()
        .map(|b| (nominal(b).0, nominal(b).1, b.parity))
        .collect();
    let pair: Vec<Vec<Option<Scalar>>> = left
        .iter()
        .map(|x| {
            right
                .iter()
                .map(|y| {
                    (!graded || x.2 == y.2)
                        .then(|| extended_distance(&x.0, &y.0).max(extended_distance(&x.1, &y.1)))
                })
                .collect()
        })
        .collect();
    let lone_left: Vec<Scalar> = b1.bars().iter().map(unmatched_cost).collect();
    let lone_right: Vec<Scalar> = b2.bars().iter().map(unmatched_cost).collect();

    struct Search<'a> {
        pair: &'a [Vec<Option<Scalar>>],
        lone_left: &'a [Scalar],
        lone_right: &'a [Scalar],
        used: Vec<bool>,
        best: Scalar,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, cost: Scalar) {
            if cost >= self.best {
                return;
            }
            if i == self.pair.len() {
                let rest = (0..self.used.len())
                    .filter(|&j| !self.used[j])
                    .map(|j| self.lone_right[j].clone())
                    .fold(cost, Scalar::max);
                if rest < self.best {
                    self.best = rest;
                }
                return;
            }
            for j in 0..self.used.len() {
                if self.used[j] {
                    continue;
                }
                if let Some(c) = &self.pair[i][j] {
                    self.used[j] = true;
                    self.go(i + 1, cost.clone().max(c.clone()));
                    self.used[j] = false;
                }
            }
            self.go(i + 1, cost.max(self.lone_left[i].clone()));
        }
    }
    // leaving every bar unmatched is always a valid matching
    let all_lone = lone_left
        .iter()
        .chain(&lone_right)
        .cloned()
        .fold(Scalar::zero(), Scalar::max);
    let mut search = Search {
        pair: &pair,
        lone_left: &lone_left,
        lone_right: &lone_right,
        used: vec![false; right.len()],
        best: all_lone.clone(),
    };
    search.go(0, Scalar::zero());
    search.best.min(all_lone)
}

/// Minimum number of open `δ/2`-balls covering `points` (at most 16 distinct
/// points), by dynamic programming over subsets with centers drawn from the
/// midpoints of pairs of points.
pub fn brute_force_covering(points: &[Rational], delta: &Rational) -> usize {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    assert!(n <= 16, "brute-force covering is limited to 16 points");
    let radius = delta / Rational::from_integer(2.into());
    let mut masks = Vec::new();
    for i in 0..n {
        for j in i..n {
            let c = midpoint(&pts[i], &pts[j]);
            let mask = (0..n).filter(|&k| {
                let d = if pts[k] > c {
                    &pts[k] - &c
                } else {
                    &c - &pts[k]
                };
                d < radius
            });
            masks.push(mask.fold(0usize, |acc, k| acc | (1 << k)));
        }
    }
    let full = (1usize << n) - 1;
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for covered in 0..=full {
        if best[covered] == usize::MAX {
            continue;
        }
        for &m in &masks {
            let next = covered | m;
            if best[covered] + 1 < best[next] {
                best[next] = best[covered] + 1;
            }
        }
    }
    best[full]
}

/// `x` is a Reeb period of the ellipsoid in `[0, T]`: a nonnegative integer
/// multiple of some factor.
pub fn in_ellipsoid_spectrum(x: &Rational, factors: &[Rational], horizon: &Rational) -> bool {
    let zero = Rational::from_integer(0.into());
    *x >= zero && x <= horizon && factors.iter().any(|a| is_integer(&(x / a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::{decompose, Spectrum};
    use crate::scalar::{int, rat};

    #[test]
    fn oracle_decomposes_a_zero_map() {
        let s = Spectrum::new(vec![int(1)], int(0), int(2)).unwrap();
        let m = SampledModule::new(
            s,
            vec![rat(1, 2), rat(3, 2)],
            vec![[1, 0], [1, 0]],
            vec![[Gf2Matrix::zeros(1, 1), Gf2Matrix::zeros(0, 0)]],
        );
        assert_eq!(brute_force_decompose(&m).unwrap(), decompose(&m).unwrap());
    }

    #[test]
    fn oracle_handles_a_shear() {
        let s = Spectrum::new(vec![int(1)], int(0), int(2)).unwrap();
        let shear = Gf2Matrix::from_rows(&[vec![1, 1], vec![1, 1]], 2).unwrap();
        let m = SampledModule::new(
            s,
            vec![rat(1, 2), rat(3, 2)],
            vec![[2, 0], [2, 0]],
            vec![[shear, Gf2Matrix::zeros(0, 0)]],
        );
        let b = brute_force_decompose(&m).unwrap();
        assert_eq!(b, decompose(&m).unwrap());
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn covering_oracle_examples() {
        assert_eq!(brute_force_covering(&[int(0), int(5)], &int(1)), 2);
        assert_eq!(
            brute_force_covering(&[int(0), rat(1, 4), rat(1, 2)], &int(1)),
            1
        );
        assert_eq!(
            brute_force_covering(&(0..=5).map(int).collect::<Vec<_>>(), &int(1)),
            6
        );
        assert_eq!(brute_force_covering(&[], &int(1)), 0);
    }

    #[test]
    fn spectrum_membership() {
        let a = [int(1), rat(3, 2)];
        assert!(in_ellipsoid_spectrum(&int(3), &a, &int(6)));
        assert!(in_ellipsoid_spectrum(&rat(9, 2), &a, &int(6)));
        assert!(!in_ellipsoid_spectrum(&rat(5, 2), &a, &int(6)));
        assert!(!in_ellipsoid_spectrum(&int(7), &a, &int(6)));
    }
}
