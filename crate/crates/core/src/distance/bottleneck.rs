use super::matching::hopcroft_karp;
use crate::persistence::{Bar, Barcode, Parity};
use crate::scalar::{midpoint, Rational, Scalar};

/// One side of a matched pair: a real bar by index, or a zero-length bar `(x, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Partner {
    Bar(usize),
    Ersatz(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    pub left: Partner,
    pub right: Partner,
    pub cost: Scalar,
}

/// A bijection between the bars of two barcodes after padding both with
/// zero-length bars. Pairs of two ersatz bars are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
    pub cost: Scalar,
}

impl Matching {
    /// Right partner of left bar `i`.
    pub fn partner_of_left(&self, i: usize) -> Option<&Partner> {
        self.pairs
            .iter()
            .find(|p| p.left == Partner::Bar(i))
            .map(|p| &p.right)
    }

    /// Checks that every real bar of each side appears exactly once and that
    /// `cost` is the maximum pair cost.
    pub fn is_bijection_for(&self, left: &Barcode, right: &Barcode) -> bool {
        let mut seen_l = vec![0usize; left.len()];
        let mut seen_r = vec![0usize; right.len()];
        for pair in &self.pairs {
            if let Partner::Bar(i) = pair.left {
                match seen_l.get_mut(i) {
                    Some(n) => *n += 1,
                    None => return false,
                }
            }
            if let Partner::Bar(j) = pair.right {
                match seen_r.get_mut(j) {
                    Some(n) => *n += 1,
                    None => return false,
                }
            }
        }
        let max = self
            .pairs
            .iter()
            .map(|p| p.cost.clone())
            .max()
            .unwrap_or_else(Scalar::zero);
        seen_l.iter().all(|&n| n == 1) && seen_r.iter().all(|&n| n == 1) && max == self.cost
    }
}

/// `max(|birth - birth'|, |death - death'|)` on nominal intervals.
pub fn pair_cost(a: &Bar, b: &Bar) -> Scalar {
    a.birth
        .abs_diff(&b.birth)
        .max(a.nominal_death().abs_diff(&b.nominal_death()))
}

/// Cost of sending a bar to its nearest zero-length bar: half its nominal length.
pub fn ersatz_cost(a: &Bar) -> Scalar {
    a.nominal_length().half()
}

/// Where the zero-length partner of `a` sits: the midpoint of a finite bar,
/// otherwise its finite end, or 0 for `(-inf, +inf)`. Only finite bars can
/// reach an ersatz partner at finite cost.
fn ersatz_point(a: &Bar) -> Rational {
    match (&a.birth, a.nominal_death()) {
        (Scalar::Finite(x), Scalar::Finite(y)) => midpoint(x, &y),
        (Scalar::Finite(x), _) => x.clone(),
        (_, Scalar::Finite(y)) => y,
        _ => Rational::from_integer(0.into()),
    }
}

/// Class of a bar for the infinite-endpoint count check: which nominal ends are infinite.
fn infinity_class(bar: &Bar, graded: bool) -> (bool, bool, Option<Parity>) {
    (
        !bar.birth.is_finite(),
        !bar.nominal_death().is_finite(),
        graded.then_some(bar.parity),
    )
}

fn infinite_classes_agree(b1: &Barcode, b2: &Barcode, graded: bool) -> bool {
    let classes = |b: &Barcode| {
        let mut v: Vec<_> = b
            .bars()
            .iter()
            .map(|bar| infinity_class(bar, graded))
            .filter(|c| c.0 || c.1)
            .collect();
        v.sort();
        v
    };
    classes(b1) == classes(b2)
}

/// Sorted distinct thresholds at which feasibility can change.
pub fn candidate_thresholds(b1: &Barcode, b2: &Barcode) -> Vec<Rational> {
    let mut out = vec![Rational::from_integer(0.into())];
    for x in b1.bars() {
        for y in b2.bars() {
            for d in [
                x.birth.abs_diff(&y.birth),
                x.nominal_death().abs_diff(&y.nominal_death()),
            ] {
                if let Scalar::Finite(d) = d {
                    out.push(d);
                }
            }
        }
    }
    for bar in b1.bars().iter().chain(b2.bars()) {
        if let Scalar::Finite(h) = ersatz_cost(bar) {
            out.push(h);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Finds a matching whose every pair costs at most `delta`, if one exists.
/// `delta = +inf` admits every pair that respects the grading option.
pub fn matching_within(
    b1: &Barcode,
    b2: &Barcode,
    delta: &Scalar,
    graded: bool,
) -> Option<Matching> {
    let (n1, n2) = (b1.len(), b2.len());
    let bars1 = b1.bars();
    let bars2 = b2.bars();
    // left: bars1 then ersatz copies of bars2; right: bars2 then ersatz copies of bars1
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n1 + n2];
    for (i, x) in bars1.iter().enumerate() {
        for (j, y) in bars2.iter().enumerate() {
            if (!graded || x.parity == y.parity) && pair_cost(x, y) <= *delta {
                adj[i].push(j);
            }
        }
        if ersatz_cost(x) <= *delta {
            adj[i].push(n2 + i);
        }
    }
    for (j, y) in bars2.iter().enumerate() {
        if ersatz_cost(y) <= *delta {
            adj[n1 + j].push(j);
        }
        adj[n1 + j].extend((0..n1).map(|i| n2 + i));
    }
    let assignment = hopcroft_karp(n1 + n2, &adj);
    if assignment.iter().any(Option::is_none) {
        return None;
    }

    let mut pairs = Vec::new();
    for (u, v) in assignment.iter().enumerate() {
        let v = v.expect("perfect matching");
        let pair = match (u < n1, v < n2) {
            (true, true) => MatchedPair {
                left: Partner::Bar(u),
                right: Partner::Bar(v),
                cost: pair_cost(&bars1[u], &bars2[v]),
            },
            (true, false) => MatchedPair {
                left: Partner::Bar(u),
                right: Partner::Ersatz(ersatz_point(&bars1[u])),
                cost: ersatz_cost(&bars1[u]),
            },
            (false, true) => {
                let j = u - n1;
                MatchedPair {
                    left: Partner::Ersatz(ersatz_point(&bars2[j])),
                    right: Partner::Bar(j),
                    cost: ersatz_cost(&bars2[j]),
                }
            }
            (false, false) => continue,
        };
        pairs.push(pair);
    }
    pairs.sort_by_key(|p| match (&p.left, &p.right) {
        (Partner::Bar(i), _) => (0, *i),
        (_, Partner::Bar(j)) => (1, *j),
        _ => (2, 0),
    });
    let cost = pairs
        .iter()
        .map(|p| p.cost.clone())
        .max()
        .unwrap_or_else(Scalar::zero);
    Some(Matching { pairs, cost })
}

/// Bottleneck distance between two barcodes and an optimal matching.
///
/// With `graded` set, only bars of equal parity may be paired. Truncated bars
/// are measured on their nominal interval `(birth, cut)`. The distance is
/// `+inf` exactly when the bars with infinite ends cannot be paired off
/// class by class; the returned matching then still pairs every bar.
pub fn bottleneck_distance(b1: &Barcode, b2: &Barcode, graded: bool) -> (Scalar, Matching) {
    if !infinite_classes_agree(b1, b2, graded) {
        let m = matching_within(b1, b2, &Scalar::PosInf, graded)
            .expect("all ersatz edges exist at +inf");
        return (Scalar::PosInf, m);
    }
    let candidates = candidate_thresholds(b1, b2);
    // smallest feasible index, assuming feasibility is monotone in delta
    let (mut lo, mut hi) = (0usize, candidates.len());
    let mut best: Option<Matching> = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match matching_within(b1, b2, &Scalar::Finite(candidates[mid].clone()), graded) {
            Some(m) => {
                best = Some(m);
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    match best {
        Some(m) => (m.cost.clone(), m),
        None => {
            let m = matching_within(b1, b2, &Scalar::PosInf, graded)
                .expect("all ersatz edges exist at +inf");
            (Scalar::PosInf, m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::Spectrum;
    use crate::scalar::int;

    fn bc(points: &[i64], bars: &[(Scalar, Scalar)]) -> Barcode {
        let spectrum =
            Spectrum::from_points(points.iter().map(|&p| int(p)).collect(), int(0), int(0));
        Barcode::new(
            spectrum,
            bars.iter()
                .map(|(a, b)| Bar::new(a.clone(), b.clone(), Parity::Even))
                .collect(),
        )
        .unwrap()
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn identical_barcodes_are_at_zero() {
        let b = bc(
            &[0, 1, 2],
            &[(s(0), s(2)), (s(1), Scalar::PosInf), (Scalar::NegInf, s(1))],
        );
        let (d, m) = bottleneck_distance(&b, &b, false);
        assert_eq!(d, Scalar::zero());
        assert!(m.is_bijection_for(&b, &b));
    }

    #[test]
    fn single_bar_against_empty() {
        let b = bc(&[0, 2], &[(s(0), s(2))]);
        let e = bc(&[0, 2], &[]);
        let (d, m) = bottleneck_distance(&b, &e, false);
        assert_eq!(d, s(1));
        assert_eq!(
            m.pairs,
            vec![MatchedPair {
                left: Partner::Bar(0),
                right: Partner::Ersatz(int(1)),
                cost: s(1)
            }]
        );
    }

    #[test]
    fn infinite_bar_against_empty() {
        let b = bc(&[0], &[(s(0), Scalar::PosInf)]);
        let e = bc(&[0], &[]);
        let (d, m) = bottleneck_distance(&b, &e, false);
        assert_eq!(d, Scalar::PosInf);
        assert!(m.is_bijection_for(&b, &e));
    }

    #[test]
    fn mixed_example() {
        let b1 = bc(&[0, 2], &[(s(0), s(2)), (s(0), Scalar::PosInf)]);
        let b2 = bc(&[1, 2], &[(s(1), s(2)), (s(1), Scalar::PosInf)]);
        let (d, m) = bottleneck_distance(&b1, &b2, false);
        assert_eq!(d, s(1));
        assert!(m.is_bijection_for(&b1, &b2));
    }

    #[test]
    fn grading_can_only_increase_distance() {
        let spectrum = Spectrum::from_points(vec![int(0), int(4)], int(0), int(4));
        let b1 = Barcode::new(
            spectrum.clone(),
            vec![Bar::finite(int(0), int(4), Parity::Even)],
        )
        .unwrap();
        let b2 = Barcode::new(spectrum, vec![Bar::finite(int(0), int(4), Parity::Odd)]).unwrap();
        assert_eq!(bottleneck_distance(&b1, &b2, false).0, Scalar::zero());
        assert_eq!(bottleneck_distance(&b1, &b2, true).0, s(2));
    }

    #[test]
    fn truncated_bars_are_measured_nominally() {
        let spectrum = Spectrum::from_points(vec![int(0), int(1)], int(0), int(3));
        let t = Barcode::new(
            spectrum.clone(),
            vec![Bar::truncated(s(1), int(3), Parity::Even)],
        )
        .unwrap();
        let e = Barcode::empty(spectrum);
        assert_eq!(bottleneck_distance(&t, &e, false).0, s(1));
    }
}
