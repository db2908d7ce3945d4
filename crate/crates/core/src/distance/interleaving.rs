//! Exhaustive search for δ-interleavings between small sampled modules.
//!
//! A module with spectrum `Σ` is constant on each gap of `Σ`, so a family of
//! maps `V_s -> W_{s+δ}` is determined by one matrix per connected component
//! ("cell") of `R \ (Σ_V ∪ (Σ_W - δ))`. Commutation with structure maps is a
//! linear condition on these matrices; the space of solutions is enumerated
//! exhaustively for one direction and the other direction is solved for
//! exactly, since the two triangle conditions are linear once one side is
//! fixed.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix};
use crate::persistence::{validate_module, Parity, SampledModule};
use crate::scalar::{format_rational, int, midpoint, Rational, Scalar};

/// Largest per-sample total dimension accepted by the search.
pub const MAX_SAMPLE_DIM: usize = 4;
/// Largest dimension of the enumerated morphism space.
pub const MAX_ENUMERATED_DIM: usize = 24;

/// A sampled module reduced to one representative per spectrum gap.
#[derive(Clone, Debug)]
struct GapModule {
    points: Vec<Rational>,
    dims: Vec<usize>,
    // composite[a][b - a]: structure map from gap a to gap b
    composite: Vec<Vec<Gf2Matrix>>,
}

impl GapModule {
    /// Uses the parity-0 slot of `m`.
    fn new(m: &SampledModule) -> Result<Self> {
        let points = m.spectrum().points().to_vec();
        let n_gaps = points.len() + 1;
        let mut reps = Vec::with_capacity(n_gaps);
        for g in 0..n_gaps {
            let rep = m
                .samples()
                .iter()
                .position(|s| m.spectrum().gap_index(s) == g);
            match rep {
                Some(i) => reps.push(i),
                None => {
                    return Err(Error::InvalidModule(vec![format!(
                        "spectrum gap {g} has no sample"
                    )]));
                }
            }
        }
        let dims: Vec<usize> = reps.iter().map(|&i| m.dims()[i][0]).collect();
        let composite = (0..n_gaps)
            .map(|a| {
                let mut out = Vec::with_capacity(n_gaps - a);
                let mut prod = Gf2Matrix::identity(dims[a]);
                let mut at = reps[a];
                for &target in &reps[a..] {
                    while at < target {
                        prod = m.map(at, Parity::Even).mul(&prod);
                        at += 1;
                    }
                    out.push(prod.clone());
                }
                out
            })
            .collect();
        Ok(GapModule {
            points,
            dims,
            composite,
        })
    }

    fn gap(&self, x: &Rational) -> usize {
        self.points.partition_point(|p| p < x)
    }

    fn structure(&self, a: usize, b: usize) -> &Gf2Matrix {
        &self.composite[a][b - a]
    }
}

/// Breakpoints sorted and deduplicated, with one representative per cell.
struct Cells {
    breaks: Vec<Rational>,
    reps: Vec<Rational>,
}

impl Cells {
    fn new(mut breaks: Vec<Rational>) -> Self {
        breaks.sort();
        breaks.dedup();
        let reps = match (breaks.first(), breaks.last()) {
            (Some(first), Some(last)) => {
                let mut reps = vec![first - int(1)];
                reps.extend(breaks.windows(2).map(|w| midpoint(&w[0], &w[1])));
                reps.push(last + int(1));
                reps
            }
            _ => vec![int(0)],
        };
        Cells { breaks, reps }
    }

    fn index_of(&self, x: &Rational) -> usize {
        self.breaks.partition_point(|p| p < x)
    }

    fn len(&self) -> usize {
        self.reps.len()
    }
}

fn shifted<'a>(points: &'a [Rational], by: &Rational) -> impl Iterator<Item = Rational> + 'a {
    let by = by.clone();
    points.iter().map(move |p| p - &by)
}

/// Per-cell gap indices for maps `A_s -> B_{s+δ}`.
struct Direction {
    cells: Cells,
    src_gap: Vec<usize>,
    dst_gap: Vec<usize>,
    offsets: Vec<usize>,
    n_vars: usize,
}

impl Direction {
    fn new(a: &GapModule, b: &GapModule, delta: &Rational) -> Self {
        let breaks = a
            .points
            .iter()
            .cloned()
            .chain(shifted(&b.points, delta))
            .collect();
        let cells = Cells::new(breaks);
        let src_gap: Vec<usize> = cells.reps.iter().map(|r| a.gap(r)).collect();
        let dst_gap: Vec<usize> = cells.reps.iter().map(|r| b.gap(&(r + delta))).collect();
        let mut offsets = Vec::with_capacity(cells.len());
        let mut n_vars = 0;
        for c in 0..cells.len() {
            offsets.push(n_vars);
            n_vars += b.dims[dst_gap[c]] * a.dims[src_gap[c]];
        }
        Direction {
            cells,
            src_gap,
            dst_gap,
            offsets,
            n_vars,
        }
    }

    fn shape(&self, c: usize, a: &GapModule, b: &GapModule) -> (usize, usize) {
        (b.dims[self.dst_gap[c]], a.dims[self.src_gap[c]])
    }

    fn decode(&self, v: &BitVec, a: &GapModule, b: &GapModule) -> Vec<Gf2Matrix> {
        (0..self.cells.len())
            .map(|c| {
                let (rows, cols) = self.shape(c, a, b);
                let mut m = Gf2Matrix::zeros(rows, cols);
                for r in 0..rows {
                    for k in 0..cols {
                        m.set(r, k, v.get(self.offsets[c] + r * cols + k));
                    }
                }
                m
            })
            .collect()
    }

    /// Basis of the maps commuting with structure maps (morphisms `A -> B[δ]`).
    fn morphism_basis(&self, a: &GapModule, b: &GapModule) -> Vec<BitVec> {
        let mut equations: Vec<Vec<usize>> = Vec::new();
        for c in 0..self.cells.len().saturating_sub(1) {
            let (sa, sa2) = (self.src_gap[c], self.src_gap[c + 1]);
            let (db, db2) = (self.dst_gap[c], self.dst_gap[c + 1]);
            let a_map = a.structure(sa, sa2);
            let b_map = b.structure(db, db2);
            let (rows_next, cols_next) = self.shape(c + 1, a, b);
            let (_, cols_here) = self.shape(c, a, b);
            // entry (i, j) of  next * a_map + b_map * here
            for i in 0..rows_next {
                for j in 0..cols_here {
                    let mut vars = Vec::new();
                    for k in 0..cols_next {
                        if a_map.get(k, j) {
                            vars.push(self.offsets[c + 1] + i * cols_next + k);
                        }
                    }
                    for k in 0..b_map.cols() {
                        if b_map.get(i, k) {
                            vars.push(self.offsets[c] + k * cols_here + j);
                        }
                    }
                    if !vars.is_empty() {
                        equations.push(vars);
                    }
                }
            }
        }
        let mut system = Gf2Matrix::zeros(equations.len(), self.n_vars);
        for (r, vars) in equations.iter().enumerate() {
            for &v in vars {
                let cur = system.get(r, v);
                system.set(r, v, !cur);
            }
        }
        system.nullspace()
    }
}

/// A required identity `second[x] * first[y] = structure` at one refined cell.
struct Triangle {
    at: Rational,
    first_cell: usize,
    second_cell: usize,
    from_gap: usize,
    to_gap: usize,
}

fn triangles(
    own: &GapModule,
    other: &GapModule,
    out_dir: &Direction,
    back_dir: &Direction,
    delta: &Rational,
) -> Vec<Triangle> {
    let two = delta * int(2);
    let breaks = own
        .points
        .iter()
        .cloned()
        .chain(shifted(&other.points, delta))
        .chain(shifted(&own.points, &two))
        .collect();
    Cells::new(breaks)
        .reps
        .into_iter()
        .map(|r| {
            let first_cell = out_dir.cells.index_of(&r);
            let second_cell = back_dir.cells.index_of(&(&r + delta));
            let from_gap = own.gap(&r);
            let to_gap = own.gap(&(&r + &two));
            Triangle {
                at: r,
                first_cell,
                second_cell,
                from_gap,
                to_gap,
            }
        })
        .collect()
}

/// Everything needed to search for or check a δ-interleaving of two gap modules.
struct Layout {
    v: GapModule,
    w: GapModule,
    forward: Direction,
    backward: Direction,
    v_triangles: Vec<Triangle>,
    w_triangles: Vec<Triangle>,
}

impl Layout {
    fn new(v: GapModule, w: GapModule, delta: &Rational) -> Self {
        let forward = Direction::new(&v, &w, delta);
        let backward = Direction::new(&w, &v, delta);
        let v_triangles = triangles(&v, &w, &forward, &backward, delta);
        let w_triangles = triangles(&w, &v, &backward, &forward, delta);
        Layout {
            v,
            w,
            forward,
            backward,
            v_triangles,
            w_triangles,
        }
    }

    fn target(&self) -> BitVec {
        let mut t = BitVec::zeros(0);
        for tri in &self.v_triangles {
            t.extend_from(&self.v.structure(tri.from_gap, tri.to_gap).to_bitvec());
        }
        for tri in &self.w_triangles {
            t.extend_from(&self.w.structure(tri.from_gap, tri.to_gap).to_bitvec());
        }
        t
    }

    /// Concatenated triangle composites for a given pair of map families.
    fn composites(&self, f: &[Gf2Matrix], g: &[Gf2Matrix]) -> BitVec {
        let mut out = BitVec::zeros(0);
        for tri in &self.v_triangles {
            out.extend_from(&g[tri.second_cell].mul(&f[tri.first_cell]).to_bitvec());
        }
        for tri in &self.w_triangles {
            out.extend_from(&f[tri.second_cell].mul(&g[tri.first_cell]).to_bitvec());
        }
        out
    }

    /// Exhaustive search over morphisms `V -> W[δ]`, solving for the way back.
    fn search(&self) -> Result<Option<(Vec<Gf2Matrix>, Vec<Gf2Matrix>)>> {
        let f_basis: Vec<Vec<Gf2Matrix>> = self
            .forward
            .morphism_basis(&self.v, &self.w)
            .iter()
            .map(|x| self.forward.decode(x, &self.v, &self.w))
            .collect();
        let g_basis: Vec<Vec<Gf2Matrix>> = self
            .backward
            .morphism_basis(&self.w, &self.v)
            .iter()
            .map(|y| self.backward.decode(y, &self.w, &self.v))
            .collect();
        if f_basis.len() > MAX_ENUMERATED_DIM || g_basis.len() > 64 {
            return Err(Error::TooLarge(format!(
                "morphism spaces of dimension {} and {}",
                f_basis.len(),
                g_basis.len()
            )));
        }
        let target = self.target();
        let zero_f: Vec<Gf2Matrix> = (0..self.forward.cells.len())
            .map(|c| {
                let (r, k) = self.forward.shape(c, &self.v, &self.w);
                Gf2Matrix::zeros(r, k)
            })
            .collect();

        // effect[i][j]: composites of g_basis[i] against f_basis[j]
        let effect: Vec<Vec<BitVec>> = g_basis
            .iter()
            .map(|g| f_basis.iter().map(|f| self.composites(f, g)).collect())
            .collect();
        let mut current: Vec<BitVec> = g_basis
            .iter()
            .map(|g| self.composites(&zero_f, g))
            .collect();
        let mut f = zero_f;

        let total: u64 = 1 << f_basis.len();
        for step in 0..total {
            if step > 0 {
                // Gray code: flip one basis vector per step
                let bit = step.trailing_zeros() as usize;
                for (i, cur) in current.iter_mut().enumerate() {
                    cur.xor_assign(&effect[i][bit]);
                }
                for (fc, bc) in f.iter_mut().zip(&f_basis[bit]) {
                    *fc = fc.add(bc);
                }
            }
            if let Some(mask) = solve_in_span(&current, &target) {
                let mut g: Vec<Gf2Matrix> = (0..self.backward.cells.len())
                    .map(|c| {
                        let (r, k) = self.backward.shape(c, &self.w, &self.v);
                        Gf2Matrix::zeros(r, k)
                    })
                    .collect();
                for (i, gi) in g_basis.iter().enumerate() {
                    if (mask >> i) & 1 == 1 {
                        for (gc, bc) in g.iter_mut().zip(gi) {
                            *gc = gc.add(bc);
                        }
                    }
                }
                return Ok(Some((f, g)));
            }
        }
        Ok(None)
    }

    fn violations(&self, f: &[Gf2Matrix], g: &[Gf2Matrix], label: &str) -> Vec<String> {
        let mut out = Vec::new();
        let squares = |dir: &Direction,
                       maps: &[Gf2Matrix],
                       a: &GapModule,
                       b: &GapModule,
                       name: &str,
                       out: &mut Vec<String>| {
            for c in 0..dir.cells.len().saturating_sub(1) {
                let lhs = maps[c + 1].mul(a.structure(dir.src_gap[c], dir.src_gap[c + 1]));
                let rhs = b
                    .structure(dir.dst_gap[c], dir.dst_gap[c + 1])
                    .mul(&maps[c]);
                if lhs != rhs {
                    out.push(format!(
                        "{name} square fails between cells at {} and {}{label}",
                        format_rational(&dir.cells.reps[c]),
                        format_rational(&dir.cells.reps[c + 1])
                    ));
                }
            }
        };
        squares(&self.forward, f, &self.v, &self.w, "forward", &mut out);
        squares(&self.backward, g, &self.w, &self.v, "backward", &mut out);
        for tri in &self.v_triangles {
            if g[tri.second_cell].mul(&f[tri.first_cell])
                != *self.v.structure(tri.from_gap, tri.to_gap)
            {
                out.push(format!(
                    "first module: 2δ-composite differs from structure map at s = {}{label}",
                    format_rational(&tri.at)
                ));
            }
        }
        for tri in &self.w_triangles {
            if f[tri.second_cell].mul(&g[tri.first_cell])
                != *self.w.structure(tri.from_gap, tri.to_gap)
            {
                out.push(format!(
                    "second module: 2δ-composite differs from structure map at s = {}{label}",
                    format_rational(&tri.at)
                ));
            }
        }
        out
    }
}

/// Returns a mask `y` with `XOR_{i in y} vectors[i] = target`, if one exists.
fn solve_in_span(vectors: &[BitVec], target: &BitVec) -> Option<u64> {
    // reduced basis entries: (vector, pivot, combination mask)
    let mut basis: Vec<(BitVec, usize, u64)> = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        let mut v = v.clone();
        let mut mask = 1u64 << i;
        for (b, pivot, bm) in &basis {
            if v.get(*pivot) {
                v.xor_assign(b);
                mask ^= bm;
            }
        }
        if let Some(pivot) = v.first_one() {
            for (b, _, bm) in basis.iter_mut() {
                if b.get(pivot) {
                    b.xor_assign(&v);
                    *bm ^= mask;
                }
            }
            basis.push((v, pivot, mask));
        }
    }
    let mut t = target.clone();
    let mut mask = 0u64;
    for (b, pivot, bm) in &basis {
        if t.get(*pivot) {
            t.xor_assign(b);
            mask ^= bm;
        }
    }
    t.is_zero().then_some(mask)
}

/// Maps realising a δ-interleaving, one family per graded summand.
///
/// With `graded` set, `forward[p]`/`backward[p]` hold the maps of parity `p`;
/// otherwise a single family acts on the modules with grading forgotten.
/// Each map is attached to a point of the cell on which it is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavingCertificate {
    pub delta: Rational,
    pub graded: bool,
    pub forward: Vec<Vec<CellMap>>,
    pub backward: Vec<Vec<CellMap>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMap {
    pub at: Rational,
    pub matrix: Gf2Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterleavingResult {
    pub delta: Scalar,
    pub certificate: Option<InterleavingCertificate>,
}

fn summands(m: &SampledModule, graded: bool) -> Vec<SampledModule> {
    if graded {
        Parity::BOTH.iter().map(|&p| m.parity_part(p)).collect()
    } else {
        vec![m.ungraded()]
    }
}

fn check_inputs(m1: &SampledModule, m2: &SampledModule) -> Result<()> {
    for m in [m1, m2] {
        let violations = validate_module(m);
        if !violations.is_empty() {
            return Err(Error::InvalidModule(
                violations.iter().map(|v| v.to_string()).collect(),
            ));
        }
        if m.max_total_dim() > MAX_SAMPLE_DIM {
            return Err(Error::TooLarge(format!(
                "sample dimension {} exceeds {MAX_SAMPLE_DIM}",
                m.max_total_dim()
            )));
        }
    }
    let (s1, s2) = (m1.spectrum(), m2.spectrum());
    if s1.lo() != s2.lo() || s1.hi() != s2.hi() {
        return Err(Error::HorizonMismatch);
    }
    Ok(())
}

/// Sorted candidate values of δ: 0, all differences of spectrum points of
/// either module, and their halves.
pub fn interleaving_candidates(m1: &SampledModule, m2: &SampledModule) -> Vec<Rational> {
    let points: Vec<&Rational> = m1
        .spectrum()
        .points()
        .iter()
        .chain(m2.spectrum().points())
        .collect();
    let mut out = vec![int(0)];
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            let d = (*x - *y).abs();
            out.push(&d / int(2));
            out.push(d);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Attempts a δ-interleaving of every summand at one value of δ.
fn interleave_at(
    parts1: &[GapModule],
    parts2: &[GapModule],
    delta: &Rational,
    graded: bool,
) -> Result<Option<InterleavingCertificate>> {
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for (v, w) in parts1.iter().zip(parts2) {
        let layout = Layout::new(v.clone(), w.clone(), delta);
        match layout.search()? {
            Some((f, g)) => {
                forward.push(attach(&layout.forward, f));
                backward.push(attach(&layout.backward, g));
            }
            None => return Ok(None),
        }
    }
    Ok(Some(InterleavingCertificate {
        delta: delta.clone(),
        graded,
        forward,
        backward,
    }))
}

fn attach(dir: &Direction, maps: Vec<Gf2Matrix>) -> Vec<CellMap> {
    dir.cells
        .reps
        .iter()
        .cloned()
        .zip(maps)
        .map(|(at, matrix)| CellMap { at, matrix })
        .collect()
}

fn gap_parts(m: &SampledModule, graded: bool) -> Result<Vec<GapModule>> {
    summands(m, graded).iter().map(GapModule::new).collect()
}

/// Smallest candidate δ admitting a δ-interleaving, with a certificate.
///
/// Uses bisection over [`interleaving_candidates`]; existence of a
/// δ-interleaving is monotone in δ. Returns `+inf` when even the largest
/// candidate admits none.
pub fn interleaving_search(
    m1: &SampledModule,
    m2: &SampledModule,
    graded: bool,
) -> Result<InterleavingResult> {
    check_inputs(m1, m2)?;
    let parts1 = gap_parts(m1, graded)?;
    let parts2 = gap_parts(m2, graded)?;
    let candidates = interleaving_candidates(m1, m2);
    let (mut lo, mut hi) = (0usize, candidates.len());
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match interleave_at(&parts1, &parts2, &candidates[mid], graded)? {
            Some(cert) => {
                best = Some(cert);
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Ok(match best {
        Some(cert) => InterleavingResult {
            delta: Scalar::Finite(cert.delta.clone()),
            certificate: Some(cert),
        },
        None => InterleavingResult {
            delta: Scalar::PosInf,
            certificate: None,
        },
    })
}

/// Interleaving distance found by exhaustive search.
pub fn interleaving_distance_bruteforce(
    m1: &SampledModule,
    m2: &SampledModule,
    graded: bool,
) -> Result<Scalar> {
    interleaving_search(m1, m2, graded).map(|r| r.delta)
}

/// Tries a single δ; `None` when no δ-interleaving exists.
pub fn find_interleaving(
    m1: &SampledModule,
    m2: &SampledModule,
    delta: &Rational,
    graded: bool,
) -> Result<Option<InterleavingCertificate>> {
    check_inputs(m1, m2)?;
    interleave_at(
        &gap_parts(m1, graded)?,
        &gap_parts(m2, graded)?,
        delta,
        graded,
    )
}

/// Lists every failed commutation square and every 2δ-composite that
/// differs from the structure map. Empty means `c` is a δ-interleaving.
pub fn verify_interleaving(
    c: &InterleavingCertificate,
    m1: &SampledModule,
    m2: &SampledModule,
) -> Result<Vec<String>> {
    if c.delta < int(0) {
        return Err(Error::ShapeMismatch("negative delta".into()));
    }
    let parts1 = gap_parts(m1, c.graded)?;
    let parts2 = gap_parts(m2, c.graded)?;
    if c.forward.len() != parts1.len() || c.backward.len() != parts1.len() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} map families per direction",
            parts1.len()
        )));
    }
    let mut out = Vec::new();
    for (p, (v, w)) in parts1.into_iter().zip(parts2).enumerate() {
        let layout = Layout::new(v, w, &c.delta);
        let f = checked_maps(
            &layout.forward,
            &c.forward[p],
            &layout.v,
            &layout.w,
            "forward",
        )?;
        let g = checked_maps(
            &layout.backward,
            &c.backward[p],
            &layout.w,
            &layout.v,
            "backward",
        )?;
        let label = if c.graded {
            format!(" (parity {p})")
        } else {
            String::new()
        };
        out.extend(layout.violations(&f, &g, &label));
    }
    Ok(out)
}

fn checked_maps(
    dir: &Direction,
    maps: &[CellMap],
    a: &GapModule,
    b: &GapModule,
    name: &str,
) -> Result<Vec<Gf2Matrix>> {
    if maps.len() != dir.cells.len() {
        return Err(Error::ShapeMismatch(format!(
            "{name}: {} maps for {} cells",
            maps.len(),
            dir.cells.len()
        )));
    }
    maps.iter()
        .enumerate()
        .map(|(c, cm)| {
            if dir.cells.breaks.contains(&cm.at) || dir.cells.index_of(&cm.at) != c {
                return Err(Error::ShapeMismatch(format!(
                    "{name}: map {c} is attached to {}, outside its cell",
                    format_rational(&cm.at)
                )));
            }
            if cm.matrix.shape() != dir.shape(c, a, b) {
                let (r, k) = dir.shape(c, a, b);
                return Err(Error::ShapeMismatch(format!(
                    "{name}: map {c} has shape {}x{}, expected {r}x{k}",
                    cm.matrix.rows(),
                    cm.matrix.cols()
                )));
            }
            Ok(cm.matrix.clone())
        })
        .collect()
}
