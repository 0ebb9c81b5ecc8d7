//! Intersections of a variety with quadrics.
//!
//! [`max_intersection_scan`] visits every quadric up to scalars by a
//! depth-first walk over its coefficients, carrying the partial value vector
//! on the points of `X` down the tree. It does not share code with the Gray
//! walk in [`crate::codes`], so the two give independent routes to the
//! minimum distance.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{MonomialBasis, Mode};
use crate::error::{Error, Result};
use crate::forms::{
    classify, num_quadratic_coeffs, variety_points, Form, FormKind, HermitianForm, QuadraticForm,
    QuadricType,
};
use crate::gf::{Elem, Field};
use crate::linalg::intersect_subspaces;
use crate::proj::{pi, Flat, PointSet, Space};

/// Forms visited by an exhaustive scan, at most.
pub const SCAN_CAP: f64 = 1e9;

/// Attaining forms kept per scan.
pub const ARGMAX_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct IntersectionReport {
    pub count: usize,
    pub lines: Vec<Flat>,
    pub order_w: usize,
    pub bound_checked: String,
    pub bound: Option<u64>,
    pub attained: bool,
}

/// The bound on `|X ∩ Q|` that applies to `X`, by name and value.
pub fn applicable_bound(space: &Space, x: &Form, order_w: usize) -> Result<(String, Option<u64>)> {
    let c = classify(space, x)?;
    let q = space.q() as u64;
    let n = space.dim();
    let named = |s: &str, v: u64| Ok((s.to_string(), Some(v)));
    match (c.kind, n, c.rank, c.quadric_type) {
        (FormKind::Quadric, 4, 5, _) => named("parabolic quadric: 2q^2+3q+1", 2 * q * q + 3 * q + 1),
        (FormKind::Quadric, 4, 3, _) => named("rank-3 cone: 4q^2+q+1", 4 * q * q + q + 1),
        (FormKind::Quadric, 4, 4, Some(QuadricType::Hyperbolic)) => {
            named("rank-4 cone, g=2: 4q^2+1", 4 * q * q + 1)
        }
        (FormKind::Quadric, 4, 4, Some(QuadricType::Elliptic)) => {
            named("rank-4 cone, g=1: 3q^2+q+1", 3 * q * q + q + 1)
        }
        (FormKind::Hermitian, 4, 5, _) => {
            let t = space.field().sqrt_order().expect("hermitian field") as u64;
            named(
                "non-singular hermitian variety: 2t^5+t^3+2t^2+1",
                2 * t.pow(5) + t.pow(3) + 2 * t * t + 1,
            )
        }
        _ if n == 4 && order_w == 5 => named("order-5 pair: 3q^2+q+1", 3 * q * q + q + 1),
        _ if n >= 2 => named(
            "quadric zero count: 2q^(n-1)+pi_(n-2)",
            2 * q.pow(n as u32 - 1) + pi(n as i64 - 2, q),
        ),
        _ => Ok(("none".to_string(), None)),
    }
}

pub fn intersection_count(space: &Space, x: &Form, q: &Form) -> Result<IntersectionReport> {
    let common = variety_points(space, x)?.intersection(&variety_points(space, q)?);
    let lines = space.lines_in_set(&common);
    let order_w = pair_order(space.field(), x, q);
    let (bound_checked, bound) = applicable_bound(space, x, order_w)?;
    Ok(IntersectionReport {
        count: common.len(),
        lines,
        order_w,
        attained: bound == Some(common.len() as u64),
        bound_checked,
        bound,
    })
}

/// Fewest variables in which both forms can be written: `n+1 - dim(R1 ∩ R2)`.
pub fn pair_order(field: &Field, a: &Form, b: &Form) -> usize {
    let m = a.dim() + 1;
    let r = intersect_subspaces(field, &a.singular_space(field), &b.singular_space(field), m);
    m - r.len()
}

/// Points of `Q1 ∩ Q2` in PG(n) when both are cones with an `l`-dimensional
/// common vector radical over a base intersection of `m0` points.
pub fn cone_lift_count(m0: u64, l: u32, q: u64) -> u64 {
    m0 * q.pow(l) + pi(l as i64 - 1, q)
}

/// Outcome of scanning all quadrics against a fixed point set.
#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub points: usize,
    pub forms_scanned: u64,
    pub exact: bool,
    /// `|X ∩ Z(f)|` -> number of projective forms `f`.
    pub histogram: BTreeMap<usize, u64>,
    /// Largest count below `|X|`.
    pub max_proper: Option<usize>,
    #[serde(skip)]
    pub argmax: Vec<QuadraticForm>,
    pub argmax_total: u64,
    /// Forms vanishing on all of `X`.
    #[serde(skip)]
    pub kernel: Vec<QuadraticForm>,
    #[serde(skip)]
    pub watched: Vec<(QuadraticForm, usize)>,
    pub watched_total: u64,
}

impl ScanResult {
    pub fn kernel_classes(&self) -> u64 {
        self.histogram.get(&self.points).copied().unwrap_or(0)
    }

    pub fn max_all(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    /// Largest count over quadrics other than `own_classes` forms that define `X` itself.
    pub fn max_excluding(&self, own_classes: u64) -> usize {
        if self.kernel_classes() > own_classes {
            self.points
        } else {
            self.max_proper.unwrap_or(0)
        }
    }

    /// Observed counts strictly between `lo` and `hi`.
    pub fn values_between(&self, lo: usize, hi: usize) -> Vec<usize> {
        self.histogram
            .keys()
            .copied()
            .filter(|&v| v > lo && v < hi)
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Keep forms whose count is at least this value.
    pub watch_at_least: Option<usize>,
}

struct ScanPartial {
    hist: Vec<u64>,
    best: Option<usize>,
    argmax: Vec<Vec<u8>>,
    argmax_total: u64,
    kernel: Vec<Vec<u8>>,
    watched: Vec<(Vec<u8>, usize)>,
    watched_total: u64,
}

struct Scanner<'a> {
    q: usize,
    npts: usize,
    monomials: usize,
    /// `vals[(m * q + c) * npts + i] = c * m(x_i)`.
    vals: Vec<u8>,
    add: Vec<u8>,
    watch: Option<usize>,
    _field: &'a Field,
}

impl<'a> Scanner<'a> {
    fn new(space: &'a Space, points: &PointSet, watch: Option<usize>) -> Scanner<'a> {
        let field = space.field();
        let q = field.order() as usize;
        assert!(q <= 256, "scan stores symbols in bytes");
        let basis = MonomialBasis::new(space.dim(), 2);
        let pts: Vec<&[Elem]> = points.iter().map(|i| space.point(i)).collect();
        let npts = pts.len();
        let mut vals = vec![0u8; basis.len() * q * npts];
        for m in 0..basis.len() {
            for (i, x) in pts.iter().enumerate() {
                let v = basis.eval(field, m, x);
                for c in 0..q {
                    vals[(m * q + c) * npts + i] = field.mul(Elem(c as u16), v).0 as u8;
                }
            }
        }
        let add = (0..q * q)
            .map(|i| field.add(Elem((i / q) as u16), Elem((i % q) as u16)).0 as u8)
            .collect();
        Scanner {
            q,
            npts,
            monomials: basis.len(),
            vals,
            add,
            watch,
            _field: field,
        }
    }

    fn row(&self, m: usize, c: usize) -> &[u8] {
        let s = (m * self.q + c) * self.npts;
        &self.vals[s..s + self.npts]
    }

    fn choices(&self, lead_seen: bool) -> std::ops::Range<usize> {
        if lead_seen {
            0..self.q
        } else {
            0..2
        }
    }

    fn prefixes(&self, depth: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for p in out {
                let seen = p.iter().any(|&c| c != 0);
                for c in self.choices(seen) {
                    let mut v = p.clone();
                    v.push(c as u8);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    fn run_prefix(&self, prefix: &[u8]) -> ScanPartial {
        let mut part = ScanPartial {
            hist: vec![0; self.npts + 1],
            best: None,
            argmax: Vec::new(),
            argmax_total: 0,
            kernel: Vec::new(),
            watched: Vec::new(),
            watched_total: 0,
        };
        let mut bufs = vec![vec![0u8; self.npts]; self.monomials + 1];
        let mut coeffs = vec![0u8; self.monomials];
        for (m, &c) in prefix.iter().enumerate() {
            coeffs[m] = c;
            let (lo, hi) = bufs.split_at_mut(m + 1);
            self.add_into(&lo[m], self.row(m, c as usize), &mut hi[0]);
        }
        let seen = prefix.iter().any(|&c| c != 0);
        self.dfs(prefix.len(), seen, &mut bufs, &mut coeffs, &mut part);
        part
    }

    #[inline]
    fn add_into(&self, a: &[u8], b: &[u8], out: &mut [u8]) {
        let q = self.q;
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = self.add[x as usize * q + y as usize];
        }
    }

    fn dfs(
        &self,
        level: usize,
        seen: bool,
        bufs: &mut [Vec<u8>],
        coeffs: &mut [u8],
        part: &mut ScanPartial,
    ) {
        let q = self.q;
        if level + 1 == self.monomials {
            for c in self.choices(seen) {
                if !seen && c == 0 {
                    continue;
                }
                let row = self.row(level, c);
                let zeros = bufs[level]
                    .iter()
                    .zip(row)
                    .filter(|(&x, &y)| self.add[x as usize * q + y as usize] == 0)
                    .count();
                coeffs[level] = c as u8;
                self.record(zeros, coeffs, part);
            }
            return;
        }
        for c in self.choices(seen) {
            coeffs[level] = c as u8;
            let (lo, hi) = bufs.split_at_mut(level + 1);
            self.add_into(&lo[level], self.row(level, c), &mut hi[0]);
            self.dfs(level + 1, seen || c != 0, bufs, coeffs, part);
        }
        coeffs[level] = 0;
    }

    #[inline]
    fn record(&self, count: usize, coeffs: &[u8], part: &mut ScanPartial) {
        part.hist[count] += 1;
        if count == self.npts {
            if part.kernel.len() < ARGMAX_CAP {
                part.kernel.push(coeffs.to_vec());
            }
        } else {
            match part.best {
                Some(b) if count < b => {}
                Some(b) if count == b => {
                    part.argmax_total += 1;
                    if part.argmax.len() < ARGMAX_CAP {
                        part.argmax.push(coeffs.to_vec());
                    }
                }
                _ => {
                    part.best = Some(count);
                    part.argmax.clear();
                    part.argmax.push(coeffs.to_vec());
                    part.argmax_total = 1;
                }
            }
        }
        if let Some(w) = self.watch {
            if count >= w {
                part.watched_total += 1;
                if part.watched.len() < ARGMAX_CAP {
                    part.watched.push((coeffs.to_vec(), count));
                }
            }
        }
    }
}

fn to_form(n: usize, coeffs: &[u8]) -> QuadraticForm {
    QuadraticForm::new(n, coeffs.iter().map(|&c| Elem(c as u16)).collect())
        .expect("monomial count matches")
}

/// Number of quadrics in PG(n, q) up to scalars.
pub fn projective_quadric_count(n: usize, q: u32) -> f64 {
    let m = num_quadratic_coeffs(n) as i32;
    ((q as f64).powi(m) - 1.0) / (q as f64 - 1.0)
}

/// Histogram of `|X ∩ Z(f)|` over quadrics `f` up to scalars, for a point set `X`.
pub fn scan_point_set(
    space: &Space,
    points: &PointSet,
    mode: Mode,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    let n = space.dim();
    let npts = points.len();
    let scanner = Scanner::new(space, points, opts.watch_at_least);
    let partials: Vec<ScanPartial> = match mode {
        Mode::Exhaustive => {
            let size = projective_quadric_count(n, space.q());
            if size > SCAN_CAP {
                return Err(Error::ExhaustiveCap {
                    size,
                    cap: SCAN_CAP,
                });
            }
            let depth = 4.min(scanner.monomials - 1);
            scanner
                .prefixes(depth)
                .into_par_iter()
                .map(|p| scanner.run_prefix(&p))
                .collect()
        }
        Mode::Sampled { samples, seed } => vec![sampled_scan(space, points, &scanner, samples, seed)],
    };
    let mut histogram = vec![0u64; npts + 1];
    let best = partials.iter().filter_map(|p| p.best).max();
    let mut argmax = Vec::new();
    let mut argmax_total = 0;
    let mut kernel = Vec::new();
    let mut watched = Vec::new();
    let mut watched_total = 0;
    for part in partials {
        for (v, c) in part.hist.iter().enumerate() {
            histogram[v] += c;
        }
        if part.best == best {
            argmax_total += part.argmax_total;
            for c in part.argmax {
                if argmax.len() < ARGMAX_CAP {
                    argmax.push(to_form(n, &c));
                }
            }
        }
        for c in part.kernel {
            if kernel.len() < ARGMAX_CAP {
                kernel.push(to_form(n, &c));
            }
        }
        watched_total += part.watched_total;
        for (c, v) in part.watched {
            if watched.len() < ARGMAX_CAP {
                watched.push((to_form(n, &c), v));
            }
        }
    }
    Ok(ScanResult {
        points: npts,
        forms_scanned: histogram.iter().sum(),
        exact: matches!(mode, Mode::Exhaustive),
        histogram: histogram
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, &c)| (v, c))
            .collect(),
        max_proper: best,
        argmax,
        argmax_total,
        kernel,
        watched,
        watched_total,
    })
}

fn sampled_scan(
    space: &Space,
    points: &PointSet,
    scanner: &Scanner<'_>,
    samples: u64,
    seed: u64,
) -> ScanPartial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = space.field();
    let q = field.order();
    let m = scanner.monomials;
    let mut part = ScanPartial {
        hist: vec![0; points.len() + 1],
        best: None,
        argmax: Vec::new(),
        argmax_total: 0,
        kernel: Vec::new(),
        watched: Vec::new(),
        watched_total: 0,
    };
    let pts: Vec<usize> = points.iter().collect();
    let mut drawn = 0;
    while drawn < samples {
        let raw: Vec<Elem> = (0..m).map(|_| Elem(rng.gen_range(0..q) as u16)).collect();
        let Some(lead) = raw.iter().find(|c| !c.is_zero()).copied() else {
            continue;
        };
        drawn += 1;
        let inv = field.inv(lead).expect("nonzero");
        let coeffs: Vec<Elem> = raw.iter().map(|&c| field.mul(c, inv)).collect();
        let f = QuadraticForm::new(space.dim(), coeffs.clone()).expect("length");
        let zeros = pts
            .iter()
            .filter(|&&i| f.eval(field, space.point(i)).is_zero())
            .count();
        let bytes: Vec<u8> = coeffs.iter().map(|c| c.0 as u8).collect();
        scanner.record(zeros, &bytes, &mut part);
    }
    part
}

/// [`scan_point_set`] over the points of a variety.
pub fn max_intersection_scan(
    space: &Space,
    x: &Form,
    mode: Mode,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    let pts = variety_points(space, x)?;
    scan_point_set(space, &pts, mode, opts)
}

/// For a codimension-2 flat `k`, counts hyperplanes through it on which the
/// two varieties have the same section: `(equal point sets, proportional forms)`.
pub fn equal_section_hyperplanes(space: &Space, x: &Form, q: &Form, k: &Flat) -> Result<(usize, usize)> {
    let field = space.field();
    let xs = variety_points(space, x)?;
    let qs = variety_points(space, q)?;
    let mut same_points = 0;
    let mut same_forms = 0;
    for h in space.hyperplanes_through(k)? {
        let hp = h.points(space);
        if xs.intersection(&hp) == qs.intersection(&hp) {
            same_points += 1;
        }
        let (Form::Quadric(a), Form::Quadric(b)) = (x.restrict(field, h.basis()), q.restrict(field, h.basis()))
        else {
            return Err(Error::Unsupported("section comparison needs quadrics".into()));
        };
        if proportional(field, a.coeffs(), b.coeffs()) {
            same_forms += 1;
        }
    }
    Ok((same_points, same_forms))
}

/// `a = c b` for some nonzero `c`, both nonzero.
pub fn proportional(field: &Field, a: &[Elem], b: &[Elem]) -> bool {
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if a[i].is_zero() {
        return false;
    }
    let c = field.div(a[i], b[i]).expect("nonzero");
    a.iter().zip(b).all(|(&x, &y)| x == field.mul(c, y))
}

/// One cell of a PG(3) intersection census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub pair_type: String,
    pub lines: usize,
    pub pairs: u64,
    pub max_points: usize,
    pub cap: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Census {
    pub rows: Vec<CensusRow>,
}

impl Census {
    pub fn exceeded(&self) -> Vec<&CensusRow> {
        self.rows
            .iter()
            .filter(|r| r.cap.is_some_and(|c| r.max_points as u64 > c))
            .collect()
    }

    pub fn unlisted(&self) -> Vec<&CensusRow> {
        self.rows.iter().filter(|r| r.cap.is_none()).collect()
    }

    fn add(&mut self, pair_type: &str, lines: usize, points: usize, cap: Option<u64>) {
        if let Some(r) = self
            .rows
            .iter_mut()
            .find(|r| r.pair_type == pair_type && r.lines == lines)
        {
            r.pairs += 1;
            r.max_points = r.max_points.max(points);
        } else {
            self.rows.push(CensusRow {
                pair_type: pair_type.to_string(),
                lines,
                pairs: 1,
                max_points: points,
                cap,
            });
        }
    }
}

fn all_quadrics(n: usize, field: &Field) -> impl Iterator<Item = QuadraticForm> + '_ {
    let m = num_quadratic_coeffs(n);
    let q = field.order() as u64;
    (1..q.pow(m as u32)).filter_map(move |idx| {
        let mut r = idx;
        let coeffs: Vec<Elem> = (0..m)
            .map(|_| {
                let v = Elem((r % q) as u16);
                r /= q;
                v
            })
            .collect();
        // one representative per scalar class: leading coefficient 1
        let lead = coeffs.iter().find(|c| !c.is_zero())?;
        (*lead == Elem::ONE).then(|| QuadraticForm::new(n, coeffs).expect("length"))
    })
}

/// Quadric type in PG(3): `Some("cone")` for rank 3, `Some("hyperbolic")` for rank 4 hyperbolic.
fn pg3_type(space: &Space, f: &QuadraticForm) -> Option<&'static str> {
    let c = classify(space, &Form::Quadric(f.clone())).ok()?;
    match (c.rank, c.quadric_type) {
        (3, _) => Some("cone"),
        (4, Some(QuadricType::Hyperbolic)) => Some("hyperbolic"),
        _ => None,
    }
}

/// Common-line and point counts for pairs of cones and hyperbolic quadrics
/// in PG(3, q) that share a line. One member of each pair is fixed up to
/// projectivity; the other ranges over all quadrics.
pub fn pg3_quadric_census(q: u32) -> Result<Census> {
    let space = Space::new(3, Field::with_order(q)?)?;
    let field = space.field();
    let qq = q as u64;
    let e = |terms: &[(usize, usize)]| {
        let t: Vec<_> = terms.iter().map(|&(i, j)| (i, j, Elem::ONE)).collect();
        QuadraticForm::from_terms(field, 3, &t)
    };
    let hyperbolic = e(&[(0, 1), (2, 3)]);
    let cone = e(&[(0, 1), (2, 2)]);
    let cap = |pair: &str, lines: usize| -> Option<u64> {
        match (pair, lines) {
            ("hyperbolic-cone", 2) => Some(3 * qq),
            ("hyperbolic-cone", 1) => Some(2 * qq + 1),
            ("cone-cone", 4) => Some(4 * qq + 1),
            ("cone-cone", 2) => Some(3 * qq),
            ("cone-cone", 1) => Some(2 * qq + 1),
            ("hyperbolic-hyperbolic", 4) => Some(4 * qq),
            ("hyperbolic-hyperbolic", 2) => Some(3 * qq + 1),
            ("hyperbolic-hyperbolic", 1) => Some(2 * (qq + 1)),
            _ => None,
        }
    };
    let mut census = Census::default();
    for (fixed, fixed_name) in [(&hyperbolic, "hyperbolic"), (&cone, "cone")] {
        let fixed_form = Form::Quadric(fixed.clone());
        let pts = variety_points(&space, &fixed_form)?;
        let lines: Vec<Vec<usize>> = space
            .lines_in_set(&pts)
            .iter()
            .map(|l| l.point_indices(&space))
            .collect();
        let members: Vec<usize> = pts.iter().collect();
        for other in all_quadrics(3, field) {
            let zero: Vec<bool> = (0..space.num_points()).map(|_| false).collect::<Vec<_>>();
            let mut on = zero;
            for &i in &members {
                on[i] = other.eval(field, space.point(i)).is_zero();
            }
            let common_lines = lines.iter().filter(|l| l.iter().all(|&i| on[i])).count();
            if common_lines == 0 {
                continue;
            }
            let count = members.iter().filter(|&&i| on[i]).count();
            if count == members.len() {
                // same zero set: not a pair of distinct quadrics
                continue;
            }
            let Some(other_name) = pg3_type(&space, &other) else {
                continue;
            };
            let pair = match (fixed_name, other_name) {
                ("hyperbolic", "cone") => "hyperbolic-cone",
                ("cone", "cone") => "cone-cone",
                ("hyperbolic", "hyperbolic") => "hyperbolic-hyperbolic",
                // the cone-hyperbolic pairs are covered from the hyperbolic side
                _ => continue,
            };
            census.add(pair, common_lines, count, cap(pair, common_lines));
        }
    }
    census.rows.sort_by(|a, b| (&a.pair_type, a.lines).cmp(&(&b.pair_type, b.lines)));
    Ok(census)
}

/// Common-line and point counts of the non-singular hermitian surface with
/// cones and hyperbolic quadrics of PG(3, t^2) sharing a line with it. For a
/// hyperbolic quadric the line count is the larger count over its two reguli.
pub fn pg3_hermitian_census(t: u32) -> Result<Census> {
    let q = t * t;
    let space = Space::new(3, Field::with_order(q)?)?;
    let field = space.field();
    let tt = t as u64;
    let x = Form::Hermitian(HermitianForm::diagonal(field, &[Elem::ONE; 4])?);
    let pts = variety_points(&space, &x)?;
    let members: Vec<usize> = pts.iter().collect();
    let lines: Vec<Vec<usize>> = space
        .lines_in_set(&pts)
        .iter()
        .map(|l| l.point_indices(&space))
        .collect();
    let cap = |pair: &str, lines: usize| -> Option<u64> {
        match (pair, lines) {
            ("cone", 2) => Some(tt.pow(3) + 2 * tt * tt - tt + 1),
            ("cone", 1) => Some(tt.pow(3) + tt * tt + 1),
            ("hyperbolic", 3) => Some(2 * tt.pow(3) + tt * tt + 1),
            ("hyperbolic", 2) => Some(tt.pow(3) + 3 * tt * tt - tt + 1),
            ("hyperbolic", 1) => Some(tt.pow(3) + 2 * tt * tt + 1),
            _ => None,
        }
    };
    let meets = |a: &[usize], b: &[usize]| a.iter().any(|i| b.contains(i));
    let mut census = Census::default();
    let mut on = vec![false; space.num_points()];
    for other in all_quadrics(3, field) {
        for &i in &members {
            on[i] = other.eval(field, space.point(i)).is_zero();
        }
        let common: Vec<&Vec<usize>> = lines.iter().filter(|l| l.iter().all(|&i| on[i])).collect();
        if common.is_empty() {
            continue;
        }
        let Some(kind) = pg3_type(&space, &other) else {
            continue;
        };
        let count = members.iter().filter(|&&i| on[i]).count();
        let l = if kind == "hyperbolic" {
            // lines of one regulus are pairwise skew; lines of different reguli meet
            let first = common[0];
            let same = common.iter().filter(|l| !meets(l, first) || *l == &first).count();
            same.max(common.len() - same)
        } else {
            common.len()
        };
        census.add(kind, l, count, cap(kind, l));
    }
    census.rows.sort_by(|a, b| (&a.pair_type, a.lines).cmp(&(&b.pair_type, b.lines)));
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize, q: u32) -> Space {
        Space::new(n, Field::with_order(q).unwrap()).unwrap()
    }

    fn quad(s: &Space, terms: &[(usize, usize, u16)]) -> Form {
        let t: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, Elem(c))).collect();
        Form::Quadric(QuadraticForm::from_terms(s.field(), s.dim(), &t))
    }

    #[test]
    fn four_plane_example_q3() {
        let s = space(4, 3);
        let x = quad(&s, &[(0, 1, 1), (2, 3, 1)]);
        let q = quad(&s, &[(0, 3, 1), (1, 2, 1)]);
        let r = intersection_count(&s, &x, &q).unwrap();
        assert_eq!(r.count, 37);
        assert!(r.attained);
    }

    #[test]
    fn parabolic_example_q3() {
        let s = space(4, 3);
        let x = quad(&s, &[(0, 1, 1), (2, 3, 1), (4, 4, 1)]);
        let q = Form::Quadric(QuadraticForm::product(
            s.field(),
            &[Elem(1), Elem(1), Elem(0), Elem(0), Elem(0)],
            &[Elem(0), Elem(0), Elem(1), Elem(1), Elem(0)],
        ));
        let r = intersection_count(&s, &x, &q).unwrap();
        assert_eq!(r.count, 28);
        assert_eq!(r.order_w, 5);
        let own = intersection_count(&s, &x, &x).unwrap();
        assert_eq!(own.count, 40);
    }

    #[test]
    fn pair_order_examples() {
        let s = space(4, 5);
        let p = quad(&s, &[(0, 1, 1), (2, 3, 1), (4, 4, 1)]);
        assert_eq!(pair_order(s.field(), &p, &p), 5);
        let a = quad(&s, &[(0, 1, 1)]);
        let b = quad(&s, &[(0, 2, 1), (1, 1, 1)]);
        assert_eq!(pair_order(s.field(), &a, &b), 3);
    }

    #[test]
    fn cone_lift_values() {
        assert_eq!(cone_lift_count(13, 1, 3), 40);
        assert_eq!(cone_lift_count(0, 1, 3), 1);
        assert_eq!(cone_lift_count(4, 2, 2), 19);
    }

    #[test]
    fn scan_matches_direct_counts_pg2() {
        let s = space(2, 3);
        let conic = quad(&s, &[(0, 1, 1), (2, 2, 1)]);
        let scan = max_intersection_scan(&s, &conic, Mode::Exhaustive, &ScanOptions::default()).unwrap();
        let pts = variety_points(&s, &conic).unwrap();
        let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
        for f in all_quadrics(2, s.field()) {
            let z = variety_points(&s, &Form::Quadric(f)).unwrap();
            *hist.entry(z.intersection_len(&pts)).or_insert(0) += 1;
        }
        assert_eq!(scan.histogram, hist);
        assert_eq!(scan.forms_scanned as f64, projective_quadric_count(2, 3));
        // four points impose four conditions on a 6-dimensional space
        assert_eq!(scan.kernel_classes(), 4);
        assert_eq!(scan.max_proper, Some(3));
        assert_eq!(scan.max_excluding(1), 4);
    }

    #[test]
    fn proportional_forms() {
        let f = Field::with_order(5).unwrap();
        let a = [Elem(1), Elem(2), Elem(0)];
        let b = [Elem(2), Elem(4), Elem(0)];
        assert!(proportional(&f, &a, &b));
        assert!(!proportional(&f, &a, &[Elem(2), Elem(3), Elem(0)]));
        assert!(!proportional(&f, &a, &[Elem(0); 3]));
    }
}
