//! Functional codes `C_h(X)` and their exact weight spectra.
//!
//! A codeword is the vector of values of a degree-`h` form at the points of
//! `X`, taken at their canonical representatives and in enumeration order.
//! The spectrum walks every message of GF(q)^k in a p-ary Gray order, so each
//! step adds one fixed codeword to the running one. In characteristic 2 the
//! running codeword is bit-sliced (one bit plane per GF(2)-coordinate of the
//! symbol) and a step is a handful of XORs.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{variety_points, Form, QuadraticForm};
use crate::gf::{Elem, Field};
use crate::linalg::Matrix;
use crate::proj::{pi, Space};

/// Representatives kept per weight.
pub const REPRESENTATIVE_CAP: usize = 64;

/// Largest message space walked exhaustively.
pub const EXHAUSTIVE_CAP: f64 = 2e9;

/// Exponent vectors of the degree-`h` monomials in `n+1` variables, in
/// descending lexicographic order (`x0^h` first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    h: u32,
    exps: Vec<Vec<u32>>,
}

fn push_exponents(rest: usize, h: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        let mut v = prefix.clone();
        v.push(h);
        out.push(v);
        return;
    }
    for e in (0..=h).rev() {
        prefix.push(e);
        push_exponents(rest - 1, h - e, prefix, out);
        prefix.pop();
    }
}

impl MonomialBasis {
    pub fn new(n: usize, h: u32) -> MonomialBasis {
        let mut exps = Vec::new();
        push_exponents(n, h, &mut Vec::new(), &mut exps);
        MonomialBasis { n, h, exps }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exps
    }

    pub fn eval(&self, field: &Field, m: usize, x: &[Elem]) -> Elem {
        self.exps[m]
            .iter()
            .zip(x)
            .fold(Elem::ONE, |acc, (&e, &xi)| field.mul(acc, field.pow(xi, e as u64)))
    }

    /// Value of `sum_m c_m x^m`.
    pub fn eval_form(&self, field: &Field, coeffs: &[Elem], x: &[Elem]) -> Elem {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Elem::ZERO, |acc, (m, &c)| {
                field.add(acc, field.mul(c, self.eval(field, m, x)))
            })
    }
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The evaluation code of degree-`h` forms on the points of a variety.
#[derive(Clone, Debug)]
pub struct FunctionalCode {
    field: Arc<Field>,
    basis: MonomialBasis,
    points: Vec<Vec<Elem>>,
    point_indices: Vec<usize>,
    generator: Matrix,
    pivots: Vec<usize>,
    kernel_dim: usize,
}

impl FunctionalCode {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.points.len()
    }

    pub fn dimension(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn degree(&self) -> u32 {
        self.basis.h
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// Monomial index behind each generator row.
    pub fn pivot_monomials(&self) -> &[usize] {
        &self.pivots
    }

    /// Point indices (in the ambient enumeration) of the code coordinates.
    pub fn point_indices(&self) -> &[usize] {
        &self.point_indices
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn encode(&self, message: &[Elem]) -> Vec<Elem> {
        assert_eq!(message.len(), self.dimension(), "message length");
        let f = &*self.field;
        let mut cw = vec![Elem::ZERO; self.length()];
        for (r, &m) in message.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (x, &g) in cw.iter_mut().zip(self.generator.row(r)) {
                *x = f.add(*x, f.mul(m, g));
            }
        }
        cw
    }

    pub fn weight(&self, message: &[Elem]) -> usize {
        self.encode(message).iter().filter(|x| !x.is_zero()).count()
    }

    /// Full monomial coefficient vector of the form behind a message.
    pub fn message_coeffs(&self, message: &[Elem]) -> Vec<Elem> {
        let mut c = vec![Elem::ZERO; self.basis.len()];
        for (&m, &p) in message.iter().zip(&self.pivots) {
            c[p] = m;
        }
        c
    }

    /// The quadric behind a message of a degree-2 code.
    pub fn message_quadric(&self, message: &[Elem]) -> QuadraticForm {
        assert_eq!(self.basis.h, 2, "quadrics come from degree-2 codes");
        QuadraticForm::new(self.basis.n, self.message_coeffs(message))
            .expect("degree-2 monomials match the upper triangle")
    }
}

/// Builds `C_h(X)`: rows are evaluations of the monomials independent on `X`.
pub fn build_code(space: &Space, x: &Form, h: u32) -> Result<FunctionalCode> {
    if h == 0 {
        return Err(Error::Unsupported("degree h must be at least 1".into()));
    }
    let field = space.field();
    let pts = variety_points(space, x)?;
    let point_indices: Vec<usize> = pts.iter().collect();
    let points: Vec<Vec<Elem>> = point_indices.iter().map(|&i| space.point(i).to_vec()).collect();
    let basis = MonomialBasis::new(space.dim(), h);
    let rows: Vec<Vec<Elem>> = (0..basis.len())
        .map(|m| points.iter().map(|p| basis.eval(field, m, p)).collect())
        .collect();
    let full = Matrix::from_rows(&rows, points.len());
    let pivots = full.independent_rows(field);
    let generator = Matrix::from_rows(
        &pivots.iter().map(|&m| rows[m].clone()).collect::<Vec<_>>(),
        points.len(),
    );
    Ok(FunctionalCode {
        field: space.field_arc().clone(),
        kernel_dim: basis.len() - pivots.len(),
        basis,
        points,
        point_indices,
        generator,
        pivots,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Mode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Weight distribution of the nonzero codewords.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpectrum {
    pub length: usize,
    pub dimension: usize,
    pub q: u32,
    /// Multiplicities are exact only for exhaustive runs.
    pub exact: bool,
    pub counts: BTreeMap<usize, u64>,
    /// Up to [`REPRESENTATIVE_CAP`] messages per weight, in walk order.
    pub representatives: BTreeMap<usize, Vec<Vec<Elem>>>,
}

impl WeightSpectrum {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn min_distance(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    /// Smallest `count` nonzero weights with their representatives.
    pub fn top_weights(&self, count: usize) -> Vec<(usize, &[Vec<Elem>])> {
        self.counts
            .keys()
            .copied()
            .filter(|&w| w > 0)
            .take(count)
            .map(|w| {
                let reps = self.representatives.get(&w).map(|v| v.as_slice()).unwrap_or(&[]);
                (w, reps)
            })
            .collect()
    }

    pub fn weights(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }
}

/// Exhaustive walks need `q^k` within [`EXHAUSTIVE_CAP`].
pub fn check_exhaustive(q: u32, k: usize) -> Result<()> {
    let size = (q as f64).powi(k as i32);
    if size > EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveCap {
            size,
            cap: EXHAUSTIVE_CAP,
        });
    }
    Ok(())
}

pub fn weight_spectrum(code: &FunctionalCode, mode: Mode) -> Result<WeightSpectrum> {
    match mode {
        Mode::Exhaustive => {
            check_exhaustive(code.field.order(), code.dimension())?;
            Ok(GrayWalk::new(code).run())
        }
        Mode::Sampled { samples, seed } => Ok(sampled_spectrum(code, samples, seed)),
    }
}

pub fn min_distance(code: &FunctionalCode) -> Result<usize> {
    let s = weight_spectrum(code, Mode::Exhaustive)?;
    Ok(s.min_distance().unwrap_or(0))
}

fn sampled_spectrum(code: &FunctionalCode, samples: u64, seed: u64) -> WeightSpectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = code.field.order();
    let k = code.dimension();
    let mut counts = BTreeMap::new();
    let mut reps: BTreeMap<usize, Vec<Vec<Elem>>> = BTreeMap::new();
    let mut drawn = 0;
    while drawn < samples {
        let m: Vec<Elem> = (0..k).map(|_| Elem(rng.gen_range(0..q) as u16)).collect();
        if m.iter().all(|x| x.is_zero()) {
            continue;
        }
        drawn += 1;
        let w = code.weight(&m);
        *counts.entry(w).or_insert(0) += 1;
        let list = reps.entry(w).or_default();
        if list.len() < REPRESENTATIVE_CAP {
            list.push(m);
        }
    }
    WeightSpectrum {
        length: code.length(),
        dimension: k,
        q,
        exact: false,
        counts,
        representatives: reps,
    }
}

/// Per-shard result, merged in shard order.
struct Partial {
    counts: Vec<u64>,
    reps: Vec<Vec<Vec<Elem>>>,
}

impl Partial {
    fn new(len: usize) -> Partial {
        Partial {
            counts: vec![0; len + 1],
            reps: vec![Vec::new(); len + 1],
        }
    }
}

/// Precomputed step codewords for the Gray walk.
struct GrayWalk<'a> {
    code: &'a FunctionalCode,
    p: u64,
    e: usize,
    k: usize,
    /// Coordinates walked inside a shard; the rest are fixed per shard.
    free: usize,
    len: usize,
    /// `u64` words per bit plane (characteristic 2 only).
    words: usize,
    /// Step codeword for each GF(p) digit, packed or as bytes.
    steps: Vec<u64>,
    step_bytes: Vec<u8>,
    add: Vec<u8>,
}

impl<'a> GrayWalk<'a> {
    fn new(code: &'a FunctionalCode) -> GrayWalk<'a> {
        let f = &*code.field;
        let p = f.characteristic() as u64;
        let e = f.degree() as usize;
        let q = f.order() as usize;
        let k = code.dimension();
        let len = code.length();
        let shards_wanted = 8 * rayon::current_num_threads().max(2);
        let mut fixed = 0;
        while fixed + 1 < k && q.pow(fixed as u32) < shards_wanted {
            fixed += 1;
        }
        let free = k - fixed;
        let words = len.div_ceil(64);
        let mut walk = GrayWalk {
            code,
            p,
            e,
            k,
            free,
            len,
            words,
            steps: Vec::new(),
            step_bytes: Vec::new(),
            add: Vec::new(),
        };
        for c in 0..free {
            for s in 0..e {
                let scale = f.additive_basis(s as u32);
                let row: Vec<Elem> = code.generator.row(c).iter().map(|&g| f.mul(scale, g)).collect();
                if p == 2 {
                    let packed = walk.pack(&row);
                    walk.steps.extend(packed);
                } else {
                    walk.step_bytes.extend(row.iter().map(|x| x.0 as u8));
                }
            }
        }
        if p != 2 {
            assert!(q <= 256, "byte symbols need q <= 256");
            walk.add = (0..q * q)
                .map(|i| f.add(Elem((i / q) as u16), Elem((i % q) as u16)).0 as u8)
                .collect();
        }
        walk
    }

    fn pack(&self, cw: &[Elem]) -> Vec<u64> {
        let mut out = vec![0u64; self.e * self.words];
        for (i, x) in cw.iter().enumerate() {
            for b in 0..self.e {
                if x.0 >> b & 1 == 1 {
                    out[b * self.words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        out
    }

    fn shard_prefix(&self, shard: usize) -> Vec<Elem> {
        let q = self.code.field.order() as usize;
        let mut s = shard;
        (self.free..self.k)
            .map(|_| {
                let v = Elem((s % q) as u16);
                s /= q;
                v
            })
            .collect()
    }

    /// Message at walk position `i` of a shard.
    fn decode(&self, i: u64, prefix: &[Elem]) -> Vec<Elem> {
        let m = self.free * self.e;
        let mut d = Vec::with_capacity(m + 1);
        let mut r = i;
        for _ in 0..m {
            d.push(r % self.p);
            r /= self.p;
        }
        d.push(0);
        let mut msg = Vec::with_capacity(self.k);
        for c in 0..self.free {
            let mut v = 0u64;
            for s in (0..self.e).rev() {
                let j = c * self.e + s;
                let g = (d[j] + self.p - d[j + 1]) % self.p;
                v = v * self.p + g;
            }
            msg.push(Elem(v as u16));
        }
        msg.extend_from_slice(prefix);
        msg
    }

    fn run(&self) -> WeightSpectrum {
        let q = self.code.field.order() as usize;
        let shards = q.pow((self.k - self.free) as u32);
        let partials: Vec<Partial> = (0..shards)
            .into_par_iter()
            .map(|s| self.walk_shard(s))
            .collect();
        let mut counts = vec![0u64; self.len + 1];
        let mut reps: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); self.len + 1];
        for part in partials {
            for (w, c) in part.counts.iter().enumerate() {
                counts[w] += c;
            }
            for (w, list) in part.reps.into_iter().enumerate() {
                let room = REPRESENTATIVE_CAP - reps[w].len();
                reps[w].extend(list.into_iter().take(room));
            }
        }
        WeightSpectrum {
            length: self.len,
            dimension: self.k,
            q: q as u32,
            exact: true,
            counts: counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(w, &c)| (w, c))
                .collect(),
            representatives: reps
                .into_iter()
                .enumerate()
                .filter(|(_, r)| !r.is_empty())
                .collect(),
        }
    }

    fn walk_shard(&self, shard: usize) -> Partial {
        let prefix = self.shard_prefix(shard);
        let f = &*self.code.field;
        let mut start = vec![Elem::ZERO; self.len];
        for (c, &a) in prefix.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (x, &g) in start.iter_mut().zip(self.code.generator.row(self.free + c)) {
                *x = f.add(*x, f.mul(a, g));
            }
        }
        let skip_zero = prefix.iter().all(|x| x.is_zero());
        if self.p == 2 {
            let packed = self.pack(&start);
            macro_rules! dispatch {
                ($($l:literal)*) => {
                    match packed.len() {
                        $($l => self.walk_char2::<$l>(&packed, &prefix, skip_zero),)*
                        _ => self.walk_char2_dyn(&packed, &prefix, skip_zero),
                    }
                };
            }
            dispatch!(1 2 3 4 5 6 7 8 9 10 11 12)
        } else {
            self.walk_bytes(&start, &prefix, skip_zero)
        }
    }

    #[inline]
    fn record(&self, part: &mut Partial, w: usize, i: u64, prefix: &[Elem]) {
        part.counts[w] += 1;
        if part.reps[w].len() < REPRESENTATIVE_CAP {
            part.reps[w].push(self.decode(i, prefix));
        }
    }

    fn walk_char2<const L: usize>(&self, start: &[u64], prefix: &[Elem], skip_zero: bool) -> Partial {
        let mut part = Partial::new(self.len);
        let mut cw = [0u64; L];
        cw.copy_from_slice(start);
        let steps: Vec<[u64; L]> = self
            .steps
            .chunks_exact(L)
            .map(|c| c.try_into().expect("chunk of L words"))
            .collect();
        let (e, words) = (self.e, self.words);
        let weight = |cw: &[u64; L]| -> usize {
            (0..words)
                .map(|w| {
                    let mut acc = 0u64;
                    for b in 0..e {
                        acc |= cw[b * words + w];
                    }
                    acc.count_ones() as usize
                })
                .sum()
        };
        if !skip_zero {
            self.record(&mut part, weight(&cw), 0, prefix);
        }
        let total = 1u64 << (self.free * e);
        for i in 1..total {
            let step = &steps[i.trailing_zeros() as usize];
            for w in 0..L {
                cw[w] ^= step[w];
            }
            let wt = weight(&cw);
            part.counts[wt] += 1;
            if part.reps[wt].len() < REPRESENTATIVE_CAP {
                part.reps[wt].push(self.decode(i, prefix));
            }
        }
        part
    }

    fn walk_char2_dyn(&self, start: &[u64], prefix: &[Elem], skip_zero: bool) -> Partial {
        let mut part = Partial::new(self.len);
        let l = start.len();
        let mut cw = start.to_vec();
        let weight = |cw: &[u64]| -> usize {
            (0..self.words)
                .map(|w| {
                    (0..self.e)
                        .fold(0u64, |acc, b| acc | cw[b * self.words + w])
                        .count_ones() as usize
                })
                .sum()
        };
        if !skip_zero {
            self.record(&mut part, weight(&cw), 0, prefix);
        }
        let total = 1u64 << (self.free * self.e);
        for i in 1..total {
            let j = i.trailing_zeros() as usize;
            for (x, &s) in cw.iter_mut().zip(&self.steps[j * l..(j + 1) * l]) {
                *x ^= s;
            }
            let wt = weight(&cw);
            self.record(&mut part, wt, i, prefix);
        }
        part
    }

    fn walk_bytes(&self, start: &[Elem], prefix: &[Elem], skip_zero: bool) -> Partial {
        let mut part = Partial::new(self.len);
        let q = self.code.field.order() as usize;
        let mut cw: Vec<u8> = start.iter().map(|x| x.0 as u8).collect();
        let weight = |cw: &[u8]| cw.iter().filter(|&&x| x != 0).count();
        if !skip_zero {
            self.record(&mut part, weight(&cw), 0, prefix);
        }
        let total = self.p.pow((self.free * self.e) as u32);
        let len = self.len;
        for i in 1..total {
            let mut j = 0usize;
            let mut r = i;
            while r % self.p == 0 {
                r /= self.p;
                j += 1;
            }
            let step = &self.step_bytes[j * len..(j + 1) * len];
            let mut nonzero = 0usize;
            for (x, &s) in cw.iter_mut().zip(step) {
                *x = self.add[*x as usize * q + s as usize];
                nonzero += (*x != 0) as usize;
            }
            self.record(&mut part, nonzero, i, prefix);
        }
        part
    }
}

/// `h q^(m-1) + pi_(m-2)`: the largest number of zeros in PG(m, q) of a
/// nonzero form of degree `h <= q`.
pub fn serre_sorensen_bound(h: u32, m: u32, q: u32) -> Result<u64> {
    if h > q {
        return Err(Error::DegreeAboveOrder { h, q });
    }
    let q = q as u64;
    Ok(h as u64 * q.pow(m - 1) + pi(m as i64 - 2, q))
}
