//! Quadrics that split into two hyperplanes, and the conjectures about them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::codes::WeightSpectrum;
use crate::error::{Error, Result};
use crate::geometry::{hermitian_weight, Claim, ConfigContext};
use crate::gf::Elem;
use crate::proj::{Flat, PointSet};

/// Every hyperplane with its section of `X`.
pub struct HyperplaneTable {
    pub covectors: Vec<Vec<Elem>>,
    pub flats: Vec<Flat>,
    /// `X ∩ H`, as a subset of the ambient points.
    pub sections: Vec<PointSet>,
    /// Whether `X ∩ H` is degenerate in the coordinates of `H`.
    pub tangent: Vec<bool>,
}

impl HyperplaneTable {
    pub fn new(ctx: &ConfigContext<'_>) -> Result<HyperplaneTable> {
        let space = ctx.space();
        let field = space.field();
        let xs: Vec<usize> = ctx.variety_points().iter().collect();
        let mut table = HyperplaneTable {
            covectors: Vec::new(),
            flats: Vec::new(),
            sections: Vec::new(),
            tangent: Vec::new(),
        };
        for a in space.points() {
            let h = Flat::hyperplane(space, a)?;
            let sec = ctx.variety().restrict(field, h.basis());
            table
                .tangent
                .push(sec.is_zero() || sec.rank(field) < space.dim());
            table.sections.push(PointSet::from_indices(
                space.num_points(),
                xs.iter().copied().filter(|&i| field.dot(a, space.point(i)).is_zero()),
            ));
            table.covectors.push(a.to_vec());
            table.flats.push(h);
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }
}

/// One pair of distinct hyperplanes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairInfo {
    pub first: usize,
    pub second: usize,
    pub weight: usize,
    pub tangent: usize,
    /// Rank of `X` on `H1 ∩ H2`; `None` when that flat lies in `X`.
    pub section_rank: Option<usize>,
}

impl PairInfo {
    pub fn config_key(&self) -> String {
        match self.section_rank {
            Some(r) => format!("{} tangent, section rank {r}", self.tangent),
            None => format!("{} tangent, section contained", self.tangent),
        }
    }
}

/// Weight and configuration of the codeword of `l_i l_j`.
pub fn pair_info(ctx: &ConfigContext<'_>, table: &HyperplaneTable, i: usize, j: usize) -> PairInfo {
    let space = ctx.space();
    let field = space.field();
    let (a, b) = (&table.covectors[i], &table.covectors[j]);
    // direct count of X ∩ (H_i ∪ H_j)
    let zeros = ctx
        .variety_points()
        .iter()
        .filter(|&p| {
            let x = space.point(p);
            field.dot(a, x).is_zero() || field.dot(b, x).is_zero()
        })
        .count();
    let plane = table.flats[i].intersect(space, &table.flats[j]);
    let sec = ctx.variety().restrict(field, plane.basis());
    PairInfo {
        first: i,
        second: j,
        weight: ctx.variety_points().len() - zeros,
        tangent: table.tangent[i] as usize + table.tangent[j] as usize,
        section_rank: (!sec.is_zero()).then(|| sec.rank(field)),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WeightPairs {
    pub pairs: u64,
    pub configs: BTreeMap<String, u64>,
}

/// All unordered pairs of distinct hyperplanes, grouped by codeword weight.
#[derive(Clone, Debug, Serialize)]
pub struct PairCensus {
    pub length: usize,
    pub hyperplanes: usize,
    pub pairs: u64,
    pub by_weight: BTreeMap<usize, WeightPairs>,
}

pub fn pair_census(ctx: &ConfigContext<'_>, table: &HyperplaneTable) -> PairCensus {
    let mut by_weight: BTreeMap<usize, WeightPairs> = BTreeMap::new();
    let mut pairs = 0;
    for i in 0..table.len() {
        for j in i + 1..table.len() {
            let info = pair_info(ctx, table, i, j);
            let e = by_weight.entry(info.weight).or_default();
            e.pairs += 1;
            *e.configs.entry(info.config_key()).or_insert(0) += 1;
            pairs += 1;
        }
    }
    PairCensus {
        length: ctx.variety_points().len(),
        hyperplanes: table.len(),
        pairs,
        by_weight,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub name: String,
    pub parameters: String,
    pub consistent: bool,
    pub details: Vec<String>,
}

impl ConjectureReport {
    pub fn verdict(&self) -> &'static str {
        if self.consistent {
            "CONSISTENT"
        } else {
            "VIOLATED"
        }
    }
}

/// Bound `h (t^5 + t^2) + t^3 + 1` on the zeros of a degree-`h` form on the
/// non-singular hermitian variety of PG(4, t^2).
pub fn conjecture1_bound(t: u64, h: u64) -> u64 {
    h * (t.pow(5) + t * t) + t.pow(3) + 1
}

/// Compares the largest number of zeros of a degree-`h` form on `X` with the
/// conjectured bound. `h = 1` is decided from the hyperplane sections; larger
/// `h` needs the exact spectrum of `C_h(X)`.
pub fn conjecture1(
    ctx: &ConfigContext<'_>,
    table: &HyperplaneTable,
    h: u32,
    spectrum: Option<&WeightSpectrum>,
) -> Result<ConjectureReport> {
    let t = ctx
        .space()
        .field()
        .sqrt_order()
        .ok_or_else(|| Error::Unsupported("needs a field of square order".into()))? as u64;
    if h as u64 > t {
        return Err(Error::DegreeAboveOrder {
            h,
            q: t as u32,
        });
    }
    let n = ctx.variety_points().len();
    let max = if h == 1 {
        table.sections.iter().map(PointSet::len).max().unwrap_or(0)
    } else {
        let sp = spectrum
            .filter(|s| s.exact)
            .ok_or_else(|| Error::Unsupported("degree h > 1 needs an exact spectrum".into()))?;
        n - sp.min_distance().unwrap_or(n)
    };
    let bound = conjecture1_bound(t, h as u64);
    Ok(ConjectureReport {
        name: "conjecture 1".into(),
        parameters: format!("t={t}, h={h}"),
        consistent: max as u64 <= bound,
        details: vec![
            format!("max zeros on X = {max}, bound = {bound}"),
            format!("bound attained: {}", max as u64 == bound),
        ],
    })
}

/// The conjecture on the first five weights of `C_2(X)` for the non-singular
/// hermitian variety of PG(N, t^2).
pub fn conjecture2(
    ctx: &ConfigContext<'_>,
    census: &PairCensus,
    spectrum: &WeightSpectrum,
) -> Result<ConjectureReport> {
    let n_dim = ctx.space().dim();
    let q = ctx.space().q() as u64;
    if !spectrum.exact {
        return Err(Error::Unsupported("needs an exact spectrum".into()));
    }
    let first: Vec<usize> = spectrum.weights().into_iter().take(5).collect();
    let mut details = vec![format!("first five weights: {first:?}")];
    let mut ok = true;
    for &w in &first {
        let pairs = census.by_weight.get(&w).map_or(0, |e| e.pairs);
        details.push(format!("weight {w}: {pairs} hyperplane pairs"));
        ok &= pairs > 0;
    }
    let w1 = first[0];
    let min_pairs = census.by_weight.get(&w1).cloned().unwrap_or_default();
    let codewords = spectrum.counts[&w1];
    details.push(format!(
        "minimum weight: {codewords} codewords, {} from pairs",
        (q - 1) * min_pairs.pairs
    ));
    ok &= codewords == (q - 1) * min_pairs.pairs;
    let want_tangent = if n_dim % 2 == 1 { 2 } else { 0 };
    let want = format!("{want_tangent} tangent, section rank {}", n_dim - 1);
    for (k, c) in &min_pairs.configs {
        details.push(format!("minimum-weight pairs: {c} with {k}"));
        ok &= *k == want;
    }
    let beyond: Vec<usize> = census
        .by_weight
        .keys()
        .copied()
        .filter(|w| !first.contains(w))
        .collect();
    details.push(format!("pair weights outside the first five: {beyond:?}"));
    ok &= beyond.is_empty();
    Ok(ConjectureReport {
        name: "conjecture 2".into(),
        parameters: format!("N={n_dim}, q={q}"),
        consistent: ok,
        details,
    })
}

/// Weights produced by one hyperplane-pair configuration.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructiveCheck {
    pub claim: Claim,
    pub expected: u64,
    pub pairs: usize,
    pub weights: BTreeSet<usize>,
}

impl ConstructiveCheck {
    pub fn passed(&self) -> bool {
        self.pairs > 0 && self.weights.len() == 1 && self.weights.contains(&(self.expected as usize))
    }
}

/// Builds each hyperplane-pair configuration of the first five weights on the
/// non-singular hermitian variety of PG(4, t^2) and counts its points directly.
/// The first hyperplane is fixed, once non-tangent and once tangent; the second
/// ranges over all hyperplanes, so every pair is covered up to the unitary group.
pub fn constructive_hermitian_pairs(
    ctx: &ConfigContext<'_>,
    table: &HyperplaneTable,
) -> Result<Vec<ConstructiveCheck>> {
    let t = ctx
        .space()
        .field()
        .sqrt_order()
        .ok_or_else(|| Error::Unsupported("needs a field of square order".into()))? as u64;
    let first_with = |tangent: bool| {
        table
            .tangent
            .iter()
            .position(|&x| x == tangent)
            .ok_or_else(|| Error::Unsupported("no hyperplane of the required kind".into()))
    };
    let starts = [first_with(false)?, first_with(true)?];
    let claims: [(Claim, usize, fn(usize, Option<usize>) -> bool); 6] = [
        (Claim::HermitianFirst, 1, |nt, r| nt == 0 && r == Some(3)),
        (Claim::HermitianSecond, 2, |nt, r| nt == 0 && r == Some(2)),
        (Claim::HermitianThird, 3, |nt, r| nt == 1 && r == Some(3)),
        (Claim::HermitianFourth, 4, |nt, r| nt == 1 && matches!(r, Some(1 | 2))),
        (Claim::HermitianFourth, 4, |nt, r| nt == 2 && r == Some(1)),
        (Claim::HermitianFifth, 5, |nt, r| nt == 2 && r == Some(3)),
    ];
    let mut checks: Vec<ConstructiveCheck> = claims
        .iter()
        .map(|&(claim, i, _)| ConstructiveCheck {
            claim,
            expected: hermitian_weight(t, i).expect("five weights"),
            pairs: 0,
            weights: BTreeSet::new(),
        })
        .collect();
    for &h1 in &starts {
        for h2 in (0..table.len()).filter(|&j| j != h1) {
            let info = pair_info(ctx, table, h1, h2);
            for (check, (_, _, pred)) in checks.iter_mut().zip(&claims) {
                if pred(info.tangent, info.section_rank) {
                    check.pairs += 1;
                    check.weights.insert(info.weight);
                }
            }
        }
    }
    Ok(checks)
}
