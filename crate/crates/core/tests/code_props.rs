mod common;

use std::collections::BTreeMap;

use common::*;
use hermcodes::codes::{build_code, weight_spectrum, FunctionalCode, Mode};
use hermcodes::experiments::load_variety;
use hermcodes::intersect::{max_intersection_scan, ScanOptions};
use hermcodes::Elem;
use proptest::prelude::*;

const SMALL: &[(&str, u32)] = &[
    ("conic2", 2),
    ("conic2", 3),
    ("conic2", 5),
    ("cone3", 2),
    ("elliptic3", 2),
    ("hyperbolic3", 2),
    ("hermitian2", 4),
];

fn code(name: &str, q: u32) -> FunctionalCode {
    let (space, v) = load_variety(name, q).unwrap();
    build_code(&space, v.form().unwrap(), 2).unwrap()
}

/// Every message in lexicographic order, encoded with the generator matrix.
fn brute_spectrum(c: &FunctionalCode) -> BTreeMap<usize, u64> {
    let q = c.field().order() as u64;
    let k = c.dimension();
    let mut out = BTreeMap::new();
    for code in 1..q.pow(k as u32) {
        let mut x = code;
        let m: Vec<Elem> = (0..k)
            .map(|_| {
                let e = Elem((x % q) as u16);
                x /= q;
                e
            })
            .collect();
        *out.entry(c.weight(&m)).or_insert(0) += 1;
    }
    out
}

#[test]
fn gray_walk_matches_direct_enumeration() {
    for &(name, q) in SMALL {
        let c = code(name, q);
        let s = weight_spectrum(&c, Mode::Exhaustive).unwrap();
        assert!(s.exact);
        assert_eq!(s.counts, brute_spectrum(&c), "{name} q={q}");
        let total = (q as u64).pow(c.dimension() as u32) - 1;
        assert_eq!(s.total(), total);
        for (&w, &n) in &s.counts {
            assert!(w > 0, "{name}: nonzero message with weight 0");
            assert_eq!(n % (q as u64 - 1), 0, "{name} q={q} weight {w}");
        }
        for (&w, reps) in &s.representatives {
            for m in reps {
                assert_eq!(c.weight(m), w);
            }
        }
    }
}

#[test]
fn sampled_weights_are_real_weights() {
    for &(name, q) in SMALL {
        let c = code(name, q);
        let exact = weight_spectrum(&c, Mode::Exhaustive).unwrap();
        let mode = Mode::Sampled { samples: 2000, seed: 7 };
        let a = weight_spectrum(&c, mode).unwrap();
        let b = weight_spectrum(&c, mode).unwrap();
        assert_eq!(a, b, "sampling is deterministic for a seed");
        assert!(!a.exact);
        for w in a.weights() {
            assert!(exact.counts.contains_key(&w), "{name} q={q}: sampled weight {w}");
        }
    }
}

#[test]
fn minimum_distance_is_dual_to_the_largest_proper_section() {
    for &(name, q) in &[("conic2", 3), ("cone3", 2), ("cone3", 3), ("elliptic3", 3), ("hyperbolic3", 3)] {
        let (space, v) = load_variety(name, q).unwrap();
        let x = v.form().unwrap();
        let c = build_code(&space, x, 2).unwrap();
        let d = weight_spectrum(&c, Mode::Exhaustive).unwrap().min_distance().unwrap();
        let scan = max_intersection_scan(&space, x, Mode::Exhaustive, &ScanOptions::default()).unwrap();
        assert_eq!(d, c.length() - scan.max_proper.unwrap(), "{name} q={q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn encoding_is_linear(idx in 0..SMALL.len(), seed in any::<u64>()) {
        let (name, q) = SMALL[idx];
        let c = code(name, q);
        let f = c.field();
        let mut r = rng(seed);
        let k = c.dimension();
        let a: Vec<Elem> = (0..k).map(|_| elem(&mut r, f)).collect();
        let b: Vec<Elem> = (0..k).map(|_| elem(&mut r, f)).collect();
        let l = elem(&mut r, f);
        let comb: Vec<Elem> = a.iter().zip(&b).map(|(&x, &y)| f.add(f.mul(l, x), y)).collect();
        let lhs = c.encode(&comb);
        let rhs: Vec<Elem> = c.encode(&a).iter().zip(c.encode(&b)).map(|(&x, y)| f.add(f.mul(l, x), y)).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn codeword_is_the_message_quadric_on_the_points(idx in 0..SMALL.len(), seed in any::<u64>()) {
        let (name, q) = SMALL[idx];
        let c = code(name, q);
        let f = c.field();
        let mut r = rng(seed);
        let m: Vec<Elem> = (0..c.dimension()).map(|_| elem(&mut r, f)).collect();
        let g = c.message_quadric(&m);
        let values: Vec<Elem> = c.points().iter().map(|p| g.eval(f, p)).collect();
        prop_assert_eq!(c.encode(&m), values);
    }
}
