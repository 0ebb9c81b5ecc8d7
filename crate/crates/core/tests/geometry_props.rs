mod common;

use common::*;
use hermcodes::forms::{classify, section, singular_flat, vertex, Form, QuadraticForm};
use hermcodes::intersect::{
    cone_lift_count, equal_section_hyperplanes, intersection_count, pair_order, proportional,
};
use hermcodes::{Elem, Flat};
use proptest::prelude::*;
use rand::Rng;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn quadric_class_is_invariant_under_coordinate_change(
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        n in 2usize..=4,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let s = space(n, q);
        let f = s.field().clone();
        let g = random_quadric(&mut r, &f, n);
        let a = random_invertible(&mut r, &f, n + 1);
        let h = transform_quadric(&f, &g, &a);
        let (fg, fh) = (Form::Quadric(g), Form::Quadric(h));
        let (cg, ch) = (classify(&s, &fg).unwrap(), classify(&s, &fh).unwrap());
        prop_assert_eq!(&cg, &ch);
        prop_assert_eq!(cg.predicted_points, count_zeros(&s, &fg) as u64);
        prop_assert_eq!(count_zeros(&s, &fg), count_zeros(&s, &fh));
    }

    #[test]
    fn hermitian_class_is_invariant_under_coordinate_change(
        q in prop::sample::select(vec![4u32, 9]),
        n in 2usize..=3,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let s = space(n, q);
        let f = s.field().clone();
        let g = random_hermitian(&mut r, &f, n);
        let a = random_invertible(&mut r, &f, n + 1);
        let h = transform_hermitian(&f, &g, &a);
        let (fg, fh) = (Form::Hermitian(g), Form::Hermitian(h));
        let (cg, ch) = (classify(&s, &fg).unwrap(), classify(&s, &fh).unwrap());
        prop_assert_eq!(&cg, &ch);
        prop_assert_eq!(cg.predicted_points, count_zeros(&s, &fg) as u64);
    }

    #[test]
    fn vertex_matches_singular_space(
        q in prop::sample::select(vec![2u32, 3, 4]),
        seed in any::<u64>(),
    ) {
        // Low-rank forms have a visible vertex; build them from a representative.
        let mut r = rng(seed);
        let s = space(3, q);
        let f = s.field().clone();
        let reps = [
            quadric(&f, 3, &[(0, 0, 1)]),
            quadric(&f, 3, &[(0, 1, 1)]),
            quadric(&f, 3, &[(0, 1, 1), (2, 2, 1)]),
            quadric(&f, 3, &[(0, 1, 1), (2, 3, 1)]),
        ];
        let rep = &reps[r.gen_range(0..reps.len())];
        let g = Form::Quadric(transform_quadric(&f, rep, &random_invertible(&mut r, &f, 4)));
        let v = vertex(&s, &g).unwrap();
        let sf = singular_flat(&s, &g);
        prop_assert_eq!(v.points(&s), sf.points(&s));
        prop_assert_eq!(v.dim() as isize, 3 - g.rank(&f) as isize);
    }

    #[test]
    fn sections_drop_rank_by_at_most_two(
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        n in 2usize..=4,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let s = space(n, q);
        let f = s.field().clone();
        let x = Form::Quadric(random_quadric(&mut r, &f, n));
        let a: Vec<Elem> = loop {
            let v: Vec<Elem> = (0..=n).map(|_| elem(&mut r, &f)).collect();
            if v.iter().any(|e| !e.is_zero()) {
                break v;
            }
        };
        let h = Flat::hyperplane(&s, &a).unwrap();
        let sec = section(&s, &x, &h);
        let rs = if sec.is_zero() { 0 } else { sec.rank(&f) };
        let rx = x.rank(&f);
        prop_assert!(rs <= rx && rs + 2 >= rx);
        let on_h = h.point_indices(&s).iter().filter(|&&i| x.eval(&f, s.point(i)).is_zero()).count();
        let sub = space(n - 1, q);
        prop_assert_eq!(on_h, count_zeros(&sub, &sec));
    }

    #[test]
    fn intersection_count_matches_pointwise_count(
        q in prop::sample::select(vec![2u32, 3, 4]),
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let s = space(4, q);
        let f = s.field().clone();
        let a = Form::Quadric(random_quadric(&mut r, &f, 4));
        let b = Form::Quadric(random_quadric(&mut r, &f, 4));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let rep = intersection_count(&s, &a, &b).unwrap();
        let direct = s.points().filter(|p| a.eval(&f, p).is_zero() && b.eval(&f, p).is_zero()).count();
        prop_assert_eq!(rep.count, direct);
        prop_assert!(rep.order_w >= a.rank(&f).max(b.rank(&f)));
        if rep.order_w == 5 {
            let qq = q as usize;
            prop_assert!(direct <= 3 * qq * qq + qq + 1);
        }
    }

    #[test]
    fn cone_lift_from_three_variables(
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        n in 3usize..=4,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let plane = space(2, q);
        let s = space(n, q);
        let f = s.field().clone();
        let a = random_quadric(&mut r, &f, 2);
        let b = random_quadric(&mut r, &f, 2);
        let m0 = plane
            .points()
            .filter(|p| a.eval(&f, p).is_zero() && b.eval(&f, p).is_zero())
            .count() as u64;
        let embed = |g: &QuadraticForm| {
            let mut t = Vec::new();
            for i in 0..3 {
                for j in i..3 {
                    t.push((i, j, g.coeff(i, j)));
                }
            }
            QuadraticForm::from_terms(&f, n, &t)
        };
        let m = random_invertible(&mut r, &f, n + 1);
        let ea = Form::Quadric(transform_quadric(&f, &embed(&a), &m));
        let eb = Form::Quadric(transform_quadric(&f, &embed(&b), &m));
        let direct = s.points().filter(|p| ea.eval(&f, p).is_zero() && eb.eval(&f, p).is_zero()).count() as u64;
        prop_assert_eq!(direct, cone_lift_count(m0, (n - 2) as u32, q as u64));
        prop_assert!(pair_order(&f, &ea, &eb) <= 3);
    }

    #[test]
    fn at_most_two_hyperplanes_share_a_section(
        q in prop::sample::select(vec![2u32, 3, 4, 5]),
        n in 3usize..=4,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let s = space(n, q);
        let f = s.field().clone();
        let x = random_quadric(&mut r, &f, n);
        prop_assume!(Form::Quadric(x.clone()).rank(&f) == n + 1);
        let basis: Vec<Vec<Elem>> = (0..n - 1).map(|_| (0..=n).map(|_| elem(&mut r, &f)).collect()).collect();
        let Ok(k) = Flat::new(&s, &basis) else { return Ok(()) };
        let eqs = k.equations(&s);
        // X + l1 l2 agrees with X exactly on the two hyperplanes l1 = 0 and l2 = 0.
        let c = QuadraticForm::product(&f, &eqs[0], &eqs[1]);
        let y: Vec<Elem> = x.coeffs().iter().zip(c.coeffs()).map(|(&u, &v)| f.add(u, v)).collect();
        let y = QuadraticForm::new(n, y).unwrap();
        let (fx, fy) = (Form::Quadric(x.clone()), Form::Quadric(y));
        if fy.rank(&f) == n + 1 {
            let (_, forms) = equal_section_hyperplanes(&s, &fx, &fy, &k).unwrap();
            prop_assert_eq!(forms, 2);
        }
        let z = random_quadric(&mut r, &f, n);
        let fz = Form::Quadric(z.clone());
        if fz.rank(&f) == n + 1 && !proportional(&f, x.coeffs(), z.coeffs()) {
            let (_, forms) = equal_section_hyperplanes(&s, &fx, &fz, &k).unwrap();
            prop_assert!(forms <= 2);
        }
    }
}

#[test]
fn order_is_invariant_under_a_common_change_of_coordinates() {
    let mut r = rng(11);
    for q in [2u32, 3, 5] {
        let s = space(4, q);
        let f = s.field().clone();
        for _ in 0..200 {
            let a = random_quadric(&mut r, &f, 4);
            let b = random_quadric(&mut r, &f, 4);
            let m = random_invertible(&mut r, &f, 5);
            let w = pair_order(&f, &Form::Quadric(a.clone()), &Form::Quadric(b.clone()));
            let wt = pair_order(
                &f,
                &Form::Quadric(transform_quadric(&f, &a, &m)),
                &Form::Quadric(transform_quadric(&f, &b, &m)),
            );
            assert_eq!(w, wt);
        }
    }
}
