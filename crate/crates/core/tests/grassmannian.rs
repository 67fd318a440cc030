use proptest::prelude::*;
use qtangle::grasscoh::{
    build_cohomology, divided_difference_y, nilhecke_check, wolffhardt_complex, NilHeckeOp, SymPoly,
};
use qtangle::qseries::rat;
use qtangle::Rational;

// Number of partitions of `w` fitting in a `k` by `m` box.
fn box_partitions(k: usize, m: u32, w: u32) -> usize {
    if w == 0 {
        return 1;
    }
    if k == 0 || m == 0 {
        return 0;
    }
    // largest part at most m: either no part equals m, or remove one part m
    let without_m = box_partitions(k, m - 1, w);
    let with_m = if w >= m {
        box_partitions(k - 1, m, w - m)
    } else {
        0
    };
    without_m + with_m
}

#[test]
fn cohomology_ranks_count_partitions_in_a_box() {
    for (k, n) in [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (1, 5)] {
        let h = build_cohomology(k, n).unwrap();
        let m = (n - k) as u32;
        let expected: Vec<usize> = (0..=k as u32 * m)
            .map(|w| box_partitions(k, m, w))
            .collect();
        assert_eq!(h.graded_dims(), expected, "Gr({k},{n})");
        assert_eq!(h.dim(), expected.iter().sum::<usize>());
    }
}

#[test]
fn small_grassmannian_resolutions() {
    for (k, n) in [(1, 2), (1, 3)] {
        let c = wolffhardt_complex(k, n, -6).unwrap();
        let r = c.check_resolution();
        assert!(
            r.d_squared_zero && r.acyclic_below_zero && r.degree_zero_matches,
            "{:?}",
            r.failures
        );
    }
    let r = wolffhardt_complex(2, 4, -3).unwrap().check_resolution();
    assert!(r.d_squared_zero, "{:?}", r.failures);
}

#[test]
fn nil_hecke_relations_through_degree_eight() {
    for n in 1..=3 {
        let r = nilhecke_check(n, 8);
        assert!(r.ok(), "{r:?}");
    }
}

fn eval(f: &SymPoly, point: &[i64]) -> Rational {
    f.terms()
        .map(|(m, c)| {
            let v: i64 = m.iter().zip(point).map(|(&e, &x)| x.pow(e)).product();
            c * rat(v)
        })
        .sum()
}

fn polynomial(n: usize) -> impl Strategy<Value = SymPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=4, n), -3i64..=3), 1..6).prop_map(|terms| {
        let mut f = SymPoly::zero();
        for (m, c) in terms {
            f.add_term(m, rat(c));
        }
        f
    })
}

proptest! {
    #[test]
    fn divided_difference_matches_pointwise_quotient(
        f in polynomial(3),
        i in 1usize..=2,
        point in prop::collection::vec(-5i64..=5, 3),
    ) {
        prop_assume!(point[i - 1] != point[i]);
        let mut swapped = point.clone();
        swapped.swap(i - 1, i);
        let expected = (eval(&f, &point) - eval(&f, &swapped)) / rat(point[i - 1] - point[i]);
        prop_assert_eq!(eval(&divided_difference_y(i, &f), &point), expected);
    }

    #[test]
    fn divided_difference_squares_to_zero(f in polynomial(3), i in 1usize..=2) {
        prop_assert!(divided_difference_y(i, &divided_difference_y(i, &f)).is_zero());
    }

    #[test]
    fn leibniz_rule(f in polynomial(2), g in polynomial(2)) {
        // ψ(fg) = ψ(f) g + (s f) ψ(g)
        let s = |p: &SymPoly| {
            let mut out = SymPoly::zero();
            for (m, c) in p.terms() {
                out.add_term(vec![m[1], m[0]], c.clone());
            }
            out
        };
        let lhs = divided_difference_y(1, &(&f * &g));
        let rhs = &(&divided_difference_y(1, &f) * &g) + &(&s(&f) * &divided_difference_y(1, &g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn epsilon_is_idempotent_on_samples(f in polynomial(3)) {
        let e = NilHeckeOp::epsilon_w0(3);
        let once = e.apply(&f);
        prop_assert_eq!(e.apply(&once), once);
    }
}
