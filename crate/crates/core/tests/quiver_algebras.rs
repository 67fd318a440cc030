use std::collections::{BTreeMap, HashMap};

use qtangle::quiverkat::{
    build_algebra, data, ext_self_l1, gamma_algebra, gl2_algebra, gl3_algebra,
    poincare_matches_closed_form, GradedQuotientAlgebra, Quiver,
};

type Perm = [u8; 4];
type Poly = BTreeMap<i64, i64>;

fn length(w: &Perm) -> usize {
    (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter(|&(i, j)| w[i] > w[j])
        .count()
}

fn times_s(w: &Perm, i: usize) -> Perm {
    let mut v = *w;
    v.swap(i, i + 1);
    v
}

fn bruhat_leq(x: &Perm, y: &Perm) -> bool {
    (1..4).all(|k| {
        let mut a = x[..k].to_vec();
        let mut b = y[..k].to_vec();
        a.sort();
        b.sort();
        a.iter().zip(&b).all(|(p, q)| p <= q)
    })
}

fn all_perms() -> Vec<Perm> {
    let mut out = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..4).filter(|&j| p[j] == i as u8).count() == 1) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn add_into(acc: &mut Poly, p: &Poly, coeff: i64, shift: i64) {
    for (&e, &c) in p {
        *acc.entry(e + shift).or_default() += coeff * c;
    }
    acc.retain(|_, c| *c != 0);
}

// Kazhdan–Lusztig polynomials of S_4 through the standard recursion.
struct Kl {
    perms: Vec<Perm>,
    memo: HashMap<(Perm, Perm), Poly>,
}

impl Kl {
    fn p(&mut self, x: Perm, w: Perm) -> Poly {
        if let Some(p) = self.memo.get(&(x, w)) {
            return p.clone();
        }
        let r = if !bruhat_leq(&x, &w) {
            Poly::new()
        } else if x == w {
            Poly::from([(0, 1)])
        } else {
            let i = (0..3)
                .find(|&i| length(&times_s(&w, i)) < length(&w))
                .unwrap();
            let v = times_s(&w, i);
            let xs = times_s(&x, i);
            let c = i64::from(length(&xs) < length(&x));
            let mut r = Poly::new();
            add_into(&mut r, &self.p(xs, v), 1, 1 - c);
            add_into(&mut r, &self.p(x, v), 1, c);
            for z in self.perms.clone() {
                if z == v || length(&times_s(&z, i)) > length(&z) || !bruhat_leq(&z, &v) {
                    continue;
                }
                let d = length(&v) as i64 - length(&z) as i64;
                if d % 2 == 0 {
                    continue;
                }
                let mu = self.p(z, v).get(&((d - 1) / 2)).copied().unwrap_or(0);
                if mu != 0 {
                    let pxz = self.p(x, z);
                    add_into(
                        &mut r,
                        &pxz,
                        -mu,
                        (length(&w) as i64 - length(&z) as i64) / 2,
                    );
                }
            }
            r
        };
        self.memo.insert((x, w), r.clone());
        r
    }

    // Graded multiplicity t^{l(y)-l(x)} P_{x,y}(t^{-2}).
    fn multiplicity(&mut self, x: Perm, y: Perm) -> Poly {
        let base = length(&y) as i64 - length(&x) as i64;
        self.p(x, y)
            .into_iter()
            .map(|(e, c)| (base - 2 * e, c))
            .collect()
    }
}

fn mul_poly(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&i, &x) in a {
        for (&j, &y) in b {
            *out.entry(i + j).or_default() += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

const VERTEX_PERMS: [(u8, Perm); 6] = [
    (1, [1, 0, 3, 2]),
    (2, [2, 0, 3, 1]),
    (3, [3, 0, 2, 1]),
    (4, [2, 1, 3, 0]),
    (5, [3, 1, 2, 0]),
    (6, [3, 2, 1, 0]),
];

fn pair_dims(alg: &GradedQuotientAlgebra, a: u8, b: u8) -> Poly {
    let mut out = Poly::new();
    for i in 0..alg.dim() {
        if alg.start(i) == a && alg.end(i) == b {
            *out.entry(alg.degree(i) as i64).or_default() += 1;
        }
    }
    out
}

#[test]
fn gamma_algebra_matches_kazhdan_lusztig_prediction() {
    let perms = all_perms();
    // longest representatives of S_4 / <s_1, s_3>
    for (_, w) in VERTEX_PERMS {
        assert!(length(&times_s(&w, 0)) < length(&w) && length(&times_s(&w, 2)) < length(&w));
    }
    let mut kl = Kl {
        perms,
        memo: HashMap::new(),
    };
    let alg = gamma_algebra().unwrap();
    let mut total = 0;
    for (a, wa) in VERTEX_PERMS {
        for (b, wb) in VERTEX_PERMS {
            let mut expected = Poly::new();
            for (_, z) in VERTEX_PERMS {
                let m = mul_poly(&kl.multiplicity(z, wa), &kl.multiplicity(z, wb));
                add_into(&mut expected, &m, 1, 0);
            }
            assert_eq!(pair_dims(&alg, a, b), expected, "e_{a} A e_{b}");
            total += expected.values().sum::<i64>();
        }
    }
    assert_eq!(total, 97);
    assert_eq!(alg.graded_dims(), vec![6, 14, 21, 20, 17, 10, 6, 2, 1]);
}

#[test]
fn kazhdan_lusztig_oracle_sanity() {
    let mut kl = Kl {
        perms: all_perms(),
        memo: HashMap::new(),
    };
    // the two singular Schubert varieties of S_4, and a smooth one
    assert_eq!(kl.p([0, 1, 2, 3], [1, 3, 0, 2]), Poly::from([(0, 1)]));
    assert_eq!(
        kl.p([0, 1, 2, 3], [2, 3, 0, 1]),
        Poly::from([(0, 1), (1, 1)])
    );
    assert_eq!(
        kl.p([0, 1, 2, 3], [3, 1, 2, 0]),
        Poly::from([(0, 1), (1, 1)])
    );
    assert_eq!(kl.p([0, 1, 2, 3], [3, 2, 1, 0]), Poly::from([(0, 1)]));
}

#[test]
fn algebras_do_not_depend_on_degree_bound() {
    let quiver = || Quiver::doubled(data::GAMMA_VERTICES, data::GAMMA_EDGES);
    let small = build_algebra("a", quiver(), data::GAMMA_RELATIONS, 10).unwrap();
    let large = build_algebra("b", quiver(), data::GAMMA_RELATIONS, 30).unwrap();
    assert_eq!(small.graded_dims(), large.graded_dims());
    assert_eq!(small.basis_paths(), large.basis_paths());
}

#[test]
fn listed_gamma_relations_give_a_smaller_algebra() {
    let listed = qtangle::quiverkat::gamma_algebra_listed().unwrap();
    assert_eq!(listed.dim(), 73);
}

#[test]
fn endomorphism_rings_are_truncated_polynomial_rings() {
    let gl2 = gl2_algebra().unwrap();
    assert_eq!(gl2.dim(), 5);
    assert_eq!(gl2.idempotent_subalgebra(&[2]).graded_dims(), vec![1, 0, 1]);
    let gl3 = gl3_algebra().unwrap();
    assert_eq!(
        gl3.idempotent_subalgebra(&[3]).graded_dims(),
        vec![1, 0, 1, 0, 1]
    );
}

#[test]
fn ext_of_simple_module_through_degree_minus_twelve() {
    let r = ext_self_l1(-12).unwrap();
    assert!(
        r.resolution.is_complex && r.resolution.exact && r.resolution.minimal,
        "{:?}",
        r.resolution.failures
    );
    let expected: BTreeMap<i64, Vec<(i64, usize)>> = [
        (0, vec![(0, 1)]),
        (-1, vec![]),
        (-2, vec![(-4, 1), (-2, 1)]),
        (-3, vec![]),
        (-4, vec![(-8, 1)]),
        (-5, vec![(-8, 1)]),
        (-6, vec![(-12, 1)]),
        (-7, vec![(-12, 1)]),
        (-8, vec![(-16, 1)]),
        (-9, vec![(-16, 1)]),
        (-10, vec![(-20, 1)]),
        (-11, vec![(-20, 1)]),
        (-12, vec![(-24, 1)]),
    ]
    .into_iter()
    .collect();
    assert_eq!(r.ext, expected);
    assert!(r.ext_matches && r.poincare_matches);
    assert!(poincare_matches_closed_form(-12).unwrap());
}
