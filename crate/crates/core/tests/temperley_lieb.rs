use qtangle::intertwiner::{
    cap, cap_at, charjw_check, crossing_neg, crossing_pos, cup, cup_at, inclusion, is_intertwiner,
    jones_wenzl, jones_wenzl_divided, nested_cups, projection, slide_identity_checks, turnback,
    Intertwiner,
};
use qtangle::quantum_integer;

const P: usize = 24;

fn ones(n: usize) -> Vec<u32> {
    vec![1; n]
}

#[test]
fn loop_value_is_minus_two() {
    let circle = cap().compose(&cup()).unwrap();
    assert_eq!(circle.scalar().unwrap(), -quantum_integer(2));
}

#[test]
fn zigzag_straightens() {
    let id = Intertwiner::identity(&[1]);
    let left = cap_at(1, 3)
        .unwrap()
        .compose(&cup_at(2, 1).unwrap())
        .unwrap();
    let right = cap_at(2, 3)
        .unwrap()
        .compose(&cup_at(1, 1).unwrap())
        .unwrap();
    assert_eq!(left, id);
    assert_eq!(right, id);
}

#[test]
fn turnbacks_satisfy_temperley_lieb_relations() {
    for n in 2..=5 {
        for i in 1..n {
            let u = turnback(i, n).unwrap();
            let uu = u.compose(&u).unwrap();
            assert_eq!(uu, u.scale(&-quantum_integer(2)), "U_{i}^2 on {n}");
            if i + 1 < n {
                let v = turnback(i + 1, n).unwrap();
                assert_eq!(
                    u.compose(&v).unwrap().compose(&u).unwrap(),
                    u,
                    "U_i U_(i+1) U_i on {n}"
                );
                assert_eq!(
                    v.compose(&u).unwrap().compose(&v).unwrap(),
                    v,
                    "U_(i+1) U_i U_(i+1) on {n}"
                );
            }
            for j in i + 2..n {
                let w = turnback(j, n).unwrap();
                assert_eq!(
                    u.compose(&w).unwrap(),
                    w.compose(&u).unwrap(),
                    "far commutation on {n}"
                );
            }
        }
    }
}

#[test]
fn crossings_are_inverse_and_braid() {
    for n in 2..=4 {
        for i in 1..n {
            let p = crossing_pos(n, i).unwrap();
            let m = crossing_neg(n, i).unwrap();
            assert_eq!(p.compose(&m).unwrap(), Intertwiner::identity(&ones(n)));
            assert!(is_intertwiner(&p));
        }
    }
    let a = crossing_pos(3, 1).unwrap();
    let b = crossing_pos(3, 2).unwrap();
    let aba = a.compose(&b).unwrap().compose(&a).unwrap();
    let bab = b.compose(&a).unwrap().compose(&b).unwrap();
    assert_eq!(aba, bab);
}

#[test]
fn elementary_maps_are_intertwiners() {
    assert!(is_intertwiner(&cup()));
    assert!(is_intertwiner(&cap()));
    for n in 1..=4 {
        assert!(is_intertwiner(&inclusion(n)));
        assert!(is_intertwiner(&projection(n, P)));
        assert!(is_intertwiner(&nested_cups(n as usize)));
    }
}

#[test]
fn projection_splits_inclusion() {
    for n in 1..=5 {
        let id = projection(n, P).compose(&inclusion(n)).unwrap();
        assert!(id.eq_upto(&Intertwiner::identity(&[n])), "n = {n}");
    }
}

#[test]
fn projectors_are_characterized() {
    for n in 1..=4 {
        let p = jones_wenzl(n, P);
        assert!(charjw_check(&p), "n = {n}");
        assert!(p.eq_upto(&jones_wenzl_divided(n, P)), "n = {n}");
    }
}

// p_n = p_{n-1} + [n-1]/[n] p_{n-1} U_{n-1} p_{n-1}, with U the turnback and loop value -[2].
fn wenzl_recursion(n: u32) -> Intertwiner {
    if n == 1 {
        return Intertwiner::identity(&[1]);
    }
    let prev = wenzl_recursion(n - 1).tensor(&Intertwiner::identity(&[1]));
    let ratio = &quantum_integer(n - 1) * &quantum_integer(n).invert(P).unwrap();
    let u = turnback(n as usize - 1, n as usize).unwrap();
    let middle = prev.compose(&u).unwrap().compose(&prev).unwrap();
    prev.add(&middle.scale(&ratio)).unwrap()
}

#[test]
fn projectors_match_wenzl_recursion() {
    for n in 1..=4 {
        assert!(jones_wenzl(n, P).eq_upto(&wenzl_recursion(n)), "n = {n}");
    }
}

#[test]
fn traces_of_projectors_are_signed_quantum_integers() {
    for n in 1..=4u32 {
        let p = projection(n, P);
        let i = inclusion(n);
        // closing p_n gives (-1)^n [n+1]
        let closed = nested_cups(n as usize);
        let caps = (1..=n as usize).fold(Intertwiner::identity(&ones(2 * n as usize)), |acc, j| {
            cap_at(n as usize - j + 1, 2 * (n as usize - j + 1))
                .unwrap()
                .compose(&acc)
                .unwrap()
        });
        let jw = i
            .compose(&p)
            .unwrap()
            .tensor(&Intertwiner::identity(&ones(n as usize)));
        let value = caps
            .compose(&jw)
            .unwrap()
            .compose(&closed)
            .unwrap()
            .scalar()
            .unwrap();
        let expected = if n % 2 == 0 {
            quantum_integer(n + 1)
        } else {
            -quantum_integer(n + 1)
        };
        assert!(value.eq_upto(&expected), "n = {n}: {value}");
    }
}

#[test]
fn slide_identities_hold() {
    for n in 1..=3usize {
        for k in 0..=n as u32 {
            let r = slide_identity_checks(n, k, P);
            assert!(r.all(), "{r:?}");
        }
    }
}
