use proptest::prelude::*;
use qtangle::tangle::{
    apply_move, cable, enumerate_move_sites, parse, random_diagram_with, random_link, writhe_gamma,
    BoundaryPoint, MoveKind, RandomConfig,
};

fn bottom() -> impl Strategy<Value = Vec<BoundaryPoint>> {
    prop::collection::vec((1u32..=2, any::<bool>()), 0..=3).prop_map(|v| {
        v.into_iter()
            .map(|(c, up)| {
                if up {
                    BoundaryPoint::up(c)
                } else {
                    BoundaryPoint::down(c)
                }
            })
            .collect()
    })
}

fn cabled_width(state: &[BoundaryPoint]) -> usize {
    state.iter().map(|p| p.colour as usize).sum()
}

proptest! {
    #[test]
    fn serialization_round_trips(b in bottom(), n in 0usize..14, seed in any::<u64>()) {
        let d = random_diagram_with(&b, n, &RandomConfig::new(2), seed);
        let back = parse(&d.serialize()).unwrap();
        prop_assert_eq!(&back.bottom, &d.bottom);
        prop_assert_eq!(&back.slices, &d.slices);
        prop_assert_eq!(back.serialize(), d.serialize());
    }

    #[test]
    fn cabling_gives_a_valid_uncoloured_diagram(b in bottom(), n in 0usize..12, seed in any::<u64>()) {
        let d = random_diagram_with(&b, n, &RandomConfig::new(3), seed);
        let c = cable(&d).unwrap();
        prop_assert!(c.validate().is_ok());
        prop_assert!(c.is_uncoloured());
        prop_assert_eq!(c.bottom.len(), cabled_width(&d.bottom));
        prop_assert_eq!(c.top().unwrap().len(), cabled_width(&d.top().unwrap()));
    }

    #[test]
    fn mirror_is_an_involution_negating_gamma(n in 1usize..12, seed in any::<u64>()) {
        let d = random_link(n, &RandomConfig::new(2), seed);
        prop_assert_eq!(&d.mirror().mirror().slices, &d.slices);
        let c = cable(&d).unwrap();
        prop_assert_eq!(writhe_gamma(&c.mirror()).unwrap(), -writhe_gamma(&c).unwrap());
    }

    #[test]
    fn moves_are_invertible(b in bottom(), n in 0usize..10, seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let d = random_diagram_with(&b, n, &RandomConfig::new(2), seed);
        for kind in MoveKind::ALL {
            let sites = enumerate_move_sites(&d, kind).unwrap();
            if sites.is_empty() {
                continue;
            }
            let site = pick.get(&sites);
            let moved = apply_move(&d, site).unwrap();
            prop_assert_eq!(moved.top().unwrap(), d.top().unwrap());
            let back = apply_move(&moved, &site.inverse()).unwrap();
            prop_assert_eq!(&back.slices, &d.slices, "{} at {}", kind, site.at);
        }
    }

    #[test]
    fn random_links_close_up(n in 0usize..16, seed in any::<u64>()) {
        let d = random_link(n, &RandomConfig::new(3), seed);
        prop_assert!(d.bottom.is_empty());
        prop_assert!(d.top().unwrap().is_empty());
    }
}

#[test]
fn every_move_occurs_somewhere() {
    let cfg = RandomConfig::new(2);
    for kind in MoveKind::ALL {
        let found = (0..400u64).any(|seed| {
            let d = random_diagram_with(
                &[BoundaryPoint::up(1), BoundaryPoint::down(1)],
                8,
                &cfg,
                seed,
            );
            !enumerate_move_sites(&d, kind).unwrap().is_empty()
        });
        assert!(found, "{kind}");
    }
}

#[test]
fn malformed_diagrams_are_rejected() {
    assert!(parse("bottom +1 +1\ncap 1").is_err());
    assert!(parse("bottom +1 -2\ncap 1").is_err());
    assert!(parse("bottom +1\npos 1").is_err());
    assert!(parse("bottom\ncup 1 0 u").is_err());
}
