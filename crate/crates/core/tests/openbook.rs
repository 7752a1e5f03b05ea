use obembed_core::mcg::{blue_curves, Letter, TwistWord};
use obembed_core::openbook::{
    catalog, connected_sum, detect_negative_stabilization, equivalent_cyclic, stabilize, surface_to_page,
    validate_type1, BaseLabel, CatalogEntry, Edge, EdgeKind, Node, OpenBook, PageGraph, Sign,
};
use obembed_core::Error;
use proptest::prelude::*;

/// Connected page with up to `max` nodes (`v0, v1, …`), one optional extra
/// edge, and a word over its sphere nodes.
fn open_book(max: usize) -> impl Strategy<Value = OpenBook> {
    (1..=max).prop_flat_map(|count| {
        let parents = prop::collection::vec((any::<prop::sample::Index>(), any::<bool>()), count - 1);
        let hyper = prop::collection::vec(prop::bool::weighted(0.2), count);
        let extra = prop::option::of((0..count, 0..count));
        let word = prop::collection::vec((0..count, prop_oneof![-2i64..=-1, 1i64..=2]), 0..8);
        (Just(count), parents, hyper, extra, word).prop_map(|(count, parents, hyper, extra, word)| {
            let name = |i: usize| format!("v{i}");
            let nodes: Vec<Node> = (0..count)
                .map(|i| Node {
                    name: name(i),
                    base: if hyper[i] { BaseLabel::Hypersurface { n: 1, label: "f".into() } } else { BaseLabel::Sphere { n: 1 } },
                })
                .collect();
            let mut edges: Vec<Edge> = parents
                .iter()
                .enumerate()
                .map(|(i, (p, plumb))| {
                    let kind = if *plumb { EdgeKind::Plumb } else { EdgeKind::Bsum };
                    Edge::new(&name(p.index(i + 1)), &name(i + 1), kind)
                })
                .collect();
            if let Some((a, b)) = extra {
                let dup = edges.iter().any(|e| e.touches(&name(a)) && e.touches(&name(b)));
                if a != b && !dup {
                    edges.push(Edge::new(&name(a), &name(b), EdgeKind::Plumb));
                }
            }
            let letters = word.into_iter().filter(|(i, _)| !hyper[*i]).map(|(i, p)| Letter::named(&name(i), p));
            OpenBook::new(PageGraph::new(2, nodes, edges).unwrap(), TwistWord::from_letters(letters)).unwrap()
        })
    })
}

/// Same open book with nodes renamed by a rotation of indices.
fn relabel(ob: &OpenBook, shift: usize) -> OpenBook {
    let n = ob.page().nodes().len();
    let f = |s: &str| {
        let i: usize = s[1..].parse().unwrap();
        format!("w{}", (i + shift) % n)
    };
    let nodes = ob.page().nodes().iter().map(|v| Node { name: f(&v.name), base: v.base.clone() }).collect();
    let edges = ob.page().edges().iter().map(|e| Edge::new(&f(&e.a), &f(&e.b), e.kind)).collect();
    OpenBook::new(PageGraph::new(ob.dim(), nodes, edges).unwrap(), ob.monodromy().rename(&|s| f(s))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equivalence_is_reflexive(ob in open_book(6)) {
        prop_assert!(equivalent_cyclic(&ob, &ob));
    }

    #[test]
    fn equivalence_is_symmetric(a in open_book(4), b in open_book(4)) {
        prop_assert_eq!(equivalent_cyclic(&a, &b), equivalent_cyclic(&b, &a));
    }

    #[test]
    fn rotation_and_relabeling_compose(ob in open_book(6), r in 0usize..8, shift in 0usize..6) {
        let w = ob.monodromy();
        let k = if w.is_empty() { 0 } else { r % w.len() };
        let rotated = OpenBook::new(ob.page().clone(), w.rotate(k)).unwrap();
        let moved = relabel(&rotated, shift);
        prop_assert!(equivalent_cyclic(&ob, &rotated));
        prop_assert!(equivalent_cyclic(&rotated, &moved));
        prop_assert!(equivalent_cyclic(&ob, &moved));
        prop_assert!(equivalent_cyclic(&moved, &ob));
    }

    #[test]
    fn type1_preserved(a in open_book(5), b in open_book(5), attach in any::<prop::sample::Index>(), pos in any::<bool>()) {
        prop_assert!(validate_type1(&a).valid);
        let node = a.page().nodes()[attach.index(a.page().nodes().len())].name.clone();
        let sign = if pos { Sign::Positive } else { Sign::Negative };
        prop_assert!(validate_type1(&stabilize(&a, sign, &node).unwrap()).valid);
        prop_assert!(validate_type1(&connected_sum(&a, &b).unwrap()).valid);
    }

    #[test]
    fn negative_stabilization_is_detected(a in open_book(5), attach in any::<prop::sample::Index>()) {
        let node = a.page().nodes()[attach.index(a.page().nodes().len())].name.clone();
        prop_assert!(detect_negative_stabilization(&stabilize(&a, Sign::Negative, &node).unwrap()));
    }

    #[test]
    fn json_round_trip(ob in open_book(6)) {
        prop_assert_eq!(OpenBook::from_json(&ob.to_json()).unwrap(), ob);
    }
}

#[test]
fn xi_n_shape() {
    for n in 1..=8 {
        let ob = catalog(&CatalogEntry::XiN { n }).unwrap();
        assert_eq!(ob.page().nodes().len(), n);
        assert_eq!(ob.monodromy().len(), n);
        assert!(detect_negative_stabilization(&ob));
    }
    assert!(!detect_negative_stabilization(&catalog(&CatalogEntry::StdSphere { n: 1 }).unwrap()));
}

#[test]
fn surface_page_matches_blue_intersection_graph() {
    for g in 1..=4 {
        let (page, map) = surface_to_page(g).unwrap();
        let blue = blue_curves(g);
        assert_eq!(page.nodes().len(), blue.len());
        assert_eq!(page.edges().len(), blue.len() - 1);
        // consecutive blue curves meet once, all others are disjoint
        for (i, a) in blue.iter().enumerate() {
            for (j, b) in blue.iter().enumerate() {
                assert_eq!(page.plumbed(&map[a], &map[b]), i.abs_diff(j) == 1, "{a} {b}");
            }
        }
    }
}

#[test]
fn type1_rejects_twists_on_hypersurfaces() {
    let nodes = vec![
        Node { name: "s".into(), base: BaseLabel::Sphere { n: 2 } },
        Node { name: "h".into(), base: BaseLabel::Hypersurface { n: 2, label: "quadric".into() } },
    ];
    let page = PageGraph::new(4, nodes, vec![Edge::new("s", "h", EdgeKind::Bsum)]).unwrap();
    assert!(validate_type1(&OpenBook::new(page.clone(), "s^3".parse().unwrap()).unwrap()).valid);
    let bad = validate_type1(&OpenBook::new(page, "s h".parse().unwrap()).unwrap());
    assert!(!bad.valid);
    assert!(bad.diagnostic.unwrap().contains('h'));
}

#[test]
fn malformed_pages_rejected() {
    let s = |n: &str| Node { name: n.into(), base: BaseLabel::Sphere { n: 1 } };
    assert!(PageGraph::new(3, vec![s("a")], vec![]).is_err());
    assert!(PageGraph::new(2, vec![], vec![]).is_err());
    assert!(PageGraph::new(2, vec![s("a"), s("a")], vec![]).is_err());
    assert!(PageGraph::new(2, vec![s("a"), s("b")], vec![]).is_err());
    assert!(matches!(
        PageGraph::new(2, vec![s("a")], vec![Edge::new("a", "z", EdgeKind::Plumb)]),
        Err(Error::UnknownNode(_))
    ));
    let a = catalog(&CatalogEntry::Rp3).unwrap();
    let b = catalog(&CatalogEntry::StdSphere { n: 2 }).unwrap();
    assert!(matches!(connected_sum(&a, &b), Err(Error::DimensionMismatch(2, 4))));
}
