use logicinf_core::formula::SymbolKind;
use logicinf_core::semantics::classify;
use logicinf_core::synthesis::random_renaming;
use logicinf_core::{parse_formula, Formula, SymbolInventory, Term};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        prop::sample::select(vec!["p", "q", "r", "s_1", "t_2"]).prop_map(Formula::atom),
        (prop::sample::select(vec!["P", "Q", "R_1"]), prop::sample::select(vec!["a", "b", "c_2"]))
            .prop_map(|(p, c)| Formula::pred(p, Term::constant(c))),
    ]
}

fn body(leaf: BoxedStrategy<Formula>) -> impl Strategy<Value = Formula> {
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}

fn quantified() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        atom(),
        prop::sample::select(vec!["P", "Q", "S_3"]).prop_map(|p| Formula::pred(p, Term::var("x_1"))),
    ]
    .boxed();
    (any::<bool>(), body(leaf)).prop_map(
        |(all, b)| {
            if all {
                Formula::forall("x_1", b)
            } else {
                Formula::exists("x_1", b)
            }
        },
    )
}

fn formula() -> impl Strategy<Value = Formula> {
    prop_oneof![body(atom().boxed()), quantified()]
}

fn image(inv: &SymbolInventory, f: impl Fn(&str) -> String) -> SymbolInventory {
    let mut out = SymbolInventory::new();
    for kind in [SymbolKind::Proposition, SymbolKind::Predicate, SymbolKind::Constant, SymbolKind::Variable] {
        for name in inv.class(kind) {
            out.insert(kind, &f(name));
        }
    }
    out
}

proptest! {
    #[test]
    fn parse_inverts_render(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f);
    }

    #[test]
    fn renamings_compose(f in formula(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let fs = [f];
        let first = random_renaming(&SymbolInventory::of(&fs), &mut ChaCha8Rng::seed_from_u64(s1));
        let once = first.apply_unchecked(&fs[0]);
        let second = random_renaming(&SymbolInventory::of(std::slice::from_ref(&once)), &mut ChaCha8Rng::seed_from_u64(s2));
        let twice = second.apply_unchecked(&once);
        prop_assert_eq!(second.after(&first).apply_unchecked(&fs[0]), twice);
    }

    #[test]
    fn inventory_of_image_is_image_of_inventory(f in formula(), seed in any::<u64>()) {
        let fs = [f];
        let inv = SymbolInventory::of(&fs);
        let map = random_renaming(&inv, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(map.check(&inv).is_ok());
        let renamed = SymbolInventory::of(&[map.apply_unchecked(&fs[0])]);
        prop_assert_eq!(renamed, image(&inv, |n| map.get(n).to_string()));
    }

    #[test]
    fn verdicts_survive_renaming(a in body(atom().boxed()), b in body(atom().boxed()), seed in any::<u64>()) {
        let fs = [a, b];
        let map = random_renaming(&SymbolInventory::of(&fs), &mut ChaCha8Rng::seed_from_u64(seed));
        let before = classify(&fs[..1], &fs[1], 1).unwrap();
        let after = classify(&[map.apply_unchecked(&fs[0])], &map.apply_unchecked(&fs[1]), 1).unwrap();
        prop_assert_eq!(before, after);
    }
}
