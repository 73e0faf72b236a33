use proptest::prelude::*;
use qs_core::skein::{braid_to_pd, kauffman_poly, SkeinParams};
use qs_core::tangle::{parse_braid, BraidWord, Model};
use qs_core::algebra::{make_spec, Family};

fn models() -> Vec<Model> {
    [(Family::B, 1), (Family::B, 2), (Family::C, 2), (Family::D, 3)]
        .into_iter()
        .map(|(f, n)| Model::new(make_spec(f, n).unwrap()).unwrap())
        .collect()
}

fn agree(md: &Model, w: &BraidWord) {
    let tensor = md.evaluate_braid(w);
    let oracle = kauffman_poly(&braid_to_pd(w), &SkeinParams::from_spec(&md.spec)).unwrap();
    assert_eq!(tensor, oracle, "{} word {:?} on {} strands", md.spec.id(), w.generators, w.strands);
}

#[test]
fn standard_knots() {
    let words = [("", 1), ("1", 2), ("-1", 2), ("1 1", 2), ("1 1 1", 2), ("-1 -1 -1", 2), ("1 -2 1 -2", 3)];
    for md in models() {
        for (w, k) in words {
            agree(&md, &parse_braid(w, k).unwrap());
        }
    }
}

#[test]
fn split_and_nested_closures() {
    let md = Model::new(make_spec(Family::C, 1).unwrap()).unwrap();
    for (w, k) in [("1", 3), ("", 3), ("2 2", 3), ("1 2 -1 2", 3), ("1 3", 4)] {
        agree(&md, &parse_braid(w, k).unwrap());
    }
}

fn arb_word() -> impl Strategy<Value = BraidWord> {
    (2usize..=3).prop_flat_map(|k| {
        let g = (1..k as i64).prop_flat_map(|j| prop_oneof![Just(j), Just(-j)]);
        prop::collection::vec(g, 0..=6).prop_map(move |gens| BraidWord::new(k, gens).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_closures(w in arb_word(), which in 0usize..4) {
        let md = &models()[which];
        let tensor = md.evaluate_braid(&w);
        let oracle = kauffman_poly(&braid_to_pd(&w), &SkeinParams::from_spec(&md.spec)).unwrap();
        prop_assert_eq!(tensor, oracle);
    }
}
