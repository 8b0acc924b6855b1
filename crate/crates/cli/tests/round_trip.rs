//! Parse/pretty round-trip property on randomized expression trees.

use proptest::prelude::*;
use qhopf_cli::expr::{parse, pretty, Expr};

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0i64..100).prop_map(Expr::Num),
        Just(Expr::QParam),
        prop_oneof![
            Just("a"),
            Just("b"),
            Just("c"),
            Just("d"),
            Just("z"),
            Just("s")
        ]
        .prop_map(|s| Expr::Gen(s.to_string())),
    ]
}

fn expr_strategy(depth: u32) -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), -4i64..=4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            inner.clone().prop_map(|a| Expr::Adj(Box::new(a))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn parse_pretty_round_trip(e in expr_strategy(6)) {
        let text = pretty(&e);
        let back = parse(&text).unwrap_or_else(|err| {
            panic!("pretty form `{}` failed to parse: {}", text, err)
        });
        prop_assert_eq!(back, e);
    }
}
