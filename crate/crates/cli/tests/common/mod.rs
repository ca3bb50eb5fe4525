//! Random well-scoped scripts for parser round-trip properties.

use num_bigint::BigInt;
use proptest::prelude::*;

use orientcalc_cli::ast::{Expr, FglDecl, GenDecl, Ident, Script, Stmt, FUNCTIONS};

const GENS: &[&str] = &["x0", "x1", "b"];
const WITH_LAW: &[&str] = &["x0", "x1", "b", "F"];
const ALL: &[&str] = &["x0", "x1", "b", "F", "E"];

fn leaf(names: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u64..1000).prop_map(|n| Expr::Int(BigInt::from(n))),
        (0u64..50, 1u64..50).prop_map(|(p, q)| Expr::Rat(BigInt::from(p), BigInt::from(q))),
        proptest::sample::select(names).prop_map(|n| Expr::Name(Ident::new(n))),
    ]
}

fn expr(names: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    leaf(names).prop_recursive(5, 48, 4, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |a| Expr::Neg(b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (inner.clone(), 0u32..6).prop_map(move |(x, k)| Expr::Pow(b(x), k)),
            (proptest::sample::select(FUNCTIONS), proptest::collection::vec(inner, 3)).prop_map(|((f, n), args)| {
                Expr::Call(Ident::new(f), args.into_iter().take(n).collect())
            }),
        ]
    })
}

pub fn script() -> impl Strategy<Value = Script> {
    let lets = proptest::collection::vec(expr(ALL), 0..4);
    let roots = || proptest::collection::vec(expr(WITH_LAW), 0..3);
    let checks = proptest::collection::vec((expr(ALL), expr(ALL)), 0..3);
    (2u32..8, -2i32..3, proptest::option::of(1u32..5), expr(GENS), roots(), roots(), lets, checks).prop_map(
        |(cap, deg, nilp, beta, plus, minus, lets, checks)| {
            let mut statements = vec![
                Stmt::Ring {
                    name: Ident::new("R"),
                    gens: vec![
                        GenDecl { name: Ident::new("x0"), degree: 1, nilpotency: nilp },
                        GenDecl { name: Ident::new("x1"), degree: 1, nilpotency: None },
                        GenDecl { name: Ident::new("b"), degree: deg, nilpotency: None },
                    ],
                    cap,
                },
                Stmt::Fgl { name: Ident::new("F"), law: FglDecl::Multiplicative(beta) },
                Stmt::Bundle { name: Ident::new("E"), plus, minus },
            ];
            for (i, e) in lets.into_iter().enumerate() {
                statements.push(Stmt::Let { name: Ident::new(format!("u{i}")), expr: e });
            }
            for (a, b) in checks {
                statements.push(Stmt::Check { name: Ident::new("equal"), args: vec![a, b] });
            }
            Script { statements }
        },
    )
}
