//! Pretty-printer producing canonical script text that parses back to an
//! equal [`Script`].

use std::fmt::Write;

use crate::ast::{Expr, FglDecl, Script, Stmt};

pub fn render(script: &Script) -> String {
    let mut out = String::new();
    for s in &script.statements {
        out.push_str(&render_stmt(s));
        out.push('\n');
    }
    out
}

pub fn render_stmt(stmt: &Stmt) -> String {
    let list = |es: &[Expr]| es.iter().map(render_expr).collect::<Vec<_>>().join(", ");
    match stmt {
        Stmt::Ring { name, gens, cap } => {
            let mut s = format!("ring {}[", name.name);
            for (i, g) in gens.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                let _ = write!(s, "{}: deg {}", g.name.name, g.degree);
                if let Some(n) = g.nilpotency {
                    let _ = write!(s, " nilp {n}");
                }
            }
            let _ = write!(s, "] cap {cap}");
            s
        }
        Stmt::Fgl { name, law } => match law {
            FglDecl::Additive => format!("fgl {} = additive", name.name),
            FglDecl::Universal => format!("fgl {} = universal", name.name),
            FglDecl::Multiplicative(e) => format!("fgl {} = multiplicative({})", name.name, render_expr(e)),
        },
        Stmt::Bundle { name, plus, minus } => {
            let mut s = format!("bundle {} = [{}]", name.name, list(plus));
            if !minus.is_empty() {
                let _ = write!(s, " - [{}]", list(minus));
            }
            s
        }
        Stmt::Let { name, expr } => format!("let {} = {}", name.name, render_expr(expr)),
        Stmt::Morphism { name, ctor, args } => {
            if args.is_empty() {
                format!("morphism {} = {}", name.name, ctor.name)
            } else {
                format!("morphism {} = {}({})", name.name, ctor.name, list(args))
            }
        }
        Stmt::Check { name, args } => format!("check {}({})", name.name, list(args)),
    }
}

// Binding strength: sums 1, products 2, negation 3, powers 4, atoms 5.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Int(_) | Expr::Rat(..) | Expr::Name(_) | Expr::Call(..) => 5,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    let s = render_expr(e);
    if level(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Int(n) => n.to_string(),
        Expr::Rat(p, q) => format!("{p}/{q}"),
        Expr::Name(id) => id.name.clone(),
        Expr::Neg(a) => format!("-{}", wrap(a, 3)),
        Expr::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
        Expr::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
        Expr::Mul(a, b) => format!("{}*{}", wrap(a, 2), wrap(b, 3)),
        Expr::Pow(a, k) => format!("{}^{k}", wrap(a, 5)),
        Expr::Call(f, args) => {
            format!("{}({})", f.name, args.iter().map(render_expr).collect::<Vec<_>>().join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn minimal_parentheses() {
        let src = "ring R[x: deg 1 nilp 3, b: deg -1] cap 4\nlet u = (x + 1)*(x - 2) - (x - 1) + -(x + b)^2*-x\n";
        let s = parse(src).unwrap();
        let text = render(&s);
        assert_eq!(text, "ring R[x: deg 1 nilp 3, b: deg -1] cap 4\nlet u = (x + 1)*(x - 2) - (x - 1) + -(x + b)^2*-x\n");
        assert_eq!(parse(&text).unwrap(), s);
    }

    #[test]
    fn statements_round_trip() {
        let src = "ring R[x: deg 1] cap 3\nfgl M = multiplicative(1/2)\nbundle E = [x] - []\nbundle F = []\nmorphism T = chern_character\nmorphism S = identity(M)\ncheck whitney(E, F)\n";
        let s = parse(src).unwrap();
        assert_eq!(parse(&render(&s)).unwrap(), s);
    }
}
