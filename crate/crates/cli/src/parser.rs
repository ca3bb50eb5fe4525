use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::ast::{Expr, FglDecl, GenDecl, Ident, Script, Stmt, CHECKS, FUNCTIONS, KEYWORDS, MORPHISMS};
use crate::error::{ParseError, Pos};
use crate::lexer::{lex, Tok, Token};

/// Parses and resolves a script.
pub fn parse(src: &str) -> Result<Script, ParseError> {
    parse_with_names(src, &[])
}

/// As [`parse`], treating `names` as declared before the first statement.
pub fn parse_with_names(src: &str, names: &[&str]) -> Result<Script, ParseError> {
    let tokens = lex(src)?;
    let script = Parser { tokens, idx: 0 }.script()?;
    resolve_with(&script, names)?;
    Ok(script)
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn kw(k: &str) -> String {
    format!("`{k}`")
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.idx]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.idx].clone();
        if t.tok != Tok::Eof {
            self.idx += 1;
        }
        t
    }

    fn fail<T>(&self, expected: BTreeSet<String>) -> Result<T, ParseError> {
        let t = self.peek();
        let found = if t.tok == Tok::Eof { "end of input".to_string() } else { format!("`{}`", t.tok) };
        Err(ParseError::syntax(t.pos, format!("unexpected {found}"), expected))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump().pos)
        } else {
            self.fail(set(&[&tok.class()]))
        }
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == k)
    }

    fn expect_keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if self.is_keyword(k) {
            self.bump();
            Ok(())
        } else {
            self.fail(set(&[&kw(k)]))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let name = s.clone();
                let pos = self.bump().pos;
                Ok(Ident { name, pos })
            }
            _ => self.fail(set(&["NAME"])),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.bump();
                Ok(n)
            }
            _ => self.fail(set(&["INT"])),
        }
    }

    fn small<T: TryFrom<i64>>(&mut self, negative_ok: bool) -> Result<T, ParseError> {
        let neg = negative_ok && self.eat(&Tok::Minus);
        let pos = self.peek().pos;
        let n = self.int()?;
        let n = if neg { -n } else { n };
        n.to_i64()
            .and_then(|v| T::try_from(v).ok())
            .ok_or_else(|| ParseError::syntax(pos, format!("integer {n} out of range"), BTreeSet::new()))
    }

    fn script(mut self) -> Result<Script, ParseError> {
        let mut statements = Vec::new();
        while self.peek().tok != Tok::Eof {
            statements.push(self.statement()?);
        }
        Ok(Script { statements })
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let Tok::Ident(word) = self.peek().tok.clone() else {
            return self.fail(set(&["`bundle`", "`check`", "`fgl`", "`let`", "`morphism`", "`ring`"]));
        };
        match word.as_str() {
            "ring" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::LBracket)?;
                let mut gens = vec![self.gen()?];
                while self.eat(&Tok::Comma) {
                    gens.push(self.gen()?);
                }
                self.expect(Tok::RBracket)?;
                self.expect_keyword("cap")?;
                let cap = self.small(false)?;
                Ok(Stmt::Ring { name, gens, cap })
            }
            "fgl" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let law = match &self.peek().tok {
                    Tok::Ident(s) if s == "additive" => FglDecl::Additive,
                    Tok::Ident(s) if s == "universal" => FglDecl::Universal,
                    Tok::Ident(s) if s == "multiplicative" => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen)?;
                        return Ok(Stmt::Fgl { name, law: FglDecl::Multiplicative(e) });
                    }
                    _ => return self.fail(set(&["`additive`", "`multiplicative`", "`universal`"])),
                };
                self.bump();
                Ok(Stmt::Fgl { name, law })
            }
            "bundle" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let plus = self.root_list()?;
                let minus = if self.eat(&Tok::Minus) { self.root_list()? } else { Vec::new() };
                Ok(Stmt::Bundle { name, plus, minus })
            }
            "let" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let expr = self.expr()?;
                Ok(Stmt::Let { name, expr })
            }
            "morphism" => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let ctor = self.ident()?;
                let args = if self.peek().tok == Tok::LParen { self.args()? } else { Vec::new() };
                Ok(Stmt::Morphism { name, ctor, args })
            }
            "check" => {
                self.bump();
                // check names may coincide with keywords, as in `check morphism(T)`
                let name = match &self.peek().tok {
                    Tok::Ident(s) => {
                        let name = s.clone();
                        Ident { name, pos: self.bump().pos }
                    }
                    _ => return self.fail(set(&["NAME"])),
                };
                let args = self.args()?;
                Ok(Stmt::Check { name, args })
            }
            _ => self.fail(set(&["`bundle`", "`check`", "`fgl`", "`let`", "`morphism`", "`ring`"])),
        }
    }

    fn gen(&mut self) -> Result<GenDecl, ParseError> {
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        self.expect_keyword("deg")?;
        let degree = self.small(true)?;
        let nilpotency = if self.is_keyword("nilp") {
            self.bump();
            Some(self.small(false)?)
        } else {
            None
        };
        Ok(GenDecl { name, degree, nilpotency })
    }

    fn root_list(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBracket) {
            return Ok(out);
        }
        out.push(self.expr()?);
        while self.eat(&Tok::Comma) {
            out.push(self.expr()?);
        }
        self.expect(Tok::RBracket)?;
        Ok(out)
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(out);
        }
        out.push(self.expr()?);
        while self.eat(&Tok::Comma) {
            out.push(self.expr()?);
        }
        if self.peek().tok != Tok::RParen {
            return self.fail(set(&["`)`", "`,`", "`*`", "`+`", "`-`", "`^`"]));
        }
        self.bump();
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Star) {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let k = self.small(false)?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Rat(p, q) => {
                self.bump();
                Ok(Expr::Rat(p, q))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let id = self.ident()?;
                if self.peek().tok == Tok::LParen {
                    let args = self.args()?;
                    Ok(Expr::Call(id, args))
                } else {
                    Ok(Expr::Name(id))
                }
            }
            _ => self.fail(set(&["NAME", "INT", "RATIONAL", "`(`", "`-`"])),
        }
    }
}

fn is_universal_coefficient(name: &str) -> bool {
    let Some(rest) = name.strip_prefix("a1") else {
        return false;
    };
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())
}

/// Checks that every name is declared once and before use, and that calls,
/// checks and morphism constructors exist with the right arity.
pub fn resolve(script: &Script) -> Result<(), ParseError> {
    resolve_with(script, &[])
}

fn resolve_with(script: &Script, names: &[&str]) -> Result<(), ParseError> {
    let mut scope: HashSet<String> = names.iter().map(|s| s.to_string()).collect();
    let mut universal = false;
    let declare = |scope: &mut HashSet<String>, id: &Ident| -> Result<(), ParseError> {
        if !scope.insert(id.name.clone()) {
            return Err(ParseError::binding(id.pos, format!("`{}` is already declared", id.name)));
        }
        Ok(())
    };
    for stmt in &script.statements {
        let uses = |scope: &HashSet<String>, universal: bool, e: &Expr| check_expr(scope, universal, e);
        match stmt {
            Stmt::Ring { name, gens, .. } => {
                declare(&mut scope, name)?;
                for g in gens {
                    declare(&mut scope, &g.name)?;
                }
            }
            Stmt::Fgl { name, law } => {
                if let FglDecl::Multiplicative(e) = law {
                    uses(&scope, universal, e)?;
                }
                universal |= *law == FglDecl::Universal;
                declare(&mut scope, name)?;
            }
            Stmt::Bundle { name, plus, minus } => {
                for e in plus.iter().chain(minus) {
                    uses(&scope, universal, e)?;
                }
                declare(&mut scope, name)?;
            }
            Stmt::Let { name, expr } => {
                uses(&scope, universal, expr)?;
                declare(&mut scope, name)?;
            }
            Stmt::Morphism { name, ctor, args } => {
                arity(MORPHISMS, ctor, args.len(), "morphism constructor")?;
                for e in args {
                    uses(&scope, universal, e)?;
                }
                declare(&mut scope, name)?;
            }
            Stmt::Check { name, args } => {
                arity(CHECKS, name, args.len(), "check")?;
                if name.name == "ramification" && (args.len() < 3 || args.len() % 2 == 0) {
                    return Err(ParseError::binding(name.pos, "ramification takes a law and (multiplicity, class) pairs"));
                }
                for e in args {
                    uses(&scope, universal, e)?;
                }
            }
        }
    }
    Ok(())
}

fn arity(table: &[(&str, Option<usize>)], id: &Ident, n: usize, what: &str) -> Result<(), ParseError> {
    match table.iter().find(|(k, _)| *k == id.name) {
        None => Err(ParseError::binding(id.pos, format!("unknown {what} `{}`", id.name))),
        Some((_, Some(k))) if *k != n => {
            Err(ParseError::binding(id.pos, format!("{what} `{}` takes {k} arguments, got {n}", id.name)))
        }
        _ => Ok(()),
    }
}

fn check_expr(scope: &HashSet<String>, universal: bool, e: &Expr) -> Result<(), ParseError> {
    match e {
        Expr::Int(_) | Expr::Rat(..) => Ok(()),
        Expr::Name(id) => {
            if scope.contains(&id.name) || (universal && is_universal_coefficient(&id.name)) {
                Ok(())
            } else {
                Err(ParseError::binding(id.pos, format!("`{}` is not declared", id.name)))
            }
        }
        Expr::Neg(a) | Expr::Pow(a, _) => check_expr(scope, universal, a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            check_expr(scope, universal, a)?;
            check_expr(scope, universal, b)
        }
        Expr::Call(f, args) => {
            let table: Vec<(&str, Option<usize>)> = FUNCTIONS.iter().map(|(k, n)| (*k, Some(*n))).collect();
            arity(&table, f, args.len(), "function")?;
            args.iter().try_for_each(|a| check_expr(scope, universal, a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorKind;

    #[test]
    fn statements() {
        let s = parse("ring R[x: deg 1 nilp 2] cap 5").unwrap();
        assert_eq!(s.statements.len(), 1);
        let s = parse("ring R[x: deg 1, b: deg -1] cap 5\nfgl M = multiplicative(1)\nlet u = fsum(M, x, x)").unwrap();
        assert!(matches!(&s.statements[1], Stmt::Fgl { law: FglDecl::Multiplicative(Expr::Int(_)), .. }));
        let s = parse("ring R[x: deg 1] cap 3 bundle E = [x, 2*x] - [x]").unwrap();
        assert!(matches!(&s.statements[1], Stmt::Bundle { plus, minus, .. } if plus.len() == 2 && minus.len() == 1));
        assert!(parse("").unwrap().statements.is_empty());
    }

    #[test]
    fn precedence() {
        let s = parse("ring R[x: deg 1] cap 3 let u = -x^2 + 2*x - 1/2").unwrap();
        let Stmt::Let { expr, .. } = &s.statements[1] else { panic!() };
        let Expr::Sub(lhs, rhs) = expr else { panic!("{expr:?}") };
        assert!(matches!(**rhs, Expr::Rat(..)));
        let Expr::Add(neg, _) = &**lhs else { panic!() };
        assert!(matches!(&**neg, Expr::Neg(p) if matches!(**p, Expr::Pow(_, 2))));
    }

    #[test]
    fn syntax_errors_report_expected_tokens() {
        let e = parse("ring R[x: deg 1] cap 3\nlet = x").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Syntax, Pos { line: 2, col: 5 }));
        assert_eq!(e.expected, set(&["NAME"]));
        let e = parse("ring R[x deg 1] cap 3").unwrap_err();
        assert_eq!(e.expected, set(&["`:`"]));
        let e = parse("let u = (1 + ").unwrap_err();
        assert!(e.expected.contains("INT") && e.message.contains("end of input"));
        assert_eq!(e.to_string(), "1:14: syntax error: unexpected end of input; expected one of INT, NAME, RATIONAL, `(`, `-`");
    }

    #[test]
    fn binding_errors() {
        let e = parse("ring R[x: deg 1] cap 3\nlet u = y").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Binding, Pos { line: 2, col: 9 }));
        let e = parse("ring R[x: deg 1] cap 3 let x = 1").unwrap_err();
        assert!(e.message.contains("already declared"));
        assert!(parse("ring R[x: deg 1] cap 3 check nope(x)").is_err());
        assert!(parse("ring R[x: deg 1] cap 3 let u = fsum(x)").is_err());
        assert!(parse("ring R[x: deg 1] cap 3 let u = a11").is_err());
        assert!(parse("ring R[x: deg 1] cap 3 fgl U = universal let u = a11*x").is_ok());
    }
}
