use num_bigint::BigInt;

use crate::error::Pos;

/// A name with its source position. Equality ignores the position.
#[derive(Debug, Clone, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident { name: name.into(), pos: Pos::default() }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Rat(BigInt, BigInt),
    Name(Ident),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Ident, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenDecl {
    pub name: Ident,
    pub degree: i32,
    pub nilpotency: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FglDecl {
    Additive,
    Multiplicative(Expr),
    Universal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Ring { name: Ident, gens: Vec<GenDecl>, cap: u32 },
    Fgl { name: Ident, law: FglDecl },
    Bundle { name: Ident, plus: Vec<Expr>, minus: Vec<Expr> },
    Let { name: Ident, expr: Expr },
    /// `morphism T = ctor` or `morphism T = ctor(args)`.
    Morphism { name: Ident, ctor: Ident, args: Vec<Expr> },
    Check { name: Ident, args: Vec<Expr> },
}

impl Stmt {
    pub fn pos(&self) -> Pos {
        match self {
            Stmt::Ring { name, .. }
            | Stmt::Fgl { name, .. }
            | Stmt::Bundle { name, .. }
            | Stmt::Let { name, .. }
            | Stmt::Morphism { name, .. }
            | Stmt::Check { name, .. } => name.pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub statements: Vec<Stmt>,
}

/// Expression-level functions and their arities.
pub const FUNCTIONS: &[(&str, usize)] = &[
    ("c1tensor", 3),
    ("nseries", 3),
    ("euler", 1),
    ("thom", 1),
    ("todd", 2),
    ("push_p1", 2),
    ("push_pn", 3),
    ("fsum", 3),
    ("finv", 2),
    ("chern", 2),
];

/// Check directives and their arities; `None` means variadic.
pub const CHECKS: &[(&str, Option<usize>)] = &[
    ("fgl_axioms", Some(1)),
    ("morphism", Some(1)),
    ("whitney", Some(2)),
    ("nilpotence", Some(1)),
    ("thom_mul", Some(2)),
    ("key_lemma", Some(2)),
    ("excess", Some(3)),
    ("ramification", None),
    ("self_intersection", Some(1)),
    ("degree_formula", Some(3)),
    ("degree_display_gap", Some(3)),
    ("pn_oracle_chow", Some(1)),
    ("todd_chern_relation", Some(2)),
    ("todd_multiplicative", Some(3)),
    ("grr", Some(2)),
    ("grr_p1", Some(1)),
    ("equal", Some(2)),
];

/// Morphism constructors and their arities.
pub const MORPHISMS: &[(&str, Option<usize>)] = &[("chern_character", Some(0)), ("identity", Some(1)), ("twist", None)];

pub const KEYWORDS: &[&str] = &["ring", "cap", "deg", "nilp", "fgl", "bundle", "let", "check", "morphism"];
