//! Grammar data model.
//!
//! A grammar is built from two kinds of string-matching constructs:
//! [`Pattern`]s, which match a prefix of the input and bind variables, and
//! [`Reducible`]s, which match a prefix and reduce it to a single number.
//! Values are always `f64`.
//!
//! Grammars are assembled through the constructor functions in this module:
//!
//! ```
//! use fbnf::grammar::*;
//!
//! // sum ::= (a=digit, '+', b=digit) {a+b}
//! let g = Grammar::new("adder", "sum")
//!     .rule(Rule::new("sum", value(seq([bind("a", nt("digit")), t("+"), bind("b", nt("digit"))]), var("a") + var("b"))))
//!     .rule(Rule::new("digit", value(t("1"), num(1.0))))
//!     .rule(Rule::new("digit", value(t("2"), num(2.0))));
//! assert_eq!(g.rules.len(), 3);
//! ```

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn apply(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            BinOp::Add => lhs + rhs,
            BinOp::Sub => lhs - rhs,
            BinOp::Mul => lhs * rhs,
            BinOp::Div => lhs / rhs,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Numeric expression attached to a [`Reducible::Value`] or passed as a rule argument.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Variable bound by a [`Pattern::Named`].
    Var(String),
    /// Formal argument of the enclosing rule.
    Arg(String),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Builtin function application.
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Pattern {
    Terminal(String),
    Empty,
    Concat(Box<Pattern>, Box<Pattern>),
    Named(String, Box<Reducible>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Reducible {
    /// Matches the pattern, then evaluates the expression over its bindings.
    Value(Pattern, Expr),
    NonTerminal(String, Vec<Expr>),
    /// Ordered choice: every left result precedes every right result.
    Alt(Box<Reducible>, Box<Reducible>),
}

/// A production rule. Rules sharing a name and arity are tried in grammar order.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub name: String,
    pub params: Vec<String>,
    pub body: Reducible,
    pub feature: Option<String>,
}

impl Rule {
    pub fn new(name: impl Into<String>, body: Reducible) -> Self {
        Rule {
            name: name.into(),
            params: Vec::new(),
            body,
            feature: None,
        }
    }

    pub fn params<I, S>(mut self, params: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.params = params.into_iter().map(Into::into).collect();
        self
    }

    /// Gate this rule behind a product-line feature.
    pub fn feature(mut self, feature: impl Into<String>) -> Self {
        self.feature = Some(feature.into());
        self
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grammar {
    pub name: String,
    pub rules: Vec<Rule>,
    pub start: String,
}

impl Grammar {
    pub fn new(name: impl Into<String>, start: impl Into<String>) -> Self {
        Grammar {
            name: name.into(),
            rules: Vec::new(),
            start: start.into(),
        }
    }

    pub fn rule(mut self, rule: Rule) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn rules_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.name == name)
    }

    /// Distinct rule names in order of first appearance.
    pub fn rule_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for rule in &self.rules {
            if !names.contains(&rule.name.as_str()) {
                names.push(&rule.name);
            }
        }
        names
    }

    /// Feature names referenced by any rule, in order of first appearance.
    pub fn features(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for f in self.rules.iter().filter_map(|r| r.feature.as_deref()) {
            if !out.contains(&f) {
                out.push(f);
            }
        }
        out
    }
}

pub fn t(text: impl Into<String>) -> Pattern {
    Pattern::Terminal(text.into())
}

pub fn eps() -> Pattern {
    Pattern::Empty
}

/// Right-nested concatenation of `parts`; an empty list is [`Pattern::Empty`].
pub fn seq(parts: impl IntoIterator<Item = Pattern>) -> Pattern {
    let mut parts: Vec<Pattern> = parts.into_iter().collect();
    let Some(mut acc) = parts.pop() else {
        return Pattern::Empty;
    };
    while let Some(p) = parts.pop() {
        acc = Pattern::Concat(Box::new(p), Box::new(acc));
    }
    acc
}

pub fn bind(var: impl Into<String>, inner: Reducible) -> Pattern {
    Pattern::Named(var.into(), Box::new(inner))
}

pub fn value(pattern: Pattern, result: Expr) -> Reducible {
    Reducible::Value(pattern, result)
}

/// Reference to a rule of arity zero.
pub fn nt(rule: impl Into<String>) -> Reducible {
    Reducible::NonTerminal(rule.into(), Vec::new())
}

pub fn call_rule(rule: impl Into<String>, args: impl IntoIterator<Item = Expr>) -> Reducible {
    Reducible::NonTerminal(rule.into(), args.into_iter().collect())
}

pub fn alt(left: Reducible, right: Reducible) -> Reducible {
    Reducible::Alt(Box::new(left), Box::new(right))
}

pub fn num(v: f64) -> Expr {
    Expr::Num(v)
}

pub fn var(name: impl Into<String>) -> Expr {
    Expr::Var(name.into())
}

pub fn arg(name: impl Into<String>) -> Expr {
    Expr::Arg(name.into())
}

pub fn call(function: impl Into<String>, args: impl IntoIterator<Item = Expr>) -> Expr {
    Expr::Call(function.into(), args.into_iter().collect())
}

macro_rules! expr_op {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::Binary($op, Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_op!(Add, add, BinOp::Add);
expr_op!(Sub, sub, BinOp::Sub);
expr_op!(Mul, mul, BinOp::Mul);
expr_op!(Div, div, BinOp::Div);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(name) => f.write_str(name),
            Expr::Arg(name) => write!(f, "${name}"),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{func}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Terminal(text) => write!(f, "{text:?}"),
            Pattern::Empty => f.write_str("ε"),
            Pattern::Concat(a, b) => write!(f, "{a}, {b}"),
            Pattern::Named(v, r) => match r.as_ref() {
                Reducible::NonTerminal(..) => write!(f, "{v}={r}"),
                _ => write!(f, "{v}=[{r}]"),
            },
        }
    }
}

impl fmt::Display for Reducible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reducible::Value(p, e) => write!(f, "({p}) {{{e}}}"),
            Reducible::NonTerminal(name, args) if args.is_empty() => f.write_str(name),
            Reducible::NonTerminal(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Reducible::Alt(l, r) => write!(f, "{l} | {r}"),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            write!(f, "({})", self.params.join(", "))?;
        }
        write!(f, " ::= {}", self.body)?;
        if let Some(feature) = &self.feature {
            write!(f, "  @{feature}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grammar {} (start {})", self.name, self.start)?;
        for rule in &self.rules {
            writeln!(f, "  {rule}")?;
        }
        Ok(())
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}
