//! The calculator product line.
//!
//! One rule pool serves every product. Unannotated rules form the basic
//! four-function calculator; the `scientific`, `financial` and `hexadecimal`
//! features add rules on top of it:
//!
//! | feature       | adds                                                   |
//! |---------------|--------------------------------------------------------|
//! | `scientific`  | `sin(x)`, `cos(x)`, `tan(x)`, radians                  |
//! | `financial`   | postfix `%` on a factor, `v%` is `v/100`               |
//! | `hexadecimal` | numbers over `0-9A-F`, tried before decimal numbers    |
//!
//! Operators are left associative and `*` `/` bind tighter than `+` `-`.
//! There is no unary minus and no whitespace.
//!
//! Fractional numbers come from unannotated rules, so a hexadecimal product
//! still accepts `1.5` (as decimal) once the hexadecimal reading fails.

use crate::builtins::Builtins;
use crate::engine::{Engine, EngineError, ParseOutcome};
use crate::grammar::*;
use crate::spl::{filter_by_features, FeatureConfig, FilterError};

pub const SCIENTIFIC: &str = "scientific";
pub const FINANCIAL: &str = "financial";
pub const HEXADECIMAL: &str = "hexadecimal";

/// Named presets accepted by the command line.
pub const PRODUCTS: [(&str, &[&str]); 4] = [
    ("basic", &[]),
    ("scientific", &[SCIENTIFIC]),
    ("financial", &[FINANCIAL]),
    ("hex", &[HEXADECIMAL]),
];

pub fn product_config(name: &str) -> Option<FeatureConfig> {
    PRODUCTS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, features)| FeatureConfig::new(*n, features.iter().copied()))
}

pub fn calculator_builtins() -> Builtins {
    Builtins::standard()
}

/// `name(acc) ::= (op, b=operand, s=name(acc <op> b)) {s}`
fn suffix_step(name: &str, op: &str, operand: &str, combine: fn(Expr, Expr) -> Expr) -> Rule {
    Rule::new(
        name,
        value(
            seq([
                t(op),
                bind("b", nt(operand)),
                bind("s", call_rule(name, [combine(arg("acc"), var("b"))])),
            ]),
            var("s"),
        ),
    )
    .params(["acc"])
}

fn suffix_end(name: &str) -> Rule {
    Rule::new(name, value(eps(), arg("acc"))).params(["acc"])
}

/// `name ::= (a=operand, s=suffix(a)) {s}`
fn stratum(name: &str, operand: &str, suffix: &str) -> Rule {
    Rule::new(
        name,
        value(
            seq([bind("a", nt(operand)), bind("s", call_rule(suffix, [var("a")]))]),
            var("s"),
        ),
    )
}

fn unary_function(name: &str) -> Rule {
    Rule::new(
        "primary",
        value(
            seq([t(format!("{name}(")), bind("e", nt("expr")), t(")")]),
            call(name, [var("e")]),
        ),
    )
    .feature(SCIENTIFIC)
}

pub fn calculator_pool() -> Grammar {
    let mut g = Grammar::new("calculator", "expr")
        .rule(stratum("expr", "multExpr", "exprSuffix"))
        .rule(suffix_step("exprSuffix", "+", "multExpr", |a, b| a + b))
        .rule(suffix_step("exprSuffix", "-", "multExpr", |a, b| a - b))
        .rule(suffix_end("exprSuffix"))
        .rule(stratum("multExpr", "factor", "multSuffix"))
        .rule(suffix_step("multSuffix", "*", "factor", |a, b| a * b))
        .rule(suffix_step("multSuffix", "/", "factor", |a, b| a / b))
        .rule(suffix_end("multSuffix"))
        .rule(
            Rule::new(
                "factor",
                value(seq([bind("a", nt("primary")), t("%")]), var("a") / num(100.0)),
            )
            .feature(FINANCIAL),
        )
        .rule(Rule::new("factor", value(bind("a", nt("primary")), var("a"))))
        .rule(Rule::new(
            "primary",
            value(seq([t("("), bind("e", nt("expr")), t(")")]), var("e")),
        ))
        .rule(unary_function("sin"))
        .rule(unary_function("cos"))
        .rule(unary_function("tan"))
        .rule(Rule::new("primary", value(bind("n", nt("number")), var("n"))))
        // Hexadecimal bridge first: "10" reads as sixteen in a hex product.
        .rule(Rule::new("number", value(bind("n", nt("hexNumber")), var("n"))).feature(HEXADECIMAL))
        .rule(Rule::new(
            "number",
            value(
                seq([
                    bind("i", nt("integer")),
                    t("."),
                    bind("f", call_rule("fraction", [var("i"), num(1.0)])),
                ]),
                var("f"),
            ),
        ))
        .rule(Rule::new("number", value(bind("i", nt("integer")), var("i"))))
        .rule(stratum("integer", "digit", "intSuffix"))
        .rule(
            Rule::new(
                "intSuffix",
                value(
                    seq([
                        bind("d", nt("digit")),
                        bind("s", call_rule("intSuffix", [arg("acc") * num(10.0) + var("d")])),
                    ]),
                    var("s"),
                ),
            )
            .params(["acc"]),
        )
        .rule(suffix_end("intSuffix"))
        // fraction(acc, den): digits so far as an integer over a power of ten;
        // a single final division keeps the result correctly rounded.
        .rule(
            Rule::new(
                "fraction",
                value(
                    seq([
                        bind("d", nt("digit")),
                        bind(
                            "s",
                            call_rule("fraction", [arg("acc") * num(10.0) + var("d"), arg("den") * num(10.0)]),
                        ),
                    ]),
                    var("s"),
                ),
            )
            .params(["acc", "den"]),
        )
        .rule(
            Rule::new(
                "fraction",
                value(
                    bind("d", nt("digit")),
                    (arg("acc") * num(10.0) + var("d")) / (arg("den") * num(10.0)),
                ),
            )
            .params(["acc", "den"]),
        );

    for d in 0..10 {
        g = g.rule(Rule::new("digit", value(t(d.to_string()), num(d as f64))));
    }

    g = g
        .rule(stratum("hexNumber", "hexDigit", "hexSuffix").feature(HEXADECIMAL))
        .rule(
            Rule::new(
                "hexSuffix",
                value(
                    seq([
                        bind("d", nt("hexDigit")),
                        bind("s", call_rule("hexSuffix", [arg("acc") * num(16.0) + var("d")])),
                    ]),
                    var("s"),
                ),
            )
            .params(["acc"])
            .feature(HEXADECIMAL),
        )
        .rule(suffix_end("hexSuffix").feature(HEXADECIMAL));
    for (v, c) in "0123456789ABCDEF".chars().enumerate() {
        g = g.rule(Rule::new("hexDigit", value(t(c.to_string()), num(v as f64))).feature(HEXADECIMAL));
    }
    g
}

/// The product grammar for `config`: the pool filtered by its features.
pub fn build_product(config: &FeatureConfig) -> Result<Grammar, FilterError> {
    let mut product = filter_by_features(&calculator_pool(), config, &calculator_builtins())?;
    product.name = config.product_name.clone();
    Ok(product)
}

/// A built product ready to evaluate input lines.
pub struct Calculator {
    grammar: Grammar,
    builtins: Builtins,
}

impl Calculator {
    pub fn new(config: &FeatureConfig) -> Result<Self, FilterError> {
        Ok(Calculator {
            grammar: build_product(config)?,
            builtins: calculator_builtins(),
        })
    }

    pub fn preset(name: &str) -> Option<Self> {
        product_config(name).map(|c| Self::new(&c).expect("presets are valid products"))
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn evaluate(&self, input: &str) -> Result<ParseOutcome, EngineError> {
        Engine::new(&self.grammar, &self.builtins).parse_full(input)
    }
}
