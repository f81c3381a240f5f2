#![allow(dead_code)]

use std::collections::BTreeMap;

use fbnf::engine::{Engine, ParseOutcome};
use fbnf::grammar::*;
use fbnf::oracle::{accepted_strings_bounded, accepted_strings_oracle, all_strings};
use fbnf::transform::eliminate_left_recursion;
use fbnf::{detect_left_recursion, validate_grammar, Builtins};
use rand::rngs::StdRng;
use rand::Rng;

pub struct Case {
    pub name: &'static str,
    pub grammar: Grammar,
    pub alphabet: &'static [char],
}

fn digit_rules(g: Grammar, name: &str, digits: &[u32]) -> Grammar {
    digits.iter().fold(g, |g, &d| {
        g.rule(Rule::new(name, value(t(d.to_string()), num(d as f64))))
    })
}

/// Small hand-written grammars covering every construct.
pub fn corpus() -> Vec<Case> {
    let mut cases = Vec::new();
    let mut add = |name, grammar, alphabet| {
        cases.push(Case {
            name,
            grammar,
            alphabet,
        })
    };

    add(
        "single-terminal",
        Grammar::new("g", "S").rule(Rule::new("S", value(t("a"), num(1.0)))),
        &['a', 'b'],
    );
    add(
        "count-with-empty-first",
        Grammar::new("g", "S")
            .rule(Rule::new("S", value(eps(), num(0.0))))
            .rule(Rule::new(
                "S",
                value(seq([t("a"), bind("x", nt("S"))]), var("x") + num(1.0)),
            )),
        &['a', 'b'],
    );
    add(
        "alternative-order",
        Grammar::new("g", "S")
            .rule(Rule::new("S", alt(value(t("a"), num(1.0)), value(t("a"), num(2.0)))))
            .rule(Rule::new("S", value(t("ab"), num(3.0)))),
        &['a', 'b'],
    );
    add(
        "ambiguous-split",
        Grammar::new("g", "S")
            .rule(Rule::new(
                "S",
                value(
                    seq([bind("x", nt("A")), bind("y", nt("A"))]),
                    var("x") * num(10.0) + var("y"),
                ),
            ))
            .rule(Rule::new("A", value(t("a"), num(1.0))))
            .rule(Rule::new("A", value(t("aa"), num(2.0))))
            .rule(Rule::new("A", value(eps(), num(0.0)))),
        &['a'],
    );
    add(
        "named-sum",
        digit_rules(
            Grammar::new("g", "S").rule(Rule::new(
                "S",
                value(
                    seq([bind("a", nt("D")), t("+"), bind("b", nt("D"))]),
                    var("a") + var("b"),
                ),
            )),
            "D",
            &[1, 2, 3],
        ),
        &['1', '2', '3', '+'],
    );
    add(
        "literal-tail-recursion",
        digit_rules(
            Grammar::new("g", "expr")
                .rule(Rule::new(
                    "expr",
                    value(
                        seq([bind("a", nt("D")), bind("s", call_rule("sfx", [var("a")]))]),
                        var("s"),
                    ),
                ))
                .rule(Rule::new("sfx", value(seq([t("-"), bind("b", nt("expr"))]), arg("a") - var("b"))).params(["a"]))
                .rule(Rule::new("sfx", value(eps(), arg("a"))).params(["a"])),
            "D",
            &[1, 2, 3],
        ),
        &['1', '2', '3', '-'],
    );
    add(
        "accumulator-subtraction",
        digit_rules(
            Grammar::new("g", "expr")
                .rule(Rule::new(
                    "expr",
                    value(
                        seq([bind("a", nt("D")), bind("s", call_rule("sub", [var("a")]))]),
                        var("s"),
                    ),
                ))
                .rule(
                    Rule::new(
                        "sub",
                        value(
                            seq([
                                t("-"),
                                bind("b", nt("D")),
                                bind("s", call_rule("sub", [arg("acc") - var("b")])),
                            ]),
                            var("s"),
                        ),
                    )
                    .params(["acc"]),
                )
                .rule(Rule::new("sub", value(eps(), arg("acc"))).params(["acc"])),
            "D",
            &[1, 2, 3],
        ),
        &['1', '2', '3', '-'],
    );
    add(
        "two-argument-rule",
        Grammar::new("g", "S")
            .rule(Rule::new(
                "S",
                value(bind("x", call_rule("P", [num(2.0), num(3.0)])), var("x")),
            ))
            .rule(
                Rule::new(
                    "P",
                    value(
                        seq([t("a"), bind("y", call_rule("P", [arg("m") * arg("k"), arg("k")]))]),
                        var("y"),
                    ),
                )
                .params(["m", "k"]),
            )
            .rule(Rule::new("P", value(t("b"), arg("m"))).params(["m", "k"])),
        &['a', 'b'],
    );
    add(
        "palindromes",
        Grammar::new("g", "S")
            .rule(Rule::new(
                "S",
                value(seq([t("a"), bind("x", nt("S")), t("a")]), var("x") + num(2.0)),
            ))
            .rule(Rule::new(
                "S",
                value(seq([t("b"), bind("x", nt("S")), t("b")]), var("x") + num(2.0)),
            ))
            .rule(Rule::new("S", value(t("c"), num(1.0))))
            .rule(Rule::new("S", value(eps(), num(0.0)))),
        &['a', 'b', 'c'],
    );
    add(
        "balanced-parens",
        Grammar::new("g", "S")
            .rule(Rule::new(
                "S",
                value(
                    seq([t("("), bind("x", nt("S")), t(")"), bind("y", nt("S"))]),
                    var("x") + num(1.0) + var("y"),
                ),
            ))
            .rule(Rule::new("S", value(eps(), num(0.0)))),
        &['(', ')'],
    );
    add(
        "nested-alternatives",
        Grammar::new("g", "S").rule(Rule::new(
            "S",
            value(
                seq([
                    bind("x", alt(value(t("a"), num(1.0)), value(t("b"), num(2.0)))),
                    bind("y", alt(value(t("a"), num(10.0)), value(t("bb"), num(20.0)))),
                ]),
                var("x") + var("y"),
            ),
        )),
        &['a', 'b'],
    );
    add(
        "builtins",
        digit_rules(
            Grammar::new("g", "S")
                .rule(Rule::new(
                    "S",
                    value(seq([t("s"), bind("x", nt("N"))]), call("sin", [var("x")])),
                ))
                .rule(Rule::new(
                    "S",
                    value(seq([t("q"), bind("x", nt("N"))]), call("sqrt", [var("x")])),
                )),
            "N",
            &[0, 1, 4],
        ),
        &['s', 'q', '0', '1', '4'],
    );
    add(
        "division-by-zero",
        digit_rules(
            Grammar::new("g", "S").rule(Rule::new(
                "S",
                value(
                    seq([bind("a", nt("N")), t("/"), bind("b", nt("N"))]),
                    var("a") / var("b"),
                ),
            )),
            "N",
            &[0, 1],
        ),
        &['0', '1', '/'],
    );
    add(
        "nullable-prefix",
        Grammar::new("g", "S")
            .rule(Rule::new("S", value(seq([bind("o", nt("Opt")), t("x")]), var("o"))))
            .rule(Rule::new("Opt", value(t("y"), num(1.0))))
            .rule(Rule::new("Opt", value(eps(), num(0.0)))),
        &['x', 'y'],
    );
    add(
        "greedy-count",
        Grammar::new("g", "S")
            .rule(Rule::new("S", value(seq([bind("n", nt("C")), t("b")]), var("n"))))
            .rule(Rule::new(
                "C",
                value(seq([t("a"), bind("c", nt("C"))]), var("c") + num(1.0)),
            ))
            .rule(Rule::new("C", value(eps(), num(0.0)))),
        &['a', 'b'],
    );
    add(
        "ambiguous-star",
        Grammar::new("g", "S")
            .rule(Rule::new(
                "S",
                value(seq([bind("x", nt("L")), bind("y", nt("L"))]), var("x") - var("y")),
            ))
            .rule(Rule::new(
                "L",
                value(seq([t("a"), bind("n", nt("L"))]), var("n") + num(1.0)),
            ))
            .rule(Rule::new("L", value(eps(), num(0.0)))),
        &['a'],
    );
    add(
        "overloaded-arity",
        Grammar::new("g", "R")
            .rule(Rule::new(
                "R",
                value(seq([t("x"), bind("v", call_rule("R", [num(5.0)]))]), var("v")),
            ))
            .rule(Rule::new("R", value(t("y"), arg("p"))).params(["p"]))
            .rule(Rule::new("R", value(t("z"), arg("p") * num(2.0))).params(["p"])),
        &['x', 'y', 'z'],
    );
    add(
        "binary-numbers",
        digit_rules(
            Grammar::new("g", "B")
                .rule(Rule::new(
                    "B",
                    value(
                        seq([bind("d", nt("Bit")), bind("s", call_rule("BS", [var("d")]))]),
                        var("s"),
                    ),
                ))
                .rule(
                    Rule::new(
                        "BS",
                        value(
                            seq([
                                bind("d", nt("Bit")),
                                bind("s", call_rule("BS", [arg("acc") * num(2.0) + var("d")])),
                            ]),
                            var("s"),
                        ),
                    )
                    .params(["acc"]),
                )
                .rule(Rule::new("BS", value(eps(), arg("acc"))).params(["acc"])),
            "Bit",
            &[0, 1],
        ),
        &['0', '1'],
    );
    add("precedence", mini_calc(), &['1', '2', '+', '*']);
    add(
        "overlapping-terminals",
        Grammar::new("g", "S")
            .rule(Rule::new("S", value(t("ab"), num(1.0))))
            .rule(Rule::new("S", value(seq([t("a"), t("b")]), num(2.0))))
            .rule(Rule::new(
                "S",
                value(seq([t("a"), bind("x", nt("S"))]), var("x") + num(10.0)),
            )),
        &['a', 'b'],
    );
    add(
        "empty-string-only",
        Grammar::new("g", "S").rule(Rule::new("S", value(eps(), num(42.0)))),
        &['a'],
    );
    add(
        "empty-language",
        Grammar::new("g", "S").rule(Rule::new("S", value(seq([t("a"), bind("x", nt("S"))]), var("x")))),
        &['a', 'b'],
    );
    add(
        "nested-value-feeds-argument",
        Grammar::new("g", "S")
            .rule(Rule::new(
                "S",
                value(
                    seq([
                        bind("x", value(t("a"), num(1.0))),
                        bind("y", call_rule("K", [var("x")])),
                    ]),
                    var("y"),
                ),
            ))
            .rule(
                Rule::new(
                    "K",
                    value(
                        seq([t("b"), bind("z", call_rule("K", [arg("p") * num(3.0)]))]),
                        var("z"),
                    ),
                )
                .params(["p"]),
            )
            .rule(Rule::new("K", value(eps(), arg("p"))).params(["p"])),
        &['a', 'b'],
    );
    cases
}

/// E ::= T ('+' T)*,  T ::= D ('*' D)*  in accumulator form, digits 1 and 2.
pub fn mini_calc() -> Grammar {
    let g = Grammar::new("g", "E")
        .rule(Rule::new(
            "E",
            value(
                seq([bind("a", nt("T")), bind("s", call_rule("ES", [var("a")]))]),
                var("s"),
            ),
        ))
        .rule(
            Rule::new(
                "ES",
                value(
                    seq([
                        t("+"),
                        bind("b", nt("T")),
                        bind("s", call_rule("ES", [arg("acc") + var("b")])),
                    ]),
                    var("s"),
                ),
            )
            .params(["acc"]),
        )
        .rule(Rule::new("ES", value(eps(), arg("acc"))).params(["acc"]))
        .rule(Rule::new(
            "T",
            value(
                seq([bind("a", nt("D")), bind("s", call_rule("TS", [var("a")]))]),
                var("s"),
            ),
        ))
        .rule(
            Rule::new(
                "TS",
                value(
                    seq([
                        t("*"),
                        bind("b", nt("D")),
                        bind("s", call_rule("TS", [arg("acc") * var("b")])),
                    ]),
                    var("s"),
                ),
            )
            .params(["acc"]),
        )
        .rule(Rule::new("TS", value(eps(), arg("acc"))).params(["acc"]));
    digit_rules(g, "D", &[1, 2])
}

/// expr ::= (a=expr, '+', b=multExpr) {a+b} | (m=multExpr) {m}
pub fn head_recursive_plus(digits: &[u32]) -> Grammar {
    let g = Grammar::new("eq2", "expr")
        .rule(Rule::new(
            "expr",
            value(
                seq([bind("a", nt("expr")), t("+"), bind("b", nt("multExpr"))]),
                var("a") + var("b"),
            ),
        ))
        .rule(Rule::new("expr", value(bind("m", nt("multExpr")), var("m"))));
    digit_rules(g, "multExpr", digits)
}

/// Head-recursive '-' and '/' over single digits.
pub fn head_recursive_sub_div(digits: &[u32]) -> Grammar {
    let g = Grammar::new("subdiv", "expr")
        .rule(Rule::new(
            "expr",
            value(
                seq([bind("a", nt("expr")), t("-"), bind("b", nt("term"))]),
                var("a") - var("b"),
            ),
        ))
        .rule(Rule::new(
            "expr",
            value(
                seq([bind("a", nt("expr")), t("/"), bind("b", nt("term"))]),
                var("a") / var("b"),
            ),
        ))
        .rule(Rule::new("expr", value(bind("t", nt("term")), var("t"))));
    digit_rules(g, "term", digits)
}

/// The tail-recursive rewrite as literally printed: the suffix re-derives a
/// whole expression, so values associate to the right.
pub fn literal_tail_sub(digits: &[u32]) -> Grammar {
    let g = Grammar::new("literal", "expr")
        .rule(Rule::new(
            "expr",
            value(
                seq([bind("a", nt("term")), bind("s", call_rule("exprSuffix", [var("a")]))]),
                var("s"),
            ),
        ))
        .rule(
            Rule::new(
                "exprSuffix",
                value(seq([t("-"), bind("b", nt("expr"))]), arg("a") - var("b")),
            )
            .params(["a"]),
        )
        .rule(Rule::new("exprSuffix", value(eps(), arg("a"))).params(["a"]));
    digit_rules(g, "term", digits)
}

/// Left fold of `d op d op d …` over single digits, or `None` if `s` is not
/// of that shape.
pub fn left_fold(s: &str) -> Option<f64> {
    let chars: Vec<char> = s.chars().collect();
    if chars.is_empty() || chars.len().is_multiple_of(2) {
        return None;
    }
    let mut acc = chars[0].to_digit(10)? as f64;
    for pair in chars[1..].chunks(2) {
        let d = pair[1].to_digit(10)? as f64;
        acc = match pair[0] {
            '+' => acc + d,
            '-' => acc - d,
            '*' => acc * d,
            '/' => acc / d,
            _ => return None,
        };
    }
    Some(acc)
}

pub fn same_value(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}

// ---------------------------------------------------------------------------
// Reference evaluator for the basic calculator: tokenizer + shunting-yard.

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Op(char),
    Open,
    Close,
}

fn tokenize(s: &str) -> Option<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().ok()?));
            continue;
        }
        out.push(match c {
            '+' | '-' | '*' | '/' => Tok::Op(c),
            '(' => Tok::Open,
            ')' => Tok::Close,
            _ => return None,
        });
        i += 1;
    }
    Some(out)
}

fn precedence(op: char) -> u8 {
    if op == '+' || op == '-' {
        1
    } else {
        2
    }
}

/// Evaluates a well-formed expression with standard precedence and left
/// associativity.
pub fn shunting_yard(s: &str) -> Option<f64> {
    let mut output: Vec<f64> = Vec::new();
    let mut ops: Vec<Tok> = Vec::new();
    fn apply(output: &mut Vec<f64>, op: char) -> Option<()> {
        let r = output.pop()?;
        let l = output.pop()?;
        output.push(match op {
            '+' => l + r,
            '-' => l - r,
            '*' => l * r,
            _ => l / r,
        });
        Some(())
    }
    for tok in tokenize(s)? {
        match tok {
            Tok::Num(v) => output.push(v),
            Tok::Op(o) => {
                while let Some(&Tok::Op(top)) = ops.last() {
                    if precedence(top) >= precedence(o) {
                        ops.pop();
                        apply(&mut output, top)?;
                    } else {
                        break;
                    }
                }
                ops.push(tok);
            }
            Tok::Open => ops.push(tok),
            Tok::Close => loop {
                match ops.pop()? {
                    Tok::Open => break,
                    Tok::Op(o) => apply(&mut output, o)?,
                    _ => return None,
                }
            },
        }
    }
    while let Some(tok) = ops.pop() {
        match tok {
            Tok::Op(o) => apply(&mut output, o)?,
            _ => return None,
        }
    }
    (output.len() == 1).then(|| output[0])
}

/// A random well-formed expression over non-negative decimals, `+ - * /`
/// and parentheses.
pub fn random_expression(rng: &mut StdRng, depth: u32) -> String {
    let terms = rng.gen_range(1..=4);
    let mut s = String::new();
    for i in 0..terms {
        if i > 0 {
            s.push(['+', '-', '*', '/'][rng.gen_range(0..4)]);
        }
        if depth > 0 && rng.gen_bool(0.25) {
            s.push('(');
            s.push_str(&random_expression(rng, depth - 1));
            s.push(')');
        } else {
            s.push_str(&rng.gen_range(0..1000u32).to_string());
            if rng.gen_bool(0.3) {
                s.push('.');
                s.push_str(&rng.gen_range(0..100u32).to_string());
            }
        }
    }
    s
}

// ---------------------------------------------------------------------------
// Random grammars.

pub const RANDOM_ALPHABET: [char; 2] = ['a', 'b'];

struct Gen<'r> {
    rng: &'r mut StdRng,
    arities: Vec<usize>,
    var_counter: usize,
}

impl Gen<'_> {
    fn expr(&mut self, vars: &[String], params: &[String], depth: u32) -> Expr {
        let choice = self.rng.gen_range(0..if depth == 0 { 3 } else { 5 });
        match choice {
            1 if !vars.is_empty() => var(vars[self.rng.gen_range(0..vars.len())].clone()),
            2 if !params.is_empty() => arg(params[self.rng.gen_range(0..params.len())].clone()),
            3 => {
                let l = self.expr(vars, params, depth - 1);
                let r = self.expr(vars, params, depth - 1);
                match self.rng.gen_range(0..4) {
                    0 => l + r,
                    1 => l - r,
                    2 => l * r,
                    _ => l / r,
                }
            }
            4 => call("abs", [self.expr(vars, params, depth - 1)]),
            _ => num(self.rng.gen_range(0..5) as f64),
        }
    }

    fn reducible(&mut self, visible: &[String], params: &[String], depth: u32) -> Reducible {
        let choice = self.rng.gen_range(0..if depth == 0 { 2 } else { 4 });
        match choice {
            0 => {
                let n = self.rng.gen_range(0..self.arities.len());
                let args = (0..self.arities[n])
                    .map(|_| self.expr(visible, params, 1))
                    .collect::<Vec<_>>();
                Reducible::NonTerminal(format!("r{n}"), args)
            }
            1 => {
                let mut bound = Vec::new();
                let p = self.pattern(&mut bound, params, depth.saturating_sub(1));
                let e = self.expr(&bound, params, 2);
                value(p, e)
            }
            2 => alt(
                self.reducible(visible, params, depth - 1),
                self.reducible(visible, params, depth - 1),
            ),
            _ => {
                let mut bound = Vec::new();
                let p = self.pattern(&mut bound, params, depth - 1);
                let e = self.expr(&bound, params, 2);
                value(p, e)
            }
        }
    }

    fn pattern(&mut self, bound: &mut Vec<String>, params: &[String], depth: u32) -> Pattern {
        match self.rng.gen_range(0..if depth == 0 { 2 } else { 4 }) {
            0 => {
                let len = self.rng.gen_range(1..=2);
                t((0..len)
                    .map(|_| RANDOM_ALPHABET[self.rng.gen_range(0..2)])
                    .collect::<String>())
            }
            1 => eps(),
            2 => {
                let a = self.pattern(bound, params, depth - 1);
                let b = self.pattern(bound, params, depth - 1);
                Pattern::Concat(Box::new(a), Box::new(b))
            }
            _ => {
                let inner = self.reducible(bound, params, depth - 1);
                self.var_counter += 1;
                let v = format!("v{}", self.var_counter);
                bound.push(v.clone());
                bind(v, inner)
            }
        }
    }
}

/// A random grammar over rule names `r0..rN` with start `r0`. Most are valid;
/// callers filter with `validate_grammar`.
pub fn random_grammar(rng: &mut StdRng) -> Grammar {
    let names = rng.gen_range(1..=3);
    let mut arities = vec![0];
    for _ in 1..names {
        arities.push(rng.gen_range(0..=1));
    }
    let mut gen = Gen {
        rng,
        arities: arities.clone(),
        var_counter: 0,
    };
    let mut g = Grammar::new("random", "r0");
    for (n, &arity) in arities.iter().enumerate() {
        let params: Vec<String> = (0..arity).map(|i| format!("p{i}")).collect();
        let count = gen.rng.gen_range(1..=2);
        for _ in 0..count {
            let body = gen.reducible(&[], &params, 3);
            g = g.rule(Rule::new(format!("r{n}"), body).params(params.clone()));
        }
    }
    g
}

/// A random string over [`RANDOM_ALPHABET`].
pub fn random_input(rng: &mut StdRng, max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| RANDOM_ALPHABET[rng.gen_range(0..2)]).collect()
}

pub const BOUND: usize = 12;

/// Checks language and value preservation of the rewrite of `g` over all
/// strings up to `max_len`, against both the bounded oracle on `g` and a
/// direct left fold.
pub fn check_preserved(g: &Grammar, alphabet: &[char], max_len: usize) -> usize {
    let b = Builtins::empty();
    let out = eliminate_left_recursion(g).unwrap();
    assert!(validate_grammar(&out, &b).is_empty());
    assert!(detect_left_recursion(&out).is_empty());
    assert_eq!(eliminate_left_recursion(&out).unwrap(), out);

    let before: BTreeMap<String, f64> = accepted_strings_bounded(g, &b, alphabet, max_len, BOUND)
        .unwrap()
        .into_iter()
        .collect();
    let after: BTreeMap<String, f64> = accepted_strings_oracle(&out, &b, alphabet, max_len)
        .unwrap()
        .into_iter()
        .collect();
    assert_eq!(before.keys().collect::<Vec<_>>(), after.keys().collect::<Vec<_>>());

    let engine = Engine::new(&out, &b);
    for s in all_strings(alphabet, max_len) {
        let parsed = engine.parse_full(&s).unwrap();
        match (before.get(&s), parsed) {
            (None, ParseOutcome::SyntaxError { budget_exceeded: false }) => {}
            (Some(&v), ParseOutcome::Value(w)) => {
                assert!(same_value(v, w), "{s}: {v} vs {w}");
                assert!(same_value(after[&s], w));
                let folded = left_fold(&s).expect("accepted strings are digit/operator chains");
                assert!(same_value(folded, w), "{s}: left fold {folded} vs {w}");
            }
            other => panic!("{s}: {other:?}"),
        }
    }
    before.len()
}

/// Expected product output: a value, or `None` for a syntax error.
pub struct Golden {
    pub product: &'static str,
    pub input: &'static str,
    pub expected: Option<f64>,
}

const fn ok(product: &'static str, input: &'static str, v: f64) -> Golden {
    Golden {
        product,
        input,
        expected: Some(v),
    }
}

const fn rejected(product: &'static str, input: &'static str) -> Golden {
    Golden {
        product,
        input,
        expected: None,
    }
}

pub fn golden() -> Vec<Golden> {
    vec![
        ok("basic", "7", 7.0),
        ok("basic", "1+2", 3.0),
        ok("basic", "12+30", 42.0),
        ok("basic", "9-4", 5.0),
        ok("basic", "6*7", 42.0),
        ok("basic", "9/3", 3.0),
        ok("basic", "1+2*3", 7.0),
        ok("basic", "2*3+1", 7.0),
        ok("basic", "10-4/2", 8.0),
        ok("basic", "(1+2)*3", 9.0),
        ok("basic", "2*(3+4)", 14.0),
        ok("basic", "((5))", 5.0),
        ok("basic", "8-3-2", 3.0),
        ok("basic", "8/2/2", 2.0),
        ok("basic", "2-3+4", 3.0),
        ok("basic", "1.5+1.5", 3.0),
        ok("basic", "0.25*4", 1.0),
        ok("basic", "007", 7.0),
        ok("basic", "1/0", f64::INFINITY),
        ok("basic", "0/0", f64::NAN),
        rejected("basic", ""),
        rejected("basic", "1+"),
        rejected("basic", "+1"),
        rejected("basic", "-3"),
        rejected("basic", "(1+2"),
        rejected("basic", "1+2)"),
        rejected("basic", "1 + 2"),
        rejected("basic", "1..2"),
        rejected("basic", ".5"),
        rejected("basic", "2**3"),
        rejected("basic", "sin(0)"),
        rejected("basic", "10%"),
        rejected("basic", "FF"),
        ok("scientific", "sin(0)", 0.0),
        ok("scientific", "cos(0)", 1.0),
        ok("scientific", "tan(0)+2", 2.0),
        ok("scientific", "2*cos(0)", 2.0),
        ok("scientific", "sin(1-1)*5", 0.0),
        ok("scientific", "1+2*3", 7.0),
        rejected("scientific", "sin 0"),
        rejected("scientific", "sin(0"),
        rejected("scientific", "10%"),
        rejected("scientific", "log(1)"),
        ok("financial", "10%", 0.1),
        ok("financial", "50+10%", 50.1),
        ok("financial", "200*5%", 10.0),
        ok("financial", "(20+30)%", 0.5),
        ok("financial", "8-3-2", 3.0),
        rejected("financial", "%"),
        rejected("financial", "10%%"),
        rejected("financial", "sin(0)"),
        ok("hex", "FF", 255.0),
        ok("hex", "FF+1", 256.0),
        ok("hex", "10", 16.0),
        ok("hex", "A*2", 20.0),
        ok("hex", "(F-5)/2", 5.0),
        ok("hex", "1.5", 1.5),
        rejected("hex", "ff"),
        rejected("hex", "G"),
        rejected("hex", "0x1F"),
        rejected("hex", "FF%"),
    ]
}

// ---------------------------------------------------------------------------
// Binding isolation across Alternative.

/// probe(u, w) ::= ('a') {u*100+w} | (ε) {u+w}
pub fn probe_grammar() -> Grammar {
    Grammar::new("probe", "probe")
        .rule(Rule::new("probe", value(t("a"), arg("u") * num(100.0) + arg("w"))).params(["u", "w"]))
        .rule(Rule::new("probe", value(eps(), arg("u") + arg("w"))).params(["u", "w"]))
}

/// A left branch that binds `x` and `y` (possibly failing), built from a seed.
pub fn left_branch(rng: &mut StdRng) -> Reducible {
    let mut parts = Vec::new();
    for name in ["x", "y"] {
        if rng.gen_bool(0.7) {
            parts.push(bind(
                name,
                value(
                    if rng.gen_bool(0.5) { t("a") } else { eps() },
                    num(rng.gen_range(-9..9) as f64),
                ),
            ));
        }
    }
    match rng.gen_range(0..3) {
        0 => parts.push(t("zz")), // cannot match: the branch fails after binding
        1 => parts.push(t("a")),
        _ => {}
    }
    let result = if parts.iter().any(|p| matches!(p, Pattern::Named(v, _) if v == "x")) {
        var("x")
    } else {
        num(0.0)
    };
    value(seq(parts), result)
}

/// A right branch that reads `x` and `y` from the incoming environment.
pub fn right_branch(rng: &mut StdRng) -> Reducible {
    let probe = call_rule("probe", [var("x"), var("y") * num(rng.gen_range(1..4) as f64)]);
    if rng.gen_bool(0.5) {
        probe
    } else {
        alt(value(t("a"), var("x")), probe)
    }
}
