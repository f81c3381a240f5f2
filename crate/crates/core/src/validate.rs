//! Static checks over a [`Grammar`]: name resolution, arity, variable scoping,
//! and the leftmost-reference analysis used to find head recursion.
//!
//! Every value is an `f64`, so type checking is nothing more than resolving
//! names and counting arguments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::builtins::Builtins;
use crate::grammar::{Expr, Grammar, Pattern, Reducible};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticCode {
    NoStartRule,
    DuplicateParam,
    UndefinedNonterminal,
    ArityMismatch,
    UnboundVariable,
    UnknownBuiltin,
    VariableShadowing,
    LeftRecursion,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::NoStartRule => "NO_START_RULE",
            DiagnosticCode::DuplicateParam => "DUPLICATE_PARAM",
            DiagnosticCode::UndefinedNonterminal => "UNDEFINED_NONTERMINAL",
            DiagnosticCode::ArityMismatch => "ARITY_MISMATCH",
            DiagnosticCode::UnboundVariable => "UNBOUND_VARIABLE",
            DiagnosticCode::UnknownBuiltin => "UNKNOWN_BUILTIN",
            DiagnosticCode::VariableShadowing => "VARIABLE_SHADOWING",
            DiagnosticCode::LeftRecursion => "LEFT_RECURSION",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: Option<String>,
    pub message: String,
    pub code: DiagnosticCode,
}

impl Diagnostic {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]", self.code)?;
        if let Some(rule) = &self.rule {
            write!(f, " in rule `{rule}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// Checks `grammar` against the builtins it may call. An empty result means
/// the grammar is well formed; every violation yields exactly one diagnostic.
/// Left recursion is not reported here, see [`detect_left_recursion`].
pub fn validate_grammar(grammar: &Grammar, builtins: &Builtins) -> Vec<Diagnostic> {
    let mut checker = Checker {
        grammar,
        builtins,
        rule: "",
        params: &[],
        out: Vec::new(),
    };

    if !grammar.rules_named(&grammar.start).any(|r| r.params.is_empty()) {
        checker.out.push(Diagnostic {
            severity: Severity::Error,
            rule: None,
            message: format!("start symbol `{}` names no rule of arity 0", grammar.start),
            code: DiagnosticCode::NoStartRule,
        });
    }

    for rule in &grammar.rules {
        checker.rule = &rule.name;
        checker.params = &rule.params;
        for (i, p) in rule.params.iter().enumerate() {
            if rule.params[..i].contains(p) {
                checker.error(
                    DiagnosticCode::DuplicateParam,
                    format!("parameter `{p}` is declared more than once"),
                );
            }
        }
        checker.reducible(&rule.body, &[]);
    }
    checker.out
}

struct Checker<'a> {
    grammar: &'a Grammar,
    builtins: &'a Builtins,
    rule: &'a str,
    params: &'a [String],
    out: Vec<Diagnostic>,
}

impl<'a> Checker<'a> {
    fn error(&mut self, code: DiagnosticCode, message: String) {
        self.out.push(Diagnostic {
            severity: Severity::Error,
            rule: Some(self.rule.to_string()),
            message,
            code,
        });
    }

    /// `visible` holds the variables an argument expression may read here.
    fn reducible(&mut self, r: &'a Reducible, visible: &[&'a str]) {
        match r {
            Reducible::Value(pattern, result) => {
                let mut bound = Vec::new();
                self.pattern(pattern, &mut bound);
                self.expr(result, &bound);
            }
            Reducible::NonTerminal(name, args) => {
                for a in args {
                    self.expr(a, visible);
                }
                let mut arities = self.grammar.rules_named(name).map(|r| r.arity()).peekable();
                if arities.peek().is_none() {
                    self.error(
                        DiagnosticCode::UndefinedNonterminal,
                        format!("reference to undefined rule `{name}`"),
                    );
                } else if !arities.any(|n| n == args.len()) {
                    self.error(
                        DiagnosticCode::ArityMismatch,
                        format!("no rule `{name}` takes {} argument(s)", args.len()),
                    );
                }
            }
            Reducible::Alt(l, r) => {
                self.reducible(l, visible);
                self.reducible(r, visible);
            }
        }
    }

    /// Walks a pattern left to right, pushing each variable it binds.
    fn pattern(&mut self, p: &'a Pattern, bound: &mut Vec<&'a str>) {
        match p {
            Pattern::Terminal(_) | Pattern::Empty => {}
            Pattern::Concat(a, b) => {
                self.pattern(a, bound);
                self.pattern(b, bound);
            }
            Pattern::Named(v, inner) => {
                self.reducible(inner, bound);
                if bound.contains(&v.as_str()) {
                    self.error(
                        DiagnosticCode::VariableShadowing,
                        format!("variable `{v}` is bound twice in one pattern"),
                    );
                } else {
                    bound.push(v);
                }
            }
        }
    }

    fn expr(&mut self, e: &Expr, vars: &[&str]) {
        match e {
            Expr::Num(_) => {}
            Expr::Var(name) => {
                if !vars.contains(&name.as_str()) {
                    self.error(
                        DiagnosticCode::UnboundVariable,
                        format!("variable `{name}` is not bound here"),
                    );
                }
            }
            Expr::Arg(name) => {
                if !self.params.contains(name) {
                    self.error(
                        DiagnosticCode::UnboundVariable,
                        format!("`{name}` is not an argument of this rule"),
                    );
                }
            }
            Expr::Binary(_, l, r) => {
                self.expr(l, vars);
                self.expr(r, vars);
            }
            Expr::Call(func, args) => {
                for a in args {
                    self.expr(a, vars);
                }
                match self.builtins.arity(func) {
                    None => self.error(DiagnosticCode::UnknownBuiltin, format!("unknown builtin `{func}`")),
                    Some(n) if n != args.len() => self.error(
                        DiagnosticCode::ArityMismatch,
                        format!("builtin `{func}` takes {n} argument(s), got {}", args.len()),
                    ),
                    Some(_) => {}
                }
            }
        }
    }
}

/// Rule names that can derive the empty string (least fixpoint).
pub fn nullable_rules(grammar: &Grammar) -> BTreeSet<String> {
    let mut nullable = BTreeSet::new();
    loop {
        let before = nullable.len();
        for rule in &grammar.rules {
            if !nullable.contains(&rule.name) && reducible_nullable(&rule.body, &nullable) {
                nullable.insert(rule.name.clone());
            }
        }
        if nullable.len() == before {
            return nullable;
        }
    }
}

fn reducible_nullable(r: &Reducible, nullable: &BTreeSet<String>) -> bool {
    match r {
        Reducible::Value(p, _) => pattern_nullable(p, nullable),
        Reducible::NonTerminal(name, _) => nullable.contains(name),
        Reducible::Alt(l, r) => reducible_nullable(l, nullable) || reducible_nullable(r, nullable),
    }
}

pub(crate) fn pattern_nullable(p: &Pattern, nullable: &BTreeSet<String>) -> bool {
    match p {
        Pattern::Terminal(text) => text.is_empty(),
        Pattern::Empty => true,
        Pattern::Concat(a, b) => pattern_nullable(a, nullable) && pattern_nullable(b, nullable),
        Pattern::Named(_, inner) => reducible_nullable(inner, nullable),
    }
}

/// Rule names a reducible can reach before consuming any input.
pub(crate) fn leftmost_refs(r: &Reducible, nullable: &BTreeSet<String>, out: &mut BTreeSet<String>) {
    match r {
        Reducible::Value(p, _) => leftmost_refs_pattern(p, nullable, out),
        Reducible::NonTerminal(name, _) => {
            out.insert(name.clone());
        }
        Reducible::Alt(l, r) => {
            leftmost_refs(l, nullable, out);
            leftmost_refs(r, nullable, out);
        }
    }
}

fn leftmost_refs_pattern(p: &Pattern, nullable: &BTreeSet<String>, out: &mut BTreeSet<String>) {
    match p {
        Pattern::Terminal(_) | Pattern::Empty => {}
        Pattern::Named(_, inner) => leftmost_refs(inner, nullable, out),
        Pattern::Concat(a, b) => {
            leftmost_refs_pattern(a, nullable, out);
            if pattern_nullable(a, nullable) {
                leftmost_refs_pattern(b, nullable, out);
            }
        }
    }
}

/// The leftmost-reference relation between rule names.
pub fn leftmost_graph(grammar: &Grammar) -> BTreeMap<String, BTreeSet<String>> {
    let nullable = nullable_rules(grammar);
    let mut graph: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for rule in &grammar.rules {
        let edges = graph.entry(rule.name.clone()).or_default();
        leftmost_refs(&rule.body, &nullable, edges);
    }
    graph
}

/// Names reachable from `from` through one or more edges.
pub(crate) fn reachable(graph: &BTreeMap<String, BTreeSet<String>>, from: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&str> = graph.get(from).into_iter().flatten().map(String::as_str).collect();
    while let Some(n) = stack.pop() {
        if seen.insert(n.to_string()) {
            stack.extend(graph.get(n).into_iter().flatten().map(String::as_str));
        }
    }
    seen
}

/// Every rule name lying on a cycle of the leftmost-reference relation:
/// rules whose top-down expansion can re-enter themselves without consuming
/// a character.
pub fn detect_left_recursion(grammar: &Grammar) -> BTreeSet<String> {
    let graph = leftmost_graph(grammar);
    graph
        .keys()
        .filter(|name| reachable(&graph, name).contains(*name))
        .cloned()
        .collect()
}

/// One `LEFT_RECURSION` warning per left-recursive rule name, in grammar order.
pub fn left_recursion_warnings(grammar: &Grammar) -> Vec<Diagnostic> {
    let names = detect_left_recursion(grammar);
    grammar
        .rule_names()
        .into_iter()
        .filter(|n| names.contains(*n))
        .map(|n| Diagnostic {
            severity: Severity::Warning,
            rule: Some(n.to_string()),
            message: "rule can re-enter itself before consuming input".into(),
            code: DiagnosticCode::LeftRecursion,
        })
        .collect()
}
