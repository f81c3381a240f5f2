//! Direct left-recursion elimination with accumulator threading.
//!
//! A head-recursive rule group
//!
//! ```text
//! R ::= (a=R, T1) {e1}  |  …  |  B1  |  …
//! ```
//!
//! becomes
//!
//! ```text
//! R ::= (a=B1, s=RSuffix(a)) {s}                          for each base Bj
//! RSuffix(acc) ::= (T1[a:=acc], s=RSuffix(e1[a:=acc])) {s}  for each recursive body
//! RSuffix(acc) ::= (ε) {acc}
//! ```
//!
//! The suffix rule carries the value computed so far, so `8-3-2` still
//! evaluates as `(8-3)-2`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::grammar::{bind, call_rule, seq, value, Expr, Grammar, Pattern, Reducible, Rule};
use crate::validate::{self, leftmost_graph, leftmost_refs, nullable_rules, pattern_nullable};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("INDIRECT_LEFT_RECURSION: left-recursive cycle spans rules {}", .0.join(", "))]
    IndirectLeftRecursion(Vec<String>),
    #[error("UNSUPPORTED_SHAPE: left recursion in {} is not of the form (a=R, …) {{e}} with a base case", .0.join(", "))]
    UnsupportedShape(Vec<String>),
}

impl TransformError {
    pub fn code(&self) -> &'static str {
        match self {
            TransformError::IndirectLeftRecursion(_) => "INDIRECT_LEFT_RECURSION",
            TransformError::UnsupportedShape(_) => "UNSUPPORTED_SHAPE",
        }
    }

    pub fn rules(&self) -> &[String] {
        match self {
            TransformError::IndirectLeftRecursion(r) | TransformError::UnsupportedShape(r) => r,
        }
    }
}

const ACC: &str = "acc";

struct Recursive<'g> {
    var: &'g str,
    tail: Vec<&'g Pattern>,
    result: &'g Expr,
    feature: Option<&'g str>,
}

struct Plan<'g> {
    name: &'g str,
    suffix: String,
    recursive: Vec<Recursive<'g>>,
}

/// Rewrites every directly left-recursive rule group. A grammar without left
/// recursion is returned unchanged.
pub fn eliminate_left_recursion(grammar: &Grammar) -> Result<Grammar, TransformError> {
    let left_recursive = validate::detect_left_recursion(grammar);
    if left_recursive.is_empty() {
        return Ok(grammar.clone());
    }

    let graph = leftmost_graph(grammar);
    let mut indirect = BTreeSet::new();
    for name in &left_recursive {
        for other in validate::reachable(&graph, name) {
            if other != *name && validate::reachable(&graph, &other).contains(name) {
                indirect.insert(name.clone());
                indirect.insert(other);
            }
        }
    }
    if !indirect.is_empty() {
        return Err(TransformError::IndirectLeftRecursion(indirect.into_iter().collect()));
    }

    let nullable = nullable_rules(grammar);
    let mut taken: BTreeSet<String> = grammar.rules.iter().map(|r| r.name.clone()).collect();
    let mut plans: Vec<Plan<'_>> = Vec::new();
    let mut unsupported = Vec::new();

    // Walk names in grammar order so fresh names are assigned deterministically.
    for name in grammar.rule_names() {
        if !left_recursive.contains(name) {
            continue;
        }
        match plan_group(grammar, name, &nullable) {
            Some(recursive) => {
                let suffix = fresh_name(&format!("{name}Suffix"), &taken);
                taken.insert(suffix.clone());
                plans.push(Plan {
                    name,
                    suffix,
                    recursive,
                });
            }
            None => unsupported.push(name.to_string()),
        }
    }
    if !unsupported.is_empty() {
        return Err(TransformError::UnsupportedShape(unsupported));
    }

    let mut out = Grammar {
        name: grammar.name.clone(),
        rules: Vec::with_capacity(grammar.rules.len() + 2 * plans.len()),
        start: grammar.start.clone(),
    };
    for (i, rule) in grammar.rules.iter().enumerate() {
        let Some(plan) = plans.iter().find(|p| p.name == rule.name) else {
            out.rules.push(rule.clone());
            continue;
        };
        if !is_head_recursive(rule) {
            out.rules.push(base_rewrite(rule, &plan.suffix));
        }
        let last_of_group = !grammar.rules[i + 1..].iter().any(|r| r.name == rule.name);
        if last_of_group {
            out.rules.extend(suffix_rules(plan));
        }
    }
    Ok(out)
}

/// The recursive bodies of `name`, or `None` if the group has an unsupported shape.
fn plan_group<'g>(grammar: &'g Grammar, name: &'g str, nullable: &BTreeSet<String>) -> Option<Vec<Recursive<'g>>> {
    if nullable.contains(name) {
        return None;
    }
    let mut recursive = Vec::new();
    let mut bases = 0;
    for rule in grammar.rules_named(name) {
        if !rule.params.is_empty() {
            return None;
        }
        let mut refs = BTreeSet::new();
        leftmost_refs(&rule.body, nullable, &mut refs);
        if !refs.contains(name) {
            bases += 1;
            continue;
        }
        let Reducible::Value(pattern, result) = &rule.body else {
            return None;
        };
        let mut parts = Vec::new();
        flatten(pattern, &mut parts);
        let (head, tail) = parts.split_first()?;
        let Pattern::Named(var, inner) = head else {
            return None;
        };
        if !matches!(inner.as_ref(), Reducible::NonTerminal(n, args) if n == name && args.is_empty()) {
            return None;
        }
        if tail.iter().all(|p| pattern_nullable(p, nullable)) {
            return None;
        }
        recursive.push(Recursive {
            var,
            tail: tail.to_vec(),
            result,
            feature: rule.feature.as_deref(),
        });
    }
    (bases > 0 && !recursive.is_empty()).then_some(recursive)
}

fn is_head_recursive(rule: &Rule) -> bool {
    let Reducible::Value(pattern, _) = &rule.body else {
        return false;
    };
    let mut parts = Vec::new();
    flatten(pattern, &mut parts);
    matches!(
        parts.first(),
        Some(Pattern::Named(_, inner))
            if matches!(inner.as_ref(), Reducible::NonTerminal(n, args) if *n == rule.name && args.is_empty())
    )
}

fn flatten<'g>(p: &'g Pattern, out: &mut Vec<&'g Pattern>) {
    match p {
        Pattern::Concat(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        other => out.push(other),
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded counter")
}

/// `R ::= B` becomes `R ::= (a=B, s=RSuffix(a)) {s}`; a base of the form
/// `(m=X) {m}` is inlined to `a=X`.
fn base_rewrite(rule: &Rule, suffix: &str) -> Rule {
    let inner = match &rule.body {
        Reducible::Value(Pattern::Named(m, inner), Expr::Var(r)) if m == r => inner.as_ref().clone(),
        other => other.clone(),
    };
    Rule {
        name: rule.name.clone(),
        params: Vec::new(),
        body: value(
            seq([bind("a", inner), bind("s", call_rule(suffix, [Expr::Var("a".into())]))]),
            Expr::Var("s".into()),
        ),
        feature: rule.feature.clone(),
    }
}

fn suffix_rules(plan: &Plan<'_>) -> Vec<Rule> {
    let mut rules = Vec::with_capacity(plan.recursive.len() + 1);
    for rec in &plan.recursive {
        let mut bound = BTreeSet::new();
        let mut parts: Vec<Pattern> = rec
            .tail
            .iter()
            .map(|p| {
                collect_bindings(p, &mut bound);
                subst_pattern(p, rec.var)
            })
            .collect();
        let s = fresh_name("s", &bound);
        parts.push(bind(
            s.as_str(),
            call_rule(plan.suffix.as_str(), [subst_expr(rec.result, rec.var)]),
        ));
        rules.push(Rule {
            name: plan.suffix.clone(),
            params: vec![ACC.to_string()],
            body: value(seq(parts), Expr::Var(s)),
            feature: rec.feature.map(str::to_string),
        });
    }
    rules.push(Rule::new(plan.suffix.as_str(), value(Pattern::Empty, Expr::Arg(ACC.into()))).params([ACC]));
    rules
}

fn collect_bindings(p: &Pattern, out: &mut BTreeSet<String>) {
    match p {
        Pattern::Concat(a, b) => {
            collect_bindings(a, out);
            collect_bindings(b, out);
        }
        Pattern::Named(v, _) => {
            out.insert(v.clone());
        }
        Pattern::Terminal(_) | Pattern::Empty => {}
    }
}

/// Replaces the head variable with the accumulator wherever the pattern's own
/// scope can read it: argument lists of rule references, not nested values.
fn subst_pattern(p: &Pattern, var: &str) -> Pattern {
    match p {
        Pattern::Concat(a, b) => Pattern::Concat(Box::new(subst_pattern(a, var)), Box::new(subst_pattern(b, var))),
        Pattern::Named(v, inner) => Pattern::Named(v.clone(), Box::new(subst_reducible(inner, var))),
        other => other.clone(),
    }
}

fn subst_reducible(r: &Reducible, var: &str) -> Reducible {
    match r {
        Reducible::NonTerminal(name, args) => {
            Reducible::NonTerminal(name.clone(), args.iter().map(|a| subst_expr(a, var)).collect())
        }
        Reducible::Alt(l, r) => Reducible::Alt(Box::new(subst_reducible(l, var)), Box::new(subst_reducible(r, var))),
        Reducible::Value(..) => r.clone(),
    }
}

fn subst_expr(e: &Expr, var: &str) -> Expr {
    match e {
        Expr::Var(v) if v == var => Expr::Arg(ACC.into()),
        Expr::Binary(op, l, r) => Expr::Binary(*op, Box::new(subst_expr(l, var)), Box::new(subst_expr(r, var))),
        Expr::Call(f, args) => Expr::Call(f.clone(), args.iter().map(|a| subst_expr(a, var)).collect()),
        other => other.clone(),
    }
}
