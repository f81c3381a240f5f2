//! Brute-force reference semantics.
//!
//! Collects every derivation eagerly into vectors, with no laziness and no
//! short-circuiting, so it shares nothing with [`crate::engine`] beyond the
//! grammar types and expression evaluation. Results come out in the same
//! order the engine enumerates them, which makes "first complete parse"
//! comparable between the two.
//!
//! Recursion is bounded by a nesting depth. Without left recursion a rule can
//! only nest inside itself after consuming input, so the default bound
//! (rule names × (input length + 1)) is exact. For left-recursive grammars the
//! bound truncates the search and [`accepted_strings_bounded`] deepens it
//! gradually, taking the shallowest complete derivation.

use std::collections::HashMap;
use std::rc::Rc;

use crate::builtins::Builtins;
use crate::env::Env;
use crate::eval::{evaluate_expression, EvalError};
use crate::grammar::{Grammar, Pattern, Reducible, Rule};

pub struct Eager<'g> {
    builtins: &'g Builtins,
    rules: HashMap<(&'g str, usize), Vec<&'g Rule>>,
    start: &'g str,
    names: usize,
    memoize: bool,
}

/// Rule name, argument bits, position, depth.
type MemoKey = (String, Vec<u64>, usize, usize);

impl<'g> Eager<'g> {
    pub fn new(grammar: &'g Grammar, builtins: &'g Builtins) -> Self {
        let mut rules: HashMap<(&'g str, usize), Vec<&'g Rule>> = HashMap::new();
        for r in &grammar.rules {
            rules.entry((r.name.as_str(), r.params.len())).or_default().push(r);
        }
        Eager {
            builtins,
            rules,
            start: &grammar.start,
            names: grammar.rule_names().len(),
            memoize: false,
        }
    }

    /// Caches every rule invocation's results by (rule, arguments, position,
    /// depth). Results are unchanged; step counts are not comparable.
    /// Left-recursive groups with several recursive rules are exponential in
    /// the depth bound without it.
    pub fn memoized(mut self) -> Self {
        self.memoize = true;
        self
    }

    /// Depth bound that is exact for grammars without left recursion.
    pub fn exact_depth(&self, text: &str) -> usize {
        self.names.max(1) * (text.len() + 1) + 1
    }

    /// Values of all complete derivations of `text`, in enumeration order.
    pub fn full_parses(&self, text: &str, max_depth: usize) -> Result<Vec<f64>, EvalError> {
        let mut run = Run {
            eager: self,
            text,
            max_depth,
            steps: 0,
            memo: HashMap::new(),
        };
        let start = Reducible::NonTerminal(self.start.to_string(), Vec::new());
        Ok(run
            .reducible(&start, 0, &Env::new(), 0)?
            .into_iter()
            .filter(|&(_, end)| end == text.len())
            .map(|(v, _)| v)
            .collect())
    }

    /// First complete derivation under the exact depth bound.
    pub fn first_parse(&self, text: &str) -> Result<Option<f64>, EvalError> {
        Ok(self.full_parses(text, self.exact_depth(text))?.first().copied())
    }

    /// Derivation steps an exhaustive search of `text` performs, counted the
    /// same way the engine counts them.
    pub fn steps(&self, text: &str) -> Result<u64, EvalError> {
        let mut run = Run {
            eager: self,
            text,
            max_depth: self.exact_depth(text),
            steps: 0,
            memo: HashMap::new(),
        };
        let start = Reducible::NonTerminal(self.start.to_string(), Vec::new());
        run.reducible(&start, 0, &Env::new(), 0)?;
        Ok(run.steps)
    }

    /// Every result of `reducible` at `pos`, unfiltered.
    pub fn reducible_results(
        &self,
        reducible: &Reducible,
        text: &str,
        pos: usize,
        env: &Env,
    ) -> Result<Vec<(f64, usize)>, EvalError> {
        let mut run = Run {
            eager: self,
            text,
            max_depth: self.exact_depth(text),
            steps: 0,
            memo: HashMap::new(),
        };
        run.reducible(reducible, pos, env, 0)
    }

    pub fn pattern_results(
        &self,
        pattern: &Pattern,
        text: &str,
        pos: usize,
        env: &Env,
    ) -> Result<Vec<(Env, usize)>, EvalError> {
        let mut run = Run {
            eager: self,
            text,
            max_depth: self.exact_depth(text),
            steps: 0,
            memo: HashMap::new(),
        };
        run.pattern(pattern, pos, env, 0)
    }
}

struct Run<'e, 'g> {
    eager: &'e Eager<'g>,
    text: &'e str,
    max_depth: usize,
    steps: u64,
    memo: HashMap<MemoKey, Rc<Vec<(f64, usize)>>>,
}

impl Run<'_, '_> {
    fn pattern(&mut self, p: &Pattern, pos: usize, env: &Env, depth: usize) -> Result<Vec<(Env, usize)>, EvalError> {
        self.steps += 1;
        let mut out = Vec::new();
        match p {
            Pattern::Terminal(lit) => {
                let rest = &self.text[pos..];
                if rest.len() >= lit.len() && rest.as_bytes()[..lit.len()] == *lit.as_bytes() {
                    out.push((env.clone(), pos + lit.len()));
                }
            }
            Pattern::Empty => out.push((env.clone(), pos)),
            Pattern::Concat(a, b) => {
                for (mid_env, mid) in self.pattern(a, pos, env, depth)? {
                    out.extend(self.pattern(b, mid, &mid_env, depth)?);
                }
            }
            Pattern::Named(v, inner) => {
                for (value, end) in self.reducible(inner, pos, env, depth)? {
                    out.push((env.bind(v, value), end));
                }
            }
        }
        Ok(out)
    }

    fn reducible(
        &mut self,
        r: &Reducible,
        pos: usize,
        env: &Env,
        depth: usize,
    ) -> Result<Vec<(f64, usize)>, EvalError> {
        self.steps += 1;
        let mut out = Vec::new();
        match r {
            Reducible::Value(p, e) => {
                for (bound, end) in self.pattern(p, pos, &env.without_vars(), depth)? {
                    out.push((evaluate_expression(e, &bound, self.eager.builtins)?, end));
                }
            }
            Reducible::Alt(l, r) => {
                out.extend(self.reducible(l, pos, env, depth)?);
                out.extend(self.reducible(r, pos, env, depth)?);
            }
            Reducible::NonTerminal(name, args) => {
                if depth >= self.max_depth {
                    return Ok(out);
                }
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(evaluate_expression(a, env, self.eager.builtins)?);
                }
                let key = self
                    .eager
                    .memoize
                    .then(|| (name.clone(), values.iter().map(|v| v.to_bits()).collect(), pos, depth));
                if let Some(hit) = key.as_ref().and_then(|k| self.memo.get(k)) {
                    out.extend(hit.iter().copied());
                    return Ok(out);
                }
                let eager = self.eager;
                for rule in eager.rules.get(&(name.as_str(), args.len())).into_iter().flatten() {
                    let callee = Env::with_args(rule.params.iter().map(String::as_str).zip(values.iter().copied()));
                    out.extend(self.reducible(&rule.body, pos, &callee, depth + 1)?);
                }
                if let Some(k) = key {
                    self.memo.insert(k, Rc::new(out.clone()));
                }
            }
        }
        Ok(out)
    }
}

/// Every string over `alphabet` of length at most `max_len`, shortest first,
/// then in alphabet order.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for s in &layer {
            for &c in alphabet {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Every string over `alphabet` up to `max_len` characters that has a complete
/// derivation, paired with the value of its first one.
pub fn accepted_strings_oracle(
    grammar: &Grammar,
    builtins: &Builtins,
    alphabet: &[char],
    max_len: usize,
) -> Result<Vec<(String, f64)>, EvalError> {
    let eager = Eager::new(grammar, builtins);
    let mut out = Vec::new();
    for s in all_strings(alphabet, max_len) {
        if let Some(v) = eager.first_parse(&s)? {
            out.push((s, v));
        }
    }
    Ok(out)
}

/// Like [`accepted_strings_oracle`] but for grammars that may be left
/// recursive. A string is accepted if it has a complete derivation nested at
/// most `max_depth` deep; its value comes from the first complete derivation
/// under the shallowest bound that admits one.
pub fn accepted_strings_bounded(
    grammar: &Grammar,
    builtins: &Builtins,
    alphabet: &[char],
    max_len: usize,
    max_depth: usize,
) -> Result<Vec<(String, f64)>, EvalError> {
    let eager = Eager::new(grammar, builtins).memoized();
    let mut out = Vec::new();
    for s in all_strings(alphabet, max_len) {
        if eager.full_parses(&s, max_depth)?.is_empty() {
            continue;
        }
        for depth in 1..=max_depth {
            if let Some(&v) = eager.full_parses(&s, depth)?.first() {
                out.push((s, v));
                break;
            }
        }
    }
    Ok(out)
}
