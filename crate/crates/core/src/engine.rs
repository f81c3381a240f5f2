//! Backtracking top-down interpretation of a [`Grammar`].
//!
//! Every construct denotes a lazy, ordered sequence of derivations. A
//! derivation of a pattern is an extended [`Env`] plus the position where
//! the unconsumed residue starts; a derivation of a reducible is a number
//! plus that position. Backtracking is just pulling the next item from a
//! sequence, and since environments are persistent, resuming an earlier
//! alternative sees exactly the bindings it started with.
//!
//! Matching is scannerless and character exact: no whitespace is skipped.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::iter;

use thiserror::Error;

use crate::builtins::Builtins;
use crate::env::Env;
use crate::eval::{evaluate_expression, EvalError};
use crate::grammar::{Grammar, Pattern, Reducible, Rule};

/// Limits that turn a runaway (typically left-recursive) parse into a
/// reportable failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Derivation steps: one per pattern or reducible the engine starts deriving.
    pub max_steps: u64,
    /// Nesting depth of rule invocations.
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_depth: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParseOutcome {
    Value(f64),
    /// No derivation consumes the whole input. `budget_exceeded` is set when
    /// the search was cut short by the [`Budget`] rather than exhausted.
    SyntaxError {
        budget_exceeded: bool,
    },
}

impl ParseOutcome {
    pub fn value(self) -> Option<f64> {
        match self {
            ParseOutcome::Value(v) => Some(v),
            ParseOutcome::SyntaxError { .. } => None,
        }
    }

    pub fn is_syntax_error(self) -> bool {
        matches!(self, ParseOutcome::SyntaxError { .. })
    }

    pub fn budget_exceeded(self) -> bool {
        matches!(self, ParseOutcome::SyntaxError { budget_exceeded: true })
    }
}

/// Calculator display form: shortest round-trip decimal, no trailing `.0`,
/// or `Syntax Error`.
impl fmt::Display for ParseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseOutcome::Value(v) => write!(f, "{v}"),
            ParseOutcome::SyntaxError { .. } => f.write_str("Syntax Error"),
        }
    }
}

/// A defect in the grammar or engine, distinct from a syntax error in the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("internal evaluation error: {0}")]
    Eval(#[from] EvalError),
}

/// One result of a derivation: what was produced and where the residue begins.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation<T> {
    pub value: T,
    pub residue: usize,
}

pub type Derivations<'a, T> = Box<dyn Iterator<Item = Derivation<T>> + 'a>;

type RuleIndex<'g> = HashMap<(&'g str, usize), Vec<&'g Rule>>;

/// A grammar prepared for parsing.
pub struct Engine<'g> {
    grammar: &'g Grammar,
    builtins: &'g Builtins,
    index: RuleIndex<'g>,
    budget: Budget,
}

impl<'g> Engine<'g> {
    pub fn new(grammar: &'g Grammar, builtins: &'g Builtins) -> Self {
        let mut index: RuleIndex<'g> = HashMap::new();
        for rule in &grammar.rules {
            index.entry((&rule.name, rule.arity())).or_default().push(rule);
        }
        Engine {
            grammar,
            builtins,
            index,
            budget: Budget::default(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.grammar
    }

    /// Starts a parse of `text`. The session owns the step counter.
    pub fn session<'s>(&'s self, text: &'s str) -> Session<'s> {
        Session {
            builtins: self.builtins,
            index: &self.index,
            budget: self.budget,
            text,
            steps: Cell::new(0),
            halt: RefCell::new(None),
        }
    }

    /// Parses `text` from the start symbol and returns the value of the first
    /// derivation, in enumeration order, that consumes the entire input.
    pub fn parse_full(&self, text: &str) -> Result<ParseOutcome, EngineError> {
        self.parse_full_counted(text).map(|(outcome, _)| outcome)
    }

    /// Like [`Engine::parse_full`], also reporting the derivation steps taken.
    pub fn parse_full_counted(&self, text: &str) -> Result<(ParseOutcome, u64), EngineError> {
        let session = self.session(text);
        let start = Reducible::NonTerminal(self.grammar.start.clone(), Vec::new());
        let mut found = None;
        for d in session.derive_reducible(&start, 0, &Env::new()) {
            if session.halted() {
                break;
            }
            if d.residue == text.len() {
                found = Some(d.value);
                break;
            }
        }
        let steps = session.steps();
        match session.halt.into_inner() {
            Some(Halt::Fault(err)) => Err(err.into()),
            Some(Halt::Budget) => Ok((ParseOutcome::SyntaxError { budget_exceeded: true }, steps)),
            None => Ok((
                found.map_or(
                    ParseOutcome::SyntaxError { budget_exceeded: false },
                    ParseOutcome::Value,
                ),
                steps,
            )),
        }
    }
}

/// Parses with the default budget.
pub fn parse_full(grammar: &Grammar, builtins: &Builtins, text: &str) -> Result<ParseOutcome, EngineError> {
    Engine::new(grammar, builtins).parse_full(text)
}

#[derive(Debug)]
enum Halt {
    Budget,
    Fault(EvalError),
}

/// Derivation state for one input text.
pub struct Session<'a> {
    builtins: &'a Builtins,
    index: &'a RuleIndex<'a>,
    budget: Budget,
    text: &'a str,
    steps: Cell<u64>,
    halt: RefCell<Option<Halt>>,
}

impl<'a> Session<'a> {
    pub fn text(&self) -> &'a str {
        self.text
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    pub fn halted(&self) -> bool {
        self.halt.borrow().is_some()
    }

    pub fn budget_exceeded(&self) -> bool {
        matches!(*self.halt.borrow(), Some(Halt::Budget))
    }

    pub fn fault(&self) -> Option<EvalError> {
        match &*self.halt.borrow() {
            Some(Halt::Fault(e)) => Some(e.clone()),
            _ => None,
        }
    }

    /// All ways `pattern` derives a prefix of `text[pos..]`, each with `env`
    /// extended by the pattern's bindings.
    pub fn derive_pattern(&'a self, pattern: &'a Pattern, pos: usize, env: Env) -> Derivations<'a, Env> {
        Box::new(
            self.pattern(pattern, pos, env, 0)
                .map(|(value, residue)| Derivation { value, residue }),
        )
    }

    /// All ways `reducible` reduces a prefix of `text[pos..]` to a value.
    pub fn derive_reducible(&'a self, reducible: &'a Reducible, pos: usize, env: &Env) -> Derivations<'a, f64> {
        Box::new(
            self.reducible(reducible, pos, env, 0)
                .map(|(value, residue)| Derivation { value, residue }),
        )
    }

    fn stop(&self, why: Halt) {
        let mut halt = self.halt.borrow_mut();
        if halt.is_none() {
            *halt = Some(why);
        }
    }

    /// Counts one step; false once the parse has been halted.
    fn enter(&self) -> bool {
        if self.halted() {
            return false;
        }
        let steps = self.steps.get() + 1;
        self.steps.set(steps);
        if steps > self.budget.max_steps {
            self.stop(Halt::Budget);
            return false;
        }
        true
    }

    fn pattern(
        &'a self,
        pattern: &'a Pattern,
        pos: usize,
        env: Env,
        depth: usize,
    ) -> Box<dyn Iterator<Item = (Env, usize)> + 'a> {
        if !self.enter() {
            return Box::new(iter::empty());
        }
        match pattern {
            Pattern::Terminal(text) => {
                if self.text[pos..].starts_with(text.as_str()) {
                    Box::new(iter::once((env, pos + text.len())))
                } else {
                    Box::new(iter::empty())
                }
            }
            Pattern::Empty => Box::new(iter::once((env, pos))),
            Pattern::Concat(first, second) => Box::new(
                self.pattern(first, pos, env, depth)
                    .flat_map(move |(env, mid)| self.pattern(second, mid, env, depth)),
            ),
            Pattern::Named(var, inner) => Box::new(
                self.reducible(inner, pos, &env, depth)
                    .map(move |(v, residue)| (env.bind(var, v), residue)),
            ),
        }
    }

    fn reducible(
        &'a self,
        reducible: &'a Reducible,
        pos: usize,
        env: &Env,
        depth: usize,
    ) -> Box<dyn Iterator<Item = (f64, usize)> + 'a> {
        if !self.enter() {
            return Box::new(iter::empty());
        }
        match reducible {
            Reducible::Value(pattern, result) => Box::new(
                self.pattern(pattern, pos, env.without_vars(), depth)
                    .filter_map(
                        move |(env, residue)| match evaluate_expression(result, &env, self.builtins) {
                            Ok(v) => Some((v, residue)),
                            Err(e) => {
                                self.stop(Halt::Fault(e));
                                None
                            }
                        },
                    ),
            ),
            Reducible::Alt(left, right) => {
                let env = env.clone();
                Box::new(
                    self.reducible(left, pos, &env, depth)
                        .chain(iter::once(()).flat_map(move |()| self.reducible(right, pos, &env, depth))),
                )
            }
            Reducible::NonTerminal(name, args) => {
                let env = env.clone();
                let calls = iter::once(()).flat_map(move |()| self.invoke(name, args, pos, &env, depth));
                Box::new(Grow(Some(calls)))
            }
        }
    }

    /// Tries every rule `name` of matching arity in grammar order, each with
    /// a fresh environment holding only its arguments.
    fn invoke(
        &'a self,
        name: &'a str,
        args: &'a [crate::grammar::Expr],
        pos: usize,
        env: &Env,
        depth: usize,
    ) -> Box<dyn Iterator<Item = (f64, usize)> + 'a> {
        if depth >= self.budget.max_depth {
            self.stop(Halt::Budget);
            return Box::new(iter::empty());
        }
        let values = match args
            .iter()
            .map(|a| evaluate_expression(a, env, self.builtins))
            .collect::<Result<Vec<f64>, _>>()
        {
            Ok(values) => values,
            Err(e) => {
                self.stop(Halt::Fault(e));
                return Box::new(iter::empty());
            }
        };
        let rules: &'a [&'a Rule] = self.index.get(&(name, args.len())).map(Vec::as_slice).unwrap_or(&[]);
        Box::new(rules.iter().flat_map(move |rule| {
            let callee = Env::with_args(rule.params.iter().map(String::as_str).zip(values.iter().copied()));
            self.reducible(&rule.body, pos, &callee, depth + 1)
        }))
    }
}

const RED_ZONE: usize = 64 * 1024;
const STACK_GROWTH: usize = 1024 * 1024;

/// Runs `next` and `drop` of a rule invocation on a segmented stack, so deep
/// but legitimate recursion is bounded by [`Budget::max_depth`] rather than
/// by the thread's stack size.
struct Grow<I>(Option<I>);

impl<I: Iterator> Iterator for Grow<I> {
    type Item = I::Item;

    fn next(&mut self) -> Option<I::Item> {
        let inner = self.0.as_mut()?;
        stacker::maybe_grow(RED_ZONE, STACK_GROWTH, || inner.next())
    }
}

impl<I> Drop for Grow<I> {
    fn drop(&mut self) {
        let inner = self.0.take();
        stacker::maybe_grow(RED_ZONE, STACK_GROWTH, move || drop(inner));
    }
}
