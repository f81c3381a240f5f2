//! Named numeric functions callable from grammar expressions.

use std::collections::BTreeMap;
use std::fmt;

pub type BuiltinFn = fn(&[f64]) -> f64;

#[derive(Clone, Copy)]
pub struct Builtin {
    pub arity: usize,
    pub func: BuiltinFn,
}

impl fmt::Debug for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Builtin")
            .field("arity", &self.arity)
            .finish_non_exhaustive()
    }
}

/// Registry of builtins keyed by name. A name has exactly one arity.
#[derive(Clone, Debug, Default)]
pub struct Builtins {
    table: BTreeMap<String, Builtin>,
}

impl Builtins {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `sin`, `cos`, `tan` (radians), `sqrt`, `abs`.
    pub fn standard() -> Self {
        let mut b = Self::empty();
        b.register("sin", 1, |a| a[0].sin());
        b.register("cos", 1, |a| a[0].cos());
        b.register("tan", 1, |a| a[0].tan());
        b.register("sqrt", 1, |a| a[0].sqrt());
        b.register("abs", 1, |a| a[0].abs());
        b
    }

    /// Registers or replaces `name`.
    pub fn register(&mut self, name: impl Into<String>, arity: usize, func: BuiltinFn) -> &mut Self {
        self.table.insert(name.into(), Builtin { arity, func });
        self
    }

    pub fn get(&self, name: &str) -> Option<Builtin> {
        self.table.get(name).copied()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.table.get(name).map(|b| b.arity)
    }

    pub fn signatures(&self) -> impl Iterator<Item = (&str, usize)> {
        self.table.iter().map(|(k, b)| (k.as_str(), b.arity))
    }
}
