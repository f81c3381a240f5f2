//! Persistent variable environments.
//!
//! Extending an [`Env`] returns a new value and leaves the original intact, so
//! a backtracking enumeration can resume from any earlier environment without
//! undoing anything.

use std::fmt;
use std::rc::Rc;

#[derive(Clone, Default)]
struct Scope(Option<Rc<Link>>);

struct Link {
    name: Rc<str>,
    value: f64,
    next: Scope,
}

impl Scope {
    fn push(&self, name: &str, value: f64) -> Scope {
        Scope(Some(Rc::new(Link {
            name: Rc::from(name),
            value,
            next: self.clone(),
        })))
    }

    fn lookup(&self, name: &str) -> Option<f64> {
        let mut cur = &self.0;
        while let Some(link) = cur {
            if &*link.name == name {
                return Some(link.value);
            }
            cur = &link.next.0;
        }
        None
    }

    /// Visible bindings, newest first, shadowed entries omitted.
    fn entries(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = Vec::new();
        let mut cur = &self.0;
        while let Some(link) = cur {
            if !out.iter().any(|(n, _)| **n == *link.name) {
                out.push((link.name.to_string(), link.value));
            }
            cur = &link.next.0;
        }
        out
    }
}

/// Variable bindings made by named patterns, plus the current rule's arguments.
#[derive(Clone, Default)]
pub struct Env {
    vars: Scope,
    args: Scope,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fresh environment holding only the given rule arguments.
    pub fn with_args<'a>(args: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        let mut scope = Scope::default();
        for (name, value) in args {
            scope = scope.push(name, value);
        }
        Env {
            vars: Scope::default(),
            args: scope,
        }
    }

    pub fn bind(&self, name: &str, value: f64) -> Env {
        Env {
            vars: self.vars.push(name, value),
            args: self.args.clone(),
        }
    }

    /// Same arguments, no variables: the scope a pattern body starts from.
    pub fn without_vars(&self) -> Env {
        Env {
            vars: Scope::default(),
            args: self.args.clone(),
        }
    }

    pub fn var(&self, name: &str) -> Option<f64> {
        self.vars.lookup(name)
    }

    pub fn arg(&self, name: &str) -> Option<f64> {
        self.args.lookup(name)
    }

    pub fn vars(&self) -> Vec<(String, f64)> {
        self.vars.entries()
    }

    pub fn args(&self) -> Vec<(String, f64)> {
        self.args.entries()
    }
}

/// Compares visible bindings by name and bit pattern of the value.
impl PartialEq for Env {
    fn eq(&self, other: &Self) -> bool {
        fn same(a: Vec<(String, f64)>, b: Vec<(String, f64)>) -> bool {
            a.len() == b.len()
                && a.iter()
                    .zip(&b)
                    .all(|((n1, v1), (n2, v2))| n1 == n2 && v1.to_bits() == v2.to_bits())
        }
        same(self.vars(), other.vars()) && same(self.args(), other.args())
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Env")
            .field("vars", &self.vars())
            .field("args", &self.args())
            .finish()
    }
}
