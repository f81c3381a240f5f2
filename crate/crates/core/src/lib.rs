//! Functional BNF: grammars whose production rules both parse a string and
//! compute a number from it.
//!
//! * [`grammar`] holds the data model and its builder functions.
//! * [`validate`] checks scoping and arity, and finds head recursion.
//! * [`engine`] interprets a grammar by lazy backtracking enumeration.
//! * [`oracle`] is an eager brute-force reference used to cross-check the engine.
//! * [`transform`] removes direct left recursion.
//! * [`spl`] filters a rule pool by enabled features.
//! * [`calculators`] is the calculator product line built on all of the above.
//!
//! ```
//! use fbnf::grammar::*;
//! use fbnf::{Builtins, Engine, ParseOutcome};
//!
//! // sum ::= (a=digit, '+', b=sum) {a+b} | digit
//! let g = Grammar::new("sums", "sum")
//!     .rule(Rule::new("sum", value(seq([bind("a", nt("digit")), t("+"), bind("b", nt("sum"))]), var("a") + var("b"))))
//!     .rule(Rule::new("sum", nt("digit")))
//!     .rule(Rule::new("digit", value(t("1"), num(1.0))))
//!     .rule(Rule::new("digit", value(t("2"), num(2.0))));
//!
//! let b = Builtins::empty();
//! assert!(fbnf::validate_grammar(&g, &b).is_empty());
//! assert_eq!(Engine::new(&g, &b).parse_full("1+2+2").unwrap(), ParseOutcome::Value(5.0));
//! ```

pub mod builtins;
pub mod calculators;
pub mod cli;
pub mod engine;
pub mod env;
pub mod eval;
pub mod grammar;
pub mod oracle;
pub mod spl;
pub mod transform;
pub mod validate;

pub use builtins::Builtins;
pub use engine::{parse_full, Budget, Engine, ParseOutcome};
pub use env::Env;
pub use grammar::{Expr, Grammar, Pattern, Reducible, Rule};
pub use validate::{detect_left_recursion, validate_grammar, Diagnostic, DiagnosticCode};
