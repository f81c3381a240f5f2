use thiserror::Error;

use crate::builtins::Builtins;
use crate::env::Env;
use crate::grammar::Expr;

/// Evaluation failures. Validation rules all of these out, so seeing one
/// during a parse means the grammar was not validated or the engine is wrong.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unbound rule argument `{0}`")]
    UnboundArgument(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("builtin `{name}` takes {expected} argument(s), got {got}")]
    BuiltinArity { name: String, expected: usize, got: usize },
}

/// Evaluates `expr` with IEEE double semantics: division by zero gives an
/// infinity or NaN rather than an error.
pub fn evaluate_expression(expr: &Expr, env: &Env, builtins: &Builtins) -> Result<f64, EvalError> {
    match expr {
        Expr::Num(v) => Ok(*v),
        Expr::Var(name) => env.var(name).ok_or_else(|| EvalError::UnboundVariable(name.clone())),
        Expr::Arg(name) => env.arg(name).ok_or_else(|| EvalError::UnboundArgument(name.clone())),
        Expr::Binary(op, l, r) => {
            let lhs = evaluate_expression(l, env, builtins)?;
            let rhs = evaluate_expression(r, env, builtins)?;
            Ok(op.apply(lhs, rhs))
        }
        Expr::Call(name, args) => {
            let builtin = builtins
                .get(name)
                .ok_or_else(|| EvalError::UnknownBuiltin(name.clone()))?;
            if builtin.arity != args.len() {
                return Err(EvalError::BuiltinArity {
                    name: name.clone(),
                    expected: builtin.arity,
                    got: args.len(),
                });
            }
            let values = args
                .iter()
                .map(|a| evaluate_expression(a, env, builtins))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((builtin.func)(&values))
        }
    }
}
