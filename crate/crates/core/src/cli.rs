//! `fbnf` command line.
//!
//! ```text
//! fbnf eval --product basic "1+2*3"       # prints 7
//! fbnf eval --config my.product --repl    # one result line per input line
//! fbnf check --config my.product          # diagnostics, exit 0 iff no errors
//! fbnf features                           # features available in the pool
//! ```
//!
//! Exit status: 0 on success, 1 when a batch input was a syntax error (or
//! `check` found errors), 2 on usage or configuration problems.

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::calculators::{calculator_builtins, calculator_pool, product_config, Calculator, PRODUCTS};
use crate::spl::{filter_by_features, load_config, FeatureConfig, FilterError};
use crate::validate::left_recursion_warnings;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SYNTAX_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fbnf", about = "Evaluate expressions with a calculator product-line grammar")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct ProductArgs {
    /// Preset product: basic, scientific, financial or hex.
    #[arg(long, conflicts_with = "config")]
    product: Option<String>,
    /// Product configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate expressions given as arguments, or line by line from stdin.
    Eval {
        #[command(flatten)]
        product: ProductArgs,
        /// Read expressions from stdin until end of input.
        #[arg(long, conflicts_with = "expressions")]
        repl: bool,
        expressions: Vec<String>,
    },
    /// Validate the grammar of a product.
    Check {
        #[command(flatten)]
        product: ProductArgs,
        /// Also print the product's rules.
        #[arg(long)]
        print: bool,
    },
    /// List the features available in the rule pool.
    Features,
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval {
            product,
            repl,
            expressions,
        } => eval(&product, repl, &expressions, stdin, stdout, stderr),
        Command::Check { product, print } => check(&product, print, stdout, stderr),
        Command::Features => {
            for f in calculator_pool().features() {
                let _ = writeln!(stdout, "{f}");
            }
            Ok(EXIT_OK)
        }
    };
    result.unwrap_or_else(|message| {
        let _ = writeln!(stderr, "fbnf: {message}");
        EXIT_USAGE
    })
}

fn resolve_config(args: &ProductArgs, stderr: &mut dyn Write) -> Result<FeatureConfig, String> {
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let loaded = load_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        for w in &loaded.warnings {
            let _ = writeln!(
                stderr,
                "fbnf: {}: warning: line {}: {}",
                path.display(),
                w.line,
                w.message
            );
        }
        return Ok(loaded.config);
    }
    let name = args.product.as_deref().unwrap_or("basic");
    product_config(name).ok_or_else(|| {
        let known: Vec<&str> = PRODUCTS.iter().map(|(n, _)| *n).collect();
        format!("unknown product `{name}` (expected one of: {})", known.join(", "))
    })
}

fn eval(
    args: &ProductArgs,
    repl: bool,
    expressions: &[String],
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, String> {
    if !repl && expressions.is_empty() {
        return Err("nothing to evaluate: pass expressions or --repl".into());
    }
    let config = resolve_config(args, stderr)?;
    let calc = Calculator::new(&config).map_err(|e| {
        let details: Vec<String> = e.0.iter().map(ToString::to_string).collect();
        format!("{e}\n{}", details.join("\n"))
    })?;

    let mut status = EXIT_OK;
    let mut answer = |line: &str, stdout: &mut dyn Write| -> Result<(), String> {
        let outcome = calc.evaluate(line).map_err(|e| e.to_string())?;
        if outcome.is_syntax_error() {
            status = EXIT_SYNTAX_ERROR;
        }
        writeln!(stdout, "{outcome}").map_err(|e| e.to_string())?;
        stdout.flush().map_err(|e| e.to_string())
    };

    if repl {
        for line in stdin.lines() {
            let line = line.map_err(|e| format!("cannot read stdin: {e}"))?;
            answer(line.strip_suffix('\r').unwrap_or(&line), stdout)?;
        }
        return Ok(EXIT_OK);
    }
    for expr in expressions {
        answer(expr, stdout)?;
    }
    Ok(status)
}

fn check(args: &ProductArgs, print: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, String> {
    let config = resolve_config(args, stderr)?;
    let pool = calculator_pool();
    for f in &config.enabled {
        if !pool.features().contains(&f.as_str()) {
            let _ = writeln!(stderr, "fbnf: warning: feature `{f}` does not occur in the rule pool");
        }
    }
    let product = match filter_by_features(&pool, &config, &calculator_builtins()) {
        Ok(product) => product,
        Err(FilterError(diags)) => {
            for d in &diags {
                let _ = writeln!(stdout, "{d}");
            }
            return Ok(EXIT_SYNTAX_ERROR);
        }
    };
    for d in left_recursion_warnings(&product) {
        let _ = writeln!(stdout, "{d}");
    }
    if print {
        let _ = write!(stdout, "{product}");
    }
    let _ = writeln!(
        stdout,
        "ok: product `{}` has {} rules",
        config.product_name,
        product.rules.len()
    );
    Ok(EXIT_OK)
}
