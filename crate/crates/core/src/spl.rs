//! Feature-based product assembly.
//!
//! Each rule may name one feature. A product is the rule pool restricted to
//! unannotated rules plus rules whose feature is enabled.
//!
//! Configuration files are line oriented:
//!
//! ```text
//! # comment
//! product financial_calc
//! feature financial
//! ```

use std::collections::BTreeSet;

use thiserror::Error;

use crate::builtins::Builtins;
use crate::grammar::Grammar;
use crate::validate::{has_errors, validate_grammar, Diagnostic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureConfig {
    pub product_name: String,
    pub enabled: BTreeSet<String>,
}

impl FeatureConfig {
    pub fn new<I, S>(product_name: impl Into<String>, enabled: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FeatureConfig {
            product_name: product_name.into(),
            enabled: enabled.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_enabled(&self, feature: &str) -> bool {
        self.enabled.contains(feature)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("MALFORMED_CONFIG: line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedConfig {
    pub config: FeatureConfig,
    pub warnings: Vec<ConfigWarning>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn load_config(text: &str) -> Result<LoadedConfig, ConfigError> {
    let mut product: Option<String> = None;
    let mut enabled = BTreeSet::new();
    let mut warnings = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let err = |message: String| ConfigError { line, message };
        let [key, name] = words[..] else {
            return Err(err(format!("expected `<key> <identifier>`, found `{content}`")));
        };
        if !is_identifier(name) {
            return Err(err(format!("`{name}` is not a valid identifier")));
        }
        match (key, &product) {
            ("product", None) => product = Some(name.to_string()),
            ("product", Some(_)) => return Err(err("duplicate `product` line".into())),
            ("feature", None) => return Err(err("the first line must be `product <name>`".into())),
            ("feature", Some(_)) => {
                if !enabled.insert(name.to_string()) {
                    warnings.push(ConfigWarning {
                        line,
                        message: format!("feature `{name}` listed more than once"),
                    });
                }
            }
            (other, _) => return Err(err(format!("unknown key `{other}`"))),
        }
    }

    let Some(product_name) = product else {
        return Err(ConfigError {
            line: last_line.max(1),
            message: "missing `product <name>` line".into(),
        });
    };
    Ok(LoadedConfig {
        config: FeatureConfig { product_name, enabled },
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("FILTER_BROKE_GRAMMAR: the filtered grammar has {} error(s)", .0.iter().filter(|d| d.is_error()).count())]
pub struct FilterError(pub Vec<Diagnostic>);

/// Keeps, in order, the rules that are unannotated or whose feature is
/// enabled, then validates the result.
pub fn filter_by_features(pool: &Grammar, config: &FeatureConfig, builtins: &Builtins) -> Result<Grammar, FilterError> {
    let product = Grammar {
        name: pool.name.clone(),
        rules: pool
            .rules
            .iter()
            .filter(|r| r.feature.as_ref().is_none_or(|f| config.is_enabled(f)))
            .cloned()
            .collect(),
        start: pool.start.clone(),
    };
    let diags = validate_grammar(&product, builtins);
    if has_errors(&diags) {
        return Err(FilterError(diags));
    }
    Ok(product)
}
