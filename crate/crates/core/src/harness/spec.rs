//! Parsing of generator descriptors such as `expneg:a=1,b=1/p` or `poly-boundary:0,2`.

use crate::error::{LabError, Result};

/// A parsed `name:args` descriptor. Arguments are either all positional or all
/// named; numeric values may be decimals, the symbol `p`, or a quotient of two
/// such terms (`1/p`, `1/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub name: String,
    pub positional: Vec<f64>,
    pub named: Vec<(String, f64)>,
    source: String,
}

impl GeneratorSpec {
    /// `p` resolves the symbol `p`; specs that mention it fail without one.
    pub fn parse(spec: &str, p: Option<f64>) -> Result<Self> {
        let bad = |reason: String| LabError::BadGenerator {
            spec: spec.to_string(),
            reason,
        };
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => (spec.trim(), ""),
        };
        if name.is_empty() {
            return Err(bad("missing generator name".into()));
        }
        let mut positional = Vec::new();
        let mut named = Vec::new();
        for arg in args.split(',').map(str::trim).filter(|a| !a.is_empty()) {
            match arg.split_once('=') {
                Some((k, v)) => named.push((k.trim().to_string(), parse_value(v.trim(), p).map_err(&bad)?)),
                None => positional.push(parse_value(arg, p).map_err(&bad)?),
            }
        }
        if !positional.is_empty() && !named.is_empty() {
            return Err(bad("mixes positional and named arguments".into()));
        }
        Ok(Self {
            name: name.to_string(),
            positional,
            named,
            source: spec.to_string(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Argument by name, falling back to position `index`, then to `default`.
    pub fn arg(&self, key: &str, index: usize, default: Option<f64>) -> Result<f64> {
        if let Some((_, v)) = self.named.iter().find(|(k, _)| k == key) {
            return Ok(*v);
        }
        if let Some(v) = self.positional.get(index) {
            return Ok(*v);
        }
        default.ok_or_else(|| LabError::BadGenerator {
            spec: self.source.clone(),
            reason: format!("missing argument `{key}`"),
        })
    }

    /// All positional values, or the values of named args in order.
    pub fn values(&self) -> Vec<f64> {
        if self.positional.is_empty() {
            self.named.iter().map(|(_, v)| *v).collect()
        } else {
            self.positional.clone()
        }
    }
}

fn parse_term(s: &str, p: Option<f64>) -> Result<f64, String> {
    if s == "p" {
        return p.ok_or_else(|| "`p` used but no exponent given".to_string());
    }
    s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

fn parse_value(s: &str, p: Option<f64>) -> Result<f64, String> {
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_term(den.trim(), p)?;
            if d == 0.0 {
                return Err(format!("division by zero in `{s}`"));
            }
            Ok(parse_term(num.trim(), p)? / d)
        }
        None => parse_term(s, p),
    }
}
