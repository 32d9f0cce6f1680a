use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, DEFAULT_PRIME};

/// A polynomial ring `K[x_1, ..., x_n]` with named variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingContext {
    field: Field,
    vars: Vec<String>,
}

impl RingContext {
    pub fn new(field: Field, vars: Vec<String>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::domain("a ring needs at least one variable"));
        }
        let mut seen = HashSet::new();
        for v in &vars {
            let ok = !v.is_empty()
                && v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
            if !ok {
                return Err(Error::domain(format!("invalid variable name `{v}`")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::domain(format!("duplicate variable name `{v}`")));
            }
        }
        if let Field::Prime(p) = field {
            // re-validate in case the caller built the variant directly
            Field::prime(p)?;
        }
        Ok(Self { field, vars })
    }

    /// Ring over the default prime field.
    pub fn with_vars<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        Self::new(
            Field::Prime(DEFAULT_PRIME),
            vars.iter().map(|s| s.as_ref().to_string()).collect(),
        )
    }

    /// Ring over the rationals.
    pub fn rational<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        Self::new(
            Field::Rationals,
            vars.iter().map(|s| s.as_ref().to_string()).collect(),
        )
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_field(&self, field: Field) -> Result<Self> {
        Self::new(field, self.vars.clone())
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RingJson {
    pub n: usize,
    pub field: String,
    pub vars: Vec<String>,
}

impl Serialize for RingContext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RingJson {
            n: self.num_vars(),
            field: self.field.to_string(),
            vars: self.vars.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingContext {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RingJson::deserialize(d)?;
        if raw.n != raw.vars.len() {
            return Err(serde::de::Error::custom(format!(
                "ring declares n = {} but lists {} variables",
                raw.n,
                raw.vars.len()
            )));
        }
        let field: Field = raw.field.parse().map_err(serde::de::Error::custom)?;
        RingContext::new(field, raw.vars).map_err(serde::de::Error::custom)
    }
}
