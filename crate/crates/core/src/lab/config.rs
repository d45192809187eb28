//! Experiment configuration: a flat `key = value` file (TOML syntax, no
//! tables) with a fixed set of typed keys per subcommand.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Subcommand {
    BvScan,
    XiFind,
    SmoothPsi,
    Rho,
    Alpha,
    Ramare,
    Barrier,
    Construct,
    Uk,
}

pub const SUBCOMMANDS: [Subcommand; 9] = [
    Subcommand::BvScan,
    Subcommand::XiFind,
    Subcommand::SmoothPsi,
    Subcommand::Rho,
    Subcommand::Alpha,
    Subcommand::Ramare,
    Subcommand::Barrier,
    Subcommand::Construct,
    Subcommand::Uk,
];

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::BvScan => "bv-scan",
            Subcommand::XiFind => "xi-find",
            Subcommand::SmoothPsi => "smooth-psi",
            Subcommand::Rho => "rho",
            Subcommand::Alpha => "alpha",
            Subcommand::Ramare => "ramare",
            Subcommand::Barrier => "barrier",
            Subcommand::Construct => "construct",
            Subcommand::Uk => "uk",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SUBCOMMANDS
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config { line: None, msg: format!("unknown subcommand `{s}`") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyType {
    Int,
    Float,
    Bool,
    Str,
    /// A number or an array of numbers.
    FloatList,
    IntList,
    StrList,
}

impl KeyType {
    pub fn describe(self) -> &'static str {
        match self {
            KeyType::Int => "integer",
            KeyType::Float => "number",
            KeyType::Bool => "boolean",
            KeyType::Str => "string",
            KeyType::FloatList => "number or array of numbers",
            KeyType::IntList => "integer or array of integers",
            KeyType::StrList => "string or array of strings",
        }
    }
}

use Subcommand as S;

/// `(key, type, subcommands accepting it, subcommands requiring it)`.
pub const KEYS: &[(&str, KeyType, &[Subcommand], &[Subcommand])] = &[
    ("schema", KeyType::Int, &SUBCOMMANDS, &SUBCOMMANDS),
    ("seed", KeyType::Int, &SUBCOMMANDS, &[]),
    ("output", KeyType::Str, &SUBCOMMANDS, &[]),
    ("f", KeyType::Str, &[S::BvScan, S::XiFind, S::Ramare, S::Uk], &[S::BvScan, S::XiFind, S::Ramare, S::Uk]),
    (
        "x",
        KeyType::FloatList,
        &[S::BvScan, S::XiFind, S::SmoothPsi, S::Alpha, S::Ramare, S::Barrier, S::Construct],
        &[S::BvScan, S::XiFind, S::SmoothPsi, S::Alpha, S::Ramare, S::Barrier],
    ),
    ("q_spec", KeyType::Str, &[S::BvScan, S::Ramare], &[S::BvScan, S::Ramare]),
    ("variant", KeyType::Str, &[S::BvScan], &[]),
    ("k", KeyType::IntList, &[S::BvScan, S::Uk], &[S::Uk]),
    ("xi", KeyType::StrList, &[S::BvScan], &[]),
    ("filter", KeyType::Str, &[S::BvScan, S::SmoothPsi], &[]),
    ("w", KeyType::Int, &[S::BvScan, S::Ramare], &[]),
    ("cutoff", KeyType::Int, &[S::BvScan, S::XiFind], &[]),
    ("z", KeyType::Float, &[S::BvScan, S::XiFind], &[]),
    ("b", KeyType::Float, &[S::XiFind], &[]),
    ("y", KeyType::FloatList, &[S::SmoothPsi, S::Alpha], &[S::SmoothPsi, S::Alpha]),
    ("d", KeyType::IntList, &[S::SmoothPsi], &[]),
    ("tail_w", KeyType::Int, &[S::SmoothPsi], &[]),
    ("tail_y", KeyType::Int, &[S::SmoothPsi], &[]),
    ("u", KeyType::FloatList, &[S::Rho], &[S::Rho]),
    ("sieve_y", KeyType::Float, &[S::Ramare], &[S::Ramare]),
    ("sieve_z", KeyType::Float, &[S::Ramare], &[S::Ramare]),
    ("restrict_main", KeyType::Bool, &[S::Ramare], &[]),
    ("residue", KeyType::Int, &[S::Ramare, S::Barrier], &[]),
    ("quads", KeyType::StrList, &[S::Barrier], &[]),
    ("quad_range", KeyType::IntList, &[S::Barrier], &[]),
    ("quad_count", KeyType::Int, &[S::Barrier], &[]),
    ("big_p", KeyType::Int, &[S::Barrier], &[]),
    ("eta", KeyType::Float, &[S::Barrier], &[S::Barrier]),
    ("h_poisson", KeyType::Int, &[S::Barrier], &[]),
    ("h_main", KeyType::IntList, &[S::Barrier], &[]),
    ("big_q", KeyType::Float, &[S::Barrier, S::Construct], &[]),
    ("kind", KeyType::Str, &[S::Construct], &[S::Construct]),
    ("base", KeyType::Str, &[S::Construct], &[]),
    ("q", KeyType::Int, &[S::Construct, S::Uk], &[]),
    ("a", KeyType::Int, &[S::Uk], &[]),
    ("len", KeyType::Int, &[S::Uk], &[S::Uk]),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    FloatList(Vec<f64>),
    IntList(Vec<i64>),
    StrList(Vec<String>),
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub subcommand: Subcommand,
    values: BTreeMap<String, Value>,
    lines: BTreeMap<String, usize>,
    /// SHA-256 of the file contents, hex.
    pub hash: String,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line on which `key` is assigned.
fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        let rest = l
            .strip_prefix(key)
            .or_else(|| l.strip_prefix(&format!("\"{key}\"")));
        rest.is_some_and(|r| r.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn convert(v: &toml::Value, ty: KeyType) -> Option<Value> {
    use toml::Value as T;
    let num = |v: &T| match v {
        T::Integer(i) => Some(*i as f64),
        T::Float(f) => Some(*f),
        _ => None,
    };
    let list = |v: &T| match v {
        T::Array(a) => a.clone(),
        other => vec![other.clone()],
    };
    Some(match ty {
        KeyType::Int => Value::Int(v.as_integer()?),
        KeyType::Float => Value::Float(num(v)?),
        KeyType::Bool => Value::Bool(v.as_bool()?),
        KeyType::Str => Value::Str(v.as_str()?.to_string()),
        KeyType::FloatList => Value::FloatList(list(v).iter().map(num).collect::<Option<_>>()?),
        KeyType::IntList => Value::IntList(list(v).iter().map(T::as_integer).collect::<Option<_>>()?),
        KeyType::StrList => {
            Value::StrList(list(v).iter().map(|s| s.as_str().map(str::to_string)).collect::<Option<_>>()?)
        }
    })
}

impl ExperimentConfig {
    /// Parses and validates `text` for `subcommand`.
    pub fn parse(subcommand: Subcommand, text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config {
            line: e.span().map(|s| line_of(text, s.start)),
            msg: e.message().trim().to_string(),
        })?;
        let mut values = BTreeMap::new();
        let mut lines = BTreeMap::new();
        for (key, v) in &table {
            let line = key_line(text, key);
            let Some(&(_, ty, allowed, _)) = KEYS.iter().find(|k| k.0 == key) else {
                return Err(Error::Config { line, msg: format!("unknown key `{key}`") });
            };
            if !allowed.contains(&subcommand) {
                return Err(Error::Config { line, msg: format!("key `{key}` is not used by `{subcommand}`") });
            }
            let value = convert(v, ty).ok_or_else(|| Error::Config {
                line,
                msg: format!("key `{key}`: expected {}", ty.describe()),
            })?;
            values.insert(key.clone(), value);
            if let Some(l) = line {
                lines.insert(key.clone(), l);
            }
        }
        for &(key, _, _, required) in KEYS {
            if required.contains(&subcommand) && !values.contains_key(key) {
                return Err(Error::Config {
                    line: None,
                    msg: format!("missing required key `{key}` for `{subcommand}`"),
                });
            }
        }
        if let Some(Value::Int(v)) = values.get("schema") {
            if *v != SCHEMA_VERSION {
                return Err(Error::Config {
                    line: lines.get("schema").copied(),
                    msg: format!("schema version {v} not supported (expected {SCHEMA_VERSION})"),
                });
            }
        }
        let hash = hex::encode(Sha256::digest(text.as_bytes()));
        Ok(ExperimentConfig { subcommand, values, lines, hash })
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// A config error attributed to the line defining `key`.
    pub fn error(&self, key: &str, msg: impl fmt::Display) -> Error {
        Error::Config { line: self.lines.get(key).copied(), msg: format!("key `{key}`: {msg}") }
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        match self.values.get(key) {
            Some(Value::Int(v)) => Some(*v),
            _ => None,
        }
    }

    /// A nonnegative integer.
    pub fn uint(&self, key: &str) -> Result<Option<u64>> {
        self.int(key)
            .map(|v| u64::try_from(v).map_err(|_| self.error(key, "must be nonnegative")))
            .transpose()
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        match self.values.get(key) {
            Some(Value::Float(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn bool(&self, key: &str) -> Option<bool> {
        match self.values.get(key) {
            Some(Value::Bool(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        match self.values.get(key) {
            Some(Value::Str(v)) => Some(v),
            _ => None,
        }
    }

    pub fn floats(&self, key: &str) -> Option<&[f64]> {
        match self.values.get(key) {
            Some(Value::FloatList(v)) => Some(v),
            _ => None,
        }
    }

    pub fn ints(&self, key: &str) -> Option<&[i64]> {
        match self.values.get(key) {
            Some(Value::IntList(v)) => Some(v),
            _ => None,
        }
    }

    pub fn strs(&self, key: &str) -> Option<&[String]> {
        match self.values.get(key) {
            Some(Value::StrList(v)) => Some(v),
            _ => None,
        }
    }

    /// Parses a string-valued key, attributing failures to its line.
    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.str(key)
            .map(|s| s.parse::<T>().map_err(|e| self.error(key, e)))
            .transpose()
    }
}

/// Range of moduli `lo < q ≤ hi` from a `q_spec` string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QSpec {
    /// `dyadic:<Q>`: `Q < q ≤ 2Q`.
    Dyadic(u64),
    /// `power:<θ>`: dyadic with `Q = ⌊x^θ⌋`.
    Power(f64),
    /// `range:<lo>:<hi>`.
    Range(u64, u64),
}

impl FromStr for QSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("bad Q-spec `{s}` (want dyadic:<Q>, power:<θ> or range:<lo>:<hi>)");
        let mut parts = s.trim().split(':');
        let spec = match (parts.next(), parts.next(), parts.next()) {
            (Some("dyadic"), Some(q), None) => QSpec::Dyadic(q.parse().map_err(|_| bad())?),
            (Some("power"), Some(t), None) => {
                let t: f64 = t.parse().map_err(|_| bad())?;
                if !(t > 0.0 && t <= 1.0) {
                    return Err(bad());
                }
                QSpec::Power(t)
            }
            (Some("range"), Some(lo), Some(hi)) => {
                QSpec::Range(lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?)
            }
            _ => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(spec)
    }
}

impl QSpec {
    pub fn range(&self, x: f64) -> crate::disc::QRange {
        use crate::disc::QRange;
        match *self {
            QSpec::Dyadic(q) => QRange::dyadic(q),
            // nudge so that exact powers like 10^6^{1/2} are not floored down
            QSpec::Power(t) => QRange::dyadic((x.powf(t) * (1.0 + 1e-12)).floor() as u64),
            QSpec::Range(lo, hi) => QRange { lo, hi },
        }
    }
}
