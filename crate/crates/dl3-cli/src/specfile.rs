//! The curve-spec JSON document and its translation to a core `CurveSpec`.
//!
//! ```json
//! {
//!   "source": "builtin" | "expressions" | "invariants" | "table",
//!   "family": "timelike_hyperbolic_helix",     // builtin only
//!   "params": {"a": 2.0, "b": 1.0},            // builtin only
//!   "components": {"x1": "...", "x2": "...", "x3": "...",
//!                  "x1d": "...", "x2d": "...", "x3d": "..."},  // expressions
//!   "P": "expr in s",                          // invariants (frenet needs it)
//!   "Q": "expr in s",                          // invariants
//!   "lambda": {"re": -0.5, "du": 0.0},         // invariants (partner needs it)
//!   "range": [0.0, 2.0],
//!   "samples": 2001,
//!   "table_path": "rows.csv"                   // table only
//! }
//! ```
//!
//! Exactly the fields required by the source kind may appear; anything else
//! is rejected with a field-level message.

use dl3::curve::{BuiltinFamily, CurveSource, CurveSpec, SampledTable};
use dl3::expr::parse;
use dl3::{DualScalar, Error};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DualJson {
    pub re: f64,
    pub du: f64,
}

impl From<DualJson> for DualScalar {
    fn from(d: DualJson) -> Self {
        DualScalar::new(d.re, d.du)
    }
}

impl From<DualScalar> for DualJson {
    fn from(d: DualScalar) -> Self {
        DualJson { re: d.re, du: d.du }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentsFile {
    pub x1: String,
    pub x2: String,
    pub x3: String,
    pub x1d: Option<String>,
    pub x2d: Option<String>,
    pub x3d: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpecFile {
    pub source: String,
    pub family: Option<String>,
    pub params: Option<BTreeMap<String, f64>>,
    pub components: Option<ComponentsFile>,
    #[serde(rename = "P")]
    pub p: Option<String>,
    #[serde(rename = "Q")]
    pub q: Option<String>,
    pub lambda: Option<DualJson>,
    pub range: [f64; 2],
    pub samples: usize,
    pub table_path: Option<String>,
}

fn forbid(cond: bool, source: &str, field: &str) -> Result<(), Error> {
    if cond {
        Err(Error::Input(format!(
            "field `{field}` is not valid for source \"{source}\""
        )))
    } else {
        Ok(())
    }
}

fn parse_field(name: &str, text: &str) -> Result<(dl3::expr::Expr, String), Error> {
    match parse(text) {
        Ok(e) => Ok((e, text.to_string())),
        Err(Error::Parse { offset, message }) => Err(Error::Parse {
            offset,
            message: format!("in field `{name}`: {message}"),
        }),
        Err(other) => Err(other),
    }
}

impl CurveSpecFile {
    /// Structural validation plus translation; `base_dir` anchors relative
    /// table paths.
    pub fn to_curve_spec(&self, base_dir: &Path) -> Result<CurveSpec, Error> {
        let source = match self.source.as_str() {
            "builtin" => {
                forbid(self.components.is_some(), "builtin", "components")?;
                forbid(self.p.is_some(), "builtin", "P")?;
                forbid(self.q.is_some(), "builtin", "Q")?;
                forbid(self.table_path.is_some(), "builtin", "table_path")?;
                let family = self.family.as_deref().ok_or_else(|| {
                    Error::Input("source \"builtin\" requires field `family`".into())
                })?;
                let empty = BTreeMap::new();
                let params = self.params.as_ref().unwrap_or(&empty);
                CurveSource::Builtin(BuiltinFamily::from_registry(family, params)?)
            }
            "expressions" => {
                forbid(self.family.is_some(), "expressions", "family")?;
                forbid(self.params.is_some(), "expressions", "params")?;
                forbid(self.p.is_some(), "expressions", "P")?;
                forbid(self.q.is_some(), "expressions", "Q")?;
                forbid(self.table_path.is_some(), "expressions", "table_path")?;
                let c = self.components.as_ref().ok_or_else(|| {
                    Error::Input("source \"expressions\" requires field `components`".into())
                })?;
                let zero = "0".to_string();
                let re = [
                    parse_field("x1", &c.x1)?,
                    parse_field("x2", &c.x2)?,
                    parse_field("x3", &c.x3)?,
                ];
                let du = [
                    parse_field("x1d", c.x1d.as_ref().unwrap_or(&zero))?,
                    parse_field("x2d", c.x2d.as_ref().unwrap_or(&zero))?,
                    parse_field("x3d", c.x3d.as_ref().unwrap_or(&zero))?,
                ];
                CurveSource::Expressions { re, du }
            }
            "invariants" => {
                forbid(self.family.is_some(), "invariants", "family")?;
                forbid(self.params.is_some(), "invariants", "params")?;
                forbid(self.components.is_some(), "invariants", "components")?;
                forbid(self.table_path.is_some(), "invariants", "table_path")?;
                let q = self.q.as_deref().ok_or_else(|| {
                    Error::Input("source \"invariants\" requires field `Q`".into())
                })?;
                let p = self.p.as_deref().ok_or_else(|| {
                    Error::Input(
                        "source \"invariants\" requires field `P` to realize the curve \
                         (the partner command derives P and must not receive it)"
                            .into(),
                    )
                })?;
                CurveSource::Invariants {
                    p: parse_field("P", p)?,
                    q: parse_field("Q", q)?,
                    frame0: None,
                }
            }
            "table" => {
                forbid(self.family.is_some(), "table", "family")?;
                forbid(self.params.is_some(), "table", "params")?;
                forbid(self.components.is_some(), "table", "components")?;
                forbid(self.p.is_some(), "table", "P")?;
                forbid(self.q.is_some(), "table", "Q")?;
                let rel = self.table_path.as_deref().ok_or_else(|| {
                    Error::Input("source \"table\" requires field `table_path`".into())
                })?;
                let path = base_dir.join(rel);
                let content = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("reading table {}: {e}", path.display())))?;
                CurveSource::Table(SampledTable::from_csv(&content)?)
            }
            other => {
                return Err(Error::Input(format!(
                    "unknown source kind \"{other}\" (expected builtin, expressions, \
                     invariants or table)"
                )))
            }
        };
        let spec = CurveSpec {
            source,
            range: (self.range[0], self.range[1]),
            samples: self.samples,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// The pair manifest written next to alpha.csv/beta.csv.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairManifest {
    pub lambda: DualJson,
    pub range: [f64; 2],
    pub steps: usize,
    pub branch: String,
}
