//! Ideal descriptions in TOML, plus the bundled corpus.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::polycore::{parse_poly, MonomialOrder, Poly, Ring};
use crate::scalar::Field;

/// An ideal as written in a spec file. `reduction` is 1-based.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    pub name: String,
    #[serde(default)]
    pub group: String,
    #[serde(default = "default_field")]
    pub field: String,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    #[serde(default)]
    pub reduction: Option<Vec<usize>>,
    #[serde(default)]
    pub expected: Expected,
    /// Scripted derivation of higher equations, written in the Rees ring.
    #[serde(default)]
    pub two_step: Vec<TwoStep>,
}

/// `f = u F_u + v F_v` and `h = u H_u + v H_v`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoStep {
    pub u: String,
    pub v: String,
    pub f_u: String,
    pub f_v: String,
    pub h_u: String,
    pub h_v: String,
}

fn default_field() -> String {
    "Q".to_string()
}

/// Published values a fixture is checked against. Every field is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub series_quotient: Option<Vec<i64>>,
    pub series_colon: Option<Vec<i64>>,
    pub series_content: Option<Vec<i64>>,
    pub colon_generators: Option<usize>,
    pub balance: Option<u32>,
    pub syzygies: Option<usize>,
    pub syzygy_degrees: Option<Vec<(u32, usize)>>,
    pub epsilon: Option<u32>,
    pub r_min: Option<u32>,
    pub nu: Option<Vec<(u32, usize)>>,
    pub edeg: Option<u32>,
    pub birational: Option<bool>,
    pub elimination: Option<String>,
    pub presentation: Option<Vec<Vec<String>>>,
    pub symmetric: Option<Vec<String>>,
    pub hforms: Option<Vec<String>>,
    pub matrix: Option<Vec<Vec<String>>>,
    pub det_degree: Option<u32>,
    pub power: Option<u32>,
    pub quadrics_case: Option<String>,
}

/// A parsed spec: ring and generators ready for the algebra.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub spec: IdealSpec,
    pub ring: Arc<Ring>,
    pub gens: Vec<Poly>,
}

impl Loaded {
    /// The same ideal in a ring with another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Loaded {
        let ring = self.ring.with_order(order);
        let gens = self.gens.iter().map(|g| g.reorder(&ring)).collect();
        Loaded { spec: self.spec.clone(), ring, gens }
    }
}

impl IdealSpec {
    pub fn from_toml(text: &str) -> Result<IdealSpec> {
        toml::from_str(text).map_err(|e| Error::Input(format!("bad spec: {}", e.message())))
    }

    pub fn from_path(path: &Path) -> Result<IdealSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        IdealSpec::from_toml(&text)
    }

    pub fn load(&self) -> Result<Loaded> {
        self.load_with(None)
    }

    /// Parse with an optional field override.
    pub fn load_with(&self, field: Option<Field>) -> Result<Loaded> {
        let field = match field {
            Some(f) => f,
            None => Field::parse(&self.field).ok_or_else(|| Error::Input(format!("unknown field `{}`", self.field)))?,
        };
        let ring = Ring::new(self.variables.clone(), field)?;
        if ring.t_mask() != 0 || ring.aux_mask() != 0 {
            return Err(Error::Input("variable names starting with `T` or equal to `t` are reserved".into()));
        }
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            let p = parse_poly(g, &ring).map_err(|e| Error::Input(format!("generator {}: {e}", i + 1)))?;
            gens.push(p);
        }
        if let Some(red) = &self.reduction {
            if red.iter().any(|&i| i == 0 || i > gens.len()) {
                return Err(Error::Input("reduction indices are 1-based positions of generators".into()));
            }
        }
        Ok(Loaded { spec: self.clone(), ring, gens })
    }

    /// 0-based reduction positions.
    pub fn reduction0(&self) -> Option<Vec<usize>> {
        self.reduction.as_ref().map(|r| r.iter().map(|i| i - 1).collect())
    }
}

const CORPUS: &[(&str, &str)] = &[
    ("quaternary-cubics", include_str!("../fixtures/quaternary-cubics.toml")),
    ("ternary-monomial-cubics", include_str!("../fixtures/ternary-monomial-cubics.toml")),
    ("binary", include_str!("../fixtures/binary.toml")),
    ("ternary-quadrics", include_str!("../fixtures/ternary-quadrics.toml")),
    ("ternary-quadrics-degenerate", include_str!("../fixtures/ternary-quadrics-degenerate.toml")),
    ("ternary-cubics", include_str!("../fixtures/ternary-cubics.toml")),
    ("ternary-cubics-gorenstein", include_str!("../fixtures/ternary-cubics-gorenstein.toml")),
    ("ternary-quartics", include_str!("../fixtures/ternary-quartics.toml")),
    ("quaternary-quadrics", include_str!("../fixtures/quaternary-quadrics.toml")),
    ("quaternary-quadrics-square", include_str!("../fixtures/quaternary-quadrics-square.toml")),
    ("quaternary-quadrics-two-step", include_str!("../fixtures/quaternary-quadrics-two-step.toml")),
];

/// The bundled fixtures, in a fixed order.
pub fn corpus() -> Vec<IdealSpec> {
    CORPUS
        .iter()
        .map(|(name, text)| {
            let s = IdealSpec::from_toml(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
            assert_eq!(&s.name, name);
            s
        })
        .collect()
}

pub fn fixture(name: &str) -> Option<IdealSpec> {
    corpus().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses() {
        for s in corpus() {
            let l = s.load().unwrap();
            assert_eq!(l.gens.len(), l.ring.nvars() + 1, "{}", s.name);
        }
    }

    #[test]
    fn malformed_specs_are_input_errors() {
        let bad = "name = \"x\"\nvariables = [\"x\"]\ngenerators = [\"x^\"]\n";
        let e = IdealSpec::from_toml(bad).unwrap().load().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(IdealSpec::from_toml("name = 3").is_err());
        let reserved = "name = \"x\"\nvariables = [\"T1\"]\ngenerators = [\"T1\"]\n";
        assert!(IdealSpec::from_toml(reserved).unwrap().load().is_err());
    }
}
