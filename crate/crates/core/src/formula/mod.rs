//! Prenex arithmetical formulae `forall z.. exists x1 forall y1 .. exists xh
//! forall yh (f(z, x, y) = 0)`, their functions and the bounded G0 oracle.

mod oracle;
mod primrec;
mod theta;
pub mod turing;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use oracle::{bounded_truth, truth_oracle_g0, Verdict};
pub use primrec::{g_fn, parse_dsl, phi4_fn, Natives, PrimRecFn};
pub use theta::{make_theta, register_theta, Theta};

use crate::Error;

/// `forall z1..zg exists x1 forall y1 .. exists xh forall yh (f = 0)`,
/// with `f` taking its arguments in the order `(z, x, y)`.
#[derive(Clone, Debug)]
pub struct ArithFormula {
    pub name: String,
    /// Number of leading universal variables.
    pub g: usize,
    /// Number of exists-forall blocks.
    pub h: usize,
    pub f: PrimRecFn,
}

impl ArithFormula {
    pub fn new(name: &str, g: usize, h: usize, f: PrimRecFn) -> Result<Self, Error> {
        if f.arity() != g + 2 * h {
            return Err(Error::Arity {
                expected: g + 2 * h,
                got: f.arity(),
            });
        }
        Ok(ArithFormula {
            name: name.to_string(),
            g,
            h,
            f,
        })
    }

    /// `f(z, m, n)` for a complete position.
    pub fn eval(&self, z: &[u64], m: &[u64], n: &[u64]) -> Result<u64, Error> {
        if z.len() != self.g || m.len() != self.h || n.len() != self.h {
            return Err(Error::Arity {
                expected: self.g + 2 * self.h,
                got: z.len() + m.len() + n.len(),
            });
        }
        let args: Vec<u64> = z.iter().chain(m).chain(n).copied().collect();
        self.f.eval(&args)
    }

    /// The formula with its leading universal block fixed to `z`.
    pub fn close(&self, z: &[u64]) -> Result<ArithFormula, Error> {
        if z.len() != self.g {
            return Err(Error::Arity {
                expected: self.g,
                got: z.len(),
            });
        }
        let (f, z) = (self.f.clone(), z.to_vec());
        let arity = 2 * self.h;
        let closed = PrimRecFn::native(&self.name, arity, move |a| {
            let args: Vec<u64> = z.iter().chain(a).copied().collect();
            f.eval(&args).unwrap_or(1)
        });
        ArithFormula::new(&self.name, 0, self.h, closed)
    }
}

/// How a formula's function is given in a formula file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FnSpec {
    Native(String),
    Dsl(String),
}

/// One record of a formula file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaSpec {
    pub name: String,
    pub h: usize,
    #[serde(rename = "leadingForall", default)]
    pub leading_forall: usize,
    #[serde(rename = "fn")]
    pub function: FnSpec,
}

impl FormulaSpec {
    pub fn build(&self, natives: &Natives) -> Result<ArithFormula, Error> {
        let f = match &self.function {
            FnSpec::Native(n) => natives.get(n)?,
            FnSpec::Dsl(src) => parse_dsl(src, natives)?,
        };
        ArithFormula::new(&self.name, self.leading_forall, self.h, f)
    }
}

/// Named formulae. Built-ins: `leq`, `phi4`, `halt`, `true`, `false`.
#[derive(Clone)]
pub struct FormulaRegistry {
    natives: Natives,
    formulas: BTreeMap<String, ArithFormula>,
}

impl Default for FormulaRegistry {
    fn default() -> Self {
        FormulaRegistry::builtin()
    }
}

impl FormulaRegistry {
    pub fn builtin() -> Self {
        let mut r = FormulaRegistry {
            natives: Natives::builtin(),
            formulas: BTreeMap::new(),
        };
        let specs = [
            ("leq", 0, 1, "leq"),
            ("phi4", 0, 2, "phi4"),
            ("halt", 1, 1, "f_H"),
            ("true", 0, 1, "true"),
            ("false", 0, 1, "false"),
        ];
        for (name, g, h, native) in specs {
            let spec = FormulaSpec {
                name: name.into(),
                h,
                leading_forall: g,
                function: FnSpec::Native(native.into()),
            };
            r.add(&spec).expect("builtin formulas are well-formed");
        }
        r
    }

    pub fn natives(&self) -> &Natives {
        &self.natives
    }

    pub fn add(&mut self, spec: &FormulaSpec) -> Result<ArithFormula, Error> {
        if self.formulas.contains_key(&spec.name) {
            return Err(Error::Duplicate(spec.name.clone()));
        }
        let phi = spec.build(&self.natives)?;
        self.formulas.insert(spec.name.clone(), phi.clone());
        Ok(phi)
    }

    /// Load a JSON array of formula records (or a single record).
    pub fn load_json(&mut self, text: &str) -> Result<Vec<ArithFormula>, Error> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let specs: Vec<FormulaSpec> = match value {
            serde_json::Value::Array(_) => serde_json::from_value(value),
            _ => serde_json::from_value(value).map(|s| vec![s]),
        }
        .map_err(|e| Error::Config(e.to_string()))?;
        specs.iter().map(|s| self.add(s)).collect()
    }

    pub fn get(&self, name: &str) -> Result<ArithFormula, Error> {
        self.formulas
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown formula `{name}`")))
    }

    pub fn names(&self) -> Vec<String> {
        self.formulas.keys().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let r = FormulaRegistry::builtin();
        let leq = r.get("leq").unwrap();
        assert_eq!((leq.g, leq.h), (0, 1));
        assert_eq!(leq.eval(&[], &[0], &[5]).unwrap(), 0);
        let halt = r.get("halt").unwrap();
        assert_eq!((halt.g, halt.h), (1, 1));
        let phi4 = r.get("phi4").unwrap();
        assert_eq!(phi4.eval(&[], &[0, 2], &[1, 1]).unwrap(), 0);
        assert_ne!(phi4.eval(&[], &[1, 1], &[0, 1]).unwrap(), 0);
        assert!(r.get("nope").is_err());
    }

    #[test]
    fn json_records() {
        let mut r = FormulaRegistry::builtin();
        let loaded = r
            .load_json(
                r#"[{"name": "plus", "h": 1, "fn": {"dsl": "(rec (proj 1 1) (comp succ (proj 3 2)))"}},
                    {"name": "le2", "h": 1, "leadingForall": 0, "fn": {"native": "leq"}}]"#,
            )
            .unwrap();
        assert_eq!(loaded.len(), 2);
        assert_eq!(r.get("plus").unwrap().eval(&[], &[2], &[3]).unwrap(), 5);
        assert!(r
            .load_json(r#"{"name": "bad", "h": 2, "fn": {"native": "leq"}}"#)
            .is_err());
        assert!(r.load_json("{").is_err());
    }

    #[test]
    fn closing_the_leading_block() {
        let r = FormulaRegistry::builtin();
        let halt = r.get("halt").unwrap();
        let m = turing::m_loop().index();
        let closed = halt.close(&[m]).unwrap();
        assert_eq!((closed.g, closed.h), (0, 1));
        assert_eq!(closed.eval(&[], &[0], &[7]).unwrap(), 0);
    }
}
