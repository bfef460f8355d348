//! Concrete realizers: the basic combinators, the identity-like family, the
//! halting-problem realizer `t_H`, the wild realizer `t_leq`, the universal
//! realizer `t_phi`, a storage operator and two small fixtures for scheme
//! extraction. [`Library`] collects them by name.

pub mod codec;
pub mod enumerate;
pub mod phi;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::formula::{register_theta, turing, FormulaRegistry};
use crate::syntax::{numeral, parse_term, parse_term_open, subst_var, succ, Extra, Registry, Term};
use crate::Error;

pub use enumerate::{box_index_bound, index_of, next_tuple};
pub use phi::{register_phi, PhiProbe};

fn closed(src: &str, reg: &Registry) -> Term {
    parse_term(src, reg).unwrap_or_else(|e| panic!("built-in term `{src}`: {e}"))
}

/// Parse `src` with free variables, then plug the given terms in.
fn template(src: &str, reg: &Registry, args: &[(&str, &Term)]) -> Term {
    let t = parse_term_open(src, reg).unwrap_or_else(|e| panic!("built-in template `{src}`: {e}"));
    args.iter().fold(t, |acc, (x, u)| subst_var(&acc, x, u))
}

pub fn identity() -> Term {
    closed(r"\x.x", &Registry::empty())
}

pub fn delta() -> Term {
    closed(r"\x.x x", &Registry::empty())
}

pub fn delta_prime() -> Term {
    closed(r"\x.x x (\y.y)", &Registry::empty())
}

pub fn first() -> Term {
    closed(r"\p.p (\x y.x)", &Registry::empty())
}

pub fn second() -> Term {
    closed(r"\p.p (\x y.y)", &Registry::empty())
}

/// Terms `t` with `t * u . pi  >  u * pi` for all `u`, `pi`.
pub fn identity_like(reg: &Registry) -> Vec<(&'static str, Term)> {
    [
        ("I", r"\x.x"),
        ("II", r"(\x.x) (\x.x)"),
        ("dI", r"(\x.x x) (\x.x)"),
        ("cc_x", r"\x.cc (\k.x)"),
        ("cc_kIdk", r"cc (\k.k (\x.x) (\x.x x) k)"),
    ]
    .into_iter()
    .map(|(n, s)| (n, closed(s, reg)))
    .collect()
}

/// `T * f . nu . pi  >  f * n . pi` whenever `nu` computes the numeral `n`.
pub fn storage_operator() -> Term {
    template(
        r"\f v.v (\k.k #0) (\h k.h (\x.k (S x))) f",
        &Registry::empty(),
        &[("S", &succ())],
    )
}

const T_H_BODY: &str = r"\p v.theta_H m p (k (u p (\p v.v))) v";

/// Declare `theta_H` (branching on `Halt(m, p)`) and return `t_H`.
pub fn build_t_h(reg: &Registry) -> Result<Term, Error> {
    register_theta(reg, "theta_H", turing::halt0(), (1, 1))?;
    Ok(closed(&format!(r"\m u.cc (\k.u #0 ({T_H_BODY}))"), reg))
}

/// `T[m, u, k]`, the continuation `t_H` hands to Abelard.
pub fn t_h_continuation(reg: &Registry, m: &Term, u: &Term, k: &Term) -> Term {
    template(T_H_BODY, reg, &[("m", m), ("u", u), ("k", k)])
}

const T2: &str = r"\d w.quote (\n.eq_nat n m (eq w (y y) (\x.x) w) w)";

fn t1_src() -> String {
    format!(r"\y.u #0 ({T2})")
}

/// The registry with `quote`, `eq` and `eq_nat`, as `t_leq` needs.
pub fn quoting_registry() -> Registry {
    Registry::with_extras(&[Extra::Quote, Extra::Eq, Extra::EqNat])
}

/// `t_leq = \u.quote (\m.T0[u, m])`.
pub fn build_t_leq(reg: &Registry) -> Result<Term, Error> {
    for name in ["quote", "eq", "eq_nat"] {
        if !reg.has_instruction(name) {
            return Err(Error::Config(format!("t_leq needs the `{name}` instruction")));
        }
    }
    let t1 = t1_src();
    parse_term(&format!(r"\u.quote (\m.({t1}) ({t1}))"), reg)
}

pub fn t_leq_t2(reg: &Registry, y: &Term, m: &Term) -> Term {
    template(T2, reg, &[("y", y), ("m", m)])
}

pub fn t_leq_t1(reg: &Registry, u: &Term, m: &Term) -> Term {
    template(&t1_src(), reg, &[("u", u), ("m", m)])
}

pub fn t_leq_t0(reg: &Registry, u: &Term, m: &Term) -> Term {
    let t1 = t_leq_t1(reg, u, m);
    Term::app(t1.clone(), t1)
}

/// `\u.u #0 (\n v.v)`: plays 0 and then hands control back to Abelard.
pub fn toy() -> Term {
    closed(r"\u.u #0 (\n v.v)", &Registry::empty())
}

/// Which former position each line of the mock scheme returns to, and the
/// integer played there.
pub const FIG_TARGETS: [usize; 6] = [0, 0, 2, 2, 0, 1];
pub const FIG_MOVES: [u64; 6] = [0, 1, 1, 2, 2, 2];
/// The position whose stack the mock finally restores.
pub const FIG_FINAL: usize = 4;
/// Answers under which the final position of the mock satisfies `phi4`.
pub const FIG_ANSWERS: [u64; 6] = [1, 0, 1, 0, 0, 1];

/// A realizer whose scheme against fresh constants has the given shape:
/// line `i` leads to position `targets[i]` with move `moves[i]`, and the last
/// line restores position `last` with no move.
///
/// Term `t_i` binds `n_i`, `k_i` and captures its stack as `c_i`, so every
/// later term can return to any former position.
pub fn scheme_mock(targets: &[usize], moves: &[u64], last: usize) -> Term {
    assert_eq!(targets.len(), moves.len());
    let var = |p: &str, i: usize| Term::free(&format!("{p}{i}"));
    let cc = Term::constant(&Registry::empty().constant("cc").expect("cc is declared"));
    let steps = targets.len();
    let mut t = Term::app(var("c", last), var("k", last));
    for i in (0..=steps).rev() {
        if i < steps {
            let j = targets[i];
            let play = Term::apps(var("k", j), [numeral(moves[i]), t]);
            t = Term::app(var("c", j), play);
        }
        let saved = Term::app(cc.clone(), Term::lam(&format!("c{i}"), t));
        t = Term::lam(&format!("k{i}"), saved);
        if i > 0 {
            t = Term::lam(&format!("n{i}"), t);
        }
    }
    t
}

/// The mock realizer for the seven-line scheme fixture.
pub fn fig_mock() -> Term {
    scheme_mock(&FIG_TARGETS, &FIG_MOVES, FIG_FINAL)
}

/// A named realizer with the registry it runs under.
#[derive(Clone)]
pub struct RealizerEntry {
    pub name: String,
    pub term: Term,
    /// The formula it is meant to realize, if any.
    pub formula: Option<String>,
    pub registry: Registry,
    /// Human-readable reduction contracts, checked by the test suite.
    pub contract: Vec<String>,
    /// History probe of a `t_phi` bundle.
    pub probe: Option<Arc<PhiProbe>>,
}

/// One record of a realizer manifest.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRecord {
    pub name: String,
    #[serde(default)]
    pub term: Option<String>,
    /// A native bundle; only `t_phi` is available.
    #[serde(default)]
    pub native: Option<String>,
    #[serde(default)]
    pub formula: Option<String>,
    /// Any of `quote`, `eq`, `eq_nat`: the term runs under the quoting registry.
    #[serde(default)]
    pub extras: Vec<String>,
}

/// All shipped realizers, by name.
pub struct Library {
    standard: Registry,
    quoting: Registry,
    formulas: FormulaRegistry,
    entries: BTreeMap<String, RealizerEntry>,
}

impl Library {
    pub fn new() -> Result<Library, Error> {
        Library::with_formulas(FormulaRegistry::builtin())
    }

    pub fn with_formulas(formulas: FormulaRegistry) -> Result<Library, Error> {
        let mut lib = Library {
            standard: Registry::standard(),
            quoting: quoting_registry(),
            formulas,
            entries: BTreeMap::new(),
        };
        let std = lib.standard.clone();
        let plain = [
            ("delta", delta(), vec!["delta * delta . pi > delta delta * pi (period 2)"]),
            ("delta_prime", delta_prime(), vec!["delta' delta' * pi grows one I every 3 steps"]),
            ("zero", numeral(0), vec![]),
            ("succ", succ(), vec![]),
            ("pair", codec::pairing(), vec!["pair * x . y . f . pi > f * x . y . pi"]),
            ("fst", first(), vec![]),
            ("snd", second(), vec![]),
            (
                "storage",
                storage_operator(),
                vec!["storage * f . nu . pi > f * n . pi when nu computes n"],
            ),
        ];
        for (name, term, contract) in plain {
            lib.add(name, term, None, &std, &contract)?;
        }
        for (name, term) in identity_like(&std) {
            lib.add(name, term, None, &std, &["t * u . pi > u * pi"])?;
        }
        let t_h = build_t_h(&std)?;
        lib.add(
            "t_H",
            t_h,
            Some("halt"),
            &std,
            &[
                "t_H * m . u . pi > u * 0 . T[m,u,k_pi] . pi",
                "T[m,u,k_pi] * p . u' . pi' > u' * pi' if m does not halt before p",
                "T[m,u,k_pi] * p . u' . pi' > u * p . (\\pv.v) . pi otherwise",
            ],
        )?;
        let quoting = lib.quoting.clone();
        let t_leq = build_t_leq(&quoting)?;
        lib.add(
            "t_leq",
            t_leq,
            Some("leq"),
            &quoting,
            &[
                "t_leq * u . pi > u * 0 . T2[T1[u,n_pi],n_pi] . pi",
                "T2[..] * n . u' . pi' > I * pi' if u' = T0[u,n_pi] and pi' = pi",
                "T2[..] * n . u' . pi' > u' * pi' otherwise",
            ],
        )?;
        for name in ["leq", "phi4"] {
            lib.add_phi(name)?;
        }
        lib.add("toy", toy(), Some("leq"), &std, &["toy * u . pi > u * 0 . (\\nv.v) . pi"])?;
        lib.add("fig_mock", fig_mock(), Some("phi4"), &std, &["scheme of shape 0 1 1.0 1.1 2 0.0, final 4"])?;
        Ok(lib)
    }

    fn add(
        &mut self,
        name: &str,
        term: Term,
        formula: Option<&str>,
        reg: &Registry,
        contract: &[&str],
    ) -> Result<(), Error> {
        self.insert(RealizerEntry {
            name: name.into(),
            term,
            formula: formula.map(String::from),
            registry: reg.clone(),
            contract: contract.iter().map(|s| s.to_string()).collect(),
            probe: None,
        })
    }

    /// Library terms must be closed and proof-like.
    pub fn insert(&mut self, entry: RealizerEntry) -> Result<(), Error> {
        if !entry.term.is_closed() {
            return Err(Error::NotClosed);
        }
        if !entry.term.is_proof_like() {
            return Err(Error::Config(format!("realizer `{}` contains a continuation", entry.name)));
        }
        if self.entries.contains_key(&entry.name) {
            return Err(Error::Duplicate(entry.name));
        }
        self.entries.insert(entry.name.clone(), entry);
        Ok(())
    }

    /// Register the native `t_phi` bundle for a formula of the library.
    pub fn add_phi(&mut self, formula: &str) -> Result<RealizerEntry, Error> {
        let phi = self.formulas.get(formula)?;
        let (c, probe) = register_phi(&self.standard, &phi)?;
        let entry = RealizerEntry {
            name: format!("t_phi_{formula}"),
            term: Term::constant(&c),
            formula: Some(formula.into()),
            registry: self.standard.clone(),
            contract: vec![
                "t_phi * u . pi > u * 0 . T1[<0..0>,<>,H0] . pi".into(),
                "T_i[..] * n . u . pi > u * m_(i+1) . T_(i+1)[..] . pi".into(),
            ],
            probe: Some(probe),
        };
        self.insert(entry.clone())?;
        Ok(entry)
    }

    /// Load manifest records (a JSON array or a single object).
    pub fn load_manifest(&mut self, text: &str) -> Result<Vec<String>, Error> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let records: Vec<ManifestRecord> = match value {
            serde_json::Value::Array(_) => serde_json::from_value(value),
            _ => serde_json::from_value(value).map(|r| vec![r]),
        }
        .map_err(|e| Error::Config(e.to_string()))?;
        let mut names = Vec::new();
        for r in records {
            match (&r.term, &r.native) {
                (Some(src), None) => {
                    let reg = if r.extras.is_empty() {
                        self.standard.clone()
                    } else {
                        for e in &r.extras {
                            if !matches!(e.as_str(), "quote" | "eq" | "eq_nat") {
                                return Err(Error::Config(format!("unknown extra `{e}`")));
                            }
                        }
                        self.quoting.clone()
                    };
                    let term = parse_term(src, &reg)?;
                    if let Some(f) = &r.formula {
                        self.formulas.get(f)?;
                    }
                    self.add(&r.name, term, r.formula.as_deref(), &reg, &[])?;
                    names.push(r.name);
                }
                (None, Some(native)) if native == "t_phi" => {
                    let f = r
                        .formula
                        .as_deref()
                        .ok_or_else(|| Error::Config("t_phi needs a formula".into()))?;
                    names.push(self.add_phi(f)?.name);
                }
                (None, Some(native)) => {
                    return Err(Error::Config(format!("unknown native bundle `{native}`")));
                }
                _ => {
                    return Err(Error::Config(format!(
                        "record `{}` needs exactly one of `term` and `native`",
                        r.name
                    )))
                }
            }
        }
        Ok(names)
    }

    pub fn get(&self, name: &str) -> Result<&RealizerEntry, Error> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::Config(format!("unknown realizer `{name}`")))
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &RealizerEntry> {
        self.entries.values()
    }

    /// Registry without quote/eq, where all fixtures but `t_leq` live.
    pub fn standard_registry(&self) -> &Registry {
        &self.standard
    }

    pub fn quoting_registry(&self) -> &Registry {
        &self.quoting
    }

    pub fn formulas(&self) -> &FormulaRegistry {
        &self.formulas
    }
}

#[cfg(test)]
mod tests;
