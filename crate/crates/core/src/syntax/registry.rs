use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::term::{ConstKind, Constant, Name, StackConst};
use crate::machine::Instruction;
use crate::Error;

/// A declared name: either a term constant or a stack constant.
#[derive(Clone, Debug)]
pub enum Decl {
    Term(Constant),
    Stack(StackConst),
}

#[derive(Default)]
struct Tables {
    by_name: HashMap<Name, Decl>,
    next_id: u32,
    fresh_counter: u64,
    fork: bool,
    /// quote or eq installed: no constant may be substitutive.
    non_substitutive: bool,
}

/// Optional instructions beyond the four core rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extra {
    Quote,
    Eq,
    EqNat,
    Fork,
}

/// The set of declared constants of a calculus instance.
///
/// Cloning yields a handle on the same tables. Fresh-constant generation is
/// the only mutation after setup and is serialized by the lock.
#[derive(Clone)]
pub struct Registry {
    inner: Arc<RwLock<Tables>>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::standard()
    }
}

impl Registry {
    /// Only `cc`, no stack constants.
    pub fn empty() -> Registry {
        let reg = Registry {
            inner: Arc::new(RwLock::new(Tables::default())),
        };
        reg.declare_term("cc", ConstKind::Cc)
            .expect("fresh registry accepts cc");
        reg
    }

    /// `cc`, inert constants `c0..c3` and stack constants `a0..a3`.
    pub fn standard() -> Registry {
        Registry::with_extras(&[])
    }

    /// The standard registry with extra instructions installed first.
    pub fn with_extras(extras: &[Extra]) -> Registry {
        let reg = Registry::empty();
        for e in extras {
            reg.install(*e).expect("empty registry accepts extras");
        }
        let subst = reg.substitutive_default();
        for i in 0..4 {
            reg.declare_inert(&format!("c{i}"), subst)
                .expect("standard names are distinct");
            reg.declare_stack(&format!("a{i}"), subst)
                .expect("standard names are distinct");
        }
        reg
    }

    /// Install `quote`, `eq`, `eq_nat` or `fork`. Installing `quote` or `eq`
    /// fails while any substitutive constant is declared.
    pub fn install(&self, extra: Extra) -> Result<Constant, Error> {
        use crate::machine::instr;
        if matches!(extra, Extra::Quote | Extra::Eq) {
            let offending = {
                let t = self.inner.read().expect("registry lock poisoned");
                t.by_name.values().find_map(|d| match d {
                    Decl::Term(c) if matches!(c.kind(), ConstKind::Inert { substitutive: true }) => {
                        Some(c.name().to_string())
                    }
                    Decl::Stack(a) if a.0.substitutive => Some(a.name().to_string()),
                    _ => None,
                })
            };
            if let Some(name) = offending {
                return Err(Error::SubstitutiveConflict(name));
            }
            self.inner.write().expect("registry lock poisoned").non_substitutive = true;
        }
        match extra {
            Extra::Quote => self.ensure_instruction("quote", || Arc::new(instr::Quote)),
            Extra::Eq => self.ensure_instruction("eq", || Arc::new(instr::EqTest)),
            Extra::EqNat => self.ensure_instruction("eq_nat", || Arc::new(instr::EqNat)),
            Extra::Fork => {
                let c = self.ensure_instruction("fork", || Arc::new(instr::Fork))?;
                self.mark_fork();
                Ok(c)
            }
        }
    }

    /// Flag given to new constants: false once quote or eq is installed.
    pub fn substitutive_default(&self) -> bool {
        !self.inner.read().expect("registry lock poisoned").non_substitutive
    }

    /// True when neither quote nor eq is installed.
    pub fn is_substitutive_regime(&self) -> bool {
        self.substitutive_default()
    }

    fn declare_term(&self, name: &str, kind: ConstKind) -> Result<Constant, Error> {
        let mut t = self.inner.write().expect("registry lock poisoned");
        if t.by_name.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let id = t.next_id;
        t.next_id += 1;
        let c = Constant::new(id, Name::from(name), kind);
        t.by_name.insert(Name::from(name), Decl::Term(c.clone()));
        Ok(c)
    }

    pub fn declare_inert(&self, name: &str, substitutive: bool) -> Result<Constant, Error> {
        if substitutive && !self.substitutive_default() {
            return Err(Error::SubstitutiveConflict(name.to_string()));
        }
        self.declare_term(name, ConstKind::Inert { substitutive })
    }

    pub fn declare_instruction(
        &self,
        name: &str,
        rule: Arc<dyn Instruction>,
    ) -> Result<Constant, Error> {
        self.declare_term(name, ConstKind::Instruction(rule))
    }

    /// Declare `name` unless it already exists as a term constant.
    pub fn ensure_instruction(
        &self,
        name: &str,
        rule: impl FnOnce() -> Arc<dyn Instruction>,
    ) -> Result<Constant, Error> {
        match self.lookup(name) {
            Some(Decl::Term(c)) => Ok(c),
            Some(Decl::Stack(_)) => Err(Error::Duplicate(name.to_string())),
            None => self.declare_instruction(name, rule()),
        }
    }

    pub fn declare_stack(&self, name: &str, substitutive: bool) -> Result<StackConst, Error> {
        if substitutive && !self.substitutive_default() {
            return Err(Error::SubstitutiveConflict(name.to_string()));
        }
        let mut t = self.inner.write().expect("registry lock poisoned");
        if t.by_name.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let id = t.next_id;
        t.next_id += 1;
        let a = StackConst::new(id, Name::from(name), substitutive);
        t.by_name.insert(Name::from(name), Decl::Stack(a.clone()));
        Ok(a)
    }

    pub fn lookup(&self, name: &str) -> Option<Decl> {
        let t = self.inner.read().expect("registry lock poisoned");
        t.by_name.get(name).cloned()
    }

    pub fn constant(&self, name: &str) -> Result<Constant, Error> {
        match self.lookup(name) {
            Some(Decl::Term(c)) => Ok(c),
            _ => Err(Error::UnknownConstant(name.to_string())),
        }
    }

    pub fn stack_const(&self, name: &str) -> Result<StackConst, Error> {
        match self.lookup(name) {
            Some(Decl::Stack(a)) => Ok(a),
            _ => Err(Error::UnknownConstant(name.to_string())),
        }
    }

    /// `count` new inert constants named `prefix<k>`, never declared before.
    pub fn fresh_constants(&self, prefix: &str, count: usize) -> Vec<Constant> {
        let substitutive = self.substitutive_default();
        (0..count)
            .map(|_| {
                let name = self.fresh_name(prefix);
                self.declare_inert(&name, substitutive)
                    .expect("fresh name is unused")
            })
            .collect()
    }

    pub fn fresh_stack_constants(&self, prefix: &str, count: usize) -> Vec<StackConst> {
        let substitutive = self.substitutive_default();
        (0..count)
            .map(|_| {
                let name = self.fresh_name(prefix);
                self.declare_stack(&name, substitutive)
                    .expect("fresh name is unused")
            })
            .collect()
    }

    pub fn fresh_constant(&self, prefix: &str) -> Constant {
        self.fresh_constants(prefix, 1).remove(0)
    }

    pub fn fresh_stack_constant(&self, prefix: &str) -> StackConst {
        self.fresh_stack_constants(prefix, 1).remove(0)
    }

    fn fresh_name(&self, prefix: &str) -> String {
        let mut t = self.inner.write().expect("registry lock poisoned");
        loop {
            let name = format!("{prefix}{}", t.fresh_counter);
            t.fresh_counter += 1;
            if !t.by_name.contains_key(name.as_str()) {
                return name;
            }
        }
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.lookup(name).is_some()
    }

    pub(crate) fn mark_fork(&self) {
        self.inner.write().expect("registry lock poisoned").fork = true;
    }

    /// False once `fork` has been installed.
    pub fn is_deterministic(&self) -> bool {
        !self.inner.read().expect("registry lock poisoned").fork
    }

    /// All term constants, ordered by declaration.
    pub fn constants(&self) -> Vec<Constant> {
        let t = self.inner.read().expect("registry lock poisoned");
        let mut out: Vec<Constant> = t
            .by_name
            .values()
            .filter_map(|d| match d {
                Decl::Term(c) => Some(c.clone()),
                Decl::Stack(_) => None,
            })
            .collect();
        out.sort_by_key(|c| c.id());
        out
    }

    pub fn stack_constants(&self) -> Vec<StackConst> {
        let t = self.inner.read().expect("registry lock poisoned");
        let mut out: Vec<StackConst> = t
            .by_name
            .values()
            .filter_map(|d| match d {
                Decl::Stack(a) => Some(a.clone()),
                Decl::Term(_) => None,
            })
            .collect();
        out.sort_by_key(|a| a.id());
        out
    }

    /// Names of the installed instructions (including `cc`).
    pub fn instruction_names(&self) -> Vec<String> {
        self.constants()
            .into_iter()
            .filter(|c| !c.is_inert())
            .map(|c| c.name().to_string())
            .collect()
    }

    pub fn has_instruction(&self, name: &str) -> bool {
        matches!(self.lookup(name), Some(Decl::Term(c)) if !c.is_inert())
    }
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("instructions", &self.instruction_names())
            .finish()
    }
}
