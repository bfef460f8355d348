//! Terms, stacks and processes of the lambda-c calculus.
//!
//! Bound variables are stored as de Bruijn indices, so structural equality is
//! alpha-equivalence. Every node caches a structural hash together with a few
//! summary bits (loose bound indices, free variables, continuation constants,
//! a bloom filter of the constants it mentions) that let substitutions skip
//! whole subterms without visiting them.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::machine::Instruction;

pub type Name = Arc<str>;

const K_MUL: u64 = 0x517c_c1b7_2722_0a95;

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(5) ^ x).wrapping_mul(K_MUL)
}

fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| mix(h, b as u64))
}

/// What a term constant does when it reaches head position.
#[derive(Clone)]
pub enum ConstKind {
    /// The control instruction `cc`.
    Cc,
    /// An active instruction with a native reduction rule.
    Instruction(Arc<dyn Instruction>),
    /// An inert constant; no rule ever fires on it.
    Inert { substitutive: bool },
}

impl fmt::Debug for ConstKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstKind::Cc => write!(f, "Cc"),
            ConstKind::Instruction(i) => write!(f, "Instruction(arity {})", i.arity()),
            ConstKind::Inert { substitutive } => {
                write!(f, "Inert {{ substitutive: {substitutive} }}")
            }
        }
    }
}

#[derive(Debug)]
pub struct ConstDecl {
    pub id: u32,
    pub name: Name,
    pub kind: ConstKind,
}

/// A declared term constant. Identity is the registry id.
#[derive(Clone, Debug)]
pub struct Constant(pub(crate) Arc<ConstDecl>);

impl Constant {
    pub(crate) fn new(id: u32, name: Name, kind: ConstKind) -> Self {
        Constant(Arc::new(ConstDecl { id, name, kind }))
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn kind(&self) -> &ConstKind {
        &self.0.kind
    }

    pub fn is_inert(&self) -> bool {
        matches!(self.0.kind, ConstKind::Inert { .. })
    }

    pub fn is_cc(&self) -> bool {
        matches!(self.0.kind, ConstKind::Cc)
    }
}

impl PartialEq for Constant {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Constant {}

impl Hash for Constant {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

#[derive(Debug)]
pub struct StackConstDecl {
    pub id: u32,
    pub name: Name,
    pub substitutive: bool,
}

/// A stack constant (a stack bottom).
#[derive(Clone, Debug)]
pub struct StackConst(pub(crate) Arc<StackConstDecl>);

impl StackConst {
    pub(crate) fn new(id: u32, name: Name, substitutive: bool) -> Self {
        StackConst(Arc::new(StackConstDecl {
            id,
            name,
            substitutive,
        }))
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }
}

impl PartialEq for StackConst {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for StackConst {}

impl Hash for StackConst {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

#[inline]
fn bloom_bit(id: u32) -> u64 {
    1u64 << (id % 64)
}

pub enum TermKind {
    /// de Bruijn index; only ever visible under a binder.
    Bound(u32),
    /// A named free variable (terms in processes never contain one).
    Free(Name),
    /// Abstraction; the name is a printing hint only.
    Lam(Name, Term),
    App(Term, Term),
    /// Continuation constant `k_pi`.
    Cont(Stack),
    Const(Constant),
}

pub(crate) struct TermNode {
    kind: TermKind,
    hash: u64,
    /// Number of enclosing binders this term needs (max loose index + 1).
    loose: u32,
    has_free: bool,
    has_cont: bool,
    consts: u64,
    stack_consts: u64,
}

#[derive(Clone)]
pub struct Term(pub(crate) Arc<TermNode>);

pub enum StackKind {
    Bottom(StackConst),
    Push(Term, Stack),
}

pub(crate) struct StackNode {
    kind: StackKind,
    hash: u64,
    len: usize,
    has_cont: bool,
    consts: u64,
    stack_consts: u64,
}

#[derive(Clone)]
pub struct Stack(pub(crate) Arc<StackNode>);

/// A process `t * pi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Process {
    pub head: Term,
    pub stack: Stack,
}

impl Process {
    pub fn new(head: Term, stack: Stack) -> Self {
        Process { head, stack }
    }
}

impl Term {
    fn from_kind(kind: TermKind) -> Term {
        let (hash, loose, has_free, has_cont, consts, stack_consts) = match &kind {
            TermKind::Bound(i) => (mix(1, *i as u64), i + 1, false, false, 0, 0),
            TermKind::Free(n) => (mix(2, hash_str(n)), 0, true, false, 0, 0),
            TermKind::Lam(_, b) => {
                let n = &b.0;
                (
                    mix(3, n.hash),
                    n.loose.saturating_sub(1),
                    n.has_free,
                    n.has_cont,
                    n.consts,
                    n.stack_consts,
                )
            }
            TermKind::App(f, a) => {
                let (f, a) = (&f.0, &a.0);
                (
                    mix(mix(4, f.hash), a.hash),
                    f.loose.max(a.loose),
                    f.has_free || a.has_free,
                    f.has_cont || a.has_cont,
                    f.consts | a.consts,
                    f.stack_consts | a.stack_consts,
                )
            }
            TermKind::Cont(s) => {
                let n = &s.0;
                (mix(5, n.hash), 0, false, true, n.consts, n.stack_consts)
            }
            TermKind::Const(c) => (mix(6, c.id() as u64), 0, false, false, bloom_bit(c.id()), 0),
        };
        Term(Arc::new(TermNode {
            kind,
            hash,
            loose,
            has_free,
            has_cont,
            consts,
            stack_consts,
        }))
    }

    pub(crate) fn bound(i: u32) -> Term {
        Term::from_kind(TermKind::Bound(i))
    }

    pub fn free(name: &str) -> Term {
        Term::from_kind(TermKind::Free(Name::from(name)))
    }

    /// Abstraction over a body that already uses index 0 for the binder.
    pub(crate) fn lam_raw(hint: Name, body: Term) -> Term {
        Term::from_kind(TermKind::Lam(hint, body))
    }

    /// `\name. body`, binding every free occurrence of `name` in `body`.
    pub fn lam(name: &str, body: Term) -> Term {
        let body = body.close_var(name, 0);
        Term::lam_raw(Name::from(name), body)
    }

    /// `\x1 .. xn. body`
    pub fn lams(names: &[&str], body: Term) -> Term {
        names.iter().rev().fold(body, |acc, n| Term::lam(n, acc))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::from_kind(TermKind::App(f, a))
    }

    /// Left-nested application `f a1 .. an`.
    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn cont(stack: Stack) -> Term {
        Term::from_kind(TermKind::Cont(stack))
    }

    pub fn constant(c: &Constant) -> Term {
        Term::from_kind(TermKind::Const(c.clone()))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// No free variables and no loose bound indices.
    pub fn is_closed(&self) -> bool {
        self.0.loose == 0 && !self.0.has_free
    }

    /// Contains no continuation constant.
    pub fn is_proof_like(&self) -> bool {
        !self.0.has_cont
    }

    pub fn as_const(&self) -> Option<&Constant> {
        match self.kind() {
            TermKind::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            TermKind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    pub fn as_cont(&self) -> Option<&Stack> {
        match self.kind() {
            TermKind::Cont(s) => Some(s),
            _ => None,
        }
    }

    pub(crate) fn may_contain_const(&self, id: u32) -> bool {
        self.0.consts & bloom_bit(id) != 0
    }

    pub(crate) fn may_contain_stack_const(&self, id: u32) -> bool {
        self.0.stack_consts & bloom_bit(id) != 0
    }

    pub(crate) fn has_free(&self) -> bool {
        self.0.has_free
    }

    /// Replace the free variable `name` by the bound index `depth`.
    fn close_var(&self, name: &str, depth: u32) -> Term {
        if !self.0.has_free {
            return self.clone();
        }
        match self.kind() {
            TermKind::Free(n) if &**n == name => Term::bound(depth),
            TermKind::Free(_) | TermKind::Bound(_) | TermKind::Const(_) | TermKind::Cont(_) => {
                self.clone()
            }
            TermKind::Lam(h, b) => Term::lam_raw(h.clone(), b.close_var(name, depth + 1)),
            TermKind::App(f, a) => Term::app(f.close_var(name, depth), a.close_var(name, depth)),
        }
    }

    /// Body instantiation for (Grab): replaces index `depth` by the closed
    /// term `u`. Closed subterms are shared, not copied.
    pub(crate) fn instantiate(&self, u: &Term, depth: u32) -> Term {
        if self.0.loose <= depth {
            return self.clone();
        }
        match self.kind() {
            TermKind::Bound(i) if *i == depth => u.clone(),
            TermKind::Bound(i) if *i > depth => Term::bound(i - 1),
            TermKind::Bound(_) | TermKind::Free(_) | TermKind::Const(_) | TermKind::Cont(_) => {
                self.clone()
            }
            TermKind::Lam(h, b) => Term::lam_raw(h.clone(), b.instantiate(u, depth + 1)),
            TermKind::App(f, a) => Term::app(f.instantiate(u, depth), a.instantiate(u, depth)),
        }
    }

    /// Names of the free variables, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Name> {
        fn go(t: &Term, out: &mut Vec<Name>) {
            if !t.0.has_free {
                return;
            }
            match t.kind() {
                TermKind::Free(n) => {
                    if !out.contains(n) {
                        out.push(n.clone())
                    }
                }
                TermKind::Lam(_, b) => go(b, out),
                TermKind::App(f, a) => {
                    go(f, out);
                    go(a, out)
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Does the constant occur anywhere, continuations included.
    pub fn mentions_const(&self, c: &Constant) -> bool {
        if !self.may_contain_const(c.id()) {
            return false;
        }
        match self.kind() {
            TermKind::Const(d) => d == c,
            TermKind::Lam(_, b) => b.mentions_const(c),
            TermKind::App(f, a) => f.mentions_const(c) || a.mentions_const(c),
            TermKind::Cont(s) => s.mentions_const(c),
            _ => false,
        }
    }

    pub fn mentions_stack_const(&self, a: &StackConst) -> bool {
        if !self.may_contain_stack_const(a.id()) {
            return false;
        }
        match self.kind() {
            TermKind::Lam(_, b) => b.mentions_stack_const(a),
            TermKind::App(f, g) => f.mentions_stack_const(a) || g.mentions_stack_const(a),
            TermKind::Cont(s) => s.mentions_stack_const(a),
            _ => false,
        }
    }

    /// Every term constant occurring in the term (continuations included).
    pub fn constants(&self) -> Vec<Constant> {
        let mut out = Vec::new();
        collect_consts_term(self, &mut out);
        out
    }
}

fn collect_consts_term(t: &Term, out: &mut Vec<Constant>) {
    if t.0.consts == 0 {
        return;
    }
    match t.kind() {
        TermKind::Const(c) => {
            if !out.contains(c) {
                out.push(c.clone())
            }
        }
        TermKind::Lam(_, b) => collect_consts_term(b, out),
        TermKind::App(f, a) => {
            collect_consts_term(f, out);
            collect_consts_term(a, out)
        }
        TermKind::Cont(s) => collect_consts_stack(s, out),
        _ => {}
    }
}

fn collect_consts_stack(s: &Stack, out: &mut Vec<Constant>) {
    let mut cur = s;
    while let StackKind::Push(t, rest) = cur.kind() {
        collect_consts_term(t, out);
        cur = rest;
    }
}

impl Stack {
    fn from_kind(kind: StackKind) -> Stack {
        let (hash, len, has_cont, consts, stack_consts) = match &kind {
            StackKind::Bottom(a) => (mix(7, a.id() as u64), 0, false, 0, bloom_bit(a.id())),
            StackKind::Push(t, r) => {
                let (t, r) = (&t.0, &r.0);
                (
                    mix(mix(8, t.hash), r.hash),
                    r.len + 1,
                    t.has_cont || r.has_cont,
                    t.consts | r.consts,
                    t.stack_consts | r.stack_consts,
                )
            }
        };
        Stack(Arc::new(StackNode {
            kind,
            hash,
            len,
            has_cont,
            consts,
            stack_consts,
        }))
    }

    pub fn bottom(a: &StackConst) -> Stack {
        Stack::from_kind(StackKind::Bottom(a.clone()))
    }

    pub fn push(t: Term, rest: Stack) -> Stack {
        Stack::from_kind(StackKind::Push(t, rest))
    }

    /// `t1 . t2 . ... . rest`
    pub fn push_all<I>(terms: I, rest: Stack) -> Stack
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        terms.into_iter().rev().fold(rest, |acc, t| Stack::push(t, acc))
    }

    pub fn kind(&self) -> &StackKind {
        &self.0.kind
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// Number of pushed terms above the bottom.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_bottom(&self) -> bool {
        self.0.len == 0
    }

    pub fn pop(&self) -> Option<(&Term, &Stack)> {
        match self.kind() {
            StackKind::Push(t, r) => Some((t, r)),
            StackKind::Bottom(_) => None,
        }
    }

    pub fn bottom_const(&self) -> &StackConst {
        let mut cur = self;
        loop {
            match cur.kind() {
                StackKind::Bottom(a) => return a,
                StackKind::Push(_, r) => cur = r,
            }
        }
    }

    /// The first `n` elements and the remaining stack, if there are enough.
    pub fn split(&self, n: usize) -> Option<(Vec<Term>, Stack)> {
        if self.len() < n {
            return None;
        }
        let mut args = Vec::with_capacity(n);
        let mut cur = self.clone();
        for _ in 0..n {
            let (t, r) = match cur.kind() {
                StackKind::Push(t, r) => (t.clone(), r.clone()),
                StackKind::Bottom(_) => unreachable!("length checked"),
            };
            args.push(t);
            cur = r;
        }
        Some((args, cur))
    }

    pub fn terms(&self) -> Vec<Term> {
        let mut out = Vec::with_capacity(self.len());
        let mut cur = self;
        while let StackKind::Push(t, r) = cur.kind() {
            out.push(t.clone());
            cur = r;
        }
        out
    }

    pub fn is_proof_like(&self) -> bool {
        !self.0.has_cont
    }

    pub(crate) fn may_contain_const(&self, id: u32) -> bool {
        self.0.consts & bloom_bit(id) != 0
    }

    pub(crate) fn may_contain_stack_const(&self, id: u32) -> bool {
        self.0.stack_consts & bloom_bit(id) != 0
    }

    pub fn mentions_const(&self, c: &Constant) -> bool {
        let mut cur = self;
        while let StackKind::Push(t, r) = cur.kind() {
            if !cur.may_contain_const(c.id()) {
                return false;
            }
            if t.mentions_const(c) {
                return true;
            }
            cur = r;
        }
        false
    }

    pub fn mentions_stack_const(&self, a: &StackConst) -> bool {
        if !self.may_contain_stack_const(a.id()) {
            return false;
        }
        let mut cur = self;
        loop {
            match cur.kind() {
                StackKind::Bottom(b) => return a == b,
                StackKind::Push(t, r) => {
                    if t.mentions_stack_const(a) {
                        return true;
                    }
                    cur = r;
                }
            }
        }
    }

    pub fn constants(&self) -> Vec<Constant> {
        let mut out = Vec::new();
        collect_consts_stack(self, &mut out);
        out
    }
}

impl Process {
    pub fn mentions_const(&self, c: &Constant) -> bool {
        self.head.mentions_const(c) || self.stack.mentions_const(c)
    }

    pub fn mentions_stack_const(&self, a: &StackConst) -> bool {
        self.head.mentions_stack_const(a) || self.stack.mentions_stack_const(a)
    }

    pub fn constants(&self) -> Vec<Constant> {
        let mut out = self.head.constants();
        for c in self.stack.constants() {
            if !out.contains(&c) {
                out.push(c)
            }
        }
        out
    }

    pub fn structural_hash(&self) -> u64 {
        mix(self.head.0.hash, self.stack.0.hash)
    }
}

// Equality is alpha-equivalence: binder hints are ignored.

fn term_eq(mut a: &Term, mut b: &Term) -> bool {
    loop {
        if Arc::ptr_eq(&a.0, &b.0) {
            return true;
        }
        if a.0.hash != b.0.hash {
            return false;
        }
        match (a.kind(), b.kind()) {
            (TermKind::Bound(i), TermKind::Bound(j)) => return i == j,
            (TermKind::Free(x), TermKind::Free(y)) => return x == y,
            (TermKind::Const(c), TermKind::Const(d)) => return c == d,
            (TermKind::Cont(s), TermKind::Cont(r)) => return stack_eq(s, r),
            (TermKind::Lam(_, x), TermKind::Lam(_, y)) => {
                a = x;
                b = y;
            }
            (TermKind::App(f, x), TermKind::App(g, y)) => {
                if !term_eq(f, g) {
                    return false;
                }
                a = x;
                b = y;
            }
            _ => return false,
        }
    }
}

fn stack_eq(mut a: &Stack, mut b: &Stack) -> bool {
    loop {
        if Arc::ptr_eq(&a.0, &b.0) {
            return true;
        }
        if a.0.hash != b.0.hash || a.0.len != b.0.len {
            return false;
        }
        match (a.kind(), b.kind()) {
            (StackKind::Bottom(x), StackKind::Bottom(y)) => return x == y,
            (StackKind::Push(s, r), StackKind::Push(t, q)) => {
                if !term_eq(s, t) {
                    return false;
                }
                a = r;
                b = q;
            }
            _ => return false,
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        term_eq(self, other)
    }
}
impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

impl PartialEq for Stack {
    fn eq(&self, other: &Self) -> bool {
        stack_eq(self, other)
    }
}
impl Eq for Stack {}

impl Hash for Stack {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash)
    }
}

// Long numerals and long stacks are deep right spines; drop them iteratively.

enum Child {
    T(Term),
    S(Stack),
}

fn take_term_children(kind: &mut TermKind, out: &mut Vec<Child>) {
    match std::mem::replace(kind, TermKind::Bound(0)) {
        TermKind::Lam(_, b) => out.push(Child::T(b)),
        TermKind::App(f, a) => {
            out.push(Child::T(f));
            out.push(Child::T(a));
        }
        TermKind::Cont(s) => out.push(Child::S(s)),
        _ => {}
    }
}

fn take_stack_children(kind: &mut StackKind, out: &mut Vec<Child>) {
    if let StackKind::Push(..) = kind {
        // Placeholder bottom; never observed since the node is being dropped.
        let placeholder = StackKind::Bottom(StackConst(placeholder_bottom()));
        if let StackKind::Push(t, r) = std::mem::replace(kind, placeholder) {
            out.push(Child::T(t));
            out.push(Child::S(r));
        }
    }
}

fn placeholder_bottom() -> Arc<StackConstDecl> {
    static PLACEHOLDER: std::sync::OnceLock<Arc<StackConstDecl>> = std::sync::OnceLock::new();
    PLACEHOLDER
        .get_or_init(|| {
            Arc::new(StackConstDecl {
                id: u32::MAX,
                name: Name::from("_"),
                substitutive: false,
            })
        })
        .clone()
}

fn drain(mut work: Vec<Child>) {
    while let Some(c) = work.pop() {
        match c {
            Child::T(t) => {
                if let Ok(mut node) = Arc::try_unwrap(t.0) {
                    take_term_children(&mut node.kind, &mut work);
                }
            }
            Child::S(s) => {
                if let Ok(mut node) = Arc::try_unwrap(s.0) {
                    take_stack_children(&mut node.kind, &mut work);
                }
            }
        }
    }
}

impl Drop for TermNode {
    fn drop(&mut self) {
        if matches!(self.kind, TermKind::App(..) | TermKind::Lam(..) | TermKind::Cont(_)) {
            let mut work = Vec::new();
            take_term_children(&mut self.kind, &mut work);
            drain(work);
        }
    }
}

impl Drop for StackNode {
    fn drop(&mut self) {
        if matches!(self.kind, StackKind::Push(..)) {
            let mut work = Vec::new();
            take_stack_children(&mut self.kind, &mut work);
            drain(work);
        }
    }
}
