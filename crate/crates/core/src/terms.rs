//! Simply typed terms and the untyped calculus with the bottom constant,
//! plus the rewriting and approximant predicates the kernel needs: bounded
//! beta reduction, bottom-collapse normalization, eta equivalence, and the
//! projection sets Q(x) and Q°(M).
//!
//! Terms are nameless internally (bound variables are de Bruijn indices,
//! free variables are named); binder names are display hints only and are
//! ignored by equality.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleType {
    Atom(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn atom(name: impl Into<String>) -> Self {
        SimpleType::Atom(name.into())
    }

    pub fn arrow(src: SimpleType, dst: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(src), Box::new(dst))
    }
}

/// Display hint for a binder. Compares equal to every other hint so that
/// term equality is alpha equivalence.
#[derive(Debug, Clone, Default)]
pub struct Binder(pub String);

impl PartialEq for Binder {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Binder {}

impl PartialOrd for Binder {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Binder {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

impl std::hash::Hash for Binder {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// De Bruijn index of an enclosing binder.
    Bound(usize),
    /// Named free variable.
    Free(String),
    App(Box<Term>, Box<Term>),
    Lam(Binder, Option<SimpleType>, Box<Term>),
    /// The untyped constant Ω.
    Bottom,
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Free(name.into())
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Abstraction binding the free occurrences of `name` in `body`.
    pub fn lam(name: &str, ty: Option<SimpleType>, body: Term) -> Self {
        Term::Lam(Binder(name.to_string()), ty, Box::new(close(&body, name, 0)))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Bound(_) | Term::Free(_) | Term::Bottom => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, _, b) => 1 + b.size(),
        }
    }

    pub fn contains_bottom(&self) -> bool {
        match self {
            Term::Bottom => true,
            Term::Bound(_) | Term::Free(_) => false,
            Term::App(f, a) => f.contains_bottom() || a.contains_bottom(),
            Term::Lam(_, _, b) => b.contains_bottom(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut out);
        out
    }
}

fn collect_free(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Free(x) => {
            out.insert(x.clone());
        }
        Term::App(f, a) => {
            collect_free(f, out);
            collect_free(a, out);
        }
        Term::Lam(_, _, b) => collect_free(b, out),
        Term::Bound(_) | Term::Bottom => {}
    }
}

fn close(t: &Term, name: &str, depth: usize) -> Term {
    match t {
        Term::Free(x) if x == name => Term::Bound(depth),
        Term::Free(_) | Term::Bound(_) | Term::Bottom => t.clone(),
        Term::App(f, a) => Term::app(close(f, name, depth), close(a, name, depth)),
        Term::Lam(b, ty, body) => Term::Lam(
            b.clone(),
            ty.clone(),
            Box::new(close(body, name, depth + 1)),
        ),
    }
}

/// Replaces the binder of a lambda body by the named free variable.
pub fn open(body: &Term, name: &str) -> Term {
    open_at(body, name, 0)
}

fn open_at(t: &Term, name: &str, depth: usize) -> Term {
    match t {
        Term::Bound(k) if *k == depth => Term::var(name),
        Term::Bound(k) if *k > depth => {
            debug_assert!(false, "dangling bound index while opening");
            Term::Bound(*k - 1)
        }
        Term::Bound(_) | Term::Free(_) | Term::Bottom => t.clone(),
        Term::App(f, a) => Term::app(open_at(f, name, depth), open_at(a, name, depth)),
        Term::Lam(b, ty, body) => Term::Lam(
            b.clone(),
            ty.clone(),
            Box::new(open_at(body, name, depth + 1)),
        ),
    }
}

fn shift(t: &Term, by: isize, cutoff: usize) -> Term {
    match t {
        Term::Bound(k) if *k >= cutoff => Term::Bound((*k as isize + by) as usize),
        Term::Bound(_) | Term::Free(_) | Term::Bottom => t.clone(),
        Term::App(f, a) => Term::app(shift(f, by, cutoff), shift(a, by, cutoff)),
        Term::Lam(b, ty, body) => Term::Lam(
            b.clone(),
            ty.clone(),
            Box::new(shift(body, by, cutoff + 1)),
        ),
    }
}

fn subst_bound(t: &Term, depth: usize, arg: &Term) -> Term {
    match t {
        Term::Bound(k) if *k == depth => shift(arg, depth as isize, 0),
        Term::Bound(k) if *k > depth => Term::Bound(*k - 1),
        Term::Bound(_) | Term::Free(_) | Term::Bottom => t.clone(),
        Term::App(f, a) => Term::app(subst_bound(f, depth, arg), subst_bound(a, depth, arg)),
        Term::Lam(b, ty, body) => Term::Lam(
            b.clone(),
            ty.clone(),
            Box::new(subst_bound(body, depth + 1, arg)),
        ),
    }
}

/// Capture-avoiding substitution of a named free variable. The replacement
/// must not contain dangling bound indices.
pub fn subst_free(t: &Term, name: &str, repl: &Term) -> Term {
    match t {
        Term::Free(x) if x == name => repl.clone(),
        Term::Free(_) | Term::Bound(_) | Term::Bottom => t.clone(),
        Term::App(f, a) => Term::app(subst_free(f, name, repl), subst_free(a, name, repl)),
        Term::Lam(b, ty, body) => Term::Lam(
            b.clone(),
            ty.clone(),
            Box::new(subst_free(body, name, repl)),
        ),
    }
}

/// One leftmost-outermost beta step, if any redex exists.
pub fn beta_step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(_, _, body) = f.as_ref() {
                return Some(subst_bound(body, 0, a));
            }
            if let Some(f2) = beta_step(f) {
                return Some(Term::app(f2, a.as_ref().clone()));
            }
            beta_step(a).map(|a2| Term::app(f.as_ref().clone(), a2))
        }
        Term::Lam(b, ty, body) => {
            beta_step(body).map(|b2| Term::Lam(b.clone(), ty.clone(), Box::new(b2)))
        }
        _ => None,
    }
}

/// Beta-normal form within the given number of steps.
pub fn beta_normalize(t: &Term, fuel: usize) -> Result<Term> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match beta_step(&cur) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    if beta_step(&cur).is_none() {
        Ok(cur)
    } else {
        Err(Error::Fuel(fuel))
    }
}

/// Normal form under the bottom-collapse rules `λx.Ω → Ω` and `Ω M → Ω`.
/// The rewrite system is orthogonal and size-decreasing, so one bottom-up
/// pass reaches the normal form.
pub fn omega_normalize(t: &Term) -> Term {
    match t {
        Term::App(f, a) => {
            let f = omega_normalize(f);
            if f == Term::Bottom {
                Term::Bottom
            } else {
                Term::app(f, omega_normalize(a))
            }
        }
        Term::Lam(b, ty, body) => {
            let body = omega_normalize(body);
            if body == Term::Bottom {
                Term::Bottom
            } else {
                Term::Lam(b.clone(), ty.clone(), Box::new(body))
            }
        }
        _ => t.clone(),
    }
}

pub fn is_omega_bottom(t: &Term) -> bool {
    omega_normalize(t) == Term::Bottom
}

fn references_bound(t: &Term, target: usize) -> bool {
    match t {
        Term::Bound(k) => *k == target,
        Term::Free(_) | Term::Bottom => false,
        Term::App(f, a) => references_bound(f, target) || references_bound(a, target),
        Term::Lam(_, _, b) => references_bound(b, target + 1),
    }
}

/// Eta-normal form. Eta reduction is size-decreasing and confluent, so the
/// bottom-up pass below computes the unique normal form.
pub fn eta_normalize(t: &Term) -> Term {
    match t {
        Term::App(f, a) => Term::app(eta_normalize(f), eta_normalize(a)),
        Term::Lam(b, ty, body) => {
            let body = eta_normalize(body);
            if let Term::App(f, x) = &body {
                if **x == Term::Bound(0) && !references_bound(f, 0) {
                    return shift(f, -1, 1);
                }
            }
            Term::Lam(b.clone(), ty.clone(), Box::new(body))
        }
        _ => t.clone(),
    }
}

/// Decides the eta congruence on bottom-free terms by comparing eta-normal
/// forms.
pub fn eta_equivalent(m: &Term, n: &Term) -> Result<bool> {
    if m.contains_bottom() || n.contains_bottom() {
        return Err(Error::invalid(
            "eta equivalence is only defined on bottom-free terms",
        ));
    }
    Ok(eta_normalize(m) == eta_normalize(n))
}

/// Simple-type synthesis for fully annotated terms (binders carry their
/// types, so the type is determined).
pub fn infer_simple(t: &Term, env: &[(String, Option<SimpleType>)]) -> Result<SimpleType> {
    match t {
        Term::Free(x) => env
            .iter()
            .rev()
            .find(|(v, _)| v == x)
            .and_then(|(_, ty)| ty.clone())
            .ok_or_else(|| Error::invalid(format!("no simple type for variable {x}"))),
        Term::Lam(_, Some(sigma), body) => {
            let avoid: BTreeSet<String> = env.iter().map(|(v, _)| v.clone()).collect();
            let fresh = fresh_name(&avoid);
            let mut inner = env.to_vec();
            inner.push((fresh.clone(), Some(sigma.clone())));
            let tau = infer_simple(&open(body, &fresh), &inner)?;
            Ok(SimpleType::arrow(sigma.clone(), tau))
        }
        Term::Lam(_, None, _) => Err(Error::invalid("binder carries no type annotation")),
        Term::App(f, a) => {
            let fty = infer_simple(f, env)?;
            let SimpleType::Arrow(s, t) = fty else {
                return Err(Error::invalid("application head is not of arrow type"));
            };
            let aty = infer_simple(a, env)?;
            if aty != *s {
                return Err(Error::invalid("argument type mismatch"));
            }
            Ok(*t)
        }
        Term::Bound(_) => Err(Error::invalid("dangling bound index")),
        Term::Bottom => Err(Error::invalid("bottom has no simple type")),
    }
}

fn fresh_internal(counter: &mut usize) -> String {
    let name = format!("#v{counter}");
    *counter += 1;
    name
}

/// Smallest `x{k}` not present in `avoid`.
pub fn fresh_name(avoid: &BTreeSet<String>) -> String {
    for k in 0.. {
        let cand = format!("x{k}");
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

fn strip_lams(t: &Term, counter: &mut usize) -> (Vec<String>, Term) {
    let mut names = Vec::new();
    let mut cur = t.clone();
    while let Term::Lam(_, _, body) = &cur {
        let name = fresh_internal(counter);
        let opened = open(body, &name);
        names.push(name);
        cur = opened;
    }
    (names, cur)
}

fn spine(t: &Term) -> (&Term, Vec<&Term>) {
    let mut args = Vec::new();
    let mut head = t;
    while let Term::App(f, a) = head {
        args.push(a.as_ref());
        head = f.as_ref();
    }
    args.reverse();
    (head, args)
}

/// Membership in Q(x): terms of shape `λx⃗.λy⃗.(x M₁ ⋯ Mₙ Ω ⋯ Ω)` where the
/// first n binders are consumed in order by arguments Mᵢ ∈ Q(xᵢ) and the
/// remaining arguments are the constant Ω.
pub fn qproj_member(o: &Term, x: &str) -> bool {
    let mut counter = 0;
    qproj_rec(o, x, &mut counter)
}

fn qproj_rec(o: &Term, x: &str, counter: &mut usize) -> bool {
    let (binders, body) = strip_lams(o, counter);
    let (head, args) = spine(&body);
    if *head != Term::var(x) {
        return false;
    }
    // The used binders are exactly those matched by leading non-Ω arguments.
    let n = args
        .iter()
        .rposition(|a| **a != Term::Bottom)
        .map_or(0, |p| p + 1);
    if n > binders.len() {
        return false;
    }
    args[..n]
        .iter()
        .zip(binders.iter())
        .all(|(arg, binder)| qproj_rec(arg, binder, counter))
}

/// Membership in Q°(M) for a bottom-free M, by the four inductive clauses.
pub fn qprojo_member(o: &Term, m: &Term) -> Result<bool> {
    if m.contains_bottom() {
        return Err(Error::invalid("Q°(M) requires a bottom-free M"));
    }
    let mut counter = 0;
    Ok(qprojo_rec(o, m, &mut counter))
}

fn qprojo_rec(o: &Term, m: &Term, counter: &mut usize) -> bool {
    if is_omega_bottom(o) {
        return true;
    }
    match m {
        Term::Free(x) => qproj_rec(o, x, counter),
        Term::Lam(_, _, mbody) => {
            if let Term::Lam(_, _, obody) = o {
                let name = fresh_internal(counter);
                qprojo_rec(&open(obody, &name), &open(mbody, &name), counter)
            } else {
                false
            }
        }
        Term::App(mf, ma) => {
            if let Term::App(of, oa) = o {
                qprojo_rec(of, mf, counter) && qprojo_rec(oa, ma, counter)
            } else {
                false
            }
        }
        Term::Bound(_) | Term::Bottom => false,
    }
}
