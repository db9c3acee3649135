//! The Church-style indexed lambda calculus: pre-terms carrying index
//! sets, formulas and maps; the per-variable domain analysis; the term
//! condition; and a checker for derivations whose rules mirror the kernel.
//!
//! The bottom constant is part of the pre-term grammar so that the rule
//! typing it has a subject.

use crate::error::{Result, Violation};
use crate::formulas::{Formula, Hypothesis, Mode};
use crate::indices::{IndexMap, IndexSet};
use crate::ljker::{Proof, Rule};
use crate::terms::{fresh_name, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreTerm {
    /// `x^J`
    Var(String, IndexSet),
    /// `λx:(A,u).s`
    Abst(String, Formula, IndexMap, Box<PreTerm>),
    App(Box<PreTerm>, Box<PreTerm>),
    Bottom,
}

impl PreTerm {
    pub fn var(name: impl Into<String>, dom: IndexSet) -> Self {
        PreTerm::Var(name.into(), dom)
    }

    pub fn abst(name: impl Into<String>, formula: Formula, map: IndexMap, body: PreTerm) -> Self {
        PreTerm::Abst(name.into(), formula, map, Box::new(body))
    }

    pub fn app(f: PreTerm, a: PreTerm) -> Self {
        PreTerm::App(Box::new(f), Box::new(a))
    }
}

/// The domain of `x` in a pre-term: the union of the index sets decorating
/// its free occurrences. Binders shadow.
pub fn var_domain(x: &str, s: &PreTerm) -> IndexSet {
    match s {
        PreTerm::Var(y, j) => {
            if y == x {
                j.clone()
            } else {
                IndexSet::new()
            }
        }
        PreTerm::Abst(y, _, _, body) => {
            if y == x {
                IndexSet::new()
            } else {
                var_domain(x, body)
            }
        }
        PreTerm::App(f, a) => var_domain(x, f).union(&var_domain(x, a)),
        PreTerm::Bottom => IndexSet::new(),
    }
}

fn free_names(s: &PreTerm, out: &mut Vec<String>) {
    match s {
        PreTerm::Var(y, _) => {
            if !out.contains(y) {
                out.push(y.clone());
            }
        }
        PreTerm::Abst(_, _, _, body) => free_names(body, out),
        PreTerm::App(f, a) => {
            free_names(f, out);
            free_names(a, out);
        }
        PreTerm::Bottom => {}
    }
}

/// The term condition: in every application subterm, each variable's
/// domains in the two parts are disjoint.
pub fn is_term(s: &PreTerm) -> bool {
    match s {
        PreTerm::Var(_, _) | PreTerm::Bottom => true,
        PreTerm::Abst(_, _, _, body) => is_term(body),
        PreTerm::App(f, a) => {
            if !is_term(f) || !is_term(a) {
                return false;
            }
            let mut names = Vec::new();
            free_names(f, &mut names);
            free_names(a, &mut names);
            names
                .iter()
                .all(|x| var_domain(x, f).is_disjoint(&var_domain(x, a)))
        }
    }
}

/// Erasure into the bottom-extended lambda calculus: drop index sets,
/// formulas and maps.
pub fn erase(s: &PreTerm) -> Term {
    match s {
        PreTerm::Var(x, _) => Term::var(x.clone()),
        PreTerm::Abst(x, _, _, body) => Term::lam(x, None, erase(body)),
        PreTerm::App(f, a) => Term::app(erase(f), erase(a)),
        PreTerm::Bottom => Term::Bottom,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CRule {
    /// Types the bottom constant at any empty-domain formula.
    Bottom,
    /// Types `xᵢ^(dom Aᵢ)` at the relocated hypothesis.
    Var(usize),
    Abs,
    App,
}

/// A typing derivation for the indexed calculus; every node carries its
/// full judgment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChurchDeriv {
    pub ctx: Vec<(String, Hypothesis)>,
    pub subject: PreTerm,
    pub formula: Formula,
    pub rule: CRule,
    pub premises: Vec<ChurchDeriv>,
}

pub fn check_church(d: &ChurchDeriv) -> std::result::Result<(), Violation> {
    if !is_term(&d.subject) {
        return Err(Violation::new(
            "root",
            "subject violates the term condition",
        ));
    }
    check_rec(d, "root")
}

fn check_rec(d: &ChurchDeriv, path: &str) -> std::result::Result<(), Violation> {
    d.formula.validate(Mode::Untyped)?;
    let mut seen = std::collections::BTreeSet::new();
    let target = d.formula.dom();
    for (x, h) in &d.ctx {
        if !seen.insert(x) {
            return Err(Violation::new(path, "context variables not pairwise distinct"));
        }
        h.formula.validate(Mode::Untyped)?;
        if !h.map.is_total_on(&h.formula.dom()) {
            return Err(Violation::new(
                path,
                format!("context map for {x} not total on its formula domain"),
            ));
        }
        if !h.map.image().is_subset(&target) {
            return Err(Violation::new(
                path,
                format!("context map for {x} leaves the conclusion domain"),
            ));
        }
    }
    match d.rule {
        CRule::Bottom => {
            if !d.premises.is_empty() {
                return Err(Violation::new(path, "bottom rule takes no premises"));
            }
            if d.subject != PreTerm::Bottom {
                return Err(Violation::new(path, "bottom rule subject mismatch"));
            }
            if !d.formula.dom().is_empty() {
                return Err(Violation::new(
                    path,
                    "bottom rule requires an empty-domain formula",
                ));
            }
            for (x, h) in &d.ctx {
                if !h.formula.dom().is_empty() {
                    return Err(Violation::new(
                        path,
                        format!("bottom rule: hypothesis {x} must have an empty domain"),
                    ));
                }
            }
            Ok(())
        }
        CRule::Var(i) => {
            if !d.premises.is_empty() {
                return Err(Violation::new(path, "variable rule takes no premises"));
            }
            let Some((xi, hi)) = d.ctx.get(i) else {
                return Err(Violation::new(path, "variable index out of range"));
            };
            let PreTerm::Var(x, j) = &d.subject else {
                return Err(Violation::new(path, "variable rule subject mismatch"));
            };
            if x != xi {
                return Err(Violation::new(path, "subject names a different variable"));
            }
            if *j != hi.formula.dom() {
                return Err(Violation::new(
                    path,
                    "variable decoration differs from its formula domain",
                ));
            }
            for (q, (y, h)) in d.ctx.iter().enumerate() {
                if q != i && !h.formula.dom().is_empty() {
                    return Err(Violation::new(
                        path,
                        format!("variable rule: hypothesis {y} must have an empty domain"),
                    ));
                }
            }
            if !hi.map.is_injective() {
                return Err(Violation::new(path, "variable map is not a bijection"));
            }
            let relocated = hi
                .formula
                .relocate(&hi.map)
                .map_err(|e| Violation::new(path, e.to_string()))?;
            if relocated != d.formula {
                return Err(Violation::new(
                    path,
                    "conclusion is not the relocated hypothesis",
                ));
            }
            Ok(())
        }
        CRule::Abs => {
            let [premise] = d.premises.as_slice() else {
                return Err(Violation::new(path, "abstraction takes one premise"));
            };
            let PreTerm::Abst(x, a, u, body) = &d.subject else {
                return Err(Violation::new(path, "abstraction subject mismatch"));
            };
            if d.ctx.iter().any(|(y, _)| y == x) {
                return Err(Violation::new(path, "binder shadows a context variable"));
            }
            let Formula::Arrow { src, map, dst } = &d.formula else {
                return Err(Violation::new(path, "abstraction concludes an arrow"));
            };
            if src.as_ref() != a || map != u {
                return Err(Violation::new(
                    path,
                    "binder annotation differs from the arrow",
                ));
            }
            if premise.ctx.len() != d.ctx.len() + 1
                || premise.ctx[..d.ctx.len()] != d.ctx[..]
            {
                return Err(Violation::new(
                    path,
                    "abstraction premise context mismatch",
                ));
            }
            let (bx, bh) = &premise.ctx[d.ctx.len()];
            if bx != x || bh.formula != *a || bh.map != *u {
                return Err(Violation::new(
                    path,
                    "abstraction premise binder entry mismatch",
                ));
            }
            if premise.subject != **body {
                return Err(Violation::new(path, "abstraction premise subject mismatch"));
            }
            if premise.formula != **dst {
                return Err(Violation::new(path, "abstraction premise formula mismatch"));
            }
            check_rec(premise, &format!("{path}.0"))
        }
        CRule::App => {
            let [fun, arg] = d.premises.as_slice() else {
                return Err(Violation::new(path, "application takes two premises"));
            };
            let PreTerm::App(s, t) = &d.subject else {
                return Err(Violation::new(path, "application subject mismatch"));
            };
            if fun.subject != **s || arg.subject != **t {
                return Err(Violation::new(path, "application premise subject mismatch"));
            }
            let Formula::Arrow { src, map: u, dst } = &fun.formula else {
                return Err(Violation::new(
                    path,
                    "function premise concludes an arrow",
                ));
            };
            if **dst != d.formula {
                return Err(Violation::new(
                    path,
                    "conclusion differs from the arrow target",
                ));
            }
            if arg.formula != **src {
                return Err(Violation::new(
                    path,
                    "argument premise differs from the arrow source",
                ));
            }
            if fun.ctx.len() != d.ctx.len() || arg.ctx.len() != d.ctx.len() {
                return Err(Violation::new(path, "premise context lengths differ"));
            }
            for (i, (x, h)) in d.ctx.iter().enumerate() {
                let ds = h.formula.dom().intersect(&var_domain(x, s));
                let dt = h.formula.dom().intersect(&var_domain(x, t));
                let covered = ds.disjoint_union(&dt).map_err(|_| {
                    Violation::new(path, format!("domains of {x} overlap across the application"))
                })?;
                if covered != h.formula.dom() {
                    return Err(Violation::new(
                        path,
                        format!("variable domains of {x} do not cover its formula domain"),
                    ));
                }
                let (fx, fh) = &fun.ctx[i];
                if fx != x
                    || fh.formula != h.formula.restrict(&ds)
                    || fh.map != h.map.restrict(&ds)
                {
                    return Err(Violation::new(
                        path,
                        format!("function premise hypothesis {x} mismatch"),
                    ));
                }
                let (ax, ah) = &arg.ctx[i];
                let composed = u
                    .compose(&ah.map)
                    .map_err(|e| Violation::new(path, e.to_string()))?;
                if ax != x
                    || ah.formula != h.formula.restrict(&dt)
                    || h.map.restrict(&dt) != composed
                {
                    return Err(Violation::new(
                        path,
                        format!("argument premise hypothesis {x} mismatch"),
                    ));
                }
            }
            check_rec(fun, &format!("{path}.0"))?;
            check_rec(arg, &format!("{path}.1"))
        }
    }
}

/// Annotates a kernel proof into a (pre-term, derivation) pair whose
/// erasure is the extracted term and whose derivation mirrors the proof.
pub fn annotate(p: &Proof, names: &[String]) -> Result<ChurchDeriv> {
    if names.len() != p.sequent.hyps.len() {
        return Err(crate::error::Error::invalid("annotation arity mismatch"));
    }
    let ctx: Vec<(String, Hypothesis)> = names
        .iter()
        .cloned()
        .zip(p.sequent.hyps.iter().cloned())
        .collect();
    let formula = p.sequent.concl.clone();
    match &p.rule {
        Rule::Ax(i) => Ok(ChurchDeriv {
            subject: PreTerm::var(names[*i].clone(), p.sequent.hyps[*i].formula.dom()),
            ctx,
            formula,
            rule: CRule::Var(*i),
            premises: Vec::new(),
        }),
        Rule::StarAx => Ok(ChurchDeriv {
            subject: PreTerm::Bottom,
            ctx,
            formula,
            rule: CRule::Bottom,
            premises: Vec::new(),
        }),
        Rule::Intro => {
            let avoid = names.iter().cloned().collect();
            let fresh = fresh_name(&avoid);
            let mut inner = names.to_vec();
            inner.push(fresh.clone());
            let premise = annotate(&p.premises[0], &inner)?;
            let Formula::Arrow { src, map, .. } = &p.sequent.concl else {
                return Err(crate::error::Error::invalid(
                    "introduction concludes an arrow",
                ));
            };
            Ok(ChurchDeriv {
                subject: PreTerm::abst(
                    fresh,
                    src.as_ref().clone(),
                    map.clone(),
                    premise.subject.clone(),
                ),
                ctx,
                formula,
                rule: CRule::Abs,
                premises: vec![premise],
            })
        }
        Rule::Elim { .. } => {
            let fun = annotate(&p.premises[0], names)?;
            let arg = annotate(&p.premises[1], names)?;
            Ok(ChurchDeriv {
                subject: PreTerm::app(fun.subject.clone(), arg.subject.clone()),
                ctx,
                formula,
                rule: CRule::App,
                premises: vec![fun, arg],
            })
        }
    }
}
