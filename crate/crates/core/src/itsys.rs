//! Non-idempotent intersection typing as explicit, checkable derivation
//! trees, for the simply typed system and the untyped D∞ system, plus a
//! bounded derivation-search oracle.

use std::collections::BTreeMap;

use crate::error::{Result, Violation};
use crate::formulas::Mode;
use crate::indices::Multiset;
use crate::relmodel::{enumerate_points, Carriers, Point, PointSpace};
use crate::terms::{fresh_name, open, SimpleType, Term};

/// One context entry `x : m : σ` (the simple type is absent in the untyped
/// system).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CtxEntry {
    pub var: String,
    pub mset: Multiset<Point>,
    pub ty: Option<SimpleType>,
}

impl CtxEntry {
    pub fn new(var: impl Into<String>, mset: Multiset<Point>, ty: Option<SimpleType>) -> Self {
        CtxEntry {
            var: var.into(),
            mset,
            ty,
        }
    }
}

/// `x₁:m₁:σ₁, …, xₙ:mₙ:σₙ ⊢ M : a : σ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypingJudgment {
    pub ctx: Vec<CtxEntry>,
    pub subject: Term,
    pub point: Point,
    pub ty: Option<SimpleType>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TRule {
    Var,
    Abs,
    App,
}

/// A derivation tree. Application nodes list the function premise first and
/// then one premise per element of its multiset component, so the split of
/// the context and the argument points are carried by the premises.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypingDeriv {
    pub judgment: TypingJudgment,
    pub rule: TRule,
    pub premises: Vec<TypingDeriv>,
}

/// The judgment content compared by the oracle suites: context multisets in
/// spine order plus the concluded point.
pub fn judgment_key(d: &TypingDeriv) -> (Vec<Multiset<Point>>, Point) {
    (
        d.judgment.ctx.iter().map(|e| e.mset.clone()).collect(),
        d.judgment.point.clone(),
    )
}

pub fn check_typed(d: &TypingDeriv) -> std::result::Result<(), Violation> {
    check(d, Mode::Typed, "root")
}

pub fn check_untyped(d: &TypingDeriv) -> std::result::Result<(), Violation> {
    check(d, Mode::Untyped, "root")
}

fn ctx_spines_match(a: &[CtxEntry], b: &[CtxEntry]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b.iter())
            .all(|(x, y)| x.var == y.var && x.ty == y.ty)
}

fn check(d: &TypingDeriv, mode: Mode, path: &str) -> std::result::Result<(), Violation> {
    let j = &d.judgment;
    // Context sanity shared by every rule.
    let mut seen = std::collections::BTreeSet::new();
    for e in &j.ctx {
        if !seen.insert(&e.var) {
            return Err(Violation::new(path, "context variables not pairwise distinct"));
        }
        match mode {
            Mode::Typed => {
                let Some(ty) = &e.ty else {
                    return Err(Violation::new(path, "typed judgment missing a context type"));
                };
                if !e.mset.support().all(|p| p.conforms(ty, None)) {
                    return Err(Violation::new(
                        path,
                        format!("context multiset for {} leaves its type", e.var),
                    ));
                }
            }
            Mode::Untyped => {
                if e.ty.is_some() {
                    return Err(Violation::new(path, "untyped judgment carries a type"));
                }
                if !e.mset.support().all(|p| p.is_dinf()) {
                    return Err(Violation::new(path, "context point outside D-infinity"));
                }
            }
        }
    }
    match mode {
        Mode::Typed => {
            let Some(ty) = &j.ty else {
                return Err(Violation::new(path, "typed judgment missing its type"));
            };
            if !j.point.conforms(ty, None) {
                return Err(Violation::new(path, "concluded point leaves the type"));
            }
        }
        Mode::Untyped => {
            if j.ty.is_some() {
                return Err(Violation::new(path, "untyped judgment carries a type"));
            }
            if !j.point.is_dinf() {
                return Err(Violation::new(path, "concluded point outside D-infinity"));
            }
        }
    }
    if j.subject == Term::Bottom {
        return Err(Violation::new(path, "bottom is untypable"));
    }

    match d.rule {
        TRule::Var => {
            if !d.premises.is_empty() {
                return Err(Violation::new(path, "variable rule takes no premises"));
            }
            let Term::Free(x) = &j.subject else {
                return Err(Violation::new(path, "variable rule subject is not a variable"));
            };
            let Some(i) = j.ctx.iter().position(|e| &e.var == x) else {
                return Err(Violation::new(path, "subject variable not in context"));
            };
            for (q, e) in j.ctx.iter().enumerate() {
                if q == i {
                    if e.mset != Multiset::singleton(j.point.clone()) {
                        return Err(Violation::new(
                            path,
                            "variable's own multiset is not the singleton of the point",
                        ));
                    }
                } else if !e.mset.is_empty() {
                    return Err(Violation::new(
                        path,
                        format!("multiset for {} should be empty", e.var),
                    ));
                }
            }
            if mode == Mode::Typed && j.ty != j.ctx[i].ty {
                return Err(Violation::new(path, "variable type differs from its context type"));
            }
            Ok(())
        }
        TRule::Abs => {
            let [premise] = d.premises.as_slice() else {
                return Err(Violation::new(path, "abstraction rule takes one premise"));
            };
            let Term::Lam(_, lam_ty, body) = &j.subject else {
                return Err(Violation::new(path, "abstraction subject is not a lambda"));
            };
            let pj = &premise.judgment;
            let Some((last, rest)) = pj.ctx.split_last() else {
                return Err(Violation::new(path, "abstraction premise context is empty"));
            };
            if !ctx_spines_match(rest, &j.ctx) {
                return Err(Violation::new(path, "premise context spine mismatch"));
            }
            for (a, b) in rest.iter().zip(j.ctx.iter()) {
                if a.mset != b.mset {
                    return Err(Violation::new(path, "abstraction must not change the context"));
                }
            }
            if mode == Mode::Typed && last.ty.as_ref() != lam_ty.as_ref() {
                return Err(Violation::new(path, "binder type differs from the premise"));
            }
            if pj.subject != open(body, &last.var) {
                return Err(Violation::new(path, "premise subject is not the opened body"));
            }
            let expected = Point::pair(last.mset.clone(), pj.point.clone());
            if j.point != expected {
                return Err(Violation::new(
                    path,
                    "conclusion point is not the pair of the binder multiset and the premise point",
                ));
            }
            if mode == Mode::Typed {
                match (&j.ty, lam_ty, &pj.ty) {
                    (Some(SimpleType::Arrow(s, t)), Some(sigma), Some(tau))
                        if s.as_ref() == sigma && t.as_ref() == tau => {}
                    _ => {
                        return Err(Violation::new(path, "abstraction type mismatch"));
                    }
                }
            }
            check(premise, mode, &format!("{path}.0"))
        }
        TRule::App => {
            let Term::App(f, a) = &j.subject else {
                return Err(Violation::new(path, "application subject is not an application"));
            };
            let Some((fun, args)) = d.premises.split_first() else {
                return Err(Violation::new(path, "application rule lacks its function premise"));
            };
            let fj = &fun.judgment;
            if fj.subject != **f {
                return Err(Violation::new(path, "function premise subject mismatch"));
            }
            let Ok((mult, b)) = fj.point.unfold() else {
                return Err(Violation::new(path, "function point is not a pair"));
            };
            if j.point != b {
                return Err(Violation::new(path, "conclusion point differs from the pair target"));
            }
            if args.len() != mult.card() {
                return Err(Violation::new(
                    path,
                    "one argument premise required per multiset element",
                ));
            }
            let arg_points: Multiset<Point> = args
                .iter()
                .map(|p| p.judgment.point.clone())
                .collect();
            if arg_points != mult {
                return Err(Violation::new(
                    path,
                    "argument premise points do not realize the multiset",
                ));
            }
            for p in args {
                if p.judgment.subject != **a {
                    return Err(Violation::new(path, "argument premise subject mismatch"));
                }
            }
            if mode == Mode::Typed {
                let (Some(fty), Some(jty)) = (&fj.ty, &j.ty) else {
                    return Err(Violation::new(path, "typed premise missing a type"));
                };
                let SimpleType::Arrow(s, t) = fty else {
                    return Err(Violation::new(path, "function premise type is not an arrow"));
                };
                if t.as_ref() != jty {
                    return Err(Violation::new(path, "application result type mismatch"));
                }
                for p in args {
                    if p.judgment.ty.as_ref() != Some(s.as_ref()) {
                        return Err(Violation::new(path, "argument premise type mismatch"));
                    }
                }
            }
            // Conclusion context is the pointwise sum of the premises'.
            for premise in &d.premises {
                if !ctx_spines_match(&premise.judgment.ctx, &j.ctx) {
                    return Err(Violation::new(path, "premise context spine mismatch"));
                }
            }
            for (i, e) in j.ctx.iter().enumerate() {
                let summed = Multiset::sum(
                    d.premises.iter().map(|p| &p.judgment.ctx[i].mset),
                );
                if summed != e.mset {
                    return Err(Violation::new(
                        path,
                        format!("context sum mismatch at {}", e.var),
                    ));
                }
            }
            for (k, premise) in d.premises.iter().enumerate() {
                check(premise, mode, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
    }
}

/// Bounds for the search oracle. `ctx_card` bounds every context multiset
/// cardinality and `point_size` bounds both the size and the pair depth of
/// every point occurring in a reported judgment (depth must be bounded too:
/// D∞ has infinitely many points of any given size once the tail may grow).
/// `leaf_size` bounds the points enumerated at variable leaves, which is
/// what makes the search finite. For beta-normal subjects,
/// `leaf_size = point_size` already makes the search exhaustive; redexes
/// may need a small margin, hence the separate knob.
#[derive(Debug, Clone, Copy)]
pub struct SearchBounds {
    pub ctx_card: usize,
    pub point_size: usize,
    pub leaf_size: usize,
}

impl SearchBounds {
    pub fn new(ctx_card: usize, point_size: usize) -> Self {
        SearchBounds {
            ctx_card,
            point_size,
            leaf_size: point_size + 2,
        }
    }

    pub fn with_leaf_size(mut self, leaf_size: usize) -> Self {
        self.leaf_size = leaf_size;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub enum TypingSpace<'a> {
    Typed { carriers: &'a Carriers },
    Dinf,
}

/// Exhaustively enumerates the valid judgments of `term` over the given
/// variable spine whose context multisets and points fit the bounds,
/// together with their derivations, in deterministic order.
pub fn search(
    term: &Term,
    spine: &[(String, Option<SimpleType>)],
    bounds: &SearchBounds,
    space: TypingSpace<'_>,
) -> Result<Vec<TypingDeriv>> {
    let fits = |p: &Point| p.dsize() <= bounds.point_size && p.depth() <= bounds.point_size;
    let mut derivs = derive_all(term, spine, bounds, space)?;
    derivs.retain(|d| {
        d.judgment
            .ctx
            .iter()
            .all(|e| e.mset.card() <= bounds.ctx_card && e.mset.support().all(fits))
            && fits(&d.judgment.point)
    });
    derivs.sort();
    derivs.dedup();
    Ok(derivs)
}

/// The set of judgment keys reported by [`search`].
pub fn search_judgments(
    term: &Term,
    spine: &[(String, Option<SimpleType>)],
    bounds: &SearchBounds,
    space: TypingSpace<'_>,
) -> Result<std::collections::BTreeSet<(Vec<Multiset<Point>>, Point)>> {
    Ok(search(term, spine, bounds, space)?
        .iter()
        .map(judgment_key)
        .collect())
}

fn leaf_candidates(
    ty: Option<&SimpleType>,
    bounds: &SearchBounds,
    space: TypingSpace<'_>,
) -> Vec<Point> {
    match space {
        TypingSpace::Typed { carriers } => {
            let Some(ty) = ty else { return Vec::new() };
            enumerate_points(PointSpace::Typed { ty, carriers }, bounds.leaf_size)
        }
        TypingSpace::Dinf => enumerate_points(PointSpace::Dinf, bounds.leaf_size),
    }
}

fn derive_all(
    term: &Term,
    spine: &[(String, Option<SimpleType>)],
    bounds: &SearchBounds,
    space: TypingSpace<'_>,
) -> Result<Vec<TypingDeriv>> {
    match term {
        Term::Bottom => Ok(Vec::new()),
        Term::Bound(_) => Ok(Vec::new()),
        Term::Free(x) => {
            let Some(i) = spine.iter().position(|(v, _)| v == x) else {
                return Ok(Vec::new());
            };
            let mut out = Vec::new();
            for a in leaf_candidates(spine[i].1.as_ref(), bounds, space) {
                let ctx = spine
                    .iter()
                    .enumerate()
                    .map(|(q, (v, ty))| {
                        let mset = if q == i {
                            Multiset::singleton(a.clone())
                        } else {
                            Multiset::new()
                        };
                        CtxEntry::new(v.clone(), mset, ty.clone())
                    })
                    .collect();
                out.push(TypingDeriv {
                    judgment: TypingJudgment {
                        ctx,
                        subject: term.clone(),
                        point: a.clone(),
                        ty: spine[i].1.clone(),
                    },
                    rule: TRule::Var,
                    premises: Vec::new(),
                });
            }
            Ok(out)
        }
        Term::Lam(_, lam_ty, body) => {
            let names: std::collections::BTreeSet<String> =
                spine.iter().map(|(v, _)| v.clone()).collect();
            let fresh = fresh_name(&names);
            let opened = open(body, &fresh);
            let mut inner_spine = spine.to_vec();
            inner_spine.push((fresh.clone(), lam_ty.clone()));
            let mut out = Vec::new();
            for d in derive_all(&opened, &inner_spine, bounds, space)? {
                let mut ctx = d.judgment.ctx.clone();
                let last = ctx.pop().expect("binder entry present");
                let point = Point::pair(last.mset.clone(), d.judgment.point.clone());
                let ty = match (lam_ty, &d.judgment.ty) {
                    (Some(s), Some(t)) => Some(SimpleType::arrow(s.clone(), t.clone())),
                    _ => None,
                };
                out.push(TypingDeriv {
                    judgment: TypingJudgment {
                        ctx,
                        subject: term.clone(),
                        point,
                        ty,
                    },
                    rule: TRule::Abs,
                    premises: vec![d],
                });
            }
            Ok(out)
        }
        Term::App(f, a) => {
            let fun_derivs = derive_all(f, spine, bounds, space)?;
            let arg_derivs = derive_all(a, spine, bounds, space)?;
            let mut by_point: BTreeMap<&Point, Vec<&TypingDeriv>> = BTreeMap::new();
            for d in &arg_derivs {
                by_point.entry(&d.judgment.point).or_default().push(d);
            }
            let mut out = Vec::new();
            for fd in &fun_derivs {
                let Ok((mult, b)) = fd.judgment.point.unfold() else {
                    continue;
                };
                // One argument derivation per occurrence, combinations with
                // repetition within each distinct point.
                let mut selections: Vec<Vec<&TypingDeriv>> = vec![Vec::new()];
                let mut feasible = true;
                for (p, r) in mult.entries() {
                    let Some(options) = by_point.get(p) else {
                        feasible = false;
                        break;
                    };
                    let combos = combos_with_repetition(options, r);
                    let mut next = Vec::new();
                    for sel in &selections {
                        for c in &combos {
                            let mut s = sel.clone();
                            s.extend_from_slice(c);
                            next.push(s);
                        }
                    }
                    selections = next;
                }
                if !feasible {
                    continue;
                }
                for sel in selections {
                    let mut ctx = Vec::with_capacity(spine.len());
                    let mut within = true;
                    for (i, (v, ty)) in spine.iter().enumerate() {
                        let mut m = fd.judgment.ctx[i].mset.clone();
                        for d in &sel {
                            m = m.plus(&d.judgment.ctx[i].mset);
                        }
                        if m.card() > bounds.ctx_card {
                            within = false;
                            break;
                        }
                        ctx.push(CtxEntry::new(v.clone(), m, ty.clone()));
                    }
                    if !within {
                        continue;
                    }
                    let ty = fd.judgment.ty.as_ref().and_then(|t| match t {
                        SimpleType::Arrow(_, t) => Some(t.as_ref().clone()),
                        _ => None,
                    });
                    let mut premises = vec![fd.clone()];
                    premises.extend(sel.iter().map(|d| (*d).clone()));
                    out.push(TypingDeriv {
                        judgment: TypingJudgment {
                            ctx,
                            subject: term.clone(),
                            point: b.clone(),
                            ty,
                        },
                        rule: TRule::App,
                        premises,
                    });
                }
            }
            Ok(out)
        }
    }
}

fn combos_with_repetition<'a>(
    options: &[&'a TypingDeriv],
    r: usize,
) -> Vec<Vec<&'a TypingDeriv>> {
    fn rec<'a>(
        options: &[&'a TypingDeriv],
        start: usize,
        left: usize,
        acc: &mut Vec<&'a TypingDeriv>,
        out: &mut Vec<Vec<&'a TypingDeriv>>,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..options.len() {
            acc.push(options[i]);
            rec(options, i, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(options, 0, r, &mut Vec::new(), &mut out);
    out
}
