//! The constructive translations between intersection typing families and
//! kernel proofs: soundness reads a typing family off a proof, completeness
//! builds a proof from a typing family and a formula scaffold.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formulas::{hyp_family, represent, Formula, Hypothesis, Mode, ReprSpace};
use crate::indices::{Idx, IndexAlloc, IndexMap, IndexSet, Multiset};
use crate::itsys::{check_typed, check_untyped, CtxEntry, TRule, TypingDeriv, TypingJudgment};
use crate::ljker::{
    empty_proof, extract_term, sim_conversion, subst_into_single, Proof, Sequent,
};
use crate::relmodel::Point;
use crate::terms::{fresh_name, infer_simple, open, subst_free, SimpleType, Term};

/// A family of intersection typing derivations with a shared variable
/// spine and subject, indexed by a finite set of indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTyping {
    pub spine: Vec<(String, Option<SimpleType>)>,
    pub subject: Term,
    pub derivs: BTreeMap<Idx, TypingDeriv>,
}

impl FamilyTyping {
    pub fn indices(&self) -> IndexSet {
        self.derivs.keys().copied().collect()
    }

    pub fn validate(&self, mode: Mode) -> Result<()> {
        for (j, d) in &self.derivs {
            match mode {
                Mode::Typed => check_typed(d)?,
                Mode::Untyped => check_untyped(d)?,
            }
            if d.judgment.subject != self.subject {
                return Err(Error::invalid(format!(
                    "family member {j} has a different subject"
                )));
            }
            let spine: Vec<(String, Option<SimpleType>)> = d
                .judgment
                .ctx
                .iter()
                .map(|e| (e.var.clone(), e.ty.clone()))
                .collect();
            if spine != self.spine {
                return Err(Error::invalid(format!(
                    "family member {j} has a different variable spine"
                )));
            }
        }
        Ok(())
    }
}

/// Soundness: reads, for every index of the conclusion domain, a valid
/// intersection typing of the extracted term out of a kernel proof.
pub fn soundness(p: &Proof, names: &[String], mode: Mode) -> Result<FamilyTyping> {
    if names.len() != p.sequent.hyps.len() {
        return Err(Error::invalid("soundness arity mismatch"));
    }
    let subject = extract_term(p, names, mode)?;
    let spine = spine_of(&p.sequent, names, mode)?;
    let mut derivs = BTreeMap::new();
    for j in p.sequent.concl.dom().iter() {
        derivs.insert(j, sound_at(p, names, j, mode)?);
    }
    Ok(FamilyTyping {
        spine,
        subject,
        derivs,
    })
}

fn spine_of(
    seq: &Sequent,
    names: &[String],
    mode: Mode,
) -> Result<Vec<(String, Option<SimpleType>)>> {
    seq.hyps
        .iter()
        .zip(names.iter())
        .map(|(h, n)| {
            let ty = match mode {
                Mode::Typed => Some(h.formula.under().ok_or_else(|| {
                    Error::invalid("typed soundness on an untyped formula")
                })?),
                Mode::Untyped => None,
            };
            Ok((n.clone(), ty))
        })
        .collect()
}

fn ctx_of(seq: &Sequent, names: &[String], j: Idx, mode: Mode) -> Result<Vec<CtxEntry>> {
    seq.hyps
        .iter()
        .zip(names.iter())
        .map(|(h, n)| {
            let ty = match mode {
                Mode::Typed => Some(h.formula.under().ok_or_else(|| {
                    Error::invalid("typed soundness on an untyped formula")
                })?),
                Mode::Untyped => None,
            };
            Ok(CtxEntry::new(n.clone(), hyp_family(h, j), ty))
        })
        .collect()
}

fn sound_at(p: &Proof, names: &[String], j: Idx, mode: Mode) -> Result<TypingDeriv> {
    let subject = extract_term(p, names, mode)?;
    let ctx = ctx_of(&p.sequent, names, j, mode)?;
    let point = p.sequent.concl.fam_at(j)?;
    let ty = match mode {
        Mode::Typed => Some(p.sequent.concl.under().ok_or_else(|| {
            Error::invalid("typed soundness on an untyped formula")
        })?),
        Mode::Untyped => None,
    };
    let judgment = TypingJudgment {
        ctx,
        subject,
        point,
        ty,
    };
    match &p.rule {
        crate::ljker::Rule::Ax(_) => Ok(TypingDeriv {
            judgment,
            rule: TRule::Var,
            premises: Vec::new(),
        }),
        crate::ljker::Rule::StarAx => Err(Error::invalid(
            "bottom axiom has an empty conclusion domain",
        )),
        crate::ljker::Rule::Intro => {
            let avoid = names.iter().cloned().collect();
            let fresh = fresh_name(&avoid);
            let mut inner = names.to_vec();
            inner.push(fresh);
            let premise = sound_at(&p.premises[0], &inner, j, mode)?;
            Ok(TypingDeriv {
                judgment,
                rule: TRule::Abs,
                premises: vec![premise],
            })
        }
        crate::ljker::Rule::Elim { .. } => {
            let fun = &p.premises[0];
            let arg = &p.premises[1];
            let Formula::Arrow { map: u, .. } = &fun.sequent.concl else {
                return Err(Error::invalid("elimination premise is not an arrow"));
            };
            let mut premises = vec![sound_at(fun, names, j, mode)?];
            for k in u.preimage(j).iter() {
                premises.push(sound_at(arg, names, k, mode)?);
            }
            Ok(TypingDeriv {
                judgment,
                rule: TRule::App,
                premises,
            })
        }
    }
}

/// Lambda-nesting demanded of a conclusion formula by a subject: an
/// abstraction consumes one arrow layer, an application supplies one to
/// its function branch.
pub fn demand(t: &Term) -> usize {
    match t {
        Term::Lam(_, _, body) => 1 + demand(body),
        Term::App(f, _) => demand(f).saturating_sub(1),
        _ => 0,
    }
}

/// Like [`represent`] over D∞, but guarantees at least `d` leading arrow
/// layers so that conclusions meet the shape demanded by abstraction
/// subjects. Star families expand through bottom-source arrows.
pub fn represent_demand(
    d: usize,
    j_set: &IndexSet,
    f: &BTreeMap<Idx, Point>,
    alloc: &mut IndexAlloc,
) -> Result<Formula> {
    if d == 0 {
        return represent(ReprSpace::Dinf, j_set, f, alloc);
    }
    let mut g: BTreeMap<Idx, Point> = BTreeMap::new();
    let mut k_all = IndexSet::new();
    let mut u = IndexMap::empty();
    let mut tails: BTreeMap<Idx, Point> = BTreeMap::new();
    for (j, p) in f {
        let (m, b) = p.unfold()?;
        let block = alloc.block(m.card());
        for (k, q) in block.iter().zip(m.expand()) {
            g.insert(k, q.clone());
            u = u.disjoint_union(&IndexMap::from_pairs([(k, *j)])?)?;
        }
        k_all = k_all.disjoint_union(&block)?;
        tails.insert(*j, b);
    }
    let src = represent(ReprSpace::Dinf, &k_all, &g, alloc)?;
    let dst = represent_demand(d - 1, j_set, &tails, alloc)?;
    Ok(Formula::arrow(src, u, dst))
}

/// What families range over when synthesizing scaffolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Space {
    Typed,
    Untyped,
}

/// Synthesizes a scaffold for a typing family: hypothesis formulas split
/// each context multiset over fresh indices, and the conclusion represents
/// the concluded points (shaped by the subject in the untyped case).
pub fn scaffold_for(
    fam: &FamilyTyping,
    mode: Mode,
    alloc: &mut IndexAlloc,
) -> Result<Sequent> {
    fam.validate(mode)?;
    let j_set = fam.indices();
    let space = match mode {
        Mode::Typed => Space::Typed,
        Mode::Untyped => Space::Untyped,
    };
    let mut hyps = Vec::with_capacity(fam.spine.len());
    for (i, (_, ty)) in fam.spine.iter().enumerate() {
        let mut g: BTreeMap<Idx, Point> = BTreeMap::new();
        let mut k_all = IndexSet::new();
        let mut u = IndexMap::empty();
        for (j, d) in &fam.derivs {
            let m = &d.judgment.ctx[i].mset;
            let block = alloc.block(m.card());
            for (k, q) in block.iter().zip(m.expand()) {
                g.insert(k, q.clone());
                u = u.disjoint_union(&IndexMap::from_pairs([(k, *j)])?)?;
            }
            k_all = k_all.disjoint_union(&block)?;
        }
        let formula = match space {
            Space::Typed => {
                let ty = ty
                    .as_ref()
                    .ok_or_else(|| Error::invalid("typed scaffold needs spine types"))?;
                represent(ReprSpace::Typed(ty), &k_all, &g, alloc)?
            }
            Space::Untyped => represent(ReprSpace::Dinf, &k_all, &g, alloc)?,
        };
        hyps.push(Hypothesis::new(formula, u));
    }
    let points: BTreeMap<Idx, Point> = fam
        .derivs
        .iter()
        .map(|(j, d)| (*j, d.judgment.point.clone()))
        .collect();
    let concl = match space {
        Space::Typed => {
            let tau = match fam.derivs.values().next() {
                Some(d) => d
                    .judgment
                    .ty
                    .clone()
                    .ok_or_else(|| Error::invalid("typed family lacks its type"))?,
                None => infer_simple(&fam.subject, &fam.spine)?,
            };
            represent(ReprSpace::Typed(&tau), &j_set, &points, alloc)?
        }
        Space::Untyped => represent_demand(demand(&fam.subject), &j_set, &points, alloc)?,
    };
    Ok(Sequent::new(hyps, concl))
}

/// Completeness: builds a kernel proof of the scaffold sequent whose
/// extracted term is eta-equal to the subject (typed) or lies in Q° of the
/// subject (untyped).
pub fn completeness(
    fam: &FamilyTyping,
    scaffold: &Sequent,
    mode: Mode,
    alloc: &mut IndexAlloc,
) -> Result<Proof> {
    fam.validate(mode)?;
    scaffold
        .validate(mode)
        .map_err(|v| Error::invalid(format!("scaffold invalid: {v}")))?;
    // Keep the allocator clear of every index mentioned by the scaffold.
    let mut used = IndexSet::new();
    for h in &scaffold.hyps {
        used = used.union(&all_indices(&h.formula));
    }
    used = used.union(&all_indices(&scaffold.concl));
    if let Some(m) = used.max_elem() {
        alloc.skip(m + 1);
    }
    let derivs: BTreeMap<Idx, &TypingDeriv> =
        fam.derivs.iter().map(|(j, d)| (*j, d)).collect();
    complete_rec(
        &fam.subject,
        &fam.spine,
        &derivs,
        &scaffold.hyps,
        &scaffold.concl,
        mode,
        alloc,
    )
}

fn all_indices(f: &Formula) -> IndexSet {
    match f {
        Formula::Atom { family, .. } => family.keys().copied().collect(),
        Formula::Star(j) => j.clone(),
        Formula::Arrow { src, map, dst } => all_indices(src)
            .union(&map.image())
            .union(&all_indices(dst)),
    }
}

fn consistency_check(
    derivs: &BTreeMap<Idx, &TypingDeriv>,
    hyps: &[Hypothesis],
    concl: &Formula,
) -> Result<()> {
    let j_set: IndexSet = derivs.keys().copied().collect();
    if concl.dom() != j_set {
        return Err(Error::invalid(
            "scaffold conclusion domain differs from the family indices",
        ));
    }
    let fam = concl.fam();
    for (j, d) in derivs {
        if fam[j] != d.judgment.point {
            return Err(Error::invalid(format!(
                "scaffold family at {j} differs from the concluded point"
            )));
        }
        if d.judgment.ctx.len() != hyps.len() {
            return Err(Error::invalid("scaffold hypothesis count mismatch"));
        }
        for (i, h) in hyps.iter().enumerate() {
            if hyp_family(h, *j) != d.judgment.ctx[i].mset {
                return Err(Error::invalid(format!(
                    "scaffold hypothesis {i} multiset at {j} differs from the context"
                )));
            }
        }
    }
    Ok(())
}

fn rename_var(d: &TypingDeriv, old: &str, new: &str) -> TypingDeriv {
    if old == new {
        return d.clone();
    }
    let repl = Term::var(new);
    TypingDeriv {
        judgment: TypingJudgment {
            ctx: d
                .judgment
                .ctx
                .iter()
                .map(|e| {
                    let var = if e.var == old {
                        new.to_string()
                    } else {
                        e.var.clone()
                    };
                    CtxEntry::new(var, e.mset.clone(), e.ty.clone())
                })
                .collect(),
            subject: subst_free(&d.judgment.subject, old, &repl),
            point: d.judgment.point.clone(),
            ty: d.judgment.ty.clone(),
        },
        rule: d.rule,
        premises: d.premises.iter().map(|p| rename_var(p, old, new)).collect(),
    }
}

#[allow(clippy::too_many_arguments)]
fn complete_rec(
    subject: &Term,
    spine: &[(String, Option<SimpleType>)],
    derivs: &BTreeMap<Idx, &TypingDeriv>,
    hyps: &[Hypothesis],
    concl: &Formula,
    mode: Mode,
    alloc: &mut IndexAlloc,
) -> Result<Proof> {
    consistency_check(derivs, hyps, concl)?;
    let j_set: IndexSet = derivs.keys().copied().collect();

    if mode == Mode::Untyped && j_set.is_empty() {
        let hyp_formulas: Vec<Formula> =
            hyps.iter().map(|h| h.formula.clone()).collect();
        return empty_proof(concl, &hyp_formulas);
    }
    match subject {
        Term::Bottom => Err(Error::invalid(
            "bottom subject admits typings only over the empty index set",
        )),
        Term::Bound(_) => Err(Error::invalid("dangling bound index in subject")),
        Term::Free(x) => {
            let Some(i) = spine.iter().position(|(v, _)| v == x) else {
                return Err(Error::invalid(format!("subject variable {x} not in spine")));
            };
            for d in derivs.values() {
                if d.rule != TRule::Var {
                    return Err(Error::invalid("variable subject with a non-variable rule"));
                }
            }
            let relocated = hyps[i].formula.relocate(&hyps[i].map).map_err(|_| {
                Error::invalid("variable case requires a bijective hypothesis map")
            })?;
            let theta = Proof::ax(hyps.to_vec(), i)?;
            let rho = sim_conversion(&relocated, concl, mode)?;
            subst_into_single(&rho, &theta)
        }
        Term::Lam(_, lam_ty, body) => {
            let Formula::Arrow { src, map, dst } = concl else {
                return Err(Error::invalid(
                    "abstraction subject needs an arrow-shaped conclusion formula",
                ));
            };
            let avoid = spine.iter().map(|(v, _)| v.clone()).collect();
            let fresh = fresh_name(&avoid);
            let opened = open(body, &fresh);
            let mut inner_spine = spine.to_vec();
            inner_spine.push((fresh.clone(), lam_ty.clone()));

            let mut inner_derivs_storage: Vec<TypingDeriv> = Vec::new();
            for (j, d) in derivs {
                if d.rule != TRule::Abs || d.premises.len() != 1 {
                    return Err(Error::invalid(format!(
                        "abstraction subject with a non-abstraction rule at {j}"
                    )));
                }
                let premise = &d.premises[0];
                let Some(last) = premise.judgment.ctx.last() else {
                    return Err(Error::invalid("abstraction premise lacks its binder"));
                };
                inner_derivs_storage.push(rename_var(premise, &last.var.clone(), &fresh));
            }
            let inner_derivs: BTreeMap<Idx, &TypingDeriv> = derivs
                .keys()
                .zip(inner_derivs_storage.iter())
                .map(|(j, d)| (*j, d))
                .collect();

            let mut inner_hyps = hyps.to_vec();
            inner_hyps.push(Hypothesis::new(src.as_ref().clone(), map.clone()));
            let premise = complete_rec(
                &opened,
                &inner_spine,
                &inner_derivs,
                &inner_hyps,
                dst,
                mode,
                alloc,
            )?;
            Proof::intro(premise)
        }
        Term::App(f_term, a_term) => {
            for d in derivs.values() {
                if d.rule != TRule::App {
                    return Err(Error::invalid(
                        "application subject with a non-application rule",
                    ));
                }
            }
            // Fresh disjoint blocks, one index per argument premise.
            let mut l_union = IndexSet::new();
            let mut u_map = IndexMap::empty();
            let mut arg_points: BTreeMap<Idx, Point> = BTreeMap::new();
            let mut arg_derivs: BTreeMap<Idx, &TypingDeriv> = BTreeMap::new();
            let mut fun_derivs: BTreeMap<Idx, &TypingDeriv> = BTreeMap::new();
            let mut blocks: BTreeMap<Idx, Vec<Idx>> = BTreeMap::new();
            for (j, d) in derivs {
                let (fun, args) = d
                    .premises
                    .split_first()
                    .ok_or_else(|| Error::invalid("application rule lacks premises"))?;
                fun_derivs.insert(*j, fun);
                let block = alloc.block(args.len());
                let block_vec: Vec<Idx> = block.iter().collect();
                for (l, arg) in block_vec.iter().zip(args.iter()) {
                    u_map = u_map.disjoint_union(&IndexMap::from_pairs([(*l, *j)])?)?;
                    arg_points.insert(*l, arg.judgment.point.clone());
                    arg_derivs.insert(*l, arg);
                }
                l_union = l_union.disjoint_union(&block)?;
                blocks.insert(*j, block_vec);
            }

            // The argument formula, shaped for the argument subject.
            let arg_formula = match mode {
                Mode::Typed => {
                    let sigma = match derivs.values().next() {
                        Some(d) => match &d.premises[1..] {
                            [first, ..] => first.judgment.ty.clone().ok_or_else(|| {
                                Error::invalid("typed premise lacks its type")
                            })?,
                            [] => infer_simple(a_term, spine)?,
                        },
                        None => infer_simple(a_term, spine)?,
                    };
                    represent(ReprSpace::Typed(&sigma), &l_union, &arg_points, alloc)?
                }
                Mode::Untyped => {
                    represent_demand(demand(a_term), &l_union, &arg_points, alloc)?
                }
            };

            // Split every hypothesis fiber between the function and the
            // argument branches, matching the premises' multisets greedily
            // in canonical point order.
            let n = hyps.len();
            let mut fun_hyps = Vec::with_capacity(n);
            let mut arg_hyps = Vec::with_capacity(n);
            let mut splits = Vec::with_capacity(n);
            for (i, h) in hyps.iter().enumerate() {
                let fam_i = h.formula.fam();
                let mut r0 = IndexSet::new();
                let mut v_i = IndexMap::empty();
                for j in derivs.keys() {
                    let fiber = h.map.preimage(*j);
                    let fun_mset = &fun_derivs[j].judgment.ctx[i].mset;
                    let arg_msets: Vec<&Multiset<Point>> = blocks[j]
                        .iter()
                        .map(|l| &arg_derivs[l].judgment.ctx[i].mset)
                        .collect();
                    // Group the fiber indices by point value.
                    let mut by_point: BTreeMap<&Point, Vec<Idx>> = BTreeMap::new();
                    for r in fiber.iter() {
                        by_point.entry(&fam_i[&r]).or_default().push(r);
                    }
                    let mut take = |m: &Multiset<Point>| -> Result<Vec<Idx>> {
                        let mut out = Vec::new();
                        for (p, cnt) in m.entries() {
                            let bucket = by_point.get_mut(p).ok_or_else(|| {
                                Error::invalid("multiset decomposition mismatch")
                            })?;
                            if bucket.len() < cnt {
                                return Err(Error::invalid(
                                    "multiset decomposition mismatch",
                                ));
                            }
                            out.extend(bucket.drain(..cnt));
                        }
                        Ok(out)
                    };
                    let zero = take(fun_mset)?;
                    for r in zero {
                        r0.insert(r);
                    }
                    for (l, m) in blocks[j].iter().zip(arg_msets.iter()) {
                        for r in take(m)? {
                            v_i = v_i.disjoint_union(&IndexMap::from_pairs([(r, *l)])?)?;
                        }
                    }
                    if by_point.values().any(|b| !b.is_empty()) {
                        return Err(Error::invalid("multiset decomposition mismatch"));
                    }
                }
                let r1 = v_i.source();
                fun_hyps.push(Hypothesis::new(
                    h.formula.restrict(&r0),
                    h.map.restrict(&r0),
                ));
                arg_hyps.push(Hypothesis::new(h.formula.restrict(&r1), v_i));
                splits.push((r0, r1));
            }

            let fun_concl = Formula::arrow(arg_formula.clone(), u_map, concl.clone());
            let mu = complete_rec(
                f_term,
                spine,
                &fun_derivs,
                &fun_hyps,
                &fun_concl,
                mode,
                alloc,
            )?;
            let rho = complete_rec(
                a_term,
                spine,
                &arg_derivs,
                &arg_hyps,
                &arg_formula,
                mode,
                alloc,
            )?;
            Proof::elim(mu, rho, hyps.to_vec(), splits)
        }
    }
}
