//! Textual forms of every kernel object, over the s-expression reader.
//!
//! Reserved head symbols identify each object kind, so a workspace file can
//! mix kinds freely. Binder names are display hints; printing renames a
//! binder when reusing it would capture a free occurrence.

use std::collections::BTreeMap;

use crate::church::{CRule, ChurchDeriv, PreTerm};
use crate::error::{Error, Result};
use crate::formulas::{Formula, Hypothesis};
use crate::indices::{Idx, IndexMap, IndexSet, Multiset};
use crate::itsys::{CtxEntry, TRule, TypingDeriv, TypingJudgment};
use crate::ljker::{Proof, Rule, Sequent};
use crate::relmodel::Point;
use crate::sexpr::Sexp;
use crate::terms::{open, SimpleType, Term};
use crate::xlate::FamilyTyping;

fn err(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn expect_list<'a>(s: &'a Sexp, what: &str) -> Result<&'a [Sexp]> {
    s.as_list()
        .ok_or_else(|| err(format!("expected a {what} form, found {s}")))
}

fn expect_head<'a>(s: &'a Sexp, head: &str) -> Result<&'a [Sexp]> {
    let items = expect_list(s, head)?;
    match items.first().and_then(Sexp::as_sym) {
        Some(h) if h == head => Ok(&items[1..]),
        _ => Err(err(format!("expected a ({head} ...) form, found {s}"))),
    }
}

fn expect_sym<'a>(s: &'a Sexp, what: &str) -> Result<&'a str> {
    s.as_sym()
        .ok_or_else(|| err(format!("expected a {what} symbol, found {s}")))
}

fn idx_from(s: &Sexp) -> Result<Idx> {
    expect_sym(s, "index")?
        .parse()
        .map_err(|_| err(format!("not an index: {s}")))
}

// ---- index sets and maps ----

pub fn iset_to_sexp(j: &IndexSet) -> Sexp {
    let mut items = vec![Sexp::sym("iset")];
    items.extend(j.iter().map(|i| Sexp::sym(i.to_string())));
    Sexp::list(items)
}

pub fn iset_from_sexp(s: &Sexp) -> Result<IndexSet> {
    let items = expect_head(s, "iset")?;
    items.iter().map(idx_from).collect()
}

pub fn imap_to_sexp(m: &IndexMap) -> Sexp {
    let mut items = vec![Sexp::sym("imap")];
    for (k, v) in m.iter() {
        items.push(Sexp::list(vec![
            Sexp::sym(k.to_string()),
            Sexp::sym(v.to_string()),
        ]));
    }
    Sexp::list(items)
}

pub fn imap_from_sexp(s: &Sexp) -> Result<IndexMap> {
    let items = expect_head(s, "imap")?;
    let mut pairs = Vec::new();
    for item in items {
        let pair = expect_list(item, "imap pair")?;
        if pair.len() != 2 {
            return Err(err(format!("imap pair needs two indices: {item}")));
        }
        pairs.push((idx_from(&pair[0])?, idx_from(&pair[1])?));
    }
    IndexMap::from_pairs(pairs)
}

// ---- simple types ----

pub fn type_to_sexp(t: &SimpleType) -> Sexp {
    match t {
        SimpleType::Atom(a) => Sexp::list(vec![Sexp::sym("atom"), Sexp::sym(a.clone())]),
        SimpleType::Arrow(s, d) => Sexp::list(vec![
            Sexp::sym("arr"),
            type_to_sexp(s),
            type_to_sexp(d),
        ]),
    }
}

pub fn type_from_sexp(s: &Sexp) -> Result<SimpleType> {
    match s.head() {
        Some("atom") => {
            let items = expect_head(s, "atom")?;
            match items {
                [name] => Ok(SimpleType::atom(expect_sym(name, "atom name")?)),
                _ => Err(err(format!("atom takes one name: {s}"))),
            }
        }
        Some("arr") => {
            let items = expect_head(s, "arr")?;
            match items {
                [a, b] => Ok(SimpleType::arrow(type_from_sexp(a)?, type_from_sexp(b)?)),
                _ => Err(err(format!("arr takes two types: {s}"))),
            }
        }
        _ => Err(err(format!("expected a type, found {s}"))),
    }
}

// ---- terms ----

pub fn term_to_sexp(t: &Term) -> Sexp {
    print_term(t, &mut Vec::new())
}

fn free_names_under(t: &Term) -> std::collections::BTreeSet<String> {
    t.free_vars()
}

fn print_term(t: &Term, env: &mut Vec<String>) -> Sexp {
    match t {
        Term::Bound(k) => {
            let name = env
                .get(env.len().wrapping_sub(1 + *k))
                .cloned()
                .unwrap_or_else(|| format!("?{k}"));
            Sexp::list(vec![Sexp::sym("var"), Sexp::sym(name)])
        }
        Term::Free(x) => Sexp::list(vec![Sexp::sym("var"), Sexp::sym(x.clone())]),
        Term::Bottom => Sexp::sym("bot"),
        Term::App(f, a) => Sexp::list(vec![
            Sexp::sym("app"),
            print_term(f, env),
            print_term(a, env),
        ]),
        Term::Lam(hint, ty, body) => {
            let mut avoid = free_names_under(body);
            avoid.extend(env.iter().cloned());
            let base = if hint.0.is_empty() { "x" } else { &hint.0 };
            let mut name = base.to_string();
            let mut k = 0;
            while avoid.contains(&name) {
                name = format!("{base}{k}");
                k += 1;
            }
            env.push(name.clone());
            let body_s = print_term(body, env);
            env.pop();
            let mut items = vec![Sexp::sym("lam"), Sexp::sym(name)];
            if let Some(ty) = ty {
                items.push(type_to_sexp(ty));
            }
            items.push(body_s);
            Sexp::list(items)
        }
    }
}

pub fn term_from_sexp(s: &Sexp) -> Result<Term> {
    parse_term(s, &mut Vec::new())
}

fn parse_term(s: &Sexp, env: &mut Vec<String>) -> Result<Term> {
    if let Some(sym) = s.as_sym() {
        if sym == "bot" {
            return Ok(Term::Bottom);
        }
        return Err(err(format!("expected a term, found {s}")));
    }
    match s.head() {
        Some("var") => {
            let items = expect_head(s, "var")?;
            let [name] = items else {
                return Err(err(format!("var takes one name: {s}")));
            };
            let name = expect_sym(name, "variable")?;
            match env.iter().rposition(|v| v == name) {
                Some(pos) => Ok(Term::Bound(env.len() - 1 - pos)),
                None => Ok(Term::var(name)),
            }
        }
        Some("app") => {
            let items = expect_head(s, "app")?;
            let [f, a] = items else {
                return Err(err(format!("app takes two terms: {s}")));
            };
            Ok(Term::app(parse_term(f, env)?, parse_term(a, env)?))
        }
        Some("lam") => {
            let items = expect_head(s, "lam")?;
            let (name, ty, body) = match items {
                [name, body] => (expect_sym(name, "binder")?, None, body),
                [name, ty, body] => (
                    expect_sym(name, "binder")?,
                    Some(type_from_sexp(ty)?),
                    body,
                ),
                _ => return Err(err(format!("lam takes a binder and a body: {s}"))),
            };
            env.push(name.to_string());
            let body = parse_term(body, env);
            env.pop();
            Ok(Term::Lam(
                crate::terms::Binder(name.to_string()),
                ty,
                Box::new(body?),
            ))
        }
        _ => Err(err(format!("expected a term, found {s}"))),
    }
}

// ---- points and multisets ----

pub fn point_to_sexp(p: &Point) -> Sexp {
    match p {
        Point::Atom(a) => Sexp::sym(a.clone()),
        Point::Star => Sexp::sym("star"),
        Point::Pair(m, b) => Sexp::list(vec![
            Sexp::sym("pt"),
            mset_to_sexp(m),
            point_to_sexp(b),
        ]),
        Point::Tag(j, q) => Sexp::list(vec![
            Sexp::sym("tag"),
            Sexp::sym(j.to_string()),
            point_to_sexp(q),
        ]),
    }
}

pub fn point_from_sexp(s: &Sexp) -> Result<Point> {
    if let Some(sym) = s.as_sym() {
        if sym == "star" {
            return Ok(Point::Star);
        }
        return Ok(Point::atom(sym));
    }
    match s.head() {
        Some("pt") => {
            let items = expect_head(s, "pt")?;
            let [m, b] = items else {
                return Err(err(format!("pt takes a multiset and a point: {s}")));
            };
            Ok(Point::pair(mset_from_sexp(m)?, point_from_sexp(b)?))
        }
        Some("tag") => {
            let items = expect_head(s, "tag")?;
            let [j, q] = items else {
                return Err(err(format!("tag takes an index and a point: {s}")));
            };
            Ok(Point::tag(idx_from(j)?, point_from_sexp(q)?))
        }
        _ => Err(err(format!("expected a point, found {s}"))),
    }
}

pub fn mset_to_sexp(m: &Multiset<Point>) -> Sexp {
    let mut items = vec![Sexp::sym("mset")];
    items.extend(m.expand().map(point_to_sexp));
    Sexp::list(items)
}

pub fn mset_from_sexp(s: &Sexp) -> Result<Multiset<Point>> {
    let items = expect_head(s, "mset")?;
    items.iter().map(point_from_sexp).collect()
}

// ---- formulas, hypotheses, sequents ----

pub fn formula_to_sexp(f: &Formula) -> Sexp {
    match f {
        Formula::Atom { name, family } => {
            let mut entries = Vec::new();
            for (j, p) in family {
                entries.push(Sexp::list(vec![
                    Sexp::sym(j.to_string()),
                    point_to_sexp(p),
                ]));
            }
            Sexp::list(vec![
                Sexp::sym("fatom"),
                Sexp::sym(name.clone()),
                Sexp::list(entries),
            ])
        }
        Formula::Star(j) => Sexp::list(vec![Sexp::sym("fstar"), iset_to_sexp(j)]),
        Formula::Arrow { src, map, dst } => Sexp::list(vec![
            Sexp::sym("farr"),
            formula_to_sexp(src),
            imap_to_sexp(map),
            formula_to_sexp(dst),
        ]),
    }
}

pub fn formula_from_sexp(s: &Sexp) -> Result<Formula> {
    match s.head() {
        Some("fatom") => {
            let items = expect_head(s, "fatom")?;
            let [name, entries] = items else {
                return Err(err(format!("fatom takes a name and a family: {s}")));
            };
            let mut family = BTreeMap::new();
            for entry in expect_list(entries, "family")? {
                let pair = expect_list(entry, "family entry")?;
                let [j, p] = pair else {
                    return Err(err(format!("family entry needs an index and a point: {entry}")));
                };
                if family.insert(idx_from(j)?, point_from_sexp(p)?).is_some() {
                    return Err(err(format!("family defined twice at {j}")));
                }
            }
            Ok(Formula::atom(expect_sym(name, "atom name")?, family))
        }
        Some("fstar") => {
            let items = expect_head(s, "fstar")?;
            let [j] = items else {
                return Err(err(format!("fstar takes one index set: {s}")));
            };
            Ok(Formula::star(iset_from_sexp(j)?))
        }
        Some("farr") => {
            let items = expect_head(s, "farr")?;
            let [a, u, b] = items else {
                return Err(err(format!("farr takes a source, a map and a target: {s}")));
            };
            Ok(Formula::arrow(
                formula_from_sexp(a)?,
                imap_from_sexp(u)?,
                formula_from_sexp(b)?,
            ))
        }
        _ => Err(err(format!("expected a formula, found {s}"))),
    }
}

pub fn hyp_to_sexp(h: &Hypothesis) -> Sexp {
    Sexp::list(vec![
        Sexp::sym("hyp"),
        formula_to_sexp(&h.formula),
        imap_to_sexp(&h.map),
    ])
}

pub fn hyp_from_sexp(s: &Sexp) -> Result<Hypothesis> {
    let items = expect_head(s, "hyp")?;
    let [f, m] = items else {
        return Err(err(format!("hyp takes a formula and a map: {s}")));
    };
    Ok(Hypothesis::new(formula_from_sexp(f)?, imap_from_sexp(m)?))
}

pub fn sequent_to_sexp(seq: &Sequent) -> Sexp {
    let mut hyps = vec![Sexp::sym("hyps")];
    hyps.extend(seq.hyps.iter().map(hyp_to_sexp));
    Sexp::list(vec![
        Sexp::sym("seq"),
        Sexp::list(hyps),
        formula_to_sexp(&seq.concl),
    ])
}

pub fn sequent_from_sexp(s: &Sexp) -> Result<Sequent> {
    let items = expect_head(s, "seq")?;
    let [hyps, concl] = items else {
        return Err(err(format!("seq takes hypotheses and a conclusion: {s}")));
    };
    let hyp_items = expect_head(hyps, "hyps")?;
    let hyps = hyp_items
        .iter()
        .map(hyp_from_sexp)
        .collect::<Result<Vec<_>>>()?;
    Ok(Sequent::new(hyps, formula_from_sexp(concl)?))
}

// ---- proofs ----

pub fn proof_to_sexp(p: &Proof) -> Sexp {
    let seq = sequent_to_sexp(&p.sequent);
    match &p.rule {
        Rule::Ax(i) => Sexp::list(vec![Sexp::sym("ax"), seq, Sexp::sym(i.to_string())]),
        Rule::StarAx => Sexp::list(vec![Sexp::sym("starax"), seq]),
        Rule::Intro => Sexp::list(vec![
            Sexp::sym("intro"),
            seq,
            proof_to_sexp(&p.premises[0]),
        ]),
        Rule::Elim { splits } => {
            let mut split_items = vec![Sexp::sym("splits")];
            for (l, r) in splits {
                split_items.push(Sexp::list(vec![iset_to_sexp(l), iset_to_sexp(r)]));
            }
            Sexp::list(vec![
                Sexp::sym("elim"),
                seq,
                Sexp::list(split_items),
                proof_to_sexp(&p.premises[0]),
                proof_to_sexp(&p.premises[1]),
            ])
        }
    }
}

pub fn proof_from_sexp(s: &Sexp) -> Result<Proof> {
    match s.head() {
        Some("ax") => {
            let items = expect_head(s, "ax")?;
            let [seq, i] = items else {
                return Err(err(format!("ax takes a sequent and an index: {s}")));
            };
            let sequent = sequent_from_sexp(seq)?;
            let i: usize = expect_sym(i, "hypothesis index")?
                .parse()
                .map_err(|_| err("not a hypothesis index"))?;
            Ok(Proof {
                sequent,
                rule: Rule::Ax(i),
                premises: Vec::new(),
            })
        }
        Some("starax") => {
            let items = expect_head(s, "starax")?;
            let [seq] = items else {
                return Err(err(format!("starax takes one sequent: {s}")));
            };
            Ok(Proof {
                sequent: sequent_from_sexp(seq)?,
                rule: Rule::StarAx,
                premises: Vec::new(),
            })
        }
        Some("intro") => {
            let items = expect_head(s, "intro")?;
            let [seq, premise] = items else {
                return Err(err(format!("intro takes a sequent and a premise: {s}")));
            };
            Ok(Proof {
                sequent: sequent_from_sexp(seq)?,
                rule: Rule::Intro,
                premises: vec![proof_from_sexp(premise)?],
            })
        }
        Some("elim") => {
            let items = expect_head(s, "elim")?;
            let [seq, splits, p1, p2] = items else {
                return Err(err(format!(
                    "elim takes a sequent, splits and two premises: {s}"
                )));
            };
            let split_items = expect_head(splits, "splits")?;
            let mut parsed = Vec::new();
            for item in split_items {
                let pair = expect_list(item, "split")?;
                let [l, r] = pair else {
                    return Err(err(format!("split takes two index sets: {item}")));
                };
                parsed.push((iset_from_sexp(l)?, iset_from_sexp(r)?));
            }
            Ok(Proof {
                sequent: sequent_from_sexp(seq)?,
                rule: Rule::Elim { splits: parsed },
                premises: vec![proof_from_sexp(p1)?, proof_from_sexp(p2)?],
            })
        }
        _ => Err(err(format!("expected a proof, found {s}"))),
    }
}

// ---- typing judgments and derivations ----

pub fn judgment_to_sexp(j: &TypingJudgment) -> Sexp {
    let mut ctx = vec![Sexp::sym("ctx")];
    for e in &j.ctx {
        let mut entry = vec![Sexp::sym(e.var.clone()), mset_to_sexp(&e.mset)];
        if let Some(ty) = &e.ty {
            entry.push(type_to_sexp(ty));
        }
        ctx.push(Sexp::list(entry));
    }
    let mut items = vec![
        Sexp::sym("judg"),
        Sexp::list(ctx),
        term_to_sexp(&j.subject),
        point_to_sexp(&j.point),
    ];
    if let Some(ty) = &j.ty {
        items.push(type_to_sexp(ty));
    }
    Sexp::list(items)
}

pub fn judgment_from_sexp(s: &Sexp) -> Result<TypingJudgment> {
    let items = expect_head(s, "judg")?;
    let (ctx_s, subject, point, ty) = match items {
        [c, t, p] => (c, t, p, None),
        [c, t, p, ty] => (c, t, p, Some(type_from_sexp(ty)?)),
        _ => return Err(err(format!("judg takes a context, term, point [type]: {s}"))),
    };
    let mut ctx = Vec::new();
    for entry in expect_head(ctx_s, "ctx")? {
        let parts = expect_list(entry, "context entry")?;
        let (var, mset, ty) = match parts {
            [v, m] => (expect_sym(v, "variable")?, mset_from_sexp(m)?, None),
            [v, m, t] => (
                expect_sym(v, "variable")?,
                mset_from_sexp(m)?,
                Some(type_from_sexp(t)?),
            ),
            _ => return Err(err(format!("context entry: (x mset [type]): {entry}"))),
        };
        ctx.push(CtxEntry::new(var, mset, ty));
    }
    Ok(TypingJudgment {
        ctx,
        subject: term_from_sexp(subject)?,
        point: point_from_sexp(point)?,
        ty,
    })
}

pub fn tderiv_to_sexp(d: &TypingDeriv) -> Sexp {
    let judg = judgment_to_sexp(&d.judgment);
    match d.rule {
        TRule::Var => Sexp::list(vec![Sexp::sym("tvar"), judg]),
        TRule::Abs => Sexp::list(vec![
            Sexp::sym("tabs"),
            judg,
            tderiv_to_sexp(&d.premises[0]),
        ]),
        TRule::App => {
            let mut args = Vec::new();
            for premise in &d.premises[1..] {
                args.push(tderiv_to_sexp(premise));
            }
            Sexp::list(vec![
                Sexp::sym("tapp"),
                judg,
                tderiv_to_sexp(&d.premises[0]),
                Sexp::list(args),
            ])
        }
    }
}

pub fn tderiv_from_sexp(s: &Sexp) -> Result<TypingDeriv> {
    match s.head() {
        Some("tvar") => {
            let items = expect_head(s, "tvar")?;
            let [judg] = items else {
                return Err(err(format!("tvar takes one judgment: {s}")));
            };
            Ok(TypingDeriv {
                judgment: judgment_from_sexp(judg)?,
                rule: TRule::Var,
                premises: Vec::new(),
            })
        }
        Some("tabs") => {
            let items = expect_head(s, "tabs")?;
            let [judg, premise] = items else {
                return Err(err(format!("tabs takes a judgment and a premise: {s}")));
            };
            Ok(TypingDeriv {
                judgment: judgment_from_sexp(judg)?,
                rule: TRule::Abs,
                premises: vec![tderiv_from_sexp(premise)?],
            })
        }
        Some("tapp") => {
            let items = expect_head(s, "tapp")?;
            let [judg, fun, args] = items else {
                return Err(err(format!(
                    "tapp takes a judgment, a function premise and arguments: {s}"
                )));
            };
            let mut premises = vec![tderiv_from_sexp(fun)?];
            for arg in expect_list(args, "argument premises")? {
                premises.push(tderiv_from_sexp(arg)?);
            }
            Ok(TypingDeriv {
                judgment: judgment_from_sexp(judg)?,
                rule: TRule::App,
                premises,
            })
        }
        _ => Err(err(format!("expected a typing derivation, found {s}"))),
    }
}

// ---- typing families ----

pub fn tfam_to_sexp(f: &FamilyTyping) -> Sexp {
    let mut spine = vec![Sexp::sym("spine")];
    for (v, ty) in &f.spine {
        let mut entry = vec![Sexp::sym(v.clone())];
        if let Some(ty) = ty {
            entry.push(type_to_sexp(ty));
        }
        spine.push(Sexp::list(entry));
    }
    let mut entries = Vec::new();
    for (j, d) in &f.derivs {
        entries.push(Sexp::list(vec![
            Sexp::sym(j.to_string()),
            tderiv_to_sexp(d),
        ]));
    }
    Sexp::list(vec![
        Sexp::sym("tfam"),
        Sexp::list(spine),
        term_to_sexp(&f.subject),
        Sexp::list(entries),
    ])
}

pub fn tfam_from_sexp(s: &Sexp) -> Result<FamilyTyping> {
    let items = expect_head(s, "tfam")?;
    let [spine_s, subject, entries] = items else {
        return Err(err(format!(
            "tfam takes a spine, a subject and indexed derivations: {s}"
        )));
    };
    let mut spine = Vec::new();
    for entry in expect_head(spine_s, "spine")? {
        let parts = expect_list(entry, "spine entry")?;
        match parts {
            [v] => spine.push((expect_sym(v, "variable")?.to_string(), None)),
            [v, ty] => spine.push((
                expect_sym(v, "variable")?.to_string(),
                Some(type_from_sexp(ty)?),
            )),
            _ => return Err(err(format!("spine entry: (x [type]): {entry}"))),
        }
    }
    let mut derivs = BTreeMap::new();
    for entry in expect_list(entries, "family entries")? {
        let pair = expect_list(entry, "family entry")?;
        let [j, d] = pair else {
            return Err(err(format!("family entry: (j derivation): {entry}")));
        };
        if derivs
            .insert(idx_from(j)?, tderiv_from_sexp(d)?)
            .is_some()
        {
            return Err(err(format!("family defined twice at {j}")));
        }
    }
    Ok(FamilyTyping {
        spine,
        subject: term_from_sexp(subject)?,
        derivs,
    })
}

// ---- point families (represent input) ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFamily {
    pub ty: Option<SimpleType>,
    pub family: BTreeMap<Idx, Point>,
}

pub fn pfam_to_sexp(f: &PointFamily) -> Sexp {
    let mut items = vec![Sexp::sym("pfam")];
    if let Some(ty) = &f.ty {
        items.push(Sexp::list(vec![Sexp::sym("type"), type_to_sexp(ty)]));
    }
    let mut entries = Vec::new();
    for (j, p) in &f.family {
        entries.push(Sexp::list(vec![
            Sexp::sym(j.to_string()),
            point_to_sexp(p),
        ]));
    }
    items.push(Sexp::list(entries));
    Sexp::list(items)
}

pub fn pfam_from_sexp(s: &Sexp) -> Result<PointFamily> {
    let items = expect_head(s, "pfam")?;
    let (ty, entries) = match items {
        [entries] => (None, entries),
        [ty, entries] if ty.head() == Some("type") => {
            let ty_items = expect_head(ty, "type")?;
            let [t] = ty_items else {
                return Err(err(format!("type takes one simple type: {ty}")));
            };
            (Some(type_from_sexp(t)?), entries)
        }
        _ => return Err(err(format!("pfam takes [(type T)] and entries: {s}"))),
    };
    let mut family = BTreeMap::new();
    for entry in expect_list(entries, "point family entries")? {
        let pair = expect_list(entry, "point family entry")?;
        let [j, p] = pair else {
            return Err(err(format!("point family entry: (j point): {entry}")));
        };
        if family.insert(idx_from(j)?, point_from_sexp(p)?).is_some() {
            return Err(err(format!("point family defined twice at {j}")));
        }
    }
    Ok(PointFamily { ty, family })
}

// ---- the indexed calculus ----

pub fn preterm_to_sexp(t: &PreTerm) -> Sexp {
    match t {
        PreTerm::Var(x, j) => Sexp::list(vec![
            Sexp::sym("cvar"),
            Sexp::sym(x.clone()),
            iset_to_sexp(j),
        ]),
        PreTerm::Abst(x, a, u, body) => Sexp::list(vec![
            Sexp::sym("cabs"),
            Sexp::sym(x.clone()),
            formula_to_sexp(a),
            imap_to_sexp(u),
            preterm_to_sexp(body),
        ]),
        PreTerm::App(f, a) => Sexp::list(vec![
            Sexp::sym("capp"),
            preterm_to_sexp(f),
            preterm_to_sexp(a),
        ]),
        PreTerm::Bottom => Sexp::sym("cbot"),
    }
}

pub fn preterm_from_sexp(s: &Sexp) -> Result<PreTerm> {
    if let Some(sym) = s.as_sym() {
        if sym == "cbot" {
            return Ok(PreTerm::Bottom);
        }
        return Err(err(format!("expected a pre-term, found {s}")));
    }
    match s.head() {
        Some("cvar") => {
            let items = expect_head(s, "cvar")?;
            let [x, j] = items else {
                return Err(err(format!("cvar takes a name and an index set: {s}")));
            };
            Ok(PreTerm::var(expect_sym(x, "variable")?, iset_from_sexp(j)?))
        }
        Some("cabs") => {
            let items = expect_head(s, "cabs")?;
            let [x, a, u, body] = items else {
                return Err(err(format!(
                    "cabs takes a binder, formula, map, body: {s}"
                )));
            };
            Ok(PreTerm::abst(
                expect_sym(x, "binder")?,
                formula_from_sexp(a)?,
                imap_from_sexp(u)?,
                preterm_from_sexp(body)?,
            ))
        }
        Some("capp") => {
            let items = expect_head(s, "capp")?;
            let [f, a] = items else {
                return Err(err(format!("capp takes two pre-terms: {s}")));
            };
            Ok(PreTerm::app(preterm_from_sexp(f)?, preterm_from_sexp(a)?))
        }
        _ => Err(err(format!("expected a pre-term, found {s}"))),
    }
}

pub fn cderiv_to_sexp(d: &ChurchDeriv) -> Sexp {
    let mut ctx = vec![Sexp::sym("cctx")];
    for (x, h) in &d.ctx {
        ctx.push(Sexp::list(vec![Sexp::sym(x.clone()), hyp_to_sexp(h)]));
    }
    let head = match d.rule {
        CRule::Bottom => "cd-bot",
        CRule::Var(_) => "cd-var",
        CRule::Abs => "cd-abs",
        CRule::App => "cd-app",
    };
    let mut items = vec![
        Sexp::sym(head),
        Sexp::list(ctx),
        preterm_to_sexp(&d.subject),
        formula_to_sexp(&d.formula),
    ];
    if let CRule::Var(i) = d.rule {
        items.push(Sexp::sym(i.to_string()));
    }
    for premise in &d.premises {
        items.push(cderiv_to_sexp(premise));
    }
    Sexp::list(items)
}

pub fn cderiv_from_sexp(s: &Sexp) -> Result<ChurchDeriv> {
    let head = s
        .head()
        .ok_or_else(|| err(format!("expected a derivation, found {s}")))?;
    let items = expect_head(s, head)?;
    if items.len() < 3 {
        return Err(err(format!("derivation needs a context, subject, formula: {s}")));
    }
    let mut ctx = Vec::new();
    for entry in expect_head(&items[0], "cctx")? {
        let pair = expect_list(entry, "context entry")?;
        let [x, h] = pair else {
            return Err(err(format!("context entry: (x hyp): {entry}")));
        };
        ctx.push((expect_sym(x, "variable")?.to_string(), hyp_from_sexp(h)?));
    }
    let subject = preterm_from_sexp(&items[1])?;
    let formula = formula_from_sexp(&items[2])?;
    let rest = &items[3..];
    let (rule, premises) = match head {
        "cd-bot" => {
            if !rest.is_empty() {
                return Err(err("cd-bot takes no premises"));
            }
            (CRule::Bottom, Vec::new())
        }
        "cd-var" => {
            let [i] = rest else {
                return Err(err("cd-var takes a hypothesis index"));
            };
            let i: usize = expect_sym(i, "hypothesis index")?
                .parse()
                .map_err(|_| err("not a hypothesis index"))?;
            (CRule::Var(i), Vec::new())
        }
        "cd-abs" => {
            let [premise] = rest else {
                return Err(err("cd-abs takes one premise"));
            };
            (CRule::Abs, vec![cderiv_from_sexp(premise)?])
        }
        "cd-app" => {
            let [p1, p2] = rest else {
                return Err(err("cd-app takes two premises"));
            };
            (
                CRule::App,
                vec![cderiv_from_sexp(p1)?, cderiv_from_sexp(p2)?],
            )
        }
        _ => return Err(err(format!("expected a derivation, found {s}"))),
    };
    Ok(ChurchDeriv {
        ctx,
        subject,
        formula,
        rule,
        premises,
    })
}

/// Applies a lambda body to a display name, for printing judgments whose
/// premises open a binder.
pub fn open_for_display(body: &Term, name: &str) -> Term {
    open(body, name)
}
