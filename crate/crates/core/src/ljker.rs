//! The indexed sequent kernel: sequents, proof trees, checking, underlying
//! term extraction, and the proof transformations (weakening, relocation,
//! restriction, substitution and its two corollaries, similarity conversion,
//! and proofs of empty-domain formulas).
//!
//! Elimination nodes store the per-hypothesis domain split explicitly so
//! checking is a linear walk; every node carries its full sequent.

use crate::error::{Error, Result, Violation};
use crate::formulas::{similar, Formula, Hypothesis, Mode};
use crate::indices::{csucc, IndexMap, IndexSet};
use crate::terms::{fresh_name, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub hyps: Vec<Hypothesis>,
    pub concl: Formula,
}

impl Sequent {
    pub fn new(hyps: Vec<Hypothesis>, concl: Formula) -> Self {
        Sequent { hyps, concl }
    }

    pub fn validate(&self, mode: Mode) -> std::result::Result<(), Violation> {
        self.concl.validate(mode)?;
        let target = self.concl.dom();
        for (i, h) in self.hyps.iter().enumerate() {
            h.formula.validate(mode)?;
            if !h.map.is_total_on(&h.formula.dom()) {
                return Err(Violation::new(
                    "sequent",
                    format!("hypothesis {i} map not total on its formula domain"),
                ));
            }
            if !h.map.image().is_subset(&target) {
                return Err(Violation::new(
                    "sequent",
                    format!("hypothesis {i} map leaves the conclusion domain"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// Identity axiom on the i-th hypothesis, delocalized by its map.
    Ax(usize),
    /// `⊢ ⊥_∅` (untyped only); hypotheses, if any, must have empty domains.
    StarAx,
    Intro,
    /// Per-hypothesis split `(Lᵢ, Rᵢ)` of the conclusion hypothesis domains
    /// between the function premise and the argument premise.
    Elim { splits: Vec<(IndexSet, IndexSet)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub sequent: Sequent,
    pub rule: Rule,
    pub premises: Vec<Proof>,
}

impl Proof {
    /// Axiom node; the conclusion is the i-th hypothesis relocated.
    pub fn ax(hyps: Vec<Hypothesis>, i: usize) -> Result<Proof> {
        let h = hyps
            .get(i)
            .ok_or_else(|| Error::invalid("axiom hypothesis index out of range"))?;
        let concl = h.formula.relocate(&h.map)?;
        Ok(Proof {
            sequent: Sequent::new(hyps, concl),
            rule: Rule::Ax(i),
            premises: Vec::new(),
        })
    }

    pub fn star_ax(hyps: Vec<Hypothesis>) -> Proof {
        Proof {
            sequent: Sequent::new(hyps, Formula::star(IndexSet::new())),
            rule: Rule::StarAx,
            premises: Vec::new(),
        }
    }

    /// Introduction: closes the last hypothesis of the premise into an
    /// arrow conclusion.
    pub fn intro(premise: Proof) -> Result<Proof> {
        let mut hyps = premise.sequent.hyps.clone();
        let last = hyps
            .pop()
            .ok_or_else(|| Error::invalid("introduction needs a hypothesis to close"))?;
        let concl = Formula::arrow(last.formula, last.map, premise.sequent.concl.clone());
        Ok(Proof {
            sequent: Sequent::new(hyps, concl),
            rule: Rule::Intro,
            premises: vec![premise],
        })
    }

    /// Elimination with explicit conclusion hypotheses and splits; the
    /// conclusion formula is the target of the function premise's arrow.
    pub fn elim(
        fun: Proof,
        arg: Proof,
        hyps: Vec<Hypothesis>,
        splits: Vec<(IndexSet, IndexSet)>,
    ) -> Result<Proof> {
        let Formula::Arrow { dst, .. } = &fun.sequent.concl else {
            return Err(Error::invalid(
                "elimination: function premise conclusion is not an arrow",
            ));
        };
        let concl = dst.as_ref().clone();
        Ok(Proof {
            sequent: Sequent::new(hyps, concl),
            rule: Rule::Elim { splits },
            premises: vec![fun, arg],
        })
    }
}

pub fn check_proof(p: &Proof, mode: Mode) -> std::result::Result<(), Violation> {
    check_rec(p, mode, "root")
}

fn check_rec(p: &Proof, mode: Mode, path: &str) -> std::result::Result<(), Violation> {
    p.sequent
        .validate(mode)
        .map_err(|v| Violation::new(format!("{path}/{}", v.path), v.message))?;
    let hyps = &p.sequent.hyps;
    let concl = &p.sequent.concl;
    match &p.rule {
        Rule::Ax(i) => {
            if !p.premises.is_empty() {
                return Err(Violation::new(path, "axiom takes no premises"));
            }
            let Some(h) = hyps.get(*i) else {
                return Err(Violation::new(path, "axiom hypothesis index out of range"));
            };
            for (q, other) in hyps.iter().enumerate() {
                if q != *i && !other.formula.dom().is_empty() {
                    return Err(Violation::new(
                        path,
                        format!("axiom: hypothesis {q} must have an empty domain"),
                    ));
                }
            }
            if !h.map.is_injective() {
                return Err(Violation::new(path, "axiom map is not a bijection"));
            }
            let relocated = h
                .formula
                .relocate(&h.map)
                .map_err(|e| Violation::new(path, e.to_string()))?;
            if relocated != *concl {
                return Err(Violation::new(
                    path,
                    "axiom conclusion is not the relocated hypothesis",
                ));
            }
            Ok(())
        }
        Rule::StarAx => {
            if mode == Mode::Typed {
                return Err(Violation::new(path, "bottom axiom in typed mode"));
            }
            if !p.premises.is_empty() {
                return Err(Violation::new(path, "bottom axiom takes no premises"));
            }
            if *concl != Formula::star(IndexSet::new()) {
                return Err(Violation::new(
                    path,
                    "bottom axiom concludes the empty bottom formula",
                ));
            }
            for (q, h) in hyps.iter().enumerate() {
                if !h.formula.dom().is_empty() {
                    return Err(Violation::new(
                        path,
                        format!("bottom axiom: hypothesis {q} must have an empty domain"),
                    ));
                }
            }
            Ok(())
        }
        Rule::Intro => {
            let [premise] = p.premises.as_slice() else {
                return Err(Violation::new(path, "introduction takes one premise"));
            };
            let Formula::Arrow { src, map, dst } = concl else {
                return Err(Violation::new(path, "introduction concludes an arrow"));
            };
            let pseq = &premise.sequent;
            if pseq.hyps.len() != hyps.len() + 1 {
                return Err(Violation::new(
                    path,
                    "introduction premise has one extra hypothesis",
                ));
            }
            if pseq.hyps[..hyps.len()] != hyps[..] {
                return Err(Violation::new(
                    path,
                    "introduction premise hypotheses differ from the conclusion's",
                ));
            }
            let extra = &pseq.hyps[hyps.len()];
            if extra.formula != **src || extra.map != *map {
                return Err(Violation::new(
                    path,
                    "introduced hypothesis differs from the arrow source",
                ));
            }
            if pseq.concl != **dst {
                return Err(Violation::new(
                    path,
                    "introduction premise conclusion differs from the arrow target",
                ));
            }
            check_rec(premise, mode, &format!("{path}.0"))
        }
        Rule::Elim { splits } => {
            let [fun, arg] = p.premises.as_slice() else {
                return Err(Violation::new(path, "elimination takes two premises"));
            };
            let Formula::Arrow { src, map: u, dst } = &fun.sequent.concl else {
                return Err(Violation::new(
                    path,
                    "elimination function premise concludes an arrow",
                ));
            };
            if **dst != *concl {
                return Err(Violation::new(
                    path,
                    "elimination conclusion differs from the arrow target",
                ));
            }
            if arg.sequent.concl != **src {
                return Err(Violation::new(
                    path,
                    "argument premise conclusion differs from the arrow source",
                ));
            }
            let n = hyps.len();
            if fun.sequent.hyps.len() != n || arg.sequent.hyps.len() != n || splits.len() != n
            {
                return Err(Violation::new(path, "elimination hypothesis counts differ"));
            }
            for i in 0..n {
                let (l, r) = &splits[i];
                let e = &hyps[i];
                let dom = e.formula.dom();
                if !l.is_disjoint(r) {
                    return Err(Violation::new(path, format!("split {i} is not disjoint")));
                }
                if l.union(r) != dom {
                    return Err(Violation::new(
                        path,
                        format!("split {i} does not cover the hypothesis domain"),
                    ));
                }
                let fh = &fun.sequent.hyps[i];
                if fh.formula != e.formula.restrict(l) {
                    return Err(Violation::new(
                        path,
                        format!("function hypothesis {i} is not the left restriction"),
                    ));
                }
                if fh.map != e.map.restrict(l) {
                    return Err(Violation::new(
                        path,
                        format!("function hypothesis {i} map disagrees with the conclusion"),
                    ));
                }
                let ah = &arg.sequent.hyps[i];
                if ah.formula != e.formula.restrict(r) {
                    return Err(Violation::new(
                        path,
                        format!("argument hypothesis {i} is not the right restriction"),
                    ));
                }
                let composed = u
                    .compose(&ah.map)
                    .map_err(|err| Violation::new(path, err.to_string()))?;
                if e.map.restrict(r) != composed {
                    return Err(Violation::new(
                        path,
                        format!("hypothesis {i} map disagrees with the composed argument map"),
                    ));
                }
            }
            check_rec(fun, mode, &format!("{path}.0"))?;
            check_rec(arg, mode, &format!("{path}.1"))
        }
    }
}

/// Extracts the underlying term, with the given names for the hypotheses.
/// Binder names are chosen fresh against the enclosing names; in typed mode
/// binders carry the underlying type of the arrow source.
pub fn extract_term(p: &Proof, names: &[String], mode: Mode) -> Result<Term> {
    if names.len() != p.sequent.hyps.len() {
        return Err(Error::invalid(format!(
            "extraction arity mismatch: {} names for {} hypotheses",
            names.len(),
            p.sequent.hyps.len()
        )));
    }
    match &p.rule {
        Rule::Ax(i) => Ok(Term::var(names[*i].clone())),
        Rule::StarAx => Ok(Term::Bottom),
        Rule::Intro => {
            let avoid = names.iter().cloned().collect();
            let fresh = fresh_name(&avoid);
            let mut inner = names.to_vec();
            inner.push(fresh.clone());
            let body = extract_term(&p.premises[0], &inner, mode)?;
            let ty = match mode {
                Mode::Typed => {
                    let Formula::Arrow { src, .. } = &p.sequent.concl else {
                        return Err(Error::invalid("introduction concludes an arrow"));
                    };
                    Some(src.under().ok_or_else(|| {
                        Error::invalid("typed extraction on an untyped formula")
                    })?)
                }
                Mode::Untyped => None,
            };
            Ok(Term::lam(&fresh, ty, body))
        }
        Rule::Elim { .. } => Ok(Term::app(
            extract_term(&p.premises[0], names, mode)?,
            extract_term(&p.premises[1], names, mode)?,
        )),
    }
}

/// Default hypothesis names `x0, x1, …` for extraction.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Weakening: inserts `⟨B⟩0` (with `dom B = ∅`) at the given position of
/// every sequent along the proof. The extracted term is unchanged modulo
/// the inserted dummy variable.
pub fn weaken(p: &Proof, b: &Formula, pos: usize) -> Result<Proof> {
    if !b.dom().is_empty() {
        return Err(Error::invalid("weakening formula must have an empty domain"));
    }
    if pos > p.sequent.hyps.len() {
        return Err(Error::invalid("weakening position out of range"));
    }
    Ok(weaken_rec(p, b, pos))
}

fn weaken_rec(p: &Proof, b: &Formula, pos: usize) -> Proof {
    let mut hyps = p.sequent.hyps.clone();
    hyps.insert(pos, Hypothesis::new(b.clone(), IndexMap::empty()));
    let sequent = Sequent::new(hyps, p.sequent.concl.clone());
    match &p.rule {
        Rule::Ax(i) => Proof {
            sequent,
            rule: Rule::Ax(if *i >= pos { *i + 1 } else { *i }),
            premises: Vec::new(),
        },
        Rule::StarAx => Proof {
            sequent,
            rule: Rule::StarAx,
            premises: Vec::new(),
        },
        Rule::Intro => Proof {
            sequent,
            rule: Rule::Intro,
            premises: vec![weaken_rec(&p.premises[0], b, pos)],
        },
        Rule::Elim { splits } => {
            let mut splits = splits.clone();
            splits.insert(pos, (IndexSet::new(), IndexSet::new()));
            Proof {
                sequent,
                rule: Rule::Elim { splits },
                premises: vec![
                    weaken_rec(&p.premises[0], b, pos),
                    weaken_rec(&p.premises[1], b, pos),
                ],
            }
        }
    }
}

/// Relocation along a bijection `u` on the conclusion domain: produces a
/// proof of `⟨Aᵢ⟩(u∘uᵢ) ⊢ u·A` with the same extracted term.
pub fn relocate_proof(p: &Proof, u: &IndexMap) -> Result<Proof> {
    if !u.is_total_on(&p.sequent.concl.dom()) || !u.is_injective() {
        return Err(Error::invalid(
            "proof relocation requires a bijection on the conclusion domain",
        ));
    }
    relocate_rec(p, u)
}

fn relocate_rec(p: &Proof, u: &IndexMap) -> Result<Proof> {
    let hyps = p
        .sequent
        .hyps
        .iter()
        .map(|h| Ok(Hypothesis::new(h.formula.clone(), u.compose(&h.map)?)))
        .collect::<Result<Vec<_>>>()?;
    let concl = p.sequent.concl.relocate(u)?;
    let sequent = Sequent::new(hyps, concl);
    match &p.rule {
        Rule::Ax(i) => Ok(Proof {
            sequent,
            rule: Rule::Ax(*i),
            premises: Vec::new(),
        }),
        Rule::StarAx => Ok(Proof {
            sequent,
            rule: Rule::StarAx,
            premises: Vec::new(),
        }),
        Rule::Intro => Ok(Proof {
            sequent,
            rule: Rule::Intro,
            premises: vec![relocate_rec(&p.premises[0], u)?],
        }),
        Rule::Elim { splits } => Ok(Proof {
            sequent,
            rule: Rule::Elim {
                splits: splits.clone(),
            },
            premises: vec![relocate_rec(&p.premises[0], u)?, p.premises[1].clone()],
        }),
    }
}

/// Restriction to `J ⊆ dom(conclusion)`: produces a proof of
/// `⟨Aᵢ↾Kᵢ⟩(uᵢ↾Kᵢ) ⊢ A↾J` with `Kᵢ = uᵢ⁻¹(J)` and the same extracted term.
pub fn restrict_proof(p: &Proof, j: &IndexSet) -> Result<Proof> {
    if !j.is_subset(&p.sequent.concl.dom()) {
        return Err(Error::invalid(
            "restriction set must be included in the conclusion domain",
        ));
    }
    restrict_rec(p, j)
}

fn restrict_rec(p: &Proof, j: &IndexSet) -> Result<Proof> {
    let hyps: Vec<Hypothesis> = p
        .sequent
        .hyps
        .iter()
        .map(|h| {
            let keep = h.map.preimage_of_set(j);
            Hypothesis::new(h.formula.restrict(&keep), h.map.restrict(&keep))
        })
        .collect();
    let concl = p.sequent.concl.restrict(j);
    let sequent = Sequent::new(hyps, concl);
    match &p.rule {
        Rule::Ax(i) => Ok(Proof {
            sequent,
            rule: Rule::Ax(*i),
            premises: Vec::new(),
        }),
        Rule::StarAx => Ok(Proof {
            sequent,
            rule: Rule::StarAx,
            premises: Vec::new(),
        }),
        Rule::Intro => Ok(Proof {
            sequent,
            rule: Rule::Intro,
            premises: vec![restrict_rec(&p.premises[0], j)?],
        }),
        Rule::Elim { splits } => {
            let fun = &p.premises[0];
            let arg = &p.premises[1];
            let Formula::Arrow { map: v, .. } = &fun.sequent.concl else {
                return Err(Error::invalid(
                    "elimination function premise is not an arrow",
                ));
            };
            // Share the restriction between the premises through the arrow map.
            let l = v.preimage_of_set(j);
            let fun2 = restrict_rec(fun, j)?;
            let arg2 = restrict_rec(arg, &l)?;
            let splits2 = (0..splits.len())
                .map(|i| {
                    let li = fun.sequent.hyps[i].map.preimage_of_set(j);
                    let ri = arg.sequent.hyps[i].map.preimage_of_set(&l);
                    (li, ri)
                })
                .collect();
            Ok(Proof {
                sequent,
                rule: Rule::Elim { splits: splits2 },
                premises: vec![fun2, arg2],
            })
        }
    }
}

/// The merge data of the substitution lemma: for each surviving hypothesis
/// position, the merged formula `Cⱼ` and map `wⱼ`.
pub type MergeData = Vec<(Formula, IndexMap)>;

fn check_merge(
    mu_hyps: &[Hypothesis],
    rho_hyps: &[Hypothesis],
    i: usize,
    merge: &MergeData,
) -> Result<()> {
    let n = mu_hyps.len();
    if merge.len() != n - 1 || rho_hyps.len() != n - 1 {
        return Err(Error::invalid("merge data has the wrong arity"));
    }
    let ui = &mu_hyps[i].map;
    for (j, (c, w)) in merge.iter().enumerate() {
        let a = &mu_hyps[csucc(j, i)];
        let b = &rho_hyps[j];
        let da = a.formula.dom();
        let db = b.formula.dom();
        let dc = da
            .disjoint_union(&db)
            .map_err(|_| Error::invalid(format!("merge {j}: hypothesis domains overlap")))?;
        if c.dom() != dc {
            return Err(Error::invalid(format!(
                "merge {j}: merged domain is not the disjoint sum"
            )));
        }
        if c.restrict(&da) != a.formula {
            return Err(Error::invalid(format!(
                "merge {j}: restriction disagrees with the surviving hypothesis"
            )));
        }
        if c.restrict(&db) != b.formula {
            return Err(Error::invalid(format!(
                "merge {j}: restriction disagrees with the substituted hypothesis"
            )));
        }
        if !w.is_total_on(&dc) {
            return Err(Error::invalid(format!("merge {j}: map not total")));
        }
        if w.restrict(&da) != a.map {
            return Err(Error::invalid(format!(
                "merge {j}: map disagrees with the surviving hypothesis"
            )));
        }
        if w.restrict(&db) != ui.compose(&b.map)? {
            return Err(Error::invalid(format!(
                "merge {j}: map disagrees with the composed substituted map"
            )));
        }
    }
    Ok(())
}

/// The substitution lemma: given `μ : ⟨Aⱼ⟩uⱼ ⊢ A`, `ρ : ⟨Bⱼ⟩vⱼ ⊢ Aᵢ`, and
/// merge data `(Cⱼ, wⱼ)`, produces a proof of `⟨Cⱼ⟩wⱼ ⊢ A` whose extracted
/// term is the capture-avoiding substitution of the extracted terms.
pub fn substitute_proof(mu: &Proof, rho: &Proof, i: usize, merge: &MergeData) -> Result<Proof> {
    let n = mu.sequent.hyps.len();
    if i >= n {
        return Err(Error::invalid("substitution position out of range"));
    }
    if rho.sequent.concl != mu.sequent.hyps[i].formula {
        return Err(Error::invalid(
            "substituting proof does not prove the selected hypothesis",
        ));
    }
    check_merge(&mu.sequent.hyps, &rho.sequent.hyps, i, merge)?;

    let target_hyps: Vec<Hypothesis> = merge
        .iter()
        .map(|(c, w)| Hypothesis::new(c.clone(), w.clone()))
        .collect();

    match &mu.rule {
        Rule::Ax(k) if *k == i => relocate_proof(rho, &mu.sequent.hyps[i].map),
        Rule::Ax(k) => {
            let k2 = if *k < i { *k } else { *k - 1 };
            Ok(Proof {
                sequent: Sequent::new(target_hyps, mu.sequent.concl.clone()),
                rule: Rule::Ax(k2),
                premises: Vec::new(),
            })
        }
        Rule::StarAx => Ok(Proof {
            sequent: Sequent::new(target_hyps, mu.sequent.concl.clone()),
            rule: Rule::StarAx,
            premises: Vec::new(),
        }),
        Rule::Intro => {
            let theta = &mu.premises[0];
            let extra = theta.sequent.hyps.last().expect("intro premise hypothesis");
            // Pad the substituting proof with the closed hypothesis.
            let rho2 = weaken(
                rho,
                &extra.formula.restrict(&IndexSet::new()),
                rho.sequent.hyps.len(),
            )?;
            let mut merge2 = merge.clone();
            merge2.push((extra.formula.clone(), extra.map.clone()));
            let pi0 = substitute_proof(theta, &rho2, i, &merge2)?;
            Proof::intro(pi0)
        }
        Rule::Elim { splits: _ } => {
            let phi = &mu.premises[0];
            let psi = &mu.premises[1];
            let m = n - 1;
            let dom_e_i = phi.sequent.hyps[i].formula.dom();
            let dom_f_i = psi.sequent.hyps[i].formula.dom();

            let rho_l = restrict_proof(rho, &dom_e_i)?;
            let rho_r = restrict_proof(rho, &dom_f_i)?;

            let mut merge_l = MergeData::with_capacity(m);
            let mut merge_r = MergeData::with_capacity(m);
            for j in 0..m {
                let (c_j, w_j) = &merge[j];
                let l_j = rho.sequent.hyps[j].map.preimage_of_set(&dom_e_i);
                let r_j = rho.sequent.hyps[j].map.preimage_of_set(&dom_f_i);
                let dom_e_ji = phi.sequent.hyps[csucc(j, i)].formula.dom();
                let dom_f_ji = psi.sequent.hyps[csucc(j, i)].formula.dom();

                let g_dom = dom_e_ji.union(&l_j);
                merge_l.push((c_j.restrict(&g_dom), w_j.restrict(&g_dom)));

                let h_dom = dom_f_ji.union(&r_j);
                let t_ji = &psi.sequent.hyps[csucc(j, i)].map;
                let t_i = &psi.sequent.hyps[i].map;
                let v_j_r = rho.sequent.hyps[j].map.restrict(&r_j);
                let r_map = t_ji.disjoint_union(&t_i.compose(&v_j_r)?)?;
                merge_r.push((c_j.restrict(&h_dom), r_map));
            }

            let phi2 = substitute_proof(phi, &rho_l, i, &merge_l)?;
            let psi2 = substitute_proof(psi, &rho_r, i, &merge_r)?;

            let splits2: Vec<(IndexSet, IndexSet)> = (0..m)
                .map(|j| (merge_l[j].0.dom(), merge_r[j].0.dom()))
                .collect();
            Proof::elim(phi2, psi2, target_hyps, splits2)
        }
    }
}

/// First corollary of substitution: `ρ` has a single hypothesis `⟨B⟩v`;
/// hypothesis i of `μ` is replaced by `⟨B⟩(uᵢ∘v)`.
pub fn subst_single(mu: &Proof, rho: &Proof, i: usize) -> Result<Proof> {
    let n = mu.sequent.hyps.len();
    if rho.sequent.hyps.len() != 1 {
        return Err(Error::invalid(
            "this corollary needs a single-hypothesis substituting proof",
        ));
    }
    if i >= n {
        return Err(Error::invalid("substitution position out of range"));
    }
    let b_hyp = rho.sequent.hyps[0].clone();
    let mu2 = weaken(mu, &b_hyp.formula.restrict(&IndexSet::new()), i + 1)?;
    // Pad the substituting proof so its hypotheses align at position i.
    let mut rho2 = rho.clone();
    for j in 0..i {
        rho2 = weaken(
            &rho2,
            &mu.sequent.hyps[j].formula.restrict(&IndexSet::new()),
            j,
        )?;
    }
    for j in i + 1..n {
        rho2 = weaken(
            &rho2,
            &mu.sequent.hyps[j].formula.restrict(&IndexSet::new()),
            j,
        )?;
    }
    let mut merge = MergeData::with_capacity(n);
    for j in 0..n {
        if j == i {
            let w = mu.sequent.hyps[i].map.compose(&b_hyp.map)?;
            merge.push((b_hyp.formula.clone(), w));
        } else {
            let h = &mu.sequent.hyps[j];
            merge.push((h.formula.clone(), h.map.clone()));
        }
    }
    substitute_proof(&mu2, &rho2, i, &merge)
}

/// Second corollary of substitution: `μ` has a single hypothesis `⟨A⟩v` and
/// `ρ` proves `A`; the result proves `⟨Aⱼ⟩(v∘uⱼ) ⊢ B`.
pub fn subst_into_single(mu: &Proof, rho: &Proof) -> Result<Proof> {
    if mu.sequent.hyps.len() != 1 {
        return Err(Error::invalid(
            "this corollary needs a single-hypothesis outer proof",
        ));
    }
    let v = mu.sequent.hyps[0].map.clone();
    let n = rho.sequent.hyps.len();
    let mut mu2 = mu.clone();
    for (j, h) in rho.sequent.hyps.iter().enumerate() {
        mu2 = weaken(&mu2, &h.formula.restrict(&IndexSet::new()), j + 1)?;
    }
    let mut merge = MergeData::with_capacity(n);
    for h in &rho.sequent.hyps {
        merge.push((h.formula.clone(), v.compose(&h.map)?));
    }
    substitute_proof(&mu2, rho, 0, &merge)
}

/// Builds the fiberwise bijection `w : dom(E) → dom(C)` with `u∘w = v` and
/// `fam(C)_{w(e)} = fam(E)_e`, used by the similarity conversion. Fibers
/// are matched in canonical point order.
fn fiber_matching(
    e: &Formula,
    v: &IndexMap,
    c: &Formula,
    u: &IndexMap,
    targets: &IndexSet,
) -> Result<IndexMap> {
    let e_fam = e.fam();
    let c_fam = c.fam();
    let mut w = IndexMap::empty();
    for k in targets.iter() {
        let mut e_fiber: Vec<_> = v.preimage(k).iter().collect();
        let mut c_fiber: Vec<_> = u.preimage(k).iter().collect();
        if e_fiber.len() != c_fiber.len() {
            return Err(Error::invalid("similarity fibers have different sizes"));
        }
        e_fiber.sort_by(|a, b| (&e_fam[a], a).cmp(&(&e_fam[b], b)));
        c_fiber.sort_by(|a, b| (&c_fam[a], a).cmp(&(&c_fam[b], b)));
        for (ei, ci) in e_fiber.iter().zip(c_fiber.iter()) {
            if e_fam[ei] != c_fam[ci] {
                return Err(Error::invalid("similarity fibers carry different points"));
            }
            w = w.disjoint_union(&IndexMap::from_pairs([(*ei, *ci)])?)?;
        }
    }
    Ok(w)
}

/// Similarity conversion: for `A ∼ B`, a proof of `⟨A⟩Id ⊢ B`. The
/// extracted term is eta-equal to the hypothesis variable in the typed
/// case and lies in Q(x) in the untyped case.
pub fn sim_conversion(a: &Formula, b: &Formula, mode: Mode) -> Result<Proof> {
    if !similar(a, b) {
        return Err(Error::invalid("formulas are not similar"));
    }
    sim_rec(a, b, mode)
}

fn sim_rec(a: &Formula, b: &Formula, mode: Mode) -> Result<Proof> {
    match (a, b) {
        (Formula::Atom { .. }, _) | (Formula::Star(_), Formula::Star(_)) => {
            // Similar atoms (and similar bottom formulas) are equal.
            Proof::ax(vec![Hypothesis::identity(a.clone())], 0)
        }
        (Formula::Star(_), Formula::Arrow { src, dst, .. }) => {
            // fam B = ⋆ everywhere forces an empty arrow source.
            let rho = sim_rec(a, dst, mode)?;
            let weakened = weaken(&rho, src, 1)?;
            Proof::intro(weakened)
        }
        (Formula::Arrow { src, map, dst }, Formula::Star(_)) => {
            let rho = sim_rec(dst, b, mode)?;
            let ax_a = Proof::ax(vec![Hypothesis::identity(a.clone())], 0)?;
            let arg = empty_proof(src, &[a.restrict(&IndexSet::new())])?;
            let theta = Proof::elim(
                ax_a,
                arg,
                vec![Hypothesis::identity(a.clone())],
                vec![(a.dom(), IndexSet::new())],
            )?;
            debug_assert!(map.is_empty());
            subst_into_single(&rho, &theta)
        }
        (
            Formula::Arrow {
                src: c,
                map: u,
                dst: d,
            },
            Formula::Arrow {
                src: e,
                map: v,
                dst: f,
            },
        ) => {
            let rho = sim_rec(d, f, mode)?;
            let w = fiber_matching(e, v, c, u, &d.dom())?;
            let relocated = e.relocate(&w)?;
            let mu = sim_rec(&relocated, c, mode)?;
            let ax_e = Proof::ax(vec![Hypothesis::new(e.as_ref().clone(), w)], 0)?;
            let mu2 = subst_single(&mu, &ax_e, 0)?;
            // ⟨A⟩Id, ⟨C⟩u ⊢ D from two axioms and an elimination.
            let ax1 = Proof::ax(
                vec![
                    Hypothesis::identity(a.clone()),
                    Hypothesis::new(c.restrict(&IndexSet::new()), IndexMap::empty()),
                ],
                0,
            )?;
            let ax2 = Proof::ax(
                vec![
                    Hypothesis::new(a.restrict(&IndexSet::new()), IndexMap::empty()),
                    Hypothesis::identity(c.as_ref().clone()),
                ],
                1,
            )?;
            let pi1 = Proof::elim(
                ax1,
                ax2,
                vec![
                    Hypothesis::identity(a.clone()),
                    Hypothesis::new(c.as_ref().clone(), u.clone()),
                ],
                vec![(a.dom(), IndexSet::new()), (IndexSet::new(), c.dom())],
            )?;
            let pi2 = subst_single(&pi1, &mu2, 1)?;
            let pi3 = subst_into_single(&rho, &pi2)?;
            Proof::intro(pi3)
        }
        _ => Err(Error::invalid("similar formulas with incompatible shapes")),
    }
}

/// A proof of any empty-domain untyped formula from empty-domain
/// hypotheses; the extracted term collapses to bottom.
pub fn empty_proof(a: &Formula, hyp_formulas: &[Formula]) -> Result<Proof> {
    if !a.dom().is_empty() {
        return Err(Error::invalid("empty proof requires an empty-domain formula"));
    }
    for h in hyp_formulas {
        if !h.dom().is_empty() {
            return Err(Error::invalid("empty proof requires empty-domain hypotheses"));
        }
    }
    let hyps: Vec<Hypothesis> = hyp_formulas
        .iter()
        .map(|f| Hypothesis::new(f.clone(), IndexMap::empty()))
        .collect();
    match a {
        Formula::Star(_) => Ok(Proof::star_ax(hyps)),
        Formula::Arrow { src, dst, .. } => {
            let mut inner = hyp_formulas.to_vec();
            inner.push(src.as_ref().clone());
            let premise = empty_proof(dst, &inner)?;
            Proof::intro(premise)
        }
        Formula::Atom { .. } => Err(Error::invalid(
            "empty proofs live in the untyped system only",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::hyp_family;
    use crate::indices::Idx;
    use crate::relmodel::Point;
    use crate::terms::{eta_equivalent, omega_normalize, qproj_member, subst_free};

    fn iset(v: &[Idx]) -> IndexSet {
        v.iter().copied().collect()
    }

    fn imap(pairs: &[(Idx, Idx)]) -> IndexMap {
        IndexMap::from_pairs(pairs.iter().copied()).unwrap()
    }

    fn star(v: &[Idx]) -> Formula {
        Formula::star(iset(v))
    }

    fn names(n: usize) -> Vec<String> {
        default_names(n)
    }

    // ⊢ A ⇒_id A for A = ⊥_{1}: introduction over an identity axiom.
    fn identity_proof() -> Proof {
        let a = star(&[1]);
        let ax = Proof::ax(vec![Hypothesis::identity(a)], 0).unwrap();
        Proof::intro(ax).unwrap()
    }

    #[test]
    fn axiom_with_identity_checks() {
        let a = star(&[1, 2]);
        let ax = Proof::ax(vec![Hypothesis::identity(a)], 0).unwrap();
        assert!(check_proof(&ax, Mode::Untyped).is_ok());
        assert_eq!(
            extract_term(&ax, &names(1), Mode::Untyped).unwrap(),
            Term::var("x0")
        );
    }

    #[test]
    fn delocalized_axiom_checks() {
        let a = star(&[1]);
        let ax = Proof::ax(vec![Hypothesis::new(a, imap(&[(1, 9)]))], 0).unwrap();
        assert!(check_proof(&ax, Mode::Untyped).is_ok());
        assert_eq!(ax.sequent.concl, star(&[9]));
    }

    #[test]
    fn star_axiom_checks() {
        let p = Proof::star_ax(vec![]);
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        assert!(check_proof(&p, Mode::Typed).is_err());
        assert_eq!(
            extract_term(&p, &names(0), Mode::Untyped).unwrap(),
            Term::Bottom
        );
    }

    #[test]
    fn intro_over_axiom_extracts_identity() {
        let p = identity_proof();
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        let t = extract_term(&p, &names(0), Mode::Untyped).unwrap();
        assert_eq!(t, Term::lam("z", None, Term::var("z")));
    }

    // ⟨A⟩Id, ⟨C⟩u ⊢ D for A = C ⇒_u D, the application skeleton.
    fn application_proof(c: &Formula, u: &IndexMap, d: &Formula) -> Proof {
        let a = Formula::arrow(c.clone(), u.clone(), d.clone());
        let ax1 = Proof::ax(
            vec![
                Hypothesis::identity(a.clone()),
                Hypothesis::new(c.restrict(&IndexSet::new()), IndexMap::empty()),
            ],
            0,
        )
        .unwrap();
        let ax2 = Proof::ax(
            vec![
                Hypothesis::new(a.restrict(&IndexSet::new()), IndexMap::empty()),
                Hypothesis::identity(c.clone()),
            ],
            1,
        )
        .unwrap();
        Proof::elim(
            ax1,
            ax2,
            vec![
                Hypothesis::identity(a.clone()),
                Hypothesis::new(c.clone(), u.clone()),
            ],
            vec![(a.dom(), IndexSet::new()), (IndexSet::new(), c.dom())],
        )
        .unwrap()
    }

    #[test]
    fn elimination_checks_and_mutation_fails() {
        let c = star(&[5]);
        let u = imap(&[(5, 1)]);
        let d = star(&[1]);
        let p = application_proof(&c, &u, &d);
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        assert_eq!(
            extract_term(&p, &names(2), Mode::Untyped).unwrap(),
            Term::app(Term::var("x0"), Term::var("x1"))
        );

        // Mutate the conclusion map of hypothesis 1 so it disagrees with
        // u ∘ v on index 5.
        let mut bad = p.clone();
        bad.sequent.hyps[1] = Hypothesis::new(c.clone(), imap(&[(5, 7)]));
        bad.sequent.concl = star(&[1, 7]);
        let err = check_proof(&bad, Mode::Untyped).unwrap_err();
        assert!(
            err.message.contains("composed argument map")
                || err.message.contains("arrow target"),
            "{err}"
        );
    }

    #[test]
    fn weakening_preserves_validity_and_term() {
        let p = application_proof(&star(&[5]), &imap(&[(5, 1)]), &star(&[1]));
        let t0 = extract_term(&p, &names(2), Mode::Untyped).unwrap();
        for pos in 0..=2 {
            let w = weaken(&p, &star(&[]), pos).unwrap();
            assert!(check_proof(&w, Mode::Untyped).is_ok(), "pos {pos}");
            let mut ns = names(2);
            ns.insert(pos, "dummy".to_string());
            assert_eq!(extract_term(&w, &ns, Mode::Untyped).unwrap(), t0);
        }
        assert!(weaken(&p, &star(&[3]), 0).is_err());
    }

    #[test]
    fn relocation_preserves_validity_and_term() {
        let p = application_proof(&star(&[5]), &imap(&[(5, 1)]), &star(&[1]));
        let u = imap(&[(1, 11)]);
        let q = relocate_proof(&p, &u).unwrap();
        assert!(check_proof(&q, Mode::Untyped).is_ok());
        assert_eq!(q.sequent.concl, star(&[11]));
        assert_eq!(
            extract_term(&q, &names(2), Mode::Untyped).unwrap(),
            extract_term(&p, &names(2), Mode::Untyped).unwrap()
        );
        // double relocation comes back
        let back = relocate_proof(&q, &u.inverse().unwrap()).unwrap();
        assert_eq!(back.sequent, p.sequent);
    }

    #[test]
    fn identity_relocation_is_identity() {
        let p = identity_proof();
        let u = IndexMap::identity(&p.sequent.concl.dom());
        let q = relocate_proof(&p, &u).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn restriction_full_and_empty() {
        let p = application_proof(&star(&[5, 6]), &imap(&[(5, 1), (6, 2)]), &star(&[1, 2]));
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        let full = restrict_proof(&p, &p.sequent.concl.dom()).unwrap();
        assert_eq!(full.sequent, p.sequent);
        assert!(check_proof(&full, Mode::Untyped).is_ok());
        let empty = restrict_proof(&p, &IndexSet::new()).unwrap();
        assert!(check_proof(&empty, Mode::Untyped).is_ok());
        assert!(empty.sequent.concl.dom().is_empty());
        let t = extract_term(&p, &names(2), Mode::Untyped).unwrap();
        let half = restrict_proof(&p, &iset(&[2])).unwrap();
        assert!(check_proof(&half, Mode::Untyped).is_ok());
        assert_eq!(extract_term(&half, &names(2), Mode::Untyped).unwrap(), t);
        assert!(restrict_proof(&p, &iset(&[42])).is_err());
    }

    #[test]
    fn substitution_axiom_target_case() {
        // μ: axiom on hypothesis 0 (with a second, empty hypothesis),
        // ρ arbitrary: π is ρ relocated along μ's axiom map.
        let a = star(&[1]);
        let mu = Proof::ax(
            vec![
                Hypothesis::new(a.clone(), imap(&[(1, 3)])),
                Hypothesis::new(star(&[]), IndexMap::empty()),
            ],
            0,
        )
        .unwrap();
        // ρ: ⟨⊥_{8}⟩{8→1} ⊢ ⊥_{1}
        let rho = Proof::ax(vec![Hypothesis::new(star(&[8]), imap(&[(8, 1)]))], 0).unwrap();
        let merge: MergeData = vec![(star(&[8]), imap(&[(8, 3)]))];
        let pi = substitute_proof(&mu, &rho, 0, &merge).unwrap();
        assert!(check_proof(&pi, Mode::Untyped).is_ok());
        assert_eq!(pi.sequent.concl, star(&[3]));
        assert_eq!(pi.sequent.hyps[0].map, imap(&[(8, 3)]));
        assert_eq!(
            extract_term(&pi, &names(1), Mode::Untyped).unwrap(),
            Term::var("x0")
        );
    }

    #[test]
    fn substitution_other_axiom_case() {
        // μ: axiom on hypothesis 0 of two; substitute at position 1, whose
        // domain is empty, so ρ's hypotheses are forced empty.
        let a = star(&[1]);
        let mu = Proof::ax(
            vec![
                Hypothesis::identity(a.clone()),
                Hypothesis::new(star(&[]), IndexMap::empty()),
            ],
            0,
        )
        .unwrap();
        let rho = Proof::star_ax(vec![Hypothesis::identity(star(&[]))]);
        let merge: MergeData = vec![(a.clone(), IndexMap::identity(&iset(&[1])))];
        let pi = substitute_proof(&mu, &rho, 1, &merge).unwrap();
        assert!(check_proof(&pi, Mode::Untyped).is_ok());
        assert_eq!(
            extract_term(&pi, &names(1), Mode::Untyped).unwrap(),
            Term::var("x0")
        );
    }

    #[test]
    fn substitution_elim_case_term_equation() {
        // μ = the application skeleton ⟨A⟩Id, ⟨C⟩u ⊢ D with its root an
        // elimination; substitute the second hypothesis by a similarity
        // proof of C from an arrow-shaped hypothesis, so the merged
        // formula exists.
        let c = star(&[5]);
        let u = imap(&[(5, 1)]);
        let d = star(&[1]);
        let mu = application_proof(&c, &u, &d);
        let a = Formula::arrow(c.clone(), u.clone(), d.clone());

        // ρ: ⟨B'⟩{9→5} ⊢ ⊥_5 with B' = ⊥_∅ ⇒ ⊥_9 similar to ⊥_9.
        let b_arrow = Formula::arrow(star(&[]), IndexMap::empty(), star(&[9]));
        let sim9 = sim_conversion(&b_arrow, &star(&[9]), Mode::Untyped).unwrap();
        let rho = relocate_proof(&sim9, &imap(&[(9, 5)])).unwrap();
        assert_eq!(rho.sequent.concl, c);

        // merged hypothesis: C₀ with C₀↾{1} = A and C₀↾{9} = B'.
        let c0 = crate::formulas::merge_formulas(&a, &b_arrow).unwrap();
        let w0 = IndexMap::identity(&iset(&[1]))
            .disjoint_union(&imap(&[(9, 1)]))
            .unwrap();
        let merge: MergeData = vec![(c0, w0)];
        let pi = substitute_proof(&mu, &rho, 1, &merge).unwrap();
        assert!(check_proof(&pi, Mode::Untyped).is_ok());
        assert_eq!(pi.sequent.concl, d);
        // ⌊π⌋ = (x0 x1)[⌊ρ⌋(x0)/x1] syntactically
        let mu_term = extract_term(&mu, &names(2), Mode::Untyped).unwrap();
        let rho_term = extract_term(&rho, &names(1), Mode::Untyped).unwrap();
        let pi_term = extract_term(&pi, &names(1), Mode::Untyped).unwrap();
        assert_eq!(pi_term, subst_free(&mu_term, "x1", &rho_term));
    }

    #[test]
    fn subst_single_relabels_one_hypothesis() {
        let mu = application_proof(&star(&[5]), &imap(&[(5, 1)]), &star(&[1]));
        let rho = Proof::ax(vec![Hypothesis::new(star(&[7]), imap(&[(7, 5)]))], 0).unwrap();
        let pi = subst_single(&mu, &rho, 1).unwrap();
        assert!(check_proof(&pi, Mode::Untyped).is_ok());
        assert_eq!(pi.sequent.hyps.len(), 2);
        assert_eq!(pi.sequent.hyps[1].formula, star(&[7]));
        assert_eq!(pi.sequent.hyps[1].map, imap(&[(7, 1)]));
        // ⌊π⌋ = ⌊μ⌋[⌊ρ⌋/x1]
        let mu_term = extract_term(&mu, &names(2), Mode::Untyped).unwrap();
        let rho_term = extract_term(&rho, &["x1".to_string()], Mode::Untyped).unwrap();
        let pi_term = extract_term(&pi, &names(2), Mode::Untyped).unwrap();
        assert_eq!(pi_term, subst_free(&mu_term, "x1", &rho_term));
    }

    #[test]
    fn subst_into_single_composes_maps() {
        // μ: ⟨⊥_1⟩{1→2} ⊢ ⊥_2; ρ: the application skeleton proving ⊥_1.
        let mu = Proof::ax(vec![Hypothesis::new(star(&[1]), imap(&[(1, 2)]))], 0).unwrap();
        let rho = application_proof(&star(&[5]), &imap(&[(5, 1)]), &star(&[1]));
        let pi = subst_into_single(&mu, &rho).unwrap();
        assert!(check_proof(&pi, Mode::Untyped).is_ok());
        assert_eq!(pi.sequent.concl, star(&[2]));
        assert_eq!(pi.sequent.hyps[0].map, imap(&[(1, 2)]));
        assert_eq!(pi.sequent.hyps[1].map, imap(&[(5, 2)]));
        let rho_term = extract_term(&rho, &names(2), Mode::Untyped).unwrap();
        let pi_term = extract_term(&pi, &names(2), Mode::Untyped).unwrap();
        assert_eq!(pi_term, rho_term);
    }

    #[test]
    fn sim_conversion_identical_star() {
        let a = star(&[1]);
        let p = sim_conversion(&a, &a, Mode::Untyped).unwrap();
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        assert_eq!(
            extract_term(&p, &names(1), Mode::Untyped).unwrap(),
            Term::var("x0")
        );
    }

    #[test]
    fn sim_conversion_arrow_pair() {
        let a = Formula::arrow(star(&[3]), imap(&[(3, 1)]), star(&[1]));
        let b = Formula::arrow(star(&[8]), imap(&[(8, 1)]), star(&[1]));
        let p = sim_conversion(&a, &b, Mode::Untyped).unwrap();
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        let t = extract_term(&p, &names(1), Mode::Untyped).unwrap();
        assert!(qproj_member(&t, "x0"), "{t:?}");
    }

    #[test]
    fn sim_conversion_star_vs_empty_arrow() {
        let a = star(&[1]);
        let b = Formula::arrow(star(&[]), IndexMap::empty(), star(&[1]));
        let p = sim_conversion(&a, &b, Mode::Untyped).unwrap();
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        let t = extract_term(&p, &names(1), Mode::Untyped).unwrap();
        // λy.x0 is in Q(x0)
        assert_eq!(t, Term::lam("y", None, Term::var("x0")));
        assert!(qproj_member(&t, "x0"));

        // and the reverse direction applies the hypothesis to bottom
        let q = sim_conversion(&b, &a, Mode::Untyped).unwrap();
        assert!(check_proof(&q, Mode::Untyped).is_ok());
        let t = extract_term(&q, &names(1), Mode::Untyped).unwrap();
        assert_eq!(t, Term::app(Term::var("x0"), Term::Bottom));
        assert!(qproj_member(&t, "x0"));
    }

    #[test]
    fn sim_conversion_typed_atoms() {
        let a = Formula::atom("al", [(1, Point::atom("p"))].into());
        let p = sim_conversion(&a, &a, Mode::Typed).unwrap();
        assert!(check_proof(&p, Mode::Typed).is_ok());
        let t = extract_term(&p, &names(1), Mode::Typed).unwrap();
        assert!(eta_equivalent(&t, &Term::var("x0")).unwrap());
    }

    #[test]
    fn sim_conversion_typed_arrows_eta_equal() {
        let src_a = Formula::atom("al", [(3, Point::atom("p"))].into());
        let src_b = Formula::atom("al", [(8, Point::atom("p"))].into());
        let dst = Formula::atom("be", [(1, Point::atom("q"))].into());
        let a = Formula::arrow(src_a, imap(&[(3, 1)]), dst.clone());
        let b = Formula::arrow(src_b, imap(&[(8, 1)]), dst);
        let p = sim_conversion(&a, &b, Mode::Typed).unwrap();
        assert!(check_proof(&p, Mode::Typed).is_ok());
        let t = extract_term(&p, &names(1), Mode::Typed).unwrap();
        assert!(eta_equivalent(&t, &Term::var("x0")).unwrap(), "{t:?}");
    }

    #[test]
    fn empty_proofs() {
        // ⊥_∅ with no hypotheses: the bottom axiom itself.
        let p = empty_proof(&star(&[]), &[]).unwrap();
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        assert_eq!(extract_term(&p, &[], Mode::Untyped).unwrap(), Term::Bottom);

        // an empty arrow: intro over a weakened bottom axiom, λy.⊥ ≅Ω ⊥
        let arr = Formula::arrow(star(&[]), IndexMap::empty(), star(&[]));
        let p = empty_proof(&arr, &[]).unwrap();
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        let t = extract_term(&p, &[], Mode::Untyped).unwrap();
        assert_eq!(omega_normalize(&t), Term::Bottom);

        // with two empty-domain hypotheses
        let p = empty_proof(&arr, &[star(&[]), arr.clone()]).unwrap();
        assert!(check_proof(&p, Mode::Untyped).is_ok());
        let t = extract_term(&p, &names(2), Mode::Untyped).unwrap();
        assert_eq!(omega_normalize(&t), Term::Bottom);

        assert!(empty_proof(&star(&[1]), &[]).is_err());
    }

    #[test]
    fn hyp_family_of_application_skeleton() {
        let c = star(&[5, 6]);
        let u = imap(&[(5, 1), (6, 1)]);
        let d = star(&[1]);
        let p = application_proof(&c, &u, &d);
        let h = &p.sequent.hyps[1];
        let m = hyp_family(h, 1);
        assert_eq!(m.card(), 2);
    }
}
