//! Indexed formulas: typed atoms, bottom-sequence formulas, indexed arrows;
//! their computable domain and family; restriction, relocation, similarity;
//! and the representation of a finite point family as a formula.

use std::collections::BTreeMap;

use crate::error::{Error, Result, Violation};
use crate::indices::{mset_select, Idx, IndexAlloc, IndexMap, IndexSet, Multiset};
use crate::relmodel::Point;
use crate::terms::SimpleType;

/// Whether the typed or the untyped (relational D∞) system is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Typed,
    Untyped,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// `⟨α, f⟩` with a finite family into the atom's carrier.
    Atom {
        name: String,
        family: BTreeMap<Idx, Point>,
    },
    /// `⊥_J`: the constant-star family over J (untyped system only).
    Star(IndexSet),
    /// `A ⇒ᵤ B` with `u : dom(A) → dom(B)`.
    Arrow {
        src: Box<Formula>,
        map: IndexMap,
        dst: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(name: impl Into<String>, family: BTreeMap<Idx, Point>) -> Self {
        Formula::Atom {
            name: name.into(),
            family,
        }
    }

    pub fn star(dom: IndexSet) -> Self {
        Formula::Star(dom)
    }

    pub fn arrow(src: Formula, map: IndexMap, dst: Formula) -> Self {
        Formula::Arrow {
            src: Box::new(src),
            map,
            dst: Box::new(dst),
        }
    }

    pub fn dom(&self) -> IndexSet {
        match self {
            Formula::Atom { family, .. } => family.keys().copied().collect(),
            Formula::Star(j) => j.clone(),
            Formula::Arrow { dst, .. } => dst.dom(),
        }
    }

    /// The family `fam(A) : dom(A) → points`, computed by the inductive
    /// clauses. Arrow families pair the fiber multisets of the source with
    /// the target family.
    pub fn fam(&self) -> BTreeMap<Idx, Point> {
        match self {
            Formula::Atom { family, .. } => family.clone(),
            Formula::Star(j) => j.iter().map(|i| (i, Point::Star)).collect(),
            Formula::Arrow { src, map, dst } => {
                let src_fam = src.fam();
                let mut out = BTreeMap::new();
                for (k, b) in dst.fam() {
                    let fiber = map.preimage(k);
                    let m = mset_select(&src_fam, &fiber)
                        .expect("arrow map total on its source");
                    out.insert(k, Point::pair(m, b));
                }
                out
            }
        }
    }

    pub fn fam_at(&self, j: Idx) -> Result<Point> {
        self.fam()
            .remove(&j)
            .ok_or_else(|| Error::invalid(format!("index {j} outside formula domain")))
    }

    /// Underlying simple type; `None` for formulas of the untyped system.
    pub fn under(&self) -> Option<SimpleType> {
        match self {
            Formula::Atom { name, .. } => Some(SimpleType::atom(name.clone())),
            Formula::Star(_) => None,
            Formula::Arrow { src, dst, .. } => {
                Some(SimpleType::arrow(src.under()?, dst.under()?))
            }
        }
    }

    pub fn validate(&self, mode: Mode) -> std::result::Result<(), Violation> {
        self.validate_at(mode, "formula")
    }

    fn validate_at(&self, mode: Mode, path: &str) -> std::result::Result<(), Violation> {
        match self {
            Formula::Atom { .. } => {
                if mode == Mode::Untyped {
                    return Err(Violation::new(path, "typed atom in untyped mode"));
                }
                Ok(())
            }
            Formula::Star(_) => {
                if mode == Mode::Typed {
                    return Err(Violation::new(path, "bottom formula in typed mode"));
                }
                Ok(())
            }
            Formula::Arrow { src, map, dst } => {
                if !map.is_total_on(&src.dom()) {
                    return Err(Violation::new(
                        path,
                        "arrow map not total on the source domain",
                    ));
                }
                if !map.image().is_subset(&dst.dom()) {
                    return Err(Violation::new(
                        path,
                        "arrow map image leaves the target domain",
                    ));
                }
                src.validate_at(mode, &format!("{path}.src"))?;
                dst.validate_at(mode, &format!("{path}.dst"))
            }
        }
    }

    /// `A↾J`: domain cut to `dom(A) ∩ J`, family restricted accordingly.
    pub fn restrict(&self, j_set: &IndexSet) -> Formula {
        match self {
            Formula::Atom { name, family } => Formula::Atom {
                name: name.clone(),
                family: family
                    .iter()
                    .filter(|(k, _)| j_set.contains(**k))
                    .map(|(k, p)| (*k, p.clone()))
                    .collect(),
            },
            Formula::Star(j) => Formula::Star(j.intersect(j_set)),
            Formula::Arrow { src, map, dst } => {
                let keep = map.preimage_of_set(&dst.dom().intersect(j_set));
                Formula::arrow(src.restrict(&keep), map.restrict(&keep), dst.restrict(j_set))
            }
        }
    }

    /// `u·A` for a bijection `u` defined exactly on `dom(A)`.
    pub fn relocate(&self, u: &IndexMap) -> Result<Formula> {
        if !u.is_total_on(&self.dom()) || !u.is_injective() {
            return Err(Error::invalid(
                "relocation requires a bijection defined on the formula domain",
            ));
        }
        self.relocate_unchecked(u)
    }

    fn relocate_unchecked(&self, u: &IndexMap) -> Result<Formula> {
        match self {
            Formula::Atom { name, family } => {
                let mut out = BTreeMap::new();
                for (k, p) in family {
                    out.insert(u.apply(*k)?, p.clone());
                }
                Ok(Formula::Atom {
                    name: name.clone(),
                    family: out,
                })
            }
            Formula::Star(j) => {
                let mut out = IndexSet::new();
                for k in j.iter() {
                    out.insert(u.apply(k)?);
                }
                Ok(Formula::Star(out))
            }
            Formula::Arrow { src, map, dst } => Ok(Formula::Arrow {
                src: src.clone(),
                map: u.compose(map)?,
                dst: Box::new(dst.relocate_unchecked(u)?),
            }),
        }
    }
}

/// Similarity: equal domain, equal family, and (in the typed case) equal
/// underlying type. Mixing a typed with an untyped formula never succeeds
/// because the underlying types differ.
pub fn similar(a: &Formula, b: &Formula) -> bool {
    a.dom() == b.dom() && a.under() == b.under() && a.fam() == b.fam()
}

/// A sequent hypothesis `⟨A⟩u`: not itself a formula, but carries the
/// multiset family `fam(⟨A⟩u)_j = [fam(A)_k | u(k) = j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub formula: Formula,
    pub map: IndexMap,
}

impl Hypothesis {
    pub fn new(formula: Formula, map: IndexMap) -> Self {
        Hypothesis { formula, map }
    }

    pub fn identity(formula: Formula) -> Self {
        let map = IndexMap::identity(&formula.dom());
        Hypothesis { formula, map }
    }
}

/// `fam(⟨A⟩u)_j = [fam(A)_k | u(k) = j]`.
pub fn hyp_family(h: &Hypothesis, j: Idx) -> Multiset<Point> {
    let fiber = h.map.preimage(j);
    mset_select(&h.formula.fam(), &fiber).expect("hypothesis map total on formula domain")
}

/// What a represented family ranges over.
#[derive(Debug, Clone, Copy)]
pub enum ReprSpace<'a> {
    Typed(&'a SimpleType),
    Dinf,
}

/// Builds a formula `A` with `dom(A) = J` and `fam(A) = f` (and underlying
/// type σ in the typed case). Multisets are split over fresh pairwise
/// disjoint blocks from the allocator, elements enumerated in canonical
/// point order with indices assigned ascending.
pub fn represent(
    space: ReprSpace<'_>,
    j_set: &IndexSet,
    f: &BTreeMap<Idx, Point>,
    alloc: &mut IndexAlloc,
) -> Result<Formula> {
    let keys: IndexSet = f.keys().copied().collect();
    if keys != *j_set {
        return Err(Error::invalid("family not total on the requested domain"));
    }
    match space {
        ReprSpace::Typed(SimpleType::Atom(name)) => {
            for p in f.values() {
                if !matches!(p, Point::Atom(_)) {
                    return Err(Error::invalid("point does not inhabit the atom type"));
                }
            }
            Ok(Formula::atom(name.clone(), f.clone()))
        }
        ReprSpace::Typed(SimpleType::Arrow(src_ty, dst_ty)) => {
            let mut parts = BTreeMap::new();
            for (j, p) in f {
                match p {
                    Point::Pair(m, b) => {
                        parts.insert(*j, (m.clone(), b.as_ref().clone()));
                    }
                    _ => {
                        return Err(Error::invalid(
                            "point does not inhabit the arrow type",
                        ))
                    }
                }
            }
            represent_arrow(
                ReprSpace::Typed(src_ty),
                ReprSpace::Typed(dst_ty),
                j_set,
                &parts,
                alloc,
            )
        }
        ReprSpace::Dinf => {
            for p in f.values() {
                if !p.is_dinf() {
                    return Err(Error::invalid("point is not an element of D-infinity"));
                }
            }
            if f.values().all(|p| *p == Point::Star) {
                return Ok(Formula::Star(j_set.clone()));
            }
            let mut parts = BTreeMap::new();
            for (j, p) in f {
                parts.insert(*j, p.unfold()?);
            }
            represent_arrow(ReprSpace::Dinf, ReprSpace::Dinf, j_set, &parts, alloc)
        }
    }
}

fn represent_arrow(
    src_space: ReprSpace<'_>,
    dst_space: ReprSpace<'_>,
    j_set: &IndexSet,
    parts: &BTreeMap<Idx, (Multiset<Point>, Point)>,
    alloc: &mut IndexAlloc,
) -> Result<Formula> {
    let mut g: BTreeMap<Idx, Point> = BTreeMap::new();
    let mut k_all = IndexSet::new();
    let mut u = IndexMap::empty();
    let mut tails: BTreeMap<Idx, Point> = BTreeMap::new();
    for (j, (m, b)) in parts {
        let block = alloc.block(m.card());
        for (k, p) in block.iter().zip(m.expand()) {
            g.insert(k, p.clone());
            u = u.disjoint_union(&IndexMap::from_pairs([(k, *j)])?)?;
        }
        k_all = k_all.disjoint_union(&block)?;
        tails.insert(*j, b.clone());
    }
    let src = represent(src_space, &k_all, &g, alloc)?;
    let dst = represent(dst_space, j_set, &tails, alloc)?;
    Ok(Formula::arrow(src, u, dst))
}

/// Merges two formulas with disjoint domains into one whose restrictions to
/// the original domains give back the inputs. Used to assemble the merge
/// data of the substitution lemma.
pub fn merge_formulas(a: &Formula, b: &Formula) -> Result<Formula> {
    let merged = merge_rec(a, b)?;
    if merged.restrict(&a.dom()) != *a || merged.restrict(&b.dom()) != *b {
        return Err(Error::invalid(
            "formulas do not merge: restrictions disagree with the inputs",
        ));
    }
    Ok(merged)
}

fn merge_rec(a: &Formula, b: &Formula) -> Result<Formula> {
    match (a, b) {
        (
            Formula::Atom { name: na, family: fa },
            Formula::Atom { name: nb, family: fb },
        ) => {
            if na != nb {
                return Err(Error::invalid("cannot merge atoms with different names"));
            }
            let mut family = fa.clone();
            for (k, p) in fb {
                if family.insert(*k, p.clone()).is_some() {
                    return Err(Error::invalid("atom families overlap"));
                }
            }
            Ok(Formula::Atom {
                name: na.clone(),
                family,
            })
        }
        (Formula::Star(ja), Formula::Star(jb)) => Ok(Formula::Star(ja.disjoint_union(jb)?)),
        (
            Formula::Arrow { src: sa, map: ua, dst: da },
            Formula::Arrow { src: sb, map: ub, dst: db },
        ) => Ok(Formula::Arrow {
            src: Box::new(merge_rec(sa, sb)?),
            map: ua.disjoint_union(ub)?,
            dst: Box::new(merge_rec(da, db)?),
        }),
        _ => Err(Error::invalid("cannot merge formulas of different shapes")),
    }
}
