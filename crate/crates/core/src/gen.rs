//! Seeded random generators for the property suites: points, families,
//! morphisms, terms, typing families, similar formula pairs, and a proof
//! corpus built through the completeness translation.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::formulas::{Formula, Mode};
use crate::indices::{Idx, IndexAlloc, IndexMap, IndexSet, Multiset};
use crate::itsys::{search, SearchBounds, TypingDeriv, TypingSpace};
use crate::ljker::{Proof, Sequent};
use crate::relmodel::{enumerate_points, Carriers, Morphism, Point, PointSpace, RelObj};
use crate::terms::{SimpleType, Term};
use crate::xlate::{completeness, scaffold_for, FamilyTyping};

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick<'a, T>(rng: &mut Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// A random element of D∞ within the given size bound.
pub fn gen_dinf_point(rng: &mut Rng, size_bound: usize) -> Point {
    let pool = enumerate_points(PointSpace::Dinf, size_bound);
    pick(rng, &pool).clone()
}

/// A random point of a typed interpretation within the given size bound.
pub fn gen_typed_point(rng: &mut Rng, ty: &SimpleType, carriers: &Carriers, bound: usize) -> Option<Point> {
    let pool = enumerate_points(PointSpace::Typed { ty, carriers }, bound);
    if pool.is_empty() {
        None
    } else {
        Some(pick(rng, &pool).clone())
    }
}

pub fn gen_simple_type(rng: &mut Rng, depth: usize, atoms: &[&str]) -> SimpleType {
    if depth == 0 || rng.gen_bool(0.4) {
        SimpleType::atom(*pick(rng, atoms))
    } else {
        SimpleType::arrow(
            gen_simple_type(rng, depth - 1, atoms),
            gen_simple_type(rng, depth - 1, atoms),
        )
    }
}

/// A random index set with `n` elements drawn from a small range.
pub fn gen_index_set(rng: &mut Rng, n: usize) -> IndexSet {
    let mut out = IndexSet::new();
    while out.len() < n {
        out.insert(rng.gen_range(1..40));
    }
    out
}

/// A random finite morphism between two enumerable objects.
pub fn gen_morphism(
    rng: &mut Rng,
    src: &RelObj,
    dst: &RelObj,
    max_pairs: usize,
    max_card: usize,
) -> Morphism {
    let mut m = Morphism::new(src.clone(), dst.clone());
    let srcs = src.enumerate().expect("enumerable source");
    let dsts = dst.enumerate().expect("enumerable target");
    if dsts.is_empty() {
        return m;
    }
    for _ in 0..rng.gen_range(0..=max_pairs) {
        let card = rng.gen_range(0..=max_card);
        let mut mult = Multiset::new();
        for _ in 0..card {
            if srcs.is_empty() {
                break;
            }
            mult.insert(pick(rng, &srcs).clone());
        }
        m.pairs.insert((mult, pick(rng, &dsts).clone()));
    }
    m
}

/// A random bottom-extended untyped term over the given free variables.
pub fn gen_untyped_term(rng: &mut Rng, budget: usize, vars: &[String], allow_bottom: bool) -> Term {
    if budget <= 1 {
        if allow_bottom && rng.gen_bool(0.2) {
            return Term::Bottom;
        }
        if vars.is_empty() {
            return Term::lam("z", None, Term::var("z"));
        }
        return Term::var(pick(rng, vars).clone());
    }
    match rng.gen_range(0..10) {
        0..=3 => {
            let name = format!("v{}", rng.gen_range(0..4));
            let mut inner = vars.to_vec();
            if !inner.contains(&name) {
                inner.push(name.clone());
            }
            Term::lam(&name, None, gen_untyped_term(rng, budget - 1, &inner, allow_bottom))
        }
        4..=7 => {
            let left = rng.gen_range(1..budget);
            Term::app(
                gen_untyped_term(rng, left, vars, allow_bottom),
                gen_untyped_term(rng, budget - left, vars, allow_bottom),
            )
        }
        _ => {
            if allow_bottom && rng.gen_bool(0.3) {
                Term::Bottom
            } else if vars.is_empty() {
                Term::lam("z", None, Term::var("z"))
            } else {
                Term::var(pick(rng, vars).clone())
            }
        }
    }
}

/// A random simply typed term of the target type, Church-style. Returns
/// `None` when the budget runs out before a term is found.
pub fn gen_typed_term(
    rng: &mut Rng,
    env: &[(String, SimpleType)],
    target: &SimpleType,
    budget: usize,
) -> Option<Term> {
    let var_hits: Vec<&(String, SimpleType)> =
        env.iter().filter(|(_, t)| t == target).collect();
    if budget <= 1 {
        let (name, _) = var_hits.get(rng.gen_range(0..var_hits.len().max(1)))?;
        return Some(Term::var(name.clone()));
    }
    let choice = rng.gen_range(0..10);
    // prefer a variable when one fits
    if choice < 3 && !var_hits.is_empty() {
        let (name, _) = var_hits[rng.gen_range(0..var_hits.len())];
        return Some(Term::var(name.clone()));
    }
    if let SimpleType::Arrow(s, t) = target {
        if choice < 8 {
            let name = format!("v{}", env.len());
            let mut inner = env.to_vec();
            inner.push((name.clone(), s.as_ref().clone()));
            let body = gen_typed_term(rng, &inner, t, budget - 1)?;
            return Some(Term::lam(&name, Some(s.as_ref().clone()), body));
        }
    }
    // application at a random argument type drawn from the environment
    if !env.is_empty() && budget >= 3 {
        let (_, sigma) = pick(rng, env);
        let fun_ty = SimpleType::arrow(sigma.clone(), target.clone());
        let left = rng.gen_range(1..budget - 1);
        let f = gen_typed_term(rng, env, &fun_ty, left)?;
        let a = gen_typed_term(rng, env, sigma, budget - 1 - left)?;
        return Some(Term::app(f, a));
    }
    if !var_hits.is_empty() {
        let (name, _) = var_hits[rng.gen_range(0..var_hits.len())];
        return Some(Term::var(name.clone()));
    }
    None
}

/// A randomized representation of a D∞ family: same domain and family as
/// the deterministic one, different index allocation and structure. Star
/// families may expand through bottom-source arrow layers.
pub fn represent_randomized(
    rng: &mut Rng,
    j_set: &IndexSet,
    f: &BTreeMap<Idx, Point>,
    alloc: &mut IndexAlloc,
    fuel: usize,
) -> Result<Formula> {
    if f.values().all(|p| *p == Point::Star) {
        if fuel == 0 || rng.gen_bool(0.5) {
            return Ok(Formula::star(j_set.clone()));
        }
        let dst = represent_randomized(rng, j_set, f, alloc, fuel - 1)?;
        return Ok(Formula::arrow(
            Formula::star(IndexSet::new()),
            IndexMap::empty(),
            dst,
        ));
    }
    let mut g: BTreeMap<Idx, Point> = BTreeMap::new();
    let mut k_all = IndexSet::new();
    let mut u = IndexMap::empty();
    let mut tails: BTreeMap<Idx, Point> = BTreeMap::new();
    for (j, p) in f {
        let (m, b) = p.unfold()?;
        alloc.skip(rng.gen_range(0..3));
        let block = alloc.block(m.card());
        let mut elems: Vec<Point> = m.expand().cloned().collect();
        elems.shuffle(rng);
        for (k, q) in block.iter().zip(elems.into_iter()) {
            g.insert(k, q);
            u = u.disjoint_union(&IndexMap::from_pairs([(k, *j)])?)?;
        }
        k_all = k_all.disjoint_union(&block)?;
        tails.insert(*j, b);
    }
    let src = represent_randomized(rng, &k_all, &g, alloc, fuel)?;
    let dst = represent_randomized(rng, j_set, &tails, alloc, fuel)?;
    Ok(Formula::arrow(src, u, dst))
}

/// A randomized typed representation: the structure is forced by the type,
/// only the index allocation varies.
pub fn represent_randomized_typed(
    rng: &mut Rng,
    ty: &SimpleType,
    j_set: &IndexSet,
    f: &BTreeMap<Idx, Point>,
    alloc: &mut IndexAlloc,
) -> Result<Formula> {
    match ty {
        SimpleType::Atom(name) => Ok(Formula::atom(name.clone(), f.clone())),
        SimpleType::Arrow(src_ty, dst_ty) => {
            let mut g: BTreeMap<Idx, Point> = BTreeMap::new();
            let mut k_all = IndexSet::new();
            let mut u = IndexMap::empty();
            let mut tails: BTreeMap<Idx, Point> = BTreeMap::new();
            for (j, p) in f {
                let (m, b) = p.unfold()?;
                alloc.skip(rng.gen_range(0..3));
                let block = alloc.block(m.card());
                let mut elems: Vec<Point> = m.expand().cloned().collect();
                elems.shuffle(rng);
                for (k, q) in block.iter().zip(elems.into_iter()) {
                    g.insert(k, q);
                    u = u.disjoint_union(&IndexMap::from_pairs([(k, *j)])?)?;
                }
                k_all = k_all.disjoint_union(&block)?;
                tails.insert(*j, b);
            }
            let src = represent_randomized_typed(rng, src_ty, &k_all, &g, alloc)?;
            let dst = represent_randomized_typed(rng, dst_ty, j_set, &tails, alloc)?;
            Ok(Formula::arrow(src, u, dst))
        }
    }
}

/// Two random similar formulas over the same family.
pub fn gen_similar_pair(rng: &mut Rng, mode: Mode, carriers: &Carriers) -> (Formula, Formula) {
    let n = rng.gen_range(0..=3);
    let j_set = gen_index_set(rng, n);
    match mode {
        Mode::Untyped => {
            let f: BTreeMap<Idx, Point> = j_set
                .iter()
                .map(|j| (j, gen_dinf_point(rng, 3)))
                .collect();
            let mut alloc_a = IndexAlloc::new(100);
            let mut alloc_b = IndexAlloc::new(400);
            let a = represent_randomized(rng, &j_set, &f, &mut alloc_a, 2)
                .expect("representable family");
            let b = represent_randomized(rng, &j_set, &f, &mut alloc_b, 2)
                .expect("representable family");
            (a, b)
        }
        Mode::Typed => {
            let atoms: Vec<&str> = carriers.keys().map(|s| s.as_str()).collect();
            let ty = gen_simple_type(rng, 2, &atoms);
            let f: BTreeMap<Idx, Point> = j_set
                .iter()
                .map(|j| {
                    let p = gen_typed_point(rng, &ty, carriers, 3)
                        .expect("nonempty carrier");
                    (j, p)
                })
                .collect();
            let mut alloc_a = IndexAlloc::new(100);
            let mut alloc_b = IndexAlloc::new(400);
            let a = represent_randomized_typed(rng, &ty, &j_set, &f, &mut alloc_a)
                .expect("representable family");
            let b = represent_randomized_typed(rng, &ty, &f.keys().copied().collect(), &f, &mut alloc_b)
                .expect("representable family");
            (a, b)
        }
    }
}

pub fn default_carriers() -> Carriers {
    [
        (
            "al".to_string(),
            ["p".to_string(), "q".to_string()].into(),
        ),
        ("be".to_string(), ["r".to_string()].into()),
    ]
    .into()
}

/// A random typing family: a term is generated, its judgments are searched
/// within small bounds, and a few of them are indexed into a family.
/// Returns `None` when the term admits no judgment (and the empty family is
/// not requested).
pub fn gen_family(
    rng: &mut Rng,
    mode: Mode,
    carriers: &Carriers,
    allow_empty: bool,
) -> Option<FamilyTyping> {
    match mode {
        Mode::Untyped => {
            let n_vars = rng.gen_range(0..=2);
            let vars: Vec<String> = (0..n_vars).map(|i| format!("y{i}")).collect();
            let budget = rng.gen_range(1..=6);
            let term = gen_untyped_term(rng, budget, &vars, true);
            let spine: Vec<(String, Option<SimpleType>)> =
                vars.iter().map(|v| (v.clone(), None)).collect();
            let derivs = search(
                &term,
                &spine,
                &SearchBounds::new(2, 2),
                TypingSpace::Dinf,
            )
            .ok()?;
            build_family(rng, term, spine, derivs, allow_empty)
        }
        Mode::Typed => {
            let atoms: Vec<&str> = carriers.keys().map(|s| s.as_str()).collect();
            let n_vars = rng.gen_range(0..=2);
            let env: Vec<(String, SimpleType)> = (0..n_vars)
                .map(|i| (format!("y{i}"), gen_simple_type(rng, 1, &atoms)))
                .collect();
            let target = gen_simple_type(rng, 2, &atoms);
            let budget = rng.gen_range(1..=6);
            let term = gen_typed_term(rng, &env, &target, budget)?;
            let spine: Vec<(String, Option<SimpleType>)> = env
                .iter()
                .map(|(v, t)| (v.clone(), Some(t.clone())))
                .collect();
            let derivs = search(
                &term,
                &spine,
                &SearchBounds::new(2, 2),
                TypingSpace::Typed { carriers },
            )
            .ok()?;
            build_family(rng, term, spine, derivs, allow_empty)
        }
    }
}

fn build_family(
    rng: &mut Rng,
    term: Term,
    spine: Vec<(String, Option<SimpleType>)>,
    derivs: Vec<TypingDeriv>,
    allow_empty: bool,
) -> Option<FamilyTyping> {
    if derivs.is_empty() {
        if !allow_empty {
            return None;
        }
        return Some(FamilyTyping {
            spine,
            subject: term,
            derivs: BTreeMap::new(),
        });
    }
    let count = rng.gen_range(1..=3.min(derivs.len() + 1));
    let mut chosen = BTreeMap::new();
    let mut j = 1;
    for _ in 0..count {
        chosen.insert(j as Idx, pick(rng, &derivs).clone());
        j += rng.gen_range(1..3);
    }
    Some(FamilyTyping {
        spine,
        subject: term,
        derivs: chosen,
    })
}

/// A corpus of valid kernel proofs, built through completeness on random
/// small typing families, paired with the scaffolds and hypothesis names.
pub fn gen_proof_corpus(
    rng: &mut Rng,
    count: usize,
    mode: Mode,
    carriers: &Carriers,
) -> Vec<(Proof, Vec<String>, FamilyTyping, Sequent)> {
    let mut out = Vec::new();
    let mut guard = 0;
    while out.len() < count && guard < count * 60 {
        guard += 1;
        let allow_empty = mode == Mode::Untyped && rng.gen_bool(0.15);
        let Some(fam) = gen_family(rng, mode, carriers, allow_empty) else {
            continue;
        };
        let mut alloc = IndexAlloc::new(1000);
        let Ok(scaffold) = scaffold_for(&fam, mode, &mut alloc) else {
            continue;
        };
        let Ok(proof) = completeness(&fam, &scaffold, mode, &mut alloc) else {
            continue;
        };
        let names: Vec<String> = fam.spine.iter().map(|(v, _)| v.clone()).collect();
        out.push((proof, names, fam, scaffold));
    }
    out
}
