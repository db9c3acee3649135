//! The relational Kleisli category at finite scale: points of the typed
//! interpretations and of relational D∞, finite morphisms, composition,
//! identities, finite products, currying and a bounded evaluation morphism.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::indices::Multiset;
use crate::terms::SimpleType;

/// Declared finite carriers for the type atoms.
pub type Carriers = BTreeMap<String, BTreeSet<String>>;

/// A point: an element of a typed interpretation or of relational D∞.
/// `Tag` only appears inside product objects of the relational category.
///
/// D∞ identifies the sequence with all-empty tail with its terminator, so
/// `Pair(∅, Star)` is not a canonical value; construct pairs with
/// [`Point::pair`] to keep values canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Atom(String),
    Star,
    Pair(Multiset<Point>, Box<Point>),
    Tag(u32, Box<Point>),
}

impl Point {
    pub fn atom(name: impl Into<String>) -> Self {
        Point::Atom(name.into())
    }

    /// Canonicalizing pair constructor: `(∅, ⋆)` collapses to `⋆`.
    pub fn pair(m: Multiset<Point>, p: Point) -> Self {
        if m.is_empty() && p == Point::Star {
            Point::Star
        } else {
            Point::Pair(m, Box::new(p))
        }
    }

    pub fn tag(j: u32, p: Point) -> Self {
        Point::Tag(j, Box::new(p))
    }

    /// The canonical unfolding: `⋆ = (∅, ⋆)`, pairs unfold to themselves.
    pub fn unfold(&self) -> Result<(Multiset<Point>, Point)> {
        match self {
            Point::Star => Ok((Multiset::new(), Point::Star)),
            Point::Pair(m, p) => Ok((m.clone(), p.as_ref().clone())),
            _ => Err(Error::invalid("point does not unfold to a pair")),
        }
    }

    /// Size over D∞: `size(⋆)=0`, `size((m,a)) = size(a) + Σᵢ(1+size(aᵢ))`.
    pub fn dsize(&self) -> usize {
        match self {
            Point::Star | Point::Atom(_) => 0,
            Point::Pair(m, p) => {
                p.dsize() + m.expand().map(|a| 1 + a.dsize()).sum::<usize>()
            }
            Point::Tag(_, p) => p.dsize(),
        }
    }

    /// Nesting depth of the pair structure.
    pub fn depth(&self) -> usize {
        match self {
            Point::Star | Point::Atom(_) => 0,
            Point::Pair(m, p) => {
                1 + p
                    .depth()
                    .max(m.support().map(|a| a.depth()).max().unwrap_or(0))
            }
            Point::Tag(_, p) => p.depth(),
        }
    }

    pub fn is_dinf(&self) -> bool {
        match self {
            Point::Star => true,
            Point::Pair(m, p) => p.is_dinf() && m.support().all(|a| a.is_dinf()),
            _ => false,
        }
    }

    /// Structural membership in a typed interpretation; carrier membership
    /// of atom elements is checked when carriers are supplied.
    pub fn conforms(&self, ty: &SimpleType, carriers: Option<&Carriers>) -> bool {
        match (self, ty) {
            (Point::Atom(e), SimpleType::Atom(a)) => match carriers {
                Some(cs) => cs.get(a).is_some_and(|set| set.contains(e)),
                None => true,
            },
            (Point::Pair(m, b), SimpleType::Arrow(src, dst)) => {
                b.conforms(dst, carriers) && m.support().all(|p| p.conforms(src, carriers))
            }
            _ => false,
        }
    }
}

/// An object of the relational category, described enough to test
/// membership; only carriers and finite products are enumerable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelObj {
    Carrier(BTreeSet<String>),
    /// Finite product; components are tagged 1-based.
    Prod(Vec<RelObj>),
    /// Object of morphisms X ⇒ Y, i.e. Mfin X × Y.
    Fun(Box<RelObj>, Box<RelObj>),
    Dinf,
}

impl RelObj {
    pub fn fun(x: RelObj, y: RelObj) -> Self {
        RelObj::Fun(Box::new(x), Box::new(y))
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            RelObj::Carrier(set) => matches!(p, Point::Atom(e) if set.contains(e)),
            RelObj::Prod(xs) => match p {
                Point::Tag(j, q) => {
                    let j = *j as usize;
                    j >= 1 && j <= xs.len() && xs[j - 1].contains(q)
                }
                _ => false,
            },
            RelObj::Fun(x, y) => match p.unfold() {
                Ok((m, b)) => y.contains(&b) && m.support().all(|a| x.contains(a)),
                Err(_) => false,
            },
            RelObj::Dinf => p.is_dinf(),
        }
    }

    /// All elements of a finite object, in canonical order; `None` when the
    /// object is infinite.
    pub fn enumerate(&self) -> Option<Vec<Point>> {
        match self {
            RelObj::Carrier(set) => {
                Some(set.iter().map(|s| Point::atom(s.clone())).collect())
            }
            RelObj::Prod(xs) => {
                let mut out = Vec::new();
                for (k, x) in xs.iter().enumerate() {
                    for p in x.enumerate()? {
                        out.push(Point::tag(k as u32 + 1, p));
                    }
                }
                out.sort();
                Some(out)
            }
            RelObj::Fun(_, _) | RelObj::Dinf => None,
        }
    }
}

/// A finite morphism: a set of (multiset over the source, target element)
/// pairs between two objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub src: RelObj,
    pub dst: RelObj,
    pub pairs: BTreeSet<(Multiset<Point>, Point)>,
}

impl Morphism {
    pub fn new(src: RelObj, dst: RelObj) -> Self {
        Morphism {
            src,
            dst,
            pairs: BTreeSet::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (m, b) in &self.pairs {
            if !self.dst.contains(b) {
                return Err(Error::invalid("morphism result outside target object"));
            }
            if !m.support().all(|a| self.src.contains(a)) {
                return Err(Error::invalid("morphism multiset outside source object"));
            }
        }
        Ok(())
    }
}

/// `Id_X = { ([a], a) | a ∈ X }`.
pub fn identity(x: &RelObj) -> Result<Morphism> {
    let elems = x
        .enumerate()
        .ok_or_else(|| Error::invalid("identity requires an enumerable object"))?;
    let pairs = elems
        .into_iter()
        .map(|a| (Multiset::singleton(a.clone()), a))
        .collect();
    Ok(Morphism {
        src: x.clone(),
        dst: x.clone(),
        pairs,
    })
}

/// All sums of `r` multisets drawn (with repetition) from `options`.
fn multichoose_sums(options: &[&Multiset<Point>], r: usize) -> Vec<Multiset<Point>> {
    fn rec(
        options: &[&Multiset<Point>],
        start: usize,
        left: usize,
        acc: &Multiset<Point>,
        out: &mut Vec<Multiset<Point>>,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for k in start..options.len() {
            let next = acc.plus(options[k]);
            rec(options, k, left - 1, &next, out);
        }
    }
    let mut out = Vec::new();
    rec(options, 0, r, &Multiset::new(), &mut out);
    out
}

/// Relational composition: for `s : X → Y` and `t : Y → Z`,
/// `t ∘ s = { (m₁+⋯+m_k, c) | ([b₁..b_k], c) ∈ t, (mⱼ, bⱼ) ∈ s }`.
pub fn compose(t: &Morphism, s: &Morphism) -> Result<Morphism> {
    if s.dst != t.src {
        return Err(Error::invalid("composition: object mismatch"));
    }
    let mut by_target: BTreeMap<&Point, Vec<&Multiset<Point>>> = BTreeMap::new();
    for (m, b) in &s.pairs {
        by_target.entry(b).or_default().push(m);
    }
    let mut pairs = BTreeSet::new();
    for (mb, c) in &t.pairs {
        // One choice of an s-pair per occurrence of each b in mb.
        let mut partials = vec![Multiset::new()];
        let mut feasible = true;
        for (b, r) in mb.entries() {
            let Some(options) = by_target.get(b) else {
                feasible = false;
                break;
            };
            let sums = multichoose_sums(options, r);
            let mut next = Vec::new();
            for p in &partials {
                for q in &sums {
                    next.push(p.plus(q));
                }
            }
            partials = next;
        }
        if feasible {
            for m in partials {
                pairs.insert((m, c.clone()));
            }
        }
    }
    Ok(Morphism {
        src: s.src.clone(),
        dst: t.dst.clone(),
        pairs,
    })
}

fn split_binary_product(m: &Multiset<Point>) -> Result<(Multiset<Point>, Multiset<Point>)> {
    let mut left = Multiset::new();
    let mut right = Multiset::new();
    for (p, n) in m.entries() {
        match p {
            Point::Tag(1, q) => left.insert_n(q.as_ref().clone(), n),
            Point::Tag(2, q) => right.insert_n(q.as_ref().clone(), n),
            _ => return Err(Error::invalid("malformed tags in product multiset")),
        }
    }
    Ok((left, right))
}

/// Transpose of `s : Z & X → Y` into `Z → (X ⇒ Y)`, regrouping each pair
/// `([(1,c₁)..(1,cₙ),(2,a₁)..(2,a_k)], b)` as `([c₁..cₙ], ([a₁..a_k], b))`.
pub fn curry(s: &Morphism) -> Result<Morphism> {
    let RelObj::Prod(comps) = &s.src else {
        return Err(Error::invalid("curry requires a binary product source"));
    };
    if comps.len() != 2 {
        return Err(Error::invalid("curry requires a binary product source"));
    }
    let (z, x) = (&comps[0], &comps[1]);
    let mut pairs = BTreeSet::new();
    for (m, b) in &s.pairs {
        let (mz, mx) = split_binary_product(m)?;
        pairs.insert((mz, Point::pair(mx, b.clone())));
    }
    Ok(Morphism {
        src: z.clone(),
        dst: RelObj::fun(x.clone(), s.dst.clone()),
        pairs,
    })
}

/// Inverse regrouping of [`curry`].
pub fn uncurry(s: &Morphism) -> Result<Morphism> {
    let RelObj::Fun(x, y) = &s.dst else {
        return Err(Error::invalid("uncurry requires a function-object target"));
    };
    let mut pairs = BTreeSet::new();
    for (mz, p) in &s.pairs {
        let (mx, b) = p.unfold()?;
        let mut m = Multiset::new();
        for (c, n) in mz.entries() {
            m.insert_n(Point::tag(1, c.clone()), n);
        }
        for (a, n) in mx.entries() {
            m.insert_n(Point::tag(2, a.clone()), n);
        }
        pairs.insert((m, b));
    }
    Ok(Morphism {
        src: RelObj::Prod(vec![s.src.clone(), x.as_ref().clone()]),
        dst: y.as_ref().clone(),
        pairs,
    })
}

/// All multisets over `elems` with cardinality exactly `k`.
fn multisets_of_card(elems: &[Point], k: usize) -> Vec<Multiset<Point>> {
    fn rec(
        elems: &[Point],
        start: usize,
        left: usize,
        acc: &Multiset<Point>,
        out: &mut Vec<Multiset<Point>>,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in start..elems.len() {
            let mut next = acc.clone();
            next.insert(elems[i].clone());
            rec(elems, i, left - 1, &next, out);
        }
    }
    let mut out = Vec::new();
    rec(elems, 0, k, &Multiset::new(), &mut out);
    out
}

/// The finite slice of the evaluation morphism `Ev ∈ Rel((X⇒Y) & X, Y)`
/// containing every pair `([(1,([a₁..a_k],b)),(2,a₁)..(2,a_k)], b)` with
/// `k ≤ cap`.
pub fn ev_fragment(x: &RelObj, y: &RelObj, cap: usize) -> Result<Morphism> {
    let xs = x
        .enumerate()
        .ok_or_else(|| Error::invalid("ev fragment requires enumerable objects"))?;
    let ys = y
        .enumerate()
        .ok_or_else(|| Error::invalid("ev fragment requires enumerable objects"))?;
    let mut pairs = BTreeSet::new();
    for k in 0..=cap {
        for m in multisets_of_card(&xs, k) {
            for b in &ys {
                let mut lhs = Multiset::singleton(Point::tag(1, Point::pair(m.clone(), b.clone())));
                for (a, n) in m.entries() {
                    lhs.insert_n(Point::tag(2, a.clone()), n);
                }
                pairs.insert((lhs, b.clone()));
            }
        }
    }
    Ok(Morphism {
        src: RelObj::Prod(vec![RelObj::fun(x.clone(), y.clone()), x.clone()]),
        dst: y.clone(),
        pairs,
    })
}

/// Projection `Proj_j = { ([(j,a)], a) | a ∈ X_j }` out of a finite product.
pub fn projection(comps: &[RelObj], j: usize) -> Result<Morphism> {
    if j == 0 || j > comps.len() {
        return Err(Error::invalid("projection index out of range"));
    }
    let elems = comps[j - 1]
        .enumerate()
        .ok_or_else(|| Error::invalid("projection requires an enumerable component"))?;
    let pairs = elems
        .into_iter()
        .map(|a| (Multiset::singleton(Point::tag(j as u32, a.clone())), a))
        .collect();
    Ok(Morphism {
        src: RelObj::Prod(comps.to_vec()),
        dst: comps[j - 1].clone(),
        pairs,
    })
}

/// Tupling `⟨sⱼ⟩ = { (m, (j,b)) | (m,b) ∈ sⱼ }` of morphisms with a common
/// source.
pub fn tuple(components: &[Morphism]) -> Result<Morphism> {
    let Some(first) = components.first() else {
        return Err(Error::invalid("tupling requires at least one component"));
    };
    let mut pairs = BTreeSet::new();
    for (j, s) in components.iter().enumerate() {
        if s.src != first.src {
            return Err(Error::invalid("tupling: sources differ"));
        }
        for (m, b) in &s.pairs {
            pairs.insert((m.clone(), Point::tag(j as u32 + 1, b.clone())));
        }
    }
    Ok(Morphism {
        src: first.src.clone(),
        dst: RelObj::Prod(components.iter().map(|s| s.dst.clone()).collect()),
        pairs,
    })
}

/// Alias for the D∞ size function, under its operation name.
pub fn dinfr_size(p: &Point) -> usize {
    p.dsize()
}

#[derive(Debug, Clone, Copy)]
pub enum PointSpace<'a> {
    Typed {
        ty: &'a SimpleType,
        carriers: &'a Carriers,
    },
    Dinf,
}

/// All points of a typed interpretation (resp. of D∞) whose size and pair
/// depth are at most `bound`, in canonical order.
pub fn enumerate_points(space: PointSpace<'_>, bound: usize) -> Vec<Point> {
    match space {
        PointSpace::Typed { ty, carriers } => {
            let set = enum_typed(ty, carriers, bound);
            set.into_iter().collect()
        }
        PointSpace::Dinf => enum_dinf(bound, bound).into_iter().collect(),
    }
}

fn weighted_multisets(elems: &[Point], budget: usize) -> Vec<Multiset<Point>> {
    // Each element costs 1 + its size.
    fn rec(
        elems: &[Point],
        i: usize,
        budget: usize,
        acc: &Multiset<Point>,
        out: &mut Vec<Multiset<Point>>,
    ) {
        if i == elems.len() {
            out.push(acc.clone());
            return;
        }
        let cost = 1 + elems[i].dsize();
        let mut acc = acc.clone();
        let mut spent = 0;
        rec(elems, i + 1, budget, &acc, out);
        while spent + cost <= budget {
            spent += cost;
            acc.insert(elems[i].clone());
            rec(elems, i + 1, budget - spent, &acc, out);
        }
    }
    let mut out = Vec::new();
    rec(elems, 0, budget, &Multiset::new(), &mut out);
    out
}

fn enum_typed(ty: &SimpleType, carriers: &Carriers, bound: usize) -> BTreeSet<Point> {
    match ty {
        SimpleType::Atom(a) => carriers
            .get(a)
            .map(|set| set.iter().map(|e| Point::atom(e.clone())).collect())
            .unwrap_or_default(),
        SimpleType::Arrow(src, dst) => {
            let mut out = BTreeSet::new();
            let srcs: Vec<Point> = enum_typed(src, carriers, bound.saturating_sub(1))
                .into_iter()
                .collect();
            for b in enum_typed(dst, carriers, bound) {
                for m in weighted_multisets(&srcs, bound - b.dsize()) {
                    out.insert(Point::Pair(m, Box::new(b.clone())));
                }
            }
            out
        }
    }
}

fn enum_dinf(size_bound: usize, depth_bound: usize) -> BTreeSet<Point> {
    let mut out = BTreeSet::new();
    out.insert(Point::Star);
    if depth_bound == 0 {
        return out;
    }
    let shallow: Vec<Point> = enum_dinf(size_bound.saturating_sub(1), depth_bound - 1)
        .into_iter()
        .collect();
    for a in enum_dinf(size_bound, depth_bound - 1) {
        for m in weighted_multisets(&shallow, size_bound - a.dsize()) {
            out.insert(Point::pair(m, a.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(names: &[&str]) -> RelObj {
        RelObj::Carrier(names.iter().map(|s| s.to_string()).collect())
    }

    fn mset(names: &[&str]) -> Multiset<Point> {
        names.iter().map(|s| Point::atom(*s)).collect()
    }

    #[test]
    fn identity_pairs() {
        let x = obj(&["a", "b"]);
        let id = identity(&x).unwrap();
        let expect: BTreeSet<_> = [
            (mset(&["a"]), Point::atom("a")),
            (mset(&["b"]), Point::atom("b")),
        ]
        .into();
        assert_eq!(id.pairs, expect);
        assert!(identity(&obj(&[])).unwrap().pairs.is_empty());
    }

    #[test]
    fn compose_enumerates_decompositions() {
        // s = {([a],b)}, t = {([b,b],c)}  →  t∘s = {([a,a],c)}
        let x = obj(&["a"]);
        let y = obj(&["b"]);
        let z = obj(&["c"]);
        let mut s = Morphism::new(x.clone(), y.clone());
        s.pairs.insert((mset(&["a"]), Point::atom("b")));
        let mut t = Morphism::new(y, z);
        t.pairs.insert((mset(&["b", "b"]), Point::atom("c")));
        let ts = compose(&t, &s).unwrap();
        let expect: BTreeSet<_> = [(mset(&["a", "a"]), Point::atom("c"))].into();
        assert_eq!(ts.pairs, expect);
    }

    #[test]
    fn compose_with_empty_is_empty() {
        let x = obj(&["a"]);
        let y = obj(&["b"]);
        let s = Morphism::new(x, y.clone());
        let mut t = Morphism::new(y, obj(&["c"]));
        t.pairs.insert((mset(&["b"]), Point::atom("c")));
        assert!(compose(&t, &s).unwrap().pairs.is_empty());
    }

    #[test]
    fn identity_laws_on_small_morphism() {
        let x = obj(&["a", "b"]);
        let y = obj(&["c"]);
        let mut s = Morphism::new(x.clone(), y.clone());
        s.pairs.insert((mset(&["a", "a", "b"]), Point::atom("c")));
        s.pairs.insert((mset(&[]), Point::atom("c")));
        let left = compose(&identity(&y).unwrap(), &s).unwrap();
        let right = compose(&s, &identity(&x).unwrap()).unwrap();
        assert_eq!(left.pairs, s.pairs);
        assert_eq!(right.pairs, s.pairs);
    }

    #[test]
    fn curry_regroups() {
        // s = {([(1,c),(2,a)], b)} → {([c], ([a],b))}
        let z = obj(&["c"]);
        let x = obj(&["a"]);
        let y = obj(&["b"]);
        let mut s = Morphism::new(RelObj::Prod(vec![z, x]), y);
        let mut lhs = Multiset::new();
        lhs.insert(Point::tag(1, Point::atom("c")));
        lhs.insert(Point::tag(2, Point::atom("a")));
        s.pairs.insert((lhs, Point::atom("b")));
        let cur = curry(&s).unwrap();
        let expect: BTreeSet<_> = [(
            mset(&["c"]),
            Point::pair(mset(&["a"]), Point::atom("b")),
        )]
        .into();
        assert_eq!(cur.pairs, expect);
        assert_eq!(uncurry(&cur).unwrap().pairs, s.pairs);
    }

    #[test]
    fn curry_of_empty_multiset() {
        let s = {
            let mut s = Morphism::new(RelObj::Prod(vec![obj(&[]), obj(&[])]), obj(&["b"]));
            s.pairs.insert((Multiset::new(), Point::atom("b")));
            s
        };
        let cur = curry(&s).unwrap();
        let expect: BTreeSet<_> =
            [(Multiset::new(), Point::pair(Multiset::new(), Point::atom("b")))].into();
        assert_eq!(cur.pairs, expect);
    }

    #[test]
    fn curry_rejects_malformed_tags() {
        let mut s = Morphism::new(RelObj::Prod(vec![obj(&["c"]), obj(&["a"])]), obj(&["b"]));
        s.pairs
            .insert((Multiset::singleton(Point::tag(3, Point::atom("c"))), Point::atom("b")));
        assert!(curry(&s).is_err());
    }

    // Counting oracle: |ev_fragment| = Σ_{k≤cap} multichoose(|X|, k) · |Y|.
    fn multichoose_count(n: usize, k: usize) -> usize {
        if k == 0 {
            1
        } else if n == 0 {
            0
        } else {
            // C(n+k-1, k)
            let mut num = 1usize;
            let mut den = 1usize;
            for i in 0..k {
                num *= n + i;
                den *= i + 1;
            }
            num / den
        }
    }

    #[test]
    fn ev_fragment_slices() {
        let x = obj(&["a"]);
        let y = obj(&["b"]);
        let ev0 = ev_fragment(&x, &y, 0).unwrap();
        let expect: BTreeSet<_> = [(
            Multiset::singleton(Point::tag(1, Point::pair(Multiset::new(), Point::atom("b")))),
            Point::atom("b"),
        )]
        .into();
        assert_eq!(ev0.pairs, expect);

        let ev1 = ev_fragment(&x, &y, 1).unwrap();
        let mut added = Multiset::singleton(Point::tag(
            1,
            Point::pair(mset(&["a"]), Point::atom("b")),
        ));
        added.insert(Point::tag(2, Point::atom("a")));
        assert!(ev1.pairs.contains(&(added, Point::atom("b"))));

        let x2 = obj(&["a", "b"]);
        let y2 = obj(&["c", "d"]);
        for cap in 0..3 {
            let ev = ev_fragment(&x2, &y2, cap).unwrap();
            let expected: usize = (0..=cap).map(|k| multichoose_count(2, k) * 2).sum();
            assert_eq!(ev.pairs.len(), expected);
        }
    }

    #[test]
    fn product_laws() {
        let x1 = obj(&["a"]);
        let x2 = obj(&["b", "c"]);
        let y = obj(&["u"]);
        let mut s1 = Morphism::new(y.clone(), x1.clone());
        s1.pairs.insert((mset(&["u"]), Point::atom("a")));
        let mut s2 = Morphism::new(y.clone(), x2.clone());
        s2.pairs.insert((mset(&["u", "u"]), Point::atom("c")));
        let tup = tuple(&[s1.clone(), s2.clone()]).unwrap();
        let comps = [x1, x2];
        for (j, s) in [(1, &s1), (2, &s2)] {
            let pj = projection(&comps, j).unwrap();
            assert_eq!(compose(&pj, &tup).unwrap().pairs, s.pairs);
        }
    }

    #[test]
    fn dinfr_size_recurrence() {
        assert_eq!(dinfr_size(&Point::Star), 0);
        let p1 = Point::pair(Multiset::singleton(Point::Star), Point::Star);
        assert_eq!(dinfr_size(&p1), 1);
        let p2 = Point::pair(Multiset::singleton(p1.clone()), Point::Star);
        assert_eq!(dinfr_size(&p2), 2);
    }

    #[test]
    fn star_unfolds_canonically() {
        assert_eq!(
            Point::Star.unfold().unwrap(),
            (Multiset::new(), Point::Star)
        );
        assert_eq!(Point::pair(Multiset::new(), Point::Star), Point::Star);
    }

    #[test]
    fn size_strictly_decreasing_into_multiset() {
        for p in enumerate_points(PointSpace::Dinf, 3) {
            if let Point::Pair(m, _) = &p {
                for a in m.support() {
                    assert!(a.dsize() < p.dsize());
                }
            }
        }
    }

    #[test]
    fn dinf_enumeration_small_bounds() {
        let p0 = enumerate_points(PointSpace::Dinf, 0);
        assert_eq!(p0, vec![Point::Star]);
        let p1 = enumerate_points(PointSpace::Dinf, 1);
        assert_eq!(
            p1,
            vec![
                Point::Star,
                Point::pair(Multiset::singleton(Point::Star), Point::Star)
            ]
        );
    }

    #[test]
    fn typed_enumeration_atom() {
        let carriers: Carriers = [(
            "alpha".to_string(),
            ["p".to_string()].into_iter().collect(),
        )]
        .into();
        let pts = enumerate_points(
            PointSpace::Typed {
                ty: &SimpleType::atom("alpha"),
                carriers: &carriers,
            },
            2,
        );
        assert_eq!(pts, vec![Point::atom("p")]);
    }
}
