//! Median epimorphisms: checking, enumeration, composition, pullbacks,
//! isomorphism search, factorization and lifting.

use std::collections::HashSet;
use std::sync::Arc;

use petgraph::algo::isomorphism::subgraph_isomorphisms_iter;
use petgraph::graph::UnGraph;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::median::{canonicalize, oriented_halfspaces, MedianAlgebra};

/// Largest source checked triple by triple; above this the wall criterion
/// is used.
pub const CHECK_BOUND: usize = 64;
/// Largest source and target for [`enumerate_epis`].
pub const ENUMERATION_BOUND: usize = 16;
/// Largest target for the wall-based searches.
pub const LIFT_TARGET_BOUND: usize = 64;

/// A surjective median-preserving map, stored as target positions indexed by
/// source position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Epimorphism {
    source: Arc<MedianAlgebra>,
    target: Arc<MedianAlgebra>,
    map: Vec<usize>,
}

impl Epimorphism {
    pub fn new(
        source: Arc<MedianAlgebra>,
        target: Arc<MedianAlgebra>,
        map: Vec<usize>,
    ) -> Result<Self> {
        check_epimorphism(&source, &target, &map)?;
        Ok(Epimorphism {
            source,
            target,
            map,
        })
    }

    pub(crate) fn unchecked(
        source: Arc<MedianAlgebra>,
        target: Arc<MedianAlgebra>,
        map: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(map.len(), source.len());
        Epimorphism {
            source,
            target,
            map,
        }
    }

    pub fn identity(alg: Arc<MedianAlgebra>) -> Self {
        let map = (0..alg.len()).collect();
        Epimorphism {
            source: alg.clone(),
            target: alg,
            map,
        }
    }

    /// The constant map onto the one-point algebra.
    pub fn to_point(alg: Arc<MedianAlgebra>) -> Self {
        let map = vec![0; alg.len()];
        Epimorphism {
            source: alg,
            target: Arc::new(MedianAlgebra::one_point()),
            map,
        }
    }

    pub fn source(&self) -> &Arc<MedianAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MedianAlgebra> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len()
    }

    /// Source positions mapped to `y`.
    pub fn fiber(&self, y: usize) -> Bits {
        Bits::from_bools(self.map.iter().map(|&v| v == y))
    }

    /// Image of a set of source positions.
    pub fn image_of(&self, set: &Bits) -> Bits {
        Bits::from_indices(self.target.len(), set.ones_iter().map(|x| self.map[x]))
    }

    /// Preimage of a set of target positions.
    pub fn preimage_of(&self, set: &Bits) -> Bits {
        Bits::from_bools(self.map.iter().map(|&v| set.get(v)))
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<Epimorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Epimorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        })
    }
}

/// Accepts `map` iff it is a surjective median-preserving map.
///
/// For sources up to [`CHECK_BOUND`] points every triple is checked, and
/// the interval condition `f([a,b]) ⊆ [f(a),f(b)]` is checked separately;
/// the two verdicts must agree. Larger sources use the wall criterion: a
/// map into an embedded algebra preserves medians iff every target
/// coordinate pulls back to a convex set with convex complement.
pub fn check_epimorphism(
    source: &MedianAlgebra,
    target: &MedianAlgebra,
    map: &[usize],
) -> Result<()> {
    if map.len() != source.len() {
        return Err(Error::MapLengthMismatch {
            expected: source.len(),
            found: map.len(),
        });
    }
    if let Some((position, &value)) = map.iter().enumerate().find(|(_, &v)| v >= target.len()) {
        return Err(Error::MapValueOutOfRange {
            position,
            value,
            target_len: target.len(),
        });
    }
    let mut hit = vec![false; target.len()];
    for &v in map {
        hit[v] = true;
    }
    if let Some(missing) = hit.iter().position(|&h| !h) {
        return Err(Error::NotSurjective { missing });
    }
    if source.len() <= CHECK_BOUND {
        let by_median = median_violation(source, target, map);
        let by_interval = preserves_intervals(source, target, map);
        if by_median.is_none() != by_interval {
            return Err(Error::InternalInvariantViolation(
                "median and interval characterizations of homomorphisms disagree".into(),
            ));
        }
        match by_median {
            Some(triple) => Err(Error::NotMedianPreserving { triple }),
            None => Ok(()),
        }
    } else {
        match wall_violation(source, target, map) {
            Some(triple) => Err(Error::NotMedianPreserving { triple }),
            None => Ok(()),
        }
    }
}

/// First triple `a ≤ b ≤ c` with `f(m(a,b,c)) ≠ m(f a, f b, f c)`.
pub fn median_violation(
    source: &MedianAlgebra,
    target: &MedianAlgebra,
    map: &[usize],
) -> Option<[usize; 3]> {
    let n = source.len();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                if map[source.median_index(a, b, c)] != target.median_index(map[a], map[b], map[c])
                {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// The interval condition `f([a,b]) ⊆ [f(a),f(b)]` for all pairs.
pub fn preserves_intervals(source: &MedianAlgebra, target: &MedianAlgebra, map: &[usize]) -> bool {
    let n = source.len();
    (0..n).all(|a| {
        (a + 1..n).all(|b| {
            let allowed = target.interval_set(map[a], map[b]);
            source
                .interval_set(a, b)
                .ones_iter()
                .all(|x| allowed.get(map[x]))
        })
    })
}

fn wall_violation(
    source: &MedianAlgebra,
    target: &MedianAlgebra,
    map: &[usize],
) -> Option<[usize; 3]> {
    for i in 0..target.dim() {
        let side1 = Bits::from_bools(map.iter().map(|&v| target.point(v).get(i)));
        for side in [side1.not(), side1] {
            if source.is_convex_fast(&side) {
                continue;
            }
            // a, b on this side with some x between them outside it: the
            // majority of f(a), f(b), f(x) differs from f(x) at coordinate i
            let members: Vec<usize> = side.ones_iter().collect();
            for (ix, &a) in members.iter().enumerate() {
                for &b in &members[ix + 1..] {
                    if let Some(x) = source.interval_set(a, b).and_not(&side).first_one() {
                        let mut t = [a, b, x];
                        t.sort_unstable();
                        return Some(t);
                    }
                }
            }
        }
    }
    None
}

/// All epimorphisms `m ↠ n`, lexicographic in the map.
///
/// Positions are assigned in carrier order with values in carrier order.
/// After each assignment every triple whose members and median are all
/// assigned is checked, and the branch is cut once the unassigned
/// positions cannot cover the missing target points.
pub fn enumerate_epis(m: &Arc<MedianAlgebra>, n: &Arc<MedianAlgebra>) -> Result<Vec<Epimorphism>> {
    for size in [m.len(), n.len()] {
        if size > ENUMERATION_BOUND {
            return Err(Error::BoundExceeded {
                what: "epimorphism enumeration",
                size,
                bound: ENUMERATION_BOUND,
            });
        }
    }
    let maps = enumerate_epi_maps(m, n);
    Ok(maps
        .into_iter()
        .map(|map| Epimorphism::unchecked(m.clone(), n.clone(), map))
        .collect())
}

pub(crate) fn enumerate_epi_maps(m: &MedianAlgebra, n: &MedianAlgebra) -> Vec<Vec<usize>> {
    let (sm, tn) = (m.len(), n.len());
    let mut out = Vec::new();
    if sm < tn {
        return out;
    }
    let src = m.median_table();
    let tgt = n.median_table();
    let mut map = vec![usize::MAX; sm];
    let mut hits = vec![0usize; tn];

    struct Ctx<'a> {
        sm: usize,
        tn: usize,
        src: &'a [usize],
        tgt: &'a [usize],
    }

    impl Ctx<'_> {
        fn consistent(&self, map: &[usize], k: usize) -> bool {
            let (sm, tn) = (self.sm, self.tn);
            for a in 0..=k {
                for b in a..=k {
                    for c in b..=k {
                        if a != k && b != k && c != k {
                            continue;
                        }
                        let med = self.src[(a * sm + b) * sm + c];
                        if med > k {
                            continue;
                        }
                        if map[med] != self.tgt[(map[a] * tn + map[b]) * tn + map[c]] {
                            return false;
                        }
                    }
                }
            }
            // triples of earlier positions whose median is k
            for a in 0..k {
                for b in a..k {
                    for c in b..k {
                        if self.src[(a * sm + b) * sm + c] == k
                            && map[k] != self.tgt[(map[a] * tn + map[b]) * tn + map[c]]
                        {
                            return false;
                        }
                    }
                }
            }
            true
        }

        fn go(
            &self,
            k: usize,
            map: &mut Vec<usize>,
            hits: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if k == self.sm {
                if hits.iter().all(|&h| h > 0) {
                    out.push(map.clone());
                }
                return;
            }
            let missing = hits.iter().filter(|&&h| h == 0).count();
            if missing > self.sm - k {
                return;
            }
            for v in 0..self.tn {
                if missing == self.sm - k && hits[v] > 0 {
                    continue;
                }
                map[k] = v;
                hits[v] += 1;
                if self.consistent(map, k) {
                    self.go(k + 1, map, hits, out);
                }
                hits[v] -= 1;
            }
            map[k] = usize::MAX;
        }
    }

    let ctx = Ctx {
        sm,
        tn,
        src: &src,
        tgt: &tgt,
    };
    ctx.go(0, &mut map, &mut hits, &mut out);
    out
}

/// `g ∘ f`.
pub fn compose(g: &Epimorphism, f: &Epimorphism) -> Result<Epimorphism> {
    if !Arc::ptr_eq(f.target(), g.source()) && f.target() != g.source() {
        return Err(Error::TypeMismatch(
            "target of the first map is not the source of the second".into(),
        ));
    }
    let map = f.map.iter().map(|&y| g.map[y]).collect();
    Ok(Epimorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        map,
    })
}

/// The fiber product of two epimorphisms with a common target, with its
/// two projections. `pairs[w]` gives the source positions behind `w`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub algebra: Arc<MedianAlgebra>,
    pub pairs: Vec<(usize, usize)>,
    pub left: Epimorphism,
    pub right: Epimorphism,
}

/// `W = {(x, y) : f(x) = g(y)}` inside the product cube, canonicalized.
pub fn pullback(f: &Epimorphism, g: &Epimorphism) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::TypeMismatch("pullback needs a common target".into()));
    }
    let (x, y) = (f.source(), g.source());
    let mut raw_pairs = Vec::new();
    let mut points = Vec::new();
    for a in 0..x.len() {
        for b in 0..y.len() {
            if f.map[a] == g.map[b] {
                raw_pairs.push((a, b));
                points.push(x.point(a).concat(y.point(b)));
            }
        }
    }
    // pairs were produced in lexicographic order, which is the sorted order
    // of the concatenated points
    let raw = MedianAlgebra::from_points_unchecked(x.dim() + y.dim(), points);
    let (canon, relabel) = canonicalize(&raw);
    let mut pairs = vec![(0, 0); raw_pairs.len()];
    for (old, &pair) in raw_pairs.iter().enumerate() {
        pairs[relabel[old]] = pair;
    }
    let algebra = Arc::new(canon);
    let left = Epimorphism::unchecked(
        algebra.clone(),
        x.clone(),
        pairs.iter().map(|p| p.0).collect(),
    );
    let right = Epimorphism::unchecked(
        algebra.clone(),
        y.clone(),
        pairs.iter().map(|p| p.1).collect(),
    );

    let covers = |e: &Epimorphism| {
        let mut hit = vec![false; e.target.len()];
        e.map.iter().for_each(|&v| hit[v] = true);
        hit.into_iter().all(|h| h)
    };
    if !covers(&left) || !covers(&right) {
        return Err(Error::InternalInvariantViolation(
            "pullback projection not surjective".into(),
        ));
    }
    if compose(f, &left)?.map != compose(g, &right)?.map {
        return Err(Error::InternalInvariantViolation(
            "pullback square does not commute".into(),
        ));
    }
    Ok(Pullback {
        algebra,
        pairs,
        left,
        right,
    })
}

/// A median-preserving bijection `m → n`, if one exists.
///
/// Equal canonical forms give one directly. Otherwise the median graphs
/// are compared (an isomorphism of median graphs is an isomorphism of the
/// algebras) and every candidate is re-checked as a median map.
pub fn find_isomorphism(m: &Arc<MedianAlgebra>, n: &Arc<MedianAlgebra>) -> Option<Epimorphism> {
    if m.len() != n.len() {
        return None;
    }
    let (cm, rm) = canonicalize(m);
    let (cn, rn) = canonicalize(n);
    if cm.dim() != cn.dim() {
        return None;
    }
    if cm.same_carrier(&cn) {
        let mut inv_n = vec![0; rn.len()];
        for (old, &new) in rn.iter().enumerate() {
            inv_n[new] = old;
        }
        let map = rm.iter().map(|&c| inv_n[c]).collect();
        return Some(Epimorphism::unchecked(m.clone(), n.clone(), map));
    }
    let em = m.median_graph_edges();
    let en = n.median_graph_edges();
    if em.len() != en.len() {
        return None;
    }
    let degrees = |edges: &[(usize, usize)], len: usize| {
        let mut d = vec![0usize; len];
        for &(a, b) in edges {
            d[a] += 1;
            d[b] += 1;
        }
        d.sort_unstable();
        d
    };
    if degrees(&em, m.len()) != degrees(&en, n.len()) {
        return None;
    }
    let gm = UnGraph::<(), ()>::from_edges(em.iter().map(|&(a, b)| (a as u32, b as u32)));
    let gn = UnGraph::<(), ()>::from_edges(en.iter().map(|&(a, b)| (a as u32, b as u32)));
    let (gm, gn) = (pad(gm, m.len()), pad(gn, n.len()));
    let (gm_ref, gn_ref) = (&gm, &gn);
    let mut node_match = |_: &(), _: &()| true;
    let mut edge_match = |_: &(), _: &()| true;
    let iter = subgraph_isomorphisms_iter(&gm_ref, &gn_ref, &mut node_match, &mut edge_match)?;
    for map in iter {
        if check_epimorphism(m, n, &map).is_ok() {
            return Some(Epimorphism::unchecked(m.clone(), n.clone(), map));
        }
    }
    None
}

fn pad(mut g: UnGraph<(), ()>, len: usize) -> UnGraph<(), ()> {
    while g.node_count() < len {
        g.add_node(());
    }
    g
}

/// The map `f′` with `f = f′ ∘ h`, if the kernel of `h` refines that of `f`
/// and the induced map preserves medians.
pub fn factor_epimorphism(f: &Epimorphism, h: &Epimorphism) -> Result<Option<Epimorphism>> {
    if f.source() != h.source() {
        return Err(Error::TypeMismatch(
            "maps to factor must share their source".into(),
        ));
    }
    let mut induced = vec![usize::MAX; h.target.len()];
    for (x, &k) in h.map.iter().enumerate() {
        if induced[k] == usize::MAX {
            induced[k] = f.map[x];
        } else if induced[k] != f.map[x] {
            return Ok(None);
        }
    }
    Ok(Epimorphism::new(h.target.clone(), f.target.clone(), induced).ok())
}

/// Wall-by-wall search for median maps from a fixed source onto small
/// targets.
///
/// A map `q: L → N` preserves medians iff the preimage of each side of each
/// wall of `N` is a halfspace of `L` or empty; for a surjection it is a
/// proper halfspace. The search walks the walls of canonical `N` in order,
/// choosing an oriented halfspace of `L` for each, while keeping for every
/// `x` the set of target points still compatible with the choices and with
/// any prescribed constraint. Branches where some `x` has no candidate left,
/// or some target point is no longer reachable, are cut.
pub struct Lifter {
    source: Arc<MedianAlgebra>,
    sides: Vec<Bits>,
}

struct TargetWalls {
    masks: Vec<u64>,
    all: u64,
    to_original: Vec<usize>,
}

impl Lifter {
    pub fn new(source: Arc<MedianAlgebra>) -> Self {
        let sides = oriented_halfspaces(&source)
            .into_iter()
            .map(|h| h.side1().members().clone())
            .collect();
        Lifter { source, sides }
    }

    pub fn source(&self) -> &Arc<MedianAlgebra> {
        &self.source
    }

    /// `side1` of every oriented halfspace of the source, in search order.
    pub fn sides(&self) -> &[Bits] {
        &self.sides
    }

    /// Up to `limit` surjective median maps `source → target` with
    /// `allowed(x, q(x))` for every `x`, in search order.
    pub fn maps(
        &self,
        target: &MedianAlgebra,
        allowed: impl Fn(usize, usize) -> bool,
        limit: usize,
    ) -> Result<Vec<Vec<usize>>> {
        if target.len() > LIFT_TARGET_BOUND {
            return Err(Error::BoundExceeded {
                what: "lifting target",
                size: target.len(),
                bound: LIFT_TARGET_BOUND,
            });
        }
        let (cn, rn) = canonicalize(target);
        let mut to_original = vec![0; rn.len()];
        for (old, &new) in rn.iter().enumerate() {
            to_original[new] = old;
        }
        let walls = TargetWalls {
            masks: (0..cn.dim())
                .map(|j| {
                    (0..cn.len())
                        .filter(|&y| cn.point(y).get(j))
                        .fold(0u64, |m, y| m | 1 << y)
                })
                .collect(),
            all: if cn.len() == 64 {
                u64::MAX
            } else {
                (1u64 << cn.len()) - 1
            },
            to_original,
        };
        let cand: Vec<u64> = (0..self.source.len())
            .map(|x| {
                (0..walls.to_original.len())
                    .filter(|&c| allowed(x, walls.to_original[c]))
                    .fold(0u64, |m, c| m | 1 << c)
            })
            .collect();
        let mut out = Vec::new();
        if limit > 0
            && cand.iter().all(|&c| c != 0)
            && cand.iter().fold(0, |u, &c| u | c) == walls.all
        {
            self.step(&walls, 0, cand, limit, &mut out);
        }
        Ok(out)
    }

    fn step(
        &self,
        walls: &TargetWalls,
        j: usize,
        cand: Vec<u64>,
        limit: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if j == walls.masks.len() {
            let map = cand
                .iter()
                .map(|&c| {
                    debug_assert_eq!(c.count_ones(), 1);
                    walls.to_original[c.trailing_zeros() as usize]
                })
                .collect();
            out.push(map);
            return;
        }
        let mask = walls.masks[j];
        let forced_in = Bits::from_bools(cand.iter().map(|&c| c & !mask == 0));
        let forced_out = Bits::from_bools(cand.iter().map(|&c| c & mask == 0));
        for side in &self.sides {
            if !forced_in.is_subset(side) || forced_out.intersects(side) {
                continue;
            }
            let mut next = Vec::with_capacity(cand.len());
            let mut union = 0u64;
            let mut empty = false;
            for (x, &c) in cand.iter().enumerate() {
                let v = if side.get(x) { c & mask } else { c & !mask };
                empty |= v == 0;
                union |= v;
                next.push(v);
            }
            if empty || union != walls.all {
                continue;
            }
            self.step(walls, j + 1, next, limit, out);
            if out.len() >= limit {
                return;
            }
        }
    }

    /// Liftings `q` of `g` through `f`: `f ∘ q = g`, where `g` starts at the
    /// source of this lifter.
    pub fn liftings(
        &self,
        f: &Epimorphism,
        g_map: &[usize],
        limit: usize,
    ) -> Result<Vec<Vec<usize>>> {
        debug_assert_eq!(g_map.len(), self.source.len());
        self.maps(f.source(), |x, y| f.map[y] == g_map[x], limit)
    }
}

/// First `q: g.source() ↠ f.source()` with `f ∘ q = g`, in the canonical
/// order of the wall search.
pub fn find_lifting(f: &Epimorphism, g: &Epimorphism) -> Result<Option<Epimorphism>> {
    Ok(liftings(f, g, 1)?.into_iter().next())
}

/// Up to `limit` liftings of `g` through `f`.
pub fn liftings(f: &Epimorphism, g: &Epimorphism, limit: usize) -> Result<Vec<Epimorphism>> {
    if f.target() != g.target() {
        return Err(Error::TypeMismatch("lifting needs a common target".into()));
    }
    let lifter = Lifter::new(g.source().clone());
    let maps = lifter.liftings(f, g.map(), limit)?;
    Ok(maps
        .into_iter()
        .map(|map| Epimorphism::unchecked(g.source().clone(), f.source().clone(), map))
        .collect())
}

/// All epimorphisms `source ↠ target` via the wall search; suitable for
/// large sources and small targets. Ordered by the wall search, not
/// lexicographically.
pub fn epis_by_walls(
    source: &Arc<MedianAlgebra>,
    target: &Arc<MedianAlgebra>,
) -> Result<Vec<Epimorphism>> {
    let maps = Lifter::new(source.clone()).maps(target, |_, _| true, usize::MAX)?;
    Ok(maps
        .into_iter()
        .map(|map| Epimorphism::unchecked(source.clone(), target.clone(), map))
        .collect())
}

/// Automorphism group of an algebra, as maps in lexicographic order.
pub fn automorphisms(alg: &Arc<MedianAlgebra>) -> Vec<Vec<usize>> {
    if alg.len() <= ENUMERATION_BOUND {
        enumerate_epi_maps(alg, alg)
    } else {
        let mut out = Lifter::new(alg.clone())
            .maps(alg, |_, _| true, usize::MAX)
            .expect("bounded target");
        out.sort();
        out
    }
}

/// Groups maps into orbits under precomposition with automorphisms of the
/// source and keeps the lexicographically least map of each orbit.
pub fn orbit_representatives(maps: &[Vec<usize>], source_autos: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut reps = Vec::new();
    let mut sorted = maps.to_vec();
    sorted.sort();
    for f in sorted {
        if seen.contains(&f) {
            continue;
        }
        for tau in source_autos {
            let g: Vec<usize> = tau.iter().map(|&t| f[t]).collect();
            seen.insert(g);
        }
        seen.insert(f.clone());
        reps.push(f);
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(a: MedianAlgebra) -> Arc<MedianAlgebra> {
        Arc::new(a)
    }

    fn brute_force_epis(m: &MedianAlgebra, n: &MedianAlgebra) -> Vec<Vec<usize>> {
        let (sm, tn) = (m.len(), n.len());
        let total = tn.pow(sm as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let mut map = vec![0; sm];
            for k in (0..sm).rev() {
                map[k] = c % tn;
                c /= tn;
            }
            if check_epimorphism(m, n, &map).is_ok() {
                out.push(map);
            }
        }
        out
    }

    #[test]
    fn identity_and_projection() {
        let sq = arc(MedianAlgebra::cube(2));
        let two = arc(MedianAlgebra::chain(2));
        assert!(check_epimorphism(&sq, &sq, &[0, 1, 2, 3]).is_ok());
        assert!(check_epimorphism(&sq, &two, &[0, 0, 1, 1]).is_ok());
    }

    #[test]
    fn diagonal_collapse_is_not_median_preserving() {
        let sq = MedianAlgebra::cube(2);
        let two = MedianAlgebra::chain(2);
        // 00,11 -> 0 and 01,10 -> 1
        assert!(matches!(
            check_epimorphism(&sq, &two, &[0, 1, 1, 0]),
            Err(Error::NotMedianPreserving { .. })
        ));
    }

    #[test]
    fn shape_errors() {
        let two = MedianAlgebra::chain(2);
        assert!(matches!(
            check_epimorphism(&two, &two, &[0]),
            Err(Error::MapLengthMismatch { .. })
        ));
        assert!(matches!(
            check_epimorphism(&two, &two, &[0, 2]),
            Err(Error::MapValueOutOfRange { .. })
        ));
        assert!(matches!(
            check_epimorphism(&two, &two, &[1, 1]),
            Err(Error::NotSurjective { missing: 0 })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let one = arc(MedianAlgebra::one_point());
        let two = arc(MedianAlgebra::chain(2));
        let sq = arc(MedianAlgebra::cube(2));
        assert_eq!(enumerate_epis(&one, &one).unwrap().len(), 1);
        assert_eq!(enumerate_epis(&sq, &two).unwrap().len(), 4);
        assert!(enumerate_epis(&two, &sq).unwrap().is_empty());
        assert!(matches!(
            enumerate_epis(&arc(MedianAlgebra::chain(17)), &two),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let algs = [
            MedianAlgebra::one_point(),
            MedianAlgebra::chain(2),
            MedianAlgebra::chain(3),
            MedianAlgebra::cube(2),
            MedianAlgebra::chain(4),
            MedianAlgebra::from_bitstrings(&["000", "100", "010", "001"]).unwrap(),
            MedianAlgebra::from_bitstrings(&["000", "001", "010", "011", "111"]).unwrap(),
            MedianAlgebra::from_bitstrings(&["000", "001", "010", "011", "110", "111"]).unwrap(),
        ];
        for m in &algs {
            for n in algs.iter().filter(|n| n.len() <= 4) {
                let expected = brute_force_epis(m, n);
                assert_eq!(enumerate_epi_maps(m, n), expected, "{m} -> {n}");
                let by_walls: Vec<Vec<usize>> = {
                    let mut v: Vec<Vec<usize>> = epis_by_walls(&arc(m.clone()), &arc(n.clone()))
                        .unwrap()
                        .into_iter()
                        .map(|e| e.map)
                        .collect();
                    v.sort();
                    v
                };
                assert_eq!(by_walls, expected, "walls {m} -> {n}");
            }
        }
    }

    #[test]
    fn composition() {
        let sq = arc(MedianAlgebra::cube(2));
        let two = arc(MedianAlgebra::chain(2));
        let f = Epimorphism::new(sq.clone(), two.clone(), vec![0, 0, 1, 1]).unwrap();
        assert_eq!(compose(&Epimorphism::identity(two.clone()), &f).unwrap(), f);
        assert_eq!(compose(&f, &Epimorphism::identity(sq.clone())).unwrap(), f);
        assert!(matches!(compose(&f, &f), Err(Error::TypeMismatch(_))));
    }

    #[test]
    fn pullback_examples() {
        let sq = arc(MedianAlgebra::cube(2));
        let two = arc(MedianAlgebra::chain(2));
        let f = Epimorphism::new(sq.clone(), two.clone(), vec![0, 0, 1, 1]).unwrap();
        let pb = pullback(&f, &f).unwrap();
        assert_eq!(pb.algebra.len(), 8);

        let to_pt = Epimorphism::to_point(sq.clone());
        let to_pt2 = Epimorphism::to_point(two.clone());
        assert_eq!(pullback(&to_pt, &to_pt2).unwrap().algebra.len(), 8);

        let pb = pullback(&f, &Epimorphism::identity(two.clone())).unwrap();
        assert_eq!(pb.algebra.len(), 4);
        assert!(pb.left.is_bijective());
    }

    #[test]
    fn isomorphism_examples() {
        let sq = arc(MedianAlgebra::cube(2));
        assert_eq!(find_isomorphism(&sq, &sq).unwrap().map(), &[0, 1, 2, 3]);
        assert!(find_isomorphism(&sq, &arc(MedianAlgebra::chain(3))).is_none());
        let a =
            arc(MedianAlgebra::from_bitstrings(&["0000", "1000", "0100", "1100", "0010"]).unwrap());
        let b = arc(MedianAlgebra::from_bitstrings(&["000", "001", "010", "011", "100"]).unwrap());
        let iso = find_isomorphism(&a, &b).unwrap();
        assert!(check_epimorphism(&a, &b, iso.map()).is_ok());
        assert!(find_isomorphism(&a, &arc(MedianAlgebra::chain(5))).is_none());
    }

    #[test]
    fn factorization_examples() {
        let sq = arc(MedianAlgebra::cube(2));
        let two = arc(MedianAlgebra::chain(2));
        let p0 = Epimorphism::new(sq.clone(), two.clone(), vec![0, 0, 1, 1]).unwrap();
        let p1 = Epimorphism::new(sq.clone(), two.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(
            factor_epimorphism(&p0, &Epimorphism::identity(sq.clone()))
                .unwrap()
                .unwrap(),
            p0
        );
        assert!(factor_epimorphism(&p0, &p0).unwrap().unwrap().map() == [0, 1]);
        assert!(factor_epimorphism(&p1, &p0).unwrap().is_none());
    }

    #[test]
    fn lifting_through_projection() {
        let sq = arc(MedianAlgebra::cube(2));
        let two = arc(MedianAlgebra::chain(2));
        let p0 = Epimorphism::new(sq.clone(), two.clone(), vec![0, 0, 1, 1]).unwrap();
        // lift the identity of the square through p0: q must be an
        // automorphism of the square commuting with p0
        let lifts = liftings(&p0, &p0, usize::MAX).unwrap();
        assert_eq!(lifts.len(), 2);
        for q in &lifts {
            assert_eq!(compose(&p0, q).unwrap().map(), p0.map());
        }
        // nothing lifts the 2-point identity through p0
        assert!(find_lifting(&p0, &Epimorphism::identity(two.clone()))
            .unwrap()
            .is_none());
    }

    #[test]
    fn orbits_of_square_projections() {
        let sq = arc(MedianAlgebra::cube(2));
        let two = arc(MedianAlgebra::chain(2));
        let maps: Vec<Vec<usize>> = enumerate_epis(&sq, &two)
            .unwrap()
            .into_iter()
            .map(|e| e.map)
            .collect();
        let autos = automorphisms(&sq);
        assert_eq!(autos.len(), 8);
        assert_eq!(orbit_representatives(&maps, &autos).len(), 1);
    }
}
