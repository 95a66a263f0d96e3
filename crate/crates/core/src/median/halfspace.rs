//! Halfspaces (walls) of finite median algebras and convex separation.

use crate::bits::Bits;
use crate::error::{Error, Result};

use super::algebra::{ConvexSet, Halfspace, IndexSet, MedianAlgebra};

/// Largest carrier accepted by the subset-enumeration routines.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// All proper halfspaces, one per wall, oriented so that `side0` holds the
/// binary-least carrier point, sorted by the `side1` indicator.
///
/// Every coordinate of an embedded algebra restricts to a halfspace and every
/// wall is cut by some coordinate, so the walls are the distinct nonconstant
/// coordinate traces. For canonical algebras the result is exactly the list
/// of coordinate traces in coordinate order.
pub fn halfspaces(alg: &MedianAlgebra) -> Vec<Halfspace> {
    wall_sides(alg)
        .into_iter()
        .map(Halfspace::from_side1_unchecked)
        .collect()
}

/// `side1` of every wall, in the order of [`halfspaces`].
pub(crate) fn wall_sides(alg: &MedianAlgebra) -> Vec<IndexSet> {
    let base = alg.point(0);
    let mut sides: Vec<IndexSet> = (0..alg.dim())
        .map(|i| {
            let t = alg.coordinate_trace(i);
            if base.get(i) {
                t.not()
            } else {
                t
            }
        })
        .filter(|s| !s.none())
        .collect();
    if !alg.is_canonical() {
        sides.sort();
        sides.dedup();
    }
    sides
}

/// Both orientations of every wall: `[w0, w0', w1, w1', …]`.
pub fn oriented_halfspaces(alg: &MedianAlgebra) -> Vec<Halfspace> {
    halfspaces(alg)
        .into_iter()
        .flat_map(|h| [h.clone(), h.flipped()])
        .collect()
}

/// Walls of an abstract algebra of at most [`BRUTE_FORCE_LIMIT`] points given
/// by its interval function, found by testing every subset. Returns the
/// `side1` masks (position 0 always lies in `side0`), ascending by the
/// `side1` indicator read from position 0.
pub(crate) fn walls_by_subsets(n: usize, interval: impl Fn(usize, usize) -> u32) -> Vec<u32> {
    assert!((1..=BRUTE_FORCE_LIMIT).contains(&n));
    let mut iv = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            iv[a * n + b] = interval(a, b);
        }
    }
    let full: u32 = (1u32 << n) - 1;
    let convex = |s: u32| -> bool {
        let mut rest = s;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut others = rest;
            while others != 0 {
                let b = others.trailing_zeros() as usize;
                others &= others - 1;
                if iv[a * n + b] & !s != 0 {
                    return false;
                }
            }
        }
        true
    };
    let mut out = Vec::new();
    // side1 ranges over nonempty subsets avoiding position 0
    for k in 1..(1u32 << (n - 1)) {
        let side1 = k << 1;
        if convex(side1) && convex(full & !side1) {
            out.push(side1);
        }
    }
    out.sort_by_key(|&m| Bits::from_bools((0..n).map(|i| m >> i & 1 == 1)));
    out
}

/// Subset-enumeration oracle for [`halfspaces`]: every `S` with `S` and its
/// complement interval-closed and both nonempty. At most
/// [`BRUTE_FORCE_LIMIT`] points.
pub fn halfspaces_brute_force(alg: &MedianAlgebra) -> Result<Vec<Halfspace>> {
    let n = alg.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::BoundExceeded {
            what: "subset enumeration",
            size: n,
            bound: BRUTE_FORCE_LIMIT,
        });
    }
    let to_mask = |s: &IndexSet| s.ones_iter().fold(0u32, |m, i| m | 1 << i);
    let masks = walls_by_subsets(n, |a, b| to_mask(&alg.interval_set(a, b)));
    Ok(masks
        .into_iter()
        .map(|m| Halfspace::from_side1_unchecked(Bits::from_bools((0..n).map(|i| m >> i & 1 == 1))))
        .collect())
}

/// A halfspace `H` (returned as `side1`) with `B ⊆ H` and `A ∩ H = ∅`; the
/// first such side in wall order.
pub fn separate_convex(alg: &MedianAlgebra, a: &ConvexSet, b: &ConvexSet) -> Result<Halfspace> {
    for (name, s) in [("A", a), ("B", b)] {
        if s.members().len() != alg.len() {
            return Err(Error::InvalidArgument(format!(
                "{name} has the wrong length"
            )));
        }
        if s.is_empty() {
            return Err(Error::EmptySide(name.into()));
        }
        if !alg.is_convex_fast(s.members()) {
            return Err(Error::NotConvex(name.into()));
        }
    }
    if a.members().intersects(b.members()) {
        return Err(Error::NotDisjoint);
    }
    let (am, bm) = (a.members(), b.members());
    for h in halfspaces(alg) {
        for oriented in [h.clone(), h.flipped()] {
            let side = oriented.side1().members();
            if bm.is_subset(side) && !am.intersects(side) {
                return Ok(oriented);
            }
        }
    }
    Err(Error::InternalInvariantViolation(
        "disjoint convex sets without a separating halfspace".into(),
    ))
}
