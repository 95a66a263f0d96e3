use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::median::{canonicalize, oriented_halfspaces, ConvexSet, MedianAlgebra};
use crate::morphism::Epimorphism;

/// Largest carrier for [`enumerate_convex_covers`].
pub const COVER_BOUND: usize = 64;

/// A convex cover `A ∪ B = K` with both parts nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitData {
    base: Arc<MedianAlgebra>,
    a: ConvexSet,
    b: ConvexSet,
}

impl SplitData {
    pub fn new(base: Arc<MedianAlgebra>, a: ConvexSet, b: ConvexSet) -> Result<Self> {
        check_cover(&base, a.members(), b.members())?;
        Ok(SplitData { base, a, b })
    }

    pub fn base(&self) -> &Arc<MedianAlgebra> {
        &self.base
    }

    pub fn a(&self) -> &ConvexSet {
        &self.a
    }

    pub fn b(&self) -> &ConvexSet {
        &self.b
    }

    pub fn extend(&self) -> Result<(Arc<MedianAlgebra>, Epimorphism)> {
        split_extension(&self.base, &self.a, &self.b)
    }
}

fn check_cover(k: &MedianAlgebra, a: &Bits, b: &Bits) -> Result<()> {
    for (name, s) in [("A", a), ("B", b)] {
        if s.len() != k.len() {
            return Err(Error::InvalidArgument(format!(
                "{name} has {} positions, carrier has {}",
                s.len(),
                k.len()
            )));
        }
        if s.none() {
            return Err(Error::EmptySide(name.into()));
        }
        if !k.is_convex_fast(s) {
            return Err(Error::NotConvex(name.into()));
        }
    }
    if !a.or(b).all() {
        return Err(Error::NotCovering);
    }
    Ok(())
}

/// `(A×{0}) ∪ (B×{1})` with one appended coordinate, without
/// canonicalization, and the projection dropping that coordinate. The
/// points come out sorted because each base point is followed by its
/// possible extensions in bit order.
pub(crate) fn split_raw(k: &MedianAlgebra, a: &Bits, b: &Bits) -> (MedianAlgebra, Vec<usize>) {
    let mut points = Vec::with_capacity(a.count_ones() + b.count_ones());
    let mut proj = Vec::with_capacity(points.capacity());
    for x in 0..k.len() {
        for (bit, side) in [(false, a), (true, b)] {
            if side.get(x) {
                let mut p = k.point(x).clone();
                p.push(bit);
                points.push(p);
                proj.push(x);
            }
        }
    }
    (
        MedianAlgebra::from_points_unchecked(k.dim() + 1, points),
        proj,
    )
}

/// Split extension over a convex cover, canonicalized, with its projection.
pub fn split_extension(
    k: &Arc<MedianAlgebra>,
    a: &ConvexSet,
    b: &ConvexSet,
) -> Result<(Arc<MedianAlgebra>, Epimorphism)> {
    check_cover(k, a.members(), b.members())?;
    let (raw, proj) = split_raw(k, a.members(), b.members());
    let (canon, relabel) = canonicalize(&raw);
    let mut map = vec![0; proj.len()];
    for (old, &x) in proj.iter().enumerate() {
        map[relabel[old]] = x;
    }
    let canon = Arc::new(canon);
    Ok((canon.clone(), Epimorphism::unchecked(canon, k.clone(), map)))
}

/// All nonempty convex subsets, ascending. Every nonempty convex set is an
/// intersection of halfspace sides, so closing the carrier under
/// intersection with sides reaches all of them.
pub fn convex_subsets(k: &MedianAlgebra) -> Vec<Bits> {
    let sides: Vec<Bits> = oriented_halfspaces(k)
        .into_iter()
        .map(|h| h.side1().members().clone())
        .collect();
    let mut seen: BTreeSet<Bits> = BTreeSet::new();
    let mut queue = vec![k.full_set()];
    seen.insert(k.full_set());
    while let Some(s) = queue.pop() {
        for side in &sides {
            let t = s.and(side);
            if !t.none() && !seen.contains(&t) {
                seen.insert(t.clone());
                queue.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

/// Unordered convex covers `{A, B}`, each listed once with `A ≤ B` in bit
/// order, ascending by `(A, B)`.
pub fn enumerate_convex_covers(k: &Arc<MedianAlgebra>) -> Result<Vec<SplitData>> {
    if k.len() > COVER_BOUND {
        return Err(Error::BoundExceeded {
            what: "convex cover enumeration",
            size: k.len(),
            bound: COVER_BOUND,
        });
    }
    Ok(cover_pairs(k, usize::MAX)
        .into_iter()
        .map(|(a, b)| SplitData {
            base: k.clone(),
            a: ConvexSet::unchecked(a),
            b: ConvexSet::unchecked(b),
        })
        .collect())
}

/// Cover pairs `(A, B)`, `A ≤ B`, with `|A ∩ B| ≤ max_overlap`.
pub(crate) fn cover_pairs(k: &MedianAlgebra, max_overlap: usize) -> Vec<(Bits, Bits)> {
    let n = k.len();
    let subsets = convex_subsets(k);
    let masks: Vec<u64> = subsets
        .iter()
        .map(|s| s.ones_iter().fold(0u64, |m, i| m | 1 << i))
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    for i in 0..subsets.len() {
        for j in i..subsets.len() {
            if masks[i] | masks[j] == full
                && ((masks[i] & masks[j]).count_ones() as usize) <= max_overlap
            {
                out.push((subsets[i].clone(), subsets[j].clone()));
            }
        }
    }
    out
}
