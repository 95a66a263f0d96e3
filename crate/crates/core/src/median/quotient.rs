use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::morphism::Epimorphism;

use super::algebra::{Halfspace, MedianAlgebra};
use super::canonical::canonicalize;

/// Identifies points that no member of `family` separates.
///
/// Each point is sent to the string of its sides in `family`; the image of a
/// median-closed set under such indicator maps is median-closed, so the
/// classwise median is well defined. The result is canonicalized and the
/// quotient map is checked on every triple for carriers up to 64 points.
pub fn quotient_by_halfspaces(
    alg: &MedianAlgebra,
    family: &[Halfspace],
) -> Result<(MedianAlgebra, Epimorphism)> {
    for h in family {
        let side1 = h.side1().members();
        if side1.len() != alg.len()
            || !alg.is_convex_fast(side1)
            || !alg.is_convex_fast(&side1.not())
        {
            return Err(Error::NotAHalfspace(format!("{side1:?}")));
        }
    }
    let sides: Vec<&Bits> = family.iter().map(|h| h.side1().members()).collect();
    let (canon, map) = quotient_map(alg.len(), &sides);

    let n = alg.len();
    if n <= 64 {
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    if map[alg.median_index(a, b, c)] != canon.median_index(map[a], map[b], map[c])
                    {
                        return Err(Error::InternalInvariantViolation(format!(
                            "quotient median not well defined at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
    }
    let canon = Arc::new(canon);
    let q = Epimorphism::unchecked(Arc::new(alg.clone()), canon.clone(), map);
    Ok((Arc::unwrap_or_clone(canon), q))
}

/// Canonical quotient of an `n`-point carrier by the given `side1` sets,
/// and the quotient map. The sets must be halfspaces.
pub(crate) fn quotient_map(n: usize, sides: &[&Bits]) -> (MedianAlgebra, Vec<usize>) {
    let image: Vec<Bits> = (0..n)
        .map(|x| Bits::from_bools(sides.iter().map(|s| s.get(x))))
        .collect();
    let raw = MedianAlgebra::from_points_unchecked(sides.len(), image.clone());
    let (canon, relabel) = canonicalize(&raw);
    let map = image
        .iter()
        .map(|p| relabel[raw.index_of(p).expect("image point")])
        .collect();
    (canon, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::median::halfspace::halfspaces;

    #[test]
    fn all_walls_give_an_isomorphic_copy() {
        let a = MedianAlgebra::from_bitstrings(&["000", "100", "110", "101"]).unwrap();
        let (q, map) = quotient_by_halfspaces(&a, &halfspaces(&a)).unwrap();
        assert_eq!(q.len(), a.len());
        let mut seen = map.map().to_vec();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), a.len());
    }

    #[test]
    fn no_walls_give_a_point() {
        let sq = MedianAlgebra::cube(2);
        let (q, map) = quotient_by_halfspaces(&sq, &[]).unwrap();
        assert_eq!(q, MedianAlgebra::one_point());
        assert_eq!(map.map(), &[0, 0, 0, 0]);
    }

    #[test]
    fn one_wall_of_the_square() {
        let sq = MedianAlgebra::cube(2);
        let (q, map) = quotient_by_halfspaces(&sq, &halfspaces(&sq)[..1]).unwrap();
        assert_eq!(q, MedianAlgebra::chain(2));
        assert_eq!(map.map(), &[0, 0, 1, 1]);
    }

    #[test]
    fn rejects_non_halfspaces() {
        let sq = MedianAlgebra::cube(2);
        let bad = Halfspace::from_side1_unchecked(Bits::from_indices(4, [3]));
        assert!(matches!(
            quotient_by_halfspaces(&sq, &[bad]),
            Err(Error::NotAHalfspace(_))
        ));
    }
}
