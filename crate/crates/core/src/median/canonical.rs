use crate::bits::Bits;

use super::algebra::MedianAlgebra;
use super::halfspace::wall_sides;

/// Re-embeds the carrier with one coordinate per wall.
///
/// Each wall is oriented so that the binary-least point lies on its 0 side,
/// making that point the all-zero string. Rows (points) and columns (walls)
/// of the incidence matrix are then sorted alternately until both are in
/// ascending lexicographic order; each pass strictly decreases the row-major
/// reading of the matrix, so this terminates. The output is a fixed point of
/// the procedure, hence idempotent.
///
/// Returns the canonical algebra and `relabel[old position] = new position`.
pub fn canonicalize(alg: &MedianAlgebra) -> (MedianAlgebra, Vec<usize>) {
    let n = alg.len();
    let walls = wall_sides(alg);
    let d = walls.len();

    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..d).collect();
    loop {
        let col_key =
            |w: usize, rows: &[usize]| Bits::from_bools(rows.iter().map(|&r| walls[w].get(r)));
        let mut new_cols = cols.clone();
        new_cols.sort_by_cached_key(|&w| col_key(w, &rows));

        let row_key =
            |r: usize, cols: &[usize]| Bits::from_bools(cols.iter().map(|&w| walls[w].get(r)));
        let mut new_rows = rows.clone();
        new_rows.sort_by_cached_key(|&r| row_key(r, &new_cols));

        let stable = new_cols == cols && new_rows == rows;
        cols = new_cols;
        rows = new_rows;
        if stable {
            break;
        }
    }

    let points: Vec<Bits> = rows
        .iter()
        .map(|&r| Bits::from_bools(cols.iter().map(|&w| walls[w].get(r))))
        .collect();
    let mut relabel = vec![0; n];
    for (new, &old) in rows.iter().enumerate() {
        relabel[old] = new;
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    let canon = MedianAlgebra::from_points_unchecked(d, points).mark_canonical();
    (canon, relabel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::median::halfspace::halfspaces;

    fn alg(pts: &[&str]) -> MedianAlgebra {
        MedianAlgebra::from_bitstrings(pts).unwrap()
    }

    #[test]
    fn strips_constant_and_repeated_coordinates() {
        let (c, relabel) = canonicalize(&alg(&["000", "011"]));
        assert_eq!(c, alg(&["0", "1"]).mark_canonical());
        assert_eq!(relabel, vec![0, 1]);
    }

    #[test]
    fn square_is_fixed() {
        let sq = MedianAlgebra::cube(2);
        let (c, relabel) = canonicalize(&sq);
        assert_eq!(c, sq);
        assert_eq!(relabel, vec![0, 1, 2, 3]);
    }

    #[test]
    fn one_point_goes_to_dimension_zero() {
        let (c, _) = canonicalize(&alg(&["101"]));
        assert_eq!(c.dim(), 0);
        assert_eq!(c.len(), 1);
        assert_eq!(c.points()[0].len(), 0);
    }

    #[test]
    fn idempotent_and_median_preserving() {
        let a = alg(&["0000", "0100", "0110", "1100", "1110", "0111"]);
        let (c, relabel) = canonicalize(&a);
        let (c2, relabel2) = canonicalize(&c);
        assert_eq!(c, c2);
        assert_eq!(relabel2, (0..c.len()).collect::<Vec<_>>());
        let n = a.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    assert_eq!(
                        relabel[a.median_index(x, y, z)],
                        c.median_index(relabel[x], relabel[y], relabel[z])
                    );
                }
            }
        }
        // coordinates of a canonical algebra are exactly its walls
        let hs = halfspaces(&c);
        assert_eq!(hs.len(), c.dim());
        for (i, h) in hs.iter().enumerate() {
            assert_eq!(h.side1().members(), &c.coordinate_trace(i));
        }
    }

    #[test]
    fn chains_embedded_differently_agree() {
        let (a, _) = canonicalize(&alg(&["00", "01", "11"]));
        let (b, _) = canonicalize(&alg(&["00", "10", "11"]));
        let (c, _) = canonicalize(&alg(&["000", "110", "111"]));
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}
