//! Ingestion of abstractly presented median algebras.

use crate::bits::Bits;
use crate::error::{Error, Result};

use super::algebra::MedianAlgebra;
use super::canonical::canonicalize;
use super::halfspace::{walls_by_subsets, BRUTE_FORCE_LIMIT};

/// Canonical embedded form of the algebra given by `table[(a*n + b)*n + c]`.
pub fn from_median_table(n: usize, table: &[usize]) -> Result<MedianAlgebra> {
    embed_median_table(n, table).map(|(alg, _)| alg)
}

/// Like [`from_median_table`], also returning the carrier position of each
/// table element.
///
/// The table must satisfy absorption and full symmetry; its walls are then
/// found by subset search and each element is embedded by its wall sides.
/// The embedding has to be injective and carry the table to coordinatewise
/// majority, otherwise the table is not a median algebra.
pub fn embed_median_table(n: usize, table: &[usize]) -> Result<(MedianAlgebra, Vec<usize>)> {
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::BoundExceeded {
            what: "median table",
            size: n,
            bound: BRUTE_FORCE_LIMIT,
        });
    }
    if table.len() != n * n * n {
        return Err(Error::InvalidArgument(format!(
            "table has {} entries, expected {}",
            table.len(),
            n * n * n
        )));
    }
    if let Some(pos) = table.iter().position(|&v| v >= n) {
        return Err(Error::InvalidArgument(format!(
            "table entry {pos} is {}, outside 0..{n}",
            table[pos]
        )));
    }
    let m = |a: usize, b: usize, c: usize| table[(a * n + b) * n + c];

    for a in 0..n {
        for b in 0..n {
            for triple in [[a, a, b], [a, b, a], [b, a, a]] {
                if m(triple[0], triple[1], triple[2]) != a {
                    return Err(Error::AxiomViolation {
                        axiom: "absorption",
                        triple,
                    });
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = m(a, b, c);
                if m(b, a, c) != v || m(a, c, b) != v {
                    return Err(Error::AxiomViolation {
                        axiom: "symmetry",
                        triple: [a, b, c],
                    });
                }
            }
        }
    }

    let interval = |a: usize, b: usize| {
        (0..n)
            .filter(|&x| m(a, b, x) == x)
            .fold(0u32, |s, x| s | 1 << x)
    };
    let walls = walls_by_subsets(n, interval);
    let points: Vec<Bits> = (0..n)
        .map(|x| Bits::from_bools(walls.iter().map(|w| w >> x & 1 == 1)))
        .collect();

    for a in 0..n {
        for b in a + 1..n {
            if points[a] == points[b] {
                return Err(Error::EmbeddingNotFaithful(format!(
                    "elements {a} and {b} lie on the same side of every wall"
                )));
            }
        }
    }
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                if Bits::majority(&points[a], &points[b], &points[c]) != points[m(a, b, c)] {
                    return Err(Error::EmbeddingNotFaithful(format!(
                        "wall embedding does not carry m({a}, {b}, {c}) to the majority"
                    )));
                }
            }
        }
    }

    let raw = MedianAlgebra::validate(points.clone(), walls.len())?;
    let (canon, relabel) = canonicalize(&raw);
    let positions = points
        .iter()
        .map(|p| relabel[raw.index_of(p).expect("embedded point")])
        .collect();
    Ok((canon, positions))
}

/// Median table of an embedded algebra, in carrier order.
pub fn to_median_table(alg: &MedianAlgebra) -> Vec<usize> {
    alg.median_table()
}
