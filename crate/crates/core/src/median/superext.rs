//! Superextensions λn: maximal linked systems on an n-set.

use crate::bits::Bits;
use crate::error::{Error, Result};

use super::algebra::MedianAlgebra;
use super::canonical::canonicalize;

/// Default largest ground set for [`superextension`].
pub const DEFAULT_GROUND_BOUND: usize = 5;
/// Families are stored as one bit per subset in a `u64`.
pub const MAX_GROUND: usize = 6;

/// A maximal linked system on `{0, …, ground - 1}`. Bit `s` of the family
/// word is set iff the subset with bitmask `s` belongs to the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaximalLinkedSystem {
    ground: usize,
    family: u64,
}

impl MaximalLinkedSystem {
    /// Checks linkedness and maximality of a family of subset bitmasks.
    pub fn new(ground: usize, members: &[u32]) -> Result<Self> {
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::GroundSizeTooLarge {
                n: ground,
                bound: MAX_GROUND,
            });
        }
        let universe = 1u32 << ground;
        let mut family = 0u64;
        for &m in members {
            if m >= universe {
                return Err(Error::InvalidArgument(format!(
                    "subset {m} outside a {ground}-set"
                )));
            }
            family |= 1 << m;
        }
        let sys = MaximalLinkedSystem { ground, family };
        let sets = sys.members();
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate().skip(i) {
                if a & b == 0 {
                    return Err(Error::NotLinked {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        for s in 0..universe {
            if family >> s & 1 == 0 && sets.iter().all(|&a| a & s != 0) {
                return Err(Error::InvalidArgument(format!(
                    "family is not maximal: {s} can be added"
                )));
            }
        }
        Ok(sys)
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// One bit per subset of the ground set.
    pub fn family_word(&self) -> u64 {
        self.family
    }

    /// Member subsets as ascending bitmasks.
    pub fn members(&self) -> Vec<u32> {
        (0..1u32 << self.ground)
            .filter(|&s| self.family >> s & 1 == 1)
            .collect()
    }

    pub fn contains(&self, subset: u32) -> bool {
        self.family >> subset & 1 == 1
    }

    /// Sets lying in at least two of the three systems.
    pub fn median(x: &Self, y: &Self, z: &Self) -> Self {
        debug_assert!(x.ground == y.ground && y.ground == z.ground);
        let f = (x.family & y.family) | (x.family & z.family) | (y.family & z.family);
        MaximalLinkedSystem {
            ground: x.ground,
            family: f,
        }
    }

    /// The point system `{A : i ∈ A}`.
    pub fn principal(ground: usize, i: usize) -> Self {
        let family = (0..1u32 << ground)
            .filter(|s| s >> i & 1 == 1)
            .fold(0u64, |f, s| f | 1 << s);
        MaximalLinkedSystem { ground, family }
    }

    fn as_point(&self) -> Bits {
        Bits::from_bools((0..1u32 << self.ground).map(|s| self.contains(s)))
    }
}

/// All maximal linked systems on an `n`-set, ascending by family word.
///
/// For each complementary pair `{A, X∖A}` a maximal linked system holds
/// exactly one member; the search picks one per pair and keeps the choice
/// only while all picks pairwise intersect.
pub fn maximal_linked_systems(n: usize) -> Result<Vec<MaximalLinkedSystem>> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundSizeTooLarge {
            n,
            bound: MAX_GROUND,
        });
    }
    let full = (1u32 << n) - 1;
    // one representative per complementary pair: the member containing 0
    let reps: Vec<u32> = (0..=full).filter(|s| s & 1 == 1).collect();
    let mut chosen: Vec<u32> = Vec::with_capacity(reps.len());
    let mut out = Vec::new();

    fn search(reps: &[u32], full: u32, chosen: &mut Vec<u32>, out: &mut Vec<u64>) {
        let Some((&a, rest)) = reps.split_first() else {
            let family = chosen.iter().fold(0u64, |f, &s| f | 1 << s);
            out.push(family);
            return;
        };
        for pick in [a, full & !a] {
            if pick != 0 && chosen.iter().all(|&c| c & pick != 0) {
                chosen.push(pick);
                search(rest, full, chosen, out);
                chosen.pop();
            }
        }
    }
    search(&reps, full, &mut chosen, &mut out);
    out.sort_unstable();
    Ok(out
        .into_iter()
        .map(|family| MaximalLinkedSystem { ground: n, family })
        .collect())
}

/// λn as a canonical median algebra, together with the systems listed in
/// carrier order. Ground sizes above [`DEFAULT_GROUND_BOUND`] are refused.
pub fn superextension(n: usize) -> Result<(MedianAlgebra, Vec<MaximalLinkedSystem>)> {
    superextension_bounded(n, DEFAULT_GROUND_BOUND)
}

pub fn superextension_bounded(
    n: usize,
    bound: usize,
) -> Result<(MedianAlgebra, Vec<MaximalLinkedSystem>)> {
    let bound = bound.min(MAX_GROUND);
    if n == 0 || n > bound {
        return Err(Error::GroundSizeTooLarge { n, bound });
    }
    let systems = maximal_linked_systems(n)?;
    let points: Vec<Bits> = systems.iter().map(MaximalLinkedSystem::as_point).collect();
    // the family-word embedding preserves the median; validation re-checks
    // that the median of three systems is again one of them
    let raw = MedianAlgebra::validate(points, 1 << n)?;
    let (canon, relabel) = canonicalize(&raw);
    // `raw` is sorted by family point, which is the order of `systems` read
    // as bitstrings; map each system to its raw position first
    let mut ordered = vec![systems[0]; systems.len()];
    for sys in systems {
        let raw_pos = raw
            .index_of(&sys.as_point())
            .expect("system is a carrier point");
        ordered[relabel[raw_pos]] = sys;
    }
    Ok((canon, ordered))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=5)
            .map(|n| maximal_linked_systems(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 4, 12, 81]);
    }

    #[test]
    fn lambda3_elements() {
        let systems = maximal_linked_systems(3).unwrap();
        let xi: Vec<MaximalLinkedSystem> = (0..3)
            .map(|i| MaximalLinkedSystem::principal(3, i))
            .collect();
        let xi3 = MaximalLinkedSystem::new(3, &[0b011, 0b101, 0b110, 0b111]).unwrap();
        for s in xi.iter().chain([&xi3]) {
            assert!(systems.contains(s));
        }
        assert_eq!(MaximalLinkedSystem::median(&xi[0], &xi[1], &xi[2]), xi3);
    }

    #[test]
    fn new_rejects_bad_families() {
        assert!(matches!(
            MaximalLinkedSystem::new(2, &[0b01, 0b10]),
            Err(Error::NotLinked { .. })
        ));
        assert!(MaximalLinkedSystem::new(3, &[0b111]).is_err());
        assert!(matches!(
            MaximalLinkedSystem::new(7, &[]),
            Err(Error::GroundSizeTooLarge { .. })
        ));
    }

    #[test]
    fn superextension_bounds() {
        assert!(matches!(
            superextension(0),
            Err(Error::GroundSizeTooLarge { .. })
        ));
        assert!(matches!(
            superextension(6),
            Err(Error::GroundSizeTooLarge { .. })
        ));
        let (alg, systems) = superextension(3).unwrap();
        assert_eq!(alg.len(), 4);
        assert_eq!(systems.len(), 4);
        assert!(alg.is_canonical());
    }

    #[test]
    fn superextension_median_matches_embedding() {
        for n in 1..=4 {
            let (alg, systems) = superextension(n).unwrap();
            let k = alg.len();
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        let m = MaximalLinkedSystem::median(&systems[a], &systems[b], &systems[c]);
                        assert_eq!(systems[alg.median_index(a, b, c)], m);
                    }
                }
            }
        }
    }
}
