//! Extension property and the halfspace conditions, checked along a built
//! sequence: inputs at stage `α` are pulled back to later stages and a
//! witness is searched for stage by stage.

use std::sync::Arc;

use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::median::{oriented_halfspaces, MedianAlgebra};
use crate::morphism::{Epimorphism, Lifter};

use super::sequence::InverseSequence;

/// Result of a search along a sequence: the least stage with a witness, or
/// the range of stages that were searched in vain. Not finding a witness
/// only says the built stages do not suffice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Search<W> {
    Witness { stage: usize, witness: W },
    NotFound { from: usize, to: usize },
}

impl<W> Search<W> {
    pub fn is_witness(&self) -> bool {
        matches!(self, Search::Witness { .. })
    }

    pub fn witness(&self) -> Option<(usize, &W)> {
        match self {
            Search::Witness { stage, witness } => Some((*stage, witness)),
            Search::NotFound { .. } => None,
        }
    }
}

/// Halfspace sides reported by the M-checks, as carrier positions of the
/// witnessing stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfspaceWitness {
    pub sides: Vec<Vec<usize>>,
}

impl HalfspaceWitness {
    fn new(sets: &[&Bits]) -> Self {
        HalfspaceWitness {
            sides: sets.iter().map(|s| s.ones_iter().collect()).collect(),
        }
    }
}

/// Given `f: K ↠ stages[α]`, the least `β > α` and the first
/// `g: stages[β] ↠ K` with `f ∘ g = p_α^β`.
pub fn check_extension_property(
    seq: &InverseSequence,
    k: &Arc<MedianAlgebra>,
    f: &Epimorphism,
    alpha: usize,
) -> Result<Search<Epimorphism>> {
    let base = seq.stage(alpha)?;
    if **f.source() != **k || **f.target() != **base {
        return Err(Error::TypeMismatch(format!(
            "the map must run from K onto stage {alpha}"
        )));
    }
    for beta in alpha + 1..seq.len() {
        let p = seq.composite_projection(alpha, beta)?;
        let lifter = Lifter::new(seq.stages()[beta].clone());
        if let Some(g) = lifter.liftings(f, p.map(), 1)?.into_iter().next() {
            let g = Epimorphism::unchecked(seq.stages()[beta].clone(), k.clone(), g);
            debug_assert!(g.map().iter().zip(p.map()).all(|(&y, &z)| f.apply(y) == z));
            return Ok(Search::Witness {
                stage: beta,
                witness: g,
            });
        }
    }
    Ok(Search::NotFound {
        from: alpha + 1,
        to: seq.len().saturating_sub(1),
    })
}

fn require_halfspace(alg: &MedianAlgebra, side1: &Bits, what: &str) -> Result<()> {
    if side1.len() != alg.len() || !alg.is_convex_fast(side1) || !alg.is_convex_fast(&side1.not()) {
        return Err(Error::NotAHalfspace(what.into()));
    }
    Ok(())
}

fn proper_sides(alg: &MedianAlgebra) -> Vec<Bits> {
    oriented_halfspaces(alg)
        .into_iter()
        .map(|h| h.side1().members().clone())
        .collect()
}

/// M1: for halfspaces `𝒜`, `ℬ` of stage `α` with every member of `𝒜`
/// disjoint from every member of `ℬ`, a halfspace `C` of some stage
/// `β ≥ α` containing the pulled-back `⋃𝒜` and missing the pulled-back `⋃ℬ`.
/// Candidates per stage: `∅`, the proper halfspaces, the whole carrier.
pub fn check_m1(
    seq: &InverseSequence,
    alpha: usize,
    a: &[Bits],
    b: &[Bits],
) -> Result<Search<HalfspaceWitness>> {
    let base = seq.stage(alpha)?;
    for (i, s) in a.iter().chain(b).enumerate() {
        require_halfspace(base, s, &format!("family member {i}"))?;
    }
    for x in a {
        for y in b {
            if x.intersects(y) {
                return Err(Error::NotDisjoint);
            }
        }
    }
    let union = |fam: &[Bits]| fam.iter().fold(base.empty_set(), |u, s| u.or(s));
    let (ua, ub) = (union(a), union(b));
    for beta in alpha..seq.len() {
        let p = seq.composite_projection(alpha, beta)?;
        let (pa, pb) = (p.preimage_of(&ua), p.preimage_of(&ub));
        let stage = &seq.stages()[beta];
        let candidates = std::iter::once(stage.empty_set())
            .chain(proper_sides(stage))
            .chain(std::iter::once(stage.full_set()));
        for c in candidates {
            if pa.is_subset(&c) && !pb.intersects(&c) {
                return Ok(Search::Witness {
                    stage: beta,
                    witness: HalfspaceWitness::new(&[&c]),
                });
            }
        }
    }
    Ok(Search::NotFound {
        from: alpha,
        to: seq.len() - 1,
    })
}

/// M2: for a linked family `𝒜` of halfspaces of stage `α`, a nonempty
/// halfspace of some stage `β ≥ α` inside the pulled-back `⋂𝒜`.
pub fn check_m2(
    seq: &InverseSequence,
    alpha: usize,
    a: &[Bits],
) -> Result<Search<HalfspaceWitness>> {
    let base = seq.stage(alpha)?;
    for (i, s) in a.iter().enumerate() {
        require_halfspace(base, s, &format!("family member {i}"))?;
    }
    for (i, x) in a.iter().enumerate() {
        for (j, y) in a.iter().enumerate().skip(i) {
            if !x.intersects(y) {
                return Err(Error::NotLinked {
                    first: i,
                    second: j,
                });
            }
        }
    }
    let meet = a.iter().fold(base.full_set(), |m, s| m.and(s));
    for beta in alpha..seq.len() {
        let p = seq.composite_projection(alpha, beta)?;
        let pm = p.preimage_of(&meet);
        let stage = &seq.stages()[beta];
        for c in proper_sides(stage)
            .into_iter()
            .chain(std::iter::once(stage.full_set()))
        {
            if c.is_subset(&pm) {
                return Ok(Search::Witness {
                    stage: beta,
                    witness: HalfspaceWitness::new(&[&c]),
                });
            }
        }
    }
    Ok(Search::NotFound {
        from: alpha,
        to: seq.len() - 1,
    })
}

/// M3: for a proper halfspace `A` of stage `α`, two disjoint nonempty
/// halfspaces of some stage `β ≥ α` inside the pulled-back `A`.
pub fn check_m3(seq: &InverseSequence, alpha: usize, a: &Bits) -> Result<Search<HalfspaceWitness>> {
    let base = seq.stage(alpha)?;
    require_halfspace(base, a, "A")?;
    if a.none() || a.all() {
        return Err(Error::EmptySide("A is not a proper halfspace".into()));
    }
    for beta in alpha..seq.len() {
        let p = seq.composite_projection(alpha, beta)?;
        let pa = p.preimage_of(a);
        let inside: Vec<Bits> = proper_sides(&seq.stages()[beta])
            .into_iter()
            .filter(|s| s.is_subset(&pa))
            .collect();
        for (i, b0) in inside.iter().enumerate() {
            if let Some(b1) = inside[i + 1..].iter().find(|b1| !b0.intersects(b1)) {
                return Ok(Search::Witness {
                    stage: beta,
                    witness: HalfspaceWitness::new(&[b0, b1]),
                });
            }
        }
    }
    Ok(Search::NotFound {
        from: alpha,
        to: seq.len() - 1,
    })
}

/// A halfspace `H` of `h.source()` with `h[H] = E` and `h[L ∖ H] = F`, or
/// with the roles of `E` and `F` exchanged; returned as `(side1, swapped)`.
pub fn lift_cover(h: &Epimorphism, e: &Bits, f: &Bits) -> Option<(Bits, bool)> {
    let sides = proper_sides(h.source());
    for (target_in, target_out, swapped) in [(e, f, false), (f, e, true)] {
        for side in &sides {
            if h.image_of(side) == *target_in && h.image_of(&side.not()) == *target_out {
                return Some((side.clone(), swapped));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraisse::build_fraisse;

    #[test]
    fn extension_from_two_points() {
        let seq = build_fraisse(2, 2).unwrap();
        let two = Arc::new(MedianAlgebra::chain(2));
        let f = Epimorphism::to_point(two.clone());
        let f = Epimorphism::new(two.clone(), seq.stages()[0].clone(), f.map().to_vec()).unwrap();
        let out = check_extension_property(&seq, &two, &f, 0).unwrap();
        assert_eq!(out.witness().unwrap().0, 1);
    }

    #[test]
    fn extension_identity_uses_the_next_stage() {
        let seq = build_fraisse(3, 3).unwrap();
        let k = seq.stages()[1].clone();
        let id = Epimorphism::identity(k.clone());
        match check_extension_property(&seq, &k, &id, 1).unwrap() {
            Search::Witness { stage, witness } => {
                assert_eq!(stage, 2);
                assert_eq!(witness.map(), seq.bonds()[1].map());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn m_checks_on_a_single_wall() {
        let seq = build_fraisse(2, 2).unwrap();
        let stage = seq.stages()[1].clone();
        let side0 = Bits::from_indices(2, [0]);
        let side1 = Bits::from_indices(2, [1]);
        let m1 = check_m1(
            &seq,
            1,
            std::slice::from_ref(&side0),
            std::slice::from_ref(&side1),
        )
        .unwrap();
        assert_eq!(
            m1.witness().unwrap(),
            (
                1,
                &HalfspaceWitness {
                    sides: vec![vec![0]]
                }
            )
        );
        let m2 = check_m2(&seq, 1, &[stage.full_set()]).unwrap();
        assert_eq!(m2.witness().unwrap().0, 1);
        assert!(matches!(
            check_m2(&seq, 1, &[side0.clone(), side1.clone()]),
            Err(Error::NotLinked { .. })
        ));
        assert!(matches!(
            check_m1(
                &seq,
                1,
                std::slice::from_ref(&side0),
                std::slice::from_ref(&side0)
            ),
            Err(Error::NotDisjoint)
        ));
        // a single point cannot hold two disjoint halfspaces
        assert!(!check_m3(&seq, 1, &side0).unwrap().is_witness());
    }

    #[test]
    fn m2_on_the_point_returns_the_carrier() {
        let seq = build_fraisse(1, 2).unwrap();
        let out = check_m2(&seq, 0, &[Bits::ones(1)]).unwrap();
        assert_eq!(
            out.witness().unwrap(),
            (
                0,
                &HalfspaceWitness {
                    sides: vec![vec![0]]
                }
            )
        );
    }
}
