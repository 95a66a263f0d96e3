use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::median::MedianAlgebra;
use crate::morphism::{check_epimorphism, compose, Epimorphism};

use super::saturation::{Certificate, EnumerationOrder};

/// How a stage was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// The one-point algebra every sequence starts from.
    Base,
    /// A saturation step over the previous stage.
    Saturation {
        size_bound: usize,
        order: EnumerationOrder,
        /// Tuples resolved in this step.
        tuples: usize,
        /// Tuples that needed the tower to grow.
        extended: usize,
        /// Split extensions performed.
        splits: usize,
    },
    /// Anything else (sequences read from files or assembled by hand).
    External,
}

/// Stages with bonding epimorphisms `bonds[i]: stages[i + 1] ↠ stages[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSequence {
    stages: Vec<Arc<MedianAlgebra>>,
    bonds: Vec<Epimorphism>,
    provenance: Vec<Provenance>,
    certificates: Vec<Option<Certificate>>,
}

impl InverseSequence {
    /// Checks that every bond is an epimorphism between consecutive stages.
    pub fn new(
        stages: Vec<Arc<MedianAlgebra>>,
        bonds: Vec<Epimorphism>,
        provenance: Vec<Provenance>,
    ) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidArgument(
                "a sequence needs at least one stage".into(),
            ));
        }
        if bonds.len() + 1 != stages.len() || provenance.len() != stages.len() {
            return Err(Error::InvalidArgument(format!(
                "{} stages need {} bonds and provenance records, got {} and {}",
                stages.len(),
                stages.len() - 1,
                bonds.len(),
                provenance.len()
            )));
        }
        for (i, bond) in bonds.iter().enumerate() {
            if **bond.source() != *stages[i + 1] || **bond.target() != *stages[i] {
                return Err(Error::TypeMismatch(format!(
                    "bond {i} does not run from stage {} to stage {i}",
                    i + 1
                )));
            }
            check_epimorphism(&stages[i + 1], &stages[i], bond.map())?;
        }
        let certificates = vec![None; stages.len()];
        Ok(InverseSequence {
            stages,
            bonds,
            provenance,
            certificates,
        })
    }

    pub(crate) fn from_parts(
        stages: Vec<Arc<MedianAlgebra>>,
        bonds: Vec<Epimorphism>,
        provenance: Vec<Provenance>,
        certificates: Vec<Option<Certificate>>,
    ) -> Self {
        InverseSequence {
            stages,
            bonds,
            provenance,
            certificates,
        }
    }

    /// The first `levels` stages.
    pub fn truncated(&self, levels: usize) -> Self {
        let levels = levels.clamp(1, self.len());
        InverseSequence {
            stages: self.stages[..levels].to_vec(),
            bonds: self.bonds[..levels - 1].to_vec(),
            provenance: self.provenance[..levels].to_vec(),
            certificates: self.certificates[..levels].to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    /// Always false; a sequence has at least one stage.
    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stages(&self) -> &[Arc<MedianAlgebra>] {
        &self.stages
    }

    pub fn stage(&self, i: usize) -> Result<&Arc<MedianAlgebra>> {
        self.stages.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.len(),
        })
    }

    pub fn bonds(&self) -> &[Epimorphism] {
        &self.bonds
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Certificate of the saturation step that produced stage `i`, if any.
    pub fn certificate(&self, i: usize) -> Option<&Certificate> {
        self.certificates.get(i).and_then(Option::as_ref)
    }

    pub fn certificates(&self) -> &[Option<Certificate>] {
        &self.certificates
    }

    /// The size bound used to build the sequence, when all saturation steps
    /// agree on one.
    pub fn size_bound(&self) -> Option<usize> {
        let mut bound = None;
        for p in &self.provenance {
            if let Provenance::Saturation { size_bound, .. } = p {
                match bound {
                    None => bound = Some(*size_bound),
                    Some(b) if b != *size_bound => return None,
                    _ => {}
                }
            }
        }
        bound
    }

    /// `p_α^β: stages[β] ↠ stages[α]`, the identity when `α = β`.
    pub fn composite_projection(&self, alpha: usize, beta: usize) -> Result<Epimorphism> {
        if beta >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: beta,
                len: self.len(),
            });
        }
        if alpha > beta {
            return Err(Error::IndexOutOfRange {
                index: alpha,
                len: beta + 1,
            });
        }
        let mut p = Epimorphism::identity(self.stages[beta].clone());
        for i in (alpha..beta).rev() {
            p = compose(&self.bonds[i], &p)?;
        }
        Ok(p)
    }
}

/// `p_α^β` of `seq`.
pub fn composite_projection(
    seq: &InverseSequence,
    alpha: usize,
    beta: usize,
) -> Result<Epimorphism> {
    seq.composite_projection(alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower() -> InverseSequence {
        let one = Arc::new(MedianAlgebra::one_point());
        let two = Arc::new(MedianAlgebra::chain(2));
        let three = Arc::new(MedianAlgebra::chain(3));
        let b0 = Epimorphism::new(two.clone(), one.clone(), vec![0, 0]).unwrap();
        let b1 = Epimorphism::new(three.clone(), two.clone(), vec![0, 0, 1]).unwrap();
        InverseSequence::new(
            vec![one, two, three],
            vec![b0, b1],
            vec![Provenance::External; 3],
        )
        .unwrap()
    }

    #[test]
    fn composites() {
        let seq = tower();
        assert_eq!(seq.composite_projection(1, 1).unwrap().map(), &[0, 1]);
        assert_eq!(seq.composite_projection(0, 2).unwrap().map(), &[0, 0, 0]);
        let direct = compose(&seq.bonds()[0], &seq.bonds()[1]).unwrap();
        assert_eq!(seq.composite_projection(0, 2).unwrap(), direct);
        assert!(matches!(
            seq.composite_projection(0, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            seq.composite_projection(2, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_mismatched_bonds() {
        let seq = tower();
        let stages = seq.stages().to_vec();
        let bonds = vec![seq.bonds()[1].clone(), seq.bonds()[0].clone()];
        assert!(InverseSequence::new(stages, bonds, vec![Provenance::External; 3]).is_err());
    }

    #[test]
    fn truncation() {
        let seq = tower().truncated(2);
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.bonds().len(), 1);
    }
}
