use std::sync::Arc;

use crate::error::{Error, Result, Side};
use crate::morphism::{compose, Epimorphism};

use super::checks::{check_extension_property, Search};
use super::sequence::InverseSequence;

/// Alternating maps between two sequences.
///
/// `j[k]: Q[betas[k]] ↠ P[alphas[k]]` for `k ≤ depth` and
/// `h[k - 1]: P[alphas[k]] ↠ Q[betas[k - 1]]` for `1 ≤ k ≤ depth`, with
/// `j[k-1] ∘ h[k-1]` and `h[k-1] ∘ j[k]` equal to the composite bonds.
#[derive(Clone, Debug)]
pub struct Interleaving {
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
    pub h: Vec<Epimorphism>,
    pub j: Vec<Epimorphism>,
    pub depth: usize,
}

impl Interleaving {
    /// First triangle that fails to commute, as `(round, side)`.
    pub fn broken_triangle(
        &self,
        p: &InverseSequence,
        q: &InverseSequence,
    ) -> Result<Option<(usize, Side)>> {
        for k in 1..=self.depth {
            let hk = &self.h[k - 1];
            let forth = compose(&self.j[k - 1], hk)?;
            if forth != p.composite_projection(self.alphas[k - 1], self.alphas[k])? {
                return Ok(Some((k, Side::P)));
            }
            let back = compose(hk, &self.j[k])?;
            if back != q.composite_projection(self.betas[k - 1], self.betas[k])? {
                return Ok(Some((k, Side::Q)));
            }
        }
        Ok(None)
    }
}

/// Forth step: lift `j_k` through `P`; back step: lift `h_{k+1}` through
/// `Q`. Each step takes the least later stage and the first lifting. Runs
/// until `P` has no stage left for a forth step.
pub fn back_and_forth(p: &InverseSequence, q: &InverseSequence) -> Result<Interleaving> {
    let (p0, q0) = (p.stage(0)?, q.stage(0)?);
    if p0.len() != 1 || q0.len() != 1 {
        return Err(Error::InvalidArgument(
            "both sequences must start at the one-point algebra".into(),
        ));
    }
    let j0 = Epimorphism::new(q0.clone(), p0.clone(), vec![0])?;
    let mut out = Interleaving {
        alphas: vec![0],
        betas: vec![0],
        h: Vec::new(),
        j: vec![j0],
        depth: 0,
    };

    loop {
        let (alpha, beta) = (*out.alphas.last().unwrap(), *out.betas.last().unwrap());
        if alpha + 1 >= p.len() {
            break;
        }
        let jk = out.j.last().unwrap();
        let (next_alpha, hk) = match check_extension_property(p, jk.source(), jk, alpha)? {
            Search::Witness { stage, witness } => (stage, witness),
            Search::NotFound { .. } => {
                return Err(Error::Stuck {
                    side: Side::P,
                    stage: alpha,
                    depth: out.depth,
                })
            }
        };
        let back = if beta + 1 < q.len() {
            check_extension_property(q, &Arc::clone(hk.source()), &hk, beta)?
        } else {
            Search::NotFound {
                from: beta + 1,
                to: beta,
            }
        };
        let (next_beta, jk1) = match back {
            Search::Witness { stage, witness } => (stage, witness),
            Search::NotFound { .. } => {
                return Err(Error::Stuck {
                    side: Side::Q,
                    stage: beta,
                    depth: out.depth,
                })
            }
        };
        out.alphas.push(next_alpha);
        out.betas.push(next_beta);
        out.h.push(hk);
        out.j.push(jk1);
        out.depth += 1;
    }

    if let Some((round, side)) = out.broken_triangle(p, q)? {
        return Err(Error::InternalInvariantViolation(format!(
            "triangle {round} on side {side} does not commute"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraisse::{build_fraisse, build_fraisse_with, BuildConfig, EnumerationOrder};

    #[test]
    fn against_itself_to_full_depth() {
        let seq = build_fraisse(3, 3).unwrap();
        let run = back_and_forth(&seq, &seq).unwrap();
        assert_eq!(run.depth, 2);
        assert_eq!(run.alphas, vec![0, 1, 2]);
        assert_eq!(run.betas, vec![0, 1, 2]);
        assert_eq!(run.broken_triangle(&seq, &seq).unwrap(), None);
    }

    #[test]
    fn one_level_q_gets_stuck() {
        let seq = build_fraisse(3, 2).unwrap();
        let short = seq.truncated(1);
        match back_and_forth(&seq, &short) {
            Err(Error::Stuck {
                side: Side::Q,
                stage: 0,
                depth: 0,
            }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn orders_interleave() {
        let config = |order| BuildConfig {
            levels: 3,
            size_bound: 2,
            cap: 4096,
            order,
        };
        let a = build_fraisse_with(&config(EnumerationOrder::Canonical)).unwrap();
        let b = build_fraisse_with(&config(EnumerationOrder::Reversed)).unwrap();
        let run = back_and_forth(&a, &b).unwrap();
        assert!(run.depth >= 2);
    }
}
