//! Isomorphism-class representatives of small median algebras.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::median::{canonicalize, MedianAlgebra};
use crate::morphism::{find_isomorphism, Epimorphism};

use super::split::{cover_pairs, split_raw};

/// Largest size accepted by [`Catalog::up_to`].
pub const CATALOG_BOUND: usize = 14;

/// Sorted distance profiles; equal for isomorphic algebras. Distances are
/// Hamming distances in the canonical embedding, where coordinates are
/// walls.
type Invariant = (usize, usize, Vec<Vec<usize>>);

fn invariant(canon: &MedianAlgebra) -> Invariant {
    let n = canon.len();
    let mut profiles: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            let mut d: Vec<usize> = (0..n)
                .map(|b| canon.point(a).xor(canon.point(b)).count_ones())
                .collect();
            d.sort_unstable();
            d
        })
        .collect();
    profiles.sort();
    (n, canon.dim(), profiles)
}

/// One canonical representative per isomorphism class of median algebras
/// with at most `max_points` points, ordered by size and then by carrier.
#[derive(Clone, Debug)]
pub struct Catalog {
    max_points: usize,
    algebras: Vec<Arc<MedianAlgebra>>,
    /// Every canonical form met so far, with its class.
    forms: HashMap<MedianAlgebra, usize>,
    buckets: HashMap<Invariant, Vec<usize>>,
}

impl Catalog {
    /// Every median algebra arises from the one-point algebra by iterated
    /// split extensions (collapsing one wall undoes a split), so closing
    /// under splits that stay within the size bound reaches every class.
    pub fn up_to(max_points: usize) -> Result<Self> {
        if max_points == 0 || max_points > CATALOG_BOUND {
            return Err(Error::BoundExceeded {
                what: "catalog size",
                size: max_points,
                bound: CATALOG_BOUND,
            });
        }
        let mut cat = Catalog {
            max_points,
            algebras: Vec::new(),
            forms: HashMap::new(),
            buckets: HashMap::new(),
        };
        cat.insert(MedianAlgebra::one_point());
        let mut next = 0;
        while next < cat.algebras.len() {
            let k = cat.algebras[next].clone();
            next += 1;
            let room = max_points - k.len();
            if room == 0 {
                continue;
            }
            for (a, b) in cover_pairs(&k, room) {
                let (raw, _) = split_raw(&k, &a, &b);
                cat.insert(canonicalize(&raw).0);
            }
        }
        cat.reorder();
        Ok(cat)
    }

    fn insert(&mut self, canon: MedianAlgebra) {
        if self.forms.contains_key(&canon) {
            return;
        }
        let key = invariant(&canon);
        let candidate = Arc::new(canon.clone());
        let bucket = self.buckets.entry(key).or_default();
        for &id in bucket.iter() {
            if find_isomorphism(&candidate, &self.algebras[id]).is_some() {
                self.forms.insert(canon, id);
                return;
            }
        }
        let id = self.algebras.len();
        bucket.push(id);
        self.algebras.push(candidate);
        self.forms.insert(canon, id);
    }

    fn reorder(&mut self) {
        let mut order: Vec<usize> = (0..self.algebras.len()).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (&self.algebras[i], &self.algebras[j]);
            (a.len(), a.dim(), a.points()).cmp(&(b.len(), b.dim(), b.points()))
        });
        let mut new_id = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        self.algebras = order.iter().map(|&i| self.algebras[i].clone()).collect();
        for id in self.forms.values_mut() {
            *id = new_id[*id];
        }
        for ids in self.buckets.values_mut() {
            for id in ids.iter_mut() {
                *id = new_id[*id];
            }
        }
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    pub fn algebras(&self) -> &[Arc<MedianAlgebra>] {
        &self.algebras
    }

    pub fn get(&self, id: usize) -> &Arc<MedianAlgebra> {
        &self.algebras[id]
    }

    pub fn len(&self) -> usize {
        self.algebras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty()
    }

    /// Representatives with at most `n` points.
    pub fn up_to_size(&self, n: usize) -> impl Iterator<Item = (usize, &Arc<MedianAlgebra>)> {
        self.algebras
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.len() <= n)
    }

    /// The class of `alg` and an isomorphism from `alg` onto its
    /// representative, or `None` if `alg` is too large.
    pub fn identify(&self, alg: &Arc<MedianAlgebra>) -> Option<(usize, Epimorphism)> {
        if alg.len() > self.max_points {
            return None;
        }
        let (canon, _) = canonicalize(alg);
        let id = match self.forms.get(&canon) {
            Some(&id) => id,
            None => {
                let bucket = self.buckets.get(&invariant(&canon))?;
                let canon = Arc::new(canon);
                *bucket
                    .iter()
                    .find(|&&id| find_isomorphism(&canon, &self.algebras[id]).is_some())?
            }
        };
        Some((
            id,
            find_isomorphism(alg, &self.algebras[id]).expect("same class"),
        ))
    }
}
