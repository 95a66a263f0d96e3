//! Size-bounded saturation steps and the approximation sequences built
//! from them.
//!
//! A saturation step over `K` produces `h: L ↠ K` such that every lifting
//! problem `(M, N, p, f)` with `p: K ↠ M`, `f: N ↠ M` and `|N|` within the
//! bound has a solution `q: L ↠ N` with `p ∘ h = f ∘ q`. Problems are taken
//! up to isomorphism and solved one after another on a growing tower over
//! `K`: first by searching the current top of the tower for `q`, and
//! otherwise by factoring `f` into single-wall steps and pulling back each
//! step the current top cannot already absorb.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::median::{canonicalize, halfspaces, oriented_halfspaces, quotient_map, MedianAlgebra};
use crate::morphism::{
    automorphisms, check_epimorphism, enumerate_epi_maps, epis_by_walls, orbit_representatives,
    Epimorphism, Lifter,
};

use super::catalog::Catalog;
use super::sequence::{InverseSequence, Provenance};
use super::split::split_raw;

/// Default per-stage point cap.
pub const DEFAULT_CAP: usize = 4096;
/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "MEDIAN_FRAISSE_CAP";
/// Largest size bound accepted.
pub const MAX_SIZE_BOUND: usize = 6;

/// The cap from [`CAP_ENV`] if set and valid, else [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_CAP)
}

/// Order in which lifting problems are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationOrder {
    /// Ascending by `(|M|, |N|, class of M, class of N, p, f)`.
    #[default]
    Canonical,
    /// The canonical list backwards.
    Reversed,
}

impl std::str::FromStr for EnumerationOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(EnumerationOrder::Canonical),
            "reversed" => Ok(EnumerationOrder::Reversed),
            other => Err(Error::InvalidArgument(format!(
                "unknown enumeration order {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for EnumerationOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EnumerationOrder::Canonical => "canonical",
            EnumerationOrder::Reversed => "reversed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationConfig {
    pub size_bound: usize,
    pub cap: usize,
    pub order: EnumerationOrder,
}

impl SaturationConfig {
    pub fn new(size_bound: usize) -> Self {
        SaturationConfig {
            size_bound,
            cap: default_cap(),
            order: EnumerationOrder::Canonical,
        }
    }
}

/// One resolved lifting problem. `m` and `n` are catalog classes, `walls`
/// lists the walls of `K` (positions in its halfspace list) whose quotient
/// is `M`, and `q` is the witness on the final stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub m: usize,
    pub n: usize,
    pub walls: Vec<usize>,
    pub p: Vec<usize>,
    pub f: Vec<usize>,
    /// Split extensions this problem added to the tower.
    pub splits: usize,
    pub q: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub size_bound: usize,
    pub entries: Vec<CertificateEntry>,
}

/// Result of [`saturation_step`].
#[derive(Clone, Debug)]
pub struct Saturation {
    pub algebra: Arc<MedianAlgebra>,
    pub bond: Epimorphism,
    pub certificate: Certificate,
    pub provenance: Provenance,
}

struct Problem {
    m: usize,
    n: usize,
    walls: Vec<usize>,
    p: Vec<usize>,
    f: Vec<usize>,
}

/// Lifting problems over `k`, one per isomorphism class of
/// `(M, p)` and orbit of `f` under automorphisms of `N`.
///
/// Every epimorphism out of `k` is, up to an isomorphism of its target, the
/// quotient by the walls it pulls back; automorphisms of `M` are absorbed
/// by letting `f` range over all epimorphisms onto `M`, and automorphisms
/// of `N` by precomposing a witness.
fn problems(k: &MedianAlgebra, catalog: &Catalog, bound: usize) -> Vec<Problem> {
    let walls: Vec<Bits> = halfspaces(k)
        .into_iter()
        .map(|h| h.side1().members().clone())
        .collect();
    let mut fs: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    let mut out = Vec::new();

    // depth-first over wall subsets; the class count only grows, so a
    // branch stops once it exceeds the bound
    fn visit(
        walls: &[Bits],
        start: usize,
        labels: &[u64],
        chosen: &mut Vec<usize>,
        found: &mut Vec<(Vec<usize>, usize)>,
        bound: usize,
    ) {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() > bound {
            return;
        }
        found.push((chosen.clone(), sorted.len()));
        for w in start..walls.len() {
            let next: Vec<u64> = labels
                .iter()
                .enumerate()
                .map(|(x, &l)| l << 1 | u64::from(walls[w].get(x)))
                .collect();
            chosen.push(w);
            visit(walls, w + 1, &next, chosen, found, bound);
            chosen.pop();
        }
    }
    let mut found = Vec::new();
    visit(
        &walls,
        0,
        &vec![0; k.len()],
        &mut Vec::new(),
        &mut found,
        bound,
    );

    for (subset, _) in found {
        let sides: Vec<&Bits> = subset.iter().map(|&w| &walls[w]).collect();
        let (quot, qmap) = quotient_map(k.len(), &sides);
        let (m_id, iso) = catalog
            .identify(&Arc::new(quot))
            .expect("quotient within catalog bound");
        let p: Vec<usize> = qmap.iter().map(|&y| iso.apply(y)).collect();
        let m_alg = catalog.get(m_id);
        for (n_id, n_alg) in catalog.up_to_size(bound) {
            if n_alg.len() < m_alg.len() {
                continue;
            }
            let reps = fs.entry((m_id, n_id)).or_insert_with(|| {
                orbit_representatives(&enumerate_epi_maps(n_alg, m_alg), &automorphisms(n_alg))
            });
            for f in reps.iter() {
                out.push(Problem {
                    m: m_id,
                    n: n_id,
                    walls: subset.clone(),
                    p: p.clone(),
                    f: f.clone(),
                });
            }
        }
    }
    out.sort_by(|a, b| {
        let ka = (
            catalog.get(a.m).len(),
            catalog.get(a.n).len(),
            a.m,
            a.n,
            &a.p,
            &a.f,
        );
        let kb = (
            catalog.get(b.m).len(),
            catalog.get(b.n).len(),
            b.m,
            b.n,
            &b.p,
            &b.f,
        );
        ka.cmp(&kb)
    });
    out
}

/// The growing tower over `K`: its current top `C` with `h: C → K`, and the
/// witnesses found so far, all kept on `C`.
struct Tower {
    top: MedianAlgebra,
    h: Vec<usize>,
    witnesses: Vec<Vec<usize>>,
    splits: usize,
    cap: usize,
    stage: usize,
}

impl Tower {
    /// Replaces the top by its split over `(a, b)`; returns the new top's
    /// projection and the positions on the new side.
    fn split(&mut self, a: &Bits, b: &Bits) -> Result<(Vec<usize>, Bits)> {
        let (next, proj) = split_raw(&self.top, a, b);
        if next.len() > self.cap {
            return Err(Error::ResourceLimit {
                stage: self.stage,
                size: next.len(),
                cap: self.cap,
            });
        }
        let last = next.dim() - 1;
        let new_side = next.coordinate_trace(last);
        self.h = proj.iter().map(|&x| self.h[x]).collect();
        for w in &mut self.witnesses {
            *w = proj.iter().map(|&x| w[x]).collect();
        }
        self.top = next;
        self.splits += 1;
        Ok((proj, new_side))
    }
}

/// Solves one problem by factoring `f: N ↠ M` through single-wall steps.
///
/// The walls of `N` not pulled back from `M` are added one at a time. The
/// current map `g` from the top of the tower onto the partial quotient of
/// `N` is kept as a class label per point; classes are subsets of `N`. For
/// each added wall the classes meeting side 0 form `E` and those meeting
/// side 1 form `F`, so the next partial quotient is the split of the
/// current one over `(E, F)`. If some halfspace `H` of the top has
/// `g[H] = F` and `g[top ∖ H] = E` it extends `g` directly; otherwise the
/// top is split over `(g⁻¹E, g⁻¹F)`, which is the pullback of that step.
fn resolve_by_splits(
    tower: &mut Tower,
    n_alg: &MedianAlgebra,
    f: &[usize],
    p: &[usize],
) -> Result<Vec<usize>> {
    let nn = n_alg.len();
    // classes: fibres of f, labelled by the point of M they lie over
    let m_len = f.iter().copied().max().unwrap_or(0) + 1;
    let mut classes: Vec<u64> = (0..m_len)
        .map(|m| (0..nn).filter(|&y| f[y] == m).fold(0u64, |s, y| s | 1 << y))
        .collect();
    let mut g: Vec<usize> = tower.h.iter().map(|&x| p[x]).collect();

    for j in 0..n_alg.dim() {
        let side1 = (0..nn)
            .filter(|&y| n_alg.point(y).get(j))
            .fold(0u64, |s, y| s | 1 << y);
        // pulled back from M when no class meets both sides
        if classes.iter().all(|&c| c & side1 == 0 || c & !side1 == 0) {
            continue;
        }
        let mut next_classes = Vec::new();
        let mut ids = vec![[usize::MAX; 2]; classes.len()];
        for (c, &cls) in classes.iter().enumerate() {
            for (bit, part) in [(0, cls & !side1), (1, cls & side1)] {
                if part != 0 {
                    ids[c][bit] = next_classes.len();
                    next_classes.push(part);
                }
            }
        }
        let in_e = |c: usize| ids[c][0] != usize::MAX;
        let in_f = |c: usize| ids[c][1] != usize::MAX;
        let top_len = tower.top.len();

        let mut chosen: Option<Bits> = None;
        'sides: for side in oriented_sides(&tower.top) {
            let mut hit = vec![[false; 2]; classes.len()];
            for (x, &c) in g.iter().enumerate().take(top_len) {
                let s = side.get(x);
                if (s && !in_f(c)) || (!s && !in_e(c)) {
                    continue 'sides;
                }
                hit[c][usize::from(s)] = true;
            }
            if (0..classes.len()).all(|c| hit[c][0] == in_e(c) && hit[c][1] == in_f(c)) {
                chosen = Some(side);
                break;
            }
        }
        let side = match chosen {
            Some(s) => s,
            None => {
                let a = Bits::from_bools(g.iter().map(|&c| in_e(c)));
                let b = Bits::from_bools(g.iter().map(|&c| in_f(c)));
                let (proj, new_side) = tower.split(&a, &b)?;
                g = proj.iter().map(|&x| g[x]).collect();
                new_side
            }
        };
        g = g
            .iter()
            .enumerate()
            .map(|(x, &c)| ids[c][usize::from(side.get(x))])
            .collect();
        classes = next_classes;
    }
    debug_assert!(classes.iter().all(|c| c.count_ones() == 1));
    Ok(g.iter()
        .map(|&c| classes[c].trailing_zeros() as usize)
        .collect())
}

fn oriented_sides(alg: &MedianAlgebra) -> Vec<Bits> {
    oriented_halfspaces(alg)
        .into_iter()
        .map(|h| h.side1().members().clone())
        .collect()
}

/// One saturation step over `k` with a freshly built catalog.
pub fn saturation_step(k: &Arc<MedianAlgebra>, size_bound: usize) -> Result<Saturation> {
    check_bound(size_bound)?;
    let catalog = Catalog::up_to(size_bound)?;
    saturation_step_with(k, &catalog, &SaturationConfig::new(size_bound), 1)
}

fn check_bound(size_bound: usize) -> Result<()> {
    if size_bound == 0 || size_bound > MAX_SIZE_BOUND {
        return Err(Error::BoundExceeded {
            what: "size bound",
            size: size_bound,
            bound: MAX_SIZE_BOUND,
        });
    }
    Ok(())
}

/// One saturation step; `stage` labels resource-limit reports.
pub fn saturation_step_with(
    k: &Arc<MedianAlgebra>,
    catalog: &Catalog,
    config: &SaturationConfig,
    stage: usize,
) -> Result<Saturation> {
    let bound = config.size_bound;
    check_bound(bound)?;
    if catalog.max_points() < bound {
        return Err(Error::InvalidArgument(
            "catalog smaller than the size bound".into(),
        ));
    }
    if k.len() > config.cap {
        return Err(Error::ResourceLimit {
            stage,
            size: k.len(),
            cap: config.cap,
        });
    }
    let mut problems = problems(k, catalog, bound);
    if config.order == EnumerationOrder::Reversed {
        problems.reverse();
    }

    let mut tower = Tower {
        top: (**k).clone(),
        h: (0..k.len()).collect(),
        witnesses: Vec::with_capacity(problems.len()),
        splits: 0,
        cap: config.cap,
        stage,
    };
    let mut split_counts = Vec::with_capacity(problems.len());
    let mut lifter = Lifter::new(Arc::new(tower.top.clone()));
    let mut lifter_splits = 0;
    for prob in &problems {
        let n_alg = catalog.get(prob.n);
        if lifter_splits != tower.splits {
            lifter = Lifter::new(Arc::new(tower.top.clone()));
            lifter_splits = tower.splits;
        }
        let g: Vec<usize> = tower.h.iter().map(|&x| prob.p[x]).collect();
        let direct = lifter.maps(n_alg, |x, y| prob.f[y] == g[x], 1)?;
        let before = tower.splits;
        let q = match direct.into_iter().next() {
            Some(q) => q,
            None => resolve_by_splits(&mut tower, n_alg, &prob.f, &prob.p)?,
        };
        split_counts.push(tower.splits - before);
        tower.witnesses.push(q);
    }

    let (canon, relabel) = canonicalize(&tower.top);
    let l = Arc::new(canon);
    let reorder = |v: &[usize]| {
        let mut out = vec![0; v.len()];
        for (old, &val) in v.iter().enumerate() {
            out[relabel[old]] = val;
        }
        out
    };
    let h_map = reorder(&tower.h);
    check_epimorphism(&l, k, &h_map)
        .map_err(|e| Error::InternalInvariantViolation(format!("saturation bond: {e}")))?;
    let bond = Epimorphism::unchecked(l.clone(), k.clone(), h_map);

    let mut entries = Vec::with_capacity(problems.len());
    for ((prob, q), splits) in problems.into_iter().zip(&tower.witnesses).zip(split_counts) {
        let q = reorder(q);
        let n_alg = catalog.get(prob.n);
        check_epimorphism(&l, n_alg, &q)
            .map_err(|e| Error::InternalInvariantViolation(format!("saturation witness: {e}")))?;
        if (0..l.len()).any(|x| prob.f[q[x]] != prob.p[bond.apply(x)]) {
            return Err(Error::InternalInvariantViolation(
                "saturation witness does not commute".into(),
            ));
        }
        entries.push(CertificateEntry {
            m: prob.m,
            n: prob.n,
            walls: prob.walls,
            p: prob.p,
            f: prob.f,
            splits,
            q,
        });
    }
    let extended = entries.iter().filter(|e| e.splits > 0).count();
    let provenance = Provenance::Saturation {
        size_bound: bound,
        order: config.order,
        tuples: entries.len(),
        extended,
        splits: tower.splits,
    };
    Ok(Saturation {
        algebra: l,
        bond,
        certificate: Certificate {
            size_bound: bound,
            entries,
        },
        provenance,
    })
}

/// Parameters of [`build_fraisse`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub levels: usize,
    pub size_bound: usize,
    pub cap: usize,
    pub order: EnumerationOrder,
}

impl BuildConfig {
    pub fn new(levels: usize, size_bound: usize) -> Self {
        BuildConfig {
            levels,
            size_bound,
            cap: default_cap(),
            order: EnumerationOrder::Canonical,
        }
    }
}

/// Stage 0 is the one-point algebra; each later stage saturates the one
/// before it.
pub fn build_fraisse(levels: usize, size_bound: usize) -> Result<InverseSequence> {
    build_fraisse_with(&BuildConfig::new(levels, size_bound))
}

pub fn build_fraisse_with(config: &BuildConfig) -> Result<InverseSequence> {
    if config.levels == 0 {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    check_bound(config.size_bound)?;
    let catalog = Catalog::up_to(config.size_bound)?;
    let sat_config = SaturationConfig {
        size_bound: config.size_bound,
        cap: config.cap,
        order: config.order,
    };
    let mut stages = vec![Arc::new(MedianAlgebra::one_point())];
    let mut bonds = Vec::new();
    let mut provenance = vec![Provenance::Base];
    let mut certificates = vec![None];
    for stage in 1..config.levels {
        let sat = saturation_step_with(&stages[stage - 1], &catalog, &sat_config, stage)?;
        stages.push(sat.algebra);
        bonds.push(sat.bond.clone());
        provenance.push(sat.provenance);
        certificates.push(Some(sat.certificate));
    }
    Ok(InverseSequence::from_parts(
        stages,
        bonds,
        provenance,
        certificates,
    ))
}

/// Outcome of [`sweep_saturation`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub tuples: usize,
    /// `(M class, N class, p, f)` for every problem without a lifting.
    pub gaps: Vec<(usize, usize, Vec<usize>, Vec<usize>)>,
}

/// Independent check of a saturation bond `h: L ↠ K`: every epimorphism
/// `p` from `K` onto every class `M` within the bound and every `f: N ↠ M`
/// with `|N|` within the bound, representatives or not, must admit some
/// `q: L ↠ N` with `f ∘ q = p ∘ h`.
pub fn sweep_saturation(
    h: &Epimorphism,
    catalog: &Catalog,
    size_bound: usize,
) -> Result<SweepReport> {
    let (l, k) = (h.source(), h.target());
    let lifter = Lifter::new(l.clone());
    let mut report = SweepReport::default();
    for (m_id, m_alg) in catalog.up_to_size(size_bound) {
        let ps = epis_by_walls(k, m_alg)?;
        for (n_id, n_alg) in catalog.up_to_size(size_bound) {
            if n_alg.len() < m_alg.len() {
                continue;
            }
            let fs = enumerate_epi_maps(n_alg, m_alg);
            for p in &ps {
                let g: Vec<usize> = h.map().iter().map(|&x| p.apply(x)).collect();
                for f in &fs {
                    report.tuples += 1;
                    if lifter.maps(n_alg, |x, y| f[y] == g[x], 1)?.is_empty() {
                        report.gaps.push((m_id, n_id, p.map().to_vec(), f.clone()));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Re-checks every certificate entry of a step against its bond.
pub fn verify_certificate(
    h: &Epimorphism,
    certificate: &Certificate,
    catalog: &Catalog,
) -> Result<()> {
    let l = h.source();
    for (i, e) in certificate.entries.iter().enumerate() {
        if e.n >= catalog.len() || e.m >= catalog.len() {
            return Err(Error::InvalidArgument(format!(
                "certificate entry {i} names an unknown class"
            )));
        }
        let n_alg = catalog.get(e.n);
        check_epimorphism(l, n_alg, &e.q)?;
        check_epimorphism(h.target(), catalog.get(e.m), &e.p)?;
        check_epimorphism(n_alg, catalog.get(e.m), &e.f)?;
        if (0..l.len()).any(|x| e.f[e.q[x]] != e.p[h.apply(x)]) {
            return Err(Error::InternalInvariantViolation(format!(
                "certificate entry {i} does not commute"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_with_bound_one() {
        let one = Arc::new(MedianAlgebra::one_point());
        let sat = saturation_step(&one, 1).unwrap();
        assert_eq!(*sat.algebra, MedianAlgebra::one_point());
        // the single problem (point, point) is trivially solved
        assert!(sat.certificate.entries.iter().all(|e| e.splits == 0));
    }

    #[test]
    fn point_with_bound_two() {
        let one = Arc::new(MedianAlgebra::one_point());
        let sat = saturation_step(&one, 2).unwrap();
        assert!(sat.algebra.len() >= 2);
        let cat = Catalog::up_to(2).unwrap();
        assert!(sweep_saturation(&sat.bond, &cat, 2)
            .unwrap()
            .gaps
            .is_empty());
    }

    #[test]
    fn two_points_with_bound_two() {
        let two = Arc::new(MedianAlgebra::chain(2));
        let sat = saturation_step(&two, 2).unwrap();
        let cat = Catalog::up_to(2).unwrap();
        verify_certificate(&sat.bond, &sat.certificate, &cat).unwrap();
        let classes: Vec<(usize, usize)> = sat
            .certificate
            .entries
            .iter()
            .map(|e| (cat.get(e.m).len(), cat.get(e.n).len()))
            .collect();
        assert_eq!(classes, vec![(1, 1), (1, 2), (2, 2)]);
    }

    #[test]
    fn bound_three_tower() {
        let seq = build_fraisse(3, 3).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(*seq.stages()[1], MedianAlgebra::chain(3));
        let cat = Catalog::up_to(3).unwrap();
        for i in 0..2 {
            let report = sweep_saturation(&seq.bonds()[i], &cat, 3).unwrap();
            assert!(report.gaps.is_empty(), "stage {i}: {:?}", report.gaps);
        }
    }

    #[test]
    fn cap_is_reported() {
        let config = BuildConfig {
            levels: 2,
            size_bound: 2,
            cap: 1,
            order: EnumerationOrder::Canonical,
        };
        assert!(matches!(
            build_fraisse_with(&config),
            Err(Error::ResourceLimit { stage: 1, .. })
        ));
    }
}
