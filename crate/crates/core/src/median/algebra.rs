use std::fmt;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Subset of carrier positions, one bit per carrier point.
pub type IndexSet = Bits;

/// A finite median-closed set of points of the hypercube `{0,1}^dim`.
///
/// The carrier is kept sorted in binary order, so carrier position 0 is
/// always the binary-least point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MedianAlgebra {
    dim: usize,
    points: Vec<Bits>,
    canonical: bool,
}

impl MedianAlgebra {
    /// Checks that `points` is a nonempty duplicate-free median-closed set of
    /// length-`dim` bitstrings and returns it as an algebra.
    pub fn validate(points: Vec<Bits>, dim: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    point: p.to_bitstring(),
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let mut points = points;
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].to_bitstring()));
        }
        let alg = MedianAlgebra {
            dim,
            points,
            canonical: false,
        };
        alg.check_closure()?;
        Ok(alg)
    }

    /// Parses bitstrings and validates them. The dimension is taken from the
    /// first string; `[""]` is the one-point algebra of dimension 0.
    pub fn from_bitstrings<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        let points = strings
            .iter()
            .map(|s| {
                Bits::parse(s.as_ref())
                    .ok_or_else(|| Error::Parse(format!("not a bitstring: {:?}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        let dim = points.first().map_or(0, Bits::len);
        Self::validate(points, dim)
    }

    /// Builds an algebra from points known to be median-closed. Duplicates
    /// are removed and the carrier is sorted.
    pub(crate) fn from_points_unchecked(dim: usize, mut points: Vec<Bits>) -> Self {
        points.sort();
        points.dedup();
        debug_assert!(!points.is_empty());
        debug_assert!(points.iter().all(|p| p.len() == dim));
        let alg = MedianAlgebra {
            dim,
            points,
            canonical: false,
        };
        debug_assert!(alg.len() > 40 || alg.check_closure().is_ok());
        alg
    }

    pub(crate) fn mark_canonical(mut self) -> Self {
        self.canonical = true;
        self
    }

    pub fn one_point() -> Self {
        MedianAlgebra {
            dim: 0,
            points: vec![Bits::zeros(0)],
            canonical: true,
        }
    }

    /// The `n`-point chain `0…0 < 0…01 < … < 1…1` in dimension `n - 1`.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        let dim = n - 1;
        let points = (0..n)
            .map(|k| Bits::from_indices(dim, dim - k..dim))
            .collect();
        MedianAlgebra {
            dim,
            points,
            canonical: true,
        }
    }

    /// The full hypercube `{0,1}^dim`.
    pub fn cube(dim: usize) -> Self {
        assert!(dim < 20, "cube too large");
        let points = (0..1usize << dim)
            .map(|v| Bits::from_bools((0..dim).map(|i| v >> (dim - 1 - i) & 1 == 1)))
            .collect();
        MedianAlgebra {
            dim,
            points,
            canonical: true,
        }
    }

    fn check_closure(&self) -> Result<()> {
        let n = self.points.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let m = Bits::majority(&self.points[i], &self.points[j], &self.points[k]);
                    if self.index_of(&m).is_none() {
                        return Err(Error::NotMedianClosed {
                            triple: [
                                self.points[i].to_bitstring(),
                                self.points[j].to_bitstring(),
                                self.points[k].to_bitstring(),
                            ],
                            majority: m.to_bitstring(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; carriers are nonempty.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    #[inline]
    pub fn points(&self) -> &[Bits] {
        &self.points
    }

    #[inline]
    pub fn point(&self, i: usize) -> &Bits {
        &self.points[i]
    }

    pub fn index_of(&self, p: &Bits) -> Option<usize> {
        if p.len() != self.dim {
            return None;
        }
        self.points.binary_search(p).ok()
    }

    fn require(&self, p: &Bits) -> Result<usize> {
        self.index_of(p)
            .ok_or_else(|| Error::PointNotInCarrier(p.to_bitstring()))
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    /// Same carrier and dimension; the canonical flag is ignored.
    pub fn same_carrier(&self, other: &MedianAlgebra) -> bool {
        self.dim == other.dim && self.points == other.points
    }

    /// Coordinatewise majority of three carrier points.
    pub fn median(&self, a: &Bits, b: &Bits, c: &Bits) -> Result<Bits> {
        self.require(a)?;
        self.require(b)?;
        self.require(c)?;
        Ok(Bits::majority(a, b, c))
    }

    /// Median by carrier position.
    pub fn median_index(&self, a: usize, b: usize, c: usize) -> usize {
        let m = Bits::majority(&self.points[a], &self.points[b], &self.points[c]);
        self.index_of(&m).expect("carrier is median-closed")
    }

    /// Full median table, `table[(a * n + b) * n + c]`.
    pub fn median_table(&self) -> Vec<usize> {
        let n = self.len();
        let mut t = vec![0; n * n * n];
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let m = self.median_index(a, b, c);
                    for (x, y, z) in [
                        (a, b, c),
                        (a, c, b),
                        (b, a, c),
                        (b, c, a),
                        (c, a, b),
                        (c, b, a),
                    ] {
                        t[(x * n + y) * n + z] = m;
                    }
                }
            }
        }
        t
    }

    pub fn empty_set(&self) -> IndexSet {
        Bits::zeros(self.len())
    }

    pub fn full_set(&self) -> IndexSet {
        Bits::ones(self.len())
    }

    /// `{x : median(a, b, x) = x}` by carrier position.
    pub fn interval(&self, a: usize, b: usize) -> ConvexSet {
        ConvexSet {
            members: self.interval_set(a, b),
        }
    }

    pub(crate) fn interval_set(&self, a: usize, b: usize) -> IndexSet {
        let (pa, pb) = (&self.points[a], &self.points[b]);
        let same = pa.xor(pb).not();
        Bits::from_bools(self.points.iter().map(|x| x.agrees_on(pa, &same)))
    }

    /// Interval between two points given as bitstrings.
    pub fn interval_of(&self, a: &Bits, b: &Bits) -> Result<ConvexSet> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        Ok(self.interval(i, j))
    }

    /// Least interval-closed superset, as the fixed point of pairwise
    /// interval closure.
    pub fn convex_hull(&self, set: &IndexSet) -> ConvexSet {
        let mut current = set.clone();
        let mut done: Vec<usize> = Vec::new();
        loop {
            let members: Vec<usize> = current.ones_iter().collect();
            let mut next = current.clone();
            for (ix, &a) in members.iter().enumerate() {
                for &b in &members[ix + 1..] {
                    if done.binary_search(&a).is_ok() && done.binary_search(&b).is_ok() {
                        continue;
                    }
                    next = next.or(&self.interval_set(a, b));
                }
            }
            if next == current {
                return ConvexSet { members: current };
            }
            done = members;
            current = next;
        }
    }

    /// Convexity straight from the definition: every interval between two
    /// members stays inside.
    pub fn is_convex(&self, set: &IndexSet) -> bool {
        let members: Vec<usize> = set.ones_iter().collect();
        for (ix, &a) in members.iter().enumerate() {
            for &b in &members[ix + 1..] {
                if !self.interval_set(a, b).is_subset(set) {
                    return false;
                }
            }
        }
        true
    }

    /// Convexity through the embedding: a set is convex iff it contains every
    /// carrier point that agrees with it on all coordinates constant over it.
    /// Linear in the carrier; agrees with [`Self::is_convex`].
    pub fn is_convex_fast(&self, set: &IndexSet) -> bool {
        let Some(first) = set.first_one() else {
            return true;
        };
        let mut all_one = Bits::ones(self.dim);
        let mut all_zero = Bits::ones(self.dim);
        for i in set.ones_iter() {
            all_one = all_one.and(&self.points[i]);
            all_zero = all_zero.and_not(&self.points[i]);
        }
        let fixed = all_one.or(&all_zero);
        let reference = &self.points[first];
        self.points
            .iter()
            .enumerate()
            .all(|(i, x)| set.get(i) || !x.agrees_on(reference, &fixed))
    }

    /// Positions whose coordinate `i` is 1.
    pub fn coordinate_trace(&self, i: usize) -> IndexSet {
        Bits::from_bools(self.points.iter().map(|p| p.get(i)))
    }

    /// Pairs `{a, b}` whose interval is exactly `{a, b}`: the edges of the
    /// median graph, in lexicographic order.
    pub fn median_graph_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.interval_set(a, b).count_ones() == 2 {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// Number of walls separating two points (median-graph distance).
    pub fn wall_distance(&self, a: usize, b: usize) -> usize {
        super::halfspace::halfspaces(self)
            .iter()
            .filter(|h| h.side1().contains(a) != h.side1().contains(b))
            .count()
    }
}

impl fmt::Display for MedianAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Interval-closed subset of some algebra's carrier. May be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvexSet {
    members: IndexSet,
}

impl ConvexSet {
    pub fn new(alg: &MedianAlgebra, members: IndexSet) -> Result<Self> {
        if members.len() != alg.len() {
            return Err(Error::InvalidArgument(format!(
                "subset has {} positions, carrier has {}",
                members.len(),
                alg.len()
            )));
        }
        if !alg.is_convex(&members) {
            return Err(Error::NotConvex(format!("{members:?}")));
        }
        Ok(ConvexSet { members })
    }

    pub fn from_indices(alg: &MedianAlgebra, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            alg.check_index(i)?;
        }
        Self::new(alg, Bits::from_indices(alg.len(), indices.iter().copied()))
    }

    pub(crate) fn unchecked(members: IndexSet) -> Self {
        ConvexSet { members }
    }

    pub fn members(&self) -> &IndexSet {
        &self.members
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.ones_iter().collect()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.members.none()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.get(i)
    }
}

/// A convex set together with its convex complement. `side1` is the
/// designated side; walls returned by [`super::halfspaces`] have the
/// binary-least carrier point in `side0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    side0: ConvexSet,
    side1: ConvexSet,
}

impl Halfspace {
    /// Builds the halfspace with the given `side1`, checking both sides.
    pub fn from_side1(alg: &MedianAlgebra, side1: IndexSet) -> Result<Self> {
        let side0 = side1.not();
        if !alg.is_convex(&side1) || !alg.is_convex(&side0) {
            return Err(Error::NotAHalfspace(format!("{side1:?}")));
        }
        Ok(Halfspace {
            side0: ConvexSet { members: side0 },
            side1: ConvexSet { members: side1 },
        })
    }

    pub(crate) fn from_side1_unchecked(side1: IndexSet) -> Self {
        Halfspace {
            side0: ConvexSet {
                members: side1.not(),
            },
            side1: ConvexSet { members: side1 },
        }
    }

    pub fn side0(&self) -> &ConvexSet {
        &self.side0
    }

    pub fn side1(&self) -> &ConvexSet {
        &self.side1
    }

    /// The same wall with sides exchanged.
    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            side0: self.side1.clone(),
            side1: self.side0.clone(),
        }
    }

    pub fn is_proper(&self) -> bool {
        !self.side0.is_empty() && !self.side1.is_empty()
    }

    /// True when the two sides are split differently by `x` and `y`.
    pub fn separates(&self, x: usize, y: usize) -> bool {
        self.side1.contains(x) != self.side1.contains(y)
    }
}
