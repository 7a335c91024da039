//! Johnson networks `J(n, m)`.
//!
//! Vertices are the `m`-subsets of `{1, .., n}`, indexed by colex rank. Two
//! vertices are at distance `k` when their subsets share exactly `m - k`
//! elements; adjacency is a single-element swap.

use crate::error::{PstError, Result};
use crate::subset::{binomial, colex_rank, colex_unrank, labels, mask_of, next_same_popcount};

/// Default cap on the vertex count of a constructed graph.
pub const DEFAULT_VERTEX_CAP: u128 = 1_000_000;

/// Default cap on the vertex count for dense `N x N` storage.
pub const DEFAULT_DENSE_CAP: u128 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JohnsonGraph {
    n: u32,
    m: u32,
    // vertex masks in colex order
    masks: Vec<u64>,
}

impl JohnsonGraph {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        Self::with_cap(n, m, DEFAULT_VERTEX_CAP)
    }

    pub fn with_cap(n: u32, m: u32, cap: u128) -> Result<Self> {
        if m == 0 || 2 * m > n {
            return Err(PstError::Domain(format!(
                "J({n},{m}) requires 1 <= m <= n/2"
            )));
        }
        if n > 64 {
            return Err(PstError::Domain(format!(
                "ground set of size {n} exceeds 64 elements"
            )));
        }
        let count = binomial(n as u64, m as u64).unwrap_or(u128::MAX);
        if count > cap {
            return Err(PstError::Capacity {
                what: "Johnson graph vertices",
                required: count,
                cap,
            });
        }
        let mut masks = Vec::with_capacity(count as usize);
        let mut mask = (1u64 << m) - 1;
        for _ in 0..count {
            masks.push(mask);
            if masks.len() < count as usize {
                mask = next_same_popcount(mask);
            }
        }
        Ok(Self { n, m, masks })
    }

    /// The antipodal family `J(2m, m)`.
    pub fn antipodal(m: u32) -> Result<Self> {
        Self::new(2 * m, m)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Vertex count `C(n, m)`.
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Valency `m (n - m)`.
    pub fn degree(&self) -> usize {
        (self.m * (self.n - self.m)) as usize
    }

    pub fn diameter(&self) -> usize {
        self.m as usize
    }

    pub fn mask(&self, v: usize) -> u64 {
        self.masks[v]
    }

    /// Subset of vertex `v` as 1-based labels.
    pub fn subset(&self, v: usize) -> Vec<usize> {
        labels(self.masks[v])
    }

    /// Index of the vertex whose subset has the given 1-based labels.
    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        let mask = mask_of(subset)?;
        if mask.count_ones() != self.m || mask >> self.n != 0 {
            return None;
        }
        Some(colex_rank(mask) as usize)
    }

    pub fn index_of_mask(&self, mask: u64) -> usize {
        debug_assert_eq!(colex_unrank(colex_rank(mask), self.m), Some(mask));
        colex_rank(mask) as usize
    }

    /// Half the symmetric difference of the two subsets.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        ((self.masks[u] ^ self.masks[v]).count_ones() / 2) as usize
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.distance(u, v) == 1
    }

    /// All vertices obtained from `v` by swapping one element out for one
    /// element not in the subset.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mask = self.masks[v];
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let outside = full & !mask;
        let mut out = Vec::with_capacity(self.degree());
        for i in bits(mask) {
            for j in bits(outside) {
                out.push(colex_rank(mask ^ (1 << i) ^ (1 << j)) as usize);
            }
        }
        out
    }

    /// The unique vertex at distance `m`: the set complement. Requires `n = 2m`.
    pub fn antipode(&self, v: usize) -> Result<usize> {
        if self.n != 2 * self.m {
            return Err(PstError::Domain(format!(
                "J({},{}) has {} vertices in its last stratum; antipodes need n = 2m",
                self.n,
                self.m,
                binomial((self.n - self.m) as u64, self.m as u64).unwrap_or(0)
            )));
        }
        let full = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        Ok(colex_rank(full & !self.masks[v]) as usize)
    }

    pub fn distance_matrices(&self) -> Result<DistanceMatrices> {
        self.distance_matrices_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn distance_matrices_with_cap(&self, cap: u128) -> Result<DistanceMatrices> {
        let n = self.len();
        if n as u128 > cap {
            return Err(PstError::Capacity {
                what: "dense distance matrices",
                required: n as u128,
                cap,
            });
        }
        let mut labels = vec![0u8; n * n];
        for u in 0..n {
            for v in 0..n {
                labels[u * n + v] = self.distance(u, v) as u8;
            }
        }
        Ok(DistanceMatrices {
            order: n,
            diameter: self.diameter(),
            labels,
        })
    }

    /// Intersection numbers counted over every ordered vertex pair.
    ///
    /// For each pair `(u, v)` at distance `l`, the neighbours of `v` at
    /// distance `l + 1` and `l - 1` from `u` are counted. Any dependence on
    /// the pair beyond `l` is reported as an integrity error. Cost is
    /// `O(N^2 * degree)`.
    pub fn intersection_numbers(&self) -> Result<IntersectionArray> {
        let d = self.diameter();
        let mut b: Vec<Option<u64>> = vec![None; d + 1];
        let mut c: Vec<Option<u64>> = vec![None; d + 1];
        let mut a: Vec<Option<u64>> = vec![None; d + 1];
        let adj: Vec<Vec<usize>> = (0..self.len()).map(|v| self.neighbors(v)).collect();
        let record = |slot: &mut Option<u64>, value: u64, name: &str, l: usize| match slot {
            None => {
                *slot = Some(value);
                Ok(())
            }
            Some(prev) if *prev == value => Ok(()),
            Some(prev) => Err(PstError::Integrity(format!(
                "{name}_{l} is not constant: found {prev} and {value}"
            ))),
        };
        for u in 0..self.len() {
            for v in 0..self.len() {
                let l = self.distance(u, v);
                let (mut up, mut down, mut same) = (0u64, 0u64, 0u64);
                for &w in &adj[v] {
                    match self.distance(u, w) {
                        x if x == l + 1 => up += 1,
                        x if x + 1 == l => down += 1,
                        x if x == l => same += 1,
                        x => {
                            return Err(PstError::Integrity(format!(
                                "neighbour of a vertex at distance {l} lies at distance {x}"
                            )))
                        }
                    }
                }
                record(&mut b[l], up, "b", l)?;
                record(&mut c[l], down, "c", l)?;
                record(&mut a[l], same, "a", l)?;
            }
        }
        let b: Vec<u64> = b[..d].iter().map(|x| x.unwrap_or(0)).collect();
        let c: Vec<u64> = c[1..].iter().map(|x| x.unwrap_or(0)).collect();
        Ok(IntersectionArray { b, c })
    }

    pub fn stratify(&self, reference: usize) -> Result<Stratification> {
        if reference >= self.len() {
            return Err(PstError::Domain(format!(
                "reference vertex {reference} out of range 0..{}",
                self.len()
            )));
        }
        let mut strata = vec![Vec::new(); self.diameter() + 1];
        for v in 0..self.len() {
            strata[self.distance(reference, v)].push(v);
        }
        Ok(Stratification {
            reference,
            order: self.len(),
            strata,
        })
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros();
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// The distance-`k` adjacency matrices `A_0, .., A_d`, stored as one dense
/// table of distance labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrices {
    order: usize,
    diameter: usize,
    labels: Vec<u8>,
}

impl DistanceMatrices {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.labels[u * self.order + v] as usize
    }

    /// Entry `(A_k)_{u,v}`.
    pub fn entry(&self, k: usize, u: usize, v: usize) -> u8 {
        u8::from(self.distance(u, v) == k)
    }

    /// `A_k` as a dense matrix.
    pub fn matrix(&self, k: usize) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.order, self.order, |u, v| self.entry(k, u, v) as f64)
    }

    /// Row sums of `A_k`, one per vertex.
    pub fn row_sums(&self, k: usize) -> Vec<usize> {
        (0..self.order)
            .map(|u| (0..self.order).filter(|&v| self.distance(u, v) == k).count())
            .collect()
    }
}

/// Partition of the vertices by distance from a reference vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub reference: usize,
    order: usize,
    pub strata: Vec<Vec<usize>>,
}

impl Stratification {
    /// Stratum sizes `kappa_0, .., kappa_d`.
    pub fn valencies(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    /// Normalized indicator vector of stratum `i` in the `N`-dimensional
    /// vertex space.
    pub fn unit_vector(&self, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.order];
        let w = 1.0 / (self.strata[i].len() as f64).sqrt();
        for &x in &self.strata[i] {
            v[x] = w;
        }
        v
    }

    pub fn unit_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.strata.len()).map(|i| self.unit_vector(i)).collect()
    }
}

/// Intersection array `{b_0, .., b_{d-1}; c_1, .., c_d}` of a
/// distance-regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionArray {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

impl IntersectionArray {
    /// Closed form for `J(2m, m)`: `b_l = (m - l)^2`, `c_l = l^2`.
    pub fn johnson(m: u64) -> Self {
        Self {
            b: (0..m).map(|l| (m - l).pow(2)).collect(),
            c: (1..=m).map(|l| l * l).collect(),
        }
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    /// `kappa = b_0`.
    pub fn degree(&self) -> u64 {
        self.b[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn bfs_distances(g: &JohnsonGraph, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; g.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    // One-swap rule computed straight from the subsets.
    fn swap_adjacent(a: &[usize], b: &[usize]) -> bool {
        a.iter().filter(|x| !b.contains(x)).count() == 1
    }

    #[test]
    fn build_small_cases() {
        let g = JohnsonGraph::new(4, 2).unwrap();
        assert_eq!((g.len(), g.degree()), (6, 4));
        let k2 = JohnsonGraph::new(2, 1).unwrap();
        assert_eq!(k2.len(), 2);
        assert!(k2.adjacent(0, 1));
        assert_eq!(k2.neighbors(0), vec![1]);
        let g = JohnsonGraph::new(6, 3).unwrap();
        assert_eq!((g.len(), g.degree()), (20, 9));
    }

    #[test]
    fn enumerated_degrees() {
        for (n, m, deg) in [(4, 2, 4usize), (6, 3, 9)] {
            let g = JohnsonGraph::new(n, m).unwrap();
            for u in 0..g.len() {
                let su = g.subset(u);
                let count = (0..g.len())
                    .filter(|&v| swap_adjacent(&su, &g.subset(v)))
                    .count();
                assert_eq!(count, deg);
            }
        }
    }

    #[test]
    fn domain_and_capacity_errors() {
        assert!(matches!(JohnsonGraph::new(4, 3), Err(PstError::Domain(_))));
        assert!(matches!(JohnsonGraph::new(4, 0), Err(PstError::Domain(_))));
        assert!(matches!(
            JohnsonGraph::with_cap(10, 5, 100),
            Err(PstError::Capacity { required: 252, .. })
        ));
        assert!(matches!(
            JohnsonGraph::new(60, 30),
            Err(PstError::Capacity { .. })
        ));
    }

    #[test]
    fn adjacency_matches_one_swap_rule() {
        for (n, m) in [(4, 2), (5, 2), (6, 2), (6, 3), (7, 3), (8, 4)] {
            let g = JohnsonGraph::new(n, m).unwrap();
            for u in 0..g.len() {
                let mut nb = g.neighbors(u);
                nb.sort_unstable();
                let su = g.subset(u);
                let expected: Vec<usize> = (0..g.len())
                    .filter(|&v| swap_adjacent(&su, &g.subset(v)))
                    .collect();
                assert_eq!(nb, expected, "J({n},{m}) vertex {u}");
            }
        }
    }

    #[test]
    fn set_distance_matches_bfs() {
        for (n, m) in [(4, 2), (6, 3), (7, 2), (8, 4)] {
            let g = JohnsonGraph::new(n, m).unwrap();
            for u in [0, g.len() / 2, g.len() - 1] {
                let bfs = bfs_distances(&g, u);
                for v in 0..g.len() {
                    assert_eq!(g.distance(u, v), bfs[v]);
                }
            }
        }
    }

    #[test]
    fn distance_matrices_partition() {
        let g = JohnsonGraph::new(4, 2).unwrap();
        let dm = g.distance_matrices().unwrap();
        assert!(dm.row_sums(2).iter().all(|&s| s == 1));
        let total = dm.matrix(0) + dm.matrix(1) + dm.matrix(2);
        assert!(total.iter().all(|&x| x == 1.0));
        assert_eq!(dm.matrix(0), nalgebra::DMatrix::identity(6, 6));

        let dm = JohnsonGraph::new(6, 3).unwrap().distance_matrices().unwrap();
        for (k, want) in [1usize, 9, 9, 1].into_iter().enumerate() {
            assert!(dm.row_sums(k).iter().all(|&s| s == want));
            let a = dm.matrix(k);
            assert_eq!(a, a.transpose());
        }
    }

    #[test]
    fn shared_element_rule() {
        let g = JohnsonGraph::new(6, 3).unwrap();
        let dm = g.distance_matrices().unwrap();
        for u in 0..g.len() {
            for v in 0..g.len() {
                let shared = g.subset(u).iter().filter(|x| g.subset(v).contains(x)).count();
                assert_eq!(dm.entry(3 - shared, u, v), 1);
            }
        }
    }

    #[test]
    fn intersection_arrays() {
        let ia = JohnsonGraph::new(4, 2).unwrap().intersection_numbers().unwrap();
        assert_eq!(ia, IntersectionArray { b: vec![4, 1], c: vec![1, 4] });
        let ia = JohnsonGraph::new(6, 3).unwrap().intersection_numbers().unwrap();
        assert_eq!(ia, IntersectionArray { b: vec![9, 4, 1], c: vec![1, 4, 9] });
        let ia = JohnsonGraph::new(2, 1).unwrap().intersection_numbers().unwrap();
        assert_eq!(ia, IntersectionArray { b: vec![1], c: vec![1] });
        // J(n, m) with n != 2m is distance-regular too
        let ia = JohnsonGraph::new(7, 3).unwrap().intersection_numbers().unwrap();
        assert_eq!(ia.b, vec![12, 6, 2]);
        assert_eq!(ia.c, vec![1, 4, 9]);
    }

    #[test]
    fn stratification_valencies() {
        let g = JohnsonGraph::new(4, 2).unwrap();
        for r in 0..g.len() {
            assert_eq!(g.stratify(r).unwrap().valencies(), vec![1, 4, 1]);
        }
        let k2 = JohnsonGraph::new(2, 1).unwrap();
        assert_eq!(k2.stratify(0).unwrap().valencies(), vec![1, 1]);
        let g = JohnsonGraph::new(6, 3).unwrap();
        assert_eq!(g.stratify(0).unwrap().valencies(), vec![1, 9, 9, 1]);
        assert_eq!(g.stratify(7).unwrap().valencies(), vec![1, 9, 9, 1]);
        assert!(g.stratify(20).is_err());
    }

    #[test]
    fn unit_vectors_orthonormal() {
        let g = JohnsonGraph::new(8, 4).unwrap();
        let s = g.stratify(3).unwrap();
        let vs = s.unit_vectors();
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn antipodes() {
        let g = JohnsonGraph::new(4, 2).unwrap();
        let v = g.index_of(&[1, 2]).unwrap();
        assert_eq!(g.subset(g.antipode(v).unwrap()), vec![3, 4]);
        for v in 0..g.len() {
            assert_eq!(g.antipode(g.antipode(v).unwrap()).unwrap(), v);
            assert_eq!(g.distance(v, g.antipode(v).unwrap()), 2);
        }
        let g = JohnsonGraph::new(6, 3).unwrap();
        let v = g.index_of(&[1, 3, 5]).unwrap();
        assert_eq!(g.subset(g.antipode(v).unwrap()), vec![2, 4, 6]);
        assert!(JohnsonGraph::new(6, 2).unwrap().antipode(0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = JohnsonGraph::new(8, 3).unwrap();
        for v in 0..g.len() {
            assert_eq!(g.index_of(&g.subset(v)), Some(v));
        }
        assert_eq!(g.index_of(&[1, 2]), None);
        assert_eq!(g.index_of(&[1, 2, 9]), None);
    }
}
