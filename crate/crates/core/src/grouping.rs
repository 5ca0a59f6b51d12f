//! Merging of mutually-confused classes from a confusion matrix.
//!
//! Classes form an undirected graph with an edge wherever the mutual
//! confusion rate reaches a threshold; connected components become the
//! merged classes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::raster::Dataset;

/// Surjective map from original labels onto densely numbered merged
/// labels, ordered by the smallest member of each group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGrouping {
    pub original_count: usize,
    pub map: Vec<usize>,
    pub merged_count: usize,
}

impl ClassGrouping {
    /// The grouping that merges nothing.
    pub fn identity(n: usize) -> Self {
        ClassGrouping {
            original_count: n,
            map: (0..n).collect(),
            merged_count: n,
        }
    }

    pub fn relabel(&self, label: usize) -> Result<usize> {
        self.map.get(label).copied().ok_or(Error::LabelOutOfRange {
            label,
            classes: self.original_count,
        })
    }
}

/// Symmetric rate at which classes `i` and `j` are predicted as each
/// other: `(C_ij + C_ji) / (row_i + row_j)`.
pub fn mutual_confusion(c: &ConfusionMatrix, i: usize, j: usize) -> Result<f64> {
    if i == j || i >= c.n_classes() || j >= c.n_classes() {
        return Err(Error::Invalid(format!(
            "mutual confusion needs two distinct classes below {}, got {i} and {j}",
            c.n_classes()
        )));
    }
    let row_i = c.row_total(i);
    let row_j = c.row_total(j);
    if row_i == 0 {
        return Err(Error::EmptyRow(i));
    }
    if row_j == 0 {
        return Err(Error::EmptyRow(j));
    }
    Ok((c.get(i, j) + c.get(j, i)) as f64 / (row_i + row_j) as f64)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // keep the smaller label as root so group order is stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Group classes whose pairwise mutual confusion reaches `tau`
/// (0 < tau <= 1). Groups are connected components, so chains merge
/// transitively even when their endpoints fall below the threshold.
pub fn build_grouping(c: &ConfusionMatrix, tau: f64) -> Result<ClassGrouping> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Invalid(format!(
            "tau must lie in (0, 1], got {tau}"
        )));
    }
    let n = c.n_classes();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if mutual_confusion(c, i, j)? >= tau {
                uf.union(i, j);
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut merged_count = 0usize;
    let mut component_label = vec![usize::MAX; n];
    for class in 0..n {
        let root = uf.find(class);
        if component_label[root] == usize::MAX {
            component_label[root] = merged_count;
            merged_count += 1;
        }
        map[class] = component_label[root];
    }
    Ok(ClassGrouping {
        original_count: n,
        map,
        merged_count,
    })
}

/// Relabel a dataset through a grouping; the result has
/// `merged_count` classes.
pub fn apply_grouping(g: &ClassGrouping, d: &Dataset) -> Result<Dataset> {
    if d.class_count > g.original_count {
        return Err(Error::LabelOutOfRange {
            label: d.class_count - 1,
            classes: g.original_count,
        });
    }
    let mut samples = Vec::with_capacity(d.len());
    for s in &d.samples {
        let mut s = s.clone();
        s.label = g.relabel(s.label)?;
        samples.push(s);
    }
    Dataset::new(samples, g.merged_count)
}
