//! Union-find and canonical set partitions over `0..n`.

use std::fmt;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of disjoint sets.
    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Non-mutating find, for use behind shared references.
    pub fn find_const(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    /// Merges the sets of `a` and `b`. Returns `false` if they were already
    /// in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Labels each element by its class, classes numbered in order of their
    /// least element.
    pub fn labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut root_label = vec![usize::MAX; n];
        let mut out = Vec::with_capacity(n);
        let mut next = 0;
        for i in 0..n {
            let r = self.find(i);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            out.push(root_label[r]);
        }
        out
    }

    pub fn into_partition(mut self) -> Partition {
        Partition::from_labels(&self.labels())
    }
}

/// A set partition of `0..n`, stored by class label.
///
/// Labels are canonical: class `k` is the `k`-th class in order of least
/// element, so two partitions are equal iff their label vectors are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
    classes: usize,
}

impl Partition {
    /// Every element in its own class.
    pub fn discrete(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            classes: n,
        }
    }

    /// A single class (empty partition when `n == 0`).
    pub fn indiscrete(n: usize) -> Self {
        Partition {
            labels: vec![0; n],
            classes: usize::from(n > 0),
        }
    }

    /// Builds a partition from arbitrary labels, relabelling canonically.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(raw: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let mut labels = Vec::with_capacity(raw.len());
        for r in raw {
            let next = seen.len();
            let l = *seen.entry(r.clone()).or_insert(next);
            labels.push(l);
        }
        Partition {
            classes: seen.len(),
            labels,
        }
    }

    /// Builds a partition from explicit classes; elements not mentioned become
    /// singletons. Returns `None` if a class mentions an out-of-range or
    /// repeated element.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Option<Self> {
        let mut raw: Vec<Option<usize>> = vec![None; n];
        for (k, class) in classes.iter().enumerate() {
            for &e in class {
                if e >= n || raw[e].is_some() {
                    return None;
                }
                raw[e] = Some(k);
            }
        }
        let mut extra = classes.len();
        let raw: Vec<usize> = raw
            .into_iter()
            .map(|r| {
                r.unwrap_or_else(|| {
                    extra += 1;
                    extra - 1
                })
            })
            .collect();
        Some(Partition::from_labels(&raw))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    /// Classes as sorted element lists, in label order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Restriction to the listed elements, re-indexed by position in `elems`.
    pub fn restrict(&self, elems: &[usize]) -> Partition {
        let raw: Vec<usize> = elems.iter().map(|&e| self.labels[e]).collect();
        Partition::from_labels(&raw)
    }

    /// Image under `map: 0..n -> 0..m`: the finest partition of `0..m` in
    /// which images of equivalent elements are equivalent.
    pub fn push_forward(&self, map: &[usize], m: usize) -> Partition {
        let mut uf = UnionFind::new(m);
        let mut rep: Vec<Option<usize>> = vec![None; self.classes];
        for (i, &l) in self.labels.iter().enumerate() {
            match rep[l] {
                Some(r) => {
                    uf.union(r, map[i]);
                }
                None => rep[l] = Some(map[i]),
            }
        }
        uf.into_partition()
    }

    /// Preimage under `map: 0..n -> 0..len(self)`.
    pub fn pull_back(&self, map: &[usize]) -> Partition {
        let raw: Vec<usize> = map.iter().map(|&j| self.labels[j]).collect();
        Partition::from_labels(&raw)
    }

    /// True when every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut target: Vec<Option<usize>> = vec![None; self.classes];
        for (i, &l) in self.labels.iter().enumerate() {
            match target[l] {
                Some(t) if t != other.labels[i] => return false,
                Some(_) => {}
                None => target[l] = Some(other.labels[i]),
            }
        }
        true
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{:?}", self.classes())
    }
}

/// All set partitions of `0..n` whose class sizes lie in `[min, max]`,
/// as canonical label vectors. Restricted-growth-string order.
pub fn set_partitions(n: usize, min: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(
        i: usize,
        n: usize,
        min: usize,
        max: usize,
        labels: &mut Vec<usize>,
        sizes: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            if sizes.iter().all(|&s| s >= min) {
                out.push(labels.clone());
            }
            return;
        }
        // Prune: classes still below `min` need enough remaining elements.
        let deficit: usize = sizes.iter().map(|&s| min.saturating_sub(s)).sum();
        if deficit > n - i {
            return;
        }
        for k in 0..=sizes.len() {
            if k < sizes.len() {
                if sizes[k] >= max {
                    continue;
                }
                sizes[k] += 1;
                labels.push(k);
                rec(i + 1, n, min, max, labels, sizes, out);
                labels.pop();
                sizes[k] -= 1;
            } else {
                sizes.push(1);
                labels.push(k);
                rec(i + 1, n, min, max, labels, sizes, out);
                labels.pop();
                sizes.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, min.max(1), max, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}
