//! Equivalence relations on `0..size` in canonical form.

use std::fmt;

use crate::algebra::Element;

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already together.
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
        true
    }
}

/// An equivalence relation, stored as the least element of each element's block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    /// The identity relation (every block a singleton).
    pub fn bottom(size: usize) -> Partition {
        Partition {
            rep: (0..size).collect(),
        }
    }

    /// The all relation (one block).
    pub fn top(size: usize) -> Partition {
        Partition { rep: vec![0; size] }
    }

    pub fn from_union_find(uf: &mut UnionFind, size: usize) -> Partition {
        let mut least = vec![usize::MAX; size];
        for x in 0..size {
            let r = uf.find(x);
            least[r] = least[r].min(x);
        }
        Partition {
            rep: (0..size).map(|x| least[uf.find(x)]).collect(),
        }
    }

    /// Smallest equivalence relation containing the given pairs.
    pub fn from_pairs<I>(size: usize, pairs: I) -> Partition
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut uf = UnionFind::new(size);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        Partition::from_union_find(&mut uf, size)
    }

    /// Builds from explicit blocks; `None` unless the blocks partition `0..size`.
    pub fn from_blocks(size: usize, blocks: &[Vec<usize>]) -> Option<Partition> {
        let mut seen = vec![false; size];
        let mut uf = UnionFind::new(size);
        for block in blocks {
            let first = *block.first()?;
            for &x in block {
                if x >= size || seen[x] {
                    return None;
                }
                seen[x] = true;
                uf.union(first, x);
            }
        }
        seen.iter()
            .all(|&s| s)
            .then(|| Partition::from_union_find(&mut uf, size))
    }

    /// From a canonical representative vector; `None` if it is not canonical.
    pub fn from_reps(rep: Vec<usize>) -> Option<Partition> {
        let ok = rep.iter().enumerate().all(|(x, &r)| r <= x && rep[r] == r);
        ok.then_some(Partition { rep })
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    pub fn reps(&self) -> &[usize] {
        &self.rep
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.rep[a] == self.rep[b]
    }

    #[inline]
    pub fn related_elems(&self, a: Element, b: Element) -> bool {
        self.related(a as usize, b as usize)
    }

    pub fn block_count(&self) -> usize {
        self.rep
            .iter()
            .enumerate()
            .filter(|(x, &r)| *x == r)
            .count()
    }

    /// Blocks sorted by least element, each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut index = vec![usize::MAX; self.rep.len()];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, &r) in self.rep.iter().enumerate() {
            if x == r {
                index[x] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index[r]].push(x);
        }
        blocks
    }

    /// True if `self` refines `other`.
    pub fn le(&self, other: &Partition) -> bool {
        self.rep
            .iter()
            .enumerate()
            .all(|(x, &r)| other.related(x, r))
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let n = self.size();
        let mut first: std::collections::HashMap<(usize, usize), usize> = Default::default();
        let rep = (0..n)
            .map(|x| *first.entry((self.rep[x], other.rep[x])).or_insert(x))
            .collect();
        Partition { rep }
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for x in 0..n {
            uf.union(x, self.rep[x]);
            uf.union(x, other.rep[x]);
        }
        Partition::from_union_find(&mut uf, n)
    }

    /// Relational product `self ∘ other`: `(x, y)` with `x self z other y` for some `z`,
    /// as a row-major boolean matrix.
    pub fn compose(&self, other: &Partition) -> Vec<bool> {
        let n = self.size();
        let mut out = vec![false; n * n];
        for x in 0..n {
            for z in (0..n).filter(|&z| self.related(x, z)) {
                for y in (0..n).filter(|&y| other.related(z, y)) {
                    out[x * n + y] = true;
                }
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Every partition of `0..size`, via restricted growth strings.
pub fn all_partitions(size: usize) -> Vec<Partition> {
    fn go(prefix: &mut Vec<usize>, max: usize, size: usize, out: &mut Vec<Partition>) {
        if prefix.len() == size {
            let mut first = Vec::new();
            let rep = prefix
                .iter()
                .enumerate()
                .map(|(x, &label)| {
                    if label == first.len() {
                        first.push(x);
                    }
                    first[label]
                })
                .collect();
            out.push(Partition { rep });
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for label in 0..=limit {
            prefix.push(label);
            go(prefix, max.max(label), size, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(size), 0, size, &mut out);
    out
}
