//! Union-find over edge indices with a relative direction on every link.

use crate::labels::Sign;
use crate::lengths::IndexSubset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    /// Two classes were joined; `root` is the surviving representative.
    Merged { root: usize, absorbed: usize },
    /// Already related with the demanded direction.
    Redundant,
    /// Already related with the opposite direction.
    Contradiction,
}

/// Classes of `{1..n}` where every index carries a direction relative to
/// the class root. The root of a class is always its smallest index.
#[derive(Debug, Clone)]
pub struct SignedPartition {
    parent: Vec<usize>,
    to_parent: Vec<Sign>,
}

impl SignedPartition {
    pub fn new(n: usize) -> Self {
        SignedPartition {
            parent: (0..=n).collect(),
            to_parent: vec![Sign::Plus; n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len() - 1
    }

    /// Root of `i` and the direction of `i` relative to that root.
    pub fn find(&mut self, i: usize) -> (usize, Sign) {
        let p = self.parent[i];
        if p == i {
            return (i, Sign::Plus);
        }
        let (root, s) = self.find(p);
        let total = self.to_parent[i] * s;
        self.parent[i] = root;
        self.to_parent[i] = total;
        (root, total)
    }

    /// Direction of `j` relative to `i`, if they share a class.
    pub fn relation(&mut self, i: usize, j: usize) -> Option<Sign> {
        let (ri, si) = self.find(i);
        let (rj, sj) = self.find(j);
        (ri == rj).then_some(si * sj)
    }

    /// Demands `u_j = relation * u_i`.
    pub fn link(&mut self, i: usize, j: usize, relation: Sign) -> Link {
        let (ri, si) = self.find(i);
        let (rj, sj) = self.find(j);
        if ri == rj {
            return if si * sj == relation {
                Link::Redundant
            } else {
                Link::Contradiction
            };
        }
        // direction of rj relative to ri
        let across = si * relation * sj;
        let (root, absorbed) = if ri < rj { (ri, rj) } else { (rj, ri) };
        self.parent[absorbed] = root;
        self.to_parent[absorbed] = across;
        Link::Merged { root, absorbed }
    }

    pub fn component(&mut self, i: usize) -> IndexSubset {
        let (r, _) = self.find(i);
        (1..=self.n())
            .filter(|&x| self.find(x).0 == r)
            .fold(IndexSubset::EMPTY, |acc, x| acc.with(x))
    }

    /// The class of `i` split into indices codirected with the root and the rest.
    pub fn sides(&mut self, i: usize) -> (IndexSubset, IndexSubset) {
        let (r, _) = self.find(i);
        let mut plus = IndexSubset::EMPTY;
        let mut minus = IndexSubset::EMPTY;
        for x in 1..=self.n() {
            let (rx, sx) = self.find(x);
            if rx == r {
                if sx.is_minus() {
                    minus = minus.with(x);
                } else {
                    plus = plus.with(x);
                }
            }
        }
        (plus, minus)
    }

    pub fn roots(&mut self) -> Vec<usize> {
        (1..=self.n()).filter(|&x| self.find(x).0 == x).collect()
    }
}
