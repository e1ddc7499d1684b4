//! Finite lattices stored as dense indices with bitset order relations and
//! precomputed meet/join tables.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type Elem = usize;

#[derive(Clone, Debug)]
pub struct FiniteLattice {
    names: Vec<String>,
    /// `up[x]` holds every `y` with `x <= y`.
    up: Vec<BitSet>,
    /// `down[x]` holds every `y` with `y <= x`.
    down: Vec<BitSet>,
    upper: Vec<Vec<Elem>>,
    lower: Vec<Vec<Elem>>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: Elem,
    top: Elem,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up
    }
}

impl FiniteLattice {
    /// Builds a lattice from element names and (not necessarily reduced)
    /// cover pairs.
    pub fn from_cover<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownName(s.into()));
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_index_covers(names, &pairs)
    }

    /// Same as [`from_cover`](Self::from_cover) with indices instead of names.
    pub fn from_index_covers(names: Vec<String>, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::CycleError(names[a].clone()));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm; leftover vertices lie on a cycle.
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<Elem> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if order.len() < n {
            let v = (0..n).find(|&v| indeg[v] > 0).unwrap();
            return Err(Error::CycleError(names[v].clone()));
        }
        let mut up = vec![BitSet::new(n); n];
        for &v in order.iter().rev() {
            let mut s = BitSet::new(n);
            s.insert(v);
            for &w in &succ[v] {
                s.union_with(&up[w]);
            }
            up[v] = s;
        }
        Self::from_up_sets(names, up)
    }

    /// Builds a lattice from a reflexive, transitive, antisymmetric order
    /// given as up-sets.
    pub fn from_up_sets(names: Vec<String>, up: Vec<BitSet>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut down = vec![BitSet::new(n); n];
        for (x, ux) in up.iter().enumerate() {
            for y in ux.iter() {
                down[y].insert(x);
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if y != x && up[y].contains(x) {
                    return Err(Error::CycleError(names[x].clone()));
                }
            }
        }
        let sizes_down: Vec<usize> = down.iter().map(BitSet::count).collect();
        let sizes_up: Vec<usize> = up.iter().map(BitSet::count).collect();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for x in 0..n {
            for y in x..n {
                let m = bound(&down[x], &down[y], &sizes_down, &down).ok_or_else(|| {
                    Error::NotALattice { a: names[x].clone(), b: names[y].clone(), op: "meet" }
                })?;
                let j = bound(&up[x], &up[y], &sizes_up, &up).ok_or_else(|| Error::NotALattice {
                    a: names[x].clone(),
                    b: names[y].clone(),
                    op: "join",
                })?;
                meet[x * n + y] = m as u32;
                meet[y * n + x] = m as u32;
                join[x * n + y] = j as u32;
                join[y * n + x] = j as u32;
            }
        }
        let bottom = (0..n).find(|&x| sizes_up[x] == n).ok_or(Error::NotALattice {
            a: names[0].clone(),
            b: names[0].clone(),
            op: "bottom",
        })?;
        let top = (0..n).find(|&x| sizes_down[x] == n).unwrap();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for x in 0..n {
            for y in up[x].iter() {
                if y == x {
                    continue;
                }
                // y covers x iff nothing strictly between
                let between = up[x].intersection(&down[y]).count();
                if between == 2 {
                    upper[x].push(y);
                    lower[y].push(x);
                }
            }
        }
        Ok(FiniteLattice { names, up, down, upper, lower, meet, join, bottom, top })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.len() + y] as Elem
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.len() + y] as Elem
    }

    pub fn up_set(&self, x: Elem) -> &BitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: Elem) -> &BitSet {
        &self.down[x]
    }

    pub fn upper_covers(&self, x: Elem) -> &[Elem] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: Elem) -> &[Elem] {
        &self.lower[x]
    }

    pub fn covers(&self, x: Elem, y: Elem) -> bool {
        self.upper[x].contains(&y)
    }

    /// All cover pairs `(lower, upper)`, ordered by lower then upper index.
    pub fn cover_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut v = Vec::new();
        for x in 0..self.len() {
            let mut ups = self.upper[x].clone();
            ups.sort_unstable();
            v.extend(ups.into_iter().map(|y| (x, y)));
        }
        v
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&x| self.down[x].count());
        let mut h = vec![0; self.len()];
        for &x in &order {
            h[x] = self.lower[x].iter().map(|&y| h[y] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Elements sorted so that `x < y` implies `x` comes first.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&x| (self.down[x].count(), x));
        order
    }

    pub fn is_chain(&self) -> bool {
        self.elements().all(|x| self.upper[x].len() <= 1)
    }

    /// Returns a copy with every element renamed through `f`.
    pub fn renamed(&self, f: impl Fn(Elem, &str) -> String) -> Self {
        let mut l = self.clone();
        l.names = self.names.iter().enumerate().map(|(i, n)| f(i, n)).collect();
        l
    }

    /// The sublattice induced on `keep` (which must be closed under meet and
    /// join), with names preserved. Returns the lattice and the map from new
    /// to old indices.
    pub fn induced(&self, keep: &BitSet) -> Result<(FiniteLattice, Vec<Elem>)> {
        let old: Vec<Elem> = keep.iter().collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &o) in old.iter().enumerate() {
            pos[o] = i;
        }
        let k = old.len();
        let up = old
            .iter()
            .map(|&o| {
                let mut s = BitSet::new(k);
                for y in self.up[o].iter() {
                    if pos[y] != usize::MAX {
                        s.insert(pos[y]);
                    }
                }
                s
            })
            .collect();
        let names = old.iter().map(|&o| self.names[o].clone()).collect();
        Ok((FiniteLattice::from_up_sets(names, up)?, old))
    }
}

/// Finds the greatest element of `a ∩ b` with respect to `rel` (down-sets
/// for meets, up-sets for joins).
fn bound(a: &BitSet, b: &BitSet, sizes: &[usize], rel: &[BitSet]) -> Option<Elem> {
    let common = a.intersection(b);
    let total = common.count();
    let best = common.iter().max_by_key(|&c| sizes[c])?;
    if sizes[best] >= total && common.is_subset(&rel[best]) {
        Some(best)
    } else {
        None
    }
}

mod construct;
mod structure;

pub use construct::{chain, downset_lattice, downset_lattice_with_sets, Gluing, Poset};
pub use structure::{CandidateSubset, ConditionReport, TopDecomposition};
