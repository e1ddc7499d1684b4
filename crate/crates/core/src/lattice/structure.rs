//! Join-irreducibles, distributivity and the planarity/coatom condition.

use super::{Elem, FiniteLattice};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A subset `Q` of a distributive lattice with `J⁺(D) ⊆ Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSubset {
    members: BitSet,
}

impl CandidateSubset {
    pub fn new(d: &FiniteLattice, members: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut set = BitSet::new(d.len());
        for m in members {
            if m >= d.len() {
                return Err(Error::PreconditionFailed(format!("element {m} out of range")));
            }
            set.insert(m);
        }
        for j in d.j_plus() {
            if !set.contains(j) {
                return Err(Error::PreconditionFailed(format!(
                    "candidate subset misses `{}` from J⁺(D)",
                    d.name(j)
                )));
            }
        }
        Ok(CandidateSubset { members: set })
    }

    /// The least candidate subset, `J⁺(D)` itself.
    pub fn minimal(d: &FiniteLattice) -> Self {
        CandidateSubset::new(d, d.j_plus()).expect("J⁺ is a candidate subset")
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.members.iter().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub holds: bool,
    pub planar: bool,
    pub join_reducible_coatoms: Vec<Elem>,
}

/// Splitting of a distributive lattice with join-reducible top into the
/// ideal `↓p` and the chain `↑q`.
#[derive(Clone, Debug)]
pub struct TopDecomposition {
    pub p: Elem,
    pub q: Elem,
    /// `↓p` as a lattice; `ideal_map[i]` is the index in `D` of its element `i`.
    pub d_prime: FiniteLattice,
    pub ideal_map: Vec<Elem>,
    /// `↑q` listed from `q` upwards.
    pub q_filter: Vec<Elem>,
}

impl FiniteLattice {
    pub fn is_join_irreducible(&self, x: Elem) -> bool {
        self.lower_covers(x).len() == 1
    }

    /// `J(L)`: nonzero elements with exactly one lower cover, by index.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.is_join_irreducible(x)).collect()
    }

    /// `J₀(L) = J(L) ∪ {0}`.
    pub fn j_zero(&self) -> Vec<Elem> {
        let mut v = self.join_irreducibles();
        v.push(self.bottom());
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `J⁺(L) = J(L) ∪ {0, 1}`.
    pub fn j_plus(&self) -> Vec<Elem> {
        let mut v = self.j_zero();
        v.push(self.top());
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn coatoms(&self) -> Vec<Elem> {
        let mut v = self.lower_covers(self.top()).to_vec();
        v.sort_unstable();
        v
    }

    pub fn is_distributive(&self) -> bool {
        let by_birkhoff = self.is_distributive_birkhoff();
        debug_assert_eq!(by_birkhoff, self.is_distributive_scan());
        by_birkhoff
    }

    /// Triple scan of `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`.
    pub fn is_distributive_scan(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.elements()
                    .all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    /// `x ↦ J(L) ∩ ↓x` is a bijection onto the down-sets of `J(L)`.
    pub fn is_distributive_birkhoff(&self) -> bool {
        let jl = self.join_irreducibles();
        let mut images: Vec<Vec<bool>> = self
            .elements()
            .map(|x| jl.iter().map(|&j| self.leq(j, x)).collect())
            .collect();
        images.sort();
        images.dedup();
        if images.len() != self.len() {
            return false;
        }
        let poset = super::Poset::from_fn(jl.len(), |a, b| self.leq(jl[a], jl[b]));
        poset.count_downsets(self.len() + 1) == self.len()
    }

    /// Largest antichain in `J(L)` is at most two.
    fn j_is_two_chains(&self) -> bool {
        let jl = self.join_irreducibles();
        let inc = |a: Elem, b: Elem| !self.leq(a, b) && !self.leq(b, a);
        for (i, &a) in jl.iter().enumerate() {
            for (k, &b) in jl.iter().enumerate().skip(i + 1) {
                if !inc(a, b) {
                    continue;
                }
                if jl[k + 1..].iter().any(|&c| inc(a, c) && inc(b, c)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn condition_iii(&self) -> Result<ConditionReport> {
        if !self.is_distributive() {
            return Err(Error::NotDistributive);
        }
        let planar = self.j_is_two_chains();
        let join_reducible_coatoms: Vec<Elem> = self
            .coatoms()
            .into_iter()
            .filter(|&c| self.lower_covers(c).len() >= 2)
            .collect();
        Ok(ConditionReport {
            holds: planar && join_reducible_coatoms.len() <= 1,
            planar,
            join_reducible_coatoms,
        })
    }

    pub fn decompose_top(&self) -> Result<TopDecomposition> {
        if !self.is_distributive() {
            return Err(Error::NotDistributive);
        }
        let top = self.top();
        if self.len() == 1 || self.is_join_irreducible(top) {
            return Err(Error::TopIrreducible);
        }
        let report = self.condition_iii()?;
        if !report.holds {
            return Err(Error::NoDecomposition(format!(
                "planar = {}, join-reducible coatoms = {}",
                report.planar,
                report.join_reducible_coatoms.len()
            )));
        }
        let jl = self.join_irreducibles();
        for &p in &jl {
            if !self.covers(p, top) {
                continue;
            }
            for &q in &jl {
                if q == p || self.join(p, q) != top {
                    continue;
                }
                if let Some(dec) = self.try_decomposition(p, q, &jl) {
                    return Ok(dec);
                }
            }
        }
        Err(Error::NoDecomposition("no join-irreducible coatom p with p ∨ q = 1".into()))
    }

    fn try_decomposition(&self, p: Elem, q: Elem, jl: &[Elem]) -> Option<TopDecomposition> {
        let ideal = self.down_set(p).clone();
        let filter = self.up_set(q);
        if !ideal.is_disjoint(filter) || ideal.count() + filter.count() != self.len() {
            return None;
        }
        if jl.iter().any(|&j| self.lt(q, j)) {
            return None;
        }
        let mut chain: Vec<Elem> = filter.iter().collect();
        chain.sort_by_key(|&x| self.down_set(x).count());
        if chain.windows(2).any(|w| !self.covers(w[0], w[1])) {
            return None;
        }
        let (d_prime, ideal_map) = self.induced(&ideal).ok()?;
        Some(TopDecomposition { p, q, d_prime, ideal_map, q_filter: chain })
    }

    pub fn is_ideal(&self, s: &BitSet) -> bool {
        !s.is_empty()
            && s.iter().all(|x| self.down_set(x).is_subset(s))
            && s.iter().all(|x| s.iter().all(|y| s.contains(self.join(x, y))))
    }

    pub fn is_filter(&self, s: &BitSet) -> bool {
        !s.is_empty()
            && s.iter().all(|x| self.up_set(x).is_subset(s))
            && s.iter().all(|x| s.iter().all(|y| s.contains(self.meet(x, y))))
    }

    /// Elements of the interval `[a, b]`.
    pub fn interval(&self, a: Elem, b: Elem) -> BitSet {
        self.up_set(a).intersection(self.down_set(b))
    }
}
