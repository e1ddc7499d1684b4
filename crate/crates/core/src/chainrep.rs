//! Chains whose prime intervals are labeled by join-irreducibles of a
//! distributive lattice, and the subsets such chains represent.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::{chain, CandidateSubset, Elem, FiniteLattice};

/// A chain `0 ≺ 1 ≺ … ≺ n` whose `i`-th edge `[i, i+1]` carries
/// `labels[i] ∈ J(D)`; every element of `J(D)` occurs.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledChain {
    target: FiniteLattice,
    labels: Vec<Elem>,
}

impl LabeledChain {
    pub fn new(target: FiniteLattice, labels: Vec<Elem>) -> Result<Self> {
        let jd = target.join_irreducibles();
        if let Some(&x) = labels.iter().find(|x| !jd.contains(x)) {
            return Err(Error::PreconditionFailed(format!(
                "label `{}` is not join-irreducible",
                target.name(x)
            )));
        }
        if let Some(&j) = jd.iter().find(|j| !labels.contains(j)) {
            return Err(Error::PreconditionFailed(format!("label `{}` is never used", target.name(j))));
        }
        Ok(LabeledChain { target, labels })
    }

    pub fn target(&self) -> &FiniteLattice {
        &self.target
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The chain itself, elements `0..=len`.
    pub fn chain(&self) -> FiniteLattice {
        chain(self.labels.len() + 1)
    }

    /// Join of the labels of the edges between chain elements `lo ≤ hi`.
    pub fn erep(&self, lo: usize, hi: usize) -> Elem {
        assert!(lo <= hi && hi <= self.labels.len());
        self.labels[lo..hi].iter().fold(self.target.bottom(), |acc, &x| self.target.join(acc, x))
    }

    /// `{erep(I) : I an interval of the chain}`.
    pub fn srep(&self) -> BitSet {
        let d = &self.target;
        let mut out = BitSet::new(d.len());
        out.insert(d.bottom());
        for lo in 0..self.labels.len() {
            let mut acc = d.bottom();
            for &x in &self.labels[lo..] {
                acc = d.join(acc, x);
                out.insert(acc);
            }
        }
        out
    }

    /// Appends a new top edge labeled `1_D`.
    pub fn extend_star(&self) -> Result<LabeledChain> {
        let top = self.target.top();
        if !self.target.is_join_irreducible(top) {
            return Err(Error::TopNotJoinIrreducible);
        }
        let mut labels = self.labels.clone();
        labels.push(top);
        Ok(LabeledChain { target: self.target.clone(), labels })
    }

    /// Places `upper` atop `self`; both must share the target.
    pub fn glued_sum(&self, upper: &LabeledChain) -> LabeledChain {
        assert!(self.target == upper.target);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&upper.labels);
        LabeledChain { target: self.target.clone(), labels }
    }

    /// Wraps labels that need not cover `J(D)`.
    pub(crate) fn unchecked(target: FiniteLattice, labels: Vec<Elem>) -> Self {
        LabeledChain { target, labels }
    }
}

/// Least `(j1, j2)` in `J(D)`, `j1 < j2` by index, with `j1 ∨ j2 = x`.
pub fn two_join_decomposition(d: &FiniteLattice, x: Elem) -> Option<(Elem, Elem)> {
    let jd = d.join_irreducibles();
    jd.iter()
        .flat_map(|&a| jd.iter().map(move |&b| (a, b)))
        .filter(|(a, b)| a < b)
        .find(|&(a, b)| d.join(a, b) == x)
}

/// A labeled chain with `srep = Q` for `D` planar distributive with
/// join-irreducible top.
pub fn build_chain(d: &FiniteLattice, q: &CandidateSubset) -> Result<LabeledChain> {
    if !d.is_distributive() {
        return Err(Error::NotDistributive);
    }
    if d.len() < 2 || !d.is_join_irreducible(d.top()) {
        return Err(Error::TopNotJoinIrreducible);
    }
    let top = d.top();
    let mut blocks: Vec<(Elem, Vec<Elem>)> = Vec::new();
    for x in q.members().iter() {
        if x == d.bottom() {
            continue;
        }
        if d.is_join_irreducible(x) {
            blocks.push((x, vec![x]));
        } else {
            let (a, b) = two_join_decomposition(d, x).ok_or_else(|| {
                Error::Unrepresentable(format!("`{}` is not a join of two join-irreducibles", d.name(x)))
            })?;
            blocks.push((x, vec![a, b]));
        }
    }
    blocks.sort_by_key(|(x, _)| *x);
    let mut labels = Vec::new();
    for (i, (_, block)) in blocks.iter().enumerate() {
        if i > 0 {
            labels.push(top);
        }
        labels.extend_from_slice(block);
    }
    let lc = LabeledChain::new(d.clone(), labels)?;
    let got = lc.srep();
    if &got != q.members() {
        let extra: Vec<&str> = got.iter().filter(|&x| !q.contains(x)).map(|x| d.name(x)).collect();
        return Err(Error::Unrepresentable(format!("srep has extra elements {extra:?}")));
    }
    Ok(lc)
}

/// Outcome of the bounded search for a representing chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainSearch {
    Found(Vec<Elem>),
    /// No chain of at most the cutoff length exists.
    Inconclusive,
}

/// Depth-first search over label words of length at most `cutoff` for a
/// chain representing exactly `q`.
pub fn search_chain(d: &FiniteLattice, q: &BitSet, cutoff: usize) -> ChainSearch {
    let jd = d.join_irreducibles();
    let mut word = Vec::new();
    let mut covered = BitSet::new(d.len());
    covered.insert(d.bottom());
    if search_rec(d, q, &jd, cutoff, &mut word, &mut covered) {
        ChainSearch::Found(word)
    } else {
        ChainSearch::Inconclusive
    }
}

fn search_rec(
    d: &FiniteLattice,
    q: &BitSet,
    jd: &[Elem],
    cutoff: usize,
    word: &mut Vec<Elem>,
    covered: &mut BitSet,
) -> bool {
    if covered == q && jd.iter().all(|j| word.contains(j)) {
        return true;
    }
    if word.len() == cutoff {
        return false;
    }
    for &j in jd {
        word.push(j);
        let mut added = Vec::new();
        let mut acc = d.bottom();
        let mut ok = true;
        for &x in word.iter().rev() {
            acc = d.join(acc, x);
            if !q.contains(acc) {
                ok = false;
                break;
            }
            if covered.insert(acc) {
                added.push(acc);
            }
        }
        if ok && search_rec(d, q, jd, cutoff, word, covered) {
            return true;
        }
        for a in added {
            covered.remove(a);
        }
        word.pop();
    }
    false
}
