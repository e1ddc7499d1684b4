//! Isomorphisms and automorphisms of finite lattices by backtracking over
//! a linear extension, pruned with refined vertex invariants.

use std::collections::{BTreeMap, HashMap};

use crate::lattice::{Elem, FiniteLattice};

/// Vertex colors refined jointly over several lattices, so equal colors
/// across lattices are comparable.
pub fn refined_colors(ls: &[&FiniteLattice]) -> Vec<Vec<u32>> {
    let heights: Vec<Vec<usize>> = ls.iter().map(|l| l.heights()).collect();
    let mut keys: Vec<Vec<Vec<u64>>> = ls
        .iter()
        .zip(&heights)
        .map(|(l, h)| {
            l.elements()
                .map(|x| {
                    vec![
                        h[x] as u64,
                        l.up_set(x).count() as u64,
                        l.down_set(x).count() as u64,
                        l.upper_covers(x).len() as u64,
                        l.lower_covers(x).len() as u64,
                    ]
                })
                .collect()
        })
        .collect();
    let mut classes = 0;
    loop {
        let mut ids: BTreeMap<&Vec<u64>, u32> = BTreeMap::new();
        for k in keys.iter().flatten() {
            ids.insert(k, 0);
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i as u32;
        }
        let colors: Vec<Vec<u32>> = keys.iter().map(|ks| ks.iter().map(|k| ids[k]).collect()).collect();
        if ids.len() == classes {
            return colors;
        }
        classes = ids.len();
        keys = ls
            .iter()
            .zip(&colors)
            .map(|(l, c)| {
                l.elements()
                    .map(|x| {
                        let mut up: Vec<u64> = l.upper_covers(x).iter().map(|&y| c[y] as u64).collect();
                        let mut down: Vec<u64> = l.lower_covers(x).iter().map(|&y| c[y] as u64).collect();
                        up.sort_unstable();
                        down.sort_unstable();
                        let mut k = vec![c[x] as u64, up.len() as u64];
                        k.extend(up);
                        k.extend(down);
                        k
                    })
                    .collect()
            })
            .collect();
    }
}

/// A hash of isomorphism invariants; equal for isomorphic lattices.
pub fn invariant_key(l: &FiniteLattice) -> Vec<u64> {
    let colors = refined_colors(&[l]).pop().unwrap_or_default();
    let heights = l.heights();
    let mut hist: Vec<u64> = l
        .elements()
        .map(|x| {
            (heights[x] as u64) << 48
                | (l.up_set(x).count() as u64) << 32
                | (l.down_set(x).count() as u64) << 16
                | (l.upper_covers(x).len() as u64) << 8
                | l.lower_covers(x).len() as u64
        })
        .collect();
    hist.sort_unstable();
    let classes = colors.iter().max().map_or(0, |m| *m as u64 + 1);
    let mut key = vec![l.len() as u64, l.cover_pairs().len() as u64, classes];
    key.extend(hist);
    key
}

struct Search<'a> {
    a: &'a FiniteLattice,
    b: &'a FiniteLattice,
    ca: Vec<u32>,
    cb: Vec<u32>,
    order: Vec<Elem>,
    f: Vec<Elem>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(a: &'a FiniteLattice, b: &'a FiniteLattice) -> Option<Self> {
        if a.len() != b.len() || a.cover_pairs().len() != b.cover_pairs().len() {
            return None;
        }
        let mut colors = refined_colors(&[a, b]);
        let cb = colors.pop().unwrap();
        let ca = colors.pop().unwrap();
        let mut ha: HashMap<u32, usize> = HashMap::new();
        let mut hb: HashMap<u32, usize> = HashMap::new();
        ca.iter().for_each(|c| *ha.entry(*c).or_default() += 1);
        cb.iter().for_each(|c| *hb.entry(*c).or_default() += 1);
        if ha != hb {
            return None;
        }
        Some(Search {
            a,
            b,
            ca,
            cb,
            order: a.linear_extension(),
            f: vec![usize::MAX; a.len()],
            used: vec![false; b.len()],
        })
    }

    fn candidates(&self, x: Elem) -> Vec<Elem> {
        let lower = self.a.lower_covers(x);
        if lower.is_empty() {
            return vec![self.b.bottom()];
        }
        let image: Vec<Elem> = lower.iter().map(|&y| self.f[y]).collect();
        if image.len() >= 2 {
            return vec![self.b.join(image[0], image[1])];
        }
        self.b.upper_covers(image[0]).to_vec()
    }

    fn fits(&self, x: Elem, y: Elem) -> bool {
        if self.used[y] || self.ca[x] != self.cb[y] {
            return false;
        }
        let lx = self.a.lower_covers(x);
        let ly = self.b.lower_covers(y);
        lx.len() == ly.len() && lx.iter().all(|&z| ly.contains(&self.f[z]))
    }

    fn run(&mut self, i: usize, out: &mut Vec<Vec<Elem>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if i == self.order.len() {
            out.push(self.f.clone());
            return;
        }
        let x = self.order[i];
        for y in self.candidates(x) {
            if self.fits(x, y) {
                self.f[x] = y;
                self.used[y] = true;
                self.run(i + 1, out, limit);
                self.used[y] = false;
                self.f[x] = usize::MAX;
            }
        }
    }
}

/// Up to `limit` isomorphisms `a → b`, as element maps.
pub fn isomorphisms(a: &FiniteLattice, b: &FiniteLattice, limit: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    if let Some(mut s) = Search::new(a, b) {
        s.run(0, &mut out, limit);
    }
    out
}

/// Some isomorphism `a → b`.
pub fn find_isomorphism(a: &FiniteLattice, b: &FiniteLattice) -> Option<Vec<Elem>> {
    isomorphisms(a, b, 1).pop()
}

pub fn are_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Every automorphism of `l`, identity first.
pub fn automorphisms(l: &FiniteLattice) -> Vec<Vec<Elem>> {
    let mut v = isomorphisms(l, l, usize::MAX);
    v.sort();
    v
}

/// Whether `l` has only the identity automorphism.
pub fn is_rigid(l: &FiniteLattice) -> bool {
    isomorphisms(l, l, 2).len() == 1
}

/// Keeps one representative per isomorphism class, preserving order.
pub fn dedupe(ls: Vec<FiniteLattice>) -> Vec<FiniteLattice> {
    let mut buckets: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let mut kept: Vec<FiniteLattice> = Vec::new();
    for l in ls {
        let key = invariant_key(&l);
        let bucket = buckets.entry(key).or_default();
        if bucket.iter().any(|&i| are_isomorphic(&kept[i], &l)) {
            continue;
        }
        bucket.push(kept.len());
        kept.push(l);
    }
    kept
}
