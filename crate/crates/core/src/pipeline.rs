//! End-to-end constructions: the frame lattice with its equalizing flags
//! for distributive lattices with join-irreducible top, the gluing of the
//! `S_k` ladder for join-reducible top, and automorphism stipulation.

use std::collections::{BTreeMap, HashMap};

use crate::bitset::BitSet;
use crate::certificate::{j_order, CStar, Certificate};
use crate::chainrep::{build_chain, LabeledChain};
use crate::congruence::{Congruence, CongruenceLattice, PrimeInterval};
use crate::error::{Error, Result};
use crate::gadgets::{branch_from_chain, replace_prime_interval_mapped, rename_colored, rigid_simple, s_k_gadget_with, snake, Gadget};
use crate::iso::automorphisms;
use crate::lattice::{chain, CandidateSubset, Elem, FiniteLattice, TopDecomposition};
use crate::quasicolor::{compose_coloring, glue_colored, mu_isomorphism, Color, ColoredLattice, GlueData, QuasiOrder, Retraction};
use crate::verify::{automorphism_group, chain_production, group_isomorphic, verify_certificate};

/// Automorphism requirement on the constructed lattice.
#[derive(Clone, Debug, Default)]
pub enum AutMode {
    #[default]
    Any,
    Rigid,
    /// `Aut(L) ≅ Aut(M0)` for the simple lattice `M0`.
    Group(FiniteLattice),
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Simple cap lattice of height at least 3; the smallest rigid simple
    /// lattice by default.
    pub cap: Option<FiniteLattice>,
    pub aut: AutMode,
}

/// Tag offset of the alter egos of `p` in the `S_k` ladder.
pub const P_TAG: i32 = 1000;

/// Chains covering `J(D) ∖ {1_D}` whose orders, with every element below
/// `1_D`, generate the order of `J(D)`. Greedy: repeatedly take a chain
/// through the most uncovered covering pairs, shortest first on ties.
pub fn chain_cover(d: &FiniteLattice) -> Vec<Vec<Elem>> {
    let top = d.top();
    let mut js: Vec<Elem> = d.join_irreducibles().into_iter().filter(|&j| j != top).collect();
    js.sort_by_key(|&j| (d.down_set(j).count(), j));
    let n = js.len();
    let lt = |a: usize, b: usize| d.lt(js[a], js[b]);
    let hasse: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)))
        .collect();
    let mut uncovered: std::collections::BTreeSet<(usize, usize)> = hasse.iter().copied().collect();
    let mut chains: Vec<Vec<Elem>> = Vec::new();
    while !uncovered.is_empty() {
        // best[b] = (uncovered pairs, -length) of the best path ending at b.
        let mut best: Vec<((usize, i64), Option<usize>)> = vec![((0, 0), None); n];
        for b in 0..n {
            for &(a, b2) in &hasse {
                if b2 != b {
                    continue;
                }
                let (u, len) = best[a].0;
                let cand = (u + usize::from(uncovered.contains(&(a, b))), len - 1);
                if cand > best[b].0 {
                    best[b] = (cand, Some(a));
                }
            }
        }
        let end = (0..n).max_by_key(|&b| (best[b].0, std::cmp::Reverse(b))).expect("uncovered pairs exist");
        let mut path = vec![end];
        while let Some(a) = best[*path.last().unwrap()].1 {
            path.push(a);
        }
        path.reverse();
        for w in path.windows(2) {
            uncovered.remove(&(w[0], w[1]));
        }
        chains.push(path.iter().map(|&i| js[i]).collect());
    }
    for &j in &js {
        if !chains.iter().any(|c| c.contains(&j)) {
            chains.push(vec![j]);
        }
    }
    if !cover_generates(d, &chains) {
        let mut fallback: Vec<Vec<Elem>> = hasse.iter().map(|&(a, b)| vec![js[a], js[b]]).collect();
        for &j in &js {
            if !fallback.iter().any(|c| c.contains(&j)) {
                fallback.push(vec![j]);
            }
        }
        return fallback;
    }
    chains
}

/// Whether the chain orders plus `J(D) × {1_D}` generate the order of `J(D)`.
fn cover_generates(d: &FiniteLattice, chains: &[Vec<Elem>]) -> bool {
    let top = d.top();
    let jd = d.join_irreducibles();
    let carrier: Vec<Color> = jd.iter().map(|&j| Color::plain(j as u32)).collect();
    let mut pairs: Vec<(Color, Color)> = jd.iter().map(|&j| (Color::plain(j as u32), Color::plain(top as u32))).collect();
    for c in chains {
        for w in c.windows(2) {
            if !d.lt(w[0], w[1]) {
                return false;
            }
            pairs.push((Color::plain(w[0] as u32), Color::plain(w[1] as u32)));
        }
    }
    QuasiOrder::generated(&carrier, &pairs) == j_order(d)
}

/// Everything the frame and its flags are built from.
#[derive(Clone, Debug)]
pub struct FramePlan {
    pub d: FiniteLattice,
    pub chains: Vec<Vec<Elem>>,
    /// Every fresh color and `1_D` itself, mapped to the element of `J(D)`
    /// it stands for.
    pub alter_table: BTreeMap<Color, Elem>,
    pub labeled_chain: LabeledChain,
    pub simple_cap: FiniteLattice,
    /// Pairs `(g, h)` with `g` in a branch of smaller index than `h`.
    pub epsilon: Vec<(Color, Color)>,
}

/// Color of `x` in the snake over chain `i`.
pub fn snake_color(x: Elem, i: usize) -> Color {
    Color::tagged(x as u32, i as i32 + 1)
}

impl FramePlan {
    pub fn new(d: &FiniteLattice, lc: &LabeledChain, cap: FiniteLattice) -> Result<Self> {
        if d.len() < 2 || !d.is_join_irreducible(d.top()) {
            return Err(Error::TopNotJoinIrreducible);
        }
        if lc.target() != d {
            return Err(Error::PlanInvalid("labeled chain targets another lattice".into()));
        }
        let chains = chain_cover(d);
        let mut alter_table = BTreeMap::new();
        alter_table.insert(Color::plain(d.top() as u32), d.top());
        for (i, c) in chains.iter().enumerate() {
            for &x in c {
                alter_table.insert(snake_color(x, i), x);
            }
        }
        let (_, table) = branch_from_chain(&lc.extend_star()?);
        for (c, x) in table.into_iter().take(lc.len()) {
            alter_table.insert(c, x);
        }
        let mut plan = FramePlan {
            d: d.clone(),
            chains,
            alter_table,
            labeled_chain: lc.clone(),
            simple_cap: cap,
            epsilon: Vec::new(),
        };
        plan.epsilon = epsilon_pairs(&plan)?;
        plan.validate()?;
        Ok(plan)
    }

    /// Number of snake branches `t`; the labeled chain is branch `t` and
    /// the cap counts as branch `t + 1`.
    pub fn t(&self) -> usize {
        self.chains.len()
    }

    /// Branch carrying the color `c`.
    pub fn branch_of(&self, c: Color) -> Option<usize> {
        if !self.alter_table.contains_key(&c) {
            return None;
        }
        Some(match c.tag {
            0 => self.t() + 1,
            t if t < 0 => self.t(),
            t => t as usize - 1,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !cover_generates(&self.d, &self.chains) {
            return Err(Error::PlanInvalid("chains do not generate the order of J(D)".into()));
        }
        for (i, c) in self.chains.iter().enumerate() {
            for (k, x) in c.iter().enumerate() {
                if c[..k].contains(x) || self.alter_table.get(&snake_color(*x, i)) != Some(x) {
                    return Err(Error::PlanInvalid(format!("chain {i} repeats or misses an alter ego")));
                }
            }
        }
        for &(g, h) in &self.epsilon {
            match (self.branch_of(g), self.branch_of(h)) {
                (Some(a), Some(b)) if a < b && self.alter_table[&g] == self.alter_table[&h] => {}
                _ => return Err(Error::PlanInvalid(format!("pair ({g}, {h}) is not witnessed in two branches"))),
            }
        }
        Ok(())
    }

    /// The order `κ` of the frame colors.
    fn kappa(&self) -> QuasiOrder {
        let pe = Color::plain(self.d.top() as u32);
        let carrier: Vec<Color> = self.alter_table.keys().copied().collect();
        let mut pairs: Vec<(Color, Color)> = carrier.iter().map(|&c| (c, pe)).collect();
        for (i, c) in self.chains.iter().enumerate() {
            for w in c.windows(2) {
                pairs.push((snake_color(w[0], i), snake_color(w[1], i)));
            }
        }
        QuasiOrder::generated(&carrier, &pairs)
    }
}

/// A spanning star over each alter-ego class: the hub is `1_D` itself for
/// the class of `1_D` and the copy in the first snake otherwise.
pub fn epsilon_pairs(plan: &FramePlan) -> Result<Vec<(Color, Color)>> {
    let mut classes: BTreeMap<Elem, Vec<Color>> = BTreeMap::new();
    for (&c, &x) in &plan.alter_table {
        classes.entry(x).or_default().push(c);
    }
    let mut out = Vec::new();
    for (x, members) in classes {
        let hub = *members
            .iter()
            .filter(|c| c.tag >= 0)
            .min_by_key(|c| (c.tag == 0, c.tag))
            .ok_or_else(|| Error::UnwitnessablePair(plan.d.name(x).to_string()))?;
        if members.len() < 2 {
            return Err(Error::UnwitnessablePair(plan.d.name(x).to_string()));
        }
        let hb = plan.branch_of(hub).expect("hub is listed");
        for &c in &members {
            if c == hub {
                continue;
            }
            let cb = plan.branch_of(c).expect("member is listed");
            match cb.cmp(&hb) {
                std::cmp::Ordering::Less => out.push((c, hub)),
                std::cmp::Ordering::Greater => out.push((hub, c)),
                std::cmp::Ordering::Equal => return Err(Error::UnwitnessablePair(plan.d.name(x).to_string())),
            }
        }
    }
    Ok(out)
}

/// The frame `F` before any flag.
#[derive(Clone, Debug)]
struct FrameData {
    colored: ColoredLattice,
    o: Elem,
    iota: Elem,
    /// Frame elements of branches `0..=t`.
    branches: Vec<BitSet>,
    /// Cap interval `[y1, y2]` with `y1 ≠ o`, `y2 ≠ ι` used by flags on `1_D`.
    cap_edge: (Elem, Elem),
    thick: Vec<(String, PrimeInterval)>,
    c_star: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Branch { branch: usize, lower: Elem, upper: Elem },
    Cap { lower: Elem, upper: Elem },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct FlagShape {
    g: Color,
    sides: [Side; 2],
}

/// The frame with a sequence of equalizing flags.
#[derive(Clone, Debug)]
pub struct FrameLattice {
    pub colored: ColoredLattice,
    pub plan: FramePlan,
    data: FrameData,
    flags: Vec<FlagShape>,
}

impl FrameLattice {
    pub fn flag_count(&self) -> usize {
        self.flags.len()
    }

    /// Prime intervals of `F` open to substitution.
    pub fn thick(&self) -> &[(String, PrimeInterval)] {
        &self.data.thick
    }

    /// `C*`: the labeled chain's branch followed by `ι`.
    pub fn c_star(&self) -> &[Elem] {
        &self.data.c_star
    }

    /// Element of `D` each color stands for.
    pub fn label(&self, c: Color) -> Elem {
        self.plan.alter_table[&c]
    }

    /// Elements of `D` produced by chains of the current lattice.
    pub fn producible(&self) -> BitSet {
        let cl = &self.colored;
        chain_production(&cl.lattice, &self.plan.d, |a, b| self.label(cl.color(a, b)))
    }
}

fn verified(cl: &ColoredLattice) -> Result<()> {
    cl.check().map_err(|v| Error::VerificationFailed(v.to_string()))
}

/// The frame: the cap with every branch inserted as an interval strictly
/// between `o` and `ι`, branch edges keeping their colors and the rest
/// colored `1_D`.
pub fn build_frame(plan: &FramePlan) -> Result<FrameLattice> {
    plan.validate()?;
    let cap = &plan.simple_cap;
    if cap.len() < 3 || CongruenceLattice::new(cap).irreducible_count() != 1 {
        return Err(Error::CapNotSimple);
    }
    let (o, iota) = (cap.bottom(), cap.top());
    let cap_covers = cap.cover_pairs();
    let cap_edge = *cap_covers
        .iter()
        .find(|&&(a, b)| a != o && b != iota)
        .ok_or_else(|| Error::PlanInvalid("cap has no prime interval avoiding both bounds".into()))?;
    let cap_thick = *cap_covers
        .iter()
        .find(|&&(a, b)| ![a, b].contains(&cap_edge.0) && ![a, b].contains(&cap_edge.1))
        .ok_or_else(|| Error::PlanInvalid("cap has no prime interval disjoint from the flag interval".into()))?;
    let pe = Color::plain(plan.d.top() as u32);

    let mut branches: Vec<(String, Gadget)> = Vec::new();
    for (i, c) in plan.chains.iter().enumerate() {
        let colors: Vec<Color> = c.iter().map(|&x| snake_color(x, i)).collect();
        branches.push((format!("b{i}"), snake(&colors)?));
    }
    let (st, _) = branch_from_chain(&plan.labeled_chain);
    branches.push(("t".to_string(), st));

    let nc = cap.len();
    let total = nc + branches.iter().map(|(_, g)| g.lattice().len()).sum::<usize>();
    let mut names: Vec<String> = cap.names().iter().map(|n| format!("cap.{n}")).collect();
    let mut up: Vec<BitSet> = cap.elements().map(|x| cap.up_set(x).resized(total)).collect();
    let mut cmap: HashMap<(Elem, Elem), Color> = cap_covers.iter().map(|&e| (e, pe)).collect();
    let mut offsets = Vec::new();
    let mut sets = Vec::new();
    let mut thick = Vec::new();
    let mut offset = nc;
    for (tag, g) in &branches {
        let bl = g.lattice();
        offsets.push(offset);
        let mut set = BitSet::new(total);
        for x in bl.elements() {
            names.push(format!("{tag}.{}", bl.name(x)));
            let mut s = BitSet::new(total);
            for y in bl.up_set(x).iter() {
                s.insert(offset + y);
            }
            s.insert(iota);
            up.push(s);
            up[o].insert(offset + x);
            set.insert(offset + x);
        }
        for (&(a, b), &c) in g.colored.cmap() {
            cmap.insert((offset + a, offset + b), c);
        }
        cmap.insert((o, offset + bl.bottom()), pe);
        cmap.insert((offset + bl.top(), iota), pe);
        for (n, p) in g.edges_with_prefix("thick") {
            thick.push((format!("{tag}.{n}"), PrimeInterval::new(offset + p.lower, offset + p.upper)));
        }
        sets.push(set);
        offset += bl.len();
    }
    thick.push(("cap.thick".to_string(), PrimeInterval::new(cap_thick.0, cap_thick.1)));
    let lattice = FiniteLattice::from_up_sets(names, up)?;
    let colored = ColoredLattice::new(lattice, plan.kappa(), cmap)?;
    let st_off = *offsets.last().expect("S_t is a branch");
    let mut c_star: Vec<Elem> = (0..=plan.labeled_chain.len()).map(|i| st_off + i).collect();
    c_star.push(iota);
    verified(&colored)?;
    if !CongruenceLattice::new(&colored.lattice).is_01_separating(&colored.lattice) {
        return Err(Error::VerificationFailed("frame is not {0,1}-separating".into()));
    }
    let data = FrameData { colored: colored.clone(), o, iota, branches: sets, cap_edge, thick, c_star };
    Ok(FrameLattice { colored, plan: plan.clone(), data, flags: Vec::new() })
}

impl FrameData {
    /// Lowest frame interval of branch `k` colored `c`: the one whose upper
    /// end has the fewest elements below it.
    fn locate(&self, plan: &FramePlan, c: Color) -> Result<Side> {
        let k = plan.branch_of(c).ok_or_else(|| Error::ColorNotFound(c.to_string()))?;
        if k == plan.t() + 1 {
            return Ok(Side::Cap { lower: self.cap_edge.0, upper: self.cap_edge.1 });
        }
        let f = &self.colored.lattice;
        let set = &self.branches[k];
        self.colored
            .edges_colored(c)
            .into_iter()
            .filter(|&(a, b)| set.contains(a) && set.contains(b))
            .min_by_key(|&(a, b)| (f.down_set(b).count(), a, b))
            .map(|(a, b)| Side::Branch { branch: k, lower: a, upper: b })
            .ok_or_else(|| Error::ColorNotFound(c.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Frame(Elem),
    Copy { flag: usize, orig: Elem },
    E(usize),
    F(usize),
}

/// The frame with every flag in `flags`: each flag doubles the original
/// interval `[u_i, b_i]` of each branch side below itself and adds `e`
/// over the copies of the lower ends (or the cap interval's lower end) and
/// `f ≺ ι` over `e` and the copies of the upper ends.
fn assemble(data: &FrameData, pe: Color, flags: &[FlagShape], eta: QuasiOrder) -> Result<ColoredLattice> {
    let fl = &data.colored.lattice;
    let nf = fl.len();
    let mut kinds: Vec<Kind> = (0..nf).map(Kind::Frame).collect();
    let mut names: Vec<String> = fl.names().to_vec();
    // Per flag: (copy index by frame element, e, f).
    let mut layout: Vec<(HashMap<Elem, Elem>, Elem, Elem)> = Vec::new();
    for (ell, shape) in flags.iter().enumerate() {
        let mut copies = HashMap::new();
        for (s, side) in shape.sides.iter().enumerate() {
            if let Side::Branch { branch, upper, .. } = *side {
                for x in data.branches[branch].intersection(fl.down_set(upper)).iter() {
                    copies.insert(x, kinds.len());
                    kinds.push(Kind::Copy { flag: ell, orig: x });
                    names.push(format!("f{ell}.{s}.{}", fl.name(x)));
                }
            }
        }
        let e = kinds.len();
        kinds.push(Kind::E(ell));
        names.push(format!("f{ell}.e"));
        kinds.push(Kind::F(ell));
        names.push(format!("f{ell}.f"));
        layout.push((copies, e, e + 1));
    }
    let total = kinds.len();
    let mut up: Vec<BitSet> = fl.elements().map(|x| fl.up_set(x).resized(total)).collect();
    up.resize(total, BitSet::new(total));
    up[data.o] = BitSet::full(total);
    for (shape, (copies, e, f)) in flags.iter().zip(&layout) {
        let (e, f) = (*e, *f);
        up[e] = [e, f, data.iota].into_iter().collect::<BitSet>().resized(total);
        up[f] = [f, data.iota].into_iter().collect::<BitSet>().resized(total);
        for side in &shape.sides {
            match *side {
                Side::Branch { lower, .. } => {
                    for (&x, &cx) in copies.iter().filter(|(&x, _)| data.branches.iter().any(|b| b.contains(x) && b.contains(lower))) {
                        let mut s = fl.up_set(x).resized(total);
                        for (&y, &cy) in copies {
                            if fl.leq(x, y) {
                                s.insert(cy);
                            }
                        }
                        s.insert(f);
                        if fl.leq(x, lower) {
                            s.insert(e);
                        }
                        up[cx] = s;
                    }
                }
                Side::Cap { lower, upper } => {
                    for z in fl.down_set(lower).iter() {
                        up[z].insert(e);
                        up[z].insert(f);
                    }
                    for z in fl.down_set(upper).iter() {
                        up[z].insert(f);
                    }
                }
            }
        }
    }
    let lattice = FiniteLattice::from_up_sets(names, up)?;
    let mut cmap = HashMap::new();
    for (a, b) in lattice.cover_pairs() {
        let c = match (kinds[a], kinds[b]) {
            (Kind::Frame(x), Kind::Frame(y)) => data.colored.try_color(x, y),
            (Kind::Copy { flag: f1, orig: x }, Kind::Copy { flag: f2, orig: y }) if f1 == f2 => data.colored.try_color(x, y),
            (Kind::Copy { orig: x, .. }, Kind::Frame(y)) if x == y => Some(pe),
            (Kind::Frame(x), Kind::Copy { .. }) if x == data.o => Some(pe),
            (Kind::E(i), Kind::F(j)) if i == j => Some(flags[i].g),
            (_, Kind::E(_)) | (_, Kind::F(_)) => Some(pe),
            (Kind::F(_), Kind::Frame(y)) if y == data.iota => Some(pe),
            _ => None,
        };
        let c = c.ok_or_else(|| {
            Error::VerificationFailed(format!("unexpected prime interval [{}, {}]", lattice.name(a), lattice.name(b)))
        })?;
        cmap.insert((a, b), c);
    }
    ColoredLattice::new(lattice, eta, cmap)
}

fn flag_shape(current: &FrameLattice, g: Color, h: Color) -> Result<FlagShape> {
    let plan = &current.plan;
    let (bg, bh) = (
        plan.branch_of(g).ok_or_else(|| Error::ColorNotFound(g.to_string()))?,
        plan.branch_of(h).ok_or_else(|| Error::ColorNotFound(h.to_string()))?,
    );
    if bg == bh {
        return Err(Error::SameBranch);
    }
    let (sg, sh) = (current.data.locate(plan, g)?, current.data.locate(plan, h)?);
    let sides = if bg < bh { [sg, sh] } else { [sh, sg] };
    Ok(FlagShape { g, sides })
}

fn eta_with(current: &FrameLattice, pairs: &[(Color, Color)]) -> QuasiOrder {
    let sym: Vec<(Color, Color)> = pairs.iter().flat_map(|&(g, h)| [(g, h), (h, g)]).collect();
    current.colored.colors.extended(&[], &sym)
}

/// Adds one equalizing flag for `g` and `h`, verifying the new coloring
/// and that chains produce the same elements of `D` as before.
pub fn add_flag(current: &FrameLattice, g: Color, h: Color) -> Result<FrameLattice> {
    let shape = flag_shape(current, g, h)?;
    let mut flags = current.flags.clone();
    flags.push(shape);
    let pe = Color::plain(current.plan.d.top() as u32);
    let colored = assemble(&current.data, pe, &flags, eta_with(current, &[(g, h)]))?;
    verified(&colored)?;
    let next = FrameLattice { colored, plan: current.plan.clone(), data: current.data.clone(), flags };
    if next.producible() != current.producible() {
        return Err(Error::VerificationFailed("flag changed the produced elements".into()));
    }
    Ok(next)
}

/// Adds the flags for every pair at once; the result equals applying
/// [`add_flag`] pair by pair.
pub fn apply_flags(current: &FrameLattice, pairs: &[(Color, Color)]) -> Result<FrameLattice> {
    let mut flags = current.flags.clone();
    for &(g, h) in pairs {
        flags.push(flag_shape(current, g, h)?);
    }
    let pe = Color::plain(current.plan.d.top() as u32);
    let colored = assemble(&current.data, pe, &flags, eta_with(current, pairs))?;
    Ok(FrameLattice { colored, plan: current.plan.clone(), data: current.data.clone(), flags })
}

/// Composes with `δ` (each color to the element it stands for), builds
/// `φ`, and checks the result independently.
fn certify(
    d: &FiniteLattice,
    q: &CandidateSubset,
    colored: &ColoredLattice,
    delta: &dyn Fn(Color) -> Elem,
    parts: Parts,
) -> Result<Certificate> {
    let map: HashMap<Color, Color> = colored.colors.carrier().iter().map(|&c| (c, Color::plain(delta(c) as u32))).collect();
    let retraction = Retraction::new(colored.colors.clone(), j_order(d), map)?;
    let hat = compose_coloring(colored, &retraction)?;
    certify_colored(d, q, hat, parts)
}

struct Parts {
    c_star: Option<CStar>,
    thick: Vec<(String, PrimeInterval)>,
    inner: Option<Box<Certificate>>,
    log: Vec<String>,
}

fn certify_colored(d: &FiniteLattice, q: &CandidateSubset, hat: ColoredLattice, parts: Parts) -> Result<Certificate> {
    let mu = mu_isomorphism(&hat, d)?;
    let l = &hat.lattice;
    let produced = chain_production(l, d, |a, b| hat.color(a, b).base as Elem);
    if &produced != q.members() {
        return Err(Error::VerificationFailed("chains of L do not produce exactly Q".into()));
    }
    let phi: Vec<(Congruence, Elem)> =
        mu.con.lattice().elements().map(|x| (mu.con.congruence(l, x), mu.phi[x])).collect();
    let cert = Certificate {
        lattice: l.clone(),
        d: d.clone(),
        q: q.clone(),
        phi,
        coloring: hat,
        c_star: parts.c_star,
        thick: parts.thick,
        inner: parts.inner,
        log: parts.log,
    };
    let report = verify_certificate(&cert);
    if !report.passed() {
        let failed: Vec<String> =
            report.failures().iter().map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())).collect();
        return Err(Error::VerificationFailed(failed.join("; ")));
    }
    Ok(cert)
}

/// `L` with `Con L ≅ D`, `φ(Princ L) = Q = srep(lc)`, `C*` a filter
/// labeled as `lc` followed by `1_D`, for `D` with join-irreducible top.
pub fn construct_ji_top(d: &FiniteLattice, q: &CandidateSubset, lc: &LabeledChain, options: &Options) -> Result<Certificate> {
    if d.len() < 2 || !d.is_join_irreducible(d.top()) {
        return Err(Error::PreconditionFailed("D needs a join-irreducible top and at least two elements".into()));
    }
    if lc.target() != d {
        return Err(Error::PreconditionFailed("labeled chain targets another lattice".into()));
    }
    let srep = lc.srep();
    if &srep != q.members() {
        let got: Vec<&str> = srep.iter().map(|x| d.name(x)).collect();
        return Err(Error::PreconditionFailed(format!("srep(C) = {got:?} differs from Q")));
    }
    let cap = match &options.cap {
        Some(c) => c.clone(),
        None => rigid_simple(0)?,
    };
    let plan = FramePlan::new(d, lc, cap)?;
    let frame = build_frame(&plan)?;
    let flagged = apply_flags(&frame, &plan.epsilon)?;
    let mut labels = lc.labels().to_vec();
    labels.push(d.top());
    let log = vec![
        format!("chains: {}", plan.t()),
        format!("frame: {} elements", frame.colored.lattice.len()),
        format!("flags: {}", plan.epsilon.len()),
        format!("L: {} elements", flagged.colored.lattice.len()),
    ];
    let parts = Parts {
        c_star: Some(CStar { chain: frame.c_star().to_vec(), labels }),
        thick: frame.thick().to_vec(),
        inner: None,
        log,
    };
    let cert = certify(d, q, &flagged.colored, &|c| flagged.label(c), parts)?;
    stipulate_aut(&cert, &options.aut)
}

fn singleton(d: &FiniteLattice, q: &CandidateSubset) -> Result<Certificate> {
    let l = chain(1);
    let coloring = ColoredLattice::new(l.clone(), j_order(d), HashMap::new())?;
    Ok(Certificate {
        lattice: l,
        d: d.clone(),
        q: q.clone(),
        phi: vec![(Congruence::delta(1), d.bottom())],
        coloring,
        c_star: None,
        thick: Vec::new(),
        inner: None,
        log: vec!["singleton".into()],
    })
}

/// The data of the upper ladder for `D` with join-reducible top.
#[derive(Clone, Debug)]
pub struct LadderPlan {
    pub decomposition: TopDecomposition,
    /// Maximal join-irreducibles strictly below `q`.
    pub ef: Vec<Elem>,
    /// For each `y ∈ Q` with `q < y < 1`, the least join-irreducible `a ≤ p`
    /// with `a ∨ q = y`.
    pub a: Vec<Elem>,
    /// Labels of `C1` from below, as elements of `D`.
    pub c1: Vec<Elem>,
}

pub fn ladder_plan(d: &FiniteLattice, q: &CandidateSubset) -> Result<LadderPlan> {
    let dec = d.decompose_top()?;
    let (p, qq) = (dec.p, dec.q);
    let jd = d.join_irreducibles();
    let below: Vec<Elem> = jd.iter().copied().filter(|&j| d.lt(j, qq)).collect();
    let ef: Vec<Elem> = below.iter().copied().filter(|&j| !below.iter().any(|&k| d.lt(j, k))).collect();
    let mut a = Vec::new();
    for y in q.members().iter().filter(|&y| d.lt(qq, y) && y != d.top()) {
        let x = jd
            .iter()
            .copied()
            .find(|&j| d.leq(j, p) && d.join(j, qq) == y)
            .ok_or_else(|| Error::Unrepresentable(format!("`{}` is not q joined with a join-irreducible", d.name(y))))?;
        a.push(x);
    }
    let mut c1: Vec<Elem> = ef.iter().chain(&a).flat_map(|&x| [p, x]).collect();
    if c1.is_empty() {
        c1.push(p);
    }
    Ok(LadderPlan { decomposition: dec, ef, a, c1 })
}

/// `L` with `Con L ≅ D` and `φ(Princ L) = Q` for `D` satisfying the
/// planarity and coatom condition.
pub fn construct_general(d: &FiniteLattice, q: &CandidateSubset, options: &Options) -> Result<Certificate> {
    let report = d.condition_iii()?;
    if !report.holds {
        return Err(Error::ConditionViolated(format!(
            "planar = {}, join-reducible coatoms = {}",
            report.planar,
            report.join_reducible_coatoms.len()
        )));
    }
    if d.len() == 1 {
        let cert = singleton(d, q)?;
        return stipulate_aut(&cert, &options.aut);
    }
    if d.is_join_irreducible(d.top()) {
        let lc = build_chain(d, q)?;
        return construct_ji_top(d, q, &lc, options);
    }
    let plan = ladder_plan(d, q)?;
    let (dec, ef, a_list) = (&plan.decomposition, &plan.ef, &plan.a);
    let (p, qq, dp) = (dec.p, dec.q, &dec.d_prime);
    let to_dp: HashMap<Elem, Elem> = dec.ideal_map.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let qp = CandidateSubset::new(dp, q.members().iter().filter_map(|x| to_dp.get(&x).copied()))?;
    let c0 = build_chain(dp, &qp)?;
    let c1: Vec<Elem> = plan.c1.iter().map(|x| to_dp[x]).collect();
    let lc = c0.glued_sum(&LabeledChain::unchecked(dp.clone(), c1.clone()));
    let inner = construct_ji_top(dp, &qp, &lc, &Options { cap: options.cap.clone(), aut: AutMode::Any })?;

    // L' recolored by elements of D.
    let carrier: Vec<Color> = dp.join_irreducibles().iter().map(|&j| Color::plain(dec.ideal_map[j] as u32)).collect();
    let pairs: Vec<(Color, Color)> = inner
        .coloring
        .colors
        .pairs()
        .into_iter()
        .map(|(a, b)| (Color::plain(dec.ideal_map[a.base as usize] as u32), Color::plain(dec.ideal_map[b.base as usize] as u32)))
        .collect();
    let lprime = inner
        .coloring
        .recolored(|c| Color::plain(dec.ideal_map[c.base as usize] as u32), QuasiOrder::generated(&carrier, &pairs))?;

    let levels = (ef.len() + a_list.len()).max(1);
    let pcols: Vec<Color> = (0..=levels).map(|i| Color::tagged(p as u32, P_TAG + i as i32)).collect();
    let plain = |v: &[Elem]| v.iter().map(|&x| Color::plain(x as u32)).collect::<Vec<_>>();
    let (sk, spine) = s_k_gadget_with(&pcols, &plain(ef), Color::plain(qq as u32), &plain(a_list), &|_| None)?;
    let cs = &inner.c_star.as_ref().expect("ji-top certificates carry C*").chain;
    let m0 = c0.len();
    if cs.len() - m0 != spine.len() {
        return Err(Error::VerificationFailed("spine and filter lengths differ".into()));
    }
    let lp = &lprime.lattice;
    let w = cs[m0];
    let data = GlueData {
        filter: lp.up_set(w).clone(),
        ideal: sk.lattice().down_set(*spine.last().expect("spine")).clone(),
        matching: cs[m0..].iter().copied().zip(spine.iter().copied()).collect(),
    };
    let upper = rename_colored(&sk.colored, |_, n| format!("s.{n}"));
    let glued = glue_colored(&lprime, &upper, &data)?;
    let mut thick: Vec<(String, PrimeInterval)> = inner
        .thick
        .iter()
        .map(|(n, e)| (n.clone(), PrimeInterval::new(glued.map1[e.lower], glued.map1[e.upper])))
        .collect();
    for (n, e) in sk.edges_with_prefix("thick") {
        thick.push((format!("s.{n}"), PrimeInterval::new(glued.map2[e.lower], glued.map2[e.upper])));
    }
    let log = vec![
        format!("p = {}, q = {}", d.name(p), d.name(qq)),
        format!("ef: {}, a: {}", ef.len(), a_list.len()),
        format!("L': {} elements", lp.len()),
        format!("S_k: {} elements", sk.lattice().len()),
        format!("L: {} elements", glued.colored.lattice.len()),
    ];
    let parts = Parts { c_star: None, thick, inner: Some(Box::new(inner)), log };
    let delta = |c: Color| if c.tag >= P_TAG { p } else { c.base as Elem };
    let cert = certify(d, q, &glued.colored, &delta, parts)?;
    stipulate_aut(&cert, &options.aut)
}

/// Substitutes simple lattices into the thick prime intervals so that
/// `Aut(L)` is trivial or isomorphic to `Aut(M0)`, then re-certifies.
pub fn stipulate_aut(cert: &Certificate, mode: &AutMode) -> Result<Certificate> {
    let m0 = match mode {
        AutMode::Any => return Ok(cert.clone()),
        AutMode::Rigid => None,
        AutMode::Group(m) => {
            if m.len() < 2 || CongruenceLattice::new(m).irreducible_count() != 1 {
                return Err(Error::MNotSimple);
            }
            Some(m)
        }
    };
    if cert.d.len() == 1 {
        return match m0 {
            Some(m) if automorphisms(m).len() > 1 => {
                Err(Error::PreconditionFailed("a one-element D admits only the trivial group".into()))
            }
            _ => Ok(cert.clone()),
        };
    }
    let mut thick = cert.thick.clone();
    thick.sort_by_key(|(n, _)| (!n.starts_with("cap."), n.clone()));
    let mut cl = cert.coloring.clone();
    let mut log = cert.log.clone();
    let mut next_rigid = 1;
    let mut new_thick = Vec::new();
    for (i, (name, e)) in thick.iter().enumerate() {
        let m = match m0 {
            Some(m) if i == 0 => m.clone(),
            _ => {
                next_rigid += 1;
                rigid_simple(next_rigid - 1)?
            }
        };
        let (next, image) = replace_prime_interval_mapped(&cl, *e, &m)?;
        cl = next;
        let lower = *m.lower_covers(m.top()).first().expect("|M| ≥ 2");
        new_thick.push((name.clone(), PrimeInterval::new(image[lower], image[m.top()])));
        log.push(format!("{name}: substituted {} elements", m.len()));
    }
    let parts = Parts { c_star: cert.c_star.clone(), thick: new_thick, inner: cert.inner.clone(), log };
    let out = certify_colored(&cert.d, &cert.q, cl, parts)?;
    let group = automorphism_group(&out.lattice);
    match m0 {
        None if group.order != 1 => Err(Error::AutMismatch(format!("|Aut(L)| = {}", group.order))),
        Some(m) if !group_isomorphic(&group, &automorphism_group(m))? => {
            Err(Error::AutMismatch(format!("|Aut(L)| = {}", group.order)))
        }
        _ => Ok(out),
    }
}
