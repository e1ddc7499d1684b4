//! Quasiordered color sets, quasi-colorings of prime intervals, and the
//! composition, gluing and extension results built on them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::congruence::{CongruenceLattice, PrimeInterval};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};

/// A color: `base` names an original color and `tag` distinguishes fresh
/// copies of it (`tag == 0` is the original).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Color {
    pub base: u32,
    pub tag: i32,
}

impl Color {
    pub const fn plain(base: u32) -> Self {
        Color { base, tag: 0 }
    }

    pub const fn tagged(base: u32, tag: i32) -> Self {
        Color { base, tag }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tag == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}^{}", self.base, self.tag)
        }
    }
}

/// A reflexive, transitive relation on a finite set of colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiOrder {
    carrier: Vec<Color>,
    index: HashMap<Color, usize>,
    /// `up[i]` holds every `j` with `carrier[i] ≤ carrier[j]`.
    up: Vec<BitSet>,
}

/// The least quasiorder on `carrier` containing `pairs` (each `(x, y)`
/// read as `x ≤ y`).
pub fn preogen(carrier: &[Color], pairs: &[(Color, Color)]) -> QuasiOrder {
    QuasiOrder::generated(carrier, pairs)
}

impl QuasiOrder {
    pub fn generated(carrier: &[Color], pairs: &[(Color, Color)]) -> Self {
        let carrier: Vec<Color> = carrier.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let index: HashMap<Color, usize> = carrier.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let n = carrier.len();
        let mut up: Vec<BitSet> = (0..n)
            .map(|i| {
                let mut s = BitSet::new(n);
                s.insert(i);
                s
            })
            .collect();
        for (a, b) in pairs {
            let (i, j) = (index[a], index[b]);
            up[i].insert(j);
        }
        // Warshall closure over bitset rows.
        for k in 0..n {
            let row = up[k].clone();
            for s in up.iter_mut() {
                if s.contains(k) {
                    s.union_with(&row);
                }
            }
        }
        QuasiOrder { carrier, index, up }
    }

    /// The discrete order on `carrier`.
    pub fn antichain(carrier: &[Color]) -> Self {
        Self::generated(carrier, &[])
    }

    /// The chain `carrier[0] < carrier[1] < …`.
    pub fn chain(carrier: &[Color]) -> Self {
        let pairs: Vec<(Color, Color)> = carrier.windows(2).map(|w| (w[0], w[1])).collect();
        Self::generated(carrier, &pairs)
    }

    pub fn carrier(&self) -> &[Color] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn contains(&self, c: Color) -> bool {
        self.index.contains_key(&c)
    }

    pub fn position(&self, c: Color) -> Option<usize> {
        self.index.get(&c).copied()
    }

    /// `a ≤ b`; false when either color is absent.
    pub fn le(&self, a: Color, b: Color) -> bool {
        match (self.index.get(&a), self.index.get(&b)) {
            (Some(&i), Some(&j)) => self.up[i].contains(j),
            _ => false,
        }
    }

    pub fn equivalent(&self, a: Color, b: Color) -> bool {
        self.le(a, b) && self.le(b, a)
    }

    pub fn is_order(&self) -> bool {
        (0..self.len()).all(|i| self.up[i].iter().all(|j| j == i || !self.up[j].contains(i)))
    }

    /// Every related pair, in carrier order.
    pub fn pairs(&self) -> Vec<(Color, Color)> {
        (0..self.len())
            .flat_map(|i| self.up[i].iter().map(move |j| (i, j)))
            .map(|(i, j)| (self.carrier[i], self.carrier[j]))
            .collect()
    }

    /// Non-reflexive related pairs.
    pub fn strict_pairs(&self) -> Vec<(Color, Color)> {
        self.pairs().into_iter().filter(|(a, b)| a != b).collect()
    }

    /// `preogen(self ∪ extra)` over `self`'s carrier plus any new colors.
    pub fn extended(&self, extra_carrier: &[Color], extra: &[(Color, Color)]) -> Self {
        let mut carrier = self.carrier.clone();
        carrier.extend_from_slice(extra_carrier);
        let mut pairs = self.pairs();
        pairs.extend_from_slice(extra);
        Self::generated(&carrier, &pairs)
    }

    /// Restriction to `keep`.
    pub fn restricted(&self, keep: &[Color]) -> Self {
        let pairs: Vec<(Color, Color)> = self
            .pairs()
            .into_iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .collect();
        Self::generated(keep, &pairs)
    }

    /// `self ⊆ other` as relations (colors missing from `other` fail).
    pub fn is_subrelation(&self, other: &QuasiOrder) -> bool {
        self.pairs().into_iter().all(|(a, b)| other.le(a, b))
    }

    /// First pair of `self` missing from `other`.
    pub fn first_missing(&self, other: &QuasiOrder) -> Option<(Color, Color)> {
        self.pairs().into_iter().find(|&(a, b)| !other.le(a, b))
    }
}

/// A surjective map between quasiordered color sets.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub source: QuasiOrder,
    pub target: QuasiOrder,
    pub map: HashMap<Color, Color>,
}

impl Retraction {
    pub fn new(source: QuasiOrder, target: QuasiOrder, map: HashMap<Color, Color>) -> Result<Self> {
        for &c in source.carrier() {
            match map.get(&c) {
                Some(d) if target.contains(*d) => {}
                _ => return Err(Error::ColorNotFound(format!("no image for {c}"))),
            }
        }
        let image: BTreeSet<Color> = map.values().copied().collect();
        if let Some(c) = target.carrier().iter().find(|c| !image.contains(c)) {
            return Err(Error::PreconditionFailed(format!("retraction misses {c}")));
        }
        Ok(Retraction { source, target, map })
    }

    pub fn apply(&self, c: Color) -> Color {
        self.map[&c]
    }
}

/// `{(x, y) : δ(x) ≤ δ(y)}` on the source carrier.
pub fn dker(delta: &Retraction) -> QuasiOrder {
    let carrier = delta.source.carrier();
    let mut pairs = Vec::new();
    for &x in carrier {
        for &y in carrier {
            if delta.target.le(delta.apply(x), delta.apply(y)) {
                pairs.push((x, y));
            }
        }
    }
    QuasiOrder::generated(carrier, &pairs)
}

/// A lattice with a color on every prime interval.
#[derive(Clone, Debug)]
pub struct ColoredLattice {
    pub lattice: FiniteLattice,
    pub colors: QuasiOrder,
    cmap: HashMap<(Elem, Elem), Color>,
}

/// Why a candidate quasi-coloring fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A color of the carrier labels no prime interval.
    NotSurjective(Color),
    /// A prime interval carries a color outside the carrier.
    UnknownColor(PrimeInterval),
    /// `γ(p) ≥ γ(q)` but `con(p) ⊉ con(q)`.
    C1(PrimeInterval, PrimeInterval),
    /// `con(p) ⊇ con(q)` but `γ(p) ≱ γ(q)`.
    C2(PrimeInterval, PrimeInterval),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSurjective(c) => write!(f, "color {c} is unused"),
            Violation::UnknownColor(p) => write!(f, "[{},{}] has a color outside the carrier", p.lower, p.upper),
            Violation::C1(p, q) => write!(
                f,
                "C1 fails: γ[{},{}] ≥ γ[{},{}] without con containment",
                p.lower, p.upper, q.lower, q.upper
            ),
            Violation::C2(p, q) => write!(
                f,
                "C2 fails: con[{},{}] ⊇ con[{},{}] without color comparability",
                p.lower, p.upper, q.lower, q.upper
            ),
        }
    }
}

impl ColoredLattice {
    /// Colors every prime interval; unlisted intervals are an error.
    pub fn new(
        lattice: FiniteLattice,
        colors: QuasiOrder,
        cmap: HashMap<(Elem, Elem), Color>,
    ) -> Result<Self> {
        for (a, b) in lattice.cover_pairs() {
            match cmap.get(&(a, b)) {
                Some(c) if colors.contains(*c) => {}
                Some(c) => return Err(Error::ColorNotFound(c.to_string())),
                None => {
                    return Err(Error::ColorNotFound(format!(
                        "[{},{}] is uncolored",
                        lattice.name(a),
                        lattice.name(b)
                    )))
                }
            }
        }
        if cmap.len() != lattice.cover_pairs().len() {
            return Err(Error::PreconditionFailed("colors given for non-covers".into()));
        }
        Ok(ColoredLattice { lattice, colors, cmap })
    }

    /// The natural coloring `𝔭 ↦ con(𝔭)`, with colors indexed by
    /// join-irreducible congruence.
    pub fn natural(lattice: FiniteLattice) -> Self {
        let con = CongruenceLattice::new(&lattice);
        let carrier: Vec<Color> = (0..con.irreducible_count() as u32).map(Color::plain).collect();
        let mut pairs = Vec::new();
        for i in 0..con.irreducible_count() {
            for j in con.irreducible_down(i).iter() {
                pairs.push((Color::plain(j as u32), Color::plain(i as u32)));
            }
        }
        let cmap = con
            .prime_intervals()
            .iter()
            .map(|&p| ((p.lower, p.upper), Color::plain(con.class_of(p) as u32)))
            .collect();
        ColoredLattice { colors: QuasiOrder::generated(&carrier, &pairs), lattice, cmap }
    }

    pub fn color(&self, lower: Elem, upper: Elem) -> Color {
        self.cmap[&(lower, upper)]
    }

    pub fn try_color(&self, lower: Elem, upper: Elem) -> Option<Color> {
        self.cmap.get(&(lower, upper)).copied()
    }

    pub fn cmap(&self) -> &HashMap<(Elem, Elem), Color> {
        &self.cmap
    }

    /// Prime intervals carrying `c`, sorted.
    pub fn edges_colored(&self, c: Color) -> Vec<(Elem, Elem)> {
        let mut v: Vec<(Elem, Elem)> = self.cmap.iter().filter(|(_, &d)| d == c).map(|(&e, _)| e).collect();
        v.sort();
        v
    }

    /// Colors actually used, sorted.
    pub fn used_colors(&self) -> Vec<Color> {
        self.cmap.values().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Checks surjectivity, C1 and C2 against the congruence oracle.
    pub fn check(&self) -> std::result::Result<(), Violation> {
        let con = CongruenceLattice::new(&self.lattice);
        self.check_with(&con)
    }

    pub fn check_with(&self, con: &CongruenceLattice) -> std::result::Result<(), Violation> {
        let edges = con.prime_intervals();
        // One representative interval per color, in scan order.
        let mut rep: HashMap<Color, PrimeInterval> = HashMap::new();
        let mut order: Vec<Color> = Vec::new();
        for &p in edges {
            let c = self.color(p.lower, p.upper);
            if !self.colors.contains(c) {
                return Err(Violation::UnknownColor(p));
            }
            if let std::collections::hash_map::Entry::Vacant(v) = rep.entry(c) {
                v.insert(p);
                order.push(c);
            }
        }
        if let Some(&c) = self.colors.carrier().iter().find(|c| !rep.contains_key(c)) {
            return Err(Violation::NotSurjective(c));
        }
        let geq = |p: PrimeInterval, q: PrimeInterval| con.irreducible_down(con.class_of(p)).contains(con.class_of(q));
        for &p in edges {
            let cp = self.color(p.lower, p.upper);
            let rp = rep[&cp];
            if !(geq(rp, p) && geq(p, rp)) {
                return Err(Violation::C1(rp, p));
            }
        }
        for &a in &order {
            for &b in &order {
                let (p, q) = (rep[&a], rep[&b]);
                let by_color = self.colors.le(b, a);
                let by_con = geq(p, q);
                if by_color && !by_con {
                    return Err(Violation::C1(p, q));
                }
                if by_con && !by_color {
                    return Err(Violation::C2(p, q));
                }
            }
        }
        Ok(())
    }

    /// Renames colors through `f`; the quasiorder is the image relation.
    pub fn recolored(&self, f: impl Fn(Color) -> Color, colors: QuasiOrder) -> Result<Self> {
        let cmap = self.cmap.iter().map(|(&e, &c)| (e, f(c))).collect();
        ColoredLattice::new(self.lattice.clone(), colors, cmap)
    }
}

/// Whether `cl` is a quasi-coloring; the first violation in a fixed scan
/// order otherwise.
pub fn is_quasi_coloring(cl: &ColoredLattice) -> std::result::Result<(), Violation> {
    cl.check()
}

const REVALIDATE_BELOW: usize = 400;

fn revalidate(cl: &ColoredLattice) -> Result<()> {
    if cfg!(debug_assertions) && cl.lattice.len() < REVALIDATE_BELOW {
        cl.check().map_err(|v| Error::VerificationFailed(v.to_string()))?;
    }
    Ok(())
}

/// `δ ∘ γ`, requiring `dker(δ)` to equal the coloring's quasiorder.
pub fn compose_coloring(cl: &ColoredLattice, delta: &Retraction) -> Result<ColoredLattice> {
    if delta.source != cl.colors {
        return Err(Error::PreconditionFailed("retraction source differs from the coloring's colors".into()));
    }
    let kernel = dker(delta);
    if let Some((a, b)) = kernel.first_missing(&cl.colors) {
        return Err(Error::KernelTooBig(format!("dker(δ) ⊄ ν: ({a}, {b})")));
    }
    if let Some((a, b)) = cl.colors.first_missing(&kernel) {
        return Err(Error::KernelTooBig(format!("ν ⊄ dker(δ), δ is not a homomorphism: ({a}, {b})")));
    }
    let out = cl.recolored(|c| delta.apply(c), delta.target.clone())?;
    revalidate(&out)?;
    Ok(out)
}

/// Data identifying the overlap of a gluing: a filter of the lower lattice,
/// an ideal of the upper one, and a matching between them.
#[derive(Clone, Debug)]
pub struct GlueData {
    pub filter: BitSet,
    pub ideal: BitSet,
    pub matching: Vec<(Elem, Elem)>,
}

/// A glued colored lattice with the element maps of both operands.
#[derive(Clone, Debug)]
pub struct ColoredGluing {
    pub colored: ColoredLattice,
    pub map1: Vec<Elem>,
    pub map2: Vec<Elem>,
}

/// Hall–Dilworth gluing of quasi-colored lattices.
pub fn glue_colored(cl1: &ColoredLattice, cl2: &ColoredLattice, data: &GlueData) -> Result<ColoredGluing> {
    let g = cl1.lattice.hall_dilworth_glue(&data.filter, &cl2.lattice, &data.ideal, &data.matching)?;
    let back: HashMap<Elem, Elem> = data.matching.iter().map(|&(a, b)| (b, a)).collect();
    let overlap: Vec<((Elem, Elem), (Elem, Elem))> = cl2
        .lattice
        .cover_pairs()
        .into_iter()
        .filter(|(a, b)| data.ideal.contains(*a) && data.ideal.contains(*b))
        .map(|(a, b)| ((back[&a], back[&b]), (a, b)))
        .collect();
    let witnessed: BTreeSet<Color> = overlap
        .iter()
        .filter(|(e1, e2)| cl1.color(e1.0, e1.1) == cl2.color(e2.0, e2.1))
        .map(|(e1, _)| cl1.color(e1.0, e1.1))
        .collect();
    for &c in cl1.colors.carrier() {
        if cl2.colors.contains(c) && !witnessed.contains(&c) {
            return Err(Error::SharedColorUnwitnessed(c.to_string()));
        }
    }
    let mut cmap = HashMap::new();
    for (&(a, b), &c) in cl1.cmap() {
        cmap.insert((g.map1[a], g.map1[b]), c);
    }
    for (&(a, b), &c) in cl2.cmap() {
        cmap.entry((g.map2[a], g.map2[b])).or_insert(c);
    }
    let mut pairs = cl1.colors.pairs();
    pairs.extend(cl2.colors.pairs());
    for (e1, e2) in &overlap {
        let (c1, c2) = (cl1.color(e1.0, e1.1), cl2.color(e2.0, e2.1));
        pairs.push((c1, c2));
        pairs.push((c2, c1));
    }
    let mut carrier: Vec<Color> = cl1.colors.carrier().to_vec();
    carrier.extend_from_slice(cl2.colors.carrier());
    let used: BTreeSet<Color> = cmap.values().copied().collect();
    let nu = QuasiOrder::generated(&carrier, &pairs);
    let used: Vec<Color> = used.into_iter().collect();
    let nu = if used.len() == nu.len() { nu } else { nu.restricted(&used) };
    let colored = ColoredLattice::new(g.lattice, nu, cmap)?;
    revalidate(&colored)?;
    Ok(ColoredGluing { colored, map1: g.map1, map2: g.map2 })
}

/// The isomorphism `μ: J(Con L) → J(D)` and its extension
/// `φ: Con L → D`.
#[derive(Clone, Debug)]
pub struct MuIsomorphism {
    pub con: CongruenceLattice,
    /// Join-irreducible congruence index to element of `D`.
    pub mu: Vec<Elem>,
    /// Element of `Con L` to element of `D`.
    pub phi: Vec<Elem>,
}

/// Builds `μ` and `φ` for a coloring onto `⟨J(D), ≤⟩` whose colors are
/// `Color::plain(j)` for `j ∈ J(D)`.
pub fn mu_isomorphism(cl: &ColoredLattice, d: &FiniteLattice) -> Result<MuIsomorphism> {
    if !cl.colors.is_order() {
        return Err(Error::NotAnOrder);
    }
    let jd = d.join_irreducibles();
    let expected: BTreeSet<Color> = jd.iter().map(|&j| Color::plain(j as u32)).collect();
    let actual: BTreeSet<Color> = cl.colors.carrier().iter().copied().collect();
    if expected != actual {
        return Err(Error::NotIso("color set differs from J(D)".into()));
    }
    for &a in &jd {
        for &b in &jd {
            if cl.colors.le(Color::plain(a as u32), Color::plain(b as u32)) != d.leq(a, b) {
                return Err(Error::NotIso(format!(
                    "color order differs from D at ({}, {})",
                    d.name(a),
                    d.name(b)
                )));
            }
        }
    }
    let con = CongruenceLattice::new(&cl.lattice);
    cl.check_with(&con).map_err(|v| Error::NotIso(v.to_string()))?;
    let mut mu = vec![usize::MAX; con.irreducible_count()];
    for &p in con.prime_intervals() {
        let j = cl.color(p.lower, p.upper).base as Elem;
        let k = con.class_of(p);
        if mu[k] != usize::MAX && mu[k] != j {
            return Err(Error::NotIso("μ is not well defined".into()));
        }
        mu[k] = j;
    }
    for a in 0..mu.len() {
        for b in 0..mu.len() {
            if con.irreducible_down(b).contains(a) != d.leq(mu[a], mu[b]) {
                return Err(Error::NotIso("μ is not an order isomorphism".into()));
            }
        }
    }
    let conl = con.lattice();
    let phi: Vec<Elem> = conl
        .elements()
        .map(|x| con.members(x).iter().fold(d.bottom(), |acc, a| d.join(acc, mu[a])))
        .collect();
    verify_lattice_iso(conl, d, &phi)?;
    Ok(MuIsomorphism { con, mu, phi })
}

/// Checks that `f` is an order isomorphism (hence a lattice isomorphism).
pub fn verify_lattice_iso(a: &FiniteLattice, b: &FiniteLattice, f: &[Elem]) -> Result<()> {
    if a.len() != b.len() || f.len() != a.len() {
        return Err(Error::NotIso(format!("sizes {} and {} differ", a.len(), b.len())));
    }
    let mut seen = BitSet::new(b.len());
    for &y in f {
        if !seen.insert(y) {
            return Err(Error::NotIso(format!("`{}` hit twice", b.name(y))));
        }
    }
    for x in a.elements() {
        for y in a.elements() {
            if a.leq(x, y) != b.leq(f[x], f[y]) {
                return Err(Error::NotIso(format!("order differs at ({}, {})", a.name(x), a.name(y))));
            }
        }
    }
    Ok(())
}
