//! Colored building blocks: the `K(α,β)` gadget, snakes, branches, the
//! `S_k` ladder, covering squares and rigid simple lattices.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::chainrep::LabeledChain;
use crate::congruence::{CongruenceLattice, PrimeInterval};
use crate::error::{Error, Result};
use crate::io::{parse_document, LatticeDocument};
use crate::iso::{are_isomorphic, is_rigid};
use crate::lattice::{chain, Elem, FiniteLattice};
use crate::quasicolor::{glue_colored, Color, ColoredLattice, GlueData, QuasiOrder};

/// A colored lattice with named prime intervals.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub colored: ColoredLattice,
    pub designated: Vec<(String, PrimeInterval)>,
}

impl Gadget {
    fn new(colored: ColoredLattice) -> Self {
        Gadget { colored, designated: Vec::new() }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.colored.lattice
    }

    pub fn edge(&self, name: &str) -> Option<PrimeInterval> {
        self.designated.iter().find(|(n, _)| n == name).map(|(_, p)| *p)
    }

    /// Designated intervals whose name starts with `prefix`.
    pub fn edges_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, PrimeInterval)> {
        self.designated.iter().filter(move |(n, _)| n.starts_with(prefix)).map(|(n, p)| (n.as_str(), *p))
    }

    fn designate(&mut self, name: impl Into<String>, p: PrimeInterval) {
        self.designated.push((name.into(), p));
    }

    fn verified(self) -> Result<Self> {
        self.colored.check().map_err(|v| Error::VerificationFailed(v.to_string()))?;
        Ok(self)
    }
}

/// Renames every element through `f`, keeping indices and colors.
pub fn rename_colored(cl: &ColoredLattice, f: impl Fn(Elem, &str) -> String) -> ColoredLattice {
    ColoredLattice::new(cl.lattice.renamed(f), cl.colors.clone(), cl.cmap().clone())
        .expect("renaming keeps the coloring")
}

fn is_simple(m: &FiniteLattice) -> bool {
    m.len() >= 2 && CongruenceLattice::new(m).irreducible_count() == 1
}

/// Replaces the prime interval `p` by a copy of the simple lattice `m`;
/// every new prime interval inherits `p`'s color. Also returns where the
/// elements of `m` went.
pub fn replace_prime_interval_mapped(
    cl: &ColoredLattice,
    p: PrimeInterval,
    m: &FiniteLattice,
) -> Result<(ColoredLattice, Vec<Elem>)> {
    if !is_simple(m) {
        return Err(Error::MNotSimple);
    }
    let c = cl.try_color(p.lower, p.upper).ok_or(Error::NotAnInterval)?;
    let (l, image) = cl.lattice.replace_edge(p.lower, p.upper, m)?;
    let mut cmap = cl.cmap().clone();
    cmap.remove(&(p.lower, p.upper));
    for (a, b) in m.cover_pairs() {
        cmap.insert((image[a], image[b]), c);
    }
    Ok((ColoredLattice::new(l, cl.colors.clone(), cmap)?, image))
}

/// [`replace_prime_interval_mapped`] without the element map.
pub fn replace_prime_interval(cl: &ColoredLattice, p: PrimeInterval, m: &FiniteLattice) -> Result<ColoredLattice> {
    let (out, _) = replace_prime_interval_mapped(cl, p, m)?;
    if cfg!(debug_assertions) && out.lattice.len() < 400 {
        out.check().map_err(|v| Error::VerificationFailed(v.to_string()))?;
    }
    Ok(out)
}

/// `B2` with the edge pair `[0,a]`, `[b,1]` colored `c1` and `[0,b]`,
/// `[a,1]` colored `c2`.
pub fn covering_square(c1: Color, c2: Color) -> Gadget {
    let l = FiniteLattice::from_cover(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
        .expect("B2 is a lattice");
    let (z, a, b, o) = (0, 1, 2, 3);
    let cmap = HashMap::from([((z, a), c1), ((b, o), c1), ((z, b), c2), ((a, o), c2)]);
    let colored = ColoredLattice::new(l, QuasiOrder::antichain(&[c1, c2]), cmap).expect("square coloring");
    let mut g = Gadget::new(colored);
    g.designate("rail", PrimeInterval::new(z, a));
    g.designate("rung", PrimeInterval::new(z, b));
    g.designate("top-rung", PrimeInterval::new(a, o));
    g
}

struct KData {
    doc: LatticeDocument,
    lattice: FiniteLattice,
}

fn k_data() -> &'static KData {
    static DATA: OnceLock<KData> = OnceLock::new();
    DATA.get_or_init(|| {
        let doc = parse_document(include_str!("../data/k_gadget.json")).expect("bundled K document parses");
        let lattice = doc.to_lattice().expect("bundled K is a lattice");
        KData { doc, lattice }
    })
}

/// The `K(α,β)` gadget: `Con ≅ C3`, `α`-colored intervals generate the
/// middle congruence and `β`-colored ones generate `∇`. Designated
/// intervals: `thick`, `alpha-edge` (`[0,b]` with `0 ≺ b ≺ 1`),
/// `beta-edge` (`[b,1]`) and `rung` (`[0,r]`, `β`-colored). With `m`, the
/// thick interval is replaced by `m`.
pub fn gadget_k(alpha: Color, beta: Color, m: Option<&FiniteLattice>) -> Result<Gadget> {
    if alpha == beta {
        return Err(Error::PreconditionFailed("K needs two distinct colors".into()));
    }
    let data = k_data();
    let l = data.lattice.clone();
    let named = data.doc.edge_colors(&l)?;
    let cmap = named
        .into_iter()
        .map(|(e, c)| (e, if c == "alpha" { alpha } else { beta }))
        .collect();
    let colored = ColoredLattice::new(l.clone(), QuasiOrder::chain(&[alpha, beta]), cmap)?;
    let mut g = Gadget::new(colored);
    for key in ["thick", "alpha-edge", "beta-edge", "rung"] {
        let (a, b) = data.doc.designated_edge(&l, key)?;
        g.designate(key, PrimeInterval::new(a, b));
    }
    if let Some(m) = m {
        if !is_simple(m) {
            return Err(Error::MNotSimple);
        }
        if m.len() > 2 {
            let thick = g.edge("thick").expect("K has a thick edge");
            let (colored, image) = replace_prime_interval_mapped(&g.colored, thick, m)?;
            g.colored = colored;
            let lower = *m.lower_covers(m.top()).first().expect("|M| > 2");
            g.designated.retain(|(n, _)| n != "thick");
            g.designate("thick", PrimeInterval::new(image[lower], image[m.top()]));
        }
    }
    let con = CongruenceLattice::new(g.lattice());
    if con.irreducible_count() != 2 || !con.is_chain() {
        return Err(Error::VerificationFailed("Con(K) is not a 3-element chain".into()));
    }
    g.verified()
}

/// Glues `upper` onto `lower`, identifying the filter `↑p.lower` of
/// `lower` (which must be the prime interval `p`) with the ideal
/// `↓q.upper` of `upper` (the prime interval `q`). Returns the glued
/// gadget; `upper`'s elements are prefixed to keep names distinct.
fn glue_on_edge(
    lower: &Gadget,
    p: PrimeInterval,
    upper: &Gadget,
    q: PrimeInterval,
    prefix: &str,
) -> Result<(Gadget, Vec<Elem>, Vec<Elem>)> {
    let l1 = lower.lattice();
    let l2 = upper.lattice();
    let filter = l1.up_set(p.lower).clone();
    let ideal = l2.down_set(q.upper).clone();
    let data = GlueData { filter, ideal, matching: vec![(p.lower, q.lower), (p.upper, q.upper)] };
    glue_with(lower, upper, &data, prefix)
}

fn glue_on_point(lower: &Gadget, x: Elem, upper: &Gadget, prefix: &str) -> Result<(Gadget, Vec<Elem>, Vec<Elem>)> {
    let l1 = lower.lattice();
    let l2 = upper.lattice();
    let data = GlueData {
        filter: l1.up_set(x).clone(),
        ideal: l2.down_set(l2.bottom()).clone(),
        matching: vec![(x, l2.bottom())],
    };
    glue_with(lower, upper, &data, prefix)
}

fn glue_with(lower: &Gadget, upper: &Gadget, data: &GlueData, prefix: &str) -> Result<(Gadget, Vec<Elem>, Vec<Elem>)> {
    let renamed = rename_colored(&upper.colored, |_, n| format!("{prefix}{n}"));
    let g = glue_colored(&lower.colored, &renamed, data)?;
    let mut out = Gadget::new(g.colored);
    for (n, e) in &lower.designated {
        out.designate(n.clone(), PrimeInterval::new(g.map1[e.lower], g.map1[e.upper]));
    }
    for (n, e) in &upper.designated {
        out.designate(format!("{prefix}{n}"), PrimeInterval::new(g.map2[e.lower], g.map2[e.upper]));
    }
    Ok((out, g.map1, g.map2))
}

/// The snake over the chain `colors[0] < colors[1] < …`: the two-element
/// lattice for one color, otherwise copies of `K(x_i, x_{i+1})` glued
/// along `[b,1]` of each copy and `[0,b]` of the next. Designated: `bottom`
/// (colored `x_1`), `top` (colored `x_m`) and one thick interval per copy.
pub fn snake(colors: &[Color]) -> Result<Gadget> {
    snake_with(colors, |_| None)
}

/// As [`snake`], substituting `m(i)` into the thick interval of copy `i`.
pub fn snake_with<'a>(colors: &[Color], m: impl Fn(usize) -> Option<&'a FiniteLattice>) -> Result<Gadget> {
    if colors.is_empty() {
        return Err(Error::NotAChain);
    }
    for (i, a) in colors.iter().enumerate() {
        if colors[..i].contains(a) {
            return Err(Error::NotAChain);
        }
    }
    if colors.len() == 1 {
        let l = chain(2);
        let cm = HashMap::from([((0, 1), colors[0])]);
        let mut g = Gadget::new(ColoredLattice::new(l, QuasiOrder::antichain(colors), cm)?);
        g.designate("bottom", PrimeInterval::new(0, 1));
        g.designate("top", PrimeInterval::new(0, 1));
        return Ok(g);
    }
    let piece = |i: usize| -> Result<Gadget> {
        let mut k = gadget_k(colors[i], colors[i + 1], m(i))?;
        k.designated = k
            .designated
            .into_iter()
            .filter(|(n, _)| n == "thick" || n == "alpha-edge" || n == "beta-edge")
            .map(|(n, p)| (if n == "thick" { format!("thick.{i}") } else { n }, p))
            .collect();
        Ok(k)
    };
    let mut acc = piece(0)?;
    for i in 1..colors.len() - 1 {
        let next = piece(i)?;
        let p = acc.edge("beta-edge").expect("previous copy has [b,1]");
        let q = next.edge("alpha-edge").expect("next copy has [0,b]");
        let (mut g, _, _) = glue_on_edge(&acc, p, &next, q, &format!("s{i}."))?;
        let bottom = g.edge("alpha-edge");
        let top = g.edge(&format!("s{i}.beta-edge"));
        g.designated.retain(|(n, _)| n.contains("thick"));
        let prefix = format!("s{i}.");
        g.designated = g
            .designated
            .into_iter()
            .map(|(n, p)| (n.trim_start_matches(&prefix).to_string(), p))
            .collect();
        g.designate("alpha-edge", bottom.expect("kept"));
        g.designate("beta-edge", top.expect("kept"));
        acc = g;
    }
    let bottom = acc.edge("alpha-edge").expect("snake bottom");
    let top = acc.edge("beta-edge").expect("snake top");
    acc.designated.retain(|(n, _)| n.starts_with("thick"));
    acc.designate("bottom", bottom);
    acc.designate("top", top);
    let want = QuasiOrder::chain(colors);
    if acc.colored.colors != want {
        return Err(Error::VerificationFailed("snake colors are not the input chain".into()));
    }
    acc.verified()
}

/// The alter ego of `x` used for the `i`-th edge (from 1) of a branch.
pub fn branch_color(x: Elem, i: usize) -> Color {
    Color::tagged(x as u32, -(i as i32))
}

/// `lc`'s chain with its `i`-th edge (from 1) labeled `x` colored by the
/// fresh color `x^(-i)`, over an antichain of colors. The alter-ego table
/// maps each fresh color back to its label.
pub fn branch_from_chain(lc: &LabeledChain) -> (Gadget, Vec<(Color, Elem)>) {
    let l = lc.chain();
    let mut cmap = HashMap::new();
    let mut table = Vec::new();
    for (i, &x) in lc.labels().iter().enumerate() {
        let c = branch_color(x, i + 1);
        cmap.insert((i, i + 1), c);
        table.push((c, x));
    }
    let carrier: Vec<Color> = table.iter().map(|(c, _)| *c).collect();
    let colored = ColoredLattice::new(l, QuasiOrder::antichain(&carrier), cmap).expect("chain coloring");
    (Gadget::new(colored), table)
}

/// One level of the `S_k` ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// A `K(x, q)` copy; forces `x < q`.
    Below(Color),
    /// A covering square with rail color `x` and rung color `q`.
    Square(Color),
}

/// The `S_k` ladder: a bare bottom edge colored `first`, then one piece per
/// level glued along `q`-colored rungs. Its spine `w ≺ c_1 ≺ …` is an
/// ideal whose edges, from below, carry `first` and then the level colors.
/// Designated: `spine.i` for the spine edges and `thick.x` for the thick
/// interval of each `K` copy.
pub fn ladder(first: Color, q: Color, levels: &[Level], thick: &dyn Fn(usize) -> Option<FiniteLattice>) -> Result<(Gadget, Vec<Elem>)> {
    let l = FiniteLattice::from_cover(&["w", "c0"], &[("w", "c0")])?;
    let cm = HashMap::from([((0, 1), first)]);
    let mut acc = Gadget::new(ColoredLattice::new(l, QuasiOrder::antichain(&[first]), cm)?);
    let mut spine = vec![0, 1];
    let mut top_rung: Option<PrimeInterval> = None;
    for (i, level) in levels.iter().enumerate() {
        let (piece, rail, rung, upper_rung) = match *level {
            Level::Below(x) => {
                let m = thick(i);
                let mut k = gadget_k(x, q, m.as_ref())?;
                let t = k.edge("thick").expect("K thick");
                k.designated.retain(|(n, _)| n == "alpha-edge" || n == "rung" || n == "beta-edge");
                k.designate(format!("thick.{i}"), t);
                let rail = k.edge("alpha-edge").unwrap();
                let rung = k.edge("rung").unwrap();
                let up = k.edge("beta-edge").unwrap();
                (k, rail, rung, up)
            }
            Level::Square(x) => {
                let s = covering_square(x, q);
                let rail = s.edge("rail").unwrap();
                let rung = s.edge("rung").unwrap();
                let up = s.edge("top-rung").unwrap();
                (s, rail, rung, up)
            }
        };
        let prefix = format!("l{i}.");
        let c = *spine.last().unwrap();
        let (g, _, map2) = match top_rung {
            None => glue_on_point(&acc, c, &piece, &prefix)?,
            Some(p) => glue_on_edge(&acc, p, &piece, rung, &prefix)?,
        };
        spine.push(map2[rail.upper]);
        top_rung = Some(PrimeInterval::new(map2[upper_rung.lower], map2[upper_rung.upper]));
        acc = g;
        acc.designated.retain(|(n, _)| n.contains("thick"));
        acc.designated = acc
            .designated
            .into_iter()
            .map(|(n, p)| (n.trim_start_matches(&prefix).to_string(), p))
            .collect();
    }
    for (i, w) in spine.windows(2).enumerate() {
        acc.designate(format!("spine.{i}"), PrimeInterval::new(w[0], w[1]));
    }
    Ok((acc, spine))
}

/// The `S_k` gadget for `p` alter egos `p_1, …`, the maximal elements
/// `ef` (zero to two) of `J(D') ∩ ↓q`, and `a_1, …, a_k`: spine colors
/// `p_1, e, p_2, f, p_3, a_1, p_4, …, a_k, p_last`, `K(e,q)` and `K(f,q)`
/// copies, and covering squares elsewhere. Without `e`, `f` and `a_i` the
/// spine is `p_1, p_2` with one square.
pub fn s_k_gadget(p: &[Color], ef: &[Color], q: Color, a: &[Color]) -> Result<(Gadget, Vec<Elem>)> {
    s_k_gadget_with(p, ef, q, a, &|_| None)
}

/// As [`s_k_gadget`], substituting `thick(i)` into the thick interval of
/// the `K` copy at level `i`.
pub fn s_k_gadget_with(
    p: &[Color],
    ef: &[Color],
    q: Color,
    a: &[Color],
    thick: &dyn Fn(usize) -> Option<FiniteLattice>,
) -> Result<(Gadget, Vec<Elem>)> {
    if p.len() != 1 + (ef.len() + a.len()).max(1) || ef.len() > 2 {
        return Err(Error::PreconditionFailed("S_k needs one more p alter ego than other levels".into()));
    }
    let mut levels = Vec::new();
    let mut ps = p[1..].iter();
    for &x in ef {
        levels.push(Level::Below(x));
        levels.push(Level::Square(*ps.next().unwrap()));
    }
    for &x in a {
        levels.push(Level::Square(x));
        levels.push(Level::Square(*ps.next().unwrap()));
    }
    if levels.is_empty() {
        levels.push(Level::Square(p[1]));
    }
    let (g, spine) = ladder(p[0], q, &levels, thick)?;
    let mut pairs: Vec<(Color, Color)> = ef.iter().map(|&x| (x, q)).collect();
    pairs.dedup();
    let mut carrier: Vec<Color> = p.to_vec();
    carrier.extend_from_slice(ef);
    carrier.push(q);
    carrier.extend_from_slice(a);
    if g.colored.colors != QuasiOrder::generated(&carrier, &pairs) {
        return Err(Error::VerificationFailed("S_k colors differ from H_k".into()));
    }
    Ok((g.verified()?, spine))
}

fn family() -> &'static Vec<FiniteLattice> {
    static FAMILY: OnceLock<Vec<FiniteLattice>> = OnceLock::new();
    FAMILY.get_or_init(|| {
        let docs: Vec<LatticeDocument> =
            serde_json::from_str(include_str!("../data/rigid_simple.json")).expect("bundled family parses");
        docs.iter().map(|d| d.to_lattice().expect("bundled member is a lattice")).collect()
    })
}

/// Size of the bundled rigid simple family.
pub fn rigid_simple_count() -> usize {
    family().len()
}

/// The `n`-th rigid simple lattice (at least three elements), re-verified
/// simple and rigid.
pub fn rigid_simple(n: usize) -> Result<FiniteLattice> {
    let m = family().get(n).ok_or(Error::ExhaustedFamily(n))?.clone();
    if !is_simple(&m) || m.len() < 3 {
        return Err(Error::VerificationFailed(format!("member {n} is not simple")));
    }
    if !is_rigid(&m) {
        return Err(Error::VerificationFailed(format!("member {n} is not rigid")));
    }
    Ok(m)
}

/// Checks that the first `n` members are pairwise non-isomorphic.
pub fn rigid_simple_prefix(n: usize) -> Result<Vec<FiniteLattice>> {
    let ms = (0..n).map(rigid_simple).collect::<Result<Vec<_>>>()?;
    for i in 0..n {
        for j in 0..i {
            if are_isomorphic(&ms[i], &ms[j]) {
                return Err(Error::VerificationFailed(format!("members {j} and {i} are isomorphic")));
            }
        }
    }
    Ok(ms)
}
