mod common;

use std::collections::HashMap;

use conrep::certificate::Certificate;
use conrep::chainrep::{build_chain, LabeledChain};
use conrep::congruence::{prime_intervals, principal_congruence, projectivity_reach};
use conrep::gadgets::{gadget_k, s_k_gadget, snake};
use conrep::iso::{automorphisms, find_isomorphism};
use conrep::lattice::{downset_lattice, CandidateSubset, Elem, Poset};
use conrep::pipeline::{construct_general, ladder_plan, AutMode, Options};
use conrep::quasicolor::{glue_colored, mu_isomorphism, Color, ColoredLattice, GlueData, QuasiOrder};
use conrep::search::{m3, random_lattice};
use conrep::verify::{automorphism_group, candidate_subsets, enumerate_distributive, group_isomorphic, symmetric_group, verify_certificate};
use conrep::{BitSet, Error, FiniteLattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { passed: true, detail },
        Some(f) => Outcome { passed: false, detail: format!("{} failures, first: {f}", failures.len()) },
    }
}

/// C1 and C2 by brute-force congruence closure.
fn oracle_quasi_coloring(cl: &ColoredLattice) -> Result<(), String> {
    let l = &cl.lattice;
    let edges = prime_intervals(l);
    let cons: Vec<_> = edges.iter().map(|p| principal_congruence(l, p.lower, p.upper)).collect();
    let used: std::collections::BTreeSet<Color> = edges.iter().map(|p| cl.color(p.lower, p.upper)).collect();
    if used.len() != cl.colors.len() {
        return Err("not surjective".into());
    }
    for (i, p) in edges.iter().enumerate() {
        for (j, q) in edges.iter().enumerate() {
            let by_con = cons[i].same(q.lower, q.upper);
            let by_color = cl.colors.le(cl.color(q.lower, q.upper), cl.color(p.lower, p.upper));
            if by_con != by_color {
                return Err(format!("edges {i} and {j} disagree"));
            }
        }
    }
    Ok(())
}

fn certify_all(cert: &Certificate, failures: &mut Vec<String>, tag: &str) {
    let report = verify_certificate(cert);
    if !report.passed() {
        failures.push(format!("{tag}: {:?}", report.failures()));
    }
    let mut c = Some(cert);
    while let Some(x) = c {
        if let Err(e) = mu_isomorphism(&x.coloring, &x.d) {
            failures.push(format!("{tag}: mu {e}"));
        }
        c = x.inner.as_deref();
    }
}

/// Width of `J(D)` at most two and at most one join-reducible coatom.
fn condition_by_hand(d: &FiniteLattice) -> bool {
    let jd = d.join_irreducibles();
    let comparable = |a: Elem, b: Elem| d.leq(a, b) || d.leq(b, a);
    let wide = jd.iter().any(|&a| {
        jd.iter().any(|&b| jd.iter().any(|&c| !comparable(a, b) && !comparable(a, c) && !comparable(b, c)))
    });
    let reducible = d.lower_covers(d.top()).iter().filter(|&&c| d.lower_covers(c).len() >= 2).count();
    d.len() == 1 || (!wide && reducible <= 1)
}

struct Corpus {
    built: Vec<(FiniteLattice, CandidateSubset, Certificate)>,
    refused: usize,
}

fn criterion_1(corpus: &mut Corpus) -> Outcome {
    let mut failures = Vec::new();
    for d in enumerate_distributive(4).unwrap() {
        let holds = condition_by_hand(&d);
        for q in candidate_subsets(&d) {
            match construct_general(&d, &q, &Options::default()) {
                Ok(cert) if holds => {
                    certify_all(&cert, &mut failures, &format!("|D| = {}", d.len()));
                    corpus.built.push((d.clone(), q, cert));
                }
                Err(Error::ConditionViolated(_)) if !holds => corpus.refused += 1,
                Ok(_) => failures.push(format!("|D| = {}: certificate for a refused D", d.len())),
                Err(e) => failures.push(format!("|D| = {}: {e}", d.len())),
            }
        }
    }
    outcome(&failures, format!("{} (D, Q) pairs built and verified", corpus.built.len()))
}

fn criterion_2(corpus: &Corpus) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for (d, q, _) in corpus.built.iter().filter(|(d, _, _)| d.join_irreducibles().len() <= 3) {
        match construct_general(d, q, &Options { cap: None, aut: AutMode::Rigid }) {
            Ok(cert) => {
                certify_all(&cert, &mut failures, "rigid");
                if automorphisms(&cert.lattice).len() != 1 {
                    failures.push(format!("|D| = {}: nontrivial automorphism", d.len()));
                }
                n += 1;
            }
            Err(e) => failures.push(format!("|D| = {}: {e}", d.len())),
        }
    }
    outcome(&failures, format!("{n} rigid builds"))
}

fn criterion_3(corpus: &Corpus) -> Outcome {
    let mut failures = Vec::new();
    let s3 = symmetric_group(3);
    let mut n = 0;
    for (d, q, _) in corpus.built.iter().filter(|(d, _, _)| d.len() > 1) {
        match construct_general(d, q, &Options { cap: None, aut: AutMode::Group(m3()) }) {
            Ok(cert) => {
                certify_all(&cert, &mut failures, "group");
                if !group_isomorphic(&automorphism_group(&cert.lattice), &s3).unwrap() {
                    failures.push(format!("|D| = {}: Aut(L) is not S3", d.len()));
                }
                n += 1;
            }
            Err(e) => failures.push(format!("|D| = {}: {e}", d.len())),
        }
    }
    if n < 10 {
        failures.push(format!("only {n} cases"));
    }
    outcome(&failures, format!("{n} builds with Aut(L) ≅ S3"))
}

fn criterion_4(corpus: &Corpus) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for (_, _, cert) in &corpus.built {
        let report = verify_certificate(cert);
        for check in report.checks.iter().filter(|c| c.name.contains("c-star") || c.name.contains("separating")) {
            n += 1;
            if !check.passed {
                failures.push(format!("{}: {:?}", check.name, check.witness));
            }
        }
    }
    if n == 0 {
        failures.push("no C* checks ran".into());
    }
    outcome(&failures, format!("{n} C* side checks"))
}

fn criterion_5(corpus: &Corpus) -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..10_000 {
        let l = random_lattice(&mut rng, 1 + i % 11);
        let edges = prime_intervals(&l);
        let reach = projectivity_reach(&l);
        for (a, p) in edges.iter().enumerate() {
            let con = principal_congruence(&l, p.lower, p.upper);
            for (b, q) in edges.iter().enumerate() {
                if reach[a].contains(b) != con.same(q.lower, q.upper) {
                    failures.push(format!("lattice {i}: edges {a}, {b}"));
                }
            }
        }
    }
    let mut glued = 0;
    let mut tries = 0;
    while glued < 1_000 && tries < 200_000 {
        tries += 1;
        let (na, nb) = (rng.gen_range(2..=7), rng.gen_range(2..=7));
        let a = random_lattice(&mut rng, na);
        let b = random_lattice(&mut rng, nb);
        let w = rng.gen_range(0..a.len());
        let v = rng.gen_range(0..b.len());
        let (fa, fmap) = a.induced(a.up_set(w)).unwrap();
        let (ib, imap) = b.induced(b.down_set(v)).unwrap();
        let Some(iso) = find_isomorphism(&fa, &ib) else { continue };
        let cl1 = tagged(ColoredLattice::natural(a.renamed(|x, _| format!("a{x}"))), 1);
        let cl2 = tagged(ColoredLattice::natural(b.renamed(|x, _| format!("b{x}"))), 2);
        let data = GlueData {
            filter: a.up_set(w).clone(),
            ideal: b.down_set(v).clone(),
            matching: (0..fa.len()).map(|x| (fmap[x], imap[iso[x]])).collect(),
        };
        match glue_colored(&cl1, &cl2, &data) {
            Ok(g) => {
                glued += 1;
                if let Err(e) = oracle_quasi_coloring(&g.colored) {
                    failures.push(format!("gluing {glued}: {e}"));
                }
            }
            Err(e) => failures.push(format!("gluing rejected: {e}")),
        }
    }
    if glued < 1_000 {
        failures.push(format!("only {glued} gluings"));
    }
    let mut mus = 0;
    for (_, _, cert) in &corpus.built {
        let mut c = Some(cert);
        while let Some(x) = c {
            if let Err(e) = mu_isomorphism(&x.coloring, &x.d) {
                failures.push(format!("mu: {e}"));
            }
            mus += 1;
            c = x.inner.as_deref();
        }
    }
    outcome(&failures, format!("10000 lattices, {glued} gluings, {mus} colorings"))
}

fn tagged(cl: ColoredLattice, tag: i32) -> ColoredLattice {
    let f = |c: Color| Color::tagged(c.base, tag);
    let carrier: Vec<Color> = cl.colors.carrier().iter().map(|&c| f(c)).collect();
    let pairs: Vec<(Color, Color)> = cl.colors.pairs().into_iter().map(|(a, b)| (f(a), f(b))).collect();
    cl.recolored(f, QuasiOrder::generated(&carrier, &pairs)).unwrap()
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let (al, be) = (Color::plain(0), Color::plain(1));
    let k = gadget_k(al, be, None).unwrap();
    let kl = k.lattice();
    let edges = prime_intervals(kl);
    let cons: Vec<_> = edges.iter().map(|p| principal_congruence(kl, p.lower, p.upper)).collect();
    let mut distinct: Vec<_> = cons.clone();
    distinct.sort_by_key(|c| c.blocks().len());
    distinct.dedup();
    // Δ and the distinct principal congruences of prime intervals.
    if distinct.len() + 1 != 3 {
        failures.push(format!("K has {} congruences", distinct.len() + 1));
    }
    let (a, b) = (k.edge("alpha-edge").unwrap(), k.edge("beta-edge").unwrap());
    let (ca, cb) = (principal_congruence(kl, a.lower, a.upper), principal_congruence(kl, b.lower, b.upper));
    if !(ca.refines(&cb) && ca != cb) {
        failures.push("con(α-edge) ⊄ con(β-edge)".into());
    }
    for m in 1..=6u32 {
        let colors: Vec<Color> = (0..m).map(Color::plain).collect();
        let s = snake(&colors).unwrap();
        let con = conrep::congruence::CongruenceLattice::new(s.lattice());
        if con.irreducible_count() != m as usize || !con.is_chain() {
            failures.push(format!("snake {m}: J(Con) is not an {m}-chain"));
        }
    }
    let (q, e, f) = (Color::plain(10), Color::plain(11), Color::plain(12));
    for kk in 0..=4usize {
        let p: Vec<Color> = (0..kk + 3).map(|i| Color::tagged(0, 1000 + i as i32)).collect();
        let a: Vec<Color> = (0..kk).map(|i| Color::plain(20 + i as u32)).collect();
        let (g, _) = s_k_gadget(&p, &[e, f], q, &a).unwrap();
        if g.colored.colors.strict_pairs() != vec![(e, q), (f, q)] {
            failures.push(format!("S_{kk}: color poset is not H_{kk}"));
        }
        if let Err(err) = oracle_quasi_coloring(&g.colored) {
            failures.push(format!("S_{kk}: {err}"));
        }
    }
    let (d, names) = ladder_example_d();
    let byname = |n: &str| names[n];
    let qd = CandidateSubset::new(&d, d.j_plus().into_iter().chain([d.join(byname("q"), byname("a1")), d.join(byname("q"), byname("a2"))])).unwrap();
    let plan = ladder_plan(&d, &qd).unwrap();
    let want: Vec<Elem> = ["p", "e", "p", "f", "p", "a1", "p", "a2"].iter().map(|n| byname(n)).collect();
    let mut got = plan.c1.clone();
    // e and f are interchangeable.
    if got.len() == 8 && got[1] == byname("f") {
        got.swap(1, 3);
    }
    if got != want || plan.c1.len() != 2 * plan.a.len() + 4 {
        failures.push(format!("C1 labels {:?}", plan.c1));
    }
    match construct_general(&d, &qd, &Options::default()) {
        Ok(cert) => certify_all(&cert, &mut failures, "ladder example"),
        Err(err) => failures.push(format!("ladder example: {err}")),
    }
    outcome(&failures, "K, snakes up to 6, S_k up to 4, C1 of length 8".into())
}

/// `J(D)`: `e, f < a1 < a2 < p` and `e, f < q`.
fn ladder_example_d() -> (FiniteLattice, HashMap<String, Elem>) {
    let names = ["e", "f", "a1", "a2", "p", "q"];
    let below: &[(usize, usize)] = &[(0, 2), (1, 2), (2, 3), (3, 4), (0, 5), (1, 5)];
    let le = |a: usize, b: usize| {
        let mut reach = vec![a];
        let mut i = 0;
        while i < reach.len() {
            let x = reach[i];
            reach.extend(below.iter().filter(|e| e.0 == x).map(|e| e.1));
            i += 1;
        }
        reach.contains(&b)
    };
    let poset = Poset::from_fn(6, le).with_names(names.iter().map(|s| s.to_string()).collect());
    let d = downset_lattice(&poset);
    let map = names.iter().map(|n| (n.to_string(), d.index_of(n).unwrap())).collect();
    (d, map)
}

fn criterion_7(corpus: &Corpus) -> Outcome {
    let mut failures = Vec::new();
    let c3 = conrep::lattice::chain(3);
    let b3 = {
        let c2 = conrep::lattice::chain(2);
        c2.direct_product(&c2).direct_product(&c2)
    };
    for d in [c3.direct_product(&c3), b3] {
        match construct_general(&d, &CandidateSubset::minimal(&d), &Options::default()) {
            Err(Error::ConditionViolated(_)) => {}
            other => failures.push(format!("|D| = {}: {:?}", d.len(), other.map(|c| c.lattice.len()))),
        }
    }
    if corpus.refused == 0 {
        failures.push("no refusals in the corpus".into());
    }
    outcome(&failures, format!("{} refusals in the corpus", corpus.refused))
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for d in enumerate_distributive(4).unwrap().into_iter().filter(|d| d.len() > 1 && d.is_join_irreducible(d.top()) && d.condition_iii().unwrap().planar) {
        for q in candidate_subsets(&d) {
            n += 1;
            match build_chain(&d, &q) {
                Ok(lc) if &lc.srep() == q.members() => {}
                Ok(_) => failures.push(format!("|D| = {}: srep differs", d.len())),
                Err(e) => failures.push(format!("|D| = {}: {e}", d.len())),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ds = enumerate_distributive(4).unwrap();
    let ds: Vec<_> = ds.into_iter().filter(|d| d.len() > 1).collect();
    let mut chains = Vec::new();
    for d in &ds {
        let jd = d.join_irreducibles();
        let mut labels = jd.clone();
        for _ in 0..rng.gen_range(0..12) {
            labels.push(jd[rng.gen_range(0..jd.len())]);
        }
        for i in (1..labels.len()).rev() {
            labels.swap(i, rng.gen_range(0..=i));
        }
        chains.push(LabeledChain::new(d.clone(), labels).unwrap());
    }
    for _ in 0..100_000 {
        let lc = &chains[rng.gen_range(0..chains.len())];
        let d = lc.target();
        let n = lc.len();
        let (lo, hi) = {
            let (x, y) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
            (x.min(y), x.max(y))
        };
        let (lo2, hi2) = (rng.gen_range(0..=lo), rng.gen_range(hi..=n));
        if !d.leq(lc.erep(lo, hi), lc.erep(lo2, hi2)) {
            failures.push(format!("erep not monotone on [{lo}, {hi}] ⊆ [{lo2}, {hi2}]"));
        }
        let set: BitSet = lc.labels()[lo..hi].iter().copied().collect::<BitSet>().resized(d.len());
        let least = d.elements().filter(|&x| set.iter().all(|y| d.leq(y, x))).min_by_key(|&x| d.down_set(x).count());
        if least != Some(lc.erep(lo, hi)) {
            failures.push("erep is not the least upper bound".into());
        }
    }
    outcome(&failures, format!("{n} (D, Q) chain round trips, 100000 intervals"))
}

#[test]
fn acceptance() {
    let mut corpus = Corpus { built: Vec::new(), refused: 0 };
    let results = [
        ("1 exhaustive construction", criterion_1(&mut corpus)),
        ("2 rigidity", criterion_2(&corpus)),
        ("3 group stipulation", criterion_3(&corpus)),
        ("4 C* side conditions", criterion_4(&corpus)),
        ("5 lemma oracles", criterion_5(&corpus)),
        ("6 gadget contracts", criterion_6()),
        ("7 negative guard", criterion_7(&corpus)),
        ("8 chain module", criterion_8()),
    ];
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    assert!(results.iter().all(|(_, o)| o.passed));
}
