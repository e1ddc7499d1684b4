//! JSON lattice documents and Graphviz DOT export.
//!
//! A document is an object with `name`, `elements`, `cover` (pairs of
//! element names, lower first) and the optional fields `q` (a candidate
//! subset), `colors` (triples `[lower, upper, color]`) and `designated`
//! (named prime intervals). The canonical form sorts `elements`, `cover`,
//! `q` and `colors` lexicographically and is printed with two-space
//! indentation and a trailing newline.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CandidateSubset, Elem, FiniteLattice};
use crate::quasicolor::ColoredLattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    #[serde(default)]
    pub name: String,
    pub elements: Vec<String>,
    pub cover: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub designated: BTreeMap<String, [String; 2]>,
}

/// Parses a document and checks that every referenced name is declared.
pub fn parse_document(text: &str) -> Result<LatticeDocument> {
    let doc: LatticeDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let names: BTreeSet<&str> = doc.elements.iter().map(String::as_str).collect();
    let check = |field: String, n: &str| {
        if names.contains(n) {
            Ok(())
        } else {
            Err(Error::Parse { location: field, message: format!("undeclared element `{n}`") })
        }
    };
    for (i, [a, b]) in doc.cover.iter().enumerate() {
        check(format!("cover[{i}]"), a)?;
        check(format!("cover[{i}]"), b)?;
    }
    for (i, x) in doc.q.iter().flatten().enumerate() {
        check(format!("q[{i}]"), x)?;
    }
    for (i, [a, b, _]) in doc.colors.iter().flatten().enumerate() {
        check(format!("colors[{i}]"), a)?;
        check(format!("colors[{i}]"), b)?;
    }
    for (k, [a, b]) in &doc.designated {
        check(format!("designated.{k}"), a)?;
        check(format!("designated.{k}"), b)?;
    }
    Ok(doc)
}

/// Canonical text of a document.
pub fn serialize(doc: &LatticeDocument) -> String {
    let mut doc = doc.clone();
    doc.canonicalize();
    let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
    s.push('\n');
    s
}

impl LatticeDocument {
    pub fn canonicalize(&mut self) {
        self.elements.sort();
        self.cover.sort();
        self.cover.dedup();
        if let Some(q) = &mut self.q {
            q.sort();
            q.dedup();
        }
        if let Some(c) = &mut self.colors {
            c.sort();
        }
    }

    pub fn from_lattice(name: &str, l: &FiniteLattice) -> Self {
        LatticeDocument {
            name: name.to_string(),
            elements: l.names().to_vec(),
            cover: l
                .cover_pairs()
                .into_iter()
                .map(|(a, b)| [l.name(a).to_string(), l.name(b).to_string()])
                .collect(),
            q: None,
            colors: None,
            designated: BTreeMap::new(),
        }
    }

    pub fn with_q(mut self, l: &FiniteLattice, q: &CandidateSubset) -> Self {
        self.q = Some(q.to_vec().into_iter().map(|x| l.name(x).to_string()).collect());
        self
    }

    pub fn with_colors(mut self, cl: &ColoredLattice, name: impl Fn(crate::quasicolor::Color) -> String) -> Self {
        let l = &cl.lattice;
        self.colors = Some(
            l.cover_pairs()
                .into_iter()
                .map(|(a, b)| [l.name(a).to_string(), l.name(b).to_string(), name(cl.color(a, b))])
                .collect(),
        );
        self
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice> {
        let names: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = self.cover.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        FiniteLattice::from_cover(&names, &pairs)
    }

    /// The candidate subset named by `q`, or `J⁺(D)` when absent.
    pub fn candidate(&self, l: &FiniteLattice) -> Result<CandidateSubset> {
        match &self.q {
            None => Ok(CandidateSubset::minimal(l)),
            Some(q) => {
                let idx = q
                    .iter()
                    .map(|n| l.index_of(n).ok_or_else(|| Error::UnknownName(n.clone())))
                    .collect::<Result<Vec<Elem>>>()?;
                CandidateSubset::new(l, idx)
            }
        }
    }

    /// Edge colors keyed by element indices of `l`.
    pub fn edge_colors(&self, l: &FiniteLattice) -> Result<HashMap<(Elem, Elem), String>> {
        let mut out = HashMap::new();
        for [a, b, c] in self.colors.iter().flatten() {
            let x = l.index_of(a).ok_or_else(|| Error::UnknownName(a.clone()))?;
            let y = l.index_of(b).ok_or_else(|| Error::UnknownName(b.clone()))?;
            out.insert((x, y), c.clone());
        }
        Ok(out)
    }

    /// Designated prime interval by key.
    pub fn designated_edge(&self, l: &FiniteLattice, key: &str) -> Result<(Elem, Elem)> {
        let [a, b] = self.designated.get(key).ok_or_else(|| Error::UnknownName(key.to_string()))?;
        let x = l.index_of(a).ok_or_else(|| Error::UnknownName(a.clone()))?;
        let y = l.index_of(b).ok_or_else(|| Error::UnknownName(b.clone()))?;
        Ok((x, y))
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph with edges drawn bottom to top and nodes ranked by height.
pub fn export_dot(l: &FiniteLattice) -> String {
    render_dot(l, |_, _| None)
}

/// As [`export_dot`], with edge labels naming colors.
pub fn export_dot_colored(cl: &ColoredLattice) -> String {
    render_dot(&cl.lattice, |a, b| Some(cl.color(a, b).to_string()))
}

/// DOT for a document, labeling edges by its color names when present.
pub fn export_dot_document(doc: &LatticeDocument) -> Result<String> {
    let l = doc.to_lattice()?;
    let colors = doc.edge_colors(&l)?;
    Ok(render_dot(&l, |a, b| colors.get(&(a, b)).cloned()))
}

fn render_dot(l: &FiniteLattice, label: impl Fn(Elem, Elem) -> Option<String>) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=circle];\n");
    let heights = l.heights();
    let mut ranks: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
    for x in l.elements() {
        ranks.entry(heights[x]).or_default().push(x);
        let _ = writeln!(out, "  n{x} [label={}];", quote(l.name(x)));
    }
    for members in ranks.values() {
        let ids: Vec<String> = members.iter().map(|x| format!("n{x};")).collect();
        let _ = writeln!(out, "  {{ rank=same; {} }}", ids.join(" "));
    }
    for (a, b) in l.cover_pairs() {
        match label(a, b) {
            Some(c) => {
                let _ = writeln!(out, "  n{a} -> n{b} [label={}];", quote(&c));
            }
            None => {
                let _ = writeln!(out, "  n{a} -> n{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}
