//! The output bundle of a construction and its JSON form.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::congruence::{Congruence, PrimeInterval};
use crate::error::{Error, Result};
use crate::io::LatticeDocument;
use crate::lattice::{CandidateSubset, Elem, FiniteLattice};
use crate::quasicolor::{Color, ColoredLattice, QuasiOrder};

/// The distinguished chain `C*` of a build with join-irreducible top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CStar {
    /// Elements of `C*` from the bottom up.
    pub chain: Vec<Elem>,
    /// `labels[i] ∈ J(D)` labels `[chain[i], chain[i+1]]`.
    pub labels: Vec<Elem>,
}

/// A lattice `L` with `φ: Con L ≅ D` and `φ(Princ L) = Q`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub lattice: FiniteLattice,
    pub d: FiniteLattice,
    pub q: CandidateSubset,
    /// `φ` on every congruence of `L`.
    pub phi: Vec<(Congruence, Elem)>,
    /// Coloring of `L` by `Color::plain(j)`, `j ∈ J(D)`, with
    /// `φ(con(𝔭))` the color of `𝔭`.
    pub coloring: ColoredLattice,
    pub c_star: Option<CStar>,
    /// Prime intervals open to substitution by simple lattices.
    pub thick: Vec<(String, PrimeInterval)>,
    /// Certificate of the build with join-irreducible top this one extends.
    pub inner: Option<Box<Certificate>>,
    pub log: Vec<String>,
}

/// The order of `J(D)` as colors `Color::plain(j)`.
pub fn j_order(d: &FiniteLattice) -> QuasiOrder {
    let jd = d.join_irreducibles();
    let carrier: Vec<Color> = jd.iter().map(|&j| Color::plain(j as u32)).collect();
    let mut pairs = Vec::new();
    for &a in &jd {
        for &b in &jd {
            if d.lt(a, b) {
                pairs.push((Color::plain(a as u32), Color::plain(b as u32)));
            }
        }
    }
    QuasiOrder::generated(&carrier, &pairs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiEntry {
    pub blocks: Vec<Vec<String>>,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CStarDocument {
    pub chain: Vec<String>,
    pub labels: Vec<String>,
}

/// Serialized certificate; element and color names refer to `lattice` and `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub lattice: LatticeDocument,
    pub d: LatticeDocument,
    pub phi: Vec<PhiEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_star: Option<CStarDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<CertificateDocument>>,
    #[serde(default)]
    pub log: Vec<String>,
}

fn lookup(l: &FiniteLattice, n: &str) -> Result<Elem> {
    l.index_of(n).ok_or_else(|| Error::UnknownName(n.to_string()))
}

impl Certificate {
    pub fn to_document(&self) -> CertificateDocument {
        let (l, d) = (&self.lattice, &self.d);
        let mut lattice = LatticeDocument::from_lattice("L", l)
            .with_colors(&self.coloring, |c| d.name(c.base as Elem).to_string());
        lattice.designated = self
            .thick
            .iter()
            .map(|(n, p)| (n.clone(), [l.name(p.lower).to_string(), l.name(p.upper).to_string()]))
            .collect::<BTreeMap<_, _>>();
        lattice.canonicalize();
        let mut ddoc = LatticeDocument::from_lattice("D", d).with_q(d, &self.q);
        ddoc.canonicalize();
        let phi = self
            .phi
            .iter()
            .map(|(c, x)| PhiEntry {
                blocks: c.blocks().iter().map(|b| b.iter().map(|&y| l.name(y).to_string()).collect()).collect(),
                image: d.name(*x).to_string(),
            })
            .collect();
        CertificateDocument {
            lattice,
            d: ddoc,
            phi,
            c_star: self.c_star.as_ref().map(|c| CStarDocument {
                chain: c.chain.iter().map(|&x| l.name(x).to_string()).collect(),
                labels: c.labels.iter().map(|&x| d.name(x).to_string()).collect(),
            }),
            inner: self.inner.as_ref().map(|c| Box::new(c.to_document())),
            log: self.log.clone(),
        }
    }

    pub fn from_document(doc: &CertificateDocument) -> Result<Certificate> {
        let l = doc.lattice.to_lattice()?;
        let d = doc.d.to_lattice()?;
        let q = doc.d.candidate(&d)?;
        let mut cmap = HashMap::new();
        for ((a, b), c) in doc.lattice.edge_colors(&l)? {
            cmap.insert((a, b), Color::plain(lookup(&d, &c)? as u32));
        }
        let coloring = ColoredLattice::new(l.clone(), j_order(&d), cmap)?;
        let mut phi = Vec::new();
        for e in &doc.phi {
            let blocks = e
                .blocks
                .iter()
                .map(|b| b.iter().map(|n| lookup(&l, n)).collect::<Result<Vec<Elem>>>())
                .collect::<Result<Vec<_>>>()?;
            let c = Congruence::from_blocks(l.len(), &blocks)
                .ok_or_else(|| Error::PreconditionFailed("phi entry is not a partition".into()))?;
            phi.push((c, lookup(&d, &e.image)?));
        }
        let c_star = match &doc.c_star {
            None => None,
            Some(c) => Some(CStar {
                chain: c.chain.iter().map(|n| lookup(&l, n)).collect::<Result<_>>()?,
                labels: c.labels.iter().map(|n| lookup(&d, n)).collect::<Result<_>>()?,
            }),
        };
        let thick = doc
            .lattice
            .designated
            .keys()
            .map(|k| {
                let (a, b) = doc.lattice.designated_edge(&l, k)?;
                Ok((k.clone(), PrimeInterval::new(a, b)))
            })
            .collect::<Result<Vec<_>>>()?;
        let inner = match &doc.inner {
            None => None,
            Some(i) => Some(Box::new(Certificate::from_document(i)?)),
        };
        Ok(Certificate { lattice: l, d, q, phi, coloring, c_star, thick, inner, log: doc.log.clone() })
    }
}
