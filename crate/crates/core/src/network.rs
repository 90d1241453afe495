//! Tight-binding networks with exact rational on-site potentials and couplings.
//!
//! Vertex ids are 1-based throughout the public API.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Network {
    onsite: Vec<Rational>,
    // keyed by (min id, max id); values are never zero
    couplings: BTreeMap<(usize, usize), Rational>,
}

/// Two distinct vertex ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexPair {
    pub u: usize,
    pub v: usize,
}

impl VertexPair {
    pub fn new(u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::DegeneratePair(u));
        }
        Ok(Self { u, v })
    }

    pub fn swapped(self) -> Self {
        Self { u: self.v, v: self.u }
    }

    pub fn check(&self, net: &Network) -> Result<()> {
        net.check_id(self.u)?;
        net.check_id(self.v)
    }
}

/// Result of removing a vertex: the smaller network and, for each new id, the id it had before.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub network: Network,
    /// `origin[new_id - 1]` is the original id.
    pub origin: Vec<usize>,
}

impl Deletion {
    /// New id of an original vertex, if it survived.
    pub fn image(&self, original: usize) -> Option<usize> {
        self.origin.iter().position(|&o| o == original).map(|p| p + 1)
    }
}

impl Network {
    /// `n` isolated vertices at zero potential.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Malformed("network needs at least one vertex".into()));
        }
        Ok(Self { onsite: vec![Rational::zero(); n], couplings: BTreeMap::new() })
    }

    pub fn from_parts<I>(onsite: Vec<Rational>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut net = Self::new(onsite.len())?;
        net.onsite = onsite;
        for (i, j, w) in edges {
            let key = net.edge_key(i, j)?;
            if net.couplings.contains_key(&key) {
                return Err(Error::DuplicateEdge(key.0, key.1));
            }
            if !w.is_zero() {
                net.couplings.insert(key, w);
            }
        }
        Ok(net)
    }

    /// Unweighted-style constructor: every listed edge gets weight `k`.
    pub fn uniform(n: usize, edges: &[(usize, usize)], k: &Rational) -> Result<Self> {
        Self::from_parts(vec![Rational::zero(); n], edges.iter().map(|&(i, j)| (i, j, k.clone())))
    }

    pub fn n(&self) -> usize {
        self.onsite.len()
    }

    pub fn onsite(&self, id: usize) -> &Rational {
        &self.onsite[id - 1]
    }

    pub fn set_onsite(&mut self, id: usize, value: Rational) -> Result<()> {
        self.check_id(id)?;
        self.onsite[id - 1] = value;
        Ok(())
    }

    pub fn coupling(&self, i: usize, j: usize) -> Rational {
        let key = (i.min(j), i.max(j));
        self.couplings.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Sets (or with a zero weight, removes) the coupling between two distinct vertices.
    pub fn set_coupling(&mut self, i: usize, j: usize, w: Rational) -> Result<()> {
        let key = self.edge_key(i, j)?;
        if w.is_zero() {
            self.couplings.remove(&key);
        } else {
            self.couplings.insert(key, w);
        }
        Ok(())
    }

    /// Edges as `(i, j, w)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.couplings.iter().map(|(&(i, j), w)| (i, j, w))
    }

    pub fn edge_count(&self) -> usize {
        self.couplings.len()
    }

    pub fn neighbors(&self, id: usize) -> Vec<(usize, &Rational)> {
        self.edges()
            .filter_map(|(i, j, w)| match (i == id, j == id) {
                (true, _) => Some((j, w)),
                (_, true) => Some((i, w)),
                _ => None,
            })
            .collect()
    }

    /// Dense exact Hamiltonian, 0-based.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.n();
        let mut h = vec![vec![Rational::zero(); n]; n];
        for (i, e) in self.onsite.iter().enumerate() {
            h[i][i] = e.clone();
        }
        for (i, j, w) in self.edges() {
            h[i - 1][j - 1] = w.clone();
            h[j - 1][i - 1] = w.clone();
        }
        h
    }

    /// Row-major double-precision image of the Hamiltonian.
    pub fn matrix_f64(&self) -> Vec<f64> {
        let n = self.n();
        let mut h = vec![0.0; n * n];
        for (i, e) in self.onsite.iter().enumerate() {
            h[i * n + i] = to_f64(e);
        }
        for (i, j, w) in self.edges() {
            let w = to_f64(w);
            h[(i - 1) * n + (j - 1)] = w;
            h[(j - 1) * n + (i - 1)] = w;
        }
        h
    }

    pub fn check_id(&self, id: usize) -> Result<()> {
        if id == 0 || id > self.n() {
            return Err(Error::VertexOutOfRange { id, n: self.n() });
        }
        Ok(())
    }

    fn edge_key(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        self.check_id(i)?;
        self.check_id(j)?;
        if i == j {
            return Err(Error::Malformed(format!("self-coupling on vertex {i}; use onsite")));
        }
        Ok((i.min(j), i.max(j)))
    }

    /// Relabels vertices: vertex `i` becomes `perm[i - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &p in perm {
            self.check_id(p)?;
            if std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
        }
        if perm.len() != n {
            return Err(Error::Dimension { expected: n, got: perm.len() });
        }
        let mut onsite = vec![Rational::zero(); n];
        for (i, e) in self.onsite.iter().enumerate() {
            onsite[perm[i] - 1] = e.clone();
        }
        Self::from_parts(onsite, self.edges().map(|(i, j, w)| (perm[i - 1], perm[j - 1], w.clone())))
    }

    /// Induced subnetwork on the given ids, in the given order.
    pub fn restrict(&self, ids: &[usize]) -> Result<Self> {
        for &id in ids {
            self.check_id(id)?;
        }
        let onsite = ids.iter().map(|&id| self.onsite(id).clone()).collect();
        let mut edges = Vec::new();
        for (a, &i) in ids.iter().enumerate() {
            for (b, &j) in ids.iter().enumerate().skip(a + 1) {
                let w = self.coupling(i, j);
                if !w.is_zero() {
                    edges.push((a + 1, b + 1, w));
                }
            }
        }
        Self::from_parts(onsite, edges)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    n: usize,
    #[serde(default)]
    onsite: Option<Vec<String>>,
    #[serde(default)]
    edges: Vec<(usize, usize, String)>,
}

/// Parses the JSON network document `{ "n", "onsite", "edges" }`.
///
/// `onsite` may be omitted (all zero). Edges with weight zero are dropped.
pub fn parse_network(text: &str) -> Result<Network> {
    let raw: RawNetwork = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let onsite = match raw.onsite {
        Some(values) => {
            if values.len() != raw.n {
                return Err(Error::Malformed(format!(
                    "onsite has {} entries, expected {}",
                    values.len(),
                    raw.n
                )));
            }
            values.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?
        }
        None => vec![Rational::zero(); raw.n],
    };
    let mut net = Network::new(raw.n)?;
    net.onsite = onsite;
    let mut seen = std::collections::BTreeSet::new();
    for (i, j, w) in raw.edges {
        let key = net.edge_key(i, j)?;
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        let w = parse_rational(&w)?;
        if !w.is_zero() {
            net.couplings.insert(key, w);
        }
    }
    Ok(net)
}

/// Canonical document: edges sorted by `(min id, max id)`, rationals in lowest terms.
pub fn serialize_network(net: &Network) -> String {
    let quote = |r: &Rational| format!("\"{}\"", format_rational(r));
    let onsite: Vec<String> = net.onsite.iter().map(quote).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"n\": {},", net.n());
    let _ = writeln!(out, "  \"onsite\": [{}],", onsite.join(", "));
    if net.couplings.is_empty() {
        let _ = writeln!(out, "  \"edges\": []");
    } else {
        let _ = writeln!(out, "  \"edges\": [");
        let rows: Vec<String> =
            net.edges().map(|(i, j, w)| format!("    [{i}, {j}, {}]", quote(w))).collect();
        let _ = writeln!(out, "{}", rows.join(",\n"));
        let _ = writeln!(out, "  ]");
    }
    out.push_str("}\n");
    out
}

pub fn delete_vertex(net: &Network, w: usize) -> Result<Deletion> {
    net.check_id(w)?;
    if net.n() == 1 {
        return Err(Error::LastVertex);
    }
    let origin: Vec<usize> = (1..=net.n()).filter(|&i| i != w).collect();
    Ok(Deletion { network: net.restrict(&origin)?, origin })
}

/// Disjoint union of `base` and `ext` (ext ids shifted by `base.n()`), joined by `bridges`.
///
/// Each bridge is `(anchor in base, vertex in ext, weight)`; anchors must be listed in `anchors`.
/// `ext = None` is the empty extension and admits no bridges.
pub fn attach(
    base: &Network,
    anchors: &[usize],
    ext: Option<&Network>,
    bridges: &[(usize, usize, Rational)],
) -> Result<Network> {
    for &a in anchors {
        base.check_id(a)?;
    }
    let offset = base.n();
    let mut onsite = base.onsite.clone();
    let mut edges: Vec<(usize, usize, Rational)> =
        base.edges().map(|(i, j, w)| (i, j, w.clone())).collect();
    if let Some(ext) = ext {
        onsite.extend(ext.onsite.iter().cloned());
        edges.extend(ext.edges().map(|(i, j, w)| (i + offset, j + offset, w.clone())));
    }
    for (a, e, w) in bridges {
        if !anchors.contains(a) {
            return Err(Error::InvalidArgument(format!("bridge anchor {a} is not among the anchors")));
        }
        match ext {
            Some(ext) => ext.check_id(*e)?,
            None => return Err(Error::InvalidArgument("bridge into an empty extension".into())),
        }
        if w.is_zero() {
            return Err(Error::ZeroBridge(*a, *e));
        }
        edges.push((*a, e + offset, w.clone()));
    }
    Network::from_parts(onsite, edges)
}
