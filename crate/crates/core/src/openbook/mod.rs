//! Abstract open books: page graphs of disk cotangent bundles joined by
//! plumbing and boundary connected sum, with twist-word monodromies.

mod catalog;
mod iso;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcg::{normalize_with, Alphabet, CurveRef, Letter, TwistWord};

pub use catalog::{catalog, surface_to_page, CatalogEntry};
pub use iso::{canonical_cyclic, equivalent_cyclic};

/// Base of a page node: the node is `DT*` of this manifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseLabel {
    Sphere { n: usize },
    /// A closed `n`-manifold in `Sⁿ⁺¹` with trivial normal bundle.
    Hypersurface { n: usize, label: String },
}

impl BaseLabel {
    pub fn n(&self) -> usize {
        match self {
            BaseLabel::Sphere { n } | BaseLabel::Hypersurface { n, .. } => *n,
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self, BaseLabel::Sphere { .. })
    }
}

impl fmt::Display for BaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseLabel::Sphere { n } => write!(f, "S^{n}"),
            BaseLabel::Hypersurface { n, label } => write!(f, "{label}^{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Plumbing, gluing by `(q, p) ↦ (−q, p)`.
    Plumb,
    /// Boundary connected sum (a Weinstein 1-handle).
    Bsum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    pub base: BaseLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn new(a: &str, b: &str, kind: EdgeKind) -> Self {
        Edge { a: a.into(), b: b.into(), kind }
    }

    pub fn touches(&self, node: &str) -> bool {
        self.a == node || self.b == node
    }

    pub fn other(&self, node: &str) -> Option<&str> {
        if self.a == node {
            Some(&self.b)
        } else if self.b == node {
            Some(&self.a)
        } else {
            None
        }
    }
}

/// A connected graph of page pieces, all of fiber dimension `dim = 2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageGraph {
    dim: usize,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '\''))
}

impl PageGraph {
    pub fn new(dim: usize, nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedGraph(m));
        if dim < 2 || dim % 2 != 0 {
            return bad(format!("dim must be 2n with n ≥ 1, got {dim}"));
        }
        if nodes.is_empty() {
            return bad("page has no nodes".into());
        }
        let mut seen = BTreeSet::new();
        for node in &nodes {
            if !valid_name(&node.name) {
                return bad(format!("invalid node name `{}`", node.name));
            }
            if !seen.insert(node.name.as_str()) {
                return bad(format!("duplicate node `{}`", node.name));
            }
            if node.base.n() != dim / 2 {
                return bad(format!("node `{}` has n = {}, page needs n = {}", node.name, node.base.n(), dim / 2));
            }
        }
        for e in &edges {
            for end in [&e.a, &e.b] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::UnknownNode(end.clone()));
                }
            }
            if e.a == e.b {
                return bad(format!("self-loop at `{}`", e.a));
            }
        }
        let g = PageGraph { dim, nodes, edges };
        if !g.is_connected() {
            return bad("page graph is not connected".into());
        }
        Ok(g)
    }

    /// A single node `DT*Sⁿ`.
    pub fn sphere(n: usize, name: &str) -> Result<Self> {
        PageGraph::new(2 * n, vec![Node { name: name.into(), base: BaseLabel::Sphere { n } }], vec![])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Base dimension `n`.
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, name: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn degree(&self, name: &str) -> usize {
        self.edges.iter().filter(|e| e.touches(name)).count()
    }

    pub fn plumbed(&self, a: &str, b: &str) -> bool {
        self.edges.iter().any(|e| e.kind == EdgeKind::Plumb && e.touches(a) && e.other(a) == Some(b))
    }

    fn is_connected(&self) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.nodes[0].name.as_str()]);
        while let Some(v) = queue.pop_front() {
            if !seen.insert(v) {
                continue;
            }
            queue.extend(self.edges.iter().filter_map(|e| e.other(v)));
        }
        seen.len() == self.nodes.len()
    }

    /// Same graph with every base replaced by `Sⁿ⁺¹`.
    pub fn promoted(&self) -> PageGraph {
        let n = self.n() + 1;
        PageGraph {
            dim: 2 * n,
            nodes: self.nodes.iter().map(|v| Node { name: v.name.clone(), base: BaseLabel::Sphere { n } }).collect(),
            edges: self.edges.clone(),
        }
    }

    pub(crate) fn renamed(&self, f: &dyn Fn(&str) -> String) -> PageGraph {
        PageGraph {
            dim: self.dim,
            nodes: self.nodes.iter().map(|v| Node { name: f(&v.name), base: v.base.clone() }).collect(),
            edges: self.edges.iter().map(|e| Edge { a: f(&e.a), b: f(&e.b), kind: e.kind }).collect(),
        }
    }

    fn fresh_name(&self) -> String {
        (1..).map(|i| format!("s{i}")).find(|c| self.node(c).is_none()).expect("unbounded")
    }
}

/// Twists on distinct nodes commute unless the nodes are plumbed.
impl Alphabet for PageGraph {
    fn commutes(&self, a: &CurveRef, b: &CurveRef) -> bool {
        match (a.as_named(), b.as_named()) {
            (Some(x), Some(y)) => x == y || !self.plumbed(x, y),
            _ => a == b,
        }
    }

    fn order_index(&self, c: &CurveRef) -> Option<usize> {
        c.as_named().and_then(|n| self.index_of(n))
    }
}

/// Page graph plus monodromy word over its node names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBook {
    page: PageGraph,
    monodromy: TwistWord,
}

#[derive(Serialize, Deserialize)]
struct OpenBookJson {
    dim: usize,
    nodes: Vec<Node>,
    #[serde(default)]
    edges: Vec<Edge>,
    #[serde(default)]
    monodromy: TwistWord,
}

impl Serialize for OpenBook {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OpenBookJson {
            dim: self.page.dim,
            nodes: self.page.nodes.clone(),
            edges: self.page.edges.clone(),
            monodromy: self.monodromy.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpenBook {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = OpenBookJson::deserialize(d)?;
        let page = PageGraph::new(j.dim, j.nodes, j.edges).map_err(serde::de::Error::custom)?;
        OpenBook::new(page, j.monodromy).map_err(serde::de::Error::custom)
    }
}

impl OpenBook {
    /// Every letter must be a plain twist on an existing node.
    pub fn new(page: PageGraph, monodromy: TwistWord) -> Result<Self> {
        for l in monodromy.letters() {
            match l.curve.as_named() {
                Some(name) if page.node(name).is_some() => {}
                Some(name) => return Err(Error::UnknownNode(name.into())),
                None => {
                    return Err(Error::MalformedGraph(format!("monodromy letter `{l}` is not a twist on a node")))
                }
            }
        }
        Ok(OpenBook { page, monodromy })
    }

    pub fn page(&self) -> &PageGraph {
        &self.page
    }

    pub fn monodromy(&self) -> &TwistWord {
        &self.monodromy
    }

    pub fn dim(&self) -> usize {
        self.page.dim
    }

    /// Monodromy in normal form for this page.
    pub fn normalized_monodromy(&self) -> TwistWord {
        normalize_with(&self.page, &self.monodromy)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("open book serializes")
    }
}

impl fmt::Display for OpenBook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes: Vec<String> = self.page.nodes.iter().map(|v| format!("{}:{}", v.name, v.base)).collect();
        write!(f, "Aob(DT*[{}]", nodes.join(", "))?;
        for e in &self.page.edges {
            let sym = match e.kind {
                EdgeKind::Plumb => "§",
                EdgeKind::Bsum => "#b",
            };
            write!(f, " {}{sym}{}", e.a, e.b)?;
        }
        let w = if self.monodromy.is_empty() { "id".to_string() } else { self.monodromy.to_string() };
        write!(f, "; {w})")
    }
}

/// Result of [`validate_type1`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Type1Verdict {
    pub valid: bool,
    /// First violation found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

pub fn validate_type1(ob: &OpenBook) -> Type1Verdict {
    let n = ob.page.n();
    for v in &ob.page.nodes {
        if v.base.n() != n {
            return Type1Verdict { valid: false, diagnostic: Some(format!("node `{}` has the wrong dimension", v.name)) };
        }
    }
    for l in ob.monodromy.letters() {
        let name = l.curve.as_named().unwrap_or_default();
        match ob.page.node(name) {
            Some(v) if v.base.is_sphere() => {}
            Some(v) => {
                return Type1Verdict {
                    valid: false,
                    diagnostic: Some(format!("monodromy twists along `{}`, whose base {} is not a sphere", name, v.base)),
                }
            }
            None => {
                return Type1Verdict { valid: false, diagnostic: Some(format!("monodromy names unknown node `{name}`")) }
            }
        }
    }
    Type1Verdict { valid: true, diagnostic: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn power(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// Plumbs a new `DT*Sⁿ` onto `attach` and appends `τ_{±1}` on it.
pub fn stabilize(ob: &OpenBook, sign: Sign, attach: &str) -> Result<OpenBook> {
    if ob.page.node(attach).is_none() {
        return Err(Error::UnknownNode(attach.into()));
    }
    let name = ob.page.fresh_name();
    let mut page = ob.page.clone();
    page.nodes.push(Node { name: name.clone(), base: BaseLabel::Sphere { n: ob.page.n() } });
    page.edges.push(Edge::new(attach, &name, EdgeKind::Plumb));
    let mut word = ob.monodromy.clone();
    word.push(Letter::named(&name, sign.power()));
    OpenBook::new(page, word)
}

/// [`connected_sum_at`] joining the lexicographically least nodes.
pub fn connected_sum(ob1: &OpenBook, ob2: &OpenBook) -> Result<OpenBook> {
    connected_sum_at(ob1, ob2, None, None)
}

/// Disjoint union of the pages joined by one `bsum` edge, monodromy
/// `φ₁φ₂`. Names of `ob2` that clash with `ob1` get a `_2` suffix.
pub fn connected_sum_at(ob1: &OpenBook, ob2: &OpenBook, at1: Option<&str>, at2: Option<&str>) -> Result<OpenBook> {
    if ob1.dim() != ob2.dim() {
        return Err(Error::DimensionMismatch(ob1.dim(), ob2.dim()));
    }
    let least = |ob: &OpenBook| ob.page.nodes.iter().map(|v| v.name.clone()).min().expect("nonempty page");
    let a = at1.map_or_else(|| least(ob1), str::to_string);
    let b = at2.map_or_else(|| least(ob2), str::to_string);
    if ob1.page.node(&a).is_none() {
        return Err(Error::UnknownNode(a));
    }
    if ob2.page.node(&b).is_none() {
        return Err(Error::UnknownNode(b));
    }
    let taken: BTreeSet<String> = ob1.page.nodes.iter().map(|v| v.name.clone()).collect();
    let mut rename = BTreeMap::new();
    let mut used = taken.clone();
    for v in &ob2.page.nodes {
        let mut name = v.name.clone();
        while used.contains(&name) {
            name.push_str("_2");
        }
        used.insert(name.clone());
        rename.insert(v.name.clone(), name);
    }
    let f = |s: &str| rename.get(s).cloned().unwrap_or_else(|| s.to_string());
    let page2 = ob2.page.renamed(&f);
    let mut page = ob1.page.clone();
    page.nodes.extend(page2.nodes);
    page.edges.extend(page2.edges);
    page.edges.push(Edge::new(&a, &f(&b), EdgeKind::Bsum));
    let word = ob1.monodromy.concat(&ob2.monodromy.rename(&f));
    OpenBook::new(PageGraph::new(page.dim, page.nodes, page.edges)?, word)
}

/// Sound but incomplete: a `Sphere` node that is a leaf on one plumb edge
/// (or the only node), whose sole monodromy letter is `τ₋₁`.
pub fn detect_negative_stabilization(ob: &OpenBook) -> bool {
    let word = ob.normalized_monodromy();
    let single = ob.page.nodes.len() == 1;
    ob.page.nodes.iter().filter(|v| v.base.is_sphere()).any(|v| {
        let leaf = single || {
            let incident: Vec<&Edge> = ob.page.edges.iter().filter(|e| e.touches(&v.name)).collect();
            incident.len() == 1 && incident[0].kind == EdgeKind::Plumb
        };
        let occurrences: Vec<i64> =
            word.letters().iter().filter(|l| l.curve.as_named() == Some(v.name.as_str())).map(|l| l.power).collect();
        leaf && occurrences == [-1]
    })
}
