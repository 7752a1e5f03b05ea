//! Curve systems on `Σ_g` with one boundary component.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::matrix::intersection;
use super::word::{CurveRef, TwistWord};
use crate::error::{Error, Result};

/// A named simple closed curve with its homology class in the basis
/// `α₁..α_g, β₁..β_g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub class: Vec<i64>,
}

/// A chain `m₁, …, m_r` of curves meeting consecutively once. Odd chains
/// carry two boundary curves `d₁, d₂`; even chains carry one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub name: String,
    pub members: Vec<CurveRef>,
    pub boundary: Vec<String>,
}

impl Chain {
    /// Exponent of the chain product in the chain relation: `r + 1` for odd
    /// length `r`, `2r + 2` for even length.
    pub fn exponent(&self) -> u32 {
        let r = self.members.len() as u32;
        if r % 2 == 1 {
            r + 1
        } else {
            2 * r + 2
        }
    }

    /// `τ_{m₁} ⋯ τ_{m_r}`.
    pub fn product(&self) -> TwistWord {
        TwistWord::from_letters(self.members.iter().map(|c| super::Letter::new(c.clone(), 1)))
    }

    /// Left side of the chain relation, `(τ_{m₁} ⋯ τ_{m_r})^e`.
    pub fn lhs(&self) -> TwistWord {
        self.product().pow(self.exponent())
    }

    /// Right side: `τ_{d₁} τ_{d₂}` or `τ_d`.
    pub fn rhs(&self) -> TwistWord {
        TwistWord::from_letters(self.boundary.iter().map(|d| super::Letter::named(d, 1)))
    }
}

#[derive(Serialize, Deserialize)]
struct ChainFile {
    name: String,
    members: Vec<String>,
    boundary: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct IntersectionEntry {
    a: String,
    b: String,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    genus: usize,
    curves: Vec<Curve>,
    intersections: Vec<IntersectionEntry>,
    #[serde(default)]
    chains: Vec<ChainFile>,
}

/// Genus, named curves, a (partial) geometric intersection table, homology
/// classes and registered chains.
///
/// Pairs missing from the intersection table are treated as unknown: they
/// never commute under [`normalize`](super::normalize).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSystem {
    genus: usize,
    curves: Vec<Curve>,
    geom: BTreeMap<(String, String), u32>,
    chains: Vec<Chain>,
}

impl CurveSystem {
    /// Builds and validates a system.
    pub fn new(
        genus: usize,
        curves: Vec<Curve>,
        intersections: impl IntoIterator<Item = (String, String, u32)>,
        chains: Vec<Chain>,
    ) -> Result<Self> {
        if genus == 0 {
            return Err(Error::ZeroGenus);
        }
        let mut geom = BTreeMap::new();
        for (a, b, n) in intersections {
            let key = ordered(&a, &b);
            if let Some(old) = geom.insert(key, n) {
                if old != n {
                    return Err(Error::InvalidSystem(format!("conflicting entries for ({a}, {b})")));
                }
            }
        }
        let sys = CurveSystem { genus, curves, geom, chains };
        sys.validate()?;
        Ok(sys)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain(&self, name: &str) -> Result<&Chain> {
        self.chains.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownChain(name.into()))
    }

    pub fn curve(&self, name: &str) -> Result<&Curve> {
        self.curves.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCurve(name.into()))
    }

    pub(crate) fn index_of(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    /// Geometric intersection number, `None` when the table has no entry.
    pub fn geom_int(&self, a: &str, b: &str) -> Option<u32> {
        if a == b {
            return Some(0);
        }
        self.geom.get(&ordered(a, b)).copied()
    }

    /// Homology class of a plain curve or an image curve.
    pub fn class_of(&self, c: &CurveRef) -> Result<Vec<BigInt>> {
        match c {
            CurveRef::Named(n) => Ok(self.curve(n)?.class.iter().map(|&v| BigInt::from(v)).collect()),
            CurveRef::Image(img) => {
                let base = self.class_of(&CurveRef::Named(img.base.clone()))?;
                let f = super::rho(self, &img.frame)?;
                Ok(f.matrix().apply(&base))
            }
        }
    }

    /// Whether twists along `a` and `b` are known to commute.
    pub fn disjoint(&self, a: &CurveRef, b: &CurveRef) -> bool {
        if a == b {
            return true;
        }
        match (a, b) {
            (CurveRef::Named(x), CurveRef::Named(y)) => self.geom_int(x, y) == Some(0),
            _ => false,
        }
    }

    fn validate(&self) -> Result<()> {
        let dim = 2 * self.genus;
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.curves {
            if c.class.len() != dim {
                return Err(Error::InvalidSystem(format!(
                    "curve {} has class of length {}, expected {dim}",
                    c.name,
                    c.class.len()
                )));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(Error::InvalidSystem(format!("duplicate curve {}", c.name)));
            }
        }
        for ((a, b), &n) in &self.geom {
            let ca = self.class_of(&CurveRef::named(a.clone()))?;
            let cb = self.class_of(&CurveRef::named(b.clone()))?;
            let alg = intersection(&ca, &cb).abs();
            if alg > BigInt::from(n) {
                return Err(Error::InvalidSystem(format!(
                    "|<{a},{b}>| = {alg} exceeds geometric intersection {n}"
                )));
            }
        }
        for chain in &self.chains {
            self.validate_chain(chain)?;
        }
        Ok(())
    }

    fn validate_chain(&self, chain: &Chain) -> Result<()> {
        let r = chain.members.len();
        if r == 0 {
            return Err(Error::InvalidSystem(format!("chain {} is empty", chain.name)));
        }
        let want = if r % 2 == 1 { 2 } else { 1 };
        if chain.boundary.len() != want {
            return Err(Error::InvalidSystem(format!(
                "chain {} of length {r} needs {want} boundary curve(s)",
                chain.name
            )));
        }
        for d in &chain.boundary {
            self.curve(d)?;
        }
        for i in 0..r {
            for j in i + 1..r {
                let expected = u32::from(j == i + 1);
                let (a, b) = (&chain.members[i], &chain.members[j]);
                let actual = match (a, b) {
                    (CurveRef::Named(x), CurveRef::Named(y)) => self.geom_int(x, y),
                    // image curves carry no table entry; fall back to |algebraic|
                    _ => {
                        let alg = intersection(&self.class_of(a)?, &self.class_of(b)?).abs();
                        u32::try_from(alg).ok()
                    }
                };
                if actual != Some(expected) {
                    return Err(Error::InvalidSystem(format!(
                        "chain {}: intersection of {a} and {b} is {actual:?}, expected {expected}",
                        chain.name
                    )));
                }
            }
        }
        let lhs = super::rho(self, &chain.lhs())?;
        let rhs = super::rho(self, &chain.rhs())?;
        if lhs != rhs {
            return Err(Error::InvalidSystem(format!(
                "chain {}: relation fails on homology",
                chain.name
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SystemFile = serde_json::from_str(text)?;
        let chains = f
            .chains
            .into_iter()
            .map(|c| {
                let members = c
                    .members
                    .iter()
                    .map(|m| {
                        let w: TwistWord = m.parse()?;
                        match w.letters() {
                            [l] if l.power == 1 => Ok(l.curve.clone()),
                            _ => Err(Error::InvalidSystem(format!("bad chain member `{m}`"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Chain { name: c.name, members, boundary: c.boundary })
            })
            .collect::<Result<Vec<_>>>()?;
        CurveSystem::new(
            f.genus,
            f.curves,
            f.intersections.into_iter().map(|e| (e.a, e.b, e.n)),
            chains,
        )
    }

    pub fn to_json(&self) -> String {
        let f = SystemFile {
            genus: self.genus,
            curves: self.curves.clone(),
            intersections: self
                .geom
                .iter()
                .map(|((a, b), &n)| IntersectionEntry { a: a.clone(), b: b.clone(), n })
                .collect(),
            chains: self
                .chains
                .iter()
                .map(|c| ChainFile {
                    name: c.name.clone(),
                    members: c.members.iter().map(ToString::to_string).collect(),
                    boundary: c.boundary.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&f).expect("serializable")
    }
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Names of the Humphries chain `b₁, a₁, c₁, a₂, …, c_{g−1}, a_g` in order.
pub fn blue_curves(genus: usize) -> Vec<String> {
    let mut v = vec!["b1".to_string()];
    for i in 1..=genus {
        v.push(format!("a{i}"));
        if i < genus {
            v.push(format!("c{i}"));
        }
    }
    v
}

/// The Humphries generators of `Σ_g` together with the boundary curves of
/// the registered chains.
///
/// Curves: the blue chain `b₁, a₁, c₁, …, a_g`, then `b₂` (g ≥ 2), the
/// boundary-parallel curve `d`, the boundary curves `d1, d2` of the chain
/// `{b₁, a₁, c₁}` (g ≥ 2), and `e1, e2` bounding `{τ_{b₂}(a₂), c₂, a₃}`
/// (g ≥ 3).
///
/// Homology: `[a_i] = α_i`, `[b₁] = β₁`, `[b₂] = β₂`, `[c_i] = β_i + β_{i+1}`;
/// boundary classes of an odd chain are `±([m₁] − [m₃])`.
pub fn default_humphries_system(genus: usize) -> Result<CurveSystem> {
    if genus == 0 {
        return Err(Error::ZeroGenus);
    }
    let g = genus;
    let dim = 2 * g;
    let alpha = |i: usize| {
        let mut v = vec![0; dim];
        v[i - 1] = 1;
        v
    };
    let beta = |i: usize| {
        let mut v = vec![0; dim];
        v[g + i - 1] = 1;
        v
    };
    let add = |a: &[i64], b: &[i64], s: i64| a.iter().zip(b).map(|(x, y)| x + s * y).collect::<Vec<_>>();

    let blue = blue_curves(g);
    let mut curves = Vec::new();
    for name in &blue {
        let i: usize = name[1..].parse().expect("generated name");
        let class = match &name[..1] {
            "b" => beta(1),
            "a" => alpha(i),
            _ => add(&beta(i), &beta(i + 1), 1),
        };
        curves.push(Curve { name: name.clone(), class });
    }
    let mut inter: Vec<(String, String, u32)> = Vec::new();
    for i in 0..blue.len() {
        for j in i + 1..blue.len() {
            inter.push((blue[i].clone(), blue[j].clone(), u32::from(j == i + 1)));
        }
    }
    if g >= 2 {
        curves.push(Curve { name: "b2".into(), class: beta(2) });
        for b in &blue {
            inter.push(("b2".into(), b.clone(), u32::from(b == "a2")));
        }
    }
    // d is parallel to the boundary: null-homologous and disjoint from all.
    let all: Vec<String> = curves.iter().map(|c| c.name.clone()).collect();
    curves.push(Curve { name: "d".into(), class: vec![0; dim] });
    for c in &all {
        inter.push(("d".into(), c.clone(), 0));
    }
    let mut chains = vec![Chain {
        name: "full".into(),
        members: blue.iter().cloned().map(CurveRef::Named).collect(),
        boundary: vec!["d".into()],
    }];

    if g >= 2 {
        let m = ["b1", "a1", "c1"];
        let dcls = add(&beta(1), &add(&beta(1), &beta(2), 1), -1);
        curves.push(Curve { name: "d1".into(), class: dcls.clone() });
        curves.push(Curve { name: "d2".into(), class: dcls.iter().map(|v| -v).collect() });
        for d in ["d1", "d2"] {
            for x in m {
                inter.push((d.into(), x.into(), 0));
            }
            inter.push((d.into(), "d".into(), 0));
        }
        inter.push(("d1".into(), "d2".into(), 0));
        chains.push(Chain {
            name: "b1a1c1".into(),
            members: m.iter().map(|s| CurveRef::named(*s)).collect(),
            boundary: vec!["d1".into(), "d2".into()],
        });
    }
    if g >= 3 {
        // [τ_{b₂}(a₂)] = α₂ + β₂
        let m1 = add(&alpha(2), &beta(2), 1);
        let ecls = add(&m1, &alpha(3), -1);
        curves.push(Curve { name: "e1".into(), class: ecls.clone() });
        curves.push(Curve { name: "e2".into(), class: ecls.iter().map(|v| -v).collect() });
        for e in ["e1", "e2"] {
            for x in ["c2", "a3", "d"] {
                inter.push((e.into(), x.into(), 0));
            }
        }
        inter.push(("e1".into(), "e2".into(), 0));
        chains.push(Chain {
            name: "e".into(),
            members: vec![
                CurveRef::image("a2", TwistWord::single("b2", 1)),
                CurveRef::named("c2"),
                CurveRef::named("a3"),
            ],
            boundary: vec!["e1".into(), "e2".into()],
        });
    }
    CurveSystem::new(g, curves, inter, chains)
}
