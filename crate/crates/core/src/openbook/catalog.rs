use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BaseLabel, Edge, EdgeKind, Node, OpenBook, PageGraph};
use crate::error::{Error, Result};
use crate::mcg::{blue_curves, Letter, TwistWord};

/// Named open books.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CatalogEntry {
    /// `n` plumbed copies of `DT*S¹`, monodromy `τ₋₁` on each.
    XiN { n: usize },
    /// `DT*S¹` with `τ²`.
    Rp3,
    /// `DT*S²ᵐ` with `τᵏ`, `k` odd.
    Ustilovsky { m: usize, k: i64 },
    /// `DT*Sⁿ` with `τ₁`.
    StdSphere { n: usize },
}

fn spheres(n: usize, count: usize) -> Vec<Node> {
    (1..=count).map(|i| Node { name: format!("s{i}"), base: BaseLabel::Sphere { n } }).collect()
}

fn chain_edges(nodes: &[Node]) -> Vec<Edge> {
    nodes.windows(2).map(|w| Edge::new(&w[0].name, &w[1].name, EdgeKind::Plumb)).collect()
}

pub fn catalog(entry: &CatalogEntry) -> Result<OpenBook> {
    let single = |n: usize, k: i64| -> Result<OpenBook> {
        OpenBook::new(PageGraph::sphere(n, "s1")?, TwistWord::single("s1", k))
    };
    match *entry {
        CatalogEntry::XiN { n } => {
            if n == 0 {
                return Err(Error::Catalog("xi_n needs n ≥ 1".into()));
            }
            let nodes = spheres(1, n);
            let edges = chain_edges(&nodes);
            let word = TwistWord::from_letters(nodes.iter().map(|v| Letter::named(&v.name, -1)));
            OpenBook::new(PageGraph::new(2, nodes, edges)?, word)
        }
        CatalogEntry::Rp3 => single(1, 2),
        CatalogEntry::Ustilovsky { m, k } => {
            if m < 2 {
                return Err(Error::Catalog(format!("ustilovsky needs m ≥ 2, got {m}")));
            }
            if k % 2 == 0 {
                return Err(Error::Catalog(format!("ustilovsky needs odd k, got {k}")));
            }
            single(2 * m, k)
        }
        CatalogEntry::StdSphere { n } => {
            if n == 0 {
                return Err(Error::Catalog("std_sphere needs n ≥ 1".into()));
            }
            single(n, 1)
        }
    }
}

/// Linear plumbing of `DT*S¹` nodes `b1, a1, c1, …, a_g` and the map from
/// each blue curve to its node.
pub fn surface_to_page(genus: usize) -> Result<(PageGraph, BTreeMap<String, String>)> {
    if genus == 0 {
        return Err(Error::ZeroGenus);
    }
    let names = blue_curves(genus);
    let nodes: Vec<Node> =
        names.iter().map(|c| Node { name: c.clone(), base: BaseLabel::Sphere { n: 1 } }).collect();
    let edges = chain_edges(&nodes);
    let map = names.iter().map(|c| (c.clone(), c.clone())).collect();
    Ok((PageGraph::new(2, nodes, edges)?, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::default_humphries_system;
    use crate::openbook::detect_negative_stabilization;

    #[test]
    fn xi_n_shape() {
        for n in 1..=5 {
            let ob = catalog(&CatalogEntry::XiN { n }).unwrap();
            assert_eq!(ob.page().nodes().len(), n);
            assert_eq!(ob.page().edges().len(), n - 1);
            assert_eq!(ob.monodromy().len(), n);
            assert!(ob.monodromy().letters().iter().all(|l| l.power == -1));
            assert!(detect_negative_stabilization(&ob));
        }
        assert_eq!(catalog(&CatalogEntry::XiN { n: 3 }).unwrap().monodromy().to_string(), "s1^-1 s2^-1 s3^-1");
    }

    #[test]
    fn singles() {
        let rp3 = catalog(&CatalogEntry::Rp3).unwrap();
        assert_eq!(rp3.dim(), 2);
        assert_eq!(rp3.monodromy().to_string(), "s1^2");
        let u = catalog(&CatalogEntry::Ustilovsky { m: 2, k: 3 }).unwrap();
        assert_eq!(u.page().nodes()[0].base, BaseLabel::Sphere { n: 4 });
        assert_eq!(u.monodromy().to_string(), "s1^3");
        assert!(catalog(&CatalogEntry::Ustilovsky { m: 2, k: 4 }).is_err());
        assert!(catalog(&CatalogEntry::Ustilovsky { m: 1, k: 3 }).is_err());
        assert_eq!(catalog(&CatalogEntry::StdSphere { n: 3 }).unwrap().monodromy().to_string(), "s1");
        assert!(catalog(&CatalogEntry::StdSphere { n: 0 }).is_err());
    }

    #[test]
    fn surface_pages() {
        let (p, map) = surface_to_page(1).unwrap();
        assert_eq!(p.nodes().len(), 2);
        assert_eq!(p.edges(), &[Edge::new("b1", "a1", EdgeKind::Plumb)]);
        assert_eq!(map["a1"], "a1");
        let (p, _) = surface_to_page(3).unwrap();
        assert_eq!((p.nodes().len(), p.edges().len()), (6, 5));
        assert!(surface_to_page(0).is_err());
    }

    #[test]
    fn adjacency_matches_intersections() {
        for g in 1..=3 {
            let (p, _) = surface_to_page(g).unwrap();
            let sys = default_humphries_system(g).unwrap();
            let blue = blue_curves(g);
            for a in &blue {
                for b in &blue {
                    if a != b {
                        let meets = sys.geom_int(a, b) == Some(1);
                        assert_eq!(p.plumbed(a, b), meets, "{a} {b}");
                    }
                }
            }
        }
    }
}
