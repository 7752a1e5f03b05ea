//! Cyclic equivalence of open books up to page isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{EdgeKind, OpenBook, PageGraph};
use crate::mcg::{normalize_with, Alphabet, Letter, TwistWord};

const MAX_NODES: usize = 12;
const MAX_CLASS: usize = 20_000;

/// Least shortest normal form among the cyclic conjugates of `w`. A move
/// takes a single twist that commutes to either end of the word and carries
/// it around to the other end.
pub fn canonical_cyclic(page: &PageGraph, w: &TwistWord) -> TwistWord {
    let start = normalize_with(page, w);
    let mut seen: BTreeSet<TwistWord> = BTreeSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some(cur) = stack.pop() {
        for next in cyclic_moves(page, &cur) {
            if seen.len() < MAX_CLASS && seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    seen.into_iter()
        .min_by(|a, b| unit_len(a).cmp(&unit_len(b)).then_with(|| a.cmp(b)))
        .expect("class contains its start")
}

fn unit_len(w: &TwistWord) -> u64 {
    w.letters().iter().map(|l| l.power.unsigned_abs()).sum()
}

fn cyclic_moves(page: &PageGraph, w: &TwistWord) -> Vec<TwistWord> {
    let units = unit_letters(w);
    let commutes = |a: &Letter, b: &Letter| page.commutes(&a.curve, &b.curve);
    let mut out = Vec::new();
    for (i, u) in units.iter().enumerate() {
        let rest = units[..i].iter().chain(&units[i + 1..]).cloned();
        if units[..i].iter().all(|v| commutes(u, v)) {
            out.push(normalize_with(page, &TwistWord::from_letters(rest.clone().chain([u.clone()]))));
        }
        if units[i + 1..].iter().all(|v| commutes(u, v)) {
            out.push(normalize_with(page, &TwistWord::from_letters(std::iter::once(u.clone()).chain(rest))));
        }
    }
    out
}

fn unit_letters(w: &TwistWord) -> Vec<Letter> {
    w.letters()
        .iter()
        .flat_map(|l| std::iter::repeat(Letter::new(l.curve.clone(), l.power.signum())).take(l.power.unsigned_abs() as usize))
        .collect()
}

/// True iff some isomorphism of labeled page graphs carries the monodromy of
/// `ob1` to a cyclic rotation of the monodromy of `ob2` (after
/// normalization). Pages above 12 nodes are never compared.
pub fn equivalent_cyclic(ob1: &OpenBook, ob2: &OpenBook) -> bool {
    let (p1, p2) = (ob1.page(), ob2.page());
    if p1.dim() != p2.dim()
        || p1.nodes().len() != p2.nodes().len()
        || p1.edges().len() != p2.edges().len()
        || p1.nodes().len() > MAX_NODES
    {
        return false;
    }
    let target = canonical_cyclic(p2, ob2.monodromy());
    let mentioned: BTreeSet<String> = ob1.monodromy().mentioned_names().into_iter().collect();
    let mut tried: HashSet<Vec<(String, String)>> = HashSet::new();
    let mut found = false;
    for_each_isomorphism(p1, p2, &mut |map| {
        let key: Vec<(String, String)> = mentioned.iter().map(|m| (m.clone(), map[m].clone())).collect();
        if !tried.insert(key) {
            return false;
        }
        let image = ob1.monodromy().rename(&|s| map.get(s).cloned().unwrap_or_else(|| s.to_string()));
        found = canonical_cyclic(p2, &image) == target;
        found
    });
    found
}

type Adjacency = Vec<BTreeMap<usize, Vec<EdgeKind>>>;

fn adjacency(p: &PageGraph) -> Adjacency {
    let mut adj: Adjacency = vec![BTreeMap::new(); p.nodes().len()];
    for e in p.edges() {
        let (a, b) = (p.index_of(&e.a).expect("valid edge"), p.index_of(&e.b).expect("valid edge"));
        adj[a].entry(b).or_default().push(e.kind);
        adj[b].entry(a).or_default().push(e.kind);
    }
    for row in &mut adj {
        for kinds in row.values_mut() {
            kinds.sort();
        }
    }
    adj
}

/// Calls `f` on each label- and edge-kind-preserving bijection until it
/// returns `true`.
fn for_each_isomorphism(p1: &PageGraph, p2: &PageGraph, f: &mut dyn FnMut(&BTreeMap<String, String>) -> bool) {
    let (a1, a2) = (adjacency(p1), adjacency(p2));
    let n = a1.len();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];

    fn extend(
        i: usize,
        p1: &PageGraph,
        p2: &PageGraph,
        a1: &Adjacency,
        a2: &Adjacency,
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        f: &mut dyn FnMut(&BTreeMap<String, String>) -> bool,
    ) -> bool {
        let n = assign.len();
        if i == n {
            let map = (0..n)
                .map(|k| (p1.nodes()[k].name.clone(), p2.nodes()[assign[k].expect("complete")].name.clone()))
                .collect();
            return f(&map);
        }
        for j in 0..n {
            if used[j] || p1.nodes()[i].base != p2.nodes()[j].base || a1[i].len() != a2[j].len() {
                continue;
            }
            let consistent = (0..i).all(|k| {
                let image = assign[k].expect("assigned");
                a1[i].get(&k) == a2[j].get(&image)
            });
            if !consistent {
                continue;
            }
            assign[i] = Some(j);
            used[j] = true;
            if extend(i + 1, p1, p2, a1, a2, assign, used, f) {
                return true;
            }
            assign[i] = None;
            used[j] = false;
        }
        false
    }

    extend(0, p1, p2, &a1, &a2, &mut assign, &mut used, f);
}
