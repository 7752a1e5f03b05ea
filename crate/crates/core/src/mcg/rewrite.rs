//! Word normalization and explicit relation rewrites.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::curves::CurveSystem;
use super::word::{CurveRef, Letter, TwistWord};
use crate::error::{Error, Result};

/// Commutation data and a total order on an alphabet of curves.
pub trait Alphabet {
    /// Twists along `a` and `b` commute (disjoint curves, or the same curve).
    fn commutes(&self, a: &CurveRef, b: &CurveRef) -> bool;

    /// Position in the fixed total order; `None` sorts after all indexed
    /// curves.
    fn order_index(&self, c: &CurveRef) -> Option<usize>;

    fn cmp_curves(&self, a: &CurveRef, b: &CurveRef) -> Ordering {
        let ka = self.order_index(a).unwrap_or(usize::MAX);
        let kb = self.order_index(b).unwrap_or(usize::MAX);
        ka.cmp(&kb).then_with(|| a.cmp(b))
    }
}

impl Alphabet for CurveSystem {
    fn commutes(&self, a: &CurveRef, b: &CurveRef) -> bool {
        self.disjoint(a, b)
    }

    fn order_index(&self, c: &CurveRef) -> Option<usize> {
        c.as_named().and_then(|n| self.index_of(n))
    }
}

/// Canonical form under free reduction and commutation of disjoint twists.
pub fn normalize(sys: &CurveSystem, w: &TwistWord) -> TwistWord {
    normalize_with(sys, w)
}

/// [`normalize`] over any alphabet.
///
/// Each pass emits the lexicographically least letter that can be commuted
/// to the front, merging it into an earlier letter on the same curve when
/// the letters in between all commute with it. Passes repeat until a fixed
/// point; every changing pass shortens the word or lowers it in the
/// lexicographic order, so the loop terminates.
pub fn normalize_with<A: Alphabet + ?Sized>(alpha: &A, w: &TwistWord) -> TwistWord {
    let mut cur: Vec<Letter> = w.clone().into_letters();
    loop {
        let next = pass(alpha, &cur);
        if next == cur {
            return TwistWord::from_letters(next);
        }
        cur = next;
    }
}

fn pass<A: Alphabet + ?Sized>(alpha: &A, letters: &[Letter]) -> Vec<Letter> {
    let mut rest: Vec<Letter> = letters.to_vec();
    let mut out: Vec<Letter> = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut pick = 0;
        for i in 1..rest.len() {
            let movable = rest[..i].iter().all(|l| alpha.commutes(&l.curve, &rest[i].curve));
            if movable && alpha.cmp_curves(&rest[i].curve, &rest[pick].curve) == Ordering::Less {
                pick = i;
            }
        }
        let letter = rest.remove(pick);
        let mut merged = false;
        for j in (0..out.len()).rev() {
            if out[j].curve == letter.curve {
                out[j].power += letter.power;
                if out[j].power == 0 {
                    out.remove(j);
                }
                merged = true;
                break;
            }
            if !alpha.commutes(&out[j].curve, &letter.curve) {
                break;
            }
        }
        if !merged && letter.power != 0 {
            out.push(letter);
        }
    }
    out
}

/// Direction of a chain-relation rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `(τ_{m₁}⋯τ_{m_r})^e → τ_{d₁}τ_{d₂}` (or `τ_d`).
    Forward,
    /// The reverse substitution.
    Backward,
}

/// Replaces the first occurrence of one side of a registered chain relation
/// by the other side.
///
/// The pattern is looked up in `w` as written and, failing that, in
/// `normalize(w)` against the normalized pattern.
pub fn apply_chain_relation(
    sys: &CurveSystem,
    w: &TwistWord,
    chain: &str,
    direction: Direction,
) -> Result<TwistWord> {
    let chain = sys.chain(chain)?;
    let (from, to) = match direction {
        Direction::Forward => (chain.lhs(), chain.rhs()),
        Direction::Backward => (chain.rhs(), chain.lhs()),
    };
    let hays = [w.clone(), normalize(sys, w)];
    let needles = [from.clone(), normalize(sys, &from)];
    for hay in &hays {
        for needle in &needles {
            if let Some(at) = find(hay.letters(), needle.letters()) {
                let h = hay.letters();
                let out = h[..at]
                    .iter()
                    .cloned()
                    .chain(to.letters().iter().cloned())
                    .chain(h[at + needle.len()..].iter().cloned());
                return Ok(TwistWord::from_letters(out));
            }
        }
    }
    Err(Error::PatternNotFound(chain.name.clone()))
}

fn find(hay: &[Letter], needle: &[Letter]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| hay[i..i + needle.len()] == *needle)
}

/// Whether every curve mentioned by `w`, including bases and frames of image
/// curves, lies in `allowed`.
pub fn uses_only<S: AsRef<str>>(w: &TwistWord, allowed: &[S]) -> bool {
    let allowed: BTreeSet<&str> = allowed.iter().map(AsRef::as_ref).collect();
    w.mentioned_names().iter().all(|n| allowed.contains(n.as_str()))
}

#[cfg(test)]
mod tests {
    use super::super::{blue_curves, default_humphries_system, rho};
    use super::*;

    fn w(s: &str) -> TwistWord {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        let s1 = default_humphries_system(1).unwrap();
        assert!(normalize(&s1, &w("a1 a1^-1")).is_empty());
        assert_eq!(normalize(&s1, &w("a1^2 a1^-1")), w("a1"));
        let s2 = default_humphries_system(2).unwrap();
        assert_eq!(normalize(&s2, &w("a2 a1")), w("a1 a2"));
    }

    #[test]
    fn normalize_cancels_across_commuting_letters() {
        let s = default_humphries_system(2).unwrap();
        // a1 and a2 are disjoint
        assert_eq!(normalize(&s, &w("a2 a1 a2^-1")), w("a1"));
        // b1 and a1 intersect, so nothing moves
        assert_eq!(normalize(&s, &w("a1 b1 a1^-1")), w("a1 b1 a1^-1"));
    }

    #[test]
    fn normalize_is_idempotent_and_rho_invariant() {
        let s = default_humphries_system(3).unwrap();
        let x = w("c2 a3 b1 a1^-1 a3 b2 c1 b1^2 a2 a1 c2^-1");
        let n = normalize(&s, &x);
        assert_eq!(normalize(&s, &n), n);
        assert_eq!(rho(&s, &n).unwrap(), rho(&s, &x).unwrap());
        assert!(n.len() <= x.len());
    }

    #[test]
    fn chain_relation_forward_and_back() {
        let s = default_humphries_system(3).unwrap();
        let lhs = s.chain("b1a1c1").unwrap().lhs();
        let fwd = apply_chain_relation(&s, &lhs, "b1a1c1", Direction::Forward).unwrap();
        assert_eq!(fwd, w("d1 d2"));
        let back = apply_chain_relation(&s, &w("d1 d2"), "b1a1c1", Direction::Backward).unwrap();
        assert_eq!(back, lhs);
    }

    #[test]
    fn chain_relation_in_context_preserves_rho() {
        let s = default_humphries_system(3).unwrap();
        let chain = s.chain("e").unwrap();
        let word = w("a1 c2").concat(&chain.lhs()).concat(&w("b2^-1"));
        let out = apply_chain_relation(&s, &word, "e", Direction::Forward).unwrap();
        assert_eq!(out, w("a1 c2 e1 e2 b2^-1"));
        assert_eq!(rho(&s, &out).unwrap(), rho(&s, &word).unwrap());
    }

    #[test]
    fn chain_relation_up_to_commutation() {
        let s = default_humphries_system(2).unwrap();
        // d2 d1 only matches after sorting the disjoint pair
        let out = apply_chain_relation(&s, &w("d2 d1"), "b1a1c1", Direction::Backward).unwrap();
        assert_eq!(rho(&s, &out).unwrap(), rho(&s, &w("d1 d2")).unwrap());
    }

    #[test]
    fn chain_relation_errors() {
        let s = default_humphries_system(2).unwrap();
        assert_eq!(
            apply_chain_relation(&s, &w("a1"), "b1a1c1", Direction::Forward),
            Err(Error::PatternNotFound("b1a1c1".into()))
        );
        assert!(matches!(
            apply_chain_relation(&s, &w("a1"), "nope", Direction::Forward),
            Err(Error::UnknownChain(_))
        ));
    }

    #[test]
    fn uses_only_examples() {
        let blue = blue_curves(2);
        assert!(uses_only(&w("b1 a1"), &blue));
        assert!(!uses_only(&w("a1 b2"), &blue));
        assert!(!uses_only(&w("a2[b2]"), &blue));
        assert!(uses_only(&w("a2[c1]"), &blue));
    }
}
