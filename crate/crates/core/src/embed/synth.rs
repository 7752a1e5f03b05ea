use std::collections::BTreeMap;

use super::{Block, EmbeddingCertificate, Metadata, Params, Step};
use crate::error::{Error, Result};
use crate::mcg::{blue_curves, uses_only, CurveRef, Letter, TwistWord};
use crate::openbook::{surface_to_page, validate_type1, OpenBook, PageGraph};
use crate::verifier::P0Policy;

/// Support of the prefix twist `τ^{n+1}_k` carried over from the source.
pub const DEFAULT_BASE_SUPPORT: f64 = 0.5;

pub const B2_CAVEAT: &str = "the monodromy involves a Dehn twist along b2, which is not one of the plumbed page \
curves b1, a1, c1, ..., a_g; this construction does not apply (this is not a proof that no embedding exists)";

const EXTEND_CITATION: &str = "symplectic isotopy of the page extends to a contact isotopy of the ambient open book";
const GLUE_CITATION: &str = "mapping torus of the page glued to binding x D^2";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SynthParams {
    pub eps: f64,
    pub delta: f64,
    pub p0_policy: P0Policy,
    pub base_support: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams { eps: 0.2, delta: 0.2, p0_policy: P0Policy::HalfM0, base_support: DEFAULT_BASE_SUPPORT }
    }
}

impl SynthParams {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("eps", self.eps), ("delta", self.delta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must lie in (0, 1]")));
            }
        }
        if !(self.base_support > 0.0) {
            return Err(Error::InvalidConfig("base twist support must be positive".into()));
        }
        Ok(())
    }

    fn params(&self) -> Params {
        Params { eps: self.eps, delta: self.delta }
    }

    fn support(&self) -> f64 {
        self.p0_policy.support(self.params().m0())
    }
}

fn node_steps(node: &str, k: i64, l: i64, prefix: bool, p: &SynthParams) -> Vec<Step> {
    let mut steps = Vec::new();
    if prefix {
        steps.push(Step::AmbientTwist { node: node.into(), power: k, support: p.base_support });
    }
    steps.push(Step::IsotopeAway { node: node.into(), eps: p.eps, delta: p.delta });
    steps.push(Step::AmbientTwist { node: node.into(), power: l - k, support: p.support() });
    steps.push(Step::IsotopeBack { node: node.into() });
    steps
}

fn symbolic_block() -> Block {
    Block {
        t0: 0.0,
        t1: 1.0,
        steps: vec![
            Step::ExtendIsotopy { citation: EXTEND_CITATION.into() },
            Step::GlueMappingTorus { citation: GLUE_CITATION.into() },
        ],
    }
}

/// Node `i` (1-based) of `count` gets `[(2i−1)/(2N+1), 2i/(2N+1)]`.
fn interval(i: usize, count: usize) -> (f64, f64) {
    let d = (2 * count + 1) as f64;
    ((2 * i - 1) as f64 / d, (2 * i) as f64 / d)
}

pub fn synth_thm1(n: usize, k: i64, l: i64) -> Result<EmbeddingCertificate> {
    synth_thm1_with(n, k, l, &SynthParams::default())
}

/// `Aob(DT*Sⁿ, τ_k)` into `Aob(DT*Sⁿ⁺¹, τ_l)`.
pub fn synth_thm1_with(n: usize, k: i64, l: i64, p: &SynthParams) -> Result<EmbeddingCertificate> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    p.validate()?;
    let source = OpenBook::new(PageGraph::sphere(n, "s1")?, TwistWord::single("s1", k))?;
    let target = OpenBook::new(PageGraph::sphere(n + 1, "s1")?, TwistWord::single("s1", l))?;
    let (t0, t1) = interval(1, 1);
    let mut metadata = Metadata { construction: "thm1".into(), ..Default::default() };
    if (n, k, l) == (1, 2, 1) {
        metadata.presentation = Some(
            "source is rp3 and the target is presented as Aob(DT*S^2, tau_1), not as Aob(D^4, id); both support \
             (S^5, xi_std) and the two presentations are not identified"
                .into(),
        );
    }
    Ok(EmbeddingCertificate {
        source,
        target,
        node_map: BTreeMap::from([("s1".to_string(), "s1".to_string())]),
        schedule: vec![Block { t0, t1, steps: node_steps("s1", k, l, true, p) }, symbolic_block()],
        params: p.params(),
        metadata,
    })
}

pub fn synth_type1(ob: &OpenBook) -> Result<EmbeddingCertificate> {
    synth_type1_with(ob, &SynthParams::default())
}

/// Embeds a type-1 open book into the promoted page with `τ₁` on every
/// node. Each node gets one block with `k` the total exponent of its
/// letters in the source monodromy.
pub fn synth_type1_with(ob: &OpenBook, p: &SynthParams) -> Result<EmbeddingCertificate> {
    p.validate()?;
    let verdict = validate_type1(ob);
    if !verdict.valid {
        return Err(Error::NotType1(verdict.diagnostic.unwrap_or_default()));
    }
    let page = ob.page().promoted();
    let names: Vec<String> = page.nodes().iter().map(|v| v.name.clone()).collect();
    let target_word = TwistWord::from_letters(names.iter().map(|v| Letter::named(v, 1)));
    let target = OpenBook::new(page, target_word)?;
    let mut schedule = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let k = ob.monodromy().exponent_sum(name);
        let (t0, t1) = interval(i + 1, names.len());
        schedule.push(Block { t0, t1, steps: node_steps(name, k, 1, k != 0, p) });
    }
    schedule.push(symbolic_block());
    let mut notes = Vec::new();
    let grouped = TwistWord::from_letters(
        names.iter().map(|v| Letter::named(v, ob.monodromy().exponent_sum(v))),
    );
    if &grouped != ob.monodromy() {
        notes.push(format!(
            "source monodromy {} is factored per node as {}; blocks twist each node by its total exponent",
            ob.monodromy(),
            grouped
        ));
    }
    Ok(EmbeddingCertificate {
        source: ob.clone(),
        target,
        node_map: names.iter().map(|v| (v.clone(), v.clone())).collect(),
        schedule,
        params: p.params(),
        metadata: Metadata { construction: "type1".into(), presentation: None, notes },
    })
}

/// Replaces each letter on an image curve `c[φ]` by `φ τ_c φ⁻¹`.
pub fn expand_images(w: &TwistWord) -> TwistWord {
    let mut out = TwistWord::empty();
    for l in w.letters() {
        match &l.curve {
            CurveRef::Named(_) => out.push(l.clone()),
            CurveRef::Image(img) => {
                let frame = expand_images(&img.frame);
                let inner = TwistWord::single(&img.base, l.power);
                out = out.concat(&frame).concat(&inner).concat(&frame.inverse());
            }
        }
    }
    out
}

/// Surface open book of genus `g` with monodromy `w` over the blue curves,
/// embedded through its plumbing page.
pub fn synth_corollary(genus: usize, w: &TwistWord) -> Result<EmbeddingCertificate> {
    let blue = blue_curves(genus);
    if !uses_only(w, &blue) {
        let names = w.mentioned_names();
        if names.iter().any(|c| c == "b2") {
            return Err(Error::UsesNonBlueCurve(B2_CAVEAT.into()));
        }
        let bad = names.iter().find(|c| !blue.contains(c)).cloned().unwrap_or_default();
        return Err(Error::UsesNonBlueCurve(format!(
            "curve `{bad}` is not one of the plumbed page curves of genus {genus}"
        )));
    }
    let (page, map) = surface_to_page(genus)?;
    let word = expand_images(w).rename(&|c| map.get(c).cloned().unwrap_or_else(|| c.to_string()));
    let ob = OpenBook::new(page, word)?;
    let mut cert = synth_type1(&ob)?;
    cert.metadata.construction = "surface".into();
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::normalize_with;
    use crate::openbook::{catalog, BaseLabel, CatalogEntry, Edge, EdgeKind, Node};

    fn word(s: &str) -> TwistWord {
        s.parse().unwrap()
    }

    #[test]
    fn thm1_shape() {
        let c = synth_thm1(1, 2, 1).unwrap();
        assert_eq!(c.source, catalog(&CatalogEntry::Rp3).unwrap());
        assert_eq!(c.target, catalog(&CatalogEntry::StdSphere { n: 2 }).unwrap());
        assert!(c.metadata.presentation.is_some());
        let steps = &c.schedule[0].steps;
        assert_eq!(steps.len(), 4);
        assert_eq!(steps[0], Step::AmbientTwist { node: "s1".into(), power: 2, support: 0.5 });
        assert_eq!(steps[2], Step::AmbientTwist { node: "s1".into(), power: -1, support: 0.05 });
        assert_eq!((c.schedule[0].t0, c.schedule[0].t1), (1.0 / 3.0, 2.0 / 3.0));
        assert!(matches!(c.schedule[1].steps[..], [Step::ExtendIsotopy { .. }, Step::GlueMappingTorus { .. }]));
    }

    #[test]
    fn degenerate_thm1() {
        let c = synth_thm1(1, 0, 0).unwrap();
        let powers: Vec<i64> = c.schedule[0]
            .steps
            .iter()
            .filter_map(|s| match s {
                Step::AmbientTwist { power, .. } => Some(*power),
                _ => None,
            })
            .collect();
        assert_eq!(powers, vec![0, 0]);
        assert!(synth_thm1(0, 1, 1).is_err());
    }

    #[test]
    fn type1_single_node_matches_thm1() {
        for k in [-2i64, 1, 3] {
            let ob = OpenBook::new(PageGraph::sphere(2, "s1").unwrap(), TwistWord::single("s1", k)).unwrap();
            let a = synth_type1(&ob).unwrap();
            let b = synth_thm1(2, k, 1).unwrap();
            assert_eq!(a.source, b.source);
            assert_eq!(a.target, b.target);
            assert_eq!(a.schedule, b.schedule);
        }
    }

    #[test]
    fn type1_xi2() {
        let ob = catalog(&CatalogEntry::XiN { n: 2 }).unwrap();
        let c = synth_type1(&ob).unwrap();
        assert_eq!(c.target.page().nodes().len(), 2);
        assert!(c.target.page().nodes().iter().all(|v| v.base == BaseLabel::Sphere { n: 2 }));
        assert_eq!(c.target.monodromy(), &word("s1 s2"));
        assert_eq!(c.node_blocks().count(), 2);
        let total: f64 = c.node_blocks().map(|b| b.t1 - b.t0).sum();
        assert!(total < 1.0);
        assert_eq!((c.schedule[0].t0, c.schedule[1].t0), (0.2, 0.6));
    }

    #[test]
    fn type1_hypersurface_block() {
        let page = PageGraph::new(
            4,
            vec![
                Node { name: "s".into(), base: BaseLabel::Sphere { n: 2 } },
                Node { name: "h".into(), base: BaseLabel::Hypersurface { n: 2, label: "T2".into() } },
            ],
            vec![Edge::new("s", "h", EdgeKind::Bsum)],
        )
        .unwrap();
        let c = synth_type1(&OpenBook::new(page.clone(), word("s^-1")).unwrap()).unwrap();
        let h = c.node_blocks().find(|b| b.node() == Some("h")).unwrap();
        assert!(matches!(
            h.steps[..],
            [Step::IsotopeAway { .. }, Step::AmbientTwist { power: 1, .. }, Step::IsotopeBack { .. }]
        ));
        let bad = OpenBook::new(page, word("h")).unwrap();
        assert!(matches!(synth_type1(&bad), Err(Error::NotType1(_))));
    }

    #[test]
    fn surface_examples() {
        let c = synth_corollary(1, &word("a1 b1")).unwrap();
        assert_eq!(c.source.page().nodes().len(), 2);
        assert_eq!(c.target.monodromy(), &word("b1 a1"));
        let empty = synth_corollary(2, &TwistWord::empty()).unwrap();
        assert_eq!(empty.node_blocks().count(), 4);
        for b in empty.node_blocks() {
            assert!(!matches!(b.steps[0], Step::AmbientTwist { .. }));
        }
        let e = synth_corollary(2, &word("b2")).unwrap_err();
        assert!(e.to_string().contains("b2"));
        assert!(synth_corollary(2, &word("a1[b2]")).is_err());
        assert!(synth_corollary(1, &word("c1")).is_err());
    }

    #[test]
    fn image_letters_expand_to_conjugates() {
        let w = expand_images(&word("a1[b1]^2 c1"));
        assert_eq!(w, word("b1 a1^2 b1^-1 c1"));
        let c = synth_corollary(2, &word("a1[b1 c1]")).unwrap();
        let (page, _) = surface_to_page(2).unwrap();
        assert_eq!(normalize_with(&page, c.source.monodromy()), normalize_with(&page, &word("b1 c1 a1 c1^-1 b1^-1")));
    }
}
