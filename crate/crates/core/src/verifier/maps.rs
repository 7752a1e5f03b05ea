//! Concrete maps between the `T*Sⁿ` models: Dehn–Seidel twists and the
//! push-off embeddings `j_t`.

use super::profiles::{CutoffProfile, TwistProfile};
use crate::geom::{norm, AmbientMap, PointTS};

/// `τ_k`: `(x, y) ↦ σ_{g_k(|y|)}(x, y)` on `T*Sⁿ`, where
/// `σ_t(x, y) = (cos t·x + sin t·y/|y|, −|y| sin t·x + cos t·y)`.
#[derive(Clone, Copy, Debug)]
pub struct DehnTwist {
    pub n: usize,
    pub profile: TwistProfile,
}

pub fn dehn_twist_map(n: usize, profile: TwistProfile) -> DehnTwist {
    DehnTwist { n, profile }
}

impl AmbientMap for DehnTwist {
    fn source_n(&self) -> usize {
        self.n
    }

    fn target_n(&self) -> usize {
        self.n
    }

    fn apply(&self, p: &PointTS) -> PointTS {
        let s = norm(&p.y);
        if self.profile.k == 0 || s >= self.profile.p0 {
            return p.clone();
        }
        if s == 0.0 {
            // continuous limit of σ_{g_k(s)} as s → 0
            let c = self.profile.angle(0.0).cos();
            return PointTS::raw(p.x.iter().map(|v| c * v).collect(), p.y.clone());
        }
        let t = self.profile.angle(s);
        let (sn, c) = t.sin_cos();
        let x = p.x.iter().zip(&p.y).map(|(x, y)| c * x + sn * y / s).collect();
        let y = p.x.iter().zip(&p.y).map(|(x, y)| -s * sn * x + c * y).collect();
        PointTS::raw(x, y)
    }
}

/// `j_t(x, y) = ((x, 0), (y, t·g(|y|)))`: `T*Sⁿ → T*Sⁿ⁺¹`.
#[derive(Clone, Copy, Debug)]
pub struct EmbeddingMap {
    pub n: usize,
    pub t: f64,
    pub cutoff: CutoffProfile,
}

pub fn embedding_map(t: f64, cutoff: CutoffProfile, n: usize) -> EmbeddingMap {
    EmbeddingMap { n, t, cutoff }
}

impl AmbientMap for EmbeddingMap {
    fn source_n(&self) -> usize {
        self.n
    }

    fn target_n(&self) -> usize {
        self.n + 1
    }

    fn apply(&self, p: &PointTS) -> PointTS {
        let mut x = p.x.clone();
        x.push(0.0);
        let mut y = p.y.clone();
        y.push(self.t * self.cutoff.value(norm(&p.y)));
        PointTS::raw(x, y)
    }
}

/// `f ∘ g`.
pub struct Composite<'a> {
    pub outer: &'a dyn AmbientMap,
    pub inner: &'a dyn AmbientMap,
}

impl AmbientMap for Composite<'_> {
    fn source_n(&self) -> usize {
        self.inner.source_n()
    }

    fn target_n(&self) -> usize {
        self.outer.target_n()
    }

    fn apply(&self, p: &PointTS) -> PointTS {
        self.outer.apply(&self.inner.apply(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{check_constraints, sample};

    fn max_diff(a: &PointTS, b: &PointTS) -> f64 {
        a.ambient().iter().zip(b.ambient()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_power_is_identity() {
        let tw = dehn_twist_map(2, TwistProfile::new(0, 0.5).unwrap());
        for s in sample(2, 1, 100).unwrap() {
            assert_eq!(tw.apply(&s.point), s.point);
        }
    }

    #[test]
    fn identity_outside_support() {
        let tw = dehn_twist_map(1, TwistProfile::new(3, 0.5).unwrap());
        for s in sample(1, 2, 300).unwrap().into_iter().filter(|s| s.point.fiber_norm() >= 0.5) {
            assert_eq!(tw.apply(&s.point), s.point);
        }
    }

    #[test]
    fn preserves_norms() {
        for n in 1..=3 {
            let tw = dehn_twist_map(n, TwistProfile::new(1, 0.9).unwrap());
            for s in sample(n, 3, 500).unwrap() {
                let q = tw.apply(&s.point);
                assert!((q.fiber_norm() - s.point.fiber_norm()).abs() < 1e-12);
                assert!((norm(&q.x) - 1.0).abs() < 1e-12);
            }
            assert!(check_constraints(&tw, 4, 200).is_ok());
        }
    }

    #[test]
    fn zero_section_limit() {
        let p = PointTS::new(vec![0.6, 0.8], vec![0.0, 0.0]).unwrap();
        for k in -3i64..=3 {
            let q = dehn_twist_map(1, TwistProfile::new(k, 0.5).unwrap()).apply(&p);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((q.x[0] - sign * 0.6).abs() < 1e-15 && (q.x[1] - sign * 0.8).abs() < 1e-15);
            // agrees with the nearby values
            let near = PointTS::new(vec![0.6, 0.8], vec![-0.8e-9, 0.6e-9]).unwrap();
            let qn = dehn_twist_map(1, TwistProfile::new(k, 0.5).unwrap()).apply(&near);
            assert!(max_diff(&q, &qn) < 1e-7);
        }
    }

    #[test]
    fn inverse_twist_undoes() {
        let a = dehn_twist_map(2, TwistProfile::new(2, 0.6).unwrap());
        let b = dehn_twist_map(2, TwistProfile::new(-2, 0.6).unwrap());
        for s in sample(2, 5, 300).unwrap() {
            assert!(max_diff(&b.apply(&a.apply(&s.point)), &s.point) < 1e-10);
        }
    }

    #[test]
    fn embedding_values() {
        let c = CutoffProfile::new(0.2, 0.2).unwrap();
        let p = PointTS::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        let q = embedding_map(1.0, c, 1).apply(&p);
        assert_eq!(q.x, vec![0.0, 1.0, 0.0]);
        assert_eq!(q.y, vec![0.0, 0.0, 0.2]);
        let q0 = embedding_map(0.0, c, 1).apply(&p);
        assert_eq!(q0.y, vec![0.0, 0.0, 0.0]);
        assert!(check_constraints(&embedding_map(0.5, c, 3), 1, 100).is_ok());
    }
}
