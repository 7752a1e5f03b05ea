use serde::{Deserialize, Serialize};

use super::point::{dlambda_eval, lambda_eval, norm, project, PointTS, TangentTS};
use super::sample::{sample, Sample};
use crate::error::{Error, Result};

/// A smooth map `T*Sⁿ → T*Sᵐ` between coordinate models.
pub trait AmbientMap: Send + Sync {
    /// `n` of the domain `T*Sⁿ`.
    fn source_n(&self) -> usize;
    /// `m` of the codomain `T*Sᵐ`.
    fn target_n(&self) -> usize;
    fn apply(&self, p: &PointTS) -> PointTS;
}

/// Maximum constraint violation of `map` images over seeded samples; an
/// error when it exceeds `1e-9`.
pub fn check_constraints(map: &dyn AmbientMap, seed: u64, count: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in sample(map.source_n(), seed, count)? {
        let q = map.apply(&s.point);
        if q.x.len() != map.target_n() + 1 || q.y.len() != map.target_n() + 1 {
            return Err(Error::Geometry("image has the wrong dimension".into()));
        }
        worst = worst.max(q.constraint_violation());
    }
    if worst > 1e-9 {
        return Err(Error::Geometry(format!("image leaves the model by {worst:e}")));
    }
    Ok(worst)
}

pub struct IdentityMap(pub usize);

impl AmbientMap for IdentityMap {
    fn source_n(&self) -> usize {
        self.0
    }
    fn target_n(&self) -> usize {
        self.0
    }
    fn apply(&self, p: &PointTS) -> PointTS {
        p.clone()
    }
}

/// `(x, y) ↦ (x, c·y)`; preserves the model but scales `dλ` by `c`.
pub struct FiberScaling {
    pub n: usize,
    pub factor: f64,
}

impl AmbientMap for FiberScaling {
    fn source_n(&self) -> usize {
        self.n
    }
    fn target_n(&self) -> usize {
        self.n
    }
    fn apply(&self, p: &PointTS) -> PointTS {
        PointTS::raw(p.x.clone(), p.y.iter().map(|v| v * self.factor).collect())
    }
}

/// Pushforward of `t` at `p` by five-point central differences along the
/// projected curve `s ↦ project(p + s·t)`. `None` if the curve leaves the chart.
pub fn pushforward(map: &dyn AmbientMap, p: &PointTS, t: &TangentTS, h: f64) -> Option<TangentTS> {
    let shift = |s: f64| -> Option<PointTS> {
        let x: Vec<f64> = p.x.iter().zip(&t.u).map(|(a, b)| a + s * b).collect();
        if norm(&x) < 1e-6 {
            return None;
        }
        let y: Vec<f64> = p.y.iter().zip(&t.v).map(|(a, b)| a + s * b).collect();
        project(&x, &y).ok()
    };
    // five-point central stencil, O(h⁴)
    let p1 = map.apply(&shift(h)?);
    let m1 = map.apply(&shift(-h)?);
    let p2 = map.apply(&shift(2.0 * h)?);
    let m2 = map.apply(&shift(-2.0 * h)?);
    let d = |a1: &[f64], b1: &[f64], a2: &[f64], b2: &[f64]| {
        (0..a1.len())
            .map(|i| (8.0 * (a1[i] - b1[i]) - (a2[i] - b2[i])) / (12.0 * h))
            .collect::<Vec<_>>()
    };
    Some(TangentTS::raw(d(&p1.x, &m1.x, &p2.x, &m2.x), d(&p1.y, &m1.y, &p2.y, &m2.y)))
}

/// Outcome of a sampled form comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackReport {
    pub max_error: f64,
    pub samples: usize,
    /// Samples skipped because differencing left the chart.
    pub resampled: usize,
}

/// `max |φ*(dλ) − dλ|` over `samples`.
pub fn pullback_error(map: &dyn AmbientMap, samples: &[Sample], h: f64) -> Result<PullbackReport> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("step h = {h} must be positive")));
    }
    let mut rep = PullbackReport { max_error: 0.0, samples: 0, resampled: 0 };
    for s in samples {
        let q = map.apply(&s.point);
        let (Some(a), Some(b)) = (pushforward(map, &s.point, &s.t1, h), pushforward(map, &s.point, &s.t2, h))
        else {
            rep.resampled += 1;
            continue;
        };
        let err = (dlambda_eval(&q, &a, &b) - dlambda_eval(&s.point, &s.t1, &s.t2)).abs();
        rep.max_error = rep.max_error.max(err);
        rep.samples += 1;
    }
    Ok(rep)
}

/// `(φ*λ − λ)(t)` at `p`, with the pushforward taken by differencing.
pub fn liouville_defect(map: &dyn AmbientMap, p: &PointTS, t: &TangentTS, h: f64) -> Option<f64> {
    let q = map.apply(p);
    let pushed = pushforward(map, p, t, h)?;
    Some(lambda_eval(&q, &pushed) - lambda_eval(p, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pullback_is_exact() {
        for n in 1..=3 {
            let s = sample(n, 11, 300).unwrap();
            let r = pullback_error(&IdentityMap(n), &s, 1e-4).unwrap();
            assert!(r.max_error < 1e-10, "n={n}: {}", r.max_error);
            assert_eq!(r.samples, 300);
        }
    }

    #[test]
    fn scaled_fiber_is_not_symplectic() {
        let s = sample(1, 3, 1000).unwrap();
        let r = pullback_error(&FiberScaling { n: 1, factor: 2.0 }, &s, 1e-4).unwrap();
        assert!(r.max_error >= 0.1);
    }

    #[test]
    fn registration_check() {
        assert!(check_constraints(&IdentityMap(2), 0, 50).unwrap() < 1e-12);
        struct Bad;
        impl AmbientMap for Bad {
            fn source_n(&self) -> usize {
                1
            }
            fn target_n(&self) -> usize {
                1
            }
            fn apply(&self, p: &PointTS) -> PointTS {
                PointTS::raw(p.x.iter().map(|v| 2.0 * v).collect(), p.y.clone())
            }
        }
        assert!(check_constraints(&Bad, 0, 50).is_err());
    }

    #[test]
    fn bad_step_rejected() {
        let s = sample(1, 0, 1).unwrap();
        assert!(pullback_error(&IdentityMap(1), &s, 0.0).is_err());
    }
}
