//! Sampled checks of the twist and push-off constructions.

use serde::{Deserialize, Serialize};

use super::maps::{dehn_twist_map, embedding_map, Composite};
use super::profiles::{CutoffProfile, TwistProfile};
use crate::error::{Error, Result};
use crate::geom::{
    dot, liouville_defect, norm, project, pullback_error, sample, sample_shell, substream_seed, AmbientMap,
    PointTS, PullbackReport, Sample,
};

/// Samples over the whole disk bundle mixed with samples concentrated in the
/// twist region `|y| < p₀`.
pub fn twist_samples(n: usize, p0: f64, seed: u64, count: usize) -> Result<Vec<Sample>> {
    let inner = count / 2;
    let mut out = sample(n, substream_seed(seed, 0), count - inner)?;
    if inner > 0 {
        out.extend(sample_shell(n, substream_seed(seed, 1), inner, 0.0, p0.min(1.0))?);
    }
    Ok(out)
}

/// Differencing step for `profile`: `h` scaled by the radial length
/// `p₀/max(1, |k|)` over which the twist angle turns by about `π`.
pub fn adapted_step(profile: &TwistProfile, h: f64) -> f64 {
    let scale = profile.p0 / (profile.k.unsigned_abs().max(1) as f64);
    h * scale.min(1.0)
}

/// `max |τ_k*(dλ) − dλ|` over `samples`, differenced with
/// [`adapted_step`].
pub fn check_twist_symplectic(n: usize, profile: TwistProfile, samples: &[Sample], h: f64) -> Result<PullbackReport> {
    if n == 0 {
        return Err(Error::InvalidConfig("sphere dimension must be at least 1".into()));
    }
    pullback_error(&dehn_twist_map(n, profile), samples, adapted_step(&profile, h))
}

/// `h_k(s) = s·g_k(s) − ∫₀ˢ g_k`, a primitive of `τ_k*λ − λ`.
#[derive(Clone, Copy, Debug)]
pub struct ExactnessWitness {
    pub profile: TwistProfile,
}

impl ExactnessWitness {
    pub fn value(&self, s: f64) -> f64 {
        s * self.profile.angle(s) - self.profile.angle_integral(s)
    }

    /// `h_k′(s) = s·g_k′(s)`.
    pub fn derivative(&self, s: f64) -> f64 {
        s * self.profile.angle_derivative(s)
    }

    /// `dh_k(t) = h_k′(s)·(y·v)/s` at `p = (x, y)`, `s = |y|`.
    pub fn differential(&self, p: &PointTS, v: &[f64]) -> f64 {
        let s = norm(&p.y);
        if s == 0.0 {
            return 0.0;
        }
        self.derivative(s) * dot(&p.y, v) / s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub residual: f64,
    pub samples: usize,
    pub resampled: usize,
}

/// The witness for `profile` and `max |(τ_k*λ − λ)(t) − dh_k(t)|` over both
/// tangents of every sample.
pub fn exactness_witness(
    n: usize,
    profile: TwistProfile,
    samples: &[Sample],
    h: f64,
) -> Result<(ExactnessWitness, ExactnessReport)> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("step h = {h} must be positive")));
    }
    let w = ExactnessWitness { profile };
    let tw = dehn_twist_map(n, profile);
    let h = adapted_step(&profile, h);
    let mut rep = ExactnessReport { residual: 0.0, samples: 0, resampled: 0 };
    for s in samples {
        for t in [&s.t1, &s.t2] {
            let Some(defect) = liouville_defect(&tw, &s.point, t, h) else {
                rep.resampled += 1;
                continue;
            };
            rep.residual = rep.residual.max((defect - w.differential(&s.point, &t.v)).abs());
        }
        rep.samples += 1;
    }
    Ok((w, rep))
}

/// Distance from `q ∈ T*Sᵐ` to the zero section `{|x| = 1, y = 0}`.
pub fn distance_to_zero_section(q: &PointTS) -> f64 {
    ((norm(&q.x) - 1.0).powi(2) + dot(&q.y, &q.y)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Smallest distance found.
    pub estimate: f64,
    pub m0: f64,
    pub samples: usize,
    /// Source point realizing the estimate.
    pub witness: PointTS,
}

impl DistanceReport {
    pub fn passed(&self) -> bool {
        self.estimate > self.m0
    }
}

/// Estimates `inf dist(j₁∘τ_k(p), zero section)` over `DT*Sⁿ` by sampling
/// and coordinate-descent refinement of the best samples.
pub fn check_distance_bound(
    n: usize,
    twist: TwistProfile,
    cutoff: CutoffProfile,
    seed: u64,
    count: usize,
) -> Result<DistanceReport> {
    let tw = dehn_twist_map(n, twist);
    let j1 = embedding_map(1.0, cutoff, n);
    let map = Composite { outer: &j1, inner: &tw };
    let f = |p: &PointTS| distance_to_zero_section(&map.apply(p));

    let mut pts: Vec<PointTS> = sample(n, substream_seed(seed, 0), count)?.into_iter().map(|s| s.point).collect();
    pts.extend(sample_shell(n, substream_seed(seed, 1), count, 0.0, 1.0)?.into_iter().map(|s| s.point));
    let total = pts.len();
    let mut scored: Vec<(f64, PointTS)> = pts.into_iter().map(|p| (f(&p), p)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.truncate(4);

    let mut best = scored[0].clone();
    for (v, p) in scored {
        let refined = descend(&f, p, v);
        if refined.0 < best.0 {
            best = refined;
        }
    }
    Ok(DistanceReport { estimate: best.0, m0: cutoff.m0(), samples: total, witness: best.1 })
}

fn descend(f: &impl Fn(&PointTS) -> f64, mut p: PointTS, mut value: f64) -> (f64, PointTS) {
    let dim = p.x.len();
    let mut step = 0.05;
    while step > 1e-10 {
        let mut improved = false;
        for i in 0..2 * dim {
            for sign in [1.0, -1.0] {
                let mut x = p.x.clone();
                let mut y = p.y.clone();
                if i < dim {
                    x[i] += sign * step;
                } else {
                    y[i - dim] += sign * step;
                }
                let Ok(mut q) = project(&x, &y) else { continue };
                let r = norm(&q.y);
                if r > 1.0 {
                    q.y.iter_mut().for_each(|v| *v /= r);
                }
                let fq = f(&q);
                if fq < value {
                    value = fq;
                    p = q;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisjointReport {
    pub max_displacement: f64,
    pub displaced: usize,
    pub samples: usize,
    /// A source point whose image moved, if any.
    pub witness: Option<PointTS>,
}

/// Applies the ambient twist `τ^{n+1}_{l−k}` with support `p0` to
/// `j₁∘τ_k(p)` for seeded `p` and measures how far the image moves.
pub fn check_support_disjoint(
    n: usize,
    twist: TwistProfile,
    ambient_power: i64,
    ambient_p0: f64,
    cutoff: CutoffProfile,
    seed: u64,
    count: usize,
    tolerance: f64,
) -> Result<DisjointReport> {
    let tw = dehn_twist_map(n, twist);
    let j1 = embedding_map(1.0, cutoff, n);
    let ambient = dehn_twist_map(n + 1, TwistProfile::new(ambient_power, ambient_p0)?);
    let mut pts: Vec<PointTS> = sample(n, substream_seed(seed, 0), count)?.into_iter().map(|s| s.point).collect();
    pts.extend(sample_shell(n, substream_seed(seed, 1), count, 0.0, cutoff.delta.min(1.0))?.into_iter().map(|s| s.point));
    let mut rep = DisjointReport { max_displacement: 0.0, displaced: 0, samples: pts.len(), witness: None };
    for p in pts {
        let q = j1.apply(&tw.apply(&p));
        let moved = ambient.apply(&q);
        let d = q.ambient().iter().zip(moved.ambient()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if d > rep.max_displacement {
            rep.max_displacement = d;
        }
        if d >= tolerance {
            rep.displaced += 1;
            if rep.witness.is_none() {
                rep.witness = Some(p);
            }
        }
    }
    Ok(rep)
}
