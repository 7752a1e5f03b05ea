//! Contact condition for `β = h₁(r)·α + h₂(r)·dt` on the binding region
//! `∂V × D²`, with `∂V = S¹` (`α = dθ`) or `S³` (standard `α`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::config::Grid;
use super::profiles::BindingProfile;
use crate::error::{Error, Result};
use crate::geom::{dot, norm, volume_eval, FormField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub n: usize,
    pub min_volume: f64,
    pub min_reduced: f64,
    /// Grid point `(r, angular index)` of the smallest volume.
    pub argmin: (f64, usize),
    pub points: usize,
    pub sign_disagreements: usize,
    /// `max |h₁ − e^{1/2−r}| + |h₂ − 1|` over grid radii in `[1/2, 1]`.
    pub overlap_error: f64,
}

impl ContactReport {
    pub fn passed(&self, equality_tol: f64) -> bool {
        self.min_volume > 0.0 && self.sign_disagreements == 0 && self.overlap_error < equality_tol
    }

    pub fn failure(&self) -> Option<String> {
        (self.min_volume <= 0.0)
            .then(|| format!("nonpositive volume {:e} at r = {}, angle #{}", self.min_volume, self.argmin.0, self.argmin.1))
    }
}

/// Evaluates `β ∧ (dβ)ⁿ` on an oriented frame over the grid and compares
/// its sign with `h₁ⁿ⁻¹(h₁h₂′ − h₁′h₂)`.
pub fn tw_contact_check(n: usize, binding: &BindingProfile, grid: &Grid) -> Result<ContactReport> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidConfig(format!("binding model available for n ∈ {{1, 2}}, got {n}")));
    }
    if grid.r_steps < 2 || grid.angular == 0 || !(grid.r_min > 0.0 && grid.r_min < 1.0) {
        return Err(Error::InvalidConfig("degenerate grid".into()));
    }
    let (beta, dbeta) = forms(n, binding);
    let mut forms_list = vec![beta];
    forms_list.extend(std::iter::repeat(dbeta).take(n));

    let mut rep = ContactReport {
        n,
        min_volume: f64::INFINITY,
        min_reduced: f64::INFINITY,
        argmin: (0.0, 0),
        points: 0,
        sign_disagreements: 0,
        overlap_error: 0.0,
    };
    for i in 0..grid.r_steps {
        let r = grid.r_min + (1.0 - grid.r_min) * i as f64 / (grid.r_steps - 1) as f64;
        let (h1, h2, d1, d2) = ((binding.h1)(r), (binding.h2)(r), (binding.dh1)(r), (binding.dh2)(r));
        let reduced = h1.powi(n as i32 - 1) * (h1 * d2 - d1 * h2);
        rep.min_reduced = rep.min_reduced.min(reduced);
        if r >= 0.5 {
            rep.overlap_error = rep.overlap_error.max((h1 - (0.5 - r).exp()).abs() + (h2 - 1.0).abs());
        }
        for j in 0..grid.angular {
            let (point, basis) = frame(n, r, j, grid.angular);
            let vol = volume_eval(&forms_list, &point, &basis)?;
            rep.points += 1;
            if vol < rep.min_volume {
                rep.min_volume = vol;
                rep.argmin = (r, j);
            }
            if (vol > 0.0) != (reduced > 0.0) {
                rep.sign_disagreements += 1;
            }
        }
    }
    Ok(rep)
}

/// `α` on `ℝ²ᵐ` (coordinates `x₁, y₁, …`): `Σ xᵢdyᵢ − yᵢdxᵢ`; for `n = 1`
/// the single coordinate is `θ` and `α = dθ`.
fn alpha(n: usize, z: &[f64], v: &[f64]) -> f64 {
    if n == 1 {
        return v[0];
    }
    (0..2).map(|i| z[2 * i] * v[2 * i + 1] - z[2 * i + 1] * v[2 * i]).sum()
}

fn dalpha(n: usize, a: &[f64], b: &[f64]) -> f64 {
    if n == 1 {
        return 0.0;
    }
    (0..2).map(|i| 2.0 * (a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i])).sum()
}

/// `β` and the exact `dβ = h₁′ dr∧α + h₁ dα + h₂′ dr∧dt` on ambient
/// coordinates `(z, r, t)`.
fn forms(n: usize, b: &BindingProfile) -> (FormField, FormField) {
    let zl = if n == 1 { 1 } else { 4 };
    let (h1, h2) = (b.h1.clone(), b.h2.clone());
    let beta = FormField::new(1, move |p, v| {
        let r = p[zl];
        h1(r) * alpha(n, &p[..zl], &v[0][..zl]) + h2(r) * v[0][zl + 1]
    });
    let (h1, dh1, dh2) = (b.h1.clone(), b.dh1.clone(), b.dh2.clone());
    let dbeta = FormField::new(2, move |p, v| {
        let (a, c) = (v[0], v[1]);
        let r = p[zl];
        let z = &p[..zl];
        let dr_alpha = a[zl] * alpha(n, z, &c[..zl]) - c[zl] * alpha(n, z, &a[..zl]);
        let dr_dt = a[zl] * c[zl + 1] - c[zl] * a[zl + 1];
        dh1(r) * dr_alpha + h1(r) * dalpha(n, &a[..zl], &c[..zl]) + dh2(r) * dr_dt
    });
    (beta, dbeta)
}

/// Grid point and an oriented frame `(R, ξ…, ∂_r, ∂_t)` with `R` the Reeb
/// field of `α` and `α∧dα(R, ξ₁, ξ₂) > 0`.
fn frame(n: usize, r: f64, j: usize, angular: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let phase = 2.0 * PI * j as f64 / angular as f64;
    let t = phase;
    if n == 1 {
        let point = vec![phase, r, t];
        let basis = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        return (point, basis);
    }
    // deterministic points on S³ via Hopf-type coordinates
    let eta = PI * (j as f64 + 0.5) / (2.0 * angular as f64);
    let (a, b) = (phase, 3.0 * phase + 0.7);
    let z = [eta.cos() * a.cos(), eta.cos() * a.sin(), eta.sin() * b.cos(), eta.sin() * b.sin()];
    let reeb = vec![-z[1], z[0], -z[3], z[2]];
    let mut xi: Vec<Vec<f64>> = Vec::new();
    for e in 0..4 {
        let mut v = vec![0.0; 4];
        v[e] = 1.0;
        for w in [&z.to_vec(), &reeb].into_iter().chain(xi.iter()) {
            let c = dot(&v, w) / dot(w, w);
            v.iter_mut().zip(w).for_each(|(vi, wi)| *vi -= c * wi);
        }
        let l = norm(&v);
        if l > 1e-6 {
            xi.push(v.iter().map(|x| x / l).collect());
        }
        if xi.len() == 2 {
            break;
        }
    }
    if dalpha(2, &xi[0], &xi[1]) < 0.0 {
        xi.swap(0, 1);
    }
    let lift = |v: &[f64], dr: f64, dt: f64| {
        let mut out = v.to_vec();
        out.extend([dr, dt]);
        out
    };
    let mut point = z.to_vec();
    point.extend([r, t]);
    let basis = vec![
        lift(&reeb, 0.0, 0.0),
        lift(&xi[0], 0.0, 0.0),
        lift(&xi[1], 0.0, 0.0),
        lift(&[0.0; 4], 1.0, 0.0),
        lift(&[0.0; 4], 0.0, 1.0),
    ];
    (point, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_profile_is_contact() {
        for n in [1, 2] {
            let g = Grid { r_steps: 40, angular: 6, r_min: 1e-3 };
            let rep = tw_contact_check(n, &BindingProfile::standard(), &g).unwrap();
            assert!(rep.passed(1e-12), "{rep:?}");
            assert_eq!(rep.points, 240);
        }
    }

    #[test]
    fn volume_matches_reduced_scalar() {
        // β∧dβ = h₁h₂′ − h₁′h₂ (n = 1); β∧(dβ)² = 2h₁(h₁h₂′ − h₁′h₂)·α∧dα∧dr∧dt and
        // dα(ξ₁, ξ₂) = 2 on this frame (n = 2)
        let b = BindingProfile::standard();
        let (beta, dbeta) = forms(2, &b);
        for r in [0.01, 0.3, 0.4, 0.8] {
            let (p, basis) = frame(2, r, 3, 10);
            let v = volume_eval(&[beta.clone(), dbeta.clone(), dbeta.clone()], &p, &basis).unwrap();
            let (h1, h2, d1, d2) = ((b.h1)(r), (b.h2)(r), (b.dh1)(r), (b.dh2)(r));
            assert!((v - 4.0 * h1 * (h1 * d2 - d1 * h2)).abs() < 1e-10, "r={r}");
        }
        let (beta, dbeta) = forms(1, &b);
        let (p, basis) = frame(1, 0.3, 0, 1);
        let v = volume_eval(&[beta, dbeta], &p, &basis).unwrap();
        let r = 0.3;
        assert!((v - ((b.h1)(r) * (b.dh2)(r) - (b.dh1)(r) * (b.h2)(r))).abs() < 1e-12);
    }

    #[test]
    fn s3_frame_is_positive_for_alpha() {
        let alpha_form = FormField::new(1, |p, v| alpha(2, &p[..4], &v[0][..4]));
        let dalpha_form = FormField::new(2, |_, v| dalpha(2, &v[0][..4], &v[1][..4]));
        for j in 0..20 {
            let (p, basis) = frame(2, 0.5, j, 20);
            let b3: Vec<Vec<f64>> = basis[..3].iter().map(|v| v[..4].to_vec()).collect();
            let v = volume_eval(&[alpha_form.clone(), dalpha_form.clone()], &p[..4], &b3).unwrap();
            assert!(v > 0.0);
        }
    }

    #[test]
    fn sabotaged_profile_degenerates() {
        let b = BindingProfile::from_functions(|_| 1.0, |r| if r < 0.5 { 0.0 } else { 1.0 });
        let rep = tw_contact_check(1, &b, &Grid { r_steps: 20, angular: 3, r_min: 1e-3 }).unwrap();
        assert!(rep.min_volume <= 0.0);
        assert!(rep.failure().is_some());
    }

    #[test]
    fn rejects_unsupported_dimension() {
        assert!(tw_contact_check(3, &BindingProfile::standard(), &Grid::default()).is_err());
    }
}
