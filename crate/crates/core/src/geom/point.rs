use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const POINT_TOL: f64 = 1e-12;
pub(crate) const TANGENT_TOL: f64 = 1e-10;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A point `(x, y)` of the unit disk bundle `DT*Sⁿ ⊂ ℝⁿ⁺¹ × ℝⁿ⁺¹`:
/// `|x| = 1`, `x·y = 0`, `|y| ≤ 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointTS {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PointTS {
    /// Checks the constraints to `1e-12`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let p = PointTS { x, y };
        p.check()?;
        Ok(p)
    }

    pub(crate) fn raw(x: Vec<f64>, y: Vec<f64>) -> Self {
        PointTS { x, y }
    }

    /// Base sphere dimension `n`.
    pub fn n(&self) -> usize {
        self.x.len() - 1
    }

    pub fn fiber_norm(&self) -> f64 {
        norm(&self.y)
    }

    /// Largest violation of the model constraints.
    pub fn constraint_violation(&self) -> f64 {
        let a = (norm(&self.x) - 1.0).abs();
        let b = dot(&self.x, &self.y).abs();
        a.max(b)
    }

    pub fn check(&self) -> Result<()> {
        if self.x.len() != self.y.len() || self.x.len() < 2 {
            return Err(Error::Geometry(format!(
                "coordinate lengths {} and {} do not describe T*S^n",
                self.x.len(),
                self.y.len()
            )));
        }
        if self.constraint_violation() > POINT_TOL {
            return Err(Error::Geometry(format!(
                "point off T*S^n by {:e}",
                self.constraint_violation()
            )));
        }
        if self.fiber_norm() > 1.0 + POINT_TOL {
            return Err(Error::Geometry(format!("|y| = {} outside the disk bundle", self.fiber_norm())));
        }
        Ok(())
    }

    /// Coordinates `(x, y)` as one ambient vector.
    pub fn ambient(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().collect()
    }
}

/// A tangent vector `(u, v)` at a point of `T*Sⁿ`:
/// `x·u = 0` and `u·y + x·v = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentTS {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl TangentTS {
    pub fn new(at: &PointTS, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let t = TangentTS { u, v };
        let viol = t.constraint_violation(at);
        if viol > TANGENT_TOL {
            return Err(Error::Geometry(format!("tangent violates linearized constraints by {viol:e}")));
        }
        Ok(t)
    }

    pub(crate) fn raw(u: Vec<f64>, v: Vec<f64>) -> Self {
        TangentTS { u, v }
    }

    pub fn constraint_violation(&self, at: &PointTS) -> f64 {
        let a = dot(&at.x, &self.u).abs();
        let b = (dot(&self.u, &at.y) + dot(&at.x, &self.v)).abs();
        a.max(b)
    }

    pub fn ambient(&self) -> Vec<f64> {
        self.u.iter().chain(&self.v).copied().collect()
    }
}

/// Retraction onto `T*Sⁿ`: normalizes `x` and removes the `x`-component of
/// `y`.
pub fn project(x: &[f64], y: &[f64]) -> Result<PointTS> {
    let r = norm(x);
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Geometry("cannot project a point with x = 0".into()));
    }
    let x: Vec<f64> = x.iter().map(|v| v / r).collect();
    let s = dot(&x, y);
    let y: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi - s * xi).collect();
    Ok(PointTS { x, y })
}

/// `λ = Σ yᵢ dxᵢ` evaluated on a tangent vector.
pub fn lambda_eval(p: &PointTS, t: &TangentTS) -> f64 {
    dot(&p.y, &t.u)
}

/// `dλ = Σ dyᵢ ∧ dxᵢ`, i.e. `v₁·u₂ − v₂·u₁`.
pub fn dlambda_eval(_p: &PointTS, t1: &TangentTS, t2: &TangentTS) -> f64 {
    dot(&t1.v, &t2.u) - dot(&t2.v, &t1.u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_fixed_point() {
        let p = project(&[1.0, 0.0], &[0.0, 0.5]).unwrap();
        assert_eq!(p.x, vec![1.0, 0.0]);
        assert_eq!(p.y, vec![0.0, 0.5]);
    }

    #[test]
    fn project_forced_values() {
        let p = project(&[2.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(p.x, vec![1.0, 0.0]);
        assert_eq!(p.y, vec![0.0, 1.0]);
    }

    #[test]
    fn project_rejects_zero() {
        assert!(project(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn point_constructor_checks() {
        assert!(PointTS::new(vec![1.0, 0.0], vec![0.0, 0.3]).is_ok());
        assert!(PointTS::new(vec![1.0, 0.0], vec![0.3, 0.0]).is_err());
        assert!(PointTS::new(vec![1.0, 0.0], vec![0.0, 1.5]).is_err());
        assert!(PointTS::new(vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn lambda_vanishes_on_zero_section() {
        let p = PointTS::new(vec![0.0, 1.0, 0.0], vec![0.0; 3]).unwrap();
        let t = TangentTS::new(&p, vec![0.3, 0.0, -2.0], vec![1.0, 0.0, 0.5]).unwrap();
        assert_eq!(lambda_eval(&p, &t), 0.0);
    }

    #[test]
    fn dlambda_hand_expansion() {
        // n = 1, p = ((1,0),(0,s)), t1 = ((0,1),(−s,0)), t2 = ((0,0),(0,1)):
        // v1·u2 − v2·u1 = 0 − (0·0 + 1·1) = −1 for every s
        for s in [0.0, 0.25, 0.9] {
            let p = PointTS::new(vec![1.0, 0.0], vec![0.0, s]).unwrap();
            let t1 = TangentTS::new(&p, vec![0.0, 1.0], vec![-s, 0.0]).unwrap();
            let t2 = TangentTS::new(&p, vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
            assert_eq!(dlambda_eval(&p, &t1, &t2), -1.0);
            assert_eq!(dlambda_eval(&p, &t2, &t1), 1.0);
        }
    }
}
