//! Profile functions: twist angles, the push-off cutoff, and the binding
//! functions `h₁, h₂`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, LazyLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `χ(u) = exp(1 − 1/(1 − u²))` on `[0, 1)`, `0` beyond. `χ(0) = 1`.
pub fn bump(u: f64) -> f64 {
    let u = u.abs();
    if u >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// `χ′(u)`.
pub fn bump_derivative(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let d = 1.0 - u * u;
        bump(u) * (-2.0 * u / (d * d))
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
static GAUSS: LazyLock<(Vec<f64>, Vec<f64>)> = LazyLock::new(|| gauss_legendre(24));

fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `∫_a^b f` by composite Gauss–Legendre over `panels` equal panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = &*GAUSS;
    let w = (b - a) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * w;
        let mid = lo + 0.5 * w;
        for (x, wt) in nodes.iter().zip(weights) {
            acc += wt * f(mid + 0.5 * w * x);
        }
    }
    acc * 0.5 * w
}

const PANELS: usize = 4;

static BUMP_MASS: LazyLock<f64> = LazyLock::new(|| integrate(bump, 0.0, 1.0, PANELS));

/// `E(u) = ∫₀ᵘ χ / ∫₀¹ χ`: odd, increasing from 0 to 1 on `[0, 1]`, flat at 1.
pub fn ramp(u: f64) -> f64 {
    if u >= 1.0 {
        1.0
    } else if u <= 0.0 {
        0.0
    } else {
        integrate(bump, 0.0, u, PANELS) / *BUMP_MASS
    }
}

/// Shape of a twist-angle profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistShape {
    /// `g_k(s) = kπ (1 − E(s/p₀))`.
    Smooth,
    /// `kπ/2` below `p₀`, then `0`: jumps at `p₀`. Negative control only.
    Broken,
}

/// Twist angle `g_k` as a function of the fiber norm.
///
/// The smooth shape has `g_k(0) = kπ`, `g_k′(0) = −kπ/(p₀ ∫₀¹χ)`, vanishes on
/// `[p₀, ∞)` with every derivative, and `g_k − kπ` is odd near `0`, which
/// keeps the twist smooth across the zero section.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistProfile {
    pub k: i64,
    pub p0: f64,
    pub shape: TwistShape,
}

impl TwistProfile {
    pub fn new(k: i64, p0: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0.is_finite()) {
            return Err(Error::InvalidConfig(format!("twist support p0 = {p0} must be positive")));
        }
        Ok(TwistProfile { k, p0, shape: TwistShape::Smooth })
    }

    pub fn broken(k: i64, p0: f64) -> Result<Self> {
        Ok(TwistProfile { shape: TwistShape::Broken, ..Self::new(k, p0)? })
    }

    pub fn angle(&self, s: f64) -> f64 {
        if self.k == 0 || s >= self.p0 {
            return 0.0;
        }
        let kpi = self.k as f64 * PI;
        match self.shape {
            TwistShape::Smooth => kpi * (1.0 - ramp(s / self.p0)),
            TwistShape::Broken => kpi / 2.0,
        }
    }

    pub fn angle_derivative(&self, s: f64) -> f64 {
        if self.k == 0 || s >= self.p0 {
            return 0.0;
        }
        match self.shape {
            TwistShape::Smooth => -(self.k as f64) * PI * bump(s / self.p0) / (*BUMP_MASS * self.p0),
            TwistShape::Broken => 0.0,
        }
    }

    /// `∫₀ˢ g_k`.
    pub fn angle_integral(&self, s: f64) -> f64 {
        if self.k == 0 {
            return 0.0;
        }
        let s = s.min(self.p0);
        let kpi = self.k as f64 * PI;
        match self.shape {
            TwistShape::Smooth => {
                // ∫₀ᵘ E = u E(u) − (1/∫χ) ∫₀ᵘ τ χ(τ) dτ
                let u = s / self.p0;
                let first = integrate(|t| t * bump(t), 0.0, u, PANELS) / *BUMP_MASS;
                kpi * (s - self.p0 * (u * ramp(u) - first))
            }
            TwistShape::Broken => kpi / 2.0 * s,
        }
    }
}

/// Push-off cutoff `g(s) = ε χ(s/δ)`: `g(0) = ε`, supported in `[0, δ]`,
/// `g(δ/2) = ε e^{−1/3} > ε/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub eps: f64,
    pub delta: f64,
}

impl CutoffProfile {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && delta > 0.0 && eps.is_finite() && delta.is_finite()) {
            return Err(Error::InvalidConfig(format!("cutoff needs eps, delta > 0 (got {eps}, {delta})")));
        }
        Ok(CutoffProfile { eps, delta })
    }

    pub fn value(&self, s: f64) -> f64 {
        self.eps * bump(s / self.delta)
    }

    /// `m₀ = ½ min{ε, δ}`.
    pub fn m0(&self) -> f64 {
        0.5 * self.eps.min(self.delta)
    }
}

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Smooth step: `0` on `(−∞, 0]`, `1` on `[1, ∞)`.
pub fn smoothstep(u: f64) -> f64 {
    let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let (a, b) = (f(u), f(1.0 - u));
    a / (a + b)
}

pub fn smoothstep_derivative(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let f = |t: f64| (-1.0 / t).exp();
    let df = |t: f64| f(t) / (t * t);
    let (a, b) = (f(u), f(1.0 - u));
    (df(u) * b + a * df(1.0 - u)) / ((a + b) * (a + b))
}

/// The binding functions `h₁, h₂` of `β = h₁(r) α + h₂(r) dt` and their
/// derivatives.
#[derive(Clone)]
pub struct BindingProfile {
    pub h1: Scalar,
    pub h2: Scalar,
    pub dh1: Scalar,
    pub dh2: Scalar,
}

impl fmt::Debug for BindingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BindingProfile").finish_non_exhaustive()
    }
}

impl BindingProfile {
    /// `h₁ ≡ e^{1/4}` and `h₂ = r²` on `[0, 1/4]`; `h₁ = e^{1/2−r}`, `h₂ ≡ 1`
    /// on `[1/2, 1]`; blended by a smooth step in between.
    pub fn standard() -> Self {
        let c = 0.25f64.exp();
        let step = |r: f64| smoothstep(4.0 * (r - 0.25));
        let dstep = |r: f64| 4.0 * smoothstep_derivative(4.0 * (r - 0.25));
        BindingProfile {
            h1: Arc::new(move |r| (1.0 - step(r)) * c + step(r) * (0.5 - r).exp()),
            h2: Arc::new(move |r| (1.0 - step(r)) * r * r + step(r)),
            dh1: Arc::new(move |r| dstep(r) * ((0.5 - r).exp() - c) - step(r) * (0.5 - r).exp()),
            dh2: Arc::new(move |r| (1.0 - step(r)) * 2.0 * r + dstep(r) * (1.0 - r * r)),
        }
    }

    /// A profile from `h₁, h₂` alone, differentiated numerically.
    pub fn from_functions(
        h1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        h2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let h1: Scalar = Arc::new(h1);
        let h2: Scalar = Arc::new(h2);
        let d = |f: Scalar| -> Scalar {
            Arc::new(move |r| {
                let h = 1e-6;
                (f(r + h) - f(r - h)) / (2.0 * h)
            })
        };
        BindingProfile { dh1: d(h1.clone()), dh2: d(h2.clone()), h1, h2 }
    }
}
