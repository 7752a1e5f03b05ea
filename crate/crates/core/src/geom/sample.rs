use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::point::{dot, norm, PointTS, TangentTS};
use crate::error::{Error, Result};

/// A sampled point with two tangent vectors at it.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub point: PointTS,
    pub t1: TangentTS,
    pub t2: TangentTS,
}

/// Seed of the `index`-th independent substream of `seed` (splitmix64).
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

fn unit(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    loop {
        let g = gaussian(rng, len);
        let r = norm(&g);
        if r > 1e-6 {
            return g.iter().map(|v| v / r).collect();
        }
    }
}

fn point_with_radius(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> PointTS {
    let x = unit(rng, n + 1);
    let dir = loop {
        let g = gaussian(rng, n + 1);
        let s = dot(&g, &x);
        let g: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi - s * xi).collect();
        let r = norm(&g);
        if r > 1e-6 {
            break g.iter().map(|v| v / r).collect::<Vec<_>>();
        }
    };
    let y = dir.iter().map(|d| d * radius).collect();
    PointTS::raw(x, y)
}

fn tangent(rng: &mut ChaCha8Rng, p: &PointTS) -> TangentTS {
    let n1 = p.x.len();
    let u = gaussian(rng, n1);
    let s = dot(&u, &p.x);
    let u: Vec<f64> = u.iter().zip(&p.x).map(|(ui, xi)| ui - s * xi).collect();
    let v = gaussian(rng, n1);
    let c = dot(&p.x, &v) + dot(&u, &p.y);
    let v = v.iter().zip(&p.x).map(|(vi, xi)| vi - c * xi).collect();
    TangentTS::raw(u, v)
}

/// `count` seeded samples spread over `DT*Sⁿ`: `x` uniform on the sphere,
/// `y` with uniform direction in `T_xSⁿ` and radius `U^{1/n}`, tangents
/// Gaussian projected onto the linearized constraints.
pub fn sample(n: usize, seed: u64, count: usize) -> Result<Vec<Sample>> {
    check_args(n, count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let r = rng.gen::<f64>().powf(1.0 / n as f64);
            let point = point_with_radius(&mut rng, n, r);
            let t1 = tangent(&mut rng, &point);
            let t2 = tangent(&mut rng, &point);
            Sample { point, t1, t2 }
        })
        .collect())
}

/// Like [`sample`], but with fiber norm uniform in `[r_lo, r_hi]`.
pub fn sample_shell(n: usize, seed: u64, count: usize, r_lo: f64, r_hi: f64) -> Result<Vec<Sample>> {
    check_args(n, count)?;
    if !(0.0 <= r_lo && r_lo <= r_hi && r_hi <= 1.0) {
        return Err(Error::InvalidConfig(format!("bad shell [{r_lo}, {r_hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let r = r_lo + (r_hi - r_lo) * rng.gen::<f64>();
            let point = point_with_radius(&mut rng, n, r);
            let t1 = tangent(&mut rng, &point);
            let t2 = tangent(&mut rng, &point);
            Sample { point, t1, t2 }
        })
        .collect())
}

fn check_args(n: usize, count: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidConfig("sphere dimension must be at least 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidConfig("sample count must be at least 1".into()));
    }
    Ok(())
}
