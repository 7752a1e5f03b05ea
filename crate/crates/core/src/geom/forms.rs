//! Differential forms on ambient Euclidean space, evaluated pointwise.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::point::dot;
use crate::error::{Error, Result};

type Evaluator = dyn Fn(&[f64], &[&[f64]]) -> f64 + Send + Sync;

/// A `p`-form on `ℝᴺ`, given by its value on `p` vectors at a point.
///
/// Forms are defined on the whole ambient space (or an open subset of it),
/// so finite differences along constant vector fields are meaningful.
#[derive(Clone)]
pub struct FormField {
    degree: usize,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormField").field("degree", &self.degree).finish_non_exhaustive()
    }
}

impl FormField {
    pub fn new(degree: usize, eval: impl Fn(&[f64], &[&[f64]]) -> f64 + Send + Sync + 'static) -> Self {
        FormField { degree, eval: Arc::new(eval) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, point: &[f64], vectors: &[&[f64]]) -> f64 {
        assert_eq!(vectors.len(), self.degree, "form of degree {} given {} vectors", self.degree, vectors.len());
        (self.eval)(point, vectors)
    }

    /// `λ = Σ yᵢ dxᵢ` on `ℝⁿ⁺¹ × ℝⁿ⁺¹`.
    pub fn liouville(n: usize) -> Self {
        let m = n + 1;
        FormField::new(1, move |p, v| dot(&p[m..], &v[0][..m]))
    }

    /// `dλ = Σ dyᵢ ∧ dxᵢ` on `ℝⁿ⁺¹ × ℝⁿ⁺¹`.
    pub fn liouville_differential(n: usize) -> Self {
        let m = n + 1;
        FormField::new(2, move |_, v| dot(&v[0][m..], &v[1][..m]) - dot(&v[1][m..], &v[0][..m]))
    }
}

/// Exterior derivative by central differences along constant vector fields:
/// `dω(v₀,…,v_p) = Σᵢ (−1)ⁱ ∂_{vᵢ} ω(v₀,…,v̂ᵢ,…,v_p)`.
pub fn numeric_d(form: &FormField, h: f64) -> Result<FormField> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("step h = {h} must be positive")));
    }
    let inner = form.clone();
    let p = form.degree();
    Ok(FormField::new(p + 1, move |point, vecs| {
        let mut acc = 0.0;
        let mut shifted = point.to_vec();
        for i in 0..=p {
            let rest: Vec<&[f64]> = vecs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| *v).collect();
            for (k, s) in shifted.iter_mut().enumerate() {
                *s = point[k] + h * vecs[i][k];
            }
            let plus = inner.eval(&shifted, &rest);
            for (k, s) in shifted.iter_mut().enumerate() {
                *s = point[k] - h * vecs[i][k];
            }
            let minus = inner.eval(&shifted, &rest);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * (plus - minus) / (2.0 * h);
        }
        acc
    }))
}

/// Value of `ω₁ ∧ ω₂ ∧ ⋯` on a basis whose size equals the total degree.
///
/// Sums over every permutation of the basis with its sign and divides by
/// `∏ pᵢ!`, so cost grows like `(Σ pᵢ)!`.
pub fn volume_eval(forms: &[FormField], point: &[f64], basis: &[Vec<f64>]) -> Result<f64> {
    let total: usize = forms.iter().map(FormField::degree).sum();
    if total != basis.len() {
        return Err(Error::Geometry(format!("form degrees sum to {total}, basis has {} vectors", basis.len())));
    }
    let k = basis.len();
    if k > 0 {
        let dim = basis[0].len();
        let gram = DMatrix::from_fn(k, k, |i, j| dot(&basis[i], &basis[j]));
        let det = gram.determinant();
        if !(det.abs() >= 1e-12) || basis.iter().any(|b| b.len() != dim) {
            return Err(Error::Geometry(format!("degenerate basis (Gram determinant {det:e})")));
        }
    }
    let norm: f64 = forms.iter().map(|f| factorial(f.degree())).product();
    let mut sum = 0.0;
    for_each_permutation(k, |perm, sign| {
        let mut term = sign;
        let mut at = 0;
        for f in forms {
            let args: Vec<&[f64]> = perm[at..at + f.degree()].iter().map(|&i| basis[i].as_slice()).collect();
            term *= f.eval(point, &args);
            at += f.degree();
            if term == 0.0 {
                break;
            }
        }
        sum += term;
    });
    Ok(sum / norm)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Visits every permutation of `0..k` with its sign (Heap's algorithm).
pub(crate) fn for_each_permutation(k: usize, mut f: impl FnMut(&[usize], f64)) {
    let mut a: Vec<usize> = (0..k).collect();
    let mut c = vec![0usize; k];
    let mut sign = 1.0;
    f(&a, sign);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            f(&a, sign);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
