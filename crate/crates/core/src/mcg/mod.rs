//! Dehn twist words over a curve system, their action on homology, and the
//! first homology of the associated 3-dimensional open book.
//!
//! Sign conventions: a positive twist acts on `H₁` by the transvection
//! `x ↦ x + ⟨x, [c]⟩[c]`, and a word is represented by the product of its
//! letters' matrices in written order, matching the composition
//! `τ_{c₁} ∘ τ_{c₂} ∘ ⋯`.

mod curves;
mod matrix;
mod rewrite;
mod word;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

pub use curves::{blue_curves, default_humphries_system, Chain, Curve, CurveSystem};
pub use matrix::{intersection, symplectic_form, IntMatrix, SpMatrix};
pub use rewrite::{apply_chain_relation, normalize, normalize_with, uses_only, Alphabet, Direction};
pub use word::{CurveRef, ImageCurve, Letter, TwistWord};

use crate::error::Result;

/// Homology action of `τ_c^k`.
pub fn twist_matrix(sys: &CurveSystem, c: &CurveRef, k: i64) -> Result<SpMatrix> {
    let class = sys.class_of(c)?;
    Ok(transvection(&class, k))
}

/// `x ↦ x + k⟨x, c⟩c`, i.e. `I + k · c (Jc)ᵀ`.
pub(crate) fn transvection(c: &[BigInt], k: i64) -> SpMatrix {
    let n = c.len();
    let g = n / 2;
    // (Jc)_j: ⟨x, c⟩ = Σ_j x_j (Jc)_j
    let jc: Vec<BigInt> = (0..n).map(|j| if j < g { c[g + j].clone() } else { -c[j - g].clone() }).collect();
    let k = BigInt::from(k);
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j) + &k * &c[i] * &jc[j];
            m.set(i, j, v);
        }
    }
    SpMatrix::new_unchecked(m)
}

/// Homology representation of a word.
pub fn rho(sys: &CurveSystem, w: &TwistWord) -> Result<SpMatrix> {
    let mut acc = SpMatrix::identity(sys.genus());
    for l in w.letters() {
        acc = &acc * &twist_matrix(sys, &l.curve, l.power)?;
    }
    Ok(acc)
}

/// Whether `w` acts trivially on `H₁(Σ_g, ∂Σ_g)`.
pub fn is_torelli(sys: &CurveSystem, w: &TwistWord) -> Result<bool> {
    Ok(rho(sys, w)?.is_identity())
}

/// `H₁` of the open book `(Σ_g, w)` as `ℤ^free ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for Homology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for Homology {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Homology", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// `coker(ρ(w) − I)` via Smith normal form.
pub fn open_book_homology(sys: &CurveSystem, w: &TwistWord) -> Result<Homology> {
    let m = rho(sys, w)?.into_matrix();
    let diff = m.sub(&IntMatrix::identity(m.rows()));
    Ok(homology_of_diagonal(&diff.smith_diagonal()))
}

pub(crate) fn homology_of_diagonal(diag: &[BigInt]) -> Homology {
    let free_rank = diag.iter().filter(|d| **d == BigInt::from(0)).count();
    let torsion = diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    Homology { free_rank, torsion }
}
