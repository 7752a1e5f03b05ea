//! Numeric geometry on the coordinate models `DT*Sⁿ ⊂ ℝⁿ⁺¹ × ℝⁿ⁺¹`.
//!
//! Sign convention: `dλ = Σ dyᵢ ∧ dxᵢ` for `λ = Σ yᵢ dxᵢ`.

mod forms;
mod maps;
mod point;
mod sample;

pub use forms::{numeric_d, volume_eval, FormField};
pub use maps::{
    check_constraints, liouville_defect, pullback_error, pushforward, AmbientMap, FiberScaling, IdentityMap,
    PullbackReport,
};
pub use point::{dlambda_eval, dot, lambda_eval, norm, project, PointTS, TangentTS};
pub use sample::{sample, sample_shell, substream_seed, Sample};
