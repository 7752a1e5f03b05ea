//! Concrete twist and push-off maps with the numeric checks behind every
//! certificate obligation.

mod checks;
mod config;
mod contact;
mod maps;
mod profiles;

pub use checks::{
    check_distance_bound, check_support_disjoint, check_twist_symplectic, distance_to_zero_section, adapted_step,
    exactness_witness, twist_samples, DisjointReport, DistanceReport, ExactnessReport, ExactnessWitness,
};
pub use config::{Grid, P0Policy, Tolerances, VerifyConfig};
pub use contact::{tw_contact_check, ContactReport};
pub use maps::{dehn_twist_map, embedding_map, Composite, DehnTwist, EmbeddingMap};
pub use profiles::{
    bump, bump_derivative, integrate, ramp, smoothstep, smoothstep_derivative, BindingProfile, CutoffProfile,
    TwistProfile, TwistShape,
};
