pub mod embed;
pub mod error;
pub mod geom;
pub mod mcg;
pub mod openbook;
pub mod report;
pub mod verifier;

pub use error::{Error, Result};
pub use report::{Obligation, Report, Status};
