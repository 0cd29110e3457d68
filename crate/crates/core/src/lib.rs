pub mod ambient;
pub mod error;
pub mod intersection;
pub mod kostlan;
pub mod lowdeg;
pub mod topology;

pub use ambient::{AmbientSpace, BundleSystem, Powers};
pub use error::{Error, Result};
pub mod discriminant;
pub mod harness;
