pub mod bounds;
pub mod error;
pub mod generator;
pub mod primes;
pub mod rational;
pub mod reports;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use generator::{generate, RamanujanList, Semantics};
pub use primes::{PrimeTable, TableConfig};
pub use rational::RationalC;
pub use reports::Format;
pub use scalar::Real;

pub type BoundCertificate = bounds::BoundCertificate<f64>;
pub type BoundCertificateF32 = bounds::BoundCertificate<f32>;
pub type DensityReport = stats::DensityReport<f64>;
pub type DensityReportF32 = stats::DensityReport<f32>;
pub type RunReport = stats::RunReport<f64>;
pub type RunReportF32 = stats::RunReport<f32>;
