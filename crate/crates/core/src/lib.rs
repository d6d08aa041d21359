pub mod angles;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod modulus;
pub mod nest;
pub mod pipeline;
pub mod presets;
pub mod puzzle;
pub mod report;
pub mod verify;

pub use angles::{alpha_cycle, Angle, AngleCycle};
pub use dynamics::QuadraticMap;
pub use error::{Error, Result};
