pub mod aero;
pub mod assembly;
pub mod error;
pub mod hydro;
pub mod kinematics;
pub mod metrics;
pub mod mooring;
pub mod resource;
pub mod synthetic;
pub mod waves;

pub use error::{Error, Result};
